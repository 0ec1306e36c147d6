//! Weighted tree graphs: star, spider, and Cayley families, plus a cycle
//! fixture for regular-graph tests.
//!
//! Vertex indices are 1-based at every public interface. Storage is 0-based
//! internally and every accessor converts. All family builders place the
//! central vertex at the highest index.
//!
//! Spider numbering: branch `k` (0-based) occupies indices
//! `k*L + 1 ..= k*L + L`, ordered outermost leaf first, so for `S_{3,2}` the
//! leaves are 1, 3, 5 and the center is 7.
//!
//! Cayley numbering is branch-major, outermost level first, center last.
//! For `C_{3,2}` (10 vertices) and `C_{3,3}` (22 vertices):
//!
//! ```text
//!   C_{3,2}  branch 1: leaves 1,2 -> inner 3          center 10
//!   C_{3,3}  branch 1: leaves 1,2 -> 5; leaves 3,4 -> 6; 5,6 -> first-layer 7
//!            branch 2: 8..14, branch 3: 15..21        center 22
//! ```
//!
//! Center edges carry the hopping `J`; every other edge carries the off-center
//! hopping (1 for star/spider, `1/sqrt(coord-1)` for Cayley trees).

use std::fmt;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::scalar::{count, Scalar};

/// Structural role of a vertex inside a built family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Leaf,
    Internal,
    Center,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Leaf => "leaf",
            Role::Internal => "internal",
            Role::Center => "center",
        }
    }
}

/// Graph family selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Star,
    Spider,
    Cayley,
    Cycle,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Star => "star",
            Family::Spider => "spider",
            Family::Cayley => "cayley",
            Family::Cycle => "cycle",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "star" => Ok(Family::Star),
            "spider" => Ok(Family::Spider),
            "cayley" => Ok(Family::Cayley),
            "cycle" => Ok(Family::Cycle),
            other => Err(Error::InvalidSpec(format!("unknown family '{other}'"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters selecting one member of a graph family.
///
/// `branches` is the branch count for star/spider, the coordination number
/// for Cayley trees, and the vertex count for the cycle fixture.
/// `branch_length` is the spider layer count or the Cayley level count
/// (1 for star, unused for cycle).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilySpec<T> {
    pub family: Family,
    pub branches: usize,
    pub branch_length: usize,
    pub central_hopping: T,
    pub off_hopping: T,
}

impl<T: Scalar> FamilySpec<T> {
    pub fn star(branches: usize, central_hopping: T) -> Self {
        FamilySpec {
            family: Family::Star,
            branches,
            branch_length: 1,
            central_hopping,
            off_hopping: T::one(),
        }
    }

    pub fn spider(branches: usize, branch_length: usize, central_hopping: T) -> Self {
        FamilySpec {
            family: Family::Spider,
            branches,
            branch_length,
            central_hopping,
            off_hopping: T::one(),
        }
    }

    pub fn cayley(coordination: usize, levels: usize, central_hopping: T) -> Self {
        let off = if coordination > 1 {
            count::<T>(coordination - 1).sqrt().recip()
        } else {
            T::one()
        };
        FamilySpec {
            family: Family::Cayley,
            branches: coordination,
            branch_length: levels,
            central_hopping,
            off_hopping: off,
        }
    }

    pub fn cycle(vertices: usize, weight: T) -> Self {
        FamilySpec {
            family: Family::Cycle,
            branches: vertices,
            branch_length: 1,
            central_hopping: weight,
            off_hopping: weight,
        }
    }

    /// Replace the central hopping, keeping everything else (used by sweeps).
    pub fn with_central_hopping(mut self, j: T) -> Self {
        self.central_hopping = j;
        if self.family == Family::Cycle {
            self.off_hopping = j;
        }
        self
    }

    /// Check the constraints on a user-facing spec (`J >= 1`, finite nonzero
    /// weights, per-family shape restrictions).
    pub fn validate(&self) -> Result<()> {
        let j = self.central_hopping;
        let off = self.off_hopping;
        if !j.is_finite() || j == T::zero() || !off.is_finite() || off == T::zero() {
            return Err(Error::InvalidSpec(
                "hoppings must be finite and nonzero".into(),
            ));
        }
        match self.family {
            Family::Star => {
                if self.branches == 0 {
                    return Err(Error::InvalidSpec("star needs branches >= 1".into()));
                }
                if self.branch_length != 1 {
                    return Err(Error::InvalidSpec("star requires branch_length = 1".into()));
                }
            }
            Family::Spider => {
                if self.branches == 0 {
                    return Err(Error::InvalidSpec("spider needs branches >= 1".into()));
                }
                if !(1..=3).contains(&self.branch_length) {
                    return Err(Error::InvalidSpec(format!(
                        "unsupported spider branch length {} (supported: 1, 2, 3)",
                        self.branch_length
                    )));
                }
            }
            Family::Cayley => {
                if self.branches != 3 {
                    return Err(Error::InvalidSpec(format!(
                        "unsupported Cayley coordination {} (supported: 3)",
                        self.branches
                    )));
                }
                if !(2..=3).contains(&self.branch_length) {
                    return Err(Error::InvalidSpec(format!(
                        "unsupported Cayley level count {} (supported: 2, 3)",
                        self.branch_length
                    )));
                }
            }
            Family::Cycle => {
                if self.branches < 3 {
                    return Err(Error::InvalidSpec("cycle needs at least 3 vertices".into()));
                }
            }
        }
        if j < T::one() && self.family != Family::Cycle {
            return Err(Error::InvalidSpec(format!(
                "central hopping must satisfy J >= 1, got {j}"
            )));
        }
        Ok(())
    }

    /// Build the graph this spec describes.
    pub fn build(&self) -> Result<WeightedGraph<T>> {
        self.validate()?;
        match self.family {
            Family::Star => build_star(self.branches, self.central_hopping),
            Family::Spider => build_spider(
                self.branches,
                self.branch_length,
                self.central_hopping,
                self.off_hopping,
            ),
            Family::Cayley => build_cayley(
                self.branches,
                self.branch_length,
                self.central_hopping,
                self.off_hopping,
            ),
            Family::Cycle => build_cycle(self.branches, self.off_hopping),
        }
    }

    /// Short human-readable tag, e.g. `spider_3_2`.
    pub fn label(&self) -> String {
        match self.family {
            Family::Star => format!("star_{}", self.branches),
            Family::Spider => format!("spider_{}_{}", self.branches, self.branch_length),
            Family::Cayley => format!("cayley_{}_{}", self.branches, self.branch_length),
            Family::Cycle => format!("cycle_{}", self.branches),
        }
    }
}

/// Undirected graph with symmetric real edge weights; the walk arena.
///
/// Each unordered edge is stored once with a nonzero weight and no self-loops
/// are allowed. Graphs are immutable after construction and safe to share
/// across threads.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph<T> {
    num_vertices: usize,
    /// 0-based endpoints with `i < j`, sorted lexicographically.
    edges: Vec<(usize, usize, T)>,
    roles: Option<Vec<Role>>,
    family: Option<FamilySpec<T>>,
}

impl<T: Scalar> WeightedGraph<T> {
    /// Build a graph from 1-based edge triples `(i, j, weight)`.
    pub fn from_edges(num_vertices: usize, edges: &[(usize, usize, T)]) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::InvalidSpec("graph needs at least one vertex".into()));
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for &(i, j, w) in edges {
            if i == 0 || i > num_vertices {
                return Err(Error::VertexOutOfRange {
                    vertex: i,
                    num_vertices,
                });
            }
            if j == 0 || j > num_vertices {
                return Err(Error::VertexOutOfRange {
                    vertex: j,
                    num_vertices,
                });
            }
            if i == j {
                return Err(Error::InvalidSpec(format!("self-loop at vertex {i}")));
            }
            if w == T::zero() || !w.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "edge ({i}, {j}) has non-finite or zero weight"
                )));
            }
            let (a, b) = if i < j { (i - 1, j - 1) } else { (j - 1, i - 1) };
            normalized.push((a, b, w));
        }
        normalized.sort_by_key(|x| (x.0, x.1));
        if normalized.windows(2).any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::InvalidSpec("duplicate edge".into()));
        }
        Ok(WeightedGraph {
            num_vertices,
            edges: normalized,
            roles: None,
            family: None,
        })
    }

    fn with_roles(mut self, roles: Vec<Role>, family: FamilySpec<T>) -> Self {
        debug_assert_eq!(roles.len(), self.num_vertices);
        self.roles = Some(roles);
        self.family = Some(family);
        self
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as 1-based `(i, j, weight)` triples with `i < j`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.edges.iter().map(|&(i, j, w)| (i + 1, j + 1, w))
    }

    /// Weight of the edge between 1-based vertices `i` and `j`, if present.
    pub fn weight(&self, i: usize, j: usize) -> Option<T> {
        if i == 0 || j == 0 || i > self.num_vertices || j > self.num_vertices || i == j {
            return None;
        }
        let key = if i < j { (i - 1, j - 1) } else { (j - 1, i - 1) };
        self.edges
            .iter()
            .find(|&&(a, b, _)| (a, b) == key)
            .map(|&(_, _, w)| w)
    }

    /// Adjacency matrix: `A[i][j] = weight(i, j)` or 0; symmetric, zero diagonal.
    pub fn adjacency(&self) -> Array2<T> {
        let n = self.num_vertices;
        let mut a = Array2::zeros((n, n));
        for &(i, j, w) in &self.edges {
            a[[i, j]] = w;
            a[[j, i]] = w;
        }
        a
    }

    /// Diagonal degree matrix `D[i][i] = sum_j weight(i, j)`.
    pub fn degree_matrix(&self) -> Array2<T> {
        let n = self.num_vertices;
        let mut d = Array2::zeros((n, n));
        for &(i, j, w) in &self.edges {
            d[[i, i]] += w;
            d[[j, j]] += w;
        }
        d
    }

    /// Graph Laplacian in the `L = A - D` sign convention, so its diagonal is
    /// `-degree` and off-diagonal entries are the raw weights.
    pub fn laplacian(&self) -> Array2<T> {
        let mut l = self.adjacency();
        let d = self.degree_matrix();
        for i in 0..self.num_vertices {
            l[[i, i]] -= d[[i, i]];
        }
        l
    }

    /// Weighted degree (row sum of the adjacency) of a 1-based vertex.
    pub fn degree(&self, v: usize) -> Result<T> {
        self.check_vertex(v)?;
        let v0 = v - 1;
        let mut sum = T::zero();
        for &(i, j, w) in &self.edges {
            if i == v0 || j == v0 {
                sum += w;
            }
        }
        Ok(sum)
    }

    /// Number of incident edges of a 1-based vertex.
    pub fn unweighted_degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        let v0 = v - 1;
        Ok(self.edges.iter().filter(|&&(i, j, _)| i == v0 || j == v0).count())
    }

    pub fn roles(&self) -> Option<&[Role]> {
        self.roles.as_deref()
    }

    pub fn role(&self, v: usize) -> Result<Option<Role>> {
        self.check_vertex(v)?;
        Ok(self.roles.as_ref().map(|r| r[v - 1]))
    }

    /// Family spec this graph was built from, when it came from a builder.
    pub fn family(&self) -> Option<&FamilySpec<T>> {
        self.family.as_ref()
    }

    /// Central vertex (1-based). Builders always place it last; hand-built
    /// graphs and cycles have none.
    pub fn center(&self) -> Option<usize> {
        let roles = self.roles.as_ref()?;
        roles.iter().position(|&r| r == Role::Center).map(|i| i + 1)
    }

    /// Leaf vertices in ascending order (1-based). Uses role tags when the
    /// graph came from a builder, otherwise falls back to unit edge count.
    pub fn leaves(&self) -> Vec<usize> {
        match &self.roles {
            Some(roles) => roles
                .iter()
                .enumerate()
                .filter(|(_, &r)| r == Role::Leaf)
                .map(|(i, _)| i + 1)
                .collect(),
            None => (1..=self.num_vertices)
                .filter(|&v| self.unweighted_degree(v).unwrap_or(0) == 1)
                .collect(),
        }
    }

    pub fn is_leaf(&self, v: usize) -> Result<bool> {
        match self.role(v)? {
            Some(role) => Ok(role == Role::Leaf),
            None => Ok(self.unweighted_degree(v)? == 1),
        }
    }

    /// Breadth-first connectivity check.
    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices;
        if n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for &(i, j, _) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        let mut visited = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    visited += 1;
                    queue.push_back(v);
                }
            }
        }
        visited == n
    }

    /// Connected with `|E| = |V| - 1`.
    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.num_vertices && self.is_connected()
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.num_vertices {
            Err(Error::VertexOutOfRange {
                vertex: v,
                num_vertices: self.num_vertices,
            })
        } else {
            Ok(())
        }
    }
}

/// Star graph `S_n`: `n` leaves joined to one center, every edge weighted `J`.
///
/// Leaves are 1..=n, the center is `n + 1`.
pub fn build_star<T: Scalar>(n: usize, j: T) -> Result<WeightedGraph<T>> {
    if n == 0 {
        return Err(Error::InvalidSpec("star needs at least one leaf".into()));
    }
    if j == T::zero() || !j.is_finite() {
        return Err(Error::InvalidSpec("central hopping must be finite and nonzero".into()));
    }
    let center = n + 1;
    let edges: Vec<_> = (1..=n).map(|k| (k, center, j)).collect();
    let mut roles = vec![Role::Leaf; n];
    roles.push(Role::Center);
    Ok(WeightedGraph::from_edges(center, &edges)?
        .with_roles(roles, FamilySpec::star(n, j)))
}

/// Spider graph `S_{b,L}`: `b` chains of `L` vertices joined to one center.
///
/// Branch `k` (0-based) occupies indices `k*L + 1 ..= k*L + L`, outermost leaf
/// first; within a branch edges carry `off`, and the innermost vertex joins
/// the center `b*L + 1` with weight `j`. `L = 1` reduces to the star layout.
pub fn build_spider<T: Scalar>(b: usize, l: usize, j: T, off: T) -> Result<WeightedGraph<T>> {
    if b == 0 {
        return Err(Error::InvalidSpec("spider needs at least one branch".into()));
    }
    if !(1..=3).contains(&l) {
        return Err(Error::InvalidSpec(format!(
            "unsupported spider branch length {l} (supported: 1, 2, 3)"
        )));
    }
    if j == T::zero() || !j.is_finite() || off == T::zero() || !off.is_finite() {
        return Err(Error::InvalidSpec("hoppings must be finite and nonzero".into()));
    }
    let center = b * l + 1;
    let mut edges = Vec::with_capacity(b * l);
    let mut roles = vec![Role::Internal; center];
    for branch in 0..b {
        let base = branch * l + 1;
        roles[base - 1] = Role::Leaf;
        for p in 0..l - 1 {
            edges.push((base + p, base + p + 1, off));
        }
        edges.push((base + l - 1, center, j));
    }
    roles[center - 1] = Role::Center;
    let mut spec = FamilySpec::spider(b, l, j);
    spec.off_hopping = off;
    Ok(WeightedGraph::from_edges(center, &edges)?.with_roles(roles, spec))
}

/// Cayley tree `C_{3,m}` with `m` in {2, 3} radial levels.
///
/// Numbering is branch-major, outermost level first, center last (see the
/// module docs for the explicit layout). Center edges carry `j`; all other
/// edges carry `off` (`1/sqrt(2)` reproduces the spider reduction).
pub fn build_cayley<T: Scalar>(
    coordination: usize,
    levels: usize,
    j: T,
    off: T,
) -> Result<WeightedGraph<T>> {
    if coordination != 3 {
        return Err(Error::InvalidSpec(format!(
            "unsupported Cayley coordination {coordination} (supported: 3)"
        )));
    }
    if !(2..=3).contains(&levels) {
        return Err(Error::InvalidSpec(format!(
            "unsupported Cayley level count {levels} (supported: 2, 3)"
        )));
    }
    if j == T::zero() || !j.is_finite() || off == T::zero() || !off.is_finite() {
        return Err(Error::InvalidSpec("hoppings must be finite and nonzero".into()));
    }
    let branch_size = if levels == 2 { 3 } else { 7 };
    let num_vertices = 3 * branch_size + 1;
    let center = num_vertices;
    let mut edges = Vec::new();
    let mut roles = vec![Role::Internal; num_vertices];
    for branch in 0..3 {
        let base = branch * branch_size; // 0-based offset; vertices below are 1-based
        if levels == 2 {
            let (leaf_a, leaf_b, inner) = (base + 1, base + 2, base + 3);
            edges.push((leaf_a, inner, off));
            edges.push((leaf_b, inner, off));
            edges.push((inner, center, j));
            roles[leaf_a - 1] = Role::Leaf;
            roles[leaf_b - 1] = Role::Leaf;
        } else {
            let leaves = [base + 1, base + 2, base + 3, base + 4];
            let second = [base + 5, base + 6];
            let first = base + 7;
            for (idx, &leaf) in leaves.iter().enumerate() {
                edges.push((leaf, second[idx / 2], off));
                roles[leaf - 1] = Role::Leaf;
            }
            edges.push((second[0], first, off));
            edges.push((second[1], first, off));
            edges.push((first, center, j));
        }
    }
    roles[center - 1] = Role::Center;
    let mut spec = FamilySpec::cayley(coordination, levels, j);
    spec.off_hopping = off;
    Ok(WeightedGraph::from_edges(num_vertices, &edges)?.with_roles(roles, spec))
}

/// Cycle on `k >= 3` vertices with uniform weight `w`; the regular-graph
/// fixture for adjacency-versus-Laplacian equivalence tests.
pub fn build_cycle<T: Scalar>(k: usize, w: T) -> Result<WeightedGraph<T>> {
    if k < 3 {
        return Err(Error::InvalidSpec("cycle needs at least 3 vertices".into()));
    }
    if w == T::zero() || !w.is_finite() {
        return Err(Error::InvalidSpec("cycle weight must be finite and nonzero".into()));
    }
    let mut edges: Vec<_> = (1..k).map(|i| (i, i + 1, w)).collect();
    edges.push((1, k, w));
    let roles = vec![Role::Internal; k];
    Ok(WeightedGraph::from_edges(k, &edges)?.with_roles(roles, FamilySpec::cycle(k, w)))
}

/// Off-center hopping that maps a Cayley tree onto a spider: `1/sqrt(n-1)`.
pub fn cayley_mapping_weight<T: Scalar>(coordination: usize) -> T {
    count::<T>(coordination - 1).sqrt().recip()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_layout_matches_definition() {
        let g = build_star::<f64>(3, 1.0).unwrap();
        assert_eq!(g.num_vertices(), 4);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.center(), Some(4));
        assert_eq!(g.leaves(), vec![1, 2, 3]);
        assert!(g.is_tree());
        for w in g.edges().map(|(_, _, w)| w) {
            assert_eq!(w, 1.0);
        }
    }

    #[test]
    fn smallest_star_is_a_single_edge() {
        let g = build_star::<f64>(1, 1.0).unwrap();
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.weight(1, 2), Some(1.0));
    }

    #[test]
    fn star_adjacency_row_of_center() {
        let g = build_star::<f64>(3, 10.0).unwrap();
        let a = g.adjacency();
        assert_eq!(a.row(3).to_vec(), vec![10.0, 10.0, 10.0, 0.0]);
        assert_eq!(a.column(3).to_vec(), vec![10.0, 10.0, 10.0, 0.0]);
    }

    #[test]
    fn zero_branch_star_rejected() {
        assert!(build_star::<f64>(0, 1.0).is_err());
    }

    #[test]
    fn spider_3_2_edges() {
        let g = build_spider::<f64>(3, 2, 1.0, 1.0).unwrap();
        assert_eq!(g.num_vertices(), 7);
        for (i, j) in [(1, 2), (3, 4), (5, 6)] {
            assert_eq!(g.weight(i, j), Some(1.0));
        }
        for i in [2, 4, 6] {
            assert_eq!(g.weight(i, 7), Some(1.0));
        }
        assert_eq!(g.leaves(), vec![1, 3, 5]);
        assert!(g.is_tree());
    }

    #[test]
    fn spider_3_3_inner_vertex_neighbors() {
        let g = build_spider::<f64>(3, 3, 10.0, 1.0).unwrap();
        assert_eq!(g.num_vertices(), 10);
        assert_eq!(g.weight(3, 2), Some(1.0));
        assert_eq!(g.weight(3, 10), Some(10.0));
        assert_eq!(g.weight(3, 1), None);
    }

    #[test]
    fn single_branch_spider_is_a_path() {
        let g = build_spider::<f64>(1, 2, 1.0, 1.0).unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.weight(1, 2), Some(1.0));
        assert_eq!(g.weight(2, 3), Some(1.0));
        assert_eq!(g.leaves(), vec![1]);
    }

    #[test]
    fn spider_length_one_matches_star_structure() {
        let spider = build_spider::<f64>(4, 1, 2.0, 1.0).unwrap();
        let star = build_star::<f64>(4, 2.0).unwrap();
        assert_eq!(spider.adjacency(), star.adjacency());
        assert_eq!(spider.family().unwrap().family, Family::Spider);
    }

    #[test]
    fn unsupported_spider_length_rejected() {
        assert!(build_spider::<f64>(3, 4, 1.0, 1.0).is_err());
        assert!(build_spider::<f64>(3, 0, 1.0, 1.0).is_err());
    }

    #[test]
    fn cayley_degree_sums() {
        let off = 1.0 / 2.0f64.sqrt();
        let g = build_cayley::<f64>(3, 2, 5.0, off).unwrap();
        assert_eq!(g.num_vertices(), 10);
        assert_eq!(g.edge_count(), 9);
        assert!(g.is_tree());
        assert!((g.degree(10).unwrap() - 15.0).abs() < 1e-14);
        // first layer: J + 2 off = J + sqrt(2)
        assert!((g.degree(3).unwrap() - (5.0 + 2.0f64.sqrt())).abs() < 1e-14);
        assert!((g.degree(1).unwrap() - off).abs() < 1e-15);

        let g3 = build_cayley::<f64>(3, 3, 5.0, off).unwrap();
        assert_eq!(g3.num_vertices(), 22);
        assert!(g3.is_tree());
        // second layer has three off-weight edges: 3/sqrt(2)
        assert!((g3.degree(5).unwrap() - 3.0 * off).abs() < 1e-14);
        assert!((g3.degree(1).unwrap() - off).abs() < 1e-15);
        assert!((g3.degree(7).unwrap() - (5.0 + 2.0 * off)).abs() < 1e-14);
        assert_eq!(g3.leaves().len(), 12);
        assert_eq!(
            g3.leaves()[..4],
            [1, 2, 3, 4],
            "branch-1 leaves must be contiguous"
        );
    }

    #[test]
    fn unsupported_cayley_rejected() {
        assert!(build_cayley::<f64>(4, 2, 1.0, 1.0).is_err());
        assert!(build_cayley::<f64>(3, 4, 1.0, 1.0).is_err());
    }

    #[test]
    fn cycle_is_regular() {
        let g = build_cycle::<f64>(4, 1.0).unwrap();
        assert_eq!(g.edge_count(), 4);
        for v in 1..=4 {
            assert!((g.degree(v).unwrap() - 2.0).abs() < 1e-15);
        }
        let tri = build_cycle::<f64>(3, 2.0).unwrap();
        for v in 1..=3 {
            assert!((tri.degree(v).unwrap() - 4.0).abs() < 1e-15);
        }
        assert!(build_cycle::<f64>(2, 1.0).is_err());
    }

    #[test]
    fn degree_matrix_and_laplacian() {
        let g = build_star::<f64>(3, 2.0).unwrap();
        let d = g.degree_matrix();
        assert_eq!(d[[0, 0]], 2.0);
        assert_eq!(d[[3, 3]], 6.0);
        let l = g.laplacian();
        assert_eq!(l[[3, 3]], -6.0);
        assert_eq!(l[[0, 3]], 2.0);

        let spider = build_spider::<f64>(3, 2, 10.0, 1.0).unwrap();
        let d = spider.degree_matrix();
        assert_eq!(d[[6, 6]], 30.0);
        assert_eq!(d[[1, 1]], 11.0);

        let cyc = build_cycle::<f64>(4, 1.0).unwrap();
        let expected = cyc.adjacency() - Array2::<f64>::eye(4) * 2.0;
        assert_eq!(cyc.laplacian(), expected);
    }

    #[test]
    fn one_vertex_graph_has_zero_adjacency() {
        let g = WeightedGraph::<f64>::from_edges(1, &[]).unwrap();
        let a = g.adjacency();
        assert_eq!(a.shape(), &[1, 1]);
        assert_eq!(a[[0, 0]], 0.0);
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(WeightedGraph::<f64>::from_edges(2, &[(1, 1, 1.0)]).is_err());
        assert!(WeightedGraph::<f64>::from_edges(2, &[(1, 3, 1.0)]).is_err());
        assert!(WeightedGraph::<f64>::from_edges(2, &[(1, 2, 0.0)]).is_err());
        assert!(WeightedGraph::<f64>::from_edges(2, &[(1, 2, 1.0), (2, 1, 1.0)]).is_err());
    }

    #[test]
    fn family_spec_validation() {
        assert!(FamilySpec::star(3, 1.0f64).validate().is_ok());
        assert!(FamilySpec::star(3, 0.5f64).validate().is_err());
        assert!(FamilySpec::spider(3, 2, 1.0f64).validate().is_ok());
        assert!(FamilySpec::cayley(3, 2, 1.0f64).validate().is_ok());
        assert!(FamilySpec::cycle(4, 0.5f64).validate().is_ok());
        let mut bad = FamilySpec::star(3, 1.0f64);
        bad.branch_length = 2;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn cayley_default_off_hopping() {
        let spec = FamilySpec::cayley(3, 2, 1.0f64);
        assert!((spec.off_hopping - 1.0 / 2.0f64.sqrt()).abs() < 1e-15);
    }
}
