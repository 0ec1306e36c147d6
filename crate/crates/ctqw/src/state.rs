//! Walker states: basis vectors, leaf superpositions, and the phased and
//! branch states used in zero-transfer runs.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::graph::{Family, WeightedGraph};
use crate::scalar::{count, real, Scalar};

/// Complex amplitude per vertex with unit norm; a pure walker state.
///
/// Construction rejects non-normalized input instead of renormalizing, so
/// callers control norms explicitly.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Scalar> StateVector<T> {
    /// Wrap raw amplitudes; `sum |a|^2` must be 1 within [`Scalar::STATE_NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm_sq = amplitudes.iter().map(|a| a.norm_sqr()).fold(T::zero(), |s, x| s + x);
        if (norm_sq - T::one()).abs() > T::STATE_NORM_TOL {
            return Err(Error::NotNormalized {
                norm_sq: norm_sq.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(StateVector { amplitudes })
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// Amplitude on a 1-based vertex.
    pub fn amplitude(&self, v: usize) -> Result<Complex<T>> {
        if v == 0 || v > self.amplitudes.len() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                num_vertices: self.amplitudes.len(),
            });
        }
        Ok(self.amplitudes[v - 1])
    }

    /// `|amplitude|^2` on a 1-based vertex.
    pub fn probability(&self, v: usize) -> Result<T> {
        Ok(self.amplitude(v)?.norm_sqr())
    }

    pub fn norm_sq(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).fold(T::zero(), |s, x| s + x)
    }

    pub(crate) fn from_amplitudes_unchecked(amplitudes: Vec<Complex<T>>) -> Self {
        StateVector { amplitudes }
    }
}

/// State localized on one 1-based vertex.
pub fn basis_state<T: Scalar>(g: &WeightedGraph<T>, v: usize) -> Result<StateVector<T>> {
    g.check_vertex(v)?;
    let mut amps = vec![Complex::new(T::zero(), T::zero()); g.num_vertices()];
    amps[v - 1] = Complex::new(T::one(), T::zero());
    Ok(StateVector::from_amplitudes_unchecked(amps))
}

/// Superposition supported on the listed leaf vertices.
///
/// Every listed vertex must be a leaf, listed once, and the coefficient
/// norm-square sum must already be 1 within [`Scalar::STATE_NORM_TOL`];
/// anything else is rejected.
pub fn leaf_superposition<T: Scalar>(
    g: &WeightedGraph<T>,
    coefficients: &[(usize, Complex<T>)],
) -> Result<StateVector<T>> {
    let mut amps = vec![Complex::new(T::zero(), T::zero()); g.num_vertices()];
    let mut seen = vec![false; g.num_vertices()];
    let mut norm_sq = T::zero();
    for &(v, c) in coefficients {
        g.check_vertex(v)?;
        if !g.is_leaf(v)? {
            return Err(Error::NotLeaf { vertex: v });
        }
        if seen[v - 1] {
            return Err(Error::DuplicateVertex { vertex: v });
        }
        seen[v - 1] = true;
        amps[v - 1] = c;
        norm_sq += c.norm_sqr();
    }
    if (norm_sq - T::one()).abs() > T::STATE_NORM_TOL {
        return Err(Error::NotNormalized {
            norm_sq: norm_sq.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(StateVector::from_amplitudes_unchecked(amps))
}

/// Phase-winding leaf state `e^{2 pi i k / b} / sqrt(b)` on the leaf of branch
/// `k`, for a spider built by [`crate::graph::build_spider`].
///
/// The amplitudes sum to zero for `b >= 2` (roots of unity), which makes the
/// center-vertex probability vanish identically.
pub fn phased_leaf_state<T: Scalar>(
    g: &WeightedGraph<T>,
    branches: usize,
    branch_length: usize,
) -> Result<StateVector<T>> {
    let spec = g.family().ok_or(Error::WrongFamily { expected: "spider" })?;
    if spec.family != Family::Spider
        || spec.branches != branches
        || spec.branch_length != branch_length
    {
        return Err(Error::WrongFamily { expected: "spider" });
    }
    phased_over_leaves(g)
}

/// Phase-winding state over the ordered leaves of a star or spider graph.
pub(crate) fn phased_over_leaves<T: Scalar>(g: &WeightedGraph<T>) -> Result<StateVector<T>> {
    let leaves = g.leaves();
    if leaves.is_empty() {
        return Err(Error::InvalidSpec("graph has no leaves".into()));
    }
    let b = count::<T>(leaves.len());
    let scale = b.sqrt().recip();
    let mut amps = vec![Complex::new(T::zero(), T::zero()); g.num_vertices()];
    for (k, &v) in leaves.iter().enumerate() {
        let phase = real::<T>(2.0) * T::PI() * count::<T>(k) / b;
        amps[v - 1] = Complex::from_polar(scale, phase);
    }
    StateVector::new(amps)
}

/// Fair superposition of the branch-1 leaves of a Cayley tree: amplitude
/// `1/sqrt((coord-1)^(levels-1))` on each.
pub fn cayley_branch_state<T: Scalar>(g: &WeightedGraph<T>) -> Result<StateVector<T>> {
    let spec = g.family().ok_or(Error::WrongFamily { expected: "cayley" })?;
    if spec.family != Family::Cayley {
        return Err(Error::WrongFamily { expected: "cayley" });
    }
    let per_branch = (spec.branches - 1).pow((spec.branch_length - 1) as u32);
    let leaves = g.leaves();
    debug_assert_eq!(leaves.len(), spec.branches * per_branch);
    let amp = Complex::new(count::<T>(per_branch).sqrt().recip(), T::zero());
    let mut amps = vec![Complex::new(T::zero(), T::zero()); g.num_vertices()];
    for &v in leaves.iter().take(per_branch) {
        amps[v - 1] = amp;
    }
    StateVector::new(amps)
}

/// Initial-state recipe resolved against a concrete graph; the tagged union
/// behind the CLI `--state` flag and the sweep drivers.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialState<T> {
    /// `|v>` on a 1-based vertex.
    Basis(usize),
    /// Equal real amplitudes on every leaf.
    BalancedLeaves,
    /// Roots-of-unity phases over the leaves (star or spider only).
    PhasedLeaves,
    /// Fair superposition of the branch-1 leaves of a Cayley tree.
    CayleyBranch,
    /// Explicit amplitude list, one per vertex; must be unit norm.
    Amplitudes(Vec<Complex<T>>),
}

impl<T: Scalar> InitialState<T> {
    pub fn build(&self, g: &WeightedGraph<T>) -> Result<StateVector<T>> {
        match self {
            InitialState::Basis(v) => basis_state(g, *v),
            InitialState::BalancedLeaves => {
                let leaves = g.leaves();
                if leaves.is_empty() {
                    return Err(Error::InvalidSpec("graph has no leaves".into()));
                }
                let amp = Complex::new(count::<T>(leaves.len()).sqrt().recip(), T::zero());
                let mut amps = vec![Complex::new(T::zero(), T::zero()); g.num_vertices()];
                for &v in &leaves {
                    amps[v - 1] = amp;
                }
                StateVector::new(amps)
            }
            InitialState::PhasedLeaves => {
                match g.family().map(|s| s.family) {
                    Some(Family::Star) | Some(Family::Spider) => phased_over_leaves(g),
                    _ => Err(Error::WrongFamily { expected: "star or spider" }),
                }
            }
            InitialState::CayleyBranch => cayley_branch_state(g),
            InitialState::Amplitudes(amps) => {
                if amps.len() != g.num_vertices() {
                    return Err(Error::DimensionMismatch {
                        expected: g.num_vertices(),
                        found: amps.len(),
                    });
                }
                StateVector::new(amps.clone())
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            InitialState::Basis(v) => format!("basis:{v}"),
            InitialState::BalancedLeaves => "balanced".into(),
            InitialState::PhasedLeaves => "phased".into(),
            InitialState::CayleyBranch => "cayley-branch".into(),
            InitialState::Amplitudes(_) => "explicit".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_cayley, build_spider, build_star};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn basis_state_layout() {
        let g = build_star::<f64>(3, 1.0).unwrap();
        let psi = basis_state(&g, 1).unwrap();
        assert_eq!(psi.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let spider = build_spider::<f64>(3, 2, 1.0, 1.0).unwrap();
        let center = basis_state(&spider, 7).unwrap();
        assert_eq!(center.probability(7).unwrap(), 1.0);
        assert!(basis_state(&g, 0).is_err());
        assert!(basis_state(&g, 5).is_err());
    }

    #[test]
    fn balanced_three_leaf_states() {
        let r = 1.0 / 3.0f64.sqrt();
        let g2 = build_spider::<f64>(3, 2, 1.0, 1.0).unwrap();
        let psi = leaf_superposition(&g2, &[(1, c(r, 0.0)), (3, c(r, 0.0)), (5, c(r, 0.0))]).unwrap();
        assert!((psi.norm_sq() - 1.0).abs() < 1e-12);
        assert_eq!(psi.amplitude(2).unwrap(), c(0.0, 0.0));

        let g3 = build_spider::<f64>(3, 3, 1.0, 1.0).unwrap();
        let psi = leaf_superposition(&g3, &[(1, c(r, 0.0)), (4, c(r, 0.0)), (7, c(r, 0.0))]).unwrap();
        assert!((psi.probability(1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn leaf_superposition_rejects_non_leaves_and_bad_norms() {
        let g = build_spider::<f64>(3, 2, 1.0, 1.0).unwrap();
        // vertex 2 is internal, vertex 7 the center
        assert!(matches!(
            leaf_superposition(&g, &[(2, c(1.0, 0.0))]),
            Err(Error::NotLeaf { vertex: 2 })
        ));
        assert!(leaf_superposition(&g, &[(7, c(1.0, 0.0))]).is_err());
        // non-normalized input is rejected, not rescaled
        assert!(matches!(
            leaf_superposition(&g, &[(1, c(0.5, 0.0))]),
            Err(Error::NotNormalized { .. })
        ));
        let r = 1.0 / 2.0f64.sqrt();
        assert!(matches!(
            leaf_superposition(&g, &[(1, c(r, 0.0)), (1, c(r, 0.0))]),
            Err(Error::DuplicateVertex { vertex: 1 })
        ));
    }

    #[test]
    fn antisymmetric_pair_sums_to_zero() {
        let g = build_star::<f64>(2, 1.0).unwrap();
        let r = 1.0 / 2.0f64.sqrt();
        let psi = leaf_superposition(&g, &[(1, c(r, 0.0)), (2, c(-r, 0.0))]).unwrap();
        let total: Complex<f64> = psi.amplitudes().iter().sum();
        assert!(total.norm() < 1e-15);
    }

    #[test]
    fn phased_state_amplitudes() {
        let g = build_spider::<f64>(3, 2, 1.0, 1.0).unwrap();
        let psi = phased_leaf_state(&g, 3, 2).unwrap();
        let r = 1.0 / 3.0f64.sqrt();
        let omega = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!((psi.amplitude(1).unwrap() - c(r, 0.0)).norm() < 1e-15);
        assert!((psi.amplitude(3).unwrap() - omega * r).norm() < 1e-15);
        assert!((psi.amplitude(5).unwrap() - omega * omega * r).norm() < 1e-15);
        // two branches: (|1> - |3>)/sqrt(2)
        let g2 = build_spider::<f64>(2, 2, 1.0, 1.0).unwrap();
        let psi2 = phased_leaf_state(&g2, 2, 2).unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        assert!((psi2.amplitude(1).unwrap() - c(s, 0.0)).norm() < 1e-15);
        assert!((psi2.amplitude(3).unwrap() - c(-s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn phased_state_sums_to_zero() {
        let g = build_spider::<f64>(4, 3, 1.0, 1.0).unwrap();
        let psi = phased_leaf_state(&g, 4, 3).unwrap();
        let total: Complex<f64> = psi.amplitudes().iter().sum();
        assert!(total.norm() < 1e-14);
    }

    #[test]
    fn phased_state_requires_matching_spider() {
        let star = build_star::<f64>(3, 1.0).unwrap();
        assert!(phased_leaf_state(&star, 3, 1).is_err());
        let g = build_spider::<f64>(3, 2, 1.0, 1.0).unwrap();
        assert!(phased_leaf_state(&g, 4, 2).is_err());
    }

    #[test]
    fn cayley_branch_states() {
        let off = 1.0 / 2.0f64.sqrt();
        let g2 = build_cayley::<f64>(3, 2, 1.0, off).unwrap();
        let psi = cayley_branch_state(&g2).unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        assert!((psi.amplitude(1).unwrap().re - s).abs() < 1e-15);
        assert!((psi.amplitude(2).unwrap().re - s).abs() < 1e-15);
        assert_eq!(psi.amplitude(4).unwrap(), c(0.0, 0.0));

        let g3 = build_cayley::<f64>(3, 3, 1.0, off).unwrap();
        let psi = cayley_branch_state(&g3).unwrap();
        for v in 1..=4 {
            assert!((psi.amplitude(v).unwrap().re - 0.5).abs() < 1e-15);
        }
        assert!((psi.norm_sq() - 1.0).abs() < 1e-12);

        let star = build_star::<f64>(3, 1.0).unwrap();
        assert!(cayley_branch_state(&star).is_err());
    }

    #[test]
    fn initial_state_builders() {
        let g = build_spider::<f64>(3, 2, 1.0, 1.0).unwrap();
        let balanced = InitialState::BalancedLeaves.build(&g).unwrap();
        assert!((balanced.probability(1).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        let phased = InitialState::PhasedLeaves.build(&g).unwrap();
        let total: Complex<f64> = phased.amplitudes().iter().sum();
        assert!(total.norm() < 1e-14);
        assert!(InitialState::<f64>::PhasedLeaves
            .build(&build_cycle_fixture())
            .is_err());
        let explicit = InitialState::Amplitudes(basis_state(&g, 7).unwrap().amplitudes().to_vec());
        assert_eq!(explicit.build(&g).unwrap().probability(7).unwrap(), 1.0);
        let short = InitialState::Amplitudes(vec![c(1.0, 0.0)]);
        assert!(short.build(&g).is_err());
    }

    fn build_cycle_fixture() -> WeightedGraph<f64> {
        crate::graph::build_cycle(4, 1.0).unwrap()
    }

    #[test]
    fn state_norm_is_checked() {
        assert!(StateVector::new(vec![c(1.0, 0.0), c(0.1, 0.0)]).is_err());
        assert!(StateVector::new(vec![c(0.6, 0.0), c(0.8, 0.0)]).is_ok());
    }
}
