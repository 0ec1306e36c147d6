//! Closed-system (unitary) evolution of a walker state by the adjacency or
//! Laplacian generator, probability traces, an independent RK4 integrator,
//! and hopping sweeps of the center-vertex maximum.
//!
//! Spectral evolution works through the eigendecomposition once per plan:
//! `psi(t) = sum_k exp(-i lambda_k t) <phi_k|psi(0)> phi_k`. Plans are
//! immutable after construction, so evaluations at distinct times are
//! independent and may run concurrently.
//!
//! Times are dimensionless (hbar = 1). The default window is `[0, 10 pi]`
//! with 10001 points (step `pi/1000`); negative times are allowed through the
//! API since the evolution is a group.

use ndarray::Array2;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::scalar::{count, real, Scalar};
use crate::spectral::{eigh_default, SpectralDecomposition};
use crate::state::{InitialState, StateVector};

/// Evolution generator choice: `U = exp(-i A t)` or `U = exp(-i L t)`.
///
/// The two agree (up to a global phase) on regular graphs and differ
/// measurably on the irregular tree families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Adjacency,
    Laplacian,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::Adjacency => "adjacency",
            Generator::Laplacian => "laplacian",
        }
    }

    pub fn matrix<T: Scalar>(self, g: &WeightedGraph<T>) -> Array2<T> {
        match self {
            Generator::Adjacency => g.adjacency(),
            Generator::Laplacian => g.laplacian(),
        }
    }
}

impl std::str::FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjacency" => Ok(Generator::Adjacency),
            "laplacian" => Ok(Generator::Laplacian),
            other => Err(Error::InvalidSpec(format!("unknown generator '{other}'"))),
        }
    }
}

/// Ascending time grid shared by traces and integrals.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid<T> {
    times: Vec<T>,
}

impl<T: Scalar> TimeGrid<T> {
    /// Uniform grid of `points` samples covering `[0, t_max]`.
    pub fn uniform(t_max: T, points: usize) -> Result<Self> {
        if t_max <= T::zero() || !t_max.is_finite() {
            return Err(Error::InvalidGrid("t_max must be positive and finite".into()));
        }
        if points < 2 {
            return Err(Error::InvalidGrid("need at least two grid points".into()));
        }
        let denom = count::<T>(points - 1);
        let times = (0..points).map(|i| t_max * count::<T>(i) / denom).collect();
        Ok(TimeGrid { times })
    }

    /// Arbitrary strictly ascending grid.
    pub fn from_times(times: Vec<T>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidGrid("empty time grid".into()));
        }
        if times.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::InvalidGrid("grid must be strictly ascending".into()));
        }
        Ok(TimeGrid { times })
    }

    /// The window used across the toolkit: `[0, 10 pi]`, 10001 points.
    pub fn default_window() -> Self {
        Self::uniform(real::<T>(10.0) * T::PI(), 10001).expect("static grid parameters")
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_max(&self) -> T {
        *self.times.last().expect("grid is nonempty")
    }
}

/// Time grid with per-vertex probabilities and, optionally, their running
/// trapezoid integrals; the universal output record.
///
/// Probabilities are clamped to `[0, 1]` on output.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceSeries<T> {
    times: Vec<T>,
    vertices: Vec<usize>,
    probabilities: Vec<Vec<T>>,
    cumulative: Option<Vec<Vec<T>>>,
}

impl<T: Scalar> TraceSeries<T> {
    pub(crate) fn new(times: Vec<T>, vertices: Vec<usize>, probabilities: Vec<Vec<T>>) -> Self {
        debug_assert_eq!(vertices.len(), probabilities.len());
        TraceSeries {
            times,
            vertices,
            probabilities,
            cumulative: None,
        }
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    /// Requested vertices, 1-based, in request order.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn has_cumulative(&self) -> bool {
        self.cumulative.is_some()
    }

    /// Probability series of a 1-based vertex, if it was recorded.
    pub fn probability_row(&self, vertex: usize) -> Option<&[T]> {
        let pos = self.vertices.iter().position(|&v| v == vertex)?;
        Some(&self.probabilities[pos])
    }

    /// Running trapezoid integral of a recorded vertex, when computed.
    pub fn cumulative_row(&self, vertex: usize) -> Option<&[T]> {
        let pos = self.vertices.iter().position(|&v| v == vertex)?;
        self.cumulative.as_ref().map(|c| c[pos].as_slice())
    }

    /// Attach running trapezoid integrals for every recorded vertex.
    pub fn with_cumulative(mut self) -> Self {
        let mut cumulative = Vec::with_capacity(self.probabilities.len());
        for row in &self.probabilities {
            let mut integral = Vec::with_capacity(row.len());
            let mut acc = T::zero();
            integral.push(acc);
            for k in 1..row.len() {
                let dt = self.times[k] - self.times[k - 1];
                acc += dt * (row[k] + row[k - 1]) / real::<T>(2.0);
                integral.push(acc);
            }
            cumulative.push(integral);
        }
        self.cumulative = Some(cumulative);
        self
    }

    /// Sum over recorded vertices at one time index.
    pub fn total_probability_at(&self, idx: usize) -> T {
        self.probabilities.iter().map(|row| row[idx]).fold(T::zero(), |s, x| s + x)
    }

    /// Grid maximum of a recorded vertex: `(time index, probability)`.
    pub fn grid_max(&self, vertex: usize) -> Option<(usize, T)> {
        let row = self.probability_row(vertex)?;
        let mut best = (0usize, row[0]);
        for (k, &p) in row.iter().enumerate() {
            if p > best.1 {
                best = (k, p);
            }
        }
        Some(best)
    }
}

/// Spectral decomposition of the chosen generator plus the initial-state
/// overlaps; reusable across many evaluation times.
#[derive(Clone, Debug)]
pub struct EvolutionPlan<T> {
    generator: Generator,
    decomposition: SpectralDecomposition<T>,
    overlaps: Vec<Complex<T>>,
}

/// Diagonalize the chosen generator and precompute `<phi_k|psi(0)>`.
pub fn plan<T: Scalar>(
    g: &WeightedGraph<T>,
    generator: Generator,
    psi0: &StateVector<T>,
) -> Result<EvolutionPlan<T>> {
    if psi0.dimension() != g.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: g.num_vertices(),
            found: psi0.dimension(),
        });
    }
    let decomposition = eigh_default(&generator.matrix(g))?;
    plan_from_decomposition(generator, decomposition, psi0)
}

/// Build a plan from an existing decomposition (used by degenerate-subspace
/// tests that re-orthogonalize eigenvector blocks).
pub fn plan_from_decomposition<T: Scalar>(
    generator: Generator,
    decomposition: SpectralDecomposition<T>,
    psi0: &StateVector<T>,
) -> Result<EvolutionPlan<T>> {
    let n = decomposition.dimension();
    if psi0.dimension() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: psi0.dimension(),
        });
    }
    let v = decomposition.eigenvectors();
    let mut overlaps = Vec::with_capacity(n);
    for k in 0..n {
        let mut ov = Complex::new(T::zero(), T::zero());
        for (row, amp) in psi0.amplitudes().iter().enumerate() {
            ov += amp * v[[row, k]];
        }
        overlaps.push(ov);
    }
    let total: T = overlaps.iter().map(|o| o.norm_sqr()).fold(T::zero(), |s, x| s + x);
    if (total - T::one()).abs() > T::STATE_NORM_TOL {
        return Err(Error::NotNormalized {
            norm_sq: total.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(EvolutionPlan {
        generator,
        decomposition,
        overlaps,
    })
}

impl<T: Scalar> EvolutionPlan<T> {
    pub fn generator(&self) -> Generator {
        self.generator
    }

    pub fn decomposition(&self) -> &SpectralDecomposition<T> {
        &self.decomposition
    }

    pub fn overlaps(&self) -> &[Complex<T>] {
        &self.overlaps
    }

    pub fn dimension(&self) -> usize {
        self.decomposition.dimension()
    }

    /// `psi(t)`; `t` may be negative (the evolution is a group).
    pub fn evolve(&self, t: T) -> StateVector<T> {
        let n = self.dimension();
        let v = self.decomposition.eigenvectors();
        let phases = self.mode_factors(t);
        let mut amps = vec![Complex::new(T::zero(), T::zero()); n];
        for k in 0..n {
            let weight = phases[k];
            if weight.norm_sqr() == T::zero() {
                continue;
            }
            for (row, amp) in amps.iter_mut().enumerate() {
                *amp += weight * v[[row, k]];
            }
        }
        StateVector::from_amplitudes_unchecked(amps)
    }

    /// `<v|psi(t)>` for a 1-based vertex without materializing the state.
    pub fn vertex_amplitude(&self, vertex: usize, t: T) -> Result<Complex<T>> {
        let n = self.dimension();
        if vertex == 0 || vertex > n {
            return Err(Error::VertexOutOfRange {
                vertex,
                num_vertices: n,
            });
        }
        let v = self.decomposition.eigenvectors();
        let phases = self.mode_factors(t);
        let mut amp = Complex::new(T::zero(), T::zero());
        for k in 0..n {
            amp += phases[k] * v[[vertex - 1, k]];
        }
        Ok(amp)
    }

    /// `|<v|psi(t)>|^2`, clamped to `[0, 1]`.
    pub fn vertex_probability(&self, vertex: usize, t: T) -> Result<T> {
        Ok(clamp_probability(self.vertex_amplitude(vertex, t)?.norm_sqr()))
    }

    /// Per-vertex `|amplitude|^2` series over a grid.
    pub fn probability_trace(
        &self,
        vertices: &[usize],
        grid: &TimeGrid<T>,
    ) -> Result<TraceSeries<T>> {
        if vertices.is_empty() {
            return Err(Error::InvalidGrid("no vertices requested".into()));
        }
        let n = self.dimension();
        for &v in vertices {
            if v == 0 || v > n {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    num_vertices: n,
                });
            }
        }
        let vmat = self.decomposition.eigenvectors();
        let mut probabilities = vec![Vec::with_capacity(grid.len()); vertices.len()];
        for &t in grid.times() {
            let phases = self.mode_factors(t);
            for (slot, &vertex) in vertices.iter().enumerate() {
                let mut amp = Complex::new(T::zero(), T::zero());
                for k in 0..n {
                    amp += phases[k] * vmat[[vertex - 1, k]];
                }
                probabilities[slot].push(clamp_probability(amp.norm_sqr()));
            }
        }
        Ok(TraceSeries::new(
            grid.times().to_vec(),
            vertices.to_vec(),
            probabilities,
        ))
    }

    /// Trace over every vertex of the graph.
    pub fn probability_trace_all(&self, grid: &TimeGrid<T>) -> Result<TraceSeries<T>> {
        let all: Vec<usize> = (1..=self.dimension()).collect();
        self.probability_trace(&all, grid)
    }

    /// `exp(-i lambda_k t) <phi_k|psi(0)>` for every mode.
    fn mode_factors(&self, t: T) -> Vec<Complex<T>> {
        self.decomposition
            .eigenvalues()
            .iter()
            .zip(&self.overlaps)
            .map(|(&l, ov)| Complex::from_polar(T::one(), -l * t) * ov)
            .collect()
    }
}

pub(crate) fn clamp_probability<T: Scalar>(p: T) -> T {
    // spectral traces stay within STATE_NORM_TOL of [0, 1]; the RK4 routes
    // are allowed their integration error up to the positivity budget
    debug_assert!(
        p >= -T::POSITIVITY_TOL && p <= T::one() + T::POSITIVITY_TOL,
        "probability outside tolerance band"
    );
    p.max(T::zero()).min(T::one())
}

/// Classical fourth-order Runge-Kutta on `d psi / dt = -i G psi`.
///
/// Serves as an integrator oracle against the spectral path; it shares no
/// code with the eigensolver. Returns the all-vertex trace on the grid
/// `i * dt` for `i = 0..=round(t_max / dt)`.
pub fn schrodinger_rk4<T: Scalar>(
    g: &WeightedGraph<T>,
    generator: Generator,
    psi0: &StateVector<T>,
    dt: T,
    t_max: T,
) -> Result<TraceSeries<T>> {
    if dt <= T::zero() || !dt.is_finite() {
        return Err(Error::InvalidGrid("dt must be positive and finite".into()));
    }
    if t_max < T::zero() || !t_max.is_finite() {
        return Err(Error::InvalidGrid("t_max must be nonnegative and finite".into()));
    }
    let n = g.num_vertices();
    if psi0.dimension() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: psi0.dimension(),
        });
    }
    let gen = generator.matrix(g);
    let steps = (t_max / dt).round().to_f64().unwrap_or(0.0) as usize;

    let rhs = |psi: &[Complex<T>], out: &mut Vec<Complex<T>>| {
        out.clear();
        for i in 0..n {
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                acc += psi[j] * gen[[i, j]];
            }
            // multiply by -i
            out.push(Complex::new(acc.im, -acc.re));
        }
    };

    let mut psi: Vec<Complex<T>> = psi0.amplitudes().to_vec();
    let mut k1 = Vec::with_capacity(n);
    let mut k2 = Vec::with_capacity(n);
    let mut k3 = Vec::with_capacity(n);
    let mut k4 = Vec::with_capacity(n);
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); n];

    let vertices: Vec<usize> = (1..=n).collect();
    let mut times = Vec::with_capacity(steps + 1);
    let mut probabilities = vec![Vec::with_capacity(steps + 1); n];
    let record = |psi: &[Complex<T>], probabilities: &mut Vec<Vec<T>>| {
        for (row, amp) in probabilities.iter_mut().zip(psi) {
            row.push(clamp_probability(amp.norm_sqr()));
        }
    };

    times.push(T::zero());
    record(&psi, &mut probabilities);
    let half = dt / real::<T>(2.0);
    let sixth = dt / real::<T>(6.0);
    for step in 1..=steps {
        rhs(&psi, &mut k1);
        for i in 0..n {
            scratch[i] = psi[i] + k1[i] * half;
        }
        rhs(&scratch, &mut k2);
        for i in 0..n {
            scratch[i] = psi[i] + k2[i] * half;
        }
        rhs(&scratch, &mut k3);
        for i in 0..n {
            scratch[i] = psi[i] + k3[i] * dt;
        }
        rhs(&scratch, &mut k4);
        for i in 0..n {
            psi[i] += (k1[i] + (k2[i] + k3[i]) * real::<T>(2.0) + k4[i]) * sixth;
        }
        times.push(dt * count::<T>(step));
        record(&psi, &mut probabilities);
    }
    Ok(TraceSeries::new(times, vertices, probabilities))
}

/// One point of a hopping sweep.
#[derive(Clone, Copy, Debug)]
pub struct TransferPoint<T> {
    pub hopping: T,
    pub time_of_max: T,
    pub max_probability: T,
}

/// Center-vertex maxima across a hopping sweep plus the fitted log-log slope.
#[derive(Clone, Debug)]
pub struct TransferScaling<T> {
    pub points: Vec<TransferPoint<T>>,
    /// Least-squares slope of `ln(max P)` against `ln(J)`.
    pub slope: T,
}

/// For each hopping, rebuild the graph, trace the center vertex over the
/// grid, and refine the grid maximum by golden-section search. The companion
/// fit reports the least-squares slope of `log(max P)` versus `log(J)`.
pub fn transfer_scaling<T: Scalar>(
    spec: &crate::graph::FamilySpec<T>,
    hoppings: &[T],
    state: &InitialState<T>,
    generator: Generator,
    grid: &TimeGrid<T>,
) -> Result<TransferScaling<T>> {
    if hoppings.is_empty() {
        return Err(Error::InvalidSpec("hopping list is empty".into()));
    }
    let mut points = Vec::with_capacity(hoppings.len());
    for &j in hoppings {
        let g = spec.with_central_hopping(j).build()?;
        let center = g
            .center()
            .ok_or_else(|| Error::InvalidSpec("family has no center vertex".into()))?;
        let psi0 = state.build(&g)?;
        let p = plan(&g, generator, &psi0)?;
        let (time_of_max, max_probability) = max_vertex_probability(&p, center, grid)?;
        points.push(TransferPoint {
            hopping: j,
            time_of_max,
            max_probability,
        });
    }
    let slope = log_log_slope(
        &points.iter().map(|p| p.hopping).collect::<Vec<_>>(),
        &points.iter().map(|p| p.max_probability).collect::<Vec<_>>(),
    );
    Ok(TransferScaling { points, slope })
}

/// Maximum of `|<v|psi(t)>|^2` over the grid window, refined past grid
/// resolution by golden-section search in the bracketing interval.
pub fn max_vertex_probability<T: Scalar>(
    plan: &EvolutionPlan<T>,
    vertex: usize,
    grid: &TimeGrid<T>,
) -> Result<(T, T)> {
    let trace = plan.probability_trace(&[vertex], grid)?;
    let (idx, _) = trace.grid_max(vertex).expect("vertex recorded");
    let times = grid.times();
    let lo = times[idx.saturating_sub(1)];
    let hi = times[(idx + 1).min(times.len() - 1)];
    let f = |t: T| plan.vertex_probability(vertex, t).expect("vertex in range");
    Ok(golden_max(f, lo, hi))
}

/// Golden-section maximization on `[a, b]`; returns `(argmax, max)`.
fn golden_max<T: Scalar>(f: impl Fn(T) -> T, mut a: T, mut b: T) -> (T, T) {
    let inv_phi = (real::<T>(5.0).sqrt() - T::one()) / real::<T>(2.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if b - a <= real::<T>(4.0) * T::epsilon() * (T::one() + b.abs()) {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    let mid = (a + b) / real::<T>(2.0);
    let fm = f(mid);
    if fm >= f1 && fm >= f2 {
        (mid, fm)
    } else if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope<T: Scalar>(xs: &[T], ys: &[T]) -> T {
    debug_assert_eq!(xs.len(), ys.len());
    let n = count::<T>(xs.len());
    let lx: Vec<T> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<T> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().fold(T::zero(), |s, &x| s + x) / n;
    let my = ly.iter().fold(T::zero(), |s, &y| s + y) / n;
    let mut num = T::zero();
    let mut den = T::zero();
    for (&x, &y) in lx.iter().zip(&ly) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if den == T::zero() {
        T::zero()
    } else {
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_cycle, build_spider, build_star, FamilySpec};
    use crate::matexp::propagator;
    use crate::state::basis_state;

    #[test]
    fn star_center_probability_peaks_at_one_third() {
        let g = build_star::<f64>(3, 1.0).unwrap();
        let psi0 = basis_state(&g, 1).unwrap();
        let p = plan(&g, Generator::Adjacency, &psi0).unwrap();
        let t = std::f64::consts::PI / (2.0 * 3.0f64.sqrt());
        let prob = p.vertex_probability(4, t).unwrap();
        assert!((prob - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn evolve_at_zero_is_identity() {
        let g = build_spider::<f64>(3, 2, 2.0, 1.0).unwrap();
        let psi0 = basis_state(&g, 1).unwrap();
        let p = plan(&g, Generator::Adjacency, &psi0).unwrap();
        let back = p.evolve(0.0);
        for (a, b) in back.amplitudes().iter().zip(psi0.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn evolution_is_a_group() {
        let g = build_spider::<f64>(3, 3, 2.0, 1.0).unwrap();
        let psi0 = basis_state(&g, 1).unwrap();
        let p = plan(&g, Generator::Adjacency, &psi0).unwrap();
        let (t1, t2) = (0.7, -1.9);
        let once = p.evolve(t1 + t2);
        let p2 = plan(&g, Generator::Adjacency, &p.evolve(t1)).unwrap();
        let twice = p2.evolve(t2);
        for (a, b) in once.amplitudes().iter().zip(twice.amplitudes()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn eigenstate_probabilities_are_stationary() {
        let g = build_star::<f64>(4, 2.0).unwrap();
        let m = g.adjacency();
        let d = eigh_default(&m).unwrap();
        let col = d.eigenvector(0).to_vec();
        let psi0 = StateVector::new(col.into_iter().map(|x| Complex::new(x, 0.0)).collect()).unwrap();
        let p = plan(&g, Generator::Adjacency, &psi0).unwrap();
        // single unit overlap
        let big: Vec<f64> = p.overlaps().iter().map(|o| o.norm_sqr()).collect();
        assert!((big[0] - 1.0).abs() < 1e-12);
        for t in [0.3, 2.7, 9.1] {
            for v in 1..=5 {
                let at_zero = p.vertex_probability(v, 0.0).unwrap();
                assert!((p.vertex_probability(v, t).unwrap() - at_zero).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn star_overlaps_concentrate_on_extreme_modes() {
        let g = build_star::<f64>(3, 1.0).unwrap();
        let psi0 = basis_state(&g, 1).unwrap();
        let p = plan(&g, Generator::Adjacency, &psi0).unwrap();
        let eig = p.decomposition().eigenvalues();
        let mut zero_weight = 0.0;
        for (k, ov) in p.overlaps().iter().enumerate() {
            let w = ov.norm_sqr();
            if eig[k].abs() > 1e-9 {
                // the +-sqrt(3) modes each hold |<phi|1>|^2 = 1/(2n)
                assert!((w - 1.0 / 6.0).abs() < 1e-12, "mode {k} weight {w}");
            } else {
                zero_weight += w;
            }
        }
        assert!((zero_weight - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn laplacian_equals_adjacency_on_regular_graphs() {
        let g = build_cycle::<f64>(4, 1.0).unwrap();
        let psi0 = basis_state(&g, 1).unwrap();
        let pa = plan(&g, Generator::Adjacency, &psi0).unwrap();
        let pl = plan(&g, Generator::Laplacian, &psi0).unwrap();
        let grid = TimeGrid::uniform(6.0, 61).unwrap();
        let ta = pa.probability_trace_all(&grid).unwrap();
        let tl = pl.probability_trace_all(&grid).unwrap();
        for v in 1..=4 {
            let ra = ta.probability_row(v).unwrap();
            let rl = tl.probability_row(v).unwrap();
            for (a, b) in ra.iter().zip(rl) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn generators_differ_on_irregular_graphs() {
        let g = build_star::<f64>(3, 1.0).unwrap();
        let psi0 = basis_state(&g, 1).unwrap();
        let pa = plan(&g, Generator::Adjacency, &psi0).unwrap();
        let pl = plan(&g, Generator::Laplacian, &psi0).unwrap();
        let grid = TimeGrid::uniform(10.0, 101).unwrap();
        let ta = pa.probability_trace_all(&grid).unwrap();
        let tl = pl.probability_trace_all(&grid).unwrap();
        let mut worst: f64 = 0.0;
        for v in 1..=4 {
            let ra = ta.probability_row(v).unwrap();
            let rl = tl.probability_row(v).unwrap();
            for (a, b) in ra.iter().zip(rl) {
                worst = worst.max((a - b).abs());
            }
        }
        assert!(worst > 1e-3, "generators unexpectedly agree: {worst}");
    }

    #[test]
    fn spider_quarter_probability_cross_checked_by_matrix_exponential() {
        // exact law peaks at 4 J^2/(1+nJ^2)^2 = 1/4 at t = pi/2 for n=3, J=1
        let g = build_spider::<f64>(3, 2, 1.0, 1.0).unwrap();
        let psi0 = basis_state(&g, 1).unwrap();
        let p = plan(&g, Generator::Adjacency, &psi0).unwrap();
        let t = std::f64::consts::PI / 2.0;
        let spectral = p.vertex_probability(7, t).unwrap();
        assert!((spectral - 0.25).abs() < 1e-12);
        assert!(p.vertex_probability(7, std::f64::consts::PI).unwrap() < 1e-25);
        // independent scaling-and-squaring route on the 7x7 generator
        let u = propagator(&g.adjacency(), t);
        let mut amp = Complex::new(0.0, 0.0);
        for j in 0..7 {
            amp += u[[6, j]] * psi0.amplitudes()[j];
        }
        assert!((amp.norm_sqr() - spectral).abs() < 1e-12);
    }

    #[test]
    fn norm_is_conserved() {
        let g = build_spider::<f64>(4, 3, 10.0, 1.0).unwrap();
        let psi0 = basis_state(&g, 1).unwrap();
        let p = plan(&g, Generator::Adjacency, &psi0).unwrap();
        for t in [0.1, 3.3, 17.9, 31.4] {
            assert!((p.evolve(t).norm_sq() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_probabilities_sum_to_one() {
        let g = build_spider::<f64>(3, 3, 10.0, 1.0).unwrap();
        let psi0 = basis_state(&g, 1).unwrap();
        let p = plan(&g, Generator::Adjacency, &psi0).unwrap();
        let grid = TimeGrid::uniform(5.0, 201).unwrap();
        let trace = p.probability_trace_all(&grid).unwrap();
        for idx in 0..grid.len() {
            assert!((trace.total_probability_at(idx) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rk4_matches_spectral_evolution() {
        let g = build_star::<f64>(3, 1.0).unwrap();
        let psi0 = basis_state(&g, 1).unwrap();
        let p = plan(&g, Generator::Adjacency, &psi0).unwrap();
        let dt = std::f64::consts::PI / 1000.0;
        let t_max = 2.0 * std::f64::consts::PI;
        let rk = schrodinger_rk4(&g, Generator::Adjacency, &psi0, dt, t_max).unwrap();
        let mut worst: f64 = 0.0;
        for (idx, &t) in rk.times().iter().enumerate() {
            for v in 1..=4 {
                let spec = p.vertex_probability(v, t).unwrap();
                let num = rk.probability_row(v).unwrap()[idx];
                worst = worst.max((spec - num).abs());
            }
        }
        assert!(worst < 1e-7, "rk4 deviation {worst}");
    }

    #[test]
    fn rk4_eigenstate_probabilities_constant() {
        let g = build_star::<f64>(3, 2.0).unwrap();
        let d = eigh_default(&g.adjacency()).unwrap();
        let psi0 = StateVector::new(
            d.eigenvector(3).iter().map(|&x| Complex::new(x, 0.0)).collect(),
        )
        .unwrap();
        let rk = schrodinger_rk4(&g, Generator::Adjacency, &psi0, 0.01, 1.0).unwrap();
        for v in 1..=4 {
            let row = rk.probability_row(v).unwrap();
            for &p in row {
                // constant up to the integrator's own amplitude damping
                assert!((p - row[0]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn rk4_halving_dt_is_fourth_order() {
        let g = build_spider::<f64>(3, 2, 1.0, 1.0).unwrap();
        let psi0 = basis_state(&g, 1).unwrap();
        let p = plan(&g, Generator::Adjacency, &psi0).unwrap();
        let t_max = 4.0;
        let dev = |dt: f64| {
            let rk = schrodinger_rk4(&g, Generator::Adjacency, &psi0, dt, t_max).unwrap();
            let mut worst: f64 = 0.0;
            for (idx, &t) in rk.times().iter().enumerate() {
                for v in 1..=7 {
                    let spec = p.vertex_probability(v, t).unwrap();
                    worst = worst.max((spec - rk.probability_row(v).unwrap()[idx]).abs());
                }
            }
            worst
        };
        let coarse = dev(0.04);
        let fine = dev(0.02);
        let factor = coarse / fine;
        assert!(factor > 12.0, "convergence factor {factor}");
    }

    #[test]
    fn rk4_norm_drift_stays_small() {
        let g = build_spider::<f64>(3, 2, 1.0, 1.0).unwrap();
        let psi0 = basis_state(&g, 1).unwrap();
        let dt = std::f64::consts::PI / 1000.0;
        let t_max = 10.0 * std::f64::consts::PI;
        let rk = schrodinger_rk4(&g, Generator::Adjacency, &psi0, dt, t_max).unwrap();
        let last = rk.times().len() - 1;
        let drift = (rk.total_probability_at(last) - 1.0).abs();
        assert!(drift < 1e-8, "norm drift {drift}");
    }

    #[test]
    fn star_sweep_is_hopping_independent() {
        let spec = FamilySpec::star(3, 1.0f64);
        let grid = TimeGrid::uniform(10.0 * std::f64::consts::PI, 2001).unwrap();
        let sweep = transfer_scaling(
            &spec,
            &[1.0, 2.0, 3.0],
            &InitialState::Basis(1),
            Generator::Adjacency,
            &grid,
        )
        .unwrap();
        for point in &sweep.points {
            assert!((point.max_probability - 1.0 / 3.0).abs() < 1e-10);
        }
        assert!(sweep.slope.abs() < 0.02);
    }

    #[test]
    fn cumulative_integral_of_constant_is_linear() {
        let times = vec![0.0, 0.5, 1.0, 2.0];
        let series = TraceSeries::new(times, vec![1], vec![vec![1.0; 4]]).with_cumulative();
        let cum = series.cumulative_row(1).unwrap();
        assert_eq!(cum, &[0.0, 0.5, 1.0, 2.0]);
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::<f64>::uniform(0.0, 10).is_err());
        assert!(TimeGrid::<f64>::uniform(1.0, 1).is_err());
        assert!(TimeGrid::from_times(vec![0.0, 0.0]).is_err());
        assert!(TimeGrid::from_times(Vec::<f64>::new()).is_err());
        let grid = TimeGrid::<f64>::default_window();
        assert_eq!(grid.len(), 10001);
        assert!((grid.t_max() - 10.0 * std::f64::consts::PI).abs() < 1e-12);
        let dt = grid.times()[1] - grid.times()[0];
        assert!((dt - std::f64::consts::PI / 1000.0).abs() < 1e-15);
    }

    #[test]
    fn trace_rejects_bad_requests() {
        let g = build_star::<f64>(2, 1.0).unwrap();
        let psi0 = basis_state(&g, 1).unwrap();
        let p = plan(&g, Generator::Adjacency, &psi0).unwrap();
        let grid = TimeGrid::uniform(1.0, 11).unwrap();
        assert!(p.probability_trace(&[], &grid).is_err());
        assert!(p.probability_trace(&[4], &grid).is_err());
    }

    #[test]
    fn plan_rejects_dimension_mismatch() {
        let g = build_star::<f64>(3, 1.0).unwrap();
        let small = build_star::<f64>(2, 1.0).unwrap();
        let psi0 = basis_state(&small, 1).unwrap();
        assert!(matches!(
            plan(&g, Generator::Adjacency, &psi0),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
