//! Quantum-stochastic-walk evolution of a density matrix: an interpolation
//! between the coherent commutator term and an adjacency-derived Lindblad
//! dissipator, integrated with classical RK4.
//!
//! The equation of motion is
//!
//! ```text
//! d rho/dt = -i (1 - omega) [A, rho]
//!            + omega sum_k ( L_k rho L_k^+  -  1/2 {D_k, rho} )
//! ```
//!
//! with one jump operator `L_k = sqrt(|A_ij|) |i><j|` per ordered pair of
//! adjacent vertices (`K = 2 |E|`), and `omega` in `[0, 1]` running from
//! fully coherent to fully incoherent. Two anticommutator conventions are
//! implemented behind [`DissipatorForm`]: `D_k = L_k L_k^+` ([`DissipatorForm::Paper`],
//! the default) and the textbook `D_k = L_k^+ L_k` ([`DissipatorForm::Standard`]).
//! For this operator family both sums collapse to the diagonal of absolute
//! row sums of `A`, so the two forms produce identical right-hand sides and
//! both conserve the trace exactly; the chosen form is still recorded in all
//! outputs.
//!
//! A single integration is sequential (it carries the state); independent
//! `(graph, omega)` runs share nothing mutable and may execute concurrently.

use ndarray::Array2;
use num_complex::Complex;

use crate::dynamics::{clamp_probability, TraceSeries};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::scalar::{count, real, Scalar};
use crate::spectral::eigh_default;
use crate::state::StateVector;

/// Steps between positivity checkpoints during integration.
const POSITIVITY_CHECK_STRIDE: usize = 100;

/// Complex Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Clone, Debug)]
pub struct DensityMatrix<T> {
    entries: Array2<Complex<T>>,
}

impl<T: Scalar> DensityMatrix<T> {
    /// Validate Hermiticity, unit trace, and positivity (up to the scalar's
    /// tolerances) and wrap the matrix.
    pub fn new(entries: Array2<Complex<T>>) -> Result<Self> {
        let n = entries.nrows();
        if entries.ncols() != n || n == 0 {
            return Err(Error::DimensionMismatch {
                expected: n.max(1),
                found: entries.ncols(),
            });
        }
        let rho = DensityMatrix { entries };
        let herm = rho.hermiticity_defect();
        let trace_err = rho.trace_error();
        let min_eig = rho.min_eigenvalue()?;
        if herm > T::HERMITICITY_TOL || trace_err > T::TRACE_TOL || min_eig < -T::POSITIVITY_TOL {
            return Err(Error::InvariantBreach {
                time: 0.0,
                trace_error: trace_err.to_f64().unwrap_or(f64::NAN),
                min_eigenvalue: min_eig.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(rho)
    }

    /// `|psi><psi|` for a pure state.
    pub fn pure(psi: &StateVector<T>) -> Self {
        let n = psi.dimension();
        let mut entries = Array2::zeros((n, n));
        for (i, a) in psi.amplitudes().iter().enumerate() {
            for (j, b) in psi.amplitudes().iter().enumerate() {
                entries[[i, j]] = a * b.conj();
            }
        }
        DensityMatrix { entries }
    }

    /// `I / n`.
    pub fn maximally_mixed(n: usize) -> Self {
        let w = Complex::new(count::<T>(n).recip(), T::zero());
        DensityMatrix {
            entries: Array2::from_diag_elem(n, w),
        }
    }

    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<Complex<T>> {
        &self.entries
    }

    pub fn trace(&self) -> Complex<T> {
        let mut tr = Complex::new(T::zero(), T::zero());
        for i in 0..self.dimension() {
            tr += self.entries[[i, i]];
        }
        tr
    }

    fn trace_error(&self) -> T {
        let tr = self.trace();
        ((tr.re - T::one()).powi(2) + tr.im.powi(2)).sqrt()
    }

    /// Real parts of the diagonal: the per-vertex probabilities.
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dimension()).map(|i| self.entries[[i, i]].re).collect()
    }

    /// `max |rho[i][j] - conj(rho[j][i])|`.
    pub fn hermiticity_defect(&self) -> T {
        let n = self.dimension();
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.entries[[i, j]] - self.entries[[j, i]].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue, via the real symmetric embedding
    /// `[[X, -Y], [Y, X]]` of `rho = X + iY` (eigenvalues come out doubled,
    /// which leaves the minimum unchanged).
    pub fn min_eigenvalue(&self) -> Result<T> {
        let n = self.dimension();
        let mut m = Array2::zeros((2 * n, 2 * n));
        for i in 0..n {
            for j in 0..n {
                let z = (self.entries[[i, j]] + self.entries[[j, i]].conj())
                    / Complex::new(real::<T>(2.0), T::zero());
                m[[i, j]] = z.re;
                m[[n + i, n + j]] = z.re;
                m[[i, n + j]] = -z.im;
                m[[n + i, j]] = z.im;
            }
        }
        let d = eigh_default(&m)?;
        Ok(d.eigenvalues()[0])
    }
}

/// Which anticommutator enters the dissipator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DissipatorForm {
    /// `{L_k L_k^+, rho}` exactly as the equation of motion is written here.
    #[default]
    Paper,
    /// The textbook GKSL convention `{L_k^+ L_k, rho}`.
    Standard,
}

impl DissipatorForm {
    pub fn name(self) -> &'static str {
        match self {
            DissipatorForm::Paper => "paper",
            DissipatorForm::Standard => "standard",
        }
    }
}

impl std::str::FromStr for DissipatorForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(DissipatorForm::Paper),
            "standard" => Ok(DissipatorForm::Standard),
            other => Err(Error::InvalidSpec(format!("unknown dissipator form '{other}'"))),
        }
    }
}

/// One jump operator `sqrt(rate) |target><source|` (1-based vertices).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LindbladOp<T> {
    pub source: usize,
    pub target: usize,
    pub rate: T,
}

/// The adjacency-derived jump operators plus the interpolation weight.
#[derive(Clone, Debug)]
pub struct LindbladSet<T> {
    operators: Vec<LindbladOp<T>>,
    omega: T,
    num_vertices: usize,
    /// `sum_k L_k L_k^+` diagonal (0-based), indexed by target vertex.
    decay_by_target: Vec<T>,
    /// `sum_k L_k^+ L_k` diagonal (0-based), indexed by source vertex.
    decay_by_source: Vec<T>,
}

/// One operator per ordered pair `(i, j)` with `A[i][j] != 0`, so `K = 2|E|`.
pub fn build_lindblad_set<T: Scalar>(g: &WeightedGraph<T>, omega: T) -> Result<LindbladSet<T>> {
    if !(T::zero()..=T::one()).contains(&omega) || !omega.is_finite() {
        return Err(Error::OmegaOutOfRange {
            omega: omega.to_f64().unwrap_or(f64::NAN),
        });
    }
    let n = g.num_vertices();
    let mut operators = Vec::with_capacity(2 * g.edge_count());
    let mut decay_by_target = vec![T::zero(); n];
    let mut decay_by_source = vec![T::zero(); n];
    for (i, j, w) in g.edges() {
        let rate = w.abs();
        for (target, source) in [(i, j), (j, i)] {
            operators.push(LindbladOp {
                source,
                target,
                rate,
            });
            decay_by_target[target - 1] += rate;
            decay_by_source[source - 1] += rate;
        }
    }
    operators.sort_by_key(|a| (a.target, a.source));
    Ok(LindbladSet {
        operators,
        omega,
        num_vertices: n,
        decay_by_target,
        decay_by_source,
    })
}

impl<T: Scalar> LindbladSet<T> {
    pub fn operators(&self) -> &[LindbladOp<T>] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    fn decay_diagonal(&self, form: DissipatorForm) -> &[T] {
        match form {
            DissipatorForm::Paper => &self.decay_by_target,
            DissipatorForm::Standard => &self.decay_by_source,
        }
    }
}

/// Precomputed pieces of the right-hand side, reused across RK4 stages.
struct RhsContext<'a, T> {
    adjacency: Array2<Complex<T>>,
    ops: Vec<(usize, usize, T)>,
    decay: &'a [T],
    omega: T,
}

impl<'a, T: Scalar> RhsContext<'a, T> {
    fn new(g: &WeightedGraph<T>, set: &'a LindbladSet<T>, form: DissipatorForm) -> Self {
        RhsContext {
            adjacency: g.adjacency().mapv(|x| Complex::new(x, T::zero())),
            ops: set
                .operators
                .iter()
                .map(|op| (op.target - 1, op.source - 1, op.rate))
                .collect(),
            decay: set.decay_diagonal(form),
            omega: set.omega,
        }
    }

    fn eval(&self, rho: &Array2<Complex<T>>) -> Array2<Complex<T>> {
        let n = rho.nrows();
        let omega = self.omega;
        let coherent = T::one() - omega;
        let mut out: Array2<Complex<T>> = if coherent != T::zero() {
            let forward = self.adjacency.dot(rho);
            let backward = rho.dot(&self.adjacency);
            let mut comm = forward - backward;
            // multiply by -i (1 - omega)
            comm.mapv_inplace(|z| Complex::new(z.im * coherent, -z.re * coherent));
            comm
        } else {
            Array2::zeros((n, n))
        };
        if omega != T::zero() {
            for &(target, source, rate) in &self.ops {
                out[[target, target]] += rho[[source, source]] * (omega * rate);
            }
            let half = real::<T>(0.5);
            for i in 0..n {
                for j in 0..n {
                    let damp = omega * half * (self.decay[i] + self.decay[j]);
                    out[[i, j]] -= rho[[i, j]] * damp;
                }
            }
        }
        out
    }
}

/// `d rho/dt` for one density matrix: the interpolated commutator plus
/// dissipator. The result is traceless to machine precision for both forms.
pub fn lindblad_rhs<T: Scalar>(
    rho: &DensityMatrix<T>,
    g: &WeightedGraph<T>,
    set: &LindbladSet<T>,
    form: DissipatorForm,
) -> Result<Array2<Complex<T>>> {
    let n = g.num_vertices();
    if rho.dimension() != n || set.num_vertices != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho.dimension(),
        });
    }
    Ok(RhsContext::new(g, set, form).eval(rho.entries()))
}

/// Result of a density-matrix integration.
#[derive(Clone, Debug)]
pub struct DensityEvolution<T> {
    /// Diagonal (per-vertex probability) series over all vertices.
    pub series: TraceSeries<T>,
    /// `|trace(rho) - 1|` at every recorded step.
    pub trace_errors: Vec<T>,
    /// Largest Hermiticity defect observed before per-step symmetrization.
    pub max_hermiticity_drift: T,
    pub final_state: DensityMatrix<T>,
    pub form: DissipatorForm,
}

/// Integrate the equation of motion with classical RK4 stages
/// `k1 = f(rho)`, `k2 = f(rho + k1 dt/2)`, `k3 = f(rho + k2 dt/2)`,
/// `k4 = f(rho + k3 dt)` on the grid `i * dt`, `i = 0..=round(t_max/dt)`.
///
/// The diagonal is recorded at every step. RK4 does not structurally
/// preserve Hermiticity, so `rho <- (rho + rho^+)/2` is applied after each
/// step and the largest defect is reported. Trace error beyond
/// [`Scalar::TRACE_TOL`] or an eigenvalue below `-`[`Scalar::POSITIVITY_TOL`]
/// (sampled every 100 steps) aborts with diagnostics.
pub fn evolve_density<T: Scalar>(
    g: &WeightedGraph<T>,
    set: &LindbladSet<T>,
    rho0: &DensityMatrix<T>,
    dt: T,
    t_max: T,
    form: DissipatorForm,
) -> Result<DensityEvolution<T>> {
    if dt <= T::zero() || !dt.is_finite() {
        return Err(Error::InvalidGrid("dt must be positive and finite".into()));
    }
    if t_max < T::zero() || !t_max.is_finite() {
        return Err(Error::InvalidGrid("t_max must be nonnegative and finite".into()));
    }
    let n = g.num_vertices();
    if rho0.dimension() != n || set.num_vertices != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho0.dimension(),
        });
    }
    let ctx = RhsContext::new(g, set, form);
    let steps = (t_max / dt).round().to_f64().unwrap_or(0.0) as usize;
    let half = Complex::new(dt / real::<T>(2.0), T::zero());
    let full = Complex::new(dt, T::zero());
    let sixth = Complex::new(dt / real::<T>(6.0), T::zero());
    let two = Complex::new(real::<T>(2.0), T::zero());

    let mut rho = rho0.entries().clone();
    let mut times = Vec::with_capacity(steps + 1);
    let mut probabilities = vec![Vec::with_capacity(steps + 1); n];
    let mut trace_errors = Vec::with_capacity(steps + 1);
    let mut max_drift = T::zero();

    let trace_error_of = |rho: &Array2<Complex<T>>| {
        let mut tr = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            tr += rho[[i, i]];
        }
        ((tr.re - T::one()).powi(2) + tr.im.powi(2)).sqrt()
    };
    let record = |rho: &Array2<Complex<T>>, probabilities: &mut Vec<Vec<T>>| {
        for (v, row) in probabilities.iter_mut().enumerate() {
            row.push(clamp_probability(rho[[v, v]].re));
        }
    };

    times.push(T::zero());
    record(&rho, &mut probabilities);
    trace_errors.push(trace_error_of(&rho));

    for step in 1..=steps {
        let k1 = ctx.eval(&rho);
        let k2 = ctx.eval(&(&rho + &k1.mapv(|z| z * half)));
        let k3 = ctx.eval(&(&rho + &k2.mapv(|z| z * half)));
        let k4 = ctx.eval(&(&rho + &k3.mapv(|z| z * full)));
        let increment = (k1 + k2.mapv(|z| z * two) + k3.mapv(|z| z * two) + k4)
            .mapv(|z| z * sixth);
        rho = rho + increment;

        // symmetrize, logging the defect RK4 introduced
        let mut drift = T::zero();
        for i in 0..n {
            for j in i..n {
                let a = rho[[i, j]];
                let b = rho[[j, i]];
                drift = drift.max((a - b.conj()).norm());
                let avg = (a + b.conj()) / Complex::new(real::<T>(2.0), T::zero());
                rho[[i, j]] = avg;
                rho[[j, i]] = avg.conj();
            }
        }
        max_drift = max_drift.max(drift);

        // invariants are checked before anything is recorded, so a breach
        // aborts without touching the output series; a diagonal outside the
        // positivity band forces the eigenvalue check between checkpoints
        let t = dt * count::<T>(step);
        let trace_err = trace_error_of(&rho);
        let diag_out_of_band = (0..n).any(|i| {
            let p = rho[[i, i]].re;
            p < -T::POSITIVITY_TOL || p > T::one() + T::POSITIVITY_TOL
        });
        let checkpoint =
            step % POSITIVITY_CHECK_STRIDE == 0 || step == steps || diag_out_of_band;
        if trace_err > T::TRACE_TOL || checkpoint {
            let min_eig = DensityMatrix {
                entries: rho.clone(),
            }
            .min_eigenvalue()?;
            if trace_err > T::TRACE_TOL || min_eig < -T::POSITIVITY_TOL {
                return Err(Error::InvariantBreach {
                    time: t.to_f64().unwrap_or(f64::NAN),
                    trace_error: trace_err.to_f64().unwrap_or(f64::NAN),
                    min_eigenvalue: min_eig.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        times.push(t);
        record(&rho, &mut probabilities);
        trace_errors.push(trace_err);
    }

    let vertices: Vec<usize> = (1..=n).collect();
    Ok(DensityEvolution {
        series: TraceSeries::new(times, vertices, probabilities),
        trace_errors,
        max_hermiticity_drift: max_drift,
        final_state: DensityMatrix::new(rho)?,
        form,
    })
}

/// Trapezoid integral of one recorded vertex probability from 0 up to `tau`,
/// with linear interpolation inside the final partial interval.
pub fn cumulative_probability<T: Scalar>(
    series: &TraceSeries<T>,
    vertex: usize,
    tau: T,
) -> Result<T> {
    let times = series.times();
    let row = series.probability_row(vertex).ok_or(Error::VertexOutOfRange {
        vertex,
        num_vertices: series.vertices().len(),
    })?;
    let (t0, t1) = (times[0], times[times.len() - 1]);
    // a tau that names the same instant as an endpoint but was computed along
    // a different floating-point route may sit a few ulps outside; clamp it
    let slack = real::<T>(8.0) * T::epsilon() * (T::one() + t1.abs());
    if !tau.is_finite() || tau < t0 - slack || tau > t1 + slack {
        return Err(Error::TauOutOfRange {
            tau: tau.to_f64().unwrap_or(f64::NAN),
            t_min: t0.to_f64().unwrap_or(f64::NAN),
            t_max: t1.to_f64().unwrap_or(f64::NAN),
        });
    }
    let tau = tau.max(t0).min(t1);
    let mut acc = T::zero();
    let half = real::<T>(0.5);
    for k in 1..times.len() {
        if times[k] <= tau {
            acc += (times[k] - times[k - 1]) * (row[k] + row[k - 1]) * half;
            if times[k] == tau {
                break;
            }
        } else {
            let dt = times[k] - times[k - 1];
            let frac = (tau - times[k - 1]) / dt;
            let p_tau = row[k - 1] + (row[k] - row[k - 1]) * frac;
            acc += (tau - times[k - 1]) * (row[k - 1] + p_tau) * half;
            break;
        }
    }
    Ok(acc)
}

/// [`cumulative_probability`] of the center vertex. All-vertex traces from
/// the family builders record the center last, so the final recorded vertex
/// is used.
pub fn cumulative_center_probability<T: Scalar>(series: &TraceSeries<T>, tau: T) -> Result<T> {
    let center = *series
        .vertices()
        .last()
        .ok_or_else(|| Error::InvalidGrid("series records no vertices".into()))?;
    cumulative_probability(series, center, tau)
}
