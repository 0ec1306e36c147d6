//! Real-symmetric eigendecomposition (cyclic Jacobi) and the analytic spectra
//! of the built graph families, used as independent oracles against it.

use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::scalar::{count, real, Scalar};

/// Maximum number of Jacobi sweeps before giving up.
const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) paired with orthonormal eigenvectors.
///
/// Column `k` of [`eigenvectors`](Self::eigenvectors) belongs to
/// `eigenvalues()[k]`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition<T> {
    eigenvalues: Vec<T>,
    eigenvectors: Array2<T>,
}

impl<T: Scalar> SpectralDecomposition<T> {
    /// Assemble a decomposition from parts (columns paired with eigenvalues).
    ///
    /// Intended for tests that re-orthogonalize degenerate subspaces; no
    /// residual validation is performed here.
    pub fn from_parts(eigenvalues: Vec<T>, eigenvectors: Array2<T>) -> Result<Self> {
        if eigenvectors.nrows() != eigenvalues.len() || eigenvectors.ncols() != eigenvalues.len() {
            return Err(Error::DimensionMismatch {
                expected: eigenvalues.len(),
                found: eigenvectors.nrows(),
            });
        }
        Ok(SpectralDecomposition {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Array2<T> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> ArrayView1<'_, T> {
        self.eigenvectors.column(k)
    }

    /// Indices of eigenvalues within [`Scalar::DEGENERACY_TOL`] of `value`.
    pub fn indices_near(&self, value: T) -> Vec<usize> {
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| (l - value).abs() < T::DEGENERACY_TOL)
            .map(|(k, _)| k)
            .collect()
    }
}

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Convergence is declared when the off-diagonal Frobenius norm drops below
/// `tol * ||M||_F`; [`Scalar::EIGH_TOL`] is the intended default. Input must
/// be symmetric within [`Scalar::SYMMETRY_TOL`] entrywise. The sweep order
/// and tie-breaking are fixed, so the output is deterministic for a given
/// input. Eigenvalues are returned ascending; inside a degenerate tie
/// (closer than [`Scalar::DEGENERACY_TOL`]) columns are ordered by the sign
/// and then the magnitude of their first component.
pub fn eigh<T: Scalar>(m: &Array2<T>, tol: T) -> Result<SpectralDecomposition<T>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.ncols(),
        });
    }
    if tol <= T::zero() {
        return Err(Error::InvalidSpec("eigh tolerance must be positive".into()));
    }
    let mut max_asym = T::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            max_asym = max_asym.max((m[[i, j]] - m[[j, i]]).abs());
        }
    }
    if max_asym > T::SYMMETRY_TOL {
        return Err(Error::NotSymmetric {
            max_asymmetry: max_asym.to_f64().unwrap_or(f64::NAN),
        });
    }
    if n == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: Vec::new(),
            eigenvectors: Array2::zeros((0, 0)),
        });
    }

    let mut a = m.clone();
    // symmetrize exactly so rotations preserve symmetry bit-for-bit
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (a[[i, j]] + a[[j, i]]) / real::<T>(2.0);
            a[[i, j]] = avg;
            a[[j, i]] = avg;
        }
    }
    let mut v: Array2<T> = Array2::eye(n);
    let frob = frobenius(&a);
    let target = tol * frob;

    let mut converged = frob == T::zero() || off_diagonal_norm(&a) <= target;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) <= target;
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            off_norm: off_diagonal_norm(&a).to_f64().unwrap_or(f64::NAN),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[i, i]].partial_cmp(&a[[j, j]]).expect("finite eigenvalues"));
    // deterministic ordering inside degenerate runs: first-component sign,
    // then first-component magnitude
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (a[[order[end], order[end]]] - a[[order[end - 1], order[end - 1]]]).abs() < T::DEGENERACY_TOL
        {
            end += 1;
        }
        if end - start > 1 {
            order[start..end].sort_by(|&i, &j| {
                let key = |k: usize| {
                    let x = v[[0, k]];
                    let sign = if x < T::zero() {
                        -1i8
                    } else if x > T::zero() {
                        1
                    } else {
                        0
                    };
                    (sign, x.abs())
                };
                let (si, mi) = key(i);
                let (sj, mj) = key(j);
                si.cmp(&sj).then(mi.partial_cmp(&mj).expect("finite component"))
            });
        }
        start = end;
    }

    let eigenvalues: Vec<T> = order.iter().map(|&k| a[[k, k]]).collect();
    let mut eigenvectors = Array2::zeros((n, n));
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[[row, col]] = v[[row, k]];
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// [`eigh`] at the precision-appropriate default tolerance.
pub fn eigh_default<T: Scalar>(m: &Array2<T>) -> Result<SpectralDecomposition<T>> {
    eigh(m, T::EIGH_TOL)
}

fn rotate<T: Scalar>(a: &mut Array2<T>, v: &mut Array2<T>, p: usize, q: usize) {
    let apq = a[[p, q]];
    if apq == T::zero() {
        return;
    }
    let app = a[[p, p]];
    let aqq = a[[q, q]];
    let theta = (aqq - app) / (real::<T>(2.0) * apq);
    let t = {
        let denom = theta.abs() + (T::one() + theta * theta).sqrt();
        if theta < T::zero() {
            -denom.recip()
        } else {
            denom.recip()
        }
    };
    let c = (T::one() + t * t).sqrt().recip();
    let s = t * c;
    let n = a.nrows();

    a[[p, p]] = app - t * apq;
    a[[q, q]] = aqq + t * apq;
    a[[p, q]] = T::zero();
    a[[q, p]] = T::zero();
    for k in 0..n {
        if k != p && k != q {
            let akp = a[[k, p]];
            let akq = a[[k, q]];
            let new_p = c * akp - s * akq;
            let new_q = s * akp + c * akq;
            a[[k, p]] = new_p;
            a[[p, k]] = new_p;
            a[[k, q]] = new_q;
            a[[q, k]] = new_q;
        }
    }
    for k in 0..n {
        let vkp = v[[k, p]];
        let vkq = v[[k, q]];
        v[[k, p]] = c * vkp - s * vkq;
        v[[k, q]] = s * vkp + c * vkq;
    }
}

fn frobenius<T: Scalar>(a: &Array2<T>) -> T {
    a.iter().map(|&x| x * x).fold(T::zero(), |s, x| s + x).sqrt()
}

fn off_diagonal_norm<T: Scalar>(a: &Array2<T>) -> T {
    let n = a.nrows();
    let mut sum = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[[i, j]] * a[[i, j]];
            }
        }
    }
    sum.sqrt()
}

/// Star spectrum: `{0 (multiplicity n-1), +sqrt(n) J, -sqrt(n) J}`, ascending.
pub fn analytic_spectrum_star<T: Scalar>(n: usize, j: T) -> Vec<T> {
    let extreme = count::<T>(n).sqrt() * j;
    let mut spectrum = vec![T::zero(); n.saturating_sub(1)];
    spectrum.push(extreme);
    spectrum.push(-extreme);
    sort_ascending(&mut spectrum);
    spectrum
}

/// Two-layer spider spectrum:
/// `{+-1 (multiplicity n-1 each), 0, +-sqrt(1 + n J^2)}`, ascending.
pub fn analytic_spectrum_spider2<T: Scalar>(n: usize, j: T) -> Vec<T> {
    let extreme = (T::one() + count::<T>(n) * j * j).sqrt();
    let mut spectrum = Vec::with_capacity(2 * n + 1);
    for _ in 0..n.saturating_sub(1) {
        spectrum.push(T::one());
        spectrum.push(-T::one());
    }
    spectrum.push(T::zero());
    spectrum.push(extreme);
    spectrum.push(-extreme);
    sort_ascending(&mut spectrum);
    spectrum
}

/// Three-layer spider spectrum:
/// `{0, +-sqrt(2) (multiplicity n-1 each), +-Lambda_+, +-Lambda_-}`, ascending.
pub fn analytic_spectrum_spider3<T: Scalar>(n: usize, j: T) -> Vec<T> {
    let (lambda_plus, lambda_minus) = spider3_frequencies(n, j);
    let sqrt2 = real::<T>(2.0).sqrt();
    let mut spectrum = Vec::with_capacity(3 * n + 1);
    for _ in 0..n.saturating_sub(1) {
        spectrum.push(T::zero());
        spectrum.push(sqrt2);
        spectrum.push(-sqrt2);
    }
    for l in [lambda_plus, lambda_minus] {
        spectrum.push(l);
        spectrum.push(-l);
    }
    sort_ascending(&mut spectrum);
    spectrum
}

fn sort_ascending<T: Scalar>(values: &mut [T]) {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite spectrum"));
}

/// The two positive three-layer spider frequencies
/// `Lambda_+- = sqrt((n J^2 + 2 +- sqrt(n^2 J^4 + 4)) / 2)`.
///
/// `Lambda_-` is evaluated through the conjugate form
/// `Lambda_-^2 = 1 - 2 / (s + n J^2)` with `s = sqrt(n^2 J^4 + 4)`, which
/// avoids the cancellation the printed difference suffers for large `J`.
pub fn spider3_frequencies<T: Scalar>(n: usize, j: T) -> (T, T) {
    let nf = count::<T>(n);
    let nj2 = nf * j * j;
    let s = (nj2 * nj2 + real::<T>(4.0)).sqrt();
    let two = real::<T>(2.0);
    let lambda_plus = ((nj2 + two + s) / two).sqrt();
    let lambda_minus = (T::one() - two / (s + nj2)).sqrt();
    (lambda_plus, lambda_minus)
}

/// Closed-form spectral data of the three-layer spider: the frequencies
/// `Lambda_+-` and the per-branch eigenvector components.
///
/// The four eigenvectors with nonzero center weight have the per-branch
/// pattern `(alpha, beta, gamma)` repeated over all `n` branches with `delta`
/// on the center:
///
/// * eigenvalue `+Lambda_s`: `(alpha_s, beta_s, gamma_s, ..., delta_s)`
/// * eigenvalue `-Lambda_s`: `(-alpha_s, beta_s, -gamma_s, ..., delta_s)`
///
/// For the lower branch `Lambda_-^2 < 2`, so the inner and center components
/// come out negative: the radicands that change sign are evaluated as
/// magnitudes and `gamma_-`, `delta_-` carry an explicit minus sign. This is
/// the real representative of the eigenvector (the literal surds pick up a
/// global factor of `i` on that branch).
#[derive(Clone, Copy, Debug)]
pub struct Spider3Coefficients<T> {
    pub branches: usize,
    pub hopping: T,
    pub lambda_plus: T,
    pub lambda_minus: T,
    /// Leaf components `(alpha_+, alpha_-)`.
    pub alpha: (T, T),
    /// Middle components `(beta_+, beta_-)`.
    pub beta: (T, T),
    /// Inner components `(gamma_+, gamma_-)`.
    pub gamma: (T, T),
    /// Center components `(delta_+, delta_-)`.
    pub delta: (T, T),
}

/// Evaluate the three-layer spider eigenvector coefficients.
///
/// Requires `n >= 1` and `J > 0`. Every radicand is provably nonnegative in
/// that regime and is asserted, never clamped.
pub fn spider3_coefficients<T: Scalar>(n: usize, j: T) -> Result<Spider3Coefficients<T>> {
    if n == 0 {
        return Err(Error::InvalidSpec("spider needs at least one branch".into()));
    }
    if j <= T::zero() || !j.is_finite() {
        return Err(Error::InvalidSpec(format!(
            "spider3 coefficients need J > 0, got {j}"
        )));
    }
    let nf = count::<T>(n);
    let two = real::<T>(2.0);
    let four = real::<T>(4.0);
    let nj2 = nf * j * j;
    let s = (nj2 * nj2 + four).sqrt();
    let quartic_root = s.sqrt();
    // cancellation-free difference: s - n J^2 = 4 / (s + n J^2)
    let s_minus_nj2 = four / (s + nj2);
    // n J^2 - 2 + s = n J^2 + n^2 J^4 / (s + 2), likewise free of cancellation
    let nj2_minus2_plus_s = nj2 + nj2 * nj2 / (s + two);

    let plus_radicands = [nj2 + s, nj2_minus2_plus_s];
    let minus_radicands = [s_minus_nj2, s_minus_nj2 + two];
    for r in plus_radicands.iter().chain(&minus_radicands) {
        assert!(
            *r >= T::zero(),
            "spider3 radicand went negative for n = {n}, J = {j}"
        );
    }

    let (lambda_plus, lambda_minus) = spider3_frequencies(n, j);
    let alpha_plus = (quartic_root * (nf * (nj2 + s)).sqrt()).recip();
    let beta_plus = j / (quartic_root * nj2_minus2_plus_s.sqrt());
    let gamma_plus = (nj2 + s).sqrt() / (two * nf.sqrt() * quartic_root);
    let delta_plus = nj2_minus2_plus_s.sqrt() / (two * quartic_root);

    let alpha_minus = (quartic_root * (nf * s_minus_nj2).sqrt()).recip();
    let beta_minus = j / (quartic_root * (s_minus_nj2 + two).sqrt());
    let gamma_minus = -s_minus_nj2.sqrt() / (two * nf.sqrt() * quartic_root);
    let delta_minus = -(s_minus_nj2 + two).sqrt() / (two * quartic_root);

    Ok(Spider3Coefficients {
        branches: n,
        hopping: j,
        lambda_plus,
        lambda_minus,
        alpha: (alpha_plus, alpha_minus),
        beta: (beta_plus, beta_minus),
        gamma: (gamma_plus, gamma_minus),
        delta: (delta_plus, delta_minus),
    })
}

impl<T: Scalar> Spider3Coefficients<T> {
    /// The four eigenvalues with center weight: `[+L_+, -L_+, +L_-, -L_-]`.
    pub fn eigenvalues(&self) -> [T; 4] {
        [
            self.lambda_plus,
            -self.lambda_plus,
            self.lambda_minus,
            -self.lambda_minus,
        ]
    }

    /// Assembled eigenvector for [`eigenvalues`](Self::eigenvalues)`()[k]`,
    /// laid out as `n` repetitions of (leaf, middle, inner) plus the center.
    pub fn eigenvector(&self, k: usize) -> Vec<T> {
        assert!(k < 4, "eigenvector index must be 0..4");
        let (alpha, beta, gamma, delta) = if k < 2 {
            (self.alpha.0, self.beta.0, self.gamma.0, self.delta.0)
        } else {
            (self.alpha.1, self.beta.1, self.gamma.1, self.delta.1)
        };
        let flip = if k % 2 == 1 { -T::one() } else { T::one() };
        let mut v = Vec::with_capacity(3 * self.branches + 1);
        for _ in 0..self.branches {
            v.push(flip * alpha);
            v.push(beta);
            v.push(flip * gamma);
        }
        v.push(delta);
        v
    }

    /// The products `(alpha_+ delta_+, alpha_- delta_-)` entering the
    /// center-vertex amplitude; each equals `<1|phi><center|phi>` for the
    /// corresponding `+Lambda` eigenvector.
    pub fn center_overlap_products(&self) -> (T, T) {
        (self.alpha.0 * self.delta.0, self.alpha.1 * self.delta.1)
    }
}
