//! Analytic center-vertex probability laws for walks started from one leaf,
//! plus their large-hopping approximations. These serve as oracles against
//! the numeric engine and back the `verify` CLI subcommand.
//!
//! The `sin^4` half-angle forms are evaluated as written rather than
//! expanded, which avoids cancellation near the zeros.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{count, real, Scalar};
use crate::spectral::spider3_coefficients;

/// Star center probability `sin^2(J sqrt(n) t) / n` for `psi(0) = |1>`.
pub fn star_center_prob<T: Scalar>(n: usize, j: T, t: T) -> T {
    let freq = j * count::<T>(n).sqrt();
    (freq * t).sin().powi(2) / count::<T>(n)
}

/// Two-layer spider center probability
/// `4 J^2 / (1 + n J^2)^2 * sin^4(t sqrt(1 + n J^2) / 2)` for `psi(0) = |1>`.
pub fn spider2_center_prob<T: Scalar>(n: usize, j: T, t: T) -> T {
    let mu = (T::one() + count::<T>(n) * j * j).sqrt();
    let amplitude = real::<T>(4.0) * j * j / (mu * mu).powi(2);
    amplitude * (t * mu / real::<T>(2.0)).sin().powi(4)
}

/// Large-hopping approximation `4 / (n^2 J^2) * sin^4(J t sqrt(n) / 2)`.
///
/// Documented validity is `J >> 1`; it is still evaluated at any `J` so the
/// finite-`J` envelopes can be plotted against the exact law.
pub fn spider2_center_prob_large_j<T: Scalar>(n: usize, j: T, t: T) -> T {
    let nf = count::<T>(n);
    let amplitude = real::<T>(4.0) / (nf * nf * j * j);
    amplitude * (j * t * nf.sqrt() / real::<T>(2.0)).sin().powi(4)
}

/// Three-layer spider center amplitude
/// `-2i [a_+ d_+ sin(L_+ t) + a_- d_- sin(L_- t)]` for `psi(0) = |1>`;
/// purely imaginary, and `|amplitude|^2` is the exact center probability.
pub fn spider3_center_amplitude<T: Scalar>(n: usize, j: T, t: T) -> Result<Complex<T>> {
    let c = spider3_coefficients(n, j)?;
    let (pp, pm) = c.center_overlap_products();
    let s = pp * (c.lambda_plus * t).sin() + pm * (c.lambda_minus * t).sin();
    Ok(Complex::new(T::zero(), -real::<T>(2.0) * s))
}

/// `|spider3_center_amplitude|^2`.
pub fn spider3_center_prob<T: Scalar>(n: usize, j: T, t: T) -> Result<T> {
    Ok(spider3_center_amplitude(n, j, t)?.norm_sqr())
}

/// Large-hopping approximation `sin^2(t) / (n^2 J^2)` for the three-layer
/// spider center probability; terms falling off like `J^-3` and faster are
/// dropped. Documented validity is `J >> 1`.
pub fn spider3_center_prob_large_j<T: Scalar>(n: usize, j: T, t: T) -> T {
    let nf = count::<T>(n);
    t.sin().powi(2) / (nf * nf * j * j)
}

/// Which analytic law to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormKind {
    StarExact,
    Spider2Exact,
    Spider2LargeJ,
    Spider3Amplitude,
    Spider3LargeJ,
}

impl ClosedFormKind {
    pub fn name(self) -> &'static str {
        match self {
            ClosedFormKind::StarExact => "star_exact",
            ClosedFormKind::Spider2Exact => "spider2_exact",
            ClosedFormKind::Spider2LargeJ => "spider2_largeJ",
            ClosedFormKind::Spider3Amplitude => "spider3_amplitude",
            ClosedFormKind::Spider3LargeJ => "spider3_largeJ",
        }
    }
}

/// A closed-form law bound to concrete `(n, J)` parameters.
#[derive(Clone, Copy, Debug)]
pub struct ClosedForm<T> {
    pub kind: ClosedFormKind,
    pub branches: usize,
    pub hopping: T,
}

impl<T: Scalar> ClosedForm<T> {
    pub fn new(kind: ClosedFormKind, branches: usize, hopping: T) -> Result<Self> {
        if branches == 0 {
            return Err(Error::InvalidSpec("closed forms need n >= 1".into()));
        }
        if hopping <= T::zero() || !hopping.is_finite() {
            return Err(Error::InvalidSpec("closed forms need J > 0".into()));
        }
        Ok(ClosedForm {
            kind,
            branches,
            hopping,
        })
    }

    /// Center probability at time `t`.
    pub fn eval(&self, t: T) -> T {
        match self.kind {
            ClosedFormKind::StarExact => star_center_prob(self.branches, self.hopping, t),
            ClosedFormKind::Spider2Exact => spider2_center_prob(self.branches, self.hopping, t),
            ClosedFormKind::Spider2LargeJ => {
                spider2_center_prob_large_j(self.branches, self.hopping, t)
            }
            ClosedFormKind::Spider3Amplitude => {
                spider3_center_prob(self.branches, self.hopping, t)
                    .expect("parameters validated at construction")
            }
            ClosedFormKind::Spider3LargeJ => {
                spider3_center_prob_large_j(self.branches, self.hopping, t)
            }
        }
    }
}
