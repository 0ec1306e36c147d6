//! Scalar abstraction over the floating-point types the toolkit runs on.
//!
//! Every numerical routine in this crate is generic over [`Scalar`], so the
//! whole pipeline (graph weights, eigensolver, propagators, density-matrix
//! integration) can be instantiated at `f32` or `f64`. Precision-dependent
//! tolerances live here as associated constants; generic code never hard-codes
//! an `f64` magic number.

use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar driving all numerics in this crate.
pub trait Scalar:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Slack allowed when checking that a state vector has unit norm.
    const STATE_NORM_TOL: Self;
    /// Entrywise tolerance for symmetry checks on operator input.
    const SYMMETRY_TOL: Self;
    /// Default relative convergence threshold for the Jacobi eigensolver
    /// (off-diagonal Frobenius norm versus the input Frobenius norm).
    const EIGH_TOL: Self;
    /// Eigenvalues closer than this are treated as a degenerate tie when
    /// ordering a decomposition.
    const DEGENERACY_TOL: Self;
    /// Entrywise Hermiticity tolerance for density matrices.
    const HERMITICITY_TOL: Self;
    /// Unit-trace tolerance maintained throughout a density integration.
    const TRACE_TOL: Self;
    /// Most negative density-matrix eigenvalue tolerated before a run aborts.
    const POSITIVITY_TOL: Self;
}

impl Scalar for f64 {
    const STATE_NORM_TOL: Self = 1e-12;
    const SYMMETRY_TOL: Self = 1e-12;
    const EIGH_TOL: Self = 1e-14;
    const DEGENERACY_TOL: Self = 1e-12;
    const HERMITICITY_TOL: Self = 1e-10;
    const TRACE_TOL: Self = 1e-8;
    const POSITIVITY_TOL: Self = 1e-6;
}

impl Scalar for f32 {
    const STATE_NORM_TOL: Self = 1e-5;
    const SYMMETRY_TOL: Self = 1e-4;
    const EIGH_TOL: Self = 1e-6;
    const DEGENERACY_TOL: Self = 1e-5;
    const HERMITICITY_TOL: Self = 1e-4;
    const TRACE_TOL: Self = 1e-3;
    const POSITIVITY_TOL: Self = 1e-2;
}

/// Convert an `f64` literal into the working scalar type.
pub(crate) fn real<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Convert a `usize` into the working scalar type.
pub(crate) fn count<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}
