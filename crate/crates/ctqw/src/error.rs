//! Error type shared by all modules.
//!
//! Diagnostics are carried as `f64` regardless of the working scalar so the
//! error type stays non-generic.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("vertex {vertex} out of range 1..={num_vertices}")]
    VertexOutOfRange { vertex: usize, num_vertices: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix not symmetric: max |M[i][j] - M[j][i]| = {max_asymmetry:e}")]
    NotSymmetric { max_asymmetry: f64 },
    #[error("eigensolver did not converge in {sweeps} sweeps; off-diagonal norm {off_norm:e}")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("state not normalized: sum |a|^2 = {norm_sq} (input is rejected, not renormalized)")]
    NotNormalized { norm_sq: f64 },
    #[error("vertex {vertex} is not a leaf")]
    NotLeaf { vertex: usize },
    #[error("duplicate vertex {vertex} in coefficient list")]
    DuplicateVertex { vertex: usize },
    #[error("graph was not built as a {expected}")]
    WrongFamily { expected: &'static str },
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("omega must lie in [0, 1], got {omega}")]
    OmegaOutOfRange { omega: f64 },
    #[error(
        "density invariant breached at t = {time:.6}: trace error {trace_error:e}, \
         min eigenvalue {min_eigenvalue:e}"
    )]
    InvariantBreach {
        time: f64,
        trace_error: f64,
        min_eigenvalue: f64,
    },
    #[error("time {tau} outside the recorded range [{t_min}, {t_max}]")]
    TauOutOfRange { tau: f64, t_min: f64, t_max: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
