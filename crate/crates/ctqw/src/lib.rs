//! Continuous-time quantum walks on weighted tree graphs.
//!
//! The toolkit builds weighted star, spider, and Cayley-tree graphs, evolves
//! a walker by the adjacency or Laplacian generator through an exact spectral
//! propagator, checks the runs against closed-form center-vertex laws and two
//! independent integrators (RK4 and scaling-and-squaring), and probes
//! decoherence with a quantum-stochastic-walk master equation.
//!
//! Everything is generic over the floating-point type through [`Scalar`];
//! the `*64` aliases below pin the common `f64` instantiation.
//!
//! Vertex indices are 1-based at every public interface, and the center of a
//! family graph is always the highest index.

pub mod closed_form;
pub mod dynamics;
pub mod error;
pub mod export;
pub mod graph;
pub mod matexp;
pub mod open_system;
pub mod scalar;
pub mod spectral;
pub mod state;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use closed_form::{
    spider2_center_prob, spider2_center_prob_large_j, spider3_center_amplitude,
    spider3_center_prob, spider3_center_prob_large_j, star_center_prob, ClosedForm,
    ClosedFormKind,
};
pub use dynamics::{
    log_log_slope, max_vertex_probability, plan, plan_from_decomposition, schrodinger_rk4,
    transfer_scaling, EvolutionPlan, Generator, TimeGrid, TraceSeries, TransferPoint,
    TransferScaling,
};
pub use graph::{
    build_cayley, build_cycle, build_spider, build_star, cayley_mapping_weight, Family,
    FamilySpec, Role, WeightedGraph,
};
pub use open_system::{
    build_lindblad_set, cumulative_center_probability, cumulative_probability, evolve_density,
    lindblad_rhs, DensityEvolution, DensityMatrix, DissipatorForm, LindbladOp, LindbladSet,
};
pub use spectral::{
    analytic_spectrum_spider2, analytic_spectrum_spider3, analytic_spectrum_star, eigh,
    eigh_default, spider3_coefficients, spider3_frequencies, SpectralDecomposition,
    Spider3Coefficients,
};
pub use state::{
    basis_state, cayley_branch_state, leaf_superposition, phased_leaf_state, InitialState,
    StateVector,
};

/// Complex number over the working scalar.
pub type Cplx<T> = num_complex::Complex<T>;

/// `f64` instantiations used by the CLI and most downstream code.
pub type C64 = num_complex::Complex<f64>;
pub type Graph64 = WeightedGraph<f64>;
pub type FamilySpec64 = FamilySpec<f64>;
pub type State64 = StateVector<f64>;
pub type Plan64 = EvolutionPlan<f64>;
pub type Trace64 = TraceSeries<f64>;
pub type Density64 = DensityMatrix<f64>;

/// `f32` aliases for the reduced-precision instantiation.
pub type C32 = num_complex::Complex<f32>;
pub type Graph32 = WeightedGraph<f32>;
pub type State32 = StateVector<f32>;
