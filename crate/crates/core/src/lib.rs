//! Combinatorial Whitney stratification of coordinate projections on affine
//! toric varieties.
//!
//! The pipeline reads a parametric binomial ideal ([`parser`]), computes the
//! exact point configuration of its toric variety ([`lattice`]), enumerates
//! the face lattices of `conv(A)` and `cone(A)` ([`polyhedral`]), assigns
//! strata to faces ([`stratifier`]) and checks the analytic claims by
//! sampling the torus ([`verifier`]). [`export`] holds the wire formats.

pub mod export;
pub mod lattice;
pub mod matrix;
pub mod parser;
pub mod polyhedral;
pub mod stratifier;
pub mod verifier;

pub use lattice::{
    hnf, is_saturated_rowlattice, kernel_basis, snf, subconfig_kernel, PointConfiguration,
};
pub use matrix::IntMatrix;
pub use parser::{parse_input, Field, Generator, ParseError, ProblemSpec, Sign};
pub use polyhedral::{Face, FaceLattice, Hyperplane, LatticeKind};
pub use stratifier::{
    stratify, stratify_configuration, stratify_with, FaceRecord, OrbitComponent, Stratification,
    StratifyError, StratifyOptions,
};
pub use verifier::{
    fiber_count, fiber_transport, jacobian_rank_check, sample_torus, verify_all, verify_stratification,
    FiberCount, Tolerances, TorusSample, TransportResult, VerificationReport, VerifyError, VerifyOptions,
};
