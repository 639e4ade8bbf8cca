//! framelab: a numerical workbench for frame theory in Hilbert space.
//!
//! Given a system of vectors {φₙ} (explicit coordinates, sampled functions
//! with quadrature, an index kernel, the Hilbert-matrix monomials, or a
//! covariance model), the crate builds Gramian truncations, runs the
//! operator diagnostics that frame theory rests on, extracts maximal
//! spectral-band subspaces H(a,b) with verified frame bounds, constructs
//! canonical Parseval frames and reproducing kernels, and ships two
//! executable applications: the Hilbert matrix as an ill-conditioned
//! negative example, and random fields driven by a covariance Gramian.
//!
//! Start with the runnable examples (`cargo run --example band_extraction`,
//! `cargo run --example hilbert_matrix`, ...); each one walks through a
//! capability end to end. The `framelab` binary exposes the same pipelines
//! as config-driven subcommands emitting machine-readable reports.
//!
//! All computations are deterministic: a fixed sweep order in the
//! eigensolver, and seeded splitmix streams for every randomized check.

pub mod fields;
pub mod frames;
pub mod gramian;
pub mod rkhs;
pub mod rng;
pub mod spectral;
pub mod systems;

pub mod config;
pub mod report;
pub mod runner;

mod util;

pub use frames::{FrameBand, SpanVector};
pub use gramian::Gramian;
pub use spectral::{SpectralDecomposition, SymMatrix};
pub use systems::{QuadratureKind, QuadratureRule, VectorSystem};
