//! Workbench for two linked results about Euclidean-embedded graphs:
//!
//! * sub-Gaussian random projections down to `O(q log(Δ/ε) / ε²)` dimensions
//!   preserve the (fractional) maximum-weight matching number of a graph whose
//!   edge weights are `‖f(u) − f(v)‖^q`;
//! * the optimal spectral gap `γ*` of a symmetric random walk supported on a
//!   graph sits between `Ψ*² / log Δ` and `Ψ*`, where `Ψ*` is the vertex
//!   conductance.
//!
//! The crate provides exact/LP matching solvers, random projectors with
//! Monte-Carlo distortion diagnostics, a Jacobi eigensolver, a projected
//! subgradient solver for the fastest-mixing chain, exhaustive vertex
//! conductance, and experiment drivers tying them together.

pub mod conductance;
pub mod dimred;
pub mod error;
pub mod graph;
pub mod matching;
pub mod pipeline;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
