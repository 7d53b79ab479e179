//! Symmetric eigensolver, spectral gap of symmetric stochastic matrices, and
//! the fastest-mixing chain solver.

mod fmmc;
mod jacobi;
mod markov;
mod projection;

pub use fmmc::{fmmc_solve, FmmcConfig, FmmcResult, HistoryRow};
pub use jacobi::{sym_eigen, sym_eigs, SymmetricEigen, MAX_ORDER};
pub use markov::{spectral_summary, MarkovMatrix, SpectralSummary, ROW_SUM_TOL, SYMMETRY_TOL};
pub use projection::{project_to_feasible, FeasibleSetProjector, Projection};
