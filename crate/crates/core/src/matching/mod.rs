//! Fractional matching LP (primal and vertex-cover dual), exact maximum-weight
//! matching, and an enumeration oracle.

mod exact;
mod lp;
mod oracle;
pub(crate) mod simplex;

pub use exact::{max_matching_exact, Matching, MAX_GENERAL_COMPONENT_EDGES};
pub use lp::{
    fractional_matching, min_vertex_cover_lp, LpSolveReport, LpStatus, DUALITY_TOL,
    FEASIBILITY_TOL,
};
pub use oracle::{fractional_matching_oracle, ORACLE_MAX_EDGES};
