//! Both sides of every eigenvalue inequality, with signed slack.

mod main_bound;
mod recursion;
mod report;
mod spectral;

pub use main_bound::{main_bound, main_bound_all, proof_identities_audit, MainBoundTerms, ProofScratch};
pub use recursion::{recursion_check, RecursionState, RecursionTrace, STEP_RTOL};
pub use report::{Check, InequalityReport, SLACK_TOL};
pub use spectral::{
    abelian_quotient_check, hile_protter_check, lambda2_bound, max_delta, ppw_bound, ratio_bound,
    trace_check, yang_check, yang_second_bound, yang_type_check, DEGENERACY_TOL,
};
