//! Construction, search and verification of fully connected (3,n)-regular
//! QC-LDPC exponent matrices with girth 6 or 8 whose Tanner graphs avoid small
//! elementary trapping sets.
//!
//! - [`matrix`]: exponent matrices and the difference matrices `D` and `DD`.
//! - [`io`]: the plain-text matrix format.
//! - [`cycles`]: 4-, 6- and 8-cycle tests on the exponent matrix.
//! - [`conditions`]: sufficient conditions for trapping-set-free codes.
//! - [`graph`] and [`ets`]: the lifted Tanner graph, BFS girth and exact
//!   trapping-set enumeration, used as an independent check.
//! - [`oracle`]: girth and trapping-set verification of one matrix.
//! - [`search`]: backtracking search for matrices passing the conditions.

pub mod conditions;
pub mod cycles;
pub mod ets;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod report;
pub mod search;

pub use conditions::{
    check_for_girth, check_girth6_etsfree, check_girth8_etsfree, check_lemma7_six_cycle_conditions,
    lower_bound_lifting, ConditionReport, ConditionTag,
};
pub use cycles::{girth_from_exponent, CycleWitness, ExponentGirth};
pub use ets::{classify_harmful, enumerate_ets, EtsRecord, EtsSearch};
pub use graph::{bfs_girth, lift, GraphGirth, TannerGraph};
pub use matrix::{CodeProfile, DifferenceMatrix, ExponentMatrix, PairDifferenceMatrix, TargetGirth};
pub use oracle::{run_oracle, OracleOptions, OracleReport};
pub use search::{find_min_lifting, search, SearchMode, SearchSpec, SymmetryOptions};
