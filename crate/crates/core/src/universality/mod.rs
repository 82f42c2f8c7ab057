//! Target functions, the degree-window decomposition of `log L`, and searches
//! for characters whose L-function approximates a target.

mod decompose;
mod search;
mod split;
mod target;

pub use decompose::{decompose_log_l, f1_principal, f3_value, f4_bound_shapes, Decomposition};
pub use search::{
    character_sieve, family_distances, guided_search, h_positive_set, sup_distance,
    universality_search, with_zero_targets, CharDistance, GuidedReport, SearchReport, SEARCH_LIMIT,
};
pub use split::{good_bad_split, SplitReport};
pub use target::{continued_log, TargetFunction, TargetKind};
