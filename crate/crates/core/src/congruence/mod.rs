//! Congruence statements about `pod(n)` as data, their instantiation over
//! `(p, α, N)`, range verification, candidate search, and coefficientwise
//! replay of the identity chains behind them.

mod family;
mod recursions;
mod replay;
mod report;
mod verify;

pub use family::{
    builtin_families, check_side_conditions, family, instantiate, smallest_admissible_n, Affine,
    CongruenceFamily, FamilyForm, FamilyInstance, IndexRule, NParam, ParametricRule, Progression,
    ProgressionRule, RelationSpec, SideCondition, Substitution, Target,
};
pub use recursions::verify_recursions;
pub use replay::{replay_identity, Identity, MIN_TRUNC};
pub use report::{Counterexample, Status, VerificationReport, COUNTEREXAMPLE_CAP};
pub use verify::{
    grid_instances, required_limit, search_progressions, sweep_grid, verify_instance,
    verify_progression, verify_relation, verify_relation_with, Candidate, GridOutcome, GridSpec,
    SkippedInstance, MAX_TABLE_LIMIT, SINGLE_INDEX_THRESHOLD,
};
