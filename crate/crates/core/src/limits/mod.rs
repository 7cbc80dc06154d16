//! Sample-size bounds and adversarial constructions: how much data the
//! memorizer needs, how little data defeats every learner, and explicit
//! instances that exhibit both.

pub mod diagonal;
pub mod hard_support;
pub mod markov;
pub mod necessity;
pub mod nfl;
pub mod sufficiency;

pub use diagonal::{
    diagonalize, random_table_models, verify_diagonal, DiagonalConstruction, DiagonalRow,
};
pub use hard_support::construct_hard_support;
pub use markov::{markov_tail_check, MarkovCheck};
pub use necessity::{general_lambda_t, lambda_t, nfl_objective, nfl_sizes, NecessityBound};
pub use nfl::{
    flrm_for_domain, nfl_brute_force, nfl_required_budget, NflInstance, NflReport, TailCheck,
    DEFAULT_BUDGET,
};
pub use sufficiency::{required_sample_size, SufficiencyBound};
