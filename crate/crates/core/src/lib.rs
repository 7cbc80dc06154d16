//! Simulation and verification workbench for the hallucination probability
//! of deterministic string-to-string language models.
//!
//! * [`strings`]: alphabets, strings and the shortlex enumeration of Σ*.
//! * [`measures`]: distributions on Σ* and lower bounds on their length CDF.
//! * [`oracle`]: ground-truth acceptable-output maps and qualified training data.
//! * [`flrm`]: the finite-length rote memorizer and the trainer/predictor traits.
//! * [`eval`]: exact and Monte Carlo hallucination probability, trials and sweeps.
//! * [`limits`]: sample-size bounds, exact no-free-lunch enumeration, hard
//!   supports, reverse Markov checks and diagonalization.
//! * [`shannon`]: smallest high-mass block sets for the source-coding check.

pub mod error;
pub mod eval;
pub mod flrm;
pub mod limits;
pub mod measures;
pub mod oracle;
pub mod rational;
pub mod shannon;
pub mod strings;

pub use error::{Error, Result};
pub use eval::{
    EvalSettings, Experiment, HallucinationReport, HpMethod, NegligibilityReport, SweepRow,
};
pub use flrm::{Flrm, LookupModel, MemorizeThenConstant, MemorizerModel, Predictor, Trainer};
pub use limits::{
    DiagonalConstruction, MarkovCheck, NecessityBound, NflInstance, NflReport, SufficiencyBound,
    TailCheck,
};
pub use measures::{BoundTail, CdfLowerBound, StringDistribution};
pub use oracle::{DefaultRule, GroundTruth, Labeler, TrainingSequence};
pub use rational::Rational;
pub use shannon::{SourceModel, TypicalSetReport};
pub use strings::{Alphabet, Str, Symbol};

/// Version string embedded in emitted artifacts.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
