//! JSON run configurations, one per subcommand. Every optional field has a
//! default so the resolved config written into artifacts is complete.

use negligible::limits::DEFAULT_BUDGET;
use negligible::oracle::GroundTruthSpec;
use negligible::rational::{serde_rational, serde_rational_vec};
use negligible::{
    Alphabet, CdfLowerBound, Labeler, Rational, SourceModel, Str, StringDistribution,
};
use serde::{Deserialize, Serialize};

fn default_mc_samples() -> u64 {
    10_000
}

fn default_confidence() -> f64 {
    0.95
}

fn default_witnesses() -> usize {
    5
}

fn default_lambda_grid() -> Vec<Rational> {
    vec![
        negligible::rational::ratio(1, 8),
        negligible::rational::ratio(1, 4),
    ]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    pub alphabet: Alphabet,
    pub bound: CdfLowerBound,
    #[serde(with = "serde_rational")]
    pub epsilon_h: Rational,
    #[serde(with = "serde_rational")]
    pub epsilon_t: Rational,
    #[serde(default)]
    pub seed: u64,
}

/// Fields shared by `train-eval` and `sweep`.
pub struct LearningSetup<'a> {
    pub alphabet: &'a Alphabet,
    pub bound: &'a CdfLowerBound,
    pub distribution: &'a StringDistribution,
    pub ground_truth: &'a GroundTruthSpec,
    pub labeler: Labeler,
    pub mc_samples: u64,
    pub confidence: f64,
    pub horizon: Option<u64>,
}

macro_rules! setup_of {
    ($t:ty) => {
        impl $t {
            pub fn setup(&self) -> LearningSetup<'_> {
                LearningSetup {
                    alphabet: &self.alphabet,
                    bound: &self.bound,
                    distribution: &self.distribution,
                    ground_truth: &self.ground_truth,
                    labeler: self.labeler,
                    mc_samples: self.mc_samples,
                    confidence: self.confidence,
                    horizon: self.horizon,
                }
            }
        }
    };
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainEvalConfig {
    pub alphabet: Alphabet,
    pub bound: CdfLowerBound,
    pub distribution: StringDistribution,
    pub ground_truth: GroundTruthSpec,
    #[serde(default)]
    pub labeler: Labeler,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: u64,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
    /// Lengths checked pointwise before the tails are compared analytically.
    #[serde(default)]
    pub horizon: Option<u64>,
    pub m: u64,
    #[serde(default = "default_witnesses")]
    pub witnesses: usize,
    #[serde(default)]
    pub seed: u64,
}

setup_of!(TrainEvalConfig);

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub alphabet: Alphabet,
    pub bound: CdfLowerBound,
    pub distribution: StringDistribution,
    pub ground_truth: GroundTruthSpec,
    #[serde(default)]
    pub labeler: Labeler,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: u64,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
    /// Lengths checked pointwise before the tails are compared analytically.
    #[serde(default)]
    pub horizon: Option<u64>,
    pub m_grid: Vec<u64>,
    pub trials: u64,
    pub epsilon_h: f64,
    #[serde(default)]
    pub seed: u64,
}

setup_of!(SweepConfig);

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LearnerSpec {
    /// Memorizes every pair; answers `fallback` (default: first codomain
    /// entry) elsewhere.
    MemorizeThenConstant {
        #[serde(default)]
        fallback: Option<Str>,
    },
    /// The memorizer, with `bound` defaulting to the exact length law of the
    /// uniform distribution on the domain.
    Flrm {
        #[serde(default)]
        bound: Option<CdfLowerBound>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NflConfig {
    pub alphabet: Alphabet,
    pub domain: Vec<Str>,
    pub codomain: Vec<Str>,
    pub m: usize,
    pub learner: LearnerSpec,
    #[serde(default = "default_lambda_grid", with = "serde_rational_vec")]
    pub lambda_h: Vec<Rational>,
    #[serde(default = "default_nfl_budget")]
    pub budget: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_nfl_budget() -> u64 {
    DEFAULT_BUDGET as u64
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    #[serde(default)]
    pub entries: Vec<EntrySpec>,
    #[serde(default)]
    pub fallback: Str,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub s: Str,
    pub y: Str,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelsSpec {
    /// `count` seeded random lookup tables over the first `horizon` inputs.
    RandomTables {
        count: usize,
    },
    Tables {
        tables: Vec<TableSpec>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagConfig {
    pub alphabet: Alphabet,
    pub horizon: u64,
    pub models: ModelsSpec,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypicalConfig {
    pub source: SourceModel,
    pub m: u32,
    #[serde(with = "serde_rational")]
    pub delta: Rational,
    pub epsilon: f64,
    #[serde(default = "default_typical_budget")]
    pub budget: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_typical_budget() -> u64 {
    negligible::shannon::DEFAULT_BLOCK_BUDGET as u64
}
