//! The finite-length rote memorizer (FLRM): a trainer that memorizes every
//! training pair whose input is no longer than a threshold chosen from the
//! sample size and the CDF lower bound, and answers `""` everywhere else.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::measures::CdfLowerBound;
use crate::oracle::TrainingSequence;
use crate::strings::{Alphabet, Str};

/// A deterministic total map Σ* → Σ*.
pub trait Predictor {
    fn predict(&self, s: &Str) -> Str;
}

impl<F: Fn(&Str) -> Str> Predictor for F {
    fn predict(&self, s: &Str) -> Str {
        self(s)
    }
}

impl Predictor for Box<dyn Predictor + Send + Sync> {
    fn predict(&self, s: &Str) -> Str {
        (**self).predict(s)
    }
}

/// A map from training sequences to predictors.
pub trait Trainer {
    type Model: Predictor;

    fn train(&self, t: &TrainingSequence) -> Self::Model;
}

/// `(|Σ|^{n+1} / (1 − CDF̄(n))) · ln(|Σ|^{n+1} / (2(1 − CDF̄(n))))`, the data
/// size the memorizer needs before it trusts inputs of length `n`. Infinite
/// when `CDF̄(n) = 1`.
pub fn memorization_cost(alphabet: &Alphabet, bound: &CdfLowerBound, n: u64) -> f64 {
    let defect = bound.defect_f64(n);
    if defect <= 0.0 {
        return f64::INFINITY;
    }
    let level = (alphabet.size() as f64).powf(n as f64 + 1.0);
    level / defect * (level / (2.0 * defect)).ln()
}

/// Largest `n ≥ 0` with `m > memorization_cost(n)`, or −1 if there is none.
pub fn threshold_length(m: u64, alphabet: &Alphabet, bound: &CdfLowerBound) -> i64 {
    let m = m as f64;
    let mut best = -1i64;
    for n in 0u64.. {
        // The cost is at least its value for CDF̄(n) = 0, which grows without
        // bound in n; once that floor reaches m nothing further qualifies.
        let level = (alphabet.size() as f64).powf(n as f64 + 1.0);
        if level * (level / 2.0).ln() >= m {
            break;
        }
        if m > memorization_cost(alphabet, bound, n) {
            best = n as i64;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Entry {
    s: Str,
    y: Str,
}

#[derive(Serialize, Deserialize)]
struct MemorizerRepr {
    threshold: i64,
    table: Vec<Entry>,
}

/// The model FLRM returns: a lookup table plus the empty-string default.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "MemorizerRepr", into = "MemorizerRepr")]
pub struct MemorizerModel {
    threshold: i64,
    table: BTreeMap<Str, Str>,
}

impl From<MemorizerRepr> for MemorizerModel {
    fn from(r: MemorizerRepr) -> Self {
        MemorizerModel {
            threshold: r.threshold,
            table: r.table.into_iter().map(|e| (e.s, e.y)).collect(),
        }
    }
}

impl From<MemorizerModel> for MemorizerRepr {
    fn from(m: MemorizerModel) -> Self {
        MemorizerRepr {
            threshold: m.threshold,
            table: m.table.into_iter().map(|(s, y)| Entry { s, y }).collect(),
        }
    }
}

impl MemorizerModel {
    pub fn threshold(&self) -> i64 {
        self.threshold
    }

    pub fn table(&self) -> &BTreeMap<Str, Str> {
        &self.table
    }

    pub fn is_memorized(&self, s: &Str) -> bool {
        self.table.contains_key(s)
    }

    /// Strings the model answers with its default, in shortlex order. The
    /// table is finite, so this never runs dry.
    pub fn unmemorized<'a>(&'a self, alphabet: &'a Alphabet) -> impl Iterator<Item = Str> + 'a {
        (0u128..)
            .map(|i| alphabet.shortlex_string(i))
            .filter(|s| !self.table.contains_key(s))
    }
}

impl Predictor for MemorizerModel {
    fn predict(&self, s: &Str) -> Str {
        self.table.get(s).cloned().unwrap_or_default()
    }
}

/// Runs the memorizer on `t`. Later pairs overwrite earlier ones with the
/// same input.
pub fn train(t: &TrainingSequence, alphabet: &Alphabet, bound: &CdfLowerBound) -> MemorizerModel {
    let threshold = threshold_length(t.len() as u64, alphabet, bound);
    let mut table = BTreeMap::new();
    for (s, y) in t.iter() {
        if (s.len() as i64) <= threshold {
            table.insert(s.clone(), y.clone());
        }
    }
    MemorizerModel { threshold, table }
}

/// FLRM as a [`Trainer`].
#[derive(Clone, Debug, PartialEq)]
pub struct Flrm {
    pub alphabet: Alphabet,
    pub bound: CdfLowerBound,
}

impl Flrm {
    pub fn new(alphabet: Alphabet, bound: CdfLowerBound) -> Self {
        Flrm { alphabet, bound }
    }
}

impl Trainer for Flrm {
    type Model = MemorizerModel;

    fn train(&self, t: &TrainingSequence) -> MemorizerModel {
        train(t, &self.alphabet, &self.bound)
    }
}

/// Lookup table with an arbitrary fallback output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LookupModel {
    pub table: BTreeMap<Str, Str>,
    pub fallback: Str,
}

impl Predictor for LookupModel {
    fn predict(&self, s: &Str) -> Str {
        self.table.get(s).unwrap_or(&self.fallback).clone()
    }
}

/// Memorizes every training pair regardless of length and answers a fixed
/// string otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemorizeThenConstant {
    pub fallback: Str,
}

impl Trainer for MemorizeThenConstant {
    type Model = LookupModel;

    fn train(&self, t: &TrainingSequence) -> LookupModel {
        LookupModel {
            table: t.iter().cloned().collect(),
            fallback: self.fallback.clone(),
        }
    }
}
