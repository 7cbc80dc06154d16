//! Hallucination probability: exact evaluation on finite supports, Monte
//! Carlo estimation with Hoeffding intervals, and seeded multi-trial
//! experiments over freshly drawn qualified training sets.
//!
//! Trial `i` of row `j` draws from a ChaCha8 stream keyed by the master seed
//! with stream id `(j << 32) | i`, so results do not depend on how trials are
//! scheduled across threads.

use std::io::Write;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flrm::{MemorizerModel, Predictor, Trainer};
use crate::measures::StringDistribution;
use crate::oracle::{generate_qualified, GroundTruth, Labeler};
use crate::rational::{self, serde_rational_opt, Rational};
use crate::strings::{Alphabet, Str};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HpMethod {
    Exact,
    MonteCarlo,
}

/// `HP_μ(h) = Pr(h(S) ∉ F₀(S))`, exact or estimated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HallucinationReport {
    pub estimate: f64,
    pub method: HpMethod,
    #[serde(
        default,
        with = "serde_rational_opt",
        skip_serializing_if = "Option::is_none"
    )]
    pub exact: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ci_halfwidth: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
}

fn hp_over_support<P: Predictor + ?Sized>(
    predictor: &P,
    support: &[(Str, Rational)],
    gt: &GroundTruth,
) -> Rational {
    support
        .iter()
        .filter(|(s, _)| !gt.accepts(s, &predictor.predict(s)))
        .map(|(_, p)| p)
        .sum()
}

fn exact_report(hp: Rational) -> HallucinationReport {
    HallucinationReport {
        estimate: rational::to_f64(&hp),
        method: HpMethod::Exact,
        exact: Some(hp),
        sample_count: None,
        ci_halfwidth: None,
        confidence: None,
    }
}

/// Exact hallucination probability by summing over the support of `mu`.
pub fn exact_hp<P: Predictor + ?Sized>(
    predictor: &P,
    mu: &StringDistribution,
    gt: &GroundTruth,
) -> Result<HallucinationReport> {
    let support = mu.support().ok_or_else(|| {
        Error::Unsupported("exact HP needs a finite, enumerable support; use mc_hp".into())
    })?;
    Ok(exact_report(hp_over_support(predictor, &support, gt)))
}

/// Two-sided Hoeffding half-width `sqrt(ln(2/(1−confidence)) / (2n))`.
pub fn hoeffding_halfwidth(n_samples: u64, confidence: f64) -> f64 {
    ((2.0 / (1.0 - confidence)).ln() / (2.0 * n_samples as f64)).sqrt()
}

/// Monte Carlo estimate of the hallucination probability from `n_samples`
/// i.i.d. draws.
pub fn mc_hp<P: Predictor + ?Sized, R: Rng + ?Sized>(
    predictor: &P,
    mu: &StringDistribution,
    gt: &GroundTruth,
    n_samples: u64,
    confidence: f64,
    rng: &mut R,
) -> Result<HallucinationReport> {
    if n_samples == 0 {
        return Err(Error::Domain("n_samples must be at least 1".into()));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain(format!(
            "confidence {confidence} must lie in (0, 1)"
        )));
    }
    let misses = (0..n_samples)
        .filter(|_| {
            let s = mu.sample(rng);
            !gt.accepts(&s, &predictor.predict(&s))
        })
        .count();
    Ok(HallucinationReport {
        estimate: misses as f64 / n_samples as f64,
        method: HpMethod::MonteCarlo,
        exact: None,
        sample_count: Some(n_samples),
        ci_halfwidth: Some(hoeffding_halfwidth(n_samples, confidence)),
        confidence: Some(confidence),
    })
}

/// Generator for trial `stream` under `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalSettings {
    pub labeler: Labeler,
    /// Draws per Monte Carlo estimate when the support is infinite.
    pub mc_samples: u64,
    pub confidence: f64,
}

impl Default for EvalSettings {
    fn default() -> Self {
        EvalSettings {
            labeler: Labeler::Canonical,
            mc_samples: 10_000,
            confidence: 0.95,
        }
    }
}

/// Outcome of repeated train-and-evaluate trials at one training size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegligibilityReport {
    pub m: u64,
    pub trials: u64,
    pub epsilon_h: f64,
    pub epsilon_t: f64,
    pub exceed_count: u64,
    pub exceed_fraction: f64,
    /// Normal-approximation 95% half-width of `exceed_fraction`.
    pub binomial_ci_halfwidth: f64,
    pub mean_hp: f64,
    pub std_hp: f64,
    pub seed: u64,
}

/// One row of a sweep; the field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub m: u64,
    pub trials: u64,
    pub mean_hp: f64,
    pub std_hp: f64,
    pub exceed_fraction: f64,
    pub ci_halfwidth: f64,
    pub seed: u64,
}

impl From<&NegligibilityReport> for SweepRow {
    fn from(r: &NegligibilityReport) -> Self {
        SweepRow {
            m: r.m,
            trials: r.trials,
            mean_hp: r.mean_hp,
            std_hp: r.std_hp,
            exceed_fraction: r.exceed_fraction,
            ci_halfwidth: r.binomial_ci_halfwidth,
            seed: r.seed,
        }
    }
}

pub fn binomial_halfwidth_95(fraction: f64, trials: u64) -> f64 {
    1.96 * (fraction * (1.0 - fraction) / trials as f64).sqrt()
}

/// A trainer, a distribution and a ground truth, ready for repeated trials.
pub struct Experiment<'a, T> {
    trainer: &'a T,
    mu: &'a StringDistribution,
    gt: &'a GroundTruth,
    settings: EvalSettings,
    support: Option<Vec<(Str, Rational)>>,
}

impl<'a, T: Trainer + Sync> Experiment<'a, T> {
    pub fn new(
        trainer: &'a T,
        mu: &'a StringDistribution,
        gt: &'a GroundTruth,
        settings: EvalSettings,
    ) -> Self {
        Experiment {
            trainer,
            mu,
            gt,
            settings,
            support: mu.support(),
        }
    }

    /// Draws one qualified training sequence of length `m`, trains on it and
    /// returns the hallucination probability of the result, exact when the
    /// support is finite.
    pub fn run_trial<R: Rng + ?Sized>(&self, m: u64, rng: &mut R) -> Result<f64> {
        let m = usize::try_from(m).map_err(|_| Error::Overflow("training size"))?;
        let t = generate_qualified(self.mu, self.gt, m, self.settings.labeler, rng);
        let model = self.trainer.train(&t);
        match &self.support {
            Some(support) => Ok(rational::to_f64(&hp_over_support(&model, support, self.gt))),
            None => {
                let r = mc_hp(
                    &model,
                    self.mu,
                    self.gt,
                    self.settings.mc_samples,
                    self.settings.confidence,
                    rng,
                )?;
                Ok(r.estimate)
            }
        }
    }

    fn trials_at(&self, m: u64, trials: u64, seed: u64, row: u64) -> Result<Vec<f64>> {
        if trials == 0 {
            return Err(Error::Domain("at least one trial is required".into()));
        }
        if trials > u32::MAX as u64 || row > u32::MAX as u64 {
            return Err(Error::Overflow("trial stream id"));
        }
        (0..trials)
            .into_par_iter()
            .map(|i| self.run_trial(m, &mut trial_rng(seed, (row << 32) | i)))
            .collect()
    }

    fn report(
        &self,
        m: u64,
        hps: &[f64],
        epsilon_h: f64,
        epsilon_t: f64,
        seed: u64,
    ) -> NegligibilityReport {
        let trials = hps.len() as u64;
        let exceed_count = hps.iter().filter(|&&hp| hp >= epsilon_h).count() as u64;
        let exceed_fraction = exceed_count as f64 / trials as f64;
        let mean_hp = hps.iter().sum::<f64>() / trials as f64;
        let std_hp = if trials > 1 {
            (hps.iter().map(|hp| (hp - mean_hp).powi(2)).sum::<f64>() / (trials - 1) as f64).sqrt()
        } else {
            0.0
        };
        NegligibilityReport {
            m,
            trials,
            epsilon_h,
            epsilon_t,
            exceed_count,
            exceed_fraction,
            binomial_ci_halfwidth: binomial_halfwidth_95(exceed_fraction, trials),
            mean_hp,
            std_hp,
            seed,
        }
    }

    /// Runs `trials` independent trials at size `m` and counts how often the
    /// hallucination probability reaches `epsilon_h`. This checks the
    /// configured labeler only; it is evidence, not a proof.
    pub fn negligibility_experiment(
        &self,
        m: u64,
        trials: u64,
        epsilon_h: f64,
        epsilon_t: f64,
        seed: u64,
    ) -> Result<NegligibilityReport> {
        let hps = self.trials_at(m, trials, seed, 0)?;
        Ok(self.report(m, &hps, epsilon_h, epsilon_t, seed))
    }

    /// One row per grid point, each from its own block of trial streams.
    pub fn sweep(
        &self,
        m_grid: &[u64],
        trials: u64,
        epsilon_h: f64,
        seed: u64,
    ) -> Result<Vec<SweepRow>> {
        if m_grid.is_empty() {
            return Err(Error::Domain("sweep grid is empty".into()));
        }
        m_grid
            .iter()
            .enumerate()
            .map(|(row, &m)| {
                let hps = self.trials_at(m, trials, seed, row as u64)?;
                Ok(SweepRow::from(&self.report(
                    m,
                    &hps,
                    epsilon_h,
                    f64::NAN,
                    seed,
                )))
            })
            .collect()
    }
}

/// Writes rows as CSV with the header
/// `m,trials,mean_hp,std_hp,exceed_fraction,ci_halfwidth,seed`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)
            .map_err(|e| Error::Unsupported(format!("csv output failed: {e}")))?;
    }
    w.flush()
        .map_err(|e| Error::Unsupported(format!("csv output failed: {e}")))?;
    Ok(())
}

/// Why a well-trained memorizer still hallucinates on infinitely many
/// inputs while its hallucination probability is small.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoexistenceDiagnostic {
    pub threshold: i64,
    pub table_size: usize,
    /// First hallucinated inputs in shortlex order.
    pub witnesses: Vec<Str>,
    /// Every input longer than the threshold gets `""`, and the ground truth
    /// rejects `""` on all such inputs outside its finite overrides.
    pub hallucination_set_infinite: bool,
    /// `Pr(len(S) > threshold)`.
    #[serde(with = "crate::rational::serde_rational")]
    pub mass_beyond_threshold: Rational,
    /// `mu` puts positive mass on every length past the threshold.
    pub positive_mass_at_every_longer_length: bool,
}

pub fn coexistence_diagnostic(
    model: &MemorizerModel,
    alphabet: &Alphabet,
    mu: &StringDistribution,
    gt: &GroundTruth,
    witnesses: usize,
) -> CoexistenceDiagnostic {
    let first_longer = (model.threshold() + 1) as u64;
    // Scan a bounded window so a ground truth that accepts "" everywhere
    // cannot stall the search.
    let window = alphabet
        .count_upto(first_longer as u32 + 4)
        .unwrap_or(u128::MAX)
        .min(1 << 20);
    let found: Vec<Str> = (0..window)
        .map(|i| alphabet.shortlex_string(i))
        .filter(|s| !gt.accepts(s, &model.predict(s)))
        .take(witnesses)
        .collect();
    let positive = match mu {
        StringDistribution::LengthFactored(l) => l.positive_at_every_length_from(first_longer),
        _ => false,
    };
    CoexistenceDiagnostic {
        threshold: model.threshold(),
        table_size: model.table().len(),
        witnesses: found,
        hallucination_set_infinite: gt.rejects_empty_output_on_long_inputs(),
        mass_beyond_threshold: mu.length_tail(first_longer),
        positive_mass_at_every_longer_length: positive,
    }
}

/// Convenience for callers that only need the exact value.
pub fn exact_hp_value<P: Predictor + ?Sized>(
    predictor: &P,
    mu: &StringDistribution,
    gt: &GroundTruth,
) -> Result<Rational> {
    exact_hp(predictor, mu, gt).map(|r| r.exact.unwrap_or_else(Rational::zero))
}
