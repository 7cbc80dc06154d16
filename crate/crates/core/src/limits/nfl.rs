//! Exhaustive no-free-lunch check on a finite instance: over all target maps
//! `f: X → Y` and all training input sequences of length `m`, the worst-case
//! expected hallucination probability of any learner is at least
//! `(p − 1)/(2p)`.
//!
//! Map `q` assigns `codomain[d_j]` to `domain[j]`, where `d_j` is the `j`-th
//! base-`p` digit of `q`, least significant first. Training sequences are
//! indexed the same way in base `n`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flrm::{Flrm, Predictor, Trainer};
use crate::measures::CdfLowerBound;
use crate::oracle::TrainingSequence;
use crate::rational::{int, serde_rational, Rational};
use crate::strings::{Alphabet, Str};

use super::necessity::general_lambda_t;

/// Elementary evaluations (`pⁿ · nᵐ · n`) allowed unless overridden.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceRepr")]
pub struct NflInstance {
    domain: Vec<Str>,
    codomain: Vec<Str>,
    m: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceRepr {
    domain: Vec<Str>,
    codomain: Vec<Str>,
    m: usize,
}

impl TryFrom<InstanceRepr> for NflInstance {
    type Error = Error;
    fn try_from(r: InstanceRepr) -> Result<Self> {
        NflInstance::new(r.domain, r.codomain, r.m)
    }
}

fn distinct(items: &[Str]) -> bool {
    items.iter().collect::<BTreeSet<_>>().len() == items.len()
}

impl NflInstance {
    /// Requires non-empty lists of distinct strings and `m ≤ ⌊n/2⌋`.
    pub fn new(domain: Vec<Str>, codomain: Vec<Str>, m: usize) -> Result<Self> {
        if domain.is_empty() || codomain.is_empty() {
            return Err(Error::InvalidInstance(
                "domain and codomain must be non-empty".into(),
            ));
        }
        if !distinct(&domain) || !distinct(&codomain) {
            return Err(Error::InvalidInstance(
                "domain and codomain entries must be distinct".into(),
            ));
        }
        if 2 * m > domain.len() {
            return Err(Error::InvalidInstance(format!(
                "training size {m} exceeds half the domain size {}",
                domain.len()
            )));
        }
        Ok(NflInstance {
            domain,
            codomain,
            m,
        })
    }

    pub fn domain(&self) -> &[Str] {
        &self.domain
    }

    pub fn codomain(&self) -> &[Str] {
        &self.codomain
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Target map number `q` as a list of outputs aligned with the domain.
    pub fn target(&self, q: u64) -> Vec<Str> {
        digits(q, self.codomain.len() as u64, self.domain.len())
            .map(|d| self.codomain[d].clone())
            .collect()
    }
}

fn digits(mut x: u64, base: u64, len: usize) -> impl Iterator<Item = usize> {
    (0..len).map(move |_| {
        let d = x % base;
        x /= base;
        d as usize
    })
}

/// `pⁿ · nᵐ · n`, or `None` on overflow.
pub fn nfl_required_budget(inst: &NflInstance) -> Option<u128> {
    let n = inst.domain.len() as u128;
    let p = inst.codomain.len() as u128;
    let maps = p.checked_pow(u32::try_from(n).ok()?)?;
    let seqs = n.checked_pow(u32::try_from(inst.m).ok()?)?;
    maps.checked_mul(seqs)?.checked_mul(n)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailCheck {
    #[serde(with = "serde_rational")]
    pub lambda_h: Rational,
    /// Fraction of training sequences whose hallucination probability is at
    /// least `lambda_h`, for the worst-case target map.
    #[serde(with = "serde_rational")]
    pub probability: Rational,
    #[serde(with = "serde_rational")]
    pub lambda_t: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NflReport {
    pub n: usize,
    pub p: usize,
    pub m: usize,
    /// Smallest index among the maps with the largest expected value.
    pub worst_f_index: u64,
    pub worst_f: Vec<Str>,
    #[serde(with = "serde_rational")]
    pub worst_expected_hp: Rational,
    #[serde(with = "serde_rational")]
    pub bound_mu: Rational,
    pub tail_checks: Vec<TailCheck>,
    pub evaluations: u128,
    pub verified: bool,
}

/// Number of training sequences with exactly `w` wrong domain points, for
/// each `w` in `0..=n`.
type Histogram = Vec<u64>;

fn evaluate_map<T: Trainer>(inst: &NflInstance, learner: &T, q: u64) -> Histogram {
    let n = inst.domain.len();
    let f: Vec<usize> = digits(q, inst.codomain.len() as u64, n).collect();
    let seqs = (n as u64).pow(inst.m as u32);
    let mut hist = vec![0u64; n + 1];
    for t in 0..seqs {
        let pairs = digits(t, n as u64, inst.m)
            .map(|x| (inst.domain[x].clone(), inst.codomain[f[x]].clone()))
            .collect();
        let model = learner.train(&TrainingSequence::new(pairs));
        // Outputs outside the codomain never equal a target value, so they
        // are counted wrong like any other mismatch.
        let wrong = (0..n)
            .filter(|&j| model.predict(&inst.domain[j]) != inst.codomain[f[j]])
            .count();
        hist[wrong] += 1;
    }
    hist
}

/// Enumerates every target map and training sequence, refusing when
/// `pⁿ · nᵐ · n` exceeds `budget`. Each `lambda_h` must lie in `(0, 1)`.
pub fn nfl_brute_force<T: Trainer + Sync>(
    inst: &NflInstance,
    learner: &T,
    lambda_h_grid: &[Rational],
    budget: u128,
) -> Result<NflReport> {
    let required = nfl_required_budget(inst).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let n = inst.domain.len();
    let p = inst.codomain.len();
    let levels = lambda_h_grid
        .iter()
        .map(|lh| general_lambda_t(p as u64, lh).map(|lt| (lh.clone(), lt)))
        .collect::<Result<Vec<_>>>()?;
    let maps = (p as u64).pow(n as u32);
    let total_wrong = |h: &Histogram| h.iter().enumerate().map(|(w, c)| w as u64 * c).sum::<u64>();
    let (worst_f_index, hist) = (0..maps)
        .into_par_iter()
        .map(|q| (q, evaluate_map(inst, learner, q)))
        .map(|(q, h)| (q, total_wrong(&h), h))
        .reduce_with(|a, b| {
            if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                b
            } else {
                a
            }
        })
        .map(|(q, _, h)| (q, h))
        .expect("at least one target map");

    let seqs = hist.iter().sum::<u64>();
    let worst_expected_hp = Rational::new(
        BigInt::from(total_wrong(&hist)),
        BigInt::from(seqs) * BigInt::from(n),
    );
    let bound_mu = Rational::new(BigInt::from(p - 1), BigInt::from(2 * p));
    let tail_checks: Vec<TailCheck> = levels
        .into_iter()
        .map(|(lambda_h, lambda_t)| {
            let hits: u64 = hist
                .iter()
                .enumerate()
                .filter(|(w, _)| Rational::new(BigInt::from(*w), BigInt::from(n)) >= lambda_h)
                .map(|(_, c)| c)
                .sum();
            let probability = Rational::new(BigInt::from(hits), BigInt::from(seqs));
            TailCheck {
                holds: probability >= lambda_t,
                lambda_h,
                probability,
                lambda_t,
            }
        })
        .collect();
    let verified = worst_expected_hp >= bound_mu && tail_checks.iter().all(|t| t.holds);
    Ok(NflReport {
        n,
        p,
        m: inst.m,
        worst_f: inst.target(worst_f_index),
        worst_f_index,
        worst_expected_hp,
        bound_mu,
        tail_checks,
        evaluations: required,
        verified,
    })
}

/// The memorizer configured with the exact length law of the uniform
/// distribution on `domain`, so it is a legitimate learner for that input
/// distribution.
pub fn flrm_for_domain(alphabet: &Alphabet, domain: &[Str]) -> Result<Flrm> {
    if domain.is_empty() {
        return Err(Error::InvalidInstance("domain must be non-empty".into()));
    }
    let longest = domain.iter().map(Str::len).max().unwrap_or(0);
    let table = (0..longest)
        .map(|n| {
            int(domain.iter().filter(|s| s.len() <= n).count() as u64) / int(domain.len() as u64)
        })
        .collect();
    Ok(Flrm::new(alphabet.clone(), CdfLowerBound::one_at(table)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flrm::MemorizeThenConstant;
    use crate::rational::ratio;

    fn first(a: &Alphabet, k: u128) -> Vec<Str> {
        (0..k).map(|i| a.shortlex_string(i)).collect()
    }

    fn instance(n: u128, p: u128, m: usize) -> NflInstance {
        let a = Alphabet::binary();
        let domain = first(&a, n);
        let codomain = (0..p).map(|i| a.shortlex_string(i + 1)).collect();
        NflInstance::new(domain, codomain, m).unwrap()
    }

    fn grid() -> Vec<Rational> {
        vec![ratio(1, 8), ratio(1, 4)]
    }

    #[test]
    fn instance_validation() {
        let a = Alphabet::binary();
        assert!(NflInstance::new(first(&a, 4), first(&a, 2), 3).is_err());
        assert!(NflInstance::new(first(&a, 4), vec![], 1).is_err());
        assert!(NflInstance::new(vec![Str::empty(), Str::empty()], first(&a, 2), 1).is_err());
        assert!(NflInstance::new(first(&a, 5), first(&a, 2), 2).is_ok());
        let json = r#"{"domain":[[],[0]],"codomain":[[1]],"m":2}"#;
        assert!(serde_json::from_str::<NflInstance>(json).is_err());
    }

    #[test]
    fn single_output_is_trivially_verified() {
        let inst = instance(2, 1, 1);
        let learner = MemorizeThenConstant {
            fallback: inst.codomain()[0].clone(),
        };
        let r = nfl_brute_force(&inst, &learner, &grid(), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.bound_mu, int(0));
        assert_eq!(r.worst_expected_hp, int(0));
        assert!(r.verified);
    }

    #[test]
    fn memorize_then_constant_four_by_two() {
        let inst = instance(4, 2, 2);
        let learner = MemorizeThenConstant {
            fallback: inst.codomain()[0].clone(),
        };
        let r = nfl_brute_force(&inst, &learner, &grid(), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.evaluations, 16 * 16 * 4);
        assert!(r.worst_expected_hp >= ratio(1, 4));
        // The worst map avoids the fallback everywhere, so the error is the
        // unseen fraction: each point is missed by both draws w.p. (3/4)².
        assert_eq!(r.worst_f, vec![inst.codomain()[1].clone(); 4]);
        assert_eq!(r.worst_expected_hp, ratio(9, 16));
        assert!(r.verified);
    }

    #[test]
    fn memorizer_four_by_two() {
        let inst = instance(4, 2, 2);
        let learner = flrm_for_domain(&Alphabet::binary(), inst.domain()).unwrap();
        let r = nfl_brute_force(&inst, &learner, &grid(), DEFAULT_BUDGET).unwrap();
        assert!(r.worst_expected_hp >= ratio(1, 4));
        assert!(r.verified);
    }

    #[test]
    fn matches_a_direct_sequential_count() {
        let inst = instance(4, 2, 2);
        let learner = MemorizeThenConstant {
            fallback: inst.codomain()[0].clone(),
        };
        let r = nfl_brute_force(&inst, &learner, &[], DEFAULT_BUDGET).unwrap();
        let mut best = (0u64, 0u64);
        for q in 0..16u64 {
            let f = inst.target(q);
            let mut wrong = 0;
            for a in 0..4 {
                for b in 0..4 {
                    let t = TrainingSequence::new(vec![
                        (inst.domain()[a].clone(), f[a].clone()),
                        (inst.domain()[b].clone(), f[b].clone()),
                    ]);
                    let model = learner.train(&t);
                    wrong += (0..4)
                        .filter(|&j| model.predict(&inst.domain()[j]) != f[j])
                        .count() as u64;
                }
            }
            if wrong > best.1 {
                best = (q, wrong);
            }
        }
        assert_eq!(r.worst_f_index, best.0);
        assert_eq!(r.worst_expected_hp, ratio(best.1 as i64, 64));
    }

    #[test]
    fn outputs_outside_the_codomain_are_wrong() {
        let inst = instance(2, 2, 1);
        let off = |_: &TrainingSequence| |_: &Str| Str::new(vec![1, 1, 1]);
        struct Off<F>(F);
        impl<F: Fn(&TrainingSequence) -> G + Sync, G: Fn(&Str) -> Str> Trainer for Off<F> {
            type Model = G;
            fn train(&self, t: &TrainingSequence) -> G {
                (self.0)(t)
            }
        }
        let r = nfl_brute_force(&inst, &Off(off), &grid(), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.worst_expected_hp, int(1));
        assert!(r.verified);
    }

    #[test]
    fn budget_refusal() {
        let inst = instance(6, 3, 3);
        assert_eq!(nfl_required_budget(&inst), Some(729 * 216 * 6));
        let learner = MemorizeThenConstant {
            fallback: Str::empty(),
        };
        match nfl_brute_force(&inst, &learner, &grid(), 1000) {
            Err(Error::BudgetExceeded { required, budget }) => {
                assert_eq!((required, budget), (729 * 216 * 6, 1000))
            }
            other => panic!("expected refusal, got {other:?}"),
        }
        assert!(nfl_brute_force(&inst, &learner, &[int(1)], DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn report_json_uses_exact_fractions() {
        let inst = instance(2, 2, 1);
        let learner = MemorizeThenConstant {
            fallback: inst.codomain()[0].clone(),
        };
        let r = nfl_brute_force(&inst, &learner, &grid(), DEFAULT_BUDGET).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["bound_mu"], serde_json::json!({"num": 1, "den": 4}));
        let back: NflReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
