//! Source-coding check: the smallest set of length-`m` blocks carrying more
//! than `1 − δ` of the probability has about `2^{mH}` elements.
//!
//! Block probabilities depend only on symbol counts, so the set is built from
//! count classes rather than by sorting every block. Blocks of equal
//! probability are ordered lexicographically, which fixes which members of a
//! partially used class are taken.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, serde_rational, serde_rational_vec, Rational};

/// Largest number of blocks `|X|^m` the construction accepts by default.
pub const DEFAULT_BLOCK_BUDGET: u128 = 10_000_000;

/// A memoryless source over symbols `0..pmf.len()`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SourceRepr")]
pub struct SourceModel {
    #[serde(with = "serde_rational_vec")]
    pmf: Vec<Rational>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceRepr {
    #[serde(with = "serde_rational_vec")]
    pmf: Vec<Rational>,
}

impl TryFrom<SourceRepr> for SourceModel {
    type Error = Error;
    fn try_from(r: SourceRepr) -> Result<Self> {
        SourceModel::new(r.pmf)
    }
}

impl SourceModel {
    /// Masses must be non-negative and sum to exactly 1.
    pub fn new(pmf: Vec<Rational>) -> Result<Self> {
        if pmf.is_empty() {
            return Err(Error::InvalidDistribution("empty source alphabet".into()));
        }
        if pmf.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidDistribution("negative mass".into()));
        }
        if pmf.iter().sum::<Rational>() != Rational::one() {
            return Err(Error::InvalidDistribution("masses must sum to 1".into()));
        }
        Ok(SourceModel { pmf })
    }

    pub fn bernoulli(p: Rational) -> Result<Self> {
        Self::new(vec![Rational::one() - &p, p])
    }

    pub fn uniform(k: usize) -> Result<Self> {
        Self::new(vec![
            Rational::new(BigInt::one(), BigInt::from(k.max(1)));
            k
        ])
    }

    pub fn pmf(&self) -> &[Rational] {
        &self.pmf
    }

    /// `−Σ p log₂ p` over symbols with positive mass.
    pub fn entropy_bits(&self) -> f64 {
        self.pmf
            .iter()
            .map(rational::to_f64)
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.log2())
            .sum()
    }

    /// Exact probability of a block.
    pub fn block_probability(&self, block: &[usize]) -> Rational {
        block.iter().map(|&x| &self.pmf[x]).product()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypicalSetReport {
    pub m: u32,
    #[serde(with = "serde_rational")]
    pub delta: Rational,
    pub set_size: u64,
    /// `log₂(set_size) / m`.
    pub rate: f64,
    #[serde(with = "serde_rational")]
    pub mass: Rational,
    pub entropy_bits: f64,
    /// `|rate − H|`.
    pub entropy_gap: f64,
}

/// CSV form of a report: `m,delta,set_size,rate,mass,entropy_gap`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypicalSetRow {
    pub m: u32,
    pub delta: f64,
    pub set_size: u64,
    pub rate: f64,
    pub mass: f64,
    pub entropy_gap: f64,
}

impl From<&TypicalSetReport> for TypicalSetRow {
    fn from(r: &TypicalSetReport) -> Self {
        TypicalSetRow {
            m: r.m,
            delta: rational::to_f64(&r.delta),
            set_size: r.set_size,
            rate: r.rate,
            mass: rational::to_f64(&r.mass),
            entropy_gap: r.entropy_gap,
        }
    }
}

pub fn write_typical_csv<W: Write>(reports: &[TypicalSetReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(TypicalSetRow::from(r))
            .map_err(|e| Error::Unsupported(format!("csv output failed: {e}")))?;
    }
    w.flush()
        .map_err(|e| Error::Unsupported(format!("csv output failed: {e}")))?;
    Ok(())
}

fn check_block_request(src: &SourceModel, m: u32, delta: &Rational, budget: u128) -> Result<()> {
    if m == 0 {
        return Err(Error::Domain("block length must be at least 1".into()));
    }
    if !delta.is_positive() || *delta > Rational::one() {
        return Err(Error::Domain(format!("delta = {delta} must lie in (0, 1]")));
    }
    let blocks = (src.pmf.len() as u128).checked_pow(m).unwrap_or(u128::MAX);
    if blocks > budget {
        return Err(Error::BudgetExceeded {
            required: blocks,
            budget,
        });
    }
    Ok(())
}

/// All count vectors `(c_0, …, c_{k−1})` with sum `m`.
fn compositions(k: usize, m: u32) -> Vec<Vec<u32>> {
    fn go(k: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == k {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            go(k, left - c, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, m, &mut Vec::with_capacity(k), &mut out);
    out
}

fn multinomial(m: u32, counts: &[u32]) -> BigInt {
    let mut result = BigInt::one();
    let mut placed = 0u32;
    for &c in counts {
        for j in 1..=c {
            placed += 1;
            result = result * BigInt::from(placed) / BigInt::from(j);
        }
    }
    debug_assert_eq!(placed, m);
    result
}

/// The minimum-cardinality set of blocks with mass `> 1 − δ`. Refuses when
/// `|X|^m` exceeds `budget`.
pub fn smallest_high_mass_set(
    src: &SourceModel,
    m: u32,
    delta: &Rational,
    budget: u128,
) -> Result<TypicalSetReport> {
    check_block_request(src, m, delta, budget)?;
    let mut classes: Vec<(Rational, BigInt)> = compositions(src.pmf.len(), m)
        .into_iter()
        .map(|counts| {
            let p: Rational = counts
                .iter()
                .zip(&src.pmf)
                .map(|(&c, p)| num_traits::pow(p.clone(), c as usize))
                .product();
            (p, multinomial(m, &counts))
        })
        .filter(|(p, _)| p.is_positive())
        .collect();
    classes.sort_by(|a, b| b.0.cmp(&a.0));

    let need = Rational::one() - delta;
    let mut mass = Rational::zero();
    let mut size = BigInt::zero();
    for (p, count) in &classes {
        let class_mass = p * Rational::from_integer(count.clone());
        if &mass + &class_mass > need {
            // Smallest k with mass + k·p > need.
            let k: BigInt = ((&need - &mass) / p).floor().to_integer() + 1;
            mass += p * Rational::from_integer(k.clone());
            size += k;
            break;
        }
        mass += class_mass;
        size += count;
    }
    let set_size = size.to_u64().ok_or(Error::Overflow("set size"))?;
    let rate = (set_size as f64).log2() / m as f64;
    let entropy_bits = src.entropy_bits();
    Ok(TypicalSetReport {
        m,
        delta: delta.clone(),
        set_size,
        rate,
        mass,
        entropy_bits,
        entropy_gap: (rate - entropy_bits).abs(),
    })
}

/// The blocks themselves: all `|X|^m` blocks sorted by probability
/// descending, then lexicographically, truncated to the report's size.
pub fn high_mass_set_members(
    src: &SourceModel,
    m: u32,
    delta: &Rational,
    budget: u128,
) -> Result<Vec<Vec<usize>>> {
    let report = smallest_high_mass_set(src, m, delta, budget)?;
    let k = src.pmf.len();
    let total = k.pow(m);
    let mut blocks: Vec<(Rational, Vec<usize>)> = (0..total)
        .map(|mut idx| {
            let mut b = vec![0; m as usize];
            for slot in b.iter_mut().rev() {
                *slot = idx % k;
                idx /= k;
            }
            (src.block_probability(&b), b)
        })
        .collect();
    blocks.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    Ok(blocks
        .into_iter()
        .take(report.set_size as usize)
        .map(|(_, b)| b)
        .collect())
}

/// Both source-coding conditions: rate within `epsilon` of the entropy and
/// mass above `1 − δ`.
pub fn check_source_coding(report: &TypicalSetReport, epsilon: f64) -> bool {
    report.entropy_gap < epsilon && report.mass > Rational::one() - &report.delta
}
