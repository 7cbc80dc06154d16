//! How much data makes the memorizer's hallucination probability small with
//! high probability.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flrm::memorization_cost;
use crate::measures::CdfLowerBound;
use crate::rational::{self, serde_rational, Rational};
use crate::strings::Alphabet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SufficiencyBound {
    #[serde(with = "serde_rational")]
    pub epsilon_h: Rational,
    #[serde(with = "serde_rational")]
    pub epsilon_t: Rational,
    /// Smallest length whose bound defect is below `min(ε_H, ε_T)/2`.
    pub n_bar: u64,
    /// Training size at which the memorizer covers every length up to `n_bar`.
    pub m_bar: u64,
}

/// Tolerance added before taking the ceiling so that a cost landing exactly
/// on an integer is not rounded down by floating point error.
const CEILING_GUARD: f64 = 1e-9;

/// Tolerances above 1 are clamped to 1; non-positive tolerances are a domain
/// error. Fails when the bound is already 1 at `n_bar`, where the size formula
/// divides by zero.
pub fn required_sample_size(
    epsilon_h: &Rational,
    epsilon_t: &Rational,
    alphabet: &Alphabet,
    bound: &CdfLowerBound,
) -> Result<SufficiencyBound> {
    let clamp = |e: &Rational, name: &str| {
        if !e.is_positive() {
            Err(Error::Domain(format!("{name} = {e} must be positive")))
        } else {
            Ok(e.clone().min(Rational::one()))
        }
    };
    let epsilon_h = clamp(epsilon_h, "epsilon_h")?;
    let epsilon_t = clamp(epsilon_t, "epsilon_t")?;
    let target = epsilon_h.clone().min(epsilon_t.clone()) / rational::int(2);
    let n_bar = bound.first_defect_below(&target)?;
    if bound.defect(n_bar).is_zero() {
        return Err(Error::Domain(format!(
            "the bound reaches 1 at length {n_bar}, so the sample-size formula is undefined"
        )));
    }
    let cost = memorization_cost(alphabet, bound, n_bar);
    let m_bar = (cost + CEILING_GUARD).ceil();
    if !m_bar.is_finite() || m_bar >= u64::MAX as f64 {
        return Err(Error::Overflow("required sample size"));
    }
    Ok(SufficiencyBound {
        epsilon_h,
        epsilon_t,
        n_bar,
        m_bar: (m_bar as u64).max(1),
    })
}
