//! How little data forces every learner to hallucinate, and the
//! probability-of-failure levels that go with it.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::CdfLowerBound;
use crate::rational::{int, Rational};
use crate::strings::Alphabet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecessityBound {
    pub n_lower: u64,
    pub m_lower: u64,
}

/// `|Σ^{≤n}| / CDF̄(n)`, or `None` when `CDF̄(n) = 0` or the count overflows.
pub fn nfl_objective(alphabet: &Alphabet, bound: &CdfLowerBound, n: u64) -> Option<Rational> {
    let c = bound.value(n);
    if c.is_zero() {
        return None;
    }
    let count = alphabet.count_upto(u32::try_from(n).ok()?).ok()?;
    Some(int(count) / c)
}

/// Minimizes [`nfl_objective`] over `n`, taking the smallest `n` on ties, and
/// rounds the minimum up.
pub fn nfl_sizes(alphabet: &Alphabet, bound: &CdfLowerBound) -> Result<NecessityBound> {
    let mut best: Option<(u64, Rational)> = None;
    for n in 0u64.. {
        let Some(count) = u32::try_from(n)
            .ok()
            .and_then(|k| alphabet.count_upto(k).ok())
        else {
            break;
        };
        // The objective is at least the count, which only grows.
        if matches!(&best, Some((_, v)) if int(count) > *v) {
            break;
        }
        if let Some(v) = nfl_objective(alphabet, bound, n) {
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some((n, v));
            }
        }
    }
    let (n_lower, v) = best.ok_or_else(|| {
        Error::Domain("the bound is 0 at every representable length, so no minimizer exists".into())
    })?;
    let m_lower =
        u64::try_from(v.ceil().to_integer()).map_err(|_| Error::Overflow("necessity bound"))?;
    Ok(NecessityBound { n_lower, m_lower })
}

fn check_level(lambda_h: &Rational) -> Result<()> {
    if !lambda_h.is_positive() || *lambda_h >= Rational::one() {
        return Err(Error::Domain(format!(
            "lambda_h = {lambda_h} must lie in (0, 1)"
        )));
    }
    Ok(())
}

/// `(1 − 2λ_H) / (2 − 2λ_H)`: the probability, over training data, that the
/// hallucination probability reaches `λ_H` in the worst case.
pub fn lambda_t(lambda_h: &Rational) -> Result<Rational> {
    check_level(lambda_h)?;
    let one = Rational::one();
    let two = int(2);
    Ok((&one - &two * lambda_h) / (&two - &two * lambda_h))
}

/// `(μ − λ_H) / (1 − λ_H)` with `μ = (p − 1)/(2p)`, for a codomain of size `p`.
pub fn general_lambda_t(p: u64, lambda_h: &Rational) -> Result<Rational> {
    if p == 0 {
        return Err(Error::Domain("codomain size must be at least 1".into()));
    }
    check_level(lambda_h)?;
    let mu = Rational::new((p - 1).into(), (2 * p as u128).into());
    Ok((mu - lambda_h) / (Rational::one() - lambda_h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn sizes_examples() {
        let a = Alphabet::binary();
        assert_eq!(
            nfl_sizes(&a, &CdfLowerBound::halving()).unwrap(),
            NecessityBound {
                n_lower: 0,
                m_lower: 2
            }
        );
        let late = CdfLowerBound::one_at(vec![int(0), int(0)]).unwrap();
        assert_eq!(
            nfl_sizes(&a, &late).unwrap(),
            NecessityBound {
                n_lower: 2,
                m_lower: 7
            }
        );
        let at_zero = CdfLowerBound::one_at(vec![]).unwrap();
        assert_eq!(
            nfl_sizes(&a, &at_zero).unwrap(),
            NecessityBound {
                n_lower: 0,
                m_lower: 1
            }
        );
    }

    #[test]
    fn sizes_match_brute_force_argmin() {
        let bounds = [
            CdfLowerBound::halving(),
            CdfLowerBound::geometric(vec![ratio(1, 10), ratio(1, 3)], ratio(1, 2)).unwrap(),
            CdfLowerBound::geometric(vec![ratio(1, 100)], ratio(9, 10)).unwrap(),
            CdfLowerBound::one_at(vec![int(0), ratio(1, 7), ratio(1, 2)]).unwrap(),
        ];
        for size in 2..5 {
            let a = Alphabet::new(size).unwrap();
            for b in &bounds {
                let got = nfl_sizes(&a, b).unwrap();
                let (n, v) = (0..30u64)
                    .filter_map(|n| nfl_objective(&a, b, n).map(|v| (n, v)))
                    .fold(None::<(u64, Rational)>, |acc, (n, v)| match acc {
                        Some((bn, bv)) if bv <= v => Some((bn, bv)),
                        _ => Some((n, v)),
                    })
                    .unwrap();
                assert_eq!(got.n_lower, n);
                assert_eq!(int(got.m_lower), v.ceil());
            }
        }
    }

    #[test]
    fn no_minimum_is_an_error() {
        let a = Alphabet::binary();
        let zeros = CdfLowerBound::one_at(vec![int(0); 200]).unwrap();
        assert!(matches!(nfl_sizes(&a, &zeros), Err(Error::Domain(_))));
    }

    #[test]
    fn level_formulas() {
        assert_eq!(lambda_t(&ratio(1, 4)).unwrap(), ratio(1, 3));
        assert_eq!(general_lambda_t(2, &ratio(1, 8)).unwrap(), ratio(1, 7));
        assert_eq!(general_lambda_t(1, &ratio(1, 8)).unwrap(), ratio(-1, 7));
        assert!(lambda_t(&int(1)).is_err());
        assert!(lambda_t(&int(0)).is_err());
        assert!(general_lambda_t(0, &ratio(1, 2)).is_err());
        let tiny = ratio(1, 1_000_000_000);
        assert!(ratio(1, 2) - lambda_t(&tiny).unwrap() < ratio(1, 1_000_000));
    }

    #[test]
    fn general_form_approaches_the_limit() {
        for lh in [ratio(1, 8), ratio(1, 4), ratio(1, 3)] {
            let limit = lambda_t(&lh).unwrap();
            let at = |p| general_lambda_t(p, &lh).unwrap();
            assert!(at(2) < at(10) && at(10) < at(1_000_000) && at(1_000_000) < limit);
            let gap = &limit - at(1_000_000);
            assert!(gap < ratio(1, 1_000_000));
            // Exact gap: 1/(2p(1 − λ_H)).
            assert_eq!(
                gap,
                Rational::one() / (int(2_000_000) * (Rational::one() - &lh))
            );
        }
    }
}
