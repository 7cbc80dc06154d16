//! The reverse Markov inequality for bounded variables:
//! `Pr(Z > a) ≥ (E[Z] − a)/(c − a)` when `0 ≤ Z ≤ c`.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{serde_rational, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovCheck {
    /// `Pr(Z > a)`.
    #[serde(with = "serde_rational")]
    pub lhs: Rational,
    /// `(E[Z] − a)/(c − a)`.
    #[serde(with = "serde_rational")]
    pub rhs: Rational,
    pub holds: bool,
}

/// Evaluates both sides exactly for a finitely supported `Z` given as
/// `(value, mass)` pairs.
pub fn markov_tail_check(
    z: &[(Rational, Rational)],
    c: &Rational,
    a: &Rational,
) -> Result<MarkovCheck> {
    if !c.is_positive() {
        return Err(Error::Domain(format!(
            "upper bound c = {c} must be positive"
        )));
    }
    if !a.is_positive() || a >= c {
        return Err(Error::Domain(format!("level a = {a} must lie in (0, {c})")));
    }
    if let Some((v, _)) = z.iter().find(|(v, _)| v.is_negative() || v > c) {
        return Err(Error::Domain(format!("value {v} lies outside [0, {c}]")));
    }
    if z.iter().any(|(_, p)| p.is_negative()) {
        return Err(Error::InvalidDistribution("negative mass".into()));
    }
    if z.iter().map(|(_, p)| p).sum::<Rational>() != Rational::one() {
        return Err(Error::InvalidDistribution("masses must sum to 1".into()));
    }
    let mean: Rational = z.iter().map(|(v, p)| v * p).sum();
    let lhs: Rational = z.iter().filter(|(v, _)| v > a).map(|(_, p)| p).sum();
    let rhs = (mean - a) / (c - a);
    Ok(MarkovCheck {
        holds: lhs >= rhs,
        lhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let c = ratio(5, 2);
        let top = markov_tail_check(&[(c.clone(), int(1))], &c, &int(1)).unwrap();
        assert_eq!(
            (top.lhs.clone(), top.rhs.clone(), top.holds),
            (int(1), int(1), true)
        );

        let coin = [(int(0), ratio(1, 4)), (int(1), ratio(3, 4))];
        let r = markov_tail_check(&coin, &int(1), &ratio(1, 2)).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds), (ratio(3, 4), ratio(1, 2), true));
    }

    #[test]
    fn rejects_bad_input() {
        let one = int(1);
        assert!(markov_tail_check(&[(int(2), int(1))], &one, &ratio(1, 2)).is_err());
        assert!(markov_tail_check(&[(int(0), ratio(1, 2))], &one, &ratio(1, 2)).is_err());
        assert!(markov_tail_check(&[(int(0), int(1))], &one, &one).is_err());
        assert!(markov_tail_check(&[(int(0), int(1))], &int(0), &ratio(1, 2)).is_err());
    }

    proptest! {
        #[test]
        fn always_holds(
            weights in prop::collection::vec((0u32..=100, 1u32..20), 1..8),
            c_num in 1i64..50,
            a_frac in 1i64..100,
        ) {
            let c = ratio(c_num, 3);
            let a = &c * ratio(a_frac, 100);
            let total: u32 = weights.iter().map(|(_, w)| w).sum();
            let z: Vec<_> = weights
                .iter()
                .map(|&(v, w)| (&c * ratio(v as i64, 100), ratio(w as i64, total as i64)))
                .collect();
            prop_assert!(markov_tail_check(&z, &c, &a).unwrap().holds);
        }
    }
}
