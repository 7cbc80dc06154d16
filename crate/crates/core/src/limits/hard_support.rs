//! A finite support as large as the bound allows whose uniform distribution
//! still dominates the bound.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::measures::CdfLowerBound;
use crate::rational::int;
use crate::strings::{Alphabet, Str};

use super::necessity::{nfl_objective, nfl_sizes};

/// Largest support size the construction will materialize.
pub const HARD_SUPPORT_LIMIT: u128 = 10_000_000;

/// Fills whole length levels in order while they fit under the minimized
/// objective, then takes the shortlex-least strings of the next level up to
/// its floor, and leaves every later level empty.
pub fn construct_hard_support(alphabet: &Alphabet, bound: &CdfLowerBound) -> Result<Vec<Str>> {
    let sizes = nfl_sizes(alphabet, bound)?;
    let cap =
        nfl_objective(alphabet, bound, sizes.n_lower).expect("minimizer has a finite objective");
    let total = cap
        .floor()
        .to_integer()
        .to_u128()
        .ok_or(Error::Overflow("hard support size"))?;
    if total > HARD_SUPPORT_LIMIT {
        return Err(Error::BudgetExceeded {
            required: total,
            budget: HARD_SUPPORT_LIMIT,
        });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut below = 0u128;
    for n in 0u32.. {
        let upto = alphabet.count_upto(n)?;
        if int(upto) <= cap {
            out.extend(alphabet.strings_of_len(n as usize));
        } else if int(below) <= cap {
            out.extend(
                alphabet
                    .strings_of_len(n as usize)
                    .take((total - below) as usize),
            );
        } else {
            break;
        }
        below = upto;
    }
    debug_assert_eq!(out.len() as u128, total);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::StringDistribution;
    use crate::rational::ratio;

    fn s(v: &[u32]) -> Str {
        Str::new(v.to_vec())
    }

    #[test]
    fn halving_bound_support() {
        let a = Alphabet::binary();
        assert_eq!(
            construct_hard_support(&a, &CdfLowerBound::halving()).unwrap(),
            vec![s(&[]), s(&[0])]
        );
    }

    #[test]
    fn bound_one_at_zero_gives_the_empty_string() {
        let a = Alphabet::binary();
        let b = CdfLowerBound::one_at(vec![]).unwrap();
        assert_eq!(construct_hard_support(&a, &b).unwrap(), vec![s(&[])]);
    }

    #[test]
    fn cardinality_domination_and_shortlex_prefix() {
        let bounds = [
            CdfLowerBound::halving(),
            CdfLowerBound::one_at(vec![int(0), int(0)]).unwrap(),
            CdfLowerBound::geometric(vec![ratio(1, 10), ratio(1, 3)], ratio(1, 2)).unwrap(),
            CdfLowerBound::geometric(vec![ratio(1, 50)], ratio(3, 4)).unwrap(),
            CdfLowerBound::one_at(vec![ratio(1, 9), ratio(1, 7), ratio(2, 5)]).unwrap(),
        ];
        for size in 2..5 {
            let a = Alphabet::new(size).unwrap();
            for b in &bounds {
                let x = construct_hard_support(&a, b).unwrap();
                let nb = nfl_sizes(&a, b).unwrap();
                let expected = nfl_objective(&a, b, nb.n_lower).unwrap().floor();
                assert_eq!(int(x.len() as u64), expected);
                let prefix: Vec<Str> = (0..x.len() as u128).map(|i| a.shortlex_string(i)).collect();
                assert_eq!(x, prefix);
                let uni = StringDistribution::uniform(x).unwrap();
                assert!(uni.dominates(b, b.table().len() as u64 + 8).unwrap());
            }
        }
    }
}
