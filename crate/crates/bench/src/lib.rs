//! Shared fixtures for the benchmarks.

use negligible::measures::LengthFactored;
use negligible::{Alphabet, CdfLowerBound, GroundTruth, NflInstance, Str, StringDistribution};

pub fn halving_setup() -> (Alphabet, CdfLowerBound, StringDistribution, GroundTruth) {
    let a = Alphabet::binary();
    let mu = StringDistribution::LengthFactored(LengthFactored::halving(a.clone()));
    let gt = GroundTruth::echo(a.clone());
    (a, CdfLowerBound::halving(), mu, gt)
}

/// First `n` strings in shortlex order as the domain, the next `p` as the
/// codomain.
pub fn nfl_instance(n: u128, p: u128, m: usize) -> NflInstance {
    let a = Alphabet::binary();
    let domain: Vec<Str> = (0..n).map(|i| a.shortlex_string(i)).collect();
    let codomain: Vec<Str> = (n..n + p).map(|i| a.shortlex_string(i)).collect();
    NflInstance::new(domain, codomain, m).expect("valid instance")
}
