//! Probability measures on Σ*, their input-length CDFs, and the CDF lower
//! bound object the memorizer's guarantee is conditioned on.
//!
//! All masses are held as exact rationals. JSON numbers are read as the
//! decimal they are written as, so `0.1` means exactly one tenth. Sampling
//! uses `f64` caches of the same values.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, serde_rational, serde_rational_vec, Rational};
use crate::strings::{Alphabet, Str};

/// How a [`CdfLowerBound`] continues past its table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundTail {
    /// `CDF̄(n) = 1 − (1 − c_N)·ratio^{n−N}` for `n > N`, where `c_N` is the
    /// last table entry.
    Geometric {
        #[serde(with = "serde_rational")]
        ratio: Rational,
    },
    /// `CDF̄(n) = 1` for every `n` at or past the table length.
    OneAtN,
}

#[derive(Serialize, Deserialize)]
struct BoundRepr {
    #[serde(with = "serde_rational_vec")]
    table: Vec<Rational>,
    tail: BoundTail,
}

/// A non-decreasing lower bound `CDF̄ : Z≥0 → [0, 1]` on the input-length
/// CDF with `lim CDF̄(n) = 1`. Entry `table[n]` is `CDF̄(n)` for
/// `n < table.len()`; the tail rule covers the rest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BoundRepr", into = "BoundRepr")]
pub struct CdfLowerBound {
    table: Vec<Rational>,
    tail: BoundTail,
}

impl TryFrom<BoundRepr> for CdfLowerBound {
    type Error = Error;

    fn try_from(r: BoundRepr) -> Result<Self> {
        CdfLowerBound::new(r.table, r.tail)
    }
}

impl From<CdfLowerBound> for BoundRepr {
    fn from(b: CdfLowerBound) -> Self {
        BoundRepr {
            table: b.table,
            tail: b.tail,
        }
    }
}

impl CdfLowerBound {
    pub fn new(table: Vec<Rational>, tail: BoundTail) -> Result<Self> {
        if let Some(bad) = table.iter().find(|c| !rational::is_probability(c)) {
            return Err(Error::InvalidBound(format!(
                "entry {bad} is outside [0, 1]"
            )));
        }
        if table.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidBound("table must be non-decreasing".into()));
        }
        if let BoundTail::Geometric { ratio } = &tail {
            if table.is_empty() {
                return Err(Error::InvalidBound(
                    "a geometric tail needs a non-empty table".into(),
                ));
            }
            if !ratio.is_positive() || *ratio >= Rational::one() {
                return Err(Error::InvalidBound(format!(
                    "geometric ratio {ratio} must lie in (0, 1)"
                )));
            }
        }
        Ok(CdfLowerBound { table, tail })
    }

    pub fn geometric(table: Vec<Rational>, ratio: Rational) -> Result<Self> {
        Self::new(table, BoundTail::Geometric { ratio })
    }

    pub fn one_at(table: Vec<Rational>) -> Result<Self> {
        Self::new(table, BoundTail::OneAtN)
    }

    /// `CDF̄(n) = 1 − 2^{−(n+1)}`, the bound matched by the normalized
    /// geometric length law.
    pub fn halving() -> Self {
        let half = rational::ratio(1, 2);
        Self::geometric(vec![half.clone()], half).expect("valid bound")
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }

    pub fn tail(&self) -> &BoundTail {
        &self.tail
    }

    pub fn value(&self, n: u64) -> Rational {
        Rational::one() - self.defect(n)
    }

    pub fn value_f64(&self, n: u64) -> f64 {
        1.0 - self.defect_f64(n)
    }

    /// `1 − CDF̄(n)`.
    pub fn defect(&self, n: u64) -> Rational {
        if let Some(c) = usize::try_from(n).ok().and_then(|i| self.table.get(i)) {
            return Rational::one() - c;
        }
        match &self.tail {
            BoundTail::OneAtN => Rational::zero(),
            BoundTail::Geometric { ratio } => {
                let last = self.table.len() as u64 - 1;
                let base = Rational::one() - &self.table[last as usize];
                let steps = usize::try_from(n - last).unwrap_or(usize::MAX);
                base * num_traits::pow(ratio.clone(), steps)
            }
        }
    }

    pub fn defect_f64(&self, n: u64) -> f64 {
        if let Some(c) = usize::try_from(n).ok().and_then(|i| self.table.get(i)) {
            return 1.0 - rational::to_f64(c);
        }
        match &self.tail {
            BoundTail::OneAtN => 0.0,
            BoundTail::Geometric { ratio } => {
                let last = self.table.len() as u64 - 1;
                let base = 1.0 - rational::to_f64(&self.table[last as usize]);
                let steps = (n - last) as f64;
                base * rational::to_f64(ratio).powf(steps)
            }
        }
    }

    /// Smallest `n` with `1 − CDF̄(n) < target`. Exists for every valid
    /// bound and positive target since the limit is 1.
    pub fn first_defect_below(&self, target: &Rational) -> Result<u64> {
        if !target.is_positive() {
            return Err(Error::Domain(format!(
                "defect target {target} must be positive"
            )));
        }
        for (n, c) in self.table.iter().enumerate() {
            if Rational::one() - c < *target {
                return Ok(n as u64);
            }
        }
        let len = self.table.len() as u64;
        match &self.tail {
            BoundTail::OneAtN => Ok(len),
            BoundTail::Geometric { ratio } => {
                let last = len - 1;
                let base = Rational::one() - &self.table[last as usize];
                let guess = (rational::to_f64(target) / rational::to_f64(&base)).ln()
                    / rational::to_f64(ratio).ln();
                if !guess.is_finite() || guess > 1e6 {
                    return Err(Error::Overflow("defect crossing point"));
                }
                let mut k = (guess.ceil() as u64).max(1);
                let below = |k: u64| &base * num_traits::pow(ratio.clone(), k as usize) < *target;
                while k > 1 && below(k - 1) {
                    k -= 1;
                }
                while !below(k) {
                    k += 1;
                }
                Ok(last + k)
            }
        }
    }
}

/// Distribution with an explicit finite list of atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSupport {
    atoms: Vec<(Str, Rational)>,
    index: HashMap<Str, usize>,
    cumulative: Vec<f64>,
}

impl FiniteSupport {
    pub fn new(atoms: Vec<(Str, Rational)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution(
                "finite support needs at least one atom".into(),
            ));
        }
        let mut index = HashMap::with_capacity(atoms.len());
        for (i, (s, p)) in atoms.iter().enumerate() {
            if !rational::is_probability(p) {
                return Err(Error::InvalidDistribution(format!(
                    "mass {p} of {s} is outside [0, 1]"
                )));
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidDistribution(format!("atom {s} listed twice")));
            }
        }
        let total: Rational = atoms.iter().map(|(_, p)| p).sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {total}, not exactly 1"
            )));
        }
        let cumulative = cumulative_f64(atoms.iter().map(|(_, p)| p));
        Ok(FiniteSupport {
            atoms,
            index,
            cumulative,
        })
    }

    pub fn point(s: Str) -> Self {
        Self::new(vec![(s, Rational::one())]).expect("point mass")
    }

    pub fn atoms(&self) -> &[(Str, Rational)] {
        &self.atoms
    }
}

/// A length law combined with the uniform distribution over `Σⁿ` given the
/// length. Lengths `0..masses.len()` are tabulated; an optional geometric tail
/// spreads the remaining mass as `R·(1 − r)·r^{k−1}` over length `N + k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthFactored {
    alphabet: Alphabet,
    masses: Vec<Rational>,
    tail_ratio: Option<Rational>,
    remaining: Rational,
    cumulative: Vec<f64>,
}

impl LengthFactored {
    pub fn new(
        alphabet: Alphabet,
        masses: Vec<Rational>,
        tail_ratio: Option<Rational>,
    ) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidDistribution(
                "length law needs at least one tabulated length".into(),
            ));
        }
        if let Some(bad) = masses.iter().find(|p| !rational::is_probability(p)) {
            return Err(Error::InvalidDistribution(format!(
                "length mass {bad} is outside [0, 1]"
            )));
        }
        let total: Rational = masses.iter().sum();
        let remaining = Rational::one() - &total;
        match &tail_ratio {
            None if !remaining.is_zero() => {
                return Err(Error::InvalidDistribution(format!(
                    "length masses sum to {total}; without a tail they must sum to exactly 1"
                )))
            }
            Some(r) if !r.is_positive() || *r >= Rational::one() => {
                return Err(Error::InvalidDistribution(format!(
                    "tail ratio {r} must lie in (0, 1)"
                )))
            }
            _ if remaining.is_negative() => {
                return Err(Error::InvalidDistribution(format!(
                    "length masses sum to {total} > 1"
                )))
            }
            _ => {}
        }
        let cumulative = cumulative_f64(masses.iter());
        Ok(LengthFactored {
            alphabet,
            masses,
            tail_ratio,
            remaining,
            cumulative,
        })
    }

    /// `P(len = i) = (1/2)^{i+1}`, so that `Pr(len ≥ m) = (1/2)^m`.
    pub fn halving(alphabet: Alphabet) -> Self {
        let half = rational::ratio(1, 2);
        Self::new(alphabet, vec![half.clone()], Some(half)).expect("valid law")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn last(&self) -> u64 {
        self.masses.len() as u64 - 1
    }

    pub fn length_mass(&self, n: u64) -> Rational {
        if let Some(p) = usize::try_from(n).ok().and_then(|i| self.masses.get(i)) {
            return p.clone();
        }
        match &self.tail_ratio {
            None => Rational::zero(),
            Some(r) => {
                let k = (n - self.last()) as usize;
                &self.remaining * (Rational::one() - r) * num_traits::pow(r.clone(), k - 1)
            }
        }
    }

    /// True when every length from `n` on carries positive mass, which makes
    /// the support beyond `n` an infinite set.
    pub fn positive_at_every_length_from(&self, n: u64) -> bool {
        if self.tail_ratio.is_none() || self.remaining.is_zero() {
            return false;
        }
        (n..=self.last()).all(|i| self.masses[i as usize].is_positive())
    }
}

/// `Uni(𝒳)` for a finite set `𝒳` of distinct strings.
#[derive(Clone, Debug, PartialEq)]
pub struct UniformSet {
    items: Vec<Str>,
    members: HashSet<Str>,
}

impl UniformSet {
    pub fn new(items: Vec<Str>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidDistribution(
                "uniform set must be non-empty".into(),
            ));
        }
        let members: HashSet<Str> = items.iter().cloned().collect();
        if members.len() != items.len() {
            return Err(Error::InvalidDistribution(
                "uniform set elements must be distinct".into(),
            ));
        }
        Ok(UniformSet { items, members })
    }

    pub fn items(&self) -> &[Str] {
        &self.items
    }
}

fn cumulative_f64<'a>(masses: impl Iterator<Item = &'a Rational>) -> Vec<f64> {
    let mut acc = Rational::zero();
    masses
        .map(|p| {
            acc += p;
            rational::to_f64(&acc)
        })
        .collect()
}

/// A probability measure μ on Σ*.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionSpec", into = "DistributionSpec")]
pub enum StringDistribution {
    Finite(FiniteSupport),
    LengthFactored(LengthFactored),
    UniformSet(UniformSet),
}

#[derive(Serialize, Deserialize)]
struct AtomSpec {
    s: Str,
    #[serde(with = "serde_rational")]
    p: Rational,
}

#[derive(Serialize, Deserialize)]
struct TailSpec {
    #[serde(with = "serde_rational")]
    ratio: Rational,
}

/// JSON form: `{"kind": "finite" | "length_factored" | "uniform_set", ...}`.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum DistributionSpec {
    Finite {
        atoms: Vec<AtomSpec>,
    },
    LengthFactored {
        alphabet: Alphabet,
        #[serde(with = "serde_rational_vec")]
        length_masses: Vec<Rational>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail: Option<TailSpec>,
    },
    UniformSet {
        items: Vec<Str>,
    },
}

impl TryFrom<DistributionSpec> for StringDistribution {
    type Error = Error;

    fn try_from(spec: DistributionSpec) -> Result<Self> {
        Ok(match spec {
            DistributionSpec::Finite { atoms } => StringDistribution::Finite(FiniteSupport::new(
                atoms.into_iter().map(|a| (a.s, a.p)).collect(),
            )?),
            DistributionSpec::LengthFactored {
                alphabet,
                length_masses,
                tail,
            } => StringDistribution::LengthFactored(LengthFactored::new(
                alphabet,
                length_masses,
                tail.map(|t| t.ratio),
            )?),
            DistributionSpec::UniformSet { items } => {
                StringDistribution::UniformSet(UniformSet::new(items)?)
            }
        })
    }
}

impl From<StringDistribution> for DistributionSpec {
    fn from(d: StringDistribution) -> Self {
        match d {
            StringDistribution::Finite(f) => DistributionSpec::Finite {
                atoms: f
                    .atoms
                    .into_iter()
                    .map(|(s, p)| AtomSpec { s, p })
                    .collect(),
            },
            StringDistribution::LengthFactored(l) => DistributionSpec::LengthFactored {
                alphabet: l.alphabet,
                length_masses: l.masses,
                tail: l.tail_ratio.map(|ratio| TailSpec { ratio }),
            },
            StringDistribution::UniformSet(u) => DistributionSpec::UniformSet { items: u.items },
        }
    }
}

/// Largest support size [`StringDistribution::support`] will enumerate for a
/// tail-free length law.
pub const SUPPORT_ENUMERATION_LIMIT: u128 = 1_000_000;

impl StringDistribution {
    pub fn point(s: Str) -> Self {
        StringDistribution::Finite(FiniteSupport::point(s))
    }

    pub fn finite(atoms: Vec<(Str, Rational)>) -> Result<Self> {
        FiniteSupport::new(atoms).map(StringDistribution::Finite)
    }

    pub fn uniform(items: Vec<Str>) -> Result<Self> {
        UniformSet::new(items).map(StringDistribution::UniformSet)
    }

    pub fn length_factored(
        alphabet: Alphabet,
        masses: Vec<Rational>,
        tail_ratio: Option<Rational>,
    ) -> Result<Self> {
        LengthFactored::new(alphabet, masses, tail_ratio).map(StringDistribution::LengthFactored)
    }

    /// Draws one string. Deterministic given the generator state.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Str {
        match self {
            StringDistribution::Finite(f) => {
                let u: f64 = rng.gen();
                let i = f
                    .cumulative
                    .partition_point(|&c| c <= u)
                    .min(f.atoms.len() - 1);
                f.atoms[i].0.clone()
            }
            StringDistribution::UniformSet(u) => u.items[rng.gen_range(0..u.items.len())].clone(),
            StringDistribution::LengthFactored(l) => {
                let u: f64 = rng.gen();
                let table_total = *l.cumulative.last().expect("non-empty table");
                let len = match &l.tail_ratio {
                    Some(ratio) if u >= table_total => {
                        let r = rational::to_f64(ratio);
                        // Geometric number of extra lengths, k ≥ 1, by inversion.
                        let v = 1.0 - rng.gen::<f64>();
                        let k = 1 + (v.ln() / r.ln()).floor() as u64;
                        l.last() + k
                    }
                    _ => l
                        .cumulative
                        .partition_point(|&c| c <= u)
                        .min(l.masses.len() - 1) as u64,
                };
                let size = l.alphabet.size();
                Str::new((0..len).map(|_| rng.gen_range(0..size)).collect())
            }
        }
    }

    /// Exact mass of `s`; zero outside the support.
    pub fn pmf(&self, s: &Str) -> Rational {
        match self {
            StringDistribution::Finite(f) => f
                .index
                .get(s)
                .map(|&i| f.atoms[i].1.clone())
                .unwrap_or_else(Rational::zero),
            StringDistribution::UniformSet(u) => {
                if u.members.contains(s) {
                    Rational::new(BigInt::one(), BigInt::from(u.items.len()))
                } else {
                    Rational::zero()
                }
            }
            StringDistribution::LengthFactored(l) => {
                if l.alphabet.validate(s).is_err() {
                    return Rational::zero();
                }
                let per_length = num_traits::pow(BigInt::from(l.alphabet.size()), s.len());
                l.length_mass(s.len() as u64) / Rational::from_integer(per_length)
            }
        }
    }

    /// `Pr(len(S) ≤ n)`.
    pub fn length_cdf(&self, n: u64) -> Rational {
        let within = |s: &Str| (s.len() as u64) <= n;
        match self {
            StringDistribution::Finite(f) => f
                .atoms
                .iter()
                .filter(|(s, _)| within(s))
                .map(|(_, p)| p)
                .sum(),
            StringDistribution::UniformSet(u) => {
                let count = u.items.iter().filter(|s| within(s)).count();
                Rational::new(BigInt::from(count), BigInt::from(u.items.len()))
            }
            StringDistribution::LengthFactored(l) => {
                let last = l.last();
                if n <= last {
                    l.masses[..=n as usize].iter().sum()
                } else {
                    match &l.tail_ratio {
                        None => Rational::one(),
                        Some(r) => {
                            let k = (n - last) as usize;
                            Rational::one() - &l.remaining * num_traits::pow(r.clone(), k)
                        }
                    }
                }
            }
        }
    }

    /// `Pr(len(S) ≥ n)`.
    pub fn length_tail(&self, n: u64) -> Rational {
        match n {
            0 => Rational::one(),
            _ => Rational::one() - self.length_cdf(n - 1),
        }
    }

    /// Length past which the distribution has no mass, if any.
    pub fn max_len(&self) -> Option<u64> {
        match self {
            StringDistribution::Finite(f) => f.atoms.iter().map(|(s, _)| s.len() as u64).max(),
            StringDistribution::UniformSet(u) => u.items.iter().map(|s| s.len() as u64).max(),
            StringDistribution::LengthFactored(l) => match l.tail_ratio {
                Some(_) if !l.remaining.is_zero() => None,
                _ => Some(l.last()),
            },
        }
    }

    /// Every string with positive mass together with that mass, when the
    /// support is finite and small enough to list.
    pub fn support(&self) -> Option<Vec<(Str, Rational)>> {
        match self {
            StringDistribution::Finite(f) => Some(f.atoms.clone()),
            StringDistribution::UniformSet(u) => {
                let p = Rational::new(BigInt::one(), BigInt::from(u.items.len()));
                Some(u.items.iter().map(|s| (s.clone(), p.clone())).collect())
            }
            StringDistribution::LengthFactored(l) => {
                let max = self.max_len()?;
                let count = l.alphabet.count_upto(u32::try_from(max).ok()?).ok()?;
                if count > SUPPORT_ENUMERATION_LIMIT {
                    return None;
                }
                Some(
                    l.alphabet
                        .strings_upto(max as usize)
                        .map(|s| {
                            let p = self.pmf(&s);
                            (s, p)
                        })
                        .filter(|(_, p)| p.is_positive())
                        .collect(),
                )
            }
        }
    }

    /// Checks `CDF_len#μ(n) ≥ CDF̄(n)` for every `n ≥ 0`: pointwise up to the
    /// horizon and analytically beyond it.
    pub fn dominates(&self, bound: &CdfLowerBound, horizon: u64) -> Result<bool> {
        if horizon < bound.table().len() as u64 {
            return Err(Error::Domain(format!(
                "horizon {horizon} is shorter than the bound table ({} entries)",
                bound.table().len()
            )));
        }
        let mut reach = horizon;
        if let Some(max) = self.max_len() {
            reach = reach.max(max);
        }
        if let StringDistribution::LengthFactored(l) = self {
            reach = reach.max(l.last());
        }
        for n in 0..=reach {
            if self.length_cdf(n) < bound.value(n) {
                return Ok(false);
            }
        }
        // Past `reach` the distribution is either exhausted (CDF = 1) or in
        // its geometric tail.
        let StringDistribution::LengthFactored(l) = self else {
            return Ok(true);
        };
        let Some(r_dist) = l.tail_ratio.as_ref().filter(|_| !l.remaining.is_zero()) else {
            return Ok(true);
        };
        match bound.tail() {
            BoundTail::OneAtN => Ok(false),
            BoundTail::Geometric { ratio: r_bound } => {
                if bound.defect(reach + 1).is_zero() || r_dist > r_bound {
                    return Ok(false);
                }
                // The defect ratio dist/bound is non-increasing from here on,
                // so the first tail point decides every later one.
                Ok(self.length_tail(reach + 2) <= bound.defect(reach + 1))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s(v: &[u32]) -> Str {
        Str::new(v.to_vec())
    }

    fn four() -> Vec<Str> {
        vec![s(&[]), s(&[0]), s(&[1]), s(&[0, 0])]
    }

    #[test]
    fn bound_validation() {
        assert!(CdfLowerBound::one_at(vec![ratio(1, 2), ratio(1, 4)]).is_err());
        assert!(CdfLowerBound::one_at(vec![ratio(3, 2)]).is_err());
        assert!(CdfLowerBound::geometric(vec![], ratio(1, 2)).is_err());
        assert!(CdfLowerBound::geometric(vec![ratio(1, 2)], int(1)).is_err());
        assert!(CdfLowerBound::geometric(vec![ratio(1, 2)], int(0)).is_err());
        assert!(CdfLowerBound::one_at(vec![]).is_ok());
    }

    #[test]
    fn halving_bound_values() {
        let b = CdfLowerBound::halving();
        for n in 0..30u64 {
            let expected =
                int(1) - Rational::new(1.into(), num_traits::pow(BigInt::from(2), n as usize + 1));
            assert_eq!(b.value(n), expected);
            assert!((b.value_f64(n) - rational::to_f64(&expected)).abs() < 1e-15);
        }
    }

    #[test]
    fn one_at_semantics() {
        let b = CdfLowerBound::one_at(vec![int(0), int(0)]).unwrap();
        assert_eq!(b.value(0), int(0));
        assert_eq!(b.value(1), int(0));
        assert_eq!(b.value(2), int(1));
        assert_eq!(b.value(1000), int(1));
    }

    #[test]
    fn first_defect_below_matches_scan() {
        let b = CdfLowerBound::halving();
        assert_eq!(b.first_defect_below(&ratio(1, 20)).unwrap(), 4);
        assert_eq!(b.first_defect_below(&ratio(1, 10)).unwrap(), 3);
        assert_eq!(b.first_defect_below(&ratio(1, 16)).unwrap(), 4);
        let slow = CdfLowerBound::geometric(vec![ratio(1, 10), ratio(1, 5)], ratio(9, 10)).unwrap();
        let target = ratio(1, 1000);
        let scan = (0..).find(|&n| slow.defect(n) < target).unwrap();
        assert_eq!(slow.first_defect_below(&target).unwrap(), scan);
        assert!(b.first_defect_below(&int(0)).is_err());
    }

    #[test]
    fn sample_point_masses() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(
            StringDistribution::point(Str::empty()).sample(&mut rng),
            Str::empty()
        );
        let lf =
            StringDistribution::length_factored(Alphabet::binary(), vec![int(1)], None).unwrap();
        for _ in 0..10 {
            assert_eq!(lf.sample(&mut rng), Str::empty());
        }
    }

    #[test]
    fn uniform_sampling_frequencies() {
        let d = StringDistribution::uniform(four()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut counts = HashMap::new();
        let draws = 1_000_000;
        for _ in 0..draws {
            *counts.entry(d.sample(&mut rng)).or_insert(0u32) += 1;
        }
        for item in four() {
            let freq = counts[&item] as f64 / draws as f64;
            assert!((freq - 0.25).abs() < 0.002, "{item}: {freq}");
        }
    }

    #[test]
    fn finite_sampling_respects_masses() {
        let d = StringDistribution::finite(vec![(s(&[0]), ratio(1, 10)), (s(&[1]), ratio(9, 10))])
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let hits = (0..100_000)
            .filter(|_| d.sample(&mut rng) == s(&[0]))
            .count();
        let freq = hits as f64 / 1e5;
        // 3-sigma binomial band
        assert!((freq - 0.1).abs() < 3.0 * (0.09f64 / 1e5).sqrt());
    }

    #[test]
    fn pmf_examples() {
        assert_eq!(
            StringDistribution::point(Str::empty()).pmf(&Str::empty()),
            int(1)
        );
        let u = StringDistribution::uniform(four()).unwrap();
        assert_eq!(u.pmf(&s(&[1])), ratio(1, 4));
        assert_eq!(u.pmf(&s(&[1, 1])), int(0));
        let lf = StringDistribution::length_factored(
            Alphabet::binary(),
            vec![ratio(1, 4), ratio(1, 2), ratio(1, 4)],
            None,
        )
        .unwrap();
        assert_eq!(lf.pmf(&s(&[0, 1])), ratio(1, 16));
        assert_eq!(lf.pmf(&s(&[0, 1, 1])), int(0));
        assert_eq!(lf.pmf(&s(&[2])), int(0));
    }

    #[test]
    fn length_cdf_examples() {
        assert_eq!(
            StringDistribution::point(Str::empty()).length_cdf(0),
            int(1)
        );
        let u = StringDistribution::uniform(four()).unwrap();
        assert_eq!(u.length_cdf(1), ratio(3, 4));
        let g = StringDistribution::LengthFactored(LengthFactored::halving(Alphabet::binary()));
        for m in 1..=20u64 {
            let tail = Rational::new(1.into(), num_traits::pow(BigInt::from(2), m as usize));
            assert_eq!(g.length_cdf(m - 1), int(1) - &tail);
            assert_eq!(g.length_tail(m), tail);
        }
        assert_eq!(g.length_tail(0), int(1));
    }

    #[test]
    fn length_factored_pmf_sums_to_cdf() {
        let g = StringDistribution::LengthFactored(LengthFactored::halving(Alphabet::binary()));
        let total: Rational = Alphabet::binary().strings_upto(6).map(|x| g.pmf(&x)).sum();
        assert_eq!(total, g.length_cdf(6));
    }

    #[test]
    fn validation_errors() {
        assert!(StringDistribution::finite(vec![(s(&[]), ratio(1, 2))]).is_err());
        assert!(
            StringDistribution::finite(vec![(s(&[]), ratio(1, 2)), (s(&[]), ratio(1, 2))]).is_err()
        );
        assert!(StringDistribution::uniform(vec![s(&[0]), s(&[0])]).is_err());
        assert!(StringDistribution::uniform(vec![]).is_err());
        assert!(
            StringDistribution::length_factored(Alphabet::binary(), vec![ratio(1, 2)], None)
                .is_err()
        );
        assert!(StringDistribution::length_factored(
            Alphabet::binary(),
            vec![int(1), int(1)],
            Some(ratio(1, 2))
        )
        .is_err());
    }

    #[test]
    fn empirical_length_cdf_within_binomial_band() {
        let g =
            StringDistribution::LengthFactored(LengthFactored::halving(Alphabet::new(3).unwrap()));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 100_000usize;
        let lens: Vec<u64> = (0..draws)
            .map(|_| g.sample(&mut rng).len() as u64)
            .collect();
        for n in 0..10u64 {
            let p = rational::to_f64(&g.length_cdf(n));
            let emp = lens.iter().filter(|&&l| l <= n).count() as f64 / draws as f64;
            let sigma = (p * (1.0 - p) / draws as f64).sqrt();
            assert!(
                (emp - p).abs() <= 3.0 * sigma + 1e-12,
                "n={n}: {emp} vs {p}"
            );
        }
    }

    #[test]
    fn dominance_examples() {
        let zeros = CdfLowerBound::one_at(vec![int(0); 8]).unwrap();
        let u = StringDistribution::uniform(four()).unwrap();
        assert!(u.dominates(&zeros, 8).unwrap());
        let at_ten = StringDistribution::length_factored(
            Alphabet::binary(),
            (0..=10)
                .map(|i| if i == 10 { int(1) } else { int(0) })
                .collect(),
            None,
        )
        .unwrap();
        let half = CdfLowerBound::one_at(vec![ratio(1, 2)]).unwrap();
        assert!(!at_ten.dominates(&half, 4).unwrap());
        assert!(u.dominates(&half, 0).is_err());
        assert!(!u.dominates(&half, 1).unwrap());
        assert!(u.dominates(&zeros, 3).is_err());
    }

    #[test]
    fn dominance_tail_families() {
        let a = Alphabet::binary();
        let g = StringDistribution::LengthFactored(LengthFactored::halving(a.clone()));
        assert!(g.dominates(&CdfLowerBound::halving(), 5).unwrap());
        // Slower bound decay: the distribution's tail eventually wins.
        let slow = CdfLowerBound::geometric(vec![ratio(1, 4)], ratio(3, 4)).unwrap();
        assert!(g.dominates(&slow, 3).unwrap());
        // Faster bound decay: fails somewhere past any horizon.
        let fast = CdfLowerBound::geometric(vec![ratio(1, 2)], ratio(1, 4)).unwrap();
        assert!(!g.dominates(&fast, 40).unwrap());
        // Bound reaching 1 can never be met by an infinite tail.
        let one = CdfLowerBound::one_at(vec![int(0); 3]).unwrap();
        assert!(!g.dominates(&one, 10).unwrap());
        // Equal ratios, equal constants: holds with equality everywhere.
        let d = StringDistribution::length_factored(
            a,
            vec![ratio(1, 2), ratio(1, 4)],
            Some(ratio(3, 4)),
        )
        .unwrap();
        let same = CdfLowerBound::geometric(vec![ratio(1, 2), ratio(3, 4)], ratio(3, 4)).unwrap();
        assert!(d.dominates(&same, 2).unwrap());
        let just_above = CdfLowerBound::geometric(
            vec![ratio(1, 2), ratio(3, 4)],
            Rational::new(74.into(), 100.into()),
        )
        .unwrap();
        assert!(!d.dominates(&just_above, 2).unwrap());
    }

    #[test]
    fn infinite_support_is_detected() {
        let g = LengthFactored::halving(Alphabet::binary());
        assert!(g.positive_at_every_length_from(0));
        assert!(g.positive_at_every_length_from(1000));
        let finite = LengthFactored::new(Alphabet::binary(), vec![int(1)], None).unwrap();
        assert!(!finite.positive_at_every_length_from(0));
    }

    #[test]
    fn json_schema() {
        let d: StringDistribution = serde_json::from_str(
            r#"{"kind": "length_factored", "alphabet": {"size": 2}, "length_masses": [0.5], "tail": {"ratio": 0.5}}"#,
        )
        .unwrap();
        assert_eq!(
            d,
            StringDistribution::LengthFactored(LengthFactored::halving(Alphabet::binary()))
        );
        let f: StringDistribution = serde_json::from_str(
            r#"{"kind": "finite", "atoms": [{"s": [], "p": 0.1}, {"s": [0], "p": 0.2}, {"s": [1], "p": "7/10"}]}"#,
        )
        .unwrap();
        assert_eq!(f.pmf(&s(&[1])), ratio(7, 10));
        let u: StringDistribution =
            serde_json::from_str(r#"{"kind": "uniform_set", "items": [[], [0]]}"#).unwrap();
        assert_eq!(u.length_cdf(0), ratio(1, 2));
        let b: CdfLowerBound = serde_json::from_str(
            r#"{"table": [0.5], "tail": {"kind": "geometric", "ratio": 0.5}}"#,
        )
        .unwrap();
        assert_eq!(b, CdfLowerBound::halving());
        let b: CdfLowerBound =
            serde_json::from_str(r#"{"table": [0, 0], "tail": {"kind": "one_at_n"}}"#).unwrap();
        assert_eq!(b.value(2), int(1));
        assert!(serde_json::from_str::<CdfLowerBound>(
            r#"{"table": [0.5, 0.2], "tail": {"kind": "one_at_n"}}"#
        )
        .is_err());
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(
            serde_json::from_str::<StringDistribution>(&text).unwrap(),
            d
        );
    }
}
