//! Ground-truth acceptable-output maps and qualified training data.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::StringDistribution;
use crate::strings::{Alphabet, Str};

/// Acceptable output set for strings without an override.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DefaultRule {
    /// `F₀(s) = {s}`.
    Echo,
    /// `F₀(s) = {y}`.
    Constant { y: Str },
    /// `F₀(s) = {the string k places after s in shortlex order}`.
    IndexShift { k: u64 },
}

/// An acceptable-output map `F₀ : Σ* → 2^{Σ*}` given as finitely many
/// overrides on top of a total default rule. Every `F₀(s)` is non-empty.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundTruth {
    alphabet: Alphabet,
    overrides: BTreeMap<Str, BTreeSet<Str>>,
    default: DefaultRule,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OverrideSpec {
    pub s: Str,
    pub accept: Vec<Str>,
}

/// JSON form: `{"overrides": [{"s": [...], "accept": [[...], ...]}], "default": {"kind": ...}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundTruthSpec {
    #[serde(default)]
    pub overrides: Vec<OverrideSpec>,
    pub default: DefaultRule,
}

impl GroundTruth {
    pub fn new(alphabet: Alphabet, default: DefaultRule) -> Result<Self> {
        if let DefaultRule::Constant { y } = &default {
            alphabet.validate(y)?;
        }
        Ok(GroundTruth {
            alphabet,
            overrides: BTreeMap::new(),
            default,
        })
    }

    pub fn echo(alphabet: Alphabet) -> Self {
        GroundTruth {
            alphabet,
            overrides: BTreeMap::new(),
            default: DefaultRule::Echo,
        }
    }

    pub fn constant(alphabet: Alphabet, y: Str) -> Result<Self> {
        Self::new(alphabet, DefaultRule::Constant { y })
    }

    /// Replaces `F₀(s)` by the given set.
    pub fn with_override(mut self, s: Str, accept: impl IntoIterator<Item = Str>) -> Result<Self> {
        self.alphabet.validate(&s)?;
        let set: BTreeSet<Str> = accept.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidGroundTruth(format!(
                "acceptable set for {s} is empty"
            )));
        }
        for y in &set {
            self.alphabet.validate(y)?;
        }
        self.overrides.insert(s, set);
        Ok(self)
    }

    pub fn from_spec(alphabet: Alphabet, spec: GroundTruthSpec) -> Result<Self> {
        let mut gt = Self::new(alphabet, spec.default)?;
        for o in spec.overrides {
            if gt.overrides.contains_key(&o.s) {
                return Err(Error::InvalidGroundTruth(format!(
                    "override for {} given twice",
                    o.s
                )));
            }
            gt = gt.with_override(o.s, o.accept)?;
        }
        Ok(gt)
    }

    pub fn to_spec(&self) -> GroundTruthSpec {
        GroundTruthSpec {
            overrides: self
                .overrides
                .iter()
                .map(|(s, set)| OverrideSpec {
                    s: s.clone(),
                    accept: set.iter().cloned().collect(),
                })
                .collect(),
            default: self.default.clone(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn default_output(&self, s: &Str) -> Str {
        match &self.default {
            DefaultRule::Echo => s.clone(),
            DefaultRule::Constant { y } => y.clone(),
            DefaultRule::IndexShift { k } => self.alphabet.shift(s, *k as u128),
        }
    }

    /// `y ∈ F₀(s)`.
    pub fn accepts(&self, s: &Str, y: &Str) -> bool {
        match self.overrides.get(s) {
            Some(set) => set.contains(y),
            None => match &self.default {
                DefaultRule::Echo => s == y,
                DefaultRule::Constant { y: c } => c == y,
                DefaultRule::IndexShift { .. } => self.default_output(s) == *y,
            },
        }
    }

    /// The shortlex-least element of `F₀(s)`.
    pub fn canonical(&self, s: &Str) -> Str {
        match self.overrides.get(s) {
            Some(set) => set.first().expect("non-empty acceptable set").clone(),
            None => self.default_output(s),
        }
    }

    /// True when `"" ∉ F₀(s)` for every non-empty `s` outside the overrides,
    /// i.e. a model answering `""` hallucinates on all but finitely many
    /// inputs.
    pub fn rejects_empty_output_on_long_inputs(&self) -> bool {
        match &self.default {
            DefaultRule::Echo => true,
            DefaultRule::Constant { y } => !y.is_empty(),
            DefaultRule::IndexShift { k } => *k > 0,
        }
    }

    /// `F₀(s)` listed in shortlex order.
    pub fn acceptable(&self, s: &Str) -> Vec<Str> {
        match self.overrides.get(s) {
            Some(set) => set.iter().cloned().collect(),
            None => vec![self.default_output(s)],
        }
    }
}

/// How the label of a training input is picked from its acceptable set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Labeler {
    #[default]
    Canonical,
    UniformOverAcceptable,
}

/// An ordered sequence of `(input, output)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingSequence {
    pub pairs: Vec<(Str, Str)>,
}

impl TrainingSequence {
    pub fn new(pairs: Vec<(Str, Str)>) -> Self {
        TrainingSequence { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Str, Str)> {
        self.pairs.iter()
    }
}

/// Draws `m` i.i.d. inputs from `mu` and labels each one inside `F₀`.
pub fn generate_qualified<R: Rng + ?Sized>(
    mu: &StringDistribution,
    gt: &GroundTruth,
    m: usize,
    labeler: Labeler,
    rng: &mut R,
) -> TrainingSequence {
    let pairs = (0..m)
        .map(|_| {
            let s = mu.sample(rng);
            let y = match labeler {
                Labeler::Canonical => gt.canonical(&s),
                Labeler::UniformOverAcceptable => {
                    let mut options = gt.acceptable(&s);
                    let i = rng.gen_range(0..options.len());
                    options.swap_remove(i)
                }
            };
            (s, y)
        })
        .collect();
    TrainingSequence { pairs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::LengthFactored;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s(v: &[u32]) -> Str {
        Str::new(v.to_vec())
    }

    fn rule_families() -> Vec<GroundTruth> {
        let a = Alphabet::binary();
        vec![
            GroundTruth::echo(a.clone()),
            GroundTruth::constant(a.clone(), Str::empty()).unwrap(),
            GroundTruth::new(a.clone(), DefaultRule::IndexShift { k: 3 }).unwrap(),
            GroundTruth::echo(a.clone())
                .with_override(s(&[0]), [s(&[1]), s(&[0, 0])])
                .unwrap()
                .with_override(s(&[]), [s(&[1, 1]), s(&[0])])
                .unwrap(),
        ]
    }

    #[test]
    fn empty_output_rejection() {
        let a = Alphabet::binary();
        assert!(GroundTruth::echo(a.clone()).rejects_empty_output_on_long_inputs());
        assert!(!GroundTruth::constant(a.clone(), Str::empty())
            .unwrap()
            .rejects_empty_output_on_long_inputs());
        assert!(GroundTruth::constant(a.clone(), s(&[0]))
            .unwrap()
            .rejects_empty_output_on_long_inputs());
        assert!(GroundTruth::new(a, DefaultRule::IndexShift { k: 1 })
            .unwrap()
            .rejects_empty_output_on_long_inputs());
    }

    #[test]
    fn accepts_examples() {
        let a = Alphabet::binary();
        let echo = GroundTruth::echo(a.clone());
        assert!(echo.accepts(&s(&[0, 1]), &s(&[0, 1])));
        assert!(!echo.accepts(&s(&[0, 1]), &s(&[1])));
        let c = GroundTruth::constant(a.clone(), Str::empty()).unwrap();
        assert!(c.accepts(&s(&[1]), &Str::empty()));
        assert!(!c.accepts(&s(&[1]), &s(&[0])));
        let o = GroundTruth::echo(a)
            .with_override(s(&[1, 0]), [s(&[0]), s(&[1])])
            .unwrap();
        assert!(o.accepts(&s(&[1, 0]), &s(&[1])));
        assert!(!o.accepts(&s(&[1, 0]), &s(&[1, 0])));
    }

    #[test]
    fn canonical_examples() {
        let a = Alphabet::binary();
        assert_eq!(
            GroundTruth::echo(a.clone()).canonical(&s(&[1, 1])),
            s(&[1, 1])
        );
        let o = GroundTruth::echo(a.clone())
            .with_override(s(&[0]), [s(&[1]), s(&[0])])
            .unwrap();
        assert_eq!(o.canonical(&s(&[0])), s(&[0]));
        let c = GroundTruth::constant(a.clone(), s(&[1, 0])).unwrap();
        assert_eq!(c.canonical(&s(&[0, 0, 0])), s(&[1, 0]));
        let shift = GroundTruth::new(a, DefaultRule::IndexShift { k: 2 }).unwrap();
        assert_eq!(shift.canonical(&Str::empty()), s(&[1]));
    }

    #[test]
    fn rejects_empty_and_out_of_range_sets() {
        let a = Alphabet::binary();
        assert!(GroundTruth::echo(a.clone())
            .with_override(s(&[0]), [])
            .is_err());
        assert!(GroundTruth::echo(a.clone())
            .with_override(s(&[0]), [s(&[2])])
            .is_err());
        assert!(GroundTruth::constant(a, s(&[5])).is_err());
    }

    #[test]
    fn canonical_is_always_accepted() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mu = StringDistribution::LengthFactored(LengthFactored::halving(Alphabet::binary()));
        for gt in rule_families() {
            for _ in 0..10_000 {
                let x = mu.sample(&mut rng);
                assert!(gt.accepts(&x, &gt.canonical(&x)));
            }
        }
    }

    #[test]
    fn generate_examples() {
        let a = Alphabet::binary();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let gt = GroundTruth::echo(a);
        let mu = StringDistribution::point(s(&[1, 0]));
        assert!(generate_qualified(&mu, &gt, 0, Labeler::Canonical, &mut rng).is_empty());
        let t = generate_qualified(&mu, &gt, 3, Labeler::Canonical, &mut rng);
        assert_eq!(t.pairs, vec![(s(&[1, 0]), s(&[1, 0])); 3]);
    }

    #[test]
    fn generated_pairs_are_qualified() {
        let mu = StringDistribution::LengthFactored(LengthFactored::halving(Alphabet::binary()));
        for labeler in [Labeler::Canonical, Labeler::UniformOverAcceptable] {
            for gt in rule_families() {
                let mut rng = ChaCha8Rng::seed_from_u64(9);
                let t = generate_qualified(&mu, &gt, 10_000, labeler, &mut rng);
                assert!(t.iter().all(|(x, y)| gt.accepts(x, y)));
            }
        }
    }

    #[test]
    fn uniform_labeler_uses_every_option() {
        let a = Alphabet::binary();
        let gt = GroundTruth::echo(a)
            .with_override(Str::empty(), [s(&[0]), s(&[1]), s(&[1, 1])])
            .unwrap();
        let mu = StringDistribution::point(Str::empty());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = generate_qualified(&mu, &gt, 300, Labeler::UniformOverAcceptable, &mut rng);
        let seen: BTreeSet<Str> = t.iter().map(|(_, y)| y.clone()).collect();
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn json_schema() {
        let spec: GroundTruthSpec = serde_json::from_str(
            r#"{"overrides": [{"s": [0], "accept": [[1], [0, 0]]}], "default": {"kind": "index_shift", "k": 1}}"#,
        )
        .unwrap();
        let gt = GroundTruth::from_spec(Alphabet::binary(), spec).unwrap();
        assert!(gt.accepts(&s(&[0]), &s(&[0, 0])));
        assert!(gt.accepts(&s(&[1]), &s(&[0, 0])));
        let spec: GroundTruthSpec =
            serde_json::from_str(r#"{"default": {"kind": "constant", "y": []}}"#).unwrap();
        assert_eq!(spec.default, DefaultRule::Constant { y: Str::empty() });
        assert!(serde_json::from_str::<GroundTruthSpec>(
            r#"{"default": {"kind": "echo"}, "extra": 1}"#
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn identical_seeds_give_identical_sequences(seed in any::<u64>(), m in 0usize..200) {
            let mu = StringDistribution::LengthFactored(LengthFactored::halving(Alphabet::new(3).unwrap()));
            let gt = GroundTruth::echo(Alphabet::new(3).unwrap());
            let a = generate_qualified(&mu, &gt, m, Labeler::Canonical, &mut ChaCha8Rng::seed_from_u64(seed));
            let b = generate_qualified(&mu, &gt, m, Labeler::Canonical, &mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        }
    }
}
