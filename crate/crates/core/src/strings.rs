//! Alphabets, strings over them and the shortlex enumeration of Σ*.
//!
//! Strings are sequences of symbol indices in `[0, |Σ|)`. The shortlex rank
//! of a string coincides with its value in bijective base-|Σ| numeration
//! (digits `1..=|Σ|`), which is what the conversions below exploit.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Symbol = u32;

/// A finite string over some alphabet, ordered shortlex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Str(Vec<Symbol>);

impl Str {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Str(symbols)
    }

    pub fn empty() -> Self {
        Str(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Str {
    fn from(v: Vec<Symbol>) -> Self {
        Str(v)
    }
}

impl From<&[Symbol]> for Str {
    fn from(v: &[Symbol]) -> Self {
        Str(v.to_vec())
    }
}

impl Ord for Str {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Str {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Str {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("\"\"");
        }
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct AlphabetRepr {
    size: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<char>>,
}

/// The finite symbol set Σ. Only its size matters to the algorithms; labels
/// are for display.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AlphabetRepr", into = "AlphabetRepr")]
pub struct Alphabet {
    size: u32,
    labels: Option<Vec<char>>,
}

impl TryFrom<AlphabetRepr> for Alphabet {
    type Error = Error;

    fn try_from(r: AlphabetRepr) -> Result<Self> {
        match r.labels {
            Some(labels) => {
                let a = Alphabet::with_labels(labels)?;
                if a.size != r.size {
                    return Err(Error::InvalidLabels(format!(
                        "{} labels given for an alphabet of size {}",
                        a.size, r.size
                    )));
                }
                Ok(a)
            }
            None => Alphabet::new(r.size),
        }
    }
}

impl From<Alphabet> for AlphabetRepr {
    fn from(a: Alphabet) -> Self {
        AlphabetRepr {
            size: a.size,
            labels: a.labels,
        }
    }
}

impl Alphabet {
    pub fn new(size: u32) -> Result<Self> {
        if size < 2 {
            return Err(Error::AlphabetTooSmall(size));
        }
        Ok(Alphabet { size, labels: None })
    }

    pub fn binary() -> Self {
        Alphabet {
            size: 2,
            labels: None,
        }
    }

    pub fn with_labels(labels: Vec<char>) -> Result<Self> {
        let size = u32::try_from(labels.len())
            .map_err(|_| Error::InvalidLabels("too many labels".into()))?;
        if size < 2 {
            return Err(Error::AlphabetTooSmall(size));
        }
        let mut seen = labels.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidLabels("labels must be distinct".into()));
        }
        Ok(Alphabet {
            size,
            labels: Some(labels),
        })
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn labels(&self) -> Option<&[char]> {
        self.labels.as_deref()
    }

    pub fn validate(&self, s: &Str) -> Result<()> {
        match s.0.iter().find(|&&c| c >= self.size) {
            Some(&symbol) => Err(Error::SymbolOutOfRange {
                symbol,
                size: self.size,
            }),
            None => Ok(()),
        }
    }

    /// Builds a string from symbol indices, checking every index.
    pub fn string(&self, symbols: Vec<Symbol>) -> Result<Str> {
        let s = Str(symbols);
        self.validate(&s)?;
        Ok(s)
    }

    /// Renders with labels when present, otherwise as an index list.
    pub fn render(&self, s: &Str) -> String {
        match &self.labels {
            Some(labels) => s.0.iter().map(|&c| labels[c as usize]).collect(),
            None => s.to_string(),
        }
    }

    /// |Σⁿ| in exact integer arithmetic.
    pub fn count_exact(&self, n: u32) -> Result<u128> {
        (self.size as u128)
            .checked_pow(n)
            .ok_or(Error::Overflow("|Σ|^n"))
    }

    /// |Σ^{≤n}| = (|Σ|^{n+1} − 1)/(|Σ| − 1).
    pub fn count_upto(&self, n: u32) -> Result<u128> {
        let b = self.size as u128;
        let top = n.checked_add(1).ok_or(Error::Overflow("|Σ^{≤n}|"))?;
        let pow = b.checked_pow(top).ok_or(Error::Overflow("|Σ^{≤n}|"))?;
        Ok((pow - 1) / (b - 1))
    }

    /// Rank of `s` in shortlex order; the empty string has rank 0.
    pub fn shortlex_index(&self, s: &Str) -> Result<u128> {
        self.validate(s)?;
        let b = self.size as u128;
        s.0.iter().try_fold(0u128, |acc, &c| {
            acc.checked_mul(b)
                .and_then(|v| v.checked_add(c as u128 + 1))
                .ok_or(Error::Overflow("shortlex index"))
        })
    }

    /// Inverse of [`Alphabet::shortlex_index`]. Every `u128` rank has a
    /// string, so this cannot fail.
    pub fn shortlex_string(&self, mut index: u128) -> Str {
        let b = self.size as u128;
        let mut digits = Vec::new();
        while index > 0 {
            index -= 1;
            digits.push((index % b) as Symbol);
            index /= b;
        }
        digits.reverse();
        Str(digits)
    }

    /// The string whose shortlex rank is `rank(s) + k`, computed digit-wise
    /// so that arbitrarily long strings never overflow.
    pub fn shift(&self, s: &Str, k: u128) -> Str {
        let b = self.size as u128;
        let mut digits = s.0.clone();
        let mut carry = k;
        // Bijective digit values live in 1..=b.
        let split = |v: u128| -> (Symbol, u128) {
            let d = (v - 1) % b + 1;
            ((d - 1) as Symbol, (v - d) / b)
        };
        for pos in (0..digits.len()).rev() {
            if carry == 0 {
                break;
            }
            let (hi, lo) = (carry / b, carry % b);
            let (d, c) = split(digits[pos] as u128 + 1 + lo);
            digits[pos] = d;
            carry = hi + c;
        }
        let mut prefix = Vec::new();
        while carry > 0 {
            let (d, c) = split(carry);
            prefix.push(d);
            carry = c;
        }
        prefix.reverse();
        prefix.extend(digits);
        Str(prefix)
    }

    /// All strings of length exactly `n`, in lexicographic order.
    pub fn strings_of_len(&self, n: usize) -> StringsOfLen {
        StringsOfLen {
            size: self.size,
            next: Some(vec![0; n]),
        }
    }

    /// All strings of length at most `n`, in shortlex order.
    pub fn strings_upto(&self, n: usize) -> impl Iterator<Item = Str> + '_ {
        (0..=n).flat_map(move |len| self.strings_of_len(len))
    }
}

/// Odometer over Σⁿ.
#[derive(Clone, Debug)]
pub struct StringsOfLen {
    size: u32,
    next: Option<Vec<Symbol>>,
}

impl Iterator for StringsOfLen {
    type Item = Str;

    fn next(&mut self) -> Option<Str> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = succ.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            if succ[pos] + 1 < self.size {
                succ[pos] += 1;
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(Str(current))
    }
}
