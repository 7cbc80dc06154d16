//! Exact rational helpers and the `{"num": .., "den": ..}` JSON encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Exact rational value of a finite binary float.
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Domain(format!("{x} is not a finite number")))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn is_probability(x: &Rational) -> bool {
    !x.is_negative() && *x <= Rational::one()
}

/// Parses `"3/4"`, `"0.25"`, `"1e-3"` or `"2"` into an exact rational.
/// Decimal strings are read as exact decimal fractions, not as binary floats.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Domain(format!("cannot parse {text:?} as a rational"));
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Domain(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (text, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let num: BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, scale.unsigned_abs() as usize))
    };
    Ok(if neg { -value } else { value })
}

/// The exact decimal a float prints as, e.g. `0.1` becomes `1/10`.
pub fn from_f64_decimal(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("{x} is not a finite number")));
    }
    parse(&x.to_string())
}

pub mod serde_rational {
    //! Serializes a rational as `{"num": n, "den": d}`. Integers that fit in
    //! an `i64` are written as JSON numbers, larger ones as decimal strings.
    //! Deserialization also accepts a bare number or an `"a/b"` string.

    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::Value;

    #[derive(Serialize)]
    struct Out {
        num: Value,
        den: Value,
    }

    fn big(v: &BigInt) -> Value {
        match v.to_i64() {
            Some(i) => Value::from(i),
            None => Value::from(v.to_string()),
        }
    }

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        Out {
            num: big(x.numer()),
            den: big(x.denom()),
        }
        .serialize(s)
    }

    fn bigint_from(v: &Value) -> Option<BigInt> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(BigInt::from)
                .or_else(|| n.as_u64().map(BigInt::from)),
            Value::String(s) => s.parse().ok(),
            _ => None,
        }
    }

    pub fn from_value(v: &Value) -> std::result::Result<Rational, String> {
        match v {
            Value::Object(map) => {
                let num = map
                    .get("num")
                    .and_then(bigint_from)
                    .ok_or("missing or bad `num`")?;
                let den = map
                    .get("den")
                    .and_then(bigint_from)
                    .ok_or("missing or bad `den`")?;
                if den.is_zero() {
                    return Err("zero denominator".into());
                }
                Ok(Rational::new(num, den))
            }
            Value::String(s) => parse(s).map_err(|e| e.to_string()),
            Value::Number(n) => {
                // JSON numbers are read as the decimal they are written as.
                parse(&n.to_string()).map_err(|e| e.to_string())
            }
            _ => Err("expected a rational".into()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = Value::deserialize(d)?;
        from_value(&v).map_err(D::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::*;
    use serde::de::Error as _;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};
    use serde_json::Value;

    struct Wrap<'a>(&'a Rational);

    impl serde::Serialize for Wrap<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            super::serde_rational::serialize(self.0, s)
        }
    }

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&Wrap(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let vs = Vec::<Value>::deserialize(d)?;
        vs.iter()
            .map(|v| super::serde_rational::from_value(v).map_err(D::Error::custom))
            .collect()
    }
}

pub mod serde_rational_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};
    use serde_json::Value;

    pub fn serialize<S: Serializer>(
        x: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(x) => super::serde_rational::serialize(x, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        use serde::de::Error as _;
        match Option::<Value>::deserialize(d)? {
            None | Some(Value::Null) => Ok(None),
            Some(v) => super::serde_rational::from_value(&v)
                .map(Some)
                .map_err(D::Error::custom),
        }
    }
}
