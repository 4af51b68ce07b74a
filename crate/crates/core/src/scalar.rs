//! Scalar fields and the twisting Laurent series.
//!
//! Everything in the engine is generic over [`Scalar`], a field with an exact
//! textual form. The intended instance is [`num_rational::BigRational`]; `f64`
//! is provided for quick numeric evaluation (Schur values, spot checks) but
//! zero tests on it are only as good as floating point.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

pub trait Scalar:
    Clone + Debug + Display + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// `Some(n)` iff the value is exactly the integer `n`.
    fn to_i64_exact(&self) -> Option<i64>;

    /// Parses `"p/q"` or `"p"` with an optional sign.
    fn parse_exact(text: &str) -> std::result::Result<Self, String>;

    /// External string form; inverse of [`Scalar::parse_exact`].
    fn to_external(&self) -> String {
        self.to_string()
    }
}

fn split_ratio(text: &str) -> std::result::Result<(&str, Option<&str>), String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty rational".into());
    }
    let mut parts = text.splitn(2, '/');
    let num = parts.next().unwrap_or("").trim();
    let den = parts.next().map(str::trim);
    if let Some(d) = den {
        if d.contains('/') {
            return Err(format!("too many `/` in `{text}`"));
        }
    }
    Ok((num, den))
}

fn parse_int<T: Num>(s: &str, whole: &str) -> std::result::Result<T, String> {
    let digits = s.strip_prefix('+').unwrap_or(s);
    if digits.is_empty() || digits == "-" {
        return Err(format!("invalid rational `{whole}`"));
    }
    T::from_str_radix(digits, 10).map_err(|_| format!("invalid rational `{whole}`"))
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn to_i64_exact(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    fn parse_exact(text: &str) -> std::result::Result<Self, String> {
        let (num, den) = split_ratio(text)?;
        let n: BigInt = parse_int(num, text)?;
        let d: BigInt = match den {
            Some(d) => parse_int(d, text)?,
            None => BigInt::one(),
        };
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(BigRational::new(n, d))
    }
}

impl Scalar for Ratio<i64> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n)
    }

    fn to_i64_exact(&self) -> Option<i64> {
        self.is_integer().then(|| self.to_integer())
    }

    fn parse_exact(text: &str) -> std::result::Result<Self, String> {
        let (num, den) = split_ratio(text)?;
        let n: i64 = parse_int(num, text)?;
        let d: i64 = match den {
            Some(d) => parse_int(d, text)?,
            None => 1,
        };
        if d == 0 {
            return Err("zero denominator".into());
        }
        Ok(Ratio::new(n, d))
    }
}

impl Scalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn to_i64_exact(&self) -> Option<i64> {
        (self.is_finite() && self.fract() == 0.0 && self.abs() < 9.0e15).then(|| *self as i64)
    }

    fn parse_exact(text: &str) -> std::result::Result<Self, String> {
        let (num, den) = split_ratio(text)?;
        let n: f64 = num
            .parse()
            .map_err(|_| format!("invalid rational `{text}`"))?;
        let d: f64 = match den {
            Some(d) => d.parse().map_err(|_| format!("invalid rational `{text}`"))?,
            None => 1.0,
        };
        if d == 0.0 {
            return Err("zero denominator".into());
        }
        Ok(n / d)
    }
}

/// Floor of `2·w` for a non-negative rational `w`; weights are tracked doubled.
pub fn doubled_floor(w: &BigRational) -> i64 {
    let twice = w * BigRational::from_i64(2);
    twice.floor().to_integer().to_i64().unwrap_or(i64::MAX)
}

/// Renders a doubled weight `w2` as an exact rational string.
pub fn half_string(w2: i64) -> String {
    if w2 % 2 == 0 {
        (w2 / 2).to_string()
    } else {
        format!("{w2}/2")
    }
}

/// The Laurent series `χ(z) = Σ χ_m z^(-m-1)` with finitely many nonzero
/// coefficients. `χ_m` with `m > 0` are pole coefficients beyond `1/z`; the
/// regular tail lives at negative `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiSeries<S> {
    coeffs: BTreeMap<i64, S>,
}

impl<S: Scalar> Default for ChiSeries<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> ChiSeries<S> {
    pub fn zero() -> Self {
        ChiSeries {
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds a series from `(m, χ_m)` pairs; zero values are dropped and
    /// repeated indices accumulate.
    pub fn from_coeffs(pairs: impl IntoIterator<Item = (i64, S)>) -> Self {
        let mut coeffs: BTreeMap<i64, S> = BTreeMap::new();
        for (m, value) in pairs {
            let entry = coeffs.entry(m).or_insert_with(S::zero);
            *entry = entry.clone() + value;
        }
        coeffs.retain(|_, v| !v.is_zero());
        ChiSeries { coeffs }
    }

    /// `χ(z) = (ℓ+1)/z + Σ_{n≥1} tail[n-1] z^(n-1)`.
    pub fn with_ell(ell: i64, tail: &[S]) -> Self {
        let head = std::iter::once((0, S::from_i64(ell + 1)));
        let rest = tail
            .iter()
            .enumerate()
            .map(|(n, v)| (-(n as i64) - 1, v.clone()));
        Self::from_coeffs(head.chain(rest))
    }

    pub fn coeff(&self, m: i64) -> S {
        self.coeffs.get(&m).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient `χ_{-n}` of `z^(n-1)`.
    pub fn tail(&self, n: i64) -> S {
        self.coeff(-n)
    }

    pub fn support(&self) -> impl Iterator<Item = (i64, &S)> {
        self.coeffs.iter().map(|(m, v)| (*m, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `p = max({m > 0 : χ_m ≠ 0} ∪ {0})`.
    pub fn pole_order(&self) -> i64 {
        self.coeffs
            .keys()
            .next_back()
            .copied()
            .filter(|m| *m > 0)
            .unwrap_or(0)
    }

    /// Largest `n` with `χ_{-n} ≠ 0`, or 0.
    pub fn tail_depth(&self) -> i64 {
        self.coeffs
            .keys()
            .next()
            .copied()
            .filter(|m| *m < 0)
            .map(|m| -m)
            .unwrap_or(0)
    }

    /// `ℓ = χ_0 - 1` when there is no higher pole and `χ_0` is an integer.
    pub fn ell_of(&self) -> Option<i64> {
        if self.pole_order() != 0 {
            return None;
        }
        self.coeff(0).to_i64_exact().map(|c| c - 1)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let raw: RawChi =
            serde_json::from_str(text).map_err(|e| Error::parse("chi", e.to_string()))?;
        let mut coeffs = BTreeMap::new();
        for (idx, entry) in raw.coeffs.into_iter().enumerate() {
            let value = S::parse_exact(&entry.value)
                .map_err(|msg| Error::parse(format!("coeffs[{idx}].value"), msg))?;
            if coeffs.contains_key(&entry.m) {
                return Err(Error::parse(
                    format!("coeffs[{idx}].m"),
                    format!("duplicate index {}", entry.m),
                ));
            }
            coeffs.insert(entry.m, value);
        }
        coeffs.retain(|_, v: &mut S| !v.is_zero());
        Ok(ChiSeries { coeffs })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("chi serializes")
    }
}

impl<S: Scalar> Display for ChiSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, v) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match -m - 1 {
                0 => write!(f, "{v}")?,
                1 => write!(f, "({v})·z")?,
                e => write!(f, "({v})·z^{e}")?,
            }
        }
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChi {
    coeffs: Vec<RawCoeff>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawCoeff {
    m: i64,
    value: String,
}

impl<S: Scalar> Serialize for ChiSeries<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            coeffs: &'a [RawCoeff],
        }
        let coeffs: Vec<RawCoeff> = self
            .coeffs
            .iter()
            .map(|(m, v)| RawCoeff {
                m: *m,
                value: v.to_external(),
            })
            .collect();
        Out { coeffs: &coeffs }.serialize(serializer)
    }
}

/// Sign helper: `(-1)^k` as a scalar.
pub(crate) fn sign<S: Scalar>(negative: bool) -> S {
    if negative {
        -S::one()
    } else {
        S::one()
    }
}
