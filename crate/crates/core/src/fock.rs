//! The charged-fermion Fock module `F` and its subspace `F̃ = Ker Ψ⁻(½)`.
//!
//! A basis state is the canonical word
//! `Ψ⁻(-λ₁)⋯Ψ⁻(-λ_r) Ψ⁺(-μ₁)⋯Ψ⁺(-μ_s) |0⟩` with both `λ` and `μ` strictly
//! decreasing positive half-odd integers. Signs of every mode action come from
//! counting transpositions into that word. `F̃` is spanned by the states with
//! all `μ ≥ 3/2`; states with `½ ∈ μ` only appear in the ambient module.

use std::collections::BTreeMap;
use std::cmp::Ordering;
use std::fmt::{self, Display};
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{doubled_floor, sign, Scalar};
use crate::sparse::SparseVec;

/// A half-odd integer `r ∈ ½ + ℤ`, stored as the odd integer `2r`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfOdd(i64);

impl HalfOdd {
    pub fn from_doubled(doubled: i64) -> Result<Self> {
        if doubled.rem_euclid(2) != 1 {
            return Err(Error::Domain(format!("{doubled}/2 is not a half-odd integer")));
        }
        Ok(HalfOdd(doubled))
    }

    /// `n + ½`.
    pub const fn plus_half(n: i64) -> Self {
        HalfOdd(2 * n + 1)
    }

    /// `n - ½`.
    pub const fn minus_half(n: i64) -> Self {
        HalfOdd(2 * n - 1)
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub const fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub const fn neg(self) -> Self {
        HalfOdd(-self.0)
    }

    /// `⌈r⌉`, i.e. the integer `i` with `r = i - ½`.
    pub const fn ceil(self) -> i64 {
        (self.0 + 1) / 2
    }

    pub fn to_rational<S: Scalar>(self) -> S {
        S::from_ratio(self.0, 2)
    }
}

impl Display for HalfOdd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

impl FromStr for HalfOdd {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let q = BigRational::parse_exact(s).map_err(|m| Error::parse("mode", m))?;
        let twice = q * BigRational::from_i64(2);
        match twice.to_i64_exact() {
            Some(d) => HalfOdd::from_doubled(d),
            None => Err(Error::parse("mode", format!("`{s}` is not a half-odd integer"))),
        }
    }
}

impl Serialize for HalfOdd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HalfOdd {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Species {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Species {
    pub fn charge(self) -> i64 {
        match self {
            Species::Plus => 1,
            Species::Minus => -1,
        }
    }

    fn symbol(self) -> char {
        match self {
            Species::Plus => '+',
            Species::Minus => '-',
        }
    }
}

/// Basis state `v_{λ,μ}`. Entries are stored as positive half-odd integers in
/// strictly decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FermionState {
    lambda: Vec<HalfOdd>,
    mu: Vec<HalfOdd>,
}

pub type FermionVec<S> = SparseVec<FermionState, S>;

fn strictly_decreasing_positive(parts: &[HalfOdd]) -> bool {
    parts.iter().all(|p| p.is_positive()) && parts.windows(2).all(|w| w[0] > w[1])
}

impl FermionState {
    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn new(lambda: Vec<HalfOdd>, mu: Vec<HalfOdd>) -> Result<Self> {
        if !strictly_decreasing_positive(&lambda) || !strictly_decreasing_positive(&mu) {
            return Err(Error::Domain(
                "superpartitions must be strictly decreasing and positive".into(),
            ));
        }
        Ok(FermionState { lambda, mu })
    }

    /// Convenience constructor from doubled entries, e.g. `(&[1], &[3])` for `v_{(½),(3/2)}`.
    pub fn from_doubled(lambda: &[i64], mu: &[i64]) -> Result<Self> {
        let conv = |xs: &[i64]| -> Result<Vec<HalfOdd>> {
            xs.iter().map(|d| HalfOdd::from_doubled(*d)).collect()
        };
        Self::new(conv(lambda)?, conv(mu)?)
    }

    pub fn lambda(&self) -> &[HalfOdd] {
        &self.lambda
    }

    pub fn mu(&self) -> &[HalfOdd] {
        &self.mu
    }

    pub fn is_vacuum(&self) -> bool {
        self.lambda.is_empty() && self.mu.is_empty()
    }

    /// Twice the `L^f(0)` eigenvalue `Σλ + Σμ`.
    pub fn weight2(&self) -> i64 {
        self.lambda.iter().chain(&self.mu).map(|p| p.doubled()).sum()
    }

    pub fn weight(&self) -> BigRational {
        BigRational::from_ratio(self.weight2(), 2)
    }

    /// `J^f(0)` eigenvalue `ℓ(μ) - ℓ(λ)`.
    pub fn charge(&self) -> i64 {
        self.mu.len() as i64 - self.lambda.len() as i64
    }

    /// Whether the state lies in `F̃`, i.e. `½ ∉ μ`.
    pub fn is_tilde(&self) -> bool {
        self.mu.last().map_or(true, |m| m.doubled() >= 3)
    }

    /// Action of `Ψ^±(mode)`; `None` when the result vanishes, otherwise the
    /// sign flag (`true` = negative) and the resulting canonical state.
    pub fn apply_psi(&self, species: Species, mode: HalfOdd) -> Option<(bool, FermionState)> {
        let r = self.lambda.len();
        if !mode.is_positive() {
            let a = mode.neg();
            let (target, offset) = match species {
                Species::Minus => (&self.lambda, 0),
                Species::Plus => (&self.mu, r),
            };
            let pos = target.iter().take_while(|x| **x > a).count();
            if target.get(pos) == Some(&a) {
                return None;
            }
            let mut out = self.clone();
            match species {
                Species::Minus => out.lambda.insert(pos, a),
                Species::Plus => out.mu.insert(pos, a),
            }
            Some(((offset + pos) % 2 == 1, out))
        } else {
            // Ψ⁺(m) contracts against Ψ⁻(-m), Ψ⁻(m) against Ψ⁺(-m).
            let (target, offset) = match species {
                Species::Plus => (&self.lambda, 0),
                Species::Minus => (&self.mu, r),
            };
            let idx = target.iter().position(|x| *x == mode)?;
            let mut out = self.clone();
            match species {
                Species::Plus => out.lambda.remove(idx),
                Species::Minus => out.mu.remove(idx),
            };
            Some(((offset + idx) % 2 == 1, out))
        }
    }
}

impl Ord for FermionState {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight2()
            .cmp(&other.weight2())
            .then_with(|| self.charge().cmp(&other.charge()))
            .then_with(|| self.lambda.cmp(&other.lambda))
            .then_with(|| self.mu.cmp(&other.mu))
    }
}

impl PartialOrd for FermionState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn fmt_mode(f: &mut fmt::Formatter<'_>, species: Species, part: HalfOdd) -> fmt::Result {
    write!(f, "Psi{}(-{}) ", species.symbol(), part)
}

impl Display for FermionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.lambda {
            fmt_mode(f, Species::Minus, *p)?;
        }
        for p in &self.mu {
            fmt_mode(f, Species::Plus, *p)?;
        }
        write!(f, "|0>")
    }
}

impl FromStr for FermionState {
    type Err = Error;

    /// Parses the textual form `"Psi-(-1/2) Psi+(-3/2) |0>"`. The word must
    /// already be canonical.
    fn from_str(s: &str) -> Result<Self> {
        let mut lambda = Vec::new();
        let mut mu = Vec::new();
        let mut tokens = s.split_whitespace().peekable();
        let mut saw_vacuum = false;
        while let Some(tok) = tokens.next() {
            if tok == "|0>" {
                saw_vacuum = true;
                if tokens.peek().is_some() {
                    return Err(Error::parse("state", "tokens after |0>"));
                }
                break;
            }
            let (species, rest) = if let Some(rest) = tok.strip_prefix("Psi+(") {
                (Species::Plus, rest)
            } else if let Some(rest) = tok.strip_prefix("Psi-(") {
                (Species::Minus, rest)
            } else {
                return Err(Error::parse("state", format!("unexpected token `{tok}`")));
            };
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::parse("state", format!("unclosed `{tok}`")))?;
            let mode: HalfOdd = inner.parse()?;
            if mode.is_positive() {
                return Err(Error::parse("state", format!("`{tok}` is not a creation mode")));
            }
            match species {
                Species::Minus if mu.is_empty() => lambda.push(mode.neg()),
                Species::Minus => return Err(Error::parse("state", "Psi- after Psi+")),
                Species::Plus => mu.push(mode.neg()),
            }
        }
        if !saw_vacuum {
            return Err(Error::parse("state", "missing |0>"));
        }
        FermionState::new(lambda, mu).map_err(|e| Error::parse("state", e.to_string()))
    }
}

/// Linear extension of [`FermionState::apply_psi`].
pub fn apply_psi<S: Scalar>(species: Species, mode: HalfOdd, v: &FermionVec<S>) -> FermionVec<S> {
    v.map_terms(|s| {
        s.apply_psi(species, mode)
            .map(|(neg, out)| (sign::<S>(neg), out))
    })
}

/// `true` iff every term is a `F̃` basis state.
pub fn in_tilde<S: Scalar>(v: &FermionVec<S>) -> bool {
    v.keys().all(FermionState::is_tilde)
}

/// `true` iff `Ψ⁻(½) v = 0`.
pub fn check_tilde<S: Scalar>(v: &FermionVec<S>) -> bool {
    apply_psi(Species::Minus, HalfOdd::plus_half(0), v).is_zero()
}

fn distinct_parts(smallest2: i64, budget2: i64) -> Vec<Vec<HalfOdd>> {
    // all strictly decreasing lists of odd doubled parts >= smallest2 with sum <= budget2
    fn rec(max_part: i64, smallest: i64, budget: i64, prefix: &mut Vec<HalfOdd>, out: &mut Vec<Vec<HalfOdd>>) {
        out.push(prefix.clone());
        let mut part = smallest;
        while part <= budget && part < max_part {
            prefix.push(HalfOdd(part));
            rec(part, smallest, budget - part, prefix, out);
            prefix.pop();
            part += 2;
        }
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    rec(i64::MAX, smallest2, budget2, &mut prefix, &mut out);
    out
}

/// All basis states with doubled weight at most `max_weight2`, sorted by the
/// global state order.
pub fn enumerate_basis_doubled(max_weight2: i64, ambient: bool) -> Vec<FermionState> {
    if max_weight2 < 0 {
        return Vec::new();
    }
    let lambdas = distinct_parts(1, max_weight2);
    let mu_min = if ambient { 1 } else { 3 };
    let mus = distinct_parts(mu_min, max_weight2);
    let mut out = Vec::new();
    for lambda in &lambdas {
        let lw: i64 = lambda.iter().map(|p| p.doubled()).sum();
        for mu in &mus {
            let mw: i64 = mu.iter().map(|p| p.doubled()).sum();
            if lw + mw <= max_weight2 {
                out.push(FermionState {
                    lambda: lambda.clone(),
                    mu: mu.clone(),
                });
            }
        }
    }
    out.sort();
    out
}

pub fn enumerate_basis(max_weight: &BigRational, ambient: bool) -> Vec<FermionState> {
    enumerate_basis_doubled(doubled_floor(max_weight), ambient)
}

/// Basis counts per `(2·weight, charge)`.
pub fn graded_dimension(max_weight2: i64, ambient: bool) -> BTreeMap<(i64, i64), u64> {
    let mut counts = BTreeMap::new();
    for s in enumerate_basis_doubled(max_weight2, ambient) {
        *counts.entry((s.weight2(), s.charge())).or_insert(0) += 1;
    }
    counts
}

/// Coefficients of the truncated product
/// `Π_{n≥0}(1 + x⁻¹ q^{n+½}) · Π_{n≥n₀}(1 + x q^{n+½})` with `n₀ = 1` on `F̃`
/// (`n₀ = 0` on `F`), keyed by `(2·weight, charge)`.
pub fn character_coefficients(max_weight2: i64, ambient: bool) -> BTreeMap<(i64, i64), u64> {
    let mut poly: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    poly.insert((0, 0), 1);
    let mut factors = Vec::new();
    let mut d = 1;
    while d <= max_weight2 {
        factors.push((d, -1));
        if ambient || d >= 3 {
            factors.push((d, 1));
        }
        d += 2;
    }
    for (w, c) in factors {
        let snapshot: Vec<_> = poly.iter().map(|(k, v)| (*k, *v)).collect();
        for ((pw, pc), count) in snapshot {
            if pw + w <= max_weight2 {
                *poly.entry((pw + w, pc + c)).or_insert(0) += count;
            }
        }
    }
    poly
}
