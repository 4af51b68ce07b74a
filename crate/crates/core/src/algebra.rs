//! Action of the Lie superalgebra `𝒜` on `F̃_χ`.
//!
//! Odd generators act through the fermions:
//!
//! ```text
//! G⁺(i-½) = -i Ψ⁺(i-½)
//! G⁻(i-½) = (χ₀ - i) Ψ⁻(i-½) + Σ_{m≠0} χ_m Ψ⁻(i-m-½)
//! ```
//!
//! and the even generators act by scalars, `T(n) = -χ_n/2` and
//! `S(n) = -(n+1)χ_n/4`, with central charge `C = -3`. The scalar forms come
//! from evaluating `j = (γ⁺(-1) - γ⁻(-1))/2` and
//! `ν = (2γ⁺(-1)γ⁻(-1) + γ⁺(-2) + γ⁻(-2))/4` on the one-dimensional module
//! where `γ⁺ ↦ 0`, `γ⁻(z) ↦ χ(z)`: `T(z) ↦ -χ(z)/2` and `S(z) ↦ -∂χ(z)/4`.

use std::fmt::{self, Display};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{apply_psi, in_tilde, FermionState, FermionVec, HalfOdd, Species};
use crate::scalar::{ChiSeries, Scalar};
use crate::span::OperatorFamily;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OpLabel {
    #[serde(rename = "G+")]
    GPlus,
    #[serde(rename = "G-")]
    GMinus,
    #[serde(rename = "Psi+")]
    PsiPlus,
    #[serde(rename = "Psi-")]
    PsiMinus,
}

impl OpLabel {
    fn as_str(self) -> &'static str {
        match self {
            OpLabel::GPlus => "G+",
            OpLabel::GMinus => "G-",
            OpLabel::PsiPlus => "Psi+",
            OpLabel::PsiMinus => "Psi-",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub op: OpLabel,
    pub mode: HalfOdd,
}

impl Letter {
    pub fn gplus(mode: HalfOdd) -> Self {
        Letter { op: OpLabel::GPlus, mode }
    }

    pub fn gminus(mode: HalfOdd) -> Self {
        Letter { op: OpLabel::GMinus, mode }
    }
}

impl Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.op.as_str(), self.mode)
    }
}

/// Product of mode operators, written left to right and applied right to
/// left. Serialized as `[{"op":"G+","mode":"-3/2"}, …]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OperatorWord(Vec<Letter>);

impl OperatorWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        OperatorWord(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self · other`.
    pub fn then_after(&self, other: &OperatorWord) -> OperatorWord {
        OperatorWord(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `Ω_s = Ψ⁺(-s-½)Ψ⁺(-s+½)⋯Ψ⁺(-3/2)|0⟩` for `s ≥ 1`.
pub fn omega(s: i64) -> Result<FermionState> {
    if s <= 0 {
        return Err(Error::Domain(format!("Ω_s needs s ≥ 1, got {s}")));
    }
    staircase(s)
}

/// `Ω_s` with the convention `Ω_0 = |0⟩`.
pub fn staircase(s: i64) -> Result<FermionState> {
    if s < 0 {
        return Err(Error::Domain(format!("negative staircase index {s}")));
    }
    let mu = (1..=s).rev().map(HalfOdd::plus_half).collect();
    FermionState::new(Vec::new(), mu)
}

/// What an extraction word maps its input to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "s")]
pub enum Target {
    Omega(i64),
    Vacuum,
}

impl Target {
    pub fn state(self) -> FermionState {
        match self {
            Target::Omega(s) => staircase(s).expect("s ≥ 1"),
            Target::Vacuum => FermionState::vacuum(),
        }
    }

    /// Staircase index with `Ω_0 = |0⟩`.
    pub fn index(self) -> i64 {
        match self {
            Target::Omega(s) => s,
            Target::Vacuum => 0,
        }
    }
}

/// Result of [`AModule::extract_omega`]: `word · v = scalar · target`.
#[derive(Clone, Debug, PartialEq)]
pub struct Extraction<S> {
    pub word: OperatorWord,
    pub target: Target,
    pub scalar: S,
}

/// `(lhs, rhs)` of an anticommutator relation applied to a vector.
pub type RelationSides<S> = (FermionVec<S>, FermionVec<S>);

/// `F̃_χ` as an `𝒜`-module.
#[derive(Clone, Debug, PartialEq)]
pub struct AModule<S> {
    chi: ChiSeries<S>,
}

impl<S: Scalar> AModule<S> {
    pub fn new(chi: ChiSeries<S>) -> Self {
        AModule { chi }
    }

    pub fn chi(&self) -> &ChiSeries<S> {
        &self.chi
    }

    /// `G⁺(i-½) v = -i Ψ⁺(i-½) v`.
    pub fn apply_gplus(&self, i: i64, v: &FermionVec<S>) -> FermionVec<S> {
        if i == 0 {
            return FermionVec::zero();
        }
        apply_psi(Species::Plus, HalfOdd::minus_half(i), v).scaled(&S::from_i64(-i))
    }

    /// `G⁻(i-½) v`; `χ` has finite support so the mode sum is finite.
    pub fn apply_gminus(&self, i: i64, v: &FermionVec<S>) -> FermionVec<S> {
        let mut out = apply_psi(Species::Minus, HalfOdd::minus_half(i), v)
            .scaled(&(self.chi.coeff(0) - S::from_i64(i)));
        for (m, c) in self.chi.support().filter(|(m, _)| *m != 0) {
            out.add_scaled(&apply_psi(Species::Minus, HalfOdd::minus_half(i - m), v), c);
        }
        out
    }

    pub fn apply_letter(&self, letter: Letter, v: &FermionVec<S>) -> FermionVec<S> {
        match letter.op {
            OpLabel::GPlus => self.apply_gplus(letter.mode.ceil(), v),
            OpLabel::GMinus => self.apply_gminus(letter.mode.ceil(), v),
            OpLabel::PsiPlus => apply_psi(Species::Plus, letter.mode, v),
            OpLabel::PsiMinus => apply_psi(Species::Minus, letter.mode, v),
        }
    }

    pub fn apply_word(&self, word: &OperatorWord, v: &FermionVec<S>) -> FermionVec<S> {
        word.letters()
            .iter()
            .rev()
            .fold(v.clone(), |acc, l| self.apply_letter(*l, &acc))
    }

    /// Scalar by which `T(n)` acts: `-χ_n / 2`.
    pub fn scalar_t(&self, n: i64) -> S {
        -self.chi.coeff(n) / S::from_i64(2)
    }

    /// Scalar by which `S(n)` acts: `-(n+1) χ_n / 4`.
    pub fn scalar_s(&self, n: i64) -> S {
        -S::from_i64(n + 1) * self.chi.coeff(n) / S::from_i64(4)
    }

    /// Both sides of
    /// `{G⁺(r), G⁻(s)} = 2S(r+s) + (r-s)T(r+s) + (C/3)(r² - ¼)δ_{r+s,0}`
    /// on `v`, with `C = -3`.
    pub fn anticommutator(&self, r: HalfOdd, s: HalfOdd, v: &FermionVec<S>) -> RelationSides<S> {
        let (i, j) = (r.ceil(), s.ceil());
        let lhs = self.apply_gplus(i, &self.apply_gminus(j, v)) + self.apply_gminus(j, &self.apply_gplus(i, v));
        let n = (r.doubled() + s.doubled()) / 2;
        let mut scalar = S::from_i64(2) * self.scalar_s(n)
            + S::from_ratio(r.doubled() - s.doubled(), 2) * self.scalar_t(n);
        if n == 0 {
            // (C/3)(r² - ¼) with C = -3
            scalar = scalar - S::from_ratio(r.doubled() * r.doubled() - 1, 4);
        }
        (lhs, v.scaled(&scalar))
    }

    pub fn anticommutator_check(&self, r: HalfOdd, s: HalfOdd, v: &FermionVec<S>) -> bool {
        let (lhs, rhs) = self.anticommutator(r, s, v);
        lhs == rhs
    }

    /// `{G^±(r), G^±(s)} v`, which must vanish.
    pub fn same_parity_anticommutator(&self, op: OpLabel, r: HalfOdd, s: HalfOdd, v: &FermionVec<S>) -> FermionVec<S> {
        let a = Letter { op, mode: r };
        let b = Letter { op, mode: s };
        self.apply_letter(a, &self.apply_letter(b, v)) + self.apply_letter(b, &self.apply_letter(a, v))
    }

    /// Extraction: a word of `G⁺` modes sending a nonzero
    /// `v ∈ F̃` to a nonzero multiple of some `Ω_s`, or of `|0⟩`.
    ///
    /// With `ℓ` the largest `λ`-length in `v`, pick `λ̄` of that length
    /// (lexicographically largest), collect the `μ` paired with it, take `μ̄`
    /// of minimal length (lexicographically largest) and fill the staircase
    /// `{3/2, …, s+½}` around it. `G⁺_{λ̄}` kills every other `λ`, and the
    /// filling kills every other `μ`.
    pub fn extract_omega(&self, v: &FermionVec<S>) -> Result<Extraction<S>> {
        if v.is_zero() {
            return Err(Error::Domain("extraction needs a nonzero vector".into()));
        }
        if !in_tilde(v) {
            return Err(Error::Domain("extraction needs a vector of F̃".into()));
        }
        let ell = v.keys().map(|s| s.lambda().len()).max().unwrap_or(0);
        let lambda_bar = v
            .keys()
            .filter(|s| s.lambda().len() == ell)
            .map(|s| s.lambda().to_vec())
            .max()
            .expect("nonzero vector");
        let t1: Vec<&[HalfOdd]> = v
            .keys()
            .filter(|s| s.lambda() == lambda_bar.as_slice())
            .map(|s| s.mu())
            .collect();

        let mut letters = Vec::new();
        let target = if t1.iter().all(|mu| mu.is_empty()) {
            Target::Vacuum
        } else {
            let ell1 = t1.iter().map(|mu| mu.len()).min().expect("T₁ nonempty");
            let mu_bar = t1
                .iter()
                .filter(|mu| mu.len() == ell1)
                .max()
                .expect("T₁ nonempty")
                .to_vec();
            let top = t1
                .iter()
                .filter_map(|mu| mu.first())
                .max()
                .expect("some μ nonempty");
            let s = top.ceil() - 1;
            // t = {3/2, …, s+½} \ μ̄, decreasing
            for k in (1..=s).rev() {
                let part = HalfOdd::plus_half(k);
                if !mu_bar.contains(&part) {
                    letters.push(Letter::gplus(part.neg()));
                }
            }
            Target::Omega(s)
        };
        letters.extend(lambda_bar.iter().map(|p| Letter::gplus(*p)));
        let word = OperatorWord::new(letters);

        let image = self.apply_word(&word, v);
        let expected = target.state();
        match image.leading() {
            Some((state, c)) if image.len() == 1 && *state == expected => Ok(Extraction {
                word,
                target,
                scalar: c.clone(),
            }),
            _ => Err(Error::Inconsistency(format!(
                "extraction word {word} sent the input to {image}, expected a multiple of {expected}"
            ))),
        }
    }

    fn require_shape(&self, ell: i64) -> Result<()> {
        if ell < 1 {
            return Err(Error::Domain(format!("ℓ must be positive, got {ell}")));
        }
        match self.chi.ell_of() {
            Some(e) if e == ell => Ok(()),
            _ => Err(Error::Domain(format!(
                "χ = {} is not of the form (ℓ+1)/z + regular with ℓ = {ell}",
                self.chi
            ))),
        }
    }

    /// Vacuum coefficient of `G⁻(½)⋯G⁻(ℓ-½) Ω_ℓ`.
    pub fn gminus_string_on_omega(&self, ell: i64) -> Result<S> {
        self.require_shape(ell)?;
        let mut v = FermionVec::basis(omega(ell)?);
        for i in (1..=ell).rev() {
            v = self.apply_gminus(i, &v);
        }
        let vacuum = FermionState::vacuum();
        let c = v.coeff(&vacuum);
        v.retain(|s| *s != vacuum);
        if !v.is_zero() {
            return Err(Error::Inconsistency(format!("non-vacuum remainder {v}")));
        }
        Ok(c)
    }

    /// `w = G⁻(3/2)⋯G⁻(ℓ-½) Ω_ℓ` (just `Ω_1` when `ℓ = 1`).
    pub fn singular_w(&self, ell: i64) -> Result<FermionVec<S>> {
        self.require_shape(ell)?;
        let mut v = FermionVec::basis(omega(ell)?);
        for i in (2..=ell).rev() {
            v = self.apply_gminus(i, &v);
        }
        Ok(v)
    }

    /// Applies `G^±(n-½)` for `n = 1..=n_max` to `w`; returns the letters
    /// whose image is nonzero.
    pub fn positive_mode_failures(&self, w: &FermionVec<S>, n_max: i64) -> Vec<Letter> {
        let mut failures = Vec::new();
        for n in 1..=n_max {
            let mode = HalfOdd::minus_half(n);
            if !self.apply_gplus(n, w).is_zero() {
                failures.push(Letter::gplus(mode));
            }
            if !self.apply_gminus(n, w).is_zero() {
                failures.push(Letter::gminus(mode));
            }
        }
        failures
    }
}

/// `G⁻(-N-½)⋯G⁻(-3/2)G⁻(-½)`.
pub fn vacuum_ladder_word(top: i64) -> OperatorWord {
    OperatorWord::new((0..=top).rev().map(|k| Letter::gminus(HalfOdd::plus_half(-k - 1))).collect())
}

/// Word sending `Ω_s` to a nonzero multiple of `Ω_ℓ` (`Ω_0 = |0⟩`):
/// `G⁻(ℓ+3/2)⋯G⁻(s+½)` when `s > ℓ`, `G⁺(-ℓ-½)⋯G⁺(-s-3/2)` when `s < ℓ`.
pub fn ladder_word(from: i64, to: i64) -> OperatorWord {
    use std::cmp::Ordering::*;
    match from.cmp(&to) {
        Equal => OperatorWord::default(),
        Greater => OperatorWord::new(
            (to + 1..=from)
                .map(|k| Letter::gminus(HalfOdd::plus_half(k)))
                .collect(),
        ),
        Less => OperatorWord::new(
            (from + 1..=to)
                .rev()
                .map(|k| Letter::gplus(HalfOdd::plus_half(-k - 1)))
                .collect(),
        ),
    }
}

impl<S: Scalar> OperatorFamily<FermionState, S> for AModule<S> {
    type Op = Letter;

    fn candidates(&self, v: &FermionVec<S>, bound2: i64) -> Vec<Letter> {
        let (Some(min_w2), Some(max_w2)) = (
            v.keys().map(FermionState::weight2).min(),
            v.keys().map(FermionState::weight2).max(),
        ) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        // G⁺ creation at i ≤ -1 adds weight ½ - i; annihilation needs i - ½ ≤ max λ.
        let plus_lo = (1 + min_w2 - bound2).div_euclid(2);
        let plus_hi = (max_w2 + 1) / 2;
        for i in plus_lo..=plus_hi {
            if i != 0 {
                out.push(Letter::gplus(HalfOdd::minus_half(i)));
            }
        }
        // every G⁻ term below minus_lo creates more weight than the bound allows
        let minus_lo = -(bound2 + 1) / 2 - self.chi.tail_depth() - 2;
        let minus_hi = (max_w2 + 1) / 2 + self.chi.pole_order() + 1;
        for i in minus_lo..=minus_hi {
            out.push(Letter::gminus(HalfOdd::minus_half(i)));
        }
        out
    }

    fn apply(&self, op: &Letter, v: &FermionVec<S>) -> FermionVec<S> {
        self.apply_letter(*op, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn st(l: &[i64], m: &[i64]) -> FermionState {
        FermionState::from_doubled(l, m).unwrap()
    }

    fn vac() -> FermionVec<Q> {
        FermionVec::basis(FermionState::vacuum())
    }

    fn module(pairs: &[(i64, Q)]) -> AModule<Q> {
        AModule::new(ChiSeries::from_coeffs(pairs.iter().cloned()))
    }

    #[test]
    fn gplus_examples() {
        let m = module(&[(0, q(2, 1))]);
        assert_eq!(m.apply_gplus(-1, &vac()), FermionVec::basis(omega(1).unwrap()));
        assert!(m.apply_gplus(0, &FermionVec::basis(st(&[1], &[3]))).is_zero());
        assert!(m.apply_gplus(1, &FermionVec::basis(omega(1).unwrap())).is_zero());
    }

    #[test]
    fn gminus_examples() {
        let om1 = FermionVec::basis(omega(1).unwrap());
        let m = module(&[(0, q(2, 1))]);
        assert!(m.apply_gminus(1, &om1).is_zero());
        let c = q(-4, 9);
        let m = module(&[(0, q(2, 1)), (-1, c.clone())]);
        assert_eq!(m.apply_gminus(1, &om1), vac().scaled(&c));
        assert!(m.apply_gminus(7, &om1).is_zero());
    }

    #[test]
    fn derived_scalars() {
        let m = module(&[(0, q(2, 1))]);
        assert_eq!(m.scalar_t(0), q(-1, 1));
        assert_eq!(m.scalar_s(0), q(-1, 2));
        assert_eq!(m.scalar_t(3), q(0, 1));
        let m = module(&[(1, q(5, 1))]);
        assert_eq!(m.scalar_t(1), q(-5, 2));
        assert_eq!(m.scalar_s(1), q(-5, 2));
    }

    #[test]
    fn anticommutator_examples() {
        let m = module(&[(0, q(2, 1))]);
        assert!(m.anticommutator_check(HalfOdd::plus_half(0), HalfOdd::minus_half(0), &vac()));
        let om1 = FermionVec::basis(omega(1).unwrap());
        let m2 = module(&[(0, q(3, 1)), (-1, q(1, 3)), (2, q(-2, 1))]);
        assert!(m2.anticommutator_check(HalfOdd::plus_half(1), HalfOdd::minus_half(-1), &om1));
        for (r, s) in [(1, -3), (3, 3), (-1, 5)] {
            let (r, s) = (HalfOdd::from_doubled(r).unwrap(), HalfOdd::from_doubled(s).unwrap());
            assert!(m2.same_parity_anticommutator(OpLabel::GPlus, r, s, &om1).is_zero());
            assert!(m2.same_parity_anticommutator(OpLabel::GMinus, r, s, &om1).is_zero());
        }
    }

    #[test]
    fn omega_shapes() {
        assert_eq!(omega(1).unwrap(), st(&[], &[3]));
        assert_eq!(omega(2).unwrap(), st(&[], &[5, 3]));
        assert!(omega(0).is_err());
        assert_eq!(omega(3).unwrap().weight(), q(15, 2));
        assert_eq!(omega(3).unwrap().charge(), 3);
    }

    #[test]
    fn extraction_examples() {
        let m = module(&[(0, q(2, 1))]);
        let ex = m.extract_omega(&FermionVec::basis(omega(3).unwrap())).unwrap();
        assert!(ex.word.is_empty());
        assert_eq!(ex.target, Target::Omega(3));
        assert_eq!(ex.scalar, q(1, 1));

        let ex = m.extract_omega(&FermionVec::basis(st(&[1], &[]))).unwrap();
        assert_eq!(ex.word, OperatorWord::new(vec![Letter::gplus(HalfOdd::plus_half(0))]));
        assert_eq!(ex.target, Target::Vacuum);
        assert_eq!(ex.scalar, q(-1, 1));

        let v = FermionVec::from_terms([(st(&[1], &[3]), q(1, 1)), (omega(1).unwrap(), q(2, 1))]);
        let ex = m.extract_omega(&v).unwrap();
        assert_eq!(ex.target, Target::Omega(1));
        assert!(!ex.scalar.is_zero());

        assert!(m.extract_omega(&FermionVec::zero()).is_err());
        assert!(m.extract_omega(&FermionVec::basis(st(&[], &[1]))).is_err());
    }

    #[test]
    fn gminus_string_small() {
        let c = q(7, 5);
        let m = module(&[(0, q(2, 1)), (-1, c.clone())]);
        assert_eq!(m.gminus_string_on_omega(1).unwrap(), c);
        let (a, b) = (q(2, 3), q(-5, 1));
        let m = AModule::new(ChiSeries::with_ell(2, &[a.clone(), b.clone()]));
        assert_eq!(m.gminus_string_on_omega(2).unwrap(), a.clone() * a - b);
        let m = module(&[(0, q(2, 1))]);
        assert_eq!(m.gminus_string_on_omega(1).unwrap(), q(0, 1));
        assert!(m.gminus_string_on_omega(2).is_err());
        assert!(module(&[(0, q(1, 2))]).gminus_string_on_omega(1).is_err());
    }

    #[test]
    fn singular_vector_small() {
        let m = module(&[(0, q(2, 1))]);
        let w = m.singular_w(1).unwrap();
        assert_eq!(w, FermionVec::basis(omega(1).unwrap()));
        assert!(m.positive_mode_failures(&w, 3).is_empty());

        let m = AModule::new(ChiSeries::with_ell(2, &[q(1, 1), q(1, 1)]));
        let w = m.singular_w(2).unwrap();
        assert_eq!(w.coeff(&st(&[], &[5])), q(-1, 1));
        assert!(m.positive_mode_failures(&w, 5).is_empty());
    }

    #[test]
    fn ladder_words() {
        assert_eq!(ladder_word(3, 1).to_string(), "G-(5/2) G-(7/2)");
        assert_eq!(ladder_word(1, 3).to_string(), "G+(-7/2) G+(-5/2)");
        assert_eq!(ladder_word(2, 2).to_string(), "1");
        assert_eq!(vacuum_ladder_word(1).to_string(), "G-(-3/2) G-(-1/2)");
    }

    #[test]
    fn word_json() {
        let w = ladder_word(0, 1);
        assert_eq!(serde_json::to_string(&w).unwrap(), r#"[{"op":"G+","mode":"-3/2"}]"#);
        let back: OperatorWord = serde_json::from_str(r#"[{"op":"G-","mode":"5/2"}]"#).unwrap();
        assert_eq!(back, OperatorWord::new(vec![Letter::gminus(HalfOdd::plus_half(2))]));
    }
}
