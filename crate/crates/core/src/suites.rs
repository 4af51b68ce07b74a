//! Seeded, self-contained relation suites with JSON reports.
//!
//! Each suite runs a family of exact identity checks and records every
//! failure. Parallel work is collected in input order, so a report depends
//! only on the seed.

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{ladder_word, staircase, vacuum_ladder_word, AModule, OpLabel};
use crate::classify::expected_string;
use crate::fock::{
    apply_psi, character_coefficients, check_tilde, enumerate_basis_doubled, graded_dimension, FermionState,
    FermionVec, HalfOdd, Species,
};
use crate::scalar::{ChiSeries, Scalar};
use crate::schur::{factorial, schur_det, schur_rec};
use crate::weyl::{enumerate_weyl_basis, WakimotoModule, WeylVec};

type Q = BigRational;

/// Failure messages kept per report; the count is always exact.
const MAX_MESSAGES: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checked: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

impl SuiteReport {
    fn from_results(suite: &str, seed: u64, results: Vec<Option<String>>) -> Self {
        let checked = results.len();
        let failures: Vec<String> = results.into_iter().flatten().collect();
        SuiteReport {
            suite: suite.into(),
            seed,
            checked,
            failed: failures.len(),
            passed: failures.is_empty(),
            failures: failures.into_iter().take(MAX_MESSAGES).collect(),
        }
    }
}

fn q(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(msg)
}

/// Ten fixed series covering all classifier cases.
pub fn sample_chis() -> Vec<(String, ChiSeries<Q>)> {
    let c = |pairs: &[(i64, Q)]| ChiSeries::from_coeffs(pairs.iter().cloned());
    vec![
        ("1/z".into(), c(&[(0, q(1, 1))])),
        ("(1/2)/z".into(), c(&[(0, q(1, 2))])),
        ("z^-2".into(), c(&[(1, q(1, 1))])),
        ("3z^-3 + 1/z - 2/7".into(), c(&[(2, q(3, 1)), (0, q(1, 1)), (-1, q(-2, 7))])),
        ("2/z + 1".into(), c(&[(0, q(2, 1)), (-1, q(1, 1))])),
        ("3/z + z".into(), c(&[(0, q(3, 1)), (-2, q(1, 1))])),
        ("2/z".into(), c(&[(0, q(2, 1))])),
        ("3/z + 1 + z".into(), c(&[(0, q(3, 1)), (-1, q(1, 1)), (-2, q(1, 1))])),
        ("-3/z".into(), c(&[(0, q(-3, 1))])),
        ("-1/z + 2/3".into(), c(&[(0, q(-1, 1)), (-1, q(2, 3))])),
    ]
}

/// Uniform rational with numerator in `-6..=6` and denominator in `1..=5`.
pub fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    q(rng.gen_range(-6..=6), rng.gen_range(1..=5))
}

fn half_odds(max2: i64) -> Vec<HalfOdd> {
    (-max2..=max2)
        .filter(|d| d.rem_euclid(2) == 1)
        .map(|d| HalfOdd::from_doubled(d).expect("odd"))
        .collect()
}

/// `{Ψ⁺(r),Ψ⁻(s)} = δ_{r+s,0}` and `{Ψ^±,Ψ^±} = 0` on `F` and `F̃` basis
/// vectors of weight `≤ 5`, `|r|, |s| ≤ 9/2`.
pub fn clifford_suite() -> SuiteReport {
    let modes = half_odds(9);
    let mut basis = enumerate_basis_doubled(10, true);
    basis.extend(enumerate_basis_doubled(10, false));
    let anti = |a: Species, r: HalfOdd, b: Species, s: HalfOdd, v: &FermionVec<Q>| {
        apply_psi(a, r, &apply_psi(b, s, v)) + apply_psi(b, s, &apply_psi(a, r, v))
    };
    let results: Vec<Option<String>> = basis
        .par_iter()
        .flat_map_iter(|st| {
            let v = FermionVec::basis(st.clone());
            let mut out = Vec::new();
            for &r in &modes {
                for &s in &modes {
                    let delta = r.doubled() + s.doubled() == 0;
                    let expected = if delta { v.clone() } else { FermionVec::zero() };
                    let got = anti(Species::Plus, r, Species::Minus, s, &v);
                    out.push(check(got == expected, || format!("{{Psi+({r}),Psi-({s})}} on {st}: {got}")));
                    for sp in [Species::Plus, Species::Minus] {
                        let got = anti(sp, r, sp, s, &v);
                        out.push(check(got.is_zero(), || format!("{{{sp:?}({r}),{sp:?}({s})}} on {st}: {got}")));
                    }
                }
            }
            out
        })
        .collect();
    SuiteReport::from_results("clifford", 0, results)
}

/// Basis counts against the product formula for weight `≤ 6`, and
/// `Ψ⁻(½)` killing `F̃`.
pub fn basis_suite() -> SuiteReport {
    let mut results = Vec::new();
    for ambient in [true, false] {
        let counts = graded_dimension(12, ambient);
        let product = character_coefficients(12, ambient);
        results.push(check(counts == product, || {
            format!("ambient={ambient}: enumerated {counts:?} vs product {product:?}")
        }));
    }
    for st in enumerate_basis_doubled(12, false) {
        let v = FermionVec::<Q>::basis(st.clone());
        results.push(check(check_tilde(&v), || format!("Psi-(1/2) does not kill {st}")));
    }
    SuiteReport::from_results("basis", 0, results)
}

/// `{G⁺(r),G⁻(s)}` and same-parity anticommutators for `|r|,|s| ≤ 7/2` on
/// `F̃` basis vectors of weight `≤ 4`, for every sample `χ`; plus the
/// scalars `S(n)`, `T(n)` solved from two anticommutators on the vacuum.
pub fn a_relation_suite() -> SuiteReport {
    let modes = half_odds(7);
    let basis = enumerate_basis_doubled(8, false);
    let mut results = Vec::new();
    for (name, chi) in sample_chis() {
        let module = AModule::new(chi);
        let per_state: Vec<Option<String>> = basis
            .par_iter()
            .flat_map_iter(|st| {
                let v = FermionVec::basis(st.clone());
                let mut out = Vec::new();
                for &r in &modes {
                    for &s in &modes {
                        let (lhs, rhs) = module.anticommutator(r, s, &v);
                        out.push(check(lhs == rhs, || {
                            format!("chi={name}: {{G+({r}),G-({s})}} on {st}: {lhs} vs {rhs}")
                        }));
                        for op in [OpLabel::GPlus, OpLabel::GMinus] {
                            let z = module.same_parity_anticommutator(op, r, s, &v);
                            out.push(check(z.is_zero(), || format!("chi={name}: {{{op:?}({r}),{op:?}({s})}} on {st}")));
                        }
                    }
                }
                out
            })
            .collect();
        results.extend(per_state);
        for n in -4..=4 {
            let (s, t) = solve_scalars(&module, n);
            results.push(check(s == module.scalar_s(n) && t == module.scalar_t(n), || {
                format!("chi={name}, n={n}: solved S={s}, T={t}")
            }));
        }
    }
    SuiteReport::from_results("a_relations", 0, results)
}

/// `(S(n), T(n))` from `{G⁺(½),G⁻(n-½)}𝟙` and `{G⁺(3/2),G⁻(n-3/2)}𝟙`.
pub fn solve_scalars(module: &AModule<Q>, n: i64) -> (Q, Q) {
    let vac = FermionVec::basis(FermionState::vacuum());
    let value = |r2: i64| {
        let r = HalfOdd::from_doubled(r2).expect("odd");
        let s = HalfOdd::from_doubled(2 * n - r2).expect("odd");
        let (lhs, _) = module.anticommutator(r, s, &vac);
        let mut c = lhs.coeff(&FermionState::vacuum());
        if n == 0 {
            // remove the central term -(r² - ¼)
            c = c + q(r2 * r2 - 1, 4);
        }
        c
    };
    // value(r) = 2S + (2r - n)T
    let (a, b) = (value(1), value(3));
    let t = (b - a.clone()) / q(2, 1);
    let s = (a - q(1 - n, 1) * t.clone()) / q(2, 1);
    (s, t)
}

/// The `G⁻` string on `Ω_ℓ` against `(-1)^ℓ ℓ! S_ℓ(-χ)` for `ℓ = 1..=6` and 50
/// random tails each; the Schur recurrence against the determinant for
/// `r ≤ 12`.
pub fn string_suite(seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jobs = Vec::new();
    for ell in 1..=6i64 {
        for _ in 0..50 {
            let tail: Vec<Q> = (0..ell + 2).map(|_| random_rational(&mut rng)).collect();
            jobs.push((ell, ChiSeries::with_ell(ell, &tail)));
        }
    }
    let mut results: Vec<Option<String>> = jobs
        .par_iter()
        .map(|(ell, chi)| {
            let module = AModule::new(chi.clone());
            let expected = expected_string(*ell, chi);
            match module.gminus_string_on_omega(*ell) {
                Ok(v) => check(v == expected, || format!("ell={ell}, chi={chi}: {v} vs {expected}")),
                Err(e) => Some(format!("ell={ell}, chi={chi}: {e}")),
            }
        })
        .collect();
    for r in 0..=12usize {
        for _ in 0..5 {
            let xs: Vec<Q> = (0..r).map(|_| random_rational(&mut rng)).collect();
            let (a, b) = (schur_rec(r, &xs), schur_det(r, &xs));
            results.push(check(a == b, || format!("S_{r}: recurrence {a} vs determinant {b}")));
        }
    }
    SuiteReport::from_results("gminus_string", seed, results)
}

/// A random nonzero `F̃` vector with up to six terms of weight `≤ 5`.
pub fn random_tilde_vector(rng: &mut ChaCha8Rng, basis: &[FermionState]) -> FermionVec<Q> {
    loop {
        let terms = rng.gen_range(1..=6);
        let mut v = FermionVec::zero();
        for _ in 0..terms {
            let st = basis[rng.gen_range(0..basis.len())].clone();
            v.add_term(st, random_rational(rng));
        }
        if !v.is_zero() {
            return v;
        }
    }
}

/// Extraction on 200 random nonzero `F̃` vectors of weight `≤ 5`.
pub fn extraction_suite(seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = enumerate_basis_doubled(10, false);
    let vectors: Vec<FermionVec<Q>> = (0..200).map(|_| random_tilde_vector(&mut rng, &basis)).collect();
    let chis = sample_chis();
    let results = vectors
        .par_iter()
        .enumerate()
        .map(|(idx, v)| {
            let module = AModule::new(chis[idx % chis.len()].1.clone());
            match module.extract_omega(v) {
                Ok(ex) => {
                    let image = module.apply_word(&ex.word, v);
                    let expected = FermionVec::term(ex.target.state(), ex.scalar.clone());
                    check(!ex.scalar.is_zero() && image == expected, || {
                        format!("{v}: word {} gave {image}", ex.word)
                    })
                }
                Err(e) => Some(format!("{v}: {e}")),
            }
        })
        .collect();
    SuiteReport::from_results("extraction", seed, results)
}

/// Cyclicity ladder constants for `ℓ ≤ 3`, `N ≤ 4`, and the staircase
/// ladders between `Ω_s` and `Ω_ℓ` for `s, ℓ ≤ 4`; tails are random.
pub fn ladder_suite(seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();
    for ell in 0..=3i64 {
        let tail: Vec<Q> = (0..4).map(|_| random_rational(&mut rng)).collect();
        let module = AModule::new(ChiSeries::with_ell(ell, &tail));
        for top in 0..=4i64 {
            let got = module.apply_word(&vacuum_ladder_word(top), &FermionVec::basis(FermionState::vacuum()));
            let lambda = (0..=top).rev().map(HalfOdd::plus_half).collect();
            let target = FermionState::new(lambda, Vec::new()).expect("distinct parts");
            let c: i64 = (0..=top).map(|i| ell + 1 + i).product();
            let expected = FermionVec::term(target, Q::from_i64(c));
            results.push(check(got == expected, || format!("ell={ell}, N={top}: {got}")));
        }
    }
    for ell in 0..=4i64 {
        let tail: Vec<Q> = (0..4).map(|_| random_rational(&mut rng)).collect();
        let module = AModule::new(ChiSeries::with_ell(ell, &tail));
        for s in 0..=4i64 {
            if s == ell {
                continue;
            }
            let start = FermionVec::basis(staircase(s).expect("s ≥ 0"));
            let got = module.apply_word(&ladder_word(s, ell), &start);
            let c = if s > ell {
                let f: Q = factorial(usize::try_from(s - ell).expect("positive"));
                if (s - ell) % 2 == 0 {
                    f
                } else {
                    -f
                }
            } else {
                factorial::<Q>(ell as usize) / factorial::<Q>(s as usize)
            };
            let expected = FermionVec::term(staircase(ell).expect("ℓ ≥ 0"), c);
            results.push(check(got == expected, || format!("s={s} -> ell={ell}: {got}")));
        }
    }
    SuiteReport::from_results("ladders", seed, results)
}

/// `ŝl₂` brackets at level −2 for `|m|,|n| ≤ 3` on Weyl monomials of weight
/// `≤ 4` and `|charge| ≤ 3`, for every sample `χ`.
pub fn weyl_relation_suite() -> SuiteReport {
    let basis = enumerate_weyl_basis(4, (-3, 3));
    let mut results = Vec::new();
    for (name, chi) in sample_chis() {
        let module = WakimotoModule::new(chi);
        let per_state: Vec<Option<String>> = basis
            .par_iter()
            .flat_map_iter(|st| {
                let v = WeylVec::basis(st.clone());
                let modes: Vec<i64> = (-3..=3).collect();
                let failures = module.relation_sweep(&modes, &modes, &v);
                // one result per (m, n, bracket) triple
                let mut out: Vec<Option<String>> = vec![None; modes.len() * modes.len() * 6 - failures.len()];
                out.extend(failures.into_iter().map(|f| Some(format!("chi={name}: {f}"))));
                out
            })
            .collect();
        results.extend(per_state);
    }
    SuiteReport::from_results("weyl_relations", 0, results)
}

pub const SUITE_NAMES: [&str; 7] = [
    "clifford",
    "basis",
    "a_relations",
    "gminus_string",
    "extraction",
    "ladders",
    "weyl_relations",
];

/// Runs one suite by name.
pub fn run_suite(name: &str, seed: u64) -> Option<SuiteReport> {
    Some(match name {
        "clifford" => clifford_suite(),
        "basis" => basis_suite(),
        "a_relations" => a_relation_suite(),
        "gminus_string" => string_suite(seed),
        "extraction" => extraction_suite(seed),
        "ladders" => ladder_suite(seed),
        "weyl_relations" => weyl_relation_suite(),
        _ => return None,
    })
}
