//! Irreducibility decision for `F̃_χ` (equivalently `W_{-χ}`) with replayable
//! certificates.
//!
//! With `p` the pole order of `χ`:
//!
//! * `p ≥ 1`: irreducible (case `i`);
//! * `χ₀ = 1` or `χ₀ ∉ ℤ`: irreducible (case `ii`);
//! * `ℓ = χ₀ - 1 ≥ 1`: irreducible iff `S_ℓ(-χ) ≠ 0` (case `iii`), otherwise
//!   `U(𝒜)·Ω_ℓ` is a proper submodule (case `schur_zero`);
//! * `ℓ ≤ -1`: `U(𝒜)·𝟙` is a proper submodule missing `Ψ⁻(-q-½)𝟙`,
//!   `q = -ℓ-1` (case `neg_ell`).

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{omega, AModule};
use crate::fock::{enumerate_basis_doubled, FermionState, FermionVec, HalfOdd};
use crate::scalar::{ChiSeries, Scalar};
use crate::schur::{factorial, schur_at_minus_chi};
use crate::span::{self, ClosureConfig};

type Q = BigRational;

/// Largest `ℓ` for which the `G⁻` string on `Ω_ℓ` is evaluated eagerly.
pub const STRING_LIMIT: i64 = 12;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Irreducible,
    Reducible,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Case {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    Ii,
    #[serde(rename = "iii")]
    Iii,
    #[serde(rename = "neg_ell")]
    NegEll,
    #[serde(rename = "schur_zero")]
    SchurZero,
}

impl Case {
    pub fn status(self) -> Status {
        match self {
            Case::I | Case::Ii | Case::Iii => Status::Irreducible,
            Case::NegEll | Case::SchurZero => Status::Reducible,
        }
    }
}

fn q_str(x: &Q) -> String {
    x.to_external()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CaseData {
    Pole { p: i64, chi_p: String },
    Residue { chi_0: String },
    Schur { ell: i64, schur: String },
    Negative { ell: i64, q: i64 },
    Ell { ell: i64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    #[serde(rename = "verdict")]
    pub status: Status,
    pub case: Case,
    pub data: CaseData,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Top pole coefficient `χ_p ≠ 0`.
    PoleCoefficient { p: i64, chi_p: String },
    /// `χ₀ = 1` or non-integral.
    Residue { chi_0: String },
    /// `G⁻(½)⋯G⁻(ℓ-½)Ω_ℓ = (-1)^ℓ ℓ! S_ℓ(-χ)𝟙 ≠ 0`; the string is left
    /// `None` above [`STRING_LIMIT`].
    SchurNonzero {
        ell: i64,
        schur: String,
        expected_string: String,
        gminus_string: Option<String>,
    },
    /// `S_ℓ(-χ) = 0`: `w = G⁻(3/2)⋯G⁻(ℓ-½)Ω_ℓ` is killed by every `G^±(n-½)`,
    /// `1 ≤ n ≤ annihilation_range`, and by all higher modes for weight
    /// reasons.
    SingularVector {
        ell: i64,
        schur: String,
        omega: String,
        w: Option<FermionVec<Q>>,
        annihilation_range: i64,
    },
    /// `Ψ⁻(-q-½)𝟙` is not reached from `𝟙`; `excluded_reached` is `None`
    /// when the vector lies above the cutoff.
    ExcludedVector {
        ell: i64,
        q: i64,
        excluded: String,
        cfg: ClosureConfig,
        excluded_reached: Option<bool>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    #[serde(flatten)]
    pub verdict: Verdict,
    #[serde(flatten)]
    pub flat: CaseData,
    pub certificate: Certificate,
}

fn decide(chi: &ChiSeries<Q>) -> Verdict {
    let p = chi.pole_order();
    let chi0 = chi.coeff(0);
    let (case, data) = if p >= 1 {
        (Case::I, CaseData::Pole { p, chi_p: q_str(&chi.coeff(p)) })
    } else {
        match chi0.to_i64_exact() {
            None | Some(1) => (Case::Ii, CaseData::Residue { chi_0: q_str(&chi0) }),
            Some(c) if c >= 2 => {
                let ell = c - 1;
                let s = schur_at_minus_chi(ell as usize, chi);
                if s.is_zero() {
                    (Case::SchurZero, CaseData::Ell { ell })
                } else {
                    (Case::Iii, CaseData::Schur { ell, schur: q_str(&s) })
                }
            }
            Some(c) => (Case::NegEll, CaseData::Negative { ell: c - 1, q: -c }),
        }
    };
    Verdict {
        status: case.status(),
        case,
        data,
    }
}

/// `(-1)^ℓ ℓ! S_ℓ(-χ)`.
pub fn expected_string(ell: i64, chi: &ChiSeries<Q>) -> Q {
    let s = schur_at_minus_chi(ell as usize, chi) * factorial::<Q>(ell as usize);
    if ell % 2 == 0 {
        s
    } else {
        -s
    }
}

/// The vector `Ψ⁻(-q-½)𝟙`.
pub fn excluded_state(q: i64) -> FermionState {
    FermionState::new(vec![HalfOdd::plus_half(q)], Vec::new()).expect("single part")
}

/// Range of `n` beyond which `G^±(n-½)` kills `Ω_ℓ`-weight vectors for
/// degree reasons alone.
pub fn annihilation_range(ell: i64, chi: &ChiSeries<Q>) -> i64 {
    ell + chi.tail_depth() + 2
}

pub fn classify(chi: &ChiSeries<Q>) -> Classification {
    classify_with(chi, &ClosureConfig::default())
}

/// Classification whose neg_ell exclusion evidence is computed at `cfg`.
pub fn classify_with(chi: &ChiSeries<Q>, cfg: &ClosureConfig) -> Classification {
    let verdict = decide(chi);
    let module = AModule::new(chi.clone());
    let certificate = match &verdict.data {
        CaseData::Pole { p, chi_p } => Certificate::PoleCoefficient {
            p: *p,
            chi_p: chi_p.clone(),
        },
        CaseData::Residue { chi_0 } => Certificate::Residue { chi_0: chi_0.clone() },
        CaseData::Schur { ell, schur } => Certificate::SchurNonzero {
            ell: *ell,
            schur: schur.clone(),
            expected_string: q_str(&expected_string(*ell, chi)),
            gminus_string: (*ell <= STRING_LIMIT)
                .then(|| module.gminus_string_on_omega(*ell).ok())
                .flatten()
                .map(|v| q_str(&v)),
        },
        CaseData::Ell { ell } => Certificate::SingularVector {
            ell: *ell,
            schur: "0".into(),
            omega: omega(*ell).expect("ℓ ≥ 1").to_string(),
            w: (*ell <= STRING_LIMIT)
                .then(|| module.singular_w(*ell).ok())
                .flatten(),
            annihilation_range: annihilation_range(*ell, chi),
        },
        CaseData::Negative { ell, q } => {
            let excluded = excluded_state(*q);
            let reached = (excluded.weight2() <= cfg.cutoff2()).then(|| {
                span::reaches(
                    &FermionVec::basis(FermionState::vacuum()),
                    &FermionVec::basis(excluded.clone()),
                    &module,
                    cfg,
                )
            });
            Certificate::ExcludedVector {
                ell: *ell,
                q: *q,
                excluded: excluded.to_string(),
                cfg: cfg.clone(),
                excluded_reached: reached,
            }
        }
    };
    Classification {
        flat: verdict.data.clone(),
        verdict,
        certificate,
    }
}

impl Classification {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("classification serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub verdict: Status,
    pub case: Case,
    pub cfg: ClosureConfig,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// F̃ basis vectors with doubled weight `≤ max_weight2` inside the charge
/// window whose truncated closure misses the vacuum.
pub fn non_cyclic_vectors(chi: &ChiSeries<Q>, max_weight2: i64, cfg: &ClosureConfig) -> Vec<FermionState> {
    let module = AModule::new(chi.clone());
    let vacuum = FermionState::vacuum();
    let basis: Vec<FermionState> = enumerate_basis_doubled(max_weight2, false)
        .into_iter()
        .filter(|s| cfg.in_window(s.charge()))
        .collect();
    let flags: Vec<bool> = basis
        .par_iter()
        .map(|s| span::cyclic_probe(&FermionVec::basis(s.clone()), &vacuum, &module, cfg))
        .collect();
    basis
        .into_iter()
        .zip(flags)
        .filter(|(_, ok)| !ok)
        .map(|(s, _)| s)
        .collect()
}

fn singular_checks(module: &AModule<Q>, ell: i64, cfg: &ClosureConfig) -> Vec<Check> {
    let chi = module.chi();
    let mut checks = Vec::new();
    match module.gminus_string_on_omega(ell) {
        Ok(v) => checks.push(Check::new("gminus_string_zero", v.is_zero(), format!("value {}", q_str(&v)))),
        Err(e) => checks.push(Check::new("gminus_string_zero", false, e.to_string())),
    }
    match module.singular_w(ell) {
        Ok(w) => {
            let range = annihilation_range(ell, chi);
            let failures = module.positive_mode_failures(&w, range);
            let detail = if failures.is_empty() {
                format!("w = {w}; G±(n-1/2) w = 0 for n = 1..{range}")
            } else {
                let names: Vec<String> = failures.iter().map(ToString::to_string).collect();
                format!("w = {w}; nonzero under {}", names.join(", "))
            };
            checks.push(Check::new("singular_w_annihilated", failures.is_empty() && !w.is_zero(), detail));
        }
        Err(e) => checks.push(Check::new("singular_w_annihilated", false, e.to_string())),
    }
    let om = FermionVec::basis(omega(ell).expect("ℓ ≥ 1"));
    let vac = FermionVec::basis(FermionState::vacuum());
    let reached = span::reaches(&om, &vac, module, cfg);
    checks.push(Check::new(
        "vacuum_not_in_omega_closure",
        !reached,
        if reached {
            "|0> reached from Omega_ell".to_string()
        } else {
            "|0> not reached from Omega_ell within cfg".to_string()
        },
    ));
    checks
}

fn excluded_checks(module: &AModule<Q>, q: i64, cfg: &ClosureConfig) -> Vec<Check> {
    let excluded = excluded_state(q);
    if excluded.weight2() > cfg.cutoff2() {
        return vec![Check::new(
            "excluded_not_in_vacuum_closure",
            false,
            format!("{excluded} lies above the weight cutoff {}", cfg.weight_cutoff),
        )];
    }
    let vac = FermionVec::basis(FermionState::vacuum());
    let span = span::closure(std::slice::from_ref(&vac), module, cfg);
    let member = span.contains(&FermionVec::basis(excluded.clone()));
    let truncated = enumerate_basis_doubled(cfg.cutoff2(), false)
        .into_iter()
        .filter(|s| cfg.in_window(s.charge()))
        .count();
    vec![
        Check::new(
            "excluded_not_in_vacuum_closure",
            !member,
            format!("{excluded} {} closure of |0>", if member { "in" } else { "not in" }),
        ),
        Check::new(
            "vacuum_closure_proper",
            span.dimension() < truncated,
            format!("closure dimension {} of {truncated}", span.dimension()),
        ),
    ]
}

/// Replays a classification at `cfg`. Failed checks are reported, never
/// raised.
pub fn verify_certificate(chi: &ChiSeries<Q>, claimed: &Classification, cfg: &ClosureConfig) -> Report {
    let module = AModule::new(chi.clone());
    let fresh = decide(chi);
    let mut checks = vec![Check::new(
        "verdict_matches",
        fresh == claimed.verdict,
        format!("recomputed case {:?}", fresh.case),
    )];
    match (&claimed.verdict.status, &claimed.certificate) {
        (Status::Irreducible, cert) => {
            if let Certificate::SchurNonzero { ell, .. } = cert {
                let expected = expected_string(*ell, chi);
                match module.gminus_string_on_omega(*ell) {
                    Ok(v) => checks.push(Check::new(
                        "gminus_string_matches",
                        v == expected && !v.is_zero(),
                        format!("value {}, expected {}", q_str(&v), q_str(&expected)),
                    )),
                    Err(e) => checks.push(Check::new("gminus_string_matches", false, e.to_string())),
                }
            }
            let bad = non_cyclic_vectors(chi, cfg.cutoff2(), cfg);
            let detail = match bad.first() {
                None => "every basis vector within cfg reaches |0>".to_string(),
                Some(s) => format!("{} non-cyclic, first {s}", bad.len()),
            };
            checks.push(Check::new("all_cyclic", bad.is_empty(), detail));
        }
        (Status::Reducible, Certificate::SingularVector { ell, .. }) => {
            checks.extend(singular_checks(&module, *ell, cfg));
        }
        (Status::Reducible, Certificate::ExcludedVector { q, .. }) => {
            checks.extend(excluded_checks(&module, *q, cfg));
        }
        (Status::Reducible, _) => {
            checks.push(Check::new("certificate_shape", false, "reducible verdict without a witness"));
        }
    }
    Report {
        verdict: claimed.verdict.status,
        case: claimed.verdict.case,
        cfg: cfg.clone(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn chi(pairs: &[(i64, Q)]) -> ChiSeries<Q> {
        ChiSeries::from_coeffs(pairs.iter().cloned())
    }

    #[test]
    fn case_table() {
        let c = classify(&chi(&[(0, q(2, 1))]));
        assert_eq!(c.verdict.case, Case::SchurZero);
        assert_eq!(c.verdict.data, CaseData::Ell { ell: 1 });

        let c = classify(&chi(&[(0, q(2, 1)), (-1, q(5, 1))]));
        assert_eq!(c.verdict.case, Case::Iii);
        assert_eq!(c.verdict.data, CaseData::Schur { ell: 1, schur: "-5".into() });

        assert_eq!(classify(&chi(&[(0, q(1, 1))])).verdict.case, Case::Ii);
        assert_eq!(classify(&chi(&[(0, q(1, 2))])).verdict.case, Case::Ii);
        let c = classify(&chi(&[(1, q(1, 1))]));
        assert_eq!(c.verdict.data, CaseData::Pole { p: 1, chi_p: "1".into() });

        let c = classify(&chi(&[(0, q(-3, 1))]));
        assert_eq!(c.verdict.case, Case::NegEll);
        assert_eq!(c.verdict.data, CaseData::Negative { ell: -4, q: 3 });
        assert_eq!(excluded_state(3).to_string(), "Psi-(-7/2) |0>");

        let c = classify(&chi(&[(0, q(3, 1)), (-1, q(1, 1)), (-2, q(1, 1))]));
        assert_eq!(c.verdict.case, Case::SchurZero);
    }

    #[test]
    fn zero_and_negative_integers() {
        // χ₀ = 0 gives ℓ = -1, q = 0
        let c = classify(&ChiSeries::zero());
        assert_eq!(c.verdict.data, CaseData::Negative { ell: -1, q: 0 });
        assert_eq!(c.verdict.status, Status::Reducible);
    }

    #[test]
    fn json_shape() {
        let c = classify(&chi(&[(0, q(2, 1))]));
        let v: serde_json::Value = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(v["verdict"], "reducible");
        assert_eq!(v["case"], "schur_zero");
        assert_eq!(v["ell"], 1);
        assert_eq!(v["data"]["ell"], 1);
        assert_eq!(v["certificate"]["kind"], "singular_vector");
    }

    #[test]
    fn singular_certificate_verifies() {
        let x = chi(&[(0, q(2, 1))]);
        let cfg = ClosureConfig::from_parts((3, 1), (-3, 3), (2, 1));
        let report = verify_certificate(&x, &classify(&x), &cfg);
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn tampered_verdict_is_reported() {
        let x = chi(&[(0, q(2, 1))]);
        let mut c = classify(&x);
        c.verdict.status = Status::Irreducible;
        c.verdict.case = Case::Iii;
        let cfg = ClosureConfig::from_parts((3, 2), (-3, 3), (1, 1));
        let report = verify_certificate(&x, &c, &cfg);
        assert!(!report.passed);
        assert!(!report.checks[0].passed);
    }
}
