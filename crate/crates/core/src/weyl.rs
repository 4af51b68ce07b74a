//! The Weyl (βγ) Fock space and the critical-level Wakimoto fields on it.
//!
//! Modes satisfy `[a(n), a*(m)] = δ_{n+m,0}` with `a(z) = Σ a(n) z^{-n-1}` and
//! `a*(z) = Σ a*(n) z^{-n}`. The vacuum is killed by `a(n)`, `n ≥ 0`, and by
//! `a*(n)`, `n ≥ 1`. Expanding the fields in `z^{-n-1}` gives
//!
//! ```text
//! e(n) = a(n)
//! h(n) = -2 Σ_m :a*(m) a(n-m): - χ_n
//! f(n) = -Σ_{m₁+m₂+k=n} :a*(m₁) a*(m₂) a(k): + 2n a*(n) - Σ_j χ_j a*(n-j)
//! ```
//!
//! Normal ordering moves creation modes to the left. On a fixed monomial the
//! sums are finite: every creation mode adds non-negative weight and the
//! result has weight `weight - n`, so a creation `a*(m)` inside a term has
//! `-m ≤ weight - n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Display};

use rayon::prelude::*;
use serde::Serialize;

use crate::scalar::{ChiSeries, Scalar};
use crate::span::{self, ClosureConfig, GradedKey, OperatorFamily};
use crate::sparse::SparseVec;

/// Monomial `a(-n₁)⋯a(-n_r) a*(-m₁)⋯a*(-m_s)|0⟩` with `nᵢ ≥ 1`, `mⱼ ≥ 0`,
/// both lists stored in decreasing order. Ordered by weight, then charge,
/// then the mode lists.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct WeylState {
    weight: i64,
    charge: i64,
    a_modes: Vec<i64>,
    astar_modes: Vec<i64>,
}

pub type WeylVec<S> = SparseVec<WeylState, S>;

impl WeylState {
    pub fn vacuum() -> Self {
        Self::default()
    }

    /// Builds a monomial from its creation indices in any order. Returns
    /// `None` on an `a` index below 1 or an `a*` index below 0.
    pub fn new(mut a_modes: Vec<i64>, mut astar_modes: Vec<i64>) -> Option<Self> {
        if a_modes.iter().any(|n| *n < 1) || astar_modes.iter().any(|n| *n < 0) {
            return None;
        }
        a_modes.sort_unstable_by(|x, y| y.cmp(x));
        astar_modes.sort_unstable_by(|x, y| y.cmp(x));
        let weight = a_modes.iter().sum::<i64>() + astar_modes.iter().sum::<i64>();
        let charge = astar_modes.len() as i64 - a_modes.len() as i64;
        Some(WeylState {
            weight,
            charge,
            a_modes,
            astar_modes,
        })
    }

    pub fn a_modes(&self) -> &[i64] {
        &self.a_modes
    }

    pub fn astar_modes(&self) -> &[i64] {
        &self.astar_modes
    }

    pub fn is_vacuum(&self) -> bool {
        self.a_modes.is_empty() && self.astar_modes.is_empty()
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn charge(&self) -> i64 {
        self.charge
    }

    fn multiplicity(list: &[i64], n: i64) -> usize {
        list.iter().filter(|x| **x == n).count()
    }

    fn insert_sorted(list: &mut Vec<i64>, n: i64) {
        let pos = list.partition_point(|x| *x > n);
        list.insert(pos, n);
    }

    fn remove_one(list: &mut Vec<i64>, n: i64) {
        let pos = list.iter().position(|x| *x == n).expect("mode present");
        list.remove(pos);
    }

}

impl Display for WeylState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.a_modes {
            write!(f, "a(-{n}) ")?;
        }
        for m in &self.astar_modes {
            if *m == 0 {
                write!(f, "a*(0) ")?;
            } else {
                write!(f, "a*(-{m}) ")?;
            }
        }
        write!(f, "|0>")
    }
}

impl GradedKey for WeylState {
    fn weight2(&self) -> i64 {
        2 * self.weight()
    }

    fn charge(&self) -> i64 {
        WeylState::charge(self)
    }
}

pub fn weyl_weight(s: &WeylState) -> i64 {
    s.weight()
}

pub fn weyl_charge(s: &WeylState) -> i64 {
    s.charge()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Boson {
    A,
    AStar,
}

impl Boson {
    fn creates(self, n: i64) -> bool {
        match self {
            Boson::A => n <= -1,
            Boson::AStar => n <= 0,
        }
    }
}

/// One mode operator applied in place; returns the coefficient, or `None`
/// (leaving `s` untouched) when the image vanishes.
fn mode_in_place(kind: Boson, n: i64, s: &mut WeylState) -> Option<i64> {
    let coeff = match (kind, kind.creates(n)) {
        (Boson::A, true) => {
            WeylState::insert_sorted(&mut s.a_modes, -n);
            1
        }
        (Boson::AStar, true) => {
            WeylState::insert_sorted(&mut s.astar_modes, -n);
            1
        }
        // a(n) a*(-n)^k = k a*(-n)^(k-1) + …
        (Boson::A, false) => {
            let k = WeylState::multiplicity(&s.astar_modes, n);
            if k == 0 {
                return None;
            }
            WeylState::remove_one(&mut s.astar_modes, n);
            k as i64
        }
        // [a*(n), a(-n)] = -1
        (Boson::AStar, false) => {
            let k = WeylState::multiplicity(&s.a_modes, n);
            if k == 0 {
                return None;
            }
            WeylState::remove_one(&mut s.a_modes, n);
            -(k as i64)
        }
    };
    s.weight -= n;
    s.charge += match kind {
        Boson::A => -1,
        Boson::AStar => 1,
    };
    Some(coeff)
}

fn mode_on_state(kind: Boson, n: i64, s: &WeylState) -> Option<(i64, WeylState)> {
    let mut out = s.clone();
    mode_in_place(kind, n, &mut out).map(|c| (c, out))
}

/// Normally ordered product applied to a monomial: annihilation modes act
/// first, then creation modes. Modes within each group commute.
fn normal_product(ops: &[(Boson, i64)], s: &WeylState) -> Option<(i64, WeylState)> {
    // cheap rejection before cloning: every annihilator needs its partner
    for &(kind, n) in ops {
        if !kind.creates(n) {
            let present = match kind {
                Boson::A => s.astar_modes.contains(&n),
                Boson::AStar => s.a_modes.contains(&n),
            };
            if !present {
                return None;
            }
        }
    }
    let mut coeff = 1i64;
    let mut state = s.clone();
    let annihilators = ops.iter().filter(|(k, n)| !k.creates(*n));
    let creators = ops.iter().filter(|(k, n)| k.creates(*n));
    for &(kind, n) in annihilators.chain(creators) {
        coeff *= mode_in_place(kind, n, &mut state)?;
    }
    Some((coeff, state))
}

pub fn apply_a<S: Scalar>(n: i64, v: &WeylVec<S>) -> WeylVec<S> {
    v.map_terms(|s| mode_on_state(Boson::A, n, s).map(|(c, t)| (S::from_i64(c), t)))
}

pub fn apply_astar<S: Scalar>(n: i64, v: &WeylVec<S>) -> WeylVec<S> {
    v.map_terms(|s| mode_on_state(Boson::AStar, n, s).map(|(c, t)| (S::from_i64(c), t)))
}

/// Indices `m` for which `a*(m)` can occur in a nonzero term of a mode of
/// degree `n` acting on `s`.
fn astar_index_range(s: &WeylState, n: i64) -> BTreeSet<i64> {
    let budget = s.weight() - n;
    let mut out: BTreeSet<i64> = s.a_modes.iter().copied().collect();
    if budget >= 0 {
        out.extend(-budget..=0);
    }
    out
}

fn bump(acc: &mut BTreeMap<WeylState, i64>, hit: Option<(i64, WeylState)>, factor: i64) {
    if let Some((c, t)) = hit {
        *acc.entry(t).or_insert(0) += c * factor;
    }
}

/// Linear extension of a monomial map with integer coefficients. Integer
/// parts are summed per monomial before touching the scalar field.
fn integer_image<S: Scalar>(v: &WeylVec<S>, per_state: impl Fn(&WeylState, &mut BTreeMap<WeylState, i64>)) -> WeylVec<S> {
    let mut out = WeylVec::zero();
    for (s, c) in v.iter() {
        let mut acc = BTreeMap::new();
        per_state(s, &mut acc);
        for (t, k) in acc {
            if k != 0 {
                out.add_term(t, c.clone() * S::from_i64(k));
            }
        }
    }
    out
}

/// The fields `e, h, f` of `W_{-χ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct WakimotoModule<S> {
    chi: ChiSeries<S>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Field {
    #[serde(rename = "e")]
    E,
    #[serde(rename = "h")]
    H,
    #[serde(rename = "f")]
    F,
}

impl Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Field::E => "e",
            Field::H => "h",
            Field::F => "f",
        };
        write!(f, "{name}")
    }
}

/// A field mode `x(n)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FieldMode {
    pub field: Field,
    pub n: i64,
}

impl Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.field, self.n)
    }
}

/// The level of the affine action.
pub const CRITICAL_LEVEL: i64 = -2;

impl<S: Scalar> WakimotoModule<S> {
    pub fn new(chi: ChiSeries<S>) -> Self {
        WakimotoModule { chi }
    }

    pub fn chi(&self) -> &ChiSeries<S> {
        &self.chi
    }

    pub fn apply_e(&self, n: i64, v: &WeylVec<S>) -> WeylVec<S> {
        apply_a(n, v)
    }

    pub fn apply_h(&self, n: i64, v: &WeylVec<S>) -> WeylVec<S> {
        let mut out = integer_image(v, |s, acc| {
            for m in astar_index_range(s, n) {
                bump(acc, normal_product(&[(Boson::AStar, m), (Boson::A, n - m)], s), -2);
            }
        });
        out.add_scaled(v, &-self.chi.coeff(n));
        out
    }

    pub fn apply_f(&self, n: i64, v: &WeylVec<S>) -> WeylVec<S> {
        let mut out = integer_image(v, |s, acc| {
            let range = astar_index_range(s, n);
            // a(k) either removes an a*(-k) present in s or creates weight -k ≤ budget
            let budget = s.weight() - n;
            let mut ks: BTreeSet<i64> = s.astar_modes.iter().copied().collect();
            ks.extend(-budget..=-1);
            for &k in &ks {
                for &m1 in &range {
                    let m2 = n - k - m1;
                    if m2 > 0 && !s.a_modes.contains(&m2) {
                        continue;
                    }
                    let ops = [(Boson::AStar, m1), (Boson::AStar, m2), (Boson::A, k)];
                    bump(acc, normal_product(&ops, s), -1);
                }
            }
            bump(acc, mode_on_state(Boson::AStar, n, s), 2 * n);
        });
        for (j, c) in self.chi.support() {
            out.add_scaled(&apply_astar(n - j, v), &-c.clone());
        }
        out
    }

    pub fn apply_mode(&self, op: FieldMode, v: &WeylVec<S>) -> WeylVec<S> {
        match op.field {
            Field::E => self.apply_e(op.n, v),
            Field::H => self.apply_h(op.n, v),
            Field::F => self.apply_f(op.n, v),
        }
    }

    /// Expected value of `[x(m), y(n)] v` for the six defining brackets.
    fn expected_bracket(&self, x: Field, m: i64, y: Field, n: i64, v: &WeylVec<S>) -> WeylVec<S> {
        use Field::*;
        let central = if m + n == 0 { S::from_i64(m * CRITICAL_LEVEL) } else { S::zero() };
        match (x, y) {
            (H, E) => self.apply_e(m + n, v).scaled(&S::from_i64(2)),
            (H, F) => self.apply_f(m + n, v).scaled(&S::from_i64(-2)),
            (E, F) => self.apply_h(m + n, v) + v.scaled(&central),
            (H, H) => v.scaled(&(S::from_i64(2) * central)),
            _ => WeylVec::zero(),
        }
    }

    /// Checks `[h(m),e(n)] = 2e(m+n)`, `[h(m),f(n)] = -2f(m+n)`,
    /// `[e(m),f(n)] = h(m+n) + mkδ`, `[h(m),h(n)] = 2mkδ` and
    /// `[e(m),e(n)] = [f(m),f(n)] = 0` at `k = -2` on `v`. Returns the first
    /// failing relation.
    pub fn relation_failure(&self, m: i64, n: i64, v: &WeylVec<S>) -> Option<String> {
        self.relation_sweep(&[m], &[n], v).into_iter().next()
    }

    /// All bracket failures for `m ∈ ms`, `n ∈ ns` on `v`, in order. Each
    /// first-level image `x(k) v` is computed once.
    pub fn relation_sweep(&self, ms: &[i64], ns: &[i64], v: &WeylVec<S>) -> Vec<String> {
        use Field::*;
        const PAIRS: [(Field, Field); 6] = [(H, E), (H, F), (E, F), (H, H), (E, E), (F, F)];
        let mut first: BTreeMap<FieldMode, WeylVec<S>> = BTreeMap::new();
        for &k in ms.iter().chain(ns) {
            for field in [E, H, F] {
                let op = FieldMode { field, n: k };
                first.entry(op).or_insert_with(|| self.apply_mode(op, v));
            }
        }
        let mut failures = Vec::new();
        for &m in ms {
            for &n in ns {
                for (x, y) in PAIRS {
                    let xm = FieldMode { field: x, n: m };
                    let yn = FieldMode { field: y, n };
                    let got = self.apply_mode(xm, &first[&yn]) - self.apply_mode(yn, &first[&xm]);
                    let expected = self.expected_bracket(x, m, y, n, v);
                    if got != expected {
                        failures.push(format!("[{xm}, {yn}] on {v}: got {got}, expected {expected}"));
                    }
                }
            }
        }
        failures
    }

    pub fn affine_relation_check(&self, m: i64, n: i64, v: &WeylVec<S>) -> bool {
        self.relation_failure(m, n, v).is_none()
    }
}

impl<S: Scalar> OperatorFamily<WeylState, S> for WakimotoModule<S> {
    type Op = FieldMode;

    fn candidates(&self, v: &WeylVec<S>, bound2: i64) -> Vec<FieldMode> {
        let (Some(min_w), Some(max_w)) = (
            v.keys().map(WeylState::weight).min(),
            v.keys().map(WeylState::weight).max(),
        ) else {
            return Vec::new();
        };
        let bound = bound2.div_euclid(2);
        // x(n) lowers weight by n except through χ, which shifts it by at most
        // the tail depth (f) or not at all (h).
        let lo = min_w - bound - self.chi.tail_depth() - 1;
        let hi = max_w + self.chi.pole_order() + 1;
        let mut out = Vec::new();
        for n in lo..=hi {
            for field in [Field::E, Field::H, Field::F] {
                out.push(FieldMode { field, n });
            }
        }
        out
    }

    fn apply(&self, op: &FieldMode, v: &WeylVec<S>) -> WeylVec<S> {
        self.apply_mode(*op, v)
    }
}

/// Monomials of weight `≤ max_weight` and charge in `window`.
pub fn enumerate_weyl_basis(max_weight: i64, window: (i64, i64)) -> Vec<WeylState> {
    let mut out = Vec::new();
    if max_weight < 0 {
        return out;
    }
    let max_a = (-window.0).max(0) as usize + max_weight as usize;
    let max_astar = window.1.max(0) as usize + max_weight as usize;
    for a in partitions_up_to(max_weight, 1, max_a) {
        let wa: i64 = a.iter().sum();
        for b in partitions_up_to(max_weight - wa, 0, max_astar) {
            let charge = b.len() as i64 - a.len() as i64;
            if window.0 <= charge && charge <= window.1 {
                out.push(WeylState::new(a.clone(), b).expect("valid modes"));
            }
        }
    }
    out.sort();
    out
}

/// Weakly decreasing lists with parts `≥ min_part`, sum `≤ budget` and at
/// most `max_len` parts.
fn partitions_up_to(budget: i64, min_part: i64, max_len: usize) -> Vec<Vec<i64>> {
    fn go(budget: i64, largest: i64, min_part: i64, max_len: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        out.push(cur.clone());
        if cur.len() == max_len {
            return;
        }
        let mut p = largest.min(budget);
        while p >= min_part {
            cur.push(p);
            go(budget - p, p, min_part, max_len, cur, out);
            cur.pop();
            p -= 1;
        }
    }
    let mut out = Vec::new();
    go(budget, budget, min_part, max_len, &mut Vec::new(), &mut out);
    out
}

/// Outcome of a reducibility probe on `W_{-χ}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evidence {
    pub cfg: ClosureConfig,
    pub all_cyclic: bool,
    /// Basis monomials whose truncated closure misses the vacuum.
    pub non_cyclic_witnesses: Vec<String>,
    /// Non-vacuum vectors killed by `e(0)` and every `e(n), h(n), f(n)`,
    /// `n ≥ 1`, within the truncation.
    pub singular_candidates: Vec<String>,
    pub probed: usize,
}

/// Cyclicity probe from every basis monomial within `cfg` plus a joint-kernel
/// search for singular vectors.
pub fn wakimoto_probe<S: Scalar>(chi: &ChiSeries<S>, cfg: &ClosureConfig) -> Evidence {
    let module = WakimotoModule::new(chi.clone());
    let cutoff = cfg.cutoff2().div_euclid(2);
    let basis = enumerate_weyl_basis(cutoff, cfg.charge_window);
    let vacuum = WeylState::vacuum();

    let cyclic: Vec<bool> = basis
        .par_iter()
        .map(|s| span::cyclic_probe(&WeylVec::<S>::basis(s.clone()), &vacuum, &module, cfg))
        .collect();
    let non_cyclic_witnesses: Vec<String> = basis
        .iter()
        .zip(&cyclic)
        .filter(|(_, ok)| !**ok)
        .map(|(s, _)| s.to_string())
        .collect();

    let top = cutoff + chi.pole_order() + 1;
    let mut annihilators = vec![FieldMode { field: Field::E, n: 0 }];
    for n in 1..=top {
        for field in [Field::E, Field::H, Field::F] {
            annihilators.push(FieldMode { field, n });
        }
    }
    let kernel = span::joint_kernel::<_, S, _>(&module, &annihilators, &basis);
    let singular_candidates = kernel
        .rows()
        .filter(|row| row.leading().map(|(k, _)| !k.is_vacuum()).unwrap_or(false))
        .map(ToString::to_string)
        .collect();

    Evidence {
        cfg: cfg.clone(),
        all_cyclic: non_cyclic_witnesses.is_empty(),
        non_cyclic_witnesses,
        singular_candidates,
        probed: basis.len(),
    }
}
