//! Truncated submodule computations over any graded basis.
//!
//! A span is kept in reduced row-echelon form whose pivot is each row's
//! *largest* key under the basis order (weight first). Two consequences are
//! used throughout:
//!
//! * the vectors of a span supported in weight `≤ W` are exactly spanned by
//!   the rows whose pivot has weight `≤ W`, so restriction is exact;
//! * full reduction needs one pass, since no row mentions another row's pivot.
//!
//! [`closure`] only ever inserts genuine module elements: an operator image
//! that leaves the weight bound or charge window is dropped, never projected.
//! Positive membership answers are therefore proofs; negative answers are
//! evidence scoped to the [`ClosureConfig`] that produced them.
//!
//! On `F̃_χ` the commuting generators `S(n)`, `T(n)` act by scalars and cannot
//! enlarge a span, so the operator family there is just the `G^±` modes.

use std::collections::BTreeMap;
use std::fmt::{Debug, Display};

use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{doubled_floor, half_string, Scalar};
use crate::sparse::SparseVec;

pub trait GradedKey: Ord + Clone + Debug + Display + Send + Sync {
    /// Twice the conformal weight.
    fn weight2(&self) -> i64;
    fn charge(&self) -> i64;
}

impl GradedKey for crate::fock::FermionState {
    fn weight2(&self) -> i64 {
        crate::fock::FermionState::weight2(self)
    }

    fn charge(&self) -> i64 {
        crate::fock::FermionState::charge(self)
    }
}

/// A family of linear operators acting on vectors over `K`.
pub trait OperatorFamily<K: Ord, S>: Sync {
    type Op: Clone + Debug + Send + Sync;

    /// Every operator that can map `v` to a nonzero vector of doubled weight
    /// at most `bound2`. Returning extra operators is harmless.
    fn candidates(&self, v: &SparseVec<K, S>, bound2: i64) -> Vec<Self::Op>;

    fn apply(&self, op: &Self::Op, v: &SparseVec<K, S>) -> SparseVec<K, S>;
}

pub(crate) mod rational_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::scalar::Scalar;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_external())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        BigRational::parse_exact(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureConfig {
    #[serde(with = "rational_str")]
    pub weight_cutoff: BigRational,
    pub charge_window: (i64, i64),
    /// Extra weight allowed for intermediate vectors.
    #[serde(with = "rational_str")]
    pub excursion: BigRational,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig {
            weight_cutoff: BigRational::from_i64(4),
            charge_window: (-3, 3),
            excursion: BigRational::from_i64(2),
        }
    }
}

impl ClosureConfig {
    pub fn new(weight_cutoff: BigRational, charge_window: (i64, i64), excursion: BigRational) -> Result<Self> {
        if weight_cutoff.is_negative() {
            return Err(Error::Domain("weight cutoff must be non-negative".into()));
        }
        if excursion.is_negative() {
            return Err(Error::Domain("excursion must be non-negative".into()));
        }
        if charge_window.0 > charge_window.1 {
            return Err(Error::Domain("empty charge window".into()));
        }
        Ok(ClosureConfig {
            weight_cutoff,
            charge_window,
            excursion,
        })
    }

    /// Shorthand with integer-or-half cutoffs given as `(numerator, denominator)`.
    pub fn from_parts(cutoff: (i64, i64), window: (i64, i64), excursion: (i64, i64)) -> Self {
        Self::new(
            BigRational::from_ratio(cutoff.0, cutoff.1),
            window,
            BigRational::from_ratio(excursion.0, excursion.1),
        )
        .expect("valid closure config")
    }

    pub fn cutoff2(&self) -> i64 {
        doubled_floor(&self.weight_cutoff)
    }

    pub fn bound2(&self) -> i64 {
        doubled_floor(&(self.weight_cutoff.clone() + self.excursion.clone()))
    }

    pub fn in_window(&self, charge: i64) -> bool {
        self.charge_window.0 <= charge && charge <= self.charge_window.1
    }

    fn admits<K: GradedKey, S: Scalar>(&self, v: &SparseVec<K, S>, bound2: i64) -> bool {
        v.keys().all(|k| k.weight2() <= bound2 && self.in_window(k.charge()))
    }
}

/// Reduced row-echelon basis of a subspace, rows keyed by pivot.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanBasis<K: Ord, S> {
    rows: BTreeMap<K, SparseVec<K, S>>,
}

impl<K: Ord + Clone, S: Scalar> Default for SpanBasis<K, S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone, S: Scalar> SpanBasis<K, S> {
    pub fn new() -> Self {
        SpanBasis {
            rows: BTreeMap::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows in increasing pivot order; each has pivot coefficient 1.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K, S>> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Remainder of `v` after eliminating every pivot.
    pub fn reduce(&self, v: &SparseVec<K, S>) -> SparseVec<K, S> {
        let hits: Vec<(K, S)> = v
            .iter()
            .filter(|(k, _)| self.rows.contains_key(*k))
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        let mut out = v.clone();
        for (k, c) in hits {
            out.add_scaled(&self.rows[&k], &-c);
        }
        out
    }

    pub fn contains(&self, v: &SparseVec<K, S>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span. Returns the new normalized row when `v` was
    /// independent of the existing rows.
    pub fn insert(&mut self, v: &SparseVec<K, S>) -> Option<SparseVec<K, S>> {
        let reduced = self.reduce(v);
        let (pivot, lead) = reduced.leading()?;
        let pivot = pivot.clone();
        let inv = S::one() / lead.clone();
        let row = reduced.scaled(&inv);
        for other in self.rows.values_mut() {
            if let Some(c) = other.get(&pivot).cloned() {
                other.add_scaled(&row, &-c);
            }
        }
        self.rows.insert(pivot, row.clone());
        Some(row)
    }
}

impl<K: GradedKey, S: Scalar> SpanBasis<K, S> {
    /// The subspace of vectors supported in doubled weight `≤ max_weight2`.
    pub fn restrict(&self, max_weight2: i64) -> Self {
        SpanBasis {
            rows: self
                .rows
                .iter()
                .filter(|(p, _)| p.weight2() <= max_weight2)
                .map(|(p, r)| (p.clone(), r.clone()))
                .collect(),
        }
    }

    /// Row counts grouped by the `(2·weight, charge)` of each pivot.
    pub fn graded_dimensions(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for p in self.rows.keys() {
            *out.entry((p.weight2(), p.charge())).or_insert(0) += 1;
        }
        out
    }
}

pub struct ClosureOutcome<K: Ord, S> {
    /// Span at weight `≤ cutoff + excursion`.
    pub span: SpanBasis<K, S>,
    /// Whether the stop predicate fired before the fixpoint.
    pub stopped: bool,
}

/// Least fixpoint of the family acting on `generators` inside the truncation,
/// stopping early once `stop` holds.
pub fn closure_until<K, S, F>(
    generators: &[SparseVec<K, S>],
    family: &F,
    cfg: &ClosureConfig,
    stop: impl Fn(&SpanBasis<K, S>) -> bool,
) -> ClosureOutcome<K, S>
where
    K: GradedKey,
    S: Scalar,
    F: OperatorFamily<K, S>,
{
    let bound2 = cfg.bound2();
    let mut span = SpanBasis::new();
    let mut queue = Vec::new();
    for g in generators {
        if cfg.admits(g, bound2) {
            if let Some(row) = span.insert(g) {
                queue.push(row);
            }
        }
    }
    if stop(&span) {
        return ClosureOutcome { span, stopped: true };
    }
    while !queue.is_empty() {
        let images: Vec<Vec<SparseVec<K, S>>> = queue
            .par_iter()
            .map(|v| {
                family
                    .candidates(v, bound2)
                    .iter()
                    .map(|op| family.apply(op, v))
                    .filter(|w| !w.is_zero() && cfg.admits(w, bound2))
                    .collect()
            })
            .collect();
        queue = Vec::new();
        for w in images.into_iter().flatten() {
            if let Some(row) = span.insert(&w) {
                queue.push(row);
                if stop(&span) {
                    return ClosureOutcome { span, stopped: true };
                }
            }
        }
    }
    ClosureOutcome { span, stopped: false }
}

/// Truncated `U·generators`, restricted to weight `≤ cfg.weight_cutoff`.
pub fn closure<K, S, F>(generators: &[SparseVec<K, S>], family: &F, cfg: &ClosureConfig) -> SpanBasis<K, S>
where
    K: GradedKey,
    S: Scalar,
    F: OperatorFamily<K, S>,
{
    closure_until(generators, family, cfg, |_| false)
        .span
        .restrict(cfg.cutoff2())
}

pub fn contains<K: Ord + Clone, S: Scalar>(basis: &SpanBasis<K, S>, v: &SparseVec<K, S>) -> bool {
    basis.contains(v)
}

/// Whether `target` is reachable from `v` inside the truncation.
pub fn reaches<K, S, F>(v: &SparseVec<K, S>, target: &SparseVec<K, S>, family: &F, cfg: &ClosureConfig) -> bool
where
    K: GradedKey,
    S: Scalar,
    F: OperatorFamily<K, S>,
{
    closure_until(std::slice::from_ref(v), family, cfg, |span| span.contains(target)).stopped
}

/// Whether the vacuum basis vector lies in the truncated closure of `v`.
pub fn cyclic_probe<K, S, F>(v: &SparseVec<K, S>, vacuum: &K, family: &F, cfg: &ClosureConfig) -> bool
where
    K: GradedKey,
    S: Scalar,
    F: OperatorFamily<K, S>,
{
    reaches(v, &SparseVec::basis(vacuum.clone()), family, cfg)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Augmented<K> {
    Source(K),
    Image(usize, K),
}

/// Exact basis of `{ w ∈ span(piece) : op·w = 0 for every op in annihilators }`.
pub fn joint_kernel<K, S, F>(family: &F, annihilators: &[F::Op], piece: &[K]) -> SpanBasis<K, S>
where
    K: Ord + Clone + Send + Sync,
    S: Scalar,
    F: OperatorFamily<K, S>,
{
    let columns: Vec<SparseVec<Augmented<K>, S>> = piece
        .par_iter()
        .map(|key| {
            let src = SparseVec::basis(key.clone());
            let mut col = SparseVec::basis(Augmented::Source(key.clone()));
            for (idx, op) in annihilators.iter().enumerate() {
                for (k, c) in family.apply(op, &src).into_terms() {
                    col.add_term(Augmented::Image(idx, k), c);
                }
            }
            col
        })
        .collect();
    let mut aug = SpanBasis::new();
    for col in &columns {
        aug.insert(col);
    }
    // Image keys dominate Source keys, so rows with a Source pivot have no image part.
    let mut kernel = SpanBasis::new();
    for (pivot, row) in &aug.rows {
        if let Augmented::Source(_) = pivot {
            let v = SparseVec::from_terms(row.iter().map(|(k, c)| match k {
                Augmented::Source(k) => (k.clone(), c.clone()),
                Augmented::Image(..) => unreachable!("image term below a source pivot"),
            }));
            kernel.insert(&v);
        }
    }
    kernel
}

#[derive(Clone, Debug, Serialize)]
pub struct PieceDimension {
    pub weight: String,
    pub charge: i64,
    pub dimension: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Membership {
    pub vector: String,
    pub member: bool,
}

/// JSON summary of a truncated span.
#[derive(Clone, Debug, Serialize)]
pub struct SpanReport {
    pub cfg: ClosureConfig,
    pub dimension: usize,
    pub dimensions: Vec<PieceDimension>,
    pub membership: Vec<Membership>,
}

impl SpanReport {
    pub fn new<K: GradedKey, S: Scalar>(
        cfg: &ClosureConfig,
        span: &SpanBasis<K, S>,
        queries: &[SparseVec<K, S>],
    ) -> Self {
        SpanReport {
            cfg: cfg.clone(),
            dimension: span.dimension(),
            dimensions: span
                .graded_dimensions()
                .into_iter()
                .map(|((w2, c), d)| PieceDimension {
                    weight: half_string(w2),
                    charge: c,
                    dimension: d,
                })
                .collect(),
            membership: queries
                .iter()
                .map(|q| Membership {
                    vector: q.to_string(),
                    member: span.contains(q),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = BigRational;

    #[test]
    fn echelon_invariants() {
        let mut b: SpanBasis<u8, Q> = SpanBasis::new();
        let v1 = SparseVec::from_terms([(3u8, Q::from_i64(2)), (1, Q::from_i64(1))]);
        let v2 = SparseVec::from_terms([(3u8, Q::from_i64(1)), (2, Q::from_i64(1))]);
        assert!(b.insert(&v1).is_some());
        assert!(b.insert(&v2).is_some());
        assert!(b.insert(&(v1.clone() + v2.clone())).is_none());
        assert_eq!(b.dimension(), 2);
        for (p, row) in &b.rows {
            assert_eq!(row.leading().unwrap().0, p);
            assert_eq!(row.coeff(p), Q::from_i64(1));
            for q in b.rows.keys().filter(|q| *q != p) {
                assert!(row.get(q).is_none());
            }
        }
        assert!(b.contains(&SparseVec::zero()));
        assert!(b.contains(&v1));
        assert!(!b.contains(&SparseVec::basis(1u8)));
    }

    #[test]
    fn config_validation() {
        assert!(ClosureConfig::new(Q::from_i64(-1), (0, 0), Q::from_i64(0)).is_err());
        assert!(ClosureConfig::new(Q::from_i64(1), (1, 0), Q::from_i64(0)).is_err());
        assert!(ClosureConfig::new(Q::from_i64(1), (0, 0), Q::from_i64(-1)).is_err());
        let cfg = ClosureConfig::from_parts((5, 2), (-1, 1), (1, 1));
        assert_eq!(cfg.cutoff2(), 5);
        assert_eq!(cfg.bound2(), 7);
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(json, r#"{"weight_cutoff":"5/2","charge_window":[-1,1],"excursion":"1"}"#);
    }
}
