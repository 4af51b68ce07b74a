use std::collections::BTreeMap;
use std::fmt::{self, Display};
use std::ops::{Add, Neg, Sub};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::scalar::Scalar;

/// Finite linear combination of basis keys with no stored zero coefficients.
///
/// Iteration follows the key order, so every output derived from a vector is
/// canonical.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVec<K: Ord, S> {
    terms: BTreeMap<K, S>,
}

impl<K: Ord + Clone, S: Scalar> Default for SparseVec<K, S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Ord + Clone, S: Scalar> SparseVec<K, S> {
    pub fn zero() -> Self {
        SparseVec {
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(key: K) -> Self {
        Self::term(key, S::one())
    }

    pub fn term(key: K, coeff: S) -> Self {
        let mut v = Self::zero();
        v.add_term(key, coeff);
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (K, S)>) -> Self {
        let mut v = Self::zero();
        for (k, c) in terms {
            v.add_term(k, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&K, &S)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl DoubleEndedIterator<Item = &K> {
        self.terms.keys()
    }

    pub fn coeff(&self, key: &K) -> S {
        self.terms.get(key).cloned().unwrap_or_else(S::zero)
    }

    pub fn get(&self, key: &K) -> Option<&S> {
        self.terms.get(key)
    }

    /// Largest key and its coefficient.
    pub fn leading(&self) -> Option<(&K, &S)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, key: K, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = existing.clone() + coeff;
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone() * c.clone());
        }
    }

    pub fn scaled(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparseVec {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    /// Linear extension of a key-level map that yields at most one term.
    pub fn map_terms(&self, mut f: impl FnMut(&K) -> Option<(S, K)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            if let Some((factor, key)) = f(k) {
                out.add_term(key, factor * c.clone());
            }
        }
        out
    }

    /// Linear extension of a key-level map producing a vector.
    pub fn flat_map(&self, mut f: impl FnMut(&K) -> SparseVec<K, S>) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&K) -> bool) {
        self.terms.retain(|k, _| keep(k));
    }

    pub fn into_terms(self) -> impl Iterator<Item = (K, S)> {
        self.terms.into_iter()
    }
}

impl<K: Ord + Clone, S: Scalar> Add for SparseVec<K, S> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self.add_scaled(&rhs, &S::one());
        self
    }
}

impl<K: Ord + Clone, S: Scalar> Sub for SparseVec<K, S> {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        self.add_scaled(&rhs, &-S::one());
        self
    }
}

impl<K: Ord + Clone, S: Scalar> Neg for SparseVec<K, S> {
    type Output = Self;

    fn neg(self) -> Self {
        self.scaled(&-S::one())
    }
}

impl<K: Ord + Clone + Display, S: Scalar> Display for SparseVec<K, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {k}")?;
        }
        Ok(())
    }
}

/// Serialized as a JSON list of `{"state", "value"}` records, in key order.
impl<K: Ord + Clone + Display, S: Scalar> Serialize for SparseVec<K, S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        #[derive(Serialize)]
        struct Entry {
            state: String,
            value: String,
        }
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (k, c) in &self.terms {
            seq.serialize_element(&Entry {
                state: k.to_string(),
                value: c.to_external(),
            })?;
        }
        seq.end()
    }
}
