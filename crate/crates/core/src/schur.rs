//! Elementary Schur polynomials `S_r`, defined by
//! `exp(Σ_{n≥1} x_n yⁿ / n) = Σ_r S_r(x₁, x₂, …) y^r`.
//!
//! Differentiating in `y` gives `r·S_r = Σ_{k=1}^r x_k S_{r-k}`, which is the
//! production path. The `1/r!`-scaled Hessenberg determinant is kept as an
//! independent route.

use crate::scalar::{ChiSeries, Scalar};

fn x_at<S: Scalar>(xs: &[S], k: usize) -> S {
    // x_k, 1-based; missing entries are zero
    xs.get(k - 1).cloned().unwrap_or_else(S::zero)
}

/// `S_r(x₁, x₂, …)` by the derivative recurrence.
pub fn schur_rec<S: Scalar>(r: usize, xs: &[S]) -> S {
    let mut values: Vec<S> = Vec::with_capacity(r + 1);
    values.push(S::one());
    for n in 1..=r {
        let mut acc = S::zero();
        for k in 1..=n {
            let xk = x_at(xs, k);
            if !xk.is_zero() {
                acc = acc + xk * values[n - k].clone();
            }
        }
        values.push(acc / S::from_i64(n as i64));
    }
    values.swap_remove(r)
}

/// The `r×r` matrix whose determinant is `r!·S_r`: first row `(x₁,…,x_r)`,
/// row `i ≥ 1` has `-r+i` on the subdiagonal and `x₁, x₂, …` from the
/// diagonal rightwards.
pub fn schur_matrix<S: Scalar>(r: usize, xs: &[S]) -> Vec<Vec<S>> {
    let mut m = vec![vec![S::zero(); r]; r];
    for (i, row) in m.iter_mut().enumerate() {
        if i > 0 {
            row[i - 1] = S::from_i64(i as i64 - r as i64);
        }
        for j in i..r {
            row[j] = x_at(xs, j - i + 1);
        }
    }
    m
}

/// Exact determinant by Gaussian elimination over the field `S`.
pub fn determinant<S: Scalar>(mut m: Vec<Vec<S>>) -> S {
    let n = m.len();
    let mut det = S::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return S::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det = det * p.clone();
        for row in col + 1..n {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = m[row][col].clone() / p.clone();
            for k in col..n {
                let delta = factor.clone() * m[col][k].clone();
                m[row][k] = m[row][k].clone() - delta;
            }
        }
    }
    det
}

pub fn factorial<S: Scalar>(r: usize) -> S {
    (1..=r as i64).fold(S::one(), |acc, k| acc * S::from_i64(k))
}

/// `S_r` via `(1/r!)·det`.
pub fn schur_det<S: Scalar>(r: usize, xs: &[S]) -> S {
    determinant(schur_matrix(r, xs)) / factorial::<S>(r)
}

/// `S_ℓ(-χ) = S_ℓ(-χ_{-1}, -χ_{-2}, …)`.
pub fn schur_at_minus_chi<S: Scalar>(ell: usize, chi: &ChiSeries<S>) -> S {
    let xs: Vec<S> = (1..=ell as i64).map(|n| -chi.tail(n)).collect();
    schur_rec(ell, &xs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    #[test]
    fn low_orders() {
        let (a, b) = (q(3, 7), q(-2, 5));
        assert_eq!(schur_rec::<Q>(0, &[]), q(1, 1));
        assert_eq!(schur_rec(1, &[a.clone()]), a);
        let expected = (a.clone() * a.clone() + b.clone()) / q(2, 1);
        assert_eq!(schur_rec(2, &[a.clone(), b.clone()]), expected);
        assert_eq!(schur_det(2, &[a, b]), expected);
        assert_eq!(schur_det::<Q>(0, &[]), q(1, 1));
        assert_eq!(schur_det(3, &[q(1, 1)]), q(1, 6));
    }

    #[test]
    fn at_minus_chi() {
        let chi = ChiSeries::<Q>::with_ell(1, &[]);
        assert_eq!(schur_at_minus_chi(1, &chi), q(0, 1));
        assert_eq!(schur_at_minus_chi(0, &chi), q(1, 1));
        let (a, b) = (q(5, 3), q(-1, 2));
        let chi = ChiSeries::with_ell(2, &[a.clone(), b.clone()]);
        assert_eq!(
            schur_at_minus_chi(2, &chi),
            (a.clone() * a - b) / q(2, 1)
        );
    }

    #[test]
    fn float_instance_agrees() {
        let xs = [0.5f64, -1.25, 2.0];
        let v = schur_rec(3, &xs);
        let d = schur_det(3, &xs);
        assert!((v - d).abs() < 1e-12);
    }

    #[test]
    fn determinant_permutation_sign() {
        let m = vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]];
        assert_eq!(determinant(m), q(-1, 1));
    }
}
