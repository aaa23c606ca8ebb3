//! Closed forms for `x_n = [n]_q`: q-Pochhammer symbols, Gaussian coefficients, the
//! factorized `p_n`, and the q-exponentials
//!
//! ```text
//! e_q(z) = sum z^n / (q;q)_n                  (|z| < 1)
//! E_q(z) = sum q^(n(n-1)/2) z^n / (q;q)_n
//! ```
//!
//! with `N_q(t) = e_q((1-q) t)` for `q < 1` and `N_q(t) = E_{1/q}((1 - 1/q) t)` for `q > 1`.
//!
//! Everything here is computed from products and geometric sums only, independently of
//! the generic recurrences, so it can serve as their oracle.

use serde::Serialize;

use crate::analytic::{sum_series, SeriesEval};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::polynomials::DeformPolynomial;
use crate::scalar::{text, Scalar};

/// A deformation parameter `q > 0`, `q != 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct QParams<S: Scalar> {
    #[serde(serialize_with = "text::one")]
    q: S,
}

impl<S: Scalar> QParams<S> {
    pub fn new(q: S) -> Result<Self> {
        if !q.is_positive() || q == S::one() {
            return Err(Error::Domain(format!("q must be positive and different from 1, got {q}")));
        }
        Ok(QParams { q })
    }

    pub fn q(&self) -> &S {
        &self.q
    }
}

/// `[n]_q = 1 + q + ... + q^(n-1)`.
pub fn q_bracket<S: Scalar>(q: &S, n: usize) -> S {
    (0..n).map(|j| q.powi(j as u32)).fold(S::zero(), |acc, t| acc + &t)
}

/// `(a;q)_k = prod_{l<k} (1 - a q^l)`.
pub fn q_pochhammer<S: Scalar>(a: &S, q: &S, k: usize) -> S {
    let mut prod = S::one();
    let mut aq = a.clone();
    for _ in 0..k {
        prod = prod * (S::one() - &aq);
        aq = aq * q;
    }
    prod
}

/// Truncated `(a;q)_inf` with a bound on the omitted tail.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct InfiniteProduct<S: Scalar> {
    #[serde(serialize_with = "text::one")]
    pub value: S,
    pub factors_used: usize,
    /// Upper bound on `|(a;q)_inf - value|`.
    #[serde(serialize_with = "text::one")]
    pub tail_bound: S,
}

/// `(a;q)_inf` for `0 < q < 1`, stopping once `|a| q^L <= tol`.
///
/// With `s = |a| q^L / ((1 - q)(1 - |a| q^L))` the remaining factors change the product by
/// a relative amount at most `s / (1 - s)`.
pub fn q_pochhammer_infinite<S: Scalar>(a: &S, q: &S, tol: &S) -> Result<InfiniteProduct<S>> {
    if !q.is_positive() || *q >= S::one() {
        return Err(Error::Domain(format!(
            "the infinite q-Pochhammer symbol needs 0 < q < 1, got q = {q}"
        )));
    }
    if !tol.is_positive() {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut prod = S::one();
    let mut aq = a.clone();
    let mut used = 0;
    while aq.abs() > *tol || aq.abs() >= S::ratio(1, 2) {
        prod = prod * (S::one() - &aq);
        aq = aq * q;
        used += 1;
    }
    let m = aq.abs();
    let s = m.clone() / ((S::one() - q) * (S::one() - &m));
    let tail_bound = if s < S::one() {
        prod.abs() * &s / (S::one() - &s)
    } else {
        prod.abs() * &s
    };
    Ok(InfiniteProduct {
        value: prod,
        factors_used: used,
        tail_bound,
    })
}

/// `binom(n, k)_q = prod_{l<k} (1 - q^(n-l)) / (1 - q^(l+1))`.
pub fn gaussian_binomial<S: Scalar>(q: &S, n: usize, k: usize) -> Result<S> {
    if k > n {
        return Err(Error::Domain(format!("k = {k} exceeds n = {n}")));
    }
    let mut value = S::one();
    for l in 0..k {
        value = value * (S::one() - q.powi((n - l) as u32)) / (S::one() - q.powi((l + 1) as u32));
    }
    Ok(value)
}

/// `p_n = prod_{l<n} (1 - q^l eta)`, expanded.
pub fn p_factorized<S: Scalar>(q: &S, n: usize) -> DeformPolynomial<S> {
    let roots: Vec<S> = (0..n).map(|l| q.powi(l as u32)).collect();
    let p = Poly::from_reciprocal_roots(&roots);
    DeformPolynomial {
        n,
        coeffs: (0..=n).map(|k| p.coeff(k)).collect(),
    }
}

/// `p_n = sum_k (-1)^k binom(n, k)_q q^(k(k-1)/2) eta^k`.
pub fn p_expanded<S: Scalar>(q: &S, n: usize) -> DeformPolynomial<S> {
    let coeffs = (0..=n)
        .map(|k| {
            let c = gaussian_binomial(q, n, k).expect("k <= n") * q.powi((k * k.saturating_sub(1) / 2) as u32);
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    DeformPolynomial { n, coeffs }
}

fn require_q_below_one<S: Scalar>(q: &S) -> Result<()> {
    if !q.is_positive() || *q >= S::one() {
        return Err(Error::Domain(format!("q-exponentials need 0 < q < 1, got q = {q}")));
    }
    Ok(())
}

/// `e_q(z)`; requires `0 < q < 1` and `|z| < 1`.
pub fn small_e_q<S: Scalar>(q: &S, z: &S, tol: &S) -> Result<SeriesEval<S>> {
    require_q_below_one(q)?;
    if z.abs() >= S::one() {
        return Err(Error::Domain(format!("e_q(z) needs |z| < 1, got z = {z}")));
    }
    // term_n = z^n / (q;q)_n, term_n = term_{n-1} z / (1 - q^n)
    let mut term = S::one();
    let mut qn = S::one();
    Ok(sum_series(
        |n| {
            if n > 0 {
                qn = qn.clone() * q;
                term = term.clone() * z / (S::one() - &qn);
            }
            Some(term.clone())
        },
        tol,
        Some(S::one()),
    ))
}

/// `E_q(z)`; requires `0 < q < 1`.
pub fn big_e_q<S: Scalar>(q: &S, z: &S, tol: &S) -> Result<SeriesEval<S>> {
    require_q_below_one(q)?;
    // term_n = q^(n(n-1)/2) z^n / (q;q)_n, term_n = term_{n-1} q^(n-1) z / (1 - q^n)
    let mut term = S::one();
    let mut qn = S::one();
    Ok(sum_series(
        |n| {
            if n > 0 {
                let prev = qn.clone();
                qn = qn.clone() * q;
                term = term.clone() * &prev * z / (S::one() - &qn);
            }
            Some(term.clone())
        },
        tol,
        None,
    ))
}

/// `(e_q(z), E_q(z))`.
pub fn q_exponentials<S: Scalar>(
    q: &S,
    z: &S,
    tol: &S,
) -> Result<(SeriesEval<S>, SeriesEval<S>)> {
    Ok((small_e_q(q, z, tol)?, big_e_q(q, z, tol)?))
}

/// `N_q(t)` through the q-exponentials.
pub fn n_q<S: Scalar>(q: &S, t: &S, tol: &S) -> Result<SeriesEval<S>> {
    let one = S::one();
    if *q < one {
        small_e_q(q, &((one - q) * t), tol)
    } else {
        let p = one.clone() / q;
        big_e_q(&p, &((one - &p) * t), tol)
    }
}

/// `1/N_q(t)` through the q-exponentials: `E_q(-(1-q) t)` for `q < 1` and
/// `e_{1/q}(-(1 - 1/q) t)` for `q > 1`, the latter needing `|(1 - 1/q) t| < 1`.
pub fn n_q_inverse<S: Scalar>(q: &S, t: &S, tol: &S) -> Result<SeriesEval<S>> {
    let one = S::one();
    if *q < one {
        big_e_q(q, &(-((one - q) * t)), tol)
    } else {
        let p = one.clone() / q;
        let z = -((one - &p) * t);
        if z.abs() >= S::one() {
            return Err(Error::Domain(format!(
                "1/N_q(t) for q > 1 needs |(1 - 1/q) t| < 1, got {}",
                z.abs()
            )));
        }
        small_e_q(&p, &z, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn r(n: i64, d: i64) -> Exact {
        Exact::ratio(n, d)
    }

    #[test]
    fn brackets() {
        assert_eq!(q_bracket(&r(4, 5), 0), r(0, 1));
        assert_eq!(q_bracket(&r(4, 5), 1), r(1, 1));
        assert_eq!(q_bracket(&r(4, 5), 2), r(9, 5));
        assert_eq!(q_bracket(&r(5, 4), 3), r(61, 16));
    }

    #[test]
    fn pochhammer() {
        assert_eq!(q_pochhammer(&r(3, 7), &r(1, 2), 0), r(1, 1));
        assert_eq!(q_pochhammer(&r(1, 2), &r(1, 2), 2), r(3, 8));
        let q = r(4, 5);
        let fact: Exact = (1..=4).map(|n| q_bracket(&q, n)).fold(r(1, 1), |a, b| a * b);
        assert_eq!(q_pochhammer(&q, &q, 4) / (r(1, 1) - &q).powi(4), fact);
    }

    #[test]
    fn infinite_pochhammer_bound() {
        let q = r(1, 2);
        let tol = r(1, 1 << 40);
        let inf = q_pochhammer_infinite(&r(1, 2), &q, &tol).unwrap();
        let longer = q_pochhammer(&r(1, 2), &q, 200);
        assert!((longer - &inf.value).abs() <= inf.tail_bound);
        assert!(q_pochhammer_infinite(&r(1, 2), &r(5, 4), &tol).is_err());
    }

    #[test]
    fn gaussian() {
        let q = r(4, 5);
        assert_eq!(gaussian_binomial(&q, 5, 0).unwrap(), r(1, 1));
        assert_eq!(gaussian_binomial(&q, 2, 1).unwrap(), r(9, 5));
        assert_eq!(gaussian_binomial(&q, 7, 3).unwrap(), gaussian_binomial(&q, 7, 4).unwrap());
        assert!(gaussian_binomial(&q, 2, 3).is_err());
    }

    #[test]
    fn factorized_polynomials() {
        assert_eq!(p_factorized(&r(4, 5), 1).coeffs, vec![r(1, 1), r(-1, 1)]);
        assert_eq!(p_factorized(&r(4, 5), 2).coeffs, vec![r(1, 1), r(-9, 5), r(4, 5)]);
        for q in [r(1, 2), r(5, 4)] {
            for n in 0..8 {
                assert_eq!(p_factorized(&q, n), p_expanded(&q, n));
            }
        }
    }

    #[test]
    fn exponentials_are_inverse() {
        let tol = r(1, 10i64.pow(15));
        let (e0, big0) = q_exponentials(&r(4, 5), &r(0, 1), &tol).unwrap();
        assert_eq!((e0.value, big0.value), (r(1, 1), r(1, 1)));
        let e = small_e_q(&r(4, 5), &r(1, 2), &tol).unwrap();
        let big = big_e_q(&r(4, 5), &r(-1, 2), &tol).unwrap();
        assert!((e.value * &big.value - r(1, 1)).abs() <= r(2, 1) * &tol * r(10, 1));
        assert!(small_e_q(&r(4, 5), &r(1, 1), &tol).is_err());
        assert!(big_e_q(&r(5, 4), &r(1, 2), &tol).is_err());
    }

    #[test]
    fn n_q_inverse_relations() {
        let tol = r(1, 10i64.pow(15));
        for (q, t) in [(r(4, 5), r(2, 1)), (r(5, 4), r(3, 1))] {
            let n = n_q(&q, &t, &tol).unwrap();
            let ni = n_q_inverse(&q, &t, &tol).unwrap();
            assert!((n.value * &ni.value - r(1, 1)).abs() <= r(1, 10i64.pow(12)));
        }
        assert!(n_q_inverse(&r(5, 4), &r(6, 1), &tol).is_err());
    }
}
