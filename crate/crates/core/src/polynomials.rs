//! The deformation polynomials `p_n(eta)` and the inverse coefficients `I_n`.
//!
//! `p_n` is forced by normalization of the distribution row:
//!
//! ```text
//! p_0 = 1,   p_n = 1 - eta^n - sum_{k=1}^{n-1} binom(x_n, x_k) eta^(n-k) p_k
//! ```
//!
//! and has the alternative expansion `p_n = sum_k (-1)^k binom(x_n, x_k) I_k eta^k`, where
//! `I_0 = I_1 = 1` and `(-1)^n I_n = sum_{k<n} (-1)^(k-1) I_k binom(x_n, x_k)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{eval_coeffs, Poly};
use crate::roots::{self, RootReport};
use crate::scalar::{text, Scalar};
use crate::sequences::GenSequence;

/// `p_n(eta) = sum_j coeffs[j] eta^j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct DeformPolynomial<S: Scalar> {
    pub n: usize,
    #[serde(serialize_with = "text::many")]
    pub coeffs: Vec<S>,
}

impl<S: Scalar> DeformPolynomial<S> {
    /// Coefficients padded with zeros to length `n + 1`.
    fn from_poly(n: usize, p: &Poly<S>) -> Self {
        let coeffs = (0..=n).map(|k| p.coeff(k)).collect();
        DeformPolynomial { n, coeffs }
    }

    pub fn to_poly(&self) -> Poly<S> {
        Poly::new(self.coeffs.clone())
    }

    pub fn eval(&self, eta: &S) -> S {
        eval_coeffs(&self.coeffs, eta)
    }
}

/// `I_0..=I_N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct InverseCoeffs<S: Scalar> {
    #[serde(serialize_with = "text::many")]
    pub values: Vec<S>,
}

impl<S: Scalar> InverseCoeffs<S> {
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, k: usize) -> Option<&S> {
        self.values.get(k)
    }
}

/// Row `binom(x_n, x_k)` for `k = 0..=n`, by `binom(x_n, x_k) = binom(x_n, x_{k-1}) x_{n-k+1} / x_k`.
///
/// Multiplying by single terms keeps the operands small compared with dividing full
/// factorials, which matters for long exact rows.
pub(crate) fn binomial_row<S: Scalar>(seq: &GenSequence<S>, n: usize) -> Vec<S> {
    let x = seq.values();
    let mut row = Vec::with_capacity(n + 1);
    row.push(S::one());
    for k in 1..=n {
        let next = row[k - 1].clone() * &x[n - k + 1] / &x[k];
        row.push(next);
    }
    row
}

/// `p_n` by the normalization recurrence. Memoized on the sequence.
pub fn p_recurrence<S: Scalar>(seq: &GenSequence<S>, n: usize) -> Result<DeformPolynomial<S>> {
    seq.range_check(n)?;
    let mut memo = seq.poly_memo.lock().unwrap();
    while memo.len() <= n {
        let m = memo.len();
        let next = if m == 0 {
            Poly::one()
        } else {
            let binom = binomial_row(seq, m);
            let mut c = vec![S::zero(); m + 1];
            c[0] = S::one();
            c[m] = c[m].clone() - &S::one();
            for (k, pk) in memo.iter().enumerate().take(m).skip(1) {
                let shift = m - k;
                for (j, pkj) in pk.coeffs().iter().enumerate() {
                    c[shift + j] = c[shift + j].clone() - &(binom[k].clone() * pkj);
                }
            }
            Poly::new(c)
        };
        memo.push(next);
    }
    Ok(DeformPolynomial::from_poly(n, &memo[n]))
}

/// `I_0..=I_N` by their recurrence. Memoized on the sequence.
pub fn inverse_coeffs<S: Scalar>(seq: &GenSequence<S>, max: usize) -> Result<InverseCoeffs<S>> {
    seq.range_check(max)?;
    let mut memo = seq.inverse_memo.lock().unwrap();
    if memo.is_empty() {
        memo.push(S::one());
    }
    while memo.len() <= max {
        let n = memo.len();
        let binom = binomial_row(seq, n);
        // sum_{k<n} (-1)^(k-1) I_k binom(x_n, x_k)
        let mut sum = S::zero();
        for (k, ik) in memo.iter().enumerate() {
            let term = ik.clone() * &binom[k];
            sum = if k % 2 == 1 { sum + term } else { sum - term };
        }
        memo.push(if n.is_multiple_of(2) { sum } else { -sum });
    }
    Ok(InverseCoeffs {
        values: memo[..=max].to_vec(),
    })
}

/// Coefficients `(-1)^k binom(x_n, x_k) I_k`, `k = 0..=n`.
fn alternative_coeffs<S: Scalar>(seq: &GenSequence<S>, inv: &[S], n: usize) -> Vec<S> {
    binomial_row(seq, n)
        .into_iter()
        .zip(inv)
        .enumerate()
        .map(|(k, (b, i))| {
            let c = b * i;
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect()
}

/// `p_n` from the alternative expansion in the `I_k`.
pub fn p_alternative<S: Scalar>(
    seq: &GenSequence<S>,
    inv: &InverseCoeffs<S>,
    n: usize,
) -> Result<DeformPolynomial<S>> {
    seq.range_check(n)?;
    if inv.max_index() < n {
        return Err(Error::Range {
            index: n,
            max_index: inv.max_index(),
        });
    }
    Ok(DeformPolynomial {
        n,
        coeffs: alternative_coeffs(seq, &inv.values, n),
    })
}

/// Horner evaluation.
pub fn p_eval<S: Scalar>(p: &DeformPolynomial<S>, eta: &S) -> S {
    p.eval(eta)
}

/// `p_n(eta)` without building the full recurrence table.
///
/// Uses the alternative expansion, which needs only `I_0..=I_n` (O(n^2) work) instead of
/// all of `p_1..p_n` (O(n^3)).
pub fn p_value<S: Scalar>(seq: &GenSequence<S>, n: usize, eta: &S) -> Result<S> {
    let inv = inverse_coeffs(seq, n)?;
    Ok(eval_coeffs(&alternative_coeffs(seq, &inv.values, n), eta))
}

/// Smallest root of `p` in (0, 1), bracketed to `width`.
pub fn smallest_positive_root<S: Scalar>(
    p: &DeformPolynomial<S>,
    width: &S,
) -> Result<RootReport<S>> {
    roots::smallest_positive_root(&p.to_poly(), width)
}

/// Default bracket width for root isolation: `2^-100` exactly, or a few bits above the
/// working precision for approximate scalars.
pub fn default_root_width<S: Scalar>() -> S {
    let two = S::from_int(2);
    let bits = match S::one().mode() {
        crate::scalar::Mode::Exact => 100,
        crate::scalar::Mode::Approx { bits } => bits.saturating_sub(16).clamp(8, 100),
    };
    S::one() / two.powi(bits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SigmaClass {
    /// Every `p_n` up to the horizon is root-free on (0, 1).
    #[serde(rename = "sigma+")]
    Plus,
    /// Some `p_n` up to the horizon has a root in (0, 1).
    #[serde(rename = "sigma-")]
    Minus,
}

impl std::fmt::Display for SigmaClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SigmaClass::Plus => write!(f, "sigma+"),
            SigmaClass::Minus => write!(f, "sigma-"),
        }
    }
}

/// One row of the classification table.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SigmaRow<S: Scalar> {
    pub n: usize,
    /// Distinct roots of `p_n` in (0, 1).
    pub sturm_count: usize,
    pub smallest_root: Option<roots::RootBracket<S>>,
    /// `min_{m <= n}` of the smallest root of `p_m` in (0, 1]; 1 when there is none.
    #[serde(serialize_with = "text::one")]
    pub eta_max: S,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SigmaReport<S: Scalar> {
    pub class: SigmaClass,
    pub horizon: usize,
    pub first_violating_n: Option<usize>,
    pub rows: Vec<SigmaRow<S>>,
}

impl<S: Scalar> SigmaReport<S> {
    /// `eta_max^(n)` for `n = 1..=horizon`.
    pub fn eta_max(&self) -> Vec<S> {
        self.rows.iter().map(|r| r.eta_max.clone()).collect()
    }

    /// `eta_max^(n)`, or `None` outside `1..=horizon`.
    pub fn eta_max_at(&self, n: usize) -> Option<&S> {
        n.checked_sub(1).and_then(|i| self.rows.get(i)).map(|r| &r.eta_max)
    }
}

/// Decides `sigma+` / `sigma-` up to `n_max` from exact Sturm counts.
pub fn sigma_classify<S: Scalar>(seq: &GenSequence<S>, n_max: usize) -> Result<SigmaReport<S>> {
    sigma_classify_with_width(seq, n_max, &default_root_width())
}

pub fn sigma_classify_with_width<S: Scalar>(
    seq: &GenSequence<S>,
    n_max: usize,
    width: &S,
) -> Result<SigmaReport<S>> {
    seq.range_check(n_max)?;
    let mut rows = Vec::with_capacity(n_max);
    let mut eta_max = S::one();
    let mut first_violating_n = None;
    for n in 1..=n_max {
        let p = p_recurrence(seq, n)?;
        let report = smallest_positive_root(&p, width)?;
        if report.has_root_in_unit_interval && first_violating_n.is_none() {
            first_violating_n = Some(n);
        }
        if let Some(b) = &report.smallest_root {
            eta_max = S::min_of(&eta_max, &b.lo);
        }
        rows.push(SigmaRow {
            n,
            sturm_count: report.sturm_count,
            smallest_root: report.smallest_root,
            eta_max: eta_max.clone(),
        });
    }
    Ok(SigmaReport {
        class: if first_violating_n.is_some() {
            SigmaClass::Minus
        } else {
            SigmaClass::Plus
        },
        horizon: n_max,
        first_violating_n,
        rows,
    })
}

/// `eta_max^(n)` alone.
pub fn eta_max<S: Scalar>(seq: &GenSequence<S>, n: usize) -> Result<S> {
    if n == 0 {
        return Ok(S::one());
    }
    let report = sigma_classify(seq, n)?;
    Ok(report.rows[n - 1].eta_max.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn r(n: i64, d: i64) -> Exact {
        Exact::ratio(n, d)
    }

    fn product(qs: &[Exact]) -> Vec<Exact> {
        Poly::from_reciprocal_roots(qs).into_coeffs()
    }

    #[test]
    fn low_order_polynomials() {
        let s = GenSequence::explicit(vec![r(0, 1), r(1, 1), r(7, 3), r(5, 1)]).unwrap();
        assert_eq!(p_recurrence(&s, 0).unwrap().coeffs, vec![r(1, 1)]);
        assert_eq!(p_recurrence(&s, 1).unwrap().coeffs, vec![r(1, 1), r(-1, 1)]);
        // (1 - eta)(1 - (x_2 - 1) eta)
        assert_eq!(p_recurrence(&s, 2).unwrap().coeffs, product(&[r(1, 1), r(4, 3)]));
    }

    #[test]
    fn natural_is_binomial() {
        let s = GenSequence::<Exact>::natural(8).unwrap();
        let ones = vec![r(1, 1); 8];
        assert_eq!(p_recurrence(&s, 8).unwrap().coeffs, product(&ones));
        let inv = inverse_coeffs(&s, 8).unwrap();
        assert!(inv.values.iter().all(|i| *i == r(1, 1)));
        assert_eq!(p_alternative(&s, &inv, 4).unwrap().coeffs, product(&ones[..4]));
    }

    #[test]
    fn qbracket_alternative_factorizes() {
        let q = r(4, 5);
        let s = GenSequence::qbracket(q.clone(), 6).unwrap();
        let inv = inverse_coeffs(&s, 6).unwrap();
        assert_eq!(inv.values[0], r(1, 1));
        assert_eq!(inv.values[1], r(1, 1));
        let alt = p_alternative(&s, &inv, 3).unwrap();
        assert_eq!(alt.coeffs, product(&[r(1, 1), q.clone(), q.clone() * &q]));
    }

    #[test]
    fn evaluation_examples() {
        let s = GenSequence::qbracket(r(4, 5), 4).unwrap();
        let p2 = p_recurrence(&s, 2).unwrap();
        assert_eq!(p_eval(&p2, &r(1, 2)), r(3, 10));
        assert_eq!(p_eval(&p2, &r(0, 1)), r(1, 1));
        assert_eq!(p_eval(&p2, &r(1, 1)), r(0, 1));
        assert_eq!(p_value(&s, 4, &r(1, 3)).unwrap(), p_recurrence(&s, 4).unwrap().eval(&r(1, 3)));
    }

    #[test]
    fn boundary_root_of_p1() {
        let s = GenSequence::<Exact>::natural(2).unwrap();
        let rep = smallest_positive_root(&p_recurrence(&s, 1).unwrap(), &r(1, 1000)).unwrap();
        assert!(!rep.has_root_in_unit_interval && rep.root_at_one);
    }

    #[test]
    fn classification_examples() {
        let s = GenSequence::qbracket(r(4, 5), 10).unwrap();
        let rep = sigma_classify(&s, 10).unwrap();
        assert_eq!(rep.class, SigmaClass::Plus);
        assert!(rep.eta_max().iter().all(|e| *e == r(1, 1)));

        let s = GenSequence::qbracket(r(5, 4), 6).unwrap();
        let rep = sigma_classify(&s, 6).unwrap();
        assert_eq!(rep.class, SigmaClass::Minus);
        assert_eq!(rep.first_violating_n, Some(2));
        assert_eq!(rep.eta_max_at(5), Some(&r(256, 625)));
        assert_eq!(eta_max(&s, 3).unwrap(), r(16, 25));
    }

    #[test]
    fn range_errors() {
        let s = GenSequence::<Exact>::natural(3).unwrap();
        assert!(matches!(p_recurrence(&s, 4), Err(Error::Range { .. })));
        assert!(matches!(inverse_coeffs(&s, 4), Err(Error::Range { .. })));
        let inv = inverse_coeffs(&s, 2).unwrap();
        assert!(matches!(p_alternative(&s, &inv, 3), Err(Error::Range { .. })));
    }
}
