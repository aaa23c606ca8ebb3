//! The generalized exponential `N(t) = sum_n t^n / x_n!`, its inverse series
//! `1/N(t) = sum_n (-1)^n I_n t^n / x_n!`, the product identity
//! `sum_s p_s(eta) t^s / x_s! = N(t) / N(eta t)` and the Poisson-like limit
//! `P_k^(n)(t / x_n) -> t^k / (x_k! N(t))`.

use serde::Serialize;

use crate::distribution::distribution_entry_fast;
use crate::error::{Error, Result};
use crate::polynomials::{inverse_coeffs, p_recurrence, InverseCoeffs};
use crate::scalar::{text, Scalar};
use crate::sequences::{class_s_check, increments_decay, ClassSReport, Family, GenSequence};

/// Terms always summed before the stopping rule is consulted.
pub const MIN_TERMS: usize = 4;
/// Hard cap on the number of terms.
pub const MAX_TERMS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesStatus {
    /// The stopping rule was met.
    Converged,
    /// Terms stopped decreasing; the value is reported but not trusted.
    DivergenceWarning,
    /// The available coefficients ran out before the stopping rule was met.
    PrefixExhausted,
    /// [`MAX_TERMS`] was reached.
    MaxTerms,
}

/// A truncated series with an honest account of where it stopped.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SeriesEval<S: Scalar> {
    #[serde(serialize_with = "text::one")]
    pub value: S,
    pub terms_used: usize,
    /// Magnitude of the first omitted term (`None` if it could not be formed).
    #[serde(serialize_with = "text::opt")]
    pub truncation_bound: Option<S>,
    /// Convergence radius; `None` means unbounded.
    #[serde(serialize_with = "text::opt")]
    pub radius_estimate: Option<S>,
    pub status: SeriesStatus,
}

/// Sums `terms` until a term of magnitude `<= tol` appears after [`MIN_TERMS`].
///
/// `terms` yields `None` when no further term can be formed. Growth of the term magnitude
/// over the last few terms flags divergence.
pub(crate) fn sum_series<S: Scalar>(
    mut terms: impl FnMut(usize) -> Option<S>,
    tol: &S,
    radius_estimate: Option<S>,
) -> SeriesEval<S> {
    let mut value = S::zero();
    let mut mags: Vec<S> = Vec::new();
    let mut n = 0;
    loop {
        let Some(term) = terms(n) else {
            return SeriesEval {
                value,
                terms_used: n,
                truncation_bound: None,
                radius_estimate,
                status: SeriesStatus::PrefixExhausted,
            };
        };
        let mag = term.abs();
        if n >= MIN_TERMS && mag <= *tol {
            let growing = mags.len() >= 3 && mags[mags.len() - 3..].windows(2).all(|w| w[1] > w[0]);
            return SeriesEval {
                value,
                terms_used: n,
                truncation_bound: Some(mag),
                radius_estimate,
                status: if growing {
                    SeriesStatus::DivergenceWarning
                } else {
                    SeriesStatus::Converged
                },
            };
        }
        if n >= MAX_TERMS {
            return SeriesEval {
                value,
                terms_used: n,
                truncation_bound: Some(mag),
                radius_estimate,
                status: SeriesStatus::MaxTerms,
            };
        }
        value = value + &term;
        if n >= 2 * MIN_TERMS && mags.len() >= 8 {
            let tail = &mags[mags.len() - 8..];
            if tail.windows(2).all(|w| w[1] >= w[0]) && mag >= tail[7] && !tail[0].is_zero() {
                return SeriesEval {
                    value,
                    terms_used: n + 1,
                    truncation_bound: None,
                    radius_estimate,
                    status: SeriesStatus::DivergenceWarning,
                };
            }
        }
        mags.push(mag);
        n += 1;
    }
}

/// Convergence radius of `N`, which equals `lim x_n`.
///
/// Closed forms for the parametric families; for explicit and root-driven prefixes,
/// `x_max` when trailing increments decay geometrically and unbounded otherwise.
pub fn radius_estimate<S: Scalar>(seq: &GenSequence<S>) -> Result<Option<S>> {
    match seq.family() {
        Family::QBracket { q } if *q < S::one() => Ok(Some(S::one() / (S::one() - q))),
        Family::Natural | Family::QBracket { .. } | Family::PowerLog { .. } => Ok(None),
        Family::Explicit | Family::RootDriven { .. } => {
            if increments_decay(seq, seq.max_index())? {
                Ok(Some(seq.x(seq.max_index())?))
            } else {
                Ok(None)
            }
        }
    }
}

/// Fraction of the radius inside which series are evaluated.
pub fn safe_fraction<S: Scalar>() -> S {
    S::ratio(95, 100)
}

fn check_safe_disc<S: Scalar>(t: &S, radius: &Option<S>) -> Result<()> {
    if let Some(r) = radius {
        if t.abs() >= safe_fraction::<S>() * r {
            return Err(Error::Radius {
                t: t.abs().to_string(),
                radius: r.to_string(),
            });
        }
    }
    Ok(())
}

/// Running `t^n / x_n!`, using closed-form terms past the prefix where available.
struct PowerOverFactorial<'a, S: Scalar> {
    seq: &'a GenSequence<S>,
    t: S,
    last: S,
}

impl<'a, S: Scalar> PowerOverFactorial<'a, S> {
    fn new(seq: &'a GenSequence<S>, t: &S) -> Self {
        PowerOverFactorial {
            seq,
            t: t.clone(),
            last: S::one(),
        }
    }

    /// `t^n / x_n!`; must be called with `n = 0, 1, 2, ...` in order.
    fn term(&mut self, n: usize) -> Option<S> {
        if n > 0 {
            let x = self.seq.x(n).ok()?;
            self.last = self.last.clone() * &self.t / &x;
        }
        Some(self.last.clone())
    }
}

/// `N(t)` to tolerance `tol`. Rejects `|t| >= 0.95 R`.
pub fn gen_exp<S: Scalar>(seq: &GenSequence<S>, t: &S, tol: &S) -> Result<SeriesEval<S>> {
    let radius = radius_estimate(seq)?;
    check_safe_disc(t, &radius)?;
    let mut terms = PowerOverFactorial::new(seq, t);
    Ok(sum_series(|n| terms.term(n), tol, radius))
}

/// `1/N(t)` from the inverse series, using `I_0..=I_N` as available.
pub fn gen_exp_inverse<S: Scalar>(
    seq: &GenSequence<S>,
    inv: &InverseCoeffs<S>,
    t: &S,
    tol: &S,
) -> Result<SeriesEval<S>> {
    let radius = radius_estimate(seq)?;
    check_safe_disc(t, &radius)?;
    let limit = inv.max_index().min(seq.max_index());
    let mut terms = PowerOverFactorial::new(seq, t);
    Ok(sum_series(
        |n| {
            if n > limit {
                return None;
            }
            let base = terms.term(n)? * &inv.values[n];
            Some(if n % 2 == 1 { -base } else { base })
        },
        tol,
        radius,
    ))
}

/// Both checks of the product identity.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct ProductIdentityCheck<S: Scalar> {
    pub order: usize,
    /// `sum_{s<=order} p_s(eta) t^s / x_s!` divided by the truncated `N(t)`.
    #[serde(serialize_with = "text::one")]
    pub lhs: S,
    /// `1 / N(eta t)`, truncated at the same order.
    #[serde(serialize_with = "text::one")]
    pub rhs: S,
    #[serde(serialize_with = "text::one")]
    pub residual: S,
    /// `t^m` coefficients of `N(eta t) sum_s p_s(eta) t^s / x_s! - N(t)`, `m = 0..=order`.
    #[serde(serialize_with = "text::many")]
    pub coefficient_residuals: Vec<S>,
    /// Every coefficient residual is zero (exact) or negligible (approximate).
    pub coefficients_vanish: bool,
}

/// Checks `sum_s p_s(eta) t^s / (N(t) x_s!) = 1 / N(eta t)` through `t^order`.
pub fn product_identity_check<S: Scalar>(
    seq: &GenSequence<S>,
    eta: &S,
    t: &S,
    order: usize,
) -> Result<ProductIdentityCheck<S>> {
    seq.range_check(order)?;
    if eta.is_negative() {
        return Err(Error::Domain(format!("eta must be nonnegative, got {eta}")));
    }
    let radius = radius_estimate(seq)?;
    check_safe_disc(t, &radius)?;
    check_safe_disc(&(eta.clone() * t), &radius)?;

    let f = |s: usize| seq.factorial(s);
    let mut p_at = Vec::with_capacity(order + 1);
    for s in 0..=order {
        p_at.push(p_recurrence(seq, s)?.eval(eta));
    }

    let mut coefficient_residuals = Vec::with_capacity(order + 1);
    let mut eta_pow = vec![S::one()];
    for s in 1..=order {
        eta_pow.push(eta_pow[s - 1].clone() * eta);
    }
    let mut vanish = true;
    for m in 0..=order {
        let mut sum = S::zero();
        for s in 0..=m {
            sum = sum + &(p_at[m - s].clone() * &eta_pow[s] / &(f(s)? * &f(m - s)?));
        }
        let target = S::one() / &f(m)?;
        let res = sum - &target;
        vanish &= res.is_negligible(&target);
        coefficient_residuals.push(res);
    }

    let mut n_t = S::zero();
    let mut n_eta_t = S::zero();
    let mut series = S::zero();
    let mut t_pow = S::one();
    for s in 0..=order {
        let base = t_pow.clone() / &f(s)?;
        n_t = n_t + &base;
        n_eta_t = n_eta_t + &(base.clone() * &eta_pow[s]);
        series = series + &(base * &p_at[s]);
        t_pow = t_pow * t;
    }
    let lhs = series / &n_t;
    let rhs = S::one() / &n_eta_t;
    Ok(ProductIdentityCheck {
        order,
        residual: (lhs.clone() - &rhs).abs(),
        lhs,
        rhs,
        coefficients_vanish: vanish,
        coefficient_residuals,
    })
}

/// One row of a limit trace.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct LimitRow<S: Scalar> {
    pub n: usize,
    /// `P_k^(n)(t / x_n)`.
    #[serde(serialize_with = "text::one")]
    pub value: S,
    #[serde(serialize_with = "text::one")]
    pub deviation: S,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct LimitTrace<S: Scalar> {
    #[serde(serialize_with = "text::one")]
    pub t: S,
    pub k: usize,
    pub rows: Vec<LimitRow<S>>,
    /// `t^k / (x_k! N(t))`.
    #[serde(serialize_with = "text::one")]
    pub target: S,
    /// Truncation bound of the `N(t)` series behind the target.
    #[serde(serialize_with = "text::opt")]
    pub target_truncation: Option<S>,
    pub class_s: ClassSReport<S>,
    /// Set when the class-S diagnostic fails at the largest `n`.
    pub warning: Option<String>,
}

impl<S: Scalar> LimitTrace<S> {
    pub fn deviations(&self) -> Vec<S> {
        self.rows.iter().map(|r| r.deviation.clone()).collect()
    }

    /// Deviations strictly decrease over the trailing half of the rows.
    pub fn trailing_decrease(&self) -> bool {
        let d = self.deviations();
        let start = (d.len() / 2).saturating_sub(1);
        d[start..].windows(2).all(|w| w[1] < w[0])
    }
}

/// Evaluates `P_k^(n)(t / x_n)` for each `n` and compares with the Poisson-like target.
pub fn poisson_limit_trace<S: Scalar>(
    seq: &GenSequence<S>,
    t: &S,
    k: usize,
    ns: &[usize],
    tol: &S,
) -> Result<LimitTrace<S>> {
    let n_top = *ns
        .iter()
        .max()
        .ok_or_else(|| Error::Domain("limit trace needs at least one n".into()))?;
    if let Some(&n) = ns.iter().find(|&&n| n < k) {
        return Err(Error::Domain(format!("n = {n} is smaller than k = {k}")));
    }
    seq.range_check(n_top)?;
    let n_t = gen_exp(seq, t, tol)?;
    let target = t.powi(k as u32) / (seq.factorial(k)? * &n_t.value);
    inverse_coeffs(seq, n_top)?;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let x_n = seq.x(n)?;
        let eta = t.clone() / &x_n;
        if eta.is_negative() {
            return Err(Error::Domain(format!("t / x_{n} = {eta} is negative")));
        }
        let value = distribution_entry_fast(seq, n, k, &eta)?;
        rows.push(LimitRow {
            n,
            deviation: (value.clone() - &target).abs(),
            value,
        });
    }
    let class_s = if n_top >= 2 {
        class_s_check(seq, 1, n_top, &S::ratio(1, 100))?
    } else {
        return Err(Error::Domain("limit trace needs some n >= 2".into()));
    };
    let warning = (!class_s.in_class_s()).then(|| {
        format!(
            "class-S diagnostic fails at n = {n_top} (x_(n-1)/x_n = {}); the limit theorem's hypothesis may not hold",
            class_s.last_ratio
        )
    });
    Ok(LimitTrace {
        t: t.clone(),
        k,
        rows,
        target,
        target_truncation: n_t.truncation_bound,
        class_s,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Approx, Exact};

    fn r(n: i64, d: i64) -> Exact {
        Exact::ratio(n, d)
    }

    fn tol() -> Exact {
        r(1, 10i64.pow(18))
    }

    #[test]
    fn exp_at_zero_and_one() {
        let s = GenSequence::<Exact>::natural(40).unwrap();
        let at0 = gen_exp(&s, &r(0, 1), &tol()).unwrap();
        assert_eq!(at0.value, r(1, 1));
        let e = gen_exp(&s, &r(1, 1), &tol()).unwrap();
        assert_eq!(e.status, SeriesStatus::Converged);
        assert!((e.value.to_f64() - std::f64::consts::E).abs() < 1e-15);
        assert!(e.radius_estimate.is_none());
    }

    #[test]
    fn radius_rejection() {
        let s = GenSequence::qbracket(r(4, 5), 10).unwrap();
        match gen_exp(&s, &r(6, 1), &tol()) {
            Err(Error::Radius { radius, .. }) => assert_eq!(radius, "5"),
            other => panic!("expected radius error, got {other:?}"),
        }
        assert!(gen_exp(&s, &r(19, 4), &tol()).is_err());
        assert!(gen_exp(&s, &r(47, 10), &tol()).is_ok());
    }

    #[test]
    fn inverse_series() {
        let s = GenSequence::<Exact>::natural(40).unwrap();
        let inv = inverse_coeffs(&s, 40).unwrap();
        let v = gen_exp_inverse(&s, &inv, &r(1, 1), &tol()).unwrap();
        assert!((v.value.to_f64() - (-1f64).exp()).abs() < 1e-15);

        let q = GenSequence::qbracket(r(4, 5), 60).unwrap();
        let inv = inverse_coeffs(&q, 60).unwrap();
        let n = gen_exp(&q, &r(2, 1), &tol()).unwrap();
        let ni = gen_exp_inverse(&q, &inv, &r(2, 1), &tol()).unwrap();
        let prod = n.value * &ni.value;
        assert!((prod - r(1, 1)).abs() <= tol() * r(2, 1) * r(10, 1));
    }

    #[test]
    fn explicit_prefix_runs_out() {
        let s = GenSequence::explicit(vec![r(0, 1), r(1, 1), r(3, 1), r(7, 1)]).unwrap();
        let v = gen_exp(&s, &r(1, 2), &r(1, 10i64.pow(12))).unwrap();
        assert_eq!(v.status, SeriesStatus::PrefixExhausted);
        assert_eq!(v.terms_used, 4);
    }

    #[test]
    fn identity_exact_zero() {
        let s = GenSequence::qbracket(r(4, 5), 12).unwrap();
        let c = product_identity_check(&s, &r(1, 2), &r(1, 1), 12).unwrap();
        assert!(c.coefficients_vanish);
        assert!(c.coefficient_residuals.iter().all(|v| *v == r(0, 1)));
        let at0 = product_identity_check(&s, &r(0, 1), &r(1, 1), 12).unwrap();
        assert!(at0.coefficients_vanish);
    }

    #[test]
    fn identity_numeric_natural() {
        let s = GenSequence::<Exact>::natural(30).unwrap();
        let c = product_identity_check(&s, &r(1, 2), &r(1, 1), 30).unwrap();
        assert!(c.residual.to_f64() < 1e-25);
        assert!((c.rhs.to_f64() - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn poisson_trace_natural() {
        let s = GenSequence::<Exact>::natural(200).unwrap();
        let tr = poisson_limit_trace(&s, &r(1, 1), 0, &[10, 50, 200], &tol()).unwrap();
        assert!(tr.warning.is_none());
        assert!(tr.trailing_decrease());
        let expected = (1.0f64 - 1.0 / 200.0).powi(200);
        assert!((tr.rows[2].value.to_f64() - expected).abs() < 1e-14);

        let zero = poisson_limit_trace(&s, &r(0, 1), 0, &[10, 20], &tol()).unwrap();
        assert!(zero.rows.iter().all(|row| row.value == r(1, 1)));
        assert_eq!(zero.target, r(1, 1));
    }

    #[test]
    fn poisson_trace_warns_outside_class_s() {
        let s = GenSequence::qbracket(r(5, 4), 30).unwrap();
        let tr = poisson_limit_trace(&s, &r(1, 1), 1, &[10, 20, 30], &tol()).unwrap();
        assert!(tr.warning.is_some());
    }

    #[test]
    fn approx_exp_matches_f64() {
        let s = GenSequence::<Approx>::natural(60).unwrap();
        let v = gen_exp(&s, &Approx::ratio(3, 2), &Approx::ratio(1, 1_000_000_000_000)).unwrap();
        assert!((v.value.to_f64() - 1.5f64.exp()).abs() < 1e-11);
    }
}
