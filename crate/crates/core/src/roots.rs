//! Real-root counting with Sturm sequences and bracketing of the smallest root in (0, 1).
//!
//! Existence of roots is always decided from sign-variation counts; bisection only narrows
//! the bracket once a root is known to be there. In exact mode a bracket that becomes
//! narrow enough is tested for a rational root with the smallest denominator inside it,
//! so rational roots such as `(4/5)^9` are reported exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{text, Scalar};

/// Sturm chain of the square-free part of a polynomial.
#[derive(Clone)]
pub struct SturmChain<S> {
    squarefree: Poly<S>,
    chain: Vec<Poly<S>>,
}

impl<S: Scalar> SturmChain<S> {
    /// Panics on the zero polynomial.
    pub fn new(p: &Poly<S>) -> Self {
        assert!(!p.is_zero(), "Sturm chain of the zero polynomial");
        let deriv = p.derivative();
        let squarefree = if deriv.is_zero() {
            p.clone()
        } else {
            let g = p.gcd(&deriv);
            if g.degree() == Some(0) {
                p.clone()
            } else {
                p.div_rem(&g).0
            }
        };
        let mut chain = vec![squarefree.normalize_abs()];
        let mut next = squarefree.derivative().normalize_abs();
        while !next.is_zero() {
            let (_, r) = chain.last().unwrap().div_rem(&next);
            chain.push(next);
            next = r.scale(&-S::one()).normalize_abs();
        }
        SturmChain { squarefree, chain }
    }

    /// Square-free part; it has the same distinct roots as the input.
    pub fn squarefree(&self) -> &Poly<S> {
        &self.squarefree
    }

    pub fn sign_variations(&self, x: &S) -> usize {
        let mut count = 0;
        let mut last: Option<bool> = None;
        for p in &self.chain {
            let v = p.eval(x);
            if v.is_zero() {
                continue;
            }
            let neg = v.is_negative();
            if last.is_some_and(|l| l != neg) {
                count += 1;
            }
            last = Some(neg);
        }
        count
    }

    /// Number of distinct roots in `(a, b]`. Requires `a` not to be a root.
    pub fn count_half_open(&self, a: &S, b: &S) -> usize {
        self.sign_variations(a)
            .saturating_sub(self.sign_variations(b))
    }

    pub fn is_root(&self, x: &S) -> bool {
        let scale = self
            .squarefree
            .coeffs()
            .iter()
            .fold(S::zero(), |m, c| S::max_of(&m, &c.abs()));
        self.squarefree.eval(x).is_negligible(&scale)
    }

    /// Number of distinct roots in the open interval `(a, b)`. Requires `a` not to be a root.
    pub fn count_open(&self, a: &S, b: &S) -> usize {
        let n = self.count_half_open(a, b);
        if n > 0 && self.is_root(b) {
            n - 1
        } else {
            n
        }
    }
}

/// Interval containing the smallest root of a polynomial in (0, 1).
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct RootBracket<S: Scalar> {
    #[serde(serialize_with = "text::one")]
    pub lo: S,
    #[serde(serialize_with = "text::one")]
    pub hi: S,
    /// `lo == hi` is an exact root.
    pub exact: bool,
    /// The polynomial changes sign across the bracket (false for even multiplicity).
    pub sign_change: bool,
}

/// Result of the smallest-positive-root search.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct RootReport<S: Scalar> {
    pub has_root_in_unit_interval: bool,
    pub smallest_root: Option<RootBracket<S>>,
    /// Distinct roots in the open interval (0, 1).
    pub sturm_count: usize,
    pub root_at_one: bool,
}

impl<S: Scalar> RootReport<S> {
    /// Smallest root in (0, 1]: the exact root, else the lower end of its bracket,
    /// else 1 when the only root in (0, 1] is at 1, else `None`.
    pub fn smallest_in_half_open(&self) -> Option<S> {
        match &self.smallest_root {
            Some(b) => Some(b.lo.clone()),
            None if self.root_at_one => Some(S::one()),
            None => None,
        }
    }
}

/// Brackets the smallest root of `p` in the open interval (0, 1) to within `width`.
pub fn smallest_positive_root<S: Scalar>(p: &Poly<S>, width: &S) -> Result<RootReport<S>> {
    if !width.is_positive() {
        return Err(Error::Domain(format!("bracket width must be positive, got {width}")));
    }
    if p.is_zero() {
        return Err(Error::Domain("zero polynomial has no isolated roots".into()));
    }
    let zero = S::zero();
    let one = S::one();
    let chain = SturmChain::new(p);
    if chain.is_root(&zero) {
        return Err(Error::Domain("polynomial vanishes at 0".into()));
    }
    let root_at_one = chain.is_root(&one);
    let sturm_count = chain.count_open(&zero, &one);
    if sturm_count == 0 {
        return Ok(RootReport {
            has_root_in_unit_interval: false,
            smallest_root: None,
            sturm_count,
            root_at_one,
        });
    }

    let sf = chain.squarefree();
    let mut lo = zero;
    let mut hi = one;
    let mut exact_root: Option<S> = None;
    let mut step = 0usize;
    while hi.clone() - &lo > *width {
        let mid = (lo.clone() + &hi).half();
        if S::is_exact() && sf.eval(&mid).is_zero() && chain.count_half_open(&lo, &mid) == 1 {
            exact_root = Some(mid);
            break;
        }
        if chain.count_half_open(&lo, &mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        step += 1;
        if S::is_exact() && step.is_multiple_of(4) {
            if let Some(c) = rational_root_in(&chain, &lo, &hi) {
                exact_root = Some(c);
                break;
            }
        }
    }
    if exact_root.is_none() && S::is_exact() {
        exact_root = rational_root_in(&chain, &lo, &hi);
    }

    let bracket = match exact_root {
        Some(r) => RootBracket {
            lo: r.clone(),
            hi: r,
            exact: true,
            sign_change: true,
        },
        None => {
            let (plo, phi) = (p.eval(&lo), p.eval(&hi));
            RootBracket {
                sign_change: plo.is_positive() != phi.is_positive()
                    || plo.is_zero()
                    || phi.is_zero(),
                lo,
                hi,
                exact: false,
            }
        }
    };
    Ok(RootReport {
        has_root_in_unit_interval: true,
        smallest_root: Some(bracket),
        sturm_count,
        root_at_one,
    })
}

/// The simplest rational in `[lo, hi]`, if it is the only root of the chain in `(lo, c]`.
fn rational_root_in<S: Scalar>(chain: &SturmChain<S>, lo: &S, hi: &S) -> Option<S> {
    let c = S::simplest_between(lo, hi)?;
    if &c == lo || !chain.squarefree().eval(&c).is_zero() {
        return None;
    }
    (chain.count_half_open(lo, &c) == 1).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Approx, Exact};

    fn r(n: i64, d: i64) -> Exact {
        Exact::ratio(n, d)
    }

    #[test]
    fn counts_distinct_roots() {
        // (1 - 2x)^2 (1 - 3x)(1 - x)
        let p = Poly::from_reciprocal_roots(&[r(2, 1), r(2, 1), r(3, 1), r(1, 1)]);
        let chain = SturmChain::new(&p);
        assert_eq!(chain.count_half_open(&r(0, 1), &r(1, 1)), 3);
        assert_eq!(chain.count_open(&r(0, 1), &r(1, 1)), 2);
        assert_eq!(chain.count_open(&r(0, 1), &r(2, 5)), 1);
    }

    #[test]
    fn boundary_root_only() {
        let p = Poly::one_minus(r(1, 1));
        let rep = smallest_positive_root(&p, &r(1, 1000)).unwrap();
        assert!(!rep.has_root_in_unit_interval);
        assert!(rep.root_at_one);
        assert!(rep.smallest_root.is_none());
        assert_eq!(rep.smallest_in_half_open(), Some(r(1, 1)));
    }

    #[test]
    fn finds_rational_root_exactly() {
        let p = Poly::from_reciprocal_roots(&[r(1, 1), r(5, 4), r(25, 16), r(125, 64)]);
        let rep = smallest_positive_root(&p, &r(1, 1 << 40)).unwrap();
        let b = rep.smallest_root.unwrap();
        assert!(b.exact);
        assert_eq!(b.lo, r(64, 125));
        assert_eq!(rep.sturm_count, 3);
    }

    #[test]
    fn brackets_irrational_root() {
        // 1 - 2x^2 has root 1/sqrt(2)
        let p = Poly::new(vec![r(1, 1), r(0, 1), r(-2, 1)]);
        let rep = smallest_positive_root(&p, &r(1, 1 << 30)).unwrap();
        let b = rep.smallest_root.unwrap();
        assert!(!b.exact && b.sign_change);
        assert!(b.hi.clone() - &b.lo <= r(1, 1 << 30));
        let root = std::f64::consts::FRAC_1_SQRT_2;
        assert!(b.lo.to_f64() <= root && root <= b.hi.to_f64());
    }

    #[test]
    fn double_root_has_no_sign_change() {
        let p = Poly::from_reciprocal_roots(&[r(3, 1), r(3, 1)]);
        let rep = smallest_positive_root(&p, &r(1, 1 << 20)).unwrap();
        let b = rep.smallest_root.unwrap();
        assert_eq!(b.lo, r(1, 3));
        assert!(b.exact);
    }

    #[test]
    fn rejects_bad_width() {
        let p = Poly::one_minus(r(2, 1));
        assert!(matches!(smallest_positive_root(&p, &r(0, 1)), Err(Error::Domain(_))));
    }

    #[test]
    fn approx_mode_brackets() {
        let roots: Vec<Approx> = [1, 2, 4].iter().map(|&a| Approx::from_int(a)).collect();
        let p = Poly::from_reciprocal_roots(&roots);
        let rep = smallest_positive_root(&p, &Approx::ratio(1, 1 << 20)).unwrap();
        let b = rep.smallest_root.unwrap();
        assert_eq!(rep.sturm_count, 2);
        assert!((b.lo.to_f64() - 0.25).abs() < 1e-6);
    }
}
