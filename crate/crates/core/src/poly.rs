//! Dense univariate polynomials over a [`Scalar`], lowest degree first.

use std::fmt;

use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    /// Builds a polynomial, dropping trailing zero coefficients.
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Poly::new(vec![c])
    }

    /// `1 - a x`
    pub fn one_minus(a: S) -> Self {
        Poly::new(vec![S::one(), -a])
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&S> {
        self.coeffs.last()
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn eval(&self, x: &S) -> S {
        eval_coeffs(&self.coeffs, x)
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * S::from_int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, factor: &S) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + &other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - &other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + &(a.clone() * b);
            }
        }
        Poly::new(out)
    }

    fn max_abs(&self) -> S {
        self.coeffs
            .iter()
            .fold(S::zero(), |m, c| S::max_of(&m, &c.abs()))
    }

    /// Euclidean division. In approximate mode, remainder coefficients negligible relative
    /// to the dividend are dropped.
    ///
    /// Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dlead = divisor.lead().expect("division by the zero polynomial").clone();
        let ddeg = divisor.coeffs.len() - 1;
        let scale = self.max_abs();
        let mut rem = self.coeffs.clone();
        if rem.len() <= ddeg {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![S::zero(); rem.len() - ddeg];
        while rem.len() > ddeg {
            let top = rem.len() - 1;
            let factor = rem[top].clone() / &dlead;
            let shift = top - ddeg;
            for (j, d) in divisor.coeffs.iter().enumerate().take(ddeg) {
                rem[shift + j] = rem[shift + j].clone() - &(factor.clone() * d);
            }
            rem.pop();
            quot[shift] = factor;
            while rem.last().is_some_and(|c| c.is_negligible(&scale)) {
                rem.pop();
            }
        }
        for c in rem.iter_mut() {
            if c.is_negligible(&scale) {
                *c = S::zero();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Scales so that the leading coefficient has absolute value one (sign preserved).
    pub fn normalize_abs(&self) -> Self {
        match self.lead() {
            Some(lead) => {
                let l = lead.abs();
                Poly::new(self.coeffs.iter().map(|c| c.clone() / &l).collect())
            }
            None => Poly::zero(),
        }
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(lead) => {
                let l = lead.clone();
                Poly::new(self.coeffs.iter().map(|c| c.clone() / &l).collect())
            }
            None => Poly::zero(),
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Product of `(1 - a x)` over the given `a`s.
    pub fn from_reciprocal_roots<'a, I>(roots: I) -> Self
    where
        I: IntoIterator<Item = &'a S>,
    {
        roots
            .into_iter()
            .fold(Poly::one(), |acc, a| acc.mul(&Poly::one_minus(a.clone())))
    }
}

/// Horner evaluation of a coefficient slice (lowest degree first).
pub fn eval_coeffs<S: Scalar>(coeffs: &[S], x: &S) -> S {
    coeffs
        .iter()
        .rev()
        .fold(S::zero(), |acc, c| acc * x + c)
}

impl<S: Scalar> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.coeffs.iter().map(|c| c.to_string()))
            .finish()
    }
}
