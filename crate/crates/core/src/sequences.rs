//! Generalized sequences `X = (x_0, x_1, ...)` with `x_0 = 0`, `x_1 = 1`, their
//! factorials `x_n! = x_1 ... x_n` and binomials `x_n! / (x_k! x_{n-k}!)`.
//!
//! A [`GenSequence`] materializes a finite prefix `x_0..=x_max`. Parametric families can
//! still evaluate single terms past the prefix through [`GenSequence::x`]; factorials,
//! binomials and everything built on them are restricted to the prefix.

use std::fmt;
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::reconstruction::{self, RootSequence};
use crate::scalar::{text, Scalar};

/// How the terms of a sequence are produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Family<S: Scalar> {
    /// `x_n = n`.
    Natural,
    /// `x_n = [n]_q = 1 + q + ... + q^(n-1)`.
    QBracket { q: S },
    /// A user-supplied list.
    Explicit,
    /// `x_n = n^alpha (1 + ln n)^beta`. The shift inside the logarithm keeps `x_1 = 1`.
    PowerLog { alpha: S, beta: S },
    /// Built from a root sequence by the inverse construction.
    RootDriven { roots: RootSequence<S> },
}

impl<S: Scalar> fmt::Display for Family<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Natural => write!(f, "natural"),
            Family::QBracket { q } => write!(f, "qbracket(q={q})"),
            Family::Explicit => write!(f, "explicit"),
            Family::PowerLog { alpha, beta } => write!(f, "power-log(alpha={alpha}, beta={beta})"),
            Family::RootDriven { roots } => {
                let a: Vec<String> = roots.values().iter().map(|v| v.to_string()).collect();
                write!(f, "root-driven(a=[{}])", a.join(", "))
            }
        }
    }
}

/// A materialized prefix `x_0..=x_max` of a generalized sequence.
///
/// Polynomials `p_n` and inverse coefficients `I_n` derived from the sequence are memoized
/// here; the memo tables are behind mutexes so a shared sequence can be read concurrently.
pub struct GenSequence<S: Scalar> {
    family: Family<S>,
    values: Vec<S>,
    factorials: Vec<S>,
    pub(crate) poly_memo: Mutex<Vec<Poly<S>>>,
    pub(crate) inverse_memo: Mutex<Vec<S>>,
}

impl<S: Scalar> Clone for GenSequence<S> {
    fn clone(&self) -> Self {
        GenSequence {
            family: self.family.clone(),
            values: self.values.clone(),
            factorials: self.factorials.clone(),
            poly_memo: Mutex::new(self.poly_memo.lock().unwrap().clone()),
            inverse_memo: Mutex::new(self.inverse_memo.lock().unwrap().clone()),
        }
    }
}

impl<S: Scalar> fmt::Debug for GenSequence<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GenSequence")
            .field("family", &self.family.to_string())
            .field("max_index", &self.max_index())
            .finish()
    }
}

fn power_log_term<S: Scalar>(n: usize, alpha: &S, beta: &S) -> Result<S> {
    if n == 0 {
        return Ok(S::zero());
    }
    let nn = S::from_int(n as i64);
    let base = match integer_exponent(alpha) {
        Some(e) => nn.powi(e),
        None => nn
            .powf(alpha)
            .ok_or(Error::NeedsApprox("a non-integer power-log exponent"))?,
    };
    if beta.is_zero() || n == 1 {
        return Ok(base);
    }
    let log = (S::one() + nn.ln().ok_or(Error::NeedsApprox("a power-log family with beta != 0"))?)
        .powf(beta)
        .ok_or(Error::NeedsApprox("a power-log family with beta != 0"))?;
    Ok(base * log)
}

fn integer_exponent<S: Scalar>(value: &S) -> Option<u32> {
    if !S::is_exact() {
        return None;
    }
    (0..=64u32).find(|&e| S::from_int(e as i64) == *value)
}

impl<S: Scalar> GenSequence<S> {
    fn from_parts(family: Family<S>, values: Vec<S>) -> Self {
        let mut factorials = Vec::with_capacity(values.len());
        factorials.push(S::one());
        for x in values.iter().skip(1) {
            let next = factorials.last().unwrap().clone() * x;
            factorials.push(next);
        }
        GenSequence {
            family,
            values,
            factorials,
            poly_memo: Mutex::new(Vec::new()),
            inverse_memo: Mutex::new(Vec::new()),
        }
    }

    fn check_max_index(max_index: usize) -> Result<()> {
        if max_index == 0 {
            return Err(Error::InvalidSequence("max_index must be at least 1".into()));
        }
        Ok(())
    }

    pub fn natural(max_index: usize) -> Result<Self> {
        Self::check_max_index(max_index)?;
        let values = (0..=max_index).map(|n| S::from_int(n as i64)).collect();
        Ok(Self::from_parts(Family::Natural, values))
    }

    /// Rejects `q <= 0` and `q = 1` (the `q -> 1` limit is [`GenSequence::natural`]).
    pub fn qbracket(q: S, max_index: usize) -> Result<Self> {
        Self::check_max_index(max_index)?;
        if !q.is_positive() {
            return Err(Error::InvalidSequence(format!("q must be positive, got {q}")));
        }
        if q == S::one() {
            return Err(Error::InvalidSequence(
                "q = 1 is the natural family; use `natural` instead".into(),
            ));
        }
        let mut values = vec![S::zero()];
        for _ in 1..=max_index {
            // [n]_q = q [n-1]_q + 1
            let next = values.last().unwrap().clone() * &q + &S::one();
            values.push(next);
        }
        Ok(Self::from_parts(Family::QBracket { q }, values))
    }

    /// Validates `x_0 = 0`, `x_1 = 1` and strict increase.
    pub fn explicit(values: Vec<S>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidSequence(
                "an explicit sequence needs at least x_0 and x_1".into(),
            ));
        }
        if !values[0].is_zero() {
            return Err(Error::InvalidSequence(format!("x_0 must be 0, got {}", values[0])));
        }
        if values[1] != S::one() {
            return Err(Error::InvalidSequence(format!("x_1 must be 1, got {}", values[1])));
        }
        if let Some(n) = (1..values.len()).find(|&n| values[n] <= values[n - 1]) {
            return Err(Error::InvalidSequence(format!(
                "not strictly increasing at n = {n}: x_{n} = {} <= x_{} = {}",
                values[n],
                n - 1,
                values[n - 1]
            )));
        }
        Ok(Self::from_parts(Family::Explicit, values))
    }

    /// `x_n = n^alpha (1 + ln n)^beta` with `alpha > 0`, `beta >= 0`.
    ///
    /// Needs an approximate scalar unless `beta = 0` and `alpha` is a small integer.
    pub fn power_log(alpha: S, beta: S, max_index: usize) -> Result<Self> {
        Self::check_max_index(max_index)?;
        if !alpha.is_positive() || beta.is_negative() {
            return Err(Error::InvalidSequence(format!(
                "power-log needs alpha > 0 and beta >= 0, got alpha = {alpha}, beta = {beta}"
            )));
        }
        let values = (0..=max_index)
            .map(|n| power_log_term(n, &alpha, &beta))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(Family::PowerLog { alpha, beta }, values))
    }

    /// Runs the inverse construction for `x_2..=x_N`, `N = roots.len() + 1`.
    ///
    /// The result is not required to be increasing; see
    /// [`reconstruction::conjecture_probe`] for the monotonicity report.
    pub fn root_driven(roots: RootSequence<S>) -> Result<Self> {
        let state = reconstruction::reconstruct_closed_form(&roots, roots.len() + 1)?;
        let values = state.x().to_vec();
        Ok(Self::from_parts(Family::RootDriven { roots }, values))
    }

    pub fn family(&self) -> &Family<S> {
        &self.family
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// The materialized prefix `x_0..=x_max`.
    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub(crate) fn range_check(&self, n: usize) -> Result<()> {
        if n > self.max_index() {
            return Err(Error::Range {
                index: n,
                max_index: self.max_index(),
            });
        }
        Ok(())
    }

    /// `x_n`. Parametric families evaluate past the prefix by their closed form.
    pub fn x(&self, n: usize) -> Result<S> {
        if let Some(v) = self.values.get(n) {
            return Ok(v.clone());
        }
        match &self.family {
            Family::Natural => Ok(S::from_int(n as i64)),
            Family::QBracket { q } => Ok((S::one() - q.powi(n as u32)) / (S::one() - q)),
            Family::PowerLog { alpha, beta } => power_log_term(n, alpha, beta),
            Family::Explicit | Family::RootDriven { .. } => {
                self.range_check(n)?;
                unreachable!()
            }
        }
    }

    /// `x_n! = x_1 x_2 ... x_n`, with `x_0! = 1`.
    pub fn factorial(&self, n: usize) -> Result<S> {
        self.range_check(n)?;
        Ok(self.factorials[n].clone())
    }

    /// `x_n! / (x_k! x_{n-k}!)`.
    pub fn binomial(&self, n: usize, k: usize) -> Result<S> {
        self.range_check(n)?;
        if k > n {
            return Err(Error::Domain(format!("binomial index k = {k} exceeds n = {n}")));
        }
        Ok(self.factorials[n].clone() / &(self.factorials[k].clone() * &self.factorials[n - k]))
    }

    /// `y_n = x_n / n` over the prefix.
    pub fn ratio_sequence(&self) -> RatioSequence<S> {
        let mut y = vec![S::zero()];
        y.extend(
            self.values
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, x)| x.clone() / S::from_int(n as i64)),
        );
        RatioSequence { y }
    }
}

/// Free-function form of [`GenSequence::factorial`].
pub fn gen_factorial<S: Scalar>(seq: &GenSequence<S>, n: usize) -> Result<S> {
    seq.factorial(n)
}

/// Free-function form of [`GenSequence::binomial`].
pub fn gen_binomial<S: Scalar>(seq: &GenSequence<S>, n: usize, k: usize) -> Result<S> {
    seq.binomial(n, k)
}

/// `y_0 = 0`, `y_n = x_n / n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct RatioSequence<S: Scalar> {
    #[serde(serialize_with = "text::many")]
    pub y: Vec<S>,
}

impl<S: Scalar> RatioSequence<S> {
    /// `y_n! = y_1 ... y_n`, with `y_0! = 1`.
    pub fn factorial(&self, n: usize) -> S {
        self.y[1..=n]
            .iter()
            .fold(S::one(), |acc, y| acc * y)
    }

    /// `y_n! / (y_k! y_{n-k}!)`.
    pub fn binomial(&self, n: usize, k: usize) -> S {
        self.factorial(n) / (self.factorial(k) * self.factorial(n - k))
    }
}

/// Finite-horizon look at `x_{n-m} / x_n -> 1`.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct ClassSReport<S: Scalar> {
    pub m: usize,
    pub n_max: usize,
    /// `x_{n_max - m} / x_{n_max}`.
    #[serde(serialize_with = "text::one")]
    pub last_ratio: S,
    pub within_tolerance: bool,
    /// `|1 - ratio|` strictly decreases across the trailing window.
    pub deviation_shrinking: bool,
    /// `within_tolerance && deviation_shrinking`.
    pub converges: bool,
    /// Trailing increments do not decay geometrically, so `x_n` looks unbounded.
    pub appears_unbounded: bool,
    /// `(n, x_{n-m} / x_n)` over the trailing window.
    pub window: Vec<(usize, String)>,
}

impl<S: Scalar> ClassSReport<S> {
    /// Both class-S conditions look satisfied at this horizon.
    pub fn in_class_s(&self) -> bool {
        self.converges && self.appears_unbounded
    }
}

const WINDOW: usize = 8;

fn window_indices(lo: usize, n_max: usize) -> Vec<usize> {
    let span = n_max - lo;
    let step = (span / (2 * WINDOW)).max(1);
    let mut ns: Vec<usize> = (0..WINDOW)
        .map(|j| n_max.saturating_sub(j * step))
        .filter(|&n| n > lo)
        .collect();
    ns.dedup();
    ns.reverse();
    ns
}

/// Ratio of successive increments above which a sequence is treated as unbounded.
const GEOMETRIC_DECAY: f64 = 0.99;

/// Whether trailing increments `x_n - x_{n-1}` decay at least geometrically.
pub(crate) fn increments_decay<S: Scalar>(seq: &GenSequence<S>, n_max: usize) -> Result<bool> {
    if n_max < 3 {
        return Ok(false);
    }
    let lo = n_max.saturating_sub(WINDOW).max(2);
    let mut prev: Option<S> = None;
    for n in lo..=n_max {
        let gap = seq.x(n)? - &seq.x(n - 1)?;
        if !gap.is_positive() {
            return Ok(false);
        }
        if let Some(p) = prev {
            if (gap.clone() / &p).to_f64() > GEOMETRIC_DECAY {
                return Ok(false);
            }
        }
        prev = Some(gap);
    }
    Ok(true)
}

pub fn class_s_check<S: Scalar>(
    seq: &GenSequence<S>,
    m: usize,
    n_max: usize,
    eps: &S,
) -> Result<ClassSReport<S>> {
    if m == 0 || n_max <= m {
        return Err(Error::Domain(format!("class-S check needs 1 <= m < n_max, got m = {m}, n_max = {n_max}")));
    }
    let ns = window_indices(m, n_max);
    let mut ratios = Vec::with_capacity(ns.len());
    for &n in &ns {
        let xn = seq.x(n)?;
        if xn.is_zero() {
            return Err(Error::Domain(format!("x_{n} = 0")));
        }
        ratios.push(seq.x(n - m)? / &xn);
    }
    let devs: Vec<S> = ratios.iter().map(|r| (S::one() - r).abs()).collect();
    let last_ratio = ratios.last().unwrap().clone();
    let within_tolerance = *devs.last().unwrap() <= *eps;
    let deviation_shrinking = devs.len() >= 2 && devs.windows(2).all(|w| w[1] < w[0]);
    Ok(ClassSReport {
        m,
        n_max,
        within_tolerance,
        deviation_shrinking,
        converges: within_tolerance && deviation_shrinking,
        appears_unbounded: !increments_decay(seq, n_max)?,
        window: ns.iter().zip(&ratios).map(|(n, r)| (*n, r.to_string())).collect(),
        last_ratio,
    })
}

/// Finite-prefix Delone diagnostics on the gaps `x_{n+1} - x_n`.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct DeloneReport<S: Scalar> {
    pub is_uniformly_discrete: bool,
    /// Smallest gap on the prefix.
    #[serde(serialize_with = "text::one")]
    pub r: S,
    pub is_relatively_dense: bool,
    /// Largest gap on the prefix.
    #[serde(serialize_with = "text::one")]
    pub l: S,
    pub checked_prefix: usize,
    /// `(x_n - x_{n-1}) / n` at the horizon.
    #[serde(serialize_with = "text::one")]
    pub gap_over_n: S,
    /// `(x_n - x_{n-1}) / x_n` at the horizon.
    #[serde(serialize_with = "text::one")]
    pub gap_over_x: S,
}

pub fn delone_check<S: Scalar>(seq: &GenSequence<S>, n_max: usize) -> Result<DeloneReport<S>> {
    if n_max < 2 {
        return Err(Error::Domain(format!("Delone check needs n_max >= 2, got {n_max}")));
    }
    let mut xs = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        xs.push(seq.x(n)?);
    }
    let gaps: Vec<S> = xs.windows(2).map(|w| w[1].clone() - &w[0]).collect();
    let fold = |slice: &[S], pick: fn(&S, &S) -> S| {
        slice[1..].iter().fold(slice[0].clone(), |acc, g| pick(&acc, g))
    };
    let r = fold(&gaps, S::min_of);
    let l = fold(&gaps, S::max_of);
    // Compare the last quarter of the gaps with the quarter before it.
    let len = gaps.len();
    let q = (len / 4).max(1);
    let tail = &gaps[len - q..];
    let mid = &gaps[len.saturating_sub(2 * q)..len - q];
    let (shrinking, growing) = if mid.is_empty() {
        (false, false)
    } else {
        let ratio_min = (fold(tail, S::min_of) / fold(mid, S::min_of)).to_f64();
        let ratio_max = (fold(tail, S::max_of) / fold(mid, S::max_of)).to_f64();
        (ratio_min < 0.9, ratio_max > 1.1)
    };
    let last_gap = gaps[len - 1].clone();
    Ok(DeloneReport {
        is_uniformly_discrete: r.is_positive() && !shrinking,
        is_relatively_dense: !growing,
        checked_prefix: n_max,
        gap_over_n: last_gap.clone() / S::from_int(n_max as i64),
        gap_over_x: last_gap / &xs[n_max],
        r,
        l,
    })
}
