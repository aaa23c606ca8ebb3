//! The distribution row `P_k^(n)(eta) = binom(x_n, x_k) eta^k p_{n-k}(eta)`, the weights
//! `w_{n,k}(eta) = y_n! / (y_{n-k}! y_k!) p_{n-k}(eta)` with `y_n = x_n / n`, and a seeded
//! sampler.
//!
//! Rows are returned as computed, negative entries included; only the sampler insists on
//! a genuine probability vector.

use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polynomials::{binomial_row, eta_max, p_recurrence, p_value};
use crate::scalar::{text, Scalar};
use crate::sequences::GenSequence;

/// `P_0^(n)(eta), ..., P_n^(n)(eta)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct DistributionRow<S: Scalar> {
    pub n: usize,
    #[serde(serialize_with = "text::one")]
    pub eta: S,
    #[serde(serialize_with = "text::many")]
    pub probs: Vec<S>,
}

impl<S: Scalar> DistributionRow<S> {
    pub fn sum(&self) -> S {
        self.probs.iter().fold(S::zero(), |acc, p| acc + p)
    }

    pub fn has_negative_entry(&self) -> bool {
        self.probs.iter().any(|p| p.is_negative())
    }
}

/// The full row at `eta`. Any `eta` is accepted; the row sums to one regardless.
pub fn distribution_row<S: Scalar>(
    seq: &GenSequence<S>,
    n: usize,
    eta: &S,
) -> Result<DistributionRow<S>> {
    seq.range_check(n)?;
    let binom = binomial_row(seq, n);
    let mut probs = Vec::with_capacity(n + 1);
    let mut eta_pow = S::one();
    for (k, b) in binom.iter().enumerate() {
        let p = p_recurrence(seq, n - k)?.eval(eta);
        probs.push(b.clone() * &eta_pow * p);
        eta_pow = eta_pow * eta;
    }
    Ok(DistributionRow {
        n,
        eta: eta.clone(),
        probs,
    })
}

/// A single entry `P_k^(n)(eta)`, evaluating `p_{n-k}` from the `I` coefficients.
///
/// Suited to large `n`, where building the whole recurrence table is too slow.
pub fn distribution_entry_fast<S: Scalar>(
    seq: &GenSequence<S>,
    n: usize,
    k: usize,
    eta: &S,
) -> Result<S> {
    seq.range_check(n)?;
    if k > n {
        return Err(Error::Domain(format!("k = {k} exceeds n = {n}")));
    }
    Ok(seq.binomial(n, k)? * eta.powi(k as u32) * p_value(seq, n - k, eta)?)
}

/// `w_{n,k}(eta)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct CorrelationWeight<S: Scalar> {
    pub n: usize,
    pub k: usize,
    #[serde(serialize_with = "text::one")]
    pub eta: S,
    #[serde(serialize_with = "text::one")]
    pub value: S,
}

pub fn correlation_weight<S: Scalar>(
    seq: &GenSequence<S>,
    n: usize,
    k: usize,
    eta: &S,
) -> Result<CorrelationWeight<S>> {
    seq.range_check(n)?;
    if k > n {
        return Err(Error::Domain(format!("k = {k} exceeds n = {n}")));
    }
    let y = seq.ratio_sequence();
    let value = y.binomial(n, k) * p_recurrence(seq, n - k)?.eval(eta);
    Ok(CorrelationWeight {
        n,
        k,
        eta: eta.clone(),
        value,
    })
}

/// `(eta, w_{n,0}(eta), (1 - eta)^n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct LossRow<S: Scalar> {
    #[serde(serialize_with = "text::one")]
    pub eta: S,
    #[serde(serialize_with = "text::one")]
    pub varpi: S,
    #[serde(serialize_with = "text::one")]
    pub bernoulli: S,
}

/// Compares the probability of `n` straight losses with its undeformed value.
pub fn loss_run_comparison<S: Scalar>(
    seq: &GenSequence<S>,
    n: usize,
    grid: &[S],
) -> Result<Vec<LossRow<S>>> {
    seq.range_check(n)?;
    let p = p_recurrence(seq, n)?;
    grid.iter()
        .map(|eta| {
            if eta.is_negative() || *eta > S::one() {
                return Err(Error::Domain(format!("grid point {eta} is outside [0, 1]")));
            }
            Ok(LossRow {
                eta: eta.clone(),
                varpi: p.eval(eta),
                bernoulli: (S::one() - eta).powi(n as u32),
            })
        })
        .collect()
}

/// Counts of `k = 0..=n` over the draws.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub n: usize,
    pub draws: u64,
    pub seed: u64,
    pub counts: Vec<u64>,
}

/// Uniform `[0, 1)` variates as exact multiples of `2^-53`.
const MANTISSA_BITS: u32 = 53;

/// Draws `draws` samples of `k` from the row by inverse CDF.
///
/// The generator is xoshiro256** seeded through SplitMix64 (`seed_from_u64`); each uniform
/// is `(next_u64 >> 11) / 2^53`, compared exactly against the cumulative row.
pub fn sample_trials<S: Scalar>(
    seq: &GenSequence<S>,
    n: usize,
    eta: &S,
    draws: u64,
    seed: u64,
) -> Result<Histogram> {
    let row = distribution_row(seq, n, eta)?;
    if eta.is_negative() || row.has_negative_entry() {
        return Err(Error::NotAProbability {
            n,
            eta: eta.to_string(),
            eta_max: eta_max(seq, n)?.to_string(),
        });
    }
    let mut cdf = Vec::with_capacity(n + 1);
    let mut acc = S::zero();
    for p in &row.probs {
        acc = acc + p;
        cdf.push(acc.clone());
    }
    let scale = S::from_int(1i64 << MANTISSA_BITS);
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let mut counts = vec![0u64; n + 1];
    for _ in 0..draws {
        let bits = rng.next_u64() >> (64 - MANTISSA_BITS);
        let u = S::from_int(bits as i64) / &scale;
        let k = cdf.iter().position(|c| u < *c).unwrap_or(n);
        counts[k] += 1;
    }
    Ok(Histogram {
        n,
        draws,
        seed,
        counts,
    })
}
