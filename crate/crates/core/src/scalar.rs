//! The arithmetic policy shared by the whole crate.
//!
//! Every formula is written against the [`Scalar`] trait. Two implementations exist:
//!
//! - [`Exact`]: arbitrary-size rationals. Arithmetic is closed and exact, so identities
//!   become zero-residual checks. This is the default everywhere.
//! - [`Approx`]: binary floating point with a configurable precision in bits (256 by
//!   default). Needed for irrational sequence families such as `n^a (1 + ln n)^b`.
//!
//! Textual form: exact values print as `p/q` in lowest terms (or `p` for integers);
//! approximate values print as a decimal followed by `@bits`, e.g. `0.3333@256`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Exact = BigRational;

/// Arithmetic mode tag of a scalar value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Approx { bits: u32 },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Approx { bits } => write!(f, "approx({bits} bits)"),
        }
    }
}

/// A real-number type the library can compute with.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    /// Whether arithmetic in this type is exact.
    fn is_exact() -> bool;

    fn mode(&self) -> Mode;

    fn from_rational(value: &BigRational) -> Self;

    fn parse(text: &str) -> Result<Self>;

    fn to_f64(&self) -> f64;

    /// Relative comparison tolerance. Zero in exact mode.
    fn tolerance(&self) -> Self;

    fn from_int(value: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(value)))
    }

    fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    /// `|self| <= tolerance * |scale|`; plain zero test in exact mode.
    fn is_negligible(&self, scale: &Self) -> bool {
        if Self::is_exact() {
            self.is_zero()
        } else {
            self.abs() <= self.tolerance() * scale.abs()
        }
    }

    /// Equality under the mode's comparison policy (bit-exact for [`Exact`]).
    fn approx_eq(&self, other: &Self) -> bool {
        if Self::is_exact() {
            return self == other;
        }
        let scale = {
            let (a, b) = (self.abs(), other.abs());
            let m = if a > b { a } else { b };
            if m < Self::one() {
                Self::one()
            } else {
                m
            }
        };
        let tol = Self::max_of(&self.tolerance(), &other.tolerance());
        (self.clone() - other).abs() <= tol * scale
    }

    fn powi(&self, exp: u32) -> Self {
        let mut base = self.clone();
        let mut result = Self::one();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        result
    }

    fn half(&self) -> Self {
        self.clone() / Self::from_int(2)
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Natural logarithm; `None` when not representable in this mode.
    fn ln(&self) -> Option<Self> {
        None
    }

    fn exp(&self) -> Option<Self> {
        None
    }

    fn powf(&self, _exp: &Self) -> Option<Self> {
        None
    }

    /// The rational with the smallest denominator in `[lo, hi]` (exact mode only).
    fn simplest_between(_lo: &Self, _hi: &Self) -> Option<Self> {
        None
    }
}

// ---------------------------------------------------------------------------
// parsing

/// Parses `"4/5"`, `"-3"`, `"0.8"`, `"1.25e-3"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let token = text.trim();
    let err = |reason: &str| Error::Parse {
        token: token.to_string(),
        reason: reason.to_string(),
    };
    if token.is_empty() {
        return Err(err("empty input"));
    }
    if let Some((num, den)) = token.split_once('/') {
        let num: BigInt = parse_integer(num.trim()).ok_or_else(|| err("bad numerator"))?;
        let den: BigInt = parse_integer(den.trim()).ok_or_else(|| err("bad denominator"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }

    let (mantissa, exponent) = match token.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = token[pos + 1..]
                .parse()
                .map_err(|_| err("bad exponent"))?;
            (&token[..pos], exp)
        }
        None => (token, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err("no digits"));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err("not a decimal or fraction"));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = all_digits.parse().map_err(|_| err("not a number"))?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let body = text.strip_prefix(['-', '+']).unwrap_or(text);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// Simplest rational (smallest denominator, then smallest numerator) in `[lo, hi]`, `0 <= lo <= hi`.
fn simplest_rational(lo: &BigRational, hi: &BigRational) -> BigRational {
    debug_assert!(!Signed::is_negative(lo) && lo <= hi);
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = fl.clone() + BigRational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_rational(
        &(hi.clone() - &fl).recip(),
        &(lo.clone() - &fl).recip(),
    );
    fl + inner.recip()
}

impl Scalar for BigRational {
    fn is_exact() -> bool {
        true
    }

    fn mode(&self) -> Mode {
        Mode::Exact
    }

    fn from_rational(value: &BigRational) -> Self {
        value.clone()
    }

    fn parse(text: &str) -> Result<Self> {
        parse_rational(text)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn tolerance(&self) -> Self {
        BigRational::zero()
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }

    fn simplest_between(lo: &Self, hi: &Self) -> Option<Self> {
        if lo > hi {
            return None;
        }
        if Signed::is_negative(hi) {
            return Some(-simplest_rational(&-hi.clone(), &-lo.clone()));
        }
        if Signed::is_negative(lo) {
            return Some(BigRational::zero());
        }
        Some(simplest_rational(lo, hi))
    }
}

// ---------------------------------------------------------------------------
// approximate mode

static DEFAULT_PRECISION: AtomicU32 = AtomicU32::new(256);

/// Extra working bits carried on top of the requested precision.
pub const GUARD_BITS: u32 = 64;

/// Precision (bits) used when an [`Approx`] value is created without an explicit one.
pub fn default_precision() -> u32 {
    DEFAULT_PRECISION.load(AtomicOrdering::Relaxed)
}

pub fn set_default_precision(bits: u32) {
    DEFAULT_PRECISION.store(bits.max(8), AtomicOrdering::Relaxed);
}

type Float = FBig<HalfEven>;

/// Binary floating-point scalar with a per-value precision.
///
/// Arithmetic between values of different precision is carried out at the larger one.
/// Each value carries [`GUARD_BITS`] extra working bits beyond its nominal precision.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Approx(Float);

fn to_ibig(value: &BigInt) -> IBig {
    let (sign, bytes) = value.to_bytes_le();
    let magnitude = IBig::from(UBig::from_le_bytes(&bytes));
    match sign {
        Sign::Minus => -magnitude,
        _ => magnitude,
    }
}

impl Approx {
    pub fn with_precision(value: &BigRational, bits: u32) -> Self {
        let work = (bits + GUARD_BITS) as usize;
        let numer = Float::from(to_ibig(value.numer())).with_precision(work).value();
        if value.denom().is_one() {
            return Approx(numer);
        }
        let denom = Float::from(to_ibig(value.denom())).with_precision(work).value();
        Approx(numer / denom)
    }

    /// Nominal precision in bits (excluding guard bits).
    pub fn precision_bits(&self) -> u32 {
        (self.0.precision() as u32).saturating_sub(GUARD_BITS).max(1)
    }

    fn wrap(value: Float) -> Self {
        Approx(value)
    }
}

impl fmt::Debug for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = self.precision_bits();
        let shown = self.0.clone().with_precision(bits as usize).value();
        write!(f, "{}@{}", shown.to_decimal().value(), bits)
    }
}

macro_rules! approx_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Approx {
            type Output = Approx;
            fn $method(self, rhs: Approx) -> Approx {
                Approx::wrap(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Approx> for Approx {
            type Output = Approx;
            fn $method(self, rhs: &'a Approx) -> Approx {
                Approx::wrap(self.0 $op &rhs.0)
            }
        }
    };
}

approx_binop!(Add, add, +);
approx_binop!(Sub, sub, -);
approx_binop!(Mul, mul, *);
approx_binop!(Div, div, /);

impl Neg for Approx {
    type Output = Approx;
    fn neg(self) -> Approx {
        Approx(-self.0)
    }
}

impl Zero for Approx {
    fn zero() -> Self {
        Approx::with_precision(&BigRational::zero(), default_precision())
    }
    fn is_zero(&self) -> bool {
        self.0 == Float::ZERO
    }
}

impl One for Approx {
    fn one() -> Self {
        Approx::with_precision(&BigRational::one(), default_precision())
    }
}

impl Scalar for Approx {
    fn is_exact() -> bool {
        false
    }

    fn mode(&self) -> Mode {
        Mode::Approx {
            bits: self.precision_bits(),
        }
    }

    fn from_rational(value: &BigRational) -> Self {
        Approx::with_precision(value, default_precision())
    }

    fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        match trimmed.rsplit_once('@') {
            Some((value, bits)) => {
                let bits: u32 = bits.trim().parse().map_err(|_| Error::Parse {
                    token: trimmed.to_string(),
                    reason: "bad precision annotation".into(),
                })?;
                Ok(Approx::with_precision(&parse_rational(value)?, bits))
            }
            None => Ok(Approx::from_rational(&parse_rational(trimmed)?)),
        }
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    fn tolerance(&self) -> Self {
        let bits = self.precision_bits() as isize;
        Approx::wrap(Float::from_parts(IBig::ONE, 4 - bits))
    }

    fn ln(&self) -> Option<Self> {
        if self.is_positive() {
            Some(Approx(self.0.ln()))
        } else {
            None
        }
    }

    fn exp(&self) -> Option<Self> {
        Some(Approx(self.0.exp()))
    }

    fn powf(&self, exp: &Self) -> Option<Self> {
        match self.partial_cmp(&Approx::zero()) {
            Some(Ordering::Greater) => Some(Approx(self.0.powf(&exp.0))),
            Some(Ordering::Equal) if exp.is_positive() => Some(Approx::zero()),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// serde helpers: scalars serialize as their textual form

pub(crate) mod text {
    use super::Scalar;
    use serde::ser::{SerializeSeq, Serializer};

    pub fn one<S: Scalar, Ser: Serializer>(value: &S, ser: Ser) -> Result<Ser::Ok, Ser::Error> {
        ser.collect_str(value)
    }

    pub fn many<S: Scalar, Ser: Serializer>(values: &[S], ser: Ser) -> Result<Ser::Ok, Ser::Error> {
        let mut seq = ser.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&v.to_string())?;
        }
        seq.end()
    }

    pub fn opt<S: Scalar, Ser: Serializer>(
        value: &Option<S>,
        ser: Ser,
    ) -> Result<Ser::Ok, Ser::Error> {
        match value {
            Some(v) => ser.collect_str(v),
            None => ser.serialize_none(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exact {
        Exact::ratio(n, d)
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("4/5").unwrap(), q(4, 5));
        assert_eq!(parse_rational("0").unwrap(), q(0, 1));
        assert_eq!(parse_rational("1.25").unwrap(), q(5, 4));
        assert_eq!(parse_rational("0.8").unwrap(), parse_rational("4/5").unwrap());
        assert_eq!(parse_rational("-3/6").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("2.5e-1").unwrap(), q(1, 4));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
    }

    #[test]
    fn parse_errors_name_the_token() {
        for bad in ["", "abc", "1/0", "1.2.3", "4/x", "--1", "1e"] {
            match parse_rational(bad) {
                Err(Error::Parse { token, .. }) => assert_eq!(token, bad.trim()),
                other => panic!("{bad:?} parsed to {other:?}"),
            }
        }
    }

    #[test]
    fn exact_display_is_lowest_terms() {
        assert_eq!(q(8, 10).to_string(), "4/5");
        assert_eq!(q(6, 3).to_string(), "2");
    }

    #[test]
    fn simplest_between_finds_small_denominators() {
        let lo = q(262143, 1_000_000);
        let hi = q(262145, 1_000_000);
        // 0.262144 = (4/5)^6 = 4096/15625
        let found = Exact::simplest_between(&lo, &hi).unwrap();
        assert!(found >= lo && found <= hi);
        assert!(found.denom() <= &BigInt::from(15625));
        let exact = q(4, 5).powi(6);
        let tight = Exact::simplest_between(&(exact.clone() - q(1, 10i64.pow(15))), &(exact.clone() + q(1, 10i64.pow(15))));
        assert_eq!(tight.unwrap(), exact);
        assert_eq!(Exact::simplest_between(&q(1, 3), &q(1, 3)).unwrap(), q(1, 3));
        assert_eq!(Exact::simplest_between(&q(-3, 4), &q(-1, 4)).unwrap(), q(-1, 2));
    }

    #[test]
    fn approx_tracks_precision_and_tolerance() {
        let third = Approx::with_precision(&q(1, 3), 128);
        assert_eq!(third.precision_bits(), 128);
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-16);
        let back = third.clone() * Approx::with_precision(&q(3, 1), 128);
        assert!(back.approx_eq(&Approx::with_precision(&q(1, 1), 128)));
        assert!(!Approx::ratio(1, 3).approx_eq(&Approx::ratio(1, 3 + 1)));
        let text = third.to_string();
        assert!(text.ends_with("@128"), "{text}");
        let reparsed = Approx::parse(&text).unwrap();
        assert!(reparsed.approx_eq(&third));
    }

    #[test]
    fn approx_transcendentals() {
        let two = Approx::from_int(2);
        let ln2 = two.ln().unwrap();
        assert!((ln2.to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        let sqrt2 = two.powf(&Approx::ratio(1, 2)).unwrap();
        assert!((sqrt2.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(Approx::from_int(-1).ln().is_none());
        assert!(q(2, 1).ln().is_none());
    }

    #[test]
    fn powi_by_squaring() {
        assert_eq!(q(5, 4).powi(3), q(125, 64));
        assert_eq!(q(7, 3).powi(0), q(1, 1));
    }
}
