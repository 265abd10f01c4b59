//! Scalar abstraction, complex pairs, and the precision context.
//!
//! Every numerical module is generic over [`Real`]. Two backends exist:
//! `f64` (fixed 53-bit, useful for quick checks) and [`rug::Float`] (MPFR,
//! arbitrary precision). MPFR operations are correctly rounded to nearest at
//! the precision of the receiving value; the `f64` backend inherits IEEE
//! round-to-nearest for arithmetic and libm's faithful rounding for
//! transcendental functions.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, NumAssignOps, NumOps, ToPrimitive};
use rug::float::Constant;
use rug::ops::Pow;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact;

pub const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Binary digits needed to carry `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32
}

pub trait Real:
    Clone
    + fmt::Debug
    + PartialOrd
    + Send
    + Sync
    + 'static
    + NumOps
    + for<'a> NumOps<&'a Self>
    + NumAssignOps
    + for<'a> NumAssignOps<&'a Self>
    + Neg<Output = Self>
{
    /// Largest supported precision in bits, `None` if unbounded.
    fn max_precision() -> Option<u32>;
    fn precision(&self) -> u32;

    fn from_i64(v: i64, prec: u32) -> Self;
    fn from_u64(v: u64, prec: u32) -> Self;
    fn from_f64(v: f64, prec: u32) -> Self;
    fn from_bigint(v: &BigInt, prec: u32) -> Self;
    fn parse_decimal(s: &str, prec: u32) -> Option<Self>;
    fn pi(prec: u32) -> Self;
    /// Rounds (or extends) to `prec` bits.
    fn with_precision(&self, prec: u32) -> Self;

    fn sqrt(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sin_cos(&self) -> (Self, Self);
    fn tan(&self) -> Self;
    fn exp(&self) -> Self;
    fn exp_m1(&self) -> Self;
    fn ln(&self) -> Self;
    fn abs(&self) -> Self;
    fn powf(&self, e: &Self) -> Self;
    fn powi(&self, e: i32) -> Self;
    fn floor(&self) -> Self;
    /// Round half away from zero.
    fn round(&self) -> Self;

    fn is_zero(&self) -> bool;
    fn is_finite(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Integer part (truncated toward zero); `None` for non-finite values.
    fn to_bigint(&self) -> Option<BigInt>;
    /// The exact binary value as a rational.
    fn to_big_rational(&self) -> Option<BigRational>;
    /// Decimal string that parses back to the identical value at the same precision.
    fn to_exact_string(&self) -> String;
    /// `(negative, digits, exp)` with value = ±0.digits × 10^exp, rounded to `sig` digits.
    fn to_digits(&self, sig: usize) -> (bool, String, i64);

    fn sqr(&self) -> Self {
        self.clone() * self
    }

    fn recip(&self) -> Self {
        Self::from_i64(1, self.precision()) / self
    }

    fn is_negative(&self) -> bool {
        *self < Self::from_i64(0, self.precision())
    }

    fn to_i64(&self) -> Option<i64> {
        self.to_bigint().and_then(|b| b.to_i64())
    }
}

impl Real for f64 {
    fn max_precision() -> Option<u32> {
        Some(53)
    }
    fn precision(&self) -> u32 {
        53
    }
    fn from_i64(v: i64, _: u32) -> Self {
        v as f64
    }
    fn from_u64(v: u64, _: u32) -> Self {
        v as f64
    }
    fn from_f64(v: f64, _: u32) -> Self {
        v
    }
    fn from_bigint(v: &BigInt, _: u32) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
    fn parse_decimal(s: &str, _: u32) -> Option<Self> {
        s.trim().parse().ok()
    }
    fn pi(_: u32) -> Self {
        std::f64::consts::PI
    }
    fn with_precision(&self, _: u32) -> Self {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn sin_cos(&self) -> (Self, Self) {
        f64::sin_cos(*self)
    }
    fn tan(&self) -> Self {
        f64::tan(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn exp_m1(&self) -> Self {
        f64::exp_m1(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn powf(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
    fn powi(&self, e: i32) -> Self {
        f64::powi(*self, e)
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
    fn round(&self) -> Self {
        f64::round(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_bigint(&self) -> Option<BigInt> {
        BigInt::from_f64(self.trunc())
    }
    fn to_big_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }
    fn to_exact_string(&self) -> String {
        format!("{:e}", self)
    }
    fn to_digits(&self, sig: usize) -> (bool, String, i64) {
        let sig = sig.clamp(1, 17);
        if *self == 0.0 {
            return (false, "0".into(), 0);
        }
        let s = format!("{:.*e}", sig - 1, self.abs());
        let (mant, exp) = s.split_once('e').expect("exponent form");
        let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
        let exp: i64 = exp.parse().expect("exponent");
        (*self < 0.0, digits, exp + 1)
    }
}

impl Real for rug::Float {
    fn max_precision() -> Option<u32> {
        None
    }
    fn precision(&self) -> u32 {
        self.prec()
    }
    fn from_i64(v: i64, prec: u32) -> Self {
        rug::Float::with_val(prec, v)
    }
    fn from_u64(v: u64, prec: u32) -> Self {
        rug::Float::with_val(prec, v)
    }
    fn from_f64(v: f64, prec: u32) -> Self {
        rug::Float::with_val(prec, v)
    }
    fn from_bigint(v: &BigInt, prec: u32) -> Self {
        let i = rug::Integer::from_str_radix(&v.to_str_radix(16), 16).expect("hex integer");
        rug::Float::with_val(prec, i)
    }
    fn parse_decimal(s: &str, prec: u32) -> Option<Self> {
        rug::Float::parse(s.trim()).ok().map(|p| rug::Float::with_val(prec, p))
    }
    fn pi(prec: u32) -> Self {
        rug::Float::with_val(prec, Constant::Pi)
    }
    fn with_precision(&self, prec: u32) -> Self {
        rug::Float::with_val(prec, self)
    }
    fn sqrt(&self) -> Self {
        self.clone().sqrt()
    }
    fn sin(&self) -> Self {
        self.clone().sin()
    }
    fn cos(&self) -> Self {
        self.clone().cos()
    }
    fn sin_cos(&self) -> (Self, Self) {
        self.clone().sin_cos(rug::Float::new(self.prec()))
    }
    fn tan(&self) -> Self {
        self.clone().tan()
    }
    fn exp(&self) -> Self {
        self.clone().exp()
    }
    fn exp_m1(&self) -> Self {
        self.clone().exp_m1()
    }
    fn ln(&self) -> Self {
        self.clone().ln()
    }
    fn abs(&self) -> Self {
        self.clone().abs()
    }
    fn powf(&self, e: &Self) -> Self {
        self.clone().pow(e)
    }
    fn powi(&self, e: i32) -> Self {
        self.clone().pow(e)
    }
    fn floor(&self) -> Self {
        self.clone().floor()
    }
    fn round(&self) -> Self {
        self.clone().round()
    }
    fn is_zero(&self) -> bool {
        rug::Float::is_zero(self)
    }
    fn is_finite(&self) -> bool {
        rug::Float::is_finite(self)
    }
    fn to_f64(&self) -> f64 {
        rug::Float::to_f64(self)
    }
    fn to_bigint(&self) -> Option<BigInt> {
        let i = self.to_integer_round(rug::float::Round::Zero)?.0;
        BigInt::parse_bytes(i.to_string_radix(16).as_bytes(), 16)
    }
    fn to_big_rational(&self) -> Option<BigRational> {
        let r = self.to_rational()?;
        let n = BigInt::parse_bytes(r.numer().to_string_radix(16).as_bytes(), 16)?;
        let d = BigInt::parse_bytes(r.denom().to_string_radix(16).as_bytes(), 16)?;
        Some(BigRational::new_raw(n, d))
    }
    fn to_exact_string(&self) -> String {
        self.to_string_radix(10, None)
    }
    fn to_digits(&self, sig: usize) -> (bool, String, i64) {
        let (neg, digits, exp) = self.to_sign_string_exp(10, Some(sig.max(1)));
        match exp {
            Some(e) => (neg, digits, e as i64),
            None => (false, "0".into(), 0),
        }
    }
}

/// Fixed-point rendering with `decimals` digits after the point, rounded half away from zero.
pub fn format_fixed<T: Real>(x: &T, decimals: u32) -> String {
    let prec = x.precision().max(64);
    let scale = T::from_u64(10, prec).powi(decimals as i32);
    let scaled = (x.with_precision(prec) * &scale).round();
    let int = scaled.to_bigint().unwrap_or_default();
    let neg = int.sign() == num_bigint::Sign::Minus;
    let mut digits = int.magnitude().to_str_radix(10);
    let d = decimals as usize;
    if digits.len() <= d {
        digits = format!("{}{}", "0".repeat(d + 1 - digits.len()), digits);
    }
    let (whole, frac) = digits.split_at(digits.len() - d);
    let sign = if neg { "-" } else { "" };
    if d == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac}")
    }
}

/// Scientific rendering with `sig` significant digits, e.g. `3.014e-5`.
pub fn format_sci<T: Real>(x: &T, sig: usize) -> String {
    let (neg, digits, exp) = x.to_digits(sig);
    if digits == "0" {
        return "0".into();
    }
    let (head, tail) = digits.split_at(1);
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{}", exp - 1)
    } else {
        format!("{sign}{head}.{tail}e{}", exp - 1)
    }
}

/// Decimal rendering with `sig` significant digits, positional when the
/// exponent is moderate and scientific otherwise.
pub fn format_sig<T: Real>(x: &T, sig: usize) -> String {
    let (neg, digits, exp) = x.to_digits(sig);
    if digits == "0" {
        return "0".into();
    }
    if !(-6..=21).contains(&exp) {
        return format_sci(x, sig);
    }
    let sign = if neg { "-" } else { "" };
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    if exp <= 0 {
        format!("{sign}0.{}{}", "0".repeat((-exp) as usize), digits)
    } else if digits.len() as i64 <= exp {
        format!("{sign}{}{}", digits, "0".repeat((exp - digits.len() as i64) as usize))
    } else {
        let (a, b) = digits.split_at(exp as usize);
        format!("{sign}{a}.{b}")
    }
}

/// A complex number as a pair of reals at a common precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<T> {
    pub re: T,
    pub im: T,
}

impl<T: Real> Complex<T> {
    pub fn new(re: T, im: T) -> Self {
        Self { re, im }
    }

    pub fn real(re: T) -> Self {
        let im = T::from_i64(0, re.precision());
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(T::from_i64(0, prec), T::from_i64(0, prec))
    }

    pub fn norm_sqr(&self) -> T {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.re.clone() * k, self.im.clone() * k)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Self::new(self.re.clone() / &d, -self.im.clone() / &d)
    }
}

impl<T: Real> Add for Complex<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl<'a, T: Real> Add<&'a Complex<T>> for Complex<T> {
    type Output = Self;
    fn add(self, o: &'a Self) -> Self {
        Self::new(self.re + &o.re, self.im + &o.im)
    }
}

impl<T: Real> Sub for Complex<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl<'a, T: Real> Sub<&'a Complex<T>> for Complex<T> {
    type Output = Self;
    fn sub(self, o: &'a Self) -> Self {
        Self::new(self.re - &o.re, self.im - &o.im)
    }
}

impl<T: Real> Mul for Complex<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = self.re.clone() * &o.re - self.im.clone() * &o.im;
        let im = self.re * &o.im + self.im * &o.re;
        Self::new(re, im)
    }
}

impl<T: Real> Div for Complex<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl<T: Real> Neg for Complex<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

/// Identifies the precision a value was computed at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionStamp {
    pub decimal_digits: u32,
    pub guard_digits: u32,
    pub bits: u32,
}

pub const DEFAULT_GUARD_DIGITS: u32 = 15;
pub const MIN_DECIMAL_DIGITS: u32 = 10;

/// Working precision plus the constants every module consumes.
///
/// Immutable after construction; share it freely between threads.
#[derive(Clone, Debug)]
pub struct PrecisionContext<T> {
    decimal_digits: u32,
    guard_digits: u32,
    bits: u32,
    pi: T,
    zeta3: T,
    l3: T,
}

impl<T: Real> PrecisionContext<T> {
    pub fn new(decimal_digits: u32) -> Result<Self> {
        Self::with_guard(decimal_digits, DEFAULT_GUARD_DIGITS)
    }

    pub fn with_guard(decimal_digits: u32, guard_digits: u32) -> Result<Self> {
        if decimal_digits < MIN_DECIMAL_DIGITS {
            return Err(Error::InvalidArgument(format!(
                "decimal_digits = {decimal_digits} is below the minimum of {MIN_DECIMAL_DIGITS}"
            )));
        }
        if guard_digits == 0 {
            return Err(Error::InvalidArgument("guard_digits must be positive".into()));
        }
        let bits = bits_for_digits(decimal_digits + guard_digits);
        if let Some(max) = T::max_precision() {
            if bits > max {
                return Err(Error::PrecisionExhausted(format!(
                    "{} working digits need {bits} bits; this scalar type carries {max}",
                    decimal_digits + guard_digits
                )));
            }
        }
        let pi = T::pi(bits);
        let zeta3 = hurwitz_zeta3(&T::from_i64(1, bits), bits).0;
        let l3 = l3_closed_form(&pi);
        Ok(Self { decimal_digits, guard_digits, bits, pi, zeta3, l3 })
    }

    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    pub fn working_digits(&self) -> u32 {
        self.decimal_digits + self.guard_digits
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn stamp(&self) -> PrecisionStamp {
        PrecisionStamp {
            decimal_digits: self.decimal_digits,
            guard_digits: self.guard_digits,
            bits: self.bits,
        }
    }

    pub fn pi(&self) -> &T {
        &self.pi
    }

    pub fn zeta3(&self) -> &T {
        &self.zeta3
    }

    /// `L(3, χ₋₃) = 4π³/(81√3)`.
    pub fn l3(&self) -> &T {
        &self.l3
    }

    pub fn int(&self, v: i64) -> T {
        T::from_i64(v, self.bits)
    }

    pub fn uint(&self, v: u64) -> T {
        T::from_u64(v, self.bits)
    }

    pub fn real(&self, v: f64) -> T {
        T::from_f64(v, self.bits)
    }

    pub fn ratio(&self, num: i64, den: i64) -> T {
        self.int(num) / self.int(den)
    }

    pub fn rational(&self, r: &BigRational) -> T {
        T::from_bigint(r.numer(), self.bits) / T::from_bigint(r.denom(), self.bits)
    }

    pub fn parse(&self, s: &str) -> Option<T> {
        T::parse_decimal(s, self.bits)
    }

    pub fn zero(&self) -> T {
        self.int(0)
    }

    pub fn one(&self) -> T {
        self.int(1)
    }

    /// `10^e` at working precision.
    pub fn pow10(&self, e: i32) -> T {
        self.int(10).powi(e)
    }

    /// `10^(−working digits + k)`.
    pub fn tolerance(&self, k: i32) -> T {
        self.pow10(-(self.working_digits() as i32) + k)
    }

    /// Decimal digits needed to represent `n` (`ceil(log₁₀ n)`, at least 1).
    pub fn digits_of(n: u64) -> u32 {
        let mut d = 1;
        let mut p = 10u128;
        while (n as u128) > p {
            p *= 10;
            d += 1;
        }
        d
    }
}

/// `4π³/(81√3)` from a value of π.
pub fn l3_closed_form<T: Real>(pi: &T) -> T {
    let prec = pi.precision();
    let num = T::from_i64(4, prec) * pi.powi(3);
    let den = T::from_i64(81, prec) * T::from_i64(3, prec).sqrt();
    num / den
}

/// `Σ_{k≥0} (k+a)^(-3)` by direct summation of the head plus the
/// Euler–Maclaurin remainder.
///
/// All derivatives of `x^(-3)` keep a fixed sign, so the error after the
/// last correction is bounded by the first omitted correction, which is
/// returned alongside the value.
pub fn hurwitz_zeta3<T: Real>(a: &T, bits: u32) -> (T, T) {
    let head_terms = (bits + 10) as i64;
    let mut sum = T::from_i64(0, bits);
    for k in 0..head_terms {
        sum += (T::from_i64(k, bits) + a).powi(-3);
    }
    let x = T::from_i64(head_terms, bits) + a;
    let x2 = x.sqr();
    let half = T::from_f64(0.5, bits);
    sum += x2.recip() * &half;
    sum += x.powi(-3) * &half;

    let target = T::from_i64(2, bits).powi(-(bits as i32) - 8);
    let max_k = ((bits as f64 * 0.302) / (2.0 * x.to_f64().log10()).max(0.5)).ceil() as usize + 12;
    let bern = exact::bernoulli_numbers(2 * max_k + 2);
    let mut xpow = x2.sqr(); // x^(2k+2) for k = 1
    let mut bound = T::from_i64(0, bits);
    for k in 1..=max_k + 1 {
        let coeff = &bern[2 * k] * num_rational::BigRational::from_integer(BigInt::from(2 * k + 1))
            / num_rational::BigRational::from_integer(BigInt::from(2));
        let c = T::from_bigint(coeff.numer(), bits) / T::from_bigint(coeff.denom(), bits);
        let term = c / &xpow;
        if term.abs() < target || k == max_k + 1 {
            bound = term.abs();
            break;
        }
        sum += term;
        xpow *= &x2;
    }
    (sum, bound)
}

/// Numerical zero test at `tol`.
pub fn near_zero<T: Real>(x: &T, tol: &T) -> bool {
    x.abs() <= *tol
}

/// Convenience: true if `x` has no fractional part.
pub fn is_integral<T: Real>(x: &T) -> bool {
    (x.clone() - x.floor()).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    /// Machin: π = 16 atan(1/5) − 4 atan(1/239), with atan by its Taylor series.
    fn machin_pi(bits: u32) -> Float {
        fn atan_inv(x: u32, bits: u32) -> Float {
            let x2 = Float::with_val(bits, x * x);
            let mut term = Float::with_val(bits, 1) / Float::with_val(bits, x);
            let mut sum = term.clone();
            let eps = Float::with_val(bits, 2).pow(-(bits as i32) - 4);
            let mut k = 1u32;
            loop {
                term /= &x2;
                let t = term.clone() / Float::with_val(bits, 2 * k + 1);
                if t < eps {
                    break;
                }
                if k % 2 == 1 {
                    sum -= t;
                } else {
                    sum += t;
                }
                k += 1;
            }
            sum
        }
        atan_inv(5, bits) * 16u32 - atan_inv(239, bits) * 4u32
    }

    #[test]
    fn pi_matches_machin_at_sixty_digits() {
        let ctx = PrecisionContext::<Float>::new(30).unwrap();
        let oracle = machin_pi(bits_for_digits(60) + 16);
        let diff = (ctx.pi().clone().with_precision(260) - &oracle).abs();
        assert!(diff < ctx.tolerance(1).with_precision(260), "diff {diff}");
        assert_eq!(format_fixed(ctx.pi(), 29), "3.14159265358979323846264338328");
    }

    #[test]
    fn zeta3_matches_mpfr_zeta() {
        for digits in [10u32, 30, 45, 80] {
            let ctx = PrecisionContext::<Float>::new(digits).unwrap();
            let oracle = Float::with_val(ctx.bits() + 64, 3).zeta();
            let diff = (ctx.zeta3().clone().with_precision(ctx.bits() + 64) - oracle).abs();
            let limit = ctx.tolerance(2).with_precision(ctx.bits() + 64);
            assert!(diff < limit, "digits {digits}: {diff}");
        }
    }

    #[test]
    fn zeta3_bracketed_by_integral_tail() {
        // Σ_{n≤N} + ∫_{N+1}^∞ ≤ ζ(3) ≤ Σ_{n≤N} + ∫_N^∞
        let ctx = PrecisionContext::<Float>::new(30).unwrap();
        let n = 2000i64;
        let mut s = ctx.zero();
        for k in 1..=n {
            s += ctx.int(k).powi(-3);
        }
        let lo = s.clone() + ctx.int(n + 1).powi(-2) / ctx.int(2);
        let hi = s + ctx.int(n).powi(-2) / ctx.int(2);
        assert!(lo < *ctx.zeta3() && *ctx.zeta3() < hi);
        assert!(format_fixed(ctx.zeta3(), 29).starts_with("1.20205690315959428539973816151"));
    }

    #[test]
    fn l3_digits() {
        let ctx = PrecisionContext::<Float>::new(30).unwrap();
        assert!(format_fixed(ctx.l3(), 29).starts_with("0.88402381175007985674305791"));
        let ctx10 = PrecisionContext::<Float>::new(10).unwrap();
        assert_eq!(format_fixed(ctx10.l3(), 10), "0.8840238118");
    }

    #[test]
    fn rejects_low_digit_counts() {
        assert!(matches!(PrecisionContext::<Float>::new(9), Err(Error::InvalidArgument(_))));
        assert!(PrecisionContext::<Float>::new(10).is_ok());
    }

    #[test]
    fn f64_backend_caps_working_precision() {
        assert!(matches!(PrecisionContext::<f64>::new(10), Err(Error::PrecisionExhausted(_))));
        let ctx = PrecisionContext::<f64>::with_guard(10, 5).unwrap();
        assert!((ctx.zeta3() - 1.2020569031595942).abs() < 1e-15);
        assert!((ctx.l3() - 0.8840238117500798).abs() < 1e-15);
    }

    #[test]
    fn contexts_are_referentially_transparent() {
        let a = PrecisionContext::<Float>::new(40).unwrap();
        let b = PrecisionContext::<Float>::new(40).unwrap();
        assert_eq!(a.zeta3().to_exact_string(), b.zeta3().to_exact_string());
        assert_eq!(a.pi().to_exact_string(), b.pi().to_exact_string());
        assert_eq!(a.l3().to_exact_string(), b.l3().to_exact_string());
    }

    #[test]
    fn formatting() {
        let ctx = PrecisionContext::<Float>::new(30).unwrap();
        let x = ctx.parse("86.13533500187").unwrap();
        assert_eq!(format_fixed(&x, 7), "86.1353350");
        assert_eq!(format_fixed(&-x.clone(), 3), "-86.135");
        assert_eq!(format_fixed(&ctx.parse("0.00042").unwrap(), 3), "0.000");
        assert_eq!(format_sci(&ctx.parse("0.0000301443").unwrap(), 4), "3.014e-5");
        assert_eq!(format_sig(&ctx.parse("0.0000301443").unwrap(), 4), "0.00003014");
        assert_eq!(format_sig(&x, 6), "86.1353");
        assert_eq!(format_fixed(&0.125f64, 2), "0.13");
        assert_eq!(format_sci(&-2.5e-26f64, 2), "-2.5e-26");
    }

    #[test]
    fn exact_strings_round_trip() {
        let ctx = PrecisionContext::<Float>::new(30).unwrap();
        for v in [ctx.pi().clone(), ctx.zeta3().clone(), ctx.ratio(-1, 3)] {
            let back = ctx.parse(&v.to_exact_string()).unwrap();
            assert_eq!(back, v);
        }
        let x = 0.1f64 + 0.2;
        assert_eq!(f64::parse_decimal(&x.to_exact_string(), 53), Some(x));
    }

    #[test]
    fn complex_arithmetic() {
        let a = Complex::new(1.0f64, 2.0);
        let b = Complex::new(3.0f64, -1.0);
        let p = a.clone() * b.clone();
        assert_eq!((p.re, p.im), (5.0, 5.0));
        let q = p / b;
        assert!((q.re - 1.0).abs() < 1e-15 && (q.im - 2.0).abs() < 1e-15);
        assert_eq!(a.abs(), 5f64.sqrt());
    }
}
