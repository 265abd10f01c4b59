//! Trigonometry at integer arguments, continued-fraction convergents of π,
//! and the three-regime classification of integers by `|sin n|`.
//!
//! Every integer argument is reduced as `n = mπ + δ` with `m = round(n/π)`.
//! The subtraction cancels about `log₁₀ n` digits, so a context may only be
//! used for `n` with `ceil(log₁₀ n) ≤ guard digits`; functions that divide by
//! `δ` additionally need `log₁₀(1/|δ|)` spare digits. Violations are reported
//! as precision exhaustion, never absorbed by silently raising precision.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::{format_sig, PrecisionContext, Real};

pub const DEFAULT_CHUNK: u64 = 1 << 16;
/// Stored members of the intermediate regime; the count is always exact.
pub const INTERMEDIATE_CAP: usize = 100_000;

fn digits_of(n: u64) -> u32 {
    PrecisionContext::<f64>::digits_of(n)
}

fn check_reduction_rule<T: Real>(n: u64, ctx: &PrecisionContext<T>) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("integer argument must be positive".into()));
    }
    let d = digits_of(n);
    if d > ctx.guard_digits() {
        return Err(Error::PrecisionExhausted(format!(
            "reducing n = {n} cancels {d} digits but only {} guard digits are carried",
            ctx.guard_digits()
        )));
    }
    Ok(())
}

/// `n = mπ + delta` with `delta ∈ (−π/2, π/2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NearDistance<T> {
    pub n: u64,
    pub m: u64,
    pub delta: T,
}

impl<T: Real> NearDistance<T> {
    /// `(−1)^m`
    pub fn sign(&self) -> i64 {
        if self.m % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

pub fn signed_near_distance<T: Real>(n: u64, ctx: &PrecisionContext<T>) -> Result<NearDistance<T>> {
    check_reduction_rule(n, ctx)?;
    let pi = ctx.pi();
    let half_pi = pi.clone() / ctx.int(2);
    let nf = ctx.uint(n);
    let mut m = (n as f64 / std::f64::consts::PI).round() as u64;
    let mut delta = nf.clone() - pi.clone() * ctx.uint(m);
    loop {
        if delta > half_pi {
            m += 1;
            delta -= pi;
        } else if delta <= -half_pi.clone() {
            m -= 1;
            delta += pi;
        } else {
            break;
        }
    }
    let margin = ctx.tolerance(2) * &nf;
    if (delta.abs() - &half_pi).abs() <= margin {
        return Err(Error::Undecidable { n, what: "round(n/π) is a tie at working precision".into() });
    }
    Ok(NearDistance { n, m, delta })
}

/// Sine, cosine and half-angle sine/cosine of an integer, all from one reduction.
#[derive(Clone, Debug)]
pub struct IntegerTrig<T> {
    pub near: NearDistance<T>,
    pub sin: T,
    pub cos: T,
    /// `sin(n/2)`
    pub sin_half: T,
    /// `cos(n/2)`
    pub cos_half: T,
}

pub fn integer_trig<T: Real>(n: u64, ctx: &PrecisionContext<T>) -> Result<IntegerTrig<T>> {
    let near = signed_near_distance(n, ctx)?;
    let (a, b) = (near.delta.clone() / ctx.int(2)).sin_cos();
    let two = ctx.int(2);
    // sin δ = 2ab, cos δ = 1 − 2a²; neither cancels for |δ| ≤ π/2
    let sin_d = a.clone() * &b * &two;
    let cos_d = ctx.one() - a.sqr() * &two;
    let (sin, cos) = if near.m % 2 == 0 { (sin_d, cos_d) } else { (-sin_d, -cos_d) };
    // n/2 = mπ/2 + δ/2
    let (sin_half, cos_half) = match near.m % 4 {
        0 => (a, b),
        1 => (b, -a),
        2 => (-a, -b),
        _ => (-b, a),
    };
    Ok(IntegerTrig { near, sin, cos, sin_half, cos_half })
}

/// Checks that `1/|δ|` leaves the requested relative accuracy intact.
pub(crate) fn check_division_rule<T: Real>(near: &NearDistance<T>, ctx: &PrecisionContext<T>) -> Result<()> {
    let d = near.delta.abs().to_f64();
    let lost = digits_of(near.n) as f64 + (1.0 / d).log10().max(0.0);
    if lost > ctx.guard_digits() as f64 {
        return Err(Error::PrecisionExhausted(format!(
            "n = {} with |δ| = {d:e} needs {lost:.1} guard digits, {} carried",
            near.n,
            ctx.guard_digits()
        )));
    }
    Ok(())
}

/// `sin n = (−1)^m sin δ(n)`, relative error at most `10^(−decimal_digits)`.
pub fn sin_integer<T: Real>(n: u64, ctx: &PrecisionContext<T>) -> Result<T> {
    let t = integer_trig(n, ctx)?;
    check_division_rule(&t.near, ctx)?;
    Ok(t.sin)
}

pub fn cos_integer<T: Real>(n: u64, ctx: &PrecisionContext<T>) -> Result<T> {
    Ok(integer_trig(n, ctx)?.cos)
}

/// A continued-fraction convergent `p/q` of π.
#[derive(Clone, Debug)]
pub struct Convergent<T> {
    pub p: BigInt,
    pub q: BigInt,
    /// `|π − p/q|`
    pub error: T,
}

/// The first `count` convergents of π.
///
/// The working value of π is widened to the rational interval
/// `π̃ ± 4·2^(−bits)`, and a partial quotient is accepted only when both
/// endpoints agree on it. Each convergent costs about `2 log₂ q_k / k ≈ 3.4`
/// bits on average, so roughly `0.29·bits` (one per working decimal digit)
/// convergents are available; requesting more is a precision error.
pub fn pi_convergents<T: Real>(count: usize, ctx: &PrecisionContext<T>) -> Result<Vec<Convergent<T>>> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be positive".into()));
    }
    let pi = ctx
        .pi()
        .to_big_rational()
        .ok_or_else(|| Error::PrecisionExhausted("π is not finite".into()))?;
    let radius = BigRational::new(BigInt::from(4), BigInt::one() << ctx.bits() as usize);
    let (mut x, mut y) = (&pi - &radius, &pi + &radius);
    let (mut p1, mut p2) = (BigInt::one(), BigInt::zero());
    let (mut q1, mut q2) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let a = x.floor();
        if a != y.floor() {
            return Err(Error::PrecisionExhausted(format!(
                "only {k} convergents of π are certified at {} working digits",
                ctx.working_digits()
            )));
        }
        let a = a.to_integer();
        let p = &a * &p1 + &p2;
        let q = &a * &q1 + &q2;
        let approx = T::from_bigint(&p, ctx.bits()) / T::from_bigint(&q, ctx.bits());
        out.push(Convergent { p: p.clone(), q: q.clone(), error: (ctx.pi().clone() - approx).abs() });
        (p2, p1) = (p1, p);
        (q2, q1) = (q1, q);
        let fx = &x - BigRational::from_integer(a.clone());
        let fy = &y - BigRational::from_integer(a);
        if fx.is_zero() || fy.is_zero() {
            return Err(Error::PrecisionExhausted("interval for π reached a rational endpoint".into()));
        }
        x = fx.recip();
        y = fy.recip();
    }
    Ok(out)
}

impl<T> Convergent<T> {
    pub fn is_reduced(&self) -> bool {
        self.p.gcd(&self.q).is_one() && self.q.is_positive()
    }
}

/// A regime exponent `num/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Exponent {
    pub num: u32,
    pub den: u32,
}

impl Exponent {
    pub const fn new(num: u32, den: u32) -> Self {
        Self { num, den }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("exponent {s:?} is not a positive fraction p/q"));
        let (n, d) = s.trim().split_once('/').unwrap_or((s.trim(), "1"));
        let num: u32 = n.trim().parse().map_err(|_| bad())?;
        let den: u32 = d.trim().parse().map_err(|_| bad())?;
        if num == 0 || den == 0 || num > 16 || den > 16 {
            return Err(bad());
        }
        Ok(Self { num, den })
    }
}

impl TryFrom<String> for Exponent {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Exponent> for String {
    fn from(e: Exponent) -> String {
        e.to_string()
    }
}

/// Thresholds `n^(−generic)` and `n^(−resonant)` splitting the integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeExponents {
    pub generic: Exponent,
    pub resonant: Exponent,
}

impl Default for RegimeExponents {
    fn default() -> Self {
        Self { generic: Exponent::new(1, 2), resonant: Exponent::new(3, 2) }
    }
}

impl RegimeExponents {
    pub fn validate(&self) -> Result<()> {
        let (g, r) = (self.generic, self.resonant);
        if (g.num as u64) * (r.den as u64) >= (r.num as u64) * (g.den as u64) {
            return Err(Error::InvalidArgument(format!(
                "generic exponent {g} must be smaller than resonant exponent {r}"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `|sin n| ≥ n^(−1/2)`
    G,
    /// `n^(−3/2) ≤ |sin n| < n^(−1/2)`
    I,
    /// `|sin n| < n^(−3/2)`
    R,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::G => "G",
            Regime::I => "I",
            Regime::R => "R",
        })
    }
}

/// Compares `|s|` with `n^(−e)` as `|s|^den · n^num` against 1.
/// Returns `true` when `|s| < n^(−e)`.
fn below_threshold<T: Real>(n: u64, s_abs: &T, e: Exponent, ctx: &PrecisionContext<T>) -> Result<bool> {
    let v = s_abs.powi(e.den as i32) * ctx.uint(n).powi(e.num as i32);
    let one = ctx.one();
    // |s| is known to ~n·10^(−wd) absolutely; scaled to a relative margin on v
    let margin = ctx.tolerance(5 + digits_of(n) as i32) / s_abs * ctx.int(e.den as i64);
    if (v.clone() - &one).abs() <= margin {
        return Err(Error::Undecidable { n, what: format!("|sin n| is within the margin of n^(-{e})") });
    }
    Ok(v < one)
}

pub(crate) fn classify_abs<T: Real>(n: u64, s_abs: &T, exps: &RegimeExponents, ctx: &PrecisionContext<T>) -> Result<Regime> {
    if !below_threshold(n, s_abs, exps.generic, ctx)? {
        return Ok(Regime::G);
    }
    if below_threshold(n, s_abs, exps.resonant, ctx)? {
        Ok(Regime::R)
    } else {
        Ok(Regime::I)
    }
}

pub fn classify<T: Real>(n: u64, ctx: &PrecisionContext<T>) -> Result<Regime> {
    classify_with(n, &RegimeExponents::default(), ctx)
}

pub fn classify_with<T: Real>(n: u64, exps: &RegimeExponents, ctx: &PrecisionContext<T>) -> Result<Regime> {
    let near = signed_near_distance(n, ctx)?;
    let s_abs = near.delta.abs().sin();
    classify_abs(n, &s_abs, exps, ctx)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsityPoint {
    pub n: u64,
    pub intermediate: u64,
    /// `#I(n) / √n`
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeCensus {
    pub n_max: u64,
    pub exponents: RegimeExponents,
    pub count_g: u64,
    pub count_i: u64,
    pub count_r: u64,
    /// Every resonant member, ascending.
    pub resonant: Vec<u64>,
    /// Intermediate members, ascending, at most `intermediate_cap`.
    pub intermediate: Vec<u64>,
    pub intermediate_cap: usize,
    /// `min |δ(n)| n^(3/2)` and its argmin.
    pub min_scaled_distance: f64,
    pub min_scaled_distance_at: u64,
    /// `max |K(n)/n³| / (3 n^(−3/2))` over the generic members.
    pub generic_bound_ratio: f64,
    /// `#I(N)/√N` at every power of ten up to `n_max`, and at `n_max`.
    pub sparsity: Vec<SparsityPoint>,
}

impl RegimeCensus {
    pub fn total(&self) -> u64 {
        self.count_g + self.count_i + self.count_r
    }
}

#[derive(Default)]
struct ChunkSummary {
    count_g: u64,
    count_r: u64,
    resonant: Vec<u64>,
    intermediate: Vec<u64>,
    min_scaled: (f64, u64),
    generic_ratio: f64,
}

fn census_chunk<T: Real>(
    lo: u64,
    hi: u64,
    exps: &RegimeExponents,
    ctx: &PrecisionContext<T>,
) -> Result<ChunkSummary> {
    let mut out = ChunkSummary { min_scaled: (f64::INFINITY, 0), ..Default::default() };
    let (three, four) = (ctx.int(3), ctx.int(4));
    for n in lo..=hi {
        let near = signed_near_distance(n, ctx)?;
        let s_abs = near.delta.abs().sin();
        let scaled = near.delta.abs().to_f64() * (n as f64).powf(1.5);
        if scaled < out.min_scaled.0 {
            out.min_scaled = (scaled, n);
        }
        match classify_abs(n, &s_abs, exps, ctx)? {
            Regime::G => {
                out.count_g += 1;
                let k = three.clone() / s_abs.sqr() - &four;
                let ratio = k.abs().to_f64() / (3.0 * (n as f64).powf(1.5));
                out.generic_ratio = out.generic_ratio.max(ratio);
            }
            Regime::I => out.intermediate.push(n),
            Regime::R => {
                out.count_r += 1;
                out.resonant.push(n);
            }
        }
    }
    Ok(out)
}

fn chunk_bounds(n_max: u64, chunk: u64) -> Vec<(u64, u64)> {
    let chunk = chunk.max(1);
    (0..n_max.div_ceil(chunk)).map(|c| (c * chunk + 1, ((c + 1) * chunk).min(n_max))).collect()
}

pub fn regime_census<T: Real>(n_max: u64, ctx: &PrecisionContext<T>) -> Result<RegimeCensus> {
    regime_census_with(n_max, &RegimeExponents::default(), DEFAULT_CHUNK, ctx)
}

/// Census of `1..=n_max`. Chunks run in parallel and merge in ascending
/// order, so the result does not depend on the worker count.
pub fn regime_census_with<T: Real>(
    n_max: u64,
    exps: &RegimeExponents,
    chunk: u64,
    ctx: &PrecisionContext<T>,
) -> Result<RegimeCensus> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("census bound must be at least 1".into()));
    }
    exps.validate()?;
    check_reduction_rule(n_max, ctx)?;
    let parts: Vec<Result<ChunkSummary>> = chunk_bounds(n_max, chunk)
        .into_par_iter()
        .map(|(lo, hi)| census_chunk(lo, hi, exps, ctx))
        .collect();
    let mut census = RegimeCensus {
        n_max,
        exponents: *exps,
        count_g: 0,
        count_i: 0,
        count_r: 0,
        resonant: Vec::new(),
        intermediate: Vec::new(),
        intermediate_cap: INTERMEDIATE_CAP,
        min_scaled_distance: f64::INFINITY,
        min_scaled_distance_at: 0,
        generic_bound_ratio: 0.0,
        sparsity: Vec::new(),
    };
    let mut all_intermediate = Vec::new();
    for part in parts {
        let part = part?;
        census.count_g += part.count_g;
        census.count_r += part.count_r;
        census.count_i += part.intermediate.len() as u64;
        census.resonant.extend(part.resonant);
        all_intermediate.extend(part.intermediate);
        if part.min_scaled.0 < census.min_scaled_distance {
            census.min_scaled_distance = part.min_scaled.0;
            census.min_scaled_distance_at = part.min_scaled.1;
        }
        census.generic_bound_ratio = census.generic_bound_ratio.max(part.generic_ratio);
    }
    let mut marks: Vec<u64> = std::iter::successors(Some(10u64), |d| d.checked_mul(10))
        .take_while(|&d| d <= n_max)
        .collect();
    if marks.last() != Some(&n_max) {
        marks.push(n_max);
    }
    for mark in marks {
        let count = all_intermediate.partition_point(|&n| n <= mark) as u64;
        census.sparsity.push(SparsityPoint {
            n: mark,
            intermediate: count,
            ratio: count as f64 / (mark as f64).sqrt(),
        });
    }
    all_intermediate.truncate(INTERMEDIATE_CAP);
    census.intermediate = all_intermediate;
    Ok(census)
}

#[derive(Serialize)]
struct CensusRow {
    n: u64,
    m: u64,
    delta: String,
    abs_sin: String,
    regime: Regime,
}

/// Streams one CSV row per `n ≤ n_max`: `n, m, delta, abs_sin, regime`.
pub fn write_census_csv<T: Real, W: Write>(
    n_max: u64,
    exps: &RegimeExponents,
    chunk: u64,
    ctx: &PrecisionContext<T>,
    out: W,
) -> Result<()> {
    exps.validate()?;
    check_reduction_rule(n_max, ctx)?;
    let mut w = csv::Writer::from_writer(out);
    let sig = ctx.decimal_digits() as usize;
    for (lo, hi) in chunk_bounds(n_max, chunk) {
        let rows: Vec<Result<CensusRow>> = (lo..=hi)
            .into_par_iter()
            .map(|n| {
                let near = signed_near_distance(n, ctx)?;
                let s_abs = near.delta.abs().sin();
                let regime = classify_abs(n, &s_abs, exps, ctx)?;
                Ok(CensusRow {
                    n,
                    m: near.m,
                    delta: format_sig(&near.delta, sig),
                    abs_sin: format_sig(&s_abs, sig),
                    regime,
                })
            })
            .collect();
        for row in rows {
            w.serialize(row?)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `|Σ_{n=1}^{N} e^{2ihn}|` by direct summation.
pub fn weyl_sum_magnitude<T: Real>(h: u64, n_max: u64, ctx: &PrecisionContext<T>) -> Result<T> {
    if h == 0 || n_max == 0 {
        return Err(Error::InvalidArgument("h and N must be positive".into()));
    }
    let top = 2u64
        .checked_mul(h)
        .and_then(|v| v.checked_mul(n_max))
        .ok_or_else(|| Error::PrecisionExhausted("2hN overflows".into()))?;
    check_reduction_rule(top, ctx)?;
    let (mut re, mut im) = (ctx.zero(), ctx.zero());
    for n in 1..=n_max {
        let t = integer_trig(2 * h * n, ctx)?;
        re += t.cos;
        im += t.sin;
    }
    Ok((re.sqr() + im.sqr()).sqrt())
}

/// `|sin(Nh) / sin(h)|`
pub fn weyl_closed_form<T: Real>(h: u64, n_max: u64, ctx: &PrecisionContext<T>) -> Result<T> {
    let num = integer_trig(h * n_max, ctx)?.sin;
    let den = integer_trig(h, ctx)?.sin;
    Ok((num / den).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::{format_fixed, format_sci};
    use proptest::prelude::*;
    use rug::Float;

    fn ctx() -> PrecisionContext<Float> {
        PrecisionContext::new(30).unwrap()
    }

    /// Continued fraction of a 50-digit decimal expansion of π, in exact rationals.
    fn oracle_convergents(count: usize) -> Vec<(i64, i64)> {
        let digits = "31415926535897932384626433832795028841971693993751";
        let mut x = BigRational::new(digits.parse().unwrap(), BigInt::from(10).pow(49));
        let (mut p1, mut p2, mut q1, mut q2) = (1i64, 0i64, 0i64, 1i64);
        let mut out = vec![];
        for _ in 0..count {
            let a = x.floor().to_integer().to_string().parse::<i64>().unwrap();
            let (p, q) = (a * p1 + p2, a * q1 + q2);
            out.push((p, q));
            (p2, p1, q2, q1) = (p1, p, q1, q);
            x = (x - BigRational::from_integer(BigInt::from(a))).recip();
        }
        out
    }

    #[test]
    fn first_convergents() {
        let c = ctx();
        let cs = pi_convergents(4, &c).unwrap();
        let got: Vec<(String, String)> = cs.iter().map(|k| (k.p.to_string(), k.q.to_string())).collect();
        let want: Vec<(String, String)> =
            oracle_convergents(4).iter().map(|(p, q)| (p.to_string(), q.to_string())).collect();
        assert_eq!(got, want);
        assert_eq!(got[3], ("355".into(), "113".into()));
        assert_eq!(format_sci(&cs[3].error, 3), "2.67e-7");
        let one = pi_convergents(1, &c).unwrap();
        assert_eq!((one[0].p.to_string(), one[0].q.to_string()), ("3".into(), "1".into()));
        assert!(format_fixed(&one[0].error, 5).starts_with("0.14159"));
    }

    #[test]
    fn convergent_properties() {
        let c = ctx();
        let cs = pi_convergents(25, &c).unwrap();
        let oracle = oracle_convergents(25);
        for (k, conv) in cs.iter().enumerate() {
            assert!(conv.is_reduced());
            assert_eq!(conv.p.to_string(), oracle[k].0.to_string());
            let q = c.rational(&BigRational::from_integer(conv.q.clone()));
            assert!(conv.error < q.sqr().recip());
            if k > 0 {
                assert!(conv.q > cs[k - 1].q);
            }
        }
    }

    #[test]
    fn convergents_run_out_of_precision() {
        let c = ctx();
        let err = pi_convergents(200, &c).unwrap_err();
        assert!(matches!(err, Error::PrecisionExhausted(_)));
    }

    #[test]
    fn near_distances() {
        let c = ctx();
        let one = signed_near_distance::<Float>(1, &c).unwrap();
        assert_eq!((one.m, one.delta.to_f64()), (0, 1.0));
        let d = signed_near_distance::<Float>(355, &c).unwrap();
        assert_eq!(d.m, 113);
        assert_eq!(format_sci(&d.delta, 4), "3.014e-5");
        let three = signed_near_distance::<Float>(3, &c).unwrap();
        assert_eq!(three.m, 1);
        let oracle = c.int(3) - c.pi();
        assert!((three.delta - oracle).abs() < c.tolerance(1));
    }

    #[test]
    fn sine_at_integers() {
        let c = ctx();
        let s355 = sin_integer::<Float>(355, &c).unwrap();
        // 60-digit oracle: reduce against MPFR π at 240 bits
        let wide = Float::with_val(240, 355) - Float::with_val(240, rug::float::Constant::Pi) * 113u32;
        let oracle = -wide.sin();
        let rel = (s355.clone().with_precision(240) - &oracle).abs() / oracle.clone().abs();
        assert!(rel < Float::with_val(240, 10).powi(-30));
        assert_eq!(format_sci(&s355, 5), "-3.0144e-5");
        assert!(format_fixed(&sin_integer::<Float>(1, &c).unwrap(), 20).starts_with("0.841470984807896"));
        assert!(format_fixed(&sin_integer::<Float>(2, &c).unwrap(), 20).starts_with("0.9092974268256816"));
    }

    #[test]
    fn precision_rule_is_enforced() {
        let c = PrecisionContext::<Float>::with_guard(30, 5).unwrap();
        assert!(signed_near_distance::<Float>(99_999, &c).is_ok());
        assert!(matches!(signed_near_distance::<Float>(100_001, &c), Err(Error::PrecisionExhausted(_))));
        // 355 passes the reduction rule but 1/|δ| costs 4.5 more digits
        assert!(matches!(sin_integer::<Float>(355, &c), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn regimes() {
        let c = ctx();
        assert_eq!(classify::<Float>(2, &c).unwrap(), Regime::G);
        assert_eq!(classify::<Float>(355, &c).unwrap(), Regime::R);
        assert_eq!(classify::<Float>(333, &c).unwrap(), Regime::I);
        let s333 = sin_integer::<Float>(333, &c).unwrap().abs().to_f64();
        assert!((s333 - 8.82e-3).abs() < 5e-5);
    }

    #[test]
    fn brute_force_census_to_1000() {
        let c = ctx();
        let census = regime_census_with(1000, &RegimeExponents::default(), 97, &c).unwrap();
        assert_eq!(census.resonant, vec![1, 3, 22, 355]);
        assert_eq!(census.total(), 1000);
        // oracle: f64 sines are ample at this range, nothing lies near a threshold
        let mut r = vec![];
        let mut i = 0;
        for n in 1..=1000u64 {
            let s = (n as f64).sin().abs();
            let nf = n as f64;
            if s < nf.powf(-1.5) {
                r.push(n);
            } else if s < nf.powf(-0.5) {
                i += 1;
            }
        }
        assert_eq!(census.resonant, r);
        assert_eq!(census.count_i, i);
        assert_eq!(census.intermediate.len() as u64, i);
        assert!(census.generic_bound_ratio <= 1.0);
        assert_eq!(census.sparsity.last().unwrap().n, 1000);
    }

    #[test]
    fn census_is_chunk_independent() {
        let c = ctx();
        let a = regime_census_with(5000, &RegimeExponents::default(), 1, &c).unwrap();
        let b = regime_census_with(5000, &RegimeExponents::default(), 1 << 16, &c).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn census_csv_rows() {
        let c = ctx();
        let mut buf = Vec::new();
        write_census_csv(400, &RegimeExponents::default(), 64, &c, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,m,delta,abs_sin,regime");
        assert_eq!(lines.len(), 401);
        assert!(lines[355].starts_with("355,113,0.0000301443"));
        assert!(lines[355].ends_with(",R"));
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("3/2".parse::<Exponent>().unwrap(), Exponent::new(3, 2));
        assert_eq!("1".parse::<Exponent>().unwrap(), Exponent::new(1, 1));
        assert!("0/2".parse::<Exponent>().is_err());
        assert!("x".parse::<Exponent>().is_err());
        let bad = RegimeExponents { generic: Exponent::new(3, 2), resonant: Exponent::new(1, 2) };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn weyl_sums() {
        let c = ctx();
        let w = weyl_sum_magnitude::<Float>(1, 10, &c).unwrap();
        assert!(format_fixed(&w, 10).starts_with("0.6465120256"));
        assert!((weyl_sum_magnitude::<Float>(1, 1, &c).unwrap() - c.int(1)).abs() < c.tolerance(2));
        let w2 = weyl_sum_magnitude::<Float>(2, 100, &c).unwrap();
        assert!((w2.to_f64() - 0.9604).abs() < 1e-4);
        for (h, n) in [(1, 10), (2, 100), (7, 1000), (113, 355)] {
            let direct = weyl_sum_magnitude::<Float>(h, n, &c).unwrap();
            let closed = weyl_closed_form::<Float>(h, n, &c).unwrap();
            let allowed = c.tolerance(3 + digits_of(2 * h * n) as i32) * c.uint(n);
            assert!((direct - closed).abs() < allowed, "h = {h}, N = {n}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn reduction_is_consistent(n in 1u64..10_000_000) {
            let c = ctx();
            let t = integer_trig::<Float>(n, &c).unwrap();
            let direct = Float::with_val(c.bits() + 40, n).sin();
            let diff = (t.sin.clone().with_precision(c.bits() + 40) - direct).abs();
            // the reduction itself is exact to ~n ulps of π
            let allowed = c.tolerance(2 + digits_of(n) as i32).with_precision(c.bits() + 40);
            prop_assert!(diff < allowed);
            let via_delta = Real::sin(&t.near.delta) * c.int(t.near.sign());
            prop_assert!((via_delta - &t.sin).abs() < c.tolerance(2));
            let unit = t.sin.sqr() + t.cos.sqr();
            prop_assert!((unit - c.int(1)).abs() < c.tolerance(2));
            let double = t.sin_half.clone() * &t.cos_half * c.int(2);
            prop_assert!((double - &t.sin).abs() < c.tolerance(2));
            prop_assert!(t.near.delta.abs() <= c.pi().clone() / c.int(2));
        }
    }
}
