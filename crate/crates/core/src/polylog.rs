//! Clausen-type sums, polylogarithms on the unit circle, and `L(3, χ₋₃)`.
//!
//! Every value is a truncated direct sum carrying a rigorous bound on the
//! omitted tail plus accumulated rounding; nothing is declared "converged".

use serde::Serialize;

use crate::error::{Error, Result};
use crate::precision::{Complex, PrecisionContext, Real};
use crate::series::{partial_sum, SeriesId};

/// A truncated sum with a bound on `|true value − value|`.
#[derive(Clone, Debug)]
pub struct Bounded<T> {
    pub value: T,
    pub bound: T,
    pub terms: u64,
}

/// `Li_s(e^{iθ}) = Σ e^{inθ}/n^s`.
#[derive(Clone, Debug)]
pub struct UnitCirclePolylogValue<T> {
    pub order: u32,
    pub theta: T,
    pub value: Complex<T>,
    /// Bound on each of the real and imaginary parts.
    pub tail_bound: T,
}

/// Re-anchor the rotation recurrence this often.
const ANCHOR: u64 = 1024;

fn check_order(s: u32) -> Result<()> {
    if !(2..=3).contains(&s) {
        return Err(Error::InvalidArgument(format!("order s = {s} is not 2 or 3")));
    }
    Ok(())
}

/// Tail bound for `Σ_{n>N} e^{inθ}/n^s`, each of real and imaginary part:
/// the smaller of the absolute-value integral `N^(1−s)/(s−1)` and the Abel
/// bound `(N+1)^(−s)/|sin(θ/2)|` (partial sums of `e^{inθ}` stay below `1/|sin(θ/2)|`),
/// plus `N` half-ulps of rounding.
fn unit_circle_tail<T: Real>(s: u32, theta: &T, n: u64, ctx: &PrecisionContext<T>) -> T {
    let nf = ctx.uint(n);
    let integral = nf.powi(1 - s as i32) / ctx.int(s as i64 - 1);
    let half_sin = (theta.clone() / ctx.int(2)).sin().abs();
    let bound = if half_sin.is_zero() {
        integral
    } else {
        let abel = (nf.clone() + ctx.one()).powi(-(s as i32)) / half_sin;
        if abel < integral {
            abel
        } else {
            integral
        }
    };
    bound + nf * ctx.tolerance(1)
}

/// `(Σ cos(nθ)/n^s, Σ sin(nθ)/n^s)` for `n ≤ N`.
fn unit_circle_sums<T: Real>(s: u32, theta: &T, n_max: u64, ctx: &PrecisionContext<T>) -> (T, T) {
    let (mut re, mut im) = (ctx.zero(), ctx.zero());
    let (step_s, step_c) = theta.sin_cos();
    let (mut sn, mut cn) = (ctx.zero(), ctx.one());
    for n in 1..=n_max {
        if n % ANCHOR == 1 {
            (sn, cn) = (theta.clone() * ctx.uint(n)).sin_cos();
        } else {
            let c = cn.clone() * &step_c - sn.clone() * &step_s;
            sn = sn * &step_c + cn * &step_s;
            cn = c;
        }
        let w = ctx.uint(n).powi(s as i32);
        re += cn.clone() / &w;
        im += sn.clone() / &w;
    }
    (re, im)
}

fn check_terms(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("truncation N must be positive".into()));
    }
    Ok(())
}

/// `Σ_{n≤N} cos(nθ)/n^s`; for `s = 3` this is `Cl₃(θ)`.
pub fn clausen_cos<T: Real>(s: u32, theta: &T, n_max: u64, ctx: &PrecisionContext<T>) -> Result<Bounded<T>> {
    check_order(s)?;
    check_terms(n_max)?;
    let (re, _) = unit_circle_sums(s, theta, n_max, ctx);
    Ok(Bounded { value: re, bound: unit_circle_tail(s, theta, n_max, ctx), terms: n_max })
}

/// `Σ_{n≤N} sin(nθ)/n^s`; for `s = 3` this is `S₃(θ)`.
pub fn glaisher_sin<T: Real>(s: u32, theta: &T, n_max: u64, ctx: &PrecisionContext<T>) -> Result<Bounded<T>> {
    check_order(s)?;
    check_terms(n_max)?;
    let (_, im) = unit_circle_sums(s, theta, n_max, ctx);
    Ok(Bounded { value: im, bound: unit_circle_tail(s, theta, n_max, ctx), terms: n_max })
}

pub fn polylog_unit<T: Real>(
    s: u32,
    theta: &T,
    n_max: u64,
    ctx: &PrecisionContext<T>,
) -> Result<UnitCirclePolylogValue<T>> {
    check_order(s)?;
    check_terms(n_max)?;
    let (re, im) = unit_circle_sums(s, theta, n_max, ctx);
    Ok(UnitCirclePolylogValue {
        order: s,
        theta: theta.clone(),
        value: Complex::new(re, im),
        tail_bound: unit_circle_tail(s, theta, n_max, ctx),
    })
}

/// `χ₋₃(n)`: `+1, −1, 0` for `n ≡ 1, 2, 0 (mod 3)`.
pub fn chi3(n: u64) -> i64 {
    [0, 1, -1][(n % 3) as usize]
}

/// `Σ_{n≤N} χ₋₃(n)/n³`. Partial sums of `χ₋₃` lie in `{−1, 0, 1}`, so Abel
/// summation bounds the tail by `(N+1)^(−3)`.
pub fn l_chi3_series<T: Real>(n_max: u64, ctx: &PrecisionContext<T>) -> Result<Bounded<T>> {
    check_terms(n_max)?;
    let mut sum = ctx.zero();
    for n in 1..=n_max {
        match chi3(n) {
            1 => sum += ctx.uint(n).powi(-3),
            -1 => sum -= ctx.uint(n).powi(-3),
            _ => {}
        }
    }
    let nf = ctx.uint(n_max);
    let bound = (nf.clone() + ctx.one()).powi(-3) + nf * ctx.tolerance(1);
    Ok(Bounded { value: sum, bound, terms: n_max })
}

/// Truncation at which the unit-circle tail bound drops below `target`.
pub fn terms_for_tail<T: Real>(s: u32, theta: &T, target: &T, ctx: &PrecisionContext<T>) -> u64 {
    let mut n = 16u64;
    while unit_circle_tail(s, theta, n, ctx) > *target && n < 1 << 40 {
        n *= 2;
    }
    n
}

/// Numerical comparison of `F_cot`, `F_tan` with their claimed Clausen reductions at `θ = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct ClausenReport {
    pub n: u64,
    pub f_cot: String,
    pub f_tan: String,
    pub cl3_1: String,
    pub s3_1: String,
    pub s2_1: String,
    /// Tail bound shared by the three polylog values.
    pub polylog_bound: String,
    /// `F_cot − 2 Cl₃(1)`
    pub gap_cot_leading: String,
    /// `F_cot − (2 Cl₃(1) − π ζ(2))`
    pub gap_cot_with_zeta2: String,
    /// `F_cot − (2 Cl₃(1) − π² ln 2 / 3 + S₂(1))`
    pub gap_cot_precise: String,
    /// `F_tan − 2 S₃(1)`
    pub gap_tan_leading: String,
}

pub fn test_clausen_reduction<T: Real>(n_max: u64, ctx: &PrecisionContext<T>) -> Result<ClausenReport> {
    if n_max < 1000 {
        return Err(Error::InvalidArgument("the Clausen comparison needs N ≥ 1000".into()));
    }
    let sig = ctx.decimal_digits() as usize;
    let fmt = |x: &T| crate::precision::format_sig(x, sig);
    let f_cot = partial_sum(SeriesId::FCot, n_max, ctx, None)?.re;
    let f_tan = partial_sum(SeriesId::FTan, n_max, ctx, None)?.re;
    let one = ctx.one();
    let li3 = polylog_unit(3, &one, n_max, ctx)?;
    let li2 = polylog_unit(2, &one, n_max, ctx)?;
    let (cl3, s3, s2) = (li3.value.re, li3.value.im, li2.value.im);
    let pi = ctx.pi();
    let zeta2 = pi.sqr() / ctx.int(6);
    let ln2 = ctx.int(2).ln();
    let two_cl3 = cl3.clone() * ctx.int(2);
    let gap_leading = f_cot.clone() - &two_cl3;
    let gap_zeta2 = f_cot.clone() - (two_cl3.clone() - pi.clone() * &zeta2);
    let precise = two_cl3 - pi.sqr() * ln2 / ctx.int(3) + &s2;
    let gap_precise = f_cot.clone() - precise;
    let gap_tan = f_tan.clone() - s3.clone() * ctx.int(2);
    let bound = if li2.tail_bound > li3.tail_bound { li2.tail_bound } else { li3.tail_bound };
    Ok(ClausenReport {
        n: n_max,
        f_cot: fmt(&f_cot),
        f_tan: fmt(&f_tan),
        cl3_1: fmt(&cl3),
        s3_1: fmt(&s3),
        s2_1: fmt(&s2),
        polylog_bound: crate::precision::format_sci(&bound, 3),
        gap_cot_leading: fmt(&gap_leading),
        gap_cot_with_zeta2: fmt(&gap_zeta2),
        gap_cot_precise: fmt(&gap_precise),
        gap_tan_leading: fmt(&gap_tan),
    })
}
