//! Term providers and resumable summation for the series built on `K(n)/n³`.
//!
//! Terms are evaluated in parallel chunks, but always accumulated one at a
//! time in ascending `n`. The floating-point sum therefore depends only on
//! `N` and the precision, never on the chunk size, the worker count, or where
//! a run was checkpointed.
//!
//! With `wd` working digits the naive running sum of `N` terms loses at most
//! `log₁₀ N` digits to rounding (each addition contributes one half-ulp of
//! the accumulator); at `N ≤ 10⁷` that is under half the default guard.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diophantine::{self, check_division_rule, integer_trig, IntegerTrig, Regime};
use crate::error::{Error, Result};
use crate::kernel::QFormTerms;
use crate::precision::{Complex, PrecisionContext, PrecisionStamp, Real};

pub const DEFAULT_CHUNK: u64 = 1 << 16;
pub const DEFAULT_SPIKE_THRESHOLD: f64 = 1.0;
/// Summation stops here; beyond it the argument-reduction rule needs more guard digits than the defaults carry.
pub const MAX_TERMS: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeriesId {
    /// `1/(n³ sin²n)`
    #[serde(rename = "S")]
    S,
    /// `sin 3n / (n³ sin³n)`
    #[serde(rename = "R1STAR")]
    R1Star,
    /// `1/(n³ (q+1))`, `q = e^{in}`
    #[serde(rename = "A")]
    A,
    /// `1/(n³ (q+1)²)`
    #[serde(rename = "B")]
    B,
    /// `1/(n³ (q−1))`
    #[serde(rename = "C")]
    C,
    /// `1/(n³ (q−1)²)`
    #[serde(rename = "D")]
    D,
    /// `cot(n/2)/n³`
    #[serde(rename = "F_COT")]
    FCot,
    /// `tan(n/2)/n³`
    #[serde(rename = "F_TAN")]
    FTan,
    /// `cot²(n/2)/n³`
    #[serde(rename = "G_COT")]
    GCot,
    /// `tan²(n/2)/n³`
    #[serde(rename = "G_TAN")]
    GTan,
    /// `1/n³`
    #[serde(rename = "H3")]
    H3,
}

impl SeriesId {
    pub const ALL: [SeriesId; 11] = [
        SeriesId::S,
        SeriesId::R1Star,
        SeriesId::A,
        SeriesId::B,
        SeriesId::C,
        SeriesId::D,
        SeriesId::FCot,
        SeriesId::FTan,
        SeriesId::GCot,
        SeriesId::GTan,
        SeriesId::H3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesId::S => "S",
            SeriesId::R1Star => "R1STAR",
            SeriesId::A => "A",
            SeriesId::B => "B",
            SeriesId::C => "C",
            SeriesId::D => "D",
            SeriesId::FCot => "F_COT",
            SeriesId::FTan => "F_TAN",
            SeriesId::GCot => "G_COT",
            SeriesId::GTan => "G_TAN",
            SeriesId::H3 => "H3",
        }
    }

    /// Series whose terms are real.
    pub fn is_real(self) -> bool {
        !matches!(self, SeriesId::A | SeriesId::B | SeriesId::C | SeriesId::D)
    }
}

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| *c != '_' && *c != '*').collect::<String>().to_ascii_uppercase();
        let id = match key.as_str() {
            "S" => SeriesId::S,
            "R1STAR" | "R1" => SeriesId::R1Star,
            "A" => SeriesId::A,
            "B" => SeriesId::B,
            "C" => SeriesId::C,
            "D" => SeriesId::D,
            "FCOT" => SeriesId::FCot,
            "FTAN" => SeriesId::FTan,
            "GCOT" => SeriesId::GCot,
            "GTAN" => SeriesId::GTan,
            "H3" => SeriesId::H3,
            _ => return Err(Error::InvalidArgument(format!("unknown series {s:?}"))),
        };
        Ok(id)
    }
}

fn cube<T: Real>(n: u64, ctx: &PrecisionContext<T>) -> T {
    ctx.uint(n).powi(3)
}

/// One term from a precomputed reduction of `n`; `R1STAR` reduces `3n` separately.
fn term_from_trig<T: Real>(
    id: SeriesId,
    n: u64,
    trig: &IntegerTrig<T>,
    ctx: &PrecisionContext<T>,
) -> Result<Complex<T>> {
    let n3 = cube(n, ctx);
    let real = |v: T| Ok(Complex::real(v));
    match id {
        SeriesId::H3 => real(n3.recip()),
        SeriesId::S => real((n3 * trig.sin.sqr()).recip()),
        SeriesId::R1Star => {
            let triple = n
                .checked_mul(3)
                .ok_or_else(|| Error::PrecisionExhausted(format!("3n overflows at n = {n}")))?;
            let s3 = integer_trig(triple, ctx)?.sin;
            real(s3 / (n3 * trig.sin.powi(3)))
        }
        SeriesId::FCot => real(trig.cos_half.clone() / (trig.sin_half.clone() * n3)),
        SeriesId::FTan => real(trig.sin_half.clone() / (trig.cos_half.clone() * n3)),
        SeriesId::GCot => real((trig.cos_half.clone() / &trig.sin_half).sqr() / n3),
        SeriesId::GTan => real((trig.sin_half.clone() / &trig.cos_half).sqr() / n3),
        SeriesId::A | SeriesId::B | SeriesId::C | SeriesId::D => {
            let q = QFormTerms::from_half_angle(&trig.sin_half, &trig.cos_half);
            let inv = match id {
                SeriesId::A => q.inv_plus,
                SeriesId::B => q.inv_plus.clone() * q.inv_plus,
                SeriesId::C => q.inv_minus,
                _ => q.inv_minus.clone() * q.inv_minus,
            };
            Ok(Complex::new(inv.re / &n3, inv.im / &n3))
        }
    }
}

fn reduce<T: Real>(n: u64, ctx: &PrecisionContext<T>) -> Result<IntegerTrig<T>> {
    let trig = integer_trig(n, ctx)?;
    check_division_rule(&trig.near, ctx)?;
    Ok(trig)
}

/// The `n`-th term of a series at working precision.
pub fn term<T: Real>(id: SeriesId, n: u64, ctx: &PrecisionContext<T>) -> Result<Complex<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("series index starts at 1".into()));
    }
    if id == SeriesId::H3 {
        return Ok(Complex::real(cube(n, ctx).recip()));
    }
    let trig = reduce(n, ctx).map_err(|e| e.at_term(id, n))?;
    term_from_trig(id, n, &trig, ctx).map_err(|e| e.at_term(id, n))
}

/// Several series' terms at one `n`, sharing the reduction.
pub fn terms<T: Real>(ids: &[SeriesId], n: u64, ctx: &PrecisionContext<T>) -> Result<Vec<Complex<T>>> {
    if ids.iter().all(|id| *id == SeriesId::H3) {
        return ids.iter().map(|id| term(*id, n, ctx)).collect();
    }
    let first = ids.iter().find(|id| **id != SeriesId::H3).copied().unwrap_or(SeriesId::H3);
    let trig = reduce(n, ctx).map_err(|e| e.at_term(first, n))?;
    ids.iter().map(|id| term_from_trig(*id, n, &trig, ctx).map_err(|e| e.at_term(*id, n))).collect()
}

/// A term with `|term| ≥ threshold`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpikeRecord<T> {
    pub n: u64,
    pub value: Complex<T>,
    pub abs_delta: T,
    pub regime: Regime,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesState<T> {
    pub id: SeriesId,
    pub last_index: u64,
    pub re: T,
    pub im: T,
    pub stamp: PrecisionStamp,
    pub spike_threshold: f64,
    pub spikes: Vec<SpikeRecord<T>>,
}

impl<T: Real> SeriesState<T> {
    pub fn new(id: SeriesId, spike_threshold: f64, ctx: &PrecisionContext<T>) -> Self {
        SeriesState {
            id,
            last_index: 0,
            re: ctx.zero(),
            im: ctx.zero(),
            stamp: ctx.stamp(),
            spike_threshold,
            spikes: Vec::new(),
        }
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.clone(), self.im.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumOptions {
    pub chunk: u64,
    pub spike_threshold: f64,
}

impl Default for SumOptions {
    fn default() -> Self {
        Self { chunk: DEFAULT_CHUNK, spike_threshold: DEFAULT_SPIKE_THRESHOLD }
    }
}

fn check_n(n_max: u64) -> Result<()> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if n_max > MAX_TERMS {
        return Err(Error::InvalidArgument(format!("N = {n_max} exceeds the supported {MAX_TERMS}")));
    }
    Ok(())
}

fn chunks(from: u64, to: u64, chunk: u64) -> impl Iterator<Item = (u64, u64)> {
    let chunk = chunk.max(1);
    let mut lo = from;
    std::iter::from_fn(move || {
        if lo > to {
            return None;
        }
        let hi = lo.saturating_add(chunk - 1).min(to);
        let out = (lo, hi);
        lo = hi + 1;
        Some(out)
    })
}

fn spike_of<T: Real>(
    id: SeriesId,
    n: u64,
    value: &Complex<T>,
    ctx: &PrecisionContext<T>,
) -> Result<SpikeRecord<T>> {
    let near = diophantine::signed_near_distance(n, ctx)?;
    let s_abs = near.delta.abs().sin();
    let regime = diophantine::classify_abs(n, &s_abs, &Default::default(), ctx).map_err(|e| e.at_term(id, n))?;
    Ok(SpikeRecord { n, value: value.clone(), abs_delta: near.delta.abs(), regime })
}

pub fn partial_sum<T: Real>(
    id: SeriesId,
    n_max: u64,
    ctx: &PrecisionContext<T>,
    resume_from: Option<SeriesState<T>>,
) -> Result<SeriesState<T>> {
    partial_sum_with(id, n_max, ctx, resume_from, SumOptions::default())
}

/// Sums terms `last_index+1 ..= n_max` onto `resume_from` (or from scratch).
pub fn partial_sum_with<T: Real>(
    id: SeriesId,
    n_max: u64,
    ctx: &PrecisionContext<T>,
    resume_from: Option<SeriesState<T>>,
    opts: SumOptions,
) -> Result<SeriesState<T>> {
    check_n(n_max)?;
    let mut state = match resume_from {
        None => SeriesState::new(id, opts.spike_threshold, ctx),
        Some(s) => {
            if s.id != id {
                return Err(Error::CheckpointMismatch(format!("checkpoint is for series {}, not {id}", s.id)));
            }
            if s.stamp != ctx.stamp() {
                return Err(Error::CheckpointMismatch(format!(
                    "checkpoint precision {:?} differs from the context {:?}",
                    s.stamp,
                    ctx.stamp()
                )));
            }
            if s.spike_threshold != opts.spike_threshold {
                return Err(Error::CheckpointMismatch(format!(
                    "checkpoint spike threshold {} differs from {}",
                    s.spike_threshold, opts.spike_threshold
                )));
            }
            if s.last_index > n_max {
                return Err(Error::CheckpointMismatch(format!(
                    "checkpoint is already at N = {}, beyond the requested {n_max}",
                    s.last_index
                )));
            }
            s
        }
    };
    let threshold = ctx.real(opts.spike_threshold);
    for (lo, hi) in chunks(state.last_index + 1, n_max, opts.chunk) {
        let values: Vec<Result<Complex<T>>> = (lo..=hi).into_par_iter().map(|n| term(id, n, ctx)).collect();
        for (n, v) in (lo..=hi).zip(values) {
            let v = v?;
            let big = if id.is_real() { v.re.abs() >= threshold } else { v.abs() >= threshold };
            if big {
                state.spikes.push(spike_of(id, n, &v, ctx)?);
            }
            state.re += &v.re;
            state.im += &v.im;
        }
        state.last_index = hi;
    }
    Ok(state)
}

/// Partial sums of several series to `n_max` in one pass.
pub fn sum_many<T: Real>(ids: &[SeriesId], n_max: u64, ctx: &PrecisionContext<T>) -> Result<Vec<Complex<T>>> {
    check_n(n_max)?;
    let mut acc: Vec<Complex<T>> = ids.iter().map(|_| Complex::zero(ctx.bits())).collect();
    for (lo, hi) in chunks(1, n_max, DEFAULT_CHUNK) {
        let rows: Vec<Result<Vec<Complex<T>>>> = (lo..=hi).into_par_iter().map(|n| terms(ids, n, ctx)).collect();
        for row in rows {
            for (a, v) in acc.iter_mut().zip(row?) {
                a.re += &v.re;
                a.im += &v.im;
            }
        }
    }
    Ok(acc)
}

/// `R₁*(N) − 3S(N) + 4H₃(N)` and the ζ(3)-referenced variant.
#[derive(Clone, Debug)]
pub struct ReductionReport<T> {
    pub n: u64,
    pub r1star: T,
    pub s: T,
    pub h3: T,
    /// `|R₁*(N) − 3S(N) + 4H₃(N)|`
    pub termwise: T,
    /// `|R₁*(N) − (3S(N) − 4ζ(3))|`
    pub zeta_variant: T,
}

pub fn verify_reduction<T: Real>(n_max: u64, ctx: &PrecisionContext<T>) -> Result<ReductionReport<T>> {
    let sums = sum_many(&[SeriesId::R1Star, SeriesId::S, SeriesId::H3], n_max, ctx)?;
    let (r1, s, h3) = (sums[0].re.clone(), sums[1].re.clone(), sums[2].re.clone());
    let three_s = s.clone() * ctx.int(3);
    let termwise = (r1.clone() - &three_s + h3.clone() * ctx.int(4)).abs();
    let zeta_variant = (r1.clone() - three_s + ctx.zeta3().clone() * ctx.int(4)).abs();
    Ok(ReductionReport { n: n_max, r1star: r1, s, h3, termwise, zeta_variant })
}

/// `R₁*(N) = −(5/2)H₃(N) + (3/4)(G_cot(N) + G_tan(N))`.
#[derive(Clone, Debug)]
pub struct ExplicitReport<T> {
    pub n: u64,
    pub r1star: T,
    pub h3: T,
    pub g_cot: T,
    pub g_tan: T,
    pub residual: T,
    /// `−(5/2)ζ(3) + (3/4)(G_cot(N) + G_tan(N))`
    pub zeta_form: T,
}

pub fn verify_explicit<T: Real>(n_max: u64, ctx: &PrecisionContext<T>) -> Result<ExplicitReport<T>> {
    let ids = [SeriesId::R1Star, SeriesId::H3, SeriesId::GCot, SeriesId::GTan];
    let sums = sum_many(&ids, n_max, ctx)?;
    let [r1, h3, gc, gt] = [0, 1, 2, 3].map(|i| sums[i].re.clone());
    let g = (gc.clone() + &gt) * ctx.ratio(3, 4);
    let five_halves = ctx.ratio(5, 2);
    let residual = (r1.clone() + h3.clone() * &five_halves - &g).abs();
    let zeta_form = g - ctx.zeta3().clone() * five_halves;
    Ok(ExplicitReport { n: n_max, r1star: r1, h3, g_cot: gc, g_tan: gt, residual, zeta_form })
}

/// `R₁*(N)` against `−4H₃ + 3A − 3B − 3C − 3D`.
#[derive(Clone, Debug)]
pub struct PartialFractionReport<T> {
    pub n: u64,
    pub r1star: T,
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
    pub combination: Complex<T>,
    /// `|R₁*(N) − combination|`
    pub residual: T,
    /// `|Im combination|`
    pub imaginary: T,
}

pub fn verify_partial_fraction<T: Real>(n_max: u64, ctx: &PrecisionContext<T>) -> Result<PartialFractionReport<T>> {
    let ids = [SeriesId::R1Star, SeriesId::H3, SeriesId::A, SeriesId::B, SeriesId::C, SeriesId::D];
    let sums = sum_many(&ids, n_max, ctx)?;
    let r1 = sums[0].re.clone();
    let three = ctx.int(3);
    let combination = Complex::real(sums[1].re.clone() * ctx.int(-4))
        + sums[2].scale(&three)
        - sums[3].scale(&three)
        - sums[4].scale(&three)
        - sums[5].scale(&three);
    let residual = (Complex::real(r1.clone()) - combination.clone()).abs();
    let imaginary = combination.im.abs();
    Ok(PartialFractionReport {
        n: n_max,
        r1star: r1,
        a: sums[2].clone(),
        b: sums[3].clone(),
        c: sums[4].clone(),
        d: sums[5].clone(),
        combination,
        residual,
        imaginary,
    })
}

/// Largest per-term deviation of each termwise identity over `1..=n_max`.
#[derive(Clone, Debug)]
pub struct TermwiseReport<T> {
    pub n: u64,
    /// `max |r_n − 3s_n + 4h_n|`
    pub reduction: T,
    /// `max |r_n + (5/2)h_n − (3/4)(gc_n + gt_n)|`
    pub explicit: T,
    /// `max |r_n − (−4h_n + 3(a_n − b_n − c_n − d_n))|`
    pub lerch: T,
    /// `max |Im(3(a_n − b_n − c_n − d_n))|`
    pub lerch_imaginary: T,
}

pub fn termwise_identities<T: Real>(n_max: u64, ctx: &PrecisionContext<T>) -> Result<TermwiseReport<T>> {
    use SeriesId::*;
    check_n(n_max)?;
    let ids = [R1Star, S, H3, GCot, GTan, A, B, C, D];
    let mut report = TermwiseReport {
        n: n_max,
        reduction: ctx.zero(),
        explicit: ctx.zero(),
        lerch: ctx.zero(),
        lerch_imaginary: ctx.zero(),
    };
    let (three, four) = (ctx.int(3), ctx.int(4));
    let (five_halves, three_quarters) = (ctx.ratio(5, 2), ctx.ratio(3, 4));
    for (lo, hi) in chunks(1, n_max, DEFAULT_CHUNK) {
        let rows: Vec<Result<[T; 4]>> = (lo..=hi)
            .into_par_iter()
            .map(|n| {
                let t = terms(&ids, n, ctx)?;
                let (r, s, h) = (&t[0].re, &t[1].re, &t[2].re);
                let red = (r.clone() - s.clone() * &three + h.clone() * &four).abs();
                let exp = (r.clone() + h.clone() * &five_halves - (t[3].re.clone() + &t[4].re) * &three_quarters).abs();
                let abcd = (t[5].clone() - t[6].clone() - t[7].clone() - t[8].clone()).scale(&three);
                let lerch = (abcd.re.clone() - h.clone() * &four - r).abs();
                Ok([red, exp, lerch, abcd.im.abs()])
            })
            .collect();
        for row in rows {
            let [a, b, c, d] = row?;
            for (slot, v) in [
                (&mut report.reduction, a),
                (&mut report.explicit, b),
                (&mut report.lerch, c),
                (&mut report.lerch_imaginary, d),
            ] {
                if v > *slot {
                    *slot = v;
                }
            }
        }
    }
    Ok(report)
}

/// One Richardson step for an error `∝ N^(−1/2)`.
pub fn richardson_half<T: Real>(s1: &T, n1: u64, s2: &T, n2: u64) -> Result<T> {
    if n1 == 0 || n2 <= n1 {
        return Err(Error::InvalidArgument(format!("need N2 > N1 ≥ 1, got N1 = {n1}, N2 = {n2}")));
    }
    let prec = s2.precision();
    let ratio = (T::from_u64(n2, prec) / T::from_u64(n1, prec)).sqrt();
    let diff = s2.clone() - s1;
    Ok(s2.clone() + diff / (ratio - T::from_i64(1, prec)))
}

/// All `n ≤ n_max` with `|term(id, n)| ≥ threshold`.
pub fn spike_ledger<T: Real>(
    id: SeriesId,
    n_max: u64,
    threshold: f64,
    ctx: &PrecisionContext<T>,
) -> Result<Vec<SpikeRecord<T>>> {
    if !(threshold > 0.0) {
        return Err(Error::InvalidArgument("spike threshold must be positive".into()));
    }
    let opts = SumOptions { chunk: DEFAULT_CHUNK, spike_threshold: threshold };
    Ok(partial_sum_with(id, n_max, ctx, None, opts)?.spikes)
}

/// Polynomial extrapolation to `h = 0` through `(h_i, y_i)` (Neville).
pub fn neville_at_zero<T: Real>(hs: &[T], ys: &[T]) -> Result<T> {
    if hs.is_empty() || hs.len() != ys.len() {
        return Err(Error::InvalidArgument("extrapolation needs matching, non-empty samples".into()));
    }
    let mut p: Vec<T> = ys.to_vec();
    for j in 1..p.len() {
        for i in (j..p.len()).rev() {
            let num = hs[i].clone() * &p[i - 1] - hs[i - j].clone() * &p[i];
            p[i] = num / (hs[i].clone() - &hs[i - j]);
        }
    }
    Ok(p.pop().expect("non-empty"))
}

#[derive(Clone, Debug)]
pub struct AccelerationRun<T> {
    pub label: String,
    pub sample_n: Vec<u64>,
    pub samples: Vec<T>,
    pub estimate: T,
    /// `|estimate − direct|`
    pub discrepancy: T,
    pub consistent: bool,
}

#[derive(Clone, Debug)]
pub struct AccelerationReport<T> {
    pub direct_n: u64,
    pub direct: T,
    /// Spike term removed from every sample.
    pub exclude_spike: AccelerationRun<T>,
    /// The same samples with the spike kept.
    pub include_spike: AccelerationRun<T>,
    /// Samples that stop before the spike is reached.
    pub pre_spike: AccelerationRun<T>,
    /// Control: the smooth series `H₃` against its own direct sum.
    pub control: AccelerationRun<T>,
    pub control_direct: T,
}

pub const SPIKE_INDEX: u64 = 355;

fn accelerate<T: Real>(
    label: &str,
    ns: &[u64],
    samples: Vec<T>,
    direct: &T,
    tolerance: &T,
    ctx: &PrecisionContext<T>,
) -> Result<AccelerationRun<T>> {
    let hs: Vec<T> = ns.iter().map(|n| ctx.uint(*n).recip()).collect();
    let estimate = neville_at_zero(&hs, &samples)?;
    let discrepancy = (estimate.clone() - direct).abs();
    let consistent = discrepancy <= *tolerance;
    Ok(AccelerationRun { label: label.into(), sample_n: ns.to_vec(), samples, estimate, discrepancy, consistent })
}

/// Sums of `id` at each of the ascending `ns`, optionally dropping one index.
fn sampled_sums<T: Real>(
    id: SeriesId,
    ns: &[u64],
    skip: Option<u64>,
    ctx: &PrecisionContext<T>,
) -> Result<Vec<T>> {
    let mut state: Option<SeriesState<T>> = None;
    let mut out = Vec::with_capacity(ns.len());
    let mut skipped = ctx.zero();
    for &n in ns {
        let s = partial_sum(id, n, ctx, state.take())?;
        if let Some(k) = skip {
            if k <= n && skipped.is_zero() {
                skipped = term(id, k, ctx)?.re;
            }
        }
        out.push(s.re.clone() - &skipped);
        state = Some(s);
    }
    Ok(out)
}

/// Polynomial-in-`1/N` extrapolation of `R₁*` partial sums, with and
/// without the `n = 355` spike, against direct summation.
///
/// The extrapolator assumes a smooth error expansion. It happily returns a
/// value when the spike is dropped or not yet reached, and that value is off
/// by the spike's weight; only the direct sum exposes the failure.
pub fn acceleration_failure_demo<T: Real>(ctx: &PrecisionContext<T>) -> Result<AccelerationReport<T>> {
    acceleration_failure_demo_with(100_000, ctx)
}

pub fn acceleration_failure_demo_with<T: Real>(
    direct_n: u64,
    ctx: &PrecisionContext<T>,
) -> Result<AccelerationReport<T>> {
    let late: Vec<u64> = (6..12).map(|k| 10u64 << k).collect();
    let early: Vec<u64> = (0..6).map(|k| 10u64 << k).collect();
    if direct_n <= *late.last().expect("samples") {
        return Err(Error::InvalidArgument(format!("direct sum needs N > {}", late.last().unwrap())));
    }
    let direct = partial_sum(SeriesId::R1Star, direct_n, ctx, None)?.re;
    let tol = ctx.int(1);
    let exclude = sampled_sums(SeriesId::R1Star, &late, Some(SPIKE_INDEX), ctx)?;
    let include = sampled_sums(SeriesId::R1Star, &late, None, ctx)?;
    let pre = sampled_sums(SeriesId::R1Star, &early, None, ctx)?;
    let control_ns: Vec<u64> = (0..8).map(|k| 10u64 << k).collect();
    let control_samples = sampled_sums(SeriesId::H3, &control_ns, None, ctx)?;
    let control_direct = partial_sum(SeriesId::H3, direct_n, ctx, None)?.re;
    Ok(AccelerationReport {
        direct_n,
        exclude_spike: accelerate("exclude n = 355", &late, exclude, &direct, &tol, ctx)?,
        include_spike: accelerate("include n = 355", &late, include, &direct, &tol, ctx)?,
        pre_spike: accelerate("stop before n = 355", &early, pre, &direct, &tol, ctx)?,
        control: accelerate("H3", &control_ns, control_samples, &control_direct, &ctx.real(1e-10), ctx)?,
        control_direct,
        direct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::format_fixed;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use rug::Float;

    fn ctx() -> PrecisionContext<Float> {
        PrecisionContext::new(30).unwrap()
    }

    #[test]
    fn ids_parse_and_print() {
        for id in SeriesId::ALL {
            assert_eq!(id.name().parse::<SeriesId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.name()));
        }
        assert_eq!("r1*".parse::<SeriesId>().unwrap(), SeriesId::R1Star);
        assert_eq!("fcot".parse::<SeriesId>().unwrap(), SeriesId::FCot);
        assert!("Q".parse::<SeriesId>().is_err());
    }

    #[test]
    fn spike_terms() {
        let c = ctx();
        let s = term(SeriesId::S, 355, &c).unwrap().re;
        let r = term(SeriesId::R1Star, 355, &c).unwrap().re;
        assert!(format_fixed(&s, 3).starts_with("24.59"));
        assert!(format_fixed(&r, 4).starts_with("73.794"));
        assert_eq!(term(SeriesId::H3, 1, &c).unwrap().re, c.int(1));
    }

    #[test]
    fn h3_against_exact_rationals() {
        let c = ctx();
        let exact: BigRational = (1..=10i64)
            .map(|n| BigRational::new(BigInt::from(1), BigInt::from(n * n * n)))
            .fold(BigRational::from_integer(BigInt::from(0)), |a, b| a + b);
        let s = partial_sum(SeriesId::H3, 10, &c, None).unwrap();
        assert!((s.re.clone() - c.rational(&exact)).abs() < c.tolerance(2));
        assert!(format_fixed(&s.re, 6).starts_with("1.19753"));
        assert!(s.im.is_zero());
    }

    #[test]
    fn real_series_have_exact_zero_imaginary_part() {
        let c = ctx();
        for id in SeriesId::ALL.into_iter().filter(|id| id.is_real()) {
            let s = partial_sum(id, 500, &c, None).unwrap();
            assert!(s.im.is_zero(), "{id}");
        }
    }

    #[test]
    fn resume_matches_fresh_run_bit_for_bit() {
        let c = ctx();
        for id in [SeriesId::R1Star, SeriesId::D] {
            let fresh = partial_sum(id, 3000, &c, None).unwrap();
            let half = partial_sum(id, 1500, &c, None).unwrap();
            let opts = SumOptions { chunk: 77, ..Default::default() };
            let resumed = partial_sum_with(id, 3000, &c, Some(half), opts).unwrap();
            assert_eq!(fresh.re.to_exact_string(), resumed.re.to_exact_string());
            assert_eq!(fresh.im.to_exact_string(), resumed.im.to_exact_string());
            assert_eq!(fresh.spikes, resumed.spikes);
        }
    }

    #[test]
    fn resume_refuses_mismatches() {
        let c = ctx();
        let st = partial_sum(SeriesId::S, 100, &c, None).unwrap();
        let other = PrecisionContext::<Float>::new(35).unwrap();
        assert!(matches!(
            partial_sum(SeriesId::S, 200, &other, Some(st.clone())),
            Err(Error::CheckpointMismatch(_))
        ));
        assert!(matches!(
            partial_sum(SeriesId::R1Star, 200, &c, Some(st.clone())),
            Err(Error::CheckpointMismatch(_))
        ));
        assert!(matches!(partial_sum(SeriesId::S, 50, &c, Some(st)), Err(Error::CheckpointMismatch(_))));
    }

    #[test]
    fn partial_sums_of_s_increase() {
        let c = ctx();
        let mut prev = c.zero();
        let mut state = None;
        for n in (200..=2000).step_by(200) {
            let s = partial_sum(SeriesId::S, n, &c, state.take()).unwrap();
            assert!(s.re > prev);
            prev = s.re.clone();
            state = Some(s);
        }
    }

    #[test]
    fn termwise_identities_hold() {
        let c = ctx();
        let r = termwise_identities(2000, &c).unwrap();
        // sin 3n is reduced independently of sin n; near n = 355 its relative
        // error is ~n·10^(−wd)/|δ(3n)|, scaled by the term size
        let tol = c.pow10(-30);
        assert!(r.reduction < tol, "{}", r.reduction);
        assert!(r.explicit < tol, "{}", r.explicit);
        assert!(r.lerch < tol, "{}", r.lerch);
        assert!(r.lerch_imaginary < tol, "{}", r.lerch_imaginary);
    }

    #[test]
    fn single_term_verifications() {
        let c = ctx();
        let tiny = c.pow10(-25);
        assert!(verify_reduction(1, &c).unwrap().termwise < tiny);
        assert!(verify_explicit(1, &c).unwrap().residual < tiny);
        let pf = verify_partial_fraction(1, &c).unwrap();
        assert!(pf.residual < c.tolerance(5) && pf.imaginary < c.tolerance(5));
        assert!(verify_explicit(100, &c).unwrap().residual < tiny);
    }

    #[test]
    fn richardson_fixed_points() {
        let c = ctx();
        let x = c.parse("30.3145323").unwrap();
        assert_eq!(richardson_half(&x, 200_000, &x, 500_000).unwrap(), x);
        let s1 = c.parse("30.3145323").unwrap();
        let s2 = c.parse("30.3145386").unwrap();
        let e = richardson_half(&s1, 200_000, &s2, 500_000).unwrap();
        assert!(format_fixed(&e, 7).starts_with("30.31454"));
        assert!(richardson_half(&s1, 5, &s2, 5).is_err());
        // exact for a + b N^(-1/2)
        let f = |n: u64| c.int(7) + c.int(3) / c.uint(n).sqrt();
        let r = richardson_half(&f(100), 100, &f(900), 900).unwrap();
        assert!((r - c.int(7)).abs() < c.tolerance(3));
    }

    #[test]
    fn spike_ledgers() {
        let c = ctx();
        let spikes = spike_ledger(SeriesId::R1Star, 10_000, 1.0, &c).unwrap();
        // oracle: brute-force f64 scan of sin 3n/(n³ sin³n) over n ≤ 10⁴
        let mut oracle = vec![];
        for n in 1..=10_000u64 {
            let x = n as f64;
            let t = (3.0 * x).sin() / (x.powi(3) * x.sin().powi(3));
            if t.abs() >= 1.0 {
                oracle.push(n);
            }
        }
        let got: Vec<u64> = spikes.iter().map(|s| s.n).collect();
        assert_eq!(got, oracle);
        assert_eq!(got, vec![3, 22, 355, 710]);
        let s355 = spikes.iter().find(|s| s.n == 355).unwrap();
        assert!(format_fixed(&s355.value.re, 4).starts_with("73.794"));
        assert_eq!(s355.regime, Regime::R);
        let h = spike_ledger(SeriesId::H3, 10_000, 1.0, &c).unwrap();
        assert_eq!(h.iter().map(|s| s.n).collect::<Vec<_>>(), vec![1]);
        assert!(spike_ledger(SeriesId::H3, 10, 0.0, &c).is_err());
    }

    #[test]
    fn neville_is_exact_on_polynomials() {
        let hs = [1.0, 0.5, 0.25, 0.125];
        let ys: Vec<f64> = hs.iter().map(|h| 2.0 + 3.0 * h - h * h + 0.5 * h * h * h).collect();
        assert!((neville_at_zero(&hs, &ys).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn term_errors_carry_context() {
        let c = PrecisionContext::<Float>::with_guard(30, 4).unwrap();
        let err = term(SeriesId::S, 355, &c).unwrap_err();
        match err {
            Error::Term { id, n, .. } => assert_eq!((id, n), (SeriesId::S, 355)),
            e => panic!("unexpected {e}"),
        }
    }
}
