//! Numerical check of the Fourier transform of the kernel.
//!
//! With `f̂(ξ) = ∫ f(x) e^{−iξx} dx`, the transform of `K = 3csc²x − 4` is the
//! comb `−8π δ(ξ) − 12π Σ_{k≠0} |k| δ(ξ − 2k)`. Both sides are paired with a
//! Gaussian: `φ(ξ) = exp(−ξ²/2σ²)` against the comb, and its transform
//! `φ̂(x) = σ√(2π) exp(−σ²x²/2)` against `K` as a Hadamard finite part.
//! The two numbers must agree.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::{format_sci, format_sig, PrecisionContext, Real};

/// One point mass of the transform, at frequency `location = 2k` with weight `pi_multiple · π`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CombWeight {
    pub k: i64,
    pub location: i64,
    pub pi_multiple: i64,
}

impl CombWeight {
    pub fn new(k: i64) -> Self {
        let pi_multiple = if k == 0 { -8 } else { -12 * k.abs() };
        CombWeight { k, location: 2 * k, pi_multiple }
    }

    pub fn coefficient<T: Real>(&self, ctx: &PrecisionContext<T>) -> T {
        ctx.pi().clone() * ctx.int(self.pi_multiple)
    }

    pub fn exact_over_pi(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.pi_multiple))
    }
}

/// Weights for `|k| ≤ kmax`, ascending in `k`.
pub fn comb_weights(kmax: u32) -> Vec<CombWeight> {
    let kmax = kmax as i64;
    (-kmax..=kmax).map(CombWeight::new).collect()
}

#[derive(Clone, Debug)]
pub struct CombPairing<T> {
    pub value: T,
    /// Bound on the omitted masses `|k| > kmax`.
    pub tail_bound: T,
    pub kmax: u32,
}

/// Omitted comb masses may cost at most this fraction of the pairing.
pub const COMB_TAIL_BUDGET: f64 = 1e-8;

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidArgument(format!("σ = {sigma} must be positive")));
    }
    Ok(())
}

/// `24π Σ_{k>K} k e^{−2k²/σ²}`. Past `σ/2` the summand decreases, so the
/// tail is at most its first term plus the integral from there.
fn comb_tail<T: Real>(sigma: &T, kmax: u32, ctx: &PrecisionContext<T>) -> T {
    let s2 = sigma.sqr();
    let f = |k: u64| ctx.uint(k) * (-(ctx.uint(k).sqr() * ctx.int(2)) / &s2).exp();
    let mut k = kmax as u64 + 1;
    let mut acc = ctx.zero();
    while ctx.uint(2 * k) < *sigma {
        acc += f(k);
        k += 1;
    }
    let integral = s2.clone() / ctx.int(4) * (-(ctx.uint(k).sqr() * ctx.int(2)) / &s2).exp();
    (acc + f(k) + integral) * ctx.pi() * ctx.int(24)
}

/// `⟨K̂, φ⟩ = −8π − 24π Σ_{k=1}^{kmax} k e^{−2k²/σ²}`.
pub fn pair_comb_gaussian<T: Real>(sigma: f64, kmax: u32, ctx: &PrecisionContext<T>) -> Result<CombPairing<T>> {
    check_sigma(sigma)?;
    let s = ctx.real(sigma);
    let mut value = ctx.zero();
    for w in comb_weights(kmax) {
        let xi = ctx.int(w.location);
        value += w.coefficient(ctx) * (-(xi.sqr()) / (s.sqr() * ctx.int(2))).exp();
    }
    let tail_bound = comb_tail(&s, kmax, ctx);
    let budget = value.abs() * ctx.real(COMB_TAIL_BUDGET);
    if tail_bound > budget {
        return Err(Error::TailBound { bound: tail_bound.to_f64(), budget: budget.to_f64() });
    }
    Ok(CombPairing { value, tail_bound, kmax })
}

/// Smallest `kmax` whose comb tail is below the working tolerance.
pub fn comb_kmax_for<T: Real>(sigma: f64, ctx: &PrecisionContext<T>) -> Result<u32> {
    check_sigma(sigma)?;
    let s = ctx.real(sigma);
    let target = ctx.tolerance(2);
    (0..10_000)
        .find(|&k| comb_tail(&s, k, ctx) < target)
        .ok_or_else(|| Error::InvalidArgument(format!("σ = {sigma} needs more than 10⁴ comb masses")))
}

/// Parameters of the finite-part integral over `|x| ≤ Mπ + π/2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinitePartQuadrature {
    /// `M`: periods on each side of the origin.
    pub periods: u32,
    /// Half-width of the pole-subtraction window.
    pub radius: f64,
    /// Gauss–Legendre nodes per panel.
    pub nodes: usize,
    /// Relative budget for quadrature error and for the Gaussian tail, each.
    pub budget: f64,
}

impl Default for FinitePartQuadrature {
    fn default() -> Self {
        FinitePartQuadrature { periods: 40, radius: 0.5, nodes: 24, budget: 1e-10 }
    }
}

impl FinitePartQuadrature {
    pub fn validate(&self) -> Result<()> {
        if self.periods == 0 {
            return Err(Error::InvalidArgument("at least one period is required".into()));
        }
        if !(self.radius > 0.0 && self.radius <= 1.2) {
            return Err(Error::InvalidArgument(format!("subtraction radius {} not in (0, 1.2]", self.radius)));
        }
        if self.nodes < 8 || self.nodes > 200 {
            return Err(Error::InvalidArgument(format!("{} nodes per panel; use 8 to 200", self.nodes)));
        }
        if !(self.budget > 0.0) {
            return Err(Error::InvalidArgument("quadrature budget must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct FinitePartValue<T> {
    pub value: T,
    /// Difference from the same rule at half the node count.
    pub quadrature_error: T,
    /// Bound on the periods beyond `M`.
    pub tail_bound: T,
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`, Newton-polished at working precision.
pub fn gauss_legendre<T: Real>(q: usize, ctx: &PrecisionContext<T>) -> Vec<(T, T)> {
    let eval = |x: &T| {
        let (mut p0, mut p1) = (ctx.one(), x.clone());
        for k in 1..q {
            let p2 = (x.clone() * &p1 * ctx.uint(2 * k as u64 + 1) - p0 * ctx.uint(k as u64)) / ctx.uint(k as u64 + 1);
            p0 = p1;
            p1 = p2;
        }
        let dp = (x.clone() * &p1 - p0) * ctx.uint(q as u64) / (x.sqr() - ctx.one());
        (p1, dp)
    };
    let mut out = Vec::with_capacity(q);
    for i in 0..q / 2 {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        let mut x = ctx.real(guess);
        for _ in 0..60 {
            let (p, dp) = eval(&x);
            let dx = p / dp;
            x -= &dx;
            if dx.abs() <= ctx.tolerance(-2) {
                break;
            }
        }
        let (_, dp) = eval(&x);
        let w = ctx.int(2) / ((ctx.one() - x.sqr()) * dp.sqr());
        out.push((-x.clone(), w.clone()));
        out.push((x, w));
    }
    if q % 2 == 1 {
        let (_, dp) = eval(&ctx.zero());
        out.push((ctx.zero(), ctx.int(2) / dp.sqr()));
    }
    out
}

fn integrate<T: Real>(rule: &[(T, T)], a: &T, b: &T, f: &impl Fn(&T) -> T) -> T {
    let half = (b.clone() - a) / T::from_i64(2, a.precision());
    let mid = (b.clone() + a) / T::from_i64(2, a.precision());
    let mut acc = T::from_i64(0, a.precision());
    for (x, w) in rule {
        acc += f(&(mid.clone() + half.clone() * x)) * w;
    }
    acc * half
}

struct Gaussian<'c, T: Real> {
    ctx: &'c PrecisionContext<T>,
    /// σ²/2
    s: T,
    scale: T,
}

impl<T: Real> Gaussian<'_, T> {
    fn at(&self, x: &T) -> T {
        self.scale.clone() * (-(x.sqr()) * &self.s).exp()
    }

    /// Upper bound of `|φ̂''|` on `[x, ∞)` once `x ≥ √3/σ`.
    fn second_derivative_bound(&self, x: &T) -> T {
        let two_s = self.s.clone() * self.ctx.int(2);
        two_s.clone() * (two_s * x.sqr() - self.ctx.one()).abs() * self.at(x)
    }
}

/// Finite-part contribution of the period centred at `a`, over `|u| ≤ π/2`.
///
/// Inside `|u| ≤ r` the singular part `3/u²` is split off; its finite part is
/// `∫_0^r 3(φ̂(a+u) + φ̂(a−u) − 2φ̂(a))/u² du − 6φ̂(a)/r`, the numerator formed
/// with `expm1` to avoid cancellation.
fn period_contribution<T: Real>(g: &Gaussian<'_, T>, a: &T, r: &T, rule: &[(T, T)]) -> T {
    let ctx = g.ctx;
    let ga = g.at(a);
    let three = ctx.int(3);
    let four = ctx.int(4);
    let excess = |u: &T| {
        let au2 = a.clone() * u * ctx.int(2);
        let u2 = u.sqr();
        (-(u2.clone() + &au2) * &g.s).exp_m1() + (-(u2 - au2) * &g.s).exp_m1()
    };
    let inner = |u: &T| {
        let e = excess(u);
        let sym = ga.clone() * (e.clone() + ctx.int(2));
        let u2 = u.sqr();
        let regular = three.clone() / u.sin().sqr() - three.clone() / &u2 - &four;
        regular * sym + ga.clone() * e * &three / u2
    };
    let outer = |u: &T| {
        let sym = g.at(&(a.clone() + u)) + g.at(&(a.clone() - u));
        (three.clone() / u.sin().sqr() - &four) * sym
    };
    let mut total = integrate(rule, &ctx.zero(), r, &inner) - ga * ctx.int(6) / r;
    let end = ctx.pi().clone() / ctx.int(2);
    let mut lo = r.clone();
    while lo < end {
        let doubled = lo.clone() * ctx.int(2);
        let hi = if doubled < end { doubled } else { end.clone() };
        total += integrate(rule, &lo, &hi, &outer);
        lo = hi;
    }
    total
}

fn periods_sum<T: Real>(g: &Gaussian<'_, T>, periods: u32, r: &T, rule: &[(T, T)]) -> T {
    let ctx = g.ctx;
    let parts: Vec<T> = (0..=periods)
        .into_par_iter()
        .map(|m| {
            let a = ctx.pi().clone() * ctx.uint(m as u64);
            let c = period_contribution(g, &a, r, rule);
            if m == 0 {
                c
            } else {
                c * ctx.int(2)
            }
        })
        .collect();
    let mut acc = ctx.zero();
    for p in parts {
        acc += p;
    }
    acc
}

/// Bound for the periods `|m| > M`: on each, the finite part of `3csc²u · h`
/// is at most `(3π³/8) sup|h''|` and the constant `−4` contributes `4π sup h`.
fn gaussian_tail<T: Real>(g: &Gaussian<'_, T>, periods: u32) -> Result<T> {
    let ctx = g.ctx;
    let pi = ctx.pi().clone();
    let start = pi.clone() * ctx.uint(periods as u64) + pi.clone() / ctx.int(2);
    let knee = (ctx.int(3) / (g.s.clone() * ctx.int(2))).sqrt();
    if start < knee {
        return Err(Error::InvalidArgument(format!(
            "{periods} periods do not reach the Gaussian's decay region"
        )));
    }
    let c2 = pi.powi(3) * ctx.ratio(3, 8);
    let c0 = pi.clone() * ctx.int(4);
    let mut acc = ctx.zero();
    let mut x = start;
    for _ in 0..100_000 {
        let term = c2.clone() * g.second_derivative_bound(&x) + c0.clone() * g.at(&x);
        acc += &term;
        if term.is_zero() || term <= acc.clone() * ctx.tolerance(0) {
            break;
        }
        x += &pi;
    }
    Ok(acc * ctx.int(2))
}

/// `⟨K, φ̂⟩` as a Hadamard finite part.
pub fn pair_kernel_finitepart<T: Real>(
    sigma: f64,
    quad: &FinitePartQuadrature,
    ctx: &PrecisionContext<T>,
) -> Result<FinitePartValue<T>> {
    check_sigma(sigma)?;
    quad.validate()?;
    let s = ctx.real(sigma);
    let g = Gaussian {
        ctx,
        s: s.sqr() / ctx.int(2),
        scale: s * (ctx.pi().clone() * ctx.int(2)).sqrt(),
    };
    let r = ctx.real(quad.radius);
    let fine = gauss_legendre(quad.nodes, ctx);
    let coarse = gauss_legendre(quad.nodes / 2, ctx);
    let value = periods_sum(&g, quad.periods, &r, &fine);
    let quadrature_error = (periods_sum(&g, quad.periods, &r, &coarse) - &value).abs();
    let tail_bound = gaussian_tail(&g, quad.periods)?;
    let budget = value.abs() * ctx.real(quad.budget);
    if quadrature_error > budget {
        return Err(Error::QuadratureBudget { estimate: quadrature_error.to_f64(), budget: budget.to_f64() });
    }
    if tail_bound > budget {
        return Err(Error::TailBound { bound: tail_bound.to_f64(), budget: budget.to_f64() });
    }
    Ok(FinitePartValue { value, quadrature_error, tail_bound })
}

/// Pass threshold on the relative disagreement of the two pairings.
pub const PARSEVAL_THRESHOLD: f64 = 1e-6;

/// Subtraction radii used for the cut-off audit.
pub const AUDIT_RADII: [f64; 3] = [0.3, 0.5, 0.8];

#[derive(Clone, Debug, Serialize)]
pub struct ParsevalEntry {
    pub sigma: f64,
    pub kmax: u32,
    pub comb: String,
    pub comb_tail_bound: String,
    pub kernel: String,
    pub quadrature_error: String,
    pub gaussian_tail_bound: String,
    pub relative_error: f64,
    /// Largest change of the kernel side across the audit radii.
    pub cutoff_spread: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParsevalReport {
    pub digits: u32,
    pub quadrature: FinitePartQuadrature,
    pub audit_radii: Vec<f64>,
    pub threshold: f64,
    pub entries: Vec<ParsevalEntry>,
    pub max_relative_error: f64,
    pub pass: bool,
}

pub fn parseval_check<T: Real>(sigmas: &[f64], ctx: &PrecisionContext<T>) -> Result<ParsevalReport> {
    parseval_check_with(sigmas, &FinitePartQuadrature::default(), ctx)
}

pub fn parseval_check_with<T: Real>(
    sigmas: &[f64],
    quad: &FinitePartQuadrature,
    ctx: &PrecisionContext<T>,
) -> Result<ParsevalReport> {
    let sig = ctx.decimal_digits() as usize;
    let mut entries = Vec::with_capacity(sigmas.len());
    for &sigma in sigmas {
        if !(0.2..=2.0).contains(&sigma) {
            return Err(Error::InvalidArgument(format!("σ = {sigma} outside [0.2, 2]")));
        }
        let kmax = comb_kmax_for(sigma, ctx)?;
        let comb = pair_comb_gaussian(sigma, kmax, ctx)?;
        let kernel = pair_kernel_finitepart(sigma, quad, ctx)?;
        let relative_error = ((kernel.value.clone() - &comb.value) / &comb.value).abs().to_f64();
        let mut spread = 0.0f64;
        for &radius in &AUDIT_RADII {
            let q = FinitePartQuadrature { radius, ..quad.clone() };
            let v = pair_kernel_finitepart(sigma, &q, ctx)?.value;
            spread = spread.max((v - &kernel.value).abs().to_f64());
        }
        entries.push(ParsevalEntry {
            sigma,
            kmax,
            comb: format_sig(&comb.value, sig),
            comb_tail_bound: format_sci(&comb.tail_bound, 3),
            kernel: format_sig(&kernel.value, sig),
            quadrature_error: format_sci(&kernel.quadrature_error, 3),
            gaussian_tail_bound: format_sci(&kernel.tail_bound, 3),
            relative_error,
            cutoff_spread: spread,
        });
    }
    let max_relative_error = entries.iter().map(|e| e.relative_error).fold(0.0, f64::max);
    Ok(ParsevalReport {
        digits: ctx.decimal_digits(),
        quadrature: quad.clone(),
        audit_radii: AUDIT_RADII.to_vec(),
        threshold: PARSEVAL_THRESHOLD,
        pass: max_relative_error < PARSEVAL_THRESHOLD,
        entries,
        max_relative_error,
    })
}

/// `min_{1≤k≤K} ‖πk‖ · k^{3/2}`, with `‖·‖` the distance to the nearest integer.
#[derive(Clone, Debug, Serialize)]
pub struct NonResonance {
    pub k_max: u64,
    pub min_scaled: f64,
    pub argmin: u64,
    pub nearest_integer: i64,
}

pub fn non_resonance<T: Real>(k_max: u64, ctx: &PrecisionContext<T>) -> Result<NonResonance> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be positive".into()));
    }
    let mut best: Option<(T, u64, i64)> = None;
    for k in 1..=k_max {
        let x = ctx.pi().clone() * ctx.uint(k);
        let m = x.round();
        let kf = ctx.uint(k);
        let scaled = (x - &m).abs() * kf.sqrt() * kf;
        if best.as_ref().map_or(true, |(b, _, _)| scaled < *b) {
            best = Some((scaled, k, m.to_i64().unwrap_or(i64::MAX)));
        }
    }
    let (v, argmin, nearest_integer) = best.expect("k_max ≥ 1");
    Ok(NonResonance { k_max, min_scaled: v.to_f64(), argmin, nearest_integer })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};
    use rug::Float;

    fn ctx() -> PrecisionContext<Float> {
        PrecisionContext::new(30).unwrap()
    }

    #[test]
    fn weights() {
        let w0 = comb_weights(0);
        assert_eq!(w0, vec![CombWeight { k: 0, location: 0, pi_multiple: -8 }]);
        let w2 = comb_weights(2);
        let by_k = |k: i64| w2.iter().find(|w| w.k == k).unwrap().pi_multiple;
        assert_eq!((by_k(1), by_k(-1), by_k(2), by_k(-2)), (-12, -12, -24, -24));
        for w in comb_weights(9) {
            assert_eq!(w.pi_multiple, CombWeight::new(-w.k).pi_multiple);
            assert_eq!(w.location, 2 * w.k);
        }
    }

    #[test]
    fn weight_slope_is_exactly_minus_twelve() {
        // least-squares slope of coefficient/π against k over k = 1..8, in rationals
        let pts: Vec<(BigRational, BigRational)> = (1..=8)
            .map(|k| (BigRational::from_integer(k.into()), CombWeight::new(k).exact_over_pi()))
            .collect();
        let n = BigRational::from_integer(8.into());
        let (mut sx, mut sy, mut sxx, mut sxy) =
            (BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero());
        for (x, y) in &pts {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        let slope = (n.clone() * sxy - sx.clone() * sy) / (n * sxx - sx.clone() * sx);
        assert_eq!(slope, BigRational::from_integer((-12).into()));
        assert!(!slope.is_one());
    }

    #[test]
    fn comb_side() {
        let c = ctx();
        // oracle: −8π − 24π Σ k e^{−2k²} with the sum in f64
        let s: f64 = (1..=4).map(|k| k as f64 * (-2.0 * (k * k) as f64).exp()).sum();
        assert!((s - 0.13601).abs() < 1e-5);
        let p = pair_comb_gaussian(1.0, 4, &c).unwrap();
        let oracle = -8.0 * std::f64::consts::PI - 24.0 * std::f64::consts::PI * s;
        assert!((p.value.to_f64() - oracle).abs() < 1e-12);
        assert!(format_sig(&p.value, 5).starts_with("-35.387"));
        // kmax = 8 differs from kmax = 1 by the k = 2 mass, 48π e^{−8}
        let p1 = pair_comb_gaussian(1.0, 1, &PrecisionContext::<Float>::new(30).unwrap());
        assert!(matches!(p1, Err(Error::TailBound { .. })));
        let small = pair_comb_gaussian(0.05, 0, &c).unwrap();
        assert!((small.value + c.pi().clone() * c.int(8)).abs() < c.tolerance(0));
    }

    #[test]
    fn comb_tail_bound_holds() {
        let c = ctx();
        for sigma in [0.3, 1.0, 2.0, 5.0] {
            let s = c.real(sigma);
            let full = pair_comb_gaussian(sigma, 60, &c).unwrap().value;
            for kmax in 0..6u32 {
                let mut part = c.pi().clone() * c.int(-8);
                for k in 1..=kmax as i64 {
                    part += c.pi().clone() * c.int(-24 * k) * (c.int(-2 * k * k) / s.sqr()).exp();
                }
                assert!((full.clone() - part).abs() <= comb_tail(&s, kmax, &c) + c.tolerance(3), "σ {sigma} K {kmax}");
            }
        }
    }

    #[test]
    fn gauss_legendre_is_exact_on_polynomials() {
        let c = ctx();
        for q in [7usize, 12, 24] {
            let rule = gauss_legendre(q, &c);
            assert_eq!(rule.len(), q);
            for deg in 0..(2 * q as i32) {
                let got = integrate(&rule, &c.zero(), &c.one(), &|x: &Float| x.powi(deg));
                let want = c.ratio(1, deg as i64 + 1);
                assert!((got - want).abs() < c.tolerance(3), "q {q} degree {deg}");
            }
        }
    }

    #[test]
    fn finite_part_of_inverse_square() {
        let c = ctx();
        let g = Gaussian { ctx: &c, s: c.zero(), scale: c.one() };
        let rule = gauss_legendre(24, &c);
        let r = c.ratio(1, 2);
        // with φ̂ ≡ 1 a period contributes fp ∫ (3csc²u − 4) = −4π
        let v = period_contribution(&g, &c.zero(), &r, &rule);
        let err = (v + c.pi().clone() * c.int(4)).abs();
        assert!(err < c.tolerance(12), "{err}");
    }

    #[test]
    fn kernel_side_matches_comb_side() {
        let c = ctx();
        for (sigma, periods) in [(1.0, 40u32), (0.3, 60)] {
            let q = FinitePartQuadrature { periods, ..Default::default() };
            let k = pair_kernel_finitepart(sigma, &q, &c).unwrap();
            let comb = pair_comb_gaussian(sigma, comb_kmax_for(sigma, &c).unwrap(), &c).unwrap();
            let rel = ((k.value - &comb.value) / &comb.value).abs();
            assert!(rel < 1e-20, "σ {sigma}: {rel}");
        }
    }

    #[test]
    fn cutoff_radius_does_not_matter() {
        let c = ctx();
        let vals: Vec<Float> = AUDIT_RADII
            .iter()
            .map(|&radius| {
                let q = FinitePartQuadrature { radius, ..Default::default() };
                pair_kernel_finitepart(0.5, &q, &c).unwrap().value
            })
            .collect();
        for v in &vals[1..] {
            assert!((v.clone() - &vals[0]).abs() < vals[0].clone().abs() * 1e-10);
        }
    }

    #[test]
    fn periods_beyond_the_gaussian_change_nothing() {
        let c = ctx();
        let base = pair_kernel_finitepart(1.0, &FinitePartQuadrature::default(), &c).unwrap();
        let more = pair_kernel_finitepart(1.0, &FinitePartQuadrature { periods: 60, ..Default::default() }, &c).unwrap();
        assert!((more.value - &base.value).abs() <= base.tail_bound.clone() + c.tolerance(5));
        let short = FinitePartQuadrature { periods: 2, ..Default::default() };
        assert!(matches!(pair_kernel_finitepart(0.3, &short, &c), Err(Error::TailBound { .. }) | Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn small_sigma_approaches_the_origin_mass() {
        let c = ctx();
        let q = FinitePartQuadrature { periods: 80, ..Default::default() };
        let v = pair_kernel_finitepart(0.2, &q, &c).unwrap().value;
        assert!((v + c.pi().clone() * c.int(8)).abs() < 1e-15);
    }

    #[test]
    fn parseval_report() {
        let c = ctx();
        let r = parseval_check(&[0.3, 0.5, 1.0], &c).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.entries[2].kernel.starts_with("-35.387"));
        assert!(r.entries.iter().all(|e| e.cutoff_spread < 1e-15));
        let empty = parseval_check(&[], &c).unwrap();
        assert!(empty.pass && empty.entries.is_empty());
        assert!(parseval_check(&[3.0], &c).is_err());
    }

    #[test]
    fn non_resonance_minimum() {
        let c = ctx();
        let nr = non_resonance(10_000, &c).unwrap();
        assert_eq!((nr.argmin, nr.nearest_integer), (113, 355));
        assert!(nr.min_scaled > 0.0);
        assert!((nr.min_scaled - 0.0362).abs() < 5e-4);
    }
}
