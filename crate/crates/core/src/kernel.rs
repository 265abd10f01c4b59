//! The kernel `K(x) = sin 3x / sin³x` in its equivalent algebraic forms.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact;
use crate::precision::{Complex, PrecisionContext, Real};

/// Highest power of `u` whose Laurent coefficient is exposed.
pub const LAURENT_MAX_POWER: i32 = 4;

/// Distance from `x` to the nearest multiple of π.
pub fn pole_distance<T: Real>(x: &T, ctx: &PrecisionContext<T>) -> T {
    let pi = ctx.pi();
    let m = (x.clone() / pi).round();
    (x.clone() - m * pi).abs()
}

/// `10^(-working digits / 2)`.
pub fn pole_limit<T: Real>(ctx: &PrecisionContext<T>) -> T {
    ctx.pow10(-(ctx.working_digits() as i32) / 2)
}

fn check_pole<T: Real>(x: &T, ctx: &PrecisionContext<T>) -> Result<()> {
    let d = pole_distance(x, ctx);
    let limit = pole_limit(ctx);
    if d <= limit {
        return Err(Error::PoleProximity { distance: d.to_f64(), limit: limit.to_f64() });
    }
    Ok(())
}

/// `sin(3x) / sin³(x)`.
pub fn kernel_trig<T: Real>(x: &T, ctx: &PrecisionContext<T>) -> Result<T> {
    check_pole(x, ctx)?;
    let s = x.sin();
    let s3 = (x.clone() * ctx.int(3)).sin();
    Ok(s3 / s.powi(3))
}

/// `3 csc²x − 4`.
pub fn kernel_csc<T: Real>(x: &T, ctx: &PrecisionContext<T>) -> Result<T> {
    check_pole(x, ctx)?;
    let s = x.sin();
    Ok(ctx.int(3) / s.sqr() - ctx.int(4))
}

/// Partial-fraction form of `K` at `q = e^{ix}`:
/// `K = −4 + 3/(q+1) − 3/(q+1)² − 3/(q−1) − 3/(q−1)²`.
///
/// Built from the half-angle pair `(sin x/2, cos x/2)`, in which
/// `1/(q+1) = ½ − (i/2) tan(x/2)` and `1/(q−1) = −½ − (i/2) cot(x/2)`;
/// neither reciprocal involves a cancelling difference.
#[derive(Clone, Debug)]
pub struct QFormTerms<T> {
    /// `1/(q+1)`
    pub inv_plus: Complex<T>,
    /// `1/(q−1)`
    pub inv_minus: Complex<T>,
}

impl<T: Real> QFormTerms<T> {
    pub fn from_half_angle(s_h: &T, c_h: &T) -> Self {
        let prec = s_h.precision();
        let half = T::from_f64(0.5, prec);
        let tan = s_h.clone() / c_h;
        let cot = c_h.clone() / s_h;
        QFormTerms {
            inv_plus: Complex::new(half.clone(), -(tan * &half)),
            inv_minus: Complex::new(-half.clone(), -(cot * &half)),
        }
    }

    /// The five summands `[−4, 3/(q+1), −3/(q+1)², −3/(q−1), −3/(q−1)²]`.
    pub fn summands(&self) -> [Complex<T>; 5] {
        let prec = self.inv_plus.re.precision();
        let three = T::from_i64(3, prec);
        let p2 = self.inv_plus.clone() * self.inv_plus.clone();
        let m2 = self.inv_minus.clone() * self.inv_minus.clone();
        [
            Complex::real(T::from_i64(-4, prec)),
            self.inv_plus.scale(&three),
            -p2.scale(&three),
            -self.inv_minus.scale(&three),
            -m2.scale(&three),
        ]
    }

    pub fn sum(&self) -> Complex<T> {
        let [a, b, c, d, e] = self.summands();
        a + b + c + d + e
    }
}

pub fn kernel_qform<T: Real>(x: &T, ctx: &PrecisionContext<T>) -> Result<QFormTerms<T>> {
    check_pole(x, ctx)?;
    let (s_h, c_h) = (x.clone() / ctx.int(2)).sin_cos();
    Ok(QFormTerms::from_half_angle(&s_h, &c_h))
}

/// Laurent data of `K` at its poles: `K(kπ + u) = Σ coefficients[j] u^(j−2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentExpansion {
    pub pole_order: u32,
    pub coefficients: Vec<BigRational>,
}

impl LaurentExpansion {
    /// Coefficient of `u^power`, if stored.
    pub fn coefficient(&self, power: i32) -> Option<&BigRational> {
        let idx = power + self.pole_order as i32;
        if idx < 0 {
            return None;
        }
        self.coefficients.get(idx as usize)
    }
}

/// Exact Laurent coefficients of `K` from `u^-2` through `u^max_power`.
pub fn laurent_coefficients(max_power: i32) -> Result<LaurentExpansion> {
    if max_power > LAURENT_MAX_POWER {
        return Err(Error::InvalidArgument(format!(
            "Laurent coefficients are available through u^{LAURENT_MAX_POWER}, requested u^{max_power}"
        )));
    }
    if max_power < -2 {
        return Err(Error::InvalidArgument(format!("max_power = {max_power} is below the pole order")));
    }
    let csc2 = exact::csc2_laurent(((max_power + 2) / 2 + 1) as usize);
    let three = BigRational::from_integer(BigInt::from(3));
    let mut coefficients = Vec::new();
    for power in -2..=max_power {
        let c = if power % 2 != 0 {
            BigRational::zero()
        } else {
            let mut c = &three * &csc2[((power + 2) / 2) as usize];
            if power == 0 {
                c -= BigRational::from_integer(BigInt::from(4));
            }
            c
        };
        coefficients.push(exact::normalized(c));
    }
    Ok(LaurentExpansion { pole_order: 2, coefficients })
}

fn csc2_coefficients() -> &'static [BigRational] {
    static COEFFS: OnceLock<Vec<BigRational>> = OnceLock::new();
    COEFFS.get_or_init(|| exact::csc2_laurent(48))
}

/// `K(u) − 3/u²` near a pole (the regular part), computed without cancellation.
pub fn kernel_regular_part<T: Real>(u: &T, ctx: &PrecisionContext<T>) -> Result<T> {
    if u.abs() < ctx.real(0.25) {
        // 3 csc²u − 4 − 3/u² = −3 + 3 Σ_{k≥1} c_{k+1} u^{2k}
        let coeffs = csc2_coefficients();
        let u2 = u.sqr();
        let eps = ctx.tolerance(-2);
        let mut sum = ctx.int(-3);
        let mut pow = u2.clone();
        for c in &coeffs[2..] {
            let term = ctx.rational(c) * ctx.int(3) * &pow;
            let small = term.abs() < eps;
            sum += term;
            if small {
                return Ok(sum);
            }
            pow *= &u2;
        }
        Ok(sum)
    } else {
        Ok(kernel_csc(u, ctx)? - ctx.int(3) / u.sqr())
    }
}

/// Least-squares fit of `K(u)` on the basis `u^-2 ..= u^4`.
#[derive(Clone, Debug)]
pub struct LaurentFit<T> {
    /// Fitted coefficients for powers `-2, -1, 0, 1, 2, 3, 4`.
    pub coefficients: Vec<T>,
    pub residual_norm: T,
}

impl<T: Real> LaurentFit<T> {
    pub fn coefficient(&self, power: i32) -> &T {
        &self.coefficients[(power + 2) as usize]
    }
}

/// Log-spaced radii in `[0.002, 0.05]`.
pub fn default_fit_radii<T: Real>(ctx: &PrecisionContext<T>) -> Vec<T> {
    let (lo, hi, count) = (ctx.real(0.002), ctx.real(0.05), 12);
    let ratio = (hi / &lo).ln() / ctx.int(count - 1);
    (0..count).map(|k| lo.clone() * (ratio.clone() * ctx.int(k)).exp()).collect()
}

pub fn laurent_fit<T: Real>(radii: &[T], ctx: &PrecisionContext<T>) -> Result<LaurentFit<T>> {
    const BASIS: usize = 7;
    let upper = ctx.real(0.3);
    for r in radii {
        if *r <= ctx.zero() || *r > upper {
            return Err(Error::InvalidArgument(format!("fit radius {} outside (0, 0.3]", r.to_f64())));
        }
    }
    let mut sorted: Vec<&T> = radii.iter().collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));
    sorted.dedup_by(|a, b| a == b);
    if sorted.len() < BASIS {
        return Err(Error::InvalidArgument(format!(
            "ill-conditioned fit: {} distinct radii, need at least {BASIS}",
            sorted.len()
        )));
    }
    let mut rows = Vec::with_capacity(radii.len());
    let mut rhs = Vec::with_capacity(radii.len());
    for u in radii {
        rows.push((-2..=4).map(|p| u.powi(p)).collect::<Vec<T>>());
        rhs.push(kernel_csc(u, ctx)?);
    }
    let coefficients = least_squares(rows.clone(), rhs.clone())?;
    let mut rss = ctx.zero();
    for (row, y) in rows.iter().zip(&rhs) {
        let mut fit = ctx.zero();
        for (a, c) in row.iter().zip(&coefficients) {
            fit += a.clone() * c;
        }
        rss += (fit - y).sqr();
    }
    Ok(LaurentFit { coefficients, residual_norm: rss.sqrt() })
}

/// `max |K(u) − (3/u² − 3 + u²/5 + 2u⁴/63)| / u⁶` over the given radii.
pub fn laurent_remainder_constant<T: Real>(radii: &[T], ctx: &PrecisionContext<T>) -> Result<T> {
    let exp = laurent_coefficients(LAURENT_MAX_POWER)?;
    let mut worst = ctx.zero();
    for u in radii {
        let mut approx = ctx.zero();
        for (j, c) in exp.coefficients.iter().enumerate() {
            if !c.is_zero() {
                approx += ctx.rational(c) * u.powi(j as i32 - 2);
            }
        }
        let ratio = (kernel_csc(u, ctx)? - approx).abs() / u.powi(6);
        if ratio > worst {
            worst = ratio;
        }
    }
    Ok(worst)
}

/// Solves `min ‖A x − b‖₂` by Householder QR.
pub(crate) fn least_squares<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Result<Vec<T>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    if m < n || n == 0 {
        return Err(Error::InvalidArgument(format!("least squares with {m} rows and {n} columns")));
    }
    let prec = b[0].precision();
    let zero = T::from_i64(0, prec);
    for k in 0..n {
        let mut norm = zero.clone();
        for row in a.iter().skip(k) {
            norm += row[k].sqr();
        }
        let norm = norm.sqrt();
        if norm.is_zero() {
            return Err(Error::InvalidArgument("rank-deficient design matrix".into()));
        }
        let alpha = if a[k][k].is_negative() { norm } else { -norm };
        // v = x − alpha e_k
        let mut v: Vec<T> = (k..m).map(|i| a[i][k].clone()).collect();
        v[0] -= &alpha;
        let mut vnorm2 = zero.clone();
        for x in &v {
            vnorm2 += x.sqr();
        }
        if vnorm2.is_zero() {
            continue;
        }
        for j in k..n {
            let mut dot = zero.clone();
            for (i, vi) in v.iter().enumerate() {
                dot += vi.clone() * &a[k + i][j];
            }
            let f = dot * T::from_i64(2, prec) / &vnorm2;
            for (i, vi) in v.iter().enumerate() {
                a[k + i][j] -= vi.clone() * &f;
            }
        }
        let mut dot = zero.clone();
        for (i, vi) in v.iter().enumerate() {
            dot += vi.clone() * &b[k + i];
        }
        let f = dot * T::from_i64(2, prec) / &vnorm2;
        for (i, vi) in v.iter().enumerate() {
            b[k + i] -= vi.clone() * &f;
        }
    }
    let mut x = vec![zero.clone(); n];
    for k in (0..n).rev() {
        let mut s = b[k].clone();
        for j in k + 1..n {
            s -= a[k][j].clone() * &x[j];
        }
        x[k] = s / &a[k][k];
    }
    Ok(x)
}
