//! Integer relation detection by PSLQ.
//!
//! A search either returns a small integer vector `a` with `a·v ≈ 0`, or an
//! absence certificate: the lower bound `1/max|H_jj|` on the norm of any
//! relation, which PSLQ maintains as an invariant. Absence is evidence at the
//! stated precision, not a proof of independence.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polylog::{l_chi3_series, polylog_unit, terms_for_tail};
use crate::precision::{bits_for_digits, format_sci, format_sig, PrecisionContext, Real};
use crate::series::{partial_sum, SeriesId, SeriesState};

const MAX_ITERATIONS: u32 = 100_000;
const MAX_BOUND: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RelationResult {
    Relation {
        coefficients: Vec<i64>,
        /// `|a·v| / ‖v‖` recomputed at twice the search precision.
        residual: String,
        iterations: u32,
    },
    Absent {
        /// Every integer relation has Euclidean norm at least this.
        norm_bound: f64,
        /// True when `norm_bound` exceeds `bound·√n`, which rules out every
        /// relation with `max|aᵢ| ≤ bound`.
        certified: bool,
        iterations: u32,
        /// A detected relation whose coefficients exceed the bound.
        oversized_candidate: Option<Vec<i64>>,
    },
}

impl RelationResult {
    pub fn relation(&self) -> Option<&[i64]> {
        match self {
            RelationResult::Relation { coefficients, .. } => Some(coefficients),
            RelationResult::Absent { .. } => None,
        }
    }

    pub fn is_certified_absence(&self) -> bool {
        matches!(self, RelationResult::Absent { certified: true, .. })
    }
}

/// Detection threshold `10^(3 − digits)` on `|a·v|/‖v‖`.
pub fn detection_threshold(digits: u32) -> f64 {
    10f64.powi(3 - digits as i32)
}

struct Matrix {
    n: usize,
    a: Vec<i128>,
}

impl Matrix {
    fn identity(n: usize) -> Self {
        let mut a = vec![0; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        Matrix { n, a }
    }

    fn at(&self, i: usize, j: usize) -> i128 {
        self.a[i * self.n + j]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut i128 {
        &mut self.a[i * self.n + j]
    }
}

fn overflow() -> Error {
    Error::PrecisionExhausted("PSLQ integer entries overflowed".into())
}

fn normalize(mut a: Vec<i128>) -> Vec<i128> {
    let g = a.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        a.iter_mut().for_each(|x| *x /= g);
    }
    if a.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        a.iter_mut().for_each(|x| *x = -*x);
    }
    a
}

struct Pslq<T> {
    n: usize,
    prec: u32,
    y: Vec<T>,
    h: Vec<Vec<T>>,
    a: Matrix,
    b: Matrix,
}

impl<T: Real> Pslq<T> {
    fn new(x: &[T], prec: u32) -> Self {
        let n = x.len();
        let mut s = vec![T::from_i64(0, prec); n];
        let mut acc = T::from_i64(0, prec);
        for j in (0..n).rev() {
            acc += x[j].sqr();
            s[j] = acc.sqrt();
        }
        let mut h = vec![vec![T::from_i64(0, prec); n - 1]; n];
        for i in 0..n {
            for j in 0..(n - 1).min(i + 1) {
                h[i][j] = if i == j {
                    s[j + 1].clone() / &s[j]
                } else {
                    -(x[i].clone() * &x[j]) / (s[j].clone() * &s[j + 1])
                };
            }
        }
        Pslq { n, prec, y: x.to_vec(), h, a: Matrix::identity(n), b: Matrix::identity(n) }
    }

    /// Size-reduce row `i` against row `j < i`.
    fn reduce(&mut self, i: usize, j: usize) -> Result<()> {
        let t = (self.h[i][j].clone() / &self.h[j][j]).round();
        if t.is_zero() {
            return Ok(());
        }
        let ti = t.to_i64().filter(|v| v.unsigned_abs() < 1 << 60).ok_or_else(overflow)? as i128;
        let yi = self.y[i].clone();
        self.y[j] += yi * &t;
        for k in 0..=j {
            let hj = self.h[j][k].clone();
            self.h[i][k] -= hj * &t;
        }
        for k in 0..self.n {
            let ajk = self.a.at(j, k);
            let v = self.a.at(i, k).checked_sub(ti.checked_mul(ajk).ok_or_else(overflow)?).ok_or_else(overflow)?;
            *self.a.at_mut(i, k) = v;
            let bki = self.b.at(k, i);
            let w = self.b.at(k, j).checked_add(ti.checked_mul(bki).ok_or_else(overflow)?).ok_or_else(overflow)?;
            *self.b.at_mut(k, j) = w;
        }
        Ok(())
    }

    fn step(&mut self, gamma: &T) -> Result<()> {
        let n = self.n;
        let mut m = 0;
        let mut best = T::from_i64(-1, self.prec);
        let mut g = gamma.clone();
        for i in 0..n - 1 {
            let v = g.clone() * self.h[i][i].abs();
            if v > best {
                best = v;
                m = i;
            }
            g *= gamma;
        }
        self.y.swap(m, m + 1);
        self.h.swap(m, m + 1);
        for k in 0..n {
            self.a.a.swap(m * n + k, (m + 1) * n + k);
            self.b.a.swap(k * n + m, k * n + m + 1);
        }
        if m < n - 2 {
            let t0 = (self.h[m][m].sqr() + self.h[m][m + 1].sqr()).sqrt();
            let t1 = self.h[m][m].clone() / &t0;
            let t2 = self.h[m][m + 1].clone() / &t0;
            for i in m..n {
                let t3 = self.h[i][m].clone();
                let t4 = self.h[i][m + 1].clone();
                self.h[i][m] = t1.clone() * &t3 + t2.clone() * &t4;
                self.h[i][m + 1] = t1.clone() * &t4 - t2.clone() * &t3;
            }
        }
        for i in m + 1..n {
            for j in (0..=(i - 1).min(m + 1)).rev() {
                self.reduce(i, j)?;
            }
        }
        Ok(())
    }

    fn norm_bound(&self) -> f64 {
        let max = (0..self.n - 1).map(|j| self.h[j][j].abs().to_f64()).fold(0.0, f64::max);
        1.0 / max
    }

    fn column(&self, j: usize) -> Vec<i128> {
        (0..self.n).map(|k| self.b.at(k, j)).collect()
    }
}

fn dot_residual<T: Real>(values: &[T], a: &[i128], prec: u32) -> T {
    let mut dot = T::from_i64(0, prec);
    let mut norm = T::from_i64(0, prec);
    for (v, &c) in values.iter().zip(a) {
        let v = v.with_precision(prec);
        dot += v.clone() * T::from_i64(c as i64, prec);
        norm += v.sqr();
    }
    dot.abs() / norm.sqrt()
}

/// Searches for `a ∈ ℤⁿ \ {0}` with `max|aᵢ| ≤ bound` and `|a·v| < 10^(3−digits)‖v‖`.
pub fn pslq<T: Real>(values: &[T], bound: u64, digits: u32) -> Result<RelationResult> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InvalidArgument("PSLQ needs at least two values".into()));
    }
    if digits < 12 {
        return Err(Error::InvalidArgument(format!("{digits} digits; PSLQ needs at least 12")));
    }
    if bound == 0 || bound > MAX_BOUND {
        return Err(Error::InvalidArgument(format!("coefficient bound {bound} not in [1, 10⁶]")));
    }
    let need = bits_for_digits(digits);
    if let Some((i, _)) = values.iter().enumerate().find(|(_, v)| v.precision() < need) {
        return Err(Error::PrecisionExhausted(format!(
            "value {i} carries {} bits, {digits} digits need {need}",
            values[i].precision()
        )));
    }
    if let Some(i) = values.iter().position(|v| v.is_zero()) {
        let mut relation = vec![0; n];
        relation[i] = 1;
        return Err(Error::DegenerateInput { index: i, relation });
    }
    let prec = need + 64;
    if T::max_precision().is_some_and(|m| prec > m) {
        return Err(Error::PrecisionExhausted(format!("{digits}-digit PSLQ needs {prec} bits")));
    }
    let mut norm = T::from_i64(0, prec);
    for v in values {
        norm += v.with_precision(prec).sqr();
    }
    let norm = norm.sqrt();
    let x: Vec<T> = values.iter().map(|v| v.with_precision(prec) / &norm).collect();
    let threshold = T::from_f64(detection_threshold(digits), prec);
    let gamma = T::from_i64(4, prec).sqrt() / T::from_i64(3, prec).sqrt();
    let limit = bound as f64 * (n as f64).sqrt();

    let mut state = Pslq::new(&x, prec);
    for i in 1..n {
        for j in (0..i).rev() {
            state.reduce(i, j)?;
        }
    }
    for iteration in 1..=MAX_ITERATIONS {
        state.step(&gamma)?;
        let hit = (0..n).filter(|&j| state.y[j].abs() < threshold).min_by(|&p, &q| {
            state.y[p].abs().partial_cmp(&state.y[q].abs()).unwrap_or(std::cmp::Ordering::Equal)
        });
        if let Some(j) = hit {
            let a = normalize(state.column(j));
            let residual = dot_residual(values, &a, 2 * prec);
            if residual >= threshold {
                return Err(Error::PrecisionExhausted(format!(
                    "candidate {a:?} fails re-verification ({})",
                    format_sci(&residual, 3)
                )));
            }
            let a64: Vec<i64> = a.iter().map(|&c| i64::try_from(c).map_err(|_| overflow())).collect::<Result<_>>()?;
            if a64.iter().all(|c| c.unsigned_abs() <= bound) {
                return Ok(RelationResult::Relation {
                    coefficients: a64,
                    residual: format_sci(&residual, 3),
                    iterations: iteration,
                });
            }
            let norm_bound = state.norm_bound();
            return Ok(RelationResult::Absent {
                norm_bound,
                certified: norm_bound > limit,
                iterations: iteration,
                oversized_candidate: Some(a64),
            });
        }
        let norm_bound = state.norm_bound();
        if !norm_bound.is_finite() {
            return Err(Error::PrecisionExhausted("PSLQ diagonal vanished without a detected relation".into()));
        }
        if norm_bound > limit {
            return Ok(RelationResult::Absent {
                norm_bound,
                certified: true,
                iterations: iteration,
                oversized_candidate: None,
            });
        }
    }
    Err(Error::PrecisionExhausted(format!("PSLQ did not settle in {MAX_ITERATIONS} iterations")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisId {
    #[serde(rename = "FCOT_BASIS")]
    FCot,
    #[serde(rename = "FTAN_BASIS")]
    FTan,
    #[serde(rename = "CL3_BASIS")]
    Cl3,
}

impl BasisId {
    pub const ALL: [BasisId; 3] = [BasisId::FCot, BasisId::FTan, BasisId::Cl3];

    pub fn name(self) -> &'static str {
        match self {
            BasisId::FCot => "FCOT_BASIS",
            BasisId::FTan => "FTAN_BASIS",
            BasisId::Cl3 => "CL3_BASIS",
        }
    }

    pub fn labels(self) -> &'static [&'static str] {
        match self {
            BasisId::FCot => &["F_cot", "zeta(3)", "pi^2", "1"],
            BasisId::FTan => &["F_tan", "zeta(3)", "pi^2", "1"],
            BasisId::Cl3 => &["Cl3(1)", "zeta(3)", "L(3,chi_-3)"],
        }
    }

    /// Top rung `2^k` of the doubling ladder used to certify the slow series.
    pub fn default_ladder_top(self) -> u32 {
        match self {
            BasisId::FCot => 22,
            BasisId::FTan => 22,
            BasisId::Cl3 => 0,
        }
    }
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_uppercase();
        match key.trim_end_matches("BASIS") {
            "FCOT" => Ok(BasisId::FCot),
            "FTAN" => Ok(BasisId::FTan),
            "CL3" => Ok(BasisId::Cl3),
            _ => Err(Error::InvalidArgument(format!("unknown basis {s:?}"))),
        }
    }
}

/// How an input constant was certified.
#[derive(Clone, Debug, Serialize)]
pub struct InputCertificate {
    pub label: String,
    pub method: String,
    pub terms: u64,
    pub error_estimate: String,
    /// `(N, partial sum)` rungs of a doubling ladder, when one was used.
    pub ladder: Vec<(u64, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub basis: BasisId,
    pub labels: Vec<String>,
    pub values: Vec<String>,
    pub digits: u32,
    pub bound: u64,
    pub threshold: f64,
    pub inputs: Vec<InputCertificate>,
    pub result: RelationResult,
}

/// Partial sums at `2^lo, …, 2^top`; accepted when the last doubling moves
/// the value by at most `budget`.
fn ladder<T: Real>(
    id: SeriesId,
    top: u32,
    budget: &T,
    ctx: &PrecisionContext<T>,
) -> Result<(T, InputCertificate)> {
    if top < 4 {
        return Err(Error::InvalidArgument(format!("ladder top 2^{top} is too short")));
    }
    let mut rungs = Vec::new();
    let mut state: Option<SeriesState<T>> = None;
    let mut prev: Option<T> = None;
    let mut last_step = ctx.zero();
    for k in (top.saturating_sub(4))..=top {
        let s = partial_sum(id, 1u64 << k, ctx, state.take())?;
        if let Some(p) = prev {
            last_step = (s.re.clone() - p).abs();
        }
        rungs.push((1u64 << k, format_sig(&s.re, ctx.decimal_digits() as usize)));
        prev = Some(s.re.clone());
        state = Some(s);
    }
    let value = prev.expect("ladder has rungs");
    if last_step > *budget {
        return Err(Error::PrecisionExhausted(format!(
            "{} moves by {} between 2^{} and 2^{top}; the detection threshold is {}",
            id.name(),
            format_sci(&last_step, 3),
            top - 1,
            format_sci(budget, 3)
        )));
    }
    let cert = InputCertificate {
        label: id.name().to_string(),
        method: "doubling ladder, last step".into(),
        terms: 1u64 << top,
        error_estimate: format_sci(&last_step, 3),
        ladder: rungs,
    };
    Ok((value, cert))
}

fn exact_input(label: &str) -> InputCertificate {
    InputCertificate {
        label: label.into(),
        method: "working-precision constant".into(),
        terms: 0,
        error_estimate: "0".into(),
        ladder: Vec::new(),
    }
}

pub fn scan_relations<T: Real>(basis: BasisId, bound: u64, digits: u32, ctx: &PrecisionContext<T>) -> Result<ScanReport> {
    scan_relations_with(basis, bound, digits, basis.default_ladder_top(), ctx)
}

/// As [`scan_relations`] with an explicit ladder top for the `F` series.
pub fn scan_relations_with<T: Real>(
    basis: BasisId,
    bound: u64,
    digits: u32,
    ladder_top: u32,
    ctx: &PrecisionContext<T>,
) -> Result<ScanReport> {
    if ctx.decimal_digits() < digits {
        return Err(Error::PrecisionExhausted(format!(
            "context carries {} digits, the search asks for {digits}",
            ctx.decimal_digits()
        )));
    }
    let threshold = detection_threshold(digits);
    let budget = ctx.real(threshold);
    let pi2 = ctx.pi().sqr();
    let (values, inputs) = match basis {
        BasisId::FCot | BasisId::FTan => {
            let id = if basis == BasisId::FCot { SeriesId::FCot } else { SeriesId::FTan };
            let (f, cert) = ladder(id, ladder_top, &budget, ctx)?;
            (
                vec![f, ctx.zeta3().clone(), pi2, ctx.one()],
                vec![cert, exact_input("zeta(3)"), exact_input("pi^2"), exact_input("1")],
            )
        }
        BasisId::Cl3 => {
            let one = ctx.one();
            let wanted = ctx.pow10(-(digits as i32) - 2);
            let floor = ctx.tolerance(0);
            let target = if wanted > floor { wanted } else { floor };
            let n = terms_for_tail(3, &one, &target, ctx);
            let cl3 = polylog_unit(3, &one, n, ctx)?;
            let l3 = l_chi3_series(n, ctx)?;
            if (l3.value.clone() - ctx.l3()).abs() > l3.bound {
                return Err(Error::PrecisionExhausted("L(3, χ₋₃) series disagrees with the closed form".into()));
            }
            let cert = InputCertificate {
                label: "Cl3(1)".into(),
                method: "direct sum, Abel tail bound".into(),
                terms: n,
                error_estimate: format_sci(&cl3.tail_bound, 3),
                ladder: Vec::new(),
            };
            (
                vec![cl3.value.re, ctx.zeta3().clone(), ctx.l3().clone()],
                vec![cert, exact_input("zeta(3)"), exact_input("L(3,chi_-3)")],
            )
        }
    };
    let result = pslq(&values, bound, digits)?;
    Ok(ScanReport {
        basis,
        labels: basis.labels().iter().map(|s| s.to_string()).collect(),
        values: values.iter().map(|v| format_sig(v, digits as usize + 5)).collect(),
        digits,
        bound,
        threshold,
        inputs,
        result,
    })
}
