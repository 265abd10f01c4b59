//! Run configuration and the files a reproduction run writes.
//!
//! Every real is written as a decimal string; nothing depends on the clock,
//! so a fixed configuration produces byte-identical files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diophantine::{signed_near_distance, RegimeExponents};
use crate::error::{Error, Result};
use crate::polylog::l_chi3_series;
use crate::precision::{format_fixed, format_sci, Complex, PrecisionContext, Real};
use crate::series::{
    self, partial_sum_with, richardson_half, SeriesId, SeriesState, SumOptions, DEFAULT_SPIKE_THRESHOLD,
};
use crate::Mp;

/// Environment variable naming the default output directory.
pub const OUTPUT_ENV: &str = "FLINTLAB_OUT";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub digits: u32,
    pub guard_digits: u32,
    pub exponents: RegimeExponents,
    pub chunk: u64,
    pub spike_threshold: f64,
    pub output_dir: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            digits: 30,
            guard_digits: 15,
            exponents: RegimeExponents::default(),
            chunk: series::DEFAULT_CHUNK,
            spike_threshold: DEFAULT_SPIKE_THRESHOLD,
            output_dir: None,
            checkpoint: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Malformed(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.exponents.validate()?;
        if self.chunk == 0 {
            return Err(Error::InvalidArgument("chunk size must be positive".into()));
        }
        if !(self.spike_threshold.is_finite() && self.spike_threshold > 0.0) {
            return Err(Error::InvalidArgument("spike threshold must be positive".into()));
        }
        Ok(())
    }

    pub fn context(&self) -> Result<PrecisionContext<Mp>> {
        PrecisionContext::with_guard(self.digits, self.guard_digits)
    }

    pub fn sum_options(&self) -> SumOptions {
        SumOptions { chunk: self.chunk, spike_threshold: self.spike_threshold }
    }

    /// The configured directory, else `$FLINTLAB_OUT`, else the current directory.
    pub fn resolve_output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .or_else(|| std::env::var_os(OUTPUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }
}

/// Pretty JSON with a trailing newline, written through a temporary file.
pub fn write_json<V: Serialize>(path: &Path, value: &V) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Truncations of the partial-sum table.
pub const TABLE_NS: [u64; 5] = [10_000, 50_000, 100_000, 200_000, 500_000];

#[derive(Clone, Debug)]
pub struct TableRow<T> {
    pub n: u64,
    pub r1star: T,
    pub s: T,
    /// `|R₁*(N) − (3S(N) − 4ζ(3))|`
    pub residual: T,
    /// `|R₁*(N) − 3S(N) + 4H₃(N)|`
    pub termwise_residual: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRecord {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "R1star")]
    pub r1star: String,
    #[serde(rename = "S")]
    pub s: String,
    pub residual: String,
    pub termwise_residual: String,
}

impl<T: Real> TableRow<T> {
    pub fn record(&self) -> TableRecord {
        TableRecord {
            n: self.n,
            r1star: format_fixed(&self.r1star, 7),
            s: format_fixed(&self.s, 7),
            residual: format_sci(&self.residual, 3),
            termwise_residual: format_sci(&self.termwise_residual, 3),
        }
    }
}

/// `R₁*`, `S` and `H₃` at each (ascending) `N`, each series resumed from the previous row.
pub fn partial_sum_table<T: Real>(ns: &[u64], opts: SumOptions, ctx: &PrecisionContext<T>) -> Result<Vec<TableRow<T>>> {
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("table truncations must be strictly ascending".into()));
    }
    let ids = [SeriesId::R1Star, SeriesId::S, SeriesId::H3];
    let mut states: [Option<SeriesState<T>>; 3] = [None, None, None];
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        for (slot, id) in states.iter_mut().zip(ids) {
            *slot = Some(partial_sum_with(id, n, ctx, slot.take(), opts)?);
        }
        let [r, s, h] = [0, 1, 2].map(|i| states[i].as_ref().expect("summed").re.clone());
        let three_s = s.clone() * ctx.int(3);
        rows.push(TableRow {
            n,
            residual: (r.clone() - &three_s + ctx.zeta3().clone() * ctx.int(4)).abs(),
            termwise_residual: (r.clone() - three_s + h * ctx.int(4)).abs(),
            r1star: r,
            s,
        });
    }
    Ok(rows)
}

pub fn write_table_csv<T: Real, W: Write>(rows: &[TableRow<T>], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row.record())?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexText {
    pub re: String,
    pub im: String,
}

impl ComplexText {
    pub fn new<T: Real>(z: &Complex<T>, decimals: u32) -> Self {
        ComplexText { re: format_fixed(&z.re, decimals), im: format_fixed(&z.im, decimals) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LerchSummary {
    pub n: u64,
    pub digits: u32,
    pub a: ComplexText,
    pub b: ComplexText,
    pub c: ComplexText,
    pub d: ComplexText,
    /// `−4H₃(N) + 3A − 3B − 3C − 3D`
    pub combination: ComplexText,
    pub imaginary: String,
    /// Against `R₁*(N)`.
    pub residual: String,
}

pub fn lerch_summary<T: Real>(n: u64, ctx: &PrecisionContext<T>) -> Result<LerchSummary> {
    let pf = series::verify_partial_fraction(n, ctx)?;
    let dec = 12;
    Ok(LerchSummary {
        n,
        digits: ctx.decimal_digits(),
        a: ComplexText::new(&pf.a, dec),
        b: ComplexText::new(&pf.b, dec),
        c: ComplexText::new(&pf.c, dec),
        d: ComplexText::new(&pf.d, dec),
        combination: ComplexText::new(&pf.combination, dec),
        imaginary: format_sci(&pf.imaginary, 3),
        residual: format_sci(&pf.residual, 3),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpikeSummary {
    pub n: u64,
    pub nearest_multiple: String,
    pub delta: String,
    pub term: String,
    /// `3/(n³δ²)`
    pub laurent: String,
}

pub fn spike_summary<T: Real>(n: u64, ctx: &PrecisionContext<T>) -> Result<SpikeSummary> {
    let near = signed_near_distance(n, ctx)?;
    let term = series::term(SeriesId::R1Star, n, ctx)?.re;
    let laurent = ctx.int(3) / (ctx.uint(n).powi(3) * near.delta.sqr());
    Ok(SpikeSummary {
        n,
        nearest_multiple: near.m.to_string(),
        delta: format_sci(&near.delta, 6),
        term: format_fixed(&term, 8),
        laurent: format_fixed(&laurent, 8),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LValueSummary {
    pub closed_form: String,
    pub series_terms: u64,
    pub series: String,
    pub tail_bound: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproductionReport {
    pub config: RunConfig,
    pub table: Vec<TableRecord>,
    /// `p = 1/2` extrapolation from the last two rows.
    pub richardson_s: String,
    pub richardson_r1star: String,
    pub spike: SpikeSummary,
    pub l_value: LValueSummary,
    pub lerch: LerchSummary,
}

/// Lerch values need at least this many digits.
pub const LERCH_DIGITS: u32 = 40;
pub const LERCH_N: u64 = 50_000;

pub fn reproduction_report(cfg: &RunConfig, ns: &[u64]) -> Result<(ReproductionReport, Vec<TableRow<Mp>>)> {
    cfg.validate()?;
    if ns.len() < 2 {
        return Err(Error::InvalidArgument("the table needs at least two truncations".into()));
    }
    let ctx = cfg.context()?;
    let rows = partial_sum_table(ns, cfg.sum_options(), &ctx)?;
    let (p, q) = (&rows[rows.len() - 2], &rows[rows.len() - 1]);
    let rich_s = richardson_half(&p.s, p.n, &q.s, q.n)?;
    let rich_r = richardson_half(&p.r1star, p.n, &q.r1star, q.n)?;
    let l_terms = 20_000;
    let l = l_chi3_series(l_terms, &ctx)?;
    let lerch_ctx = PrecisionContext::<Mp>::with_guard(cfg.digits.max(LERCH_DIGITS), cfg.guard_digits)?;
    let report = ReproductionReport {
        config: cfg.clone(),
        table: rows.iter().map(TableRow::record).collect(),
        richardson_s: format_fixed(&rich_s, 7),
        richardson_r1star: format_fixed(&rich_r, 7),
        spike: spike_summary(series::SPIKE_INDEX, &ctx)?,
        l_value: LValueSummary {
            closed_form: format_fixed(ctx.l3(), 26),
            series_terms: l_terms,
            series: format_fixed(&l.value, 26),
            tail_bound: format_sci(&l.bound, 3),
        },
        lerch: lerch_summary(LERCH_N, &lerch_ctx)?,
    };
    Ok((report, rows))
}

/// Writes `table_72.csv`, `lerch.json` and `report.json` into `dir`; returns their paths.
pub fn write_reproduction(dir: &Path, report: &ReproductionReport, rows: &[TableRow<Mp>]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let table = dir.join("table_72.csv");
    write_table_csv(rows, fs::File::create(&table)?)?;
    let lerch = dir.join("lerch.json");
    write_json(&lerch, &report.lerch)?;
    let full = dir.join("report.json");
    write_json(&full, report)?;
    Ok(vec![table, lerch, full])
}
