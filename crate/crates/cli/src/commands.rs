use std::fs;
use std::path::{Path, PathBuf};

use flintlab::checkpoint::{load_checkpoint, save_checkpoint};
use flintlab::diophantine::{pi_convergents, regime_census_with, write_census_csv, RegimeExponents};
use flintlab::kernel::{default_fit_radii, laurent_coefficients, laurent_fit};
use flintlab::polylog::test_clausen_reduction;
use flintlab::precision::{format_fixed, format_sci};
use flintlab::relation::{scan_relations_with, RelationResult};
use flintlab::report::{reproduction_report, write_json, write_reproduction, RunConfig, TABLE_NS};
use flintlab::series::{self, partial_sum_with, SeriesState};
use flintlab::spectral::{non_resonance, parseval_check_with, FinitePartQuadrature};
use flintlab::{Mp, MpContext, PrecisionContext};
use serde_json::{json, Value};

use crate::args::*;
use crate::Failure;

type Outcome = Result<(), Failure>;

pub fn run(cli: Cli) -> Outcome {
    let cfg = resolve_config(&cli.global)?;
    match cli.command {
        Command::Sum(a) => sum(&cfg, a),
        Command::Classify(a) => classify(&cfg, a),
        Command::Convergents(a) => convergents(&cfg, a),
        Command::Verify(a) => verify(&cfg, a),
        Command::Laurent(a) => laurent(&cfg, a),
        Command::Spectral(a) => spectral(&cfg, a),
        Command::Relation(a) => relation(&cfg, a),
        Command::Report(a) => report(&cfg, a),
        Command::Clausen(a) => clausen(&cfg, a),
        Command::Accelerate(a) => accelerate(&cfg, a),
    }
}

/// Flags first, then every field present in the config file on top.
fn resolve_config(g: &GlobalArgs) -> Result<RunConfig, Failure> {
    let base = RunConfig {
        digits: g.digits,
        guard_digits: g.guard_digits,
        exponents: RegimeExponents { generic: g.generic_exponent, resonant: g.resonant_exponent },
        chunk: g.chunk,
        spike_threshold: g.spike_threshold,
        output_dir: g.out.clone(),
        checkpoint: None,
    };
    let Some(path) = &g.config else {
        base.validate()?;
        return Ok(base);
    };
    let text = fs::read_to_string(path)?;
    let overrides: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("config {}: {e}", path.display())))?;
    let Value::Object(fields) = overrides else {
        return Err(Failure::Usage(format!("config {} is not a JSON object", path.display())));
    };
    let mut merged = serde_json::to_value(&base).map_err(flintlab::Error::from)?;
    for (k, v) in fields {
        merged[k] = v;
    }
    RunConfig::from_json(&merged.to_string()).map_err(|e| Failure::Usage(format!("config {}: {e}", path.display())))
}

fn output_dir(cfg: &RunConfig) -> Result<PathBuf, Failure> {
    let dir = cfg.resolve_output_dir();
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn wrote(path: &Path) {
    println!("wrote {}", path.display());
}

fn sum(cfg: &RunConfig, a: SumArgs) -> Outcome {
    let ctx = cfg.context()?;
    let opts = cfg.sum_options();
    let resume = a.resume.clone().or_else(|| cfg.checkpoint.clone());
    let mut state: Option<SeriesState<Mp>> = match &resume {
        Some(p) if p.exists() => Some(load_checkpoint(p, &ctx)?),
        _ => None,
    };
    let target = a.checkpoint.clone().or(resume);
    let step = a.checkpoint_every.filter(|&k| k > 0).unwrap_or(u64::MAX);
    loop {
        let done = state.as_ref().map_or(0, |s| s.last_index);
        let next = done.saturating_add(step).min(a.n).max(done);
        let s = partial_sum_with(a.series, next, &ctx, state.take(), opts)?;
        let finished = s.last_index >= a.n;
        if let Some(p) = &target {
            save_checkpoint(&s, p)?;
        }
        state = Some(s);
        if finished {
            break;
        }
    }
    let s = state.expect("summed");
    let dec = cfg.digits;
    println!("series {}", s.id);
    println!("N {}", s.last_index);
    println!("re {}", format_fixed(&s.re, dec));
    if !s.id.is_real() {
        println!("im {}", format_fixed(&s.im, dec));
    }
    for sp in &s.spikes {
        println!("spike n={} term={} |delta|={} regime={}", sp.n, format_fixed(&sp.value.re, 6), format_sci(&sp.abs_delta, 4), sp.regime);
    }
    if let Some(p) = &target {
        println!("checkpoint {}", p.display());
    }
    Ok(())
}

fn classify(cfg: &RunConfig, a: ClassifyArgs) -> Outcome {
    let ctx = cfg.context()?;
    let census = regime_census_with(a.n, &cfg.exponents, cfg.chunk, &ctx)?;
    let dir = output_dir(cfg)?;
    let summary = dir.join(format!("census_{}.json", a.n));
    write_json(&summary, &census)?;
    println!("N {}  G {}  I {}  R {}", census.n_max, census.count_g, census.count_i, census.count_r);
    println!("resonant {:?}", census.resonant);
    println!("min |delta| n^(3/2) = {:.6} at n = {}", census.min_scaled_distance, census.min_scaled_distance_at);
    wrote(&summary);
    if !a.summary_only {
        let csv = dir.join(format!("census_{}.csv", a.n));
        write_census_csv(a.n, &cfg.exponents, cfg.chunk, &ctx, fs::File::create(&csv)?)?;
        wrote(&csv);
    }
    Ok(())
}

fn convergents(cfg: &RunConfig, a: ConvergentsArgs) -> Outcome {
    let ctx = cfg.context()?;
    for (k, c) in pi_convergents(a.count, &ctx)?.iter().enumerate() {
        println!("{k:>3}  {}/{}  |pi - p/q| = {}", c.p, c.q, format_sci(&c.error, 4));
    }
    Ok(())
}

fn check(label: &str, value: &Mp, tolerance: f64, failures: &mut Vec<String>) {
    let ok = value.to_f64() < tolerance;
    println!("{label} {}  {}", format_sci(value, 3), if ok { "ok" } else { "FAIL" });
    if !ok {
        failures.push(format!("{label} = {} ≥ {tolerance:e}", format_sci(value, 3)));
    }
}

fn verify(cfg: &RunConfig, a: VerifyArgs) -> Outcome {
    let ctx = cfg.context()?;
    let dec = cfg.digits.min(20);
    let mut failures = Vec::new();
    match a.identity {
        Identity::Reduction => {
            let r = series::verify_reduction(a.n, &ctx)?;
            println!("N {}  R1* {}  S {}", r.n, format_fixed(&r.r1star, dec), format_fixed(&r.s, dec));
            check("termwise residual |R1* - 3S + 4H3|", &r.termwise, a.tolerance, &mut failures);
            println!("zeta(3)-referenced residual |R1* - (3S - 4zeta(3))| {}", format_sci(&r.zeta_variant, 3));
        }
        Identity::Explicit => {
            let r = series::verify_explicit(a.n, &ctx)?;
            println!("N {}  G_cot {}  G_tan {}", r.n, format_fixed(&r.g_cot, dec), format_fixed(&r.g_tan, dec));
            println!("-(5/2)zeta(3) + (3/4)(G_cot + G_tan) = {}", format_fixed(&r.zeta_form, dec));
            check("residual |R1* + (5/2)H3 - (3/4)(G_cot + G_tan)|", &r.residual, a.tolerance, &mut failures);
        }
        Identity::PartialFraction => {
            let r = series::verify_partial_fraction(a.n, &ctx)?;
            for (name, z) in [("A", &r.a), ("B", &r.b), ("C", &r.c), ("D", &r.d)] {
                println!("{name} = {} {} i", format_fixed(&z.re, dec), format_fixed(&z.im, dec));
            }
            println!("-4H3 + 3A - 3B - 3C - 3D = {}", format_fixed(&r.combination.re, dec));
            check("residual against R1*", &r.residual, a.tolerance, &mut failures);
            check("imaginary part", &r.imaginary, a.tolerance, &mut failures);
        }
        Identity::Termwise => {
            let r = series::termwise_identities(a.n, &ctx)?;
            check("max termwise reduction", &r.reduction, a.tolerance, &mut failures);
            check("max termwise explicit form", &r.explicit, a.tolerance, &mut failures);
            check("max termwise partial fractions", &r.lerch, a.tolerance, &mut failures);
            check("max termwise imaginary part", &r.lerch_imaginary, a.tolerance, &mut failures);
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failures.join("; ")))
    }
}

fn laurent(cfg: &RunConfig, a: LaurentArgs) -> Outcome {
    let ctx = cfg.context()?;
    let radii = if a.radii.is_empty() {
        default_fit_radii(&ctx)
    } else {
        a.radii.iter().map(|&r| ctx.real(r)).collect()
    };
    let fit = laurent_fit(&radii, &ctx)?;
    let exact = laurent_coefficients(4)?;
    let mut failures = Vec::new();
    for p in -2..=4 {
        let want = exact.coefficient(p).map(|c| ctx.rational(c)).unwrap_or_else(|| ctx.zero());
        let got = fit.coefficient(p);
        let dev = (got.clone() - &want).abs();
        let scale = if want.clone().abs() > ctx.one() { want.clone().abs() } else { ctx.one() };
        let limit = match p {
            4 => Some(1e-4),
            3 => None,
            _ => Some(1e-6),
        };
        let rel = (dev / scale).to_f64();
        let verdict = match limit {
            Some(l) if rel >= l => {
                failures.push(format!("u^{p}: deviation {rel:e}"));
                "FAIL"
            }
            Some(_) => "ok",
            None => "",
        };
        println!("u^{p:<2} fitted {:>24}  exact {:>10}  deviation {rel:.2e} {verdict}", format_fixed(got, 15), exact.coefficient(p).map_or("0".into(), |c| c.to_string()));
    }
    println!("residual norm {}", format_sci(&fit.residual_norm, 3));
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failures.join("; ")))
    }
}

fn spectral(cfg: &RunConfig, a: SpectralArgs) -> Outcome {
    let ctx = cfg.context()?;
    let quad = FinitePartQuadrature { periods: a.periods, radius: a.radius, nodes: a.nodes, budget: a.budget };
    let report = parseval_check_with(&a.sigma, &quad, &ctx)?;
    let nr = non_resonance(a.resonance_kmax, &ctx)?;
    for e in &report.entries {
        println!(
            "sigma {}  comb {}  kernel {}  relative error {:.2e}  cut-off spread {:.2e}",
            e.sigma, e.comb, e.kernel, e.relative_error, e.cutoff_spread
        );
    }
    println!("min |pi k - m| k^(3/2) over k <= {} is {:.6} at k = {}", nr.k_max, nr.min_scaled, nr.argmin);
    let path = output_dir(cfg)?.join("spectral.json");
    write_json(&path, &json!({ "parseval": report, "non_resonance": nr }))?;
    wrote(&path);
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Verification(format!("max relative error {:e}", report.max_relative_error)))
    }
}

fn relation(cfg: &RunConfig, a: RelationArgs) -> Outcome {
    // The constants are carried five digits past the search precision.
    let ctx: MpContext = PrecisionContext::with_guard(a.search_digits + 5, cfg.guard_digits)?;
    let top = a.ladder_top.unwrap_or(a.basis.default_ladder_top());
    let report = scan_relations_with(a.basis, a.bound, a.search_digits, top, &ctx)?;
    for (label, v) in report.labels.iter().zip(&report.values) {
        println!("{label:>12} = {v}");
    }
    match &report.result {
        RelationResult::Relation { coefficients, residual, .. } => {
            println!("relation {coefficients:?}  residual {residual}");
        }
        RelationResult::Absent { norm_bound, certified, .. } => {
            println!(
                "no relation with coefficients <= {}  (norm bound {norm_bound:.3e}, certified {certified})",
                report.bound
            );
        }
    }
    let path = output_dir(cfg)?.join(format!("relation_{}.json", report.basis));
    write_json(&path, &report)?;
    wrote(&path);
    Ok(())
}

fn report(cfg: &RunConfig, a: ReportArgs) -> Outcome {
    if a.table != 72 {
        return Err(Failure::Usage(format!("no table {}; only 72 exists", a.table)));
    }
    let (rep, rows) = reproduction_report(cfg, &TABLE_NS)?;
    println!("{:>8} {:>12} {:>12} {:>10}", "N", "R1*", "S", "residual");
    for r in &rep.table {
        println!("{:>8} {:>12} {:>12} {:>10}", r.n, r.r1star, r.s, r.residual);
    }
    println!("Richardson S {}  R1* {}", rep.richardson_s, rep.richardson_r1star);
    println!("term(R1*, 355) {}  Laurent {}", rep.spike.term, rep.spike.laurent);
    println!("L(3, chi_-3) {}", rep.l_value.closed_form);
    for path in write_reproduction(&output_dir(cfg)?, &rep, &rows)? {
        wrote(&path);
    }
    Ok(())
}

fn clausen(cfg: &RunConfig, a: ClausenArgs) -> Outcome {
    let ctx = cfg.context()?;
    let r = test_clausen_reduction(a.n, &ctx)?;
    println!("F_cot {}  F_tan {}", r.f_cot, r.f_tan);
    println!("Cl3(1) {}  S3(1) {}  S2(1) {}", r.cl3_1, r.s3_1, r.s2_1);
    println!("F_cot - 2Cl3(1) = {}", r.gap_cot_leading);
    println!("F_cot - (2Cl3(1) - pi zeta(2)) = {}", r.gap_cot_with_zeta2);
    println!("F_cot - (2Cl3(1) - pi^2 ln2/3 + S2(1)) = {}", r.gap_cot_precise);
    println!("F_tan - 2S3(1) = {}", r.gap_tan_leading);
    let path = output_dir(cfg)?.join("clausen.json");
    write_json(&path, &r)?;
    wrote(&path);
    Ok(())
}

fn accelerate(cfg: &RunConfig, a: AccelerateArgs) -> Outcome {
    let ctx = cfg.context()?;
    let d = series::acceleration_failure_demo_with(a.n, &ctx)?;
    let dec = 8;
    println!("direct R1*({}) = {}", d.direct_n, format_fixed(&d.direct, dec));
    let mut runs = Vec::new();
    for r in [&d.exclude_spike, &d.include_spike, &d.pre_spike, &d.control] {
        println!(
            "{:<22} estimate {:>16}  |estimate - direct| {:>14}  consistent {}",
            r.label,
            format_fixed(&r.estimate, dec),
            format_sci(&r.discrepancy, 3),
            r.consistent
        );
        runs.push(json!({
            "label": r.label,
            "sample_n": r.sample_n,
            "estimate": format_fixed(&r.estimate, dec),
            "discrepancy": format_sci(&r.discrepancy, 3),
            "consistent": r.consistent,
        }));
    }
    let path = output_dir(cfg)?.join("acceleration.json");
    write_json(
        &path,
        &json!({
            "direct_n": d.direct_n,
            "direct": format_fixed(&d.direct, dec),
            "control_direct": format_fixed(&d.control_direct, dec),
            "runs": runs,
        }),
    )?;
    wrote(&path);
    Ok(())
}
