use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::args::{CaseArg, Cli, Command, Common, FormatArg, SignalSpec};
use super::plot::{self, PlotReport};
use super::report::{Check, Report, ReportConfig};
use super::{check_input, check_output, CliError, CliResult};
use crate::format::{load_signal, load_spectrum, save_signal, save_spectrum, SignalFormat};
use crate::grid::{gaussian, l2_norm, Grid2, GridMode, QSignal};
use crate::hardy::{hardy_classify, hardy_pipeline, DecayFit, HardyCase, HardyVerdict};
use crate::hermite::{eigen_residual, phi_signal, BasisIndex};
use crate::quaternion::Quaternion;
use crate::signals::{chirped_gaussian, random_signal, random_smooth};
use crate::transform::{iqdft, qdft_direct, qdft_fast, spectrum_l2_norm};
use crate::uncertainty::{
    heisenberg_reports, refinement_study, HeisenbergReport, REFINEMENT_ALPHA, REFINEMENT_L, REFINEMENT_SIZES,
};

fn grid_of(c: &Common) -> CliResult<Grid2> {
    let g = match GridMode::from(c.mode) {
        GridMode::Continuum => Grid2::square(c.grid_n, c.grid_l),
        GridMode::PureDiscrete => Grid2::discrete(c.grid_n, c.grid_n),
    };
    Ok(g?)
}

fn validate_paths(c: &Common, needs_input: bool, needs_output: bool) -> CliResult<()> {
    match &c.input {
        Some(p) => check_input(p)?,
        None if needs_input => return Err(CliError::Usage("this command needs --in".into())),
        None => {}
    }
    match &c.out {
        Some(p) => check_output(p)?,
        None if needs_output => return Err(CliError::Usage("this command needs --out".into())),
        None => {}
    }
    if let Some(p) = &c.plot {
        check_output(p)?;
    }
    Ok(())
}

fn generate(spec: &SignalSpec, grid: Grid2, seed: u64) -> CliResult<QSignal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = match *spec {
        SignalSpec::Gaussian(a) => gaussian(a, grid)?,
        SignalSpec::Chirp(a, c) => chirped_gaussian(grid, a, c, Quaternion::I, Quaternion::ONE)?,
        SignalSpec::Phi(k, l) => phi_signal(BasisIndex::new(k, l)?, grid)?,
        SignalSpec::Random => random_signal(&mut rng, grid),
        SignalSpec::Smooth => random_smooth(&mut rng, grid)?,
    };
    Ok(f)
}

/// The signal named by `--in`, else by `--signal`, else `gaussian(π)`.
fn input_signal(c: &Common) -> CliResult<QSignal> {
    if let Some(p) = &c.input {
        return Ok(load_signal(p)?);
    }
    let spec = c.signal.clone().unwrap_or(SignalSpec::Gaussian(PI));
    generate(&spec, grid_of(c)?, c.seed)
}

fn signal_format(f: FormatArg) -> SignalFormat {
    match f {
        FormatArg::Binary => SignalFormat::Binary,
        FormatArg::Text | FormatArg::Json => SignalFormat::Text,
    }
}

/// Writes `text` to `--out`, or to stdout when it is absent.
fn deliver(c: &Common, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match &c.out {
        Some(p) => fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn maybe_plot(path: &Option<PathBuf>, report: &PlotReport) -> CliResult<()> {
    if let Some(p) = path {
        plot::emit_plot_data(report, p)?;
    }
    Ok(())
}

fn finish(report: &Report) -> CliResult<()> {
    let failed: Vec<&str> = report
        .results
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numeric(format!(
            "{} check(s) failed: {}",
            failed.len(),
            failed.join(", ")
        )))
    }
}

pub(crate) fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let c = &cli.common;
    if !(c.band >= 0.0 && c.band < 1.0) {
        return Err(CliError::Usage(format!("--band must lie in [0, 1), got {}", c.band)));
    }
    let config = ReportConfig::from_common(c);
    match &cli.command {
        Command::Transform => transform(c, config, stdout),
        Command::Inverse => inverse(c, config, stdout),
        Command::Verify => verify(c, config, stdout),
        Command::Heisenberg => heisenberg(c, config, stdout),
        Command::Hardy { bounds, expect } => hardy(c, config, *bounds, *expect, stdout),
        Command::Basis => basis(c, config, stdout),
        Command::Bench { sizes } => bench(c, sizes, stdout),
    }
}

fn transform(c: &Common, config: ReportConfig, stdout: &mut dyn Write) -> CliResult<()> {
    validate_paths(c, false, true)?;
    let f = input_signal(c)?;
    let spec = qdft_fast(&f)?;
    save_spectrum(&spec, c.out.as_ref().expect("validated"))?;
    let (a, b) = (l2_norm(&f), spectrum_l2_norm(&spec)?);
    let mut report = Report::new("transform", config);
    report.results.push(Check::at_most("plancherel.relative_error", rel(a, b), 1e-10));
    report.reports = Some(json!({ "signal_l2": a, "spectrum_l2": b, "n1": f.grid.n1, "n2": f.grid.n2 }));
    let mut plots = PlotReport::default();
    if f.grid.is_continuum() {
        plots.push(plot::modulus_slice(&f));
        plots.push(plot::spectrum_slice(&spec));
    }
    maybe_plot(&c.plot, &plots)?;
    stdout.write_all(report.to_json().as_bytes())?;
    finish(&report)
}

fn inverse(c: &Common, config: ReportConfig, stdout: &mut dyn Write) -> CliResult<()> {
    validate_paths(c, true, true)?;
    let spec = load_spectrum(c.input.as_ref().expect("validated"))?;
    let f = iqdft(&spec)?;
    save_signal(&f, c.out.as_ref().expect("validated"), signal_format(c.format))?;
    let mut report = Report::new("inverse", config);
    let (a, b) = (l2_norm(&f), spectrum_l2_norm(&spec).unwrap_or(f64::NAN));
    report.reports = Some(json!({ "signal_l2": a, "spectrum_l2": b }));
    stdout.write_all(report.to_json().as_bytes())?;
    finish(&report)
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Plancherel, inversion, fast-vs-direct and Gaussian / Hermite eigen checks.
fn verify_checks(c: &Common) -> CliResult<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut checks = Vec::new();

    let dg = Grid2::discrete(32, 32)?;
    let (mut planch, mut round) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let f = random_signal(&mut rng, dg);
        let spec = qdft_fast(&f)?;
        planch = planch.max(rel(l2_norm(&f), spectrum_l2_norm(&spec)?));
        let back = iqdft(&spec)?;
        round = round.max(l2_norm(&back.axpby(1.0, &f, -1.0)?) / l2_norm(&f));
    }
    checks.push(Check::at_most("plancherel.discrete", planch, 1e-12));
    checks.push(Check::at_most("roundtrip.discrete", round, 1e-12));

    let cg = match GridMode::from(c.mode) {
        GridMode::Continuum => grid_of(c)?,
        GridMode::PureDiscrete => Grid2::default_continuum(),
    };
    let (mut planch, mut round) = (0.0f64, 0.0f64);
    for _ in 0..3 {
        let f = random_smooth(&mut rng, cg)?;
        let spec = qdft_fast(&f)?;
        planch = planch.max(rel(l2_norm(&f), spectrum_l2_norm(&spec)?));
        let back = iqdft(&spec)?;
        round = round.max(l2_norm(&back.axpby(1.0, &f, -1.0)?) / l2_norm(&f));
    }
    checks.push(Check::at_most("plancherel.continuum", planch, 1e-10));
    checks.push(Check::at_most("roundtrip.continuum", round, 1e-10));

    for n in [8usize, 16, 32] {
        let g = Grid2::square(n, 2.0)?;
        let f = random_signal(&mut rng, g);
        let direct = qdft_direct(&f);
        let fast = qdft_fast(&f)?;
        let scale = direct.data.iter().map(|q| q.modulus()).fold(0.0, f64::max);
        checks.push(Check::at_most(
            format!("fast_vs_direct.n{n}"),
            fast.max_abs_diff(&direct) / scale,
            1e-9,
        ));
    }

    let gg = Grid2::default_continuum();
    let spec = qdft_fast(&gaussian(PI, gg)?)?;
    let err = spec
        .data
        .iter()
        .enumerate()
        .map(|(idx, q)| {
            let (u, v) = (idx % gg.n1, idx / gg.n1);
            let want = (-PI * (gg.xi1(u).powi(2) + gg.xi2(v).powi(2))).exp();
            q.max_abs_diff(Quaternion::real(want))
        })
        .fold(0.0, f64::max);
    checks.push(Check::at_most("gaussian_eigenfunction", err, 1e-6));

    for (k, l) in [(1usize, 0usize), (2, 3), (4, 4)] {
        let r = eigen_residual(BasisIndex::new(k, l)?, gg)?;
        checks.push(Check::at_most(format!("hermite_eigen.{k}_{l}"), r, 1e-4));
    }
    Ok(checks)
}

fn verify(c: &Common, config: ReportConfig, stdout: &mut dyn Write) -> CliResult<()> {
    validate_paths(c, false, false)?;
    let mut report = Report::new("verify", config);
    report.results = verify_checks(c)?;
    deliver(c, &report.to_json(), stdout)?;
    finish(&report)
}

fn heisenberg_json(r: &HeisenbergReport) -> Value {
    json!({
        "axis": r.axis.number(),
        "spatial_spread": r.spatial_spread,
        "frequency_spread": r.frequency_spread,
        "norm4": r.norm4,
        "cov": r.cov,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "gap": r.gap,
        "gap_over_rhs": r.relative_gap(),
        "equality_flag": r.equality_flag,
    })
}

fn heisenberg(c: &Common, config: ReportConfig, stdout: &mut dyn Write) -> CliResult<()> {
    validate_paths(c, false, false)?;
    let f = input_signal(c)?;
    let reports = heisenberg_reports(&f)?;
    let mut report = Report::new("heisenberg", config);
    for r in &reports {
        report.results.push(Check::at_least(
            format!("x{}.inequality", r.axis.number()),
            r.relative_gap(),
            -1e-6,
        ));
    }
    report.reports = Some(Value::Array(reports.iter().map(heisenberg_json).collect()));
    if c.plot.is_some() {
        let mut plots = PlotReport::default();
        plots.push(plot::modulus_slice(&f));
        plots.push(plot::refinement_curve(&refinement_study(
            REFINEMENT_ALPHA,
            REFINEMENT_L,
            &REFINEMENT_SIZES,
        )?));
        maybe_plot(&c.plot, &plots)?;
    }
    deliver(c, &report.to_json(), stdout)?;
    finish(&report)
}

fn fit_json(f: &DecayFit) -> Value {
    json!({
        "alpha_hat": f.alpha_hat,
        "c_hat": f.c_hat,
        "residual": f.residual,
        "window_count": f.window_count,
    })
}

fn verdict_json(v: &HardyVerdict) -> Value {
    json!({
        "product": v.product,
        "product_over_pi2": v.product / (PI * PI),
        "classification": v.classification.as_str(),
        "margin": v.margin,
    })
}

fn hardy(
    c: &Common,
    config: ReportConfig,
    bounds: Option<(f64, f64)>,
    expect: Option<CaseArg>,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    validate_paths(c, false, false)?;
    let mut report = Report::new("hardy", config);
    let verdict = match bounds {
        Some((a, b)) => {
            let v = hardy_classify(a, b, c.band)?;
            report.reports = Some(json!({ "bounds": [a, b], "verdict": verdict_json(&v) }));
            v
        }
        None => {
            let f = input_signal(c)?;
            let (sf, pf, v) = hardy_pipeline(&f, c.band)?;
            report.reports = Some(json!({
                "signal_fit": fit_json(&sf),
                "spectrum_fit": fit_json(&pf),
                "verdict": verdict_json(&v),
            }));
            if c.plot.is_some() {
                let mut plots = PlotReport::default();
                plots.push(plot::modulus_slice(&f));
                plots.push(plot::spectrum_slice(&qdft_fast(&f)?));
                maybe_plot(&c.plot, &plots)?;
            }
            v
        }
    };
    if let Some(e) = expect {
        let want = match e {
            CaseArg::ZeroForced => HardyCase::ZeroForced,
            CaseArg::GaussianUnique => HardyCase::GaussianUnique,
            CaseArg::ManySolutions => HardyCase::ManySolutions,
        };
        report.results.push(Check {
            name: format!("verdict.{}", want.as_str()),
            value: verdict.margin,
            threshold: c.band,
            pass: verdict.classification == want,
        });
    }
    deliver(c, &report.to_json(), stdout)?;
    finish(&report)
}

fn basis(c: &Common, config: ReportConfig, stdout: &mut dyn Write) -> CliResult<()> {
    validate_paths(c, false, false)?;
    let g = grid_of(c)?;
    let mut report = Report::new("basis", config);
    let mut rows = Vec::new();
    for k in 0..=c.kmax {
        for l in 0..=c.kmax {
            let r = eigen_residual(BasisIndex::new(k, l)?, g)?;
            rows.push((k, l, r));
            report.results.push(Check::at_most(format!("eigen.{k}_{l}"), r, 1e-4));
        }
    }
    let text = match c.format {
        FormatArg::Json => report.to_json(),
        FormatArg::Text | FormatArg::Binary => {
            let mut s = String::from("k l residual\n");
            for (k, l, r) in rows {
                s.push_str(&format!("{k} {l} {r:.6e}\n"));
            }
            s
        }
    };
    deliver(c, &text, stdout)?;
    finish(&report)
}

/// Mean wall time of `f`, repeated until at least `budget` seconds have passed.
fn time_it(mut f: impl FnMut(), budget: f64) -> f64 {
    let start = Instant::now();
    let mut reps = 0u32;
    loop {
        f();
        reps += 1;
        let t = start.elapsed().as_secs_f64();
        if t >= budget || reps >= 10_000 {
            return t / f64::from(reps);
        }
    }
}

/// `(size, method, seconds)` rows for the direct and fast transforms.
fn bench_rows(sizes: &[usize], l: f64, seed: u64) -> crate::error::Result<Vec<(usize, &'static str, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for &n in sizes {
        let f = random_signal(&mut rng, Grid2::square(n, l)?);
        let direct = time_it(|| drop(std::hint::black_box(qdft_direct(&f))), 0.05);
        let fast = time_it(|| drop(std::hint::black_box(qdft_fast(&f))), 0.05);
        rows.push((n, "direct", direct));
        rows.push((n, "fast", fast));
    }
    Ok(rows)
}

fn bench(c: &Common, sizes: &[usize], stdout: &mut dyn Write) -> CliResult<()> {
    validate_paths(c, false, false)?;
    if sizes.is_empty() || sizes.iter().any(|&n| n == 0 || n % 2 == 1) {
        return Err(CliError::Usage("bench sizes must be positive and even".into()));
    }
    let mut csv = String::from("size,method,seconds\n");
    for (n, method, secs) in bench_rows(sizes, c.grid_l, c.seed)? {
        csv.push_str(&format!("{n},{method},{secs:.6e}\n"));
    }
    deliver(c, &csv, stdout)
}
