use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde_json::json;

use qmix_core::{
    avg_entropy_equi_hs, avg_entropy_qadd_hs, avg_fidelity_squared_exact,
    avg_fidelity_squared_quadrature, ks_one_sample, ks_threshold, mc_avg_coherence_mean_n,
    mc_avg_entropy_equi_hs, mc_avg_entropy_mean_n, mc_avg_entropy_qadd_hs,
    mc_avg_fidelity_squared, page_entropy, triangle_deficits, violation_search, BlochVector,
    DensityKind, McEstimate, MixCurve, QuadEstimate, SeededSampler, TripleMode,
};

use crate::manifest::RunManifest;
use crate::{
    AveragesArgs, CliError, DensityArgs, FormatArg, GsweepArgs, KindArg, LawParams, MethodArg,
    ModeArg, SearchArgs, VerifyArgs, WhichArg,
};

fn write_data(out: Option<&Path>, data: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, data),
        None => {
            print!("{data}");
            Ok(())
        }
    }
}

fn require(value: Option<f64>, flag: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::usage(format!("--{flag} is required for this kind")))
}

fn forbid(value: Option<f64>, flag: &str) -> Result<(), CliError> {
    if value.is_some() {
        return Err(CliError::usage(format!(
            "--{flag} does not apply to this kind"
        )));
    }
    Ok(())
}

fn build_kind(kind: KindArg, p: &LawParams) -> Result<DensityKind, CliError> {
    match kind {
        KindArg::LambdaEqui | KindArg::LambdaQadd => {
            forbid(p.r1, "r1")?;
            forbid(p.r2, "r2")?;
            let mu = require(p.mu, "mu")?;
            let nu = require(p.nu, "nu")?;
            Ok(if kind == KindArg::LambdaEqui {
                DensityKind::LambdaEqui { mu, nu }
            } else {
                DensityKind::LambdaQadd { mu, nu }
            })
        }
        KindArg::REqui | KindArg::RQadd => {
            forbid(p.mu, "mu")?;
            forbid(p.nu, "nu")?;
            let r1 = require(p.r1, "r1")?;
            let r2 = require(p.r2, "r2")?;
            Ok(if kind == KindArg::REqui {
                DensityKind::REqui { r1, r2 }
            } else {
                DensityKind::RQadd { r1, r2 }
            })
        }
        KindArg::Angle | KindArg::Maxeig => {
            forbid(p.mu, "mu")?;
            forbid(p.nu, "nu")?;
            forbid(p.r1, "r1")?;
            forbid(p.r2, "r2")?;
            Ok(if kind == KindArg::Angle {
                DensityKind::Angle
            } else {
                DensityKind::MaxEigHs
            })
        }
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Kebab-case name of a unit enum variant, as it appears on the command
/// line.
fn enum_name<T: serde::Serialize>(value: &T) -> String {
    match serde_json::to_value(value) {
        Ok(serde_json::Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

pub fn density(args: &DensityArgs) -> Result<u8, CliError> {
    let started = Instant::now();
    if args.grid < 2 {
        return Err(CliError::usage("--grid must be at least 2"));
    }
    let kind = build_kind(args.kind, &args.params)?;
    let support = kind.support()?;
    let domain_hi = if kind == DensityKind::Angle {
        std::f64::consts::PI
    } else {
        1.0
    };
    let mut xs: Vec<f64> = (0..args.grid)
        .map(|k| domain_hi * k as f64 / (args.grid - 1) as f64)
        .collect();
    for iv in support.intervals() {
        xs.push(iv.lo);
        xs.push(iv.hi);
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let rows: Vec<(f64, f64)> = xs
        .into_iter()
        .map(|x| kind.pdf(x).map(|d| (x, d)))
        .collect::<qmix_core::Result<_>>()?;

    let data = match args.format {
        FormatArg::Csv => {
            let mut text = String::from("abscissa,density\n");
            for (x, d) in &rows {
                writeln!(text, "{x},{d}").expect("string write");
            }
            text
        }
        FormatArg::Json => {
            let points: Vec<_> = rows
                .iter()
                .map(|(x, d)| json!({ "abscissa": x, "density": d }))
                .collect();
            serde_json::to_string_pretty(&json!({ "points": points }))? + "\n"
        }
    };
    write_data(args.out.as_deref(), &data)?;
    RunManifest::new(
        "density",
        json!({
            "kind": args.kind,
            "params": args.params,
            "grid": args.grid,
            "format": args.format,
        }),
        Some(args.seed),
        started,
    )
    .emit(args.out.as_deref())?;
    Ok(0)
}

pub fn verify(args: &VerifyArgs) -> Result<u8, CliError> {
    let started = Instant::now();
    if args.samples < 10_000 {
        return Err(CliError::usage("--samples must be at least 10000"));
    }
    let curve = build_kind(args.kind, &args.params)?;
    // surface degenerate parameters before any sampling happens
    curve.cdf(0.5)?;
    let overridden = args.sample_mu.is_some()
        || args.sample_nu.is_some()
        || args.sample_r1.is_some()
        || args.sample_r2.is_some();
    let sample_params = LawParams {
        mu: args.sample_mu.or(args.params.mu),
        nu: args.sample_nu.or(args.params.nu),
        r1: args.sample_r1.or(args.params.r1),
        r2: args.sample_r2.or(args.params.r2),
    };
    let sampled = if overridden {
        build_kind(args.kind, &sample_params)?
    } else {
        curve
    };

    let mut sampler = SeededSampler::new(args.seed);
    let mut draws = Vec::with_capacity(args.samples as usize);
    for _ in 0..args.samples {
        draws.push(sampled.sample_physical(&mut sampler)?);
    }
    draws.sort_by(f64::total_cmp);
    let statistic = ks_one_sample(&draws, |x| curve.cdf(x).unwrap_or(f64::NAN))?;
    let threshold = ks_threshold(draws.len());
    let pass = statistic < threshold;

    let report = json!({
        "kind": args.kind,
        "params": args.params,
        "sample_params": if overridden { Some(sample_params) } else { None },
        "n_samples": args.samples,
        "seed": args.seed,
        "ks_statistic": statistic,
        "threshold": threshold,
        "pass": pass,
    });
    write_data(
        args.out.as_deref(),
        &(serde_json::to_string_pretty(&report)? + "\n"),
    )?;
    RunManifest::new(
        "verify",
        json!({
            "kind": args.kind,
            "params": args.params,
            "sample_params": if overridden { Some(sample_params) } else { None },
            "samples": args.samples,
        }),
        Some(args.seed),
        started,
    )
    .emit(args.out.as_deref())?;
    Ok(if pass { 0 } else { 2 })
}

struct AverageOutcome {
    value: f64,
    error: Option<f64>,
    unit: &'static str,
    detail: serde_json::Value,
}

fn from_quad(est: QuadEstimate) -> AverageOutcome {
    AverageOutcome {
        value: est.value,
        error: Some(est.abs_error),
        unit: "bits",
        detail: json!({ "subdivisions": est.subdivisions }),
    }
}

fn from_mc(est: McEstimate, unit: &'static str) -> AverageOutcome {
    AverageOutcome {
        value: est.value,
        error: Some(est.std_error),
        unit,
        detail: json!({ "n_samples": est.n_samples, "seed": est.seed }),
    }
}

pub fn averages(args: &AveragesArgs) -> Result<u8, CliError> {
    let started = Instant::now();
    let workers = args.workers.unwrap_or_else(default_workers);
    let need_n = |label: &str| {
        args.n
            .ok_or_else(|| CliError::usage(format!("--n is required for --which {label}")))
    };
    let unsupported = || {
        CliError::usage(format!(
            "unsupported combination: --which {} --method {}",
            enum_name(&args.which),
            enum_name(&args.method),
        ))
    };

    let outcome = match (args.which, args.method) {
        (WhichArg::EntropyEqui, MethodArg::Quadrature) => from_quad(avg_entropy_equi_hs()?),
        (WhichArg::EntropyEqui, MethodArg::Mc) => from_mc(
            mc_avg_entropy_equi_hs(args.seed, args.samples, workers)?,
            "bits",
        ),
        (WhichArg::EntropyQadd, MethodArg::Quadrature) => from_quad(avg_entropy_qadd_hs()?),
        (WhichArg::EntropyQadd, MethodArg::Mc) => from_mc(
            mc_avg_entropy_qadd_hs(args.seed, args.samples, workers)?,
            "bits",
        ),
        (WhichArg::Fidelity2, MethodArg::Exact) => AverageOutcome {
            value: avg_fidelity_squared_exact(),
            error: None,
            unit: "dimensionless",
            detail: json!({}),
        },
        (WhichArg::Fidelity2, MethodArg::Quadrature) => {
            let mut outcome = from_quad(avg_fidelity_squared_quadrature()?);
            outcome.unit = "dimensionless";
            outcome
        }
        (WhichArg::Fidelity2, MethodArg::Mc) => from_mc(
            mc_avg_fidelity_squared(args.seed, args.samples, workers)?,
            "dimensionless",
        ),
        (WhichArg::Page, MethodArg::Exact) => {
            let m = args
                .m
                .ok_or_else(|| CliError::usage("--m is required for --which page"))?;
            let n = need_n("page")?;
            let page = page_entropy(m, n)?;
            AverageOutcome {
                value: page.nats(),
                error: None,
                unit: "nats",
                detail: json!({
                    "m": m,
                    "n": n,
                    "exact": page.exact_nats().to_string(),
                    "value_bits": page.bits(),
                }),
            }
        }
        (WhichArg::EntropyMeanN, MethodArg::Mc) => {
            let n = u32::try_from(need_n("entropy-mean-n")?)
                .map_err(|_| CliError::usage("--n is out of range"))?;
            from_mc(
                mc_avg_entropy_mean_n(args.seed, args.samples, workers, n)?,
                "bits",
            )
        }
        (WhichArg::CoherenceN, MethodArg::Mc) => {
            let n = u32::try_from(need_n("coherence-n")?)
                .map_err(|_| CliError::usage("--n is out of range"))?;
            from_mc(
                mc_avg_coherence_mean_n(args.seed, args.samples, workers, n)?,
                "bits",
            )
        }
        _ => return Err(unsupported()),
    };

    let is_mc = args.method == MethodArg::Mc;
    let report = json!({
        "which": args.which,
        "method": args.method,
        "value": outcome.value,
        "error": outcome.error,
        "unit": outcome.unit,
        "workers": if is_mc { Some(workers) } else { None },
        "detail": outcome.detail,
    });
    write_data(
        args.out.as_deref(),
        &(serde_json::to_string_pretty(&report)? + "\n"),
    )?;
    RunManifest::new(
        "averages",
        json!({
            "which": args.which,
            "method": args.method,
            "samples": if is_mc { Some(args.samples) } else { None },
            "workers": if is_mc { Some(workers) } else { None },
            "m": args.m,
            "n": args.n,
        }),
        Some(args.seed),
        started,
    )
    .emit(args.out.as_deref())?;
    Ok(0)
}

fn replay_triple(coords: &[f64]) -> Result<u8, CliError> {
    let vector = |k: usize| {
        BlochVector::new(coords[3 * k], coords[3 * k + 1], coords[3 * k + 2])
            .map_err(|e| CliError::usage(format!("vector {} of --check-triple: {e}", k + 1)))
    };
    let (a, b, c) = (vector(0)?, vector(1)?, vector(2)?);
    let (deficit, squared_deficit) = triangle_deficits(&a, &b, &c);
    let report = json!({
        "vectors": [a.components(), b.components(), c.components()],
        "deficit": deficit,
        "squared_deficit": squared_deficit,
        "violation": deficit < 0.0 || squared_deficit < 0.0,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if deficit < 0.0 || squared_deficit < 0.0 {
        0
    } else {
        2
    })
}

pub fn search_violations(args: &SearchArgs) -> Result<u8, CliError> {
    let started = Instant::now();
    if let Some(coords) = &args.check_triple {
        return replay_triple(coords);
    }
    let mode = match args.mode.expect("clap enforces --mode") {
        ModeArg::Pure => TripleMode::Pure,
        ModeArg::Mixed => TripleMode::Mixed,
    };
    let n_triples = args.n_triples.expect("clap enforces --n-triples");
    let workers = args.workers.unwrap_or_else(default_workers);
    let sampler = SeededSampler::new(args.seed);
    let found = violation_search(mode, n_triples, &sampler, workers)?;

    let mut text = String::new();
    for report in &found.reports {
        text.push_str(&serde_json::to_string(report)?);
        text.push('\n');
    }
    let summary = json!({
        "mode": args.mode,
        "seed": found.seed,
        "n_triples": found.n_triples,
        "distance_violations": found.distance_violations,
        "squared_violations": found.squared_violations,
    });
    text.push_str(&serde_json::to_string(&summary)?);
    text.push('\n');
    write_data(args.out.as_deref(), &text)?;
    RunManifest::new(
        "search-violations",
        json!({
            "mode": args.mode,
            "n_triples": n_triples,
            "workers": workers,
        }),
        Some(args.seed),
        started,
    )
    .emit(args.out.as_deref())?;
    Ok(if found.reports.is_empty() { 2 } else { 0 })
}

pub fn gsweep(args: &GsweepArgs) -> Result<u8, CliError> {
    let started = Instant::now();
    if args.grid < 3 {
        return Err(CliError::usage("--grid must be at least 3"));
    }
    let curve = MixCurve::new(args.r1, args.r2, args.theta)?;
    let step = 1.0 / (args.grid - 1) as f64;
    let mut rows = Vec::with_capacity(args.grid);
    for k in 0..args.grid {
        let t = k as f64 * step;
        rows.push((t, curve.entropy_sum(t)?, curve.entropy_gap(t)?));
    }
    let (argmax_t, max_sum, max_gap) = rows
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("grid is nonempty");
    if (argmax_t - 0.5).abs() > step + 1e-12 {
        return Err(CliError::Postcondition(format!(
            "entropy-sum argmax {argmax_t} is more than one grid step from 1/2"
        )));
    }

    let data = match args.format {
        FormatArg::Csv => {
            let mut text = String::from("t,entropy_sum,entropy_gap\n");
            for (t, s, g) in &rows {
                writeln!(text, "{t},{s},{g}").expect("string write");
            }
            text
        }
        FormatArg::Json => {
            let points: Vec<_> = rows
                .iter()
                .map(|(t, s, g)| json!({ "t": t, "entropy_sum": s, "entropy_gap": g }))
                .collect();
            serde_json::to_string_pretty(&json!({ "points": points }))? + "\n"
        }
    };
    write_data(args.out.as_deref(), &data)?;

    let report = serde_json::to_string(&json!({
        "argmax_t": argmax_t,
        "max_entropy_sum": max_sum,
        "max_entropy_gap": max_gap,
        "grid_step": step,
    }))?;
    if args.out.is_some() {
        println!("{report}");
    } else {
        eprintln!("{report}");
    }
    RunManifest::new(
        "gsweep",
        json!({
            "r1": args.r1,
            "r2": args.r2,
            "theta": args.theta,
            "grid": args.grid,
            "format": args.format,
        }),
        Some(args.seed),
        started,
    )
    .emit(args.out.as_deref())?;
    Ok(0)
}
