use std::collections::BTreeMap;
use std::path::Path;

use clap::Args;
use serde::Serialize;

use turanlab::arith::{check_remainder_bound, check_remainder_bound_half, log_spaced, sieve_lambda, RegionExponent};
use turanlab::experiment::{
    bound_comparison_report, derived_params, exponent_table, feasibility_search, ExperimentConfig, FeasibilityGrid,
};
use turanlab::explicit::{explicit_residual, WeightedSumSpec};
use turanlab::powersum::{certificate_sweep, LambdaChoice};
use turanlab::zeros::{load_zeros, schoenfeld_sweep, zero_free_consistency, ZeroDataset};
use turanlab::zeta::{
    cal_z, log_deriv_zeta_integral, log_deriv_zeta_series, zeta_dirichlet, zeta_integral, CalZMethod, CalZMode,
    ComplexPoint, EvalResult,
};

use crate::output::{read_text, write_csv, write_json, write_json_lines, CliError, CliResult, Report, RunManifest};
use crate::{Context, ZeroSource};

fn output(ctx: &Context, manifest: &mut RunManifest, name: &str) -> std::path::PathBuf {
    manifest.outputs.push(name.to_string());
    ctx.out.join(name)
}

fn load_nonempty(path: &Path) -> CliResult<ZeroDataset> {
    let ds = load_zeros(path)?;
    if ds.is_empty() {
        return Err(turanlab::Error::InsufficientData(format!("{} holds no ordinates", path.display())).into());
    }
    Ok(ds)
}

fn load_config(ctx: &Context) -> CliResult<ExperimentConfig> {
    match &ctx.config {
        Some(path) => Ok(ExperimentConfig::parse(&read_text(path)?)?),
        None => Ok(ExperimentConfig::default()),
    }
}

#[derive(Args, Debug)]
pub struct PsiArgs {
    /// Sieve limit; the largest sample point.
    #[arg(long, default_value_t = 1_000_000)]
    limit: u64,
    /// Number of log-spaced sample points.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Smallest sample point.
    #[arg(long, default_value_t = 1000.0)]
    from: f64,
    /// Constant B in the bound.
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Use the exponent H_j instead of 1/2.
    #[arg(long)]
    j: Option<u32>,
}

pub fn psi(ctx: &Context, args: &PsiArgs) -> CliResult<Report> {
    let mut m = RunManifest::new("psi");
    m.param("limit", args.limit)
        .param("samples", args.samples)
        .param("from", args.from)
        .param("b", args.b)
        .param("j", args.j.map_or("1/2 branch".to_string(), |j| j.to_string()));
    let table = sieve_lambda(args.limit)?;
    if !(args.from > 2.0 && args.from < args.limit as f64) {
        return Err(CliError::Usage(format!("--from must lie in (2, {})", args.limit)));
    }
    let xs = log_spaced(args.from, args.limit as f64, args.samples);
    let report = match args.j {
        Some(j) => check_remainder_bound(&table, &RegionExponent::new(j), args.b, &xs)?,
        None => check_remainder_bound_half(&table, args.b, &xs)?,
    };
    write_csv(&output(ctx, &mut m, "psi.csv"), &report.samples)?;
    m.param("worst_ratio", report.worst_ratio).param("worst_x", report.worst_x);
    Ok(Report::new(m, Vec::new()))
}

#[derive(Args, Debug)]
pub struct ZerosArgs {
    #[command(flatten)]
    source: ZeroSource,
    /// Largest height of the counting sweep.
    #[arg(long, default_value_t = 9000.0)]
    t_max: f64,
    /// Index j of the zero-free region checked against the ordinates.
    #[arg(long, default_value_t = 0)]
    j: u32,
    /// Exponent θ >= 2 of the region width h_j(t)
    #[arg(long, default_value_t = 3.0)]
    theta: f64,
}

pub fn zeros(ctx: &Context, args: &ZerosArgs) -> CliResult<Report> {
    let path = args.source.path();
    let mut m = RunManifest::new("zeros");
    m.param("zeros", path.display()).param("t_max", args.t_max).param("j", args.j).param("theta", args.theta);
    let ds = load_nonempty(&path)?;
    let reports = schoenfeld_sweep(&ds, args.t_max)?;
    write_csv(&output(ctx, &mut m, "counts.csv"), &reports)?;
    let violations: Vec<String> = reports
        .iter()
        .filter(|r| !r.holds())
        .map(|r| format!("counting bound fails at T = {}: slack {}", r.t, r.slack))
        .collect();
    let zero_free = zero_free_consistency(&ds, args.j, args.theta)?;
    write_json(&output(ctx, &mut m, "zero_free.json"), &zero_free)?;
    m.param("heights", reports.len()).param("count", ds.len());
    Ok(Report::new(m, violations))
}

#[derive(Args, Debug)]
pub struct ExplicitArgs {
    #[command(flatten)]
    source: ZeroSource,
    /// Cut-off W; must stay at least 1/4 away from the integers.
    #[arg(long, default_value_t = 1000.5)]
    w: f64,
    /// Weight exponent: terms carry log^{k-1}(n/W)
    #[arg(long, default_value_t = 4)]
    k: u32,
    /// Real part of s
    #[arg(long, default_value_t = 2.0)]
    sigma: f64,
    /// Imaginary part of s
    #[arg(long, default_value_t = 30.0)]
    t: f64,
    /// Prime-side truncation.
    #[arg(long, default_value_t = 1_000_000)]
    n_max: u64,
    /// Conjugate zero pairs on the zero side.
    #[arg(long, default_value_t = 10_000)]
    zero_pairs: usize,
    /// Trivial zeros included.
    #[arg(long, default_value_t = 50)]
    m_triv: u32,
}

pub fn explicit(ctx: &Context, args: &ExplicitArgs) -> CliResult<Report> {
    let path = args.source.path();
    let mut m = RunManifest::new("explicit");
    m.param("zeros", path.display())
        .param("w", args.w)
        .param("k", args.k)
        .param("sigma", args.sigma)
        .param("t", args.t)
        .param("n_max", args.n_max)
        .param("zero_pairs", args.zero_pairs)
        .param("m_triv", args.m_triv);
    let spec = WeightedSumSpec {
        w: args.w,
        k: args.k,
        s: ComplexPoint::new(args.sigma, args.t)?,
        n_max: args.n_max,
        zero_pairs: args.zero_pairs,
        m_triv: args.m_triv,
    };
    spec.validate()?;
    let ds = load_nonempty(&path)?;
    let table = sieve_lambda(args.n_max)?;
    let report = explicit_residual(&spec, &table, &ds)?;
    write_json(&output(ctx, &mut m, "explicit.json"), &report)?;
    let violations = if report.within_allowance() {
        Vec::new()
    } else {
        vec![format!(
            "residual {:e} exceeds the truncation allowance {:e}",
            report.residual, report.truncation_allowance
        )]
    };
    Ok(Report::new(m, violations))
}

#[derive(Args, Debug)]
pub struct PowersumArgs {
    /// Number of random systems.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Disc parameter λ >= 1/40, or `auto` for max(1/40, D/L).
    #[arg(long, default_value = "auto")]
    lambda: String,
}

#[derive(Serialize)]
struct FailedCertificate {
    seed: u64,
    error: String,
}

pub fn powersum(ctx: &Context, args: &PowersumArgs) -> CliResult<Report> {
    let mut m = RunManifest::new("powersum");
    m.param("trials", args.trials).param("lambda", &args.lambda);
    let lambda = match args.lambda.as_str() {
        "auto" => LambdaChoice::Auto,
        other => LambdaChoice::Fixed(
            other
                .parse()
                .map_err(|_| CliError::Usage(format!("--lambda expects a number or `auto`, got {other:?}")))?,
        ),
    };
    let results = certificate_sweep(args.trials, ctx.seed, lambda);
    let mut certs = Vec::new();
    let mut failures = Vec::new();
    let mut violations = Vec::new();
    let mut chain_breaks = 0;
    for (seed, result) in results {
        match result {
            Ok(cert) => {
                violations.extend(cert.violations().into_iter().map(|v| format!("seed {seed}: {v}")));
                if !cert.chain_holds {
                    chain_breaks += 1;
                }
                certs.push(cert);
            }
            Err(e) => {
                violations.push(format!("seed {seed}: {e}"));
                failures.push(FailedCertificate { seed, error: e.to_string() });
            }
        }
    }
    write_json_lines(&output(ctx, &mut m, "certificates.jsonl"), &certs)?;
    if !failures.is_empty() {
        write_json_lines(&output(ctx, &mut m, "failures.jsonl"), &failures)?;
    }
    m.param("certified", certs.len()).param("chain_below_final", chain_breaks);
    Ok(Report::new(m, violations))
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[command(flatten)]
    source: ZeroSource,
    /// Feasibility grid, `key = v1, v2, ...` per line.
    #[arg(long)]
    grid: Option<std::path::PathBuf>,
    /// Exponent k of the zero sum; defaults to the smallest admissible.
    #[arg(long)]
    k: Option<u32>,
}

#[derive(Serialize)]
struct ExperimentSummary {
    config: BTreeMap<&'static str, String>,
    derived: turanlab::experiment::DerivedParams,
    exponents: turanlab::experiment::ExponentTable,
    exponents_feasible: bool,
}

pub fn experiment(ctx: &Context, args: &ExperimentArgs) -> CliResult<Report> {
    let mut m = RunManifest::new("experiment");
    let config = load_config(ctx)?;
    config.validate()?;
    let grid = match &args.grid {
        Some(path) => {
            m.param("grid", path.display());
            FeasibilityGrid::parse(&read_text(path)?)?
        }
        None => FeasibilityGrid::default(),
    };
    for (key, value) in config.to_pairs() {
        m.param(key, value);
    }
    let derived = derived_params(&config)?;
    let exponents = exponent_table(&config)?;
    let summary = ExperimentSummary {
        config: config.to_pairs(),
        derived,
        exponents,
        exponents_feasible: exponents.feasible(),
    };
    write_json(&output(ctx, &mut m, "exponents.json"), &summary)?;
    let feasibility = feasibility_search(&grid, &config)?;
    write_csv(&output(ctx, &mut m, "feasibility.csv"), &feasibility.rows)?;
    m.param("grid_points", feasibility.rows.len()).param("feasible_points", feasibility.feasible);

    let mut violations = Vec::new();
    let path = args.source.path();
    let explicit_source = args.source_given();
    let ds = match load_nonempty(&path) {
        Ok(ds) => Some(ds),
        Err(CliError::Core(turanlab::Error::Io { .. })) if !explicit_source => None,
        Err(e) => return Err(e),
    };
    let in_range = ds
        .as_ref()
        .and_then(|d| d.coverage())
        .is_some_and(|top| config.gamma_p + config.x_cut <= top && config.gamma_p - config.x_cut > 0.0);
    match ds {
        Some(ds) if in_range => {
            let k = args.k.unwrap_or_else(|| derived.k_min.ceil().max(1.0) as u32);
            let report = bound_comparison_report(&ds, &config, k, derived.log_w(k as f64))?;
            if !report.partition.is_partition() {
                violations.push("zero classes do not partition the dataset".to_string());
            }
            if !report.partition.identity_holds(1e-9) {
                violations.push(format!(
                    "S0 differs from the part sums by {:e} (relative)",
                    report.partition.relative_gap
                ));
            }
            write_json(&output(ctx, &mut m, "bounds.json"), &report)?;
            m.param("partition_k", k);
        }
        _ => {
            m.param(
                "partition",
                format!("skipped: gamma' = {} is not inside the zero table {}", config.gamma_p, path.display()),
            );
        }
    }
    Ok(Report::new(m, violations))
}

impl ExperimentArgs {
    fn source_given(&self) -> bool {
        self.source.given()
    }
}

#[derive(Args, Debug)]
pub struct ZetaArgs {
    #[arg(long, allow_hyphen_values = true)]
    sigma: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t: f64,
    /// Gauss–Legendre nodes per panel of the integral representation.
    #[arg(long, default_value_t = 16)]
    quad_nodes: usize,
    /// Truncation tolerance of the Dirichlet series.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Sieve limit for the series of -ζ'/ζ.
    #[arg(long, default_value_t = 1_000_000)]
    limit: u64,
}

pub fn zeta(ctx: &Context, args: &ZetaArgs) -> CliResult<Report> {
    let mut m = RunManifest::new("zeta");
    m.param("sigma", args.sigma)
        .param("t", args.t)
        .param("quad_nodes", args.quad_nodes)
        .param("tol", args.tol)
        .param("limit", args.limit);
    let s = ComplexPoint::new(args.sigma, args.t)?;
    let mut values: BTreeMap<&str, EvalResult> = BTreeMap::new();
    let integral = CalZMethod::Integral { quad_nodes: args.quad_nodes };
    if args.sigma == 1.0 && args.t == 0.0 {
        values.insert("cal_z_limit", cal_z(s, &integral, CalZMode::SymmetricLimit { eps: 1e-3 })?);
    } else {
        values.insert("zeta_integral", zeta_integral(s, args.quad_nodes)?);
        values.insert("log_deriv_integral", log_deriv_zeta_integral(s, args.quad_nodes)?);
        values.insert("cal_z_integral", cal_z(s, &integral, CalZMode::Direct)?);
        if args.sigma > 1.0 {
            values.insert("zeta_dirichlet", zeta_dirichlet(s, args.tol)?);
            let table = sieve_lambda(args.limit)?;
            values.insert("log_deriv_series", log_deriv_zeta_series(s, &table, args.tol)?);
        }
    }
    let mut violations = Vec::new();
    if let (Some(a), Some(b)) = (values.get("zeta_dirichlet"), values.get("zeta_integral")) {
        if !a.agrees_with(b) {
            violations.push(format!("Dirichlet {} and integral {} disagree beyond their error bars", a.value, b.value));
        }
    }
    write_json(&output(ctx, &mut m, "zeta.json"), &values)?;
    Ok(Report::new(m, violations))
}
