mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gagliardo::analytic::{
    hardy_means, membership_scan, radial_slice, seminorm_profile, slice_bandwidth, trace_convergence,
    Classification, ProfileEntry, ProfileMethod, ProfileOptions,
};
use gagliardo::gallery::{expected_regime, list, make, ExpectedRegime};
use gagliardo::poincare::{kappa_exact_p2, kappa_search, SearchConfig};
use gagliardo::poisson::{dyadic_schedule, poisson_extend, Radius};
use gagliardo::seminorm::{gagliardo_quadrature_coeffs, gagliardo_spectral, KernelForm, QuadratureConfig, SeminormParams};
use gagliardo::stochastic::{criterion_profile_mc, exit_law_chi_square, value_mc, RngStream};
use gagliardo::verify::{run_verify, VerifyConfig};
use num_complex::Complex;
use serde::Serialize;

use input::{parse_complex, parse_grid, Grid, read_fourier, FunctionArgs, GalleryParams, FILE_FORMAT};
use output::{emit, Format};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("input: {0}")]
    Input(String),
    #[error("output: {0}")]
    Output(String),
    #[error(transparent)]
    Core(#[from] gagliardo::Error),
}

#[derive(Parser, Debug)]
#[command(name = "gagliardo", version, about = "Fractional Sobolev seminorms on the circle and the disc", after_help = FILE_FORMAT)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Kernel {
    Chord,
    PeriodizedSin,
    Wrapped,
}

impl From<Kernel> for KernelForm {
    fn from(k: Kernel) -> Self {
        match k {
            Kernel::Chord => KernelForm::Chord,
            Kernel::PeriodizedSin => KernelForm::PeriodizedSin,
            Kernel::Wrapped => KernelForm::Wrapped,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Seminorm of a slice u_r or of a Fourier coefficient file
    #[command(after_help = FILE_FORMAT)]
    Seminorm(SeminormArgs),
    /// r -> [u_r], [u_r - u*] or the Hardy means along r_j = 1 - 2^-j
    #[command(after_help = FILE_FORMAT)]
    Profile(ProfileArgs),
    /// Membership verdicts over a grid of s
    #[command(after_help = FILE_FORMAT)]
    Scan(ScanArgs),
    /// Lower bound on the fractional Poincare constant by local search
    Poincare(PoincareArgs),
    /// Monte Carlo through Brownian exit from the disc
    #[command(after_help = FILE_FORMAT)]
    Mc(McArgs),
    /// Gallery entries and their coefficients
    Gallery(GalleryArgs),
    /// Run the acceptance suite; exit 1 if any criterion fails
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
struct SeminormArgs {
    #[command(flatten)]
    function: FunctionArgs,
    /// Fourier coefficient file, used as is
    #[arg(long, conflicts_with_all = ["gallery", "taylor", "r"])]
    coeffs: Option<PathBuf>,
    /// Slice radius for --gallery/--taylor
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    s: f64,
    #[arg(long)]
    p: f64,
    /// Quadrature nodes per axis (a floor)
    #[arg(long, default_value_t = 2048)]
    nodes: usize,
    #[arg(long, value_enum, default_value_t = Kernel::Wrapped)]
    kernel: Kernel,
    /// Skip the Richardson step of the quadrature
    #[arg(long)]
    no_extrapolate: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Serialize)]
struct SeminormResult {
    bandwidth: usize,
    quadrature: f64,
    spectral: Option<f64>,
    gap_percent: Option<f64>,
}

fn cmd_seminorm(a: &SeminormArgs) -> Result<ExitCode, CliError> {
    let params = SeminormParams::new(a.s, a.p)?;
    let coeffs = match &a.coeffs {
        Some(path) => read_fourier(path)?,
        None => {
            let r = a.r.ok_or_else(|| CliError::Usage("--r is required with --gallery or --taylor".into()))?;
            let (u, _) = a.function.load()?;
            let radius = Radius::new(r)?;
            radial_slice(&u, radius, slice_bandwidth(&u, radius, 1e-12)?)?
        }
    };
    let quad = QuadratureConfig { extrapolate: !a.no_extrapolate, ..QuadratureConfig::new(a.nodes)?.with_kernel(a.kernel.into()) };
    let quadrature = gagliardo_quadrature_coeffs(&coeffs, &params, &quad);
    let spectral = if params.is_p2() { Some(gagliardo_spectral(&coeffs, a.s)?) } else { None };
    let gap_percent = spectral.map(|sp| if sp == 0.0 { quadrature.abs() * 100.0 } else { 100.0 * (quadrature - sp).abs() / sp });
    let result = SeminormResult { bandwidth: coeffs.bandwidth(), quadrature, spectral, gap_percent };
    emit(a, &result, &[&result], a.out.format, a.out.output.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ProfileKind {
    /// [u_r]
    Seminorm,
    /// [u_r - u*]
    Trace,
    /// Hardy means M_p(r)
    Hardy,
}

#[derive(Args, Debug, Clone, Serialize)]
struct ProfileArgs {
    #[command(flatten)]
    function: FunctionArgs,
    #[arg(long)]
    s: f64,
    #[arg(long)]
    p: f64,
    #[arg(long, value_enum, default_value_t = ProfileKind::Seminorm)]
    kind: ProfileKind,
    /// Schedule r_j = 1 - 2^-j for j = 1..=j_max
    #[arg(long, default_value_t = 12)]
    j_max: usize,
    /// Explicit radii instead of the dyadic schedule, `a:b:step` or a comma list
    #[arg(long, value_parser = parse_grid)]
    radii: Option<Grid>,
    /// spectral (p = 2 only) or quadrature; defaults by p
    #[arg(long)]
    method: Option<ProfileMethod>,
    #[arg(long, default_value_t = 16384)]
    max_nodes: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Serialize)]
struct ProfileResult {
    kind: ProfileKind,
    method: Option<ProfileMethod>,
    entries: Vec<ProfileEntry<f64>>,
}

fn cmd_profile(a: &ProfileArgs) -> Result<ExitCode, CliError> {
    let params = SeminormParams::new(a.s, a.p)?;
    let (u, _) = a.function.load()?;
    let schedule = a.radii.clone().map(|g| g.0).unwrap_or_else(|| dyadic_schedule(a.j_max));
    let opts = ProfileOptions { max_nodes: a.max_nodes, ..ProfileOptions::default() };
    let (method, entries) = match a.kind {
        ProfileKind::Seminorm => {
            let method = a.method.unwrap_or_else(|| ProfileMethod::default_for(&params));
            (Some(method), seminorm_profile(&u, &params, &schedule, method, &opts)?.entries)
        }
        ProfileKind::Trace => (None, trace_convergence(&u, &params, &schedule, &opts)?),
        ProfileKind::Hardy => (None, hardy_means(&u, a.p, &schedule, opts.truncation_tol)?),
    };
    let result = ProfileResult { kind: a.kind, method, entries };
    emit(a, &result, &result.entries, a.out.format, a.out.output.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Args, Debug, Clone, Serialize)]
struct ScanArgs {
    #[command(flatten)]
    function: FunctionArgs,
    #[arg(long)]
    p: f64,
    /// `a:b:step` (inclusive) or a comma list
    #[arg(long, value_parser = parse_grid)]
    s_grid: Grid,
    /// Relative tolerance of the Cauchy test
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Serialize)]
struct ScanRow {
    s: f64,
    classification: Classification,
    inconclusive: bool,
    sup_estimate: Option<f64>,
    growth_exponent: Option<f64>,
    mean_ratio: Option<f64>,
    ratio_spread: Option<f64>,
    expected: Option<String>,
}

#[derive(Serialize)]
struct ScanResult {
    p: f64,
    threshold: Option<f64>,
    rows: Vec<ScanRow>,
    verdicts: Vec<(f64, gagliardo::analytic::MembershipVerdict)>,
    expected: Vec<(f64, ExpectedRegime)>,
}

fn cmd_scan(a: &ScanArgs) -> Result<ExitCode, CliError> {
    let grid = &a.s_grid.0;
    let (u, spec) = a.function.load()?;
    let scan = membership_scan(&u, grid, a.p, a.tol, &ProfileOptions::default())?;
    let expected: Vec<(f64, ExpectedRegime)> =
        spec.iter().flat_map(|sp| scan.verdicts.iter().map(|(s, _)| (*s, expected_regime(sp, *s, a.p)))).collect();
    let rows = scan
        .verdicts
        .iter()
        .map(|(s, v)| ScanRow {
            s: *s,
            classification: v.classification,
            inconclusive: v.classification == Classification::Inconclusive,
            sup_estimate: v.sup_estimate,
            growth_exponent: v.growth_exponent,
            mean_ratio: v.diagnostics.mean_ratio,
            ratio_spread: v.diagnostics.ratio_spread,
            expected: expected.iter().find(|(t, _)| t == s).map(|(_, e)| format!("{:?}", e.class).to_lowercase()),
        })
        .collect();
    let result = ScanResult { p: a.p, threshold: scan.threshold, rows, verdicts: scan.verdicts, expected };
    emit(a, &result, &result.rows, a.out.format, a.out.output.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Args, Debug, Clone, Serialize)]
struct PoincareArgs {
    #[arg(long)]
    s: f64,
    #[arg(long)]
    p: f64,
    /// Largest mode searched
    #[arg(long, default_value_t = 16)]
    bandwidth: usize,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    /// Ratio evaluations per start
    #[arg(long, default_value_t = 3000)]
    max_evals: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 256)]
    nodes: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Serialize)]
struct PoincareResult {
    kappa_lower: f64,
    kappa_exact: Option<f64>,
    relative_gap: Option<f64>,
    seed_ratio: f64,
    starts: usize,
    evaluations: usize,
    certificate: Vec<(f64, f64)>,
    history: Vec<f64>,
}

#[derive(Serialize)]
struct PoincareRow {
    start: usize,
    best_ratio: f64,
}

fn cmd_poincare(a: &PoincareArgs) -> Result<ExitCode, CliError> {
    let params = SeminormParams::new(a.s, a.p)?;
    let cfg = SearchConfig {
        bandwidth: a.bandwidth,
        restarts: a.restarts,
        max_evals: a.max_evals,
        seed: a.seed,
        quad: QuadratureConfig::new(a.nodes)?,
    };
    let est = kappa_search(&params, &cfg, None)?;
    let kappa_exact = if params.is_p2() { Some(kappa_exact_p2(a.s)?) } else { None };
    let result = PoincareResult {
        kappa_lower: est.kappa_lower,
        kappa_exact,
        relative_gap: kappa_exact.map(|k| (k - est.kappa_lower) / k),
        seed_ratio: est.seed_ratio,
        starts: est.starts,
        evaluations: est.evaluations,
        certificate: est.certificate.as_slice().iter().map(|c| (c.re, c.im)).collect(),
        history: est.history.clone(),
    };
    let rows: Vec<PoincareRow> =
        est.history.iter().enumerate().map(|(start, &best_ratio)| PoincareRow { start, best_ratio }).collect();
    emit(a, &result, &rows, a.out.format, a.out.output.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum McMode {
    /// V(z) = E[phi(exit point)]
    Value,
    /// Chi-square of exit angles against the Poisson measure
    ExitLaw,
    /// Seminorms of the estimated slices V_r along r_j = 1 - 2^-j
    Profile,
}

#[derive(Args, Debug, Clone, Serialize)]
struct McArgs {
    #[arg(long, value_enum, default_value_t = McMode::Value)]
    mode: McMode,
    /// Boundary data from a gallery entry's trace
    #[arg(long, conflicts_with = "phi")]
    phi_gallery: Option<String>,
    /// Boundary data from a Fourier coefficient file
    #[arg(long)]
    phi: Option<PathBuf>,
    #[command(flatten)]
    params: GalleryParams,
    /// Trace bandwidth for --phi-gallery
    #[arg(long, default_value_t = 64)]
    phi_bandwidth: usize,
    /// Starting point, `re` or `re,im`
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0")]
    z: Complex<f64>,
    /// Samples (per grid point in profile mode)
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    /// Histogram bins for exit-law mode
    #[arg(long, default_value_t = 64)]
    bins: usize,
    #[arg(long, default_value_t = 0.5)]
    s: f64,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Points per circle in profile mode
    #[arg(long, default_value_t = 64)]
    grid_size: usize,
    #[arg(long, default_value_t = 4)]
    j_max: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Serialize)]
struct McValue {
    re: f64,
    im: f64,
    stderr: f64,
    n: usize,
    exact_re: f64,
    exact_im: f64,
    error_in_stderr: f64,
    seed: u64,
}

#[derive(Serialize)]
struct ExitLawRow {
    z_re: f64,
    z_im: f64,
    n: usize,
    bins: usize,
    statistic: f64,
    dof: usize,
    p_value: f64,
    max_bin_z: f64,
}

fn cmd_mc(a: &McArgs) -> Result<ExitCode, CliError> {
    let stream = RngStream::new(a.seed, a.stream);
    let phi = || -> Result<_, CliError> {
        match (&a.phi_gallery, &a.phi) {
            (Some(id), _) => {
                let phi = input::gallery_trace(&a.params.spec(id)?, &a.params, a.phi_bandwidth)?;
                Ok(phi.with_bandwidth(phi.effective_bandwidth(0.0)))
            }
            (None, Some(path)) => read_fourier(path),
            (None, None) => Err(CliError::Usage("give --phi-gallery or --phi".into())),
        }
    };
    match a.mode {
        McMode::Value => {
            let phi = phi()?;
            let est = value_mc(&phi, a.z, a.samples, &stream)?;
            let exact = poisson_extend(&phi, Radius::new(a.z.norm())?).eval(a.z.arg());
            let err = (est.mean - exact).norm();
            let result = McValue {
                re: est.mean.re,
                im: est.mean.im,
                stderr: est.stderr,
                n: est.n,
                exact_re: exact.re,
                exact_im: exact.im,
                error_in_stderr: if est.stderr > 0.0 { err / est.stderr } else { err },
                seed: a.seed,
            };
            emit(a, &result, &[&result], a.out.format, a.out.output.as_deref())?;
        }
        McMode::ExitLaw => {
            let report = exit_law_chi_square(a.z, a.samples, a.bins, &stream)?;
            let row = ExitLawRow {
                z_re: report.z.0,
                z_im: report.z.1,
                n: report.n,
                bins: report.bins,
                statistic: report.statistic,
                dof: report.dof,
                p_value: report.p_value,
                max_bin_z: report.max_bin_z,
            };
            emit(a, &report, &[row], a.out.format, a.out.output.as_deref())?;
        }
        McMode::Profile => {
            let params = SeminormParams::new(a.s, a.p)?;
            let profile = criterion_profile_mc(
                &phi()?,
                &params,
                &dyadic_schedule(a.j_max),
                a.grid_size,
                a.samples,
                &stream,
                &QuadratureConfig::default(),
            )?;
            emit(a, &profile, &profile.entries, a.out.format, a.out.output.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Args, Debug, Clone, Serialize)]
struct GalleryArgs {
    /// List entries with their parameter schemas
    #[arg(long, conflicts_with = "gallery", required_unless_present = "gallery")]
    list: bool,
    /// Entry to show
    #[arg(long)]
    gallery: Option<String>,
    #[command(flatten)]
    params: GalleryParams,
    /// How many leading coefficients to show
    #[arg(long, default_value_t = 16)]
    show: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Serialize)]
struct GalleryRow {
    id: &'static str,
    description: &'static str,
    params: String,
}

#[derive(Serialize)]
struct CoefficientRow {
    k: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct GalleryEntry {
    spec: gagliardo::gallery::GallerySpec,
    tail: gagliardo::analytic::TailPolicy,
    k_max: usize,
    coefficients: Vec<CoefficientRow>,
}

fn cmd_gallery(a: &GalleryArgs) -> Result<ExitCode, CliError> {
    match &a.gallery {
        None => {
            let entries = list();
            let rows: Vec<GalleryRow> = entries
                .iter()
                .map(|g| GalleryRow {
                    id: g.id,
                    description: g.description,
                    params: g
                        .params
                        .iter()
                        .map(|p| format!("{} ({}, {}, default {})", p.name, p.kind, p.range, p.default))
                        .collect::<Vec<_>>()
                        .join("; "),
                })
                .collect();
            emit(a, &entries, &rows, a.out.format, a.out.output.as_deref())?;
        }
        Some(id) => {
            let spec = a.params.spec(id)?;
            let u = make::<f64>(&spec, a.params.k_max)?;
            let coefficients: Vec<CoefficientRow> = u
                .coeffs()
                .iter()
                .take(a.show)
                .enumerate()
                .map(|(k, c)| CoefficientRow { k, re: c.re, im: c.im })
                .collect();
            let entry = GalleryEntry { spec, tail: u.tail(), k_max: u.k_max(), coefficients };
            emit(a, &entry, &entry.coefficients, a.out.format, a.out.output.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Args, Debug, Clone, Serialize)]
struct VerifyArgs {
    /// Only run criteria of these modules (seminorm, poisson, analytic, poincare, stochastic, cli)
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Scale eta_s on the spectral side of criterion 1 (fault injection)
    #[arg(long, default_value_t = 1.0)]
    eta_perturbation: f64,
    #[arg(long, default_value_t = VerifyConfig::default().seed)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Serialize)]
struct VerifyRow<'a> {
    id: u8,
    name: &'a str,
    module: &'a str,
    passed: bool,
    summary: &'a str,
}

fn cmd_verify(a: &VerifyArgs) -> Result<ExitCode, CliError> {
    let cfg = VerifyConfig { seed: a.seed, only: a.only.clone(), eta_perturbation: a.eta_perturbation };
    let outcome = run_verify(&cfg)?;
    for r in &outcome.report.results {
        let secs = outcome.timings.iter().find(|(id, _)| *id == r.id).map_or(0.0, |(_, d)| d.as_secs_f64());
        eprintln!(
            "criterion {:>2} {:<32} {} ({secs:.1}s): {}",
            r.id,
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.summary
        );
    }
    match a.out.format {
        Format::Json => match &a.out.output {
            Some(p) => std::fs::write(p, format!("{}\n", outcome.json))
                .map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?,
            None => println!("{}", outcome.json),
        },
        Format::Csv => {
            let rows: Vec<VerifyRow> = outcome
                .report
                .results
                .iter()
                .map(|r| VerifyRow { id: r.id, name: r.name, module: r.module, passed: r.passed, summary: &r.summary })
                .collect();
            emit(&cfg, &(), &rows, Format::Csv, a.out.output.as_deref())?;
        }
    }
    let failures = outcome.failures();
    if failures.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    let names: Vec<String> = failures.iter().map(|r| format!("{} {}", r.id, r.name)).collect();
    eprintln!("failed: {}", names.join(", "));
    Ok(ExitCode::from(1))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match &cli.command {
        Command::Seminorm(a) => cmd_seminorm(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Poincare(a) => cmd_poincare(a),
        Command::Mc(a) => cmd_mc(a),
        Command::Gallery(a) => cmd_gallery(a),
        Command::Verify(a) => cmd_verify(a),
    };
    run.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
