//! Command-line driver: `solve-resolvent`, `evolve`, `besov-norm`, `verify`
//! and `sweep`, all configured from one TOML file.
//!
//! Exit codes: 0 success, 1 audit or computation failure, 2 invalid
//! configuration or arguments, 3 inadmissible `λ`, 4 I/O failure,
//! 5 contour construction failure.

pub mod config;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use hsstokes::besov::{BesovParams, NormContext};
use hsstokes::grid_fourier::io::write_field;
use hsstokes::grid_fourier::{io::read_field, Field, Parity, Repr};
use hsstokes::resolvent_halfspace::{HalfError, HalfSpaceSolver};
use hsstokes::resolvent_wholespace::WholeError;
use hsstokes::semigroup::{apply_t_many, build_contour, h_norm, l1_from_states, log_time_grid, state_norms, ContourError, EvolutionState, Symmetry};
use hsstokes::spectral_core::SymbolError;
use hsstokes::verify::report::{num, Table};
use hsstokes::verify::suites::{run_suite, SuiteContext, SUITES};
use hsstokes::verify::sweep::{decay_sweep, sweep_report, SweepSpec};
use hsstokes::verify::{corpus, SuiteReport, VerifyError};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

pub use config::{Resolved, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("audit failed: {0}")]
    Audit(String),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("inadmissible lambda: {0}")]
    Inadmissible(String),
    #[error("i/o failure: {0}")]
    Io(String),
    #[error("contour construction failed: {0}")]
    Contour(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Audit(_) | CliError::Compute(_) => 1,
            CliError::Config(_) => 2,
            CliError::Inadmissible(_) => 3,
            CliError::Io(_) => 4,
            CliError::Contour(_) => 5,
        }
    }
}

impl From<HalfError> for CliError {
    fn from(e: HalfError) -> Self {
        match e {
            HalfError::Whole(WholeError::Inadmissible { .. } | WholeError::SeriesRegion { .. }) | HalfError::Symbol(SymbolError::ZeroLambda) | HalfError::Whole(WholeError::Symbol(SymbolError::ZeroLambda)) => CliError::Inadmissible(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<ContourError> for CliError {
    fn from(e: ContourError) -> Self {
        match e {
            ContourError::Solve(h) => h.into(),
            ContourError::Invalid(_) | ContourError::ShiftTooSmall { .. } | ContourError::Time { .. } => CliError::Contour(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Half(h) => h.into(),
            VerifyError::Contour(c) => c.into(),
            other => CliError::Compute(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hsstokes", version, about = "Half-space compressible Stokes resolvent and semigroup solver")]
pub struct Cli {
    /// TOML configuration; defaults apply to absent keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, overriding `out_dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for both data and audit samples.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker thread cap.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the resolvent problem at one λ.
    SolveResolvent {
        /// `RE,IM`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Built-in data: `zero` or `gauss-1`.
        #[arg(long, default_value = "gauss-1")]
        recipe: String,
        #[arg(long, requires = "input_g")]
        input_f: Option<PathBuf>,
        #[arg(long, requires = "input_f")]
        input_g: Option<PathBuf>,
    },
    /// Evolve an initial state and report the L1 maximal-regularity integral.
    Evolve {
        /// Comma-separated positive ascending times; may be empty.
        #[arg(long, default_value = "")]
        times: String,
        #[arg(long, default_value = "gauss-1")]
        recipe: String,
        #[arg(long, requires = "input_u")]
        input_rho: Option<PathBuf>,
        #[arg(long, requires = "input_rho")]
        input_u: Option<PathBuf>,
    },
    /// Half-space Besov norm of a field.
    BesovNorm {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Used without `--input`: the velocity (or density) of this recipe.
        #[arg(long, default_value = "gauss-1")]
        recipe: String,
        /// `velocity`, `even` or `odd`.
        #[arg(long, default_value = "velocity")]
        parity: String,
    },
    /// Run audit suites: symbols, residue, wholespace, halfspace, semigroup or all.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Resolvent decay sweeps alone.
    Sweep,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("hsstokes: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seeds.verify = seed;
        cfg.seeds.data = seed;
    }
    let resolved = cfg.resolve()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(&cli.command, &resolved))
}

fn dispatch(cmd: &Command, r: &Resolved) -> Result<(), CliError> {
    let out = &r.config.out_dir;
    std::fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    write_text(&out.join("config.toml"), &r.config.to_toml())?;
    match cmd {
        Command::SolveResolvent { lambda, recipe, input_f, input_g } => {
            let lambda = parse_lambda(lambda)?;
            let (f, g) = match (input_f, input_g) {
                (Some(pf), Some(pg)) => (read_input(pf, r)?, read_input(pg, r)?),
                _ => recipe_data(recipe, r)?,
            };
            cmd_solve_resolvent(r, lambda, &f, &g)
        }
        Command::Evolve { times, recipe, input_rho, input_u } => {
            let times = parse_times(times)?;
            let (rho, u) = match (input_rho, input_u) {
                (Some(pr), Some(pu)) => (read_input(pr, r)?, read_input(pu, r)?),
                _ => recipe_data(recipe, r)?,
            };
            cmd_evolve(r, &times, EvolutionState::new(rho, u))
        }
        Command::BesovNorm { input, recipe, parity } => {
            let parity = match parity.as_str() {
                "velocity" => Parity::velocity(r.grid.dim),
                "even" => vec![Parity::Even],
                "odd" => vec![Parity::Odd],
                other => return Err(CliError::Config(format!("unknown parity {other}; expected velocity, even or odd"))),
            };
            let f = match input {
                Some(p) => read_input(p, r)?,
                None => {
                    let (rho, u) = recipe_data(recipe, r)?;
                    if parity.len() == 1 {
                        rho
                    } else {
                        u
                    }
                }
            };
            cmd_besov_norm(r, &f, &parity)
        }
        Command::Verify { suite } => cmd_verify(r, suite),
        Command::Sweep => cmd_sweep(r),
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| io_err(path, e))?;
    write_text(path, &text)
}

fn save_field(path: &Path, f: &Field) -> Result<(), CliError> {
    write_field(path, f).map_err(|e| io_err(path, e))
}

fn read_input(path: &Path, r: &Resolved) -> Result<Field, CliError> {
    read_field(path, Some(&r.grid)).map_err(|e| match e {
        hsstokes::grid_fourier::io::FieldIoError::Io { .. } => CliError::Io(e.to_string()),
        other => CliError::Config(format!("{}: {other}", path.display())),
    })
}

pub fn parse_lambda(s: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Config(format!("--lambda expects RE,IM, got {s:?}"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

/// Positive, strictly ascending times; an empty string gives an empty list.
pub fn parse_times(s: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let t: f64 = part.parse().map_err(|_| CliError::Config(format!("time {part:?} is not a number")))?;
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Config(format!("time {t} must be positive")));
        }
        if let Some(&last) = out.last() {
            if t == last {
                return Err(CliError::Config(format!("duplicate time {t}")));
            }
            if t < last {
                return Err(CliError::Config(format!("times must ascend: {t} after {last}")));
            }
        }
        out.push(t);
    }
    Ok(out)
}

/// `(f, g)` of a named recipe.
pub fn recipe_data(name: &str, r: &Resolved) -> Result<(Field, Field), CliError> {
    match name {
        "zero" => Ok((Field::zeros(&r.grid, 1, Repr::Physical), Field::zeros(&r.grid, r.grid.dim, Repr::Physical))),
        "gauss-1" => Ok(corpus::data_corpus(&r.grid, 1, r.config.seeds.data, &corpus::BumpSpec::default()).remove(0)),
        other => Err(CliError::Config(format!("unknown recipe {other}; expected zero or gauss-1"))),
    }
}

fn norm_context(r: &Resolved) -> Result<NormContext, CliError> {
    NormContext::new(&r.grid).map_err(|e| CliError::Config(format!("norm box: {e}")))
}

#[derive(Debug, Serialize)]
struct SolveSummary {
    lambda: [f64; 2],
    eq1: f64,
    eq2: f64,
    boundary: f64,
}

fn cmd_solve_resolvent(r: &Resolved, lambda: Complex64, f: &Field, g: &Field) -> Result<(), CliError> {
    let solver = HalfSpaceSolver::new(r.config.params, r.sector, r.grid.clone())?;
    let sol = solver.solve_resolvent(lambda, f, g)?;
    let d = sol.diagnostics.expect("solve_resolvent reports diagnostics");
    let out = &r.config.out_dir;
    save_field(&out.join("rho.json"), &sol.rho)?;
    save_field(&out.join("u.json"), &sol.u)?;
    write_json(&out.join("residuals.json"), &SolveSummary { lambda: [lambda.re, lambda.im], eq1: d.eq1, eq2: d.eq2, boundary: d.boundary })?;
    let ctx = norm_context(r)?;
    let bp = r.config.besov;
    let norms = state_norms(&EvolutionState::new(sol.rho.clone(), sol.u.clone()), &ctx, &bp).map_err(CliError::from)?;
    let mut t = Table::new("norms", &["quantity", "value"]);
    t.push(vec!["rho_B^{s+1} + u_B^{s+2}".into(), num(norms.d_norm)]);
    t.push(vec!["rho_B^{s+1} + u_B^s".into(), num(norms.h_norm)]);
    t.push(vec!["lambda_times_h_norm".into(), num(lambda.norm() * norms.h_norm)]);
    write_text(&out.join("norms.csv"), &t.to_csv())?;
    println!("eq1 {:.3e}  eq2 {:.3e}  boundary {:.3e}", d.eq1, d.eq2, d.boundary);
    Ok(())
}

#[derive(Debug, Serialize)]
struct L1Summary {
    t_min: f64,
    t_end: f64,
    gamma_shift: f64,
    integral: f64,
    initial_norm: f64,
    ratio: f64,
}

fn cmd_evolve(r: &Resolved, times: &[f64], state0: EvolutionState) -> Result<(), CliError> {
    let solver = HalfSpaceSolver::new(r.config.params, r.sector, r.grid.clone())?;
    if !solver.grid.as_ref().eq(state0.rho.grid()) || state0.rho.ncomp() != 1 || state0.u.ncomp() != r.grid.dim {
        return Err(CliError::Config("initial state must hold one density and one velocity field on the configured grid".into()));
    }
    let sizes = &r.config.sizes;
    let l1_times = log_time_grid(sizes.l1_t_min, sizes.l1_t_end, sizes.l1_per_decade);
    let mut all: Vec<f64> = times.iter().chain(&l1_times).copied().collect();
    all.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    all.dedup();
    let mut spec = r.contour_spec();
    spec.t_min = spec.t_min.min(all[0]);
    let contour = build_contour(&spec, r.sector.nu0, &r.config.params)?;
    let states = apply_t_many(&all, &state0, &contour, &solver, Symmetry::FoldConjugate)?;
    let pick = |t: f64| states[all.iter().position(|&x| x == t).expect("member")].clone();
    let ctx = norm_context(r)?;
    let bp: BesovParams = r.config.besov;
    let out = &r.config.out_dir;

    if !times.is_empty() {
        let n0 = state0.l2_norm();
        let mut traj = Table::new("trajectory", &["t", "l2_norm", "relative_change", "h_norm", "d_norm"]);
        for (i, &t) in times.iter().enumerate() {
            let s = pick(t);
            let n = state_norms(&s, &ctx, &bp)?;
            let change = if n0 > 0.0 { s.sub(&state0).map_err(|e| CliError::Compute(e.to_string()))?.l2_norm() / n0 } else { 0.0 };
            traj.push(vec![num(t), num(s.l2_norm()), num(change), num(n.h_norm), num(n.d_norm)]);
            save_field(&out.join(format!("state_{i:03}_rho.json")), &s.rho)?;
            save_field(&out.join(format!("state_{i:03}_u.json")), &s.u)?;
        }
        write_text(&out.join("trajectory.csv"), &traj.to_csv())?;
    }

    let initial = h_norm(&state0, &ctx, &bp)?;
    let l1_states: Vec<EvolutionState> = l1_times.iter().map(|&t| pick(t)).collect();
    let rep = l1_from_states(&l1_states, contour.gamma_shift, initial, &ctx, &bp)?;
    let mut integrand = Table::new("l1_integrand", &["t", "weighted_d_norm"]);
    for (t, v) in rep.times.iter().zip(&rep.integrand) {
        integrand.push(vec![num(*t), num(*v)]);
    }
    write_text(&out.join("l1_integrand.csv"), &integrand.to_csv())?;
    let summary = L1Summary { t_min: rep.t_min, t_end: rep.t_end, gamma_shift: contour.gamma_shift, integral: rep.integral, initial_norm: rep.initial_norm, ratio: rep.ratio };
    write_json(&out.join("l1_summary.json"), &summary)?;
    println!("L1 integral {:.6e} over [{:.1e}, {:.1e}], ratio to initial norm {:.4e}", rep.integral, rep.t_min, rep.t_end, rep.ratio);
    Ok(())
}

#[derive(Debug, Serialize)]
struct NormSummary {
    s: f64,
    q: f64,
    r: f64,
    value: f64,
    equivalent: bool,
}

fn cmd_besov_norm(r: &Resolved, f: &Field, parity: &[Parity]) -> Result<(), CliError> {
    if f.ncomp() != parity.len() {
        return Err(CliError::Config(format!("field has {} components but the parity has {}", f.ncomp(), parity.len())));
    }
    let bp = r.config.besov;
    let n = norm_context(r)?.besov_norm_halfspace(f, &bp, parity).map_err(|e| CliError::Compute(e.to_string()))?;
    write_json(&r.config.out_dir.join("besov_norm.json"), &NormSummary { s: bp.s, q: bp.q, r: bp.r, value: n.value, equivalent: n.equivalent })?;
    println!("{:.12e}", n.value);
    Ok(())
}

fn suite_context(r: &Resolved) -> Result<SuiteContext, CliError> {
    let c = &r.config;
    Ok(SuiteContext::new(c.params, r.sector, r.grid.clone(), r.norm_configs(), r.contour_spec(), c.sizes.clone(), c.seeds.verify)?)
}

/// Runs the named suites, writing every report; fails after all have run.
pub fn run_suites(r: &Resolved, names: &[&str]) -> Result<Vec<SuiteReport>, CliError> {
    let cx = suite_context(r)?;
    let out = &r.config.out_dir;
    let mut reports = Vec::new();
    for name in names {
        let rep = run_suite(name, &cx)?;
        rep.write(out).map_err(|e| io_err(out, e))?;
        print!("{}", rep.summary());
        reports.push(rep);
    }
    Ok(reports)
}

fn finish(out: &Path, reports: &[SuiteReport]) -> Result<(), CliError> {
    let mut text = String::new();
    for rep in reports {
        let _ = writeln!(text, "{} {}", rep.suite, if rep.pass() { "PASS" } else { "FAIL" });
    }
    write_text(&out.join("summary.txt"), &text)?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass()).map(|r| r.suite.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Audit(format!("failing suites: {}", failed.join(", "))))
    }
}

fn cmd_verify(r: &Resolved, suite: &str) -> Result<(), CliError> {
    let names: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        other => return Err(CliError::Config(format!("unknown suite {other}; expected one of {} or all", SUITES.join(", ")))),
    };
    let reports = run_suites(r, &names)?;
    finish(&r.config.out_dir, &reports)
}

fn cmd_sweep(r: &Resolved) -> Result<(), CliError> {
    let cx = suite_context(r)?;
    let s = &r.config.sizes;
    let spec = SweepSpec { points: s.sweep_points, decades: s.sweep_decades, ..SweepSpec::standard(r.sector.epsilon, r.sector.nu0) };
    let data = corpus::data_corpus(&r.grid, s.sweep_corpus, r.config.seeds.data, &corpus::BumpSpec::default());
    let sweeps = decay_sweep(&cx.solver, &cx.norms, &data, &spec, &cx.configs)?;
    let rep = sweep_report("sweep", &sweeps);
    let out = &r.config.out_dir;
    rep.write(out).map_err(|e| io_err(out, e))?;
    print!("{}", rep.summary());
    finish(out, &[rep])
}
