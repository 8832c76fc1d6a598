//! Suite drivers: each returns a [`SuiteReport`] whose checks carry the
//! acceptance thresholds.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::RngExt;
use serde::{Deserialize, Serialize};

use crate::besov::{bessel_lift, build_partition, lp_blocks, phi_profile, BesovParams, NormContext};
use crate::grid_fourier::{DiffOp, Field, HalfGrid, Parity, Repr, WholeField};
use crate::resolvent_halfspace::HalfSpaceSolver;
use crate::resolvent_wholespace::{apply_s0, apply_s0_parts, lame_operator};
use crate::semigroup::{apply_t_many, apply_t_parts_many, build_contour, generator, h_norm, l1_from_states, log_time_grid, ContourSpec, EvolutionState, Symmetry};
use crate::spectral_core::{in_sector, FluidParams, SectorSpec};
use crate::verify::audit::{symbol_suite, SymbolSuiteSpec};
use crate::verify::corpus::{self, BumpSpec};
use crate::verify::report::{num, Check, SuiteReport, Table};
use crate::verify::residual::residual_resolvent;
use crate::verify::residue::residue_suite;
use crate::verify::sweep::{decay_sweep, fit_exponent, sweep_report, NormConfig, SweepSpec};
use crate::verify::VerifyError;

/// Suite names accepted by [`run_suite`].
pub const SUITES: [&str; 5] = ["symbols", "residue", "wholespace", "halfspace", "semigroup"];

/// Sample sizes and data layout of the suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteSizes {
    pub symbol_samples: usize,
    pub residue_points: usize,
    pub whole_lambdas: usize,
    pub lp_points: usize,
    pub half_data: usize,
    pub half_lambdas: usize,
    pub sweep_corpus: usize,
    pub sweep_points: usize,
    pub sweep_decades: f64,
    pub semigroup_corpus: usize,
    pub l1_t_min: f64,
    pub l1_t_end: f64,
    pub l1_per_decade: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        Self {
            symbol_samples: 10_000,
            residue_points: 20,
            whole_lambdas: 5,
            lp_points: 500,
            half_data: 5,
            half_lambdas: 5,
            sweep_corpus: 2,
            sweep_points: 16,
            sweep_decades: 3.0,
            semigroup_corpus: 10,
            l1_t_min: 1e-3,
            l1_t_end: 10.0,
            l1_per_decade: 12,
        }
    }
}

/// Everything a suite needs, built once.
pub struct SuiteContext {
    pub params: FluidParams,
    pub sector: SectorSpec,
    pub grid: Arc<HalfGrid>,
    pub solver: HalfSpaceSolver,
    pub norms: NormContext,
    pub configs: Vec<NormConfig>,
    pub contour: ContourSpec,
    pub sizes: SuiteSizes,
    pub bumps: BumpSpec,
    pub seed: u64,
}

impl SuiteContext {
    pub fn new(params: FluidParams, sector: SectorSpec, grid: Arc<HalfGrid>, configs: Vec<NormConfig>, contour: ContourSpec, sizes: SuiteSizes, seed: u64) -> Result<Self, VerifyError> {
        if configs.is_empty() {
            return Err(VerifyError::Oracle("at least one norm configuration is required".into()));
        }
        let solver = HalfSpaceSolver::new(params, sector, grid.clone())?;
        let norms = NormContext::new(&grid)?;
        Ok(Self { params, sector, grid, solver, norms, configs, contour, sizes, bumps: BumpSpec::default(), seed })
    }

    /// Seed of a named sub-stream, so suites stay reproducible when run alone.
    fn seed_for(&self, suite: &str) -> u64 {
        let tag = suite.bytes().fold(0u64, |h, b| h.wrapping_mul(131).wrapping_add(b as u64));
        self.seed ^ tag
    }

    fn random_lambdas(&self, count: usize, seed: u64, decades: f64) -> Vec<Complex64> {
        let mut rng = corpus::rng(seed);
        let phi = PI - self.sector.epsilon;
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let r = self.sector.nu0 * 10f64.powf(rng.random_range(0.0..decades));
            let l = Complex64::from_polar(r, rng.random_range(-phi..phi));
            if in_sector(l, &self.sector, &self.params) {
                out.push(l);
            }
        }
        out
    }
}

pub fn run_suite(name: &str, cx: &SuiteContext) -> Result<SuiteReport, VerifyError> {
    match name {
        "symbols" => symbol_suite(&cx.params, &cx.sector, &SymbolSuiteSpec { samples: cx.sizes.symbol_samples, xi_max: cx.grid.tangential.nyquist(), seed: cx.seed_for("symbols") }),
        "residue" => residue_suite(&cx.params, &cx.sector, cx.sizes.residue_points, cx.seed_for("residue")),
        "wholespace" => wholespace_suite(cx),
        "halfspace" => halfspace_suite(cx),
        "semigroup" => semigroup_suite(cx),
        other => Err(VerifyError::Oracle(format!("unknown suite {other}"))),
    }
}

/// Forward–backward oracle of `S⁰`, Littlewood–Paley identities and the `T⁰₂` decay.
pub fn wholespace_suite(cx: &SuiteContext) -> Result<SuiteReport, VerifyError> {
    let mut report = SuiteReport::new("wholespace");
    let axis = cx.solver.solve_box();
    let tang = cx.grid.tangential;
    let dim = cx.grid.dim;
    let mut rng = corpus::rng(cx.seed_for("wholespace"));
    let bump = |c: [f64; 3], w: f64, x: &[f64]| (-x.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / (w * w)).exp();

    let mut table = Table::new("forward_backward", &["lambda_re", "lambda_im", "rel_error"]);
    let mut worst = 0.0_f64;
    for lambda in cx.random_lambdas(cx.sizes.whole_lambdas, cx.seed_for("wholespace-lambda"), 3.0) {
        let centers: Vec<[f64; 3]> = (0..dim).map(|_| [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]).collect();
        let h = tang.spacing();
        let lo = (4.0 * h).max(0.5);
        let width = rng.random_range(lo..(1.25 * lo).max(1.0));
        let u = WholeField::from_fn(tang, axis, dim, |x, out| {
            for (c, o) in out.iter_mut().enumerate() {
                *o = Complex64::new(bump(centers[c], width, x), 0.0);
            }
        });
        let g = lame_operator(lambda, &u, &cx.params)?;
        let back = apply_s0(lambda, &g, &cx.params, &cx.sector)?;
        let err = back.sub(&u)?.l2_norm() / u.l2_norm();
        worst = worst.max(err);
        table.push(vec![num(lambda.re), num(lambda.im), num(err)]);
    }
    report.tables.push(table);
    report.check(Check::at_most("S0 forward-backward relative error", worst, 1e-10));

    // Littlewood–Paley identities on the norm box
    let lattice = WholeField::zeros(tang, cx.norms.transfer.axis, 1, Repr::Spectral);
    let part = build_partition(lattice.nyquist())?;
    let mut pou_full = 0.0_f64;
    let mut pou_trunc = 0.0_f64;
    for _ in 0..cx.sizes.lp_points {
        let k = rng.random_range(1..lattice.len());
        let xi = lattice.frequency(k);
        let r = xi[..dim].iter().map(|v| v * v).sum::<f64>().sqrt();
        let full: f64 = (-80..=80).map(|j| phi_profile(r / 2f64.powi(j))).sum();
        pou_full = pou_full.max((full - 1.0).abs());
        let trunc: f64 = (0..part.n_blocks()).map(|b| part.block(b, r)).sum();
        pou_trunc = pou_trunc.max((trunc - 1.0).abs());
    }
    report.check(Check::at_most("partition of unity over Z", pou_full, 1e-12));
    report.check(Check::at_most("partition of unity, truncated blocks", pou_trunc, 1e-12));
    let data: Vec<Complex64> = (0..lattice.len()).map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0)).collect();
    let f = WholeField::from_data(tang, cx.norms.transfer.axis, 1, Repr::Physical, data)?;
    let blocks = lp_blocks(&f, &part);
    let mut sum = blocks[0].clone();
    for b in &blocks[1..] {
        sum = sum.axpy(Complex64::new(1.0, 0.0), b)?;
    }
    report.check(Check::at_most("block reconstruction", sum.sub(&f)?.max_abs() / f.max_abs(), 1e-12));
    let lifted = bessel_lift(&bessel_lift(&f, 0.7), -0.7);
    report.check(Check::at_most("Bessel lift inverse", lifted.sub(&f)?.max_abs() / f.max_abs(), 1e-12));

    // whole-space T⁰₂ decay along the positive axis
    let g = WholeField::from_fn(tang, axis, dim, |x, out| {
        for (c, o) in out.iter_mut().enumerate() {
            *o = Complex64::new(bump([0.3 * c as f64, -0.2, 0.1], 0.7, x), 0.0);
        }
    });
    let radii: Vec<f64> = (0..cx.sizes.sweep_points).map(|i| cx.sector.nu0 * (1.0 + 1e-3) * 10f64.powf(cx.sizes.sweep_decades * i as f64 / (cx.sizes.sweep_points - 1) as f64)).collect();
    let mut ratios = Vec::with_capacity(radii.len());
    for &r in &radii {
        let (_, t02) = apply_s0_parts(Complex64::new(r, 0.0), &g, &cx.params, &cx.sector)?;
        ratios.push(t02.differentiate(DiffOp::Hessian)?.l2_norm() / g.l2_norm());
    }
    report.check(Check::at_most("T02 Hessian decay exponent", fit_exponent(&radii, &ratios), -0.9));
    Ok(report)
}

/// Solver contract, split recomposition, corrector cross-check and the decay sweeps.
pub fn halfspace_suite(cx: &SuiteContext) -> Result<SuiteReport, VerifyError> {
    let data = corpus::data_corpus(&cx.grid, cx.sizes.half_data, cx.seed_for("halfspace"), &cx.bumps);
    let lambdas = cx.random_lambdas(cx.sizes.half_lambdas, cx.seed_for("halfspace-lambda"), 3.0);
    let mut table = Table::new("residuals", &["datum", "lambda_re", "lambda_im", "eq1", "eq2", "boundary", "split_mismatch", "corrector_mismatch"]);
    let (mut e1, mut e2, mut eb, mut split, mut corr) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for (i, (f, g)) in data.iter().enumerate() {
        for &lambda in &lambdas {
            let (rho, u) = cx.solver.solve(lambda, f, g)?;
            let r = residual_resolvent(lambda, f, g, &rho, &u, &cx.params)?;
            let s = cx.solver.split_operators(lambda, f, g)?;
            let mismatch = s.s1.add(&s.s2)?.sub(&u)?.l2_norm() / u.l2_norm() + s.r.sub(&rho)?.l2_norm() / rho.l2_norm();
            let reduced = cx.solver.reduced_data(lambda, f, g)?;
            let coeffs = cx.solver.boundary_coefficients(lambda, &reduced)?;
            let w = cx.solver.apply_corrector_w(&coeffs)?;
            let (w1, w2) = cx.solver.corrector_parts(&coeffs)?;
            let cm = w1.add(&w2)?.sub(&w)?.max_abs() / w.max_abs().max(f64::MIN_POSITIVE);
            e1 = e1.max(r.eq1);
            e2 = e2.max(r.eq2);
            eb = eb.max(r.boundary);
            split = split.max(mismatch);
            corr = corr.max(cm);
            table.push(vec![i.to_string(), num(lambda.re), num(lambda.im), num(r.eq1), num(r.eq2), num(r.boundary), num(mismatch), num(cm)]);
        }
    }
    // sensitivity: scaling u by 1.01 leaves a residual of about one percent
    let (f, g) = &data[0];
    let (rho, u) = cx.solver.solve(lambdas[0], f, g)?;
    let perturbed = residual_resolvent(lambdas[0], f, g, &rho, &u.scaled(Complex64::new(1.01, 0.0)), &cx.params)?;

    let spec = SweepSpec { points: cx.sizes.sweep_points, decades: cx.sizes.sweep_decades, ..SweepSpec::standard(cx.sector.epsilon, cx.sector.nu0) };
    let sweep_data = corpus::data_corpus(&cx.grid, cx.sizes.sweep_corpus, cx.seed_for("sweep"), &cx.bumps);
    let sweeps = decay_sweep(&cx.solver, &cx.norms, &sweep_data, &spec, &cx.configs)?;
    let mut report = sweep_report("halfspace", &sweeps);
    let mut checks = vec![
        Check::at_most("eq1 residual", e1, 1e-12),
        Check::at_most("eq2 residual", e2, 1e-6),
        Check::at_most("boundary trace", eb, 1e-8),
        Check::at_most("S1 + S2 and R against the direct solve", split, 1e-10),
        Check::at_most("corrector blocks against the compact corrector", corr, 1e-10),
        Check::at_least("eq2 under a 1% perturbation", perturbed.eq2, 1e-3),
    ];
    checks.append(&mut report.checks);
    report.checks = checks;
    report.tables.insert(0, table);
    Ok(report)
}

fn unit_state(f: &Field, g: &Field, cx: &SuiteContext) -> Result<EvolutionState, VerifyError> {
    let s = EvolutionState::new(f.clone(), g.clone());
    let n = h_norm(&s, &cx.norms, &cx.configs[0].bp)?;
    Ok(s.scaled(1.0 / n))
}

/// `‖u‖_{B^s} + ‖∇²u‖_{B^s}`.
fn u_norm_s2(u: &Field, cx: &SuiteContext, bp: &BesovParams) -> Result<f64, VerifyError> {
    let vp = Parity::velocity(cx.grid.dim);
    Ok(cx.norms.block_norms(u, &vp, bp.q)?.besov(bp.s, bp.r) + cx.norms.hessian_block_norms(u, &vp, bp.q)?.besov(bp.s, bp.r))
}

/// Strong continuity, semigroup law, generator, realness, part slopes and the `L₁` integral.
pub fn semigroup_suite(cx: &SuiteContext) -> Result<SuiteReport, VerifyError> {
    let sizes = &cx.sizes;
    let lambda0 = cx.sector.nu0;
    let spec = ContourSpec { t_min: cx.contour.t_min.min(0.5 * sizes.l1_t_min).min(1e-4), ..cx.contour };
    let contour = build_contour(&spec, lambda0, &cx.params)?;
    let shift = contour.gamma_shift;
    let corpus_data = corpus::data_corpus(&cx.grid, sizes.semigroup_corpus.max(1), cx.seed_for("semigroup"), &cx.bumps);
    let states: Vec<EvolutionState> = corpus_data.iter().map(|(f, g)| unit_state(f, g, cx)).collect::<Result<_, _>>()?;
    let s0 = &states[0];
    let n0 = s0.l2_norm();
    let mut report = SuiteReport::new("semigroup");

    let slope_times = log_time_grid(1e-3, 1e-1, 4);
    let mut times = vec![1e-4, 1e-3, 2e-3, 4e-3, 0.05, 0.1, 0.15, 0.2, 0.3, 1.0, 1.5, 2.0, 3.0];
    times.extend(slope_times.iter().copied());
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    times.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    let at = |t: f64| times.iter().position(|&x| (x - t).abs() <= 1e-12 * t).expect("requested time");

    let parts = apply_t_parts_many(&times, s0, &contour, &cx.solver, Symmetry::BothRays)?;
    let full: Vec<EvolutionState> = parts.iter().map(|p| p.recombined()).collect::<Result<_, _>>()?;

    let d4 = full[at(1e-4)].sub(s0)?.l2_norm() / n0;
    let d3 = full[at(1e-3)].sub(s0)?.l2_norm() / n0;
    report.check(Check::at_most("distance to identity at t=1e-4", d4, 1e-2));
    report.check(Check::flag("distance decreases from t=1e-3 to t=1e-4", d4 / d3, d4 < d3));

    let realness = full.iter().map(|s| s.imag_l2_norm() / s.l2_norm()).fold(0.0, f64::max);
    report.check(Check::at_most("imaginary residue", realness, 1e-10));

    let direct = apply_t_many(&[0.1, 1.0], s0, &contour, &cx.solver, Symmetry::FoldConjugate)?;
    let recomb = direct.iter().map(|d| full[at(d.t)].real_part().sub(d).map(|x| x.l2_norm() / d.l2_norm())).collect::<Result<Vec<_>, _>>()?;
    report.check(Check::at_most("T3, T1 + T2 against the direct evaluation", recomb.iter().cloned().fold(0.0, f64::max), 1e-10));

    let refined = apply_t_many(&[1.0], s0, &contour.refined(), &cx.solver, Symmetry::FoldConjugate)?;
    report.check(Check::at_most("node doubling at t=1", refined[0].sub(&direct[1])?.l2_norm() / direct[1].l2_norm(), 1e-6));

    // semigroup law: T(t)T(s)s₀ against T(t+s)s₀
    let after_02 = apply_t_many(&[0.1], &full[at(0.2)].real_part(), &contour, &cx.solver, Symmetry::FoldConjugate)?;
    let after_01 = apply_t_many(&[0.05, 0.2], &full[at(0.1)].real_part(), &contour, &cx.solver, Symmetry::FoldConjugate)?;
    let mut law = Table::new("semigroup_law", &["t", "s", "rel_error"]);
    let mut law_max = 0.0_f64;
    for (t, s, composed) in [(0.1, 0.2, &after_02[0]), (0.2, 0.1, &after_01[1]), (0.05, 0.1, &after_01[0])] {
        let e = composed.sub(&full[at(t + s)].real_part())?.l2_norm() / n0;
        law_max = law_max.max(e);
        law.push(vec![num(t), num(s), num(e)]);
    }
    report.tables.push(law);
    report.check(Check::at_most("semigroup law", law_max, 1e-5));

    // generator: (s₀ − T(h)s₀)/h against 𝓐s₀
    let a = generator(s0, &cx.params)?;
    let hs = [4e-3, 2e-3, 1e-3];
    let errs: Vec<f64> = hs.iter().map(|&h| s0.sub(&full[at(h)].real_part()).map(|d| d.scaled(1.0 / h).sub(&a).map(|e| e.l2_norm() / a.l2_norm()))).collect::<Result<Result<_, _>, _>>()??;
    let order = fit_exponent(&hs, &errs);
    report.check(Check::at_most("generator consistency order deviation from 1", (order - 1.0).abs(), 0.1));

    // sectorial decay beyond t = 1
    let decay: Vec<f64> = [1.0, 1.5, 2.0, 3.0].iter().map(|&t| (-shift * t).exp() * full[at(t)].l2_norm()).collect();
    let monotone = decay.windows(2).all(|w| w[1] <= w[0]);
    report.check(Check::flag("exp(-gamma t)|T(t)s0| non-increasing for t >= 1", decay[decay.len() - 1] / decay[0], monotone));

    let mut traj = Table::new("trajectory", &["t", "distance_to_initial", "l2_norm", "imag_residue"]);
    for s in &full {
        traj.push(vec![num(s.t), num(s.sub(s0)?.l2_norm() / n0), num(s.l2_norm() / n0), num(s.imag_l2_norm() / s.l2_norm())]);
    }
    report.tables.push(traj);

    // small-t slopes of the parts
    let mut slopes = Table::new("part_slopes", &["config", "part", "slope", "budget", "prefactor"]);
    for cfg in &cx.configs {
        let bp = &cfg.bp;
        let budget = -1.0 + 0.5 * cfg.sigma - 0.1;
        let u0_norm = cx.norms.block_norms(&s0.u, &Parity::velocity(cx.grid.dim), bp.q)?.besov(bp.s + cfg.sigma, bp.r);
        let mut t1 = Vec::new();
        let mut t2 = Vec::new();
        let mut t3 = Vec::new();
        for &t in &slope_times {
            let p = &parts[at(t)];
            t1.push(u_norm_s2(&p.t1_u, cx, bp)?);
            t2.push(u_norm_s2(&p.t2_u, cx, bp)?);
            t3.push(cx.norms.block_norms(&p.t3_rho, &[Parity::Even], bp.q)?.besov(bp.s + 1.0, bp.r));
        }
        let (k1, k2, k3) = (fit_exponent(&slope_times, &t1), fit_exponent(&slope_times, &t2), fit_exponent(&slope_times, &t3));
        let c1 = slope_times.iter().zip(&t1).map(|(t, v)| v / (u0_norm * t.powf(-1.0 + 0.5 * cfg.sigma))).fold(0.0, f64::max);
        let prefactor = lambda0.powf(-0.5 * cfg.sigma);
        slopes.push(vec![cfg.label(), "T1".into(), num(k1), num(budget), num(c1)]);
        slopes.push(vec![cfg.label(), "T2".into(), num(k2), num(budget), num(prefactor)]);
        slopes.push(vec![cfg.label(), "T3".into(), num(k3), num(f64::NAN), num(f64::NAN)]);
        report.check(Check::at_least(format!("{} T1 small-t slope", cfg.label()), k1, budget));

        // sharpness of the T₁ rate on data of exactly B^{s+σ} regularity
        let rough = EvolutionState::new(Field::zeros(&cx.grid, 1, Repr::Physical), corpus::rate_witness(&cx.grid, bp.s + cfg.sigma));
        let rough_parts = apply_t_parts_many(&slope_times, &rough, &contour, &cx.solver, Symmetry::FoldConjugate)?;
        let rough_t1 = rough_parts.iter().map(|p| u_norm_s2(&p.t1_u, cx, bp)).collect::<Result<Vec<_>, _>>()?;
        let kr = fit_exponent(&slope_times, &rough_t1);
        let rate = -1.0 + 0.5 * cfg.sigma;
        slopes.push(vec![cfg.label(), "T1 rough datum".into(), num(kr), num(rate), num(f64::NAN)]);
        report.check(Check::at_most(format!("{} T1 slope on the rough datum, distance to -1+sigma/2", cfg.label()), (kr - rate).abs(), 0.1));
        report.check(Check::at_least(format!("{} T2 small-t slope", cfg.label()), k2, budget));
    }
    report.tables.push(slopes);

    // L₁ maximal-regularity integral with t_min and t_min/2 from one set of solves
    let coarse = log_time_grid(sizes.l1_t_min, sizes.l1_t_end, sizes.l1_per_decade);
    let fine = log_time_grid(0.5 * sizes.l1_t_min, sizes.l1_t_end, sizes.l1_per_decade);
    let mut union: Vec<f64> = coarse.iter().chain(&fine).copied().collect();
    union.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    union.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    let mut l1 = Table::new("l1", &["config", "state", "integral", "integral_half_t_min", "initial_norm", "ratio", "refinement_change"]);
    for cfg in &cx.configs {
        let mut ratios = Vec::new();
        let mut change_max = 0.0_f64;
        for (i, st) in states.iter().enumerate() {
            let traj = apply_t_many(&union, st, &contour, &cx.solver, Symmetry::FoldConjugate)?;
            let pick = |grid: &[f64]| -> Vec<EvolutionState> { grid.iter().map(|&t| traj[union.iter().position(|&x| (x - t).abs() <= 1e-12 * t).expect("member")].clone()).collect() };
            let init = h_norm(st, &cx.norms, &cfg.bp)?;
            let a = l1_from_states(&pick(&coarse), shift, init, &cx.norms, &cfg.bp)?;
            let b = l1_from_states(&pick(&fine), shift, init, &cx.norms, &cfg.bp)?;
            let change = (a.integral - b.integral).abs() / b.integral;
            change_max = change_max.max(change);
            ratios.push(a.ratio);
            l1.push(vec![cfg.label(), i.to_string(), num(a.integral), num(b.integral), num(init), num(a.ratio), num(change)]);
        }
        let spread = ratios.iter().cloned().fold(0.0, f64::max) / ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        report.check(Check::at_most(format!("{} L1 change on halving t_min", cfg.label()), change_max, 0.05));
        report.check(Check::at_most(format!("{} L1 ratio spread over the corpus", cfg.label()), spread, 10.0));
    }
    report.tables.push(l1);
    let mut ct = Table::new("contour", &["gamma_shift", "epsilon", "r_min", "r_max", "t_min", "nodes_per_ray"]);
    ct.push(vec![num(contour.gamma_shift), num(contour.epsilon), num(contour.r_min), num(contour.r_max), num(contour.t_min), contour.nodes_per_ray().to_string()]);
    report.tables.push(ct);
    Ok(report)
}
