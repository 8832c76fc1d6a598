//! Decay sweeps of the resolvent operators along rays of the sector.
//!
//! For every `λ` on a ray the split `(S¹g, S²(f,g), R(f,g))` is solved at
//! `λ` and `λ(1 ± δ)`; `∂_λ` is the central difference with `δ = 10⁻⁵`. Norm
//! ratios are maximized over the data corpus and a least-squares slope in
//! `log|λ|` is fitted.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::besov::{block_norms, gradient_parity, hessian_parity, BesovParams, BlockNorms, NormContext};
use crate::grid_fourier::{DiffOp, Field, Parity};
use crate::resolvent_halfspace::{HalfSpaceSolver, SplitSolution};
use crate::verify::report::{num, Check, SuiteReport, Table};
use crate::verify::VerifyError;

/// Quantities whose growth in `|λ|` is fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepTarget {
    /// `(|λ|‖(ρ,u)‖_{𝓗^s} + ‖u‖_{B^{s+2}}) / ‖(f,g)‖_{𝓗^s}`.
    LambdaS,
    /// `‖∇²S¹g‖_{B^s} / ‖g‖_{B^{s+σ}}`.
    HessS1,
    /// `‖∇²∂_λS¹g‖_{B^s} / ‖g‖_{B^{s−σ}}`.
    DLambdaS1,
    /// `‖(|λ|^{1/2}∇, ∇²)S²(f,g)‖_{B^s} / ‖(f,g)‖_{𝓗^s}`.
    S2,
    DLambdaS2,
    /// `‖R(f,g)‖_{B^{s+1}} / ‖(f,g)‖_{𝓗^s}`.
    R,
    DLambdaR,
}

impl SweepTarget {
    pub const ALL: [SweepTarget; 7] = [Self::LambdaS, Self::HessS1, Self::DLambdaS1, Self::S2, Self::DLambdaS2, Self::R, Self::DLambdaR];

    /// Expected exponent.
    pub fn budget(self, sigma: f64) -> f64 {
        match self {
            Self::LambdaS => 0.0,
            Self::HessS1 => -0.5 * sigma,
            Self::DLambdaS1 => -(1.0 - 0.5 * sigma),
            Self::S2 | Self::R => -1.0,
            Self::DLambdaS2 | Self::DLambdaR => -2.0,
        }
    }

    /// `λS` must stay within ±0.05 of its budget; every other target is one-sided with slack 0.1.
    pub fn passes(self, exponent: f64, sigma: f64) -> bool {
        match self {
            Self::LambdaS => (exponent - self.budget(sigma)).abs() <= 0.05,
            _ => exponent <= self.budget(sigma) + 0.1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::LambdaS => "lambda_S",
            Self::HessS1 => "hess_S1",
            Self::DLambdaS1 => "dlambda_S1",
            Self::S2 => "S2",
            Self::DLambdaS2 => "dlambda_S2",
            Self::R => "R",
            Self::DLambdaR => "dlambda_R",
        }
    }
}

/// Norm indices of one sweep configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormConfig {
    pub bp: BesovParams,
    pub sigma: f64,
}

impl NormConfig {
    pub fn label(&self) -> String {
        format!("q{}_s{}_sigma{}", self.bp.q, self.bp.s, self.sigma)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    /// Ray angles.
    pub rays: Vec<f64>,
    pub points: usize,
    pub lambda_lo: f64,
    pub decades: f64,
    pub fd_rel: f64,
}

impl SweepSpec {
    /// Rays `0, ±(π−ε)/2`, 16 points over three decades from just above `λ_lo`
    /// so that the difference stencil stays admissible.
    pub fn standard(epsilon: f64, lambda_lo: f64) -> Self {
        let half = 0.5 * (std::f64::consts::PI - epsilon);
        Self { rays: vec![0.0, half, -half], points: 16, lambda_lo: lambda_lo * (1.0 + 1e-3), decades: 3.0, fd_rel: 1e-5 }
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.lambda_lo * 10f64.powf(self.decades * i as f64 / (self.points - 1) as f64)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub target: SweepTarget,
    pub config: NormConfig,
    pub angle: f64,
    pub lambdas: Vec<Complex64>,
    pub ratios: Vec<f64>,
    pub exponent: f64,
    /// `max ratio·|λ|^{−exponent}`.
    pub constant: f64,
    pub budget: f64,
    pub pass: bool,
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_exponent(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Block norms of `f` for several `q`, extending once.
fn blocks(ctx: &NormContext, f: &Field, parity: &[Parity], qs: &[f64]) -> Result<Vec<BlockNorms>, VerifyError> {
    let ext = ctx.extend(f, parity)?;
    Ok(qs.iter().map(|&q| block_norms(&ext, &ctx.partition, q)).collect())
}

fn grad_blocks(ctx: &NormContext, f: &Field, parity: &[Parity], qs: &[f64]) -> Result<Vec<BlockNorms>, VerifyError> {
    let g = f.differentiate(DiffOp::Gradient)?;
    blocks(ctx, &g, &gradient_parity(parity, ctx.grid.dim), qs)
}

fn hess_blocks(ctx: &NormContext, f: &Field, parity: &[Parity], qs: &[f64]) -> Result<Vec<BlockNorms>, VerifyError> {
    let h = f.differentiate(DiffOp::Hessian)?;
    blocks(ctx, &h, &hessian_parity(parity, ctx.grid.dim), qs)
}

/// Block norms of the data, shared by every `λ`.
struct DataNorms {
    f: Vec<BlockNorms>,
    g: Vec<BlockNorms>,
}

/// Block norms of every field needed at one `(λ, datum)`.
struct PointNorms {
    rho: Vec<BlockNorms>,
    u: Vec<BlockNorms>,
    hess_u: Vec<BlockNorms>,
    hess_s1: Vec<BlockNorms>,
    hess_ds1: Vec<BlockNorms>,
    grad_s2: Vec<BlockNorms>,
    hess_s2: Vec<BlockNorms>,
    grad_ds2: Vec<BlockNorms>,
    hess_ds2: Vec<BlockNorms>,
    r: Vec<BlockNorms>,
    dr: Vec<BlockNorms>,
}

fn diff(plus: &Field, minus: &Field, h: Complex64) -> Result<Field, VerifyError> {
    Ok(plus.sub(minus)?.scaled(1.0 / (2.0 * h)))
}

fn point_norms(solver: &HalfSpaceSolver, ctx: &NormContext, lambda: Complex64, fd_rel: f64, f: &Field, g: &Field, qs: &[f64]) -> Result<PointNorms, VerifyError> {
    let dim = ctx.grid.dim;
    let vp = Parity::velocity(dim);
    let sp = [Parity::Even];
    let h = fd_rel * lambda;
    let s0: SplitSolution = solver.split_operators(lambda, f, g)?;
    let sp_ = solver.split_operators(lambda + h, f, g)?;
    let sm = solver.split_operators(lambda - h, f, g)?;
    let ds1 = diff(&sp_.s1, &sm.s1, h)?;
    let ds2 = diff(&sp_.s2, &sm.s2, h)?;
    let dr = diff(&sp_.r, &sm.r, h)?;
    let u = s0.s1.add(&s0.s2)?;
    Ok(PointNorms {
        rho: blocks(ctx, &s0.r, &sp, qs)?,
        u: blocks(ctx, &u, &vp, qs)?,
        hess_u: hess_blocks(ctx, &u, &vp, qs)?,
        hess_s1: hess_blocks(ctx, &s0.s1, &vp, qs)?,
        hess_ds1: hess_blocks(ctx, &ds1, &vp, qs)?,
        grad_s2: grad_blocks(ctx, &s0.s2, &vp, qs)?,
        hess_s2: hess_blocks(ctx, &s0.s2, &vp, qs)?,
        grad_ds2: grad_blocks(ctx, &ds2, &vp, qs)?,
        hess_ds2: hess_blocks(ctx, &ds2, &vp, qs)?,
        r: blocks(ctx, &s0.r, &sp, qs)?,
        dr: blocks(ctx, &dr, &sp, qs)?,
    })
}

fn ratio(target: SweepTarget, lambda: Complex64, cfg: &NormConfig, i: usize, d: &DataNorms, p: &PointNorms) -> f64 {
    let (s, r, sigma) = (cfg.bp.s, cfg.bp.r, cfg.sigma);
    let h_data = d.f[i].besov(s + 1.0, r) + d.g[i].besov(s, r);
    let mu = lambda.norm();
    match target {
        SweepTarget::LambdaS => {
            let h_sol = p.rho[i].besov(s + 1.0, r) + p.u[i].besov(s, r);
            (mu * h_sol + p.u[i].besov(s, r) + p.hess_u[i].besov(s, r)) / h_data
        }
        SweepTarget::HessS1 => p.hess_s1[i].besov(s, r) / d.g[i].besov(s + sigma, r),
        SweepTarget::DLambdaS1 => p.hess_ds1[i].besov(s, r) / d.g[i].besov(s - sigma, r),
        SweepTarget::S2 => (mu.sqrt() * p.grad_s2[i].besov(s, r) + p.hess_s2[i].besov(s, r)) / h_data,
        SweepTarget::DLambdaS2 => (mu.sqrt() * p.grad_ds2[i].besov(s, r) + p.hess_ds2[i].besov(s, r)) / h_data,
        SweepTarget::R => p.r[i].besov(s + 1.0, r) / h_data,
        SweepTarget::DLambdaR => p.dr[i].besov(s + 1.0, r) / h_data,
    }
}

/// Runs every target on every ray for every configuration, sharing the solves.
pub fn decay_sweep(solver: &HalfSpaceSolver, ctx: &NormContext, corpus: &[(Field, Field)], spec: &SweepSpec, configs: &[NormConfig]) -> Result<Vec<SweepReport>, VerifyError> {
    if spec.points < 8 || spec.decades < 2.0 {
        return Err(VerifyError::Oracle("a sweep needs at least 8 points over 2 decades".into()));
    }
    if corpus.is_empty() || configs.is_empty() {
        return Err(VerifyError::Oracle("empty corpus or configuration list".into()));
    }
    let qs: Vec<f64> = configs.iter().map(|c| c.bp.q).collect();
    let dim = ctx.grid.dim;
    let data: Vec<DataNorms> = corpus
        .iter()
        .map(|(f, g)| Ok(DataNorms { f: blocks(ctx, f, &[Parity::Even], &qs)?, g: blocks(ctx, g, &Parity::velocity(dim), &qs)? }))
        .collect::<Result<_, VerifyError>>()?;
    let radii = spec.radii();
    let mut out = Vec::new();
    for &angle in &spec.rays {
        let lambdas: Vec<Complex64> = radii.iter().map(|&r| Complex64::from_polar(r, angle)).collect();
        for &l in &lambdas {
            solver.check(l)?;
        }
        let jobs: Vec<(usize, usize)> = (0..lambdas.len()).flat_map(|i| (0..corpus.len()).map(move |k| (i, k))).collect();
        let norms: Vec<PointNorms> = jobs
            .par_iter()
            .map(|&(i, k)| point_norms(solver, ctx, lambdas[i], spec.fd_rel, &corpus[k].0, &corpus[k].1, &qs))
            .collect::<Result<_, VerifyError>>()?;
        for (ci, cfg) in configs.iter().enumerate() {
            for target in SweepTarget::ALL {
                let ratios: Vec<f64> = (0..lambdas.len())
                    .map(|i| (0..corpus.len()).map(|k| ratio(target, lambdas[i], cfg, ci, &data[k], &norms[i * corpus.len() + k])).fold(0.0, f64::max))
                    .collect();
                let mus: Vec<f64> = lambdas.iter().map(|l| l.norm()).collect();
                let exponent = fit_exponent(&mus, &ratios);
                let constant = mus.iter().zip(&ratios).map(|(m, r)| r * m.powf(-exponent)).fold(0.0, f64::max);
                out.push(SweepReport {
                    target,
                    config: *cfg,
                    angle,
                    lambdas: lambdas.clone(),
                    ratios,
                    exponent,
                    constant,
                    budget: target.budget(cfg.sigma),
                    pass: target.passes(exponent, cfg.sigma),
                });
            }
        }
    }
    Ok(out)
}

/// Report with one check per (configuration, target, ray) and the raw ratios.
pub fn sweep_report(name: &str, sweeps: &[SweepReport]) -> SuiteReport {
    let mut report = SuiteReport::new(name);
    let mut fits = Table::new("fits", &["config", "target", "angle", "exponent", "budget", "constant", "pass"]);
    let mut points = Table::new("points", &["config", "target", "angle", "lambda_re", "lambda_im", "ratio"]);
    for s in sweeps {
        let label = s.config.label();
        fits.push(vec![label.clone(), s.target.label().into(), num(s.angle), num(s.exponent), num(s.budget), num(s.constant), s.pass.to_string()]);
        for (l, r) in s.lambdas.iter().zip(&s.ratios) {
            points.push(vec![label.clone(), s.target.label().into(), num(s.angle), num(l.re), num(l.im), num(*r)]);
        }
        let name = format!("{} {} angle {:.4}", label, s.target.label(), s.angle);
        let c = if s.target == SweepTarget::LambdaS {
            Check::at_most(format!("{name} |exponent|"), s.exponent.abs(), 0.05)
        } else {
            Check::at_most(format!("{name} exponent"), s.exponent, s.budget + 0.1)
        };
        report.check(c);
    }
    report.tables.push(fits);
    report.tables.push(points);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_power_law() {
        let x: Vec<f64> = (0..10).map(|i| 2f64.powi(i)).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v.powf(-1.5)).collect();
        assert!((fit_exponent(&x, &y) + 1.5).abs() < 1e-12);
        assert!(SweepTarget::LambdaS.passes(0.04, 0.25) && !SweepTarget::LambdaS.passes(-0.06, 0.25));
        assert!(SweepTarget::HessS1.passes(-0.2, 0.25) && !SweepTarget::HessS1.passes(0.0, 0.25));
    }
}
