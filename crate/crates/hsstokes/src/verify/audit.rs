//! Empirical audits of the symbol bounds and of the two branches of `𝓜`.
//!
//! Constants are estimated as extrema over seeded samples. A bound counts as
//! stable when doubling the sample moves the extremum by at most 25%.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::RngExt;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::spectral_core::{kernel_m_ab, kernel_m_direct, kernel_m_integral, kernel_p_sym, thresholds, FluidParams, SectorSpec, Symbols, TAU_M};
use crate::verify::corpus;
use crate::verify::report::{num, Check, SuiteReport, Table};
use crate::verify::VerifyError;

/// Allowed growth of an empirical constant when the sample is doubled.
pub const DOUBLING_GROWTH: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub bound: String,
    pub region: String,
    /// Constant on the first half of the sample and on the full sample.
    pub constant_half: f64,
    pub constant: f64,
    pub worst_lambda: Complex64,
    pub worst_xi: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct SamplePoint {
    pub lambda: Complex64,
    pub xi_t: Vec<f64>,
}

impl SamplePoint {
    pub fn xi_norm(&self) -> f64 {
        self.xi_t.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `|λ|^{1/2} + |ξ'|`.
    pub fn scale(&self) -> f64 {
        self.lambda.norm().sqrt() + self.xi_norm()
    }
}

/// Admissible points with `|λ| ∈ [ν₀, 10⁴ν₀]` (log-uniform) and `|ξ'| ∈ {0} ∪ [10⁻³, ξ_max]`.
pub fn sample_points(n: usize, sector: &SectorSpec, params: &FluidParams, xi_max: f64, rng: &mut ChaCha8Rng) -> Vec<SamplePoint> {
    let mut out = Vec::with_capacity(n);
    let dt = params.dim - 1;
    let phi = PI - sector.epsilon;
    while out.len() < n {
        let r = sector.nu0 * 1e4f64.powf(rng.random_range(0.0..1.0));
        let lambda = Complex64::from_polar(r, rng.random_range(-phi..phi));
        let mag = if rng.random_bool(0.05) { 0.0 } else { 1e-3 * (xi_max / 1e-3).powf(rng.random_range(0.0..1.0)) };
        let mut dir: Vec<f64> = (0..dt).map(|_| rng.random_range(-1.0..1.0)).collect();
        let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
        dir.iter_mut().for_each(|x| *x *= mag / len);
        if crate::spectral_core::in_sector(lambda, sector, params) {
            out.push(SamplePoint { lambda, xi_t: dir });
        }
    }
    out
}

/// Extremum of `f` over the first half and over all of `pts`, with the worst point.
fn extremum(pts: &[SamplePoint], minimize: bool, f: impl Fn(usize, &SamplePoint) -> Result<f64, VerifyError>) -> Result<(f64, f64, usize), VerifyError> {
    let half = pts.len() / 2;
    let init = if minimize { f64::INFINITY } else { f64::NEG_INFINITY };
    let (mut best_half, mut best, mut idx) = (init, init, 0);
    for (i, p) in pts.iter().enumerate() {
        let v = f(i, p)?;
        let better = if minimize { v < best } else { v > best };
        if better {
            best = v;
            idx = i;
        }
        if i < half {
            best_half = if minimize { best_half.min(v) } else { best_half.max(v) };
        }
    }
    Ok((best_half, best, idx))
}

fn report(bound: &str, region: &str, pts: &[SamplePoint], (half, full, idx): (f64, f64, usize), pass: bool) -> AuditReport {
    AuditReport { bound: bound.into(), region: region.into(), constant_half: half, constant: full, worst_lambda: pts[idx].lambda, worst_xi: pts[idx].xi_norm(), pass }
}

/// A lower bound is stable when halving the sample raises it by at most 25%.
fn stable_lower(half: f64, full: f64) -> bool {
    full > 0.0 && half <= full * (1.0 + DOUBLING_GROWTH)
}

fn stable_upper(half: f64, full: f64) -> bool {
    full.is_finite() && full <= half * (1.0 + DOUBLING_GROWTH)
}

/// `|λ/α + |ξ|²| ≥ sin(ε/2)(|λ|/α + |ξ|²)` with `ξ ∈ ℝ^N`.
pub fn audit_resolvent_lower(pts: &[SamplePoint], params: &FluidParams, sector: &SectorSpec, rng: &mut ChaCha8Rng) -> Result<AuditReport, VerifyError> {
    let normals: Vec<f64> = pts.iter().map(|_| rng.random_range(-10.0..10.0)).collect();
    let ext = extremum(pts, true, |i, p| {
        let xn = normals[i];
        let xi2 = p.xi_norm().powi(2) + xn * xn;
        let z = p.lambda / params.alpha + xi2;
        Ok(z.norm() / (p.lambda.norm() / params.alpha + xi2))
    })?;
    let bound = (0.5 * sector.epsilon).sin();
    Ok(report("resolvent lower bound", "sector, xi in R^N", pts, ext, ext.1 >= bound * (1.0 - 1e-12)))
}

/// `|p(λ) + |ξ'|²| ≥ c₁(|λ| + |ξ'|²)`.
pub fn audit_p_lower(pts: &[SamplePoint], params: &FluidParams) -> Result<AuditReport, VerifyError> {
    let ext = extremum(pts, true, |_, p| {
        let s = Symbols::new(params, p.lambda, p.xi_norm().powi(2))?;
        Ok((s.p + s.xi2).norm() / (p.lambda.norm() + s.xi2))
    })?;
    Ok(report("p lower bound", "sector", pts, ext, stable_lower(ext.0, ext.1)))
}

/// `|K₁| ≥ c₃(|λ|^{1/2} + |ξ'|)`.
pub fn audit_k1_lower(pts: &[SamplePoint], params: &FluidParams) -> Result<AuditReport, VerifyError> {
    let ext = extremum(pts, true, |_, p| {
        let s = Symbols::new(params, p.lambda, p.xi_norm().powi(2))?;
        Ok(s.k1.norm() / p.scale())
    })?;
    Ok(report("K1 lower bound", "sector", pts, ext, stable_lower(ext.0, ext.1)))
}

/// `|γ²A/(K₁λ)| ≤ 1/2` on points with `|λ| ≥ λ₁`.
pub fn audit_smallness(pts: &[SamplePoint], params: &FluidParams, lambda1: f64) -> Result<AuditReport, VerifyError> {
    let above: Vec<SamplePoint> = pts.iter().filter(|p| p.lambda.norm() >= lambda1).cloned().collect();
    if above.is_empty() {
        return Err(VerifyError::Oracle("no sample above lambda1".into()));
    }
    let ext = extremum(&above, false, |_, p| Ok(Symbols::new(params, p.lambda, p.xi_norm().powi(2))?.smallness(params)))?;
    Ok(report("smallness of gamma^2 A/(K1 lambda)", "|lambda| >= lambda1", &above, ext, ext.1 <= 0.5))
}

/// A radial symbol `m(λ, |ξ'|²)` of order `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SymbolName {
    A,
    B,
    K,
    K1,
    InvK,
    InvK1,
    K2,
    K3,
}

impl SymbolName {
    pub const ALL: [SymbolName; 8] = [Self::A, Self::B, Self::K, Self::K1, Self::InvK, Self::InvK1, Self::K2, Self::K3];

    pub fn order(self) -> f64 {
        match self {
            Self::A | Self::B | Self::K | Self::K1 => 1.0,
            _ => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::A => "A",
            Self::B => "B",
            Self::K => "K",
            Self::K1 => "K1",
            Self::InvK => "1/K",
            Self::InvK1 => "1/K1",
            Self::K2 => "K2",
            Self::K3 => "K3",
        }
    }

    pub fn eval(self, params: &FluidParams, lambda: Complex64, xi2: f64) -> Result<Complex64, VerifyError> {
        let s = Symbols::new(params, lambda, xi2)?;
        Ok(match self {
            Self::A => s.a,
            Self::B => s.b,
            Self::K => s.k,
            Self::K1 => s.k1,
            Self::InvK => 1.0 / s.k,
            Self::InvK1 => 1.0 / s.k1,
            Self::K2 => s.k2(params)?,
            Self::K3 => s.k3(params)?,
        })
    }
}

/// `|D^{α'}m|` along the first tangential axis by central differences with
/// step `10⁻⁴(|λ|^{1/2}+|ξ'|)`; `order ∈ {0, 1, 2}`.
pub fn symbol_derivative(name: SymbolName, params: &FluidParams, p: &SamplePoint, order: u32) -> Result<Complex64, VerifyError> {
    let h = 1e-4 * p.scale();
    let rest: f64 = p.xi_t.iter().skip(1).map(|x| x * x).sum();
    let x0 = p.xi_t[0];
    let at = |dx: f64| name.eval(params, p.lambda, (x0 + dx) * (x0 + dx) + rest);
    Ok(match order {
        0 => at(0.0)?,
        1 => (at(h)? - at(-h)?) / (2.0 * h),
        2 => (at(h)? - 2.0 * at(0.0)? + at(-h)?) / (h * h),
        _ => return Err(VerifyError::Oracle(format!("derivative order {order} not audited"))),
    })
}

/// `sup |D^{α'}m|·(|λ|^{1/2}+|ξ'|)^{|α'|−s}`.
pub fn audit_symbol(name: SymbolName, order: u32, pts: &[SamplePoint], params: &FluidParams) -> Result<AuditReport, VerifyError> {
    let ext = extremum(pts, false, |_, p| {
        let d = symbol_derivative(name, params, p, order)?;
        Ok(d.norm() * p.scale().powf(order as f64 - name.order()))
    })?;
    let bound = format!("symbol {} D^{}", name.label(), order);
    Ok(report(&bound, "sector", pts, ext, stable_upper(ext.0, ext.1)))
}

/// Decay rates `Re A, Re B ≥ c(|λ|^{1/2}+|ξ'|)` and the kernel bounds
/// `|𝓜(x)|·(|λ|^{1/2}+|ξ'|) ≤ C e^{−c(|λ|^{1/2}+|ξ'|)x/2}`, `|𝓟_j(x,y)| ≤ C(|λ|^{1/2}+|ξ'|)e^{−c(…)(x+y)/2}`.
pub fn audit_kernels(pts: &[SamplePoint], params: &FluidParams, rng: &mut ChaCha8Rng) -> Result<Vec<AuditReport>, VerifyError> {
    let decay = extremum(pts, true, |_, p| {
        let s = Symbols::new(params, p.lambda, p.xi_norm().powi(2))?;
        Ok(s.a.re.min(s.b.re) / p.scale())
    })?;
    let c = decay.1;
    let mut out = vec![report("kernel decay rate", "sector", pts, decay, stable_lower(decay.0, decay.1))];
    let taus: Vec<(f64, f64)> = pts.iter().map(|_| (0.01 * 2000f64.powf(rng.random_range(0.0..1.0)), 0.01 * 2000f64.powf(rng.random_range(0.0..1.0)))).collect();
    let m_ext = extremum(pts, false, |i, p| {
        let s = Symbols::new(params, p.lambda, p.xi_norm().powi(2))?;
        let (tx, _) = taus[i];
        let x = tx / p.scale();
        Ok(s.m(x).norm() * p.scale() * (0.5 * c * tx).exp())
    })?;
    out.push(report("kernel M", "sector", pts, m_ext, stable_upper(m_ext.0, m_ext.1)));
    for j in 1..=4 {
        let ext = extremum(pts, false, |i, p| {
            let s = Symbols::new(params, p.lambda, p.xi_norm().powi(2))?;
            let (tx, ty) = taus[i];
            let (x, y) = (tx / p.scale(), ty / p.scale());
            Ok(kernel_p_sym(j, &s, x, y)?.norm() / p.scale() * (0.5 * c * (tx + ty)).exp())
        })?;
        out.push(report(&format!("kernel P{j}"), "sector", pts, ext, stable_upper(ext.0, ext.1)));
    }
    Ok(out)
}

/// Worst relative disagreement of the two `𝓜` branches in the crossover band,
/// and of the coincident limit against `−x e^{−Ax}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossoverReport {
    pub band_max_rel: f64,
    pub limit_max_rel: f64,
    pub quotient_max_rel: f64,
}

pub fn kernel_m_crossover(samples: usize, rng: &mut ChaCha8Rng) -> CrossoverReport {
    let mut band = 0.0_f64;
    let mut limit = 0.0_f64;
    let mut quotient = 0.0_f64;
    for _ in 0..samples {
        let a = Complex64::from_polar(0.1 * 1000f64.powf(rng.random_range(0.0..1.0)), rng.random_range(-1.4..1.4));
        let x = rng.random_range(0.01..10.0) / a.norm();
        let gap = TAU_M * 4f64.powf(rng.random_range(0.0..1.0)) / 2.0;
        // |B − A| = gap·(|A| + |B|) to first order
        let b = a + Complex64::from_polar(2.0 * gap * a.norm(), rng.random_range(0.0..2.0 * PI));
        let d = kernel_m_direct(a, b, x);
        let i = kernel_m_integral(a, b, x);
        band = band.max((d - i).norm() / i.norm());
        let exact = -x * (-a * x).exp();
        limit = limit.max((kernel_m_ab(a, a, x) - exact).norm() / exact.norm());
        let near = a + Complex64::from_polar(1e-6, rng.random_range(0.0..2.0 * PI));
        let dq = ((-a * x).exp() - (-near * x).exp()) / (a - near);
        quotient = quotient.max((kernel_m_ab(a, near, x) - dq).norm() / dq.norm());
    }
    CrossoverReport { band_max_rel: band, limit_max_rel: limit, quotient_max_rel: quotient }
}

/// Settings of the symbol suite.
#[derive(Debug, Clone, Copy)]
pub struct SymbolSuiteSpec {
    /// Sample size before doubling.
    pub samples: usize,
    pub xi_max: f64,
    pub seed: u64,
}

/// All symbol audits plus the `𝓜` crossover check.
pub fn symbol_suite(params: &FluidParams, sector: &SectorSpec, spec: &SymbolSuiteSpec) -> Result<SuiteReport, VerifyError> {
    let mut rng = corpus::rng(spec.seed);
    let pts = sample_points(2 * spec.samples, sector, params, spec.xi_max, &mut rng);
    let th = thresholds(params, sector.epsilon, spec.xi_max);
    let mut audits = vec![
        audit_resolvent_lower(&pts, params, sector, &mut rng)?,
        audit_p_lower(&pts, params)?,
        audit_k1_lower(&pts, params)?,
        audit_smallness(&pts, params, th.lambda1)?,
    ];
    let above: Vec<SamplePoint> = pts.iter().filter(|p| p.lambda.norm() >= th.lambda1).cloned().collect();
    for name in SymbolName::ALL {
        let set = if matches!(name, SymbolName::K2 | SymbolName::K3) { &above } else { &pts };
        for order in 0..=2 {
            audits.push(audit_symbol(name, order, set, params)?);
        }
    }
    audits.extend(audit_kernels(&pts, params, &mut rng)?);
    let cross = kernel_m_crossover(spec.samples.min(2000), &mut rng);

    let mut report = SuiteReport::new("symbols");
    let mut table = Table::new("audits", &["bound", "region", "constant_half", "constant", "worst_lambda_re", "worst_lambda_im", "worst_xi", "pass"]);
    for a in &audits {
        table.push(vec![a.bound.clone(), a.region.clone(), num(a.constant_half), num(a.constant), num(a.worst_lambda.re), num(a.worst_lambda.im), num(a.worst_xi), a.pass.to_string()]);
        report.check(Check::flag(format!("audit {}", a.bound), a.constant, a.pass));
    }
    report.tables.push(table);
    let mut t = Table::new("thresholds", &["lambda1", "lambda2"]);
    t.push(vec![num(th.lambda1), num(th.lambda2)]);
    report.tables.push(t);
    report.check(Check::at_most("M crossover band", cross.band_max_rel, 1e-10));
    report.check(Check::at_most("M coincident limit", cross.limit_max_rel, 1e-10));
    report.check(Check::at_most("M near-coincident quotient", cross.quotient_max_rel, 1e-6));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (FluidParams, SectorSpec) {
        (FluidParams::new(1.0, 0.5, 1.0, 2).unwrap(), SectorSpec::new(PI / 4.0, 4.0 / 3.0).unwrap())
    }

    #[test]
    fn sector_lower_bound_and_derivative_of_b() {
        let (params, sector) = setup();
        let mut rng = corpus::rng(3);
        let pts = sample_points(400, &sector, &params, 100.0, &mut rng);
        assert!(audit_resolvent_lower(&pts, &params, &sector, &mut rng).unwrap().pass);
        // ∂B/∂ξ₁ = ξ₁/B exactly
        let p = SamplePoint { lambda: Complex64::new(2.0, 1.0), xi_t: vec![0.7] };
        let b = SymbolName::B.eval(&params, p.lambda, 0.49).unwrap();
        let d = symbol_derivative(SymbolName::B, &params, &p, 1).unwrap();
        assert!((d - 0.7 / b).norm() < 1e-8);
    }

    #[test]
    fn crossover_branches_agree() {
        let c = kernel_m_crossover(500, &mut corpus::rng(5));
        assert!(c.band_max_rel < 1e-10 && c.limit_max_rel < 1e-10, "{c:?}");
    }
}
