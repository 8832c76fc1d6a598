//! Quadrature oracle for the residue-theorem closed forms of the trace kernels.
//!
//! The `ξ_N`-integrals are evaluated directly from `λ`, `ξ'` and `y` with
//! adaptive Gauss–Legendre panels aligned with the oscillation of `e^{±iyξ_N}`.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rand::RngExt;
use serde::Serialize;

use crate::resolvent_halfspace::trace_kernels;
use crate::spectral_core::{in_sector, FluidParams, SectorSpec, Symbols};
use crate::verify::VerifyError;
use crate::verify::corpus;
use crate::verify::report::{num, Check, SuiteReport, Table};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// One comparison between a closed form and its quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidueRow {
    pub lambda: Complex64,
    pub xi_t: f64,
    pub y: f64,
    /// `h⁽¹⁾_j` closed form and quadrature.
    pub h1: (Complex64, Complex64),
    /// `h⁽¹⁾_N` quadrature (closed form 0).
    pub h1_n: Complex64,
    /// `h⁽²⁾_{jk}` with `j, k` tangential.
    pub h2_jk: (Complex64, Complex64),
    /// `h⁽²⁾_{jN}`.
    pub h2_jn: (Complex64, Complex64),
    /// `h⁽²⁾_{Nk}` and `h⁽²⁾_{NN}` quadratures (closed forms 0).
    pub h2_nk: Complex64,
    pub h2_nn: Complex64,
}

impl ResidueRow {
    pub fn max_deviation(&self) -> f64 {
        [self.h1, self.h2_jk, self.h2_jn].iter().map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_zero_case(&self) -> f64 {
        self.h1_n.norm().max(self.h2_nk.norm()).max(self.h2_nn.norm())
    }
}

struct Quad {
    rule: Vec<(f64, f64)>,
}

impl Quad {
    fn new() -> Self {
        let rule = GaussLegendre::new(NonZeroUsize::new(20).expect("nonzero")).as_node_weight_pairs().to_vec();
        Self { rule }
    }

    fn panel<F: Fn(f64) -> [Complex64; 6]>(&self, f: &F, a: f64, b: f64) -> [Complex64; 6] {
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        let mut acc = [Complex64::new(0.0, 0.0); 6];
        for &(x, w) in &self.rule {
            let v = f(c + h * x);
            for (a, v) in acc.iter_mut().zip(v) {
                *a += w * h * v;
            }
        }
        acc
    }

    fn adaptive<F: Fn(f64) -> [Complex64; 6]>(&self, f: &F, a: f64, b: f64, whole: [Complex64; 6], tol: f64, depth: u32) -> Result<[Complex64; 6], VerifyError> {
        let m = 0.5 * (a + b);
        let (l, r) = (self.panel(f, a, m), self.panel(f, m, b));
        let mut sum = [Complex64::new(0.0, 0.0); 6];
        let mut err = 0.0_f64;
        for k in 0..6 {
            sum[k] = l[k] + r[k];
            err = err.max((sum[k] - whole[k]).norm());
        }
        if err <= tol {
            return Ok(sum);
        }
        if depth == 0 {
            return Err(VerifyError::Oracle(format!("residue quadrature did not converge on [{a:.3e}, {b:.3e}]")));
        }
        let l = self.adaptive(f, a, m, l, 0.5 * tol, depth - 1)?;
        let r = self.adaptive(f, m, b, r, 0.5 * tol, depth - 1)?;
        let mut out = [Complex64::new(0.0, 0.0); 6];
        for k in 0..6 {
            out[k] = l[k] + r[k];
        }
        Ok(out)
    }
}

/// Compares the closed forms against quadrature at one point (`N = 2`, `ξ' = xi_t`).
pub fn residue_oracle(lambda: Complex64, xi_t: f64, y: f64, params: &FluidParams, sector: &SectorSpec) -> Result<ResidueRow, VerifyError> {
    if !in_sector(lambda, sector, params) {
        return Err(VerifyError::Oracle(format!("λ = {lambda} is not admissible")));
    }
    if !(y > 0.0) {
        return Err(VerifyError::Oracle("y must be positive".into()));
    }
    let alpha = params.alpha;
    let ab = params.alpha + params.beta;
    let b2 = lambda / alpha + xi_t * xi_t;
    let a2 = lambda * lambda / (ab * lambda + params.gamma2()) + xi_t * xi_t;
    // [h1_j, h1_N, h2_jk, h2_jN, h2_Nk, h2_NN] integrands, paired over ±ξ_N
    let f = |s: f64| -> [Complex64; 6] {
        let mut out = [Complex64::new(0.0, 0.0); 6];
        for z in [s, -s] {
            let em = (-I * y * z).exp();
            let ep = (I * y * z).exp();
            let d1 = z * z + b2;
            let d2 = d1 * (z * z + a2);
            out[0] += (em + ep) / d1;
            out[1] += (em - ep) / d1;
            out[2] += xi_t * xi_t * (em + ep) / d2;
            out[3] += xi_t * z * (em - ep) / d2;
            out[4] += z * xi_t * (em + ep) / d2;
            out[5] += z * z * (em - ep) / d2;
        }
        out
    };
    let quad = Quad::new();
    let scale = b2.norm().sqrt().max(a2.norm().sqrt()).max(1.0);
    let r_max = 1e5_f64.max(1e3 * scale);
    let period = PI / y;
    let mut edges = vec![0.0];
    let mut x = 0.0;
    // fine panels where the rational factor varies, period panels beyond
    let fine = (scale / 8.0).min(period);
    while x < 40.0 * scale {
        x += fine;
        edges.push(x);
    }
    while x < r_max {
        x += period;
        edges.push(x);
    }
    let mut total = [Complex64::new(0.0, 0.0); 6];
    for w in edges.windows(2) {
        let coarse = quad.panel(&f, w[0], w[1]);
        let v = quad.adaptive(&f, w[0], w[1], coarse, 1e-15, 30)?;
        for k in 0..6 {
            total[k] += v[k];
        }
    }
    let q: Vec<Complex64> = total.iter().map(|v| v / (2.0 * PI)).collect();
    let s = Symbols::new(params, lambda, xi_t * xi_t)?;
    let k = trace_kernels(s.a, s.b, y);
    Ok(ResidueRow {
        lambda,
        xi_t,
        y,
        h1: (k.h1, q[0]),
        h1_n: q[1],
        h2_jk: (xi_t * xi_t * k.e, q[2]),
        h2_jn: (I * xi_t * k.m_apb, q[3]),
        h2_nk: q[4],
        h2_nn: q[5],
    })
}

/// Samples `count` admissible points with `|λ| ∈ [ν₀, 100ν₀]`, `|ξ'| ≤ 5`, `y ∈ [0.5, 4]`.
pub fn residue_suite(params: &FluidParams, sector: &SectorSpec, count: usize, seed: u64) -> Result<SuiteReport, VerifyError> {
    let mut rng = corpus::rng(seed);
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let r = sector.nu0 * 100f64.powf(rng.random_range(0.0..1.0));
        let th = rng.random_range(-(PI - sector.epsilon)..(PI - sector.epsilon));
        let lambda = Complex64::from_polar(r, th);
        let xi = rng.random_range(-5.0..5.0);
        let y = rng.random_range(0.5..4.0);
        if in_sector(lambda, sector, params) {
            points.push((lambda, xi, y));
        }
    }
    let mut rows = Vec::with_capacity(count);
    for (lambda, xi, y) in points {
        rows.push(residue_oracle(lambda, xi, y, params, sector)?);
    }
    let mut report = SuiteReport::new("residue");
    let mut t = Table::new("points", &["lambda_re", "lambda_im", "xi_t", "y", "dev_h1", "dev_h2_jk", "dev_h2_jn", "abs_h1_n", "abs_h2_nk", "abs_h2_nn"]);
    for r in &rows {
        t.push(vec![
            num(r.lambda.re),
            num(r.lambda.im),
            num(r.xi_t),
            num(r.y),
            num((r.h1.0 - r.h1.1).norm()),
            num((r.h2_jk.0 - r.h2_jk.1).norm()),
            num((r.h2_jn.0 - r.h2_jn.1).norm()),
            num(r.h1_n.norm()),
            num(r.h2_nk.norm()),
            num(r.h2_nn.norm()),
        ]);
    }
    report.tables.push(t);
    report.check(Check::at_most("closed_form_max_deviation", rows.iter().map(ResidueRow::max_deviation).fold(0.0, f64::max), 1e-8));
    report.check(Check::at_most("zero_cases_max_abs", rows.iter().map(ResidueRow::max_zero_case).fold(0.0, f64::max), 1e-10));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_match_quadrature() {
        let params = FluidParams::new(1.0, 0.5, 1.0, 2).unwrap();
        let sector = SectorSpec::new(PI / 4.0, 1.0).unwrap();
        let row = residue_oracle(Complex64::new(2.0, 3.0), 1.3, 1.7, &params, &sector).unwrap();
        assert!(row.max_deviation() < 1e-8, "{row:?}");
        assert!(row.max_zero_case() < 1e-10);
        assert!(residue_oracle(Complex64::new(-3.0, 0.0), 1.0, 1.0, &params, &sector).is_err());
    }
}
