//! Scalar symbols and one-dimensional kernels of the half-space solution formulas.
//!
//! Everything here is a pure function of the resolvent parameter `λ`, the
//! tangential frequency `ξ'` and the fluid coefficients. Symbols depend on `ξ'`
//! only through `|ξ'|²`, so the workhorse type [`Symbols`] is keyed by that.

use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative gap `|A−B|/(|A|+|B|)` below which `𝓜` switches to its integral form.
pub const TAU_M: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolError {
    #[error("invalid fluid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid sector: {0}")]
    InvalidSector(String),
    #[error("lambda = 0 is outside the domain")]
    ZeroLambda,
    #[error("(alpha+beta)*lambda + gamma_c^2 vanishes at lambda = {0}")]
    SingularP(Complex64),
    #[error("radicand {0} lies on the branch cut of the square root")]
    BranchCut(Complex64),
    #[error("|gamma_c^2 A / (K1 lambda)| = {value:.4} exceeds 1/2 at lambda = {lambda}")]
    SmallnessViolated { value: f64, lambda: Complex64 },
    #[error("kernel index {0} is not in 1..=4")]
    KernelIndex(usize),
}

/// Coefficients of the linearized system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma_c: f64,
    pub dim: usize,
}

impl FluidParams {
    pub fn new(alpha: f64, beta: f64, gamma_c: f64, dim: usize) -> Result<Self, SymbolError> {
        let p = Self { alpha, beta, gamma_c, dim };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), SymbolError> {
        if !(self.alpha > 0.0) {
            return Err(SymbolError::InvalidParams(format!("alpha = {} must be positive", self.alpha)));
        }
        if !(self.alpha + self.beta > 0.0) {
            return Err(SymbolError::InvalidParams(format!(
                "alpha + beta = {} must be positive",
                self.alpha + self.beta
            )));
        }
        if !(self.gamma_c > 0.0) {
            return Err(SymbolError::InvalidParams(format!("gamma_c = {} must be positive", self.gamma_c)));
        }
        if !(self.dim == 2 || self.dim == 3) {
            return Err(SymbolError::InvalidParams(format!("dim = {} must be 2 or 3", self.dim)));
        }
        Ok(())
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma_c * self.gamma_c
    }

    /// `γ²/(α+β)`, the radius scale of the excluded disc of `K_ε`.
    pub fn disc_scale(&self) -> f64 {
        self.gamma2() / (self.alpha + self.beta)
    }
}

/// The region `Λ_{ε,ν₀} = K_ε ∩ Σ_ε ∩ {|λ| ≥ ν₀}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorSpec {
    pub epsilon: f64,
    pub nu0: f64,
}

impl SectorSpec {
    pub fn new(epsilon: f64, nu0: f64) -> Result<Self, SymbolError> {
        let s = Self { epsilon, nu0 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), SymbolError> {
        if !(self.epsilon > 0.0 && self.epsilon < PI / 2.0) {
            return Err(SymbolError::InvalidSector(format!("epsilon = {} not in (0, pi/2)", self.epsilon)));
        }
        if !(self.nu0 > 0.0) {
            return Err(SymbolError::InvalidSector(format!("nu0 = {} must be positive", self.nu0)));
        }
        Ok(())
    }
}

/// A resolvent parameter together with a tangential frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPoint {
    pub lambda: Complex64,
    pub xi_t: Vec<f64>,
}

impl SymbolPoint {
    pub fn new(lambda: Complex64, xi_t: Vec<f64>) -> Self {
        Self { lambda, xi_t }
    }

    pub fn xi2(&self) -> f64 {
        self.xi_t.iter().map(|x| x * x).sum()
    }
}

/// Which of the three membership conditions of the sector a point violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SectorViolation {
    Angle,
    Disc,
    Modulus,
}

impl std::fmt::Display for SectorViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SectorViolation::Angle => write!(f, "|arg lambda| > pi - epsilon"),
            SectorViolation::Disc => write!(f, "lambda lies inside the excluded disc of K_epsilon"),
            SectorViolation::Modulus => write!(f, "|lambda| < nu0"),
        }
    }
}

/// Returns the first violated membership condition, or `None` inside the sector.
pub fn sector_violation(lambda: Complex64, spec: &SectorSpec, params: &FluidParams) -> Option<SectorViolation> {
    if lambda.arg().abs() > PI - spec.epsilon {
        return Some(SectorViolation::Angle);
    }
    let c = params.disc_scale() + spec.epsilon;
    let lhs = (lambda.re + c).powi(2) + lambda.im.powi(2);
    if lhs < c * c {
        return Some(SectorViolation::Disc);
    }
    if lambda.norm() < spec.nu0 {
        return Some(SectorViolation::Modulus);
    }
    None
}

pub fn in_sector(lambda: Complex64, spec: &SectorSpec, params: &FluidParams) -> bool {
    lambda != Complex64::new(0.0, 0.0) && sector_violation(lambda, spec, params).is_none()
}

pub fn eta_lambda(lambda: Complex64, params: &FluidParams) -> Result<Complex64, SymbolError> {
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(SymbolError::ZeroLambda);
    }
    Ok(params.beta + params.gamma2() / lambda)
}

pub fn p_lambda(lambda: Complex64, params: &FluidParams) -> Result<Complex64, SymbolError> {
    let d = denom_d(lambda, params)?;
    Ok(lambda * lambda / d)
}

/// `(α+β)λ + γ²`.
fn denom_d(lambda: Complex64, params: &FluidParams) -> Result<Complex64, SymbolError> {
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(SymbolError::ZeroLambda);
    }
    let d = (params.alpha + params.beta) * lambda + params.gamma2();
    if d.norm() <= f64::EPSILON * (params.alpha + params.beta) * lambda.norm() {
        return Err(SymbolError::SingularP(lambda));
    }
    Ok(d)
}

/// `q(λ) = αγ²λ/((α+β)((α+β)λ+γ²))`.
pub fn q_lambda(lambda: Complex64, params: &FluidParams) -> Result<Complex64, SymbolError> {
    let d = denom_d(lambda, params)?;
    let ab = params.alpha + params.beta;
    Ok(params.alpha * params.gamma2() * lambda / (ab * d))
}

/// `(βλ+γ²)/((α+β)λ+γ²) = η_λ/(α+η_λ)`, the coefficient of the gradient part of `S⁰`.
pub fn c_lambda(lambda: Complex64, params: &FluidParams) -> Result<Complex64, SymbolError> {
    let d = denom_d(lambda, params)?;
    Ok((params.beta * lambda + params.gamma2()) / d)
}

/// Principal square root with positive real part.
pub fn sqrt_re_pos(z: Complex64) -> Result<Complex64, SymbolError> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(SymbolError::BranchCut(z));
    }
    Ok(z.sqrt())
}

/// All scalar symbols at one `(λ, |ξ'|²)`.
#[derive(Debug, Clone, Copy)]
pub struct Symbols {
    pub lambda: Complex64,
    pub xi2: f64,
    pub eta: Complex64,
    pub p: Complex64,
    pub c: Complex64,
    pub q: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub k: Complex64,
    pub k1: Complex64,
}

impl Symbols {
    pub fn new(params: &FluidParams, lambda: Complex64, xi2: f64) -> Result<Self, SymbolError> {
        let eta = eta_lambda(lambda, params)?;
        let p = p_lambda(lambda, params)?;
        let c = c_lambda(lambda, params)?;
        let q = q_lambda(lambda, params)?;
        let a = sqrt_re_pos(p + xi2)?;
        let b = sqrt_re_pos(lambda / params.alpha + xi2)?;
        let k = (params.alpha + eta) * a + params.alpha * b;
        let k1 = (params.alpha + params.beta) * a + params.alpha * b;
        Ok(Self { lambda, xi2, eta, p, c, q, a, b, k, k1 })
    }

    pub fn at(pt: &SymbolPoint, params: &FluidParams) -> Result<Self, SymbolError> {
        Self::new(params, pt.lambda, pt.xi2())
    }

    /// `|γ²A/(K₁λ)|`, required to stay below 1/2 for the `K₂`, `K₃` split.
    pub fn smallness(&self, params: &FluidParams) -> f64 {
        (params.gamma2() * self.a / (self.k1 * self.lambda)).norm()
    }

    fn check_smallness(&self, params: &FluidParams) -> Result<(), SymbolError> {
        let value = self.smallness(params);
        if value > 0.5 {
            return Err(SymbolError::SmallnessViolated { value, lambda: self.lambda });
        }
        Ok(())
    }

    /// `K₂` with `η_λ/K = β/K₁ + K₂/λ`.
    pub fn k2(&self, params: &FluidParams) -> Result<Complex64, SymbolError> {
        self.check_smallness(params)?;
        Ok(self.k2_unchecked(params))
    }

    fn k2_unchecked(&self, params: &FluidParams) -> Complex64 {
        let g2 = params.gamma2();
        let x = g2 * self.a / self.k1;
        -(params.beta / self.k1) * x / (1.0 + x / self.lambda) + g2 / self.k
    }

    /// `K₃` with `(η_λ/K)·c = β²/((α+β)K₁) + K₃/λ`.
    pub fn k3(&self, params: &FluidParams) -> Result<Complex64, SymbolError> {
        self.check_smallness(params)?;
        let ab = params.alpha + params.beta;
        let d = ab * self.lambda + params.gamma2();
        let first = params.alpha * params.beta * params.gamma2() / (ab * self.k1) * self.lambda / d;
        Ok(first + self.k2_unchecked(params) * self.c)
    }

    pub fn m(&self, x: f64) -> Complex64 {
        kernel_m_ab(self.a, self.b, x)
    }
}

pub fn symbol_a(pt: &SymbolPoint, params: &FluidParams) -> Result<Complex64, SymbolError> {
    Ok(Symbols::at(pt, params)?.a)
}

pub fn symbol_b(pt: &SymbolPoint, params: &FluidParams) -> Result<Complex64, SymbolError> {
    Ok(Symbols::at(pt, params)?.b)
}

pub fn symbol_k(pt: &SymbolPoint, params: &FluidParams) -> Result<Complex64, SymbolError> {
    Ok(Symbols::at(pt, params)?.k)
}

pub fn symbol_k1(pt: &SymbolPoint, params: &FluidParams) -> Result<Complex64, SymbolError> {
    Ok(Symbols::at(pt, params)?.k1)
}

pub fn symbol_k2(pt: &SymbolPoint, params: &FluidParams) -> Result<Complex64, SymbolError> {
    Symbols::at(pt, params)?.k2(params)
}

pub fn symbol_k3(pt: &SymbolPoint, params: &FluidParams) -> Result<Complex64, SymbolError> {
    Symbols::at(pt, params)?.k3(params)
}

fn gl16() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = NonZeroUsize::new(16).expect("nonzero");
        GaussLegendre::new(n)
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .collect()
    })
}

/// `e^z − 1` without cancellation for small `|z|`.
pub fn expm1(z: Complex64) -> Complex64 {
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    Complex64::new(z.re.exp_m1() * c - 2.0 * half * half, z.re.exp() * s)
}

/// Difference-quotient branch of `𝓜`, written around the slower exponential so
/// that neither factor overflows.
pub fn kernel_m_direct(a: Complex64, b: Complex64, x: f64) -> Complex64 {
    let (slow, fast) = if a.re <= b.re { (a, b) } else { (b, a) };
    // e^{-slow x} - e^{-fast x} = -e^{-slow x} expm1(-(fast - slow) x), then divide by (slow - fast)
    let num = -(-slow * x).exp() * expm1(-(fast - slow) * x);
    num / (slow - fast)
}

/// Integral branch `𝓜 = −x∫₀¹ e^{−((1−θ)A+θB)x} dθ` with 16-node Gauss–Legendre.
pub fn kernel_m_integral(a: Complex64, b: Complex64, x: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(theta, w) in gl16() {
        acc += w * (-((1.0 - theta) * a + theta * b) * x).exp();
    }
    -x * acc
}

/// `𝓜(x) = (e^{−Ax} − e^{−Bx})/(A−B)` with the stable branch switch at [`TAU_M`].
pub fn kernel_m_ab(a: Complex64, b: Complex64, x: f64) -> Complex64 {
    if (a - b).norm() < TAU_M * (a.norm() + b.norm()) {
        kernel_m_integral(a, b, x)
    } else {
        kernel_m_direct(a, b, x)
    }
}

pub fn kernel_m(pt: &SymbolPoint, params: &FluidParams, x: f64) -> Result<Complex64, SymbolError> {
    Ok(Symbols::at(pt, params)?.m(x))
}

/// `∂ⁿ_x 𝓜 = (−1)ⁿ(Aⁿ𝓜 + ((Aⁿ−Bⁿ)/(A−B)) e^{−Bx})`, the divided power expanded as a sum.
pub fn kernel_m_dn(a: Complex64, b: Complex64, x: f64, n: u32) -> Complex64 {
    if n == 0 {
        return kernel_m_ab(a, b, x);
    }
    let mut divided = Complex64::new(0.0, 0.0);
    for i in 0..n {
        divided += a.powu(i) * b.powu(n - 1 - i);
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * (a.powu(n) * kernel_m_ab(a, b, x) + divided * (-b * x).exp())
}

/// The boundary kernels `𝓟₁ … 𝓟₄`.
pub fn kernel_p(j: usize, pt: &SymbolPoint, params: &FluidParams, x: f64, y: f64) -> Result<Complex64, SymbolError> {
    let s = Symbols::at(pt, params)?;
    kernel_p_sym(j, &s, x, y)
}

pub fn kernel_p_sym(j: usize, s: &Symbols, x: f64, y: f64) -> Result<Complex64, SymbolError> {
    let b = s.b;
    Ok(match j {
        1 => b * (-b * (x + y)).exp(),
        2 => b * b * (-b * x).exp() * s.m(y),
        3 => b * b * s.m(x) * (-b * y).exp(),
        4 => b * b * b * s.m(x) * s.m(y),
        _ => return Err(SymbolError::KernelIndex(j)),
    })
}

/// Concrete admissibility floors of the sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    /// Smallest sampled radius above which `|γ²A/(K₁λ)| ≤ 1/2` everywhere.
    pub lambda1: f64,
    /// `max(λ₁, 2γ²/(α+β))`.
    pub lambda2: f64,
}

/// Estimates `λ₁` and `λ₂` by sampling the sector boundary region and tangential
/// frequencies in `[0, xi_max]`.
pub fn thresholds(params: &FluidParams, epsilon: f64, xi_max: f64) -> Thresholds {
    let ratio = 1.02_f64;
    let radii: Vec<f64> = (0..)
        .map(|i| 1e-3 * ratio.powi(i))
        .take_while(|&r| r < 1e5)
        .collect();
    let n_theta = 97;
    let mut xis = vec![0.0];
    let n_xi = 64;
    for i in 0..n_xi {
        xis.push(1e-2 * (xi_max.max(1e-2) / 1e-2).powf(i as f64 / (n_xi - 1) as f64));
    }
    let probe = SectorSpec { epsilon, nu0: f64::MIN_POSITIVE };
    let mut worst_radius = 0.0_f64;
    for &r in radii.iter().rev() {
        let mut violated = false;
        for it in 0..n_theta {
            let theta = -(PI - epsilon) + 2.0 * (PI - epsilon) * it as f64 / (n_theta - 1) as f64;
            let lambda = Complex64::from_polar(r, theta);
            if !in_sector(lambda, &probe, params) {
                continue;
            }
            for &xi in &xis {
                if let Ok(s) = Symbols::new(params, lambda, xi * xi) {
                    if s.smallness(params) > 0.5 {
                        violated = true;
                        break;
                    }
                }
            }
            if violated {
                break;
            }
        }
        if violated {
            worst_radius = r * ratio;
            break;
        }
    }
    let lambda1 = worst_radius;
    let lambda2 = lambda1.max(2.0 * params.disc_scale());
    Thresholds { lambda1, lambda2 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit() -> FluidParams {
        FluidParams::new(1.0, 0.0, 1.0, 2).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(FluidParams::new(0.0, 1.0, 1.0, 2).is_err());
        assert!(FluidParams::new(1.0, -1.0, 1.0, 2).is_err());
        assert!(FluidParams::new(1.0, 0.0, 0.0, 2).is_err());
        assert!(FluidParams::new(1.0, 0.0, 1.0, 4).is_err());
        assert!(SectorSpec::new(PI / 2.0, 1.0).is_err());
        assert!(SectorSpec::new(0.3, 1.0).is_ok());
    }

    #[test]
    fn sector_membership_examples() {
        let params = FluidParams::new(1.0, 0.5, 1.0, 2).unwrap();
        let spec = SectorSpec::new(0.1, 2.0).unwrap();
        assert!(in_sector(c(2.0, 0.0), &spec, &params));
        assert!(!in_sector(c(-2.0, 0.0), &spec, &params));
        assert_eq!(sector_violation(c(-2.0, 0.0), &spec, &params), Some(SectorViolation::Angle));
        // Large modulus on the edge ray: check the disc inequality by hand.
        let nu0 = 50.0;
        let spec = SectorSpec::new(0.1, nu0).unwrap();
        let lam = Complex64::from_polar(nu0, PI - 0.1);
        let cc = params.gamma_c.powi(2) / (params.alpha + params.beta) + 0.1;
        assert!((lam.re + cc).powi(2) + lam.im.powi(2) >= cc * cc);
        assert!(in_sector(lam * 1.0000001, &spec, &params));
    }

    #[test]
    fn eta_examples() {
        let p = |beta: f64, g: f64| FluidParams::new(1.0, beta, g, 2).unwrap();
        assert_eq!(eta_lambda(c(1.0, 0.0), &p(1.0, 1.0)).unwrap(), c(2.0, 0.0));
        assert!((eta_lambda(c(0.0, 1.0), &p(0.0, 1.0)).unwrap() - c(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(eta_lambda(c(2.0, 0.0), &p(1.0, 2.0)).unwrap(), c(3.0, 0.0));
        assert_eq!(eta_lambda(c(0.0, 0.0), &p(1.0, 1.0)), Err(SymbolError::ZeroLambda));
    }

    #[test]
    fn p_examples() {
        assert!((p_lambda(c(1.0, 0.0), &unit()).unwrap() - 0.5).norm() < 1e-15);
        let p11 = FluidParams::new(1.0, 1.0, 1.0, 2).unwrap();
        assert!((p_lambda(c(1.0, 0.0), &p11).unwrap() - 1.0 / 3.0).norm() < 1e-15);
        let p = FluidParams::new(1.0, 1.0, 2.0, 2).unwrap();
        assert!(matches!(p_lambda(c(-2.0, 0.0), &p), Err(SymbolError::SingularP(_))));
    }

    #[test]
    fn symbol_examples_at_unit_point() {
        let pt = SymbolPoint::new(c(1.0, 0.0), vec![0.0]);
        let params = unit();
        assert!((symbol_b(&pt, &params).unwrap() - 1.0).norm() < 1e-15);
        let a = symbol_a(&pt, &params).unwrap();
        assert!((a - 0.5_f64.sqrt()).norm() < 1e-15);
        assert!((symbol_k(&pt, &params).unwrap() - (2.0 * 0.5_f64.sqrt() + 1.0)).norm() < 1e-14);
        assert!((symbol_k1(&pt, &params).unwrap() - (0.5_f64.sqrt() + 1.0)).norm() < 1e-14);
    }

    #[test]
    fn branch_cut_is_rejected() {
        assert!(matches!(sqrt_re_pos(c(-1.0, 0.0)), Err(SymbolError::BranchCut(_))));
        let r = sqrt_re_pos(c(-1.0, 1e-300)).unwrap();
        assert!(r.re >= 0.0);
    }

    #[test]
    fn kernel_m_examples() {
        let (a, b) = (c(2.0, 0.0), c(1.0, 0.0));
        assert_eq!(kernel_m_ab(a, b, 0.0), c(0.0, 0.0));
        let expected = (-2.0_f64).exp() - (-1.0_f64).exp();
        assert!((kernel_m_ab(a, b, 1.0) - expected).norm() < 1e-15);
        let a = c(1.3, 0.4);
        let x = 0.7;
        let limit = -x * (-a * x).exp();
        assert!((kernel_m_ab(a, a, x) - limit).norm() < 1e-15);
        // difference quotient from first principles at |A-B| = 1e-6
        let b = a + c(1e-6, 0.0);
        let dq = ((-a * x).exp() - (-b * x).exp()) / (a - b);
        assert!((kernel_m_ab(a, b, x) - dq).norm() < 1e-9);
    }

    #[test]
    fn kernel_m_derivatives_match_finite_differences() {
        let (a, b) = (c(1.7, 0.6), c(2.4, -0.3));
        for &x in &[0.05, 0.4, 1.5] {
            for n in 1..=3u32 {
                let h = 1e-4;
                let fd = (kernel_m_dn(a, b, x + h, n - 1) - kernel_m_dn(a, b, x - h, n - 1)) / (2.0 * h);
                let an = kernel_m_dn(a, b, x, n);
                assert!((fd - an).norm() < 1e-6 * (1.0 + an.norm()), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn kernel_p_examples() {
        let params = FluidParams::new(1.0, 0.5, 1.0, 2).unwrap();
        let pt = SymbolPoint::new(c(3.0, 1.0), vec![0.7]);
        let b = symbol_b(&pt, &params).unwrap();
        assert!((kernel_p(1, &pt, &params, 0.0, 0.0).unwrap() - b).norm() < 1e-15);
        assert_eq!(kernel_p(3, &pt, &params, 0.0, 1.3).unwrap(), c(0.0, 0.0));
        assert!(kernel_p(5, &pt, &params, 0.0, 0.0).is_err());
    }

    #[test]
    fn k2_rejects_points_outside_the_smallness_region() {
        let params = FluidParams::new(1.0, 0.5, 3.0, 2).unwrap();
        let pt = SymbolPoint::new(c(0.5, 0.0), vec![0.0]);
        assert!(matches!(symbol_k2(&pt, &params), Err(SymbolError::SmallnessViolated { .. })));
    }

    #[test]
    fn thresholds_bound_the_smallness_quantity() {
        let params = FluidParams::new(1.0, 0.5, 1.0, 2).unwrap();
        let t = thresholds(&params, PI / 4.0, 25.0);
        assert!(t.lambda2 >= 2.0 * params.disc_scale());
        assert!(t.lambda2 >= t.lambda1);
        let spec = SectorSpec::new(PI / 4.0, t.lambda1.max(1e-9)).unwrap();
        for i in 0..200 {
            let th = -(PI - 0.8) + (2.0 * PI - 1.6) * i as f64 / 199.0;
            let lam = Complex64::from_polar(t.lambda1 * 1.01, th);
            if !in_sector(lam, &spec, &params) {
                continue;
            }
            for &xi in &[0.0, 0.3, 3.0, 25.0] {
                let s = Symbols::new(&params, lam, xi * xi).unwrap();
                assert!(s.smallness(&params) <= 0.5 + 1e-12);
            }
        }
    }
}
