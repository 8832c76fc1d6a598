//! Whole-space solution operator of the complex Lamé system
//! `λu − αΔu − η_λ∇div u = g`, applied mode by mode:
//!
//! ```text
//! Ŝ⁰(λ, ξ) = I/(λ+α|ξ|²) − c(λ) ξ⊗ξ /((λ+α|ξ|²)(p(λ)+|ξ|²)),
//! c(λ) = (βλ+γ²)/((α+β)λ+γ²) = β/(α+β) + q(λ)/λ.
//! ```
//!
//! The split `S⁰ = T⁰₁ + T⁰₂` keeps the `λ`-independent coefficient
//! `β/(α+β)` in `T⁰₁` and moves the `q(λ)/λ` part into `T⁰₂`.

use num_complex::Complex64;
use thiserror::Error;

use crate::grid_fourier::{DiffOp, GridError, WholeField};
use crate::spectral_core::{c_lambda, eta_lambda, p_lambda, q_lambda, sector_violation, FluidParams, SectorSpec, SectorViolation, SymbolError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WholeError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error("lambda = {lambda} is not admissible: {violation}")]
    Inadmissible { lambda: Complex64, violation: SectorViolation },
    #[error("|lambda| = {modulus:.4e} is not above gamma_c^2/(alpha+beta) = {bound:.4e}")]
    SeriesRegion { modulus: f64, bound: f64 },
    #[error(transparent)]
    Grid(#[from] GridError),
}

pub fn check_admissible(lambda: Complex64, params: &FluidParams, sector: &SectorSpec) -> Result<(), WholeError> {
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(SymbolError::ZeroLambda.into());
    }
    match sector_violation(lambda, sector, params) {
        Some(violation) => Err(WholeError::Inadmissible { lambda, violation }),
        None => Ok(()),
    }
}

/// `u` together with the optional `(T⁰₁g, T⁰₂g)` pair.
#[derive(Debug, Clone)]
pub struct WholeResolventOutput {
    pub u: WholeField,
    pub parts: Option<(WholeField, WholeField)>,
}

/// `λ`-dependent scalars shared by every mode.
#[derive(Debug, Clone, Copy)]
struct Coeffs {
    lambda: Complex64,
    alpha: f64,
    p: Complex64,
    c: Complex64,
    /// `q(λ)/λ`
    q_over: Complex64,
    dc: Complex64,
    dp: Complex64,
}

impl Coeffs {
    fn new(lambda: Complex64, params: &FluidParams) -> Result<Self, WholeError> {
        let p = p_lambda(lambda, params)?;
        let c = c_lambda(lambda, params)?;
        let q_over = q_lambda(lambda, params)? / lambda;
        let g2 = params.gamma2();
        let ab = params.alpha + params.beta;
        let d = ab * lambda + g2;
        let d2 = d * d;
        Ok(Self { lambda, alpha: params.alpha, p, c, q_over, dc: -params.alpha * g2 / d2, dp: lambda * (ab * lambda + 2.0 * g2) / d2 })
    }

    /// `(1/L, 1/(L P))` with `L = λ+α|ξ|²`, `P = p+|ξ|²`.
    fn denominators(&self, xi2: f64) -> (Complex64, Complex64) {
        let inv_l = 1.0 / (self.lambda + self.alpha * xi2);
        (inv_l, inv_l / (self.p + xi2))
    }

    /// `λ`-derivatives of `1/L` and `1/(LP)`.
    fn d_denominators(&self, xi2: f64) -> (Complex64, Complex64) {
        let (inv_l, b) = self.denominators(xi2);
        let inv_p = 1.0 / (self.p + xi2);
        (-inv_l * inv_l, -b * (inv_l + self.dp * inv_p))
    }
}

/// Which per-mode operator `diag·I + off·ξ⊗ξ` to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    Full,
    T01,
    T02,
    DFull,
    DT01,
    DT02,
}

fn mode_coeffs(k: &Coeffs, part: Part, xi2: f64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let (inv_l, b) = k.denominators(xi2);
    let beta_part = k.c - k.q_over;
    match part {
        Part::Full => (inv_l, -k.c * b),
        Part::T01 => (inv_l, -beta_part * b),
        Part::T02 => (zero, -k.q_over * b),
        Part::DFull | Part::DT01 | Part::DT02 => {
            let (dl, db) = k.d_denominators(xi2);
            // d(q/λ)/dλ = dc since β/(α+β) is constant
            let dt02 = -(k.dc * b + k.q_over * db);
            let dfull = -(k.dc * b + k.c * db);
            match part {
                Part::DFull => (dl, dfull),
                Part::DT01 => (dl, dfull - dt02),
                _ => (zero, dt02),
            }
        }
    }
}

fn apply_part(k: &Coeffs, part: Part, g: &WholeField) -> Result<WholeField, WholeError> {
    let dim = g.dim();
    if g.ncomp() != dim {
        return Err(GridError::Shape(format!("expected a {dim}-vector, got {} components", g.ncomp())).into());
    }
    let spec = g.to_spectral();
    let n = g.len();
    let src = spec.data();
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    for m in 0..n {
        if g.touches_nyquist(m) {
            continue;
        }
        let xi = g.frequency(m);
        let xi2: f64 = xi[..dim].iter().map(|x| x * x).sum();
        let (diag, off) = mode_coeffs(k, part, xi2);
        let dot: Complex64 = (0..dim).map(|c| src[c * n + m] * xi[c]).sum();
        for c in 0..dim {
            out[c * n + m] = diag * src[c * n + m] + off * xi[c] * dot;
        }
    }
    Ok(WholeField::from_data(g.tangential, g.axis, dim, crate::grid_fourier::Repr::Spectral, out)?)
}

fn series_region(lambda: Complex64, params: &FluidParams) -> Result<(), WholeError> {
    let bound = params.gamma2() / (params.alpha + params.beta);
    if lambda.norm() <= bound {
        return Err(WholeError::SeriesRegion { modulus: lambda.norm(), bound });
    }
    Ok(())
}

/// `S⁰(λ)g`, returned in spectral representation.
pub fn apply_s0(lambda: Complex64, g: &WholeField, params: &FluidParams, sector: &SectorSpec) -> Result<WholeField, WholeError> {
    check_admissible(lambda, params, sector)?;
    apply_part(&Coeffs::new(lambda, params)?, Part::Full, g)
}

/// `(T⁰₁g, T⁰₂g)`, both spectral.
pub fn apply_s0_parts(lambda: Complex64, g: &WholeField, params: &FluidParams, sector: &SectorSpec) -> Result<(WholeField, WholeField), WholeError> {
    check_admissible(lambda, params, sector)?;
    series_region(lambda, params)?;
    let k = Coeffs::new(lambda, params)?;
    Ok((apply_part(&k, Part::T01, g)?, apply_part(&k, Part::T02, g)?))
}

/// `S⁰(λ)g` with its split attached.
pub fn solve_whole(lambda: Complex64, g: &WholeField, params: &FluidParams, sector: &SectorSpec) -> Result<WholeResolventOutput, WholeError> {
    let (t1, t2) = apply_s0_parts(lambda, g, params, sector)?;
    let u = t1.axpy(Complex64::new(1.0, 0.0), &t2)?;
    Ok(WholeResolventOutput { u, parts: Some((t1, t2)) })
}

/// `∂_λS⁰(λ)g`, spectral.
pub fn apply_ds0(lambda: Complex64, g: &WholeField, params: &FluidParams, sector: &SectorSpec) -> Result<WholeField, WholeError> {
    check_admissible(lambda, params, sector)?;
    apply_part(&Coeffs::new(lambda, params)?, Part::DFull, g)
}

/// `(∂_λT⁰₁g, ∂_λT⁰₂g)`, spectral.
pub fn apply_ds0_parts(lambda: Complex64, g: &WholeField, params: &FluidParams, sector: &SectorSpec) -> Result<(WholeField, WholeField), WholeError> {
    check_admissible(lambda, params, sector)?;
    series_region(lambda, params)?;
    let k = Coeffs::new(lambda, params)?;
    Ok((apply_part(&k, Part::DT01, g)?, apply_part(&k, Part::DT02, g)?))
}

/// `ζ(1/λ) = λ(η_λ/(α(α+η_λ)) − β/(α(α+β)))`, the closed form of the series.
pub fn zeta(lambda: Complex64, params: &FluidParams) -> Result<Complex64, WholeError> {
    series_region(lambda, params)?;
    let eta = eta_lambda(lambda, params)?;
    let a = params.alpha;
    Ok(lambda * (eta / (a * (a + eta)) - params.beta / (a * (a + params.beta))))
}

/// Dense `N×N` symbol matrix of `S⁰(λ)` at frequency `ξ`.
pub fn s0_symbol_matrix(lambda: Complex64, xi: &[f64], params: &FluidParams) -> Result<Vec<Vec<Complex64>>, WholeError> {
    let k = Coeffs::new(lambda, params)?;
    let xi2: f64 = xi.iter().map(|x| x * x).sum();
    let (diag, off) = mode_coeffs(&k, Part::Full, xi2);
    Ok((0..xi.len())
        .map(|i| (0..xi.len()).map(|j| off * xi[i] * xi[j] + if i == j { diag } else { Complex64::new(0.0, 0.0) }).collect())
        .collect())
}

/// `λu − αΔu − η_λ∇div u`, in the representation of `u`.
pub fn lame_operator(lambda: Complex64, u: &WholeField, params: &FluidParams) -> Result<WholeField, WholeError> {
    let eta = eta_lambda(lambda, params)?;
    let lap = u.differentiate(DiffOp::Laplacian)?;
    let grad_div = u.differentiate(DiffOp::Divergence)?.differentiate(DiffOp::Gradient)?;
    let out = u.scaled(lambda).axpy(Complex64::new(-params.alpha, 0.0), &lap)?.axpy(-eta, &grad_div)?;
    Ok(out.to_repr(u.repr()))
}
