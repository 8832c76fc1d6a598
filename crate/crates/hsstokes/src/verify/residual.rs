//! Residuals of the resolvent system, computed from the fields alone.

use num_complex::Complex64;
use serde::Serialize;

use crate::grid_fourier::{DiffOp, Field, GridError};
use crate::spectral_core::FluidParams;

/// Relative residuals; `abs_*` hold the unnormalized norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residuals {
    /// `‖λρ + γ div u − f‖ / (‖f‖ + γ‖div u‖)`.
    pub eq1: f64,
    /// Interior `‖λu − αΔu − β∇div u + γ∇ρ − g‖ / (‖g‖ + ‖γλ⁻¹∇f‖)`.
    pub eq2: f64,
    /// `‖u(·, 0)‖ / ‖u‖`.
    pub boundary: f64,
    pub abs_eq1: f64,
    pub abs_eq2: f64,
    pub abs_boundary: f64,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

pub fn residual_resolvent(lambda: Complex64, f: &Field, g: &Field, rho: &Field, u: &Field, params: &FluidParams) -> Result<Residuals, GridError> {
    for other in [g, rho, u] {
        if !f.same_grid(other) {
            return Err(GridError::Shape("fields live on different grids".into()));
        }
    }
    let gamma = params.gamma_c;
    let div = u.differentiate(DiffOp::Divergence)?;
    let r1 = rho.scaled(lambda).axpy(Complex64::new(gamma, 0.0), &div)?.sub(f)?;
    let abs_eq1 = r1.l2_norm();
    let eq1 = ratio(abs_eq1, f.l2_norm() + gamma * div.l2_norm());

    let lap = u.differentiate(DiffOp::Laplacian)?;
    let grad_div = div.differentiate(DiffOp::Gradient)?;
    let grad_rho = rho.differentiate(DiffOp::Gradient)?;
    let r2 = u
        .scaled(lambda)
        .axpy(Complex64::new(-params.alpha, 0.0), &lap)?
        .axpy(Complex64::new(-params.beta, 0.0), &grad_div)?
        .axpy(Complex64::new(gamma, 0.0), &grad_rho)?
        .sub(g)?;
    let abs_eq2 = r2.interior_l2();
    let grad_f = f.differentiate(DiffOp::Gradient)?.scaled(gamma / lambda);
    let eq2 = ratio(abs_eq2, g.l2_norm() + grad_f.l2_norm());

    let abs_boundary = u.boundary_l2();
    let boundary = ratio(abs_boundary, u.l2_norm());
    Ok(Residuals { eq1, eq2, boundary, abs_eq1, abs_eq2, abs_boundary })
}
