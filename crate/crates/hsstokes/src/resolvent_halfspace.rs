//! Half-space resolvent: `(f, g) ↦ (ρ, u)` with `u|_{x_N=0} = 0`.
//!
//! After eliminating `ρ = λ⁻¹(f − γ div u)` the velocity solves the complex
//! Lamé system with data `g − γλ⁻¹∇f`. Its solution is the whole-space part
//! `S⁰(λ)G` of the reflected data `G`, restricted to `x_N > 0`, plus a boundary
//! corrector `w` that cancels the wall trace. In tangential Fourier variables,
//! with `e = e^{−Bx_N}`, `𝓜` the two-mode kernel and `s = iξ'·h'`,
//!
//! ```text
//! w_j = h_j e − iξ_j (η_λ/K) 𝓜 s,   w_N = A (η_λ/K) 𝓜 s,
//! ```
//!
//! where `h = −𝓕'[S⁰G](ξ', 0)` is computed from closed-form `ξ_N` integrals
//! against `g` on the normal grid, never from sampled whole-space values.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::grid_fourier::{restrict_with_transfer, BoxAxis, BoxTransfer, DiffOp, Field, GridError, HalfGrid, Parity, Repr};
use crate::resolvent_wholespace::{apply_s0, apply_s0_parts, check_admissible, WholeError};
use crate::spectral_core::{kernel_m_ab, kernel_m_dn, FluidParams, SectorSpec, SymbolError, Symbols};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HalfError {
    #[error(transparent)]
    Whole(#[from] WholeError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Trace data per tangential frequency (flat spectral index).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCoefficients {
    pub lambda: Complex64,
    /// `h` with `N` entries per frequency; the last entry is always zero.
    pub h: Vec<Vec<Complex64>>,
    /// `a_j = ∫ e^{−By}/B ĝ_j dy` for `j < N`.
    pub a: Vec<Vec<Complex64>>,
    /// Scalar with `Σ_k ∫ h⁽²⁾_{jk} ĝ_k dy = ξ_j β_s`.
    pub beta_s: Vec<Complex64>,
}

/// Residual summary attached to a solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    pub eq1: f64,
    pub eq2: f64,
    pub boundary: f64,
}

#[derive(Debug, Clone)]
pub struct ResolventSolution {
    pub rho: Field,
    pub u: Field,
    pub diagnostics: Option<Diagnostics>,
}

/// `S¹(λ)g`, `S²(λ)(f,g)` and `R(λ)(f,g)`.
#[derive(Debug, Clone)]
pub struct SplitSolution {
    pub s1: Field,
    pub s2: Field,
    pub r: Field,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CorrectorPart {
    /// The compact form built from `h`.
    Full,
    /// `β/K₁` and `β²/((α+β)K₁)` blocks.
    First,
    /// `q/λ`, `K₂/λ` and `K₃/λ` blocks.
    Second,
}

/// Closed forms of the `ξ_N`-integrals behind the trace of the whole-space solution.
///
/// `h⁽¹⁾_j = h1`, `h⁽²⁾_{jk} = ξ_jξ_k e`, `h⁽²⁾_{jN} = iξ_j m_apb`; the rows with a normal
/// first index vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceKernels {
    pub h1: Complex64,
    pub e: Complex64,
    pub m_apb: Complex64,
}

pub fn trace_kernels(a: Complex64, b: Complex64, y: f64) -> TraceKernels {
    let apb = a + b;
    let eb = (-b * y).exp();
    let m = kernel_m_ab(a, b, y);
    TraceKernels { h1: eb / b, e: -m / (a * apb) + eb / (a * b * apb), m_apb: m / apb }
}

/// Solver bound to one grid, one solve box and one admissible sector.
#[derive(Debug, Clone)]
pub struct HalfSpaceSolver {
    pub params: FluidParams,
    pub sector: SectorSpec,
    pub grid: Arc<HalfGrid>,
    transfer: BoxTransfer,
}

impl HalfSpaceSolver {
    /// Solve box `[−4Y_max, 4Y_max)` at the tangential spacing.
    pub fn new(params: FluidParams, sector: SectorSpec, grid: Arc<HalfGrid>) -> Result<Self, HalfError> {
        let half = 4.0 * grid.normal.y_max;
        let points = ((2.0 * half / grid.tangential.spacing()).round() as usize).max(16).next_power_of_two();
        let axis = BoxAxis::new(half, points)?;
        Self::with_box(params, sector, grid, axis)
    }

    pub fn with_box(params: FluidParams, sector: SectorSpec, grid: Arc<HalfGrid>, axis: BoxAxis) -> Result<Self, HalfError> {
        params.validate()?;
        sector.validate()?;
        if params.dim != grid.dim {
            return Err(GridError::Shape(format!("parameters for N = {} on a grid with N = {}", params.dim, grid.dim)).into());
        }
        if axis.half < grid.normal.y_max {
            return Err(GridError::Invalid(format!("solve box half {} is below Y_max {}", axis.half, grid.normal.y_max)).into());
        }
        let transfer = BoxTransfer::new(&grid.normal, axis);
        Ok(Self { params, sector, grid, transfer })
    }

    pub fn solve_box(&self) -> BoxAxis {
        self.transfer.axis
    }

    pub fn check(&self, lambda: Complex64) -> Result<(), HalfError> {
        Ok(check_admissible(lambda, &self.params, &self.sector)?)
    }

    fn check_vector(&self, g: &Field) -> Result<(), HalfError> {
        if !g.same_grid(&Field::zeros(&self.grid, 1, Repr::Physical)) {
            return Err(GridError::Shape("field is not on the solver grid".into()).into());
        }
        if g.ncomp() != self.grid.dim {
            return Err(GridError::Shape(format!("expected {} components, got {}", self.grid.dim, g.ncomp())).into());
        }
        Ok(())
    }

    fn symbols(&self, lambda: Complex64, t: usize) -> Result<Symbols, HalfError> {
        Ok(Symbols::new(&self.params, lambda, self.grid.tangential.xi2(t))?)
    }

    /// `h = −𝓕'[S⁰(λ)G](ξ', 0)` by normal-grid quadrature of the closed-form kernels.
    pub fn boundary_coefficients(&self, lambda: Complex64, g: &Field) -> Result<BoundaryCoefficients, HalfError> {
        self.check(lambda)?;
        self.check_vector(g)?;
        let gs = g.to_spectral();
        let grid = &self.grid;
        let dim = grid.dim;
        let nt = grid.nt();
        let alpha = self.params.alpha;
        let nodes = &grid.normal.nodes;
        let weights = &grid.normal.weights;
        let mut out = BoundaryCoefficients { lambda, h: Vec::with_capacity(nt), a: Vec::with_capacity(nt), beta_s: Vec::with_capacity(nt) };
        for t in 0..nt {
            if grid.tangential.touches_nyquist(t) {
                out.h.push(vec![ZERO; dim]);
                out.a.push(vec![ZERO; dim - 1]);
                out.beta_s.push(ZERO);
                continue;
            }
            let s = self.symbols(lambda, t)?;
            let xi = grid.tangential.xi(t);
            let (a_sym, b_sym) = (s.a, s.b);
            let mut a = vec![ZERO; dim - 1];
            let mut beta_s = ZERO;
            let normal = gs.column(dim - 1, t);
            for (i, (&y, &w)) in nodes.iter().zip(weights).enumerate() {
                let k = trace_kernels(a_sym, b_sym, y);
                let mut xi_dot = ZERO;
                for j in 0..dim - 1 {
                    let gj = gs.column(j, t)[i];
                    a[j] += w * k.h1 * gj;
                    xi_dot += xi[j] * gj;
                }
                beta_s += w * (k.e * xi_dot + I * k.m_apb * normal[i]);
            }
            let mut h = vec![ZERO; dim];
            for j in 0..dim - 1 {
                h[j] = (-a[j] + s.c * xi[j] * beta_s) / alpha;
            }
            out.h.push(h);
            out.a.push(a);
            out.beta_s.push(beta_s);
        }
        Ok(out)
    }

    fn corrector(&self, coeffs: &BoundaryCoefficients, part: CorrectorPart, order: u32) -> Result<Field, HalfError> {
        let lambda = coeffs.lambda;
        self.check(lambda)?;
        let grid = &self.grid;
        let dim = grid.dim;
        let nt = grid.nt();
        if coeffs.h.len() != nt {
            return Err(GridError::Shape(format!("{} trace columns for {} frequencies", coeffs.h.len(), nt)).into());
        }
        let p = &self.params;
        let alpha = p.alpha;
        let ab = p.alpha + p.beta;
        let mut w = Field::zeros(grid, dim, Repr::Spectral);
        for t in 0..nt {
            if grid.tangential.touches_nyquist(t) {
                continue;
            }
            let s = self.symbols(lambda, t)?;
            let xi = grid.tangential.xi(t);
            let xi2 = self.grid.tangential.xi2(t);
            let (ecoef, q) = match part {
                CorrectorPart::Full => {
                    let h = &coeffs.h[t];
                    let sh: Complex64 = (0..dim - 1).map(|j| I * xi[j] * h[j]).sum();
                    ((0..dim - 1).map(|j| h[j]).collect::<Vec<_>>(), -(s.eta / s.k) * sh)
                }
                CorrectorPart::First | CorrectorPart::Second => {
                    let a = &coeffs.a[t];
                    let bs = coeffs.beta_s[t];
                    let sa: Complex64 = (0..dim - 1).map(|j| I * xi[j] * a[j]).sum();
                    let sb = I * xi2 * bs;
                    if part == CorrectorPart::First {
                        let e: Vec<Complex64> = (0..dim - 1).map(|j| (-a[j] + p.beta / ab * xi[j] * bs) / alpha).collect();
                        (e, (p.beta / s.k1 * sa - p.beta * p.beta / (ab * s.k1) * sb) / alpha)
                    } else {
                        let (k2, k3) = (s.k2(p)?, s.k3(p)?);
                        let e: Vec<Complex64> = (0..dim - 1).map(|j| s.q / (alpha * lambda) * xi[j] * bs).collect();
                        (e, (k2 * sa - k3 * sb) / (alpha * lambda))
                    }
                }
            };
            let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
            let b_pow = sign * s.b.powu(order);
            for (i, &x) in grid.normal.nodes.iter().enumerate() {
                let e = b_pow * (-s.b * x).exp();
                let m = kernel_m_dn(s.a, s.b, x, order);
                for j in 0..dim - 1 {
                    w.column_mut(j, t)[i] = ecoef[j] * e + I * xi[j] * m * q;
                }
                w.column_mut(dim - 1, t)[i] = -s.a * m * q;
            }
        }
        Ok(w.to_physical())
    }

    /// The corrector `w` built from trace coefficients.
    pub fn apply_corrector_w(&self, coeffs: &BoundaryCoefficients) -> Result<Field, HalfError> {
        self.corrector(coeffs, CorrectorPart::Full, 0)
    }

    /// `∂_N^ℓ w` from the analytic kernel derivatives.
    pub fn corrector_normal_derivative(&self, coeffs: &BoundaryCoefficients, order: u32) -> Result<Field, HalfError> {
        self.corrector(coeffs, CorrectorPart::Full, order)
    }

    /// The `β/K₁` and `λ⁻¹` blocks of the corrector, summing to `w`.
    pub fn corrector_parts(&self, coeffs: &BoundaryCoefficients) -> Result<(Field, Field), HalfError> {
        Ok((self.corrector(coeffs, CorrectorPart::First, 0)?, self.corrector(coeffs, CorrectorPart::Second, 0)?))
    }

    fn reflect(&self, g: &Field) -> crate::grid_fourier::WholeField {
        crate::grid_fourier::extend_with_transfer(&self.transfer, g, &Parity::velocity(self.grid.dim))
    }

    fn restrict(&self, w: &crate::grid_fourier::WholeField) -> Result<Field, HalfError> {
        Ok(restrict_with_transfer(&self.transfer, w, &self.grid, Some(&Parity::velocity(self.grid.dim)))?)
    }

    /// Restriction of `S⁰(λ)G` to the half grid.
    pub fn whole_part(&self, lambda: Complex64, g: &Field) -> Result<Field, HalfError> {
        self.check_vector(g)?;
        let big = apply_s0(lambda, &self.reflect(g), &self.params, &self.sector)?;
        self.restrict(&big)
    }

    /// Velocity of the Lamé problem `λu − αΔu − η_λ∇div u = g`, `u|_{x_N=0} = 0`.
    pub fn solve_lame(&self, lambda: Complex64, g: &Field) -> Result<Field, HalfError> {
        let u0 = self.whole_part(lambda, g)?;
        let w = self.apply_corrector_w(&self.boundary_coefficients(lambda, g)?)?;
        Ok(u0.add(&w)?)
    }

    /// `g − γλ⁻¹∇f`.
    pub fn reduced_data(&self, lambda: Complex64, f: &Field, g: &Field) -> Result<Field, HalfError> {
        if f.ncomp() != 1 || !f.same_grid(g) {
            return Err(GridError::Shape("f must be a scalar field on the grid of g".into()).into());
        }
        let grad = f.differentiate(DiffOp::Gradient)?;
        Ok(g.axpy(-self.params.gamma_c / lambda, &grad)?.to_physical())
    }

    /// `ρ = λ⁻¹(f − γ div u)`.
    pub fn density(&self, lambda: Complex64, f: &Field, u: &Field) -> Result<Field, HalfError> {
        let div = u.differentiate(DiffOp::Divergence)?;
        Ok(f.axpy(Complex64::new(-self.params.gamma_c, 0.0), &div)?.scaled(1.0 / lambda).to_physical())
    }

    /// `(ρ, u)` without residual diagnostics.
    pub fn solve(&self, lambda: Complex64, f: &Field, g: &Field) -> Result<(Field, Field), HalfError> {
        self.check(lambda)?;
        self.check_vector(g)?;
        let data = self.reduced_data(lambda, f, g)?;
        let u = self.solve_lame(lambda, &data)?;
        let rho = self.density(lambda, f, &u)?;
        Ok((rho, u))
    }

    /// `(ρ, u)` with residuals of both equations and the wall trace.
    pub fn solve_resolvent(&self, lambda: Complex64, f: &Field, g: &Field) -> Result<ResolventSolution, HalfError> {
        let (rho, u) = self.solve(lambda, f, g)?;
        let r = crate::verify::residual::residual_resolvent(lambda, f, g, &rho, &u, &self.params)?;
        Ok(ResolventSolution { rho, u, diagnostics: Some(Diagnostics { eq1: r.eq1, eq2: r.eq2, boundary: r.boundary }) })
    }

    /// `S¹(λ)g = T⁰₁G + w⁽¹⁾`, `S²(λ)(f,g) = T⁰₂G + w⁽²⁾ + u[−γλ⁻¹∇f]`, `R(λ)(f,g) = ρ`.
    pub fn split_operators(&self, lambda: Complex64, f: &Field, g: &Field) -> Result<SplitSolution, HalfError> {
        self.check(lambda)?;
        self.check_vector(g)?;
        let (t01, t02) = apply_s0_parts(lambda, &self.reflect(g), &self.params, &self.sector)?;
        let coeffs = self.boundary_coefficients(lambda, g)?;
        let (w1, w2) = self.corrector_parts(&coeffs)?;
        let s1 = self.restrict(&t01)?.add(&w1)?;
        let zero_g = Field::zeros(&self.grid, self.grid.dim, Repr::Physical);
        let f_part = self.solve_lame(lambda, &self.reduced_data(lambda, f, &zero_g)?)?;
        let s2 = self.restrict(&t02)?.add(&w2)?.add(&f_part)?;
        let u = s1.add(&s2)?;
        let r = self.density(lambda, f, &u)?;
        Ok(SplitSolution { s1, s2, r })
    }

    /// `S¹(λ)g` alone.
    pub fn apply_s1(&self, lambda: Complex64, g: &Field) -> Result<Field, HalfError> {
        self.check(lambda)?;
        self.check_vector(g)?;
        let (t01, _) = apply_s0_parts(lambda, &self.reflect(g), &self.params, &self.sector)?;
        let coeffs = self.boundary_coefficients(lambda, g)?;
        let w1 = self.corrector(&coeffs, CorrectorPart::First, 0)?;
        Ok(self.restrict(&t01)?.add(&w1)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> HalfSpaceSolver {
        let grid = HalfGrid::new(2, 8.0, 64, 8.0, 96).unwrap();
        let params = FluidParams::new(1.0, 0.5, 1.0, 2).unwrap();
        let sector = SectorSpec::new(std::f64::consts::FRAC_PI_4, 1.0).unwrap();
        HalfSpaceSolver::new(params, sector, grid).unwrap()
    }

    fn data(solver: &HalfSpaceSolver) -> (Field, Field) {
        let grid = &solver.grid;
        let bump = |x: &[f64], c0: f64, c1: f64, w: f64| (-((x[0] - c0).powi(2) + (x[1] - c1).powi(2)) / (w * w)).exp();
        let f = Field::from_fn(grid, 1, |x, out| out[0] = Complex64::new(bump(x, 0.5, 4.0, 0.6), 0.0));
        let g = Field::from_fn(grid, 2, |x, out| {
            out[0] = Complex64::new(bump(x, -0.7, 3.9, 0.55), 0.0);
            out[1] = Complex64::new(-0.5 * bump(x, 1.0, 4.1, 0.65), 0.0);
        });
        (f, g)
    }

    #[test]
    fn zero_data_gives_zero_solution() {
        let s = setup();
        let f = Field::zeros(&s.grid, 1, Repr::Physical);
        let g = Field::zeros(&s.grid, 2, Repr::Physical);
        let (rho, u) = s.solve(Complex64::new(3.0, 1.0), &f, &g).unwrap();
        assert_eq!(rho.max_abs(), 0.0);
        assert_eq!(u.max_abs(), 0.0);
    }

    #[test]
    fn corrector_traces_and_normal_row() {
        let s = setup();
        let (_, g) = data(&s);
        let lambda = Complex64::new(2.0, 3.0);
        let c = s.boundary_coefficients(lambda, &g).unwrap();
        assert!(c.h.iter().all(|h| h[1] == ZERO));
        let w = s.apply_corrector_w(&c).unwrap().to_spectral();
        for t in 0..s.grid.nt() {
            assert!((w.column(0, t)[0] - c.h[t][0]).norm() < 1e-14 * (1.0 + c.h[t][0].norm()));
            assert!(w.column(1, t)[0].norm() < 1e-15);
        }
        let zero = BoundaryCoefficients { lambda, h: vec![vec![ZERO; 2]; s.grid.nt()], a: vec![vec![ZERO; 1]; s.grid.nt()], beta_s: vec![ZERO; s.grid.nt()] };
        assert_eq!(s.apply_corrector_w(&zero).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn normal_only_data_has_zero_normal_trace_row() {
        let s = setup();
        let g = Field::from_fn(&s.grid, 2, |x, out| out[1] = Complex64::new((-(x[0] * x[0]) - (x[1] - 4.0).powi(2) / 0.4).exp(), 0.0));
        let c = s.boundary_coefficients(Complex64::new(5.0, 0.0), &g).unwrap();
        for t in 0..s.grid.nt() {
            assert_eq!(c.h[t][1], ZERO);
            assert!(c.a[t][0].norm() == 0.0);
        }
    }

    #[test]
    fn corrector_solves_homogeneous_lame_system() {
        let s = setup();
        let (_, g) = data(&s);
        let lambda = Complex64::new(1.5, 2.0);
        let w = s.apply_corrector_w(&s.boundary_coefficients(lambda, &g).unwrap()).unwrap();
        let eta = crate::spectral_core::eta_lambda(lambda, &s.params).unwrap();
        let lap = w.differentiate(DiffOp::Laplacian).unwrap();
        let gd = w.differentiate(DiffOp::Divergence).unwrap().differentiate(DiffOp::Gradient).unwrap();
        let r = w.scaled(lambda).axpy(Complex64::new(-s.params.alpha, 0.0), &lap).unwrap().axpy(-eta, &gd).unwrap();
        assert!(r.interior_l2() < 1e-6 * w.l2_norm() * lambda.norm(), "{} vs {}", r.interior_l2(), w.l2_norm());
    }

    #[test]
    fn analytic_normal_derivative_matches_spectral_one() {
        let s = setup();
        let (_, g) = data(&s);
        let c = s.boundary_coefficients(Complex64::new(3.0, -1.0), &g).unwrap();
        let w = s.apply_corrector_w(&c).unwrap();
        for order in 1..=2 {
            let exact = s.corrector_normal_derivative(&c, order).unwrap();
            let num = w.differentiate(DiffOp::Normal(order)).unwrap();
            assert!(num.sub(&exact).unwrap().max_abs() < 1e-6 * exact.max_abs(), "order {order}");
        }
    }

    #[test]
    fn split_recomposes_solution() {
        let s = setup();
        let (f, g) = data(&s);
        let lambda = Complex64::new(4.0, 6.0);
        let (rho, u) = s.solve(lambda, &f, &g).unwrap();
        let split = s.split_operators(lambda, &f, &g).unwrap();
        let u2 = split.s1.add(&split.s2).unwrap();
        assert!(u2.sub(&u).unwrap().l2_norm() < 1e-10 * u.l2_norm());
        assert!(split.r.sub(&rho).unwrap().l2_norm() < 1e-10 * rho.l2_norm());
        let c = s.boundary_coefficients(lambda, &g).unwrap();
        let (w1, w2) = s.corrector_parts(&c).unwrap();
        let w = s.apply_corrector_w(&c).unwrap();
        assert!(w1.add(&w2).unwrap().sub(&w).unwrap().max_abs() < 1e-10 * w.max_abs().max(1e-300));
        let s1 = s.apply_s1(lambda, &g).unwrap();
        assert!(s1.sub(&split.s1).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn inadmissible_lambda_is_rejected() {
        let s = setup();
        let (f, g) = data(&s);
        assert!(matches!(s.solve(Complex64::new(0.5, 0.0), &f, &g), Err(HalfError::Whole(WholeError::Inadmissible { .. }))));
    }
}
