//! The analytic semigroup by quadrature of the Dunford integral
//!
//! ```text
//! T(t)(ρ₀, u₀) = (1/2πi) ∫_{Γ+γ} e^{λt} (R(λ), S(λ))(ρ₀, u₀) dλ,
//! Γ± = {γ + r e^{±i(π−ε)} : r > 0}.
//! ```
//!
//! Nodes are geometric in `r` with trapezoidal weights in `log r`, plus a
//! two-point Gauss rule on the segment between the vertex and `r_min`. One set of
//! resolvent solves serves every evaluation time, so all times of interest
//! are requested together.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::besov::{gradient_parity, BesovError, BesovParams, NormContext};
use crate::grid_fourier::{Field, GridError, Parity, Repr};
use crate::resolvent_halfspace::{HalfError, HalfSpaceSolver};
use crate::spectral_core::{in_sector, FluidParams, SectorSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContourError {
    #[error("invalid contour: {0}")]
    Invalid(String),
    #[error("shift {shift:.4e} could not be raised until all nodes lie in the sector")]
    ShiftTooSmall { shift: f64 },
    #[error("evaluation time {t:.4e} must be positive and at least the design time {t_min:.4e}")]
    Time { t: f64, t_min: f64 },
    #[error(transparent)]
    Solve(#[from] HalfError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Norm(#[from] BesovError),
}

/// Construction parameters of a contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub epsilon: f64,
    /// `None` starts from `2λ₀`.
    pub gamma_shift: Option<f64>,
    /// `r_min = r_min_factor·λ₀`.
    pub r_min_factor: f64,
    /// Smallest evaluation time the truncation must support.
    pub t_min: f64,
    /// Step in `log r`; the node count per ray follows from the range.
    pub log_step: f64,
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self { epsilon: std::f64::consts::FRAC_PI_4, gamma_shift: None, r_min_factor: 1e-7, t_min: 1e-4, log_step: 0.2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourNode {
    pub lambda: Complex64,
    /// Includes `dλ/ds` and the `1/(2πi)` factor.
    pub weight: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Contour {
    pub gamma_shift: f64,
    pub epsilon: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub t_min: f64,
    /// Upper ray first, then the conjugate lower ray in the same order.
    pub nodes: Vec<ContourNode>,
}

/// Two-point Gauss rule on `[0, 1]` for the segment between the vertex and `r_min`.
const VERTEX_RULE: [(f64, f64); 2] = [(0.211_324_865_405_187_1, 0.5), (0.788_675_134_594_812_9, 0.5)];

/// Vertex segment `r ∈ [0, r_min]`, then `n` geometric nodes up to `r_max`.
fn upper_ray(shift: f64, epsilon: f64, r_min: f64, r_max: f64, n: usize) -> Vec<ContourNode> {
    let dir = Complex64::from_polar(1.0, std::f64::consts::PI - epsilon);
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let ds = (r_max / r_min).ln() / (n - 1) as f64;
    let vertex = VERTEX_RULE.iter().map(|&(x, w)| ContourNode { lambda: shift + r_min * x * dir, weight: dir * r_min * w / two_pi_i });
    // the first log-node weight carries the Euler-Maclaurin correction for an integrand ∝ r near the vertex
    let first = 1.0 / (1.0 - (-ds).exp()) - 1.0 / ds;
    let rays = (0..n).map(|j| {
        let r = r_min * (ds * j as f64).exp();
        let trap = if j == 0 {
            first
        } else if j == n - 1 {
            0.5
        } else {
            1.0
        };
        ContourNode { lambda: shift + r * dir, weight: dir * r * ds * trap / two_pi_i }
    });
    vertex.chain(rays).collect()
}

fn with_lower(upper: Vec<ContourNode>) -> Vec<ContourNode> {
    let lower: Vec<ContourNode> = upper.iter().map(|nd| ContourNode { lambda: nd.lambda.conj(), weight: nd.weight.conj() }).collect();
    upper.into_iter().chain(lower).collect()
}

/// Builds `Γ + γ` for the sector `Λ_{ε,λ₀}`.
pub fn build_contour(spec: &ContourSpec, lambda0: f64, params: &FluidParams) -> Result<Contour, ContourError> {
    if !(spec.epsilon > 0.0 && spec.epsilon < std::f64::consts::FRAC_PI_2) {
        return Err(ContourError::Invalid(format!("epsilon {} outside (0, π/2)", spec.epsilon)));
    }
    if !(lambda0 > 0.0) || !(spec.t_min > 0.0) || !(spec.log_step > 0.0) || !(spec.r_min_factor > 0.0) {
        return Err(ContourError::Invalid("lambda0, t_min, log_step and r_min_factor must be positive".into()));
    }
    let sector = SectorSpec { epsilon: spec.epsilon, nu0: lambda0 };
    let r_min = spec.r_min_factor * lambda0;
    let r_max = (50.0 / spec.t_min).max(10.0 * lambda0);
    let n = ((r_max / r_min).ln() / spec.log_step).ceil() as usize + 1;
    let mut shift = spec.gamma_shift.unwrap_or(2.0 * lambda0);
    for _ in 0..200 {
        let upper = upper_ray(shift, spec.epsilon, r_min, r_max, n);
        if upper.iter().all(|nd| in_sector(nd.lambda, &sector, params) && in_sector(nd.lambda.conj(), &sector, params)) {
            return Ok(Contour { gamma_shift: shift, epsilon: spec.epsilon, r_min, r_max, t_min: spec.t_min, nodes: with_lower(upper) });
        }
        shift *= 1.1;
    }
    Err(ContourError::ShiftTooSmall { shift })
}

impl Contour {
    pub fn nodes_per_ray(&self) -> usize {
        self.nodes.len() / 2
    }

    /// Same rays with every log-step halved.
    pub fn refined(&self) -> Contour {
        let m = 2 * (self.nodes_per_ray() - VERTEX_RULE.len()) - 1;
        let upper = upper_ray(self.gamma_shift, self.epsilon, self.r_min, self.r_max, m);
        Contour { nodes: with_lower(upper), ..self.clone() }
    }

    fn check_times(&self, times: &[f64]) -> Result<(), ContourError> {
        for &t in times {
            if !(t > 0.0) || t < self.t_min * (1.0 - 1e-12) {
                return Err(ContourError::Time { t, t_min: self.t_min });
            }
        }
        Ok(())
    }
}

/// `(ρ, u)` at time `t`.
#[derive(Debug, Clone)]
pub struct EvolutionState {
    pub rho: Field,
    pub u: Field,
    pub t: f64,
}

impl EvolutionState {
    pub fn new(rho: Field, u: Field) -> Self {
        Self { rho, u, t: 0.0 }
    }

    pub fn zeros_like(&self) -> Self {
        Self { rho: self.rho.scaled(Complex64::new(0.0, 0.0)), u: self.u.scaled(Complex64::new(0.0, 0.0)), t: self.t }
    }

    /// Discrete `L₂` norm of the pair.
    pub fn l2_norm(&self) -> f64 {
        (self.rho.l2_norm().powi(2) + self.u.l2_norm().powi(2)).sqrt()
    }

    pub fn imag_l2_norm(&self) -> f64 {
        (self.rho.imag_l2_norm().powi(2) + self.u.imag_l2_norm().powi(2)).sqrt()
    }

    pub fn sub(&self, other: &EvolutionState) -> Result<EvolutionState, GridError> {
        Ok(EvolutionState { rho: self.rho.sub(&other.rho)?, u: self.u.sub(&other.u)?, t: self.t })
    }

    pub fn scaled(&self, s: f64) -> EvolutionState {
        let c = Complex64::new(s, 0.0);
        EvolutionState { rho: self.rho.scaled(c), u: self.u.scaled(c), t: self.t }
    }

    /// Drops the imaginary parts, keeping the physical representation.
    pub fn real_part(&self) -> EvolutionState {
        let strip = |f: &Field| {
            let mut f = f.to_physical();
            f.data_mut().iter_mut().for_each(|z| z.im = 0.0);
            f
        };
        EvolutionState { rho: strip(&self.rho), u: strip(&self.u), t: self.t }
    }

    fn is_real(&self) -> bool {
        let r = self.rho.to_physical();
        let u = self.u.to_physical();
        r.data().iter().chain(u.data()).all(|z| z.im == 0.0)
    }
}

/// Whether to use `R(λ̄)x = conj(R(λ)x)` for real data and solve on `Γ₊` only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    BothRays,
    FoldConjugate,
}

const CHUNK: usize = 8;

/// Generic contour sum: `Σ_j w_j e^{λ_j t} X_j` for every `t`, where `X_j`
/// is a list of fields produced by `solve(λ_j)`.
fn contour_sum<F>(contour: &Contour, times: &[f64], fold: bool, solve: F) -> Result<Vec<Vec<Field>>, ContourError>
where
    F: Fn(Complex64) -> Result<Vec<Field>, ContourError> + Sync,
{
    contour.check_times(times)?;
    let nodes: &[ContourNode] = if fold { &contour.nodes[..contour.nodes_per_ray()] } else { &contour.nodes };
    let mut acc: Option<Vec<Vec<Field>>> = None;
    for chunk in nodes.chunks(CHUNK) {
        let solved: Vec<Result<Vec<Field>, ContourError>> = chunk.par_iter().map(|nd| solve(nd.lambda)).collect();
        for (nd, x) in chunk.iter().zip(solved) {
            let x = x?;
            let acc = acc.get_or_insert_with(|| times.iter().map(|_| x.iter().map(|f| f.scaled(Complex64::new(0.0, 0.0))).collect()).collect());
            for (ti, &t) in times.iter().enumerate() {
                let factor = nd.weight * (nd.lambda * t).exp();
                for (a, f) in acc[ti].iter_mut().zip(&x) {
                    let f = f.to_repr(a.repr());
                    for (o, v) in a.data_mut().iter_mut().zip(f.data()) {
                        *o += factor * v;
                    }
                }
            }
        }
    }
    let mut acc = acc.ok_or_else(|| ContourError::Invalid("contour has no nodes".into()))?;
    if fold {
        for per_t in acc.iter_mut() {
            for f in per_t.iter_mut() {
                f.data_mut().iter_mut().for_each(|z| *z = Complex64::new(2.0 * z.re, 0.0));
            }
        }
    }
    Ok(acc)
}

fn use_fold(symmetry: Symmetry, state: &EvolutionState) -> bool {
    symmetry == Symmetry::FoldConjugate && state.is_real()
}

/// `T(t)s₀` for every requested time from one set of resolvent solves.
pub fn apply_t_many(times: &[f64], state0: &EvolutionState, contour: &Contour, solver: &HalfSpaceSolver, symmetry: Symmetry) -> Result<Vec<EvolutionState>, ContourError> {
    let fold = use_fold(symmetry, state0);
    let f = state0.rho.to_physical();
    let g = state0.u.to_physical();
    let sums = contour_sum(contour, times, fold, |lambda| {
        let (rho, u) = solver.solve(lambda, &f, &g)?;
        Ok(vec![rho, u])
    })?;
    Ok(sums
        .into_iter()
        .zip(times)
        .map(|(mut v, &t)| {
            let u = v.pop().expect("two outputs");
            let rho = v.pop().expect("two outputs");
            EvolutionState { rho: rho.to_physical(), u: u.to_physical(), t }
        })
        .collect())
}

pub fn apply_t(t: f64, state0: &EvolutionState, contour: &Contour, solver: &HalfSpaceSolver) -> Result<EvolutionState, ContourError> {
    Ok(apply_t_many(&[t], state0, contour, solver, Symmetry::BothRays)?.remove(0))
}

/// `T₁(t)u₀`, `T₂(t)(ρ₀,u₀)` and `T₃(t)(ρ₀,u₀)` at one time.
#[derive(Debug, Clone)]
pub struct SemigroupParts {
    pub t: f64,
    pub t1_u: Field,
    pub t2_u: Field,
    pub t3_rho: Field,
}

impl SemigroupParts {
    pub fn recombined(&self) -> Result<EvolutionState, GridError> {
        Ok(EvolutionState { rho: self.t3_rho.clone(), u: self.t1_u.add(&self.t2_u)?, t: self.t })
    }
}

pub fn apply_t_parts_many(times: &[f64], state0: &EvolutionState, contour: &Contour, solver: &HalfSpaceSolver, symmetry: Symmetry) -> Result<Vec<SemigroupParts>, ContourError> {
    let fold = use_fold(symmetry, state0);
    let f = state0.rho.to_physical();
    let g = state0.u.to_physical();
    let sums = contour_sum(contour, times, fold, |lambda| {
        let s = solver.split_operators(lambda, &f, &g)?;
        Ok(vec![s.s1, s.s2, s.r])
    })?;
    Ok(sums
        .into_iter()
        .zip(times)
        .map(|(v, &t)| SemigroupParts { t, t1_u: v[0].to_physical(), t2_u: v[1].to_physical(), t3_rho: v[2].to_physical() })
        .collect())
}

pub fn apply_t_parts(t: f64, state0: &EvolutionState, contour: &Contour, solver: &HalfSpaceSolver) -> Result<SemigroupParts, ContourError> {
    Ok(apply_t_parts_many(&[t], state0, contour, solver, Symmetry::BothRays)?.remove(0))
}

/// The generator `𝓐(ρ, v) = (γ div v, −αΔv − β∇div v + γ∇ρ)`.
pub fn generator(state: &EvolutionState, params: &FluidParams) -> Result<EvolutionState, GridError> {
    use crate::grid_fourier::DiffOp;
    let div = state.u.differentiate(DiffOp::Divergence)?;
    let rho = div.scaled(Complex64::new(params.gamma_c, 0.0));
    let lap = state.u.differentiate(DiffOp::Laplacian)?;
    let grad_div = div.differentiate(DiffOp::Gradient)?;
    let grad_rho = state.rho.differentiate(DiffOp::Gradient)?;
    let u = lap
        .scaled(Complex64::new(-params.alpha, 0.0))
        .axpy(Complex64::new(-params.beta, 0.0), &grad_div)?
        .axpy(Complex64::new(params.gamma_c, 0.0), &grad_rho)?;
    Ok(EvolutionState { rho: rho.to_physical(), u: u.to_physical(), t: state.t })
}

/// Geometric time grid with `per_decade` points per decade, including both ends.
pub fn log_time_grid(t_min: f64, t_end: f64, per_decade: usize) -> Vec<f64> {
    let decades = (t_end / t_min).log10();
    let n = (decades * per_decade as f64).round().max(1.0) as usize;
    (0..=n).map(|i| t_min * (t_end / t_min).powf(i as f64 / n as f64)).collect()
}

/// Norms entering the maximal-regularity integral.
#[derive(Debug, Clone, Copy)]
pub struct StateNorms {
    /// `‖ρ‖_{B^{s+1}} + ‖u‖_{B^{s+2}}`.
    pub d_norm: f64,
    /// `‖ρ‖_{B^{s+1}} + ‖u‖_{B^s}`.
    pub h_norm: f64,
}

/// `𝓓^s` and `𝓗^s` norms; `‖u‖_{B^{s+2}}` is `‖u‖_{B^s} + ‖∇²u‖_{B^s}`.
pub fn state_norms(state: &EvolutionState, ctx: &NormContext, bp: &BesovParams) -> Result<StateNorms, ContourError> {
    let dim = ctx.grid.dim;
    let vp = Parity::velocity(dim);
    let rho_b = ctx.block_norms(&state.rho, &[Parity::Even], bp.q)?.besov(bp.s + 1.0, bp.r);
    let u_b = ctx.block_norms(&state.u, &vp, bp.q)?.besov(bp.s, bp.r);
    let hess = ctx.hessian_block_norms(&state.u, &vp, bp.q)?.besov(bp.s, bp.r);
    Ok(StateNorms { d_norm: rho_b + u_b + hess, h_norm: rho_b + u_b })
}

/// `‖(ρ, u)‖_{𝓗^s} = ‖ρ‖_{B^{s+1}} + ‖u‖_{B^s}`.
pub fn h_norm(state: &EvolutionState, ctx: &NormContext, bp: &BesovParams) -> Result<f64, ContourError> {
    let dim = ctx.grid.dim;
    let rho_b = ctx.block_norms(&state.rho, &[Parity::Even], bp.q)?.besov(bp.s + 1.0, bp.r);
    let u_b = ctx.block_norms(&state.u, &Parity::velocity(dim), bp.q)?.besov(bp.s, bp.r);
    Ok(rho_b + u_b)
}

#[derive(Debug, Clone, Serialize)]
pub struct L1Report {
    pub t_min: f64,
    pub t_end: f64,
    pub integral: f64,
    pub initial_norm: f64,
    pub ratio: f64,
    pub times: Vec<f64>,
    /// `e^{−γt}‖T(t)s₀‖_𝓓` at each time.
    pub integrand: Vec<f64>,
}

/// Trapezoid in `log t` of `e^{−γt}‖T(t)s₀‖_𝓓` over precomputed states.
pub fn l1_from_states(states: &[EvolutionState], gamma_shift: f64, initial_norm: f64, ctx: &NormContext, bp: &BesovParams) -> Result<L1Report, ContourError> {
    if states.len() < 2 {
        return Err(ContourError::Invalid("need at least two times".into()));
    }
    let mut integrand = Vec::with_capacity(states.len());
    for s in states {
        integrand.push((-gamma_shift * s.t).exp() * state_norms(s, ctx, bp)?.d_norm);
    }
    let times: Vec<f64> = states.iter().map(|s| s.t).collect();
    let mut integral = 0.0;
    for i in 1..times.len() {
        let dl = (times[i] / times[i - 1]).ln();
        integral += 0.5 * dl * (integrand[i] * times[i] + integrand[i - 1] * times[i - 1]);
    }
    let ratio = if initial_norm > 0.0 { integral / initial_norm } else { 0.0 };
    Ok(L1Report { t_min: times[0], t_end: *times.last().expect("nonempty"), integral, initial_norm, ratio, times, integrand })
}

/// `∫_{t_min}^{T_end} e^{−γt}(‖ρ(t)‖_{B^{s+1}} + ‖u(t)‖_{B^{s+2}}) dt` with 12 points per decade.
#[allow(clippy::too_many_arguments)]
pub fn l1_maximal_integral(
    state0: &EvolutionState,
    t_min: f64,
    t_end: f64,
    contour: &Contour,
    solver: &HalfSpaceSolver,
    ctx: &NormContext,
    bp: &BesovParams,
    symmetry: Symmetry,
) -> Result<L1Report, ContourError> {
    if !(t_min > 0.0) || !(t_end > t_min) {
        return Err(ContourError::Time { t: t_min, t_min: contour.t_min });
    }
    let times = log_time_grid(t_min, t_end, 12);
    let initial = h_norm(state0, ctx, bp)?;
    if state0.l2_norm() == 0.0 {
        let integrand = vec![0.0; times.len()];
        return Ok(L1Report { t_min, t_end, integral: 0.0, initial_norm: 0.0, ratio: 0.0, times, integrand });
    }
    let states = apply_t_many(&times, state0, contour, solver, symmetry)?;
    l1_from_states(&states, contour.gamma_shift, initial, ctx, bp)
}

/// Parities of the state components `(ρ, u)`, used for norms of derivatives.
pub fn state_parity(dim: usize) -> (Vec<Parity>, Vec<Parity>) {
    (vec![Parity::Even], Parity::velocity(dim))
}

#[doc(hidden)]
pub fn gradient_parities(dim: usize) -> Vec<Parity> {
    gradient_parity(&Parity::velocity(dim), dim)
}

/// Zero state on the solver grid.
pub fn zero_state(solver: &HalfSpaceSolver) -> EvolutionState {
    EvolutionState::new(Field::zeros(&solver.grid, 1, Repr::Physical), Field::zeros(&solver.grid, solver.grid.dim, Repr::Physical))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_fourier::HalfGrid;

    fn setup() -> (HalfSpaceSolver, Contour) {
        let grid = HalfGrid::new(2, 8.0, 64, 8.0, 64).unwrap();
        let params = FluidParams::new(1.0, 0.5, 1.0, 2).unwrap();
        let lambda0 = 4.0 / 3.0;
        let sector = SectorSpec::new(std::f64::consts::FRAC_PI_4, lambda0).unwrap();
        let solver = HalfSpaceSolver::new(params, sector, grid).unwrap();
        let spec = ContourSpec { t_min: 0.05, log_step: 0.25, ..ContourSpec::default() };
        (solver, build_contour(&spec, lambda0, &params).unwrap())
    }

    fn state(solver: &HalfSpaceSolver) -> EvolutionState {
        let bump = |x: &[f64], c0: f64, c1: f64| (-((x[0] - c0).powi(2) + (x[1] - c1).powi(2)) / 0.5).exp();
        let rho = Field::from_fn(&solver.grid, 1, |x, out| out[0] = Complex64::new(bump(x, 0.3, 4.0), 0.0));
        let u = Field::from_fn(&solver.grid, 2, |x, out| {
            out[0] = Complex64::new(bump(x, -0.5, 4.1), 0.0);
            out[1] = Complex64::new(0.5 * bump(x, 0.8, 3.9), 0.0);
        });
        EvolutionState::new(rho, u)
    }

    #[test]
    fn nodes_are_admissible_and_conjugate() {
        let (solver, c) = setup();
        let n = c.nodes_per_ray();
        for j in 0..n {
            assert_eq!(c.nodes[j].lambda.conj(), c.nodes[n + j].lambda);
            assert_eq!(c.nodes[j].weight.conj(), c.nodes[n + j].weight);
        }
        assert!(c.nodes.iter().all(|nd| in_sector(nd.lambda, &solver.sector, &solver.params)));
        assert!(build_contour(&ContourSpec { epsilon: 2.0, ..ContourSpec::default() }, 1.0, &solver.params).is_err());
    }

    #[test]
    fn real_data_evolves_to_real_states_and_parts_recombine() {
        let (solver, c) = setup();
        let s0 = state(&solver);
        let full = apply_t(0.2, &s0, &c, &solver).unwrap();
        assert!(full.imag_l2_norm() < 1e-10 * full.l2_norm());
        let folded = apply_t_many(&[0.2], &s0, &c, &solver, Symmetry::FoldConjugate).unwrap().remove(0);
        assert!(folded.sub(&full).unwrap().l2_norm() < 1e-10 * full.l2_norm());
        let parts = apply_t_parts(0.2, &s0, &c, &solver).unwrap().recombined().unwrap();
        assert!(parts.sub(&full).unwrap().l2_norm() < 1e-10 * full.l2_norm());
        assert!(apply_t(0.01, &s0, &c, &solver).is_err());
    }

    #[test]
    fn zero_state_stays_zero() {
        let (solver, c) = setup();
        let z = zero_state(&solver);
        assert_eq!(apply_t(0.1, &z, &c, &solver).unwrap().l2_norm(), 0.0);
        let ctx = NormContext::new(&solver.grid).unwrap();
        let bp = BesovParams::new(0.0, 2.0, 1.0).unwrap();
        let r = l1_maximal_integral(&z, 0.05, 1.0, &c, &solver, &ctx, &bp, Symmetry::FoldConjugate).unwrap();
        assert_eq!(r.integral, 0.0);
    }

    #[test]
    fn time_grid_is_geometric() {
        let g = log_time_grid(1e-3, 10.0, 12);
        assert_eq!(g.len(), 49);
        assert!((g[0] - 1e-3).abs() < 1e-18 && (g[48] - 10.0).abs() < 1e-12);
        assert!((g[12] - 1e-2).abs() < 1e-15);
    }
}
