use std::f64::consts::PI;

use hsstokes::grid_fourier::{Field, HalfGrid};
use hsstokes::resolvent_halfspace::HalfSpaceSolver;
use hsstokes::semigroup::{apply_t_many, build_contour, zero_state, ContourSpec, EvolutionState, Symmetry};
use hsstokes::spectral_core::thresholds;
use hsstokes::verify::residual_resolvent;
use hsstokes::{FluidParams, SectorSpec};
use num_complex::Complex64;

const ALPHA: f64 = 1.0;
const BETA: f64 = 0.5;
const GAMMA: f64 = 1.0;

fn setup(modes: usize, nodes: usize) -> (FluidParams, SectorSpec, HalfSpaceSolver) {
    let params = FluidParams::new(ALPHA, BETA, GAMMA, 2).unwrap();
    let grid = HalfGrid::new(2, 8.0, modes, 8.0, nodes).unwrap();
    let nu0 = thresholds(&params, PI / 4.0, grid.tangential.nyquist()).lambda2;
    let sector = SectorSpec::new(PI / 4.0, nu0).unwrap();
    let solver = HalfSpaceSolver::new(params, sector, grid).unwrap();
    (params, sector, solver)
}

/// Derivatives of `G = exp(−x² − 2(y − 4)²)`: `[G, Gx, Gy, Gxx, Gyy, Gxy]`.
fn gauss(x: f64, y: f64) -> [f64; 6] {
    let (a, b, c) = (1.0, 2.0, 4.0);
    let g = (-a * x * x - b * (y - c).powi(2)).exp();
    let gx = -2.0 * a * x * g;
    let gy = -2.0 * b * (y - c) * g;
    [g, gx, gy, (4.0 * a * a * x * x - 2.0 * a) * g, (4.0 * b * b * (y - c).powi(2) - 2.0 * b) * g, 4.0 * a * b * x * (y - c) * g]
}

/// `ρ = G`, `u = (G, xG)`; the data are computed from the closed-form derivatives.
fn manufactured(solver: &HalfSpaceSolver, lambda: Complex64) -> (Field, Field, Field, Field) {
    let grid = solver.grid.clone();
    let rho = Field::from_fn(&grid, 1, |p, out| out[0] = gauss(p[0], p[1])[0].into());
    let u = Field::from_fn(&grid, 2, |p, out| {
        let [g, ..] = gauss(p[0], p[1]);
        out[0] = g.into();
        out[1] = (p[0] * g).into();
    });
    let f = Field::from_fn(&grid, 1, |p, out| {
        let (x, [g, gx, gy, ..]) = (p[0], gauss(p[0], p[1]));
        out[0] = lambda * g + GAMMA * (gx + x * gy);
    });
    let g = Field::from_fn(&grid, 2, |p, out| {
        let (x, [g, gx, gy, gxx, gyy, gxy]) = (p[0], gauss(p[0], p[1]));
        let div_x = gxx + gy + x * gxy;
        let div_y = gxy + x * gyy;
        let lap1 = gxx + gyy;
        let lap2 = 2.0 * gx + x * gxx + x * gyy;
        out[0] = lambda * g - ALPHA * lap1 - BETA * div_x + GAMMA * gx;
        out[1] = lambda * (x * g) - ALPHA * lap2 - BETA * div_y + GAMMA * gy;
    });
    (f, g, rho, u)
}

fn rel(a: &Field, b: &Field) -> f64 {
    a.sub(b).unwrap().l2_norm() / b.l2_norm()
}

#[test]
fn manufactured_solution_is_recovered() {
    let (params, _, solver) = setup(64, 64);
    for lambda in [Complex64::new(3.0, 2.0), Complex64::new(-0.5, 4.0), Complex64::new(40.0, -30.0)] {
        let (f, g, rho, u) = manufactured(&solver, lambda);
        let (rho_h, u_h) = solver.solve(lambda, &f, &g).unwrap();
        let (er, eu) = (rel(&rho_h, &rho), rel(&u_h, &u));
        assert!(er < 1e-8 && eu < 1e-8, "lambda {lambda}: rho {er:.3e}, u {eu:.3e}");
        let res = residual_resolvent(lambda, &f, &g, &rho_h, &u_h, &params).unwrap();
        assert!(res.eq1 < 1e-10 && res.eq2 < 1e-6 && res.boundary < 1e-8, "{res:?}");
    }
}

fn scalar_error(log_step: f64, t: f64) -> f64 {
    let params = FluidParams::new(ALPHA, BETA, GAMMA, 2).unwrap();
    let spec = ContourSpec { t_min: 1e-3, log_step, ..ContourSpec::default() };
    let contour = build_contour(&spec, 4.0 / 3.0, &params).unwrap();
    let v: Complex64 = contour.nodes.iter().map(|nd| nd.weight * (nd.lambda * t).exp() / (nd.lambda + 1.0)).sum();
    (v - (-t).exp()).norm() / (-t).exp()
}

#[test]
fn scalar_contour_reproduces_exponential() {
    for t in [1e-3, 1e-2, 0.1, 1.0, 2.0] {
        let e = scalar_error(0.2, t);
        assert!(e < 1e-7, "t = {t}: relative error {e:.3e}");
    }
    for t in [3.0, 5.0] {
        let e = scalar_error(0.1, t);
        assert!(e < 1e-8, "t = {t}, halved step: relative error {e:.3e}");
    }
}

#[test]
fn zero_state_stays_zero() {
    let (_, sector, solver) = setup(32, 32);
    let contour = build_contour(&ContourSpec { t_min: 1e-2, ..ContourSpec::default() }, sector.nu0, &solver.params).unwrap();
    let s0 = zero_state(&solver);
    let out = apply_t_many(&[0.01, 1.0], &s0, &contour, &solver, Symmetry::FoldConjugate).unwrap();
    assert!(out.iter().all(|s| s.l2_norm() == 0.0));
}

#[test]
fn times_below_design_are_rejected() {
    let (_, sector, solver) = setup(32, 32);
    let contour = build_contour(&ContourSpec { t_min: 1e-2, ..ContourSpec::default() }, sector.nu0, &solver.params).unwrap();
    let grid = solver.grid.clone();
    let s0 = EvolutionState::new(Field::from_fn(&grid, 1, |p, o| o[0] = gauss(p[0], p[1])[0].into()), Field::zeros(&grid, 2, hsstokes::grid_fourier::Repr::Physical));
    assert!(apply_t_many(&[1e-3], &s0, &contour, &solver, Symmetry::BothRays).is_err());
    assert!(apply_t_many(&[0.0], &s0, &contour, &solver, Symmetry::BothRays).is_err());
}

#[test]
fn lambda_outside_sector_is_rejected() {
    let (_, _, solver) = setup(32, 32);
    let grid = solver.grid.clone();
    let f = Field::zeros(&grid, 1, hsstokes::grid_fourier::Repr::Physical);
    let g = Field::zeros(&grid, 2, hsstokes::grid_fourier::Repr::Physical);
    assert!(solver.solve(Complex64::new(-10.0, 0.5), &f, &g).is_err());
    assert!(solver.solve(Complex64::new(0.1, 0.0), &f, &g).is_err());
}
