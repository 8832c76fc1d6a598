//! Seeded corpora of smooth test data: sums of Gaussian bumps placed away from the wall.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::grid_fourier::{Field, HalfGrid};

/// Placement of the Gaussian bumps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpSpec {
    pub normal_center: (f64, f64),
    pub tangential_center: (f64, f64),
    pub width: (f64, f64),
    pub bumps: usize,
}

impl Default for BumpSpec {
    fn default() -> Self {
        Self { normal_center: (3.8, 4.2), tangential_center: (-2.0, 2.0), width: (0.5, 0.7), bumps: 2 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Bump {
    center: [f64; 3],
    width: f64,
    amp: f64,
}

impl Bump {
    fn eval(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().zip(&self.center).map(|(a, c)| (a - c) * (a - c)).sum();
        self.amp * (-r2 / (self.width * self.width)).exp()
    }
}

fn draw(rng: &mut ChaCha8Rng, spec: &BumpSpec, dim: usize) -> Vec<Bump> {
    (0..spec.bumps)
        .map(|_| {
            let mut center = [0.0; 3];
            for c in center.iter_mut().take(dim - 1) {
                *c = rng.random_range(spec.tangential_center.0..spec.tangential_center.1);
            }
            center[dim - 1] = rng.random_range(spec.normal_center.0..spec.normal_center.1);
            let width = rng.random_range(spec.width.0..spec.width.1);
            let amp = rng.random_range(0.5..1.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            Bump { center, width, amp }
        })
        .collect()
}

/// A real field whose components are independent bump sums.
pub fn random_field(grid: &Arc<HalfGrid>, ncomp: usize, spec: &BumpSpec, rng: &mut ChaCha8Rng) -> Field {
    let dim = grid.dim;
    let comps: Vec<Vec<Bump>> = (0..ncomp).map(|_| draw(rng, spec, dim)).collect();
    Field::from_fn(grid, ncomp, |x, out| {
        for (o, bumps) in out.iter_mut().zip(&comps) {
            *o = Complex64::new(bumps.iter().map(|b| b.eval(x)).sum(), 0.0);
        }
    })
}

/// `count` data pairs `(f, g)` from one seed.
pub fn data_corpus(grid: &Arc<HalfGrid>, count: usize, seed: u64, spec: &BumpSpec) -> Vec<(Field, Field)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (random_field(grid, 1, spec, &mut rng), random_field(grid, grid.dim, spec, &mut rng))).collect()
}

/// Rough tangential velocity: half-octave cosines `ξ^{−r}cos(ξx₁)` up to just
/// below the tangential Nyquist frequency, under a Gaussian envelope centred at
/// `x_N = Y_max/2`. Its `B^r` block norms stay flat across the resolved band.
pub fn rate_witness(grid: &Arc<HalfGrid>, r: f64) -> Field {
    let dim = grid.dim;
    let base = std::f64::consts::PI / grid.tangential.half_period;
    let top = grid.tangential.modes / 2;
    let mut modes = Vec::new();
    let mut j = 0;
    loop {
        let m = (4.0 * 2f64.powf(0.5 * j as f64)).round() as usize;
        if m >= top {
            break;
        }
        modes.push(base * m as f64);
        j += 1;
    }
    let yc = 0.5 * grid.normal.y_max;
    Field::from_fn(grid, dim, |x, out| {
        let tang: f64 = x[1..dim - 1].iter().map(|v| v * v).sum::<f64>() + 0.25 * x[0] * x[0];
        let env = (-tang - (x[dim - 1] - yc).powi(2)).exp();
        let wave: f64 = modes.iter().map(|&k| k.powf(-r) * (k * x[0]).cos()).sum();
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        out[0] = Complex64::new(env * wave, 0.0);
    })
}

/// Deterministic generator for sample points.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible_and_vanishes_near_the_wall() {
        let grid = HalfGrid::new(2, 8.0, 32, 8.0, 32).unwrap();
        let a = data_corpus(&grid, 2, 11, &BumpSpec::default());
        let b = data_corpus(&grid, 2, 11, &BumpSpec::default());
        assert_eq!(a[1].1.data(), b[1].1.data());
        assert!(a[0].1.boundary_l2() < 1e-12 * a[0].1.l2_norm());
        assert!(a.iter().all(|(f, g)| f.imag_l2_norm() == 0.0 && g.imag_l2_norm() == 0.0));
    }
}
