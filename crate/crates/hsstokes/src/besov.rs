//! Littlewood–Paley blocks and Besov norms on periodic boxes.
//!
//! The profile is `θ(r) = h(2−r)/(h(2−r)+h(r−1))` with `h(t) = e^{−1/t}` for
//! `t > 0`, so `θ = 1` on `[0,1]` and `θ = 0` on `[2,∞)`. Blocks are
//! `ψ̂(ξ) = θ(|ξ|)` and `φ(2^{−k}ξ)` with `φ(ξ) = θ(|ξ|) − θ(2|ξ|)`, supported
//! in `1/2 ≤ |ξ| ≤ 2`. The top block `J_max` also absorbs every frequency above
//! its shell, so the finite family reconstructs any grid field exactly.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid_fourier::{BoxAxis, BoxTransfer, Field, HalfGrid, Parity, Repr, WholeField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BesovError {
    #[error("grid too coarse: J_max = {0} < 2")]
    TooCoarse(i64),
    #[error("invalid Besov parameters: {0}")]
    Params(String),
    #[error("grid mismatch: {0}")]
    Grid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovParams {
    pub s: f64,
    pub q: f64,
    /// Summation exponent; `f64::INFINITY` selects the supremum.
    pub r: f64,
}

impl BesovParams {
    pub fn new(s: f64, q: f64, r: f64) -> Result<Self, BesovError> {
        let bp = Self { s, q, r };
        bp.validate()?;
        Ok(bp)
    }

    pub fn validate(&self) -> Result<(), BesovError> {
        if !(self.q > 1.0 && self.q.is_finite()) {
            return Err(BesovError::Params(format!("q = {} must lie in (1, ∞)", self.q)));
        }
        if !(self.r >= 1.0) {
            return Err(BesovError::Params(format!("r = {} must be at least 1", self.r)));
        }
        if !self.s.is_finite() {
            return Err(BesovError::Params("s must be finite".into()));
        }
        Ok(())
    }

    /// Whether `−1 + 1/q < s < 1/q`, where reflection gives an equivalent norm.
    pub fn in_extension_range(&self) -> bool {
        let inv = 1.0 / self.q;
        -1.0 + inv < self.s && self.s < inv
    }

    pub fn with_s(&self, s: f64) -> Self {
        Self { s, ..*self }
    }

    /// Largest σ keeping `s ± σ` inside the extension range, halved.
    pub fn default_sigma(&self) -> f64 {
        let inv = 1.0 / self.q;
        (0.5 * (inv - self.s)).min(0.5 * (self.s + 1.0 - inv))
    }
}

fn glue(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Smooth cutoff: 1 on `[0, 1]`, 0 on `[2, ∞)`.
pub fn cutoff(r: f64) -> f64 {
    if r <= 1.0 {
        return 1.0;
    }
    if r >= 2.0 {
        return 0.0;
    }
    let a = glue(2.0 - r);
    a / (a + glue(r - 1.0))
}

/// The radial profile `φ(ξ) = θ(|ξ|) − θ(2|ξ|)`.
pub fn phi_profile(r: f64) -> f64 {
    cutoff(r) - cutoff(2.0 * r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DyadicPartition {
    pub j_max: usize,
}

pub fn build_partition(nyquist: f64) -> Result<DyadicPartition, BesovError> {
    let j = nyquist.log2().floor() as i64 - 1;
    if j < 2 {
        return Err(BesovError::TooCoarse(j));
    }
    Ok(DyadicPartition { j_max: j as usize })
}

impl DyadicPartition {
    pub fn psi_hat(&self, r: f64) -> f64 {
        cutoff(r)
    }

    /// Multiplier of block `k` at `|ξ| = r`; block 0 is `ψ̂`.
    pub fn block(&self, k: usize, r: f64) -> f64 {
        if k == 0 {
            self.psi_hat(r)
        } else if k < self.j_max {
            phi_profile(r / 2f64.powi(k as i32))
        } else {
            1.0 - cutoff(r / 2f64.powi(k as i32 - 1))
        }
    }

    pub fn n_blocks(&self) -> usize {
        self.j_max + 1
    }
}

/// Inverse-transformed blocks `ψ*f, φ₁*f, …, φ_J*f`.
pub fn lp_blocks(f: &WholeField, p: &DyadicPartition) -> Vec<WholeField> {
    let spec = f.to_spectral();
    (0..p.n_blocks())
        .map(|k| spec.apply_multiplier(|xi| Complex64::new(p.block(k, norm(xi)), 0.0)).to_physical())
        .collect()
}

fn norm(xi: &[f64]) -> f64 {
    xi.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Discrete `L_q` norms of every block, reusable across smoothness indices.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockNorms {
    pub q: f64,
    pub norms: Vec<f64>,
}

impl BlockNorms {
    pub fn besov(&self, s: f64, r: f64) -> f64 {
        let weighted = self.norms[1..].iter().enumerate().map(|(i, n)| 2f64.powf(s * (i + 1) as f64) * n);
        self.norms[0] + sequence_sum(weighted, r)
    }

    pub fn add(&self, other: &BlockNorms) -> BlockNorms {
        BlockNorms { q: self.q, norms: self.norms.iter().zip(&other.norms).map(|(a, b)| a + b).collect() }
    }
}

fn sequence_sum(v: impl Iterator<Item = f64>, r: f64) -> f64 {
    if r.is_infinite() {
        v.fold(0.0, f64::max)
    } else {
        v.map(|x| x.powf(r)).sum::<f64>().powf(1.0 / r)
    }
}

pub fn block_norms(f: &WholeField, p: &DyadicPartition, q: f64) -> BlockNorms {
    let spec = f.to_spectral();
    let n = f.len();
    let ncomp = f.ncomp();
    let mut norms = Vec::with_capacity(p.n_blocks());
    if q == 2.0 {
        // Parseval: Σ|f|² = Σ|F|²/n
        let radii: Vec<f64> = (0..n).map(|k| norm(&f.frequency(k)[..f.dim()])).collect();
        for k in 0..p.n_blocks() {
            let mut acc = 0.0;
            for (i, &rad) in radii.iter().enumerate() {
                let m = p.block(k, rad);
                if m != 0.0 {
                    let s: f64 = (0..ncomp).map(|c| spec.data()[c * n + i].norm_sqr()).sum();
                    acc += m * m * s;
                }
            }
            norms.push((acc / n as f64 * f.cell_volume()).sqrt());
        }
    } else {
        for b in lp_blocks(f, p) {
            norms.push(b.lq_norm(q));
        }
    }
    BlockNorms { q, norms }
}

pub fn besov_norm(f: &WholeField, bp: &BesovParams, p: &DyadicPartition) -> f64 {
    block_norms(f, p, bp.q).besov(bp.s, bp.r)
}

/// `⟨D⟩^σ f`, returned in the representation of `f`.
pub fn bessel_lift(f: &WholeField, sigma: f64) -> WholeField {
    f.apply_multiplier(|xi| Complex64::new((1.0 + xi.iter().map(|x| x * x).sum::<f64>()).powf(0.5 * sigma), 0.0)).to_repr(f.repr())
}

/// `‖(a_ν)‖_{ℓ^s_q}` for entries `(ν, a_ν)`.
pub fn sequence_norm(a: &[(i64, f64)], s: f64, q: f64) -> f64 {
    sequence_sum(a.iter().map(|&(nu, v)| 2f64.powf(nu as f64 * s) * v.abs()), q)
}

/// Half-space norm value with the equivalence flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfNorm {
    pub value: f64,
    /// False when `s` lies outside the reflection-equivalence range.
    pub equivalent: bool,
}

/// Reflection box and dyadic partition for measuring half-space fields.
#[derive(Debug, Clone)]
pub struct NormContext {
    pub grid: Arc<HalfGrid>,
    pub transfer: BoxTransfer,
    pub partition: DyadicPartition,
}

impl NormContext {
    /// Box `[−Y_max, Y_max)` with normal spacing close to the tangential one.
    pub fn new(grid: &Arc<HalfGrid>) -> Result<Self, BesovError> {
        let target = 2.0 * grid.normal.y_max / grid.tangential.spacing();
        let points = (target.round() as usize).max(16).next_power_of_two();
        Self::with_points(grid, points)
    }

    pub fn with_points(grid: &Arc<HalfGrid>, points: usize) -> Result<Self, BesovError> {
        let axis = BoxAxis::new(grid.normal.y_max, points).map_err(|e| BesovError::Grid(e.to_string()))?;
        let nyquist = grid.tangential.nyquist().min(axis.nyquist());
        Ok(Self { grid: grid.clone(), transfer: BoxTransfer::new(&grid.normal, axis), partition: build_partition(nyquist)? })
    }

    pub fn extend(&self, f: &Field, parity: &[Parity]) -> Result<WholeField, BesovError> {
        if !f.same_grid(&Field::zeros(&self.grid, 1, Repr::Physical)) {
            return Err(BesovError::Grid("field is not on the context grid".into()));
        }
        if parity.len() != f.ncomp() {
            return Err(BesovError::Grid(format!("{} parities for {} components", parity.len(), f.ncomp())));
        }
        Ok(crate::grid_fourier::extend_with_transfer(&self.transfer, f, parity))
    }

    pub fn block_norms(&self, f: &Field, parity: &[Parity], q: f64) -> Result<BlockNorms, BesovError> {
        Ok(block_norms(&self.extend(f, parity)?, &self.partition, q))
    }

    /// Block norms of `∇²f`, computed on the half grid and then reflected.
    pub fn hessian_block_norms(&self, f: &Field, parity: &[Parity], q: f64) -> Result<BlockNorms, BesovError> {
        let h = f.differentiate(crate::grid_fourier::DiffOp::Hessian).map_err(|e| BesovError::Grid(e.to_string()))?;
        self.block_norms(&h, &hessian_parity(parity, self.grid.dim), q)
    }

    pub fn besov_norm_halfspace(&self, f: &Field, bp: &BesovParams, parity: &[Parity]) -> Result<HalfNorm, BesovError> {
        let value = self.block_norms(f, parity, bp.q)?.besov(bp.s, bp.r);
        Ok(HalfNorm { value, equivalent: bp.in_extension_range() })
    }
}

/// Parities of the component-major gradient of a field with `parity`.
pub fn gradient_parity(parity: &[Parity], dim: usize) -> Vec<Parity> {
    let mut out = Vec::with_capacity(parity.len() * dim);
    for &p in parity {
        for a in 0..dim {
            out.push(if a == dim - 1 { flip(p) } else { p });
        }
    }
    out
}

/// Parities of the component-major Hessian.
pub fn hessian_parity(parity: &[Parity], dim: usize) -> Vec<Parity> {
    gradient_parity(&gradient_parity(parity, dim), dim)
}

pub fn flip(p: Parity) -> Parity {
    match p {
        Parity::Even => Parity::Odd,
        Parity::Odd => Parity::Even,
    }
}

/// Convenience for a one-shot half-space norm with a fresh context.
pub fn besov_norm_halfspace(f: &Field, bp: &BesovParams, parity: &[Parity]) -> Result<HalfNorm, BesovError> {
    NormContext::new(f.grid())?.besov_norm_halfspace(f, bp, parity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_fourier::TangentialGrid;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn boxed() -> (TangentialGrid, BoxAxis) {
        (TangentialGrid::new(8.0, 64, 1).unwrap(), BoxAxis::new(8.0, 64).unwrap())
    }

    fn gaussian(t: TangentialGrid, a: BoxAxis) -> WholeField {
        WholeField::from_fn(t, a, 2, |x, out| {
            let g = (-(x[0] - 0.5).powi(2) / 0.6 - (x[1] + 0.3).powi(2) / 0.5).exp();
            out[0] = Complex64::new(g, 0.0);
            out[1] = Complex64::new(x[0] * g, 0.0);
        })
    }

    #[test]
    fn partition_of_unity_and_support() {
        let p = build_partition(25.0).unwrap();
        assert_eq!(p.j_max, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let r = rng.random_range(0.01..40.0);
            let sum: f64 = (0..p.n_blocks()).map(|k| p.block(k, r)).sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
        for k in 1..p.j_max {
            let scale = 2f64.powi(k as i32);
            assert_eq!(p.block(k, 0.49 * scale), 0.0);
            assert_eq!(p.block(k, 2.01 * scale), 0.0);
        }
        assert_eq!(p.psi_hat(0.7), 1.0);
        assert!(build_partition(6.0).is_err());
    }

    #[test]
    fn blocks_reconstruct_and_localize() {
        let (t, a) = boxed();
        let f = gaussian(t, a);
        let p = build_partition(f.nyquist()).unwrap();
        let blocks = lp_blocks(&f, &p);
        let mut sum = WholeField::zeros(t, a, 2, Repr::Physical);
        for b in &blocks {
            sum = sum.axpy(Complex64::new(1.0, 0.0), b).unwrap();
        }
        assert!(sum.sub(&f).unwrap().max_abs() < 1e-12);
        // |ξ| ≈ 3.93 lies in the supports of φ₁ and φ₂ only
        let kx = std::f64::consts::PI / 8.0 * 10.0;
        let m = WholeField::from_fn(t, a, 1, |x, out| out[0] = Complex64::from_polar(1.0, kx * x[0]));
        for (k, b) in lp_blocks(&m, &p).iter().enumerate() {
            if k != 1 && k != 2 {
                assert!(b.max_abs() < 1e-13, "block {k}");
            }
        }
        let zero = WholeField::zeros(t, a, 1, Repr::Physical);
        assert!(lp_blocks(&zero, &p).iter().all(|b| b.max_abs() == 0.0));
    }

    #[test]
    fn norm_properties() {
        let (t, a) = boxed();
        let f = gaussian(t, a);
        let p = build_partition(f.nyquist()).unwrap();
        let b0 = BesovParams::new(0.0, 2.0, 1.0).unwrap();
        let b1 = b0.with_s(1.0);
        assert!(besov_norm(&f, &b1, &p) >= besov_norm(&f, &b0, &p));
        let scaled = f.scaled(Complex64::new(0.0, -3.0));
        assert!((besov_norm(&scaled, &b0, &p) - 3.0 * besov_norm(&f, &b0, &p)).abs() < 1e-12 * besov_norm(&f, &b0, &p) * 3.0);
        let b3 = BesovParams::new(0.2, 3.0, 2.0).unwrap();
        let direct = besov_norm(&f, &b3, &p);
        let bn = block_norms(&f, &p, 3.0);
        assert!((direct - bn.besov(0.2, 2.0)).abs() < 1e-14);
        // q = 2 Parseval path matches the generic path
        let fast = block_norms(&f, &p, 2.0);
        let slow: Vec<f64> = lp_blocks(&f, &p).iter().map(|b| b.l2_norm()).collect();
        for (x, y) in fast.norms.iter().zip(&slow) {
            assert!((x - y).abs() < 1e-12 * (1.0 + y));
        }
        assert_eq!(besov_norm(&WholeField::zeros(t, a, 1, Repr::Physical), &b0, &p), 0.0);
    }

    #[test]
    fn single_shell_norm_is_one_term() {
        let half = 4.0 * std::f64::consts::PI;
        let (t, a) = (TangentialGrid::new(half, 64, 1).unwrap(), BoxAxis::new(half, 64).unwrap());
        let p = build_partition(t.nyquist().min(a.nyquist())).unwrap();
        // |ξ| = 2 is the only radius where φ(ξ/2) = 1 and every other block vanishes
        let kx = 2.0;
        assert!((p.block(1, kx) - 1.0).abs() < 1e-15);
        let m = WholeField::from_fn(t, a, 1, |x, out| out[0] = Complex64::from_polar(1.0, kx * x[0]));
        let bp = BesovParams::new(0.7, 2.0, 1.0).unwrap();
        let expect = 2f64.powf(0.7) * m.l2_norm();
        assert!((besov_norm(&m, &bp, &p) - expect).abs() < 1e-11 * expect);
    }

    #[test]
    fn bessel_lift_inverse_and_constant() {
        let (t, a) = boxed();
        let f = gaussian(t, a);
        let back = bessel_lift(&bessel_lift(&f, 0.6), -0.6);
        assert!(back.sub(&f).unwrap().max_abs() < 1e-12);
        assert!(bessel_lift(&f, 0.0).sub(&f).unwrap().max_abs() < 1e-14);
        let c = WholeField::from_fn(t, a, 1, |_, out| out[0] = Complex64::new(2.0, 0.0));
        assert!(bessel_lift(&c, 1.3).sub(&c).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn sequence_norm_examples() {
        assert_eq!(sequence_norm(&[(0, 0.0), (3, 0.0)], 1.0, 2.0), 0.0);
        assert_eq!(sequence_norm(&[(0, 1.0)], 0.4, 3.0), 1.0);
        let s = 0.8;
        let a: Vec<(i64, f64)> = (0..4).map(|n| (n, 2f64.powf(-(n as f64) * s))).collect();
        assert!((sequence_norm(&a, s, 1.0) - 4.0).abs() < 1e-14);
        assert!((sequence_norm(&a, s, f64::INFINITY) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn halfspace_norm_of_boundary_vanishing_field() {
        let grid = HalfGrid::new(2, 8.0, 64, 8.0, 96).unwrap();
        let ctx = NormContext::new(&grid).unwrap();
        let f = Field::from_fn(&grid, 1, |x, out| out[0] = Complex64::new((-(x[0]).powi(2) / 0.8 - (x[1] - 4.0).powi(2) / 0.6).exp(), 0.0));
        let bp = BesovParams::new(0.2, 2.0, 1.0).unwrap();
        let even = ctx.besov_norm_halfspace(&f, &bp, &[Parity::Even]).unwrap();
        let odd = ctx.besov_norm_halfspace(&f, &bp, &[Parity::Odd]).unwrap();
        assert!(even.equivalent);
        assert!(even.value / odd.value < 2.0 && odd.value / even.value < 2.0);
        let again = ctx.besov_norm_halfspace(&f, &bp, &[Parity::Even]).unwrap();
        assert_eq!(even, again);
        let z = Field::zeros(&grid, 2, Repr::Physical);
        assert_eq!(ctx.besov_norm_halfspace(&z, &bp, &Parity::velocity(2)).unwrap().value, 0.0);
        assert!(!ctx.besov_norm_halfspace(&f, &bp.with_s(0.8), &[Parity::Even]).unwrap().equivalent);
    }
}
