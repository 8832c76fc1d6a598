//! Discretization of the half-space `ℝ^{N−1} × (0, ∞)`.
//!
//! Tangential directions are a periodic box `[−L, L)^{N−1}` with `M` nodes per
//! axis, resolved by FFT. The normal direction uses Chebyshev–Gauss–Lobatto
//! nodes on `[0, Y_max]`, which include the wall `x_N = 0` and cluster
//! quadratically towards both ends. Whole-space data live on a periodic box
//! whose normal axis `[−Y_box, Y_box)` is usually much longer than `Y_max`.

mod chebyshev;
pub mod fft;
mod field;
pub mod io;
mod whole;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use field::{fourier_tangential, inverse_fourier_tangential, DiffOp, Field, Repr};
pub use whole::{extend_reflect, extend_with_transfer, restrict, restrict_with_transfer, BoxTransfer, WholeField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("invalid grid: {0}")]
    Invalid(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("representation mismatch: expected {expected:?}")]
    Representation { expected: Repr },
    #[error("unsupported derivative: {0}")]
    Unsupported(String),
}

/// Reflection parity of a component about `x_N = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    /// Even tangential components and odd normal component.
    pub fn velocity(dim: usize) -> Vec<Parity> {
        let mut v = vec![Parity::Even; dim];
        v[dim - 1] = Parity::Odd;
        v
    }
}

/// Periodic tangential grid `x'_m = −L + 2Lm/M` per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentialGrid {
    pub half_period: f64,
    pub modes: usize,
    pub dim_t: usize,
}

impl TangentialGrid {
    pub fn new(half_period: f64, modes: usize, dim_t: usize) -> Result<Self, GridError> {
        if !(half_period > 0.0) {
            return Err(GridError::Invalid(format!("half period {half_period} must be positive")));
        }
        if modes < 2 || !modes.is_power_of_two() {
            return Err(GridError::Invalid(format!("modes per axis {modes} must be a power of two")));
        }
        if !(dim_t == 1 || dim_t == 2) {
            return Err(GridError::Invalid(format!("tangential dimension {dim_t} must be 1 or 2")));
        }
        Ok(Self { half_period, modes, dim_t })
    }

    pub fn len(&self) -> usize {
        self.modes.pow(self.dim_t as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.modes; self.dim_t]
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_period / self.modes as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim_t as i32)
    }

    pub fn node(&self, m: usize) -> f64 {
        -self.half_period + self.spacing() * m as f64
    }

    /// Per-axis indices of the flat tangential index.
    pub fn split(&self, flat: usize) -> [usize; 2] {
        if self.dim_t == 1 {
            [flat, 0]
        } else {
            [flat / self.modes, flat % self.modes]
        }
    }

    pub fn point(&self, flat: usize) -> [f64; 2] {
        let [a, b] = self.split(flat);
        [self.node(a), if self.dim_t == 2 { self.node(b) } else { 0.0 }]
    }

    pub fn wavenumber(&self, k: usize) -> f64 {
        std::f64::consts::PI / self.half_period * fft::signed_index(k, self.modes) as f64
    }

    /// Tangential frequency vector of the flat spectral index (unused slot zero).
    pub fn xi(&self, flat: usize) -> [f64; 2] {
        let [a, b] = self.split(flat);
        [self.wavenumber(a), if self.dim_t == 2 { self.wavenumber(b) } else { 0.0 }]
    }

    /// Whether tangential axis `axis` of the flat index sits on the unpaired Nyquist mode.
    pub fn on_nyquist(&self, flat: usize, axis: usize) -> bool {
        axis < self.dim_t && self.modes % 2 == 0 && self.split(flat)[axis] == self.modes / 2
    }

    /// Whether any tangential axis of the flat index is a Nyquist index.
    pub fn touches_nyquist(&self, flat: usize) -> bool {
        (0..self.dim_t).any(|a| self.on_nyquist(flat, a))
    }

    pub fn xi2(&self, flat: usize) -> f64 {
        let x = self.xi(flat);
        x[0] * x[0] + x[1] * x[1]
    }

    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI / self.half_period * (self.modes / 2) as f64
    }
}

/// Chebyshev–Gauss–Lobatto grid on `[0, Y_max]` with Clenshaw–Curtis weights.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub y_max: f64,
    diff: Vec<f64>,
    bary: Vec<f64>,
}

impl NormalGrid {
    pub fn new(n: usize, y_max: f64) -> Result<Self, GridError> {
        if n < 4 {
            return Err(GridError::Invalid(format!("normal node count {n} must be at least 4")));
        }
        if !(y_max > 0.0) {
            return Err(GridError::Invalid(format!("Y_max {y_max} must be positive")));
        }
        Ok(Self {
            nodes: chebyshev::nodes(n, y_max),
            weights: chebyshev::clenshaw_curtis(n, y_max),
            y_max,
            diff: chebyshev::diff_matrix(n, y_max),
            bary: chebyshev::bary_weights(n),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Row-major differentiation matrix.
    pub fn diff_matrix(&self) -> &[f64] {
        &self.diff
    }

    /// Interpolation coefficients at an arbitrary `y ∈ [0, Y_max]`.
    pub fn interp_row(&self, y: f64) -> Vec<f64> {
        chebyshev::interp_row(&self.nodes, &self.bary, y)
    }

    /// Expected error of `Σ wᵢ e^{−c yᵢ}` against `1/c`: the mass beyond `Y_max`
    /// plus a resolution floor.
    pub fn decay_tolerance(&self, c: f64) -> f64 {
        (-c * self.y_max).exp() / c + 1e-13 / c.min(1.0)
    }

    /// Applies the differentiation matrix to one column.
    pub fn differentiate_column<T>(&self, col: &[T], out: &mut [T])
    where
        T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T> + Default,
    {
        let n = self.len();
        for i in 0..n {
            let row = &self.diff[i * n..(i + 1) * n];
            let mut acc = T::default();
            for j in 0..n {
                acc = acc + col[j] * row[j];
            }
            out[i] = acc;
        }
    }
}

/// `∑ wᵢ vᵢ` on the normal grid.
pub fn quadrature_normal<T>(grid: &NormalGrid, values: &[T]) -> Result<T, GridError>
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T> + Default,
{
    if values.len() != grid.len() {
        return Err(GridError::Shape(format!("{} values for {} nodes", values.len(), grid.len())));
    }
    Ok(values.iter().zip(&grid.weights).fold(T::default(), |acc, (v, w)| acc + *v * *w))
}

/// Normal axis of a whole-space box: `x_n = −Y + 2Yn/n_pts`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxAxis {
    pub half: f64,
    pub points: usize,
}

impl BoxAxis {
    pub fn new(half: f64, points: usize) -> Result<Self, GridError> {
        if !(half > 0.0) || points < 4 || points % 2 != 0 {
            return Err(GridError::Invalid(format!("box axis ({half}, {points}) needs positive half and even count")));
        }
        Ok(Self { half, points })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half / self.points as f64
    }

    pub fn node(&self, n: usize) -> f64 {
        -self.half + self.spacing() * n as f64
    }

    pub fn wavenumber(&self, k: usize) -> f64 {
        std::f64::consts::PI / self.half * fft::signed_index(k, self.points) as f64
    }

    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI / self.half * (self.points / 2) as f64
    }
}

/// The half-space grid: tangential box times normal Chebyshev grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfGrid {
    pub dim: usize,
    pub tangential: TangentialGrid,
    pub normal: NormalGrid,
}

impl HalfGrid {
    pub fn new(dim: usize, half_period: f64, modes: usize, y_max: f64, normal_nodes: usize) -> Result<Arc<Self>, GridError> {
        if !(dim == 2 || dim == 3) {
            return Err(GridError::Invalid(format!("dimension {dim} must be 2 or 3")));
        }
        Ok(Arc::new(Self {
            dim,
            tangential: TangentialGrid::new(half_period, modes, dim - 1)?,
            normal: NormalGrid::new(normal_nodes, y_max)?,
        }))
    }

    pub fn nt(&self) -> usize {
        self.tangential.len()
    }

    pub fn nn(&self) -> usize {
        self.normal.len()
    }

    /// Points per component.
    pub fn len(&self) -> usize {
        self.nt() * self.nn()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_examples() {
        let g = NormalGrid::new(96, 8.0).unwrap();
        for &c in &[1.0, 10.0] {
            let v: Vec<f64> = g.nodes.iter().map(|y| (-c * y).exp()).collect();
            let q = quadrature_normal(&g, &v).unwrap();
            assert!((q - 1.0 / c).abs() <= g.decay_tolerance(c), "c={c} q={q}");
        }
        let v: Vec<f64> = g.nodes.iter().map(|y| y * (-y).exp()).collect();
        let q = quadrature_normal(&g, &v).unwrap();
        // ∫₀^Y y e^{−y} dy = 1 − (1+Y)e^{−Y}
        assert!((q - 1.0).abs() <= 9.0 * (-8.0f64).exp() + 1e-13);
        assert!((q - (1.0 - 9.0 * (-8.0f64).exp())).abs() < 1e-13);
        assert!(quadrature_normal(&g, &v[1..]).is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(TangentialGrid::new(8.0, 100, 1).is_err());
        assert!(TangentialGrid::new(-1.0, 128, 1).is_err());
        assert!(NormalGrid::new(2, 8.0).is_err());
        assert!(HalfGrid::new(4, 8.0, 16, 8.0, 16).is_err());
        assert!(BoxAxis::new(8.0, 7).is_err());
    }

    #[test]
    fn nodes_start_at_the_wall() {
        let g = NormalGrid::new(12, 5.0).unwrap();
        assert_eq!(g.nodes[0], 0.0);
        assert!((g.nodes[11] - 5.0).abs() < 1e-14);
        assert!(g.nodes.windows(2).all(|w| w[1] > w[0]));
        assert!(g.weights.iter().all(|&w| w > 0.0));
    }
}
