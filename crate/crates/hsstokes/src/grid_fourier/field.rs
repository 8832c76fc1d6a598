use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{fft, GridError, HalfGrid};

/// Tangential representation of a [`Field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Repr {
    Physical,
    Spectral,
}

/// Spectral differential operators. Tangential derivatives multiply by `iξ`,
/// normal derivatives apply the Chebyshev differentiation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffOp {
    /// `∂_a`, applied to every component.
    Partial(usize),
    /// Component-major gradient: output component `c·N + a` is `∂_a f_c`.
    Gradient,
    /// `Σ_a ∂_a u_a` of an `N`-vector.
    Divergence,
    /// Componentwise Laplacian.
    Laplacian,
    /// `∂_N^ℓ`, componentwise.
    Normal(u32),
    /// All second derivatives: output component `c·N² + a·N + b` is `∂_a∂_b f_c`.
    Hessian,
}

/// Samples on the half-space grid, stored component-major as `[c][t][i]` with
/// `t` the flat tangential index and `i` the normal node.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<HalfGrid>,
    ncomp: usize,
    repr: Repr,
    data: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

impl Field {
    pub fn zeros(grid: &Arc<HalfGrid>, ncomp: usize, repr: Repr) -> Self {
        Self { grid: grid.clone(), ncomp, repr, data: vec![ZERO; ncomp * grid.len()] }
    }

    pub fn from_data(grid: &Arc<HalfGrid>, ncomp: usize, repr: Repr, data: Vec<Complex64>) -> Result<Self, GridError> {
        if ncomp == 0 || data.len() != ncomp * grid.len() {
            return Err(GridError::Shape(format!(
                "{} samples for {} components of {} points",
                data.len(),
                ncomp,
                grid.len()
            )));
        }
        Ok(Self { grid: grid.clone(), ncomp, repr, data })
    }

    /// Samples `f(x, out)` at every physical node; `x` holds the tangential
    /// coordinates followed by `x_N`.
    pub fn from_fn(grid: &Arc<HalfGrid>, ncomp: usize, f: impl Fn(&[f64], &mut [Complex64])) -> Self {
        let mut field = Self::zeros(grid, ncomp, Repr::Physical);
        let nt = grid.nt();
        let nn = grid.nn();
        let dim_t = grid.tangential.dim_t;
        let mut x = vec![0.0; grid.dim];
        let mut out = vec![ZERO; ncomp];
        for t in 0..nt {
            let p = grid.tangential.point(t);
            x[..dim_t].copy_from_slice(&p[..dim_t]);
            for i in 0..nn {
                x[dim_t] = grid.normal.nodes[i];
                out.iter_mut().for_each(|v| *v = ZERO);
                f(&x, &mut out);
                for c in 0..ncomp {
                    field.data[(c * nt + t) * nn + i] = out[c];
                }
            }
        }
        field
    }

    pub fn grid(&self) -> &Arc<HalfGrid> {
        &self.grid
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn repr(&self) -> Repr {
        self.repr
    }

    pub fn is_scalar(&self) -> bool {
        self.ncomp == 1
    }

    pub fn is_vector(&self) -> bool {
        self.ncomp == self.grid.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn column(&self, c: usize, t: usize) -> &[Complex64] {
        let nn = self.grid.nn();
        let start = (c * self.grid.nt() + t) * nn;
        &self.data[start..start + nn]
    }

    pub fn column_mut(&mut self, c: usize, t: usize) -> &mut [Complex64] {
        let nn = self.grid.nn();
        let start = (c * self.grid.nt() + t) * nn;
        &mut self.data[start..start + nn]
    }

    fn array_shape(&self) -> Vec<usize> {
        let mut s = self.grid.tangential.shape();
        s.push(self.grid.nn());
        s
    }

    fn transformed(&self, forward: bool) -> Self {
        let mut out = self.clone();
        let shape = out.array_shape();
        for axis in 0..self.grid.tangential.dim_t {
            fft::transform_axis(&mut out.data, &shape, axis, forward);
        }
        out.repr = if forward { Repr::Spectral } else { Repr::Physical };
        out
    }

    pub fn to_spectral(&self) -> Self {
        match self.repr {
            Repr::Spectral => self.clone(),
            Repr::Physical => self.transformed(true),
        }
    }

    pub fn to_physical(&self) -> Self {
        match self.repr {
            Repr::Physical => self.clone(),
            Repr::Spectral => self.transformed(false),
        }
    }

    pub fn to_repr(&self, repr: Repr) -> Self {
        match repr {
            Repr::Physical => self.to_physical(),
            Repr::Spectral => self.to_spectral(),
        }
    }

    pub fn same_grid(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    pub fn component(&self, c: usize) -> Field {
        let n = self.grid.len();
        Field { grid: self.grid.clone(), ncomp: 1, repr: self.repr, data: self.data[c * n..(c + 1) * n].to_vec() }
    }

    pub fn from_components(parts: &[Field]) -> Result<Field, GridError> {
        let first = parts.first().ok_or_else(|| GridError::Shape("no components".into()))?;
        let mut data = Vec::with_capacity(parts.iter().map(|p| p.data.len()).sum());
        let mut ncomp = 0;
        for p in parts {
            if !first.same_grid(p) {
                return Err(GridError::Shape("components live on different grids".into()));
            }
            let p = p.to_repr(first.repr);
            ncomp += p.ncomp;
            data.extend_from_slice(&p.data);
        }
        Field::from_data(&first.grid, ncomp, first.repr, data)
    }

    fn check_compatible(&self, other: &Field) -> Result<(), GridError> {
        if !self.same_grid(other) || self.ncomp != other.ncomp {
            return Err(GridError::Shape(format!("fields with {} and {} components or different grids", self.ncomp, other.ncomp)));
        }
        Ok(())
    }

    pub fn scaled(&self, s: Complex64) -> Field {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `self + a·x` in the representation of `self`.
    pub fn axpy(&self, a: Complex64, x: &Field) -> Result<Field, GridError> {
        self.check_compatible(x)?;
        let x = x.to_repr(self.repr);
        let mut out = self.clone();
        out.data.iter_mut().zip(&x.data).for_each(|(o, v)| *o += a * v);
        Ok(out)
    }

    pub fn add(&self, x: &Field) -> Result<Field, GridError> {
        self.axpy(Complex64::new(1.0, 0.0), x)
    }

    pub fn sub(&self, x: &Field) -> Result<Field, GridError> {
        self.axpy(Complex64::new(-1.0, 0.0), x)
    }

    /// Discrete `L_q` norm with pointwise Euclidean norm over components.
    pub fn lq_norm(&self, q: f64) -> f64 {
        let f = self.to_physical();
        let nt = self.grid.nt();
        let nn = self.grid.nn();
        let dv = self.grid.tangential.cell_volume();
        let mut acc = 0.0;
        for t in 0..nt {
            for i in 0..nn {
                let mut s = 0.0;
                for c in 0..self.ncomp {
                    s += f.data[(c * nt + t) * nn + i].norm_sqr();
                }
                acc += dv * self.grid.normal.weights[i] * s.powf(0.5 * q);
            }
        }
        acc.powf(1.0 / q)
    }

    pub fn l2_norm(&self) -> f64 {
        self.lq_norm(2.0)
    }

    /// `L₂` norm of the imaginary part of the physical samples.
    pub fn imag_l2_norm(&self) -> f64 {
        let mut f = self.to_physical();
        f.data.iter_mut().for_each(|v| *v = Complex64::new(v.im, 0.0));
        f.l2_norm()
    }

    /// Tangential `L₂` norm of the wall trace.
    pub fn boundary_l2(&self) -> f64 {
        let f = self.to_physical();
        let nt = self.grid.nt();
        let nn = self.grid.nn();
        let mut acc = 0.0;
        for c in 0..self.ncomp {
            for t in 0..nt {
                acc += f.data[(c * nt + t) * nn].norm_sqr();
            }
        }
        (acc * self.grid.tangential.cell_volume()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.to_physical().data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `L₂` norm restricted to the interior nodes `0 < x_N < Y_max`.
    pub fn interior_l2(&self) -> f64 {
        let mut f = self.to_physical();
        let nn = self.grid.nn();
        for (k, v) in f.data.iter_mut().enumerate() {
            let i = k % nn;
            if i == 0 || i == nn - 1 {
                *v = ZERO;
            }
        }
        f.l2_norm()
    }

    /// Single partial derivative of every component, in tangential-spectral form.
    fn partial_spectral(spec: &Field, axis: usize) -> Field {
        let grid = &spec.grid;
        let dim_t = grid.tangential.dim_t;
        let nt = grid.nt();
        let nn = grid.nn();
        let mut out = spec.clone();
        if axis < dim_t {
            for c in 0..spec.ncomp {
                for t in 0..nt {
                    let factor = if grid.tangential.on_nyquist(t, axis) { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, grid.tangential.xi(t)[axis]) };
                    let start = (c * nt + t) * nn;
                    out.data[start..start + nn].iter_mut().for_each(|v| *v *= factor);
                }
            }
        } else {
            for c in 0..spec.ncomp {
                for t in 0..nt {
                    let start = (c * nt + t) * nn;
                    grid.normal.differentiate_column(&spec.data[start..start + nn], &mut out.data[start..start + nn]);
                }
            }
        }
        out
    }

    pub fn differentiate(&self, op: DiffOp) -> Result<Field, GridError> {
        let dim = self.grid.dim;
        let spec = self.to_spectral();
        let out = match op {
            DiffOp::Partial(a) => {
                if a >= dim {
                    return Err(GridError::Unsupported(format!("axis {a} in dimension {dim}")));
                }
                Self::partial_spectral(&spec, a)
            }
            DiffOp::Gradient => {
                let parts: Vec<Field> = (0..spec.ncomp)
                    .flat_map(|c| {
                        let comp = spec.component(c);
                        (0..dim).map(move |a| Self::partial_spectral(&comp, a))
                    })
                    .collect();
                Field::from_components(&parts)?
            }
            DiffOp::Divergence => {
                if spec.ncomp != dim {
                    return Err(GridError::Shape(format!("divergence of a {}-component field", spec.ncomp)));
                }
                let mut acc = Self::partial_spectral(&spec.component(0), 0);
                for a in 1..dim {
                    acc = acc.add(&Self::partial_spectral(&spec.component(a), a))?;
                }
                acc
            }
            DiffOp::Laplacian => {
                let mut acc = Self::partial_spectral(&Self::partial_spectral(&spec, 0), 0);
                for a in 1..dim {
                    acc = acc.add(&Self::partial_spectral(&Self::partial_spectral(&spec, a), a))?;
                }
                acc
            }
            DiffOp::Normal(order) => {
                if order > 4 {
                    return Err(GridError::Unsupported(format!("normal derivative of order {order}")));
                }
                let mut acc = spec.clone();
                for _ in 0..order {
                    acc = Self::partial_spectral(&acc, dim - 1);
                }
                acc
            }
            DiffOp::Hessian => {
                let mut parts = Vec::with_capacity(spec.ncomp * dim * dim);
                for c in 0..spec.ncomp {
                    let comp = spec.component(c);
                    let first: Vec<Field> = (0..dim).map(|a| Self::partial_spectral(&comp, a)).collect();
                    for d1 in &first {
                        for b in 0..dim {
                            parts.push(Self::partial_spectral(d1, b));
                        }
                    }
                }
                Field::from_components(&parts)?
            }
        };
        Ok(out.to_repr(self.repr))
    }
}

pub fn fourier_tangential(f: &Field) -> Result<Field, GridError> {
    if f.repr != Repr::Physical {
        return Err(GridError::Representation { expected: Repr::Physical });
    }
    Ok(f.to_spectral())
}

pub fn inverse_fourier_tangential(f: &Field) -> Result<Field, GridError> {
    if f.repr != Repr::Spectral {
        return Err(GridError::Representation { expected: Repr::Spectral });
    }
    Ok(f.to_physical())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_fourier::HalfGrid;

    fn gauss(x: &[f64]) -> f64 {
        (-(x[0] - 0.3).powi(2) / 0.5 - (x[x.len() - 1] - 3.0).powi(2) / 0.4).exp()
    }

    #[test]
    fn zero_and_round_trip() {
        let grid = HalfGrid::new(2, 4.0, 32, 6.0, 24).unwrap();
        let z = Field::zeros(&grid, 2, Repr::Physical);
        assert_eq!(fourier_tangential(&z).unwrap().max_abs(), 0.0);
        let f = Field::from_fn(&grid, 2, |x, out| {
            out[0] = Complex64::new((x[0] * 1.3).sin() + x[1], 0.2);
            out[1] = Complex64::new(gauss(x), -x[0]);
        });
        let back = inverse_fourier_tangential(&fourier_tangential(&f).unwrap()).unwrap();
        let err = back.sub(&f).unwrap().max_abs();
        assert!(err < 1e-13 * f.max_abs());
        assert!(inverse_fourier_tangential(&f).is_err());
    }

    #[test]
    fn parseval() {
        let grid = HalfGrid::new(3, 2.0, 8, 1.0, 6).unwrap();
        let f = Field::from_fn(&grid, 1, |x, out| out[0] = Complex64::new(x[0] * x[1] + x[2], x[1].cos()));
        let s = f.to_spectral();
        let phys: f64 = f.data().iter().map(|v| v.norm_sqr()).sum();
        let spec: f64 = s.data().iter().map(|v| v.norm_sqr()).sum();
        assert!((phys - spec / grid.nt() as f64).abs() < 1e-12 * phys);
    }

    #[test]
    fn derivative_identities() {
        let grid = HalfGrid::new(2, 4.0, 32, 8.0, 96).unwrap();
        let f = Field::from_fn(&grid, 1, |x, out| out[0] = Complex64::new(gauss(x), 0.0));
        let c = Field::from_fn(&grid, 1, |_, out| out[0] = Complex64::new(2.5, 0.0));
        assert!(c.differentiate(DiffOp::Gradient).unwrap().max_abs() < 1e-11);
        let grad = f.differentiate(DiffOp::Gradient).unwrap();
        let div_grad = grad.differentiate(DiffOp::Divergence).unwrap();
        let lap = f.differentiate(DiffOp::Laplacian).unwrap();
        assert!(div_grad.sub(&lap).unwrap().max_abs() < 1e-9 * lap.max_abs());
        // analytic normal derivative
        let dn = f.differentiate(DiffOp::Normal(1)).unwrap();
        let exact = Field::from_fn(&grid, 1, |x, out| out[0] = Complex64::new(-2.0 * (x[1] - 3.0) / 0.4 * gauss(x), 0.0));
        let e = dn.sub(&exact).unwrap().max_abs();
        assert!(e < 1e-8, "{e}");
        let h = f.differentiate(DiffOp::Hessian).unwrap();
        assert_eq!(h.ncomp(), 4);
        assert!(h.component(1).sub(&h.component(2)).unwrap().max_abs() < 1e-9);
    }
}
