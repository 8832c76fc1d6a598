use std::sync::Arc;

use num_complex::Complex64;

use super::{fft, BoxAxis, DiffOp, Field, GridError, HalfGrid, NormalGrid, Parity, Repr, TangentialGrid};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Samples on the periodic box `[−L, L)^{N−1} × [−Y_box, Y_box)`, stored as
/// `[c][t][n]`. `Spectral` means transformed along every axis.
#[derive(Debug, Clone)]
pub struct WholeField {
    pub tangential: TangentialGrid,
    pub axis: BoxAxis,
    ncomp: usize,
    repr: Repr,
    data: Vec<Complex64>,
}

impl WholeField {
    pub fn zeros(tangential: TangentialGrid, axis: BoxAxis, ncomp: usize, repr: Repr) -> Self {
        let n = tangential.len() * axis.points;
        Self { tangential, axis, ncomp, repr, data: vec![ZERO; n * ncomp] }
    }

    /// Samples `f(x, out)` at every box node; `x` has length `N`.
    pub fn from_fn(tangential: TangentialGrid, axis: BoxAxis, ncomp: usize, f: impl Fn(&[f64], &mut [Complex64])) -> Self {
        let mut w = Self::zeros(tangential, axis, ncomp, Repr::Physical);
        let nt = tangential.len();
        let nb = axis.points;
        let dim_t = tangential.dim_t;
        let mut x = vec![0.0; dim_t + 1];
        let mut out = vec![ZERO; ncomp];
        for t in 0..nt {
            let p = tangential.point(t);
            x[..dim_t].copy_from_slice(&p[..dim_t]);
            for n in 0..nb {
                x[dim_t] = axis.node(n);
                out.iter_mut().for_each(|v| *v = ZERO);
                f(&x, &mut out);
                for c in 0..ncomp {
                    w.data[(c * nt + t) * nb + n] = out[c];
                }
            }
        }
        w
    }

    pub fn dim(&self) -> usize {
        self.tangential.dim_t + 1
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn repr(&self) -> Repr {
        self.repr
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Points per component.
    pub fn len(&self) -> usize {
        self.tangential.len() * self.axis.points
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> Vec<usize> {
        let mut s = self.tangential.shape();
        s.push(self.axis.points);
        s
    }

    pub fn cell_volume(&self) -> f64 {
        self.tangential.cell_volume() * self.axis.spacing()
    }

    /// Full frequency vector of flat lattice index `k` (per component).
    pub fn frequency(&self, k: usize) -> [f64; 3] {
        let nb = self.axis.points;
        let t = k / nb;
        let n = k % nb;
        let xi_t = self.tangential.xi(t);
        let mut out = [0.0; 3];
        let dim_t = self.tangential.dim_t;
        out[..dim_t].copy_from_slice(&xi_t[..dim_t]);
        out[dim_t] = self.axis.wavenumber(n);
        out
    }

    /// Whether axis `a` of lattice index `k` is the unpaired Nyquist mode.
    pub fn on_nyquist(&self, k: usize, a: usize) -> bool {
        let nb = self.axis.points;
        let dim_t = self.tangential.dim_t;
        if a < dim_t {
            self.tangential.on_nyquist(k / nb, a)
        } else {
            k % nb == nb / 2
        }
    }

    pub fn touches_nyquist(&self, k: usize) -> bool {
        (0..self.dim()).any(|a| self.on_nyquist(k, a))
    }

    /// Projection removing every mode on a Nyquist index; returns spectral.
    pub fn drop_nyquist(&self) -> WholeField {
        let mut out = self.to_spectral();
        let n = self.len();
        for k in (0..n).filter(|&k| self.touches_nyquist(k)) {
            for c in 0..self.ncomp {
                out.data[c * n + k] = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Smallest per-axis Nyquist frequency.
    pub fn nyquist(&self) -> f64 {
        self.tangential.nyquist().min(self.axis.nyquist())
    }

    fn transformed(&self, forward: bool) -> Self {
        let mut out = self.clone();
        let shape = self.shape();
        for a in 0..shape.len() {
            fft::transform_axis(&mut out.data, &shape, a, forward);
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

    /// Multiplies every spectral coefficient by `m(ξ)`; returns spectral.
    pub fn apply_multiplier(&self, m: impl Fn(&[f64]) -> Complex64) -> Self {
        let mut out = self.to_spectral();
        let n = self.len();
        let dim = self.dim();
        for k in 0..n {
            let xi = self.frequency(k);
            let factor = m(&xi[..dim]);
            for c in 0..self.ncomp {
                out.data[c * n + k] *= factor;
            }
        }
        out
    }

    pub fn component(&self, c: usize) -> WholeField {
        let n = self.len();
        WholeField { ncomp: 1, data: self.data[c * n..(c + 1) * n].to_vec(), ..self.clone_header() }
    }

    fn clone_header(&self) -> WholeField {
        WholeField { tangential: self.tangential, axis: self.axis, ncomp: 0, repr: self.repr, data: Vec::new() }
    }

    pub fn from_components(parts: &[WholeField]) -> Result<WholeField, GridError> {
        let first = parts.first().ok_or_else(|| GridError::Shape("no components".into()))?;
        let mut data = Vec::new();
        let mut ncomp = 0;
        for p in parts {
            if p.tangential != first.tangential || p.axis != first.axis {
                return Err(GridError::Shape("components live on different boxes".into()));
            }
            let p = p.to_repr(first.repr);
            ncomp += p.ncomp;
            data.extend_from_slice(&p.data);
        }
        Ok(WholeField { ncomp, data, ..first.clone_header() })
    }

    pub fn from_data(tangential: TangentialGrid, axis: BoxAxis, ncomp: usize, repr: Repr, data: Vec<Complex64>) -> Result<Self, GridError> {
        if ncomp == 0 || data.len() != ncomp * tangential.len() * axis.points {
            return Err(GridError::Shape(format!("{} samples for {} components", data.len(), ncomp)));
        }
        Ok(Self { tangential, axis, ncomp, repr, data })
    }

    pub fn axpy(&self, a: Complex64, x: &WholeField) -> Result<WholeField, GridError> {
        if x.ncomp != self.ncomp || x.tangential != self.tangential || x.axis != self.axis {
            return Err(GridError::Shape("incompatible whole fields".into()));
        }
        let x = x.to_repr(self.repr);
        let mut out = self.clone();
        out.data.iter_mut().zip(&x.data).for_each(|(o, v)| *o += a * v);
        Ok(out)
    }

    pub fn sub(&self, x: &WholeField) -> Result<WholeField, GridError> {
        self.axpy(Complex64::new(-1.0, 0.0), x)
    }

    pub fn scaled(&self, s: Complex64) -> WholeField {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// Discrete `L_q` norm with pointwise Euclidean norm over components.
    pub fn lq_norm(&self, q: f64) -> f64 {
        let f = self.to_physical();
        pointwise_lq(&f.data, self.ncomp, self.len(), q) * self.cell_volume().powf(1.0 / q)
    }

    pub fn l2_norm(&self) -> f64 {
        self.lq_norm(2.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.to_physical().data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn differentiate(&self, op: DiffOp) -> Result<WholeField, GridError> {
        let dim = self.dim();
        let spec = self.to_spectral();
        let partial = |f: &WholeField, a: usize| {
            let mut out = f.to_spectral();
            let n = f.len();
            for k in 0..n {
                let factor = if f.on_nyquist(k, a) { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, f.frequency(k)[a]) };
                for c in 0..f.ncomp {
                    out.data[c * n + k] *= factor;
                }
            }
            out
        };
        let out = match op {
            DiffOp::Partial(a) => {
                if a >= dim {
                    return Err(GridError::Unsupported(format!("axis {a} in dimension {dim}")));
                }
                partial(&spec, a)
            }
            DiffOp::Gradient => {
                let mut parts = Vec::new();
                for c in 0..self.ncomp {
                    let comp = spec.component(c);
                    for a in 0..dim {
                        parts.push(partial(&comp, a));
                    }
                }
                WholeField::from_components(&parts)?
            }
            DiffOp::Divergence => {
                if self.ncomp != dim {
                    return Err(GridError::Shape(format!("divergence of a {}-component field", self.ncomp)));
                }
                let mut acc = partial(&spec.component(0), 0);
                for a in 1..dim {
                    acc = acc.axpy(Complex64::new(1.0, 0.0), &partial(&spec.component(a), a))?;
                }
                acc
            }
            DiffOp::Laplacian => spec.apply_multiplier(|xi| Complex64::new(-xi.iter().map(|x| x * x).sum::<f64>(), 0.0)),
            DiffOp::Normal(order) => {
                let mut acc = spec.clone();
                for _ in 0..order {
                    acc = partial(&acc, dim - 1);
                }
                acc
            }
            DiffOp::Hessian => {
                let mut parts = Vec::new();
                for c in 0..self.ncomp {
                    let comp = spec.component(c);
                    for a in 0..dim {
                        for b in 0..dim {
                            parts.push(partial(&partial(&comp, a), b));
                        }
                    }
                }
                WholeField::from_components(&parts)?
            }
        };
        Ok(out.to_repr(self.repr))
    }
}

/// `(Σ_points |v|₂^q)^{1/q}` over component-major samples.
pub(crate) fn pointwise_lq(data: &[Complex64], ncomp: usize, n: usize, q: f64) -> f64 {
    let mut acc = 0.0;
    for k in 0..n {
        let mut s = 0.0;
        for c in 0..ncomp {
            s += data[c * n + k].norm_sqr();
        }
        acc += if q == 2.0 { s } else { s.powf(0.5 * q) };
    }
    acc.powf(1.0 / q)
}

/// Precomputed maps between a Chebyshev column on `[0, Y_max]` and a box column.
#[derive(Debug, Clone)]
pub struct BoxTransfer {
    pub axis: BoxAxis,
    n_cheb: usize,
    /// Box index with `0 ≤ x ≤ Y_max` and its interpolation row.
    ext_rows: Vec<(usize, Vec<f64>)>,
    /// Row of the seam node `x = ±Y_box` when it lies inside `[0, Y_max]`.
    seam_row: Option<Vec<f64>>,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl BoxTransfer {
    pub fn new(normal: &NormalGrid, axis: BoxAxis) -> Self {
        let nb = axis.points;
        let y_max = normal.y_max;
        let tol = 1e-12 * y_max;
        let mut ext_rows = Vec::new();
        for j in nb / 2..nb {
            let x = axis.node(j);
            if x <= y_max + tol {
                ext_rows.push((j, normal.interp_row(x.min(y_max))));
            }
        }
        let seam_row = if axis.half <= y_max + tol { Some(normal.interp_row(axis.half.min(y_max))) } else { None };
        let half = nb / 2;
        let n_cheb = normal.len();
        let mut cos = vec![0.0; n_cheb * (half + 1)];
        let mut sin = vec![0.0; n_cheb * (half + 1)];
        let scale = 1.0 / nb as f64;
        for (i, &x) in normal.nodes.iter().enumerate() {
            for k in 0..=half {
                let kappa = std::f64::consts::PI / axis.half * k as f64;
                let (s, c) = (kappa * x).sin_cos();
                cos[i * (half + 1) + k] = c * scale;
                sin[i * (half + 1) + k] = if k == 0 || k == half { 0.0 } else { s * scale };
            }
        }
        Self { axis, n_cheb, ext_rows, seam_row, cos, sin }
    }

    pub fn n_cheb(&self) -> usize {
        self.n_cheb
    }

    /// Parity extension of a Chebyshev column into a box column (zero beyond `Y_max`).
    pub fn extend_column(&self, col: &[Complex64], parity: Parity, out: &mut [Complex64]) {
        let nb = self.axis.points;
        out.iter_mut().for_each(|v| *v = ZERO);
        let sign = parity.sign();
        for (j, row) in &self.ext_rows {
            let v: Complex64 = row.iter().zip(col).map(|(a, b)| b * *a).sum();
            if *j == nb / 2 {
                out[*j] = if parity == Parity::Odd { ZERO } else { v };
            } else {
                out[*j] = v;
                out[nb - *j] = sign * v;
            }
        }
        if let Some(row) = &self.seam_row {
            out[0] = match parity {
                Parity::Even => row.iter().zip(col).map(|(a, b)| b * *a).sum(),
                Parity::Odd => ZERO,
            };
        }
    }

    /// Evaluates the trigonometric interpolant of a spectral box column at the
    /// Chebyshev nodes. With a parity, only the matching half of the series is used.
    pub fn restrict_column(&self, spec: &[Complex64], parity: Option<Parity>, out: &mut [Complex64]) {
        let nb = self.axis.points;
        let half = nb / 2;
        let mut sym = vec![ZERO; half + 1];
        let mut anti = vec![ZERO; half + 1];
        sym[0] = spec[0];
        sym[half] = spec[half];
        for k in 1..half {
            sym[k] = spec[k] + spec[nb - k];
            anti[k] = Complex64::new(0.0, 1.0) * (spec[k] - spec[nb - k]);
        }
        let use_cos = parity != Some(Parity::Odd);
        let use_sin = parity != Some(Parity::Even);
        for (i, o) in out.iter_mut().enumerate().take(self.n_cheb) {
            let mut acc = ZERO;
            if use_cos {
                let row = &self.cos[i * (half + 1)..(i + 1) * (half + 1)];
                for k in 0..=half {
                    acc += sym[k] * row[k];
                }
            }
            if use_sin {
                let row = &self.sin[i * (half + 1)..(i + 1) * (half + 1)];
                for k in 1..half {
                    acc += anti[k] * row[k];
                }
            }
            *o = acc;
        }
    }
}

/// Even/odd reflection of half-space data into a physical whole-space box,
/// set to zero for `|x_N| > Y_max`.
pub fn extend_reflect(g: &Field, parity: &[Parity], axis: BoxAxis) -> Result<WholeField, GridError> {
    if parity.len() != g.ncomp() {
        return Err(GridError::Shape(format!("{} parities for {} components", parity.len(), g.ncomp())));
    }
    let grid = g.grid();
    let transfer = BoxTransfer::new(&grid.normal, axis);
    Ok(extend_with_transfer(&transfer, g, parity))
}

/// [`extend_reflect`] with a precomputed transfer; `parity` must match `g`.
pub fn extend_with_transfer(transfer: &BoxTransfer, g: &Field, parity: &[Parity]) -> WholeField {
    let g = g.to_physical();
    let grid = g.grid();
    let nt = grid.nt();
    let nb = transfer.axis.points;
    let mut w = WholeField::zeros(grid.tangential, transfer.axis, g.ncomp(), Repr::Physical);
    for c in 0..g.ncomp() {
        for t in 0..nt {
            let start = (c * nt + t) * nb;
            transfer.extend_column(g.column(c, t), parity[c], &mut w.data[start..start + nb]);
        }
    }
    w
}

/// Samples the whole-space field at the half-space nodes.
pub fn restrict(w: &WholeField, grid: &Arc<HalfGrid>, parity: Option<&[Parity]>) -> Result<Field, GridError> {
    restrict_with_transfer(&BoxTransfer::new(&grid.normal, w.axis), w, grid, parity)
}

/// [`restrict`] with a precomputed transfer.
pub fn restrict_with_transfer(transfer: &BoxTransfer, w: &WholeField, grid: &Arc<HalfGrid>, parity: Option<&[Parity]>) -> Result<Field, GridError> {
    if w.tangential != grid.tangential || w.axis != transfer.axis || transfer.n_cheb() != grid.nn() {
        return Err(GridError::Shape("whole field, transfer and grid disagree".into()));
    }
    if let Some(p) = parity {
        if p.len() != w.ncomp {
            return Err(GridError::Shape(format!("{} parities for {} components", p.len(), w.ncomp)));
        }
    }
    let spec = w.to_spectral();
    let nt = grid.nt();
    let nb = w.axis.points;
    let mut out = Field::zeros(grid, w.ncomp, Repr::Spectral);
    for c in 0..w.ncomp {
        let p = parity.map(|p| p[c]);
        for t in 0..nt {
            let start = (c * nt + t) * nb;
            transfer.restrict_column(&spec.data[start..start + nb], p, out.column_mut(c, t));
        }
    }
    Ok(out.to_physical())
}
