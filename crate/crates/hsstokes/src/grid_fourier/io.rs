//! JSON container for half-space fields.
//!
//! ```json
//! { "format": "hsstokes-field", "version": 1, "dim": 2, "components": 2,
//!   "representation": "physical",
//!   "tangential": { "half_period": 8.0, "modes": 128 },
//!   "normal": { "nodes": 96, "y_max": 8.0 },
//!   "data": [[re, im], ...] }
//! ```
//!
//! `data` is component-major, then tangential index (row-major over tangential
//! axes), then normal node.

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Field, GridError, HalfGrid, Repr};

pub const FORMAT_TAG: &str = "hsstokes-field";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FieldIoError {
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed field file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported field container: {0}")]
    Format(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TangentialMeta {
    pub half_period: f64,
    pub modes: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalMeta {
    pub nodes: usize,
    pub y_max: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldFile {
    pub format: String,
    pub version: u32,
    pub dim: usize,
    pub components: usize,
    pub representation: Repr,
    pub tangential: TangentialMeta,
    pub normal: NormalMeta,
    pub data: Vec<[f64; 2]>,
}

impl FieldFile {
    pub fn from_field(f: &Field) -> Self {
        let g = f.grid();
        Self {
            format: FORMAT_TAG.to_string(),
            version: FORMAT_VERSION,
            dim: g.dim,
            components: f.ncomp(),
            representation: f.repr(),
            tangential: TangentialMeta { half_period: g.tangential.half_period, modes: g.tangential.modes },
            normal: NormalMeta { nodes: g.nn(), y_max: g.normal.y_max },
            data: f.data().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn grid(&self) -> Result<Arc<HalfGrid>, FieldIoError> {
        Ok(HalfGrid::new(self.dim, self.tangential.half_period, self.tangential.modes, self.normal.y_max, self.normal.nodes)?)
    }

    /// Rebuilds the field, reusing `grid` when it matches the file metadata.
    pub fn into_field(self, grid: Option<&Arc<HalfGrid>>) -> Result<Field, FieldIoError> {
        if self.format != FORMAT_TAG || self.version != FORMAT_VERSION {
            return Err(FieldIoError::Format(format!("{} v{}", self.format, self.version)));
        }
        let own = self.grid()?;
        let grid = match grid {
            Some(g) if **g == *own => g.clone(),
            Some(_) => return Err(GridError::Shape("field file grid differs from the configured grid".into()).into()),
            None => own,
        };
        let data = self.data.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        Ok(Field::from_data(&grid, self.components, self.representation, data)?)
    }
}

pub fn write_field(path: &Path, f: &Field) -> Result<(), FieldIoError> {
    let text = serde_json::to_string(&FieldFile::from_field(f))?;
    std::fs::write(path, text).map_err(|source| FieldIoError::Io { path: path.display().to_string(), source })
}

pub fn read_field(path: &Path, grid: Option<&Arc<HalfGrid>>) -> Result<Field, FieldIoError> {
    let text = std::fs::read_to_string(path).map_err(|source| FieldIoError::Io { path: path.display().to_string(), source })?;
    let file: FieldFile = serde_json::from_str(&text)?;
    file.into_field(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_exact() {
        let grid = HalfGrid::new(2, 3.0, 8, 4.0, 10).unwrap();
        let f = Field::from_fn(&grid, 2, |x, out| {
            out[0] = Complex64::new(x[0].sin() / 3.0, x[1]);
            out[1] = Complex64::new(std::f64::consts::PI * x[1], -0.1);
        });
        let text = serde_json::to_string(&FieldFile::from_field(&f)).unwrap();
        let back: FieldFile = serde_json::from_str(&text).unwrap();
        let g = back.into_field(Some(&grid)).unwrap();
        assert_eq!(g.data(), f.data());
        assert_eq!(g.ncomp(), 2);
    }

    #[test]
    fn rejects_foreign_format_and_grid() {
        let grid = HalfGrid::new(2, 3.0, 8, 4.0, 10).unwrap();
        let f = Field::zeros(&grid, 1, Repr::Physical);
        let mut file = FieldFile::from_field(&f);
        file.format = "other".into();
        assert!(matches!(file.clone().into_field(None), Err(FieldIoError::Format(_))));
        file.format = FORMAT_TAG.into();
        let other = HalfGrid::new(2, 3.0, 16, 4.0, 10).unwrap();
        assert!(file.into_field(Some(&other)).is_err());
    }
}
