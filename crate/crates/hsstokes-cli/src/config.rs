//! TOML run configuration. Every field has a default; the resolved
//! configuration is echoed next to the outputs of each command.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use hsstokes::besov::BesovParams;
use hsstokes::grid_fourier::HalfGrid;
use hsstokes::semigroup::ContourSpec;
use hsstokes::spectral_core::{thresholds, FluidParams, SectorSpec};
use hsstokes::verify::suites::SuiteSizes;
use hsstokes::verify::sweep::NormConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SectorConfig {
    pub epsilon: f64,
    /// Defaults to the computed `λ₂` of the grid.
    pub nu0: Option<f64>,
}

impl Default for SectorConfig {
    fn default() -> Self {
        Self { epsilon: std::f64::consts::FRAC_PI_4, nu0: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub half_period: f64,
    pub modes: usize,
    pub y_max: f64,
    pub normal_nodes: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { half_period: 8.0, modes: 128, y_max: 8.0, normal_nodes: 96 }
    }
}

/// A Besov triple `(s, q, r)` with its `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormEntry {
    pub s: f64,
    pub q: f64,
    #[serde(default = "one")]
    pub r: f64,
    pub sigma: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContourConfig {
    pub gamma_shift: Option<f64>,
    pub r_min_factor: f64,
    pub t_min: f64,
    pub log_step: f64,
}

impl Default for ContourConfig {
    fn default() -> Self {
        let d = ContourSpec::default();
        Self { gamma_shift: d.gamma_shift, r_min_factor: d.r_min_factor, t_min: d.t_min, log_step: d.log_step }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Seeds {
    pub verify: u64,
    pub data: u64,
}

impl Default for Seeds {
    fn default() -> Self {
        Self { verify: 7, data: 11 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub params: FluidParams,
    pub sector: SectorConfig,
    pub grid: GridConfig,
    pub besov: BesovParams,
    pub sigma: f64,
    /// Further `(s, q, σ)` configurations audited by `verify` and `sweep`.
    pub extra_norms: Vec<NormEntry>,
    pub contour: ContourConfig,
    pub seeds: Seeds,
    pub sizes: SuiteSizes,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: FluidParams { alpha: 1.0, beta: 0.5, gamma_c: 1.0, dim: 2 },
            sector: SectorConfig::default(),
            grid: GridConfig::default(),
            besov: BesovParams { s: 0.0, q: 2.0, r: 1.0 },
            sigma: 0.25,
            extra_norms: vec![NormEntry { s: 0.2, q: 3.0, r: 1.0, sigma: 0.1 }],
            contour: ContourConfig::default(),
            seeds: Seeds::default(),
            sizes: SuiteSizes::default(),
            out_dir: PathBuf::from("hsstokes-out"),
        }
    }
}

/// `−1 + 1/q < s − σ < s + σ < 1/q` with `σ > 0`.
fn check_norm(bp: &BesovParams, sigma: f64) -> Result<(), CliError> {
    bp.validate().map_err(|e| CliError::Config(e.to_string()))?;
    if !bp.in_extension_range() {
        return Err(CliError::Config(format!("s = {} must satisfy -1 + 1/q < s < 1/q for q = {}", bp.s, bp.q)));
    }
    let inv = 1.0 / bp.q;
    if !(sigma > 0.0 && -1.0 + inv < bp.s - sigma && bp.s + sigma < inv) {
        return Err(CliError::Config(format!("sigma = {sigma} must satisfy -1 + 1/q < s - sigma < s + sigma < 1/q for (s, q) = ({}, {})", bp.s, bp.q)));
    }
    Ok(())
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Validates every field and fills in `ν₀`.
    pub fn resolve(mut self) -> Result<Resolved, CliError> {
        self.params.validate().map_err(|e| CliError::Config(e.to_string()))?;
        let g = self.grid;
        let grid = HalfGrid::new(self.params.dim, g.half_period, g.modes, g.y_max, g.normal_nodes).map_err(|e| CliError::Config(e.to_string()))?;
        check_norm(&self.besov, self.sigma)?;
        for n in &self.extra_norms {
            check_norm(&BesovParams { s: n.s, q: n.q, r: n.r }, n.sigma)?;
        }
        let nu0 = match self.sector.nu0 {
            Some(v) => v,
            None => thresholds(&self.params, self.sector.epsilon, grid.tangential.nyquist()).lambda2,
        };
        let sector = SectorSpec::new(self.sector.epsilon, nu0).map_err(|e| CliError::Config(e.to_string()))?;
        self.sector.nu0 = Some(nu0);
        let c = self.contour;
        if !(c.t_min > 0.0 && c.r_min_factor > 0.0 && c.log_step > 0.0) {
            return Err(CliError::Config("contour t_min, r_min_factor and log_step must be positive".into()));
        }
        let s = &self.sizes;
        if !(s.l1_t_min > 0.0 && s.l1_t_end > s.l1_t_min && s.l1_per_decade > 0) {
            return Err(CliError::Config("sizes.l1_t_min < sizes.l1_t_end and l1_per_decade > 0 are required".into()));
        }
        if s.sweep_points < 8 || s.sweep_decades < 2.0 {
            return Err(CliError::Config("sweeps need sizes.sweep_points >= 8 and sizes.sweep_decades >= 2".into()));
        }
        if s.half_data == 0 || s.half_lambdas == 0 || s.semigroup_corpus == 0 || s.whole_lambdas == 0 {
            return Err(CliError::Config("suite sizes must be positive".into()));
        }
        Ok(Resolved { config: self, grid, sector })
    }
}

/// A validated configuration with the objects built from it.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: RunConfig,
    pub grid: Arc<HalfGrid>,
    pub sector: SectorSpec,
}

impl Resolved {
    pub fn contour_spec(&self) -> ContourSpec {
        let c = self.config.contour;
        ContourSpec { epsilon: self.sector.epsilon, gamma_shift: c.gamma_shift, r_min_factor: c.r_min_factor, t_min: c.t_min, log_step: c.log_step }
    }

    pub fn norm_configs(&self) -> Vec<NormConfig> {
        let c = &self.config;
        std::iter::once(NormConfig { bp: c.besov, sigma: c.sigma })
            .chain(c.extra_norms.iter().map(|n| NormConfig { bp: BesovParams { s: n.s, q: n.q, r: n.r }, sigma: n.sigma }))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolved_config_round_trips() {
        let r = RunConfig::default().resolve().unwrap();
        let text = r.config.to_toml();
        let again = RunConfig::parse(&text).unwrap();
        assert_eq!(again, r.config);
        assert!((r.sector.nu0 - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn besov_range_is_enforced() {
        let mut c = RunConfig::default();
        c.sigma = 0.6;
        assert!(matches!(c.resolve(), Err(CliError::Config(_))));
        let mut c = RunConfig::default();
        c.besov.s = 0.5;
        assert!(matches!(c.resolve(), Err(CliError::Config(_))));
        assert!(matches!(RunConfig::parse("bogus = 1"), Err(CliError::Config(_))));
    }
}
