//! Audit harness: residual and residue oracles, symbol-bound audits, decay
//! sweeps and the semigroup suite, with JSON and CSV reports.

use thiserror::Error;

use crate::besov::BesovError;
use crate::grid_fourier::GridError;
use crate::resolvent_halfspace::HalfError;
use crate::resolvent_wholespace::WholeError;
use crate::semigroup::ContourError;
use crate::spectral_core::SymbolError;

pub mod audit;
pub mod corpus;
pub mod report;
pub mod residual;
pub mod residue;
pub mod suites;
pub mod sweep;

pub use report::{Check, SuiteReport, Table};
pub use residual::{residual_resolvent, Residuals};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Norm(#[from] BesovError),
    #[error(transparent)]
    Whole(#[from] WholeError),
    #[error(transparent)]
    Half(#[from] HalfError),
    #[error(transparent)]
    Contour(#[from] ContourError),
}
