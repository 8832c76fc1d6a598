//! Spectral resolvent and semigroup solver for the linearized compressible
//! Stokes system on the half-space `ℝ^N_+`, `N ∈ {2, 3}`:
//!
//! ```text
//! λρ + γ div u = f,   λu − αΔu − β∇div u + γ∇ρ = g,   u|_{x_N=0} = 0.
//! ```
//!
//! The solver eliminates `ρ`, solves the resulting complex Lamé system by a
//! whole-space Fourier multiplier plus an explicit boundary corrector, and
//! builds the semigroup from a Dunford contour integral of the resolvent.

pub mod besov;
pub mod grid_fourier;
pub mod resolvent_halfspace;
pub mod resolvent_wholespace;
pub mod semigroup;
pub mod spectral_core;
pub mod verify;

pub use spectral_core::{FluidParams, SectorSpec, SymbolError, SymbolPoint};
