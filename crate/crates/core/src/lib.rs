//! Numerical toolkit for first-order free electron-photon interactions.
//!
//! Models a single chirped Gaussian electron wavepacket coupled to one
//! quantized slow-wave optical mode prepared in a photon-added coherent
//! state |α,ν⟩. The library computes stimulated/spontaneous energy
//! transfer, final momentum spectra (accelerated vs. sideband regimes),
//! Wigner phase-space distributions of the outgoing electron, and
//! weak-value pointer shifts under photon pre/post-selection, together
//! with the classical point-particle kick that serves as an independent
//! cross-check.
//!
//! # Reduced units
//!
//! Everything internal uses ħ = 1, mode frequency ω = 1, and electron
//! velocity v₀ = 1. Momentum is measured in units of the quantum recoil
//! p_rec = ħω/v₀, energy in units of ħω, length along the beam in units
//! of v₀/ω, and time in units of 1/ω. The electron charge magnitude is
//! absorbed into the dimensionless couplings, so a classical drive is
//! specified by the reduced amplitude eE_cL/ħω.
//!
//! All core math is generic over the scalar type through [`Real`]
//! (`f32` or `f64`); concrete `f64` aliases live at the crate root.

// Validation guards use `!(x > 0)` so NaN inputs fail them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod error;
pub mod grid;
pub mod numeric;
pub mod ode;
pub mod perturbation;
pub mod photon;
pub mod real;
pub mod spectra;
pub mod wavepacket;
pub mod weak;
pub mod wigner;

pub use error::{Error, Result};
pub use real::Real;

/// Complex scalar at the default width.
pub type C64 = num_complex::Complex<f64>;

/// `f64` aliases for the main domain types.
pub type Grid64 = grid::UniformGrid<f64>;
pub type ElectronParameters64 = wavepacket::ElectronParameters<f64>;
pub type Wavepacket64 = wavepacket::WavepacketState<f64>;
pub type PhotonState64 = photon::PhotonState<f64>;
pub type PhotonMode64 = photon::PhotonMode<f64>;
pub type InteractionConfig64 = perturbation::InteractionConfig<f64>;
pub type Scattered64 = perturbation::ScatteredState<f64>;
pub type Transfer64 = perturbation::TransferResult<f64>;
pub type Spectrum64 = spectra::SpectrumResult<f64>;
pub type Regime64 = spectra::RegimeReport<f64>;
pub type Wigner64 = wigner::WignerGrid<f64>;
pub type WeakValue64 = weak::WeakValueResult<f64>;
pub type Kick64 = classical::ClassicalKick<f64>;
