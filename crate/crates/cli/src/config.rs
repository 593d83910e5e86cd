//! Run configuration: a flat JSON file resolved into solver inputs.
//!
//! All physical numbers are in reduced units (ħ = ω = v₀ = 1, momentum
//! in recoils). The optional `wavepacket_size` block accepts an optical
//! wavelength and a physical packet size instead of `sigma_p0`, using
//! Γ₀ = (2π/β)(Δ_z/λ) and σ_p0 = 1/(2Γ₀).

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use fephi::perturbation::InteractionConfig;
use fephi::photon::{PhotonMode, PhotonState};
use fephi::wavepacket::{make_wavepacket, ElectronParameters, WavepacketState};

use crate::CliError;

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Must be "reduced" when present; a reminder, not a converter.
    #[serde(default)]
    pub units: Option<String>,
    pub electron: ElectronConfig,
    /// Alternative wavepacket specification via (λ, Δ_z); requires
    /// `electron.sigma_p0` to be absent.
    #[serde(default)]
    pub wavepacket_size: Option<OpticalSize>,
    pub photon: PhotonConfig,
    pub interaction: InteractionBlock,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub wigner: Option<WignerConfig>,
    #[serde(default)]
    pub weak: Option<WeakConfig>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ElectronConfig {
    pub p0: f64,
    pub beta: f64,
    #[serde(default)]
    pub sigma_p0: Option<f64>,
    #[serde(default)]
    pub t_drift: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OpticalSize {
    /// Optical wavelength λ (any length unit).
    pub wavelength: f64,
    /// Electron packet size Δ_z (same unit as `wavelength`).
    pub delta_z: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhotonConfig {
    /// Coherent state; give `nu0` (mean photon number, amplitude √ν₀) or
    /// an explicit real `alpha`.
    Coherent {
        #[serde(default)]
        nu0: Option<f64>,
        #[serde(default)]
        alpha: Option<f64>,
    },
    /// Fock state |ν⟩.
    Fock { nu: usize },
    /// Photon-added coherent state |α,ν⟩.
    PhotonAdded {
        alpha: f64,
        nu: usize,
        #[serde(default)]
        n_max: Option<usize>,
    },
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InteractionBlock {
    /// Detuning θ̄.
    #[serde(default)]
    pub detuning: f64,
    /// Exchange coupling Ỹ.
    pub coupling: f64,
    #[serde(default)]
    pub phi0: f64,
    /// Interaction length ωL/v₀ in reduced units.
    pub length: f64,
    #[serde(default)]
    pub stimulated_only: bool,
    /// ε_eff·V lump for the mode quantization (weak-value command).
    #[serde(default = "default_eff_volume")]
    pub eff_volume: f64,
}

fn default_eff_volume() -> f64 {
    100.0
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_span")]
    pub span_sigmas: f64,
}

fn default_points() -> usize {
    4096
}

fn default_span() -> f64 {
    10.0
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            points: default_points(),
            span_sigmas: default_span(),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Decay parameters Γ to sweep; values below 0.01 are floored to
    /// 0.01 (Γ = 0 would mean an infinite momentum spread).
    pub gammas: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WignerConfig {
    /// Also write every sideband-pair component.
    #[serde(default)]
    pub components: bool,
    /// Also write the interference-suppressed total.
    #[serde(default = "default_true")]
    pub decohere: bool,
}

fn default_true() -> bool {
    true
}

impl Default for WignerConfig {
    fn default() -> Self {
        WignerConfig {
            components: false,
            decohere: true,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WeakConfig {
    /// Number of A_w(t) samples written to the report.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Post-selected photon state; defaults to the pre-selection.
    #[serde(default)]
    pub post: Option<PhotonConfig>,
    /// Local tolerance of the classical ODE cross-check.
    #[serde(default = "default_ode_tol")]
    pub ode_tol: f64,
}

fn default_samples() -> usize {
    33
}

fn default_ode_tol() -> f64 {
    1e-10
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(u) = &self.units {
            if u != "reduced" {
                return Err(CliError::Config(format!(
                    "units must be \"reduced\", got \"{u}\""
                )));
            }
        }
        match (&self.electron.sigma_p0, &self.wavepacket_size) {
            (Some(_), Some(_)) => Err(CliError::Config(
                "give either electron.sigma_p0 or wavepacket_size, not both".into(),
            )),
            (None, None) => Err(CliError::Config(
                "missing momentum spread: set electron.sigma_p0 or wavepacket_size".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Momentum spread in recoils, from either specification.
    pub fn sigma_p0(&self) -> f64 {
        match (&self.electron.sigma_p0, &self.wavepacket_size) {
            (Some(s), _) => *s,
            (None, Some(opt)) => {
                let gamma0 =
                    2.0 * std::f64::consts::PI / self.electron.beta * opt.delta_z / opt.wavelength;
                1.0 / (2.0 * gamma0)
            }
            (None, None) => unreachable!("validated at load"),
        }
    }

    pub fn wavepacket(&self) -> Result<WavepacketState<f64>, CliError> {
        let params = ElectronParameters::new(self.electron.p0, self.electron.beta)?;
        Ok(make_wavepacket(params, self.sigma_p0(), self.electron.t_drift)?)
    }

    pub fn photon_state(&self) -> Result<PhotonState<f64>, CliError> {
        build_photon(&self.photon)
    }

    pub fn interaction(&self) -> Result<InteractionConfig<f64>, CliError> {
        Ok(InteractionConfig::with_reduced_length(
            self.interaction.detuning,
            self.interaction.coupling,
            self.interaction.phi0,
            self.interaction.length,
        )?
        .stimulated_only(self.interaction.stimulated_only))
    }

    pub fn photon_mode(&self, cfg: &InteractionConfig<f64>) -> Result<PhotonMode<f64>, CliError> {
        Ok(PhotonMode::new(
            cfg.hbar_qz,
            self.interaction.coupling,
            self.interaction.eff_volume,
        )?)
    }
}

pub fn build_photon(cfg: &PhotonConfig) -> Result<PhotonState<f64>, CliError> {
    match cfg {
        PhotonConfig::Coherent { nu0, alpha } => {
            let amp = match (nu0, alpha) {
                (Some(n), None) => {
                    if *n < 0.0 {
                        return Err(CliError::Config("photon.nu0 must be >= 0".into()));
                    }
                    n.sqrt()
                }
                (None, Some(a)) => *a,
                _ => {
                    return Err(CliError::Config(
                        "coherent photon needs exactly one of nu0 or alpha".into(),
                    ))
                }
            };
            let a = Complex::new(amp, 0.0);
            Ok(PhotonState::coherent(a, PhotonState::required_n_max(a, 0))?)
        }
        PhotonConfig::Fock { nu } => Ok(PhotonState::fock(*nu)),
        PhotonConfig::PhotonAdded { alpha, nu, n_max } => {
            let a = Complex::new(*alpha, 0.0);
            let n_max = n_max.unwrap_or_else(|| PhotonState::required_n_max(a, *nu));
            Ok(PhotonState::photon_added(a, *nu, n_max)?)
        }
    }
}
