//! Classical point-particle momentum kick in a traveling wave: the
//! closed-form linear-acceleration result next to an adaptive ODE
//! integration of the canonical equations. The ODE path is the oracle;
//! the closed form is its short-timescale (z ≈ v₀t) limit.

use serde::Serialize;

use crate::error::Result;
use crate::numeric::sinc;
use crate::ode::integrate_dp54;
use crate::perturbation::InteractionConfig;
use crate::real::Real;
use crate::wavepacket::ElectronParameters;

/// Closed-form vs. integrated kick, both in recoil units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalKick<T> {
    pub dp_closed: T,
    pub dp_ode: T,
    /// |dp_ode - dp_closed| / max(|dp_closed|, 1e-15).
    pub rel_err: T,
}

/// Δp_point = -(eE_cL/v₀)·sinc(θ̄/2)·cos(θ̄/2 + φ₀), with the drive given
/// as the reduced amplitude `field` = eE_cL/ħω.
pub fn point_kick_closed<T: Real>(cfg: &InteractionConfig<T>, field: T) -> T {
    let half = cfg.detuning * T::of(0.5);
    -field * sinc(half) * (half + cfg.phi0).cos()
}

/// Integrate ż = v₀ + δp/m*, δṗ = -eE_c·cos(ωt - q_z z + φ₀) over the
/// interaction window and compare against the closed form.
///
/// The drift uses the dispersion-consistent velocity v₀ + δp/m* so the
/// unperturbed trajectory stays synchronous with the detuning convention.
/// The work integral -eE_c ∫cos(·)·ż dt is accumulated alongside for
/// energy bookkeeping.
pub fn point_kick_ode<T: Real>(
    cfg: &InteractionConfig<T>,
    params: &ElectronParameters<T>,
    field: T,
    tol: T,
) -> Result<ClassicalKick<T>> {
    let kick = point_kick_with_work(cfg, params, field, tol)?;
    Ok(kick.0)
}

/// Same as [`point_kick_ode`], also returning the trajectory work integral.
pub fn point_kick_with_work<T: Real>(
    cfg: &InteractionConfig<T>,
    params: &ElectronParameters<T>,
    field: T,
    tol: T,
) -> Result<(ClassicalKick<T>, T)> {
    if !(tol >= T::of(1e-12) && tol <= T::of(1e-6)) {
        return Err(crate::error::Error::param(
            "tol",
            format!("must lie in [1e-12, 1e-6], got {tol}"),
        ));
    }
    let window = cfg.length;
    let eps = field / window; // eE_c in reduced force units
    let q_z = cfg.hbar_qz;
    let m_eff = params.m_eff;
    let phi0 = cfg.phi0;

    let dp_closed = point_kick_closed(cfg, field);
    if field == T::zero() {
        return Ok((
            ClassicalKick {
                dp_closed,
                dp_ode: T::zero(),
                rel_err: T::zero(),
            },
            T::zero(),
        ));
    }

    // state: [δz, δp, W]
    let rhs = |t: T, y: &[T; 3]| -> [T; 3] {
        let phase = (T::one() - q_z) * t - q_z * y[0] + phi0;
        let force = -eps * phase.cos();
        [y[1] / m_eff, force, force * (T::one() + y[1] / m_eff)]
    };
    let (y, _) = integrate_dp54(rhs, T::zero(), window, [T::zero(); 3], tol)?;
    let dp_ode = y[1];
    let rel_err = (dp_ode - dp_closed).abs() / dp_closed.abs().max(T::of(1e-15));
    Ok((
        ClassicalKick {
            dp_closed,
            dp_ode,
            rel_err,
        },
        y[2],
    ))
}
