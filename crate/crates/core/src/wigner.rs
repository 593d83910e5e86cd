//! Wigner function of the outgoing electron, decomposed over the three
//! momentum sidebands, with the interference-suppressed variant used to
//! contrast coherent interaction against dephased transport.
//!
//! Each component W_{m,n}(p,z) is the bilinear transform
//! (1/2π)∫ψ_m(p+q/2)ψ_n*(p-q/2)e^{iqz}dq evaluated as a per-row DFT on
//! the amplitude grid, with the z grid chosen conjugate so the discrete
//! p-marginal identity Σ_z W·dz = ψ_m(p)ψ_n*(p) is exact.

use std::collections::BTreeMap;
use std::sync::Arc;

use ndarray::{Array2, Axis};
use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::numeric::{pairwise_sum, pairwise_sum_by};
use crate::perturbation::ScatteredState;
use crate::real::Real;

/// Sideband index: -1 = photon-emission sideband (electron slowed),
/// 0 = unscattered, +1 = photon-absorption sideband.
pub type Pair = (i8, i8);

const PAIRS: [Pair; 6] = [(-1, -1), (-1, 0), (-1, 1), (0, 0), (0, 1), (1, 1)];

/// Wigner distribution with its sideband-pair decomposition:
/// total = W_{0,0} + W_{1,1} + W_{-1,-1} + 2ℜ{W_{-1,0} + W_{0,1} + W_{-1,1}}.
#[derive(Debug, Clone)]
pub struct WignerGrid<T> {
    pub p_grid: UniformGrid<T>,
    pub z_grid: UniformGrid<T>,
    /// Assembled real distribution, indexed [p, z].
    pub total: Array2<T>,
    /// Components keyed by ordered pair (m, n) with m <= n; diagonal
    /// entries are real up to rounding.
    pub components: BTreeMap<Pair, Array2<Complex<T>>>,
    /// Largest |imaginary part| left over when assembling `total`.
    pub imag_residue: T,
}

fn pair_component<T: Real>(
    f: &[Complex<T>],
    g: &[Complex<T>],
    weight: Complex<T>,
    dp: T,
    fft: &Arc<dyn Fft<T>>,
) -> Array2<Complex<T>> {
    let m = f.len();
    let scale = dp / T::PI();
    let half = (m / 2) as isize;
    let mut out = Array2::zeros((m, m));
    out.axis_iter_mut(Axis(0))
        .into_par_iter()
        .enumerate()
        .for_each(|(i, mut row)| {
            let i = i as isize;
            let mut buf = vec![Complex::new(T::zero(), T::zero()); m];
            for k in -half..half {
                let ia = i + k;
                let ib = i - k;
                if ia >= 0 && (ia as usize) < m && ib >= 0 && (ib as usize) < m {
                    let v = f[ia as usize] * g[ib as usize].conj();
                    // (-1)^k folds the centered z grid into DFT order
                    let signed = if k & 1 == 0 { v } else { -v };
                    buf[k.rem_euclid(m as isize) as usize] = signed;
                }
            }
            fft.process(&mut buf);
            for (j, b) in buf.into_iter().enumerate() {
                row[j] = b * weight * scale;
            }
        });
    out
}

fn assemble<T: Real>(
    p_grid: UniformGrid<T>,
    psis: [&[Complex<T>]; 3],
    weights: &BTreeMap<Pair, Complex<T>>,
) -> WignerGrid<T> {
    let m = p_grid.len();
    let fft: Arc<dyn Fft<T>> = FftPlanner::new().plan_fft(m, FftDirection::Inverse);
    let dp = p_grid.step();
    let psi_of = |s: i8| psis[(s + 1) as usize];

    let mut components = BTreeMap::new();
    for pair in PAIRS {
        let w = weights.get(&pair).copied().unwrap_or_else(|| {
            Complex::new(T::one(), T::zero())
        });
        components.insert(
            pair,
            pair_component(psi_of(pair.0), psi_of(pair.1), w, dp, &fft),
        );
    }

    let mut total = Array2::zeros((m, m));
    let mut residue = T::zero();
    for (pair, comp) in &components {
        let off_diagonal = pair.0 != pair.1;
        for (t, c) in total.iter_mut().zip(comp.iter()) {
            if off_diagonal {
                *t += T::of(2.0) * c.re;
            } else {
                *t += c.re;
                residue = residue.max(c.im.abs());
            }
        }
    }

    WignerGrid {
        p_grid,
        z_grid: p_grid.conjugate(),
        total,
        components,
        imag_residue: residue,
    }
}

/// Wigner function of the pure state ψ = ψ₀ + ψ₋₁ + ψ₊₁ given its three
/// sideband wavefunctions on a common momentum grid.
pub fn wigner_from_sidebands<T: Real>(
    psi0: &[Complex<T>],
    psi_minus: &[Complex<T>],
    psi_plus: &[Complex<T>],
    p_grid: &UniformGrid<T>,
) -> Result<WignerGrid<T>> {
    let m = p_grid.len();
    if psi0.len() != m || psi_minus.len() != m || psi_plus.len() != m {
        return Err(Error::param(
            "sidebands",
            format!("all three must match the grid length {m}"),
        ));
    }
    let norm = pairwise_sum_by(m, |i| (psi0[i] + psi_minus[i] + psi_plus[i]).norm_sqr())
        * p_grid.step();
    if (norm - T::one()).abs() > T::of(1e-6) {
        return Err(Error::param(
            "sidebands",
            format!("combined norm {norm} must be within 1e-6 of 1"),
        ));
    }
    Ok(assemble(*p_grid, [psi_minus, psi0, psi_plus], &BTreeMap::new()))
}

impl<T: Real> WignerGrid<T> {
    /// Wigner function of the electron after tracing out the photon:
    /// every sideband pair is weighted by the photon-branch overlap
    /// Σ_ν g_m(ν)·g_n*(ν), so Fock drives lose their cross terms
    /// while coherent drives keep them.
    pub fn from_scattered(s: &ScatteredState<T>) -> Result<WignerGrid<T>> {
        let parts = s.sideband_parts();
        let chi = parts.chi;
        let phase = parts.phase;
        let psi0: Vec<Complex<T>> = parts.f0.to_vec();
        let psi_minus: Vec<Complex<T>> =
            parts.f_emit.iter().map(|&f| f * phase * chi).collect();
        let psi_plus: Vec<Complex<T>> =
            parts.f_abs.iter().map(|&f| f * phase.conj() * chi).collect();

        let g = |s: i8| -> &[Complex<T>] {
            match s {
                -1 => parts.g_emit,
                0 => parts.g0,
                _ => parts.g_abs,
            }
        };
        let mut weights = BTreeMap::new();
        for pair in PAIRS {
            let gm = g(pair.0);
            let gn = g(pair.1);
            let w = pairwise_sum_by(gm.len(), |k| gm[k] * gn[k].conj());
            weights.insert(pair, w);
        }
        Ok(assemble(*s.p_grid(), [&psi_minus, &psi0, &psi_plus], &weights))
    }

    /// Suppress every sideband interference term: the total is rebuilt
    /// from the diagonal components alone. Idempotent.
    pub fn decohere(&self) -> Self {
        let m = self.p_grid.len();
        let zero = Complex::new(T::zero(), T::zero());
        let mut components = BTreeMap::new();
        let mut total = Array2::zeros((m, m));
        let mut residue = T::zero();
        for (pair, comp) in &self.components {
            if pair.0 == pair.1 {
                for (t, c) in total.iter_mut().zip(comp.iter()) {
                    *t += c.re;
                    residue = residue.max(c.im.abs());
                }
                components.insert(*pair, comp.clone());
            } else {
                components.insert(*pair, Array2::from_elem(comp.dim(), zero));
            }
        }
        WignerGrid {
            p_grid: self.p_grid,
            z_grid: self.z_grid,
            total,
            components,
            imag_residue: residue,
        }
    }

    /// Normalized momentum and position marginals of `total`.
    ///
    /// Plain Riemann sums keep the discrete marginal identity exact.
    pub fn marginals(&self) -> (Vec<T>, Vec<T>) {
        let dz = self.z_grid.step();
        let dp = self.p_grid.step();
        let p_marg: Vec<T> = self
            .total
            .axis_iter(Axis(0))
            .map(|row| pairwise_sum(row.as_slice().expect("contiguous row")) * dz)
            .collect();
        let mass_p = pairwise_sum(&p_marg) * dp;
        let z_marg: Vec<T> = (0..self.z_grid.len())
            .map(|j| pairwise_sum_by(self.p_grid.len(), |i| self.total[(i, j)]) * dp)
            .collect();
        let mass_z = pairwise_sum(&z_marg) * dz;
        (
            p_marg.into_iter().map(|v| v / mass_p).collect(),
            z_marg.into_iter().map(|v| v / mass_z).collect(),
        )
    }

    /// ∬ total dp dz.
    pub fn mass(&self) -> T {
        pairwise_sum_by(self.p_grid.len(), |i| {
            pairwise_sum(self.total.row(i).as_slice().expect("contiguous row"))
        }) * self.p_grid.step()
            * self.z_grid.step()
    }

    /// Mean of the normalized momentum marginal relative to `p_ref`.
    pub fn marginal_mean_shift(&self, p_ref: T) -> T {
        let (p_marg, _) = self.marginals();
        let dp = self.p_grid.step();
        pairwise_sum_by(p_marg.len(), |i| p_marg[i] * (self.p_grid.value(i) - p_ref)) * dp
    }
}
