//! The pipeline instantiated at f32: same code paths, loosened
//! tolerances. Storage-bound sweeps can trade precision for footprint.

use fephi::perturbation::{
    energy_transfer_numeric, scattered_amplitudes, scattering_grid, InteractionConfig,
};
use fephi::photon::PhotonState;
use fephi::spectra::final_distribution;
use fephi::wavepacket::{extinction_factor, make_wavepacket, ElectronParameters};
use fephi::wigner::WignerGrid;
use num_complex::Complex;

#[test]
fn single_precision_transfer_pipeline() {
    // keep p0 small enough that f32 resolves the grid around it
    let params = ElectronParameters::<f32>::new(500.0, 0.5).unwrap();
    let wp = make_wavepacket(params, 0.5f32, 0.0).unwrap();
    assert!((wp.gamma_decay - 1.0).abs() < 1e-6);

    let alpha = Complex::new(3.0f32, 0.0);
    let ph = PhotonState::coherent(alpha, PhotonState::required_n_max(alpha, 0)).unwrap();
    assert!((ph.mean_photon_number() - 9.0).abs() < 1e-4);

    let cfg = InteractionConfig::with_reduced_length(0.0f32, 3e-3, 0.0, 100.0).unwrap();
    let grid = scattering_grid(&wp, &cfg, 1024, 8.0).unwrap();
    let s = scattered_amplitudes(&wp, &ph, &cfg, &grid).unwrap();
    let t = energy_transfer_numeric(&s);

    // ΔE⁽¹⁾ = -2Ỹ√ν₀·e^{-1/2} at synchronism, to single precision
    let expect = -2.0 * 3e-3 * 3.0 * extinction_factor(1.0f32);
    assert!(
        (t.d_e_interference - expect).abs() < 5e-3 * expect.abs(),
        "{} vs {expect}",
        t.d_e_interference
    );
    assert!((t.d_nu + t.d_e_total).abs() < 1e-3);

    let spec = final_distribution(&s).unwrap();
    assert!((spec.norm - 1.0).abs() < 1e-3);

    let w = WignerGrid::from_scattered(&s).unwrap();
    assert!((w.mass() - 1.0).abs() < 1e-3);
}
