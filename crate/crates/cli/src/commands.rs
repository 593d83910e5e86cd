//! The five subcommands: spectrum, sweep-gamma, wigner, weak-value,
//! regimes.

use std::path::Path;

use rayon::prelude::*;
use serde_json::json;

use fephi::classical::{point_kick_closed, point_kick_with_work};
use fephi::perturbation::{
    arc_check, energy_transfer_analytic, energy_transfer_numeric, reduced_field_amplitude,
    scattered_amplitudes, scattering_grid, sideband_weight_y, DriveRegime,
};
use fephi::spectra::{
    classical_limit_distribution, classify_regime, final_distribution, quantum_limit_distribution,
};
use fephi::wavepacket::make_wavepacket;
use fephi::weak::{pointer_shift, weak_value_samples};
use fephi::wigner::WignerGrid;
use fephi::Spectrum64;

use crate::config::{PhotonConfig, RunConfig};
use crate::output::{full, write_json, write_matrix_csv, CsvWriter};
use crate::{CliError, Format};

fn moments_json(s: &Spectrum64) -> serde_json::Value {
    json!({
        "mean_shift": s.mean_shift,
        "variance": s.variance,
        "norm": s.norm,
    })
}

pub fn cmd_spectrum(config: &RunConfig, out: &Path, format: Format) -> Result<(), CliError> {
    let wp = config.wavepacket()?;
    let ph = config.photon_state()?;
    let cfg = config.interaction()?;
    let grid = scattering_grid(&wp, &cfg, config.grid.points, config.grid.span_sigmas)?;

    let s = scattered_amplitudes(&wp, &ph, &cfg, &grid)?;
    let spectrum = final_distribution(&s)?;
    let transfer = energy_transfer_numeric(&s);
    let regime = classify_regime(&wp, &ph);

    let nu0 = ph.mean_photon_number();
    let field = reduced_field_amplitude(nu0, cfg.coupling_q);
    let y_sideband = sideband_weight_y(nu0, cfg.coupling_q);
    let classical = classical_limit_distribution(&wp, &cfg, field, &grid);
    let quantum = quantum_limit_distribution(&wp, &cfg, y_sideband, &grid)?;

    let mut warnings: Vec<String> = Vec::new();
    if !wp.regime_ok() {
        warnings.push("sigma_p0/p0 above 1e-2: narrow-spread expansion is marginal".into());
    }
    warnings.extend(classical.warning.iter().cloned());
    warnings.extend(quantum.warning.iter().cloned());

    let analytic = energy_transfer_analytic(
        &wp,
        &DriveRegime::Coherent { nu0, field },
        &cfg,
    );
    let summary = json!({
        "params": config,
        "moments": moments_json(&spectrum),
        "transfer": transfer,
        "transfer_analytic_coherent": analytic,
        "arc_residual": arc_check(&transfer),
        "regime": regime.label(),
        "gamma": wp.gamma_decay,
        "sigma_p0": wp.sigma_p0,
        "extinction": wp.extinction(),
        "drive": { "nu0_mean": nu0, "field": field, "sideband_y": y_sideband },
        "grid": grid,
        "warnings": warnings,
    });
    write_json(&out.join("spectrum_summary.json"), &summary)?;

    match format {
        Format::Csv => {
            let mut w = CsvWriter::create(
                &out.join("spectrum.csv"),
                config,
                &[
                    "p",
                    "rho_initial",
                    "rho_final",
                    "rho_classical_limit",
                    "rho_quantum_limit",
                ],
            )?;
            for i in 0..grid.len() {
                w.row(&[
                    grid.value(i),
                    wp.momentum_density(grid.value(i)),
                    spectrum.density[i],
                    classical.density[i],
                    quantum.density[i],
                ])?;
            }
            w.finish()
        }
        Format::Json => {
            let columns = json!({
                "params": config,
                "p": grid.values(),
                "rho_initial": (0..grid.len()).map(|i| wp.momentum_density(grid.value(i))).collect::<Vec<_>>(),
                "rho_final": spectrum.density,
                "rho_classical_limit": classical.density,
                "rho_quantum_limit": quantum.density,
            });
            write_json(&out.join("spectrum.json"), &columns)
        }
    }
}

pub fn cmd_sweep_gamma(config: &RunConfig, out: &Path, format: Format) -> Result<(), CliError> {
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("sweep-gamma needs a `sweep` block".into()))?;
    if sweep.gammas.is_empty() {
        return Err(CliError::Config("sweep.gammas must be non-empty".into()));
    }
    let ph = config.photon_state()?;
    if matches!(config.photon, PhotonConfig::Fock { .. }) {
        return Err(CliError::Config(
            "sweep-gamma traces the phase-dependent transfer; use a coherent photon family".into(),
        ));
    }
    let cfg = config.interaction()?;
    let params = fephi::wavepacket::ElectronParameters::new(config.electron.p0, config.electron.beta)?;
    let nu0 = ph.mean_photon_number();
    let field = reduced_field_amplitude(nu0, cfg.coupling_q);
    let kick = point_kick_closed(&cfg, field);

    let rows: Vec<Result<[f64; 5], CliError>> = sweep
        .gammas
        .par_iter()
        .map(|&gamma_req| {
            // Γ = 0 means σ = ∞; floor the dial at 0.01
            let gamma = gamma_req.max(0.01);
            let sigma = 1.0 / (2.0 * gamma);
            let wp = make_wavepacket(params, sigma, 0.0)?;
            let grid = scattering_grid(&wp, &cfg, config.grid.points, config.grid.span_sigmas)?;
            let s = scattered_amplitudes(&wp, &ph, &cfg, &grid)?;
            let t = energy_transfer_numeric(&s);
            let analytic =
                energy_transfer_analytic(&wp, &DriveRegime::Coherent { nu0, field }, &cfg);
            let ratio = t.d_e_interference / kick;
            Ok([
                gamma_req,
                t.d_e_interference,
                analytic.d_e_interference,
                ratio,
                (-gamma * gamma / 2.0).exp(),
            ])
        })
        .collect();

    let mut data = Vec::with_capacity(rows.len());
    for r in rows {
        data.push(r?);
    }
    let header = [
        "gamma",
        "dE1_numeric",
        "dE1_analytic",
        "ratio_to_point_kick",
        "exp_minus_gamma_sq_half",
    ];
    match format {
        Format::Csv => {
            let mut w = CsvWriter::create(&out.join("sweep_gamma.csv"), config, &header)?;
            for row in &data {
                w.row(row)?;
            }
            w.finish()?;
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = data
                .iter()
                .map(|r| {
                    json!({
                        "gamma": r[0],
                        "dE1_numeric": r[1],
                        "dE1_analytic": r[2],
                        "ratio_to_point_kick": r[3],
                        "exp_minus_gamma_sq_half": r[4],
                    })
                })
                .collect();
            write_json(&out.join("sweep_gamma.json"), &json!({"params": config, "rows": rows}))?;
        }
    }
    write_json(
        &out.join("sweep_gamma_summary.json"),
        &json!({
            "params": config,
            "drive": { "nu0_mean": nu0, "field": field, "point_kick": kick },
            "rows": data.len(),
        }),
    )
}

fn pair_tag(pair: (i8, i8)) -> String {
    let name = |s: i8| match s {
        -1 => "m1",
        0 => "0",
        _ => "p1",
    };
    format!("{}_{}", name(pair.0), name(pair.1))
}

pub fn cmd_wigner(config: &RunConfig, out: &Path, format: Format) -> Result<(), CliError> {
    let wcfg = config.wigner.clone().unwrap_or_default();
    let wp = config.wavepacket()?;
    let ph = config.photon_state()?;
    let cfg = config.interaction()?;
    let grid = scattering_grid(&wp, &cfg, config.grid.points, config.grid.span_sigmas)?;
    let s = scattered_amplitudes(&wp, &ph, &cfg, &grid)?;
    let w = WignerGrid::from_scattered(&s)?;
    let decohered = wcfg.decohere.then(|| w.decohere());

    let (p_marg, z_marg) = w.marginals();
    let mass = w.mass();
    let mean_shift = w.marginal_mean_shift(wp.params.p0);
    let summary = json!({
        "params": config,
        "p_grid": w.p_grid,
        "z_grid": w.z_grid,
        "mass": mass,
        "marginal_mean_shift": mean_shift,
        "decohered_mean_shift": decohered
            .as_ref()
            .map(|d| d.marginal_mean_shift(wp.params.p0)),
        "imag_residue": w.imag_residue,
    });
    write_json(&out.join("wigner_summary.json"), &summary)?;

    match format {
        Format::Csv => {
            write_matrix_csv(
                &out.join("wigner_total.csv"),
                config,
                &w.p_grid,
                &w.z_grid,
                (0..w.p_grid.len()).map(|i| w.total.row(i).to_vec()),
            )?;
            if let Some(d) = &decohered {
                write_matrix_csv(
                    &out.join("wigner_decohered.csv"),
                    config,
                    &d.p_grid,
                    &d.z_grid,
                    (0..d.p_grid.len()).map(|i| d.total.row(i).to_vec()),
                )?;
            }
            if wcfg.components {
                for (pair, comp) in &w.components {
                    let tag = pair_tag(*pair);
                    write_matrix_csv(
                        &out.join(format!("wigner_c_{tag}_re.csv")),
                        config,
                        &w.p_grid,
                        &w.z_grid,
                        (0..w.p_grid.len())
                            .map(|i| comp.row(i).iter().map(|c| c.re).collect()),
                    )?;
                    write_matrix_csv(
                        &out.join(format!("wigner_c_{tag}_im.csv")),
                        config,
                        &w.p_grid,
                        &w.z_grid,
                        (0..w.p_grid.len())
                            .map(|i| comp.row(i).iter().map(|c| c.im).collect()),
                    )?;
                }
            }
            let mut m = CsvWriter::create(
                &out.join("wigner_pmarginal.csv"),
                config,
                &["p", "marginal"],
            )?;
            for (i, &marg) in p_marg.iter().enumerate() {
                m.row(&[w.p_grid.value(i), marg])?;
            }
            m.finish()
        }
        Format::Json => {
            // assemble rows eagerly; JSON output is for modest grids
            let total: Vec<Vec<f64>> = (0..w.p_grid.len()).map(|i| w.total.row(i).to_vec()).collect();
            let mut doc = json!({
                "params": config,
                "p_grid": w.p_grid,
                "z_grid": w.z_grid,
                "total": total,
                "p_marginal": p_marg,
                "z_marginal": z_marg,
            });
            if let Some(d) = &decohered {
                let rows: Vec<Vec<f64>> = (0..d.p_grid.len()).map(|i| d.total.row(i).to_vec()).collect();
                doc["decohered_total"] = json!(rows);
            }
            if wcfg.components {
                let mut comps = serde_json::Map::new();
                for (pair, comp) in &w.components {
                    let re: Vec<Vec<f64>> = (0..w.p_grid.len())
                        .map(|i| comp.row(i).iter().map(|c| c.re).collect())
                        .collect();
                    let im: Vec<Vec<f64>> = (0..w.p_grid.len())
                        .map(|i| comp.row(i).iter().map(|c| c.im).collect())
                        .collect();
                    comps.insert(pair_tag(*pair), json!({"re": re, "im": im}));
                }
                doc["components"] = serde_json::Value::Object(comps);
            }
            write_json(&out.join("wigner.json"), &doc)
        }
    }
}

pub fn cmd_weak_value(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    let weak_cfg = config.weak.clone().unwrap_or(crate::config::WeakConfig {
        samples: 33,
        post: None,
        ode_tol: 1e-10,
    });
    let wp = config.wavepacket()?;
    let pre = config.photon_state()?;
    let post = match &weak_cfg.post {
        Some(p) => crate::config::build_photon(p)?,
        None => pre.clone(),
    };
    let cfg = config.interaction()?;
    let mode = config.photon_mode(&cfg)?;

    let shift = match pointer_shift(&wp, &pre, &post, &mode, &cfg) {
        Ok(s) => s,
        Err(e @ fephi::Error::UndefinedWeakValue { .. }) => {
            // structured error record in the output, non-zero exit
            write_json(
                &out.join("weak_value.json"),
                &json!({
                    "params": config,
                    "error": { "kind": "undefined_weak_value", "message": e.to_string() },
                }),
            )?;
            return Err(e.into());
        }
        Err(e) => return Err(e.into()),
    };

    let samples = weak_value_samples(&pre, &post, &mode, &cfg, weak_cfg.samples)?;
    let sample_rows: Vec<serde_json::Value> = samples
        .iter()
        .map(|(t, a)| json!({"t": t, "re": a.re, "im": a.im}))
        .collect();

    // classical comparison for the equivalent coherent drive
    let field = 2.0 * cfg.coupling_q * pre.expectation_annihilation().re;
    let closed = point_kick_closed(&cfg, field);
    let (ode, work) = point_kick_with_work(&cfg, &wp.params, field, weak_cfg.ode_tol)?;
    let denom = closed.abs().max(1e-15);
    let report = json!({
        "params": config,
        "a_weak_entry": { "re": shift.a_weak.re, "im": shift.a_weak.im },
        "a_weak_time_avg": { "re": shift.a_weak_time_avg.re, "im": shift.a_weak_time_avg.im },
        "a_weak_samples": sample_rows,
        "pointer_shift_z": shift.pointer_shift_z,
        "pointer_shift_p": shift.pointer_shift_p,
        "postselection_amplitude": {
            "re": shift.postselection_prob_amp.re,
            "im": shift.postselection_prob_amp.im,
        },
        "postselection_probability": shift.postselection_prob_amp.norm_sqr(),
        "classical": {
            "field": field,
            "dp_point_closed": closed,
            "dp_point_ode": ode.dp_ode,
            "ode_rel_err": ode.rel_err,
            "work_integral": work,
        },
        "discrepancy": {
            "vs_closed": (shift.pointer_shift_p - closed).abs() / denom,
            "vs_ode": (shift.pointer_shift_p - ode.dp_ode).abs() / denom,
        },
    });
    write_json(&out.join("weak_value.json"), &report)
}

pub fn cmd_regimes(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    let wp = config.wavepacket()?;
    let ph = config.photon_state()?;
    let regime = classify_regime(&wp, &ph);
    let report = json!({
        "params": config,
        "label": regime.label(),
        "regime": regime,
        "gamma": wp.gamma_decay,
        "extinction": wp.extinction(),
        "spatial_width": wp.spatial_width(),
        "mean_photon_number": ph.mean_photon_number(),
        "sigma_p0": full(wp.sigma_p0),
    });
    write_json(&out.join("regimes.json"), &report)
}
