//! The `repro` and `compute` commands.

use serde_json::{json, Value};
use std::path::{Path, PathBuf};

use trarep_core::greens::{
    dispersion_mass_points, weight_hamiltonian, weight_hamiltonian_dispersion, weight_modified, weight_modified_dispersion,
};
use trarep_core::potentials::{check_printed_form, induced_potential_grid, matrix_elements, ReconstructionMode};
use trarep_core::quadrature::basis_integrals;
use trarep_core::recursion::InitialValues;
use trarep_core::repro::{self, chebyshev_weight_closed_form, Target};
use trarep_core::spectra::{
    find_induced_bound_states, hamiltonian_matrix, spectrum_frame, sweep_alpha, SpectrumReport, BOUND_STABILITY, DEFAULT_SIZE,
};
use trarep_core::tridiag::eigenvalues;
use trarep_core::systems::{basis_values, coefficient_stream, reference_weight, SystemClass};
use trarep_core::wavefunctions::{
    bound_level, is_reference, psi_continuous, psi_continuous_partial, psi_level, reference_closed_form, StateLabel,
    TERM_CAP,
};
use trarep_core::Error;

use crate::config::RunConfig;
use crate::error::{CliError, EXIT_INVARIANT, EXIT_NONCONVERGENCE, EXIT_PASS};
use crate::output::{finite_or_null, write_artifacts, Table};

pub const DEFAULT_GREEN_DEPTH: usize = 1000;
pub const DEFAULT_QUAD_ORDER: usize = 32;
pub const DEFAULT_SWEEP_SIZE: usize = 500;
pub const DEFAULT_SERIES_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ComputeKind {
    Spectrum,
    Weights,
    Potential,
    Wavefunction,
    SweepAlpha,
}

impl ComputeKind {
    pub fn name(self) -> &'static str {
        match self {
            ComputeKind::Spectrum => "spectrum",
            ComputeKind::Weights => "weights",
            ComputeKind::Potential => "potential",
            ComputeKind::Wavefunction => "wavefunction",
            ComputeKind::SweepAlpha => "sweep-alpha",
        }
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn out_path(out: Option<&Path>, stem: &str) -> PathBuf {
    out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(format!("{stem}.csv")))
}

pub fn repro(target: Target, out: Option<&Path>) -> Result<i32, CliError> {
    let table = repro::run(target)?;
    let path = out_path(out, target.name());
    let csv = Table { columns: table.columns.clone(), rows: table.rows.clone() };
    let checks: Vec<Value> = table
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "computed": finite_or_null(c.computed),
                "expected": c.expected,
                "tolerance": c.tolerance,
                "passed": c.passed,
            })
        })
        .collect();
    let report = json!({ "passed": table.passed(), "checks": checks, "notes": table.notes });
    write_artifacts(&path, &csv, &format!("repro {}", target.name()), json!({ "target": target.name() }), report)?;
    let passed = table.checks.iter().filter(|c| c.passed).count();
    println!("{}: {passed}/{} checks passed, wrote {}", target.name(), table.checks.len(), path.display());
    for c in table.failures() {
        eprintln!(
            "FAIL {}: computed {} expected {} (tolerance {:e}, difference {:e})",
            c.name,
            c.computed,
            c.expected,
            c.tolerance,
            (c.computed - c.expected).abs()
        );
    }
    Ok(if table.passed() { EXIT_PASS } else { EXIT_INVARIANT })
}

pub fn compute(kind: ComputeKind, cfg: &RunConfig) -> Result<i32, CliError> {
    let class = cfg.system_class()?;
    let path = out_path(cfg.out.as_deref(), kind.name());
    let mut parameters = serde_json::to_value(cfg)?;
    parameters["resolved_class"] = serde_json::to_value(class)?;
    let (table, report, code) = match kind {
        ComputeKind::Spectrum => spectrum(&class, cfg)?,
        ComputeKind::Weights => weights(&class, cfg)?,
        ComputeKind::Potential => potential(&class, cfg)?,
        ComputeKind::Wavefunction => wavefunction(&class, cfg)?,
        ComputeKind::SweepAlpha => sweep(&class, cfg)?,
    };
    if kind != ComputeKind::SweepAlpha {
        let init = cfg.initial_values(&class)?;
        parameters["resolved_init"] = json!({ "alpha": init.alpha, "beta": init.beta });
    }
    write_artifacts(&path, &table, &format!("compute {}", kind.name()), parameters, report)?;
    println!("{}: wrote {} rows to {}", kind.name(), table.rows.len(), path.display());
    Ok(code)
}

type Computed = (Table, Value, i32);

fn bound_flags(report: &SpectrumReport) -> Vec<Option<bool>> {
    let mut flags = vec![None; report.eigenvalues.len()];
    for b in &report.bound_states {
        if let Some(i) = report.eigenvalues.iter().position(|&e| e == b.energy) {
            flags[i] = Some(b.converged);
        }
    }
    flags
}

fn spectrum(class: &SystemClass, cfg: &RunConfig) -> Result<Computed, CliError> {
    let init = cfg.initial_values(class)?;
    let size = cfg.matrix_size.unwrap_or(DEFAULT_SIZE);
    let tol = cfg.tol.unwrap_or(BOUND_STABILITY);
    let report = spectrum_frame(class, init, size, tol)?;
    let mut table = Table::new(&["index", "energy", "bound", "converged"]);
    for (i, (e, f)) in report.eigenvalues.iter().zip(bound_flags(&report)).enumerate() {
        table.rows.push(vec![i as f64, *e, flag(f.is_some()), flag(f.unwrap_or(false))]);
    }
    let summary = json!({
        "matrix_size": size,
        "stability_tolerance": tol,
        "continuum_edge": report.continuum_edge,
        "bound_states": report.bound_states,
        "resonance_candidate": report.resonance_candidate,
    });
    Ok((table, summary, EXIT_PASS))
}

fn weights(class: &SystemClass, cfg: &RunConfig) -> Result<Computed, CliError> {
    let init = cfg.initial_values(class)?;
    let zs = cfg.grid_points()?;
    let depth = cfg.matrix_size.unwrap_or(DEFAULT_GREEN_DEPTH);
    let stream = coefficient_stream(class)?;
    let cheb = matches!(class, SystemClass::Chebyshev);
    let mut cols =
        vec!["z", "energy", "rho", "rho_wronskian", "rho_hamiltonian", "rho_dispersion", "rho_hamiltonian_dispersion"];
    if cheb {
        cols.push("rho_closed_form");
    }
    let mut table = Table::new(&cols);
    let mut worst_route = 0.0f64;
    let mut worst_dispersion = 0.0f64;
    for &z in &zs {
        let rho = weight_modified(&stream, init, z, depth, None)?;
        let rho_w = weight_modified(&stream, init, z, depth, Some(reference_weight(class, z)?))?;
        let rho_h = weight_hamiltonian(&stream, init, z, depth)?;
        let rho_d = weight_modified_dispersion(class, init, z)?;
        let rho_hd = weight_hamiltonian_dispersion(class, init, z)?;
        worst_route = worst_route.max((rho - rho_w).abs());
        worst_dispersion = worst_dispersion.max((rho_h - rho_hd).abs());
        let mut row = vec![z, class.energy_from_z(z), rho, rho_w, rho_h, rho_d, rho_hd];
        if cheb {
            row.push(chebyshev_weight_closed_form(init, z));
        }
        table.rows.push(row);
    }
    let mass_points = match find_induced_bound_states(class, init, DEFAULT_SIZE) {
        Ok(points) => json!(points
            .iter()
            .map(|p| json!({ "energy": p.energy, "z": class.z_from_energy(p.energy), "weight": p.weight }))
            .collect::<Vec<_>>()),
        Err(Error::Unsupported(_)) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let dispersion_points = match dispersion_mass_points(class, init, dispersion_floor(class, init)?) {
        Ok(points) => json!(points
            .iter()
            .map(|&(z, w)| json!({ "energy": class.energy_from_z(z), "z": z, "weight": w }))
            .collect::<Vec<_>>()),
        Err(Error::Unsupported(_)) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let report = json!({
        "continued_fraction_depth": depth,
        "dispersion_mass_points": dispersion_points,
        "max_route_difference": worst_route,
        "max_dispersion_difference": worst_dispersion,
        "mass_points": mass_points,
    });
    Ok((table, report, EXIT_PASS))
}

/// Search floor for bound states: well below the lowest eigenvalue of a small truncation.
fn dispersion_floor(class: &SystemClass, init: InitialValues) -> Result<f64, CliError> {
    let lowest = eigenvalues(&hamiltonian_matrix(class, init, 100)?)?[0];
    Ok(2.0 * class.z_from_energy(lowest).min(-1.0) - 10.0)
}

fn potential(class: &SystemClass, cfg: &RunConfig) -> Result<Computed, CliError> {
    let init = cfg.initial_values(class)?;
    let xs = cfg.grid_points()?;
    let order = cfg.quad_order.unwrap_or(DEFAULT_QUAD_ORDER);
    let exact = induced_potential_grid(class, init, &xs, ReconstructionMode::Exact)?;
    let quad = induced_potential_grid(class, init, &xs, ReconstructionMode::Quadrature(order))?;
    let position = if class.is_radial() { "r" } else { "x" };
    let mut table = Table::new(&[position, "v_exact", "v_quadrature"]);
    let mut worst = 0.0f64;
    for ((x, e), q) in xs.iter().zip(&exact).zip(&quad) {
        worst = worst.max((e - q).abs());
        table.rows.push(vec![*x, *e, *q]);
    }
    let elements = matrix_elements(class, init)?;
    let integrals = basis_integrals(class, 1, order)?;
    let printed = check_printed_form(class, init, &xs, 1e-10)?;
    let expected_mismatch = matches!(class, SystemClass::Free1DOdd { .. });
    let report = json!({
        "matrix_elements": elements,
        "quadrature_order": order,
        "basis_integrals": { "exact": integrals.exact, "quadrature": integrals.approx },
        "max_abs_quadrature_error": worst,
        "printed_form": {
            "check": printed,
            "expected_mismatch": expected_mismatch,
        },
    });
    Ok((table, report, EXIT_PASS))
}

fn wavefunction(class: &SystemClass, cfg: &RunConfig) -> Result<Computed, CliError> {
    let init = cfg.initial_values(class)?;
    let xs = cfg.grid_points()?;
    let tol = cfg.tol.unwrap_or(DEFAULT_SERIES_TOL);
    let n_terms = cfg.terms.unwrap_or(TERM_CAP);
    let state = match (cfg.energy, cfg.level) {
        (Some(e), None) => StateLabel::Energy(e),
        (None, Some(j)) => StateLabel::Level(j),
        _ => return Err(CliError::Config("give exactly one of --energy and --level".into())),
    };
    let closed_form = is_reference(class, init)? && reference_closed_form(class, state, xs[0]).is_ok();
    let mut cols = vec!["x", "psi", "terms", "converged"];
    if closed_form {
        cols.insert(2, "psi_closed_form");
    }
    let mut table = Table::new(&cols);
    let level = match state {
        StateLabel::Level(j) => Some(bound_level(class, init, j)?),
        StateLabel::Energy(_) => None,
    };
    let mut unconverged = 0usize;
    for &x in &xs {
        let attempt = match (state, &level) {
            (StateLabel::Energy(e), _) => psi_continuous(class, init, e, x, tol),
            (_, Some(lv)) => psi_level(class, lv, x, tol),
            _ => unreachable!(),
        };
        let (value, terms, converged) = match attempt {
            Ok(r) => (r.value, r.terms_used, true),
            Err(Error::NonConvergence(_)) => {
                unconverged += 1;
                let partial = match (state, &level) {
                    (StateLabel::Energy(e), _) => psi_continuous_partial(class, init, e, &[x], n_terms)?[0],
                    (_, Some(lv)) => {
                        let n = n_terms.min(lv.coefficients.len());
                        let phi = basis_values(class, n - 1, x)?;
                        lv.g0 * lv.coefficients.iter().zip(&phi).map(|(c, p)| c * p).sum::<f64>()
                    }
                    _ => unreachable!(),
                };
                (partial, n_terms, false)
            }
            Err(e) => return Err(e.into()),
        };
        let mut row = vec![x, value, terms as f64, flag(converged)];
        if closed_form {
            row.insert(2, reference_closed_form(class, state, x)?);
        }
        table.rows.push(row);
    }
    let report = json!({
        "state": state,
        "series_tolerance": tol,
        "fallback_terms": n_terms,
        "unconverged_points": unconverged,
        "energy": level.as_ref().map(|l| l.energy),
    });
    if unconverged > 0 {
        eprintln!("{unconverged} of {} points did not converge; their values are {n_terms}-term partial sums", xs.len());
    }
    Ok((table, report, if unconverged > 0 { EXIT_NONCONVERGENCE } else { EXIT_PASS }))
}

fn sweep(class: &SystemClass, cfg: &RunConfig) -> Result<Computed, CliError> {
    let need = |v: Option<f64>, f: &str| v.ok_or_else(|| CliError::Config(format!("sweep-alpha needs --{f}")));
    let from = need(cfg.alpha_from, "alpha-from")?;
    let to = need(cfg.alpha_to, "alpha-to")?;
    let steps = cfg.steps.ok_or_else(|| CliError::Config("sweep-alpha needs --steps".into()))?;
    let size = cfg.matrix_size.unwrap_or(DEFAULT_SWEEP_SIZE);
    let beta = cfg.sweep_beta(class)?;
    let frames = sweep_alpha(class, beta, from, to, steps, size).map_err(|e| match e {
        Error::Domain(m) => CliError::Config(m),
        other => other.into(),
    })?;
    let mut table = Table::new(&["frame", "alpha", "index", "energy", "bound", "resonance"]);
    let mut summary = Vec::new();
    for (f, frame) in frames.iter().enumerate() {
        let flags = bound_flags(frame);
        let resonance = frame.resonance_candidate.map(|r| r.energy);
        for (i, e) in frame.eigenvalues.iter().enumerate() {
            let bound = flags[i] == Some(true);
            table.rows.push(vec![f as f64, frame.alpha, i as f64, *e, flag(bound), flag(resonance == Some(*e))]);
        }
        summary.push(json!({
            "alpha": frame.alpha,
            "bound_states": frame.bound_states,
            "resonance_candidate": frame.resonance_candidate,
        }));
    }
    let init = InitialValues { alpha: from, beta };
    let report = json!({ "matrix_size": size, "beta": beta, "first_alpha": init.alpha, "frames": summary });
    Ok((table, report, EXIT_PASS))
}
