//! The invariant suite behind `trarep selftest`.

use num_complex::Complex64;
use serde::Serialize;

use trarep_core::greens::{green_modified_paths, green_reference, mass_point_weight, PATH_TOLERANCE};
use trarep_core::potentials::{induced_potential_grid, ReconstructionMode};
use trarep_core::quadrature::gauss_rule;
use trarep_core::recursion::{eval_p, wronskian, wronskian_at_level, CoefficientStream, InitialValues, RowZeroReplaced};
use trarep_core::spectra::{critical_alpha, hamiltonian_matrix, CriticalAlphaOptions};
use trarep_core::systems::{coefficient_stream, discrete_spectrum, SystemClass};
use trarep_core::tridiag::{eigenvalues_ql, TridiagonalMatrix};

use crate::error::{EXIT_INVARIANT, EXIT_PASS};

pub const NONZERO_OFFDIAGONAL: &str = "b_n != 0";
pub const WRONSKIAN: &str = "wronskian n-independence";
pub const HERGLOTZ: &str = "herglotz positivity";
pub const DUALITY: &str = "zeros-eigenvalues duality";
pub const GAUSS_NORMALIZATION: &str = "gauss weights positive with unit sum";
pub const REFERENCE_POTENTIAL: &str = "reference potential vanishes";
pub const GREEN_ROUTES: &str = "modified green routes agree";
pub const ROW_ZERO: &str = "row-0 equivalence";
pub const LEVEL_WEIGHT: &str = "mass-point weight matches closed form";
pub const TABLE3_MONOTONE: &str = "critical alpha decreases with l";

const SCANNED_COEFFICIENTS: usize = 256;
const DUALITY_SIZE: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub invariant: &'static str,
    pub subject: String,
    pub passed: bool,
    pub detail: String,
}

fn outcome(invariant: &'static str, subject: &str, result: Result<String, String>) -> Outcome {
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Outcome { invariant, subject: subject.to_string(), passed, detail }
}

fn probe_init(stream: &dyn CoefficientStream) -> Result<InitialValues, String> {
    let r = stream.reference_init();
    InitialValues::new(0.7 * r.alpha + 0.1, r.beta - 0.5).map_err(|e| e.to_string())
}

fn check_nonzero(stream: &dyn CoefficientStream) -> Result<String, String> {
    for n in 0..SCANNED_COEFFICIENTS {
        let (a, b) = (stream.a(n), stream.b(n));
        if b == 0.0 || !b.is_finite() || !a.is_finite() {
            return Err(format!("b_{n} = {b}, a_{n} = {a}"));
        }
    }
    Ok(format!("first {SCANNED_COEFFICIENTS} coefficients finite with b_n != 0"))
}

fn check_wronskian(stream: &dyn CoefficientStream) -> Result<String, String> {
    let init = probe_init(stream)?;
    let mut worst = 0.0f64;
    for z in [0.37, 2.9] {
        let p = eval_p(stream, init, 41, z).map_err(|e| e.to_string())?;
        let r = eval_p(stream, stream.reference_init(), 41, z).map_err(|e| e.to_string())?;
        let w: f64 = wronskian(stream, init, z);
        for n in 0..40 {
            let wn = wronskian_at_level(stream, &p, &r, n);
            let scale = stream.b(n).abs() * (p.values[n] * r.values[n + 1]).abs().max((p.values[n + 1] * r.values[n]).abs())
                + w.abs();
            let rel = (wn - w).abs() / scale.max(f64::MIN_POSITIVE);
            worst = worst.max(rel);
        }
    }
    if worst <= 1e-9 {
        Ok(format!("largest relative deviation {worst:.3e}"))
    } else {
        Err(format!("relative deviation {worst:.3e} exceeds 1e-9"))
    }
}

fn check_herglotz(stream: &dyn CoefficientStream) -> Result<String, String> {
    let mut lowest = f64::INFINITY;
    for x in [-3.0, 0.5, 7.0, 30.0] {
        let g = green_reference(stream, Complex64::new(x, 1e-4), 400).map_err(|e| e.to_string())?;
        lowest = lowest.min(g.im);
    }
    if lowest >= -1e-12 {
        Ok(format!("smallest Im G = {lowest:.3e}"))
    } else {
        Err(format!("Im G = {lowest:.3e} below -1e-12"))
    }
}

fn check_duality(stream: &dyn CoefficientStream) -> Result<String, String> {
    let init = probe_init(stream)?;
    let modified = RowZeroReplaced::for_init(stream, init);
    let n = DUALITY_SIZE;
    let m = TridiagonalMatrix::new(
        (0..n).map(|k| modified.a(k)).collect(),
        (0..n - 1).map(|k| modified.b(k)).collect(),
    )
    .map_err(|e| e.to_string())?;
    let p_top = |z: f64| -> Result<f64, String> {
        Ok(*eval_p(&modified, init, n, z).map_err(|e| e.to_string())?.values.last().unwrap())
    };
    for e in eigenvalues_ql(&m).map_err(|e| e.to_string())? {
        let delta = 1e-8 * e.abs().max(1.0);
        if p_top(e - delta)? * p_top(e + delta)? > 0.0 {
            return Err(format!("no zero of P_{n} within {delta:.1e} of the eigenvalue {e}"));
        }
    }
    Ok(format!("each of the {n} eigenvalues brackets a zero of P_{n} within 1e-8 relative"))
}

/// Invariants of a bare coefficient stream. A stream with a vanishing `b_n`
/// stops after the first check.
pub fn stream_invariants(subject: &str, stream: &dyn CoefficientStream) -> Vec<Outcome> {
    let first = outcome(NONZERO_OFFDIAGONAL, subject, check_nonzero(stream));
    if !first.passed {
        return vec![first];
    }
    vec![
        first,
        outcome(WRONSKIAN, subject, check_wronskian(stream)),
        outcome(HERGLOTZ, subject, check_herglotz(stream)),
        outcome(DUALITY, subject, check_duality(stream)),
    ]
}

fn check_gauss(class: &SystemClass) -> Result<String, String> {
    let rule = gauss_rule(class, 24).map_err(|e| e.to_string())?;
    let sum: f64 = rule.weights.iter().sum();
    if rule.weights.iter().all(|w| *w > 0.0) && (sum - 1.0).abs() <= 1e-12 {
        Ok(format!("24-point weights sum to 1 within {:.1e}", (sum - 1.0).abs()))
    } else {
        Err(format!("weights sum to {sum}"))
    }
}

fn check_reference_potential(class: &SystemClass) -> Result<String, String> {
    let init = coefficient_stream(class).map_err(|e| e.to_string())?.reference_init();
    let xs: Vec<f64> = (0..61).map(|i| -3.0 + 0.1 * i as f64).map(|x| if class.is_radial() { x.abs() } else { x }).collect();
    let v = induced_potential_grid(class, init, &xs, ReconstructionMode::Exact).map_err(|e| e.to_string())?;
    let worst = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if worst <= 1e-12 {
        Ok(format!("max |V| = {worst:.1e}"))
    } else {
        Err(format!("max |V| = {worst:.3e}"))
    }
}

fn check_green_routes(class: &SystemClass) -> Result<String, String> {
    let stream = coefficient_stream(class).map_err(|e| e.to_string())?;
    let init = probe_init(&stream)?;
    let paths = green_modified_paths(&stream, init, Complex64::new(1.3, 0.1), 400).map_err(|e| e.to_string())?;
    let d = paths.relative_difference();
    if d <= PATH_TOLERANCE {
        Ok(format!("relative difference {d:.1e}"))
    } else {
        Err(format!("relative difference {d:.3e} exceeds {PATH_TOLERANCE:e}"))
    }
}

fn check_row_zero(class: &SystemClass) -> Result<String, String> {
    let stream = coefficient_stream(class).map_err(|e| e.to_string())?;
    let init = probe_init(&stream)?;
    let h = hamiltonian_matrix(class, init, 6).map_err(|e| e.to_string())?;
    let e = class.energy_scale();
    let replaced = RowZeroReplaced::for_init(&stream, init);
    let same = (0..6).all(|n| h.diag()[n] == e * replaced.a(n)) && (0..5).all(|n| h.offdiag()[n] == e * replaced.b(n));
    if same {
        Ok("first row equals (beta/alpha, 1/alpha), the rest is the reference".into())
    } else {
        Err("Hamiltonian differs from the row-replaced reference matrix".into())
    }
}

fn check_level_weight(class: &SystemClass) -> Result<String, String> {
    let stream = coefficient_stream(class).map_err(|e| e.to_string())?;
    let level = discrete_spectrum(class, 0).map_err(|e| e.to_string())?;
    let w = mass_point_weight(&stream, stream.reference_init(), level.z, 200).map_err(|e| e.to_string())?;
    let rel = (w - level.weight).abs() / level.weight;
    if rel <= 1e-6 {
        Ok(format!("level 0 weight {w:.9} (relative difference {rel:.1e})"))
    } else {
        Err(format!("recursion weight {w} against closed form {}", level.weight))
    }
}

fn has_levels(class: &SystemClass) -> bool {
    match *class {
        SystemClass::Oscillator3D { .. } => true,
        SystemClass::Morse1D { .. } => class.morse_n_max().is_some(),
        _ => false,
    }
}

/// Invariants of a system class, including those of its coefficient stream.
pub fn class_invariants(class: &SystemClass) -> Vec<Outcome> {
    let subject = describe(class);
    let mut out = match coefficient_stream(class) {
        Ok(stream) => stream_invariants(&subject, &stream),
        Err(e) => return vec![outcome(NONZERO_OFFDIAGONAL, &subject, Err(e.to_string()))],
    };
    if out.iter().any(|o| !o.passed && o.invariant == NONZERO_OFFDIAGONAL) {
        return out;
    }
    out.push(outcome(GAUSS_NORMALIZATION, &subject, check_gauss(class)));
    out.push(outcome(GREEN_ROUTES, &subject, check_green_routes(class)));
    out.push(outcome(ROW_ZERO, &subject, check_row_zero(class)));
    if !matches!(class, SystemClass::Chebyshev) {
        out.push(outcome(REFERENCE_POTENTIAL, &subject, check_reference_potential(class)));
    }
    if has_levels(class) {
        out.push(outcome(LEVEL_WEIGHT, &subject, check_level_weight(class)));
    }
    out
}

fn describe(class: &SystemClass) -> String {
    match *class {
        SystemClass::Free1DEven { lambda } | SystemClass::Free1DOdd { lambda } => format!("{} lambda={lambda}", class.name()),
        SystemClass::Free3D { lambda, l } => format!("free3d lambda={lambda} l={l}"),
        SystemClass::Oscillator3D { lambda, l, kappa } => format!("oscillator3d lambda={lambda} l={l} kappa={kappa}"),
        SystemClass::Morse1D { lambda, mu, nu } => format!("morse lambda={lambda} mu={mu} nu={nu}"),
        SystemClass::Chebyshev => "cheb".into(),
    }
}

pub fn default_classes() -> Vec<SystemClass> {
    vec![
        SystemClass::Free1DEven { lambda: 1.0 },
        SystemClass::Free1DOdd { lambda: 1.0 },
        SystemClass::Free3D { lambda: 1.0, l: 1 },
        SystemClass::Oscillator3D { lambda: 1.0, l: 1, kappa: 3.0 },
        SystemClass::Morse1D { lambda: 0.5, mu: -10.0, nu: 16.0 },
        SystemClass::Morse1D { lambda: 0.5, mu: 7.0, nu: 4.0 },
        SystemClass::Chebyshev,
    ]
}

fn check_table3_monotone() -> Result<String, String> {
    let mut values = Vec::new();
    for l in 0..4u32 {
        let class = SystemClass::Free3D { lambda: 1.0, l };
        let alpha_hat = coefficient_stream(&class).map_err(|e| e.to_string())?.alpha_hat();
        let r = critical_alpha(1.0, l, &CriticalAlphaOptions::single_size(100, alpha_hat)).map_err(|e| e.to_string())?;
        values.push(r.alpha);
    }
    if values.windows(2).all(|w| w[1] < w[0]) {
        Ok(format!("{values:.6?}"))
    } else {
        Err(format!("not strictly decreasing: {values:?}"))
    }
}

/// The full suite over the default classes.
pub fn default_suite() -> Vec<Outcome> {
    let mut out: Vec<Outcome> = default_classes().iter().flat_map(class_invariants).collect();
    out.push(outcome(TABLE3_MONOTONE, "free3d lambda=1", check_table3_monotone()));
    out
}

pub fn first_failure(results: &[Outcome]) -> Option<&Outcome> {
    results.iter().find(|o| !o.passed)
}

pub fn exit_code(results: &[Outcome]) -> i32 {
    if first_failure(results).is_some() {
        EXIT_INVARIANT
    } else {
        EXIT_PASS
    }
}
