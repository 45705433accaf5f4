//! Reproduction of the published tables and closed forms as plain numeric
//! tables with per-value checks against the published numbers.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::greens::{boundary_limit, green_modified, weight_modified};
use crate::recursion::{CoefficientStream, InitialValues};
use crate::spectra::{
    critical_alpha, energy_spectrum, find_induced_bound_states, CriticalAlphaOptions, BOUND_STABILITY,
};
use crate::systems::{coefficient_stream, discrete_spectrum, SystemClass};

pub const TABLE1_PUBLISHED: [f64; 11] = [
    2.931422, 11.002991, 18.210032, 24.857519, 31.202564, 37.373300, 43.450120, 49.481632, 55.493586, 61.497851,
    67.499303,
];
pub const TABLE2_PUBLISHED: [f64; 5] = [-2.014847, -1.029680, -0.510073, -0.393703, -0.051556];
pub const TABLE3_PUBLISHED: [f64; 4] = [0.517974, 0.252486, 0.152709, 0.104756];
pub const BOUND34_PUBLISHED: f64 = -34.021;

pub const TABLE1_SIZE: usize = 2000;
/// Truncation at which the published Morse levels are reproduced.
pub const TABLE2_SIZE: usize = 1000;
/// Truncation at which the published critical couplings are reproduced.
pub const TABLE3_SIZE: usize = 100;
pub const BOUND34_SIZE: usize = 2000;

/// The `(α, β)` pairs of the Chebyshev closed-form comparison.
pub const CHEB_PAIRS: [(f64, f64); 5] = [(2.0, 0.0), (1.0, 0.0), (2.0, 1.0), (2.0, -1.0), (1.5, 0.3)];
const CHEB_GRID_POINTS: usize = 39;
const CHEB_DEPTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Table1,
    Table2,
    Table3,
    Bound34,
    Chebweights,
}

impl Target {
    pub const ALL: [Target; 5] = [Target::Table1, Target::Table2, Target::Table3, Target::Bound34, Target::Chebweights];

    pub fn name(self) -> &'static str {
        match self {
            Target::Table1 => "table1",
            Target::Table2 => "table2",
            Target::Table3 => "table3",
            Target::Bound34 => "bound34",
            Target::Chebweights => "chebweights",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }
}

/// One comparison of a computed value against its expected value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub computed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, computed: f64, expected: f64, tolerance: f64) -> Self {
        let passed = (computed - expected).abs() <= tolerance;
        Self { name: name.into(), computed, expected, tolerance, passed }
    }

    fn flag(name: impl Into<String>, holds: bool) -> Self {
        let v = if holds { 1.0 } else { 0.0 };
        Self { name: name.into(), computed: v, expected: 1.0, tolerance: 0.0, passed: holds }
    }
}

/// A numeric table with its checks. Flags are stored as `0`/`1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproTable {
    pub target: Target,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub checks: Vec<Check>,
    /// Facts about the run that a reader of the table should know.
    pub notes: Vec<String>,
}

impl ReproTable {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn columns(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

pub fn run(target: Target) -> Result<ReproTable> {
    match target {
        Target::Table1 => table1(),
        Target::Table2 => table2(),
        Target::Table3 => table3(),
        Target::Bound34 => bound34(),
        Target::Chebweights => chebweights(),
    }
}

pub fn table1_class() -> SystemClass {
    SystemClass::Oscillator3D { lambda: 1.0, l: 1, kappa: 3.0 }
}

pub fn table1_init() -> InitialValues {
    InitialValues { alpha: -0.5, beta: -3.0 }
}

pub fn table2_class() -> SystemClass {
    SystemClass::Morse1D { lambda: 0.5, mu: -10.0, nu: 16.0 }
}

pub fn table2_init() -> InitialValues {
    InitialValues { alpha: -1.0, beta: 4.0 }
}

pub fn table1() -> Result<ReproTable> {
    let class = table1_class();
    let report = energy_spectrum(&class, table1_init(), TABLE1_SIZE, BOUND_STABILITY)?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for (j, &published) in TABLE1_PUBLISHED.iter().enumerate() {
        let reference = discrete_spectrum(&class, j)?.energy;
        let state = report.bound_states[j];
        rows.push(vec![j as f64, reference, state.energy, published, state.energy - published, flag(state.converged)]);
        checks.push(Check::new(format!("e_modified[{j}]"), state.energy, published, 1e-4));
        checks.push(Check::new(format!("e_reference[{j}]"), reference, 3.0 * (2.0 * j as f64 + 2.5), 1e-8));
    }
    Ok(ReproTable {
        target: Target::Table1,
        columns: columns(&["j", "e_reference", "e_modified", "e_published", "difference", "converged"]),
        rows,
        checks,
        notes: vec![format!("matrix size {TABLE1_SIZE}, levels checked against {}", 2 * TABLE1_SIZE)],
    })
}

pub fn table2() -> Result<ReproTable> {
    let class = table2_class();
    let report = energy_spectrum(&class, table2_init(), TABLE2_SIZE, BOUND_STABILITY)?;
    if report.bound_states.len() < TABLE2_PUBLISHED.len() {
        return Err(Error::NonConvergence(format!(
            "expected {} negative levels, found {}",
            TABLE2_PUBLISHED.len(),
            report.bound_states.len()
        )));
    }
    let (lambda, mu) = (0.5, -10.0);
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut unconverged = Vec::new();
    for (j, &published) in TABLE2_PUBLISHED.iter().enumerate() {
        let reference = discrete_spectrum(&class, j)?.energy;
        let state = report.bound_states[j];
        if !state.converged {
            unconverged.push(j);
        }
        rows.push(vec![j as f64, reference, state.energy, published, state.energy - published, flag(state.converged)]);
        checks.push(Check::new(format!("e_modified[{j}]"), state.energy, published, 1e-4));
        let exact = -0.5 * lambda * lambda * (j as f64 + 0.5 * (mu + 1.0)).powi(2);
        checks.push(Check::new(format!("e_reference[{j}]"), reference, exact, 1e-8));
    }
    let mut notes = vec![format!("matrix size {TABLE2_SIZE}")];
    if !unconverged.is_empty() {
        notes.push(format!(
            "levels {unconverged:?} move by more than {BOUND_STABILITY:e} relative when the matrix size is doubled"
        ));
    }
    Ok(ReproTable {
        target: Target::Table2,
        columns: columns(&["j", "e_reference", "e_modified", "e_published", "difference", "converged"]),
        rows,
        checks,
        notes,
    })
}

/// Critical couplings at the published truncation, the N-extrapolated
/// predicate, the single-size study and its Aitken limit.
pub fn table3() -> Result<ReproTable> {
    let rows: Vec<Vec<f64>> = (0..4u32)
        .into_par_iter()
        .map(|l| {
            let class = SystemClass::Free3D { lambda: 1.0, l };
            let alpha_hat = coefficient_stream(&class)?.alpha_hat();
            let single = critical_alpha(1.0, l, &CriticalAlphaOptions::single_size(TABLE3_SIZE, alpha_hat))?;
            let extrapolated = critical_alpha(1.0, l, &CriticalAlphaOptions::extrapolated(1.0, alpha_hat))?;
            let mut row = vec![l as f64, TABLE3_PUBLISHED[l as usize], single.alpha, extrapolated.alpha];
            row.extend(single.study.iter().skip(1).map(|r| r.alpha));
            row.push(single.limit.unwrap_or(f64::NAN));
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut checks = Vec::new();
    for row in &rows {
        let l = row[0] as usize;
        checks.push(Check::new(format!("alpha_cr[{l}]"), row[2], row[1], 1e-2));
    }
    let monotone = rows.windows(2).all(|w| w[1][2] < w[0][2]);
    checks.push(Check::flag("alpha_cr strictly decreasing in l", monotone));
    let worst_extrapolated = rows.iter().map(|r| (r[3] - r[1]).abs()).fold(0.0, f64::max);
    Ok(ReproTable {
        target: Target::Table3,
        columns: columns(&[
            "l",
            "alpha_published",
            "alpha_n100",
            "alpha_extrapolated",
            "alpha_n1000",
            "alpha_n2000",
            "alpha_n4000",
            "alpha_limit",
        ]),
        rows,
        checks,
        notes: vec![
            format!("alpha_n100 decides existence by the sign of the lowest eigenvalue at N = {TABLE3_SIZE}"),
            "alpha_extrapolated requires E < -1e-6 and decreasing over N = 1000, 2000, 4000".into(),
            format!("largest |alpha_extrapolated - alpha_published| = {worst_extrapolated:.6}"),
            "alpha_limit is the Aitken limit of the N = 1000, 2000, 4000 crossings".into(),
        ],
    })
}

pub fn bound34() -> Result<ReproTable> {
    let class = SystemClass::Free3D { lambda: 1.0, l: 1 };
    let beta = coefficient_stream(&class)?.beta_hat();
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for alpha in [-0.03, -100.0] {
        let init = InitialValues::new(alpha, beta)?;
        let states = find_induced_bound_states(&class, init, BOUND34_SIZE)?;
        for s in &states {
            rows.push(vec![alpha, s.energy, s.weight.unwrap_or(f64::NAN)]);
        }
        checks.push(Check::new(format!("bound-state count at alpha = {alpha}"), states.len() as f64, 1.0, 0.0));
        let energy = states.first().map_or(f64::NAN, |s| s.energy);
        if alpha == -0.03 {
            checks.push(Check::new("energy at alpha = -0.03", energy, BOUND34_PUBLISHED, 0.05));
        } else {
            checks.push(Check::flag("energy at alpha = -100 lies in (-0.5, 0)", energy > -0.5 && energy < 0.0));
        }
    }
    Ok(ReproTable {
        target: Target::Bound34,
        columns: columns(&["alpha", "energy", "weight"]),
        rows,
        checks,
        notes: vec![format!("matrix size {BOUND34_SIZE}; only levels stable under doubling are listed")],
    })
}

/// Closed-form continuous weight of the Chebyshev class for general `(α, β)`.
pub fn chebyshev_weight_closed_form(init: InitialValues, x: f64) -> f64 {
    if x.abs() >= 1.0 {
        return 0.0;
    }
    let (a, b) = (init.alpha, init.beta);
    2.0 * (1.0 - x * x).sqrt() / PI / (1.0 + (a * x - b) * ((a - 2.0) * x - b))
}

/// Closed-form boundary value `G(x + i0)` of the Chebyshev class for `|x| < 1`.
pub fn chebyshev_green_closed_form(init: InitialValues, x: f64) -> Complex64 {
    let s = (1.0 - x * x).sqrt();
    let num = Complex64::new(-2.0 * x, 2.0 * s);
    let den = 1.0 + ((init.alpha - 2.0) * x - init.beta) * Complex64::new(x, -s);
    num / den
}

/// Boundary value of the modified Green's function from the continued fraction.
pub fn chebyshev_green_pipeline(init: InitialValues, x: f64) -> Result<Complex64> {
    let stream = coefficient_stream(&SystemClass::Chebyshev)?;
    let re = boundary_limit(&stream, |eps| Ok(green_modified(&stream, init, Complex64::new(x, eps), CHEB_DEPTH)?.re))?;
    let im = boundary_limit(&stream, |eps| Ok(green_modified(&stream, init, Complex64::new(x, eps), CHEB_DEPTH)?.im))?;
    Ok(Complex64::new(re, im))
}

pub fn chebweights() -> Result<ReproTable> {
    let stream = coefficient_stream(&SystemClass::Chebyshev)?;
    let xs: Vec<f64> =
        (0..CHEB_GRID_POINTS).map(|i| -0.95 + 1.9 * i as f64 / (CHEB_GRID_POINTS - 1) as f64).collect();
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for (alpha, beta) in CHEB_PAIRS {
        let init = InitialValues::new(alpha, beta)?;
        let mut worst_rho = 0.0f64;
        let mut worst_green = 0.0f64;
        for &x in &xs {
            let rho = weight_modified(&stream, init, x, CHEB_DEPTH, None)?;
            let rho_exact = chebyshev_weight_closed_form(init, x);
            let g = chebyshev_green_pipeline(init, x)?;
            let g_exact = chebyshev_green_closed_form(init, x);
            worst_rho = worst_rho.max((rho - rho_exact).abs());
            worst_green = worst_green.max((g - g_exact).norm());
            rows.push(vec![alpha, beta, x, rho, rho_exact, g.re, g.im, g_exact.re, g_exact.im]);
        }
        checks.push(Check::new(format!("weight ({alpha}, {beta})"), worst_rho, 0.0, 1e-6));
        checks.push(Check::new(format!("green ({alpha}, {beta})"), worst_green, 0.0, 1e-6));
    }
    for (beta, sign) in [(1.0, 1.0), (-1.0, -1.0)] {
        let init = InitialValues::new(2.0, beta)?;
        let worst = xs
            .iter()
            .map(|&x| {
                let named = ((1.0 + sign * x) / (1.0 - sign * x)).sqrt() / PI;
                Ok((weight_modified(&stream, init, x, CHEB_DEPTH, None)? - named).abs())
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        checks.push(Check::new(format!("third/fourth-kind weight (2, {beta})"), worst, 0.0, 1e-6));
    }
    Ok(ReproTable {
        target: Target::Chebweights,
        columns: columns(&[
            "alpha",
            "beta",
            "x",
            "rho",
            "rho_closed_form",
            "green_re",
            "green_im",
            "green_closed_form_re",
            "green_closed_form_im",
        ]),
        rows,
        checks,
        notes: vec![format!("continued fraction depth {CHEB_DEPTH} closed by the exact constant tail on the real axis")],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_names_round_trip() {
        for t in Target::ALL {
            assert_eq!(Target::parse(t.name()), Some(t));
        }
        assert_eq!(Target::parse("table4"), None);
    }

    #[test]
    fn closed_forms_at_reference() {
        let init = InitialValues { alpha: 2.0, beta: 0.0 };
        let x = 0.4;
        let g = chebyshev_green_closed_form(init, x);
        assert!((g.re + 0.8).abs() < 1e-15);
        assert!((g.im / PI - chebyshev_weight_closed_form(init, x)).abs() < 1e-15);
    }
}
