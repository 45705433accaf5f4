//! Point-wise series evaluation of the wavefunctions and the closed-form
//! reference solutions they are compared against.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greens::{mass_point_weight, minimal_solution};
use crate::recursion::{eval_p, CoefficientStream, InitialValues, RowZeroReplaced};
use crate::specfun::{bessel_j_half, hyp_terminating_real, ln_gamma};
use crate::spectra::bound_state_z;
use crate::systems::{basis_values, coefficient_stream, discrete_spectrum, f0_g0, SpectralArg, SystemClass};

/// Hard cap on the number of series terms.
pub const TERM_CAP: usize = 4000;

/// Consecutive small terms required before the series is truncated.
const QUIET_RUN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    /// Largest of the last few terms relative to the largest term seen.
    pub tail_estimate: f64,
}

/// Whether `init` is the reference pair of the class, up to rounding.
pub fn is_reference(class: &SystemClass, init: InitialValues) -> Result<bool> {
    let r = coefficient_stream(class)?.reference_init();
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-13 * a.abs().max(b.abs()).max(1.0);
    Ok(close(r.alpha, init.alpha) && close(r.beta, init.beta))
}

/// Sums `prefactor · Σ c_n φ_n(x)` with the truncation rule applied to full terms.
fn sum_series(class: &SystemClass, coefficients: &[f64], prefactor: f64, x: f64, tol: f64) -> Result<SeriesResult> {
    let phi = basis_values(class, coefficients.len() - 1, x)?;
    let mut total = 0.0;
    let mut running_max = 0.0f64;
    let mut quiet = 0;
    let mut recent_max = 0.0f64;
    for (n, (c, p)) in coefficients.iter().zip(&phi).enumerate() {
        let term = prefactor * c * p;
        if !term.is_finite() {
            return Err(Error::NonFinite("series term"));
        }
        total += term;
        running_max = running_max.max(term.abs());
        if term.abs() <= tol * running_max {
            quiet += 1;
            recent_max = recent_max.max(term.abs());
        } else {
            quiet = 0;
            recent_max = 0.0;
        }
        if quiet >= QUIET_RUN {
            let tail = if running_max > 0.0 { recent_max / running_max } else { 0.0 };
            return Ok(SeriesResult { value: total, terms_used: n + 1, tail_estimate: tail });
        }
    }
    Err(Error::NonConvergence(format!(
        "series not converged after {} terms at x = {x}",
        coefficients.len()
    )))
}

/// Continuum wavefunction `f_0(E) Σ P_n(z) φ_n(x)`.
///
/// `P_n` are the spectral polynomials of the total Hamiltonian's Jacobi matrix
/// (first row `(β/α, 1/α)`); `f_0` is the reference energy factor.
pub fn psi_continuous(class: &SystemClass, init: InitialValues, energy: f64, x: f64, tol: f64) -> Result<SeriesResult> {
    let coefficients = continuum_coefficients(class, init, energy)?;
    let f0 = f0_g0(class, SpectralArg::Z(class.z_from_energy(energy)))?;
    sum_series(class, &coefficients, f0, x, tol)
}

/// Continuum wavefunction on a grid of positions, sharing the coefficients.
pub fn psi_continuous_grid(
    class: &SystemClass,
    init: InitialValues,
    energy: f64,
    xs: &[f64],
    tol: f64,
) -> Result<Vec<SeriesResult>> {
    let coefficients = continuum_coefficients(class, init, energy)?;
    let f0 = f0_g0(class, SpectralArg::Z(class.z_from_energy(energy)))?;
    xs.iter().map(|&x| sum_series(class, &coefficients, f0, x, tol)).collect()
}

/// Plain partial sum over the first `n_terms` terms of the continuum series,
/// with no truncation rule applied.
pub fn psi_continuous_partial(
    class: &SystemClass,
    init: InitialValues,
    energy: f64,
    xs: &[f64],
    n_terms: usize,
) -> Result<Vec<f64>> {
    if n_terms == 0 || n_terms > TERM_CAP {
        return Err(Error::Domain(format!("term count must lie in 1..={TERM_CAP}, got {n_terms}")));
    }
    let mut coefficients = continuum_coefficients(class, init, energy)?;
    coefficients.truncate(n_terms);
    let f0 = f0_g0(class, SpectralArg::Z(class.z_from_energy(energy)))?;
    xs.iter()
        .map(|&x| {
            let phi = basis_values(class, n_terms - 1, x)?;
            Ok(f0 * coefficients.iter().zip(&phi).map(|(c, p)| c * p).sum::<f64>())
        })
        .collect()
}

fn continuum_coefficients(class: &SystemClass, init: InitialValues, energy: f64) -> Result<Vec<f64>> {
    let Some((lo, hi)) = class.continuum() else {
        return Err(Error::Unsupported(format!("{} has no continuous spectrum", class.name())));
    };
    if matches!(class, SystemClass::Chebyshev) {
        return Err(Error::Unsupported("the test class has no configuration space".into()));
    }
    if !(energy > lo && energy < hi) {
        return Err(Error::Domain(format!("energy {energy} outside the continuum ({lo}, {hi})")));
    }
    let stream = RowZeroReplaced::for_init(coefficient_stream(class)?, init);
    let z = class.z_from_energy(energy);
    Ok(eval_p(&stream, init, TERM_CAP - 1, z)?.values)
}

/// A bound level ready for series evaluation: its spectral argument, the
/// normalization `g_0` and the expansion coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundLevel {
    pub z: f64,
    pub energy: f64,
    pub g0: f64,
    pub coefficients: Vec<f64>,
}

/// Prepares level `j`. At the reference pair the closed-form level and weight
/// are used with forward recursion; otherwise the level is the `j`-th
/// eigenvalue of the total Hamiltonian, the coefficients are the decaying
/// solution and `g_0` normalizes `Σ c_n² = 1`.
pub fn bound_level(class: &SystemClass, init: InitialValues, j: usize) -> Result<BoundLevel> {
    let base = coefficient_stream(class)?;
    if is_reference(class, init)? {
        let level = discrete_spectrum(class, j)?;
        let n_top = TERM_CAP - 1;
        let coefficients = match *class {
            SystemClass::Oscillator3D { .. } => minimal_solution(&base, level.z, n_top)?,
            _ => eval_p(&base, init, n_top, level.z)?.values,
        };
        return Ok(BoundLevel { z: level.z, energy: level.energy, g0: level.weight.sqrt(), coefficients });
    }
    let z = bound_state_z(class, init, j)?;
    let stream = RowZeroReplaced::for_init(base, init);
    let coefficients = minimal_solution(&stream, z, TERM_CAP - 1)?;
    let weight = mass_point_weight(&base, init, z, TERM_CAP)?;
    Ok(BoundLevel { z, energy: class.energy_from_z(z), g0: weight.sqrt(), coefficients })
}

/// Bound-state wavefunction `g_0 Σ P_n(z_j) φ_n(x)`.
pub fn psi_discrete(class: &SystemClass, init: InitialValues, j: usize, x: f64, tol: f64) -> Result<SeriesResult> {
    let level = bound_level(class, init, j)?;
    psi_level(class, &level, x, tol)
}

pub fn psi_level(class: &SystemClass, level: &BoundLevel, x: f64, tol: f64) -> Result<SeriesResult> {
    sum_series(class, &level.coefficients, level.g0, x, tol)
}

/// A continuum energy or a discrete level index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateLabel {
    Energy(f64),
    Level(usize),
}

/// Closed-form reference solutions: `cos kx`, `sin kx`, `√(kr) J_{ℓ+1/2}(kr)`
/// with `k = √(2E)`, and the Morse bound states written with the finite
/// Bessel polynomial.
pub fn reference_closed_form(class: &SystemClass, state: StateLabel, x: f64) -> Result<f64> {
    class.validate()?;
    match (*class, state) {
        (
            SystemClass::Free1DEven { .. } | SystemClass::Free1DOdd { .. } | SystemClass::Free3D { .. },
            StateLabel::Energy(energy),
        ) => {
            if !(energy > 0.0) {
                return Err(Error::Domain(format!("closed form needs a positive energy, got {energy}")));
            }
            let k = (2.0 * energy).sqrt();
            match *class {
                SystemClass::Free1DEven { .. } => Ok((k * x).cos()),
                SystemClass::Free1DOdd { .. } => Ok((k * x).sin()),
                SystemClass::Free3D { l, .. } => {
                    if x < 0.0 {
                        return Err(Error::Domain(format!("radius must be non-negative, got {x}")));
                    }
                    if x == 0.0 {
                        return Ok(0.0);
                    }
                    Ok((k * x).sqrt() * bessel_j_half(l as usize, k * x)?)
                }
                _ => unreachable!(),
            }
        }
        (SystemClass::Morse1D { lambda, mu, .. }, StateLabel::Level(j)) => {
            let n_top = class.morse_n_max().ok_or_else(|| Error::Domain("no bound levels".into()))?;
            if j > n_top {
                return Err(Error::Domain(format!("level {j} exceeds the largest bound level {n_top}")));
            }
            let jf = j as f64;
            let y = (-lambda * x).exp();
            let log_norm = 0.5 * ((-lambda * (2.0 * jf + mu + 1.0)).ln() - ln_gamma(jf + 1.0)? - ln_gamma(-jf - mu)?);
            let bessel = hyp_terminating_real(&[-jf, jf + mu + 1.0], &[], -1.0 / y, j)?;
            Ok((log_norm - 0.5 * (mu + 1.0) * y.ln() - 0.5 * y).exp() * bessel)
        }
        (c, a) => Err(Error::Unsupported(format!("no closed form for {} at {a:?}", c.name()))),
    }
}
