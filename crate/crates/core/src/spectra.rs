//! Spectra of the truncated total Hamiltonian: induced bound states, the
//! critical coupling at which one appears, and resonance tracking in α sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greens::mass_point_weight;
use crate::recursion::{CoefficientStream, InitialValues};
use crate::systems::{coefficient_stream, SystemClass};
use crate::tridiag::{eigenvalues_by_index, eigenvalues_ql, TridiagonalMatrix};

/// Default truncation for spectra.
pub const DEFAULT_SIZE: usize = 2000;

/// Relative stability required of a bound state between `N` and `2N`.
pub const BOUND_STABILITY: f64 = 1e-6;

/// Step of the local α probe used by the resonance rule.
pub const ALPHA_PROBE: f64 = 1e-3;

/// Ratio by which the fastest drifting level must beat the runner-up.
pub const OUTLIER_RATIO: f64 = 5.0;

/// Levels this close (in index) to the fastest one share its drift through
/// avoided crossings and are not used as the comparison level.
pub const CLUSTER_HALF_WIDTH: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub energy: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceCandidate {
    pub energy: f64,
    /// `dE/dα` of the candidate.
    pub drift_rate: f64,
    /// Drift relative to the local level spacing, for the candidate and for the
    /// fastest level outside its cluster.
    pub score: f64,
    pub runner_up: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub alpha: f64,
    pub beta: f64,
    pub matrix_size: usize,
    pub eigenvalues: Vec<f64>,
    pub bound_states: Vec<BoundState>,
    pub continuum_edge: Option<f64>,
    pub resonance_candidate: Option<ResonanceCandidate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InducedBoundState {
    pub energy: f64,
    /// Mass of the eigenvalue in the unit-mass measure of the total Hamiltonian.
    pub weight: Option<f64>,
}

/// `(λ²/2)` times the Jacobi matrix with first row `(β/α, 1/α)`.
pub fn hamiltonian_matrix(class: &SystemClass, init: InitialValues, size: usize) -> Result<TridiagonalMatrix> {
    if size < 2 {
        return Err(Error::Domain("Hamiltonian matrix needs at least two rows".into()));
    }
    let s = coefficient_stream(class)?;
    let e = class.energy_scale();
    let mut diag: Vec<f64> = (0..size).map(|n| e * s.a(n)).collect();
    let mut off: Vec<f64> = (0..size - 1).map(|n| e * s.b(n)).collect();
    diag[0] = e * init.beta / init.alpha;
    off[0] = e / init.alpha;
    TridiagonalMatrix::new(diag, off)
}

/// Lower edge of the continuous energy spectrum, if any.
fn continuum_edge(class: &SystemClass) -> Option<f64> {
    class.continuum().map(|(lo, _)| lo)
}

fn threshold(class: &SystemClass) -> f64 {
    1e-6 * class.lambda() * class.lambda()
}

fn stable(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Eigenvalues at `N` together with the states below (or, for the bounded
/// test continuum, above) the continuum, each checked against the `2N` matrix.
pub fn energy_spectrum(class: &SystemClass, init: InitialValues, size: usize, tol: f64) -> Result<SpectrumReport> {
    let h = hamiltonian_matrix(class, init, size)?;
    let values = eigenvalues_ql(&h)?;
    let h2 = hamiltonian_matrix(class, init, 2 * size)?;
    let delta = threshold(class);
    let mut bound_states = Vec::new();
    match class.continuum() {
        None => {
            let count = (size / 4).max(1);
            let doubled = eigenvalues_by_index(&h2, 0..count)?;
            for (k, &e) in values.iter().enumerate() {
                let converged = k < count && stable(e, doubled[k], tol);
                bound_states.push(BoundState { energy: e, converged });
            }
        }
        Some((lo, hi)) => {
            let below = values.iter().take_while(|&&e| e < lo - delta).count();
            if below > 0 {
                let doubled = eigenvalues_by_index(&h2, 0..below)?;
                for k in 0..below {
                    bound_states.push(BoundState { energy: values[k], converged: stable(values[k], doubled[k], tol) });
                }
            }
            if hi.is_finite() {
                let above = values.iter().rev().take_while(|&&e| e > hi + delta).count();
                if above > 0 {
                    let n2 = 2 * size;
                    let doubled = eigenvalues_by_index(&h2, n2 - above..n2)?;
                    for k in 0..above {
                        let e = values[size - above + k];
                        bound_states.push(BoundState { energy: e, converged: stable(e, doubled[k], tol) });
                    }
                }
            }
        }
    }
    Ok(SpectrumReport {
        alpha: init.alpha,
        beta: init.beta,
        matrix_size: size,
        eigenvalues: values,
        bound_states,
        continuum_edge: continuum_edge(class),
        resonance_candidate: None,
    })
}

/// Spectral argument `z_j` of the `j`-th bound level of the total Hamiltonian.
pub fn bound_state_z(class: &SystemClass, init: InitialValues, j: usize) -> Result<f64> {
    let report = energy_spectrum(class, init, DEFAULT_SIZE, BOUND_STABILITY)?;
    let state = report
        .bound_states
        .get(j)
        .ok_or_else(|| Error::Domain(format!("level {j} does not exist ({} bound states)", report.bound_states.len())))?;
    if !state.converged {
        return Err(Error::NonConvergence(format!("level {j} at E = {} is not stable under doubling", state.energy)));
    }
    Ok(class.z_from_energy(state.energy))
}

/// Converged eigenvalues below `−δ` (`δ = 1e-6 λ²`) with their mass-point weights.
pub fn find_induced_bound_states(
    class: &SystemClass,
    init: InitialValues,
    size: usize,
) -> Result<Vec<InducedBoundState>> {
    if continuum_edge(class) != Some(0.0) {
        return Err(Error::Unsupported(format!("{} has no continuum starting at zero", class.name())));
    }
    let report = energy_spectrum(class, init, size, BOUND_STABILITY)?;
    let stream = coefficient_stream(class)?;
    Ok(report
        .bound_states
        .iter()
        .filter(|b| b.converged)
        .map(|b| InducedBoundState {
            energy: b.energy,
            weight: mass_point_weight(&stream, init, class.z_from_energy(b.energy), size).ok(),
        })
        .collect())
}

/// Settings of the critical-coupling search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalAlphaOptions {
    /// Search interval `(lo, hi)`; a bound state must exist at `lo` and not at `hi`.
    pub interval: (f64, f64),
    /// Truncations that must all show the state.
    pub sizes: Vec<usize>,
    /// Energy below which an eigenvalue counts as bound.
    pub delta: f64,
    pub tol: f64,
}

impl CriticalAlphaOptions {
    /// Existence decided at `N ∈ {1000, 2000, 4000}` with `δ = 1e-6 λ²`.
    pub fn extrapolated(lambda: f64, alpha_hat: f64) -> Self {
        Self {
            interval: (1e-3, alpha_hat),
            sizes: vec![1000, 2000, 4000],
            delta: 1e-6 * lambda * lambda,
            tol: 1e-7,
        }
    }

    /// Existence decided by the sign of the lowest eigenvalue of a single truncation.
    pub fn single_size(size: usize, alpha_hat: f64) -> Self {
        Self { interval: (1e-3, alpha_hat), sizes: vec![size], delta: 0.0, tol: 1e-7 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalAlphaRow {
    pub size: usize,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalAlphaResult {
    pub l: u32,
    pub alpha: f64,
    /// Crossing at each single truncation, for the convergence study.
    pub study: Vec<CriticalAlphaRow>,
    /// Aitken limit of the three largest truncations of the study.
    pub limit: Option<f64>,
}

/// Aitken's delta-squared limit of three successive terms; `None` when the
/// differences do not shrink geometrically.
fn aitken(a: f64, b: f64, c: f64) -> Option<f64> {
    let (d1, d2) = (b - a, c - b);
    if d2 == 0.0 {
        return Some(c);
    }
    let ratio = d2 / d1;
    if !(ratio > 0.0 && ratio < 1.0) {
        return None;
    }
    Some(c + d2 * ratio / (1.0 - ratio))
}

fn lowest_eigenvalue(class: &SystemClass, init: InitialValues, size: usize) -> Result<f64> {
    let h = hamiltonian_matrix(class, init, size)?;
    Ok(eigenvalues_by_index(&h, 0..1)?[0])
}

fn has_bound_state(class: &SystemClass, beta: f64, alpha: f64, sizes: &[usize], delta: f64) -> Result<bool> {
    let init = InitialValues::new(alpha, beta)?;
    let mut last = f64::INFINITY;
    for &n in sizes {
        let e = lowest_eigenvalue(class, init, n)?;
        if !(e < -delta) || e > last + 1e-12 * last.abs() {
            return Ok(false);
        }
        last = e;
    }
    Ok(true)
}

fn bisect_alpha(class: &SystemClass, beta: f64, opts: &CriticalAlphaOptions, sizes: &[usize]) -> Result<f64> {
    let (mut lo, mut hi) = opts.interval;
    let at_lo = has_bound_state(class, beta, lo, sizes, opts.delta)?;
    let at_hi = has_bound_state(class, beta, hi, sizes, opts.delta)?;
    if at_lo == at_hi {
        return Err(Error::Bracket(format!(
            "bound-state predicate is {at_lo} at both ends of ({lo}, {hi})"
        )));
    }
    if !at_lo {
        std::mem::swap(&mut lo, &mut hi);
    }
    while (hi - lo).abs() > opts.tol {
        let mid = 0.5 * (lo + hi);
        if has_bound_state(class, beta, mid, sizes, opts.delta)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Largest α (at `β = β̂`) below which the 3D free particle binds, with a
/// convergence study over the single truncations `{100, 1000, 2000, 4000}`.
pub fn critical_alpha(lambda: f64, l: u32, opts: &CriticalAlphaOptions) -> Result<CriticalAlphaResult> {
    let class = SystemClass::Free3D { lambda, l };
    let beta = coefficient_stream(&class)?.beta_hat();
    let alpha = bisect_alpha(&class, beta, opts, &opts.sizes)?;
    let study = [100, 1000, 2000, 4000]
        .par_iter()
        .map(|&n| {
            let single = CriticalAlphaOptions { sizes: vec![n], delta: 0.0, ..opts.clone() };
            Ok(CriticalAlphaRow { size: n, alpha: bisect_alpha(&class, beta, &single, &single.sizes)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let limit = aitken(study[1].alpha, study[2].alpha, study[3].alpha);
    Ok(CriticalAlphaResult { l, alpha, study, limit })
}

/// Drift of each positive level relative to the local spacing under `α ↦ α + Δα`.
fn resonance_candidate(class: &SystemClass, init: InitialValues, values: &[f64]) -> Result<Option<ResonanceCandidate>> {
    let probe = InitialValues::new(init.alpha + ALPHA_PROBE, init.beta)?;
    let shifted = eigenvalues_ql(&hamiltonian_matrix(class, probe, values.len())?)?;
    let first = values.iter().position(|&e| e > 0.0);
    let Some(first) = first else { return Ok(None) };
    let shift_first = shifted.iter().position(|&e| e > 0.0).unwrap_or(first);
    let offset = shift_first as isize - first as isize;
    let mut scores: Vec<(usize, f64, f64, f64)> = Vec::new();
    for k in first.max(1)..values.len() - 1 {
        let ks = k as isize + offset;
        if ks < 0 || ks as usize >= shifted.len() {
            continue;
        }
        let rate = (shifted[ks as usize] - values[k]) / ALPHA_PROBE;
        let spacing = 0.5 * (values[k + 1] - values[k - 1]);
        if spacing > 0.0 {
            scores.push((k, rate.abs() / spacing, values[k], rate));
        }
    }
    let Some(&best) = scores.iter().max_by(|a, b| a.1.total_cmp(&b.1)) else {
        return Ok(None);
    };
    let runner = scores
        .iter()
        .filter(|s| s.0.abs_diff(best.0) > CLUSTER_HALF_WIDTH)
        .map(|s| s.1)
        .fold(0.0f64, f64::max);
    if runner > 0.0 && best.1 >= OUTLIER_RATIO * runner {
        Ok(Some(ResonanceCandidate { energy: best.2, drift_rate: best.3, score: best.1, runner_up: runner }))
    } else {
        Ok(None)
    }
}

/// Spectrum at one α with resonance tracking.
pub fn spectrum_frame(class: &SystemClass, init: InitialValues, size: usize, tol: f64) -> Result<SpectrumReport> {
    let mut report = energy_spectrum(class, init, size, tol)?;
    report.resonance_candidate = resonance_candidate(class, init, &report.eigenvalues)?;
    Ok(report)
}

/// Frames at `steps` equally spaced α from `alpha_from` to `alpha_to` (inclusive).
/// A grid point at α = 0, where the initial values are undefined, is skipped.
pub fn sweep_alpha(
    class: &SystemClass,
    beta: f64,
    alpha_from: f64,
    alpha_to: f64,
    steps: usize,
    size: usize,
) -> Result<Vec<SpectrumReport>> {
    if steps < 2 {
        return Err(Error::Domain("a sweep needs at least two steps".into()));
    }
    let alphas: Vec<f64> = (0..steps)
        .map(|i| alpha_from + (alpha_to - alpha_from) * i as f64 / (steps - 1) as f64)
        .filter(|a| a.abs() > 1e-12 * (alpha_to - alpha_from).abs())
        .collect();
    alphas
        .par_iter()
        .map(|&a| spectrum_frame(class, InitialValues::new(a, beta)?, size, BOUND_STABILITY))
        .collect()
}
