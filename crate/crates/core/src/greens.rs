//! Green's functions by continued fraction and the recovery of spectral
//! weights, for both the reference and the modified initial values.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quadrature::legendre_rule;
use crate::recursion::{wronskian, CoefficientStream, InitialValues, RowZeroReplaced};
use crate::systems::{coefficient_stream, discrete_spectrum, reference_weight, SystemClass};

/// Relative tolerance for the agreement of the two modified-Green's-function paths.
pub const PATH_TOLERANCE: f64 = 1e-8;

/// Broadening values used by the Richardson extrapolation of boundary values.
pub const EPSILON_LADDER: [f64; 3] = [1e-3, 1e-4, 1e-5];

/// A single continued-fraction evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreensEvaluation {
    pub z: (f64, f64),
    pub depth: usize,
    /// `(a_∞, b_∞)` when a constant tail was used; `None` for the graded tail.
    pub terminator_params: Option<(f64, f64)>,
    pub value: (f64, f64),
}

fn pick_root(t1: Complex64, t2: Complex64, z: Complex64, scale: f64) -> Complex64 {
    if (t1.norm() - t2.norm()).abs() > 1e-12 * scale {
        return if t1.norm() < t2.norm() { t1 } else { t2 };
    }
    let want_negative = z.im >= 0.0;
    match (t1.im < t2.im, want_negative) {
        (true, true) | (false, false) => t1,
        _ => t2,
    }
}

/// Tail `T(z)` of a continued fraction with constant coefficients `(a_∞, b_∞)`.
///
/// Of the two roots of `T² − (z−a_∞)T + b_∞² = 0` the contractive one is
/// returned; on the support the one with `Im T ≤ 0` for `Im z ≥ 0`.
pub fn terminator(a_inf: f64, b_inf: f64, z: Complex64) -> Result<Complex64> {
    if b_inf == 0.0 {
        return Err(Error::Domain("terminator needs a nonzero asymptotic b".into()));
    }
    let w = z - a_inf;
    let disc = ((w + 2.0 * b_inf) * (w - 2.0 * b_inf)).sqrt();
    let t1 = 0.5 * (w + disc);
    let t2 = 0.5 * (w - disc);
    Ok(pick_root(t1, t2, z, b_inf.abs()))
}

/// Tail for coefficients that grow with the index: the ratio of consecutive
/// tails is assumed to follow `b_{N+1}/b_N`, which gives the quadratic
/// `b_{N+1} t² − (z − a_{N+1}) t + b_N = 0` with `T = b_N t`.
pub fn graded_terminator<S: CoefficientStream + ?Sized>(stream: &S, depth: usize, z: Complex64) -> Complex64 {
    let bn = stream.b(depth);
    let bn1 = stream.b(depth + 1);
    let ratio = bn / bn1;
    if !(ratio > 0.0) || !ratio.is_finite() {
        return terminator(stream.a(depth), bn, z).unwrap_or(Complex64::new(0.0, 0.0));
    }
    let w = (z - stream.a(depth + 1)) * ratio;
    let c = bn * bn * ratio;
    let disc = (w * w - 4.0 * c).sqrt();
    let t1 = 0.5 * (w + disc);
    let t2 = 0.5 * (w - disc);
    pick_root(t1, t2, z, bn.abs())
}

/// Bottom-up evaluation of `−1/(z − a_0 − b_0²/(z − a_1 − … − b_{N−1}²/(z − a_N − T)))`.
fn continued_fraction(
    a: impl Fn(usize) -> f64,
    b2: impl Fn(usize) -> f64,
    z: Complex64,
    depth: usize,
    tail: Complex64,
) -> Result<Complex64> {
    let mut g = z - a(depth) - tail;
    let mut prev_scale = tail.norm();
    for n in (0..=depth).rev() {
        if n < depth {
            let step = b2(n) / g;
            prev_scale = step.norm();
            g = z - a(n) - step;
        }
        let scale = z.norm() + a(n).abs() + prev_scale;
        if !(g.norm() > 8.0 * f64::EPSILON * scale) {
            return Err(Error::PoleProximity { level: n });
        }
    }
    let out = -1.0 / g;
    if !out.re.is_finite() || !out.im.is_finite() {
        return Err(Error::NonFinite("continued fraction"));
    }
    Ok(out)
}

fn tail_for<S: CoefficientStream + ?Sized>(stream: &S, z: Complex64, depth: usize) -> Result<(Complex64, Option<(f64, f64)>)> {
    match stream.limit_hint() {
        Some((a_inf, b_inf)) => Ok((terminator(a_inf, b_inf, z)?, Some((a_inf, b_inf)))),
        None => Ok((graded_terminator(stream, depth, z), None)),
    }
}

/// Reference Green's function by continued fraction of the given depth.
pub fn green_reference<S: CoefficientStream + ?Sized>(stream: &S, z: Complex64, depth: usize) -> Result<Complex64> {
    Ok(green_reference_detailed(stream, z, depth)?.value_complex())
}

impl GreensEvaluation {
    pub fn value_complex(&self) -> Complex64 {
        Complex64::new(self.value.0, self.value.1)
    }
}

pub fn green_reference_detailed<S: CoefficientStream + ?Sized>(
    stream: &S,
    z: Complex64,
    depth: usize,
) -> Result<GreensEvaluation> {
    if depth == 0 {
        return Err(Error::Domain("continued fraction depth must be at least 1".into()));
    }
    let (tail, params) = tail_for(stream, z, depth)?;
    let g = continued_fraction(|n| stream.a(n), |n| stream.b(n).powi(2), z, depth, tail)?;
    Ok(GreensEvaluation { z: (z.re, z.im), depth, terminator_params: params, value: (g.re, g.im) })
}

/// Doubles the depth from `start` until the relative change drops below `rel_tol`.
pub fn green_reference_converged<S: CoefficientStream + ?Sized>(
    stream: &S,
    z: Complex64,
    start: usize,
    max_depth: usize,
    rel_tol: f64,
) -> Result<(Complex64, usize)> {
    let mut depth = start.max(1);
    let mut g = green_reference(stream, z, depth)?;
    while depth * 2 <= max_depth {
        let g2 = green_reference(stream, z, depth * 2)?;
        depth *= 2;
        if (g2 - g).norm() <= rel_tol * g2.norm() {
            return Ok((g2, depth));
        }
        g = g2;
    }
    Err(Error::NonConvergence(format!("continued fraction not converged at depth {depth}")))
}

/// Spectral density `Im g / π` from a boundary value of a Green's function.
pub fn weight_from_green(g: Complex64) -> f64 {
    g.im / PI
}

/// The two evaluation routes of the modified Green's function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedGreen {
    /// `G/(1 + W G)` from the reference function and the Wronskian.
    pub via_wronskian: Complex64,
    /// Continued fraction with `a_0 ↦ β/α`, `b_0² ↦ b_0/α`, divided by `αb_0`.
    pub via_first_row: Complex64,
}

impl ModifiedGreen {
    pub fn relative_difference(&self) -> f64 {
        let scale = self.via_wronskian.norm().max(self.via_first_row.norm());
        if scale == 0.0 {
            0.0
        } else {
            (self.via_wronskian - self.via_first_row).norm() / scale
        }
    }
}

pub fn green_modified_paths<S: CoefficientStream + ?Sized>(
    stream: &S,
    init: InitialValues,
    z: Complex64,
    depth: usize,
) -> Result<ModifiedGreen> {
    if depth == 0 {
        return Err(Error::Domain("continued fraction depth must be at least 1".into()));
    }
    let g_ref = green_reference(stream, z, depth)?;
    let w: Complex64 = wronskian(stream, init, z);
    let via_wronskian = g_ref / (1.0 + w * g_ref);

    let b0 = stream.b(0);
    let a0_new = init.beta / init.alpha;
    let b0sq_new = b0 / init.alpha;
    let (tail, _) = tail_for(stream, z, depth)?;
    let cf = continued_fraction(
        |n| if n == 0 { a0_new } else { stream.a(n) },
        |n| if n == 0 { b0sq_new } else { stream.b(n).powi(2) },
        z,
        depth,
        tail,
    )?;
    let via_first_row = cf / (init.alpha * b0);
    Ok(ModifiedGreen { via_wronskian, via_first_row })
}

/// Modified Green's function; both routes are evaluated and must agree.
pub fn green_modified<S: CoefficientStream + ?Sized>(
    stream: &S,
    init: InitialValues,
    z: Complex64,
    depth: usize,
) -> Result<Complex64> {
    let paths = green_modified_paths(stream, init, z, depth)?;
    let diff = paths.relative_difference();
    if !(diff <= PATH_TOLERANCE) {
        return Err(Error::PathDisagreement(diff));
    }
    Ok(paths.via_first_row)
}

/// Green's function of the total Hamiltonian's Jacobi matrix, whose first row is
/// `(β/α, 1/α)`; its measure has unit mass.
pub fn green_hamiltonian<S: CoefficientStream + ?Sized>(
    stream: &S,
    init: InitialValues,
    z: Complex64,
    depth: usize,
) -> Result<Complex64> {
    let modified = RowZeroReplaced::for_init(stream, init);
    green_reference(&modified, z, depth)
}

/// Boundary value `lim_{ε→0⁺} f(ε)` from `f` at the ε ladder, linear Richardson step.
pub fn richardson_limit(f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let e1 = EPSILON_LADDER[1];
    let e2 = EPSILON_LADDER[2];
    let f1 = f(e1)?;
    let f2 = f(e2)?;
    Ok((e1 * f2 - e2 * f1) / (e1 - e2))
}

/// Boundary value `lim_{ε→0⁺} f(ε)`: taken on the real axis when the stream
/// has constant asymptotics (the tail is then exact), else by [`richardson_limit`].
pub fn boundary_limit<S: CoefficientStream + ?Sized>(stream: &S, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    if stream.limit_hint().is_some() {
        f(0.0)
    } else {
        richardson_limit(f)
    }
}

/// Continuous weight of the co-recursive polynomials.
///
/// With an analytic reference density the relation `ρ/|1 + W G|²` is used,
/// otherwise `Im G^{(α,β)}/π` from the first-row route. Boundary values come
/// from [`boundary_limit`].
pub fn weight_modified<S: CoefficientStream + ?Sized>(
    stream: &S,
    init: InitialValues,
    z: f64,
    depth: usize,
    analytic_reference: Option<f64>,
) -> Result<f64> {
    let rho = match analytic_reference {
        Some(rho_ref) => {
            let denom = boundary_limit(stream, |eps| {
                let zc = Complex64::new(z, eps);
                let g = green_reference(stream, zc, depth)?;
                let w: Complex64 = wronskian(stream, init, zc);
                Ok((1.0 + w * g).norm_sqr())
            })?;
            rho_ref / denom
        }
        None => boundary_limit(stream, |eps| {
            Ok(weight_from_green(green_modified(stream, init, Complex64::new(z, eps), depth)?))
        })?,
    };
    if rho < -1e-10 {
        return Err(Error::NegativeWeight { z, value: rho });
    }
    Ok(rho)
}

/// Continuous weight of the total Hamiltonian's measure (unit mass), as `Im G_H/π`.
pub fn weight_hamiltonian<S: CoefficientStream + ?Sized>(
    stream: &S,
    init: InitialValues,
    z: f64,
    depth: usize,
) -> Result<f64> {
    let rho = boundary_limit(stream, |eps| {
        Ok(weight_from_green(green_hamiltonian(stream, init, Complex64::new(z, eps), depth)?))
    })?;
    if rho < -1e-10 {
        return Err(Error::NegativeWeight { z, value: rho });
    }
    Ok(rho)
}

const DISPERSION_POINTS: usize = 24;
const DISPERSION_PANEL: f64 = 0.25;

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(DISPERSION_POINTS).expect("Legendre rule of fixed order"))
}

fn integrate_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = panel_rule();
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    half * nodes.iter().zip(weights).map(|(t, w)| w * f(mid + half * t)).sum::<f64>()
}

/// Integral over `[a, b]` on panels that start at width `first` next to `a`
/// and double up to [`DISPERSION_PANEL`].
fn integrate_graded(f: &impl Fn(f64) -> f64, a: f64, b: f64, first: f64) -> f64 {
    let mut total = 0.0;
    let mut left = a;
    let mut width = first.clamp(1e-12, DISPERSION_PANEL);
    while left < b {
        let right = (left + width).min(b);
        total += integrate_panel(f, left, right);
        left = right;
        width = (2.0 * width).min(DISPERSION_PANEL);
    }
    total
}

/// Point in `s = √t` beyond which the weight `2sρ(s²)` is negligible.
fn dispersion_cutoff(h: &impl Fn(f64) -> f64) -> f64 {
    let mut peak = 0.0_f64;
    let mut s = 0.5;
    while s < 400.0 {
        let v = h(s);
        peak = peak.max(v);
        if v < 1e-22 * peak && s > 2.0 {
            return s;
        }
        s += 0.5;
    }
    s
}

/// Boundary value `G(x + i0)` of the reference Green's function from the closed-form
/// weight, `PV∫ρ(t)dt/(t − x) + iπρ(x)` plus the discrete levels. The integral is
/// taken in `s = √t` with the singularity subtracted symmetrically.
pub fn green_reference_dispersion(class: &SystemClass, x: f64) -> Result<Complex64> {
    class.validate()?;
    match class {
        SystemClass::Oscillator3D { .. } => {
            return Err(Error::Unsupported("the oscillator has a purely discrete spectrum".into()))
        }
        SystemClass::Chebyshev => {
            return green_reference(&coefficient_stream(class)?, Complex64::new(x, 0.0), 8);
        }
        _ => {}
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("boundary point must be finite, got {x}")));
    }
    let h = |s: f64| 2.0 * s * reference_weight(class, s * s).unwrap_or(0.0);
    let s_max = dispersion_cutoff(&h);

    let mut g = if x > 0.0 {
        let sigma = x.sqrt();
        let q = |s: f64| h(s) / (s + sigma);
        let near = |u: f64| (q(sigma + u) - q(sigma - u)) / u;
        let u_low = (sigma - s_max).max(0.0);
        let mut re = if u_low < sigma { integrate_graded(&near, u_low, sigma, DISPERSION_PANEL) } else { 0.0 };
        if 2.0 * sigma < s_max {
            re += integrate_graded(&|s: f64| q(s) / (s - sigma), 2.0 * sigma, s_max, sigma);
        }
        Complex64::new(re, PI * reference_weight(class, x)?)
    } else {
        Complex64::new(below_threshold(&h, s_max, x, 1), 0.0)
    };
    for (z, w) in reference_levels(class)? {
        g += w / (z - x);
    }
    if !(g.re.is_finite() && g.im.is_finite()) {
        return Err(Error::NonFinite("dispersion integral"));
    }
    Ok(g)
}

/// `∫_0^{s_max} h(s)/(s² − x)^power ds` for `x ≤ 0`.
fn below_threshold(h: &impl Fn(f64) -> f64, s_max: f64, x: f64, power: i32) -> f64 {
    let depth = (-x).sqrt().max(1e-8);
    integrate_graded(&|s: f64| h(s) / (s * s - x).powi(power), 0.0, s_max, depth)
}

fn reference_levels(class: &SystemClass) -> Result<Vec<(f64, f64)>> {
    match class.morse_n_max() {
        Some(n_max) => (0..=n_max)
            .map(|j| discrete_spectrum(class, j).map(|level| (level.z, level.weight)))
            .collect(),
        None => Ok(Vec::new()),
    }
}

/// Isolated eigenvalues `z < 0` of the total Hamiltonian's Jacobi matrix and their
/// weights, from the zeros of `−1/G_H` built on the dispersion route. The search
/// covers `z_floor ≤ z ≤ −1e-8`.
pub fn dispersion_mass_points(class: &SystemClass, init: InitialValues, z_floor: f64) -> Result<Vec<(f64, f64)>> {
    class.validate()?;
    if !matches!(class.continuum(), Some((lo, _)) if lo == 0.0) {
        return Err(Error::Unsupported(format!("{} has no continuum starting at zero", class.name())));
    }
    if !(z_floor < -1e-8) {
        return Err(Error::Domain(format!("search floor must lie below -1e-8, got {z_floor}")));
    }
    let stream = coefficient_stream(class)?;
    let h = |s: f64| 2.0 * s * reference_weight(class, s * s).unwrap_or(0.0);
    let s_max = dispersion_cutoff(&h);
    let levels = reference_levels(class)?;
    let c = (1.0 / (init.alpha * stream.b(0))).powi(2);
    let g_and_slope = |z: f64| {
        let mut g = below_threshold(&h, s_max, z, 1);
        let mut dg = below_threshold(&h, s_max, z, 2);
        for &(zj, w) in &levels {
            g += w / (zj - z);
            dg += w / (zj - z).powi(2);
        }
        (g, dg)
    };
    // −1/G_H, increasing between its poles.
    let d = |z: f64| {
        let (g, _) = g_and_slope(z);
        z - init.beta / init.alpha - c * (z - stream.a(0) + 1.0 / g)
    };

    let steps = 800;
    let ratio = (-z_floor / 1e-8).powf(1.0 / steps as f64);
    let grid: Vec<f64> = (0..=steps).map(|k| z_floor / ratio.powi(k as i32)).collect();
    let mut points = Vec::new();
    let mut prev = (grid[0], d(grid[0]));
    for &z in &grid[1..] {
        let cur = (z, d(z));
        if prev.1 < 0.0 && cur.1 >= 0.0 {
            let (mut lo, mut hi) = (prev.0, cur.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if d(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let root = 0.5 * (lo + hi);
            let (g, dg) = g_and_slope(root);
            let slope = 1.0 - c * (1.0 - dg / (g * g));
            if slope.is_finite() && slope > 0.0 {
                points.push((root, 1.0 / slope));
            }
        }
        prev = cur;
    }
    Ok(points)
}

/// Green's function of the total Hamiltonian from a value `g` of the reference
/// function at `z`, through `b_0² R = z − a_0 + 1/g` for the common tail `R`.
pub fn hamiltonian_from_reference<S: CoefficientStream + ?Sized>(
    stream: &S,
    init: InitialValues,
    z: Complex64,
    g: Complex64,
) -> Complex64 {
    let tail = (z - stream.a(0) + 1.0 / g) / stream.b(0).powi(2);
    let b = 1.0 / init.alpha;
    -1.0 / (z - init.beta / init.alpha - b * b * tail)
}

/// Continuous weight of the total Hamiltonian's measure from the dispersion route.
pub fn weight_hamiltonian_dispersion(class: &SystemClass, init: InitialValues, x: f64) -> Result<f64> {
    let stream = coefficient_stream(class)?;
    let g = green_reference_dispersion(class, x)?;
    let rho = weight_from_green(hamiltonian_from_reference(&stream, init, Complex64::new(x, 0.0), g));
    if rho < -1e-10 {
        return Err(Error::NegativeWeight { z: x, value: rho });
    }
    Ok(rho.max(0.0))
}

/// Continuous co-recursive weight `Im[G/(1 + W G)]/π` from the dispersion route.
pub fn weight_modified_dispersion(class: &SystemClass, init: InitialValues, x: f64) -> Result<f64> {
    let stream = coefficient_stream(class)?;
    let z = Complex64::new(x, 0.0);
    let g = green_reference_dispersion(class, x)?;
    let w: Complex64 = wronskian(&stream, init, z);
    Ok(weight_from_green(g / (1.0 + w * g)))
}

/// Minimal (decaying) solution of the recurrence at `z`, obtained by backward
/// recursion from `n_trunc` and normalized to `q_0 = 1`.
pub fn minimal_solution<S: CoefficientStream + ?Sized>(stream: &S, z: f64, n_trunc: usize) -> Result<Vec<f64>> {
    let mut q = vec![0.0; n_trunc + 2];
    q[n_trunc] = 1e-200;
    for n in (1..=n_trunc).rev() {
        let bm = stream.b(n - 1);
        if bm == 0.0 {
            return Err(Error::ZeroCoefficient { index: n - 1 });
        }
        q[n - 1] = ((z - stream.a(n)) * q[n] - stream.b(n) * q[n + 1]) / bm;
        if q[n - 1].abs() > 1e200 {
            for v in q.iter_mut().skip(n - 1) {
                *v *= 1e-200;
            }
        }
    }
    let q0 = q[0];
    if q0 == 0.0 || !q0.is_finite() {
        return Err(Error::NonConvergence("minimal solution vanishes at n = 0".into()));
    }
    q.truncate(n_trunc + 1);
    for v in q.iter_mut() {
        *v /= q0;
    }
    Ok(q)
}

/// Sums `offset + Σ_{n≥start} q_n²` on the decaying solution at two truncations
/// and checks that it matches the forward value `P_1 = αz − β`.
fn summed_weight<S: CoefficientStream + ?Sized>(
    stream: &S,
    init: InitialValues,
    z: f64,
    n_trunc: usize,
    offset: f64,
    start: usize,
) -> Result<f64> {
    if n_trunc < 2 {
        return Err(Error::Domain("truncation must be at least 2".into()));
    }
    let p1 = init.alpha * z - init.beta;
    let mut weights = [0.0; 2];
    for (slot, n) in [n_trunc, 2 * n_trunc].into_iter().enumerate() {
        let q = minimal_solution(stream, z, n)?;
        let residual = (q[1] - p1).abs() / (q[1].abs() + p1.abs()).max(1e-300);
        if residual > 1e-6 {
            return Err(Error::NonConvergence(format!(
                "z = {z} is not a mass point (first-row residual {residual:.3e})"
            )));
        }
        weights[slot] = 1.0 / (offset + q.iter().skip(start).map(|v| v * v).sum::<f64>());
    }
    let [w1, w2] = weights;
    if (w1 - w2).abs() > 1e-8 * w2.abs() {
        return Err(Error::NonConvergence(format!(
            "mass-point weight changes from {w1} to {w2} between truncations"
        )));
    }
    Ok(w2)
}

/// Weight `1/Σ_n p_n(z)²` of an isolated eigenvalue of the total Hamiltonian's
/// Jacobi matrix (first row `(β/α, 1/α)`), with `p_n` the spectral polynomials of
/// that matrix. The sum is evaluated on the decaying solution.
pub fn mass_point_weight<S: CoefficientStream + ?Sized>(
    stream: &S,
    init: InitialValues,
    z_point: f64,
    n_trunc: usize,
) -> Result<f64> {
    let modified = RowZeroReplaced::for_init(stream, init);
    summed_weight(&modified, init, z_point, n_trunc, 0.0, 0)
}

/// Mass of a pole of the co-recursive Green's function, `1/(αb_0 + Σ_{n≥1} P_n²)`,
/// in the normalization where the co-recursive measure has total mass `1/(αb_0)`.
pub fn co_recursive_mass_weight<S: CoefficientStream + ?Sized>(
    stream: &S,
    init: InitialValues,
    z_point: f64,
    n_trunc: usize,
) -> Result<f64> {
    let offset = init.alpha * stream.b(0);
    summed_weight(stream, init, z_point, n_trunc, offset, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursion::TabulatedStream;
    use approx::assert_relative_eq;

    fn cheb() -> TabulatedStream {
        TabulatedStream::new(vec![0.0], vec![0.5], Some((0.0, 0.5))).unwrap()
    }

    #[test]
    fn terminator_branches() {
        let t = terminator(0.0, 0.5, Complex64::new(2.0, 0.0)).unwrap();
        assert_relative_eq!(t.re, 1.0 - 3f64.sqrt() / 2.0, max_relative = 1e-14);
        let mid = terminator(0.0, 0.5, Complex64::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(mid.norm(), 0.5, max_relative = 1e-14);
        assert!(mid.im < 0.0);
        let edge = terminator(0.0, 0.5, Complex64::new(1.0, 0.0)).unwrap();
        assert!(edge.im.abs() < 1e-12);
        assert!(terminator(0.0, 0.0, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn chebyshev_reference_green() {
        let x = 0.3;
        let g = green_reference(&cheb(), Complex64::new(x, 1e-8), 50).unwrap();
        assert!((g.re + 2.0 * x).abs() < 1e-6);
        assert!((g.im - 2.0 * (1.0f64 - x * x).sqrt()).abs() < 1e-6);
        assert_relative_eq!(weight_from_green(Complex64::new(0.0, 2.0)), 2.0 / PI);
        assert_eq!(weight_from_green(Complex64::new(3.0, 0.0)), 0.0);
    }

    #[test]
    fn large_imaginary_argument() {
        let g = green_reference(&cheb(), Complex64::new(0.0, 1e8), 10).unwrap();
        let expected = -1.0 / Complex64::new(0.0, 1e8);
        assert!((g - expected).norm() < 1e-14);
    }

    #[test]
    fn reference_init_leaves_green_unchanged() {
        let s = cheb();
        let z = Complex64::new(0.2, 1e-3);
        let g = green_reference(&s, z, 30).unwrap();
        let m = green_modified(&s, s.reference_init(), z, 30).unwrap();
        assert!((g - m).norm() < 1e-15);
    }
}
