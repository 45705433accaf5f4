//! Gauss rules built from the Jacobi matrix of each class's basis polynomials,
//! and the basis integrals `F_m = ∫φ_m dx` with their quadrature estimates.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::ln_gamma;
use crate::systems::{basis_values, SystemClass};
use crate::tridiag::{gauss_weights, TridiagonalMatrix};

/// Nodes and weights in the class's natural variable `y`; weights refer to the
/// normalized measure `ξ(y)dy`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisIntegrals {
    /// Closed-form `F_0, F_1` when available.
    pub exact: Option<Vec<f64>>,
    /// Quadrature estimates `G_0^K..G_{m_max}^K`.
    pub approx: Vec<f64>,
    pub order: usize,
}

/// The orthogonal family behind a class's basis.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Family {
    Hermite,
    Laguerre(f64),
    ChebyshevU,
}

fn family(class: &SystemClass) -> Family {
    match *class {
        SystemClass::Free1DEven { .. } => Family::Hermite,
        SystemClass::Free1DOdd { .. } => Family::Laguerre(0.5),
        SystemClass::Free3D { l, .. } | SystemClass::Oscillator3D { l, .. } => Family::Laguerre(l as f64 + 0.5),
        SystemClass::Morse1D { nu, .. } => Family::Laguerre(nu - 1.0),
        SystemClass::Chebyshev => Family::ChebyshevU,
    }
}

fn jacobi_matrix(fam: Family, k: usize) -> Result<TridiagonalMatrix> {
    let (diag, off): (Vec<f64>, Vec<f64>) = match fam {
        Family::Hermite => (vec![0.0; k], (0..k - 1).map(|n| ((n as f64 + 1.0) / 2.0).sqrt()).collect()),
        Family::Laguerre(a) => (
            (0..k).map(|n| 2.0 * n as f64 + a + 1.0).collect(),
            (0..k - 1).map(|n| -((n as f64 + 1.0) * (n as f64 + a + 1.0)).sqrt()).collect(),
        ),
        Family::ChebyshevU => (vec![0.0; k], vec![0.5; k - 1]),
    };
    TridiagonalMatrix::new(diag, off)
}

/// `K`-point Gauss rule of the class's basis family; the weights come from
/// eigenvalues alone (full matrix and its first-row deletion), see
/// [`gauss_weights`].
pub fn gauss_rule(class: &SystemClass, order: usize) -> Result<GaussRule> {
    class.validate()?;
    if order == 0 {
        return Err(Error::Domain("quadrature order must be at least 1".into()));
    }
    let j = jacobi_matrix(family(class), order)?;
    let (nodes, weights) = gauss_weights(&j)?;
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0)) {
        return Err(Error::NonConvergence(format!("non-positive quadrature weight {w}")));
    }
    Ok(GaussRule { nodes, weights, order })
}

/// `K`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn legendre_rule(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 {
        return Err(Error::Domain("quadrature order must be at least 1".into()));
    }
    let off = (1..order).map(|n| n as f64 / ((4 * n * n - 1) as f64).sqrt()).collect();
    let (nodes, weights) = gauss_weights(&TridiagonalMatrix::new(vec![0.0; order], off)?)?;
    Ok((nodes, weights.into_iter().map(|w| 2.0 * w).collect()))
}

/// Closed-form `(F_0, F_1)` for each class with a configuration space; the
/// odd 1D class is integrated over the half-line.
pub fn exact_integrals(class: &SystemClass) -> Result<(f64, f64)> {
    class.validate()?;
    let lam = class.lambda();
    match *class {
        SystemClass::Free1DEven { .. } => {
            let f0 = 2f64.sqrt() * PI.powf(0.25) / lam.sqrt();
            Ok((f0, f0 / 2f64.sqrt()))
        }
        SystemClass::Free1DOdd { .. } => {
            let f0 = 2f64.sqrt() * PI.powf(-0.25) / lam.sqrt();
            Ok((f0, PI.powf(-0.25) / (3.0 * lam).sqrt()))
        }
        SystemClass::Free3D { l, .. } | SystemClass::Oscillator3D { l, .. } => {
            let lf = l as f64;
            let p = lf + 1.5;
            let log_f0 = ln_gamma(1.0 + 0.5 * lf)? + 0.5 * ((lf + 1.0) * 2f64.ln() - lam.ln() - ln_gamma(p)?);
            let f0 = log_f0.exp();
            Ok((f0, -f0 / (2.0 * p.sqrt())))
        }
        SystemClass::Morse1D { nu, .. } => {
            let log_f0 = 0.5 * nu * 2f64.ln() + ln_gamma(0.5 * nu)? - 0.5 * (lam.ln() + ln_gamma(nu)?);
            Ok((log_f0.exp(), 0.0))
        }
        SystemClass::Chebyshev => Err(Error::Unsupported("the test class has no configuration space".into())),
    }
}

/// Position `x(y)`, `ln ξ(y)` and `|dy/dx|` at a node.
fn node_map(class: &SystemClass, y: f64) -> Result<(f64, f64, f64)> {
    let lam = class.lambda();
    let laguerre_log_weight = |a: f64| -> Result<f64> { Ok(a * y.ln() - y - ln_gamma(a + 1.0)?) };
    match (*class, family(class)) {
        (SystemClass::Free1DEven { .. }, _) => Ok((y / lam, -y * y - 0.5 * PI.ln(), lam)),
        (SystemClass::Morse1D { .. }, Family::Laguerre(a)) => Ok((-y.ln() / lam, laguerre_log_weight(a)?, lam * y)),
        (_, Family::Laguerre(a)) => Ok((y.sqrt() / lam, laguerre_log_weight(a)?, 2.0 * lam * y.sqrt())),
        _ => Err(Error::Unsupported("the test class has no configuration space".into())),
    }
}

/// `G_m^K = Σ_k w_k φ_m(x(τ_k)) / (ξ(τ_k)|y'(τ_k)|)` for `m ≤ m_max`, with the
/// closed-form `F_0, F_1` attached when known.
pub fn basis_integrals(class: &SystemClass, m_max: usize, order: usize) -> Result<BasisIntegrals> {
    if m_max < 1 {
        return Err(Error::Domain("basis integrals need m_max >= 1".into()));
    }
    if matches!(class, SystemClass::Chebyshev) {
        return Err(Error::Unsupported("the test class has no configuration space".into()));
    }
    let rule = gauss_rule(class, order)?;
    let mut approx = vec![0.0; m_max + 1];
    for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
        let (x, log_xi, jac) = node_map(class, y)?;
        let scale = (w.ln() - log_xi).exp() / jac;
        let phi = basis_values(class, m_max, x)?;
        for (g, p) in approx.iter_mut().zip(phi) {
            *g += scale * p;
        }
    }
    let exact = exact_integrals(class).ok().map(|(f0, f1)| vec![f0, f1]);
    Ok(BasisIntegrals { exact, approx, order })
}
