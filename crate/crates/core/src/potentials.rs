//! The induced potential: its three nonzero matrix elements and its
//! reconstruction in configuration space from the basis integrals.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{basis_integrals, exact_integrals};
use crate::recursion::{CoefficientStream, InitialValues};
use crate::specfun::ln_gamma;
use crate::systems::{basis_values, coefficient_stream, SystemClass};

/// Entries `(0,0)` and `(0,1) = (1,0)` of the potential matrix; all others vanish.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialMatrixElements {
    pub v00: f64,
    pub v01: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "order")]
pub enum ReconstructionMode {
    /// Closed-form basis integrals.
    Exact,
    /// Gauss quadrature of the given order.
    Quadrature(usize),
}

/// One row of the comparison between a printed closed form and the assembly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrintedFormCheck {
    pub class: String,
    pub max_abs_difference: f64,
    pub max_abs_assembly: f64,
    pub agrees: bool,
}

pub fn matrix_elements(class: &SystemClass, init: InitialValues) -> Result<PotentialMatrixElements> {
    let s = coefficient_stream(class)?;
    let e = class.energy_scale();
    Ok(PotentialMatrixElements {
        v00: e * (init.beta / init.alpha - s.a(0)),
        v01: e * (1.0 / init.alpha - s.b(0)),
    })
}

fn integrals(class: &SystemClass, mode: ReconstructionMode) -> Result<(f64, f64)> {
    match mode {
        ReconstructionMode::Exact => exact_integrals(class),
        ReconstructionMode::Quadrature(k) => {
            let b = basis_integrals(class, 1, k)?;
            Ok((b.approx[0], b.approx[1]))
        }
    }
}

fn assemble(v: PotentialMatrixElements, f: (f64, f64), phi: &[f64]) -> f64 {
    v.v00 * f.0 * phi[0] + v.v01 * (f.0 * phi[1] + f.1 * phi[0])
}

/// `V(x) = v00 F_0 φ_0 + v01 (F_0 φ_1 + F_1 φ_0)`.
pub fn induced_potential(class: &SystemClass, init: InitialValues, x: f64, mode: ReconstructionMode) -> Result<f64> {
    let v = matrix_elements(class, init)?;
    let f = integrals(class, mode)?;
    Ok(assemble(v, f, &basis_values(class, 1, x)?))
}

/// The induced potential on a grid; the basis integrals are computed once.
pub fn induced_potential_grid(
    class: &SystemClass,
    init: InitialValues,
    xs: &[f64],
    mode: ReconstructionMode,
) -> Result<Vec<f64>> {
    let v = matrix_elements(class, init)?;
    let f = integrals(class, mode)?;
    xs.par_iter().map(|&x| Ok(assemble(v, f, &basis_values(class, 1, x)?))).collect()
}

/// Literal evaluation of the closed forms given in the source for each class.
pub fn printed_closed_form(class: &SystemClass, init: InitialValues, x: f64) -> Result<f64> {
    class.validate()?;
    let lam = class.lambda();
    let (al, be) = (init.alpha, init.beta);
    let t = lam * x;
    match *class {
        SystemClass::Free1DEven { .. } => {
            Ok(lam * lam / 2f64.sqrt() * (-t * t / 2.0).exp() * (be / al - 0.5 + (1.0 + 2f64.sqrt() / al) * t * t))
        }
        SystemClass::Free1DOdd { .. } => Ok(2.0 * lam * lam / PI.sqrt()
            * t
            * (-t * t / 2.0).exp()
            * (be / al - 1.5 + (1.0 + 1.0 / (al * 3f64.sqrt())) * (t * t - 1.0))),
        SystemClass::Free3D { l, .. } => {
            let lf = l as f64;
            let p = lf + 1.5;
            let pref = lam * lam * (0.5 * lf * 2f64.ln() + ln_gamma(0.5 * lf + 1.0)? - ln_gamma(p)?).exp();
            Ok(pref
                * t.powf(lf + 1.0)
                * (-t * t / 2.0).exp()
                * (be / al - p + (lf + 1.0 - t * t) * ((1.0 / al) / p.sqrt() - 1.0)))
        }
        SystemClass::Oscillator3D { l, kappa, .. } => {
            let lf = l as f64;
            let p = lf + 1.5;
            let w2 = kappa * kappa / lam.powi(4);
            let pref = lam * lam * (0.5 * lf * 2f64.ln() + ln_gamma(1.0 + 0.5 * lf)? - ln_gamma(p)?).exp();
            Ok(pref
                * t.powf(lf + 1.0)
                * (-t * t / 2.0).exp()
                * (be / al - p * (w2 + 1.0) + (w2 - 1.0 + (1.0 / al) / p.sqrt()) * (lf + 1.0 - t * t)))
        }
        SystemClass::Morse1D { mu, nu, .. } => {
            let y = (-t).exp();
            let pref = 0.5 * lam * lam * (0.5 * nu * 2f64.ln() + ln_gamma(0.5 * nu)? - ln_gamma(nu)?).exp();
            Ok(pref
                * (0.5 * nu * (-t) - 0.5 * y).exp()
                * (be / al - 0.5 * nu * (0.5 * nu + mu + 1.0)
                    + ((1.0 / al) / nu.sqrt() + 0.5 * (nu + mu + 1.0)) * (nu - y)))
        }
        SystemClass::Chebyshev => Err(Error::Unsupported("the test class has no configuration space".into())),
    }
}

/// Compares the printed closed form with the exact assembly on a grid.
pub fn check_printed_form(class: &SystemClass, init: InitialValues, xs: &[f64], tol: f64) -> Result<PrintedFormCheck> {
    let assembled = induced_potential_grid(class, init, xs, ReconstructionMode::Exact)?;
    let mut max_diff = 0.0f64;
    let mut max_abs = 0.0f64;
    for (&x, &v) in xs.iter().zip(&assembled) {
        let printed = printed_closed_form(class, init, x)?;
        max_diff = max_diff.max((printed - v).abs());
        max_abs = max_abs.max(v.abs());
    }
    Ok(PrintedFormCheck {
        class: class.name().to_string(),
        max_abs_difference: max_diff,
        max_abs_assembly: max_abs,
        agrees: max_diff <= tol,
    })
}

/// Reference potential of the class plus the induced potential.
///
/// The centrifugal term of the radial classes is counted as kinetic.
pub fn total_potential(class: &SystemClass, init: InitialValues, x: f64) -> Result<f64> {
    let induced = induced_potential(class, init, x, ReconstructionMode::Exact)?;
    let lam = class.lambda();
    let reference = match *class {
        SystemClass::Oscillator3D { kappa, .. } => 0.5 * kappa * kappa * x * x,
        SystemClass::Morse1D { mu, .. } => {
            let e = (-lam * x).exp();
            lam * lam / 8.0 * e * (e + 2.0 * mu)
        }
        _ => 0.0,
    };
    Ok(reference + induced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_elements_vanish() {
        let c = SystemClass::Free3D { lambda: 1.0, l: 1 };
        let s = coefficient_stream(&c).unwrap();
        let v = matrix_elements(&c, s.reference_init()).unwrap();
        assert!(v.v00.abs() < 1e-15 && v.v01.abs() < 1e-15);
    }

    #[test]
    fn substituted_elements() {
        let c = SystemClass::Free3D { lambda: 1.0, l: 1 };
        let v = matrix_elements(&c, InitialValues::new(-0.03, 2.5f64.sqrt()).unwrap()).unwrap();
        assert_relative_eq!(v.v00, 0.5 * (2.5f64.sqrt() / -0.03 - 2.5), max_relative = 1e-14);
        assert_relative_eq!(v.v01, 0.5 * (-100.0 / 3.0 - 2.5f64.sqrt()), max_relative = 1e-14);
        let ch = matrix_elements(&SystemClass::Chebyshev, InitialValues::new(1.0, 0.0).unwrap()).unwrap();
        assert_eq!((ch.v00, ch.v01), (0.0, 0.25));
    }

    #[test]
    fn even_class_at_origin() {
        let c = SystemClass::Free1DEven { lambda: 1.0 };
        let v = induced_potential(&c, InitialValues::new(-3.0, -1.0).unwrap(), 0.0, ReconstructionMode::Exact).unwrap();
        assert_relative_eq!(v, -1.0 / (6.0 * 2f64.sqrt()), max_relative = 1e-13);
    }

    #[test]
    fn reference_totals() {
        let m = SystemClass::Morse1D { lambda: 0.5, mu: -10.0, nu: 16.0 };
        let s = coefficient_stream(&m).unwrap();
        let x = 0.7;
        let e = (-0.5f64 * x).exp();
        let v = total_potential(&m, s.reference_init(), x).unwrap();
        assert_relative_eq!(v, 0.25 / 8.0 * e * (e - 20.0), max_relative = 1e-12);
        let o = SystemClass::Oscillator3D { lambda: 1.0, l: 1, kappa: 3.0 };
        let so = coefficient_stream(&o).unwrap();
        assert_relative_eq!(total_potential(&o, so.reference_init(), 1.0).unwrap(), 4.5, max_relative = 1e-12);
    }
}
