//! The implemented system classes: recursion coefficients, basis functions,
//! reference weights, closed-form spectral polynomials and discrete spectra.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::recursion::CoefficientStream;
use crate::specfun::{
    gamma, hermite_normalized, hyp_terminating, hyp_terminating_real, laguerre_normalized, ln_gamma,
    log_gamma, pochhammer,
};

/// A reference Hamiltonian together with its basis parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum SystemClass {
    #[serde(rename = "free1d-even")]
    Free1DEven { lambda: f64 },
    #[serde(rename = "free1d-odd")]
    Free1DOdd { lambda: f64 },
    #[serde(rename = "free3d")]
    Free3D { lambda: f64, l: u32 },
    #[serde(rename = "oscillator3d")]
    Oscillator3D { lambda: f64, l: u32, kappa: f64 },
    #[serde(rename = "morse1d")]
    Morse1D { lambda: f64, mu: f64, nu: f64 },
    #[serde(rename = "cheb")]
    Chebyshev,
}

/// Spectral argument of a closed form: a continuous `z` or a discrete level index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralArg {
    Z(f64),
    Level(usize),
}

/// A discrete level of the reference problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteLevel {
    pub j: usize,
    pub energy: f64,
    pub z: f64,
    /// Weight used downstream (validated form).
    pub weight: f64,
    /// Weight from the formula as printed in the source.
    pub printed_weight: f64,
}

impl SystemClass {
    pub fn validate(&self) -> Result<()> {
        let lam = self.lambda();
        if !(lam > 0.0) || !lam.is_finite() {
            return Err(Error::InvalidClass(format!("scale parameter must be positive, got {lam}")));
        }
        match *self {
            SystemClass::Oscillator3D { lambda, kappa, .. } => {
                if !(kappa.is_finite() && lambda * lambda < kappa) {
                    return Err(Error::InvalidClass(format!(
                        "oscillator requires lambda^2 < kappa (lambda = {lambda}, kappa = {kappa})"
                    )));
                }
            }
            SystemClass::Morse1D { mu, nu, .. } => {
                if !(nu > 0.0) || !nu.is_finite() || !mu.is_finite() {
                    return Err(Error::InvalidClass(format!("Morse basis requires nu > 0, got {nu}")));
                }
                if mu < -1.0 && nu <= -(mu + 1.0) {
                    return Err(Error::InvalidClass(format!(
                        "Morse basis requires nu > -(mu+1) = {} when mu < -1",
                        -(mu + 1.0)
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn lambda(&self) -> f64 {
        match *self {
            SystemClass::Free1DEven { lambda }
            | SystemClass::Free1DOdd { lambda }
            | SystemClass::Free3D { lambda, .. }
            | SystemClass::Oscillator3D { lambda, .. }
            | SystemClass::Morse1D { lambda, .. } => lambda,
            SystemClass::Chebyshev => 1.0,
        }
    }

    /// `λ²/2`, the factor between the Jacobi matrix and the Hamiltonian.
    pub fn energy_scale(&self) -> f64 {
        0.5 * self.lambda() * self.lambda()
    }

    pub fn z_from_energy(&self, energy: f64) -> f64 {
        energy / self.energy_scale()
    }

    pub fn energy_from_z(&self, z: f64) -> f64 {
        z * self.energy_scale()
    }

    pub fn name(&self) -> &'static str {
        match self {
            SystemClass::Free1DEven { .. } => "free1d-even",
            SystemClass::Free1DOdd { .. } => "free1d-odd",
            SystemClass::Free3D { .. } => "free3d",
            SystemClass::Oscillator3D { .. } => "oscillator3d",
            SystemClass::Morse1D { .. } => "morse1d",
            SystemClass::Chebyshev => "cheb",
        }
    }

    /// Energy interval of the continuous spectrum, if any.
    pub fn continuum(&self) -> Option<(f64, f64)> {
        match self {
            SystemClass::Oscillator3D { .. } => None,
            SystemClass::Chebyshev => Some((-0.5, 0.5)),
            _ => Some((0.0, f64::INFINITY)),
        }
    }

    /// Largest discrete level index of the Morse class (`j ≤ N`).
    pub fn morse_n_max(&self) -> Option<usize> {
        match *self {
            SystemClass::Morse1D { mu, .. } if mu < -1.0 => {
                let bound = -(mu + 1.0) / 2.0;
                let n = bound.ceil() - 1.0;
                (n >= 0.0).then_some(n as usize)
            }
            _ => None,
        }
    }

    /// Whether positions are radii (`r ≥ 0`).
    pub fn is_radial(&self) -> bool {
        matches!(self, SystemClass::Free3D { .. } | SystemClass::Oscillator3D { .. })
    }
}

/// Recursion coefficients of a validated class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassStream {
    class: SystemClass,
    sigma: f64,
}

impl ClassStream {
    pub fn class(&self) -> &SystemClass {
        &self.class
    }

    /// Oscillator ratio `σ = (κ−λ²)/(κ+λ²)`; zero for other classes.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

pub fn coefficient_stream(class: &SystemClass) -> Result<ClassStream> {
    class.validate()?;
    let sigma = match *class {
        SystemClass::Oscillator3D { lambda, kappa, .. } => {
            let l2 = lambda * lambda;
            (kappa - l2) / (kappa + l2)
        }
        _ => 0.0,
    };
    Ok(ClassStream { class: *class, sigma })
}

impl CoefficientStream for ClassStream {
    fn a(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self.class {
            SystemClass::Free1DEven { .. } => 2.0 * nf + 0.5,
            SystemClass::Free1DOdd { .. } => 2.0 * nf + 1.5,
            SystemClass::Free3D { l, .. } => 2.0 * nf + l as f64 + 1.5,
            SystemClass::Oscillator3D { lambda, l, kappa } => {
                let w = kappa / (lambda * lambda);
                (w * w + 1.0) * (2.0 * nf + l as f64 + 1.5)
            }
            SystemClass::Morse1D { mu, nu, .. } => {
                let c = 0.5 * (mu + nu + 1.0);
                (2.0 * nf + nu) * (nf + c) - nf - 0.25 * nu * nu
            }
            SystemClass::Chebyshev => 0.0,
        }
    }

    fn b(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self.class {
            SystemClass::Free1DEven { .. } => -((nf + 1.0) * (nf + 0.5)).sqrt(),
            SystemClass::Free1DOdd { .. } => -((nf + 1.0) * (nf + 1.5)).sqrt(),
            SystemClass::Free3D { l, .. } => ((nf + 1.0) * (nf + l as f64 + 1.5)).sqrt(),
            SystemClass::Oscillator3D { lambda, l, kappa } => {
                let w = kappa / (lambda * lambda);
                -(w * w - 1.0) * ((nf + 1.0) * (nf + l as f64 + 1.5)).sqrt()
            }
            SystemClass::Morse1D { mu, nu, .. } => {
                let c = 0.5 * (mu + nu + 1.0);
                -(nf + c) * ((nf + 1.0) * (nf + nu)).sqrt()
            }
            SystemClass::Chebyshev => 0.5,
        }
    }

    fn limit_hint(&self) -> Option<(f64, f64)> {
        match self.class {
            SystemClass::Chebyshev => Some((0.0, 0.5)),
            _ => None,
        }
    }
}

/// Basis functions `φ_0..φ_{n_max}` at position `x` (radius for 3D classes).
pub fn basis_values(class: &SystemClass, n_max: usize, x: f64) -> Result<Vec<f64>> {
    class.validate()?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("position must be finite, got {x}")));
    }
    let lam = class.lambda();
    match *class {
        SystemClass::Free1DEven { .. } | SystemClass::Free1DOdd { .. } => {
            let odd = matches!(class, SystemClass::Free1DOdd { .. });
            let t = lam * x;
            let h = hermite_normalized(2 * n_max + 1, t);
            let env = lam.sqrt() * PI.powf(-0.25) * (-0.5 * t * t).exp();
            Ok((0..=n_max).map(|n| env * h[2 * n + usize::from(odd)]).collect())
        }
        SystemClass::Free3D { l, .. } | SystemClass::Oscillator3D { l, .. } => {
            if x < 0.0 {
                return Err(Error::Domain(format!("radius must be non-negative, got {x}")));
            }
            let t = lam * x;
            if t == 0.0 {
                return Ok(vec![0.0; n_max + 1]);
            }
            let y = t * t;
            let lag = laguerre_normalized(n_max, l as f64 + 0.5, y)?;
            let env = (2.0 * lam).sqrt() * ((l as f64 + 1.0) * t.ln() - 0.5 * y).exp();
            Ok(lag.into_iter().map(|v| env * v).collect())
        }
        SystemClass::Morse1D { nu, .. } => {
            let y = (-lam * x).exp();
            let lag = laguerre_normalized(n_max, nu - 1.0, y)?;
            let env = lam.sqrt() * (0.5 * nu * (-lam * x) - 0.5 * y).exp();
            Ok(lag.into_iter().map(|v| env * v).collect())
        }
        SystemClass::Chebyshev => Err(Error::Unsupported("the test class has no configuration space".into())),
    }
}

pub fn basis_value(class: &SystemClass, n: usize, x: f64) -> Result<f64> {
    Ok(basis_values(class, n, x)?[n])
}

fn morse_log_continuous_density(mu: f64, nu: f64, z: f64) -> Result<f64> {
    let s = z.sqrt();
    let a = 0.5 * (mu + 1.0);
    let num = log_gamma(Complex64::new(a, s))?.re + 2.0 * log_gamma(Complex64::new(0.5 * nu, s))?.re;
    let den = log_gamma(Complex64::new(0.0, 2.0 * s))?.re;
    Ok(-(2.0 * PI).ln() + 2.0 * (num - den) - ln_gamma(nu)? - 2.0 * ln_gamma(a + 0.5 * nu)? - (2.0 * s).ln())
}

/// Continuous weight `ρ(z)` of the reference spectral polynomials.
///
/// The Morse density is expressed in `z` (the `dz = 2√z d√z` Jacobian is included).
pub fn reference_weight(class: &SystemClass, z: f64) -> Result<f64> {
    class.validate()?;
    match *class {
        SystemClass::Free1DEven { .. } => Ok(if z > 0.0 { (-z).exp() / (PI * z).sqrt() } else { 0.0 }),
        SystemClass::Free1DOdd { .. } => Ok(if z > 0.0 { 2.0 * (z / PI).sqrt() * (-z).exp() } else { 0.0 }),
        SystemClass::Free3D { l, .. } => {
            if z <= 0.0 {
                return Ok(0.0);
            }
            let p = l as f64 + 0.5;
            Ok((p * z.ln() - z - ln_gamma(p + 1.0)?).exp())
        }
        SystemClass::Morse1D { mu, nu, .. } => {
            if z <= 0.0 {
                return Ok(0.0);
            }
            Ok(morse_log_continuous_density(mu, nu, z)?.exp())
        }
        SystemClass::Chebyshev => Ok(if z.abs() < 1.0 { 2.0 / PI * (1.0 - z * z).sqrt() } else { 0.0 }),
        SystemClass::Oscillator3D { .. } => {
            Err(Error::Unsupported("the oscillator has a purely discrete spectrum".into()))
        }
    }
}

/// Log-magnitude and sign accumulator for products of many factors.
#[derive(Debug, Clone, Copy)]
struct SignedLog {
    log: f64,
    negative: bool,
}

impl SignedLog {
    fn one() -> Self {
        Self { log: 0.0, negative: false }
    }
    fn mul(mut self, x: f64) -> Self {
        self.log += x.abs().ln();
        self.negative ^= x < 0.0;
        self
    }
    fn div(mut self, x: f64) -> Self {
        self.log -= x.abs().ln();
        self.negative ^= x < 0.0;
        self
    }
    fn mul_pochhammer(mut self, c: f64, n: usize) -> Self {
        for k in 0..n {
            self = self.mul(c + k as f64);
        }
        self
    }
    fn div_pochhammer(mut self, c: f64, n: usize) -> Self {
        for k in 0..n {
            self = self.div(c + k as f64);
        }
        self
    }
    fn value(self) -> f64 {
        let v = self.log.exp();
        if self.negative {
            -v
        } else {
            v
        }
    }
}

fn factorial_log(j: usize) -> f64 {
    ln_gamma(j as f64 + 1.0).unwrap_or(0.0)
}

/// Discrete weight of the mixed Morse spectrum as printed, with the factor `(μ−j+2)_j`.
pub fn morse_weight_printed(mu: f64, nu: f64, j: usize) -> Result<f64> {
    morse_weight_with(mu, nu, j, mu - j as f64 + 2.0)
}

/// Discrete weight of the mixed Morse spectrum with the factor `(−μ−j)_j`,
/// which agrees with `1/Σ P_n(z_j)²`.
pub fn morse_weight_corrected(mu: f64, nu: f64, j: usize) -> Result<f64> {
    morse_weight_with(mu, nu, j, -mu - j as f64)
}

fn morse_weight_with(mu: f64, nu: f64, j: usize, poch_base: f64) -> Result<f64> {
    let c = 0.5 * (mu + nu + 1.0);
    let g = gamma(0.5 * (nu - mu - 1.0))?;
    let mut acc = SignedLog::one()
        .mul(2.0)
        .mul(g)
        .mul(g)
        .div(gamma(nu)?)
        .div(gamma(-mu)?)
        .mul(-(j as f64) - 0.5 * (mu + 1.0))
        .mul_pochhammer(poch_base, j);
    acc.log -= factorial_log(j);
    let d = 0.5 * (mu - nu + 3.0);
    acc = acc.mul_pochhammer(c, j).mul_pochhammer(c, j).div_pochhammer(d, j).div_pochhammer(d, j);
    Ok(acc.value())
}

/// Normalization weight of the finite (pure bound) Morse configuration as printed.
pub fn morse_finite_weight_printed(mu: f64, nu: f64, n_top: usize, j: usize) -> f64 {
    let nf = n_top as f64;
    let jf = j as f64;
    let mut acc = SignedLog::one()
        .mul_pochhammer(-nf - nu - 1.0, n_top)
        .mul(2.0 * jf + mu + 1.0)
        .mul_pochhammer(-nf, j)
        .mul_pochhammer(nf - jf + 1.0, j)
        .div_pochhammer(-nf - nu - 1.0, j)
        .div_pochhammer(jf + mu + 1.0, n_top + 1);
    acc.log -= factorial_log(j);
    acc.value()
}

/// Discrete level `j` of the oscillator or of the bound Morse spectrum.
pub fn discrete_spectrum(class: &SystemClass, j: usize) -> Result<DiscreteLevel> {
    class.validate()?;
    match *class {
        SystemClass::Oscillator3D { lambda, l, kappa } => {
            let p = l as f64 + 1.5;
            let energy = kappa * (2.0 * j as f64 + p);
            let l2 = lambda * lambda;
            let sigma = (kappa - l2) / (kappa + l2);
            let log_w = p * (1.0 - sigma * sigma).ln() + (ln_gamma(p + j as f64)? - ln_gamma(p)?)
                + 2.0 * j as f64 * sigma.abs().ln()
                - factorial_log(j);
            let weight = log_w.exp();
            Ok(DiscreteLevel { j, energy, z: class.z_from_energy(energy), weight, printed_weight: weight })
        }
        SystemClass::Morse1D { lambda, mu, nu } => {
            let n_max = class
                .morse_n_max()
                .ok_or_else(|| Error::Unsupported("Morse spectrum with mu >= -1 has no bound states".into()))?;
            if j > n_max {
                return Err(Error::Domain(format!("level {j} exceeds the largest bound level {n_max}")));
            }
            let k = j as f64 + 0.5 * (mu + 1.0);
            let energy = -0.5 * lambda * lambda * k * k;
            Ok(DiscreteLevel {
                j,
                energy,
                z: -k * k,
                weight: morse_weight_corrected(mu, nu, j)?,
                printed_weight: morse_weight_printed(mu, nu, j)?,
            })
        }
        _ => Err(Error::Unsupported(format!("{} has no discrete reference spectrum", class.name()))),
    }
}

/// Closed-form reference spectral polynomial `P_n` at a continuous `z` or a discrete level.
pub fn closed_form_p(class: &SystemClass, n: usize, arg: SpectralArg) -> Result<f64> {
    class.validate()?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    match (*class, arg) {
        (SystemClass::Free1DEven { .. }, SpectralArg::Z(z)) => {
            if z < 0.0 {
                return Err(Error::Domain("closed form needs z >= 0".into()));
            }
            Ok(sign * hermite_normalized(2 * n, z.sqrt())[2 * n])
        }
        (SystemClass::Free1DOdd { .. }, SpectralArg::Z(z)) => {
            if z <= 0.0 {
                return Err(Error::Domain("closed form needs z > 0".into()));
            }
            Ok(sign * hermite_normalized(2 * n + 1, z.sqrt())[2 * n + 1] / (2.0 * z).sqrt())
        }
        (SystemClass::Free3D { l, .. }, SpectralArg::Z(z)) => {
            let a = l as f64 + 0.5;
            let lag = laguerre_normalized(n, a, z)?;
            Ok(sign * (0.5 * ln_gamma(a + 1.0)?).exp() * lag[n])
        }
        (SystemClass::Oscillator3D { lambda, l, kappa }, SpectralArg::Level(j)) => {
            let p = l as f64 + 1.5;
            let l2 = lambda * lambda;
            let sigma = (kappa - l2) / (kappa + l2);
            let f = hyp_terminating_real(&[-(n as f64), -(j as f64)], &[p], 1.0 - 1.0 / (sigma * sigma), n)?;
            let norm = (0.5 * (ln_gamma(p + n as f64)? - ln_gamma(p)? - factorial_log(n))).exp();
            Ok(norm * sigma.powi(n as i32) * f)
        }
        (SystemClass::Morse1D { mu, nu, .. }, SpectralArg::Z(z)) => {
            let c = 0.5 * (mu + nu + 1.0);
            let a = 0.5 * (mu + 1.0);
            let is = Complex64::new(0.0, 1.0) * Complex64::new(z, 0.0).sqrt();
            let f = hyp_terminating(
                &[Complex64::new(-(n as f64), 0.0), a + is, a - is],
                &[Complex64::new(c, 0.0), Complex64::new(c, 0.0)],
                Complex64::new(1.0, 0.0),
                n,
            )?;
            let mut acc = SignedLog::one().mul_pochhammer(c, n);
            acc.log -= 0.5 * (factorial_log(n) + (ln_gamma(nu + n as f64)? - ln_gamma(nu)?));
            Ok(acc.value() * f.re)
        }
        (SystemClass::Morse1D { mu, nu, .. }, SpectralArg::Level(j)) => {
            let n_top = class.morse_n_max().ok_or_else(|| Error::Domain("no bound levels".into()))?;
            if j > n_top || n > n_top {
                return Err(Error::Domain(format!("indices must not exceed {n_top}")));
            }
            let c = 0.5 * (mu + nu + 1.0);
            let nf = n as f64;
            let radicand = pochhammer(c, n) * pochhammer(n_top as f64 - nf + 1.0, n)
                / (gamma(nf + 1.0)? * pochhammer(-nf - nu + 1.0, n));
            if radicand < 0.0 {
                return Err(Error::Domain(format!("printed normalization is negative at n = {n}")));
            }
            let f = hyp_terminating_real(
                &[-nf, -(j as f64), j as f64 + mu + 1.0],
                &[c, -(n_top as f64)],
                1.0,
                n,
            )?;
            Ok(radicand.sqrt() * f)
        }
        (SystemClass::Chebyshev, SpectralArg::Z(x)) => {
            if x.abs() >= 1.0 {
                return Err(Error::Domain("closed form evaluated for |x| < 1".into()));
            }
            let theta = x.acos();
            Ok(((n as f64 + 1.0) * theta).sin() / theta.sin())
        }
        (c, a) => Err(Error::Domain(format!("argument {a:?} does not fit class {}", c.name()))),
    }
}

/// Energy factor of the series: `f_0(E)` for continuous energies, `g_0(E_j)` for levels.
///
/// `f_0² = (2π/λ)√z ρ(z)` for the 1D classes (and heuristically for Morse),
/// `f_0² = (2/λ)√z ρ(z)` for the 3D free class; `g_0 = √ω_j` with the basis
/// normalized in the physical coordinate.
pub fn f0_g0(class: &SystemClass, arg: SpectralArg) -> Result<f64> {
    class.validate()?;
    let lam = class.lambda();
    match (*class, arg) {
        (SystemClass::Free3D { .. }, SpectralArg::Z(z)) => {
            Ok((2.0 / lam * z.max(0.0).sqrt() * reference_weight(class, z)?).sqrt())
        }
        (SystemClass::Free1DEven { .. } | SystemClass::Free1DOdd { .. } | SystemClass::Morse1D { .. }, SpectralArg::Z(z)) => {
            Ok((2.0 * PI / lam * z.max(0.0).sqrt() * reference_weight(class, z)?).sqrt())
        }
        (SystemClass::Oscillator3D { .. } | SystemClass::Morse1D { .. }, SpectralArg::Level(j)) => {
            Ok(discrete_spectrum(class, j)?.weight.sqrt())
        }
        (c, a) => Err(Error::Domain(format!("argument {a:?} does not fit class {}", c.name()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_values_free_even() {
        let s = coefficient_stream(&SystemClass::Free1DEven { lambda: 1.0 }).unwrap();
        assert_eq!(s.a(0), 0.5);
        assert_relative_eq!(s.b(0), -(0.5f64).sqrt());
        assert_relative_eq!(s.alpha_hat(), -(2.0f64).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(s.beta_hat(), -1.0 / (2.0f64).sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn reference_values_free3d_and_oscillator() {
        let s = coefficient_stream(&SystemClass::Free3D { lambda: 1.0, l: 1 }).unwrap();
        assert_relative_eq!(s.alpha_hat(), 1.0 / 2.5f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(s.beta_hat(), 2.5f64.sqrt(), max_relative = 1e-15);
        let o = coefficient_stream(&SystemClass::Oscillator3D { lambda: 1.0, l: 1, kappa: 3.0 }).unwrap();
        assert_relative_eq!(o.a(0), 25.0);
        assert_relative_eq!(o.b(0), -8.0 * 2.5f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(o.sigma(), 0.5);
    }

    #[test]
    fn invalid_parameters() {
        assert!(coefficient_stream(&SystemClass::Oscillator3D { lambda: 2.0, l: 0, kappa: 3.0 }).is_err());
        assert!(coefficient_stream(&SystemClass::Morse1D { lambda: 1.0, mu: -10.0, nu: 8.0 }).is_err());
        assert!(coefficient_stream(&SystemClass::Free1DEven { lambda: -1.0 }).is_err());
    }

    #[test]
    fn discrete_levels() {
        let osc = SystemClass::Oscillator3D { lambda: 1.0, l: 1, kappa: 3.0 };
        let lv = discrete_spectrum(&osc, 0).unwrap();
        assert_relative_eq!(lv.energy, 7.5);
        assert_relative_eq!(lv.weight, 0.75f64.powf(2.5), max_relative = 1e-13);
        let morse = SystemClass::Morse1D { lambda: 0.5, mu: -10.0, nu: 16.0 };
        assert_relative_eq!(discrete_spectrum(&morse, 0).unwrap().energy, -2.53125);
        assert_eq!(morse.morse_n_max(), Some(4));
        assert!(discrete_spectrum(&morse, 5).is_err());
        assert!(discrete_spectrum(&SystemClass::Free3D { lambda: 1.0, l: 0 }, 0).is_err());
    }

    #[test]
    fn basis_trivial_points() {
        let v = basis_value(&SystemClass::Free1DEven { lambda: 2.0 }, 0, 0.0).unwrap();
        assert_relative_eq!(v, (2.0 / PI.sqrt()).sqrt(), max_relative = 1e-14);
        assert_eq!(basis_value(&SystemClass::Free3D { lambda: 1.0, l: 2 }, 3, 0.0).unwrap(), 0.0);
        assert!(basis_value(&SystemClass::Free3D { lambda: 1.0, l: 2 }, 3, -1.0).is_err());
        assert_eq!(basis_value(&SystemClass::Free1DOdd { lambda: 1.0 }, 2, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn weights_at_simple_points() {
        let w = reference_weight(&SystemClass::Free1DEven { lambda: 1.0 }, 1.0).unwrap();
        assert_relative_eq!(w, (-1.0f64).exp() / PI.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(reference_weight(&SystemClass::Chebyshev, 0.0).unwrap(), 2.0 / PI);
        assert!(reference_weight(&SystemClass::Oscillator3D { lambda: 1.0, l: 0, kappa: 2.0 }, 1.0).is_err());
        assert_eq!(reference_weight(&SystemClass::Free3D { lambda: 1.0, l: 0 }, -1.0).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_first_degree() {
        let c = SystemClass::Free3D { lambda: 1.0, l: 1 };
        let p1 = closed_form_p(&c, 1, SpectralArg::Z(2.0)).unwrap();
        assert_relative_eq!(p1, -(2.5 - 2.0) / 2.5f64.sqrt(), max_relative = 1e-14);
        let osc = SystemClass::Oscillator3D { lambda: 1.0, l: 1, kappa: 3.0 };
        let q = closed_form_p(&osc, 1, SpectralArg::Level(0)).unwrap();
        assert_relative_eq!(q, 2.5f64.sqrt() * 0.5, max_relative = 1e-14);
        assert_eq!(closed_form_p(&osc, 0, SpectralArg::Level(3)).unwrap(), 1.0);
    }

    #[test]
    fn energy_factor_free_even() {
        let c = SystemClass::Free1DEven { lambda: 1.0 };
        let f = f0_g0(&c, SpectralArg::Z(2.0)).unwrap();
        let expected = (2.0 * PI * 2f64.sqrt() * (-2.0f64).exp() / (2.0 * PI).sqrt()).sqrt();
        assert_relative_eq!(f, expected, max_relative = 1e-14);
        assert!(f0_g0(&c, SpectralArg::Z(800.0)).unwrap() < 1e-100);
    }
}
