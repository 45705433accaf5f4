//! Scalar special-function kernels: complex log-gamma, Pochhammer symbols,
//! Hermite and Laguerre recurrences, terminating hypergeometric sums and
//! half-integer Bessel functions.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_76e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_103_2e-3,
    0.217_439_618_115_212_64e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Logarithm of the gamma function for complex argument.
///
/// The real part is exact to about 1e-14 relative; the imaginary part is
/// determined modulo 2π, which is irrelevant for `|Γ|` and for `exp(log Γ)`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("log_gamma"));
    }
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::GammaPole(z.re));
    }
    if z.re < 0.5 {
        // Reflection: Γ(z)Γ(1-z) = π / sin(πz).
        let s = (z * PI).sin();
        let rest = log_gamma(Complex64::new(1.0, 0.0) - z)?;
        return Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - rest);
    }
    let zm = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (zm + i as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (zm + 0.5) * t.ln() - t + acc.ln())
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(log_gamma(Complex64::new(x, 0.0))?.re)
}

/// `Γ(x)` for real `x`, with sign, erroring at the poles.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("gamma"));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole(x));
    }
    if x < 0.5 {
        return Ok(PI / ((PI * x).sin() * gamma(1.0 - x)?));
    }
    Ok(ln_gamma(x)?.exp())
}

/// `|Γ(z)|²` computed as `exp(2 Re log Γ(z))`.
pub fn gamma_abs_sq(z: Complex64) -> Result<f64> {
    Ok((2.0 * log_gamma(z)?.re).exp())
}

/// Rising factorial `(c)_n` by iterated product.
pub fn pochhammer(c: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (c + k as f64))
}

/// Rising factorial for complex base.
pub fn pochhammer_complex(c: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (c + k as f64))
}

/// Rising factorial through the gamma ratio `Γ(c+n)/Γ(c)`, for `c > 0`.
pub fn pochhammer_via_gamma(c: f64, n: usize) -> Result<f64> {
    Ok((ln_gamma(c + n as f64)? - ln_gamma(c)?).exp())
}

/// Laguerre polynomial `L_n^ν(y)` by forward recurrence.
pub fn laguerre(n: usize, nu: f64, y: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + nu - y;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + nu - y) * cur - (kf + nu) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Physicists' Hermite polynomial `H_n(y)` from `yH_n = nH_{n-1} + ½H_{n+1}`.
pub fn hermite(n: usize, y: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * y;
    for k in 1..n {
        let next = 2.0 * y * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Orthonormal Hermite values `H_k(t)/sqrt(2^k k!)` for `k = 0..=n_max`.
pub fn hermite_normalized(n_max: usize, t: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(n_max + 1);
    h.push(1.0);
    if n_max >= 1 {
        h.push(std::f64::consts::SQRT_2 * t);
    }
    for k in 1..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * t * h[k] - (kf / (kf + 1.0)).sqrt() * h[k - 1];
        h.push(next);
    }
    h
}

/// Orthonormal Laguerre values `sqrt(k!/Γ(k+a+1)) L_k^a(y)` for `k = 0..=n_max`.
pub fn laguerre_normalized(n_max: usize, a: f64, y: f64) -> Result<Vec<f64>> {
    if a <= -1.0 {
        return Err(Error::Domain(format!("Laguerre parameter must exceed -1, got {a}")));
    }
    let mut l = Vec::with_capacity(n_max + 1);
    l.push((-0.5 * ln_gamma(a + 1.0)?).exp());
    if n_max >= 1 {
        l.push((a + 1.0 - y) * l[0] / (a + 1.0).sqrt());
    }
    for k in 1..n_max {
        let kf = k as f64;
        let next = ((2.0 * kf + a + 1.0 - y) * l[k] - (kf * (kf + a)).sqrt() * l[k - 1])
            / ((kf + 1.0) * (kf + 1.0 + a)).sqrt();
        l.push(next);
    }
    Ok(l)
}

fn near_integer(z: Complex64, target: f64) -> bool {
    z.im.abs() <= 1e-12 * (1.0 + z.re.abs()) && (z.re - target).abs() <= 1e-12 * (1.0 + target.abs())
}

/// Terminating generalized hypergeometric sum `Σ_{m=0}^{n} Π(a)_m / Π(b)_m · x^m/m!`.
///
/// One numerator must equal `-n`. The sum is accumulated with Neumaier
/// compensation.
pub fn hyp_terminating(
    numerators: &[Complex64],
    denominators: &[Complex64],
    arg: Complex64,
    n: usize,
) -> Result<Complex64> {
    if !numerators.iter().any(|&a| near_integer(a, -(n as f64))) {
        return Err(Error::Hypergeometric(format!(
            "no numerator parameter equals -{n}; the series does not terminate"
        )));
    }
    for (i, &b) in denominators.iter().enumerate() {
        for k in 0..n {
            if near_integer(b, -(k as f64)) {
                return Err(Error::Hypergeometric(format!(
                    "denominator parameter {i} hits a pole at index {}",
                    k + 1
                )));
            }
        }
    }
    let mut sum = Complex64::new(1.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for m in 0..n {
        let mf = m as f64;
        let mut ratio = arg / (mf + 1.0);
        for &a in numerators {
            ratio *= a + mf;
        }
        for &b in denominators {
            ratio /= b + mf;
        }
        term *= ratio;
        let re = neumaier(sum.re, comp.re, term.re);
        let im = neumaier(sum.im, comp.im, term.im);
        sum = Complex64::new(re.0, im.0);
        comp = Complex64::new(re.1, im.1);
    }
    let out = sum + comp;
    if !out.re.is_finite() || !out.im.is_finite() {
        return Err(Error::NonFinite("hyp_terminating"));
    }
    Ok(out)
}

fn neumaier(sum: f64, comp: f64, x: f64) -> (f64, f64) {
    let t = sum + x;
    let c = if sum.abs() >= x.abs() {
        comp + ((sum - t) + x)
    } else {
        comp + ((x - t) + sum)
    };
    (t, c)
}

/// Real-parameter convenience wrapper of [`hyp_terminating`].
pub fn hyp_terminating_real(numerators: &[f64], denominators: &[f64], arg: f64, n: usize) -> Result<f64> {
    let num: Vec<Complex64> = numerators.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    let den: Vec<Complex64> = denominators.iter().map(|&b| Complex64::new(b, 0.0)).collect();
    Ok(hyp_terminating(&num, &den, Complex64::new(arg, 0.0), n)?.re)
}

/// Bessel function `J_{ℓ+1/2}(x)` for `x > 0`.
pub fn bessel_j_half(l: usize, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_j_half requires x > 0, got {x}")));
    }
    let nu0 = l as f64 + 0.5;
    if x < 1.0 {
        return bessel_series(nu0, x);
    }
    let pref = (2.0 / (PI * x)).sqrt();
    let j_half = pref * x.sin();
    let j_three_half = pref * (x.sin() / x - x.cos());
    match l {
        0 => return Ok(j_half),
        1 => return Ok(j_three_half),
        _ => {}
    }
    if x > l as f64 {
        let (mut prev, mut cur) = (j_half, j_three_half);
        for k in 1..l {
            let nu = k as f64 + 0.5;
            let next = (2.0 * nu / x) * cur - prev;
            prev = cur;
            cur = next;
        }
        return Ok(cur);
    }
    // Miller's downward recurrence, normalized against the closed forms.
    let start = l + 30 + x.ceil() as usize;
    let mut above = 0.0;
    let mut cur = 1e-30;
    let mut at_l = 0.0;
    for k in (1..=start).rev() {
        let nu = k as f64 + 0.5;
        let below = (2.0 * nu / x) * cur - above;
        above = cur;
        cur = below;
        if k - 1 == l {
            at_l = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            at_l *= 1e-250;
        }
    }
    // cur ~ J_{1/2}, above ~ J_{3/2}
    let scale = if j_half.abs() > j_three_half.abs() {
        j_half / cur
    } else {
        j_three_half / above
    };
    Ok(at_l * scale)
}

fn bessel_series(nu: f64, x: f64) -> Result<f64> {
    let half = 0.5 * x;
    let mut term = (nu * half.ln() - ln_gamma(nu + 1.0)?).exp();
    let mut sum = term;
    for k in 1..60 {
        let kf = k as f64;
        term *= -half * half / (kf * (kf + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    Ok(sum)
}
