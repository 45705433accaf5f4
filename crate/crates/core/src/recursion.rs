//! Three-term recursion engine for co-recursive spectral polynomials.
//!
//! `P_0 = 1`, `P_1 = αz − β` and, for `n ≥ 1`,
//! `b_n P_{n+1} = (z − a_n) P_n − b_{n−1} P_{n−1}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use crate::error::{Error, Result};

/// Magnitude beyond which a recursion is considered to have overflowed.
pub const OVERFLOW_GUARD: f64 = 1e280;

/// Real or complex field element used by the recursions.
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn magnitude(self) -> f64;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Provider of the recursion coefficients of a system class.
pub trait CoefficientStream: Send + Sync {
    fn a(&self, n: usize) -> f64;
    fn b(&self, n: usize) -> f64;

    /// Asymptotic `(a_∞, b_∞)` when the coefficients converge.
    fn limit_hint(&self) -> Option<(f64, f64)> {
        None
    }

    fn alpha_hat(&self) -> f64 {
        1.0 / self.b(0)
    }

    fn beta_hat(&self) -> f64 {
        self.a(0) / self.b(0)
    }

    /// The initial values `(α̂, β̂) = (1/b_0, a_0/b_0)` of the reference problem.
    fn reference_init(&self) -> InitialValues {
        InitialValues { alpha: self.alpha_hat(), beta: self.beta_hat() }
    }
}

impl<S: CoefficientStream + ?Sized> CoefficientStream for &S {
    fn a(&self, n: usize) -> f64 {
        (**self).a(n)
    }
    fn b(&self, n: usize) -> f64 {
        (**self).b(n)
    }
    fn limit_hint(&self) -> Option<(f64, f64)> {
        (**self).limit_hint()
    }
}

/// The pair `(α, β)` fixing `P_1 = αz − β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialValues {
    pub alpha: f64,
    pub beta: f64,
}

impl InitialValues {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(Error::ZeroAlpha);
        }
        if !beta.is_finite() {
            return Err(Error::NonFinite("initial value beta"));
        }
        Ok(Self { alpha, beta })
    }
}

/// Values of a polynomial sequence at a fixed spectral argument.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSequence<T> {
    pub z: T,
    pub values: Vec<T>,
}

fn propagate<S: CoefficientStream + ?Sized, T: Scalar>(
    stream: &S,
    first: T,
    second: T,
    n_max: usize,
    z: T,
) -> Result<SpectralSequence<T>> {
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(first);
    if n_max == 0 {
        return Ok(SpectralSequence { z, values });
    }
    values.push(second);
    for n in 1..n_max {
        let bn = stream.b(n);
        if bn == 0.0 {
            return Err(Error::ZeroCoefficient { index: n });
        }
        let next = ((z - T::from_f64(stream.a(n))) * values[n] - values[n - 1] * stream.b(n - 1)) / bn;
        let mag = next.magnitude();
        if !mag.is_finite() || mag > OVERFLOW_GUARD {
            return Err(Error::Overflow(n + 1));
        }
        values.push(next);
    }
    Ok(SpectralSequence { z, values })
}

/// Spectral polynomials `P_0..P_{n_max}` at `z` for the initial values `init`.
pub fn eval_p<S: CoefficientStream + ?Sized, T: Scalar>(
    stream: &S,
    init: InitialValues,
    n_max: usize,
    z: T,
) -> Result<SpectralSequence<T>> {
    if stream.b(0) == 0.0 {
        return Err(Error::ZeroCoefficient { index: 0 });
    }
    let p1 = z * init.alpha - T::from_f64(init.beta);
    propagate(stream, T::from_f64(1.0), p1, n_max, z)
}

/// Second-kind polynomials with `Q_0 = 0`, `Q_1 = 1/b_0`.
pub fn eval_q<S: CoefficientStream + ?Sized, T: Scalar>(
    stream: &S,
    n_max: usize,
    z: T,
) -> Result<SpectralSequence<T>> {
    let b0 = stream.b(0);
    if b0 == 0.0 {
        return Err(Error::ZeroCoefficient { index: 0 });
    }
    propagate(stream, T::from_f64(0.0), T::from_f64(1.0 / b0), n_max, z)
}

/// Wronskian `(1 − αb_0)z + βb_0 − a_0` linking the modified and reference sequences.
pub fn wronskian<S: CoefficientStream + ?Sized, T: Scalar>(stream: &S, init: InitialValues, z: T) -> T {
    let b0 = stream.b(0);
    z * (1.0 - init.alpha * b0) + T::from_f64(init.beta * b0 - stream.a(0))
}

/// The Wronskian evaluated at level `n` from the two sequences, for checking n-independence.
pub fn wronskian_at_level<S: CoefficientStream + ?Sized, T: Scalar>(
    stream: &S,
    modified: &SpectralSequence<T>,
    reference: &SpectralSequence<T>,
    n: usize,
) -> T {
    let p = &modified.values;
    let r = &reference.values;
    (p[n] * r[n + 1] - p[n + 1] * r[n]) * stream.b(n)
}

/// A stream whose first row is replaced: `a_0 ↦ a0`, `b_0 ↦ b0`.
///
/// With `(a0, b0) = (β/α, 1/α)` this is the first row of the total Hamiltonian.
#[derive(Debug, Clone, Copy)]
pub struct RowZeroReplaced<S> {
    pub inner: S,
    pub a0: f64,
    pub b0: f64,
}

impl<S: CoefficientStream> RowZeroReplaced<S> {
    /// The row-zero map `{a_0, b_0} ↦ {β/α, 1/α}`.
    pub fn for_init(inner: S, init: InitialValues) -> Self {
        Self { inner, a0: init.beta / init.alpha, b0: 1.0 / init.alpha }
    }
}

impl<S: CoefficientStream> CoefficientStream for RowZeroReplaced<S> {
    fn a(&self, n: usize) -> f64 {
        if n == 0 {
            self.a0
        } else {
            self.inner.a(n)
        }
    }
    fn b(&self, n: usize) -> f64 {
        if n == 0 {
            self.b0
        } else {
            self.inner.b(n)
        }
    }
    fn limit_hint(&self) -> Option<(f64, f64)> {
        self.inner.limit_hint()
    }
}

/// Explicit coefficient tables; indices past the end repeat the limit (or the last entry).
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedStream {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub limit: Option<(f64, f64)>,
}

impl TabulatedStream {
    pub fn new(a: Vec<f64>, b: Vec<f64>, limit: Option<(f64, f64)>) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::Domain("coefficient tables must be non-empty".into()));
        }
        Ok(Self { a, b, limit })
    }

    /// Checks `b_n ≠ 0` over the tabulated range.
    pub fn validate(&self) -> Result<()> {
        match self.b.iter().position(|&b| b == 0.0) {
            Some(index) => Err(Error::ZeroCoefficient { index }),
            None => Ok(()),
        }
    }
}

impl CoefficientStream for TabulatedStream {
    fn a(&self, n: usize) -> f64 {
        match (self.a.get(n), self.limit) {
            (Some(&v), _) => v,
            (None, Some((a, _))) => a,
            (None, None) => *self.a.last().unwrap(),
        }
    }
    fn b(&self, n: usize) -> f64 {
        match (self.b.get(n), self.limit) {
            (Some(&v), _) => v,
            (None, Some((_, b))) => b,
            (None, None) => *self.b.last().unwrap(),
        }
    }
    fn limit_hint(&self) -> Option<(f64, f64)> {
        self.limit
    }
}
