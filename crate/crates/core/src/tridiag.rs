//! Real symmetric tridiagonal eigen-kernel: Sturm-sequence bisection for
//! eigenvalues, implicit QL for first eigenvector components, and the
//! eigenvalue-only product formula for the same components.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::ops::Range;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub first_components: Option<Vec<f64>>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Domain("matrix must have at least one row".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::Domain(format!(
                "off-diagonal length {} does not match diagonal length {}",
                offdiag.len(),
                diag.len()
            )));
        }
        if diag.iter().chain(offdiag.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("tridiagonal matrix entry"));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// The matrix with its first row and column removed.
    pub fn without_first(&self) -> Option<Self> {
        if self.len() < 2 {
            return None;
        }
        Some(Self { diag: self.diag[1..].to_vec(), offdiag: self.offdiag[1..].to_vec() })
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Largest absolute Gershgorin bound.
    pub fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        sturm_count(&self.diag, &self.offdiag_squared(), x, self.pivmin())
    }

    fn offdiag_squared(&self) -> Vec<f64> {
        self.offdiag.iter().map(|e| e * e).collect()
    }

    fn pivmin(&self) -> f64 {
        let max_e2 = self.offdiag.iter().fold(1.0f64, |m, e| m.max(e * e));
        f64::MIN_POSITIVE * max_e2
    }
}

fn sturm_count(diag: &[f64], e2: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q.abs() <= pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        q = diag[i] - x - e2[i - 1] / q;
        if q.abs() <= pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisect_index(diag: &[f64], e2: &[f64], pivmin: f64, k: usize, lo0: f64, hi0: f64) -> f64 {
    let mut lo = lo0;
    let mut hi = hi0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let width = hi - lo;
        if width <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + pivmin {
            break;
        }
        if sturm_count(diag, e2, mid, pivmin) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All eigenvalues in ascending order.
pub fn eigenvalues(m: &TridiagonalMatrix) -> Result<Vec<f64>> {
    eigenvalues_by_index(m, 0..m.len())
}

/// Eigenvalues with ascending indices in `range`, computed concurrently.
pub fn eigenvalues_by_index(m: &TridiagonalMatrix, range: Range<usize>) -> Result<Vec<f64>> {
    let n = m.len();
    if range.end > n || range.start > range.end {
        return Err(Error::Domain(format!("index range {range:?} outside 0..{n}")));
    }
    if n == 1 {
        return Ok(vec![m.diag[0]]);
    }
    let (glo, ghi) = m.gershgorin();
    let pad = 2.0 * f64::EPSILON * glo.abs().max(ghi.abs()) + f64::MIN_POSITIVE;
    let (lo, hi) = (glo - pad, ghi + pad);
    let e2 = m.offdiag_squared();
    let pivmin = m.pivmin();
    let diag = &m.diag;
    let values: Vec<f64> = range
        .into_par_iter()
        .map(|k| bisect_index(diag, &e2, pivmin, k, lo, hi))
        .collect();
    Ok(values)
}

/// All eigenvalues by implicit QL, `O(N²)`; absolute accuracy `ε‖J‖`.
pub fn eigenvalues_ql(m: &TridiagonalMatrix) -> Result<Vec<f64>> {
    Ok(eigen_with_first_components(m)?.values)
}

/// Eigenvalues together with the first components of the normalized eigenvectors (implicit QL).
pub fn eigen_with_first_components(m: &TridiagonalMatrix) -> Result<EigenDecomposition> {
    let n = m.len();
    let mut d = m.diag.clone();
    let mut e = m.offdiag.clone();
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut mm = l;
            while mm + 1 < n {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= f64::EPSILON * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::NonConvergence(format!("implicit QL stalled at row {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[mm] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = mm;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok(EigenDecomposition {
        values: order.iter().map(|&k| d[k]).collect(),
        first_components: Some(order.iter().map(|&k| z[k]).collect()),
    })
}

/// Squared first eigenvector components from eigenvalues alone:
/// `w_k = Π_m (τ_k − τ̃_m) / Π_{n≠k} (τ_k − τ_n)`, with `τ̃` the eigenvalues of the
/// matrix with its first row and column deleted.
pub fn first_components_by_deletion(m: &TridiagonalMatrix) -> Result<Vec<f64>> {
    let tau = eigenvalues(m)?;
    let Some(minor) = m.without_first() else {
        return Ok(vec![1.0]);
    };
    let tau_minor = eigenvalues(&minor)?;
    let scale = m.norm_bound().max(1.0);
    for k in 0..tau.len() - 1 {
        if (tau[k + 1] - tau[k]).abs() <= 1e-10 * scale {
            return Err(Error::Degenerate(k, k + 1));
        }
    }
    let weights = (0..tau.len())
        .map(|k| {
            let mut log = 0.0;
            let mut negative = false;
            for &t in &tau_minor {
                let d = tau[k] - t;
                log += d.abs().ln();
                negative ^= d < 0.0;
            }
            for (n, &t) in tau.iter().enumerate() {
                if n != k {
                    let d = tau[k] - t;
                    log -= d.abs().ln();
                    negative ^= d < 0.0;
                }
            }
            let w = log.exp();
            if negative {
                -w
            } else {
                w
            }
        })
        .collect();
    Ok(weights)
}

/// Christoffel number `1/Σ_n q_n(x)²` from the normalized polynomials of the matrix.
pub fn christoffel_weight(m: &TridiagonalMatrix, x: f64) -> f64 {
    let n = m.len();
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut sum = 1.0;
    for k in 0..n - 1 {
        let back = if k > 0 { m.offdiag[k - 1] * prev } else { 0.0 };
        let next = ((x - m.diag[k]) * cur - back) / m.offdiag[k];
        prev = cur;
        cur = next;
        sum += cur * cur;
    }
    1.0 / sum
}

/// Relative accuracy bound below which a deletion weight is kept.
pub const DELETION_CONDITION_LIMIT: f64 = 1e-12;

/// Gauss weights (squared first components). The deletion formula is used
/// where it is well conditioned: its relative error is bounded by
/// `ε‖J‖(Σ_i 1/|τ_k − μ_i| + Σ_{i≠k} 1/|τ_k − τ_i|)`. Nodes whose bound exceeds
/// [`DELETION_CONDITION_LIMIT`] take the squared first component from implicit QL.
pub fn gauss_weights(m: &TridiagonalMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    let tau = eigenvalues(m)?;
    let Some(minor) = m.without_first() else {
        return Ok((tau, vec![1.0]));
    };
    let tau_minor = eigenvalues(&minor)?;
    let mut weights = first_components_by_deletion(m)?;
    let unit = f64::EPSILON * m.norm_bound().max(1.0);
    let flagged: Vec<usize> = (0..tau.len())
        .filter(|&k| {
            let minor_sum: f64 = tau_minor.iter().map(|&s| 1.0 / (tau[k] - s).abs()).sum();
            let node_sum: f64 =
                tau.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &t)| 1.0 / (tau[k] - t).abs()).sum();
            !(unit * (minor_sum + node_sum) <= DELETION_CONDITION_LIMIT) || !(weights[k] > 0.0)
        })
        .collect();
    if !flagged.is_empty() {
        let ql = eigen_with_first_components(m)?;
        let components = ql.first_components.unwrap_or_default();
        for k in flagged {
            weights[k] = components[k] * components[k];
        }
    }
    Ok((tau, weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn small_closed_forms() {
        let one = TridiagonalMatrix::new(vec![5.0], vec![]).unwrap();
        assert_eq!(eigenvalues(&one).unwrap(), vec![5.0]);
        assert_eq!(first_components_by_deletion(&one).unwrap(), vec![1.0]);
        assert_eq!(eigen_with_first_components(&one).unwrap().first_components, Some(vec![1.0]));
        let two = TridiagonalMatrix::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let ev = eigenvalues(&two).unwrap();
        assert_relative_eq!(ev[0], -1.0, max_relative = 1e-15);
        assert_relative_eq!(ev[1], 1.0, max_relative = 1e-15);
        for w in first_components_by_deletion(&two).unwrap() {
            assert_relative_eq!(w, 0.5, max_relative = 1e-14);
        }
        let qr = eigen_with_first_components(&two).unwrap();
        for c in qr.first_components.unwrap() {
            assert_relative_eq!(c * c, 0.5, max_relative = 1e-14);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(TridiagonalMatrix::new(vec![], vec![]).is_err());
        assert!(TridiagonalMatrix::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(TridiagonalMatrix::new(vec![1.0, f64::NAN], vec![0.1]).is_err());
        let degenerate = TridiagonalMatrix::new(vec![1.0, 1.0], vec![0.0]).unwrap();
        assert!(matches!(first_components_by_deletion(&degenerate), Err(Error::Degenerate(0, 1))));
    }

    #[test]
    fn weight_routes_agree() {
        let k = 24;
        let m = TridiagonalMatrix::new(vec![0.0; k], (0..k - 1).map(|n| ((n as f64 + 1.0) / 2.0).sqrt()).collect())
            .unwrap();
        let (tau, w) = gauss_weights(&m).unwrap();
        let qr = eigen_with_first_components(&m).unwrap();
        for (i, c) in qr.first_components.unwrap().iter().enumerate() {
            assert!((c * c - w[i]).abs() < 1e-13);
            assert_relative_eq!(christoffel_weight(&m, tau[i]), w[i], max_relative = 1e-9);
        }
        assert!(w.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn chebyshev_zeros() {
        let m = TridiagonalMatrix::new(vec![0.0; 5], vec![0.5; 4]).unwrap();
        let ev = eigenvalues(&m).unwrap();
        for (i, v) in ev.iter().enumerate() {
            let k = 5 - i;
            let expected = (k as f64 * std::f64::consts::PI / 6.0).cos();
            assert!((v - expected).abs() < 1e-14);
        }
    }
}
