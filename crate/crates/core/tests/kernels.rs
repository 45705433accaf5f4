use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

use trarep_core::recursion::{eval_p, wronskian, wronskian_at_level, CoefficientStream, InitialValues};
use trarep_core::specfun::{
    bessel_j_half, gamma, hermite, laguerre, ln_gamma, log_gamma, pochhammer, pochhammer_via_gamma,
};
use trarep_core::systems::{closed_form_p, coefficient_stream, discrete_spectrum, SpectralArg, SystemClass};
use trarep_core::tridiag::{
    eigen_with_first_components, eigenvalues, first_components_by_deletion, gauss_weights, TridiagonalMatrix,
};

// Reference values from an independent arbitrary-precision evaluation.
#[test]
fn log_gamma_oracle_values() {
    let cases = [
        (Complex64::new(0.5, 0.0), Complex64::new(0.57236494292470008707, 0.0)),
        (Complex64::new(10.0, 0.0), Complex64::new(12.801827480081469611, 0.0)),
        (Complex64::new(1.0, 1.0), Complex64::new(-0.65092319930185633889, -0.30164032046753319266)),
        (Complex64::new(0.25, 3.0), Complex64::new(-4.0672194091374119856, -0.093384313393169383050)),
        (Complex64::new(-2.5, 0.5), Complex64::new(-0.93508562129827747868, -8.8709628852474591986)),
    ];
    for (z, want) in cases {
        let got = log_gamma(z).unwrap();
        assert!((got.re - want.re).abs() < 1e-12, "Re log Γ({z}) = {} vs {}", got.re, want.re);
        let im_diff = (got.im - want.im) / (2.0 * PI);
        assert!((im_diff - im_diff.round()).abs() < 1e-12, "Im log Γ({z}) = {} vs {}", got.im, want.im);
    }
    assert_relative_eq!(gamma(4.5).unwrap(), 11.631728396567448929, max_relative = 1e-13);
    assert_relative_eq!(ln_gamma(100.0).unwrap(), 359.13420536957539878, max_relative = 1e-14);
}

#[test]
fn bessel_oracle_values() {
    assert_relative_eq!(bessel_j_half(1, 2.0).unwrap(), 0.49129377868716234501, max_relative = 1e-13);
    assert_relative_eq!(bessel_j_half(0, 1.0).unwrap(), 0.67139670714180309042, max_relative = 1e-13);
    assert_relative_eq!(bessel_j_half(2, 5.0).unwrap(), 0.24037720111131735285, max_relative = 1e-12);
}

#[test]
fn half_order_bessel_closed_forms() {
    for k in 0..=400 {
        let x = 0.1 + 19.9 * k as f64 / 400.0;
        let s = (2.0 / (PI * x)).sqrt();
        let j12 = s * x.sin();
        let j32 = s * (x.sin() / x - x.cos());
        assert!((bessel_j_half(0, x).unwrap() - j12).abs() < 1e-12, "J_1/2({x})");
        assert!((bessel_j_half(1, x).unwrap() - j32).abs() < 1e-12, "J_3/2({x})");
    }
}

proptest! {
    #[test]
    fn pochhammer_routes_agree(c in 0.05f64..12.0, n in 0usize..=30) {
        let product = pochhammer(c, n);
        let via_gamma = pochhammer_via_gamma(c, n).unwrap();
        prop_assert!((product - via_gamma).abs() <= 1e-12 * product.abs(), "({c})_{n}: {product} vs {via_gamma}");
    }

    #[test]
    fn hermite_recurrence_residual(y in -10.0f64..10.0, n in 1usize..60) {
        let (hm, h, hp) = (hermite(n - 1, y), hermite(n, y), hermite(n + 1, y));
        let scale = hp.abs().max((2.0 * y * h).abs()).max((2.0 * n as f64 * hm).abs());
        let residual = hp - 2.0 * y * h + 2.0 * n as f64 * hm;
        prop_assert!(residual.abs() <= 1e-10 * scale);
    }

    #[test]
    fn laguerre_recurrence_residual(y in 0.0f64..10.0, nu in -0.5f64..20.0, n in 1usize..60) {
        let nf = n as f64;
        let (lm, l, lp) = (laguerre(n - 1, nu, y), laguerre(n, nu, y), laguerre(n + 1, nu, y));
        let terms = [(nf + 1.0) * lp, (2.0 * nf + 1.0 + nu - y) * l, (nf + nu) * lm];
        let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        let residual = terms[0] - terms[1] + terms[2];
        prop_assert!(residual.abs() <= 1e-10 * scale);
    }
}

fn sample_classes() -> Vec<SystemClass> {
    vec![
        SystemClass::Free1DEven { lambda: 1.0 },
        SystemClass::Free1DOdd { lambda: 1.3 },
        SystemClass::Free3D { lambda: 1.0, l: 1 },
        SystemClass::Oscillator3D { lambda: 1.0, l: 1, kappa: 3.0 },
        SystemClass::Morse1D { lambda: 0.5, mu: -10.0, nu: 16.0 },
        SystemClass::Chebyshev,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wronskian_is_level_independent(
        class_index in 0usize..6,
        alpha in prop_oneof![-3.0f64..-0.05, 0.05f64..3.0],
        beta in -5.0f64..5.0,
        z in -2.0f64..12.0,
    ) {
        let class = sample_classes()[class_index];
        let s = coefficient_stream(&class).unwrap();
        let init = InitialValues::new(alpha, beta).unwrap();
        let reference = s.reference_init();
        let p = eval_p(&s, init, 21, z).unwrap();
        let r = eval_p(&s, reference, 21, z).unwrap();
        let w = wronskian(&s, init, z);
        for n in 0..=20 {
            let level = wronskian_at_level(&s, &p, &r, n);
            let term = (s.b(n) * p.values[n] * r.values[n + 1]).abs();
            prop_assert!((level - w).abs() <= 1e-9 * w.abs() + 1e-13 * term, "n = {n}: {level} vs {w}");
        }
    }
}

#[test]
fn wronskian_off_the_axis() {
    let class = SystemClass::Free3D { lambda: 1.0, l: 0 };
    let s = coefficient_stream(&class).unwrap();
    let init = InitialValues::new(-0.4, 2.0).unwrap();
    let z = Complex64::new(3.0, 0.7);
    let p = eval_p(&s, init, 21, z).unwrap();
    let r = eval_p(&s, s.reference_init(), 21, z).unwrap();
    let w = wronskian(&s, init, z);
    for n in 0..=20 {
        assert!((wronskian_at_level(&s, &p, &r, n) - w).norm() <= 1e-9 * w.norm());
    }
}

#[test]
fn reference_recursion_matches_closed_forms() {
    let continuous = [
        SystemClass::Free1DEven { lambda: 1.0 },
        SystemClass::Free1DOdd { lambda: 1.0 },
        SystemClass::Free3D { lambda: 1.0, l: 0 },
        SystemClass::Free3D { lambda: 2.0, l: 2 },
        SystemClass::Morse1D { lambda: 0.5, mu: -10.0, nu: 16.0 },
        SystemClass::Morse1D { lambda: 1.0, mu: 2.0, nu: 3.0 },
        SystemClass::Chebyshev,
    ];
    for class in continuous {
        let s = coefficient_stream(&class).unwrap();
        let zs: &[f64] = if matches!(class, SystemClass::Chebyshev) { &[-0.7, 0.1, 0.9] } else { &[0.3, 1.7, 6.0] };
        for &z in zs {
            let p = eval_p(&s, s.reference_init(), 25, z).unwrap();
            for (n, &value) in p.values.iter().enumerate() {
                let closed = closed_form_p(&class, n, SpectralArg::Z(z)).unwrap();
                assert!(
                    (value - closed).abs() <= 1e-9 * closed.abs().max(1.0),
                    "{} n = {n} z = {z}: {value} vs {closed}",
                    class.name()
                );
            }
        }
    }

    let class = SystemClass::Oscillator3D { lambda: 1.0, l: 1, kappa: 3.0 };
    let s = coefficient_stream(&class).unwrap();
    for j in 0..=4 {
        let z = discrete_spectrum(&class, j).unwrap().z;
        let p = eval_p(&s, s.reference_init(), 25, z).unwrap();
        for (n, &value) in p.values.iter().enumerate() {
            let closed = closed_form_p(&class, n, SpectralArg::Level(j)).unwrap();
            assert!((value - closed).abs() <= 1e-9 * closed.abs().max(1.0), "j = {j} n = {n}: {value} vs {closed}");
        }
    }
}

/// Divided difference over all nodes, and the magnitude `Σ|v_i|/Π_{j≠i}|x_i − x_j|`
/// setting its rounding scale.
fn divided_difference(nodes: &[f64], values: &[f64]) -> (f64, f64) {
    let mut value = 0.0;
    let mut scale = 0.0;
    for (i, (&xi, &vi)) in nodes.iter().zip(values).enumerate() {
        let denom: f64 = nodes.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &xj)| xi - xj).product();
        value += vi / denom;
        scale += (vi / denom).abs();
    }
    (value, scale)
}

#[test]
fn spectral_polynomials_have_exact_degree() {
    let init = InitialValues::new(0.7, -1.2).unwrap();
    for class in sample_classes() {
        let s = coefficient_stream(&class).unwrap();
        for n in 1..=8 {
            let nodes: Vec<f64> = (0..n + 2).map(|k| -1.0 + 0.45 * k as f64).collect();
            let values: Vec<f64> = nodes.iter().map(|&z| eval_p(&s, init, n, z).unwrap().values[n]).collect();
            let (leading, _) = divided_difference(&nodes[..n + 1], &values[..n + 1]);
            let (excess, scale) = divided_difference(&nodes, &values);
            assert!(leading != 0.0);
            assert!(excess.abs() <= 1e-8 * scale, "{} n = {n}: {excess} vs scale {scale}", class.name());
        }
    }
}

fn arb_matrix() -> impl Strategy<Value = TridiagonalMatrix> {
    (2usize..30).prop_flat_map(|n| {
        (
            proptest::collection::vec(-10.0f64..10.0, n),
            proptest::collection::vec(prop_oneof![-3.0f64..-0.1, 0.1f64..3.0], n - 1),
        )
            .prop_map(|(d, e)| TridiagonalMatrix::new(d, e).unwrap())
    })
}

proptest! {
    #[test]
    fn sturm_counts_bracket_eigenvalues(m in arb_matrix()) {
        let values = eigenvalues(&m).unwrap();
        let tol = 1e-10 * m.norm_bound().max(1.0);
        for (k, &v) in values.iter().enumerate() {
            prop_assert!(m.sturm_count(v - tol) <= k);
            prop_assert!(m.sturm_count(v + tol) >= k + 1);
        }
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn trace_is_conserved(m in arb_matrix()) {
        let values = eigenvalues(&m).unwrap();
        let trace: f64 = m.diag().iter().sum();
        let sum: f64 = values.iter().sum();
        prop_assert!((trace - sum).abs() <= 1e-10 * m.len() as f64 * m.norm_bound());
    }

    #[test]
    fn first_component_routes_agree(m in arb_matrix()) {
        let ql = eigen_with_first_components(&m).unwrap();
        let bisection = eigenvalues(&m).unwrap();
        let gap = bisection.windows(2).fold(f64::INFINITY, |g, w| g.min(w[1] - w[0]));
        prop_assume!(gap > 1e-3 * m.norm_bound());
        let deletion = first_components_by_deletion(&m).unwrap();
        let vectors = ql.first_components.unwrap();
        for k in 0..m.len() {
            prop_assert!((ql.values[k] - bisection[k]).abs() <= 1e-11 * m.norm_bound());
            prop_assert!((vectors[k] * vectors[k] - deletion[k]).abs() <= 1e-10, "k = {k}");
        }
        let (_, weights) = gauss_weights(&m).unwrap();
        prop_assert!((weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(weights.iter().all(|&w| w > 0.0));
    }
}
