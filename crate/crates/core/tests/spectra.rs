use proptest::prelude::*;

use trarep_core::greens::dispersion_mass_points;
use trarep_core::recursion::{eval_p, CoefficientStream, InitialValues, RowZeroReplaced};
use trarep_core::spectra::{
    energy_spectrum, find_induced_bound_states, hamiltonian_matrix, spectrum_frame, sweep_alpha, BOUND_STABILITY,
};
use trarep_core::systems::{coefficient_stream, SystemClass};
use trarep_core::tridiag::eigenvalues;

fn classes() -> Vec<SystemClass> {
    vec![
        SystemClass::Free1DEven { lambda: 1.0 },
        SystemClass::Free1DOdd { lambda: 1.3 },
        SystemClass::Free3D { lambda: 1.0, l: 1 },
        SystemClass::Oscillator3D { lambda: 1.0, l: 1, kappa: 3.0 },
        SystemClass::Morse1D { lambda: 0.5, mu: -10.0, nu: 16.0 },
        SystemClass::Chebyshev,
    ]
}

fn reference(class: &SystemClass) -> InitialValues {
    coefficient_stream(class).unwrap().reference_init()
}

fn free3d() -> SystemClass {
    SystemClass::Free3D { lambda: 1.0, l: 1 }
}

#[test]
fn documented_matrix_entries() {
    let h = hamiltonian_matrix(&free3d(), InitialValues::new(-0.03, 2.5f64.sqrt()).unwrap(), 10).unwrap();
    assert!((h.diag()[0] - 0.5 * 2.5f64.sqrt() / -0.03).abs() < 1e-12);
    assert!((h.diag()[0] + 26.352).abs() < 1e-3);
    assert!((h.offdiag()[0] + 50.0 / 3.0).abs() < 1e-12);

    let osc = SystemClass::Oscillator3D { lambda: 1.0, l: 1, kappa: 3.0 };
    let h = hamiltonian_matrix(&osc, reference(&osc), 10).unwrap();
    assert!((h.diag()[1] - 22.5).abs() < 1e-12);

    for class in classes() {
        let s = coefficient_stream(&class).unwrap();
        let h = hamiltonian_matrix(&class, reference(&class), 4).unwrap();
        let e = class.energy_scale();
        assert!((h.diag()[0] - e * s.a(0)).abs() <= 1e-15 * h.diag()[0].abs().max(1.0), "{}", class.name());
        assert!((h.offdiag()[0] - e * s.b(0)).abs() <= 1e-15 * h.offdiag()[0].abs().max(1.0), "{}", class.name());
    }
}

#[test]
fn no_induced_states_at_reference() {
    for class in [SystemClass::Free1DEven { lambda: 1.0 }, SystemClass::Free1DOdd { lambda: 1.0 }, free3d()] {
        assert!(find_induced_bound_states(&class, reference(&class), 400).unwrap().is_empty(), "{}", class.name());
        assert!(dispersion_mass_points(&class, reference(&class), -200.0).unwrap().is_empty(), "{}", class.name());
    }
}

#[test]
fn strongly_repulsive_limit_binds_near_threshold() {
    let states = find_induced_bound_states(&free3d(), InitialValues::new(-100.0, 2.5f64.sqrt()).unwrap(), 2000).unwrap();
    assert_eq!(states.len(), 1, "{states:?}");
    assert!(states[0].energy < 0.0 && states[0].energy > -0.5, "{states:?}");
}

#[test]
fn converged_states_are_stable_under_doubling() {
    for class in classes() {
        let init = match class {
            SystemClass::Morse1D { .. } => InitialValues::new(-1.0, 4.0).unwrap(),
            SystemClass::Oscillator3D { .. } => InitialValues::new(-0.5, -3.0).unwrap(),
            SystemClass::Chebyshev => InitialValues::new(2.0, -1.0).unwrap(),
            _ => InitialValues::new(-0.03, 1.0).unwrap(),
        };
        let report = energy_spectrum(&class, init, 200, BOUND_STABILITY).unwrap();
        let doubled = eigenvalues(&hamiltonian_matrix(&class, init, 400).unwrap()).unwrap();
        for state in report.bound_states.iter().filter(|s| s.converged) {
            assert!(report.eigenvalues.contains(&state.energy));
            let nearest = doubled.iter().map(|e| (e - state.energy).abs()).fold(f64::INFINITY, f64::min);
            assert!(nearest <= 1e-6 * state.energy.abs(), "{}: {} moves by {nearest}", class.name(), state.energy);
        }
    }
}

/// Bound-state counts from the matrix and from the dispersion route agree and
/// switch from 0 to 1 once as α decreases through the critical value.
#[test]
fn bound_state_count_is_monotone_in_alpha() {
    let beta = 2.5f64.sqrt();
    let alphas = [0.6, 0.45, 0.35, 0.3, 0.2, 0.1, -0.03, -0.15, -0.3];
    let mut counts = Vec::new();
    for alpha in alphas {
        let init = InitialValues::new(alpha, beta).unwrap();
        let matrix = find_induced_bound_states(&free3d(), init, 1000).unwrap().len();
        let dispersion = dispersion_mass_points(&free3d(), init, -200.0).unwrap().len();
        assert_eq!(matrix, dispersion, "α = {alpha}");
        counts.push(matrix);
    }
    assert!(counts.iter().all(|&c| c <= 1), "{counts:?}");
    assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
    assert_eq!((counts[0], counts[counts.len() - 1]), (0, 1), "{counts:?}");
}

#[test]
fn reference_frame_has_no_outlier() {
    let class = SystemClass::Free3D { lambda: 2.0, l: 1 };
    let frame = spectrum_frame(&class, reference(&class), 500, BOUND_STABILITY).unwrap();
    assert!(frame.resonance_candidate.is_none(), "{:?}", frame.resonance_candidate);
    let frames = sweep_alpha(&class, reference(&class).beta, 0.5, 0.7, 3, 300).unwrap();
    assert_eq!(frames.len(), 3);
    assert!(frames.windows(2).all(|w| w[0].alpha < w[1].alpha));
    let through_zero = sweep_alpha(&class, reference(&class).beta, -0.1, 0.1, 3, 50).unwrap();
    assert_eq!(through_zero.iter().map(|f| f.alpha).collect::<Vec<_>>(), vec![-0.1, 0.1]);
}

/// Zeros of the degree-`N` spectral polynomial of the total Hamiltonian, bracketed
/// between consecutive eigenvalues and refined by bisection.
fn polynomial_zeros(class: &SystemClass, init: InitialValues, eig: &[f64]) -> Vec<f64> {
    let stream = RowZeroReplaced::for_init(coefficient_stream(class).unwrap(), init);
    let n = eig.len();
    let p = |z: f64| eval_p(&stream, init, n, z).unwrap().values[n];
    let span = eig[n - 1] - eig[0] + 1.0;
    let mut cuts = vec![eig[0] - span];
    cuts.extend(eig.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    cuts.push(eig[n - 1] + span);
    cuts.windows(2)
        .map(|w| {
            let (mut lo, mut hi) = (w[0], w[1]);
            let p_lo = p(lo);
            assert!(p_lo * p(hi) < 0.0, "no sign change in [{lo}, {hi}]");
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if p(mid) * p_lo > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn row_zero_replacement_is_structural(
        which in 0usize..6,
        alpha in prop_oneof![-3.0f64..-0.05, 0.05f64..3.0],
        beta in -5.0f64..5.0,
        size in 2usize..60,
    ) {
        let class = classes()[which];
        let init = InitialValues::new(alpha, beta).unwrap();
        let h = hamiltonian_matrix(&class, init, size).unwrap();
        let replaced = RowZeroReplaced::for_init(coefficient_stream(&class).unwrap(), init);
        let e = class.energy_scale();
        for n in 0..size {
            let want = e * replaced.a(n);
            prop_assert!((h.diag()[n] - want).abs() <= 4.0 * f64::EPSILON * want.abs(), "{} vs {}", h.diag()[n], want);
        }
        for n in 0..size - 1 {
            let want = e * replaced.b(n);
            prop_assert!((h.offdiag()[n] - want).abs() <= 4.0 * f64::EPSILON * want.abs(), "{} vs {}", h.offdiag()[n], want);
        }
    }

    #[test]
    fn eigenvalues_are_polynomial_zeros(
        which in 0usize..6,
        alpha in prop_oneof![-3.0f64..-0.05, 0.05f64..3.0],
        beta in -5.0f64..5.0,
        size in 2usize..=40,
    ) {
        let class = classes()[which];
        let init = InitialValues::new(alpha, beta).unwrap();
        let scale = 1.0 / class.energy_scale();
        let eig: Vec<f64> = eigenvalues(&hamiltonian_matrix(&class, init, size).unwrap())
            .unwrap()
            .iter()
            .map(|e| e * scale)
            .collect();
        let zeros = polynomial_zeros(&class, init, &eig);
        let norm = eig.iter().fold(1.0f64, |m, e| m.max(e.abs()));
        for (e, z) in eig.iter().zip(&zeros) {
            prop_assert!((e - z).abs() <= 1e-8 * norm, "{}: {} vs {}", class.name(), e, z);
        }
    }
}
