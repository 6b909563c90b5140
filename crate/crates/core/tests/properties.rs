use proptest::prelude::*;

use dimercorr::correlations::sampled_decomposition_averages;
use dimercorr::models::zero_field_concurrence;
use dimercorr::random::{
    ginibre, haar_unitary, random_density_matrix, random_pure_state, rng_from_seed,
};
use dimercorr::threshold::threshold_residual;
use dimercorr::{
    build_hamiltonian, concurrence, entanglement_of_formation, gibbs, hermitian_eig,
    is_separable_ppt, kron, mutual_information, partial_trace, partial_transpose, report,
    thermal_state, tth_anisotropic, tth_numeric, ComplexMatrix, DensityMatrix, ModelParams,
    Subsystem,
};

fn random_hermitian(seed: u64, n: usize) -> ComplexMatrix {
    let g = ginibre(n, &mut rng_from_seed(seed));
    &g + &g.adjoint()
}

fn random_qubit_state(seed: u64) -> ComplexMatrix {
    let g = ginibre(2, &mut rng_from_seed(seed));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    m.scale_real(1.0 / tr)
}

fn conjugate(rho: &DensityMatrix, u: &ComplexMatrix) -> DensityMatrix {
    DensityMatrix::new((&(u * rho.matrix()) * &u.adjoint()).hermitian_part()).unwrap()
}

fn local_unitary(seed: u64) -> ComplexMatrix {
    let mut rng = rng_from_seed(seed);
    let u1 = haar_unitary(2, &mut rng);
    let u2 = haar_unitary(2, &mut rng);
    kron(&u1, &u2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn eigensystem_reconstructs_and_is_orthonormal(seed in any::<u64>()) {
        let m = random_hermitian(seed, 4);
        let eig = hermitian_eig(&m).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&m) < 1e-10);
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        let v = &eig.vectors;
        prop_assert!((&v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-10);
        for k in 0..4 {
            let mv = m.apply(&eig.vector(k));
            for (a, b) in mv.iter().zip(eig.vector(k)) {
                prop_assert!((a - b * eig.values[k]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn gibbs_is_a_commuting_state(seed in any::<u64>(), t in 0.05f64..10.0) {
        let h = random_hermitian(seed, 4);
        let rho = gibbs(&h, t).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(hermitian_eig(&rho).unwrap().values[0] >= -1e-12);
        let commutator = &(&h * rho.matrix()) - &(rho.matrix() * &h);
        prop_assert!(commutator.max_abs_diff(&ComplexMatrix::zeros(4)) < 1e-10);
    }

    #[test]
    fn partial_trace_of_product(seed in any::<u64>()) {
        let a = random_qubit_state(seed);
        let b = random_qubit_state(seed.wrapping_add(1));
        let ab = kron(&a, &b).unwrap();
        prop_assert!(partial_trace(&ab, Subsystem::First).unwrap().max_abs_diff(&a) < 1e-12);
        prop_assert!(partial_trace(&ab, Subsystem::Second).unwrap().max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn partial_transpose_keeps_trace_and_hermiticity(seed in any::<u64>()) {
        let rho = random_density_matrix(&mut rng_from_seed(seed));
        for side in [Subsystem::First, Subsystem::Second] {
            let pt = partial_transpose(&rho, side).unwrap();
            prop_assert!((pt.trace() - rho.trace()).norm() < 1e-12);
            prop_assert!(pt.is_hermitian(1e-12));
        }
        let twice = partial_transpose(&partial_transpose(&rho, Subsystem::Second).unwrap(), Subsystem::Second).unwrap();
        prop_assert!(twice.max_abs_diff(rho.matrix()) == 0.0);
    }

    #[test]
    fn local_unitaries_preserve_correlations(seed in any::<u64>()) {
        let rho = random_density_matrix(&mut rng_from_seed(seed));
        let moved = conjugate(&rho, &local_unitary(seed ^ 0xabcd));
        prop_assert!((mutual_information(&rho).unwrap() - mutual_information(&moved).unwrap()).abs() < 1e-10);
        prop_assert!((concurrence(&rho).unwrap() - concurrence(&moved).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn product_states_carry_no_correlation(seed in any::<u64>()) {
        let a = random_qubit_state(seed);
        let b = random_qubit_state(seed.wrapping_mul(31).wrapping_add(5));
        let r = report(&DensityMatrix::new(kron(&a, &b).unwrap()).unwrap()).unwrap();
        for v in [r.total, r.quantum, r.classical, r.concurrence] {
            prop_assert!(v.abs() < 1e-10, "{r:?}");
        }
    }

    #[test]
    fn report_fields_are_consistent(seed in any::<u64>()) {
        let r = report(&random_density_matrix(&mut rng_from_seed(seed))).unwrap();
        prop_assert!(r.total >= 0.0 && r.total <= 2.0 + 1e-12);
        prop_assert!((0.0..=1.0).contains(&r.quantum));
        prop_assert!((0.0..=1.0).contains(&r.concurrence));
        prop_assert_eq!(r.classical, r.total - r.quantum);
        prop_assert_eq!(r.quantum == 0.0, r.concurrence == 0.0);
    }

    #[test]
    fn pure_state_decompositions_are_unique(seed in any::<u64>(), size in 1usize..=8) {
        let psi = random_pure_state(&mut rng_from_seed(seed));
        let rho = DensityMatrix::pure(&psi).unwrap();
        let ef = entanglement_of_formation(&rho).unwrap();
        for avg in sampled_decomposition_averages(&rho, size, 5, seed).unwrap() {
            prop_assert!((avg - ef).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_field_is_swap_symmetric(gamma in -1.0f64..=1.0, t in 0.05f64..5.0) {
        let rho = thermal_state(&ModelParams::heisenberg(gamma).unwrap(), t).unwrap();
        let swap = ComplexMatrix::from_real(4, &[
            1.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 1.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
        ]).unwrap();
        let a = report(&rho).unwrap();
        let b = report(&conjugate(&rho, &swap)).unwrap();
        for (x, y) in [(a.total, b.total), (a.quantum, b.quantum), (a.classical, b.classical), (a.concurrence, b.concurrence)] {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn antidiagonal_field_is_even(b in 0.0f64..3.0, t in 0.05f64..4.0) {
        let plus = report(&thermal_state(&ModelParams::xy(b, -b).unwrap(), t).unwrap()).unwrap();
        let minus = report(&thermal_state(&ModelParams::xy(-b, b).unwrap(), t).unwrap()).unwrap();
        prop_assert!((plus.total - minus.total).abs() < 1e-10);
        prop_assert!((plus.quantum - minus.quantum).abs() < 1e-10);
        prop_assert!((plus.classical - minus.classical).abs() < 1e-10);
    }
}

#[test]
fn ppt_matches_concurrence_on_random_states() {
    let mut rng = rng_from_seed(99);
    for _ in 0..1000 {
        let rho = random_density_matrix(&mut rng);
        assert_eq!(
            concurrence(&rho).unwrap() > 1e-9,
            !is_separable_ppt(&rho).unwrap()
        );
    }
}

#[test]
fn sampled_averages_never_undercut_formation() {
    for k in 0..10u64 {
        let rho = random_density_matrix(&mut rng_from_seed(500 + k));
        let ef = entanglement_of_formation(&rho).unwrap();
        let averages = sampled_decomposition_averages(&rho, 4 + (k as usize % 5), 500, k).unwrap();
        assert!(averages.iter().all(|&a| a >= ef - 1e-9));
    }
}

fn threshold_grid() -> impl Iterator<Item = f64> {
    (0..50).map(|k| -1.0 + 1.99 * k as f64 / 49.0)
}

#[test]
fn threshold_is_self_consistent() {
    for gamma in threshold_grid() {
        let t = tth_anisotropic(gamma).unwrap().t_th;
        assert!(threshold_residual(gamma, t).abs() < 1e-9, "gamma {gamma}");
    }
}

#[test]
fn threshold_sandwiches_the_concurrence_edge() {
    for gamma in threshold_grid() {
        let t = tth_anisotropic(gamma).unwrap().t_th;
        assert!(
            zero_field_concurrence(gamma, 0.99 * t).unwrap() > 0.0,
            "gamma {gamma}"
        );
        assert_eq!(
            zero_field_concurrence(gamma, 1.01 * t).unwrap(),
            0.0,
            "gamma {gamma}"
        );
        let p = ModelParams::heisenberg(gamma).unwrap();
        assert!(concurrence(&thermal_state(&p, 0.99 * t).unwrap()).unwrap() > 0.0);
        assert_eq!(
            concurrence(&thermal_state(&p, 1.01 * t).unwrap()).unwrap(),
            0.0
        );
    }
}

#[test]
fn numeric_threshold_matches_closed_form_without_field() {
    for gamma in [-1.0, -0.6, -0.2, 0.0, 0.3, 0.7, 0.9] {
        let closed = tth_anisotropic(gamma).unwrap().t_th;
        let numeric = tth_numeric(&ModelParams::heisenberg(gamma).unwrap(), 5.0)
            .unwrap()
            .expect("threshold below t_max");
        assert!(
            (numeric.t_th - closed).abs() < 1e-6,
            "gamma {gamma}: {} vs {closed}",
            numeric.t_th
        );
        assert!(!numeric.has_multiple_transitions());
    }
}

#[test]
fn hamiltonian_is_hermitian_on_random_parameters() {
    let mut rng = rng_from_seed(3);
    for _ in 0..50 {
        use rand::Rng;
        let p = ModelParams::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-3.0..=3.0),
            rng.random_range(-3.0..=3.0),
            rng.random_range(0.5..=2.0),
        )
        .unwrap();
        assert!(build_hamiltonian(&p).unwrap().is_hermitian(0.0));
    }
}
