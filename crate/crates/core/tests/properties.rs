use nalgebra::Matrix3;
use proptest::prelude::*;
use rand::seq::SliceRandom;

use snc_core::antistate::{
    antipodality_error, antistate, conjugate_by_universal_not, pair_decompose, CLUSTER_TOL,
};
use snc_core::entcert::{q_poly, CorrelationMatrixA};
use snc_core::families::{self, MixtureSpec};
use snc_core::linalg::{eigvalsh, max_abs_diff};
use snc_core::nocorr::{is_anticoherent_1, is_snc, SNC_TOL};
use snc_core::random::{random_density, random_pure, random_snc, random_weights, seeded};
use snc_core::symrep::{
    coherent_state, from_tensor, reduce, s_matrix, s_matrix_from_tuple, to_tensor, BlochVector,
    PauliCounts,
};
use snc_core::C64;

fn odd_n() -> impl Strategy<Value = usize> {
    prop_oneof![Just(3usize), Just(5), Just(7), Just(9)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tensor_round_trips(n in 1usize..=9, rank in 1usize..=4, seed: u64) {
        let mut rng = seeded(seed);
        let rho = random_density(n, rank, &mut rng);
        let x = to_tensor(&rho).unwrap();
        let back = from_tensor(&x).unwrap();
        prop_assert!(max_abs_diff(back.matrix(), rho.matrix()) < 1e-12);
        let again = to_tensor(&back).unwrap();
        let worst = x.iter().zip(again.iter()).map(|((_, a), (_, b))| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(worst < 1e-12);
    }

    #[test]
    fn contraction_identity(n in 2usize..=9, seed: u64) {
        let mut rng = seeded(seed);
        let rho = random_density(n, 2, &mut rng);
        prop_assert!(to_tensor(&rho).unwrap().contraction_residual() < 1e-12);
    }

    #[test]
    fn s_matrix_is_ordering_independent(n in 1usize..=6, pick: prop::sample::Index, seed: u64) {
        let classes = PauliCounts::all(n);
        let c = classes[pick.index(classes.len())];
        let grouped = s_matrix(n, c).unwrap();
        let mut tuple = c.to_tuple();
        let mut rng = seeded(seed);
        for _ in 0..3 {
            tuple.shuffle(&mut rng);
            prop_assert!(max_abs_diff(&s_matrix_from_tuple(&tuple), &grouped) < 1e-12);
        }
    }

    #[test]
    fn coherent_coordinates_factorize(n in 1usize..=8, theta in 0.0..std::f64::consts::PI, phi in 0.0..std::f64::consts::TAU) {
        let dir = BlochVector::new(theta, phi);
        let four = dir.four();
        let x = to_tensor(&coherent_state(n, &dir).projector()).unwrap();
        for (c, v) in x.iter() {
            let want: f64 = (0..4).map(|mu| four[mu].powi(c.count(mu) as i32)).product();
            prop_assert!((v - want).abs() < 1e-12, "{c:?}: {v} vs {want}");
        }
    }

    #[test]
    fn snc_states_commute_with_universal_not(n in odd_n(), seed: u64) {
        let mut rng = seeded(seed);
        let rho = random_snc(n, &mut rng).unwrap();
        prop_assert!(max_abs_diff(&conjugate_by_universal_not(&rho), rho.matrix()) < 1e-10);
    }

    #[test]
    fn snc_spectra_are_evenly_degenerate(n in odd_n(), seed: u64) {
        let mut rng = seeded(seed);
        let rho = random_snc(n, &mut rng).unwrap();
        let eig = eigvalsh(rho.matrix());
        let mut start = 0;
        for i in 1..=eig.len() {
            if i == eig.len() || eig[i] - eig[i - 1] > CLUSTER_TOL {
                prop_assert_eq!((i - start) % 2, 0, "{:?}", eig);
                start = i;
            }
        }
    }

    #[test]
    fn antistate_is_antilinear(n in 1usize..=9, seed: u64, a_re in -2.0..2.0f64, a_im in -2.0..2.0f64, b_re in -2.0..2.0f64, b_im in -2.0..2.0f64) {
        let mut rng = seeded(seed);
        let psi = random_pure(n, &mut rng);
        let phi = random_pure(n, &mut rng);
        let (a, b) = (C64::new(a_re, a_im), C64::new(b_re, b_im));
        let combo = snc_core::DickeVector::new(psi.amplitudes() * a + phi.amplitudes() * b).unwrap();
        let lhs = antistate(&combo);
        let rhs = antistate(&psi).amplitudes() * a.conj() + antistate(&phi).amplitudes() * b.conj();
        prop_assert!((lhs.amplitudes() - rhs).norm() < 1e-12);
    }

    #[test]
    fn snc_membership_survives_even_reductions(n in odd_n(), seed: u64) {
        let mut rng = seeded(seed);
        let x = to_tensor(&random_snc(n, &mut rng).unwrap()).unwrap();
        prop_assert!(is_snc(&x, SNC_TOL).is_snc);
        prop_assert!(is_anticoherent_1(&x, SNC_TOL));
        for m in 1..=n / 2 {
            prop_assert!(is_snc(&reduce(&x, n - 2 * m).unwrap(), SNC_TOL).is_snc);
        }
    }

    #[test]
    fn pair_decomposition_reconstructs(n in odd_n(), seed: u64) {
        let mut rng = seeded(seed);
        let rho = random_snc(n, &mut rng).unwrap();
        let pd = pair_decompose(&rho, CLUSTER_TOL).unwrap();
        prop_assert!((pd.weight_sum() - 0.5).abs() < 1e-10);
        prop_assert!(pd.max_cross_overlap() < 1e-10);
        prop_assert!(max_abs_diff(&pd.reconstruct(), rho.matrix()) < 1e-9);
    }

    #[test]
    fn q_poly_roots_follow_a_eigenvalue_signs(seed: u64) {
        let mut rng = seeded(seed);
        let g = Matrix3::from_fn(|_, _| rand::Rng::random_range(&mut rng, -1.0..1.0f64));
        let mut a = (g + g.transpose()) * 0.5;
        let shift = (a.trace() - 1.0) / 3.0;
        for i in 0..3 {
            a[(i, i)] -= shift;
        }
        let a = CorrelationMatrixA(a);
        let min_eig = a.min_eigenvalue();
        prop_assume!(min_eig.abs() > 1e-6);
        let q = q_poly(&a).unwrap();
        prop_assert_eq!(q.roots_nonnegative(1e-9), min_eig >= 0.0, "eig {} roots {:?}", min_eig, q.roots());
    }

    #[test]
    fn mixture_spectrum_is_doubled_weights(n in odd_n(), seed: u64) {
        let mut rng = seeded(seed);
        let w = random_weights(n / 2 + 1, 0.5, &mut rng);
        let spec = MixtureSpec::new(n, w.clone()).unwrap();
        let rho = families::mixture_state(&spec).unwrap();
        let mut want: Vec<f64> = w.iter().flat_map(|&l| [l, l]).collect();
        want.sort_by(f64::total_cmp);
        let got = eigvalsh(rho.matrix());
        for (a, b) in got.iter().zip(&want) {
            prop_assert!((a - b).abs() < 1e-14);
        }
        prop_assert!(is_snc(&to_tensor(&rho).unwrap(), 1e-12).is_snc);
    }

    #[test]
    fn u_functions_give_the_mixture_overlap(seed: u64, theta in 0.0..std::f64::consts::PI) {
        let mut rng = seeded(seed);
        let spec = MixtureSpec::new(5, random_weights(3, 0.5, &mut rng)).unwrap();
        let rho = families::mixture_state(&spec).unwrap();
        let sum: f64 = spec.weights.iter().enumerate().map(|(i, l)| l * families::u_function(5, i, theta).unwrap()).sum();
        prop_assert!((rho.overlap(&BlochVector::new(theta, 0.0)) - sum).abs() < 1e-12);
    }

    #[test]
    fn majorana_points_of_antistates_are_antipodal(seed: u64) {
        let mut rng = seeded(seed);
        let psi = random_pure(5, &mut rng);
        prop_assert!(antipodality_error(&psi).unwrap() < 1e-8);
    }
}
