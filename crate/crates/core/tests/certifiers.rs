use std::f64::consts::PI;

use nalgebra::Matrix3;
use rand::Rng;

use snc_core::antistate::{antistate, pair_decompose, CLUSTER_TOL};
use snc_core::entcert::{
    alpha_condition, max_overlap, ppt_first_qubit, q_poly, rank2_certify, sufficient_criterion,
    three_qubit_exact, x_matrix_positivity, CorrelationMatrixA, Verdict, Witness, DEFAULT_GRID,
    DEFAULT_REFINE,
};
use snc_core::families::{self, MixtureSpec};
use snc_core::linalg::binom;
use snc_core::nocorr::{is_snc, SNC_TOL};
use snc_core::random::{random_density, random_snc, random_snc_pairing, random_weights, seeded};
use snc_core::symrep::{coherent_state, from_tensor, reduce, to_tensor, BlochVector, SymDensity};
use snc_core::{a_matrix, C64};

/// Dense latitude–longitude maximum of `⟨n|ρ|n⟩`, written out from the
/// coherent-state amplitudes `a_k(θ) e^{-i(N-k)φ}`.
fn dense_overlap_max(rho: &SymDensity, n_theta: usize, n_phi: usize) -> f64 {
    let n = rho.n_qubits();
    let m = rho.matrix();
    let mut best = f64::NEG_INFINITY;
    for i in 0..n_theta {
        let theta = PI * i as f64 / (n_theta - 1) as f64;
        let (s, c) = ((theta / 2.0).sin(), (theta / 2.0).cos());
        let a: Vec<f64> = (0..=n)
            .map(|k| binom(n, k).sqrt() * s.powi(k as i32) * c.powi((n - k) as i32))
            .collect();
        // g_d = Σ_k a_k a_{k+d} ρ_{k,k+d}; f = Σ_d Re(e^{i d φ} g_d) with d = l - k
        let g: Vec<C64> = (0..=n)
            .map(|d| (0..=n - d).map(|k| m[(k, k + d)] * (a[k] * a[k + d])).sum())
            .collect();
        for j in 0..n_phi {
            let phi = 2.0 * PI * j as f64 / n_phi as f64;
            let mut f = g[0].re;
            for (d, gd) in g.iter().enumerate().skip(1) {
                f += 2.0 * (C64::from_polar(1.0, d as f64 * phi) * gd).re;
            }
            best = best.max(f);
        }
    }
    best
}

#[test]
fn dense_overlap_helper_matches_direct_overlap() {
    let mut rng = seeded(1);
    let rho = random_density(5, 3, &mut rng);
    for &(t, p) in &[(0.3, 1.1), (2.0, 5.0), (PI, 0.0)] {
        let direct = rho.overlap(&BlochVector::new(t, p));
        let v = coherent_state(5, &BlochVector::new(t, p));
        let brute = (v.amplitudes().adjoint() * rho.matrix() * v.amplitudes())[(0, 0)].re;
        assert!((direct - brute).abs() < 1e-14);
    }
    // a 3×3 mesh hits θ = π/2, φ = 0
    let mesh = dense_overlap_max(&rho, 3, 1);
    let direct = [0.0, PI / 2.0, PI]
        .iter()
        .map(|&t| rho.overlap(&BlochVector::new(t, 0.0)))
        .fold(f64::MIN, f64::max);
    assert!((mesh - direct).abs() < 1e-14);
}

#[test]
fn max_overlap_agrees_with_dense_grid_on_five_qubits() {
    let mut rng = seeded(2);
    for _ in 0..20 {
        let rho = random_density(5, rng.random_range(1..=6), &mut rng);
        let ours = max_overlap(&rho, DEFAULT_GRID, DEFAULT_REFINE);
        let oracle = dense_overlap_max(&rho, 2001, 4000);
        assert!(
            ours.value >= oracle - 1e-12,
            "{} below dense grid {}",
            ours.value,
            oracle
        );
        assert!(ours.value - oracle <= 1e-6, "{} vs {}", ours.value, oracle);
        assert!((rho.overlap(&ours.n_star) - ours.value).abs() < 1e-14);
    }
}

#[test]
fn sufficient_criterion_examples() {
    let a_state = families::rank2_state(3, 1).unwrap();
    let r = sufficient_criterion(&a_state);
    assert_eq!(r.verdict, Verdict::GenuinelyEntangled);
    assert!((r.margin - (0.5 - 0.375)).abs() < 1e-12);

    let n = BlochVector::new(1.0, 2.0);
    let c = coherent_state(3, &n);
    let pair = SymDensity::new(
        (c.projector().matrix() + antistate(&c).projector().matrix()) * C64::new(0.5, 0.0),
    )
    .unwrap();
    assert_eq!(sufficient_criterion(&pair).verdict, Verdict::Undetected);

    let mixed = SymDensity::diagonal(&[0.25; 4]).unwrap();
    let r = sufficient_criterion(&mixed);
    assert_eq!(r.verdict, Verdict::Undetected);
    // θ = 0 already reaches tr ρ² = 1/4
    assert!((dense_overlap_max(&mixed, 181, 360) - 0.25).abs() < 1e-12);
    assert!((mixed.purity() - 0.25).abs() < 1e-15);
}

#[test]
fn sufficient_criterion_never_contradicts_exact_tests() {
    let mut rng = seeded(3);
    for _ in 0..200 {
        let rho = random_snc(3, &mut rng).unwrap();
        if three_qubit_exact(&rho).unwrap().verdict == Verdict::Separable {
            assert_ne!(
                sufficient_criterion(&rho).verdict,
                Verdict::GenuinelyEntangled
            );
        }
    }
    for j in 0..=100 {
        let rho =
            families::mixture_state(&MixtureSpec::three_qubit(j as f64 / 200.0).unwrap()).unwrap();
        if three_qubit_exact(&rho).unwrap().verdict == Verdict::Separable {
            assert_ne!(
                sufficient_criterion(&rho).verdict,
                Verdict::GenuinelyEntangled
            );
        }
    }
}

#[test]
fn alpha_detection_is_a_strict_subset_of_negative_a() {
    let mut rng = seeded(4);
    let mut undetected_entangled = 0;
    for _ in 0..300 {
        let rho = random_snc(3, &mut rng).unwrap();
        let a = a_matrix(&to_tensor(&rho).unwrap()).unwrap();
        let rep = alpha_condition(a.eigenvalues()).unwrap();
        if rep.detected {
            assert!(a.min_eigenvalue() < 0.0);
        } else if a.min_eigenvalue() < -1e-6 {
            undetected_entangled += 1;
        }
    }
    assert!(undetected_entangled > 0);
}

#[test]
fn rank_two_states_never_exceed_one_half() {
    let mut rng = seeded(5);
    for n in [3, 5, 7] {
        for _ in 0..10 {
            let m = random_snc_pairing(n, 1, &mut rng).unwrap().reconstruct();
            let rho = SymDensity::new((&m + m.adjoint()) * C64::new(0.5, 0.0)).unwrap();
            assert!(max_overlap(&rho, DEFAULT_GRID, DEFAULT_REFINE).value <= 0.5 + 1e-12);
        }
    }
}

#[test]
fn q_poly_examples_and_sign_equivalence() {
    let q = q_poly(&CorrelationMatrixA::diagonal([1.0 / 3.0; 3])).unwrap();
    let want = [1.0, -2.0, 1.0, -4.0 / 27.0];
    for (a, b) in q.coeffs.iter().zip(want) {
        assert!((a - b).abs() < 1e-15);
    }
    assert!(q.roots_nonnegative(1e-9));
    let q = q_poly(&CorrelationMatrixA::diagonal([
        2.0 / 3.0,
        2.0 / 3.0,
        -1.0 / 3.0,
    ]))
    .unwrap();
    assert!(!q.roots_nonnegative(1e-9));

    let mut rng = seeded(6);
    let mut checked = 0;
    while checked < 200 {
        let g = Matrix3::from_fn(|_, _| rng.random_range(-1.0..1.0f64));
        let mut a = (g + g.transpose()) * 0.5;
        let shift = (a.trace() - 1.0) / 3.0;
        for i in 0..3 {
            a[(i, i)] -= shift;
        }
        let a = CorrelationMatrixA(a);
        if a.min_eigenvalue().abs() < 1e-6 {
            continue;
        }
        assert_eq!(
            q_poly(&a).unwrap().roots_nonnegative(1e-9),
            a.min_eigenvalue() > 0.0
        );
        checked += 1;
    }
}

#[test]
fn x_matrix_order_one_matches_two_qubit_ppt() {
    let mut rng = seeded(7);
    for _ in 0..50 {
        let x = to_tensor(&random_snc(5, &mut rng).unwrap()).unwrap();
        let xm = x_matrix_positivity(&x, 1).unwrap();
        let two = from_tensor(&reduce(&x, 2).unwrap()).unwrap();
        let ppt = ppt_first_qubit(&two).unwrap().min_eigenvalue;
        if xm.abs() > 1e-9 && ppt.abs() > 1e-9 {
            assert_eq!(xm < 0.0, ppt < 0.0, "{xm} vs {ppt}");
        }
    }
}

#[test]
fn x_matrix_order_one_is_block_diagonal_for_snc() {
    let mut rng = seeded(8);
    let x = to_tensor(&random_snc(3, &mut rng).unwrap()).unwrap();
    let m = snc_core::entcert::x_matrix(&x, 1).unwrap();
    let a = a_matrix(&x).unwrap();
    assert!((m[(0, 0)] - 1.0).abs() < 1e-14);
    for i in 0..3 {
        assert!(m[(0, i + 1)].abs() < 1e-12);
        for j in 0..3 {
            assert!((m[(i + 1, j + 1)] - a.0[(i, j)]).abs() < 1e-14);
        }
    }
    let min_a = a.min_eigenvalue().min(1.0);
    assert!((x_matrix_positivity(&x, 1).unwrap() - min_a).abs() < 1e-12);
}

#[test]
fn order_two_x_matrix_is_consistent_on_five_qubit_families() {
    let mut rng = seeded(9);
    for _ in 0..60 {
        let spec = MixtureSpec::new(5, random_weights(3, 0.5, &mut rng)).unwrap();
        let rho = families::mixture_state(&spec).unwrap();
        let xm = x_matrix_positivity(&to_tensor(&rho).unwrap(), 2).unwrap();
        if xm < -1e-9 && rho.rank(CLUSTER_TOL) == 2 {
            assert_eq!(
                rank2_certify(&rho).unwrap().verdict,
                Verdict::GenuinelyEntangled
            );
        }
    }
    for r in 0..=5 {
        let rho = families::rank2_state(5, r).unwrap();
        let xm = x_matrix_positivity(&to_tensor(&rho).unwrap(), 2).unwrap();
        if xm < -1e-9 {
            assert_ne!(rank2_certify(&rho).unwrap().verdict, Verdict::Separable);
        }
    }
}

#[test]
fn rank2_certify_examples() {
    let r = rank2_certify(&families::rank2_state(5, 1).unwrap()).unwrap();
    assert_eq!(r.verdict, Verdict::GenuinelyEntangled);
    assert_eq!(
        a_matrix(&to_tensor(&families::rank2_state(5, 1).unwrap()).unwrap())
            .unwrap()
            .rank(),
        3
    );

    let r = rank2_certify(&families::rank2_state(3, 0).unwrap()).unwrap();
    assert_eq!(r.verdict, Verdict::Separable);
    match r.witness {
        Some(Witness::Bloch { theta, .. }) => assert!(theta < 1e-9 || (theta - PI).abs() < 1e-9),
        other => panic!("unexpected witness {other:?}"),
    }

    let rho = families::rank2_state(9, 3).unwrap();
    assert_eq!(
        rank2_certify(&rho).unwrap().verdict,
        Verdict::GenuinelyEntangled
    );
    assert_eq!(a_matrix(&to_tensor(&rho).unwrap()).unwrap().rank(), 2);

    assert!(rank2_certify(&SymDensity::diagonal(&[0.25; 4]).unwrap()).is_err());
}

#[test]
fn closed_form_a_matches_computed_a() {
    for n in [3, 5, 7, 9, 11] {
        for r in 0..=n {
            let rho = families::rank2_state(n, r).unwrap();
            let x = to_tensor(&rho).unwrap();
            assert!(is_snc(&x, 1e-12).is_snc);
            assert!((rho.purity() - 0.5).abs() < 1e-15);
            let computed = a_matrix(&x).unwrap();
            let closed = families::a_closed_form(n, r).unwrap();
            assert!((computed.0 - closed.0).abs().max() < 1e-12, "N={n} r={r}");
            assert_eq!(closed.rank(), families::predicted_rank(n, r));
        }
    }
}

#[test]
fn bound_chain_sphere_weighted_sufficient() {
    let mut rng = seeded(10);
    let mut sphere_hits = 0;
    for n in [3, 5, 7] {
        for _ in 0..40 {
            let mut w = random_weights(n / 2 + 1, 0.5, &mut rng);
            // bias toward the last vertex where the bounds hold
            let t = rng.random_range(0.0..1.0f64);
            let m = w.len() - 1;
            for (i, l) in w.iter_mut().enumerate() {
                *l = (1.0 - t) * *l + if i == m { 0.5 * t } else { 0.0 };
            }
            let s: f64 = w.iter().sum();
            w[0] += 0.5 - s;
            let spec = MixtureSpec::new(n, w).unwrap();
            let sphere = families::sphere_bound(&spec);
            let weighted = families::weighted_bound(&spec).unwrap();
            if sphere.holds {
                sphere_hits += 1;
                assert!(weighted.holds);
            }
            if weighted.holds && weighted.margin > 1e-7 {
                let rho = families::mixture_state(&spec).unwrap();
                assert_eq!(
                    sufficient_criterion(&rho).verdict,
                    Verdict::GenuinelyEntangled
                );
            }
        }
    }
    assert!(sphere_hits > 0);
}

#[test]
fn top_vertex_passes_the_bounds() {
    for m in 1..=10 {
        let n = 2 * m + 1;
        assert!(binom(n, m) < 4f64.powi(m as i32));
        let mut w = vec![0.0; m + 1];
        w[m] = 0.5;
        let spec = MixtureSpec::new(n, w).unwrap();
        assert!(
            families::sphere_bound(&spec).holds || families::weighted_bound(&spec).unwrap().holds
        );
    }
}

#[test]
fn pair_decompose_examples() {
    let psi = families::dicke_superposition(3, 1).unwrap();
    let rho = SymDensity::new(
        (psi.projector().matrix() + antistate(&psi).projector().matrix()) * C64::new(0.5, 0.0),
    )
    .unwrap();
    let pd = pair_decompose(&rho, CLUSTER_TOL).unwrap();
    assert_eq!(pd.pairs.len(), 1);
    assert!((pd.pairs[0].weight - 0.5).abs() < 1e-14);

    for n in [3, 5, 7] {
        let m = n / 2;
        let spec = MixtureSpec::new(n, vec![0.5 / (m + 1) as f64; m + 1]).unwrap();
        let pd = pair_decompose(&families::mixture_state(&spec).unwrap(), CLUSTER_TOL).unwrap();
        assert_eq!(pd.pairs.len(), m + 1);
        assert!(pd
            .pairs
            .iter()
            .all(|p| (p.weight - 0.5 / (m + 1) as f64).abs() < 1e-14));
    }
}

#[test]
fn family_states_have_no_full_correlations() {
    for (n, r) in [(5, 1), (7, 2), (9, 3)] {
        assert!(
            is_snc(
                &to_tensor(&families::rank2_state(n, r).unwrap()).unwrap(),
                SNC_TOL
            )
            .is_snc
        );
    }
}

#[test]
fn coherent_state_has_a_degenerate_majorana_point() {
    let dir = BlochVector::new(1.1, 0.7);
    let pts = snc_core::majorana_roots(&coherent_state(3, &dir)).unwrap();
    assert_eq!(pts.len(), 3);
    for p in pts {
        assert!(p.distance(&dir) < 1e-4);
    }
}
