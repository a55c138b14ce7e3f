//! Property tests over seeded random networks.

use dirichlet_lab::eigen::dirichlet_system;
use dirichlet_lab::inequality::{
    main_bound, main_bound_all, proof_identities_audit, yang_check, yang_type_check,
};
use dirichlet_lab::network::{HostNetwork, TestFunction};
use dirichlet_lab::random::{random_interior_field, random_network, random_test_function};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scaled_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn instance(seed: u64) -> (HostNetwork, ChaCha8Rng) {
    let n = 6 + (seed % 7) as usize;
    let density = [0.2, 0.5, 0.9][(seed % 3) as usize];
    (random_network(n, seed, density).unwrap(), ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_is_twice_the_laplacian_pairing(seed in 0u64..10_000) {
        let (net, mut rng) = instance(seed);
        let f = random_interior_field(&net, &mut rng);
        let g = random_interior_field(&net, &mut rng);
        let lhs = net.energy(&f, &g);
        prop_assert!(scaled_close(lhs, 2.0 * net.inner(&net.laplacian(&f), &g), 1e-12));
        prop_assert!(scaled_close(lhs, net.energy(&g, &f), 1e-14));
        // Bilinearity in the first slot.
        let h: Vec<f64> = f.iter().zip(&g).map(|(a, b)| 2.0 * a - 3.0 * b).collect();
        let split = 2.0 * net.energy(&f, &g) - 3.0 * net.energy(&g, &g);
        prop_assert!(scaled_close(net.energy(&h, &g), split, 1e-12));
    }

    #[test]
    fn gamma_symmetric_and_nonnegative(seed in 0u64..10_000) {
        let (net, mut rng) = instance(seed);
        let f = random_interior_field(&net, &mut rng);
        let g = random_interior_field(&net, &mut rng);
        for (a, b) in net.gamma2(&f, &g).iter().zip(net.gamma2(&g, &f)) {
            prop_assert!((a - b).abs() <= 1e-14);
        }
        prop_assert!(net.gamma2(&f, &f).iter().all(|&v| v >= 0.0));
        prop_assert!(net.lambda(&f, &g) >= 0.0);
    }

    #[test]
    fn main_bound_is_unconditional(seed in 0u64..10_000, dim in 1usize..4) {
        let (net, _) = instance(seed);
        let sys = dirichlet_system(&net, 0.0).unwrap();
        let alpha = random_test_function(net.len(), dim, seed ^ 0xABCD);
        for r in main_bound_all(&net, &sys, &alpha) {
            prop_assert!(r.slack >= -1e-9, "k={} slack={}", r.k, r.slack);
        }
    }

    #[test]
    fn yang_type_implies_yang_with_two_more(seed in 0u64..10_000) {
        // λ_{k+1} − λ_i ≤ 2 for a Dirichlet spectrum in [0, 2], which is
        // all the implication uses; exercise it at the smallest admissible constant.
        let (net, _) = instance(seed);
        let sys = dirichlet_system(&net, 0.0).unwrap();
        for k in 1..sys.interior_size() {
            let probe = yang_type_check(&sys, 1.0, k).unwrap();
            let base = probe.rhs;
            let c = if base > 0.0 { (probe.lhs / base).max(0.0) } else { 0.0 };
            if yang_type_check(&sys, c, k).unwrap().holds() {
                prop_assert!(yang_check(&sys, c + 2.0, k).unwrap().holds());
            }
        }
    }
}

#[test]
fn main_bound_is_gauge_invariant() {
    for seed in 0..40u64 {
        let (net, mut rng) = instance(seed);
        let mut perm: Vec<usize> = (0..net.len()).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let moved = net.permuted(&perm).unwrap();
        let alpha = random_test_function(net.len(), 2, seed);
        let mut rows = vec![vec![0.0; 2]; net.len()];
        for (i, &p) in perm.iter().enumerate() {
            rows[p] = alpha.at(i).to_vec();
        }
        let moved_alpha = TestFunction::new(2, &rows).unwrap();

        let a = dirichlet_system(&net, 0.0).unwrap();
        let b = dirichlet_system(&moved, 0.0).unwrap();
        for (x, y) in a.eigenvalues().iter().zip(b.eigenvalues()) {
            assert!((x - y).abs() < 1e-10);
        }
        let ra = main_bound_all(&net, &a, &alpha);
        let rb = main_bound_all(&moved, &b, &moved_alpha);
        for (x, y) in ra.iter().zip(&rb) {
            // Eigenvector bases can rotate inside degenerate eigenspaces, but
            // generic random weights keep the spectrum simple.
            assert!(scaled_close(x.lhs, y.lhs, 1e-10), "seed {seed} k {}", x.k);
            assert!(scaled_close(x.rhs, y.rhs, 1e-10), "seed {seed} k {}", x.k);
        }
    }
}

#[test]
fn vector_main_bound_is_sum_of_components() {
    for seed in 0..30u64 {
        let (net, _) = instance(seed);
        let sys = dirichlet_system(&net, 0.0).unwrap();
        let alpha = random_test_function(net.len(), 3, seed + 5);
        for k in 1..sys.interior_size() {
            let whole = main_bound(&net, &sys, &alpha, k).unwrap();
            let (mut lhs, mut rhs) = (0.0, 0.0);
            for h in 0..3 {
                let part = main_bound(&net, &sys, &TestFunction::scalar(alpha.component(h)), k).unwrap();
                lhs += part.lhs;
                rhs += part.rhs;
            }
            assert!((whole.lhs - lhs).abs() <= 1e-10, "seed {seed} k {k}");
            assert!((whole.rhs - rhs).abs() <= 1e-10, "seed {seed} k {k}");
        }
    }
}

#[test]
fn audit_at_k1_has_zero_b() {
    let (net, _) = instance(3);
    let sys = dirichlet_system(&net, 0.0).unwrap();
    let s = proof_identities_audit(&net, &sys, &random_test_function(net.len(), 1, 1), 1).unwrap();
    assert_eq!(s.a.len(), 1);
    assert!(s.b[0][0].abs() < 1e-12);
    assert!(s.passes());
}

#[test]
fn constant_alpha_gives_zero_sides() {
    let (net, _) = instance(8);
    let sys = dirichlet_system(&net, 0.0).unwrap();
    let alpha = TestFunction::scalar(vec![2.5; net.len()]);
    for r in main_bound_all(&net, &sys, &alpha) {
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
    }
}

#[test]
fn json_roundtrip_preserves_reports() {
    for seed in 0..10u64 {
        let (net, _) = instance(seed);
        let back = HostNetwork::from_json(&net.to_json().unwrap()).unwrap();
        assert_eq!(back, net);
        let alpha = random_test_function(net.len(), 2, seed);
        let a = main_bound_all(&net, &dirichlet_system(&net, 0.0).unwrap(), &alpha);
        let b = main_bound_all(&back, &dirichlet_system(&back, 0.0).unwrap(), &alpha);
        assert_eq!(a, b);
    }
}
