use pmoments::linalg::{
    hermitian_eigenvalues, kron, partial_trace_matrix, partial_transpose_matrix, permute_local_basis, trace_power,
};
use pmoments::states::{random_density, random_hermitian};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn layouts() -> impl Strategy<Value = Vec<usize>> {
    prop_oneof![
        Just(vec![2, 2]),
        Just(vec![2, 3]),
        Just(vec![3, 3]),
        Just(vec![2, 4]),
        Just(vec![2, 2, 2]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_power_matches_spectrum(seed in any::<u64>(), d in 2usize..=9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(d, &mut rng).scale(1.0 / d as f64);
        let spec = hermitian_eigenvalues(&h).unwrap();
        for k in 1..=6u32 {
            let direct = trace_power(&h, k).unwrap();
            prop_assert!((direct - spec.power_sum(k)).abs() <= 1e-9, "k={k}: {direct} vs {}", spec.power_sum(k));
        }
    }

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), dims in layouts(), party_pick in 0usize..3) {
        let rho = random_density(&dims, seed).unwrap();
        let party = party_pick % dims.len();
        let once = partial_transpose_matrix(rho.matrix(), &dims, party).unwrap();
        let twice = partial_transpose_matrix(&once, &dims, party).unwrap();
        prop_assert!(twice.approx_eq(rho.matrix(), 0.0));
    }

    #[test]
    fn pt_spectrum_ignores_local_basis_order(seed in any::<u64>(), dims in layouts(), shift in 1usize..4) {
        let rho = random_density(&dims, seed).unwrap();
        let before = hermitian_eigenvalues(&partial_transpose_matrix(rho.matrix(), &dims, 0).unwrap()).unwrap();
        let mut m = rho.matrix().clone();
        for (party, &d) in dims.iter().enumerate() {
            let perm: Vec<usize> = (0..d).map(|i| (i + shift) % d).collect();
            m = permute_local_basis(&m, &dims, party, &perm).unwrap();
        }
        let after = hermitian_eigenvalues(&partial_transpose_matrix(&m, &dims, 0).unwrap()).unwrap();
        prop_assert!(before.max_abs_diff(&after) <= 1e-9);
    }

    #[test]
    fn partial_trace_of_product(seed in any::<u64>(), da in 2usize..=3, db in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(da, &mut rng);
        let b = random_hermitian(db, &mut rng);
        let reduced = partial_trace_matrix(&kron(&a, &b), &[da, db], 0).unwrap();
        let expected = a.scale_complex(b.trace());
        prop_assert!(reduced.approx_eq(&expected, 1e-12));
    }
}
