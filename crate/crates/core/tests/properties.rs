//! Property tests for the structural invariants that hold across the
//! whole input space, not just the worked examples.

use num_bigint::BigUint;
use proptest::prelude::*;

use iccc_core::codes::{brute_force_spectrum, cocycle_code, dual_code, macwilliams, LinearCode};
use iccc_core::ff::PrimeField;
use iccc_core::graphs::Graph;
use iccc_core::mat::Matrix;
use iccc_core::potts::{brute_force_z, z_from_spectrum, PottsInstance};

fn arb_q() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

/// A random full-rank generator matrix over GF(q), dimensions bounded.
fn arb_code(max_n: usize) -> impl Strategy<Value = LinearCode> {
    (arb_q(), 1usize..=max_n).prop_flat_map(move |(q, n)| {
        let k = 1usize..=n.min(6);
        (Just(q), Just(n), k).prop_flat_map(move |(q, n, k)| {
            prop::collection::vec(0..q, n * k).prop_filter_map(
                "rank-deficient generator",
                move |data| {
                    let rows: Vec<Vec<u64>> =
                        data.chunks(n).map(|c| c.to_vec()).collect();
                    let m = Matrix::from_rows(q, rows);
                    let rref = m.rref();
                    if rref.pivots.len() == k {
                        LinearCode::new(rref.matrix).ok()
                    } else {
                        None
                    }
                },
            )
        })
    })
}

/// A random connected multigraph with bounded size.
fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..=6, 0usize..=4, any::<u64>()).prop_map(|(v, extra, seed)| {
        // spanning path keeps it connected; extra edges may be parallel
        let mut edges: Vec<(usize, usize)> = (0..v - 1).map(|i| (i, i + 1)).collect();
        let mut state = seed | 1;
        for _ in 0..extra {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = (state >> 16) as usize % v;
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = (state >> 16) as usize % v;
            if a != b {
                edges.push((a.min(b), a.max(b)));
            }
        }
        Graph::new(v, edges).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn macwilliams_is_an_involution(code in arb_code(12)) {
        let spec = brute_force_spectrum(&code, 24, 1).unwrap();
        let once = macwilliams(&spec, code.n(), code.k(), code.q()).unwrap();
        let twice = macwilliams(&once, code.n(), code.n() - code.k(), code.q()).unwrap();
        prop_assert_eq!(twice, spec);
    }

    #[test]
    fn macwilliams_matches_dual_enumeration(code in arb_code(10)) {
        let spec = brute_force_spectrum(&code, 24, 1).unwrap();
        let transformed = macwilliams(&spec, code.n(), code.k(), code.q()).unwrap();
        let dual = dual_code(&code);
        let dual_spec = brute_force_spectrum(&dual, 24, 1).unwrap();
        prop_assert_eq!(transformed, dual_spec);
    }

    #[test]
    fn barg_identity_on_random_graphs(g in arb_graph(), q in arb_q()) {
        let prime = PrimeField::new(q).unwrap();
        let inst = PottsInstance::new(g.clone(), prime, 1.0, 0.0);
        let direct = brute_force_z(&inst, 24, 1).unwrap();
        let cmm = g.reduce_to_cmm(prime);
        let spec = brute_force_spectrum(&cocycle_code(&cmm), 24, 1).unwrap();
        let via_code = z_from_spectrum(&spec, g.edge_count(), cmm.components, q);
        prop_assert_eq!(direct, via_code);
    }

    #[test]
    fn coefficients_always_sum_to_q_pow_v(g in arb_graph(), q in arb_q()) {
        let prime = PrimeField::new(q).unwrap();
        let inst = PottsInstance::new(g.clone(), prime, 1.0, 0.0);
        let z = brute_force_z(&inst, 24, 1).unwrap();
        prop_assert_eq!(
            z.coefficient_sum(),
            BigUint::from(q).pow(g.vertex_count() as u32)
        );
    }

    #[test]
    fn evaluation_is_positive(g in arb_graph(), q in arb_q(), beta in 0.0f64..4.0) {
        let prime = PrimeField::new(q).unwrap();
        let inst = PottsInstance::new(g.clone(), prime, 1.0, 0.0);
        let z = brute_force_z(&inst, 24, 1).unwrap();
        prop_assert!(z.evaluate(beta, 1.0) > 0.0);
        prop_assert!(z.evaluate(beta, -1.0) > 0.0);
    }

    #[test]
    fn cmm_rank_and_idempotence(g in arb_graph(), q in arb_q()) {
        let prime = PrimeField::new(q).unwrap();
        let a = g.reduce_to_cmm(prime);
        let b = g.reduce_to_cmm(prime);
        prop_assert_eq!(a.rank(), g.vertex_count() - g.component_count());
        prop_assert_eq!(a.matrix, b.matrix);
        prop_assert_eq!(a.column_permutation, b.column_permutation);
    }
}
