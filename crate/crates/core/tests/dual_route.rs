//! The two algebraic routes to Z must coincide: the dual route (weights
//! from Gauss phases, MacWilliams back to the cocycle spectrum) against
//! direct enumeration, across generated instances and graphic fixtures.

use iccc_core::codes::{
    brute_force_spectrum, dual_code, CyclicCodeParams, LinearCode,
};
use iccc_core::ff::{ExtensionField, PrimeField};
use iccc_core::gauss::exact_phases;
use iccc_core::graphs::Graph;
use iccc_core::mceliece::{assemble_spectrum, compute_theta, weight_table};
use iccc_core::membership::{generate_instances, realize_dual_generator, InstanceFamily};
use iccc_core::pipeline::{run_partition, PipelineConfig, Route};
use iccc_core::potts::{brute_force_z, z_from_spectrum, z_via_dual_pipeline, PottsInstance};

#[test]
fn dual_pipeline_matches_primal_enumeration_on_generated_instances() {
    let mut tested = 0usize;
    for q in [2u64, 3, 5] {
        let family = InstanceFamily { q, s: 1.0, alpha: 1.0, epsilon: 0.25 };
        for inst in generate_instances(&family, 16, 12, 8, 12) {
            // the primal enumeration needs q^|V| = q^(n-k+1) within reach
            let primal_dim = inst.n as u32 - inst.k;
            if (q as u128).saturating_pow(primal_dim + 1) > 1 << 20 {
                continue;
            }
            let field = ExtensionField::new(q, inst.k as usize).unwrap();
            let params = CyclicCodeParams::new(inst.n, field.clone()).unwrap();
            let theta = compute_theta(inst.n, inst.k, q).unwrap();

            // dual route: phases -> S(i) -> tally -> MacWilliams -> Z
            let phases = exact_phases(&field, params.d(), 24).unwrap();
            let table = weight_table(&params, &phases, &theta).unwrap();
            let dual_spectrum = assemble_spectrum(&table, &params).unwrap();
            let n = inst.n as usize;
            let z_dual = z_via_dual_pipeline(&dual_spectrum, n, inst.k as usize, 1, q).unwrap();

            // primal route: enumerate the cocycle code directly
            let h = realize_dual_generator(&inst, q).unwrap();
            let primal = dual_code(&LinearCode::new(h).unwrap());
            let primal_spectrum = brute_force_spectrum(&primal, 24, 1).unwrap();
            let z_primal = z_from_spectrum(&primal_spectrum, n, 1, q);

            assert_eq!(z_dual, z_primal, "q={q} n={} k={}", inst.n, inst.k);
            tested += 1;
        }
    }
    assert!(tested >= 10, "only {tested} instances exercised the dual route");
}

#[test]
fn graph_pipeline_equals_brute_force_on_banana_family() {
    // 2-vertex multigraphs with n parallel edges realize [n, n-1] duals,
    // members exactly when ord_q(n) = n - 1; these exercise the full
    // noisy path on actual graphs.
    let cases: [(usize, u64); 4] = [(3, 2), (5, 2), (2, 3), (3, 5)];
    for (n, q) in cases {
        let g = Graph::new(2, vec![(0, 1); n]).unwrap();
        let mut cfg = PipelineConfig::new(q);
        cfg.exact_oracle = true;
        cfg.epsilon = 1e-6;
        let out = run_partition(&g, &cfg).unwrap();
        assert_eq!(out.route, Route::CodesPipeline, "n={n} q={q}");
        let inst = PottsInstance::new(g, PrimeField::new(q).unwrap(), 1.0, 0.0);
        let bf = brute_force_z(&inst, 24, 1).unwrap();
        assert_eq!(out.partition, bf, "n={n} q={q}");
    }
}

#[test]
fn noisy_graph_pipeline_is_exact_within_budget() {
    let g = Graph::new(2, vec![(0, 1); 5]).unwrap();
    let inst = PottsInstance::new(g.clone(), PrimeField::new(2).unwrap(), 1.0, 0.0);
    let bf = brute_force_z(&inst, 24, 1).unwrap();
    let eps0 = compute_theta(5, 4, 2).unwrap().epsilon0;
    for seed in 0..50 {
        let mut cfg = PipelineConfig::new(2);
        cfg.epsilon = 0.99 * eps0;
        cfg.seed = seed;
        let out = run_partition(&g, &cfg).unwrap();
        assert_eq!(out.partition, bf, "seed {seed}");
    }
}

#[test]
fn composite_graph_uses_block_decomposition() {
    let mut edges = vec![(0usize, 1usize); 3];
    edges.extend(vec![(2, 3); 5]);
    let g = Graph::new(4, edges).unwrap();
    let mut cfg = PipelineConfig::new(2);
    cfg.exact_oracle = true;
    let out = run_partition(&g, &cfg).unwrap();
    assert_eq!(out.route, Route::CodesPipeline);
    assert_eq!(out.verdict.blocks.len(), 2);
    let inst = PottsInstance::new(g, PrimeField::new(2).unwrap(), 1.0, 0.0);
    assert_eq!(out.partition, brute_force_z(&inst, 24, 1).unwrap());
}
