//! End-to-end orchestration: membership, oracle phases, per-class weights,
//! coset tally, MacWilliams, and partition-function assembly, with an
//! optional brute-force fallback for non-members.

use thiserror::Error;

use crate::codes::WeightSpectrum;
use crate::gauss::{exact_phases, oracle_phases, GaussError, GaussPhase};
use crate::graphs::Graph;
use crate::mceliece::{assemble_spectrum, weight_table, McelieceError, WeightTable};
use crate::membership::{membership_test, MembershipError, MembershipVerdict};
use crate::potts::{
    brute_force_z, z_from_spectrum, PartitionFunction, PottsError, PottsInstance,
};
use crate::{DEFAULT_CONFIG_BITS, DEFAULT_FIELD_BITS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error(transparent)]
    Membership(#[from] MembershipError),
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error(transparent)]
    Mceliece(#[from] McelieceError),
    #[error(transparent)]
    Potts(#[from] PottsError),
    #[error("graph is not an ICCC member ({reason}) and fallback is disabled")]
    NotAMember { reason: &'static str },
}

#[derive(Clone, Copy, Debug)]
pub struct PipelineConfig {
    pub q: u64,
    pub epsilon: f64,
    pub seed: u64,
    /// Draw oracle failures with probability delta; off by default so the
    /// exactness guarantee stays falsifiable on its own.
    pub inject_failures: bool,
    /// Use the exact Gauss phases instead of the noisy oracle.
    pub exact_oracle: bool,
    pub allow_fallback: bool,
    pub max_field_bits: u32,
    pub max_config_bits: u32,
    pub threads: usize,
}

impl PipelineConfig {
    pub fn new(q: u64) -> Self {
        PipelineConfig {
            q,
            epsilon: 1e-3,
            seed: 0,
            inject_failures: false,
            exact_oracle: false,
            allow_fallback: true,
            max_field_bits: DEFAULT_FIELD_BITS,
            max_config_bits: DEFAULT_CONFIG_BITS,
            threads: 1,
        }
    }
}

/// Which path produced the partition function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    CodesPipeline,
    BruteForceFallback,
}

/// Everything the pipeline learned on the way to Z.
pub struct PartitionOutcome {
    pub verdict: MembershipVerdict,
    pub route: Route,
    pub partition: PartitionFunction,
    /// Per accepted block: the oracle phases and the weight table.
    pub stages: Vec<BlockStage>,
    /// The cocycle-code spectrum that fed the final assembly (codes route).
    pub primal_spectrum: Option<WeightSpectrum>,
}

pub struct BlockStage {
    pub phases: Vec<GaussPhase>,
    pub table: WeightTable,
    pub dual_spectrum: WeightSpectrum,
}

/// Runs the full partition pipeline on a graph.
pub fn run_partition(g: &Graph, cfg: &PipelineConfig) -> Result<PartitionOutcome, PipelineError> {
    let verdict = membership_test(g, cfg.q, cfg.epsilon, cfg.max_field_bits)?;
    if !verdict.accepted {
        if !cfg.allow_fallback {
            return Err(PipelineError::NotAMember { reason: verdict.reason.as_str() });
        }
        let prime = crate::ff::PrimeField::new(cfg.q).map_err(MembershipError::from)?;
        let inst = PottsInstance::new(g.clone(), prime, 1.0, 0.0);
        let partition = brute_force_z(&inst, cfg.max_config_bits, cfg.threads)?;
        return Ok(PartitionOutcome {
            verdict,
            route: Route::BruteForceFallback,
            partition,
            stages: Vec::new(),
            primal_spectrum: None,
        });
    }

    // Codes route: per accepted block, oracle phases -> weights -> dual
    // spectrum -> MacWilliams; blocks then convolve (direct-sum corollary).
    let mut stages = Vec::new();
    let mut primal = WeightSpectrum::from_counts_u64(&[1]);
    for (b_idx, block) in verdict.blocks.iter().enumerate() {
        let params = &block.params;
        let d = params.d();
        let phases = if cfg.exact_oracle {
            exact_phases(params.field(), d, cfg.max_field_bits)?
        } else {
            oracle_phases(
                params.field(),
                d,
                cfg.epsilon,
                crate::gauss::derive_seed(cfg.seed, b_idx as u64),
                cfg.inject_failures,
                cfg.max_field_bits,
            )?
        };
        let table = weight_table(params, &phases, &block.theta)?;
        let dual_spectrum = assemble_spectrum(&table, params)?;
        let block_primal = crate::codes::macwilliams(
            &dual_spectrum,
            params.n() as usize,
            params.k(),
            cfg.q,
        )
        .map_err(PottsError::from)?;
        primal = primal.convolve(&block_primal);
        stages.push(BlockStage { phases, table, dual_spectrum });
    }
    let partition = z_from_spectrum(&primal, verdict.n, verdict.components, cfg.q);
    Ok(PartitionOutcome {
        verdict,
        route: Route::CodesPipeline,
        partition,
        stages,
        primal_spectrum: Some(primal),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn banana(n: usize) -> Graph {
        Graph::new(2, vec![(0, 1); n]).unwrap()
    }

    fn brute(g: &Graph, q: u64) -> PartitionFunction {
        let inst = PottsInstance::new(g.clone(), crate::ff::PrimeField::new(q).unwrap(), 1.0, 0.0);
        brute_force_z(&inst, 24, 1).unwrap()
    }

    #[test]
    fn banana5_pipeline_equals_brute_force() {
        let g = banana(5);
        let mut cfg = PipelineConfig::new(2);
        cfg.exact_oracle = true;
        let out = run_partition(&g, &cfg).unwrap();
        assert_eq!(out.route, Route::CodesPipeline);
        assert_eq!(out.partition, brute(&g, 2));
    }

    #[test]
    fn banana5_noisy_oracle_within_budget() {
        let g = banana(5);
        let eps0 = crate::mceliece::compute_theta(5, 4, 2).unwrap().epsilon0;
        for seed in 0..25 {
            let mut cfg = PipelineConfig::new(2);
            cfg.epsilon = 0.99 * eps0;
            cfg.seed = seed;
            let out = run_partition(&g, &cfg).unwrap();
            assert_eq!(out.route, Route::CodesPipeline);
            assert_eq!(out.partition, brute(&g, 2), "seed {seed}");
        }
    }

    #[test]
    fn triangle_falls_back() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let cfg = PipelineConfig::new(2);
        let out = run_partition(&g, &cfg).unwrap();
        assert_eq!(out.route, Route::BruteForceFallback);
        assert_eq!(out.partition, brute(&g, 2));
        let mut strict = PipelineConfig::new(2);
        strict.allow_fallback = false;
        assert!(matches!(
            run_partition(&g, &strict),
            Err(PipelineError::NotAMember { .. })
        ));
    }

    #[test]
    fn decomposed_direct_sum_pipeline() {
        let mut edges = vec![(0usize, 1usize); 3];
        edges.extend(vec![(2, 3); 5]);
        let g = Graph::new(4, edges).unwrap();
        let mut cfg = PipelineConfig::new(2);
        cfg.exact_oracle = true;
        let out = run_partition(&g, &cfg).unwrap();
        assert_eq!(out.route, Route::CodesPipeline);
        assert_eq!(out.stages.len(), 2);
        assert_eq!(out.partition, brute(&g, 2));
    }

    #[test]
    fn two_cycle_gf3_pipeline() {
        let g = banana(2);
        let mut cfg = PipelineConfig::new(3);
        cfg.epsilon = 0.1;
        cfg.exact_oracle = true;
        let out = run_partition(&g, &cfg).unwrap();
        assert_eq!(out.route, Route::CodesPipeline);
        assert_eq!(out.partition, brute(&g, 3));
    }
}
