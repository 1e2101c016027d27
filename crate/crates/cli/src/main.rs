//! `iccc`: exact q-state Potts partition functions over graphs whose dual
//! cocycle codes are irreducible cyclic, with brute-force oracles for
//! cross-checking every stage.
//!
//! Exit codes: 0 success, 2 membership rejection, 1 error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use iccc_core::codes::CyclicCodeParams;
use iccc_core::ff::{ExtensionField, PrimeField};
use iccc_core::gauss::{gauss_phase_oracle, gauss_sum_exact, CharacterSpec};
use iccc_core::graphs::Graph;
use iccc_core::mceliece::{coset_count_formula, cyclotomic_cosets};
use iccc_core::membership::{generate_instances, membership_test, InstanceFamily};
use iccc_core::pipeline::{run_partition, PipelineConfig, Route};
use iccc_core::potts::{brute_force_z, PottsInstance};

mod output;

use output::{json_out, Doc};

#[derive(Parser)]
#[command(
    name = "iccc",
    about = "Exact Potts partition functions via cocycle codes and Gauss sums",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Graph file: `vertices N` then one `u v` edge per line, '#' comments.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// Number of spin states (a prime).
    #[arg(long, global = true, default_value_t = 2)]
    q: u64,
    /// Phase-error budget for the Gauss-sum oracle.
    #[arg(long, global = true, default_value_t = 1e-3)]
    epsilon: f64,
    /// Inverse temperatures to evaluate at, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_value = "0,1")]
    beta: Vec<f64>,
    /// Coupling constant; positive = ferromagnetic.
    #[arg(long = "J", global = true, default_value_t = 1.0)]
    coupling: f64,
    /// Seed for every stochastic choice (oracle noise and failures).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for enumeration sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Cap: fields up to q^k <= 2^bits for discrete logs and Gauss sums.
    #[arg(long, global = true, default_value_t = iccc_core::DEFAULT_FIELD_BITS)]
    max_field_bits: u32,
    /// Cap: brute-force sweeps up to q^|V| <= 2^bits configurations.
    #[arg(long, global = true, default_value_t = iccc_core::DEFAULT_CONFIG_BITS)]
    max_config_bits: u32,
    /// Output format.
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "text"])]
    format: String,
    /// Fail (exit 2) instead of falling back to brute force on rejection.
    #[arg(long, global = true)]
    no_fallback: bool,
    /// Model oracle failures: with probability delta a phase is garbage.
    #[arg(long, global = true)]
    inject_failures: bool,
    /// Use exact Gauss phases instead of the noisy oracle.
    #[arg(long, global = true)]
    exact_oracle: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Test a graph for ICCC membership.
    Membership,
    /// Full pipeline: membership, Gauss phases, weights, MacWilliams, Z.
    Partition,
    /// The per-class weight table of the dual code of a member graph.
    Weights,
    /// One Gauss sum G(chi^a, beta) over GF(q^k), exact and oracle-noisy.
    GaussSum {
        /// Extension degree k of the field GF(q^k).
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Order d of the character (must divide q^k - 1).
        #[arg(long, default_value_t = 2)]
        d: u64,
        /// Character index a in [1, d).
        #[arg(long, default_value_t = 1)]
        a: u64,
        /// Additive parameter beta as an element index in [0, q^k).
        #[arg(long, default_value_t = 1)]
        beta_param: u128,
    },
    /// Run the instance-generator loop, one JSON row per acceptance.
    Generate {
        #[arg(long, default_value_t = 16)]
        limit: usize,
        #[arg(long)]
        m_max: Option<u32>,
        #[arg(long, default_value_t = 16)]
        j_max: u64,
    },
    /// Brute-force the partition function by spin enumeration.
    Bruteforce,
    /// q-cyclotomic cosets of {0..N-1}.
    Cosets {
        /// The modulus N.
        #[arg(long = "n")]
        n_mod: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load_graph(common: &Common) -> Result<Graph, String> {
    let path = common.graph.as_ref().ok_or("--graph is required for this command")?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Graph::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub(crate) fn config_doc(common: &Common) -> Doc {
    Doc::new()
        .field("q", common.q)
        .field("epsilon", output::real(common.epsilon))
        .field("seed", common.seed)
        .field("threads", common.threads as u64)
        .field("max_field_bits", u64::from(common.max_field_bits))
        .field("max_config_bits", u64::from(common.max_config_bits))
        .field("inject_failures", common.inject_failures)
        .field("exact_oracle", common.exact_oracle)
}

pub(crate) fn graph_doc(g: &Graph) -> Doc {
    Doc::new()
        .field("vertices", g.vertex_count() as u64)
        .field("edges", output::edge_list(g.edges()))
        .field("components", g.component_count() as u64)
}

fn pipeline_config(common: &Common) -> PipelineConfig {
    let mut cfg = PipelineConfig::new(common.q);
    cfg.epsilon = common.epsilon;
    cfg.seed = common.seed;
    cfg.inject_failures = common.inject_failures;
    cfg.exact_oracle = common.exact_oracle;
    cfg.allow_fallback = !common.no_fallback;
    cfg.max_field_bits = common.max_field_bits;
    cfg.max_config_bits = common.max_config_bits;
    cfg.threads = common.threads;
    cfg
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    let common = &cli.common;
    if common.coupling == 0.0 {
        return Err("coupling --J must be nonzero".into());
    }
    if let Some(b) = common.beta.iter().find(|&&b| b < 0.0) {
        return Err(format!("inverse temperature must be non-negative, got {b}"));
    }
    match &cli.command {
        Command::Membership => {
            let g = load_graph(common)?;
            let verdict = membership_test(&g, common.q, common.epsilon, common.max_field_bits)
                .map_err(|e| e.to_string())?;
            let doc = Doc::new()
                .field("command", "membership")
                .field("config", config_doc(common))
                .field("graph", graph_doc(&g))
                .field("verdict", output::verdict_doc(&verdict));
            if common.format == "json" {
                json_out(&doc);
            } else {
                println!(
                    "{} (reason: {}, dual code [{}, {}])",
                    if verdict.accepted { "ACCEPT" } else { "REJECT" },
                    verdict.reason.as_str(),
                    verdict.n,
                    verdict.k
                );
            }
            Ok(if verdict.accepted { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Partition => {
            let g = load_graph(common)?;
            let cfg = pipeline_config(common);
            let out = match run_partition(&g, &cfg) {
                Ok(out) => out,
                Err(iccc_core::pipeline::PipelineError::NotAMember { .. }) => {
                    // fallback disabled: surface the rejection as exit 2
                    let verdict =
                        membership_test(&g, common.q, common.epsilon, common.max_field_bits)
                            .map_err(|e| e.to_string())?;
                    let doc = Doc::new()
                        .field("command", "partition")
                        .field("config", config_doc(common))
                        .field("graph", graph_doc(&g))
                        .field("verdict", output::verdict_doc(&verdict));
                    if common.format == "json" {
                        json_out(&doc);
                    } else {
                        println!("REJECT ({}); fallback disabled", verdict.reason.as_str());
                    }
                    return Ok(ExitCode::from(2));
                }
                Err(e) => return Err(e.to_string()),
            };
            if out.route == Route::BruteForceFallback {
                eprintln!(
                    "warning: graph rejected ({}); falling back to brute force",
                    out.verdict.reason.as_str()
                );
            }
            let doc = output::partition_doc(common, &g, &out, &common.beta, common.coupling);
            if common.format == "json" {
                json_out(&doc);
            } else {
                println!("route: {}", output::route_str(out.route));
                println!("Z(y) = {}", out.partition);
                for &b in &common.beta {
                    println!(
                        "Z(beta={b}, J={}) = {:.17e}",
                        common.coupling,
                        out.partition.evaluate(b, common.coupling)
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Weights => {
            let g = load_graph(common)?;
            let mut cfg = pipeline_config(common);
            cfg.allow_fallback = false;
            match run_partition(&g, &cfg) {
                Ok(out) => {
                    let doc = Doc::new()
                        .field("command", "weights")
                        .field("config", config_doc(common))
                        .field("graph", graph_doc(&g))
                        .field("verdict", output::verdict_doc(&out.verdict))
                        .field("blocks", output::stages_doc(&out));
                    if common.format == "json" {
                        json_out(&doc);
                    } else {
                        for (i, s) in out.stages.iter().enumerate() {
                            println!("block {i}:");
                            for e in &s.table.entries {
                                println!(
                                    "  class {:>6}  raw {:>12.6}  weight {:>6}  multiplicity {}",
                                    e.representative, e.raw, e.rounded, e.multiplicity
                                );
                            }
                        }
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(iccc_core::pipeline::PipelineError::NotAMember { reason }) => {
                    if common.format == "text" {
                        println!("REJECT ({reason})");
                    } else {
                        json_out(
                            &Doc::new()
                                .field("command", "weights")
                                .field("accepted", false)
                                .field("reason", reason),
                        );
                    }
                    Ok(ExitCode::from(2))
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::GaussSum { k, d, a, beta_param } => {
            let field = ExtensionField::new(common.q, *k).map_err(|e| e.to_string())?;
            if *beta_param >= field.size() {
                return Err(format!("beta index {beta_param} out of range"));
            }
            let beta = field.from_index(*beta_param);
            let spec = CharacterSpec::new(field.clone(), *d, *a, beta)
                .map_err(|e| e.to_string())?;
            let exact =
                gauss_sum_exact(&spec, common.max_field_bits).map_err(|e| e.to_string())?;
            let noisy = gauss_phase_oracle(
                &spec,
                common.epsilon,
                common.seed,
                common.inject_failures,
                common.max_field_bits,
            )
            .map_err(|e| e.to_string())?;
            let doc = Doc::new()
                .field("command", "gauss-sum")
                .field("config", config_doc(common))
                .field("field", output::field_doc(&field))
                .field("d", *d)
                .field("a", *a)
                .field("beta", *beta_param as u64)
                .field("magnitude", output::real(exact.magnitude))
                .field("phase", output::real(exact.phase))
                .field("oracle", output::phase_doc(&noisy));
            if common.format == "json" {
                json_out(&doc);
            } else {
                println!(
                    "G = {:.17e} * exp(i * {:.17e}); oracle phase {:.17e} (eps {})",
                    exact.magnitude, exact.phase, noisy.noisy_phase, common.epsilon
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Generate { limit, m_max, j_max } => {
            let family = InstanceFamily {
                q: common.q,
                s: 1.0,
                alpha: 1.0,
                epsilon: common.epsilon,
            };
            let default_m = (common.max_field_bits as f64 / (common.q as f64).log2()) as u32;
            let instances = generate_instances(
                &family,
                *limit,
                m_max.unwrap_or(default_m.max(1)),
                *j_max,
                common.max_field_bits,
            );
            for inst in &instances {
                if common.format == "json" {
                    json_out(
                        &Doc::new()
                            .field("n", inst.n)
                            .field("k", u64::from(inst.k))
                            .field("m", u64::from(inst.m))
                            .field("j", inst.j)
                            .field("N", inst.big_n)
                            .field("theta", u64::from(inst.theta))
                            .field("epsilon0", output::real(inst.epsilon0)),
                    );
                } else {
                    println!(
                        "n={} k={} N={} theta={} eps0={:.6e} (m={}, j={})",
                        inst.n, inst.k, inst.big_n, inst.theta, inst.epsilon0, inst.m, inst.j
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bruteforce => {
            let g = load_graph(common)?;
            let prime = PrimeField::new(common.q).map_err(|e| e.to_string())?;
            let inst = PottsInstance::new(g.clone(), prime, common.coupling, 0.0);
            let z = brute_force_z(&inst, common.max_config_bits, common.threads)
                .map_err(|e| e.to_string())?;
            let doc = Doc::new()
                .field("command", "bruteforce")
                .field("config", config_doc(common))
                .field("graph", graph_doc(&g))
                .field(
                    "partition_function",
                    output::partition_fn_doc(&z, &common.beta, common.coupling),
                );
            if common.format == "json" {
                json_out(&doc);
            } else {
                println!("Z(y) = {z}");
                for &b in &common.beta {
                    println!(
                        "Z(beta={b}, J={}) = {:.17e}",
                        common.coupling,
                        z.evaluate(b, common.coupling)
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Cosets { n_mod } => {
            let p = cyclotomic_cosets(*n_mod, common.q).map_err(|e| e.to_string())?;
            let formula = coset_count_formula(*n_mod, common.q).map_err(|e| e.to_string())?;
            let doc = Doc::new()
                .field("command", "cosets")
                .field("N", *n_mod)
                .field("q", common.q)
                .field("count", p.count() as u64)
                .field("count_formula", formula)
                .field("cosets", output::cosets_doc(&p));
            if common.format == "json" {
                json_out(&doc);
            } else {
                println!("{} cosets of {{0..{}}} under x -> {}x:", p.count(), n_mod - 1, common.q);
                for c in &p.cosets {
                    println!("  {c:?}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

// keep the type exported for the output module
pub(crate) use Common as CommonArgs;

pub(crate) fn dual_params_doc(params: &CyclicCodeParams) -> Doc {
    Doc::new()
        .field("n", params.n())
        .field("k", params.k() as u64)
        .field("N", params.big_n())
        .field("d", params.d())
        .field("field", output::field_doc(params.field()))
}
