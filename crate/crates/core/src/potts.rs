//! Potts partition functions as exact integer Laurent polynomials in
//! y = e^(-beta*J), assembled from weight enumerators or enumerated by
//! brute force, with a deletion-contraction Tutte cross-check.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::codes::{macwilliams, CodesError, WeightSpectrum};
use crate::ff::PrimeField;
use crate::graphs::Graph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PottsError {
    #[error("enumeration of {size} configurations exceeds the cap of 2^{cap_bits}")]
    TooLarge { size: u128, cap_bits: u32 },
    #[error("deletion-contraction is capped at {max} edges, graph has {got}")]
    TooManyEdges { max: usize, got: usize },
    #[error(transparent)]
    Codes(#[from] CodesError),
}

/// A Potts model instance: a multigraph, q spin states, a uniform coupling
/// J (sign selects ferro/anti-ferromagnetic), and an inverse temperature.
#[derive(Clone, Debug)]
pub struct PottsInstance {
    pub graph: Graph,
    pub q: PrimeField,
    pub coupling: f64,
    pub beta: f64,
}

impl PottsInstance {
    pub fn new(graph: Graph, q: PrimeField, coupling: f64, beta: f64) -> Self {
        assert!(beta >= 0.0, "inverse temperature must be non-negative");
        assert!(coupling != 0.0, "coupling must be nonzero");
        PottsInstance { graph, q, coupling, beta }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PottsMeta {
    pub q: u64,
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
}

/// Z(y) = sum over configurations of y^(-|U(sigma)|), stored exactly:
/// integer coefficients on integer (non-positive) powers of y.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionFunction {
    /// exponent -> coefficient; Z(y) = sum of c * y^e.
    pub terms: BTreeMap<i64, BigUint>,
    pub meta: PottsMeta,
}

impl PartitionFunction {
    /// Total configuration count, always q^|V|.
    pub fn coefficient_sum(&self) -> BigUint {
        self.terms.values().sum()
    }

    /// Z at y = e^(-beta*J); strictly positive for all real beta, J.
    pub fn evaluate(&self, beta: f64, coupling: f64) -> f64 {
        let y = (-beta * coupling).exp();
        self.terms
            .iter()
            .map(|(&e, c)| c.to_f64().unwrap_or(f64::INFINITY) * y.powi(e as i32))
            .sum()
    }

    /// Z expressed in v = e^(beta*J) - 1 via y = 1/(v+1).
    pub fn evaluate_at_v(&self, v: f64) -> f64 {
        let y = 1.0 / (v + 1.0);
        self.terms
            .iter()
            .map(|(&e, c)| c.to_f64().unwrap_or(f64::INFINITY) * y.powi(e as i32))
            .sum()
    }
}

impl fmt::Display for PartitionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        // highest-order ground-state term first
        for (&e, c) in self.terms.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*y")?,
                _ => write!(f, "{c}*y^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Enumerates all q^|V| spin configurations, counting monochromatic edges.
/// The sweep is a base-q odometer with incremental edge bookkeeping;
/// `threads` > 1 splits the range deterministically.
pub fn brute_force_z(
    inst: &PottsInstance,
    cap_bits: u32,
    threads: usize,
) -> Result<PartitionFunction, PottsError> {
    let g = &inst.graph;
    let q = inst.q.q();
    let vcount = g.vertex_count();
    let size = (q as u128).pow(vcount as u32);
    if size > 1u128 << cap_bits {
        return Err(PottsError::TooLarge { size, cap_bits });
    }

    // adjacency: vertex -> (neighbor, edge index), one entry per parallel edge
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); vcount];
    for &(u, v) in g.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }

    let threads = threads.max(1).min(size.max(1) as usize);
    let mut bounds: Vec<u128> = (0..=threads as u128)
        .map(|t| size * t / threads as u128)
        .collect();
    bounds.dedup();
    let counts = if bounds.len() <= 2 {
        z_range(g, &adj, q, 0, size)
    } else {
        let mut partials = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = bounds
                .windows(2)
                .map(|w| {
                    let (start, end) = (w[0], w[1]);
                    let adj = &adj;
                    scope.spawn(move || z_range(g, adj, q, start, end))
                })
                .collect();
            for h in handles {
                partials.push(h.join().expect("Z worker panicked"));
            }
        });
        let mut acc = vec![0u64; g.edge_count() + 1];
        for p in partials {
            for (a, b) in acc.iter_mut().zip(p) {
                *a += b;
            }
        }
        acc
    };

    let mut terms = BTreeMap::new();
    for (u, &c) in counts.iter().enumerate() {
        if c != 0 {
            terms.insert(-(u as i64), BigUint::from(c));
        }
    }
    Ok(PartitionFunction {
        terms,
        meta: PottsMeta {
            q,
            vertices: vcount,
            edges: g.edge_count(),
            components: g.component_count(),
        },
    })
}

fn z_range(g: &Graph, adj: &[Vec<usize>], q: u64, start: u128, end: u128) -> Vec<u64> {
    let vcount = g.vertex_count();
    let mut counts = vec![0u64; g.edge_count() + 1];
    if start >= end {
        return counts;
    }
    let mut spins = vec![0u64; vcount.max(1)];
    let mut m = start;
    for s in spins.iter_mut() {
        *s = (m % q as u128) as u64;
        m /= q as u128;
    }
    let mut mono: usize = g
        .edges()
        .iter()
        .filter(|&&(u, v)| spins[u] == spins[v])
        .count();

    let mut idx = start;
    loop {
        counts[mono] += 1;
        idx += 1;
        if idx == end {
            break;
        }
        let mut v = 0;
        loop {
            let old = spins[v];
            let new = (old + 1) % q;
            spins[v] = new;
            for &u in &adj[v] {
                if spins[u] == old {
                    mono -= 1;
                } else if spins[u] == new {
                    mono += 1;
                }
            }
            if new != 0 {
                break;
            }
            v += 1;
        }
    }
    counts
}

/// Z from the cocycle-code weight spectrum: Z(y) = q^c * sum of A_i y^(i-n).
pub fn z_from_spectrum(
    spectrum: &WeightSpectrum,
    n: usize,
    components: usize,
    q: u64,
) -> PartitionFunction {
    let qc = BigUint::from(q).pow(components as u32);
    let mut terms = BTreeMap::new();
    for (i, a_i) in spectrum.iter() {
        let c = &qc * a_i;
        if !c.is_zero() {
            terms.insert(i as i64 - n as i64, c);
        }
    }
    // |V| is implied: q^c * sum A_i = q^|V|
    let total: BigUint = terms.values().sum();
    let vertices = log_q_exact(&total, q).expect("spectrum total must be a power of q");
    PartitionFunction {
        terms,
        meta: PottsMeta { q, vertices, edges: n, components },
    }
}

fn log_q_exact(x: &BigUint, q: u64) -> Option<usize> {
    let mut v = x.clone();
    let q = BigUint::from(q);
    let mut e = 0;
    while v > BigUint::from(1u32) {
        let (quot, rem) = num_integer::Integer::div_rem(&v, &q);
        if !rem.is_zero() {
            return None;
        }
        v = quot;
        e += 1;
    }
    Some(e)
}

/// Z via the dual route: the [n, k] dual (irreducible cyclic) spectrum is
/// MacWilliams-transformed back to the cocycle code's spectrum, then
/// assembled as usual.
pub fn z_via_dual_pipeline(
    dual_spectrum: &WeightSpectrum,
    n: usize,
    k: usize,
    components: usize,
    q: u64,
) -> Result<PartitionFunction, PottsError> {
    let primal = macwilliams(dual_spectrum, n, k, q)?;
    Ok(z_from_spectrum(&primal, n, components, q))
}

/// Direct-sum assembly: enumerators multiply, lengths and component counts
/// add.
pub fn direct_sum_z(parts: &[(WeightSpectrum, usize, usize)], q: u64) -> PartitionFunction {
    let mut spectrum = WeightSpectrum::from_counts_u64(&[1]);
    let mut n = 0;
    let mut components = 0;
    for (s, part_n, part_c) in parts {
        spectrum = spectrum.convolve(s);
        n += part_n;
        components += part_c;
    }
    z_from_spectrum(&spectrum, n, components, q)
}

/// Potts value by deletion-contraction of the Tutte polynomial with the
/// standard Fortuin-Kasteleyn prefactor: Z = q^c * v^(|V|-c) * T((q+v)/v, v+1).
/// (A q^|V| prefactor appears in some statements of the identity; it does
/// not match enumeration, which pins this form.) Exponential in |E|;
/// memoized on the exact multigraph.
pub fn tutte_oracle(g: &Graph, q: u64, v: f64, max_edges: usize) -> Result<f64, PottsError> {
    if g.edge_count() > max_edges {
        return Err(PottsError::TooManyEdges { max: max_edges, got: g.edge_count() });
    }
    if v == 0.0 {
        // only the empty-subgraph term survives
        return Ok((q as f64).powi(g.vertex_count() as i32));
    }
    let x = (q as f64 + v) / v;
    let y = v + 1.0;
    let mut memo = HashMap::new();
    let edges: Vec<(usize, usize)> = g.edges().to_vec();
    let t = tutte_eval(edges, x, y, &mut memo);
    let c = g.component_count();
    let rank = g.vertex_count() - c;
    Ok((q as f64).powi(c as i32) * v.powi(rank as i32) * t)
}

fn tutte_eval(
    mut edges: Vec<(usize, usize)>,
    x: f64,
    y: f64,
    memo: &mut HashMap<Vec<(usize, usize)>, f64>,
) -> f64 {
    // loops contribute a factor y each
    let mut loop_factor = 1.0;
    edges.retain(|&(u, v)| {
        if u == v {
            loop_factor *= y;
            false
        } else {
            true
        }
    });
    if edges.is_empty() {
        return loop_factor;
    }
    edges.sort_unstable();
    if let Some(&t) = memo.get(&edges) {
        return loop_factor * t;
    }
    let e = edges[0];
    let rest: Vec<(usize, usize)> = edges[1..].to_vec();
    let t = if is_bridge(&rest, e) {
        x * tutte_eval(contract(&rest, e), x, y, memo)
    } else {
        tutte_eval(rest.clone(), x, y, memo) + tutte_eval(contract(&rest, e), x, y, memo)
    };
    memo.insert(edges, t);
    loop_factor * t
}

/// True when u and v are disconnected in `rest` (the edge set without e).
fn is_bridge(rest: &[(usize, usize)], (u, v): (usize, usize)) -> bool {
    let mut stack = vec![u];
    let mut seen = HashMap::new();
    seen.insert(u, ());
    while let Some(w) = stack.pop() {
        if w == v {
            return false;
        }
        for &(a, b) in rest {
            let next = if a == w {
                b
            } else if b == w {
                a
            } else {
                continue;
            };
            if seen.insert(next, ()).is_none() {
                stack.push(next);
            }
        }
    }
    true
}

/// Merges v into u; parallel copies of the contracted edge become loops.
fn contract(rest: &[(usize, usize)], (u, v): (usize, usize)) -> Vec<(usize, usize)> {
    rest.iter()
        .map(|&(a, b)| {
            let a = if a == v { u } else { a };
            let b = if b == v { u } else { b };
            (a.min(b), a.max(b))
        })
        .collect()
}
