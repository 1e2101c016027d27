//! ICCC membership testing, the instance-generator loop, direct-sum
//! composition, block decomposition, and the sparse-graph edge-count solver.
//!
//! A graph is a member when the dual of its cocycle code is (equivalent to)
//! an irreducible cyclic [n, k] code and the requested phase error fits the
//! budget eps0 = q^(theta-1)/(4 sqrt(q^k)). The test follows five steps:
//! theta, dual generator H = [-X^T | I_k], the ord/epsilon gate, the
//! discrete-log pattern of H's columns, and — when that fails — a
//! block-diagonal decomposition retried per block.

use thiserror::Error;

use crate::codes::{
    log_pattern_matches, multiplicative_order, CodesError, CyclicCodeParams, LinearCode,
};
use crate::ff::{ExtensionField, FfError};
use crate::graphs::Graph;
use crate::mat::Matrix;
use crate::mceliece::{compute_theta, McelieceError, ThetaParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MembershipError {
    #[error("field GF({q}^{k}) exceeds the discrete-log cap of 2^{cap_bits}")]
    TooLarge { q: u64, k: u32, cap_bits: u32 },
    #[error(transparent)]
    Field(#[from] FfError),
    #[error(transparent)]
    Mceliece(#[from] McelieceError),
    #[error("fixed-point iteration did not converge within {0} steps")]
    NoConvergence(usize),
}

/// Why a graph was accepted or rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictReason {
    /// The whole dual code passed the log-pattern test.
    Accept,
    /// The dual decomposed into blocks that each passed.
    DecomposedAccept,
    /// A generator column was zero: no irreducible cyclic code has one.
    NotCyclicDual,
    /// k is not the multiplicative order of q mod n.
    OrdMismatch,
    /// The requested epsilon exceeds eps0.
    EpsilonTooLarge,
    /// Column logs are not a residue class mod N.
    LogPatternFail,
    /// Decomposition produced blocks, but some block failed.
    Reject,
}

impl VerdictReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictReason::Accept => "Accept",
            VerdictReason::DecomposedAccept => "DecomposedAccept",
            VerdictReason::NotCyclicDual => "NotCyclicDual",
            VerdictReason::OrdMismatch => "OrdMismatch",
            VerdictReason::EpsilonTooLarge => "EpsilonTooLarge",
            VerdictReason::LogPatternFail => "LogPatternFail",
            VerdictReason::Reject => "Reject",
        }
    }
}

/// How a block was recognized as irreducible cyclic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AcceptanceRoute {
    /// Column logs form a residue class mod N in the polynomial basis.
    LogPattern,
    /// The row space equals the canonical trace code outright. This covers
    /// duals in standard form [-X^T | I], whose identity block can never
    /// show the log pattern for N > 1 even when the code is the right one.
    TraceCodeEquality,
}

/// One accepted irreducible-cyclic block of the dual generator.
#[derive(Clone)]
pub struct AcceptedBlock {
    /// Column indices (edge coordinates) of this block in the full code.
    pub cols: Vec<usize>,
    pub params: CyclicCodeParams,
    pub theta: ThetaParams,
    /// Discrete logs of the block's generator columns.
    pub log_list: Vec<u128>,
    pub route: AcceptanceRoute,
}

#[derive(Clone)]
pub struct MembershipVerdict {
    pub accepted: bool,
    pub reason: VerdictReason,
    /// [n, k] of the dual code and the component count of the graph.
    pub n: usize,
    pub k: usize,
    pub components: usize,
    /// The dual generator H = [-X^T | I_k] in edge coordinates.
    pub dual_generator: Matrix,
    /// Non-empty exactly when accepted; one entry per block (a single
    /// entry covering all columns for a plain Accept).
    pub blocks: Vec<AcceptedBlock>,
}

impl MembershipVerdict {
    /// Flattened discrete logs over all accepted blocks.
    pub fn log_list(&self) -> Vec<u128> {
        self.blocks.iter().flat_map(|b| b.log_list.iter().copied()).collect()
    }
}

/// Tests a graph for ICCC membership at error budget `epsilon`.
pub fn membership_test(
    g: &Graph,
    q: u64,
    epsilon: f64,
    field_cap_bits: u32,
) -> Result<MembershipVerdict, MembershipError> {
    let prime = crate::ff::PrimeField::new(q)?;
    let cmm = g.reduce_to_cmm(prime);
    let rank = cmm.rank();
    let n = g.edge_count();
    let k = n - rank;

    // H = [-X^T | I_k] in the CMM's permuted coordinates, then mapped back
    // to edge order so verdicts speak the graph's language.
    let h_permuted = if k == 0 {
        Matrix::zeros(q, 0, n)
    } else {
        let rows: Vec<usize> = (0..rank).collect();
        let x_cols: Vec<usize> = (rank..n).collect();
        let x = cmm.matrix.submatrix(&rows, &x_cols);
        x.transpose().neg().hconcat(&Matrix::identity(q, k))
    };
    let mut inv = vec![0; n];
    for (t, &orig) in cmm.column_permutation.iter().enumerate() {
        inv[orig] = t;
    }
    let h = h_permuted.permute_cols(&inv);

    membership_test_code(&h, q, epsilon, field_cap_bits).map(|mut v| {
        v.components = cmm.components;
        v
    })
}

/// Code-level entry: `h` is the k x n generator of the dual code. Used
/// directly by fixtures whose matroid is not graphic.
pub fn membership_test_code(
    h: &Matrix,
    q: u64,
    epsilon: f64,
    field_cap_bits: u32,
) -> Result<MembershipVerdict, MembershipError> {
    let cols: Vec<usize> = (0..h.cols()).collect();
    let outcome = test_block(h, &cols, q, epsilon, field_cap_bits)?;
    let (accepted, reason, blocks) = match outcome {
        BlockOutcome::Accepted(blocks) => {
            let reason = if blocks.len() == 1 && blocks[0].cols.len() == h.cols() {
                VerdictReason::Accept
            } else {
                VerdictReason::DecomposedAccept
            };
            (true, reason, blocks)
        }
        BlockOutcome::Failed(reason) => (false, reason, Vec::new()),
    };
    Ok(MembershipVerdict {
        accepted,
        reason,
        n: h.cols(),
        k: h.rows(),
        components: 0,
        dual_generator: h.clone(),
        blocks,
    })
}

enum BlockOutcome {
    Accepted(Vec<AcceptedBlock>),
    Failed(VerdictReason),
}

fn test_block(
    h: &Matrix,
    col_map: &[usize],
    q: u64,
    epsilon: f64,
    field_cap_bits: u32,
) -> Result<BlockOutcome, MembershipError> {
    match test_block_directly(h, col_map, q, epsilon, field_cap_bits)? {
        BlockOutcome::Accepted(blocks) => Ok(BlockOutcome::Accepted(blocks)),
        BlockOutcome::Failed(reason) => {
            let blocks = block_decompose(h);
            if blocks.len() <= 1 {
                return Ok(BlockOutcome::Failed(reason));
            }
            let mut accepted = Vec::new();
            let mut failures = Vec::new();
            for b in &blocks {
                let sub_map: Vec<usize> = b.cols.iter().map(|&c| col_map[c]).collect();
                match test_block(&b.matrix, &sub_map, q, epsilon, field_cap_bits)? {
                    BlockOutcome::Accepted(mut bs) => accepted.append(&mut bs),
                    BlockOutcome::Failed(r) => failures.push(r),
                }
            }
            if failures.is_empty() {
                Ok(BlockOutcome::Accepted(accepted))
            } else if failures.iter().all(|r| *r == failures[0]) {
                Ok(BlockOutcome::Failed(failures[0]))
            } else {
                Ok(BlockOutcome::Failed(VerdictReason::Reject))
            }
        }
    }
}

fn test_block_directly(
    h: &Matrix,
    col_map: &[usize],
    q: u64,
    epsilon: f64,
    field_cap_bits: u32,
) -> Result<BlockOutcome, MembershipError> {
    let n = h.cols() as u64;
    let k = h.rows() as u64;
    if k == 0 || n == 0 {
        return Ok(BlockOutcome::Failed(VerdictReason::OrdMismatch));
    }
    // step 3a: k = ord_q(n)
    if multiplicative_order(q, n) != Some(k) {
        return Ok(BlockOutcome::Failed(VerdictReason::OrdMismatch));
    }
    // step 1: theta, and step 3b: epsilon <= eps0
    let theta = compute_theta(n, k as u32, q)?;
    if epsilon > theta.epsilon0 {
        return Ok(BlockOutcome::Failed(VerdictReason::EpsilonTooLarge));
    }
    // step 4: column discrete logs against the pattern (q >= 2, so
    // k > cap_bits already means q^k > 2^cap_bits)
    let over_cap = k > field_cap_bits as u64
        || (q as u128)
            .checked_pow(k as u32)
            .is_none_or(|size| size > 1u128 << field_cap_bits);
    if over_cap {
        return Err(MembershipError::TooLarge { q, k: k as u32, cap_bits: field_cap_bits });
    }
    let field = ExtensionField::new(q, k as usize)?;
    let code = match LinearCode::new(h.clone()) {
        Ok(c) => c,
        Err(_) => return Ok(BlockOutcome::Failed(VerdictReason::Reject)),
    };
    let logs = match crate::codes::column_logs(&code, &field) {
        Ok(l) => l,
        Err(CodesError::ZeroColumn) => {
            return Ok(BlockOutcome::Failed(VerdictReason::NotCyclicDual))
        }
        Err(_) => return Ok(BlockOutcome::Failed(VerdictReason::Reject)),
    };
    let big_n = field.group_order() / n as u128;
    let params = CyclicCodeParams::new(n, field).expect("checked ord and divisibility");
    let route = if log_pattern_matches(&logs, big_n) {
        AcceptanceRoute::LogPattern
    } else if row_space_is_trace_code(h, &params) {
        AcceptanceRoute::TraceCodeEquality
    } else {
        return Ok(BlockOutcome::Failed(VerdictReason::LogPatternFail));
    };
    Ok(BlockOutcome::Accepted(vec![AcceptedBlock {
        cols: col_map.to_vec(),
        params,
        theta,
        log_list: logs,
        route,
    }]))
}

/// Does the row space of `h` equal the canonical irreducible cyclic code
/// {(Tr(x), Tr(x g^N), ..., Tr(x g^(n-1)N))}? Dimensions already match, so
/// containment of the trace code's basis words suffices.
fn row_space_is_trace_code(h: &Matrix, params: &CyclicCodeParams) -> bool {
    let field = params.field();
    let space = crate::mat::RowSpace::new(h);
    for i in 0..field.degree() {
        let basis_elt = field.from_index((field.q() as u128).pow(i as u32));
        let word = crate::codes::trace_codeword(&basis_elt, params);
        if !space.contains(&word) {
            return false;
        }
    }
    true
}

/// A block of a permutation-equivalent block-diagonal decomposition.
#[derive(Clone, Debug)]
pub struct Block {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub matrix: Matrix,
}

/// Row-reduces, then splits the row-column incidence of nonzero entries
/// into connected components. A single returned block means the matrix does
/// not decompose. Zero columns come back as column-only blocks with no rows.
pub fn block_decompose(m: &Matrix) -> Vec<Block> {
    let rref = m.rref().matrix;
    let rows = rref.rows();
    let cols = rref.cols();
    if cols == 0 {
        return vec![Block { rows: (0..rows).collect(), cols: vec![], matrix: rref }];
    }
    // union-find over rows (0..rows) and columns (rows..rows+cols)
    let mut parent: Vec<usize> = (0..rows + cols).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for i in 0..rows {
        for j in 0..cols {
            if rref[(i, j)] != 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, rows + j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> =
        std::collections::BTreeMap::new();
    for j in 0..cols {
        let root = find(&mut parent, rows + j);
        groups.entry(root).or_default().1.push(j);
    }
    for i in 0..rows {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().0.push(i);
    }
    let mut blocks: Vec<Block> = groups
        .into_values()
        .filter(|(r, c)| !c.is_empty() || !r.is_empty())
        .map(|(r, c)| {
            let matrix = rref.submatrix(&r, &c);
            Block { rows: r, cols: c, matrix }
        })
        .collect();
    blocks.sort_by_key(|b| b.cols.first().copied().unwrap_or(usize::MAX));
    blocks
}

/// Block-diagonal direct sum of two codes over the same base field.
pub fn compose_direct_sum(a: &LinearCode, b: &LinearCode) -> Result<LinearCode, CodesError> {
    if a.q() != b.q() {
        return Err(CodesError::FieldMismatch);
    }
    LinearCode::new(a.generator().direct_sum(b.generator()))
}

/// A family of instances: fixed q, exponent s, scaling alpha, and the
/// family-wide error budget epsilon < 1.
#[derive(Clone, Copy, Debug)]
pub struct InstanceFamily {
    pub q: u64,
    pub s: f64,
    pub alpha: f64,
    pub epsilon: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratedInstance {
    pub n: u64,
    pub k: u32,
    pub m: u32,
    pub j: u64,
    pub big_n: u64,
    pub theta: u32,
    pub epsilon0: f64,
}

/// The generator loop: for m = 1, 2, ... and j = 1, 2, ... take
/// n = j(q^m - 1), k = ord_q(n) (skipping j with gcd(q, n) != 1), and
/// accept when q^(theta - 1 - k/2) >= epsilon. Stops after `limit`
/// acceptances or at the m ceiling. Instances whose field would exceed
/// `field_cap_bits` are skipped, keeping everything desk-scale.
pub fn generate_instances(
    family: &InstanceFamily,
    limit: usize,
    m_max: u32,
    j_max: u64,
    field_cap_bits: u32,
) -> Vec<GeneratedInstance> {
    let q = family.q;
    let mut out = Vec::new();
    'outer: for m in 1..=m_max {
        let base = (q as u128).pow(m) - 1;
        for j in 1..=j_max as u128 {
            if j % q as u128 == 0 {
                continue; // gcd(q, n) != 1
            }
            let n = j * base;
            if n == 0 || n > u64::MAX as u128 {
                continue;
            }
            let n = n as u64;
            let Some(k) = multiplicative_order(q, n) else {
                continue;
            };
            if k > field_cap_bits as u64
                || (q as u128).pow(k as u32) > 1u128 << field_cap_bits
            {
                continue;
            }
            let Ok(theta) = compute_theta(n, k as u32, q) else {
                continue;
            };
            // Eq. (zero): q^(theta - 1 - k/2) >= epsilon
            let lhs = (theta.theta as f64 - 1.0 - k as f64 / 2.0) * (q as f64).ln();
            if lhs < family.epsilon.ln() {
                continue;
            }
            let inst = GeneratedInstance {
                n,
                k: k as u32,
                m,
                j: j as u64,
                big_n: ((q as u128).pow(k as u32) - 1) as u64 / n,
                theta: theta.theta,
                epsilon0: theta.epsilon0,
            };
            if !out.contains(&inst) {
                out.push(inst);
                if out.len() >= limit {
                    break 'outer;
                }
            }
        }
    }
    out
}

/// Builds the canonical k x n dual generator of a generated instance:
/// columns g^(jN) for j = 0..n-1 in the polynomial basis.
pub fn realize_dual_generator(inst: &GeneratedInstance, q: u64) -> Result<Matrix, MembershipError> {
    let field = ExtensionField::new(q, inst.k as usize)?;
    let g = field.generator();
    let step = field.pow(&g, inst.big_n as u128);
    let mut m = Matrix::zeros(q, inst.k as usize, inst.n as usize);
    let mut cur = field.one();
    for j in 0..inst.n as usize {
        for (i, &c) in cur.coeffs().iter().enumerate() {
            m[(i, j)] = c;
        }
        cur = field.mul(&cur, &step);
    }
    Ok(m)
}

/// Fixed point of E = V - c + log_q(E (E - V + c)^s + 1), the edge count of
/// a sparse family member as a function of its vertex count.
pub fn edge_count_solver(v: f64, q: u64, s: f64, c: f64) -> Result<f64, MembershipError> {
    assert!(v >= 2.0, "need at least two vertices");
    let lnq = (q as f64).ln();
    let mut e = v;
    for _ in 0..1000 {
        let next = v - c + ((e * (e - v + c).powf(s) + 1.0).ln() / lnq);
        if (next - e).abs() <= 1e-12 * next.abs() {
            return Ok(next);
        }
        e = next;
    }
    Err(MembershipError::NoConvergence(1000))
}

/// Least-squares fit of E - V against a + b ln V over a vertex sweep.
#[derive(Clone, Copy, Debug)]
pub struct EdgeGrowthFit {
    pub a: f64,
    pub b: f64,
    /// Root mean squared residual of the fit.
    pub residual_std: f64,
}

pub fn fit_edge_growth(
    q: u64,
    s: f64,
    c: f64,
    vertex_counts: &[f64],
) -> Result<EdgeGrowthFit, MembershipError> {
    assert!(vertex_counts.len() >= 3, "need at least three sample points");
    let mut xs = Vec::with_capacity(vertex_counts.len());
    let mut ys = Vec::with_capacity(vertex_counts.len());
    for &v in vertex_counts {
        let e = edge_count_solver(v, q, s, c)?;
        xs.push(v.ln());
        ys.push(e - v);
    }
    let m = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let b = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let a = (sy - b * sx) / m;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (a + b * x);
            r * r
        })
        .sum();
    Ok(EdgeGrowthFit { a, b, residual_std: (ss / m).sqrt() })
}
