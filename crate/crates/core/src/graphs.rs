//! Multigraphs, connected components, signed incidence matrices, and the
//! reduction to the cycle matroid matrix (CMM) standard form [I | X].

use std::fmt;

use thiserror::Error;

use crate::ff::PrimeField;
use crate::mat::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: self-loop ({v}, {v}) is not allowed")]
    SelfLoop { line: usize, v: usize },
    #[error("line {line}: vertex {v} out of range (vertices = {n})")]
    VertexOutOfRange { line: usize, v: usize, n: usize },
    #[error("line {line}: expected `{expected}`, got `{got}`")]
    Malformed { line: usize, expected: &'static str, got: String },
    #[error("missing `vertices N` header")]
    MissingHeader,
}

/// Undirected multigraph. Edges are stored as (i, j) with i < j; parallel
/// edges are allowed, self-loops are not. Edge order is significant: it
/// fixes the column order of the incidence matrix and the CMM.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    labels: Option<Vec<String>>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (line, &(u, v)) in edges.iter().enumerate() {
            if u == v {
                return Err(GraphError::SelfLoop { line, v: u });
            }
            let (a, b) = (u.min(v), u.max(v));
            if b >= vertex_count {
                return Err(GraphError::VertexOutOfRange { line, v: b, n: vertex_count });
            }
            normalized.push((a, b));
        }
        Ok(Graph { vertex_count, edges: normalized, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.edges.len());
        self.labels = Some(labels);
        self
    }

    /// Parses the text format:
    ///
    /// ```text
    /// # optional comments
    /// vertices N
    /// u v
    /// u v
    /// ```
    ///
    /// Vertices are 0-based; a trailing newline is optional.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut vertex_count: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            match vertex_count {
                None => {
                    let mut it = s.split_whitespace();
                    if it.next() != Some("vertices") {
                        return Err(GraphError::Malformed {
                            line,
                            expected: "vertices N",
                            got: s.to_string(),
                        });
                    }
                    let n = it
                        .next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or(GraphError::Malformed {
                            line,
                            expected: "vertices N",
                            got: s.to_string(),
                        })?;
                    if it.next().is_some() {
                        return Err(GraphError::Malformed {
                            line,
                            expected: "vertices N",
                            got: s.to_string(),
                        });
                    }
                    vertex_count = Some(n);
                }
                Some(n) => {
                    let mut it = s.split_whitespace();
                    let parse = |t: Option<&str>| {
                        t.and_then(|t| t.parse::<usize>().ok()).ok_or(GraphError::Malformed {
                            line,
                            expected: "u v",
                            got: s.to_string(),
                        })
                    };
                    let u = parse(it.next())?;
                    let v = parse(it.next())?;
                    if it.next().is_some() {
                        return Err(GraphError::Malformed {
                            line,
                            expected: "u v",
                            got: s.to_string(),
                        });
                    }
                    if u == v {
                        return Err(GraphError::SelfLoop { line, v: u });
                    }
                    let (a, b) = (u.min(v), u.max(v));
                    if b >= n {
                        return Err(GraphError::VertexOutOfRange { line, v: b, n });
                    }
                    edges.push((a, b));
                }
            }
        }
        let vertex_count = vertex_count.ok_or(GraphError::MissingHeader)?;
        Ok(Graph { vertex_count, edges, labels: None })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Number of connected components, counting isolated vertices.
    pub fn component_count(&self) -> usize {
        let mut dsu = Dsu::new(self.vertex_count);
        for &(u, v) in &self.edges {
            dsu.union(u, v);
        }
        dsu.count()
    }

    /// |V| x |E| signed incidence matrix over GF(q): column c for edge
    /// (i, j) with i < j has +1 in row i and -1 (= q-1) in row j.
    /// Over GF(2) both entries are 1.
    pub fn incidence_matrix(&self, q: PrimeField) -> Matrix {
        let q = q.q();
        let mut m = Matrix::zeros(q, self.vertex_count, self.edges.len());
        for (c, &(i, j)) in self.edges.iter().enumerate() {
            m[(i, c)] = 1;
            m[(j, c)] = q - 1;
        }
        m
    }

    /// Reduces the incidence matrix to the cycle matroid standard form
    /// [I | X] over GF(q). Columns are permuted (and the permutation
    /// recorded) when the Gaussian pivots are not already the leading
    /// columns, which happens exactly when an early edge closes a cycle.
    pub fn reduce_to_cmm(&self, q: PrimeField) -> CycleMatroidMatrix {
        let components = self.component_count();
        let inc = self.incidence_matrix(q);
        let rref = inc.rref();
        let rank = rref.pivots.len();
        debug_assert_eq!(rank, self.vertex_count - components);

        // pivot columns first (in order), then the rest in original order
        let mut perm: Vec<usize> = rref.pivots.clone();
        let mut is_pivot = vec![false; inc.cols()];
        for &p in &rref.pivots {
            is_pivot[p] = true;
        }
        perm.extend((0..inc.cols()).filter(|&c| !is_pivot[c]));
        let matrix = rref.matrix.permute_cols(&perm);

        for i in 0..rank {
            for j in 0..rank {
                debug_assert_eq!(matrix[(i, j)], u64::from(i == j), "identity block");
            }
        }
        CycleMatroidMatrix { matrix, column_permutation: perm, components }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(V={}, E={:?})", self.vertex_count, self.edges)
    }
}

/// The cycle matroid matrix [I | X]: a (|V| - c) x |E| matrix over GF(q)
/// whose column dependencies are exactly the edge sets containing a cycle.
#[derive(Clone, Debug)]
pub struct CycleMatroidMatrix {
    /// [I | X] with the identity block of size |V| - c.
    pub matrix: Matrix,
    /// `column_permutation[j]` = original edge index of CMM column j.
    pub column_permutation: Vec<usize>,
    /// c(Gamma), the number of connected components.
    pub components: usize,
}

impl CycleMatroidMatrix {
    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    /// Maps a set of original edge indices to CMM column indices.
    pub fn columns_for_edges(&self, edges: &[usize]) -> Vec<usize> {
        let mut inv = vec![0; self.column_permutation.len()];
        for (new, &orig) in self.column_permutation.iter().enumerate() {
            inv[orig] = new;
        }
        edges.iter().map(|&e| inv[e]).collect()
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::RowSpace;

    fn pf(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    pub(crate) fn square() -> Graph {
        Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap()
    }

    pub(crate) fn triangle() -> Graph {
        Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn parse_and_reject() {
        let g = Graph::parse("# demo\nvertices 3\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (0, 2)]);
        // no trailing newline
        let g2 = Graph::parse("vertices 2\n0 1").unwrap();
        assert_eq!(g2.edge_count(), 1);
        assert!(matches!(
            Graph::parse("vertices 2\n1 1"),
            Err(GraphError::SelfLoop { .. })
        ));
        assert!(matches!(
            Graph::parse("vertices 2\n0 5"),
            Err(GraphError::VertexOutOfRange { .. })
        ));
        assert!(matches!(Graph::parse("0 1\n"), Err(GraphError::Malformed { .. })));
        assert!(matches!(Graph::parse("# only\n"), Err(GraphError::MissingHeader)));
    }

    #[test]
    fn components() {
        assert_eq!(Graph::new(2, vec![(0, 1)]).unwrap().component_count(), 1);
        assert_eq!(
            Graph::new(4, vec![(0, 1), (2, 3)]).unwrap().component_count(),
            2
        );
        assert_eq!(square().component_count(), 1);
        // isolated vertex counts
        assert_eq!(Graph::new(3, vec![(0, 1)]).unwrap().component_count(), 2);
    }

    #[test]
    fn incidence_square_matches_signed_form() {
        // columns: (0,1) (1,2) (2,3) (0,3); +1 at the smaller endpoint
        let m = square().incidence_matrix(pf(3));
        assert_eq!(m.row(0), &[1, 0, 0, 1]);
        assert_eq!(m.row(1), &[2, 1, 0, 0]);
        assert_eq!(m.row(2), &[0, 2, 1, 0]);
        assert_eq!(m.row(3), &[0, 0, 2, 2]);
    }

    #[test]
    fn incidence_single_edge() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(g.incidence_matrix(pf(2)).col(0), vec![1, 1]);
        assert_eq!(g.incidence_matrix(pf(3)).col(0), vec![1, 2]);
    }

    #[test]
    fn cmm_square_gf2() {
        let cmm = square().reduce_to_cmm(pf(2));
        assert_eq!(cmm.components, 1);
        assert_eq!(cmm.column_permutation, vec![0, 1, 2, 3]);
        assert_eq!(cmm.matrix.row(0), &[1, 0, 0, 1]);
        assert_eq!(cmm.matrix.row(1), &[0, 1, 0, 1]);
        assert_eq!(cmm.matrix.row(2), &[0, 0, 1, 1]);
    }

    #[test]
    fn cmm_triangle_gf2() {
        let cmm = triangle().reduce_to_cmm(pf(2));
        assert_eq!(cmm.matrix.row(0), &[1, 0, 1]);
        assert_eq!(cmm.matrix.row(1), &[0, 1, 1]);
    }

    #[test]
    fn cmm_forest_is_identity() {
        let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        for q in [2, 3, 5] {
            let cmm = g.reduce_to_cmm(pf(q));
            assert_eq!(cmm.matrix.rows(), 3);
            assert_eq!(cmm.matrix.cols(), 3);
            assert_eq!(cmm.matrix, Matrix::identity(q, 3));
        }
    }

    #[test]
    fn cmm_parallel_edges_force_permutation() {
        // edges 0 and 1 are parallel: column 1 duplicates column 0, so the
        // second pivot comes from edge 2 and a permutation is recorded
        let g = Graph::new(3, vec![(0, 1), (0, 1), (1, 2)]).unwrap();
        let cmm = g.reduce_to_cmm(pf(2));
        assert_eq!(cmm.column_permutation, vec![0, 2, 1]);
        assert_eq!(cmm.rank(), 2);
    }

    #[test]
    fn cmm_rank_always_v_minus_c() {
        let graphs = [
            Graph::new(5, vec![(0, 1), (1, 2), (3, 4)]).unwrap(),
            Graph::new(6, vec![(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap(),
            Graph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap(),
        ];
        for g in &graphs {
            for q in [2, 3, 5] {
                let cmm = g.reduce_to_cmm(pf(q));
                assert_eq!(cmm.rank(), g.vertex_count() - g.component_count());
            }
        }
    }

    #[test]
    fn reduction_is_stable_under_repetition() {
        for q in [2, 3] {
            let a = square().reduce_to_cmm(pf(q));
            let b = square().reduce_to_cmm(pf(q));
            assert_eq!(a.matrix, b.matrix);
            assert_eq!(a.column_permutation, b.column_permutation);
        }
    }

    /// Exhaustive oracle: a CMM column set is linearly dependent iff the
    /// corresponding edge set contains a cycle (found by DFS).
    fn has_cycle(vertex_count: usize, edges: &[(usize, usize)]) -> bool {
        let mut dsu = Dsu::new(vertex_count);
        for &(u, v) in edges {
            if dsu.find(u) == dsu.find(v) {
                return true;
            }
            dsu.union(u, v);
        }
        false
    }

    fn columns_dependent(m: &Matrix, cols: &[usize]) -> bool {
        if cols.is_empty() {
            return false;
        }
        let sub = m.submatrix(&(0..m.rows()).collect::<Vec<_>>(), cols);
        sub.transpose().rank() < cols.len()
    }

    #[test]
    fn dependency_iff_cycle() {
        let k4 = Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let graphs = [
            triangle(),
            square(),
            Graph::new(4, vec![(0, 1), (0, 1), (1, 2), (2, 3), (1, 3)]).unwrap(),
            Graph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)]).unwrap(),
            k4,
            // 12 edges: K4 plus parallel copies and a pendant trail
            Graph::new(6, vec![
                (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
                (0, 1), (2, 3), (3, 4), (4, 5), (3, 5), (0, 4),
            ]).unwrap(),
        ];
        for g in &graphs {
            for q in [2, 3, 5] {
                let cmm = g.reduce_to_cmm(pf(q));
                let e = g.edge_count();
                for mask in 0u32..(1 << e) {
                    let edge_set: Vec<usize> =
                        (0..e).filter(|&i| mask >> i & 1 == 1).collect();
                    let edge_pairs: Vec<(usize, usize)> =
                        edge_set.iter().map(|&i| g.edges()[i]).collect();
                    let cols = cmm.columns_for_edges(&edge_set);
                    assert_eq!(
                        columns_dependent(&cmm.matrix, &cols),
                        has_cycle(g.vertex_count(), &edge_pairs),
                        "graph {g:?} q={q} mask={mask:b}"
                    );
                }
            }
        }
    }

    #[test]
    fn row_space_of_cmm_equals_row_space_of_incidence() {
        for q in [2, 3] {
            let g = square();
            let cmm = g.reduce_to_cmm(pf(q));
            // un-permute CMM columns back to edge order
            let mut inv = vec![0; 4];
            for (new, &orig) in cmm.column_permutation.iter().enumerate() {
                inv[orig] = new;
            }
            let back = cmm.matrix.permute_cols(&inv);
            let inc_space = RowSpace::new(&g.incidence_matrix(pf(q)));
            for i in 0..back.rows() {
                assert!(inc_space.contains(back.row(i)));
            }
        }
    }
}
