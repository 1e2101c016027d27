//! Dense matrices over GF(q) for prime q, with the row-reduction
//! machinery shared by the graph and code modules.

use std::fmt;

/// Row-major matrix with entries reduced modulo a prime `q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    q: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Result of full Gauss-Jordan reduction.
pub struct Rref {
    pub matrix: Matrix,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(q: u64, rows: usize, cols: usize) -> Self {
        assert!(q >= 2);
        Matrix { q, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(q: u64, n: usize) -> Self {
        let mut m = Self::zeros(q, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows, reducing every entry mod q.
    pub fn from_rows(q: u64, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| x % q));
        }
        Matrix { q, rows: r, cols: c, data }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_zero_col(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self[(i, j)] == 0)
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.q, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Entry-wise negation mod q.
    pub fn neg(&self) -> Matrix {
        let mut m = self.clone();
        for v in &mut m.data {
            *v = (self.q - *v) % self.q;
        }
        m
    }

    /// `[self | other]` side by side.
    pub fn hconcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.q, other.q);
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.q, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)];
            }
        }
        m
    }

    /// Block-diagonal composition.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.q, other.q);
        let mut m = Matrix::zeros(self.q, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.q, other.q);
        assert_eq!(self.cols, other.rows);
        let mut m = Matrix::zeros(self.q, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    m[(i, j)] = (m[(i, j)] + a * other[(l, j)]) % self.q;
                }
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Returns the submatrix on the given rows and columns (in the given order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.q, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)];
            }
        }
        m
    }

    /// Applies a column permutation: column `j` of the result is column
    /// `perm[j]` of `self`.
    pub fn permute_cols(&self, perm: &[usize]) -> Matrix {
        assert_eq!(perm.len(), self.cols);
        let mut m = Matrix::zeros(self.q, self.rows, self.cols);
        for i in 0..self.rows {
            for (j, &src) in perm.iter().enumerate() {
                m[(i, j)] = self[(i, src)];
            }
        }
        m
    }

    fn inv_mod(&self, a: u64) -> u64 {
        // q prime, a != 0: Fermat.
        pow_mod(a, self.q - 2, self.q)
    }

    /// Full Gauss-Jordan reduction (pivots normalized to 1, cleared above
    /// and below), scanning columns left to right. Zero rows are dropped.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let q = self.q;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(p) = (r..m.rows).find(|&i| m[(i, c)] != 0) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    let (a, b) = (m[(r, j)], m[(p, j)]);
                    m[(r, j)] = b;
                    m[(p, j)] = a;
                }
            }
            let inv = m.inv_mod(m[(r, c)]);
            for j in 0..m.cols {
                m[(r, j)] = m[(r, j)] * inv % q;
            }
            for i in 0..m.rows {
                if i != r && m[(i, c)] != 0 {
                    let f = m[(i, c)];
                    for j in 0..m.cols {
                        m[(i, j)] = (m[(i, j)] + (q - f) * m[(r, j)]) % q;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        m.rows = r;
        m.data.truncate(r * m.cols);
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} mod {} [", self.rows, self.cols, self.q)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Row space of a matrix, for repeated membership queries.
pub struct RowSpace {
    rref: Matrix,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(m: &Matrix) -> Self {
        let Rref { matrix, pivots } = m.rref();
        RowSpace { rref: matrix, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let q = self.rref.q;
        assert_eq!(v.len(), self.rref.cols);
        let mut v: Vec<u64> = v.iter().map(|&x| x % q).collect();
        for (r, &c) in self.pivots.iter().enumerate() {
            if v[c] != 0 {
                let f = v[c];
                let row = self.rref.row(r);
                for (x, &g) in v.iter_mut().zip(row) {
                    *x = (*x + (q - f) * g) % q;
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }
}

pub(crate) fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}
