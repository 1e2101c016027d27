//! Linear codes over GF(q): cocycle codes from a CMM, duals, cyclicity and
//! irreducibility tests, brute-force weight spectra, trace-representation
//! codewords, and the MacWilliams transform.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ff::{ExtensionField, FieldElement};
use crate::graphs::CycleMatroidMatrix;
use crate::mat::{Matrix, RowSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodesError {
    #[error("generator matrix is rank deficient")]
    RankDeficient,
    #[error("enumeration of {size} codewords exceeds the cap of 2^{cap_bits}")]
    TooLarge { size: u128, cap_bits: u32 },
    #[error("generator has a zero column, which has no discrete log")]
    ZeroColumn,
    #[error("MacWilliams transform produced a non-integer or negative coefficient")]
    NonIntegerCoefficient,
    #[error("parameters are inconsistent: need n*N = q^k - 1 with k = ord_q(n)")]
    InconsistentParams,
    #[error("codes are defined over different fields")]
    FieldMismatch,
}

/// An [n, k] linear code over GF(q), held by a full-rank generator matrix.
#[derive(Clone, Debug)]
pub struct LinearCode {
    gen: Matrix,
}

impl LinearCode {
    pub fn new(gen: Matrix) -> Result<Self, CodesError> {
        if gen.rank() != gen.rows() {
            return Err(CodesError::RankDeficient);
        }
        Ok(LinearCode { gen })
    }

    pub fn q(&self) -> u64 {
        self.gen.q()
    }

    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.gen
    }

    /// q^k, the number of codewords.
    pub fn word_count(&self) -> u128 {
        (self.q() as u128).pow(self.k() as u32)
    }
}

/// The cocycle code of a graph: the row space of its CMM, an
/// [|E|, |V| - c] code.
pub fn cocycle_code(cmm: &CycleMatroidMatrix) -> LinearCode {
    LinearCode::new(cmm.matrix.clone()).expect("CMM is full rank by construction")
}

/// The [n, n-k] dual code, generated by [-X^T | I] after bringing the
/// generator to standard form (any column permutation applied during
/// reduction is undone afterwards, so coordinates line up).
pub fn dual_code(code: &LinearCode) -> LinearCode {
    let q = code.q();
    let n = code.n();
    let k = code.k();
    let rref = code.gen.rref();
    debug_assert_eq!(rref.pivots.len(), k);

    let mut perm: Vec<usize> = rref.pivots.clone();
    let mut is_pivot = vec![false; n];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    perm.extend((0..n).filter(|&c| !is_pivot[c]));
    let std_form = rref.matrix.permute_cols(&perm); // [I_k | X]

    let all_rows: Vec<usize> = (0..k).collect();
    let x_cols: Vec<usize> = (k..n).collect();
    let x = std_form.submatrix(&all_rows, &x_cols);
    let h = x.transpose().neg().hconcat(&Matrix::identity(q, n - k));

    // undo the permutation: column perm[t] of the dual is column t of h
    let mut inv = vec![0; n];
    for (t, &orig) in perm.iter().enumerate() {
        inv[orig] = t;
    }
    let h = h.permute_cols(&inv);
    debug_assert!(code.gen.mul(&h.transpose()).is_zero(), "G * H^T != 0");
    LinearCode::new(h).expect("dual generator is full rank")
}

/// Weight spectrum {A_i}: the number of codewords of each Hamming weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpectrum {
    counts: BTreeMap<usize, BigUint>,
}

impl WeightSpectrum {
    pub fn from_map(counts: BTreeMap<usize, BigUint>) -> Self {
        let counts = counts.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        WeightSpectrum { counts }
    }

    pub fn from_counts_u64(counts: &[u64]) -> Self {
        let map = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(w, &c)| (w, BigUint::from(c)))
            .collect();
        WeightSpectrum { counts: map }
    }

    pub fn get(&self, weight: usize) -> BigUint {
        self.counts.get(&weight).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.counts.iter().map(|(&w, c)| (w, c))
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    pub fn distinct_nonzero_weights(&self) -> usize {
        self.counts.keys().filter(|&&w| w > 0).count()
    }

    /// Product of enumerators: the spectrum of a direct sum of codes.
    pub fn convolve(&self, other: &WeightSpectrum) -> WeightSpectrum {
        let mut out: BTreeMap<usize, BigUint> = BTreeMap::new();
        for (w1, c1) in &self.counts {
            for (w2, c2) in &other.counts {
                *out.entry(w1 + w2).or_default() += c1 * c2;
            }
        }
        WeightSpectrum { counts: out }
    }
}

/// Enumerates all q^k codewords and tallies Hamming weights.
///
/// The message space is swept as a base-q odometer so each step costs one
/// generator-row addition; `threads` > 1 splits the sweep into contiguous
/// ranges with a deterministic merge.
pub fn brute_force_spectrum(
    code: &LinearCode,
    cap_bits: u32,
    threads: usize,
) -> Result<WeightSpectrum, CodesError> {
    let size = code.word_count();
    if size > 1u128 << cap_bits {
        return Err(CodesError::TooLarge { size, cap_bits });
    }
    if code.k() == 0 {
        return Ok(WeightSpectrum::from_counts_u64(&[1]));
    }
    let threads = threads.max(1).min(size as usize);
    let mut bounds: Vec<u128> = (0..=threads as u128)
        .map(|t| size * t / threads as u128)
        .collect();
    bounds.dedup();
    let counts = if bounds.len() <= 2 {
        spectrum_range(&code.gen, 0, size)
    } else {
        let mut partials: Vec<Vec<u64>> = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = bounds
                .windows(2)
                .map(|w| {
                    let (start, end) = (w[0], w[1]);
                    let gen = &code.gen;
                    scope.spawn(move || spectrum_range(gen, start, end))
                })
                .collect();
            for h in handles {
                partials.push(h.join().expect("spectrum worker panicked"));
            }
        });
        let mut acc = vec![0u64; code.n() + 1];
        for p in partials {
            for (a, b) in acc.iter_mut().zip(p) {
                *a += b;
            }
        }
        acc
    };
    Ok(WeightSpectrum::from_counts_u64(&counts))
}

fn spectrum_range(gen: &Matrix, start: u128, end: u128) -> Vec<u64> {
    let q = gen.q();
    let k = gen.rows();
    let n = gen.cols();
    let mut counts = vec![0u64; n + 1];

    let mut digits = vec![0u64; k];
    let mut m = start;
    for d in digits.iter_mut() {
        *d = (m % q as u128) as u64;
        m /= q as u128;
    }
    let rows: Vec<&[u64]> = (0..k).map(|i| gen.row(i)).collect();
    let mut word = vec![0u64; n];
    for (i, &d) in digits.iter().enumerate() {
        if d != 0 {
            for (w, &g) in word.iter_mut().zip(rows[i]) {
                *w = (*w + d * g) % q;
            }
        }
    }
    let mut weight = word.iter().filter(|&&x| x != 0).count();

    let mut idx = start;
    loop {
        counts[weight] += 1;
        idx += 1;
        if idx == end {
            break;
        }
        let mut i = 0;
        loop {
            digits[i] += 1;
            let mut delta = 0isize;
            for (w, &g) in word.iter_mut().zip(rows[i]) {
                if g != 0 {
                    let was = *w;
                    let now = (was + g) % q;
                    *w = now;
                    delta += (now != 0) as isize - (was != 0) as isize;
                }
            }
            weight = (weight as isize + delta) as usize;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
    counts
}

/// True iff the cyclic right-shift of every codeword is a codeword.
/// It suffices to check the generator rows: the shift is linear, and a
/// shift-stable span of full dimension is shift-closed.
pub fn is_cyclic(code: &LinearCode) -> bool {
    if code.k() == 0 || code.n() <= 1 {
        return true;
    }
    let space = RowSpace::new(&code.gen);
    for i in 0..code.k() {
        let row = code.gen.row(i);
        let mut shifted = vec![0u64; row.len()];
        shifted[0] = row[row.len() - 1];
        shifted[1..].copy_from_slice(&row[..row.len() - 1]);
        if !space.contains(&shifted) {
            return false;
        }
    }
    true
}

/// Parameters of an [n, k] irreducible cyclic code over GF(q), where
/// n*N = q^k - 1, k = ord_q(n), and d = gcd(N, (q^k - 1)/(q - 1)).
#[derive(Clone)]
pub struct CyclicCodeParams {
    field: ExtensionField,
    n: u64,
    big_n: u64,
    d: u64,
}

impl CyclicCodeParams {
    pub fn new(n: u64, field: ExtensionField) -> Result<Self, CodesError> {
        let order = field.group_order();
        if n == 0 || !order.is_multiple_of(n as u128) {
            return Err(CodesError::InconsistentParams);
        }
        if multiplicative_order(field.q(), n) != Some(field.degree() as u64) {
            return Err(CodesError::InconsistentParams);
        }
        let big_n = (order / n as u128) as u64;
        let d_arg = (order / (field.q() as u128 - 1)) as u64;
        let d = big_n.gcd(&d_arg);
        Ok(CyclicCodeParams { field, n, big_n, d })
    }

    pub fn field(&self) -> &ExtensionField {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.field.degree()
    }

    /// N = (q^k - 1)/n, the number of cyclic equivalence classes.
    pub fn big_n(&self) -> u64 {
        self.big_n
    }

    /// d = gcd(N, (q^k - 1)/(q - 1)), the character order in the weight formula.
    pub fn d(&self) -> u64 {
        self.d
    }
}

/// ord_q(n): the smallest i >= 1 with q^i = 1 mod n, or None when
/// gcd(q, n) != 1. ord_q(1) = 1 by convention.
///
/// Works through the Carmichael function: the order divides lambda(n), and
/// stripping prime factors of lambda(n) that keep q^e = 1 isolates it
/// without an O(n) scan.
pub fn multiplicative_order(q: u64, n: u64) -> Option<u64> {
    if n == 0 || q.gcd(&n) != 1 {
        return None;
    }
    if n == 1 {
        return Some(1);
    }
    let lambda = carmichael_lambda(n);
    debug_assert_eq!(crate::mat::pow_mod(q, lambda, n), 1 % n);
    let mut ord = lambda;
    for p in prime_factors(lambda) {
        while ord.is_multiple_of(p) && crate::mat::pow_mod(q, ord / p, n) == 1 % n {
            ord /= p;
        }
    }
    Some(ord.max(1))
}

fn carmichael_lambda(n: u64) -> u64 {
    let mut lambda = 1u64;
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0u32;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            let l = if p == 2 {
                match e {
                    1 => 1,
                    2 => 2,
                    _ => 1u64 << (e - 2),
                }
            } else {
                p.pow(e - 1) * (p - 1)
            };
            lambda = lambda.lcm(&l);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        lambda = lambda.lcm(&(rest - 1));
    }
    lambda
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The codeword of the [n, k] irreducible cyclic code associated with x:
/// (Tr(x), Tr(x g^N), Tr(x g^2N), ..., Tr(x g^(n-1)N)) for the field
/// generator g.
pub fn trace_codeword(x: &FieldElement, params: &CyclicCodeParams) -> Vec<u64> {
    let f = params.field();
    let step = f.pow(&f.generator(), params.big_n as u128);
    let mut word = Vec::with_capacity(params.n as usize);
    let mut cur = x.clone();
    for _ in 0..params.n {
        word.push(f.trace(&cur));
        cur = f.mul(&cur, &step);
    }
    word
}

/// The k x n generator of the irreducible cyclic code whose rows are the
/// trace words of the polynomial basis: row i, column j holds
/// Tr(x^i * g^(jN)).
///
/// Uses the bilinearity of the trace: with T[i][t] = Tr(x^(i+t))
/// precomputed, each column is a k x k matrix-vector product on the
/// coordinates of g^(jN), so the whole generator costs O(n k^2) instead of
/// one Frobenius sweep per entry. This is the enumeration-oracle entry
/// point for large instances.
pub fn trace_code_generator(params: &CyclicCodeParams) -> LinearCode {
    let f = params.field();
    let q = f.q();
    let k = f.degree();
    let n = params.n() as usize;
    // Tr(x^e) for e = 0..2k-2
    let mut power_traces = Vec::with_capacity(2 * k - 1);
    if k == 1 {
        power_traces.push(1 % q); // trace is the identity on the base field
    } else {
        let mut basis_x = vec![0u64; k];
        basis_x[1] = 1;
        let x = f.element(&basis_x);
        let mut xe = f.one();
        for _ in 0..(2 * k - 1) {
            power_traces.push(f.trace(&xe));
            xe = f.mul(&xe, &x);
        }
    }
    let step = f.pow(&f.generator(), params.big_n() as u128);
    let mut rows = vec![vec![0u64; n]; k];
    let mut cur = f.one();
    for j in 0..n {
        let v = cur.coeffs();
        for (i, row) in rows.iter_mut().enumerate() {
            let mut acc = 0u64;
            for (t, &vt) in v.iter().enumerate() {
                acc = (acc + power_traces[i + t] * vt) % q;
            }
            row[j] = acc;
        }
        cur = f.mul(&cur, &step);
    }
    LinearCode::new(Matrix::from_rows(q, rows)).expect("non-degenerate irreducible cyclic code")
}

/// Tests whether the code is equivalent to an irreducible cyclic code by
/// the discrete-log pattern of its generator columns.
///
/// The n columns are read as elements of GF(q^k) in the polynomial basis
/// and their logs are taken with respect to the fixed field generator. The
/// acceptance set {c + jNu mod q^k-1 : j} with gcd(u, n) = 1 is, for any
/// unit u, the full residue class of c modulo N; so the columns pass iff
/// their logs are pairwise distinct and congruent to one another mod N.
pub fn is_irreducible_cyclic(
    code: &LinearCode,
    field: &ExtensionField,
) -> Result<bool, CodesError> {
    let logs = column_logs(code, field)?;
    let n = code.n() as u128;
    let order = field.group_order();
    if n == 0 || !order.is_multiple_of(n) {
        return Ok(false);
    }
    let big_n = order / n;
    Ok(log_pattern_matches(&logs, big_n))
}

/// Discrete logs of the generator columns, read as field elements.
pub fn column_logs(code: &LinearCode, field: &ExtensionField) -> Result<Vec<u128>, CodesError> {
    assert_eq!(code.k(), field.degree(), "column height must match field degree");
    assert_eq!(code.q(), field.q(), "base field mismatch");
    let table = field
        .bsgs_table(&field.generator())
        .map_err(|_| CodesError::TooLarge { size: field.size(), cap_bits: 48 })?;
    let mut logs = Vec::with_capacity(code.n());
    for j in 0..code.n() {
        let col = code.gen.col(j);
        let elt = field.element(&col);
        if elt.is_zero() {
            return Err(CodesError::ZeroColumn);
        }
        let l = field
            .discrete_log_with_table(&elt, &table)
            .expect("nonzero element has a log");
        logs.push(l);
    }
    Ok(logs)
}

/// Logs pass iff pairwise distinct and all congruent mod N.
pub fn log_pattern_matches(logs: &[u128], big_n: u128) -> bool {
    if logs.is_empty() {
        return false;
    }
    let mut sorted = logs.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let r0 = sorted[0] % big_n;
    sorted.iter().all(|&l| l % big_n == r0)
}

/// MacWilliams transform over GF(q): from the spectrum of an [n, k] code to
/// the spectrum of its [n, n-k] dual,
/// A_perp(x, y) = q^(-k) A(x + (q-1)y, x - y),
/// in exact integer arithmetic. Every output coefficient must come out a
/// non-negative integer; anything else means the input was not a valid
/// [n, k] spectrum.
///
/// The identity is sometimes stated with a q^(k(k-n)) prefactor and the
/// enumerator taken over F_(q^k); only the GF(q) form with the q^(-k)
/// prefactor satisfies duality against codeword enumeration, which the
/// tests pin.
pub fn macwilliams(
    spectrum: &WeightSpectrum,
    n: usize,
    k: usize,
    q: u64,
) -> Result<WeightSpectrum, CodesError> {
    let mut acc = vec![BigInt::zero(); n + 1];
    for (i, a_i) in spectrum.iter() {
        if i > n {
            return Err(CodesError::NonIntegerCoefficient);
        }
        // (x + (q-1)y)^(n-i) expanded in y
        let p1 = binomial_coeffs(n - i, &BigInt::from(q - 1));
        // (x - y)^i expanded in y
        let p2 = binomial_coeffs(i, &BigInt::from(-1));
        let a_i = BigInt::from(a_i.clone());
        for (e1, c1) in p1.iter().enumerate() {
            for (e2, c2) in p2.iter().enumerate() {
                acc[e1 + e2] += &a_i * c1 * c2;
            }
        }
    }
    let qk = BigInt::from(q).pow(k as u32);
    let mut out = BTreeMap::new();
    for (w, c) in acc.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (quot, rem) = c.div_rem(&qk);
        if !rem.is_zero() || quot.is_negative() {
            return Err(CodesError::NonIntegerCoefficient);
        }
        out.insert(w, quot.to_biguint().expect("checked non-negative"));
    }
    Ok(WeightSpectrum::from_map(out))
}

/// Coefficients of (1 + t*y)^m in y: [C(m, j) * t^j].
fn binomial_coeffs(m: usize, t: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(m + 1);
    let mut c = BigInt::one();
    let mut tp = BigInt::one();
    for j in 0..=m {
        out.push(&c * &tp);
        if j < m {
            c = c * BigInt::from((m - j) as u64) / BigInt::from((j + 1) as u64);
            tp *= t;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::PrimeField;
    use crate::graphs::Graph;

    fn pf(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn square_code(q: u64) -> LinearCode {
        let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        cocycle_code(&g.reduce_to_cmm(pf(q)))
    }

    fn triangle_code(q: u64) -> LinearCode {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        cocycle_code(&g.reduce_to_cmm(pf(q)))
    }

    #[test]
    fn cocycle_dimensions() {
        let c = square_code(2);
        assert_eq!((c.n(), c.k()), (4, 3));
        let t = triangle_code(2);
        assert_eq!((t.n(), t.k()), (3, 2));
        // forest: full space on |V| - c coordinates
        let f = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let c = cocycle_code(&f.reduce_to_cmm(pf(3)));
        assert_eq!((c.n(), c.k()), (2, 2));
    }

    #[test]
    fn dual_of_square_is_repetition() {
        let d = dual_code(&square_code(2));
        assert_eq!((d.n(), d.k()), (4, 1));
        assert_eq!(d.generator().row(0), &[1, 1, 1, 1]);
    }

    #[test]
    fn dual_of_full_space_is_zero_code() {
        let full = LinearCode::new(Matrix::identity(3, 4)).unwrap();
        let d = dual_code(&full);
        assert_eq!((d.n(), d.k()), (4, 0));
    }

    #[test]
    fn dual_of_repetition_is_even_weight() {
        let rep = LinearCode::new(Matrix::from_rows(2, vec![vec![1, 1, 1]])).unwrap();
        let d = dual_code(&rep);
        assert_eq!((d.n(), d.k()), (3, 2));
        let spec = brute_force_spectrum(&d, 24, 1).unwrap();
        assert_eq!(spec.get(0), BigUint::from(1u32));
        assert_eq!(spec.get(2), BigUint::from(3u32));
    }

    #[test]
    fn dual_with_permuted_pivots_still_annihilates() {
        // first column zero forces pivots away from column 0
        let gen = Matrix::from_rows(3, vec![vec![0, 1, 2, 1], vec![0, 2, 1, 0]]);
        let c = LinearCode::new(gen).unwrap();
        let d = dual_code(&c);
        assert!(c.generator().mul(&d.generator().transpose()).is_zero());
        assert_eq!(d.k(), 2);
    }

    #[test]
    fn spectra_of_small_cocycle_codes() {
        let spec = brute_force_spectrum(&triangle_code(2), 24, 1).unwrap();
        assert_eq!(spec.get(0), BigUint::from(1u32));
        assert_eq!(spec.get(2), BigUint::from(3u32));
        assert_eq!(spec.total(), BigUint::from(4u32));

        let spec = brute_force_spectrum(&square_code(2), 24, 1).unwrap();
        assert_eq!(spec.get(0), BigUint::from(1u32));
        assert_eq!(spec.get(2), BigUint::from(6u32));
        assert_eq!(spec.get(4), BigUint::from(1u32));

        let zero = LinearCode::new(Matrix::zeros(2, 0, 5)).unwrap();
        let spec = brute_force_spectrum(&zero, 24, 1).unwrap();
        assert_eq!(spec.get(0), BigUint::from(1u32));
        assert_eq!(spec.total(), BigUint::from(1u32));
    }

    #[test]
    fn spectrum_threads_agree() {
        let c = square_code(3);
        let a = brute_force_spectrum(&c, 24, 1).unwrap();
        let b = brute_force_spectrum(&c, 24, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn spectrum_cap() {
        let c = LinearCode::new(Matrix::identity(2, 30)).unwrap();
        assert!(matches!(
            brute_force_spectrum(&c, 24, 1),
            Err(CodesError::TooLarge { .. })
        ));
    }

    #[test]
    fn cyclicity() {
        let rep = LinearCode::new(Matrix::from_rows(2, vec![vec![1, 1, 1]])).unwrap();
        assert!(is_cyclic(&rep));
        let not = LinearCode::new(Matrix::from_rows(2, vec![vec![1, 0, 0], vec![0, 1, 0]]))
            .unwrap();
        assert!(!is_cyclic(&not));
        let zero = LinearCode::new(Matrix::zeros(2, 0, 4)).unwrap();
        assert!(is_cyclic(&zero));
    }

    #[test]
    fn cyclic_code_params() {
        let f = ExtensionField::new(2, 4).unwrap();
        let p = CyclicCodeParams::new(5, f.clone()).unwrap();
        assert_eq!(p.big_n(), 3);
        assert_eq!(p.d(), 3); // gcd(3, 15)
        assert!(CyclicCodeParams::new(6, f.clone()).is_err()); // 6 does not divide 15
        assert!(CyclicCodeParams::new(15, f).is_ok()); // N = 1
        // ord mismatch: n = 3 has ord_2(3) = 2, not 4
        let f4 = ExtensionField::new(2, 4).unwrap();
        assert!(CyclicCodeParams::new(3, f4).is_err());
    }

    #[test]
    fn multiplicative_orders() {
        assert_eq!(multiplicative_order(2, 7), Some(3));
        assert_eq!(multiplicative_order(2, 5), Some(4));
        assert_eq!(multiplicative_order(2, 113), Some(28));
        assert_eq!(multiplicative_order(2, 4), None);
        assert_eq!(multiplicative_order(3, 1), Some(1));
        assert_eq!(multiplicative_order(2, 13981), Some(20));
    }

    #[test]
    fn trace_codewords_gf4() {
        let f = ExtensionField::new(2, 2).unwrap();
        let p = CyclicCodeParams::new(3, f.clone()).unwrap();
        assert_eq!(p.big_n(), 1);
        assert_eq!(trace_codeword(&f.zero(), &p), vec![0, 0, 0]);
        // (Tr(1), Tr(g), Tr(g^2)) = (0, 1, 1)
        assert_eq!(trace_codeword(&f.one(), &p), vec![0, 1, 1]);
    }

    #[test]
    fn trace_codeword_shift_property() {
        let f = ExtensionField::new(2, 4).unwrap();
        let p = CyclicCodeParams::new(5, f.clone()).unwrap();
        let step = f.pow(&f.generator(), p.big_n() as u128);
        for idx in 1..f.size() {
            let x = f.from_index(idx);
            let w1 = trace_codeword(&x, &p);
            let w2 = trace_codeword(&f.mul(&x, &step), &p);
            // word for x*g^N is the left rotation of the word for x
            let mut rotated = w1[1..].to_vec();
            rotated.push(w1[0]);
            assert_eq!(w2, rotated);
        }
    }

    #[test]
    fn trace_sweep_is_whole_code() {
        // all q^k trace words = all codewords of the irreducible cyclic code
        for (q, k, n) in [(2u64, 2usize, 3u64), (2, 4, 5), (3, 2, 4), (2, 3, 7)] {
            let f = ExtensionField::new(q, k).unwrap();
            let p = CyclicCodeParams::new(n, f.clone()).unwrap();
            let mut words: Vec<Vec<u64>> = f
                .elements()
                .map(|x| trace_codeword(&x, &p))
                .collect();
            words.sort();
            words.dedup();
            assert_eq!(words.len() as u128, f.size(), "q={q} k={k} n={n}");
            // and they form the row space of the generator built from any
            // basis of the word set
            let gen_rows: Vec<Vec<u64>> = {
                let m = Matrix::from_rows(q, words.clone());
                let r = m.rref();
                (0..r.matrix.rows()).map(|i| r.matrix.row(i).to_vec()).collect()
            };
            assert_eq!(gen_rows.len(), k);
            let code = LinearCode::new(Matrix::from_rows(q, gen_rows)).unwrap();
            assert!(is_cyclic(&code));
            let space = RowSpace::new(code.generator());
            assert!(words.iter().all(|w| space.contains(w)));
        }
    }

    #[test]
    fn trace_generator_spans_exactly_the_trace_words() {
        for (q, k, n) in [(2u64, 2usize, 3u64), (2, 4, 5), (3, 2, 4), (2, 3, 7), (5, 1, 4), (2, 6, 9)] {
            let f = ExtensionField::new(q, k).unwrap();
            let p = CyclicCodeParams::new(n, f.clone()).unwrap();
            let gen = trace_code_generator(&p);
            assert_eq!((gen.n(), gen.k()), (n as usize, k));
            let space = RowSpace::new(gen.generator());
            let mut words: Vec<Vec<u64>> = f.elements().map(|x| trace_codeword(&x, &p)).collect();
            for w in &words {
                assert!(space.contains(w), "q={q} k={k} n={n}");
            }
            words.sort();
            words.dedup();
            assert_eq!(words.len() as u128, f.size());
        }
    }

    #[test]
    fn simplex_code_is_irreducible_cyclic() {
        // [7,3] over GF(2): columns are all nonzero field elements once
        let f = ExtensionField::new(2, 3).unwrap();
        let cols: Vec<Vec<u64>> = (1..8u128).map(|i| f.from_index(i).coeffs().to_vec()).collect();
        let mut gen = Matrix::zeros(2, 3, 7);
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                gen[(i, j)] = v;
            }
        }
        let code = LinearCode::new(gen).unwrap();
        assert_eq!(is_irreducible_cyclic(&code, &f), Ok(true));
    }

    #[test]
    fn synthetic_generator_pattern_accepted() {
        // generator (g^c, g^(c+N), g^(c+2N), ...) in shuffled order
        let f = ExtensionField::new(2, 4).unwrap();
        let order = f.group_order();
        let n = 5u128;
        let big_n = order / n;
        let g = f.generator();
        let exps = [2u128, 2 + 3 * big_n, 2 + big_n, 2 + 4 * big_n, 2 + 2 * big_n];
        let mut gen = Matrix::zeros(2, 4, 5);
        for (j, &e) in exps.iter().enumerate() {
            for (i, &v) in f.pow(&g, e).coeffs().iter().enumerate() {
                gen[(i, j)] = v;
            }
        }
        let code = LinearCode::new(gen).unwrap();
        assert_eq!(is_irreducible_cyclic(&code, &f), Ok(true));
    }

    #[test]
    fn non_cyclic_and_zero_column_rejected() {
        let f = ExtensionField::new(2, 2).unwrap();
        // [3,2] code {100, 010}: logs of columns (1,0),(0,1),(0,0) -> zero column
        let gen = Matrix::from_rows(2, vec![vec![1, 0, 0], vec![0, 1, 0]]);
        let code = LinearCode::new(gen).unwrap();
        assert_eq!(is_irreducible_cyclic(&code, &f), Err(CodesError::ZeroColumn));
        // same span presented without a zero column: logs repeat -> false
        let gen = Matrix::from_rows(2, vec![vec![1, 0, 1], vec![0, 1, 1]]);
        let code = LinearCode::new(gen).unwrap();
        // columns: 1, g, 1+g over GF(4): logs 0, 1, 2 distinct, N = 1: true!
        // (the [3,2] code over GF(4) with all-distinct nonzero columns is the
        // simplex-like code and genuinely is irreducible cyclic)
        assert_eq!(is_irreducible_cyclic(&code, &f), Ok(true));
        // a genuinely failing pattern: repeated column
        let gen = Matrix::from_rows(2, vec![vec![1, 1, 0], vec![0, 0, 1]]);
        let code = LinearCode::new(gen).unwrap();
        assert_eq!(is_irreducible_cyclic(&code, &f), Ok(false));
    }

    #[test]
    fn macwilliams_small_cases() {
        // [3,1] repetition {1, y^3} -> even-weight {1, 3y^2}
        let rep = WeightSpectrum::from_counts_u64(&[1, 0, 0, 1]);
        let dual = macwilliams(&rep, 3, 1, 2).unwrap();
        assert_eq!(dual.get(0), BigUint::from(1u32));
        assert_eq!(dual.get(2), BigUint::from(3u32));
        assert_eq!(dual.total(), BigUint::from(4u32));

        // full space [n, n] -> zero code
        let full = brute_force_spectrum(
            &LinearCode::new(Matrix::identity(2, 3)).unwrap(),
            24,
            1,
        )
        .unwrap();
        let dual = macwilliams(&full, 3, 3, 2).unwrap();
        assert_eq!(dual.total(), BigUint::from(1u32));
        assert_eq!(dual.get(0), BigUint::from(1u32));

        // square cocycle [4,3] -> dual [4,1] {1, y^4}
        let spec = WeightSpectrum::from_counts_u64(&[1, 0, 6, 0, 1]);
        let dual = macwilliams(&spec, 4, 3, 2).unwrap();
        assert_eq!(dual.get(0), BigUint::from(1u32));
        assert_eq!(dual.get(4), BigUint::from(1u32));
        assert_eq!(dual.total(), BigUint::from(2u32));
    }

    #[test]
    fn macwilliams_matches_brute_force_dual() {
        for q in [2u64, 3, 5] {
            for code in [
                LinearCode::new(Matrix::from_rows(q, vec![vec![1, 1, 1, 0], vec![0, 1, 2 % q, 1]]))
                    .unwrap(),
                LinearCode::new(Matrix::from_rows(q, vec![vec![1, 0, 1, 1, 1]])).unwrap(),
            ] {
                let primal = brute_force_spectrum(&code, 24, 1).unwrap();
                let dual = dual_code(&code);
                let dual_spec = brute_force_spectrum(&dual, 24, 1).unwrap();
                let transformed = macwilliams(&primal, code.n(), code.k(), q).unwrap();
                assert_eq!(transformed, dual_spec, "q={q}");
                // involution
                let back = macwilliams(&transformed, code.n(), dual.k(), q).unwrap();
                assert_eq!(back, primal, "q={q}");
            }
        }
    }

    #[test]
    fn macwilliams_rejects_inconsistent_input() {
        // claims 5 words of weight 1 in a [3,1] binary code: impossible
        let bogus = WeightSpectrum::from_counts_u64(&[1, 5, 0, 0]);
        assert!(matches!(
            macwilliams(&bogus, 3, 1, 2),
            Err(CodesError::NonIntegerCoefficient)
        ));
    }

    #[test]
    fn prop_n_bound_on_distinct_weights() {
        // at most N distinct nonzero weights, each class a multiple of n
        for (q, k, n) in [(2u64, 4usize, 5u64), (2, 3, 7), (3, 2, 4), (2, 6, 9), (5, 2, 8)] {
            let f = ExtensionField::new(q, k).unwrap();
            let p = CyclicCodeParams::new(n, f.clone()).unwrap();
            let mut words: Vec<Vec<u64>> = f.elements().map(|x| trace_codeword(&x, &p)).collect();
            words.sort();
            words.dedup();
            assert_eq!(words.len() as u128, f.size(), "non-degenerate");
            let mut by_weight: BTreeMap<usize, u64> = BTreeMap::new();
            for w in &words {
                let wt = w.iter().filter(|&&c| c != 0).count();
                *by_weight.entry(wt).or_default() += 1;
            }
            by_weight.remove(&0);
            assert!(by_weight.len() as u64 <= p.big_n(), "q={q} k={k} n={n}");
            for (&wt, &cnt) in &by_weight {
                assert_eq!(cnt % p.n(), 0, "weight {wt} class size {cnt} not multiple of n");
            }
        }
    }
}
