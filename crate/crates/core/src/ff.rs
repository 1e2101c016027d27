//! Exact arithmetic in GF(q) and GF(q^k) for prime q.
//!
//! Elements are dense coefficient vectors in the polynomial basis
//! {1, x, ..., x^{k-1}} of GF(q)[x] modulo a fixed monic irreducible
//! polynomial. Field construction is fully deterministic: the modulus is
//! the first monic irreducible of degree k (coefficient vectors ordered by
//! their base-q value, constant term least significant) and the generator
//! is the first element of multiplicative order q^k - 1 in the same order,
//! so two runs — or two implementations — build identical fields.
//!
//! Discrete logarithms use baby-step giant-step, O(sqrt(q^k)) time and
//! space: the desk-scale stand-in for a quantum discrete-log oracle.
//! Intended for q^k up to about 2^24.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::mat::pow_mod;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not a monic irreducible of the requested degree")]
    BadModulus,
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("discrete log of zero")]
    LogOfZero,
    #[error("element does not belong to this field")]
    FieldMismatch,
    #[error("field size {size} exceeds the configured cap of 2^{cap_bits}")]
    TooLarge { size: u128, cap_bits: u32 },
}

/// The prime field GF(q).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self, FfError> {
        if is_prime(q) {
            Ok(PrimeField { q })
        } else {
            Err(FfError::NotPrime(q))
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

/// Deterministic Miller-Rabin, exact for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

struct FieldInner {
    base: PrimeField,
    k: usize,
    /// Monic modulus, ascending degree, length k+1.
    modulus: Vec<u64>,
    /// Coefficients of the fixed primitive element.
    generator: Vec<u64>,
    /// q^k.
    size: u128,
    /// Prime factors of q^k - 1, for order checks.
    order_factors: Vec<u64>,
}

/// The extension field GF(q^k), cheap to clone and share across threads.
#[derive(Clone)]
pub struct ExtensionField {
    inner: Arc<FieldInner>,
}

impl std::fmt::Debug for ExtensionField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GF({}^{}) mod {:?}",
            self.inner.base.q(),
            self.inner.k,
            self.inner.modulus
        )
    }
}

/// An element of an [`ExtensionField`], carrying a handle to its parent.
#[derive(Clone)]
pub struct FieldElement {
    field: ExtensionField,
    coeffs: Vec<u64>,
}

impl ExtensionField {
    /// GF(q^k) with the deterministic modulus and generator choices.
    pub fn new(q: u64, k: usize) -> Result<Self, FfError> {
        let base = PrimeField::new(q)?;
        assert!(k >= 1, "extension degree must be positive");
        let modulus = first_irreducible(q, k);
        Self::build(base, k, modulus)
    }

    /// GF(q^k) with a caller-supplied monic irreducible modulus
    /// (ascending-degree coefficients, length k+1).
    pub fn with_modulus(q: u64, modulus: Vec<u64>) -> Result<Self, FfError> {
        let base = PrimeField::new(q)?;
        if modulus.len() < 2 {
            return Err(FfError::BadModulus);
        }
        let k = modulus.len() - 1;
        let modulus: Vec<u64> = modulus.iter().map(|&c| c % q).collect();
        if modulus[k] != 1 || !is_irreducible(&modulus, q) {
            return Err(FfError::BadModulus);
        }
        Self::build(base, k, modulus)
    }

    fn build(base: PrimeField, k: usize, modulus: Vec<u64>) -> Result<Self, FfError> {
        let q = base.q();
        let size = (q as u128).pow(k as u32);
        let group_order = size - 1;
        let order_factors = prime_factors_u128(group_order);
        let mut inner = FieldInner {
            base,
            k,
            modulus,
            generator: vec![0; k],
            size,
            order_factors,
        };
        inner.generator = find_primitive_coeffs(&inner);
        Ok(ExtensionField { inner: Arc::new(inner) })
    }

    pub fn q(&self) -> u64 {
        self.inner.base.q()
    }

    pub fn base(&self) -> PrimeField {
        self.inner.base
    }

    pub fn degree(&self) -> usize {
        self.inner.k
    }

    /// q^k.
    pub fn size(&self) -> u128 {
        self.inner.size
    }

    /// Order of the multiplicative group, q^k - 1.
    pub fn group_order(&self) -> u128 {
        self.inner.size - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), coeffs: vec![0; self.inner.k] }
    }

    pub fn one(&self) -> FieldElement {
        self.base_element(1)
    }

    /// Embeds a base-field value.
    pub fn base_element(&self, c: u64) -> FieldElement {
        let mut coeffs = vec![0; self.inner.k];
        coeffs[0] = c % self.q();
        FieldElement { field: self.clone(), coeffs }
    }

    /// Element from coefficients (constant term first); shorter vectors are
    /// zero-padded, entries reduced mod q.
    pub fn element(&self, coeffs: &[u64]) -> FieldElement {
        assert!(coeffs.len() <= self.inner.k, "too many coefficients");
        let mut v = vec![0; self.inner.k];
        for (i, &c) in coeffs.iter().enumerate() {
            v[i] = c % self.q();
        }
        FieldElement { field: self.clone(), coeffs: v }
    }

    /// The element whose coefficient vector is the base-q digits of `idx`
    /// (constant term = least significant digit).
    pub fn from_index(&self, idx: u128) -> FieldElement {
        debug_assert!(idx < self.inner.size);
        let q = self.q() as u128;
        let mut coeffs = vec![0; self.inner.k];
        let mut m = idx;
        for c in coeffs.iter_mut() {
            *c = (m % q) as u64;
            m /= q;
        }
        FieldElement { field: self.clone(), coeffs }
    }

    /// Inverse of [`from_index`](Self::from_index).
    pub fn index_of(&self, x: &FieldElement) -> u128 {
        let q = self.q() as u128;
        x.coeffs.iter().rev().fold(0u128, |acc, &c| acc * q + c as u128)
    }

    /// The fixed primitive element g.
    pub fn generator(&self) -> FieldElement {
        FieldElement { field: self.clone(), coeffs: self.inner.generator.clone() }
    }

    fn same_field(&self, x: &FieldElement) -> bool {
        Arc::ptr_eq(&self.inner, &x.field.inner)
            || (self.inner.k == x.field.inner.k && self.inner.modulus == x.field.inner.modulus)
    }

    pub fn check_member(&self, x: &FieldElement) -> Result<(), FfError> {
        if self.same_field(x) {
            Ok(())
        } else {
            Err(FfError::FieldMismatch)
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        assert!(self.same_field(a) && self.same_field(b), "field mismatch");
        let q = self.q();
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + y) % q).collect();
        FieldElement { field: self.clone(), coeffs }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        assert!(self.same_field(a) && self.same_field(b), "field mismatch");
        let q = self.q();
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + q - y) % q).collect();
        FieldElement { field: self.clone(), coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        assert!(self.same_field(a), "field mismatch");
        let q = self.q();
        let coeffs = a.coeffs.iter().map(|&x| (q - x) % q).collect();
        FieldElement { field: self.clone(), coeffs }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        assert!(self.same_field(a) && self.same_field(b), "field mismatch");
        let coeffs = poly_mulmod(&a.coeffs, &b.coeffs, &self.inner.modulus, self.q());
        FieldElement { field: self.clone(), coeffs }
    }

    /// Scalar multiple by a base-field constant.
    pub fn scale(&self, a: &FieldElement, c: u64) -> FieldElement {
        assert!(self.same_field(a), "field mismatch");
        let q = self.q();
        let c = c % q;
        let coeffs = a.coeffs.iter().map(|&x| x * c % q).collect();
        FieldElement { field: self.clone(), coeffs }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u128) -> FieldElement {
        assert!(self.same_field(a), "field mismatch");
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self, a: &FieldElement) -> Result<FieldElement, FfError> {
        assert!(self.same_field(a), "field mismatch");
        if a.is_zero() {
            return Err(FfError::InverseOfZero);
        }
        // a^(q^k - 2)
        Ok(self.pow(a, self.inner.size - 2))
    }

    /// Tr(x) = sum of x^(q^j) for j = 0..k-1; always lands in GF(q).
    pub fn trace(&self, x: &FieldElement) -> u64 {
        assert!(self.same_field(x), "field mismatch");
        let q = self.q();
        let mut frob = x.clone();
        let mut acc = x.clone();
        for _ in 1..self.inner.k {
            frob = self.pow(&frob, q as u128);
            acc = self.add(&acc, &frob);
        }
        debug_assert!(
            acc.coeffs[1..].iter().all(|&c| c == 0),
            "trace left the base field"
        );
        acc.coeffs[0]
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: &FieldElement) -> u128 {
        assert!(!x.is_zero());
        let n = self.group_order();
        let mut order = n;
        for &p in &self.inner.order_factors {
            while order.is_multiple_of(p as u128) && self.pow(x, order / p as u128).is_one() {
                order /= p as u128;
            }
        }
        order
    }

    /// log_g(x) for the fixed field generator g, by baby-step giant-step.
    pub fn discrete_log(&self, x: &FieldElement) -> Result<u128, FfError> {
        self.discrete_log_base(x, &self.generator())
    }

    /// log_base(x) where `base` must be primitive.
    pub fn discrete_log_base(
        &self,
        x: &FieldElement,
        base: &FieldElement,
    ) -> Result<u128, FfError> {
        let table = self.bsgs_table(base)?;
        self.discrete_log_with_table(x, &table)
    }

    /// Precomputes the baby-step table once for a batch of logs.
    pub fn bsgs_table(&self, base: &FieldElement) -> Result<BsgsTable, FfError> {
        assert!(self.same_field(base), "field mismatch");
        let order = self.group_order();
        if order >> 48 != 0 {
            return Err(FfError::TooLarge { size: self.inner.size, cap_bits: 48 });
        }
        let m = (order as f64).sqrt().ceil() as u128;
        let mut baby = HashMap::with_capacity(m as usize);
        let mut cur = self.one();
        for j in 0..m {
            baby.entry(self.index_of(&cur)).or_insert(j);
            cur = self.mul(&cur, base);
        }
        // base^(-m) = base^(order - m)
        let giant_step = self.pow(base, order - m);
        Ok(BsgsTable { baby, giant_step, m, order })
    }

    pub fn discrete_log_with_table(
        &self,
        x: &FieldElement,
        table: &BsgsTable,
    ) -> Result<u128, FfError> {
        assert!(self.same_field(x), "field mismatch");
        if x.is_zero() {
            return Err(FfError::LogOfZero);
        }
        let mut y = x.clone();
        let mut i = 0u128;
        while i * table.m <= table.order {
            if let Some(&j) = table.baby.get(&self.index_of(&y)) {
                return Ok((i * table.m + j) % table.order);
            }
            y = self.mul(&y, &table.giant_step);
            i += 1;
        }
        unreachable!("generator is primitive, every nonzero element has a log");
    }

    /// All q^k elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.inner.size).map(move |i| self.from_index(i))
    }

    /// Allocation-free product on raw coefficient slices: out = a * b mod
    /// the field modulus. `scratch` needs at least 2k - 1 slots. The hot
    /// path for long elementwise sweeps (Gauss sums, codeword walks).
    pub fn mul_into(&self, a: &[u64], b: &[u64], scratch: &mut [u64], out: &mut [u64]) {
        let q = self.q();
        let k = self.inner.k;
        let m = &self.inner.modulus;
        debug_assert!(a.len() == k && b.len() == k && out.len() == k);
        let width = 2 * k - 1;
        for s in scratch[..width].iter_mut() {
            *s = 0;
        }
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    let cell = &mut scratch[i + j];
                    *cell = (*cell + x * y) % q;
                }
            }
        }
        for deg in (k..width).rev() {
            let lead = scratch[deg];
            if lead != 0 {
                let base = deg - k;
                for (t, &mc) in m[..k].iter().enumerate() {
                    if mc != 0 {
                        let cell = &mut scratch[base + t];
                        *cell = (*cell + (q - lead) * mc) % q;
                    }
                }
                scratch[deg] = 0;
            }
        }
        out.copy_from_slice(&scratch[..k]);
    }

    /// The linear functional x -> Tr(beta * x) as a coefficient row:
    /// ell[t] = Tr(beta * x^t), so Tr(beta * v) = sum ell[t] v[t] mod q.
    pub fn trace_functional(&self, beta: &FieldElement) -> Vec<u64> {
        assert!(self.same_field(beta), "field mismatch");
        let k = self.inner.k;
        let mut ell = Vec::with_capacity(k);
        if k == 1 {
            ell.push(beta.coeffs[0]);
            return ell;
        }
        let mut basis_x = vec![0u64; k];
        basis_x[1] = 1;
        let x = self.element(&basis_x);
        let mut bt = beta.clone();
        for _ in 0..k {
            ell.push(self.trace(&bt));
            bt = self.mul(&bt, &x);
        }
        ell
    }
}

/// Baby-step table for repeated discrete logs with a fixed base.
pub struct BsgsTable {
    baby: HashMap<u128, u128>,
    giant_step: FieldElement,
    m: u128,
    order: u128,
}

impl FieldElement {
    pub fn field(&self) -> &ExtensionField {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(other) && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl std::fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldElement({:?} mod GF({}^{}))", self.coeffs, self.field.q(), self.field.degree())
    }
}

impl std::ops::Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.field.add(self, rhs)
    }
}

impl std::ops::Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.field.sub(self, rhs)
    }
}

impl std::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.field.mul(self, rhs)
    }
}

// ---- polynomial helpers over GF(q), ascending-degree coefficient slices ----

fn poly_trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    debug_assert_eq!(m[dm], 1, "modulus must be monic");
    if dm == 0 {
        return vec![0]; // anything mod a unit is zero
    }
    let mut r: Vec<u64> = a.iter().map(|&c| c % q).collect();
    poly_trim(&mut r);
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = (r.len() - 1) - dm;
        for i in 0..=dm {
            r[shift + i] = (r[shift + i] + (q - lead) * m[i]) % q;
        }
        debug_assert_eq!(*r.last().unwrap(), 0);
        r.pop();
        poly_trim(&mut r);
    }
    r
}

/// (a * b) mod m, fixed width k = deg m.
fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    let k = m.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                prod[i + j] = (prod[i + j] + x * y) % q;
            }
        }
    }
    let r = poly_rem(&prod, m, q);
    let mut out = vec![0; k.max(1)];
    for (i, &c) in r.iter().enumerate() {
        if i < out.len() {
            out[i] = c;
        }
    }
    out
}

fn poly_gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        // make y monic so poly_rem applies
        let inv = pow_mod(*y.last().unwrap(), q - 2, q);
        let monic: Vec<u64> = y.iter().map(|&c| c * inv % q).collect();
        let r = poly_rem(&x, &monic, q);
        x = y;
        y = r;
        poly_trim(&mut y);
    }
    x
}

/// x^(q^i) mod f via iterated Frobenius; requires deg f >= 2.
fn frobenius_power(i: usize, f: &[u64], q: u64) -> Vec<u64> {
    let k = f.len() - 1;
    debug_assert!(k >= 2);
    let mut cur = vec![0u64; k];
    cur[1] = 1;
    for _ in 0..i {
        cur = poly_powmod_small(&cur, q, f, q);
    }
    cur
}

/// a^e mod f for small e (binary exponentiation).
fn poly_powmod_small(a: &[u64], mut e: u64, f: &[u64], q: u64) -> Vec<u64> {
    let k = f.len() - 1;
    let mut acc = vec![0u64; k.max(1)];
    acc[0] = 1;
    let mut b = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, f, q);
        }
        b = poly_mulmod(&b, &b, f, q);
        e >>= 1;
    }
    acc
}

/// A monic f of degree k >= 1 is irreducible over GF(q) iff it has no
/// irreducible factor of degree <= k/2, i.e. gcd(f, x^(q^i) - x) is
/// constant for i = 1..k/2.
fn is_irreducible(f: &[u64], q: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    for i in 1..=k / 2 {
        let xqi = frobenius_power(i, f, q);
        // x^(q^i) - x
        let mut diff = xqi;
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + q - 1) % q;
        let g = poly_gcd(f, &diff, q);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// First monic irreducible of degree k, non-leading coefficient vectors
/// ordered by base-q value (constant term = least significant digit).
fn first_irreducible(q: u64, k: usize) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1]; // x itself: GF(q)[x]/(x) = GF(q)
    }
    let total = (q as u128).pow(k as u32);
    for m in 0..total {
        let mut f = vec![0u64; k + 1];
        let mut v = m;
        for c in f.iter_mut().take(k) {
            *c = (v % q as u128) as u64;
            v /= q as u128;
        }
        f[k] = 1;
        if is_irreducible(&f, q) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist");
}

fn find_primitive_coeffs(inner: &FieldInner) -> Vec<u64> {
    let q = inner.base.q();
    let order = inner.size - 1;
    let mut idx: u128 = 1;
    loop {
        let mut coeffs = vec![0u64; inner.k];
        let mut m = idx;
        for c in coeffs.iter_mut() {
            *c = (m % q as u128) as u64;
            m /= q as u128;
        }
        if is_primitive_raw(&coeffs, inner, order) {
            return coeffs;
        }
        idx += 1;
        debug_assert!(idx < inner.size, "no primitive element found");
    }
}

fn is_primitive_raw(coeffs: &[u64], inner: &FieldInner, order: u128) -> bool {
    if coeffs.iter().all(|&c| c == 0) {
        return false;
    }
    for &p in &inner.order_factors {
        let e = order / p as u128;
        if raw_pow_is_one(coeffs, e, inner) {
            return false;
        }
    }
    true
}

fn raw_pow_is_one(coeffs: &[u64], mut e: u128, inner: &FieldInner) -> bool {
    let q = inner.base.q();
    let mut acc = vec![0u64; inner.k.max(1)];
    acc[0] = 1;
    let mut b = coeffs.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, &inner.modulus, q);
        }
        b = poly_mulmod(&b, &b, &inner.modulus, q);
        e >>= 1;
    }
    acc[0] == 1 && acc[1..].iter().all(|&c| c == 0)
}

fn prime_factors_u128(mut n: u128) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p: u128 = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p as u64);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n as u64);
    }
    out
}
