//! The weight-via-Gauss-sums engine: the digit-sum invariant theta, the
//! divisibility grid q^(theta-1), q-cyclotomic cosets and their count N_C,
//! the per-class weight S(i), and weight-spectrum assembly.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Integer;
use thiserror::Error;

use crate::codes::{multiplicative_order, CyclicCodeParams, WeightSpectrum};
use crate::gauss::GaussPhase;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum McelieceError {
    #[error("parameters are inconsistent: n must divide q^k - 1")]
    InconsistentParams,
    #[error("gcd({n}, {q}) != 1: cyclotomic cosets need a coprime multiplier")]
    NotCoprime { n: u64, q: u64 },
    #[error("scan of {0} digit sums exceeds the 10^7 ceiling for theta")]
    ThetaScanTooLarge(u64),
    #[error("imaginary residue {residue:.3e} exceeds the model bound {bound:.3e}")]
    ImaginaryResidue { residue: f64, bound: f64 },
    #[error("raw weight {raw} is not within q^(theta-1)/2 = {half_grid} of a grid point")]
    AmbiguousRounding { raw: f64, half_grid: f64 },
    #[error("assembled spectrum is inconsistent: {0}")]
    CountMismatch(String),
    #[error("expected {expected} oracle phases, got {got}")]
    PhaseCountMismatch { expected: usize, got: usize },
}

/// The digit-sum invariant theta and the noise budget eps0 derived from it.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaParams {
    pub n: u64,
    pub k: u32,
    pub q: u64,
    /// theta = max(1, floor((1/(q-1)) min over 0 < j <= N of digitsum_q(j*n))).
    pub theta: u32,
    /// eps0 = q^(theta - 1 - k/2) / 4.
    pub epsilon0: f64,
}

impl ThetaParams {
    /// The rounding grid q^(theta - 1).
    pub fn grid(&self) -> f64 {
        (self.q as f64).powi(self.theta as i32 - 1)
    }

    pub fn grid_int(&self) -> u64 {
        self.q.pow(self.theta - 1)
    }
}

/// Sum of the base-q digits.
fn digit_sum(mut x: u128, q: u64) -> u64 {
    let q = q as u128;
    let mut s = 0u64;
    while x > 0 {
        s += (x % q) as u64;
        x /= q;
    }
    s
}

/// Computes theta by scanning the digit sums of j*n for 0 < j <= N, where
/// N = (q^k - 1)/n. The minimum ratio min S'(jn)/(q-1) can be fractional;
/// the integer grid exponent is its floor, clamped to at least 1 (grid 1 is
/// always sound since weights are integers).
pub fn compute_theta(n: u64, k: u32, q: u64) -> Result<ThetaParams, McelieceError> {
    let order = (q as u128).pow(k) - 1;
    if n == 0 || !order.is_multiple_of(n as u128) {
        return Err(McelieceError::InconsistentParams);
    }
    let big_n = (order / n as u128) as u64;
    if big_n > 10_000_000 {
        return Err(McelieceError::ThetaScanTooLarge(big_n));
    }
    let mut min_sum = u64::MAX;
    for j in 1..=big_n {
        min_sum = min_sum.min(digit_sum(j as u128 * n as u128, q));
    }
    let theta = (min_sum / (q - 1)).max(1) as u32;
    let epsilon0 = (q as f64).powi(theta as i32 - 1) / (4.0 * ((q as f64).powi(k as i32)).sqrt());
    Ok(ThetaParams { n, k, q, theta, epsilon0 })
}

/// The q-cyclotomic cosets of {0, ..., N-1}: orbits of x -> q*x mod N.
/// Each coset is sorted ascending; cosets are ordered by representative
/// (their smallest member).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetPartition {
    pub modulus: u64,
    pub multiplier: u64,
    pub cosets: Vec<Vec<u64>>,
}

impl CosetPartition {
    pub fn count(&self) -> usize {
        self.cosets.len()
    }

    pub fn representatives(&self) -> impl Iterator<Item = u64> + '_ {
        self.cosets.iter().map(|c| c[0])
    }

    pub fn multiplicities(&self) -> impl Iterator<Item = u64> + '_ {
        self.cosets.iter().map(|c| c.len() as u64)
    }
}

/// O(N) marking pass. Requires gcd(N, q) = 1 so the orbits partition the set.
pub fn cyclotomic_cosets(n_mod: u64, q: u64) -> Result<CosetPartition, McelieceError> {
    if n_mod == 0 || q.gcd(&n_mod) != 1 {
        return Err(McelieceError::NotCoprime { n: n_mod, q });
    }
    let mut seen = vec![false; n_mod as usize];
    let mut cosets = Vec::new();
    for start in 0..n_mod {
        if seen[start as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut x = start;
        loop {
            seen[x as usize] = true;
            orbit.push(x);
            x = (x as u128 * q as u128 % n_mod as u128) as u64;
            if x == start {
                break;
            }
        }
        orbit.sort_unstable();
        cosets.push(orbit);
    }
    Ok(CosetPartition { modulus: n_mod, multiplier: q, cosets })
}

/// N_C = sum over divisors f of N of phi(f)/ord_q(f), without enumerating
/// the cosets themselves.
pub fn coset_count_formula(n_mod: u64, q: u64) -> Result<u64, McelieceError> {
    if n_mod == 0 || q.gcd(&n_mod) != 1 {
        return Err(McelieceError::NotCoprime { n: n_mod, q });
    }
    let mut total = 0u64;
    for f in divisors(n_mod) {
        let phi = euler_phi(f);
        let ord = multiplicative_order(q, f).expect("divisor of N is coprime to q");
        debug_assert_eq!(phi % ord, 0);
        total += phi / ord;
    }
    Ok(total)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The weight of the cyclic equivalence class of g^i:
///
///   S(i) = q^k (q-1)/(qN) - (q-1)/(qN) sum over a of
///          exp(-2 pi i a i / d) * sqrt(q^k) * exp(i gamma_a)
///
/// using the supplied d-1 oracle phases (the same phases serve every i).
/// Returns the real part; the imaginary residue must stay within what the
/// noise model permits, else the phases are corrupted beyond the model.
pub fn mceliece_weight(
    i: u64,
    phases: &[GaussPhase],
    params: &CyclicCodeParams,
) -> Result<f64, McelieceError> {
    let d = params.d();
    if phases.len() + 1 != d as usize {
        return Err(McelieceError::PhaseCountMismatch {
            expected: d as usize - 1,
            got: phases.len(),
        });
    }
    let q = params.q() as f64;
    let big_n = params.big_n() as f64;
    let qk = params.field().size() as f64;
    let sqrt_qk = qk.sqrt();
    let main = qk * (q - 1.0) / (q * big_n);

    let mut sum = Complex64::new(0.0, 0.0);
    let mut noise_budget = 0.0f64;
    for (idx, phase) in phases.iter().enumerate() {
        let a = (idx + 1) as u64;
        let chi_angle = -2.0 * PI * ((a as u128 * i as u128 % d as u128) as f64) / d as f64;
        let chi = Complex64::new(chi_angle.cos(), chi_angle.sin());
        let g = Complex64::new(phase.noisy_phase.cos(), phase.noisy_phase.sin()) * sqrt_qk;
        sum += chi * g;
        noise_budget += phase.epsilon.min(2.0);
    }
    let value = main - (q - 1.0) / (q * big_n) * sum.re;
    let residue = ((q - 1.0) / (q * big_n) * sum.im).abs();
    let bound = (q - 1.0) / (q * big_n) * sqrt_qk * noise_budget + 1e-6 * sqrt_qk;
    if residue > bound {
        return Err(McelieceError::ImaginaryResidue { residue, bound });
    }
    Ok(value)
}

/// Rounds a raw weight to the nearest multiple of the grid q^(theta-1).
/// The distance must be strictly under half a grid step; anything at or
/// beyond the midpoint means eps exceeded its budget (or the instance was
/// never a member) and is refused rather than guessed.
pub fn round_weight(raw: f64, theta: &ThetaParams) -> Result<i64, McelieceError> {
    round_weight_windowed(raw, theta, theta.grid() / 2.0)
}

/// Rounding with an explicit tolerance window around grid points.
///
/// Within the membership guarantee, eps <= eps0 keeps every raw weight
/// inside the model's deviation bound around its true grid point; the
/// pipeline passes that bound here so a value drifting beyond it is
/// refused as evidence of an over-budget eps or a non-member, instead of
/// being silently snapped to the nearest (possibly wrong) multiple.
pub fn round_weight_windowed(
    raw: f64,
    theta: &ThetaParams,
    window: f64,
) -> Result<i64, McelieceError> {
    let grid = theta.grid();
    let window = window.min(grid / 2.0);
    let m = (raw / grid).round();
    let dist = (raw - m * grid).abs();
    if dist < window {
        Ok((m * grid) as i64)
    } else {
        Err(McelieceError::AmbiguousRounding { raw, half_grid: window })
    }
}

/// The largest deviation the noise model permits for a raw weight when all
/// d-1 phases are within eps of the truth:
/// (q-1)/(qN) * sqrt(q^k) * sum of min(2, eps), plus float slack.
pub fn weight_deviation_bound(params: &CyclicCodeParams, epsilon: f64) -> f64 {
    let q = params.q() as f64;
    let sqrt_qk = (params.field().size() as f64).sqrt();
    let terms = (params.d() - 1) as f64;
    (q - 1.0) / (q * params.big_n() as f64) * sqrt_qk * terms * epsilon.min(2.0)
        + 1e-9 * sqrt_qk
}

#[derive(Clone, Debug)]
pub struct WeightEntry {
    pub representative: u64,
    pub raw: f64,
    pub rounded: i64,
    pub multiplicity: u64,
}

/// Per-coset weights: representative, raw S(b_i), rounded weight, and the
/// coset size v_i.
#[derive(Clone, Debug)]
pub struct WeightTable {
    pub entries: Vec<WeightEntry>,
}

/// Runs S(i) over one representative per q-cyclotomic coset of
/// {0..N-1} and rounds each value onto the divisibility grid, using the
/// instance's guaranteed window eps0 as the rounding tolerance.
pub fn weight_table(
    params: &CyclicCodeParams,
    phases: &[GaussPhase],
    theta: &ThetaParams,
) -> Result<WeightTable, McelieceError> {
    let window = weight_deviation_bound(params, theta.epsilon0);
    let cosets = cyclotomic_cosets(params.big_n(), params.q())?;
    let mut entries = Vec::with_capacity(cosets.count());
    for coset in &cosets.cosets {
        let rep = coset[0];
        let raw = mceliece_weight(rep, phases, params)?;
        let rounded = round_weight_windowed(raw, theta, window)?;
        entries.push(WeightEntry {
            representative: rep,
            raw,
            rounded,
            multiplicity: coset.len() as u64,
        });
    }
    Ok(WeightTable { entries })
}

/// Groups equal rounded weights, scales class counts by n (each class holds
/// n cyclic shifts), adds A_0 = 1, and checks the total against q^k.
pub fn assemble_spectrum(
    table: &WeightTable,
    params: &CyclicCodeParams,
) -> Result<WeightSpectrum, McelieceError> {
    let n = params.n();
    let qk = BigUint::from(params.q()).pow(params.k() as u32);
    let mut counts: BTreeMap<usize, BigUint> = BTreeMap::new();
    counts.insert(0, BigUint::from(1u32));
    for entry in &table.entries {
        if entry.rounded < 1 || entry.rounded > n as i64 {
            return Err(McelieceError::CountMismatch(format!(
                "rounded weight {} outside [1, {}]",
                entry.rounded, n
            )));
        }
        let w = entry.rounded as usize;
        *counts.entry(w).or_default() += BigUint::from(n) * BigUint::from(entry.multiplicity);
    }
    let spectrum = WeightSpectrum::from_map(counts);
    let total = spectrum.total();
    if total != qk {
        return Err(McelieceError::CountMismatch(format!(
            "coefficients sum to {total}, expected q^k = {qk}"
        )));
    }
    Ok(spectrum)
}
