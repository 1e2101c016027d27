//! Characters of GF(q^k), exact Gauss sums by direct summation, and a
//! seeded eps-noisy phase oracle standing in for a quantum phase estimator.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::ff::{ExtensionField, FieldElement};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaussError {
    #[error("character order {0} does not divide the group order")]
    BadOrder(u64),
    #[error("character index {index} out of range for order {order}")]
    BadIndex { index: u64, order: u64 },
    #[error("Gauss sum of the trivial character is not of magnitude sqrt(q^k)")]
    TrivialCharacter,
    #[error("field size {size} exceeds the summation cap of 2^{cap_bits}")]
    TooLarge { size: u128, cap_bits: u32 },
    #[error("additive parameter lives in a different field")]
    FieldMismatch,
}

/// A multiplicative character chi-bar^a of order d, paired with the additive
/// character parameter beta. chi-bar sends the field generator to
/// exp(2*pi*i/d), so chi-bar^a(g^m) = exp(2*pi*i*a*m/d).
#[derive(Clone, Debug)]
pub struct CharacterSpec {
    field: ExtensionField,
    order: u64,
    index: u64,
    additive_param: FieldElement,
}

impl CharacterSpec {
    pub fn new(
        field: ExtensionField,
        order: u64,
        index: u64,
        additive_param: FieldElement,
    ) -> Result<Self, GaussError> {
        if order == 0 || !field.group_order().is_multiple_of(order as u128) {
            return Err(GaussError::BadOrder(order));
        }
        if index >= order {
            return Err(GaussError::BadIndex { index, order });
        }
        field
            .check_member(&additive_param)
            .map_err(|_| GaussError::FieldMismatch)?;
        Ok(CharacterSpec { field, order, index, additive_param })
    }

    /// The character of order d with index a and beta = 1, as used in the
    /// weight formula.
    pub fn weight_formula_char(
        field: ExtensionField,
        d: u64,
        a: u64,
    ) -> Result<Self, GaussError> {
        let one = field.one();
        Self::new(field, d, a, one)
    }

    pub fn field(&self) -> &ExtensionField {
        &self.field
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn additive_param(&self) -> &FieldElement {
        &self.additive_param
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1 || self.index == 0
    }

    /// chi(x) = exp(2*pi*i * a * log_g(x) / d); chi(0) = 0.
    pub fn eval_mult(&self, x: &FieldElement) -> Complex64 {
        if x.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let log = self.field.discrete_log(x).expect("nonzero");
        let r = (self.index as u128 * (log % self.order as u128)) % self.order as u128;
        unit_phase(2.0 * PI * r as f64 / self.order as f64)
    }

    /// e_beta(x) = exp(2*pi*i * Tr(beta * x) / q).
    pub fn eval_add(&self, x: &FieldElement) -> Complex64 {
        char_eval_add(&self.field, &self.additive_param, x)
    }
}

/// The additive character e_beta(x) = exp(2*pi*i * Tr(beta*x)/q).
pub fn char_eval_add(
    field: &ExtensionField,
    beta: &FieldElement,
    x: &FieldElement,
) -> Complex64 {
    let t = field.trace(&field.mul(beta, x));
    unit_phase(2.0 * PI * t as f64 / field.q() as f64)
}

fn unit_phase(theta: f64) -> Complex64 {
    Complex64::new(theta.cos(), theta.sin())
}

/// An exact Gauss sum: magnitude sqrt(q^k) and phase in [0, 2*pi).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussSum {
    pub magnitude: f64,
    pub phase: f64,
}

/// G(chi, beta) = sum over nonzero x of chi(x) e_beta(x), by direct
/// summation with compensated (Kahan) accumulation.
///
/// Walks x through powers of the generator, so no discrete logs are taken:
/// the multiplicative phase advances by a/d per step and the additive part
/// needs one trace per step.
pub fn gauss_sum_exact(spec: &CharacterSpec, cap_bits: u32) -> Result<GaussSum, GaussError> {
    // beta = 0 makes the additive character trivial and the sum collapses
    // to 0, not sqrt(q^k)
    if spec.is_trivial() || spec.additive_param.is_zero() {
        return Err(GaussError::TrivialCharacter);
    }
    let field = &spec.field;
    let size = field.size();
    if size > 1u128 << cap_bits {
        return Err(GaussError::TooLarge { size, cap_bits });
    }
    let q = field.q();
    let d = spec.order;
    let a = spec.index;

    // precomputed roots of unity
    let mult_roots: Vec<Complex64> = (0..d)
        .map(|r| unit_phase(2.0 * PI * r as f64 / d as f64))
        .collect();
    let add_roots: Vec<Complex64> = (0..q)
        .map(|t| unit_phase(2.0 * PI * t as f64 / q as f64))
        .collect();

    let mut re = Kahan::default();
    let mut im = Kahan::default();
    let mut r = 0u64; // a*m mod d
    if field.degree() == 1 {
        // prime-field fast path: plain modular arithmetic, no coefficient vectors
        let g0 = field.generator().coeffs()[0];
        let beta0 = spec.additive_param.coeffs()[0];
        let mut x = 1u64;
        for _ in 0..field.group_order() {
            let t = beta0 * x % q;
            let term = mult_roots[r as usize] * add_roots[t as usize];
            re.add(term.re);
            im.add(term.im);
            x = x * g0 % q;
            r = (r + a) % d;
        }
    } else {
        // extension-field path: raw coefficient walk x <- x*g with the
        // additive character evaluated through the trace functional of beta
        let k = field.degree();
        let ell = field.trace_functional(&spec.additive_param);
        let g: Vec<u64> = field.generator().coeffs().to_vec();
        let mut cur = vec![0u64; k];
        cur[0] = 1;
        let mut next = vec![0u64; k];
        let mut scratch = vec![0u64; 2 * k];
        for _ in 0..field.group_order() {
            let mut t = 0u64;
            for (l, c) in ell.iter().zip(&cur) {
                t += l * c;
            }
            let term = mult_roots[r as usize] * add_roots[(t % q) as usize];
            re.add(term.re);
            im.add(term.im);
            field.mul_into(&cur, &g, &mut scratch, &mut next);
            std::mem::swap(&mut cur, &mut next);
            r = (r + a) % d;
        }
    }
    let sum = Complex64::new(re.total(), im.total());
    let magnitude = sum.norm();
    let expected = (size as f64).sqrt();
    assert!(
        (magnitude - expected).abs() < 1e-6 * expected,
        "Gauss sum magnitude {magnitude} deviates from sqrt(q^k) = {expected}"
    );
    let mut phase = sum.arg();
    if phase < 0.0 {
        phase += 2.0 * PI;
    }
    Ok(GaussSum { magnitude, phase })
}

#[derive(Default)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum
    }
}

/// One oracle answer: the exact phase, a noisy estimate within eps (unless
/// the run failed), and the bookkeeping to reproduce it.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussPhase {
    pub exact_phase: f64,
    pub magnitude: f64,
    pub noisy_phase: f64,
    pub epsilon: f64,
    pub failed: bool,
}

/// Failure probability of the modeled phase estimator,
/// delta = 1 / (2 (q^k - 1)^2 eps - 2), clamped to [0, 1/2].
pub fn failure_probability(epsilon: f64, field_size: u128) -> f64 {
    let n = (field_size - 1) as f64;
    let denom = 2.0 * n * n * epsilon - 2.0;
    (1.0 / denom).clamp(0.0, 0.5)
}

/// Evaluates the exact phase, then perturbs it: gamma-noisy = gamma + u with
/// u uniform on (-eps, eps). With `inject_failures`, the run independently
/// fails with probability delta(eps, q^k) and returns a uniformly random
/// phase instead. Fully deterministic for a given seed.
pub fn gauss_phase_oracle(
    spec: &CharacterSpec,
    epsilon: f64,
    seed: u64,
    inject_failures: bool,
    cap_bits: u32,
) -> Result<GaussPhase, GaussError> {
    let exact = gauss_sum_exact(spec, cap_bits)?;
    Ok(perturb_phase(&exact, spec.field.size(), epsilon, seed, inject_failures))
}

/// The noise half of the oracle, split out so repeated seeded runs can
/// reuse one exact evaluation.
pub fn perturb_phase(
    exact: &GaussSum,
    field_size: u128,
    epsilon: f64,
    seed: u64,
    inject_failures: bool,
) -> GaussPhase {
    assert!(epsilon > 0.0, "epsilon must be positive");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let noise: f64 = rng.gen_range(-epsilon..epsilon);
    let failed = if inject_failures {
        let delta = failure_probability(epsilon, field_size);
        rng.gen_range(0.0..1.0) < delta
    } else {
        false
    };
    let noisy_phase = if failed {
        rng.gen_range(0.0..2.0 * PI)
    } else {
        exact.phase + noise
    };
    GaussPhase {
        exact_phase: exact.phase,
        magnitude: exact.magnitude,
        noisy_phase,
        epsilon,
        failed,
    }
}

/// The d-1 oracle phases for chi-bar^a, a = 1..d-1, with beta = 1. Each
/// call gets its own seed derived from the base seed and the index, so the
/// batch is reproducible and the phases are independent.
pub fn oracle_phases(
    field: &ExtensionField,
    d: u64,
    epsilon: f64,
    seed: u64,
    inject_failures: bool,
    cap_bits: u32,
) -> Result<Vec<GaussPhase>, GaussError> {
    (1..d)
        .map(|a| {
            let spec = CharacterSpec::weight_formula_char(field.clone(), d, a)?;
            gauss_phase_oracle(&spec, epsilon, derive_seed(seed, a), inject_failures, cap_bits)
        })
        .collect()
}

/// The same d-1 phases with zero noise (exact evaluation path).
pub fn exact_phases(
    field: &ExtensionField,
    d: u64,
    cap_bits: u32,
) -> Result<Vec<GaussPhase>, GaussError> {
    (1..d)
        .map(|a| {
            let spec = CharacterSpec::weight_formula_char(field.clone(), d, a)?;
            let exact = gauss_sum_exact(&spec, cap_bits)?;
            Ok(GaussPhase {
                exact_phase: exact.phase,
                magnitude: exact.magnitude,
                noisy_phase: exact.phase,
                epsilon: 0.0,
                failed: false,
            })
        })
        .collect()
}

pub fn derive_seed(base: u64, index: u64) -> u64 {
    base.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index)
}
