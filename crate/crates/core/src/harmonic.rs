//! The additive character χ and exact Fourier transforms of step functions.
//!
//! `χ(x) = ω^a` with `ω = exp(2πi/p)` and `a` the ζ_0-coordinate of the
//! coefficient of `t^{-1}` in `x`. For a step function at resolution `k`
//! whose table covers `𝔅^ℓ`, the transform is constant on cosets of `𝔅^{-ℓ}`
//! and vanishes outside `𝔅^{-k}`, so it is again a table with the same span.
//! Cell `o` of the output pairs with cell `i` of the input through
//! `Σ_s pair(o_s, i_{m-1-s})` over base-q digits.

use num_complex::Complex64;

use crate::algebra::{FieldConfig, FieldElement, GfScalar};
use crate::exec::Exec;
use crate::stepfn::{PeriodicStepFunction, StepFunction};

pub fn chi(field: &FieldConfig, x: &FieldElement) -> Complex64 {
    let c = x.coeff(-1);
    field.root(field.pair_phase(GfScalar::ONE.0, c.0))
}

/// `χ(ξ·x)`.
pub fn chi_xi(field: &FieldConfig, xi: &FieldElement, x: &FieldElement) -> Complex64 {
    // only the t^{-1} coefficient of the product matters
    let mut phase = 0u32;
    for (e, a) in xi.terms() {
        let b = x.coeff(-1 - e);
        if !b.is_zero() {
            phase += field.pair_phase(a.0, b.0);
        }
    }
    field.root(phase)
}

fn digit_table(field: &FieldConfig, m: u32) -> Vec<Vec<u32>> {
    (0..field.pow_q(m)).map(|i| field.index_digits(i, m as usize)).collect()
}

fn naive(field: &FieldConfig, f: &StepFunction, sign: bool, exec: Exec) -> StepFunction {
    let q = field.q();
    let k = f.resolution();
    let m = f.span();
    let ell = f.support_exponent();
    let digits = digit_table(field, m);
    let p = field.p();
    let scale = (q as f64).powi(-k);
    let cells: Vec<(usize, Complex64)> = f.cells().map(|(i, v)| (i as usize, v)).collect();
    let values = exec.map_range(digits.len(), |o| {
        let od = &digits[o];
        let mut acc = Complex64::default();
        for &(i, v) in &cells {
            let id = &digits[i];
            let mut phase = 0u32;
            for s in 0..m as usize {
                phase += field.pair_phase(od[s], id[m as usize - 1 - s]);
            }
            let phase = phase % p;
            let phase = if sign { phase } else { (p - phase) % p };
            acc += v * field.root(phase);
        }
        acc * scale
    });
    StepFunction::from_values(q, -ell, values).expect("q^m entries")
}

/// `f̂(ξ) = ∫ f(x) χ̄(ξx) dx` by direct summation over cells, in ascending
/// cell order for every output cell.
pub fn transform(field: &FieldConfig, f: &StepFunction) -> StepFunction {
    transform_with(field, f, Exec::default())
}

pub fn transform_with(field: &FieldConfig, f: &StepFunction, exec: Exec) -> StepFunction {
    naive(field, f, false, exec)
}

/// `ǧ(x) = ∫ g(ξ) χ(ξx) dξ`, the inverse of [`transform`].
pub fn inverse_transform(field: &FieldConfig, g: &StepFunction) -> StepFunction {
    inverse_transform_with(field, g, Exec::default())
}

pub fn inverse_transform_with(field: &FieldConfig, g: &StepFunction, exec: Exec) -> StepFunction {
    naive(field, g, true, exec)
}

// Blocks smaller than this are grouped so that parallel tasks stay coarse.
const MIN_TASK: usize = 1 << 12;

fn butterfly(field: &FieldConfig, f: &StepFunction, sign: bool, exec: Exec) -> StepFunction {
    let q = field.q() as usize;
    let p = field.p();
    let k = f.resolution();
    let m = f.span();
    let ell = f.support_exponent();
    let kernel: Vec<Complex64> = (0..q * q)
        .map(|bd| {
            let ph = field.pair_phase((bd / q) as u32, (bd % q) as u32);
            field.root(if sign { ph } else { (p - ph) % p })
        })
        .collect();
    let mut data = f.values().to_vec();
    let n = data.len();
    let mut stride = 1usize;
    for _ in 0..m {
        let block = stride * q;
        let chunk = if block >= MIN_TASK { block } else { block * (MIN_TASK / block).max(1) }.min(n);
        let kernel = &kernel;
        exec.for_chunks_mut(&mut data, chunk, |ch| {
            let mut tmp = vec![Complex64::default(); q];
            for base in (0..ch.len()).step_by(block) {
                for off in 0..stride {
                    for (b, t) in tmp.iter_mut().enumerate() {
                        let mut acc = Complex64::default();
                        for d in 0..q {
                            acc += kernel[b * q + d] * ch[base + off + d * stride];
                        }
                        *t = acc;
                    }
                    for (b, t) in tmp.iter().enumerate() {
                        ch[base + off + b * stride] = *t;
                    }
                }
            }
        });
        stride = block;
    }
    // the tensor transform leaves output digit s at position m-1-s
    let scale = (q as f64).powi(-k);
    let qq = q as u64;
    let values = exec.map_range(n, |o| {
        let mut src = 0u64;
        let mut r = o as u64;
        for _ in 0..m {
            src = src * qq + r % qq;
            r /= qq;
        }
        data[src as usize] * scale
    });
    StepFunction::from_values(field.q(), -ell, values).expect("q^m entries")
}

/// Same sums as [`transform`] via a digit-by-digit Chrestenson butterfly,
/// `O(M·q·log_q M)` for `M` table entries.
pub fn fast_transform(field: &FieldConfig, f: &StepFunction) -> StepFunction {
    fast_transform_with(field, f, Exec::default())
}

pub fn fast_transform_with(field: &FieldConfig, f: &StepFunction, exec: Exec) -> StepFunction {
    butterfly(field, f, false, exec)
}

pub fn fast_inverse_transform(field: &FieldConfig, g: &StepFunction) -> StepFunction {
    fast_inverse_transform_with(field, g, Exec::default())
}

pub fn fast_inverse_transform_with(field: &FieldConfig, g: &StepFunction, exec: Exec) -> StepFunction {
    butterfly(field, g, true, exec)
}

/// `∫_𝔇 f(x) χ̄(u(n)x) dx`; zero once `u(n)` is outside `𝔅^{-k}`.
pub fn fourier_coefficient(field: &FieldConfig, f: &PeriodicStepFunction, n: u64) -> Complex64 {
    let k = f.resolution();
    if n >= field.pow_q(k) {
        return Complex64::default();
    }
    let p = field.p();
    let nd = field.index_digits(n, k as usize);
    let mut acc = Complex64::default();
    for (i, &v) in f.values().iter().enumerate() {
        if v.re == 0.0 && v.im == 0.0 {
            continue;
        }
        let id = field.index_digits(i as u64, k as usize);
        let mut phase = 0u32;
        for s in 0..k as usize {
            phase += field.pair_phase(nd[s], id[k as usize - 1 - s]);
        }
        acc += v * field.root((p - phase % p) % p);
    }
    acc * (field.q() as f64).powi(-(k as i32))
}

/// `x ↦ χ(u(n)x)` on 𝔇 as a table at resolution `k`; requires `n < q^k`.
pub fn character_on_ring(field: &FieldConfig, n: u64, k: u32) -> PeriodicStepFunction {
    assert!(n < field.pow_q(k), "character not constant on cells at this resolution");
    let xi = field.uindex(n);
    let values = (0..field.pow_q(k))
        .map(|i| chi_xi(field, &xi, &FieldElement::from_coset_index(k as i32, i, field.q())))
        .collect();
    PeriodicStepFunction::new(field.q(), k, values).expect("q^k entries")
}
