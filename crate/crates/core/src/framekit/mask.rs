//! Masks `m(ξ) = c·Σ_λ a_λ χ̄(λξ)` and the frequency-side refinement step.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{FieldElement, LambdaIndex};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::harmonic::{chi_xi, fast_inverse_transform_with};
use crate::stepfn::StepFunction;
use crate::system::SystemConfig;

/// Finitely supported coefficients over Λ plus the prefactor `c`.
///
/// The prefactor follows the normalization mode of the system the mask is
/// attached to; [`SystemConfig::with_masks`] resets it.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    coeffs: Vec<(LambdaIndex, Complex64)>,
    norm_const: f64,
}

impl Mask {
    /// Coefficients are sorted by index; repeated indices are summed and
    /// exact zeros dropped.
    pub fn new(coeffs: impl IntoIterator<Item = (LambdaIndex, Complex64)>, norm_const: f64) -> Self {
        let mut v: Vec<(LambdaIndex, Complex64)> = coeffs.into_iter().collect();
        v.sort_by_key(|(i, _)| *i);
        let mut merged: Vec<(LambdaIndex, Complex64)> = Vec::with_capacity(v.len());
        for (i, a) in v {
            match merged.last_mut() {
                Some((j, b)) if *j == i => *b += a,
                _ => merged.push((i, a)),
            }
        }
        merged.retain(|(_, a)| a.re != 0.0 || a.im != 0.0);
        Mask { coeffs: merged, norm_const }
    }

    pub fn zero(norm_const: f64) -> Self {
        Mask { coeffs: Vec::new(), norm_const }
    }

    pub fn coeffs(&self) -> &[(LambdaIndex, Complex64)] {
        &self.coeffs
    }
    pub fn norm_const(&self) -> f64 {
        self.norm_const
    }
    pub fn with_norm_const(mut self, c: f64) -> Self {
        self.norm_const = c;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, idx: LambdaIndex) -> Complex64 {
        self.coeffs.iter().find(|(i, _)| *i == idx).map(|(_, a)| *a).unwrap_or_default()
    }

    /// Copy with `a_idx` replaced by `a_idx + delta`.
    pub fn perturbed(&self, idx: LambdaIndex, delta: Complex64) -> Self {
        let mut v = self.coeffs.clone();
        v.push((idx, delta));
        Mask::new(v, self.norm_const)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Mask::new(self.coeffs.iter().map(|&(i, a)| (i, a * s)), self.norm_const)
    }
}

/// Values of a mask on the `q^K` cosets of `𝔅^K` in 𝔇. Masks are
/// 𝒵-periodic, so these determine the mask everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskCells {
    pub resolution: u32,
    pub values: Vec<Complex64>,
}

impl MaskCells {
    /// Value on the cell with the given index at resolution `r >= K`; digits
    /// at exponents below 0 drop out by periodicity.
    #[inline]
    pub fn at(&self, index: u64, r: u32, q: u32) -> Complex64 {
        debug_assert!(r >= self.resolution);
        let q = q as u64;
        let fine = q.pow(r - self.resolution);
        self.values[((index / fine) % q.pow(self.resolution)) as usize]
    }
}

pub fn eval_mask(m: &Mask, sys: &SystemConfig, xi: &FieldElement) -> Complex64 {
    let field = sys.field();
    let mut acc = Complex64::default();
    for &(idx, a) in m.coeffs() {
        acc += a * chi_xi(field, &sys.lambda_element(idx), xi).conj();
    }
    acc * m.norm_const()
}

/// Resolution at which the mask is constant on cells (at least 1).
pub fn mask_resolution(m: &Mask, sys: &SystemConfig) -> u32 {
    m.coeffs().iter().map(|&(i, _)| sys.field().index_span(sys.lambda_code(i))).max().unwrap_or(0).max(1)
}

pub fn mask_cells(m: &Mask, sys: &SystemConfig) -> MaskCells {
    mask_cells_at(m, sys, mask_resolution(m, sys))
}

pub fn mask_cells_at(m: &Mask, sys: &SystemConfig, k: u32) -> MaskCells {
    let field = sys.field();
    let p = field.p();
    let terms: Vec<(Vec<u32>, Complex64)> =
        m.coeffs().iter().map(|&(i, a)| (field.index_digits(sys.lambda_code(i), k as usize), a)).collect();
    let values = (0..field.pow_q(k))
        .map(|z| {
            let zd = field.index_digits(z, k as usize);
            let mut acc = Complex64::default();
            for (ld, a) in &terms {
                let mut phase = 0u32;
                for s in 0..k as usize {
                    phase += field.pair_phase(ld[s], zd[k as usize - 1 - s]);
                }
                acc += a * field.root((p - phase % p) % p);
            }
            acc * m.norm_const()
        })
        .collect();
    MaskCells { resolution: k, values }
}

// Rounding left by character sums that cancel exactly in exact arithmetic.
const CASCADE_ROUNDING: f64 = 1e-14;

/// `ξ ↦ m(Bξ)·ĝ(Bξ)` with `B = t·ν^{-1}`, the frequency form of one
/// refinement step.
pub fn refine_hat(g_hat: &StepFunction, m: &Mask, sys: &SystemConfig) -> StepFunction {
    if g_hat.is_zero() || m.is_zero() {
        return StepFunction::zero(sys.q(), g_hat.resolution() - 1);
    }
    let cells = mask_cells(m, sys);
    let r = g_hat.resolution().max(cells.resolution as i32);
    let g = g_hat.refine(r).expect("r >= resolution");
    let q = sys.q();
    let vals: Vec<Complex64> = g
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| if v.re == 0.0 && v.im == 0.0 { v } else { v * cells.at(i as u64, r as u32, q) })
        .collect();
    let prod = StepFunction::from_values(q, r, vals).expect("same length");
    prod.compose_dilation(sys.field(), sys.nu(), -1).compact(CASCADE_ROUNDING)
}

pub fn wavelet_hat(phi_hat: &StepFunction, m: &Mask, sys: &SystemConfig) -> StepFunction {
    refine_hat(phi_hat, m, sys)
}

pub fn wavelet_time(phi_hat: &StepFunction, m: &Mask, sys: &SystemConfig) -> StepFunction {
    to_time(&wavelet_hat(phi_hat, m, sys), sys, Exec::default())
}

pub(crate) fn to_time(g_hat: &StepFunction, sys: &SystemConfig, exec: Exec) -> StepFunction {
    fast_inverse_transform_with(sys.field(), g_hat, exec).compact(1e-13)
}

#[derive(Debug, Clone, Serialize)]
pub struct CascadeResult {
    #[serde(skip)]
    pub phi_hat: StepFunction,
    #[serde(skip)]
    pub phi: StepFunction,
    pub iterations_requested: u32,
    pub iterations_run: u32,
    /// The last step reproduced its input up to rounding.
    pub fixed_point: bool,
    pub mask_at_zero: [f64; 2],
    pub last_step_change: f64,
}

/// Iterate [`refine_hat`] from `1_𝔇` without checking `m0(0) = 1`,
/// stopping early once a step reproduces its input.
pub fn cascade_unchecked(m0: &Mask, iterations: u32, sys: &SystemConfig) -> CascadeResult {
    let q = sys.q();
    let mut cur = StepFunction::indicator(q, 0, &FieldElement::zero());
    let mut run = 0;
    let mut fixed = false;
    let mut change = 0.0;
    while run < iterations {
        let next = refine_hat(&cur, m0, sys);
        run += 1;
        change = next.sub(&cur).norm2();
        let done = next.max_abs_diff(&cur) <= CASCADE_ROUNDING;
        cur = next;
        if done {
            fixed = true;
            break;
        }
    }
    let m_zero = eval_mask(m0, sys, &FieldElement::zero());
    let phi = to_time(&cur, sys, Exec::default());
    CascadeResult {
        phi_hat: cur,
        phi,
        iterations_requested: iterations,
        iterations_run: run,
        fixed_point: fixed,
        mask_at_zero: [m_zero.re, m_zero.im],
        last_step_change: change,
    }
}

/// Time-side refinable function from `iterations` refinement steps.
pub fn cascade(m0: &Mask, iterations: u32, sys: &SystemConfig) -> Result<StepFunction> {
    let m_zero = eval_mask(m0, sys, &FieldElement::zero());
    let dev = (m_zero - Complex64::new(1.0, 0.0)).norm();
    if dev > 1e-6 {
        return Err(Error::NotNormalized(dev));
    }
    Ok(cascade_unchecked(m0, iterations, sys).phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldConfig;
    use crate::framekit::haar_masks;

    fn haar() -> SystemConfig {
        let sys = SystemConfig::uniform(FieldConfig::prime(2).unwrap());
        let masks = haar_masks(&sys);
        sys.with_masks(masks)
    }

    #[test]
    fn haar_mask_values() {
        let sys = haar();
        let m0 = &sys.masks()[0];
        let m1 = &sys.masks()[1];
        let zero = FieldElement::zero();
        assert!((eval_mask(m0, &sys, &zero) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(eval_mask(m1, &sys, &zero).norm() < 1e-15);
        let cells = mask_cells(m0, &sys);
        assert_eq!(cells.resolution, 1);
        assert!((cells.values[1]).norm() < 1e-15);
    }

    #[test]
    fn cells_agree_with_pointwise_evaluation() {
        let f = FieldConfig::prime(3).unwrap();
        let sys = SystemConfig::new(f.clone(), 1, 1, None, Default::default()).unwrap();
        let m = Mask::new(
            [
                (LambdaIndex::lattice(0), Complex64::new(0.3, 0.1)),
                (LambdaIndex::lattice(4), Complex64::new(-0.2, 0.5)),
                (LambdaIndex::lattice(7), Complex64::new(0.9, 0.0)),
            ],
            sys.mask_norm_const(),
        );
        let cells = mask_cells(&m, &sys);
        assert_eq!(cells.resolution, 2);
        for z in 0..9u64 {
            let xi = FieldElement::from_coset_index(2, z, 3);
            assert!((cells.values[z as usize] - eval_mask(&m, &sys, &xi)).norm() < 1e-14);
            // constant on the cell and periodic under the lattice
            let moved = f.fe_add(&f.fe_add(&xi, &FieldElement::prime_power(3)), &f.uindex(11));
            assert!((eval_mask(&m, &sys, &moved) - eval_mask(&m, &sys, &xi)).norm() < 1e-14);
        }
    }

    #[test]
    fn haar_refinement_fixed_point() {
        let sys = haar();
        let one = StepFunction::indicator(2, 0, &FieldElement::zero());
        let r = refine_hat(&one, &sys.masks()[0], &sys);
        assert!(r.max_abs_diff(&one) < 1e-15);
        assert!(refine_hat(&StepFunction::zero(2, 0), &sys.masks()[0], &sys).is_zero());
        let c = cascade_unchecked(&sys.masks()[0], 5, &sys);
        assert!(c.fixed_point);
        assert_eq!(c.iterations_run, 1);
        let phi = cascade(&sys.masks()[0], 0, &sys).unwrap();
        assert!(phi.max_abs_diff(&one) < 1e-15);
    }

    #[test]
    fn haar_wavelet_in_time() {
        let sys = haar();
        let one = StepFunction::indicator(2, 0, &FieldElement::zero());
        let psi = wavelet_time(&one, &sys.masks()[1], &sys);
        let expected =
            StepFunction::from_values(2, 1, vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]).unwrap();
        assert!(psi.max_abs_diff(&expected) < 1e-14);
        assert!(wavelet_time(&one, &Mask::zero(1.0), &sys).is_zero());
    }

    #[test]
    fn unnormalized_cascade_rejected() {
        let sys = haar();
        let m = sys.masks()[0].scaled(Complex64::new(1.1, 0.0));
        assert!(matches!(cascade(&m, 3, &sys), Err(Error::NotNormalized(_))));
    }
}
