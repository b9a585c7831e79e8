//! Masks, refinable functions, wavelets and the checks that decide whether
//! a mask family generates a normalized tight frame.

pub mod analysis;
pub mod mask;
pub mod uep;

use num_complex::Complex64;

pub use analysis::{
    analysis, averaged_projection, coarse_energy, detail_energy, energy, frame_ratio, lambda_bound, projection,
    scale_coefficients, scale_coefficients_brute_force, system_member, two_scale_check, CoefficientBlock, TwoScale,
};
pub use mask::{
    cascade, cascade_unchecked, eval_mask, mask_cells, mask_cells_at, mask_resolution, refine_hat, wavelet_hat,
    wavelet_time, CascadeResult, Mask, MaskCells,
};
pub use uep::{bessel_mask_check, check_partition, sigma_v0, uep_gram, BesselReport, GramReport, PartitionReport};

use crate::algebra::LambdaIndex;
use crate::exec::Exec;
use crate::stepfn::StepFunction;
use crate::system::SystemConfig;

/// Haar low-pass and high-pass masks on `λ ∈ {u(0), u(1)}` (q = 2 gives
/// the classical pair; other q give a non-tight two-mask family).
pub fn haar_masks(sys: &SystemConfig) -> Vec<Mask> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = sys.mask_norm_const();
    vec![
        Mask::new([(LambdaIndex::lattice(0), h.into()), (LambdaIndex::lattice(1), h.into())], c),
        Mask::new([(LambdaIndex::lattice(0), h.into()), (LambdaIndex::lattice(1), (-h).into())], c),
    ]
}

/// Rows of the normalized q-point DFT: `a^ℓ_{u(n)} = q^{-1/2}·ω^{ℓn}`
/// for prime q.
pub fn fourier_masks(sys: &SystemConfig) -> Vec<Mask> {
    let q = sys.q() as u64;
    let c = sys.mask_norm_const();
    let s = 1.0 / (q as f64).sqrt();
    (0..q)
        .map(|l| {
            Mask::new(
                (0..q).map(|n| {
                    let w = Complex64::from_polar(s, 2.0 * std::f64::consts::PI * ((l * n) % q) as f64 / q as f64);
                    (LambdaIndex::lattice(n), w)
                }),
                c,
            )
        })
        .collect()
}

/// A configured system together with its refinable function and wavelets,
/// both in time and frequency.
#[derive(Debug, Clone)]
pub struct WaveletSystem {
    sys: SystemConfig,
    cascade: CascadeResult,
    generators: Vec<StepFunction>,
    generators_hat: Vec<StepFunction>,
}

impl WaveletSystem {
    /// Runs the cascade (unchecked, so unnormalized masks still produce a
    /// system to inspect) and builds `ψ_ℓ` from masks `1..`.
    pub fn build(sys: SystemConfig, iterations: u32) -> Self {
        let m0 = sys.masks().first().cloned().unwrap_or_else(|| Mask::zero(sys.mask_norm_const()));
        let cascade = cascade_unchecked(&m0, iterations, &sys);
        let mut generators = vec![cascade.phi.clone()];
        let mut generators_hat = vec![cascade.phi_hat.clone()];
        let rest: Vec<Mask> = sys.masks().iter().skip(1).cloned().collect();
        let hats = Exec::default().map(&rest, |m| wavelet_hat(&cascade.phi_hat, m, &sys));
        let times = Exec::default().map(&hats, |h| mask::to_time(h, &sys, Exec::Sequential));
        generators.extend(times);
        generators_hat.extend(hats);
        WaveletSystem { sys, cascade, generators, generators_hat }
    }

    /// Use given time-side generators (φ first) without any cascade.
    pub fn from_generators(sys: SystemConfig, generators: Vec<StepFunction>) -> Self {
        let generators_hat: Vec<StepFunction> =
            generators.iter().map(|g| crate::harmonic::fast_transform(sys.field(), g)).collect();
        let cascade = CascadeResult {
            phi_hat: generators_hat.first().cloned().unwrap_or_else(|| StepFunction::zero(sys.q(), 0)),
            phi: generators.first().cloned().unwrap_or_else(|| StepFunction::zero(sys.q(), 0)),
            iterations_requested: 0,
            iterations_run: 0,
            fixed_point: false,
            mask_at_zero: [f64::NAN, f64::NAN],
            last_step_change: 0.0,
        };
        WaveletSystem { sys, cascade, generators, generators_hat }
    }

    pub fn system(&self) -> &SystemConfig {
        &self.sys
    }
    pub fn cascade(&self) -> &CascadeResult {
        &self.cascade
    }
    /// 1 + number of wavelets.
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }
    /// Time-side generator: φ for `l = 0`, `ψ_l` otherwise.
    pub fn generator(&self, l: usize) -> &StepFunction {
        &self.generators[l]
    }
    pub fn generator_hat(&self, l: usize) -> &StepFunction {
        &self.generators_hat[l]
    }
    pub fn phi_hat(&self) -> &StepFunction {
        &self.generators_hat[0]
    }

    /// Every generator multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let c = Complex64::new(s, 0.0);
        WaveletSystem {
            sys: self.sys.clone(),
            cascade: self.cascade.clone(),
            generators: self.generators.iter().map(|g| g.scale(c)).collect(),
            generators_hat: self.generators_hat.iter().map(|g| g.scale(c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldConfig;

    #[test]
    fn fourier_masks_give_box_refinable_function() {
        let sys = SystemConfig::uniform(FieldConfig::prime(3).unwrap());
        let sys = sys.clone().with_masks(fourier_masks(&sys));
        let ws = WaveletSystem::build(sys.clone(), 6);
        assert!(ws.cascade().fixed_point);
        let one = StepFunction::indicator(3, 0, &crate::algebra::FieldElement::zero());
        assert!(ws.phi_hat().max_abs_diff(&one) < 1e-14);
        let part = check_partition(ws.phi_hat(), &sys);
        let gram = uep_gram(&sys, &part).unwrap();
        assert!(gram.pass, "{gram:?}");
        for l in 1..3 {
            assert!((ws.generator(l).norm2() - 1.0).abs() < 1e-12);
        }
    }
}
