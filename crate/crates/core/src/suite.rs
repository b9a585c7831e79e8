//! Seeded random test functions.
//!
//! Amplitudes have real and imaginary parts drawn uniformly from `[-1, 1)`
//! by ChaCha8 seeded through `seed_from_u64`, one function after another
//! from a single stream, so a `(seed, count)` pair fixes the whole suite.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::stepfn::{PeriodicStepFunction, StepFunction};

pub const PRNG_NAME: &str = "ChaCha8 (rand_chacha, seed_from_u64)";

fn amplitude(rng: &mut ChaCha8Rng) -> Complex64 {
    let re = rng.random_range(-1.0..1.0);
    let im = rng.random_range(-1.0..1.0);
    Complex64::new(re, im)
}

/// A step function at `resolution` with a full table on `𝔅^support`.
pub fn random_step_function(rng: &mut ChaCha8Rng, q: u32, resolution: i32, support: i32) -> StepFunction {
    assert!(support <= resolution, "support ball must be coarser than the cells");
    let n = (q as usize).pow((resolution - support) as u32);
    let values = (0..n).map(|_| amplitude(rng)).collect();
    StepFunction::from_values(q, resolution, values).expect("q^m entries")
}

pub fn random_periodic(rng: &mut ChaCha8Rng, q: u32, resolution: u32) -> PeriodicStepFunction {
    let n = (q as usize).pow(resolution);
    PeriodicStepFunction::new(q, resolution, (0..n).map(|_| amplitude(rng)).collect()).expect("q^k entries")
}

pub fn step_suite(seed: u64, count: usize, q: u32, resolution: i32, support: i32) -> Vec<StepFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_step_function(&mut rng, q, resolution, support)).collect()
}

pub fn periodic_suite(seed: u64, count: usize, q: u32, resolution: u32) -> Vec<PeriodicStepFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_periodic(&mut rng, q, resolution)).collect()
}
