//! Partition-of-unity sums, `σ(V₀)`, the shift Gram matrix of the masks and
//! the Bessel bound on the refinement mask.

use num_complex::Complex64;
use serde::Serialize;

use super::mask::{mask_cells_at, mask_resolution, Mask, MaskCells};
use crate::error::{Error, Result};
use crate::stepfn::StepFunction;
use crate::system::SystemConfig;
use crate::tol;

/// `Σ_λ |φ̂(ξ+λ)|²` on every cell of 𝔇 at `resolution`.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub resolution: u32,
    pub cell_sums: Vec<f64>,
    pub phi_hat_at_zero: [f64; 2],
    pub lambda_count: usize,
}

impl PartitionReport {
    pub fn max_deviation_from_one(&self) -> f64 {
        self.cell_sums.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn is_partition_of_unity(&self, tol: f64) -> bool {
        self.max_deviation_from_one() <= tol
            && (Complex64::new(self.phi_hat_at_zero[0], self.phi_hat_at_zero[1]) - 1.0).norm() <= tol
    }

    /// Cells where the sum exceeds the support tolerance.
    pub fn sigma_v0(&self) -> Vec<u64> {
        self.cell_sums.iter().enumerate().filter(|(_, &s)| s > tol::SUPPORT).map(|(i, _)| i as u64).collect()
    }

    pub fn sigma_v0_fraction(&self) -> f64 {
        self.sigma_v0().len() as f64 / self.cell_sums.len() as f64
    }

    /// Membership of a cell given at a finer resolution.
    pub fn in_sigma(&self, index: u64, r: u32, q: u32) -> bool {
        let up = (q as u64).pow(r - self.resolution);
        self.cell_sums[(index / up) as usize] > tol::SUPPORT
    }
}

/// The λ range is exact: translates by λ outside the enumerated set do not
/// meet 𝔇.
pub fn check_partition(phi_hat: &StepFunction, sys: &SystemConfig) -> PartitionReport {
    let r = phi_hat.resolution().max(0);
    let g = phi_hat.refine(r).expect("r >= resolution");
    let q = sys.q() as u64;
    let cells = q.pow(r as u32);
    let bound = (g.len() as u64).div_ceil(cells).max(1);
    let lambdas = sys.lambdas_below(bound);
    let codes: Vec<u64> = lambdas.iter().map(|&l| sys.lambda_code(l)).collect();
    let cell_sums = (0..cells).map(|i| codes.iter().map(|&c| g.get(i + c * cells).norm_sqr()).sum()).collect();
    let at0 = g.get(0);
    PartitionReport { resolution: r as u32, cell_sums, phi_hat_at_zero: [at0.re, at0.im], lambda_count: lambdas.len() }
}

pub fn sigma_v0(phi_hat: &StepFunction, sys: &SystemConfig) -> Vec<u64> {
    check_partition(phi_hat, sys).sigma_v0()
}

#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    pub resolution: u32,
    pub shift_count: usize,
    pub cells_checked: usize,
    pub max_dev: f64,
    pub pass: bool,
}

fn shift_indices(sys: &SystemConfig, r: u32) -> Vec<u64> {
    sys.shift_set().iter().map(|tau| tau.keep_from(0).coset_index(r as i32, sys.q()).expect("shift fits")).collect()
}

fn common_resolution(sys: &SystemConfig, masks: &[Mask], partition: &PartitionReport) -> u32 {
    let k = masks.iter().map(|m| mask_resolution(m, sys)).max().unwrap_or(1);
    let s = sys.shift_set().iter().filter_map(|t| t.max_exponent()).map(|e| (e + 1).max(0) as u32).max().unwrap_or(0);
    k.max(partition.resolution).max(s)
}

/// `max |G_{s,s'}(ξ) − δ_{s,s'}|` over ξ ∈ σ(V₀), with
/// `G_{s,s'}(ξ) = Σ_ℓ m_ℓ(ξ+τ_s) conj m_ℓ(ξ+τ_{s'})`.
pub fn uep_gram(sys: &SystemConfig, partition: &PartitionReport) -> Result<GramReport> {
    if sys.shift_set().is_empty() {
        return Err(Error::Config("empty shift set".into()));
    }
    let masks = sys.masks();
    let r = common_resolution(sys, masks, partition);
    let q = sys.q();
    let field = sys.field();
    let cells: Vec<MaskCells> = masks.iter().map(|m| mask_cells_at(m, sys, mask_resolution(m, sys))).collect();
    let shifts = shift_indices(sys, r);
    let mut max_dev = 0.0f64;
    let mut checked = 0;
    let mut col = vec![Complex64::default(); shifts.len() * cells.len()];
    for xi in 0..field.pow_q(r) {
        if !partition.in_sigma(xi, r, q) {
            continue;
        }
        checked += 1;
        for (s, &tau) in shifts.iter().enumerate() {
            let at = field.index_add(xi, tau);
            for (l, c) in cells.iter().enumerate() {
                col[s * cells.len() + l] = c.at(at, r, q);
            }
        }
        for s in 0..shifts.len() {
            for t in 0..shifts.len() {
                let mut g = Complex64::default();
                for l in 0..cells.len() {
                    g += col[s * cells.len() + l] * col[t * cells.len() + l].conj();
                }
                let target = if s == t { 1.0 } else { 0.0 };
                max_dev = max_dev.max((g - target).norm());
            }
        }
    }
    Ok(GramReport {
        resolution: r,
        shift_count: shifts.len(),
        cells_checked: checked,
        max_dev,
        pass: max_dev <= tol::GRAM,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BesselReport {
    pub resolution: u32,
    pub max_sum: f64,
    pub pass: bool,
}

/// `Σ_s |m0(ξ+τ_s)|² <= 1` on every cell of 𝔇.
pub fn bessel_mask_check(m0: &Mask, sys: &SystemConfig) -> BesselReport {
    let k = mask_resolution(m0, sys);
    let s = sys.shift_set().iter().filter_map(|t| t.max_exponent()).map(|e| (e + 1).max(0) as u32).max().unwrap_or(0);
    let r = k.max(s);
    let cells = mask_cells_at(m0, sys, k);
    let shifts = shift_indices(sys, r);
    let field = sys.field();
    let q = sys.q();
    let max_sum = (0..field.pow_q(r))
        .map(|xi| shifts.iter().map(|&t| cells.at(field.index_add(xi, t), r, q).norm_sqr()).sum::<f64>())
        .fold(0.0, f64::max);
    BesselReport { resolution: r, max_sum, pass: max_sum <= 1.0 + tol::GRAM }
}
