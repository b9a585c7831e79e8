//! Periodization onto 𝔇 and the periodic wavelet system
//! `{φ^per} ∪ {ψ^per_{ℓ,j,λ} : j ≥ 0, λ < (qN)^j}`.
//!
//! Periodization sums lattice translates `f(x + u(r))`, which at a
//! resolution `k >= 0` just folds table index `i` onto `i mod q^k`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::framekit::{system_member, WaveletSystem};
use crate::stepfn::{PeriodicStepFunction, StepFunction};

pub fn periodize(f: &StepFunction) -> PeriodicStepFunction {
    let k = f.resolution().max(0);
    let g = f.refine(k).expect("k >= resolution");
    let q = f.q();
    let n = (q as usize).pow(k as u32);
    let mut out = vec![Complex64::default(); n];
    for (i, &v) in g.values().iter().enumerate() {
        out[i % n] += v;
    }
    PeriodicStepFunction::new(q, k as u32, out).expect("q^k entries")
}

/// All periodic members up to scale `j_max`, precomputed per generator and
/// scale as cell averages at resolution `j_max`. Functions on 𝔇 at
/// resolution at most `j_max` pair with these exactly.
#[derive(Debug, Clone)]
pub struct PeriodicSystemSpec {
    ws: WaveletSystem,
    j_max: u32,
    // bank[l][j][label]
    bank: Vec<Vec<Vec<PeriodicStepFunction>>>,
}

impl PeriodicSystemSpec {
    /// Members up to scale `j_max` inclusive, so that the first omitted
    /// wavelet scale of a sum truncated at `j_max` is still available.
    pub fn new(ws: WaveletSystem, j_max: u32, exec: Exec) -> Self {
        let sys = ws.system();
        let mut bank = Vec::with_capacity(ws.generator_count());
        for l in 0..ws.generator_count() {
            let mut per_scale = Vec::with_capacity(j_max as usize + 1);
            for j in 0..=j_max {
                // averaging commutes with λ-shifts and dilations once the
                // target resolution j_max − j is non-negative
                let coarse = ws.generator(l).cell_average((j_max - j) as i32);
                let count = sys.qn().pow(j) as usize;
                let members = exec.map_range(count, |label| {
                    let idx = sys.label_to_lambda(label as u64);
                    periodize(&system_member(&coarse, j as i32, idx, sys))
                });
                per_scale.push(members);
            }
            bank.push(per_scale);
        }
        PeriodicSystemSpec { ws, j_max, bank }
    }

    pub fn wavelets(&self) -> &WaveletSystem {
        &self.ws
    }
    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn label_count(&self, j: u32) -> u64 {
        self.ws.system().qn().pow(j)
    }

    fn check_resolution(&self, f: &PeriodicStepFunction) -> Result<()> {
        if f.resolution() > self.j_max {
            return Err(Error::TruncationError { j_max: self.j_max, resolution: f.resolution() as i32 });
        }
        Ok(())
    }
}

/// The member `ψ^per_{ℓ,j,λ}` itself, at full resolution.
pub fn periodic_member(l: usize, j: u32, label: u64, spec: &PeriodicSystemSpec) -> Result<PeriodicStepFunction> {
    if j > spec.j_max {
        return Err(Error::TruncationError { j_max: spec.j_max, resolution: j as i32 });
    }
    let bound = spec.label_count(j);
    if label >= bound {
        return Err(Error::IndexError { label, bound });
    }
    if l >= spec.bank.len() {
        return Err(Error::IndexError { label: l as u64, bound: spec.bank.len() as u64 });
    }
    let sys = spec.ws.system();
    Ok(periodize(&system_member(spec.ws.generator(l), j as i32, sys.label_to_lambda(label), sys)))
}

fn scale_energy(f: &PeriodicStepFunction, l: usize, j: u32, spec: &PeriodicSystemSpec, exec: Exec) -> f64 {
    exec.map(&spec.bank[l][j as usize], |m| f.inner(m).norm_sqr()).iter().sum()
}

/// `Σ_{λ<(qN)^j} |⟨f, φ^per_{j,λ}⟩|²`, exact for `f` at resolution at most `j_max`.
pub fn coarse_sum(f: &PeriodicStepFunction, j: u32, spec: &PeriodicSystemSpec, exec: Exec) -> f64 {
    scale_energy(f, 0, j, spec, exec)
}

/// `Σ_ℓ Σ_{λ<(qN)^j} |⟨f, ψ^per_{ℓ,j,λ}⟩|²`.
pub fn detail_sum(f: &PeriodicStepFunction, j: u32, spec: &PeriodicSystemSpec, exec: Exec) -> f64 {
    (1..spec.bank.len()).map(|l| scale_energy(f, l, j, spec, exec)).sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct CoarseEnergyScan {
    pub epsilon: f64,
    /// Smallest J with the two-sided bound at every scale in `J..=j_max`.
    #[serde(rename = "J")]
    pub j_found: Option<u32>,
    pub sums: Vec<f64>,
    pub norm2: f64,
}

pub fn coarse_energy_scan(
    f: &PeriodicStepFunction,
    epsilon: f64,
    spec: &PeriodicSystemSpec,
    exec: Exec,
) -> Result<CoarseEnergyScan> {
    spec.check_resolution(f)?;
    let norm2 = f.norm2_sq();
    if f.is_zero() || norm2 == 0.0 {
        return Err(Error::DegenerateInput("coarse energy scan of the zero function"));
    }
    let sums: Vec<f64> = (0..=spec.j_max).map(|j| coarse_sum(f, j, spec, exec)).collect();
    let ok = |s: f64| (1.0 - epsilon) * norm2 <= s && s <= (1.0 + epsilon) * norm2;
    let mut j_found = None;
    for j in (0..sums.len()).rev() {
        if ok(sums[j]) {
            j_found = Some(j as u32);
        } else {
            break;
        }
    }
    Ok(CoarseEnergyScan { epsilon, j_found, sums, norm2 })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PeriodicTwoScale {
    pub scale: u32,
    pub fine: f64,
    pub coarse: f64,
    pub detail: f64,
    /// `fine − coarse − detail`
    pub signed_residual: f64,
    pub residual: f64,
}

/// Periodic form of the two-scale energy identity at scale `j < j_max`.
pub fn periodic_two_scale_check(
    f: &PeriodicStepFunction,
    j: u32,
    spec: &PeriodicSystemSpec,
    exec: Exec,
) -> Result<PeriodicTwoScale> {
    if j >= spec.j_max {
        return Err(Error::TruncationError { j_max: spec.j_max, resolution: j as i32 + 1 });
    }
    spec.check_resolution(f)?;
    let fine = coarse_sum(f, j + 1, spec, exec);
    let coarse = coarse_sum(f, j, spec, exec);
    let detail = detail_sum(f, j, spec, exec);
    let d = fine - coarse - detail;
    Ok(PeriodicTwoScale { scale: j, fine, coarse, detail, signed_residual: d, residual: d.abs() })
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicFrameSum {
    /// `|⟨f,φ^per⟩|² + Σ_{r<j_max} Σ_ℓ Σ_λ |⟨f,ψ^per_{ℓ,r,λ}⟩|²`
    pub total: f64,
    pub norm2: f64,
    pub residual: f64,
    /// Wavelet energy at the first omitted scale `r = j_max`.
    pub tail: f64,
    /// `‖f‖² − Σ_λ |⟨f,φ^per_{j_max,λ}⟩|²`.
    pub limit_defect: f64,
    pub two_scale_residuals: Vec<f64>,
    /// `|(total − ‖f‖²) − (Σ_j signed two-scale residual_j − limit_defect)|`,
    /// zero up to rounding by telescoping.
    pub identity_gap: f64,
}

/// Truncated periodic frame sum against `‖f‖²`. The signed residual equals
/// the sum of the signed per-scale residuals minus the limit defect.
pub fn periodic_frame_check(
    f: &PeriodicStepFunction,
    spec: &PeriodicSystemSpec,
    exec: Exec,
) -> Result<PeriodicFrameSum> {
    spec.check_resolution(f)?;
    let norm2 = f.norm2_sq();
    let details: Vec<f64> = (0..=spec.j_max).map(|j| detail_sum(f, j, spec, exec)).collect();
    let coarse: Vec<f64> = (0..=spec.j_max).map(|j| coarse_sum(f, j, spec, exec)).collect();
    let total = coarse[0] + details[..spec.j_max as usize].iter().sum::<f64>();
    let signed: Vec<f64> = (0..spec.j_max as usize).map(|j| coarse[j + 1] - coarse[j] - details[j]).collect();
    let limit_defect = norm2 - coarse[spec.j_max as usize];
    let identity_gap = ((total - norm2) - (-signed.iter().sum::<f64>() - limit_defect)).abs();
    Ok(PeriodicFrameSum {
        total,
        norm2,
        residual: (total - norm2).abs(),
        tail: details[spec.j_max as usize],
        limit_defect,
        two_scale_residuals: signed.iter().map(|d| d.abs()).collect(),
        identity_gap,
    })
}
