//! End-to-end verification runs producing serializable reports.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::framekit::{
    bessel_mask_check, check_partition, frame_ratio, two_scale_check, uep_gram, BesselReport, CascadeResult,
    GramReport, PartitionReport, WaveletSystem,
};
use crate::periodic::{coarse_energy_scan, periodic_frame_check, PeriodicSystemSpec};
use crate::suite::{periodic_suite, step_suite, PRNG_NAME};
use crate::system::{Degeneracy, Normalization, SystemConfig};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub structural: f64,
    pub identity: f64,
    pub gram: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { structural: tol::STRUCTURAL, identity: tol::IDENTITY, gram: tol::GRAM }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSettings {
    pub seed: u64,
    pub count: usize,
    pub resolution: i32,
    /// Exponent of the ball carrying the random tables.
    pub support: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySettings {
    pub cascade_iterations: u32,
    pub j0: i32,
    pub j1: i32,
    pub suite: SuiteSettings,
    pub tolerances: Tolerances,
    /// Also materialize `P_j f`, `Q_j f` for the operator form of the identity.
    pub operator_check: bool,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            cascade_iterations: 8,
            j0: 0,
            j1: 4,
            suite: SuiteSettings { seed: 0, count: 100, resolution: 4, support: -1 },
            tolerances: Tolerances::default(),
            operator_check: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoScaleSummary {
    pub scale: i32,
    pub max_residual: f64,
    pub max_operator_residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdicts {
    pub mask_normalization: bool,
    pub partition: bool,
    pub gram: bool,
    pub bessel: bool,
    pub two_scale: bool,
    pub frame_ratio: bool,
    pub all: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DilationScales {
    pub paper: f64,
    pub unitary: f64,
    pub active: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteEcho {
    pub prng: &'static str,
    pub seed: u64,
    pub count: usize,
    pub resolution: i32,
    pub support: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameReport {
    pub normalization: Normalization,
    pub dilation_scale: DilationScales,
    pub degeneracy: Degeneracy,
    pub cascade: CascadeResult,
    pub partition_check: PartitionReport,
    pub sigma_v0_fraction: f64,
    pub gram_max_dev: f64,
    pub gram: GramReport,
    pub bessel_check: BesselReport,
    pub two_scale_residuals: Vec<TwoScaleSummary>,
    pub frame_ratio_min: f64,
    pub frame_ratio_max: f64,
    pub suite: SuiteEcho,
    pub verdicts: Verdicts,
}

fn suite_echo(s: &SuiteSettings) -> SuiteEcho {
    SuiteEcho { prng: PRNG_NAME, seed: s.seed, count: s.count, resolution: s.resolution, support: s.support }
}

fn dilation_scales(sys: &SystemConfig) -> DilationScales {
    DilationScales {
        paper: SystemConfig::scale_for(Normalization::Paper, sys.q(), sys.n()),
        unitary: SystemConfig::scale_for(Normalization::Unitary, sys.q(), sys.n()),
        active: sys.dilation_scale(),
    }
}

type FunctionChecks = (Vec<(f64, Option<f64>)>, f64);

pub fn run_verify(sys: &SystemConfig, settings: &VerifySettings, exec: Exec) -> Result<FrameReport> {
    if sys.masks().is_empty() {
        return Err(Error::Config("no masks configured".into()));
    }
    if settings.j1 < settings.j0 {
        return Err(Error::Config("scales: j1 must be >= j0".into()));
    }
    let s = &settings.suite;
    if s.support > s.resolution {
        return Err(Error::Config("suite: support exponent exceeds resolution".into()));
    }
    let t = settings.tolerances;
    let ws = WaveletSystem::build(sys.clone(), settings.cascade_iterations);
    let partition = check_partition(ws.phi_hat(), sys);
    let gram = uep_gram(sys, &partition)?;
    let bessel = bessel_mask_check(&sys.masks()[0], sys);

    let suite = step_suite(s.seed, s.count, sys.q(), s.resolution, s.support);
    let scales: Vec<i32> = (settings.j0..settings.j1).collect();
    let per_function: Vec<FunctionChecks> = exec.map(&suite, |f| {
        let checks = scales
            .iter()
            .map(|&j| {
                let r = two_scale_check(f, j, &ws, settings.operator_check, Exec::Sequential);
                (r.residual, r.operator_residual)
            })
            .collect();
        let ratio = frame_ratio(f, &ws, settings.j0, settings.j1, Exec::Sequential).unwrap_or(f64::NAN);
        (checks, ratio)
    });
    let two_scale_residuals: Vec<TwoScaleSummary> = scales
        .iter()
        .enumerate()
        .map(|(a, &j)| TwoScaleSummary {
            scale: j,
            max_residual: per_function.iter().map(|(c, _)| c[a].0).fold(0.0, f64::max),
            max_operator_residual: settings
                .operator_check
                .then(|| per_function.iter().filter_map(|(c, _)| c[a].1).fold(0.0, f64::max)),
        })
        .collect();
    let ratios: Vec<f64> = per_function.iter().map(|(_, r)| *r).collect();
    let frame_ratio_min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let frame_ratio_max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let m0 = ws.cascade().mask_at_zero;
    let mask_normalization = (m0[0] - 1.0).hypot(m0[1]) <= t.gram;
    let partition_ok = partition.is_partition_of_unity(t.identity);
    let two_scale = two_scale_residuals
        .iter()
        .all(|r| r.max_residual <= t.identity && r.max_operator_residual.is_none_or(|x| x <= t.identity));
    let ratio_ok = !suite.is_empty() && ratios.iter().all(|r| (r - 1.0).abs() <= t.identity);
    let gram_ok = gram.max_dev <= t.gram;
    let bessel_ok = bessel.max_sum <= 1.0 + t.gram;
    let all = mask_normalization && partition_ok && gram_ok && bessel_ok && two_scale && ratio_ok;
    Ok(FrameReport {
        normalization: sys.normalization(),
        dilation_scale: dilation_scales(sys),
        degeneracy: sys.degeneracy(),
        cascade: ws.cascade().clone(),
        sigma_v0_fraction: partition.sigma_v0_fraction(),
        partition_check: partition,
        gram_max_dev: gram.max_dev,
        gram,
        bessel_check: bessel,
        two_scale_residuals,
        frame_ratio_min: if suite.is_empty() { f64::NAN } else { frame_ratio_min },
        frame_ratio_max: if suite.is_empty() { f64::NAN } else { frame_ratio_max },
        suite: suite_echo(s),
        verdicts: Verdicts {
            mask_normalization,
            partition: partition_ok,
            gram: gram_ok,
            bessel: bessel_ok,
            two_scale,
            frame_ratio: ratio_ok,
            all,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicSettings {
    pub cascade_iterations: u32,
    pub j_max: u32,
    pub epsilon: f64,
    pub seed: u64,
    pub count: usize,
    pub resolution: u32,
    pub tolerances: Tolerances,
}

impl Default for PeriodicSettings {
    fn default() -> Self {
        PeriodicSettings {
            cascade_iterations: 8,
            j_max: 4,
            epsilon: 0.01,
            seed: 0,
            count: 100,
            resolution: 4,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoarseScanSummary {
    pub epsilon: f64,
    /// Largest J over the suite; `null` if some function has none.
    #[serde(rename = "J")]
    pub j_found: Option<u32>,
    /// First scale from which every sum equals `‖f‖²` within the identity
    /// tolerance, worst case over the suite.
    pub exact_from: Option<u32>,
    /// Sums `S_0..=S_{j_max}` and `‖f‖²` of the first suite function.
    pub sums: Vec<f64>,
    pub norm2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameSumEntry {
    pub total: f64,
    pub norm2: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameSumSummary {
    pub max_residual: f64,
    pub max_tail: f64,
    pub max_limit_defect: f64,
    /// Worst telescoping gap between the frame-sum residual and the per-scale residuals.
    pub identity_gap: f64,
    pub functions: Vec<FrameSumEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicVerdicts {
    pub gram: bool,
    pub coarse_scan: bool,
    pub two_scale: bool,
    pub frame_sum: bool,
    pub all: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicReport {
    pub normalization: Normalization,
    pub degeneracy: Degeneracy,
    pub j_max: u32,
    pub gram_max_dev: f64,
    #[serde(rename = "lemma31")]
    pub coarse_scan: CoarseScanSummary,
    /// Worst residual over the suite at each scale `0..j_max`.
    #[serde(rename = "lemma33_residuals")]
    pub two_scale_residuals: Vec<f64>,
    #[serde(rename = "theorem31")]
    pub frame_sum: FrameSumSummary,
    pub suite: SuiteEcho,
    pub verdicts: PeriodicVerdicts,
}

pub fn run_periodic(sys: &SystemConfig, settings: &PeriodicSettings, exec: Exec) -> Result<PeriodicReport> {
    if sys.masks().is_empty() {
        return Err(Error::Config("no masks configured".into()));
    }
    if settings.resolution > settings.j_max {
        return Err(Error::TruncationError { j_max: settings.j_max, resolution: settings.resolution as i32 });
    }
    if settings.epsilon.is_nan() || settings.epsilon <= 0.0 {
        return Err(Error::Config("coarse scan epsilon must be positive".into()));
    }
    let t = settings.tolerances;
    let ws = WaveletSystem::build(sys.clone(), settings.cascade_iterations);
    let partition = check_partition(ws.phi_hat(), sys);
    let gram = uep_gram(sys, &partition)?;
    let spec = PeriodicSystemSpec::new(ws, settings.j_max, exec);
    let suite = periodic_suite(settings.seed, settings.count, sys.q(), settings.resolution);

    let results = exec.map(&suite, |f| {
        let scan =
            if f.is_zero() { None } else { coarse_energy_scan(f, settings.epsilon, &spec, Exec::Sequential).ok() };
        let th = periodic_frame_check(f, &spec, Exec::Sequential);
        (scan, th)
    });
    let mut j_found = Some(0u32);
    let mut exact_from = Some(0u32);
    let mut two_scale = vec![0.0f64; settings.j_max as usize];
    let mut th = FrameSumSummary {
        max_residual: 0.0,
        max_tail: 0.0,
        max_limit_defect: 0.0,
        identity_gap: 0.0,
        functions: Vec::with_capacity(suite.len()),
    };
    for (scan, res) in &results {
        let res = res.clone()?;
        match scan {
            Some(s) => {
                j_found = j_found.zip(s.j_found).map(|(a, b)| a.max(b));
                let ex = (0..s.sums.len())
                    .rev()
                    .take_while(|&j| (s.sums[j] - s.norm2).abs() <= t.identity)
                    .last()
                    .map(|j| j as u32);
                exact_from = exact_from.zip(ex).map(|(a, b)| a.max(b));
            }
            None => {
                j_found = None;
                exact_from = None;
            }
        }
        for (slot, r) in two_scale.iter_mut().zip(&res.two_scale_residuals) {
            *slot = slot.max(*r);
        }
        th.max_residual = th.max_residual.max(res.residual);
        th.max_tail = th.max_tail.max(res.tail);
        th.max_limit_defect = th.max_limit_defect.max(res.limit_defect.abs());
        th.identity_gap = th.identity_gap.max(res.identity_gap);
        th.functions.push(FrameSumEntry { total: res.total, norm2: res.norm2, residual: res.residual });
    }
    if suite.is_empty() {
        j_found = None;
        exact_from = None;
    }
    let (sums, norm2) =
        results.first().and_then(|(s, _)| s.as_ref()).map(|s| (s.sums.clone(), s.norm2)).unwrap_or((Vec::new(), 0.0));
    let gram_ok = gram.max_dev <= t.gram;
    let scan_ok = j_found.is_some() && exact_from.is_some();
    let two_scale_ok = two_scale.iter().all(|&r| r <= t.identity);
    let frame_ok = !suite.is_empty() && th.max_residual <= t.identity && th.max_tail <= t.structural;
    Ok(PeriodicReport {
        normalization: sys.normalization(),
        degeneracy: sys.degeneracy(),
        j_max: settings.j_max,
        gram_max_dev: gram.max_dev,
        coarse_scan: CoarseScanSummary { epsilon: settings.epsilon, j_found, exact_from, sums, norm2 },
        two_scale_residuals: two_scale,
        frame_sum: th,
        suite: SuiteEcho {
            prng: PRNG_NAME,
            seed: settings.seed,
            count: settings.count,
            resolution: settings.resolution as i32,
            support: 0,
        },
        verdicts: PeriodicVerdicts {
            gram: gram_ok,
            coarse_scan: scan_ok,
            two_scale: two_scale_ok,
            frame_sum: frame_ok,
            all: gram_ok && scan_ok && two_scale_ok && frame_ok,
        },
    })
}
