//! Frame coefficients `⟨f, ψ_{ℓ,j,λ}⟩` with support-exact λ ranges, the
//! per-scale energy identity and the hybrid frame ratio.

use num_complex::Complex64;
use serde::Serialize;

use super::WaveletSystem;
use crate::algebra::{FieldConfig, LambdaIndex};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::harmonic::{fast_inverse_transform_with, fast_transform_with};
use crate::stepfn::StepFunction;
use crate::system::{Direction, SystemConfig};

/// `s^j·g(A^j x − λ)`: translate by λ, then `j` mode-dependent dilations.
pub fn system_member(generator: &StepFunction, j: i32, idx: LambdaIndex, sys: &SystemConfig) -> StepFunction {
    let mut out = generator.translate(sys.field(), &sys.lambda_element(idx));
    let dir = if j >= 0 { Direction::Fine } else { Direction::Coarse };
    for _ in 0..j.unsigned_abs() {
        out = out.dilate(sys, dir);
    }
    out
}

/// Exclusive bound on the lattice codes of λ whose members can meet `f`.
pub fn lambda_bound(f: &StepFunction, generator: &StepFunction, j: i32, sys: &SystemConfig) -> u64 {
    sys.field().pow_q(lambda_exponent(f, generator, j))
}

fn lambda_exponent(f: &StepFunction, generator: &StepFunction, j: i32) -> u32 {
    let lg = f.support_exponent() - j;
    0.max(-lg).max(-generator.support_exponent()) as u32
}

/// `λ ↦ ∫ g(y)·conj ψ(y − λ) dy` over the ball `𝔅^{r−m}`, which holds both
/// tables and every shift, so the group correlation is exact.
fn correlation(field: &FieldConfig, g: &StepFunction, psi: &StepFunction, m: u32, exec: Exec) -> StepFunction {
    let a = fast_transform_with(field, &g.extend_span(m), exec);
    let b = fast_transform_with(field, &psi.extend_span(m), exec);
    let prod = a.values().iter().zip(b.values()).map(|(x, y)| x * y.conj()).collect();
    let h = StepFunction::from_values(field.q(), a.resolution(), prod).expect("same table shape");
    fast_inverse_transform_with(field, &h, exec)
}

/// `x ↦ ∫ c(y)·ψ(x − y) dy` over the ball `𝔅^{r−m}`.
fn convolution(field: &FieldConfig, c: &StepFunction, psi: &StepFunction, m: u32, exec: Exec) -> StepFunction {
    let a = fast_transform_with(field, &c.extend_span(m), exec);
    let b = fast_transform_with(field, &psi.extend_span(m), exec);
    let prod = a.values().iter().zip(b.values()).map(|(x, y)| x * y).collect();
    let h = StepFunction::from_values(field.q(), a.resolution(), prod).expect("same table shape");
    fast_inverse_transform_with(field, &h, exec)
}

/// All coefficients `⟨f, ψ_{j,λ}⟩` for one generator and scale, in the order
/// of [`SystemConfig::lambdas_below`]. Enlarging the λ range past the
/// returned one only adds zeros.
pub fn scale_coefficients(
    f: &StepFunction,
    generator: &StepFunction,
    j: i32,
    sys: &SystemConfig,
    exec: Exec,
) -> Vec<(LambdaIndex, Complex64)> {
    if f.is_zero() || generator.is_zero() {
        return Vec::new();
    }
    let q = sys.q();
    let field = sys.field();
    // ⟨f, D^j T_λ ψ⟩ = (s/√q)^j ⟨U^{-j} f, T_λ ψ⟩ with U the unitary dilation
    let weight = (sys.dilation_scale() / (q as f64).sqrt()).powi(j);
    let g = f.compose_dilation(field, sys.nu(), -j).scale(Complex64::new((q as f64).powf(-j as f64 / 2.0), 0.0));
    // g is constant on cells of 𝔅^r and λ permutes those cells, so ψ only
    // enters through its averages at resolution r
    let r = g.resolution().max(0);
    let g = g.refine(r).expect("r >= resolution");
    let psi = generator.cell_average(r).refine(r).expect("r >= resolution");
    let measure = (q as f64).powi(-r) * weight;
    let place = field.pow_q(r as u32);
    // shifts by λ only move digits at positions >= r, so ψ splits into
    // blocks of q^r cells that each meet one contiguous run of g
    let blocks: Vec<(u64, &[Complex64])> = psi
        .values()
        .chunks(place as usize)
        .enumerate()
        .filter(|(_, b)| b.iter().any(|v| v.re != 0.0 || v.im != 0.0))
        .map(|(hi, b)| (hi as u64, b))
        .collect();
    let e = lambda_exponent(f, generator, j);
    let lambdas = sys.lambdas_below(field.pow_q(e));
    let m = g.span().max(psi.span()).max(r as u32 + e);
    let direct_cost = lambdas.len() as u64 * blocks.len() as u64 * place;
    let butterfly_cost = 3 * field.pow_q(m) * (m as u64 + 1) * q as u64;
    let gv = g.values();
    let coeffs = if direct_cost <= butterfly_cost {
        exec.map(&lambdas, |&idx| {
            let code = sys.lambda_code(idx);
            let mut acc = Complex64::default();
            for &(hi, b) in &blocks {
                let base = (field.index_add(hi, code) * place) as usize;
                if base >= gv.len() {
                    continue;
                }
                let run = &gv[base..(base + b.len()).min(gv.len())];
                acc += run.iter().zip(b).map(|(x, y)| x * y.conj()).sum::<Complex64>();
            }
            acc * measure
        })
    } else {
        let corr = correlation(field, &g, &psi, m, exec);
        lambdas.iter().map(|&idx| corr.get(sys.lambda_code(idx) * place) * weight).collect()
    };
    lambdas.into_iter().zip(coeffs).collect()
}

/// Reference computation: materialize every member and take inner products.
pub fn scale_coefficients_brute_force(
    f: &StepFunction,
    generator: &StepFunction,
    j: i32,
    sys: &SystemConfig,
    lambda_bound: u64,
) -> Vec<(LambdaIndex, Complex64)> {
    sys.lambdas_below(lambda_bound)
        .into_iter()
        .map(|idx| (idx, f.inner(&system_member(generator, j, idx, sys))))
        .collect()
}

pub fn energy(coeffs: &[(LambdaIndex, Complex64)]) -> f64 {
    coeffs.iter().map(|(_, c)| c.norm_sqr()).sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientBlock {
    /// 0 for the refinable function, ℓ ≥ 1 for wavelets.
    pub generator: usize,
    pub scale: i32,
    pub coeffs: Vec<(LambdaIndex, [f64; 2])>,
}

/// Coefficient tables for every generator and every `j` in `scales`.
pub fn analysis(
    f: &StepFunction,
    ws: &WaveletSystem,
    scales: std::ops::Range<i32>,
    exec: Exec,
) -> Vec<CoefficientBlock> {
    if f.is_zero() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for l in 0..ws.generator_count() {
        for j in scales.clone() {
            let c = scale_coefficients(f, ws.generator(l), j, ws.system(), exec);
            out.push(CoefficientBlock {
                generator: l,
                scale: j,
                coeffs: c.into_iter().map(|(i, v)| (i, [v.re, v.im])).collect(),
            });
        }
    }
    out
}

/// `Σ_λ c_λ·ψ_{j,λ}` for the coefficients of `f`.
pub fn projection(f: &StepFunction, generator: &StepFunction, j: i32, sys: &SystemConfig) -> StepFunction {
    let r = generator.resolution().max(0);
    synthesize(f, &generator.refine(r).expect("r >= resolution"), j, sys)
}

/// Cell averages of [`projection`] at resolution `max(k, j)` for `f` at
/// resolution `k`; pairs with `f` exactly as the full projection does.
pub fn averaged_projection(f: &StepFunction, generator: &StepFunction, j: i32, sys: &SystemConfig) -> StepFunction {
    let r = (f.resolution() - j).max(0);
    synthesize(f, &generator.cell_average(r).refine(r).expect("r >= resolution"), j, sys)
}

/// `D^j` of the convolution of `psi` (at resolution `r >= 0`) with the comb
/// of coefficients of `f`.
fn synthesize(f: &StepFunction, psi: &StepFunction, j: i32, sys: &SystemConfig) -> StepFunction {
    let coeffs = scale_coefficients(f, psi, j, sys, Exec::Sequential);
    let Some(top) = coeffs.iter().map(|&(idx, _)| sys.lambda_code(idx)).max() else {
        return StepFunction::zero(sys.q(), 0);
    };
    let field = sys.field();
    let q = sys.q();
    let r = psi.resolution();
    let m = psi.span().max(r as u32 + field.index_span(top));
    let place = field.pow_q(r as u32);
    let density = (q as f64).powi(r);
    let mut comb = vec![Complex64::default(); field.pow_q(m) as usize];
    for (idx, c) in coeffs {
        comb[(sys.lambda_code(idx) * place) as usize] += c * density;
    }
    let comb = StepFunction::from_values(q, r, comb).expect("q^m entries");
    let mut out = convolution(field, &comb, psi, m, Exec::Sequential);
    let dir = if j >= 0 { Direction::Fine } else { Direction::Coarse };
    for _ in 0..j.unsigned_abs() {
        out = out.dilate(sys, dir);
    }
    out
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TwoScale {
    pub scale: i32,
    /// `Σ_λ |⟨f, φ_{j+1,λ}⟩|²`
    pub fine: f64,
    /// `Σ_λ |⟨f, φ_{j,λ}⟩|²`
    pub coarse: f64,
    /// `Σ_ℓ Σ_λ |⟨f, ψ_{ℓ,j,λ}⟩|²`
    pub detail: f64,
    pub residual: f64,
    /// `|⟨P_j f,f⟩ + ⟨Q_j f,f⟩ − ⟨P_{j+1} f,f⟩|` from materialized operators.
    pub operator_residual: Option<f64>,
}

pub fn detail_energy(f: &StepFunction, ws: &WaveletSystem, j: i32, exec: Exec) -> f64 {
    (1..ws.generator_count()).map(|l| energy(&scale_coefficients(f, ws.generator(l), j, ws.system(), exec))).sum()
}

pub fn coarse_energy(f: &StepFunction, ws: &WaveletSystem, j: i32, exec: Exec) -> f64 {
    energy(&scale_coefficients(f, ws.generator(0), j, ws.system(), exec))
}

pub fn two_scale_check(f: &StepFunction, j: i32, ws: &WaveletSystem, with_operators: bool, exec: Exec) -> TwoScale {
    let fine = coarse_energy(f, ws, j + 1, exec);
    let coarse = coarse_energy(f, ws, j, exec);
    let detail = detail_energy(f, ws, j, exec);
    let operator_residual = with_operators.then(|| {
        let sys = ws.system();
        let pj = averaged_projection(f, ws.generator(0), j, sys);
        let pj1 = averaged_projection(f, ws.generator(0), j + 1, sys);
        let mut qj = StepFunction::zero(sys.q(), 0);
        for l in 1..ws.generator_count() {
            qj = qj.add(&averaged_projection(f, ws.generator(l), j, sys));
        }
        (pj.inner(f) + qj.inner(f) - pj1.inner(f)).norm()
    });
    TwoScale { scale: j, fine, coarse, detail, residual: (fine - coarse - detail).abs(), operator_residual }
}

/// `(Σ_λ |⟨f,φ_{j0,λ}⟩|² + Σ_{j0≤j<j1} Σ_ℓ Σ_λ |⟨f,ψ_{ℓ,j,λ}⟩|²) / ‖f‖²`.
pub fn frame_ratio(f: &StepFunction, ws: &WaveletSystem, j0: i32, j1: i32, exec: Exec) -> Result<f64> {
    let n2 = f.norm2_sq();
    if f.is_zero() || n2 == 0.0 {
        return Err(Error::DegenerateInput("frame ratio of the zero function"));
    }
    let mut total = coarse_energy(f, ws, j0, exec);
    for j in j0..j1 {
        total += detail_energy(f, ws, j, exec);
    }
    Ok(total / n2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FieldConfig, FieldElement};
    use crate::framekit::haar_masks;

    fn haar_system() -> WaveletSystem {
        let sys = SystemConfig::uniform(FieldConfig::prime(2).unwrap());
        let sys = sys.clone().with_masks(haar_masks(&sys));
        WaveletSystem::build(sys, 4)
    }

    fn sample(q: u32, k: i32, m: u32) -> StepFunction {
        let n = (q as usize).pow(m);
        let v = (0..n).map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 0.3).cos())).collect();
        StepFunction::from_values(q, k, v).unwrap()
    }

    #[test]
    fn member_at_origin_is_generator() {
        let ws = haar_system();
        let psi = ws.generator(1);
        let m = system_member(psi, 0, LambdaIndex::ORIGIN, ws.system());
        assert_eq!(m.max_abs_diff(psi), 0.0);
        for j in -2..3 {
            for n in 0..5 {
                let m = system_member(psi, j, LambdaIndex::lattice(n), ws.system());
                assert!((m.norm2() - psi.norm2()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn haar_member_support() {
        let ws = haar_system();
        let sys = ws.system();
        let m = system_member(ws.generator(0), 1, LambdaIndex::lattice(1), sys);
        // φ(t^{-1}x − u(1)) lives on t·u(1) + 𝔅 = 1 + 𝔅
        let expected = StepFunction::indicator(2, 1, &FieldElement::one()).scale(Complex64::new(2f64.sqrt(), 0.0));
        assert!(m.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn fast_coefficients_match_brute_force() {
        let ws = haar_system();
        let f = sample(2, 3, 5);
        for l in 0..2 {
            for j in -1..4 {
                let fast = scale_coefficients(&f, ws.generator(l), j, ws.system(), Exec::Parallel);
                let bound = lambda_bound(&f, ws.generator(l), j, ws.system()) * 4;
                let slow = scale_coefficients_brute_force(&f, ws.generator(l), j, ws.system(), bound);
                for (idx, c) in &slow {
                    let hit = fast.iter().find(|(i, _)| i == idx).map(|x| x.1).unwrap_or_default();
                    assert!((hit - c).norm() < 1e-12, "l={l} j={j} {idx}");
                }
            }
        }
    }

    #[test]
    fn haar_orthonormal_coefficients() {
        let ws = haar_system();
        let psi = ws.generator(1).clone();
        let c = scale_coefficients(&psi, &psi, 0, ws.system(), Exec::Sequential);
        for (idx, v) in c {
            let expected = if idx == LambdaIndex::ORIGIN { psi.norm2_sq() } else { 0.0 };
            assert!((v - Complex64::new(expected, 0.0)).norm() < 1e-14);
        }
        assert!(analysis(&StepFunction::zero(2, 0), &ws, 0..3, Exec::Sequential).is_empty());
    }

    #[test]
    fn haar_two_scale_and_ratio() {
        let ws = haar_system();
        let f = sample(2, 4, 5);
        for j in 0..4 {
            let t = two_scale_check(&f, j, &ws, true, Exec::Parallel);
            assert!(t.residual < 1e-12, "{t:?}");
            assert!(t.operator_residual.unwrap() < 1e-12);
        }
        let r = frame_ratio(&f, &ws, 0, 4, Exec::Parallel).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        assert!(matches!(
            frame_ratio(&StepFunction::zero(2, 0), &ws, 0, 4, Exec::Parallel),
            Err(Error::DegenerateInput(_))
        ));
    }
}
