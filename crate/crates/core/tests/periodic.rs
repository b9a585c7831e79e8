use lfframe::algebra::{FieldConfig, FieldElement, LambdaIndex};
use lfframe::framekit::{fourier_masks, haar_masks, system_member, WaveletSystem};
use lfframe::harmonic::{character_on_ring, fourier_coefficient};
use lfframe::periodic::{
    coarse_energy_scan, coarse_sum, detail_sum, periodic_frame_check, periodic_member, periodic_two_scale_check,
    periodize, PeriodicSystemSpec,
};
use lfframe::suite::{periodic_suite, step_suite};
use lfframe::{Error, Exec, PeriodicStepFunction, StepFunction, SystemConfig};
use num_complex::Complex64;
use proptest::prelude::*;

fn spec_for(q: u32, j_max: u32, perturb: bool) -> PeriodicSystemSpec {
    let sys = SystemConfig::uniform(FieldConfig::prime(q).unwrap());
    let mut masks = if q == 2 { haar_masks(&sys) } else { fourier_masks(&sys) };
    if perturb {
        masks[1] = masks[1].perturbed(LambdaIndex::lattice(1), 0.01.into());
    }
    PeriodicSystemSpec::new(WaveletSystem::build(sys.with_masks(masks), 8), j_max, Exec::default())
}

/// `Σ_r f(x + u(r))` evaluated cell by cell on 𝔇.
fn periodize_oracle(field: &FieldConfig, f: &StepFunction) -> Vec<Complex64> {
    let k = f.resolution().max(0);
    let translates = field.pow_q((-f.support_exponent()).max(0) as u32);
    (0..field.pow_q(k as u32))
        .map(|i| {
            let x = FieldElement::from_coset_index(k, i, field.q());
            (0..translates).map(|r| f.eval(&field.fe_add(&x, &field.uindex(r)))).sum()
        })
        .collect()
}

#[test]
fn periodize_matches_translate_sums() {
    for q in [2u32, 3] {
        let field = FieldConfig::prime(q).unwrap();
        for (k, s) in [(2, -1), (0, -2), (-1, -3), (3, 0)] {
            for f in step_suite(7, 5, q, k, s) {
                let p = periodize(&f);
                let want = periodize_oracle(&field, &f);
                assert_eq!(p.values().len(), want.len());
                for (a, b) in p.values().iter().zip(&want) {
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn periodization_contracts_l1() {
    for f in step_suite(3, 50, 3, 2, -2) {
        let p = periodize(&f);
        assert!(p.as_step().l1_norm() <= f.l1_norm() + 1e-12);
    }
    let nonneg = StepFunction::indicator(2, 1, &FieldElement::prime_power(-2));
    assert!((periodize(&nonneg).as_step().l1_norm() - nonneg.l1_norm()).abs() < 1e-15);
}

#[test]
fn periodic_coefficients_are_full_line_pairings() {
    for q in [2u32, 3] {
        let spec = spec_for(q, 3, false);
        let ws = spec.wavelets();
        let sys = ws.system();
        for f in periodic_suite(4, 3, q, 3) {
            let unfolded = f.unfold();
            for l in 0..ws.generator_count() {
                for j in 0..=2u32 {
                    for label in 0..spec.label_count(j) {
                        let g = system_member(ws.generator(l), j as i32, sys.label_to_lambda(label), sys);
                        let got = f.inner(&periodic_member(l, j, label, &spec).unwrap());
                        assert!((got - unfolded.inner(&g)).norm() < 1e-12, "q={q} l={l} j={j} {label}");
                    }
                }
            }
        }
    }
}

#[test]
fn members_have_unit_series_energy() {
    for q in [2u32, 3] {
        let spec = spec_for(q, 3, false);
        let field = spec.wavelets().system().field().clone();
        for l in 0..spec.wavelets().generator_count() {
            for j in 0..=3u32 {
                for label in [0, spec.label_count(j) - 1] {
                    let m = periodic_member(l, j, label, &spec).unwrap();
                    let series: f64 =
                        (0..field.pow_q(m.resolution())).map(|n| fourier_coefficient(&field, &m, n).norm_sqr()).sum();
                    assert!((series - m.norm2_sq()).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
#[allow(clippy::needless_range_loop)]
fn averaged_bank_pairs_exactly_with_coarse_functions() {
    let sys = SystemConfig::uniform(FieldConfig::prime(3).unwrap());
    let mut masks = fourier_masks(&sys);
    masks[0] = masks[0].perturbed(LambdaIndex::lattice(0), 0.01.into());
    let ws = WaveletSystem::build(sys.with_masks(masks), 8);
    assert!(ws.generator(1).resolution() > 3);
    let spec = PeriodicSystemSpec::new(ws, 3, Exec::default());
    let members: Vec<Vec<Vec<PeriodicStepFunction>>> = (0..3)
        .map(|l| {
            (0..=3u32)
                .map(|j| (0..spec.label_count(j)).map(|label| periodic_member(l, j, label, &spec).unwrap()).collect())
                .collect()
        })
        .collect();
    for k in [0, 2, 3] {
        for f in periodic_suite(6, 2, 3, k) {
            for j in 0..=3usize {
                let exact = |l: usize| -> f64 { members[l][j].iter().map(|m| f.inner(m).norm_sqr()).sum() };
                assert!((coarse_sum(&f, j as u32, &spec, Exec::default()) - exact(0)).abs() < 1e-12);
                assert!((detail_sum(&f, j as u32, &spec, Exec::default()) - exact(1) - exact(2)).abs() < 1e-12);
            }
        }
    }
    let fine = periodic_suite(0, 1, 3, 4).pop().unwrap();
    assert!(matches!(coarse_energy_scan(&fine, 0.1, &spec, Exec::default()), Err(Error::TruncationError { .. })));
    assert!(matches!(periodic_two_scale_check(&fine, 0, &spec, Exec::default()), Err(Error::TruncationError { .. })));
}

#[test]
fn member_lookup_errors() {
    let spec = spec_for(3, 2, false);
    assert!(matches!(periodic_member(0, 1, 3, &spec), Err(Error::IndexError { label: 3, bound: 3 })));
    assert!(matches!(periodic_member(3, 0, 0, &spec), Err(Error::IndexError { .. })));
    assert!(matches!(periodic_member(0, 3, 0, &spec), Err(Error::TruncationError { .. })));
}

#[test]
fn coarse_scan_finds_the_resolution_of_a_character() {
    let spec = spec_for(2, 4, false);
    let field = FieldConfig::prime(2).unwrap();
    for n in 0..8u64 {
        let chi = character_on_ring(&field, n, 3);
        let scan = coarse_energy_scan(&chi, 0.01, &spec, Exec::default()).unwrap();
        let want = if n == 0 { 0 } else { 64 - n.leading_zeros() };
        assert_eq!(scan.j_found, Some(want), "n={n} {:?}", scan.sums);
    }
}

#[test]
fn tight_systems_satisfy_the_periodic_identities() {
    for q in [2u32, 3] {
        let spec = spec_for(q, 4, false);
        for k in [0, 2, 4] {
            for f in periodic_suite(1, 10, q, k) {
                for j in 0..4 {
                    let ts = periodic_two_scale_check(&f, j, &spec, Exec::default()).unwrap();
                    assert!(ts.residual <= 1e-9);
                    assert!((ts.fine - coarse_sum(&f, j + 1, &spec, Exec::default())).abs() == 0.0);
                    assert!((ts.detail - detail_sum(&f, j, &spec, Exec::default())).abs() == 0.0);
                }
                let t = periodic_frame_check(&f, &spec, Exec::default()).unwrap();
                assert!(t.residual <= 1e-9, "{t:?}");
                assert!(t.identity_gap <= 1e-12);
                assert!(t.limit_defect.abs() <= 1e-9);
                assert!(t.tail <= 1e-9);
            }
        }
        let zero = PeriodicStepFunction::constant(q, Complex64::default());
        let t = periodic_frame_check(&zero, &spec, Exec::default()).unwrap();
        assert_eq!((t.total, t.residual), (0.0, 0.0));
    }
}

#[test]
fn perturbed_system_breaks_the_frame_sum() {
    for q in [2u32, 3] {
        let spec = spec_for(q, 4, true);
        let worst = periodic_suite(0, 10, q, 4)
            .iter()
            .map(|f| periodic_frame_check(f, &spec, Exec::default()).unwrap())
            .inspect(|t| assert!(t.identity_gap <= 1e-12))
            .map(|t| t.residual)
            .fold(0.0, f64::max);
        assert!(worst > 1e-3, "q={q} {worst}");
    }
}

#[test]
fn truncation_errors() {
    let spec = spec_for(2, 3, false);
    let f = periodic_suite(0, 1, 2, 4).pop().unwrap();
    assert!(matches!(periodic_frame_check(&f, &spec, Exec::default()), Err(Error::TruncationError { .. })));
    let g = periodic_suite(0, 1, 2, 2).pop().unwrap();
    assert!(matches!(periodic_two_scale_check(&g, 3, &spec, Exec::default()), Err(Error::TruncationError { .. })));
}

#[test]
fn sequential_and_parallel_agree() {
    let par = spec_for(3, 3, false);
    let sys = par.wavelets().clone();
    let seq = PeriodicSystemSpec::new(sys, 3, Exec::Sequential);
    for f in periodic_suite(2, 4, 3, 3) {
        let a = periodic_frame_check(&f, &par, Exec::Parallel).unwrap();
        let b = periodic_frame_check(&f, &seq, Exec::Sequential).unwrap();
        assert_eq!(a.total.to_bits(), b.total.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coarse_sums_are_monotone_and_bounded(seed in 0u64..1000, k in 0u32..4) {
        let spec = spec_for(3, 3, false);
        let f = periodic_suite(seed, 1, 3, k).pop().unwrap();
        let n2 = f.norm2_sq();
        let mut prev = 0.0;
        for j in 0..=3 {
            let s = coarse_sum(&f, j, &spec, Exec::default());
            prop_assert!(s >= prev - 1e-12 && s <= n2 * (1.0 + 1e-12));
            prev = s;
        }
    }

    #[test]
    fn translation_preserves_periodic_energy(seed in 0u64..1000, shift in 0u64..27) {
        let spec = spec_for(3, 3, false);
        let field = spec.wavelets().system().field().clone();
        let f = periodic_suite(seed, 1, 3, 3).pop().unwrap();
        let g = f.translate(&field, &FieldElement::from_coset_index(3, shift, 3));
        prop_assert!(shift == 0 || g != f);
        let a = periodic_frame_check(&f, &spec, Exec::default()).unwrap();
        let b = periodic_frame_check(&g, &spec, Exec::default()).unwrap();
        prop_assert!((a.norm2 - b.norm2).abs() <= 1e-9);
        prop_assert!((a.total - b.total).abs() <= 1e-9);
    }
}
