use lfframe::algebra::{FieldConfig, FieldElement, GfScalar};
use lfframe::harmonic::{chi, fast_transform};
use lfframe::suite::step_suite;
use lfframe::{Direction, Error, Normalization, PeriodicStepFunction, StepFunction, SystemConfig};
use num_complex::Complex64;
use proptest::prelude::*;

fn fields() -> Vec<FieldConfig> {
    vec![
        FieldConfig::prime(2).unwrap(),
        FieldConfig::prime(3).unwrap(),
        FieldConfig::new(2, 2, Some(vec![1, 1, 1])).unwrap(),
    ]
}

fn t(e: i32) -> FieldElement {
    FieldElement::prime_power(e)
}

/// Representatives of every cell of `𝔅^{k-m}` at resolution `k`.
fn grid(q: u32, k: i32, m: u32) -> Vec<FieldElement> {
    (0..(q as u64).pow(m)).map(|i| FieldElement::from_coset_index(k, i, q)).collect()
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-12
}

#[test]
fn indicator_examples() {
    let f2 = &fields()[0];
    let one_d = StepFunction::indicator(2, 0, &FieldElement::zero());
    assert_eq!(one_d.eval(&t(3)), Complex64::new(1.0, 0.0));
    assert_eq!(one_d.eval(&t(-1)), Complex64::default());
    for k in -3..4 {
        for q in [2u32, 3] {
            let b = StepFunction::indicator(q, k, &FieldElement::zero());
            assert!((b.norm2_sq() - (q as f64).powi(-k)).abs() < 1e-15);
        }
    }
    let a = StepFunction::indicator(2, 1, &FieldElement::zero());
    let b = StepFunction::indicator(2, 1, &f2.uindex(1));
    assert_eq!(a.inner(&b), Complex64::default());
    assert_eq!(one_d.inner(&one_d), Complex64::new(1.0, 0.0));
}

#[test]
fn translate_examples_and_pointwise_oracle() {
    for field in fields() {
        let q = field.q();
        let one_d = StepFunction::indicator(q, 0, &FieldElement::zero());
        let moved = one_d.translate(&field, &field.uindex(1));
        assert!(moved.max_abs_diff(&StepFunction::indicator(q, 0, &field.uindex(1))) == 0.0);
        for f in step_suite(4, 5, q, 2, -1) {
            assert_eq!(f.translate(&field, &FieldElement::zero()), f);
            let a = field.fe_add(&field.uindex(7), &FieldElement::monomial(GfScalar(1), 1));
            let g = f.translate(&field, &a);
            assert!((g.norm2() - f.norm2()).abs() <= 1e-12 * f.norm2());
            assert!(g.translate(&field, &field.fe_neg(&a)).max_abs_diff(&f) == 0.0);
            for x in grid(q, 2, 6) {
                assert_eq!(g.eval(&x), f.eval(&field.fe_sub(&x, &a)));
            }
        }
    }
}

#[test]
fn modulate_examples_and_pointwise_oracle() {
    let f2 = &fields()[0];
    let one_d = StepFunction::indicator(2, 0, &FieldElement::zero());
    let m = one_d.modulate(f2, &f2.uindex(1));
    assert_eq!(m.resolution(), 1);
    assert_eq!(m.eval(&FieldElement::zero()), Complex64::new(1.0, 0.0));
    assert!(close(m.eval(&FieldElement::one()), Complex64::new(-1.0, 0.0)));
    for field in fields() {
        for f in step_suite(8, 5, field.q(), 1, -1) {
            assert_eq!(f.modulate(&field, &FieldElement::zero()), f);
            let b = field.fe_add(&field.uindex(5), &t(2));
            let g = f.modulate(&field, &b);
            assert!((g.norm2() - f.norm2()).abs() <= 1e-12 * f.norm2());
            for x in grid(field.q(), 3, 5) {
                let want = chi(&field, &field.fe_mul(&b, &x)) * f.eval(&x);
                assert!(close(g.eval(&x), want));
            }
        }
    }
}

#[test]
fn dilate_examples_and_pointwise_oracle() {
    let f2 = fields()[0].clone();
    let haar_sys = SystemConfig::uniform(f2.clone());
    let one_d = StepFunction::indicator(2, 0, &FieldElement::zero());
    let d = one_d.dilate(&haar_sys, Direction::Fine);
    let want = StepFunction::indicator(2, 1, &FieldElement::zero()).scale(2f64.sqrt().into());
    assert!(d.max_abs_diff(&want) < 1e-15);

    let f3 = FieldConfig::prime(3).unwrap();
    let sys = SystemConfig::new(f3.clone(), 2, 1, None, Normalization::Unitary).unwrap();
    let nu = FieldElement::monomial(sys.nu(), 0);
    for f in step_suite(2, 5, 3, 2, 0) {
        let g = f.dilate(&sys, Direction::Fine);
        assert!((g.norm2() - f.norm2()).abs() <= 1e-12 * f.norm2());
        assert!(g.dilate(&sys, Direction::Coarse).max_abs_diff(&f) < 1e-14);
        let s = sys.dilation_scale();
        for x in grid(3, 3, 5) {
            let ax = f3.fe_mul(&f3.fe_mul(&t(-1), &nu), &x);
            assert!(close(g.eval(&x), f.eval(&ax) * s));
        }
    }
    let paper = sys.clone().with_normalization(Normalization::Paper);
    let f = step_suite(2, 1, 3, 2, 0).pop().unwrap();
    let ratio = f.dilate(&paper, Direction::Fine).norm2() / f.norm2();
    assert!((ratio - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn operators_commute_up_to_a_character() {
    for field in fields() {
        for f in step_suite(6, 4, field.q(), 1, -2) {
            let a = field.fe_add(&field.uindex(3), &t(0));
            let b = field.fe_add(&field.uindex(2), &t(1));
            let lhs = f.modulate(&field, &b).translate(&field, &a);
            // χ(b(x - a)) = χ(bx)·conj χ(ba)
            let phase = chi(&field, &field.fe_mul(&b, &a)).conj();
            let rhs = f.translate(&field, &a).modulate(&field, &b).scale(phase);
            assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        }
    }
}

#[test]
fn refinement_is_invisible_to_pairings() {
    for field in fields() {
        let fs = step_suite(13, 10, field.q(), 1, -2);
        for pair in fs.chunks(2) {
            let (f, g) = (&pair[0], &pair[1]);
            assert_eq!(f.refine(1).unwrap(), *f);
            let r = f.refine(3).unwrap();
            assert!((r.norm2() - f.norm2()).abs() <= 1e-12);
            assert!((r.inner(g) - f.inner(g)).norm() <= 1e-12);
            assert!(r.max_abs_diff(f) == 0.0);
            assert_eq!(f.refine(0), Err(Error::ResolutionError { from: 1, to: 0 }));
            let tf = fast_transform(&field, f);
            let tg = fast_transform(&field, g);
            assert!((tf.inner(&tg) - f.inner(g)).norm() <= 1e-9);
        }
    }
}

#[test]
fn cell_averages_match_subcell_means() {
    for field in fields() {
        let q = field.q();
        for f in step_suite(19, 4, q, 3, -1) {
            for k in [2, 0, -2] {
                let a = f.cell_average(k);
                assert_eq!(a.resolution(), k);
                let d = (3 - k) as u32;
                for x in grid(q, k, 3) {
                    let mean: Complex64 = (0..field.pow_q(d))
                        .map(|i| f.eval(&field.fe_add(&x, &FieldElement::from_coset_index(3, i, q))))
                        .sum::<Complex64>()
                        / field.pow_q(d) as f64;
                    assert!(close(a.eval(&x), mean));
                }
                let g = step_suite(20, 1, q, k, -2).pop().unwrap();
                assert!((a.inner(&g) - f.inner(&g)).norm() <= 1e-12);
            }
            assert_eq!(f.cell_average(5), f);
        }
    }
}

#[test]
fn disjoint_tables_have_exactly_zero_inner_product() {
    let f3 = &fields()[1];
    let f = step_suite(1, 1, 3, 2, 0).pop().unwrap();
    let g = f.translate(f3, &f3.uindex(1));
    assert_eq!(f.inner(&g), Complex64::default());
}

#[test]
fn zero_function_policy() {
    let f2 = &fields()[0];
    let sys = SystemConfig::uniform(f2.clone());
    let z = StepFunction::zero(2, 3);
    assert!(z.translate(f2, &f2.uindex(3)).is_zero());
    assert!(z.modulate(f2, &f2.uindex(3)).is_zero());
    assert!(z.dilate(&sys, Direction::Fine).is_zero());
    assert!(fast_transform(f2, &z).is_zero());
    assert_eq!(z.norm2(), 0.0);
}

#[test]
fn csv_round_trip_and_errors() {
    for field in fields() {
        for f in step_suite(17, 3, field.q(), 2, -1) {
            let text = f.to_csv(&field);
            let (g_field, g) = StepFunction::from_csv(&text).unwrap();
            assert_eq!(g_field, field);
            assert_eq!(g, f);
        }
    }
    assert!(matches!(StepFunction::from_csv(""), Err(Error::Data { .. })));
    let f2 = &fields()[0];
    let text = StepFunction::indicator(2, 0, &FieldElement::zero()).to_csv(f2);
    let broken = text.replace("1,0", "1,zero");
    match StepFunction::from_csv(&broken) {
        Err(Error::Data { line, .. }) => assert_eq!(line, 4),
        other => panic!("{other:?}"),
    }
}

#[test]
fn periodic_translation_wraps_on_the_ring() {
    for field in fields() {
        let vals: Vec<Complex64> = (0..field.pow_q(3)).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let f = PeriodicStepFunction::new(field.q(), 3, vals).unwrap();
        assert_eq!(f.translate(&field, &field.uindex(5)), f);
        let a = field.fe_add(&FieldElement::one(), &t(2));
        let g = f.translate(&field, &a);
        assert!((g.norm2_sq() - f.norm2_sq()).abs() < 1e-9);
        assert_eq!(g.translate(&field, &field.fe_neg(&a)), f);
        for (i, x) in grid(field.q(), 3, 3).iter().enumerate() {
            let y = field.fe_sub(x, &a).keep_from(0);
            let j = y.coset_index(3, field.q()).unwrap();
            assert_eq!(g.values()[i], f.values()[j as usize]);
        }
    }
}

proptest! {
    #[test]
    fn unitary_operators_preserve_norm(fi in 0usize..3, seed in 0u64..500, n in 0u64..40, e in -2i32..3) {
        let field = &fields()[fi];
        let f = step_suite(seed, 1, field.q(), 1, -1).pop().unwrap();
        let a = field.fe_add(&field.uindex(n), &t(e));
        let n0 = f.norm2();
        prop_assert!((f.translate(field, &a).norm2() - n0).abs() <= 1e-12 * n0);
        prop_assert!((f.modulate(field, &a).norm2() - n0).abs() <= 1e-12 * n0);
        let sys = SystemConfig::uniform(field.clone());
        for dir in [Direction::Fine, Direction::Coarse] {
            prop_assert!((f.dilate(&sys, dir).norm2() - n0).abs() <= 1e-12 * n0);
        }
    }

    #[test]
    fn csv_round_trip_any_table(fi in 0usize..3, seed in 0u64..500, k in -3i32..4, m in 0u32..4) {
        let field = &fields()[fi];
        let f = step_suite(seed, 1, field.q(), k, k - m as i32).pop().unwrap();
        let (_, g) = StepFunction::from_csv(&f.to_csv(field)).unwrap();
        prop_assert_eq!(g, f);
    }
}
