use opmodel::analytic_model::{build_model, coefficients, kernel_eval, verify_intertwining, AnalyticModel};
use opmodel::operators::{Ambient, FiniteSupportVector, ShiftTail, StructuredOperator, WeightedShift};
use opmodel::{random, Tolerances, C64};
use proptest::prelude::*;

fn shift_strategy() -> impl Strategy<Value = WeightedShift> {
    (
        prop::collection::vec(0.5f64..2.0, 0..5),
        0.5f64..2.0,
        prop::option::of((0.5f64..3.0, 0.5f64..3.0)),
    )
        .prop_map(|(head, w, offsets)| {
            let tail = match offsets {
                Some((a, b)) => ShiftTail { scale: w, num_offset: a, den_offset: b },
                None => ShiftTail::constant(w),
            };
            WeightedShift::with_tail(head, tail).unwrap()
        })
}

fn model_of(s: &WeightedShift) -> AnalyticModel {
    build_model(&StructuredOperator::Shift(s.clone()), &Tolerances::default()).unwrap()
}

fn max_entry(m: &opmodel::ComplexMatrix) -> f64 {
    m.max_abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn defect_projection_identities(s in shift_strategy()) {
        let inv = model_of(&s).invariants(24).unwrap();
        prop_assert!(inv.idempotent <= 1e-14);
        prop_assert!(inv.self_adjoint <= 1e-14);
        prop_assert!(inv.annihilates_range <= 1e-14);
        prop_assert!(inv.left_inverse <= 1e-14);
        prop_assert!(inv.defect_gram <= 1e-14);
    }

    #[test]
    fn projection_kills_range(s in shift_strategy(), seed in any::<u64>(), len in 1usize..16) {
        let m = model_of(&s);
        let x = random::finite_support(&mut random::rng(seed), len);
        let tx = m.source().apply(&x).unwrap();
        prop_assert!(m.project(&tx).unwrap().norm() <= 1e-14 * tx.norm());
    }

    #[test]
    fn coefficient_norm_is_pullback(s in shift_strategy(), seed in any::<u64>(), len in 1usize..16) {
        let m = model_of(&s);
        let x = random::finite_support(&mut random::rng(seed), len);
        let c = coefficients(&m, &x, len + 2).unwrap();
        prop_assert!(c.exhausted);
        // ||Ux||^2 = sum beta_n^2 |f_n|^2 in the weighted Hardy norm of the model
        let weighted: f64 = c.coeffs.iter().enumerate().map(|(n, v)| m.beta(n).unwrap().powi(2) * v[0].norm_sqr()).sum();
        prop_assert!((weighted - x.norm_sqr()).abs() <= 1e-12 * x.norm_sqr());
    }

    #[test]
    fn parseval_for_isometric_shift(seed in any::<u64>(), len in 1usize..32) {
        let m = model_of(&WeightedShift::isometric());
        let x = random::finite_support(&mut random::rng(seed), len);
        let c = coefficients(&m, &x, len).unwrap();
        let total: f64 = c.coeffs.iter().map(|v| v.iter().map(|z| z.norm_sqr()).sum::<f64>()).sum();
        prop_assert!((total - x.norm_sqr()).abs() <= 1e-13 * x.norm_sqr());
    }

    #[test]
    fn telescoping_decomposition(s in shift_strategy(), seed in any::<u64>(), len in 1usize..12, n in 0usize..14) {
        let m = model_of(&s);
        let t = m.source();
        let x = random::finite_support(&mut random::rng(seed), len);
        // sum_{k<n} T^k P L^k x + T^n L^n x
        let mut lkx = x.clone();
        let mut sum = FiniteSupportVector::zero(Ambient::Infinite);
        for k in 0..n {
            let mut term = m.project(&lkx).unwrap();
            for _ in 0..k {
                term = t.apply(&term).unwrap();
            }
            sum = sum.add(&term);
            lkx = m.apply_l(&lkx).unwrap();
        }
        let mut rest = lkx;
        for _ in 0..n {
            rest = t.apply(&rest).unwrap();
        }
        prop_assert!(sum.add(&rest).sub(&x).norm() <= 1e-12 * x.norm());
    }

    #[test]
    fn intertwining_on_random_vectors(s in shift_strategy(), seed in any::<u64>(), len in 1usize..16) {
        let m = model_of(&s);
        let x = random::finite_support(&mut random::rng(seed), len);
        let r = verify_intertwining(&m, &x, len + 4).unwrap();
        prop_assert!(r.pass, "{}", r.residual);
    }

    #[test]
    fn kernel_is_hermitian(s in shift_strategy(), seed in any::<u64>()) {
        let tol = Tolerances::default();
        let m = model_of(&s);
        let mut r = random::rng(seed);
        let lambda = random::point_in_disc(&mut r, 0.6 * m.radius());
        let z = random::point_in_disc(&mut r, 0.6 * m.radius());
        let a = kernel_eval(&m, lambda, z, &tol).unwrap();
        let b = kernel_eval(&m, z, lambda, &tol).unwrap();
        let diff = &a.matrix - &b.matrix.adjoint();
        prop_assert!(max_entry(&diff) <= a.tail_bound + b.tail_bound + 1e-13, "{}", max_entry(&diff));
    }

    #[test]
    fn dirichlet_kernel_closed_form(
        lr in 0.0f64..0.7, lt in 0.0f64..std::f64::consts::TAU,
        zr in 0.0f64..0.7, zt in 0.0f64..std::f64::consts::TAU,
    ) {
        let tol = Tolerances::default();
        let m = model_of(&WeightedShift::dirichlet());
        let lambda = C64::from_polar(lr, lt);
        let z = C64::from_polar(zr, zt);
        let k = kernel_eval(&m, lambda, z, &tol).unwrap();
        let w = z * lambda.conj();
        let want = if w.norm() < 1e-300 { C64::new(1.0, 0.0) } else { -(C64::new(1.0, 0.0) - w).ln() / w };
        prop_assert!((k.matrix[(0, 0)] - want).norm() <= tol.tail_tol + 1e-14, "{} vs {}", k.matrix[(0, 0)], want);
    }

    #[test]
    fn kernel_at_origin_is_identity(a in shift_strategy(), b in shift_strategy(), zr in 0.0f64..0.45, zt in 0.0f64..6.3) {
        let tol = Tolerances::default();
        let sum = StructuredOperator::direct_sum(vec![StructuredOperator::Shift(a), StructuredOperator::Shift(b)]).unwrap();
        let m = build_model(&sum, &tol).unwrap();
        prop_assert_eq!(m.defect_dim(), 2);
        let z = C64::from_polar(zr * m.radius(), zt);
        let k = kernel_eval(&m, C64::new(0.0, 0.0), z, &tol).unwrap();
        let diff = &k.matrix - &opmodel::ComplexMatrix::identity(2);
        prop_assert!(max_entry(&diff) <= 1e-12);
    }
}
