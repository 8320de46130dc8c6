use opmodel::classify::{classify_operator, concavity_defect_matrix};
use opmodel::numkit::{self, ComplexMatrix, C64};
use opmodel::operators::{ShiftTail, StructuredOperator, WeightedShift};
use opmodel::{random, Tolerances};
use proptest::prelude::*;

#[derive(Debug, Clone, Copy)]
enum Family {
    Unitary,
    PerturbedUnitary,
    Gaussian,
    ScaledUnitary,
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Unitary),
        Just(Family::PerturbedUnitary),
        Just(Family::Gaussian),
        Just(Family::ScaledUnitary),
    ]
}

fn sample(f: Family, seed: u64, n: usize) -> ComplexMatrix {
    let mut r = random::rng(seed);
    let u = random::unitary(&mut r, n);
    match f {
        Family::Unitary => u,
        Family::PerturbedUnitary => {
            let h = random::gaussian_matrix(&mut r, n).hermitian_part().scale_real(1e-3);
            u.matmul(&h.shift_diag(C64::new(1.0, 0.0)))
        }
        Family::Gaussian => random::gaussian_matrix(&mut r, n),
        Family::ScaledUnitary => u.scale_real(1.05),
    }
}

/// `min` over random unit vectors of `2 ||Tx||^2 - ||T^2 x||^2 - ||x||^2`.
fn sampled_concavity_margin(m: &ComplexMatrix, seed: u64, samples: usize) -> f64 {
    let mut r = random::rng(seed);
    let n = m.dim();
    let mut worst = f64::INFINITY;
    for _ in 0..samples {
        let x = random::unit_vector(&mut r, n);
        let tx = m.mul_vec(&x);
        let ttx = m.mul_vec(&tx);
        let v = 2.0 * numkit::vec_norm(&tx).powi(2) - numkit::vec_norm(&ttx).powi(2) - 1.0;
        worst = worst.min(v);
    }
    worst
}

fn shift_defect_oracle(s: &WeightedShift, k: usize) -> f64 {
    let (a, b) = (s.weight(k), s.weight(k + 1));
    a * a * b * b - 2.0 * a * a + 1.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn concave_flag_implies_sampled_margin(f in family(), seed in any::<u64>()) {
        let tol = Tolerances::default();
        let m = sample(f, seed, 6);
        let report = classify_operator(&StructuredOperator::Dense(m.clone()), &tol).unwrap();
        if report.concave.holds {
            prop_assert!(sampled_concavity_margin(&m, seed ^ 0xC0, 10_000) >= -tol.psd_tol);
        }
        if matches!(f, Family::Unitary) {
            prop_assert!(report.concave.holds);
        }
    }

    #[test]
    fn concave_and_invertible_is_unitary(f in family(), seed in any::<u64>(), n in 1usize..8) {
        let tol = Tolerances::default();
        let m = sample(f, seed, n);
        let report = classify_operator(&StructuredOperator::Dense(m.clone()), &tol).unwrap();
        if report.concave.holds && report.bounded_below.holds {
            let gram = &m.adjoint().matmul(&m) - &ComplexMatrix::identity(n);
            prop_assert!(gram.norm_two() <= 1e-8);
        }
    }

    #[test]
    fn two_isometry_is_concave_and_two_contraction(f in family(), seed in any::<u64>(), n in 1usize..7) {
        let tol = Tolerances::default();
        let m = sample(f, seed, n);
        let report = classify_operator(&StructuredOperator::Dense(m.clone()), &tol).unwrap();
        prop_assert_eq!(report.two_isometry.holds, report.concave.holds && report.two_contraction.holds);
        // independent evaluation of the defect
        let t2 = m.matmul(&m);
        let d = &(&t2.adjoint().matmul(&t2) - &m.adjoint().matmul(&m).scale_real(2.0)) + &ComplexMatrix::identity(n);
        prop_assert!((&d - &concavity_defect_matrix(&m)).norm_two() <= 1e-12 * (1.0 + d.norm_two()));
        if report.two_isometry.holds {
            prop_assert!(d.norm_two() <= 10.0 * tol.psd_tol);
        }
    }

    #[test]
    fn shift_flags_match_weight_algebra(
        head in prop::collection::vec(0.5f64..2.0, 0..5),
        w in 0.5f64..2.0,
        offsets in prop::option::of((0.5f64..3.0, 0.5f64..3.0)),
    ) {
        let tol = Tolerances::default();
        let tail = match offsets {
            Some((a, b)) => ShiftTail { scale: w, num_offset: a, den_offset: b },
            None => ShiftTail::constant(w),
        };
        let s = WeightedShift::with_tail(head, tail).unwrap();
        let report = classify_operator(&StructuredOperator::Shift(s.clone()), &tol).unwrap();
        // the weights are eventually monotone, so a long prefix sees the extremes up to the limit
        let samples: Vec<f64> = (0..4000).map(|k| shift_defect_oracle(&s, k)).collect();
        let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert!(report.concave.margin >= max - 1e-12);
        prop_assert!(report.two_contraction.margin <= min + 1e-12);
        if max > tol.psd_tol + 1e-9 {
            prop_assert!(!report.concave.holds);
        }
        if min < -tol.psd_tol - 1e-9 {
            prop_assert!(!report.two_contraction.holds);
        }
        prop_assert_eq!(report.two_isometry.holds, report.concave.holds && report.two_contraction.holds);
    }
}

#[test]
fn dirichlet_and_isometric_are_two_isometries() {
    let tol = Tolerances::default();
    for s in [WeightedShift::dirichlet(), WeightedShift::isometric()] {
        let r = classify_operator(&StructuredOperator::Shift(s), &tol).unwrap();
        assert!(r.two_isometry.holds && r.pure.holds && r.wandering.holds && r.bounded_below.holds);
    }
}
