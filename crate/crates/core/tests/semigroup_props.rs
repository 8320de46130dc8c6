use opmodel::classify::generator_concavity_criterion;
use opmodel::numkit::{self, ComplexMatrix, C64};
use opmodel::semigroup::{
    cogenerator, concavity_equivalence_suite, evolve, growth_bound, inverse_cayley, EquivalenceConfig, SemigroupSpec,
};
use opmodel::{random, Tolerances};
use proptest::prelude::*;

#[derive(Debug, Clone, Copy)]
enum Kind {
    Skew,
    NegativeDefinite,
    Stable,
    Generic,
}

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Skew), Just(Kind::NegativeDefinite), Just(Kind::Stable), Just(Kind::Generic)]
}

fn generator(k: Kind, seed: u64, n: usize) -> ComplexMatrix {
    let mut r = random::rng(seed);
    match k {
        Kind::Skew => random::skew_hermitian(&mut r, n),
        Kind::NegativeDefinite => random::shifted_negative_definite(&mut r, n),
        Kind::Stable => random::stable_generator(&mut r, n),
        Kind::Generic => random::gaussian_matrix(&mut r, n),
    }
}

/// `A - I` comfortably invertible.
fn cogenerator_exists(a: &ComplexMatrix) -> bool {
    numkit::inverse_condition(&a.shift_diag(C64::new(-1.0, 0.0))) >= 1e-6
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn similarity_exponential(k in kind(), seed in any::<u64>(), n in 1usize..7, mu in 0.0f64..2.0, t in 0.0f64..1.5) {
        let tol = Tolerances::default();
        let a = generator(k, seed, n);
        let mut r = random::rng(seed ^ 0xB);
        let rm = random::invertible_with_condition(&mut r, n, 10.0);
        let rinv = numkit::inverse(&rm, &tol).unwrap();
        let b = SemigroupSpec::new(rm.matmul(&a).matmul(&rinv).scale_real(mu));
        let lhs = evolve(&b, t).unwrap();
        let rhs = rm.matmul(&evolve(&SemigroupSpec::new(a), mu * t).unwrap()).matmul(&rinv);
        prop_assert!((&lhs - &rhs).norm_two() <= tol.residual_tol * rhs.norm_two().max(1.0));
    }

    #[test]
    fn cogenerator_commutes_with_semigroup(k in kind(), seed in any::<u64>(), n in 1usize..7) {
        let tol = Tolerances::default();
        let a = generator(k, seed, n);
        prop_assume!(cogenerator_exists(&a));
        let s = SemigroupSpec::new(a);
        let v = cogenerator(&s, &tol).unwrap();
        for t in [0.0, 0.25, 0.5, 1.0, 2.0] {
            let tt = evolve(&s, t).unwrap();
            let c = &v.matmul(&tt) - &tt.matmul(&v);
            prop_assert!(c.norm_two() <= tol.residual_tol * (v.norm_two() * tt.norm_two()).max(1.0));
        }
    }

    #[test]
    fn cayley_round_trip(k in kind(), seed in any::<u64>(), n in 1usize..8) {
        let tol = Tolerances::default();
        let a = generator(k, seed, n);
        prop_assume!(cogenerator_exists(&a));
        let s = SemigroupSpec::new(a.clone());
        let v = cogenerator(&s, &tol).unwrap();
        let back = inverse_cayley(&v, &tol).unwrap();
        let scale = a.norm_two().max(1.0) * numkit::singular_values(&a.shift_diag(C64::new(-1.0, 0.0)))[0].max(1.0);
        prop_assert!((&back - &a).norm_two() <= 1e-9 * scale);
    }

    #[test]
    fn generator_criterion_gives_contractive_cogenerator(k in kind(), seed in any::<u64>(), n in 1usize..7) {
        let tol = Tolerances::default();
        let a = generator(k, seed, n);
        prop_assume!(cogenerator_exists(&a));
        let v = cogenerator(&SemigroupSpec::new(a.clone()), &tol).unwrap();
        if generator_concavity_criterion(&a, &tol).unwrap().holds {
            prop_assert!(v.norm_two() <= 1.0 + 1e-8);
        }
        // dissipative generators have contractive cogenerators as well
        if numkit::hermitian_max_eig(&a.hermitian_part()).unwrap() <= 0.0 {
            prop_assert!(v.norm_two() <= 1.0 + 1e-8);
        }
    }

    #[test]
    fn concave_suite_implies_nonpositive_growth(k in kind(), seed in any::<u64>(), n in 1usize..5) {
        let tol = Tolerances::default();
        let a = generator(k, seed, n);
        prop_assume!(cogenerator_exists(&a));
        let s = SemigroupSpec::new(a);
        let config = EquivalenceConfig { samples: 4, ..EquivalenceConfig::default() };
        let report = concavity_equivalence_suite(&s, &config, &tol).unwrap();
        prop_assert!(report.agree, "{:?}", report);
        if report.conditions().iter().all(|&c| c) {
            prop_assert!(growth_bound(&s).unwrap().omega <= 1e-10);
        }
        if matches!(k, Kind::Skew) {
            prop_assert!(report.conditions().iter().all(|&c| c));
        }
    }
}

#[test]
fn evolve_examples() {
    let a = ComplexMatrix::from_real_diag(&[-1.0]).unwrap();
    let s = SemigroupSpec::new(a);
    let half = evolve(&s, 2f64.ln()).unwrap();
    assert!((half[(0, 0)] - C64::new(0.5, 0.0)).norm() < 1e-15);
    assert_eq!(evolve(&s, 0.0).unwrap(), ComplexMatrix::identity(1));
}
