use opmodel::hardy::{
    blaschke_series, block_backward_shift, block_forward_shift, caradus_certificate, inner_semigroup_symbol,
    model_space_basis, BlaschkeSpec, PowerSeries, ToeplitzTrunc,
};
use opmodel::{random, ComplexMatrix, Tolerances, C64};
use proptest::prelude::*;

const ONE: C64 = C64::new(1.0, 0.0);

fn complex() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
}

fn series(max_degree: usize, order: usize) -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec(complex(), 1..=max_degree + 1).prop_map(move |mut c| {
        c.resize(order + 1, C64::new(0.0, 0.0));
        PowerSeries::new(c).unwrap()
    })
}

fn zeros(max_modulus: f64, max_count: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((0.0f64..max_modulus, 0.0f64..std::f64::consts::TAU), 1..=max_count)
        .prop_map(|v| v.into_iter().map(|(r, t)| C64::from_polar(r, t)).collect())
}

fn max_coeff_diff(a: &PowerSeries, b: &PowerSeries) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `prod (a - z) / (1 - conj(a) z) * |a| / a`, with the factor `z` for `a = 0`.
fn blaschke_rational(zs: &[C64], z: C64) -> C64 {
    zs.iter().fold(ONE, |acc, &a| {
        if a.norm() == 0.0 {
            acc * z
        } else {
            acc * (a.norm() / a) * (a - z) / (ONE - a.conj() * z)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn toeplitz_of_product_is_product(phi in series(4, 24), psi in series(4, 24), n in 1usize..20) {
        let tp = ToeplitzTrunc::analytic(&phi.mul(&psi), n).unwrap().matrix();
        let prod = ToeplitzTrunc::analytic(&phi, n).unwrap().matrix().matmul(&ToeplitzTrunc::analytic(&psi, n).unwrap().matrix());
        prop_assert!((&tp - &prod).max_abs() <= 1e-13);
    }

    #[test]
    fn series_algebra(f in series(6, 30), g in series(6, 30)) {
        prop_assert!(max_coeff_diff(&f.mul(&g), &g.mul(&f)) <= 1e-14);
        let small = f.scale(C64::new(0.5, 0.0));
        let e = small.exp().mul(&small.scale(C64::new(-1.0, 0.0)).exp());
        prop_assert!(max_coeff_diff(&e, &PowerSeries::one(30)) <= 1e-10);
        let shifted = f.add(&PowerSeries::constant(C64::new(3.0, 0.0), 30));
        let inv = shifted.inv().unwrap();
        prop_assert!(max_coeff_diff(&inv.mul(&shifted), &PowerSeries::one(30)) <= 1e-10);
    }

    #[test]
    fn blaschke_is_unimodular_and_matches_rational(zs in zeros(0.6, 4), theta in 0.0f64..std::f64::consts::TAU, r in 0.0f64..0.5) {
        let b = BlaschkeSpec::with_zeros(zs.clone()).unwrap();
        let on_circle = C64::from_polar(1.0, theta);
        prop_assert!((b.eval(on_circle).norm() - 1.0).abs() <= 1e-13);
        prop_assert!((b.eval(on_circle) - blaschke_rational(&zs, on_circle)).norm() <= 1e-13);
        // geometric tail at |z| <= 0.5 with zeros of modulus < 0.6 is below 0.3^k
        let s = blaschke_series(&b, 200);
        let z = C64::from_polar(r, theta);
        prop_assert!((s.eval(z) - blaschke_rational(&zs, z)).norm() <= 1e-12);
    }

    #[test]
    fn model_space_is_orthogonal_to_range(zs in zeros(0.4, 3)) {
        let tol = Tolerances { rank_tol: 1e-10, ..Tolerances::default() };
        let n = 64;
        let b = BlaschkeSpec::with_zeros(zs.clone()).unwrap();
        let phi = blaschke_series(&b, n - 1);
        let basis = model_space_basis(&phi, n, &tol).unwrap();
        prop_assert_eq!(basis.len(), zs.len());
        for k in 0..=n / 2 {
            let shifted: Vec<C64> = (0..n).map(|i| if i >= k { phi.get(i - k) } else { C64::new(0.0, 0.0) }).collect();
            for v in &basis {
                let ip: C64 = v.iter().zip(&shifted).map(|(a, b)| a.conj() * b).sum();
                prop_assert!(ip.norm() <= 1e-10, "k = {k}: {ip}");
            }
        }
    }

    #[test]
    fn inner_symbol_cocycle(zs in zeros(0.5, 2), s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let order = 48;
        let phi = blaschke_series(&BlaschkeSpec::with_zeros(zs).unwrap(), order);
        let lhs = inner_semigroup_symbol(&phi, s + t).unwrap();
        let rhs = inner_semigroup_symbol(&phi, s).unwrap().mul(&inner_semigroup_symbol(&phi, t).unwrap());
        prop_assert!(max_coeff_diff(&lhs, &rhs) <= 1e-10);
        prop_assert!(max_coeff_diff(&inner_semigroup_symbol(&phi, 0.0).unwrap(), &PowerSeries::one(order)) <= 1e-15);
    }

    #[test]
    fn caradus_roles_swap_under_adjoint(d in 1usize..4, blocks in 3usize..8) {
        let tol = Tolerances::default();
        let n = d * blocks;
        let back = caradus_certificate(&block_backward_shift(d, n), Some(d), &tol).unwrap();
        let fwd = caradus_certificate(&block_forward_shift(d, n), Some(d), &tol).unwrap();
        prop_assert_eq!(block_forward_shift(d, n), block_backward_shift(d, n).adjoint());
        prop_assert_eq!(back.interior_kernel_dim, d);
        prop_assert!(back.interior_surjective);
        prop_assert_eq!(fwd.interior_kernel_dim, 0);
        prop_assert!(!fwd.interior_surjective);
        prop_assert_eq!(back.rank, fwd.rank);
        prop_assert_eq!(back.kernel_dim, d);
    }

    #[test]
    fn random_unitary_conjugation_preserves_rank(d in 1usize..3, blocks in 2usize..5, seed in any::<u64>()) {
        let tol = Tolerances::default();
        let n = d * blocks;
        let u = random::unitary(&mut random::rng(seed), n);
        let m: ComplexMatrix = u.matmul(&block_backward_shift(d, n)).matmul(&u.adjoint());
        let report = caradus_certificate(&m, Some(d), &tol).unwrap();
        prop_assert_eq!(report.kernel_dim, d);
    }
}
