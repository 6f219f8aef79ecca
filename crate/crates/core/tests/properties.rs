use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use ncfk::action::act_spectral;
use ncfk::alpha::{alpha, theta};
use ncfk::ncfk::{from_bytes, to_bytes, NcfkData};
use ncfk::random::{complex_normal, dense_kernel, dense_plane, seeded, smooth_plane};
use ncfk::shifts::{heisenberg_action, heisenberg_unitary, modulate_op, translate_op};
use ncfk::{fourier_2d, LineGrid, PlaneGrid, SchattenExponent, Sign};

fn grid(n: usize) -> LineGrid {
    LineGrid::self_dual(n).unwrap()
}

fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - DMatrix::<Complex64>::identity(n, n)).norm()
}

fn sizes() -> impl Strategy<Value = usize> {
    prop_oneof![Just(8usize), Just(16), Just(32)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn alpha_is_linear(seed in any::<u64>(), n in sizes()) {
        let g = grid(n);
        let mut rng = seeded(seed);
        let (x, y) = (dense_kernel(&g, &mut rng), dense_kernel(&g, &mut rng));
        let (a, b) = (complex_normal(&mut rng), complex_normal(&mut rng));
        let lhs = alpha(&x.scaled(a).add(&y.scaled(b)).unwrap()).unwrap();
        let rhs = alpha(&x).unwrap().scaled(a).add(&alpha(&y).unwrap().scaled(b)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10 * (1.0 + rhs.sup_norm()));
    }

    #[test]
    fn theta_is_an_isometry(seed in any::<u64>(), n in sizes()) {
        let plane = PlaneGrid::self_dual(n).unwrap();
        let f = dense_plane(&plane, &mut seeded(seed));
        let s2 = theta(&f).unwrap().schatten_norm(SchattenExponent::TWO);
        prop_assert!((s2 / f.l2_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inversion_is_exact(seed in any::<u64>(), n in sizes()) {
        let g = grid(n);
        let x = dense_kernel(&g, &mut seeded(seed));
        let back = theta(&alpha(&x).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&x).unwrap() < 1e-11);
    }

    #[test]
    fn schatten_norms_decrease_in_p(seed in any::<u64>(), p in 1.0f64..8.0, step in 0.0f64..4.0) {
        let x = dense_kernel(&grid(16), &mut seeded(seed));
        let sv = x.singular_values();
        let small = sv.norm(SchattenExponent::new(p).unwrap());
        let large = sv.norm(SchattenExponent::new(p + step).unwrap());
        prop_assert!(large <= small * (1.0 + 1e-12));
        prop_assert!(sv.norm(SchattenExponent::INFINITY) <= large * (1.0 + 1e-12));
    }

    #[test]
    fn trace_is_bounded_by_trace_norm(seed in any::<u64>(), n in sizes()) {
        let x = dense_kernel(&grid(n), &mut seeded(seed));
        prop_assert!(x.trace().norm() <= x.trace_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn shifts_are_unitary(x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let g = grid(32);
        prop_assert!(unitarity_defect(&translate_op(&g, x).unwrap()) < 1e-11);
        prop_assert!(unitarity_defect(&modulate_op(&g, y)) < 1e-11);
        prop_assert!(unitarity_defect(&heisenberg_unitary(&g, x, y).unwrap()) < 1e-11);
    }

    #[test]
    fn heisenberg_action_is_a_group_action(
        seed in any::<u64>(),
        a in (-6i32..6, -6i32..6),
        b in (-6i32..6, -6i32..6),
    ) {
        let g = grid(16);
        let x = dense_kernel(&g, &mut seeded(seed));
        let s = |k: i32| k as f64 * g.h();
        let two_steps = heisenberg_action(s(a.0), s(a.1), &heisenberg_action(s(b.0), s(b.1), &x).unwrap()).unwrap();
        let one_step = heisenberg_action(s(a.0 + b.0), s(a.1 + b.1), &x).unwrap();
        let scale = x.kernel().iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(two_steps.max_abs_diff(&one_step).unwrap() < 1e-10 * scale);
    }

    #[test]
    fn spectral_action_is_bilinear(seed in any::<u64>()) {
        let g = grid(16);
        let plane = PlaneGrid::square(g);
        let mut rng = seeded(seed);
        let (q1, q2) = (smooth_plane(&plane, 2, &mut rng), smooth_plane(&plane, 2, &mut rng));
        let (x, y) = (dense_kernel(&g, &mut rng), dense_kernel(&g, &mut rng));
        let c = complex_normal(&mut rng);
        let act = |q: &ncfk::PlaneFunction, x: &ncfk::KernelOperator| act_spectral(q, x).unwrap().value;
        let in_q = act(&q1.add(&q2.scaled(c)).unwrap(), &x);
        let split_q = act(&q1, &x).add(&act(&q2, &x).scaled(c)).unwrap();
        prop_assert!(in_q.max_abs_diff(&split_q).unwrap() < 1e-9 * (1.0 + split_q.kernel().norm()));
        let in_x = act(&q1, &x.add(&y.scaled(c)).unwrap());
        let split_x = act(&q1, &x).add(&act(&q1, &y).scaled(c)).unwrap();
        prop_assert!(in_x.max_abs_diff(&split_x).unwrap() < 1e-9 * (1.0 + split_x.kernel().norm()));
    }

    #[test]
    fn ncfk_round_trip_is_bit_exact(seed in any::<u64>(), n in sizes(), h in 0.01f64..2.0) {
        let g = LineGrid::explicit(n, h).unwrap();
        let mut rng = seeded(seed);
        let kernel = NcfkData::Kernel(dense_kernel(&g, &mut rng));
        let plane = NcfkData::Plane(dense_plane(&PlaneGrid::new(g, grid(n)), &mut rng));
        for data in [kernel, plane] {
            let bytes = to_bytes(&data);
            let back = from_bytes(&bytes).unwrap();
            prop_assert_eq!(to_bytes(&back), bytes);
            prop_assert_eq!(back, data);
        }
    }

    #[test]
    fn plane_fourier_round_trip(seed in any::<u64>(), n in sizes()) {
        let plane = PlaneGrid::self_dual(n).unwrap();
        let f = dense_plane(&plane, &mut seeded(seed));
        let back = fourier_2d(&fourier_2d(&f, Sign::Negative).unwrap(), Sign::Positive).unwrap();
        prop_assert!(back.max_abs_diff(&f).unwrap() < 1e-12 * (1.0 + f.sup_norm()));
        let hat = fourier_2d(&f, Sign::Negative).unwrap();
        prop_assert!((hat.l2_norm() / f.l2_norm() - 1.0).abs() < 1e-12);
    }
}
