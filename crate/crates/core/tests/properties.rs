use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dual_lorentz_motion::acceleration::{
    accel_decompose, classify_degeneracy, coriolis_operator, degeneracy_invariants, exceptional_h_family,
    h_second_discrepancy, FamilyConstants, DEGENERACY_TOL,
};
use dual_lorentz_motion::config::{load_config_str, MotionConfig};
use dual_lorentz_motion::sampling::{random_motion, random_nilpotent_motion, random_path, random_translation};
use dual_lorentz_motion::{DegeneracyKind, DualMat3, DualScalar, DualVec3, Mode, Motion, VecFunction};

fn motion(seed: u64, nilpotent: bool) -> Motion {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    if nilpotent {
        random_nilpotent_motion(&mut r)
    } else {
        random_motion(&mut r)
    }
}

fn dual_vec() -> impl Strategy<Value = DualVec3> {
    (prop::array::uniform3(-2.0..2.0f64), prop::array::uniform3(-2.0..2.0f64))
        .prop_map(|(re, du)| DualVec3::from_arrays(re, du))
}

fn close(a: &DualVec3, b: &DualVec3, tol: f64) -> bool {
    (*a - *b).max_abs() <= tol * (1.0 + a.max_abs().max(b.max_abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_round_trip(seed in any::<u64>(), nil in any::<bool>(), t in 0.0..1.0f64, x in dual_vec()) {
        let m = motion(seed, nil);
        let y = m.transform(t, &x).unwrap();
        prop_assert!(close(&m.inverse_transform(t, &y).unwrap(), &x, 1e-10));
    }

    #[test]
    fn first_derivative_factors_through_lambda(seed in any::<u64>(), t in 0.0..1.0f64) {
        let m = motion(seed, false);
        let f = m.frame(t, 1).unwrap();
        let rhs = f.h_matrix * (*m.axis() - DualMat3::scalar(f.lambda));
        prop_assert!((f.h_matrix_derivs[0] - rhs).max_abs() <= 1e-12 * (1.0 + rhs.max_abs()));
        let r = m.regularity(t).unwrap();
        prop_assert!((r.det_h_prime - r.det_factorized).max_abs() <= 1e-10 * (1.0 + r.det_h_prime.max_abs()));
        prop_assert!(h_second_discrepancy(&m, t).unwrap() <= 1e-12);
    }

    #[test]
    fn sliding_velocity_vanishes_at_pole(seed in any::<u64>(), nil in any::<bool>(), t in 0.0..1.0f64) {
        let m = motion(seed, nil);
        let pole = m.pole_point(t).unwrap();
        let v = m.velocity_decompose(t, &VecFunction::constant(&pole.p)).unwrap();
        let f = m.frame(t, 1).unwrap();
        let scale = 1.0 + f.h_matrix_derivs[0].max_abs() * pole.p.max_abs() + f.c_derivs[1].max_abs();
        prop_assert!(v.sliding.max_abs() <= 1e-10 * scale);
        let node = m.pole_curves(t, t, 1).unwrap()[0];
        prop_assert!(close(&node.q_prime, &node.h_p_prime, 1e-9));
    }

    #[test]
    fn acceleration_identities(seed in any::<u64>(), nil in any::<bool>(), t in 0.0..1.0f64, xp in dual_vec()) {
        let m = motion(seed, nil);
        let x = random_path(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a));
        let a = accel_decompose(&m, t, &x).unwrap();
        prop_assert!(close(&a.absolute, &(a.sliding + a.relative + a.coriolis), 1e-12));
        prop_assert!(close(&a.absolute, &m.y_nth(t, &x, 2).unwrap(), 1e-12));
        let omega = coriolis_operator(&m, t).unwrap();
        let f = m.frame(t, 1).unwrap();
        let lhs = omega * (f.h_matrix * xp);
        let rhs = (f.h_matrix_derivs[0] * xp).scale(DualScalar::real(2.0));
        prop_assert!(close(&lhs, &rhs, 1e-11));
    }

    #[test]
    fn generic_motions_are_not_degenerate(seed in any::<u64>(), t in 0.0..1.0f64) {
        let m = motion(seed, false);
        let inv = degeneracy_invariants(&m, t).unwrap();
        prop_assert_eq!(inv.mu, inv.lambda * inv.lambda - inv.lambda_prime);
        prop_assert!((inv.factor - inv.det_direct).max_abs() <= 1e-10 * (1.0 + inv.factor.max_abs()));
        prop_assert_eq!(classify_degeneracy(&inv, DEGENERACY_TOL), None);
    }

    #[test]
    fn family_lambda_odes(
        seed in any::<u64>(),
        w in (3.0..4.0f64, -0.5..0.5f64, -0.5..0.5f64, prop::array::uniform3(-0.5..0.5f64)),
        l0 in (1.0..2.0f64, -0.5..0.5f64),
        l1 in (0.2..1.0f64, -0.5..0.5f64),
        t in 0.0..1.0f64,
    ) {
        let axis = DualVec3::from_arrays([w.0, w.1, w.2], w.3);
        let alpha = axis.inner(&axis).sqrt().unwrap();
        let consts = FamilyConstants { offset: DualScalar::new(l0.0, l0.1), slope: DualScalar::new(l1.0, l1.1) };
        let c = random_translation(&mut ChaCha8Rng::seed_from_u64(seed));
        for (kind, s) in [(DegeneracyKind::MuZero, 0.0), (DegeneracyKind::PlusBranch, 1.0), (DegeneracyKind::MinusBranch, -1.0)] {
            let h = exceptional_h_family(kind, alpha, consts).unwrap();
            let m = Motion::from_axis_vector(h, &axis, c.clone(), Mode::General).unwrap();
            let f = m.frame(t, 0).unwrap();
            // λ̃′ = (λ̃ − sα̃)² in dual arithmetic
            let u = f.lambda - alpha.scale(s);
            prop_assert!((f.lambda_prime - u * u).max_abs() <= 1e-10 * (1.0 + f.lambda_prime.max_abs()));
            let h2 = m.h_nth(t, 2).unwrap();
            let n = h2.re.norm_inf();
            prop_assert!(h2.det().re.abs() <= 1e-8 * (1.0 + n * n * n));
        }
    }

    #[test]
    fn config_round_trip(seed in any::<u64>(), nil in any::<bool>(), p in dual_vec()) {
        let m = motion(seed, nil);
        let cfg = MotionConfig::from_motion(&m, &[p], &Default::default());
        let back = load_config_str(&cfg.to_json()).unwrap();
        prop_assert_eq!(back.to_config(), cfg);
        prop_assert_eq!(back.motion.h(), m.h());
        prop_assert_eq!(back.motion.translation(), m.translation());
    }
}
