//! Seeded generators of random inputs for property checks.
//!
//! [`random_motion`] draws motions whose `H′` and `H″` stay regular on
//! `t ∈ [0, 1]`: `h` is positive, increasing and convex with `λ̃` bounded
//! away from zero, and the axis is either timelike or spacelike with
//! `α₁ > 2 max|λ|`.

use rand::Rng;

use crate::dual_matrix::DualMat3;
use crate::dual_scalar::{DualPolynomial, DualScalar};
use crate::function::{ScalarFunction, Term, VecFunction};
use crate::lorentz::{DualVec3, Vec3};
use crate::motion::{Mode, Motion};

pub fn uniform_dual<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> DualScalar {
    DualScalar::new(rng.gen_range(lo..hi), rng.gen_range(lo..hi))
}

pub fn uniform_vec<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> Vec3 {
    Vec3(std::array::from_fn(|_| rng.gen_range(lo..hi)))
}

pub fn uniform_dual_vec<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> DualVec3 {
    DualVec3::new(uniform_vec(rng, lo, hi), uniform_vec(rng, lo, hi))
}

/// `hat(w̃)` with every entry of `w̃` in `[−1, 1]`, both parts.
pub fn random_antisymmetric<R: Rng + ?Sized>(rng: &mut R) -> DualMat3 {
    DualMat3::hat(&uniform_dual_vec(rng, -1.0, 1.0))
}

fn signed<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let x = rng.gen_range(lo..hi);
    if rng.gen_bool(0.5) {
        x
    } else {
        -x
    }
}

/// Timelike (`|w₃|` dominant) or strongly spacelike (`|w₁| ≥ 3.5`) axis with
/// dual part in `[−0.5, 0.5]`.
pub fn random_axis<R: Rng + ?Sized>(rng: &mut R) -> DualVec3 {
    let re = if rng.gen_bool(0.5) {
        Vec3([rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), signed(rng, 1.0, 2.0)])
    } else {
        Vec3([signed(rng, 3.5, 4.0), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)])
    };
    DualVec3::new(re, uniform_vec(rng, -0.5, 0.5))
}

/// `(a₀ + a₁t + a₂t²)e^{rt}`, optionally plus `c/(t + d)`, with real parts
/// keeping `h`, `h′` and `h″` positive on `[0, 1]`.
pub fn random_h<R: Rng + ?Sized>(rng: &mut R) -> ScalarFunction {
    let mut du = || rng.gen_range(-0.5..0.5);
    let dus = [du(), du(), du()];
    let num = DualPolynomial::new(vec![
        DualScalar::new(rng.gen_range(1.0..2.0), dus[0]),
        DualScalar::new(rng.gen_range(0.0..0.2), dus[1]),
        DualScalar::new(rng.gen_range(0.05..0.15), dus[2]),
    ]);
    let mut h = ScalarFunction::exp_poly(num, rng.gen_range(0.5..1.0));
    if rng.gen_bool(0.5) {
        let c = DualScalar::new(rng.gen_range(0.1..0.3), rng.gen_range(-0.3..0.3));
        let den = DualPolynomial::linear(DualScalar::real(rng.gen_range(2.0..3.0)), DualScalar::ONE);
        h.push(Term::new(DualPolynomial::constant(c), den, 0.0).expect("monic denominator"));
    }
    h
}

/// Cubic dual polynomial per coordinate with coefficients in `[−1, 1]`.
pub fn random_translation<R: Rng + ?Sized>(rng: &mut R) -> VecFunction {
    VecFunction(std::array::from_fn(|_| {
        let coeffs = (0..4).map(|_| uniform_dual(rng, -1.0, 1.0)).collect();
        ScalarFunction::polynomial(coeffs)
    }))
}

/// Smooth moving-frame path: quadratic plus a decaying exponential term.
pub fn random_path<R: Rng + ?Sized>(rng: &mut R) -> VecFunction {
    VecFunction(std::array::from_fn(|_| {
        let coeffs = (0..3).map(|_| uniform_dual(rng, -1.0, 1.0)).collect();
        let mut f = ScalarFunction::polynomial(coeffs);
        let amp = DualPolynomial::constant(uniform_dual(rng, -0.5, 0.5));
        f.push(Term::exp_poly(amp, rng.gen_range(-1.0..0.0)));
        f
    }))
}

pub fn random_motion<R: Rng + ?Sized>(rng: &mut R) -> Motion {
    let h = random_h(rng);
    let w = random_axis(rng);
    let c = random_translation(rng);
    Motion::from_axis_vector(h, &w, c, Mode::General).expect("generated motion is valid")
}

/// Motion with a pure dual axis (`Ã² = 0`).
pub fn random_nilpotent_motion<R: Rng + ?Sized>(rng: &mut R) -> Motion {
    let h = random_h(rng);
    let w = DualVec3::new(Vec3::ZERO, uniform_vec(rng, -1.0, 1.0));
    let c = random_translation(rng);
    Motion::from_axis_vector(h, &w, c, Mode::Nilpotent).expect("generated motion is valid")
}
