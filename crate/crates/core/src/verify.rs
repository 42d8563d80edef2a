//! Seeded invariant suite behind the `verify` command.
//!
//! Each group draws random inputs from a ChaCha8 stream derived from the
//! seed and the group index, records the worst relative residual, and passes
//! when that residual is at most `tol`. The report is deterministic for a
//! given seed, tolerance and configuration.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::acceleration::{
    accel_decompose, coriolis_operator, exceptional_h_family, h_second_discrepancy, DegeneracyInvariants, DegeneracyKind,
    FamilyConstants,
};
use crate::dual_matrix::{DualMat3, Mat3};
use crate::dual_scalar::DualScalar;
use crate::error::Result;
use crate::lorentz::{DualVec3, Vec3};
use crate::motion::{Mode, Motion};
use crate::sampling::{
    random_antisymmetric, random_axis, random_motion, random_nilpotent_motion, random_path, random_translation,
    uniform_dual, uniform_dual_vec,
};

#[derive(Debug, Clone, PartialEq)]
pub struct GroupResult {
    pub name: &'static str,
    pub samples: usize,
    /// Worst residual; `NaN` poisons the group into failure.
    pub worst: f64,
    pub skipped: usize,
}

impl GroupResult {
    pub fn passed(&self, tol: f64) -> bool {
        self.samples > 0 && self.worst <= tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub seed: u64,
    pub tol: f64,
    pub groups: Vec<GroupResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.groups.iter().all(|g| g.passed(self.tol))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verify seed={} tol={:e}", self.seed, self.tol)?;
        for g in &self.groups {
            let tag = if g.passed(self.tol) { "PASS" } else { "FAIL" };
            write!(f, "{tag} {:<24} worst={:.3e} samples={}", g.name, g.worst, g.samples)?;
            if g.skipped > 0 {
                write!(f, " skipped={}", g.skipped)?;
            }
            writeln!(f)?;
        }
        let failed = self.groups.iter().filter(|g| !g.passed(self.tol)).count();
        writeln!(f, "{} of {} groups passed", self.groups.len() - failed, self.groups.len())
    }
}

/// Tracks the worst residual; any NaN sticks.
#[derive(Default)]
struct Worst {
    value: f64,
    samples: usize,
    skipped: usize,
}

impl Worst {
    fn add(&mut self, r: f64) {
        self.samples += 1;
        if r.is_nan() || self.value.is_nan() {
            self.value = f64::NAN;
        } else {
            self.value = self.value.max(r);
        }
    }

    fn add_result(&mut self, r: Result<f64>) {
        match r {
            Ok(v) => self.add(v),
            Err(_) => self.skipped += 1,
        }
    }

    fn finish(self, name: &'static str) -> GroupResult {
        GroupResult {
            name,
            samples: self.samples,
            worst: self.value,
            skipped: self.skipped,
        }
    }
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / (1.0 + scale)
}

fn rel_dual(a: DualScalar, b: DualScalar) -> f64 {
    rel((a - b).max_abs(), a.max_abs().max(b.max_abs()))
}

fn rel_vec(a: &DualVec3, b: &DualVec3) -> f64 {
    rel((*a - *b).max_abs(), a.max_abs().max(b.max_abs()))
}

fn rel_mat(a: &DualMat3, b: &DualMat3) -> f64 {
    rel((*a - *b).max_abs(), a.max_abs().max(b.max_abs()))
}

fn dual_ring(rng: &mut ChaCha8Rng) -> GroupResult {
    let mut w = Worst::default();
    for _ in 0..2000 {
        let [a, b, c] = [(); 3].map(|_| uniform_dual(rng, -10.0, 10.0));
        w.add(rel_dual((a * b) * c, a * (b * c)));
        w.add(rel_dual(a * (b + c), a * b + a * c));
        if b.re.abs() > 1e-3 {
            w.add_result(a.checked_div(b).map(|q| rel_dual(q * b, a)));
        }
    }
    w.finish("dual_ring")
}

fn lorentz_cross(rng: &mut ChaCha8Rng) -> GroupResult {
    let mut w = Worst::default();
    for i in 0..3 {
        for j in 0..3 {
            let m = [1.0, 1.0, -1.0][i] * (i == j) as u8 as f64;
            w.add((Vec3::basis(i).inner(&Vec3::basis(j)) - m).abs());
        }
    }
    for _ in 0..1000 {
        let a = uniform_dual_vec(rng, -1.0, 1.0);
        let b = uniform_dual_vec(rng, -1.0, 1.0);
        let c = a.cross(&b);
        let scale = a.max_abs() * b.max_abs() * (a.max_abs() + b.max_abs());
        w.add(rel(c.inner(&a).max_abs(), scale));
        w.add(rel(c.inner(&b).max_abs(), scale));
    }
    w.finish("lorentz_cross")
}

fn exponential(rng: &mut ChaCha8Rng) -> GroupResult {
    let mut w = Worst::default();
    for _ in 0..100 {
        let a = random_antisymmetric(rng);
        for &t in &[0.1, 1.0, 2.0] {
            let g = a.expm(t);
            w.add(g.orthogonality_residual());
            w.add((g.det() - DualScalar::ONE).max_abs());
        }
        let (s, t) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        w.add(rel_mat(&a.expm(s + t), &(a.expm(s) * a.expm(t))));
    }
    w.finish("expm_orthogonality")
}

fn nilpotency(rng: &mut ChaCha8Rng) -> GroupResult {
    let mut w = Worst::default();
    for _ in 0..100 {
        let pure = DualMat3::hat(&DualVec3::new(Vec3::ZERO, uniform_dual_vec(rng, -1.0, 1.0).du));
        let t = rng.gen_range(-2.0..2.0);
        let g = pure.expm(t);
        let exact = DualMat3::IDENTITY + pure.scale(DualScalar::real(t));
        w.add((g - exact).max_abs());
        w.add((pure * g - pure).max_abs());
        let general = random_antisymmetric(rng);
        // a nonzero real axis can never square to zero
        let sq = (general * general).re.max_abs();
        w.add(if general.re == Mat3::ZERO || sq > 0.0 { 0.0 } else { 1.0 });
    }
    w.finish("nilpotency")
}

fn motion_samples(rng: &mut ChaCha8Rng, motion: Option<&Motion>, count: usize) -> Vec<Motion> {
    match motion {
        Some(m) => vec![m.clone()],
        None => (0..count)
            .map(|i| if i % 4 == 3 { random_nilpotent_motion(rng) } else { random_motion(rng) })
            .collect(),
    }
}

fn times(rng: &mut ChaCha8Rng, range: (f64, f64), n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(range.0..=range.1)).collect()
}

fn structure(rng: &mut ChaCha8Rng, motion: Option<&Motion>, range: (f64, f64)) -> GroupResult {
    let mut w = Worst::default();
    for m in motion_samples(rng, motion, 20) {
        for t in times(rng, range, 5) {
            w.add_result((|| {
                let f = m.frame(t, 2)?;
                let shifted = *m.axis() - DualMat3::scalar(f.lambda);
                let mut r = rel_mat(&f.h_matrix_derivs[0], &(f.h_matrix * shifted));
                let r2 = m.regularity(t)?;
                r = r.max(rel_dual(r2.det_h_prime, r2.det_factorized));
                r = r.max(rel_dual(r2.det_shifted, r2.char_poly));
                r = r.max(h_second_discrepancy(&m, t)?);
                Ok(r)
            })());
        }
    }
    w.finish("derivative_structure")
}

fn poles(rng: &mut ChaCha8Rng, motion: Option<&Motion>, range: (f64, f64)) -> GroupResult {
    let mut w = Worst::default();
    for m in motion_samples(rng, motion, 10) {
        for t in times(rng, range, 5) {
            w.add_result((|| {
                let f = m.frame(t, 2)?;
                let pole = m.pole_point(t)?;
                let sliding = f.h_matrix_derivs[0] * pole.p + f.c_derivs[1];
                let scale = f.h_matrix_derivs[0].max_abs() * pole.p.max_abs() + f.c_derivs[1].max_abs();
                let mut r = rel(sliding.max_abs(), scale);
                let node = &m.pole_curves(t, t, 1)?[0];
                r = r.max(rel_vec(&node.q_prime, &node.h_p_prime));
                Ok(r)
            })());
        }
    }
    w.finish("pole_points")
}

fn acceleration(rng: &mut ChaCha8Rng, motion: Option<&Motion>, range: (f64, f64)) -> GroupResult {
    let mut w = Worst::default();
    for m in motion_samples(rng, motion, 20) {
        let path = random_path(rng);
        for t in times(rng, range, 5) {
            let xp = uniform_dual_vec(rng, -1.0, 1.0);
            w.add_result((|| {
                let a = accel_decompose(&m, t, &path)?;
                let mut r = rel_vec(&a.absolute, &(a.sliding + a.relative + a.coriolis));
                r = r.max(rel_vec(&a.absolute, &m.y_nth(t, &path, 2)?));
                let omega = coriolis_operator(&m, t)?;
                let f = m.frame(t, 1)?;
                let lhs = omega * (f.h_matrix * xp);
                let rhs = (f.h_matrix_derivs[0] * xp).scale(DualScalar::real(2.0));
                Ok(r.max(rel_vec(&lhs, &rhs)))
            })());
        }
    }
    w.finish("acceleration_split")
}

fn factorization(rng: &mut ChaCha8Rng) -> GroupResult {
    let mut w = Worst::default();
    for _ in 0..1000 {
        let a = random_antisymmetric(rng);
        let lambda = uniform_dual(rng, -2.0, 2.0);
        let lambda_prime = uniform_dual(rng, -2.0, 2.0);
        w.add_result(
            DegeneracyInvariants::from_parts(0.0, lambda, lambda_prime, &a).map(|inv| rel_dual(inv.factor, inv.det_direct)),
        );
    }
    w.finish("degeneracy_factor")
}

fn families(rng: &mut ChaCha8Rng) -> GroupResult {
    let mut w = Worst::default();
    for i in 0..12 {
        let kind = [DegeneracyKind::MuZero, DegeneracyKind::PlusBranch, DegeneracyKind::MinusBranch][i % 3];
        let axis = loop {
            let a = random_axis(rng);
            if a.inner(&a).re > 1.0 {
                break a;
            }
        };
        let alpha = axis.inner(&axis).sqrt().expect("spacelike axis");
        let consts = FamilyConstants {
            offset: DualScalar::new(rng.gen_range(1.0..2.0), rng.gen_range(-0.5..0.5)),
            slope: DualScalar::new(rng.gen_range(0.2..1.0), rng.gen_range(-0.5..0.5)),
        };
        let Ok(h) = exceptional_h_family(kind, alpha, consts) else {
            w.skipped += 1;
            continue;
        };
        let Ok(m) = Motion::from_axis_vector(h, &axis, random_translation(rng), Mode::General) else {
            w.skipped += 1;
            continue;
        };
        for t in times(rng, (0.0, 1.0), 5) {
            w.add_result(m.h_nth(t, 2).map(|h2| {
                let n = h2.re.norm_inf();
                h2.det().re.abs() / (1.0 + n * n * n)
            }));
        }
    }
    w.finish("exceptional_families")
}

/// Runs every invariant group. With a configured motion, the motion-based
/// groups evaluate it over `range` instead of random motions.
pub fn run_verify(seed: u64, tol: f64, motion: Option<&Motion>, range: (f64, f64)) -> Report {
    let stream = |k: u64| ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k));
    let groups = vec![
        dual_ring(&mut stream(1)),
        lorentz_cross(&mut stream(2)),
        exponential(&mut stream(3)),
        nilpotency(&mut stream(4)),
        structure(&mut stream(5), motion, range),
        poles(&mut stream(6), motion, range),
        acceleration(&mut stream(7), motion, range),
        factorization(&mut stream(8)),
        families(&mut stream(9)),
    ];
    Report { seed, tol, groups }
}
