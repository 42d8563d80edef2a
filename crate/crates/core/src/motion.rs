//! One-parameter homothetic exponential motions `Ỹ = H(t)X̃ + C̃(t)` with
//! `H(t) = h̃(t)·e^{tÃ}`.
//!
//! `Ã` is a constant Lorentz anti-symmetric dual matrix, `h̃` a non-constant
//! dual scalar function and `C̃` the translation. Since `Ã` commutes with
//! `g = e^{tÃ}`, derivatives of `H` of any order take the form
//! `H⁽ⁿ⁾ = [Σₖ C(n,k) h̃⁽ⁿ⁻ᵏ⁾ Ãᵏ] g`, which is what [`Motion::h_nth`] evaluates.
//!
//! In [`Mode::Nilpotent`] (`Ã² = 0`, i.e. a pure-dual axis) `g = I + tÃ` and
//! `Ãg = Ã`, and the velocity split reduces to `(h̃′g + h̃Ã)X̃ + C̃′`.

use std::borrow::Cow;

use crate::dual_matrix::{DualMat3, Mat3, MATRIX_TOL};
use crate::dual_scalar::DualScalar;
use crate::error::{Error, Result};
use crate::function::{ScalarFunction, VecFunction};
use crate::lorentz::{CausalClass, DualVec3, Vec3, CAUSAL_TOL};

/// Derivative orders and axis powers built eagerly at construction.
const CACHED_ORDER: usize = 6;

/// Relative threshold under which `|det.re|` of a 3×3 matrix is treated as
/// zero: `|det| < 1e-12 · (1 + ‖m‖∞³)`.
pub(crate) fn det_is_singular(det: f64, m: &DualMat3) -> bool {
    let n = m.re.norm_inf();
    det.abs() < MATRIX_TOL * (1.0 + n * n * n)
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Evenly spaced nodes on `[t0, t1]`; a single node sits at `t0`.
pub fn sample_nodes(t0: f64, t1: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![t0],
        n => {
            let step = (t1 - t0) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { t1 } else { t0 + step * i as f64 })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    General,
    Nilpotent,
}

#[derive(Debug, Clone)]
pub struct Motion {
    h: ScalarFunction,
    axis: DualMat3,
    translation: VecFunction,
    mode: Mode,
    h_derivs: Vec<ScalarFunction>,
    c_derivs: Vec<VecFunction>,
    axis_powers: Vec<DualMat3>,
}

impl Motion {
    /// Validates and builds a motion.
    ///
    /// Rejects: `Ã` not Lorentz anti-symmetric, Nilpotent mode with `Ã² ≠ 0`,
    /// constant `h̃` (the affine case), and `C̃′ ≡ 0` (pure rotation).
    pub fn new(h: ScalarFunction, axis: DualMat3, translation: VecFunction, mode: Mode) -> Result<Self> {
        let scale = 1.0 + axis.max_abs();
        if !axis.is_lorentz_antisymmetric(MATRIX_TOL * scale) {
            return Err(Error::InvalidMotion(format!(
                "axis matrix is not Lorentz anti-symmetric (residual {:e})",
                axis.antisymmetry_residual()
            )));
        }
        if mode == Mode::Nilpotent && !axis.is_nilpotent(MATRIX_TOL * scale * scale) {
            return Err(Error::InvalidMotion(
                "nilpotent mode requires Ã² = 0 (pure dual axis)".into(),
            ));
        }
        if h.is_constant() {
            return Err(Error::InvalidMotion("h̃ = h̃(t) ≠ constant is required".into()));
        }
        let c_prime = translation.derivative();
        if c_prime.is_identically_zero(0.0) {
            return Err(Error::InvalidMotion("C̃′ must not vanish identically".into()));
        }
        Ok(Self::build(h, axis, translation, mode))
    }

    /// Builds from the axis vector `w̃` of `Ã = hat(w̃)`.
    pub fn from_axis_vector(h: ScalarFunction, w: &DualVec3, translation: VecFunction, mode: Mode) -> Result<Self> {
        Self::new(h, DualMat3::hat(w), translation, mode)
    }

    fn build(h: ScalarFunction, axis: DualMat3, translation: VecFunction, mode: Mode) -> Self {
        let mut h_derivs = vec![h.clone()];
        let mut c_derivs = vec![translation.clone()];
        let mut axis_powers = vec![DualMat3::IDENTITY];
        for k in 1..=CACHED_ORDER {
            h_derivs.push(h_derivs[k - 1].derivative());
            c_derivs.push(c_derivs[k - 1].derivative());
            axis_powers.push(axis_powers[k - 1] * axis);
        }
        Self {
            h,
            axis,
            translation,
            mode,
            h_derivs,
            c_derivs,
            axis_powers,
        }
    }

    pub fn h(&self) -> &ScalarFunction {
        &self.h
    }

    pub fn axis(&self) -> &DualMat3 {
        &self.axis
    }

    /// `w̃` with `Ã = hat(w̃)`.
    pub fn axis_vector(&self) -> DualVec3 {
        self.axis.vee().expect("axis validated as anti-symmetric")
    }

    pub fn translation(&self) -> &VecFunction {
        &self.translation
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn h_derivative(&self, n: usize) -> Cow<'_, ScalarFunction> {
        match self.h_derivs.get(n) {
            Some(f) => Cow::Borrowed(f),
            None => Cow::Owned(self.h_derivs[CACHED_ORDER].nth_derivative(n - CACHED_ORDER)),
        }
    }

    pub fn translation_derivative(&self, n: usize) -> Cow<'_, VecFunction> {
        match self.c_derivs.get(n) {
            Some(f) => Cow::Borrowed(f),
            None => Cow::Owned(self.c_derivs[CACHED_ORDER].nth_derivative(n - CACHED_ORDER)),
        }
    }

    /// `Ãᵏ`.
    pub fn axis_power(&self, k: usize) -> Cow<'_, DualMat3> {
        match self.axis_powers.get(k) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(self.axis_powers[CACHED_ORDER] * self.axis.powi((k - CACHED_ORDER) as u32)),
        }
    }

    /// `h̃⁽ⁿ⁾(t)`.
    pub fn h_value(&self, t: f64, n: usize) -> Result<DualScalar> {
        self.h_derivative(n).eval(t)
    }

    /// `C̃⁽ⁿ⁾(t)`.
    pub fn translation_value(&self, t: f64, n: usize) -> Result<DualVec3> {
        self.translation_derivative(n).eval(t)
    }

    /// `g(t) = e^{tÃ}`, or exactly `I + tÃ` in nilpotent mode.
    pub fn rotation(&self, t: f64) -> DualMat3 {
        match self.mode {
            Mode::General => self.axis.expm(t),
            Mode::Nilpotent => DualMat3::IDENTITY + self.axis.scale(DualScalar::real(t)),
        }
    }

    /// `[Σₖ C(n,k) h̃⁽ⁿ⁻ᵏ⁾ Ãᵏ]` from precomputed values `h̃⁽⁰⁾..h̃⁽ⁿ⁾`.
    fn h_nth_factor(&self, h_vals: &[DualScalar], n: usize) -> DualMat3 {
        let kmax = match self.mode {
            Mode::General => n,
            Mode::Nilpotent => n.min(1),
        };
        (0..=kmax).fold(DualMat3::ZERO, |acc, k| {
            let c = h_vals[n - k].scale(binomial(n, k));
            acc + self.axis_power(k).scale(c)
        })
    }

    fn h_values(&self, t: f64, upto: usize) -> Result<Vec<DualScalar>> {
        let vals = (0..=upto).map(|n| self.h_value(t, n)).collect::<Result<Vec<_>>>()?;
        if vals[0].is_zero_divisor() {
            return Err(Error::ZeroRealPart { re: vals[0].re });
        }
        Ok(vals)
    }

    /// Evaluates `g`, `H`, `H′..H⁽ᵒʳᵈᵉʳ⁾`, `λ̃`, `λ̃′` and `C̃..C̃⁽ᵒʳᵈᵉʳ⁾` at `t`.
    pub fn frame(&self, t: f64, order: usize) -> Result<MotionFrame> {
        let h_vals = self.h_values(t, order.max(2))?;
        let g = self.rotation(t);
        let h_matrix = g.scale(h_vals[0]);
        let h_matrix_derivs = (1..=order).map(|n| self.h_nth_factor(&h_vals, n) * g).collect();
        let (h, h1, h2) = (h_vals[0], h_vals[1], h_vals[2]);
        let lambda = -h1.checked_div(h)?;
        // λ̃′ = −(h̃″h̃ − h̃′²)/h̃²
        let lambda_prime = -(h2 * h - h1 * h1).checked_div(h * h)?;
        let c_derivs = (0..=order)
            .map(|n| self.translation_value(t, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(MotionFrame {
            t,
            g,
            h_matrix,
            h_matrix_derivs,
            h_values: h_vals,
            lambda,
            lambda_prime,
            c_derivs,
        })
    }

    /// `Ỹ = H X̃ + C̃`.
    pub fn transform(&self, t: f64, x: &DualVec3) -> Result<DualVec3> {
        let f = self.frame(t, 0)?;
        Ok(f.h_matrix * *x + f.c_derivs[0])
    }

    /// `X̃ = H⁻¹(Ỹ − C̃)`.
    pub fn inverse_transform(&self, t: f64, y: &DualVec3) -> Result<DualVec3> {
        let f = self.frame(t, 0)?;
        solve_inverse_transform(&f.h_matrix, &f.c_derivs[0], y)
    }

    /// `H⁽ⁿ⁾(t)`; `n = 0` gives `H`.
    pub fn h_nth(&self, t: f64, n: usize) -> Result<DualMat3> {
        let h_vals = self.h_values(t, n)?;
        Ok(self.h_nth_factor(&h_vals, n) * self.rotation(t))
    }

    /// `Ỹ⁽ⁿ⁾ = Σₖ C(n,k) H⁽ⁿ⁻ᵏ⁾ X̃⁽ᵏ⁾ + C̃⁽ⁿ⁾` for a moving-frame path `X̃(t)`.
    pub fn y_nth(&self, t: f64, x: &VecFunction, n: usize) -> Result<DualVec3> {
        let f = self.frame(t, n)?;
        let mut acc = f.c_derivs[n];
        let mut xk = Cow::Borrowed(x);
        for k in 0..=n {
            if k > 0 {
                xk = Cow::Owned(xk.derivative());
            }
            let term = f.h_matrix_deriv(n - k) * xk.eval(t)?;
            acc = acc + term.scale(DualScalar::real(binomial(n, k)));
        }
        Ok(acc)
    }

    /// Splits `Ỹ′` into sliding `H′X̃ + C̃′` and relative `H X̃′` parts.
    pub fn velocity_decompose(&self, t: f64, x: &VecFunction) -> Result<VelocityDecomposition> {
        let f = self.frame(t, 1)?;
        let x0 = x.eval(t)?;
        let x1 = x.derivative().eval(t)?;
        let sliding = match self.mode {
            Mode::General => f.h_matrix_derivs[0] * x0 + f.c_derivs[1],
            Mode::Nilpotent => self.nilpotent_sliding(&f, &x0),
        };
        let relative = f.h_matrix * x1;
        Ok(VelocityDecomposition {
            absolute: sliding + relative,
            sliding,
            relative,
        })
    }

    /// `(h̃′g + h̃Ã)X̃ + C̃′`; equals `H′X̃ + C̃′` only when `Ãg = Ã`.
    fn nilpotent_sliding(&self, f: &MotionFrame, x: &DualVec3) -> DualVec3 {
        let m = f.g.scale(f.h_values[1]) + self.axis.scale(f.h_values[0]);
        m * *x + f.c_derivs[1]
    }

    /// Determinant of `H′` computed directly and through
    /// `det(h̃g)·det(Ã − λ̃I)`, plus the null-direction analysis at singular
    /// instants.
    pub fn regularity(&self, t: f64) -> Result<RegularityReport> {
        let f = self.frame(t, 1)?;
        let h_prime = f.h_matrix_derivs[0];
        let det_h_prime = h_prime.det();
        let shifted = self.axis - DualMat3::scalar(f.lambda);
        let det_shifted = shifted.det();
        let det_factorized = f.h_matrix.det() * det_shifted;
        let alpha_sq = {
            let w = self.axis_vector();
            w.inner(&w)
        };
        let l = f.lambda;
        let char_poly = -(l * (l * l - alpha_sq));
        let singular = det_is_singular(det_h_prime.re, &h_prime);
        let eigen_direction = if singular { real_kernel(&shifted.re) } else { None };
        Ok(RegularityReport {
            t,
            det_h_prime,
            det_factorized,
            det_shifted,
            char_poly,
            singular,
            eigen_direction,
            eigen_direction_inner: eigen_direction.map(|v| v.inner(&v)),
        })
    }

    fn pole_from_frame(&self, f: &MotionFrame) -> Result<PoleData> {
        let h_prime = &f.h_matrix_derivs[0];
        if det_is_singular(h_prime.det().re, h_prime) {
            return Err(Error::SingularHprime { t: f.t });
        }
        let p = solve_pole(h_prime, &f.c_derivs[1]).map_err(|_| Error::SingularHprime { t: f.t })?;
        let q = f.h_matrix * p + f.c_derivs[0];
        Ok(PoleData { p, q })
    }

    /// Instantaneous rotation centre `P̃ = −(H′)⁻¹C̃′` and its fixed-frame
    /// image `Q̃ = HP̃ + C̃`.
    pub fn pole_point(&self, t: f64) -> Result<PoleData> {
        self.pole_from_frame(&self.frame(t, 1)?)
    }

    fn pole_node(&self, t: f64) -> Result<PoleNode> {
        let f = self.frame(t, 2)?;
        let pole = self.pole_from_frame(&f)?;
        let (h1, h2) = (&f.h_matrix_derivs[0], &f.h_matrix_derivs[1]);
        // P′ = −(H′)⁻¹(H″P̃ + C̃″)
        let p_prime = -h1
            .solve(&(*h2 * pole.p + f.c_derivs[2]))
            .map_err(|_| Error::SingularHprime { t })?;
        let h_p_prime = f.h_matrix * p_prime;
        let q_prime = *h1 * pole.p + h_p_prime + f.c_derivs[1];
        Ok(PoleNode {
            t,
            h: f.h_values[0],
            pole,
            p_prime,
            q_prime,
            h_p_prime,
        })
    }

    /// Samples the moving and fixed pole curves with their tangents.
    pub fn pole_curves(&self, t0: f64, t1: f64, samples: usize) -> Result<Vec<PoleNode>> {
        sample_nodes(t0, t1, samples)
            .into_iter()
            .map(|t| self.pole_node(t))
            .collect()
    }

    /// Arc lengths of both pole curves (trapezoid rule on dual norms of the
    /// tangents) and the pointwise ratio `‖Q̃′‖/‖P̃′‖` next to `|h̃|` and
    /// `|h̃|³`.
    pub fn pole_arc_ratio(&self, t0: f64, t1: f64, samples: usize) -> Result<ArcRatioReport> {
        let nodes = self
            .pole_curves(t0, t1, samples)?
            .into_iter()
            .map(|n| {
                let p_norm = n.p_prime.norm()?;
                let q_norm = n.q_prime.norm()?;
                let abs_h = n.h.abs();
                Ok(ArcRatioNode {
                    t: n.t,
                    p_norm,
                    q_norm,
                    ratio: q_norm.checked_div(p_norm)?,
                    abs_h,
                    abs_h_cubed: abs_h.powi(3),
                    p_prime_class: n.p_prime.causal_class(CAUSAL_TOL),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let trapezoid = |f: fn(&ArcRatioNode) -> DualScalar| {
            nodes
                .windows(2)
                .map(|w| (f(&w[0]) + f(&w[1])).scale(0.5 * (w[1].t - w[0].t)))
                .sum::<DualScalar>()
        };
        Ok(ArcRatioReport {
            s1: trapezoid(|n| n.q_norm),
            s: trapezoid(|n| n.p_norm),
            nodes,
        })
    }
}

/// Solves `H′P̃ = −C̃′`.
pub fn solve_pole(h_prime: &DualMat3, c_prime: &DualVec3) -> Result<DualVec3> {
    Ok(-h_prime.solve(c_prime)?)
}

/// Solves `HX̃ + C̃ = Ỹ` for `X̃`.
pub fn solve_inverse_transform(h: &DualMat3, c: &DualVec3, y: &DualVec3) -> Result<DualVec3> {
    h.solve(&(*y - *c))
}

/// Unit kernel vector of a rank-deficient real matrix, from the cross
/// product of its two most independent rows.
fn real_kernel(m: &Mat3) -> Option<Vec3> {
    let euclid_cross = |a: &[f64; 3], b: &[f64; 3]| {
        Vec3([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    };
    let rows = &m.0;
    let best = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| euclid_cross(&rows[i], &rows[j]))
        .max_by(|a, b| a.euclid_sq().total_cmp(&b.euclid_sq()))?;
    let n = best.euclid_sq().sqrt();
    (n > 0.0).then(|| best.scale(1.0 / n))
}

/// Per-instant evaluation of the motion.
#[derive(Debug, Clone)]
pub struct MotionFrame {
    pub t: f64,
    pub g: DualMat3,
    /// `H = h̃ g`.
    pub h_matrix: DualMat3,
    /// `H′, H″, …` up to the requested order.
    pub h_matrix_derivs: Vec<DualMat3>,
    /// `h̃, h̃′, h̃″, …` (at least up to second order).
    pub h_values: Vec<DualScalar>,
    /// `λ̃ = −h̃′/h̃`.
    pub lambda: DualScalar,
    pub lambda_prime: DualScalar,
    /// `C̃, C̃′, …` up to the requested order.
    pub c_derivs: Vec<DualVec3>,
}

impl MotionFrame {
    /// `H⁽ⁿ⁾`, with `n = 0` giving `H`.
    pub fn h_matrix_deriv(&self, n: usize) -> DualMat3 {
        if n == 0 {
            self.h_matrix
        } else {
            self.h_matrix_derivs[n - 1]
        }
    }

    pub fn h_val(&self) -> DualScalar {
        self.h_values[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityDecomposition {
    pub absolute: DualVec3,
    pub sliding: DualVec3,
    pub relative: DualVec3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleData {
    /// Pole in the moving frame.
    pub p: DualVec3,
    /// Pole in the fixed frame.
    pub q: DualVec3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityReport {
    pub t: f64,
    pub det_h_prime: DualScalar,
    /// `det(h̃g)·det(Ã − λ̃I)`.
    pub det_factorized: DualScalar,
    /// `det(Ã − λ̃I)`.
    pub det_shifted: DualScalar,
    /// `−λ̃(λ̃² − α̃²)`, the characteristic polynomial of `Ã` at `λ̃`.
    pub char_poly: DualScalar,
    pub singular: bool,
    /// Real solution direction of `(Ã − λ̃I)x = 0` when `H′` is singular.
    /// For `λ̃ ≠ 0` it is necessarily a null vector.
    pub eigen_direction: Option<Vec3>,
    pub eigen_direction_inner: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleNode {
    pub t: f64,
    pub h: DualScalar,
    pub pole: PoleData,
    pub p_prime: DualVec3,
    /// `Q̃′ = H′P̃ + HP̃′ + C̃′` by the product rule.
    pub q_prime: DualVec3,
    /// `HP̃′`, which must coincide with `Q̃′`.
    pub h_p_prime: DualVec3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcRatioNode {
    pub t: f64,
    pub p_norm: DualScalar,
    pub q_norm: DualScalar,
    /// `‖Q̃′‖ / ‖P̃′‖`.
    pub ratio: DualScalar,
    pub abs_h: DualScalar,
    pub abs_h_cubed: DualScalar,
    pub p_prime_class: CausalClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArcRatioReport {
    /// Arc length of the fixed pole curve.
    pub s1: DualScalar,
    /// Arc length of the moving pole curve.
    pub s: DualScalar,
    pub nodes: Vec<ArcRatioNode>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual_scalar::DualPolynomial;
    use crate::function::Term;

    fn d(re: f64, du: f64) -> DualScalar {
        DualScalar::new(re, du)
    }

    fn dv(re: [f64; 3], du: [f64; 3]) -> DualVec3 {
        DualVec3::from_arrays(re, du)
    }

    fn poly(c: &[[f64; 2]]) -> ScalarFunction {
        ScalarFunction::exp_poly(DualPolynomial::from_pairs(c), 0.0)
    }

    fn zero() -> ScalarFunction {
        ScalarFunction::zero()
    }

    fn t_on_first_axis() -> VecFunction {
        VecFunction([poly(&[[0.0, 0.0], [1.0, 0.0]]), zero(), zero()])
    }

    fn smooth_motion() -> Motion {
        let h = ScalarFunction::new(vec![
            Term::exp_poly(DualPolynomial::from_pairs(&[[1.5, 0.2], [0.3, -0.1], [0.1, 0.05]]), 0.6),
            Term::new(
                DualPolynomial::from_pairs(&[[0.2, 0.1]]),
                DualPolynomial::from_pairs(&[[3.0, 0.0], [1.0, 0.2]]),
                0.0,
            )
            .unwrap(),
        ]);
        let c = VecFunction([
            poly(&[[0.1, 0.2], [1.0, 0.3], [0.2, -0.4], [0.1, 0.0]]),
            poly(&[[-0.3, 0.1], [0.5, 0.2], [-0.3, 0.1]]),
            ScalarFunction::exp_poly(DualPolynomial::from_pairs(&[[0.4, -0.2], [0.2, 0.1]]), -0.5),
        ]);
        Motion::from_axis_vector(h, &dv([0.3, -0.2, 1.1], [0.4, 0.1, -0.3]), c, Mode::General).unwrap()
    }

    fn nilpotent_motion() -> Motion {
        Motion::from_axis_vector(
            poly(&[[2.0, 0.0], [1.0, 0.0]]),
            &dv([0.0; 3], [0.0, 0.0, 1.0]),
            t_on_first_axis(),
            Mode::Nilpotent,
        )
        .unwrap()
    }

    fn close(a: &DualVec3, b: &DualVec3, tol: f64) -> bool {
        (*a - *b).max_abs() <= tol * (1.0 + a.max_abs().max(b.max_abs()))
    }

    fn mat_close(a: &DualMat3, b: &DualMat3, tol: f64) -> bool {
        (*a - *b).max_abs() <= tol * (1.0 + a.max_abs().max(b.max_abs()))
    }

    #[test]
    fn construction_rejects_invalid_motions() {
        let c = t_on_first_axis();
        let h = poly(&[[2.0, 0.0], [1.0, 0.0]]);
        let err = Motion::new(ScalarFunction::constant(d(2.0, 0.0)), DualMat3::ZERO, c.clone(), Mode::General);
        assert!(matches!(err, Err(Error::InvalidMotion(m)) if m.contains("constant")));
        let err = Motion::new(h.clone(), DualMat3::IDENTITY, c.clone(), Mode::General);
        assert!(matches!(err, Err(Error::InvalidMotion(_))));
        let err = Motion::from_axis_vector(h.clone(), &dv([1.0, 0.0, 0.0], [0.0; 3]), c, Mode::Nilpotent);
        assert!(matches!(err, Err(Error::InvalidMotion(m)) if m.contains("nilpotent")));
        let fixed = VecFunction::constant(&dv([1.0, 2.0, 3.0], [0.0; 3]));
        assert!(Motion::new(h, DualMat3::ZERO, fixed, Mode::General).is_err());
    }

    #[test]
    fn frame_basics() {
        let m = smooth_motion();
        let f = m.frame(0.0, 2).unwrap();
        assert_eq!(f.g, DualMat3::IDENTITY);
        assert_eq!(f.h_matrix, DualMat3::scalar(m.h_value(0.0, 0).unwrap()));

        let nil = nilpotent_motion();
        for &t in &[0.0, 0.7, -1.3] {
            let f = nil.frame(t, 1).unwrap();
            assert_eq!(f.g, DualMat3::IDENTITY + nil.axis().scale(d(t, 0.0)));
            assert_eq!(*nil.axis() * f.g, *nil.axis());
        }
        let f = nil.frame(1.0, 0).unwrap();
        assert!((f.lambda - d(-1.0 / 3.0, 0.0)).max_abs() < 1e-16);
    }

    #[test]
    fn frame_rejects_vanishing_homothety() {
        let h = poly(&[[-1.0, 0.0], [1.0, 0.0]]);
        let m = Motion::from_axis_vector(h, &dv([1.0, 0.0, 0.0], [0.0; 3]), t_on_first_axis(), Mode::General).unwrap();
        assert!(matches!(m.frame(1.0, 1), Err(Error::ZeroRealPart { .. })));
        let hp = ScalarFunction::rational(DualPolynomial::from_pairs(&[[1.0, 0.0], [1.0, 0.0]]), DualPolynomial::from_pairs(&[[-2.0, 0.0], [1.0, 0.0]])).unwrap();
        let m = Motion::from_axis_vector(hp, &dv([1.0, 0.0, 0.0], [0.0; 3]), t_on_first_axis(), Mode::General).unwrap();
        assert!(matches!(m.frame(2.0, 0), Err(Error::PoleAtT { .. })));
    }

    #[test]
    fn transform_examples() {
        let h = poly(&[[1.0, 0.0], [1.0, 0.0]]);
        let c = VecFunction([poly(&[[0.0, 0.0], [1.0, 0.0]]), poly(&[[0.0, 0.0], [0.0, 2.0]]), zero()]);
        let m = Motion::from_axis_vector(h, &dv([0.2, 0.5, 1.0], [0.1, 0.0, 0.3]), c, Mode::General).unwrap();
        let x = dv([0.3, -2.0, 1.0], [0.5, 0.5, -0.1]);
        assert_eq!(m.transform(0.0, &x).unwrap(), x);

        let sm = smooth_motion();
        for &t in &[0.0, 0.4, 1.2] {
            assert_eq!(sm.transform(t, &DualVec3::ZERO).unwrap(), sm.translation_value(t, 0).unwrap());
            let y = sm.transform(t, &x).unwrap();
            assert!(close(&sm.inverse_transform(t, &y).unwrap(), &x, 1e-10));
            let c = sm.translation_value(t, 0).unwrap();
            assert!(sm.inverse_transform(t, &c).unwrap().max_abs() < 1e-14);
        }

        let two = DualMat3::scalar(d(2.0, 0.0));
        let y = dv([2.0, 4.0, -6.0], [1.0, 0.0, 3.0]);
        let x = solve_inverse_transform(&two, &DualVec3::ZERO, &y).unwrap();
        assert_eq!(x, dv([1.0, 2.0, -3.0], [0.5, 0.0, 1.5]));
    }

    #[test]
    fn h_derivatives_match_closed_forms() {
        let m = smooth_motion();
        let a = *m.axis();
        for &t in &[0.0, 0.5, 1.1] {
            let g = m.rotation(t);
            let hv: Vec<_> = (0..3).map(|n| m.h_value(t, n).unwrap()).collect();
            let h1 = g.scale(hv[1]) + (a * g).scale(hv[0]);
            assert!(mat_close(&m.h_nth(t, 1).unwrap(), &h1, 1e-13));
            let h2 = (DualMat3::scalar(hv[2]) + a.scale(hv[1].scale(2.0)) + (a * a).scale(hv[0])) * g;
            assert!(mat_close(&m.h_nth(t, 2).unwrap(), &h2, 1e-13));
        }
    }

    fn fd_matrix(m: &Motion, t: f64, n: usize, step: f64) -> DualMat3 {
        let plus = m.h_nth(t + step, n - 1).unwrap();
        let minus = m.h_nth(t - step, n - 1).unwrap();
        (plus - minus).scale(d(0.5 / step, 0.0))
    }

    #[test]
    fn third_derivative_of_h_matches_finite_differences() {
        let m = smooth_motion();
        for &t in &[0.2, 0.9] {
            let exact = m.h_nth(t, 3).unwrap();
            let approx = fd_matrix(&m, t, 3, 1e-4);
            assert!((exact - approx).max_abs() <= 1e-5 * (1.0 + exact.max_abs()));
        }
    }

    #[test]
    fn higher_velocities() {
        let m = smooth_motion();
        let x = VecFunction::constant(&dv([0.4, -1.0, 0.2], [0.1, 0.3, -0.5]));
        let x0 = dv([0.4, -1.0, 0.2], [0.1, 0.3, -0.5]);
        let t = 0.6;
        let f = m.frame(t, 1).unwrap();
        let y1 = m.y_nth(t, &x, 1).unwrap();
        assert!(close(&y1, &(f.h_matrix_derivs[0] * x0 + f.c_derivs[1]), 1e-14));

        let nil = nilpotent_motion();
        let f = nil.frame(t, 2).unwrap();
        let reduced = (f.g.scale(f.h_values[2]) + nil.axis().scale(f.h_values[1].scale(2.0))) * x0 + f.c_derivs[2];
        assert!(close(&nil.y_nth(t, &x, 2).unwrap(), &reduced, 1e-14));

        // moving path and third order by finite differences of Ỹ(t)
        let path = VecFunction([
            poly(&[[0.1, 0.0], [0.3, 0.2], [-0.2, 0.1]]),
            ScalarFunction::exp_poly(DualPolynomial::from_pairs(&[[1.0, 0.1]]), 0.3),
            poly(&[[0.5, -0.2], [0.0, 0.4]]),
        ]);
        let y = |s: f64, n: usize| m.y_nth(s, &path, n).unwrap();
        let step = 1e-4;
        let approx = (y(t + step, 2) - y(t - step, 2)).scale(d(0.5 / step, 0.0));
        let exact = y(t, 3);
        assert!((exact - approx).max_abs() <= 1e-5 * (1.0 + exact.max_abs()));
        let pos = |s: f64| m.transform(s, &path.eval(s).unwrap()).unwrap();
        assert!(close(&y(t, 0), &pos(t), 1e-15));
    }

    #[test]
    fn velocity_split() {
        let m = smooth_motion();
        let fixed = VecFunction::constant(&dv([1.0, 0.5, -0.5], [0.0, 0.2, 0.1]));
        let v = m.velocity_decompose(0.3, &fixed).unwrap();
        assert_eq!(v.relative, DualVec3::ZERO);
        assert_eq!(v.absolute, v.sliding);

        let path = VecFunction([poly(&[[0.1, 0.0], [0.3, 0.2]]), poly(&[[0.0, 1.0], [0.2, 0.0], [0.1, 0.1]]), zero()]);
        let v = m.velocity_decompose(0.3, &path).unwrap();
        assert!(close(&v.absolute, &m.y_nth(0.3, &path, 1).unwrap(), 1e-12));

        // nilpotent fast path agrees with the general product-rule path
        let nil = nilpotent_motion();
        let f = nil.frame(0.8, 1).unwrap();
        let x0 = path.eval(0.8).unwrap();
        let general = f.h_matrix_derivs[0] * x0 + f.c_derivs[1];
        let v = nil.velocity_decompose(0.8, &path).unwrap();
        assert!(close(&v.sliding, &general, 1e-12));
    }

    #[test]
    fn regularity_reports() {
        let h = poly(&[[2.0, 0.0], [1.0, 0.0]]);
        let m = Motion::from_axis_vector(h, &dv([1.0, 0.0, 0.0], [0.0; 3]), t_on_first_axis(), Mode::General).unwrap();
        let r = m.regularity(0.5).unwrap();
        let l = -1.0 / 2.5;
        assert!((r.det_shifted.re - (-l * (l * l - 1.0))).abs() < 1e-15);
        assert!((r.det_shifted - r.char_poly).max_abs() < 1e-15);
        assert!(!r.singular);
        // λ = ±α at t = −1: H′ is singular along a null direction
        let r = m.regularity(-1.0).unwrap();
        assert!(r.singular);
        assert!(r.eigen_direction_inner.unwrap().abs() < 1e-12);

        // critical point of h: λ̃ = 0 and det H′ = h̃³ det Ã = 0
        let h = poly(&[[1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]);
        let m = Motion::from_axis_vector(h, &dv([0.3, 0.2, 1.0], [0.1, 0.0, 0.0]), t_on_first_axis(), Mode::General).unwrap();
        let r = m.regularity(0.0).unwrap();
        assert!(r.singular);
        assert!(r.det_h_prime.re.abs() < 1e-15);
        // the kernel at λ = 0 is the (timelike) axis itself
        assert!(r.eigen_direction_inner.unwrap() < 0.0);

        let e = ScalarFunction::exp_poly(DualPolynomial::from_pairs(&[[1.0, 0.0]]), 1.0);
        let m = Motion::from_axis_vector(e, &dv([0.3, -0.4, 0.2], [0.1, 0.5, 0.0]), t_on_first_axis(), Mode::General).unwrap();
        let r = m.regularity(0.0).unwrap();
        assert!((r.det_h_prime - r.det_factorized).max_abs() < 1e-12);
    }

    #[test]
    fn pole_points() {
        let p = solve_pole(&DualMat3::scalar(d(2.0, 1.0)), &DualVec3::ZERO).unwrap();
        assert_eq!(p, DualVec3::ZERO);

        let m = smooth_motion();
        for &t in &[0.0, 0.5, 1.0] {
            let pole = m.pole_point(t).unwrap();
            let fixed = VecFunction::constant(&pole.p);
            let v = m.velocity_decompose(t, &fixed).unwrap();
            assert!(v.sliding.max_abs() <= 1e-9);
            let q = m.transform(t, &pole.p).unwrap();
            assert!(close(&pole.q, &q, 1e-12));
        }

        let nil = nilpotent_motion();
        for &t in &[0.0, 0.5, 2.0] {
            let pole = nil.pole_point(t).unwrap();
            assert!((pole.p.re - Vec3::new(-1.0, 0.0, 0.0)).max_abs() < 1e-15);
            let f = nil.frame(t, 1).unwrap();
            let residual = f.h_matrix_derivs[0] * pole.p + f.c_derivs[1];
            assert!(residual.max_abs() < 1e-14);
        }
    }

    #[test]
    fn singular_pole_is_reported() {
        let h = poly(&[[2.0, 0.0], [1.0, 0.0]]);
        let m = Motion::from_axis_vector(h, &dv([1.0, 0.0, 0.0], [0.0; 3]), t_on_first_axis(), Mode::General).unwrap();
        assert_eq!(m.pole_point(-1.0), Err(Error::SingularHprime { t: -1.0 }));
        assert!(matches!(m.pole_curves(-1.5, -0.5, 3), Err(Error::SingularHprime { t }) if t == -1.0));
    }

    #[test]
    fn pole_curve_tangents() {
        let m = smooth_motion();
        let nodes = m.pole_curves(0.0, 1.0, 11).unwrap();
        assert_eq!(nodes.len(), 11);
        for n in &nodes {
            assert!(close(&n.q_prime, &n.h_p_prime, 1e-8));
            // P′ against central differences of P
            let step = 1e-5;
            let p = |s: f64| m.pole_point(s).unwrap().p;
            let approx = (p(n.t + step) - p(n.t - step)).scale(d(0.5 / step, 0.0));
            assert!(close(&n.p_prime, &approx, 1e-6));
        }
        let single = m.pole_curves(0.3, 0.9, 1).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].pole, m.pole_point(0.3).unwrap());
    }

    #[test]
    fn constant_pole_motion() {
        // C̃ = −H·P₀ + const keeps the pole at P₀: with h = t + 2, Ã = 0
        // and C̃ = −(t + 2)P₀, the pole equation gives P = P₀ for all t.
        let p0 = [0.5, -1.0, 2.0];
        let h = poly(&[[2.0, 0.0], [1.0, 0.0]]);
        let c = VecFunction(std::array::from_fn(|i| poly(&[[-2.0 * p0[i], 0.0], [-p0[i], 0.0]])));
        let m = Motion::new(h, DualMat3::ZERO, c, Mode::General).unwrap();
        for n in m.pole_curves(0.0, 1.0, 5).unwrap() {
            assert!((n.pole.p - dv(p0, [0.0; 3])).max_abs() < 1e-14);
            assert!(n.p_prime.max_abs() < 1e-14);
            assert!(n.q_prime.max_abs() < 1e-14);
        }
    }

    #[test]
    fn arc_ratio() {
        // Lorentz-orthogonal g preserves norms, so the ratio tracks |h|.
        let h = poly(&[[1.5, 0.2], [0.3, 0.1]]);
        let c = VecFunction([poly(&[[0.0, 0.0], [1.0, 0.0], [0.5, 0.1]]), poly(&[[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.3, 0.0]]), zero()]);
        let m = Motion::from_axis_vector(h, &dv([0.2, 0.1, 1.0], [0.0, 0.3, 0.0]), c, Mode::General).unwrap();
        let r = m.pole_arc_ratio(0.2, 0.8, 7).unwrap();
        for n in &r.nodes {
            assert!((n.ratio.re - n.abs_h.re).abs() < 1e-10 * n.abs_h.re);
            if n.p_prime_class == CausalClass::Spacelike {
                assert!((n.ratio.du - n.abs_h.du).abs() < 1e-8);
            }
        }
        assert!(r.s.re > 0.0 && r.s1.re > 0.0);
        let r = m.pole_arc_ratio(0.5, 0.5, 4).unwrap();
        assert_eq!(r.s, DualScalar::ZERO);
        assert_eq!(r.s1, DualScalar::ZERO);
    }

    #[test]
    fn sampling() {
        assert_eq!(sample_nodes(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(sample_nodes(2.0, 5.0, 1), vec![2.0]);
        assert!(sample_nodes(0.0, 1.0, 0).is_empty());
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(4, 0), 1.0);
    }
}
