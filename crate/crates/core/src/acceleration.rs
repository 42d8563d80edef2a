//! Second-order kinematics: acceleration split, Coriolis operator,
//! `H″ = H[(Ã − λ̃I)² − λ̃′I]`, the acceleration centre and the three
//! families of homotheties for which `H″` is singular everywhere.
//!
//! With `μ̃ = λ̃² − λ̃′ = h̃″/h̃` and `α̃² = ⟨w̃, w̃⟩`, the eigenvalues of
//! `(Ã − λ̃I)² − λ̃′I` are `μ̃` and `μ̃ + α̃² ∓ 2α̃λ̃`, so
//! `det[(Ã − λ̃I)² − λ̃′I] = μ̃[(μ̃ + α̃²)² − 4α̃²λ̃²]`.
//! Each factor vanishing identically is a linear ODE in `h̃`:
//!
//! - `μ̃ ≡ 0` gives `h̃″ = 0`, so `h̃ = ℓ̃₀ + ℓ̃₁t`;
//! - `μ̃ + α̃² − 2α̃λ̃ ≡ 0` gives `(D + α̃)²h̃ = 0`, so `h̃ = (ℓ̃₀ + ℓ̃₁t)e^{−α̃t}`;
//! - `μ̃ + α̃² + 2α̃λ̃ ≡ 0` gives `h̃ = (ℓ̃₀ + ℓ̃₁t)e^{α̃t}`.
//!
//! For a dual rate `α̃ = α₁ + εα₁*`, `e^{sα̃t} = e^{sα₁t}(1 + εsα₁*t)`.

use crate::dual_matrix::DualMat3;
use crate::dual_scalar::{DualPolynomial, DualScalar};
use crate::error::{Error, Result};
use crate::function::{ScalarFunction, VecFunction};
use crate::lorentz::DualVec3;
use crate::motion::{Mode, Motion};

/// Default relative tolerance for degeneracy decisions.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelDecomposition {
    pub absolute: DualVec3,
    pub sliding: DualVec3,
    pub relative: DualVec3,
    pub coriolis: DualVec3,
}

/// Splits `Ỹ″` into sliding `H″X̃ + C̃″`, relative `HX̃″` and Coriolis
/// `2H′X̃′` parts.
pub fn accel_decompose(m: &Motion, t: f64, x: &VecFunction) -> Result<AccelDecomposition> {
    let f = m.frame(t, 2)?;
    let x1f = x.derivative();
    let (x0, x1, x2) = (x.eval(t)?, x1f.eval(t)?, x1f.derivative().eval(t)?);
    let c2 = f.c_derivs[2];
    let (sliding, relative, coriolis) = match m.mode() {
        Mode::General => (
            f.h_matrix_derivs[1] * x0 + c2,
            f.h_matrix * x2,
            (f.h_matrix_derivs[0] * x1).scale(DualScalar::real(2.0)),
        ),
        Mode::Nilpotent => {
            let (h, h1, h2) = (f.h_values[0], f.h_values[1], f.h_values[2]);
            let a = *m.axis();
            let sliding = (f.g.scale(h2) + a.scale(h1.scale(2.0))) * x0 + c2;
            let relative = f.g.scale(h) * x2;
            let coriolis = ((f.g.scale(h1) + a.scale(h)) * x1).scale(DualScalar::real(2.0));
            (sliding, relative, coriolis)
        }
    };
    Ok(AccelDecomposition {
        absolute: sliding + relative + coriolis,
        sliding,
        relative,
        coriolis,
    })
}

/// `Ω̃ = 2H(Ã − λ̃I)H⁻¹`, mapping the relative velocity `HX̃′` to the
/// Coriolis acceleration `2H′X̃′`.
pub fn coriolis_operator(m: &Motion, t: f64) -> Result<DualMat3> {
    let f = m.frame(t, 0)?;
    let shifted = *m.axis() - DualMat3::scalar(f.lambda);
    let h_inv = f.h_matrix.inverse()?;
    Ok((f.h_matrix * shifted * h_inv).scale(DualScalar::real(2.0)))
}

/// `H″` through `H[(Ã − λ̃I)² − λ̃′I]`.
pub fn h_second(m: &Motion, t: f64) -> Result<DualMat3> {
    let f = m.frame(t, 0)?;
    let shifted = *m.axis() - DualMat3::scalar(f.lambda);
    Ok(f.h_matrix * (shifted * shifted - DualMat3::scalar(f.lambda_prime)))
}

/// Relative disagreement between [`h_second`] and the binomial-sum
/// derivative [`Motion::h_nth`] with `n = 2`.
pub fn h_second_discrepancy(m: &Motion, t: f64) -> Result<f64> {
    let a = h_second(m, t)?;
    let b = m.h_nth(t, 2)?;
    Ok((a - b).max_abs() / (1.0 + a.max_abs().max(b.max_abs())))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegeneracyInvariants {
    pub t: f64,
    pub lambda: DualScalar,
    pub lambda_prime: DualScalar,
    /// `λ̃² − λ̃′`.
    pub mu: DualScalar,
    pub alpha_sq: DualScalar,
    /// `μ̃[(μ̃ + α̃²)² − 4α̃²λ̃²]`.
    pub factor: DualScalar,
    /// `det[(Ã − λ̃I)² − λ̃′I]` evaluated directly; equal to `factor`.
    pub det_direct: DualScalar,
}

impl DegeneracyInvariants {
    pub fn from_parts(t: f64, lambda: DualScalar, lambda_prime: DualScalar, axis: &DualMat3) -> Result<Self> {
        let alpha_sq = axis.axis_invariants()?.alpha_sq;
        let mu = lambda * lambda - lambda_prime;
        let s = mu + alpha_sq;
        let factor = mu * (s * s - alpha_sq * lambda * lambda.scale(4.0));
        let shifted = *axis - DualMat3::scalar(lambda);
        let det_direct = (shifted * shifted - DualMat3::scalar(lambda_prime)).det();
        Ok(Self {
            t,
            lambda,
            lambda_prime,
            mu,
            alpha_sq,
            factor,
            det_direct,
        })
    }

    /// Natural magnitude of `μ̃` and of the branch factors.
    pub fn scale(&self) -> f64 {
        let l = self.lambda.max_abs();
        1.0 + l * l + self.lambda_prime.max_abs() + self.alpha_sq.max_abs()
    }
}

pub fn degeneracy_invariants(m: &Motion, t: f64) -> Result<DegeneracyInvariants> {
    let f = m.frame(t, 0)?;
    DegeneracyInvariants::from_parts(t, f.lambda, f.lambda_prime, m.axis())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DegeneracyKind {
    /// `μ̃ = 0`.
    MuZero,
    /// `μ̃ + α̃² = 2α̃λ̃` (spacelike axis).
    PlusBranch,
    /// `μ̃ + α̃² = −2α̃λ̃` (spacelike axis).
    MinusBranch,
    /// `(μ̃ + α̃²)² = 4α̃²λ̃²` for a timelike or null axis, where no real
    /// `α̃` separates the two branches.
    SquaredBranch,
    /// `det H″` vanishes in its real part without any factor vanishing in
    /// both parts.
    NumericallySingular,
}

impl DegeneracyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::MuZero => "MuZero",
            Self::PlusBranch => "PlusBranch",
            Self::MinusBranch => "MinusBranch",
            Self::SquaredBranch => "SquaredBranch",
            Self::NumericallySingular => "NumericallySingular",
        }
    }
}

fn small(x: DualScalar, bound: f64) -> bool {
    x.re.abs() <= bound && x.du.abs() <= bound
}

/// Identifies which factor of `det[(Ã − λ̃I)² − λ̃′I]` vanishes, with `tol`
/// relative to [`DegeneracyInvariants::scale`].
pub fn classify_degeneracy(inv: &DegeneracyInvariants, tol: f64) -> Option<DegeneracyKind> {
    let s = inv.scale();
    if small(inv.mu, tol * s) {
        return Some(DegeneracyKind::MuZero);
    }
    let base = inv.mu + inv.alpha_sq;
    if inv.alpha_sq.re > tol * s {
        if let Ok(alpha) = inv.alpha_sq.sqrt() {
            let cross = alpha * inv.lambda.scale(2.0);
            if small(base - cross, tol * s) {
                return Some(DegeneracyKind::PlusBranch);
            }
            if small(base + cross, tol * s) {
                return Some(DegeneracyKind::MinusBranch);
            }
        }
    } else {
        let squared = base * base - inv.alpha_sq * inv.lambda * inv.lambda.scale(4.0);
        if small(squared, tol * s * s) {
            return Some(DegeneracyKind::SquaredBranch);
        }
    }
    let cube = s * s * s;
    if inv.factor.re.abs() <= tol * cube || inv.det_direct.re.abs() <= tol * cube {
        return Some(DegeneracyKind::NumericallySingular);
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AccelCenterResult {
    Center {
        point: DualVec3,
        /// `‖H″X̃ + C̃″‖∞` relative to `1 + ‖C̃″‖∞`.
        residual: f64,
    },
    Degenerate {
        kind: DegeneracyKind,
        invariants: DegeneracyInvariants,
    },
}

/// Point with vanishing sliding acceleration, `H″X̃ = −C̃″`, or the reason
/// none exists at `t`.
pub fn accel_center(m: &Motion, t: f64, tol: f64) -> Result<AccelCenterResult> {
    let f = m.frame(t, 2)?;
    let h2 = f.h_matrix_derivs[1];
    let c2 = f.c_derivs[2];
    let n = h2.re.norm_inf();
    let det = h2.det();
    let degenerate = |inv: DegeneracyInvariants| AccelCenterResult::Degenerate {
        kind: classify_degeneracy(&inv, tol).unwrap_or(DegeneracyKind::NumericallySingular),
        invariants: inv,
    };
    if det.re.abs() <= tol * (1.0 + n * n * n) {
        let inv = DegeneracyInvariants::from_parts(t, f.lambda, f.lambda_prime, m.axis())?;
        return Ok(degenerate(inv));
    }
    match h2.solve(&c2) {
        Ok(x) => {
            let point = -x;
            let residual = (h2 * point + c2).max_abs() / (1.0 + c2.max_abs());
            Ok(AccelCenterResult::Center { point, residual })
        }
        Err(Error::SingularRealPart { .. }) => {
            let inv = DegeneracyInvariants::from_parts(t, f.lambda, f.lambda_prime, m.axis())?;
            Ok(degenerate(inv))
        }
        Err(e) => Err(e),
    }
}

/// Offset and slope of the linear factor `ℓ̃₀ + ℓ̃₁t` shared by the three
/// exceptional families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyConstants {
    pub offset: DualScalar,
    pub slope: DualScalar,
}

fn family_sign(kind: DegeneracyKind) -> Result<f64> {
    match kind {
        DegeneracyKind::MuZero => Ok(0.0),
        DegeneracyKind::PlusBranch => Ok(-1.0),
        DegeneracyKind::MinusBranch => Ok(1.0),
        other => Err(Error::InvalidFamilyConstants(format!(
            "{} has no closed-form family",
            other.as_str()
        ))),
    }
}

/// Homothety `(ℓ̃₀ + ℓ̃₁t)·e^{sα̃t}` with `s = 0, −1, +1` for the
/// `MuZero`, `PlusBranch` and `MinusBranch` families. `alpha` must equal
/// the principal square root of the axis' `α̃²` for the branch identities
/// to hold; it is ignored for `MuZero`.
pub fn exceptional_h_family(kind: DegeneracyKind, alpha: DualScalar, consts: FamilyConstants) -> Result<ScalarFunction> {
    let s = family_sign(kind)?;
    if !(alpha.is_finite() && consts.offset.is_finite() && consts.slope.is_finite()) {
        return Err(Error::InvalidFamilyConstants("non-finite constant".into()));
    }
    let linear = DualPolynomial::linear(consts.offset, consts.slope);
    if s == 0.0 {
        if consts.slope == DualScalar::ZERO {
            return Err(Error::InvalidFamilyConstants("slope must be nonzero so that h̃ is not constant".into()));
        }
        return Ok(ScalarFunction::exp_poly(linear, 0.0));
    }
    if linear.is_zero() {
        return Err(Error::InvalidFamilyConstants("offset and slope are both zero".into()));
    }
    let dual_rate = DualPolynomial::linear(DualScalar::ONE, DualScalar::new(0.0, s * alpha.du));
    let h = ScalarFunction::exp_poly(&linear * &dual_rate, s * alpha.re);
    if h.is_constant() {
        return Err(Error::InvalidFamilyConstants("h̃ reduces to a constant".into()));
    }
    Ok(h)
}

fn consistency(ok: bool, what: &str, residual: f64) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidFamilyConstants(format!("{what} (residual {residual:e})")))
    }
}

fn rel_tol(scale: f64) -> f64 {
    1e-12 * (1.0 + scale)
}

/// Maps constants of the printed shape
/// `(c₂t + c₃) + ε(c₄t² + c₅t + c₆)/(t + c₀)` onto the `MuZero` family.
/// Requires `c₂ ≠ 0`, `c₀ = c₃/c₂` and exact division of the dual part.
pub fn mu_zero_from_printed(c0: f64, c2: f64, c3: f64, c4: f64, c5: f64, c6: f64) -> Result<FamilyConstants> {
    if c2 == 0.0 {
        return Err(Error::InvalidFamilyConstants("c2 must be nonzero".into()));
    }
    let gap = c0 - c3 / c2;
    consistency(gap.abs() <= rel_tol(c0.abs()), "real part forces c0 = c3/c2", gap)?;
    let remainder = c6 - c0 * c5 + c4 * c0 * c0;
    let scale = c6.abs() + (c0 * c5).abs() + (c4 * c0 * c0).abs();
    consistency(remainder.abs() <= rel_tol(scale), "dual part must be linear: c6 - c0 c5 + c4 c0² = 0", remainder)?;
    Ok(FamilyConstants {
        offset: DualScalar::new(c3, c5 - c4 * c0),
        slope: DualScalar::new(c2, c4),
    })
}

/// Maps constants of the printed branch shape
/// `[(a + bt) + ε(c₃t³ + c₂t² + c₁t + c₀)/(t + d)]·e^{sα₁t}` onto the
/// branch family with dual rate `alpha`. The cubic must divide exactly by
/// `t + d`, and its leading coefficient must equal `sα₁*b`.
pub fn branch_from_printed(kind: DegeneracyKind, alpha: DualScalar, a: f64, b: f64, cubic: [f64; 4], d: f64) -> Result<FamilyConstants> {
    let s = family_sign(kind)?;
    if s == 0.0 {
        return Err(Error::InvalidFamilyConstants("MuZero uses mu_zero_from_printed".into()));
    }
    let [k0, k1, k2, k3] = cubic;
    // synthetic division by (t + d)
    let q2 = k3;
    let q1 = k2 - d * q2;
    let q0 = k1 - d * q1;
    let remainder = k0 - d * q0;
    let scale = k0.abs() + (d * q0).abs();
    consistency(remainder.abs() <= rel_tol(scale), "dual cubic must be divisible by (t + c)", remainder)?;
    let lead = s * alpha.du * b;
    consistency((q2 - lead).abs() <= rel_tol(q2.abs() + lead.abs()), "leading dual coefficient must equal s·α₁*·slope", q2 - lead)?;
    Ok(FamilyConstants {
        offset: DualScalar::new(a, q0),
        slope: DualScalar::new(b, q1 - s * alpha.du * a),
    })
}
