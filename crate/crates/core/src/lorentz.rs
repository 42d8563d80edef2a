//! Real and dual vectors of Lorentzian 3-space with metric `diag(1, 1, −1)`.
//!
//! The cross product is
//!
//! ```text
//! a ∧ b = (a₃b₂ − a₂b₃, a₁b₃ − a₃b₁, a₁b₂ − a₂b₁)
//! ```
//!
//! which is the unique bilinear alternating product orthogonal (in the
//! Lorentzian sense) to both factors with `e₁ ∧ e₂ = e₃`. Note that
//! `e₂ ∧ e₃ = −e₁` and `e₃ ∧ e₁ = −e₂` under this convention.

use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::dual_scalar::DualScalar;
use crate::error::{Error, Result};

/// Default relative tolerance for causal classification.
pub const CAUSAL_TOL: f64 = 1e-10;

/// Diagonal of the metric (the sign matrix).
pub const METRIC: [f64; 3] = [1.0, 1.0, -1.0];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self([x1, x2, x3])
    }

    /// Standard basis vector `e_{i+1}`.
    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 3];
        v[i] = 1.0;
        Self(v)
    }

    /// Lorentzian inner product `a₁b₁ + a₂b₂ − a₃b₃`.
    #[inline]
    pub fn inner(&self, b: &Vec3) -> f64 {
        let a = &self.0;
        let b = &b.0;
        a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
    }

    #[inline]
    pub fn cross(&self, b: &Vec3) -> Vec3 {
        let a = &self.0;
        let b = &b.0;
        Vec3([
            a[2] * b[1] - a[1] * b[2],
            a[0] * b[2] - a[2] * b[0],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    /// Squared Euclidean length; used only as a magnitude scale.
    #[inline]
    pub fn euclid_sq(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    pub fn scale(&self, s: f64) -> Vec3 {
        Vec3(self.0.map(|x| x * s))
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, b: Vec3) -> Vec3 {
        Vec3([self.0[0] + b.0[0], self.0[1] + b.0[1], self.0[2] + b.0[2]])
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, b: Vec3) -> Vec3 {
        Vec3([self.0[0] - b.0[0], self.0[1] - b.0[1], self.0[2] - b.0[2]])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3(self.0.map(|x| -x))
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        self.scale(s)
    }
}

/// Causal character, decided by the real part alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalClass {
    Timelike,
    Spacelike,
    Lightlike,
}

/// Which dual unit sphere to test against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitSphere {
    /// Timelike unit vectors.
    Hyperbolic,
    /// Spacelike unit vectors.
    Lorentzian,
}

/// Dual vector `re + ε·du`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualVec3 {
    pub re: Vec3,
    pub du: Vec3,
}

impl DualVec3 {
    pub const ZERO: DualVec3 = DualVec3 {
        re: Vec3::ZERO,
        du: Vec3::ZERO,
    };

    pub const fn new(re: Vec3, du: Vec3) -> Self {
        Self { re, du }
    }

    pub fn from_arrays(re: [f64; 3], du: [f64; 3]) -> Self {
        Self::new(Vec3(re), Vec3(du))
    }

    pub fn real(re: Vec3) -> Self {
        Self::new(re, Vec3::ZERO)
    }

    pub fn from_components(c: [DualScalar; 3]) -> Self {
        Self::from_arrays(c.map(|x| x.re), c.map(|x| x.du))
    }

    pub fn component(&self, i: usize) -> DualScalar {
        DualScalar::new(self.re.0[i], self.du.0[i])
    }

    pub fn components(&self) -> [DualScalar; 3] {
        [self.component(0), self.component(1), self.component(2)]
    }

    /// `⟨a, b⟩ + ε(⟨a, b*⟩ + ⟨a*, b⟩)`.
    pub fn inner(&self, b: &DualVec3) -> DualScalar {
        DualScalar::new(
            self.re.inner(&b.re),
            self.re.inner(&b.du) + self.du.inner(&b.re),
        )
    }

    /// `a ∧ b + ε(a ∧ b* + a* ∧ b)`.
    pub fn cross(&self, b: &DualVec3) -> DualVec3 {
        DualVec3::new(
            self.re.cross(&b.re),
            self.re.cross(&b.du) + self.du.cross(&b.re),
        )
    }

    /// Causal class of the real part, with `tol` relative to its squared
    /// Euclidean length. The zero vector is spacelike.
    pub fn causal_class(&self, tol: f64) -> CausalClass {
        let q = self.re.inner(&self.re);
        let scale = self.re.euclid_sq();
        if self.re.is_zero() || q > tol * scale {
            CausalClass::Spacelike
        } else if q < -tol * scale {
            CausalClass::Timelike
        } else {
            CausalClass::Lightlike
        }
    }

    /// `‖a‖ + ε⟨a, a*⟩/‖a‖` with `‖a‖ = √|⟨a, a⟩|`.
    ///
    /// Fails with [`Error::NullVector`] when the real part is lightlike or
    /// zero (at the default causal tolerance).
    pub fn norm(&self) -> Result<DualScalar> {
        if self.causal_class(CAUSAL_TOL) == CausalClass::Lightlike || self.re.is_zero() {
            return Err(Error::NullVector);
        }
        let n = self.re.inner(&self.re).abs().sqrt();
        Ok(DualScalar::new(n, self.re.inner(&self.du) / n))
    }

    pub fn on_unit_sphere(&self, which: UnitSphere, tol: f64) -> bool {
        let expected = match which {
            UnitSphere::Hyperbolic => CausalClass::Timelike,
            UnitSphere::Lorentzian => CausalClass::Spacelike,
        };
        if self.causal_class(tol) != expected {
            return false;
        }
        match self.norm() {
            Ok(n) => (n.re - 1.0).abs() <= tol && n.du.abs() <= tol,
            Err(_) => false,
        }
    }

    pub fn scale(&self, s: DualScalar) -> DualVec3 {
        DualVec3::new(self.re * s.re, self.du * s.re + self.re * s.du)
    }

    pub fn max_abs(&self) -> f64 {
        self.re.max_abs().max(self.du.max_abs())
    }

    pub fn is_finite(&self) -> bool {
        self.re.0.iter().chain(self.du.0.iter()).all(|x| x.is_finite())
    }
}

impl Add for DualVec3 {
    type Output = DualVec3;
    fn add(self, b: DualVec3) -> DualVec3 {
        DualVec3::new(self.re + b.re, self.du + b.du)
    }
}

impl Sub for DualVec3 {
    type Output = DualVec3;
    fn sub(self, b: DualVec3) -> DualVec3 {
        DualVec3::new(self.re - b.re, self.du - b.du)
    }
}

impl Neg for DualVec3 {
    type Output = DualVec3;
    fn neg(self) -> DualVec3 {
        DualVec3::new(-self.re, -self.du)
    }
}

impl Mul<DualScalar> for DualVec3 {
    type Output = DualVec3;
    fn mul(self, s: DualScalar) -> DualVec3 {
        self.scale(s)
    }
}
