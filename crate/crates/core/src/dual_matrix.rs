//! 3×3 matrices over the dual numbers.
//!
//! Lorentz anti-symmetric matrices (`A = −εAᵀε` with the sign matrix
//! `ε = diag(1, 1, −1)`) are the generators of the rotation part of the
//! motion. Their axis vector `w` is defined by `A·x = w ∧ x` for every `x`.
//! Solving that identity on the basis vectors with the cross product of
//! [`crate::lorentz`] gives the entry pattern used by [`DualMat3::hat`]:
//!
//! ```text
//!            [  0   w₃  −w₂ ]
//! hat(w)  =  [ −w₃  0    w₁ ]
//!            [ −w₂  w₁   0  ]
//! ```
//!
//! Its characteristic polynomial is `det(A − λI) = −λ(λ² − ⟨w, w⟩)`.

use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::dual_scalar::DualScalar;
use crate::error::{Error, Result};
use crate::lorentz::{DualVec3, Vec3, METRIC};

/// Real 3×3 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
    /// The sign matrix `diag(1, 1, −1)`.
    pub const SIGN: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]);

    pub fn from_fn(f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = f(i, j);
            }
        }
        Mat3(m)
    }

    pub fn diag(d: [f64; 3]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    /// `ε·m·ε`: flips the sign of entries in the third row or column (but
    /// not both).
    pub fn sign_conjugate(&self) -> Self {
        Self::from_fn(|i, j| METRIC[i] * self.0[i][j] * METRIC[j])
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|i| {
            self.0[i][0] * v.0[0] + self.0[i][1] * v.0[1] + self.0[i][2] * v.0[2]
        }))
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.0
            .iter()
            .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        let n = self.norm_inf();
        if det.abs() < 1e-12 * (1.0 + n * n * n) {
            return Err(Error::SingularRealPart { det });
        }
        let mut a = self.0;
        let mut inv = Mat3::IDENTITY.0;
        for col in 0..3 {
            let pivot = (col..3)
                .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                .unwrap_or(col);
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col];
            if p == 0.0 {
                return Err(Error::SingularRealPart { det });
            }
            for j in 0..3 {
                a[col][j] /= p;
                inv[col][j] /= p;
            }
            for row in 0..3 {
                if row != col {
                    let f = a[row][col];
                    if f != 0.0 {
                        for j in 0..3 {
                            a[row][j] -= f * a[col][j];
                            inv[row][j] -= f * inv[col][j];
                        }
                    }
                }
            }
        }
        Ok(Mat3(inv))
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, b: Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[i][j] + b.0[i][j])
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, b: Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[i][j] - b.0[i][j])
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        self.scale(-1.0)
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, b: Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| (0..3).map(|k| self.0[i][k] * b.0[k][j]).sum())
    }
}

/// Axis vector of a Lorentz anti-symmetric matrix and its squared norm `α̃²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisData {
    pub w: DualVec3,
    /// `⟨w, w⟩`; may be negative (timelike axis) or zero (null axis).
    pub alpha_sq: DualScalar,
}

/// Dual matrix `re + ε·du`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualMat3 {
    pub re: Mat3,
    pub du: Mat3,
}

/// Relative tolerance used when a predicate needs a default.
pub const MATRIX_TOL: f64 = 1e-12;

impl DualMat3 {
    pub const ZERO: DualMat3 = DualMat3 {
        re: Mat3::ZERO,
        du: Mat3::ZERO,
    };
    pub const IDENTITY: DualMat3 = DualMat3 {
        re: Mat3::IDENTITY,
        du: Mat3::ZERO,
    };

    pub const fn new(re: Mat3, du: Mat3) -> Self {
        Self { re, du }
    }

    pub fn real(re: Mat3) -> Self {
        Self::new(re, Mat3::ZERO)
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> DualScalar) -> Self {
        Self::new(Mat3::from_fn(|i, j| f(i, j).re), Mat3::from_fn(|i, j| f(i, j).du))
    }

    /// `s·I`.
    pub fn scalar(s: DualScalar) -> Self {
        Self::IDENTITY.scale(s)
    }

    pub fn entry(&self, i: usize, j: usize) -> DualScalar {
        DualScalar::new(self.re.0[i][j], self.du.0[i][j])
    }

    pub fn scale(&self, s: DualScalar) -> Self {
        Self::new(self.re.scale(s.re), self.du.scale(s.re) + self.re.scale(s.du))
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.re.transpose(), self.du.transpose())
    }

    pub fn sign_conjugate(&self) -> Self {
        Self::new(self.re.sign_conjugate(), self.du.sign_conjugate())
    }

    pub fn mul_vec(&self, v: &DualVec3) -> DualVec3 {
        DualVec3::new(
            self.re.mul_vec(&v.re),
            self.re.mul_vec(&v.du) + self.du.mul_vec(&v.re),
        )
    }

    /// Largest entry magnitude over both parts.
    pub fn max_abs(&self) -> f64 {
        self.re.max_abs().max(self.du.max_abs())
    }

    /// Maximum absolute row sum over both parts.
    pub fn norm_inf(&self) -> f64 {
        self.re.norm_inf().max(self.du.norm_inf())
    }

    pub fn trace(&self) -> DualScalar {
        DualScalar::new(self.re.trace(), self.du.trace())
    }

    /// Determinant by cofactor expansion in dual arithmetic.
    pub fn det(&self) -> DualScalar {
        let m = |i, j| self.entry(i, j);
        m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
            - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
    }

    /// `A⁻¹ − ε A⁻¹A*A⁻¹`.
    pub fn inverse(&self) -> Result<Self> {
        let inv = self.re.inverse()?;
        Ok(Self::new(inv, -(inv * self.du * inv)))
    }

    /// Solves `self · x = b`.
    pub fn solve(&self, b: &DualVec3) -> Result<DualVec3> {
        Ok(self.inverse()?.mul_vec(b))
    }

    pub fn powi(&self, n: u32) -> Self {
        (0..n).fold(Self::IDENTITY, |acc, _| acc * *self)
    }

    /// `max |m + ε mᵀ ε|` over both parts.
    pub fn antisymmetry_residual(&self) -> f64 {
        (*self + self.transpose().sign_conjugate()).max_abs()
    }

    pub fn is_lorentz_antisymmetric(&self, tol: f64) -> bool {
        self.antisymmetry_residual() <= tol
    }

    /// `max |ε gᵀ ε g − I|` over both parts.
    pub fn orthogonality_residual(&self) -> f64 {
        (self.transpose().sign_conjugate() * *self - Self::IDENTITY).max_abs()
    }

    pub fn is_lorentz_orthogonal(&self, tol: f64) -> bool {
        self.orthogonality_residual() <= tol
    }

    /// The Lorentz anti-symmetric matrix with `hat(w)·x = w ∧ x`.
    pub fn hat(w: &DualVec3) -> Self {
        let h = |v: &Vec3| {
            let [w1, w2, w3] = v.0;
            Mat3([[0.0, w3, -w2], [-w3, 0.0, w1], [-w2, w1, 0.0]])
        };
        Self::new(h(&w.re), h(&w.du))
    }

    /// Inverse of [`DualMat3::hat`]; fails when the matrix is not Lorentz
    /// anti-symmetric to within `1e-12` relative.
    pub fn vee(&self) -> Result<DualVec3> {
        let residual = self.antisymmetry_residual();
        if residual > MATRIX_TOL * (1.0 + self.max_abs()) {
            return Err(Error::NotAntisymmetric { residual });
        }
        let v = |m: &Mat3| Vec3([m.0[1][2], -m.0[0][2], m.0[0][1]]);
        Ok(DualVec3::new(v(&self.re), v(&self.du)))
    }

    pub fn axis_invariants(&self) -> Result<AxisData> {
        let w = self.vee()?;
        Ok(AxisData {
            w,
            alpha_sq: w.inner(&w),
        })
    }

    /// `self² = 0` to within `tol` on both parts. For a 3×3 Lorentz
    /// anti-symmetric matrix this holds exactly when the real part vanishes.
    pub fn is_nilpotent(&self, tol: f64) -> bool {
        (*self * *self).max_abs() <= tol
    }

    /// `e^{t·self}` by scaling and squaring of a truncated Taylor series,
    /// evaluated in dual arithmetic.
    ///
    /// The squaring count is `max(0, ⌈log₂ ‖t·re‖∞⌉ + 2)`; the series stops
    /// once a term falls below `1e-16` in both parts. `t = 0` gives the
    /// identity exactly.
    pub fn expm(&self, t: f64) -> Self {
        let a = self.scale(DualScalar::real(t));
        let norm = a.re.norm_inf();
        let squarings = if norm > 0.0 {
            (norm.log2().ceil() as i32 + 2).max(0)
        } else {
            0
        };
        let a = a.scale(DualScalar::real(0.5f64.powi(squarings)));
        let mut sum = Self::IDENTITY;
        let mut term = Self::IDENTITY;
        for k in 1..=64 {
            term = (term * a).scale(DualScalar::real(1.0 / k as f64));
            sum = sum + term;
            if term.re.max_abs() < 1e-16 && term.du.max_abs() < 1e-16 * (1.0 + sum.du.max_abs()) {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }
}

impl Index<(usize, usize)> for DualMat3 {
    type Output = f64;
    /// Real-part entry.
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.re.0[i][j]
    }
}

impl Add for DualMat3 {
    type Output = DualMat3;
    fn add(self, b: DualMat3) -> DualMat3 {
        DualMat3::new(self.re + b.re, self.du + b.du)
    }
}

impl Sub for DualMat3 {
    type Output = DualMat3;
    fn sub(self, b: DualMat3) -> DualMat3 {
        DualMat3::new(self.re - b.re, self.du - b.du)
    }
}

impl Neg for DualMat3 {
    type Output = DualMat3;
    fn neg(self) -> DualMat3 {
        DualMat3::new(-self.re, -self.du)
    }
}

impl Mul for DualMat3 {
    type Output = DualMat3;
    fn mul(self, b: DualMat3) -> DualMat3 {
        DualMat3::new(self.re * b.re, self.re * b.du + self.du * b.re)
    }
}

impl Mul<DualVec3> for DualMat3 {
    type Output = DualVec3;
    fn mul(self, v: DualVec3) -> DualVec3 {
        self.mul_vec(&v)
    }
}
