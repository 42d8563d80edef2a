//! Dual numbers `a + εa*` with `ε² = 0`, and polynomials over them.
//!
//! Every quantity of the motion (homothety factor, matrix entries, vector
//! coordinates) lives in this ring. The second-order term of a product is
//! dropped identically, so first-order perturbations propagate exactly.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Relative threshold under which a real part counts as zero for inversion.
pub const ZERO_RE_TOL: f64 = 1e-12;

/// A dual number `re + ε·du`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualScalar {
    pub re: f64,
    pub du: f64,
}

impl DualScalar {
    pub const ZERO: DualScalar = DualScalar { re: 0.0, du: 0.0 };
    pub const ONE: DualScalar = DualScalar { re: 1.0, du: 0.0 };
    /// The dual unit ε.
    pub const EPS: DualScalar = DualScalar { re: 0.0, du: 1.0 };

    #[inline]
    pub const fn new(re: f64, du: f64) -> Self {
        Self { re, du }
    }

    #[inline]
    pub const fn real(re: f64) -> Self {
        Self { re, du: 0.0 }
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Self::new(self.re * s, self.du * s)
    }

    /// Dual conjugate `a − εa*`.
    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.re, -self.du)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.du.is_finite()
    }

    /// Largest absolute component.
    #[inline]
    pub fn max_abs(self) -> f64 {
        self.re.abs().max(self.du.abs())
    }

    /// True when `|re| < 1e-12 · (1 + |du|)`, i.e. the number has no inverse
    /// at working precision.
    #[inline]
    pub fn is_zero_divisor(self) -> bool {
        self.re.abs() < ZERO_RE_TOL * (1.0 + self.du.abs())
    }

    /// `1 / self`, failing with [`Error::ZeroRealPart`] for pure-dual values.
    pub fn recip(self) -> Result<Self> {
        if self.is_zero_divisor() {
            return Err(Error::ZeroRealPart { re: self.re });
        }
        let inv = 1.0 / self.re;
        Ok(Self::new(inv, -self.du * inv * inv))
    }

    /// `self / rhs` as `a/b + ε(a*b − ab*)/b²`.
    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        if rhs.is_zero_divisor() {
            return Err(Error::ZeroRealPart { re: rhs.re });
        }
        let re = self.re / rhs.re;
        let du = (self.du * rhs.re - self.re * rhs.du) / (rhs.re * rhs.re);
        Ok(Self::new(re, du))
    }

    pub fn powi(self, n: u32) -> Self {
        match n {
            0 => Self::ONE,
            _ => {
                let p = self.re.powi(n as i32 - 1);
                Self::new(p * self.re, n as f64 * p * self.du)
            }
        }
    }

    /// `e^self = e^a (1 + εa*)`.
    pub fn exp(self) -> Self {
        let e = self.re.exp();
        Self::new(e, e * self.du)
    }

    /// Principal square root; requires `re > 0`.
    pub fn sqrt(self) -> Result<Self> {
        if !(self.re > 0.0) || self.is_zero_divisor() {
            return Err(Error::ZeroRealPart { re: self.re });
        }
        let s = self.re.sqrt();
        Ok(Self::new(s, self.du / (2.0 * s)))
    }

    /// `sign(re) · self`; the modulus of a dual number with nonzero real part.
    pub fn abs(self) -> Self {
        if self.re < 0.0 {
            -self
        } else {
            self
        }
    }
}

impl fmt::Display for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.du < 0.0 {
            write!(f, "{} - ε{}", self.re, -self.du)
        } else {
            write!(f, "{} + ε{}", self.re, self.du)
        }
    }
}

impl From<f64> for DualScalar {
    fn from(re: f64) -> Self {
        Self::real(re)
    }
}

impl Add for DualScalar {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.du + rhs.du)
    }
}

impl Sub for DualScalar {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.du - rhs.du)
    }
}

impl Mul for DualScalar {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.re * rhs.re, self.re * rhs.du + self.du * rhs.re)
    }
}

impl Mul<f64> for DualScalar {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl Neg for DualScalar {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.du)
    }
}

impl AddAssign for DualScalar {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for DualScalar {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl std::iter::Sum for DualScalar {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

/// Polynomial in `t` with dual coefficients, ascending powers.
///
/// Trailing coefficients that are exactly zero in both parts are never
/// stored, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DualPolynomial {
    coeffs: Vec<DualScalar>,
}

impl DualPolynomial {
    pub fn new(mut coeffs: Vec<DualScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.du == 0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: DualScalar) -> Self {
        Self::new(vec![c])
    }

    /// `a + b·t`.
    pub fn linear(a: DualScalar, b: DualScalar) -> Self {
        Self::new(vec![a, b])
    }

    /// Builds from `(re, du)` pairs.
    pub fn from_pairs(pairs: &[[f64; 2]]) -> Self {
        Self::new(pairs.iter().map(|p| DualScalar::new(p[0], p[1])).collect())
    }

    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.coeffs.iter().map(|c| [c.re, c.du]).collect()
    }

    pub fn coeffs(&self) -> &[DualScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> DualScalar {
        self.coeffs.last().copied().unwrap_or_default()
    }

    /// Horner evaluation in dual arithmetic.
    pub fn eval(&self, t: f64) -> DualScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(DualScalar::ZERO, |acc, &c| acc * t + c)
    }

    /// `Σ |c_i| |t|^i` over both parts; the magnitude scale of an evaluation.
    pub fn magnitude_at(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t.abs() + c.max_abs())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: DualScalar) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(DualScalar::ONE), |acc, _| &acc * self)
    }
}

impl Add for &DualPolynomial {
    type Output = DualPolynomial;
    fn add(self, rhs: Self) -> DualPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let at = |p: &DualPolynomial, i: usize| p.coeffs.get(i).copied().unwrap_or_default();
        DualPolynomial::new((0..n).map(|i| at(self, i) + at(rhs, i)).collect())
    }
}

impl Sub for &DualPolynomial {
    type Output = DualPolynomial;
    fn sub(self, rhs: Self) -> DualPolynomial {
        self + &rhs.scale(-DualScalar::ONE)
    }
}

impl Mul for &DualPolynomial {
    type Output = DualPolynomial;
    fn mul(self, rhs: Self) -> DualPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return DualPolynomial::zero();
        }
        let mut out = vec![DualScalar::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        DualPolynomial::new(out)
    }
}
