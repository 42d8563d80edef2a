//! Closed-form differentiable dual-valued functions of a real parameter.
//!
//! A [`ScalarFunction`] is a finite sum of terms
//! `num(t) / den(t)^k · e^{rate·t}` with dual polynomial `num`, dual
//! polynomial `den` and a real `rate`. The derivative of such a term is again
//! such a term (with `k` raised by one when `den` is not constant), so
//! derivatives of any order stay exact and symbolic.

use crate::dual_scalar::{DualPolynomial, DualScalar, ZERO_RE_TOL};
use crate::error::{Error, Result};
use crate::lorentz::DualVec3;

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    num: DualPolynomial,
    den: DualPolynomial,
    den_pow: u32,
    rate: f64,
}

impl Term {
    /// `num(t) / den(t) · e^{rate·t}`. The leading coefficient of `den` must
    /// have a nonzero real part.
    pub fn new(num: DualPolynomial, den: DualPolynomial, rate: f64) -> Result<Self> {
        if den.is_zero() || den.leading().re == 0.0 {
            return Err(Error::InvalidDenominator);
        }
        Ok(Self {
            num,
            den,
            den_pow: 1,
            rate,
        })
    }

    /// `num(t) · e^{rate·t}`.
    pub fn exp_poly(num: DualPolynomial, rate: f64) -> Self {
        Self {
            num,
            den: DualPolynomial::constant(DualScalar::ONE),
            den_pow: 0,
            rate,
        }
    }

    pub fn num(&self) -> &DualPolynomial {
        &self.num
    }

    /// Denominator base polynomial; the effective denominator is
    /// `den_base()^den_pow()`.
    pub fn den_base(&self) -> &DualPolynomial {
        &self.den
    }

    pub fn den_pow(&self) -> u32 {
        self.den_pow
    }

    /// Expanded denominator polynomial.
    pub fn den(&self) -> DualPolynomial {
        self.den.pow(self.den_pow)
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn eval(&self, t: f64) -> Result<DualScalar> {
        let n = self.num.eval(t);
        let mut v = if self.den_pow == 0 {
            n
        } else {
            let b = self.den.eval(t);
            if b.re.abs() < ZERO_RE_TOL * (1.0 + self.den.magnitude_at(t)) {
                return Err(Error::PoleAtT { t });
            }
            n.checked_div(b.powi(self.den_pow))
                .map_err(|_| Error::PoleAtT { t })?
        };
        if self.rate != 0.0 {
            v = v.scale((self.rate * t).exp());
        }
        Ok(v)
    }

    pub fn derivative(&self) -> Self {
        let rate = DualScalar::real(self.rate);
        let dn = self.num.derivative();
        let db = self.den.derivative();
        if self.den_pow == 0 || db.is_zero() {
            // d/dt (N e^{rt}) / B^k = (N' + rN) e^{rt} / B^k
            let num = &dn + &self.num.scale(rate);
            return Self {
                num,
                den: self.den.clone(),
                den_pow: self.den_pow,
                rate: self.rate,
            };
        }
        let k = DualScalar::real(self.den_pow as f64);
        // (N'B − kNB' + rNB) / B^{k+1}
        let nb = &self.num * &self.den;
        let num = &(&(&dn * &self.den) - &(&self.num * &db).scale(k)) + &nb.scale(rate);
        Self {
            num,
            den: self.den.clone(),
            den_pow: self.den_pow + 1,
            rate: self.rate,
        }
    }
}

/// Sum of rational × exponential terms in `t` with dual coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScalarFunction {
    terms: Vec<Term>,
}

impl ScalarFunction {
    pub fn new(terms: Vec<Term>) -> Self {
        Self { terms }
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn constant(c: DualScalar) -> Self {
        Self::polynomial(vec![c])
    }

    /// Polynomial with ascending dual coefficients.
    pub fn polynomial(coeffs: Vec<DualScalar>) -> Self {
        Self::new(vec![Term::exp_poly(DualPolynomial::new(coeffs), 0.0)])
    }

    pub fn exp_poly(num: DualPolynomial, rate: f64) -> Self {
        Self::new(vec![Term::exp_poly(num, rate)])
    }

    pub fn rational(num: DualPolynomial, den: DualPolynomial) -> Result<Self> {
        Ok(Self::new(vec![Term::new(num, den, 0.0)?]))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn push(&mut self, term: Term) {
        self.terms.push(term);
    }

    /// Sum of two functions (terms are concatenated, not merged).
    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }
    }

    pub fn eval(&self, t: f64) -> Result<DualScalar> {
        self.terms.iter().map(|term| term.eval(t)).sum()
    }

    pub fn derivative(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(Term::derivative)
                .filter(|term| !term.num.is_zero())
                .collect(),
        }
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |f, _| f.derivative())
    }

    /// Symbolic zero test: every numerator has all coefficients within `tol`.
    /// Cancellation between distinct terms is not detected.
    pub fn is_identically_zero(&self, tol: f64) -> bool {
        self.terms.iter().all(|term| term.num.max_abs() <= tol)
    }

    /// True when the derivative vanishes symbolically.
    pub fn is_constant(&self) -> bool {
        let scale = self
            .terms
            .iter()
            .map(|term| term.num.max_abs() * (1.0 + term.den.max_abs()))
            .fold(1.0, f64::max);
        self.derivative().is_identically_zero(1e-13 * scale)
    }
}

/// Three scalar functions forming a dual vector of `t`: translations and
/// moving-frame point paths.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VecFunction(pub [ScalarFunction; 3]);

impl VecFunction {
    /// A fixed point (all derivatives zero).
    pub fn constant(v: &DualVec3) -> Self {
        Self(std::array::from_fn(|i| ScalarFunction::constant(v.component(i))))
    }

    pub fn eval(&self, t: f64) -> Result<DualVec3> {
        Ok(DualVec3::from_components([
            self.0[0].eval(t)?,
            self.0[1].eval(t)?,
            self.0[2].eval(t)?,
        ]))
    }

    pub fn derivative(&self) -> Self {
        Self(std::array::from_fn(|i| self.0[i].derivative()))
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |f, _| f.derivative())
    }

    pub fn is_identically_zero(&self, tol: f64) -> bool {
        self.0.iter().all(|f| f.is_identically_zero(tol))
    }
}
