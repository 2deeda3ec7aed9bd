//! Rational functions (quotients of polynomials) in canonical form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::Rational;
use super::ExactError;

/// Rational function `numerator / denominator` over the exact rationals.
///
/// # Invariants
///
/// - `denominator` is monic and nonzero.
/// - `numerator` and `denominator` are coprime.
/// - The zero function is `0 / 1`.
///
/// Under these invariants the representation is unique, so an identity of
/// rational functions holds exactly if and only if the difference of the two
/// sides normalizes to [`RatFunc::is_zero`]. All "exact" verification in this
/// crate bottoms out in that test.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    numerator: Poly,
    denominator: Poly,
}

impl RatFunc {
    /// Builds and normalizes `numerator / denominator`.
    ///
    /// # Errors
    ///
    /// [`ExactError::DivisionByZeroFunction`] if `denominator` is the zero
    /// polynomial.
    pub fn new(numerator: Poly, denominator: Poly) -> Result<Self, ExactError> {
        if denominator.is_zero() {
            return Err(ExactError::DivisionByZeroFunction);
        }
        Ok(Self::normalized(numerator, denominator))
    }

    /// Normalizes with the denominator already known nonzero.
    fn normalized(numerator: Poly, denominator: Poly) -> Self {
        if numerator.is_zero() {
            return RatFunc {
                numerator: Poly::zero(),
                denominator: Poly::one(),
            };
        }
        let g = numerator.gcd(&denominator);
        let (mut num, mut den) = if g.degree() > 0 {
            (numerator.div_exact(&g), denominator.div_exact(&g))
        } else {
            (numerator, denominator)
        };
        let lead = den.leading().expect("nonzero denominator").clone();
        if !lead.is_one() {
            let inv = Rational::one() / lead;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc {
            numerator: num,
            denominator: den,
        }
    }

    /// The zero function 0/1.
    pub fn zero() -> Self {
        RatFunc {
            numerator: Poly::zero(),
            denominator: Poly::one(),
        }
    }

    /// The constant function 1.
    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    /// The identity function `t`.
    pub fn var() -> Self {
        RatFunc::from_poly(Poly::x())
    }

    /// A polynomial viewed as a rational function.
    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            numerator: p,
            denominator: Poly::one(),
        }
    }

    /// A constant function.
    pub fn constant(value: Rational) -> Self {
        RatFunc::from_poly(Poly::constant(value))
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Returns the constant value if this function is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.numerator.degree() <= 0 && self.denominator.degree() == 0 {
            Some(self.numerator.coeff(0))
        } else {
            None
        }
    }

    fn add_impl(&self, other: &RatFunc) -> RatFunc {
        let num = &(&self.numerator * &other.denominator)
            + &(&other.numerator * &self.denominator);
        let den = &self.denominator * &other.denominator;
        Self::normalized(num, den)
    }

    fn sub_impl(&self, other: &RatFunc) -> RatFunc {
        let num = &(&self.numerator * &other.denominator)
            - &(&other.numerator * &self.denominator);
        let den = &self.denominator * &other.denominator;
        Self::normalized(num, den)
    }

    fn mul_impl(&self, other: &RatFunc) -> RatFunc {
        // Cross-cancel before multiplying to keep intermediate degrees low.
        let g1 = self.numerator.gcd(&other.denominator);
        let g2 = other.numerator.gcd(&self.denominator);
        let a = if g1.degree() > 0 {
            self.numerator.div_exact(&g1)
        } else {
            self.numerator.clone()
        };
        let d = if g1.degree() > 0 {
            other.denominator.div_exact(&g1)
        } else {
            other.denominator.clone()
        };
        let b = if g2.degree() > 0 {
            other.numerator.div_exact(&g2)
        } else {
            other.numerator.clone()
        };
        let c = if g2.degree() > 0 {
            self.denominator.div_exact(&g2)
        } else {
            self.denominator.clone()
        };
        Self::normalized(&a * &b, &c * &d)
    }

    /// Division of rational functions.
    ///
    /// # Errors
    ///
    /// [`ExactError::DivisionByZeroFunction`] if `other` is the zero
    /// function.
    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, ExactError> {
        if other.is_zero() {
            return Err(ExactError::DivisionByZeroFunction);
        }
        Ok(self.mul_impl(&RatFunc {
            numerator: other.denominator.clone(),
            denominator: other.numerator.clone(),
        }))
    }

    /// Scalar multiple.
    pub fn scale(&self, factor: &Rational) -> RatFunc {
        if factor.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            numerator: self.numerator.scale(factor),
            denominator: self.denominator.clone(),
        }
    }

    /// Integer power; negative exponents invert first.
    ///
    /// # Errors
    ///
    /// [`ExactError::DivisionByZeroFunction`] for a negative power of the
    /// zero function.
    pub fn pow(&self, exponent: i32) -> Result<RatFunc, ExactError> {
        let base = if exponent < 0 {
            RatFunc::one().div(self)?
        } else {
            self.clone()
        };
        let mut result = RatFunc::one();
        let mut b = base;
        let mut e = exponent.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(result)
    }

    /// Derivative by the quotient rule, renormalized.
    pub fn diff(&self) -> RatFunc {
        let num = &(&self.numerator.derivative() * &self.denominator)
            - &(&self.numerator * &self.denominator.derivative());
        let den = &self.denominator * &self.denominator;
        Self::normalized(num, den)
    }

    /// Exact evaluation.
    ///
    /// # Errors
    ///
    /// [`ExactError::PoleEvaluation`] when the reduced denominator vanishes
    /// at `x`.
    pub fn eval(&self, x: &Rational) -> Result<Rational, ExactError> {
        let den = self.denominator.eval(x);
        if den.is_zero() {
            return Err(ExactError::PoleEvaluation(x.to_string()));
        }
        Ok(self.numerator.eval(x) / den)
    }

    /// Floating-point evaluation. Near poles this degrades gracefully to
    /// large or non-finite values; numerical callers guard with their own
    /// domain checks.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.numerator.eval_f64(x) / self.denominator.eval_f64(x)
    }

    /// Composition `self(inner)`.
    ///
    /// # Errors
    ///
    /// [`ExactError::ConstantPoleComposition`] when `inner` is a constant
    /// lying on a pole of `self`, which would make the composite nowhere
    /// defined.
    pub fn compose(&self, inner: &RatFunc) -> Result<RatFunc, ExactError> {
        let num = compose_poly_with(&self.numerator, inner);
        let den = compose_poly_with(&self.denominator, inner);
        if den.is_zero() {
            return Err(ExactError::ConstantPoleComposition);
        }
        num.div(&den)
    }
}

/// Horner evaluation of a polynomial at a rational-function argument.
fn compose_poly_with(p: &Poly, inner: &RatFunc) -> RatFunc {
    let mut acc = RatFunc::zero();
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * inner) + &RatFunc::constant(c.clone());
    }
    acc
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        self.add_impl(rhs)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self.sub_impl(rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        self.mul_impl(rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            numerator: -&self.numerator,
            denominator: self.denominator.clone(),
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.degree() == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.denominator)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_int_coeffs(coeffs)
    }

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(p(num), p(den)).unwrap()
    }

    #[test]
    fn normalizes_to_coprime_monic_form() {
        // (t^2 - 1)/(2t - 2) = (t + 1)/2.
        let f = rf(&[-1, 0, 1], &[-2, 2]);
        assert_eq!(f.numerator(), &p(&[1, 1]).scale(&rat(1, 2)));
        assert_eq!(f.denominator(), &Poly::one());
        // Zero keeps the canonical 0/1 form regardless of input denominator.
        let z = rf(&[0], &[3, 7]);
        assert!(z.is_zero());
        assert_eq!(z.denominator(), &Poly::one());
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert_eq!(
            RatFunc::new(p(&[1]), Poly::zero()).unwrap_err(),
            ExactError::DivisionByZeroFunction
        );
    }

    #[test]
    fn arithmetic_identity_telescopes() {
        // 1/(t-1) - 1/t = 1/(t(t-1)).
        let a = rf(&[1], &[-1, 1]);
        let b = rf(&[1], &[0, 1]);
        let expect = rf(&[1], &[0, -1, 1]);
        assert_eq!(&a - &b, expect);
    }

    #[test]
    fn derivative_by_quotient_rule() {
        // d/dt [1/(t-1)] = -1/(t-1)^2.
        let f = rf(&[1], &[-1, 1]);
        assert_eq!(f.diff(), rf(&[-1], &[1, -2, 1]));
    }

    #[test]
    fn evaluation_and_poles() {
        let f = rf(&[1, 1], &[-1, 1]); // (t+1)/(t-1)
        assert_eq!(f.eval(&rat_int(3)).unwrap(), rat_int(2));
        assert!(matches!(
            f.eval(&rat_int(1)),
            Err(ExactError::PoleEvaluation(_))
        ));
        // The *reduced* form decides what is a pole: (t^2-1)/(t-1) is t+1.
        let g = rf(&[-1, 0, 1], &[-1, 1]);
        assert_eq!(g.eval(&rat_int(1)).unwrap(), rat_int(2));
    }

    #[test]
    fn composition_with_shift() {
        // f(t) = 1/t composed with t+1 gives 1/(t+1).
        let f = rf(&[1], &[0, 1]);
        let g = RatFunc::from_poly(p(&[1, 1]));
        assert_eq!(f.compose(&g).unwrap(), rf(&[1], &[1, 1]));
        // Constant-on-pole composition is rejected: 1/t at the constant 0.
        let c = RatFunc::zero();
        assert_eq!(
            f.compose(&c).unwrap_err(),
            ExactError::ConstantPoleComposition
        );
    }

    #[test]
    fn powers_including_negative() {
        let f = rf(&[0, 1], &[1, 1]); // t/(t+1)
        assert_eq!(f.pow(2).unwrap(), rf(&[0, 0, 1], &[1, 2, 1]));
        assert_eq!(f.pow(-1).unwrap(), rf(&[1, 1], &[0, 1]));
        assert_eq!(f.pow(0).unwrap(), RatFunc::one());
    }
}
