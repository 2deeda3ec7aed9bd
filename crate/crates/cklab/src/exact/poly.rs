//! Dense univariate polynomials over the exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{rat_int, rational_to_f64, Rational};
use super::ExactError;

/// Polynomial in one variable with [`Rational`] coefficients, stored densely
/// as `coeffs[i]` = coefficient of the i-th power.
///
/// # Invariants
///
/// - No trailing zero coefficients: the leading coefficient of a nonzero
///   polynomial is nonzero.
/// - The zero polynomial is the empty vector and has degree −1.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    /// Builds a polynomial from low-to-high coefficients, trimming trailing
    /// zeros to restore the canonical form.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    /// A constant polynomial.
    pub fn constant(value: Rational) -> Self {
        Poly::new(vec![value])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Poly::monomial(Rational::one(), 1)
    }

    /// The monomial `value · x^power`.
    pub fn monomial(value: Rational, power: usize) -> Self {
        if value.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = value;
        Poly { coeffs }
    }

    /// Convenience constructor from machine-integer coefficients
    /// (low to high).
    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    /// Degree, with the zero polynomial reporting −1.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^index`, zero beyond the degree.
    pub fn coeff(&self, index: usize) -> Rational {
        self.coeffs.get(index).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `x^index`, rejecting indices beyond the degree.
    ///
    /// Used where touching a missing coefficient indicates a logic error
    /// rather than an implicit zero.
    pub fn coeff_strict(&self, index: usize) -> Result<&Rational, ExactError> {
        self.coeffs.get(index).ok_or(ExactError::IndexOutOfRange {
            index,
            degree: self.degree(),
        })
    }

    /// Leading coefficient, if nonzero.
    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Low-to-high coefficient slice (no trailing zeros).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Multiplies every coefficient by a scalar.
    pub fn scale(&self, factor: &Rational) -> Poly {
        if factor.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Divides by the leading coefficient, making the polynomial monic.
    ///
    /// The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(lead) => {
                let inv = Rational::one() / lead;
                self.scale(&inv)
            }
        }
    }

    fn add_impl(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        Poly::new(coeffs)
    }

    fn sub_impl(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - other.coeff(i));
        }
        Poly::new(coeffs)
    }

    fn mul_impl(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs =
            vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(coeffs)
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, exponent: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat_int(i as i64))
            .collect();
        Poly::new(coeffs)
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Floating-point evaluation by Horner's rule (coefficients rounded to
    /// `f64` first). For sampling closed forms numerically, not for identity
    /// checking.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational_to_f64(c);
        }
        acc
    }

    /// Polynomial composition `self(inner)` by Horner's rule.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Euclidean division: returns `(quotient, remainder)` with
    /// `self = quotient · divisor + remainder` and
    /// `deg remainder < deg divisor`.
    ///
    /// # Panics
    ///
    /// Panics if `divisor` is zero; all in-crate callers divide by
    /// polynomials proved nonzero beforehand.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dlead = divisor
            .leading()
            .expect("polynomial division by zero")
            .clone();
        let ddeg = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= ddeg {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - ddeg];
        for k in (0..quot.len()).rev() {
            let factor = &rem[k + ddeg] / &dlead;
            if !factor.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    let value = &factor * d;
                    rem[k + j] -= value;
                }
            }
            quot[k] = factor;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    ///
    /// Each remainder is rescaled to monic form, which keeps coefficient
    /// growth polynomial for the degrees this crate works with. The gcd of
    /// two zero polynomials is zero; otherwise the result is monic.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Exact division, available when the remainder is known to vanish.
    ///
    /// # Panics
    ///
    /// Panics if the division leaves a remainder; callers use this only
    /// after cancelling a computed gcd.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.add_impl(rhs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.sub_impl(rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_impl(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}·")?;
                    }
                    if i == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_int_coeffs(coeffs)
    }

    #[test]
    fn canonical_form_trims_trailing_zeros() {
        let q = Poly::new(vec![rat_int(1), rat_int(0), rat_int(0)]);
        assert_eq!(q.degree(), 0);
        assert_eq!(Poly::zero().degree(), -1);
        assert!(Poly::new(vec![rat_int(0); 4]).is_zero());
    }

    #[test]
    fn arithmetic_matches_hand_expansion() {
        // (1 + t)(1 - t) = 1 - t^2
        assert_eq!(&p(&[1, 1]) * &p(&[1, -1]), p(&[1, 0, -1]));
        // (1 + 2t + t^2) - (1 + t) = t + t^2
        assert_eq!(&p(&[1, 2, 1]) - &p(&[1, 1]), p(&[0, 1, 1]));
    }

    #[test]
    fn division_recovers_quotient_and_remainder() {
        let a = p(&[-1, 0, 0, 1]); // t^3 - 1
        let b = p(&[-1, 1]); // t - 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[1, 1, 1]));
        assert!(r.is_zero());

        let (q, r) = p(&[1, 0, 1]).div_rem(&p(&[0, 1]));
        assert_eq!(q, p(&[0, 1]));
        assert_eq!(r, p(&[1]));
    }

    #[test]
    fn gcd_of_common_factor() {
        // gcd((t-1)(t+2), (t-1)(t-3)) = t - 1
        let a = &p(&[-1, 1]) * &p(&[2, 1]);
        let b = &p(&[-1, 1]) * &p(&[-3, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        // Coprime inputs give gcd 1.
        assert_eq!(p(&[1, 1]).gcd(&p(&[2, 1])), Poly::one());
    }

    #[test]
    fn derivative_and_eval() {
        let a = p(&[5, -3, 0, 2]); // 2t^3 - 3t + 5
        assert_eq!(a.derivative(), p(&[-3, 0, 6]));
        assert_eq!(a.eval(&rat_int(2)), rat_int(15));
        assert_eq!(a.eval(&rat(1, 2)), rat(15, 4));
    }

    #[test]
    fn compose_expands_binomial() {
        // (t^2)∘(t+1) = t^2 + 2t + 1
        assert_eq!(p(&[0, 0, 1]).compose(&p(&[1, 1])), p(&[1, 2, 1]));
    }

    #[test]
    fn strict_coefficient_access() {
        let a = p(&[1, 2]);
        assert_eq!(*a.coeff_strict(1).unwrap(), rat_int(2));
        assert_eq!(
            a.coeff_strict(2),
            Err(ExactError::IndexOutOfRange {
                index: 2,
                degree: 1
            })
        );
    }
}
