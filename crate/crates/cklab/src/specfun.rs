//! The special functions of the classification and their exact identities.
//!
//! Four closed-form objects, all depending on the complex dimension `m ≥ 1`,
//! recur throughout the solution theory:
//!
//! - `F(t) = (t−2)·t^{2m−1}/(t−1)^m`, a rational function with sole pole at
//!   t = 1;
//! - `E(t) = (t−1)·Σ_{k=1..m} (k/m)·C(2m−k−1, m−1)·t^{k−1}`, a degree-m
//!   polynomial;
//! - `Ξ(t) = m(t−1) + m/(t−1) − 2(m−1)`, the common logarithmic-derivative
//!   factor of E and F;
//! - `P(Z)`, the unique even polynomial with `P(0) = 1` and
//!   `P″ = 2m(1−Z²)^{m−1}`.
//!
//! `1` , `E` and `F` span the solution space of the third-order equation
//! governing the c ≠ 0 family, and `P` reappears when those solutions are
//! rewritten in the variable `φ = (2−t)/t` (the rotationally symmetric
//! picture). The two suites here, [`verify_su_identities`] and
//! [`verify_bb_identities`], check the full web of identities tying these
//! functions together — derivative laws, cross-dimension recursions, and the
//! change-of-variable bridge — entirely in exact rational-function
//! arithmetic: each identity is moved to one side and must normalize to the
//! zero function. Nothing is sampled.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{binom, rat, rat_int, Poly, RatFunc, Rational};
use crate::report::VerificationReport;

/// Errors from special-function construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecFunError {
    /// The catalog is defined for complex dimension m ≥ 1.
    #[error("complex dimension m must be at least 1, got {0}")]
    InvalidDimension(u32),
}

/// The special-function catalog at a fixed complex dimension.
#[derive(Debug, Clone)]
pub struct SpecialFunctionSet {
    /// Complex dimension m ≥ 1.
    pub m: u32,
    /// `F(t) = (t−2)·t^{2m−1}/(t−1)^m`.
    pub f: RatFunc,
    /// `E(t)`, the degree-m polynomial solution companion to F.
    pub e: Poly,
    /// `Ξ(t) = m(t−1) + m/(t−1) − 2(m−1)`.
    pub xi: RatFunc,
    /// `E(0) = −C(2m−2, m−1)/m`.
    pub e0: Rational,
    /// The even polynomial `P` with `P(0) = 1`, `P″ = 2m(1−Z²)^{m−1}`.
    pub p: Poly,
}

fn check_dim(m: u32) -> Result<(), SpecFunError> {
    if m == 0 {
        Err(SpecFunError::InvalidDimension(m))
    } else {
        Ok(())
    }
}

/// Builds `F(t) = (t−2)·t^{2m−1}/(t−1)^m`.
pub fn build_f(m: u32) -> Result<RatFunc, SpecFunError> {
    check_dim(m)?;
    let num = &Poly::from_int_coeffs(&[-2, 1]) * &Poly::x().pow(2 * m - 1);
    let den = Poly::from_int_coeffs(&[-1, 1]).pow(m);
    Ok(RatFunc::new(num, den).expect("nonzero denominator"))
}

/// Builds `E(t) = (t−1)·Σ_{k=1..m} (k/m)·C(2m−k−1, m−1)·t^{k−1}`.
pub fn build_e(m: u32) -> Result<Poly, SpecFunError> {
    check_dim(m)?;
    let mut sum = Poly::zero();
    for k in 1..=m {
        let weight = Rational::new(
            BigInt::from(k) * binom((2 * m - k - 1) as u64, (m - 1) as u64),
            BigInt::from(m),
        );
        sum = &sum + &Poly::monomial(weight, (k - 1) as usize);
    }
    Ok(&Poly::from_int_coeffs(&[-1, 1]) * &sum)
}

/// Builds `Ξ(t) = m(t−1) + m/(t−1) − 2(m−1)`.
pub fn build_xi(m: u32) -> Result<RatFunc, SpecFunError> {
    check_dim(m)?;
    let t_minus_1 = RatFunc::from_poly(Poly::from_int_coeffs(&[-1, 1]));
    let m_rat = RatFunc::constant(rat_int(m as i64));
    let first = &m_rat * &t_minus_1;
    let second = m_rat.div(&t_minus_1).expect("t−1 is nonzero");
    let third = RatFunc::constant(rat_int(2 * (m as i64 - 1)));
    Ok(&(&first + &second) - &third)
}

/// Builds the even polynomial `P` with `P(0) = 1` and
/// `P″ = 2m(1−Z²)^{m−1}`, via its explicit expansion
/// `P = 1 + 2m·Σ_{k=1..m} (−1)^{k−1}·C(m−1, k−1)·Z^{2k}/(2k(2k−1))`.
pub fn build_p(m: u32) -> Result<Poly, SpecFunError> {
    check_dim(m)?;
    let mut p = Poly::one();
    for k in 1..=m as i64 {
        let sign = if (k - 1) % 2 == 0 { 1 } else { -1 };
        let coeff = Rational::new(
            BigInt::from(sign * 2 * m as i64)
                * binom((m - 1) as u64, (k - 1) as u64),
            BigInt::from(2 * k * (2 * k - 1)),
        );
        p = &p + &Poly::monomial(coeff, (2 * k) as usize);
    }
    Ok(p)
}

/// `E(0)` without building E: `−C(2m−2, m−1)/m`.
pub fn e_at_zero(m: u32) -> Result<Rational, SpecFunError> {
    check_dim(m)?;
    Ok(Rational::new(
        -binom((2 * m - 2) as u64, (m - 1) as u64),
        BigInt::from(m),
    ))
}

/// Builds the whole catalog at dimension m.
pub fn build_set(m: u32) -> Result<SpecialFunctionSet, SpecFunError> {
    let e = build_e(m)?;
    let e0 = e.eval(&Rational::zero());
    debug_assert_eq!(e0, e_at_zero(m)?);
    Ok(SpecialFunctionSet {
        m,
        f: build_f(m)?,
        e,
        xi: build_xi(m)?,
        e0,
        p: build_p(m)?,
    })
}

fn push_zero_check(
    report: &mut VerificationReport,
    tag: String,
    equation: &str,
    residual: &RatFunc,
) {
    let pass = residual.is_zero();
    let detail = if pass {
        None
    } else {
        Some(format!("nonzero remainder: {residual}"))
    };
    report.push_exact(tag, equation, pass, detail);
}

fn push_not_applicable(report: &mut VerificationReport, tag: String, equation: &str) {
    report.push_exact(
        tag,
        equation,
        true,
        Some("not applicable at m = 1 (needs the m−1 catalog)".into()),
    );
}

/// Exact identity suite for `E`, `F`, `Ξ` at dimension m.
///
/// Checks, each by normalizing the difference of the two sides to zero:
/// - `t(t−2)·Ḟ = Ξ·F` and `t(t−2)·Ė = Ξ·E + 2(2m−1)E(0)`
///   — the derivative laws;
/// - `t(t−2)·σ̈ + 2(t−1)·σ̇ = (Ξσ)˙` for σ = E and σ = F — the shared
///   second-order equation;
/// - `(E_m − E_m(0))/F_m = E_{m−1}/F_{m−1}` and
///   `t(t−2)·(E/F)˙ = 2(2m−1)·E(0)/F` — the quotient laws;
/// - the three cross-dimension recursions
///   `(t−1)(E_m − E_m(0)) = t²E_{m−1}`, `(t−1)F_m = t²F_{m−1}`,
///   `m·E_m(0) = 2(2m−3)·E_{m−1}(0)`.
///
/// At m = 1 the recursion entries are recorded as not-applicable passes
/// (there is no m = 0 catalog).
pub fn verify_su_identities(m: u32) -> Result<VerificationReport, SpecFunError> {
    let set = build_set(m)?;
    let mut report = VerificationReport::new();
    let t_t_minus_2 =
        RatFunc::from_poly(&Poly::x() * &Poly::from_int_coeffs(&[-2, 1]));
    let e = RatFunc::from_poly(set.e.clone());
    let e_prime = RatFunc::from_poly(set.e.derivative());
    let f = set.f.clone();
    let f_prime = f.diff();
    let e0 = RatFunc::constant(set.e0.clone());
    let two_2m_minus_1 = RatFunc::constant(rat_int(2 * (2 * m as i64 - 1)));

    // t(t−2)·Ḟ − Ξ·F
    let res = &(&t_t_minus_2 * &f_prime) - &(&set.xi * &f);
    push_zero_check(&mut report, format!("m={m}: derivative law of F"), "(21.2a)", &res);

    // t(t−2)·Ė − Ξ·E − 2(2m−1)E(0)
    let res = &(&(&t_t_minus_2 * &e_prime) - &(&set.xi * &e)) - &(&two_2m_minus_1 * &e0);
    push_zero_check(&mut report, format!("m={m}: derivative law of E"), "(21.2b)", &res);

    // t(t−2)·σ̈ + 2(t−1)·σ̇ − (Ξσ)˙  for σ ∈ {E, F}
    let two_t_minus_1 =
        RatFunc::from_poly(Poly::from_int_coeffs(&[-2, 2]));
    for (name, sigma) in [("E", e.clone()), ("F", f.clone())] {
        let s1 = sigma.diff();
        let s2 = s1.diff();
        let res = &(&(&t_t_minus_2 * &s2) + &(&two_t_minus_1 * &s1))
            - &(&set.xi * &sigma).diff();
        push_zero_check(
            &mut report,
            format!("m={m}: second-order equation for {name}"),
            "(21.4)",
            &res,
        );
    }

    // t(t−2)·(E/F)˙ − 2(2m−1)·E(0)/F
    let e_over_f = e.div(&f).expect("F is a nonzero function");
    let res = &(&t_t_minus_2 * &e_over_f.diff())
        - &(&two_2m_minus_1 * &e0).div(&f).expect("F nonzero");
    push_zero_check(&mut report, format!("m={m}: quotient derivative law"), "(21.3ii)", &res);

    if m >= 2 {
        let prev = build_set(m - 1)?;
        let e_prev = RatFunc::from_poly(prev.e.clone());
        let t_sq = RatFunc::from_poly(Poly::x().pow(2));
        let t_minus_1 = RatFunc::from_poly(Poly::from_int_coeffs(&[-1, 1]));
        let e_shift = &e - &e0;

        // (E_m − E_m(0))/F_m − E_{m−1}/F_{m−1}
        let res = &e_shift.div(&f).expect("F nonzero")
            - &e_prev.div(&prev.f).expect("F nonzero");
        push_zero_check(&mut report, format!("m={m}: quotient descent"), "(21.3i)", &res);

        // (t−1)(E_m − E_m(0)) − t²·E_{m−1}
        let res = &(&t_minus_1 * &e_shift) - &(&t_sq * &e_prev);
        push_zero_check(&mut report, format!("m={m}: E recursion"), "(21.3) proof", &res);

        // (t−1)·F_m − t²·F_{m−1}
        let res = &(&t_minus_1 * &f) - &(&t_sq * &prev.f);
        push_zero_check(&mut report, format!("m={m}: F recursion"), "(21.3) proof", &res);

        // m·E_m(0) − 2(2m−3)·E_{m−1}(0)
        let res = rat_int(m as i64) * set.e0.clone()
            - rat_int(2 * (2 * m as i64 - 3)) * prev.e0.clone();
        let res = RatFunc::constant(res);
        push_zero_check(&mut report, format!("m={m}: E(0) recursion"), "(21.3) proof", &res);
    } else {
        push_not_applicable(&mut report, format!("m={m}: quotient descent"), "(21.3i)");
        push_not_applicable(&mut report, format!("m={m}: E recursion"), "(21.3) proof");
        push_not_applicable(&mut report, format!("m={m}: F recursion"), "(21.3) proof");
        push_not_applicable(&mut report, format!("m={m}: E(0) recursion"), "(21.3) proof");
    }

    Ok(report)
}

/// Exact identity suite bridging `E`, `F` to the even polynomial `P` through
/// the substitution `φ = (2−t)/t` (equivalently `t = 2/(1+φ)`), under which
/// `1 − φ² = 4(t−1)/t²`.
///
/// Checks:
/// - `P(0) = 1`, `P` even, and `P″ = 2m(1−Z²)^{m−1}` coefficient-wise — the
///   defining properties;
/// - `2(1−2m)E(0)·P(φ(t)) = (1−φ(t)²)^m·[2E(t) − F(t)]` — the
///   change-of-variable bridge, verified in the t-variable where both sides
///   are rational (the φ-variable would drag in square roots);
/// - `(1−φ(t)²)^m·F(t) = −4^m·φ(t)` — the companion closed form;
/// - for m ≥ 2 the recursions `E_m = 4(1−φ²)^{−1}E_{m−1} + 2(2−3/m)E_{m−1}(0)`
///   (in the t-variable) and `(1−2m)P_m = (1−Z²)^m − 2m·P_{m−1}`.
pub fn verify_bb_identities(m: u32) -> Result<VerificationReport, SpecFunError> {
    let set = build_set(m)?;
    let mut report = VerificationReport::new();

    // Defining properties of P.
    let p0 = set.p.eval(&Rational::zero());
    report.push_exact(
        format!("m={m}: P(0) = 1"),
        "(26.1) context",
        p0.is_one(),
        (!p0.is_one()).then(|| format!("P(0) = {p0}")),
    );
    let odd_coeffs_vanish = (0..=set.p.degree().max(0) as usize)
        .filter(|i| i % 2 == 1)
        .all(|i| set.p.coeff(i).is_zero());
    report.push_exact(
        format!("m={m}: P is even"),
        "(26.1) context",
        odd_coeffs_vanish,
        None,
    );
    let one_minus_z2 = Poly::from_int_coeffs(&[1, 0, -1]);
    let p_dd_target = one_minus_z2.pow(m - 1).scale(&rat_int(2 * m as i64));
    let res = &set.p.derivative().derivative() - &p_dd_target;
    push_zero_check(
        &mut report,
        format!("m={m}: P'' = 2m(1−Z²)^(m−1)"),
        "(26.1) context",
        &RatFunc::from_poly(res),
    );

    // The substitution φ(t) = (2−t)/t and 1−φ² = 4(t−1)/t² as exact data.
    let phi_of_t = RatFunc::new(
        Poly::from_int_coeffs(&[2, -1]),
        Poly::x(),
    )
    .expect("t is nonzero");
    let one_minus_phi2 = RatFunc::new(
        Poly::from_int_coeffs(&[-4, 4]),
        Poly::x().pow(2),
    )
    .expect("t² is nonzero");
    // Internal consistency of the substitution itself.
    let res = &(&RatFunc::one() - &(&phi_of_t * &phi_of_t)) - &one_minus_phi2;
    push_zero_check(
        &mut report,
        format!("m={m}: substitution consistency 1−φ(t)²"),
        "(26.1) context",
        &res,
    );

    let e = RatFunc::from_poly(set.e.clone());
    let two_e_minus_f = &(&RatFunc::constant(rat_int(2)) * &e) - &set.f;
    let pow_m = one_minus_phi2.pow(m as i32).expect("nonzero base");

    // 2(1−2m)E(0)·P(φ(t)) − (1−φ²)^m·(2E − F)
    let lhs = RatFunc::from_poly(set.p.clone())
        .compose(&phi_of_t)
        .expect("nonconstant inner function")
        .scale(&(rat_int(2 * (1 - 2 * m as i64)) * set.e0.clone()));
    let res = &lhs - &(&pow_m * &two_e_minus_f);
    push_zero_check(&mut report, format!("m={m}: P bridge identity"), "(26.1)", &res);

    // (1−φ²)^m·F + 4^m·φ
    let four_m = rat_int(4).pow(m.try_into().expect("small m"));
    let res = &(&pow_m * &set.f) + &phi_of_t.scale(&four_m);
    push_zero_check(&mut report, format!("m={m}: F closed form in φ"), "(26.1) companion", &res);

    if m >= 2 {
        let prev = build_set(m - 1)?;
        // E_m − 4(1−φ²)^{−1}·E_{m−1} − 2(2−3/m)·E_{m−1}(0), in t.
        let four_over = RatFunc::constant(rat_int(4))
            .div(&one_minus_phi2)
            .expect("1−φ² is a nonzero function");
        let coeff = rat(2, 1) * (rat_int(2) - rat(3, m as i64));
        let res = &(&e - &(&four_over * &RatFunc::from_poly(prev.e.clone())))
            - &RatFunc::constant(coeff * prev.e0.clone());
        push_zero_check(&mut report, format!("m={m}: E recursion in φ-form"), "(26.1) proof", &res);

        // (1−2m)·P_m − (1−Z²)^m + 2m·P_{m−1}
        let res = &(&set.p.scale(&rat_int(1 - 2 * m as i64)) - &one_minus_z2.pow(m))
            + &prev.p.scale(&rat_int(2 * m as i64));
        push_zero_check(
            &mut report,
            format!("m={m}: P recursion"),
            "(26.1) proof",
            &RatFunc::from_poly(res),
        );
    } else {
        push_not_applicable(&mut report, format!("m={m}: E recursion in φ-form"), "(26.1) proof");
        push_not_applicable(&mut report, format!("m={m}: P recursion"), "(26.1) proof");
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn rejects_dimension_zero() {
        assert_eq!(build_f(0).unwrap_err(), SpecFunError::InvalidDimension(0));
        assert_eq!(build_set(0).unwrap_err(), SpecFunError::InvalidDimension(0));
    }

    #[test]
    fn e_matches_hand_expansion_low_dimensions() {
        // E₁ = t − 1;  E₂ = (t−1)(1+t) = t² − 1.
        assert_eq!(build_e(1).unwrap(), Poly::from_int_coeffs(&[-1, 1]));
        assert_eq!(build_e(2).unwrap(), Poly::from_int_coeffs(&[-1, 0, 1]));
    }

    #[test]
    fn e_at_zero_frozen_values() {
        // E_m(0) = −C(2m−2, m−1)/m: −1, −1, −2, −5 for m = 1..4.
        assert_eq!(e_at_zero(1).unwrap(), rat_int(-1));
        assert_eq!(e_at_zero(2).unwrap(), rat_int(-1));
        assert_eq!(e_at_zero(3).unwrap(), rat_int(-2));
        assert_eq!(e_at_zero(4).unwrap(), rat_int(-5));
        // Builder and closed form agree.
        let set = build_set(5).unwrap();
        assert_eq!(set.e0, e_at_zero(5).unwrap());
    }

    #[test]
    fn xi_frozen_values() {
        // Ξ(2) = 2 for every m; Ξ(0) = −(4m−2).
        for m in 1..=6 {
            let xi = build_xi(m).unwrap();
            assert_eq!(xi.eval(&rat_int(2)).unwrap(), rat_int(2));
            assert_eq!(
                xi.eval(&rat_int(0)).unwrap(),
                rat_int(-(4 * m as i64 - 2))
            );
        }
    }

    #[test]
    fn f_has_expected_shape() {
        // F₂ = (t−2)t³/(t−1)².
        let f = build_f(2).unwrap();
        let num = &Poly::from_int_coeffs(&[-2, 1]) * &Poly::x().pow(3);
        let den = Poly::from_int_coeffs(&[-1, 1]).pow(2);
        assert_eq!(f, RatFunc::new(num, den).unwrap());
        // F(2) = 0 for every m.
        for m in 1..=5 {
            assert!(build_f(m).unwrap().eval(&rat_int(2)).unwrap() == rat_int(0));
        }
    }

    #[test]
    fn p_matches_hand_expansion() {
        // P₂ = 1 + 2Z² − Z⁴/3.
        let p = build_p(2).unwrap();
        let expect = Poly::new(vec![
            rat_int(1),
            rat_int(0),
            rat_int(2),
            rat_int(0),
            rat(-1, 3),
        ]);
        assert_eq!(p, expect);
        assert_eq!(p.degree(), 4);
    }

    #[test]
    fn su_suite_is_exact_through_m_8() {
        for m in 1..=8 {
            let report = verify_su_identities(m).unwrap();
            assert!(
                report.all_pass(),
                "failures at m={m}: {:?}",
                report.failures()
            );
        }
    }

    #[test]
    fn bb_suite_is_exact_through_m_8() {
        for m in 1..=8 {
            let report = verify_bb_identities(m).unwrap();
            assert!(
                report.all_pass(),
                "failures at m={m}: {:?}",
                report.failures()
            );
        }
    }

    #[test]
    fn perturbed_catalog_fails_the_suite() {
        // Sanity that the checks can fail: E with one coefficient nudged
        // breaks the derivative law.
        let set = build_set(2).unwrap();
        let bad_e = &set.e + &Poly::monomial(rat(1, 7), 1);
        let t_t_minus_2 =
            RatFunc::from_poly(&Poly::x() * &Poly::from_int_coeffs(&[-2, 1]));
        let e = RatFunc::from_poly(bad_e.clone());
        let res = &(&(&t_t_minus_2 * &RatFunc::from_poly(bad_e.derivative()))
            - &(&set.xi * &e))
            - &RatFunc::constant(rat_int(6) * set.e0.clone());
        assert!(!res.is_zero());
    }
}
