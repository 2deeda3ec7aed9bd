//! Closed-form construction of the three solution families.

use num_traits::Zero;

use crate::exact::{rat_int, Poly, RatFunc, Rational};
use crate::specfun;

use super::{SeptupleError, SeptupleFns};

fn require_dim(m: u32) -> Result<(), SeptupleError> {
    if m < 2 {
        Err(SeptupleError::InvalidDimension(m))
    } else {
        Ok(())
    }
}

/// Case I: the φ ≡ 0 family. All seven functions are explicit polynomials
/// (degree ≤ 2m−1) in τ:
///
/// - `Q = −Kτ² + (2m−1)⁻¹·(α·τ^{2m−1} − η/m)`
/// - `Y = −2Kτ + α·τ^{2m−2}`
/// - `s = −(2m−1)(2m−4)·K − 2(m−1)·α·τ^{2m−3}`
/// - `φ = 0`, `ψ = −Kτ + α·τ^{2m−2}/2`
/// - `λ = (3−2m)·K`, `μ = K − (m−1)·α·τ^{2m−3}`
///
/// # Errors
///
/// - [`SeptupleError::InvalidDimension`] for m < 2.
/// - [`SeptupleError::DegenerateParameters`] when K = α = η = 0 (the
///   family needs |K| + |α| + |η| > 0).
pub fn build_case_i(
    m: u32,
    k: &Rational,
    alpha: &Rational,
    eta: &Rational,
) -> Result<SeptupleFns, SeptupleError> {
    require_dim(m)?;
    if k.is_zero() && alpha.is_zero() && eta.is_zero() {
        return Err(SeptupleError::DegenerateParameters(
            "case I needs |K| + |alpha| + |eta| > 0".into(),
        ));
    }
    let ml = m as i64;
    let deg = (2 * m - 1) as usize;

    let grad_sq = {
        let quadratic = Poly::monomial(-k.clone(), 2);
        let high = Poly::monomial(alpha / crate::exact::rat_int(2 * ml - 1), deg);
        let constant =
            Poly::constant(-eta / (rat_int(2 * ml - 1) * rat_int(ml)));
        RatFunc::from_poly(&(&quadratic + &high) + &constant)
    };
    let laplacian = RatFunc::from_poly(
        &Poly::monomial(rat_int(-2) * k.clone(), 1)
            + &Poly::monomial(alpha.clone(), deg - 1),
    );
    let scal = RatFunc::from_poly(
        &Poly::constant(rat_int(-(2 * ml - 1) * (2 * ml - 4)) * k.clone())
            + &Poly::monomial(rat_int(-2 * (ml - 1)) * alpha.clone(), deg - 2),
    );
    let hess_v = RatFunc::from_poly(
        &Poly::monomial(-k.clone(), 1)
            + &Poly::monomial(alpha / rat_int(2), deg - 1),
    );
    let ric_h = RatFunc::constant(rat_int(3 - 2 * ml) * k.clone());
    let ric_v = RatFunc::from_poly(
        &Poly::constant(k.clone())
            + &Poly::monomial(rat_int(-(ml - 1)) * alpha.clone(), deg - 2),
    );

    Ok(SeptupleFns {
        m,
        grad_sq,
        laplacian,
        scal,
        hess_h: RatFunc::zero(),
        hess_v,
        ric_h,
        ric_v,
    })
}

/// Reconstructs a full septuple from σ = φ and the constant c:
///
/// - `Q = 2(τ−c)·σ`
/// - `ψ = σ + (τ−c)·σ′`
/// - `Y = 2m·σ + 2(τ−c)·σ′`
/// - `μ = −(m+1)·σ′ − (τ−c)·σ″`
/// - `λ = μ + 2(m−1)(τ−c)·σ′/τ`
/// - `s = 2μ + 2(m−1)·λ`
///
/// This is the common back end of cases II and III, which differ only in
/// where σ comes from.
///
/// # Errors
///
/// - [`SeptupleError::InvalidDimension`] for m < 2.
/// - [`SeptupleError::ZeroSigma`] when σ is the zero function (φ must be
///   nonvanishing for these families).
pub fn reconstruct_from_sigma(
    sigma: &RatFunc,
    c: &Rational,
    m: u32,
) -> Result<SeptupleFns, SeptupleError> {
    require_dim(m)?;
    if sigma.is_zero() {
        return Err(SeptupleError::ZeroSigma);
    }
    let ml = m as i64;
    let tau_minus_c =
        RatFunc::from_poly(&Poly::x() - &Poly::constant(c.clone()));
    let tau = RatFunc::var();
    let s1 = sigma.diff();
    let s2 = s1.diff();

    let grad_sq = (&tau_minus_c * sigma).scale(&rat_int(2));
    let hess_v = sigma + &(&tau_minus_c * &s1);
    let laplacian =
        &sigma.scale(&rat_int(2 * ml)) + &(&tau_minus_c * &s1).scale(&rat_int(2));
    let ric_v = &s1.scale(&rat_int(-(ml + 1))) - &(&tau_minus_c * &s2);
    let ric_h = &ric_v
        + &(&tau_minus_c * &s1)
            .scale(&rat_int(2 * (ml - 1)))
            .div(&tau)
            .expect("tau is a nonzero function");
    let scal = &ric_v.scale(&rat_int(2)) + &ric_h.scale(&rat_int(2 * (ml - 1)));

    Ok(SeptupleFns {
        m,
        grad_sq,
        laplacian,
        scal,
        hess_h: sigma.clone(),
        hess_v,
        ric_h,
        ric_v,
    })
}

/// Case II: the φ ≠ 0, c = 0 family. σ = φ solves an Euler equation and is
/// spanned by 1, τ^m, 1/τ:
///
/// `2m·σ = K + m·α·τ^m − 2(m+1)⁻¹·η/τ`,
///
/// which via [`reconstruct_from_sigma`] (with c = 0) yields
/// `Q = m⁻¹·K·τ + α·τ^{m+1} − 2(m+1)⁻¹·η/m`.
///
/// # Errors
///
/// - [`SeptupleError::InvalidDimension`] for m < 2.
/// - [`SeptupleError::DegenerateParameters`] when K = α = η = 0
///   (σ would vanish identically).
pub fn build_case_ii(
    m: u32,
    k: &Rational,
    alpha: &Rational,
    eta: &Rational,
) -> Result<SeptupleFns, SeptupleError> {
    require_dim(m)?;
    if k.is_zero() && alpha.is_zero() && eta.is_zero() {
        return Err(SeptupleError::DegenerateParameters(
            "case II needs |K| + |alpha| + |eta| > 0".into(),
        ));
    }
    let ml = m as i64;
    // σ = K/(2m) + (α/2)·τ^m − η/(m(m+1)) · 1/τ
    let constant = Poly::constant(k / rat_int(2 * ml));
    let power = Poly::monomial(alpha / rat_int(2), m as usize);
    let polynomial_part = RatFunc::from_poly(&constant + &power);
    let inverse_part = RatFunc::new(
        Poly::constant(-eta / rat_int(ml * (ml + 1))),
        Poly::x(),
    )
    .expect("tau is a nonzero polynomial");
    let sigma = &polynomial_part + &inverse_part;
    reconstruct_from_sigma(&sigma, &Rational::zero(), m)
}

/// Case III: the φ ≠ 0, c ≠ 0 family, driven by the special functions E
/// and F in the rescaled variable t = τ/c:
///
/// `Q = (t−1)·[A + B·E(t) + C·F(t)]`, equivalently
/// `σ = [A + B·E(τ/c) + C·F(τ/c)] / (2c)`,
///
/// with the rest of the septuple from [`reconstruct_from_sigma`].
///
/// # Errors
///
/// - [`SeptupleError::InvalidDimension`] for m < 2.
/// - [`SeptupleError::ZeroC`] when c = 0.
/// - [`SeptupleError::DegenerateParameters`] when A = B = C = 0.
pub fn build_case_iii(
    m: u32,
    coef_a: &Rational,
    coef_b: &Rational,
    coef_c: &Rational,
    c: &Rational,
) -> Result<SeptupleFns, SeptupleError> {
    require_dim(m)?;
    if c.is_zero() {
        return Err(SeptupleError::ZeroC);
    }
    if coef_a.is_zero() && coef_b.is_zero() && coef_c.is_zero() {
        return Err(SeptupleError::DegenerateParameters(
            "case III needs |A| + |B| + |C| > 0".into(),
        ));
    }
    let set = specfun::build_set(m).expect("m >= 2 is a valid dimension");
    // t = τ/c as a rational function of τ.
    let t_of_tau = RatFunc::from_poly(Poly::monomial(
        Rational::new(1.into(), 1.into()) / c,
        1,
    ));
    let e_of_tau = RatFunc::from_poly(set.e.clone())
        .compose(&t_of_tau)
        .expect("nonconstant substitution");
    let f_of_tau = set
        .f
        .compose(&t_of_tau)
        .expect("nonconstant substitution");
    let combo = &(&RatFunc::constant(coef_a.clone()) + &e_of_tau.scale(coef_b))
        + &f_of_tau.scale(coef_c);
    let half_inv_c = Rational::new(1.into(), 2.into()) / c;
    let sigma = combo.scale(&half_inv_c);
    if sigma.is_zero() {
        // A + B·E + C·F with (A,B,C) ≠ 0 never cancels to the zero
        // function (1, E, F are linearly independent), but keep the
        // guard for safety.
        return Err(SeptupleError::ZeroSigma);
    }
    reconstruct_from_sigma(&sigma, c, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn rf_poly(coeffs: &[i64]) -> RatFunc {
        RatFunc::from_poly(Poly::from_int_coeffs(coeffs))
    }

    #[test]
    fn case_i_constant_solution() {
        // (m=2, K=0, α=0, η=−6): Q ≡ 1 and everything else vanishes.
        let s = build_case_i(2, &rat_int(0), &rat_int(0), &rat_int(-6)).unwrap();
        assert_eq!(s.grad_sq, RatFunc::one());
        for f in [&s.laplacian, &s.scal, &s.hess_h, &s.hess_v, &s.ric_h, &s.ric_v] {
            assert!(f.is_zero());
        }
    }

    #[test]
    fn case_i_round_solution() {
        // (m=2, K=1, α=0, η=−6): Q = 1−τ², Y = −2τ, ψ = −τ, λ = −1, μ = 1,
        // s = 0.
        let s = build_case_i(2, &rat_int(1), &rat_int(0), &rat_int(-6)).unwrap();
        assert_eq!(s.grad_sq, rf_poly(&[1, 0, -1]));
        assert_eq!(s.laplacian, rf_poly(&[0, -2]));
        assert_eq!(s.hess_v, rf_poly(&[0, -1]));
        assert_eq!(s.ric_h, RatFunc::constant(rat_int(-1)));
        assert_eq!(s.ric_v, RatFunc::one());
        assert!(s.scal.is_zero());
        assert!(s.hess_h.is_zero());
    }

    #[test]
    fn case_i_rejects_all_zero_parameters() {
        assert!(matches!(
            build_case_i(2, &rat_int(0), &rat_int(0), &rat_int(0)),
            Err(SeptupleError::DegenerateParameters(_))
        ));
        assert!(matches!(
            build_case_i(1, &rat_int(1), &rat_int(0), &rat_int(0)),
            Err(SeptupleError::InvalidDimension(1))
        ));
    }

    #[test]
    fn case_ii_inverse_tau_solution() {
        // (m=2, K=0, α=0, η=−3): Q ≡ 1, φ = 1/(2τ).
        let s = build_case_ii(2, &rat_int(0), &rat_int(0), &rat_int(-3)).unwrap();
        assert_eq!(s.grad_sq, RatFunc::one());
        let half_over_tau =
            RatFunc::new(Poly::constant(rat(1, 2)), Poly::x()).unwrap();
        assert_eq!(s.hess_h, half_over_tau);
    }

    #[test]
    fn case_ii_linear_solution() {
        // (m=2, K=2, α=0, η=0): φ ≡ 1/2, Q = τ.
        let s = build_case_ii(2, &rat_int(2), &rat_int(0), &rat_int(0)).unwrap();
        assert_eq!(s.hess_h, RatFunc::constant(rat(1, 2)));
        assert_eq!(s.grad_sq, rf_poly(&[0, 1]));
    }

    #[test]
    fn case_iii_pure_a_solution() {
        // (m=2, A=2, B=0, C=0, c=1): Q = 2(τ−1), φ ≡ 1.
        let s = build_case_iii(2, &rat_int(2), &rat_int(0), &rat_int(0), &rat_int(1))
            .unwrap();
        assert_eq!(s.grad_sq, rf_poly(&[-2, 2]));
        assert_eq!(s.hess_h, RatFunc::one());
    }

    #[test]
    fn case_iii_pure_e_solution() {
        // (m=2, A=0, B=1, C=0, c=1): E₂(t) = t²−1, so
        // Q = (τ−1)(τ²−1) = (τ−1)²(τ+1).
        let s = build_case_iii(2, &rat_int(0), &rat_int(1), &rat_int(0), &rat_int(1))
            .unwrap();
        assert_eq!(s.grad_sq, rf_poly(&[1, -1, -1, 1]));
    }

    #[test]
    fn case_iii_parameter_validation() {
        assert_eq!(
            build_case_iii(2, &rat_int(1), &rat_int(0), &rat_int(0), &rat_int(0))
                .unwrap_err(),
            SeptupleError::ZeroC
        );
        assert!(matches!(
            build_case_iii(2, &rat_int(0), &rat_int(0), &rat_int(0), &rat_int(1)),
            Err(SeptupleError::DegenerateParameters(_))
        ));
    }

    #[test]
    fn reconstruction_from_constant_sigma() {
        // σ = 1, c = 1, m = 2: Q = 2(τ−1), ψ = 1, Y = 4, μ = λ = s = 0.
        let s = reconstruct_from_sigma(&RatFunc::one(), &rat_int(1), 2).unwrap();
        assert_eq!(s.grad_sq, rf_poly(&[-2, 2]));
        assert_eq!(s.hess_v, RatFunc::one());
        assert_eq!(s.laplacian, RatFunc::constant(rat_int(4)));
        assert!(s.ric_v.is_zero());
        assert!(s.ric_h.is_zero());
        assert!(s.scal.is_zero());
    }

    #[test]
    fn reconstruction_rejects_zero_sigma() {
        assert_eq!(
            reconstruct_from_sigma(&RatFunc::zero(), &rat_int(1), 2).unwrap_err(),
            SeptupleError::ZeroSigma
        );
    }
}
