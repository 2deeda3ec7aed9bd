//! Closed-form product chart: negatively curved surface × round sphere.
//!
//! At complex dimension m = 2 the ε = 0 branch of the construction is a
//! Riemannian product N × S with a potential pulled back from the sphere
//! factor. This module builds that product directly — without the bundle
//! machinery — as an independent cross-check of the geometry stack:
//!
//! - N carries the conformal disc metric 4|dx|²/(1−Kρ_x)² of curvature
//!   −K; S carries 4|dy|²/(1+Kρ_y)², the stereographic round metric of
//!   curvature K;
//! - τ = lin·X₃ where X₃ = (Kρ_y−1)/(√K(1+Kρ_y)) is the vertical
//!   coordinate of the inverse stereographic embedding of radius 1/√K.
//!
//! [`verify_product_identities`] certifies, by finite differences
//! against the assembled curvature, the four identities a τ of this type
//! must satisfy on the product:
//!
//! ```text
//! ∇dτ = −Kτ·γ_S (sphere block only)        (25-hess)
//! Δτ + 2Kτ = 0                             (25-lap)
//! 2(m−1)∇dτ + τ·Ric = (3−2m)Kτ·γ           (25-b)
//! |∇τ|² + Kτ² = lin²                       (25-q)
//! ```
//!
//! # Invariants
//!
//! - only m = 2 is a genuine product of this shape; other m are
//!   rejected;
//! - the domain keeps 1 − Kρ_x bounded away from the conformal pole.

use nalgebra::DMatrix;

use super::BundleError;
use crate::geometry::{hessian_potential, riemann, ChartMetric, GeometryError};
use crate::report::VerificationReport;
use crate::tol::{
    PRODUCT_CONSTANT_TOL, PRODUCT_FD_STEP, PRODUCT_HESSIAN_TOL, PRODUCT_IDENTITY_TOL,
};

/// Margin kept between ρ_x and the conformal pole of the N factor.
const N_POLE_MARGIN: f64 = 0.05;

/// Builds the product chart on coordinates (x₀, x₁, y₀, y₁): the N
/// factor on x, the sphere factor on y, τ pulled back from the sphere.
///
/// # Errors
///
/// [`BundleError::InvalidDimension`] unless m = 2.
///
/// # Panics
///
/// When K ≤ 0 or lin = 0 (the chart is meaningless there).
pub fn product_example_chart(m: u32, k: f64, lin: f64) -> Result<ChartMetric, BundleError> {
    if m != 2 {
        return Err(BundleError::InvalidDimension(m));
    }
    assert!(k > 0.0, "the sphere factor needs K > 0");
    assert!(lin != 0.0, "the potential scale must be nonzero");
    let metric_at: Box<crate::geometry::MatrixFn> = Box::new(move |p: &[f64]| {
        let rho_x = p[0] * p[0] + p[1] * p[1];
        let rho_y = p[2] * p[2] + p[3] * p[3];
        let cn = 4.0 / ((1.0 - k * rho_x) * (1.0 - k * rho_x));
        let cs = 4.0 / ((1.0 + k * rho_y) * (1.0 + k * rho_y));
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![cn, cn, cs, cs]))
    });
    let complex_structure_at: Box<crate::geometry::MatrixFn> =
        Box::new(move |_p: &[f64]| crate::geometry::standard_complex_structure(4));
    let potential_at: Box<crate::geometry::PointFn> = Box::new(move |p: &[f64]| {
        let rho_y = p[2] * p[2] + p[3] * p[3];
        lin * (k * rho_y - 1.0) / (k.sqrt() * (1.0 + k * rho_y))
    });
    let domain_probe: Box<crate::geometry::ProbeFn> = Box::new(move |p: &[f64]| {
        let rho_x = p[0] * p[0] + p[1] * p[1];
        1.0 - k * rho_x > N_POLE_MARGIN
    });
    Ok(ChartMetric {
        dim: 4,
        metric_at,
        complex_structure_at,
        potential_at,
        domain_probe,
    })
}

/// Verifies the four product identities at each point (worst residual
/// per identity is reported). All finite differencing runs at the
/// product-tuned step, coarse enough that the 10⁻⁸ constant-level
/// tolerances sit above the rounding floor.
///
/// # Errors
///
/// Propagates [`GeometryError`] from the curvature machinery.
pub fn verify_product_identities(
    chart: &ChartMetric,
    k: f64,
    lin: f64,
    points: &[Vec<f64>],
) -> Result<VerificationReport, GeometryError> {
    let mut worst_hess: f64 = 0.0;
    let mut worst_lap: f64 = 0.0;
    let mut worst_b: f64 = 0.0;
    let mut worst_q: f64 = 0.0;
    for p in points {
        let hd = hessian_potential(chart, p, PRODUCT_FD_STEP)?;
        let bundle = riemann(chart, p, PRODUCT_FD_STEP)?;
        let g = chart.metric(p);
        let tau = hd.tau;

        // Hessian: −Kτ·γ on the sphere block, zero elsewhere.
        let mut target = DMatrix::zeros(4, 4);
        for i in 2..4 {
            for j in 2..4 {
                target[(i, j)] = -k * tau * g[(i, j)];
            }
        }
        let frob = |m: &DMatrix<f64>| m.iter().map(|v| v * v).sum::<f64>().sqrt();
        worst_hess = worst_hess.max(frob(&(&hd.hessian - &target)) / (1.0 + frob(&target)));

        worst_lap =
            worst_lap.max((hd.laplacian + 2.0 * k * tau).abs() / (1.0 + (2.0 * k * tau).abs()));

        // 2(m−1)∇dτ + τ·Ric = (3−2m)Kτ·γ at m = 2.
        let b = &hd.hessian * 2.0 + &bundle.ricci * tau;
        let b_target = &g * (-k * tau);
        worst_b = worst_b.max(frob(&(&b - &b_target)) / (1.0 + frob(&b_target)));

        let q_target = lin * lin - k * tau * tau;
        worst_q = worst_q.max((hd.grad_sq - q_target).abs() / (1.0 + lin * lin));
    }
    let mut report = VerificationReport::new();
    report.push_numeric_detail(
        "product",
        "(25-hess)",
        worst_hess,
        PRODUCT_HESSIAN_TOL,
        Some("Hessian of tau vs -K tau times the sphere-block metric".into()),
    );
    report.push_numeric_detail(
        "product",
        "(25-lap)",
        worst_lap,
        PRODUCT_CONSTANT_TOL,
        Some("Laplacian identity Delta tau + 2K tau = 0".into()),
    );
    report.push_numeric_detail(
        "product",
        "(25-b)",
        worst_b,
        PRODUCT_IDENTITY_TOL,
        Some("2(m-1) Hess tau + tau Ric vs (3-2m) K tau g".into()),
    );
    report.push_numeric_detail(
        "product",
        "(25-q)",
        worst_q,
        PRODUCT_CONSTANT_TOL,
        Some("|grad tau|^2 + K tau^2 vs lin^2".into()),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample_points(seed: u64, count: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| (0..4).map(|_| rng.gen::<f64>() * 0.6 - 0.3).collect())
            .collect()
    }

    #[test]
    fn identities_hold_at_unit_constants() {
        let chart = product_example_chart(2, 1.0, 1.0).unwrap();
        let report = verify_product_identities(&chart, 1.0, 1.0, &sample_points(31, 10)).unwrap();
        assert!(report.all_pass(), "{:?}", report.failures());
    }

    #[test]
    fn identities_hold_at_generic_constants() {
        let chart = product_example_chart(2, 2.0, 1.5).unwrap();
        let report = verify_product_identities(&chart, 2.0, 1.5, &sample_points(37, 6)).unwrap();
        assert!(report.all_pass(), "{:?}", report.failures());
    }

    #[test]
    fn potential_matches_the_embedding_at_the_origin() {
        // At y = 0 the embedding sits at the south pole: τ = −lin/√K.
        let chart = product_example_chart(2, 4.0, 3.0).unwrap();
        let tau = chart.tau(&[0.1, -0.2, 0.0, 0.0]);
        assert!((tau - (-1.5)).abs() < 1e-14);
    }

    #[test]
    fn only_the_surface_times_sphere_shape_exists() {
        assert!(matches!(
            product_example_chart(3, 1.0, 1.0),
            Err(BundleError::InvalidDimension(3))
        ));
    }

    #[test]
    fn domain_guards_the_conformal_pole() {
        let chart = product_example_chart(2, 1.0, 1.0).unwrap();
        assert!(chart.in_domain(&[0.3, 0.3, 0.9, 0.9]));
        assert!(!chart.in_domain(&[0.98, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn product_chart_is_kaehler() {
        let chart = product_example_chart(2, 1.0, 1.0).unwrap();
        let report =
            crate::geometry::check_kahler(&chart, &[0.1, -0.2, 0.25, 0.15], crate::tol::DEFAULT_FD_STEP)
                .unwrap();
        assert!(report.all_pass(), "{:?}", report.failures());
    }
}
