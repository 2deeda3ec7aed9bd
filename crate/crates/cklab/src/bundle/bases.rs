//! Kähler–Einstein base charts and line-bundle connection data.
//!
//! Two base families are provided, both with closed-form Kähler
//! potentials φ_K so that the connection form Γ = εa·∂φ_K and the weight
//! ⟨w,w⟩ = exp(εa·φ_K) come out in closed form as well:
//!
//! - **constant-curvature surfaces** (complex dimension 1): for κ ≠ 0 the
//!   metric 4|dy|²/(1+κ|y|²)² with φ_K = (4/κ)·log(1+κ|y|²), defined where
//!   1+κ|y|² > 0; for κ = 0 the flat metric |dy|² with φ_K = |y|², the
//!   normalization in which Γ = εa·ȳdy and ⟨w,w⟩ = e^{εa|y|²};
//! - **Fubini–Study space** (complex dimension q ≥ 2, κ > 0): potential
//!   φ_K = s·log(1+|y|²) with s = 2(q+1)/κ, whose Hermitian matrix is
//!   H_ab = s[δ_ab/(1+ρ) − ȳ_a y_b/(1+ρ)²], ρ = |y|².
//!
//! Real coordinates interleave: y_a = x_{2a} + i·x_{2a+1}, and the real
//! metric of a Hermitian matrix H has 2×2 blocks
//! [[Re H_ab, Im H_ab], [−Im H_ab, Re H_ab]], the convention in which the
//! flat potential |y|² yields the identity metric.
//!
//! # Invariants
//!
//! - Ric_h = κh at every sampled point (finite-difference check);
//! - i·dΓ = −2εa·ω_h and d log⟨w,w⟩ = 2 Re Γ, the two compatibility
//!   conditions tying the connection and weight to the base Kähler form.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::sync::Arc;

use super::{ArcFormFn, ArcGradFn, ArcMatrixFn, ArcPointFn, ArcProbeFn, BundleError};
use crate::geometry::{
    riemann, standard_complex_structure, ChartMetric, Differ, GeometryError,
};
use crate::report::VerificationReport;
use crate::septuple::Eps;
use crate::tol::CONNECTION_INVARIANT_TOL;

/// A Kähler–Einstein base chart with closed-form Kähler potential.
///
/// # Invariants
///
/// - `metric_at` is Hermitian with respect to `complex_structure_at`;
/// - Ric − κ·h vanishes at every domain point (verified numerically by
///   [`verify_base_einstein`]);
/// - all evaluators are pure.
pub struct BaseGeometry {
    /// Complex dimension q = m − 1 of the base.
    pub complex_dim: usize,
    /// Einstein constant: Ric_h = κ·h.
    pub kappa: f64,
    pub metric_at: ArcMatrixFn,
    pub complex_structure_at: ArcMatrixFn,
    /// Kähler form ω_h = h(J·,·) as a matrix evaluator.
    pub kahler_form_at: ArcMatrixFn,
    /// Closed-form Kähler potential φ_K.
    pub kahler_potential_at: ArcPointFn,
    /// Closed-form real gradient of φ_K (components of dφ_K).
    pub kahler_potential_gradient_at: ArcGradFn,
    pub domain_probe: ArcProbeFn,
}

impl BaseGeometry {
    /// Real dimension 2q.
    pub fn real_dim(&self) -> usize {
        2 * self.complex_dim
    }

    pub fn metric(&self, y: &[f64]) -> DMatrix<f64> {
        (self.metric_at)(y)
    }

    pub fn j(&self, y: &[f64]) -> DMatrix<f64> {
        (self.complex_structure_at)(y)
    }

    pub fn kahler_form(&self, y: &[f64]) -> DMatrix<f64> {
        (self.kahler_form_at)(y)
    }

    pub fn in_domain(&self, y: &[f64]) -> bool {
        y.len() == self.real_dim() && y.iter().all(|x| x.is_finite()) && (self.domain_probe)(y)
    }

    /// Repackages the base as a [`ChartMetric`] (with φ_K as the chart
    /// potential) so the numerical geometry toolbox applies to it.
    pub fn to_chart_metric(&self) -> ChartMetric {
        let metric = Arc::clone(&self.metric_at);
        let j = Arc::clone(&self.complex_structure_at);
        let pot = Arc::clone(&self.kahler_potential_at);
        let probe = Arc::clone(&self.domain_probe);
        ChartMetric {
            dim: self.real_dim(),
            metric_at: Box::new(move |p| metric(p)),
            complex_structure_at: Box::new(move |p| j(p)),
            potential_at: Box::new(move |p| pot(p)),
            domain_probe: Box::new(move |p| probe(p)),
        }
    }
}

/// Line-bundle connection form and Hermitian weight of the trivializing
/// section, in the ∂-of-potential gauge.
///
/// # Invariants
///
/// - Γ is of type (1,0): Γ(Jw) = i·Γ(w);
/// - i·dΓ + 2εa·ω_h = 0;
/// - d log weight = 2 Re Γ.
pub struct ConnectionData {
    /// Γ(e_k) for the real coordinate vectors e_k of the base chart.
    pub gamma_form_at: ArcFormFn,
    /// ⟨w,w⟩ = exp(εa·φ_K).
    pub weight_at: ArcPointFn,
    pub eps: Eps,
    pub a: f64,
}

impl ConnectionData {
    pub fn gamma(&self, y: &[f64]) -> Vec<Complex64> {
        (self.gamma_form_at)(y)
    }

    pub fn weight(&self, y: &[f64]) -> f64 {
        (self.weight_at)(y)
    }
}

/// Builds the Kähler-form evaluator ω_h = Jᵀh from the metric and complex
/// structure evaluators, so the three stay consistent by construction.
fn kahler_form_from(metric: &ArcMatrixFn, j: &ArcMatrixFn) -> ArcMatrixFn {
    let metric = Arc::clone(metric);
    let j = Arc::clone(j);
    Arc::new(move |y: &[f64]| j(y).transpose() * metric(y))
}

/// Constant-curvature surface chart: Gauss curvature (= Einstein
/// constant) κ of either sign, on the domain {1 + κ|y|² > 0}.
pub fn base_constant_curvature(kappa: f64) -> BaseGeometry {
    let rho = |y: &[f64]| y[0] * y[0] + y[1] * y[1];
    let metric: ArcMatrixFn = if kappa == 0.0 {
        Arc::new(|_y: &[f64]| DMatrix::identity(2, 2))
    } else {
        Arc::new(move |y: &[f64]| {
            let d = 1.0 + kappa * (y[0] * y[0] + y[1] * y[1]);
            DMatrix::identity(2, 2) * (4.0 / (d * d))
        })
    };
    let j: ArcMatrixFn = Arc::new(|_y: &[f64]| standard_complex_structure(2));
    let kahler_form_at = kahler_form_from(&metric, &j);
    let potential: ArcPointFn = if kappa == 0.0 {
        Arc::new(rho)
    } else {
        Arc::new(move |y: &[f64]| (4.0 / kappa) * (1.0 + kappa * rho(y)).ln())
    };
    let gradient: ArcGradFn = if kappa == 0.0 {
        Arc::new(|y: &[f64]| vec![2.0 * y[0], 2.0 * y[1]])
    } else {
        Arc::new(move |y: &[f64]| {
            let d = 1.0 + kappa * rho(y);
            vec![8.0 * y[0] / d, 8.0 * y[1] / d]
        })
    };
    BaseGeometry {
        complex_dim: 1,
        kappa,
        metric_at: metric,
        complex_structure_at: j,
        kahler_form_at,
        kahler_potential_at: potential,
        kahler_potential_gradient_at: gradient,
        domain_probe: Arc::new(move |y: &[f64]| 1.0 + kappa * rho(y) > 0.0),
    }
}

/// Scaled Fubini–Study chart of complex dimension q ≥ 2 with Ric = κh,
/// κ > 0. The scale is s = 2(q+1)/κ on the potential log(1+|y|²).
///
/// # Errors
///
/// [`BundleError::NonpositiveKappa`] when κ ≤ 0.
pub fn base_fubini_study(kappa: f64, q: usize) -> Result<BaseGeometry, BundleError> {
    if kappa <= 0.0 {
        return Err(BundleError::NonpositiveKappa(kappa));
    }
    assert!(q >= 2, "complex dimension 1 is served by the surface charts");
    let s = 2.0 * (q as f64 + 1.0) / kappa;
    let metric: ArcMatrixFn = Arc::new(move |y: &[f64]| {
        let n = 2 * q;
        let rho: f64 = y.iter().map(|x| x * x).sum();
        let d = 1.0 + rho;
        let mut g = DMatrix::zeros(n, n);
        for a in 0..q {
            let ya = Complex64::new(y[2 * a], y[2 * a + 1]);
            for b in 0..q {
                let yb = Complex64::new(y[2 * b], y[2 * b + 1]);
                let delta = if a == b { 1.0 } else { 0.0 };
                let hab = s * (delta / d - (ya.conj() * yb) / (d * d));
                g[(2 * a, 2 * b)] = hab.re;
                g[(2 * a, 2 * b + 1)] = hab.im;
                g[(2 * a + 1, 2 * b)] = -hab.im;
                g[(2 * a + 1, 2 * b + 1)] = hab.re;
            }
        }
        g
    });
    let j: ArcMatrixFn = Arc::new(move |_y: &[f64]| standard_complex_structure(2 * q));
    let kahler_form_at = kahler_form_from(&metric, &j);
    let potential: ArcPointFn = Arc::new(move |y: &[f64]| {
        let rho: f64 = y.iter().map(|x| x * x).sum();
        s * (1.0 + rho).ln()
    });
    let gradient: ArcGradFn = Arc::new(move |y: &[f64]| {
        let rho: f64 = y.iter().map(|x| x * x).sum();
        y.iter().map(|x| 2.0 * s * x / (1.0 + rho)).collect()
    });
    Ok(BaseGeometry {
        complex_dim: q,
        kappa,
        metric_at: metric,
        complex_structure_at: j,
        kahler_form_at,
        kahler_potential_at: potential,
        kahler_potential_gradient_at: gradient,
        domain_probe: Arc::new(|_y: &[f64]| true),
    })
}

/// Connection form and weight in the ∂-of-potential gauge:
/// Γ = εa·∂φ_K, i.e. Γ(w) = (εa/2)[dφ_K(w) − i·dφ_K(Jw)], and
/// weight = exp(εa·φ_K). For ε = 0 this degenerates to the flat
/// connection Γ ≡ 0, weight ≡ 1.
pub fn connection_form(base: &BaseGeometry, eps: Eps, a: f64) -> ConnectionData {
    assert!(a != 0.0, "the coupling constant a must be nonzero");
    let ea = eps.as_f64() * a;
    let gamma: ArcFormFn = if eps == Eps::Zero {
        let n = base.real_dim();
        Arc::new(move |_y: &[f64]| vec![Complex64::new(0.0, 0.0); n])
    } else {
        let grad = Arc::clone(&base.kahler_potential_gradient_at);
        let j = Arc::clone(&base.complex_structure_at);
        Arc::new(move |y: &[f64]| {
            let g = grad(y);
            let jm = j(y);
            let n = g.len();
            // (dφ∘J)_k = Σ_i (dφ)_i J^i_k.
            (0..n)
                .map(|k| {
                    let djk: f64 = (0..n).map(|i| g[i] * jm[(i, k)]).sum();
                    Complex64::new(0.5 * ea * g[k], -0.5 * ea * djk)
                })
                .collect()
        })
    };
    let weight: ArcPointFn = if eps == Eps::Zero {
        Arc::new(|_y: &[f64]| 1.0)
    } else {
        let pot = Arc::clone(&base.kahler_potential_at);
        Arc::new(move |y: &[f64]| (ea * pot(y)).exp())
    };
    ConnectionData {
        gamma_form_at: gamma,
        weight_at: weight,
        eps,
        a,
    }
}

/// Verifies the two connection invariants at the given base points by
/// finite differences, reporting the worst residual of each:
///
/// - `(R3.1)`: i·dΓ + 2εa·ω_h = 0 (prescribed curvature);
/// - `(R24.3)`: d log weight − 2 Re Γ = 0 (weight compatibility).
pub fn check_connection_invariants(
    base: &BaseGeometry,
    conn: &ConnectionData,
    points: &[Vec<f64>],
) -> VerificationReport {
    let differ = Differ::default_engine();
    let n = base.real_dim();
    let ea = conn.eps.as_f64() * conn.a;
    let mut worst_curv: f64 = 0.0;
    let mut worst_weight: f64 = 0.0;
    for y in points {
        let omega = base.kahler_form(y);
        let scale_curv = 1.0 + omega.iter().fold(0.0f64, |m, x| m.max((2.0 * ea * x).abs()));
        // dΓ(e_i, e_j) = ∂_i Γ_j − ∂_j Γ_i, assembled from separate real
        // and imaginary finite differences of the form components.
        let mut dgamma = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for comp in 0..n {
                let re = differ.partial(|p: &[f64]| conn.gamma(p)[comp].re, y, i);
                let im = differ.partial(|p: &[f64]| conn.gamma(p)[comp].im, y, i);
                dgamma[i][comp] = Complex64::new(re, im);
            }
        }
        for i in 0..n {
            for jdx in 0..n {
                let d = dgamma[i][jdx] - dgamma[jdx][i];
                let res = (Complex64::i() * d
                    + Complex64::new(2.0 * ea * omega[(i, jdx)], 0.0))
                .norm();
                worst_curv = worst_curv.max(res / scale_curv);
            }
        }
        let gamma = conn.gamma(y);
        let scale_w = 1.0 + gamma.iter().fold(0.0f64, |m, g| m.max((2.0 * g.re).abs()));
        for i in 0..n {
            let dlw = differ.partial(|p: &[f64]| conn.weight(p).ln(), y, i);
            worst_weight = worst_weight.max((dlw - 2.0 * gamma[i].re).abs() / scale_w);
        }
    }
    let mut report = VerificationReport::new();
    report.push_numeric_detail(
        "connection",
        "(R3.1)",
        worst_curv,
        CONNECTION_INVARIANT_TOL,
        Some(format!("i dGamma + 2 eps a omega_h over {} points", points.len())),
    );
    report.push_numeric_detail(
        "connection",
        "(R24.3)",
        worst_weight,
        CONNECTION_INVARIANT_TOL,
        Some(format!("d log weight - 2 Re Gamma over {} points", points.len())),
    );
    report
}

/// Verifies Ric_h = κ·h at the given points with the finite-difference
/// curvature engine, one aggregated entry with the worst relative
/// residual.
///
/// # Errors
///
/// Propagates [`GeometryError`] when a stencil leaves the domain or the
/// metric degenerates at a sample point.
pub fn verify_base_einstein(
    base: &BaseGeometry,
    points: &[Vec<f64>],
    tolerance: f64,
) -> Result<VerificationReport, GeometryError> {
    let chart = base.to_chart_metric();
    let mut worst: f64 = 0.0;
    for y in points {
        let bundle = riemann(&chart, y, crate::tol::DEFAULT_FD_STEP)?;
        let h = chart.metric(y);
        let (e, _e_inv) = crate::geometry::onb_frame(&h)?;
        let diff = &bundle.ricci - &h * base.kappa;
        let num = crate::geometry::frame_norm_cov2(&diff, &e);
        let den = 1.0 + crate::geometry::frame_norm_cov2(&(h.clone() * base.kappa), &e);
        worst = worst.max(num / den);
    }
    let mut report = VerificationReport::new();
    report.push_numeric_detail(
        "base",
        "(8-einstein)",
        worst,
        tolerance,
        Some(format!("Ric - kappa h over {} points, kappa = {}", points.len(), base.kappa)),
    );
    Ok(report)
}
