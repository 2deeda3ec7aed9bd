//! Chart-based numerical tensor calculus.
//!
//! Everything in this module works on a [`ChartMetric`]: a coordinate
//! chart of real dimension n = 2m described by pure evaluators for the
//! metric g, the complex structure J, the distinguished potential τ, and
//! a domain membership probe. Curvature and covariant derivatives are
//! obtained by central finite differences with one level of Richardson
//! extrapolation (see [`fd::Differ`]), which reaches absolute accuracy
//! around 1e−8 on smooth data — sufficient for every certification
//! tolerance used here, with slack.
//!
//! # Conventions
//!
//! - The curvature operator is stored with the sign that makes the unit
//!   round 2-sphere come out with scalar curvature +2; the fully covariant
//!   tensor is `R_{ijkl} = −g_{lp}·R̂^p_{kij}` where
//!   `R̂^l_{kij} = ∂ᵢΓ^l_{jk} − ∂ⱼΓ^l_{ik} + Γ^l_{ip}Γ^p_{jk} − Γ^l_{jp}Γ^p_{ik}`,
//!   and `Ric_{jk} = R̂^i_{kij}`, so `Ric_{jk} = g^{il} R_{jikl}`.
//! - Tensor norms are Frobenius norms in the g-orthonormal frame obtained
//!   from the Cholesky factorization g = L·Lᵀ: frame vectors are the
//!   columns of E = L⁻ᵀ, covariant 2-tensors transform as Eᵀ·T·E, and
//!   endomorphisms as Lᵀ·A·L⁻ᵀ.
//! - Residuals are reported relative whenever the reference quantity is
//!   meaningfully nonzero.

pub mod checks;
pub mod curvature;
pub mod fd;

pub use checks::{
    check_kahler, check_killing, check_skrp_eigenstructure, conformal_einstein_residual,
    fd_convergence_probe,
};
pub use curvature::{
    christoffels, contracted_bianchi, hessian_potential, riemann, riemann_invariants,
    riemann_with, trace_identity, CurvatureBundle, HessianData, Tensor4,
};
pub use fd::Differ;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::tol::METRIC_CONDITION_LIMIT;

/// Pure pointwise scalar evaluator on a chart.
pub type PointFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
/// Pure pointwise matrix evaluator on a chart.
pub type MatrixFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;
/// Pure domain membership probe.
pub type ProbeFn = dyn Fn(&[f64]) -> bool + Send + Sync;

/// A coordinate chart carrying a Kähler structure and a distinguished
/// potential function τ.
///
/// # Invariants
///
/// - `metric_at` returns a symmetric positive-definite matrix at every
///   domain point;
/// - `complex_structure_at` returns J with J² = −Identity and
///   g(J·, J·) = g(·, ·) at every domain point (verified, not assumed, by
///   [`check_kahler`]);
/// - all evaluators are pure, so charts can be shared across threads.
pub struct ChartMetric {
    /// Real dimension n = 2m (always even).
    pub dim: usize,
    pub metric_at: Box<MatrixFn>,
    pub complex_structure_at: Box<MatrixFn>,
    /// The potential τ whose gradient spans the vertical distribution.
    pub potential_at: Box<PointFn>,
    pub domain_probe: Box<ProbeFn>,
}

impl ChartMetric {
    /// Metric matrix at a point (no domain check).
    pub fn metric(&self, p: &[f64]) -> DMatrix<f64> {
        (self.metric_at)(p)
    }

    /// Complex structure at a point (no domain check).
    pub fn j(&self, p: &[f64]) -> DMatrix<f64> {
        (self.complex_structure_at)(p)
    }

    /// Potential value at a point (no domain check).
    pub fn tau(&self, p: &[f64]) -> f64 {
        (self.potential_at)(p)
    }

    pub fn in_domain(&self, p: &[f64]) -> bool {
        p.len() == self.dim && p.iter().all(|x| x.is_finite()) && (self.domain_probe)(p)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    /// A stencil or sample point left the chart domain.
    #[error("point {point:?} (offset from base point by {offset:?}) is outside the chart domain")]
    DomainViolation {
        point: Vec<f64>,
        offset: Vec<f64>,
    },
    /// The metric matrix condition number exceeds the safe ceiling for
    /// finite-difference noise amplification.
    #[error("metric condition number {cond:.3e} exceeds the limit {limit:.1e}")]
    IllConditionedMetric { cond: f64, limit: f64 },
    /// The metric matrix is not positive definite at the point.
    #[error("metric is not positive definite at the sample point")]
    NotPositiveDefinite,
    /// dτ vanishes (or nearly so), so the vertical plane is undefined.
    #[error("potential gradient norm squared {q:.3e} is below the floor; vertical plane undefined")]
    ZeroGradient { q: f64 },
    /// τ vanishes (or nearly so), so g/τ² is undefined.
    #[error("potential value {tau:.3e} is below the floor; conformal rescaling undefined")]
    ZeroPotential { tau: f64 },
}

/// Verifies the stencil box around `p` stays inside the chart domain:
/// the point itself, all axis neighbours at ±h and ±h/2, and all diagonal
/// neighbours at ±h used by mixed second-difference stencils.
pub(crate) fn ensure_stencil(
    chart: &ChartMetric,
    p: &[f64],
    differ: &Differ,
) -> Result<(), GeometryError> {
    let n = chart.dim;
    let probe = |q: Vec<f64>| -> Result<(), GeometryError> {
        if chart.in_domain(&q) {
            Ok(())
        } else {
            Err(GeometryError::DomainViolation {
                offset: q.iter().zip(p).map(|(a, b)| a - b).collect(),
                point: q,
            })
        }
    };
    probe(p.to_vec())?;
    for i in 0..n {
        let hi = differ.scaled_step(p[i]);
        for si in [-1.0, -0.5, 0.5, 1.0] {
            let mut q = p.to_vec();
            q[i] += si * hi;
            probe(q)?;
        }
        for j in 0..i {
            let hj = differ.scaled_step(p[j]);
            for si in [-1.0, -0.5, 0.5, 1.0] {
                for sj in [-1.0, -0.5, 0.5, 1.0] {
                    let mut q = p.to_vec();
                    q[i] += si * hi;
                    q[j] += sj * hj;
                    probe(q)?;
                }
            }
        }
    }
    Ok(())
}

/// Cholesky-based orthonormal frame at a point: returns (E, E⁻¹) with
/// g = L·Lᵀ, E = L⁻ᵀ (frame vectors as columns, Eᵀ·g·E = Identity) and
/// E⁻¹ = Lᵀ.
///
/// # Errors
///
/// [`GeometryError::IllConditionedMetric`] when the condition number
/// exceeds the configured ceiling; [`GeometryError::NotPositiveDefinite`]
/// when the Cholesky factorization fails.
pub(crate) fn onb_frame(g: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>), GeometryError> {
    let svd = g.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if cond > METRIC_CONDITION_LIMIT {
        return Err(GeometryError::IllConditionedMetric {
            cond,
            limit: METRIC_CONDITION_LIMIT,
        });
    }
    let chol = nalgebra::Cholesky::new(g.clone()).ok_or(GeometryError::NotPositiveDefinite)?;
    let l = chol.l();
    let n = g.nrows();
    let e_inv = l.transpose();
    let e = e_inv
        .clone()
        .try_inverse()
        .expect("triangular factor of a well-conditioned matrix is invertible");
    debug_assert_eq!(e.nrows(), n);
    Ok((e, e_inv))
}

/// Frobenius norm of a matrix.
pub(crate) fn frob(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Frobenius norm of a covariant 2-tensor in the g-orthonormal frame.
pub(crate) fn frame_norm_cov2(t: &DMatrix<f64>, e: &DMatrix<f64>) -> f64 {
    frob(&(e.transpose() * t * e))
}

/// Frobenius norm of an endomorphism (1,1-tensor) in the g-orthonormal
/// frame.
pub(crate) fn frame_norm_endo(a: &DMatrix<f64>, e: &DMatrix<f64>, e_inv: &DMatrix<f64>) -> f64 {
    frob(&(e_inv * a * e))
}

/// Block-diagonal standard complex structure: J e_{2k} = e_{2k+1},
/// J e_{2k+1} = −e_{2k}.
pub fn standard_complex_structure(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(n, n);
    for k in 0..n / 2 {
        j[(2 * k + 1, 2 * k)] = 1.0;
        j[(2 * k, 2 * k + 1)] = -1.0;
    }
    j
}

#[cfg(test)]
pub(crate) mod testcharts {
    //! Closed-form chart fixtures with independently known curvature.

    use super::{standard_complex_structure, ChartMetric};
    use nalgebra::DMatrix;

    /// Flat chart (g = Identity, standard J) with a caller-chosen
    /// potential; domain is all of ℝⁿ.
    pub fn flat_chart_with_tau(
        n: usize,
        tau: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> ChartMetric {
        ChartMetric {
            dim: n,
            metric_at: Box::new(move |_p| DMatrix::identity(n, n)),
            complex_structure_at: Box::new(move |_p| standard_complex_structure(n)),
            potential_at: Box::new(tau),
            domain_probe: Box::new(|_p| true),
        }
    }

    /// Flat chart with the radial potential τ = ½|x|².
    pub fn euclidean_chart(n: usize) -> ChartMetric {
        flat_chart_with_tau(n, |p| 0.5 * p.iter().map(|x| x * x).sum::<f64>())
    }

    /// Constant-curvature surface chart g = 4δ/(1+κρ)², ρ = |y|²: the
    /// unit sphere for κ = 1 (scal +2), the hyperbolic disc for κ = −1
    /// (scal −2). The potential 1 + y₁/2 is smooth and nonvanishing near
    /// the origin; it exists only to exercise potential-based probes.
    pub fn conformal_disc_chart(kappa: f64) -> ChartMetric {
        let factor = move |p: &[f64]| {
            let rho = p[0] * p[0] + p[1] * p[1];
            4.0 / (1.0 + kappa * rho).powi(2)
        };
        ChartMetric {
            dim: 2,
            metric_at: Box::new(move |p| DMatrix::identity(2, 2) * factor(p)),
            complex_structure_at: Box::new(|_p| standard_complex_structure(2)),
            potential_at: Box::new(|p| 1.0 + 0.5 * p[0]),
            domain_probe: Box::new(move |p| {
                1.0 + kappa * (p[0] * p[0] + p[1] * p[1]) > 0.2
            }),
        }
    }

    /// Product of two unit spheres (4 real dimensions): block-diagonal
    /// metric, no cross-block curvature, scalar curvature 2 + 2.
    pub fn product_spheres_chart() -> ChartMetric {
        let factor = |rho: f64| 4.0 / (1.0 + rho).powi(2);
        ChartMetric {
            dim: 4,
            metric_at: Box::new(move |p| {
                let f1 = factor(p[0] * p[0] + p[1] * p[1]);
                let f2 = factor(p[2] * p[2] + p[3] * p[3]);
                DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&[f1, f1, f2, f2]))
            }),
            complex_structure_at: Box::new(|_p| standard_complex_structure(4)),
            potential_at: Box::new(|_p| 1.0),
            domain_probe: Box::new(|_p| true),
        }
    }

    /// Flat half-space chart with τ = x₁: g/τ² is the hyperbolic
    /// half-space metric, an Einstein metric with s̃ = −n(n−1).
    pub fn halfspace_chart(n: usize) -> ChartMetric {
        let mut chart = flat_chart_with_tau(n, |p| p[0]);
        chart.domain_probe = Box::new(|p| p[0] > 0.05);
        chart
    }

    /// Anisotropically scaled flat metric diag(1, eps): condition number
    /// 1/eps.
    pub fn scaled_metric_chart(eps: f64) -> ChartMetric {
        ChartMetric {
            dim: 2,
            metric_at: Box::new(move |_p| {
                DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&[1.0, eps]))
            }),
            complex_structure_at: Box::new(|_p| standard_complex_structure(2)),
            potential_at: Box::new(|p| p[0]),
            domain_probe: Box::new(|_p| true),
        }
    }

    /// Flat chart restricted to the open disc of radius `r`.
    pub fn small_disc_chart(r: f64) -> ChartMetric {
        let mut chart = flat_chart_with_tau(2, |p| p[0]);
        chart.domain_probe = Box::new(move |p| p[0] * p[0] + p[1] * p[1] < r * r);
        chart
    }
}
