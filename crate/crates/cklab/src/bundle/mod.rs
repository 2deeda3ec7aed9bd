//! Numerical realization of the solution families as metrics on line-bundle
//! charts.
//!
//! Every closed-form septuple corresponds to an actual Kähler metric on an
//! open subset of a holomorphic line bundle L over a Kähler–Einstein base
//! (N, h) with Ric_h = κh. In a holomorphic trivialization with base
//! coordinates y and fiber coordinate z, the metric is assembled from four
//! ingredients:
//!
//! 1. a **base chart** ([`BaseGeometry`]) with closed-form metric, complex
//!    structure and Kähler potential φ_K;
//! 2. a **connection form** Γ = εa·∂φ_K on L ([`ConnectionData`]), whose
//!    curvature is i·dΓ = −2εa·ω_h, together with the Hermitian weight
//!    ⟨w,w⟩ = exp(εa·φ_K) of the trivializing section, so that
//!    d log⟨w,w⟩ = 2 Re Γ;
//! 3. the **τ ↔ r transform** ([`TauTransform`]): the fiber norm
//!    r = |z|·⟨w,w⟩^{1/2} determines τ through Q·d(log r)/dτ = a, inverted
//!    numerically to high accuracy;
//! 4. the **assembly** ([`assemble_chart`]): with θ = Q/(ar)² and f = 1
//!    (ε = 0) or f = 2ε(τ−c), the metric is f·π*h on the horizontal
//!    distribution (the Chern-connection horizontal lifts w ↦ (w, −Γ(w)z)),
//!    θ·Re⟨·,·⟩ on the vertical distribution, and zero between them.
//!
//! The distinguished vector fields are v = (0, az) and u = Jv = (0, iaz);
//! the construction makes v = ∇τ and g(v,v) = g(u,u) = Q(τ) hold
//! identically, which the checks here verify numerically against the
//! closed forms.
//!
//! # Invariants
//!
//! - Connection curvature: i·dΓ + 2εa·ω_h = 0 (checked by finite
//!   differences at sampled base points).
//! - Weight compatibility: d log⟨w,w⟩ − 2 Re Γ = 0.
//! - Base Einstein property: Ric_h = κh with κ tied to the family by the
//!   case table — κ = (3−2m)K in case I, εK in case II, εmA/c in case III.
//! - Interval consistency: Q > 0 and (unless ε = 0) ε(τ−c) > 0 on the
//!   working τ-interval.
//!
//! All evaluators are pure and shared through [`std::sync::Arc`], so
//! assembled charts can be probed from many threads at once.

mod assemble;
mod bases;
mod bb;
mod product;
mod transform;

pub use assemble::{
    assemble_chart, build_construction, check_structure_equations, sample_domain_point,
    verify_fiber_geometry, ConstructionData,
};
pub use bases::{
    base_constant_curvature, base_fubini_study, check_connection_invariants, connection_form,
    verify_base_einstein, BaseGeometry, ConnectionData,
};
pub use bb::{bb_construction, bb_dual_route, BbProfile};
pub use product::{product_example_chart, verify_product_identities};
pub use transform::{tau_r_transform, TauTransform};

use thiserror::Error;

use crate::exact::ExactError;
use crate::geometry::GeometryError;
use crate::septuple::SeptupleError;
use crate::specfun::SpecFunError;

/// Errors from base construction, the τ↔r transform, and chart assembly.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BundleError {
    /// The Fubini–Study base is defined for positive Einstein constants.
    #[error("the Fubini-Study base needs kappa > 0, got {0}")]
    NonpositiveKappa(f64),
    /// Q must stay positive on the working interval for r and the fiber
    /// metric to make sense.
    #[error("Q({tau}) = {q:.6e} is not positive on the working interval")]
    NonpositiveQ { tau: f64, q: f64 },
    /// The product example is implemented for complex dimension 2.
    #[error("the product example needs complex dimension m = 2, got {0}")]
    InvalidDimension(u32),
    /// No parameter window satisfies the positivity requirements.
    #[error("parameter domain violation: {0}")]
    ParameterDomain(String),
    /// The working τ-interval violates a structural requirement.
    #[error("invalid working interval: {0}")]
    IntervalViolation(String),
    /// The fiber coupling constant a must be nonzero (it scales ∇τ).
    #[error("the coupling constant a must be nonzero")]
    ZeroCoupling,
    /// Closed-form family construction failed.
    #[error(transparent)]
    Septuple(#[from] SeptupleError),
    /// Special-function catalog failure.
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    /// Exact-arithmetic failure.
    #[error(transparent)]
    Exact(#[from] ExactError),
    /// Numerical geometry failure while validating a chart.
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::sync::Arc;

/// Shareable pointwise matrix evaluator.
pub type ArcMatrixFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;
/// Shareable pointwise scalar evaluator.
pub type ArcPointFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
/// Shareable pointwise gradient evaluator (components of a real 1-form).
pub type ArcGradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
/// Shareable domain probe.
pub type ArcProbeFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;
/// Shareable complex-valued 1-form evaluator: component k is the value on
/// the k-th coordinate vector.
pub type ArcFormFn = Arc<dyn Fn(&[f64]) -> Vec<Complex64> + Send + Sync>;
