//! Pinned tolerances and numerical floors used across the laboratory.
//!
//! Every threshold lives here with its rationale; suite code never invents
//! ad-hoc magic numbers. Exact rational-arithmetic checks use no tolerance
//! at all — they pass only by normalizing to the zero function — so the
//! constants below govern the floating-point layers only.
//!
//! The FD noise model behind the numbers: central differences with one
//! Richardson level on smooth data reach relative errors around 1e−10..1e−8;
//! first-derivative quantities (Christoffel symbols, Kähler/Killing checks)
//! sit at the low end, twice-differentiated quantities (curvature,
//! structure equations, Einstein residuals) at the high end, and nested
//! FD-of-FD quantities (contracted Bianchi) another two orders above that.

/// Default finite-difference step, scaled by coordinate magnitude.
///
/// h = 1e−4 balances truncation (O(h⁴) after Richardson, ~1e−16) against
/// rounding amplification (O(ε/h²) ≈ 1e−8 for second derivatives).
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Step for checks that take an outer finite difference of a field whose
/// value is itself an inner finite difference (the Killing-operator pair):
/// their rounding floor scales as ε/h³, which at the default step can
/// graze 1e−6. At 1e−3 the floor drops to ~1e−8 while Richardson
/// truncation stays below 1e−9 for the profiles in use.
pub const DOUBLE_FD_STEP: f64 = 1e-3;

/// Kähler-structure residuals (J isometry, ∇J, dω): once-differentiated
/// metric data.
pub const KAHLER_TOL: f64 = 1e-6;

/// Killing-operator and Hessian-Hermitian residuals: same differentiation
/// depth as the Kähler checks.
pub const KILLING_TOL: f64 = 1e-6;

/// Relative agreement of empirical Hessian/Ricci eigenvalues with the
/// closed-form septuple values.
pub const EIGENSTRUCTURE_REL_TOL: f64 = 1e-5;

/// Levi-Civita structure-equation residuals on the bundle frame.
pub const STRUCTURE_EQ_TOL: f64 = 1e-5;

/// Relative trace-free residual of the rescaled Ricci tensor
/// (the Einstein certificate).
pub const EINSTEIN_REL_TOL: f64 = 1e-5;

/// Relative agreement of the rescaled scalar curvature with its exact
/// conserved value 2η.
pub const SCALAR_MATCH_REL_TOL: f64 = 1e-4;

/// Relaxed tolerance for the complex-dimension-3 (Fubini–Study base)
/// configuration: six coordinates double the FD stencil noise and the
/// curvature contractions.
pub const DIM3_RELAXED_TOL: f64 = 1e-4;

/// Window for second-order FD convergence ratios residual(h)/residual(h/2);
/// 4 ± 0.5 certifies the stencils differentiate what they claim to.
pub const FD_RATIO_LOW: f64 = 3.5;
pub const FD_RATIO_HIGH: f64 = 4.5;

/// A deliberately broken input must push the Einstein residual above this:
/// the certifier's resolving power is far finer than the faults it screens.
pub const NEGATIVE_CONTROL_MIN_RESIDUAL: f64 = 1e-2;

/// Riemann-tensor antisymmetry residuals, relative to ‖R‖ — pure stencil
/// symmetry, so near machine precision.
pub const RIEMANN_ANTISYMMETRY_REL_TOL: f64 = 1e-10;

/// Pair-swap and first-Bianchi residuals of the Riemann tensor, relative to
/// ‖R‖ at the default step.
pub const RIEMANN_SYMMETRY_REL_TOL: f64 = 1e-6;

/// Contracted-Bianchi residual bound: ‖2 div Ric − ds‖ ≤ this × (1 + ‖ds‖).
/// Differentiating FD-computed Ricci samples stacks two noise floors.
pub const BIANCHI_CONTRACTED_TOL: f64 = 1e-4;

/// Complex-trace curvature identity |trace_C R(u,v) − iρ(u,v)| at random
/// argument pairs.
pub const TRACE_IDENTITY_TOL: f64 = 1e-5;

/// Outer step for differentiating Ricci samples in the contracted-Bianchi
/// check. Ricci carries ~1e−8 absolute noise, so the outer step must sit
/// near (noise/|∂³Ric|)^(1/3) ≈ 2e−3; the default inner step would
/// amplify noise a hundredfold.
pub const BIANCHI_OUTER_STEP: f64 = 2e-3;

/// Base step for the curvature self-convergence probe (plain stencils
/// against the extrapolated reference). Chosen coarse enough that the
/// O(h²) truncation term dominates both the reference error and the
/// rounding floor, giving a clean halving ratio near 4.
pub const FD_CURVATURE_PROBE_STEP: f64 = 1e-2;

/// Floor on Q = g(∇τ,∇τ) below which the vertical plane span{∇τ, J∇τ}
/// is numerically undefined and eigenstructure checks refuse to run.
pub const GRADIENT_FLOOR: f64 = 1e-9;

/// Floor on |τ| below which the conformal rescaling g/τ² is numerically
/// undefined and the Einstein certificate refuses to run.
pub const POTENTIAL_FLOOR: f64 = 1e-9;

/// Condition-number ceiling above which a metric evaluation is rejected as
/// ill-conditioned rather than silently inverted.
pub const METRIC_CONDITION_LIMIT: f64 = 1e12;

/// ODE cross-check: max relative deviation of the RK4 trajectory from the
/// closed-form family at step 1e−3.
pub const ODE_DEVIATION_TOL: f64 = 1e-7;

/// ODE cross-check: max relative drift of the conserved integrals along the
/// trajectory.
pub const ODE_DRIFT_TOL: f64 = 1e-8;

/// Reference RK4 step for the deviation/drift bounds.
pub const ODE_REFERENCE_STEP: f64 = 1e-3;

/// Window for the RK4 step-halving deviation ratio (2⁴ = 16 for a
/// fourth-order method, with slack for error-constant variation).
pub const ODE_RATIO_LOW: f64 = 12.0;
pub const ODE_RATIO_HIGH: f64 = 20.0;

/// Base step for measuring the RK4 convergence ratio. Larger than the
/// reference step so truncation error stays well above the f64 roundoff
/// accumulated over the trajectory; at 1e−3 the deviation is already at the
/// noise floor and ratios would be meaningless.
pub const ODE_RATIO_MEASURE_STEP: f64 = 2e-2;

/// Default floor for |Q| and |ψ−φ| below which integration aborts with a
/// singularity error instead of dividing by near-zero.
pub const SINGULARITY_FLOOR: f64 = 1e-9;

/// Line-bundle connection invariants (curvature form and weight gauge):
/// closed-form data differentiated once, Richardson-extrapolated.
pub const CONNECTION_INVARIANT_TOL: f64 = 1e-10;

/// τ ↔ log r transform: composite quadrature panel tolerance. Far below the
/// FD noise floor so curvature measurements are never transform-limited.
pub const TRANSFORM_QUAD_TOL: f64 = 1e-13;

/// τ ↔ log r transform: round-trip inversion tolerance.
pub const TRANSFORM_ROUND_TRIP_TOL: f64 = 1e-12;

/// Fiber coordinate must stay outside a disc of this radius around z = 0:
/// the zero section is excluded from the bundle charts.
pub const FIBER_DISC_EXCLUSION: f64 = 1e-3;

/// Margin in t = τ/c kept away from t = 1 on charts whose closed forms have
/// a pole there.
pub const CASE_III_T_MARGIN: f64 = 1e-2;

/// Product-example identities (Hessian, Laplacian, combined tensor):
/// twice-differentiated data.
pub const PRODUCT_IDENTITY_TOL: f64 = 1e-5;

/// Product-example conserved quantity Q + Kτ² across samples: evaluated
/// from first derivatives only, so an order tighter.
pub const PRODUCT_CONSTANT_TOL: f64 = 1e-8;

/// Sphere-block Hessian law and assembled-chart gradient law (first
/// derivatives of closed-form data).
pub const GRADIENT_LAW_TOL: f64 = 1e-6;

/// Fiber-direction metric values g(v,v) = g(u,u) = Q: direct evaluation,
/// no differentiation.
pub const METRIC_VALUE_TOL: f64 = 1e-8;

/// Sphere-block Hessian identity of the product example, ∇dτ = −Kτγ:
/// one noisy second derivative of a closed-form potential, so tighter
/// than the generic second-derivative ceiling but looser than pure
/// first-derivative checks.
pub const PRODUCT_HESSIAN_TOL: f64 = 1e-6;

/// Step used for the product-example identity checks. The Laplacian
/// tolerance there is 1e−8, below the rounding floor ε·|τ|/h² ≈ 1e−8 of
/// the default 1e−4 step; at 1e−3 the floor drops to ~1e−10 while the
/// truncation error of the Richardson stencil stays far smaller on these
/// slowly varying closed forms.
pub const PRODUCT_FD_STEP: f64 = 1e-3;
