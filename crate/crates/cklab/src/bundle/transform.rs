//! The τ ↔ log r transform: log r = ∫ a/Q dτ and its inverse.
//!
//! On a working interval where Q > 0, the fiber norm r and the potential
//! τ determine each other through Q·d(log r)/dτ = a. The forward map is
//! computed by composite 16-point Gauss–Legendre quadrature with panel
//! prefix sums (the integrand a/Q is smooth, so the quadrature error is
//! negligible against the 1e−13 budget); the inverse is a Newton
//! iteration seeded by a monotone bracket over the panel boundaries,
//! using the analytically known derivative d(log r)/dτ = a/Q.
//!
//! Working in log r rather than r keeps the numbers tame: r itself spans
//! many orders of magnitude across an interval.
//!
//! # Invariants
//!
//! - strict monotonicity (increasing for a > 0, decreasing for a < 0);
//! - round-trip error |tau_of_logr(logr_of_tau(τ)) − τ| ≤ 1e−12;
//! - construction fails with [`BundleError::NonpositiveQ`] if Q is not
//!   strictly positive on the interval.

use std::sync::Arc;

use super::BundleError;

/// 16-point Gauss–Legendre rule on [−1, 1]: positive abscissae and the
/// matching weights (the rule is symmetric).
const GL16_X: [f64; 8] = [
    0.095_012_509_837_637_440_185,
    0.281_603_550_779_258_913_230,
    0.458_016_777_657_227_386_342,
    0.617_876_244_402_643_748_447,
    0.755_404_408_355_003_033_895,
    0.865_631_202_387_831_743_880,
    0.944_575_023_073_232_576_078,
    0.989_400_934_991_649_932_596,
];
const GL16_W: [f64; 8] = [
    0.189_450_610_455_068_496_285,
    0.182_603_415_044_923_588_867,
    0.169_156_519_395_002_538_189,
    0.149_595_988_816_576_732_081,
    0.124_628_971_255_533_872_052,
    0.095_158_511_682_492_784_810,
    0.062_253_523_938_647_892_863,
    0.027_152_459_411_754_094_852,
];

/// Integrates a smooth function over [lo, hi] with a single 16-point
/// Gauss–Legendre panel.
fn gl16<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> f64 {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut acc = 0.0;
    for k in 0..8 {
        acc += GL16_W[k] * (f(mid - half * GL16_X[k]) + f(mid + half * GL16_X[k]));
    }
    acc * half
}

/// Shareable evaluator for Q(τ).
pub type QFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Mutually inverse monotone maps between τ and log r on a fixed
/// interval, with cached dense output at panel boundaries.
///
/// Debug output shows the interval and panel count, not the cached
/// integrand (which is an opaque closure).
pub struct TauTransform {
    a: f64,
    tau_lo: f64,
    tau_hi: f64,
    /// Uniform τ panel boundaries, `n_panels + 1` entries.
    tau_nodes: Vec<f64>,
    /// log r at each panel boundary (prefix sums of the panel integrals,
    /// shifted so that log r = 0 at the interval midpoint).
    logr_nodes: Vec<f64>,
    q: QFn,
}

impl std::fmt::Debug for TauTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TauTransform")
            .field("a", &self.a)
            .field("tau_interval", &(self.tau_lo, self.tau_hi))
            .field("panels", &(self.tau_nodes.len().saturating_sub(1)))
            .finish()
    }
}

impl TauTransform {
    /// The working τ-interval (lo < hi).
    pub fn tau_interval(&self) -> (f64, f64) {
        (self.tau_lo, self.tau_hi)
    }

    /// The image of the interval, ordered as (min log r, max log r).
    pub fn logr_range(&self) -> (f64, f64) {
        let first = *self.logr_nodes.first().expect("nonempty node table");
        let last = *self.logr_nodes.last().expect("nonempty node table");
        (first.min(last), first.max(last))
    }

    /// Forward map: log r at τ (clamped to the working interval only by
    /// the caller; the map extrapolates smoothly just outside a panel).
    pub fn logr_of_tau(&self, tau: f64) -> f64 {
        let n_panels = self.tau_nodes.len() - 1;
        let width = (self.tau_hi - self.tau_lo) / n_panels as f64;
        let idx = (((tau - self.tau_lo) / width).floor() as isize)
            .clamp(0, n_panels as isize - 1) as usize;
        let f = |t: f64| self.a / (self.q)(t);
        self.logr_nodes[idx] + gl16(&f, self.tau_nodes[idx], tau)
    }

    /// Inverse map: τ with logr_of_tau(τ) = lr, for lr inside
    /// [`Self::logr_range`]. Newton iteration with the analytic
    /// derivative a/Q, seeded and bracketed by the panel table.
    pub fn tau_of_logr(&self, lr: f64) -> f64 {
        // Monotone bracket from the node table (nodes are monotone in τ;
        // logr values are monotone with the sign of a).
        let increasing = self.a > 0.0;
        let n = self.logr_nodes.len();
        let key = |v: f64| if increasing { v } else { -v };
        let target = key(lr);
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if key(self.logr_nodes[mid]) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut tau = 0.5 * (self.tau_nodes[lo] + self.tau_nodes[hi]);
        let scale = 1.0f64.max(self.tau_hi.abs()).max(self.tau_lo.abs());
        for _ in 0..60 {
            let f = self.logr_of_tau(tau) - lr;
            let slope = self.a / (self.q)(tau);
            let step = f / slope;
            tau = (tau - step).clamp(self.tau_lo, self.tau_hi);
            if step.abs() <= 1e-16 * scale {
                break;
            }
        }
        tau
    }
}

/// Builds the transform for the profile Q on the given τ-interval.
///
/// # Errors
///
/// - [`BundleError::ZeroCoupling`] when a = 0;
/// - [`BundleError::IntervalViolation`] when the interval is empty;
/// - [`BundleError::NonpositiveQ`] when Q ≤ 0 anywhere on a dense
///   validation grid over the interval.
pub fn tau_r_transform(
    q: QFn,
    a: f64,
    interval: (f64, f64),
) -> Result<TauTransform, BundleError> {
    let (lo, hi) = interval;
    if a == 0.0 {
        return Err(BundleError::ZeroCoupling);
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(BundleError::IntervalViolation(format!(
            "need lo < hi, got [{lo}, {hi}]"
        )));
    }
    // Positivity scan on a grid fine enough to catch any root of the
    // polynomial-sized profiles used here.
    let scan = 2048;
    for k in 0..=scan {
        let tau = lo + (hi - lo) * k as f64 / scan as f64;
        let value = q(tau);
        if !(value > 0.0) || !value.is_finite() {
            return Err(BundleError::NonpositiveQ { tau, q: value });
        }
    }
    let n_panels = (((hi - lo) / 0.01).ceil() as usize).max(64);
    let tau_nodes: Vec<f64> = (0..=n_panels)
        .map(|k| lo + (hi - lo) * k as f64 / n_panels as f64)
        .collect();
    let f = |t: f64| a / q(t);
    let mut logr_nodes = Vec::with_capacity(n_panels + 1);
    logr_nodes.push(0.0);
    for k in 0..n_panels {
        let prev = *logr_nodes.last().expect("nonempty");
        logr_nodes.push(prev + gl16(&f, tau_nodes[k], tau_nodes[k + 1]));
    }
    let transform = TauTransform {
        a,
        tau_lo: lo,
        tau_hi: hi,
        tau_nodes,
        logr_nodes,
        q,
    };
    // Shift the gauge so log r = 0 at the interval midpoint, keeping r
    // near 1 across the whole working window.
    let offset = transform.logr_of_tau(0.5 * (lo + hi));
    let mut transform = transform;
    for v in &mut transform.logr_nodes {
        *v -= offset;
    }
    Ok(transform)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::septuple::{build_case_i, build_case_ii, build_case_iii};
    use crate::tol::{TRANSFORM_QUAD_TOL, TRANSFORM_ROUND_TRIP_TOL};

    fn qfn_of(fns: &crate::septuple::SeptupleFns) -> QFn {
        let q = fns.grad_sq.clone();
        Arc::new(move |t: f64| q.eval_f64(t))
    }

    #[test]
    fn unit_q_gives_exponential_radius() {
        // Q ≡ 1 (the φ ≡ 0 family at K = α = 0, η = −6, m = 2), a = 1:
        // log r = τ + const, so differences of log r equal differences
        // of τ.
        let fns = build_case_i(2, &rat(0, 1), &rat(0, 1), &rat(-6, 1)).unwrap();
        let t = tau_r_transform(qfn_of(&fns), 1.0, (0.2, 0.8)).unwrap();
        let d = t.logr_of_tau(0.7) - t.logr_of_tau(0.3);
        assert!((d - 0.4).abs() < TRANSFORM_QUAD_TOL, "d = {d}");
    }

    #[test]
    fn euler_profile_gives_logarithmic_law() {
        // Q = 2τ (case II at K = 4, α = η = 0, m = 2), a = 1:
        // log r = ½·log τ + const — an independent closed-form check of
        // the quadrature nodes and weights.
        let fns = build_case_ii(2, &rat(4, 1), &rat(0, 1), &rat(0, 1)).unwrap();
        let t = tau_r_transform(qfn_of(&fns), 1.0, (1.0, 3.0)).unwrap();
        let d = t.logr_of_tau(2.5) - t.logr_of_tau(1.2);
        let expected = 0.5 * (2.5f64 / 1.2).ln();
        assert!((d - expected).abs() < TRANSFORM_QUAD_TOL, "d = {d}");
    }

    #[test]
    fn round_trip_is_tight_on_a_hundred_samples() {
        // Case III with σ ≡ 1: Q = 2(τ−1) on [1.5, 2.5], negative a to
        // cover the decreasing branch.
        let fns =
            build_case_iii(2, &rat(2, 1), &rat(0, 1), &rat(0, 1), &rat(1, 1)).unwrap();
        let t = tau_r_transform(qfn_of(&fns), -1.0, (1.5, 2.5)).unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..100 {
            let tau = 1.5 + k as f64 / 99.0;
            let back = t.tau_of_logr(t.logr_of_tau(tau));
            worst = worst.max((back - tau).abs());
        }
        assert!(worst <= TRANSFORM_ROUND_TRIP_TOL, "worst = {worst:e}");
    }

    #[test]
    fn interval_with_a_root_of_q_is_rejected() {
        // Q = 2(τ−1) vanishes at τ = 1 inside [0.5, 1.5].
        let fns =
            build_case_iii(2, &rat(2, 1), &rat(0, 1), &rat(0, 1), &rat(1, 1)).unwrap();
        let err = tau_r_transform(qfn_of(&fns), 1.0, (0.5, 1.5)).unwrap_err();
        assert!(matches!(err, BundleError::NonpositiveQ { .. }), "{err}");
    }

    #[test]
    fn zero_coupling_and_empty_interval_are_rejected() {
        let fns = build_case_i(2, &rat(0, 1), &rat(0, 1), &rat(-6, 1)).unwrap();
        assert!(matches!(
            tau_r_transform(qfn_of(&fns), 0.0, (0.2, 0.8)),
            Err(BundleError::ZeroCoupling)
        ));
        assert!(matches!(
            tau_r_transform(qfn_of(&fns), 1.0, (0.8, 0.2)),
            Err(BundleError::IntervalViolation(_))
        ));
    }

    #[test]
    fn gauge_puts_zero_at_the_midpoint() {
        let fns = build_case_i(2, &rat(1, 1), &rat(0, 1), &rat(-6, 1)).unwrap();
        let t = tau_r_transform(qfn_of(&fns), 1.0, (0.2, 0.8)).unwrap();
        assert!(t.logr_of_tau(0.5).abs() < 1e-15);
        let (lo, hi) = t.logr_range();
        assert!(lo < 0.0 && hi > 0.0);
    }
}
