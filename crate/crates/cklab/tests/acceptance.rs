//! The project's acceptance checklist: nine gate tests, one per release
//! criterion, each printing a single verdict line.
//!
//! Run with
//!
//! ```text
//! cargo test --test acceptance -- --nocapture
//! ```
//!
//! to see the verdict lines as they complete (without `--nocapture` the
//! harness shows them only for failing tests).
//!
//! Conventions:
//!
//! - every numeric tolerance used by a gate is asserted here against a
//!   literal, so a drive-by edit of [`cklab::tol`] cannot silently weaken
//!   the gate;
//! - wall-clock budgets are asserted where the checklist pins one; the
//!   budgets are generous (the suites run orders of magnitude faster);
//! - seeds are fixed so every run certifies the same sample set.

use std::time::{Duration, Instant};

use cklab::report::VerificationReport;
use cklab::suites::{
    bb_suite, criterion5_configs, dim3_suite, geometry_suite, identity_suite, ode_suite,
    product_suite, septuple_suite, third_order_suite, GeometrySuiteOptions,
};
use cklab::tol;

/// Fixed seed for every randomized gate; changing it changes which points
/// are certified, not whether the gate should pass.
const SEED: u64 = 2026;

/// Print the verdict line for one gate and panic (after printing) if it
/// failed, listing the failing entries.
fn verdict(index: u32, label: &str, report: &VerificationReport, elapsed: Duration) {
    let pass = report.all_pass();
    let status = if pass { "PASS" } else { "FAIL" };
    println!(
        "acceptance [{index}/9] {label}: {status} ({} entries, {:.2}s)",
        report.entries.len(),
        elapsed.as_secs_f64()
    );
    if !pass {
        for entry in report.failures() {
            println!(
                "    failed: [{}] {} residual={:e} tolerance={:e}",
                entry.tag, entry.equation, entry.residual, entry.tolerance
            );
        }
        panic!("acceptance gate {index} ({label}) failed");
    }
}

/// Assert that a wall-clock budget was met, with the measured time in the
/// message.
fn within(index: u32, elapsed: Duration, budget: Duration) {
    assert!(
        elapsed <= budget,
        "acceptance gate {index} exceeded its wall-clock budget: {:.2}s > {:.2}s",
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
}

fn count_matching(report: &VerificationReport, fragment: &str) -> usize {
    report
        .entries
        .iter()
        .filter(|e| e.tag.contains(fragment) || e.equation.contains(fragment))
        .count()
}

/// Gate 1: the special-function identity web holds exactly for m = 1..8.
#[test]
fn gate_1_exact_identity_web() {
    let start = Instant::now();
    let report = identity_suite(1, 8).expect("identity suite construction");
    let elapsed = start.elapsed();

    // Exactness: every entry is an exact-arithmetic verdict (tolerance 0).
    for entry in &report.entries {
        assert_eq!(
            entry.tolerance, 0.0,
            "identity gate must be exact, found numeric entry [{}] {}",
            entry.tag, entry.equation
        );
    }
    // Coverage: every dimension in 1..8 contributes entries.
    for m in 1..=8 {
        let tag = format!("m={m}:");
        assert!(
            count_matching(&report, &tag) > 0,
            "no identity entries for {tag}"
        );
    }
    verdict(1, "exact identity web, m=1..8", &report, elapsed);
    within(1, elapsed, Duration::from_secs(10));
}

/// Gate 2: 25 seeded parameter draws per family for m in {2, 3, 4} satisfy
/// the septuple system exactly, and the conserved quantities take their
/// predicted closed-form values exactly.
#[test]
fn gate_2_random_septuple_families() {
    let start = Instant::now();
    let report = septuple_suite(&[2, 3, 4], 25, SEED).expect("septuple suite construction");
    let elapsed = start.elapsed();

    for m in [2u32, 3, 4] {
        for case in ["i", "ii", "iii"] {
            let prefix = format!("m{m}-case-{case}/");
            assert!(
                count_matching(&report, &prefix) > 0,
                "no septuple entries under {prefix}"
            );
        }
    }
    // The conserved-value comparisons must be present: sign-split constant,
    // coupling value, and the eta closed form.
    for eq in ["(L10.1-c=0)", "(L10.1-c=c)", "(23.1)", "(27e)"] {
        assert!(
            count_matching(&report, eq) > 0,
            "missing conserved-value comparison {eq}"
        );
    }
    verdict(2, "seeded septuple families, 25 draws x 3 cases x m=2..4", &report, elapsed);
    within(2, elapsed, Duration::from_secs(30));
}

/// Gate 3: the three closed-form solutions of the third-order equation
/// satisfy it exactly for m = 2..6, and the associated first integral is
/// the predicted constant (m for the constant solution, 0 for the other
/// two).
#[test]
fn gate_3_third_order_solutions() {
    let start = Instant::now();
    let report = third_order_suite(2, 6).expect("third-order suite construction");
    let elapsed = start.elapsed();

    for entry in &report.entries {
        assert_eq!(
            entry.tolerance, 0.0,
            "third-order gate must be exact, found numeric entry [{}] {}",
            entry.tag, entry.equation
        );
    }
    for m in 2..=6 {
        for sigma in ["1", "E", "F"] {
            let prefix = format!("m{m}-c=1-sigma={sigma}/");
            assert!(
                count_matching(&report, &prefix) > 0,
                "no third-order entries under {prefix}"
            );
        }
    }
    assert!(
        count_matching(&report, "(20.3)-value") > 0,
        "missing first-integral value comparisons"
    );
    verdict(3, "third-order closed forms, m=2..6", &report, elapsed);
}

/// Gate 4: the RK4 cross-check at step 1e-3 reproduces each closed-form
/// family to 1e-7, conserves the first integrals to 1e-8, and exhibits
/// fourth-order convergence (step-halving error ratio in [12, 20]).
#[test]
fn gate_4_ode_cross_check() {
    // Pin the gate tolerances against drift in the shared constants.
    assert_eq!(tol::ODE_REFERENCE_STEP, 1e-3);
    assert_eq!(tol::ODE_DEVIATION_TOL, 1e-7);
    assert_eq!(tol::ODE_DRIFT_TOL, 1e-8);
    assert_eq!(tol::ODE_RATIO_LOW, 12.0);
    assert_eq!(tol::ODE_RATIO_HIGH, 20.0);

    let start = Instant::now();
    let report = ode_suite(tol::ODE_REFERENCE_STEP).expect("ode suite construction");
    let elapsed = start.elapsed();

    for case in ["i", "ii", "iii"] {
        let prefix = format!("ode-case-{case}/");
        assert!(
            count_matching(&report, &prefix) > 0,
            "no cross-check entries under {prefix}"
        );
    }
    for name in ["max-deviation", "conservation-drift", "step-halving-ratio"] {
        assert_eq!(
            count_matching(&report, name),
            3,
            "expected one {name} entry per family"
        );
    }
    verdict(4, "RK4 cross-check, three families", &report, elapsed);
    // Budget: 10 s per family.
    within(4, elapsed, Duration::from_secs(30));
}

/// Gate 5: for m = 2 every solution family, with at least one
/// representative per admissible sign of the normal-geometry constant, is
/// realized as a chart metric and certified at 20 seeded points per
/// configuration: Kähler + Killing at 1e-6, eigenstructure and
/// Levi-Civita structure at 1e-5, conformal Einstein at 1e-5 with the
/// scalar curvature matched to the conserved quantity at 1e-4, and the
/// finite-difference probe confirming fourth-order behavior.
#[test]
fn gate_5_surface_chart_certification() {
    assert_eq!(tol::KAHLER_TOL, 1e-6);
    assert_eq!(tol::KILLING_TOL, 1e-6);
    assert_eq!(tol::EIGENSTRUCTURE_REL_TOL, 1e-5);
    assert_eq!(tol::STRUCTURE_EQ_TOL, 1e-5);
    assert_eq!(tol::EINSTEIN_REL_TOL, 1e-5);
    assert_eq!(tol::SCALAR_MATCH_REL_TOL, 1e-4);
    assert_eq!(tol::FD_RATIO_LOW, 3.5);
    assert_eq!(tol::FD_RATIO_HIGH, 4.5);

    let opts = GeometrySuiteOptions {
        points_per_config: 20,
        seed: SEED,
        fd_step: tol::DEFAULT_FD_STEP,
        relax_to: None,
    };
    let mut merged = VerificationReport::new();
    let mut total = Duration::ZERO;
    for config in criterion5_configs() {
        let label = config.label.clone();
        let start = Instant::now();
        let report = geometry_suite(&[config], &opts).expect("geometry suite construction");
        let elapsed = start.elapsed();
        total += elapsed;
        // Budget: 60 s per configuration.
        assert!(
            elapsed <= Duration::from_secs(60),
            "configuration {label} exceeded its 60 s budget: {:.2}s",
            elapsed.as_secs_f64()
        );
        merged.merge(report);
    }

    // The six configurations cover each family with every admissible sign:
    // the parabolic family (sign 0), and both signs for the other two.
    for label in [
        "case-i/",
        "case-ii-plus/",
        "case-ii-minus/",
        "case-iii-plus/",
        "case-iii-minus/",
        "case-iii-flat/",
    ] {
        assert!(
            count_matching(&merged, label) > 0,
            "no certification entries under {label}"
        );
    }
    for check in [
        "kahler",
        "killing",
        "eigenstructure",
        "structure",
        "einstein",
        "(6.1-scal)",
        "fd-probe",
    ] {
        assert!(
            count_matching(&merged, check) > 0,
            "certification family {check} missing from the report"
        );
    }
    verdict(5, "surface chart certification, six configurations", &merged, total);
}

/// Gate 6: the complex-dimension-3 configuration over the Fubini–Study
/// base passes the same certification with the relaxed 1e-4 tolerance.
#[test]
fn gate_6_threefold_chart_certification() {
    assert_eq!(tol::DIM3_RELAXED_TOL, 1e-4);

    let start = Instant::now();
    let report = dim3_suite(8, SEED, tol::DEFAULT_FD_STEP).expect("dim-3 suite construction");
    let elapsed = start.elapsed();

    assert!(
        count_matching(&report, "case-iii-m3/") > 0,
        "no dimension-3 certification entries"
    );
    verdict(6, "threefold over Fubini-Study base, relaxed 1e-4", &report, elapsed);
    within(6, elapsed, Duration::from_secs(300));
}

/// Gate 7: the negative controls discriminate. Doctoring the base metric's
/// Einstein constant or the connection normalization must push the
/// conformal-Einstein residual above 1e-2 — three to four orders of
/// magnitude beyond the positive-run ceiling.
#[test]
fn gate_7_negative_controls() {
    assert_eq!(tol::NEGATIVE_CONTROL_MIN_RESIDUAL, 1e-2);

    // The flagged configuration carries the controls; a small point count
    // suffices because the controls are per-configuration.
    let config = criterion5_configs()
        .into_iter()
        .find(|c| c.negative_controls)
        .expect("a configuration with negative controls enabled");
    let opts = GeometrySuiteOptions {
        points_per_config: 4,
        seed: SEED,
        fd_step: tol::DEFAULT_FD_STEP,
        relax_to: None,
    };
    let start = Instant::now();
    let report = geometry_suite(&[config], &opts).expect("geometry suite construction");
    let elapsed = start.elapsed();

    for control in ["(neg-base)", "(neg-connection)"] {
        let entry = report
            .entries
            .iter()
            .find(|e| e.equation.contains(control))
            .unwrap_or_else(|| panic!("missing negative control {control}"));
        // These are exact verdicts: pass means the doctored run's Einstein
        // residual exceeded the discrimination threshold (the measured
        // value is recorded in the detail text).
        assert!(entry.pass, "negative control {control} did not trip");
        let detail = entry.detail.as_deref().unwrap_or("");
        assert!(
            detail.contains("must exceed"),
            "negative control {control} detail does not record the threshold: {detail:?}"
        );
    }
    verdict(7, "negative controls trip on doctored inputs", &report, elapsed);
}

/// Gate 8: the degenerate product construction (vanishing coupling)
/// satisfies the product-metric identities: block-diagonal metric values
/// at 1e-8, gradient law and Hessian structure at 1e-6..1e-5, and the
/// conserved constants at 1e-8.
#[test]
fn gate_8_product_construction() {
    assert_eq!(tol::PRODUCT_IDENTITY_TOL, 1e-5);
    assert_eq!(tol::PRODUCT_CONSTANT_TOL, 1e-8);

    let start = Instant::now();
    let report = product_suite(SEED).expect("product suite construction");
    let elapsed = start.elapsed();

    for label in ["product-a/", "product-b/"] {
        assert!(
            count_matching(&report, label) > 0,
            "no product entries under {label}"
        );
    }
    verdict(8, "degenerate product construction", &report, elapsed);
}

/// Gate 9: the dual-route potential construction agrees exactly with the
/// septuple route for m = 2..6, its positivity certificate holds at every
/// sampled point, and the assembled chart passes the full surface
/// certification.
#[test]
fn gate_9_dual_route_construction() {
    let start = Instant::now();
    let report = bb_suite(2, 6, SEED, tol::DEFAULT_FD_STEP).expect("bb suite construction");
    let elapsed = start.elapsed();

    // Route agreement is exact, with comparisons at two conserved-quantity
    // values per dimension (the dimension is recorded in the detail text).
    for m in 2..=6 {
        let needle = format!("m = {m},");
        let hits = report
            .entries
            .iter()
            .filter(|e| {
                e.equation.contains("(26.3)")
                    && e.detail.as_deref().unwrap_or("").contains(&needle)
            })
            .count();
        assert!(hits >= 2, "expected dual-route comparisons for m = {m}");
    }
    assert!(
        count_matching(&report, "(26.2)") > 0,
        "missing positivity certificate entries"
    );
    assert!(
        count_matching(&report, "bb-assembled/") > 0,
        "missing assembled-chart certification entries"
    );
    verdict(9, "dual-route potential and assembled chart", &report, elapsed);
}
