//! Total-space metric assembly and its pointwise certification helpers.
//!
//! A construction is a closed-form septuple together with the bundle
//! parameters (a, ε, c), a working τ-interval, and the τ↔log r transform.
//! [`assemble_chart`] turns it into a [`ChartMetric`] on coordinates
//! (y, Re z, Im z):
//!
//! - every coordinate vector (w, ζ) splits into the horizontal lift
//!   (w, −Γ(w)z) and the vertical remainder (0, ζ + Γ(w)z);
//! - the metric is f·h on horizontal parts and θ·⟨w,w⟩·Re(ζ₁ζ̄₂) on
//!   vertical parts, with θ = Q/(ar)², r = |z|·⟨w,w⟩^{1/2}, and f = 1
//!   (ε = 0) or f = 2ε(τ−c);
//! - τ is recovered from log r through the transform.
//!
//! The checks here certify the construction against its defining
//! relations rather than assuming them: [`verify_fiber_geometry`]
//! confirms g(v,v) = g(u,u) = Q and ∇τ = v for v = (0, az), u = Jv, and
//! [`check_structure_equations`] confirms the covariant-derivative table
//! of the fields v, u and the horizontal lifts, with the coefficients ψ
//! and φ measured from the radial profiles of θ and f — an
//! implementation-independent route:
//!
//! ```text
//! ∇_v v = ψv   ∇_u v = ψu    ∇_w v = φw          ψ = a(2θ + θ̇)/(2θ)
//! ∇_v u = ψu   ∇_u u = −ψv   ∇_w u = φJw         φ = a·ḟ/(2f)
//! vert(∇_w w′) = −(φ/Q)[g(w,w′)v + ω(w,w′)u]     (˙ = d/d log r)
//! vert([w, w′]) = −2ε·ω_h(w,w′)·u
//! ```

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use std::sync::Arc;

use super::{
    bases::{BaseGeometry, ConnectionData},
    tau_r_transform,
    transform::QFn,
    BundleError, TauTransform,
};
use crate::exact::{rat, rational_to_f64, Rational};
use crate::geometry::{christoffels, ChartMetric, Differ, GeometryError};
use crate::report::VerificationReport;
use crate::septuple::{integrals, CaseParams, Eps, SeptupleFns};
use crate::tol::{
    CASE_III_T_MARGIN, FIBER_DISC_EXCLUSION, GRADIENT_LAW_TOL, METRIC_VALUE_TOL,
    STRUCTURE_EQ_TOL,
};

/// One assembled-metric construction: closed forms, bundle parameters,
/// working interval, derived constants, and the τ↔r transform.
///
/// # Invariants
///
/// - Q > 0 on the interval (enforced by the transform builder);
/// - ε(τ−c) > 0 on the interval unless ε = 0;
/// - the interval avoids τ = 0 and, when the F-coefficient is nonzero,
///   keeps |τ/c − 1| ≥ the pole margin;
/// - immutable after construction; all evaluators are pure.
#[derive(Debug)]
pub struct ConstructionData {
    /// Complex dimension of the total space.
    pub m: u32,
    pub params: CaseParams,
    /// The closed-form septuple built from `params`.
    pub fns: SeptupleFns,
    /// Fiber coupling constant (∇τ = (0, az)), nonzero.
    pub a: f64,
    pub eps: Eps,
    /// Affine offset of the φ ≠ 0 families (zero in cases I and II).
    pub c: Rational,
    /// Working τ-interval, lo < hi.
    pub interval: (f64, f64),
    /// Base Einstein constant from the case table:
    /// (3−2m)K / εK / εmA/c for cases I / II / III.
    pub kappa: f64,
    /// Conserved scalar: a certified chart has s̃ = 2η for g̃ = g/τ².
    pub eta: f64,
    pub transform: Arc<TauTransform>,
}

impl ConstructionData {
    /// ε(τ−c) as f64 at a given τ (positive on the working interval when
    /// ε ≠ 0).
    pub fn f_factor(&self, tau: f64) -> f64 {
        if self.eps == Eps::Zero {
            1.0
        } else {
            2.0 * self.eps.as_f64() * (tau - rational_to_f64(&self.c))
        }
    }
}

/// Validates the bundle parameters against the family and builds the
/// construction (including the τ↔r transform).
///
/// # Errors
///
/// - [`BundleError::IntervalViolation`] for ε/family mismatches, an
///   interval through τ = 0 or τ = c, or a case-III interval within the
///   pole margin of t = 1 while the F-coefficient is active;
/// - [`BundleError::NonpositiveQ`] / [`BundleError::ZeroCoupling`] from
///   the transform builder;
/// - [`BundleError::Septuple`] when the closed forms cannot be built.
pub fn build_construction(
    params: &CaseParams,
    a: f64,
    eps: Eps,
    interval: (f64, f64),
) -> Result<ConstructionData, BundleError> {
    let fns = params.build()?;
    let m = params.m();
    let (lo, hi) = interval;
    if lo <= 0.0 && hi >= 0.0 {
        return Err(BundleError::IntervalViolation(format!(
            "the working interval [{lo}, {hi}] must avoid tau = 0"
        )));
    }
    let c = match params {
        CaseParams::III { c, .. } => c.clone(),
        _ => rat(0, 1),
    };
    let c_f = rational_to_f64(&c);
    match (params, eps) {
        (CaseParams::I { .. }, Eps::Zero) => {}
        (CaseParams::I { .. }, _) => {
            return Err(BundleError::IntervalViolation(
                "the phi = 0 family carries eps = 0".into(),
            ))
        }
        (_, Eps::Zero) => {
            return Err(BundleError::IntervalViolation(
                "eps = 0 belongs to the phi = 0 family only".into(),
            ))
        }
        (_, Eps::Plus) => {
            if !(lo > c_f) {
                return Err(BundleError::IntervalViolation(format!(
                    "eps = +1 needs tau > c = {c_f} on the whole interval [{lo}, {hi}]"
                )));
            }
        }
        (_, Eps::Minus) => {
            if !(hi < c_f) {
                return Err(BundleError::IntervalViolation(format!(
                    "eps = -1 needs tau < c = {c_f} on the whole interval [{lo}, {hi}]"
                )));
            }
        }
    }
    if let CaseParams::III { coef_c, c, .. } = params {
        if *coef_c != rat(0, 1) {
            // F has a pole at t = τ/c = 1; keep a fixed margin in t.
            let margin = CASE_III_T_MARGIN * c_f.abs();
            let dist = (lo - c_f).abs().min((hi - c_f).abs());
            if dist < margin {
                return Err(BundleError::IntervalViolation(format!(
                    "interval endpoint within {margin:.3e} of the F-pole at tau = c = {}",
                    rational_to_f64(c)
                )));
            }
        }
    }
    let kappa = match params {
        CaseParams::I { k, .. } => (3 - 2 * m as i64) as f64 * rational_to_f64(k),
        CaseParams::II { k, .. } => eps.as_f64() * rational_to_f64(k),
        CaseParams::III { coef_a, c, .. } => {
            eps.as_f64() * m as f64 * rational_to_f64(coef_a) / rational_to_f64(c)
        }
    };
    let (values, _report) = integrals(&fns, eps);
    let eta = values
        .eta
        .as_ref()
        .map(rational_to_f64)
        .ok_or_else(|| {
            BundleError::ParameterDomain("the eta combination is not a constant of motion".into())
        })?;
    let qfn: QFn = {
        let q = fns.grad_sq.clone();
        Arc::new(move |t: f64| q.eval_f64(t))
    };
    let transform = Arc::new(tau_r_transform(qfn, a, interval)?);
    Ok(ConstructionData {
        m,
        params: params.clone(),
        fns,
        a,
        eps,
        c,
        interval,
        kappa,
        eta,
        transform,
    })
}

/// Splits a total-space point into base coordinates and the complex
/// fiber coordinate.
fn split_point(p: &[f64], nb: usize) -> (&[f64], Complex64) {
    (&p[..nb], Complex64::new(p[nb], p[nb + 1]))
}

/// Assembles the total-space chart metric from a base, a connection, and
/// a construction.
///
/// # Errors
///
/// [`BundleError::ParameterDomain`] when the three inputs disagree on
/// dimension, ε, or the coupling constant.
pub fn assemble_chart(
    base: &BaseGeometry,
    conn: &ConnectionData,
    data: &ConstructionData,
) -> Result<ChartMetric, BundleError> {
    if base.complex_dim != data.m as usize - 1 {
        return Err(BundleError::ParameterDomain(format!(
            "base complex dimension {} does not match m - 1 = {}",
            base.complex_dim,
            data.m - 1
        )));
    }
    if conn.eps != data.eps || conn.a != data.a {
        return Err(BundleError::ParameterDomain(
            "connection and construction disagree on (eps, a)".into(),
        ));
    }
    let nb = base.real_dim();
    let n = nb + 2;
    let a = data.a;
    let eps_f = data.eps.as_f64();
    let use_f = data.eps != Eps::Zero;
    let c_f = rational_to_f64(&data.c);
    let qf = data.fns.grad_sq.clone();
    let transform = Arc::clone(&data.transform);

    let metric_at: Box<crate::geometry::MatrixFn> = {
        let h_at = Arc::clone(&base.metric_at);
        let gamma_at = Arc::clone(&conn.gamma_form_at);
        let weight_at = Arc::clone(&conn.weight_at);
        let transform = Arc::clone(&transform);
        let qf = qf.clone();
        Box::new(move |p: &[f64]| {
            let (y, z) = split_point(p, nb);
            let w = weight_at(y);
            let r2 = z.norm_sqr() * w;
            let tau = transform.tau_of_logr(0.5 * r2.ln());
            let q = qf.eval_f64(tau);
            let theta = q / (a * a * r2);
            let f = if use_f { 2.0 * eps_f * (tau - c_f) } else { 1.0 };
            let h = h_at(y);
            let gamma = gamma_at(y);
            // Vertical components of the coordinate vectors.
            let mut zeta = vec![Complex64::new(0.0, 0.0); n];
            for (i, zi) in zeta.iter_mut().take(nb).enumerate() {
                *zi = gamma[i] * z;
            }
            zeta[nb] = Complex64::new(1.0, 0.0);
            zeta[nb + 1] = Complex64::new(0.0, 1.0);
            let mut g = DMatrix::zeros(n, n);
            for row in 0..n {
                for col in row..n {
                    let horizontal = if row < nb && col < nb {
                        f * h[(row, col)]
                    } else {
                        0.0
                    };
                    let vertical = theta * w * (zeta[row] * zeta[col].conj()).re;
                    let value = horizontal + vertical;
                    g[(row, col)] = value;
                    g[(col, row)] = value;
                }
            }
            g
        })
    };

    let complex_structure_at: Box<crate::geometry::MatrixFn> = {
        let j_at = Arc::clone(&base.complex_structure_at);
        Box::new(move |p: &[f64]| {
            let jb = j_at(&p[..nb]);
            let mut j = DMatrix::zeros(n, n);
            j.view_mut((0, 0), (nb, nb)).copy_from(&jb);
            j[(nb + 1, nb)] = 1.0;
            j[(nb, nb + 1)] = -1.0;
            j
        })
    };

    let potential_at: Box<crate::geometry::PointFn> = {
        let weight_at = Arc::clone(&conn.weight_at);
        let transform = Arc::clone(&transform);
        Box::new(move |p: &[f64]| {
            let (y, z) = split_point(p, nb);
            let logr = z.norm().ln() + 0.5 * weight_at(y).ln();
            transform.tau_of_logr(logr)
        })
    };

    let domain_probe: Box<crate::geometry::ProbeFn> = {
        let weight_at = Arc::clone(&conn.weight_at);
        let base_probe = Arc::clone(&base.domain_probe);
        let (lr_min, lr_max) = transform.logr_range();
        Box::new(move |p: &[f64]| {
            let (y, z) = split_point(p, nb);
            if !base_probe(y) || z.norm() < FIBER_DISC_EXCLUSION {
                return false;
            }
            let logr = z.norm().ln() + 0.5 * weight_at(y).ln();
            (lr_min..=lr_max).contains(&logr)
        })
    };

    Ok(ChartMetric {
        dim: n,
        metric_at,
        complex_structure_at,
        potential_at,
        domain_probe,
    })
}

/// Draws a uniformly spread in-domain point of an assembled chart:
/// τ uniform in the margin-trimmed working interval, base coordinates
/// uniform in [−0.3, 0.3], fiber phase uniform, |z| solved from τ.
///
/// `margin` is the fraction of the interval trimmed from each end (so FD
/// stencils around the point stay inside the τ-window).
pub fn sample_domain_point<R: Rng>(
    base: &BaseGeometry,
    conn: &ConnectionData,
    data: &ConstructionData,
    margin: f64,
    rng: &mut R,
) -> Vec<f64> {
    let (lo, hi) = data.interval;
    let tau = lo + (hi - lo) * (margin + rng.gen::<f64>() * (1.0 - 2.0 * margin));
    let nb = base.real_dim();
    let y: Vec<f64> = (0..nb).map(|_| rng.gen::<f64>() * 0.6 - 0.3).collect();
    let logr = data.transform.logr_of_tau(tau);
    let radius = logr.exp() / conn.weight(&y).sqrt();
    let phase = rng.gen::<f64>() * std::f64::consts::TAU;
    let mut p = y;
    p.push(radius * phase.cos());
    p.push(radius * phase.sin());
    p
}

/// The distinguished vertical fields at a point: v = (0, az) and
/// u = Jv = (0, iaz), as coordinate-component vectors.
fn v_u_at(p: &[f64], nb: usize, a: f64) -> (DVector<f64>, DVector<f64>) {
    let n = nb + 2;
    let mut v = DVector::zeros(n);
    let mut u = DVector::zeros(n);
    v[nb] = a * p[nb];
    v[nb + 1] = a * p[nb + 1];
    u[nb] = -a * p[nb + 1];
    u[nb + 1] = a * p[nb];
    (v, u)
}

/// Verifies the two defining fiber identities of an assembled chart at a
/// point:
///
/// - `(R3.2-norm)`: g(v,v) = g(u,u) = Q(τ) — the fiber norm profile;
/// - `(16-grad)`: the finite-difference gradient of τ equals v — the
///   potential really is the one the construction encodes.
///
/// # Errors
///
/// Propagates [`GeometryError`] when the FD stencil leaves the domain or
/// the metric fails to factor.
pub fn verify_fiber_geometry(
    chart: &ChartMetric,
    data: &ConstructionData,
    p: &[f64],
    h: f64,
) -> Result<VerificationReport, GeometryError> {
    let differ = Differ::richardson(h);
    crate::geometry::ensure_stencil(chart, p, &differ)?;
    let nb = chart.dim - 2;
    let g = chart.metric(p);
    let tau = chart.tau(p);
    let q = data.fns.grad_sq.eval_f64(tau);
    let (v, u) = v_u_at(p, nb, data.a);
    let gvv = (g.clone() * &v).dot(&v);
    let guu = (g.clone() * &u).dot(&u);
    let scale = 1.0f64.max(q.abs());
    let norm_residual = ((gvv - q).abs()).max((guu - q).abs()) / scale;

    let chol =
        nalgebra::Cholesky::new(g.clone()).ok_or(GeometryError::NotPositiveDefinite)?;
    let dtau = DVector::from_iterator(
        chart.dim,
        (0..chart.dim).map(|i| differ.partial(|x: &[f64]| chart.tau(x), p, i)),
    );
    let grad = chol.solve(&dtau);
    let diff = &grad - &v;
    let grad_residual = ((g * &diff).dot(&diff)).sqrt() / 1.0f64.max(q.abs().sqrt());

    let mut report = VerificationReport::new();
    report.push_numeric_detail(
        "fiber",
        "(R3.2-norm)",
        norm_residual,
        METRIC_VALUE_TOL,
        Some(format!("g(v,v), g(u,u) vs Q = {q:.6} at tau = {tau:.6}")),
    );
    report.push_numeric_detail(
        "fiber",
        "(16-grad)",
        grad_residual,
        GRADIENT_LAW_TOL,
        Some("FD gradient of tau vs v = (0, az)".into()),
    );
    Ok(report)
}

/// A vector field's value and coordinate-derivative matrix at a point.
struct FieldJet {
    value: DVector<f64>,
    /// `deriv[(k, l)]` = ∂_l F^k.
    deriv: DMatrix<f64>,
}

fn field_jet<F>(field: F, p: &[f64], n: usize, differ: &Differ) -> FieldJet
where
    F: Fn(&[f64]) -> DVector<f64>,
{
    let value = field(p);
    let mut deriv = DMatrix::zeros(n, n);
    for k in 0..n {
        for l in 0..n {
            deriv[(k, l)] = differ.partial(|x: &[f64]| field(x)[k], p, l);
        }
    }
    FieldJet { value, deriv }
}

/// Covariant derivative (∇_X F)^k = X^l ∂_l F^k + Γ^k_{ij} X^i F^j from a
/// field jet and Christoffel symbols.
fn covariant_derivative(
    gamma: &[DMatrix<f64>],
    jet: &FieldJet,
    x: &DVector<f64>,
) -> DVector<f64> {
    let n = x.len();
    let mut out = DVector::zeros(n);
    for k in 0..n {
        let mut s = 0.0;
        for l in 0..n {
            s += x[l] * jet.deriv[(k, l)];
        }
        for i in 0..n {
            for j in 0..n {
                s += gamma[k][(i, j)] * x[i] * jet.value[j];
            }
        }
        out[k] = s;
    }
    out
}

/// Verifies the covariant-derivative table of the assembled metric at a
/// point: eight entries tagged `structure`, labels `(16.1-vv)`,
/// `(16.1-uv)`, `(16.1-vu)`, `(16.1-uu)`, `(16.1-wv)`, `(16.1-wu)`,
/// `(16.1-ww)` and `(16.2)` (see the module docs for the table). The
/// coefficients ψ and φ are measured from the radial profiles of θ and
/// f, independently of the closed-form septuple.
///
/// # Errors
///
/// Propagates [`GeometryError`] from the FD machinery.
pub fn check_structure_equations(
    chart: &ChartMetric,
    base: &BaseGeometry,
    conn: &ConnectionData,
    data: &ConstructionData,
    p: &[f64],
    h: f64,
) -> Result<VerificationReport, GeometryError> {
    let differ = Differ::richardson(h);
    let nb = base.real_dim();
    let n = nb + 2;
    let gamma_chart = christoffels(chart, p, h)?;
    let g = chart.metric(p);
    let j_mat = chart.j(p);
    let a = data.a;
    let eps_f = data.eps.as_f64();
    let c_f = rational_to_f64(&data.c);

    let (y, z) = split_point(p, nb);
    let lr_p = z.norm().ln() + 0.5 * conn.weight(y).ln();
    let tau_p = chart.tau(p);
    let q_p = data.fns.grad_sq.eval_f64(tau_p);

    // Radial profiles in log r.
    let theta_profile = {
        let qf = data.fns.grad_sq.clone();
        let transform = Arc::clone(&data.transform);
        move |lr: f64| qf.eval_f64(transform.tau_of_logr(lr)) / (a * a * (2.0 * lr).exp())
    };
    let theta_p = theta_profile(lr_p);
    let theta_dot = differ.derivative_1d(&theta_profile, lr_p);
    let psi = a * (2.0 * theta_p + theta_dot) / (2.0 * theta_p);
    let phi = if data.eps == Eps::Zero {
        0.0
    } else {
        let f_profile = {
            let transform = Arc::clone(&data.transform);
            move |lr: f64| 2.0 * eps_f * (transform.tau_of_logr(lr) - c_f)
        };
        let f_p = f_profile(lr_p);
        let f_dot = differ.derivative_1d(&f_profile, lr_p);
        a * f_dot / (2.0 * f_p)
    };

    // Field jets for v, u, and the horizontal lifts X_i = (e_i, −Γ(e_i)z).
    let v_field = move |x: &[f64]| v_u_at(x, nb, a).0;
    let u_field = move |x: &[f64]| v_u_at(x, nb, a).1;
    let v_jet = field_jet(v_field, p, n, &differ);
    let u_jet = field_jet(u_field, p, n, &differ);
    let lift_jets: Vec<FieldJet> = (0..nb)
        .map(|i| {
            let gamma_at = Arc::clone(&conn.gamma_form_at);
            let lift = move |x: &[f64]| {
                let (yy, zz) = split_point(x, nb);
                let fiber = -gamma_at(yy)[i] * zz;
                let mut out = DVector::zeros(n);
                out[i] = 1.0;
                out[nb] = fiber.re;
                out[nb + 1] = fiber.im;
                out
            };
            field_jet(lift, p, n, &differ)
        })
        .collect();

    let gnorm = |x: &DVector<f64>| ((&g * x).dot(x)).max(0.0).sqrt();
    let rel = |diff: &DVector<f64>, target: &DVector<f64>| gnorm(diff) / (1.0 + gnorm(target));

    let v = &v_jet.value;
    let u = &u_jet.value;
    let mut report = VerificationReport::new();
    let mut push = |label: &str, residual: f64, detail: String| {
        report.push_numeric_detail("structure", label, residual, STRUCTURE_EQ_TOL, Some(detail));
    };

    let nabla_v_v = covariant_derivative(&gamma_chart, &v_jet, v);
    push(
        "(16.1-vv)",
        rel(&(&nabla_v_v - v * psi), &(v * psi)),
        format!("nabla_v v vs psi v, psi = {psi:.8}"),
    );
    let nabla_u_v = covariant_derivative(&gamma_chart, &v_jet, u);
    push(
        "(16.1-uv)",
        rel(&(&nabla_u_v - u * psi), &(u * psi)),
        "nabla_u v vs psi u".into(),
    );
    let nabla_v_u = covariant_derivative(&gamma_chart, &u_jet, v);
    push(
        "(16.1-vu)",
        rel(&(&nabla_v_u - u * psi), &(u * psi)),
        "nabla_v u vs psi u".into(),
    );
    let nabla_u_u = covariant_derivative(&gamma_chart, &u_jet, u);
    push(
        "(16.1-uu)",
        rel(&(&nabla_u_u + v * psi), &(v * psi)),
        "nabla_u u vs -psi v".into(),
    );

    let mut worst_wv: f64 = 0.0;
    let mut worst_wu: f64 = 0.0;
    let mut worst_ww: f64 = 0.0;
    let mut worst_bracket: f64 = 0.0;
    let omega_h = base.kahler_form(y);
    for (i, xi) in lift_jets.iter().enumerate() {
        let x = &xi.value;
        let nabla_x_v = covariant_derivative(&gamma_chart, &v_jet, x);
        worst_wv = worst_wv.max(rel(&(&nabla_x_v - x * phi), &(x * phi)));
        let nabla_x_u = covariant_derivative(&gamma_chart, &u_jet, x);
        let jx = &j_mat * x;
        worst_wu = worst_wu.max(rel(&(&nabla_x_u - &jx * phi), &(&jx * phi)));
        for (jdx, xj) in lift_jets.iter().enumerate() {
            let nabla_xi_xj = covariant_derivative(&gamma_chart, xj, x);
            // Vertical projection onto span{v, u}.
            let coef_v = (&g * &nabla_xi_xj).dot(v) / q_p;
            let coef_u = (&g * &nabla_xi_xj).dot(u) / q_p;
            let vert = v * coef_v + u * coef_u;
            let gij = (&g * &xj.value).dot(x);
            let omega_ij = (&g * &xj.value).dot(&(&j_mat * x));
            let target = -(v * gij + u * omega_ij) * (phi / q_p);
            worst_ww = worst_ww.max(rel(&(&vert - &target), &target));
            if jdx > i {
                // Coordinate bracket of the lifts; its base part vanishes
                // identically, its fiber part sees the curvature.
                let mut bracket = DVector::zeros(n);
                for k in 0..n {
                    let mut s = 0.0;
                    for l in 0..n {
                        s += x[l] * xj.deriv[(k, l)] - xj.value[l] * xi.deriv[(k, l)];
                    }
                    bracket[k] = s;
                }
                let target_br = u * (-2.0 * eps_f * omega_h[(i, jdx)]);
                worst_bracket = worst_bracket.max(rel(&(&bracket - &target_br), &target_br));
            }
        }
    }
    push("(16.1-wv)", worst_wv, format!("nabla_w v vs phi w, phi = {phi:.8}"));
    push("(16.1-wu)", worst_wu, "nabla_w u vs phi Jw".into());
    push(
        "(16.1-ww)",
        worst_ww,
        "vertical part of nabla_w w' vs -(phi/Q)[g(w,w')v + omega(w,w')u]".into(),
    );
    push(
        "(16.2)",
        worst_bracket,
        "vertical part of [w, w'] vs -2 eps omega_h(w,w') u".into(),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::bases::{base_constant_curvature, connection_form};
    use crate::tol::DEFAULT_FD_STEP;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Case I at m = 2: Q = 1 − τ², κ = (3−2m)K = −1, ε = 0.
    fn case_i_setup() -> (BaseGeometry, ConnectionData, ConstructionData) {
        let params = CaseParams::I {
            m: 2,
            k: rat(1, 1),
            alpha: rat(0, 1),
            eta: rat(-6, 1),
        };
        let data = build_construction(&params, 1.0, Eps::Zero, (0.2, 0.8)).unwrap();
        let base = base_constant_curvature(data.kappa);
        let conn = connection_form(&base, Eps::Zero, 1.0);
        (base, conn, data)
    }

    /// Case III with σ ≡ 1 at m = 2: Q = 2(τ−1), κ = εmA/c = 4, ε = +1.
    fn case_iii_setup() -> (BaseGeometry, ConnectionData, ConstructionData) {
        let params = CaseParams::III {
            m: 2,
            coef_a: rat(2, 1),
            coef_b: rat(0, 1),
            coef_c: rat(0, 1),
            c: rat(1, 1),
        };
        let data = build_construction(&params, -1.0, Eps::Plus, (1.5, 2.5)).unwrap();
        assert_eq!(data.kappa, 4.0);
        let base = base_constant_curvature(data.kappa);
        let conn = connection_form(&base, Eps::Plus, -1.0);
        (base, conn, data)
    }

    #[test]
    fn construction_rejects_structural_mismatches() {
        let params_i = CaseParams::I {
            m: 2,
            k: rat(1, 1),
            alpha: rat(0, 1),
            eta: rat(-6, 1),
        };
        // φ ≡ 0 must carry ε = 0.
        assert!(matches!(
            build_construction(&params_i, 1.0, Eps::Plus, (0.2, 0.8)),
            Err(BundleError::IntervalViolation(_))
        ));
        // Interval through τ = 0.
        assert!(matches!(
            build_construction(&params_i, 1.0, Eps::Zero, (-0.2, 0.8)),
            Err(BundleError::IntervalViolation(_))
        ));
        let params_iii = CaseParams::III {
            m: 2,
            coef_a: rat(2, 1),
            coef_b: rat(0, 1),
            coef_c: rat(0, 1),
            c: rat(1, 1),
        };
        // ε = +1 needs τ > c.
        assert!(matches!(
            build_construction(&params_iii, 1.0, Eps::Plus, (0.2, 0.8)),
            Err(BundleError::IntervalViolation(_))
        ));
        // ε = 0 is reserved for the φ ≡ 0 family.
        assert!(matches!(
            build_construction(&params_iii, 1.0, Eps::Zero, (1.5, 2.5)),
            Err(BundleError::IntervalViolation(_))
        ));
    }

    #[test]
    fn case_iii_pole_margin_is_enforced_when_f_is_active() {
        let params = CaseParams::III {
            m: 2,
            coef_a: rat(2, 1),
            coef_b: rat(0, 1),
            coef_c: rat(1, 10),
            c: rat(1, 1),
        };
        let err = build_construction(&params, 1.0, Eps::Plus, (1.005, 1.4)).unwrap_err();
        assert!(matches!(err, BundleError::IntervalViolation(_)), "{err}");
    }

    #[test]
    fn derived_constants_match_the_case_table() {
        let (_, _, data_i) = case_i_setup();
        assert_eq!(data_i.kappa, -1.0);
        assert_eq!(data_i.eta, -6.0);
        let (_, _, data_iii) = case_iii_setup();
        // η = (2m−1)m[A + B·E(0)] = 6·2 = 12 for A = 2, B = 0.
        assert_eq!(data_iii.eta, 12.0);
    }

    #[test]
    fn eps_zero_chart_is_block_diagonal() {
        let (base, conn, data) = case_i_setup();
        let chart = assemble_chart(&base, &conn, &data).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let p = sample_domain_point(&base, &conn, &data, 0.05, &mut rng);
            let g = chart.metric(&p);
            for row in 0..2 {
                for col in 2..4 {
                    assert_eq!(g[(row, col)], 0.0);
                }
            }
        }
    }

    #[test]
    fn metric_is_positive_definite_across_the_domain() {
        let (base, conn, data) = case_iii_setup();
        let chart = assemble_chart(&base, &conn, &data).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let p = sample_domain_point(&base, &conn, &data, 0.0, &mut rng);
            assert!(chart.in_domain(&p), "sampled point left the domain: {p:?}");
            let g = chart.metric(&p);
            assert!(
                nalgebra::Cholesky::new(g).is_some(),
                "metric not positive definite at {p:?}"
            );
        }
    }

    #[test]
    fn fiber_norms_and_gradient_law_hold() {
        let (base, conn, data) = case_iii_setup();
        let chart = assemble_chart(&base, &conn, &data).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let p = sample_domain_point(&base, &conn, &data, 0.1, &mut rng);
            let report = verify_fiber_geometry(&chart, &data, &p, DEFAULT_FD_STEP).unwrap();
            assert!(report.all_pass(), "{:?}", report.failures());
        }
    }

    #[test]
    fn structure_equations_hold_on_a_curved_configuration() {
        let (base, conn, data) = case_iii_setup();
        let chart = assemble_chart(&base, &conn, &data).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..2 {
            let p = sample_domain_point(&base, &conn, &data, 0.15, &mut rng);
            let report =
                check_structure_equations(&chart, &base, &conn, &data, &p, DEFAULT_FD_STEP)
                    .unwrap();
            assert!(report.all_pass(), "{:?}", report.failures());
        }
    }

    #[test]
    fn structure_equations_hold_in_the_product_case() {
        let (base, conn, data) = case_i_setup();
        let chart = assemble_chart(&base, &conn, &data).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let p = sample_domain_point(&base, &conn, &data, 0.15, &mut rng);
        let report =
            check_structure_equations(&chart, &base, &conn, &data, &p, DEFAULT_FD_STEP).unwrap();
        assert!(report.all_pass(), "{:?}", report.failures());
    }

    #[test]
    fn assembly_rejects_mismatched_inputs() {
        let (base, _conn, data) = case_iii_setup();
        let wrong_conn = connection_form(&base, Eps::Minus, -1.0);
        assert!(matches!(
            assemble_chart(&base, &wrong_conn, &data),
            Err(BundleError::ParameterDomain(_))
        ));
    }

    #[test]
    fn domain_probe_excludes_fiber_disc_and_tau_window() {
        let (base, conn, data) = case_iii_setup();
        let chart = assemble_chart(&base, &conn, &data).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let p = sample_domain_point(&base, &conn, &data, 0.1, &mut rng);
        // Shrinking z into the excluded disc leaves the domain.
        let mut near_zero = p.clone();
        near_zero[2] = 1e-4;
        near_zero[3] = 0.0;
        assert!(!chart.in_domain(&near_zero));
        // Scaling z far beyond the window leaves the τ-interval image.
        let mut far = p.clone();
        far[2] *= 50.0;
        far[3] *= 50.0;
        assert!(!chart.in_domain(&far));
    }
}
