//! The septuple ODE system, its closed-form solution families, conserved
//! integrals, and numerical cross-validation.
//!
//! For a Kähler metric of complex dimension `m ≥ 2` with a special
//! Kähler-Ricci potential `τ`, seven scalar quantities become functions of
//! `τ` alone:
//!
//! | symbol | meaning                              | field       |
//! |--------|--------------------------------------|-------------|
//! | Q      | squared gradient norm g(∇τ, ∇τ)      | `grad_sq`   |
//! | Y      | Laplacian Δτ                         | `laplacian` |
//! | s      | scalar curvature                     | `scal`      |
//! | φ      | Hessian eigenvalue on H              | `hess_h`    |
//! | ψ      | Hessian eigenvalue on V              | `hess_v`    |
//! | λ      | Ricci eigenvalue on H (times 1)      | `ric_h`     |
//! | μ      | Ricci eigenvalue on V                | `ric_v`     |
//!
//! (V is the span of ∇τ and J∇τ, H its orthogonal complement.) When the
//! conformal rescaling g̃ = g/τ² is Einstein, the seven functions satisfy a
//! first-order system with three conserved integrals `c`, `κ`, `η`, and the
//! solutions fall into three families:
//!
//! - **Case I** (φ ≡ 0): explicit polynomials in τ driven by parameters
//!   (K, α, η).
//! - **Case II** (φ ≠ 0, c = 0): an Euler equation; σ = φ is spanned by
//!   1, τ^m, 1/τ with parameters (K, α, η).
//! - **Case III** (φ ≠ 0, c ≠ 0): σ comes from the special functions E, F
//!   via `Q = (t−1)[A + B·E(t) + C·F(t)]`, t = τ/c.
//!
//! Everything here is exact rational-function algebra except the
//! [`ode`] submodule, which integrates the same system in floating point
//! and measures how well the closed forms and the conserved integrals are
//! reproduced — a two-sided consistency check between the algebra and an
//! independent numerical method.

mod checks;
mod families;
pub mod ode;

pub use checks::{check_system, check_third_order, integrals, IntegralValues};
pub use families::{
    build_case_i, build_case_ii, build_case_iii, reconstruct_from_sigma,
};
pub use ode::{ode_cross_check, ode_integrate, CrossCheckStats, Trajectory};

use thiserror::Error;

use crate::exact::{ExactError, RatFunc, Rational};

/// The seven closed-form functions of τ for one solution, plus the
/// dimension they live in. All entries are exact rational functions.
#[derive(Debug, Clone)]
pub struct SeptupleFns {
    /// Complex dimension m ≥ 2.
    pub m: u32,
    /// Q(τ) = g(∇τ, ∇τ).
    pub grad_sq: RatFunc,
    /// Y(τ) = Δτ.
    pub laplacian: RatFunc,
    /// s(τ), the scalar curvature.
    pub scal: RatFunc,
    /// φ(τ), the Hessian eigenvalue on the horizontal distribution H.
    pub hess_h: RatFunc,
    /// ψ(τ), the Hessian eigenvalue on the vertical distribution V.
    pub hess_v: RatFunc,
    /// λ(τ), the Ricci eigenvalue on H.
    pub ric_h: RatFunc,
    /// μ(τ), the Ricci eigenvalue on V.
    pub ric_v: RatFunc,
}

impl SeptupleFns {
    /// Evaluates all seven functions at a floating-point τ, in the fixed
    /// order Q, Y, s, φ, ψ, λ, μ used by the ODE state vector.
    pub fn eval_f64(&self, tau: f64) -> [f64; 7] {
        [
            self.grad_sq.eval_f64(tau),
            self.laplacian.eval_f64(tau),
            self.scal.eval_f64(tau),
            self.hess_h.eval_f64(tau),
            self.hess_v.eval_f64(tau),
            self.ric_h.eval_f64(tau),
            self.ric_v.eval_f64(tau),
        ]
    }

    /// Evaluates all seven functions exactly.
    ///
    /// # Errors
    ///
    /// [`ExactError::PoleEvaluation`] if τ is a pole of any entry.
    pub fn eval(&self, tau: &Rational) -> Result<[Rational; 7], ExactError> {
        Ok([
            self.grad_sq.eval(tau)?,
            self.laplacian.eval(tau)?,
            self.scal.eval(tau)?,
            self.hess_h.eval(tau)?,
            self.hess_v.eval(tau)?,
            self.ric_h.eval(tau)?,
            self.ric_v.eval(tau)?,
        ])
    }
}

/// Display labels for the seven state components in state-vector order.
pub const COMPONENT_NAMES: [&str; 7] = ["Q", "Y", "s", "phi", "psi", "lambda", "mu"];

/// Parameter blocks for the three solution families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseParams {
    /// Case I (φ ≡ 0): needs |K| + |α| + |η| > 0.
    I {
        m: u32,
        k: Rational,
        alpha: Rational,
        eta: Rational,
    },
    /// Case II (φ ≠ 0, c = 0): needs |K| + |α| + |η| > 0.
    II {
        m: u32,
        k: Rational,
        alpha: Rational,
        eta: Rational,
    },
    /// Case III (φ ≠ 0, c ≠ 0): `Q = (t−1)[A + B·E(t) + C·F(t)]`, t = τ/c;
    /// needs c ≠ 0 and |A| + |B| + |C| > 0.
    III {
        m: u32,
        coef_a: Rational,
        coef_b: Rational,
        coef_c: Rational,
        c: Rational,
    },
}

impl CaseParams {
    pub fn m(&self) -> u32 {
        match self {
            CaseParams::I { m, .. }
            | CaseParams::II { m, .. }
            | CaseParams::III { m, .. } => *m,
        }
    }

    /// Builds the closed-form septuple for these parameters.
    pub fn build(&self) -> Result<SeptupleFns, SeptupleError> {
        match self {
            CaseParams::I { m, k, alpha, eta } => build_case_i(*m, k, alpha, eta),
            CaseParams::II { m, k, alpha, eta } => build_case_ii(*m, k, alpha, eta),
            CaseParams::III {
                m,
                coef_a,
                coef_b,
                coef_c,
                c,
            } => build_case_iii(*m, coef_a, coef_b, coef_c, c),
        }
    }

    /// Short label for reports: "i", "ii", "iii".
    pub fn case_label(&self) -> &'static str {
        match self {
            CaseParams::I { .. } => "i",
            CaseParams::II { .. } => "ii",
            CaseParams::III { .. } => "iii",
        }
    }
}

/// Sign ε ∈ {−1, 0, +1} attached to a solution interval: the sign of φ
/// there (0 exactly in case I, where φ vanishes identically).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eps {
    Minus,
    Zero,
    Plus,
}

impl Eps {
    pub fn as_i64(self) -> i64 {
        match self {
            Eps::Minus => -1,
            Eps::Zero => 0,
            Eps::Plus => 1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.as_i64() as f64
    }

    pub fn as_rational(self) -> Rational {
        crate::exact::rat_int(self.as_i64())
    }
}

impl std::fmt::Display for Eps {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Eps::Minus => write!(f, "-1"),
            Eps::Zero => write!(f, "0"),
            Eps::Plus => write!(f, "+1"),
        }
    }
}

/// Errors from septuple construction and integration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeptupleError {
    /// The solution families are defined for complex dimension m ≥ 2.
    #[error("complex dimension m must be at least 2, got {0}")]
    InvalidDimension(u32),
    /// Parameter combination with no solution content (all structure
    /// constants zero).
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    /// Case III needs c ≠ 0 (c = 0 is case II's Euler equation).
    #[error("case III requires c != 0")]
    ZeroC,
    /// An operation requiring σ = φ to be a nonzero function received the
    /// zero function.
    #[error("sigma is identically zero")]
    ZeroSigma,
    /// Numerical integration hit the floor on |Q| or |ψ−φ|.
    #[error("singularity at tau = {tau}: |{quantity}| = {value:e} below floor")]
    SingularityEncountered {
        tau: f64,
        quantity: &'static str,
        value: f64,
    },
    /// Exact-arithmetic failure propagated from below.
    #[error(transparent)]
    Exact(#[from] ExactError),
}
