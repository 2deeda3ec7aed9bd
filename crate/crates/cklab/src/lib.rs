//! A verification laboratory for conformally-Einstein Kähler metrics.
//!
//! The subject is a classical construction: a Kähler metric `g` of complex
//! dimension `m ≥ 2` carrying a distinguished potential function `τ` whose
//! gradient spans, together with its image under the complex structure, a
//! two-dimensional distribution along which both the Hessian of `τ` and the
//! Ricci tensor diagonalize. For such metrics the conformal rescaling
//! `g̃ = g/τ²` can be Einstein, and when it is, everything is governed by a
//! coupled system of ordinary differential equations in `τ` for seven scalar
//! functions. The solutions fall into three closed-form families, and each
//! solution can be realized geometrically as a metric on (an open subset of)
//! a holomorphic line bundle over a Kähler-Einstein base.
//!
//! This crate verifies the whole story twice over:
//!
//! - **Exactly** — the septuple ODE system, its conserved quantities, the
//!   closed-form solution families, the special functions `E`, `F`, `Ξ`, `P`
//!   and their web of identities are all checked in arbitrary-precision
//!   rational arithmetic ([`exact`], [`specfun`], [`septuple`]). A claimed
//!   identity passes only by normalizing to the canonical zero rational
//!   function; nothing is sampled.
//! - **Numerically** — metrics are assembled on explicit line-bundle charts
//!   ([`bundle`]) and certified by finite-difference curvature computation
//!   ([`geometry`]): the Kähler conditions, the Killing property of `J∇τ`,
//!   the two-eigenvalue block structure of Hessian and Ricci, the
//!   Levi-Civita structure equations of the fibration, and finally the
//!   Einstein property of `g̃ = g/τ²` with its scalar curvature pinned to the
//!   exact conserved quantity computed by the algebraic layer.
//!
//! The [`suites`] module packages these checks into runnable suites with a
//! common report format ([`report`]); the `cklab` binary exposes them on the
//! command line.

pub mod bundle;
pub mod config;
pub mod exact;
pub mod geometry;
pub mod report;
pub mod septuple;
pub mod specfun;
pub mod suites;
pub mod tol;

pub use exact::{Poly, RatFunc, Rational};
pub use report::{ReportEntry, VerificationReport};
