//! Numerical machinery for sharp Poincaré-type gradient estimates on the
//! Hamming cube and their duality with dyadic square-function estimates.
//!
//! The library is organized around a handful of objects:
//!
//! * [`specfun`] — the even Hermite-equation solution
//!   `N_α(x) = ₁F₁(−α/2, 1/2, x²/2)`, its derivatives, and its smallest
//!   positive zero `s_α`, plus Hermite polynomials and a scalar Γ.
//! * [`bellman`] — the concave profile `u_α`, the homogeneous Bellman
//!   function `U(p,q) = |q|^α u_α(p/|q|)`, and its pointwise inequalities
//!   (obstacle, main inequality, convexity in `t = q²`, heat residual).
//! * [`duality`] — the min–sup transform
//!   `M(x,y) = min_{q≤0} sup_p (px + qy + U(p,q))` computed by a robust
//!   1-D convex/concave saddle solver, together with the closed-form dual
//!   pairs (`Re(x+iy)^{3/2}` / cubic, `x ln x − y²/2x` / exponential) and
//!   finite-difference Monge–Ampère checks.
//! * [`cube`] — functions on `{−1,1}^n`: discrete gradients, moment
//!   inequalities, Rademacher projections, best-constant searches, and the
//!   discrete surface measure `σ(p)`.
//! * [`dyadic`] — dyadic martingales on `[0,1]`, the square function
//!   `S(g)`, and the associated master/Chang–Wilson–Wolff/Davis checks.
//! * [`sweeps`], [`tables`] — deterministic grid and Monte-Carlo drivers
//!   used by the acceptance suite and the `cubesq` CLI.
//!
//! Sweeps run in parallel through [rayon] when the `parallel` feature
//! (default) is enabled; disabling it yields a dependency-free sequential
//! build with identical results.

pub mod bellman;
pub mod cube;
pub mod duality;
pub mod dyadic;
pub mod parallel;
pub mod report;
pub mod specfun;
pub mod sweeps;
pub mod tables;

/// Errors shared across the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// The hypergeometric series did not meet its tail tolerance within the
    /// configured term budget. Carries the partial sum reached.
    #[error("series for N_{alpha}({x}) did not converge within {max_terms} terms (partial sum {partial})")]
    SeriesTruncation {
        alpha: f64,
        x: f64,
        max_terms: usize,
        partial: f64,
    },
    /// No sign change of `N_α` was found below the scan limit.
    #[error("no zero of N_{alpha} found on (0, {scan_limit}]")]
    ZeroNotFound { alpha: f64, scan_limit: f64 },
    /// Invalid argument for the Γ function.
    #[error("gamma function requires x > 0, got {x}")]
    GammaDomain { x: f64 },
    /// A parameter violated a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Bracket expansion exceeded its cap; the optimized direction is not
    /// coercive at this point.
    #[error("coercivity violation while optimizing over {axis}: bracket half-width exceeded {cap:e}")]
    CoercivityViolation { axis: &'static str, cap: f64 },
    /// The sampled values contradict concavity/convexity of the objective.
    #[error("convexity violation while optimizing over {axis} near {location}")]
    ConvexityViolation { axis: &'static str, location: f64 },
    /// Second derivatives of the Bellman function jump across `|p|/q = s_α`;
    /// residual checks refuse to evaluate within a margin of the seam.
    #[error("point too close to the C¹ seam: |p|/sqrt(t) = {z} vs s = {s}")]
    SeamProximity { z: f64, s: f64 },
    /// Exhaustive or double-enumeration routine called above its cap.
    #[error("dimension {n} exceeds the cap {cap} for this operation")]
    DimensionCap { n: usize, cap: usize },
    /// Axis index outside `0..n`.
    #[error("axis {j} out of range for dimension {n}")]
    AxisOutOfRange { j: usize, n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
