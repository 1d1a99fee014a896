//! The Davis-type Bellman function `U(p,q)` and its pointwise inequalities.
//!
//! For `α ≥ 2` let `s = s_α` and
//!
//! ```text
//! u_α(x) = c · N_α(x)        for |x| ≤ s,   c = −α s^{α−1} / N'_α(s),
//! u_α(x) = s^α − |x|^α       for |x| ≥ s,
//! U(p,q) = |q|^α u_α(p/|q|),  U(p,0) = −|p|^α.
//! ```
//!
//! `u_α` is `C¹`, even, and concave; `U` is positively homogeneous of degree
//! `α`. The verified contracts are the obstacle condition
//! `U(p,q) ≥ |q|^α s^α − |p|^α`, the main inequality
//! `2U(p,q) ≥ U(p+a, √(a²+q²)) + U(p−a, √(a²+q²))`, midpoint convexity of
//! `t ↦ U(p,√t)`, and the backward-heat residual sign pattern of
//! `ũ(p,t) = U(p,√t)`.

use crate::parallel::{self, GapStats};
use crate::report::{GridSpec, ViolationReport};
use crate::specfun::{self, SeriesConfig};
use crate::{Error, Result};

/// Relative margin around the `C¹`-only seam `|p|/√t = s_α` inside which
/// second-derivative checks refuse to evaluate.
pub const SEAM_MARGIN: f64 = 1e-3;

/// Bisection tolerance used when a context resolves `s_α`. Tight enough
/// that `α = 2` identities hold to ~1e-13 on |p|,|q| ≤ 3 grids.
const ZERO_TOL: f64 = 1e-14;

/// Validated parameter bundle for one `α`: the conjugate exponent, the zero
/// `s_α`, the matching normalization `c_norm`, and precomputed series
/// coefficients for the hot evaluation paths.
#[derive(Debug, Clone)]
pub struct AlphaContext {
    alpha: f64,
    beta: f64,
    s: f64,
    c_norm: f64,
    /// α is an exact small integer; enables `powi` fast paths.
    int_alpha: Option<i32>,
    /// Coefficients of N_α in t = x², valid for |x| ≤ s.
    coeffs: Vec<f64>,
    /// Coefficients of N_{α−2}, for the second-derivative identity.
    coeffs_shift: Vec<f64>,
}

impl AlphaContext {
    /// Context for the concave regime `α ≥ 2`.
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha >= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "AlphaContext::new requires alpha >= 2, got {alpha}; use relaxed() for Davis checks"
            )));
        }
        Self::build(alpha)
    }

    /// Relaxed constructor for `α ∈ (0, 2)`, used only by the Davis
    /// square-function checks. Concavity-dependent invariants do not apply;
    /// for `α ≤ 1` the conjugate exponent is reported as `+∞`.
    pub fn relaxed(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        Self::build(alpha)
    }

    fn build(alpha: f64) -> Result<Self> {
        let cfg = SeriesConfig::default();
        let s = specfun::smallest_zero(alpha, &cfg, ZERO_TOL)?;
        let at_s = specfun::eval_n(alpha, s, &cfg)?;
        if at_s.value.abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "zero of N_{alpha} not resolved: N({s}) = {}",
                at_s.value
            )));
        }
        if !(at_s.first < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "N'_{alpha}(s) = {} is not negative",
                at_s.first
            )));
        }
        let c_norm = -alpha * s.powf(alpha - 1.0) / at_s.first;
        let beta = if alpha > 1.0 {
            alpha / (alpha - 1.0)
        } else {
            f64::INFINITY
        };
        let int_alpha = if alpha.fract() == 0.0 && alpha <= 64.0 {
            Some(alpha as i32)
        } else {
            None
        };
        let radius = s * 1.0001;
        Ok(Self {
            alpha,
            beta,
            s,
            c_norm,
            int_alpha,
            coeffs: specfun::series_coeffs(alpha, radius),
            coeffs_shift: specfun::series_coeffs(alpha - 2.0, radius),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Conjugate exponent `β = α/(α−1)` (`+∞` for `α ≤ 1`).
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Smallest positive zero `s_α`.
    pub fn s(&self) -> f64 {
        self.s
    }

    /// Normalization `−α s^{α−1} / N'_α(s)`, which makes `u_α` match the
    /// outer branch `C¹`-smoothly at `s`.
    pub fn c_norm(&self) -> f64 {
        self.c_norm
    }

    #[inline]
    fn pow_alpha(&self, v: f64) -> f64 {
        match self.int_alpha {
            Some(k) => v.powi(k),
            None => v.powf(self.alpha),
        }
    }

    #[inline]
    fn n_val_deriv(&self, x: f64) -> (f64, f64) {
        specfun::poly_val_deriv(&self.coeffs, x)
    }

    #[inline]
    fn n_shift(&self, x: f64) -> f64 {
        specfun::poly_val_deriv(&self.coeffs_shift, x).0
    }
}

/// The concave profile `u_α(x)`.
pub fn u_alpha(ctx: &AlphaContext, x: f64) -> f64 {
    let z = x.abs();
    if z >= ctx.s {
        ctx.pow_alpha(ctx.s) - ctx.pow_alpha(z)
    } else {
        ctx.c_norm * ctx.n_val_deriv(z).0
    }
}

/// Derivative `u'_α(x)` from the closed branch formulas.
pub fn u_alpha_deriv(ctx: &AlphaContext, x: f64) -> f64 {
    let z = x.abs();
    let d = if z >= ctx.s {
        -ctx.alpha * ctx.pow_alpha(z) / z // −α z^{α−1}
    } else {
        ctx.c_norm * ctx.n_val_deriv(z).1
    };
    if x < 0.0 {
        -d
    } else {
        d
    }
}

/// `U(p,q) = |q|^α u_α(p/|q|)`, with `U(p,0) = −|p|^α`.
///
/// On `|p| ≥ s|q|` (including `q = 0`) this is evaluated directly as
/// `s^α|q|^α − |p|^α`; the seam value agrees with the inner branch.
pub fn u_fn(ctx: &AlphaContext, p: f64, q: f64) -> f64 {
    let pa = p.abs();
    let qa = q.abs();
    if pa >= ctx.s * qa {
        ctx.pow_alpha(ctx.s * qa) - ctx.pow_alpha(pa)
    } else {
        ctx.c_norm * ctx.pow_alpha(qa) * ctx.n_val_deriv(pa / qa).0
    }
}

/// Gap of the main inequality:
/// `2U(p,q) − U(p+a, √(a²+q²)) − U(p−a, √(a²+q²))`. Contract: `≥ 0`.
pub fn main_inequality_gap(ctx: &AlphaContext, p: f64, q: f64, a: f64) -> f64 {
    let r = (a * a + q * q).sqrt();
    2.0 * u_fn(ctx, p, q) - u_fn(ctx, p + a, r) - u_fn(ctx, p - a, r)
}

/// Gap of the obstacle condition: `U(p,q) − (|q|^α s^α − |p|^α)`.
/// Contract: `≥ 0`, with equality at `q = 0` and on `|p| ≥ s|q|`.
pub fn obstacle_gap(ctx: &AlphaContext, p: f64, q: f64) -> f64 {
    u_fn(ctx, p, q) - (ctx.pow_alpha(ctx.s * q.abs()) - ctx.pow_alpha(p.abs()))
}

/// Midpoint-convexity gap of `t ↦ U(p,√t)`:
/// `U(p,√t₁)/2 + U(p,√t₂)/2 − U(p,√((t₁+t₂)/2))`. Contract: `≥ 0`.
///
/// `t = 0` is admitted (the map extends continuously with `U(p,0) = −|p|^α`).
pub fn convexity_in_t_gap(ctx: &AlphaContext, p: f64, t1: f64, t2: f64) -> Result<f64> {
    if t1 < 0.0 || t2 < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "convexity check needs t1, t2 >= 0, got ({t1}, {t2})"
        )));
    }
    Ok(0.5 * u_fn(ctx, p, t1.sqrt()) + 0.5 * u_fn(ctx, p, t2.sqrt())
        - u_fn(ctx, p, (0.5 * (t1 + t2)).sqrt()))
}

/// Backward-heat residual `ũ_t + ũ_pp/2` of `ũ(p,t) = U(p,√t)`, from the
/// analytic branch derivatives.
///
/// Inside (`|p| < s√t`) the Hermite equation forces the residual to vanish;
/// outside it is `≤ 0`. Points within [`SEAM_MARGIN`] (relative) of the
/// seam are rejected: `ũ_pp` jumps there.
pub fn heat_residual(ctx: &AlphaContext, p: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    let sqrt_t = t.sqrt();
    let z = p.abs() / sqrt_t;
    if (z - ctx.s).abs() < SEAM_MARGIN * ctx.s {
        return Err(Error::SeamProximity { z, s: ctx.s });
    }
    let alpha = ctx.alpha;
    // t^{α/2−1} without powf for integer α: (√t)^{α−2}.
    let t_pow = sqrt_t.powf(alpha - 2.0);
    if z < ctx.s {
        let (n, dn) = ctx.n_val_deriv(z);
        let n2 = -alpha * ctx.n_shift(z);
        Ok(0.5 * ctx.c_norm * t_pow * (alpha * n - z * dn + n2))
    } else {
        let pa = p.abs();
        Ok(0.5 * alpha * (ctx.pow_alpha(ctx.s) * t_pow - (alpha - 1.0) * pa.powf(alpha - 2.0)))
    }
}

/// Sweeps the obstacle (op 0), main-inequality (op 1), and `t`-convexity
/// (op 2) gaps over a `(p, q, a)` grid; the convexity check uses
/// `(t₁, t₂) = (q², a²)`.
///
/// Cells are visited in [`GridSpec`] order; the reduction is exact, and the
/// worst location is tie-broken by lowest cell index then op, so the report
/// is deterministic under any parallel split.
pub fn verify_bellman_grid(ctx: &AlphaContext, grid: &GridSpec, tol: f64) -> Result<ViolationReport> {
    if grid.axes().len() != 3 {
        return Err(Error::InvalidParameter(format!(
            "bellman sweep expects a (p, q, a) grid, got {} axes",
            grid.axes().len()
        )));
    }
    let stats = parallel::scan(grid.cells(), tol, |i, st: &mut GapStats| {
        let c = grid.coords(i);
        let (p, q, a) = (c[0], c[1], c[2]);
        st.record(obstacle_gap(ctx, p, q), i, 0);
        st.record(main_inequality_gap(ctx, p, q, a), i, 1);
        // t-arguments are squares, so the domain check cannot fail.
        st.record(convexity_in_t_gap(ctx, p, q * q, a * a).unwrap(), i, 2);
    });
    Ok(ViolationReport {
        worst_gap: stats.worst_gap,
        worst_location: grid.coords(stats.worst_item.min(grid.cells() - 1)),
        n_checked: stats.n_checked,
        n_violations: stats.n_violations,
        tol,
    })
}
