//! Prime-counting analytics.
//!
//! [`li`] is the offset logarithmic integral Li(x) = ∫₂ˣ dt/ln t, the PNT
//! approximation the error-margin experiments measure π against. It is
//! evaluated twice by construction: an adaptive Simpson rule on the raw
//! integrand, and [`li_fixed_grid`], a composite Simpson rule on the
//! substituted integral ∫ eᵘ/u du over u = ln t. The two routes share no
//! code and must agree to [`crate::experiments::LI_AGREEMENT_REL_TOL`];
//! that agreement is one of the standing experiment checks.

use crate::classic;
use crate::error::{Error, Result};

/// Absolute tolerance driving the adaptive subdivision.
pub const QUAD_ABS_TOL: f64 = 1e-9;

/// Lower endpoint of the offset integral. Li(2) = 0 by definition and the
/// integrand is finite on [2, ∞), so no singularity handling is needed.
pub const LI_LOWER_BOUND: f64 = 2.0;

/// Panel count of the fixed-grid route. 2^16 panels hold the composite
/// Simpson error near h⁴ ~ 1e-13 relative across [10², 10⁸], two orders
/// below the agreement tolerance.
pub const FIXED_GRID_PANELS: usize = 1 << 16;

fn require_at_least(x: f64, least: f64, what: &str) -> Result<()> {
    // NaN fails this comparison too.
    if !(x >= least) {
        return Err(Error::domain(format!("{what} needs x >= {least}, got {x}")));
    }
    Ok(())
}

// Adaptive Simpson with the classic 1/15 Richardson acceptance test.
// Endpoint values are threaded through so each point is evaluated once.
fn adaptive_simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

fn simpson_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    adaptive_simpson(&f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Offset logarithmic integral Li(x) = ∫₂ˣ dt/ln t, adaptive route.
pub fn li(x: f64) -> Result<f64> {
    require_at_least(x, LI_LOWER_BOUND, "Li")?;
    Ok(simpson_adaptive(
        |t| 1.0 / t.ln(),
        LI_LOWER_BOUND,
        x,
        QUAD_ABS_TOL,
    ))
}

/// Li(x) by the independent fixed-grid route: substitute u = ln t, giving
/// ∫_{ln 2}^{ln x} eᵘ/u du, and apply composite Simpson on a uniform grid.
pub fn li_fixed_grid(x: f64) -> Result<f64> {
    require_at_least(x, LI_LOWER_BOUND, "Li")?;
    let a = LI_LOWER_BOUND.ln();
    let b = x.ln();
    if a == b {
        return Ok(0.0);
    }
    let g = |u: f64| u.exp() / u;
    let n = FIXED_GRID_PANELS; // even, as composite Simpson requires
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for k in 1..n {
        let gu = g(a + h * k as f64);
        if k % 2 == 1 {
            odd += gu;
        } else {
            even += gu;
        }
    }
    Ok(h / 3.0 * (g(a) + g(b) + 4.0 * odd + 2.0 * even))
}

/// The first-order PNT approximation x / ln x.
pub fn n_over_ln(x: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(Error::domain(format!(
            "x / ln x needs x > 1, got {x}"
        )));
    }
    Ok(x / x.ln())
}

/// One checkpoint of the π vs Li comparison.
///
/// `err` = π(n) − Li(n), `err_norm` = err / √n, and `err_bound` = √n·ln n
/// is the reference envelope; `flagged` records |err| > err_bound. Under
/// the Riemann hypothesis |err| stays within O(√n·ln n), so a flag at any
/// serious checkpoint means a computation bug rather than number theory.
#[derive(Clone, Debug, PartialEq)]
pub struct PntRow {
    pub n: u64,
    pub pi: u64,
    pub li: f64,
    pub n_over_ln: f64,
    pub err: f64,
    pub err_norm: f64,
    pub err_bound: f64,
    pub flagged: bool,
}

/// Builds the comparison table at the given checkpoints (strictly
/// increasing, each >= 3 so both approximations are defined). π comes from
/// one segmented-sieve pass over all checkpoints.
pub fn pnt_table(checkpoints: &[u64]) -> Result<Vec<PntRow>> {
    if let Some(&first) = checkpoints.first() {
        if first < 3 {
            return Err(Error::domain(format!(
                "pnt checkpoints start at 3, got {first}"
            )));
        }
    }
    let counts = classic::prime_counts_at(checkpoints)?;
    checkpoints
        .iter()
        .zip(counts)
        .map(|(&n, pi)| {
            let x = n as f64;
            let li_n = li(x)?;
            let err = pi as f64 - li_n;
            let err_norm = err / x.sqrt();
            let err_bound = x.sqrt() * x.ln();
            Ok(PntRow {
                n,
                pi,
                li: li_n,
                n_over_ln: n_over_ln(x)?,
                err,
                err_norm,
                err_bound,
                flagged: err.abs() > err_bound,
            })
        })
        .collect()
}
