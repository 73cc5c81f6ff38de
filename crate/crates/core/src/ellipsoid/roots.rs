//! Positive roots of real cubics by bisection-safeguarded Newton.

use crate::error::{Error, Result};

/// c3 s³ + c2 s² + c1 s + c0 by Horner's rule.
pub fn eval_cubic(c: [f64; 4], s: f64) -> f64 {
    ((c[0] * s + c[1]) * s + c[2]) * s + c[3]
}

fn eval_cubic_derivative(c: [f64; 4], s: f64) -> f64 {
    (3.0 * c[0] * s + 2.0 * c[1]) * s + c[2]
}

/// Number of sign changes in the coefficient sequence, zeros skipped.
pub fn descartes_sign_changes(c: [f64; 4]) -> usize {
    let signs: Vec<f64> = c.iter().copied().filter(|x| *x != 0.0).map(f64::signum).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Root of a cubic inside a sign-changing bracket [lo, hi].
///
/// Newton steps are taken when they stay inside the current bracket and
/// shrink the residual; otherwise the step falls back to bisection.
pub fn bracketed_root(c: [f64; 4], lo: f64, hi: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let mut flo = eval_cubic(c, lo);
    let fhi = eval_cubic(c, hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoPositiveRoot);
    }
    let scale = c.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let tol = 1e-14 * scale;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = eval_cubic(c, x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        let d = eval_cubic_derivative(c, x);
        let newton = x - fx / d;
        let next = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 2.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            if fx.abs() <= tol {
                return Ok(x);
            }
            // Newton has stalled on a flat residual: finish by bisection.
            x = 0.5 * (lo + hi);
            if hi - lo <= 2.0 * f64::EPSILON * hi.abs() {
                return Ok(x);
            }
            continue;
        }
        x = next;
    }
    let fx = eval_cubic(c, x);
    if fx.abs() <= tol {
        Ok(x)
    } else {
        Err(Error::RootDegeneracy(format!(
            "no convergence in [{lo}, {hi}], residual {fx:e}"
        )))
    }
}

/// The unique positive root of c3 s³ + c2 s² + c1 s + c0.
///
/// Uniqueness is certified by Descartes' rule (exactly one sign change);
/// the bracket [0, hi] is found by doubling hi from 1.
pub fn cubic_unique_positive_root(c3: f64, c2: f64, c1: f64, c0: f64) -> Result<f64> {
    let c = [c3, c2, c1, c0];
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("cubic coefficient"));
    }
    match descartes_sign_changes(c) {
        0 => return Err(Error::NoPositiveRoot),
        1 => {}
        n => {
            return Err(Error::RootDegeneracy(format!(
                "{n} coefficient sign changes; a unique positive root is not guaranteed"
            )))
        }
    }
    if c0 == 0.0 {
        // s = 0 is a root; the positive one belongs to the quadratic factor.
        return Err(Error::RootDegeneracy("constant term vanishes".into()));
    }
    let f0 = c0.signum();
    let mut hi = 1.0_f64;
    let mut guard = 0;
    while eval_cubic(c, hi).signum() == f0 {
        hi *= 2.0;
        guard += 1;
        if guard > 1100 || !hi.is_finite() {
            return Err(Error::NoPositiveRoot);
        }
    }
    bracketed_root(c, 0.0, hi)
}
