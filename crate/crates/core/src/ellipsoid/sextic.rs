//! The two real homogeneous sextics cutting out the umbilical variety of a
//! generic ellipsoid, written in X = iϱ_z², Y = iϱ_w².
//!
//! On M the displayed pair (Re, Im) equals −J⁵·𝒫 exactly, so the displays
//! carry the opposite sign of 𝒫. [`sextic_forms`] returns the displays with
//! that sign removed (re_s + i·im_s = J⁵𝒫 on M); [`displayed_sextics`]
//! keeps them verbatim.

use super::EllipsoidParams;
use crate::ellipsoid::roots::{bracketed_root, eval_cubic};
use crate::error::{Error, Result};
use crate::scalar::{ComplexScalar, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SexticForms {
    pub re_s: f64,
    pub im_s: f64,
}

/// P(a, b, X, Y) with |X|, |Y| supplied (they are polynomial: |X| = |ϱ_z|²).
fn p_form<S: ComplexScalar>(a: f64, b: f64, x: S, y: S, ax: S, ay: S) -> S {
    let (a2, b2) = (a * a, b * b);
    let ax2 = ax * ax;
    ax2 * x.im_part().scale(0.5 * a * (b2 + 4.0))
        + (x * x * y.conj()).im_part().scale(2.5 * a2 * b)
        - (ax2 * ax).scale(b2)
        + (ax * ay * x.im_part()).scale(4.0 * a * (1.0 - b2))
        + (ax2 * ay).scale(4.0 * a2 + 3.0 * b2)
        - (ax * (x * y.conj()).re_part()).scale(10.0 * a * b)
        + (ax2 * y.im_part()).scale(0.5 * b * (4.0 + a2 + 5.0 * b2))
}

/// The displayed (Re 𝒫, Im 𝒫) sextic pair as functions of X and Y.
pub fn displayed_xy<S: ComplexScalar>(a: f64, b: f64, x: S, y: S, ax: S, ay: S) -> (S, S) {
    let (a2, b2) = (a * a, b * b);
    let re = p_form(a, b, x, y, ax, ay) + p_form(b, a, y, x, ay, ax);
    let (rx, ry) = (x.re_part(), y.re_part());
    let axy = ax * ay;
    let im = (ax * ax * rx).scale(0.5 * a * (b2 - 4.0))
        + (ay * ay * ry).scale(0.5 * b * (a2 - 4.0))
        + (x * x * y.conj()).re_part().scale(2.5 * a2 * b)
        + (y * y * x.conj()).re_part().scale(2.5 * a * b2)
        - (axy * rx).scale(4.0 * a * (b2 + 1.0))
        - (axy * ry).scale(4.0 * b * (a2 + 1.0))
        + (ax * ax * ry).scale(0.5 * b * (a2 + 5.0 * b2 - 4.0))
        + (ay * ay * rx).scale(0.5 * a * (b2 + 5.0 * a2 - 4.0));
    (re, im)
}

/// Displayed sextics at (z, w), generic so dual numbers give exact
/// Jacobians.
pub fn displayed_generic<S: ComplexScalar>(z: S, w: S, a: f64, b: f64) -> (S, S) {
    let rz = z.conj() + z.scale(a);
    let rw = w.conj() + w.scale(b);
    let x = S::i() * rz * rz;
    let y = S::i() * rw * rw;
    displayed_xy(a, b, x, y, rz.abs_sqr(), rw.abs_sqr())
}

/// Oriented sextics (J⁵𝒫 on M) at (z, w).
pub fn sextic_generic<S: ComplexScalar>(z: S, w: S, a: f64, b: f64) -> (S, S) {
    let (re, im) = displayed_generic(z, w, a, b);
    (-re, -im)
}

fn real_point(x: f64, y: f64, u: f64, v: f64) -> (C64, C64) {
    (C64::new(x, y), C64::new(u, v))
}

/// The displayed sextics, verbatim.
pub fn displayed_sextics(x: f64, y: f64, u: f64, v: f64, params: &EllipsoidParams) -> SexticForms {
    let (z, w) = real_point(x, y, u, v);
    let (re, im) = displayed_generic(z, w, params.a(), params.b());
    SexticForms { re_s: re.re, im_s: im.re }
}

/// Sextics oriented to agree in sign with (Re 𝒫, Im 𝒫).
pub fn sextic_forms(x: f64, y: f64, u: f64, v: f64, params: &EllipsoidParams) -> SexticForms {
    let s = displayed_sextics(x, y, u, v, params);
    SexticForms {
        re_s: -s.re_s,
        im_s: -s.im_s,
    }
}

/// The displayed Re-sextic restricted to X = iτ, Y = i.
///
/// Since |X| = |τ| this is a cubic on each half-line; these are its
/// coefficients (highest degree first) in τ for τ ≥ 0 and τ ≤ 0.
pub fn case43_branch_cubics(params: &EllipsoidParams) -> ([f64; 4], [f64; 4]) {
    let (a, b) = (params.a(), params.b());
    let (a2, b2) = (a * a, b * b);
    let k0 = 0.5 * b * (a2 + 4.0) - a2;
    let pos = [
        0.5 * a * (b2 + 4.0) - b2,
        2.5 * a2 * b + 4.0 * a * (1.0 - b2) + 4.0 * a2 + 3.0 * b2 - 10.0 * a * b
            + 0.5 * b * (4.0 + a2 + 5.0 * b2),
        2.5 * a * b2 + 4.0 * b * (1.0 - a2) + 4.0 * b2 + 3.0 * a2 - 10.0 * a * b
            + 0.5 * a * (4.0 + b2 + 5.0 * a2),
        k0,
    ];
    let m = case43_cubic(params);
    // τ = −m
    let neg = [-m[0], m[1], -m[2], m[3]];
    debug_assert_eq!(m[3], k0);
    (pos, neg)
}

/// The restricted Re-sextic as a cubic in m = −τ > 0, where the root lies
/// (z imaginary, w real on the seed plane).
pub fn case43_cubic(params: &EllipsoidParams) -> [f64; 4] {
    let (a, b) = (params.a(), params.b());
    let (a2, b2) = (a * a, b * b);
    [
        -0.5 * a * (b2 + 4.0) - b2,
        2.5 * a2 * b - 4.0 * a * (1.0 - b2) + 4.0 * a2 + 3.0 * b2 + 10.0 * a * b
            + 0.5 * b * (4.0 + a2 + 5.0 * b2),
        -2.5 * a * b2 + 4.0 * b * (1.0 - a2) + 4.0 * b2 + 3.0 * a2 + 10.0 * a * b
            - 0.5 * a * (4.0 + b2 + 5.0 * a2),
        0.5 * b * (a2 + 4.0) - a2,
    ]
}

/// Value of the restricted Re-sextic at X = iτ, Y = i.
pub fn case43_restricted(params: &EllipsoidParams, tau: f64) -> f64 {
    let (pos, neg) = case43_branch_cubics(params);
    if tau >= 0.0 {
        eval_cubic(pos, tau)
    } else {
        eval_cubic(neg, tau)
    }
}

/// Log-spaced sample of the real line, symmetric about 0, ascending.
fn signed_log_grid() -> Vec<f64> {
    let per_decade = 200;
    let decades = 12;
    let mut pos: Vec<f64> = (0..=per_decade * decades)
        .map(|k| 10f64.powf(-6.0 + k as f64 / per_decade as f64))
        .collect();
    pos.dedup();
    let mut grid: Vec<f64> = pos.iter().rev().map(|x| -x).collect();
    grid.push(0.0);
    grid.extend(pos);
    grid
}

/// The unique real root τ* of τ ↦ ReSextic(X = iτ, Y = i).
///
/// Uniqueness is checked by counting sign changes over a log-spaced grid
/// of ℝ; the root is then polished on its branch cubic.
pub fn case43_cubic_root(params: &EllipsoidParams) -> Result<f64> {
    let (a, b) = (params.a(), params.b());
    if !(0.0 < b && b < a) {
        return Err(Error::InvalidParams(format!(
            "the seed cubic needs 0 < b < a < 1, got a = {a}, b = {b}"
        )));
    }
    let grid = signed_log_grid();
    let vals: Vec<f64> = grid.iter().map(|&t| case43_restricted(params, t)).collect();
    let mut brackets = Vec::new();
    for k in 0..grid.len() - 1 {
        if vals[k] == 0.0 {
            brackets.push((grid[k], grid[k]));
        } else if vals[k].signum() != vals[k + 1].signum() && vals[k + 1] != 0.0 {
            brackets.push((grid[k], grid[k + 1]));
        }
    }
    if brackets.len() != 1 {
        return Err(Error::RootDegeneracy(format!(
            "{} sign changes of the restricted sextic on the real line",
            brackets.len()
        )));
    }
    let (lo, hi) = brackets[0];
    if lo == hi {
        return Ok(lo);
    }
    let (pos, neg) = case43_branch_cubics(params);
    let branch = if hi <= 0.0 { neg } else { pos };
    bracketed_root(branch, lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, b: f64) -> EllipsoidParams {
        EllipsoidParams::new(a, b).unwrap()
    }

    #[test]
    fn homogeneity_degree_six() {
        let p = params(0.5, 0.2);
        let s1 = sextic_forms(0.3, -0.2, 0.5, 0.1, &p);
        let s2 = sextic_forms(0.6, -0.4, 1.0, 0.2, &p);
        assert!((s2.re_s - 64.0 * s1.re_s).abs() <= 1e-12 * s2.re_s.abs());
        assert!((s2.im_s - 64.0 * s1.im_s).abs() <= 1e-12 * s2.im_s.abs());
    }

    #[test]
    fn imaginary_axis_kills_im_sextic() {
        // z imaginary and w real give ϱ_z² < 0 < ϱ_w², so Re X = Re Y = 0.
        let p = params(0.5, 0.2);
        assert_eq!(sextic_forms(0.0, 0.7, 0.3, 0.0, &p).im_s, 0.0);
        assert_eq!(sextic_forms(0.4, 0.0, 0.0, -0.2, &p).im_s, 0.0);
    }

    #[test]
    fn branch_cubics_match_direct_evaluation() {
        let p = params(0.5, 0.2);
        for &tau in &[-3.0, -1.2, -0.4, 0.0, 0.3, 2.5] {
            let x = C64::new(0.0, tau);
            let y = C64::new(0.0, 1.0);
            let (re, _) = displayed_xy(0.5, 0.2, x, y, C64::new(tau.abs(), 0.0), C64::new(1.0, 0.0));
            assert!((re.re - case43_restricted(&p, tau)).abs() < 1e-13);
        }
    }

    #[test]
    fn seed_cubic_root() {
        let p = params(0.5, 0.2);
        for (c, want) in case43_cubic(&p).iter().zip([-1.05, 0.77, 1.1375, 0.175]) {
            assert!((c - want).abs() < 1e-14);
        }
        let tau = case43_cubic_root(&p).unwrap();
        assert!(tau < 0.0);
        // numpy.roots on the m-cubic: 1.51884305
        assert!((tau + 1.51884305).abs() < 1e-7);
        let c = case43_cubic(&p);
        let scale = c.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        assert!(eval_cubic(c, -tau).abs() <= 1e-14 * scale);
    }

    #[test]
    fn seed_cubic_rejects_special_parameters() {
        assert!(case43_cubic_root(&params(0.5, 0.0)).is_err());
        assert!(case43_cubic_root(&params(0.5, 0.5)).is_err());
    }
}
