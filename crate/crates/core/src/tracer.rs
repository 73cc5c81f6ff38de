//! Continuation of the umbilical variety 𝒱 of a generic ellipsoid,
//! 0 < b < a < 1: the curve {ϱ = 0, re_s = 0, im_s = 0} in ℝ⁴.
//!
//! Seeds come from the plane Re X = Re Y = 0 (where im_s vanishes
//! identically and re_s reduces to a cubic) and from sign changes of both
//! sextics on an angular grid of S³. Each seed is traced by tangent
//! prediction along the kernel of the 3×4 Jacobian and Newton correction
//! in the hyperplane orthogonal to the predictor.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use rayon::prelude::*;

use crate::ambient::Point4;
use crate::ellipsoid::sextic::{case43_cubic_root, sextic_generic};
use crate::ellipsoid::{gamma_curve, Branch, EllipsoidParams, LocusCurve, DEFAULT_CURVE_SAMPLES};
use crate::error::{Error, Result};
use crate::scalar::{ComplexScalar, Dual, C64};

/// Relative volume of the Jacobian rows below which a vertex is singular.
pub const SINGULAR_TOL: f64 = 1e-8;

const SEED_BATCH: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceConfig {
    /// Angular resolution of the S³ seed grid, per angle.
    pub seed_grid: usize,
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    /// Largest arc-length predictor step.
    pub step_len: f64,
    /// Cap on vertices per traced component.
    pub max_vertices: usize,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            seed_grid: 16,
            newton_tol: 1e-12,
            max_newton_iters: 12,
            step_len: 0.01,
            max_vertices: 20_000,
        }
    }
}

impl TraceConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.newton_tol > 0.0 && self.newton_tol.is_finite()) {
            return Err(Error::InvalidConfig("newton_tol must be positive".into()));
        }
        if !(self.step_len > 0.0 && self.step_len.is_finite()) {
            return Err(Error::InvalidConfig("step_len must be positive".into()));
        }
        if self.seed_grid < 8 {
            return Err(Error::InvalidConfig("seed_grid must be at least 8".into()));
        }
        if self.max_newton_iters < 2 {
            return Err(Error::InvalidConfig("max_newton_iters must be at least 2".into()));
        }
        if self.max_vertices < 3 {
            return Err(Error::InvalidConfig("max_vertices must be at least 3".into()));
        }
        Ok(())
    }
}

/// The hypersurface the cone is intersected with. The sextics are
/// homogeneous, so tracing on the unit sphere and rescaling gives the same
/// set as tracing on the ellipsoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceSurface {
    Ellipsoid,
    UnitSphere,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracedVertex {
    pub point: Point4,
    /// |ϱ| on the ellipsoid, |‖p‖² − 1| on the unit sphere.
    pub rho_residual: f64,
    pub re_s: f64,
    pub im_s: f64,
    /// Distance to the 720-point discretization of γ₁ ∪ γ₂ (scaled onto
    /// the traced surface).
    pub dist_gamma: f64,
    pub singular: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TracedComponent {
    pub vertices: Vec<TracedVertex>,
    /// The last vertex connects back to the first.
    pub closed: bool,
}

impl TracedComponent {
    pub fn points(&self) -> Vec<Point4> {
        self.vertices.iter().map(|v| v.point).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TracedVariety {
    pub params: EllipsoidParams,
    pub surface: TraceSurface,
    pub components: Vec<TracedComponent>,
}

impl TracedVariety {
    pub fn vertices(&self) -> impl Iterator<Item = &TracedVertex> {
        self.components.iter().flat_map(|c| c.vertices.iter())
    }

    pub fn min_dist_gamma(&self) -> f64 {
        self.vertices().map(|v| v.dist_gamma).fold(f64::INFINITY, f64::min)
    }

    /// Largest of |ϱ| and the sextic residuals relative to 1 + ‖p‖⁶.
    pub fn max_residual(&self) -> f64 {
        self.vertices()
            .map(|v| {
                let scale = 1.0 + v.point.norm_sqr().powi(3);
                v.rho_residual.max(v.re_s.abs() / scale).max(v.im_s.abs() / scale)
            })
            .fold(0.0, f64::max)
    }

    pub fn to_locus_curves(&self) -> Vec<LocusCurve> {
        self.components
            .iter()
            .map(|c| LocusCurve::traced(self.params, c.vertices.clone()))
            .collect()
    }

    /// Every vertex radially rescaled onto the ellipsoid, residuals
    /// recomputed.
    pub fn scaled_to_ellipsoid(&self) -> Result<TracedVariety> {
        let sys = System::new(self.params, TraceSurface::Ellipsoid);
        let gamma = sys.gamma_samples();
        let components = self
            .components
            .iter()
            .map(|c| {
                let vertices = c
                    .vertices
                    .iter()
                    .map(|v| {
                        let p = scale_to_ellipsoid(v.point.to_real(), &self.params)?;
                        Ok(TracedVertex {
                            singular: v.singular,
                            ..sys.vertex(p, &gamma)
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(TracedComponent {
                    vertices,
                    closed: c.closed,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TracedVariety {
            params: self.params,
            surface: TraceSurface::Ellipsoid,
            components,
        })
    }

    /// Distance from q to the traced curves, with the nearest polyline
    /// point corrected back onto the variety in the hyperplane through q
    /// orthogonal to the local chord. Falls back to the chordal distance
    /// if the correction fails.
    pub fn refined_distance(&self, q: &Point4) -> f64 {
        let sys = System::new(self.params, self.surface);
        let mut best = f64::INFINITY;
        let mut foot = None;
        for c in &self.components {
            let pts = c.points();
            if let Some((d, i, j)) = nearest_segment(q, &pts, c.closed) {
                if d < best {
                    best = d;
                    foot = Some((pts[i], pts[j]));
                }
            }
        }
        let Some((p0, p1)) = foot else {
            return best;
        };
        let x0 = p0.to_real();
        let x1 = p1.to_real();
        let mut t = [0.0; 4];
        for k in 0..4 {
            t[k] = x1[k] - x0[k];
        }
        let n = norm4(&t);
        if n == 0.0 {
            return best;
        }
        t.iter_mut().for_each(|x| *x /= n);
        let target = q.to_real();
        // start from the chord point closest to q
        let s = (0..4).map(|k| (target[k] - x0[k]) * t[k]).sum::<f64>().clamp(0.0, n);
        let start: [f64; 4] = std::array::from_fn(|k| x0[k] + s * t[k]);
        match sys.correct(start, &t, &target, 30, 1e-14) {
            Some((x, _)) => {
                let d = Point4::from_real(x).dist(q);
                if d < best + 1e-12 {
                    d
                } else {
                    best
                }
            }
            None => best,
        }
    }
}

/// λd with λ > 0 on the ellipsoid: λ = 1/√Q(d), Q(d) = |z|² + |w|² + Re(az² + bw²).
pub fn scale_to_ellipsoid(d: [f64; 4], params: &EllipsoidParams) -> Result<Point4> {
    let p = Point4::from_real(d);
    if !p.is_finite() {
        return Err(Error::NonFinite("direction"));
    }
    if p.norm_sqr() == 0.0 {
        return Err(Error::InvalidParams("zero direction".into()));
    }
    let q = params.quadratic_form(&p);
    // Q(d) ≥ (1 − a)|d|² > 0 for a < 1.
    assert!(q > 0.0, "quadratic form must be positive definite for a < 1");
    Ok(p.scaled(1.0 / q.sqrt()))
}

fn scale_to_surface(d: [f64; 4], params: &EllipsoidParams, surface: TraceSurface) -> Result<Point4> {
    match surface {
        TraceSurface::Ellipsoid => scale_to_ellipsoid(d, params),
        TraceSurface::UnitSphere => {
            let p = Point4::from_real(d);
            let n = p.norm();
            if n == 0.0 || !n.is_finite() {
                return Err(Error::InvalidParams("zero direction".into()));
            }
            Ok(p.scaled(1.0 / n))
        }
    }
}

fn norm4(v: &[f64; 4]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    (0..4).map(|k| a[k] * b[k]).sum()
}

/// The 3-equation system and its exact Jacobian.
struct System {
    params: EllipsoidParams,
    surface: TraceSurface,
}

struct Eval {
    f: [f64; 3],
    jac: [[f64; 4]; 3],
}

impl System {
    fn new(params: EllipsoidParams, surface: TraceSurface) -> Self {
        System { params, surface }
    }

    fn residuals_generic<S: ComplexScalar>(&self, z: S, w: S) -> [S; 3] {
        let (a, b) = (self.params.a(), self.params.b());
        let sphere = z.abs_sqr() + w.abs_sqr() - S::one();
        let surf = match self.surface {
            TraceSurface::Ellipsoid => sphere + (z * z).scale(a).re_part() + (w * w).scale(b).re_part(),
            TraceSurface::UnitSphere => sphere,
        };
        let (re, im) = sextic_generic(z, w, a, b);
        [surf, re, im]
    }

    fn residuals(&self, x: &[f64; 4]) -> [f64; 3] {
        let p = Point4::from_real(*x);
        self.residuals_generic(p.z, p.w).map(|v| v.re)
    }

    fn eval(&self, x: &[f64; 4]) -> Eval {
        let p = Point4::from_real(*x);
        let mut jac = [[0.0; 4]; 3];
        let mut f = [0.0; 3];
        for k in 0..4 {
            let mut e = [0.0; 4];
            e[k] = 1.0;
            let z = Dual::new(p.z, C64::new(e[0], e[1]));
            let w = Dual::new(p.w, C64::new(e[2], e[3]));
            let r = self.residuals_generic(z, w);
            for i in 0..3 {
                jac[i][k] = r[i].tangent.re;
                f[i] = r[i].value.re;
            }
        }
        Eval { f, jac }
    }

    fn converged(&self, x: &[f64; 4], f: &[f64; 3], tol: f64) -> bool {
        let n2: f64 = x.iter().map(|v| v * v).sum();
        let scale = 1.0 + n2.powi(3);
        f[0].abs() <= tol && f[1].abs() <= tol * scale && f[2].abs() <= tol * scale
    }

    /// Newton in the hyperplane t·(x − anchor) = 0; returns the point and
    /// the number of iterations used.
    fn correct(
        &self,
        start: [f64; 4],
        t: &[f64; 4],
        anchor: &[f64; 4],
        max_iters: usize,
        tol: f64,
    ) -> Option<([f64; 4], usize)> {
        let mut x = start;
        for it in 1..=max_iters {
            let ev = self.eval(&x);
            let plane = (0..4).map(|k| t[k] * (x[k] - anchor[k])).sum::<f64>();
            let m = Matrix4::from_fn(|i, j| if i < 3 { ev.jac[i][j] } else { t[j] });
            let rhs = Vector4::new(-ev.f[0], -ev.f[1], -ev.f[2], -plane);
            let dx = m.lu().solve(&rhs)?;
            for k in 0..4 {
                x[k] += dx[k];
            }
            if !x.iter().all(|v| v.is_finite()) {
                return None;
            }
            let step = dx.norm();
            if step <= 1e-15 * (1.0 + norm4(&x)) {
                let f = self.residuals(&x);
                return self.converged(&x, &f, tol).then_some((x, it));
            }
            if step < 1e-10 {
                let f = self.residuals(&x);
                if self.converged(&x, &f, tol * 1e-2) {
                    return Some((x, it));
                }
            }
        }
        let f = self.residuals(&x);
        self.converged(&x, &f, tol).then_some((x, max_iters))
    }

    /// Minimum-norm Gauss–Newton onto the solution curve, used for seeds.
    fn correct_free(&self, start: [f64; 4], max_iters: usize, tol: f64) -> Option<[f64; 4]> {
        let mut x = start;
        for _ in 0..max_iters {
            let ev = self.eval(&x);
            let jm = nalgebra::Matrix3x4::from_fn(|i, j| ev.jac[i][j]);
            let jjt: Matrix3<f64> = jm * jm.transpose();
            let y = jjt.lu().solve(&Vector3::new(-ev.f[0], -ev.f[1], -ev.f[2]))?;
            let dx = jm.transpose() * y;
            for k in 0..4 {
                x[k] += dx[k];
            }
            if !x.iter().all(|v| v.is_finite()) {
                return None;
            }
            if dx.norm() <= 1e-15 * (1.0 + norm4(&x)) {
                break;
            }
        }
        let f = self.residuals(&x);
        self.converged(&x, &f, tol).then_some(x)
    }

    /// Unit kernel vector of the Jacobian (generalized cross product of
    /// the rows) and its relative size, a rank indicator.
    fn tangent(&self, x: &[f64; 4]) -> ([f64; 4], f64) {
        let j = self.eval(x).jac;
        let minor = |skip: usize| {
            let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
            Matrix3::from_fn(|r, c| j[r][cols[c]]).determinant()
        };
        let mut t = [minor(0), -minor(1), minor(2), -minor(3)];
        let n = norm4(&t);
        let rows: f64 = j.iter().map(norm4).product();
        let sigma = if rows > 0.0 { n / rows } else { 0.0 };
        if n > 0.0 {
            t.iter_mut().for_each(|v| *v /= n);
        }
        (t, sigma)
    }

    fn gamma_samples(&self) -> Vec<Point4> {
        let mut out = Vec::with_capacity(2 * DEFAULT_CURVE_SAMPLES);
        for sign in [Branch::Plus, Branch::Minus] {
            for k in 0..DEFAULT_CURVE_SAMPLES {
                let t = 2.0 * PI * k as f64 / DEFAULT_CURVE_SAMPLES as f64;
                if let Ok(p) = gamma_curve(&self.params, sign, t) {
                    let p = match self.surface {
                        TraceSurface::Ellipsoid => p,
                        TraceSurface::UnitSphere => p.scaled(1.0 / p.norm()),
                    };
                    out.push(p);
                }
            }
        }
        out
    }

    fn vertex(&self, p: Point4, gamma: &[Point4]) -> TracedVertex {
        let r = self.residuals(&p.to_real());
        TracedVertex {
            point: p,
            rho_residual: r[0].abs(),
            re_s: r[1],
            im_s: r[2],
            dist_gamma: gamma.iter().map(|g| g.dist(&p)).fold(f64::INFINITY, f64::min),
            singular: false,
        }
    }
}

fn require_generic(params: &EllipsoidParams) -> Result<()> {
    let (a, b) = (params.a(), params.b());
    if a == 0.0 {
        return Err(Error::Sphere);
    }
    if b == 0.0 {
        return Err(Error::SpecialParameters(
            "b = 0 has closed-form loci; use special_locus_b0 or `cr-umbilic locus`".into(),
        ));
    }
    if b == a {
        return Err(Error::SpecialParameters(
            "b = a has closed-form loci; use special_locus_ba or `cr-umbilic locus`".into(),
        ));
    }
    Ok(())
}

/// Point with ϱ_z² = s, ϱ_w² = t (s, t real), so X and Y are imaginary.
fn seed_plane_direction(params: &EllipsoidParams, s: f64, t: f64) -> [f64; 4] {
    let (a, b) = (params.a(), params.b());
    // z real gives ϱ_z = (1 + a)x; z = iy gives ϱ_z = −i(1 − a)y.
    let (x, y) = if s >= 0.0 {
        (s.sqrt() / (1.0 + a), 0.0)
    } else {
        (0.0, -(-s).sqrt() / (1.0 - a))
    };
    let (u, v) = if t >= 0.0 {
        (t.sqrt() / (1.0 + b), 0.0)
    } else {
        (0.0, -(-t).sqrt() / (1.0 - b))
    };
    [x, y, u, v]
}

fn direct_plane_re(params: &EllipsoidParams, s: f64, t: f64) -> f64 {
    let x = C64::new(0.0, s);
    let y = C64::new(0.0, t);
    let (re, _) = crate::ellipsoid::sextic::displayed_xy(
        params.a(),
        params.b(),
        x,
        y,
        C64::new(s.abs(), 0.0),
        C64::new(t.abs(), 0.0),
    );
    re.re
}

/// Seeds for the tracer, Newton-corrected onto the variety.
///
/// The first seed comes from the cubic root τ* (X = iτ*, Y = i); failure
/// to converge there is a hard error. Further seeds: every zero of the
/// Re-sextic on the seed plane, then centers of S³ grid cells across which
/// both sextics change sign.
pub fn seed_points(params: &EllipsoidParams, cfg: &TraceConfig) -> Result<Vec<Point4>> {
    seed_points_on(params, cfg, TraceSurface::Ellipsoid)
}

fn seed_points_on(
    params: &EllipsoidParams,
    cfg: &TraceConfig,
    surface: TraceSurface,
) -> Result<Vec<Point4>> {
    cfg.validate()?;
    require_generic(params)?;
    let sys = System::new(*params, surface);
    let correct = |d: [f64; 4]| -> Option<Point4> {
        let p = scale_to_surface(d, params, surface).ok()?;
        sys.correct_free(p.to_real(), cfg.max_newton_iters * 3, cfg.newton_tol)
            .map(Point4::from_real)
    };

    let mut seeds = Vec::new();
    let tau = case43_cubic_root(params)?;
    let guaranteed = correct(seed_plane_direction(params, tau, 1.0)).ok_or(Error::NewtonDiverged)?;
    seeds.push(guaranteed);

    // zeros of θ ↦ Re-sextic(X = i cos θ, Y = i sin θ)
    let n = 3600;
    let theta = |k: usize| 2.0 * PI * k as f64 / n as f64;
    let vals: Vec<f64> = (0..=n).map(|k| direct_plane_re(params, theta(k).cos(), theta(k).sin())).collect();
    for k in 0..n {
        if vals[k] == 0.0 || vals[k].signum() != vals[k + 1].signum() {
            let (mut lo, mut hi) = (theta(k), theta(k + 1));
            let flo = vals[k];
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let fm = direct_plane_re(params, mid.cos(), mid.sin());
                if fm.signum() == flo.signum() && fm != 0.0 {
                    lo = mid
                } else {
                    hi = mid
                }
            }
            let th = 0.5 * (lo + hi);
            if let Some(p) = correct(seed_plane_direction(params, th.cos(), th.sin())) {
                seeds.push(p);
            }
        }
    }

    // S³ grid: (cos α cos φ, cos α sin φ, sin α cos ψ, sin α sin ψ)
    let g = cfg.seed_grid;
    let dir = |i: usize, j: usize, k: usize| -> [f64; 4] {
        let al = 0.5 * PI * i as f64 / g as f64;
        let ph = 2.0 * PI * j as f64 / g as f64;
        let ps = 2.0 * PI * k as f64 / g as f64;
        [al.cos() * ph.cos(), al.cos() * ph.sin(), al.sin() * ps.cos(), al.sin() * ps.sin()]
    };
    let signs: Vec<(f64, f64)> = (0..=g)
        .flat_map(|i| (0..g).flat_map(move |j| (0..g).map(move |k| (i, j, k))))
        .map(|(i, j, k)| {
            let p = Point4::from_real(dir(i, j, k));
            let (re, im) = sextic_generic(p.z, p.w, params.a(), params.b());
            (re.re.signum(), im.re.signum())
        })
        .collect();
    let idx = |i: usize, j: usize, k: usize| (i * g + j % g) * g + k % g;
    for i in 0..g {
        for j in 0..g {
            for k in 0..g {
                let corners = [
                    idx(i, j, k),
                    idx(i, j, k + 1),
                    idx(i, j + 1, k),
                    idx(i, j + 1, k + 1),
                    idx(i + 1, j, k),
                    idx(i + 1, j, k + 1),
                    idx(i + 1, j + 1, k),
                    idx(i + 1, j + 1, k + 1),
                ];
                let re_change = corners.iter().any(|&c| signs[c].0 != signs[corners[0]].0);
                let im_change = corners.iter().any(|&c| signs[c].1 != signs[corners[0]].1);
                if re_change && im_change {
                    let al = 0.5 * PI * (i as f64 + 0.5) / g as f64;
                    let ph = 2.0 * PI * (j as f64 + 0.5) / g as f64;
                    let ps = 2.0 * PI * (k as f64 + 0.5) / g as f64;
                    let d = [al.cos() * ph.cos(), al.cos() * ph.sin(), al.sin() * ps.cos(), al.sin() * ps.sin()];
                    if let Some(p) = correct(d) {
                        seeds.push(p);
                    }
                }
            }
        }
    }
    Ok(seeds)
}

enum Ending {
    Closed,
    Singular,
    Stalled,
    Capped,
}

struct Marcher<'a> {
    sys: &'a System,
    cfg: &'a TraceConfig,
}

impl Marcher<'_> {
    /// Follows the curve from `start` along `t0`; the returned vertices
    /// exclude `start`.
    fn march(&self, start: [f64; 4], t0: [f64; 4], budget: usize) -> (Vec<([f64; 4], bool)>, Ending) {
        let cfg = self.cfg;
        let mut out = Vec::new();
        let (mut x, mut t) = (start, t0);
        let mut h = cfg.step_len;
        let mut easy = 0;
        let mut arc = 0.0;
        let min_step = cfg.step_len * 1e-6;
        while out.len() < budget {
            let pred: [f64; 4] = std::array::from_fn(|k| x[k] + h * t[k]);
            let accepted = self
                .sys
                .correct(pred, &t, &pred, cfg.max_newton_iters, cfg.newton_tol)
                .and_then(|(q, iters)| {
                    let d: [f64; 4] = std::array::from_fn(|k| q[k] - x[k]);
                    let chord = norm4(&d);
                    let (tq, sigma) = self.sys.tangent(&q);
                    let tq = if dot4(&tq, &t) < 0.0 { tq.map(|v| -v) } else { tq };
                    // reject branch jumps: the chord must follow the predictor
                    let ok = chord > 0.25 * h && chord < 2.0 * h && dot4(&tq, &t) > 0.8 && dot4(&d, &t) > 0.5 * chord;
                    ok.then_some((q, tq, sigma, iters, chord))
                });
            match accepted {
                Some((q, tq, sigma, iters, chord)) => {
                    arc += chord;
                    x = q;
                    t = tq;
                    let singular = sigma < SINGULAR_TOL;
                    out.push((x, singular));
                    if singular {
                        return (out, Ending::Singular);
                    }
                    let back: [f64; 4] = std::array::from_fn(|k| x[k] - start[k]);
                    if arc > 4.0 * cfg.step_len && norm4(&back) < cfg.step_len && dot4(&t, &t0) > 0.0 {
                        return (out, Ending::Closed);
                    }
                    if iters > cfg.max_newton_iters / 2 {
                        h *= 0.5;
                        easy = 0;
                    } else {
                        easy += 1;
                        if easy >= 3 {
                            h = (2.0 * h).min(cfg.step_len);
                            easy = 0;
                        }
                    }
                }
                None => {
                    h *= 0.5;
                    easy = 0;
                    if h < min_step {
                        return (out, Ending::Stalled);
                    }
                }
            }
        }
        (out, Ending::Capped)
    }
}

fn trace_from_seed(
    sys: &System,
    cfg: &TraceConfig,
    seed: &Point4,
    gamma: &[Point4],
) -> TracedComponent {
    let x0 = seed.to_real();
    let (t0, sigma0) = sys.tangent(&x0);
    let marcher = Marcher { sys, cfg };
    let to_vertex = |(x, singular): ([f64; 4], bool)| TracedVertex {
        singular,
        ..sys.vertex(Point4::from_real(x), gamma)
    };
    let mut first = sys.vertex(*seed, gamma);
    first.singular = sigma0 < SINGULAR_TOL;
    if first.singular {
        return TracedComponent {
            vertices: vec![first],
            closed: false,
        };
    }
    let budget = cfg.max_vertices - 1;
    let (fwd, end) = marcher.march(x0, t0, budget);
    if let Ending::Closed = end {
        let mut vertices = vec![first];
        vertices.extend(fwd.into_iter().map(to_vertex));
        // the final vertex sits within one step of the start; drop it so the
        // closing segment is an ordinary one
        if vertices.len() > 3 {
            vertices.pop();
        }
        return TracedComponent {
            vertices,
            closed: true,
        };
    }
    let remaining = budget.saturating_sub(fwd.len());
    let (bwd, _) = marcher.march(x0, t0.map(|v| -v), remaining);
    let mut vertices: Vec<TracedVertex> = bwd.into_iter().rev().map(to_vertex).collect();
    vertices.push(first);
    vertices.extend(fwd.into_iter().map(to_vertex));
    TracedComponent {
        vertices,
        closed: false,
    }
}

fn lex_less(a: &Point4, b: &Point4) -> bool {
    a.to_real().partial_cmp(&b.to_real()) == Some(std::cmp::Ordering::Less)
}

/// Start closed loops at their lexicographically smallest vertex and orient
/// every component the same way, so output does not depend on which seed
/// found it.
fn canonicalize(mut c: TracedComponent) -> TracedComponent {
    let n = c.vertices.len();
    if n < 2 {
        return c;
    }
    if c.closed {
        let imin = (0..n)
            .min_by(|&i, &j| {
                c.vertices[i].point.to_real().partial_cmp(&c.vertices[j].point.to_real()).unwrap()
            })
            .unwrap();
        c.vertices.rotate_left(imin);
        if lex_less(&c.vertices[n - 1].point, &c.vertices[1].point) {
            c.vertices[1..].reverse();
        }
    } else if lex_less(&c.vertices[n - 1].point, &c.vertices[0].point) {
        c.vertices.reverse();
    }
    c
}

/// True when c lies within `tol` of `other` everywhere it is sampled.
fn duplicates(c: &TracedComponent, other: &TracedComponent, tol: f64) -> bool {
    let pts = other.points();
    let stride = (c.vertices.len() / 50).max(1);
    c.vertices
        .iter()
        .step_by(stride)
        .all(|v| polyline_distance(&v.point, &pts, other.closed) < tol)
}

/// Traces 𝒱 on the ellipsoid.
pub fn trace_variety(params: &EllipsoidParams, cfg: &TraceConfig) -> Result<TracedVariety> {
    trace_variety_on(params, cfg, TraceSurface::Ellipsoid)
}

/// Traces 𝒱 ∩ surface; the cone is the same for both surfaces.
pub fn trace_variety_on(
    params: &EllipsoidParams,
    cfg: &TraceConfig,
    surface: TraceSurface,
) -> Result<TracedVariety> {
    let seeds = seed_points_on(params, cfg, surface)?;
    let sys = System::new(*params, surface);
    let gamma = sys.gamma_samples();
    let tol = 3.0 * cfg.step_len;
    let covered = |p: &Point4, comps: &[TracedComponent]| {
        comps.iter().any(|c| polyline_distance(p, &c.points(), c.closed) < tol)
    };
    // Seeds run in fixed-size parallel batches; seeds already covered by a
    // merged component are skipped. Batch composition depends only on the
    // seed order, so the output does not depend on the thread count.
    let mut components: Vec<TracedComponent> = Vec::new();
    let mut next = 0;
    while next < seeds.len() {
        let mut batch = Vec::with_capacity(SEED_BATCH);
        while next < seeds.len() && batch.len() < SEED_BATCH {
            if !covered(&seeds[next], &components) {
                batch.push(seeds[next]);
            }
            next += 1;
        }
        let traced: Vec<TracedComponent> = batch
            .par_iter()
            .map(|s| trace_from_seed(&sys, cfg, s, &gamma))
            .collect();
        for c in traced {
            if !components.iter().any(|o| duplicates(&c, o, tol)) {
                components.push(c);
            }
        }
    }
    let mut components: Vec<TracedComponent> = components.into_iter().map(canonicalize).collect();
    components.sort_by(|a, b| {
        a.vertices[0].point.to_real().partial_cmp(&b.vertices[0].point.to_real()).unwrap()
    });
    Ok(TracedVariety {
        params: *params,
        surface,
        components,
    })
}

/// Distance from p to the segment [a, b] in ℝ⁴.
pub fn segment_distance(p: &Point4, a: &Point4, b: &Point4) -> f64 {
    let (x, y, q) = (a.to_real(), b.to_real(), p.to_real());
    let d: [f64; 4] = std::array::from_fn(|k| y[k] - x[k]);
    let len2 = dot4(&d, &d);
    let s = if len2 > 0.0 {
        ((0..4).map(|k| (q[k] - x[k]) * d[k]).sum::<f64>() / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let c: [f64; 4] = std::array::from_fn(|k| x[k] + s * d[k] - q[k]);
    norm4(&c)
}

fn nearest_segment(p: &Point4, pts: &[Point4], closed: bool) -> Option<(f64, usize, usize)> {
    let n = pts.len();
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some((p.dist(&pts[0]), 0, 0));
    }
    let m = if closed { n } else { n - 1 };
    (0..m)
        .map(|i| {
            let j = (i + 1) % n;
            (segment_distance(p, &pts[i], &pts[j]), i, j)
        })
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
}

/// Distance from p to a polyline (closed polylines include the last-first
/// segment).
pub fn polyline_distance(p: &Point4, pts: &[Point4], closed: bool) -> f64 {
    nearest_segment(p, pts, closed).map_or(f64::INFINITY, |r| r.0)
}

/// Symmetric Hausdorff distance between two unions of polylines, measured
/// from vertices to segments.
pub fn hausdorff(a: &[(Vec<Point4>, bool)], b: &[(Vec<Point4>, bool)]) -> f64 {
    let one_sided = |x: &[(Vec<Point4>, bool)], y: &[(Vec<Point4>, bool)]| {
        x.par_iter()
            .flat_map(|(pts, _)| pts.par_iter())
            .map(|p| {
                y.iter()
                    .map(|(q, closed)| polyline_distance(p, q, *closed))
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| 0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Radial projection onto the ellipsoid; re-exported for callers that only
/// have a direction.
pub fn project_to_ellipsoid(p: &Point4, params: &EllipsoidParams) -> Result<Point4> {
    scale_to_ellipsoid(p.to_real(), params)
}
