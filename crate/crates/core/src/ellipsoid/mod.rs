//! The ellipsoids ϱ = −1 + |z|² + |w|² + Re(az² + bw²), 0 ≤ b ≤ a < 1:
//! closed-form umbilical curves, the special loci b = 0 and b = a, the
//! functional 𝒫 whose zero set is the variety 𝒱, and the Beltrami
//! coefficient.

pub mod roots;
pub mod sextic;

use std::f64::consts::PI;

use rand::{Rng, RngExt};

use crate::ambient::{contractions_at, membership_tol, FrameContractions, HoloPoly, Point4};
use crate::error::{Error, Result};
use crate::invariants::cartan_q11;
use crate::scalar::{ComplexScalar, C64};
use crate::tracer::{scale_to_ellipsoid, TracedVertex};

pub use roots::{cubic_unique_positive_root, eval_cubic};
pub use sextic::{
    case43_cubic, case43_cubic_root, case43_restricted, displayed_sextics, sextic_forms, SexticForms,
};

/// Largest admissible a; at a = 1 the ellipsoid degenerates.
pub const A_MAX: f64 = 1.0 - 1e-9;

/// Samples per closed curve.
pub const DEFAULT_CURVE_SAMPLES: usize = 720;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipsoidParams {
    a: f64,
    b: f64,
}

impl EllipsoidParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParams("a and b must be finite".into()));
        }
        if !(0.0 <= b && b <= a && a <= A_MAX) {
            return Err(Error::InvalidParams(format!(
                "need 0 <= b <= a <= 1 - 1e-9, got a = {a}, b = {b}"
            )));
        }
        Ok(EllipsoidParams { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn is_sphere(&self) -> bool {
        self.a == 0.0
    }

    /// f = (az² + bw²)/2
    pub fn poly(&self) -> HoloPoly {
        HoloPoly::ellipsoid(self.a, self.b)
    }

    /// Q(p) = |z|² + |w|² + Re(az² + bw²), so that ϱ = Q − 1.
    pub fn quadratic_form(&self, p: &Point4) -> f64 {
        p.norm_sqr() + (p.z * p.z * self.a + p.w * p.w * self.b).re
    }

    pub fn rho(&self, p: &Point4) -> f64 {
        self.quadratic_form(p) - 1.0
    }

    pub fn on_manifold(&self, p: &Point4) -> bool {
        self.rho(p).abs() <= membership_tol(p)
    }

    /// (ϱ_z, ϱ_w) = (z̄ + az, w̄ + bw)
    pub fn gradient(&self, p: &Point4) -> (C64, C64) {
        (p.z.conj() + p.z * self.a, p.w.conj() + p.w * self.b)
    }

    pub fn contractions(&self, p: &Point4) -> Result<FrameContractions> {
        contractions_at(&self.poly(), p)
    }

    fn require_on_manifold(&self, p: &Point4) -> Result<()> {
        let rho = self.rho(p);
        let tol = membership_tol(p);
        if !p.is_finite() {
            return Err(Error::NonFinite("point"));
        }
        if rho.abs() > tol {
            return Err(Error::OffManifold { rho: rho.abs(), tol });
        }
        Ok(())
    }

    fn require_nonsphere(&self) -> Result<()> {
        if self.is_sphere() {
            Err(Error::Sphere)
        } else {
            Ok(())
        }
    }
}

/// ±1 branch selector of the γ curves and of the b = 0 curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn from_sign(s: i8) -> Option<Self> {
        match s {
            1 => Some(Branch::Plus),
            -1 => Some(Branch::Minus),
            _ => None,
        }
    }
}

/// γ±(t): the curves on which ϱ_ZZ(L, L) vanishes.
pub fn gamma_curve(params: &EllipsoidParams, sign: Branch, t: f64) -> Result<Point4> {
    let (a, b) = (params.a, params.b);
    if b == 0.0 {
        return Err(Error::DegenerateCurve);
    }
    let (c, s) = (t.cos(), t.sin());
    let kz = (a / (a + b)).sqrt();
    let kw = sign.sign() * (b / (a + b)).sqrt();
    let z = C64::new(
        (1.0 - b).sqrt() * c / (1.0 + a).sqrt(),
        (1.0 + b).sqrt() * s / (1.0 - a).sqrt(),
    ) * kz;
    let w = C64::new(
        (1.0 - a).sqrt() * s / (1.0 + b).sqrt(),
        -(1.0 + a).sqrt() * c / (1.0 - b).sqrt(),
    ) * kw;
    Ok(Point4::new(z, w))
}

/// Coefficients (highest first) of 4s³ + 8(1+a)s² + (4+6a+5a²)s − 2a.
pub fn b0_cubic(a: f64) -> [f64; 4] {
    [4.0, 8.0 * (1.0 + a), 4.0 + 6.0 * a + 5.0 * a * a, -2.0 * a]
}

/// Coefficients of (a²+2a+4)s³ + (4−a(19a+34))s² + (a(19a−34)−4)s − a²+2a−4.
pub fn ba_cubic(a: f64) -> [f64; 4] {
    [
        a * a + 2.0 * a + 4.0,
        4.0 - a * (19.0 * a + 34.0),
        a * (19.0 * a - 34.0) - 4.0,
        -a * a + 2.0 * a - 4.0,
    ]
}

fn unique_root(c: [f64; 4]) -> Result<f64> {
    cubic_unique_positive_root(c[0], c[1], c[2], c[3])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveKind {
    GammaPlus,
    GammaMinus,
    /// The circle w = 0 of the b = 0 ellipsoid, the limit of γ± as b → 0.
    AxisCircle,
    SpecialB0,
    SpecialBA,
    Traced,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::GammaPlus => "gamma_plus",
            CurveKind::GammaMinus => "gamma_minus",
            CurveKind::AxisCircle => "axis_circle",
            CurveKind::SpecialB0 => "special_b0",
            CurveKind::SpecialBA => "special_ba",
            CurveKind::Traced => "traced",
        }
    }
}

/// A component of the umbilical locus: a closed-form curve tag with its
/// parameters, or a traced polyline.
#[derive(Clone, Debug, PartialEq)]
pub struct LocusCurve {
    pub kind: CurveKind,
    pub params: EllipsoidParams,
    pub tau: Option<f64>,
    pub sign: Option<i8>,
    /// Root s₀ of the case cubic, for the b = 0 and b = a families.
    pub s0: Option<f64>,
    pub polyline: Option<Vec<TracedVertex>>,
}

impl LocusCurve {
    fn closed_form(kind: CurveKind, params: EllipsoidParams) -> Self {
        LocusCurve {
            kind,
            params,
            tau: None,
            sign: None,
            s0: None,
            polyline: None,
        }
    }

    pub fn traced(params: EllipsoidParams, vertices: Vec<TracedVertex>) -> Self {
        LocusCurve {
            polyline: Some(vertices),
            ..LocusCurve::closed_form(CurveKind::Traced, params)
        }
    }

    /// True for the b = a curves with τ = ±1, which coincide with γ±.
    pub fn coincides_with_gamma(&self) -> bool {
        matches!(self.kind, CurveKind::GammaPlus | CurveKind::GammaMinus)
            || (self.kind == CurveKind::SpecialBA && self.tau.is_some_and(|t| t.abs() == 1.0))
    }

    /// Point at parameter t ∈ [0, 2π); `None` for traced polylines.
    pub fn point(&self, t: f64) -> Option<Point4> {
        let (a, c, s) = (self.params.a, t.cos(), t.sin());
        match self.kind {
            CurveKind::GammaPlus => gamma_curve(&self.params, Branch::Plus, t).ok(),
            CurveKind::GammaMinus => gamma_curve(&self.params, Branch::Minus, t).ok(),
            CurveKind::AxisCircle => Some(Point4::new(
                C64::new(c / (1.0 + a).sqrt(), s / (1.0 - a).sqrt()),
                C64::new(0.0, 0.0),
            )),
            CurveKind::SpecialB0 => {
                let s0 = self.s0?;
                let sg = self.sign? as f64;
                let z = sg * (s0 / ((1.0 + a) * (1.0 + a + s0))).sqrt();
                let r = ((1.0 + a) / (1.0 + a + s0)).sqrt();
                Some(Point4::new(C64::new(z, 0.0), C64::new(r * c, r * s)))
            }
            CurveKind::SpecialBA => {
                let tau = self.tau?;
                let k = 1.0 / (1.0 - a + tau * tau * (1.0 + a)).sqrt();
                let (p, q) = (((1.0 - a) / (1.0 + a)).sqrt(), ((1.0 + a) / (1.0 - a)).sqrt());
                Some(Point4::new(
                    C64::new(p * c, tau * q * s) * k,
                    C64::new(p * s, -tau * q * c) * k,
                ))
            }
            CurveKind::Traced => None,
        }
    }

    /// n equally spaced parameter samples, or the stored polyline vertices.
    pub fn sample(&self, n: usize) -> Vec<Point4> {
        if let Some(poly) = &self.polyline {
            return poly.iter().map(|v| v.point).collect();
        }
        (0..n)
            .filter_map(|k| self.point(2.0 * PI * k as f64 / n as f64))
            .collect()
    }

    /// The equation the curve is built from: |ϱ_ZZ(L,L)| for γ-type
    /// curves, |𝒫| for the b = 0 and τ = ±√s₀ curves, |Q₁₁| for the axis
    /// circle, and the larger sextic residual for traced vertices.
    pub fn defining_residual(&self, p: &Point4) -> Result<f64> {
        let params = &self.params;
        if self.coincides_with_gamma() {
            return Ok(params.contractions(p)?.rzz_ll.norm());
        }
        match self.kind {
            CurveKind::AxisCircle => Ok(cartan_q11(&params.contractions(p)?)?.q11.norm()),
            CurveKind::SpecialB0 | CurveKind::SpecialBA => Ok(p_functional(p, params)?.norm()),
            _ => {
                let s = sextic_forms(p.z.re, p.z.im, p.w.re, p.w.im, params);
                Ok(s.re_s.abs().max(s.im_s.abs()))
            }
        }
    }
}

/// Umbilical locus of the b = 0 ellipsoid: the two curves z = ±const over the b = 0 ellipsoid plus the
/// circle w = 0.
pub fn special_locus_b0(a: f64) -> Result<Vec<LocusCurve>> {
    let params = EllipsoidParams::new(a, 0.0)?;
    params.require_nonsphere()?;
    let s0 = unique_root(b0_cubic(a))?;
    let mut out: Vec<LocusCurve> = [1i8, -1]
        .iter()
        .map(|&sg| LocusCurve {
            sign: Some(sg),
            s0: Some(s0),
            ..LocusCurve::closed_form(CurveKind::SpecialB0, params)
        })
        .collect();
    out.push(LocusCurve::closed_form(CurveKind::AxisCircle, params));
    Ok(out)
}

/// Umbilical locus of the b = a ellipsoid: four curves, τ ∈ {1, −1, √s₀, −√s₀}.
pub fn special_locus_ba(a: f64) -> Result<Vec<LocusCurve>> {
    let params = EllipsoidParams::new(a, a)?;
    params.require_nonsphere()?;
    let s0 = unique_root(ba_cubic(a))?;
    let r = s0.sqrt();
    Ok([1.0, -1.0, r, -r]
        .iter()
        .map(|&tau| LocusCurve {
            tau: Some(tau),
            s0: Some(s0),
            ..LocusCurve::closed_form(CurveKind::SpecialBA, params)
        })
        .collect())
}

/// Every closed-form component of the umbilical locus for these
/// parameters. For 0 < b < a the variety 𝒱 is not included; it has no
/// closed form and comes from the tracer.
pub fn locus_curves(params: &EllipsoidParams) -> Result<Vec<LocusCurve>> {
    params.require_nonsphere()?;
    if params.b == 0.0 {
        special_locus_b0(params.a)
    } else if params.b == params.a {
        special_locus_ba(params.a)
    } else {
        Ok(vec![
            LocusCurve::closed_form(CurveKind::GammaPlus, *params),
            LocusCurve::closed_form(CurveKind::GammaMinus, *params),
        ])
    }
}

/// 𝒫 written directly in the ellipsoid quantities (det ϱ_ZZ = ab,
/// ϱ_ZZ(L,L) = aϱ_w² + bϱ_z², …), generic for exact Jacobians.
pub fn p_functional_generic<S: ComplexScalar>(z: S, w: S, a: f64, b: f64) -> S {
    let rz = z.conj() + z.scale(a);
    let rw = w.conj() + w.scale(b);
    let (nz, nw) = (rz.conj(), rw.conj());
    let ll = (rw * rw).scale(a) + (rz * rz).scale(b);
    let nl = (nz * rw).scale(a) - (nw * rz).scale(b);
    let nn = (nz * nz).scale(a) + (nw * nw).scale(b);
    let j = rz.abs_sqr() + rw.abs_sqr();
    let (j3, j4, j5) = (j.powi(3), j.powi(4), j.powi(5));
    -ll.conj().scale(0.5 * a * b) / j3 - nn.conj().scale(2.0) / j3 + ll.abs_sqr() / j4
        - nl.abs_sqr().scale(4.0) / j4
        - ll.conj() * nl * nl.scale(2.5) / j5
}

/// 𝒫[ϱ] at a point of the ellipsoid; Q₁₁ = ϱ_ZZ(L,L)·𝒫 there.
pub fn p_functional(p: &Point4, params: &EllipsoidParams) -> Result<C64> {
    params.require_on_manifold(p)?;
    Ok(p_functional_generic(p.z, p.w, params.a, params.b))
}

/// Scalar coefficient −ϱ_ZZ(L,L)/J of the Beltrami tensor.
pub fn beltrami_coefficient(p: &Point4, params: &EllipsoidParams) -> Result<C64> {
    params.require_on_manifold(p)?;
    let c = params.contractions(p)?;
    let j = c.j.re;
    if !(j > 0.0) {
        return Err(Error::Degenerate(j));
    }
    Ok(-c.rzz_ll / j)
}

/// Point of the ellipsoid in the torus chart
/// (x, y, u, v) = (cos s cos t/√(1+a), cos s sin t/√(1−a),
///                 sin s cos t/√(1+b), sin s sin t/√(1−b)).
pub fn torus_chart(params: &EllipsoidParams, s: f64, t: f64) -> Point4 {
    let (a, b) = (params.a, params.b);
    let (cs, ss, ct, st) = (s.cos(), s.sin(), t.cos(), t.sin());
    Point4::from_real([
        cs * ct / (1.0 + a).sqrt(),
        cs * st / (1.0 - a).sqrt(),
        ss * ct / (1.0 + b).sqrt(),
        ss * st / (1.0 - b).sqrt(),
    ])
}

/// Uniform random direction on S³, radially scaled onto the ellipsoid.
pub fn random_point<R: Rng + ?Sized>(params: &EllipsoidParams, rng: &mut R) -> Point4 {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            if let Ok(p) = scale_to_ellipsoid(v, params) {
                return p;
            }
        }
    }
}
