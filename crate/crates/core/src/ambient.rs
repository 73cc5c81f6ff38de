//! The defining function ϱ = −1 + |z|² + |w|² + 2 Re f(z, w), its jets, the
//! frames L and N, and the scalar contractions the invariant formulas use.
//!
//! Multi-indices of pure holomorphic derivatives are stored once, indexed by
//! the number of w-derivatives: `d3[1]` is f_zzw, `d4[4]` is f_wwww. With
//! that layout a symmetric tensor entry T_{i j k} (indices 0 = z, 1 = w) is
//! simply `d3[i + j + k]`.

use crate::error::{Error, Result};
use crate::scalar::{ComplexScalar, Dual, C64};

/// Relative tolerance of the on-M predicate.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Point of ℂ² ≅ ℝ⁴ with z = x + iy, w = u + iv.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point4 {
    pub z: C64,
    pub w: C64,
}

impl Point4 {
    pub const fn new(z: C64, w: C64) -> Self {
        Point4 { z, w }
    }

    pub fn from_real(v: [f64; 4]) -> Self {
        Point4::new(C64::new(v[0], v[1]), C64::new(v[2], v[3]))
    }

    pub fn to_real(&self) -> [f64; 4] {
        [self.z.re, self.z.im, self.w.re, self.w.im]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.z.norm_sqr() + self.w.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.to_real().iter().all(|x| x.is_finite())
    }

    pub fn dist(&self, other: &Point4) -> f64 {
        ((self.z - other.z).norm_sqr() + (self.w - other.w).norm_sqr()).sqrt()
    }

    /// (z, w) ↦ (z̄, w̄)
    pub fn conj(&self) -> Self {
        Point4::new(self.z.conj(), self.w.conj())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Point4::new(self.z * s, self.w * s)
    }

    /// p + t·δ for a complex displacement δ = (δ_z, δ_w).
    pub fn displaced(&self, delta: [C64; 2], t: f64) -> Self {
        Point4::new(self.z + delta[0] * t, self.w + delta[1] * t)
    }
}

impl std::ops::Neg for Point4 {
    type Output = Point4;
    fn neg(self) -> Point4 {
        Point4::new(-self.z, -self.w)
    }
}

/// Holomorphic derivatives of f at a point, up to total order four.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HoloJet4<S = C64> {
    pub f: S,
    pub d1: [S; 2],
    pub d2: [S; 3],
    pub d3: [S; 4],
    pub d4: [S; 5],
}

impl<S: ComplexScalar> HoloJet4<S> {
    pub fn zero() -> Self {
        let o = S::zero();
        HoloJet4 {
            f: o,
            d1: [o; 2],
            d2: [o; 3],
            d3: [o; 4],
            d4: [o; 5],
        }
    }

    /// ∂^order f / ∂z^(order − w_count) ∂w^w_count.
    pub fn derivative(&self, order: usize, w_count: usize) -> S {
        match order {
            0 => self.f,
            1 => self.d1[w_count],
            2 => self.d2[w_count],
            3 => self.d3[w_count],
            4 => self.d4[w_count],
            _ => S::zero(),
        }
    }
}

impl HoloJet4 {
    pub fn is_finite(&self) -> bool {
        std::iter::once(&self.f)
            .chain(&self.d1)
            .chain(&self.d2)
            .chain(&self.d3)
            .chain(&self.d4)
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// True when all third and fourth derivatives vanish exactly.
    pub fn is_quadratic(&self) -> bool {
        let zero = C64::new(0.0, 0.0);
        self.d3.iter().chain(&self.d4).all(|c| *c == zero)
    }
}

/// Evaluates the holomorphic jet of f at an arbitrary point.
///
/// Generic over the scalar so one evaluator serves plain evaluation, the
/// double-double oracle and dual-number chain rules.
pub trait JetEvaluator: Sync {
    fn eval<S: ComplexScalar>(&self, z: S, w: S) -> HoloJet4<S>;

    fn jet(&self, p: &Point4) -> HoloJet4 {
        self.eval(p.z, p.w)
    }
}

/// Holomorphic polynomial of total degree ≤ 4, expanded about `center`:
/// f = Σ c_ij (z − z₀)^i (w − w₀)^j.
#[derive(Clone, Debug, PartialEq)]
pub struct HoloPoly {
    center: Point4,
    coeffs: [[C64; 5]; 5],
}

const FACT: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];

// i! / (i − k)!
fn falling(i: usize, k: usize) -> f64 {
    FACT[i] / FACT[i - k]
}

impl HoloPoly {
    pub fn zero() -> Self {
        HoloPoly {
            center: Point4::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
            coeffs: [[C64::new(0.0, 0.0); 5]; 5],
        }
    }

    /// Builds Σ c (z − z₀)^i (w − w₀)^j from `((i, j), c)` terms; repeated
    /// monomials accumulate.
    pub fn from_terms(
        center: Point4,
        terms: impl IntoIterator<Item = ((usize, usize), C64)>,
    ) -> Result<Self> {
        let mut p = HoloPoly::zero();
        p.center = center;
        for ((i, j), c) in terms {
            if i + j > 4 {
                return Err(Error::DegreeTooHigh(i, j));
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::NonFinite("polynomial coefficient"));
            }
            p.coeffs[i][j] += c;
        }
        Ok(p)
    }

    /// f = (a z² + b w²)/2, so that 2 Re f = Re(a z² + b w²).
    pub fn ellipsoid(a: f64, b: f64) -> Self {
        let origin = Point4::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        HoloPoly::from_terms(
            origin,
            [((2, 0), C64::new(a / 2.0, 0.0)), ((0, 2), C64::new(b / 2.0, 0.0))],
        )
        .expect("quadratic terms are in range")
    }

    /// Degree-4 Taylor polynomial of a jet taken at `center`.
    pub fn from_jet(center: Point4, jet: &HoloJet4) -> Self {
        let mut p = HoloPoly::zero();
        p.center = center;
        for k in 0..=4 {
            for m in 0..=k {
                p.coeffs[k - m][m] = jet.derivative(k, m) / (FACT[k - m] * FACT[m]);
            }
        }
        p
    }

    pub fn center(&self) -> Point4 {
        self.center
    }

    pub fn coefficient(&self, i: usize, j: usize) -> C64 {
        if i + j > 4 {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[i][j]
        }
    }
}

impl JetEvaluator for HoloPoly {
    fn eval<S: ComplexScalar>(&self, z: S, w: S) -> HoloJet4<S> {
        let dz = z - S::from_c64(self.center.z);
        let dw = w - S::from_c64(self.center.w);
        let mut pz = [S::one(); 5];
        let mut pw = [S::one(); 5];
        for k in 1..5 {
            pz[k] = pz[k - 1] * dz;
            pw[k] = pw[k - 1] * dw;
        }
        let deriv = |p: usize, q: usize| -> S {
            let mut acc = S::zero();
            for i in p..=4 {
                for j in q..=(4 - i) {
                    let c = self.coeffs[i][j];
                    if c.re == 0.0 && c.im == 0.0 {
                        continue;
                    }
                    let k = falling(i, p) * falling(j, q);
                    acc = acc + S::from_c64(c * k) * pz[i - p] * pw[j - q];
                }
            }
            acc
        };
        HoloJet4 {
            f: deriv(0, 0),
            d1: [deriv(1, 0), deriv(0, 1)],
            d2: [deriv(2, 0), deriv(1, 1), deriv(0, 2)],
            d3: [deriv(3, 0), deriv(2, 1), deriv(1, 2), deriv(0, 3)],
            d4: [deriv(4, 0), deriv(3, 1), deriv(2, 2), deriv(1, 3), deriv(0, 4)],
        }
    }
}

/// Partial derivatives of ϱ at a point.
///
/// The mixed block is fixed by pluriharmonicity: ϱ_{z z̄} = ϱ_{w w̄} = 1,
/// ϱ_{z w̄} = 0, all other mixed derivatives vanish. `rho` is real; it is
/// stored as a scalar with zero imaginary part so the struct stays generic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhoJet<S = C64> {
    /// Base point, rounded to f64 for tolerance bookkeeping.
    pub point: Point4,
    pub rho: S,
    pub rho_z: S,
    pub rho_w: S,
    pub hess: [S; 3],
    pub third: [S; 4],
    pub fourth: [S; 5],
}

impl RhoJet {
    pub fn rho_value(&self) -> f64 {
        self.rho.re
    }
}

pub fn assemble_rho_jet(p: &Point4, fj: &HoloJet4) -> Result<RhoJet> {
    if !p.is_finite() {
        return Err(Error::NonFinite("point"));
    }
    if !fj.is_finite() {
        return Err(Error::NonFinite("holomorphic jet"));
    }
    Ok(assemble_generic(p.z, p.w, fj))
}

pub fn assemble_generic<S: ComplexScalar>(z: S, w: S, fj: &HoloJet4<S>) -> RhoJet<S> {
    let rho = (S::real(-1.0) + z.abs_sqr() + w.abs_sqr() + fj.f + fj.f.conj()).re_part();
    RhoJet {
        point: Point4::new(z.to_c64(), w.to_c64()),
        rho,
        rho_z: z.conj() + fj.d1[0],
        rho_w: w.conj() + fj.d1[1],
        hess: fj.d2,
        third: fj.d3,
        fourth: fj.d4,
    }
}

fn det3<S: ComplexScalar>(m: [[S; 3]; 3]) -> S {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// −det of the bordered complex Hessian
/// [[ϱ, ϱ_z̄, ϱ_w̄], [ϱ_z, ϱ_{zz̄}, ϱ_{zw̄}], [ϱ_w, ϱ_{wz̄}, ϱ_{ww̄}]].
pub fn levi_fefferman_generic<S: ComplexScalar>(j: &RhoJet<S>) -> S {
    let (o, l) = (S::zero(), S::one());
    let m = [
        [j.rho, j.rho_z.conj(), j.rho_w.conj()],
        [j.rho_z, l, o],
        [j.rho_w, o, l],
    ];
    (-det3(m)).re_part()
}

pub fn levi_fefferman(j: &RhoJet) -> f64 {
    levi_fefferman_generic(j).re
}

/// L = ϱ_w ∂_z − ϱ_z ∂_w and N = ϱ_z̄ ∂_z + ϱ_w̄ ∂_w as coefficient pairs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frames<S = C64> {
    pub l: [S; 2],
    pub n: [S; 2],
}

pub fn frames_generic<S: ComplexScalar>(j: &RhoJet<S>) -> Frames<S> {
    Frames {
        l: [j.rho_w, -j.rho_z],
        n: [j.rho_z.conj(), j.rho_w.conj()],
    }
}

pub fn frames(j: &RhoJet) -> Result<Frames> {
    if j.rho_z.norm_sqr() + j.rho_w.norm_sqr() == 0.0 {
        return Err(Error::DegenerateGradient);
    }
    Ok(frames_generic(j))
}

pub(crate) fn t2<S: ComplexScalar>(h: &[S; 3], a: &[S; 2], b: &[S; 2]) -> S {
    h[0] * a[0] * b[0] + h[1] * (a[0] * b[1] + a[1] * b[0]) + h[2] * a[1] * b[1]
}

pub(crate) fn t3<S: ComplexScalar>(t: &[S; 4], a: &[S; 2], b: &[S; 2], c: &[S; 2]) -> S {
    let mut acc = S::zero();
    for i in 0..2 {
        for j in 0..2 {
            let ab = a[i] * b[j];
            for k in 0..2 {
                acc = acc + t[i + j + k] * ab * c[k];
            }
        }
    }
    acc
}

pub(crate) fn t4<S: ComplexScalar>(
    t: &[S; 5],
    a: &[S; 2],
    b: &[S; 2],
    c: &[S; 2],
    d: &[S; 2],
) -> S {
    let mut acc = S::zero();
    for i in 0..2 {
        for j in 0..2 {
            let ab = a[i] * b[j];
            for k in 0..2 {
                let abc = ab * c[k];
                for l in 0..2 {
                    acc = acc + t[i + j + k + l] * abc * d[l];
                }
            }
        }
    }
    acc
}

/// H·v for the 2×2 pure Hessian stored as [h_zz, h_zw, h_ww].
pub(crate) fn hess_apply<S: ComplexScalar>(h: &[S; 3], v: &[S; 2]) -> [S; 2] {
    [h[0] * v[0] + h[1] * v[1], h[1] * v[0] + h[2] * v[1]]
}

/// Scalar contractions of the pure-holomorphic jets of ϱ against the frames.
///
/// `rzzz_llsl` is ϱ_ZZZ(L, L, ϱ_ZZ·L) with the literal matrix–vector product.
/// `rzzz_ll_dl` is ϱ_ZZZ(L, L, L(L)), where L(L) = ((ϱ_ZZ·L)_w, −(ϱ_ZZ·L)_z)
/// is the derivative of the frame along itself; that is the combination
/// the fourth-order covariant derivatives actually produce.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameContractions<S = C64> {
    pub point: Point4,
    pub rho: S,
    pub j: S,
    pub rzz_ll: S,
    pub rzz_nl: S,
    pub rzz_nn: S,
    pub det_rzz: S,
    pub rzzz_nll: S,
    pub rzzz_lll: S,
    pub rzzz_llsl: S,
    pub rzzz_ll_dl: S,
    pub rzzzz_llll: S,
}

impl FrameContractions {
    pub fn j_value(&self) -> f64 {
        self.j.re
    }

    pub fn rho_value(&self) -> f64 {
        self.rho.re
    }

    pub fn is_on_manifold(&self) -> bool {
        on_manifold(&self.point, self.rho.re)
    }
}

pub fn contractions_generic<S: ComplexScalar>(j: &RhoJet<S>) -> FrameContractions<S> {
    let Frames { l, n } = frames_generic(j);
    let h = &j.hess;
    let hl = hess_apply(h, &l);
    let dl = [hl[1], -hl[0]];
    FrameContractions {
        point: j.point,
        rho: j.rho,
        j: levi_fefferman_generic(j),
        rzz_ll: t2(h, &l, &l),
        rzz_nl: t2(h, &n, &l),
        rzz_nn: t2(h, &n, &n),
        det_rzz: h[0] * h[2] - h[1] * h[1],
        rzzz_nll: t3(&j.third, &n, &l, &l),
        rzzz_lll: t3(&j.third, &l, &l, &l),
        rzzz_llsl: t3(&j.third, &l, &l, &hl),
        rzzz_ll_dl: t3(&j.third, &l, &l, &dl),
        rzzzz_llll: t4(&j.fourth, &l, &l, &l, &l),
    }
}

pub fn contractions(j: &RhoJet) -> Result<FrameContractions> {
    frames(j)?;
    Ok(contractions_generic(j))
}

/// Convenience: contractions of ϱ for the evaluator `src` at `p`.
pub fn contractions_at<E: JetEvaluator>(src: &E, p: &Point4) -> Result<FrameContractions> {
    let rj = assemble_rho_jet(p, &src.jet(p))?;
    contractions(&rj)
}

/// |ϱ| ≤ 1e−12·(1 + ‖p‖²).
pub fn on_manifold(p: &Point4, rho: f64) -> bool {
    rho.abs() <= membership_tol(p)
}

pub fn membership_tol(p: &Point4) -> f64 {
    MEMBERSHIP_TOL * (1.0 + p.norm_sqr())
}

/// Pulls p onto ϱ = 0 along the ray through the origin by Newton's method
/// on λ ↦ ϱ(λp).
pub fn project_radially<E: JetEvaluator>(src: &E, p: &Point4) -> Result<Point4> {
    if !p.is_finite() {
        return Err(Error::NonFinite("point"));
    }
    let mut q = *p;
    for _ in 0..50 {
        let rj = assemble_generic(q.z, q.w, &src.jet(&q));
        let rho = rj.rho.re;
        if on_manifold(&q, rho) && rho.abs() < 1e-15 {
            return Ok(q);
        }
        let radial = 2.0 * (rj.rho_z * q.z + rj.rho_w * q.w).re;
        if radial == 0.0 || !radial.is_finite() {
            return Err(Error::DegenerateGradient);
        }
        q = q.scaled(1.0 - rho / radial);
    }
    let rho = assemble_generic(q.z, q.w, &src.jet(&q)).rho.re;
    if on_manifold(&q, rho) {
        Ok(q)
    } else {
        Err(Error::OffManifold {
            rho: rho.abs(),
            tol: membership_tol(&q),
        })
    }
}

/// Exact real directional derivative d/dt g(p + tδ)|₀ of a quantity built
/// from the ϱ-jet, by dual-number evaluation of the polynomial jets.
pub fn directional_derivative<E, G>(src: &E, p: &Point4, delta: [C64; 2], g: G) -> C64
where
    E: JetEvaluator,
    G: Fn(&RhoJet<Dual>) -> Dual,
{
    let z = Dual::new(p.z, delta[0]);
    let w = Dual::new(p.w, delta[1]);
    let fj = src.eval(z, w);
    g(&assemble_generic(z, w, &fj)).tangent
}

fn split_derivative<E, G>(src: &E, p: &Point4, v: [C64; 2], g: G, sign: f64) -> C64
where
    E: JetEvaluator,
    G: Fn(&RhoJet<Dual>) -> Dual,
{
    let i = C64::new(0.0, 1.0);
    let d_re = directional_derivative(src, p, v, &g);
    let d_im = directional_derivative(src, p, [i * v[0], i * v[1]], &g);
    (d_re - i * sign * d_im) * 0.5
}

/// L g at p for g built from the ϱ-jet, with L taken at p.
pub fn l_derivative<E, G>(src: &E, p: &Point4, g: G) -> Result<C64>
where
    E: JetEvaluator,
    G: Fn(&RhoJet<Dual>) -> Dual,
{
    let fr = frames(&assemble_rho_jet(p, &src.jet(p))?)?;
    Ok(split_derivative(src, p, fr.l, g, 1.0))
}

/// L̄ g at p.
pub fn lbar_derivative<E, G>(src: &E, p: &Point4, g: G) -> Result<C64>
where
    E: JetEvaluator,
    G: Fn(&RhoJet<Dual>) -> Dual,
{
    let fr = frames(&assemble_rho_jet(p, &src.jet(p))?)?;
    Ok(split_derivative(src, p, fr.l, g, -1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pt(z: C64, w: C64) -> Point4 {
        Point4::new(z, w)
    }

    #[test]
    fn sphere_point_jet() {
        let p = pt(c(1.0, 0.0), c(0.0, 0.0));
        let rj = assemble_rho_jet(&p, &HoloJet4::zero()).unwrap();
        assert_eq!(rj.rho_value(), 0.0);
        assert_eq!(rj.rho_z, c(1.0, 0.0));
        assert_eq!(rj.rho_w, c(0.0, 0.0));
        assert_eq!(levi_fefferman(&rj), 1.0);
        let fr = frames(&rj).unwrap();
        assert_eq!(fr.l, [c(0.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(fr.n, [c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn ellipsoid_pole_jet() {
        let f = HoloPoly::ellipsoid(0.5, 0.0);
        let p = pt(c(0.0, 0.0), c(1.0, 0.0));
        let rj = assemble_rho_jet(&p, &f.jet(&p)).unwrap();
        assert_eq!(rj.rho_value(), 0.0);
        assert_eq!(rj.rho_z, c(0.0, 0.0));
        assert_eq!(rj.rho_w, c(1.0, 0.0));
        assert_eq!(rj.hess[0], c(0.5, 0.0));
        assert_eq!(levi_fefferman(&rj), 1.0);
        let fr = frames(&rj).unwrap();
        assert_eq!(fr.l, [c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(fr.n, [c(0.0, 0.0), c(1.0, 0.0)]);
        let k = contractions(&rj).unwrap();
        assert_eq!(k.rzz_ll, c(0.5, 0.0));
        assert_eq!(k.rzz_nl, c(0.0, 0.0));
        assert_eq!(k.rzz_nn, c(0.0, 0.0));
        assert_eq!(k.det_rzz, c(0.0, 0.0));
        assert_eq!(k.rzzz_lll, c(0.0, 0.0));
        assert_eq!(k.rzzzz_llll, c(0.0, 0.0));
    }

    #[test]
    fn center_of_ball() {
        let p = pt(c(0.0, 0.0), c(0.0, 0.0));
        let f = HoloPoly::ellipsoid(0.3, 0.1);
        let rj = assemble_rho_jet(&p, &f.jet(&p)).unwrap();
        assert_eq!(rj.rho_value(), -1.0);
        assert_eq!(levi_fefferman(&rj), 1.0);
        assert_eq!(frames(&rj), Err(Error::DegenerateGradient));
        assert!(contractions(&rj).is_err());
    }

    #[test]
    fn non_finite_rejected() {
        let p = pt(c(f64::NAN, 0.0), c(0.0, 0.0));
        assert!(assemble_rho_jet(&p, &HoloJet4::zero()).is_err());
    }

    #[test]
    fn sphere_contractions_vanish() {
        let p = pt(c(0.6, 0.0), c(0.0, 0.8));
        let rj = assemble_rho_jet(&p, &HoloJet4::zero()).unwrap();
        let k = contractions(&rj).unwrap();
        assert!((k.j_value() - 1.0).abs() < 1e-15);
        for v in [k.rzz_ll, k.rzz_nl, k.rzz_nn, k.det_rzz, k.rzzz_nll, k.rzzzz_llll] {
            assert_eq!(v, c(0.0, 0.0));
        }
    }

    #[test]
    fn levi_fefferman_matches_closed_form_off_manifold() {
        let f = HoloPoly::from_terms(
            pt(c(0.1, 0.0), c(0.0, -0.2)),
            [((2, 0), c(0.2, 0.1)), ((1, 1), c(-0.1, 0.3)), ((3, 0), c(0.05, 0.0))],
        )
        .unwrap();
        let p = pt(c(0.3, 0.4), c(-0.7, 0.2));
        let rj = assemble_rho_jet(&p, &f.jet(&p)).unwrap();
        let closed = rj.rho_z.norm_sqr() + rj.rho_w.norm_sqr() - rj.rho_value();
        assert!((levi_fefferman(&rj) - closed).abs() < 1e-15);
    }

    #[test]
    fn taylor_roundtrip_reproduces_jet() {
        let f = HoloPoly::from_terms(
            pt(c(0.0, 0.0), c(0.0, 0.0)),
            [
                ((2, 0), c(0.2, 0.1)),
                ((0, 3), c(-0.1, 0.05)),
                ((2, 2), c(0.03, -0.02)),
                ((1, 3), c(0.01, 0.04)),
            ],
        )
        .unwrap();
        let q = pt(c(0.2, -0.3), c(0.5, 0.1));
        let g = HoloPoly::from_jet(q, &f.jet(&q));
        let r = pt(c(-0.4, 0.1), c(0.3, 0.6));
        let (a, b) = (f.jet(&r), g.jet(&r));
        for k in 0..=4 {
            for m in 0..=k {
                assert!((a.derivative(k, m) - b.derivative(k, m)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn degree_checked() {
        let o = pt(c(0.0, 0.0), c(0.0, 0.0));
        assert!(HoloPoly::from_terms(o, [((3, 2), c(1.0, 0.0))]).is_err());
    }

    #[test]
    fn frame_annihilates_gradient() {
        let f = HoloPoly::ellipsoid(0.4, 0.2);
        let p = pt(c(0.3, 0.5), c(-0.2, 0.6));
        let rj = assemble_rho_jet(&p, &f.jet(&p)).unwrap();
        let fr = frames(&rj).unwrap();
        assert_eq!(rj.rho_z * fr.l[0] + rj.rho_w * fr.l[1], c(0.0, 0.0));
    }
}
