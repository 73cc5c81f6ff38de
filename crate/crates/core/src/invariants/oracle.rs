//! Independent finite-difference estimate of Q₁₁.
//!
//! Only R and A₁₁ (zeroth-order quantities) are taken from closed forms.
//! Every covariant derivative is rebuilt from its definition: directional
//! derivatives along the real vector fields Re L, Im L and T by central
//! differences, each displaced point pulled back onto M by radial Newton,
//! plus the Christoffel corrections
//!
//!   R,₁₁    = L(R,₁) − Γ₁₁¹ R,₁          with R,₁ = L R
//!   A₁₁,₀   = T A₁₁ − 2 Γ₀₁¹ A₁₁
//!   A₁₁,¹₁  = L(A₁₁,¹) − Γ₁₁¹ A₁₁,¹     with A₁₁,¹ = L̄(A₁₁)/J
//!   Γ₁₁¹    = L(J)/J,   Γ₀₁¹ = (i/J)(N(J)/J − 2)
//!
//! Nested central differences lose about ε/h² to rounding, which at
//! h = 1e−4 in f64 is as large as the truncation error itself. The whole
//! oracle therefore runs in double-double arithmetic.

use qd::Quad;

use crate::ambient::{assemble_generic, contractions_generic, frames_generic, membership_tol};
use crate::ambient::{FrameContractions, HoloJet4, HoloPoly, JetEvaluator, Point4};
use crate::error::{Error, Result};
use crate::invariants::formulas;
use crate::scalar::{CQuad, ComplexScalar, C64};

pub const DEFAULT_STEP: f64 = 1e-4;
pub const MIN_STEP: f64 = 1e-6;
pub const MAX_STEP: f64 = 1e-3;

type Q = CQuad;
type Pt = [Q; 2];

/// Oracle values of every covariant block at one step size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleBlocks {
    pub h: f64,
    pub gamma11: C64,
    pub gamma01: C64,
    pub r_11: C64,
    pub a11_0: C64,
    pub a11_up1_1: C64,
    pub q11: C64,
}

/// Oracle Q₁₁ at h, h/2 and h/4.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleEstimate {
    pub h: f64,
    pub q11: C64,
    pub q11_half: C64,
    pub q11_quarter: C64,
}

impl OracleEstimate {
    /// |q(h) − q(h/2)| / |q(h/2) − q(h/4)|, ≈ 4 for a second-order scheme.
    pub fn richardson_ratio(&self) -> f64 {
        (self.q11 - self.q11_half).norm() / (self.q11_half - self.q11_quarter).norm()
    }

    /// Richardson-extrapolated value (4 q(h/2) − q(h))/3.
    pub fn extrapolated(&self) -> C64 {
        (self.q11_half * 4.0 - self.q11) / 3.0
    }
}

struct Ctx<'a, E: JetEvaluator> {
    src: &'a E,
    h: Quad,
}

fn q(x: f64) -> Q {
    Q::real(x)
}

fn re(x: Q) -> Quad {
    x.re
}

impl<'a, E: JetEvaluator> Ctx<'a, E> {
    fn local(&self, p: Pt) -> FrameContractions<Q> {
        let fj: HoloJet4<Q> = self.src.eval(p[0], p[1]);
        contractions_generic(&assemble_generic(p[0], p[1], &fj))
    }

    fn rho_and_radial(&self, p: Pt) -> (Quad, Quad) {
        let fj: HoloJet4<Q> = self.src.eval(p[0], p[1]);
        let rj = assemble_generic(p[0], p[1], &fj);
        // d/dλ ϱ(λp) at λ = 1 is 2 Re(ϱ_z z + ϱ_w w).
        let radial = (rj.rho_z * p[0] + rj.rho_w * p[1]).re * Quad::from(2.0);
        (re(rj.rho), radial)
    }

    /// Radial Newton onto ϱ = 0.
    fn project(&self, p: Pt) -> Pt {
        let mut p = p;
        for _ in 0..12 {
            let (r, dr) = self.rho_and_radial(p);
            let step = r / dr;
            let s = Q::new(Quad::from(1.0) - step, Quad::from(0.0));
            p = [p[0] * s, p[1] * s];
            if step.abs() < Quad::from(1e-31) {
                break;
            }
        }
        p
    }

    /// Real directional derivative along the complex displacement d.
    fn d_real(&self, p: Pt, d: Pt, g: &dyn Fn(Pt) -> Q, project: bool) -> Q {
        let hq = Q::new(self.h, Quad::from(0.0));
        let mut plus = [p[0] + hq * d[0], p[1] + hq * d[1]];
        let mut minus = [p[0] - hq * d[0], p[1] - hq * d[1]];
        if project {
            plus = self.project(plus);
            minus = self.project(minus);
        }
        (g(plus) - g(minus)) / (hq + hq)
    }

    fn split(&self, p: Pt, v: Pt, g: &dyn Fn(Pt) -> Q, sign: f64, project: bool) -> Q {
        let i = Q::i();
        let d_re = self.d_real(p, v, g, project);
        let d_im = self.d_real(p, [i * v[0], i * v[1]], g, project);
        (d_re - i * d_im.scale(sign)).scale(0.5)
    }

    fn frame_l(&self, p: Pt) -> Pt {
        let fj: HoloJet4<Q> = self.src.eval(p[0], p[1]);
        frames_generic(&assemble_generic(p[0], p[1], &fj)).l
    }

    fn frame_n(&self, p: Pt) -> Pt {
        let fj: HoloJet4<Q> = self.src.eval(p[0], p[1]);
        frames_generic(&assemble_generic(p[0], p[1], &fj)).n
    }

    fn l_op(&self, p: Pt, g: &dyn Fn(Pt) -> Q) -> Q {
        self.split(p, self.frame_l(p), g, 1.0, true)
    }

    fn lbar_op(&self, p: Pt, g: &dyn Fn(Pt) -> Q) -> Q {
        self.split(p, self.frame_l(p), g, -1.0, true)
    }

    /// Holomorphic N-derivative in the ambient space (N is transversal).
    fn n_op(&self, p: Pt, g: &dyn Fn(Pt) -> Q) -> Q {
        self.split(p, self.frame_n(p), g, 1.0, false)
    }

    /// Reeb field T = i(ξ − ξ̄) with ξ = N/J, as a real flow on M.
    fn t_op(&self, p: Pt, g: &dyn Fn(Pt) -> Q) -> Q {
        let n = self.frame_n(p);
        let j = self.local(p).j;
        let d = [Q::i() * n[0] / j, Q::i() * n[1] / j];
        self.d_real(p, d, g, true)
    }

    fn blocks(&self, p: Pt) -> [Q; 6] {
        let r_fn = |x: Pt| formulas::scalar_curvature(&self.local(x));
        let a_fn = |x: Pt| formulas::torsion(&self.local(x));
        let j_fn = |x: Pt| self.local(x).j;

        let here = self.local(p);
        let j = here.j;
        let gamma11 = self.l_op(p, &j_fn) / j;
        let gamma01 = Q::i() / j * (self.n_op(p, &j_fn) / j - q(2.0));

        let r1 = |x: Pt| self.l_op(x, &r_fn);
        let r_11 = self.l_op(p, &r1) - gamma11 * r1(p);

        let a = formulas::torsion(&here);
        let a11_0 = self.t_op(p, &a_fn) - q(2.0) * gamma01 * a;

        let a_up = |x: Pt| self.lbar_op(x, &a_fn) / j_fn(x);
        let a11_up1_1 = self.l_op(p, &a_up) - gamma11 * a_up(p);

        let r = formulas::scalar_curvature(&here);
        let q11 = formulas::assemble_q11(r_11, r, a, a11_0, a11_up1_1);
        [gamma11, gamma01, r_11, a11_0, a11_up1_1, q11]
    }
}

fn check_inputs(p: &Point4, h: f64) -> Result<()> {
    if !p.is_finite() || !h.is_finite() {
        return Err(Error::NonFinite("oracle input"));
    }
    if !(MIN_STEP..=MAX_STEP).contains(&h) {
        return Err(Error::OracleStep(h));
    }
    Ok(())
}

fn on_manifold_start<E: JetEvaluator>(src: &E, p: &Point4) -> Result<Pt> {
    let rj = crate::ambient::assemble_rho_jet(p, &src.jet(p))?;
    let rho = rj.rho.re;
    let tol = membership_tol(p);
    if rho.abs() > tol {
        return Err(Error::OffManifold { rho: rho.abs(), tol });
    }
    crate::ambient::frames(&rj)?;
    let j = crate::ambient::levi_fefferman(&rj);
    if !(j > 0.0) {
        return Err(Error::Degenerate(j));
    }
    Ok([Q::from_c64(p.z), Q::from_c64(p.w)])
}

/// Every oracle block at step h for the hypersurface defined by `src`.
pub fn oracle_blocks<E: JetEvaluator>(src: &E, p: &Point4, h: f64) -> Result<OracleBlocks> {
    check_inputs(p, h)?;
    let start = on_manifold_start(src, p)?;
    let ctx = Ctx {
        src,
        h: Quad::from(h),
    };
    // Remove the f64 rounding residue of ϱ(p) before differencing.
    let p0 = ctx.project(start);
    let b = ctx.blocks(p0);
    Ok(OracleBlocks {
        h,
        gamma11: b[0].to_c64(),
        gamma01: b[1].to_c64(),
        r_11: b[2].to_c64(),
        a11_0: b[3].to_c64(),
        a11_up1_1: b[4].to_c64(),
        q11: b[5].to_c64(),
    })
}

/// Oracle Q₁₁ at h, h/2 and h/4, without the consistency verdict.
pub fn oracle_estimate<E: JetEvaluator>(src: &E, p: &Point4, h: f64) -> Result<OracleEstimate> {
    check_inputs(p, h)?;
    let q11 = oracle_blocks(src, p, h)?.q11;
    // h/2 and h/4 may drop below MIN_STEP; the range guards the caller's h only.
    let start = on_manifold_start(src, p)?;
    let at = |step: f64| {
        let ctx = Ctx {
            src,
            h: Quad::from(step),
        };
        ctx.blocks(ctx.project(start))[5].to_c64()
    };
    Ok(OracleEstimate {
        h,
        q11,
        q11_half: at(h / 2.0),
        q11_quarter: at(h / 4.0),
    })
}

/// Richardson consistency: the step is accepted when the estimates have
/// converged below `floor` or successive differences shrink by 4 ± 1.5.
fn richardson_check(est: &OracleEstimate) -> Result<()> {
    let floor = 1e-12 * (1.0 + est.q11_half.norm());
    let d1 = (est.q11 - est.q11_half).norm();
    let d2 = (est.q11_half - est.q11_quarter).norm();
    if d1 <= floor && d2 <= floor {
        return Ok(());
    }
    let ratio = d1 / d2;
    if (2.5..=5.5).contains(&ratio) {
        Ok(())
    } else {
        Err(Error::Richardson { h: est.h, ratio })
    }
}

/// Oracle Q₁₁ at step h for any jet evaluator, after the Richardson check.
pub fn cartan_q11_oracle_with<E: JetEvaluator>(src: &E, p: &Point4, h: f64) -> Result<C64> {
    let est = oracle_estimate(src, p, h)?;
    richardson_check(&est)?;
    Ok(est.q11)
}

/// Oracle Q₁₁ from the holomorphic jet at p. The jet is expanded into its
/// degree-4 Taylor polynomial, which is exact when f has degree ≤ 4.
pub fn cartan_q11_oracle(p: &Point4, fj: &HoloJet4, h: f64) -> Result<C64> {
    if !fj.is_finite() {
        return Err(Error::NonFinite("holomorphic jet"));
    }
    cartan_q11_oracle_with(&HoloPoly::from_jet(*p, fj), p, h)
}
