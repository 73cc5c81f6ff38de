//! Closed-form pseudohermitian invariants of ϱ = −1 + |z|² + |w|² + 2 Re f
//! in the frame L = ϱ_w ∂_z − ϱ_z ∂_w, and the Cartan tensor component Q₁₁.
//!
//! Shorthand in comments: LL = ϱ_ZZ(L,L), NL = ϱ_ZZ(N,L), NN = ϱ_ZZ(N,N),
//! NLL = ϱ_ZZZ(N,L,L), LLL = ϱ_ZZZ(L,L,L), LL·L(L) = ϱ_ZZZ(L,L,L(L)) and
//! LLLL = ϱ_ZZZZ(L,L,L,L).

pub mod oracle;

use crate::ambient::{assemble_rho_jet, contractions, FrameContractions, JetEvaluator, Point4, RhoJet};
use crate::ambient::{hess_apply, membership_tol};
use crate::error::{Error, Result};
use crate::scalar::{ComplexScalar, C64};

pub use oracle::{
    cartan_q11_oracle, cartan_q11_oracle_with, oracle_blocks, oracle_estimate, OracleBlocks, OracleEstimate,
};

/// Every invariant at one point of M.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantReport {
    pub j: f64,
    pub r: f64,
    pub a11: C64,
    pub gamma11: C64,
    pub gamma01: C64,
    pub a11_0: C64,
    pub a11_up1_1: C64,
    pub r_11: C64,
    pub q2: C64,
    pub q3: C64,
    pub q4: C64,
    pub q11: C64,
}

/// Generic closed forms. No validity checks; callers guarantee J > 0.
pub mod formulas {
    use crate::ambient::FrameContractions;
    use crate::scalar::ComplexScalar;

    /// R = 2/J − |LL|²/J³
    pub fn scalar_curvature<S: ComplexScalar>(c: &FrameContractions<S>) -> S {
        let j = c.j;
        (S::real(2.0) / j - c.rzz_ll.abs_sqr() / j.powi(3)).re_part()
    }

    /// A₁₁ = −i·LL/J
    pub fn torsion<S: ComplexScalar>(c: &FrameContractions<S>) -> S {
        -S::i() * c.rzz_ll / c.j
    }

    /// Γ₀₁¹ = −i(2/J − NN/J²)
    pub fn christoffel_01<S: ComplexScalar>(c: &FrameContractions<S>) -> S {
        -S::i() * (S::real(2.0) / c.j - c.rzz_nn / (c.j * c.j))
    }

    /// Γ₁₁¹ = L(J)/J; since ∂_k J = (ϱ_ZZ·N)_k identically, L(J) = NL.
    pub fn christoffel_11<S: ComplexScalar>(c: &FrameContractions<S>) -> S {
        c.rzz_nl / c.j
    }

    /// A₁₁,₀ = 2 det/J + (2LL + NLL)/J² + LL(conj NN − 3NN)/J³
    pub fn a11_0<S: ComplexScalar>(c: &FrameContractions<S>) -> S {
        let j = c.j;
        let (ll, nn) = (c.rzz_ll, c.rzz_nn);
        c.det_rzz.scale(2.0) / j
            + (ll.scale(2.0) + c.rzzz_nll) / (j * j)
            + ll * (nn.conj() - nn.scale(3.0)) / j.powi(3)
    }

    /// i·A₁₁,¹₁ = −4 det/J − 2(LL + NLL)/J²
    ///          + [LL(conj NN + 6NN) − LLL·conj NL]/J³
    ///          + LL(3|NL|² − |LL|²)/J⁴
    pub fn i_a11_up1_1<S: ComplexScalar>(c: &FrameContractions<S>) -> S {
        let j = c.j;
        let (ll, nl, nn) = (c.rzz_ll, c.rzz_nl, c.rzz_nn);
        -c.det_rzz.scale(4.0) / j - (ll + c.rzzz_nll).scale(2.0) / (j * j)
            + (ll * (nn.conj() + nn.scale(6.0)) - c.rzzz_lll * nl.conj()) / j.powi(3)
            + ll * (nl.abs_sqr().scale(3.0) - ll.abs_sqr()) / j.powi(4)
    }

    pub fn a11_up1_1<S: ComplexScalar>(c: &FrameContractions<S>) -> S {
        -S::i() * i_a11_up1_1(c)
    }

    /// R,₁₁, the second covariant derivative of the Webster curvature.
    pub fn r_11<S: ComplexScalar>(c: &FrameContractions<S>) -> S {
        let j = c.j;
        let (j2, j3, j4, j5) = (j * j, j.powi(3), j.powi(4), j.powi(5));
        let (ll, nl, nn, det) = (c.rzz_ll, c.rzz_nl, c.rzz_nn, c.det_rzz);
        let (nll, lll) = (c.rzzz_nll, c.rzzz_lll);
        let ll2 = ll.abs_sqr();
        -det.scale(4.0) / j - (ll + nll).scale(2.0) / j2 - det.scale(3.0) * ll2 / j3
            + ll.scale(2.0) * (nn.scale(3.0) - nn.conj()) / j3
            - ll.conj() * (c.rzzzz_llll + c.rzzz_ll_dl.scale(3.0)) / j3
            + lll.scale(4.0) * nl.conj() / j3
            + ll * (ll2.scale(5.0) - nl.abs_sqr().scale(12.0)) / j4
            + ll2.scale(3.0) * nll / j4
            + ll.conj().scale(7.0) * nl * lll / j4
            - ll2.scale(15.0) * nl * nl / j5
    }

    /// 𝒬₂ = LL·(−½ conj(LL)·det/J³ − 2 conj(NN)/J³ + |LL|²/J⁴ − 4|NL|²/J⁴
    ///          − (5/2) conj(LL)·NL²/J⁵)
    pub fn q2<S: ComplexScalar>(c: &FrameContractions<S>) -> S {
        c.rzz_ll * p_factor(c)
    }

    /// The bracket of 𝒬₂, i.e. 𝒬₂ / LL.
    pub fn p_factor<S: ComplexScalar>(c: &FrameContractions<S>) -> S {
        let j = c.j;
        let (j3, j4, j5) = (j.powi(3), j.powi(4), j.powi(5));
        let (ll, nl, nn) = (c.rzz_ll, c.rzz_nl, c.rzz_nn);
        -ll.conj() * c.det_rzz.scale(0.5) / j3 - nn.conj().scale(2.0) / j3 + ll.abs_sqr() / j4
            - nl.abs_sqr().scale(4.0) / j4
            - ll.conj() * nl * nl.scale(2.5) / j5
    }

    /// 𝒬₃ = ½|LL|²·NLL/J⁴ − ½ conj(LL)·ϱ_ZZZ(L,L,L(L))/J³
    ///    + (4/3) conj(NL)·LLL/J³ + (7/6) conj(LL)·NL·LLL/J⁴
    pub fn q3<S: ComplexScalar>(c: &FrameContractions<S>) -> S {
        let j = c.j;
        let (j3, j4) = (j.powi(3), j.powi(4));
        let (ll, nl, lll) = (c.rzz_ll, c.rzz_nl, c.rzzz_lll);
        ll.abs_sqr() * c.rzzz_nll.scale(0.5) / j4 - ll.conj() * c.rzzz_ll_dl.scale(0.5) / j3
            + nl.conj() * lll.scale(4.0 / 3.0) / j3
            + ll.conj() * nl * lll.scale(7.0 / 6.0) / j4
    }

    /// 𝒬₄ = −(1/6) conj(LL)·LLLL/J³
    pub fn q4<S: ComplexScalar>(c: &FrameContractions<S>) -> S {
        -c.rzz_ll.conj() * c.rzzzz_llll.scale(1.0 / 6.0) / c.j.powi(3)
    }

    /// The assembly Q₁₁ = R,₁₁/6 + (i/2) R A₁₁ − A₁₁,₀ − (2i/3) A₁₁,¹₁.
    pub fn assemble_q11<S: ComplexScalar>(r_11: S, r: S, a11: S, a11_0: S, a11_up1_1: S) -> S {
        r_11.scale(1.0 / 6.0) + S::i() * r * a11.scale(0.5)
            - a11_0
            - S::i() * a11_up1_1.scale(2.0 / 3.0)
    }
}

fn checked_j(c: &FrameContractions) -> Result<f64> {
    let j = c.j.re;
    if j > 0.0 && j.is_finite() {
        Ok(j)
    } else {
        Err(Error::Degenerate(j))
    }
}

pub fn webster_scalar_curvature(c: &FrameContractions) -> Result<f64> {
    checked_j(c)?;
    Ok(formulas::scalar_curvature(c).re)
}

pub fn torsion_a11(c: &FrameContractions) -> Result<C64> {
    checked_j(c)?;
    Ok(formulas::torsion(c))
}

pub fn christoffel_01(c: &FrameContractions) -> Result<C64> {
    checked_j(c)?;
    Ok(formulas::christoffel_01(c))
}

/// Γ₁₁¹ = L log J, with L(J) from the jet chain rule
/// ∂_k J = Σ_m ϱ_{km} conj(ϱ_m) (valid off M as well).
pub fn christoffel_11(j: &RhoJet) -> Result<C64> {
    let c = contractions(j)?;
    let jv = checked_j(&c)?;
    let n = [j.rho_z.conj(), j.rho_w.conj()];
    let grad_j = hess_apply(&j.hess, &n);
    let l = [j.rho_w, -j.rho_z];
    Ok((l[0] * grad_j[0] + l[1] * grad_j[1]) / jv)
}

pub fn a11_covariant_0(c: &FrameContractions) -> Result<C64> {
    checked_j(c)?;
    Ok(formulas::a11_0(c))
}

pub fn a11_covariant_up1_1(c: &FrameContractions) -> Result<C64> {
    checked_j(c)?;
    Ok(formulas::a11_up1_1(c))
}

pub fn r_covariant_11(c: &FrameContractions) -> Result<C64> {
    checked_j(c)?;
    Ok(formulas::r_11(c))
}

/// Q₁₁ = 𝒬₂ + 𝒬₃ + 𝒬₄ together with every block that enters it.
///
/// The point must lie on M; the closed forms use J|_M = |ϱ_z|² + |ϱ_w|²
/// implicitly through the structure equations.
pub fn cartan_q11(c: &FrameContractions) -> Result<InvariantReport> {
    let j = checked_j(c)?;
    let rho = c.rho.re;
    if !(rho.abs() <= membership_tol(&c.point)) {
        return Err(Error::OffManifold {
            rho: rho.abs(),
            tol: membership_tol(&c.point),
        });
    }
    let q2 = formulas::q2(c);
    let q3 = formulas::q3(c);
    let q4 = formulas::q4(c);
    Ok(InvariantReport {
        j,
        r: formulas::scalar_curvature(c).re,
        a11: formulas::torsion(c),
        gamma11: formulas::christoffel_11(c),
        gamma01: formulas::christoffel_01(c),
        a11_0: formulas::a11_0(c),
        a11_up1_1: formulas::a11_up1_1(c),
        r_11: formulas::r_11(c),
        q2,
        q3,
        q4,
        q11: q2 + q3 + q4,
    })
}

/// All invariants of the hypersurface defined by `src` at `p`.
pub fn invariants_at<E: JetEvaluator>(src: &E, p: &Point4) -> Result<InvariantReport> {
    let rj = assemble_rho_jet(p, &src.jet(p))?;
    cartan_q11(&contractions(&rj)?)
}
