//! Complex scalar types shared by the closed forms, the oracle and the
//! chain-rule derivatives.
//!
//! Everything downstream is written once against [`ComplexScalar`] and
//! instantiated with plain `f64` complexes, double-double complexes (oracle)
//! or [`Dual`] numbers (exact directional derivatives).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;
use qd::Quad;

pub type C64 = Complex<f64>;

/// Complex number with double-double real and imaginary parts (~32 digits).
pub type CQuad = Complex<Quad>;

pub trait ComplexScalar:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_c64(z: C64) -> Self;

    /// Rounds back to an ordinary complex value.
    fn to_c64(self) -> C64;

    fn conj(self) -> Self;

    fn real(x: f64) -> Self {
        Self::from_c64(C64::new(x, 0.0))
    }

    fn zero() -> Self {
        Self::real(0.0)
    }

    fn one() -> Self {
        Self::real(1.0)
    }

    fn i() -> Self {
        Self::from_c64(C64::new(0.0, 1.0))
    }

    fn scale(self, s: f64) -> Self {
        self * Self::real(s)
    }

    /// Real part, kept in the scalar type.
    fn re_part(self) -> Self {
        (self + self.conj()).scale(0.5)
    }

    /// Imaginary part, kept in the scalar type.
    fn im_part(self) -> Self {
        (self - self.conj()) * Self::from_c64(C64::new(0.0, -0.5))
    }

    fn abs_sqr(self) -> Self {
        (self * self.conj()).re_part()
    }

    fn powi(self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl ComplexScalar for C64 {
    #[inline]
    fn from_c64(z: C64) -> Self {
        z
    }

    #[inline]
    fn to_c64(self) -> C64 {
        self
    }

    #[inline]
    fn conj(self) -> Self {
        Complex::conj(&self)
    }

    #[inline]
    fn re_part(self) -> Self {
        C64::new(self.re, 0.0)
    }

    #[inline]
    fn im_part(self) -> Self {
        C64::new(self.im, 0.0)
    }

    #[inline]
    fn abs_sqr(self) -> Self {
        C64::new(self.norm_sqr(), 0.0)
    }
}

impl ComplexScalar for CQuad {
    fn from_c64(z: C64) -> Self {
        Complex::new(Quad::from(z.re), Quad::from(z.im))
    }

    fn to_c64(self) -> C64 {
        C64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }

    fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }

    fn re_part(self) -> Self {
        Complex::new(self.re, Quad::from(0.0))
    }

    fn im_part(self) -> Self {
        Complex::new(self.im, Quad::from(0.0))
    }
}

/// First-order dual number over ℂ with a *real* infinitesimal.
///
/// `value + tangent·ε` where ε is real, so conjugation acts on both parts.
/// Evaluating a polynomial in (z, z̄, w, w̄) at `p + ε·δ` yields the real
/// directional derivative along δ in the tangent slot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub value: C64,
    pub tangent: C64,
}

impl Dual {
    pub const fn new(value: C64, tangent: C64) -> Self {
        Dual { value, tangent }
    }

    pub const fn constant(value: C64) -> Self {
        Dual {
            value,
            tangent: C64::new(0.0, 0.0),
        }
    }
}

impl Add for Dual {
    type Output = Dual;
    #[inline]
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.value + o.value, self.tangent + o.tangent)
    }
}

impl Sub for Dual {
    type Output = Dual;
    #[inline]
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.value - o.value, self.tangent - o.tangent)
    }
}

impl Mul for Dual {
    type Output = Dual;
    #[inline]
    fn mul(self, o: Dual) -> Dual {
        Dual::new(
            self.value * o.value,
            self.value * o.tangent + self.tangent * o.value,
        )
    }
}

impl Div for Dual {
    type Output = Dual;
    #[inline]
    fn div(self, o: Dual) -> Dual {
        let q = self.value / o.value;
        Dual::new(q, (self.tangent - q * o.tangent) / o.value)
    }
}

impl Neg for Dual {
    type Output = Dual;
    #[inline]
    fn neg(self) -> Dual {
        Dual::new(-self.value, -self.tangent)
    }
}

impl ComplexScalar for Dual {
    #[inline]
    fn from_c64(z: C64) -> Self {
        Dual::constant(z)
    }

    #[inline]
    fn to_c64(self) -> C64 {
        self.value
    }

    #[inline]
    fn conj(self) -> Self {
        Dual::new(self.value.conj(), self.tangent.conj())
    }
}
