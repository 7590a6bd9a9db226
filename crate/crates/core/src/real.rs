//! The scalar abstraction: every numerical routine is generic over [`Real`],
//! implemented for `f64` (Standard precision) and [`Dd`] (Extended precision).
//! Complex values are `num_complex::Complex<R>`; the transcendental functions
//! that `num_complex` only offers for `Float` types live in [`CxExt`].

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, Neg, SubAssign};

use num_complex::Complex;
use num_traits::Num;

use crate::dd::Dd;

/// Working precision of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrecisionMode {
    /// IEEE double, at least 15 significant digits.
    Standard,
    /// Double-double, at least 30 significant digits.
    Extended,
}

impl PrecisionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PrecisionMode::Standard => "standard",
            PrecisionMode::Extended => "extended",
        }
    }
}

/// Complex scalar at the precision of `R`.
pub type ComplexValue<R = f64> = Complex<R>;

pub trait Real:
    Copy
    + Send
    + Sync
    + Debug
    + Display
    + Default
    + PartialOrd
    + Num
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + 'static
{
    const MODE: PrecisionMode;
    /// Unit roundoff.
    const EPS: f64;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn from_dd(x: Dd) -> Self;
    fn to_dd(self) -> Dd;
    fn pi() -> Self;

    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn atan2(self, x: Self) -> Self;
    fn floor(self) -> Self;
    fn round(self) -> Self;
    fn is_finite(self) -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_f64(n as f64)
    }

    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }

    fn sin(self) -> Self {
        self.sin_cos().0
    }

    fn cos(self) -> Self {
        self.sin_cos().1
    }

    fn acos(self) -> Self {
        let s = (Self::one() - self * self).abs().sqrt();
        s.atan2(self)
    }

    fn sinh(self) -> Self {
        let e = self.exp();
        (e - Self::one() / e) / Self::from_f64(2.0)
    }

    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one() / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `self^e` for `self > 0`.
    fn powf(self, e: Self) -> Self {
        (e * self.ln()).exp()
    }

    fn hypot(self, other: Self) -> Self {
        let a = self.abs();
        let b = other.abs();
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big.is_zero() {
            return big;
        }
        let r = small / big;
        big * (Self::one() + r * r).sqrt()
    }

    fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl Real for f64 {
    const MODE: PrecisionMode = PrecisionMode::Standard;
    const EPS: f64 = f64::EPSILON / 2.0;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn from_dd(x: Dd) -> Self {
        x.hi() + x.lo()
    }
    fn to_dd(self) -> Dd {
        Dd::from_f64(self)
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
    fn floor(self) -> Self {
        f64::floor(self)
    }
    fn round(self) -> Self {
        f64::round(self)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn acos(self) -> Self {
        f64::acos(self.clamp(-1.0, 1.0))
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn powf(self, e: Self) -> Self {
        f64::powf(self, e)
    }
    fn hypot(self, other: Self) -> Self {
        f64::hypot(self, other)
    }
}

impl Real for Dd {
    const MODE: PrecisionMode = PrecisionMode::Extended;
    const EPS: f64 = Dd::EPSILON;

    fn from_f64(x: f64) -> Self {
        Dd::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        self.hi() + self.lo()
    }
    fn from_dd(x: Dd) -> Self {
        x
    }
    fn to_dd(self) -> Dd {
        self
    }
    fn pi() -> Self {
        Dd::PI
    }
    fn abs(self) -> Self {
        Dd::abs(self)
    }
    fn sqrt(self) -> Self {
        Dd::sqrt(self)
    }
    fn exp(self) -> Self {
        Dd::exp(self)
    }
    fn ln(self) -> Self {
        Dd::ln(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        Dd::sin_cos(self)
    }
    fn atan2(self, x: Self) -> Self {
        Dd::atan2(self, x)
    }
    fn floor(self) -> Self {
        Dd::floor(self)
    }
    fn round(self) -> Self {
        Dd::round(self)
    }
    fn is_finite(self) -> bool {
        Dd::is_finite(self)
    }
    fn powi(self, n: i32) -> Self {
        Dd::powi(self, n)
    }
}

/// Shorthand constructor for a real constant at precision `R`.
#[inline]
pub fn re<R: Real>(x: f64) -> R {
    R::from_f64(x)
}

/// Complex constant from an `f64` pair.
#[inline]
pub fn cx<R: Real>(re: f64, im: f64) -> Complex<R> {
    Complex::new(R::from_f64(re), R::from_f64(im))
}

/// Real number as a complex value.
#[inline]
pub fn cr<R: Real>(x: R) -> Complex<R> {
    Complex::new(x, R::zero())
}

/// Converts a complex value between precisions.
pub fn convert<A: Real, B: Real>(z: Complex<A>) -> Complex<B> {
    Complex::new(B::from_dd(z.re.to_dd()), B::from_dd(z.im.to_dd()))
}

pub fn to_c64<R: Real>(z: Complex<R>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn from_c64<R: Real>(z: Complex<f64>) -> Complex<R> {
    Complex::new(R::from_f64(z.re), R::from_f64(z.im))
}

/// Elementary complex functions for any [`Real`].
pub trait CxExt<R: Real>: Sized {
    /// Modulus, computed without intermediate overflow.
    fn modulus(self) -> R;
    /// Principal argument in (−π, π].
    fn arg_principal(self) -> R;
    fn cexp(self) -> Self;
    /// Principal logarithm.
    fn cln(self) -> Self;
    /// Principal square root.
    fn csqrt(self) -> Self;
    /// Principal power `exp(e · Log self)`; the caller guarantees `self ≠ 0`.
    fn cpow(self, e: Self) -> Self;
    /// Integer power by repeated squaring.
    fn cpowi(self, n: i32) -> Self;
    fn cis(theta: R) -> Self;
    #[allow(clippy::wrong_self_convention)]
    fn is_finite_c(self) -> bool;
}

impl<R: Real> CxExt<R> for Complex<R> {
    fn modulus(self) -> R {
        self.re.hypot(self.im)
    }

    fn arg_principal(self) -> R {
        self.im.atan2(self.re)
    }

    fn cexp(self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Complex::new(m * c, m * s)
    }

    fn cln(self) -> Self {
        Complex::new(self.modulus().ln(), self.arg_principal())
    }

    fn csqrt(self) -> Self {
        if self.re.is_zero() && self.im.is_zero() {
            return self;
        }
        let m = self.modulus();
        let two = R::from_f64(2.0);
        let a = ((m + self.re.abs()) / two).sqrt();
        if self.re >= R::zero() {
            Complex::new(a, self.im / (two * a))
        } else {
            let b = if self.im < R::zero() { -a } else { a };
            Complex::new(self.im.abs() / (two * a), b)
        }
    }

    fn cpow(self, e: Self) -> Self {
        (e * self.cln()).cexp()
    }

    fn cpowi(self, n: i32) -> Self {
        let mut base = if n < 0 { Complex::new(R::one(), R::zero()) / self } else { self };
        let mut k = n.unsigned_abs();
        let mut acc = Complex::new(R::one(), R::zero());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    fn cis(theta: R) -> Self {
        let (s, c) = theta.sin_cos();
        Complex::new(c, s)
    }

    fn is_finite_c(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// `|z|` as `f64`, the common currency of tolerance tests.
pub fn absf<R: Real>(z: Complex<R>) -> f64 {
    z.modulus().to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_helpers_agree_with_std() {
        let z = Complex::new(-0.7, 0.4);
        let w = Complex::new(0.3, -1.1);
        assert!((z.cln() - z.ln()).norm() < 1e-15);
        assert!((z.csqrt() - z.sqrt()).norm() < 1e-15);
        assert!((z.cpow(w) - z.powc(w)).norm() < 1e-14);
        assert!((z.cpowi(-3) - z.powi(-3)).norm() < 1e-13);
        let zd: Complex<Dd> = from_c64(z);
        let e = zd.cln().cexp() - zd;
        assert!(absf(e) < 1e-30);
        assert!(absf(zd.csqrt() * zd.csqrt() - zd) < 1e-30);
    }

    #[test]
    fn branch_cut_on_negative_axis() {
        let z = Complex::new(-1.0, 0.0);
        assert!((z.arg_principal() - std::f64::consts::PI).abs() < 1e-15);
        let zd: Complex<Dd> = from_c64(z);
        assert!((zd.arg_principal() - Dd::PI).abs().to_f64() < 1e-31);
    }

    #[test]
    fn acos_range() {
        assert!((Real::acos(-1.0f64) - std::f64::consts::PI).abs() < 1e-15);
        let a = Real::acos(Dd::from_f64(0.5));
        assert!((a - Dd::PI / Dd::from_f64(3.0)).abs().to_f64() < 1e-31);
    }
}
