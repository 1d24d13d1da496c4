//! Scalar types the decoder can run on.
//!
//! [`Counted`] wraps `f64` and counts every multiplication and division in a
//! thread-local counter, charging one division each for `tanh` and `φ`. Running a decoder over `Counted` shows which check
//! node rules are free of multiplications.

use std::cell::Cell;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

pub trait Real:
    Copy
    + Debug
    + Default
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + AddAssign
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + 'static
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    fn tanh(self) -> Self;
    /// `φ(x) = −ln tanh(x/2)` for `x ≥ 0`; see [`phi`].
    fn phi(self) -> Self;

    #[inline]
    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    #[inline]
    fn infinity() -> Self {
        Self::from_f64(f64::INFINITY)
    }

    /// `sign(x) = −1` iff `x < 0`; zero counts as positive.
    #[inline]
    fn is_negative(self) -> bool {
        self < Self::zero()
    }

    /// Clamps to `[−limit, limit]`.
    #[inline]
    fn clamp_abs(self, limit: Self) -> Self {
        if self > limit {
            limit
        } else if self < -limit {
            -limit
        } else {
            self
        }
    }
}

/// `φ(x) = −ln tanh(x/2) = ln((eˣ + 1)/(eˣ − 1))` for `x ≥ 0`.
///
/// φ is its own inverse, so `2·atanh(∏ tanh(xᵢ/2)) = φ(Σ φ(xᵢ))` for
/// positive `xᵢ`. Working with φ keeps full relative precision where
/// `tanh(x/2)` rounds to one. `φ(0) = ∞` and `φ(∞) = 0`.
#[inline]
pub fn phi(x: f64) -> f64 {
    (2.0 / x.exp_m1()).ln_1p()
}

impl Real for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn tanh(self) -> Self {
        f64::tanh(self)
    }
    #[inline]
    fn phi(self) -> Self {
        phi(self)
    }
}

impl Real for f32 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
    #[inline]
    fn abs(self) -> Self {
        f32::abs(self)
    }
    #[inline]
    fn tanh(self) -> Self {
        f32::tanh(self)
    }
    #[inline]
    fn phi(self) -> Self {
        (2.0 / self.exp_m1()).ln_1p()
    }
}

thread_local! {
    static MULTIPLICATIONS: Cell<u64> = const { Cell::new(0) };
}

/// `f64` that counts multiplications and divisions on the current thread.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct Counted(pub f64);

impl Counted {
    /// Multiplications (and divisions) performed on this thread since the
    /// last reset.
    pub fn multiplications() -> u64 {
        MULTIPLICATIONS.with(Cell::get)
    }

    pub fn reset() {
        MULTIPLICATIONS.with(|c| c.set(0));
    }

    fn bump() {
        MULTIPLICATIONS.with(|c| c.set(c.get() + 1));
    }
}

impl Add for Counted {
    type Output = Counted;
    #[inline]
    fn add(self, rhs: Counted) -> Counted {
        Counted(self.0 + rhs.0)
    }
}

impl AddAssign for Counted {
    #[inline]
    fn add_assign(&mut self, rhs: Counted) {
        self.0 += rhs.0;
    }
}

impl Sub for Counted {
    type Output = Counted;
    #[inline]
    fn sub(self, rhs: Counted) -> Counted {
        Counted(self.0 - rhs.0)
    }
}

impl Neg for Counted {
    type Output = Counted;
    #[inline]
    fn neg(self) -> Counted {
        Counted(-self.0)
    }
}

impl Mul for Counted {
    type Output = Counted;
    #[inline]
    fn mul(self, rhs: Counted) -> Counted {
        Counted::bump();
        Counted(self.0 * rhs.0)
    }
}

impl Div for Counted {
    type Output = Counted;
    #[inline]
    fn div(self, rhs: Counted) -> Counted {
        Counted::bump();
        Counted(self.0 / rhs.0)
    }
}

impl Real for Counted {
    fn from_f64(x: f64) -> Self {
        Counted(x)
    }
    fn to_f64(self) -> f64 {
        self.0
    }
    fn abs(self) -> Self {
        Counted(self.0.abs())
    }
    fn tanh(self) -> Self {
        Counted::bump();
        Counted(self.0.tanh())
    }
    fn phi(self) -> Self {
        Counted::bump();
        Counted(phi(self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_only_products() {
        Counted::reset();
        let a = Counted(3.0);
        let b = Counted(-2.0);
        let _ = a + b - a;
        let _ = -a;
        let _ = a.abs().clamp_abs(Counted(1.0));
        assert_eq!(Counted::multiplications(), 0);
        let _ = a * b;
        let _ = a / b;
        assert_eq!(Counted::multiplications(), 2);
    }

    #[test]
    fn phi_values() {
        // φ(1) = ln((e + 1)/(e − 1)) to 30 digits: 0.771936832905304725070639140035
        assert!((phi(1.0) - 0.771_936_832_905_304_7).abs() < 1e-15);
        assert_eq!(phi(0.0), f64::INFINITY);
        assert_eq!(phi(f64::INFINITY), 0.0);
        // φ(40) = ln((1 + e⁻⁴⁰)/(1 − e⁻⁴⁰)) ≈ 2e⁻⁴⁰, where tanh(20) is already 1.
        assert!((phi(40.0) / (2.0 * (-40f64).exp()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phi_is_an_involution() {
        for x in [1e-9, 0.01, 0.5, 2.0, 10.0, 25.0] {
            assert!((phi(phi(x)) / x - 1.0).abs() < 1e-9, "{x}");
        }
    }

    #[test]
    fn sign_of_zero_is_positive() {
        assert!(!0.0f64.is_negative());
        assert!(!(-0.0f64).is_negative());
        assert!((-1e-300f64).is_negative());
    }
}
