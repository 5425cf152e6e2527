//! Scalar rings used throughout the engine.
//!
//! Exact identities are checked with [`Rational`]; anything that involves
//! `Γ` is evaluated in `f64` and kept apart from the exact code paths.

mod series;
mod special;

pub use series::TruncatedSeries;
pub use special::{gamma, gamma1, ln_gamma, rho, KAPPA};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Arbitrary-precision exact rational. Always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as an exact rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `κ = 3/2` as an exact rational.
pub fn kappa() -> Rational {
    rat(3, 2)
}

/// Nearest `f64` to an exact rational.
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator or denominator out of f64 range: scale both down
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// `q^n` for integer `n` (negative powers require `q ≠ 0`).
pub fn pow(q: &Rational, n: i64) -> Rational {
    if n >= 0 {
        num_traits::pow(q.clone(), n as usize)
    } else {
        num_traits::pow(q.recip(), (-n) as usize)
    }
}

/// Minimal ring interface shared by exact and floating coefficients.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Multiply by an exact rational.
    fn scale_q(&self, q: &Rational) -> Self;
    /// Multiplicative inverse when it exists.
    fn try_inverse(&self) -> Option<Self>;
    /// Magnitude as a float, for reporting.
    fn magnitude(&self) -> f64;
}

impl Scalar for Rational {
    fn scale_q(&self, q: &Rational) -> Self {
        self * q
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn magnitude(&self) -> f64 {
        to_f64(&self.abs())
    }
}

impl Scalar for f64 {
    fn scale_q(&self, q: &Rational) -> Self {
        self * to_f64(q)
    }
    fn try_inverse(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..30).prop_map(|(n, d)| rat(n, d))
    }

    #[test]
    fn rationals_are_reduced() {
        let q = rat(6, -4);
        assert_eq!(q, rat(-3, 2));
        assert!(q.denom() > &BigInt::zero());
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!(int(4).to_string(), "4");
    }

    #[test]
    fn kappa_is_three_halves() {
        assert_eq!(kappa(), rat(3, 2));
        assert_eq!(KAPPA, 1.5);
    }

    #[test]
    fn integer_powers() {
        assert_eq!(pow(&rat(2, 3), 3), rat(8, 27));
        assert_eq!(pow(&rat(2, 3), -2), rat(9, 4));
        assert_eq!(pow(&rat(5, 7), 0), int(1));
    }

    proptest! {
        #[test]
        fn field_axioms(a in small(), b in small(), c in small()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
        }
    }
}
