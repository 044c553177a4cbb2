use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

/// Field the simplex runs over: `f64` with tolerances, or exact rationals.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    /// Exact conversion for rationals (binary expansion of the float).
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// Values within `eps` of zero are treated as zero when pivoting.
    fn eps() -> Self;
    /// Phase-one residual above which a program is declared infeasible.
    fn feasibility_eps() -> Self;
    /// Flush round-off debris to zero after a pivot.
    fn snap(self) -> Self {
        self
    }

    fn is_pos(&self) -> bool {
        *self > Self::eps()
    }

    fn is_neg(&self) -> bool {
        *self < -Self::eps()
    }

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    fn zero() -> f64 {
        0.0
    }
    fn one() -> f64 {
        1.0
    }
    fn from_f64(v: f64) -> f64 {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn eps() -> f64 {
        1e-11
    }
    fn feasibility_eps() -> f64 {
        1e-9
    }
    fn snap(self) -> f64 {
        if self.abs() < 1e-14 {
            0.0
        } else {
            self
        }
    }
}

impl Scalar for BigRational {
    fn zero() -> BigRational {
        Zero::zero()
    }
    fn one() -> BigRational {
        num_traits::One::one()
    }
    fn from_f64(v: f64) -> BigRational {
        <BigRational as FromPrimitive>::from_f64(v).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn eps() -> BigRational {
        Zero::zero()
    }
    fn feasibility_eps() -> BigRational {
        Zero::zero()
    }
    fn abs_val(&self) -> BigRational {
        self.abs()
    }
}

/// `num/den` as an exact rational.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Best rational approximation with denominator at most `max_den`
/// (continued fractions). Recovers decimal inputs such as `0.7 → 7/10`.
pub fn rational_approx(v: f64, max_den: i64) -> BigRational {
    let negative = v < 0.0;
    let mut x = v.abs();
    let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..64 {
        let a = x.floor();
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = x - a;
        if frac < 1e-12 {
            break;
        }
        x = 1.0 / frac;
    }
    let r = BigRational::new(BigInt::from(h1), BigInt::from(k1.max(1)));
    if negative {
        -r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continued_fraction_recovers_decimals() {
        assert_eq!(rational_approx(0.7, 1_000_000), ratio(7, 10));
        assert_eq!(rational_approx(-0.125, 1000), ratio(-1, 8));
        assert_eq!(rational_approx(5.0 / 3.0, 1000), ratio(5, 3));
        assert_eq!(rational_approx(2.0, 10), ratio(2, 1));
    }
}
