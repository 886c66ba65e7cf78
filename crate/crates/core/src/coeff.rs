//! Exact rational coefficients for differential polynomials.
//!
//! Evaluation of graphs only ever produces small integers and a handful of
//! powers of two in the denominators, so a machine-word rational is enough
//! here. Every operation is checked; an overflow aborts loudly instead of
//! wrapping. Linear algebra uses arbitrary precision (see [`crate::linalg`]).

use core::cmp::Ordering;
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

/// A rational number with `i128` numerator and denominator, always reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Q(Ratio<i128>);

impl Q {
    pub const ZERO: Q = Q(Ratio::new_raw(0, 1));
    pub const ONE: Q = Q(Ratio::new_raw(1, 1));

    pub fn new(numer: i128, denom: i128) -> Q {
        assert!(denom != 0, "zero denominator");
        Q(Ratio::new(numer, denom))
    }

    pub fn int(n: i128) -> Q {
        Q(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Q {
        Q(self.0.abs())
    }

    pub fn recip(&self) -> Q {
        assert!(!self.is_zero(), "reciprocal of zero");
        Q(self.0.recip())
    }

    pub fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numer()), BigInt::from(self.denom()))
    }

    /// Converts back from an arbitrary precision rational, if it fits.
    pub fn from_big(r: &BigRational) -> Option<Q> {
        let n = r.numer().to_i128()?;
        let d = r.denom().to_i128()?;
        Some(Q::new(n, d))
    }

    /// Residue modulo a prime `p` (which must not divide the denominator).
    pub fn mod_p(&self, p: u64) -> u64 {
        let p128 = p as i128;
        let n = self.numer().rem_euclid(p128) as u64;
        let d = self.denom().rem_euclid(p128) as u64;
        crate::modp::mul(n, crate::modp::inv(d, p), p)
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Lowest terms, `p/q` or plain `p` when the denominator is one.
impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseQError;

impl fmt::Display for ParseQError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid rational literal")
    }
}

impl FromStr for Q {
    type Err = ParseQError;

    fn from_str(s: &str) -> Result<Q, ParseQError> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i128 = n.trim().parse().map_err(|_| ParseQError)?;
                let d: i128 = d.trim().parse().map_err(|_| ParseQError)?;
                if d == 0 {
                    return Err(ParseQError);
                }
                Ok(Q::new(n, d))
            }
            None => s.parse::<i128>().map(Q::int).map_err(|_| ParseQError),
        }
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Q {
        Q::int(n as i128)
    }
}

impl From<i32> for Q {
    fn from(n: i32) -> Q {
        Q::int(n as i128)
    }
}

impl Add for Q {
    type Output = Q;
    fn add(self, rhs: Q) -> Q {
        Q(self
            .0
            .checked_add(&rhs.0)
            .expect("rational overflow in add"))
    }
}

impl Sub for Q {
    type Output = Q;
    fn sub(self, rhs: Q) -> Q {
        Q(self
            .0
            .checked_sub(&rhs.0)
            .expect("rational overflow in sub"))
    }
}

impl Mul for Q {
    type Output = Q;
    fn mul(self, rhs: Q) -> Q {
        Q(self
            .0
            .checked_mul(&rhs.0)
            .expect("rational overflow in mul"))
    }
}

impl Div for Q {
    type Output = Q;
    fn div(self, rhs: Q) -> Q {
        assert!(!rhs.is_zero(), "division by zero");
        Q(self
            .0
            .checked_div(&rhs.0)
            .expect("rational overflow in div"))
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-self.0)
    }
}

impl AddAssign for Q {
    fn add_assign(&mut self, rhs: Q) {
        *self = *self + rhs;
    }
}

impl SubAssign for Q {
    fn sub_assign(&mut self, rhs: Q) {
        *self = *self - rhs;
    }
}

impl MulAssign for Q {
    fn mul_assign(&mut self, rhs: Q) {
        *self = *self * rhs;
    }
}

impl Sum for Q {
    fn sum<I: Iterator<Item = Q>>(iter: I) -> Q {
        iter.fold(Q::ZERO, |a, b| a + b)
    }
}

impl Zero for Q {
    fn zero() -> Q {
        Q::ZERO
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Q {
    fn one() -> Q {
        Q::ONE
    }
}

/// Compares a rational against zero.
pub fn sign(q: &Q) -> Ordering {
    q.numer().cmp(&0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_lowest_terms() {
        assert_eq!(alloc::format!("{}", Q::new(6, -4)), "-3/2");
        assert_eq!(alloc::format!("{}", Q::new(8, 4)), "2");
        assert_eq!("10/4".parse::<Q>().unwrap(), Q::new(5, 2));
        assert!("1/0".parse::<Q>().is_err());
    }

    #[test]
    #[should_panic(expected = "rational overflow")]
    fn overflow_is_loud() {
        let big = Q::int(i128::MAX / 2);
        let _ = big * Q::int(4);
    }
}
