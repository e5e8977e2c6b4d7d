use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::LinalgError;

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    /// `F_p` for a prime `p < 2^63`.
    Prime(u64),
    /// Arbitrary-precision rationals.
    Rational,
}

impl Field {
    /// Default field for all computations.
    pub const DEFAULT: Field = Field::Prime(65537);

    /// Checks the modulus and returns the field.
    pub fn prime(p: u64) -> Result<Field, LinalgError> {
        if p >= 1 << 63 || !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Prime(p) => Scalar::Prime { p, v: reduce_i64(v, p) },
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F_{p}"),
            Field::Rational => write!(f, "Q"),
        }
    }
}

/// A single field element tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Prime { p: u64, v: u64 },
    Rational(BigRational),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Prime { p, .. } => Field::Prime(*p),
            Scalar::Rational(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Prime { v, .. } => *v == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    /// Interprets the value as a small signed integer when that is unambiguous:
    /// residues are lifted to the symmetric range `(-p/2, p/2]`.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Prime { p, v } => {
                if *v <= p / 2 {
                    i64::try_from(*v).ok()
                } else {
                    i64::try_from(p - v).ok().map(|x| -x)
                }
            }
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    i64::try_from(q.numer().clone()).ok()
                } else {
                    None
                }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Prime { v, .. } => write!(f, "{v}"),
            Scalar::Rational(q) => write!(f, "{q}"),
        }
    }
}

pub(crate) fn reduce_i64(v: i64, p: u64) -> u64 {
    (v as i128).rem_euclid(p as i128) as u64
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        a * b % p
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Element arithmetic for one concrete field representation.
pub(crate) trait FieldOps {
    type E: Clone + PartialEq + fmt::Debug + Send + Sync;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Caller guarantees `a != 0`.
    fn inv(&self, a: &Self::E) -> Self::E;
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct PrimeOps(pub u64);

impl FieldOps for PrimeOps {
    type E = u64;
    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        reduce_i64(v, self.0)
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.0)
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.0 - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        pow_mod(*a, self.0 - 2, self.0)
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct RationalOps;

impl FieldOps for RationalOps {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        debug_assert!(!a.is_zero());
        let r = a.recip();
        debug_assert!(r.denom().is_positive());
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(65537));
        assert!(is_prime(2_305_843_009_213_693_951));
        assert!(!is_prime(1));
        assert!(!is_prime(65535));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(Field::prime(100).is_err());
    }

    #[test]
    fn symmetric_lift() {
        let f = Field::Prime(7);
        assert_eq!(f.from_i64(-1).to_i64(), Some(-1));
        assert_eq!(f.from_i64(3).to_i64(), Some(3));
        assert_eq!(Field::Rational.from_i64(-5).to_i64(), Some(-5));
    }
}
