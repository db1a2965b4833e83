//! Scalar fields used by the linear algebra layer.
//!
//! Two fields are provided: the rationals `Q` (arbitrary precision) and the
//! prime field `Fp` with `p = 2^61 - 1`. Realizations are built over `Q`; the
//! randomized rank computations of the oracle run over `Fp`. Reduction mod `p`
//! of a `p`-integral rational matrix never increases its rank, so a full rank
//! found over `Fp` is a full rank over `Q`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

/// Operations shared by `Q` and `Fp`.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
    /// Image of a rational number. Panics if the denominator is not invertible.
    fn from_q(q: &Q) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Field for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
}

/// The Mersenne prime `2^61 - 1`.
pub const P: u64 = (1u64 << 61) - 1;

/// Element of the prime field `Z / (2^61 - 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp(u64);

impl Fp {
    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn reduce(x: u128) -> u64 {
        let lo = (x as u64) & P;
        let hi = (x >> 61) as u64;
        let mut s = lo + (hi & P) + ((x >> 122) as u64);
        while s >= P {
            s -= P;
        }
        s
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = Field::mul(&acc, &base);
            }
            base = Field::mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn from_bigint(b: &BigInt) -> Fp {
        let m = b.mod_floor(&BigInt::from(P));
        Fp(m.to_u64().expect("reduced value fits"))
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Field for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, other: &Self) -> Self {
        let s = self.0 + other.0;
        Fp(if s >= P { s - P } else { s })
    }
    fn sub(&self, other: &Self) -> Self {
        Fp(if self.0 >= other.0 {
            self.0 - other.0
        } else {
            self.0 + P - other.0
        })
    }
    fn mul(&self, other: &Self) -> Self {
        Fp(Fp::reduce(self.0 as u128 * other.0 as u128))
    }
    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
    fn from_i64(v: i64) -> Self {
        if v >= 0 {
            Fp::new(v as u64)
        } else {
            Field::neg(&Fp::new(v.unsigned_abs()))
        }
    }
    fn from_q(q: &Q) -> Self {
        let num = Fp::from_bigint(q.numer());
        let den = Fp::from_bigint(q.denom());
        let inv = den
            .inv()
            .expect("denominator divisible by the working prime");
        Field::mul(&num, &inv)
    }
}

/// Convenience constructor for small rationals.
pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer value of a rational, if it is one.
pub fn q_to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

/// Whether a rational number is the square of a rational number.
pub fn q_is_square(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_inverse_roundtrip() {
        for v in [1i64, 2, 3, -7, 123_456_789, -(1 << 40)] {
            let x = Fp::from_i64(v);
            let y = x.inv().unwrap();
            assert_eq!(Field::mul(&x, &y), Fp::one());
        }
    }

    #[test]
    fn fp_from_rational_matches_division() {
        let half = Fp::from_q(&q(1, 2));
        assert_eq!(Field::mul(&half, &Fp::from_i64(2)), Fp::one());
        let neg = Fp::from_q(&q(-3, 4));
        assert_eq!(Field::mul(&neg, &Fp::from_i64(4)), Fp::from_i64(-3));
    }

    #[test]
    fn reduction_handles_large_products() {
        let a = Fp::new(P - 1);
        assert_eq!(Field::mul(&a, &a), Fp::one());
    }

    #[test]
    fn rational_squares() {
        assert_eq!(q_is_square(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(q_is_square(&q(2, 1)), None);
        assert_eq!(q_is_square(&q(-1, 1)), None);
    }
}
