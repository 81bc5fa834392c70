//! Arbitrary-precision rationals and the field abstraction shared by the
//! exact layers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Minimal field interface: everything the polynomial/series layers need.
///
/// `inv` returns `None` on zero so callers decide how to fail.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }
    fn from_i64(v: i64) -> Self {
        // default: repeated addition is wasteful; overridden where it matters
        let mut acc = Self::zero();
        let one = Self::one();
        let n = v.unsigned_abs();
        for _ in 0..n {
            acc = acc.add(&one);
        }
        if v < 0 {
            acc.neg()
        } else {
            acc
        }
    }
    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// Reduced fraction of arbitrary-precision integers, denominator kept positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Rational(BigRational::from_integer(v))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Exact square root if the rational is a perfect square.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &n * &n == *self.numer() && &d * &d == *self.denom() {
            Some(Rational(BigRational::new(n, d)))
        } else {
            None
        }
    }

    /// Writes `self = q^2 * m` with `m` a squarefree integer, returning `(q, m)`.
    ///
    /// Used to place square roots of discriminants into a canonical quadratic
    /// field. Trial division is fine at the sizes this artifact produces.
    pub fn squarefree_decomposition(&self) -> (Rational, BigInt) {
        assert!(!self.is_zero(), "squarefree part of zero");
        // self = p/q = (p*q)/q^2, so handle the integer p*q.
        let pq: BigInt = self.numer() * self.denom();
        let neg = pq.is_negative();
        let mut n = pq.abs();
        let mut square = BigInt::one();
        let mut free = BigInt::one();
        let mut p = BigInt::from(2);
        while &p * &p <= n {
            let mut e = 0u32;
            while (&n % &p).is_zero() {
                n /= &p;
                e += 1;
            }
            if e > 0 {
                square *= p.pow(e / 2);
                if e % 2 == 1 {
                    free *= &p;
                }
            }
            p += 1;
        }
        free *= &n; // leftover prime
        if neg {
            free = -free;
        }
        let q = Rational(BigRational::new(square, self.denom().clone()));
        (q, free)
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn add(&self, rhs: &Self) -> Self {
        Rational(&self.0 + &rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Rational(&self.0 - &rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Rational(&self.0 * &rhs.0)
    }
    fn neg(&self) -> Self {
        Rational(-self.0.clone())
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Field::add(&self, &rhs)
    }
}
impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Field::sub(&self, &rhs)
    }
}
impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Field::mul(&self, &rhs)
    }
}
impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Field::div(&self, &rhs).expect("division by zero")
    }
}
impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Field::neg(&self)
    }
}
