//! Exact scalars: half-integer quantum numbers, factorials and binomials over
//! big integers, and signed square roots of rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// A spin magnitude or magnetic quantum number `j ∈ ½ℤ`, stored as `2j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// The integer value, if this is one.
    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.0), BigInt::from(2))
    }

    /// `2j + 1`.
    pub fn multiplicity(self) -> i64 {
        self.0 + 1
    }

    /// Values `self, self + 1, …, hi` (empty when `hi < self`).
    pub fn range_to(self, hi: HalfInt) -> impl Iterator<Item = HalfInt> {
        (self.0..=hi.0).step_by(2).map(HalfInt)
    }

    /// `true` when `(j, m)` is a valid pair: `|m| ≤ j` and `j - m ∈ ℤ`.
    pub fn admits(self, m: HalfInt) -> bool {
        self.0 >= 0 && m.0.abs() <= self.0 && (self.0 - m.0) % 2 == 0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

/// `n!`.
pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `C(n, k)`, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Factorial of a signed argument; `None` for negative input.
pub(crate) fn factorial_checked(n: i64) -> Option<BigInt> {
    (n >= 0).then(|| factorial(n as u64))
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int_rational(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Lossy conversion that stays finite for ratios of huge integers.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() && (x != 0.0 || r.is_zero()) {
            return x;
        }
    }
    // Fall back to scaling by bit length.
    let shift = r.numer().bits() as i64 - r.denom().bits() as i64;
    let scaled = if shift > 0 {
        BigRational::new(r.numer().clone(), r.denom() << (shift as usize))
    } else {
        BigRational::new(r.numer() << ((-shift) as usize), r.denom().clone())
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

fn sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// The exact square root of a nonnegative rational, when it is rational.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(sqrt_exact(r.numer())?, sqrt_exact(r.denom())?))
}

/// A value `sign · √radicand` with `radicand ≥ 0` rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedSqrtRational {
    sign: i8,
    radicand: BigRational,
}

impl SignedSqrtRational {
    pub fn zero() -> Self {
        SignedSqrtRational { sign: 0, radicand: BigRational::zero() }
    }

    pub fn one() -> Self {
        SignedSqrtRational { sign: 1, radicand: BigRational::one() }
    }

    /// `sign · √radicand`. A zero sign or radicand gives zero.
    ///
    /// Panics if the radicand is negative.
    pub fn new(sign: i8, radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "negative radicand {radicand}");
        if sign == 0 || radicand.is_zero() {
            return Self::zero();
        }
        SignedSqrtRational { sign: sign.signum(), radicand }
    }

    /// The value of a rational `r`, i.e. `sign(r) · √(r²)`.
    pub fn from_rational(r: &BigRational) -> Self {
        let sign = match r.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        };
        Self::new(sign, r * r)
    }

    /// `c · √radicand` for a rational `c`.
    pub fn scaled_sqrt(c: &BigRational, radicand: BigRational) -> Self {
        Self::from_rational(c).mul(&Self::new(1, radicand))
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The square of the value, always rational.
    pub fn square(&self) -> BigRational {
        self.radicand.clone()
    }

    /// `sign · radicand`, which determines the value uniquely.
    pub fn signed_square(&self) -> BigRational {
        match self.sign {
            0 => BigRational::zero(),
            1 => self.radicand.clone(),
            _ => -self.radicand.clone(),
        }
    }

    pub fn mul(&self, other: &SignedSqrtRational) -> SignedSqrtRational {
        Self::new(self.sign * other.sign, &self.radicand * &other.radicand)
    }

    pub fn neg(&self) -> SignedSqrtRational {
        SignedSqrtRational { sign: -self.sign, radicand: self.radicand.clone() }
    }

    /// The value as a rational, when the radicand is a perfect square.
    pub fn to_rational(&self) -> Option<BigRational> {
        let root = rational_sqrt(&self.radicand)?;
        Some(if self.sign < 0 { -root } else { root })
    }

    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * rational_to_f64(&self.radicand).sqrt()
    }
}

impl Mul for &SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn mul(self, rhs: &SignedSqrtRational) -> SignedSqrtRational {
        SignedSqrtRational::mul(self, rhs)
    }
}

impl fmt::Display for SignedSqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            1 => write!(f, "√({})", self.radicand),
            _ => write!(f, "-√({})", self.radicand),
        }
    }
}

pub(crate) fn sign_of(n: &BigInt) -> i8 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
