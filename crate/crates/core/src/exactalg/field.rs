//! Coefficient fields.
//!
//! Everything above this module is generic over [`Field`]. Two families of
//! fields are provided: the rationals (`BigRational`, exact and arbitrary
//! precision) and the prime fields [`Fp<P>`] with the prime fixed at compile
//! time. Mixing fields is therefore a type error rather than a runtime one.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Runtime description of a field, used by the file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldTag {
    Rationals,
    Prime(u64),
}

impl FieldTag {
    pub fn characteristic(self) -> u64 {
        match self {
            FieldTag::Rationals => 0,
            FieldTag::Prime(p) => p,
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rationals => write!(f, "Q"),
            FieldTag::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl std::str::FromStr for FieldTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldTag::Rationals);
        }
        let p: u64 = s
            .parse()
            .map_err(|_| format!("field must be `Q` or a prime, got `{s}`"))?;
        if !is_prime(p) {
            return Err(format!("{p} is not prime"));
        }
        Ok(FieldTag::Prime(p))
    }
}

/// Deterministic trial-division primality test (the primes used here are small).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// An exact field of coefficients.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    fn tag() -> FieldTag;

    fn characteristic() -> u64 {
        Self::tag().characteristic()
    }

    fn from_i64(n: i64) -> Self;

    fn from_bigint(n: &BigInt) -> Self;

    /// Image of a rational number; `None` when the denominator is not invertible.
    fn from_rational(q: &BigRational) -> Option<Self>;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// A square root inside the field, if one exists.
    fn sqrt(&self) -> Option<Self>;

    /// All elements, for finite fields.
    fn elements() -> Option<Vec<Self>>;

    /// Parses `a` or `a/b` (integers, optional sign).
    fn parse_scalar(s: &str) -> Option<Self> {
        let q = parse_rational(s)?;
        Self::from_rational(&q)
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

/// Parses `a`, `-a`, `a/b` into a reduced rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s.as_str(), "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

impl Field for BigRational {
    fn tag() -> FieldTag {
        FieldTag::Rationals
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn from_rational(q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = bigint_sqrt_exact(self.numer())?;
        let d = bigint_sqrt_exact(self.denom())?;
        Some(BigRational::new(n, d))
    }

    fn elements() -> Option<Vec<Self>> {
        None
    }
}

fn bigint_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// An element of the prime field with `P` elements.
///
/// `P` must be prime; this is checked when the first element is built in
/// debug builds and by [`FieldTag`] parsing at the boundaries.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        debug_assert!(is_prime(P), "Fp modulus {P} is not prime");
        Fp(v.rem_euclid(P as i64) as u64)
    }

    /// Canonical representative in `[0, P)`.
    pub fn value(self) -> u64 {
        self.0
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 + rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 + P as u128 - rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero in prime field")
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> AddAssign for Fp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u64> SubAssign for Fp<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u64> MulAssign for Fp<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u64> Field for Fp<P> {
    fn tag() -> FieldTag {
        FieldTag::Prime(P)
    }

    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }

    fn from_bigint(n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(P));
        Fp(r.to_u64().expect("residue fits in u64"))
    }

    fn from_rational(q: &BigRational) -> Option<Self> {
        let den = Self::from_bigint(q.denom());
        let inv = den.inv()?;
        Some(Self::from_bigint(q.numer()) * inv)
    }

    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Fermat: a^(p-2) = a^(-1)
        Some(Field::pow(self, P - 2))
    }

    fn sqrt(&self) -> Option<Self> {
        if self.0 == 0 || P == 2 {
            return Some(*self);
        }
        // Small primes only; a linear scan is the simplest exact method.
        (1..P).map(Fp).find(|r| *r * *r == *self)
    }

    fn elements() -> Option<Vec<Self>> {
        Some((0..P).map(Fp).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F5 = Fp<5>;

    #[test]
    fn prime_field_arithmetic() {
        let a = F5::new(3);
        let b = F5::new(4);
        assert_eq!((a + b).value(), 2);
        assert_eq!((a - b).value(), 4);
        assert_eq!((a * b).value(), 2);
        assert_eq!((a / b) * b, a);
        assert_eq!((-a).value(), 2);
        assert_eq!(F5::new(-1).value(), 4);
        assert!(F5::zero().inv().is_none());
    }

    #[test]
    fn rational_parsing_is_reduced() {
        let q = parse_rational(" -6/4 ").unwrap();
        assert_eq!(q, BigRational::new(BigInt::from(-3), BigInt::from(2)));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
        assert_eq!(
            F5::from_rational(&parse_rational("1/4").unwrap()),
            Some(F5::new(4))
        );
        assert_eq!(F5::from_rational(&parse_rational("1/5").unwrap()), None);
    }

    #[test]
    fn square_roots() {
        let q = parse_rational("9/4").unwrap();
        assert_eq!(q.sqrt(), parse_rational("3/2"));
        assert_eq!(parse_rational("2").unwrap().sqrt(), None);
        assert_eq!(parse_rational("-1").unwrap().sqrt(), None);
        assert!(Fp::<3>::new(2).sqrt().is_none());
        assert_eq!(Fp::<5>::new(4).sqrt().map(|r| r * r), Some(Fp::<5>::new(4)));
    }

    #[test]
    fn field_tags() {
        assert_eq!("Q".parse::<FieldTag>(), Ok(FieldTag::Rationals));
        assert_eq!("7".parse::<FieldTag>(), Ok(FieldTag::Prime(7)));
        assert!("8".parse::<FieldTag>().is_err());
        assert_eq!(<Fp<3> as Field>::characteristic(), 3);
    }
}
