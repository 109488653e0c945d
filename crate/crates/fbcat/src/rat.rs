//! Exact rational scalars.
//!
//! `Rat` keeps values as reduced `i64` fractions and transparently promotes
//! to arbitrary precision when an operation would overflow. Equality checks
//! throughout the crate rely on every value being stored in canonical form
//! (reduced, positive denominator, small representation preferred).

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced fraction, den > 0.
    Small(i64, i64),
    /// Reduced fraction with den > 0, used only when it does not fit Small.
    Big(Box<(BigInt, BigInt)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rat(Repr);

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rat {
    pub const fn zero() -> Self {
        Rat(Repr::Small(0, 1))
    }

    pub const fn one() -> Self {
        Rat(Repr::Small(1, 1))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(Repr::Small(n, 1))
    }

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let (mut n, mut d) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd_i128(n, d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        if let (Ok(ns), Ok(ds)) = (i64::try_from(n), i64::try_from(d)) {
            Rat(Repr::Small(ns, ds))
        } else {
            Rat(Repr::Big(Box::new((BigInt::from(n), BigInt::from(d)))))
        }
    }

    fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (mut n, mut d) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let g = num_integer::gcd(n.clone(), d.clone());
        if !g.is_zero() && g != BigInt::from(1) {
            n /= &g;
            d /= &g;
        }
        match (n.to_i64(), d.to_i64()) {
            (Some(ns), Some(ds)) => Rat(Repr::Small(ns, ds)),
            _ => Rat(Repr::Big(Box::new((n, d)))),
        }
    }

    fn big_parts(&self) -> (BigInt, BigInt) {
        match &self.0 {
            Repr::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (b.0.clone(), b.1.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(b) => b.0.is_negative(),
        }
    }

    /// Returns `self` as an i64 if it is an integer in range.
    pub fn to_integer(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Rat {
        assert!(!self.is_zero(), "division by zero");
        match &self.0 {
            Repr::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Repr::Big(b) => Self::from_big(b.1.clone(), b.0.clone()),
        }
    }

    pub fn pow(&self, e: u32) -> Rat {
        let mut acc = Rat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Repr::Small(n1, d1), Repr::Small(n2, d2)) = (&self.0, &other.0) {
            return (*n1 as i128 * *d2 as i128).cmp(&(*n2 as i128 * *d1 as i128));
        }
        let (n1, d1) = self.big_parts();
        let (n2, d2) = other.big_parts();
        (n1 * d2).cmp(&(n2 * d1))
    }
}

impl Add for &Rat {
    type Output = Rat;
    fn add(self, rhs: &Rat) -> Rat {
        if let (Repr::Small(n1, d1), Repr::Small(n2, d2)) = (&self.0, &rhs.0) {
            let num = *n1 as i128 * *d2 as i128 + *n2 as i128 * *d1 as i128;
            let den = *d1 as i128 * *d2 as i128;
            return Rat::from_i128(num, den);
        }
        let (n1, d1) = self.big_parts();
        let (n2, d2) = rhs.big_parts();
        Rat::from_big(&n1 * &d2 + &n2 * &d1, d1 * d2)
    }
}

impl Sub for &Rat {
    type Output = Rat;
    fn sub(self, rhs: &Rat) -> Rat {
        self + &(-rhs.clone())
    }
}

impl Mul for &Rat {
    type Output = Rat;
    fn mul(self, rhs: &Rat) -> Rat {
        if let (Repr::Small(n1, d1), Repr::Small(n2, d2)) = (&self.0, &rhs.0) {
            return Rat::from_i128(*n1 as i128 * *n2 as i128, *d1 as i128 * *d2 as i128);
        }
        let (n1, d1) = self.big_parts();
        let (n2, d2) = rhs.big_parts();
        Rat::from_big(n1 * n2, d1 * d2)
    }
}

impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        self * &rhs.recip()
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self.0 {
            Repr::Small(n, d) => Rat(Repr::Small(-n, d)),
            Repr::Big(b) => Rat::from_big(-b.0, b.1),
        }
    }
}

macro_rules! owned_ops {
    ($($t:ident :: $f:ident),*) => {$(
        impl $t for Rat {
            type Output = Rat;
            fn $f(self, rhs: Rat) -> Rat { $t::$f(&self, &rhs) }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul, Div::div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{}", n),
            Repr::Small(n, d) => write!(f, "{}/{}", n, d),
            Repr::Big(b) => {
                if b.1 == BigInt::from(1) {
                    write!(f, "{}", b.0)
                } else {
                    write!(f, "{}/{}", b.0, b.1)
                }
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("malformed rational literal: {0}")]
pub struct ParseRatError(String);

impl FromStr for Rat {
    type Err = ParseRatError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (num_s, den_s) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s, None),
        };
        let num = BigInt::from_str(num_s).map_err(|_| ParseRatError(s.to_string()))?;
        let den = match den_s {
            Some(d) => {
                let d = BigInt::from_str(d).map_err(|_| ParseRatError(s.to_string()))?;
                if d.is_zero() {
                    return Err(ParseRatError(s.to_string()));
                }
                d
            }
            None => BigInt::from(1),
        };
        Ok(Rat::from_big(num, den))
    }
}

impl serde::Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// (-1)^e as a rational.
pub fn sign_pow(e: u64) -> Rat {
    if e % 2 == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}
