//! Exact rational numbers.
//!
//! [`Rational`] wraps an arbitrary-precision ratio that is always kept in
//! lowest terms with a positive denominator. Division by zero is reported as
//! an error rather than producing a value.

use alloc::string::String;
use core::fmt;
use core::iter::{Product, Sum};
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::Error;

/// An exact rational number in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// Builds `numer / denom`, failing when `denom` is zero.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, Error> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    /// `1 / 2`, the point at which marginals are read off.
    pub fn half() -> Self {
        Rational(BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Rational, Error> {
        Rational::one().checked_div(self)
    }

    pub fn pow(&self, exp: u32) -> Rational {
        Rational(Pow::pow(&self.0, exp))
    }

    /// Number of bits needed to write the value: sign bit plus magnitude of
    /// the numerator, plus the magnitude of the denominator when it is not 1.
    pub fn bit_width(&self) -> u64 {
        let den = if self.0.denom().is_one() {
            0
        } else {
            self.0.denom().bits()
        };
        integer_bit_width(self.0.numer()) + den
    }

    /// Exact decimal rendering when the expansion terminates, otherwise
    /// rounded to `digits` places and suffixed with `...`.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        use alloc::format;
        use core::fmt::Write;

        let neg = self.is_negative();
        let num = self.0.numer().abs();
        let den = self.0.denom().clone();
        let int = &num / &den;
        let mut rem = &num % &den;
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        let _ = write!(out, "{}", int);
        if rem.is_zero() {
            return out;
        }
        out.push('.');
        let ten = BigInt::from(10);
        let mut frac = String::new();
        for _ in 0..digits {
            rem *= &ten;
            let d = &rem / &den;
            rem = &rem % &den;
            frac.push_str(&format!("{}", d));
            if rem.is_zero() {
                break;
            }
        }
        out.push_str(&frac);
        if !rem.is_zero() {
            out.push_str("...");
        }
        out
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

/// `||a||`: bits of `|a|` plus one sign bit.
pub fn integer_bit_width(a: &BigInt) -> u64 {
    a.magnitude().bits() + 1
}

/// Bits of a natural number written in base two (zero takes one bit).
pub fn natural_bit_width(a: &BigUint) -> u64 {
    a.bits().max(1)
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `a/b` or a bare integer `a`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::BadRational(s.into());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.sign() == Sign::NoSign {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($tr::$method(&self.0, &rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($tr::$method(self.0, rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($tr::$method(self.0, &rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($tr::$method(&self.0, rhs.0))
            }
        }
        impl $assign_tr<&Rational> for Rational {
            fn $assign(&mut self, rhs: &Rational) {
                $assign_tr::$assign(&mut self.0, &rhs.0);
            }
        }
        impl $assign_tr<Rational> for Rational {
            fn $assign(&mut self, rhs: Rational) {
                $assign_tr::$assign(&mut self.0, rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// Shorthand used throughout tests: `rat(a, b)` is `a/b`.
///
/// Panics when `b` is zero.
pub fn rat(a: i64, b: i64) -> Rational {
    Rational::new(a, b).expect("nonzero denominator")
}
