//! Exact Gaussian integers and the digit base.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A digit base `B >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Base(u32);

impl Base {
    pub fn new(base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base as u64));
        }
        Ok(Base(base))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }

    /// `gcd(2, B - 1)`: 2 for odd bases, 1 for even ones.
    pub fn rational_step(self) -> u64 {
        if self.is_odd() {
            2
        } else {
            1
        }
    }
}

impl TryFrom<u32> for Base {
    type Error = Error;

    fn try_from(value: u32) -> Result<Self> {
        Base::new(value)
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An element `re + im·i` of Z[i] with arbitrary-precision components.
///
/// The `Ord` implementation is the search order used throughout the crate:
/// norm first, then real part, then imaginary part.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussianInt {
    re: BigInt,
    im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        GaussianInt::new(1, 0)
    }

    pub fn i() -> Self {
        GaussianInt::new(0, 1)
    }

    pub fn re(&self) -> &BigInt {
        &self.re
    }

    pub fn im(&self) -> &BigInt {
        &self.im
    }

    pub fn into_parts(self) -> (BigInt, BigInt) {
        (self.re, self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `re² + im²`.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussianInt {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// Multiplication by `i`: `(a + bi)·i = -b + ai`.
    pub fn mul_i(&self) -> Self {
        GaussianInt {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    /// `max(|re|, |im|)`.
    pub fn max_abs_component(&self) -> BigInt {
        self.re.abs().max(self.im.abs())
    }

    /// Both components as machine words, when they fit.
    pub fn to_small(&self) -> Option<(i64, i64)> {
        Some((self.re.to_i64()?, self.im.to_i64()?))
    }

    pub fn from_small((re, im): (i64, i64)) -> Self {
        GaussianInt::new(re, im)
    }
}

impl From<i64> for GaussianInt {
    fn from(value: i64) -> Self {
        GaussianInt::new(value, 0)
    }
}

impl From<(i64, i64)> for GaussianInt {
    fn from(value: (i64, i64)) -> Self {
        GaussianInt::from_small(value)
    }
}

impl From<BigInt> for GaussianInt {
    fn from(value: BigInt) -> Self {
        GaussianInt::new(value, 0)
    }
}

impl Ord for GaussianInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm()
            .cmp(&other.norm())
            .then_with(|| self.re.cmp(&other.re))
            .then_with(|| self.im.cmp(&other.im))
    }
}

impl PartialOrd for GaussianInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &GaussianInt {
    type Output = GaussianInt;

    fn add(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;

    fn add(self, rhs: GaussianInt) -> GaussianInt {
        &self + &rhs
    }
}

impl Sub for &GaussianInt {
    type Output = GaussianInt;

    fn sub(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Sub for GaussianInt {
    type Output = GaussianInt;

    fn sub(self, rhs: GaussianInt) -> GaussianInt {
        &self - &rhs
    }
}

impl Mul for &GaussianInt {
    type Output = GaussianInt;

    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;

    fn mul(self, rhs: GaussianInt) -> GaussianInt {
        &self * &rhs
    }
}

impl Mul<&BigInt> for &GaussianInt {
    type Output = GaussianInt;

    fn mul(self, rhs: &BigInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * rhs,
            im: &self.im * rhs,
        }
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;

    fn neg(self) -> GaussianInt {
        GaussianInt {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;

    fn neg(self) -> GaussianInt {
        -&self
    }
}

/// Renders `a+bi`, `a-bi`, `a`, `bi`, with unit imaginary coefficients
/// written as `i` / `-i` and zero written as `0`.
impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |f: &mut fmt::Formatter<'_>, leading: bool| -> fmt::Result {
            let mag = self.im.abs();
            let sign = if self.im.is_negative() {
                "-"
            } else if leading {
                ""
            } else {
                "+"
            };
            if mag.is_one() {
                write!(f, "{sign}i")
            } else {
                write!(f, "{sign}{mag}i")
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => f.write_str("0"),
            (false, true) => write!(f, "{}", self.re),
            (true, false) => im_part(f, true),
            (false, false) => {
                write!(f, "{}", self.re)?;
                im_part(f, false)
            }
        }
    }
}
