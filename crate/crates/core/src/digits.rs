//! Signed componentwise base-B digit expansions.
//!
//! A nonzero `a + bi` is written as `Σ (a_j + b_j i)·B^j` where every nonzero
//! `a_j` carries the sign of `a`, every nonzero `b_j` the sign of `b`, and
//! `|a_j|, |b_j| ≤ B - 1`. Pairs are stored least significant first; zero
//! has no pairs.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gaussian::{Base, GaussianInt};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DigitPair {
    pub re: i64,
    pub im: i64,
}

impl DigitPair {
    pub const ZERO: DigitPair = DigitPair { re: 0, im: 0 };

    pub const fn new(re: i64, im: i64) -> Self {
        DigitPair { re, im }
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    /// `(a + bi)² = (a² - b²) + 2ab·i`, exact.
    pub fn square(self) -> (i128, i128) {
        let (a, b) = (self.re as i128, self.im as i128);
        (a * a - b * b, 2 * a * b)
    }

    pub(crate) fn check(self, position: usize, base: Base) -> Result<()> {
        let limit = base.get() as i64 - 1;
        for digit in [self.re, self.im] {
            if digit.abs() > limit {
                return Err(Error::DigitOutOfRange {
                    position,
                    digit,
                    base: base.get(),
                });
            }
        }
        Ok(())
    }
}

/// Magnitude digits of `n` in base `base`, least significant first. Zero
/// yields an empty vector.
pub fn magnitude_digits(n: &BigUint, base: Base) -> Vec<u32> {
    if n.is_zero() {
        return Vec::new();
    }
    let b = base.get();
    if b <= 256 {
        return n.to_radix_le(b).into_iter().map(u32::from).collect();
    }
    let mut out = Vec::new();
    let mut rest = n.clone();
    let divisor = BigUint::from(b);
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&divisor);
        out.push(r.to_u32().expect("remainder below base"));
        rest = q;
    }
    out
}

fn signed_digits(n: &BigInt, base: Base) -> Vec<i64> {
    let sign = if n.sign() == Sign::Minus { -1 } else { 1 };
    magnitude_digits(n.magnitude(), base)
        .into_iter()
        .map(|d| sign * d as i64)
        .collect()
}

fn sign_of(n: &BigInt) -> Sign {
    n.sign()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitExpansion {
    base: Base,
    pairs: Vec<DigitPair>,
    sign_re: Sign,
    sign_im: Sign,
}

impl DigitExpansion {
    /// Builds an expansion from explicit pairs and component signs, checking
    /// every invariant. Nothing is normalized.
    pub fn new(base: Base, pairs: Vec<DigitPair>, sign_re: Sign, sign_im: Sign) -> Result<Self> {
        if pairs.last().is_some_and(|p| p.is_zero()) {
            return Err(Error::LeadingZeroPair);
        }
        for (position, pair) in pairs.iter().enumerate() {
            pair.check(position, base)?;
            if !sign_agrees(pair.re, sign_re) {
                return Err(Error::MixedSigns {
                    position,
                    component: "real",
                });
            }
            if !sign_agrees(pair.im, sign_im) {
                return Err(Error::MixedSigns {
                    position,
                    component: "imaginary",
                });
            }
        }
        // A declared sign with no nonzero digit would make the sign fields
        // disagree with the value.
        if sign_re != Sign::NoSign && pairs.iter().all(|p| p.re == 0) {
            return Err(Error::MixedSigns {
                position: 0,
                component: "real",
            });
        }
        if sign_im != Sign::NoSign && pairs.iter().all(|p| p.im == 0) {
            return Err(Error::MixedSigns {
                position: 0,
                component: "imaginary",
            });
        }
        Ok(DigitExpansion {
            base,
            pairs,
            sign_re,
            sign_im,
        })
    }

    /// Builds an expansion from pairs alone, inferring the component signs
    /// from the first nonzero digit of each component.
    pub fn from_pairs(base: Base, pairs: Vec<DigitPair>) -> Result<Self> {
        let infer = |f: fn(&DigitPair) -> i64| match pairs.iter().map(f).find(|&d| d != 0) {
            Some(d) if d < 0 => Sign::Minus,
            Some(_) => Sign::Plus,
            None => Sign::NoSign,
        };
        let sign_re = infer(|p| p.re);
        let sign_im = infer(|p| p.im);
        DigitExpansion::new(base, pairs, sign_re, sign_im)
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn pairs(&self) -> &[DigitPair] {
        &self.pairs
    }

    pub fn sign_re(&self) -> Sign {
        self.sign_re
    }

    pub fn sign_im(&self) -> Sign {
        self.sign_im
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn sign_agrees(digit: i64, sign: Sign) -> bool {
    match sign {
        Sign::Minus => digit <= 0,
        Sign::Plus => digit >= 0,
        Sign::NoSign => digit == 0,
    }
}

/// Componentwise signed radix expansion of `z`, zero-padded to equal length.
pub fn to_digits(z: &GaussianInt, base: Base) -> DigitExpansion {
    let re = signed_digits(z.re(), base);
    let im = signed_digits(z.im(), base);
    let len = re.len().max(im.len());
    let pairs = (0..len)
        .map(|j| DigitPair {
            re: re.get(j).copied().unwrap_or(0),
            im: im.get(j).copied().unwrap_or(0),
        })
        .collect();
    DigitExpansion {
        base,
        pairs,
        sign_re: sign_of(z.re()),
        sign_im: sign_of(z.im()),
    }
}

/// `Σ (a_j + b_j i)·B^j`, evaluated by Horner's rule.
pub fn from_digits(e: &DigitExpansion) -> GaussianInt {
    let b = BigInt::from(e.base.get());
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    for pair in e.pairs.iter().rev() {
        re = re * &b + pair.re;
        im = im * &b + pair.im;
    }
    GaussianInt::new(re, im)
}
