//! The Gaussian B-happy function and the unit/conjugation symmetries.

use num_bigint::BigInt;

use crate::digits::magnitude_digits;
use crate::gaussian::{Base, GaussianInt};

/// Sum of the squares of the digit pairs of `z` in base `base`.
///
/// `S_B(0) = 0`. Inputs whose components fit in machine words take a
/// word-sized path; results are identical to the big-integer path.
pub fn s_b(z: &GaussianInt, base: Base) -> GaussianInt {
    if let Some(small) = z.to_small() {
        if let Some(out) = s_b_small(small, base) {
            return GaussianInt::from_small(out);
        }
    }
    s_b_big(z, base)
}

pub(crate) fn s_b_big(z: &GaussianInt, base: Base) -> GaussianInt {
    let re = magnitude_digits(z.re().magnitude(), base);
    let im = magnitude_digits(z.im().magnitude(), base);
    // Digit signs are uniform per component, so only the sign of the cross
    // term depends on them.
    let cross_sign: i128 = if (z.re().sign() == num_bigint::Sign::Minus)
        != (z.im().sign() == num_bigint::Sign::Minus)
    {
        -1
    } else {
        1
    };
    let mut real = 0i128;
    let mut cross = 0i128;
    let len = re.len().max(im.len());
    for j in 0..len {
        let a = re.get(j).copied().unwrap_or(0) as i128;
        let b = im.get(j).copied().unwrap_or(0) as i128;
        real += a * a - b * b;
        cross += a * b;
    }
    GaussianInt::new(BigInt::from(real), BigInt::from(2 * cross_sign * cross))
}

/// Word-sized `S_B`. Returns `None` if the result does not fit in `i64`.
#[inline]
pub fn s_b_small((re, im): (i64, i64), base: Base) -> Option<(i64, i64)> {
    let b = base.get() as u64;
    let mut x = re.unsigned_abs();
    let mut y = im.unsigned_abs();
    let mut real: i128 = 0;
    let mut cross: i128 = 0;
    while x != 0 || y != 0 {
        let a = (x % b) as i128;
        let c = (y % b) as i128;
        real += a * a - c * c;
        cross += a * c;
        x /= b;
        y /= b;
    }
    if (re < 0) != (im < 0) {
        cross = -cross;
    }
    Some((i64::try_from(real).ok()?, i64::try_from(2 * cross).ok()?))
}

/// One of the eight maps `z ↦ u·z` or `z ↦ u·conj(z)` with `u ∈ {1, i, -1, -i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symmetry {
    /// Power of `i` applied after the optional conjugation.
    pub quarter_turns: u8,
    pub conjugate: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry {
        quarter_turns: 0,
        conjugate: false,
    };

    pub fn all() -> impl Iterator<Item = Symmetry> {
        [false, true].into_iter().flat_map(|conjugate| {
            (0..4).map(move |quarter_turns| Symmetry {
                quarter_turns,
                conjugate,
            })
        })
    }

    pub fn apply(self, z: &GaussianInt) -> GaussianInt {
        let mut w = if self.conjugate { z.conj() } else { z.clone() };
        for _ in 0..self.quarter_turns % 4 {
            w = w.mul_i();
        }
        w
    }

    pub fn apply_small(self, (re, im): (i64, i64)) -> (i64, i64) {
        let (mut a, mut b) = if self.conjugate { (re, -im) } else { (re, im) };
        for _ in 0..self.quarter_turns % 4 {
            (a, b) = (-b, a);
        }
        (a, b)
    }
}

/// `{±z, ±iz, ±conj(z), ±i·conj(z)}`, sorted by the crate order, without
/// duplicates. Its size is 1, 4 or 8.
pub fn unit_orbit(z: &GaussianInt) -> Vec<GaussianInt> {
    let mut orbit: Vec<GaussianInt> = Symmetry::all().map(|s| s.apply(z)).collect();
    orbit.sort();
    orbit.dedup();
    orbit
}

/// The orbit element with the largest real part, ties broken by the largest
/// imaginary part.
pub fn canonical_rep(z: &GaussianInt) -> GaussianInt {
    Symmetry::all()
        .map(|s| s.apply(z))
        .max_by(|x, y| x.re().cmp(y.re()).then_with(|| x.im().cmp(y.im())))
        .expect("orbit is nonempty")
}
