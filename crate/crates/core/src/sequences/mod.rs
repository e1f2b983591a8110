//! Arithmetic sequences of happy numbers.
//!
//! For odd bases `S_B(z) ≡ z (mod 1+i)`, so every happy number lies in the
//! coset `1 + (1+i)Z[i]` and a progression of two or more happy numbers must
//! have its difference in `(1+i)Z[i]`. The searches here are bounded brute
//! force; [`witness`] builds arbitrarily long `(1+i)`-progressions
//! symbolically.

pub mod rle;
pub mod witness;

pub use rle::{r_b, rle_add_low, rle_shift, s_b_rle, RleNumeral, Run};
pub use witness::{
    build_witness, required_params, RationalRun, WitnessCheck, WitnessParams, WitnessReport,
    WitnessTerm,
};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::gaussian::{Base, GaussianInt};
use crate::happy::Symmetry;
use crate::heights::{HeightMemo, NormOrdered};

/// `z ≡ 1 (mod 1+i)`, i.e. `re(z) + im(z)` is odd.
pub fn in_onepi_coset(z: &GaussianInt) -> bool {
    (z.re() + z.im()).is_odd()
}

/// Whether `1+i` divides `z`.
pub fn divisible_by_one_plus_i(z: &GaussianInt) -> bool {
    !in_onepi_coset(z)
}

/// Smallest `a` in `1..=bound` with `a + d·j` happy for every `0 ≤ j < len`.
pub fn rational_consecutive(base: Base, d: u64, len: u64, bound: u64) -> Result<u64> {
    if d == 0 || len == 0 {
        return Err(Error::InvalidArgument(
            "d and len must be at least 1".into(),
        ));
    }
    d.checked_mul(len)
        .and_then(|span| span.checked_add(bound))
        .filter(|&top| top <= i64::MAX as u64)
        .ok_or_else(|| Error::Capacity("search range leaves the word range".into()))?;
    let mut memo = HeightMemo::new(base);
    'start: for a in 1..=bound {
        for j in 0..len {
            if !memo.is_happy_small(((a + d * j) as i64, 0)) {
                continue 'start;
            }
        }
        return Ok(a);
    }
    Err(Error::NotFoundWithinBound { bound })
}

/// Start `z`, minimal in norm-then-real-then-imaginary order with
/// `norm(z) ≤ norm_bound`, of a `len`-term progression of happy numbers with
/// difference `diff`.
///
/// For odd bases a difference outside `(1+i)Z[i]` admits no progression of
/// two or more happy numbers; that case returns [`Error::Obstructed`]
/// without scanning.
pub fn gaussian_consecutive(
    base: Base,
    diff: &GaussianInt,
    len: u64,
    norm_bound: u64,
) -> Result<GaussianInt> {
    if diff.is_zero() {
        return Err(Error::InvalidArgument("difference must be nonzero".into()));
    }
    if len == 0 {
        return Err(Error::InvalidArgument("len must be at least 1".into()));
    }
    if base.is_odd() && len >= 2 && in_onepi_coset(diff) {
        return Err(Error::Obstructed(format!(
            "base {base} is odd and {diff} is not divisible by 1+i"
        )));
    }
    let (dre, dim) = diff
        .to_small()
        .ok_or_else(|| Error::Capacity("difference exceeds the word range".into()))?;
    let mut memo = HeightMemo::new(base);
    'start: for (re, im) in NormOrdered::new(norm_bound) {
        for j in 0..len as i64 {
            let term = j
                .checked_mul(dre)
                .and_then(|x| x.checked_add(re))
                .zip(j.checked_mul(dim).and_then(|y| y.checked_add(im)))
                .ok_or_else(|| Error::Capacity("progression leaves the word range".into()))?;
            if !memo.is_happy_small(term) {
                continue 'start;
            }
        }
        return Ok(GaussianInt::new(re, im));
    }
    Err(Error::NotFoundWithinBound { bound: norm_bound })
}

/// `{-D, ±iD, ±conj(D), ±i·conj(D)}` without duplicates and without `D`.
pub fn related_differences(diff: &GaussianInt) -> Vec<GaussianInt> {
    let mut out: Vec<GaussianInt> = Symmetry::all()
        .map(|s| s.apply(diff))
        .filter(|d| d != diff)
        .collect();
    out.sort();
    out.dedup();
    out
}

/// A symmetry mapping `from` to `to`, if one exists.
pub fn symmetry_between(from: &GaussianInt, to: &GaussianInt) -> Option<Symmetry> {
    Symmetry::all().find(|s| &s.apply(from) == to)
}

/// Start of the progression with difference `to` obtained by applying the
/// symmetry that maps `from` to `to` to the progression `start + j·from`.
pub fn transfer_start(
    start: &GaussianInt,
    from: &GaussianInt,
    to: &GaussianInt,
) -> Option<GaussianInt> {
    symmetry_between(from, to).map(|s| s.apply(start))
}

/// Whether `start + j·diff` is happy for every `0 ≤ j < len`.
pub fn is_happy_progression(base: Base, start: &GaussianInt, diff: &GaussianInt, len: u64) -> bool {
    let mut memo = HeightMemo::new(base);
    let mut z = start.clone();
    for _ in 0..len {
        if !memo.is_happy(&z) {
            return false;
        }
        z = &z + diff;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(b: u32) -> Base {
        Base::new(b).unwrap()
    }

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    #[test]
    fn coset_examples() {
        assert!(in_onepi_coset(&g(1, 0)));
        assert!(!in_onepi_coset(&g(1, 1)));
        assert!(in_onepi_coset(&g(5, 0)));
        assert!(in_onepi_coset(&g(-2, 7)));
    }

    #[test]
    fn rational_consecutive_examples() {
        assert_eq!(rational_consecutive(base(3), 2, 2, 100), Ok(1));
        assert_eq!(rational_consecutive(base(10), 1, 2, 10_000), Ok(31));
        assert_eq!(rational_consecutive(base(10), 1, 3, 10_000), Ok(1880));
        assert_eq!(rational_consecutive(base(10), 1, 4, 100_000), Ok(7839));
        assert_eq!(rational_consecutive(base(3), 2, 4, 1_000_000), Ok(69));
        assert_eq!(
            rational_consecutive(base(10), 1, 3, 1000),
            Err(Error::NotFoundWithinBound { bound: 1000 })
        );
    }

    #[test]
    fn odd_base_has_no_unit_step_pairs() {
        // Two happy numbers differing by 1 would contradict the coset rule.
        assert_eq!(
            rational_consecutive(base(3), 1, 2, 20_000),
            Err(Error::NotFoundWithinBound { bound: 20_000 })
        );
    }

    #[test]
    fn gaussian_consecutive_examples() {
        // -1 precedes 1 in norm-then-real order and is happy.
        assert_eq!(
            gaussian_consecutive(base(10), &g(1, 1), 1, 10),
            Ok(g(-1, 0))
        );
        assert!(matches!(
            gaussian_consecutive(base(3), &g(1, 0), 2, u64::MAX),
            Err(Error::Obstructed(_))
        ));
        assert_eq!(
            gaussian_consecutive(base(10), &g(1, 1), 2, 1_000_000),
            Ok(g(-1, 0))
        );
        assert!(gaussian_consecutive(base(10), &GaussianInt::zero(), 2, 10).is_err());
    }

    #[test]
    fn related_differences_examples() {
        assert_eq!(
            related_differences(&g(1, 1)),
            vec![g(-1, -1), g(-1, 1), g(1, -1)]
        );
        assert_eq!(
            related_differences(&g(2, 0)),
            vec![g(-2, 0), g(0, -2), g(0, 2)]
        );
        assert_eq!(
            related_differences(&g(0, 1)),
            vec![g(-1, 0), g(0, -1), g(1, 0)]
        );
    }

    #[test]
    fn transferred_progressions_are_happy() {
        for (b, d, len) in [
            (10u32, g(1, 1), 3u64),
            (10, g(1, 0), 3),
            (7, g(1, 1), 2),
            (8, g(2, 1), 2),
        ] {
            let start = gaussian_consecutive(base(b), &d, len, 100_000).unwrap();
            assert!(is_happy_progression(base(b), &start, &d, len));
            for other in related_differences(&d) {
                let moved = transfer_start(&start, &d, &other).unwrap();
                assert!(
                    is_happy_progression(base(b), &moved, &other, len),
                    "{b} {d} -> {other}"
                );
            }
        }
    }
}
