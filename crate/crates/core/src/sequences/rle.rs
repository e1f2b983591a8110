//! Run-length-encoded base-B numerals.
//!
//! Lets `S_B` be evaluated on numbers with astronomically many digits: only
//! the runs are stored, and run counts are big integers.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use crate::digits::{to_digits, DigitPair};
use crate::error::{Error, Result};
use crate::gaussian::{Base, GaussianInt};

/// Numerals with more positions than this are never materialized.
pub const MAX_MATERIALIZED_POSITIONS: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Run {
    pub pair: DigitPair,
    pub count: BigUint,
}

impl Run {
    pub fn new(pair: DigitPair, count: impl Into<BigUint>) -> Self {
        Run {
            pair,
            count: count.into(),
        }
    }
}

/// Runs are stored most significant first, are maximal, and the leading run
/// is never `(0, 0)`. The empty numeral is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RleNumeral {
    base: Base,
    runs: Vec<Run>,
}

impl RleNumeral {
    /// Validates digits and signs, then normalizes: empty runs are dropped,
    /// equal neighbours merged and leading zero runs stripped.
    pub fn new(base: Base, runs: Vec<Run>) -> Result<Self> {
        let mut sign_re = 0i64;
        let mut sign_im = 0i64;
        for (position, run) in runs.iter().enumerate() {
            run.pair.check(position, base)?;
            for (digit, seen, component) in [
                (run.pair.re, &mut sign_re, "real"),
                (run.pair.im, &mut sign_im, "imaginary"),
            ] {
                let s = digit.signum();
                if s != 0 {
                    if *seen != 0 && *seen != s {
                        return Err(Error::MixedSigns {
                            position,
                            component,
                        });
                    }
                    *seen = s;
                }
            }
        }
        let mut merged: Vec<Run> = Vec::with_capacity(runs.len());
        for run in runs {
            if run.count.is_zero() {
                continue;
            }
            if merged.is_empty() && run.pair.is_zero() {
                continue;
            }
            match merged.last_mut() {
                Some(last) if last.pair == run.pair => last.count += run.count,
                _ => merged.push(run),
            }
        }
        Ok(RleNumeral { base, runs: merged })
    }

    pub fn zero(base: Base) -> Self {
        RleNumeral {
            base,
            runs: Vec::new(),
        }
    }

    /// Run-length encoding of an ordinary Gaussian integer.
    pub fn from_gaussian(z: &GaussianInt, base: Base) -> Self {
        let e = to_digits(z, base);
        let runs = e
            .pairs()
            .iter()
            .rev()
            .map(|&pair| Run::new(pair, 1u32))
            .collect();
        RleNumeral::new(base, runs).expect("digit expansion is valid")
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn is_zero(&self) -> bool {
        self.runs.is_empty()
    }

    /// Total number of digit positions.
    pub fn positions(&self) -> BigUint {
        self.runs.iter().map(|r| &r.count).sum()
    }

    /// Length of the least significant `(0, 0)` run, or zero.
    pub fn low_zero_run(&self) -> BigUint {
        match self.runs.last() {
            Some(run) if run.pair.is_zero() => run.count.clone(),
            _ => BigUint::zero(),
        }
    }

    fn has_negative_digit(&self) -> bool {
        self.runs.iter().any(|r| r.pair.re < 0 || r.pair.im < 0)
    }

    /// The numeral's value. Fails for numerals longer than
    /// [`MAX_MATERIALIZED_POSITIONS`].
    pub fn to_gaussian(&self) -> Result<GaussianInt> {
        let positions = self.positions();
        if positions > BigUint::from(MAX_MATERIALIZED_POSITIONS) {
            return Err(Error::TooLargeToMaterialize {
                positions: positions.to_string(),
            });
        }
        let b = BigInt::from(self.base.get());
        let mut re = BigInt::zero();
        let mut im = BigInt::zero();
        for run in &self.runs {
            let count = run.count.to_u32().expect("bounded above");
            let shift = b.pow(count);
            // 1 + B + ... + B^(count-1)
            let repunit = (&shift - BigInt::one()) / (&b - BigInt::one());
            re = re * &shift + &repunit * run.pair.re;
            im = im * &shift + &repunit * run.pair.im;
        }
        Ok(GaussianInt::new(re, im))
    }
}

/// `R_B(t) = Σ_{j=1}^{t} B^j`: digit 1 in positions `1..=t`, 0 in position 0.
pub fn r_b(t: &BigUint, base: Base) -> Result<RleNumeral> {
    if t.is_zero() {
        return Err(Error::InvalidArgument("R_B(t) needs t ≥ 1".into()));
    }
    Ok(RleNumeral {
        base,
        runs: vec![
            Run::new(DigitPair::new(1, 0), t.clone()),
            Run::new(DigitPair::ZERO, 1u32),
        ],
    })
}

/// `S_B` of a numeral: `Σ count · (a² - b² + 2ab·i)` over its runs.
pub fn s_b_rle(n: &RleNumeral) -> GaussianInt {
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    for run in &n.runs {
        let (sq_re, sq_im) = run.pair.square();
        if sq_re == 0 && sq_im == 0 {
            continue;
        }
        let count = BigInt::from_biguint(Sign::Plus, run.count.clone());
        re += &count * sq_re;
        im += &count * sq_im;
    }
    GaussianInt::new(re, im)
}

/// Multiplication by `B^r`: `r` more zero positions at the low end.
pub fn rle_shift(n: &RleNumeral, r: &BigUint) -> RleNumeral {
    if n.is_zero() || r.is_zero() {
        return n.clone();
    }
    let mut runs = n.runs.clone();
    match runs.last_mut() {
        Some(last) if last.pair.is_zero() => last.count += r,
        _ => runs.push(Run::new(DigitPair::ZERO, r.clone())),
    }
    RleNumeral { base: n.base, runs }
}

/// Writes the digits of `w` into the low zero run of `n`, i.e. computes
/// `n + w` when `B^ℓ > max(re(w), im(w))` for the low zero-run length `ℓ`.
/// Then `S_B(n + w) = S_B(n) + S_B(w)`.
pub fn rle_add_low(n: &RleNumeral, w: &GaussianInt) -> Result<RleNumeral> {
    if w.re().sign() == Sign::Minus || w.im().sign() == Sign::Minus || n.has_negative_digit() {
        return Err(Error::NegativeSummand);
    }
    if w.is_zero() {
        return Ok(n.clone());
    }
    let digits = to_digits(w, n.base);
    let needed = digits.len() as u64;
    let available = n.low_zero_run();
    if BigUint::from(needed) > available {
        return Err(Error::RleOverlap {
            needed,
            available: available.to_string(),
        });
    }
    let mut runs = n.runs.clone();
    runs.pop();
    let gap = available - BigUint::from(needed);
    runs.push(Run::new(DigitPair::ZERO, gap));
    runs.extend(
        digits
            .pairs()
            .iter()
            .rev()
            .map(|&pair| Run::new(pair, 1u32)),
    );
    RleNumeral::new(n.base, runs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::happy::s_b;

    fn base(b: u32) -> Base {
        Base::new(b).unwrap()
    }

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    #[test]
    fn repunit_examples() {
        let n = r_b(&BigUint::from(3u32), base(10)).unwrap();
        assert_eq!(n.to_gaussian().unwrap(), g(1110, 0));
        assert_eq!(s_b_rle(&n), g(3, 0));
        let n = r_b(&BigUint::from(1u32), base(2)).unwrap();
        assert_eq!(n.to_gaussian().unwrap(), g(2, 0));
        assert!(r_b(&BigUint::zero(), base(10)).is_err());
    }

    #[test]
    fn repunit_at_scale_is_never_materialized() {
        let t = BigUint::from(10u64).pow(12);
        let n = r_b(&t, base(10)).unwrap();
        assert_eq!(n.positions(), &t + 1u32);
        assert_eq!(s_b_rle(&n), GaussianInt::from(BigInt::from(t)));
        assert!(matches!(
            n.to_gaussian(),
            Err(Error::TooLargeToMaterialize { .. })
        ));
    }

    #[test]
    fn square_of_one_plus_i_run() {
        let n = RleNumeral::new(base(10), vec![Run::new(DigitPair::new(1, 1), 5u32)]).unwrap();
        assert_eq!(n.to_gaussian().unwrap(), g(11111, 11111));
        assert_eq!(s_b_rle(&n), g(0, 10));
    }

    #[test]
    fn shift_examples() {
        let n = r_b(&BigUint::from(3u32), base(10)).unwrap();
        let shifted = rle_shift(&n, &BigUint::from(2u32));
        assert_eq!(shifted.to_gaussian().unwrap(), g(111000, 0));
        assert_eq!(shifted.runs().len(), 2);
        assert_eq!(rle_shift(&n, &BigUint::zero()), n);
        assert_eq!(s_b_rle(&shifted), s_b_rle(&n));
    }

    #[test]
    fn add_low_examples() {
        let n = rle_shift(
            &r_b(&BigUint::from(3u32), base(10)).unwrap(),
            &BigUint::from(2u32),
        );
        let w = g(7, 7);
        let sum = rle_add_low(&n, &w).unwrap();
        assert_eq!(sum.to_gaussian().unwrap(), g(111007, 7));
        assert_eq!(s_b_rle(&sum), &s_b_rle(&n) + &s_b(&w, base(10)));
        assert_eq!(s_b_rle(&sum), s_b(&g(111007, 7), base(10)));
        assert_eq!(rle_add_low(&n, &GaussianInt::zero()).unwrap(), n);
    }

    #[test]
    fn add_low_errors() {
        let no_low_zeros = RleNumeral::from_gaussian(&g(7, 0), base(10));
        assert!(matches!(
            rle_add_low(&no_low_zeros, &g(1, 0)),
            Err(Error::RleOverlap { needed: 1, .. })
        ));
        let n = rle_shift(&no_low_zeros, &BigUint::from(1u32));
        assert!(matches!(
            rle_add_low(&n, &g(10, 0)),
            Err(Error::RleOverlap { needed: 2, .. })
        ));
        assert_eq!(rle_add_low(&n, &g(-1, 0)), Err(Error::NegativeSummand));
    }

    #[test]
    fn normalization() {
        let n = RleNumeral::new(
            base(10),
            vec![
                Run::new(DigitPair::ZERO, 4u32),
                Run::new(DigitPair::new(2, 0), 1u32),
                Run::new(DigitPair::new(2, 0), 2u32),
                Run::new(DigitPair::new(5, 1), 0u32),
                Run::new(DigitPair::ZERO, 1u32),
            ],
        )
        .unwrap();
        assert_eq!(
            n.runs(),
            &[
                Run::new(DigitPair::new(2, 0), 3u32),
                Run::new(DigitPair::ZERO, 1u32)
            ]
        );
        assert_eq!(n.to_gaussian().unwrap(), g(2220, 0));
    }

    #[test]
    fn mixed_sign_runs_rejected() {
        let err = RleNumeral::new(
            base(10),
            vec![
                Run::new(DigitPair::new(2, 0), 1u32),
                Run::new(DigitPair::new(-2, 0), 1u32),
            ],
        );
        assert!(matches!(err, Err(Error::MixedSigns { .. })));
    }

    #[test]
    fn negative_numerals_round_trip() {
        for z in [g(-1234, 56), g(-9, -90), g(0, -1001)] {
            let n = RleNumeral::from_gaussian(&z, base(10));
            assert_eq!(n.to_gaussian().unwrap(), z);
            assert_eq!(s_b_rle(&n), s_b(&z, base(10)));
        }
    }
}
