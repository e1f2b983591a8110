//! Certified `(1+i)`-consecutive sequences of Gaussian happy numbers.
//!
//! Given `M` rational happy numbers `a, a + d, …, a + d(M-1)` with
//! `d = gcd(2, B-1)`, put `t = a + dM` and `b = R_B(R_B(t)·B^r)`. Then for
//! `1 ≤ k ≤ m`
//!
//! ```text
//! S_B(b·B^r + k(1+i))  = R_B(t)·B^r + 2·S_B(k)·i
//! S_B(that)            = t - S_B(2·S_B(k))
//! ```
//!
//! and the right-hand side lands inside the supplied rational run, so every
//! term is happy. `b` has `R_B(t)·B^r + 1` digits and exists only as a
//! run-length numeral. Each identity is evaluated, not assumed.

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use super::rle::{r_b, rle_add_low, rle_shift, s_b_rle, RleNumeral};
use crate::error::{Error, Result};
use crate::gaussian::{Base, GaussianInt};
use crate::happy::{s_b, s_b_small};
use crate::heights::HeightMemo;

/// The run length `M` and shift `r` the construction needs for `m` terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessParams {
    /// `max{S_B(2·S_B(k)) : 1 ≤ k ≤ m}`.
    pub run_length: u64,
    /// `1 + max{k, 2·S_B(k) : 1 ≤ k ≤ m}`.
    pub shift: u64,
}

fn s_b_u64(n: u64, base: Base) -> u64 {
    let (re, _) = s_b_small((n as i64, 0), base).expect("word-sized input");
    re as u64
}

pub fn required_params(base: Base, m: u64) -> Result<WitnessParams> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "sequence length m must be at least 1".into(),
        ));
    }
    if m > i64::MAX as u64 / 2 {
        return Err(Error::Capacity(format!("sequence length {m} is too large")));
    }
    let mut run_length = 0;
    let mut widest = 0;
    for k in 1..=m {
        let twice = 2 * s_b_u64(k, base);
        run_length = run_length.max(s_b_u64(twice, base));
        widest = widest.max(k).max(twice);
    }
    Ok(WitnessParams {
        run_length,
        shift: widest + 1,
    })
}

/// A run `start + step·j`, `0 ≤ j < len`, of rational happy numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalRun {
    pub start: u64,
    pub step: u64,
    pub len: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTerm {
    pub k: u64,
    /// `b·B^r + k(1+i)` as a run-length numeral.
    pub numeral: RleNumeral,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCheck {
    pub k: u64,
    /// `S_B` of the term, from its runs.
    pub first_image: GaussianInt,
    /// `first_image == R_B(t)·B^r + 2·S_B(k)·i`.
    pub first_image_ok: bool,
    /// `S_B(first_image)`, from its ordinary digits.
    pub landing: GaussianInt,
    /// `t - S_B(2·S_B(k))`.
    pub expected_landing: BigInt,
    pub landing_happy: bool,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.first_image_ok
            && self.landing == GaussianInt::from(self.expected_landing.clone())
            && self.landing_happy
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub base: Base,
    pub m: u64,
    pub rational: RationalRun,
    pub params: WitnessParams,
    /// `t = a + d·M`.
    pub target: BigUint,
    /// `b = R_B(R_B(t)·B^r)`.
    pub b: RleNumeral,
    pub terms: Vec<WitnessTerm>,
    pub checks: Vec<WitnessCheck>,
    /// Every check passed: the terms are `m` Gaussian happy numbers with
    /// common difference `1+i`.
    pub valid: bool,
}

/// `R_B(t)` as an ordinary integer: `(B^(t+1) - B) / (B - 1)`.
fn repunit_value(t: &BigUint, base: Base) -> Result<BigUint> {
    let exp: u32 = t
        .try_into()
        .map_err(|_| Error::Capacity(format!("R_B({t}) has too many digits")))?;
    let b = BigUint::from(base.get());
    Ok((b.pow(exp + 1) - &b) / (&b - BigUint::one()))
}

/// Builds and machine-checks the witness for `m` terms from a supplied
/// rational run.
pub fn build_witness(base: Base, m: u64, rational: RationalRun) -> Result<WitnessReport> {
    let expected_step = base.rational_step();
    if rational.step != expected_step {
        return Err(Error::WrongStep {
            supplied: rational.step,
            expected: expected_step,
        });
    }
    let params = required_params(base, m)?;
    if rational.len < params.run_length {
        return Err(Error::RunTooShort {
            supplied: rational.len,
            required: params.run_length,
        });
    }
    let mut memo = HeightMemo::new(base);
    for j in 0..rational.len {
        let value = j
            .checked_mul(rational.step)
            .and_then(|x| x.checked_add(rational.start))
            .filter(|&x| x <= i64::MAX as u64)
            .ok_or_else(|| Error::Capacity("rational run leaves the word range".into()))?;
        if !memo.is_happy_small((value as i64, 0)) {
            return Err(Error::UnhappyTerm {
                index: j,
                value: value.to_string(),
            });
        }
    }

    let target = BigUint::from(rational.start) + BigUint::from(rational.step) * rational.len;
    let shift = BigUint::from(params.shift);
    let b_pow_r = BigUint::from(base.get()).pow(params.shift as u32);
    let outer = repunit_value(&target, base)? * &b_pow_r;
    let b = r_b(&outer, base)?;
    let shifted = rle_shift(&b, &shift);
    let outer_int = BigInt::from(outer);

    let mut terms = Vec::new();
    let mut checks = Vec::new();
    for k in 1..=m {
        let low = GaussianInt::new(k as i64, k as i64);
        let numeral = rle_add_low(&shifted, &low)?;
        let twice = 2 * s_b_u64(k, base);
        if BigUint::from(twice) >= b_pow_r {
            return Err(Error::Invariant(format!(
                "B^r does not exceed 2·S_B({k}) = {twice}"
            )));
        }
        let first_image = s_b_rle(&numeral);
        let expected_first = GaussianInt::new(outer_int.clone(), twice as i64);
        let landing = s_b(&first_image, base);
        let expected_landing = BigInt::from(target.clone()) - BigInt::from(s_b_u64(twice, base));
        let landing_happy = memo.is_happy(&landing);
        terms.push(WitnessTerm {
            k,
            numeral,
            description: format!(
                "R_{B}(R_{B}({target})·{B}^{r})·{B}^{r} + {k}(1+i)",
                B = base,
                r = params.shift
            ),
        });
        checks.push(WitnessCheck {
            k,
            first_image_ok: first_image == expected_first,
            first_image,
            landing,
            expected_landing,
            landing_happy,
        });
    }
    let valid = checks.iter().all(WitnessCheck::passed);
    Ok(WitnessReport {
        base,
        m,
        rational,
        params,
        target,
        b,
        terms,
        checks,
        valid,
    })
}
