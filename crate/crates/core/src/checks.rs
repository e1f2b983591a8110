//! Seeded randomized property suites.
//!
//! Each suite samples inputs from a ChaCha stream and counts violations of
//! one identity of the happy function. Identical seeds give identical runs.

use num_bigint::{BigInt, RandBigInt};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digits::to_digits;
use crate::dynamics::region_bound;
use crate::gaussian::{Base, GaussianInt};
use crate::happy::s_b;
use crate::sequences::in_onepi_coset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub base: Base,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Input generators shared by the suites.
pub mod gen {
    use super::*;

    /// Uniform integer with absolute value below `10^digits`.
    pub fn signed_below_pow10<R: Rng>(rng: &mut R, digits: u32) -> BigInt {
        let top = BigInt::from(10u32).pow(digits);
        rng.gen_bigint_range(&(-&top + 1), &top)
    }

    /// Gaussian integer whose components have a random number of decimal
    /// digits up to `max_digits`, so small and large magnitudes both occur.
    pub fn gaussian<R: Rng>(rng: &mut R, max_digits: u32) -> GaussianInt {
        let dr = rng.gen_range(1..=max_digits);
        let di = rng.gen_range(1..=max_digits);
        GaussianInt::new(signed_below_pow10(rng, dr), signed_below_pow10(rng, di))
    }

    /// Gaussian integer with `max(|re|, |im|) ≥ floor` and components below
    /// `10^max_digits`.
    pub fn gaussian_at_least<R: Rng>(rng: &mut R, floor: &BigInt, max_digits: u32) -> GaussianInt {
        let top = BigInt::from(10u32).pow(max_digits);
        // Pick the size of the large component log-uniformly so values near
        // the floor are exercised as well as huge ones.
        let floor_digits = floor.to_string().len() as u32;
        let d = rng.gen_range(floor_digits..=max_digits);
        let hi = BigInt::from(10u32).pow(d).min(top.clone());
        let lo = if d == floor_digits {
            floor.clone()
        } else {
            BigInt::from(10u32).pow(d - 1)
        };
        let big = rng.gen_bigint_range(&lo, &hi);
        let big = if rng.gen() { -big } else { big };
        let other = rng.gen_bigint_range(&(-&top + 1), &top);
        if rng.gen() {
            GaussianInt::new(big, other)
        } else {
            GaussianInt::new(other, big)
        }
    }

    /// Nonnegative `(a + bi, c + di, r)` with `B^r > max(c, d)`.
    pub fn split_input<R: Rng>(rng: &mut R, base: Base) -> (GaussianInt, GaussianInt, u32) {
        let r = rng.gen_range(0..=12u32);
        let limit = BigInt::from(base.get()).pow(r);
        let a = rng.gen_bigint_range(&BigInt::zero(), &BigInt::from(10u64).pow(20));
        let b = rng.gen_bigint_range(&BigInt::zero(), &BigInt::from(10u64).pow(20));
        let c = rng.gen_bigint_range(&BigInt::zero(), &limit);
        let d = rng.gen_bigint_range(&BigInt::zero(), &limit);
        (GaussianInt::new(a, b), GaussianInt::new(c, d), r)
    }
}

struct Tally {
    name: &'static str,
    base: Base,
    cases: u64,
    failures: u64,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str, base: Base) -> Self {
        Tally {
            name,
            base,
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            base: self.base,
            cases: self.cases,
            failures: self.failures,
            first_failure: self.first_failure,
        }
    }
}

/// `S_B(z) = S_B(-z)`, `S_B(conj z) = conj S_B(z)`, `S_B(iz) = -S_B(z)`,
/// realness iff every digit product vanishes, zero real part when
/// `re = ±im`, and an even imaginary part.
pub fn digit_symmetries<R: Rng>(rng: &mut R, base: Base, samples: u64) -> Vec<SuiteResult> {
    let mut neg = Tally::new("negation", base);
    let mut conj = Tally::new("conjugation", base);
    let mut rot = Tally::new("multiplication by i", base);
    let mut real = Tally::new("real iff digit products vanish", base);
    let mut diag = Tally::new("zero real part on the diagonals", base);
    let mut even = Tally::new("even imaginary part", base);
    for _ in 0..samples {
        let z = gen::gaussian(rng, 30);
        let image = s_b(&z, base);
        neg.record(s_b(&-&z, base) == image, || z.to_string());
        conj.record(s_b(&z.conj(), base) == image.conj(), || z.to_string());
        rot.record(s_b(&z.mul_i(), base) == -&image, || z.to_string());
        let products_vanish = to_digits(&z, base).pairs().iter().all(|p| p.re * p.im == 0);
        real.record(image.is_real() == products_vanish, || z.to_string());
        even.record((image.im() % 2u32).is_zero(), || z.to_string());
        let d = z.re().clone();
        let on_diagonal = if rng.gen() {
            GaussianInt::new(d.clone(), d)
        } else {
            GaussianInt::new(-&d, d)
        };
        diag.record(s_b(&on_diagonal, base).re().is_zero(), || {
            on_diagonal.to_string()
        });
    }
    [neg, conj, rot, real, diag, even]
        .into_iter()
        .map(Tally::finish)
        .collect()
}

/// `S_B((a+bi)·B^r + (c+di)) = S_B(a+bi) + S_B(c+di)` for nonnegative parts
/// with `B^r > max(c, d)`.
pub fn additive_split<R: Rng>(rng: &mut R, base: Base, samples: u64) -> SuiteResult {
    let mut t = Tally::new("additive split", base);
    for _ in 0..samples {
        let (high, low, r) = gen::split_input(rng, base);
        let shifted = &high * &BigInt::from(base.get()).pow(r);
        let lhs = s_b(&(&shifted + &low), base);
        let rhs = &s_b(&high, base) + &s_b(&low, base);
        t.record(lhs == rhs, || format!("high {high}, low {low}, r {r}"));
    }
    t.finish()
}

/// `|S_B(z)|² < |z|²` whenever `max(|re|, |im|) ≥ region_bound(B)`.
pub fn contraction<R: Rng>(rng: &mut R, base: Base, samples: u64) -> SuiteResult {
    let mut t = Tally::new("contraction", base);
    let floor = BigInt::from(region_bound(base));
    for _ in 0..samples {
        let z = gen::gaussian_at_least(rng, &floor, 30);
        debug_assert!(z.max_abs_component() >= floor);
        t.record(s_b(&z, base).norm() < z.norm(), || z.to_string());
    }
    t.finish()
}

/// For odd `B`, `S_B(z) ≡ z (mod 1+i)`.
pub fn coset_preservation<R: Rng>(rng: &mut R, base: Base, samples: u64) -> Option<SuiteResult> {
    if !base.is_odd() {
        return None;
    }
    let mut t = Tally::new("coset preservation", base);
    for _ in 0..samples {
        let z = gen::gaussian(rng, 30);
        t.record(in_onepi_coset(&s_b(&z, base)) == in_onepi_coset(&z), || {
            z.to_string()
        });
    }
    Some(t.finish())
}

/// Every suite for every base, from one seeded stream per base.
pub fn run_all(bases: &[Base], samples: u64, seed: u64) -> Vec<SuiteResult> {
    let mut out = Vec::new();
    for &base in bases {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (base.get() as u64).rotate_left(32));
        out.extend(digit_symmetries(&mut rng, base, samples));
        out.push(additive_split(&mut rng, base, samples));
        out.push(contraction(&mut rng, base, samples));
        out.extend(coset_preservation(&mut rng, base, samples));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_are_deterministic() {
        let bases: Vec<Base> = [2u32, 3, 7, 10]
            .into_iter()
            .map(|b| Base::new(b).unwrap())
            .collect();
        let first = run_all(&bases, 300, 42);
        assert!(first.iter().all(SuiteResult::passed), "{first:?}");
        assert_eq!(first, run_all(&bases, 300, 42));
        // 6 digit suites + split + contraction, plus coset for odd bases.
        assert_eq!(first.len(), 4 * 8 + 2);
    }

    #[test]
    fn at_least_generator_respects_floor() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let floor = BigInt::from(343);
        for _ in 0..2000 {
            let z = gen::gaussian_at_least(&mut rng, &floor, 30);
            assert!(z.max_abs_component() >= floor);
            assert!(z.max_abs_component() < BigInt::from(10u32).pow(30));
        }
    }
}
