//! Heights of happy numbers and searches for the smallest number of each
//! height.
//!
//! The height of a happy `z` is the least `k ≥ 0` with `S_B^k(z) = 1`.
//! "Smallest" means smallest norm; ties are all reported and grouped into
//! unit/conjugation classes.

use std::collections::HashMap;

use num_integer::Roots;

use crate::dynamics::classify;
use crate::error::{Error, Result};
use crate::gaussian::{Base, GaussianInt};
use crate::happy::{canonical_rep, s_b, s_b_small};

/// Least `k` with `S_B^k(z) = 1`, or `None` when `z` is not happy.
pub fn height(z: &GaussianInt, base: Base) -> Option<u32> {
    classify(z, base).height().map(|h| h as u32)
}

/// Memoized heights over machine-word Gaussian integers.
#[derive(Debug, Clone)]
pub struct HeightMemo {
    base: Base,
    known: HashMap<(i64, i64), Option<u32>>,
    path: Vec<(i64, i64)>,
}

impl HeightMemo {
    pub fn new(base: Base) -> Self {
        let mut known = HashMap::new();
        known.insert((1, 0), Some(0));
        known.insert((0, 0), None);
        HeightMemo {
            base,
            known,
            path: Vec::new(),
        }
    }

    pub fn base(&self) -> Base {
        self.base
    }

    /// Height of a word-sized point; `None` if not happy. Falls back to the
    /// big-integer classifier if an orbit leaves the word range.
    pub fn height_small(&mut self, start: (i64, i64)) -> Option<u32> {
        self.path.clear();
        let mut z = start;
        let end = loop {
            if let Some(&h) = self.known.get(&z) {
                break h;
            }
            if self.path.contains(&z) {
                break None;
            }
            self.path.push(z);
            match s_b_small(z, self.base) {
                Some(next) => z = next,
                None => return height(&GaussianInt::from_small(start), self.base),
            }
        };
        let len = self.path.len();
        for (k, &q) in self.path.iter().enumerate() {
            self.known.insert(q, end.map(|e| e + (len - k) as u32));
        }
        end.map(|e| e + len as u32)
    }

    pub fn height(&mut self, z: &GaussianInt) -> Option<u32> {
        if let Some(small) = z.to_small() {
            return self.height_small(small);
        }
        // Large inputs shrink to word size after a step or two.
        let next = s_b(z, self.base);
        if &next == z {
            return None;
        }
        self.height(&next).map(|h| h + 1)
    }

    pub fn is_happy_small(&mut self, z: (i64, i64)) -> bool {
        self.height_small(z).is_some()
    }

    pub fn is_happy(&mut self, z: &GaussianInt) -> bool {
        self.height(z).is_some()
    }
}

/// Every `z` with `norm(z) ≤ norm_limit`, once each, sorted by norm, then
/// real part, then imaginary part.
pub fn norm_ordered_stream(norm_limit: u64) -> impl Iterator<Item = GaussianInt> {
    NormOrdered::new(norm_limit).map(GaussianInt::from_small)
}

/// Word-sized form of [`norm_ordered_stream`]. Points are produced in norm
/// shells so the whole disc is never held in memory.
#[derive(Debug, Clone)]
pub struct NormOrdered {
    limit: u64,
    next_lo: u64,
    exhausted: bool,
    buffer: std::vec::IntoIter<(i64, i64)>,
}

impl NormOrdered {
    pub fn new(norm_limit: u64) -> Self {
        NormOrdered {
            limit: norm_limit,
            next_lo: 0,
            exhausted: false,
            buffer: Vec::new().into_iter(),
        }
    }

    /// Points with `lo ≤ norm < hi`.
    fn fill(&mut self, lo: u64, hi: u64) {
        let mut shell = Vec::new();
        let r = (hi - 1).sqrt() as i64;
        for re in -r..=r {
            let re2 = (re * re) as u64;
            let top = hi - 1 - re2;
            let im_max = top.sqrt() as i64;
            let im_min = if lo > re2 {
                let need = lo - re2;
                let s = need.sqrt();
                (if s * s < need { s + 1 } else { s }) as i64
            } else {
                0
            };
            for im in im_min..=im_max {
                shell.push((re, im));
                if im != 0 {
                    shell.push((re, -im));
                }
            }
        }
        shell.sort_by_key(|&(re, im)| ((re * re + im * im) as u64, re, im));
        self.buffer = shell.into_iter();
    }
}

impl Iterator for NormOrdered {
    type Item = (i64, i64);

    fn next(&mut self) -> Option<(i64, i64)> {
        loop {
            if let Some(z) = self.buffer.next() {
                return Some(z);
            }
            if self.exhausted {
                return None;
            }
            let lo = self.next_lo;
            let width = (lo / 8).max(1024);
            let hi = lo.saturating_add(width).min(self.limit.saturating_add(1));
            self.fill(lo, hi);
            self.next_lo = hi;
            if hi > self.limit {
                self.exhausted = true;
            }
        }
    }
}

/// Which numbers a smallest-of-height search ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Gaussian,
    /// Positive rational integers `n` with `n² ≤ norm_limit`.
    RationalPositive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallestOfHeight {
    pub base: Base,
    pub height: u32,
    /// Norm shared by every member.
    pub norm: u64,
    /// Representative of the first class: its member with the largest real
    /// part, ties broken by the largest imaginary part. For a full orbit this
    /// is [`canonical_rep`].
    pub class_rep: GaussianInt,
    /// Every value of minimal norm with this height, in crate order.
    pub members: Vec<GaussianInt>,
    /// `members` grouped by unit/conjugation orbit.
    pub classes: Vec<Vec<GaussianInt>>,
}

impl SmallestOfHeight {
    fn from_members(base: Base, height: u32, norm: u64, mut members: Vec<GaussianInt>) -> Self {
        members.sort();
        let mut classes: Vec<(GaussianInt, Vec<GaussianInt>)> = Vec::new();
        for z in &members {
            let key = canonical_rep(z);
            match classes.iter_mut().find(|(k, _)| *k == key) {
                Some((_, class)) => class.push(z.clone()),
                None => classes.push((key, vec![z.clone()])),
            }
        }
        let classes: Vec<Vec<GaussianInt>> = classes.into_iter().map(|(_, c)| c).collect();
        let class_rep = classes[0]
            .iter()
            .max_by(|x, y| x.re().cmp(y.re()).then_with(|| x.im().cmp(y.im())))
            .cloned()
            .expect("class is nonempty");
        SmallestOfHeight {
            base,
            height,
            norm,
            class_rep,
            members,
            classes,
        }
    }

    /// Whether `z` lies in one of the reported classes.
    pub fn contains_class_of(&self, z: &GaussianInt) -> bool {
        let key = canonical_rep(z);
        self.classes.iter().any(|c| canonical_rep(&c[0]) == key)
    }
}

/// Heights 0, 1 and 2 are attained at norm 1 by exactly `1`, `-1` and
/// `±i` in every base.
fn unit_heights(base: Base, h: u32) -> SmallestOfHeight {
    let members = match h {
        0 => vec![GaussianInt::one()],
        1 => vec![GaussianInt::new(-1, 0)],
        2 => vec![GaussianInt::new(0, -1), GaussianInt::i()],
        _ => unreachable!("only heights 0 through 2 are fixed"),
    };
    SmallestOfHeight::from_members(base, h, 1, members)
}

/// One entry per height `0..=max_h`, computed from a single shared scan.
pub fn smallest_heights_table_in(
    base: Base,
    max_h: u32,
    norm_limit: u64,
    domain: Domain,
) -> Vec<Result<SmallestOfHeight>> {
    let fixed = |h: u32| domain == Domain::Gaussian && h <= 2 && norm_limit >= 1;
    let mut best: Vec<Option<(u64, Vec<GaussianInt>)>> = vec![None; max_h as usize + 1];
    let mut missing = (0..=max_h).filter(|&h| !fixed(h)).count();
    let mut memo = HeightMemo::new(base);

    let points: Box<dyn Iterator<Item = (i64, i64)>> = match domain {
        Domain::Gaussian => Box::new(NormOrdered::new(norm_limit)),
        Domain::RationalPositive => {
            let top = norm_limit.sqrt() as i64;
            Box::new((1..=top).map(|n| (n, 0)))
        }
    };
    let mut settled_norm = 0u64;
    for z in points {
        let norm = (z.0 * z.0 + z.1 * z.1) as u64;
        if missing == 0 && norm > settled_norm {
            break;
        }
        let Some(h) = memo.height_small(z) else {
            continue;
        };
        if h > max_h || fixed(h) {
            continue;
        }
        match &mut best[h as usize] {
            slot @ None => {
                *slot = Some((norm, vec![GaussianInt::from_small(z)]));
                missing -= 1;
                settled_norm = settled_norm.max(norm);
            }
            Some((n, members)) if *n == norm => members.push(GaussianInt::from_small(z)),
            Some(_) => {}
        }
    }

    best.into_iter()
        .enumerate()
        .map(|(h, found)| {
            let h = h as u32;
            if fixed(h) {
                return Ok(unit_heights(base, h));
            }
            found
                .map(|(norm, members)| SmallestOfHeight::from_members(base, h, norm, members))
                .ok_or(Error::NotFoundWithinLimit { limit: norm_limit })
        })
        .collect()
}

pub fn smallest_heights_table(
    base: Base,
    max_h: u32,
    norm_limit: u64,
) -> Vec<Result<SmallestOfHeight>> {
    smallest_heights_table_in(base, max_h, norm_limit, Domain::Gaussian)
}

/// Smallest-norm Gaussian integers of height `h`.
pub fn smallest_of_height(base: Base, h: u32, norm_limit: u64) -> Result<SmallestOfHeight> {
    smallest_heights_table(base, h, norm_limit)
        .pop()
        .expect("table has an entry for h")
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
    fn height_examples() {
        assert_eq!(height(&g(1, 0), base(10)), Some(0));
        assert_eq!(height(&g(0, 1), base(10)), Some(2));
        assert_eq!(height(&g(365, 0), base(10)), Some(6));
        assert_eq!(height(&g(2, 0), base(10)), None);
    }

    #[test]
    fn memo_agrees_with_classifier() {
        for b in [2u32, 3, 10] {
            let mut memo = HeightMemo::new(base(b));
            for re in -40..=40 {
                for im in -40..=40 {
                    assert_eq!(memo.height_small((re, im)), height(&g(re, im), base(b)));
                }
            }
        }
    }

    #[test]
    fn memo_handles_big_input() {
        let z = GaussianInt::new(
            "123456789012345678901234567890"
                .parse::<num_bigint::BigInt>()
                .unwrap(),
            7,
        );
        let mut memo = HeightMemo::new(base(10));
        assert_eq!(memo.height(&z), height(&z, base(10)));
    }

    #[test]
    fn stream_examples() {
        let small = |limit| NormOrdered::new(limit).collect::<Vec<_>>();
        assert_eq!(small(0), vec![(0, 0)]);
        assert_eq!(small(1), vec![(0, 0), (-1, 0), (0, -1), (0, 1), (1, 0)]);
        let two = small(2);
        assert_eq!(two.len(), 9);
        assert_eq!(&two[5..], &[(-1, -1), (-1, 1), (1, -1), (1, 1)]);
    }

    #[test]
    fn stream_is_sorted_and_complete_across_shells() {
        let limit = 20_000u64;
        let got: Vec<_> = NormOrdered::new(limit).collect();
        let mut expected = Vec::new();
        let r = limit.sqrt() as i64;
        for re in -r..=r {
            for im in -r..=r {
                if ((re * re + im * im) as u64) <= limit {
                    expected.push((re, im));
                }
            }
        }
        expected.sort_by_key(|&(re, im)| (re * re + im * im, re, im));
        assert_eq!(got, expected);
    }

    #[test]
    fn unit_heights_in_every_base() {
        for b in 2..=10 {
            let table = smallest_heights_table(base(b), 2, 10);
            let members: Vec<Vec<GaussianInt>> =
                table.into_iter().map(|e| e.unwrap().members).collect();
            assert_eq!(
                members,
                vec![vec![g(1, 0)], vec![g(-1, 0)], vec![g(0, -1), g(0, 1)]]
            );
        }
    }

    #[test]
    fn generic_scan_agrees_with_fixed_unit_heights() {
        for b in 2..=10 {
            let mut memo = HeightMemo::new(base(b));
            let mut found: Vec<Vec<(i64, i64)>> = vec![Vec::new(); 3];
            for z in NormOrdered::new(1) {
                if let Some(h) = memo.height_small(z) {
                    found[h as usize].push(z);
                }
            }
            assert_eq!(
                found,
                vec![vec![(1, 0)], vec![(-1, 0)], vec![(0, -1), (0, 1)]]
            );
        }
    }

    #[test]
    fn smallest_of_height_examples() {
        let e = smallest_of_height(base(10), 3, 1000).unwrap();
        assert_eq!(e.norm, 288);
        assert_eq!(e.class_rep, g(12, 12));
        assert_eq!(e.classes.len(), 1);
        assert_eq!(e.members.len(), 4);

        let e = smallest_of_height(base(2), 3, 1000).unwrap();
        assert!(e.contains_class_of(&g(1, 1)));
        let e = smallest_of_height(base(10), 5, 1000).unwrap();
        assert_eq!(e.class_rep, g(7, 0));
        let e = smallest_of_height(base(7), 3, 2000).unwrap();
        assert!(e.contains_class_of(&g(20, 27)));
        assert_eq!(e.norm, 1129);
    }

    #[test]
    fn not_found_within_limit() {
        assert_eq!(
            smallest_of_height(base(7), 3, 1000),
            Err(Error::NotFoundWithinLimit { limit: 1000 })
        );
        assert!(smallest_of_height(base(10), 0, 0).is_err());
    }

    #[test]
    fn rational_domain() {
        let table = smallest_heights_table_in(base(10), 5, 1_000_000, Domain::RationalPositive);
        let reps: Vec<_> = table.into_iter().map(|e| e.unwrap().class_rep).collect();
        assert_eq!(
            reps,
            vec![g(1, 0), g(10, 0), g(13, 0), g(23, 0), g(19, 0), g(7, 0)]
        );
    }

    #[test]
    fn base_four_table_ends_with_one_plus_i() {
        let table = smallest_heights_table(base(4), 3, 1000);
        assert!(table[3].as_ref().unwrap().contains_class_of(&g(1, 1)));
    }
}
