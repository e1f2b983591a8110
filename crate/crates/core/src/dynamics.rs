//! Orbits of `S_B`: trajectories, cycles and the exhaustive cycle catalog.
//!
//! Outside the square `|re|, |im| < region_bound(B)` the happy function
//! strictly decreases absolute value, so every cycle meets that square and a
//! scan of it finds them all.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{Base, GaussianInt};
use crate::happy::{s_b, s_b_small};

/// Largest grid (in cells) the catalog scan will allocate.
pub const MAX_GRID_CELLS: u64 = 1 << 28;

/// `B^4` for `2 ≤ B ≤ 6`, `B^3` for `B ≥ 7`.
pub fn region_bound(base: Base) -> BigUint {
    let exp = if base.get() <= 6 { 4 } else { 3 };
    BigUint::from(base.get()).pow(exp)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Terminal {
    Happy,
    Zero,
    /// The orbit entered a cycle other than `{0}` and `{1}`. `entry` is the
    /// index in `steps` of the first cycle element reached.
    InCycle {
        anchor: GaussianInt,
        length: usize,
        entry: usize,
    },
}

impl Terminal {
    /// Anchor of the terminal cycle, counting `{1}` and `{0}` as cycles.
    pub fn cycle_anchor(&self) -> GaussianInt {
        match self {
            Terminal::Happy => GaussianInt::one(),
            Terminal::Zero => GaussianInt::zero(),
            Terminal::InCycle { anchor, .. } => anchor.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub base: Base,
    pub start: GaussianInt,
    /// Start first; each later element is `S_B` of the previous one. No value
    /// appears twice.
    pub steps: Vec<GaussianInt>,
    pub terminal: Terminal,
}

impl Trajectory {
    pub fn is_happy(&self) -> bool {
        self.terminal == Terminal::Happy
    }

    /// Number of applications of `S_B` needed to reach 1.
    pub fn height(&self) -> Option<usize> {
        self.is_happy().then(|| self.steps.len() - 1)
    }
}

/// Iterates `S_B` from `z` until it reaches 1, 0 or a repeated value.
pub fn classify(z: &GaussianInt, base: Base) -> Trajectory {
    let mut steps = Vec::new();
    let mut seen: HashMap<GaussianInt, usize> = HashMap::new();
    let mut current = z.clone();
    let terminal = loop {
        if current.is_one() {
            steps.push(current);
            break Terminal::Happy;
        }
        if current.is_zero() {
            steps.push(current);
            break Terminal::Zero;
        }
        if let Some(&entry) = seen.get(&current) {
            let anchor = steps[entry..]
                .iter()
                .min()
                .cloned()
                .expect("cycle is nonempty");
            break Terminal::InCycle {
                anchor,
                length: steps.len() - entry,
                entry,
            };
        }
        seen.insert(current.clone(), steps.len());
        let next = s_b(&current, base);
        steps.push(current);
        current = next;
    };
    Trajectory {
        base,
        start: z.clone(),
        steps,
        terminal,
    }
}

pub fn is_happy(z: &GaussianInt, base: Base) -> bool {
    classify(z, base).is_happy()
}

/// A periodic orbit of `S_B`, rotated so its smallest element (by norm, then
/// real part, then imaginary part) comes first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle {
    base: Base,
    elements: Vec<GaussianInt>,
}

impl Cycle {
    /// Checks that `elements` is a cycle in orbit order and rotates it to its
    /// anchor.
    pub fn from_orbit(base: Base, mut elements: Vec<GaussianInt>) -> Result<Cycle> {
        if elements.is_empty() {
            return Err(Error::Invariant("empty cycle".into()));
        }
        for (k, z) in elements.iter().enumerate() {
            let next = &elements[(k + 1) % elements.len()];
            if &s_b(z, base) != next {
                return Err(Error::Invariant(format!(
                    "S_{base}({z}) is not {next}: not a cycle in orbit order"
                )));
            }
        }
        let mut sorted = elements.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != elements.len() {
            return Err(Error::Invariant("cycle repeats an element".into()));
        }
        let anchor_pos = (0..elements.len())
            .min_by(|&x, &y| elements[x].cmp(&elements[y]))
            .expect("nonempty");
        elements.rotate_left(anchor_pos);
        Ok(Cycle { base, elements })
    }

    /// The cycle through a periodic point `z`.
    pub fn through(base: Base, z: &GaussianInt) -> Result<Cycle> {
        let mut elements = vec![z.clone()];
        let mut next = s_b(z, base);
        while &next != z {
            if elements.len() > 1 << 20 {
                return Err(Error::Invariant(format!("{z} is not periodic")));
            }
            elements.push(next.clone());
            next = s_b(&next, base);
        }
        Cycle::from_orbit(base, elements)
    }

    fn from_small_unchecked(base: Base, elements: &[(i64, i64)]) -> Cycle {
        let mut elements: Vec<GaussianInt> = elements
            .iter()
            .copied()
            .map(GaussianInt::from_small)
            .collect();
        let anchor_pos = (0..elements.len())
            .min_by(|&x, &y| elements[x].cmp(&elements[y]))
            .expect("nonempty");
        elements.rotate_left(anchor_pos);
        Cycle { base, elements }
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn anchor(&self) -> &GaussianInt {
        &self.elements[0]
    }

    pub fn elements(&self) -> &[GaussianInt] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_fixed_point(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, z: &GaussianInt) -> bool {
        self.elements.contains(z)
    }

    /// Elementwise conjugate; `S_B` commutes with conjugation so this is again
    /// a cycle.
    pub fn conjugate(&self) -> Cycle {
        let mut elements: Vec<GaussianInt> = self.elements.iter().map(GaussianInt::conj).collect();
        let anchor_pos = (0..elements.len())
            .min_by(|&x, &y| elements[x].cmp(&elements[y]))
            .expect("nonempty");
        elements.rotate_left(anchor_pos);
        Cycle {
            base: self.base,
            elements,
        }
    }

    pub fn is_self_conjugate(&self) -> bool {
        self.conjugate() == *self
    }

    pub fn is_rational(&self) -> bool {
        self.elements.iter().all(GaussianInt::is_real)
    }
}

/// Every cycle found by a grid scan, sorted by anchor, with conjugate cycles
/// grouped into classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCatalog {
    base: Base,
    bound: u64,
    cycles: Vec<Cycle>,
    classes: Vec<Vec<usize>>,
}

impl CycleCatalog {
    /// Sorts and deduplicates `cycles` by anchor and groups conjugates.
    pub fn new(base: Base, bound: u64, mut cycles: Vec<Cycle>) -> Result<CycleCatalog> {
        if let Some(c) = cycles.iter().find(|c| c.base != base) {
            return Err(Error::Invariant(format!(
                "cycle through {} belongs to base {}, not {base}",
                c.anchor(),
                c.base
            )));
        }
        cycles.sort_by(|x, y| x.anchor().cmp(y.anchor()));
        cycles.dedup_by(|x, y| x.anchor() == y.anchor());
        let index: HashMap<&GaussianInt, usize> = cycles
            .iter()
            .enumerate()
            .map(|(k, c)| (c.anchor(), k))
            .collect();
        let mut classes = Vec::new();
        let mut assigned = vec![false; cycles.len()];
        for (k, cycle) in cycles.iter().enumerate() {
            if assigned[k] {
                continue;
            }
            assigned[k] = true;
            let mut class = vec![k];
            let conj = cycle.conjugate();
            match index.get(conj.anchor()) {
                Some(&j) if j != k => {
                    assigned[j] = true;
                    class.push(j);
                }
                Some(_) => {}
                None => {
                    return Err(Error::Invariant(format!(
                        "conjugate of the cycle through {} is missing",
                        cycle.anchor()
                    )))
                }
            }
            classes.push(class);
        }
        Ok(CycleCatalog {
            base,
            bound,
            cycles,
            classes,
        })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    /// Half-width of the scanned square: `|re|, |im| < bound`.
    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Whether the scanned square covers the contraction region, so the
    /// catalog provably lists every cycle.
    pub fn is_complete(&self) -> bool {
        BigUint::from(self.bound) >= region_bound(self.base)
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    /// Conjugate classes as indices into [`cycles`](Self::cycles).
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, cycle_index: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.contains(&cycle_index))
            .expect("every cycle is in a class")
    }

    pub fn fixed_points(&self) -> Vec<&GaussianInt> {
        self.cycles
            .iter()
            .filter(|c| c.is_fixed_point())
            .map(Cycle::anchor)
            .collect()
    }

    pub fn cycle_with_anchor(&self, anchor: &GaussianInt) -> Option<&Cycle> {
        self.cycles
            .binary_search_by(|c| c.anchor().cmp(anchor))
            .ok()
            .map(|k| &self.cycles[k])
    }

    pub fn cycle_containing(&self, z: &GaussianInt) -> Option<&Cycle> {
        self.cycles.iter().find(|c| c.contains(z))
    }
}

#[derive(Clone, Debug, Default)]
pub struct ScanOptions {
    /// Half-width of the scanned square; defaults to [`region_bound`].
    pub bound: Option<u64>,
    /// Worker threads; defaults to the rayon global pool.
    pub workers: Option<usize>,
}

/// Result of a full grid scan: the catalog plus the terminal cycle of every
/// scanned point.
#[derive(Debug)]
pub struct GridScan {
    pub catalog: CycleCatalog,
    bound: i64,
    terminals: Vec<u32>,
}

impl GridScan {
    /// The terminal cycle of a scanned point.
    pub fn terminal_at(&self, (re, im): (i64, i64)) -> Option<&Cycle> {
        let grid = Grid::new(self.bound);
        let idx = grid.index((re, im))?;
        Some(&self.catalog.cycles[self.terminals[idx] as usize])
    }

    /// Number of scanned points ending in each cycle, indexed like
    /// `catalog.cycles()`.
    pub fn basin_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![0u64; self.catalog.cycles.len()];
        for &t in &self.terminals {
            sizes[t as usize] += 1;
        }
        sizes
    }
}

#[derive(Clone, Copy)]
struct Grid {
    bound: i64,
    side: i64,
}

impl Grid {
    fn new(bound: i64) -> Grid {
        Grid {
            bound,
            side: 2 * bound - 1,
        }
    }

    #[inline]
    fn index(&self, (re, im): (i64, i64)) -> Option<usize> {
        if re.abs() < self.bound && im.abs() < self.bound {
            Some(((re + self.bound - 1) * self.side + (im + self.bound - 1)) as usize)
        } else {
            None
        }
    }
}

#[inline]
fn small_key(&(re, im): &(i64, i64)) -> (i128, i64, i64) {
    let (a, b) = (re as i128, im as i128);
    (a * a + b * b, re, im)
}

/// Cycles discovered during a scan, keyed by anchor. Ids are provisional and
/// are remapped to sorted catalog positions afterwards.
#[derive(Default)]
struct Registry {
    ids: HashMap<(i64, i64), u32>,
    cycles: Vec<Vec<(i64, i64)>>,
}

impl Registry {
    fn insert(&mut self, mut cycle: Vec<(i64, i64)>) -> u32 {
        let pos = (0..cycle.len())
            .min_by_key(|&k| small_key(&cycle[k]))
            .expect("nonempty");
        cycle.rotate_left(pos);
        let next_id = self.cycles.len() as u32;
        *self.ids.entry(cycle[0]).or_insert_with(|| {
            self.cycles.push(cycle);
            next_id
        })
    }
}

struct Scan<'a> {
    base: Base,
    grid: Grid,
    memo: &'a [AtomicU32],
    registry: &'a Mutex<Registry>,
}

impl Scan<'_> {
    /// Classifies `start` and every in-grid point on its path. Memo entries
    /// hold `1 + provisional cycle id`; 0 means unknown.
    fn walk(&self, start: (i64, i64), path: &mut Vec<(i64, i64)>) -> Result<()> {
        path.clear();
        let mut z = start;
        let terminal = loop {
            if let Some(idx) = self.grid.index(z) {
                let known = self.memo[idx].load(Ordering::Acquire);
                if known != 0 {
                    break known;
                }
            }
            if let Some(pos) = path.iter().position(|&q| q == z) {
                let id = self
                    .registry
                    .lock()
                    .expect("registry lock")
                    .insert(path[pos..].to_vec());
                break id + 1;
            }
            path.push(z);
            z = s_b_small(z, self.base).ok_or_else(|| {
                Error::Capacity(format!("orbit of {start:?} left the machine-word range"))
            })?;
        };
        for &q in path.iter() {
            if let Some(idx) = self.grid.index(q) {
                // Every writer stores the same cycle, so losing the race is fine.
                let _ = self.memo[idx].compare_exchange(
                    0,
                    terminal,
                    Ordering::AcqRel,
                    Ordering::Acquire,
                );
            }
        }
        Ok(())
    }
}

/// Classifies every point of the square `|re|, |im| < bound` and collects
/// the cycles reached. Output is independent of the worker count.
pub fn scan_grid(base: Base, options: &ScanOptions) -> Result<GridScan> {
    let bound = match options.bound {
        Some(b) => b,
        None => region_bound(base).to_u64().ok_or_else(|| {
            Error::Capacity(format!("region bound for base {base} exceeds 64 bits"))
        })?,
    };
    if bound < 2 {
        return Err(Error::InvalidArgument(format!(
            "scan bound {bound} must be at least 2"
        )));
    }
    let side = 2 * bound - 1;
    let cells = side
        .checked_mul(side)
        .filter(|&c| c <= MAX_GRID_CELLS)
        .ok_or_else(|| {
            Error::Capacity(format!(
                "grid of side {side} exceeds {MAX_GRID_CELLS} cells"
            ))
        })?;
    let bound = bound as i64;
    let grid = Grid::new(bound);
    let memo: Vec<AtomicU32> = (0..cells).map(|_| AtomicU32::new(0)).collect();
    let registry = Mutex::new(Registry::default());
    let scan = Scan {
        base,
        grid,
        memo: &memo,
        registry: &registry,
    };

    let run = || -> Result<()> {
        (0..side as i64)
            .into_par_iter()
            .try_for_each_init(Vec::new, |path, row| {
                let re = row - (bound - 1);
                for im in -(bound - 1)..bound {
                    let idx = grid.index((re, im)).expect("in grid");
                    if memo[idx].load(Ordering::Acquire) == 0 {
                        scan.walk((re, im), path)?;
                    }
                }
                Ok(())
            })
    };
    match options.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Capacity(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    }

    let registry = registry.into_inner().expect("registry lock");
    let cycles: Vec<Cycle> = registry
        .cycles
        .iter()
        .map(|c| Cycle::from_small_unchecked(base, c))
        .collect();
    let catalog = CycleCatalog::new(base, bound as u64, cycles)?;
    let remap: Vec<u32> = registry
        .cycles
        .iter()
        .map(|c| {
            let anchor = GaussianInt::from_small(c[0]);
            catalog
                .cycles
                .binary_search_by(|x| x.anchor().cmp(&anchor))
                .expect("registered cycle is in the catalog") as u32
        })
        .collect();
    let terminals = memo
        .into_par_iter()
        .map(|m| {
            let v = m.into_inner();
            debug_assert!(v != 0, "unclassified grid point");
            remap[(v - 1) as usize]
        })
        .collect();
    Ok(GridScan {
        catalog,
        bound,
        terminals,
    })
}

pub fn enumerate_catalog_with(base: Base, options: &ScanOptions) -> Result<CycleCatalog> {
    scan_grid(base, options).map(|s| s.catalog)
}

/// All fixed points and cycles of `S_B`.
pub fn enumerate_catalog(base: Base) -> Result<CycleCatalog> {
    enumerate_catalog_with(base, &ScanOptions::default())
}

/// `((B² + 1)/2, (B + 1)²/2)`, two rational fixed points present for every
/// odd base.
pub fn odd_base_fixed_points(base: Base) -> Result<(GaussianInt, GaussianInt)> {
    if !base.is_odd() {
        return Err(Error::OddBaseRequired(base.get()));
    }
    let b = base.get() as u64;
    Ok((
        GaussianInt::from((b * b).div_ceil(2) as i64),
        GaussianInt::from(((b + 1) * (b + 1) / 2) as i64),
    ))
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
    fn region_bound_examples() {
        assert_eq!(region_bound(base(3)), BigUint::from(81u32));
        assert_eq!(region_bound(base(6)), BigUint::from(1296u32));
        assert_eq!(region_bound(base(7)), BigUint::from(343u32));
        assert_eq!(region_bound(base(10)), BigUint::from(1000u32));
    }

    #[test]
    fn classify_examples() {
        let t = classify(&g(7, 0), base(10));
        assert_eq!(t.terminal, Terminal::Happy);
        let steps: Vec<_> = t.steps.iter().map(|z| z.to_small().unwrap().0).collect();
        assert_eq!(steps, vec![7, 49, 97, 130, 10, 1]);
        assert_eq!(t.height(), Some(5));

        let t = classify(&g(4, 0), base(10));
        assert_eq!(
            t.terminal,
            Terminal::InCycle {
                anchor: g(4, 0),
                length: 8,
                entry: 0
            }
        );
        assert_eq!(t.steps.len(), 8);

        let t = classify(&GaussianInt::zero(), base(6));
        assert_eq!(t.terminal, Terminal::Zero);
        assert_eq!(t.steps, vec![GaussianInt::zero()]);
    }

    #[test]
    fn classify_tail_then_cycle() {
        // 2 -> 4 enters the base-10 eight-cycle one step in.
        let t = classify(&g(2, 0), base(10));
        assert!(matches!(
            t.terminal,
            Terminal::InCycle {
                entry: 1,
                length: 8,
                ..
            }
        ));
        assert_eq!(t.height(), None);
    }

    #[test]
    fn is_happy_examples() {
        for b in 2..=12 {
            assert!(is_happy(&GaussianInt::one(), base(b)));
        }
        assert!(!is_happy(&g(4, 0), base(10)));
        assert!(is_happy(&g(12, 12), base(10)));
    }

    #[test]
    fn cycle_rotation_and_validation() {
        let c = Cycle::from_orbit(
            base(10),
            vec![
                g(16, 0),
                g(37, 0),
                g(58, 0),
                g(89, 0),
                g(145, 0),
                g(42, 0),
                g(20, 0),
                g(4, 0),
            ],
        )
        .unwrap();
        assert_eq!(c.anchor(), &g(4, 0));
        assert_eq!(c.len(), 8);
        assert!(Cycle::from_orbit(base(10), vec![g(4, 0), g(37, 0)]).is_err());
        assert_eq!(Cycle::through(base(10), &g(89, 0)).unwrap(), c);
    }

    #[test]
    fn small_catalogs() {
        let cat = enumerate_catalog(base(2)).unwrap();
        assert_eq!(cat.fixed_points(), vec![&g(0, 0), &g(1, 0)]);
        assert_eq!(cat.cycles().len(), 2);
        assert!(cat.is_complete());

        let cat = enumerate_catalog(base(5)).unwrap();
        let fixed: Vec<_> = cat.fixed_points().into_iter().cloned().collect();
        assert_eq!(fixed, vec![g(0, 0), g(1, 0), g(13, 0), g(18, 0)]);
        let three = cat.cycle_with_anchor(&g(4, 0)).unwrap();
        assert_eq!(three.elements(), &[g(4, 0), g(16, 0), g(10, 0)]);
        let pair = cat.cycle_containing(&g(3, 6)).unwrap();
        assert_eq!(pair.len(), 2);
        assert!(pair.contains(&g(7, 6)));
        assert!(cat.cycle_containing(&g(3, -6)).is_some());
        assert_eq!(cat.cycles().len(), 7);
        assert_eq!(cat.classes().len(), 6);
    }

    #[test]
    fn catalog_closed_under_conjugation() {
        for b in [3u32, 5, 7] {
            let cat = enumerate_catalog(base(b)).unwrap();
            for c in cat.cycles() {
                assert_eq!(
                    cat.cycle_with_anchor(c.conjugate().anchor()),
                    Some(&c.conjugate())
                );
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_catalog() {
        let opts = |n| ScanOptions {
            bound: None,
            workers: Some(n),
        };
        let one = scan_grid(base(7), &opts(1)).unwrap();
        let many = scan_grid(base(7), &opts(8)).unwrap();
        assert_eq!(one.catalog, many.catalog);
        assert_eq!(one.terminals, many.terminals);
    }

    #[test]
    fn memoized_scan_matches_plain_classification() {
        for b in [2u32, 3] {
            let scan = scan_grid(base(b), &ScanOptions::default()).unwrap();
            let bound = scan.catalog.bound() as i64;
            for re in -(bound - 1)..bound {
                for im in -(bound - 1)..bound {
                    let t = classify(&g(re, im), base(b));
                    assert_eq!(
                        scan.terminal_at((re, im)).unwrap().anchor(),
                        &t.terminal.cycle_anchor(),
                        "base {b}, point {re}+{im}i"
                    );
                }
            }
        }
    }

    #[test]
    fn reduced_bound_is_not_complete() {
        let cat = enumerate_catalog_with(
            base(10),
            &ScanOptions {
                bound: Some(100),
                workers: None,
            },
        )
        .unwrap();
        assert!(!cat.is_complete());
        assert!(cat.fixed_points().contains(&&g(1, 0)));
        assert!(scan_grid(
            base(10),
            &ScanOptions {
                bound: Some(1),
                workers: None
            }
        )
        .is_err());
    }

    #[test]
    fn capacity_error_instead_of_truncation() {
        assert!(matches!(
            enumerate_catalog(base(40)),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn odd_base_fixed_point_examples() {
        assert_eq!(
            odd_base_fixed_points(base(9)).unwrap(),
            (g(41, 0), g(50, 0))
        );
        assert_eq!(odd_base_fixed_points(base(3)).unwrap(), (g(5, 0), g(8, 0)));
        let (x, y) = odd_base_fixed_points(base(99)).unwrap();
        assert_eq!((x.clone(), y.clone()), (g(4901, 0), g(5000, 0)));
        assert_eq!(s_b(&x, base(99)), x);
        assert_eq!(s_b(&y, base(99)), y);
        assert_eq!(
            odd_base_fixed_points(base(10)),
            Err(Error::OddBaseRequired(10))
        );
    }
}
