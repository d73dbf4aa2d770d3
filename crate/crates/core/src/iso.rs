//! Isomorphism deciders for rooted unordered trees.
//!
//! All three AHU variants walk both trees level by level, from the deepest
//! level up to the root, giving every node a color that identifies the
//! isomorphism class of its subtree among the nodes of its level. They differ
//! in how a node's children colors are turned into a class key:
//!
//! * [`primes_ahu`]: colors are primes and the key is the product of the
//!   children's colors. Unique factorization makes the product a faithful
//!   fingerprint of the children multiset.
//! * [`ideal_ahu`]: colors are small integers and the key is the sorted list of
//!   children colors.
//! * [`original_ahu`]: the 1974 formulation, which builds tuples by scanning
//!   the previous level in color order and radix-sorts them.
//!
//! [`oracle_isomorphic`] compares canonical strings and is the ground truth
//! the others are tested against.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::codec::canonical_string;
use crate::primes::SieveState;
use crate::product::{checked_product_u64, product_u64};
use crate::radix::{radix_order, FlatTuples};
use crate::tree::{LevelIndex, NodeId, Tree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("color {0} is not in the palette")]
    UnknownColor(u64),
    #[error("unknown algorithm {0:?} (expected primes, ideal, original or oracle)")]
    UnknownAlgorithm(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Primes,
    Ideal,
    Original,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Primes,
        Algorithm::Ideal,
        Algorithm::Original,
        Algorithm::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Primes => "primes",
            Algorithm::Ideal => "ideal",
            Algorithm::Original => "original",
            Algorithm::Oracle => "oracle",
        }
    }

    pub fn decide(self, t1: &Tree, t2: &Tree) -> bool {
        self.decide_with_stats(t1, t2).isomorphic
    }

    pub fn decide_with_stats(self, t1: &Tree, t2: &Tree) -> Outcome {
        match self {
            Algorithm::Primes => primes_ahu_with_stats(t1, t2),
            Algorithm::Ideal => ideal_ahu_with_stats(t1, t2),
            Algorithm::Original => original_ahu_with_stats(t1, t2),
            Algorithm::Oracle => Outcome {
                isomorphic: oracle_isomorphic(t1, t2),
                levels_processed: 0,
            },
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = IsoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| IsoError::UnknownAlgorithm(s.to_string()))
    }
}

/// A verdict plus how many levels were colored before it was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub isomorphic: bool,
    pub levels_processed: usize,
}

impl Outcome {
    fn early(isomorphic: bool, levels_processed: usize) -> Self {
        Self {
            isomorphic,
            levels_processed,
        }
    }
}

/// Trees of different size or depth can never be isomorphic.
fn shapes_differ(t1: &Tree, t2: &Tree) -> bool {
    t1.len() != t2.len() || t1.depth() != t2.depth()
}

pub fn oracle_isomorphic(t1: &Tree, t2: &Tree) -> bool {
    canonical_string(t1) == canonical_string(t2)
}

/// Counting comparison of two color lists. `counts` must be all zero on entry
/// and is all zero again on a successful return.
fn pigeonhole_equal<C, I1, I2, F>(c1: I1, c2: I2, counts: &mut [i64], bucket: F) -> Result<bool, IsoError>
where
    C: Copy,
    I1: Iterator<Item = C> + Clone,
    I2: Iterator<Item = C> + Clone,
    F: Fn(C) -> Result<usize, IsoError>,
{
    for c in c1.clone() {
        counts[bucket(c)?] += 1;
    }
    for c in c2.clone() {
        counts[bucket(c)?] -= 1;
    }
    let mut equal = true;
    for c in c1.chain(c2) {
        let slot = &mut counts[bucket(c)?];
        equal &= *slot == 0;
        *slot = 0;
    }
    Ok(equal)
}

/// Multiset equality of two color lists, with one counting bucket per
/// palette entry located through a color-to-index table.
pub fn compare_level_multisets(c1: &[u64], c2: &[u64], palette: &[u64]) -> Result<bool, IsoError> {
    let index: FxHashMap<u64, usize> = palette.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut counts = vec![0i64; palette.len()];
    let bucket = |c: u64| index.get(&c).copied().ok_or(IsoError::UnknownColor(c));
    pigeonhole_equal(c1.iter().copied(), c2.iter().copied(), &mut counts, bucket)
}

/// Product of a node's children colors, stored in a machine word when it fits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum ChildProduct {
    Word(u64),
    Big(BigUint),
}

impl ChildProduct {
    fn of(factors: &[u64]) -> Self {
        match checked_product_u64(factors) {
            Some(w) => ChildProduct::Word(w),
            None => ChildProduct::Big(product_u64(factors)),
        }
    }
}

/// Splits a buffer indexed by level position into the colors of `T^{d-1}`
/// (empty for `d = 0`) and the colors of `T^d`.
fn level_slices<'a, T>(levels: &LevelIndex, colors: &'a mut [T], d: usize) -> (&'a [T], &'a mut [T]) {
    let start = levels.level_offset(d);
    let below_start = if d == 0 { start } else { levels.level_offset(d - 1) };
    let len = levels.level(d).len();
    let (lower, upper) = colors.split_at_mut(start);
    (&lower[below_start..], &mut upper[..len])
}

/// Per-level prime coloring shared by [`primes_ahu`] and [`level_colors`].
///
/// A color is stored as its position in the sieve's prime list, which is
/// also its pigeonhole bucket; `prime(i)` is the color itself.
struct PrimeColorer {
    sieve: SieveState,
    classes: FxHashMap<ChildProduct, u32>,
    // index of the most recently handed out prime at this level
    cursor: usize,
    factors: Vec<u64>,
}

impl PrimeColorer {
    fn new() -> Self {
        Self {
            sieve: SieveState::initial(),
            classes: FxHashMap::default(),
            cursor: 0,
            factors: Vec::new(),
        }
    }

    /// `f: 1 -> 2`, `p = 2`.
    fn start_level(&mut self) {
        self.classes.clear();
        self.classes.insert(ChildProduct::Word(1), 0);
        self.cursor = 0;
    }

    /// Colors `T^d` given its child counts and the colors of `T^{d-1}`.
    fn color_level(&mut self, degrees: &[usize], below: &[u32], out: &mut [u32]) {
        let mut next = 0;
        for (slot, &deg) in out.iter_mut().zip(degrees) {
            *slot = self.color(&below[next..next + deg]);
            next += deg;
        }
    }

    fn color(&mut self, children: &[u32]) -> u32 {
        let primes = self.sieve.primes();
        self.factors.clear();
        self.factors.extend(children.iter().map(|&i| primes[i as usize]));
        let key = ChildProduct::of(&self.factors);
        if let Some(&i) = self.classes.get(&key) {
            return i;
        }
        self.cursor = self.sieve.successor_index(self.cursor);
        let i = self.cursor as u32;
        self.classes.insert(key, i);
        i
    }

    /// Colors that may appear at the current level: the primes up to the cursor.
    fn palette_len(&self) -> usize {
        self.cursor + 1
    }

    fn prime(&self, i: u32) -> u64 {
        self.sieve.primes()[i as usize]
    }
}

/// Prime-multiplication AHU: `true` iff `t1` and `t2` are isomorphic.
pub fn primes_ahu(t1: &Tree, t2: &Tree) -> bool {
    primes_ahu_with_stats(t1, t2).isomorphic
}

pub fn primes_ahu_with_stats(t1: &Tree, t2: &Tree) -> Outcome {
    if shapes_differ(t1, t2) {
        return Outcome::early(false, 0);
    }
    let (levels1, levels2) = (t1.level_index(), t2.level_index());
    let mut colors1 = vec![0u32; t1.len()];
    let mut colors2 = vec![0u32; t2.len()];
    let mut colorer = PrimeColorer::new();

    for d in 0..=levels1.depth() {
        colorer.start_level();
        let (below1, level1) = level_slices(&levels1, &mut colors1, d);
        colorer.color_level(levels1.level_degrees(d), below1, level1);
        let (below2, level2) = level_slices(&levels2, &mut colors2, d);
        colorer.color_level(levels2.level_degrees(d), below2, level2);

        let mut counts = vec![0i64; colorer.palette_len()];
        let same = pigeonhole_equal(level1.iter().copied(), level2.iter().copied(), &mut counts, |i| {
            Ok(i as usize)
        })
        .expect("every assigned color is in the level palette");
        if !same {
            return Outcome::early(false, d + 1);
        }
    }
    Outcome::early(true, levels1.depth() + 1)
}

/// Prime coloring of a single tree.
#[derive(Debug, Clone)]
pub struct ColorAssignment {
    levels: LevelIndex,
    colors: Vec<u64>,
    palettes: Vec<Vec<u64>>,
}

impl ColorAssignment {
    pub fn color(&self, u: NodeId) -> u64 {
        self.colors[u]
    }

    pub fn colors(&self) -> &[u64] {
        &self.colors
    }

    pub fn levels(&self) -> &LevelIndex {
        &self.levels
    }

    /// Colors of `T^d` in level order.
    pub fn level_colors(&self, d: usize) -> Vec<u64> {
        self.levels.level(d).iter().map(|&u| self.colors[u]).collect()
    }

    /// Ascending distinct colors used at level `d`.
    pub fn palette(&self, d: usize) -> &[u64] {
        &self.palettes[d]
    }

    pub fn classes_per_level(&self) -> Vec<usize> {
        self.palettes.iter().map(Vec::len).collect()
    }

    /// Largest number of distinct colors at any level.
    pub fn width(&self) -> usize {
        self.palettes.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Runs the prime coloring on one tree.
pub fn level_colors(t: &Tree) -> ColorAssignment {
    let levels = t.level_index();
    let mut by_position = vec![0u32; t.len()];
    let mut palettes = Vec::with_capacity(levels.depth() + 1);
    let mut colorer = PrimeColorer::new();
    for d in 0..=levels.depth() {
        colorer.start_level();
        let (below, level) = level_slices(&levels, &mut by_position, d);
        colorer.color_level(levels.level_degrees(d), below, level);
        let mut palette: Vec<u64> = level.iter().map(|&i| colorer.prime(i)).collect();
        palette.sort_unstable();
        palette.dedup();
        palettes.push(palette);
    }
    let mut colors = vec![0u64; t.len()];
    for (&u, &i) in levels.nodes().iter().zip(&by_position) {
        colors[u] = colorer.prime(i);
    }
    ColorAssignment {
        levels,
        colors,
        palettes,
    }
}

/// The maximum, over levels, of the number of distinct subtree classes.
pub fn width(t: &Tree) -> usize {
    level_colors(t).width()
}

/// Sorted-multiset AHU: `true` iff `t1` and `t2` are isomorphic.
pub fn ideal_ahu(t1: &Tree, t2: &Tree) -> bool {
    ideal_ahu_with_stats(t1, t2).isomorphic
}

struct IdealColorer {
    classes: FxHashMap<Vec<u32>, u32>,
    last: u32,
    key: Vec<u32>,
}

impl IdealColorer {
    fn new() -> Self {
        Self {
            classes: FxHashMap::default(),
            last: 0,
            key: Vec::new(),
        }
    }

    /// `k = 0`, `f: {} -> 0`.
    fn start_level(&mut self) {
        self.classes.clear();
        self.classes.insert(Vec::new(), 0);
        self.last = 0;
    }

    fn color_level(&mut self, degrees: &[usize], below: &[u32], out: &mut [u32]) {
        let mut next = 0;
        for (slot, &deg) in out.iter_mut().zip(degrees) {
            *slot = self.color(&below[next..next + deg]);
            next += deg;
        }
    }

    fn color(&mut self, children: &[u32]) -> u32 {
        self.key.clear();
        self.key.extend_from_slice(children);
        self.key.sort_unstable();
        if let Some(&c) = self.classes.get(self.key.as_slice()) {
            return c;
        }
        self.last += 1;
        self.classes.insert(self.key.clone(), self.last);
        self.last
    }
}

pub fn ideal_ahu_with_stats(t1: &Tree, t2: &Tree) -> Outcome {
    if shapes_differ(t1, t2) {
        return Outcome::early(false, 0);
    }
    let (levels1, levels2) = (t1.level_index(), t2.level_index());
    let mut colors1 = vec![0u32; t1.len()];
    let mut colors2 = vec![0u32; t2.len()];
    let mut colorer = IdealColorer::new();

    for d in 0..=levels1.depth() {
        colorer.start_level();
        let (below1, level1) = level_slices(&levels1, &mut colors1, d);
        colorer.color_level(levels1.level_degrees(d), below1, level1);
        let (below2, level2) = level_slices(&levels2, &mut colors2, d);
        colorer.color_level(levels2.level_degrees(d), below2, level2);

        let mut counts = vec![0i64; colorer.last as usize + 1];
        let same = pigeonhole_equal(level1.iter().copied(), level2.iter().copied(), &mut counts, |c| {
            Ok(c as usize)
        })
        .expect("colors are bounded by the class counter");
        if !same {
            return Outcome::early(false, d + 1);
        }
    }
    Outcome::early(true, levels1.depth() + 1)
}

/// Sorted-multiset coloring of a single tree, one color per node.
pub fn ideal_colors(t: &Tree) -> Vec<u32> {
    let levels = t.level_index();
    let mut by_position = vec![0u32; t.len()];
    let mut colorer = IdealColorer::new();
    for d in 0..=levels.depth() {
        colorer.start_level();
        let (below, level) = level_slices(&levels, &mut by_position, d);
        colorer.color_level(levels.level_degrees(d), below, level);
    }
    let mut colors = vec![0u32; t.len()];
    for (&u, &c) in levels.nodes().iter().zip(&by_position) {
        colors[u] = c;
    }
    colors
}

/// One tree's bookkeeping for [`original_ahu`]. Nodes are named by their
/// index within their level.
struct TupleSide {
    levels: LevelIndex,
    // integer of every node, indexed by level position; leaves keep 0
    value: Vec<u32>,
    // L: nodes of the previous level, nondecreasing by value.
    list: Vec<usize>,
    // parent of each previous-level node, as an index into the current level
    parent_of: Vec<usize>,
    write_pos: Vec<usize>,
}

impl TupleSide {
    fn new(tree: &Tree) -> Self {
        let levels = tree.level_index();
        // Every level-0 node is a leaf and carries 0.
        let list = (0..levels.level(0).len()).collect();
        Self {
            levels,
            value: vec![0; tree.len()],
            list,
            parent_of: Vec::new(),
            write_pos: Vec::new(),
        }
    }

    /// Tuples for the nonleaves of level `d`, built by scanning `list`; the
    /// components of each tuple come out nondecreasing.
    fn tuples(&mut self, d: usize) -> (Vec<usize>, FlatTuples) {
        let degrees = self.levels.level_degrees(d);
        self.parent_of.clear();
        for (i, &deg) in degrees.iter().enumerate() {
            self.parent_of.extend(std::iter::repeat_n(i, deg));
        }
        let nonleaves: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] > 0).collect();

        self.write_pos.clear();
        self.write_pos.resize(degrees.len(), 0);
        let mut offsets = Vec::with_capacity(nonleaves.len() + 1);
        offsets.push(0);
        for &i in &nonleaves {
            self.write_pos[i] = *offsets.last().unwrap();
            offsets.push(self.write_pos[i] + degrees[i]);
        }
        let mut components = vec![0u32; *offsets.last().unwrap()];
        let below = &self.value[self.levels.level_offset(d - 1)..];
        for &v in &self.list {
            let p = self.parent_of[v];
            components[self.write_pos[p]] = below[v];
            self.write_pos[p] += 1;
        }
        (nonleaves, FlatTuples::from_parts(offsets, components))
    }

    /// Numbers the sorted tuples 1, 2, ... and rebuilds `list` with the
    /// level's leaves in front.
    fn assign(&mut self, d: usize, nonleaves: &[usize], tuples: &FlatTuples, order: &[usize]) -> u32 {
        let degrees = self.levels.level_degrees(d);
        self.list.clear();
        self.list.extend((0..degrees.len()).filter(|&i| degrees[i] == 0));
        let values = &mut self.value[self.levels.level_offset(d)..];
        let mut current = 0u32;
        let mut previous: Option<&[u32]> = None;
        for &i in order {
            let tuple = tuples.get(i);
            if previous != Some(tuple) {
                current += 1;
                previous = Some(tuple);
            }
            values[nonleaves[i]] = current;
            self.list.push(nonleaves[i]);
        }
        current
    }

    fn root_value(&self) -> u32 {
        self.value[self.levels.level_offset(self.levels.depth())]
    }
}

/// The original AHU procedure: `true` iff `t1` and `t2` are isomorphic.
pub fn original_ahu(t1: &Tree, t2: &Tree) -> bool {
    original_ahu_with_stats(t1, t2).isomorphic
}

pub fn original_ahu_with_stats(t1: &Tree, t2: &Tree) -> Outcome {
    if shapes_differ(t1, t2) {
        return Outcome::early(false, 0);
    }
    let mut side1 = TupleSide::new(t1);
    let mut side2 = TupleSide::new(t2);
    // Largest integer assigned at the previous level (leaves only at level 0).
    let mut max_value = 0u32;

    for d in 1..=side1.levels.depth() {
        let (nonleaves1, tuples1) = side1.tuples(d);
        let (nonleaves2, tuples2) = side2.tuples(d);
        let order1 = radix_order(&tuples1, max_value);
        let order2 = radix_order(&tuples2, max_value);

        let identical = order1.len() == order2.len()
            && order1
                .iter()
                .zip(&order2)
                .all(|(&a, &b)| tuples1.get(a) == tuples2.get(b));
        if !identical {
            return Outcome::early(false, d + 1);
        }

        max_value = side1.assign(d, &nonleaves1, &tuples1, &order1);
        side2.assign(d, &nonleaves2, &tuples2, &order2);
    }
    let same_root = side1.root_value() == side2.root_value();
    Outcome::early(same_root, side1.levels.depth() + 1)
}
