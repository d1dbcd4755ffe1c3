//! Cap sets in `F₃ⁿ`: verification, exact maxima for `n <= 4`, products and a
//! seeded search for two disjoint caps of equal size.
//!
//! A cap has no three distinct points with `x + y + z = 0`. In `F₃`,
//! `x + x + z = 0` forces `z = x`, so only pairs of distinct points need to be
//! checked: `{x, y}` is bad when `-x-y` is a third point of the set.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{seeded, WorkbenchRng};

pub const MAX_DIMENSION: usize = 32;
pub const MAX_EXHAUSTIVE_DIMENSION: usize = 4;
pub const MAX_SEARCH_DIMENSION: usize = 8;

/// A point of `F₃ⁿ`. Trit `i` occupies bits `2(n-1-i)..2(n-i)`, so the
/// derived order is lexicographic order of trit strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Vec3 {
    n: u8,
    digits: u64,
}

impl Vec3 {
    pub fn zero(n: usize) -> Result<Self> {
        Self::from_trits(&vec![0; n])
    }

    pub fn from_trits(trits: &[u8]) -> Result<Self> {
        if trits.len() > MAX_DIMENSION {
            return Err(Error::invalid(format!("dimension {} above {MAX_DIMENSION}", trits.len())));
        }
        let mut digits = 0u64;
        for &t in trits {
            if t > 2 {
                return Err(Error::invalid(format!("trit {t} outside 0..=2")));
            }
            digits = digits << 2 | t as u64;
        }
        Ok(Self {
            n: trits.len() as u8,
            digits,
        })
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn trit(&self, i: usize) -> u8 {
        (self.digits >> (2 * (self.dim() - 1 - i)) & 3) as u8
    }

    pub fn trits(&self) -> Vec<u8> {
        (0..self.dim()).map(|i| self.trit(i)).collect()
    }

    /// Base-3 index with trit 0 most significant.
    pub fn index(&self) -> usize {
        self.trits().iter().fold(0, |acc, &t| acc * 3 + t as usize)
    }

    pub fn from_index(n: usize, mut index: usize) -> Self {
        let mut trits = vec![0u8; n];
        for t in trits.iter_mut().rev() {
            *t = (index % 3) as u8;
            index /= 3;
        }
        Self::from_trits(&trits).expect("index within range")
    }

    fn zip(&self, other: &Vec3, f: impl Fn(u8, u8) -> u8) -> Vec3 {
        let trits: Vec<u8> = (0..self.dim()).map(|i| f(self.trit(i), other.trit(i))).collect();
        Vec3::from_trits(&trits).expect("same dimension")
    }

    pub fn add(&self, other: &Vec3) -> Vec3 {
        self.zip(other, |a, b| (a + b) % 3)
    }

    /// `-x-y`, the unique point completing `{x, y}` to a zero-sum triple.
    pub fn third(&self, other: &Vec3) -> Vec3 {
        self.zip(other, |a, b| (6 - a - b) % 3)
    }

    pub fn concat(&self, other: &Vec3) -> Vec3 {
        let mut trits = self.trits();
        trits.extend(other.trits());
        Vec3::from_trits(&trits).expect("dimension checked by caller")
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.trits() {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for Vec3 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                '2' => Ok(2),
                _ => Err(Error::parse(format!("{c:?} is not a trit"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Vec3::from_trits(&trits)
    }
}

impl TryFrom<String> for Vec3 {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Vec3> for String {
    fn from(v: Vec3) -> Self {
        v.to_string()
    }
}

/// A point set of fixed dimension. Not necessarily a cap: see `is_capset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CapSet {
    pub n: usize,
    pub points: BTreeSet<Vec3>,
}

impl CapSet {
    pub fn new(n: usize, points: impl IntoIterator<Item = Vec3>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in points {
            if p.dim() != n {
                return Err(Error::invalid(format!("point {p} has dimension {}, expected {n}", p.dim())));
            }
            if !set.insert(p) {
                return Err(Error::invalid(format!("point {p} repeated")));
            }
        }
        Ok(Self { n, points: set })
    }

    fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        Self {
            n,
            points: idx.into_iter().map(|i| Vec3::from_index(n, i)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_disjoint(&self, other: &CapSet) -> bool {
        self.points.is_disjoint(&other.points)
    }
}

impl fmt::Display for CapSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.points {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for CapSet {
    type Err = Error;

    /// One trit string per line; the dimension is taken from the first point.
    fn from_str(s: &str) -> Result<Self> {
        let points = s
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Vec3>>>()?;
        let n = points
            .first()
            .map(Vec3::dim)
            .ok_or_else(|| Error::parse("empty cap file"))?;
        CapSet::new(n, points)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapCheck {
    pub is_cap: bool,
    /// `(x, y, -x-y)` with `x < y`, the first violation found.
    pub violation: Option<[Vec3; 3]>,
}

/// Pairwise test against a hashed point set.
pub fn is_capset(n: usize, points: &[Vec3]) -> Result<CapCheck> {
    let set: HashSet<Vec3> = points.iter().copied().collect();
    if let Some(p) = points.iter().find(|p| p.dim() != n) {
        return Err(Error::invalid(format!("point {p} has dimension {}, expected {n}", p.dim())));
    }
    if set.len() != points.len() {
        return Err(Error::invalid("points must be distinct"));
    }
    let mut sorted = points.to_vec();
    sorted.sort();
    for (i, x) in sorted.iter().enumerate() {
        for y in &sorted[i + 1..] {
            let z = x.third(y);
            if set.contains(&z) {
                return Ok(CapCheck {
                    is_cap: false,
                    violation: Some([*x, *y, z]),
                });
            }
        }
    }
    Ok(CapCheck {
        is_cap: true,
        violation: None,
    })
}

pub fn check(cap: &CapSet) -> CapCheck {
    let points: Vec<Vec3> = cap.points.iter().copied().collect();
    is_capset(cap.n, &points).expect("CapSet points are distinct and dimension-consistent")
}

/// All concatenations `a ⧺ b`.
pub fn product(a: &CapSet, b: &CapSet) -> Result<CapSet> {
    if a.n + b.n > MAX_DIMENSION {
        return Err(Error::invalid(format!("product dimension above {MAX_DIMENSION}")));
    }
    Ok(CapSet {
        n: a.n + b.n,
        points: a.points.iter().flat_map(|x| b.points.iter().map(move |y| x.concat(y))).collect(),
    })
}

/// `{0,1}ⁿ`, a cap of size `2ⁿ`.
pub fn binary_cap(n: usize) -> Result<CapSet> {
    if n > MAX_DIMENSION {
        return Err(Error::invalid(format!("dimension above {MAX_DIMENSION}")));
    }
    let points = (0u64..1 << n).map(|m| {
        let trits: Vec<u8> = (0..n).map(|i| (m >> (n - 1 - i) & 1) as u8).collect();
        Vec3::from_trits(&trits).expect("binary trits")
    });
    CapSet::new(n, points)
}

/// Point arithmetic on base-3 indices for a fixed small dimension.
struct Space {
    size: usize,
    third: Vec<u16>,
}

impl Space {
    fn new(n: usize) -> Self {
        let size = 3usize.pow(n as u32);
        let trits: Vec<Vec<u8>> = (0..size).map(|i| Vec3::from_index(n, i).trits()).collect();
        let mut third = vec![0u16; size * size];
        for x in 0..size {
            for y in 0..size {
                let z = trits[x]
                    .iter()
                    .zip(&trits[y])
                    .fold(0usize, |acc, (&a, &b)| acc * 3 + ((6 - a - b) % 3) as usize);
                third[x * size + y] = z as u16;
            }
        }
        Self { size, third }
    }

    fn third(&self, x: usize, y: usize) -> usize {
        self.third[x * self.size + y] as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaxCapResult {
    pub n: usize,
    pub size: usize,
    pub witness: CapSet,
}

/// Exact maximum cap size for `1 <= n <= 4`.
///
/// The affine group is transitive on triples of non-collinear points, so a
/// maximum cap of size at least 3 may be assumed to contain `0`, `e_n` and
/// `e_{n-1}` (indices 0, 1, 3). The bound counts, for each coordinate, how
/// many more points the three parallel hyperplanes can take given the
/// maximum in dimension `n - 1`.
pub fn max_capset(n: usize) -> Result<MaxCapResult> {
    if n == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if n > MAX_EXHAUSTIVE_DIMENSION {
        return Err(Error::CapExceeded {
            what: "exhaustive cap dimension",
            requested: n as u128,
            cap: MAX_EXHAUSTIVE_DIMENSION as u128,
        });
    }
    let layer_max = if n == 1 { 1 } else { max_capset(n - 1)?.size };
    let space = Space::new(n);
    let fixed: Vec<usize> = if n == 1 { vec![0, 1] } else { vec![0, 1, 3] };
    let mut forbidden = 0u128;
    for (i, &x) in fixed.iter().enumerate() {
        forbidden |= 1 << x;
        for &y in &fixed[..i] {
            forbidden |= 1 << space.third(x, y);
        }
    }
    let all: u128 = if space.size == 128 { u128::MAX } else { (1u128 << space.size) - 1 };
    let cand = all & !forbidden;
    let hyperplanes: Vec<[u128; 3]> = (0..n)
        .map(|i| {
            let mut h = [0u128; 3];
            for x in 0..space.size {
                h[Vec3::from_index(n, x).trit(i) as usize] |= 1 << x;
            }
            h
        })
        .collect();
    let search = CapSearch {
        space: &space,
        hyperplanes,
        layer_max,
    };
    let global = AtomicUsize::new(fixed.len());
    let firsts: Vec<usize> = (0..space.size).filter(|&x| cand >> x & 1 == 1).collect();
    let mut results: Vec<Vec<usize>> = firsts
        .par_iter()
        .map(|&x| {
            let later = cand & !((2u128 << x) - 1);
            let mut cap = fixed.clone();
            let next = later & !search.forbid(x, &cap);
            cap.push(x);
            let mut best = cap.clone();
            global.fetch_max(best.len(), Ordering::Relaxed);
            search.dfs(&mut cap, next, &mut best, &global);
            best.sort_unstable();
            best
        })
        .collect();
    results.push(fixed.clone());
    let best = results
        .into_iter()
        .fold(Vec::new(), |best: Vec<usize>, r| {
            if r.len() > best.len() || (r.len() == best.len() && r < best) {
                r
            } else {
                best
            }
        });
    let witness = CapSet::from_indices(n, best);
    Ok(MaxCapResult {
        n,
        size: witness.len(),
        witness,
    })
}

struct CapSearch<'a> {
    space: &'a Space,
    hyperplanes: Vec<[u128; 3]>,
    layer_max: usize,
}

impl CapSearch<'_> {
    fn forbid(&self, x: usize, cap: &[usize]) -> u128 {
        cap.iter().fold(0u128, |m, &y| m | 1 << self.space.third(x, y))
    }

    fn bound(&self, cap_mask: u128, cand: u128) -> usize {
        self.hyperplanes
            .iter()
            .map(|h| {
                h.iter()
                    .map(|&layer| {
                        let used = (cap_mask & layer).count_ones() as usize;
                        let free = (cand & layer).count_ones() as usize;
                        used + free.min(self.layer_max.saturating_sub(used))
                    })
                    .sum::<usize>()
            })
            .min()
            .unwrap_or(usize::MAX)
    }

    fn dfs(&self, cap: &mut Vec<usize>, mut cand: u128, best: &mut Vec<usize>, global: &AtomicUsize) {
        if cap.len() > best.len() {
            *best = cap.clone();
            global.fetch_max(best.len(), Ordering::Relaxed);
        }
        let cap_mask = cap.iter().fold(0u128, |m, &x| m | 1 << x);
        while cand != 0 {
            let bound = self.bound(cap_mask, cand);
            // Strict against the shared best so the reported witness does
            // not depend on scheduling.
            if bound <= best.len() || bound < global.load(Ordering::Relaxed) {
                return;
            }
            let x = cand.trailing_zeros() as usize;
            cand &= !(1u128 << x);
            let next = cand & !self.forbid(x, cap);
            cap.push(x);
            self.dfs(cap, next, best, global);
            cap.pop();
        }
    }
}

/// A random invertible affine map `x ↦ Mx + t` on `F₃ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    n: usize,
    matrix: Vec<Vec<u8>>,
    shift: Vec<u8>,
}

impl AffineMap {
    pub fn random(n: usize, rng: &mut WorkbenchRng) -> Self {
        loop {
            let matrix: Vec<Vec<u8>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..3)).collect()).collect();
            if rank_mod3(&matrix) == n {
                let shift = (0..n).map(|_| rng.gen_range(0..3)).collect();
                return Self { n, matrix, shift };
            }
        }
    }

    pub fn translation(shift: &Vec3) -> Self {
        let n = shift.dim();
        let matrix = (0..n).map(|i| (0..n).map(|j| u8::from(i == j)).collect()).collect();
        Self {
            n,
            matrix,
            shift: shift.trits(),
        }
    }

    pub fn apply(&self, x: &Vec3) -> Vec3 {
        let t = x.trits();
        let out: Vec<u8> = (0..self.n)
            .map(|i| {
                let dot: u32 = (0..self.n).map(|j| self.matrix[i][j] as u32 * t[j] as u32).sum();
                ((dot + self.shift[i] as u32) % 3) as u8
            })
            .collect();
        Vec3::from_trits(&out).expect("same dimension")
    }

    pub fn image(&self, cap: &CapSet) -> CapSet {
        CapSet {
            n: cap.n,
            points: cap.points.iter().map(|p| self.apply(p)).collect(),
        }
    }
}

fn rank_mod3(m: &[Vec<u8>]) -> usize {
    let mut a: Vec<Vec<u8>> = m.to_vec();
    let (rows, cols) = (a.len(), a.first().map_or(0, Vec::len));
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        // 1 and 2 are their own inverses mod 3
        let inv = a[rank][c];
        for x in a[rank].iter_mut() {
            *x = (*x * inv) % 3;
        }
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for k in 0..cols {
                    a[r][k] = (a[r][k] + 3 * 3 - f * a[rank][k]) % 3;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartnerSource {
    Translation,
    AffineImage,
    Independent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisjointPair {
    pub first: CapSet,
    pub second: CapSet,
    pub source: PartnerSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisjointSearch {
    pub n: usize,
    pub size: usize,
    pub found: Option<DisjointPair>,
    /// Candidate partners examined.
    pub evaluations: u64,
    /// True when `2 · size > 3ⁿ`, so no search was needed.
    pub impossible_by_counting: bool,
}

/// Seeded search for two disjoint caps of the given size. For each base cap
/// (random greedy with repair) it tries every translate, then random affine
/// images, then an independent greedy cap in the complement.
pub fn find_disjoint_equal(n: usize, size: usize, budget: u64, seed: u64) -> Result<DisjointSearch> {
    if n == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if n > MAX_SEARCH_DIMENSION {
        return Err(Error::CapExceeded {
            what: "disjoint cap search dimension",
            requested: n as u128,
            cap: MAX_SEARCH_DIMENSION as u128,
        });
    }
    let mut out = DisjointSearch {
        n,
        size,
        found: None,
        evaluations: 0,
        impossible_by_counting: 2 * size > 3usize.pow(n as u32),
    };
    if out.impossible_by_counting || size == 0 {
        if size == 0 {
            let empty = CapSet::new(n, [])?;
            out.found = Some(DisjointPair {
                first: empty.clone(),
                second: empty,
                source: PartnerSource::Translation,
            });
        }
        return Ok(out);
    }
    let space = Space::new(n);
    let mut rng = seeded(seed);
    let affine_tries = 4 * space.size as u64;
    while out.evaluations < budget {
        let Some(base) = greedy_cap(&space, size, &vec![false; space.size], &mut rng) else {
            out.evaluations += 1;
            continue;
        };
        let base_set = CapSet::from_indices(n, base.iter().copied());
        let base_mask: Vec<bool> = (0..space.size).map(|x| base.contains(&x)).collect();
        for t in 1..space.size {
            if out.evaluations >= budget {
                return Ok(out);
            }
            out.evaluations += 1;
            let image = AffineMap::translation(&Vec3::from_index(n, t)).image(&base_set);
            if base_set.is_disjoint(&image) {
                out.found = Some(DisjointPair {
                    first: base_set,
                    second: image,
                    source: PartnerSource::Translation,
                });
                return Ok(out);
            }
        }
        for _ in 0..affine_tries {
            if out.evaluations >= budget {
                return Ok(out);
            }
            out.evaluations += 1;
            let image = AffineMap::random(n, &mut rng).image(&base_set);
            if base_set.is_disjoint(&image) {
                out.found = Some(DisjointPair {
                    first: base_set,
                    second: image,
                    source: PartnerSource::AffineImage,
                });
                return Ok(out);
            }
        }
        if out.evaluations >= budget {
            break;
        }
        out.evaluations += 1;
        if let Some(other) = greedy_cap(&space, size, &base_mask, &mut rng) {
            out.found = Some(DisjointPair {
                first: base_set,
                second: CapSet::from_indices(n, other),
                source: PartnerSource::Independent,
            });
            return Ok(out);
        }
    }
    Ok(out)
}

/// Random greedy cap of exactly `size` points avoiding `excluded`, with up to
/// `size` rounds of repair (drop a random point, refill greedily).
fn greedy_cap(space: &Space, size: usize, excluded: &[bool], rng: &mut WorkbenchRng) -> Option<Vec<usize>> {
    let mut order: Vec<usize> = (0..space.size).filter(|&x| !excluded[x]).collect();
    let mut cap: Vec<usize> = Vec::new();
    let mut blocked = vec![0u32; space.size];
    let mut inside = vec![false; space.size];
    let add = |x: usize, cap: &mut Vec<usize>, blocked: &mut Vec<u32>, inside: &mut Vec<bool>| {
        for &y in cap.iter() {
            blocked[space.third(x, y)] += 1;
        }
        cap.push(x);
        inside[x] = true;
    };
    for _round in 0..=size {
        order.shuffle(rng);
        for &x in &order {
            if cap.len() == size {
                break;
            }
            if !inside[x] && blocked[x] == 0 {
                add(x, &mut cap, &mut blocked, &mut inside);
            }
        }
        if cap.len() == size {
            cap.sort_unstable();
            return Some(cap);
        }
        if cap.is_empty() {
            return None;
        }
        let drop = cap.swap_remove(rng.gen_range(0..cap.len()));
        inside[drop] = false;
        for &y in cap.iter() {
            blocked[space.third(drop, y)] -= 1;
        }
    }
    None
}
