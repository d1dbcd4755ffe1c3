//! Set-pair families: the classical cross-intersecting (Bollobás) condition,
//! the two-element-overlap variant with its conjectured bound, the extremal
//! construction meeting that bound, and exhaustive branch-and-bound search
//! over a fixed ground set.
//!
//! Sets live on the ground set `1..=64` and are stored as bitmasks.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_ELEMENT: u32 = 64;

/// One pair `(A, B)`. Serialized as `[[a...], [b...]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "(Vec<u32>, Vec<u32>)", try_from = "(Vec<u32>, Vec<u32>)")]
pub struct SetPair {
    a: u64,
    b: u64,
}

impl SetPair {
    pub fn new(a: &[u32], b: &[u32]) -> Result<Self> {
        Ok(Self {
            a: to_mask(a)?,
            b: to_mask(b)?,
        })
    }

    pub fn a(&self) -> Vec<u32> {
        from_mask(self.a)
    }

    pub fn b(&self) -> Vec<u32> {
        from_mask(self.b)
    }

    pub fn a_mask(&self) -> u64 {
        self.a
    }

    pub fn b_mask(&self) -> u64 {
        self.b
    }

    fn sort_key(&self) -> (Vec<u32>, Vec<u32>) {
        (self.a(), self.b())
    }
}

impl From<SetPair> for (Vec<u32>, Vec<u32>) {
    fn from(p: SetPair) -> Self {
        (p.a(), p.b())
    }
}

impl TryFrom<(Vec<u32>, Vec<u32>)> for SetPair {
    type Error = Error;

    fn try_from((a, b): (Vec<u32>, Vec<u32>)) -> Result<Self> {
        SetPair::new(&a, &b)
    }
}

fn to_mask(elements: &[u32]) -> Result<u64> {
    let mut m = 0u64;
    for &e in elements {
        if e == 0 || e > MAX_ELEMENT {
            return Err(Error::invalid(format!(
                "set element {e} outside 1..={MAX_ELEMENT}"
            )));
        }
        let bit = 1u64 << (e - 1);
        if m & bit != 0 {
            return Err(Error::invalid(format!("set element {e} repeated")));
        }
        m |= bit;
    }
    Ok(m)
}

fn from_mask(m: u64) -> Vec<u32> {
    (0..64).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect()
}

/// A family `(A_i, B_i)` with declared sizes `|A_i| = a`, `|B_i| = b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetPairFamily {
    pub a: usize,
    pub b: usize,
    pub pairs: Vec<SetPair>,
}

impl SetPairFamily {
    pub fn new(a: usize, b: usize, pairs: Vec<SetPair>) -> Self {
        Self { a, b, pairs }
    }

    /// Takes the declared sizes from the first pair.
    pub fn infer(pairs: Vec<SetPair>) -> Result<Self> {
        let first = pairs
            .first()
            .ok_or_else(|| Error::invalid("cannot infer sizes of an empty family"))?;
        let (a, b) = (first.a.count_ones() as usize, first.b.count_ones() as usize);
        Ok(Self { a, b, pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs sorted lexicographically by (sorted A, sorted B), duplicates removed.
    pub fn canonicalize(&mut self) {
        self.pairs.sort_by_key(SetPair::sort_key);
        self.pairs.dedup();
    }

    fn check_sizes(&self, overlap: u32) -> Result<()> {
        for (i, p) in self.pairs.iter().enumerate() {
            let (sa, sb, si) = (
                p.a.count_ones() as usize,
                p.b.count_ones() as usize,
                (p.a & p.b).count_ones(),
            );
            if sa != self.a || sb != self.b || si != overlap {
                return Err(Error::invalid(format!(
                    "pair {i} has |A| = {sa}, |B| = {sb}, |A∩B| = {si}; expected {}, {}, {overlap}",
                    self.a, self.b
                )));
            }
        }
        Ok(())
    }
}

pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n as u64 - i;
        acc /= i + 1;
    }
    acc
}

/// `sum_{i=2}^{a} 2^(i-2) binom(a + b - 2i, a - i)`.
pub fn bound(a: usize, b: usize) -> BigUint {
    let (a, b) = (a as i64, b as i64);
    (2..=a)
        .map(|i| (BigUint::one() << (i - 2) as u64) * binomial(a + b - 2 * i, a - i))
        .sum()
}

/// `binom(a + b, a)`.
pub fn bollobas_bound(a: usize, b: usize) -> BigUint {
    binomial((a + b) as i64, a as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BollobasReport {
    pub holds: bool,
    /// First `(i, j)`, `i != j`, with `A_i ∩ B_j` empty.
    pub violation: Option<(usize, usize)>,
    pub size: usize,
    pub bound: BigUint,
    pub within_bound: bool,
}

/// Checks `A_i ∩ B_j != ∅` for all `i != j` and compares `|I|` with
/// `binom(a + b, a)`.
pub fn check_bollobas(f: &SetPairFamily) -> Result<BollobasReport> {
    f.check_sizes(0)?;
    let mut violation = None;
    'outer: for (i, p) in f.pairs.iter().enumerate() {
        for (j, q) in f.pairs.iter().enumerate() {
            if i != j && p.a & q.b == 0 {
                violation = Some((i, j));
                break 'outer;
            }
        }
    }
    let bound = bollobas_bound(f.a, f.b);
    Ok(BollobasReport {
        holds: violation.is_none(),
        violation,
        size: f.len(),
        within_bound: BigUint::from(f.len()) <= bound,
        bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CalbetReport {
    pub holds: bool,
    /// First `(i, j, k)`, `i != j`, with `A_i ∩ B_j ⊆ A_k ∩ B_k`.
    pub violation: Option<(usize, usize, usize)>,
    pub size: usize,
    pub bound: BigUint,
    pub within_bound: bool,
}

fn is_subset(x: u64, y: u64) -> bool {
    x & !y == 0
}

/// Checks `|A_i ∩ B_i| = 2` and `A_i ∩ B_j ⊄ A_k ∩ B_k` for every `i != j`
/// and every `k` (including `k = i` and `k = j`).
pub fn check_calbet(f: &SetPairFamily) -> Result<CalbetReport> {
    if f.a < 2 || f.b < f.a {
        return Err(Error::invalid(format!(
            "the two-overlap condition needs b >= a >= 2, got a = {}, b = {}",
            f.a, f.b
        )));
    }
    f.check_sizes(2)?;
    let cores: Vec<u64> = f.pairs.iter().map(|p| p.a & p.b).collect();
    let mut violation = None;
    'outer: for (i, p) in f.pairs.iter().enumerate() {
        for (j, q) in f.pairs.iter().enumerate() {
            if i == j {
                continue;
            }
            let cross = p.a & q.b;
            if let Some(k) = cores.iter().position(|&c| is_subset(cross, c)) {
                violation = Some((i, j, k));
                break 'outer;
            }
        }
    }
    let bound = bound(f.a, f.b);
    Ok(CalbetReport {
        holds: violation.is_none(),
        violation,
        size: f.len(),
        within_bound: BigUint::from(f.len()) <= bound,
        bound,
    })
}

/// The extremal family on ground set `1..=a+b-2`: for each `c` in `2..=a`,
/// every `a`-set containing `{2c-3, 2c-2}` and meeting each earlier pair
/// `{2d-3, 2d-2}` (`2 <= d < c`) in exactly one element, with
/// `B = complement(A) ∪ {2c-3, 2c-2}`.
pub fn calbet_construction(a: usize, b: usize) -> Result<SetPairFamily> {
    if a < 2 || b < a {
        return Err(Error::invalid(format!(
            "the construction needs b >= a >= 2, got a = {a}, b = {b}"
        )));
    }
    let g = a + b - 2;
    if g > MAX_ELEMENT as usize {
        return Err(Error::invalid("ground set larger than 64 elements"));
    }
    let ground: u64 = if g == 64 { u64::MAX } else { (1u64 << g) - 1 };
    let pair_mask = |d: usize| 0b11u64 << (2 * d - 4);
    let mut pairs = Vec::new();
    for c in 2..=a {
        let core = pair_mask(c);
        let earlier: Vec<u64> = (2..c).map(pair_mask).collect();
        let used = earlier.iter().fold(core, |m, &p| m | p);
        let rest = ground & !used;
        let free = a - 2 - (c - 2);
        for choice in 0u64..1 << (c - 2) {
            let picked = earlier.iter().enumerate().fold(0u64, |m, (t, &p)| {
                let low = p & p.wrapping_neg();
                m | if choice >> t & 1 == 1 { p & !low } else { low }
            });
            for extra in subsets_of_size(rest, free) {
                let a_set = core | picked | extra;
                let b_set = (ground & !a_set) | core;
                pairs.push(SetPair { a: a_set, b: b_set });
            }
        }
    }
    let mut f = SetPairFamily::new(a, b, pairs);
    f.canonicalize();
    Ok(f)
}

/// All submasks of `universe` with exactly `k` bits, in increasing order.
fn subsets_of_size(universe: u64, k: usize) -> Vec<u64> {
    let bits: Vec<u64> = (0..64).filter(|i| universe >> i & 1 == 1).map(|i| 1 << i).collect();
    let mut out = Vec::new();
    fn rec(bits: &[u64], start: usize, k: usize, acc: u64, out: &mut Vec<u64>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..bits.len() {
            if bits.len() - i < k {
                break;
            }
            rec(bits, i + 1, k - 1, acc | bits[i], out);
        }
    }
    rec(&bits, 0, k, 0, &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `A_i ∩ B_i = ∅`, `A_i ∩ B_j != ∅` for `i != j`.
    Bollobas,
    /// `|A_i ∩ B_i| = 2`, `A_i ∩ B_j ⊄ A_k ∩ B_k` for `i != j`, all `k`.
    Calbet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCap {
    pub max_a: usize,
    pub max_b: usize,
    pub max_ground: usize,
}

impl Default for SearchCap {
    fn default() -> Self {
        Self {
            max_a: 3,
            max_b: 4,
            max_ground: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteForceResult {
    pub mode: Mode,
    pub ground: usize,
    pub max: usize,
    /// Lexicographically first family of maximum size.
    pub witness: SetPairFamily,
    pub candidates: usize,
}

/// Exact maximum family size over the ground set `1..=ground`.
///
/// Both conditions are hereditary, so the search is a maximum-clique style
/// branch and bound over all admissible pairs in lexicographic order. A
/// family must be a clique in the graph of pairwise-compatible pairs, which
/// gives a greedy-colouring bound; the three-index condition of the Calbet
/// mode is then checked incrementally on every extension.
pub fn brute_force_max(
    a: usize,
    b: usize,
    ground: usize,
    mode: Mode,
    cap: SearchCap,
) -> Result<BruteForceResult> {
    for (what, v, c) in [
        ("set-pair search a", a, cap.max_a),
        ("set-pair search b", b, cap.max_b),
        ("set-pair search ground", ground, cap.max_ground),
    ] {
        if v > c {
            return Err(Error::CapExceeded {
                what,
                requested: v as u128,
                cap: c as u128,
            });
        }
    }
    if ground > MAX_ELEMENT as usize {
        return Err(Error::invalid("ground set larger than 64 elements"));
    }
    if mode == Mode::Calbet && (a < 2 || b < a) {
        return Err(Error::invalid("the two-overlap mode needs b >= a >= 2"));
    }
    let candidates = enumerate_pairs(a, b, ground, mode);
    let search = Search::new(&candidates, mode);
    let global_best = AtomicUsize::new(0);
    let results: Vec<Vec<usize>> = (0..candidates.len())
        .into_par_iter()
        .map(|first| search.best_with_first(first, &global_best))
        .collect();
    let best = results
        .into_iter()
        .fold(Vec::new(), |best, r| if r.len() > best.len() { r } else { best });
    let mut witness = SetPairFamily::new(a, b, best.iter().map(|&i| candidates[i]).collect());
    witness.canonicalize();
    Ok(BruteForceResult {
        mode,
        ground,
        max: witness.len(),
        witness,
        candidates: candidates.len(),
    })
}

fn enumerate_pairs(a: usize, b: usize, ground: usize, mode: Mode) -> Vec<SetPair> {
    let universe: u64 = if ground == 64 { u64::MAX } else { (1u64 << ground) - 1 };
    let overlap = match mode {
        Mode::Bollobas => 0,
        Mode::Calbet => 2,
    };
    let mut out = Vec::new();
    for a_set in subsets_of_size(universe, a) {
        for b_set in subsets_of_size(universe, b) {
            if (a_set & b_set).count_ones() == overlap {
                out.push(SetPair { a: a_set, b: b_set });
            }
        }
    }
    out.sort_by_key(SetPair::sort_key);
    out
}

struct Search<'a> {
    pairs: &'a [SetPair],
    mode: Mode,
    words: usize,
    /// Pairwise compatibility as bitsets over candidate indices.
    compat: Vec<Vec<u64>>,
}

impl<'a> Search<'a> {
    fn new(pairs: &'a [SetPair], mode: Mode) -> Self {
        let words = pairs.len().div_ceil(64).max(1);
        let mut compat = vec![vec![0u64; words]; pairs.len()];
        for i in 0..pairs.len() {
            for j in 0..pairs.len() {
                if i != j && pair_ok(mode, &[pairs[i], pairs[j]]) {
                    compat[i][j / 64] |= 1 << (j % 64);
                }
            }
        }
        Self {
            pairs,
            mode,
            words,
            compat,
        }
    }

    /// Best family whose smallest candidate index is `first`.
    fn best_with_first(&self, first: usize, global: &AtomicUsize) -> Vec<usize> {
        let mut cands = self.compat[first].clone();
        for j in 0..=first {
            cands[j / 64] &= !(1 << (j % 64));
        }
        let mut family = vec![first];
        let mut best = family.clone();
        global.fetch_max(1, Ordering::Relaxed);
        self.expand(&mut family, cands, &mut best, global);
        best
    }

    fn expand(&self, family: &mut Vec<usize>, cands: Vec<u64>, best: &mut Vec<usize>, global: &AtomicUsize) {
        if family.len() > best.len() {
            *best = family.clone();
            global.fetch_max(best.len(), Ordering::Relaxed);
        }
        let bound = family.len() + self.colour_bound(&cands);
        // Equal-size families elsewhere must not be cut: the witness is the
        // lexicographically first one, so the shared bound prunes strictly.
        if bound <= best.len() || bound < global.load(Ordering::Relaxed) {
            return;
        }
        let mut remaining = cands;
        while let Some(c) = first_bit(&remaining) {
            remaining[c / 64] &= !(1 << (c % 64));
            let extended_bound = family.len() + 1 + count_bits(&remaining);
            if extended_bound <= best.len() {
                break;
            }
            if !self.extends(family, c) {
                continue;
            }
            let next: Vec<u64> = remaining
                .iter()
                .zip(&self.compat[c])
                .map(|(x, y)| x & y)
                .collect();
            family.push(c);
            self.expand(family, next, best, global);
            family.pop();
        }
    }

    /// Whether `family ∪ {c}` still satisfies the condition, given that
    /// `family` does and `c` is pairwise compatible with every member.
    fn extends(&self, family: &[usize], c: usize) -> bool {
        if self.mode == Mode::Bollobas {
            return true;
        }
        let new = self.pairs[c];
        let core = new.a & new.b;
        let mut cores: Vec<u64> = family.iter().map(|&i| self.pairs[i].a & self.pairs[i].b).collect();
        cores.push(core);
        for &i in family {
            for &j in family {
                if i != j && is_subset(self.pairs[i].a & self.pairs[j].b, core) {
                    return false;
                }
            }
            let old = self.pairs[i];
            for cross in [new.a & old.b, old.a & new.b] {
                if cores.iter().any(|&k| is_subset(cross, k)) {
                    return false;
                }
            }
        }
        true
    }

    /// Number of colour classes in a greedy colouring of the compatibility
    /// graph induced on `cands`; at least the largest clique.
    fn colour_bound(&self, cands: &[u64]) -> usize {
        let mut uncoloured = cands.to_vec();
        let mut colours = 0;
        while count_bits(&uncoloured) > 0 {
            colours += 1;
            let mut available = uncoloured.clone();
            while let Some(v) = first_bit(&available) {
                uncoloured[v / 64] &= !(1 << (v % 64));
                available[v / 64] &= !(1 << (v % 64));
                for w in 0..self.words {
                    available[w] &= !self.compat[v][w];
                }
            }
        }
        colours
    }
}

fn first_bit(bits: &[u64]) -> Option<usize> {
    bits.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

fn count_bits(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

/// The full condition for a small explicit family.
fn pair_ok(mode: Mode, pairs: &[SetPair]) -> bool {
    match mode {
        Mode::Bollobas => pairs.iter().enumerate().all(|(i, p)| {
            pairs
                .iter()
                .enumerate()
                .all(|(j, q)| i == j || p.a & q.b != 0)
        }),
        Mode::Calbet => {
            let cores: Vec<u64> = pairs.iter().map(|p| p.a & p.b).collect();
            pairs.iter().enumerate().all(|(i, p)| {
                pairs.iter().enumerate().all(|(j, q)| {
                    i == j || !cores.iter().any(|&c| is_subset(p.a & q.b, c))
                })
            })
        }
    }
}

/// All `(A, B)` partitions of `1..=a+b` with `|A| = a`.
pub fn partition_family(a: usize, b: usize) -> Result<SetPairFamily> {
    let g = a + b;
    if g > MAX_ELEMENT as usize {
        return Err(Error::invalid("ground set larger than 64 elements"));
    }
    let universe: u64 = if g == 64 { u64::MAX } else { (1u64 << g) - 1 };
    let pairs = subsets_of_size(universe, a)
        .into_iter()
        .map(|s| SetPair { a: s, b: universe & !s })
        .collect();
    let mut f = SetPairFamily::new(a, b, pairs);
    f.canonicalize();
    Ok(f)
}
