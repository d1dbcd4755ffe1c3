//! Tournaments on at most eight labelled vertices and their inversion number.
//!
//! A tournament on `n` vertices is packed into `binom(n, 2)` bits, one per
//! pair `i < j` in lexicographic pair order; the bit is set iff the edge is
//! directed `i -> j`. `inv(T)` is the least number of vertex subsets whose
//! internal edges must be reversed, in turn, to reach a transitive
//! tournament. One multi-source breadth-first search from all transitive
//! tournaments gives `inv` for every tournament of a given size, because
//! subset reversal is an involution and the move graph is undirected.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU8, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 8;
/// Tables above this size need an explicit override.
pub const DEFAULT_TABLE_CAP: usize = 7;

const UNSEEN: u8 = u8::MAX;

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Bit index of the pair `i < j`.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Tournament {
    n: u8,
    bits: u32,
}

impl Tournament {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::invalid(format!(
                "tournaments are limited to {MAX_VERTICES} vertices, got {n}"
            )));
        }
        if u64::from(bits) >> pair_count(n) != 0 {
            return Err(Error::invalid(format!(
                "orientation {bits:#b} has bits beyond the {} pairs of a {n}-tournament",
                pair_count(n)
            )));
        }
        Ok(Self { n: n as u8, bits })
    }

    /// The transitive tournament in which `order[a]` beats `order[b]` for `a < b`.
    pub fn transitive(order: &[usize]) -> Self {
        let n = order.len();
        let mut rank = vec![0; n];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        let mut bits = 0u32;
        for i in 0..n {
            for j in i + 1..n {
                if rank[i] < rank[j] {
                    bits |= 1 << pair_index(n, i, j);
                }
            }
        }
        Self { n: n as u8, bits }
    }

    /// The cyclic triangle `0 -> 1 -> 2 -> 0`.
    pub fn three_cycle() -> Self {
        let mut t = Self { n: 3, bits: 0 };
        t.set_edge(0, 1);
        t.set_edge(1, 2);
        t.set_edge(2, 0);
        t
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Whether the edge between `u` and `v` points `u -> v`.
    pub fn beats(&self, u: usize, v: usize) -> bool {
        assert!(u != v);
        let n = self.n();
        if u < v {
            self.bits >> pair_index(n, u, v) & 1 == 1
        } else {
            self.bits >> pair_index(n, v, u) & 1 == 0
        }
    }

    /// Directs the edge `u -> v`.
    pub fn set_edge(&mut self, u: usize, v: usize) {
        let n = self.n();
        if u < v {
            self.bits |= 1 << pair_index(n, u, v);
        } else {
            self.bits &= !(1 << pair_index(n, v, u));
        }
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let n = self.n();
        (0..n)
            .map(|u| (0..n).filter(|&v| v != u && self.beats(u, v)).count())
            .collect()
    }

    /// A tournament is transitive iff its out-degrees are all distinct.
    pub fn is_transitive(&self) -> bool {
        let mut d = self.out_degrees();
        d.sort_unstable();
        d.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Reverses every edge with both endpoints in the vertex set `subset`.
    pub fn invert_subset(&self, subset: u32) -> Self {
        Self {
            n: self.n,
            bits: self.bits ^ internal_pairs(self.n(), subset),
        }
    }

    pub fn reverse_all(&self) -> Self {
        self.invert_subset((1u32 << self.n) - 1)
    }

    /// The tournament with vertex `v` renamed `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.n();
        assert_eq!(perm.len(), n);
        let mut t = Self { n: self.n, bits: 0 };
        for u in 0..n {
            for v in u + 1..n {
                if self.beats(u, v) {
                    t.set_edge(perm[u], perm[v]);
                } else {
                    t.set_edge(perm[v], perm[u]);
                }
            }
        }
        t
    }
}

impl fmt::Display for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.n)?;
        for b in 0..pair_count(self.n()) {
            write!(f, "{}", self.bits >> b & 1)?;
        }
        Ok(())
    }
}

impl FromStr for Tournament {
    type Err = Error;

    /// `n` followed by `binom(n, 2)` bits in pair order; whitespace between
    /// bits is optional.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let n: usize = parts
            .next()
            .ok_or_else(|| Error::parse("empty tournament"))?
            .parse()
            .map_err(|_| Error::parse("tournament size is not an integer"))?;
        if n > MAX_VERTICES {
            return Err(Error::parse(format!("tournament size {n} exceeds {MAX_VERTICES}")));
        }
        let digits: String = parts.collect();
        if digits.len() != pair_count(n) {
            return Err(Error::parse(format!(
                "expected {} orientation bits, found {}",
                pair_count(n),
                digits.len()
            )));
        }
        let mut bits = 0u32;
        for (i, c) in digits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(Error::parse(format!("`{c}` is not an orientation bit"))),
            }
        }
        Tournament::new(n, bits)
    }
}

/// Mask of the pairs with both endpoints in `subset`.
fn internal_pairs(n: usize, subset: u32) -> u32 {
    let mut mask = 0u32;
    for i in 0..n {
        if subset >> i & 1 == 0 {
            continue;
        }
        for j in i + 1..n {
            if subset >> j & 1 == 1 {
                mask |= 1 << pair_index(n, i, j);
            }
        }
    }
    mask
}

/// `T1 -> T2`: disjoint union with every edge directed from `t1` to `t2`.
pub fn join(t1: &Tournament, t2: &Tournament) -> Result<Tournament> {
    let (n1, n2) = (t1.n(), t2.n());
    let mut t = Tournament::new(n1 + n2, 0)?;
    for u in 0..n1 + n2 {
        for v in u + 1..n1 + n2 {
            let forward = match (u < n1, v < n1) {
                (true, true) => t1.beats(u, v),
                (false, false) => t2.beats(u - n1, v - n1),
                _ => true,
            };
            if forward {
                t.set_edge(u, v);
            }
        }
    }
    Ok(t)
}

/// `inv` for every tournament on `n` labelled vertices, indexed by orientation bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvTable {
    n: usize,
    dist: Vec<u8>,
}

impl InvTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn inv(&self, t: &Tournament) -> u8 {
        assert_eq!(t.n(), self.n, "tournament size does not match the table");
        self.dist[t.bits() as usize]
    }

    pub fn max(&self) -> u8 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    /// `histogram()[d]` = number of labelled tournaments with `inv = d`.
    pub fn histogram(&self) -> Vec<u64> {
        let mut h = vec![0u64; self.max() as usize + 1];
        for &d in &self.dist {
            h[d as usize] += 1;
        }
        h
    }

    pub fn distances(&self) -> &[u8] {
        &self.dist
    }
}

/// Builds the `inv` table for `n` vertices. `cap` bounds `n` (use
/// [`DEFAULT_TABLE_CAP`], or 8 to opt into the 256 MiB table).
pub fn inv_table(n: usize, cap: usize) -> Result<InvTable> {
    let cap = cap.min(MAX_VERTICES);
    if n > cap {
        return Err(Error::CapExceeded {
            what: "tournament table size",
            requested: n as u128,
            cap: cap as u128,
        });
    }
    let states = 1usize << pair_count(n);
    let moves: Vec<u32> = (0u32..1 << n)
        .filter(|s| s.count_ones() >= 2)
        .map(|s| internal_pairs(n, s))
        .collect();

    let dist: Vec<AtomicU8> = (0..states).map(|_| AtomicU8::new(UNSEEN)).collect();
    let mut frontier: Vec<u32> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        let t = Tournament::transitive(&order);
        if dist[t.bits as usize]
            .compare_exchange(UNSEEN, 0, Ordering::Relaxed, Ordering::Relaxed)
            .is_ok()
        {
            frontier.push(t.bits);
        }
        if !next_order(&mut order) {
            break;
        }
    }

    let mut depth = 0u8;
    while !frontier.is_empty() {
        depth += 1;
        // Each state is claimed exactly once, by the first layer reaching it.
        let mut next: Vec<u32> = frontier
            .par_iter()
            .flat_map_iter(|&s| moves.iter().map(move |&m| s ^ m))
            .filter(|&t| {
                dist[t as usize]
                    .compare_exchange(UNSEEN, depth, Ordering::Relaxed, Ordering::Relaxed)
                    .is_ok()
            })
            .collect();
        next.sort_unstable();
        frontier = next;
    }

    let dist: Vec<u8> = dist.into_iter().map(AtomicU8::into_inner).collect();
    debug_assert!(dist.iter().all(|&d| d != UNSEEN));
    Ok(InvTable { n, dist })
}

fn next_order(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectWitness {
    pub t1: String,
    pub t2: String,
    pub inv_t1: u8,
    pub inv_t2: u8,
    pub inv_join: u8,
}

/// Distribution of `inv(T1 -> T2) - inv(T1) - inv(T2)` over all labelled pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdditivityReport {
    pub n1: usize,
    pub n2: usize,
    pub pairs: u64,
    pub min_defect: i32,
    pub max_defect: i32,
    pub histogram: BTreeMap<i32, u64>,
    pub min_witness: DefectWitness,
    pub max_witness: DefectWitness,
}

pub fn additivity_probe(n1: usize, n2: usize, cap: usize) -> Result<AdditivityReport> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::invalid("both sides of the join need at least one vertex"));
    }
    let joined = inv_table(n1 + n2, cap)?;
    let left = inv_table(n1, cap)?;
    let right = inv_table(n2, cap)?;
    let mut histogram = BTreeMap::new();
    let mut min: Option<(i32, DefectWitness)> = None;
    let mut max: Option<(i32, DefectWitness)> = None;
    let mut pairs = 0u64;
    for b1 in 0..left.len() as u32 {
        let t1 = Tournament::new(n1, b1)?;
        for b2 in 0..right.len() as u32 {
            let t2 = Tournament::new(n2, b2)?;
            let j = join(&t1, &t2)?;
            let (i1, i2, ij) = (left.inv(&t1), right.inv(&t2), joined.inv(&j));
            let defect = ij as i32 - i1 as i32 - i2 as i32;
            *histogram.entry(defect).or_insert(0) += 1;
            pairs += 1;
            let witness = || DefectWitness {
                t1: t1.to_string(),
                t2: t2.to_string(),
                inv_t1: i1,
                inv_t2: i2,
                inv_join: ij,
            };
            if min.as_ref().is_none_or(|(d, _)| defect < *d) {
                min = Some((defect, witness()));
            }
            if max.as_ref().is_none_or(|(d, _)| defect > *d) {
                max = Some((defect, witness()));
            }
        }
    }
    let (min_defect, min_witness) = min.expect("at least one pair");
    let (max_defect, max_witness) = max.expect("at least one pair");
    Ok(AdditivityReport {
        n1,
        n2,
        pairs,
        min_defect,
        max_defect,
        histogram,
        min_witness,
        max_witness,
    })
}
