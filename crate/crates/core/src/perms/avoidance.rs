use rayon::prelude::*;
use serde::Serialize;

use super::{inversions, next_permutation, Pattern};
use crate::error::{Error, Result};

/// Largest `n` scanned exhaustively unless the caller raises the limit.
pub const DEFAULT_EXHAUSTION_LIMIT: usize = 11;

const MAX_PATTERN: usize = 32;

/// Precomputed matcher for one pattern.
///
/// Letters are placed left to right. For the `i`-th letter only its nearest
/// smaller and nearest larger predecessor (by value) need checking: if the
/// prefix is already order-isomorphic, those two comparisons place the new
/// value in the right interval.
#[derive(Debug, Clone)]
pub struct Matcher {
    lower: Vec<Option<usize>>,
    upper: Vec<Option<usize>>,
    gap_after: Option<usize>,
}

impl Matcher {
    pub fn new(q: &Pattern) -> Self {
        assert!(q.len() <= MAX_PATTERN, "pattern too long");
        let letters = q.letters();
        let k = letters.len();
        let mut lower = vec![None; k];
        let mut upper = vec![None; k];
        for i in 0..k {
            for j in 0..i {
                if letters[j] < letters[i] {
                    if lower[i].is_none_or(|l: usize| letters[l] < letters[j]) {
                        lower[i] = Some(j);
                    }
                } else if upper[i].is_none_or(|u: usize| letters[u] > letters[j]) {
                    upper[i] = Some(j);
                }
            }
        }
        Self {
            lower,
            upper,
            gap_after: q.box_position().map(|t| t - 1),
        }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn occurs_in(&self, p: &[u8]) -> bool {
        if self.len() > p.len() {
            return false;
        }
        let mut chosen = [0usize; MAX_PATTERN];
        self.extend(p, 0, 0, &mut chosen)
    }

    fn extend(&self, p: &[u8], i: usize, start: usize, chosen: &mut [usize; MAX_PATTERN]) -> bool {
        let k = self.len();
        if i == k {
            return true;
        }
        let last = p.len() - (k - i);
        let lo = self.lower[i].map(|j| p[chosen[j]]);
        let hi = self.upper[i].map(|j| p[chosen[j]]);
        let step = if self.gap_after == Some(i) { 2 } else { 1 };
        for x in start..=last {
            let v = p[x];
            if lo.is_none_or(|l| v > l) && hi.is_none_or(|h| v < h) {
                chosen[i] = x;
                if self.extend(p, i + 1, x + step, chosen) {
                    return true;
                }
            }
        }
        false
    }
}

/// Whether `p` contains `q`, honouring the box gap if `q` has one.
pub fn contains(p: &[u8], q: &Pattern) -> bool {
    Matcher::new(q).occurs_in(p)
}

fn check_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::ExhaustionLimit {
            what: "permutation length",
            requested: n as u64,
            limit: limit as u64,
        });
    }
    Ok(())
}

/// Sums `f(p)` over all of S_n, split by first letter across threads.
/// Integer addition keeps the result independent of the split.
fn scan_sum<T, F>(n: usize, zero: T, f: F) -> T
where
    T: Send + Clone + Sync + AddAssignVec,
    F: Fn(&[u8], &mut T) + Sync,
{
    if n <= 1 {
        let mut acc = zero;
        let p: Vec<u8> = (1..=n as u8).collect();
        f(&p, &mut acc);
        return acc;
    }
    (1..=n as u8)
        .into_par_iter()
        .map(|first| {
            let mut acc = zero.clone();
            let mut p: Vec<u8> = std::iter::once(first)
                .chain((1..=n as u8).filter(|&v| v != first))
                .collect();
            loop {
                f(&p, &mut acc);
                if !next_permutation(&mut p[1..]) {
                    break;
                }
            }
            acc
        })
        .reduce(
            || zero.clone(),
            |mut a, b| {
                a.add_assign_vec(&b);
                a
            },
        )
}

trait AddAssignVec {
    fn add_assign_vec(&mut self, other: &Self);
}

impl AddAssignVec for Vec<u64> {
    fn add_assign_vec(&mut self, other: &Self) {
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
    }
}

/// av_n(q): the number of permutations of length `n` avoiding `q`, by
/// scanning all of S_n.
pub fn count_avoiders(n: usize, q: &Pattern, limit: usize) -> Result<u64> {
    check_limit(n, limit)?;
    let m = Matcher::new(q);
    let counts = scan_sum(n, vec![0u64], |p, acc| {
        if !m.occurs_in(p) {
            acc[0] += 1;
        }
    });
    Ok(counts[0])
}

/// Avoider counts for several patterns at lengths `1..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WilfTable {
    pub patterns: Vec<String>,
    /// `counts[i][n - 1]` = av_n(patterns[i]).
    pub counts: Vec<Vec<u64>>,
    /// `equal[n - 1]`: all patterns have the same count at length `n`.
    pub equal: Vec<bool>,
}

impl WilfTable {
    pub fn n_max(&self) -> usize {
        self.equal.len()
    }

    pub fn all_equal(&self) -> bool {
        self.equal.iter().all(|&e| e)
    }

    /// Smallest length at which the counts differ.
    pub fn first_inequality(&self) -> Option<usize> {
        self.equal.iter().position(|&e| !e).map(|i| i + 1)
    }
}

pub fn wilf_check(n_max: usize, patterns: &[Pattern], limit: usize) -> Result<WilfTable> {
    check_limit(n_max, limit)?;
    let matchers: Vec<Matcher> = patterns.iter().map(Matcher::new).collect();
    let mut counts = vec![Vec::with_capacity(n_max); patterns.len()];
    let mut equal = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let row = scan_sum(n, vec![0u64; matchers.len()], |p, acc| {
            for (slot, m) in acc.iter_mut().zip(&matchers) {
                if !m.occurs_in(p) {
                    *slot += 1;
                }
            }
        });
        equal.push(row.windows(2).all(|w| w[0] == w[1]));
        for (col, c) in counts.iter_mut().zip(row) {
            col.push(c);
        }
    }
    Ok(WilfTable {
        patterns: patterns.iter().map(ToString::to_string).collect(),
        counts,
        equal,
    })
}

/// The three triples obtained by boxing 1234, 1243 and 2143 at the same
/// position.
pub fn dimitrov_triples() -> [[Pattern; 3]; 3] {
    let make = |t: usize| {
        [[1u8, 2, 3, 4], [1, 2, 4, 3], [2, 1, 4, 3]]
            .map(|letters| Pattern::boxed(letters.to_vec(), t).expect("valid box pattern"))
    };
    [make(1), make(2), make(3)]
}

/// `rows[n][k]` = number of 1324-avoiders of length `n` with `k` inversions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InversionTable {
    pub k_max: usize,
    pub rows: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MonotonicityViolation {
    pub n: usize,
    pub k: usize,
    pub smaller: u64,
    pub larger: u64,
}

impl InversionTable {
    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, k: usize) -> u64 {
        self.rows[n].get(k).copied().unwrap_or(0)
    }

    /// Sum over all `k`, not only `k <= k_max`.
    pub fn total(&self, n: usize) -> u64 {
        self.rows[n].iter().sum()
    }

    /// First `(n, k)` with `b[n+1][k] < b[n][k]` for `k <= k_max`.
    pub fn monotonicity_violation(&self) -> Option<MonotonicityViolation> {
        for n in 0..self.n_max() {
            for k in 0..=self.k_max {
                let (a, b) = (self.get(n, k), self.get(n + 1, k));
                if b < a {
                    return Some(MonotonicityViolation {
                        n,
                        k,
                        smaller: b,
                        larger: a,
                    });
                }
            }
        }
        None
    }
}

/// Builds the 1324-avoider inversion table for lengths `0..=n_max`.
///
/// Avoiders of length `n` are exactly the insertions of `n` into avoiders of
/// length `n - 1` that still avoid, since deleting the largest letter never
/// creates an occurrence. This is independent of the plain S_n scan in
/// [`count_avoiders`].
pub fn avoiders_by_inversions(n_max: usize, k_max: usize, limit: usize) -> Result<InversionTable> {
    check_limit(n_max, limit)?;
    let pattern = Pattern::classical(vec![1, 3, 2, 4]).expect("1324");
    let m = Matcher::new(&pattern);
    let mut rows = vec![vec![1u64]];
    let mut level: Vec<(Vec<u8>, u64)> = vec![(Vec::new(), 0)];
    for n in 1..=n_max {
        let width = n * (n - 1) / 2 + 1;
        let children = |(parent, inv): &(Vec<u8>, u64)| {
            let mut out = Vec::new();
            for pos in 0..n {
                let mut child = Vec::with_capacity(n);
                child.extend_from_slice(&parent[..pos]);
                child.push(n as u8);
                child.extend_from_slice(&parent[pos..]);
                if !m.occurs_in(&child) {
                    out.push((child, inv + (n - 1 - pos) as u64));
                }
            }
            out
        };
        if n < n_max {
            level = level.par_iter().flat_map_iter(children).collect();
            let mut row = vec![0u64; width];
            for (_, inv) in &level {
                row[*inv as usize] += 1;
            }
            rows.push(row);
        } else {
            let row = level
                .par_iter()
                .fold(
                    || vec![0u64; width],
                    |mut row, item| {
                        for (_, inv) in children(item) {
                            row[inv as usize] += 1;
                        }
                        row
                    },
                )
                .reduce(
                    || vec![0u64; width],
                    |mut a, b| {
                        a.add_assign_vec(&b);
                        a
                    },
                );
            rows.push(row);
        }
    }
    debug_assert!(level.iter().all(|(p, i)| inversions(p) == *i));
    Ok(InversionTable { k_max, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthEstimate {
    pub n: usize,
    pub count: u64,
    pub root: f64,
}

/// `av_n(1324)^(1/n)` for `n = 1..=n_max`.
///
/// The conjectured limit e^(pi sqrt(2/3)) ~ 13.002 is far out of reach at
/// these lengths; the values are a sanity sequence, nothing more.
pub fn growth_estimate(n_max: usize, limit: usize) -> Result<Vec<GrowthEstimate>> {
    check_limit(n_max, limit)?;
    let q = Pattern::classical(vec![1, 3, 2, 4]).expect("1324");
    (1..=n_max)
        .map(|n| {
            let count = count_avoiders(n, &q, limit)?;
            Ok(GrowthEstimate {
                n,
                count,
                root: (count as f64).powf(1.0 / n as f64),
            })
        })
        .collect()
}
