//! Latin squares: validation, Cayley tables, cuboctahedron counting, group
//! recognition, Jacobson–Matthews sampling and a count-minimizing search.
//!
//! A cuboctahedron is a coincidence of 2×2 value blocks: two tuples
//! `(r1, r2, c1, c2)` and `(r1', r2', c1', c2')` of ordered row and column
//! pairs with `L(r_i, c_j) = L(r_i', c_j')` for all four positions.
//! Degenerate tuples (`r1 = r2` or `c1 = c2`) are included, so the count is
//! `Σ m(key)²` over the 2×2 value keys of all `n⁴` tuples. Under this
//! convention every Cayley table of order `n` has exactly `n⁵`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, Ordering};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded, WorkbenchRng};

/// Largest order whose count array (`n⁴` entries) is allocated directly.
const DENSE_COUNT_MAX: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u8>>", into = "Vec<Vec<u8>>")]
pub struct LatinSquare {
    n: usize,
    /// Row-major, symbols `0..n`.
    cells: Vec<u8>,
}

impl LatinSquare {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > 255 {
            return Err(Error::invalid(format!("order {n} outside 1..=255")));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("rows of a Latin square must all have length n"));
        }
        let sq = Self {
            n,
            cells: rows.into_iter().flatten().collect(),
        };
        sq.validate()?;
        Ok(sq)
    }

    fn from_cells_unchecked(n: usize, cells: Vec<u8>) -> Self {
        debug_assert_eq!(cells.len(), n * n);
        Self { n, cells }
    }

    /// `L(r, c) = r + c mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        cayley_table(&GroupSpec::Cyclic(n))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.cells[r * self.n + c]
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.cells.chunks(self.n).map(<[u8]>::to_vec).collect()
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            let (mut row_seen, mut col_seen) = (vec![false; n], vec![false; n]);
            for j in 0..n {
                for (seen, v, what) in [
                    (&mut row_seen, self.get(i, j), "row"),
                    (&mut col_seen, self.get(j, i), "column"),
                ] {
                    let v = v as usize;
                    if v >= n || seen[v] {
                        return Err(Error::invalid(format!(
                            "{what} {i} is not a permutation of 0..{n}"
                        )));
                    }
                    seen[v] = true;
                }
            }
        }
        Ok(())
    }

    /// Applies an isotopy: row `r` moves to `rows[r]`, column `c` to
    /// `cols[c]`, symbol `s` becomes `symbols[s]`.
    pub fn isotope(&self, rows: &[usize], cols: &[usize], symbols: &[u8]) -> Result<Self> {
        let n = self.n;
        for (name, p) in [("row", rows), ("column", cols)] {
            if !is_permutation(p.iter().copied(), n) {
                return Err(Error::invalid(format!("{name} map is not a permutation")));
            }
        }
        if !is_permutation(symbols.iter().map(|&s| s as usize), n) {
            return Err(Error::invalid("symbol map is not a permutation"));
        }
        let mut cells = vec![0u8; n * n];
        for r in 0..n {
            for c in 0..n {
                cells[rows[r] * n + cols[c]] = symbols[self.get(r, c) as usize];
            }
        }
        Ok(Self::from_cells_unchecked(n, cells))
    }

    /// Swaps the two symbols of the intercalate on rows `r1, r2` and columns
    /// `c1, c2`.
    pub fn switch_intercalate(&self, r1: usize, r2: usize, c1: usize, c2: usize) -> Result<Self> {
        let n = self.n;
        if [r1, r2, c1, c2].iter().any(|&x| x >= n) || r1 == r2 || c1 == c2 {
            return Err(Error::invalid("intercalate indices out of range or repeated"));
        }
        let (a, b) = (self.get(r1, c1), self.get(r1, c2));
        if self.get(r2, c1) != b || self.get(r2, c2) != a {
            return Err(Error::invalid(format!(
                "rows {r1},{r2} and columns {c1},{c2} do not form an intercalate"
            )));
        }
        let mut cells = self.cells.clone();
        cells[r1 * n + c1] = b;
        cells[r1 * n + c2] = a;
        cells[r2 * n + c1] = a;
        cells[r2 * n + c2] = b;
        Ok(Self::from_cells_unchecked(n, cells))
    }

    /// The lexicographically first intercalate `(r1, r2, c1, c2)`.
    pub fn find_intercalate(&self) -> Option<(usize, usize, usize, usize)> {
        let n = self.n;
        for r1 in 0..n {
            for r2 in r1 + 1..n {
                for c1 in 0..n {
                    for c2 in c1 + 1..n {
                        if self.get(r1, c1) == self.get(r2, c2) && self.get(r1, c2) == self.get(r2, c1) {
                            return Some((r1, r2, c1, c2));
                        }
                    }
                }
            }
        }
        None
    }
}

fn is_permutation(it: impl Iterator<Item = usize>, n: usize) -> bool {
    let mut seen = vec![false; n];
    let mut count = 0;
    for x in it {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
        count += 1;
    }
    count == n
}

impl TryFrom<Vec<Vec<u8>>> for LatinSquare {
    type Error = Error;

    fn try_from(rows: Vec<Vec<u8>>) -> Result<Self> {
        LatinSquare::new(rows)
    }
}

impl From<LatinSquare> for Vec<Vec<u8>> {
    fn from(sq: LatinSquare) -> Self {
        sq.rows()
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.cells.chunks(self.n) {
            let line: Vec<String> = row.iter().map(u8::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for LatinSquare {
    type Err = Error;

    /// `n` lines of `n` whitespace-separated symbols; blank lines ignored.
    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<u8>().map_err(|e| Error::parse(format!("symbol {t:?}: {e}"))))
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        LatinSquare::new(rows)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic(usize),
    /// Direct product of cyclic groups of the given orders.
    Product(Vec<usize>),
    /// Multiplication table on `0..n`; must be an associative Latin square.
    Explicit(Vec<Vec<u8>>),
}

pub fn cayley_table(g: &GroupSpec) -> Result<LatinSquare> {
    match g {
        GroupSpec::Cyclic(n) => cayley_table(&GroupSpec::Product(vec![*n])),
        GroupSpec::Product(orders) => {
            if orders.contains(&0) {
                return Err(Error::invalid("cyclic factor of order 0"));
            }
            let n = orders
                .iter()
                .try_fold(1usize, |acc, &m| acc.checked_mul(m).filter(|&p| p <= 255))
                .ok_or_else(|| Error::invalid("group order above 255"))?;
            let digits = |mut x: usize| -> Vec<usize> {
                orders
                    .iter()
                    .map(|&m| {
                        let d = x % m;
                        x /= m;
                        d
                    })
                    .collect()
            };
            let index = |ds: &[usize]| -> usize {
                ds.iter().zip(orders).rev().fold(0, |acc, (&d, &m)| acc * m + d)
            };
            let mut cells = vec![0u8; n * n];
            for x in 0..n {
                let dx = digits(x);
                for y in 0..n {
                    let sum: Vec<usize> = dx
                        .iter()
                        .zip(digits(y))
                        .zip(orders)
                        .map(|((&a, b), &m)| (a + b) % m)
                        .collect();
                    cells[x * n + y] = index(&sum) as u8;
                }
            }
            Ok(LatinSquare::from_cells_unchecked(n, cells))
        }
        GroupSpec::Explicit(rows) => {
            let sq = LatinSquare::new(rows.clone())?;
            if let Some((a, b, c)) = associativity_failure(&sq) {
                return Err(Error::invalid(format!(
                    "explicit table is not associative: ({a}·{b})·{c} != {a}·({b}·{c})"
                )));
            }
            Ok(sq)
        }
    }
}

fn associativity_failure(op: &LatinSquare) -> Option<(usize, usize, usize)> {
    let n = op.n;
    for a in 0..n {
        for b in 0..n {
            let ab = op.get(a, b) as usize;
            for c in 0..n {
                if op.get(ab, c) != op.get(a, op.get(b, c) as usize) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// Whether `L` is isotopic to the Cayley table of a group.
///
/// The loop `x∘y = L(ρ(x), γ(y))`, where `ρ(x)` is the row holding `x` in
/// column 0 and `γ(y)` the column holding `y` in row 0, has identity `L(0,0)`;
/// it is a group exactly when `L` is a group isotope.
pub fn is_group_table(l: &LatinSquare) -> bool {
    let n = l.n;
    let mut row_of = vec![0usize; n];
    let mut col_of = vec![0usize; n];
    for i in 0..n {
        row_of[l.get(i, 0) as usize] = i;
        col_of[l.get(0, i) as usize] = i;
    }
    let mut cells = vec![0u8; n * n];
    for x in 0..n {
        for y in 0..n {
            cells[x * n + y] = l.get(row_of[x], col_of[y]);
        }
    }
    associativity_failure(&LatinSquare::from_cells_unchecked(n, cells)).is_none()
}

/// `Σ m(key)²` over the 2×2 value keys of all `n⁴` ordered tuples.
pub fn count_cuboctahedra(l: &LatinSquare) -> u128 {
    let n = l.n;
    if n <= DENSE_COUNT_MAX {
        let counts: Vec<AtomicU32> = (0..n.pow(4)).map(|_| AtomicU32::new(0)).collect();
        (0..n * n).into_par_iter().for_each(|rp| {
            let (r1, r2) = (rp / n, rp % n);
            for c1 in 0..n {
                let (a, c) = (l.get(r1, c1) as usize, l.get(r2, c1) as usize);
                for c2 in 0..n {
                    let (b, d) = (l.get(r1, c2) as usize, l.get(r2, c2) as usize);
                    counts[((a * n + b) * n + c) * n + d].fetch_add(1, Ordering::Relaxed);
                }
            }
        });
        counts
            .into_par_iter()
            .map(|m| {
                let m = m.into_inner() as u128;
                m * m
            })
            .sum()
    } else {
        let mut counts: HashMap<u32, u64> = HashMap::new();
        for r1 in 0..n {
            for r2 in 0..n {
                for c1 in 0..n {
                    for c2 in 0..n {
                        let key = u32::from_le_bytes([l.get(r1, c1), l.get(r1, c2), l.get(r2, c1), l.get(r2, c2)]);
                        *counts.entry(key).or_default() += 1;
                    }
                }
            }
        }
        counts.values().map(|&m| (m as u128) * (m as u128)).sum()
    }
}

/// Jacobson–Matthews walk on incidence cubes. An improper state has exactly
/// one entry equal to −1.
struct IncidenceCube {
    n: usize,
    cube: Vec<i8>,
    improper: Option<(usize, usize, usize)>,
}

impl IncidenceCube {
    fn from_square(l: &LatinSquare) -> Self {
        let n = l.n;
        let mut cube = vec![0i8; n * n * n];
        for r in 0..n {
            for c in 0..n {
                cube[(r * n + c) * n + l.get(r, c) as usize] = 1;
            }
        }
        Self {
            n,
            cube,
            improper: None,
        }
    }

    fn at(&self, r: usize, c: usize, s: usize) -> i8 {
        self.cube[(r * self.n + c) * self.n + s]
    }

    fn add(&mut self, r: usize, c: usize, s: usize, delta: i8) {
        self.cube[(r * self.n + c) * self.n + s] += delta;
    }

    /// Positions along a line where the entry is 1, via the given indexer.
    fn ones(&self, f: impl Fn(usize) -> i8) -> ([usize; 2], usize) {
        let mut out = [0usize; 2];
        let mut k = 0;
        for x in 0..self.n {
            if f(x) == 1 {
                if k < 2 {
                    out[k] = x;
                }
                k += 1;
            }
        }
        (out, k)
    }

    fn step(&mut self, rng: &mut WorkbenchRng) {
        let n = self.n;
        let (r, c, s, r1, c1, s1);
        match self.improper {
            None => {
                let (rr, cc, ss) = loop {
                    let t = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                    if self.at(t.0, t.1, t.2) == 0 {
                        break t;
                    }
                };
                (r, c, s) = (rr, cc, ss);
                s1 = self.ones(|x| self.at(r, c, x)).0[0];
                r1 = self.ones(|x| self.at(x, c, s)).0[0];
                c1 = self.ones(|x| self.at(r, x, s)).0[0];
            }
            Some((rr, cc, ss)) => {
                (r, c, s) = (rr, cc, ss);
                s1 = self.ones(|x| self.at(r, c, x)).0[rng.gen_range(0..2)];
                r1 = self.ones(|x| self.at(x, c, s)).0[rng.gen_range(0..2)];
                c1 = self.ones(|x| self.at(r, x, s)).0[rng.gen_range(0..2)];
            }
        }
        self.add(r, c, s, 1);
        self.add(r, c1, s1, 1);
        self.add(r1, c, s1, 1);
        self.add(r1, c1, s, 1);
        self.add(r, c, s1, -1);
        self.add(r, c1, s, -1);
        self.add(r1, c, s, -1);
        self.add(r1, c1, s1, -1);
        self.improper = (self.at(r1, c1, s1) == -1).then_some((r1, c1, s1));
    }

    fn to_square(&self) -> LatinSquare {
        debug_assert!(self.improper.is_none());
        let n = self.n;
        let cells = (0..n * n)
            .map(|rc| (0..n).find(|&s| self.cube[rc * n + s] == 1).expect("proper cube") as u8)
            .collect();
        LatinSquare::from_cells_unchecked(n, cells)
    }
}

/// Runs the walk from `start` until `steps` proper squares have been visited.
pub fn jm_walk(start: &LatinSquare, steps: u64, rng: &mut WorkbenchRng) -> LatinSquare {
    if start.n < 2 {
        return start.clone();
    }
    let mut cube = IncidenceCube::from_square(start);
    let mut visited = 0;
    while visited < steps {
        cube.step(rng);
        if cube.improper.is_none() {
            visited += 1;
        }
    }
    cube.to_square()
}

/// A random Latin square from the walk started at the cyclic square.
pub fn jm_sample(n: usize, steps: u64, seed: u64) -> Result<LatinSquare> {
    if n < 2 {
        return Err(Error::invalid("sampling needs order n >= 2"));
    }
    let start = LatinSquare::cyclic(n)?;
    Ok(jm_walk(&start, steps, &mut seeded(seed)))
}

/// Proper steps used when none are requested explicitly.
pub fn default_mixing_steps(n: usize) -> u64 {
    (n as u64).pow(3).max(100)
}

/// Independent chains, chain `i` seeded by `derive_seed(seed, i)`.
pub fn jm_samples(n: usize, count: usize, steps: u64, seed: u64) -> Result<Vec<LatinSquare>> {
    (0..count)
        .into_par_iter()
        .map(|i| jm_sample(n, steps, derive_seed(seed, i as u64)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimizeResult {
    pub n: usize,
    pub best: LatinSquare,
    pub count: u128,
    /// `count / n⁴`.
    pub ratio: f64,
    pub evaluations: u64,
    pub restarts: u64,
}

/// Local search over walk moves: each proposal is the next proper square on
/// the walk from the current one; it is accepted when its count does not
/// increase. After `4n²` consecutive rejections the search restarts from a
/// freshly mixed square.
pub fn minimize_cuboctahedra(n: usize, budget: u64, seed: u64) -> Result<MinimizeResult> {
    if n < 2 {
        return Err(Error::invalid("minimization needs order n >= 2"));
    }
    let mut rng = seeded(seed);
    let mix = default_mixing_steps(n);
    let stale_limit = 4 * (n * n) as u64;
    let mut current = jm_walk(&LatinSquare::cyclic(n)?, mix, &mut rng);
    let mut current_count = count_cuboctahedra(&current);
    let mut best = (current.clone(), current_count);
    let (mut evaluations, mut restarts, mut stale) = (1u64, 0u64, 0u64);
    while evaluations < budget {
        let proposal = jm_walk(&current, 1, &mut rng);
        let count = count_cuboctahedra(&proposal);
        evaluations += 1;
        if count <= current_count {
            stale = if count < current_count { 0 } else { stale + 1 };
            current = proposal;
            current_count = count;
            if count < best.1 {
                best = (current.clone(), count);
            }
        } else {
            stale += 1;
        }
        if stale >= stale_limit && evaluations < budget {
            restarts += 1;
            stale = 0;
            current = jm_walk(&current, mix, &mut rng);
            current_count = count_cuboctahedra(&current);
            evaluations += 1;
            if current_count < best.1 {
                best = (current.clone(), current_count);
            }
        }
    }
    let (best, count) = best;
    Ok(MinimizeResult {
        n,
        ratio: count as f64 / (n as f64).powi(4),
        best,
        count,
        evaluations,
        restarts,
    })
}

/// Every Latin square of order `n` (at most 5), in lexicographic row-major
/// order.
pub fn all_latin_squares(n: usize) -> Result<Vec<LatinSquare>> {
    if n == 0 || n > 5 {
        return Err(Error::ExhaustionLimit {
            what: "Latin square order",
            requested: n as u64,
            limit: 5,
        });
    }
    let mut out = Vec::new();
    let mut cells = vec![0u8; n * n];
    fn fill(n: usize, pos: usize, cells: &mut [u8], out: &mut Vec<LatinSquare>) {
        if pos == n * n {
            out.push(LatinSquare::from_cells_unchecked(n, cells.to_vec()));
            return;
        }
        let (r, c) = (pos / n, pos % n);
        for s in 0..n as u8 {
            let clash = (0..c).any(|j| cells[r * n + j] == s) || (0..r).any(|i| cells[i * n + c] == s);
            if !clash {
                cells[pos] = s;
                fill(n, pos + 1, cells, out);
            }
        }
    }
    fill(n, 0, &mut cells, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Literal definition: matching pairs of 8-tuples.
    fn count_by_octuples(l: &LatinSquare) -> u128 {
        let n = l.order();
        let mut total = 0u128;
        for r1 in 0..n {
            for r2 in 0..n {
                for c1 in 0..n {
                    for c2 in 0..n {
                        for s1 in 0..n {
                            for s2 in 0..n {
                                for d1 in 0..n {
                                    for d2 in 0..n {
                                        if l.get(r1, c1) == l.get(s1, d1)
                                            && l.get(r1, c2) == l.get(s1, d2)
                                            && l.get(r2, c1) == l.get(s2, d1)
                                            && l.get(r2, c2) == l.get(s2, d2)
                                        {
                                            total += 1;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        total
    }

    #[test]
    fn group_calibration() {
        assert_eq!(count_by_octuples(&LatinSquare::cyclic(2).unwrap()), 32);
        assert_eq!(count_by_octuples(&LatinSquare::cyclic(3).unwrap()), 243);
        for n in 1..=6u128 {
            let l = LatinSquare::cyclic(n as usize).unwrap();
            assert_eq!(count_cuboctahedra(&l), n.pow(5));
        }
        let klein = cayley_table(&GroupSpec::Product(vec![2, 2])).unwrap();
        assert_eq!(count_cuboctahedra(&klein), 4u128.pow(5));
    }

    #[test]
    fn order_four_census() {
        let all = all_latin_squares(4).unwrap();
        assert_eq!(all.len(), 576);
        for l in &all {
            let fast = count_cuboctahedra(l);
            assert_eq!(fast, count_by_octuples(l));
            assert_eq!(is_group_table(l), fast == 4u128.pow(5));
        }
        assert_eq!(all_latin_squares(3).unwrap().len(), 12);
    }

    #[test]
    fn cayley_tables() {
        assert_eq!(LatinSquare::cyclic(2).unwrap().rows(), vec![vec![0, 1], vec![1, 0]]);
        let klein = cayley_table(&GroupSpec::Product(vec![2, 2])).unwrap();
        assert!((0..4).all(|x| klein.get(x, x) == 0));
        let z6 = LatinSquare::cyclic(6).unwrap();
        assert!((0..6).all(|r| (0..6).all(|c| z6.get(r, c) == z6.get((r + 1) % 6, (c + 5) % 6))));
        let not_assoc = vec![vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]];
        assert!(cayley_table(&GroupSpec::Explicit(not_assoc)).is_err());
    }

    #[test]
    fn group_recognition() {
        let z4 = LatinSquare::cyclic(4).unwrap();
        let shuffled = z4.isotope(&[2, 0, 3, 1], &[0, 1, 2, 3], &[0, 1, 2, 3]).unwrap();
        assert!(is_group_table(&shuffled));
        assert!(is_group_table(&LatinSquare::cyclic(1).unwrap()));
        let (r1, r2, c1, c2) = z4.find_intercalate().unwrap();
        let switched = z4.switch_intercalate(r1, r2, c1, c2).unwrap();
        assert_eq!(is_group_table(&switched), count_cuboctahedra(&switched) == 4u128.pow(5));
    }

    #[test]
    fn odd_cyclic_tables_have_no_intercalates() {
        for n in [3, 5, 7] {
            assert_eq!(LatinSquare::cyclic(n).unwrap().find_intercalate(), None);
        }
    }

    #[test]
    fn one_excursion_from_z5_leaves_the_group_class() {
        let z5 = LatinSquare::cyclic(5).unwrap();
        let l = jm_walk(&z5, 1, &mut seeded(0));
        assert_ne!(l, z5);
        assert!(!is_group_table(&l));
        assert!(count_cuboctahedra(&l) < 5u128.pow(5));
    }

    #[test]
    fn walk_outputs_are_latin_and_reproducible() {
        assert_eq!(jm_sample(5, 0, 1).unwrap(), LatinSquare::cyclic(5).unwrap());
        let a = jm_sample(7, 500, 42).unwrap();
        a.validate().unwrap();
        assert_eq!(a, jm_sample(7, 500, 42).unwrap());
        let many = jm_samples(6, 8, 200, 3).unwrap();
        assert_eq!(many, jm_samples(6, 8, 200, 3).unwrap());
        assert_eq!(many[2], jm_sample(6, 200, derive_seed(3, 2)).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let l = jm_sample(5, 50, 9).unwrap();
        let back: LatinSquare = l.to_string().parse().unwrap();
        assert_eq!(l, back);
        assert!("0 1\n0 1\n".parse::<LatinSquare>().is_err());
    }

    #[test]
    fn minimizer_at_order_four_respects_census_minimum() {
        let census_min = all_latin_squares(4).unwrap().iter().map(count_cuboctahedra).min().unwrap();
        let r = minimize_cuboctahedra(4, 300, 5).unwrap();
        assert!(r.count >= census_min);
        assert_eq!(r.count, count_cuboctahedra(&r.best));
    }
}
