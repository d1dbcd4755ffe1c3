use rand::seq::SliceRandom;
use serde::Serialize;

use super::{all_permutations, Permutation};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShatterReport {
    pub k: usize,
    /// Shattered subsets of `1..=n`, each sorted, in lexicographic order.
    pub sets: Vec<Vec<u8>>,
    pub count: usize,
}

/// Subsets `X` of size `k` such that every one of the `k!` orders of `X`
/// appears in some member of `family`.
pub fn shattered_ksets(family: &[Permutation], k: usize) -> Result<ShatterReport> {
    let n = family.first().map_or(0, Permutation::len);
    if family.iter().any(|p| p.len() != n) {
        return Err(Error::invalid("family members have different lengths"));
    }
    if k > n {
        return Err(Error::invalid(format!("k = {k} exceeds n = {n}")));
    }
    if k > 8 {
        return Err(Error::invalid("shattering is only supported for k <= 8"));
    }
    let positions: Vec<Vec<u8>> = family.iter().map(Permutation::positions).collect();
    let sets: Vec<Vec<u8>> = combinations(n, k)
        .into_iter()
        .filter(|set| shatters(&positions, set))
        .map(|set| set.iter().map(|&v| v + 1).collect())
        .collect();
    let count = sets.len();
    Ok(ShatterReport { k, sets, count })
}

fn shatters(positions: &[Vec<u8>], set: &[u8]) -> bool {
    let k = set.len();
    let needed = factorial(k);
    if positions.len() < needed {
        return false;
    }
    let mut seen = vec![false; needed];
    let mut distinct = 0;
    for pos in positions {
        let rank = order_rank(set.iter().map(|&v| pos[v as usize]));
        if !seen[rank] {
            seen[rank] = true;
            distinct += 1;
        }
    }
    distinct == needed
}

/// Lehmer rank of the relative order of the given (distinct) keys.
fn order_rank(keys: impl Iterator<Item = u8>) -> usize {
    let keys: Vec<u8> = keys.collect();
    let k = keys.len();
    let mut rank = 0;
    for i in 0..k {
        let smaller_after = keys[i + 1..].iter().filter(|&&x| x < keys[i]).count();
        rank = rank * (k - i) + smaller_after;
    }
    rank
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v as u8);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShatterSearchResult {
    pub n: usize,
    pub family: Vec<Permutation>,
    /// Number of shattered triples; a lower bound for the optimum.
    pub count: usize,
    pub evaluations: u64,
    pub restarts: u64,
}

/// Random-restart hill climbing for a family of `family_size` permutations
/// of `1..=n` shattering many triples.
///
/// A move replaces one member. Moves are scanned in order (member index,
/// then replacement in lexicographic order) and the first strict
/// improvement is taken. For `n <= 7` every permutation is a candidate
/// replacement; beyond that each sweep draws a fresh random candidate pool.
/// `budget` counts family evaluations.
pub fn shatter_search(
    n: usize,
    family_size: usize,
    budget: u64,
    seed: u64,
) -> Result<ShatterSearchResult> {
    if n < 3 {
        return Err(Error::invalid("shatter search needs n >= 3"));
    }
    if n <= 8 && family_size > factorial(n) {
        return Err(Error::invalid(format!(
            "a family of {family_size} distinct permutations of {n} does not exist"
        )));
    }
    let mut rng = rng::seeded(seed);
    let exhaustive_pool = (n <= 7).then(|| all_permutations(n));
    let eval = |family: &[Permutation]| {
        shattered_ksets(family, 3)
            .expect("family is well formed")
            .count
    };

    let mut best: Option<(Vec<Permutation>, usize)> = None;
    let mut evaluations = 0u64;
    let mut restarts = 0u64;
    'outer: while evaluations < budget {
        let mut family = random_family(n, family_size, &mut rng);
        let mut score = eval(&family);
        evaluations += 1;
        loop {
            let pool = match &exhaustive_pool {
                Some(pool) => pool.clone(),
                None => {
                    let mut pool: Vec<Permutation> =
                        (0..256).map(|_| random_permutation(n, &mut rng)).collect();
                    pool.sort();
                    pool.dedup();
                    pool
                }
            };
            let mut improved = false;
            'scan: for i in 0..family.len() {
                for cand in &pool {
                    if family.contains(cand) {
                        continue;
                    }
                    if evaluations >= budget {
                        record(&mut best, &family, score);
                        break 'outer;
                    }
                    let old = std::mem::replace(&mut family[i], cand.clone());
                    let s = eval(&family);
                    evaluations += 1;
                    if s > score {
                        score = s;
                        improved = true;
                        break 'scan;
                    }
                    family[i] = old;
                }
            }
            if !improved {
                break;
            }
        }
        record(&mut best, &family, score);
        restarts += 1;
    }
    let (family, count) = best.unwrap_or_else(|| {
        let family = random_family(n, family_size, &mut rng);
        let c = eval(&family);
        (family, c)
    });
    Ok(ShatterSearchResult {
        n,
        family,
        count,
        evaluations,
        restarts,
    })
}

fn record(best: &mut Option<(Vec<Permutation>, usize)>, family: &[Permutation], score: usize) {
    if best.as_ref().is_none_or(|(_, s)| score > *s) {
        *best = Some((family.to_vec(), score));
    }
}

fn random_permutation(n: usize, rng: &mut rng::WorkbenchRng) -> Permutation {
    let mut entries: Vec<u8> = (1..=n as u8).collect();
    entries.shuffle(rng);
    Permutation::new(entries).expect("shuffle of identity")
}

fn random_family(n: usize, size: usize, rng: &mut rng::WorkbenchRng) -> Vec<Permutation> {
    let mut family: Vec<Permutation> = Vec::with_capacity(size);
    while family.len() < size {
        let p = random_permutation(n, rng);
        if !family.contains(&p) {
            family.push(p);
        }
    }
    family
}
