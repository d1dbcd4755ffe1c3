//! Package colourings of `ℤ`: colour `s` may repeat only at distance at
//! least `s + 1`.
//!
//! The cooldown state records, for each colour `s`, the distance since its
//! last use capped at `s + 1`. A colouring of `ℤ` restricts to an infinite
//! walk from the all-free state, which must revisit a state; conversely a
//! cycle in the state graph tiles to a periodic colouring, since after one
//! period every used colour carries its true distance. So `S` colours `ℤ`
//! iff a cycle is reachable from the all-free state.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded};

/// Default cap on `∏ (s + 2)`, the size bound used for refusing a search.
pub const DEFAULT_STATE_CAP: u128 = 1_000_000_000_000;

/// The set of colours usable on `ℤ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct ColourBudget(BTreeSet<u32>);

impl ColourBudget {
    pub fn new(colours: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for c in colours {
            if c == 0 {
                return Err(Error::invalid("colours must be positive integers"));
            }
            if !set.insert(c) {
                return Err(Error::invalid(format!("colour {c} repeated")));
            }
        }
        if set.is_empty() {
            return Err(Error::invalid("a colour budget must be nonempty"));
        }
        Ok(Self(set))
    }

    pub fn colours(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &ColourBudget) -> bool {
        self.0.is_subset(&other.0)
    }

    /// `∏ (s + 2)`, saturating.
    pub fn state_bound(&self) -> u128 {
        self.0.iter().fold(1u128, |acc, &s| acc.saturating_mul(s as u128 + 2))
    }
}

impl TryFrom<Vec<u32>> for ColourBudget {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        ColourBudget::new(v)
    }
}

impl From<ColourBudget> for Vec<u32> {
    fn from(b: ColourBudget) -> Self {
        b.0.into_iter().collect()
    }
}

impl fmt::Display for ColourBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `Σ 1/(s+1)`, exactly.
pub fn partial_sum(s: &ColourBudget) -> BigRational {
    s.colours()
        .map(|c| BigRational::new(BigInt::from(1), BigInt::from(c as u64 + 1)))
        .fold(BigRational::zero(), |a, b| a + b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZColouring {
    pub colours: bool,
    /// One period of a periodic colouring, rotated to its lexicographically
    /// least rotation.
    pub certificate: Option<Vec<u32>>,
    pub states_visited: u64,
}

enum Outcome {
    Cycle(Vec<u32>),
    NoCycle,
    /// The visit budget ran out first.
    Undecided,
}

pub fn colours_z(s: &ColourBudget) -> Result<ZColouring> {
    colours_z_with_cap(s, DEFAULT_STATE_CAP)
}

/// Decides whether `S` package-colours `ℤ`, refusing when `∏ (s + 2)`
/// exceeds `cap`. Colours are tried in increasing order, so the certificate
/// is the cycle that the greedy-first search meets first.
pub fn colours_z_with_cap(s: &ColourBudget, cap: u128) -> Result<ZColouring> {
    let bound = s.state_bound();
    if bound > cap {
        return Err(Error::CapExceeded {
            what: "package colouring state space",
            requested: bound,
            cap,
        });
    }
    let mut visited = 0;
    let outcome = search(s, u64::MAX, &mut visited);
    Ok(match outcome {
        Outcome::Cycle(word) => ZColouring {
            colours: true,
            certificate: Some(word),
            states_visited: visited,
        },
        Outcome::NoCycle => ZColouring {
            colours: false,
            certificate: None,
            states_visited: visited,
        },
        Outcome::Undecided => unreachable!("unbounded search always decides"),
    })
}

/// Mixed-radix state: digit `i` is `min(distance, s_i + 1) - 1` for colour
/// `s_i`, so the all-free state has every digit at `s_i`.
struct StateSpace {
    colours: Vec<u32>,
    radix: Vec<u64>,
}

impl StateSpace {
    fn new(s: &ColourBudget) -> Self {
        let colours: Vec<u32> = s.colours().collect();
        let mut radix = Vec::with_capacity(colours.len());
        let mut r = 1u64;
        for &c in &colours {
            radix.push(r);
            r = r.saturating_mul(c as u64 + 1);
        }
        Self { colours, radix }
    }

    fn digit(&self, state: u64, i: usize) -> u64 {
        state / self.radix[i] % (self.colours[i] as u64 + 1)
    }

    fn all_free(&self) -> u64 {
        (0..self.colours.len()).map(|i| self.colours[i] as u64 * self.radix[i]).sum()
    }

    fn can_use(&self, state: u64, i: usize) -> bool {
        self.digit(state, i) == self.colours[i] as u64
    }

    fn after(&self, state: u64, used: usize) -> u64 {
        (0..self.colours.len())
            .map(|i| {
                let d = if i == used {
                    0
                } else {
                    (self.digit(state, i) + 1).min(self.colours[i] as u64)
                };
                d * self.radix[i]
            })
            .sum()
    }
}

fn search(s: &ColourBudget, budget: u64, visited: &mut u64) -> Outcome {
    const ON_STACK: u8 = 1;
    const DONE: u8 = 2;
    let space = StateSpace::new(s);
    let k = space.colours.len();
    let mut status: HashMap<u64, u8> = HashMap::new();
    // (state, next colour index to try, colour used to enter this state)
    let mut stack: Vec<(u64, usize, Option<u32>)> = vec![(space.all_free(), 0, None)];
    status.insert(space.all_free(), ON_STACK);
    *visited = 1;
    while let Some(top) = stack.last_mut() {
        let (state, next) = (top.0, top.1);
        if next == k {
            status.insert(state, DONE);
            stack.pop();
            continue;
        }
        top.1 += 1;
        if !space.can_use(state, next) {
            continue;
        }
        let succ = space.after(state, next);
        match status.get(&succ) {
            Some(&ON_STACK) => {
                let start = stack.iter().position(|e| e.0 == succ).expect("state on stack");
                let mut word: Vec<u32> = stack[start + 1..].iter().map(|e| e.2.expect("entered by a colour")).collect();
                word.push(space.colours[next]);
                return Outcome::Cycle(least_rotation(&word));
            }
            Some(_) => {}
            None => {
                if *visited >= budget {
                    return Outcome::Undecided;
                }
                *visited += 1;
                status.insert(succ, ON_STACK);
                stack.push((succ, 0, Some(space.colours[next])));
            }
        }
    }
    Outcome::NoCycle
}

fn least_rotation(word: &[u32]) -> Vec<u32> {
    (0..word.len())
        .map(|r| word[r..].iter().chain(&word[..r]).copied().collect::<Vec<u32>>())
        .min()
        .unwrap_or_default()
}

/// Whether the periodic tiling of `word` respects every colour's distance,
/// checked over a window of three periods.
pub fn certificate_is_valid(s: &ColourBudget, word: &[u32]) -> bool {
    if word.is_empty() || word.iter().any(|c| !s.0.contains(c)) {
        return false;
    }
    let tiled: Vec<u32> = word.iter().cycle().take(3 * word.len()).copied().collect();
    tiled.iter().enumerate().all(|(i, &c)| {
        (1..=c as usize).all(|d| i < d || tiled[i - d] != c)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeInstance {
    pub budget: ColourBudget,
    pub partial_sum: String,
    pub partial_sum_approx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfimumReport {
    pub samples: usize,
    pub colouring: usize,
    pub non_colouring: usize,
    /// Budget ran out before a decision.
    pub undecided: usize,
    /// Largest `∂(S)` over non-colouring sets: the infimum exceeds it.
    pub lower_bound: Option<ProbeInstance>,
    /// Smallest `∂(S)` over colouring sets seen.
    pub smallest_colouring: Option<ProbeInstance>,
    /// The recorded lower bound after each sample; non-decreasing.
    pub lower_bound_history: Vec<Option<f64>>,
}

fn instance(s: &ColourBudget) -> ProbeInstance {
    let ps = partial_sum(s);
    ProbeInstance {
        budget: s.clone(),
        partial_sum: ps.to_string(),
        partial_sum_approx: ps.to_f64().unwrap_or(f64::NAN),
    }
}

/// Samples budgets with `∂(S) < 2` (the sets `{1}` and `{1,2,3}` first, then
/// random subsets of `1..=16` of size at most 6), deciding each within
/// `visit_budget` states.
pub fn infimum_probe(samples: usize, visit_budget: u64, seed: u64) -> InfimumReport {
    let two = BigRational::from_integer(BigInt::from(2));
    let fixed = [vec![1u32], vec![1, 2, 3]];
    let budgets: Vec<ColourBudget> = (0..samples)
        .map(|i| {
            if let Some(f) = fixed.get(i) {
                return ColourBudget::new(f.clone()).expect("fixed budgets are valid");
            }
            let mut rng = seeded(derive_seed(seed, i as u64));
            loop {
                let size = rng.gen_range(1..=6);
                let set: BTreeSet<u32> = (0..size).map(|_| rng.gen_range(1..=16)).collect();
                let b = ColourBudget(set);
                if partial_sum(&b) < two {
                    return b;
                }
            }
        })
        .collect();
    let outcomes: Vec<Outcome> = budgets
        .par_iter()
        .map(|b| {
            let mut visited = 0;
            search(b, visit_budget, &mut visited)
        })
        .collect();
    let mut report = InfimumReport {
        samples,
        colouring: 0,
        non_colouring: 0,
        undecided: 0,
        lower_bound: None,
        smallest_colouring: None,
        lower_bound_history: Vec::with_capacity(samples),
    };
    let (mut lower, mut smallest): (Option<BigRational>, Option<BigRational>) = (None, None);
    for (b, outcome) in budgets.iter().zip(outcomes) {
        let ps = partial_sum(b);
        match outcome {
            Outcome::NoCycle => {
                report.non_colouring += 1;
                if lower.as_ref().is_none_or(|l| ps > *l) {
                    lower = Some(ps);
                    report.lower_bound = Some(instance(b));
                }
            }
            Outcome::Cycle(_) => {
                report.colouring += 1;
                if smallest.as_ref().is_none_or(|l| ps < *l) {
                    smallest = Some(ps);
                    report.smallest_colouring = Some(instance(b));
                }
            }
            Outcome::Undecided => report.undecided += 1,
        }
        report
            .lower_bound_history
            .push(report.lower_bound.as_ref().map(|p| p.partial_sum_approx));
    }
    report
}
