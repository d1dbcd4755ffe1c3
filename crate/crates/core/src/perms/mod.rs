//! Permutations, classical and box patterns, inversion statistics and
//! shattering counts.
//!
//! Permutations are stored in one-line notation with values `1..=n`.
//! A box pattern is a classical pattern with a single marked gap: the two
//! letters on either side of the box must not occupy adjacent positions.

mod avoidance;
mod shatter;

pub use avoidance::{
    avoiders_by_inversions, contains, count_avoiders, dimitrov_triples, growth_estimate,
    wilf_check, GrowthEstimate, InversionTable, Matcher, MonotonicityViolation, WilfTable,
    DEFAULT_EXHAUSTION_LIMIT,
};
pub use shatter::{shatter_search, shattered_ksets, ShatterReport, ShatterSearchResult};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `1..=n` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Permutation {
    entries: Vec<u8>,
}

impl Permutation {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        validate_one_line(&entries)?;
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: (1..=n as u8).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// Entry at 1-based position `i`.
    pub fn at(&self, i: usize) -> u8 {
        self.entries[i - 1]
    }

    pub fn reverse(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.reverse();
        Self { entries }
    }

    pub fn inverse(&self) -> Self {
        let mut entries = vec![0u8; self.len()];
        for (i, &v) in self.entries.iter().enumerate() {
            entries[v as usize - 1] = (i + 1) as u8;
        }
        Self { entries }
    }

    /// The permutation `i -> outer(self(i))`, i.e. values relabelled by `outer`.
    pub fn relabel(&self, outer: &Permutation) -> Self {
        assert_eq!(self.len(), outer.len());
        Self {
            entries: self.entries.iter().map(|&v| outer.at(v as usize)).collect(),
        }
    }

    pub fn inversions(&self) -> u64 {
        inversions(&self.entries)
    }

    /// 1-based position of each value: `positions()[v - 1]`.
    pub fn positions(&self) -> Vec<u8> {
        self.inverse().entries
    }
}

impl TryFrom<Vec<u8>> for Permutation {
    type Error = Error;

    fn try_from(entries: Vec<u8>) -> Result<Self> {
        Permutation::new(entries)
    }
}

impl From<Permutation> for Vec<u8> {
    fn from(p: Permutation) -> Self {
        p.entries
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.entries, None)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s);
        if tokens.iter().any(|t| is_box_token(t)) {
            return Err(Error::parse(format!("permutation `{s}` contains a box")));
        }
        Permutation::new(parse_letters(&tokens)?)
    }
}

/// Number of pairs `i < j` with `p[i] > p[j]`.
pub fn inversions(p: &[u8]) -> u64 {
    let mut count = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                count += 1;
            }
        }
    }
    count
}

/// A pattern with at most one box.
///
/// `gap = Some(t)` places the box between the `t`-th and `(t+1)`-th letters
/// (1-based, `1 <= t < k`); `None` is a classical pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pattern {
    letters: Vec<u8>,
    gap: Option<usize>,
}

impl Pattern {
    pub fn classical(letters: Vec<u8>) -> Result<Self> {
        validate_one_line(&letters)?;
        if letters.is_empty() {
            return Err(Error::invalid("empty pattern"));
        }
        Ok(Self { letters, gap: None })
    }

    pub fn boxed(letters: Vec<u8>, box_position: usize) -> Result<Self> {
        validate_one_line(&letters)?;
        if box_position == 0 || box_position >= letters.len() {
            return Err(Error::invalid(format!(
                "box position {box_position} must lie strictly inside a pattern of length {}",
                letters.len()
            )));
        }
        Ok(Self {
            letters,
            gap: Some(box_position),
        })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn box_position(&self) -> Option<usize> {
        self.gap
    }

    /// The same letters with the box removed.
    pub fn flatten(&self) -> Pattern {
        Pattern {
            letters: self.letters.clone(),
            gap: None,
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.letters, self.gap)
    }
}

impl FromStr for Pattern {
    type Err = Error;

    /// Accepts `"4 _ 1 3 2"`, `"4_132"` or `"4□132"`.
    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s);
        let boxes: Vec<usize> = tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| is_box_token(t))
            .map(|(i, _)| i)
            .collect();
        match boxes.as_slice() {
            [] => Pattern::classical(parse_letters(&tokens)?),
            [b] => {
                let letters: Vec<String> =
                    tokens.iter().filter(|t| !is_box_token(t)).cloned().collect();
                Pattern::boxed(parse_letters(&letters)?, *b)
            }
            _ => Err(Error::parse(format!(
                "pattern `{s}` has more than one box; only one is supported"
            ))),
        }
    }
}

fn is_box_token(t: &str) -> bool {
    t == "_" || t == "□"
}

/// Splits on whitespace; a single run without whitespace is split into
/// characters so that compact forms such as `4_132` also parse.
fn tokenize(s: &str) -> Vec<String> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    if parts.len() == 1 && parts[0].chars().count() > 1 {
        parts[0].chars().map(|c| c.to_string()).collect()
    } else {
        parts.into_iter().map(str::to_owned).collect()
    }
}

fn parse_letters(tokens: &[String]) -> Result<Vec<u8>> {
    tokens
        .iter()
        .map(|t| {
            t.parse::<u8>()
                .map_err(|_| Error::parse(format!("`{t}` is not a permutation letter")))
        })
        .collect()
}

fn validate_one_line(entries: &[u8]) -> Result<()> {
    let n = entries.len();
    if n > u8::MAX as usize {
        return Err(Error::invalid("permutations longer than 255 are not supported"));
    }
    let mut seen = vec![false; n + 1];
    for &v in entries {
        let v = v as usize;
        if v == 0 || v > n || seen[v] {
            return Err(Error::invalid(format!(
                "{entries:?} is not a permutation of 1..={n}"
            )));
        }
        seen[v] = true;
    }
    Ok(())
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[u8], gap: Option<usize>) -> fmt::Result {
    for (i, v) in letters.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        if gap == Some(i) {
            f.write_str("_ ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

/// Advances `a` to the next permutation in lexicographic order; returns
/// `false` (leaving `a` sorted descending) when `a` was the last one.
pub fn next_permutation(a: &mut [u8]) -> bool {
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

/// Calls `f` on every permutation of `1..=n` in lexicographic order.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[u8])) {
    let mut p: Vec<u8> = (1..=n as u8).collect();
    loop {
        f(&p);
        if !next_permutation(&mut p) {
            break;
        }
    }
}

/// All permutations of `1..=n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    for_each_permutation(n, |p| {
        out.push(Permutation {
            entries: p.to_vec(),
        })
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_box_patterns() {
        let q: Pattern = "4 _ 1 3 2".parse().unwrap();
        assert_eq!(q.letters(), &[4, 1, 3, 2]);
        assert_eq!(q.box_position(), Some(1));
        assert_eq!(q.to_string(), "4 _ 1 3 2");
        assert_eq!("4_132".parse::<Pattern>().unwrap(), q);
        assert_eq!("4□132".parse::<Pattern>().unwrap(), q);
        assert_eq!("12_43".parse::<Pattern>().unwrap().box_position(), Some(2));
    }

    #[test]
    fn rejects_malformed_patterns() {
        assert!("_ 1 2".parse::<Pattern>().is_err());
        assert!("1 2 _".parse::<Pattern>().is_err());
        assert!("1 _ 2 _ 3".parse::<Pattern>().is_err());
        assert!("1 3".parse::<Pattern>().is_err());
        assert!("1 1".parse::<Permutation>().is_err());
        assert!("2 _ 1".parse::<Permutation>().is_err());
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(Permutation::identity(5).inversions(), 0);
        assert_eq!("2143".parse::<Permutation>().unwrap().inversions(), 2);
        assert_eq!("4321".parse::<Permutation>().unwrap().inversions(), 6);
    }

    #[test]
    fn lexicographic_enumeration_counts() {
        assert_eq!(all_permutations(4).len(), 24);
        assert_eq!(all_permutations(0).len(), 1);
        let all = all_permutations(4);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn inverse_and_positions() {
        let p: Permutation = "3 1 2".parse().unwrap();
        assert_eq!(p.inverse().entries(), &[2, 3, 1]);
        assert_eq!(p.positions(), vec![2, 3, 1]);
    }
}
