//! Exact solver for the edge-colouring clique game on `K_n`.
//!
//! RED and BLUE alternately colour uncoloured edges of `K_n`, RED first.
//! When every edge is coloured RED wins iff its largest clique is strictly
//! larger than BLUE's; otherwise BLUE wins, so there are no draws. A colour
//! class with no edges still has a clique of size 1 (a single vertex) when
//! `n >= 1`.
//!
//! The solver is a memoized minimax whose transposition table is keyed by a
//! canonical form of the partially coloured graph: the minimum encoding over
//! all vertex permutations.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tournaments::{pair_count, pair_index};

pub const MAX_VERTICES: usize = 6;
pub const DEFAULT_CAP: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Player {
    Red,
    Blue,
}

impl Player {
    pub fn other(self) -> Self {
        match self {
            Player::Red => Player::Blue,
            Player::Blue => Player::Red,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Red => "RED",
            Player::Blue => "BLUE",
        })
    }
}

/// A position: the red and blue edge sets of `K_n`, as pair-index bitmasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameState {
    n: usize,
    red: u32,
    blue: u32,
}

impl GameState {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::invalid(format!(
                "the game is limited to {MAX_VERTICES} vertices"
            )));
        }
        Ok(Self { n, red: 0, blue: 0 })
    }

    /// A position from explicit edge lists; colour counts must be consistent
    /// with alternating play starting with RED.
    pub fn from_edges(n: usize, red: &[(usize, usize)], blue: &[(usize, usize)]) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for (player, edges) in [(Player::Red, red), (Player::Blue, blue)] {
            for &(u, v) in edges {
                let e = edge_bit(n, u, v)?;
                if (s.red | s.blue) & e != 0 {
                    return Err(Error::invalid(format!("edge {u}-{v} coloured twice")));
                }
                match player {
                    Player::Red => s.red |= e,
                    Player::Blue => s.blue |= e,
                }
            }
        }
        let (r, b) = (s.red.count_ones(), s.blue.count_ones());
        if r != b && r != b + 1 {
            return Err(Error::invalid(format!(
                "{r} red and {b} blue edges cannot arise from alternating play"
            )));
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn to_move(&self) -> Player {
        if self.red.count_ones() == self.blue.count_ones() {
            Player::Red
        } else {
            Player::Blue
        }
    }

    pub fn is_terminal(&self) -> bool {
        (self.red | self.blue).count_ones() as usize == pair_count(self.n)
    }

    pub fn uncoloured(&self) -> u32 {
        full_mask(self.n) & !(self.red | self.blue)
    }

    pub fn play(&self, u: usize, v: usize) -> Result<Self> {
        let e = edge_bit(self.n, u, v)?;
        if self.uncoloured() & e == 0 {
            return Err(Error::invalid(format!("edge {u}-{v} is already coloured")));
        }
        let mut s = *self;
        match self.to_move() {
            Player::Red => s.red |= e,
            Player::Blue => s.blue |= e,
        }
        Ok(s)
    }
}

fn full_mask(n: usize) -> u32 {
    ((1u64 << pair_count(n)) - 1) as u32
}

fn edge_bit(n: usize, u: usize, v: usize) -> Result<u32> {
    if u == v || u >= n || v >= n {
        return Err(Error::invalid(format!("{u}-{v} is not an edge of K_{n}")));
    }
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    Ok(1 << pair_index(n, a, b))
}

fn edge_endpoints(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

/// Size of the largest clique in the graph on `n` vertices with edge mask `edges`.
pub fn clique_number(n: usize, edges: u32) -> usize {
    let mut best = 0;
    for subset in 0u32..1 << n {
        let size = subset.count_ones() as usize;
        if size > best && internal_pairs(n, subset) & !edges == 0 {
            best = size;
        }
    }
    best
}

fn internal_pairs(n: usize, subset: u32) -> u32 {
    let mut mask = 0;
    for i in 0..n {
        for j in i + 1..n {
            if subset >> i & 1 == 1 && subset >> j & 1 == 1 {
                mask |= 1 << pair_index(n, i, j);
            }
        }
    }
    mask
}

pub fn winner_at_end(s: &GameState) -> Result<Player> {
    if !s.is_terminal() {
        return Err(Error::invalid("the game is not over: uncoloured edges remain"));
    }
    Ok(if clique_number(s.n, s.red) > clique_number(s.n, s.blue) {
        Player::Red
    } else {
        Player::Blue
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Move {
    pub player: Player,
    pub u: usize,
    pub v: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub n: usize,
    pub winner: Player,
    /// One optimal line: the winner always keeps a won position, the loser
    /// plays the first move in search order.
    pub principal_variation: Vec<Move>,
    pub positions_stored: usize,
}

/// Which player moves first and wins on a strictly larger clique.
/// `Red` is the game as posed; `Blue` is the same game with colours swapped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rules {
    pub first: Player,
}

impl Default for Rules {
    fn default() -> Self {
        Rules { first: Player::Red }
    }
}

/// How positions are cached during the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Memo {
    None,
    Raw,
    Canonical,
}

pub struct Solver {
    n: usize,
    edges: Vec<(usize, usize)>,
    clique_masks: Vec<(u32, usize)>,
    memo: Memo,
    table: HashMap<u64, bool>,
    /// `perm_tables[p][chunk][byte]`: image of an 8-bit chunk of an edge mask.
    perm_tables: Vec<Vec<[u32; 256]>>,
}

impl Solver {
    pub fn new(n: usize, memo: Memo) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::invalid(format!(
                "the game is limited to {MAX_VERTICES} vertices"
            )));
        }
        let edges = edge_endpoints(n);
        let mut clique_masks: Vec<(u32, usize)> = (0u32..1 << n)
            .map(|s| (internal_pairs(n, s), s.count_ones() as usize))
            .collect();
        clique_masks.sort_by(|a, b| b.1.cmp(&a.1));
        let perm_tables = if memo == Memo::Canonical {
            permutation_tables(n, &edges)
        } else {
            Vec::new()
        };
        Ok(Self {
            n,
            edges,
            clique_masks,
            memo,
            table: HashMap::new(),
            perm_tables,
        })
    }

    fn clique(&self, mask: u32) -> usize {
        self.clique_masks
            .iter()
            .find(|(m, _)| m & !mask == 0)
            .map_or(0, |&(_, k)| k)
    }

    fn apply(&self, p: usize, mask: u32) -> u32 {
        let t = &self.perm_tables[p];
        t[0][(mask & 0xff) as usize] | t[1][(mask >> 8 & 0xff) as usize]
    }

    fn key(&self, first: u32, second: u32) -> u64 {
        match self.memo {
            Memo::Canonical => (0..self.perm_tables.len())
                .map(|p| (self.apply(p, first) as u64) << 32 | self.apply(p, second) as u64)
                .min()
                .expect("identity permutation"),
            _ => (first as u64) << 32 | second as u64,
        }
    }

    /// Uncoloured edges, those touching the most-coloured vertex first.
    fn ordered_moves(&self, first: u32, second: u32) -> Vec<usize> {
        let coloured = first | second;
        let mut degree = vec![0usize; self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if coloured >> e & 1 == 1 {
                degree[u] += 1;
                degree[v] += 1;
            }
        }
        let mut moves: Vec<usize> = (0..self.edges.len())
            .filter(|&e| coloured >> e & 1 == 0)
            .collect();
        moves.sort_by_key(|&e| {
            let (u, v) = self.edges[e];
            std::cmp::Reverse(degree[u].max(degree[v]))
        });
        moves
    }

    /// Whether the player who moved first wins from this position.
    fn first_wins(&mut self, first: u32, second: u32) -> bool {
        let coloured = first | second;
        if coloured.count_ones() as usize == self.edges.len() {
            return self.clique(first) > self.clique(second);
        }
        let key = (self.memo != Memo::None).then(|| self.key(first, second));
        if let Some(k) = key {
            if let Some(&v) = self.table.get(&k) {
                return v;
            }
        }
        let first_to_move = first.count_ones() == second.count_ones();
        let mut value = !first_to_move;
        for e in self.ordered_moves(first, second) {
            let bit = 1 << e;
            let child = if first_to_move {
                self.first_wins(first | bit, second)
            } else {
                self.first_wins(first, second | bit)
            };
            if child == first_to_move {
                value = child;
                break;
            }
        }
        if let Some(k) = key {
            self.table.insert(k, value);
        }
        value
    }

    pub fn solve(&mut self, rules: Rules) -> SolveResult {
        let first_wins = self.first_wins(0, 0);
        let winner = if first_wins { rules.first } else { rules.first.other() };

        let mut pv = Vec::new();
        let (mut first, mut second) = (0u32, 0u32);
        while (first | second).count_ones() as usize != self.edges.len() {
            let first_to_move = first.count_ones() == second.count_ones();
            let moves = self.ordered_moves(first, second);
            let mover_wins = first_to_move == first_wins;
            let chosen = moves
                .iter()
                .copied()
                .find(|&e| {
                    if !mover_wins {
                        return true;
                    }
                    let bit = 1 << e;
                    let v = if first_to_move {
                        self.first_wins(first | bit, second)
                    } else {
                        self.first_wins(first, second | bit)
                    };
                    v == first_wins
                })
                .expect("a non-terminal position has a move");
            let (u, v) = self.edges[chosen];
            let player = if first_to_move { rules.first } else { rules.first.other() };
            pv.push(Move { player, u, v });
            if first_to_move {
                first |= 1 << chosen;
            } else {
                second |= 1 << chosen;
            }
        }
        SolveResult {
            n: self.n,
            winner,
            principal_variation: pv,
            positions_stored: self.table.len(),
        }
    }
}

fn permutation_tables(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<[u32; 256]>> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        let image: Vec<u32> = edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
                1u32 << pair_index(n, a, b)
            })
            .collect();
        let mut chunks = vec![[0u32; 256]; 2];
        for (c, chunk) in chunks.iter_mut().enumerate() {
            for byte in 0..256usize {
                let mut m = 0;
                for bit in 0..8 {
                    let e = c * 8 + bit;
                    if byte >> bit & 1 == 1 && e < image.len() {
                        m |= image[e];
                    }
                }
                chunk[byte] = m;
            }
        }
        out.push(chunks);
        if !next_order(&mut perm) {
            break;
        }
    }
    out
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

/// Solves the game on `K_n` with isomorphism-canonical memoization.
/// `cap` is [`DEFAULT_CAP`] unless the caller opts into `n = 6`.
pub fn solve(n: usize, cap: usize) -> Result<SolveResult> {
    solve_with(n, cap, Rules::default(), Memo::Canonical)
}

pub fn solve_with(n: usize, cap: usize, rules: Rules, memo: Memo) -> Result<SolveResult> {
    let cap = cap.min(MAX_VERTICES);
    if n > cap {
        return Err(Error::CapExceeded {
            what: "clique game vertices",
            requested: n as u128,
            cap: cap as u128,
        });
    }
    Ok(Solver::new(n, memo)?.solve(rules))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminal_examples() {
        let s = GameState::from_edges(2, &[(0, 1)], &[]).unwrap();
        assert_eq!(winner_at_end(&s).unwrap(), Player::Red);

        let s = GameState::from_edges(3, &[(0, 1), (1, 2)], &[(0, 2)]).unwrap();
        assert_eq!(winner_at_end(&s).unwrap(), Player::Blue);

        // red triangle 012; blue edges 03, 13, 23 form a star, clique size 2
        let s = GameState::from_edges(4, &[(0, 1), (0, 2), (1, 2)], &[(0, 3), (1, 3), (2, 3)])
            .unwrap();
        assert_eq!(clique_number(4, s.red), 3);
        assert_eq!(clique_number(4, s.blue), 2);
        assert_eq!(winner_at_end(&s).unwrap(), Player::Red);
    }

    #[test]
    fn every_terminal_position_on_three_vertices_is_blue() {
        for red in 0u32..8 {
            if red.count_ones() != 2 {
                continue;
            }
            let s = GameState { n: 3, red, blue: 7 & !red };
            assert_eq!(winner_at_end(&s).unwrap(), Player::Blue);
        }
    }

    #[test]
    fn non_terminal_is_an_error() {
        let s = GameState::empty(3).unwrap();
        assert!(winner_at_end(&s).is_err());
        assert_eq!(s.to_move(), Player::Red);
        assert_eq!(s.play(0, 1).unwrap().to_move(), Player::Blue);
        assert!(s.play(0, 1).unwrap().play(1, 0).is_err());
    }

    #[test]
    fn empty_colour_class_has_clique_one() {
        assert_eq!(clique_number(4, 0), 1);
        assert_eq!(clique_number(0, 0), 0);
    }

    #[test]
    fn small_boards() {
        assert_eq!(solve(2, DEFAULT_CAP).unwrap().winner, Player::Red);
        assert_eq!(solve(3, DEFAULT_CAP).unwrap().winner, Player::Blue);
    }

    #[test]
    fn solvers_agree_up_to_four() {
        for n in 1..=4 {
            let plain = solve_with(n, 4, Rules::default(), Memo::None).unwrap();
            let raw = solve_with(n, 4, Rules::default(), Memo::Raw).unwrap();
            let canon = solve_with(n, 4, Rules::default(), Memo::Canonical).unwrap();
            assert_eq!(plain.winner, raw.winner);
            assert_eq!(plain.winner, canon.winner);
        }
    }

    #[test]
    fn principal_variation_is_a_legal_game_with_the_stated_winner() {
        let r = solve(4, DEFAULT_CAP).unwrap();
        let mut s = GameState::empty(4).unwrap();
        for m in &r.principal_variation {
            assert_eq!(s.to_move(), m.player);
            s = s.play(m.u, m.v).unwrap();
        }
        assert_eq!(winner_at_end(&s).unwrap(), r.winner);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(solve(6, DEFAULT_CAP).unwrap_err().is_refusal());
        assert!(solve(7, 7).is_err());
    }
}
