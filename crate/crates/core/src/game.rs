//! The three-peg Towers of Hanoi game.
//!
//! A state lists the peg of each disk, smallest disk first. Move `a` moves the
//! smaller top disk between pegs 2 and 3, `b` between 1 and 3, `c` between 1
//! and 2; on the digit sequence this toggles the first occurrence of either
//! peg of the pair.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automorphism::Vertex;
use crate::error::{Error, Result};
use crate::words::{Letter, Word, WreathRecursion};

/// Largest disk count accepted by [`solve`].
pub const MAX_SOLVE_DISKS: usize = 12;
/// Above this many disks, [`consistency_check`] samples instead of enumerating.
pub const EXHAUSTIVE_LIMIT: usize = 8;
pub const SAMPLES: usize = 100_000;

pub type Move = Letter;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GameState {
    /// Pegs `1..=3`, smallest disk first.
    pegs: Vec<u8>,
}

impl GameState {
    pub fn new(pegs: Vec<u8>) -> Result<Self> {
        if let Some(&p) = pegs.iter().find(|&&p| !(1..=3).contains(&p)) {
            return Err(Error::DigitOutOfRange {
                digit: p as usize,
                arity: 3,
            });
        }
        Ok(GameState { pegs })
    }

    /// All disks on one peg.
    pub fn tower(n: usize, peg: u8) -> Result<Self> {
        GameState::new(vec![peg; n])
    }

    pub fn pegs(&self) -> &[u8] {
        &self.pegs
    }

    pub fn disks(&self) -> usize {
        self.pegs.len()
    }

    pub fn to_vertex(&self) -> Vertex {
        Vertex::from_zero_based(self.pegs.iter().map(|&p| (p - 1) as u32).collect())
    }

    pub fn from_vertex(v: &Vertex) -> Self {
        GameState {
            pegs: v.zero_based().iter().map(|&d| d as u8 + 1).collect(),
        }
    }

    fn index(&self) -> usize {
        self.pegs
            .iter()
            .fold(0, |acc, &p| acc * 3 + (p - 1) as usize)
    }

    fn from_index(n: usize, mut index: usize) -> Self {
        let mut pegs = vec![1u8; n];
        for slot in pegs.iter_mut().rev() {
            *slot = (index % 3) as u8 + 1;
            index /= 3;
        }
        GameState { pegs }
    }
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pegs.iter().map(u8::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for GameState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return GameState::new(Vec::new());
        }
        let pegs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u8>()
                    .map_err(|_| Error::Parse(format!("bad peg {t:?} in state {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        GameState::new(pegs)
    }
}

/// The pegs a move acts on.
pub fn peg_pair(m: Move) -> (u8, u8) {
    match m {
        Letter::A => (2, 3),
        Letter::B => (1, 3),
        Letter::C => (1, 2),
    }
}

pub fn apply_move(s: &GameState, m: Move) -> GameState {
    let (x, y) = peg_pair(m);
    let mut pegs = s.pegs.clone();
    if let Some(p) = pegs.iter_mut().find(|p| **p == x || **p == y) {
        *p = if *p == x { y } else { x };
    }
    GameState { pegs }
}

pub fn apply_word(s: &GameState, w: &Word) -> GameState {
    w.letters()
        .iter()
        .fold(s.clone(), |acc, &m| apply_move(&acc, m))
}

/// Whether the game moves agree with the tree action of `a, b, c` on level `n`:
/// every state when `n <= 8`, a fixed-seed sample of [`SAMPLES`] otherwise.
pub fn consistency_check(n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::Precondition("consistency_check needs n >= 1".into()));
    }
    let rec = WreathRecursion::hanoi();
    let portraits: Vec<_> = Letter::ALL
        .iter()
        .map(|&l| rec.evaluate(&Word::letter(l), n))
        .collect();
    let agrees = |s: &GameState| -> Result<bool> {
        for &m in &Letter::ALL {
            let by_tree = GameState::from_vertex(&portraits[m.index()].apply(&s.to_vertex())?);
            if by_tree != apply_move(s, m) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if n <= EXHAUSTIVE_LIMIT {
        for i in 0..3usize.pow(n as u32) {
            if !agrees(&GameState::from_index(n, i))? {
                return Ok(false);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x4a4e_4f49);
        for _ in 0..SAMPLES {
            let pegs = (0..n).map(|_| rng.gen_range(1..=3u8)).collect();
            if !agrees(&GameState { pegs })? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Per-state distance and `(predecessor, move)`, indexed like [`GameState::index`].
type Search = (Vec<Option<usize>>, Vec<Option<(usize, Move)>>);

/// Distances from `start` to every state, by breadth-first search, with the
/// predecessor move of each reached state.
fn bfs(n: usize, start: &GameState) -> Search {
    let total = 3usize.pow(n as u32);
    let mut dist = vec![None; total];
    let mut parent = vec![None; total];
    let s0 = start.index();
    dist[s0] = Some(0);
    let mut queue = VecDeque::from([s0]);
    while let Some(i) = queue.pop_front() {
        let s = GameState::from_index(n, i);
        let d = dist[i].expect("queued states are reached");
        for m in Letter::ALL {
            let j = apply_move(&s, m).index();
            if dist[j].is_none() {
                dist[j] = Some(d + 1);
                parent[j] = Some((i, m));
                queue.push_back(j);
            }
        }
    }
    (dist, parent)
}

/// Number of states reachable from the all-1 tower.
pub fn reachable_states(n: usize) -> Result<usize> {
    check_solvable(n)?;
    let (dist, _) = bfs(n, &GameState::tower(n, 1)?);
    Ok(dist.iter().filter(|d| d.is_some()).count())
}

fn check_solvable(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SOLVE_DISKS {
        return Err(Error::ResourceCap(format!(
            "solve supports 1..={MAX_SOLVE_DISKS} disks, got {n}"
        )));
    }
    Ok(())
}

/// A shortest move sequence taking all disks from peg 1 to peg 3.
pub fn solve(n: usize) -> Result<Word> {
    check_solvable(n)?;
    let start = GameState::tower(n, 1)?;
    let goal = GameState::tower(n, 3)?.index();
    let (_, parent) = bfs(n, &start);
    let mut moves = Vec::new();
    let mut at = goal;
    while let Some((prev, m)) = parent[at] {
        moves.push(m);
        at = prev;
    }
    moves.reverse();
    Ok(Word::from_letters(moves))
}

/// Moves as single-letter strings, for JSON output.
pub fn move_list(w: &Word) -> Vec<String> {
    w.letters()
        .iter()
        .map(|l| l.as_char().to_string())
        .collect()
}
