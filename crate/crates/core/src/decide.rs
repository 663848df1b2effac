//! Deciding whether a synchronizing strategy exists.
//!
//! The strategy exists iff some accessible closed walk of the subset
//! construction has a unique minimal recurrent cyclic set that is all
//! singletons (strong) or has a singleton component (weak). Closed walks are
//! not necessarily simple, so [`decide`] searches, for each reachable anchor
//! cell `s₀`, the finite graph whose nodes are relations from `s₀` to the
//! current cell: a walk's effect on every later question is captured by that
//! relation, so visiting each node once is exhaustive.
//!
//! For the weak objective the search only accepts walks whose singleton
//! component sits at the anchor. That loses nothing: rotating a witness so it
//! starts at its singleton component yields a witness anchored at a
//! reachable cell. For the strong objective each node also records which
//! anchor states have had a singleton image at every step so far.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::cycles::{
    delta, delta_bruteforce, family_is_witness, minimal_fixed_points, Cycle, CyclicFamily,
    Objective, BRUTEFORCE_LIMIT,
};
use crate::error::{Error, Result};
use crate::model::Mdp;
use crate::subset::{moves, reachable, successor, Cell, Letter, Mode, Move};

pub const DEFAULT_NODE_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecideConfig {
    /// Search nodes allowed per anchor before giving up.
    pub node_cap: usize,
}

impl Default for DecideConfig {
    fn default() -> Self {
        Self {
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Answer {
    Yes,
    No,
    /// The node cap was hit before the search could conclude.
    InconclusiveLimit,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::InconclusiveLimit => "inconclusive-limit",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub reachable_cells: usize,
    pub anchors_explored: usize,
    pub nodes_explored: usize,
    pub wall_time: Duration,
}

/// An accessible cycle meeting the witness condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// `(cell, letter)` steps from the initial support to the cycle start.
    pub access_path: Vec<(Cell, Letter)>,
    pub cycle: Cycle,
    pub delta: CyclicFamily,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub answer: Answer,
    pub mode: Mode,
    pub objective: Objective,
    pub witness: Option<Witness>,
    pub stats: SearchStats,
}

struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Self {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    fn elapsed(&self) -> Duration {
        #[cfg(not(target_arch = "wasm32"))]
        return self.start.elapsed();
        #[cfg(target_arch = "wasm32")]
        Duration::ZERO
    }
}

#[derive(Default)]
struct MoveCache {
    mode: Option<Mode>,
    map: HashMap<Cell, Vec<Move>>,
}

impl MoveCache {
    fn get(&mut self, mdp: &Mdp, cell: Cell, mode: Mode) -> &[Move] {
        debug_assert!(self.mode.is_none_or(|m| m == mode));
        self.mode = Some(mode);
        self.map
            .entry(cell)
            .or_insert_with(|| moves(mdp, cell, mode))
    }
}

/// Anchors in increasing size, then canonical order.
fn anchors(mdp: &Mdp, mode: Mode) -> (crate::subset::Reachability, Vec<Cell>) {
    let reach = reachable(mdp, mode);
    let mut cells = reach.cells().to_vec();
    cells.sort_by_key(|c| (c.len(), c.mask()));
    (reach, cells)
}

/// Applies a move to a relation from the anchor: each row is replaced by the
/// union of the posts of its members.
fn advance(rel: &[Cell], from: Cell, mv: &Move) -> Vec<Cell> {
    let mut post = [Cell::EMPTY; 64];
    for (s, p) in from.iter().zip(&mv.posts) {
        post[s] = *p;
    }
    rel.iter()
        .map(|r| r.iter().fold(Cell::EMPTY, |acc, s| acc.union(post[s])))
        .collect()
}

fn union_all(rel: &[Cell]) -> Cell {
    rel.iter().fold(Cell::EMPTY, |acc, c| acc.union(*c))
}

enum AnchorOutcome {
    Found(Vec<Letter>),
    Exhausted,
    Limit,
}

struct SearchNode {
    cell: Cell,
    parent: usize,
    /// Index into the move list of the parent's cell.
    step: usize,
}

fn search_anchor(
    mdp: &Mdp,
    anchor: Cell,
    mode: Mode,
    objective: Objective,
    config: &DecideConfig,
    cache: &mut MoveCache,
    explored: &mut usize,
) -> AnchorOutcome {
    let members: Vec<usize> = anchor.iter().collect();
    let ident: Vec<Cell> = members.iter().map(|s| Cell::singleton(*s)).collect();
    let all_alive = match objective {
        Objective::Strong => Cell::full(members.len()).mask(),
        Objective::Weak => 0,
    };

    let mut nodes = vec![SearchNode {
        cell: anchor,
        parent: usize::MAX,
        step: 0,
    }];
    let mut rels: Vec<(Vec<Cell>, u64)> = vec![(ident.clone(), all_alive)];
    let mut seen: HashMap<(Vec<Cell>, u64), usize> = HashMap::new();
    seen.insert((ident, all_alive), 0);
    let mut queue = VecDeque::from([0usize]);

    let letters_to = |nodes: &[SearchNode], cache: &mut MoveCache, mut i: usize, last: Letter| {
        let mut out = vec![last];
        while nodes[i].parent != usize::MAX {
            let p = nodes[i].parent;
            let mv = &cache.get(mdp, nodes[p].cell, mode)[nodes[i].step];
            out.push(mv.letter.clone());
            i = p;
        }
        out.reverse();
        out
    };

    while let Some(i) = queue.pop_front() {
        let cell = nodes[i].cell;
        let (rel, alive) = rels[i].clone();
        let n_moves = cache.get(mdp, cell, mode).len();
        for m in 0..n_moves {
            let mv = &cache.get(mdp, cell, mode)[m];
            let next = advance(&rel, cell, mv);
            let next_alive = match objective {
                Objective::Strong => {
                    let mut a = alive;
                    for (k, r) in next.iter().enumerate() {
                        if r.len() != 1 {
                            a &= !(1 << k);
                        }
                    }
                    a
                }
                Objective::Weak => 0,
            };
            let target = mv.target;
            if target == anchor && closes(anchor, &members, &next, next_alive, objective) {
                let last = mv.letter.clone();
                return AnchorOutcome::Found(letters_to(&nodes, cache, i, last));
            }
            if let Entry::Vacant(e) = seen.entry((next.clone(), next_alive)) {
                e.insert(nodes.len());
                nodes.push(SearchNode {
                    cell: target,
                    parent: i,
                    step: m,
                });
                rels.push((next, next_alive));
                queue.push_back(nodes.len() - 1);
                *explored += 1;
                if nodes.len() > config.node_cap {
                    return AnchorOutcome::Limit;
                }
            }
        }
    }
    AnchorOutcome::Exhausted
}

/// Acceptance test for a closed walk with round-trip relation `rel`.
fn closes(anchor: Cell, members: &[usize], rel: &[Cell], alive: u64, objective: Objective) -> bool {
    let image = |x: Cell| {
        x.iter().fold(Cell::EMPTY, |acc, s| {
            acc.union(rel[anchor.rank(s).expect("image stays in the anchor")])
        })
    };
    debug_assert_eq!(union_all(rel), anchor);
    let fixed = minimal_fixed_points(anchor, image);
    let [g0] = fixed.as_slice() else {
        return false;
    };
    let Some(l0) = g0.single() else {
        return false;
    };
    match objective {
        Objective::Weak => true,
        Objective::Strong => {
            let k = members.iter().position(|s| *s == l0).expect("member");
            alive & (1 << k) != 0
        }
    }
}

fn build_witness(
    mdp: &Mdp,
    reach: &crate::subset::Reachability,
    anchor: Cell,
    letters: Vec<Letter>,
) -> Witness {
    let cycle = Cycle::from_letters(mdp, anchor, letters).expect("search follows successors");
    let delta = delta(mdp, &cycle);
    Witness {
        access_path: reach.path_to(anchor).expect("anchor is reachable"),
        cycle,
        delta,
    }
}

/// Exact decision by the relation-product search. Anchors are tried in
/// increasing size and the first witness wins.
pub fn decide(mdp: &Mdp, mode: Mode, objective: Objective, config: &DecideConfig) -> Verdict {
    let clock = Stopwatch::start();
    let (reach, anchors) = anchors(mdp, mode);
    let mut stats = SearchStats {
        reachable_cells: anchors.len(),
        ..Default::default()
    };
    let mut cache = MoveCache::default();
    let mut hit_limit = false;
    let mut witness = None;
    for anchor in anchors {
        stats.anchors_explored += 1;
        match search_anchor(
            mdp,
            anchor,
            mode,
            objective,
            config,
            &mut cache,
            &mut stats.nodes_explored,
        ) {
            AnchorOutcome::Found(letters) => {
                witness = Some(build_witness(mdp, &reach, anchor, letters));
                break;
            }
            AnchorOutcome::Exhausted => {}
            AnchorOutcome::Limit => hit_limit = true,
        }
    }
    let answer = match (&witness, hit_limit) {
        (Some(_), _) => Answer::Yes,
        (None, true) => Answer::InconclusiveLimit,
        (None, false) => Answer::No,
    };
    stats.wall_time = clock.elapsed();
    Verdict {
        answer,
        mode,
        objective,
        witness,
        stats,
    }
}

/// Anchors up to this size are searched with subset bookkeeping and
/// deduplication; larger ones fall back to plain walk enumeration.
const BOUNDED_DEDUP_LIMIT: usize = 12;

/// Enumerates accessible closed walks of length at most `bound` and checks
/// each with [`crate::cycles::is_witness`]. A `No` only means "none within
/// the bound".
///
/// Walk prefixes are merged when they agree on the relation from the anchor
/// and on, for every subset of the anchor, whether its image has been a
/// singleton at some step and whether it has been one at every step; those
/// facts decide the witness condition for every continuation. Breadth-first
/// order keeps the shortest representative.
pub fn bounded_cycle_search(mdp: &Mdp, mode: Mode, objective: Objective, bound: usize) -> Verdict {
    let clock = Stopwatch::start();
    let (reach, anchors) = anchors(mdp, mode);
    let mut stats = SearchStats {
        reachable_cells: anchors.len(),
        ..Default::default()
    };
    let mut cache = MoveCache::default();
    let mut witness = None;
    if bound > 0 {
        for anchor in anchors {
            stats.anchors_explored += 1;
            let found = if anchor.len() <= BOUNDED_DEDUP_LIMIT {
                bounded_dedup(mdp, anchor, mode, objective, bound, &mut cache, &mut stats)
            } else {
                let mut path = Vec::new();
                bounded_plain(
                    mdp, anchor, anchor, mode, objective, bound, &mut cache, &mut path, &mut stats,
                )
            };
            if let Some(cycle) = found {
                let delta = delta(mdp, &cycle);
                witness = Some(Witness {
                    access_path: reach.path_to(anchor).expect("reachable"),
                    cycle,
                    delta,
                });
                break;
            }
        }
    }
    stats.wall_time = clock.elapsed();
    Verdict {
        answer: if witness.is_some() {
            Answer::Yes
        } else {
            Answer::No
        },
        mode,
        objective,
        witness,
        stats,
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct BoundedKey {
    rel: Vec<Cell>,
    /// Bit `x` set iff the image of subset `x` has been a singleton at some
    /// step (subsets indexed by their bit pattern over the anchor members).
    ever: Vec<u64>,
    /// Bit `x` set iff the image of subset `x` has been a singleton at every
    /// step.
    always: Vec<u64>,
}

fn subset_images(rel: &[Cell]) -> Vec<Cell> {
    let k = rel.len();
    let mut img = vec![Cell::EMPTY; 1 << k];
    for x in 1..(1usize << k) {
        let low = x.trailing_zeros() as usize;
        img[x] = img[x & (x - 1)].union(rel[low]);
    }
    img
}

fn singleton_bits(img: &[Cell]) -> Vec<u64> {
    let mut bits = vec![0u64; img.len().div_ceil(64)];
    for (x, c) in img.iter().enumerate() {
        if c.len() == 1 {
            bits[x / 64] |= 1 << (x % 64);
        }
    }
    bits
}

fn bounded_dedup(
    mdp: &Mdp,
    anchor: Cell,
    mode: Mode,
    objective: Objective,
    bound: usize,
    cache: &mut MoveCache,
    stats: &mut SearchStats,
) -> Option<Cycle> {
    let rel: Vec<Cell> = anchor.iter().map(Cell::singleton).collect();
    let single = singleton_bits(&subset_images(&rel));
    let start = BoundedKey {
        rel,
        ever: single.clone(),
        always: single,
    };
    // (key, cell, depth, parent, letter leading here)
    let mut nodes: Vec<(BoundedKey, Cell, usize, usize, Option<Letter>)> =
        vec![(start.clone(), anchor, 0, usize::MAX, None)];
    let mut seen: HashMap<BoundedKey, ()> = HashMap::new();
    seen.insert(start, ());
    let mut head = 0;
    while head < nodes.len() {
        let i = head;
        head += 1;
        let (key, cell, depth) = (nodes[i].0.clone(), nodes[i].1, nodes[i].2);
        if depth == bound {
            continue;
        }
        let mvs = cache.get(mdp, cell, mode).to_vec();
        for mv in mvs {
            let rel = advance(&key.rel, cell, &mv);
            let single = singleton_bits(&subset_images(&rel));
            let next = BoundedKey {
                ever: key.ever.iter().zip(&single).map(|(a, b)| a | b).collect(),
                always: key.always.iter().zip(&single).map(|(a, b)| a & b).collect(),
                rel,
            };
            if mv.target == anchor {
                let mut letters = vec![mv.letter.clone()];
                let mut j = i;
                while let Some(l) = &nodes[j].4 {
                    letters.push(l.clone());
                    j = nodes[j].3;
                }
                letters.reverse();
                let cycle = Cycle::from_letters(mdp, anchor, letters).expect("valid walk");
                if crate::cycles::is_witness(mdp, &cycle, objective) {
                    return Some(cycle);
                }
            }
            if seen.insert(next.clone(), ()).is_none() {
                stats.nodes_explored += 1;
                nodes.push((next, mv.target, depth + 1, i, Some(mv.letter)));
            }
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn bounded_plain(
    mdp: &Mdp,
    anchor: Cell,
    cell: Cell,
    mode: Mode,
    objective: Objective,
    remaining: usize,
    cache: &mut MoveCache,
    path: &mut Vec<Letter>,
    stats: &mut SearchStats,
) -> Option<Cycle> {
    if remaining == 0 {
        return None;
    }
    let mvs = cache.get(mdp, cell, mode).to_vec();
    for mv in mvs {
        stats.nodes_explored += 1;
        path.push(mv.letter.clone());
        if mv.target == anchor {
            let cycle = Cycle::from_letters(mdp, anchor, path.clone()).expect("valid walk");
            if crate::cycles::is_witness(mdp, &cycle, objective) {
                return Some(cycle);
            }
        }
        if let Some(c) = bounded_plain(
            mdp,
            anchor,
            mv.target,
            mode,
            objective,
            remaining - 1,
            cache,
            path,
            stats,
        ) {
            return Some(c);
        }
        path.pop();
    }
    None
}

/// Independent re-check of a witness: replays the access path, revalidates
/// every cycle edge, recomputes Δ (by enumeration when the start cell is
/// small enough) and re-tests the singleton condition.
pub fn verify_witness(
    mdp: &Mdp,
    witness: &Witness,
    mode: Mode,
    objective: Objective,
) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidWitness(msg));
    let letters = witness
        .access_path
        .iter()
        .map(|(_, l)| l)
        .chain(witness.cycle.letters());
    if let Some(l) = letters.clone().find(|l| l.mode() != mode) {
        return bad(format!("letter {l:?} does not belong to {mode} mode"));
    }
    let mut cur = mdp.initial_cell();
    for (i, (cell, letter)) in witness.access_path.iter().enumerate() {
        if *cell != cur {
            return bad(format!(
                "access step {i} starts at {cell:?}, expected {cur:?}"
            ));
        }
        cur = match successor(mdp, cur, letter) {
            Ok(c) => c,
            Err(e) => return bad(format!("access step {i}: {e}")),
        };
    }
    if cur != witness.cycle.start() {
        return bad(format!(
            "access path ends at {cur:?}, cycle starts at {:?}",
            witness.cycle.start()
        ));
    }
    let cells = witness.cycle.cells();
    for (j, letter) in witness.cycle.letters().iter().enumerate() {
        match successor(mdp, cells[j], letter) {
            Ok(next) if next == cells[j + 1] => {}
            Ok(next) => {
                return bad(format!(
                    "cycle edge {j}: {:?} leads to {next:?}, expected {:?}",
                    cells[j],
                    cells[j + 1]
                ))
            }
            Err(e) => return bad(format!("cycle edge {j}: {e}")),
        }
    }
    let recomputed = if witness.cycle.start().len() <= BRUTEFORCE_LIMIT {
        delta_bruteforce(mdp, &witness.cycle, BRUTEFORCE_LIMIT)?
    } else {
        delta(mdp, &witness.cycle)
    };
    if recomputed != witness.delta {
        return bad("recorded family differs from the recomputed one".into());
    }
    if !family_is_witness(&recomputed, objective) {
        return bad(format!(
            "{} members; singleton condition for {objective} not met",
            recomputed.len()
        ));
    }
    Ok(())
}
