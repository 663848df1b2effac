//! The blind and perfect-information subset constructions, explored on the
//! fly from the initial support.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ActionId, Mdp, StateId};

/// A set of states stored as its characteristic bit mask. Cells of the
/// subset constructions are the nonempty ones; the numeric order of masks is
/// the canonical cell order.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell(u64);

impl Cell {
    pub const EMPTY: Cell = Cell(0);

    pub const fn from_mask(mask: u64) -> Self {
        Cell(mask)
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub fn singleton(s: StateId) -> Self {
        Cell(1 << s)
    }

    /// The first `n` states.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            Cell(u64::MAX)
        } else {
            Cell((1u64 << n) - 1)
        }
    }

    pub fn from_states(states: impl IntoIterator<Item = StateId>) -> Self {
        Cell(states.into_iter().fold(0, |m, s| m | (1u64 << s)))
    }

    pub fn contains(self, s: StateId) -> bool {
        s < 64 && self.0 & (1 << s) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The unique member of a singleton.
    pub fn single(self) -> Option<StateId> {
        (self.len() == 1).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn union(self, other: Cell) -> Cell {
        Cell(self.0 | other.0)
    }

    pub fn intersection(self, other: Cell) -> Cell {
        Cell(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: Cell) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn insert(&mut self, s: StateId) {
        self.0 |= 1 << s;
    }

    /// Members in increasing order.
    pub fn iter(self) -> CellIter {
        CellIter(self.0)
    }

    /// Position of `s` among the members, if present.
    pub fn rank(self, s: StateId) -> Option<usize> {
        self.contains(s)
            .then(|| (self.0 & ((1u64 << s) - 1)).count_ones() as usize)
    }

    pub fn names(self, mdp: &Mdp) -> Vec<String> {
        self.iter().map(|s| mdp.state_name(s).to_string()).collect()
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl IntoIterator for Cell {
    type Item = StateId;
    type IntoIter = CellIter;
    fn into_iter(self) -> CellIter {
        self.iter()
    }
}

impl FromIterator<StateId> for Cell {
    fn from_iter<I: IntoIterator<Item = StateId>>(iter: I) -> Self {
        Cell::from_states(iter)
    }
}

pub struct CellIter(u64);

impl Iterator for CellIter {
    type Item = StateId;
    fn next(&mut self) -> Option<StateId> {
        if self.0 == 0 {
            return None;
        }
        let s = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(s)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for CellIter {}

/// What the controller observes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Blind,
    Perfect,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Blind => "blind",
            Mode::Perfect => "perfect",
        })
    }
}

/// A symbol of a subset construction. Blind letters are single actions;
/// perfect letters assign an action to each member of one cell and are
/// undefined elsewhere, so letters agreeing on their cell are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    Blind(ActionId),
    Perfect {
        cell: Cell,
        /// One action per member of `cell`, in increasing state order.
        choices: Vec<ActionId>,
    },
}

impl Letter {
    pub fn perfect(cell: Cell, choices: Vec<ActionId>) -> Result<Self> {
        if choices.len() != cell.len() {
            return Err(Error::InvalidParameter(format!(
                "perfect letter needs {} choices, got {}",
                cell.len(),
                choices.len()
            )));
        }
        Ok(Letter::Perfect { cell, choices })
    }

    /// The perfect letter playing `action` everywhere on `cell`.
    pub fn constant(cell: Cell, action: ActionId) -> Self {
        Letter::Perfect {
            cell,
            choices: vec![action; cell.len()],
        }
    }

    pub fn from_fn(cell: Cell, f: impl Fn(StateId) -> ActionId) -> Self {
        Letter::Perfect {
            cell,
            choices: cell.iter().map(f).collect(),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Letter::Blind(_) => Mode::Blind,
            Letter::Perfect { .. } => Mode::Perfect,
        }
    }

    /// The action played in `state`, or `None` off the letter's cell.
    pub fn action_for(&self, state: StateId) -> Option<ActionId> {
        match self {
            Letter::Blind(a) => Some(*a),
            Letter::Perfect { cell, choices } => cell.rank(state).map(|i| choices[i]),
        }
    }

    fn check_covers(&self, mdp: &Mdp, cell: Cell) -> Result<()> {
        match self {
            Letter::Blind(a) if *a >= mdp.num_actions() => Err(Error::ActionOutOfRange(*a)),
            Letter::Blind(_) => Ok(()),
            Letter::Perfect { cell: dom, choices } => {
                if let Some(a) = choices.iter().find(|a| **a >= mdp.num_actions()) {
                    return Err(Error::ActionOutOfRange(*a));
                }
                match cell.iter().find(|s| !dom.contains(*s)) {
                    Some(state) => Err(Error::LetterNotTotal { state }),
                    None => Ok(()),
                }
            }
        }
    }
}

/// One step of a subset construction: the union of the posts of every
/// member of `cell` under the action the letter assigns to it.
pub fn successor(mdp: &Mdp, cell: Cell, letter: &Letter) -> Result<Cell> {
    if cell.is_empty() {
        return Err(Error::InvalidParameter("empty cell".into()));
    }
    if let Some(s) = cell.iter().find(|s| *s >= mdp.num_states()) {
        return Err(Error::StateOutOfRange(s));
    }
    letter.check_covers(mdp, cell)?;
    Ok(cell.iter().fold(Cell::EMPTY, |acc, s| {
        acc.union(mdp.post_of(s, letter.action_for(s).expect("covered")))
    }))
}

/// Every letter usable at `cell`, each exactly once, in canonical order.
/// Perfect letters are counted in mixed radix with the largest member as
/// the fastest digit.
pub fn letters(mdp: &Mdp, cell: Cell, mode: Mode) -> Letters {
    Letters {
        cell,
        mode,
        radix: mdp.num_actions(),
        digits: vec![0; if mode == Mode::Perfect { cell.len() } else { 1 }],
        done: mdp.num_actions() == 0,
    }
}

pub struct Letters {
    cell: Cell,
    mode: Mode,
    radix: usize,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for Letters {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        if self.done {
            return None;
        }
        let out = match self.mode {
            Mode::Blind => Letter::Blind(self.digits[0]),
            Mode::Perfect => Letter::Perfect {
                cell: self.cell,
                choices: self.digits.clone(),
            },
        };
        self.done = true;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.radix {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(out)
    }
}

/// A letter together with its effect on the cell it is played from.
#[derive(Clone, Debug)]
pub(crate) struct Move {
    pub letter: Letter,
    /// Post of each member of the source cell, in member order.
    pub posts: Vec<Cell>,
    pub target: Cell,
}

/// Letters of `cell` up to behavior: two letters whose members have the same
/// posts are interchangeable, and only the canonically first of each class is
/// kept. The order is the canonical letter order restricted to these
/// representatives.
pub(crate) fn moves(mdp: &Mdp, cell: Cell, mode: Mode) -> Vec<Move> {
    let members: Vec<StateId> = cell.iter().collect();
    match mode {
        Mode::Blind => {
            let mut seen: Vec<Vec<Cell>> = Vec::new();
            let mut out = Vec::new();
            for a in 0..mdp.num_actions() {
                let posts: Vec<Cell> = members.iter().map(|s| mdp.post_of(*s, a)).collect();
                if seen.contains(&posts) {
                    continue;
                }
                seen.push(posts.clone());
                let target = posts.iter().fold(Cell::EMPTY, |x, p| x.union(*p));
                out.push(Move {
                    letter: Letter::Blind(a),
                    posts,
                    target,
                });
            }
            out
        }
        Mode::Perfect => {
            // distinct (action, post) options per member, first action wins
            let options: Vec<Vec<(ActionId, Cell)>> = members
                .iter()
                .map(|s| {
                    let mut opts: Vec<(ActionId, Cell)> = Vec::new();
                    for a in 0..mdp.num_actions() {
                        let p = mdp.post_of(*s, a);
                        if !opts.iter().any(|(_, q)| *q == p) {
                            opts.push((a, p));
                        }
                    }
                    opts
                })
                .collect();
            let mut digits = vec![0usize; members.len()];
            let mut out = Vec::new();
            loop {
                let choices = digits.iter().zip(&options).map(|(d, o)| o[*d].0).collect();
                let posts: Vec<Cell> = digits.iter().zip(&options).map(|(d, o)| o[*d].1).collect();
                let target = posts.iter().fold(Cell::EMPTY, |x, p| x.union(*p));
                out.push(Move {
                    letter: Letter::Perfect { cell, choices },
                    posts,
                    target,
                });
                let mut carry = true;
                for (d, o) in digits.iter_mut().zip(&options).rev() {
                    *d += 1;
                    if *d < o.len() {
                        carry = false;
                        break;
                    }
                    *d = 0;
                }
                if carry {
                    break;
                }
            }
            out
        }
    }
}

/// Cells reachable from the initial support together with a shortest access
/// path for each.
#[derive(Clone, Debug)]
pub struct Reachability {
    initial: Cell,
    order: Vec<Cell>,
    parent: HashMap<Cell, Option<(Cell, Letter)>>,
}

impl Reachability {
    pub fn initial(&self) -> Cell {
        self.initial
    }

    /// Cells in discovery (breadth-first) order.
    pub fn cells(&self) -> &[Cell] {
        &self.order
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.parent.contains_key(&cell)
    }

    /// `(cell, letter)` steps leading from the initial support to `target`.
    pub fn path_to(&self, target: Cell) -> Option<Vec<(Cell, Letter)>> {
        let mut cur = target;
        let mut path = Vec::new();
        loop {
            match self.parent.get(&cur)? {
                None => break,
                Some((prev, letter)) => {
                    path.push((*prev, letter.clone()));
                    cur = *prev;
                }
            }
        }
        path.reverse();
        Some(path)
    }
}

/// Breadth-first closure of the subset construction from `Supp(μ₀)`.
/// Letters are tried in canonical order, so ties between shortest paths go
/// to the canonically first letter.
pub fn reachable(mdp: &Mdp, mode: Mode) -> Reachability {
    let initial = mdp.initial_cell();
    let mut parent = HashMap::new();
    parent.insert(initial, None);
    let mut order = vec![initial];
    let mut queue = VecDeque::from([initial]);
    while let Some(cell) = queue.pop_front() {
        for mv in moves(mdp, cell, mode) {
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(mv.target) {
                e.insert(Some((cell, mv.letter)));
                order.push(mv.target);
                queue.push_back(mv.target);
            }
        }
    }
    Reachability {
        initial,
        order,
        parent,
    }
}

/// Follows a letter sequence from `start`.
pub fn replay<'a>(
    mdp: &Mdp,
    start: Cell,
    letters: impl IntoIterator<Item = &'a Letter>,
) -> Result<Cell> {
    letters
        .into_iter()
        .try_fold(start, |c, l| successor(mdp, c, l))
}
