//! Cycles of the subset constructions and their minimal recurrent cyclic
//! sets.
//!
//! A recurrent cyclic set of a cycle `s₀ σ₀ s₁ … s_d` is a sequence
//! `g₀ … g_d` of nonempty subsets `gᵢ ⊆ sᵢ` with `g₀ = g_d` in which every
//! `g_{i+1}` is exactly the image of `gᵢ` under the step relation of `σᵢ`.
//! Such a sequence is determined by `g₀`, and `g₀` must be a fixed point of
//! the round-trip image map `F`. Since `F` is monotone and distributes over
//! unions, every minimal fixed point `V` satisfies `V = U_ℓ` for each
//! `ℓ ∈ V`, where `U_ℓ` is the union of the periodic part of the orbit
//! `{ℓ}, F({ℓ}), F²({ℓ}), …`. [`delta`] therefore only needs one orbit per
//! state of `s₀`; [`delta_bruteforce`] enumerates subsets instead and serves
//! as its oracle.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Mdp, StateId};
use crate::subset::{successor, Cell, Letter};

/// Default cap on `|s₀|` for [`delta_bruteforce`].
pub const BRUTEFORCE_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Strong,
    Weak,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Strong => "strong",
            Objective::Weak => "weak",
        })
    }
}

/// A boolean relation over states with one successor mask per source.
/// Rows outside `domain` are empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransitionRelation {
    domain: Cell,
    rows: Vec<Cell>,
}

impl TransitionRelation {
    pub fn identity(num_states: usize, domain: Cell) -> Self {
        let mut rows = vec![Cell::EMPTY; num_states];
        for s in domain {
            rows[s] = Cell::singleton(s);
        }
        Self { domain, rows }
    }

    pub fn domain(&self) -> Cell {
        self.domain
    }

    pub fn row(&self, s: StateId) -> Cell {
        self.rows[s]
    }

    pub fn contains(&self, from: StateId, to: StateId) -> bool {
        self.rows[from].contains(to)
    }

    /// Image of a subset of the domain.
    pub fn image(&self, set: Cell) -> Cell {
        set.iter()
            .fold(Cell::EMPTY, |acc, s| acc.union(self.rows[s]))
    }

    /// Union of all rows.
    pub fn range(&self) -> Cell {
        self.image(self.domain)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &TransitionRelation) -> TransitionRelation {
        let rows = self.rows.iter().map(|r| next.image(*r)).collect();
        TransitionRelation {
            domain: self.domain,
            rows,
        }
    }

    /// Pairs `(from, to)` in row-major order.
    pub fn pairs(&self) -> Vec<(StateId, StateId)> {
        self.domain
            .iter()
            .flat_map(|s| self.rows[s].iter().map(move |t| (s, t)))
            .collect()
    }
}

/// `ℓ → ℓ′` iff `ℓ′` is in the post of `ℓ` under the action the letter
/// assigns to `ℓ`.
pub fn step_relation(mdp: &Mdp, cell: Cell, letter: &Letter) -> Result<TransitionRelation> {
    successor(mdp, cell, letter)?;
    let mut rows = vec![Cell::EMPTY; mdp.num_states()];
    for s in cell {
        rows[s] = mdp.post_of(s, letter.action_for(s).expect("checked by successor"));
    }
    Ok(TransitionRelation { domain: cell, rows })
}

/// A closed walk `s₀ σ₀ s₁ … σ_{d−1} s_d` with `s₀ = s_d` and `d ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    cells: Vec<Cell>,
    letters: Vec<Letter>,
}

impl Cycle {
    /// `cells` has `d + 1` entries, `letters` has `d`.
    pub fn new(mdp: &Mdp, cells: Vec<Cell>, letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidCycle("length must be at least 1".into()));
        }
        if cells.len() != letters.len() + 1 {
            return Err(Error::InvalidCycle(format!(
                "{} cells for {} letters",
                cells.len(),
                letters.len()
            )));
        }
        if cells[0] != cells[cells.len() - 1] {
            return Err(Error::InvalidCycle(
                "last cell differs from the first".into(),
            ));
        }
        for (j, letter) in letters.iter().enumerate() {
            let next = successor(mdp, cells[j], letter)?;
            if next != cells[j + 1] {
                return Err(Error::InvalidCycle(format!(
                    "step {j}: letter leads to {next:?}, not {:?}",
                    cells[j + 1]
                )));
            }
        }
        Ok(Self { cells, letters })
    }

    /// Builds the cycle from its start cell by following `letters`.
    pub fn from_letters(mdp: &Mdp, start: Cell, letters: Vec<Letter>) -> Result<Self> {
        let mut cells = vec![start];
        for l in &letters {
            let next = successor(mdp, *cells.last().expect("nonempty"), l)?;
            cells.push(next);
        }
        Self::new(mdp, cells, letters)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> Cell {
        self.cells[0]
    }

    /// All `d + 1` cells.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    fn step_relations(&self, mdp: &Mdp) -> Vec<TransitionRelation> {
        self.cells
            .iter()
            .zip(&self.letters)
            .map(|(c, l)| step_relation(mdp, *c, l).expect("cycle validated on construction"))
            .collect()
    }
}

/// Composition of the step relations around the cycle, with domain `s₀`.
pub fn round_trip(mdp: &Mdp, cycle: &Cycle) -> TransitionRelation {
    let steps = cycle.step_relations(mdp);
    let id = TransitionRelation::identity(mdp.num_states(), cycle.start());
    steps.iter().fold(id, |acc, r| acc.then(r))
}

/// A set of recurrent cyclic sets, each stored as its full sequence
/// `g₀ … g_d`. Kept sorted so that equality is set equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicFamily {
    members: Vec<Vec<Cell>>,
}

impl CyclicFamily {
    pub fn new(mut members: Vec<Vec<Cell>>) -> Self {
        members.sort();
        members.dedup();
        Self { members }
    }

    pub fn members(&self) -> &[Vec<Cell>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The member when there is exactly one.
    pub fn unique(&self) -> Option<&[Cell]> {
        match self.members.as_slice() {
            [g] => Some(g),
            _ => None,
        }
    }
}

/// Minimal fixed points of a monotone, union-distributive map on subsets of
/// `domain`, via one orbit per member. Sorted by mask.
pub(crate) fn minimal_fixed_points(domain: Cell, image: impl Fn(Cell) -> Cell) -> Vec<Cell> {
    let mut unions: Vec<Cell> = Vec::new();
    for s in domain {
        let mut seen: HashMap<Cell, usize> = HashMap::new();
        let mut orbit = vec![Cell::singleton(s)];
        seen.insert(orbit[0], 0);
        let start = loop {
            let next = image(*orbit.last().expect("nonempty"));
            if let Some(&i) = seen.get(&next) {
                break i;
            }
            seen.insert(next, orbit.len());
            orbit.push(next);
        };
        let u = orbit[start..]
            .iter()
            .fold(Cell::EMPTY, |acc, c| acc.union(*c));
        if !unions.contains(&u) {
            unions.push(u);
        }
    }
    let mut minimal: Vec<Cell> = unions
        .iter()
        .copied()
        .filter(|u| !unions.iter().any(|v| v != u && v.is_subset_of(*u)))
        .collect();
    minimal.sort();
    minimal
}

fn expand(steps: &[TransitionRelation], g0: Cell) -> Vec<Cell> {
    let mut seq = vec![g0];
    for r in steps {
        let next = r.image(*seq.last().expect("nonempty"));
        seq.push(next);
    }
    seq
}

/// The family Δ of minimal recurrent cyclic sets, by orbit unions.
pub fn delta(mdp: &Mdp, cycle: &Cycle) -> CyclicFamily {
    let steps = cycle.step_relations(mdp);
    let rt = round_trip(mdp, cycle);
    let members = minimal_fixed_points(cycle.start(), |x| rt.image(x))
        .into_iter()
        .map(|g0| expand(&steps, g0))
        .collect();
    CyclicFamily::new(members)
}

/// Δ by enumerating every nonempty `g₀ ⊆ s₀`. Refuses start cells larger
/// than `limit`.
pub fn delta_bruteforce(mdp: &Mdp, cycle: &Cycle, limit: usize) -> Result<CyclicFamily> {
    let s0 = cycle.start();
    if s0.len() > limit {
        return Err(Error::OracleScope {
            size: s0.len(),
            limit,
        });
    }
    let steps = cycle.step_relations(mdp);
    let full = s0.mask();
    let mut recurrent: Vec<Vec<Cell>> = Vec::new();
    let mut sub = full;
    while sub != 0 {
        let seq = expand(&steps, Cell::from_mask(sub));
        let closes = seq[0] == seq[seq.len() - 1];
        let within = seq
            .iter()
            .zip(cycle.cells())
            .all(|(g, s)| !g.is_empty() && g.is_subset_of(*s));
        if closes && within {
            recurrent.push(seq);
        }
        sub = (sub - 1) & full;
    }
    let below = |a: &Vec<Cell>, b: &Vec<Cell>| a.iter().zip(b).all(|(x, y)| x.is_subset_of(*y));
    let minimal = recurrent
        .iter()
        .filter(|g| !recurrent.iter().any(|h| h != *g && below(h, g)))
        .cloned()
        .collect();
    Ok(CyclicFamily::new(minimal))
}

/// Whether the family meets the witness condition: a unique minimal member
/// whose components are all singletons (strong) or include one (weak).
pub fn family_is_witness(family: &CyclicFamily, objective: Objective) -> bool {
    match family.unique() {
        None => false,
        Some(g) => {
            let d = g.len() - 1;
            match objective {
                Objective::Strong => g[..d].iter().all(|c| c.len() == 1),
                Objective::Weak => g[..d].iter().any(|c| c.len() == 1),
            }
        }
    }
}

pub fn is_witness(mdp: &Mdp, cycle: &Cycle, objective: Objective) -> bool {
    family_is_witness(&delta(mdp, cycle), objective)
}
