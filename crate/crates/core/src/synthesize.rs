//! Pure eventually periodic strategies built from witnesses, and the finite
//! product chain that tracks such a strategy's phase.

use crate::cycles::Objective;
use crate::decide::{decide, verify_witness, Answer, DecideConfig, Verdict, Witness};
use crate::error::{Error, Result};
use crate::model::{ActionId, MarkovChain, Mdp, StateId};
use crate::subset::{Cell, Letter, Mode};

/// Plays `prefix` once, then repeats `period` forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    mode: Mode,
    prefix: Vec<Letter>,
    period: Vec<Letter>,
}

impl Strategy {
    pub fn new(mode: Mode, prefix: Vec<Letter>, period: Vec<Letter>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidParameter(
                "strategy period must be nonempty".into(),
            ));
        }
        if let Some(l) = prefix.iter().chain(&period).find(|l| l.mode() != mode) {
            return Err(Error::InvalidParameter(format!(
                "letter {l:?} does not belong to {mode} mode"
            )));
        }
        Ok(Self {
            mode,
            prefix,
            period,
        })
    }

    /// The blind strategy playing `action` at every step.
    pub fn constant(action: ActionId) -> Self {
        Self {
            mode: Mode::Blind,
            prefix: Vec::new(),
            period: vec![Letter::Blind(action)],
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    pub fn letter(&self, step: usize) -> &Letter {
        let m = self.prefix.len();
        if step < m {
            &self.prefix[step]
        } else {
            &self.period[(step - m) % self.period.len()]
        }
    }

    /// The action played at `step` in `state`. States off the letter's cell
    /// never carry mass under the intended run and get action 0.
    pub fn decision(&self, step: usize, state: StateId) -> ActionId {
        self.letter(step).action_for(state).unwrap_or(0)
    }

    /// Phase of the product chain at `step`.
    pub fn phase(&self, step: usize) -> usize {
        let m = self.prefix.len();
        if step < m {
            step
        } else {
            m + (step - m) % self.period.len()
        }
    }

    fn next_phase(&self, phase: usize) -> usize {
        let m = self.prefix.len();
        if phase + 1 < m + self.period.len() {
            phase + 1
        } else {
            m
        }
    }
}

/// Prefix from the access path, period from the cycle. The witness is
/// re-verified first.
pub fn strategy_from_witness(
    mdp: &Mdp,
    witness: &Witness,
    mode: Mode,
    objective: Objective,
) -> Result<Strategy> {
    verify_witness(mdp, witness, mode, objective)?;
    Strategy::new(
        mode,
        witness.access_path.iter().map(|(_, l)| l.clone()).collect(),
        witness.cycle.letters().to_vec(),
    )
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub verdict: Verdict,
    /// Present exactly when the verdict is yes.
    pub strategy: Option<Strategy>,
}

pub fn synthesize(
    mdp: &Mdp,
    mode: Mode,
    objective: Objective,
    config: &DecideConfig,
) -> Result<Synthesis> {
    let verdict = decide(mdp, mode, objective, config);
    let strategy = match (&verdict.answer, &verdict.witness) {
        (Answer::Yes, Some(w)) => Some(strategy_from_witness(mdp, w, mode, objective)?),
        _ => None,
    };
    Ok(Synthesis { verdict, strategy })
}

/// Markov chain over `(phase, state)` pairs induced by a strategy. Only
/// states of each phase's cell are materialized.
#[derive(Clone, Debug)]
pub struct ProductChain {
    chain: MarkovChain,
    pairs: Vec<(usize, StateId)>,
    phase_cells: Vec<Cell>,
}

impl ProductChain {
    pub fn chain(&self) -> &MarkovChain {
        &self.chain
    }

    /// `(phase, state)` of each chain state.
    pub fn pairs(&self) -> &[(usize, StateId)] {
        &self.pairs
    }

    /// Cells that can carry mass at each phase.
    pub fn phase_cells(&self) -> &[Cell] {
        &self.phase_cells
    }

    pub fn index_of(&self, phase: usize, state: StateId) -> Option<usize> {
        self.pairs.iter().position(|p| *p == (phase, state))
    }
}

/// Cells reached at each phase. Prefix phases are replayed once; period
/// phases are closed under further laps, which changes nothing when the
/// period is a cycle of the subset construction.
fn phase_cells(mdp: &Mdp, strategy: &Strategy) -> Vec<Cell> {
    let m = strategy.prefix.len();
    let total = m + strategy.period.len();
    let step = |cell: Cell, phase: usize| -> Cell {
        cell.iter().fold(Cell::EMPTY, |acc, s| {
            acc.union(mdp.post_of(s, strategy.decision(phase, s)))
        })
    };
    let mut cells = vec![Cell::EMPTY; total];
    let mut cur = mdp.initial_cell();
    for (k, slot) in cells.iter_mut().enumerate().take(m) {
        *slot = cur;
        cur = step(cur, k);
    }
    loop {
        let mut changed = false;
        for (phase, slot) in cells.iter_mut().enumerate().skip(m) {
            let grown = slot.union(cur);
            if grown != *slot {
                *slot = grown;
                changed = true;
            }
            cur = step(*slot, phase);
        }
        if !changed {
            break cells;
        }
    }
}

pub fn product_chain(mdp: &Mdp, strategy: &Strategy) -> ProductChain {
    let cells = phase_cells(mdp, strategy);
    let pairs: Vec<(usize, StateId)> = cells
        .iter()
        .enumerate()
        .flat_map(|(k, c)| c.iter().map(move |s| (k, s)))
        .collect();
    let index = |phase: usize, s: StateId| {
        pairs
            .binary_search(&(phase, s))
            .expect("successor lies in the next phase cell")
    };
    let names = pairs
        .iter()
        .map(|(k, s)| format!("{k}:{}", mdp.state_name(*s)))
        .collect();
    let mut initial = vec![0.0; pairs.len()];
    for s in mdp.initial_cell() {
        initial[index(0, s)] = mdp.initial().prob(s);
    }
    let rows = pairs
        .iter()
        .map(|&(k, s)| {
            let next = strategy.next_phase(k);
            mdp.sparse_row(s, strategy.decision(k, s))
                .iter()
                .map(|&(t, p)| (index(next, t), p))
                .collect()
        })
        .collect();
    let chain = MarkovChain::new(names, initial, rows).expect("product rows are stochastic");
    ProductChain {
        chain,
        pairs,
        phase_cells: cells,
    }
}

/// For a deterministic model and a blind strong witness: the access-path
/// actions followed by cycle actions until the cell tracked from the initial
/// support is a singleton.
pub fn extract_sync_word(mdp: &Mdp, witness: &Witness) -> Result<Vec<ActionId>> {
    if !mdp.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let action = |l: &Letter| match l {
        Letter::Blind(a) => Ok(*a),
        Letter::Perfect { .. } => Err(Error::InvalidWitness(
            "word extraction needs a blind witness".into(),
        )),
    };
    let mut cell = mdp.initial_cell();
    let mut word = Vec::new();
    if cell.len() == 1 {
        return Ok(word);
    }
    let rounds = witness.cycle.start().len() + 1;
    let cycle = witness
        .cycle
        .letters()
        .iter()
        .cycle()
        .take(rounds * witness.cycle.len());
    for l in witness.access_path.iter().map(|(_, l)| l).chain(cycle) {
        let a = action(l)?;
        word.push(a);
        cell = mdp.post_cell(cell, a);
        if cell.len() == 1 {
            return Ok(word);
        }
    }
    Err(Error::InvalidWitness(
        "tracked cell never collapses to a singleton".into(),
    ))
}
