//! Markov decision processes, Markov chains and the recurrent/transient
//! classification of chain states.
//!
//! States and actions are identified by dense indices whose order is the
//! declaration order of the names. Probabilities are `f64`; everything that
//! decides a qualitative question only looks at supports, which are cached as
//! [`Cell`] bit masks.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::subset::Cell;

pub type StateId = usize;
pub type ActionId = usize;

/// Cells are single machine words, so models are capped at 64 states.
pub const MAX_STATES: usize = 64;
/// Allowed deviation of a row sum from 1.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Whether `total` is 1 up to [`ROW_SUM_TOLERANCE`]. A sliver of relative
/// slack keeps decimal inputs like `0.999999999` on the accepting side of
/// binary rounding.
pub(crate) fn sums_to_one(total: f64) -> bool {
    (total - 1.0).abs() <= ROW_SUM_TOLERANCE * (1.0 + 1e-6)
}
/// Entries at or below this value are dropped (with a warning) when a model
/// is built, so they do not enter any support.
pub const NEGLIGIBLE_PROB: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Checks non-negativity and the row-sum tolerance.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter("empty distribution".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidParameter(format!("invalid probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if !sums_to_one(total) {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self { probs })
    }

    pub fn point(len: usize, state: StateId) -> Self {
        let mut probs = vec![0.0; len];
        probs[state] = 1.0;
        Self { probs }
    }

    /// Uniform over the members of `cell`.
    pub fn uniform_on(len: usize, cell: Cell) -> Self {
        let mut probs = vec![0.0; len];
        let w = 1.0 / cell.len() as f64;
        for s in cell.iter() {
            probs[s] = w;
        }
        Self { probs }
    }

    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        Self { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, state: StateId) -> f64 {
        self.probs[state]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Largest single-state probability.
    pub fn norm(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }

    /// Positive entries. Only meaningful for distributions over at most
    /// [`MAX_STATES`] states.
    pub fn support(&self) -> Cell {
        Cell::from_states(
            self.probs
                .iter()
                .enumerate()
                .filter(|(_, p)| **p > 0.0)
                .map(|(i, _)| i),
        )
    }

    pub fn support_indices(&self) -> Vec<StateId> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Model,
    Initial,
    Row { state: String, action: String },
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Model => write!(f, "model"),
            Location::Initial => write!(f, "initial distribution"),
            Location::Row { state, action } => write!(f, "row ({state}, {action})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ViolationKind {
    NoStates,
    NoActions,
    TooManyStates(usize),
    DuplicateName(String),
    MissingRow,
    InvalidEntry {
        target: String,
        value: f64,
    },
    RowSum(f64),
    /// Warning only: the entry is dropped from the row.
    NegligibleEntry {
        target: String,
        value: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub location: Location,
    pub kind: ViolationKind,
}

impl Violation {
    pub fn is_warning(&self) -> bool {
        matches!(self.kind, ViolationKind::NegligibleEntry { .. })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let loc = &self.location;
        match &self.kind {
            ViolationKind::NoStates => write!(f, "{loc}: no states declared"),
            ViolationKind::NoActions => write!(f, "{loc}: no actions declared"),
            ViolationKind::TooManyStates(n) => {
                write!(f, "{loc}: {n} states exceed the limit of {MAX_STATES}")
            }
            ViolationKind::DuplicateName(n) => write!(f, "{loc}: duplicate name `{n}`"),
            ViolationKind::MissingRow => write!(f, "{loc}: missing transition distribution"),
            ViolationKind::InvalidEntry { target, value } => {
                write!(f, "{loc}: invalid probability {value} for `{target}`")
            }
            ViolationKind::RowSum(s) => write!(f, "{loc}: probabilities sum to {s}"),
            ViolationKind::NegligibleEntry { target, value } => write!(
                f,
                "{loc}: warning: probability {value} for `{target}` treated as zero"
            ),
        }
    }
}

/// Unvalidated model under construction.
#[derive(Clone, Debug)]
pub struct MdpBuilder {
    states: Vec<String>,
    actions: Vec<String>,
    initial: Vec<f64>,
    rows: Vec<Option<Vec<f64>>>,
}

impl MdpBuilder {
    pub fn new<S: Into<String>, A: Into<String>>(
        states: impl IntoIterator<Item = S>,
        actions: impl IntoIterator<Item = A>,
    ) -> Self {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        let actions: Vec<String> = actions.into_iter().map(Into::into).collect();
        let n = states.len();
        let rows = vec![None; n * actions.len()];
        Self {
            states,
            actions,
            initial: vec![0.0; n],
            rows,
        }
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn action_index(&self, name: &str) -> Option<ActionId> {
        self.actions.iter().position(|a| a == name)
    }

    pub fn set_initial(&mut self, state: StateId, prob: f64) -> &mut Self {
        self.initial[state] = prob;
        self
    }

    pub fn set_initial_distribution(&mut self, probs: Vec<f64>) -> &mut Self {
        assert_eq!(probs.len(), self.states.len());
        self.initial = probs;
        self
    }

    /// Adds `prob` to the entry `state --action--> target`, creating the row
    /// if needed.
    pub fn add_transition(
        &mut self,
        state: StateId,
        action: ActionId,
        target: StateId,
        prob: f64,
    ) -> &mut Self {
        let n = self.states.len();
        let row =
            self.rows[state * self.actions.len() + action].get_or_insert_with(|| vec![0.0; n]);
        row[target] += prob;
        self
    }

    pub fn set_row(&mut self, state: StateId, action: ActionId, probs: Vec<f64>) -> &mut Self {
        assert_eq!(probs.len(), self.states.len());
        let k = self.actions.len();
        self.rows[state * k + action] = Some(probs);
        self
    }

    /// Every invariant violation, plus warnings for negligible entries.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let model = |kind| Violation {
            location: Location::Model,
            kind,
        };
        if self.states.is_empty() {
            out.push(model(ViolationKind::NoStates));
        }
        if self.actions.is_empty() {
            out.push(model(ViolationKind::NoActions));
        }
        if self.states.len() > MAX_STATES {
            out.push(model(ViolationKind::TooManyStates(self.states.len())));
        }
        for names in [&self.states, &self.actions] {
            let mut seen = HashMap::new();
            for n in names.iter() {
                if seen.insert(n.as_str(), ()).is_some() {
                    out.push(model(ViolationKind::DuplicateName(n.clone())));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        self.check_row(Location::Initial, Some(&self.initial), &mut out);
        for (s, state) in self.states.iter().enumerate() {
            for (a, action) in self.actions.iter().enumerate() {
                let loc = Location::Row {
                    state: state.clone(),
                    action: action.clone(),
                };
                self.check_row(
                    loc,
                    self.rows[s * self.actions.len() + a].as_ref(),
                    &mut out,
                );
            }
        }
        out
    }

    fn check_row(&self, location: Location, row: Option<&Vec<f64>>, out: &mut Vec<Violation>) {
        let Some(row) = row else {
            out.push(Violation {
                location,
                kind: ViolationKind::MissingRow,
            });
            return;
        };
        let mut sum = 0.0;
        for (t, &p) in row.iter().enumerate() {
            if !p.is_finite() || !(0.0..=1.0 + ROW_SUM_TOLERANCE).contains(&p) {
                out.push(Violation {
                    location: location.clone(),
                    kind: ViolationKind::InvalidEntry {
                        target: self.states[t].clone(),
                        value: p,
                    },
                });
                continue;
            }
            if p > 0.0 && p <= NEGLIGIBLE_PROB {
                out.push(Violation {
                    location: location.clone(),
                    kind: ViolationKind::NegligibleEntry {
                        target: self.states[t].clone(),
                        value: p,
                    },
                });
                continue;
            }
            sum += p;
        }
        if !sums_to_one(sum) {
            out.push(Violation {
                location,
                kind: ViolationKind::RowSum(sum),
            });
        }
    }

    /// Validates and freezes the model. Negligible entries are zeroed.
    pub fn build(self) -> Result<Mdp> {
        let violations: Vec<_> = self
            .validate()
            .into_iter()
            .filter(|v| !v.is_warning())
            .collect();
        if !violations.is_empty() {
            return Err(Error::InvalidModel(violations));
        }
        let clean = |mut v: Vec<f64>| {
            for p in v.iter_mut() {
                if *p <= NEGLIGIBLE_PROB {
                    *p = 0.0;
                }
            }
            Distribution::from_raw(v)
        };
        let initial = clean(self.initial);
        let rows: Vec<Distribution> = self
            .rows
            .into_iter()
            .map(|r| clean(r.expect("validated")))
            .collect();
        Ok(Mdp::from_parts(self.states, self.actions, initial, rows))
    }
}

/// A finite Markov decision process. Immutable once built.
#[derive(Clone, Debug)]
pub struct Mdp {
    states: Vec<String>,
    actions: Vec<String>,
    initial: Distribution,
    rows: Vec<Distribution>,
    sparse: Vec<Vec<(StateId, f64)>>,
    post: Vec<Cell>,
    min_prob: f64,
}

impl Mdp {
    fn from_parts(
        states: Vec<String>,
        actions: Vec<String>,
        initial: Distribution,
        rows: Vec<Distribution>,
    ) -> Self {
        let sparse: Vec<Vec<(StateId, f64)>> = rows
            .iter()
            .map(|r| {
                r.probs()
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| **p > 0.0)
                    .map(|(i, p)| (i, *p))
                    .collect()
            })
            .collect();
        let post = rows.iter().map(Distribution::support).collect();
        let min_prob = sparse
            .iter()
            .flatten()
            .map(|(_, p)| *p)
            .fold(f64::INFINITY, f64::min);
        Self {
            states,
            actions,
            initial,
            rows,
            sparse,
            post,
            min_prob,
        }
    }

    pub fn to_builder(&self) -> MdpBuilder {
        MdpBuilder {
            states: self.states.clone(),
            actions: self.actions.clone(),
            initial: self.initial.probs().to_vec(),
            rows: self.rows.iter().map(|r| Some(r.probs().to_vec())).collect(),
        }
    }

    /// Re-checks the model invariants. Empty for every built model.
    pub fn validate(&self) -> Vec<Violation> {
        self.to_builder().validate()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn action_names(&self) -> &[String] {
        &self.actions
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s]
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.actions[a]
    }

    pub fn state_index(&self, name: &str) -> Result<StateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn action_index(&self, name: &str) -> Result<ActionId> {
        self.actions
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::UnknownAction(name.to_string()))
    }

    pub fn initial(&self) -> &Distribution {
        &self.initial
    }

    /// Support of the initial distribution.
    pub fn initial_cell(&self) -> Cell {
        self.initial.support()
    }

    pub fn all_states(&self) -> Cell {
        Cell::full(self.states.len())
    }

    pub fn row(&self, s: StateId, a: ActionId) -> &Distribution {
        &self.rows[s * self.actions.len() + a]
    }

    pub(crate) fn sparse_row(&self, s: StateId, a: ActionId) -> &[(StateId, f64)] {
        &self.sparse[s * self.actions.len() + a]
    }

    /// Support of `δ(state, action)`.
    pub fn post(&self, state: StateId, action: ActionId) -> Result<Cell> {
        if state >= self.num_states() {
            return Err(Error::StateOutOfRange(state));
        }
        if action >= self.num_actions() {
            return Err(Error::ActionOutOfRange(action));
        }
        Ok(self.post_of(state, action))
    }

    #[inline]
    pub(crate) fn post_of(&self, state: StateId, action: ActionId) -> Cell {
        self.post[state * self.actions.len() + action]
    }

    /// Union of the posts of every member of `cell` under one action.
    pub fn post_cell(&self, cell: Cell, action: ActionId) -> Cell {
        cell.iter()
            .fold(Cell::EMPTY, |acc, s| acc.union(self.post_of(s, action)))
    }

    /// Smallest positive transition probability.
    pub fn min_prob(&self) -> f64 {
        self.min_prob
    }

    /// Every row is a point mass.
    pub fn is_deterministic(&self) -> bool {
        self.post.iter().all(|c| c.len() == 1)
    }
}

/// A Markov chain. Unlike [`Mdp`] it is not limited to 64 states, so
/// successor sets are kept as index lists.
#[derive(Clone, Debug)]
pub struct MarkovChain {
    names: Vec<String>,
    initial: Distribution,
    rows: Vec<Vec<(StateId, f64)>>,
}

impl MarkovChain {
    /// `rows[s]` lists `(target, prob)` pairs; duplicates are merged.
    pub fn new(
        names: Vec<String>,
        initial: Vec<f64>,
        rows: Vec<Vec<(StateId, f64)>>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 || rows.len() != n || initial.len() != n {
            return Err(Error::InvalidParameter(
                "chain needs one row and one initial entry per state".into(),
            ));
        }
        let initial = Distribution::new(initial)?;
        let mut merged = Vec::with_capacity(n);
        for (s, row) in rows.into_iter().enumerate() {
            let mut dense: Vec<(StateId, f64)> = Vec::with_capacity(row.len());
            for (t, p) in row {
                if t >= n {
                    return Err(Error::StateOutOfRange(t));
                }
                if !p.is_finite() || p < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "row {}: invalid probability {p}",
                        names[s]
                    )));
                }
                if p <= NEGLIGIBLE_PROB {
                    continue;
                }
                match dense.iter_mut().find(|(u, _)| *u == t) {
                    Some(e) => e.1 += p,
                    None => dense.push((t, p)),
                }
            }
            dense.sort_by_key(|(t, _)| *t);
            let total: f64 = dense.iter().map(|(_, p)| p).sum();
            if !sums_to_one(total) {
                return Err(Error::InvalidParameter(format!(
                    "row {}: probabilities sum to {total}",
                    names[s]
                )));
            }
            merged.push(dense);
        }
        Ok(Self {
            names,
            initial,
            rows: merged,
        })
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn initial(&self) -> &Distribution {
        &self.initial
    }

    pub fn row(&self, s: StateId) -> &[(StateId, f64)] {
        &self.rows[s]
    }

    pub fn successors(&self, s: StateId) -> impl Iterator<Item = StateId> + '_ {
        self.rows[s].iter().map(|(t, _)| *t)
    }

    /// Smallest positive transition probability.
    pub fn min_prob(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .map(|(_, p)| *p)
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    Recurrent,
    Transient,
}

#[derive(Clone, Debug)]
pub struct StateClassification {
    kinds: Vec<StateKind>,
    classes: Vec<Vec<StateId>>,
}

impl StateClassification {
    pub fn kind(&self, s: StateId) -> StateKind {
        self.kinds[s]
    }

    pub fn is_recurrent(&self, s: StateId) -> bool {
        self.kinds[s] == StateKind::Recurrent
    }

    pub fn kinds(&self) -> &[StateKind] {
        &self.kinds
    }

    /// Terminal strongly connected components, each sorted, ordered by their
    /// smallest member.
    pub fn recurrent_classes(&self) -> &[Vec<StateId>] {
        &self.classes
    }

    pub fn recurrent_states(&self) -> Vec<StateId> {
        (0..self.kinds.len())
            .filter(|s| self.is_recurrent(*s))
            .collect()
    }

    pub fn transient_states(&self) -> Vec<StateId> {
        (0..self.kinds.len())
            .filter(|s| !self.is_recurrent(*s))
            .collect()
    }
}

/// Recurrent states are exactly the members of bottom strongly connected
/// components.
pub fn classify(mc: &MarkovChain) -> StateClassification {
    let comp = tarjan_scc(mc);
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut leaves = vec![false; ncomp];
    for (s, c) in comp.iter().enumerate() {
        if mc.successors(s).any(|t| comp[t] != *c) {
            leaves[*c] = true;
        }
    }
    let kinds: Vec<StateKind> = comp
        .iter()
        .map(|c| {
            if leaves[*c] {
                StateKind::Transient
            } else {
                StateKind::Recurrent
            }
        })
        .collect();
    let mut by_comp: HashMap<usize, Vec<StateId>> = HashMap::new();
    for (s, c) in comp.iter().enumerate() {
        if !leaves[*c] {
            by_comp.entry(*c).or_default().push(s);
        }
    }
    let mut classes: Vec<Vec<StateId>> = by_comp.into_values().collect();
    classes.sort();
    StateClassification { kinds, classes }
}

/// Iterative Tarjan; returns a component id per state.
fn tarjan_scc(mc: &MarkovChain) -> Vec<usize> {
    const UNVISITED: usize = usize::MAX;
    let n = mc.num_states();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNVISITED; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    // (state, position in its successor list)
    let mut work: Vec<(StateId, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        work.push((root, 0));
        while let Some(top) = work.last_mut() {
            let (v, pos) = *top;
            if pos == 0 && index[v] == UNVISITED {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            let row = mc.row(v);
            if pos < row.len() {
                top.1 += 1;
                let w = row[pos].0;
                if index[w] == UNVISITED {
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            work.pop();
            if let Some(&(parent, _)) = work.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

/// The chain obtained by fixing one action per state.
pub fn induced_chain(mdp: &Mdp, rule: &[ActionId]) -> Result<MarkovChain> {
    if rule.len() != mdp.num_states() {
        return Err(Error::InvalidParameter(format!(
            "rule covers {} of {} states",
            rule.len(),
            mdp.num_states()
        )));
    }
    if let Some(&a) = rule.iter().find(|a| **a >= mdp.num_actions()) {
        return Err(Error::ActionOutOfRange(a));
    }
    let rows = rule
        .iter()
        .enumerate()
        .map(|(s, &a)| mdp.sparse_row(s, a).to_vec())
        .collect();
    MarkovChain::new(
        mdp.state_names().to_vec(),
        mdp.initial().probs().to_vec(),
        rows,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn chain(rows: Vec<Vec<(usize, f64)>>) -> MarkovChain {
        let n = rows.len();
        let names = (0..n).map(|i| format!("s{i}")).collect();
        let mut init = vec![0.0; n];
        init[0] = 1.0;
        MarkovChain::new(names, init, rows).unwrap()
    }

    #[test]
    fn one_state_self_loop_is_valid() {
        let mut b = MdpBuilder::new(["a"], ["x"]);
        b.set_initial(0, 1.0).add_transition(0, 0, 0, 1.0);
        assert!(b.validate().is_empty());
        let m = b.build().unwrap();
        assert!(m.validate().is_empty());
        assert_eq!(m.min_prob(), 1.0);
    }

    #[test]
    fn short_row_is_reported_with_its_location() {
        let mut b = MdpBuilder::new(["a", "b"], ["x"]);
        b.set_initial(0, 1.0)
            .add_transition(0, 0, 1, 0.9)
            .add_transition(1, 0, 1, 1.0);
        let v = b.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(
            v[0].location,
            Location::Row {
                state: "a".into(),
                action: "x".into()
            }
        );
        assert!(matches!(v[0].kind, ViolationKind::RowSum(s) if (s - 0.9).abs() < 1e-12));
        assert!(b.build().is_err());
    }

    #[test]
    fn missing_row_and_empty_sets() {
        let b = MdpBuilder::new(Vec::<String>::new(), ["x"]);
        assert!(b
            .validate()
            .iter()
            .any(|v| v.kind == ViolationKind::NoStates));
        let mut b = MdpBuilder::new(["a"], ["x", "y"]);
        b.set_initial(0, 1.0).add_transition(0, 0, 0, 1.0);
        let v = b.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::MissingRow);
    }

    #[test]
    fn negligible_entries_warn_and_vanish() {
        let mut b = MdpBuilder::new(["a", "b"], ["x"]);
        b.set_initial(0, 1.0)
            .set_row(0, 0, vec![1.0, 1e-13])
            .add_transition(1, 0, 1, 1.0);
        let v = b.validate();
        assert_eq!(v.len(), 1);
        assert!(v[0].is_warning());
        let m = b.build().unwrap();
        assert_eq!(m.post(0, 0).unwrap(), Cell::singleton(0));
    }

    #[test]
    fn split_merge_posts() {
        let m = fixtures::split_merge();
        assert!(m.validate().is_empty());
        let s = |n: &str| m.state_index(n).unwrap();
        let a1 = m.action_index("sigma1").unwrap();
        let a2 = m.action_index("sigma2").unwrap();
        assert_eq!(
            m.post(s("1"), a1).unwrap(),
            Cell::from_states([s("2"), s("3")])
        );
        assert_eq!(m.post(s("1"), a2).unwrap(), Cell::singleton(s("1")));
        assert_eq!(m.row(s("1"), a1).prob(s("2")), 0.5);
        assert!(m.post(9, 0).is_err());
        assert!(m.post(0, 7).is_err());
    }

    #[test]
    fn absorbing_tail_classification() {
        let mc = chain(vec![vec![(1, 1.0)], vec![(2, 1.0)], vec![(2, 1.0)]]);
        let c = classify(&mc);
        assert_eq!(
            c.kinds(),
            &[
                StateKind::Transient,
                StateKind::Transient,
                StateKind::Recurrent
            ]
        );
        assert_eq!(c.recurrent_classes(), &[vec![2]]);
    }

    #[test]
    fn three_cycle_is_one_class() {
        let mc = chain(vec![vec![(1, 1.0)], vec![(2, 1.0)], vec![(0, 1.0)]]);
        let c = classify(&mc);
        assert!((0..3).all(|s| c.is_recurrent(s)));
        assert_eq!(c.recurrent_classes(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn induced_chain_selects_rows() {
        let m = fixtures::split_merge();
        let s1 = m.state_index("1").unwrap();
        let a2 = m.action_index("sigma2").unwrap();
        let rule = vec![a2; m.num_states()];
        let mc = induced_chain(&m, &rule).unwrap();
        assert_eq!(mc.row(s1), &[(s1, 1.0)]);
        assert!(induced_chain(&m, &rule[..2]).is_err());
    }

    #[test]
    fn one_action_mdp_is_its_own_chain() {
        let m = fixtures::two_absorbing();
        let mc = induced_chain(&m, &[0, 0]).unwrap();
        for s in 0..2 {
            assert_eq!(mc.row(s), m.sparse_row(s, 0));
        }
        assert_eq!(mc.initial(), m.initial());
    }
}
