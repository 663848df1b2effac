//! Shortest synchronizing words of deterministic models.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::model::{ActionId, Mdp};
use crate::subset::Cell;

/// A shortest action word sending every state to one state, or `None` if the
/// automaton has no synchronizing word.
pub fn shortest_sync_word(mdp: &Mdp) -> Result<Option<Vec<ActionId>>> {
    if !mdp.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let start = mdp.all_states();
    let mut parent: HashMap<Cell, (Cell, ActionId)> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = std::collections::HashSet::from([start]);
    while let Some(cell) = queue.pop_front() {
        if cell.len() == 1 {
            let mut word = Vec::new();
            let mut cur = cell;
            while let Some((prev, a)) = parent.get(&cur) {
                word.push(*a);
                cur = *prev;
            }
            word.reverse();
            return Ok(Some(word));
        }
        for a in 0..mdp.num_actions() {
            let next = mdp.post_cell(cell, a);
            if seen.insert(next) {
                parent.insert(next, (cell, a));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}
