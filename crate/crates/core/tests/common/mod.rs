#![allow(dead_code)]

use mdpsync::io::generate::gen_random;
use mdpsync::subset::successor;
use mdpsync::{Cell, Cycle, Letter, Mdp, Mode, Objective};
use rand::Rng;

pub const PAIRS: [(Mode, Objective); 4] = [
    (Mode::Blind, Objective::Strong),
    (Mode::Blind, Objective::Weak),
    (Mode::Perfect, Objective::Strong),
    (Mode::Perfect, Objective::Weak),
];

/// Random model with up to `max_states` states and two actions. Branching is
/// kept low so that supports stay varied.
pub fn random_mdp(rng: &mut impl Rng, max_states: usize) -> Mdp {
    let n = rng.gen_range(1..=max_states);
    let branching = rng.gen_range(1..=n.min(3));
    gen_random(n, 2, branching, rng.gen()).expect("valid parameters")
}

pub fn random_cell(rng: &mut impl Rng, n: usize) -> Cell {
    loop {
        let c = Cell::from_mask(rng.gen::<u64>() & Cell::full(n).mask());
        if !c.is_empty() {
            return c;
        }
    }
}

pub fn random_letter(rng: &mut impl Rng, mdp: &Mdp, cell: Cell, mode: Mode) -> Letter {
    match mode {
        Mode::Blind => Letter::Blind(rng.gen_range(0..mdp.num_actions())),
        Mode::Perfect => {
            let choices = cell
                .iter()
                .map(|_| rng.gen_range(0..mdp.num_actions()))
                .collect();
            Letter::perfect(cell, choices).expect("one choice per member")
        }
    }
}

/// Walks random letters from a random cell until a cell repeats and returns
/// the closed part of the walk.
pub fn random_cycle(rng: &mut impl Rng, mdp: &Mdp, mode: Mode) -> Cycle {
    let mut cells = vec![random_cell(rng, mdp.num_states())];
    let mut letters = Vec::new();
    loop {
        let cur = *cells.last().unwrap();
        let letter = random_letter(rng, mdp, cur, mode);
        let next = successor(mdp, cur, &letter).expect("letter covers its cell");
        letters.push(letter);
        let seen = cells.iter().position(|c| *c == next);
        cells.push(next);
        if let Some(i) = seen {
            return Cycle::new(mdp, cells[i..].to_vec(), letters[i..].to_vec())
                .expect("closed walk is a cycle");
        }
    }
}
