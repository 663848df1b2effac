//! Small reference models bundled with the crate.

use crate::cycles::Cycle;
use crate::io::format::parse_mdp;
use crate::model::Mdp;
use crate::subset::{Cell, Letter};

pub const BLIND_SINK: &str = include_str!("../fixtures/blind_sink.json");
pub const WEAK_ONLY: &str = include_str!("../fixtures/weak_only.json");
pub const SPLIT_MERGE: &str = include_str!("../fixtures/split_merge.json");
pub const NEEDS_MEMORY: &str = include_str!("../fixtures/needs_memory.json");
pub const TWO_FAMILIES: &str = include_str!("../fixtures/two_families.json");
pub const TWO_ABSORBING: &str = include_str!("../fixtures/two_absorbing.json");

/// `(name, json)` for every bundled model.
pub const ALL: &[(&str, &str)] = &[
    ("blind_sink", BLIND_SINK),
    ("weak_only", WEAK_ONLY),
    ("split_merge", SPLIT_MERGE),
    ("needs_memory", NEEDS_MEMORY),
    ("two_families", TWO_FAMILIES),
    ("two_absorbing", TWO_ABSORBING),
];

pub fn by_name(name: &str) -> Option<Mdp> {
    ALL.iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_mdp(text).expect("bundled model is valid"))
}

fn load(text: &str) -> Mdp {
    parse_mdp(text).expect("bundled model is valid")
}

/// Blind strong synchronization into a sink.
pub fn blind_sink() -> Mdp {
    load(BLIND_SINK)
}

/// Weakly but not strongly synchronizing.
pub fn weak_only() -> Mdp {
    load(WEAK_ONLY)
}

pub fn split_merge() -> Mdp {
    load(SPLIT_MERGE)
}

/// Strongly synchronizing under perfect information, but only with memory.
pub fn needs_memory() -> Mdp {
    load(NEEDS_MEMORY)
}

/// Carries a cycle whose recurrent family has two members.
pub fn two_families() -> Mdp {
    load(TWO_FAMILIES)
}

/// Two absorbing states each holding half the mass.
pub fn two_absorbing() -> Mdp {
    load(TWO_ABSORBING)
}

/// The length-3 perfect cycle `{2,5,8} → {3,5,6} → {4,7,9} → {2,5,8}` of
/// [`two_families`]: `σ2` at state 5 on the middle step, `σ1` everywhere else.
pub fn two_families_cycle(m: &Mdp) -> Cycle {
    let cell =
        |names: &[&str]| -> Cell { names.iter().map(|n| m.state_index(n).unwrap()).collect() };
    let s1 = m.action_index("sigma1").unwrap();
    let s2 = m.action_index("sigma2").unwrap();
    let five = m.state_index("5").unwrap();
    let c0 = cell(&["2", "5", "8"]);
    let c1 = cell(&["3", "5", "6"]);
    let c2 = cell(&["4", "7", "9"]);
    let letters = vec![
        Letter::constant(c0, s1),
        Letter::from_fn(c1, |s| if s == five { s2 } else { s1 }),
        Letter::constant(c2, s1),
    ];
    Cycle::new(m, vec![c0, c1, c2, c0], letters).expect("two_families cycle is valid")
}
