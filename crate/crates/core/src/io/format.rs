//! JSON interchange documents for models, strategies and cycles.
//!
//! Names are resolved against the model's declaration order; probabilities
//! may be written as JSON numbers or as decimal strings.

use indexmap::IndexMap;
use serde::{Deserialize, Deserializer, Serialize};

use crate::cycles::Cycle;
use crate::error::{Error, Result};
use crate::model::{Mdp, MdpBuilder, StateId};
use crate::subset::{Cell, Letter, Mode};
use crate::synthesize::Strategy;

/// Probability literal. Written as a decimal string (the shortest one that
/// parses back to the same double); JSON numbers are accepted on input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prob(pub f64);

impl Serialize for Prob {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Prob {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Prob(x)),
            Raw::Str(s) => s
                .trim()
                .parse::<f64>()
                .map(Prob)
                .map_err(|_| serde::de::Error::custom(format!("`{s}` is not a decimal number"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub target: String,
    pub prob: Prob,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MdpDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub initial: IndexMap<String, Prob>,
    pub transitions: IndexMap<String, IndexMap<String, Vec<Edge>>>,
    /// Free-form annotations, e.g. expected verdicts keyed by `mode/objective`.
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub expected: IndexMap<String, String>,
}

fn syntax_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// 1-based position of the first quoted occurrence of `name` at or after
/// the `anchor` key, for error messages.
fn locate(text: &str, anchor: &str, name: &str) -> (usize, usize) {
    let from = text.find(&format!("\"{anchor}\"")).unwrap_or(0);
    let needle = format!("\"{name}\"");
    let pos = text[from..]
        .find(&needle)
        .map(|p| p + from)
        .or_else(|| text.find(&needle));
    match pos {
        None => (0, 0),
        Some(p) => {
            let line = text[..p].matches('\n').count() + 1;
            let column = p - text[..p].rfind('\n').map_or(0, |i| i + 1) + 1;
            (line, column)
        }
    }
}

impl MdpDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(syntax_error)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_mdp(mdp: &Mdp) -> Self {
        let name = |s: StateId| mdp.state_name(s).to_string();
        let initial = mdp
            .initial()
            .probs()
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(s, p)| (name(s), Prob(*p)))
            .collect();
        let transitions = (0..mdp.num_states())
            .map(|s| {
                let per_action = (0..mdp.num_actions())
                    .map(|a| {
                        let edges = mdp
                            .row(s, a)
                            .probs()
                            .iter()
                            .enumerate()
                            .filter(|(_, p)| **p > 0.0)
                            .map(|(t, p)| Edge {
                                target: name(t),
                                prob: Prob(*p),
                            })
                            .collect();
                        (mdp.action_name(a).to_string(), edges)
                    })
                    .collect();
                (name(s), per_action)
            })
            .collect();
        Self {
            description: None,
            states: mdp.state_names().to_vec(),
            actions: mdp.action_names().to_vec(),
            initial,
            transitions,
            expected: IndexMap::new(),
        }
    }

    /// Resolves names and validates. `source` is used to attach line numbers
    /// to unknown identifiers.
    pub fn to_mdp(&self, source: Option<&str>) -> Result<Mdp> {
        let text = source.unwrap_or("");
        let unknown = |section: &str, name: &str, what: &str| {
            let (line, column) = locate(text, section, name);
            Error::Parse {
                line,
                column,
                message: format!("unknown {what} `{name}`"),
            }
        };
        let mut b = MdpBuilder::new(self.states.iter().cloned(), self.actions.iter().cloned());
        for (name, p) in &self.initial {
            let s = b
                .state_index(name)
                .ok_or_else(|| unknown("initial", name, "state"))?;
            b.set_initial(s, p.0);
        }
        for (sname, row) in &self.transitions {
            let s = b
                .state_index(sname)
                .ok_or_else(|| unknown("transitions", sname, "state"))?;
            for (aname, edges) in row {
                let a = b
                    .action_index(aname)
                    .ok_or_else(|| unknown("transitions", aname, "action"))?;
                if edges.is_empty() {
                    continue;
                }
                for e in edges {
                    let t = b
                        .state_index(&e.target)
                        .ok_or_else(|| unknown("transitions", &e.target, "state"))?;
                    b.add_transition(s, a, t, e.prob.0);
                }
            }
        }
        b.build()
    }
}

pub fn parse_mdp(text: &str) -> Result<Mdp> {
    MdpDocument::from_json(text)?.to_mdp(Some(text))
}

pub fn mdp_to_json(mdp: &Mdp) -> String {
    MdpDocument::from_mdp(mdp).to_json()
}

/// A blind letter is an action name; a perfect letter maps each state of its
/// cell to an action name. In cycle documents the key `*` supplies the
/// action for members of the cell that are not listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LetterDocument {
    Action(String),
    Assignment(IndexMap<String, String>),
}

pub const DEFAULT_KEY: &str = "*";

impl LetterDocument {
    pub fn from_letter(mdp: &Mdp, letter: &Letter) -> Self {
        match letter {
            Letter::Blind(a) => LetterDocument::Action(mdp.action_name(*a).to_string()),
            Letter::Perfect { cell, choices } => LetterDocument::Assignment(
                cell.iter()
                    .zip(choices)
                    .map(|(s, a)| {
                        (
                            mdp.state_name(s).to_string(),
                            mdp.action_name(*a).to_string(),
                        )
                    })
                    .collect(),
            ),
        }
    }

    /// `cell`, when given, is the cell the letter is played from.
    pub fn to_letter(&self, mdp: &Mdp, mode: Mode, cell: Option<Cell>) -> Result<Letter> {
        match (self, mode) {
            (LetterDocument::Action(a), Mode::Blind) => Ok(Letter::Blind(mdp.action_index(a)?)),
            (LetterDocument::Action(a), Mode::Perfect) => match cell {
                Some(c) => Ok(Letter::constant(c, mdp.action_index(a)?)),
                None => Err(Error::InvalidParameter(format!(
                    "perfect letter `{a}` needs a state assignment"
                ))),
            },
            (LetterDocument::Assignment(_), Mode::Blind) => Err(Error::InvalidParameter(
                "blind letters are single action names".into(),
            )),
            (LetterDocument::Assignment(map), Mode::Perfect) => {
                let mut chosen: Vec<(StateId, usize)> = Vec::new();
                let mut default = None;
                for (k, v) in map {
                    let a = mdp.action_index(v)?;
                    if k == DEFAULT_KEY {
                        default = Some(a);
                    } else {
                        chosen.push((mdp.state_index(k)?, a));
                    }
                }
                let listed: Cell = chosen.iter().map(|(s, _)| *s).collect();
                let domain = cell.unwrap_or(listed);
                if let Some((s, _)) = chosen.iter().find(|(s, _)| !domain.contains(*s)) {
                    return Err(Error::InvalidParameter(format!(
                        "state `{}` is outside the letter's cell",
                        mdp.state_name(*s)
                    )));
                }
                let choices = domain
                    .iter()
                    .map(|s| {
                        chosen
                            .iter()
                            .find(|(t, _)| *t == s)
                            .map(|(_, a)| *a)
                            .or(default)
                            .ok_or(Error::LetterNotTotal { state: s })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Letter::perfect(domain, choices)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDocument {
    pub mode: Mode,
    pub prefix: Vec<LetterDocument>,
    pub period: Vec<LetterDocument>,
}

impl StrategyDocument {
    pub fn from_strategy(mdp: &Mdp, strategy: &Strategy) -> Self {
        let conv = |ls: &[Letter]| {
            ls.iter()
                .map(|l| LetterDocument::from_letter(mdp, l))
                .collect()
        };
        Self {
            mode: strategy.mode(),
            prefix: conv(strategy.prefix()),
            period: conv(strategy.period()),
        }
    }

    pub fn to_strategy(&self, mdp: &Mdp) -> Result<Strategy> {
        let conv = |ls: &[LetterDocument]| {
            ls.iter()
                .map(|l| l.to_letter(mdp, self.mode, None))
                .collect::<Result<Vec<_>>>()
        };
        Strategy::new(self.mode, conv(&self.prefix)?, conv(&self.period)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(syntax_error)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}

/// `cells` lists `s₀ … s_d` (the closing cell may be omitted).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleDocument {
    pub mode: Mode,
    pub cells: Vec<Vec<String>>,
    pub letters: Vec<LetterDocument>,
}

impl CycleDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(syntax_error)
    }

    pub fn from_cycle(mdp: &Mdp, mode: Mode, cycle: &Cycle) -> Self {
        Self {
            mode,
            cells: cycle.cells().iter().map(|c| c.names(mdp)).collect(),
            letters: cycle
                .letters()
                .iter()
                .map(|l| LetterDocument::from_letter(mdp, l))
                .collect(),
        }
    }

    pub fn to_cycle(&self, mdp: &Mdp) -> Result<Cycle> {
        let mut cells = self
            .cells
            .iter()
            .map(|c| {
                c.iter()
                    .map(|n| mdp.state_index(n))
                    .collect::<Result<Cell>>()
            })
            .collect::<Result<Vec<Cell>>>()?;
        if cells.len() == self.letters.len() && !cells.is_empty() {
            cells.push(cells[0]);
        }
        let letters = self
            .letters
            .iter()
            .zip(&cells)
            .map(|(l, c)| l.to_letter(mdp, self.mode, Some(*c)))
            .collect::<Result<Vec<_>>>()?;
        Cycle::new(mdp, cells, letters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const SPLIT_MERGE_DOC: &str = r#"{
  "states": ["1", "2", "3", "4"],
  "actions": ["sigma1", "sigma2"],
  "initial": {"1": 1},
  "transitions": {
    "1": {"sigma1": [{"target": "2", "prob": 0.5}, {"target": "3", "prob": "0.5"}],
          "sigma2": [{"target": "1", "prob": 1}]},
    "2": {"sigma1": [{"target": "2", "prob": 1}], "sigma2": [{"target": "3", "prob": 1}]},
    "3": {"sigma1": [{"target": "2", "prob": 1}], "sigma2": [{"target": "3", "prob": 1}]},
    "4": {"sigma1": [{"target": "4", "prob": 1}], "sigma2": [{"target": "4", "prob": 1}]}
  }
}"#;

    #[test]
    fn parses_split_merge() {
        let m = parse_mdp(SPLIT_MERGE_DOC).unwrap();
        assert_eq!(m.post(0, 0).unwrap(), Cell::from_states([1, 2]));
    }

    #[test]
    fn row_sum_tolerance_boundary() {
        let text = SPLIT_MERGE_DOC.replace(r#""prob": "0.5""#, r#""prob": "0.499999999""#);
        assert!(parse_mdp(&text).is_ok());
        let text = SPLIT_MERGE_DOC.replace(r#""prob": "0.5""#, r#""prob": "0.49999999""#);
        assert!(matches!(parse_mdp(&text), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn undeclared_target_is_located() {
        let text = SPLIT_MERGE_DOC.replace(
            r#"{"target": "3", "prob": 1}]},"#,
            r#"{"target": "7", "prob": 1}]},"#,
        );
        match parse_mdp(&text) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 8);
                assert!(message.contains("`7`"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_mdp("{\n  \"states\": [\n") {
            Err(Error::Parse { line, .. }) => assert!(line >= 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fixture_round_trip() {
        for text in fixtures::ALL.iter().map(|(_, t)| *t) {
            let doc = MdpDocument::from_json(text).unwrap();
            assert_eq!(MdpDocument::from_json(&doc.to_json()).unwrap(), doc);
            let m = doc.to_mdp(Some(text)).unwrap();
            let again = parse_mdp(&mdp_to_json(&m)).unwrap();
            assert_eq!(mdp_to_json(&again), mdp_to_json(&m));
        }
    }

    #[test]
    fn cycle_document_with_default_action() {
        let m = fixtures::two_families();
        let text = r#"{"mode": "perfect",
            "cells": [["2","5","8"], ["3","5","6"], ["4","7","9"]],
            "letters": [{"5": "sigma1", "*": "sigma1"}, {"5": "sigma2", "*": "sigma1"}, "sigma1"]}"#;
        let cyc = CycleDocument::from_json(text)
            .unwrap()
            .to_cycle(&m)
            .unwrap();
        assert_eq!(cyc, fixtures::two_families_cycle(&m));
        let missing = text.replace(
            r#", "*": "sigma1"}, {"5": "sigma2""#,
            r#"}, {"5": "sigma2""#,
        );
        let err = CycleDocument::from_json(&missing)
            .unwrap()
            .to_cycle(&m)
            .unwrap_err();
        assert!(matches!(err, Error::LetterNotTotal { .. }));
    }
}
