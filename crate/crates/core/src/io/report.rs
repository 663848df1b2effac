//! Machine-readable result documents.

use serde::{Deserialize, Serialize};

use crate::cycles::{CyclicFamily, Objective};
use crate::decide::{Answer, Verdict};
use crate::io::format::{CycleDocument, LetterDocument, StrategyDocument};
use crate::model::Mdp;
use crate::simulate::{SyncCheck, SyncVerdict};
use crate::subset::Mode;
use crate::synthesize::Strategy;

pub const TOOL_NAME: &str = "mdpsync";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

/// The options a result was produced with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub input: Option<String>,
    pub mode: Mode,
    pub objective: Objective,
    pub algorithm: String,
    pub bound: Option<usize>,
    pub node_cap: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccessStep {
    pub cell: Vec<String>,
    pub letter: LetterDocument,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub access_path: Vec<AccessStep>,
    pub cycle: CycleDocument,
}

/// Summary of a finite-horizon check; never a proof.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSummary {
    pub kind: String,
    pub objective: Objective,
    pub epsilon: f64,
    pub window: usize,
    pub horizon: usize,
    pub verdict: SyncVerdict,
    pub first_step: usize,
}

impl EmpiricalSummary {
    pub fn new(check: &SyncCheck, horizon: usize) -> Self {
        Self {
            kind: "empirical".into(),
            objective: check.objective,
            epsilon: check.epsilon,
            window: check.window,
            horizon,
            verdict: check.verdict,
            first_step: check.first_step,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsDocument {
    pub reachable_cells: usize,
    pub anchors_explored: usize,
    pub nodes_explored: usize,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub config: ConfigEcho,
    pub answer: Answer,
    pub witness: Option<WitnessDocument>,
    /// Members of the cycle's recurrent family, each as `g₀ … g_d`.
    pub delta: Option<Vec<Vec<Vec<String>>>>,
    pub strategy: Option<StrategyDocument>,
    pub empirical: Option<EmpiricalSummary>,
    pub stats: StatsDocument,
}

pub fn family_names(mdp: &Mdp, family: &CyclicFamily) -> Vec<Vec<Vec<String>>> {
    family
        .members()
        .iter()
        .map(|g| g.iter().map(|c| c.names(mdp)).collect())
        .collect()
}

impl Report {
    pub fn new(mdp: &Mdp, verdict: &Verdict, config: ConfigEcho) -> Self {
        let witness = verdict.witness.as_ref().map(|w| WitnessDocument {
            access_path: w
                .access_path
                .iter()
                .map(|(c, l)| AccessStep {
                    cell: c.names(mdp),
                    letter: LetterDocument::from_letter(mdp, l),
                })
                .collect(),
            cycle: CycleDocument::from_cycle(mdp, verdict.mode, &w.cycle),
        });
        let delta = verdict
            .witness
            .as_ref()
            .map(|w| family_names(mdp, &w.delta));
        Self {
            tool: ToolInfo {
                name: TOOL_NAME.into(),
                version: TOOL_VERSION.into(),
            },
            config,
            answer: verdict.answer,
            witness,
            delta,
            strategy: None,
            empirical: None,
            stats: StatsDocument {
                reachable_cells: verdict.stats.reachable_cells,
                anchors_explored: verdict.stats.anchors_explored,
                nodes_explored: verdict.stats.nodes_explored,
                wall_time_ms: verdict.stats.wall_time.as_secs_f64() * 1e3,
            },
        }
    }

    pub fn with_strategy(mut self, mdp: &Mdp, strategy: &Strategy) -> Self {
        self.strategy = Some(StrategyDocument::from_strategy(mdp, strategy));
        self
    }

    pub fn with_empirical(mut self, summary: EmpiricalSummary) -> Self {
        self.empirical = Some(summary);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
