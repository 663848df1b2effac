//! Browser bindings for the `www/` demo page.
//!
//! Every binding is a thin wrapper over a plain Rust function of the same
//! name with a `_impl` suffix, so the logic is testable natively.

use mdpsync::decide::{decide, Answer, DecideConfig};
use mdpsync::io::format::{mdp_to_json, parse_mdp};
use mdpsync::io::generate::gen_cerny;
use mdpsync::io::report::{ConfigEcho, EmpiricalSummary, Report};
use mdpsync::io::syncword::shortest_sync_word;
use mdpsync::simulate::{check_sync, default_epsilon, default_horizon, simulate, UniformPolicy};
use mdpsync::synthesize::strategy_from_witness;
use mdpsync::{fixtures, Error, Mode, Objective, Result};
use wasm_bindgen::prelude::*;

/// Longest trace the page may request.
pub const MAX_STEPS: usize = 20_000;

fn parse_mode(s: &str) -> Result<Mode> {
    match s {
        "blind" => Ok(Mode::Blind),
        "perfect" => Ok(Mode::Perfect),
        _ => Err(Error::InvalidParameter(format!("unknown mode `{s}`"))),
    }
}

fn parse_objective(s: &str) -> Result<Objective> {
    match s {
        "strong" => Ok(Objective::Strong),
        "weak" => Ok(Objective::Weak),
        _ => Err(Error::InvalidParameter(format!("unknown objective `{s}`"))),
    }
}

fn check_steps(steps: usize) -> Result<usize> {
    if steps > MAX_STEPS {
        return Err(Error::InvalidParameter(format!(
            "at most {MAX_STEPS} steps"
        )));
    }
    Ok(steps)
}

pub fn fixture_names_impl() -> Vec<String> {
    fixtures::ALL.iter().map(|(n, _)| n.to_string()).collect()
}

pub fn fixture_impl(name: &str) -> Result<String> {
    fixtures::ALL
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| text.to_string())
        .ok_or_else(|| Error::InvalidParameter(format!("no bundled model `{name}`")))
}

pub fn cerny_impl(n: usize) -> Result<String> {
    Ok(mdp_to_json(&gen_cerny(n)?))
}

/// Report JSON; on a yes verdict it includes the strategy and an empirical
/// check at the default horizon.
pub fn decide_impl(model: &str, mode: &str, objective: &str) -> Result<String> {
    let mdp = parse_mdp(model)?;
    let (mode, objective) = (parse_mode(mode)?, parse_objective(objective)?);
    let config = DecideConfig::default();
    let verdict = decide(&mdp, mode, objective, &config);
    let echo = ConfigEcho {
        input: None,
        mode,
        objective,
        algorithm: "relation".into(),
        bound: None,
        node_cap: Some(config.node_cap),
    };
    let mut report = Report::new(&mdp, &verdict, echo);
    if let (Answer::Yes, Some(w)) = (verdict.answer, &verdict.witness) {
        let st = strategy_from_witness(&mdp, w, mode, objective)?;
        let horizon = default_horizon(&mdp, &st);
        let trace = simulate(&mdp, &st, horizon);
        let check = check_sync(&trace, objective, default_epsilon(&mdp), st.period().len());
        report = report
            .with_strategy(&mdp, &st)
            .with_empirical(EmpiricalSummary::new(&check, horizon));
    }
    Ok(report.to_json())
}

/// Norms `‖X₀‖ … ‖X_steps‖` under the synthesized strategy, or an empty
/// vector when no synchronizing strategy exists.
pub fn witness_norms_impl(
    model: &str,
    mode: &str,
    objective: &str,
    steps: usize,
) -> Result<Vec<f64>> {
    let mdp = parse_mdp(model)?;
    let (mode, objective) = (parse_mode(mode)?, parse_objective(objective)?);
    let steps = check_steps(steps)?;
    let verdict = decide(&mdp, mode, objective, &DecideConfig::default());
    match (verdict.answer, &verdict.witness) {
        (Answer::Yes, Some(w)) => {
            let st = strategy_from_witness(&mdp, w, mode, objective)?;
            Ok(simulate(&mdp, &st, steps).norms().to_vec())
        }
        _ => Ok(Vec::new()),
    }
}

/// Norms under the strategy playing every action with equal probability.
pub fn uniform_norms_impl(model: &str, steps: usize) -> Result<Vec<f64>> {
    let mdp = parse_mdp(model)?;
    let policy = UniformPolicy {
        num_actions: mdp.num_actions(),
    };
    Ok(simulate(&mdp, &policy, check_steps(steps)?)
        .norms()
        .to_vec())
}

/// Shortest synchronizing word as space-separated action names, or `none`.
pub fn sync_word_impl(model: &str) -> Result<String> {
    let mdp = parse_mdp(model)?;
    Ok(match shortest_sync_word(&mdp)? {
        Some(w) => w
            .iter()
            .map(|a| mdp.action_name(*a))
            .collect::<Vec<_>>()
            .join(" "),
        None => "none".into(),
    })
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn fixture_names() -> Vec<String> {
    fixture_names_impl()
}

#[wasm_bindgen]
pub fn fixture(name: &str) -> std::result::Result<String, JsError> {
    fixture_impl(name).map_err(js)
}

#[wasm_bindgen]
pub fn cerny(n: usize) -> std::result::Result<String, JsError> {
    cerny_impl(n).map_err(js)
}

#[wasm_bindgen]
pub fn decide_report(
    model: &str,
    mode: &str,
    objective: &str,
) -> std::result::Result<String, JsError> {
    decide_impl(model, mode, objective).map_err(js)
}

#[wasm_bindgen]
pub fn witness_norms(
    model: &str,
    mode: &str,
    objective: &str,
    steps: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    witness_norms_impl(model, mode, objective, steps).map_err(js)
}

#[wasm_bindgen]
pub fn uniform_norms(model: &str, steps: usize) -> std::result::Result<Vec<f64>, JsError> {
    uniform_norms_impl(model, steps).map_err(js)
}

#[wasm_bindgen]
pub fn sync_word(model: &str) -> std::result::Result<String, JsError> {
    sync_word_impl(model).map_err(js)
}
