//! Exact propagation of state distributions and empirical synchronization
//! checks on the resulting norm sequences.
//!
//! A finite trace cannot prove a limit, so [`check_sync`] results are
//! estimates and are reported as empirical.

use serde::{Deserialize, Serialize};

use crate::cycles::Objective;
use crate::model::{ActionId, Distribution, MarkovChain, Mdp, StateId};
use crate::synthesize::Strategy;

/// Chooses actions from the step number and current state.
pub trait Policy {
    /// Calls `f(action, weight)` for each action played with positive
    /// probability; weights sum to 1.
    fn actions(&self, step: usize, state: StateId, f: &mut dyn FnMut(ActionId, f64));
}

impl Policy for Strategy {
    fn actions(&self, step: usize, state: StateId, f: &mut dyn FnMut(ActionId, f64)) {
        f(self.decision(step, state), 1.0);
    }
}

/// A pure memoryless rule: one action per state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemorylessRule(pub Vec<ActionId>);

impl Policy for MemorylessRule {
    fn actions(&self, _step: usize, state: StateId, f: &mut dyn FnMut(ActionId, f64)) {
        f(self.0[state], 1.0);
    }
}

/// Every action with equal probability, at every step and state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UniformPolicy {
    pub num_actions: usize,
}

impl Policy for UniformPolicy {
    fn actions(&self, _step: usize, _state: StateId, f: &mut dyn FnMut(ActionId, f64)) {
        let w = 1.0 / self.num_actions as f64;
        for a in 0..self.num_actions {
            f(a, w);
        }
    }
}

/// Distributions `X₀ … X_N` and their norms.
#[derive(Clone, Debug)]
pub struct DistributionTrace {
    steps: Vec<Distribution>,
    norms: Vec<f64>,
}

impl DistributionTrace {
    fn from_steps(steps: Vec<Distribution>) -> Self {
        let norms = steps.iter().map(Distribution::norm).collect();
        Self { steps, norms }
    }

    pub fn steps(&self) -> &[Distribution] {
        &self.steps
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    /// The horizon `N`.
    pub fn horizon(&self) -> usize {
        self.steps.len() - 1
    }

    /// Mass on `states` at each step.
    pub fn mass_on(&self, states: &[StateId]) -> Vec<f64> {
        self.steps
            .iter()
            .map(|d| states.iter().map(|s| d.prob(*s)).sum())
            .collect()
    }
}

pub fn simulate(mdp: &Mdp, policy: &dyn Policy, steps: usize) -> DistributionTrace {
    let n = mdp.num_states();
    let mut cur = mdp.initial().probs().to_vec();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(Distribution::from_raw(cur.clone()));
    for k in 0..steps {
        let mut next = vec![0.0; n];
        for (s, &x) in cur.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            policy.actions(k, s, &mut |a, w| {
                for &(t, p) in mdp.sparse_row(s, a) {
                    next[t] += x * w * p;
                }
            });
        }
        out.push(Distribution::from_raw(next.clone()));
        cur = next;
    }
    DistributionTrace::from_steps(out)
}

pub fn power_iterate(mc: &MarkovChain, steps: usize) -> DistributionTrace {
    let n = mc.num_states();
    let mut cur = mc.initial().probs().to_vec();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(Distribution::from_raw(cur.clone()));
    for _ in 0..steps {
        let mut next = vec![0.0; n];
        for (s, &x) in cur.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for &(t, p) in mc.row(s) {
                next[t] += x * p;
            }
        }
        out.push(Distribution::from_raw(next.clone()));
        cur = next;
    }
    DistributionTrace::from_steps(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SyncVerdict {
    Pass,
    Fail,
}

/// Outcome of [`check_sync`]. On a pass `first_step` is the earliest `n₀`
/// from which the condition holds; on a fail it is the step of the last
/// violation (the start of the last low window for weak checks).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyncCheck {
    pub objective: Objective,
    pub epsilon: f64,
    pub window: usize,
    pub verdict: SyncVerdict,
    pub first_step: usize,
}

impl SyncCheck {
    pub fn passed(&self) -> bool {
        self.verdict == SyncVerdict::Pass
    }
}

/// Strong: every norm from `n₀` on is at least `1 − ε`. Weak: every run of
/// `window` consecutive norms from `n₀` on contains one at least `1 − ε`.
/// Either passes iff such an `n₀ ≤ N − window` exists.
pub fn check_sync(
    trace: &DistributionTrace,
    objective: Objective,
    epsilon: f64,
    window: usize,
) -> SyncCheck {
    let norms = trace.norms();
    let horizon = norms.len() - 1;
    let high = |x: f64| x >= 1.0 - epsilon;
    let last_bad = match objective {
        Objective::Strong => norms.iter().rposition(|x| !high(*x)),
        Objective::Weak => {
            let w = window.max(1);
            let mut run = 0;
            let mut last = None;
            for (i, x) in norms.iter().enumerate() {
                run = if high(*x) { 0 } else { run + 1 };
                if run >= w {
                    last = Some(i + 1 - w);
                }
            }
            last
        }
    };
    let n0 = last_bad.map_or(0, |i| i + 1);
    let (verdict, first_step) = if n0 + window <= horizon {
        (SyncVerdict::Pass, n0)
    } else {
        (SyncVerdict::Fail, last_bad.unwrap_or(0))
    };
    SyncCheck {
        objective,
        epsilon,
        window,
        verdict,
        first_step,
    }
}

/// `min(0.01, ν / (2(1 + ν)))` for the model's smallest positive
/// probability `ν`.
pub fn default_epsilon(mdp: &Mdp) -> f64 {
    let nu = mdp.min_prob();
    (nu / (2.0 * (1.0 + nu))).min(0.01)
}

/// `max(5000, 200·(m + d)·|L|)`.
pub fn default_horizon(mdp: &Mdp, strategy: &Strategy) -> usize {
    let phases = strategy.prefix().len() + strategy.period().len();
    (200 * phases * mdp.num_states()).max(5000)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::io::generate::gen_cerny;
    use crate::subset::{Letter, Mode};

    #[test]
    fn split_merge_first_step() {
        let m = fixtures::split_merge();
        let tr = simulate(&m, &Strategy::constant(0), 1);
        let x1 = &tr.steps()[1];
        assert_eq!(x1.prob(1), 0.5);
        assert_eq!(x1.prob(2), 0.5);
        assert_eq!(tr.norms()[1], 0.5);
    }

    #[test]
    fn deterministic_point_mass_keeps_norm_one() {
        let mut m = gen_cerny(4).unwrap().to_builder();
        m.set_initial_distribution(vec![1.0, 0.0, 0.0, 0.0]);
        let m = m.build().unwrap();
        let st =
            Strategy::new(Mode::Blind, vec![Letter::Blind(1)], vec![Letter::Blind(0)]).unwrap();
        let tr = simulate(&m, &st, 50);
        assert!(tr.norms().iter().all(|x| *x == 1.0));
        let c = check_sync(&tr, Objective::Strong, 0.01, 1);
        assert!(c.passed());
        assert_eq!(c.first_step, 0);
        assert!(check_sync(&tr, Objective::Weak, 0.01, 1).passed());
    }

    #[test]
    fn two_absorbing_fails() {
        let m = fixtures::two_absorbing();
        let tr = simulate(&m, &Strategy::constant(0), 100);
        assert!(tr.norms().iter().all(|x| (*x - 0.5).abs() < 1e-15));
        for obj in [Objective::Strong, Objective::Weak] {
            assert!(!check_sync(&tr, obj, 0.25, 1).passed());
        }
    }

    #[test]
    fn blind_sink_uniform_is_strong() {
        let m = fixtures::blind_sink();
        let tr = simulate(&m, &UniformPolicy { num_actions: 2 }, 5000);
        assert!(check_sync(&tr, Objective::Strong, 0.01, 1).passed());
    }

    #[test]
    fn weak_only_uniform_is_weak_only() {
        let m = fixtures::weak_only();
        let tr = simulate(&m, &UniformPolicy { num_actions: 2 }, 5000);
        assert!(check_sync(&tr, Objective::Weak, 0.01, 2).passed());
        assert!(!check_sync(&tr, Objective::Strong, 0.01, 2).passed());
    }

    #[test]
    fn two_cycle_chain_alternates() {
        let mc = MarkovChain::new(
            vec!["a".into(), "b".into()],
            vec![1.0, 0.0],
            vec![vec![(1, 1.0)], vec![(0, 1.0)]],
        )
        .unwrap();
        let tr = power_iterate(&mc, 10);
        assert!(tr.norms().iter().all(|x| *x == 1.0));
        assert_eq!(tr.steps()[3].prob(1), 1.0);
        assert_eq!(tr.steps()[4].prob(0), 1.0);
    }

    #[test]
    fn absorbing_chain_drains() {
        let mc = MarkovChain::new(
            vec!["t".into(), "z".into()],
            vec![1.0, 0.0],
            vec![vec![(0, 0.5), (1, 0.5)], vec![(1, 1.0)]],
        )
        .unwrap();
        let mass = power_iterate(&mc, 60).mass_on(&[0]);
        assert!(mass.windows(2).all(|w| w[1] <= w[0]));
        assert!(mass[60] < 1e-15);
    }

    #[test]
    fn weak_window_accounting() {
        let m = fixtures::two_absorbing();
        let mut tr = simulate(&m, &Strategy::constant(0), 9);
        tr.norms = vec![0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0];
        let c = check_sync(&tr, Objective::Weak, 0.1, 2);
        assert!(c.passed());
        assert_eq!(c.first_step, 3);
        let c = check_sync(&tr, Objective::Strong, 0.1, 1);
        assert!(!c.passed());
        assert_eq!(c.first_step, 9);
    }

    #[test]
    fn default_epsilon_uses_min_prob() {
        assert_eq!(default_epsilon(&gen_cerny(3).unwrap()), 0.01);
        let nu = 0.25;
        let eps = default_epsilon(&fixtures::two_families());
        assert!((eps - 0.01f64.min(nu / (2.0 * (1.0 + nu)))).abs() < 1e-15);
    }
}
