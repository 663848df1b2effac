//! Parametric model families.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Mdp, MdpBuilder, MAX_STATES};

/// The Černý automaton on `n` states as a deterministic MDP with a uniform
/// initial distribution. `r` rotates `i ↦ i+1 mod n`; `s` sends `0` to `1`
/// and fixes every other state. Its shortest reset word has length
/// `(n − 1)²`.
pub fn gen_cerny(n: usize) -> Result<Mdp> {
    if !(2..=MAX_STATES).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "Černý automaton needs 2..={MAX_STATES} states, got {n}"
        )));
    }
    let mut b = MdpBuilder::new((0..n).map(|i| i.to_string()), ["r", "s"]);
    b.set_initial_distribution(vec![1.0 / n as f64; n]);
    for i in 0..n {
        b.add_transition(i, 0, (i + 1) % n, 1.0);
        b.add_transition(i, 1, if i == 0 { 1 } else { i }, 1.0);
    }
    b.build()
}

/// Random MDP with `branching` distinct successors per row. Weights are drawn
/// uniformly from `[0.5, 1.5)` and normalized, so every positive entry is at
/// least `1 / (3·branching)`. The initial distribution is drawn the same way.
/// Equal arguments give identical models.
pub fn gen_random(
    num_states: usize,
    num_actions: usize,
    branching: usize,
    seed: u64,
) -> Result<Mdp> {
    if num_states == 0 || num_states > MAX_STATES {
        return Err(Error::InvalidParameter(format!(
            "state count must be in 1..={MAX_STATES}, got {num_states}"
        )));
    }
    if num_actions == 0 {
        return Err(Error::InvalidParameter("need at least one action".into()));
    }
    if branching == 0 || branching > num_states {
        return Err(Error::InvalidParameter(format!(
            "branching must be in 1..={num_states}, got {branching}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let row = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let mut probs = vec![0.0; num_states];
        let mut targets = sample(rng, num_states, branching).into_vec();
        targets.sort_unstable();
        let weights: Vec<f64> = targets.iter().map(|_| rng.gen_range(0.5..1.5)).collect();
        let total: f64 = weights.iter().sum();
        for (t, w) in targets.into_iter().zip(weights) {
            probs[t] = w / total;
        }
        probs
    };
    let mut b = MdpBuilder::new(
        (0..num_states).map(|i| format!("q{i}")),
        (0..num_actions).map(|i| format!("a{i}")),
    );
    for s in 0..num_states {
        for a in 0..num_actions {
            let probs = row(&mut rng);
            b.set_row(s, a, probs);
        }
    }
    let initial = row(&mut rng);
    b.set_initial_distribution(initial);
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::format::mdp_to_json;

    #[test]
    fn cerny_shape() {
        let m = gen_cerny(4).unwrap();
        assert!(m.is_deterministic());
        assert_eq!(m.post(3, 0).unwrap().single(), Some(0));
        assert_eq!(m.post(0, 1).unwrap().single(), Some(1));
        assert_eq!(m.post(2, 1).unwrap().single(), Some(2));
        assert_eq!(m.initial_cell().len(), 4);
        assert!(gen_cerny(1).is_err());
    }

    #[test]
    fn random_is_reproducible() {
        let a = mdp_to_json(&gen_random(5, 2, 2, 7).unwrap());
        let b = mdp_to_json(&gen_random(5, 2, 2, 7).unwrap());
        let c = mdp_to_json(&gen_random(5, 2, 2, 8).unwrap());
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_rows_have_requested_branching() {
        let m = gen_random(6, 3, 3, 1).unwrap();
        for s in 0..6 {
            for a in 0..3 {
                assert_eq!(m.post(s, a).unwrap().len(), 3);
            }
        }
        assert!(m.min_prob() >= 1.0 / 9.0);
        assert!(gen_random(3, 2, 4, 0).is_err());
    }
}
