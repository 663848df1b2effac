mod common;

use common::{random_cycle, random_letter, random_mdp, PAIRS};
use mdpsync::cycles::{delta, delta_bruteforce, round_trip, BRUTEFORCE_LIMIT};
use mdpsync::decide::{bounded_cycle_search, decide, verify_witness, Answer, DecideConfig};
use mdpsync::io::format::{mdp_to_json, parse_mdp, StrategyDocument};
use mdpsync::simulate::{power_iterate, simulate};
use mdpsync::subset::{replay, successor};
use mdpsync::synthesize::{product_chain, Strategy};
use mdpsync::{Mode, Objective};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn mode_of(flag: bool) -> Mode {
    if flag {
        Mode::Perfect
    } else {
        Mode::Blind
    }
}

/// Random eventually periodic strategy whose letters cover the cells the
/// run actually visits.
fn random_strategy(r: &mut ChaCha8Rng, m: &mdpsync::Mdp, mode: Mode) -> Strategy {
    let prefix_len = r.gen_range(0..4);
    let period_len = r.gen_range(1..4);
    let mut cell = m.initial_cell();
    let mut letters = Vec::new();
    for _ in 0..prefix_len + period_len {
        let l = random_letter(r, m, cell, mode);
        cell = successor(m, cell, &l).unwrap();
        letters.push(l);
    }
    let period = letters.split_off(prefix_len);
    Strategy::new(mode, letters, period).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn delta_matches_enumeration(seed: u64, perfect: bool) {
        let mut r = rng(seed);
        let m = random_mdp(&mut r, 6);
        let cyc = random_cycle(&mut r, &m, mode_of(perfect));
        prop_assert_eq!(delta(&m, &cyc), delta_bruteforce(&m, &cyc, BRUTEFORCE_LIMIT).unwrap());
    }

    #[test]
    fn delta_members_step_exactly(seed: u64, perfect: bool) {
        let mut r = rng(seed);
        let m = random_mdp(&mut r, 6);
        let cyc = random_cycle(&mut r, &m, mode_of(perfect));
        let rt = round_trip(&m, &cyc);
        prop_assert_eq!(rt.image(cyc.start()), cyc.start());
        for g in delta(&m, &cyc).members() {
            prop_assert_eq!(g[0], g[g.len() - 1]);
            for (j, l) in cyc.letters().iter().enumerate() {
                prop_assert!(g[j].is_subset_of(cyc.cells()[j]));
                let image = g[j].iter().fold(mdpsync::Cell::EMPTY, |acc, s| {
                    acc.union(m.post(s, l.action_for(s).unwrap()).unwrap())
                });
                prop_assert_eq!(image, g[j + 1]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn yes_verdicts_carry_verified_witnesses(seed: u64) {
        let mut r = rng(seed);
        let m = random_mdp(&mut r, 5);
        for (mode, obj) in PAIRS {
            let v = decide(&m, mode, obj, &DecideConfig::default());
            match v.answer {
                Answer::Yes => {
                    let w = v.witness.as_ref().unwrap();
                    prop_assert!(verify_witness(&m, w, mode, obj).is_ok());
                }
                Answer::No => prop_assert!(v.witness.is_none()),
                Answer::InconclusiveLimit => prop_assert!(false, "limit hit on a tiny model"),
            }
        }
    }

    #[test]
    fn bounded_yes_implies_yes(seed: u64) {
        let mut r = rng(seed);
        let m = random_mdp(&mut r, 4);
        for (mode, obj) in PAIRS {
            let b = bounded_cycle_search(&m, mode, obj, 6);
            if b.answer == Answer::Yes {
                prop_assert_eq!(decide(&m, mode, obj, &DecideConfig::default()).answer, Answer::Yes);
                let w = b.witness.as_ref().unwrap();
                prop_assert!(verify_witness(&m, w, mode, obj).is_ok());
            }
        }
    }

    #[test]
    fn monotone_in_mode_and_objective(seed: u64) {
        let mut r = rng(seed);
        let m = random_mdp(&mut r, 5);
        let yes = |mode, obj| decide(&m, mode, obj, &DecideConfig::default()).answer == Answer::Yes;
        for obj in [Objective::Strong, Objective::Weak] {
            prop_assert!(!yes(Mode::Blind, obj) || yes(Mode::Perfect, obj));
        }
        for mode in [Mode::Blind, Mode::Perfect] {
            prop_assert!(!yes(mode, Objective::Strong) || yes(mode, Objective::Weak));
        }
    }

    #[test]
    fn simulation_conserves_mass_and_tracks_support(seed: u64, perfect: bool) {
        let mut r = rng(seed);
        let m = random_mdp(&mut r, 6);
        let mode = mode_of(perfect);
        let st = random_strategy(&mut r, &m, mode);
        let steps = 40;
        let trace = simulate(&m, &st, steps);
        let mut cell = m.initial_cell();
        for (k, d) in trace.steps().iter().enumerate() {
            prop_assert!((d.total() - 1.0).abs() <= 1e-9);
            match mode {
                Mode::Blind => prop_assert_eq!(d.support(), cell),
                Mode::Perfect => prop_assert!(d.support().is_subset_of(cell)),
            }
            if k < steps {
                cell = cell.iter().fold(mdpsync::Cell::EMPTY, |acc, s| {
                    acc.union(m.post(s, st.decision(k, s)).unwrap())
                });
            }
        }
        if mode == Mode::Blind {
            let word: Vec<_> = (0..steps).map(|k| st.letter(k).clone()).collect();
            prop_assert_eq!(replay(&m, m.initial_cell(), &word).unwrap(), trace.steps()[steps].support());
        }
    }

    #[test]
    fn product_chain_norms_match(seed: u64, perfect: bool) {
        let mut r = rng(seed);
        let m = random_mdp(&mut r, 6);
        let st = random_strategy(&mut r, &m, mode_of(perfect));
        let a = simulate(&m, &st, 200);
        let b = power_iterate(product_chain(&m, &st).chain(), 200);
        for (x, y) in a.norms().iter().zip(b.norms()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn documents_round_trip(seed: u64, perfect: bool) {
        let mut r = rng(seed);
        let m = random_mdp(&mut r, 6);
        let text = mdp_to_json(&m);
        let again = parse_mdp(&text).unwrap();
        prop_assert_eq!(mdp_to_json(&again), text);
        prop_assert_eq!(again.initial().probs(), m.initial().probs());

        let st = random_strategy(&mut r, &m, mode_of(perfect));
        let doc = StrategyDocument::from_strategy(&m, &st);
        let parsed = StrategyDocument::from_json(&doc.to_json()).unwrap();
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(parsed.to_strategy(&m).unwrap(), st);
    }
}
