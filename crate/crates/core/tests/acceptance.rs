//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any FAIL.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{random_cycle, random_mdp, PAIRS};
use mdpsync::cycles::{delta, delta_bruteforce, is_witness, CyclicFamily, BRUTEFORCE_LIMIT};
use mdpsync::decide::{bounded_cycle_search, decide, Answer, DecideConfig, Verdict};
use mdpsync::fixtures;
use mdpsync::io::generate::{gen_cerny, gen_random};
use mdpsync::io::syncword::shortest_sync_word;
use mdpsync::model::{classify, induced_chain};
use mdpsync::simulate::{
    check_sync, default_epsilon, default_horizon, power_iterate, simulate, MemorylessRule,
};
use mdpsync::synthesize::{product_chain, strategy_from_witness};
use mdpsync::{Cell, Mdp, Mode, Objective};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CYCLE_COUNT: usize = 1000;
const CYCLE_BUDGET: Duration = Duration::from_secs(60);
const CORPUS_SIZE: usize = 500;
const CORPUS_BUDGET: Duration = Duration::from_secs(600);
const MAX_BOUND: usize = 12;
const NORM_PAIRS: usize = 100;
const NORM_STEPS: usize = 1000;
const NORM_TOLERANCE: f64 = 1e-12;
const CERNY_BUDGET: Duration = Duration::from_secs(30);
const CHAIN_COUNT: usize = 50;
const CHAIN_MIN_PROB: f64 = 0.05;
const TRANSIENT_STEP: usize = 500;
const TRANSIENT_LIMIT: f64 = 1e-6;
const MASS_TOLERANCE: f64 = 1e-9;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// One random model with its decide verdict for each mode/objective pair.
struct CorpusEntry {
    mdp: Mdp,
    verdicts: Vec<Verdict>,
}

fn delta_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xde17a);
    let start = Instant::now();
    let mut mismatches = 0;
    let mut multi = 0;
    for i in 0..CYCLE_COUNT {
        let m = random_mdp(&mut rng, 6);
        let mode = if i % 2 == 0 {
            Mode::Perfect
        } else {
            Mode::Blind
        };
        let cyc = random_cycle(&mut rng, &m, mode);
        let oracle =
            delta_bruteforce(&m, &cyc, BRUTEFORCE_LIMIT).expect("cells of at most 6 states");
        if delta(&m, &cyc) != oracle {
            mismatches += 1;
        }
        if oracle.len() > 1 {
            multi += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && elapsed < CYCLE_BUDGET,
        format!(
            "{CYCLE_COUNT} cycles ({multi} with several minimal members), \
             {mismatches} mismatches, {elapsed:.2?}"
        ),
    )
}

fn two_families_members() -> Outcome {
    let m = fixtures::two_families();
    let cyc = fixtures::two_families_cycle(&m);
    let c = |names: &[&str]| -> Cell { names.iter().map(|n| m.state_index(n).unwrap()).collect() };
    let expected = CyclicFamily::new(vec![
        vec![c(&["2"]), c(&["3"]), c(&["4"]), c(&["2"])],
        vec![c(&["5"]), c(&["6"]), c(&["7"]), c(&["5"])],
    ]);
    let got = delta(&m, &cyc);
    let strong = is_witness(&m, &cyc, Objective::Strong);
    let weak = is_witness(&m, &cyc, Objective::Weak);
    outcome(
        got == expected && !strong && !weak,
        format!("{} members, witness strong={strong} weak={weak}", got.len()),
    )
}

fn build_corpus() -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee);
    (0..CORPUS_SIZE)
        .map(|_| {
            let mdp = random_mdp(&mut rng, 4);
            let verdicts = PAIRS
                .iter()
                .map(|(mode, obj)| decide(&mdp, *mode, *obj, &DecideConfig::default()))
                .collect();
            CorpusEntry { mdp, verdicts }
        })
        .collect()
}

fn decision_cross_check(corpus: &[CorpusEntry], decide_time: Duration) -> Outcome {
    let start = Instant::now();
    let mut disagreements = 0;
    let mut inconclusive = 0;
    for entry in corpus {
        for ((mode, obj), v) in PAIRS.iter().zip(&entry.verdicts) {
            if v.answer == Answer::InconclusiveLimit {
                inconclusive += 1;
                continue;
            }
            for bound in 1..=MAX_BOUND {
                let b = bounded_cycle_search(&entry.mdp, *mode, *obj, bound).answer;
                let bad = (b == Answer::Yes && v.answer != Answer::Yes)
                    || (v.answer == Answer::No && b != Answer::No);
                if bad {
                    disagreements += 1;
                }
            }
        }
    }
    let elapsed = decide_time + start.elapsed();
    outcome(
        disagreements == 0 && inconclusive == 0 && elapsed < CORPUS_BUDGET,
        format!(
            "{CORPUS_SIZE} models x 4 pairs x bounds 1..={MAX_BOUND}, {disagreements} disagreements, \
             {inconclusive} inconclusive, {elapsed:.2?}"
        ),
    )
}

fn monotonicity(corpus: &[CorpusEntry]) -> Outcome {
    let yes = |e: &CorpusEntry, i: usize| e.verdicts[i].answer == Answer::Yes;
    let mut violations = 0;
    for e in corpus {
        // Indices follow PAIRS: blind strong, blind weak, perfect strong, perfect weak.
        let implications = [(0, 2), (1, 3), (0, 1), (2, 3)];
        violations += implications
            .iter()
            .filter(|(a, b)| yes(e, *a) && !yes(e, *b))
            .count();
    }
    outcome(violations == 0, format!("{violations} violations"))
}

fn witness_soundness(corpus: &[CorpusEntry]) -> Outcome {
    let bundled = [
        fixtures::blind_sink(),
        fixtures::weak_only(),
        fixtures::split_merge(),
        fixtures::needs_memory(),
        fixtures::two_families(),
    ];
    let bundled_entries: Vec<CorpusEntry> = bundled
        .into_iter()
        .map(|mdp| {
            let verdicts = PAIRS
                .iter()
                .map(|(mode, obj)| decide(&mdp, *mode, *obj, &DecideConfig::default()))
                .collect();
            CorpusEntry { mdp, verdicts }
        })
        .collect();
    let mut checked = 0;
    let mut failures = 0;
    for e in corpus.iter().chain(&bundled_entries) {
        for ((mode, obj), v) in PAIRS.iter().zip(&e.verdicts) {
            let Some(w) = v.witness.as_ref().filter(|_| v.answer == Answer::Yes) else {
                continue;
            };
            checked += 1;
            let Ok(st) = strategy_from_witness(&e.mdp, w, *mode, *obj) else {
                failures += 1;
                continue;
            };
            let trace = simulate(&e.mdp, &st, default_horizon(&e.mdp, &st));
            let check = check_sync(&trace, *obj, default_epsilon(&e.mdp), st.period().len());
            if !check.passed() {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0 && checked > 0,
        format!("{checked} yes verdicts checked, {failures} failures"),
    )
}

fn norm_equality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e0);
    let mut pairs = 0;
    let mut worst: f64 = 0.0;
    while pairs < NORM_PAIRS {
        let m = random_mdp(&mut rng, 6);
        let (mode, obj) = PAIRS[rng.gen_range(0..PAIRS.len())];
        let v = decide(&m, mode, obj, &DecideConfig::default());
        let Some(w) = v.witness else { continue };
        let st = strategy_from_witness(&m, &w, mode, obj).expect("decide witnesses verify");
        let direct = simulate(&m, &st, NORM_STEPS);
        let product = power_iterate(product_chain(&m, &st).chain(), NORM_STEPS);
        for (a, b) in direct.norms().iter().zip(product.norms()) {
            worst = worst.max((a - b).abs());
        }
        pairs += 1;
    }
    outcome(
        worst <= NORM_TOLERANCE,
        format!("{NORM_PAIRS} pairs, max deviation {worst:.3e}"),
    )
}

fn cerny() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 3..=8 {
        let start = Instant::now();
        let m = gen_cerny(n).unwrap();
        let answer = decide(&m, Mode::Blind, Objective::Strong, &DecideConfig::default()).answer;
        let len = shortest_sync_word(&m).unwrap().map(|w| w.len());
        let elapsed = start.elapsed();
        ok &= answer == Answer::Yes && len == Some((n - 1) * (n - 1)) && elapsed < CERNY_BUDGET;
        parts.push(format!("n={n}: {answer}, |w|={len:?}, {elapsed:.2?}"));
    }
    outcome(ok, parts.join("; "))
}

fn bundled_verdicts() -> Outcome {
    let ans = |m: &Mdp, mode, obj| decide(m, mode, obj, &DecideConfig::default()).answer;
    let blind_sink = ans(&fixtures::blind_sink(), Mode::Blind, Objective::Strong) == Answer::Yes;
    let weak_only = ans(&fixtures::weak_only(), Mode::Perfect, Objective::Weak) == Answer::Yes;
    let f6 = fixtures::needs_memory();
    let needs_memory = ans(&f6, Mode::Perfect, Objective::Strong) == Answer::Yes;
    let n = f6.num_states();
    let k = f6.num_actions();
    let eps = default_epsilon(&f6);
    let mut memoryless_passes = 0;
    for code in 0..k.pow(n as u32) {
        let rule: Vec<usize> = (0..n).map(|s| code / k.pow(s as u32) % k).collect();
        let trace = simulate(&f6, &MemorylessRule(rule), 5000);
        if check_sync(&trace, Objective::Strong, eps, 1).passed() {
            memoryless_passes += 1;
        }
    }
    let ta = fixtures::two_absorbing();
    let absorbing = PAIRS.iter().all(|(m, o)| ans(&ta, *m, *o) == Answer::No);
    outcome(
        blind_sink && weak_only && needs_memory && memoryless_passes == 0 && absorbing,
        format!(
            "blind_sink blind strong {blind_sink}, weak_only perfect weak {weak_only}, needs_memory perfect strong {needs_memory}, \
             {memoryless_passes}/{} memoryless rules pass, two-absorbing all no {absorbing}",
            k.pow(n as u32)
        ),
    )
}

fn transient_decay() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a5);
    let mut worst_transient: f64 = 0.0;
    let mut worst_mass: f64 = 0.0;
    for _ in 0..CHAIN_COUNT {
        let branching = rng.gen_range(1..=6);
        let m = gen_random(6, 1, branching, rng.gen()).unwrap();
        let mc = induced_chain(&m, &[0; 6]).unwrap();
        assert!(mc.min_prob() >= CHAIN_MIN_PROB);
        let transient = classify(&mc).transient_states();
        let trace = power_iterate(&mc, TRANSIENT_STEP);
        worst_transient = worst_transient.max(trace.mass_on(&transient)[TRANSIENT_STEP]);
        for d in trace.steps() {
            worst_mass = worst_mass.max((d.total() - 1.0).abs());
        }
    }
    outcome(
        worst_transient < TRANSIENT_LIMIT && worst_mass <= MASS_TOLERANCE,
        format!(
            "{CHAIN_COUNT} chains, max transient mass {worst_transient:.3e}, \
             max mass drift {worst_mass:.3e}"
        ),
    )
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |id: usize, name: &str, o: Outcome| {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {id} ({name}): {}", o.detail);
        all &= o.passed;
    };
    report(1, "delta equivalence", delta_equivalence());
    report(2, "two-member family", two_families_members());
    let start = Instant::now();
    let corpus = build_corpus();
    let decide_time = start.elapsed();
    report(
        3,
        "decision cross-check",
        decision_cross_check(&corpus, decide_time),
    );
    report(4, "monotonicity", monotonicity(&corpus));
    report(5, "witness soundness", witness_soundness(&corpus));
    report(6, "norm equality", norm_equality());
    report(7, "cerny", cerny());
    report(8, "bundled verdicts", bundled_verdicts());
    report(9, "transient decay", transient_decay());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
