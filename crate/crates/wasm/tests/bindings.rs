use mdpsync_wasm::*;
use serde_json::Value;

#[test]
fn fixtures_are_listed_and_loadable() {
    let names = fixture_names_impl();
    assert!(names.contains(&"needs_memory".to_string()));
    for n in names {
        assert!(fixture_impl(&n).unwrap().contains("\"states\""));
    }
    assert!(fixture_impl("nope").is_err());
}

#[test]
fn decide_report_includes_strategy_on_yes() {
    let model = fixture_impl("needs_memory").unwrap();
    let r: Value =
        serde_json::from_str(&decide_impl(&model, "perfect", "strong").unwrap()).unwrap();
    assert_eq!(r["answer"], "yes");
    assert_eq!(r["empirical"]["verdict"], "pass");
    assert!(r["strategy"]["period"].is_array());
    let model = fixture_impl("two_absorbing").unwrap();
    let r: Value = serde_json::from_str(&decide_impl(&model, "blind", "weak").unwrap()).unwrap();
    assert_eq!(r["answer"], "no");
    assert!(r["strategy"].is_null());
    assert!(decide_impl(&model, "sideways", "weak").is_err());
}

#[test]
fn norm_curves() {
    let model = fixture_impl("blind_sink").unwrap();
    let synth = witness_norms_impl(&model, "blind", "strong", 50).unwrap();
    assert_eq!(synth.len(), 51);
    assert_eq!(synth[0], 1.0);
    assert!(synth[50] > 0.99);
    let uniform = uniform_norms_impl(&model, 50).unwrap();
    assert_eq!(uniform.len(), 51);
    let none = witness_norms_impl(
        &fixture_impl("two_absorbing").unwrap(),
        "perfect",
        "weak",
        10,
    )
    .unwrap();
    assert!(none.is_empty());
    assert!(uniform_norms_impl(&model, MAX_STEPS + 1).is_err());
}

#[test]
fn cerny_word() {
    let model = cerny_impl(4).unwrap();
    assert_eq!(sync_word_impl(&model).unwrap().split(' ').count(), 9);
    assert!(sync_word_impl(&fixture_impl("split_merge").unwrap()).is_err());
}
