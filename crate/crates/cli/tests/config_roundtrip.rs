use std::path::Path;

use rfbd_cli::config::RunConfig;

#[test]
fn shipped_config_is_the_reference_study_and_round_trips() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/case_study.json");
    let cfg = RunConfig::load(&path).unwrap();
    assert_eq!(cfg, RunConfig::case_study());

    let dir = tempfile::tempdir().unwrap();
    let copy = dir.path().join("copy.json");
    std::fs::write(&copy, cfg.to_json()).unwrap();
    assert_eq!(RunConfig::load(&copy).unwrap(), cfg);
}

#[test]
fn unknown_nested_keys_are_rejected() {
    let text = RunConfig::case_study().to_json();
    for (needle, injected) in [
        ("\"p_min\"", "\"colour\": 1, \"p_min\""),
        ("\"origin\"", "\"note\": 1, \"origin\""),
        ("\"initial_dispatch\"", "\"extra\": 1, \"initial_dispatch\""),
    ] {
        let bad = text.replacen(needle, injected, 1);
        let err = RunConfig::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("unknown field"), "{err}");
    }
}

#[test]
fn optional_mode_fields_default() {
    let mut value: serde_json::Value = serde_json::from_str(&RunConfig::case_study().to_json()).unwrap();
    value["modes"][0]
        .as_object_mut()
        .unwrap()
        .remove("first_window_binding_cap");
    let cfg = RunConfig::from_json(&value.to_string()).unwrap();
    assert!(!cfg.modes[0].first_window_binding_cap);
    assert!(cfg.modes[0].requirement.is_none());
}
