use ekr_core::harness::{load_campaign, Campaign, Mode, Outcome, RunOptions, BUILTIN_NAMES};
use ekr_core::Error;

#[test]
fn every_builtin_loads_and_validates() {
    for name in BUILTIN_NAMES {
        let c = load_campaign(&format!("builtin:{name}")).unwrap();
        c.validate().unwrap();
        assert_eq!(c.name, *name);
    }
    assert!(matches!(load_campaign("builtin:nope"), Err(Error::Config(_))));
    assert!(matches!(load_campaign("/definitely/not/here.toml"), Err(Error::Config(_))));
}

#[test]
fn unknown_fields_are_rejected() {
    let err = Campaign::from_toml("name = \"x\"\nkind = \"bound\"\ncolour = 3\n").unwrap_err();
    assert!(matches!(err, Error::Config(_) | Error::Parse(_)), "{err}");
}

#[test]
fn scans_must_be_record_only() {
    let text = "name = \"x\"\nkind = \"scan\"\nscan = \"h-max\"\nmode = \"assert-equality\"\n";
    assert!(Campaign::from_toml(text).and_then(|c| c.validate()).is_err());
}

#[test]
fn exception_downgrades_uniqueness() {
    let text = r#"
name = "edge"
kind = "bound"
mode = "assert-uniqueness"

[[cells]]
parts = [4, 4]
r = 4
pred = "set-intersecting:2"
exception = "Klein four-group"
"#;
    let c = Campaign::from_toml(text).unwrap();
    assert_eq!(c.mode, Mode::AssertUniqueness);
    let rep = c.run(&RunOptions::default()).unwrap();
    assert_eq!(rep.rows[0].outcome, Outcome::Pass);
    assert!(rep.rows[0].note.contains("Klein four-group"));
    assert_eq!(rep.exit_code(), 0);
}

#[test]
fn record_only_rows_never_fail() {
    let rep = Campaign::builtin("t-set-permutations").unwrap().run(&RunOptions::default()).unwrap();
    assert_eq!(rep.verdict.failed, 0);
    assert!(rep.rows.iter().all(|r| matches!(r.outcome, Outcome::Recorded | Outcome::Attention)));
    assert!(rep.verdict.attention > 0);
}

#[test]
fn timings_only_when_asked() {
    let c = Campaign::builtin("examples").unwrap();
    let plain = c.run(&RunOptions::default()).unwrap();
    assert!(plain.rows.iter().all(|r| r.runtime_ms.is_none()));
    let timed = c.run(&RunOptions { workers: 1, timings: true }).unwrap();
    assert!(timed.to_csv().unwrap().contains("runtime_ms"));
}
