//! End-to-end tests of the binary: file parsing, exit codes, report
//! round-trips and determinism.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valdiff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("valdiff-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path
}

const EXAMPLE_ONE: &str = r#"
[[extension]]
kind = "kummer"
degree = 2
char = 0
residue_char = 3
e = 2
f = 1
group = [{ kind = "localized", g = "1", primes = [3] }]
delta = ["1/2"]
vp = ["1"]
"#;

const EXAMPLE_TWO: &str = r#"
[[extension]]
kind = "kummer"
degree = 5
char = 0
residue_char = 5
e = 5
f = 1
group = [
  { kind = "localized", g = "1", primes = [2] },
  { kind = "cyclic", g = "1/4" },
]
delta = ["1/5", "0"]
vp = ["0", "1"]
has_zeta = true
"#;

const NONZERO_AS: &str = r#"
[[extension]]
kind = "artin-schreier"
degree = 3
char = 3
residue_char = 3
e = 3
f = 1
group = [{ kind = "cyclic", g = "1" }]
delta = ["-1/3"]
"#;

#[test]
fn classify_zero_exits_zero() {
    let path = write_temp("ex1.toml", EXAMPLE_ONE);
    let out = run(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("omega = 0"), "{text}");
}

#[test]
fn classify_wild_composite_is_zero() {
    let path = write_temp("ex2.toml", EXAMPLE_TWO);
    let out = run(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn classify_nonzero_exits_one() {
    let path = write_temp("as.toml", NONZERO_AS);
    let out = run(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("nonzero"), "{text}");
}

#[test]
fn classify_malformed_exits_above_two() {
    let path = write_temp("bad.toml", "[[extension]]\nkind = 12\n");
    let out = run(&["classify", "--input", path.to_str().unwrap()]);
    let code = out.status.code().unwrap();
    assert!(code > 2, "expected exit > 2, got {code}");
    let missing = run(&["classify", "--input", "/nonexistent/x.toml"]);
    assert!(missing.status.code().unwrap() > 2);
}

#[test]
fn classify_json_round_trips() {
    let path = write_temp("ex1-json.toml", EXAMPLE_ONE);
    let out = run(&[
        "classify",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "json-lines",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().next().unwrap();
    let record: serde_json::Value = serde_json::from_str(line).unwrap();
    // the emitted descriptor re-parses to an equal descriptor
    let raw: valdiff_core::descriptor::RawExtension =
        serde_json::from_value(record["descriptor"].clone()).unwrap();
    let ext = valdiff_core::descriptor::normalize_extension(&raw).unwrap();
    let raw2 = valdiff_core::descriptor::extension_to_raw(&ext);
    assert_eq!(raw, raw2);
    assert_eq!(record["is_zero"], serde_json::Value::Bool(true));
    assert_eq!(record["case"], "kummer-ramified");
}

#[test]
fn check_dr_exit_codes() {
    // deeply ramified: 0
    let dr = r#"
char = 0
residue_char = 3
group = [{ kind = "localized", g = "1", primes = [3] }]
vp = ["1"]
residue_perfect = true
contains_zeta_p = true
independent_defect_field = true
"#;
    let path = write_temp("dr.toml", dr);
    let out = run(&["check-dr", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");

    // discretely valued: 1, with a confirmed witness
    let not_dr = r#"
char = 3
residue_char = 3
group = [{ kind = "cyclic", g = "1" }]
residue_perfect = true
independent_defect_field = true
"#;
    let path = write_temp("notdr.toml", not_dr);
    let out = run(&["check-dr", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("witness"), "{text}");

    // dense but not p-divisible at vp without flags: undecided is not
    // reachable here since non-divisibility is itself a violation; an
    // explicit undecided comes from a conflicting flag-free inconclusive
    // case: mixed characteristic without zeta_p and no violations
    let undecided = r#"
char = 0
residue_char = 5
group = [{ kind = "localized", g = "1", primes = [2, 5] }]
vp = ["4"]
residue_perfect = true
contains_zeta_p = false
independent_defect_field = false
drvr = false
"#;
    let path = write_temp("undec.toml", undecided);
    let out = run(&["check-dr", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn check_dr_witness_descriptors_round_trip() {
    let not_dr = r#"
char = 3
residue_char = 3
group = [{ kind = "cyclic", g = "1" }]
residue_perfect = false
independent_defect_field = true
"#;
    let path = write_temp("notdr-json.toml", not_dr);
    let out = run(&[
        "check-dr",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "json-lines",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    let record: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    let witnesses = record["witnesses"].as_array().unwrap();
    assert!(!witnesses.is_empty());
    for w in witnesses {
        assert_eq!(w["nonzero_confirmed"], serde_json::Value::Bool(true));
        let raw: valdiff_core::descriptor::RawExtension =
            serde_json::from_value(w["extension"].clone()).unwrap();
        let ext = valdiff_core::descriptor::normalize_extension(&raw).unwrap();
        assert_eq!(valdiff_core::descriptor::extension_to_raw(&ext), raw);
    }
}

#[test]
fn tower_classification() {
    let tower = r#"
[[step]]
kind = "inertial"
degree = 2
residue_char = 3

[[step]]
kind = "prime"
[step.extension]
kind = "artin-schreier"
degree = 3
char = 3
residue_char = 3
e = 1
f = 3
group = [{ kind = "cyclic", g = "1" }]
v_theta = ["0"]
"#;
    let path = write_temp("tower.toml", tower);
    let out = run(&["classify-tower", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("omega = 0"), "{text}");
}

#[test]
fn oracle_verify_deterministic() {
    let config = r#"
seed = 11
count = 12

[[relation]]
kind = "artin-schreier"
p = 2
group = [{ kind = "cyclic", g = "1" }]
b = [{ coeff = 1, exp = ["-1"] }]
"#;
    let path = write_temp("oracle.toml", config);
    let run1 = run(&["oracle-verify", "--input", path.to_str().unwrap()]);
    let run2 = run(&["oracle-verify", "--input", path.to_str().unwrap()]);
    assert_eq!(run1.status.code(), Some(0), "{run1:?}");
    assert_eq!(run1.stdout, run2.stdout, "reports must be byte-identical");
    // parallel workers keep the ordering
    let run4 = run(&[
        "oracle-verify",
        "--input",
        path.to_str().unwrap(),
        "--jobs",
        "4",
    ]);
    assert_eq!(run1.stdout, run4.stdout);
    // a different seed changes the batch but stays deterministic
    let run_seeded = run(&[
        "oracle-verify",
        "--input",
        path.to_str().unwrap(),
        "--seed",
        "99",
    ]);
    let run_seeded2 = run(&[
        "oracle-verify",
        "--input",
        path.to_str().unwrap(),
        "--seed",
        "99",
    ]);
    assert_eq!(run_seeded.stdout, run_seeded2.stdout);
}

#[test]
fn shipped_fixtures_run() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join("fixtures");
    let fixture = |name: &str| root.join(name).to_str().unwrap().to_string();
    let cases: Vec<(&str, Vec<String>, i32)> = vec![
        ("classify", vec![fixture("radical-tower-sqrt.toml")], 0),
        ("classify", vec![fixture("composite-valuation.toml")], 0),
        ("classify", vec![fixture("discrete-as.toml")], 1),
        ("check-dr", vec![fixture("deeply-ramified-field.toml")], 0),
        ("check-dr", vec![fixture("laurent-field.toml")], 1),
        ("classify-tower", vec![fixture("tower.toml")], 1),
        ("oracle-verify", vec![fixture("oracle-batch.toml")], 0),
    ];
    for (cmd, args, expected) in cases {
        let mut full = vec![cmd.to_string(), "--input".to_string()];
        full.extend(args.iter().cloned());
        let argv: Vec<&str> = full.iter().map(|s| s.as_str()).collect();
        let out = run(&argv);
        assert_eq!(
            out.status.code(),
            Some(expected),
            "{cmd} {args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn examples_stable_across_runs() {
    let a = run(&["examples"]);
    let b = run(&["examples"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let json = run(&["examples", "--format", "json-lines"]);
    assert_eq!(json.status.code(), Some(0));
    for line in String::from_utf8(json.stdout).unwrap().lines() {
        if line.starts_with('{') {
            let _: serde_json::Value = serde_json::from_str(line).unwrap();
        }
    }
}
