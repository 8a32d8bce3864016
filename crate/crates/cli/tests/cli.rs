use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_satfloer"))
        .args(args)
        .current_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("../.."))
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run_json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

const DIFF: &[&str] = &["--knot", "builtin:m946", "--morphism", "builtin:morphism_m946_diff"];

#[test]
fn distinguish_examples() {
    let mut args = vec!["distinguish", "--pattern", "builtin:cfa_longitude"];
    args.extend_from_slice(DIFF);
    let v = run_json(&args);
    assert_eq!(v["outcome"], "distinct");
    assert_eq!(v["witness"], "alpha⊗e1 + alpha⊗e2");

    // the seven-generator Whitehead table makes the image a boundary (see README)
    let mut args = vec!["distinguish", "--pattern", "builtin:cfa_whitehead"];
    args.extend_from_slice(DIFF);
    let v = run_json(&args);
    assert_eq!(v["outcome"], "not-distinguished");
    assert_eq!(v["criterion_predicts_distinct"], true);
}

#[test]
fn no_cancel_mazur() {
    let v = run_json(&["no-cancel", "--pattern", "builtin:cfa_mazur_hat"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["generator"], "y4");
}

#[test]
fn positron_orbit() {
    let v = run_json(&["pi1-hom", "--presentation", "data/positron.json", "--degree", "3", "--surjective"]);
    assert_eq!(v["orbit_count"], 1);
    let orbit = v["orbits"][0].as_array().unwrap();
    assert!(orbit.iter().any(|h| h["m"] == "(2 3)" && h["a"] == "(1 2 3)"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["cfd", "builtin:nope"]).0, 2);
    assert_eq!(run(&["validate", "no/such/file.json"]).0, 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"generators":[{"name":"x","idem":"i0"},{"name":"y","idem":"i1"}],"edges":[{"from":"x","rho":"1","to":"y"},{"from":"y","rho":"2","to":"x"}]}"#,
    )
    .unwrap();
    assert_eq!(run(&["validate", bad.to_str().unwrap()]).0, 1);

    let pat = dir.path().join("loop_a.json");
    std::fs::write(
        &pat,
        r#"{"ring":"F2U","generators":[{"name":"a","idem":"i1"},{"name":"b","idem":"i0"}],
            "families":[{"from":"a","prefix":[],"repeat":["23"],"suffix":["2"],"alpha":1,"beta":0,"to":"b"}]}"#,
    )
    .unwrap();
    let cyc = dir.path().join("cyc.json");
    std::fs::write(
        &cyc,
        r#"{"generators":[{"name":"p","idem":"i1"},{"name":"q","idem":"i0"}],
            "edges":[{"from":"p","rho":"23","to":"p"},{"from":"p","rho":"2","to":"q"}]}"#,
    )
    .unwrap();
    assert_eq!(run(&["pair", pat.to_str().unwrap(), cyc.to_str().unwrap()]).0, 3);
}

/// A command exercising each builtin, with `{}` standing for the object.
fn probe(name: &str) -> Vec<String> {
    let v = |s: &[&str]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    match name {
        "unknot" | "fig8" | "m946" => v(&["hfk", "{}"]),
        "cfd_unknot" | "cfd_m946" => v(&["pair", "builtin:cfa_longitude", "{}"]),
        "morphism_m946_diff" => v(&["validate", "{}", "--target", "builtin:cfd_m946"]),
        "positron" => v(&["pi1-hom", "--presentation", "{}", "--degree", "3"]),
        _ => v(&["pair", "{}", "builtin:cfd_unknot"]),
    }
}

#[test]
fn dump_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for raw in satfloer::builtins::NAMES {
        let name = raw.replace("(p)", "(2)");
        let b = format!("builtin:{name}");
        let file = dir.path().join(format!("{}.json", name.replace(['(', ')'], "_")));
        let (code, _, err) = run(&["dump", &b, "--out", file.to_str().unwrap()]);
        assert_eq!(code, 0, "{err}");

        let mut validate = vec!["validate".to_string(), file.to_str().unwrap().to_string()];
        if name == "morphism_m946_diff" {
            validate.extend(["--target".to_string(), "builtin:cfd_m946".to_string()]);
        }
        let args: Vec<&str> = validate.iter().map(String::as_str).collect();
        assert_eq!(run(&args).0, 0, "{name} fails validation after reload");

        let cmd = probe(&name);
        let with = |target: &str| -> Vec<String> { cmd.iter().map(|a| a.replace("{}", target)).collect() };
        let a = with(&b);
        let c = with(file.to_str().unwrap());
        let ra = run(&a.iter().map(String::as_str).collect::<Vec<_>>());
        let rc = run(&c.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(ra.0, 0, "{name}: {}", ra.2);
        assert_eq!(ra, rc, "{name} output differs after round trip");
    }
}

#[test]
fn deterministic_output() {
    let mut args = vec!["distinguish", "--pattern", "builtin:cfa_cable_2_neg1"];
    args.extend_from_slice(DIFF);
    let first = run(&args);
    assert_eq!(first.0, 0);
    for _ in 0..3 {
        assert_eq!(run(&args), first);
    }
    let dot1 = run(&["dump", "builtin:cfa_whitehead", "--pair", "builtin:cfd_m946", "--dot"]);
    assert!(dot1.1.starts_with("digraph"));
    assert_eq!(run(&["dump", "builtin:cfa_whitehead", "--pair", "builtin:cfd_m946", "--dot"]), dot1);
}

#[test]
fn cfd_counts() {
    let v = run_json(&["cfd", "builtin:m946"]);
    assert_eq!((v["generators"].as_u64(), v["iota0"].as_u64(), v["edges"].as_u64()), (Some(17), Some(9), Some(17)));
}
