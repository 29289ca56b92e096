use std::fs;
use std::path::Path;

use ordercraft::constructions::Certificate;
use ordercraft::families::{generate, FamilySpec};
use ordercraft::Poset;
use serde_json::Value;

mod common;
use common::{bin, code, golden_dir, run, GOLDEN};

#[test]
fn generate_matches_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    for (name, size, flags) in GOLDEN {
        let out = dir.path().join(format!("{name}.json"));
        let mut args = vec!["generate"];
        args.extend_from_slice(flags);
        args.extend_from_slice(&["--out", out.to_str().unwrap()]);
        let o = run(&args);
        assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stderr));
        let got = fs::read_to_string(&out).unwrap();
        let want = fs::read_to_string(golden_dir().join(format!("{name}.json"))).unwrap();
        assert_eq!(got, want, "{name} differs from golden");
        let p: Poset = serde_json::from_str(&got).unwrap();
        assert_eq!(p.len(), *size, "{name}");
    }
}

#[test]
fn every_family_has_a_golden() {
    let covered: Vec<&str> = GOLDEN
        .iter()
        .map(|(_, _, flags)| flags[flags.iter().position(|f| *f == "--family").unwrap() + 1])
        .collect();
    for f in ordercraft::families::Family::ALL {
        assert!(covered.contains(&f.name()), "{} has no golden file", f.name());
    }
}

#[test]
fn spec_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(&spec, r#"{"family":"delta","params":{"n":4},"with_bottom":false}"#).unwrap();
    let o = run(&["generate", "--spec", spec.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let want = fs::read_to_string(golden_dir().join("delta4.json")).unwrap();
    assert_eq!(String::from_utf8(o.stdout).unwrap(), want);
}

#[test]
fn golden_json_round_trips() {
    for (name, _, _) in GOLDEN {
        let text = fs::read_to_string(golden_dir().join(format!("{name}.json"))).unwrap();
        let p: Poset = serde_json::from_str(&text).unwrap();
        assert_eq!(p.to_json_string(), text.trim_end(), "{name}");
        let again: Poset = serde_json::from_str(&p.to_json_string()).unwrap();
        assert_eq!(again, p);
    }
    let spec: FamilySpec = serde_json::from_str(r#"{"family":"gamma","params":{"n":3}}"#).unwrap();
    let text = serde_json::to_string(&spec).unwrap();
    assert_eq!(serde_json::from_str::<FamilySpec>(&text).unwrap(), spec);
    assert_eq!(generate(&spec).unwrap().len(), 7);
}

#[test]
fn certificate_round_trips_through_cli() {
    let o = run(&["dichotomy", "--grid", "8", "--depth", "4"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let cert = Certificate::from_json_str(&text).unwrap();
    assert_eq!(cert.to_json_string(), text.trim_end());
    assert!(cert.verify());
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn end_to_end_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let s = |name: &str| d.join(name).to_str().unwrap().to_string();

    assert_eq!(code(&run(&["generate", "--family", "delta", "--n", "4", "--out", &s("delta4.json")])), 0);
    assert_eq!(
        fs::read_to_string(s("delta4.json")).unwrap(),
        fs::read_to_string(golden_dir().join("delta4.json")).unwrap()
    );
    assert_eq!(
        code(&run(&["ideals", "--input", &s("delta4.json"), "--lattice", "--out", &s("delta4_downsets.json")])),
        0
    );
    assert_eq!(code(&run(&["generate", "--family", "finite_powerset", "--n", "3", "--out", &s("b3.json")])), 0);
    assert_eq!(code(&run(&["generate", "--family", "l_alpha", "--a", "2", "--out", &s("l2.json")])), 0);

    // 0: embedding found, with a witness on stdout.
    let o = run(&["embed", "--pattern", &s("b3.json"), "--target", &s("delta4_downsets.json"), "--mode", "join"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["found"], true);
    assert_eq!(v["witness"]["certified"]["join_preserving"], true);

    // 1: the pentagon is not a sublattice of a distributive lattice.
    let o = run(&["embed", "--pattern", &s("l2.json"), "--target", &s("b3.json"), "--mode", "sublattice"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["found"], false);

    // 2: usage errors.
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["generate", "--family", "no_such_family", "--n", "2"])), 2);
    assert_eq!(code(&run(&["generate", "--family", "delta"])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "no_such_suite"])), 2);
    assert_eq!(code(&run(&["embed", "--pattern", &s("b3.json")])), 2);

    // 3: unreadable or malformed input.
    let bad = write(d, "bad.json", "{ not json");
    assert_eq!(code(&run(&["analyze", "--input", &bad])), 3);
    assert_eq!(code(&run(&["analyze", "--input", &s("missing.json")])), 3);
    let cyclic = write(d, "cyclic.json", r#"{"version":1,"n":2,"relation":{"kind":"leq","pairs":[[0,1],[1,0]]}}"#);
    assert_eq!(code(&run(&["analyze", "--input", &cyclic])), 3);
    assert_eq!(code(&run(&["verify-cert", "--input", &bad])), 3);

    // 4: budget exhausted.
    let o = bin()
        .args(["pipeline", "--input", &s("delta4_downsets.json"), "--k", "5"])
        .env("OC_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 4);

    // verify-cert: 0 on a good certificate, 1 on a tampered one.
    let o = run(&["pipeline", "--input", &s("delta4_downsets.json"), "--k", "5"]);
    assert_eq!(code(&o), 0);
    let cert_text = String::from_utf8(o.stdout).unwrap();
    let good = write(d, "cert.json", &cert_text);
    assert_eq!(code(&run(&["verify-cert", "--input", &good])), 0);
    let mut v: Value = serde_json::from_str(&cert_text).unwrap();
    v["evidence"][0]["holds"] = Value::Bool(false);
    let tampered = write(d, "tampered.json", &v.to_string());
    assert_eq!(code(&run(&["verify-cert", "--input", &tampered])), 1);

    // Suites: 0 when clean, 1 with a planted fault.
    assert_eq!(code(&run(&["verify", "--suite", "lem2_3", "--trials", "5", "--seed", "3"])), 0);
    let o = run(&["--jobs", "2", "verify", "--suite", "lem2_3", "--trials", "5", "--plant-fault"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["failures"].as_array().unwrap().len(), 1);

    // Separation check on the two reference chains.
    assert_eq!(code(&run(&["dichotomy", "--powerset", "6", "--check"])), 0);
    assert_eq!(code(&run(&["dichotomy", "--grid", "6", "--check"])), 1);

    // 1: construction preconditions that fail.
    assert_eq!(code(&run(&["dichotomy", "--powerset", "4", "--depth", "2"])), 1);
    assert_eq!(code(&run(&["pipeline", "--input", &s("b3.json"), "--k", "4"])), 1);
}

#[test]
fn analyze_ideals_and_dot() {
    let golden = golden_dir().join("delta4.json");
    let g = golden.to_str().unwrap();
    let o = run(&["analyze", "--input", g]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["stats"]["n"], 15);
    assert_eq!(v["structure"]["is_meet_semilattice"], true);

    let o = run(&["ideals", "--input", g]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 15);
    assert_eq!(v["all_principal"], true);

    let a = run(&["export", "--input", g, "--dot"]);
    let b = run(&["export", "--input", g, "--dot"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8(a.stdout).unwrap().starts_with("digraph"));
}

#[test]
fn ramsey_on_powerset_singletons() {
    let golden = golden_dir().join("finite_powerset_3.json");
    let o = run(&["ramsey", "--input", golden.to_str().unwrap(), "--antichain", "1,2,4", "--m", "3"]);
    assert_eq!(code(&o), 0);
    let cert = Certificate::from_json_str(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    assert!(cert.verify());
    let o = run(&["ramsey", "--input", golden.to_str().unwrap(), "--antichain", "1,3", "--m", "3"]);
    assert_eq!(code(&o), 1);
}
