use std::path::PathBuf;

use bass_serre::cli::{run, RunOutput, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK, EXIT_USAGE};
use bass_serre::format::{parse_spec, render_spec};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn gog(args: &[&str]) -> RunOutput {
    run(std::iter::once("gog").chain(args.iter().copied()))
}

fn scratch(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("gog-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn bs_exit_codes() {
    let o = gog(&["bs", "2", "3"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.starts_with("Simple"));
    let o = gog(&["bs", "-2", "2"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.starts_with("NotSimple(unimodular)"));
    let o = gog(&["bs", "0", "2"]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.starts_with("error["));
}

#[test]
fn outbs_verdicts() {
    assert!(gog(&["outbs", "2", "4"]).stdout.starts_with("Simple"));
    let o = gog(&["outbs", "2", "6"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.starts_with("NotSimple"));
}

#[test]
fn analyze_exit_codes() {
    assert_eq!(gog(&["analyze", &data("bs23.gog")]).code, EXIT_OK);
    let o = gog(&["analyze", &data("ascending-loop.gog")]);
    assert_eq!(o.code, EXIT_INCONCLUSIVE, "{}", o.stdout);
    assert!(o.stdout.starts_with("Inconclusive(ascending)"));
    assert_eq!(gog(&["analyze", &data("free-vertex.gog")]).code, EXIT_INCONCLUSIVE);
    let o = gog(&["analyze", &data("free-vertex.gog"), "--assume-acyl", "v"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
    assert!(o.stdout.contains("assumed:"));
}

#[test]
fn input_errors_exit_2() {
    let o = gog(&["analyze", "/nonexistent/graph.gog"]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("E_IO"));
    let bad = scratch("bad.gog", "vertex v Z\nedge e v w\n");
    let o = gog(&["validate", &bad]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.starts_with("error["));
    let o = gog(&["act", &data("bs23.gog"), "--element", "v:(1) . f", "--point", "v:(0) | v:(1) . e", "--depth", "4"]);
    assert_eq!(o.code, EXIT_INPUT);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(gog(&[]).code, EXIT_USAGE);
    assert_eq!(gog(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(gog(&["bs", "2"]).code, EXIT_USAGE);
    assert_eq!(gog(&["tree", &data("bs23.gog")]).code, EXIT_USAGE);
    let h = gog(&["--help"]);
    assert_eq!(h.code, EXIT_OK);
    assert!(h.stdout.contains("analyze"));
}

#[test]
fn tree_spheres() {
    let o = gog(&["tree", &data("bs23.gog"), "--depth", "4"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("1 5 20 80 320"), "{}", o.stdout);
}

#[test]
fn output_is_deterministic_and_input_untouched() {
    for args in [
        vec!["analyze".to_string(), data("wise.gog"), "--json".into()],
        vec!["reduce".into(), data("bs22-planted.gog")],
        vec!["validate".into(), data("outbs-2-4.gog")],
    ] {
        let before = std::fs::read(&args[1]).unwrap();
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = gog(&argv);
        let b = gog(&argv);
        assert_eq!(a, b);
        assert_eq!(std::fs::read(&args[1]).unwrap(), before);
    }
}

#[test]
fn json_verdict_parses() {
    let o = gog(&["analyze", &data("leary-minasyan.gog"), "--json"]);
    let j: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(j["schema"], 1);
    assert_eq!(j["outcome"], "Simple");
}

#[test]
fn data_files_round_trip() {
    for f in std::fs::read_dir(data("")).unwrap() {
        let p = f.unwrap().path();
        let g = parse_spec(&std::fs::read_to_string(&p).unwrap()).unwrap();
        let text = render_spec(&g);
        let h = parse_spec(&text).unwrap();
        assert_eq!(render_spec(&h), text, "{}", p.display());
    }
}

#[test]
fn ns_and_octopus() {
    let o = gog(&["ns", &data("bs23.gog"), "--element", "v:(1) . e . v:(1) . ~e", "--point", "v:(0) | v:(2) . e . v:(1) . ~e", "-k", "6", "-d", "12"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stdout.contains("2 4 6 8 10 12"), "{}", o.stdout);
    let o = gog(&["octopus", "--n", "6", "--elements", "2,3", "--avoid", "e1"]);
    assert!(o.stdout.contains("prime 5"), "{}", o.stdout);
}
