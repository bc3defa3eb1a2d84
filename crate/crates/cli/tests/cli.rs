use std::path::Path;

use serde_json::Value;
use sflab_cli::{run, CliError};

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn run_json(args: &[&str]) -> Value {
    let mut out = Vec::new();
    let argv: Vec<&str> = std::iter::once("sflab").chain(args.iter().copied()).collect();
    run(argv, &mut out).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    serde_json::from_slice(&out).unwrap()
}

fn run_err(args: &[&str]) -> CliError {
    let argv: Vec<&str> = std::iter::once("sflab").chain(args.iter().copied()).collect();
    run(argv, &mut Vec::new()).expect_err("expected failure")
}

fn check(name: &str, report: &Value) {
    let validator = jsonschema::validator_for(&schema(name)).unwrap();
    let errors: Vec<String> = validator.iter_errors(report).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{name}: {errors:#?}");
    assert_eq!(report["schema"], format!("sflab.{name}.v1"));
}

#[test]
fn brjuno_golden_report() {
    let r = run_json(&["brjuno", "--alpha", "golden", "--depth", "40", "--json"]);
    check("brjuno", &r);
    let res = &r["result"];
    assert_eq!(res["continued_fraction"]["quotients"].as_array().unwrap().len(), 40);
    assert_eq!(res["partial_sums"].as_array().unwrap().len(), 40);
    // F_40 / F_41 after the leading 0
    let conv = res["continued_fraction"]["convergents"].as_array().unwrap();
    let last = conv.last().unwrap();
    assert_eq!(last["p"], "102334155");
    assert_eq!(last["q"], "165580141");
    println!("brjuno golden depth 40 verdict: {}", res["verdict"]);
}

#[test]
fn inspect_geyer() {
    let r = run_json(&["inspect", "--lambda", "golden", "--P", "1,1", "--Q", "0,1", "--json"]);
    check("inspect", &r);
    let res = &r["result"];
    let crit = res["critical_points"].as_array().unwrap();
    assert_eq!(crit.len(), 1);
    assert!((crit[0]["location"]["re"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert_eq!(res["asymptotic_values"].as_array().unwrap().len(), 1);
    // lambda z e^z tends to 0 along the left half-line
    let av = &res["asymptotic_values"][0]["value"];
    assert!(av["re"].as_f64().unwrap().hypot(av["im"].as_f64().unwrap()) < 1e-9);
}

#[test]
fn orbit_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("orbit.csv");
    let r = run_json(&[
        "orbit",
        "--multiplier",
        "0.5",
        "--base",
        "quadratic",
        "--z0",
        "0.1",
        "--n",
        "200",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
    ]);
    check("orbit", &r);
    assert_eq!(r["result"]["status"], "converged-to-cycle");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("index,re,im,abs\n"));
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), r["result"]["length"].as_u64().unwrap() as usize + 1);
}

#[test]
fn cycles_of_quadratic() {
    let r = run_json(&[
        "cycles",
        "--lambda",
        "golden",
        "--base",
        "quadratic",
        "--period",
        "1",
        "--box=-4,4,-4,4",
        "--grid",
        "8",
        "--expansion-n",
        "3",
        "--json",
    ]);
    check("cycles", &r);
    let cycles = r["result"]["cycles"].as_array().unwrap();
    assert_eq!(cycles.len(), 2);
    assert!(cycles.iter().any(|c| c["classification"] == "irrationally-indifferent"));
    assert!(cycles.iter().any(|c| c["classification"] == "repelling"));
}

#[test]
fn linearize_and_siegel() {
    let r = run_json(&["linearize", "--alpha", "golden", "--base", "quadratic", "--order", "120", "--json"]);
    check("linearize", &r);
    assert!(r["result"]["conjugacy_residual"].as_f64().unwrap() < 1e-9);
    assert!(r["result"]["radius_estimate"].as_f64().is_some());

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("gamma.csv");
    let r = run_json(&[
        "siegel",
        "--alpha",
        "golden",
        "--base",
        "quadratic",
        "--order",
        "200",
        "--fraction",
        "0.8",
        "--samples",
        "16",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
    ]);
    check("siegel", &r);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 17);
}

#[test]
fn perturb_and_hartogs() {
    let r = run_json(&[
        "perturb",
        "--kind",
        "critical",
        "--alpha",
        "golden",
        "--base",
        "quadratic",
        "--b-list",
        "0,0.1,0.2",
        "--order",
        "6",
        "--json",
    ]);
    check("perturb", &r);
    let m = r["result"]["members"].as_array().unwrap();
    let ratio = m[2]["remainder_max"].as_f64().unwrap() / m[1]["remainder_max"].as_f64().unwrap();
    assert!((1.6..=2.4).contains(&ratio), "{ratio}");

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("h.csv");
    let r = run_json(&[
        "hartogs",
        "--kind",
        "singularity",
        "--alpha",
        "golden",
        "--base",
        "exp",
        "--b",
        "0.1",
        "--period",
        "2",
        "--window=-1,1,-1,1",
        "--res",
        "5",
        "5",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
    ]);
    check("hartogs", &r);
    let (v, l) = (&r["result"]["value_at_origin"], &r["result"]["origin_limit"]);
    assert!((v["re"].as_f64().unwrap() - l["re"].as_f64().unwrap()).abs() < 1e-12);
    assert!((v["im"].as_f64().unwrap() - l["im"].as_f64().unwrap()).abs() < 1e-12);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 26);
}

#[test]
fn probe_and_subhyp() {
    let r = run_json(&[
        "probe-mane",
        "--alpha",
        "golden",
        "--base",
        "quadratic",
        "--order",
        "200",
        "--fraction",
        "0.8",
        "--samples",
        "32",
        "--iters",
        "2000",
        "--json",
    ]);
    check("probe-mane", &r);
    let r = run_json(&["subhyp", "--multiplier", "0.5", "--base", "quadratic", "--budget", "500", "--json"]);
    check("subhyp", &r);
    assert_eq!(r["result"]["entries"][0]["fate"], "converges-to-attracting-cycle");
}

#[test]
fn render_writes_pgm() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("a.pgm");
    let r = run_json(&[
        "render",
        "--alpha",
        "golden",
        "--base",
        "quadratic",
        "--window=-2,2,-2,2",
        "--res",
        "16",
        "12",
        "--max-iter",
        "30",
        "--out-image",
        img.to_str().unwrap(),
        "--json",
    ]);
    check("render", &r);
    let bytes = std::fs::read(&img).unwrap();
    assert!(bytes.starts_with(b"P5\n16 12\n255\n"));
    assert_eq!(bytes.len(), b"P5\n16 12\n255\n".len() + 16 * 12);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run_err(&["render", "--alpha", "golden", "--base", "quadratic"]).exit_code(), 2);
    assert_eq!(run_err(&["inspect", "--alpha", "golden", "--P", "1,1", "--bogus"]).exit_code(), 2);
    assert_eq!(run_err(&["inspect", "--alpha", "golden", "--P", "1 + i"]).exit_code(), 2);
    assert_eq!(run_err(&["render", "--alpha", "golden", "--base", "quadratic", "--window", "1,0,0,1"]).exit_code(), 2);
    assert_eq!(run_err(&["frobnicate"]).exit_code(), 2);
}

#[test]
fn config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# brjuno settings\nalpha = silver\ndepth = 12\njson = true\n").unwrap();
    let r = run_json(&["brjuno", "--config", cfg.to_str().unwrap()]);
    check("brjuno", &r);
    assert_eq!(r["result"]["depth"], 12);
    let r = run_json(&["brjuno", "--config", cfg.to_str().unwrap(), "--depth", "20"]);
    assert_eq!(r["result"]["depth"], 20);
}

#[test]
fn report_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let r = run_json(&["brjuno", "--alpha", "3/7", "--json", "--report", path.to_str().unwrap()]);
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r, file);
    assert_eq!(r["result"]["verdict"], "rational");
}
