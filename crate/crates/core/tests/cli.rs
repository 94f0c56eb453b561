use convex_vc::cli::run_cli;
use convex_vc::constructions::random::random_disjoint_polygons;
use convex_vc::hypergraph::EdgeSet;
use convex_vc::io::{parse_document, serialize_family};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str], stdin: &str) -> Run {
    let argv: Vec<String> = std::iter::once("convex-vc").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_cli(&argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

const COLLINEAR: &str = r#"{"version":1,"ambient":"planar","bodies":[
  {"id":0,"kind":"point","vertices":[["0","0"]]},
  {"id":1,"kind":"segment","vertices":[["1","1"],["2","2"]]}]}"#;

#[test]
fn gen_emits_certified_document() {
    let r = run(&["gen", "--name", "five-segments"], "");
    assert_eq!(r.code, 0, "{}", r.err);
    let (family, cert) = parse_document(&r.out).unwrap();
    assert_eq!(family.len(), 5);
    let cert = cert.unwrap();
    assert_eq!(cert["fully_shattered"], Value::Bool(true));
    assert_eq!(cert["edge_count"], 32);
    assert_eq!(cert["version"], convex_vc::VERSION);
    assert_eq!(cert["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn four_disjoint_bodies_have_dimension_three() {
    let f = random_disjoint_polygons(4, &mut ChaCha8Rng::seed_from_u64(12));
    let r = run(&["vc"], &serialize_family(&f, None));
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(json(&r.out)["dim"], 3);
}

#[test]
fn collinear_input_is_rejected_unless_perturbed() {
    let r = run(&["enumerate"], COLLINEAR);
    assert_eq!(r.code, 2);
    assert!(r.out.is_empty());
    let err = json(&r.err);
    assert_eq!(err["error"], "general-position");
    assert_eq!(err["detail"]["collinear"].as_array().unwrap().len(), 3);

    let r = run(&["enumerate", "--perturb"], COLLINEAR);
    assert_eq!(r.code, 0, "{}", r.err);
    let edges = EdgeSet::from_text(2, &r.out).unwrap();
    assert_eq!(edges.len(), 4);
}

#[test]
fn validation_errors_exit_two() {
    assert_eq!(run(&["vc"], "{ not json").code, 2);
    assert_eq!(run(&["net"], COLLINEAR).code, 2);
    assert_eq!(run(&["net", "--eps", "3/2", "--perturb"], COLLINEAR).code, 2);
    assert_eq!(run(&["gen", "--name", "unbounded", "--n", "9"], "").code, 2);
    assert_eq!(run(&["frobnicate"], "").code, 2);
    let syntax = json(&run(&["vc"], "{\n  \"version\": }").err);
    assert_eq!(syntax["error"], "syntax");
    assert_eq!(syntax["detail"]["line"], 2);
}

#[test]
fn absent_results_exit_three() {
    let r = run(
        &["gen", "--name", "search", "--n", "4", "--class", "disjoint-convex", "--budget", "200"],
        "",
    );
    assert_eq!(r.code, 3);
    assert_eq!(json(&r.err)["error"], "not-found");
    let infeasible = r#"{"segments":[[[0,0],[1,0]]],"halfplanes":[{"a":1,"b":0,"c":-5}]}"#;
    let r = run(&["hitset"], infeasible);
    assert_eq!(r.code, 3);
    assert_eq!(json(&r.err)["detail"]["halfplane"], 0);
}

#[test]
fn hitset_reports_trace_and_optimum() {
    let inst = convex_vc::io::serialize_hitting_instance(&convex_vc::solver::planted_instance(2, 5).unwrap().instance);
    let r = run(&["hitset", "--exact-cap", "4", "--seed", "3"], &inst);
    assert_eq!(r.code, 0, "{}", r.err);
    let v = json(&r.out);
    assert_eq!(v["optimum"], 2);
    assert!(v["size"].as_u64().unwrap() >= 2);
}

#[test]
fn approx_and_net_report_exact_values() {
    let f = random_disjoint_polygons(6, &mut ChaCha8Rng::seed_from_u64(2));
    let doc = serialize_family(&f, None);
    let v = json(&run(&["approx", "--eps", "1/2"], &doc).out);
    assert_eq!(v["m"], 6);
    assert_eq!(v["discrepancy"], "0");
    let v = json(&run(&["net", "--eps", "1/2"], &doc).out);
    assert_eq!(v["d"], 3);
    assert_eq!(v["eps"], "1/2");
}

#[test]
fn check_bounds_on_constructions() {
    let doc = run(&["gen", "--name", "four-one-intersection"], "").out;
    let v = json(&run(&["check-bounds"], &doc).out);
    assert_eq!(v["shattered"], true);
    assert_eq!(v["turan"]["intersecting_pairs"], 1);
    assert_eq!(v["all_ok"], true);
}

#[test]
fn render_and_output_file() {
    let doc = run(&["gen", "--name", "three-disjoint"], "").out;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.svg");
    let r = run(&["render", "--witnesses", "--output", path.to_str().unwrap()], &doc);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.contains("<!-- convex-vc"));
    assert_eq!(svg.matches(r#"<line class="witness""#).count(), 8);
    assert_eq!(svg.matches(r#"<polygon class="body""#).count(), 3);
}

#[test]
fn input_file_and_digest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("five.json");
    let doc = run(&["gen", "--name", "five-segments"], "").out;
    std::fs::write(&path, &doc).unwrap();
    let from_file = run(&["vc", "--input", path.to_str().unwrap()], "");
    let from_stdin = run(&["vc"], &doc);
    assert_eq!(from_file.out, from_stdin.out);
    let digest = json(&from_file.out)["input_sha256"].as_str().unwrap().to_string();
    assert_ne!(digest, json(&run(&["vc"], &doc.replace("  ", " ")).out)["input_sha256"]);
    let missing = run(&["vc", "--input", dir.path().join("absent.json").to_str().unwrap()], "");
    assert_eq!(missing.code, 2);
}

#[test]
fn lifted_generation_round_trips() {
    let r = run(&["gen", "--name", "unbounded", "--n", "4", "--lift"], "");
    assert_eq!(r.code, 0, "{}", r.err);
    let (family, cert) = parse_document(&r.out).unwrap();
    assert_eq!(family.levels(), Some(&[0, 1, 2, 3][..]));
    assert_eq!(cert.unwrap()["lift"]["shattered_by_vertical"], true);
    assert_eq!(run(&["vc"], &r.out).out.contains("\"dim\": 4"), true);
}
