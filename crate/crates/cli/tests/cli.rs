//! End-to-end tests of the `qgrass` binary: argument handling, JSON shape,
//! exit codes, determinism, and the result cache.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qgrass"));
    // the ambient environment must not silently enable caching
    cmd.env_remove("QGRASS_CACHE_DIR");
    cmd
}

fn invoke(args: &[&str]) -> (Value, i32, String) {
    let Output { status, stdout, stderr } = bin().args(args).output().expect("binary runs");
    let text = String::from_utf8(stdout).expect("utf-8 output");
    let value = serde_json::from_str(text.trim())
        .unwrap_or_else(|e| panic!("bad JSON from {args:?}: {e}\nstdout: {text}\nstderr: {}",
            String::from_utf8_lossy(&stderr)));
    (value, status.code().expect("exit code"), text)
}

fn invoke_ok(args: &[&str]) -> Value {
    let (value, code, _) = invoke(args);
    assert_eq!(code, 0, "unexpected exit from {args:?}: {value}");
    value
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("qgrass-{tag}"));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn degree_anchor_all_methods_agree() {
    let v = invoke_ok(&["degree", "3", "2", "1"]);
    assert_eq!(v["value"], "55");
    assert_eq!(v["agree"], true);
    assert_eq!(v["parity"], "odd");
    for route in ["chains", "closed", "windowed", "vi", "ring"] {
        assert_eq!(v["methods"][route], "55", "route {route}");
    }
}

#[test]
fn degree_line_and_classical_cases() {
    assert_eq!(invoke_ok(&["degree", "5", "1", "7"])["value"], "1");
    let v = invoke_ok(&["degree", "2", "2", "0"]);
    assert_eq!(v["value"], "2");
    assert_eq!(v["parity"], "even");
}

#[test]
fn degree_single_method_reports_only_that_route() {
    let v = invoke_ok(&["degree", "3", "2", "1", "--method", "closed"]);
    assert_eq!(v["methods"].as_object().unwrap().len(), 1);
    assert_eq!(v["methods"]["closed"], "55");
    assert_eq!(v["agree"], true);
}

#[test]
fn invalid_parameters_exit_2() {
    let (v, code, _) = invoke(&["degree", "0", "2", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "invalid");
}

#[test]
fn poset_cap_exits_3() {
    let (v, code, _) = invoke(&["degree", "3", "2", "1", "--cap-poset", "5"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "cap");
    let (_, code, _) = invoke(&["poset", "3", "2", "1", "--cap-poset", "5"]);
    assert_eq!(code, 3);
}

#[test]
fn poset_summary_and_dump() {
    let v = invoke_ok(&["poset", "3", "2", "1"]);
    assert_eq!(v["size"], 20);
    assert_eq!(v["degree"], "55");
    assert!(v.get("elements").is_none());

    let v = invoke_ok(&["poset", "3", "2", "1", "--dump"]);
    let elements = v["elements"].as_array().unwrap();
    assert_eq!(elements.len(), 20);
    let first = &elements[0];
    assert_eq!(first["alpha"], serde_json::json!([1, 2]));
    assert_eq!(first["level"], 0);
    assert_eq!(first["chains"], "1");
    assert_eq!(elements.last().unwrap()["chains"], "55");
    assert_eq!(elements.last().unwrap()["rank"], 11);
}

#[test]
fn poset_with_one_row_is_a_single_chain() {
    // p = 1: the poset is totally ordered, so there is one maximal chain
    let v = invoke_ok(&["poset", "2", "1", "2", "--dump"]);
    assert_eq!(v["size"], 9);
    assert_eq!(v["degree"], "1");
    for (i, e) in v["elements"].as_array().unwrap().iter().enumerate() {
        assert_eq!(e["rank"], i);
        assert_eq!(e["chains"], "1");
        let covers = e["covers"].as_array().unwrap();
        assert_eq!(covers.len(), usize::from(i > 0));
    }
}

#[test]
fn qlr_top_classes_square_to_q_squared() {
    let v = invoke_ok(&["qlr", "--alpha", "3,4", "--beta", "3,4", "--m", "2", "--p", "2"]);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["gamma"], serde_json::json!([1, 2]));
    assert_eq!(entries[0]["d"], 2);
    assert_eq!(entries[0]["n"], "1");
}

#[test]
fn vi_initial_and_window_edge_values() {
    let v = invoke_ok(&["vi", "--K", "1,2", "--m", "2", "--p", "2"]);
    assert_eq!(v["exact"], "1");
    let re = v["numeric"]["re"].as_str().unwrap();
    assert!(re.starts_with("1.0000000"), "numeric re = {re}");

    // window edge: i_p = i_1 + m + p forces the count to vanish
    let v = invoke_ok(&["vi", "--K", "1,5", "--m", "2", "--p", "2"]);
    assert_eq!(v["exact"], "0");
}

#[test]
fn ideal_reports_generators_stanley_reisner_and_quadrics() {
    let v = invoke_ok(&["ideal", "2", "2", "0", "--quadrics"]);
    assert_eq!(v["generators"].as_array().unwrap().len(), 1);
    assert_eq!(v["sr"]["facet_count"], "2");
    assert_eq!(v["sr"]["facet_size"], 5);
    assert_eq!(v["quadrics"]["dimension"], 1);
    assert_eq!(v["quadrics"]["forms"].as_array().unwrap()[0].as_array().unwrap().len(), 3);

    let v = invoke_ok(&["ideal", "2", "2", "1"]);
    assert_eq!(v["generators"].as_array().unwrap().len(), 3);
    assert_eq!(v["sr"]["facet_count"], "8");
    assert_eq!(v["sr"]["facet_size"], 9);
    assert!(v["quadrics"].is_null());
    let hilbert = v["sr"]["hilbert"].as_array().unwrap();
    assert_eq!(hilbert[0], "1");
    assert_eq!(hilbert[1], "12"); // one standard monomial per coordinate
}

#[test]
fn poleplace_torus_instance_has_two_real_solutions() {
    let plane = "1,1;1,2;1,3;1,4";
    let v = invoke_ok(&[
        "poleplace", "--plane", plane, "--plane", plane, "--plane", plane, "--plane", plane,
        "--s", "1,2,3,4",
    ]);
    assert_eq!(v["degenerate"], false);
    assert_eq!(v["report"]["kernel_dimension"], 2);
    assert_eq!(v["report"]["real_solutions"], 2);
    let solutions = v["report"]["solutions"].as_array().unwrap();
    let total: i64 = solutions.iter().map(|s| s["multiplicity"].as_i64().unwrap()).sum();
    assert_eq!(total, 2);
    assert_eq!(v["report"]["discriminant"], "13");
}

#[test]
fn poleplace_random_is_seed_deterministic() {
    let (_, _, first) = invoke(&["poleplace", "--random", "--seed", "11"]);
    let (_, _, again) = invoke(&["poleplace", "--random", "--seed", "11"]);
    assert_eq!(first, again);
    let (_, _, other) = invoke(&["poleplace", "--random", "--seed", "12"]);
    assert_ne!(first, other);
}

#[test]
fn poleplace_requires_four_planes_or_random() {
    let (v, code, _) = invoke(&["poleplace", "--plane", "1,0;0,1;1,1;2,1", "--s", "1,2,3,4"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "invalid");
}

#[test]
fn verify_single_criterion_passes() {
    let v = invoke_ok(&["verify", "--criterion", "anchor_degree_55"]);
    assert_eq!(v["all_passed"], true);
    let criteria = v["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 1);
    assert_eq!(criteria[0]["name"], "anchor_degree_55");
    assert_eq!(criteria[0]["passed"], true);
}

#[test]
fn verify_rejects_unknown_names_and_grids() {
    let (v, code, _) = invoke(&["verify", "--criterion", "no_such_thing"]);
    assert_eq!(code, 2);
    assert!(v["error"]["message"].as_str().unwrap().contains("anchor_degree_55"));
    let (_, code, _) = invoke(&["verify", "--grid", "huge"]);
    assert_eq!(code, 2);
}

#[test]
fn cache_replays_byte_identical_results() {
    let dir = tmp_dir("cache");
    let dir_arg = dir.to_str().unwrap();

    let (_, code, first) = invoke(&["degree", "3", "2", "1", "--cache-dir", dir_arg]);
    assert_eq!(code, 0);
    let entries: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert_eq!(entries.len(), 1, "exactly one cache entry");

    let (_, code, replay) = invoke(&["degree", "3", "2", "1", "--cache-dir", dir_arg]);
    assert_eq!(code, 0);
    assert_eq!(first, replay, "cache hit must be byte-identical");

    let (_, _, fresh) = invoke(&["degree", "3", "2", "1", "--cache-dir", dir_arg, "--no-cache"]);
    assert_eq!(first, fresh, "--no-cache recomputation must match the cached bytes");

    let (_, code, selftest) =
        invoke(&["degree", "3", "2", "1", "--cache-dir", dir_arg, "--cache-selftest"]);
    assert_eq!(code, 0, "self-test must accept a coherent cache");
    assert_eq!(first, selftest);

    // different parameters create a second entry rather than clobbering
    invoke_ok(&["degree", "2", "2", "0", "--cache-dir", dir_arg]);
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 2);

    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn corrupt_cache_entries_are_recomputed() {
    let dir = tmp_dir("corrupt");
    let dir_arg = dir.to_str().unwrap();
    let (_, _, first) = invoke(&["degree", "2", "2", "1", "--cache-dir", dir_arg]);
    let entry = std::fs::read_dir(&dir).unwrap().next().unwrap().unwrap().path();
    std::fs::write(&entry, "not json at all").unwrap();
    let (_, code, again) = invoke(&["degree", "2", "2", "1", "--cache-dir", dir_arg]);
    assert_eq!(code, 0);
    assert_eq!(first, again, "corrupt entry must fall back to recomputation");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn pretty_rendering_carries_the_same_document() {
    let (canonical, _, _) = invoke(&["degree", "3", "2", "1"]);
    let (pretty, code, text) = invoke(&["degree", "3", "2", "1", "--pretty"]);
    assert_eq!(code, 0);
    assert_eq!(canonical, pretty, "pretty output must parse to the same document");
    assert!(text.lines().count() > 1, "pretty output is indented");
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["degree", "4", "2", "2"],
        vec!["ideal", "2", "2", "1", "--quadrics", "--seed", "3"],
        vec!["vi", "--K", "2,5", "--m", "3", "--p", "2"],
    ] {
        let (_, _, a) = invoke(&args);
        let (_, _, b) = invoke(&args);
        assert_eq!(a, b, "{args:?} must be deterministic");
    }
}
