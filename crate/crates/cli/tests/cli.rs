//! End-to-end tests of the installed binary: golden outputs, exit codes,
//! JSON shape, determinism, and cache behavior.

use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (String, String, i32) {
    run_with(args, &[])
}

fn run_with(args: &[&str], envs: &[(&str, &str)]) -> (String, String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cyclesmith"));
    cmd.args(args).env_remove("CYCLESMITH_CACHE");
    for (key, value) in envs {
        cmd.env(key, value);
    }
    let out = cmd.output().expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().expect("no signal"),
    )
}

#[test]
fn count_circuits_prints_the_exact_totals() {
    let (stdout, _, code) = run(&["posets", "count-circuits", "--size", "3"]);
    assert_eq!((stdout.as_str(), code), ("24\n", 0));
    let (stdout, _, code) = run(&["posets", "count-circuits", "--size", "4"]);
    assert_eq!((stdout.as_str(), code), ("147483721728000000\n", 0));
}

#[test]
fn verify_distinguishes_valid_from_tampered() {
    let valid =
        &["verify", "--window", "3", "--stride", "2", "--decoder", "permutation", "123213213123"];
    let (stdout, _, code) = run(valid);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("verdict: valid"));

    let tampered =
        &["verify", "--window", "3", "--stride", "2", "--decoder", "permutation", "123213213121"];
    let (stdout, _, code) = run(tampered);
    assert_eq!(code, 1, "{stdout}");
    assert!(stdout.contains("INVALID"));
}

#[test]
fn usage_errors_exit_2() {
    let (_, _, code) = run(&["posets", "count-circuits", "--no-such-flag"]);
    assert_eq!(code, 2);
    let (_, stderr, code) =
        run(&["verify", "--window", "3", "--stride", "1", "--decoder", "literal", "010"]);
    assert_eq!(code, 2, "{stderr}");
    assert!(stderr.contains("--alphabet"));
    let (_, _, code) = run(&["juggle", "validate", "1x1"]);
    assert_eq!(code, 2);
}

#[test]
fn infeasible_parameters_exit_3() {
    let (_, stderr, code) = run(&["juggle", "ocycle", "--period", "4", "--balls", "1"]);
    assert_eq!(code, 3, "{stderr}");
    let (_, stderr, code) = run(&[
        "words", "ocycle", "--length", "4", "--weight", "2", "--alphabet", "1", "--overlap", "2",
    ]);
    assert_eq!(code, 3, "{stderr}");
    assert!(stderr.contains("coprime") || stderr.contains("share"), "{stderr}");
}

#[test]
fn generated_ucycle_feeds_back_into_verify() {
    let (cycle, _, code) = run(&["posets", "ucycle", "--size", "4"]);
    assert_eq!(code, 0);
    assert!(cycle.starts_with("k=4;"));
    let (stdout, _, code) =
        run(&["verify", "--window", "3", "--stride", "1", "--decoder", "poset", cycle.trim()]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("verdict: valid"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["posets", "ucycle", "--size", "4"],
        vec!["juggle", "ocycle", "--period", "3", "--balls", "2"],
        vec![
            "--json", "words", "ocycle", "--length", "5", "--weight", "4", "--alphabet", "3",
            "--overlap", "2",
        ],
        vec!["juggle", "reduce", "300300300"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn json_outputs_parse_and_carry_the_documented_fields() {
    let (stdout, _, _) = run(&["--json", "posets", "count-circuits", "--size", "4"]);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["circuits"], "147483721728000000");
    assert_eq!(v["arborescences"], "4900");

    let (stdout, _, code) = run(&["--json", "juggle", "validate", "531537"]);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!((v["valid"].as_bool(), code), (Some(true), 0));
    assert_eq!(v["balls"], 4);
    assert_eq!(v["permutation"], "543210");

    let (stdout, _, code) = run(&[
        "--json", "verify", "--window", "2", "--stride", "1", "--decoder", "subset", "--ground",
        "5", "1234524135",
    ]);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!((v["valid"].as_bool(), code), (Some(true), 0));
    assert_eq!(v["window_count"], 10);

    let (_, stderr, code) = run(&["--json", "juggle", "ocycle", "--period", "4", "--balls", "1"]);
    let v: Value = serde_json::from_str(&stderr).unwrap();
    assert_eq!((v["exit"].as_u64(), code), (Some(3), 3));
}

#[test]
fn words_reduce_prints_the_full_descent() {
    let (stdout, _, code) = run(&[
        "words", "reduce", "--length", "9", "--weight", "15", "--alphabet", "9", "--overlap", "7",
        "1332051",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout.trim(),
        "1332051 -> 133205100 -> 533211000 -> 3211000 -> 321100080 -> 832110000 -> 2110000 \
         -> 211000092 -> 221100009 -> 1100009 -> 110000940 -> 411000009 -> 1000009 \
         -> 100000950 -> 510000009 -> 0000009"
    );
}

#[test]
fn encode_and_decode_are_inverse_through_the_binary() {
    let (code_str, _, code) =
        run(&["posets", "encode", "--size", "6", "--covers", "1-2,1-4,2-5,4-5,3-6,5-6"]);
    assert_eq!((code_str.as_str(), code), ("10455\n", 0));
    let (stdout, _, code) = run(&["posets", "decode", "10455"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "size 6; covers 1-2 1-4 2-5 3-6 4-5 5-6");
}

#[test]
fn graph_export_is_dot_by_default_and_json_on_request() {
    let (dot, _, code) = run(&["posets", "graph", "--size", "3"]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("digraph"), "{dot}");
    let (json_text, _, _) = run(&["posets", "graph", "--size", "3", "--format", "json"]);
    let v: Value = serde_json::from_str(&json_text).unwrap();
    assert!(v["edges"].as_array().is_some());
}

#[test]
fn output_flag_writes_the_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cycle.txt");
    let (stdout, _, code) =
        run(&["posets", "ucycle", "--size", "3", "--output", path.to_str().unwrap()]);
    assert_eq!((stdout.as_str(), code), ("", 0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "k=3;0,1,0,2,3,1,2\n");
}

#[test]
fn cache_is_written_reused_and_never_changes_results() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();

    let (plain, _, _) = run(&["posets", "enumerate", "--size", "4"]);
    let (cached, _, _) = run(&["posets", "enumerate", "--size", "4", "--cache", cache]);
    assert_eq!(plain, cached);

    let file = dir.path().join("posets_k4.txt");
    assert_eq!(std::fs::read_to_string(&file).unwrap(), plain);

    // Second run is served from the file and still matches.
    let (again, _, _) = run(&["posets", "enumerate", "--size", "4", "--cache", cache]);
    assert_eq!(plain, again);

    // The environment variable selects the same directory.
    let (via_env, _, _) =
        run_with(&["posets", "enumerate", "--size", "4"], &[("CYCLESMITH_CACHE", cache)]);
    assert_eq!(plain, via_env);

    // An unreadable cache entry is ignored, not trusted.
    std::fs::write(&file, "not a code\n").unwrap();
    let (recovered, _, _) = run(&["posets", "enumerate", "--size", "4", "--cache", cache]);
    assert_eq!(plain, recovered);
}
