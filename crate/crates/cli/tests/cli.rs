use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dynchoice::fixtures;
use dynchoice::format::{write_dataset, write_measure};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynchoice"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn shipped_data_matches_the_fixtures() {
    let read = |name| std::fs::read_to_string(data(name)).unwrap();
    assert_eq!(read("two_by_two.json"), write_dataset(&fixtures::two_by_two()));
    assert_eq!(
        read("two_by_two_measure.json"),
        write_measure(&fixtures::two_by_two_measure())
    );
    assert_eq!(read("bad_marginals.json"), write_dataset(&fixtures::bad_marginals()));
    assert_eq!(
        read("broken_regularity.json"),
        write_dataset(&fixtures::broken_regularity())
    );
    assert_eq!(read("deterministic.json"), write_dataset(&fixtures::deterministic()));
    assert_eq!(
        read("independent_three.json"),
        write_dataset(&fixtures::independent_three())
    );
}

#[test]
fn check_exit_codes_and_witnesses() {
    let out = run(&["check", path(&data("two_by_two.json"))]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).ends_with("result: pass\n"));

    let out = run(&["check", path(&data("bad_marginals.json"))]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("7/8 vs 5/8"));

    let out = run(&["check", path(&data("deterministic.json"))]);
    assert_eq!(code(&out), 0);
    let out = run(&["check", "--strict", path(&data("deterministic.json")), "--json"]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert_eq!(report["status"], "fail");
    assert_eq!(report["result"]["strict"], true);
}

#[test]
fn verify_modes() {
    let mu = data("two_by_two_measure.json");
    let d = data("two_by_two.json");
    for mode in ["edge", "direct", "both"] {
        assert_eq!(code(&run(&["verify", path(&mu), path(&d), "--mode", mode])), 0);
    }
    let out = run(&["verify", path(&mu), path(&data("bad_marginals.json"))]);
    assert_eq!(code(&out), 1);
    assert_eq!(
        code(&run(&["verify", path(&mu), path(&data("independent_three.json"))])),
        2
    );
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let mu = dir.path().join("mu.json");
    let out = run(&["construct", path(&data("two_by_two.json")), "-o", path(&mu)]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        std::fs::read_to_string(&mu).unwrap(),
        std::fs::read_to_string(data("two_by_two_measure.json")).unwrap()
    );
    assert_eq!(code(&run(&["verify", path(&mu), path(&data("two_by_two.json"))])), 0);

    let missing = dir.path().join("none.json");
    assert_eq!(
        code(&run(&[
            "construct",
            path(&data("bad_marginals.json")),
            "-o",
            path(&missing)
        ])),
        1
    );
    assert!(!missing.exists());
}

#[test]
fn generated_data_passes_check_and_rebuilds() {
    let dir = tempfile::tempdir().unwrap();
    for (periods, sizes, seed) in [
        ("1", "4", "3"),
        ("2", "3,3", "4"),
        ("2", "2,5", "5"),
        ("3", "2,3,2", "6"),
    ] {
        let mu = dir.path().join(format!("mu{seed}.json"));
        let d = dir.path().join(format!("d{seed}.json"));
        let rebuilt = dir.path().join(format!("r{seed}.json"));
        let out = run(&[
            "generate",
            "--periods",
            periods,
            "--sizes",
            sizes,
            "--seed",
            seed,
            "--sparsity",
            "1/3",
            "-o",
            path(&mu),
            "--emit-data",
            path(&d),
        ]);
        assert_eq!(code(&out), 0);
        assert_eq!(code(&run(&["validate", path(&d)])), 0);
        assert_eq!(code(&run(&["check", path(&d)])), 0, "{sizes}");
        assert_eq!(code(&run(&["verify", path(&mu), path(&d)])), 0);
        assert_eq!(code(&run(&["construct", path(&d), "-o", path(&rebuilt)])), 0, "{sizes}");
        assert_eq!(code(&run(&["verify", path(&rebuilt), path(&d)])), 0);
    }
}

#[test]
fn identities_command() {
    let out = run(&["identities", path(&data("two_by_two.json")), "--which", "prop1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("prop1: pass"));
    let out = run(&["identities", path(&data("bad_marginals.json"))]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("claim1: not checked"));
    assert_eq!(
        code(&run(&[
            "identities",
            path(&data("deterministic.json")),
            "--which",
            "corner"
        ])),
        0
    );
}

#[test]
fn sweeps_and_round_trips() {
    let out = run(&[
        "conjecture",
        "--sizes",
        "2,2,2",
        "--trials",
        "10",
        "--seed",
        "1",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["result"]["represents"], 10);
    assert_eq!(report["result"]["counterexamples"], 0);

    let out = run(&[
        "roundtrip",
        "--periods",
        "2",
        "--sizes",
        "3,3",
        "--trials",
        "6",
        "--seed",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("6 of 6 trials"));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (broken, independent) = (data("broken_regularity.json"), data("independent_three.json"));
    let runs = [
        vec!["check", path(&broken), "--json"],
        vec!["identities", path(&independent)],
        vec![
            "conjecture",
            "--sizes",
            "3,2,2",
            "--trials",
            "30",
            "--seed",
            "7",
            "--adversarial",
            "--json",
        ],
        vec![
            "roundtrip",
            "--periods",
            "2",
            "--sizes",
            "2,4",
            "--trials",
            "5",
            "--seed",
            "3",
            "--json",
        ],
    ];
    for args in runs {
        assert_eq!(run(&args).stdout, run(&args).stdout, "{args:?}");
    }
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        run(&[
            "generate",
            "--periods",
            "2",
            "--sizes",
            "3,2",
            "--seed",
            "9",
            "-o",
            path(out),
        ]);
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn results_do_not_depend_on_threads() {
    let sweep = |threads: &str| {
        let out = run(&[
            "conjecture",
            "--sizes",
            "2,2,3",
            "--trials",
            "40",
            "--seed",
            "11",
            "--adversarial",
            "--epsilon",
            "1/16",
            "--json",
            "--threads",
            threads,
        ]);
        json(&out)["result"].clone()
    };
    assert_eq!(sweep("1"), sweep("3"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let float = dir.path().join("float.json");
    std::fs::write(
        &float,
        r#"{"alphabets":[["a","b"]],"periods":1,"rho":{"1":{"a,b":{"a":"0.5","b":"1/2"}}}}"#,
    )
    .unwrap();
    assert_eq!(code(&run(&["check", path(&float)])), 2);
    assert_eq!(code(&run(&["check", path(&dir.path().join("absent.json"))])), 2);
    assert_eq!(code(&run(&["check"])), 2);
    assert_eq!(
        code(&run(&[
            "generate",
            "--periods",
            "2",
            "--sizes",
            "2",
            "--seed",
            "1",
            "-o",
            "x"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "generate",
            "--periods",
            "1",
            "--sizes",
            "2",
            "--seed",
            "1",
            "--sparsity",
            "0.5",
            "-o",
            "x"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "conjecture",
            "--sizes",
            "4,2,2",
            "--trials",
            "1",
            "--seed",
            "1"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "identities",
            path(&data("deterministic.json")),
            "--which",
            "prop9"
        ])),
        2
    );
    let one_period = dir.path().join("one.json");
    std::fs::write(&one_period, write_dataset(&fixtures::uniform_three())).unwrap();
    assert_eq!(code(&run(&["identities", path(&one_period)])), 2);
}

#[test]
fn timing_only_on_request() {
    let out = run(&["check", path(&data("two_by_two.json")), "--json"]);
    assert!(json(&out).get("wall_time_ms").is_none());
    let out = run(&["check", path(&data("two_by_two.json")), "--json", "--timing"]);
    assert!(json(&out)["wall_time_ms"].is_u64());
}
