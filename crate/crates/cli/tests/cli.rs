use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strength"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("the binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn bound_prints_the_integer() {
    let dir = tempfile::tempdir().unwrap();
    for (args, want) in [
        (["--flavor", "sym", "--d", "3", "--dimU", "3"], "9\n"),
        (["--flavor", "alt", "--d", "3", "--dimU", "3"], "6\n"),
        (["--flavor", "ord", "--d", "3", "--dimU", "2,2,2"], "16\n"),
    ] {
        let mut full = vec!["bound"];
        full.extend(args);
        let o = run(dir.path(), &full);
        assert!(o.status.success());
        assert_eq!(stdout(&o), want);
    }
}

#[test]
fn quad_reports_strength() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "--json",
            "quad",
            "--poly",
            "x1^2 + x2^2 + x3^2 + x4^2 + x5^2",
            "--d",
            "2",
        ],
    );
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["strength"], 3);
    assert_eq!(v["rank"], 5);
}

#[test]
fn input_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["quad", "--poly", "x1^", "--d", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
    assert_eq!(
        run(dir.path(), &["verify", "missing.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(dir.path(), &["brute", "--poly", "x1*x2", "--d", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn a_tiny_budget_exits_with_4() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "--field",
            "2",
            "--budget",
            "3",
            "brute",
            "--poly",
            "x1^3 + x2^3 + x3^3",
            "--d",
            "3",
        ],
    );
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn emitted_certificates_verify_in_a_fresh_process() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for (flavor, deg, dims) in [("sym", "3", "4"), ("alt", "3", "5"), ("ord", "3", "2,2,2")] {
        let o = run(
            d,
            &[
                "--seed",
                "3",
                "generate",
                "border_strength",
                "--flavor",
                flavor,
                "--d",
                deg,
                "--dims",
                dims,
                "--out",
                "c.json",
            ],
        );
        assert!(o.status.success(), "{flavor}");
        let o = run(d, &["verify", "c.json"]);
        assert!(o.status.success(), "{flavor}: {}", stdout(&o));
        // trivial certificates written by one run verify in another
        let o = run(
            d,
            &[
                "generate",
                "random_dense",
                "--flavor",
                flavor,
                "--d",
                deg,
                "--dims",
                dims,
                "--out",
                "t.json",
            ],
        );
        assert!(o.status.success());
        assert!(run(d, &["trivial", "t.json", "--out", "tc.json"])
            .status
            .success());
        assert!(run(d, &["verify", "tc.json"]).status.success(), "{flavor}");
    }
    let o = run(
        d,
        &[
            "--field",
            "3",
            "brute",
            "--poly",
            "x1^2*x2 + x2^3",
            "--d",
            "3",
            "--out",
            "b.json",
        ],
    );
    assert!(o.status.success());
    assert!(run(d, &["verify", "b.json"]).status.success());
}

#[test]
fn identical_inputs_give_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(run(
        d,
        &[
            "generate",
            "rank_locus",
            "--n",
            "3",
            "--rank",
            "2",
            "--out",
            "gram.json"
        ]
    )
    .status
    .success());
    for args in [
        vec![
            "--json",
            "--seed",
            "5",
            "pipeline",
            "gram.json",
            "--dimV",
            "2",
            "--samples",
            "20",
        ],
        vec![
            "--json",
            "--seed",
            "5",
            "generate",
            "border_strength",
            "--d",
            "3",
            "--n",
            "4",
        ],
        vec!["--json", "psi", "gram.json", "--dimV", "2"],
        vec!["--json", "derive", "gram.json"],
    ] {
        let a = run(d, &args);
        let b = run(d, &args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn pipeline_certifies_samples_and_points() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(run(
        d,
        &[
            "generate",
            "rank_locus",
            "--n",
            "3",
            "--rank",
            "2",
            "--out",
            "gram.json"
        ]
    )
    .status
    .success());
    let v = json(&run(
        d,
        &[
            "--json",
            "pipeline",
            "gram.json",
            "--dimV",
            "3",
            "--samples",
            "30",
        ],
    ));
    assert_eq!(v["N"], 6);
    assert!(v["certified"].as_u64().unwrap() > 0);
    assert!(v["max_terms"].as_u64().unwrap() <= 6);
    // (x2 + x4)^2 + x3^2 has rank 2 and h(q0) = 1
    std::fs::write(
        d.join("point.json"),
        r#"{"flavor": "sym", "d": 2, "dims": [4], "field": "Q", "terms": [
             {"idx": [0, 2, 0, 0], "coeff": "1"}, {"idx": [0, 1, 0, 1], "coeff": "2"},
             {"idx": [0, 0, 0, 2], "coeff": "1"}, {"idx": [0, 0, 2, 0], "coeff": "1"}]}"#,
    )
    .unwrap();
    let o = run(
        d,
        &[
            "pipeline",
            "gram.json",
            "--tensor",
            "point.json",
            "--out",
            "pc.json",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(run(d, &["verify", "pc.json"]).status.success());
}

#[test]
fn specialize_reduces_an_integral_presentation() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(run(
        d,
        &[
            "generate",
            "rank_locus",
            "--n",
            "3",
            "--rank",
            "2",
            "--out",
            "gram.json"
        ]
    )
    .status
    .success());
    let o = run(
        d,
        &[
            "specialize",
            "gram.json",
            "--prime",
            "5",
            "--out",
            "gram5.json",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("gram5.json")).unwrap()).unwrap();
    assert_eq!(doc["sampler"]["family"], "rank_locus");
    let o = run(
        d,
        &[
            "--field",
            "5",
            "pipeline",
            "gram5.json",
            "--dimV",
            "2",
            "--samples",
            "10",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn leibniz_and_chop_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(run(
        d,
        &[
            "generate",
            "border_strength",
            "--d",
            "3",
            "--n",
            "4",
            "--k",
            "2",
            "--out",
            "c.json"
        ]
    )
    .status
    .success());
    let o = run(d, &["--json", "leibniz", "c.json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(
        d,
        &[
            "--json",
            "chop",
            "--poly",
            "x1*x4^2 + x2*x3*x5 + x4^3",
            "--d",
            "3",
            "--dimU",
            "2",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(json(&o)["terms"].as_u64().unwrap() <= 2);
}

#[test]
fn formats_describe_the_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["formats"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("c_"));
    let o = run(
        dir.path(),
        &[
            "formats", "--coords", "--flavor", "sym", "--d", "2", "--dims", "3",
        ],
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.contains("c_")).count(), 6);
}
