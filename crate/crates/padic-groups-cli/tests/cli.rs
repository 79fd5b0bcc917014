//! End-to-end tests against the built binary: fixtures, exit codes, JSON
//! output shapes, and the oracle cross-check mode.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_padic-groups")
}

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    p.to_str().expect("utf8 path").to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn dual_roundtrips_through_member_and_metric() {
    // compute the factored form of the limit spec, write it out, and check
    // the derived document answers the same questions
    let out = run(&[
        "dual",
        &fixture("ex21.json"),
        "--p",
        "3",
        "--precision",
        "8",
    ]);
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(doc["rank"], 2);
    assert_eq!(doc["exceptional"].as_array().unwrap().len(), 1);
    assert_eq!(doc["exceptional"][0]["p"], 3);
    assert_eq!(doc["exceptional"][0]["rows"].as_array().unwrap().len(), 1);

    let tmp = std::env::temp_dir().join(format!("dual-roundtrip-{}.json", std::process::id()));
    std::fs::write(&tmp, stdout(&out)).unwrap();
    let tmp = tmp.to_str().unwrap();

    for spec in [fixture("ex21.json"), tmp.to_string()] {
        let metric = run(&["metric", &spec, "-1,1", "--p", "3", "--precision", "8"]);
        assert_eq!(code(&metric), 0);
        assert_eq!(stdout(&metric), "3^-1");
        let member = run(&["member", &spec, "-7,1"]);
        assert_eq!(code(&member), 0);
        let nonmember = run(&["member", &spec, "1/2,0"]);
        assert_eq!(code(&nonmember), 1);
    }
    std::fs::remove_file(tmp).ok();
}

#[test]
fn dual_of_identity_has_no_exceptional_primes() {
    let out = run(&["dual", &fixture("identity.json")]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["exceptional"].as_array().unwrap().len(), 0);
}

#[test]
fn dual_of_rank_two_limit_has_two_rows_and_roundtrips() {
    let out = run(&[
        "dual",
        &fixture("ex22.json"),
        "--p",
        "3",
        "--precision",
        "8",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["exceptional"][0]["rows"].as_array().unwrap().len(), 2);

    // the emitted document answers membership/metric questions the same
    // way as the limit presentation
    let tmp = std::env::temp_dir().join(format!("dual-rt22-{}.json", std::process::id()));
    std::fs::write(&tmp, stdout(&out)).unwrap();
    let tmp = tmp.to_str().unwrap();
    for v in ["1,0,0", "0,1,0", "1,-1,2", "0,0,1/3", "1/3,1/3,1/3"] {
        let a = run(&["member", &fixture("ex22.json"), v, "--precision", "8"]);
        let b = run(&["member", tmp, v, "--precision", "8"]);
        assert_eq!(
            code(&a),
            code(&b),
            "membership of {v} differs after the roundtrip"
        );
    }
    for v in ["1,0,0", "2,1,1", "3,0,3"] {
        let a = run(&[
            "metric",
            &fixture("ex22.json"),
            v,
            "--p",
            "3",
            "--precision",
            "8",
        ]);
        let b = run(&["metric", tmp, v, "--p", "3", "--precision", "8"]);
        assert_eq!(
            stdout(&a),
            stdout(&b),
            "metric of {v} differs after the roundtrip"
        );
    }
    // the oracle cross-check never disagrees on this fixture either
    for k in ["1", "2"] {
        for v in ["1,0,0", "3,3,3", "-1,2,0"] {
            let out = run(&[
                "divisible",
                &fixture("ex22.json"),
                v,
                "--p",
                "3",
                "--k",
                k,
                "--oracle",
            ]);
            assert_ne!(code(&out), 3, "oracle disagreement on ex22 v={v}, k={k}");
        }
    }
    std::fs::remove_file(tmp).ok();
}

#[test]
fn membership_battery_and_exit_codes() {
    let ttf = fixture("ttf.json");
    assert_eq!(code(&run(&["member", &ttf, "1/5,1/5"])), 0);
    assert_eq!(code(&run(&["member", &ttf, "1/2,0"])), 0);
    assert_eq!(code(&run(&["member", &ttf, "0,1/3"])), 0);
    assert_eq!(code(&run(&["member", &ttf, "1/5,0"])), 1);
    assert_eq!(code(&run(&["member", &ttf, "0,1/2"])), 1);
}

#[test]
fn divisible_with_oracle_cross_check() {
    let ex21 = fixture("ex21.json");
    let out = run(&[
        "divisible",
        &ex21,
        "-7,1",
        "--p",
        "3",
        "--k",
        "2",
        "--oracle",
    ]);
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = run(&[
        "divisible",
        &ex21,
        "1,0",
        "--p",
        "3",
        "--k",
        "1",
        "--oracle",
    ]);
    assert_eq!(code(&out), 1);
    // the oracle mode never disagrees across the bundled corpus
    for k in ["1", "2", "3"] {
        for v in ["-1,1", "-7,1", "-34,1", "2,5", "1,1"] {
            let out = run(&["divisible", &ex21, v, "--p", "3", "--k", k, "--oracle"]);
            assert_ne!(code(&out), 3, "oracle disagreement on v={v}, k={k}");
        }
    }
}

#[test]
fn quotient_with_oracle_cross_check() {
    let out = run(&[
        "quotient",
        &fixture("ex21.json"),
        "--p",
        "3",
        "--k",
        "2",
        "--oracle",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "[9]");
    let out = run(&[
        "quotient",
        &fixture("ex22.json"),
        "--p",
        "3",
        "--k",
        "1",
        "--oracle",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "[3, 3]");
}

#[test]
fn hom_and_iso_verdicts() {
    let ttf = fixture("ttf.json");
    let out = run(&["hom", &ttf, &ttf, "--V", "identity"]);
    assert_eq!(code(&out), 0);
    let out = run(&["hom", &ttf, &ttf, "--V", "[[0,1],[1,0]]"]);
    assert_eq!(code(&out), 1);
    let out = run(&[
        "iso",
        &fixture("z.json"),
        &fixture("nine.json"),
        "--V",
        "1/9",
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&[
        "iso",
        &fixture("z.json"),
        &fixture("zhalf.json"),
        "--V",
        "identity",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn json_verdicts_carry_the_documented_fields() {
    let ttf = fixture("ttf.json");
    let out = run(&["--json", "hom", &ttf, &ttf, "--V", "identity"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["verdict"], true);
    assert!(doc["checked_primes"].is_array());
    assert!(doc["precision"].is_number());
    assert!(doc.get("min_margin").is_some());

    let out = run(&["--json", "member", &ttf, "1/5,1/5"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["verdict"], true);

    let out = run(&[
        "--json",
        "metric",
        &fixture("ex21.json"),
        "-1,1",
        "--p",
        "3",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["kind"], "exact");
    assert_eq!(doc["exponent"], 1);
}

#[test]
fn type_and_simple_outputs() {
    let out = run(&["type", &fixture("zhalf.json")]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "{2: inf}");
    let out = run(&["type", &fixture("nine.json")]);
    assert_eq!(stdout(&out), "{3: 2}");
    let out = run(&["simple", &fixture("ex21.json"), "--p", "3"]);
    assert_eq!(stdout(&out), "simple_not_divisible");
    let out = run(&["simple", &fixture("ex21.json"), "--p", "5"]);
    assert_eq!(stdout(&out), "not_simple");
    let out = run(&["simple", &fixture("zhalf.json"), "--p", "2"]);
    assert_eq!(stdout(&out), "divisible");
}

#[test]
fn extend_and_separate_emit_functionals() {
    let out = run(&[
        "extend",
        &fixture("ex21.json"),
        "--p",
        "3",
        "--gens",
        "1,0",
        "--values",
        "1",
        "--at",
        "0,1",
        "--precision",
        "8",
    ]);
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["p"], 3);
    assert_eq!(doc["coefficients"].as_array().unwrap().len(), 1);
    assert_eq!(doc["admissible_at"]["radius"], "point");

    // an impossible prescription is a contradiction, not a crash
    let out = run(&[
        "extend",
        &fixture("ex21.json"),
        "--p",
        "3",
        "--gens",
        "1,0;0,1",
        "--values",
        "0,1",
    ]);
    assert_eq!(code(&out), 3);

    let z2 = std::env::temp_dir().join(format!("z2-{}.json", std::process::id()));
    std::fs::write(&z2, r#"{"rank": 2, "exceptional": []}"#).unwrap();
    let out = run(&[
        "separate",
        z2.to_str().unwrap(),
        "--p",
        "3",
        "--h-gens",
        "3,0;0,3",
        "--g",
        "1,0",
        "--m",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["coefficients"].as_array().unwrap().len(), 2);
    std::fs::remove_file(z2).ok();
}

#[test]
fn error_exit_codes() {
    // 2: parse errors
    assert_eq!(code(&run(&["member", "/nonexistent.json", "1"])), 2);
    let bad = std::env::temp_dir().join(format!("bad-{}.json", std::process::id()));
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&run(&["member", bad.to_str().unwrap(), "1"])), 2);
    std::fs::remove_file(&bad).ok();

    // 3: invalid input (dual needs a limit spec; singular V)
    assert_eq!(code(&run(&["dual", &fixture("ttf.json")])), 3);
    assert_eq!(
        code(&run(&[
            "iso",
            &fixture("ttf.json"),
            &fixture("ttf.json"),
            "--V",
            "[[1,1],[1,1]]"
        ])),
        3
    );

    // 4: precision exhausted
    assert_eq!(
        code(&run(&[
            "divisible",
            &fixture("ex21.json"),
            "-1,1",
            "--p",
            "3",
            "--k",
            "30"
        ])),
        4
    );
    assert_eq!(
        code(&run(&[
            "member",
            &fixture("ttf.json"),
            "1/1073741824,0",
            "--precision",
            "8"
        ])),
        4
    );

    // precision below the documented floor is rejected
    assert_eq!(
        code(&run(&[
            "member",
            &fixture("z.json"),
            "1",
            "--precision",
            "4"
        ])),
        3
    );
}
