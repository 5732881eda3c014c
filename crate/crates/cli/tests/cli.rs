//! End-to-end tests driving the tg3 binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use tg_core::scalars::CycScalar;

fn tg3() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_tg3"));
    c.env_remove("TG_DEFAULT_CONVENTION");
    c
}

fn run(args: &[&str]) -> Output {
    tg3().args(args).output().expect("spawn tg3")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim_end().to_string()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code_of(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn normalize_defining_relation() {
    let out = run(&["normalize", "a*ad - q*ad*a - qN(-1)"]);
    assert_eq!(code_of(&out), 0, "{}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "0");
}

#[test]
fn normalize_cubes() {
    for expr in ["xi(0)^3", "xb(0)^3", "a^3", "ad^3"] {
        let out = run(&["normalize", expr]);
        assert_eq!(code_of(&out), 0);
        assert_eq!(stdout_of(&out), "0", "{expr}");
    }
}

#[test]
fn integrate_both_spellings() {
    let out = run(&["integrate", "--expr", "xi(0)^2", "--var", "xi(0)"]);
    assert_eq!(code_of(&out), 0, "{}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "1");

    let out = run(&["normalize", "integrate(xi(0)^2, xi(0))"]);
    assert_eq!(stdout_of(&out), "1");

    let out = run(&["normalize", "xi(0)^2*xb(0)^2*dxb(0)*dxi(0)"]);
    assert_eq!(stdout_of(&out), "1");

    let out = run(&["integrate", "--expr", "xi(0)", "--var", "xi(0)"]);
    assert_eq!(stdout_of(&out), "0");

    let out = run(&["integrate", "--expr", "xi(0)^2", "--var", "q"]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("--var"), "{}", stderr_of(&out));
}

#[test]
fn normalize_json_shape() {
    let out = run(&["--json", "normalize", "xi(0)*xb(0)"]);
    assert_eq!(code_of(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["kind"], "grassmann");
    assert_eq!(v["value"][0]["coeff"], CycScalar::one().to_json());
    assert_eq!(v["value"][0]["word"][0]["kind"], "xi");
    assert_eq!(v["value"][0]["word"][1]["kind"], "xb");

    let out = run(&["--json", "normalize", "a*ad"]);
    assert_eq!(json_of(&out)["kind"], "operator");

    let out = run(&["--json", "normalize", "ad*xi(0)"]);
    assert_eq!(json_of(&out)["kind"], "mixed");

    let out = run(&["--json", "normalize", "a*ket(1)"]);
    assert_eq!(json_of(&out)["kind"], "state");
}

#[test]
fn parse_error_reports_position_and_exits_2() {
    let out = run(&["normalize", "xi(0)**"]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("column 7"), "{}", stderr_of(&out));

    let out = run(&["normalize", "frob(2)"]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("unknown identifier"), "{}", stderr_of(&out));
}

#[test]
fn missing_argument_is_usage_error() {
    let out = run(&["normalize"]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn coherent_convention_selection() {
    let out = run(&["coherent"]);
    assert_eq!(code_of(&out), 0);
    assert!(stdout_of(&out).contains("convention: paper"));

    let out = run(&["--convention", "uniform-eq5", "coherent"]);
    assert!(stdout_of(&out).contains("convention: uniform-eq5"));

    let out = run(&["--convention", "nonesuch", "coherent"]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("unknown convention"), "{}", stderr_of(&out));
}

#[test]
fn env_sets_default_convention_and_flag_wins() {
    let out = tg3()
        .env("TG_DEFAULT_CONVENTION", "uniform-eq5")
        .args(["coherent"])
        .output()
        .unwrap();
    assert!(stdout_of(&out).contains("convention: uniform-eq5"));

    let out = tg3()
        .env("TG_DEFAULT_CONVENTION", "uniform-eq5")
        .args(["--convention", "paper", "coherent"])
        .output()
        .unwrap();
    assert!(stdout_of(&out).contains("convention: paper"));

    let out = tg3()
        .env("TG_DEFAULT_CONVENTION", "nonesuch")
        .args(["coherent"])
        .output()
        .unwrap();
    assert_eq!(code_of(&out), 2);
}

#[test]
fn coherent_kets_differ_between_conventions() {
    let paper = json_of(&run(&["--json", "coherent"]));
    let uniform = json_of(&run(&["--json", "--convention", "uniform-eq5", "coherent"]));
    assert_eq!(paper["ket"][0]["coefficient"], uniform["ket"][0]["coefficient"]);
    assert_ne!(paper["ket"][2]["coefficient"], uniform["ket"][2]["coefficient"]);
    assert_eq!(paper["bra"], uniform["bra"]);
}

#[test]
fn overlap_structure() {
    let out = run(&["--json", "overlap"]);
    assert_eq!(code_of(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["convention"], "paper");
    let terms = v["value"].as_array().unwrap();
    assert_eq!(terms.len(), 3);
    assert_eq!(terms[0]["coeff"], CycScalar::one().to_json());

    let out = run(&["overlap"]);
    assert!(stdout_of(&out).contains("overlap: 1 +"), "{}", stdout_of(&out));
}

#[test]
fn weight_solve_returns_exact_weights() {
    let v = json_of(&run(&["--json", "weight-solve", "--form", "eq20"]));
    assert_eq!(v["form"], "eq20");
    assert_eq!(v["weight"]["c0"], (-CycScalar::q()).to_json());
    assert_eq!(v["weight"]["c1"], CycScalar::one().to_json());
    assert_eq!(v["weight"]["c2"], CycScalar::one().to_json());
    assert_eq!(v["resolution_is_identity"], true);

    let v = json_of(&run(&["--json", "weight-solve", "--form", "eq22"]));
    assert_eq!(v["weight"]["c0"], (-CycScalar::q()).to_json());
    assert_eq!(v["weight"]["c1"], CycScalar::q_pow(2).to_json());
    assert_eq!(v["resolution_is_identity"], true);

    let v = json_of(&run(&[
        "--json",
        "--convention",
        "uniform-eq5",
        "weight-solve",
        "--form",
        "eq20",
    ]));
    assert_eq!(v["weight"]["c1"], CycScalar::q_pow(2).to_json());
    assert_eq!(v["resolution_is_identity"], true);

    let out = run(&["weight-solve", "--form", "eq23"]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn bargmann_rep_and_gram() {
    let out = run(&["bargmann", "rep", "--state", "(1, 0, 0)"]);
    assert_eq!(stdout_of(&out), "1");

    let out = run(&["bargmann", "rep", "--state", "(0, 1, 0)"]);
    assert_eq!(stdout_of(&out), "q*xb(0)");

    let out = run(&["bargmann", "rep", "--state", "(xi(0), 0, 0)"]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("must be a scalar"), "{}", stderr_of(&out));

    for conv in ["paper", "uniform-eq5"] {
        let v = json_of(&run(&["--json", "--convention", conv, "bargmann", "gram"]));
        let gram = v["gram"].as_array().unwrap();
        for (r, row) in gram.iter().enumerate() {
            for (c, cell) in row.as_array().unwrap().iter().enumerate() {
                let want =
                    if r == c { CycScalar::one().to_json() } else { CycScalar::zero().to_json() };
                assert_eq!(*cell, want, "{conv} gram[{r}][{c}]");
            }
        }
    }
}

#[test]
fn susy_bounds_are_reported() {
    let out = run(&["--json", "susy", "coherent", "--z", "0.5", "--trunc", "16"]);
    assert_eq!(code_of(&out), 0, "{}", stderr_of(&out));
    let v = json_of(&out);
    assert_eq!(v["z"][0], 0.5);
    assert_eq!(v["trunc"], 16);
    assert_eq!(v["annihilator_exact"], true);
    let tail = v["tail_bound"].as_f64().unwrap();
    let bound = v["residual_bound"].as_f64().unwrap();
    let residual = v["boson_residual"].as_f64().unwrap();
    assert!(tail < 1e-20, "tail {tail}");
    assert!(residual <= bound * (1.0 + 1e-9), "residual {residual} vs bound {bound}");
    assert_eq!(v["boson"].as_array().unwrap().len(), 17);

    let out = run(&["susy", "coherent", "--z", "0.5+0.25i", "--trunc", "8"]);
    assert_eq!(code_of(&out), 0);
    assert!(stdout_of(&out).contains("annihilator exact: true"));

    let out = run(&["susy", "coherent", "--z", "pear"]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn audit_flags_known_discrepancies() {
    let out = run(&["--json", "audit"]);
    assert_eq!(code_of(&out), 0, "{}", stderr_of(&out));
    let rows = json_of(&out);
    let rows = rows.as_array().unwrap();
    assert!(!rows.is_empty());
    let status = |identity: &str, convention: &str| {
        rows.iter()
            .find(|r| r["identity"] == identity && r["convention"] == convention)
            .unwrap_or_else(|| panic!("{identity} ({convention}) missing"))["status"]
            .clone()
    };
    for row in rows
        .iter()
        .filter(|r| r["convention"] == "paper" && r["identity"] != "eq28.transported")
    {
        assert_eq!(row["status"], "PASS", "{row}");
    }
    assert_eq!(status("eq14.n2", "uniform-eq5"), "FAIL");
    assert_eq!(status("eq16.linear", "uniform-eq5"), "FAIL");
    assert_eq!(status("eq15", "uniform-eq5"), "PASS");
    assert_eq!(status("eq28.transported", "paper"), "FAIL");
    assert_eq!(status("eq28.transported", "uniform-eq5"), "FAIL");

    let out = run(&["audit"]);
    assert!(stdout_of(&out).contains("[PASS] eq14.n0 (paper)"), "{}", stdout_of(&out));
    assert!(stdout_of(&out).contains("claimed"), "{}", stdout_of(&out));
}

#[test]
fn verify_suites() {
    let out = run(&["verify"]);
    assert_eq!(code_of(&out), 0, "{}", stdout_of(&out));
    assert!(stdout_of(&out).ends_with("suite all: PASS"), "{}", stdout_of(&out));

    let out = run(&["verify", "--suite", "scalars"]);
    assert_eq!(code_of(&out), 0);
    assert!(stdout_of(&out).contains("suite scalars: PASS"));

    let out = run(&["--json", "verify", "--suite", "states"]);
    assert_eq!(code_of(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["suite"], "states");
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "audit coverage"));
    assert!(checks.iter().all(|c| c["passed"] == true));

    let out = run(&["verify", "--suite", "frobnication"]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("unknown suite"), "{}", stderr_of(&out));
}

#[test]
fn type_errors_exit_2() {
    let out = run(&["normalize", "ket(0)*ket(1)"]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("kets cannot multiply kets"), "{}", stderr_of(&out));

    let out = run(&["normalize", "a*xi(0)"]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("no relation transposes"), "{}", stderr_of(&out));

    let out = run(&["normalize", "ket(0)*a"]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn ket_expressions() {
    let out = run(&["normalize", "a*ket(1)"]);
    assert_eq!(stdout_of(&out), "|0>");

    let out = run(&["normalize", "bra(0)*a*ket(1)"]);
    assert_eq!(stdout_of(&out), "1");

    let out = run(&["normalize", "bra(2)*a*ket(1)"]);
    assert_eq!(stdout_of(&out), "0");

    let out = run(&["normalize", "ket(0)*xi(0)"]);
    assert_eq!(stdout_of(&out), "|0>*xi(0)");
}

#[test]
fn generator_count_flag_and_default() {
    let out = run(&["normalize", "xi(1)"]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(stdout_of(&out), "xi(1)");

    let out = run(&["--n-generators", "1", "normalize", "xi(1)"]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr_of(&out).contains("out of range"), "{}", stderr_of(&out));
}

#[test]
fn mode_flag_changes_surviving_words() {
    let out = run(&["--mode", "relational", "normalize", "xi(0)^2*xb(0)^2"]);
    assert_eq!(stdout_of(&out), "xi(0)^2*xb(0)^2");

    let out = run(&["--mode", "constrained", "normalize", "xi(0)^2*xb(0)^2"]);
    assert_eq!(stdout_of(&out), "0");

    let out = run(&["--mode", "constrained", "normalize", "xi(0)*xb(0)"]);
    assert_eq!(stdout_of(&out), "xi(0)*xb(0)");

    let out = run(&["--mode", "sideways", "normalize", "q"]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn repl_session() {
    let mut child = tg3()
        .arg("repl")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(
            b"xi(0)*xi(0)*xi(0)\nfrob\na*ket(1)\n:n 2\nxi(1)\n:convention uniform-eq5\n:json on\nq\n:quit\n",
        )
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code_of(&out), 0, "{}", stderr_of(&out));
    let stdout = stdout_of(&out);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "0");
    assert_eq!(lines[1], "|0>");
    assert_eq!(lines[2], "xi(1)");
    let json: serde_json::Value = serde_json::from_str(lines[3]).unwrap();
    assert_eq!(json["kind"], "grassmann");
    assert!(!stdout.contains("tg3>"), "prompt must not print when piped");
    assert!(stderr_of(&out).contains("unknown identifier"), "{}", stderr_of(&out));
}

#[cfg(unix)]
#[test]
fn closed_stdout_does_not_panic() {
    let mut child = tg3()
        .arg("repl")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    drop(child.stdout.take());
    let mut stdin = child.stdin.take().unwrap();
    let _ = stdin.write_all(b"1 + q + q^2\n");
    let _ = stdin.write_all(b"1 + q + q^2\n");
    drop(stdin);
    let out = child.wait_with_output().unwrap();
    let stderr = stderr_of(&out);
    assert!(!stderr.contains("panicked"), "{stderr}");
    assert!(!stderr.contains("Broken pipe"), "{stderr}");
}

#[test]
fn repl_eof_exits_cleanly() {
    let mut child = tg3()
        .arg("repl")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"1 + q + q^2\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code_of(&out), 0);
    assert_eq!(stdout_of(&out), "0");
}
