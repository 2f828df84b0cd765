use std::process::Command;

use ke_fillings::cli::{run, Status, EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION};
use ke_fillings::numfmt::count_significant;
use serde_json::{json, Value};

fn run_json(args: &[&str]) -> (Value, i32) {
    let (res, code) = run(args);
    assert!(res.json);
    let parsed: Value = serde_json::from_str(&res.text).unwrap_or_else(|e| panic!("{e}: {}", res.text));
    assert_eq!(parsed, res.payload);
    (parsed, code)
}

/// Every float literal in the serialized JSON, as written.
fn float_literals(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut in_string = false;
    for ch in text.chars() {
        if ch == '"' {
            in_string = !in_string;
        }
        if !in_string && (ch.is_ascii_digit() || "+-.eE".contains(ch)) {
            current.push(ch);
        } else {
            let numeric = current.chars().any(|c| c.is_ascii_digit());
            if numeric && (current.contains('.') || current.contains('e')) {
                out.push(current.clone());
            }
            current.clear();
        }
    }
    out
}

#[test]
fn hj_json_is_exactly_the_documented_document() {
    let (v, code) = run_json(&["hj", "--p", "5", "--q", "2", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        v,
        json!({"entries": [3, 2], "admissible": false, "stabilizers": [[1, 0], [1, 1], [2, 3], [3, 5]]})
    );
    let (res, _) = run(&["hj", "--p", "5", "--q", "2", "--json"]);
    assert_eq!(
        res.text.trim(),
        r#"{"admissible":false,"entries":[3,2],"stabilizers":[[1,0],[1,1],[2,3],[3,5]]}"#
    );
}

#[test]
fn calabi_reports_exact_parameters() {
    let (v, code) = run_json(&["calabi", "--n", "2", "--k", "3", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["lambda"], "4/3");
    assert_eq!(v["identity"], true);
    assert_eq!(v["constant"], "-7/6");
    assert_eq!(v["c_finite"], true);
}

#[test]
fn floats_carry_twelve_significant_digits() {
    for args in [
        &["calabi", "--n", "3", "--k", "5", "--json"][..],
        &["ma", "--n", "2", "--grid", "64", "--eps", "1e-2", "--tol", "1e-9", "--json"][..],
    ] {
        let (res, code) = run(args);
        assert_eq!(code, EXIT_OK, "{}", res.text);
        let floats = float_literals(&res.text);
        assert!(!floats.is_empty());
        for f in floats {
            assert!(count_significant(&f) >= 12, "{f} in {}", res.text);
        }
    }
}

#[test]
fn custom_rational_parameters() {
    let (v, code) = run_json(&["calabi", "--n", "3", "--k", "3", "--lambda", "0", "--c", "-1/3", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["identity"], true);
    assert_eq!(v["c_finite"], false);
    assert_eq!(v["c"], Value::Null);
    assert_eq!(v["fitted_rate"], Value::Null);
    assert_eq!(v["tau_star"].as_f64().unwrap(), 0.0);
}

#[test]
fn inadmissible_order_is_a_warning() {
    let (res, code) = run(&["calabi", "--n", "2", "--k", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(res.diagnostics.iter().any(|d| d.contains("InadmissibleOrder")));
}

#[test]
fn classify_examples() {
    let (v, code) = run_json(&["classify", "quotient", "--p", "3", "--q", "1", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["answer"], "yes");
    let (v, _) = run_json(&["classify", "quotient", "--p", "7", "--q", "6", "--json"]);
    assert_eq!(v["answer"], "no");
    assert!(v["reasons"].as_array().unwrap().contains(&json!("ruled_out")));
    let (v, _) = run_json(&["classify", "seifert", "--genus", "2", "--fiber", "5,2", "--fiber", "3,1", "--json"]);
    assert_eq!(v["answer"], "no");
    assert_eq!(v["per_fiber"][0]["entries"], json!([3, 2]));
    let (v, _) = run_json(&["classify", "seifert", "--genus", "3", "--json"]);
    assert_eq!(v["answer"], "yes");
    let (v, _) = run_json(&["classify", "polyhedral", "--json"]);
    assert_eq!(v["answer"], "out_of_scope");
}

#[test]
fn hypersurface_modes() {
    let (v, _) = run_json(&["hypersurface", "--family", "ex1", "--n", "3", "--d", "4", "--k", "9", "--json"]);
    assert_eq!(v["discrepancies"], json!([-1, -2]));
    assert_eq!(v["smooth_end"], true);
    let (v, _) = run_json(&["hypersurface", "--family", "ex2", "--n", "3", "--d", "3", "--k", "12", "--json"]);
    assert_eq!(v["discrepancies"], json!([-2, -4]));
    let brieskorn = ["--weights", "5,5,5,2", "--exponents", "2,0,0,0;0,2,0,0;0,0,2,0;0,0,0,5"];
    let mut args = vec!["hypersurface"];
    args.extend(brieskorn);
    args.push("--json");
    let (v, _) = run_json(&args);
    assert_eq!(v["degree"], 10);
    assert_eq!(v["verdict"], "obstructed");
    assert_eq!(v["isolated_singularity_assumed"], true);
    args.push("--not-gorenstein");
    let (v, _) = run_json(&args);
    assert_eq!(v["verdict"], "inconclusive");
}

#[test]
fn ma_converges_and_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    let p = path.to_str().unwrap();
    let (v, code) = run_json(&["ma", "--n", "3", "--grid", "64", "--eps", "1e-2", "--tol", "1e-9", "--csv", p, "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["converged"], true);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("iter,rho,psi,F,u,residual\n"));
    let iterations = v["iterations"].as_u64().unwrap() as usize;
    assert_eq!(csv.lines().count(), 1 + 65 * iterations);

    let (v, _) = run_json(&["ma", "--n", "2", "--grid", "256", "--eps", "1e-3", "--tol", "1e-9", "--manufacture", "2", "--json"]);
    assert!((v["fitted_order"].as_f64().unwrap() - 2.0).abs() < 0.1);
}

#[test]
fn calabi_csv_has_the_documented_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.csv");
    let (_, code) = run(&["calabi", "--n", "2", "--k", "3", "--grid", "8", "--csv", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.split('\n').collect();
    assert_eq!(lines[0], "tau,phi,t,F,A,B");
    assert_eq!(lines.len(), 10); // header, 8 rows, trailing empty piece
    assert!(!csv.contains('\r'));
    for field in lines[1..9].iter().flat_map(|l| l.split(',')) {
        assert!(count_significant(field) >= 12, "{field}");
    }
}

#[test]
fn error_codes_and_exit_codes() {
    let cases: &[(&[&str], &str, i32)] = &[
        (&["hj", "--p", "4", "--q", "2"], "InvalidQuotient", EXIT_VALIDATION),
        (&["hj", "--p", "5"], "UsageError", EXIT_VALIDATION),
        (&["frobnicate"], "UsageError", EXIT_VALIDATION),
        (&["calabi", "--n", "2", "--k", "3", "--lambda", "4/x"], "BadRational", EXIT_VALIDATION),
        (&["calabi", "--n", "1", "--k", "3"], "InvalidParameters", EXIT_VALIDATION),
        (&["calabi", "--n", "2", "--k", "3", "--lambda", "4/3", "--c", "0"], "NoPositiveRoot", EXIT_VALIDATION),
        (&["calabi", "--n", "2", "--k", "3", "--lambda", "-1", "--c", "-1"], "NotEventuallyPositive", EXIT_VALIDATION),
        (&["calabi", "--n", "2", "--k", "3", "--tau0", "0"], "DomainError", EXIT_VALIDATION),
        (&["calabi", "--n", "2", "--k", "3", "--grid", "1"], "InvalidGrid", EXIT_VALIDATION),
        (&["ma", "--n", "2", "--grid", "8", "--eps", "1e-3", "--tol", "1e-9"], "InvalidProblem", EXIT_VALIDATION),
        (&["ma", "--n", "2", "--grid", "64", "--eps", "1e-3", "--tol", "1e-14", "--max-iter", "2"], "MaxIterExceeded", EXIT_NUMERICAL),
        (&["hypersurface", "--family", "ex1", "--n", "3", "--d", "3", "--k", "9"], "ParameterOutOfRange", EXIT_VALIDATION),
        (&["hypersurface", "--weights", "1,1", "--exponents", "1,1,1"], "ArityMismatch", EXIT_VALIDATION),
        (&["hypersurface", "--weights", "1,0", "--exponents", "1,1"], "InvalidWeights", EXIT_VALIDATION),
        (&["hypersurface", "--weights", "1,1", "--exponents", ";"], "EmptyPolynomial", EXIT_VALIDATION),
        (&["classify", "seifert", "--genus", "0"], "OutOfScope", EXIT_VALIDATION),
        (&["classify", "seifert", "--genus", "1", "--fiber", "4,2"], "InvalidQuotient", EXIT_VALIDATION),
    ];
    for (args, want, exit) in cases {
        let (res, code) = run(args);
        assert_eq!(res.status, Status::Error, "{args:?}");
        assert_eq!(res.payload["code"], *want, "{args:?}: {}", res.text);
        assert_eq!(code, *exit, "{args:?}");
    }
    let (res, _) = run(&["hj", "--p", "5"]);
    assert!(res.text.contains("usage: ke-fillings hj --p P --q Q"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ke-fillings");
    let out = Command::new(bin).args(["hj", "--p", "5", "--q", "2", "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"entries\":[3,2]"));
    let out = Command::new(bin).args(["hj", "--p", "6", "--q", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("InvalidQuotient"));
    let out = Command::new(bin)
        .args(["ma", "--n", "2", "--grid", "64", "--eps", "1e-3", "--tol", "1e-14", "--max-iter", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
