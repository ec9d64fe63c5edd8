use goodring::cli::run;
use goodring::homog::HomogeneousPolynomial;
use goodring::ring::Ring;
use serde_json::{json, Value};
use std::process::Command;

fn call(args: &[&str]) -> (i32, Value) {
    let argv = std::iter::once("goodring").chain(args.iter().copied());
    let (code, out) = run(argv);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

#[test]
fn golden_outputs() {
    let cases: &[(&[&str], i32, Value)] = &[
        (
            &["witness", "--ring", "Z", "--a", "5", "--b", "2"],
            0,
            json!({"status": "ok", "payload": {"N": 2, "epsilon": "-1", "epsilon_inverse": "-1", "lambda": "-1"}, "diagnostics": []}),
        ),
        (
            &["witness", "--ring", "Z", "--a", "7", "--b", "3"],
            0,
            json!({"status": "ok", "payload": {"N": 3, "epsilon": "-1", "epsilon_inverse": "-1", "lambda": "-4"}, "diagnostics": []}),
        ),
        (
            &["bridge", "--ring", "Z", "--a", "5", "--b", "2", "--to-poly"],
            0,
            json!({"status": "ok", "payload": {"degree": 2, "polynomial": "-x1^2+2*x1*x2+x2^2",
                "witness": {"N": 2, "epsilon": "-1", "epsilon_inverse": "-1", "lambda": "-1"}}, "diagnostics": []}),
        ),
        (
            &["quotient-units", "--ring", "Z", "--a", "10"],
            0,
            json!({"status": "ok", "payload": {"carrier_size": 4, "order": 2}, "diagnostics": []}),
        ),
        (
            &["decide-qt", "--a", "T^2-1", "--b", "3*T"],
            0,
            json!({"status": "ok", "payload": {"N": 2, "epsilon": "9", "epsilon_inverse": "1/9", "lambda": "-9"}, "diagnostics": []}),
        ),
    ];
    for (args, code, expected) in cases {
        let (c, v) = call(args);
        assert_eq!(c, *code, "{args:?}");
        assert_eq!(&v, expected, "{args:?}");
    }
}

#[test]
fn refutations_and_errors() {
    let (c, v) = call(&["refute-zt", "--a", "T^2-2*T", "--b", "2*T+1"]);
    assert_eq!(c, 0);
    assert_eq!(v["status"], "refuted");
    assert_eq!(v["payload"]["evidence"]["root"], "2");

    let (c, v) = call(&["decide-qt", "--a", "T^2-1", "--b", "T+3"]);
    assert_eq!((c, v["status"].as_str()), (0, Some("refuted")));
    assert_eq!(v["payload"]["evidence"]["kind"], "ratio_criterion");

    let (c, v) = call(&["witness", "--ring", "Z", "--a", "4", "--b", "2"]);
    assert_eq!((c, v["payload"]["error"].as_str()), (1, Some("not-primitive")));

    let (c, v) = call(&["witness", "--ring", "Zx", "--a", "4", "--b", "2"]);
    assert_eq!((c, v["payload"]["error"].as_str()), (2, Some("parse")));

    let (c, v) = call(&["witness", "--ring", "GF(4)", "--a", "1", "--b", "2"]);
    assert_eq!((c, v["status"].as_str()), (2, Some("error")));

    let (c, _) = call(&["witness", "--ring", "Z", "--a", "1000003", "--b", "2", "--bound", "3"]);
    assert_eq!(c, 3, "an exhausted search is its own exit code");
}

#[test]
fn construct_values_are_units() {
    let (c, v) = call(&["construct", "--ring", "Z", "--points", "(1,2,3);(2,1,1);(0,1,5);(3,3,1)"]);
    assert_eq!(c, 0);
    let p = v["payload"]["polynomial"].as_str().unwrap();
    let r = Ring::Integers;
    let poly = HomogeneousPolynomial::parse(&r, p, Some(3)).unwrap();
    for (pt, reported) in [[1, 2, 3], [2, 1, 1], [0, 1, 5], [3, 3, 1]].iter().zip(v["payload"]["values"].as_array().unwrap()) {
        let value = poly.eval(&r, &pt.map(|x| r.from_int(x))).unwrap();
        assert!(r.is_unit(&value));
        assert_eq!(r.format(&value), reported.as_str().unwrap());
    }
    // the emitted polynomial converts back into a witness for (a, b)
    let (_, to) = call(&["bridge", "--ring", "Z", "--a", "11", "--b", "4", "--to-poly"]);
    let poly = to["payload"]["polynomial"].as_str().unwrap();
    let (c, back) = call(&["bridge", "--ring", "Z", "--a", "11", "--b", "4", "--from-poly", poly]);
    assert_eq!(c, 0);
    assert_eq!(back["payload"], to["payload"]["witness"]);
}

#[test]
fn output_is_deterministic() {
    let args = ["construct", "--ring", "Z/36", "--points", "(1,2,3);(5,1,1);(0,1,7)"];
    let first = call(&args);
    for _ in 0..3 {
        assert_eq!(call(&args), first);
    }
}

#[test]
fn binary_exit_codes_and_streams() {
    let bin = env!("CARGO_BIN_EXE_goodring");
    let out = Command::new(bin).args(["--format", "text", "witness", "--ring", "Z", "--a", "5", "--b", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("N: 2"));

    let out = Command::new(bin).args(["witness", "--ring", "Z", "--a", "4", "--b", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not primitive"));

    let out = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(bin).arg("no-such-command").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
