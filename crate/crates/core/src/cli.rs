//! Command-line front end. Every command prints one object
//! `{status, payload, diagnostics}`; ring elements and polynomials appear
//! as their canonical strings.
//!
//! Exit codes: 0 for `ok` and `refuted`, 1 for mathematical errors (a
//! non-primitive point, a violated precondition), 2 for usage and parse
//! errors, 3 for `exhausted`.

use std::ffi::OsString;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bezout::{bezout, is_primitive, PrimitivePoint};
use crate::error::{Error, Result};
use crate::homog::{construct_unit_valued, HomogeneousPolynomial, Limits};
use crate::ring::{parse_ring, Element, Ring};
use crate::sab::{polynomial_to_witness, witness_to_polynomial, SabAlgebra};
use crate::witness::{
    check_good_ring_exhaustive, decide_good_point_rational_split, find_good_witness, refute_integer_poly_point,
    unit_quotient_group, verify_refutation, verify_witness, GoodPointWitness, QuotientStatus, RefutationEvidence,
    SearchOutcome,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Refuted,
    Exhausted,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

impl CommandResult {
    fn ok(payload: Value) -> Self {
        CommandResult {
            status: Status::Ok,
            payload,
            diagnostics: Vec::new(),
        }
    }

    fn with(status: Status, payload: Value) -> Self {
        CommandResult {
            status,
            payload,
            diagnostics: Vec::new(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok | Status::Refuted => 0,
            Status::Exhausted => 3,
            Status::Error => 1,
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string(self).expect("serializable"),
            Format::Text => {
                let status = serde_json::to_value(self.status).unwrap();
                let mut out = format!("status: {}\n", status.as_str().unwrap());
                if let Value::Object(map) = &self.payload {
                    for (k, v) in map {
                        match v {
                            Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                            other => out.push_str(&format!("{k}: {other}\n")),
                        }
                    }
                }
                for d in &self.diagnostics {
                    out.push_str(&format!("note: {d}\n"));
                }
                out.trim_end().to_string()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "goodring", version, about = "Good-ring computations with exact arithmetic")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for N, λ with b^N + λa a unit.
    Witness {
        #[arg(long)]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
    },
    /// Build a homogeneous form with unit values at the given points.
    Construct {
        #[arg(long)]
        ring: String,
        /// Semicolon-separated tuples, e.g. "(1,0);(0,1)".
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
        #[arg(long, default_value_t = Limits::default().max_terms)]
        max_terms: u128,
        #[arg(long, default_value_t = Limits::default().max_digits)]
        max_digits: u128,
    },
    /// Check every primitive pair of a finite ring.
    CheckGood {
        #[arg(long)]
        ring: String,
    },
    /// Order of (A/aA)^× modulo the image of A^×.
    QuotientUnits {
        #[arg(long)]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// Decide goodness of (a, b) in Q[T] for squarefree split a.
    DecideQt {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Rational-root obstruction for integer polynomials.
    RefuteZt {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Arithmetic in A ⊕ Aθ with θ² = aθ.
    Sab {
        #[arg(long)]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Element `x + y*th`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Optional second factor.
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
    },
    /// Convert between a witness and a bivariate form.
    Bridge {
        #[arg(long)]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, conflicts_with = "from_poly", required_unless_present = "from_poly")]
        to_poly: bool,
        #[arg(long, allow_hyphen_values = true)]
        from_poly: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
    },
}

/// Parses `argv` (including the program name), runs the command, and
/// returns the exit code with the serialized result.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (code, out, _) = run_with_diagnostics(argv);
    (code, out)
}

/// As [`run`], also returning the diagnostics separately (the binary echoes
/// them to stderr).
pub fn run_with_diagnostics<I, T>(argv: I) -> (i32, String, Vec<String>)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => {
            let (code, result) = dispatch(cli.command);
            (code, result.render(cli.format), result.diagnostics)
        }
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.to_string(), Vec::new());
            }
            let result = CommandResult {
                status: Status::Error,
                payload: json!({ "error": "usage" }),
                diagnostics: vec![e.to_string().trim().to_string()],
            };
            (2, result.render(Format::Json), result.diagnostics)
        }
    }
}

fn dispatch(cmd: Command) -> (i32, CommandResult) {
    match execute_command(cmd) {
        Ok(r) => (r.exit_code(), r),
        Err(e) => {
            let code = match e {
                Error::Parse { .. } | Error::InvalidParameter(_) => 2,
                _ => 1,
            };
            let kind = match &e {
                Error::Parse { .. } => "parse",
                Error::InvalidParameter(_) => "invalid-parameter",
                Error::NotPrimitive => "not-primitive",
                Error::InfiniteRing(_) => "infinite-ring",
                Error::Precondition(_) => "precondition",
                Error::WitnessExhausted { .. } => "witness-exhausted",
                Error::SizeLimit { .. } | Error::CoefficientLimit { .. } => "size-limit",
                Error::Unsupported(_) => "unsupported",
                _ => "error",
            };
            let result = CommandResult {
                status: Status::Error,
                payload: json!({ "error": kind }),
                diagnostics: vec![e.to_string()],
            };
            (code, result)
        }
    }
}

fn ring_arg(spec: &str) -> Result<Ring> {
    parse_ring(spec)
}

fn element_arg(ring: &Ring, flag: &str, s: &str) -> Result<Element> {
    ring.parse_element(s).map_err(|e| match e {
        Error::Parse { pos, msg } => Error::Parse {
            pos,
            msg: format!("--{flag} {s:?}: {msg}"),
        },
        other => other,
    })
}

fn witness_json(ring: &Ring, w: &GoodPointWitness) -> Value {
    json!({
        "N": w.exponent,
        "lambda": ring.format(&w.lambda),
        "epsilon": ring.format(&w.epsilon),
        "epsilon_inverse": ring.format(&w.epsilon_inverse),
    })
}

fn evidence_json(e: &RefutationEvidence) -> Value {
    match e {
        RefutationEvidence::CycleWithoutUnit {
            period,
            residues_visited,
        } => json!({ "kind": "cycle_without_unit", "period": period, "residues_visited": residues_visited }),
        RefutationEvidence::RationalEvaluation { root, value, reason } => json!({
            "kind": "rational_evaluation",
            "root": root.to_string(),
            "value": value.to_string(),
            "reason": reason,
        }),
        RefutationEvidence::RatioCriterion { roots, values, ratio } => json!({
            "kind": "ratio_criterion",
            "roots": roots.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "values": values.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "ratio": ratio.to_string(),
        }),
    }
}

fn outcome_result(ring: &Ring, a: &Element, b: &Element, outcome: &SearchOutcome) -> Result<CommandResult> {
    Ok(match outcome {
        SearchOutcome::Witness(w) => {
            if !verify_witness(ring, a, b, w) {
                return Err(Error::Identity("returned witness does not verify".into()));
            }
            CommandResult::ok(witness_json(ring, w))
        }
        SearchOutcome::Refuted(e) => {
            if !verify_refutation(ring, a, b, e) {
                return Err(Error::Identity("refutation evidence does not verify".into()));
            }
            CommandResult::with(Status::Refuted, json!({ "evidence": evidence_json(e) }))
        }
        SearchOutcome::Exhausted { bound } => {
            let mut r = CommandResult::with(Status::Exhausted, json!({ "bound": bound }));
            r.diagnostics.push(format!("no witness or refutation within {bound} steps"));
            r
        }
    })
}

/// `"(1,0);(0,1)"` → points; coordinates may themselves be tuples.
pub fn parse_points(ring: &Ring, s: &str) -> Result<Vec<Vec<Element>>> {
    let mut points = Vec::new();
    let mut offset = 0;
    for chunk in split_top_level(s, b';') {
        let trimmed = chunk.trim();
        let lead = chunk.len() - chunk.trim_start().len();
        let inner = trimmed
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse {
                pos: offset + lead,
                msg: format!("expected a parenthesized tuple, found {trimmed:?}"),
            })?;
        let mut coords = Vec::new();
        let mut inner_offset = offset + lead + 1;
        for c in split_top_level(inner, b',') {
            coords.push(ring.parse_element(c).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse {
                    pos: pos + inner_offset,
                    msg,
                },
                other => other,
            })?);
            inner_offset += c.len() + 1;
        }
        points.push(coords);
        offset += chunk.len() + 1;
    }
    Ok(points)
}

fn split_top_level(s: &str, sep: u8) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.bytes().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn qpoly(flag: &str, s: &str) -> Result<Vec<num_rational::BigRational>> {
    match element_arg(&Ring::RationalPoly, flag, s)? {
        Element::PolyQ(c) => Ok(c),
        _ => unreachable!(),
    }
}

fn execute_command(cmd: Command) -> Result<CommandResult> {
    match cmd {
        Command::Witness { ring, a, b, bound } => {
            let ring = ring_arg(&ring)?;
            let (a, b) = (element_arg(&ring, "a", &a)?, element_arg(&ring, "b", &b)?);
            let outcome = find_good_witness(&ring, &a, &b, bound)?;
            outcome_result(&ring, &a, &b, &outcome)
        }
        Command::Construct {
            ring,
            points,
            bound,
            max_terms,
            max_digits,
        } => {
            let ring = ring_arg(&ring)?;
            let coords = parse_points(&ring, &points)?;
            let prim: Vec<PrimitivePoint> = coords
                .iter()
                .map(|c| is_primitive(&ring, c).ok_or(Error::NotPrimitive))
                .collect::<Result<_>>()?;
            let limits = Limits {
                witness_bound: bound,
                max_terms,
                max_digits,
            };
            let c = construct_unit_valued(&ring, &prim, &limits)?;
            c.replay(&ring, &prim)?;
            let values: Vec<String> = coords
                .iter()
                .map(|p| c.polynomial.eval(&ring, p).map(|v| ring.format(&v)))
                .collect::<Result<_>>()?;
            Ok(CommandResult::ok(json!({
                "polynomial": c.polynomial.format(&ring),
                "degree": c.polynomial.degree(),
                "terms": c.polynomial.len(),
                "values": values,
                "steps": c.traces.len(),
            })))
        }
        Command::CheckGood { ring } => {
            let ring = ring_arg(&ring)?;
            let rep = check_good_ring_exhaustive(&ring)?;
            let failures: Vec<String> = rep
                .failures
                .iter()
                .map(|(a, b)| format!("({},{})", ring.format(a), ring.format(b)))
                .collect();
            Ok(CommandResult::ok(json!({
                "pairs_checked": rep.pairs_checked,
                "primitive_pairs": rep.primitive_pairs,
                "all_good": rep.all_good,
                "max_N_seen": rep.max_exponent_seen,
                "failures": failures,
            })))
        }
        Command::QuotientUnits { ring, a } => {
            let ring = ring_arg(&ring)?;
            let a = element_arg(&ring, "a", &a)?;
            let rep = unit_quotient_group(&ring, &a);
            match rep.status {
                QuotientStatus::Finite { order } => Ok(CommandResult::ok(json!({
                    "order": order,
                    "carrier_size": rep.carrier_size,
                }))),
                QuotientStatus::InfiniteEvidence { generator } => Ok(CommandResult::ok(json!({
                    "order": "infinite",
                    "generator": ring.format(&generator),
                }))),
                QuotientStatus::Unknown => Err(Error::Unsupported(
                    "the quotient is infinite and no generator data is available".into(),
                )),
            }
        }
        Command::DecideQt { a, b } => {
            let (pa, pb) = (qpoly("a", &a)?, qpoly("b", &b)?);
            let outcome = decide_good_point_rational_split(&pa, &pb)?;
            outcome_result(&Ring::RationalPoly, &Element::PolyQ(pa), &Element::PolyQ(pb), &outcome)
        }
        Command::RefuteZt { a, b } => {
            let (pa, pb) = (qpoly("a", &a)?, qpoly("b", &b)?);
            match refute_integer_poly_point(&pa, &pb, None)? {
                Some(e) => Ok(CommandResult::with(Status::Refuted, json!({ "evidence": evidence_json(&e) }))),
                None => {
                    let mut r = CommandResult::ok(json!({ "refuted": false }));
                    r.diagnostics.push("no rational root obstruction; inconclusive".into());
                    Ok(r)
                }
            }
        }
        Command::Sab { ring, a, z, w } => {
            let ring = ring_arg(&ring)?;
            let a = element_arg(&ring, "a", &a)?;
            let alg = SabAlgebra::new(ring, a)?;
            let z = alg.parse(&z)?;
            let theta = alg.theta();
            let mut payload = json!({
                "z": alg.format(&z),
                "theta_squared": alg.format(&alg.mul(&theta, &theta)),
                "unit": alg.is_unit(&z),
            });
            if let Some(inv) = alg.unit_inverse(&z) {
                payload["inverse"] = json!(alg.format(&inv));
            }
            if let Some(w) = w {
                let w = alg.parse(&w)?;
                payload["product"] = json!(alg.format(&alg.mul(&z, &w)));
            }
            Ok(CommandResult::ok(payload))
        }
        Command::Bridge {
            ring,
            a,
            b,
            to_poly,
            from_poly,
            bound,
        } => {
            let ring = ring_arg(&ring)?;
            let (a, b) = (element_arg(&ring, "a", &a)?, element_arg(&ring, "b", &b)?);
            if to_poly {
                let cert = bezout(&ring, &[a.clone(), b.clone()]).ok_or(Error::NotPrimitive)?;
                let outcome = find_good_witness(&ring, &a, &b, bound)?;
                let SearchOutcome::Witness(w) = &outcome else {
                    return outcome_result(&ring, &a, &b, &outcome);
                };
                let p = witness_to_polynomial(&ring, &a, &b, &cert, w)?;
                Ok(CommandResult::ok(json!({
                    "polynomial": p.format(&ring),
                    "degree": p.degree(),
                    "witness": witness_json(&ring, w),
                })))
            } else {
                let text = from_poly.expect("clap enforces one of the two modes");
                let p = HomogeneousPolynomial::parse(&ring, &text, Some(2))?;
                let w = polynomial_to_witness(&ring, &a, &b, &p)?;
                Ok(CommandResult::ok(witness_json(&ring, &w)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn json_of(args: &[&str]) -> (i32, Value) {
        let mut argv = vec!["goodring"];
        argv.extend_from_slice(args);
        let (code, out) = run(argv);
        (code, serde_json::from_str(&out).unwrap())
    }

    #[test]
    fn witness_command() {
        let (code, v) = json_of(&["witness", "--ring", "Z", "--a", "5", "--b", "2"]);
        assert_eq!(code, 0);
        assert_eq!(v["status"], "ok");
        assert_eq!(v["payload"]["N"], 2);
        assert_eq!(v["payload"]["lambda"], "-1");
        assert_eq!(v["payload"]["epsilon"], "-1");
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, v) = json_of(&["witness", "--ring", "Z", "--a", "5"]);
        assert_eq!(code, 2);
        assert_eq!(v["status"], "error");
        let (code, v) = json_of(&["witness", "--ring", "GF(4)", "--a", "1", "--b", "1"]);
        assert_eq!(code, 2);
        assert!(v["diagnostics"][0].as_str().unwrap().contains("position"));
        let (code, _) = json_of(&["frobnicate"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn non_primitive_exits_1() {
        let (code, v) = json_of(&["witness", "--ring", "Z", "--a", "4", "--b", "2"]);
        assert_eq!(code, 1);
        assert_eq!(v["payload"]["error"], "not-primitive");
    }

    #[test]
    fn points_parse_with_nested_tuples() {
        let r = parse_ring("prod(Z/2,Z/3)").unwrap();
        let pts = parse_points(&r, "((1,0),(0,1)); ((1,1),(1,2))").unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[1].len(), 2);
        assert!(parse_points(&Ring::Integers, "(1,0);1,1").is_err());
    }

    #[test]
    fn text_format() {
        let (code, out) = run(["goodring", "--format", "text", "quotient-units", "--ring", "Z", "--a", "8"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("status: ok"));
        assert!(out.contains("order: 2"));
    }
}
