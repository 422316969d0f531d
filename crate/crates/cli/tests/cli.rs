use std::path::{Path, PathBuf};

use assert_cmd::Command;
use serde_json::Value;
use spectral_core::{Monomial, SpectralPolynomial};
use spectral_kernel::{cmd_example, parse_session, Session};

fn kernel() -> Command {
    Command::cargo_bin("spectral-kernel").unwrap()
}

fn here(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

/// Runs a subcommand on a catalog session fed through standard input.
fn run(example: &str, args: &[&str]) -> (i32, String, String) {
    let out = kernel()
        .args(args)
        .write_stdin(cmd_example(example).unwrap())
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn reduce_prints_module_coordinates() {
    let (code, out, _) = run("exponential", &["reduce", "--target", "G1*G2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "p0 = l^3 - 64/27*l, p1 = -4/3*l, p2 = 0\n");

    let (code, out, _) = run("exponential", &["reduce", "--target", "L^2 - 3*G1 + 2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "p0 = l^2 + 2, p1 = -3, p2 = 0\n");
}

#[test]
fn reduce_outside_the_span_is_a_math_error() {
    let (code, out, err) = run("exponential", &["reduce", "--target", "D"]);
    assert_eq!(code, 3);
    assert!(out.is_empty());
    assert!(err.contains("below ord(G1) = 4"), "{err}");
    let (code, _, err) = run("exponential", &["reduce", "--target", "E*L"]);
    assert_eq!(code, 3);
    assert!(err.contains("is not a constant"), "{err}");
}

#[test]
fn membership_verdicts() {
    let (code, out, _) = run("exponential", &["member", "--poly", "l"]);
    assert_eq!((code, out.as_str()), (0, "NOT a member; normal form: l\n"));
    let (_, out, _) = run("exponential", &["member", "--poly", "mu1^2 - l*mu2 + 8/3*l^2"]);
    assert_eq!(out, "member; normal form: 0\n");
    let (_, out, _) = run("exponential", &["member", "--poly", "mu1*mu1"]);
    assert_eq!(out, "NOT a member; normal form: l*mu2 - 8/3*l^2\n");
    let (code, _, err) = run("exponential", &["member", "--poly", "mu3"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown symbol `mu3`"), "{err}");
}

#[test]
fn verify_passes_on_the_catalog() {
    for name in ["exponential", "elliptic", "elliptic-sub"] {
        let (code, out, _) = run(name, &["verify"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.lines().all(|l| l.starts_with("PASS ")), "{out}");
    }
    let (code, out, _) = run("elliptic", &["verify", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ok"], Value::Bool(true));
    assert_eq!(v["checks"].as_array().unwrap().len(), 7);
}

#[test]
fn malformed_corpus_exit_codes() {
    let manifest = std::fs::read_to_string(here("tests/malformed/expected.txt")).unwrap();
    let mut seen = 0;
    for line in manifest.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let mut parts = line.split_whitespace();
        let file = parts.next().unwrap();
        let code: i32 = parts.next().unwrap().parse().unwrap();
        let fragment = parts.collect::<Vec<_>>().join(" ");
        let out = kernel()
            .args(["bc-ideal", "--input"])
            .arg(here(&format!("tests/malformed/{file}")))
            .output()
            .unwrap();
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(out.status.code(), Some(code), "{file}: {err}");
        assert!(err.contains(&fragment), "{file}: expected `{fragment}` in `{err}`");
        assert!(out.stdout.is_empty(), "{file}");
        seen += 1;
    }
    assert_eq!(seen, 12);
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        vec![],
        vec!["frobnicate"],
        vec!["reduce"],
        vec!["bc-ideal", "--format", "yaml"],
        vec!["example", "hyperbolic"],
        vec!["bc-ideal", "--input", "/nonexistent/session.txt"],
    ] {
        let out = kernel().args(&args).write_stdin("").output().unwrap();
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
    kernel().arg("--help").assert().success();
}

#[test]
fn thread_cap_is_validated() {
    let text = cmd_example("exponential").unwrap();
    kernel()
        .arg("bc-ideal")
        .env("SPECTRAL_KERNEL_THREADS", "0")
        .write_stdin(text)
        .assert()
        .code(1);
    let capped = kernel()
        .arg("bc-ideal")
        .env("SPECTRAL_KERNEL_THREADS", "1")
        .write_stdin(text)
        .output()
        .unwrap();
    let (_, free, _) = run("exponential", &["bc-ideal"]);
    assert_eq!(String::from_utf8(capped.stdout).unwrap(), free);
}

#[test]
fn json_output_matches_the_schema() {
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(here("schema/bc_ideal.schema.json")).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    for name in ["exponential", "elliptic", "elliptic-sub"] {
        let (code, out, _) = run(name, &["bc-ideal", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!(compiled.is_valid(&v), "{name}");
    }
    let broken = serde_json::json!({"n": 3});
    assert!(!compiled.is_valid(&broken));
}

fn decode_json(session: &Session, v: &Value) -> Vec<SpectralPolynomial> {
    let nmu = v["t"].as_u64().unwrap() as usize - 1;
    v["relations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            let mut p = SpectralPolynomial::zero(&session.field, nmu, spectral_core::CoeffRing::Constants);
            for t in r["terms"].as_array().unwrap() {
                let m = Monomial {
                    lambda: t["lambda"].as_u64().unwrap() as u32,
                    mu: t["mu"].as_array().unwrap().iter().map(|a| a.as_u64().unwrap() as u32).collect(),
                };
                let c = session.eval_poly(t["coeff"].as_str().unwrap(), nmu).unwrap();
                p = p.add(&c.mul(&SpectralPolynomial::term(session.field.one(), m)));
            }
            p
        })
        .collect()
}

fn decode_text(session: &Session, text: &str, nmu: usize) -> Vec<SpectralPolynomial> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| session.eval_poly(l.split_once(" = ").unwrap().1, nmu).unwrap())
        .collect()
}

#[test]
fn text_and_json_carry_the_same_relations() {
    for name in ["exponential", "elliptic", "elliptic-sub"] {
        let session = parse_session(cmd_example(name).unwrap()).unwrap();
        let (_, json_out, _) = run(name, &["bc-ideal", "--format", "json"]);
        let (_, text_out, _) = run(name, &["bc-ideal"]);
        let v: Value = serde_json::from_str(&json_out).unwrap();
        let nmu = v["t"].as_u64().unwrap() as usize - 1;
        let from_json = decode_json(&session, &v);
        assert_eq!(from_json, decode_text(&session, &text_out, nmu), "{name}");
        assert_eq!(from_json.len(), nmu * (nmu + 1) / 2);
    }
}

#[test]
fn latex_output() {
    let (code, out, _) = run("elliptic-sub", &["bc-ideal", "--format", "latex"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "\\begin{align*}\nR_{1,1} &= \\mu_{1}^{2} - \\lambda^{3} + \\left(3 g_{2} + 3\\right) \\lambda^{2} \
         - \\left(6 g_{2} + 3\\right) \\lambda + \\left(3 g_{2} + 1\\right)\n\\end{align*}\n"
    );
    let (_, out, _) = run("exponential", &["reduce", "--target", "G1*G2", "--format", "latex"]);
    assert!(out.contains("p_{1} &= -\\frac{4}{3} \\lambda"), "{out}");
}

#[test]
fn example_round_trips_through_a_file() {
    let dir = std::env::temp_dir().join(format!("spectral-kernel-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("elliptic.session");
    let out = kernel().args(["example", "elliptic"]).output().unwrap();
    std::fs::write(&path, &out.stdout).unwrap();
    let from_file = kernel().args(["bc-ideal", "--input"]).arg(&path).output().unwrap();
    let (_, from_stdin, _) = run("elliptic", &["bc-ideal"]);
    assert_eq!(String::from_utf8(from_file.stdout).unwrap(), from_stdin);
    std::fs::remove_dir_all(&dir).unwrap();
}
