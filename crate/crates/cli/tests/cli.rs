use std::f64::consts::E;
use std::fs;
use std::path::Path;
use std::process::Command;

use gfa_cli::runner::{run_spec, RunConfig};
use gfa_cli::{check_spec, parse_spec, Severity};

fn gfa() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gfa"))
}

fn summary_rows(dir: &Path) -> Vec<csv::StringRecord> {
    let text = fs::read_to_string(dir.join("summary.csv")).unwrap();
    let body = text.strip_prefix("# gfa-kit v1\n").expect("version header");
    csv::Reader::from_reader(body.as_bytes()).records().map(Result::unwrap).collect()
}

#[test]
fn smallest_valid_spec_has_one_task() {
    let spec = parse_spec(r#"seq f = "n^2"; scale r = log; task classify f r projective;"#).unwrap();
    assert_eq!(spec.tasks().count(), 1);
}

#[test]
fn undeclared_name_is_reported_at_its_span() {
    let src = "scale r = log;\ntask classify g r;";
    let diags = parse_spec(src).unwrap_err();
    assert_eq!(diags.len(), 1);
    let d = &diags[0];
    assert_eq!(d.message, "unknown name g");
    assert_eq!(d.severity, Severity::Error);
    assert_eq!((d.span.line, d.span.column, d.span.len), (2, 15, 1));
    assert_eq!(&src[d.span.offset..d.span.end()], "g");
}

#[test]
fn zero_power_scale_is_rejected() {
    let diags = parse_spec("scale p = power 0;").unwrap_err();
    assert_eq!(diags[0].message, "power scale parameter must be positive");
}

#[test]
fn delta_admissibility_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = parse_spec("mollifier g = gaussian; seq d = delta g; scale r = log; task embed-check d r mu_max=1 nu_max=0;")
        .unwrap();
    let rep = run_spec(&spec, tmp.path(), &RunConfig::default()).unwrap();
    assert_eq!(rep.exit_code, 0);
    let rows = summary_rows(tmp.path());
    let detail = &rows[0][5];
    assert!(detail.contains("admissible=true"), "{detail}");
    let witness: f64 = detail.split("witness=").nth(1).unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!((witness - E).abs() <= 1e-12 * E, "{witness}");
}

#[test]
fn seeded_property_runs_are_byte_identical() {
    let src = "task verify-properties suite=ultrametric instances=100; task verify-properties suite=ideal instances=50;";
    let spec = parse_spec(src).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let cfg = RunConfig { seed: 42, ..RunConfig::default() };
    let a = run_spec(&spec, &tmp.path().join("a"), &cfg).unwrap();
    let b = run_spec(&spec, &tmp.path().join("b"), &cfg).unwrap();
    assert_eq!(a.exit_code, b.exit_code);
    assert_eq!(a.exit_code, 0);
    for name in ["01-verify-properties.csv", "02-verify-properties.csv", "summary.csv"] {
        let (x, y) = (fs::read(tmp.path().join("a").join(name)).unwrap(), fs::read(tmp.path().join("b").join(name)).unwrap());
        assert_eq!(x, y, "{name}");
    }
    let other = run_spec(&spec, &tmp.path().join("c"), &RunConfig { seed: 7, ..cfg }).unwrap();
    assert_ne!(a.outcomes[0].csv, other.outcomes[0].csv, "the seed is recorded in the report");
}

#[test]
fn exponential_growth_is_divergent_with_exit_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = parse_spec(r#"seq f = "exp(n)"; scale r = log; task classify f r;"#).unwrap();
    let rep = run_spec(&spec, tmp.path(), &RunConfig::default()).unwrap();
    assert_eq!(rep.outcomes[0].outcome, "divergent");
    assert_eq!(rep.exit_code, 0);
}

#[test]
fn non_cauchy_family_is_a_conclusive_answer() {
    let tmp = tempfile::tempdir().unwrap();
    let src = r#"
        seq a = "1"; seq b = "1 + 1/n"; seq c = "2 + 1/n"; seq e = "1 + 1/n + 1/n^2";
        scale r = log;
        task cauchy { members: [a, b, c, e], mu_max: 1 } r;
    "#;
    let rep = run_spec(&parse_spec(src).unwrap(), tmp.path(), &RunConfig::default()).unwrap();
    assert_eq!(rep.outcomes[0].outcome, "not-cauchy");
    assert_eq!(rep.exit_code, 0);
}

fn write_spec(dir: &Path, src: &str) -> std::path::PathBuf {
    let p = dir.join("spec.gfa");
    fs::write(&p, src).unwrap();
    p
}

#[test]
fn binary_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");

    let ok = write_spec(tmp.path(), r#"seq f = "n^2"; scale r = log; task classify f r;"#);
    let s = gfa().arg("run").arg(&ok).arg("--out").arg(&out).status().unwrap();
    assert_eq!(s.code(), Some(0));
    assert!(out.join("01-classify.csv").exists());

    let unsure = write_spec(tmp.path(), r#"seq f = "exp(n*sin(n))"; scale r = log; task classify f r nmax=1e4;"#);
    let s = gfa().arg("run").arg(&unsure).arg("--out").arg(&out).status().unwrap();
    assert_eq!(s.code(), Some(2));

    let bad = write_spec(tmp.path(), "scale r = log;\ntask classify g r;");
    let o = gfa().arg("check").arg(&bad).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("error: unknown name g"), "{err}");
    assert!(err.contains(":2:15"), "{err}");

    let s = gfa().arg("run").arg(tmp.path().join("missing.gfa")).status().unwrap();
    assert_eq!(s.code(), Some(1));
}

#[test]
fn check_prints_canonical_form() {
    let tmp = tempfile::tempdir().unwrap();
    let p = write_spec(tmp.path(), "seq   f=\"n\" ;scale r=log;task classify f r   inductive;");
    let o = gfa().args(["check", "--print"]).arg(&p).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "seq f = \"n\";\nscale r = log;\ntask classify f r inductive;\n");
}

#[test]
fn nmax_flag_and_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let p = write_spec(tmp.path(), r#"seq f = "n"; scale r = log; task classify f r;"#);
    let s = gfa().arg("run").arg(&p).arg("--out").arg(tmp.path().join("o")).env("GFA_NMAX", "20000000").status().unwrap();
    assert_eq!(s.code(), Some(1), "environment override above the cap");
    let s = gfa().arg("run").arg(&p).arg("--out").arg(tmp.path().join("o")).env("GFA_NMAX", "5000").status().unwrap();
    assert_eq!(s.code(), Some(0));
}

#[test]
fn props_subcommand() {
    let o = gfa().args(["props", "--suite", "scalar", "--instances", "20"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("PASS scalar"));
    let o = gfa().args(["props", "--suite", "nope"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn warnings_do_not_block() {
    let (spec, diags) = check_spec("seq f = 1; seq unused = 2; scale r = log; task classify f r;");
    assert!(spec.is_some());
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0].severity, Severity::Warning);
}
