//! Bundled specs: canonical-form goldens, round trips and byte-identical reruns.
//! Set `UPDATE_GOLDEN=1` to rewrite the golden files.

use std::fs;
use std::path::{Path, PathBuf};

use gfa_cli::runner::{run_spec, RunConfig};
use gfa_cli::{check_spec, parse_spec};

const SPECS: [&str; 6] = ["basics", "delta", "families", "cauchy", "properties", "convolution"];

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn check_golden(name: &str, actual: &str) {
    let path = root().join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    assert_eq!(read(&path), actual, "golden {name} differs; rerun with UPDATE_GOLDEN=1 if intended");
}

fn load(name: &str) -> String {
    read(&root().join("specs").join(format!("{name}.gfa")))
}

#[test]
fn bundled_specs_validate_cleanly() {
    for name in SPECS {
        let (spec, diags) = check_spec(&load(name));
        assert!(spec.is_some(), "{name}: {diags:?}");
        assert!(diags.is_empty(), "{name}: {diags:?}");
    }
}

#[test]
fn canonical_forms_match_goldens() {
    for name in SPECS {
        let spec = parse_spec(&load(name)).unwrap();
        check_golden(&format!("{name}.txt"), &spec.to_string());
    }
}

#[test]
fn pretty_print_round_trips() {
    for name in SPECS {
        let spec = parse_spec(&load(name)).unwrap();
        let text = spec.to_string();
        let again = parse_spec(&text).unwrap();
        assert_eq!(spec, again, "{name}");
        assert_eq!(text, again.to_string(), "{name}");
    }
}

#[test]
fn diagnostics_match_golden() {
    let src = read(&root().join("tests/golden/errors.gfa"));
    let (spec, diags) = check_spec(&src);
    assert!(spec.is_none());
    let rendered: String = diags.iter().map(|d| d.render(&src, "errors.gfa")).collect();
    check_golden("errors.txt", &rendered);
    for d in &diags {
        assert!(d.span.end() <= src.len());
    }
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    for name in SPECS {
        let spec = parse_spec(&load(name)).unwrap();
        let (a, b) = (tmp.path().join(format!("{name}-a")), tmp.path().join(format!("{name}-b")));
        let ra = run_spec(&spec, &a, &RunConfig::default()).unwrap();
        let rb = run_spec(&spec, &b, &RunConfig { parallel: true, ..RunConfig::default() }).unwrap();
        assert_eq!(ra.exit_code, 0, "{name}: {:?}", ra.outcomes.iter().map(|o| &o.detail).collect::<Vec<_>>());
        assert_eq!(ra.exit_code, rb.exit_code);
        let (fa, fb) = (files(&a), files(&b));
        assert_eq!(fa.len(), spec.tasks().count() + 1, "{name}");
        assert_eq!(fa, fb, "{name}: sequential and parallel runs differ");
        for (f, bytes) in &fa {
            assert!(bytes.starts_with(b"# gfa-kit v1\n"), "{name}/{f}");
        }
    }
}

#[test]
fn basic_reports_match_golden() {
    // closed-form values only, so the bytes are platform independent
    let tmp = tempfile::tempdir().unwrap();
    let spec = parse_spec(&load("basics")).unwrap();
    run_spec(&spec, tmp.path(), &RunConfig::default()).unwrap();
    for (f, bytes) in files(tmp.path()) {
        check_golden(&format!("basics-out/{f}"), &String::from_utf8(bytes).unwrap());
    }
}
