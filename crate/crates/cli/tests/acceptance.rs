//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::E;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gfa_cli::runner::{run_spec, RunConfig};
use gfa_cli::parse_spec;
use gfa_core::basealg::{Element, SeminormFamily};
use gfa_core::complete::{diagonalize, extract_moduli, geometric_family, verify_convergence};
use gfa_core::embed::{check_scale_admissible, check_unbounded, make_delta, Mollifier};
use gfa_core::expr::Expr;
use gfa_core::props::{run_suite, Suite};
use gfa_core::scale::{Scale, ScaleFamily};
use gfa_core::scalefam::{family_ideal_check, family_membership};
use gfa_core::seqspace::{classify, equal_in_quotient, ultranorm, ultranorm_tailfit, Budget, Equality, Mode, Seq, Verdict};

const SEED: u64 = 42;

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl Into<String>) -> Outcome {
    if ok {
        Ok(msg.into())
    } else {
        Err(msg.into())
    }
}

fn seq(src: &str) -> Seq {
    Seq::from_expr(src, Expr::parse(src).unwrap()).unwrap()
}

fn suites(list: &[(Suite, usize)]) -> Outcome {
    let budget = Budget::default();
    let mut parts = vec![];
    for &(suite, instances) in list {
        let rep = run_suite(suite, SEED, instances, &budget).map_err(|e| format!("{suite}: {e}"))?;
        if !rep.passed() {
            return Err(format!("{suite}: {} violation(s), first: {}", rep.violations.len(), rep.violations[0]));
        }
        parts.push(format!("{suite} {}/{}", rep.instances - rep.vacuous, rep.instances));
    }
    Ok(parts.join(", "))
}

fn closed_form_identities() -> Outcome {
    let start = Instant::now();
    let b = Budget::default();
    for k in 1..=3 {
        let u = ultranorm(&seq(&format!("n^{k}")), &SeminormFamily::AbsoluteValue, 0, 0, &Scale::log(), &b)
            .map_err(|e| e.to_string())?;
        let want = (k as f64).exp();
        if (u.value - want).abs() > 1e-9 * want {
            return Err(format!("k={k}: {} vs {want}", u.value));
        }
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(1), format!("k=1..3 within 1e-9, {t:.2?}"))
}

fn discreteness() -> Outcome {
    suites(&[(Suite::Discreteness, 100)])
}

fn ultrametric_suite() -> Outcome {
    suites(&[(Suite::Ultrametric, 1000), (Suite::Submultiplicative, 1000), (Suite::Scalar, 1000), (Suite::TailFit, 50)])
}

fn ideal_and_ring() -> Outcome {
    suites(&[(Suite::Ideal, 500), (Suite::Ring, 500)])
}

fn delta_embedding() -> Outcome {
    let b = Budget::default();
    let sup = SeminormFamily::sup();
    let delta = make_delta(&Mollifier::gaussian()).map_err(|e| e.to_string())?;
    let mut fitted = vec![];
    for nu in 0..=2u32 {
        let t = ultranorm_tailfit(&delta, &sup, 1, nu, &Scale::log(), &b).map_err(|e| e.to_string())?;
        let want = (nu + 1) as f64;
        if !t.confident || (t.exponent - want).abs() > 1e-2 {
            return Err(format!("nu={nu}: tail fit exponent {} (confident {})", t.exponent, t.confident));
        }
        fitted.push(format!("{:.4}", t.exponent));
    }
    let u = check_unbounded(&delta, &sup, 1, &b).map_err(|e| e.to_string())?;
    if !u.strict_everywhere {
        return Err(format!("sup values not strictly increasing: {:?}", u.sup_values));
    }
    let lnln = Scale::custom(Expr::parse("1/log(log(n))").unwrap(), 16).unwrap();
    let a = check_scale_admissible(&delta, &sup, &lnln, Mode::Projective, &b.with_indices(1, 0)).map_err(|e| e.to_string())?;
    check(!a.admissible, format!("exponents [{}], strict growth, 1/ln ln n rejected ({})", fitted.join(", "), a.verdict))
}

fn delta_squared() -> Outcome {
    let b = Budget::default().with_indices(1, 0);
    let sup = SeminormFamily::sup();
    let delta = make_delta(&Mollifier::gaussian()).map_err(|e| e.to_string())?;
    let dd = delta.mul(&delta).map_err(|e| e.to_string())?;
    let c = classify(&dd, &sup, &Scale::log(), Mode::Projective, &b).map_err(|e| e.to_string())?;
    let u = ultranorm(&dd, &sup, 1, 0, &Scale::log(), &b).map_err(|e| e.to_string())?;
    let eq = equal_in_quotient(&dd, &Seq::zero(), &sup, &Scale::log(), Mode::Projective, &b).map_err(|e| e.to_string())?;
    check(
        c.verdict == Verdict::Moderate && (u.value - E * E).abs() <= 1e-2 && eq == Equality::NotEqual,
        format!("{} with ultranorm {:.6} ({}), equal to zero: {eq}", c.verdict, u.value, u.method),
    )
}

fn completeness_replay() -> Outcome {
    let start = Instant::now();
    let b = Budget::default().with_n_max(100_000);
    let members = geometric_family(8).map_err(|e| e.to_string())?;
    let cd = extract_moduli(members, &SeminormFamily::AbsoluteValue, &Scale::log(), Mode::Projective, 4, &b)
        .map_err(|e| e.to_string())?;
    let _fbar = diagonalize(&cd);
    let rep = verify_convergence(&cd, &b).map_err(|e| e.to_string())?;
    let last = rep.distances.last().unwrap().value;
    let t = start.elapsed();
    check(
        rep.monotone && last < 0.125 && rep.bound_chain.holds() && t < Duration::from_secs(10),
        format!("{} levels, monotone {}, final distance {last:.3e}, {t:.2?}", cd.levels.len(), rep.monotone),
    )
}

/// `lim c n^{t - 1/m}`: the exponent of `exp(c n^t)` under `r_n = n^{-1/m}`.
fn power_oracle(c: f64, t: f64, m: u32) -> f64 {
    let d = t - 1.0 / m as f64;
    if d.abs() < 1e-12 {
        c
    } else if d > 0.0 {
        c.signum() * f64::INFINITY
    } else {
        0.0
    }
}

fn family_suite() -> Outcome {
    let b = Budget::default();
    let abs = SeminormFamily::AbsoluteValue;
    let fam = ScaleFamily::power(6).map_err(|e| e.to_string())?;
    // exp(c n^t) with the leading log growth dropped where it cannot matter
    for (src, c, t) in [("exp(log(n)^2)", 1.0, 0.0), ("exp(sqrt(n))", 1.0, 0.5), ("exp(-n)", -1.0, 1.0)] {
        let v = family_membership(&seq(src), &fam, &abs, 0, 0, 6, &b).map_err(|e| e.to_string())?;
        for (m, est) in &v.levels {
            let want = power_oracle(c, t, *m);
            let ok = if want.is_finite() { (est.exponent - want).abs() <= 1e-9 } else { est.exponent == want };
            if !ok {
                return Err(format!("{src} at m={m}: exponent {} vs {want}", est.exponent));
            }
        }
        let in_f = (1..=6).all(|m| power_oracle(c, t, m) < f64::INFINITY);
        let in_k = (1..=6).any(|m| power_oracle(c, t, m) == f64::NEG_INFINITY);
        if v.in_f.holds() != Some(in_f) || v.in_k.holds() != Some(in_k) {
            return Err(format!("{src}: in_F {} in_K {}, expected {in_f} {in_k}", v.in_f, v.in_k));
        }
    }
    let r = family_ideal_check(&seq("exp(-n)"), &seq("n^3"), &fam, &abs, 0, 0, 6, &b).map_err(|e| e.to_string())?;
    if !r.passed() {
        return Err(format!("exp(-n) * n^3: {:?}", r.outcome));
    }
    let eg = ScaleFamily::egorov(6).map_err(|e| e.to_string())?;
    let v = family_membership(&seq("1/n"), &eg, &abs, 0, 0, 6, &b).map_err(|e| e.to_string())?;
    if v.in_f.holds() != Some(true) || v.in_k.holds() != Some(false) {
        return Err(format!("1/n under egorov: in_F {} in_K {}", v.in_f, v.in_k));
    }
    let stat = Seq::generic("stationary", 1, |n| Ok(Element::real([1.0, 0.5].get(n as usize - 1).copied().unwrap_or(0.0))));
    let v = family_membership(&stat, &eg, &abs, 0, 0, 6, &b).map_err(|e| e.to_string())?;
    if v.in_k.holds() != Some(true) || v.in_k.level() != Some(2) {
        return Err(format!("stationary sequence: in_K {} at {:?}", v.in_k, v.in_k.level()));
    }
    suites(&[(Suite::Egorov, 200), (Suite::FamilyIdeal, 200)]).map(|s| format!("worked examples agree, {s}"))
}

fn jets() -> Outcome {
    let rep = run_suite(Suite::Jet, SEED, 500, &Budget::default()).map_err(|e| e.to_string())?;
    if !rep.passed() {
        return Err(format!("{} violation(s), first: {}", rep.violations.len(), rep.violations[0]));
    }
    // points where the difference oracle cannot reach the tolerance are skipped
    check(rep.vacuous * 20 <= rep.instances, format!("{}/{} checked against differences", rep.instances - rep.vacuous, rep.instances))
}

fn dsl() -> Outcome {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let names = ["basics", "delta", "families", "cauchy", "properties", "convolution"];
    for name in names {
        let src = fs::read_to_string(root.join(format!("specs/{name}.gfa"))).map_err(|e| e.to_string())?;
        let spec = parse_spec(&src).map_err(|d| format!("{name}: {}", d[0]))?;
        let text = spec.to_string();
        let golden = fs::read_to_string(root.join(format!("tests/golden/{name}.txt"))).map_err(|e| e.to_string())?;
        if text != golden {
            return Err(format!("{name}: canonical form differs from golden"));
        }
        let again = parse_spec(&text).map_err(|d| format!("{name} reparse: {}", d[0]))?;
        if again != spec || again.to_string() != text {
            return Err(format!("{name}: round trip changed the tree"));
        }
        let (a, b) = (tmp.path().join(format!("{name}-a")), tmp.path().join(format!("{name}-b")));
        let ra = run_spec(&spec, &a, &RunConfig::default()).map_err(|e| format!("{e:#}"))?;
        run_spec(&spec, &b, &RunConfig::default()).map_err(|e| format!("{e:#}"))?;
        if ra.exit_code != 0 {
            return Err(format!("{name}: exit code {}", ra.exit_code));
        }
        for entry in fs::read_dir(&a).map_err(|e| e.to_string())? {
            let f = entry.map_err(|e| e.to_string())?.file_name();
            if fs::read(a.join(&f)).ok() != fs::read(b.join(&f)).ok() {
                return Err(format!("{name}/{}: rerun differs", f.to_string_lossy()));
            }
        }
    }
    Ok(format!("{} specs: goldens, round trips, identical reruns", names.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("closed-form identities", closed_form_identities),
        ("discreteness of constants", discreteness),
        ("ultrametric, submultiplicative, scalar, tail fit", ultrametric_suite),
        ("ideal and ring axioms", ideal_and_ring),
        ("delta embedding", delta_embedding),
        ("delta squared", delta_squared),
        ("completeness replay", completeness_replay),
        ("scale families", family_suite),
        ("jet derivatives", jets),
        ("dsl goldens and reruns", dsl),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = f();
        let t = start.elapsed();
        match res {
            Ok(msg) => println!("[PASS] {:>2} {name}: {msg} ({t:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {msg} ({t:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
