//! Name resolution and validation: lowers a parsed spec to core objects and
//! typed jobs, collecting every diagnostic instead of stopping at the first.

use std::collections::{HashMap, HashSet};

use gfa_core::basealg::{Element, SeminormFamily};
use gfa_core::embed::{embed_by_convolution, make_delta, ConvSource, Mollifier, PiecewiseTable};
use gfa_core::expr::{Expr, Var, Vars};
use gfa_core::growth::{Growth, GrowthCertificate};
use gfa_core::props::Suite;
use gfa_core::scale::{check_scale_valid, AsymptoticFamily, Scale, ScaleFamily};
use gfa_core::scalefam::DEFAULT_M_BUDGET;
use gfa_core::seqspace::{Mode, Seq};
use gfa_core::Error;

use crate::ast::*;
use crate::diag::{suggest, Diagnostic, Span};

/// Hard caps guarding against accidental unbounded runs.
pub const MAX_NMAX: u64 = 10_000_000;
pub const MIN_NMAX: u64 = 100;
pub const MAX_INDEX: u32 = 8;
pub const MAX_M: u32 = 12;
pub const MAX_INSTANCES: u64 = 100_000;
const MAX_GRID: u64 = 8192;

/// Index budgets used when a task does not set them.
pub const DEFAULT_MU_MAX: u32 = 2;
pub const DEFAULT_NU_MAX: u32 = 2;

#[derive(Clone)]
enum Value {
    Seq(Seq),
    Scale(Scale),
    Family(ScaleFamily),
    Mollifier(Mollifier),
    Seminorm(SeminormFamily),
}

struct Entry {
    kind: DeclKind,
    span: Span,
    /// `None` when building the value failed; the failure is already reported.
    value: Option<Value>,
}

/// What a task computes, with every operand resolved.
#[derive(Clone)]
pub enum Op {
    Classify { f: Seq, p: SeminormFamily, r: Scale, mode: Mode, mu_max: u32, nu_max: u32 },
    Distance { f: Seq, g: Seq, p: SeminormFamily, r: Scale, mu: u32, nu: u32 },
    Equal { f: Seq, g: Seq, p: SeminormFamily, r: Scale, mode: Mode, mu_max: u32, nu_max: u32 },
    EmbedCheck { f: Seq, p: SeminormFamily, r: Scale, mode: Mode, mu_max: u32, nu_max: u32 },
    Family { f: Seq, fam: ScaleFamily, p: SeminormFamily, mu: u32, nu: u32, m_budget: u32, ideal: Option<Seq> },
    Cauchy { members: Vec<Seq>, p: SeminormFamily, r: Scale, mode: Mode, mu_max: u32, nu_max: u32 },
    Props { suites: Vec<Suite>, instances: Option<usize>, seed: Option<u64> },
}

#[derive(Clone)]
pub struct Job {
    /// 1-based position among the tasks.
    pub index: usize,
    pub kind: TaskKind,
    /// Short description of the operands for the summary.
    pub subject: String,
    pub op: Op,
    /// Per-task sampling limit, overriding the run configuration.
    pub n_max: Option<u64>,
}

pub struct Program {
    pub jobs: Vec<Job>,
}

/// Resolves `spec`. `src` is the text it was parsed from, used to place
/// diagnostics inside string literals; without it they cover the whole literal.
pub fn lower(spec: &ExperimentSpec, src: Option<&str>) -> (Option<Program>, Vec<Diagnostic>) {
    let mut cx = Cx { src, env: HashMap::new(), order: Vec::new(), used: HashSet::new(), diags: Vec::new() };
    let mut jobs = Vec::new();
    for item in &spec.items {
        match item {
            Item::Decl(d) => cx.declare(d),
            Item::Task(t) => {
                let index = jobs.len() + 1;
                if let Some(job) = cx.task(t, index) {
                    jobs.push(job);
                } else {
                    // keep numbering stable even when a task fails to resolve
                    jobs.push(Job {
                        index,
                        kind: t.kind.value,
                        subject: String::new(),
                        op: Op::Props { suites: vec![], instances: None, seed: None },
                        n_max: None,
                    });
                }
            }
        }
    }
    // unused declarations are only worth a warning once the file is otherwise clean
    let clean = !cx.diags.iter().any(Diagnostic::is_error);
    for name in cx.order.iter().filter(|_| clean) {
        if !cx.used.contains(name) {
            let e = &cx.env[name];
            cx.diags.push(Diagnostic::warning(e.span, format!("{} `{name}` is never used", e.kind)));
        }
    }
    cx.diags.sort_by_key(|d| (d.span.offset, d.severity == crate::diag::Severity::Warning));
    let ok = !cx.diags.iter().any(Diagnostic::is_error);
    (ok.then_some(Program { jobs }), cx.diags)
}

type R<T> = Result<T, Diagnostic>;

struct Cx<'a> {
    src: Option<&'a str>,
    env: HashMap<String, Entry>,
    order: Vec<String>,
    used: HashSet<String>,
    diags: Vec<Diagnostic>,
}

fn err(span: Span, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::error(span, msg)
}

fn int(n: &Num, what: &str, lo: u64, hi: u64) -> R<u64> {
    let v = n.value;
    if v.fract() != 0.0 {
        return Err(err(n.span, format!("{what} must be an integer")));
    }
    if v < lo as f64 || v > hi as f64 {
        return Err(err(n.span, format!("{what} must be between {lo} and {hi}")));
    }
    Ok(v as u64)
}

fn signed_int(n: &Num, what: &str) -> R<i64> {
    if n.value.fract() != 0.0 || n.value.abs() > 1e6 {
        return Err(err(n.span, format!("{what} must be an integer")));
    }
    Ok(n.value as i64)
}

impl Cx<'_> {
    /// Places a core error raised while reading literal `lit`.
    fn lit_error(&self, lit: &Lit, e: Error) -> Diagnostic {
        match (e, self.src) {
            (Error::Parse { offset, len, message }, Some(src)) if lit.raw => {
                let span = Span::locate(src, lit.span.offset + 1 + offset, len.max(1));
                err(span, format!("in expression: {message}"))
            }
            (Error::Parse { message, .. }, _) => err(lit.span, format!("in expression: {message}")),
            (e, _) => err(lit.span, e.to_string()),
        }
    }

    fn expr(&self, lit: &Lit) -> R<Expr> {
        Expr::parse(&lit.text).map_err(|e| self.lit_error(lit, e))
    }

    fn lookup(&mut self, name: &Name, want: DeclKind) -> R<Option<Value>> {
        match self.env.get(&name.value) {
            Some(e) if e.kind == want => {
                self.used.insert(name.value.clone());
                Ok(e.value.clone())
            }
            Some(e) => Err(err(name.span, format!("`{}` is a {}, expected a {want}", name.value, e.kind))),
            None => {
                let cands = self.order.iter().filter(|n| self.env[*n].kind == want).map(String::as_str);
                Err(err(name.span, format!("unknown name {}", name.value)).with_suggestion(suggest(&name.value, cands)))
            }
        }
    }

    fn declare(&mut self, d: &Decl) {
        let name = &d.name;
        if let Some(prev) = self.env.get(&name.value) {
            let msg = format!("duplicate name {} (first declared on line {})", name.value, prev.span.line);
            self.diags.push(err(name.span, msg));
            return;
        }
        let value = match self.build(d) {
            Ok(v) => v,
            Err(diag) => {
                self.diags.push(diag);
                None
            }
        };
        self.order.push(name.value.clone());
        self.env.insert(name.value.clone(), Entry { kind: d.body.kind(), span: name.span, value });
    }

    /// `Ok(None)` when an operand already failed, so nothing new is reported.
    fn build(&mut self, d: &Decl) -> R<Option<Value>> {
        Ok(Some(match &d.body {
            DeclBody::Seq { expr, certify } => {
                let Some(mut s) = self.seq(expr, d.name.span)? else { return Ok(None) };
                s = s.with_label(d.name.value.clone());
                if let Some(c) = certify {
                    s = s.with_certificate(GrowthCertificate::uniform(certificate(c)?));
                }
                Value::Seq(s)
            }
            DeclBody::Scale(sr) => {
                let Some(s) = self.scale(sr)? else { return Ok(None) };
                Value::Scale(s)
            }
            DeclBody::Family(fr) => {
                let Some(f) = self.family(fr)? else { return Ok(None) };
                Value::Family(f)
            }
            DeclBody::Mollifier(m) => Value::Mollifier(mollifier(m)?),
            DeclBody::Seminorm(sr) => Value::Seminorm(seminorm(sr)?),
        }))
    }

    fn seq(&mut self, e: &SeqExpr, at: Span) -> R<Option<Seq>> {
        let core = |r: gfa_core::Result<Seq>| r.map_err(|e| err(at, e.to_string()));
        Ok(Some(match e {
            SeqExpr::Str(lit) => {
                let ex = self.expr(lit)?;
                Seq::from_expr(lit.text.clone(), ex).map_err(|e| self.lit_error(lit, e))?
            }
            SeqExpr::Num(v) => Seq::constant(v.value.to_string(), Element::real(v.value)),
            SeqExpr::Ref(n) => match self.lookup(n, DeclKind::Seq)? {
                Some(Value::Seq(s)) => s,
                _ => return Ok(None),
            },
            SeqExpr::Delta(m) => {
                let Some(moll) = self.mollifier_ref(m)? else { return Ok(None) };
                core(make_delta(&moll))?
            }
            SeqExpr::Conv { source, mollifier } => {
                let Some(moll) = self.mollifier_ref(mollifier)? else { return Ok(None) };
                let src = match source {
                    ConvSrc::Heaviside => ConvSource::Table(PiecewiseTable::heaviside()),
                    ConvSrc::Expr(lit) => {
                        let ex = self.expr(lit)?;
                        if ex.mentions(Var::N) || ex.mentions(Var::M) {
                            return Err(err(lit.span, "a convolved function may only use x"));
                        }
                        ConvSource::Expr(ex)
                    }
                };
                core(embed_by_convolution(&src, &moll))?
            }
            SeqExpr::Const(lit) => {
                let ex = self.expr(lit)?;
                if ex.mentions(Var::N) || ex.mentions(Var::M) {
                    return Err(err(lit.span, "`const` takes an expression in x only"));
                }
                let el = if ex.mentions(Var::X) {
                    Element::smooth(ex).map_err(|e| self.lit_error(lit, e))?
                } else {
                    Element::real(ex.eval(&Vars::default()).map_err(|e| self.lit_error(lit, e))?)
                };
                Seq::constant(lit.text.clone(), el)
            }
            SeqExpr::Deriv(a) => match self.seq(a, at)? {
                Some(s) => core(s.derivative())?,
                None => return Ok(None),
            },
            SeqExpr::Neg(a) => match self.seq(a, at)? {
                Some(s) => core(s.neg())?,
                None => return Ok(None),
            },
            SeqExpr::Bin { op, lhs, rhs } => {
                let (l, r) = (self.seq(lhs, at)?, self.seq(rhs, at)?);
                let (Some(l), Some(r)) = (l, r) else { return Ok(None) };
                core(match op {
                    BinOp::Add => l.add(&r),
                    BinOp::Sub => l.sub(&r),
                    BinOp::Mul => l.mul(&r),
                })?
            }
        }))
    }

    fn mollifier_ref(&mut self, m: &Name) -> R<Option<Mollifier>> {
        Ok(match self.lookup(m, DeclKind::Mollifier)? {
            Some(Value::Mollifier(m)) => Some(m),
            _ => None,
        })
    }

    fn asym(&self, a: &AsymRef) -> R<AsymptoticFamily> {
        match a {
            AsymRef::Power => Ok(AsymptoticFamily::power()),
            AsymRef::Exponential => Ok(AsymptoticFamily::exponential()),
            AsymRef::Expr(lit) => AsymptoticFamily::from_expr(self.expr(lit)?).map_err(|e| self.lit_error(lit, e)),
        }
    }

    fn scale(&mut self, s: &ScaleRef) -> R<Option<Scale>> {
        Ok(Some(match s {
            ScaleRef::Log => Scale::log(),
            ScaleRef::Power(m) => {
                if !(m.value > 0.0) {
                    return Err(err(m.span, "power scale parameter must be positive"));
                }
                Scale::power(m.value).map_err(|e| err(m.span, e.to_string()))?
            }
            ScaleRef::Egorov(m) => Scale::egorov(int(m, "egorov scale parameter", 1, u32::MAX as u64)? as u32),
            ScaleRef::Asymptotic { family, m } => {
                Scale::from_asymptotic(self.asym(family)?, signed_int(m, "asymptotic scale index")?)
            }
            ScaleRef::Custom { expr, from } => {
                let from_n = int(from, "custom scale start", 1, MAX_NMAX)?;
                let s = Scale::custom(self.expr(expr)?, from_n).map_err(|e| self.lit_error(expr, e))?;
                let report = check_scale_valid(&s, 1 << 20);
                if !report.valid() {
                    return Err(err(expr.span, format!("`{}` is not a positive weight decreasing to zero", expr.text)));
                }
                s
            }
        }))
    }

    fn family(&mut self, f: &FamilyRef) -> R<Option<ScaleFamily>> {
        let count = |c: &Num| int(c, "family size", 1, MAX_M as u64).map(|c| c as u32);
        let r = match f {
            FamilyRef::Power(c) => ScaleFamily::power(count(c)?),
            FamilyRef::Egorov(c) => ScaleFamily::egorov(count(c)?),
            FamilyRef::Asymptotic { family, count: c } => ScaleFamily::asymptotic(self.asym(family)?, count(c)?),
            FamilyRef::List(names) => {
                if names.len() > MAX_M as usize {
                    return Err(err(names[MAX_M as usize].span, format!("a family has at most {MAX_M} members")));
                }
                let mut scales = Vec::new();
                for n in names {
                    match self.lookup(n, DeclKind::Scale)? {
                        Some(Value::Scale(s)) => scales.push(s),
                        _ => return Ok(None),
                    }
                }
                ScaleFamily::explicit(scales)
            }
        };
        let span = match f {
            FamilyRef::Power(c) | FamilyRef::Egorov(c) | FamilyRef::Asymptotic { count: c, .. } => c.span,
            FamilyRef::List(ns) => ns[0].span,
        };
        r.map(Some).map_err(|e| err(span, e.to_string()))
    }

    fn task(&mut self, t: &Task, index: usize) -> Option<Job> {
        match self.task_inner(t, index) {
            Ok(j) => j,
            Err(d) => {
                self.diags.push(d);
                None
            }
        }
    }

    fn task_inner(&mut self, t: &Task, index: usize) -> R<Option<Job>> {
        use TaskKind::*;
        let kind = t.kind.value;
        let (slots, takes_mode, keys): (&[Slot], bool, &[&str]) = match kind {
            Classify => (&[Slot::Seq, Slot::Scale], true, &["seminorm", "mu_max", "nu_max", "nmax"]),
            Distance => (&[Slot::Seq, Slot::Seq, Slot::Scale], false, &["seminorm", "mu", "nu", "nmax"]),
            Equal => (&[Slot::Seq, Slot::Seq, Slot::Scale], true, &["seminorm", "mu_max", "nu_max", "nmax"]),
            EmbedCheck => (&[Slot::Seq, Slot::Scale], true, &["seminorm", "mu_max", "nu_max", "nmax"]),
            Family => (&[Slot::Seq, Slot::Family], false, &["seminorm", "mu", "nu", "m_budget", "ideal", "nmax"]),
            Cauchy => (&[Slot::Block, Slot::Scale], true, &["seminorm", "nu_max", "nmax"]),
            VerifyProperties => (&[], false, &["suite", "instances", "seed", "nmax"]),
        };

        let mut args: &[Arg] = &t.args;
        let mut mode = Mode::Projective;
        if takes_mode {
            if let Some(Arg::Name(n)) = args.last() {
                let m = match n.value.as_str() {
                    "projective" => Some(Mode::Projective),
                    "inductive" => Some(Mode::Inductive),
                    _ => None,
                };
                if let Some(m) = m {
                    mode = m;
                    args = &args[..args.len() - 1];
                }
            }
        }
        if args.len() != slots.len() {
            let sig: Vec<&str> = slots.iter().map(|s| s.name()).collect();
            let sig = if takes_mode { format!("{} [mode]", sig.join(" ")) } else { sig.join(" ") };
            let span = args.get(slots.len()).map_or(t.kind.span, Arg::span);
            return Err(err(
                span,
                format!("`{kind}` takes {} argument(s) ({}), found {}", slots.len(), sig.trim(), args.len()),
            ));
        }
        let opts = self.options(t, keys)?;

        let mut vals = Vec::new();
        for (a, slot) in args.iter().zip(slots) {
            match (a, slot) {
                (Arg::Block(b), Slot::Block) => vals.push(Resolved::Block(b)),
                (Arg::Name(n), Slot::Block) => return Err(err(n.span, "expected a `{ members: ..., mu_max: ... }` block")),
                (Arg::Block(b), _) => return Err(err(b.span, format!("expected a {} name", slot.name()))),
                (Arg::Name(n), _) => {
                    let v = self.lookup(n, slot.decl_kind())?;
                    match v {
                        Some(v) => vals.push(Resolved::Value(v, n.value.clone())),
                        None => return Ok(None),
                    }
                }
            }
        }
        let n_max = opts.get("nmax").map(|o| o.int("nmax", MIN_NMAX, MAX_NMAX)).transpose()?;

        let seq_at = |i: usize| match &vals[i] {
            Resolved::Value(Value::Seq(s), _) => s.clone(),
            _ => unreachable!("slot types checked above"),
        };
        let name_at = |i: usize| match &vals[i] {
            Resolved::Value(_, n) => n.clone(),
            Resolved::Block(_) => String::new(),
        };
        let scale_at = |i: usize| match &vals[i] {
            Resolved::Value(Value::Scale(s), _) => s.clone(),
            _ => unreachable!("slot types checked above"),
        };

        let idx = |k: &str, lo: u64, default: u32| -> R<u32> {
            opts.get(k).map_or(Ok(default), |o| o.int(k, lo, MAX_INDEX as u64).map(|v| v as u32))
        };
        let seminorm_for = |cx: &mut Self, f: &Seq| -> R<Option<SeminormFamily>> {
            match opts.get("seminorm") {
                Some(o) => cx.seminorm_opt(o),
                None => Ok(Some(default_seminorm(f))),
            }
        };

        let (op, subject) = match kind {
            Classify | EmbedCheck => {
                let f = seq_at(0);
                let Some(p) = seminorm_for(self, &f)? else { return Ok(None) };
                let (mu_max, nu_max) = (idx("mu_max", 1, DEFAULT_MU_MAX)?, idx("nu_max", 0, DEFAULT_NU_MAX)?);
                let r = scale_at(1);
                let subject = format!("{} under {}", name_at(0), name_at(1));
                if kind == Classify {
                    (Op::Classify { f, p, r, mode, mu_max, nu_max }, subject)
                } else {
                    (Op::EmbedCheck { f, p, r, mode, mu_max, nu_max }, subject)
                }
            }
            Distance => {
                let (f, g) = (seq_at(0), seq_at(1));
                let Some(p) = seminorm_for(self, &f.sub(&g).map_err(|e| err(t.kind.span, e.to_string()))?)? else {
                    return Ok(None);
                };
                let (mu, nu) = (idx("mu", 1, 1)?, idx("nu", 0, 0)?);
                let subject = format!("{}, {} under {}", name_at(0), name_at(1), name_at(2));
                (Op::Distance { f, g, p, r: scale_at(2), mu, nu }, subject)
            }
            Equal => {
                let (f, g) = (seq_at(0), seq_at(1));
                let Some(p) = seminorm_for(self, &f.sub(&g).map_err(|e| err(t.kind.span, e.to_string()))?)? else {
                    return Ok(None);
                };
                let (mu_max, nu_max) = (idx("mu_max", 1, DEFAULT_MU_MAX)?, idx("nu_max", 0, DEFAULT_NU_MAX)?);
                let subject = format!("{}, {} under {}", name_at(0), name_at(1), name_at(2));
                (Op::Equal { f, g, p, r: scale_at(2), mode, mu_max, nu_max }, subject)
            }
            Family => {
                let f = seq_at(0);
                let Resolved::Value(Value::Family(fam), _) = &vals[1] else { unreachable!("slot types checked above") };
                let Some(p) = seminorm_for(self, &f)? else { return Ok(None) };
                let (mu, nu) = (idx("mu", 1, 1)?, idx("nu", 0, 0)?);
                let m_budget = opts
                    .get("m_budget")
                    .map_or(Ok(DEFAULT_M_BUDGET), |o| o.int("m_budget", 1, MAX_M as u64).map(|v| v as u32))?;
                let ideal = match opts.get("ideal") {
                    None => None,
                    Some(o) => {
                        let n = o.name("ideal")?;
                        match self.lookup(n, DeclKind::Seq)? {
                            Some(Value::Seq(s)) => Some(s),
                            _ => return Ok(None),
                        }
                    }
                };
                let subject = match opts.get("ideal") {
                    Some(o) => format!("{} in {}, ideal with {}", name_at(0), name_at(1), o.name("ideal")?.value),
                    None => format!("{} in {}", name_at(0), name_at(1)),
                };
                (Op::Family { f, fam: fam.clone(), p, mu, nu, m_budget, ideal }, subject)
            }
            Cauchy => {
                let Resolved::Block(b) = &vals[0] else { unreachable!("slot types checked above") };
                let mu_max = int(&b.mu_max, "mu_max", 1, MAX_INDEX as u64)? as u32;
                let (members, label) = match &b.members {
                    Members::Geometric(m) => {
                        let m = int(m, "geometric family size", 3, MAX_M as u64)?;
                        let ms = gfa_core::complete::geometric_family(m as usize).map_err(|e| err(b.span, e.to_string()))?;
                        (ms, format!("geometric({m})"))
                    }
                    Members::List(names) => {
                        if names.len() < 3 {
                            return Err(err(b.span, "a Cauchy family needs at least 3 members"));
                        }
                        let mut ms = Vec::new();
                        for n in names {
                            match self.lookup(n, DeclKind::Seq)? {
                                Some(Value::Seq(s)) => ms.push(s),
                                _ => return Ok(None),
                            }
                        }
                        let v: Vec<&str> = names.iter().map(|n| n.value.as_str()).collect();
                        (ms, v.join(" "))
                    }
                };
                let Some(p) = seminorm_for(self, &members[0])? else { return Ok(None) };
                let nu_max = idx("nu_max", 0, mu_max)?;
                let subject = format!("{label} under {}", name_at(1));
                (Op::Cauchy { members, p, r: scale_at(1), mode, mu_max, nu_max }, subject)
            }
            VerifyProperties => {
                let suites = match opts.get("suite") {
                    None => Suite::ALL.to_vec(),
                    Some(o) => {
                        let n = o.name("suite")?;
                        if n.value == "all" {
                            Suite::ALL.to_vec()
                        } else {
                            let s: Suite = n.value.parse().map_err(|_| {
                                let names = Suite::ALL.iter().map(|s| s.name()).chain(["all"]);
                                err(n.span, format!("unknown property suite `{}`", n.value))
                                    .with_suggestion(suggest(&n.value, names))
                            })?;
                            vec![s]
                        }
                    }
                };
                let instances = opts.get("instances").map(|o| o.int("instances", 1, MAX_INSTANCES)).transpose()?;
                let seed = opts.get("seed").map(|o| o.int("seed", 0, u64::MAX)).transpose()?;
                let subject = match opts.get("suite") {
                    Some(o) => o.name("suite")?.value.clone(),
                    None => "all".into(),
                };
                (Op::Props { suites, instances: instances.map(|v| v as usize), seed }, subject)
            }
        };
        Ok(Some(Job { index, kind, subject, op, n_max }))
    }

    fn options<'t>(&self, t: &'t Task, keys: &[&str]) -> R<HashMap<&'t str, &'t OptValue>> {
        let mut out: HashMap<&str, &OptValue> = HashMap::new();
        for o in &t.options {
            let k = o.key.value.as_str();
            if !keys.contains(&k) {
                return Err(err(o.key.span, format!("unknown option `{k}` for `{}`", t.kind.value))
                    .with_suggestion(suggest(k, keys.iter().copied())));
            }
            if out.insert(k, &o.value).is_some() {
                return Err(err(o.key.span, format!("option `{k}` given twice")));
            }
        }
        Ok(out)
    }

    fn seminorm_opt(&mut self, o: &OptValue) -> R<Option<SeminormFamily>> {
        let n = o.name("seminorm")?;
        match n.value.as_str() {
            "abs" if !self.env.contains_key("abs") => Ok(Some(SeminormFamily::AbsoluteValue)),
            "sup" if !self.env.contains_key("sup") => Ok(Some(SeminormFamily::sup())),
            _ => Ok(match self.lookup(n, DeclKind::Seminorm)? {
                Some(Value::Seminorm(p)) => Some(p),
                _ => None,
            }),
        }
    }
}

enum Resolved<'a> {
    Value(Value, String),
    Block(&'a CauchyBlock),
}

#[derive(Clone, Copy)]
enum Slot {
    Seq,
    Scale,
    Family,
    Block,
}

impl Slot {
    fn name(self) -> &'static str {
        match self {
            Slot::Seq => "sequence",
            Slot::Scale => "scale",
            Slot::Family => "family",
            Slot::Block => "members-block",
        }
    }

    fn decl_kind(self) -> DeclKind {
        match self {
            Slot::Seq => DeclKind::Seq,
            Slot::Scale => DeclKind::Scale,
            Slot::Family => DeclKind::Family,
            Slot::Block => unreachable!("blocks are not declared"),
        }
    }
}

trait OptExt {
    fn int(&self, what: &str, lo: u64, hi: u64) -> R<u64>;
    fn name(&self, what: &str) -> R<&Name>;
}

impl OptExt for OptValue {
    fn int(&self, what: &str, lo: u64, hi: u64) -> R<u64> {
        match self {
            OptValue::Num(n) => int(n, what, lo, hi),
            OptValue::Name(n) => Err(err(n.span, format!("`{what}` takes a number"))),
        }
    }

    fn name(&self, what: &str) -> R<&Name> {
        match self {
            OptValue::Name(n) => Ok(n),
            OptValue::Num(n) => Err(err(n.span, format!("`{what}` takes a name"))),
        }
    }
}

/// Absolute value for scalar sequences, the sup-of-derivatives family otherwise.
pub fn default_seminorm(f: &Seq) -> SeminormFamily {
    match f.element(f.domain_start()) {
        Ok(e) if e.is_scalar() => SeminormFamily::AbsoluteValue,
        _ => SeminormFamily::sup(),
    }
}

fn certificate(c: &Cert) -> R<Growth> {
    let a: Vec<f64> = c.args.iter().map(|n| n.value).collect();
    let g = match a[..] {
        [k, p] => Growth::new(k, p, 0.0, 0.0, 0.0),
        [k, p, b] => Growth::new(k, p, b, 0.0, 0.0),
        [k, p, b, s, t] => Growth::new(k, p, b, s, t),
        _ => return Err(err(c.span, "certify takes (C, a), (C, a, b) or (C, a, b, s, t)")),
    };
    g.map_err(|e| err(c.span, e.to_string()))
}

fn mollifier(m: &Name) -> R<Mollifier> {
    match m.value.as_str() {
        "gaussian" => Ok(Mollifier::gaussian()),
        "bump" => Ok(Mollifier::bump()),
        other => Err(err(m.span, format!("unknown mollifier `{other}`")).with_suggestion(suggest(other, ["gaussian", "bump"]))),
    }
}

fn seminorm(s: &SeminormRef) -> R<SeminormFamily> {
    match s {
        SeminormRef::Abs => Ok(SeminormFamily::AbsoluteValue),
        SeminormRef::Sup { grid: None } => Ok(SeminormFamily::sup()),
        SeminormRef::Sup { grid: Some(g) } => Ok(SeminormFamily::sup().with_grid(int(g, "grid density", 8, MAX_GRID)? as u32)),
        SeminormRef::Sobolev { order, lo, hi } => {
            let o = int(order, "Sobolev order", 0, MAX_INDEX as u64)? as u32;
            SeminormFamily::sobolev(o, lo.value, hi.value).map_err(|e| err(lo.span, e.to_string()))
        }
    }
}
