//! Canonical text form: one item per line, single spaces, minimal parentheses.

use std::fmt::{self, Write};

use crate::ast::*;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn names(ns: &[Name]) -> String {
    let v: Vec<&str> = ns.iter().map(|n| n.value.as_str()).collect();
    format!("[{}]", v.join(", "))
}

fn asym(a: &AsymRef) -> String {
    match a {
        AsymRef::Power => "power".into(),
        AsymRef::Exponential => "exponential".into(),
        AsymRef::Expr(l) => quote(&l.text),
    }
}

impl fmt::Display for ScaleRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleRef::Log => f.write_str("log"),
            ScaleRef::Power(m) => write!(f, "power {}", m.value),
            ScaleRef::Egorov(m) => write!(f, "egorov {}", m.value),
            ScaleRef::Asymptotic { family, m } => write!(f, "asymptotic {} {}", asym(family), m.value),
            ScaleRef::Custom { expr, from } => write!(f, "custom {} from {}", quote(&expr.text), from.value),
        }
    }
}

impl fmt::Display for FamilyRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyRef::Power(c) => write!(f, "power {}", c.value),
            FamilyRef::Egorov(c) => write!(f, "egorov {}", c.value),
            FamilyRef::Asymptotic { family, count } => write!(f, "asymptotic {} {}", asym(family), count.value),
            FamilyRef::List(ns) => f.write_str(&names(ns)),
        }
    }
}

impl fmt::Display for SeminormRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeminormRef::Abs => f.write_str("abs"),
            SeminormRef::Sup { grid: None } => f.write_str("sup"),
            SeminormRef::Sup { grid: Some(g) } => write!(f, "sup grid {}", g.value),
            SeminormRef::Sobolev { order, lo, hi } => write!(f, "sobolev {} {} {}", order.value, lo.value, hi.value),
        }
    }
}

fn seq_expr(e: &SeqExpr, out: &mut String) {
    match e {
        SeqExpr::Str(l) => out.push_str(&quote(&l.text)),
        SeqExpr::Num(n) => {
            let _ = write!(out, "{}", n.value);
        }
        SeqExpr::Ref(n) => out.push_str(&n.value),
        SeqExpr::Delta(m) => {
            let _ = write!(out, "delta {}", m.value);
        }
        SeqExpr::Conv { source, mollifier } => {
            let src = match source {
                ConvSrc::Expr(l) => quote(&l.text),
                ConvSrc::Heaviside => "heaviside".into(),
            };
            let _ = write!(out, "conv {src} {}", mollifier.value);
        }
        SeqExpr::Const(l) => {
            let _ = write!(out, "const {}", quote(&l.text));
        }
        SeqExpr::Deriv(a) => {
            out.push_str("deriv ");
            operand(a, 3, out);
        }
        SeqExpr::Neg(a) => {
            out.push('-');
            operand(a, 3, out);
        }
        SeqExpr::Bin { op, lhs, rhs } => {
            let p = op.precedence();
            operand(lhs, p, out);
            let _ = write!(out, " {} ", op.symbol());
            // operators associate to the left, so an equal-precedence right operand keeps its parentheses
            operand(rhs, p + 1, out);
        }
    }
}

fn precedence(e: &SeqExpr) -> u8 {
    match e {
        SeqExpr::Bin { op, .. } => op.precedence(),
        SeqExpr::Deriv(_) | SeqExpr::Neg(_) => 3,
        _ => 4,
    }
}

fn operand(e: &SeqExpr, min: u8, out: &mut String) {
    if precedence(e) < min {
        out.push('(');
        seq_expr(e, out);
        out.push(')');
    } else {
        seq_expr(e, out);
    }
}

impl fmt::Display for SeqExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        seq_expr(self, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} = ", self.body.kind(), self.name.value)?;
        match &self.body {
            DeclBody::Seq { expr, certify } => {
                write!(f, "{expr}")?;
                if let Some(c) = certify {
                    let args: Vec<String> = c.args.iter().map(|a| a.value.to_string()).collect();
                    write!(f, " certify ({})", args.join(", "))?;
                }
            }
            DeclBody::Scale(s) => write!(f, "{s}")?,
            DeclBody::Family(fam) => write!(f, "{fam}")?,
            DeclBody::Mollifier(m) => f.write_str(&m.value)?,
            DeclBody::Seminorm(s) => write!(f, "{s}")?,
        }
        f.write_str(";")
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "task {}", self.kind.value)?;
        for a in &self.args {
            match a {
                Arg::Name(n) => write!(f, " {}", n.value)?,
                Arg::Block(b) => {
                    let members = match &b.members {
                        Members::List(ns) => names(ns),
                        Members::Geometric(m) => format!("geometric({})", m.value),
                    };
                    write!(f, " {{ members: {members}, mu_max: {} }}", b.mu_max.value)?;
                }
            }
        }
        for o in &self.options {
            match &o.value {
                OptValue::Num(n) => write!(f, " {}={}", o.key.value, n.value)?,
                OptValue::Name(n) => write!(f, " {}={}", o.key.value, n.value)?,
            }
        }
        f.write_str(";")
    }
}

impl fmt::Display for ExperimentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            match item {
                Item::Decl(d) => writeln!(f, "{d}")?,
                Item::Task(t) => writeln!(f, "{t}")?,
            }
        }
        Ok(())
    }
}
