//! Expression trees for smooth functions of one real variable `x`,
//! optionally parameterized by the sequence index `n` (and, for asymptotic
//! scale families, the family index `m`).
//!
//! Syntax: numbers, `x`, `n`, `m`, `pi`, `e`, `+ - * / ^`, parentheses and the
//! functions `exp`, `log` (natural), `sin`, `cos`, `sqrt`, `bump`, `ind`.
//! `bump(u)` is `(1-u^2)^4` on `|u| < 1` and zero elsewhere; `ind(u)` is the
//! indicator of `|u| < 1` and only appears in derivatives of `bump`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    N,
    M,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::N => "n",
            Var::M => "m",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
    Bump,
    Ind,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Bump => "bump",
            Func::Ind => "ind",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" | "ln" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            "bump" => Func::Bump,
            "ind" => Func::Ind,
            _ => return None,
        })
    }
}

/// Expression tree. Powers with a constant exponent are kept apart from
/// general powers `a^b`, which are evaluated as `exp(b ln a)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
    PowExpr(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Variable bindings for evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vars {
    pub x: Option<f64>,
    pub n: Option<f64>,
    pub m: Option<f64>,
}

impl Vars {
    pub fn x(x: f64) -> Self {
        Vars { x: Some(x), ..Vars::default() }
    }

    pub fn n(n: f64) -> Self {
        Vars { n: Some(n), ..Vars::default() }
    }

    pub fn with_n(mut self, n: Option<f64>) -> Self {
        self.n = n;
        self
    }

    pub fn with_m(mut self, m: f64) -> Self {
        self.m = Some(m);
        self
    }

    pub(crate) fn get(&self, v: Var) -> Result<f64> {
        let value = match v {
            Var::X => self.x,
            Var::N => self.n,
            Var::M => self.m,
        };
        value.ok_or_else(|| Error::Evaluation(format!("unbound variable `{}`", v.name())))
    }
}

impl Expr {
    pub fn parse(source: &str) -> Result<Expr> {
        let mut parser = Parser { src: source.as_bytes(), pos: 0 };
        let expr = parser.expr()?;
        parser.skip_ws();
        if parser.pos < parser.src.len() {
            return Err(parser.error("unexpected trailing input", 1));
        }
        Ok(expr)
    }

    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn x() -> Expr {
        Expr::Var(Var::X)
    }

    pub fn n() -> Expr {
        Expr::Var(Var::N)
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    pub fn powi(self, k: f64) -> Expr {
        Expr::Pow(Box::new(self), k)
    }

    pub fn mentions(&self, v: Var) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(w) => *w == v,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.mentions(v),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::PowExpr(a, b) => a.mentions(v) || b.mentions(v),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => 1 + a.size(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::PowExpr(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Replaces every occurrence of `v` by `with`.
    pub fn substitute(&self, v: Var, with: &Expr) -> Expr {
        let sub = |e: &Expr| Box::new(e.substitute(v, with));
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(w) if *w == v => with.clone(),
            Expr::Var(w) => Expr::Var(*w),
            Expr::Neg(a) => Expr::Neg(sub(a)),
            Expr::Add(a, b) => Expr::Add(sub(a), sub(b)),
            Expr::Sub(a, b) => Expr::Sub(sub(a), sub(b)),
            Expr::Mul(a, b) => Expr::Mul(sub(a), sub(b)),
            Expr::Div(a, b) => Expr::Div(sub(a), sub(b)),
            Expr::Pow(a, k) => Expr::Pow(sub(a), *k),
            Expr::PowExpr(a, b) => Expr::PowExpr(sub(a), sub(b)),
            Expr::Call(f, a) => Expr::Call(*f, sub(a)),
        }
    }

    pub fn bind(&self, v: Var, value: f64) -> Expr {
        self.substitute(v, &Expr::Const(value))
    }

    /// Evaluates in double precision. Domain guards (`/`, `log`, fractional
    /// powers) raise evaluation errors instead of producing NaN.
    pub fn eval(&self, vars: &Vars) -> Result<f64> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(v) => vars.get(*v)?,
            Expr::Neg(a) => -a.eval(vars)?,
            Expr::Add(a, b) => a.eval(vars)? + b.eval(vars)?,
            Expr::Sub(a, b) => a.eval(vars)? - b.eval(vars)?,
            Expr::Mul(a, b) => a.eval(vars)? * b.eval(vars)?,
            Expr::Div(a, b) => {
                let d = b.eval(vars)?;
                if d == 0.0 {
                    return Err(Error::Evaluation(format!("division by zero in `{self}`")));
                }
                a.eval(vars)? / d
            }
            Expr::Pow(a, k) => pow_real(a.eval(vars)?, *k)?,
            Expr::PowExpr(a, b) => {
                let base = a.eval(vars)?;
                if base <= 0.0 {
                    return Err(Error::Evaluation(format!(
                        "non-positive base {base} in general power `{self}`"
                    )));
                }
                (b.eval(vars)? * base.ln()).exp()
            }
            Expr::Call(f, a) => apply(*f, a.eval(vars)?)?,
        })
    }

    /// Symbolic derivative with respect to `v`, with light constant folding.
    pub fn derivative(&self, v: Var) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var(w) => Expr::Const(if *w == v { 1.0 } else { 0.0 }),
            Expr::Neg(a) => neg(a.derivative(v)),
            Expr::Add(a, b) => add(a.derivative(v), b.derivative(v)),
            Expr::Sub(a, b) => sub(a.derivative(v), b.derivative(v)),
            Expr::Mul(a, b) => add(
                mul(a.derivative(v), (**b).clone()),
                mul((**a).clone(), b.derivative(v)),
            ),
            Expr::Div(a, b) => div(
                sub(
                    mul(a.derivative(v), (**b).clone()),
                    mul((**a).clone(), b.derivative(v)),
                ),
                pow((**b).clone(), 2.0),
            ),
            Expr::Pow(a, k) => mul(
                mul(Expr::Const(*k), pow((**a).clone(), k - 1.0)),
                a.derivative(v),
            ),
            Expr::PowExpr(a, b) => mul(
                self.clone(),
                add(
                    mul(b.derivative(v), Expr::call(Func::Log, (**a).clone())),
                    div(mul((**b).clone(), a.derivative(v)), (**a).clone()),
                ),
            ),
            Expr::Call(f, a) => {
                let u = (**a).clone();
                let outer = match f {
                    Func::Exp => self.clone(),
                    Func::Log => div(Expr::Const(1.0), u),
                    Func::Sin => Expr::call(Func::Cos, u),
                    Func::Cos => neg(Expr::call(Func::Sin, u)),
                    Func::Sqrt => div(Expr::Const(0.5), self.clone()),
                    // d/du (1-u^2)^4 = -8u(1-u^2)^3 inside the support
                    Func::Bump => mul(
                        mul(
                            mul(Expr::Const(-8.0), u.clone()),
                            pow(sub(Expr::Const(1.0), pow(u.clone(), 2.0)), 3.0),
                        ),
                        Expr::call(Func::Ind, u),
                    ),
                    Func::Ind => Expr::Const(0.0),
                };
                mul(outer, a.derivative(v))
            }
        }
    }
}

pub(crate) fn pow_real(base: f64, k: f64) -> Result<f64> {
    if k.fract() == 0.0 && k.abs() < i32::MAX as f64 {
        if base == 0.0 && k < 0.0 {
            return Err(Error::Evaluation("zero raised to a negative power".into()));
        }
        return Ok(base.powi(k as i32));
    }
    if base < 0.0 || (base == 0.0 && k < 0.0) {
        return Err(Error::Evaluation(format!("{base} raised to fractional power {k}")));
    }
    Ok(base.powf(k))
}

pub(crate) fn apply(f: Func, u: f64) -> Result<f64> {
    Ok(match f {
        Func::Exp => u.exp(),
        Func::Log => {
            if u <= 0.0 {
                return Err(Error::Evaluation(format!("log of non-positive value {u}")));
            }
            u.ln()
        }
        Func::Sin => u.sin(),
        Func::Cos => u.cos(),
        Func::Sqrt => {
            if u < 0.0 {
                return Err(Error::Evaluation(format!("sqrt of negative value {u}")));
            }
            u.sqrt()
        }
        Func::Bump => {
            if u.abs() < 1.0 {
                (1.0 - u * u).powi(4)
            } else {
                0.0
            }
        }
        Func::Ind => {
            if u.abs() < 1.0 {
                1.0
            } else {
                0.0
            }
        }
    })
}

fn is_const(e: &Expr, c: f64) -> bool {
    matches!(e, Expr::Const(v) if *v == c)
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        _ if is_const(&a, 0.0) => b,
        _ if is_const(&b, 0.0) => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        _ if is_const(&b, 0.0) => a,
        _ if is_const(&a, 0.0) => neg(b),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
        _ if is_const(&a, 0.0) || is_const(&b, 0.0) => Expr::Const(0.0),
        _ if is_const(&a, 1.0) => b,
        _ if is_const(&b, 1.0) => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_const(&a, 0.0) {
        return Expr::Const(0.0);
    }
    if is_const(&b, 1.0) {
        return a;
    }
    Expr::Div(Box::new(a), Box::new(b))
}

fn pow(a: Expr, k: f64) -> Expr {
    if k == 0.0 {
        Expr::Const(1.0)
    } else if k == 1.0 {
        a
    } else {
        Expr::Pow(Box::new(a), k)
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

// Binding strengths used by the printer; they mirror the parser.
const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

fn write_const(f: &mut fmt::Formatter<'_>, c: f64, parent: u8) -> fmt::Result {
    if c < 0.0 || (c == 0.0 && c.is_sign_negative()) {
        if parent > PREC_ADD {
            write!(f, "({c})")
        } else {
            write!(f, "{c}")
        }
    } else {
        write!(f, "{c}")
    }
}

impl Expr {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
        let own = match self {
            Expr::Add(..) | Expr::Sub(..) => PREC_ADD,
            Expr::Mul(..) | Expr::Div(..) => PREC_MUL,
            Expr::Neg(..) => PREC_NEG,
            Expr::Pow(..) | Expr::PowExpr(..) => PREC_POW,
            Expr::Const(_) | Expr::Var(_) | Expr::Call(..) => PREC_ATOM,
        };
        let paren = own < parent;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expr::Const(c) => write_const(f, *c, if paren { PREC_ADD } else { parent })?,
            Expr::Var(v) => f.write_str(v.name())?,
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.fmt_prec(f, PREC_NEG)?;
            }
            Expr::Add(a, b) => {
                a.fmt_prec(f, PREC_ADD)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, PREC_ADD + 1)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, PREC_ADD)?;
                f.write_str(" - ")?;
                b.fmt_prec(f, PREC_ADD + 1)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, PREC_MUL)?;
                f.write_str("*")?;
                b.fmt_prec(f, PREC_MUL + 1)?;
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, PREC_MUL)?;
                f.write_str("/")?;
                b.fmt_prec(f, PREC_MUL + 1)?;
            }
            Expr::Pow(a, k) => {
                a.fmt_prec(f, PREC_POW + 1)?;
                f.write_str("^")?;
                write_const(f, *k, PREC_POW)?;
            }
            Expr::PowExpr(a, b) => {
                a.fmt_prec(f, PREC_POW + 1)?;
                f.write_str("^")?;
                b.fmt_prec(f, PREC_POW)?;
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.fmt_prec(f, 0)?;
                f.write_str(")")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

// Recursive descent:
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | '+' unary | power
//   power  := atom ('^' unary)?
//   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str, len: usize) -> Error {
        Error::Parse { offset: self.pos, len: len.max(1), message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(match self.unary()? {
                Expr::Const(c) => Expr::Const(-c),
                other => Expr::Neg(Box::new(other)),
            });
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exponent = self.unary()?;
            return Ok(match exponent {
                Expr::Const(k) => Expr::Pow(Box::new(base), k),
                other => Expr::PowExpr(Box::new(base), Box::new(other)),
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of expression", 1)),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`", 1));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                match ident {
                    "x" => Ok(Expr::Var(Var::X)),
                    "n" => Ok(Expr::Var(Var::N)),
                    "m" => Ok(Expr::Var(Var::M)),
                    "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                    "e" => Ok(Expr::Const(std::f64::consts::E)),
                    _ => {
                        let Some(func) = Func::from_name(ident) else {
                            return Err(Error::Parse {
                                offset: start,
                                len: ident.len(),
                                message: format!("unknown identifier `{ident}`"),
                            });
                        };
                        if !self.eat(b'(') {
                            return Err(self.error(&format!("expected `(` after `{ident}`"), 1));
                        }
                        let arg = self.expr()?;
                        if !self.eat(b')') {
                            return Err(self.error("expected `)`", 1));
                        }
                        Ok(Expr::Call(func, Box::new(arg)))
                    }
                }
            }
            Some(c) => Err(self.error(&format!("unexpected character `{}`", c as char), 1)),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let bytes = self.src;
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut probe = end + 1;
            if probe < bytes.len() && (bytes[probe] == b'+' || bytes[probe] == b'-') {
                probe += 1;
            }
            if probe < bytes.len() && bytes[probe].is_ascii_digit() {
                end = probe;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
            }
        }
        let text = std::str::from_utf8(&bytes[start..end]).unwrap_or("");
        let value: f64 = text.parse().map_err(|_| Error::Parse {
            offset: start,
            len: end - start,
            message: format!("malformed number `{text}`"),
        })?;
        self.pos = end;
        Ok(Expr::Const(value))
    }
}

/// A real number stored as sign and log-magnitude, so that sequences like
/// `exp(n)` can be evaluated at large `n` without overflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogReal {
    /// -1, 0 or 1.
    pub sign: i8,
    /// `ln |value|`; `-inf` when `sign == 0`.
    pub ln_abs: f64,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal { sign: 0, ln_abs: f64::NEG_INFINITY };

    pub fn from_f64(v: f64) -> LogReal {
        if v == 0.0 {
            LogReal::ZERO
        } else {
            LogReal { sign: if v > 0.0 { 1 } else { -1 }, ln_abs: v.abs().ln() }
        }
    }

    pub fn to_f64(self) -> f64 {
        self.sign as f64 * self.ln_abs.exp()
    }

    fn neg(self) -> LogReal {
        LogReal { sign: -self.sign, ..self }
    }

    fn add(self, other: LogReal) -> LogReal {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        let (big, small) = if self.ln_abs >= other.ln_abs { (self, other) } else { (other, self) };
        if big.ln_abs.is_infinite() {
            return big;
        }
        let ratio = (small.ln_abs - big.ln_abs).exp();
        let scaled = if big.sign == small.sign { 1.0 + ratio } else { 1.0 - ratio };
        if scaled == 0.0 {
            return LogReal::ZERO;
        }
        LogReal { sign: big.sign, ln_abs: big.ln_abs + scaled.ln() }
    }

    fn mul(self, other: LogReal) -> LogReal {
        if self.sign == 0 || other.sign == 0 {
            return LogReal::ZERO;
        }
        LogReal { sign: self.sign * other.sign, ln_abs: self.ln_abs + other.ln_abs }
    }
}

impl Expr {
    /// Evaluates `ln |f|` together with the sign of `f`, without overflow in
    /// the magnitude. Intended for scalar sequence expressions in `n`.
    pub fn eval_log(&self, vars: &Vars) -> Result<LogReal> {
        Ok(match self {
            Expr::Const(c) => LogReal::from_f64(*c),
            Expr::Var(v) => LogReal::from_f64(vars.get(*v)?),
            Expr::Neg(a) => a.eval_log(vars)?.neg(),
            Expr::Add(a, b) => a.eval_log(vars)?.add(b.eval_log(vars)?),
            Expr::Sub(a, b) => a.eval_log(vars)?.add(b.eval_log(vars)?.neg()),
            Expr::Mul(a, b) => a.eval_log(vars)?.mul(b.eval_log(vars)?),
            Expr::Div(a, b) => {
                let d = b.eval_log(vars)?;
                if d.sign == 0 {
                    return Err(Error::Evaluation(format!("division by zero in `{self}`")));
                }
                a.eval_log(vars)?.mul(LogReal { sign: d.sign, ln_abs: -d.ln_abs })
            }
            Expr::Pow(a, k) => {
                let base = a.eval_log(vars)?;
                log_pow(base, *k)?
            }
            Expr::PowExpr(a, b) => {
                let base = a.eval_log(vars)?;
                if base.sign <= 0 {
                    return Err(Error::Evaluation(format!(
                        "non-positive base in general power `{self}`"
                    )));
                }
                let exponent = b.eval(vars)?;
                LogReal { sign: 1, ln_abs: exponent * base.ln_abs }
            }
            Expr::Call(Func::Exp, a) => {
                let arg = a.eval_log(vars)?.to_f64();
                if arg == f64::NEG_INFINITY {
                    LogReal::ZERO
                } else {
                    LogReal { sign: 1, ln_abs: arg }
                }
            }
            Expr::Call(Func::Log, a) => {
                let arg = a.eval_log(vars)?;
                if arg.sign <= 0 {
                    return Err(Error::Evaluation(format!("log of non-positive value in `{self}`")));
                }
                LogReal::from_f64(arg.ln_abs)
            }
            Expr::Call(Func::Sqrt, a) => log_pow(a.eval_log(vars)?, 0.5)?,
            Expr::Call(f, a) => LogReal::from_f64(apply(*f, a.eval_log(vars)?.to_f64())?),
        })
    }
}

fn log_pow(base: LogReal, k: f64) -> Result<LogReal> {
    if base.sign == 0 {
        if k > 0.0 {
            return Ok(LogReal::ZERO);
        }
        return Err(Error::Evaluation("zero raised to a non-positive power".into()));
    }
    let sign = if base.sign > 0 {
        1
    } else if k.fract() == 0.0 {
        if (k as i64) % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        return Err(Error::Evaluation(format!("negative base raised to fractional power {k}")));
    };
    Ok(LogReal { sign, ln_abs: k * base.ln_abs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_dsl_example() {
        let e = Expr::parse("n*exp(-(n*x)^2)/sqrt(pi)").unwrap();
        assert!(e.mentions(Var::N) && e.mentions(Var::X));
        let v = e.eval(&Vars::x(0.0).with_n(Some(5.0))).unwrap();
        assert!((v - 5.0 / std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn power_binds_tighter_than_unary_minus() {
        let e = Expr::parse("-x^2").unwrap();
        assert_eq!(e.eval(&Vars::x(3.0)).unwrap(), -9.0);
        let e = Expr::parse("2^-1").unwrap();
        assert_eq!(e.eval(&Vars::default()).unwrap(), 0.5);
    }

    #[test]
    fn printer_round_trips() {
        for src in [
            "n*exp(-(n*x)^2)/sqrt(pi)",
            "1/log(log(n))",
            "(-2)^x",
            "x - -2",
            "n^(-m)",
            "bump(2*x) + ind(x)",
        ] {
            let e = Expr::parse(src).unwrap();
            let again = Expr::parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{src} printed as {e}");
        }
    }

    #[test]
    fn reports_error_span() {
        match Expr::parse("x + foo(2)") {
            Err(Error::Parse { offset, len, .. }) => assert_eq!((offset, len), (4, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Expr::parse("(x").is_err());
        assert!(Expr::parse("x y").is_err());
    }

    #[test]
    fn domain_guards() {
        assert!(Expr::parse("1/x").unwrap().eval(&Vars::x(0.0)).is_err());
        assert!(Expr::parse("log(x)").unwrap().eval(&Vars::x(-1.0)).is_err());
        assert!(Expr::parse("x^0.5").unwrap().eval(&Vars::x(-1.0)).is_err());
    }

    #[test]
    fn log_domain_evaluation_avoids_overflow() {
        let e = Expr::parse("n^2*exp(n)").unwrap();
        let v = e.eval_log(&Vars::n(1e6)).unwrap();
        assert_eq!(v.sign, 1);
        assert!((v.ln_abs - (1e6 + 2.0 * 1e6f64.ln())).abs() < 1e-6);
        let cancel = Expr::parse("n - n").unwrap().eval_log(&Vars::n(7.0)).unwrap();
        assert_eq!(cancel.sign, 0);
    }

    #[test]
    fn symbolic_derivative_of_bump_vanishes_outside_support() {
        let d = Expr::parse("bump(x)").unwrap().derivative(Var::X);
        assert_eq!(d.eval(&Vars::x(1.5)).unwrap(), 0.0);
        let v = d.eval(&Vars::x(0.5)).unwrap();
        assert!((v - (-8.0 * 0.5 * 0.75f64.powi(3))).abs() < 1e-14);
    }
}
