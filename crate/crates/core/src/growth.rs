//! Closed-form asymptotics of sequences.
//!
//! A [`Growth`] describes `C n^a (ln n)^b exp(sum s_i n^{t_i} + sum s_j (ln n)^{q_j})`.
//! [`ExpPoly`] is a finite sum of such terms with complex coefficients, kept in
//! a normal form (like terms merged, zero terms dropped, sorted by dominance).
//! With small-integer coefficients and dyadic exponents every ring operation is
//! exact, so identities such as `f(g+h) - (fg + fh) = 0` hold bit for bit.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::{Expr, Func, Var, Vars};

/// Divergent functions of `n` out of which logarithms of growth forms are built.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Atom {
    /// `n^t`, `t > 0`.
    Pow(f64),
    /// `(ln n)^q`, `q > 0`.
    LogPow(f64),
    /// `ln ln n`.
    LogLog,
}

impl Atom {
    fn rank(self) -> (u8, f64) {
        match self {
            Atom::LogLog => (0, 0.0),
            Atom::LogPow(q) => (1, q),
            Atom::Pow(t) => (2, t),
        }
    }

    /// Orders atoms by speed of divergence.
    pub fn cmp_growth(&self, other: &Atom) -> Ordering {
        let (c1, k1) = self.rank();
        let (c2, k2) = other.rank();
        c1.cmp(&c2).then(k1.total_cmp(&k2))
    }

    /// Like [`Atom::cmp_growth`] but treats exponents within `tol` as equal.
    pub fn cmp_growth_tol(&self, other: &Atom, tol: f64) -> Ordering {
        let (c1, k1) = self.rank();
        let (c2, k2) = other.rank();
        match c1.cmp(&c2) {
            Ordering::Equal if (k1 - k2).abs() <= tol => Ordering::Equal,
            Ordering::Equal => k1.total_cmp(&k2),
            o => o,
        }
    }

    pub fn eval(&self, n: f64) -> f64 {
        match *self {
            Atom::Pow(t) => n.powf(t),
            Atom::LogPow(q) => n.ln().powf(q),
            Atom::LogLog => n.ln().ln(),
        }
    }
}

/// The `n`-dependent part of a growth term.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Shape {
    /// Exponent of `n`.
    pub a: f64,
    /// Exponent of `ln n`.
    pub b: f64,
    /// `(t, s)` pairs of `exp(s n^t)`, `t > 0`, sorted by decreasing `t`.
    pub exp_pow: Vec<(f64, f64)>,
    /// `(q, s)` pairs of `exp(s (ln n)^q)`, `q > 0`, `q != 1`, sorted by decreasing `q`.
    pub exp_log: Vec<(f64, f64)>,
}

fn merge_atoms(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = a.to_vec();
    for &(k, s) in b {
        match out.iter_mut().find(|(k2, _)| close(*k2, k)) {
            Some(slot) => slot.1 += s,
            None => out.push((k, s)),
        }
    }
    out.retain(|&(_, s)| !close(s, 0.0));
    out.sort_by(|x, y| y.0.total_cmp(&x.0));
    out
}

/// Rounding slack, in ulps, for merging and cancelling terms.
const CANCEL_ULPS: f64 = 16.0;

/// Exponents are short sums of moderate numbers, so their rounding error is
/// measured against at least 1 rather than against a cancelled result.
fn close(x: f64, y: f64) -> bool {
    x == y || (x - y).abs() <= CANCEL_ULPS * f64::EPSILON * x.abs().max(y.abs()).max(1.0)
}

fn close_atoms(a: &[(f64, f64)], b: &[(f64, f64)]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| close(x.0, y.0) && close(x.1, y.1))
}

impl Shape {
    /// Equality up to rounding in every exponent and coefficient.
    pub fn approx_eq(&self, o: &Shape) -> bool {
        close(self.a, o.a) && close(self.b, o.b) && close_atoms(&self.exp_pow, &o.exp_pow) && close_atoms(&self.exp_log, &o.exp_log)
    }

    pub fn power(a: f64) -> Shape {
        Shape { a, ..Shape::default() }
    }

    pub fn is_constant(&self) -> bool {
        self.a == 0.0 && self.b == 0.0 && self.exp_pow.is_empty() && self.exp_log.is_empty()
    }

    pub fn mul(&self, o: &Shape) -> Shape {
        let snap = |v: f64| if close(v, 0.0) { 0.0 } else { v };
        Shape {
            a: snap(self.a + o.a),
            b: snap(self.b + o.b),
            exp_pow: merge_atoms(&self.exp_pow, &o.exp_pow),
            exp_log: merge_atoms(&self.exp_log, &o.exp_log),
        }
    }

    pub fn pow(&self, k: f64) -> Shape {
        let scale = |v: &[(f64, f64)]| -> Vec<(f64, f64)> {
            v.iter().map(|&(t, s)| (t, s * k)).filter(|&(_, s)| s != 0.0).collect()
        };
        Shape {
            a: self.a * k,
            b: self.b * k,
            exp_pow: scale(&self.exp_pow),
            exp_log: scale(&self.exp_log),
        }
    }

    /// `ln` of the shape at `n` (without the coefficient).
    pub fn ln_at(&self, n: f64) -> f64 {
        let ln_n = n.ln();
        let mut v = self.a * ln_n;
        if self.b != 0.0 {
            v += self.b * ln_n.ln();
        }
        for &(t, s) in &self.exp_pow {
            v += s * n.powf(t);
        }
        for &(q, s) in &self.exp_log {
            v += s * ln_n.powf(q);
        }
        v
    }

    /// Coefficients of `ln shape(n)` on the asymptotic atoms, most dominant first.
    pub fn log_atoms(&self) -> Vec<(Atom, f64)> {
        let mut v: Vec<(Atom, f64)> = Vec::new();
        for &(t, s) in &self.exp_pow {
            v.push((Atom::Pow(t), s));
        }
        for &(q, s) in &self.exp_log {
            v.push((Atom::LogPow(q), s));
        }
        if self.a != 0.0 {
            v.push((Atom::LogPow(1.0), self.a));
        }
        if self.b != 0.0 {
            v.push((Atom::LogLog, self.b));
        }
        v.sort_by(|x, y| y.0.cmp_growth(&x.0));
        v
    }

    /// Asymptotic comparison: `Greater` if `self` eventually dominates `other`
    /// (their ratio tends to infinity), `Equal` only for identical shapes.
    pub fn cmp_dominance(&self, other: &Shape) -> Ordering {
        let mut diff = self.log_atoms();
        for (atom, s) in other.log_atoms() {
            match diff.iter_mut().find(|(a, _)| *a == atom) {
                Some(slot) => slot.1 -= s,
                None => diff.push((atom, -s)),
            }
        }
        diff.retain(|d| d.1 != 0.0);
        diff.sort_by(|x, y| y.0.cmp_growth(&x.0));
        match diff.first() {
            None => Ordering::Equal,
            Some(&(_, s)) if s > 0.0 => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }
}

/// `p(f_n) ~ c * shape(n)`, `c > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Growth {
    pub c: f64,
    pub shape: Shape,
}

impl Growth {
    /// The single-exponential form `C n^a (ln n)^b exp(s n^t)`. With `t = 0` the
    /// exponential is a constant and is absorbed into `C`.
    pub fn new(c: f64, a: f64, b: f64, s: f64, t: f64) -> Result<Growth> {
        if !(c > 0.0) || ![a, b, s, t].iter().all(|v| v.is_finite()) || t < 0.0 {
            return Err(Error::Invalid(format!(
                "growth parameters must be finite with C > 0 and t >= 0 (C={c}, a={a}, b={b}, s={s}, t={t})"
            )));
        }
        let mut shape = Shape { a, b, ..Shape::default() };
        let mut c = c;
        if t == 0.0 {
            c *= s.exp();
        } else if s != 0.0 {
            shape.exp_pow.push((t, s));
        }
        Ok(Growth { c, shape })
    }

    pub fn power(c: f64, a: f64) -> Growth {
        Growth { c, shape: Shape::power(a) }
    }

    pub fn ln_at(&self, n: f64) -> f64 {
        self.c.ln() + self.shape.ln_at(n)
    }

    pub fn mul(&self, o: &Growth) -> Growth {
        Growth { c: self.c * o.c, shape: self.shape.mul(&o.shape) }
    }

    pub fn scale(&self, k: f64) -> Growth {
        Growth { c: self.c * k, shape: self.shape.clone() }
    }
}

/// Which seminorm indices a certificate entry covers; `None` is a wildcard.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IndexSel {
    pub mu: Option<u32>,
    pub nu: Option<u32>,
}

impl IndexSel {
    fn matches(&self, mu: u32, nu: u32) -> bool {
        self.mu.map_or(true, |m| m == mu) && self.nu.map_or(true, |v| v == nu)
    }

    fn specificity(&self) -> u8 {
        (self.mu.is_some() as u8) + 2 * (self.nu.is_some() as u8)
    }
}

/// Declared closed-form asymptotics of `p^mu_nu(f_n)`, per seminorm index or uniform.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GrowthCertificate {
    entries: Vec<(IndexSel, Growth)>,
    /// The entry for order `nu + 1` describes the derivative at order `nu`.
    /// True for delta sequences, where the top derivative dominates.
    pub derivative_shift: bool,
}

impl GrowthCertificate {
    pub fn uniform(g: Growth) -> Self {
        GrowthCertificate { entries: vec![(IndexSel::default(), g)], derivative_shift: false }
    }

    /// Marks the certificate as describing a sequence whose derivative at order
    /// `nu` grows like the sequence itself at order `nu + 1`.
    pub fn shifting_under_derivative(mut self) -> Self {
        self.derivative_shift = true;
        self
    }

    pub fn with(mut self, sel: IndexSel, g: Growth) -> Self {
        self.entries.retain(|(s, _)| *s != sel);
        self.entries.push((sel, g));
        self
    }

    pub fn entries(&self) -> &[(IndexSel, Growth)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The most specific entry covering `(mu, nu)`.
    pub fn lookup(&self, mu: u32, nu: u32) -> Option<&Growth> {
        self.entries
            .iter()
            .filter(|(sel, _)| sel.matches(mu, nu))
            .max_by_key(|(sel, _)| sel.specificity())
            .map(|(_, g)| g)
    }
}

#[derive(Clone, Debug)]
pub struct Term {
    pub coef: Complex64,
    pub shape: Shape,
    /// Sum of the magnitudes of the contributions merged into `coef`; the
    /// rounding error in `coef` is relative to this, not to `|coef|`.
    mag: f64,
}

impl Term {
    fn new(coef: Complex64, shape: Shape) -> Self {
        Term { mag: coef.norm(), coef, shape }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.coef == other.coef && self.shape == other.shape
    }
}

/// Exact normal form of a scalar sequence as a sum of growth terms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExpPoly {
    terms: Vec<Term>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn constant(c: Complex64) -> Self {
        ExpPoly::term(c, Shape::default())
    }

    pub fn term(coef: Complex64, shape: Shape) -> Self {
        let mut p = ExpPoly { terms: vec![Term::new(coef, shape)] };
        p.normalize();
        p
    }

    /// `c * n^a`.
    pub fn monomial(c: f64, a: f64) -> Self {
        ExpPoly::term(Complex64::new(c, 0.0), Shape::power(a))
    }

    pub fn from_growth(g: &Growth) -> Self {
        ExpPoly::term(Complex64::new(g.c, 0.0), g.shape.clone())
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merges like terms. Shapes equal up to rounding are alike, and a merged
    /// coefficient within rounding of zero relative to the magnitude of its
    /// contributions cancels, so that reassociated products agree exactly.
    fn normalize(&mut self) {
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.iter_mut().find(|m| m.shape.approx_eq(&t.shape)) {
                Some(m) => {
                    m.coef += t.coef;
                    m.mag += t.mag;
                }
                None => merged.push(t),
            }
        }
        merged.retain(|t| t.coef.norm() > CANCEL_ULPS * f64::EPSILON * t.mag);
        merged.sort_by(|x, y| y.shape.cmp_dominance(&x.shape));
        self.terms = merged;
    }

    pub fn add(&self, o: &ExpPoly) -> ExpPoly {
        let mut p = ExpPoly { terms: self.terms.iter().chain(&o.terms).cloned().collect() };
        p.normalize();
        p
    }

    pub fn neg(&self) -> ExpPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn sub(&self, o: &ExpPoly) -> ExpPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: Complex64) -> ExpPoly {
        let mut p = ExpPoly {
            terms: self.terms.iter().map(|t| Term { coef: t.coef * k, shape: t.shape.clone(), mag: t.mag * k.norm() }).collect(),
        };
        p.normalize();
        p
    }

    pub fn mul(&self, o: &ExpPoly) -> ExpPoly {
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for x in &self.terms {
            for y in &o.terms {
                terms.push(Term { coef: x.coef * y.coef, shape: x.shape.mul(&y.shape), mag: x.mag * y.mag });
            }
        }
        let mut p = ExpPoly { terms };
        p.normalize();
        p
    }

    /// Real power of a single-term polynomial, or a small non-negative integer power.
    pub fn pow(&self, k: f64) -> Option<ExpPoly> {
        if self.terms.len() == 1 {
            let t = &self.terms[0];
            let coef = if k.fract() == 0.0 && k.abs() <= 64.0 {
                t.coef.powi(k as i32)
            } else if t.coef.im == 0.0 && t.coef.re > 0.0 {
                Complex64::new(t.coef.re.powf(k), 0.0)
            } else {
                return None;
            };
            return Some(ExpPoly::term(coef, t.shape.pow(k)));
        }
        if k.fract() != 0.0 || !(0.0..=16.0).contains(&k) {
            return None;
        }
        let mut acc = ExpPoly::constant(Complex64::new(1.0, 0.0));
        for _ in 0..k as usize {
            acc = acc.mul(self);
        }
        Some(acc)
    }

    /// The leading term as a growth certificate; `None` for the zero sequence.
    pub fn dominant(&self) -> Option<Growth> {
        self.terms.first().map(|t| Growth { c: t.coef.norm(), shape: t.shape.clone() })
    }

    /// `ln |f_n|`, computed in the log domain; `-inf` when `f_n = 0`.
    pub fn ln_abs_at(&self, n: f64) -> f64 {
        if self.terms.is_empty() {
            return f64::NEG_INFINITY;
        }
        let logs: Vec<f64> = self.terms.iter().map(|t| t.shape.ln_at(n)).collect();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() {
            return top;
        }
        let sum: Complex64 = self
            .terms
            .iter()
            .zip(&logs)
            .map(|(t, l)| t.coef * (l - top).exp())
            .sum();
        let norm = sum.norm();
        if norm == 0.0 {
            f64::NEG_INFINITY
        } else {
            top + norm.ln()
        }
    }

    /// Value at `n` (may overflow to infinity; prefer [`ExpPoly::ln_abs_at`]).
    pub fn value_at(&self, n: f64) -> Complex64 {
        self.terms.iter().map(|t| t.coef * t.shape.ln_at(n).exp()).sum()
    }

    /// Recognizes expressions in `n` built from constants, powers, `log n` and
    /// exponentials of such terms. Returns `None` for anything else (e.g. `sin(n)`).
    pub fn from_expr(e: &Expr) -> Option<ExpPoly> {
        if e.mentions(Var::X) || e.mentions(Var::M) {
            return None;
        }
        if !e.mentions(Var::N) {
            let v = e.eval(&Vars::default()).ok()?;
            return v.is_finite().then(|| ExpPoly::constant(Complex64::new(v, 0.0)));
        }
        match e {
            Expr::Const(_) => unreachable!("constants do not mention n"),
            Expr::Var(_) => Some(ExpPoly::monomial(1.0, 1.0)),
            Expr::Neg(a) => Some(ExpPoly::from_expr(a)?.neg()),
            Expr::Add(a, b) => Some(ExpPoly::from_expr(a)?.add(&ExpPoly::from_expr(b)?)),
            Expr::Sub(a, b) => Some(ExpPoly::from_expr(a)?.sub(&ExpPoly::from_expr(b)?)),
            Expr::Mul(a, b) => Some(ExpPoly::from_expr(a)?.mul(&ExpPoly::from_expr(b)?)),
            Expr::Div(a, b) => {
                let den = ExpPoly::from_expr(b)?;
                if den.terms.len() != 1 {
                    return None;
                }
                Some(ExpPoly::from_expr(a)?.mul(&den.pow(-1.0)?))
            }
            Expr::Pow(a, k) => ExpPoly::from_expr(a)?.pow(*k),
            Expr::PowExpr(a, k) if !k.mentions(Var::N) => {
                ExpPoly::from_expr(a)?.pow(k.eval(&Vars::default()).ok()?)
            }
            Expr::PowExpr(..) => None,
            Expr::Call(Func::Sqrt, a) => ExpPoly::from_expr(a)?.pow(0.5),
            Expr::Call(Func::Exp, a) => {
                let inner = ExpPoly::from_expr(a)?;
                let mut coef = 1.0f64;
                let mut shape = Shape::default();
                for t in inner.terms() {
                    if t.coef.im != 0.0 || !t.shape.exp_pow.is_empty() || !t.shape.exp_log.is_empty() {
                        return None;
                    }
                    let s = t.coef.re;
                    match (t.shape.a, t.shape.b) {
                        (a, b) if a == 0.0 && b == 0.0 => coef *= s.exp(),
                        (a, b) if a > 0.0 && b == 0.0 => {
                            shape = shape.mul(&Shape { exp_pow: vec![(a, s)], ..Shape::default() })
                        }
                        (a, b) if a == 0.0 && b == 1.0 => shape.a += s,
                        (a, b) if a == 0.0 && b > 0.0 => {
                            shape = shape.mul(&Shape { exp_log: vec![(b, s)], ..Shape::default() })
                        }
                        _ => return None,
                    }
                }
                Some(ExpPoly::term(Complex64::new(coef, 0.0), shape))
            }
            Expr::Call(Func::Log, a) => {
                let inner = ExpPoly::from_expr(a)?;
                if inner.terms.len() != 1 {
                    return None;
                }
                let t = &inner.terms[0];
                if t.coef.im != 0.0 || t.coef.re <= 0.0 || t.shape.b != 0.0 {
                    return None;
                }
                let one = Complex64::new(1.0, 0.0);
                let mut out = ExpPoly::constant(Complex64::new(t.coef.re.ln(), 0.0));
                let log_n = |s: f64, q: f64| {
                    ExpPoly::term(one * s, Shape { b: q, ..Shape::default() })
                };
                out = out.add(&log_n(t.shape.a, 1.0));
                for &(tt, s) in &t.shape.exp_pow {
                    out = out.add(&ExpPoly::monomial(s, tt));
                }
                for &(q, s) in &t.shape.exp_log {
                    out = out.add(&log_n(s, q));
                }
                Some(out)
            }
            Expr::Call(..) => None,
        }
    }

    /// Expression tree in `n` with the same values.
    pub fn to_expr(&self) -> Expr {
        let mut acc: Option<Expr> = None;
        for t in &self.terms {
            if t.coef.im != 0.0 {
                // complex coefficients have no real expression form
                return Expr::Const(f64::NAN);
            }
            let mut e = Expr::Const(t.coef.re);
            if t.shape.a != 0.0 {
                e = e * Expr::n().powi(t.shape.a);
            }
            if t.shape.b != 0.0 {
                e = e * Expr::call(Func::Log, Expr::n()).powi(t.shape.b);
            }
            for &(tt, s) in &t.shape.exp_pow {
                e = e * Expr::call(Func::Exp, Expr::Const(s) * Expr::n().powi(tt));
            }
            for &(q, s) in &t.shape.exp_log {
                e = e * Expr::call(Func::Exp, Expr::Const(s) * Expr::call(Func::Log, Expr::n()).powi(q));
            }
            acc = Some(match acc {
                None => e,
                Some(prev) => prev + e,
            });
        }
        acc.unwrap_or(Expr::Const(0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(src: &str) -> ExpPoly {
        ExpPoly::from_expr(&Expr::parse(src).unwrap()).unwrap()
    }

    #[test]
    fn sum_keeps_dominant_term_first() {
        let p = poly("n + n^2");
        assert_eq!(p.dominant().unwrap(), Growth::power(1.0, 2.0));
        let q = poly("n^2 * n^3");
        assert_eq!(q.dominant().unwrap().shape.a, 5.0);
    }

    #[test]
    fn exact_cancellation() {
        assert!(poly("n^2 - n*n").is_zero());
        let f = poly("3*n^2 + 2*n");
        let g = poly("n^(-1) - 5");
        let h = poly("7*log(n)*n");
        let lhs = f.mul(&g.add(&h));
        let rhs = f.mul(&g).add(&f.mul(&h));
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn recognizes_exponentials() {
        let p = poly("exp(sqrt(n))");
        assert_eq!(p.terms()[0].shape.exp_pow, vec![(0.5, 1.0)]);
        let q = poly("exp(log(n)^2)");
        assert_eq!(q.terms()[0].shape.exp_log, vec![(2.0, 1.0)]);
        let r = poly("exp(3*log(n))");
        assert_eq!(r.terms()[0].shape, Shape::power(3.0));
        assert!(ExpPoly::from_expr(&Expr::parse("sin(n)").unwrap()).is_none());
        assert!(ExpPoly::from_expr(&Expr::parse("n*x").unwrap()).is_none());
    }

    #[test]
    fn dominance_order() {
        let e = |s: &str| poly(s).terms()[0].shape.clone();
        assert_eq!(e("exp(n^0.5)").cmp_dominance(&e("n^100")), Ordering::Greater);
        assert_eq!(e("exp(-n^0.5)").cmp_dominance(&e("n^(-100)")), Ordering::Less);
        assert_eq!(e("n*log(n)").cmp_dominance(&e("n")), Ordering::Greater);
        assert_eq!(e("exp(log(n)^2)").cmp_dominance(&e("n^50")), Ordering::Greater);
        assert_eq!(e("n^2").cmp_dominance(&e("n^2")), Ordering::Equal);
    }

    #[test]
    fn log_domain_value_matches_direct() {
        let p = poly("n^2 - 3*n + exp(-n)");
        for n in [2.0, 10.0, 1000.0] {
            let direct: f64 = n * n - 3.0 * n + (-n as f64).exp();
            assert!((p.ln_abs_at(n) - direct.abs().ln()).abs() < 1e-12);
        }
        let big = poly("exp(n)");
        assert_eq!(big.ln_abs_at(1e6), 1e6);
    }

    #[test]
    fn certificate_lookup_prefers_specific_entries() {
        let c = GrowthCertificate::uniform(Growth::power(1.0, 1.0))
            .with(IndexSel { mu: None, nu: Some(1) }, Growth::power(1.0, 2.0))
            .with(IndexSel { mu: Some(2), nu: Some(1) }, Growth::power(1.0, 3.0));
        assert_eq!(c.lookup(1, 0).unwrap().shape.a, 1.0);
        assert_eq!(c.lookup(1, 1).unwrap().shape.a, 2.0);
        assert_eq!(c.lookup(2, 1).unwrap().shape.a, 3.0);
    }

    #[test]
    fn growth_absorbs_constant_exponential() {
        let g = Growth::new(2.0, 1.0, 0.0, 1.0, 0.0).unwrap();
        assert!(g.shape.exp_pow.is_empty());
        assert!((g.c - 2.0 * 1f64.exp()).abs() < 1e-15);
        assert!(Growth::new(0.0, 1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn reassociated_products_cancel() {
        let a = poly("0.5832377877386405*n^4*log(n)^2 - 0.7156134131742806*exp(-0.24950708928047252*log(n)^0.5)/log(n)^2");
        let b = poly("6.274609462320811*n^3*exp(0.5759094775881844*log(n)^0.5)/log(n) - 0.16128330820552353*exp(6.165965334082064*log(n)^0.5)/(n*log(n))");
        let c = poly("-0.2729400742061343*n^3/log(n) - 8.0779590592142*n^2*log(n)^2*exp(-0.33120405821686016*log(n)^0.5)");
        let d = a.mul(&b).mul(&c).sub(&a.mul(&b.mul(&c)));
        assert!(d.is_zero(), "{d:?}");
        let e = a.mul(&b.add(&c)).sub(&a.mul(&b).add(&a.mul(&c)));
        assert!(e.is_zero(), "{e:?}");
    }
}
