//! Sequences over the base algebra and the ultranorm
//! `<<f>>_{p,r} = limsup_n p(f_n)^{r_n}`.
//!
//! Everything is computed in the exponent domain `e_n = r_n ln p(f_n)`, with
//! value `exp(e_inf)`. A limsup cannot be read off finite data, so there are two
//! tiers. When the growth of `p(f_n)` is known in closed form (an exact scalar
//! normal form, a constant, or a declared certificate) and the scale has a
//! known reciprocal asymptotic, the limit is computed analytically. Otherwise
//! `e_n` is sampled on a geometric schedule and fitted by `e_inf + c r_n` on
//! the tail window. The fit is exact for `p(f_n) = C n^a` under the log scale.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basealg::{seminorm_eval, seminorm_profile, Element, SeminormFamily, SmoothFn};
use crate::error::{Error, Result};
use crate::expr::{Expr, Var, Vars};
use crate::growth::{ExpPoly, Growth, GrowthCertificate, IndexSel};
use crate::scale::{geometric_schedule, Scale, ScaleKind};

/// Sampling and index budgets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Budget {
    /// Last sampled index.
    pub n_max: u64,
    /// Points on the geometric schedule.
    pub points: usize,
    /// Points in the tail window used by the fit.
    pub window: usize,
    /// RMS residual (relative to `max(1, |e_inf|)`) accepted as a good fit.
    pub fit_tol: f64,
    pub mu_max: u32,
    pub nu_max: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { n_max: 1_000_000, points: 24, window: 8, fit_tol: 1e-3, mu_max: 4, nu_max: 4 }
    }
}

impl Budget {
    pub fn with_n_max(self, n_max: u64) -> Self {
        Budget { n_max, ..self }
    }

    pub fn with_indices(self, mu_max: u32, nu_max: u32) -> Self {
        Budget { mu_max, nu_max, ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    TailFit,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed-form",
            Method::TailFit => "tail-fit",
        })
    }
}

/// An estimate of `<<f>>_{p,r}` in `[0, inf]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UltranormEstimate {
    pub value: f64,
    /// `e_inf`, with `value = exp(e_inf)`.
    pub exponent: f64,
    pub method: Method,
    /// RMS residual of the tail fit; zero for closed forms.
    pub residual: f64,
    /// False when the tail did not settle; such estimates never decide a verdict.
    pub confident: bool,
}

impl UltranormEstimate {
    fn new(exponent: f64, method: Method, residual: f64, confident: bool) -> Self {
        UltranormEstimate { value: exponent.exp(), exponent, method, residual, confident }
    }

    pub fn closed_form(exponent: f64) -> Self {
        UltranormEstimate::new(exponent, Method::ClosedForm, 0.0, true)
    }

    pub fn is_zero(&self) -> bool {
        self.confident && self.exponent == f64::NEG_INFINITY
    }

    pub fn is_infinite(&self) -> bool {
        self.confident && self.exponent == f64::INFINITY
    }

    pub fn is_finite(&self) -> bool {
        self.confident && self.exponent < f64::INFINITY
    }

    /// Confidently bounded away from zero.
    pub fn is_nonzero(&self) -> bool {
        self.confident && self.exponent > f64::NEG_INFINITY
    }
}

/// A refinement window `center +- half_width * n^{-shrink}` for the sup grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub center: f64,
    pub half_width: f64,
    pub shrink: f64,
}

impl Window {
    fn at(&self, n: f64) -> (f64, f64) {
        (self.center, self.half_width * n.powf(-self.shrink))
    }
}

type ElementFn = dyn Fn(u64) -> Result<Element> + Send + Sync;

enum Node {
    /// Exact scalar normal form.
    Exact(ExpPoly),
    /// Scalar expression in `n` outside the normal forms.
    ScalarExpr(Expr),
    /// The constant sequence `(e)_n`.
    Constant(Element),
    /// Smooth functions given by one expression in `x` and `n`.
    Smooth { expr: Expr, windows: Vec<Window> },
    Generic(Arc<ElementFn>),
    Add(Seq, Seq),
    Mul(Seq, Seq),
    Scale(Complex64, Seq),
    Deriv(Seq),
}

/// A lazily evaluated sequence `n -> f_n` in the base algebra.
#[derive(Clone)]
pub struct Seq {
    label: String,
    node: Arc<Node>,
    certificate: Option<GrowthCertificate>,
    domain_start: u64,
}

impl fmt::Debug for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seq({})", self.label)
    }
}

/// Growth of `p(f_n)` when known in closed form.
#[derive(Clone, Debug, PartialEq)]
pub enum Asymptotic {
    /// `p(f_n) = 0` for all large `n`.
    Zero,
    Growth(Growth),
}

fn exact_start(p: &ExpPoly) -> u64 {
    if p.terms().iter().any(|t| t.shape.b != 0.0 || !t.shape.exp_log.is_empty()) {
        2
    } else {
        1
    }
}

impl Seq {
    fn from_node(label: impl Into<String>, node: Node, domain_start: u64) -> Seq {
        Seq { label: label.into(), node: Arc::new(node), certificate: None, domain_start }
    }

    pub fn zero() -> Seq {
        Seq::exact("0", ExpPoly::zero())
    }

    /// A scalar sequence in exact normal form.
    pub fn exact(label: impl Into<String>, p: ExpPoly) -> Seq {
        let start = exact_start(&p);
        Seq::from_node(label, Node::Exact(p), start)
    }

    /// A sequence from an expression: smooth if it mentions `x`, scalar otherwise.
    pub fn from_expr(label: impl Into<String>, expr: Expr) -> Result<Seq> {
        if expr.mentions(Var::M) {
            return Err(Error::Invalid(format!("sequence `{expr}` mentions the family index m")));
        }
        if expr.mentions(Var::X) {
            return Ok(Seq::smooth(label, expr, Vec::new()));
        }
        if let Some(p) = ExpPoly::from_expr(&expr) {
            return Ok(Seq::exact(label, p));
        }
        let start = if expr.mentions(Var::N) { 2 } else { 1 };
        Ok(Seq::from_node(label, Node::ScalarExpr(expr), start))
    }

    /// The constant sequence `(e)_n`.
    pub fn constant(label: impl Into<String>, e: Element) -> Seq {
        match e {
            Element::Scalar(c) => Seq::exact(label, ExpPoly::constant(c)),
            e => Seq::from_node(label, Node::Constant(e), 1),
        }
    }

    /// Smooth functions `x -> expr(x, n)`, with sup-grid refinement windows.
    pub fn smooth(label: impl Into<String>, expr: Expr, windows: Vec<Window>) -> Seq {
        Seq::from_node(label, Node::Smooth { expr, windows }, 1)
    }

    /// An arbitrary pure generator, defined for `n >= domain_start`.
    pub fn generic(
        label: impl Into<String>,
        domain_start: u64,
        f: impl Fn(u64) -> Result<Element> + Send + Sync + 'static,
    ) -> Seq {
        Seq::from_node(label, Node::Generic(Arc::new(f)), domain_start.max(1))
    }

    pub fn with_certificate(mut self, cert: GrowthCertificate) -> Seq {
        self.certificate = Some(cert);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Seq {
        self.label = label.into();
        self
    }

    pub fn with_domain_start(mut self, start: u64) -> Seq {
        self.domain_start = start.max(1);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain_start(&self) -> u64 {
        self.domain_start
    }

    pub fn certificate(&self) -> Option<&GrowthCertificate> {
        self.certificate.as_ref()
    }

    /// The exact normal form, for scalar sequences that have one.
    pub fn exact_form(&self) -> Option<&ExpPoly> {
        match &*self.node {
            Node::Exact(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact_form().map_or(false, ExpPoly::is_zero)
    }

    fn is_scalar_kind(&self) -> bool {
        matches!(&*self.node, Node::Exact(_) | Node::ScalarExpr(_))
    }

    fn is_function_kind(&self) -> bool {
        matches!(&*self.node, Node::Smooth { .. } | Node::Constant(_) | Node::Deriv(_))
    }

    /// `ln |f_n|` for scalar sequences, overflow-free.
    fn scalar_ln(&self, n: u64) -> Option<Result<f64>> {
        match &*self.node {
            Node::Exact(p) => Some(Ok(p.ln_abs_at(n as f64))),
            Node::ScalarExpr(e) => Some(e.eval_log(&Vars::n(n as f64)).map(|v| v.ln_abs)),
            _ => None,
        }
    }

    /// `f_n`.
    pub fn element(&self, n: u64) -> Result<Element> {
        if n < self.domain_start {
            return Err(Error::Domain(format!(
                "sequence `{}` evaluated at n = {n}, below its domain start {}",
                self.label, self.domain_start
            )));
        }
        let nf = n as f64;
        match &*self.node {
            Node::Exact(p) => Ok(Element::Scalar(p.value_at(nf))),
            Node::ScalarExpr(e) => Ok(Element::real(e.eval(&Vars::n(nf))?)),
            Node::Constant(e) => Ok(e.clone()),
            Node::Smooth { expr, windows } => Ok(Element::Smooth(SmoothFn {
                expr: expr.bind(Var::N, nf),
                windows: windows.iter().map(|w| w.at(nf)).collect(),
            })),
            Node::Generic(f) => f(n),
            Node::Add(a, b) => a.element(n)?.add(&b.element(n)?),
            Node::Mul(a, b) => a.element(n)?.mul(&b.element(n)?),
            Node::Scale(l, a) => a.element(n)?.scale(*l),
            Node::Deriv(a) => a.element(n)?.derivative(),
        }
    }

    /// `[ln p^mu_0(f_n), ..., ln p^mu_nu_max(f_n)]`.
    pub fn ln_seminorms(&self, p: &SeminormFamily, mu: u32, nu_max: u32, n: u64) -> Result<Vec<f64>> {
        let len = nu_max as usize + 1;
        if let Some(v) = self.scalar_ln(n) {
            return Ok(vec![v?; len]);
        }
        match &*self.node {
            Node::Scale(l, a) => {
                let shift = l.norm().ln();
                Ok(a.ln_seminorms(p, mu, nu_max, n)?.into_iter().map(|v| v + shift).collect())
            }
            Node::Mul(a, b) if a.is_scalar_kind() || b.is_scalar_kind() => {
                let (s, f) = if a.is_scalar_kind() { (a, b) } else { (b, a) };
                let shift = s.scalar_ln(n).expect("scalar kind")?;
                Ok(f.ln_seminorms(p, mu, nu_max, n)?.into_iter().map(|v| v + shift).collect())
            }
            _ => Ok(seminorm_profile(p, mu, nu_max, &self.element(n)?)?.into_iter().map(f64::ln).collect()),
        }
    }

    /// Closed-form growth of `p^mu_nu(f_n)`, if derivable.
    pub fn growth_at(&self, p: &SeminormFamily, mu: u32, nu: u32) -> Result<Option<Asymptotic>> {
        if let Some(c) = &self.certificate {
            if let Some(g) = c.lookup(mu, nu) {
                return Ok(Some(Asymptotic::Growth(g.clone())));
            }
        }
        Ok(match &*self.node {
            Node::Exact(poly) => Some(match poly.dominant() {
                Some(g) => Asymptotic::Growth(g),
                None => Asymptotic::Zero,
            }),
            Node::Constant(e) => {
                let c = seminorm_eval(p, mu, nu, e)?;
                Some(if c > 0.0 { Asymptotic::Growth(Growth::power(c, 0.0)) } else { Asymptotic::Zero })
            }
            Node::Add(a, b) => match (a.growth_at(p, mu, nu)?, b.growth_at(p, mu, nu)?) {
                (Some(Asymptotic::Zero), x) | (x, Some(Asymptotic::Zero)) => x,
                (Some(Asymptotic::Growth(g)), Some(Asymptotic::Growth(h))) => {
                    match g.shape.cmp_dominance(&h.shape) {
                        Ordering::Greater => Some(Asymptotic::Growth(g)),
                        Ordering::Less => Some(Asymptotic::Growth(h)),
                        // equal shapes may cancel
                        Ordering::Equal => None,
                    }
                }
                _ => None,
            },
            Node::Mul(a, b) => {
                let (ga, gb) = (a.growth_at(p, mu, nu)?, b.growth_at(p, mu, nu)?);
                match (ga, gb) {
                    (Some(Asymptotic::Zero), _) | (_, Some(Asymptotic::Zero)) => Some(Asymptotic::Zero),
                    // p(c_n f_n) = |c_n| p(f_n) exactly; two function factors only give an upper bound
                    (Some(Asymptotic::Growth(g)), Some(Asymptotic::Growth(h)))
                        if a.is_scalar_kind() || b.is_scalar_kind() =>
                    {
                        Some(Asymptotic::Growth(g.mul(&h)))
                    }
                    _ => None,
                }
            }
            Node::Scale(l, a) => match a.growth_at(p, mu, nu)? {
                Some(Asymptotic::Growth(g)) => Some(Asymptotic::Growth(g.scale(l.norm()))),
                other => other,
            },
            _ => None,
        })
    }

    /// Spot check of the declared certificate: at the last four points of the
    /// schedule, `p(f_n)` lies within a factor 2 of the certified growth.
    pub fn check_certificate(&self, p: &SeminormFamily, budget: &Budget) -> Result<bool> {
        let Some(cert) = &self.certificate else { return Ok(true) };
        let ns = geometric_schedule(self.domain_start.max(2), budget.n_max, budget.points);
        let tail = &ns[ns.len().saturating_sub(4)..];
        for (sel, g) in cert.entries() {
            let mu = sel.mu.unwrap_or(1);
            let nu = sel.nu.unwrap_or(0);
            if !p.is_indexed() && (sel.mu.is_some() || sel.nu.is_some()) {
                continue;
            }
            for &n in tail {
                let lp = self.ln_seminorms(p, mu, nu, n)?[nu as usize];
                if !((lp - g.ln_at(n as f64)).abs() <= std::f64::consts::LN_2) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn combine_start(&self, other: &Seq) -> u64 {
        self.domain_start.max(other.domain_start)
    }

    fn check_carriers(&self, other: &Seq) -> Result<()> {
        let complex = |s: &Seq| s.exact_form().map_or(false, |p| p.terms().iter().any(|t| t.coef.im != 0.0));
        if (complex(self) && other.is_function_kind()) || (complex(other) && self.is_function_kind()) {
            return Err(Error::Type(format!(
                "complex scalar sequence cannot be combined with function sequence ({} and {})",
                self.label, other.label
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Seq) -> Result<Seq> {
        self.check_carriers(other)?;
        let label = format!("({} + {})", self.label, other.label);
        if self.is_exact_zero() {
            return Ok(other.clone());
        }
        if other.is_exact_zero() {
            return Ok(self.clone());
        }
        let start = self.combine_start(other);
        Ok(match (&*self.node, &*other.node) {
            (Node::Exact(a), Node::Exact(b)) => Seq::exact(label, a.add(b)),
            (Node::Smooth { expr: a, windows: wa }, Node::Smooth { expr: b, windows: wb })
                if self.certificate.is_none() && other.certificate.is_none() =>
            {
                let mut windows = wa.clone();
                windows.extend(wb.iter().filter(|w| !wa.contains(w)));
                Seq::from_node(label, Node::Smooth { expr: a.clone() + b.clone(), windows }, start)
            }
            _ => Seq::from_node(label, Node::Add(self.clone(), other.clone()), start),
        })
    }

    pub fn mul(&self, other: &Seq) -> Result<Seq> {
        self.check_carriers(other)?;
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(Seq::zero());
        }
        let label = format!("({} * {})", self.label, other.label);
        let start = self.combine_start(other);
        Ok(match (&*self.node, &*other.node) {
            (Node::Exact(a), Node::Exact(b)) => Seq::exact(label, a.mul(b)),
            (Node::Smooth { expr: a, windows: wa }, Node::Smooth { expr: b, windows: wb })
                if self.certificate.is_none() && other.certificate.is_none() =>
            {
                let mut windows = wa.clone();
                windows.extend(wb.iter().filter(|w| !wa.contains(w)));
                Seq::from_node(label, Node::Smooth { expr: a.clone() * b.clone(), windows }, start)
            }
            _ => Seq::from_node(label, Node::Mul(self.clone(), other.clone()), start),
        })
    }

    /// `lambda f`; `lambda = 0` gives the zero sequence.
    pub fn scalar_mul(&self, lambda: Complex64) -> Result<Seq> {
        if lambda == Complex64::new(0.0, 0.0) || self.is_exact_zero() {
            return Ok(Seq::zero());
        }
        if lambda.im != 0.0 && self.is_function_kind() {
            return Err(Error::Type(format!("complex multiple of function sequence `{}`", self.label)));
        }
        let label = format!("{} {}", fmt_complex(lambda), self.label);
        Ok(match &*self.node {
            Node::Exact(p) => Seq::exact(label, p.scale(lambda)),
            _ => Seq::from_node(label, Node::Scale(lambda, self.clone()), self.domain_start),
        })
    }

    pub fn neg(&self) -> Result<Seq> {
        self.scalar_mul(Complex64::new(-1.0, 0.0))
    }

    pub fn sub(&self, other: &Seq) -> Result<Seq> {
        let d = self.add(&other.neg()?)?;
        Ok(d.with_label(format!("({} - {})", self.label, other.label)))
    }

    /// Term-wise derivative in `x`.
    pub fn derivative(&self) -> Result<Seq> {
        let label = format!("d({})", self.label);
        let shifted = self.certificate.as_ref().and_then(shift_certificate);
        let out = match &*self.node {
            Node::Exact(_) | Node::ScalarExpr(_) => {
                return Err(Error::Type(format!(
                    "derivative applies to function sequences, `{}` is scalar",
                    self.label
                )))
            }
            Node::Constant(e) => Seq::constant(label, e.derivative()?),
            Node::Smooth { expr, windows } => Seq::from_node(
                label,
                Node::Smooth { expr: expr.derivative(Var::X), windows: windows.clone() },
                self.domain_start,
            ),
            Node::Add(a, b) if self.certificate.is_none() => a.derivative()?.add(&b.derivative()?)?.with_label(label),
            Node::Scale(l, a) if self.certificate.is_none() => a.derivative()?.scalar_mul(*l)?.with_label(label),
            _ => Seq::from_node(label, Node::Deriv(self.clone()), self.domain_start),
        };
        Ok(match shifted {
            Some(c) => out.with_certificate(c),
            None => out,
        })
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("({}+{}i)", z.re, z.im)
    }
}

/// Certificate of the derivative sequence when the declared growth at order
/// `nu + 1` describes the derivative at order `nu`.
fn shift_certificate(c: &GrowthCertificate) -> Option<GrowthCertificate> {
    if !c.derivative_shift {
        return None;
    }
    let mut out = GrowthCertificate::default().shifting_under_derivative();
    for (sel, g) in c.entries() {
        match sel.nu {
            Some(0) => {}
            Some(nu) => out = out.with(IndexSel { mu: sel.mu, nu: Some(nu - 1) }, g.clone()),
            None => out = out.with(*sel, g.clone()),
        }
    }
    (!out.is_empty()).then_some(out)
}

/// `lim r_n ln p(f_n)` from a closed-form growth, if the scale admits one.
pub fn closed_form_exponent(asym: &Asymptotic, r: &Scale) -> Option<f64> {
    let g = match asym {
        // 0^{r_n} = 0, including 0^0 = 0 for Egorov tails
        Asymptotic::Zero => return Some(f64::NEG_INFINITY),
        Asymptotic::Growth(g) => g,
    };
    if r.is_egorov() {
        // c^0 = 1 for c != 0
        return Some(0.0);
    }
    let (kappa, atom) = r.reciprocal_atom()?;
    Some(match g.shape.log_atoms().first() {
        None => 0.0,
        Some((a, s)) => match a.cmp_growth_tol(&atom, 1e-12) {
            Ordering::Greater => s.signum() * f64::INFINITY,
            Ordering::Equal => kappa * s,
            Ordering::Less => 0.0,
        },
    })
}

/// Least-squares fit `e = e_inf + c r` on the window; returns `(e_inf, rms)`.
fn fit_line(r: &[f64], e: &[f64]) -> (f64, f64) {
    let k = r.len() as f64;
    let (mr, me) = (r.iter().sum::<f64>() / k, e.iter().sum::<f64>() / k);
    let sxx: f64 = r.iter().map(|x| (x - mr).powi(2)).sum();
    let sxy: f64 = r.iter().zip(e).map(|(x, y)| (x - mr) * (y - me)).sum();
    let slope = if sxx > 1e-24 { sxy / sxx } else { 0.0 };
    let intercept = me - slope * mr;
    let rms = (r.iter().zip(e).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum::<f64>() / k).sqrt();
    (intercept, rms)
}

/// Estimate from sampled `(r_n, e_n)` pairs, in schedule order.
pub fn tail_fit(samples: &[(f64, f64)], budget: &Budget) -> UltranormEstimate {
    let w = budget.window.max(3).min(samples.len());
    let win = &samples[samples.len() - w..];
    let e: Vec<f64> = win.iter().map(|s| s.1).collect();
    let r: Vec<f64> = win.iter().map(|s| s.0).collect();
    if e.iter().all(|v| *v == f64::NEG_INFINITY) {
        return UltranormEstimate::new(f64::NEG_INFINITY, Method::TailFit, 0.0, true);
    }
    if e.iter().any(|v| *v == f64::INFINITY) {
        return UltranormEstimate::new(f64::INFINITY, Method::TailFit, 0.0, true);
    }
    if e.iter().any(|v| *v == f64::NEG_INFINITY) {
        // intermittent zeros: the limsup is carried by a subsequence we cannot pin down
        let top = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        return UltranormEstimate::new(top, Method::TailFit, f64::INFINITY, false);
    }
    let (e_inf, rms) = fit_line(&r, &e);
    let good = rms <= budget.fit_tol * e_inf.abs().max(1.0);
    let increasing = e.windows(2).all(|p| p[1] > p[0]);
    let decreasing = e.windows(2).all(|p| p[1] < p[0]);
    let span = e[e.len() - 1] - e[0];
    if good {
        UltranormEstimate::new(e_inf, Method::TailFit, rms, true)
    } else if increasing && span > 1.0 {
        UltranormEstimate::new(f64::INFINITY, Method::TailFit, rms, true)
    } else if decreasing && span < -1.0 && e_inf < -3.0 {
        UltranormEstimate::new(f64::NEG_INFINITY, Method::TailFit, rms, true)
    } else {
        UltranormEstimate::new(e_inf, Method::TailFit, rms, false)
    }
}

/// `r_n ln p` with `0^r = 0` and `c^0 = 1`.
fn exponent_term(r: f64, lp: f64) -> f64 {
    if lp == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else if r == 0.0 {
        0.0
    } else {
        r * lp
    }
}

/// Sampled ultranorms at orders `0..=nu_max`, ignoring certificates.
pub fn ultranorm_tailfit_profile(
    f: &Seq,
    p: &SeminormFamily,
    mu: u32,
    nu_max: u32,
    r: &Scale,
    budget: &Budget,
) -> Result<Vec<UltranormEstimate>> {
    let len = nu_max as usize + 1;
    if let ScaleKind::Egorov(m) = r.kind {
        // head terms n <= m never affect the limsup: sample strictly beyond m
        let start = (m as u64 + 1).max(f.domain_start);
        let mut ns: Vec<u64> = (start..start + 64).collect();
        ns.extend(geometric_schedule(start + 64, budget.n_max.max(start + 64), budget.points));
        let mut nonzero = vec![false; len];
        for n in ns {
            for (flag, lp) in nonzero.iter_mut().zip(f.ln_seminorms(p, mu, nu_max, n)?) {
                *flag |= lp > f64::NEG_INFINITY;
            }
        }
        return Ok(nonzero
            .into_iter()
            .map(|nz| UltranormEstimate::new(if nz { 0.0 } else { f64::NEG_INFINITY }, Method::TailFit, 0.0, true))
            .collect());
    }
    let start = f.domain_start.max(r.domain_start);
    let ns = geometric_schedule(start, budget.n_max.max(start + 1), budget.points);
    let rows: Vec<(f64, Vec<f64>)> = ns
        .par_iter()
        .map(|&n| Ok((r.eval(n as f64)?, f.ln_seminorms(p, mu, nu_max, n)?)))
        .collect::<Result<_>>()?;
    Ok((0..len)
        .map(|nu| {
            let samples: Vec<(f64, f64)> = rows.iter().map(|(rn, lp)| (*rn, exponent_term(*rn, lp[nu]))).collect();
            tail_fit(&samples, budget)
        })
        .collect())
}

/// Ultranorm estimates at orders `0..=nu_max`, closed form where available.
pub fn ultranorm_profile(
    f: &Seq,
    p: &SeminormFamily,
    mu: u32,
    nu_max: u32,
    r: &Scale,
    budget: &Budget,
) -> Result<Vec<UltranormEstimate>> {
    let mut out: Vec<Option<UltranormEstimate>> = Vec::with_capacity(nu_max as usize + 1);
    for nu in 0..=nu_max {
        let closed = f.growth_at(p, mu, nu)?.and_then(|a| closed_form_exponent(&a, r));
        out.push(closed.map(UltranormEstimate::closed_form));
    }
    if out.iter().any(Option::is_none) {
        let fitted = ultranorm_tailfit_profile(f, p, mu, nu_max, r, budget)?;
        for (slot, est) in out.iter_mut().zip(fitted) {
            slot.get_or_insert(est);
        }
    }
    Ok(out.into_iter().map(|e| e.expect("filled")).collect())
}

/// `<<f>>_{p^mu_nu, r}`.
pub fn ultranorm(f: &Seq, p: &SeminormFamily, mu: u32, nu: u32, r: &Scale, budget: &Budget) -> Result<UltranormEstimate> {
    if let Some(e) = f.growth_at(p, mu, nu)?.and_then(|a| closed_form_exponent(&a, r)) {
        return Ok(UltranormEstimate::closed_form(e));
    }
    Ok(ultranorm_tailfit_profile(f, p, mu, nu, r, budget)?[nu as usize])
}

/// Sampled estimate only, for cross-checking closed forms.
pub fn ultranorm_tailfit(f: &Seq, p: &SeminormFamily, mu: u32, nu: u32, r: &Scale, budget: &Budget) -> Result<UltranormEstimate> {
    Ok(ultranorm_tailfit_profile(f, p, mu, nu, r, budget)?[nu as usize])
}

/// `d(f, g) = <<f - g>>`.
pub fn distance(f: &Seq, g: &Seq, p: &SeminormFamily, mu: u32, nu: u32, r: &Scale, budget: &Budget) -> Result<UltranormEstimate> {
    ultranorm(&f.sub(g)?, p, mu, nu, r, budget)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every `(mu, nu)` must satisfy the bound.
    Projective,
    /// Every `mu` needs some `nu` satisfying the bound.
    Inductive,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Projective => "projective",
            Mode::Inductive => "inductive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Moderate,
    Negligible,
    Divergent,
    Inconclusive,
}

impl Verdict {
    /// Moderate or negligible.
    pub fn is_moderate(self) -> bool {
        matches!(self, Verdict::Moderate | Verdict::Negligible)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Moderate => "moderate",
            Verdict::Negligible => "negligible",
            Verdict::Divergent => "divergent",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Witness {
    pub mu: u32,
    pub nu: u32,
    pub estimate: UltranormEstimate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    pub mode: Mode,
    pub witnesses: Vec<Witness>,
}

impl Classification {
    pub fn witness(&self, mu: u32, nu: u32) -> Option<&UltranormEstimate> {
        self.witnesses.iter().find(|w| w.mu == mu && w.nu == nu).map(|w| &w.estimate)
    }
}

/// All estimates over the index budget, grouped by `mu` in increasing order.
pub fn witness_table(f: &Seq, p: &SeminormFamily, r: &Scale, budget: &Budget) -> Result<Vec<Witness>> {
    let (mus, nu_max): (Vec<u32>, u32) = if p.is_indexed() {
        ((1..=budget.mu_max.max(1)).collect(), budget.nu_max)
    } else {
        (vec![1], 0)
    };
    let rows: Vec<Vec<Witness>> = mus
        .par_iter()
        .map(|&mu| {
            let prof = ultranorm_profile(f, p, mu, nu_max, r, budget)?;
            Ok(prof.into_iter().enumerate().map(|(nu, estimate)| Witness { mu, nu: nu as u32, estimate }).collect())
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn verdict_of(witnesses: &[Witness], mode: Mode) -> Verdict {
    match mode {
        Mode::Projective => {
            let est: Vec<&UltranormEstimate> = witnesses.iter().map(|w| &w.estimate).collect();
            if est.iter().any(|e| e.is_infinite()) {
                Verdict::Divergent
            } else if est.iter().any(|e| !e.confident) {
                Verdict::Inconclusive
            } else if est.iter().all(|e| e.is_zero()) {
                Verdict::Negligible
            } else {
                Verdict::Moderate
            }
        }
        Mode::Inductive => {
            let mut mus: Vec<u32> = witnesses.iter().map(|w| w.mu).collect();
            mus.dedup();
            let per_mu = |mu: u32| witnesses.iter().filter(move |w| w.mu == mu).map(|w| &w.estimate);
            if mus.iter().any(|&mu| per_mu(mu).all(|e| e.is_infinite())) {
                Verdict::Divergent
            } else if mus.iter().all(|&mu| per_mu(mu).any(|e| e.is_zero())) {
                Verdict::Negligible
            } else if mus.iter().all(|&mu| per_mu(mu).any(|e| e.is_finite())) {
                Verdict::Moderate
            } else {
                Verdict::Inconclusive
            }
        }
    }
}

/// Moderate/negligible classification over the index budget.
pub fn classify(f: &Seq, p: &SeminormFamily, r: &Scale, mode: Mode, budget: &Budget) -> Result<Classification> {
    let witnesses = witness_table(f, p, r, budget)?;
    Ok(Classification { verdict: verdict_of(&witnesses, mode), mode, witnesses })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equality {
    Equal,
    NotEqual,
    Inconclusive,
}

impl fmt::Display for Equality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equality::Equal => "equal",
            Equality::NotEqual => "not-equal",
            Equality::Inconclusive => "inconclusive",
        })
    }
}

/// Equality of classes in the quotient: the difference is negligible.
pub fn equal_in_quotient(f: &Seq, g: &Seq, p: &SeminormFamily, r: &Scale, mode: Mode, budget: &Budget) -> Result<Equality> {
    for s in [f, g] {
        if !classify(s, p, r, mode, budget)?.verdict.is_moderate() {
            return Ok(Equality::Inconclusive);
        }
    }
    let d = classify(&f.sub(g)?, p, r, mode, budget)?;
    if d.verdict == Verdict::Negligible {
        return Ok(Equality::Equal);
    }
    let separated = match mode {
        Mode::Projective => d.witnesses.iter().any(|w| w.estimate.is_nonzero()),
        Mode::Inductive => {
            let mut mus: Vec<u32> = d.witnesses.iter().map(|w| w.mu).collect();
            mus.dedup();
            mus.iter()
                .any(|&mu| d.witnesses.iter().filter(|w| w.mu == mu).all(|w| w.estimate.is_nonzero()))
        }
    };
    Ok(if separated { Equality::NotEqual } else { Equality::Inconclusive })
}
