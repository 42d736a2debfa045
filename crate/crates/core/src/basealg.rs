//! Elements of the base algebra and the seminorm families on it.
//!
//! Suprema over `[-mu, mu]` are maxima over a finite grid, so a sup seminorm
//! computed here is a lower bound of the true one. The grid is the uniform
//! grid of `ceil(2 mu G) + 1` points, plus `2G + 1` points in each refinement
//! window attached to the element (used by delta sequences, whose features
//! shrink like `1/n`). Doubling `G` refines both grids without dropping points.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{Expr, Var, Vars};
use crate::jet::jet_eval;

/// Default number of grid points per unit length.
pub const DEFAULT_GRID: u32 = 256;

/// A smooth real function of `x` with optional refinement windows `(center, half_width)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothFn {
    pub expr: Expr,
    pub windows: Vec<(f64, f64)>,
}

impl SmoothFn {
    pub fn new(expr: Expr) -> Self {
        SmoothFn { expr, windows: Vec::new() }
    }
}

type RealFn = dyn Fn(f64) -> Result<f64> + Send + Sync;

/// A real function known only through point evaluation (e.g. a convolution
/// computed by quadrature). Only order-0 seminorms are available.
#[derive(Clone)]
pub struct NumericFn {
    f: Arc<RealFn>,
    pub label: String,
}

impl NumericFn {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> Result<f64> + Send + Sync + 'static) -> Self {
        NumericFn { f: Arc::new(f), label: label.into() }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        (self.f)(x)
    }
}

impl fmt::Debug for NumericFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumericFn({})", self.label)
    }
}

/// An element of the base algebra: a scalar, a smooth function given by an
/// expression in `x`, or a numerically sampled function.
#[derive(Clone, Debug)]
pub enum Element {
    Scalar(Complex64),
    Smooth(SmoothFn),
    Numeric(NumericFn),
}

impl Element {
    pub fn real(v: f64) -> Element {
        Element::Scalar(Complex64::new(v, 0.0))
    }

    pub fn smooth(expr: Expr) -> Result<Element> {
        if expr.mentions(Var::N) || expr.mentions(Var::M) {
            return Err(Error::Invalid(format!("element `{expr}` still mentions an index symbol")));
        }
        Ok(Element::Smooth(SmoothFn::new(expr)))
    }

    pub fn is_scalar(&self) -> bool {
        matches!(self, Element::Scalar(_))
    }

    fn real_scalar(c: Complex64) -> Result<f64> {
        if c.im != 0.0 {
            return Err(Error::Type(format!(
                "complex scalar {c} cannot be combined with a real-valued function"
            )));
        }
        Ok(c.re)
    }

    /// Point value of a real function element (a real scalar is a constant function).
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            Element::Scalar(c) => Element::real_scalar(*c),
            Element::Smooth(s) => s.expr.eval(&Vars::x(x)),
            Element::Numeric(f) => f.eval(x),
        }
    }

    fn numeric_combine(&self, other: &Element, op: &'static str, f: fn(f64, f64) -> f64) -> Element {
        let (a, b) = (self.clone(), other.clone());
        Element::Numeric(NumericFn::new(op, move |x| Ok(f(a.eval(x)?, b.eval(x)?))))
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        Ok(match (self, other) {
            (Element::Scalar(a), Element::Scalar(b)) => Element::Scalar(a + b),
            (Element::Scalar(c), Element::Smooth(s)) | (Element::Smooth(s), Element::Scalar(c)) => {
                let c = Element::real_scalar(*c)?;
                if c == 0.0 {
                    Element::Smooth(s.clone())
                } else {
                    Element::Smooth(SmoothFn { expr: s.expr.clone() + Expr::Const(c), windows: s.windows.clone() })
                }
            }
            (Element::Smooth(a), Element::Smooth(b)) => Element::Smooth(SmoothFn {
                expr: a.expr.clone() + b.expr.clone(),
                windows: union_windows(&a.windows, &b.windows),
            }),
            (Element::Scalar(c), _) | (_, Element::Scalar(c)) => {
                Element::real_scalar(*c)?;
                self.numeric_combine(other, "sum", |a, b| a + b)
            }
            _ => self.numeric_combine(other, "sum", |a, b| a + b),
        })
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        Ok(match (self, other) {
            (Element::Scalar(a), Element::Scalar(b)) => Element::Scalar(a * b),
            (Element::Scalar(c), e) | (e, Element::Scalar(c)) => e.scale(*c)?,
            (Element::Smooth(a), Element::Smooth(b)) => Element::Smooth(SmoothFn {
                expr: a.expr.clone() * b.expr.clone(),
                windows: union_windows(&a.windows, &b.windows),
            }),
            _ => self.numeric_combine(other, "product", |a, b| a * b),
        })
    }

    pub fn scale(&self, lambda: Complex64) -> Result<Element> {
        Ok(match self {
            Element::Scalar(a) => Element::Scalar(a * lambda),
            Element::Smooth(s) => {
                let l = Element::real_scalar(lambda)?;
                if l == 0.0 {
                    Element::real(0.0)
                } else if l == 1.0 {
                    self.clone()
                } else {
                    Element::Smooth(SmoothFn { expr: Expr::Const(l) * s.expr.clone(), windows: s.windows.clone() })
                }
            }
            Element::Numeric(f) => {
                let l = Element::real_scalar(lambda)?;
                let f = f.clone();
                Element::Numeric(NumericFn::new("scaled", move |x| Ok(l * f.eval(x)?)))
            }
        })
    }

    pub fn neg(&self) -> Result<Element> {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg()?)
    }

    /// Derivative in `x`. Scalars are constant functions; sampled functions have none.
    pub fn derivative(&self) -> Result<Element> {
        match self {
            Element::Scalar(_) => Ok(Element::real(0.0)),
            Element::Smooth(s) => Ok(Element::Smooth(SmoothFn {
                expr: s.expr.derivative(Var::X),
                windows: s.windows.clone(),
            })),
            Element::Numeric(f) => Err(Error::Capability(format!(
                "`{}` is a sampled function and has no derivatives",
                f.label
            ))),
        }
    }
}

fn union_windows(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = a.to_vec();
    for w in b {
        if !out.contains(w) {
            out.push(*w);
        }
    }
    out
}

/// The seminorm families `p^mu_nu`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SeminormFamily {
    /// `|.|` on scalars; the indices are ignored.
    AbsoluteValue,
    /// `sup_{alpha <= nu, |x| <= mu} |f^(alpha)(x)|` on a grid of `grid` points per unit.
    SupDerivatives { grid: u32 },
    /// `sup_{alpha <= order, x in [lo, hi]} |f^(alpha)(x)|`; the indices are ignored.
    SobolevSup { order: u32, lo: f64, hi: f64, grid: u32 },
}

impl Default for SeminormFamily {
    fn default() -> Self {
        SeminormFamily::SupDerivatives { grid: DEFAULT_GRID }
    }
}

impl SeminormFamily {
    pub fn sup() -> Self {
        SeminormFamily::default()
    }

    pub fn sobolev(order: u32, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Invalid(format!("Sobolev interval [{lo}, {hi}] is empty or unbounded")));
        }
        Ok(SeminormFamily::SobolevSup { order, lo, hi, grid: DEFAULT_GRID })
    }

    /// Whether `(mu, nu)` are meaningful (otherwise a single index pair is used).
    pub fn is_indexed(&self) -> bool {
        matches!(self, SeminormFamily::SupDerivatives { .. })
    }

    /// Index pairs to examine for budgets `mu <= mu_max`, `nu <= nu_max`, `mu >= 1`.
    pub fn indices(&self, mu_max: u32, nu_max: u32) -> Vec<(u32, u32)> {
        if !self.is_indexed() {
            return vec![(1, 0)];
        }
        (1..=mu_max.max(1)).flat_map(|mu| (0..=nu_max).map(move |nu| (mu, nu))).collect()
    }

    /// The same family with grid density `grid`.
    pub fn with_grid(&self, grid: u32) -> Self {
        match *self {
            SeminormFamily::AbsoluteValue => SeminormFamily::AbsoluteValue,
            SeminormFamily::SupDerivatives { .. } => SeminormFamily::SupDerivatives { grid },
            SeminormFamily::SobolevSup { order, lo, hi, .. } => SeminormFamily::SobolevSup { order, lo, hi, grid },
        }
    }

    fn interval(&self, mu: u32, nu: u32) -> (f64, f64, u32, u32) {
        match *self {
            SeminormFamily::AbsoluteValue => (0.0, 0.0, 0, nu),
            SeminormFamily::SupDerivatives { grid } => (-(mu as f64), mu as f64, grid, nu),
            SeminormFamily::SobolevSup { order, lo, hi, grid } => (lo, hi, grid, order),
        }
    }
}

/// Grid points for a sup over `[lo, hi]` with refinement windows.
pub fn grid_points(lo: f64, hi: f64, grid: u32, windows: &[(f64, f64)]) -> Vec<f64> {
    let g = grid.max(1) as f64;
    let cells = ((hi - lo) * g).ceil().max(1.0) as usize;
    let mut pts: Vec<f64> = (0..=cells).map(|i| lo + (hi - lo) * i as f64 / cells as f64).collect();
    let wcells = 2 * grid.max(1) as usize;
    for &(c, hw) in windows {
        if !(hw > 0.0) || c + hw < lo || c - hw > hi {
            continue;
        }
        pts.extend(
            (0..=wcells)
                .map(|i| c - hw + 2.0 * hw * i as f64 / wcells as f64)
                .filter(|x| (lo..=hi).contains(x)),
        );
    }
    pts
}

/// `p^mu_nu(f)`.
pub fn seminorm_eval(p: &SeminormFamily, mu: u32, nu: u32, f: &Element) -> Result<f64> {
    Ok(*seminorm_profile(p, mu, nu, f)?.last().expect("profile has nu + 1 entries"))
}

/// `[p^mu_0(f), ..., p^mu_nu(f)]` from a single pass over the grid.
pub fn seminorm_profile(p: &SeminormFamily, mu: u32, nu_max: u32, f: &Element) -> Result<Vec<f64>> {
    if let SeminormFamily::AbsoluteValue = p {
        return match f {
            Element::Scalar(c) => Ok(vec![c.norm(); nu_max as usize + 1]),
            _ => Err(Error::Type("the absolute value applies to scalar elements only".into())),
        };
    }
    let (lo, hi, grid, order) = p.interval(mu, nu_max);
    let len = nu_max as usize + 1;
    let per_order: Vec<f64> = match f {
        Element::Scalar(c) => {
            let mut v = vec![0.0; order as usize + 1];
            v[0] = c.norm();
            v
        }
        Element::Smooth(s) => {
            let pts = grid_points(lo, hi, grid, &s.windows);
            let jets: Vec<Vec<f64>> = pts
                .par_iter()
                .map(|&x| {
                    let jet = jet_eval(&s.expr, x, None, order as usize)?;
                    Ok(jet.values().iter().map(|v| v.abs()).collect())
                })
                .collect::<Result<_>>()?;
            let mut best = vec![0.0f64; order as usize + 1];
            for j in &jets {
                for (b, v) in best.iter_mut().zip(j) {
                    // a NaN component must not be masked by max()
                    if v.is_nan() {
                        return Err(Error::Evaluation(format!("derivative of `{}` is not a number", s.expr)));
                    }
                    *b = b.max(*v);
                }
            }
            best
        }
        Element::Numeric(nf) => {
            if order > 0 {
                return Err(Error::Capability(format!(
                    "`{}` is a sampled function; only order-0 seminorms are available",
                    nf.label
                )));
            }
            let pts = grid_points(lo, hi, grid, &[]);
            let vals: Vec<f64> = pts.par_iter().map(|&x| nf.eval(x).map(f64::abs)).collect::<Result<_>>()?;
            if vals.iter().any(|v| v.is_nan()) {
                return Err(Error::Evaluation(format!("`{}` produced a non-number", nf.label)));
            }
            vec![vals.into_iter().fold(0.0, f64::max)]
        }
    };
    // p_nu = max over alpha <= nu; the Sobolev family uses its fixed order throughout
    let mut out = Vec::with_capacity(len);
    let mut acc = 0.0f64;
    for v in &per_order {
        acc = acc.max(*v);
        if matches!(p, SeminormFamily::SupDerivatives { .. }) {
            out.push(acc);
        }
    }
    if !matches!(p, SeminormFamily::SupDerivatives { .. }) {
        out = vec![acc; len];
    }
    out.truncate(len);
    Ok(out)
}

/// Checks `p(f)` is monotone along each pair `(mu, nu) <= (mu', nu')`.
pub fn check_seminorm_monotone(
    p: &SeminormFamily,
    f: &Element,
    pairs: &[((u32, u32), (u32, u32))],
) -> Result<bool> {
    for &((mu, nu), (mu2, nu2)) in pairs {
        if mu > mu2 || nu > nu2 {
            return Err(Error::Invalid(format!(
                "index pair ({mu},{nu}) is not below ({mu2},{nu2})"
            )));
        }
        if seminorm_eval(p, mu, nu, f)? > seminorm_eval(p, mu2, nu2, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smooth(src: &str) -> Element {
        Element::smooth(Expr::parse(src).unwrap()).unwrap()
    }

    #[test]
    fn absolute_value_of_complex_scalar() {
        let z = Element::Scalar(Complex64::new(-3.0, 4.0));
        assert_eq!(seminorm_eval(&SeminormFamily::AbsoluteValue, 7, 3, &z).unwrap(), 5.0);
        assert!(matches!(
            seminorm_eval(&SeminormFamily::AbsoluteValue, 1, 0, &smooth("x")),
            Err(Error::Type(_))
        ));
    }

    #[test]
    fn sup_derivatives_examples() {
        let p = SeminormFamily::sup();
        assert_eq!(seminorm_eval(&p, 2, 1, &smooth("x^2")).unwrap(), 4.0);
        let s = seminorm_eval(&p, 1, 0, &smooth("sin(x)")).unwrap();
        assert!((s - 1f64.sin()).abs() < 1e-15);
        assert_eq!(seminorm_eval(&p, 3, 2, &Element::real(-7.0)).unwrap(), 7.0);
    }

    #[test]
    fn profile_is_cumulative() {
        let p = SeminormFamily::sup();
        let prof = seminorm_profile(&p, 1, 3, &smooth("sin(x)")).unwrap();
        assert!((prof[0] - 1f64.sin()).abs() < 1e-15);
        assert_eq!(prof[1], 1.0);
        assert_eq!(prof[2], 1.0);
        assert_eq!(prof[3], 1.0);
    }

    #[test]
    fn sobolev_family_uses_fixed_order() {
        let p = SeminormFamily::sobolev(1, 0.0, 2.0).unwrap();
        let v = seminorm_eval(&p, 5, 0, &smooth("x^2")).unwrap();
        assert_eq!(v, 4.0);
        assert!(SeminormFamily::sobolev(1, 1.0, 1.0).is_err());
    }

    #[test]
    fn windows_resolve_narrow_peaks() {
        let narrow = Expr::parse("exp(-(1000*(x-0.0005))^2)").unwrap();
        let p = SeminormFamily::sup();
        let coarse = seminorm_eval(&p, 1, 0, &Element::smooth(narrow.clone()).unwrap()).unwrap();
        let fine = seminorm_eval(
            &p,
            1,
            0,
            &Element::Smooth(SmoothFn { expr: narrow, windows: vec![(0.0, 0.008)] }),
        )
        .unwrap();
        assert!(coarse < 0.9);
        assert!(fine > 1.0 - 1e-4);
    }

    #[test]
    fn monotone_examples() {
        let p = SeminormFamily::sup();
        assert!(check_seminorm_monotone(&p, &smooth("x^2"), &[((1, 0), (2, 0))]).unwrap());
        assert!(check_seminorm_monotone(&p, &Element::real(7.0), &[((1, 0), (3, 3))]).unwrap());
        assert!(check_seminorm_monotone(&p, &smooth("sin(x)"), &[((1, 0), (1, 1))]).unwrap());
        assert!(check_seminorm_monotone(&p, &smooth("x"), &[((2, 0), (1, 0))]).is_err());
    }

    #[test]
    fn numeric_elements_have_order_zero_only() {
        let f = Element::Numeric(NumericFn::new("tri", |x: f64| Ok((1.0 - x.abs()).max(0.0))));
        let p = SeminormFamily::sup();
        assert_eq!(seminorm_eval(&p, 1, 0, &f).unwrap(), 1.0);
        assert!(matches!(seminorm_eval(&p, 1, 1, &f), Err(Error::Capability(_))));
        assert!(matches!(f.derivative(), Err(Error::Capability(_))));
    }

    #[test]
    fn element_arithmetic() {
        let f = smooth("x").add(&Element::real(2.0)).unwrap();
        assert_eq!(f.eval(1.0).unwrap(), 3.0);
        let g = f.mul(&smooth("x")).unwrap();
        assert_eq!(g.eval(2.0).unwrap(), 8.0);
        let z = Element::Scalar(Complex64::new(0.0, 1.0));
        assert!(matches!(smooth("x").add(&z), Err(Error::Type(_))));
        assert!(matches!(smooth("x").scale(Complex64::new(0.0, 1.0)), Err(Error::Type(_))));
        assert_eq!(smooth("x^3").derivative().unwrap().eval(2.0).unwrap(), 12.0);
    }
}
