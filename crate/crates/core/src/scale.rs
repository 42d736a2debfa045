//! Weight sequences `r = (r_n)` and families of them.
//!
//! Logarithms are natural logarithms. A different base rescales every
//! exponent by the same factor and leaves the moderate/negligible split alone.
//! Monotonicity and convergence are checked on finite sample schedules; a
//! passing report means no violation was found, not that one cannot exist.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{Expr, Func, Var, Vars};
use crate::growth::{Atom, ExpPoly};

/// Below this `|ln a_m(n)|` a weight `1/|ln a_m(n)|` is treated as singular.
pub const SINGULAR_LOG: f64 = 1e-12;

/// `n = start, then 2^k > start` up to `end`.
pub fn doubling_schedule(start: u64, end: u64) -> Vec<u64> {
    let start = start.max(1);
    let mut out = vec![start];
    let mut n = start.next_power_of_two();
    if n == start {
        n *= 2;
    }
    while n <= end {
        out.push(n);
        n *= 2;
    }
    out
}

/// `points` integers spaced geometrically from `start` to `end`, without duplicates.
pub fn geometric_schedule(start: u64, end: u64, points: usize) -> Vec<u64> {
    let start = start.max(1);
    let end = end.max(start);
    if points <= 1 || end == start {
        return vec![end];
    }
    let (ls, le) = ((start as f64).ln(), (end as f64).ln());
    let mut out: Vec<u64> = (0..points)
        .map(|i| (ls + (le - ls) * i as f64 / (points - 1) as f64).exp().round() as u64)
        .map(|n| n.clamp(start, end))
        .collect();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq)]
enum AsymptoticKind {
    /// `a_m(n) = n^{-m}`.
    Power,
    /// `a_m(n) = exp(-m n)`.
    Exponential,
    /// `a_m(n)` given by an expression in `n` and `m`.
    Expr(Expr),
}

/// An integer-indexed family `m -> (n -> a_m(n))`, evaluated through `ln a_m(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticFamily {
    kind: AsymptoticKind,
}

impl AsymptoticFamily {
    pub fn power() -> Self {
        AsymptoticFamily { kind: AsymptoticKind::Power }
    }

    pub fn exponential() -> Self {
        AsymptoticFamily { kind: AsymptoticKind::Exponential }
    }

    pub fn from_expr(expr: Expr) -> Result<Self> {
        if expr.mentions(Var::X) {
            return Err(Error::Invalid(format!("asymptotic family `{expr}` may only use n and m")));
        }
        Ok(AsymptoticFamily { kind: AsymptoticKind::Expr(expr) })
    }

    /// `ln a_m(n)`; `-inf` when `a_m(n) = 0`.
    pub fn ln_a(&self, m: i64, n: f64) -> Result<f64> {
        let mf = m as f64;
        match &self.kind {
            AsymptoticKind::Power => Ok(-mf * n.ln()),
            AsymptoticKind::Exponential => Ok(-mf * n),
            AsymptoticKind::Expr(e) => {
                let v = e.eval_log(&Vars::n(n).with_m(mf))?;
                if v.sign < 0 {
                    return Err(Error::Domain(format!("a_{m}({n}) = `{e}` is negative")));
                }
                Ok(v.ln_abs)
            }
        }
    }

    /// `|ln a_m(n)| ~ coef * atom(n)` when recognizable.
    fn log_atom(&self, m: i64) -> Option<(f64, Atom)> {
        let mf = m as f64;
        match &self.kind {
            AsymptoticKind::Power => (m != 0).then(|| (mf.abs(), Atom::LogPow(1.0))),
            AsymptoticKind::Exponential => (m != 0).then(|| (mf.abs(), Atom::Pow(1.0))),
            AsymptoticKind::Expr(e) => {
                let p = ExpPoly::from_expr(&e.bind(Var::M, mf))?;
                let t = p.terms().first()?;
                let (atom, s) = t.shape.log_atoms().into_iter().next()?;
                Some((s.abs(), atom))
            }
        }
    }

    pub fn expr(&self) -> Option<&Expr> {
        match &self.kind {
            AsymptoticKind::Expr(e) => Some(e),
            _ => None,
        }
    }
}

impl fmt::Display for AsymptoticFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            AsymptoticKind::Power => write!(f, "n^(-m)"),
            AsymptoticKind::Exponential => write!(f, "exp(-m*n)"),
            AsymptoticKind::Expr(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScaleKind {
    /// `1 / ln n`.
    Log,
    /// `n^{-1/m}`.
    Power(f64),
    /// `1` for `n <= m`, `0` after.
    Egorov(u32),
    /// `1 / |ln a_m(n)|`.
    FromAsymptotic { m: i64, family: AsymptoticFamily },
    /// Any positive expression in `n`.
    Custom(Expr),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scale {
    pub kind: ScaleKind,
    /// Smallest `n` at which the weight is defined.
    pub domain_start: u64,
}

impl Scale {
    pub fn log() -> Self {
        Scale { kind: ScaleKind::Log, domain_start: 2 }
    }

    pub fn power(m: f64) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::Domain(format!("power scale parameter must be positive, got {m}")));
        }
        Ok(Scale { kind: ScaleKind::Power(m), domain_start: 1 })
    }

    pub fn egorov(m: u32) -> Self {
        Scale { kind: ScaleKind::Egorov(m), domain_start: 1 }
    }

    pub fn from_asymptotic(family: AsymptoticFamily, m: i64) -> Self {
        Scale { kind: ScaleKind::FromAsymptotic { m, family }, domain_start: 2 }
    }

    pub fn custom(expr: Expr, from: u64) -> Result<Self> {
        if expr.mentions(Var::X) || expr.mentions(Var::M) {
            return Err(Error::Invalid(format!("scale `{expr}` may only use n")));
        }
        Ok(Scale { kind: ScaleKind::Custom(expr), domain_start: from.max(1) })
    }

    pub fn is_egorov(&self) -> bool {
        matches!(self.kind, ScaleKind::Egorov(_))
    }

    /// `r_n`.
    pub fn eval(&self, n: f64) -> Result<f64> {
        if !(n >= self.domain_start as f64) {
            return Err(Error::Domain(format!(
                "scale evaluated at n = {n}, below its domain start {}",
                self.domain_start
            )));
        }
        match &self.kind {
            ScaleKind::Log => Ok(1.0 / n.ln()),
            ScaleKind::Power(m) => Ok(n.powf(-1.0 / m)),
            ScaleKind::Egorov(m) => Ok(if n <= *m as f64 { 1.0 } else { 0.0 }),
            ScaleKind::FromAsymptotic { m, family } => {
                let la = family.ln_a(*m, n)?;
                if la.abs() < SINGULAR_LOG {
                    return Err(Error::Singularity(format!("ln a_{m}({n}) vanishes")));
                }
                Ok(1.0 / la.abs())
            }
            ScaleKind::Custom(e) => e.eval(&Vars::n(n)),
        }
    }

    /// `(kappa, atom)` with `r_n ~ kappa / atom(n)`, when known in closed form.
    pub fn reciprocal_atom(&self) -> Option<(f64, Atom)> {
        match &self.kind {
            ScaleKind::Log => Some((1.0, Atom::LogPow(1.0))),
            ScaleKind::Power(m) => Some((1.0, Atom::Pow(1.0 / m))),
            ScaleKind::Egorov(_) => None,
            ScaleKind::FromAsymptotic { m, family } => {
                family.log_atom(*m).filter(|(c, _)| *c > 0.0).map(|(c, a)| (1.0 / c, a))
            }
            ScaleKind::Custom(e) => custom_atom(e),
        }
    }
}

fn is_loglog(e: &Expr) -> bool {
    matches!(e, Expr::Call(Func::Log, inner)
        if matches!(&**inner, Expr::Call(Func::Log, v) if **v == Expr::Var(Var::N)))
}

fn custom_atom(e: &Expr) -> Option<(f64, Atom)> {
    match e {
        Expr::Div(c, den) if is_loglog(den) && !c.mentions(Var::N) => {
            let c = c.eval(&Vars::default()).ok()?;
            (c > 0.0).then_some((c, Atom::LogLog))
        }
        Expr::Pow(base, k) if *k == -1.0 && is_loglog(base) => Some((1.0, Atom::LogLog)),
        _ => {
            let p = ExpPoly::from_expr(e)?;
            let [t] = p.terms() else { return None };
            let c = t.coef;
            if c.im != 0.0 || c.re <= 0.0 || !t.shape.exp_pow.is_empty() || !t.shape.exp_log.is_empty() {
                return None;
            }
            match (t.shape.a, t.shape.b) {
                (a, b) if a < 0.0 && b == 0.0 => Some((c.re, Atom::Pow(-a))),
                (a, b) if a == 0.0 && b < 0.0 => Some((c.re, Atom::LogPow(-b))),
                _ => None,
            }
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ScaleKind::Log => write!(f, "log"),
            ScaleKind::Power(m) => write!(f, "power {m}"),
            ScaleKind::Egorov(m) => write!(f, "egorov {m}"),
            ScaleKind::FromAsymptotic { m, family } => write!(f, "asymptotic \"{family}\" {m}"),
            ScaleKind::Custom(e) => write!(f, "custom \"{e}\" from {}", self.domain_start),
        }
    }
}

/// Default tail threshold for [`check_scale_valid`].
pub const TAIL_THRESHOLD: f64 = 0.9;

#[derive(Clone, Debug, PartialEq)]
pub struct ScaleReport {
    pub positive: bool,
    pub decreasing: bool,
    pub tends_to_zero: bool,
    /// `(n, r_n)` samples; `NaN` marks an evaluation failure.
    pub samples: Vec<(u64, f64)>,
}

impl ScaleReport {
    pub fn valid(&self) -> bool {
        self.positive && self.decreasing && self.tends_to_zero
    }
}

/// Falsification check of "positive, non-increasing, tending to zero" on the
/// doubling schedule up to `sample_budget` (at least 8).
pub fn check_scale_valid(s: &Scale, sample_budget: u64) -> ScaleReport {
    check_scale_valid_with(s, sample_budget, TAIL_THRESHOLD)
}

pub fn check_scale_valid_with(s: &Scale, sample_budget: u64, tail_threshold: f64) -> ScaleReport {
    let budget = sample_budget.max(8).max(s.domain_start * 4);
    let samples: Vec<(u64, f64)> = doubling_schedule(s.domain_start.max(2), budget)
        .into_iter()
        .map(|n| (n, s.eval(n as f64).unwrap_or(f64::NAN)))
        .collect();
    let vals: Vec<f64> = samples.iter().map(|&(_, v)| v).collect();
    let positive = if s.is_egorov() {
        vals.iter().all(|&v| v == 0.0 || v == 1.0)
    } else {
        vals.iter().all(|&v| v > 0.0 && v.is_finite())
    };
    let decreasing = vals.iter().all(|v| !v.is_nan()) && vals.windows(2).all(|w| w[1] <= w[0]);
    let w = (vals.len() / 4).max(1);
    let first_min = vals[..w].iter().cloned().fold(f64::INFINITY, f64::min);
    let last_max = vals[vals.len() - w..].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tends_to_zero = last_max < first_min && last_max < tail_threshold;
    ScaleReport { positive, decreasing, tends_to_zero, samples }
}

#[derive(Clone, Debug, PartialEq)]
enum FamilyKind {
    Power,
    Egorov,
    Asymptotic(AsymptoticFamily),
    Explicit(Vec<Scale>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    IncreasingInM,
    DecreasingInM,
    Neither,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::IncreasingInM => "increasing",
            Direction::DecreasingInM => "decreasing",
            Direction::Neither => "neither",
        })
    }
}

/// Budget used to classify a family's direction at construction.
const DIRECTION_BUDGET: u64 = 1 << 16;

/// Members `r^1, ..., r^count`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleFamily {
    kind: FamilyKind,
    count: u32,
    direction: Direction,
}

impl ScaleFamily {
    fn new(kind: FamilyKind, count: u32) -> Result<Self> {
        if count < 2 {
            return Err(Error::Invalid("a scale family needs at least 2 members".into()));
        }
        let mut fam = ScaleFamily { kind, count, direction: Direction::Neither };
        fam.direction = family_direction(&fam, DIRECTION_BUDGET)?;
        Ok(fam)
    }

    /// `r^m_n = n^{-1/m}`.
    pub fn power(count: u32) -> Result<Self> {
        ScaleFamily::new(FamilyKind::Power, count)
    }

    /// `r^m = chi_[0,m]`.
    pub fn egorov(count: u32) -> Result<Self> {
        ScaleFamily::new(FamilyKind::Egorov, count)
    }

    /// `r^m_n = 1/|ln a_m(n)|`.
    pub fn asymptotic(family: AsymptoticFamily, count: u32) -> Result<Self> {
        ScaleFamily::new(FamilyKind::Asymptotic(family), count)
    }

    pub fn explicit(members: Vec<Scale>) -> Result<Self> {
        let n = members.len() as u32;
        ScaleFamily::new(FamilyKind::Explicit(members), n)
    }

    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn is_egorov(&self) -> bool {
        self.kind == FamilyKind::Egorov
    }

    /// Member `m`, `1 <= m <= count`.
    pub fn member(&self, m: u32) -> Result<Scale> {
        if m == 0 || m > self.count {
            return Err(Error::Domain(format!("family member {m} outside 1..={}", self.count)));
        }
        match &self.kind {
            FamilyKind::Power => Scale::power(m as f64),
            FamilyKind::Egorov => Ok(Scale::egorov(m)),
            FamilyKind::Asymptotic(f) => Ok(Scale::from_asymptotic(f.clone(), m as i64)),
            FamilyKind::Explicit(v) => Ok(v[m as usize - 1].clone()),
        }
    }
}

impl fmt::Display for ScaleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FamilyKind::Power => write!(f, "power {}", self.count),
            FamilyKind::Egorov => write!(f, "egorov {}", self.count),
            FamilyKind::Asymptotic(a) => write!(f, "asymptotic \"{a}\" {}", self.count),
            FamilyKind::Explicit(v) => write!(f, "explicit[{}]", v.len()),
        }
    }
}

/// Pointwise monotonicity in `m` over the grid `m = 1..count`, `n` on the
/// doubling schedule up to `sample_budget`. A grid with only ties counts as increasing.
pub fn family_direction(fam: &ScaleFamily, sample_budget: u64) -> Result<Direction> {
    let members: Vec<Scale> = (1..=fam.count).map(|m| fam.member(m)).collect::<Result<_>>()?;
    let start = members.iter().map(|s| s.domain_start).max().unwrap_or(1).max(2);
    let ns: Vec<u64> = if fam.is_egorov() {
        (1..=fam.count as u64 + 1).chain(doubling_schedule(start, sample_budget)).collect()
    } else {
        doubling_schedule(start, sample_budget.max(8))
    };
    direction_on_grid(&members, &ns)
}

/// Direction classification on an explicit `(members, n)` grid.
pub fn direction_on_grid(members: &[Scale], ns: &[u64]) -> Result<Direction> {
    let (mut up, mut down) = (false, false);
    for pair in members.windows(2) {
        for &n in ns {
            let (a, b) = (pair[0].eval(n as f64)?, pair[1].eval(n as f64)?);
            match b.partial_cmp(&a) {
                Some(Ordering::Greater) => up = true,
                Some(Ordering::Less) => down = true,
                Some(Ordering::Equal) => {}
                None => return Err(Error::Evaluation(format!("scale value at n = {n} is not a number"))),
            }
        }
    }
    Ok(match (up, down) {
        (true, true) => Direction::Neither,
        (false, true) => Direction::DecreasingInM,
        _ => Direction::IncreasingInM,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticReport {
    pub little_o_chain: bool,
    pub inverse_symmetry: bool,
    pub square_domination: bool,
    /// `(m, M)` with `a_M = o(a_m^2)` on the samples.
    pub square_witnesses: Vec<(i64, i64)>,
}

/// A log-ratio tends to `-inf` on the samples: strictly decreasing with a total drop of at least 1.
fn tends_to_minus_inf(d: &[f64]) -> bool {
    d.len() >= 2
        && d.windows(2).all(|w| w[1] < w[0])
        && (d[0] - d[d.len() - 1] >= 1.0 || d[d.len() - 1] == f64::NEG_INFINITY)
}

/// Sampled checks of `a_{m+1} = o(a_m)`, `a_{-m} = 1/a_m` and `a_M = o(a_m^2)` for
/// some `M`, over `m_range` (searching `M` in `[start, 2 end + 1]`).
pub fn check_asymptotic_family(
    fam: &AsymptoticFamily,
    m_range: std::ops::RangeInclusive<i64>,
    sample_budget: u64,
) -> Result<AsymptoticReport> {
    let ns = doubling_schedule(2, sample_budget.max(16));
    let tail: Vec<f64> = ns[ns.len() / 2..].iter().map(|&n| n as f64).collect();
    let ln_a = |m: i64| -> Result<Vec<f64>> { tail.iter().map(|&n| fam.ln_a(m, n)).collect() };
    let (lo, hi) = (*m_range.start(), *m_range.end());

    let mut little_o_chain = hi > lo;
    for m in lo..hi {
        let (a, b) = (ln_a(m)?, ln_a(m + 1)?);
        let d: Vec<f64> = b.iter().zip(&a).map(|(x, y)| x - y).collect();
        if !tends_to_minus_inf(&d) {
            little_o_chain = false;
            break;
        }
    }

    let mut pairs = 0;
    let mut inverse_symmetry = true;
    for m in lo.max(1)..=hi {
        if !m_range.contains(&-m) {
            continue;
        }
        pairs += 1;
        let (a, b) = (ln_a(m)?, ln_a(-m)?);
        if !a.iter().zip(&b).all(|(x, y)| (x + y).abs() <= 1e-9 * x.abs().max(1.0)) {
            inverse_symmetry = false;
        }
    }
    inverse_symmetry &= pairs > 0;

    let mut square_witnesses = Vec::new();
    for m in lo..=hi {
        let a = ln_a(m)?;
        let mut found = None;
        for big in lo..=2 * hi + 1 {
            let d: Vec<f64> = ln_a(big)?.iter().zip(&a).map(|(x, y)| x - 2.0 * y).collect();
            if tends_to_minus_inf(&d) {
                found = Some(big);
                break;
            }
        }
        match found {
            Some(big) => square_witnesses.push((m, big)),
            None => break,
        }
    }
    let square_domination = square_witnesses.len() as i64 == hi - lo + 1;
    Ok(AsymptoticReport { little_o_chain, inverse_symmetry, square_domination, square_witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_eval_examples() {
        assert!((Scale::log().eval(8.0).unwrap() - 0.480898346962988).abs() < 1e-12);
        assert_eq!(Scale::power(2.0).unwrap().eval(16.0).unwrap(), 0.25);
        assert_eq!(Scale::egorov(3).eval(3.0).unwrap(), 1.0);
        assert_eq!(Scale::egorov(3).eval(4.0).unwrap(), 0.0);
        let s = Scale::from_asymptotic(AsymptoticFamily::power(), 2);
        assert!((s.eval(std::f64::consts::E).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn scale_eval_errors() {
        assert!(matches!(Scale::log().eval(1.0), Err(Error::Domain(_))));
        let s = Scale::from_asymptotic(AsymptoticFamily::power(), 0);
        assert!(matches!(s.eval(10.0), Err(Error::Singularity(_))));
        let one = AsymptoticFamily::from_expr(Expr::parse("1 + 0*n*m").unwrap()).unwrap();
        assert!(matches!(Scale::from_asymptotic(one, 1).eval(5.0), Err(Error::Singularity(_))));
        assert!(Scale::power(0.0).is_err());
    }

    #[test]
    fn log_identity_is_exact() {
        for n in 2..2000u32 {
            let n = n as f64;
            assert!((Scale::log().eval(n).unwrap() * n.ln() - 1.0).abs() <= f64::EPSILON);
        }
    }

    #[test]
    fn validity_reports() {
        assert!(check_scale_valid(&Scale::log(), 1_000_000).valid());
        let half = Scale::custom(Expr::parse("0.5").unwrap(), 1).unwrap();
        let r = check_scale_valid(&half, 1000);
        assert!(r.positive && r.decreasing && !r.tends_to_zero);
        let up = Scale::custom(Expr::parse("log(n)").unwrap(), 2).unwrap();
        assert!(!check_scale_valid(&up, 1000).decreasing);
    }

    #[test]
    fn directions() {
        assert_eq!(ScaleFamily::power(6).unwrap().direction(), Direction::IncreasingInM);
        let fam = ScaleFamily::asymptotic(AsymptoticFamily::power(), 6).unwrap();
        assert_eq!(fam.direction(), Direction::DecreasingInM);
        assert_eq!(ScaleFamily::egorov(6).unwrap().direction(), Direction::IncreasingInM);
        let mixed = ScaleFamily::explicit(vec![
            Scale::custom(Expr::parse("1/log(n)").unwrap(), 2).unwrap(),
            Scale::custom(Expr::parse("n^(-0.1)").unwrap(), 2).unwrap(),
        ])
        .unwrap();
        assert_eq!(mixed.direction(), Direction::Neither);
    }

    #[test]
    fn asymptotic_family_examples() {
        let r = check_asymptotic_family(&AsymptoticFamily::power(), -3..=3, 1 << 20).unwrap();
        assert!(r.little_o_chain && r.inverse_symmetry && r.square_domination);
        assert!(r.square_witnesses.contains(&(2, 5)));
        let r = check_asymptotic_family(&AsymptoticFamily::exponential(), -3..=3, 1 << 20).unwrap();
        assert!(r.little_o_chain && r.inverse_symmetry && r.square_domination);
        let ones = AsymptoticFamily::from_expr(Expr::parse("1 + 0*m").unwrap()).unwrap();
        let r = check_asymptotic_family(&ones, -3..=3, 1 << 20).unwrap();
        assert!(!r.little_o_chain);
    }

    #[test]
    fn reciprocal_atoms() {
        assert_eq!(Scale::log().reciprocal_atom(), Some((1.0, Atom::LogPow(1.0))));
        let s = Scale::from_asymptotic(AsymptoticFamily::power(), 3);
        assert_eq!(s.reciprocal_atom(), Some((1.0 / 3.0, Atom::LogPow(1.0))));
        let ll = Scale::custom(Expr::parse("1/log(log(n))").unwrap(), 16).unwrap();
        assert_eq!(ll.reciprocal_atom(), Some((1.0, Atom::LogLog)));
        let sq = Scale::custom(Expr::parse("2*n^(-0.5)").unwrap(), 1).unwrap();
        assert_eq!(sq.reciprocal_atom(), Some((2.0, Atom::Pow(0.5))));
        let from_expr = AsymptoticFamily::from_expr(Expr::parse("n^(-m)").unwrap()).unwrap();
        assert_eq!(Scale::from_asymptotic(from_expr, 2).reciprocal_atom(), Some((0.5, Atom::LogPow(1.0))));
        let odd = Scale::custom(Expr::parse("1/(log(n) + sin(n))").unwrap(), 2).unwrap();
        assert_eq!(odd.reciprocal_atom(), None);
    }

    #[test]
    fn schedules() {
        assert_eq!(doubling_schedule(2, 40), vec![2, 4, 8, 16, 32]);
        assert_eq!(doubling_schedule(16, 64), vec![16, 32, 64]);
        assert_eq!(doubling_schedule(5, 20), vec![5, 8, 16]);
        let g = geometric_schedule(2, 1_000_000, 24);
        assert_eq!(g.first(), Some(&2));
        assert_eq!(g.last(), Some(&1_000_000));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
