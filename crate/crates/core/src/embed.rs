//! Embeddings into the sequence algebra: constants, delta sequences
//! `delta_n(x) = n phi(n x)` and convolutions `f * delta_n`.

use std::sync::Arc;

use crate::basealg::{seminorm_eval, Element, NumericFn, SeminormFamily};
use crate::error::{Error, Result};
use crate::expr::{Expr, Func, Var, Vars};
use crate::growth::{Growth, GrowthCertificate, IndexSel};
use crate::jet::jet_eval;
use crate::scale::{geometric_schedule, Scale};
use crate::seqspace::{classify, Budget, Mode, Seq, Verdict, Window, Witness};

/// Absolute tolerance of the adaptive Simpson rule.
pub const QUAD_TOL: f64 = 1e-10;

/// Highest derivative order carried by delta certificates.
pub const DELTA_CERT_ORDER: u32 = 8;

const MAX_DEPTH: u32 = 48;

fn simpson_step(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm)?, f(rm)?);
    let h = b - a;
    let left = h / 12.0 * (fa + 4.0 * flm + fm);
    let right = h / 12.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Evaluation(format!("quadrature did not converge on [{a}, {b}]")));
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
}

/// `int_a^b f` by adaptive Simpson with absolute tolerance `tol`.
pub fn integrate(f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (fa, fm, fb) = (f(a)?, f(0.5 * (a + b))?, f(b)?);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let v = simpson_step(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)?;
    if !v.is_finite() {
        return Err(Error::Evaluation(format!("quadrature on [{a}, {b}] produced {v}")));
    }
    Ok(v)
}

/// `int f` over `[a, b]` split at the interior `cuts`.
pub fn integrate_split(f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64, cuts: &[f64], tol: f64) -> Result<f64> {
    let mut pts: Vec<f64> = cuts.iter().cloned().filter(|c| *c > a && *c < b).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.insert(0, a);
    pts.push(b);
    let share = tol / (pts.len() - 1) as f64;
    pts.windows(2).map(|w| integrate(f, w[0], w[1], share)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MollifierKind {
    /// `pi^{-1/2} exp(-x^2)`.
    Gaussian,
    /// `(315/256) (1 - x^2)^4` on `[-1, 1]`.
    Bump,
}

/// A mollifier profile `phi` with its effective support `[-L, L]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mollifier {
    pub kind: MollifierKind,
    pub profile: Expr,
    pub support: f64,
    /// Half-width of the sup-grid refinement window, in units of `1/n`.
    window: f64,
}

impl Mollifier {
    pub fn gaussian() -> Self {
        Mollifier {
            kind: MollifierKind::Gaussian,
            profile: Expr::parse("exp(-x^2)/sqrt(pi)").expect("valid profile"),
            support: 12.0,
            window: 8.0,
        }
    }

    pub fn bump() -> Self {
        Mollifier {
            kind: MollifierKind::Bump,
            profile: Expr::Const(315.0 / 256.0) * Expr::call(Func::Bump, Expr::x()),
            support: 1.0,
            window: 1.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            MollifierKind::Gaussian => "gaussian",
            MollifierKind::Bump => "bump",
        }
    }

    pub fn phi(&self, u: f64) -> Result<f64> {
        self.profile.eval(&Vars::x(u))
    }

    /// `int_{-L}^{L} phi`.
    pub fn mass(&self) -> Result<f64> {
        integrate(&|u| self.phi(u), -self.support, self.support, QUAD_TOL)
    }

    pub fn is_normalized(&self) -> Result<bool> {
        Ok((self.mass()? - 1.0).abs() <= 1e-8)
    }

    /// `sup |phi^(k)|` on a fine grid over the support.
    pub fn derivative_sup(&self, k: u32) -> Result<f64> {
        let l = self.support.min(8.0);
        let steps = 1 << 14;
        let mut best = 0.0f64;
        for i in 0..=steps {
            let u = -l + 2.0 * l * i as f64 / steps as f64;
            best = best.max(jet_eval(&self.profile, u, None, k as usize)?.derivative(k as usize).abs());
        }
        Ok(best)
    }
}

/// The constant sequence `(e)_n`.
pub fn embed_constant(label: impl Into<String>, e: Element) -> Seq {
    Seq::constant(label, e)
}

/// `delta_n(x) = n phi(n x)`, certified with `p^mu_nu(delta_n) ~ sup|phi^(nu)| n^{nu+1}`.
pub fn make_delta(m: &Mollifier) -> Result<Seq> {
    if !m.is_normalized()? {
        return Err(Error::Invalid(format!("mollifier `{}` does not integrate to 1", m.profile)));
    }
    let nx = Expr::n() * Expr::x();
    let expr = Expr::n() * m.profile.substitute(Var::X, &nx);
    let mut cert = GrowthCertificate::default().shifting_under_derivative();
    for nu in 0..=DELTA_CERT_ORDER {
        let c = m.derivative_sup(nu)?;
        if c > 0.0 {
            cert = cert.with(IndexSel { mu: None, nu: Some(nu) }, Growth::power(c, nu as f64 + 1.0));
        }
    }
    let window = Window { center: 0.0, half_width: m.window, shrink: 1.0 };
    Ok(Seq::smooth(format!("delta[{}]", m.name()), expr, vec![window]).with_certificate(cert))
}

/// A function given piece by piece: `pieces[i]` applies on `[breaks[i-1], breaks[i])`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseTable {
    pub breaks: Vec<f64>,
    pub pieces: Vec<Expr>,
}

impl PiecewiseTable {
    pub fn new(breaks: Vec<f64>, pieces: Vec<Expr>) -> Result<Self> {
        if pieces.len() != breaks.len() + 1 || breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("a table needs increasing breakpoints and one more piece".into()));
        }
        if pieces.iter().any(|p| p.mentions(Var::N) || p.mentions(Var::M)) {
            return Err(Error::Invalid("table pieces may only use x".into()));
        }
        Ok(PiecewiseTable { breaks, pieces })
    }

    /// The unit step `H(x)`.
    pub fn heaviside() -> Self {
        PiecewiseTable { breaks: vec![0.0], pieces: vec![Expr::Const(0.0), Expr::Const(1.0)] }
    }

    pub fn piece_index(&self, x: f64) -> usize {
        self.breaks.iter().take_while(|b| x >= **b).count()
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.pieces[self.piece_index(x)].eval(&Vars::x(x))
    }
}

/// What to convolve with a delta sequence.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvSource {
    Expr(Expr),
    Table(PiecewiseTable),
}

/// `f_n = f * delta_n`, evaluated pointwise by quadrature over the kernel support.
/// The result is a sampled function, so only order-0 seminorms apply.
pub fn embed_by_convolution(f: &ConvSource, m: &Mollifier) -> Result<Seq> {
    if !m.is_normalized()? {
        return Err(Error::Invalid(format!("mollifier `{}` does not integrate to 1", m.profile)));
    }
    if let ConvSource::Expr(e) = f {
        if e.mentions(Var::N) || e.mentions(Var::M) {
            return Err(Error::Invalid(format!("convolved function `{e}` may only use x")));
        }
    }
    let (src, moll) = (Arc::new(f.clone()), Arc::new(m.clone()));
    let label = match f {
        ConvSource::Expr(e) => format!("conv[{e}, {}]", m.name()),
        ConvSource::Table(t) if *t == PiecewiseTable::heaviside() => format!("conv[heaviside, {}]", m.name()),
        ConvSource::Table(_) => format!("conv[table, {}]", m.name()),
    };
    let inner = label.clone();
    Ok(Seq::generic(label, 1, move |n| {
        let (src, moll) = (src.clone(), moll.clone());
        let nf = n as f64;
        Ok(Element::Numeric(NumericFn::new(format!("{inner}_{n}"), move |x| {
            convolve_at(&src, &moll, nf, x)
        })))
    }))
}

/// `(f * delta_n)(x) = int f(x - u/n) phi(u) du`.
pub fn convolve_at(f: &ConvSource, m: &Mollifier, n: f64, x: f64) -> Result<f64> {
    let l = m.support;
    match f {
        ConvSource::Expr(e) => {
            integrate(&|u| Ok(e.eval(&Vars::x(x - u / n))? * m.phi(u)?), -l, l, QUAD_TOL)
        }
        ConvSource::Table(t) => {
            // Pick the piece once per sub-interval so rounding at a jump cannot
            // leak the neighbouring piece into it.
            let mut pts: Vec<f64> = t.breaks.iter().map(|b| n * (x - b)).filter(|c| *c > -l && *c < l).collect();
            pts.sort_by(f64::total_cmp);
            pts.insert(0, -l);
            pts.push(l);
            let share = QUAD_TOL / (pts.len() - 1) as f64;
            let mut total = 0.0;
            for w in pts.windows(2) {
                let piece = &t.pieces[t.piece_index(x - 0.5 * (w[0] + w[1]) / n)];
                total += integrate(&|u| Ok(piece.eval(&Vars::x(x - u / n))? * m.phi(u)?), w[0], w[1], share)?;
            }
            Ok(total)
        }
    }
}

/// `int delta_n psi = int phi(u) psi(u/n) du`.
pub fn delta_pairing(m: &Mollifier, n: f64, psi: &dyn Fn(f64) -> Result<f64>, cuts: &[f64]) -> Result<f64> {
    let l = m.support;
    let cuts: Vec<f64> = cuts.iter().map(|c| c * n).collect();
    integrate_split(&|u| Ok(m.phi(u)? * psi(u / n)?), -l, l, &cuts, QUAD_TOL)
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnboundedReport {
    /// `(n, p^mu_0(f_n))` on the schedule.
    pub sup_values: Vec<(u64, f64)>,
    /// Strictly increasing on the tail half of the schedule.
    pub monotone_growth: bool,
    /// Strictly increasing on the whole schedule.
    pub strict_everywhere: bool,
    /// Largest value seen.
    pub exceeds: f64,
}

/// Samples `p^mu_0(f_n)`: for a delta sequence no bound survives the schedule.
pub fn check_unbounded(f: &Seq, p: &SeminormFamily, mu: u32, budget: &Budget) -> Result<UnboundedReport> {
    let ns = geometric_schedule(f.domain_start().max(2), budget.n_max, budget.points);
    let sup_values: Vec<(u64, f64)> = ns
        .iter()
        .map(|&n| Ok((n, seminorm_eval(p, mu, 0, &f.element(n)?)?)))
        .collect::<Result<_>>()?;
    let vals: Vec<f64> = sup_values.iter().map(|s| s.1).collect();
    let strictly = |v: &[f64]| v.len() >= 2 && v.windows(2).all(|w| w[1] > w[0]);
    Ok(UnboundedReport {
        monotone_growth: strictly(&vals[vals.len() / 2..]),
        strict_everywhere: strictly(&vals),
        exceeds: vals.iter().cloned().fold(0.0, f64::max),
        sup_values,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityReport {
    pub table: Vec<Witness>,
    pub verdict: Verdict,
    pub admissible: bool,
    /// `(mu, nu, A^mu_nu)` with a nonzero value.
    pub nonzero_witness: Option<(u32, u32, f64)>,
}

/// A scale is admissible for `f` when every sampled `A^mu_nu` is finite and one is nonzero.
pub fn check_scale_admissible(f: &Seq, p: &SeminormFamily, r: &Scale, mode: Mode, budget: &Budget) -> Result<AdmissibilityReport> {
    let c = classify(f, p, r, mode, budget)?;
    let nonzero_witness = c
        .witnesses
        .iter()
        .find(|w| w.estimate.is_nonzero() && w.estimate.is_finite())
        .map(|w| (w.mu, w.nu, w.estimate.value));
    Ok(AdmissibilityReport {
        admissible: c.verdict == Verdict::Moderate && nonzero_witness.is_some(),
        verdict: c.verdict,
        nonzero_witness,
        table: c.witnesses,
    })
}

/// Numerical replay of the argument that a delta sequence is unbounded.
#[derive(Clone, Debug, PartialEq)]
pub struct UnboundednessReplay {
    /// Largest sup of `delta_n` over the sampled `n`.
    pub c: f64,
    /// `psi(0) = C + 1`.
    pub psi_at_zero: f64,
    /// `int psi < 1`.
    pub psi_integral: f64,
    /// `(n, int delta_n psi)`, each at most `C` in absolute value.
    pub pairings: Vec<(u64, f64)>,
    /// First doubling `N` with `int delta_N psi > C`, and `sup delta_N` there.
    pub escape: Option<(u64, f64, f64)>,
}

impl UnboundednessReplay {
    pub fn holds(&self) -> bool {
        self.pairings.iter().all(|(_, v)| v.abs() <= self.c)
            && self.psi_at_zero == self.c + 1.0
            && self.psi_integral < 1.0
            && self.escape.map_or(false, |(_, pair, sup)| pair > self.c && sup > self.c)
    }
}

/// With `C = max_n sup delta_n` over `ns`, a triangle `psi` of height `C + 1`
/// and mass `1/2` pairs to at most `C` with every sampled `delta_n`, yet the
/// pairings tend to `psi(0) = C + 1`, so some later `delta_N` exceeds `C`.
pub fn replay_unboundedness(m: &Mollifier, ns: &[u64], n_limit: u64) -> Result<UnboundednessReplay> {
    let delta = make_delta(m)?;
    let p = SeminormFamily::sup();
    let mut c = 0.0f64;
    for &n in ns {
        c = c.max(seminorm_eval(&p, 1, 0, &delta.element(n)?)?);
    }
    let height = c + 1.0;
    let h = 0.5 / height;
    let psi = move |x: f64| Ok(height * (1.0 - x.abs() / h).max(0.0));
    let cuts = [-h, 0.0, h];
    let pairings: Vec<(u64, f64)> = ns
        .iter()
        .map(|&n| Ok((n, delta_pairing(m, n as f64, &psi, &cuts)?)))
        .collect::<Result<_>>()?;
    let mut escape = None;
    let mut n = ns.iter().cloned().max().unwrap_or(1).max(1);
    while n <= n_limit {
        let v = delta_pairing(m, n as f64, &psi, &cuts)?;
        if v > c {
            let sup = seminorm_eval(&p, 1, 0, &delta.element(n)?)?;
            escape = Some((n, v, sup));
            break;
        }
        n *= 2;
    }
    Ok(UnboundednessReplay { c, psi_at_zero: psi(0.0)?, psi_integral: height * h, pairings, escape })
}
