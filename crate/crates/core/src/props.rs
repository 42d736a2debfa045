//! Seeded randomized property suites over certificate-backed sequences.
//!
//! Instances are drawn sequentially from a ChaCha8 stream and checked in
//! parallel; results come back in draw order, so a report depends only on the
//! seed and the instance count.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::basealg::{Element, SeminormFamily};
use crate::error::{Error, Result};
use crate::expr::{Expr, Func, Vars};
use crate::growth::{ExpPoly, GrowthCertificate, Shape};
use crate::jet::jet_eval;
use crate::scale::{Scale, ScaleFamily};
use crate::scalefam::{family_ideal_check, family_membership};
use crate::seqspace::{
    classify, distance, equal_in_quotient, ultranorm, ultranorm_tailfit, Budget, Equality, Mode, Seq, UltranormEstimate,
    Verdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Ultrametric,
    Submultiplicative,
    Scalar,
    TailFit,
    Discreteness,
    Ideal,
    Ring,
    Egorov,
    FamilyIdeal,
    Jet,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Ultrametric,
        Suite::Submultiplicative,
        Suite::Scalar,
        Suite::TailFit,
        Suite::Discreteness,
        Suite::Ideal,
        Suite::Ring,
        Suite::Egorov,
        Suite::FamilyIdeal,
        Suite::Jet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ultrametric => "ultrametric",
            Suite::Submultiplicative => "submultiplicative",
            Suite::Scalar => "scalar",
            Suite::TailFit => "tailfit",
            Suite::Discreteness => "discreteness",
            Suite::Ideal => "ideal",
            Suite::Ring => "ring",
            Suite::Egorov => "egorov",
            Suite::FamilyIdeal => "family-ideal",
            Suite::Jet => "jet",
        }
    }

    /// Instance count used when none is given.
    pub fn default_instances(self) -> usize {
        match self {
            Suite::Ultrametric | Suite::Submultiplicative | Suite::Scalar => 1000,
            Suite::TailFit => 50,
            Suite::Discreteness => 100,
            Suite::Ideal | Suite::Ring | Suite::Jet => 500,
            Suite::Egorov | Suite::FamilyIdeal => 200,
        }
    }

    fn salt(self) -> u64 {
        Suite::ALL.iter().position(|s| *s == self).unwrap() as u64 + 1
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown property suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub instances: usize,
    /// Instances where the property's hypothesis did not apply.
    pub vacuous: usize,
    /// One line per violated instance.
    pub violations: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

enum Check {
    Pass,
    Vacuous,
    Fail(String),
}

/// Runs `instances` draws of `suite` from the stream seeded by `seed`.
pub fn run_suite(suite: Suite, seed: u64, instances: usize, budget: &Budget) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ suite.salt().wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let outcomes: Vec<Check> = match suite {
        Suite::Ultrametric => par_check((0..instances).map(|_| (random_scale(&mut rng), random_seq(&mut rng), random_seq(&mut rng))).collect(), |(r, f, g)| {
            let (ef, eg, efg) = (exponent(f, r, budget)?, exponent(g, r, budget)?, exponent(&f.add(g)?, r, budget)?);
            Ok(leq(efg, ef.max(eg), format!("{} + {} under {r}: {efg} > max({ef}, {eg})", f.label(), g.label())))
        })?,
        Suite::Submultiplicative => par_check((0..instances).map(|_| (random_scale(&mut rng), random_seq(&mut rng), random_seq(&mut rng))).collect(), |(r, f, g)| {
            let (ef, eg, efg) = (exponent(f, r, budget)?, exponent(g, r, budget)?, exponent(&f.mul(g)?, r, budget)?);
            if ef.is_infinite() && eg.is_infinite() && ef != eg {
                return Ok(Check::Vacuous);
            }
            Ok(leq(efg, ef + eg, format!("{} * {} under {r}: {efg} > {ef} + {eg}", f.label(), g.label())))
        })?,
        Suite::Scalar => par_check((0..instances).map(|_| (random_scale(&mut rng), random_seq(&mut rng), random_lambda(&mut rng))).collect(), |(r, f, l)| {
            let (ef, el) = (exponent(f, r, budget)?, exponent(&f.scalar_mul(*l)?, r, budget)?);
            Ok(if same(ef, el) { Check::Pass } else { Check::Fail(format!("{l} {} under {r}: {el} != {ef}", f.label())) })
        })?,
        Suite::TailFit => par_check((0..instances).map(|_| random_polynomial_growth(&mut rng)).collect(), |f| {
            let r = Scale::log();
            let p = SeminormFamily::AbsoluteValue;
            let (c, t) = (ultranorm(f, &p, 0, 0, &r, budget)?, ultranorm_tailfit(f, &p, 0, 0, &r, budget)?);
            Ok(if t.confident && (c.exponent - t.exponent).abs() <= 1e-2 {
                Check::Pass
            } else {
                Check::Fail(format!("{}: closed form {} vs tail fit {}", f.label(), c.exponent, t.exponent))
            })
        })?,
        Suite::Discreteness => par_check((0..instances).map(|_| random_scalar_pair(&mut rng)).collect(), |(a, b)| {
            let (fa, fb) = (Seq::constant("a", Element::Scalar(*a)), Seq::constant("b", Element::Scalar(*b)));
            let p = SeminormFamily::AbsoluteValue;
            let d = distance(&fa, &fb, &p, 0, 0, &Scale::log(), budget)?.value;
            let d0 = distance(&fa, &fa, &p, 0, 0, &Scale::log(), budget)?.value;
            Ok(if d == 1.0 && d0 == 0.0 { Check::Pass } else { Check::Fail(format!("d({a}, {b}) = {d}, d(a, a) = {d0}")) })
        })?,
        Suite::Ideal => par_check((0..instances).map(|_| (random_negligible(&mut rng), random_moderate(&mut rng))).collect(), |(k, f)| {
            let v = classify(&k.mul(f)?, &SeminormFamily::AbsoluteValue, &Scale::log(), Mode::Projective, budget)?.verdict;
            Ok(if v == Verdict::Negligible { Check::Pass } else { Check::Fail(format!("{} * {}: {v}", k.label(), f.label())) })
        })?,
        Suite::Ring => par_check(
            (0..instances)
                .map(|_| [random_moderate(&mut rng), random_moderate(&mut rng), random_moderate(&mut rng), random_negligible(&mut rng)])
                .collect(),
            |[f, g, h, k]| ring_check(f, g, h, k, budget),
        )?,
        Suite::Egorov => {
            let fam = ScaleFamily::egorov(6)?;
            par_check((0..instances).map(|_| random_egorov_case(&mut rng)).collect(), move |(f, stationary)| {
                let v = family_membership(f, &fam, &SeminormFamily::AbsoluteValue, 0, 0, 6, budget)?;
                let in_k = v.in_k.holds();
                Ok(if in_k == Some(*stationary) && v.in_f.holds() == Some(true) {
                    Check::Pass
                } else {
                    Check::Fail(format!("{}: stationary {stationary}, in_K {}, in_F {}", f.label(), v.in_k, v.in_f))
                })
            })?
        }
        Suite::FamilyIdeal => {
            let cases = family_cases()?;
            let draws: Vec<(usize, Seq, Seq)> =
                (0..instances * cases.len()).map(|i| random_family_pair(&mut rng, i % cases.len())).collect();
            par_check(draws, |(case, k, f)| {
                let fam = &cases[*case];
                let r = family_ideal_check(k, f, fam, &SeminormFamily::AbsoluteValue, 0, 0, fam.count(), budget)?;
                Ok(if r.passed() && !r.flagged {
                    Check::Pass
                } else {
                    Check::Fail(format!("{} * {} in `{fam}`: {:?}, flagged {}", k.label(), f.label(), r.outcome, r.flagged))
                })
            })?
        }
        Suite::Jet => par_check((0..instances).map(|_| random_jet_case(&mut rng)).collect(), |(e, x)| jet_check(e, *x))?,
    };
    let mut report = SuiteReport { suite, seed, instances: outcomes.len(), vacuous: 0, violations: vec![] };
    for o in outcomes {
        match o {
            Check::Pass => {}
            Check::Vacuous => report.vacuous += 1,
            Check::Fail(msg) => report.violations.push(msg),
        }
    }
    Ok(report)
}

fn par_check<T: Sync>(items: Vec<T>, check: impl Fn(&T) -> Result<Check> + Sync + Send) -> Result<Vec<Check>> {
    items.par_iter().map(check).collect()
}

fn exponent(f: &Seq, r: &Scale, budget: &Budget) -> Result<f64> {
    let e: UltranormEstimate = ultranorm(f, &SeminormFamily::AbsoluteValue, 0, 0, r, budget)?;
    if !e.confident {
        return Err(Error::Evaluation(format!("no confident ultranorm for `{}` under {r}", f.label())));
    }
    Ok(e.exponent)
}

fn tol(v: f64) -> f64 {
    1e-9 * v.abs().max(1.0)
}

fn leq(a: f64, b: f64, msg: String) -> Check {
    if a <= b || (b.is_finite() && a <= b + tol(b)) {
        Check::Pass
    } else {
        Check::Fail(msg)
    }
}

fn same(a: f64, b: f64) -> bool {
    a == b || (a.is_finite() && (a - b).abs() <= tol(a))
}

fn ring_check(f: &Seq, g: &Seq, h: &Seq, k: &Seq, budget: &Budget) -> Result<Check> {
    let p = SeminormFamily::AbsoluteValue;
    let r = Scale::log();
    let eq = |a: &Seq, b: &Seq| equal_in_quotient(a, b, &p, &r, Mode::Projective, budget);
    let lhs = f.mul(&g.add(h)?)?.add(k)?;
    let rhs = f.mul(g)?.add(&f.mul(h)?)?;
    if eq(&lhs, &rhs)? != Equality::Equal {
        return Ok(Check::Fail(format!("distributivity: {} vs {}", lhs.label(), rhs.label())));
    }
    let lhs = f.mul(g)?.mul(h)?;
    let rhs = f.mul(&g.mul(h)?)?.sub(k)?;
    if eq(&lhs, &rhs)? != Equality::Equal {
        return Ok(Check::Fail(format!("associativity: {} vs {}", lhs.label(), rhs.label())));
    }
    if eq(&f.add(k)?, f)? != Equality::Equal || eq(&f.mul(g)?, &g.mul(f)?)? != Equality::Equal {
        return Ok(Check::Fail(format!("class of {} not stable", f.label())));
    }
    Ok(Check::Pass)
}

fn jet_check(e: &Expr, x: f64) -> Result<Check> {
    let jet = match jet_eval(e, x, None, 2) {
        Ok(j) => j,
        Err(_) => return Ok(Check::Vacuous),
    };
    let f = |t: f64| e.eval(&Vars::x(t));
    for k in [1, 2] {
        let Ok((fd, err)) = central_difference(&f, x, k) else {
            return Ok(Check::Vacuous);
        };
        let j = jet.derivative(k as usize);
        let scale = j.abs().max(fd.abs()).max(1.0);
        // near a pole the differences cannot resolve the function: no oracle
        if !(err <= 1e-8 * fd.abs().max(1.0)) {
            return Ok(Check::Vacuous);
        }
        if !(j - fd).abs().le(&(1e-6 * scale)) {
            return Ok(Check::Fail(format!("{e} at x = {x}: order {k} jet {j} vs difference {fd}")));
        }
    }
    Ok(Check::Pass)
}

/// Ridders extrapolation of a central difference quotient `d(h)` whose error
/// is even in `h`: steps shrink by 1.4 from `h0` and the tableau stops once
/// its error estimate grows. Returns the estimate and that error.
fn ridders_from(d: &dyn Fn(f64) -> Result<f64>, h0: f64) -> Result<(f64, f64)> {
    const SHRINK: f64 = 1.4;
    const LEVELS: usize = 12;
    let s2 = SHRINK * SHRINK;
    let mut h = h0;
    let mut prev = vec![d(h)?];
    let (mut best, mut err) = (prev[0], f64::INFINITY);
    for _ in 1..LEVELS {
        h /= SHRINK;
        let mut row = vec![d(h)?];
        let mut fac = s2;
        for j in 1..=prev.len() {
            let v = (row[j - 1] * fac - prev[j - 1]) / (fac - 1.0);
            fac *= s2;
            let e = (v - row[j - 1]).abs().max((v - prev[j - 1]).abs());
            if e <= err {
                (best, err) = (v, e);
            }
            row.push(v);
        }
        let last = prev.len();
        if (row[last] - prev[last - 1]).abs() >= 2.0 * err {
            break;
        }
        prev = row;
    }
    Ok((best, err))
}

/// [`ridders_from`] over a few starting steps, keeping the smallest error estimate.
fn ridders(d: &dyn Fn(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let mut best = (f64::NAN, f64::INFINITY);
    for h0 in [0.4, 0.1, 0.025, 0.00625] {
        let r = ridders_from(d, h0)?;
        if r.1 < best.1 {
            best = r;
        }
    }
    Ok(best)
}

/// First (`order = 1`) or second derivative by Ridders extrapolation of
/// central differences, with the tableau's error estimate.
pub fn central_difference(f: &dyn Fn(f64) -> Result<f64>, x: f64, order: u32) -> Result<(f64, f64)> {
    match order {
        1 => ridders(&|h| Ok((f(x + h)? - f(x - h)?) / (2.0 * h))),
        2 => {
            let fx = f(x)?;
            ridders(&|h| Ok((f(x + h)? - 2.0 * fx + f(x - h)?) / (h * h)))
        }
        _ => Err(Error::Invalid(format!("no difference rule of order {order}"))),
    }
}

pub fn central_first(f: &dyn Fn(f64) -> Result<f64>, x: f64) -> Result<f64> {
    Ok(central_difference(f, x, 1)?.0)
}

pub fn central_second(f: &dyn Fn(f64) -> Result<f64>, x: f64) -> Result<f64> {
    Ok(central_difference(f, x, 2)?.0)
}

/// Log scale or `n^{-1/m}` for `m = 1..=3`.
pub fn random_scale(rng: &mut ChaCha8Rng) -> Scale {
    match rng.gen_range(0..4) {
        0 => Scale::log(),
        m => Scale::power(m as f64).expect("positive parameter"),
    }
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, xs: &[T]) -> T {
    xs[rng.gen_range(0..xs.len())]
}

fn random_coef(rng: &mut ChaCha8Rng) -> f64 {
    let c = 10f64.powf(rng.gen_range(-1.0..1.0));
    if rng.gen_bool(0.5) {
        c
    } else {
        -c
    }
}

/// Any shape: powers, logs and exponentials of either sign.
pub fn random_shape(rng: &mut ChaCha8Rng) -> Shape {
    let mut shape = Shape { a: rng.gen_range(-4..=4) as f64, b: rng.gen_range(-2..=2) as f64, ..Shape::default() };
    if rng.gen_bool(0.4) {
        shape.exp_pow.push((pick(rng, &[0.25, 0.5, 1.0, 1.5]), random_coef(rng)));
    }
    if rng.gen_bool(0.2) {
        shape.exp_log.push((pick(rng, &[0.5, 2.0]), random_coef(rng)));
    }
    shape
}

fn poly_from(rng: &mut ChaCha8Rng, mut shape: impl FnMut(&mut ChaCha8Rng) -> Shape) -> ExpPoly {
    let terms = rng.gen_range(1..=3);
    let mut p = ExpPoly::zero();
    while p.is_zero() {
        for _ in 0..terms {
            let s = shape(rng);
            p = p.add(&ExpPoly::term(Complex64::new(random_coef(rng), 0.0), s));
        }
    }
    p
}

fn certified(label: String, p: ExpPoly) -> Seq {
    let cert = GrowthCertificate::uniform(p.dominant().expect("nonzero"));
    Seq::exact(label, p).with_certificate(cert)
}

fn poly_label(p: &ExpPoly) -> String {
    p.to_expr().to_string()
}

/// A certificate-backed scalar sequence with one to three terms.
pub fn random_seq(rng: &mut ChaCha8Rng) -> Seq {
    let p = poly_from(rng, random_shape);
    certified(poly_label(&p), p)
}

/// Moderate under the log scale: no exponential faster than `ln n`.
pub fn random_moderate(rng: &mut ChaCha8Rng) -> Seq {
    let p = poly_from(rng, |rng| {
        let mut s = Shape { a: rng.gen_range(-4..=4) as f64, b: rng.gen_range(-2..=2) as f64, ..Shape::default() };
        if rng.gen_bool(0.2) {
            s.exp_log.push((0.5, random_coef(rng)));
        }
        s
    });
    certified(poly_label(&p), p)
}

/// Negligible under the log scale: every term carries a decaying exponential.
pub fn random_negligible(rng: &mut ChaCha8Rng) -> Seq {
    let p = poly_from(rng, |rng| {
        let mut s = Shape { a: rng.gen_range(-4..=4) as f64, b: rng.gen_range(-2..=2) as f64, ..Shape::default() };
        let decay = -rng.gen_range(0.1..3.0);
        if rng.gen_bool(0.7) {
            s.exp_pow.push((pick(rng, &[0.25, 0.5, 1.0]), decay));
        } else {
            s.exp_log.push((2.0, decay));
        }
        s
    });
    certified(poly_label(&p), p)
}

/// `C n^a` plus a term at least one power lower, so the log-scale tail is
/// linear in `1/ln n` up to a fast-decaying correction.
pub fn random_polynomial_growth(rng: &mut ChaCha8Rng) -> Seq {
    let a = rng.gen_range(-3..=4) as f64;
    let mut p = ExpPoly::term(Complex64::new(10f64.powf(rng.gen_range(-1.0..1.0)), 0.0), Shape::power(a));
    if rng.gen_bool(0.5) {
        let lower = a - rng.gen_range(1..=3) as f64;
        p = p.add(&ExpPoly::term(Complex64::new(random_coef(rng), 0.0), Shape::power(lower)));
    }
    Seq::exact(poly_label(&p), p)
}

fn random_lambda(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(10f64.powf(rng.gen_range(-3.0..3.0)), rng.gen_range(0.0..std::f64::consts::TAU))
}

fn random_scalar_pair(rng: &mut ChaCha8Rng) -> (Complex64, Complex64) {
    let a = Complex64::new(rng.gen_range(-100.0..100.0), if rng.gen_bool(0.3) { rng.gen_range(-10.0..10.0) } else { 0.0 });
    let mut b = a;
    while b == a {
        b = Complex64::new(rng.gen_range(-100.0..100.0), 0.0);
    }
    (a, b)
}

/// A sequence with `head` arbitrary leading terms and then either a zero tail
/// or a tail with a nonzero entry in every 8 consecutive indices.
pub fn random_egorov_case(rng: &mut ChaCha8Rng) -> (Seq, bool) {
    let head_len = rng.gen_range(0..=5u64);
    let head: Vec<f64> = (0..head_len).map(|_| random_coef(rng)).collect();
    let stationary = rng.gen_bool(0.5);
    let (period, phase, amp) = {
        let period = rng.gen_range(1..=8u64);
        (period, rng.gen_range(0..period), random_coef(rng))
    };
    let decay = rng.gen_range(0.0..2.0);
    let label = if stationary {
        format!("head{head_len}+zeros")
    } else {
        format!("head{head_len}+period{period}")
    };
    let seq = Seq::generic(label, 1, move |n| {
        let v = if n <= head_len {
            head[n as usize - 1]
        } else if stationary || n % period != phase {
            0.0
        } else {
            amp * (n as f64).powf(-decay)
        };
        Ok(Element::real(v))
    });
    (seq, stationary)
}

/// Power family (increasing), a decreasing power family, and Egorov.
pub fn family_cases() -> Result<Vec<ScaleFamily>> {
    Ok(vec![
        ScaleFamily::power(6)?,
        ScaleFamily::explicit((1..=4).map(|m| Scale::power(1.0 / m as f64)).collect::<Result<_>>()?)?,
        ScaleFamily::egorov(6)?,
    ])
}

fn exp_term(rng: &mut ChaCha8Rng, ts: &[f64], decaying: bool) -> ExpPoly {
    let t = pick(rng, ts);
    let s = if decaying { -rng.gen_range(0.1..3.0) } else { random_coef(rng) };
    let shape = Shape { a: rng.gen_range(-3..=3) as f64, exp_pow: vec![(t, s)], ..Shape::default() };
    ExpPoly::term(Complex64::new(random_coef(rng), 0.0), shape)
}

/// A pair `(k, f)` with `k` in `K` and `f` in `F` for family case `case`
/// of [`family_cases`].
pub fn random_family_pair(rng: &mut ChaCha8Rng, case: usize) -> (usize, Seq, Seq) {
    match case {
        0 => {
            // k must vanish at some n^{-1/m}, m <= 6; f stays finite at every m.
            let k = exp_term(rng, &[0.25, 0.5, 1.0, 1.5], true);
            let f = exp_term(rng, &[0.1, 0.125, 1.0 / 6.0], false);
            (case, Seq::exact(poly_label(&k), k), Seq::exact(poly_label(&f), f))
        }
        1 => {
            // K is the intersection down to n^{-4}; F is reached at some level.
            let k = exp_term(rng, &[4.5, 5.0, 6.0], true);
            let f = exp_term(rng, &[0.5, 1.0, 2.0, 3.0], false);
            (case, Seq::exact(poly_label(&k), k), Seq::exact(poly_label(&f), f))
        }
        _ => {
            let (k, _) = loop {
                let c = random_egorov_case(rng);
                if c.1 {
                    break c;
                }
            };
            let f = exp_term(rng, &[0.25, 0.5], false);
            (case, k, Seq::exact(poly_label(&f), f))
        }
    }
}

fn random_tree(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.6) { Expr::x() } else { Expr::Const(rng.gen_range(-2.0..2.0)) };
    }
    let a = random_tree(rng, depth - 1);
    match rng.gen_range(0..10) {
        0 => a + random_tree(rng, depth - 1),
        1 => a - random_tree(rng, depth - 1),
        2 | 3 => a * random_tree(rng, depth - 1),
        4 => a / (Expr::Const(2.0) + Expr::call(Func::Cos, random_tree(rng, depth - 1))),
        5 => Expr::call(Func::Sin, a),
        6 => Expr::call(Func::Exp, a * Expr::Const(0.5)),
        7 => Expr::call(Func::Log, Expr::Const(1.5) + a.powi(2.0)),
        8 => Expr::call(Func::Sqrt, Expr::Const(1.0) + a.powi(2.0)),
        _ => a.powi(pick(rng, &[2.0, 3.0, -1.0])),
    }
}

/// An expression in `x` of depth at most 4 and a point in `[-1.5, 1.5]`.
pub fn random_jet_case(rng: &mut ChaCha8Rng) -> (Expr, f64) {
    (random_tree(rng, 4), rng.gen_range(-1.5..1.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(suite: Suite, n: usize) -> SuiteReport {
        run_suite(suite, 7, n, &Budget::default()).unwrap()
    }

    #[test]
    fn suites_pass_on_small_draws() {
        for s in Suite::ALL {
            let r = quick(s, 20);
            assert!(r.passed(), "{s}: {:?}", r.violations);
            assert_eq!(r.instances, if s == Suite::FamilyIdeal { 60 } else { 20 });
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = quick(Suite::Ultrametric, 50);
        let b = quick(Suite::Ultrametric, 50);
        assert_eq!(a, b);
        assert_eq!("family-ideal".parse::<Suite>().unwrap(), Suite::FamilyIdeal);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn generators_respect_their_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = Budget::default();
        let p = SeminormFamily::AbsoluteValue;
        for _ in 0..50 {
            let f = random_moderate(&mut rng);
            let k = random_negligible(&mut rng);
            assert_eq!(classify(&f, &p, &Scale::log(), Mode::Projective, &b).unwrap().verdict, Verdict::Moderate);
            assert_eq!(classify(&k, &p, &Scale::log(), Mode::Projective, &b).unwrap().verdict, Verdict::Negligible);
        }
    }

    #[test]
    fn differences_match_known_derivatives() {
        let f = |x: f64| Ok(x.sin());
        assert!((central_first(&f, 0.3).unwrap() - 0.3f64.cos()).abs() < 1e-12);
        assert!((central_second(&f, 0.3).unwrap() + 0.3f64.sin()).abs() < 1e-9);
    }
}
