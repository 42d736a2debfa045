//! Cauchy moduli, the diagonal limit and convergence checks for a finite
//! family `f^0, ..., f^{M-1}`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::basealg::SeminormFamily;
use crate::error::{Error, Result};
use crate::scale::{geometric_schedule, Scale};
use crate::seqspace::{distance, Budget, Mode, Seq, UltranormEstimate};

/// Slack allowed between consecutive distances by [`verify_convergence`].
pub const MONOTONE_TOL: f64 = 1e-2;

/// One extracted level: for sampled `n >= n` and `k, l` in the bracket of
/// members `[member, next member]`, `p^mu_nu(f^k_n - f^l_n)^{r_n} < 2^{-mu}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Level {
    pub mu: u32,
    pub nu: u32,
    /// `m_mu`, an index into the member list.
    pub member: usize,
    /// `n_mu`, a point of the sample grid.
    pub n: u64,
    /// Levels past `mu_max` are kept only to continue the diagonal.
    pub required: bool,
}

#[derive(Clone)]
pub struct CauchyData {
    pub members: Vec<Seq>,
    pub p: SeminormFamily,
    pub r: Scale,
    pub mode: Mode,
    pub mu_max: u32,
    pub levels: Vec<Level>,
    /// Sample grid the thresholds were chosen on.
    pub grid: Vec<u64>,
}

impl CauchyData {
    pub fn epsilon(mu: u32) -> f64 {
        (-(mu as f64)).exp2()
    }

    /// Members `[m_mu, m_{mu+1}]` of level index `i`; the last level runs to the end of the list.
    pub fn bracket(&self, i: usize) -> (usize, usize) {
        let lo = self.levels[i].member;
        let hi = self.levels.get(i + 1).map_or(self.members.len() - 1, |l| l.member);
        (lo, hi)
    }

    /// Index of the level whose bracket `[n_mu, n_{mu+1})` holds `n`.
    pub fn level_at(&self, n: u64) -> usize {
        self.levels.iter().rposition(|l| l.n <= n).unwrap_or(0)
    }

    fn start(&self) -> u64 {
        self.members.iter().map(Seq::domain_start).chain([self.r.domain_start]).max().unwrap_or(1)
    }
}

impl std::fmt::Debug for CauchyData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CauchyData")
            .field("members", &self.members.iter().map(Seq::label).collect::<Vec<_>>())
            .field("mode", &self.mode)
            .field("mu_max", &self.mu_max)
            .field("levels", &self.levels)
            .finish()
    }
}

/// `r_n ln p` with `0^0 = 0` when `r_n = 0`.
fn weighted(r: f64, ln_p: f64) -> f64 {
    if ln_p == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else if r == 0.0 {
        0.0
    } else {
        r * ln_p
    }
}

/// `ln(p^mu_nu(f_n - g_n)^{r_n})`.
pub fn pointwise_exponent(f: &Seq, g: &Seq, p: &SeminormFamily, mu: u32, nu: u32, r: &Scale, n: u64) -> Result<f64> {
    let d = f.sub(g)?;
    let ln_p = d.ln_seminorms(p, mu, nu, n)?[nu as usize];
    Ok(weighted(r.eval(n as f64)?, ln_p))
}

fn pairs(lo: usize, hi: usize) -> Vec<(usize, usize)> {
    (lo..=hi).flat_map(|k| (k + 1..=hi).map(move |l| (k, l))).collect()
}

struct Extractor<'a> {
    members: &'a [Seq],
    p: &'a SeminormFamily,
    r: &'a Scale,
    budget: &'a Budget,
}

impl Extractor<'_> {
    fn limsups(&self, lo: usize, mu: u32, nu: u32) -> Result<Vec<((usize, usize), UltranormEstimate)>> {
        pairs(lo, self.members.len() - 1)
            .into_par_iter()
            .map(|(k, l)| Ok(((k, l), distance(&self.members[k], &self.members[l], self.p, mu, nu, self.r, self.budget)?)))
            .collect()
    }

    /// Smallest `m >= from` with `limsup < 2^{-mu}` for every pair `k, l >= m`,
    /// or the worst pair at `from` when there is none.
    /// A required level needs a pair to test, so it stops one member short of the end.
    fn find_member(&self, from: usize, mu: u32, nu: u32, required: bool) -> Result<std::result::Result<usize, (usize, usize)>> {
        let eps = CauchyData::epsilon(mu);
        let table = self.limsups(from, mu, nu)?;
        let bad = |m: usize| table.iter().any(|((k, _), e)| *k >= m && !(e.confident && e.value < eps));
        let end = self.members.len() - usize::from(required);
        if let Some(m) = (from..end).find(|&m| !bad(m)) {
            return Ok(Ok(m));
        }
        let worst = table
            .iter()
            .max_by(|a, b| a.1.exponent.total_cmp(&b.1.exponent))
            .map_or((from, from), |(pair, _)| *pair);
        Ok(Err(worst))
    }

    /// First grid index `> after` from which the displayed inequality holds on the bracket.
    fn find_threshold(&self, grid: &[u64], after: Option<usize>, lo: usize, hi: usize, mu: u32, nu: u32) -> Result<Option<usize>> {
        let bound = -(mu as f64) * std::f64::consts::LN_2;
        let ok: Vec<bool> = grid
            .par_iter()
            .map(|&n| {
                for (k, l) in pairs(lo, hi) {
                    if pointwise_exponent(&self.members[k], &self.members[l], self.p, mu, nu, self.r, n)? >= bound {
                        return Ok(false);
                    }
                }
                Ok(true)
            })
            .collect::<Result<_>>()?;
        let first = after.map_or(0, |a| a + 1);
        let mut tail_start = None;
        for i in (first..grid.len()).rev() {
            if !ok[i] {
                break;
            }
            tail_start = Some(i);
        }
        Ok(tail_start)
    }
}

/// Greedy extraction of `(m_mu, n_mu)` for `mu = 1..=mu_max`. Further levels
/// are added while members remain and the inequalities hold, so the diagonal
/// keeps following the family past `mu_max`.
///
/// In projective mode level `mu` uses `p^mu_mu`; in inductive mode it uses the
/// smallest `nu >= nu(mu - 1)` that works, up to `budget.nu_max`.
pub fn extract_moduli(
    members: Vec<Seq>,
    p: &SeminormFamily,
    r: &Scale,
    mode: Mode,
    mu_max: u32,
    budget: &Budget,
) -> Result<CauchyData> {
    if members.len() < 3 {
        return Err(Error::Invalid(format!("a Cauchy family needs at least 3 members, got {}", members.len())));
    }
    if mu_max == 0 {
        return Err(Error::Invalid("mu_max must be at least 1".into()));
    }
    let mut cd = CauchyData { members, p: p.clone(), r: r.clone(), mode, mu_max, levels: vec![], grid: vec![] };
    cd.grid = geometric_schedule(cd.start().max(2), budget.n_max, budget.points);
    let ex = Extractor { members: &cd.members, p, r, budget };

    // Members first: each threshold needs the next level's member.
    let mut chosen: Vec<(u32, u32, usize)> = vec![];
    let mut nu_prev = 0;
    for mu in 1.. {
        let required = mu <= mu_max;
        let from = chosen.last().map_or(0, |c| c.2 + 1);
        if from >= cd.members.len() {
            if required {
                return Err(Error::Invalid(format!(
                    "{} members cannot carry {mu_max} strictly increasing levels",
                    cd.members.len()
                )));
            }
            break;
        }
        let nus: Vec<u32> = match mode {
            Mode::Projective => vec![mu],
            Mode::Inductive => (nu_prev..=budget.nu_max.max(nu_prev)).collect(),
        };
        let mut found = None;
        let mut falsifier = (from, from);
        for &nu in &nus {
            match ex.find_member(from, mu, nu, required)? {
                Ok(m) => {
                    found = Some((nu, m));
                    break;
                }
                Err(pair) if nu == nus[0] => falsifier = pair,
                Err(_) => {}
            }
        }
        match found {
            Some((nu, m)) => {
                chosen.push((mu, nu, m));
                nu_prev = nu;
            }
            None if required => return Err(Error::NotCauchy { mu, k: falsifier.0, l: falsifier.1 }),
            None => break,
        }
    }

    let mut after = None;
    for (i, &(mu, nu, member)) in chosen.iter().enumerate() {
        let hi = chosen.get(i + 1).map_or(cd.members.len() - 1, |c| c.2);
        match ex.find_threshold(&cd.grid, after, member, hi, mu, nu)? {
            Some(idx) => {
                cd.levels.push(Level { mu, nu, member, n: cd.grid[idx], required: mu <= mu_max });
                after = Some(idx);
            }
            None if mu <= mu_max => {
                return Err(Error::Evaluation(format!(
                    "no sample threshold for level {mu} on the grid up to n = {}",
                    budget.n_max
                )));
            }
            None => break,
        }
    }
    Ok(cd)
}

/// Whether every level's inequality holds at the grid points `ns` past its threshold.
pub fn check_moduli(cd: &CauchyData, ns: &[u64]) -> Result<bool> {
    for (i, level) in cd.levels.iter().enumerate() {
        let (lo, hi) = cd.bracket(i);
        let bound = -(level.mu as f64) * std::f64::consts::LN_2;
        for &n in ns.iter().filter(|&&n| n >= level.n) {
            for (k, l) in pairs(lo, hi) {
                if pointwise_exponent(&cd.members[k], &cd.members[l], &cd.p, level.mu, level.nu, &cd.r, n)? >= bound {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `fbar_n = f^{m_mu(n)}_n` with `mu(n) = sup { mu : n_mu <= n }`.
pub fn diagonalize(cd: &CauchyData) -> Seq {
    let members = Arc::new(cd.members.clone());
    let levels: Arc<Vec<(u64, usize)>> = Arc::new(cd.levels.iter().map(|l| (l.n, l.member)).collect());
    Seq::generic("diag", cd.start(), move |n| {
        let i = levels.iter().rposition(|l| l.0 <= n).unwrap_or(0);
        members[levels[i].1].element(n)
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundChain {
    pub checks: usize,
    /// `(member, n, exponent)` where `p(f^m_n - fbar_n)^{r_n} >= 2^{1-mu}`.
    pub violations: Vec<(usize, u64, f64)>,
}

impl BoundChain {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    /// `d(f^m, fbar)` for every member.
    pub distances: Vec<UltranormEstimate>,
    /// Non-increasing up to [`MONOTONE_TOL`], every estimate conclusive.
    pub monotone: bool,
    /// Last distance below `2^{1 - mu_max}`.
    pub final_below_bound: bool,
    pub decreasing: bool,
    /// Members whose distance rises above their predecessor's.
    pub flagged: Vec<usize>,
    pub bound_chain: BoundChain,
}

/// `f^m - fbar`, assembled per bracket from `f^m - f^{m_mu}` so that exact
/// members cancel symbolically instead of in floating point.
pub fn diagonal_difference(cd: &CauchyData, m: usize) -> Result<Seq> {
    let diffs: Vec<(u64, Seq)> = cd
        .levels
        .iter()
        .map(|l| Ok((l.n, cd.members[m].sub(&cd.members[l.member])?)))
        .collect::<Result<_>>()?;
    let start = diffs.iter().map(|d| d.1.domain_start()).max().unwrap_or(1);
    Ok(Seq::generic(format!("({} - diag)", cd.members[m].label()), start, move |n| {
        let i = diffs.iter().rposition(|d| d.0 <= n).unwrap_or(0);
        diffs[i].1.element(n)
    }))
}

/// Distances of the members to the diagonal, by tail fit, plus a pointwise
/// replay of the bound chain `p(f^m_n - fbar_n)^{r_n} < sum 2^{-mu'} < 2^{1-mu}`.
/// Distances use the seminorm of the last required level.
pub fn verify_convergence(cd: &CauchyData, budget: &Budget) -> Result<ConvergenceReport> {
    let top = cd.levels.iter().filter(|l| l.required).last().copied().unwrap_or(cd.levels[0]);
    let (mu, nu) = (top.mu, top.nu);
    let distances: Vec<UltranormEstimate> = (0..cd.members.len())
        .into_par_iter()
        .map(|m| crate::seqspace::ultranorm_tailfit(&diagonal_difference(cd, m)?, &cd.p, mu, nu, &cd.r, budget))
        .collect::<Result<_>>()?;
    let mut flagged = vec![];
    for m in 1..distances.len() {
        let (a, b) = (&distances[m - 1], &distances[m]);
        if !b.confident || b.value > a.value + MONOTONE_TOL {
            flagged.push(m);
        }
    }
    if distances.first().is_some_and(|d| !d.confident) {
        flagged.insert(0, 0);
    }
    let last = distances.last().expect("at least 3 members");
    let final_below_bound = last.confident && last.value < 2.0 * CauchyData::epsilon(cd.mu_max);
    let monotone = flagged.is_empty();
    Ok(ConvergenceReport {
        decreasing: monotone && final_below_bound,
        monotone,
        final_below_bound,
        flagged,
        bound_chain: replay_bound_chain(cd)?,
        distances,
    })
}

/// Pointwise check of the bound chain on the sample grid. Only points with
/// `r_n <= 1` count, since `(a + b)^r <= a^r + b^r` needs `r <= 1`.
pub fn replay_bound_chain(cd: &CauchyData) -> Result<BoundChain> {
    let mut checks = 0;
    let mut violations = vec![];
    for m in 0..cd.members.len() {
        let Some(i) = cd.levels.iter().rposition(|l| l.member <= m) else { continue };
        let diff = diagonal_difference(cd, m)?;
        let level = cd.levels[i];
        let bound = (1.0 - level.mu as f64) * std::f64::consts::LN_2;
        for &n in cd.grid.iter().filter(|&&n| n >= level.n) {
            if cd.r.eval(n as f64)? > 1.0 {
                continue;
            }
            checks += 1;
            let e = weighted(cd.r.eval(n as f64)?, diff.ln_seminorms(&cd.p, level.mu, level.nu, n)?[level.nu as usize]);
            if e >= bound {
                violations.push((m, n, e));
            }
        }
    }
    Ok(BoundChain { checks, violations })
}

/// `f^m_n = sum_{j <= m} n^{-j}`, `m = 0..count`.
pub fn geometric_family(count: usize) -> Result<Vec<Seq>> {
    (0..count)
        .map(|m| {
            let src = (0..=m).map(|j| format!("n^(-{j})")).collect::<Vec<_>>().join(" + ");
            Seq::from_expr(format!("g{m}"), crate::expr::Expr::parse(&src)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basealg::Element;
    use std::f64::consts::E;

    fn abs() -> SeminormFamily {
        SeminormFamily::AbsoluteValue
    }

    fn budget() -> Budget {
        Budget::default().with_n_max(100_000)
    }

    #[test]
    fn geometric_family_moduli() {
        let fam = geometric_family(8).unwrap();
        let d = distance(&fam[1], &fam[4], &abs(), 0, 0, &Scale::log(), &budget()).unwrap();
        assert!((d.value - (-2.0f64).exp()).abs() < 1e-12);
        let cd = extract_moduli(fam, &abs(), &Scale::log(), Mode::Projective, 4, &budget()).unwrap();
        let ms: Vec<usize> = cd.levels.iter().filter(|l| l.required).map(|l| l.member).collect();
        assert_eq!(ms, vec![0, 1, 2, 3]);
        assert!(cd.levels.windows(2).all(|w| w[0].member < w[1].member && w[0].n < w[1].n));
        assert!(check_moduli(&cd, &cd.grid).unwrap());
    }

    #[test]
    fn diagonal_and_convergence() {
        let b = budget();
        let cd = extract_moduli(geometric_family(8).unwrap(), &abs(), &Scale::log(), Mode::Projective, 4, &b).unwrap();
        let fbar = diagonalize(&cd);
        for n in [2u64, 5, 50, 5000, 90_000] {
            let m = cd.levels[cd.level_at(n)].member;
            let v = fbar.element(n).unwrap().eval(0.0).unwrap();
            let nf = n as f64;
            let limit = 1.0 / (1.0 - 1.0 / nf);
            let tail = nf.powi(-(m as i32 + 1)) / (1.0 - 1.0 / nf);
            assert!(((v - limit).abs() - tail).abs() <= 1e-12 * limit, "n={n} m={m}: {v} {limit} {tail}");
        }
        let rep = verify_convergence(&cd, &b).unwrap();
        assert!(rep.decreasing, "{rep:?}");
        for (m, d) in rep.distances.iter().enumerate().take(cd.levels.last().unwrap().member) {
            assert!((d.value - (-(m as f64 + 1.0)).exp()).abs() < 1e-2, "m={m}: {}", d.value);
        }
        assert!(rep.bound_chain.holds() && rep.bound_chain.checks > 0);
    }

    #[test]
    fn constant_family() {
        let b = budget();
        let fam: Vec<Seq> = (0..5).map(|_| Seq::constant("c", Element::real(E))).collect();
        let cd = extract_moduli(fam, &abs(), &Scale::log(), Mode::Projective, 3, &b).unwrap();
        let fbar = diagonalize(&cd);
        assert_eq!(fbar.element(77).unwrap().eval(0.0).unwrap(), E);
        let rep = verify_convergence(&cd, &b).unwrap();
        assert!(rep.distances.iter().all(|d| d.value == 0.0));
        assert!(rep.decreasing);
    }

    #[test]
    fn distinct_constants_are_not_cauchy() {
        let fam: Vec<Seq> = (0..5).map(|i| Seq::constant("c", Element::real(i as f64))).collect();
        let err = extract_moduli(fam, &abs(), &Scale::log(), Mode::Projective, 3, &budget()).unwrap_err();
        assert!(matches!(err, Error::NotCauchy { mu: 1, .. }), "{err:?}");
    }

    #[test]
    fn perturbed_member_is_flagged() {
        let b = budget();
        let mut fam = geometric_family(8).unwrap();
        fam[2] = fam[2].add(&Seq::constant("one", Element::real(1.0))).unwrap();
        let cd = extract_moduli(fam, &abs(), &Scale::log(), Mode::Projective, 4, &b).unwrap();
        let rep = verify_convergence(&cd, &b).unwrap();
        assert!(!rep.decreasing);
        assert_eq!(rep.flagged, vec![2]);
        assert!((rep.distances[2].value - 1.0).abs() < 1e-2);
    }

    #[test]
    fn single_level() {
        let b = budget();
        let cd = extract_moduli(geometric_family(3).unwrap(), &abs(), &Scale::log(), Mode::Projective, 1, &b).unwrap();
        assert_eq!(cd.levels[0].member, 0);
        let fbar = diagonalize(&cd);
        let n = cd.levels[0].n;
        let m = cd.levels[cd.level_at(n)].member;
        assert_eq!(fbar.element(n).unwrap().eval(0.0).unwrap(), cd.members[m].element(n).unwrap().eval(0.0).unwrap());
    }

    #[test]
    fn refinement_keeps_moduli_valid() {
        let coarse = Budget { points: 12, ..budget() };
        let cd = extract_moduli(geometric_family(6).unwrap(), &abs(), &Scale::log(), Mode::Projective, 3, &coarse).unwrap();
        let fine = extract_moduli(geometric_family(6).unwrap(), &abs(), &Scale::log(), Mode::Projective, 3, &budget()).unwrap();
        assert!(check_moduli(&cd, &cd.grid).unwrap());
        assert!(check_moduli(&fine, &cd.grid).unwrap());
    }

    #[test]
    fn inductive_mode() {
        let b = budget();
        let cd = extract_moduli(geometric_family(6).unwrap(), &abs(), &Scale::log(), Mode::Inductive, 3, &b).unwrap();
        assert!(cd.levels.windows(2).all(|w| w[0].nu <= w[1].nu));
        let rep = verify_convergence(&cd, &b).unwrap();
        assert!(rep.decreasing);
    }

    #[test]
    fn brackets_tile_the_tail() {
        let cd = extract_moduli(geometric_family(8).unwrap(), &abs(), &Scale::log(), Mode::Projective, 4, &budget()).unwrap();
        let mut prev = 0;
        for n in 2..5000u64 {
            let i = cd.level_at(n);
            assert!(i >= prev);
            prev = i;
        }
    }
}
