//! Algebras built from a monotone family of scales `(r^m)_m`.
//!
//! Increasing in `m`: `F = cap_m F_{r^m}`, `K = cup_m K_{r^m}`.
//! Decreasing in `m`: `F = cup_m F_{r^m}`, `K = cap_m K_{r^m}`.
//! Every quantifier over `m` runs over `1..=m_budget`.

use std::fmt;

use rayon::prelude::*;

use crate::basealg::SeminormFamily;
use crate::embed::check_scale_admissible;
use crate::error::{Error, Result};
use crate::scale::{Direction, ScaleFamily};
use crate::seqspace::{ultranorm, Budget, Mode, Seq, UltranormEstimate};

pub const DEFAULT_M_BUDGET: u32 = 6;

/// Outcome of one quantified membership test, with the level that decided it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `level` is the witness for an existential, `None` for a universal
    /// that held at every level of the budget.
    Holds { level: Option<u32> },
    /// `level` is the falsifier for a universal, `None` for an existential
    /// with no witness in the budget.
    Fails { level: Option<u32> },
    /// A level that had to be decided was not.
    Inconclusive { level: u32 },
}

impl Membership {
    pub fn holds(self) -> Option<bool> {
        match self {
            Membership::Holds { .. } => Some(true),
            Membership::Fails { .. } => Some(false),
            Membership::Inconclusive { .. } => None,
        }
    }

    pub fn level(self) -> Option<u32> {
        match self {
            Membership::Holds { level } | Membership::Fails { level } => level,
            Membership::Inconclusive { level } => Some(level),
        }
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.holds() {
            Some(true) => "true",
            Some(false) => "false",
            None => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyVerdict {
    pub case: Direction,
    pub in_f: Membership,
    pub in_k: Membership,
    /// `(m, <<f>>_{p^mu_nu, r^m})` for `m = 1..=m_budget`.
    pub levels: Vec<(u32, UltranormEstimate)>,
    pub m_budget: u32,
}

impl FamilyVerdict {
    fn estimate(&self, m: u32) -> Option<&UltranormEstimate> {
        self.levels.iter().find(|(l, _)| *l == m).map(|(_, e)| e)
    }

    pub fn moderate_at(&self, m: u32) -> Option<bool> {
        self.estimate(m).and_then(|e| e.confident.then(|| e.is_finite()))
    }

    pub fn negligible_at(&self, m: u32) -> Option<bool> {
        self.estimate(m).and_then(|e| e.confident.then(|| e.is_zero()))
    }
}

fn for_all(levels: &[(u32, Option<bool>)]) -> Membership {
    for &(m, v) in levels {
        match v {
            Some(true) => {}
            Some(false) => return Membership::Fails { level: Some(m) },
            None => return Membership::Inconclusive { level: m },
        }
    }
    Membership::Holds { level: None }
}

fn exists(levels: &[(u32, Option<bool>)]) -> Membership {
    for &(m, v) in levels {
        match v {
            Some(true) => return Membership::Holds { level: Some(m) },
            Some(false) => {}
            None => return Membership::Inconclusive { level: m },
        }
    }
    Membership::Fails { level: None }
}

fn checked_budget(fam: &ScaleFamily, m_budget: u32) -> Result<u32> {
    if m_budget == 0 {
        return Err(Error::Invalid("the m budget must be at least 1".into()));
    }
    if fam.direction() == Direction::Neither {
        return Err(Error::Invalid(format!("family `{fam}` is not monotone in m")));
    }
    Ok(m_budget.min(fam.count()))
}

/// Membership of `f` in `F` and `K` of the family at the single index `(mu, nu)`.
pub fn family_membership(
    f: &Seq,
    fam: &ScaleFamily,
    p: &SeminormFamily,
    mu: u32,
    nu: u32,
    m_budget: u32,
    budget: &Budget,
) -> Result<FamilyVerdict> {
    let m_budget = checked_budget(fam, m_budget)?;
    let levels: Vec<(u32, UltranormEstimate)> = (1..=m_budget)
        .into_par_iter()
        .map(|m| Ok((m, ultranorm(f, p, mu, nu, &fam.member(m)?, budget)?)))
        .collect::<Result<_>>()?;
    let moderate: Vec<(u32, Option<bool>)> =
        levels.iter().map(|(m, e)| (*m, e.confident.then(|| e.is_finite()))).collect();
    let negligible: Vec<(u32, Option<bool>)> =
        levels.iter().map(|(m, e)| (*m, e.confident.then(|| e.is_zero()))).collect();
    let (in_f, in_k) = match fam.direction() {
        Direction::IncreasingInM => (for_all(&moderate), exists(&negligible)),
        _ => (exists(&moderate), for_all(&negligible)),
    };
    Ok(FamilyVerdict { case: fam.direction(), in_f, in_k, levels, m_budget })
}

/// Three-valued result of a family ideal check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealOutcome {
    Holds,
    Violated,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdealCheck {
    pub outcome: IdealOutcome,
    /// The hypothesis `k in K, f in F` was not established, so the pass is vacuous.
    pub flagged: bool,
    /// Levels at which `k f` had to be negligible.
    pub levels: Vec<u32>,
    pub k: FamilyVerdict,
    pub f: FamilyVerdict,
    pub product: FamilyVerdict,
}

impl IdealCheck {
    pub fn passed(&self) -> bool {
        self.outcome == IdealOutcome::Holds
    }
}

/// `k in K, f in F => k f in K`, following the level bookkeeping of the
/// inclusions: in the increasing case `k f` must vanish at the level where `k`
/// does; in the decreasing case at every level.
pub fn family_ideal_check(
    k: &Seq,
    f: &Seq,
    fam: &ScaleFamily,
    p: &SeminormFamily,
    mu: u32,
    nu: u32,
    m_budget: u32,
    budget: &Budget,
) -> Result<IdealCheck> {
    let kv = family_membership(k, fam, p, mu, nu, m_budget, budget)?;
    let fv = family_membership(f, fam, p, mu, nu, m_budget, budget)?;
    let product = family_membership(&k.mul(f)?, fam, p, mu, nu, m_budget, budget)?;
    let hypothesis = kv.in_k.holds() == Some(true) && fv.in_f.holds() == Some(true);
    let levels: Vec<u32> = match (fam.direction(), kv.in_k) {
        (Direction::IncreasingInM, Membership::Holds { level: Some(m) }) => vec![m],
        _ => (1..=product.m_budget).collect(),
    };
    let outcome = if !hypothesis {
        IdealOutcome::Holds
    } else {
        let checks: Vec<Option<bool>> = levels.iter().map(|&m| product.negligible_at(m)).collect();
        if checks.iter().any(|c| *c == Some(false)) {
            IdealOutcome::Violated
        } else if checks.iter().any(|c| c.is_none()) {
            IdealOutcome::Inconclusive
        } else {
            IdealOutcome::Holds
        }
    };
    Ok(IdealCheck { outcome, flagged: !hypothesis, levels, k: kv, f: fv, product })
}

/// Smallest `m0 <= m_budget` for which `r^{m0}` is an admissible scale for `f`.
pub fn find_admissible_level(
    f: &Seq,
    fam: &ScaleFamily,
    p: &SeminormFamily,
    mode: Mode,
    m_budget: u32,
    budget: &Budget,
) -> Result<Option<u32>> {
    let m_budget = checked_budget(fam, m_budget)?;
    for m in 1..=m_budget {
        if check_scale_admissible(f, p, &fam.member(m)?, mode, budget)?.admissible {
            return Ok(Some(m));
        }
    }
    Ok(None)
}
