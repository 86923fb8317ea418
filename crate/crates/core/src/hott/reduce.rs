//! β and βJ reduction. The fragment is strongly normalizing; a step budget
//! turns a would-be loop into an error instead of a hang.

use thiserror::Error;

use super::syntax::{HTerm, HType, JElim};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("normalization exceeded the budget of {0} reduction steps")]
pub struct BudgetExceeded(pub u64);

pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

/// Remaining reduction steps, shared across one normalization job.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget { limit, used: 0 }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    fn tick(&mut self) -> Result<(), BudgetExceeded> {
        self.used += 1;
        if self.used > self.limit {
            Err(BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}

/// `J(A,u,P,p) v refl ⇝ p` when `app` has that shape syntactically.
fn beta_j(f: &HTerm, arg: &HTerm) -> Option<HTerm> {
    match (f, arg) {
        (HTerm::App(j, _), HTerm::Refl(..)) => match &**j {
            HTerm::J(j) => Some(j.base.clone()),
            _ => None,
        },
        _ => None,
    }
}

fn beta(f: &HTerm, arg: &HTerm) -> Option<HTerm> {
    match f {
        HTerm::Lam(_, _, body) => Some(body.instantiate(0, arg)),
        _ => None,
    }
}

/// Full normal form: reduces under binders and inside type annotations.
pub fn normalize(t: &HTerm, budget: &mut Budget) -> Result<HTerm, BudgetExceeded> {
    Ok(match t {
        HTerm::Free(_) | HTerm::Bound(_) => t.clone(),
        HTerm::Refl(a, u) => HTerm::refl(normalize_ty(a, budget)?, normalize(u, budget)?),
        HTerm::J(j) => HTerm::J(Box::new(JElim {
            ty: normalize_ty(&j.ty, budget)?,
            point: normalize(&j.point, budget)?,
            hints: j.hints.clone(),
            motive: normalize_ty(&j.motive, budget)?,
            base: normalize(&j.base, budget)?,
        })),
        HTerm::Lam(h, a, b) => {
            HTerm::Lam(h.clone(), Box::new(normalize_ty(a, budget)?), Box::new(normalize(b, budget)?))
        }
        HTerm::App(f, a) => {
            let f = normalize(f, budget)?;
            let a = normalize(a, budget)?;
            if let Some(p) = beta_j(&f, &a) {
                // The base of a normal J is already normal.
                budget.tick()?;
                p
            } else if let Some(r) = beta(&f, &a) {
                budget.tick()?;
                normalize(&r, budget)?
            } else {
                HTerm::app(f, a)
            }
        }
    })
}

pub fn normalize_ty(ty: &HType, budget: &mut Budget) -> Result<HType, BudgetExceeded> {
    Ok(match ty {
        HType::Universe => HType::Universe,
        HType::El(t) => HType::el(normalize(t, budget)?),
        HType::Id(a, u, v) => HType::id(normalize_ty(a, budget)?, normalize(u, budget)?, normalize(v, budget)?),
        HType::Pi(h, a, b) => {
            HType::Pi(h.clone(), Box::new(normalize_ty(a, budget)?), Box::new(normalize_ty(b, budget)?))
        }
    })
}

/// Definitional equality: compare normal forms up to α.
pub fn convertible(a: &HType, b: &HType, budget: &mut Budget) -> Result<bool, BudgetExceeded> {
    Ok(a == b || normalize_ty(a, budget)? == normalize_ty(b, budget)?)
}

pub fn convertible_tm(a: &HTerm, b: &HTerm, budget: &mut Budget) -> Result<bool, BudgetExceeded> {
    Ok(a == b || normalize(a, budget)? == normalize(b, budget)?)
}

/// Number of redexes anywhere in `t`.
pub fn count_redexes(t: &HTerm) -> usize {
    let here = match t {
        HTerm::App(f, a) => usize::from(beta_j(f, a).is_some() || beta(f, a).is_some()),
        _ => 0,
    };
    here + match t {
        HTerm::Free(_) | HTerm::Bound(_) => 0,
        HTerm::Refl(a, u) => count_redexes_ty(a) + count_redexes(u),
        HTerm::J(j) => {
            count_redexes_ty(&j.ty) + count_redexes(&j.point) + count_redexes_ty(&j.motive) + count_redexes(&j.base)
        }
        HTerm::Lam(_, a, b) => count_redexes_ty(a) + count_redexes(b),
        HTerm::App(f, a) => count_redexes(f) + count_redexes(a),
    }
}

pub fn count_redexes_ty(ty: &HType) -> usize {
    match ty {
        HType::Universe => 0,
        HType::El(t) => count_redexes(t),
        HType::Id(a, u, v) => count_redexes_ty(a) + count_redexes(u) + count_redexes(v),
        HType::Pi(_, a, b) => count_redexes_ty(a) + count_redexes_ty(b),
    }
}

/// Contracts the `n`-th redex in pre-order (outermost, left to right).
/// Returns `None` if there are at most `n` redexes.
pub fn contract_nth(t: &HTerm, n: usize) -> Option<HTerm> {
    let mut n = n;
    nth_tm(t, &mut n)
}

/// One step of leftmost-outermost reduction.
pub fn reduce_step(t: &HTerm) -> Option<HTerm> {
    contract_nth(t, 0)
}

fn nth_tm(t: &HTerm, n: &mut usize) -> Option<HTerm> {
    if let HTerm::App(f, a) = t {
        if let Some(r) = beta_j(f, a).or_else(|| beta(f, a)) {
            if *n == 0 {
                return Some(r);
            }
            *n -= 1;
        }
    }
    match t {
        HTerm::Free(_) | HTerm::Bound(_) => None,
        HTerm::Refl(a, u) => {
            if let Some(a) = nth_ty(a, n) {
                return Some(HTerm::refl(a, (**u).clone()));
            }
            nth_tm(u, n).map(|u| HTerm::refl((**a).clone(), u))
        }
        HTerm::J(j) => {
            let rebuild = |f: &dyn Fn(&mut JElim)| {
                let mut j2 = (**j).clone();
                f(&mut j2);
                HTerm::J(Box::new(j2))
            };
            if let Some(x) = nth_ty(&j.ty, n) {
                return Some(rebuild(&|j| j.ty = x.clone()));
            }
            if let Some(x) = nth_tm(&j.point, n) {
                return Some(rebuild(&|j| j.point = x.clone()));
            }
            if let Some(x) = nth_ty(&j.motive, n) {
                return Some(rebuild(&|j| j.motive = x.clone()));
            }
            nth_tm(&j.base, n).map(|x| rebuild(&|j| j.base = x.clone()))
        }
        HTerm::Lam(h, a, b) => {
            if let Some(a) = nth_ty(a, n) {
                return Some(HTerm::Lam(h.clone(), Box::new(a), b.clone()));
            }
            nth_tm(b, n).map(|b| HTerm::Lam(h.clone(), a.clone(), Box::new(b)))
        }
        HTerm::App(f, a) => {
            if let Some(f) = nth_tm(f, n) {
                return Some(HTerm::app(f, (**a).clone()));
            }
            nth_tm(a, n).map(|a| HTerm::app((**f).clone(), a))
        }
    }
}

fn nth_ty(ty: &HType, n: &mut usize) -> Option<HType> {
    match ty {
        HType::Universe => None,
        HType::El(t) => nth_tm(t, n).map(HType::el),
        HType::Id(a, u, v) => {
            if let Some(a) = nth_ty(a, n) {
                return Some(HType::id(a, (**u).clone(), (**v).clone()));
            }
            if let Some(u) = nth_tm(u, n) {
                return Some(HType::id((**a).clone(), u, (**v).clone()));
            }
            nth_tm(v, n).map(|v| HType::id((**a).clone(), (**u).clone(), v))
        }
        HType::Pi(h, a, b) => {
            if let Some(a) = nth_ty(a, n) {
                return Some(HType::Pi(h.clone(), Box::new(a), b.clone()));
            }
            nth_ty(b, n).map(|b| HType::Pi(h.clone(), a.clone(), Box::new(b)))
        }
    }
}
