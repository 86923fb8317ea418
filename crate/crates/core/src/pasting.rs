//! Pasting schemes: recognition of ps-contexts and their i-boundaries.
//!
//! A ps-context is an odd-length list: one object, then pairs `(y : C)`,
//! `(f : x -> y)` each extending the current dangling cell. The derivation
//! is unique, so recognition is a single deterministic pass.

use std::fmt;

use thiserror::Error;

use crate::syntax::{Ctx, Tm, Ty, Var};

/// One application of the extension rule: `y : base` and `filler : src -> y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsStep {
    pub tgt: Var,
    pub base: Ty,
    pub filler: Var,
    pub src: Var,
}

impl PsStep {
    pub fn filler_ty(&self) -> Ty {
        Ty::arr(self.base.clone(), Tm::Var(self.src.clone()), Tm::Var(self.tgt.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsDerivation {
    base: Var,
    steps: Vec<PsStep>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Minus,
    Plus,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Minus => "source",
            Side::Plus => "target",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Boundary {
    pub side: Side,
    pub level: usize,
    pub ctx: Ctx,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("not a ps-context (declaration {position}): {reason}")]
pub struct NotPs {
    pub position: usize,
    pub reason: NotPsReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NotPsReason {
    #[error("a ps-context cannot be empty")]
    Empty,
    #[error("the first declaration must be an object")]
    FirstNotObject,
    #[error("variable `{0}` is declared twice")]
    DuplicateName(Var),
    #[error("`{0}` ends the context without a filler (ps-contexts have odd length)")]
    EvenLengthTail(Var),
    #[error("`{0}` must have an arrow type")]
    FillerNotArrow(Var),
    #[error("filler `{filler}` must end at the variable `{expected}` declared just before it")]
    WrongTarget { filler: Var, expected: Var },
    #[error("filler `{filler}` has base type {found:?}, but `{tgt}` was declared with type {expected:?}")]
    WrongFillerType { filler: Var, tgt: Var, expected: Ty, found: Ty },
    #[error("filler `{filler}` has source `{found}`, expected `{expected}`")]
    WrongSource { filler: Var, expected: Var, found: String },
    #[error("`{tgt}` has type {found:?} but must be parallel to the extended cell, of type {expected:?}")]
    WrongBase { tgt: Var, expected: Ty, found: Ty },
    #[error("`{0}` has a type of higher dimension than the cell it should extend")]
    DimensionTooHigh(Var),
}

fn not_ps(position: usize, reason: NotPsReason) -> NotPs {
    NotPs { position, reason }
}

pub fn check_ps(ctx: &Ctx) -> Result<PsDerivation, NotPs> {
    let decls = ctx.decls();
    let (x0, ty0) = decls.first().ok_or(not_ps(0, NotPsReason::Empty))?;
    if *ty0 != Ty::Obj {
        return Err(not_ps(0, NotPsReason::FirstNotObject));
    }
    if decls.len().is_multiple_of(2) {
        let (last, _) = &decls[decls.len() - 1];
        return Err(not_ps(decls.len() - 1, NotPsReason::EvenLengthTail(last.clone())));
    }
    let mut seen = vec![x0.clone()];
    let mut dangling: (Var, Ty) = (x0.clone(), Ty::Obj);
    let mut steps = Vec::with_capacity(decls.len() / 2);
    for (k, pair) in decls[1..].chunks(2).enumerate() {
        let pos = 1 + 2 * k;
        let (y, c) = &pair[0];
        let (f, fty) = &pair[1];
        for (offset, name) in [(0, y), (1, f)] {
            if seen.contains(name) {
                return Err(not_ps(pos + offset, NotPsReason::DuplicateName(name.clone())));
            }
            seen.push(name.clone());
        }
        let Ty::Arr(fbase, fsrc, ftgt) = fty else {
            return Err(not_ps(pos + 1, NotPsReason::FillerNotArrow(f.clone())));
        };
        if ftgt.as_var() != Some(y) {
            return Err(not_ps(pos + 1, NotPsReason::WrongTarget { filler: f.clone(), expected: y.clone() }));
        }
        if **fbase != *c {
            return Err(not_ps(
                pos + 1,
                NotPsReason::WrongFillerType {
                    filler: f.clone(),
                    tgt: y.clone(),
                    expected: c.clone(),
                    found: (**fbase).clone(),
                },
            ));
        }
        // Forced number of descents to the target of the dangling cell.
        let descents = dangling.1.dim() - c.dim();
        if descents < 0 {
            return Err(not_ps(pos, NotPsReason::DimensionTooHigh(y.clone())));
        }
        for _ in 0..descents {
            let Ty::Arr(base, _, tgt) = &dangling.1 else { unreachable!("dimension is positive") };
            let tgt = tgt.as_var().expect("ps-context types are built from variables").clone();
            dangling = (tgt, (**base).clone());
        }
        let src_ok = fsrc.as_var() == Some(&dangling.0);
        if !src_ok {
            return Err(not_ps(
                pos + 1,
                NotPsReason::WrongSource { filler: f.clone(), expected: dangling.0.clone(), found: fsrc.to_string() },
            ));
        }
        if dangling.1 != *c {
            return Err(not_ps(
                pos,
                NotPsReason::WrongBase { tgt: y.clone(), expected: dangling.1.clone(), found: c.clone() },
            ));
        }
        steps.push(PsStep { tgt: y.clone(), base: c.clone(), filler: f.clone(), src: dangling.0.clone() });
        dangling = (f.clone(), fty.clone());
    }
    // The final descent to an object always succeeds.
    Ok(PsDerivation { base: x0.clone(), steps })
}

impl PsDerivation {
    pub fn base(&self) -> &Var {
        &self.base
    }

    pub fn steps(&self) -> &[PsStep] {
        &self.steps
    }

    /// The derivation made of the first `n` extension steps.
    pub fn prefix(&self, n: usize) -> PsDerivation {
        PsDerivation { base: self.base.clone(), steps: self.steps[..n].to_vec() }
    }

    pub fn ctx(&self) -> Ctx {
        self.prefix_ctx(self.steps.len())
    }

    pub fn prefix_ctx(&self, n: usize) -> Ctx {
        let mut ctx = Ctx::new().with(self.base.clone(), Ty::Obj);
        for step in &self.steps[..n] {
            ctx.push(step.tgt.clone(), step.base.clone());
            ctx.push(step.filler.clone(), step.filler_ty());
        }
        ctx
    }

    /// Highest cell dimension; a lone object has dimension 0.
    pub fn dim(&self) -> usize {
        self.steps.iter().map(|s| s.base.dim() + 2).max().unwrap_or(0) as usize
    }

    pub fn boundary(&self, level: usize, side: Side) -> Boundary {
        let level = level as i64;
        let mut ctx = Ctx::new().with(self.base.clone(), Ty::Obj);
        for step in &self.steps {
            let d = step.base.dim() + 1;
            let keep = match side {
                Side::Minus => d < level,
                Side::Plus if d > level => false,
                Side::Plus if d == level => {
                    ctx.pop();
                    ctx.push(step.tgt.clone(), step.base.clone());
                    false
                }
                Side::Plus => true,
            };
            if keep {
                ctx.push(step.tgt.clone(), step.base.clone());
                ctx.push(step.filler.clone(), step.filler_ty());
            }
        }
        Boundary { side, level: level as usize, ctx }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Var {
        Var::new(s)
    }

    fn arr(x: &str, y: &str) -> Ty {
        Ty::arr(Ty::Obj, Tm::var(x), Tm::var(y))
    }

    fn ctx(decls: &[(&str, Ty)]) -> Ctx {
        decls.iter().map(|(x, t)| (v(x), t.clone())).collect()
    }

    fn gamma2() -> Ctx {
        ctx(&[("x", Ty::Obj), ("y", Ty::Obj), ("f", arr("x", "y")), ("z", Ty::Obj), ("g", arr("y", "z"))])
    }

    fn w() -> Ctx {
        ctx(&[
            ("x", Ty::Obj),
            ("y", Ty::Obj),
            ("f", arr("x", "y")),
            ("g", arr("x", "y")),
            ("a", Ty::arr(arr("x", "y"), Tm::var("f"), Tm::var("g"))),
            ("z", Ty::Obj),
            ("h", arr("y", "z")),
        ])
    }

    #[test]
    fn recognises_composable_pair() {
        let d = check_ps(&gamma2()).unwrap();
        let steps: Vec<_> = d.steps().iter().map(|s| (s.tgt.as_str(), s.filler.as_str(), s.src.as_str())).collect();
        assert_eq!(steps, [("y", "f", "x"), ("z", "g", "y")]);
        assert!(d.steps().iter().all(|s| s.base == Ty::Obj));
        assert_eq!(d.ctx(), gamma2());
    }

    #[test]
    fn recognises_w() {
        let d = check_ps(&w()).unwrap();
        assert_eq!(d.ctx(), w());
        assert_eq!(d.steps()[1].src, v("f"));
        assert_eq!(d.steps()[2].src, v("y"));
    }

    #[test]
    fn rejects_two_objects() {
        let err = check_ps(&ctx(&[("x", Ty::Obj), ("y", Ty::Obj)])).unwrap_err();
        assert_eq!(err.reason, NotPsReason::EvenLengthTail(v("y")));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(check_ps(&Ctx::new()).unwrap_err().reason, NotPsReason::Empty);
        let loop_ = ctx(&[("x", Ty::Obj), ("y", Ty::Obj), ("f", arr("y", "y"))]);
        assert!(matches!(check_ps(&loop_).unwrap_err().reason, NotPsReason::WrongSource { .. }));
        let backwards = ctx(&[("x", Ty::Obj), ("y", Ty::Obj), ("f", arr("y", "x"))]);
        assert!(matches!(check_ps(&backwards).unwrap_err().reason, NotPsReason::WrongTarget { .. }));
        let dup = ctx(&[("x", Ty::Obj), ("x", Ty::Obj), ("f", arr("x", "x"))]);
        assert_eq!(check_ps(&dup).unwrap_err().reason, NotPsReason::DuplicateName(v("x")));
        // an associator-shaped context with `g : x -> y` misplaced after `z`
        let typo = ctx(&[("x", Ty::Obj), ("y", Ty::Obj), ("f", arr("x", "y")), ("z", Ty::Obj), ("g", arr("x", "y"))]);
        assert!(check_ps(&typo).is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(check_ps(&ctx(&[("x", Ty::Obj)])).unwrap().dim(), 0);
        assert_eq!(check_ps(&gamma2()).unwrap().dim(), 1);
        assert_eq!(check_ps(&w()).unwrap().dim(), 2);
    }

    #[test]
    fn boundaries_of_w() {
        let d = check_ps(&w()).unwrap();
        let b = |i, s| d.boundary(i, s).ctx;
        assert_eq!(
            b(1, Side::Minus),
            ctx(&[("x", Ty::Obj), ("y", Ty::Obj), ("f", arr("x", "y")), ("z", Ty::Obj), ("h", arr("y", "z"))])
        );
        assert_eq!(
            b(1, Side::Plus),
            ctx(&[("x", Ty::Obj), ("y", Ty::Obj), ("g", arr("x", "y")), ("z", Ty::Obj), ("h", arr("y", "z"))])
        );
        assert_eq!(b(0, Side::Minus), ctx(&[("x", Ty::Obj)]));
        assert_eq!(b(0, Side::Plus), ctx(&[("z", Ty::Obj)]));
        for i in 2..6 {
            assert_eq!(b(i, Side::Minus), w());
            assert_eq!(b(i, Side::Plus), w());
        }
    }

    #[test]
    fn boundaries_are_ps_and_sub_contexts() {
        for g in [gamma2(), w(), ctx(&[("x", Ty::Obj)])] {
            let d = check_ps(&g).unwrap();
            for i in 0..=d.dim() + 1 {
                for side in [Side::Minus, Side::Plus] {
                    let b = d.boundary(i, side).ctx;
                    check_ps(&b).unwrap();
                    for (x, ty) in b.iter() {
                        assert_eq!(g.get(x), Some(ty));
                    }
                }
            }
        }
    }
}
