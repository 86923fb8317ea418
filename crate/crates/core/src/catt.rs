//! CaTT: coherences over pasting schemes, and the environment of named
//! declarations they live in.

use std::collections::BTreeSet;

use indexmap::IndexMap;
use thiserror::Error;

use crate::gsett::{self, Judgement, JudgementKind, TypeError};
use crate::pasting::{check_ps, NotPs, PsDerivation, Side};
use crate::surface::infer_implicit_mask;
use crate::syntax::{var_set_term, CohId, Ctx, Sub, Tm, Ty, Var};

/// Which instance of the well-formedness rule validated a coherence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CohKind {
    /// `i = dim Γ`: both sides use every variable of the context.
    FullCoverage,
    /// `i = dim Γ - 1`: an operation composing the pasting scheme.
    Composition,
}

#[derive(Clone, Debug)]
pub struct Coherence {
    name: String,
    ps: PsDerivation,
    ctx: Ctx,
    ty: Ty,
    level: usize,
    kind: CohKind,
    implicit: Vec<bool>,
}

impl Coherence {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ps(&self) -> &PsDerivation {
        &self.ps
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn ty(&self) -> &Ty {
        &self.ty
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn kind(&self) -> CohKind {
        self.kind
    }

    pub fn implicit_mask(&self) -> &[bool] {
        &self.implicit
    }
}

#[derive(Clone, Debug)]
pub struct LetDef {
    name: String,
    ctx: Ctx,
    ty: Ty,
    body: Tm,
    implicit: Vec<bool>,
}

impl LetDef {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn ty(&self) -> &Ty {
        &self.ty
    }

    pub fn body(&self) -> &Tm {
        &self.body
    }

    pub fn implicit_mask(&self) -> &[bool] {
        &self.implicit
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry {
    Coh(usize),
    Let(usize),
}

pub enum EntryRef<'a> {
    Coh(CohId, &'a Coherence),
    Let(&'a LetDef),
}

impl EntryRef<'_> {
    pub fn ctx(&self) -> &Ctx {
        match self {
            EntryRef::Coh(_, c) => c.ctx(),
            EntryRef::Let(l) => l.ctx(),
        }
    }

    pub fn ty(&self) -> &Ty {
        match self {
            EntryRef::Coh(_, c) => c.ty(),
            EntryRef::Let(l) => l.ty(),
        }
    }

    pub fn implicit_mask(&self) -> &[bool] {
        match self {
            EntryRef::Coh(_, c) => c.implicit_mask(),
            EntryRef::Let(l) => l.implicit_mask(),
        }
    }

    /// The term this entry denotes, instantiated by `sub`. Lets are expanded.
    pub fn instantiate(&self, sub: Sub) -> Result<Tm, TypeError> {
        match self {
            EntryRef::Coh(id, _) => Ok(Tm::Coh(id.clone(), sub)),
            EntryRef::Let(l) => Ok(l.body().subst(&sub)?),
        }
    }
}

/// A declaration ready to be validated and registered.
#[derive(Clone, Debug)]
pub enum Decl {
    Coh { name: String, ctx: Ctx, ty: Ty },
    Let { name: String, ctx: Ctx, ty: Option<Ty>, body: Tm },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CattError {
    #[error(transparent)]
    NotPs(#[from] NotPs),
    #[error("the type of a coherence must be an arrow, found {0}")]
    NotArrowType(Ty),
    #[error("{side} `{term}` is not a term of the {side} boundary at level {level}: {cause}")]
    NotInBoundary { side: Side, level: usize, term: Tm, cause: Box<TypeError> },
    #[error("{side} `{term}` has type {found} in the {side} boundary at level {level}, expected {expected}")]
    BoundaryTypeMismatch { side: Side, level: usize, term: Tm, expected: Ty, found: Ty },
    #[error("variable condition fails on the {side} side at level {level}: missing {missing:?}, extra {extra:?}")]
    VarConditionFailed { side: Side, level: usize, missing: BTreeSet<Var>, extra: BTreeSet<Var> },
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("`{0}` is already defined")]
    DuplicateName(String),
    #[error("declared type {declared} differs from the inferred type {inferred}")]
    AscriptionMismatch { declared: Ty, inferred: Ty },
}

impl CattError {
    /// The rule whose premise failed.
    pub fn rule(&self) -> &'static str {
        match self {
            CattError::NotPs(_) => "ps",
            CattError::NotArrowType(_)
            | CattError::NotInBoundary { .. }
            | CattError::BoundaryTypeMismatch { .. }
            | CattError::VarConditionFailed { .. } => "coh-wd",
            CattError::Type(e) => e.rule(),
            CattError::DuplicateName(_) => "fresh-name",
            CattError::AscriptionMismatch { .. } => "let-ascription",
        }
    }

    /// How far the well-formedness check got before failing; used to report
    /// the more informative of the two boundary levels.
    fn progress(&self) -> u8 {
        match self {
            CattError::VarConditionFailed { side: Side::Minus, .. } => 0,
            CattError::NotInBoundary { side: Side::Minus, .. }
            | CattError::BoundaryTypeMismatch { side: Side::Minus, .. } => 1,
            CattError::VarConditionFailed { side: Side::Plus, .. } => 2,
            _ => 3,
        }
    }
}

/// Ordered registry of validated coherences and let-definitions.
#[derive(Clone, Debug, Default)]
pub struct Environment {
    entries: IndexMap<String, Entry>,
    cohs: Vec<Coherence>,
    lets: Vec<LetDef>,
}

impl Environment {
    pub fn new() -> Environment {
        Environment::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn lookup(&self, name: &str) -> Option<EntryRef<'_>> {
        Some(match *self.entries.get(name)? {
            Entry::Coh(i) => EntryRef::Coh(CohId::new(i, &self.cohs[i].name), &self.cohs[i]),
            Entry::Let(i) => EntryRef::Let(&self.lets[i]),
        })
    }

    pub fn coherence(&self, id: &CohId) -> Option<&Coherence> {
        self.cohs.get(id.index())
    }

    pub fn coherences(&self) -> impl Iterator<Item = (CohId, &Coherence)> {
        self.cohs.iter().enumerate().map(|(i, c)| (CohId::new(i, &c.name), c))
    }

    pub fn coherence_count(&self) -> usize {
        self.cohs.len()
    }

    pub fn coh_id(&self, name: &str) -> Option<CohId> {
        match self.lookup(name)? {
            EntryRef::Coh(id, _) => Some(id),
            EntryRef::Let(_) => None,
        }
    }

    /// The judgement `Γ ⊢ t : A` an entry stands for. A coherence is applied
    /// to the identity substitution of its own context.
    pub fn judgement(&self, name: &str) -> Option<(Ctx, Tm, Ty)> {
        Some(match self.lookup(name)? {
            EntryRef::Coh(id, c) => (c.ctx.clone(), Tm::Coh(id, c.ctx.id_sub()), c.ty.clone()),
            EntryRef::Let(l) => (l.ctx.clone(), l.body.clone(), l.ty.clone()),
        })
    }

    pub fn register(&mut self, decl: Decl) -> Result<Entry, CattError> {
        match decl {
            Decl::Coh { name, ctx, ty } => self.register_coh(&name, ctx, ty).map(|id| Entry::Coh(id.index())),
            Decl::Let { name, ctx, ty, body } => self.register_let(&name, ctx, ty, body),
        }
    }

    pub fn register_coh(&mut self, name: &str, ctx: Ctx, ty: Ty) -> Result<CohId, CattError> {
        if self.entries.contains_key(name) {
            return Err(CattError::DuplicateName(name.to_owned()));
        }
        let coh = check_coh(self, name, ctx, ty)?;
        let index = self.cohs.len();
        self.cohs.push(coh);
        self.entries.insert(name.to_owned(), Entry::Coh(index));
        Ok(CohId::new(index, name))
    }

    pub fn register_let(&mut self, name: &str, ctx: Ctx, ty: Option<Ty>, body: Tm) -> Result<Entry, CattError> {
        if self.entries.contains_key(name) {
            return Err(CattError::DuplicateName(name.to_owned()));
        }
        check_ctx(self, &ctx)?;
        let inferred = check_term(self, &ctx, &body)?;
        if let Some(declared) = ty {
            gsett::check_type_in(Some(self), &ctx, &declared)?;
            if declared != inferred {
                return Err(CattError::AscriptionMismatch { declared, inferred });
            }
        }
        let implicit = infer_implicit_mask(&ctx);
        let index = self.lets.len();
        self.lets.push(LetDef { name: name.to_owned(), ctx, ty: inferred, body, implicit });
        let entry = Entry::Let(index);
        self.entries.insert(name.to_owned(), entry);
        Ok(entry)
    }
}

/// Validates `coh_{Γ,A}` without registering it.
pub fn check_coh(env: &Environment, name: &str, ctx: Ctx, ty: Ty) -> Result<Coherence, CattError> {
    let ps = check_ps(&ctx)?;
    let Ty::Arr(base, src, tgt) = &ty else {
        return Err(CattError::NotArrowType(ty));
    };
    let dim = ps.dim();
    let levels: Vec<usize> = if dim == 0 { vec![0] } else { vec![dim - 1, dim] };
    let mut best: Option<CattError> = None;
    for level in levels {
        match check_sides(env, &ps, level, base, src, tgt) {
            Ok(()) => {
                let kind = if level == dim { CohKind::FullCoverage } else { CohKind::Composition };
                let implicit = infer_implicit_mask(&ctx);
                return Ok(Coherence { name: name.to_owned(), ps, ctx, ty, level, kind, implicit });
            }
            Err(e) => {
                if best.as_ref().is_none_or(|b| e.progress() > b.progress()) {
                    best = Some(e);
                }
            }
        }
    }
    Err(best.expect("at least one level is tried"))
}

fn check_sides(
    env: &Environment,
    ps: &PsDerivation,
    level: usize,
    base: &Ty,
    src: &Tm,
    tgt: &Tm,
) -> Result<(), CattError> {
    for (side, term) in [(Side::Minus, src), (Side::Plus, tgt)] {
        let boundary = ps.boundary(level, side).ctx;
        let used = var_set_term(term, base);
        let bound = boundary.vars();
        if used != bound {
            return Err(CattError::VarConditionFailed {
                side,
                level,
                missing: bound.difference(&used).cloned().collect(),
                extra: used.difference(&bound).cloned().collect(),
            });
        }
        let found = gsett::infer_in(Some(env), &boundary, term).map_err(|cause| CattError::NotInBoundary {
            side,
            level,
            term: term.clone(),
            cause: Box::new(cause),
        })?;
        if found != *base {
            return Err(CattError::BoundaryTypeMismatch {
                side,
                level,
                term: term.clone(),
                expected: base.clone(),
                found,
            });
        }
    }
    Ok(())
}

pub fn check_ctx(env: &Environment, ctx: &Ctx) -> Result<Judgement, TypeError> {
    gsett::check_ctx_in(Some(env), ctx)?;
    Ok(Judgement::new(JudgementKind::CtxOk(ctx.clone())))
}

pub fn check_type(env: &Environment, ctx: &Ctx, ty: &Ty) -> Result<Judgement, TypeError> {
    gsett::check_type_in(Some(env), ctx, ty)?;
    Ok(Judgement::new(JudgementKind::TypeOk(ctx.clone(), ty.clone())))
}

/// Infers the unique type of `t` in `ctx` (assumed valid).
pub fn check_term(env: &Environment, ctx: &Ctx, t: &Tm) -> Result<Ty, TypeError> {
    gsett::infer_in(Some(env), ctx, t)
}

pub fn check_sub_catt(env: &Environment, target: &Ctx, sub: &Sub, source: &Ctx) -> Result<Judgement, TypeError> {
    gsett::check_sub_in(Some(env), target, sub, source)?;
    Ok(Judgement::new(JudgementKind::SubOk(target.clone(), sub.clone(), source.clone())))
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

    fn sub(pairs: &[(&str, Tm)]) -> Sub {
        pairs.iter().map(|(x, t)| (v(x), t.clone())).collect()
    }

    #[test]
    fn composition_is_a_coherence() {
        let env = Environment::new();
        let comp = check_coh(&env, "comp", gamma2(), arr("x", "z")).unwrap();
        assert_eq!(comp.kind(), CohKind::Composition);
        assert_eq!(comp.level(), 0);
    }

    #[test]
    fn identity_is_a_full_coverage_coherence() {
        let env = Environment::new();
        let id = check_coh(&env, "id", ctx(&[("x", Ty::Obj)]), arr("x", "x")).unwrap();
        assert_eq!(id.kind(), CohKind::FullCoverage);
        assert_eq!(id.level(), 0);
    }

    #[test]
    fn variable_condition_names_the_target_side() {
        let env = Environment::new();
        let err = check_coh(&env, "bad", gamma2(), arr("x", "y")).unwrap_err();
        match err {
            CattError::VarConditionFailed { side, level, missing, extra } => {
                assert_eq!(side, Side::Plus);
                assert_eq!(level, 0);
                assert_eq!(missing, [v("z")].into());
                assert_eq!(extra, [v("y")].into());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_arrow_type_is_rejected() {
        let env = Environment::new();
        assert!(matches!(check_coh(&env, "c", gamma2(), Ty::Obj), Err(CattError::NotArrowType(_))));
    }

    #[test]
    fn coherence_application() {
        let mut env = Environment::new();
        let comp = env.register_coh("comp", gamma2(), arr("x", "z")).unwrap();
        let g3 = ctx(&[
            ("x", Ty::Obj),
            ("y", Ty::Obj),
            ("f", arr("x", "y")),
            ("z", Ty::Obj),
            ("g", arr("y", "z")),
            ("w", Ty::Obj),
            ("h", arr("z", "w")),
        ]);
        let inner = Tm::Coh(comp.clone(), gamma2().id_sub());
        assert_eq!(check_term(&env, &gamma2(), &inner).unwrap(), arr("x", "z"));
        let lcomp = Tm::Coh(
            comp.clone(),
            sub(&[
                ("x", Tm::var("x")),
                ("y", Tm::var("z")),
                ("f", inner.clone()),
                ("z", Tm::var("w")),
                ("g", Tm::var("h")),
            ]),
        );
        assert_eq!(check_term(&env, &g3, &lcomp).unwrap(), arr("x", "w"));

        let wrong = Tm::Coh(
            comp.clone(),
            sub(&[
                ("x", Tm::var("x")),
                ("y", Tm::var("y")),
                ("f", Tm::var("f")),
                ("z", Tm::var("z")),
                ("g", Tm::var("f")),
            ]),
        );
        assert!(matches!(check_term(&env, &gamma2(), &wrong), Err(TypeError::TypeMismatch { .. })));

        let permuted = Tm::Coh(
            comp,
            sub(&[
                ("y", Tm::var("y")),
                ("x", Tm::var("x")),
                ("f", Tm::var("f")),
                ("z", Tm::var("z")),
                ("g", Tm::var("g")),
            ]),
        );
        assert_eq!(check_term(&env, &gamma2(), &permuted).unwrap_err(), TypeError::MissingBinding(v("x")));
    }

    #[test]
    fn registration_rules() {
        let mut env = Environment::new();
        env.register_coh("comp", gamma2(), arr("x", "z")).unwrap();
        assert_eq!(
            env.register_coh("comp", gamma2(), arr("x", "z")).unwrap_err(),
            CattError::DuplicateName("comp".into())
        );
        let (g, t, a) = env.judgement("comp").unwrap();
        assert_eq!(check_term(&env, &g, &t).unwrap(), a);
    }

    #[test]
    fn let_ascription_is_syntactic() {
        let mut env = Environment::new();
        let comp = env.register_coh("comp", gamma2(), arr("x", "z")).unwrap();
        let body = Tm::Coh(comp, gamma2().id_sub());
        assert!(matches!(
            env.register_let("bad", gamma2(), Some(arr("x", "y")), body.clone()),
            Err(CattError::AscriptionMismatch { .. })
        ));
        env.register_let("ok", gamma2(), Some(arr("x", "z")), body).unwrap();
    }
}
