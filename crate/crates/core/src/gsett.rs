//! Derivability of GSeTT judgements, and the syntax-directed checking core
//! that the CaTT checker extends with coherence terms.

use thiserror::Error;

use crate::catt::Environment;
use crate::syntax::{Ctx, Sub, Tm, Ty, UnboundVariable, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Source,
    Target,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(Var),
    #[error("declaration {position} (`{var}`) is ill-typed: {cause}")]
    IllTypedDeclaration { position: usize, var: Var, cause: Box<TypeError> },
    #[error("unbound variable `{0}`")]
    UnboundVariable(Var),
    #[error("{endpoint:?} of arrow has type {found} but the arrow lives over {expected}")]
    SourceTargetTypeMismatch { endpoint: Endpoint, expected: Ty, found: Ty },
    #[error("substitution has no binding for `{0}`")]
    MissingBinding(Var),
    #[error("substitution has an extra binding for `{0}`")]
    ExtraBinding(Var),
    #[error("image of `{var}` has type {got}, expected {expected}")]
    TypeMismatch { var: Var, expected: Ty, got: Ty },
    #[error("coherence `{0}` is not a term of GSeTT")]
    TermConstructorInGsett(String),
    #[error("unknown coherence `{0}`")]
    UnknownCoherence(String),
}

impl From<UnboundVariable> for TypeError {
    fn from(e: UnboundVariable) -> TypeError {
        TypeError::UnboundVariable(e.0)
    }
}

impl TypeError {
    /// The typing rule that failed.
    pub fn rule(&self) -> &'static str {
        match self {
            TypeError::DuplicateVariable(_) => "context-extension",
            TypeError::IllTypedDeclaration { cause, .. } => cause.rule(),
            TypeError::UnboundVariable(_) => "var",
            TypeError::SourceTargetTypeMismatch { .. } => "arrow-type",
            TypeError::MissingBinding(_) | TypeError::ExtraBinding(_) | TypeError::TypeMismatch { .. } => {
                "substitution"
            }
            TypeError::TermConstructorInGsett(_) | TypeError::UnknownCoherence(_) => "coh",
        }
    }
}

/// A certificate that a judgement is derivable. Only the checking functions
/// of this crate construct one.
#[derive(Clone, Debug, PartialEq)]
pub struct Judgement(JudgementKind);

#[derive(Clone, Debug, PartialEq)]
pub enum JudgementKind {
    CtxOk(Ctx),
    TypeOk(Ctx, Ty),
    TermOk(Ctx, Tm, Ty),
    SubOk(Ctx, Sub, Ctx),
}

impl Judgement {
    pub(crate) fn new(kind: JudgementKind) -> Judgement {
        Judgement(kind)
    }

    pub fn kind(&self) -> &JudgementKind {
        &self.0
    }
}

pub fn check_ctx(ctx: &Ctx) -> Result<Judgement, TypeError> {
    check_ctx_in(None, ctx)?;
    Ok(Judgement::new(JudgementKind::CtxOk(ctx.clone())))
}

/// Assumes `ctx` has been checked.
pub fn check_type(ctx: &Ctx, ty: &Ty) -> Result<Judgement, TypeError> {
    check_type_in(None, ctx, ty)?;
    Ok(Judgement::new(JudgementKind::TypeOk(ctx.clone(), ty.clone())))
}

pub fn check_var(ctx: &Ctx, x: &Var) -> Result<(Judgement, Ty), TypeError> {
    let ty = ctx.get(x).cloned().ok_or_else(|| TypeError::UnboundVariable(x.clone()))?;
    let j = Judgement::new(JudgementKind::TermOk(ctx.clone(), Tm::Var(x.clone()), ty.clone()));
    Ok((j, ty))
}

pub fn check_sub(target: &Ctx, sub: &Sub, source: &Ctx) -> Result<Judgement, TypeError> {
    check_sub_in(None, target, sub, source)?;
    Ok(Judgement::new(JudgementKind::SubOk(target.clone(), sub.clone(), source.clone())))
}

pub(crate) fn check_ctx_in(env: Option<&Environment>, ctx: &Ctx) -> Result<(), TypeError> {
    let mut prefix = Ctx::new();
    for (position, (x, ty)) in ctx.iter().enumerate() {
        if prefix.contains(x) {
            return Err(TypeError::DuplicateVariable(x.clone()));
        }
        check_type_in(env, &prefix, ty).map_err(|cause| TypeError::IllTypedDeclaration {
            position,
            var: x.clone(),
            cause: Box::new(cause),
        })?;
        prefix.push(x.clone(), ty.clone());
    }
    Ok(())
}

pub(crate) fn check_type_in(env: Option<&Environment>, ctx: &Ctx, ty: &Ty) -> Result<(), TypeError> {
    match ty {
        Ty::Obj => Ok(()),
        Ty::Arr(base, src, tgt) => {
            // The inferred type of an endpoint is well-formed, so matching it
            // syntactically also validates `base`.
            for (endpoint, t) in [(Endpoint::Source, src), (Endpoint::Target, tgt)] {
                let found = infer_in(env, ctx, t)?;
                if found != **base {
                    return Err(TypeError::SourceTargetTypeMismatch { endpoint, expected: (**base).clone(), found });
                }
            }
            Ok(())
        }
    }
}

pub(crate) fn infer_in(env: Option<&Environment>, ctx: &Ctx, t: &Tm) -> Result<Ty, TypeError> {
    match t {
        Tm::Var(x) => ctx.get(x).cloned().ok_or_else(|| TypeError::UnboundVariable(x.clone())),
        Tm::Coh(c, sub) => {
            let env = env.ok_or_else(|| TypeError::TermConstructorInGsett(c.name().to_owned()))?;
            let coh = env.coherence(c).ok_or_else(|| TypeError::UnknownCoherence(c.name().to_owned()))?;
            check_sub_in(Some(env), ctx, sub, coh.ctx())?;
            Ok(coh.ty().subst(sub)?)
        }
    }
}

pub(crate) fn check_sub_in(env: Option<&Environment>, target: &Ctx, sub: &Sub, source: &Ctx) -> Result<(), TypeError> {
    let mut done = Sub::new();
    for (k, (x, ty)) in source.iter().enumerate() {
        let Some((y, t)) = sub.pairs().get(k) else {
            return Err(TypeError::MissingBinding(x.clone()));
        };
        if x != y {
            return Err(TypeError::MissingBinding(x.clone()));
        }
        let expected = ty.subst(&done)?;
        let got = infer_in(env, target, t)?;
        if got != expected {
            return Err(TypeError::TypeMismatch { var: x.clone(), expected, got });
        }
        done.push(x.clone(), t.clone());
    }
    if let Some((y, _)) = sub.pairs().get(source.len()) {
        return Err(TypeError::ExtraBinding(y.clone()));
    }
    Ok(())
}
