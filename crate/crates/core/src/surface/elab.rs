use std::collections::HashMap;

use super::lexer::Pos;
use super::parser::{parse_spanned, Binder, SurfaceDecl, SurfaceExpr};
use super::{ElabError, SurfaceError};
use crate::catt::{check_sub_catt, Decl, EntryRef, Environment};
use crate::syntax::{Ctx, Sub, Tm, Ty, Var};

/// Names that only exist as meta-operations (inverses and unit witnesses).
const META_HEADS: [&str; 2] = ["I", "U"];

/// Elaborates a surface term in `ctx`, returning it with its type.
pub fn elaborate(env: &Environment, ctx: &Ctx, e: &SurfaceExpr) -> Result<(Tm, Ty), ElabError> {
    match e {
        SurfaceExpr::Ident(x) => {
            if let Some(ty) = Var::try_new(x).and_then(|v| ctx.get(&v)) {
                return Ok((Tm::var(x), ty.clone()));
            }
            apply(env, ctx, x, &[], false)
        }
        SurfaceExpr::App { head, args, explicit } => {
            if Var::try_new(head).is_some_and(|v| ctx.contains(&v)) {
                return Err(ElabError::NotAFunction(head.clone()));
            }
            apply(env, ctx, head, args, *explicit)
        }
        SurfaceExpr::Arrow(..) | SurfaceExpr::Star => Err(ElabError::ExpectedTerm),
    }
}

fn apply(
    env: &Environment,
    ctx: &Ctx,
    head: &str,
    args: &[SurfaceExpr],
    explicit: bool,
) -> Result<(Tm, Ty), ElabError> {
    let Some(entry) = env.lookup(head) else {
        if META_HEADS.contains(&head) {
            return Err(ElabError::MetaOperation(head.to_owned()));
        }
        return Err(ElabError::UnknownName(head.to_owned()));
    };
    let delta = entry.ctx();
    let slots: Vec<usize> = if explicit {
        (0..delta.len()).collect()
    } else {
        entry.implicit_mask().iter().enumerate().filter(|(_, i)| !**i).map(|(k, _)| k).collect()
    };
    if slots.len() != args.len() {
        return Err(ElabError::ArityMismatch { head: head.to_owned(), expected: slots.len(), found: args.len() });
    }
    let mut elaborated = Vec::with_capacity(args.len());
    for a in args {
        elaborated.push(elaborate(env, ctx, a)?);
    }

    let mut assign: HashMap<Var, Tm> = HashMap::new();
    for (&k, (t, _)) in slots.iter().zip(&elaborated) {
        assign.insert(delta.decls()[k].0.clone(), t.clone());
    }
    if !explicit {
        for (&k, (_, found)) in slots.iter().zip(&elaborated) {
            let (x, declared) = &delta.decls()[k];
            if !match_ty(declared, found, &mut assign) {
                return Err(ElabError::ElaborationTypeMismatch {
                    var: x.clone(),
                    expected: declared.clone(),
                    found: found.clone(),
                });
            }
        }
    }
    let mut sub = Sub::new();
    for (x, _) in delta.iter() {
        let t = assign.get(x).ok_or_else(|| ElabError::CannotInferImplicit(x.clone()))?;
        sub.push(x.clone(), t.clone());
    }
    check_sub_catt(env, ctx, &sub, delta)?;
    let ty = entry.ty().subst(&sub).map_err(crate::gsett::TypeError::from)?;
    Ok((entry.instantiate(sub)?, ty))
}

/// First-order matching of a pattern type (over the head's context) against
/// a concrete type, extending `assign`.
fn match_ty(pattern: &Ty, found: &Ty, assign: &mut HashMap<Var, Tm>) -> bool {
    match (pattern, found) {
        (Ty::Obj, Ty::Obj) => true,
        (Ty::Arr(pb, ps, pt), Ty::Arr(fb, fs, ft)) => {
            match_ty(pb, fb, assign) && match_tm(ps, fs, assign) && match_tm(pt, ft, assign)
        }
        _ => false,
    }
}

fn match_tm(pattern: &Tm, found: &Tm, assign: &mut HashMap<Var, Tm>) -> bool {
    match pattern {
        Tm::Var(x) => match assign.get(x) {
            Some(t) => t == found,
            None => {
                assign.insert(x.clone(), found.clone());
                true
            }
        },
        Tm::Coh(c, psub) => match found {
            Tm::Coh(d, fsub) if c == d && psub.len() == fsub.len() => {
                psub.iter().zip(fsub.iter()).all(|((x, p), (y, f))| x == y && match_tm(p, f, assign))
            }
            _ => false,
        },
    }
}

pub fn elaborate_ty(env: &Environment, ctx: &Ctx, e: &SurfaceExpr) -> Result<Ty, ElabError> {
    match e {
        SurfaceExpr::Star => Ok(Ty::Obj),
        SurfaceExpr::Arrow(s, t) => {
            let (src, sty) = elaborate(env, ctx, s)?;
            let (tgt, tty) = elaborate(env, ctx, t)?;
            if sty != tty {
                return Err(ElabError::ArrowEndpointMismatch { src: sty, tgt: tty });
            }
            Ok(Ty::arr(sty, src, tgt))
        }
        other => Err(ElabError::ExpectedType(other.to_string())),
    }
}

pub fn elaborate_ctx(env: &Environment, params: &[Binder]) -> Result<Ctx, ElabError> {
    let mut ctx = Ctx::new();
    for b in params {
        for name in &b.names {
            let x = Var::try_new(name).ok_or_else(|| ElabError::InvalidName(name.clone()))?;
            let ty = elaborate_ty(env, &ctx, &b.ty)?;
            ctx.push(x, ty);
        }
    }
    Ok(ctx)
}

pub fn elaborate_decl(env: &Environment, decl: &SurfaceDecl) -> Result<Decl, ElabError> {
    match decl {
        SurfaceDecl::Coh { name, params, ty } => {
            let ctx = elaborate_ctx(env, params)?;
            let ty = elaborate_ty(env, &ctx, ty)?;
            Ok(Decl::Coh { name: name.clone(), ctx, ty })
        }
        SurfaceDecl::Let { name, params, ty, body } => {
            let ctx = elaborate_ctx(env, params)?;
            let ty = ty.as_ref().map(|t| elaborate_ty(env, &ctx, t)).transpose()?;
            let (body, _) = elaborate(env, &ctx, body)?;
            Ok(Decl::Let { name: name.clone(), ctx, ty, body })
        }
    }
}

/// Elaborates and registers every declaration of `text` into `env`.
///
/// Syntax errors abort immediately. Otherwise, with `keep_going` a rejected
/// declaration is skipped and the remaining ones are still checked.
pub fn load_into(env: &mut Environment, text: &str, keep_going: bool) -> Result<Loaded, Vec<SurfaceError>> {
    let decls = parse_spanned(text).map_err(|e| vec![e])?;
    let mut errors = Vec::new();
    let mut loaded = Loaded::default();
    for (pos, d) in decls {
        match register(env, pos, &d) {
            Ok(()) => loaded.names.push(d.name().to_owned()),
            Err(e) => {
                errors.push(e);
                if !keep_going {
                    break;
                }
            }
        }
    }
    if errors.is_empty() {
        Ok(loaded)
    } else {
        Err(errors)
    }
}

/// Names registered by a successful [`load_into`], in source order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Loaded {
    pub names: Vec<String>,
}

fn register(env: &mut Environment, pos: Pos, d: &SurfaceDecl) -> Result<(), SurfaceError> {
    let decl_name = d.name().to_owned();
    let decl = elaborate_decl(env, d).map_err(|error| SurfaceError::Elab { pos, decl: decl_name.clone(), error })?;
    env.register(decl).map_err(|error| SurfaceError::Check { pos, decl: decl_name, error: Box::new(error) })?;
    Ok(())
}

/// Parses and checks a whole file, stopping at the first error.
pub fn load(text: &str) -> Result<Environment, SurfaceError> {
    let mut env = Environment::new();
    load_into(&mut env, text, false).map_err(|mut es| es.remove(0))?;
    Ok(env)
}

/// The elaborated form of an entry, every argument explicit, in surface
/// syntax that parses and elaborates back to the same entry.
pub fn print_entry(env: &Environment, name: &str) -> Option<String> {
    Some(match env.lookup(name)? {
        EntryRef::Coh(_, c) => format!("coh {name} {} : {}", c.ctx(), c.ty()),
        EntryRef::Let(l) => format!("let {name} {} : {} = {}", l.ctx(), l.ty(), l.body()),
    })
}
