//! Random well-formed inputs: pasting contexts, well-typed terms built from
//! an environment's coherences, substitutions between them, and untyped
//! pre-syntax. Everything is driven by a caller-supplied RNG so runs are
//! reproducible from a seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catt::Environment;
use crate::pasting::PsDerivation;
use crate::syntax::{Ctx, Sub, Tm, Ty, Var};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A pasting context with at most `max_steps` extension steps and
/// dimension at most `max_dim`. Variables are `{prefix}0`, `{prefix}1`, ….
pub fn ps_context<R: Rng>(rng: &mut R, max_steps: usize, max_dim: usize, prefix: &str) -> Ctx {
    let mut fresh = 0usize;
    let mut next = |ctx: &Ctx| loop {
        let v = Var::new(&format!("{prefix}{fresh}"));
        fresh += 1;
        if !ctx.contains(&v) {
            break v;
        }
    };
    let mut ctx = Ctx::new();
    let x0 = next(&ctx);
    ctx.push(x0.clone(), Ty::Obj);
    // The dangling cell and its type.
    let mut cur = Tm::Var(x0);
    let mut cur_ty = Ty::Obj;
    let steps = rng.gen_range(0..=max_steps);
    for _ in 0..steps {
        // Walk down a random number of levels, then extend.
        while let Ty::Arr(base, _, tgt) = &cur_ty {
            // A filler over `cur_ty` is a cell of dimension `dim cur_ty + 2`.
            if cur_ty.dim() + 2 > max_dim as i64 || rng.gen_bool(0.4) {
                cur = (**tgt).clone();
                cur_ty = (**base).clone();
            } else {
                break;
            }
        }
        let y = next(&ctx);
        ctx.push(y.clone(), cur_ty.clone());
        let f = next(&ctx);
        let f_ty = Ty::arr(cur_ty, cur, Tm::Var(y));
        ctx.push(f.clone(), f_ty.clone());
        cur = Tm::Var(f);
        cur_ty = f_ty;
    }
    ctx
}

/// A typed term over some fixed context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Typed {
    pub tm: Tm,
    pub ty: Ty,
}

/// A substitution from the pasting context `ps` into the context the pool
/// lives in, built step by step so that it is well typed by construction.
/// `None` if some filler has no candidate image.
pub fn ps_sub<R: Rng>(rng: &mut R, ps: &PsDerivation, pool: &[Typed]) -> Option<Sub> {
    let objects: Vec<&Typed> = pool.iter().filter(|c| c.ty == Ty::Obj).collect();
    let mut sub = Sub::new();
    sub.push(ps.base().clone(), objects.choose(rng)?.tm.clone());
    for step in ps.steps() {
        let base = step.base.subst(&sub).ok()?;
        let src = sub.get(&step.src)?.clone();
        let candidates: Vec<(&Typed, &Tm)> = pool
            .iter()
            .filter_map(|c| match &c.ty {
                Ty::Arr(b, s, t) if **b == base && **s == src => Some((c, &**t)),
                _ => None,
            })
            .collect();
        let (filler, tgt) = candidates.choose(rng)?;
        sub.push(step.tgt.clone(), (*tgt).clone());
        sub.push(step.filler.clone(), filler.tm.clone());
    }
    Some(sub)
}

/// Well-typed terms over `ctx`: its variables, then `rounds` attempts at
/// applying a random coherence of `env` to earlier terms. Terms larger
/// than `max_size` are discarded.
pub fn term_pool<R: Rng>(rng: &mut R, env: &Environment, ctx: &Ctx, rounds: usize, max_size: usize) -> Vec<Typed> {
    let mut pool: Vec<Typed> = ctx.iter().map(|(x, ty)| Typed { tm: Tm::Var(x.clone()), ty: ty.clone() }).collect();
    let cohs: Vec<_> = env.coherences().collect();
    if cohs.is_empty() {
        return pool;
    }
    for _ in 0..rounds {
        let (id, coh) = cohs.choose(rng).expect("non-empty");
        let Some(sub) = ps_sub(rng, coh.ps(), &pool) else { continue };
        let Ok(ty) = coh.ty().subst(&sub) else { continue };
        let tm = Tm::Coh(id.clone(), sub);
        if tm.size() <= max_size && !pool.iter().any(|c| c.tm == tm) {
            pool.push(Typed { tm, ty });
        }
    }
    pool
}

/// Untyped terms over `vars` whose heads are coherences of `env` applied
/// to arbitrary arguments: enough to exercise the syntactic lemmas, which
/// do not depend on typing.
pub fn presyntax_tm<R: Rng>(rng: &mut R, env: &Environment, vars: &[Var], depth: usize) -> Tm {
    let cohs: Vec<_> = env.coherences().collect();
    if depth == 0 || cohs.is_empty() || rng.gen_bool(0.4) {
        return Tm::Var(vars.choose(rng).expect("non-empty variable list").clone());
    }
    let (id, coh) = cohs.choose(rng).expect("non-empty");
    let sub = coh.ctx().iter().map(|(x, _)| (x.clone(), presyntax_tm(rng, env, vars, depth - 1))).collect();
    Tm::Coh(id.clone(), sub)
}

/// Untyped substitution with domain `dom` and images over `vars`.
pub fn presyntax_sub<R: Rng>(rng: &mut R, env: &Environment, dom: &[Var], vars: &[Var], depth: usize) -> Sub {
    dom.iter().map(|x| (x.clone(), presyntax_tm(rng, env, vars, depth))).collect()
}

/// Untyped type of dimension `dim` over `vars`.
pub fn presyntax_ty<R: Rng>(rng: &mut R, env: &Environment, vars: &[Var], dim: usize, depth: usize) -> Ty {
    (0..dim).fold(Ty::Obj, |base, _| {
        Ty::arr(base, presyntax_tm(rng, env, vars, depth), presyntax_tm(rng, env, vars, depth))
    })
}
