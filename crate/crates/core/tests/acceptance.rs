//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Time limits are pinned below and
//! measured on whatever profile the suite is run under.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use catt_hott::catt::{check_coh, check_sub_catt, check_term, CattError, Environment};
use catt_hott::corpus;
use catt_hott::gen;
use catt_hott::hott::{
    count_redexes, id_tower, lam_lift, normalize, pi_lift, reduce_step, refl_tower, Budget, HTerm, HType, Hint, Kernel,
    DEFAULT_MAX_STEPS,
};
use catt_hott::pasting::{check_ps, Side};
use catt_hott::surface::{load, SurfaceError};
use catt_hott::syntax::{Ctx, Sub, Tm, Ty, Var};
use catt_hott::translate::{Translator, B};

const W_BOUNDARIES_LIMIT: Duration = Duration::from_millis(1);
const PROJECTION_LIMIT: Duration = Duration::from_millis(1);
const REFEREE_LIMIT: Duration = Duration::from_secs(10);
const REFEREE_MIN_ENTRIES: usize = 30;
const FUNCTOR_LIMIT: Duration = Duration::from_secs(5);
const INIT_LIMIT: Duration = Duration::from_secs(2);
const RANDOM_INSTANCES: usize = 1000;
const MAX_TOWER: usize = 4;
const SEED: u64 = 0x5eed_ca77;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type Sizes = Vec<(String, (usize, usize))>;

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("boundaries of W", w_boundaries),
        ("GSeTT projections", projection_judgements),
        ("kernel referee over the corpus", referee),
        ("translation commutes with substitution", functor),
        ("closed terms over (x : *) collapse to refl towers", init_collapse),
        ("J computation and stuck J", eta_j),
        ("towers and liftings", towers_and_lifts),
        ("cut admissibility and functoriality", cut_and_functoriality),
        ("size regression", size_regression),
        ("negative suite", negative),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant, what: &str) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("{what} took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

fn v(s: &str) -> Var {
    Var::new(s)
}

fn obj_arr(x: &str, y: &str) -> Ty {
    Ty::arr(Ty::Obj, Tm::var(x), Tm::var(y))
}

fn ctx(decls: &[(&str, Ty)]) -> Ctx {
    decls.iter().map(|(x, t)| (v(x), t.clone())).collect()
}

fn corpus_env() -> Environment {
    load(corpus::BASIC).expect("bundled corpus loads")
}

fn names(env: &Environment) -> Vec<String> {
    env.names().map(str::to_owned).collect()
}

fn el_b() -> HType {
    HType::el(HTerm::free(B))
}

// ---------------------------------------------------------------------------

fn w_boundaries() -> Outcome {
    let w = ctx(&[
        ("x", Ty::Obj),
        ("y", Ty::Obj),
        ("f", obj_arr("x", "y")),
        ("g", obj_arr("x", "y")),
        ("a", Ty::arr(obj_arr("x", "y"), Tm::var("f"), Tm::var("g"))),
        ("z", Ty::Obj),
        ("h", obj_arr("y", "z")),
    ]);
    let expected = [
        (
            1,
            Side::Minus,
            ctx(&[("x", Ty::Obj), ("y", Ty::Obj), ("f", obj_arr("x", "y")), ("z", Ty::Obj), ("h", obj_arr("y", "z"))]),
        ),
        (
            1,
            Side::Plus,
            ctx(&[("x", Ty::Obj), ("y", Ty::Obj), ("g", obj_arr("x", "y")), ("z", Ty::Obj), ("h", obj_arr("y", "z"))]),
        ),
        (0, Side::Minus, ctx(&[("x", Ty::Obj)])),
        (0, Side::Plus, ctx(&[("z", Ty::Obj)])),
        (2, Side::Minus, w.clone()),
        (2, Side::Plus, w.clone()),
        (3, Side::Minus, w.clone()),
        (3, Side::Plus, w.clone()),
    ];
    let ps = check_ps(&w).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let got: Vec<Ctx> = expected.iter().map(|(i, side, _)| ps.boundary(*i, *side).ctx).collect();
    let t = within(W_BOUNDARIES_LIMIT, start, "boundary computation")?;
    for ((i, side, want), got) in expected.iter().zip(&got) {
        ensure(want == got, || format!("boundary {side} at level {i}: got {got}, expected {want}"))?;
    }
    Ok(format!("{} boundaries exact in {t:.2?}", expected.len()))
}

fn projection_judgements() -> Outcome {
    let env = Environment::new();
    let tr = Translator::new(&env);
    let rows = [
        (ctx(&[("x", Ty::Obj)]), "x", Ty::Obj),
        (ctx(&[("x", Ty::Obj), ("f", obj_arr("x", "x"))]), "f", obj_arr("x", "x")),
        (ctx(&[("x", Ty::Obj), ("y", Ty::Obj), ("f", obj_arr("x", "y"))]), "y", Ty::Obj),
    ];
    let bx = || el_b();
    let id = |a: &str, b: &str| HType::id(el_b(), HTerm::free(a), HTerm::free(b));
    let lam_b = |body| HTerm::lam(B, HType::Universe, body);
    let expected = [
        lam_b(HTerm::lam("x", bx(), HTerm::free("x"))),
        lam_b(HTerm::lam("x", bx(), HTerm::lam("f", id("x", "x"), HTerm::free("f")))),
        lam_b(HTerm::lam("x", bx(), HTerm::lam("y", bx(), HTerm::lam("f", id("x", "y"), HTerm::free("y"))))),
    ];
    let start = Instant::now();
    let mut got = Vec::new();
    for (c, t, ty) in &rows {
        got.push(tr.translate_judgement(c, &Tm::var(t), ty).map_err(|e| e.to_string())?.closed_tm);
    }
    let t = within(PROJECTION_LIMIT, start, "translation of the three rows")?;
    for (i, (g, e)) in got.iter().zip(&expected).enumerate() {
        ensure(g == e, || format!("row {}: got {g:?}, expected {e:?}", i + 1))?;
    }
    Ok(format!("3 rows α-equal in {t:.2?}"))
}

fn referee() -> Outcome {
    let start = Instant::now();
    let env = corpus_env();
    let names = names(&env);
    ensure(names.len() >= REFEREE_MIN_ENTRIES, || format!("corpus has only {} entries", names.len()))?;
    let tr = Translator::new(&env);
    let failures: Vec<String> =
        tr.translate_all(&names).into_iter().filter_map(|(n, r)| r.err().map(|e| format!("{n}: {e}"))).collect();
    ensure(failures.is_empty(), || failures.join("; "))?;
    let t = within(REFEREE_LIMIT, start, "corpus")?;
    Ok(format!("{} entries, open and closed judgements accepted in {t:.2?}", names.len()))
}

fn functor() -> Outcome {
    let env = corpus_env();
    let tr = Translator::new(&env).without_verification();
    let mut rng = gen::rng(SEED);
    let start = Instant::now();
    for i in 0..RANDOM_INSTANCES {
        let gamma_ctx = gen::ps_context(&mut rng, 3, 2, "g");
        let dom = gamma_ctx.var_list();
        let delta_vars = gen::ps_context(&mut rng, 3, 2, "d").var_list();
        // Small pairs: one layer of coherences in t, one more in the images.
        let t = gen::presyntax_tm(&mut rng, &env, &dom, 1);
        let sub = gen::presyntax_sub(&mut rng, &env, &dom, &delta_vars, 1);
        let lhs = tr.interp_tm(&t.subst(&sub).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let rhs = tr
            .interp_tm(&t)
            .map_err(|e| e.to_string())?
            .subst(&tr.interp_sub(&sub).map_err(|e| e.to_string())?)
            .map_err(|e| format!("instance {i}: {e:?}"))?;
        ensure(lhs == rhs, || format!("instance {i}: t = {t}, γ = {sub:?}"))?;
    }
    let t = within(FUNCTOR_LIMIT, start, "functor instances")?;
    Ok(format!("{RANDOM_INSTANCES} random (term, substitution) pairs in {t:.2?}"))
}

fn init_collapse() -> Outcome {
    let start = Instant::now();
    let env = corpus_env();
    let point = ctx(&[("x", Ty::Obj)]);
    let mut cases: Vec<(String, Tm, Ty)> = names(&env)
        .into_iter()
        .filter_map(|n| env.judgement(&n).filter(|(c, _, _)| *c == point).map(|(_, t, ty)| (n, t, ty)))
        .collect();
    let corpus_cases = cases.len();
    let mut rng = gen::rng(SEED);
    for c in gen::term_pool(&mut rng, &env, &point, 200, 40).into_iter().skip(1) {
        cases.push((c.tm.to_string(), c.tm, c.ty));
    }
    let tr = Translator::new(&env).without_verification();
    let mut max_dim = 0;
    for (name, t, ty) in &cases {
        let body = tr.interp_tm(t).map_err(|e| e.to_string())?;
        let nf = normalize(&body, &mut Budget::new(DEFAULT_MAX_STEPS)).map_err(|e| e.to_string())?;
        let dim = usize::try_from(ty.dim() + 1).expect("term types are arrows or objects");
        max_dim = max_dim.max(dim);
        let want = refl_tower(&el_b(), &HTerm::free("x"), dim);
        ensure(nf == want, || format!("{name}: normal form {nf:?}"))?;
    }
    ensure(max_dim >= MAX_TOWER, || format!("deepest tower {max_dim}"))?;
    let t = within(INIT_LIMIT, start, "collapse check")?;
    Ok(format!(
        "{corpus_cases} corpus entries and {} generated terms, towers up to {max_dim}, in {t:.2?}",
        cases.len() - corpus_cases
    ))
}

fn eta_j() -> Outcome {
    let a = el_b();
    let u = HTerm::free("u");
    let motive = HType::id(a.clone(), HTerm::Bound(2), HTerm::Bound(1));
    let p = HTerm::free("p");
    let j = HTerm::j(a.clone(), u.clone(), [Hint::none(), Hint::none(), Hint::none()], motive, p.clone());
    let redex = HTerm::app(HTerm::app(j.clone(), u.clone()), HTerm::refl(a.clone(), u.clone()));
    ensure(count_redexes(&redex) == 1, || "expected exactly one redex".into())?;
    let step = reduce_step(&redex);
    ensure(step.as_ref() == Some(&p), || format!("one step gave {step:?}"))?;
    let stuck = HTerm::app(HTerm::app(j, HTerm::free("v")), HTerm::free("e"));
    ensure(reduce_step(&stuck).is_none(), || "J on a variable path reduced".into())?;
    ensure(count_redexes(&stuck) == 0, || "J on a variable path counted as a redex".into())?;
    let nf = normalize(&stuck, &mut Budget::new(10)).map_err(|e| e.to_string())?;
    ensure(nf == stuck, || "stuck J changed under normalization".into())?;
    Ok("redex contracts to its base in one step; stuck J is normal".into())
}

fn towers_and_lifts() -> Outcome {
    let env = corpus_env();
    let kernel = Kernel::default();
    let tr = Translator::new(&env).without_verification();
    let mut towers = 0;
    let names = names(&env);
    for n in &names {
        let (c, t, ty) = env.judgement(n).expect("listed names resolve");
        let hc = tr.interp_ctx(&c).map_err(|e| e.to_string())?;
        for (x, _) in c.iter().filter(|(_, ty)| *ty == Ty::Obj) {
            for k in 0..=MAX_TOWER {
                let x = HTerm::free(x.as_str());
                kernel
                    .check(&hc, &refl_tower(&el_b(), &x, k), &id_tower(&el_b(), &x, k))
                    .map_err(|e| format!("{n}: tower {k}: {e}"))?;
                towers += 1;
            }
        }
        let hty = tr.interp_ty(&ty).map_err(|e| e.to_string())?;
        let htm = tr.interp_tm(&t).map_err(|e| e.to_string())?;
        kernel.check_closed(&lam_lift(&hc, &htm), &pi_lift(&hc, &hty)).map_err(|e| format!("{n}: lifting: {e}"))?;
    }
    Ok(format!("{towers} towers and {} closed liftings accepted", names.len()))
}

fn cut_and_functoriality() -> Outcome {
    let env = corpus_env();
    let mut rng = gen::rng(SEED ^ 1);
    let err = |e: catt_hott::syntax::UnboundVariable| e.to_string();
    for i in 0..RANDOM_INSTANCES {
        let xs = gen::ps_context(&mut rng, 3, 2, "a").var_list();
        let ys = gen::ps_context(&mut rng, 3, 2, "b").var_list();
        let zs = gen::ps_context(&mut rng, 3, 2, "c").var_list();
        let ty = gen::presyntax_ty(&mut rng, &env, &xs, 2, 2);
        let t = gen::presyntax_tm(&mut rng, &env, &xs, 2);
        let delta = gen::presyntax_sub(&mut rng, &env, &xs, &ys, 1);
        let gamma = gen::presyntax_sub(&mut rng, &env, &ys, &zs, 1);
        let composed = delta.compose(&gamma).map_err(err)?;
        ensure(
            ty.subst(&composed).map_err(err)? == ty.subst(&delta).map_err(err)?.subst(&gamma).map_err(err)?,
            || format!("instance {i}: A[δ∘γ] ≠ A[δ][γ] for A = {ty}"),
        )?;
        ensure(t.subst(&composed).map_err(err)? == t.subst(&delta).map_err(err)?.subst(&gamma).map_err(err)?, || {
            format!("instance {i}: t[δ∘γ] ≠ t[δ][γ] for t = {t}")
        })?;
        let id_x: Sub = xs.iter().map(|x| (x.clone(), Tm::Var(x.clone()))).collect();
        let id_z: Sub = zs.iter().map(|z| (z.clone(), Tm::Var(z.clone()))).collect();
        ensure(t.subst(&id_x).map_err(err)? == t, || format!("instance {i}: t[id] ≠ t for t = {t}"))?;
        ensure(ty.subst(&id_x).map_err(err)? == ty, || format!("instance {i}: A[id] ≠ A for A = {ty}"))?;
        ensure(gamma.compose(&id_z).map_err(err)? == gamma, || format!("instance {i}: γ∘id ≠ γ"))?;
    }
    // Typed cut: Γ ⊢ t : A and Δ ⊢ γ : Γ give Δ ⊢ t[γ] : A[γ].
    let mut cuts = 0;
    let mut attempts = 0;
    while cuts < RANDOM_INSTANCES {
        attempts += 1;
        ensure(attempts < 50 * RANDOM_INSTANCES, || format!("only {cuts} typed cut instances generated"))?;
        let gamma_ctx = gen::ps_context(&mut rng, 3, 2, "g");
        let delta_ctx = gen::ps_context(&mut rng, 4, 3, "d");
        let terms = gen::term_pool(&mut rng, &env, &gamma_ctx, 8, 30);
        let images = gen::term_pool(&mut rng, &env, &delta_ctx, 12, 30);
        let ps = check_ps(&gamma_ctx).map_err(|e| e.to_string())?;
        let Some(sub) = gen::ps_sub(&mut rng, &ps, &images) else { continue };
        check_sub_catt(&env, &delta_ctx, &sub, &gamma_ctx).map_err(|e| format!("generated substitution: {e}"))?;
        let pick = &terms[cuts % terms.len()];
        let found = check_term(&env, &delta_ctx, &pick.tm.subst(&sub).map_err(err)?)
            .map_err(|e| format!("cut instance {cuts}: {e}"))?;
        ensure(found == pick.ty.subst(&sub).map_err(err)?, || format!("cut instance {cuts}: type {found}"))?;
        cuts += 1;
    }
    Ok(format!("{RANDOM_INSTANCES} instances of each syntactic law and {cuts} typed cuts"))
}

fn size_regression() -> Outcome {
    let golden = include_str!("golden/sizes.txt");
    let pinned: BTreeMap<&str, (usize, usize)> = golden
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f[0], (f[1].parse().expect("node count"), f[2].parse().expect("printed size")))
        })
        .collect();
    let names: Vec<String> = pinned.keys().map(|s| s.to_string()).collect();
    let run = || -> Result<Sizes, String> {
        let env = corpus_env();
        let tr = Translator::new(&env);
        tr.translate_all_sequential(&names)
            .into_iter()
            .map(|(n, r)| r.map(|r| (n, (r.stats.node_count, r.stats.printed_size))).map_err(|e| e.to_string()))
            .collect()
    };
    let first = run()?;
    ensure(first == run()?, || "sizes differ between runs".into())?;
    for (n, got) in &first {
        let want = pinned[n.as_str()];
        ensure(*got == want, || format!("{n}: measured {got:?}, pinned {want:?}"))?;
    }
    Ok(first.iter().map(|(n, (a, b))| format!("{n} {a}/{b}")).collect::<Vec<_>>().join(", "))
}

/// The Eckmann-Hilton development, verbatim.
const ECKMANN_HILTON: &str = r"coh unitl (x(f)y) : comp (id _) f -> f
coh unit (x) : comp (id x) (id x) -> id x
coh lsimp (x) : (unitl (id x)) -> unit x
coh Ilsimp (x) : I (unitl (id x)) -> I (unit x)
coh exch (x(f(a)g)y(h(b)k)z) :
  comp (comp _ [b]) (id (comp f k)) (comp [a] _) -> comp [a] [b]

coh eh1 (x(f(a)g(b)h)y) :
comp a b -> comp (I (unitl f))
                 (comp (comp _ [a])
                       (comp (unitl g) (I (op { 1 } (unitl g))))
                       (comp [b] _))
                 (op { 1 } (unitl h))

let eh2 (x : *) (a : id x -> id x) (b : id x -> id x) =
comp [Ilsimp _]
     [comp (comp _
                 [comp
                   (comp [lsimp _] [op { 1 } (Ilsimp _)])
                   (U (unit _))]
                 _)
           (exch b a)]
     [op { 1 } (lsimp _)]

let eh (x : *) (a : id x -> id x) (b : id x -> id x) =
comp (eh1 a b)
     (eh2 a b)
     (I (op { 1 } (eh2 b a)))
     (I (op { 1 } (eh1 b a)))
";

fn negative() -> Outcome {
    let err = match load(ECKMANN_HILTON) {
        Ok(_) => return Err("Eckmann-Hilton source was accepted".into()),
        Err(e) => e,
    };
    ensure(err.is_meta_operation(), || format!("wrong diagnostic: {err}"))?;
    ensure(err.to_string().contains("meta-operation unsupported"), || format!("wrong message: {err}"))?;
    let (line, col) = ECKMANN_HILTON
        .lines()
        .enumerate()
        .find_map(|(i, l)| l.find(['[', '{']).map(|c| (i + 1, c + 1)))
        .expect("source has a bracket");
    ensure(err.pos().line == line && err.pos().col == col, || {
        format!("reported at {}, expected {line}:{col}", err.pos())
    })?;

    let empty = Environment::new();
    let gamma2 =
        ctx(&[("x", Ty::Obj), ("y", Ty::Obj), ("f", obj_arr("x", "y")), ("z", Ty::Obj), ("g", obj_arr("y", "z"))]);
    let cases = [
        (ctx(&[("x", Ty::Obj), ("y", Ty::Obj), ("f", obj_arr("x", "y"))]), obj_arr("y", "y"), Side::Minus),
        (gamma2, obj_arr("x", "y"), Side::Plus),
    ];
    for (c, ty, side) in cases {
        match check_coh(&empty, "bad", c, ty.clone()) {
            Err(CattError::VarConditionFailed { side: s, .. }) if s == side => {}
            other => return Err(format!("coh over {ty}: expected a {side} variable-condition failure, got {other:?}")),
        }
    }
    match load("coh bad (x y : *) (f : x -> y) (z : *) (g : y -> z) : x -> y") {
        Err(SurfaceError::Check { error, .. })
            if matches!(*error, CattError::VarConditionFailed { side: Side::Plus, .. }) => {}
        other => return Err(format!("surface rejection: {other:?}")),
    }
    Ok(format!("meta-operation reported at {line}:{col}; variable conditions name both sides"))
}
