//! Locally nameless syntax: free variables are names, bound variables are de
//! Bruijn indices. Binder names are kept only as printing hints and are
//! ignored by equality, so `==` is α-equivalence.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

pub type Name = Arc<str>;

/// A binder's display name. Never affects equality or hashing.
#[derive(Clone, Default)]
pub struct Hint(pub Option<Name>);

impl Hint {
    pub fn none() -> Hint {
        Hint(None)
    }

    pub fn named(name: &str) -> Hint {
        Hint(Some(Arc::from(name)))
    }

    pub fn as_str(&self) -> Option<&str> {
        self.0.as_deref()
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Hint) -> bool {
        true
    }
}

impl Eq for Hint {}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Debug for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str().unwrap_or("_"))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum HType {
    Universe,
    El(Box<HTerm>),
    Id(Box<HType>, Box<HTerm>, Box<HTerm>),
    /// The codomain is under one binder.
    Pi(Hint, Box<HType>, Box<HType>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum HTerm {
    Free(Name),
    Bound(usize),
    Refl(Box<HType>, Box<HTerm>),
    J(Box<JElim>),
    /// The body is under one binder.
    Lam(Hint, Box<HType>, Box<HTerm>),
    App(Box<HTerm>, Box<HTerm>),
}

/// `J(A, u, (x' y' e'). P, p)`: based path induction. In `motive`,
/// index 2 is `x'`, index 1 is `y'` and index 0 is `e'`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct JElim {
    pub ty: HType,
    pub point: HTerm,
    pub hints: [Hint; 3],
    pub motive: HType,
    pub base: HTerm,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unbound variable `{0}`")]
pub struct HUnbound(pub Name);

static FRESH: AtomicU64 = AtomicU64::new(0);

/// A name outside the CaTT identifier alphabet, unique in this process.
pub fn fresh_name() -> Name {
    Arc::from(format!("%{}", FRESH.fetch_add(1, Ordering::Relaxed)))
}

impl HTerm {
    pub fn free(name: &str) -> HTerm {
        HTerm::Free(Arc::from(name))
    }

    pub fn refl(ty: HType, t: HTerm) -> HTerm {
        HTerm::Refl(Box::new(ty), Box::new(t))
    }

    pub fn app(f: HTerm, a: HTerm) -> HTerm {
        HTerm::App(Box::new(f), Box::new(a))
    }

    pub fn j(ty: HType, point: HTerm, hints: [Hint; 3], motive: HType, base: HTerm) -> HTerm {
        HTerm::J(Box::new(JElim { ty, point, hints, motive, base }))
    }

    /// `λ(x:A).body` with `x` bound wherever it occurs free in `body`.
    pub fn lam(x: &str, dom: HType, body: HTerm) -> HTerm {
        let body = body.close(x, 0);
        HTerm::Lam(Hint::named(x), Box::new(dom), Box::new(body))
    }

    pub fn as_free(&self) -> Option<&str> {
        match self {
            HTerm::Free(x) => Some(x),
            _ => None,
        }
    }

    /// Replaces the free variable `x` by `Bound(depth)` (adjusted under binders).
    pub fn close(&self, x: &str, depth: usize) -> HTerm {
        self.map_free(depth, &|name, d| (&**name == x).then_some(HTerm::Bound(d)))
    }

    /// Replaces `Bound(k)` (relative to the current depth) by `arg`, which
    /// may itself contain loose indices, and lowers the indices above `k`.
    pub fn instantiate(&self, k: usize, arg: &HTerm) -> HTerm {
        match self {
            HTerm::Free(_) => self.clone(),
            HTerm::Bound(i) => match (*i).cmp(&k) {
                std::cmp::Ordering::Equal => arg.shift(0, k as isize),
                std::cmp::Ordering::Greater => HTerm::Bound(i - 1),
                std::cmp::Ordering::Less => self.clone(),
            },
            HTerm::Refl(a, u) => HTerm::refl(a.instantiate(k, arg), u.instantiate(k, arg)),
            HTerm::J(j) => HTerm::J(Box::new(JElim {
                ty: j.ty.instantiate(k, arg),
                point: j.point.instantiate(k, arg),
                hints: j.hints.clone(),
                motive: j.motive.instantiate(k + 3, arg),
                base: j.base.instantiate(k, arg),
            })),
            HTerm::Lam(h, a, b) => {
                HTerm::Lam(h.clone(), Box::new(a.instantiate(k, arg)), Box::new(b.instantiate(k + 1, arg)))
            }
            HTerm::App(f, a) => HTerm::app(f.instantiate(k, arg), a.instantiate(k, arg)),
        }
    }

    /// Adds `d` to every index at or above `cutoff`.
    pub fn shift(&self, cutoff: usize, d: isize) -> HTerm {
        if d == 0 {
            return self.clone();
        }
        match self {
            HTerm::Free(_) => self.clone(),
            HTerm::Bound(i) if *i >= cutoff => HTerm::Bound((*i as isize + d) as usize),
            HTerm::Bound(_) => self.clone(),
            HTerm::Refl(a, u) => HTerm::refl(a.shift(cutoff, d), u.shift(cutoff, d)),
            HTerm::J(j) => HTerm::J(Box::new(JElim {
                ty: j.ty.shift(cutoff, d),
                point: j.point.shift(cutoff, d),
                hints: j.hints.clone(),
                motive: j.motive.shift(cutoff + 3, d),
                base: j.base.shift(cutoff, d),
            })),
            HTerm::Lam(h, a, b) => {
                HTerm::Lam(h.clone(), Box::new(a.shift(cutoff, d)), Box::new(b.shift(cutoff + 1, d)))
            }
            HTerm::App(f, a) => HTerm::app(f.shift(cutoff, d), a.shift(cutoff, d)),
        }
    }

    /// Rebuilds the term, replacing free variables for which `f` returns a
    /// term. `f` receives the binder depth; returned terms must be locally
    /// closed apart from the indices `f` produces itself.
    pub(crate) fn map_free(&self, depth: usize, f: &dyn Fn(&Name, usize) -> Option<HTerm>) -> HTerm {
        match self {
            HTerm::Free(x) => f(x, depth).unwrap_or_else(|| self.clone()),
            HTerm::Bound(_) => self.clone(),
            HTerm::Refl(a, u) => HTerm::refl(a.map_free(depth, f), u.map_free(depth, f)),
            HTerm::J(j) => HTerm::J(Box::new(JElim {
                ty: j.ty.map_free(depth, f),
                point: j.point.map_free(depth, f),
                hints: j.hints.clone(),
                motive: j.motive.map_free(depth + 3, f),
                base: j.base.map_free(depth, f),
            })),
            HTerm::Lam(h, a, b) => {
                HTerm::Lam(h.clone(), Box::new(a.map_free(depth, f)), Box::new(b.map_free(depth + 1, f)))
            }
            HTerm::App(g, a) => HTerm::app(g.map_free(depth, f), a.map_free(depth, f)),
        }
    }

    pub fn collect_free(&self, out: &mut BTreeSet<Name>) {
        match self {
            HTerm::Free(x) => {
                out.insert(x.clone());
            }
            HTerm::Bound(_) => {}
            HTerm::Refl(a, u) => {
                a.collect_free(out);
                u.collect_free(out);
            }
            HTerm::J(j) => {
                j.ty.collect_free(out);
                j.point.collect_free(out);
                j.motive.collect_free(out);
                j.base.collect_free(out);
            }
            HTerm::Lam(_, a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            HTerm::App(f, a) => {
                f.collect_free(out);
                a.collect_free(out);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    /// True when no index escapes its binders.
    pub fn is_locally_closed(&self) -> bool {
        self.max_loose(0) == 0
    }

    /// One more than the largest index escaping `depth` binders, or 0.
    fn max_loose(&self, depth: usize) -> usize {
        match self {
            HTerm::Free(_) => 0,
            HTerm::Bound(i) => (i + 1).saturating_sub(depth),
            HTerm::Refl(a, u) => a.max_loose(depth).max(u.max_loose(depth)),
            HTerm::J(j) => {
                j.ty.max_loose(depth)
                    .max(j.point.max_loose(depth))
                    .max(j.motive.max_loose(depth + 3))
                    .max(j.base.max_loose(depth))
            }
            HTerm::Lam(_, a, b) => a.max_loose(depth).max(b.max_loose(depth + 1)),
            HTerm::App(f, a) => f.max_loose(depth).max(a.max_loose(depth)),
        }
    }

    /// Strict substitution: every free variable must be in the domain.
    pub fn subst(&self, sub: &HSub) -> Result<HTerm, HUnbound> {
        sub.check_domain(&self.free_vars())?;
        Ok(self.subst_partial(sub))
    }

    /// Substitution leaving variables outside the domain untouched.
    pub fn subst_partial(&self, sub: &HSub) -> HTerm {
        self.map_free(0, &|x, _| sub.get(x).cloned())
    }

    /// Number of syntax nodes: one per constructor or variable occurrence,
    /// counting types as well as terms.
    pub fn node_count(&self) -> usize {
        1 + match self {
            HTerm::Free(_) | HTerm::Bound(_) => 0,
            HTerm::Refl(a, u) => a.node_count() + u.node_count(),
            HTerm::J(j) => j.ty.node_count() + j.point.node_count() + j.motive.node_count() + j.base.node_count(),
            HTerm::Lam(_, a, b) => a.node_count() + b.node_count(),
            HTerm::App(f, a) => f.node_count() + a.node_count(),
        }
    }
}

impl HType {
    pub fn el(t: HTerm) -> HType {
        HType::El(Box::new(t))
    }

    pub fn id(a: HType, u: HTerm, v: HTerm) -> HType {
        HType::Id(Box::new(a), Box::new(u), Box::new(v))
    }

    /// `Π(x:A).cod` with `x` bound wherever it occurs free in `cod`.
    pub fn pi(x: &str, dom: HType, cod: HType) -> HType {
        let cod = cod.close(x, 0);
        HType::Pi(Hint::named(x), Box::new(dom), Box::new(cod))
    }

    pub fn close(&self, x: &str, depth: usize) -> HType {
        self.map_free(depth, &|name, d| (&**name == x).then_some(HTerm::Bound(d)))
    }

    /// Binds several names at once: the last name becomes index `depth`,
    /// the one before `depth + 1`, and so on.
    pub fn close_many(&self, names: &[&str], depth: usize) -> HType {
        let n = names.len();
        self.map_free(depth, &|name, d| {
            names.iter().rposition(|x| **x == **name).map(|i| HTerm::Bound(d + (n - 1 - i)))
        })
    }

    pub fn instantiate(&self, k: usize, arg: &HTerm) -> HType {
        match self {
            HType::Universe => HType::Universe,
            HType::El(t) => HType::el(t.instantiate(k, arg)),
            HType::Id(a, u, v) => HType::id(a.instantiate(k, arg), u.instantiate(k, arg), v.instantiate(k, arg)),
            HType::Pi(h, a, b) => {
                HType::Pi(h.clone(), Box::new(a.instantiate(k, arg)), Box::new(b.instantiate(k + 1, arg)))
            }
        }
    }

    /// Replaces index 0 by the free name `x`.
    pub fn open(&self, x: &str) -> HType {
        self.instantiate(0, &HTerm::free(x))
    }

    pub fn shift(&self, cutoff: usize, d: isize) -> HType {
        match self {
            HType::Universe => HType::Universe,
            HType::El(t) => HType::el(t.shift(cutoff, d)),
            HType::Id(a, u, v) => HType::id(a.shift(cutoff, d), u.shift(cutoff, d), v.shift(cutoff, d)),
            HType::Pi(h, a, b) => HType::Pi(h.clone(), Box::new(a.shift(cutoff, d)), Box::new(b.shift(cutoff + 1, d))),
        }
    }

    pub(crate) fn map_free(&self, depth: usize, f: &dyn Fn(&Name, usize) -> Option<HTerm>) -> HType {
        match self {
            HType::Universe => HType::Universe,
            HType::El(t) => HType::el(t.map_free(depth, f)),
            HType::Id(a, u, v) => HType::id(a.map_free(depth, f), u.map_free(depth, f), v.map_free(depth, f)),
            HType::Pi(h, a, b) => {
                HType::Pi(h.clone(), Box::new(a.map_free(depth, f)), Box::new(b.map_free(depth + 1, f)))
            }
        }
    }

    pub fn collect_free(&self, out: &mut BTreeSet<Name>) {
        match self {
            HType::Universe => {}
            HType::El(t) => t.collect_free(out),
            HType::Id(a, u, v) => {
                a.collect_free(out);
                u.collect_free(out);
                v.collect_free(out);
            }
            HType::Pi(_, a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    pub fn is_locally_closed(&self) -> bool {
        self.max_loose(0) == 0
    }

    fn max_loose(&self, depth: usize) -> usize {
        match self {
            HType::Universe => 0,
            HType::El(t) => t.max_loose(depth),
            HType::Id(a, u, v) => a.max_loose(depth).max(u.max_loose(depth)).max(v.max_loose(depth)),
            HType::Pi(_, a, b) => a.max_loose(depth).max(b.max_loose(depth + 1)),
        }
    }

    pub fn subst(&self, sub: &HSub) -> Result<HType, HUnbound> {
        sub.check_domain(&self.free_vars())?;
        Ok(self.subst_partial(sub))
    }

    pub fn subst_partial(&self, sub: &HSub) -> HType {
        self.map_free(0, &|x, _| sub.get(x).cloned())
    }

    pub fn node_count(&self) -> usize {
        1 + match self {
            HType::Universe => 0,
            HType::El(t) => t.node_count(),
            HType::Id(a, u, v) => a.node_count() + u.node_count() + v.node_count(),
            HType::Pi(_, a, b) => a.node_count() + b.node_count(),
        }
    }
}

/// Simultaneous substitution of free names by locally closed terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HSub(Vec<(Name, HTerm)>);

impl HSub {
    pub fn new() -> HSub {
        HSub::default()
    }

    pub fn push(&mut self, x: &str, t: HTerm) {
        debug_assert!(t.is_locally_closed(), "substitution image for {x} has loose indices");
        self.0.push((Arc::from(x), t));
    }

    pub fn with(mut self, x: &str, t: HTerm) -> HSub {
        self.push(x, t);
        self
    }

    /// The identity on the given names.
    pub fn identity<'a>(names: impl IntoIterator<Item = &'a str>) -> HSub {
        names.into_iter().map(|x| (Arc::from(x), HTerm::free(x))).collect()
    }

    pub fn get(&self, x: &str) -> Option<&HTerm> {
        self.0.iter().rev().find(|(y, _)| &**y == x).map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Name, HTerm)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self ∘ delta`: first `self`, then `delta` on every image.
    pub fn then(&self, delta: &HSub) -> Result<HSub, HUnbound> {
        self.0.iter().map(|(x, t)| Ok((x.clone(), t.subst(delta)?))).collect()
    }

    fn check_domain(&self, fv: &BTreeSet<Name>) -> Result<(), HUnbound> {
        match fv.iter().find(|x| self.get(x).is_none()) {
            Some(x) => Err(HUnbound(x.clone())),
            None => Ok(()),
        }
    }
}

impl FromIterator<(Name, HTerm)> for HSub {
    fn from_iter<I: IntoIterator<Item = (Name, HTerm)>>(iter: I) -> HSub {
        HSub(iter.into_iter().collect())
    }
}

/// An ordered list of declarations; each type is over the names before it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HCtx(Vec<(Name, HType)>);

impl HCtx {
    pub fn new() -> HCtx {
        HCtx::default()
    }

    pub fn push(&mut self, x: &str, ty: HType) {
        self.0.push((Arc::from(x), ty));
    }

    pub fn with(mut self, x: &str, ty: HType) -> HCtx {
        self.push(x, ty);
        self
    }

    pub fn get(&self, x: &str) -> Option<&HType> {
        self.0.iter().rev().find(|(y, _)| &**y == x).map(|(_, t)| t)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.get(x).is_some()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &(Name, HType)> + ExactSizeIterator {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(x, _)| &**x)
    }

    pub fn id_sub(&self) -> HSub {
        HSub::identity(self.names())
    }
}

impl FromIterator<(Name, HType)> for HCtx {
    fn from_iter<I: IntoIterator<Item = (Name, HType)>>(iter: I) -> HCtx {
        HCtx(iter.into_iter().collect())
    }
}

// Raw structural printing; the emitter owns the user-facing notation.
impl fmt::Debug for HTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HTerm::Free(x) => write!(f, "{x}"),
            HTerm::Bound(i) => write!(f, "#{i}"),
            HTerm::Refl(a, u) => write!(f, "refl[{a:?}]({u:?})"),
            HTerm::J(j) => write!(
                f,
                "J({:?}, {:?}, ({:?} {:?} {:?}). {:?}, {:?})",
                j.ty, j.point, j.hints[0], j.hints[1], j.hints[2], j.motive, j.base
            ),
            HTerm::Lam(h, a, b) => write!(f, "λ({h:?}:{a:?}). {b:?}"),
            HTerm::App(g, a) => write!(f, "({g:?} {a:?})"),
        }
    }
}

impl fmt::Debug for HType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HType::Universe => f.write_str("Type"),
            HType::El(t) => write!(f, "El({t:?})"),
            HType::Id(a, u, v) => write!(f, "Id[{a:?}]({u:?}, {v:?})"),
            HType::Pi(h, a, b) => write!(f, "Π({h:?}:{a:?}). {b:?}"),
        }
    }
}
