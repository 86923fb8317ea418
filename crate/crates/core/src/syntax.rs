//! Pre-syntax of GSeTT and CaTT.
//!
//! Variables are named; CaTT has no binders inside terms, so no renaming is
//! ever needed. Coherence applications point into an [`Environment`] through
//! a [`CohId`] instead of carrying their pasting scheme inline.
//!
//! [`Environment`]: crate::catt::Environment

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A CaTT/GSeTT variable name.
///
/// Names are drawn from `[A-Za-z_][A-Za-z0-9_]*`. Anything outside that
/// alphabet is free for the translator to use on the HoTT side.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

impl Var {
    /// Panics if `name` is not a valid CaTT identifier.
    pub fn new(name: &str) -> Var {
        Var::try_new(name).unwrap_or_else(|| panic!("invalid CaTT identifier {name:?}"))
    }

    pub fn try_new(name: &str) -> Option<Var> {
        is_identifier(name).then(|| Var(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Reference to a validated coherence: its index in the environment, plus
/// the declared name for printing. Identity is the index alone.
#[derive(Clone)]
pub struct CohId {
    index: usize,
    name: Arc<str>,
}

impl CohId {
    pub(crate) fn new(index: usize, name: &str) -> CohId {
        CohId { index, name: Arc::from(name) }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl PartialEq for CohId {
    fn eq(&self, other: &CohId) -> bool {
        self.index == other.index
    }
}

impl Eq for CohId {}

impl std::hash::Hash for CohId {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.index.hash(state);
    }
}

impl fmt::Debug for CohId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.name, self.index)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Ty {
    Obj,
    Arr(Box<Ty>, Box<Tm>, Box<Tm>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Tm {
    Var(Var),
    Coh(CohId, Sub),
}

/// Association list of bindings. Lookup returns the last binding.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Sub(Vec<(Var, Tm)>);

/// Association list of declarations. Lookup returns the last declaration.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Ctx(Vec<(Var, Ty)>);

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unbound variable `{0}`")]
pub struct UnboundVariable(pub Var);

impl Ty {
    pub fn arr(base: Ty, src: Tm, tgt: Tm) -> Ty {
        Ty::Arr(Box::new(base), Box::new(src), Box::new(tgt))
    }

    /// `⋆` has dimension -1, each arrow adds one.
    pub fn dim(&self) -> i64 {
        let mut ty = self;
        let mut d = -1;
        while let Ty::Arr(base, _, _) = ty {
            d += 1;
            ty = base;
        }
        d
    }

    pub fn subst(&self, sub: &Sub) -> Result<Ty, UnboundVariable> {
        Ok(match self {
            Ty::Obj => Ty::Obj,
            Ty::Arr(base, src, tgt) => Ty::arr(base.subst(sub)?, src.subst(sub)?, tgt.subst(sub)?),
        })
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        if let Ty::Arr(base, src, tgt) = self {
            base.collect_vars(out);
            src.collect_vars(out);
            tgt.collect_vars(out);
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn mentions(&self, x: &Var) -> bool {
        match self {
            Ty::Obj => false,
            Ty::Arr(base, src, tgt) => base.mentions(x) || src.mentions(x) || tgt.mentions(x),
        }
    }

    /// Whether the type is built from variables only (a GSeTT type).
    pub fn is_gsett(&self) -> bool {
        match self {
            Ty::Obj => true,
            Ty::Arr(base, src, tgt) => base.is_gsett() && matches!(**src, Tm::Var(_)) && matches!(**tgt, Tm::Var(_)),
        }
    }
}

impl Tm {
    pub fn var(name: &str) -> Tm {
        Tm::Var(Var::new(name))
    }

    pub fn subst(&self, sub: &Sub) -> Result<Tm, UnboundVariable> {
        match self {
            Tm::Var(x) => sub.get(x).cloned().ok_or_else(|| UnboundVariable(x.clone())),
            Tm::Coh(c, inner) => Ok(Tm::Coh(c.clone(), inner.compose(sub)?)),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Tm::Var(x) => {
                out.insert(x.clone());
            }
            Tm::Coh(_, sub) => {
                for (_, t) in sub.iter() {
                    t.collect_vars(out);
                }
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn mentions(&self, x: &Var) -> bool {
        match self {
            Tm::Var(y) => x == y,
            Tm::Coh(_, sub) => sub.iter().any(|(_, t)| t.mentions(x)),
        }
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Tm::Var(x) => Some(x),
            Tm::Coh(..) => None,
        }
    }

    /// Number of syntax nodes, substitution images included.
    pub fn size(&self) -> usize {
        match self {
            Tm::Var(_) => 1,
            Tm::Coh(_, sub) => 1 + sub.iter().map(|(_, t)| t.size()).sum::<usize>(),
        }
    }
}

impl Sub {
    pub fn new() -> Sub {
        Sub(Vec::new())
    }

    pub fn from_pairs(pairs: Vec<(Var, Tm)>) -> Sub {
        Sub(pairs)
    }

    pub fn push(&mut self, x: Var, t: Tm) {
        self.0.push((x, t));
    }

    pub fn with(mut self, x: Var, t: Tm) -> Sub {
        self.push(x, t);
        self
    }

    /// Last binding of `x`.
    pub fn get(&self, x: &Var) -> Option<&Tm> {
        self.0.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &(Var, Tm)> + ExactSizeIterator {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Var, Tm)] {
        &self.0
    }

    /// `self ∘ gamma`: apply `gamma` to every image of `self`.
    pub fn compose(&self, gamma: &Sub) -> Result<Sub, UnboundVariable> {
        self.0.iter().map(|(x, t)| Ok((x.clone(), t.subst(gamma)?))).collect::<Result<_, _>>().map(Sub)
    }
}

impl FromIterator<(Var, Tm)> for Sub {
    fn from_iter<I: IntoIterator<Item = (Var, Tm)>>(iter: I) -> Sub {
        Sub(iter.into_iter().collect())
    }
}

impl Ctx {
    pub fn new() -> Ctx {
        Ctx(Vec::new())
    }

    pub fn from_decls(decls: Vec<(Var, Ty)>) -> Ctx {
        Ctx(decls)
    }

    pub fn push(&mut self, x: Var, ty: Ty) {
        self.0.push((x, ty));
    }

    pub fn with(mut self, x: Var, ty: Ty) -> Ctx {
        self.push(x, ty);
        self
    }

    /// Type of the last declaration of `x`.
    pub fn get(&self, x: &Var) -> Option<&Ty> {
        self.0.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn contains(&self, x: &Var) -> bool {
        self.0.iter().any(|(y, _)| y == x)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &(Var, Ty)> + ExactSizeIterator {
        self.0.iter()
    }

    pub fn decls(&self) -> &[(Var, Ty)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prefix(&self, n: usize) -> Ctx {
        Ctx(self.0[..n].to_vec())
    }

    pub fn pop(&mut self) -> Option<(Var, Ty)> {
        self.0.pop()
    }

    /// `⟨x ↦ x, …⟩` in declaration order.
    pub fn id_sub(&self) -> Sub {
        self.0.iter().map(|(x, _)| (x.clone(), Tm::Var(x.clone()))).collect()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.0.iter().map(|(x, _)| x.clone()).collect()
    }

    pub fn var_list(&self) -> Vec<Var> {
        self.0.iter().map(|(x, _)| x.clone()).collect()
    }
}

impl FromIterator<(Var, Ty)> for Ctx {
    fn from_iter<I: IntoIterator<Item = (Var, Ty)>>(iter: I) -> Ctx {
        Ctx(iter.into_iter().collect())
    }
}

/// `Var(u : A)`: every variable used by the term or its type.
pub fn var_set_term(t: &Tm, ty: &Ty) -> BTreeSet<Var> {
    let mut out = t.vars();
    ty.collect_vars(&mut out);
    out
}

pub fn var_set_ctx(ctx: &Ctx) -> BTreeSet<Var> {
    ctx.vars()
}

// `Display` prints fully explicit surface syntax (`@comp x y f z g`), which
// the surface parser reads back to the same term.
impl fmt::Display for Tm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tm::Var(x) => write!(f, "{x}"),
            Tm::Coh(c, sub) => {
                write!(f, "@{}", c.name())?;
                for (_, t) in sub.iter() {
                    match t {
                        Tm::Var(x) => write!(f, " {x}")?,
                        Tm::Coh(..) => write!(f, " ({t})")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Obj => f.write_str("*"),
            Ty::Arr(_, src, tgt) => write!(f, "{src} -> {tgt}"),
        }
    }
}

impl fmt::Debug for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Obj => f.write_str("*"),
            Ty::Arr(base, src, tgt) => write!(f, "{src:?} ->[{base:?}] {tgt:?}"),
        }
    }
}

impl fmt::Debug for Tm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tm::Var(x) => write!(f, "{x}"),
            Tm::Coh(c, sub) => write!(f, "{}{sub:?}", c.name()),
        }
    }
}

impl fmt::Debug for Sub {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} := {t:?}")?;
        }
        f.write_str(">")
    }
}

impl fmt::Debug for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (x, ty)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} : {ty:?}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, ty)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "({x} : {ty})")?;
        }
        Ok(())
    }
}
