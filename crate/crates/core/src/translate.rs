//! The syntactic model: CaTT contexts, types, terms and substitutions are
//! interpreted over a universally quantified type `B`, and every coherence
//! becomes a nest of J eliminations, one per step of its pasting scheme.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::catt::{Coherence, Environment};
use crate::emit::{measure, Stats};
use crate::hott::{lam_lift, pi_lift, refl_tower, HCtx, HSub, HTerm, HType, HUnbound, Hint, Kernel, KernelError, Name};
use crate::par;
use crate::pasting::PsDerivation;
use crate::syntax::{CohId, Ctx, Sub, Tm, Ty};

/// The name of the quantified base type. `%` is not an identifier
/// character in CaTT, so it never collides with a translated variable.
pub const B: &str = "%B";

/// Bound on nested coherence interpretations; validated environments are
/// far below it.
const MAX_DEPTH: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// `⟦Γ⟧ ⊢ ⟦t⟧ : ⟦A⟧`
    Open,
    /// `⊢ λ_⟦Γ⟧.⟦t⟧ : Π_⟦Γ⟧.⟦A⟧`
    Closed,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("kernel rejected the {stage:?} translation: {error}")]
    KernelRejected { stage: Stage, error: KernelError },
    #[error("translation invariant violated: {0}")]
    Internal(String),
}

impl TranslateError {
    /// Whether the error signals a defect of the translator rather than of
    /// its input.
    pub fn is_internal(&self) -> bool {
        !matches!(self, TranslateError::UnknownName(_))
    }
}

impl From<HUnbound> for TranslateError {
    fn from(e: HUnbound) -> TranslateError {
        TranslateError::Internal(format!("substitution misses `{}`", e.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationResult {
    pub ctx: HCtx,
    pub ty: HType,
    pub tm: HTerm,
    pub closed_ty: HType,
    pub closed_tm: HTerm,
    pub stats: Stats,
}

pub struct Translator<'e> {
    env: &'e Environment,
    kernel: Kernel,
    verify: bool,
    memo: RwLock<HashMap<usize, Arc<HTerm>>>,
}

fn el_b() -> HType {
    HType::el(HTerm::free(B))
}

impl<'e> Translator<'e> {
    pub fn new(env: &'e Environment) -> Translator<'e> {
        Translator { env, kernel: Kernel::default(), verify: true, memo: RwLock::default() }
    }

    pub fn with_kernel(mut self, kernel: Kernel) -> Translator<'e> {
        self.kernel = kernel;
        self
    }

    /// Skips the kernel referee. Only for profiling the translation itself.
    pub fn without_verification(mut self) -> Translator<'e> {
        self.verify = false;
        self
    }

    pub fn env(&self) -> &'e Environment {
        self.env
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    /// `⟦∅⟧ = (B : Type)`, `⟦Γ, x : A⟧ = ⟦Γ⟧, x : ⟦A⟧`.
    pub fn interp_ctx(&self, ctx: &Ctx) -> Result<HCtx, TranslateError> {
        let mut out = HCtx::new().with(B, HType::Universe);
        for (x, ty) in ctx.iter() {
            out.push(x.as_str(), self.interp_ty(ty)?);
        }
        Ok(out)
    }

    /// `⟦⋆⟧ = El B`, `⟦u →_A v⟧ = Id_⟦A⟧(⟦u⟧, ⟦v⟧)`.
    pub fn interp_ty(&self, ty: &Ty) -> Result<HType, TranslateError> {
        self.ty_at(ty, 0)
    }

    pub fn interp_tm(&self, t: &Tm) -> Result<HTerm, TranslateError> {
        self.tm_at(t, 0)
    }

    /// `⟦⟨⟩⟧ = ⟨B ↦ B⟩`, `⟦⟨γ, x ↦ t⟩⟧ = ⟨⟦γ⟧, x ↦ ⟦t⟧⟩`.
    pub fn interp_sub(&self, sub: &Sub) -> Result<HSub, TranslateError> {
        self.sub_at(sub, 0)
    }

    /// `⟦coh_{Γ,A}⟧ = elim(Γ, A, Γ, id_⟦Γ⟧)`, a term over `⟦Γ⟧`.
    pub fn interp_coh(&self, id: &CohId) -> Result<Arc<HTerm>, TranslateError> {
        self.coh_at(id, 0)
    }

    fn ty_at(&self, ty: &Ty, depth: usize) -> Result<HType, TranslateError> {
        Ok(match ty {
            Ty::Obj => el_b(),
            Ty::Arr(a, u, v) => HType::id(self.ty_at(a, depth)?, self.tm_at(u, depth)?, self.tm_at(v, depth)?),
        })
    }

    fn tm_at(&self, t: &Tm, depth: usize) -> Result<HTerm, TranslateError> {
        match t {
            Tm::Var(x) => Ok(HTerm::free(x.as_str())),
            Tm::Coh(id, sub) => {
                let body = self.coh_at(id, depth)?;
                Ok(body.subst(&self.sub_at(sub, depth)?)?)
            }
        }
    }

    fn sub_at(&self, sub: &Sub, depth: usize) -> Result<HSub, TranslateError> {
        let mut out = HSub::new().with(B, HTerm::free(B));
        for (x, t) in sub.iter() {
            out.push(x.as_str(), self.tm_at(t, depth)?);
        }
        Ok(out)
    }

    fn coh_at(&self, id: &CohId, depth: usize) -> Result<Arc<HTerm>, TranslateError> {
        if let Some(t) = self.memo.read().expect("memo lock").get(&id.index()) {
            return Ok(t.clone());
        }
        if depth > MAX_DEPTH {
            return Err(TranslateError::Internal(format!("recursion depth exceeded at `{}`", id.name())));
        }
        let coh = self
            .env
            .coherence(id)
            .ok_or_else(|| TranslateError::Internal(format!("dangling coherence `{}`", id.name())))?;
        let t = Arc::new(self.translate_coh(coh, depth + 1)?);
        // Concurrent writers compute identical terms, so the last one wins.
        self.memo.write().expect("memo lock").insert(id.index(), t.clone());
        Ok(t)
    }

    fn translate_coh(&self, coh: &Coherence, depth: usize) -> Result<HTerm, TranslateError> {
        let ps = coh.ps();
        let target = self.ty_at(coh.ty(), depth)?;
        let gamma = self.interp_ctx(coh.ctx())?.id_sub();
        self.elim(ps, ps.steps().len(), coh.ty().dim(), &target, &gamma)
    }

    /// `elim(Δ, A, Γ, γ)` where `Δ` is the first `n` steps of `ps`, `dim` is
    /// `dim A` and `target` is `⟦A⟧`, still over `⟦Γ⟧`.
    pub fn elim(
        &self,
        ps: &PsDerivation,
        n: usize,
        dim: i64,
        target: &HType,
        gamma: &HSub,
    ) -> Result<HTerm, TranslateError> {
        let out = if n == 0 {
            let level = usize::try_from(dim + 1).map_err(|_| TranslateError::Internal("negative tower".into()))?;
            refl_tower(&el_b(), &HTerm::free(ps.base().as_str()), level)
        } else {
            let step = &ps.steps()[n - 1];
            let (x, y, f) = (step.src.as_str(), step.tgt.as_str(), step.filler.as_str());
            // C lives in a pasting scheme, so this is the GSeTT translation.
            let c = self.interp_ty(&step.base)?;
            let motive = target.subst(gamma)?.close_many(&[x, y, f], 0);
            let mut delta =
                HSub::identity(std::iter::once(B).chain(ps.prefix_ctx(n - 1).iter().map(|(v, _)| v.as_str())));
            delta.push(y, HTerm::free(x));
            delta.push(f, HTerm::refl(c.clone(), HTerm::free(x)));
            let p = self.elim(ps, n - 1, dim, target, &gamma.then(&delta)?)?;
            let j = HTerm::j(c, HTerm::free(x), [Hint::none(), Hint::none(), Hint::none()], motive, p);
            HTerm::app(HTerm::app(j, HTerm::free(y)), HTerm::free(f))
        };
        self.assert_scoped(&out, ps, n)?;
        Ok(out)
    }

    /// The free variables of `elim(Δ, …)` are declared in `⟦Δ⟧`.
    fn assert_scoped(&self, t: &HTerm, ps: &PsDerivation, n: usize) -> Result<(), TranslateError> {
        let allowed: BTreeSet<Name> = std::iter::once(Name::from(B))
            .chain(ps.prefix_ctx(n).iter().map(|(v, _)| Name::from(v.as_str())))
            .collect();
        match t.free_vars().into_iter().find(|v| !allowed.contains(v)) {
            Some(v) => Err(TranslateError::Internal(format!("`{v}` escapes the scope of elim"))),
            None => Ok(()),
        }
    }

    /// Translates `Γ ⊢ t : A`, closes it by λ/Π-lifting and, unless disabled,
    /// has the kernel check both the open and the closed judgement.
    pub fn translate_judgement(&self, ctx: &Ctx, t: &Tm, ty: &Ty) -> Result<TranslationResult, TranslateError> {
        let h_ctx = self.interp_ctx(ctx)?;
        let h_ty = self.interp_ty(ty)?;
        let h_tm = self.interp_tm(t)?;
        let rejected = |stage| move |error| TranslateError::KernelRejected { stage, error };
        if self.verify {
            self.kernel.check_ctx(&h_ctx).map_err(rejected(Stage::Open))?;
            self.kernel.check_type(&h_ctx, &h_ty).map_err(rejected(Stage::Open))?;
            self.kernel.check(&h_ctx, &h_tm, &h_ty).map_err(rejected(Stage::Open))?;
        }
        let closed_ty = pi_lift(&h_ctx, &h_ty);
        let closed_tm = lam_lift(&h_ctx, &h_tm);
        if self.verify {
            self.kernel.check_closed(&closed_tm, &closed_ty).map_err(rejected(Stage::Closed))?;
        }
        let stats = measure(&closed_tm, self.kernel.max_steps())
            .map_err(|e| TranslateError::KernelRejected { stage: Stage::Closed, error: e.into() })?;
        Ok(TranslationResult { ctx: h_ctx, ty: h_ty, tm: h_tm, closed_ty, closed_tm, stats })
    }

    /// Translates the judgement a named entry stands for.
    pub fn translate_entry(&self, name: &str) -> Result<TranslationResult, TranslateError> {
        let (ctx, t, ty) = self.env.judgement(name).ok_or_else(|| TranslateError::UnknownName(name.to_owned()))?;
        self.translate_judgement(&ctx, &t, &ty)
    }

    /// Translates every named entry; parallel when the `parallel` feature is on.
    pub fn translate_all(&self, names: &[String]) -> Vec<(String, Result<TranslationResult, TranslateError>)> {
        par::map(names, |n| (n.clone(), self.translate_entry(n)))
    }

    pub fn translate_all_sequential(
        &self,
        names: &[String],
    ) -> Vec<(String, Result<TranslationResult, TranslateError>)> {
        names.iter().map(|n| (n.clone(), self.translate_entry(n))).collect()
    }
}
