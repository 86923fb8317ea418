//! Bidirectional checker for the MLTT fragment: a Tarski universe, identity
//! types with based path induction, and Π-types.

use thiserror::Error;

use super::reduce::{convertible, normalize_ty, Budget, BudgetExceeded, DEFAULT_MAX_STEPS};
use super::syntax::{fresh_name, HCtx, HTerm, HType};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("duplicate declaration of `{0}`")]
    DuplicateDeclaration(String),
    #[error("de Bruijn index {0} escapes its binders")]
    LooseIndex(usize),
    #[error("{rule}: expected {expected:?}, found {found:?}")]
    Mismatch { rule: &'static str, expected: HType, found: HType },
    #[error("applying a term of non-function type {0:?}")]
    NotAFunction(HType),
    #[error("in declaration of `{var}`: {cause}")]
    InDeclaration { var: String, cause: Box<KernelError> },
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// The referee. Stateless apart from its reduction budget per conversion.
#[derive(Clone, Copy, Debug)]
pub struct Kernel {
    max_steps: u64,
}

impl Default for Kernel {
    fn default() -> Kernel {
        Kernel { max_steps: DEFAULT_MAX_STEPS }
    }
}

impl Kernel {
    pub fn new(max_steps: u64) -> Kernel {
        Kernel { max_steps }
    }

    pub fn max_steps(&self) -> u64 {
        self.max_steps
    }

    fn budget(&self) -> Budget {
        Budget::new(self.max_steps)
    }

    pub fn check_ctx(&self, ctx: &HCtx) -> Result<(), KernelError> {
        let mut prefix = HCtx::new();
        for (x, ty) in ctx.iter() {
            if prefix.contains(x) {
                return Err(KernelError::DuplicateDeclaration(x.to_string()));
            }
            self.check_type(&prefix, ty)
                .map_err(|cause| KernelError::InDeclaration { var: x.to_string(), cause: Box::new(cause) })?;
            prefix.push(x, ty.clone());
        }
        Ok(())
    }

    pub fn check_type(&self, ctx: &HCtx, ty: &HType) -> Result<(), KernelError> {
        match ty {
            HType::Universe => Ok(()),
            HType::El(code) => self.check(ctx, code, &HType::Universe),
            HType::Id(a, u, v) => {
                self.check_type(ctx, a)?;
                self.check(ctx, u, a)?;
                self.check(ctx, v, a)
            }
            HType::Pi(_, a, b) => {
                self.check_type(ctx, a)?;
                let x = fresh_name();
                self.check_type(&ctx.clone().with(&x, (**a).clone()), &b.open(&x))
            }
        }
    }

    pub fn check(&self, ctx: &HCtx, t: &HTerm, ty: &HType) -> Result<(), KernelError> {
        let found = self.infer(ctx, t)?;
        self.expect_conv("conversion", ty, &found)
    }

    fn expect_conv(&self, rule: &'static str, expected: &HType, found: &HType) -> Result<(), KernelError> {
        if convertible(expected, found, &mut self.budget())? {
            Ok(())
        } else {
            Err(KernelError::Mismatch { rule, expected: expected.clone(), found: found.clone() })
        }
    }

    pub fn infer(&self, ctx: &HCtx, t: &HTerm) -> Result<HType, KernelError> {
        match t {
            HTerm::Free(x) => ctx.get(x).cloned().ok_or_else(|| KernelError::UnboundVariable(x.to_string())),
            HTerm::Bound(i) => Err(KernelError::LooseIndex(*i)),
            HTerm::Refl(a, u) => {
                self.check_type(ctx, a)?;
                self.check(ctx, u, a)?;
                Ok(HType::id((**a).clone(), (**u).clone(), (**u).clone()))
            }
            HTerm::J(j) => {
                self.check_type(ctx, &j.ty)?;
                self.check(ctx, &j.point, &j.ty)?;
                // Based path induction: the first endpoint is fixed to `point`,
                // so the motive is a family over (y : A) (e : Id_A(point, y)).
                let based = j.motive.instantiate(2, &j.point);
                let (y, e) = (fresh_name(), fresh_name());
                let motive_ctx = ctx
                    .clone()
                    .with(&y, j.ty.clone())
                    .with(&e, HType::id(j.ty.clone(), j.point.clone(), HTerm::Free(y.clone())));
                let opened = based.instantiate(1, &HTerm::Free(y.clone())).open(&e);
                self.check_type(&motive_ctx, &opened)?;
                let at_refl =
                    based.instantiate(1, &j.point).instantiate(0, &HTerm::refl(j.ty.clone(), j.point.clone()));
                let found = self.infer(ctx, &j.base)?;
                self.expect_conv("J base case", &at_refl, &found)?;
                let [_, hy, he] = j.hints.clone();
                let inner = HType::id(j.ty.shift(0, 1), j.point.shift(0, 1), HTerm::Bound(0));
                Ok(HType::Pi(hy, Box::new(j.ty.clone()), Box::new(HType::Pi(he, Box::new(inner), Box::new(based)))))
            }
            HTerm::Lam(h, a, body) => {
                self.check_type(ctx, a)?;
                let x = fresh_name();
                let cod =
                    self.infer(&ctx.clone().with(&x, (**a).clone()), &body.instantiate(0, &HTerm::Free(x.clone())))?;
                Ok(HType::Pi(h.clone(), a.clone(), Box::new(cod.close(&x, 0))))
            }
            HTerm::App(f, arg) => {
                let fty = self.infer(ctx, f)?;
                let fty = match fty {
                    HType::Pi(..) => fty,
                    other => normalize_ty(&other, &mut self.budget())?,
                };
                let HType::Pi(_, dom, cod) = fty else {
                    return Err(KernelError::NotAFunction(fty));
                };
                let found = self.infer(ctx, arg)?;
                self.expect_conv("application", &dom, &found)?;
                Ok(cod.instantiate(0, arg))
            }
        }
    }

    /// `⊢ t : A` in the empty context.
    pub fn check_closed(&self, t: &HTerm, ty: &HType) -> Result<(), KernelError> {
        let empty = HCtx::new();
        self.check_type(&empty, ty)?;
        self.check(&empty, t, ty)
    }
}
