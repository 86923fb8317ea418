//! The target theory: a Martin-Löf fragment with a Tarski universe, identity
//! types eliminated by J, and Π-types, together with an independent kernel.

mod kernel;
mod reduce;
mod syntax;
mod tower;

pub use kernel::{Kernel, KernelError};
pub use reduce::{
    contract_nth, convertible, convertible_tm, count_redexes, count_redexes_ty, normalize, normalize_ty, reduce_step,
    Budget, BudgetExceeded, DEFAULT_MAX_STEPS,
};
pub use syntax::{fresh_name, HCtx, HSub, HTerm, HType, HUnbound, Hint, JElim, Name};
pub use tower::{id_tower, lam_lift, pi_lift, refl_tower};
