//! Concrete syntax: `coh`/`let` declarations with application-style
//! substitutions and inferred implicit arguments.

mod elab;
mod lexer;
mod parser;

use thiserror::Error;

use crate::catt::CattError;
use crate::gsett::TypeError;
use crate::syntax::{Ctx, Ty, Var};

pub use elab::{elaborate, elaborate_ctx, elaborate_decl, elaborate_ty, load, load_into, print_entry, Loaded};
pub use lexer::Pos;
pub use parser::{parse, parse_spanned, Binder, SurfaceDecl, SurfaceExpr};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ElabError {
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("`{head}` expects {expected} explicit argument(s), got {found}")]
    ArityMismatch { head: String, expected: usize, found: usize },
    #[error("cannot infer implicit argument `{0}`")]
    CannotInferImplicit(Var),
    #[error("argument for `{var}` has type {found}, which does not match the declared {expected}")]
    ElaborationTypeMismatch { var: Var, expected: Ty, found: Ty },
    #[error("endpoints of an arrow live in different types: {src} and {tgt}")]
    ArrowEndpointMismatch { src: Ty, tgt: Ty },
    #[error("variable `{0}` cannot be applied")]
    NotAFunction(String),
    #[error("expected a term, found a type")]
    ExpectedTerm,
    #[error("expected a type, found the term `{0}`")]
    ExpectedType(String),
    #[error("invalid variable name `{0}`")]
    InvalidName(String),
    #[error("meta-operation unsupported: `{0}`")]
    MetaOperation(String),
    #[error(transparent)]
    Type(#[from] TypeError),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("{pos}: syntax error: expected {expected}, found {found}")]
    Syntax { pos: Pos, expected: String, found: String },
    #[error("{pos}: meta-operation unsupported: {what}")]
    MetaOperation { pos: Pos, what: String },
    #[error("{pos}: in `{decl}`: {error}")]
    Elab { pos: Pos, decl: String, error: ElabError },
    #[error("{pos}: `{decl}` is rejected: {error}")]
    Check { pos: Pos, decl: String, error: Box<CattError> },
}

impl ElabError {
    pub fn rule(&self) -> &'static str {
        match self {
            ElabError::Type(e) => e.rule(),
            ElabError::MetaOperation(_) => "meta-operation",
            ElabError::CannotInferImplicit(_) => "implicit-arguments",
            _ => "elaboration",
        }
    }
}

impl SurfaceError {
    /// Name of the failing rule, for diagnostics.
    pub fn rule(&self) -> &'static str {
        match self {
            SurfaceError::Syntax { .. } => "syntax",
            SurfaceError::MetaOperation { .. } => "meta-operation",
            SurfaceError::Elab { error, .. } => error.rule(),
            SurfaceError::Check { error, .. } => error.rule(),
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            SurfaceError::Syntax { pos, .. }
            | SurfaceError::MetaOperation { pos, .. }
            | SurfaceError::Elab { pos, .. }
            | SurfaceError::Check { pos, .. } => *pos,
        }
    }

    pub fn is_meta_operation(&self) -> bool {
        matches!(
            self,
            SurfaceError::MetaOperation { .. } | SurfaceError::Elab { error: ElabError::MetaOperation(_), .. }
        )
    }
}

/// A variable is implicit iff it occurs in the declared type of another
/// variable; the explicit ones are the arguments written at call sites.
pub fn infer_implicit_mask(ctx: &Ctx) -> Vec<bool> {
    ctx.iter().map(|(x, _)| ctx.iter().any(|(y, ty)| y != x && ty.mentions(x))).collect()
}
