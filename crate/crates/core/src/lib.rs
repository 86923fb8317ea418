//! Translation of the coherence type theory CaTT into homotopy type theory.
//!
//! The pipeline: [`surface`] parses and elaborates `coh`/`let` files into a
//! [`catt::Environment`]; [`translate`] interprets every entry as a closed
//! term of a small Martin-Löf fragment ([`hott`]), which an independent
//! kernel re-checks; [`emit`] prints the results.

pub mod catt;
pub mod corpus;
pub mod emit;
pub mod gen;
pub mod gsett;
pub mod hott;
pub mod par;
pub mod pasting;
pub mod surface;
pub mod syntax;
pub mod translate;
