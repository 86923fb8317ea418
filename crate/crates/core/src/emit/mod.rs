//! Serialization of translated entries, and the size measure.

pub mod internal;
mod names;
pub mod vernacular;

use crate::hott::{normalize, Budget, BudgetExceeded, HTerm};
use crate::translate::TranslationResult;

pub use internal::{
    parse_file, parse_term, parse_type, print_def, print_term, print_type, ParseError, HEADER, KEYWORDS,
};
pub use vernacular::{definition_name, PREAMBLE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitFormat {
    Internal,
    Vernacular,
}

/// Size of a closed translation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stats {
    /// Constructors plus variable occurrences of the term as produced.
    pub node_count: usize,
    /// Characters in the internal print of the normal form.
    pub printed_size: usize,
}

pub fn measure(closed_tm: &HTerm, max_steps: u64) -> Result<Stats, BudgetExceeded> {
    let nf = normalize(closed_tm, &mut Budget::new(max_steps))?;
    Ok(Stats { node_count: closed_tm.node_count(), printed_size: print_term(&nf).chars().count() })
}

/// A whole output file for the given entries, in order.
pub fn emit(entries: &[(String, TranslationResult)], format: EmitFormat) -> String {
    let mut out = String::new();
    match format {
        EmitFormat::Internal => {
            out.push_str(HEADER);
            out.push('\n');
            for (name, res) in entries {
                out.push_str(&print_def(name, &res.closed_ty, &res.closed_tm));
                out.push('\n');
            }
        }
        EmitFormat::Vernacular => {
            out.push_str(PREAMBLE);
            for (name, res) in entries {
                out.push('\n');
                out.push_str(&vernacular::definition(name, &res.closed_ty, &res.closed_tm));
            }
        }
    }
    out
}
