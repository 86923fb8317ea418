//! The bundled corpus of coherences and definitions.

pub const BASIC: &str = include_str!("../corpus/basic.catt");
