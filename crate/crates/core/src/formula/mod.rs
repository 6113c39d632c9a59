//! Formula syntax for the plain, TST and L* languages.

mod ast;
mod ops;
mod parse;
mod print;

pub use ast::{Atom, Connective, Dialect, Formula, Quantifier, Rel, Sort, Term, Var, VBAR};
pub use ops::{alpha_equivalent, fresh_name, fresh_numbered};
pub use parse::{parse, parse_document, Item};
pub use print::print;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{dialect} dialect violation at {line}:{column}: {message}")]
    Dialect { line: usize, column: usize, dialect: Dialect, message: String },
    #[error("formulas belong to different dialects")]
    DialectMismatch,
    #[error("substitution would capture `{name}`")]
    Capture { name: String },
}
