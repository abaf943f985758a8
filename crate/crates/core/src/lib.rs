//! Dimension theory for mixed real–integer linear arithmetic.
//!
//! The structure is the ordered field of reals restricted to addition,
//! rational scalars, rational constants and `floor`. Every definable set is
//! handled exactly through quantifier elimination; topological operators,
//! projection dimension, discrete-closure rank and dimension rank are built on
//! top and checked against each other by the law suites in [`suites`].

pub mod cells;
pub mod compiled;
pub mod corpus;
pub mod dimension;
pub mod dimrank;
pub mod discl;
pub mod fm;
pub mod gen;
pub mod linear;
pub mod oracle;
pub mod parse;
pub mod pregeometry;
pub mod qe;
mod print;
pub mod rational;
pub mod simplify;
pub mod suites;
pub mod syntax;
pub mod topology;

pub use parse::{parse, parse_formula, parse_term};
pub use rational::Rational;
pub use syntax::{Atom, DefinableSet, Formula, Rel, Term, Valuation, Var};

/// Errors surfaced by the library. [`Error::exit_code`] maps them to the
/// command-line contract.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared identifier `{0}`")]
    Undeclared(String),
    #[error("{0}")]
    Usage(String),
    #[error("missing assignment for `{0}`")]
    Missing(String),
    #[error("free variables remain: {0}")]
    FreeVariables(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. }
            | Error::Undeclared(_)
            | Error::Usage(_)
            | Error::Missing(_)
            | Error::FreeVariables(_)
            | Error::Precondition(_) => 1,
            Error::ResourceLimit(_) | Error::Unsupported(_) => 2,
            Error::Internal(_) => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
