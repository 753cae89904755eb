//! Denotational semantics over finite neighbourhood structures.

pub mod bits;
pub mod enumerate;
pub mod eval;
pub mod structure;

pub use bits::Bits;
pub use enumerate::{count_structures, enumerate_structures, StructureSpace, DEFAULT_CAP};
pub use eval::{
    default_support, eval_formula, eval_game, eval_mu, eval_term, is_valid, lfp, semantically_equal,
    AtomInterp, Evaluator, FixpointInterpretation, FoInterp, Space, StateSet,
};
pub use structure::{ActionTable, FunctionTable, RelationTable, Structure};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("structure error: {0}")]
    Structure(String),
    #[error("symbol `{0}` is not interpreted by the structure")]
    Uninterpreted(String),
    #[error("variable `{0}` is outside the evaluation support")]
    Support(String),
    #[error("fixpoint variable `{0}` is unbound")]
    UnboundFixVar(String),
    #[error("fixpoint iteration did not stabilise (non-monotone step)")]
    Divergent,
    #[error("support mismatch between state sets")]
    SupportMismatch,
    #[error("{count} structures exceed the enumeration cap {cap}")]
    TooMany { count: u128, cap: u128 },
}
