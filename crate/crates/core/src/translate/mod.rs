//! Translations between game logic, the fixpoint calculus, least fixpoint
//! logic and propositional skeletons.

pub mod games;
pub mod lfp;
pub mod prop;

use thiserror::Error;

use crate::syntax::SyntaxError;

pub use games::{g1, g2, g_combined, parikh_f, sabotage_gadget, SabotageGadget};
pub use lfp::{check_lfp, eval_lfp, lfp_support, lfp_to_mu, mu_to_lfp, parse_lfp, Lfp};
pub use prop::{flatten, sharpen, PropInterp, PropReduction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("no table entry for symbol `{0}`")]
    MissingSymbol(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("name collision: {0}")]
    Collision(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}
