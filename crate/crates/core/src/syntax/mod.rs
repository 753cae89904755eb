//! Terms, formulas and games of first-order game logic and the first-order
//! modal μ-calculus, with parsing, printing, variable tables and substitution.

pub mod ast;
pub mod parser;
pub mod print;
pub mod sig;
pub mod subst;
pub mod vars;

pub use ast::*;
pub use parser::{parse, parse_formula, parse_formula_infer, parse_game, parse_term, Kind, Parsed};
pub use sig::{GameSignature, SymbolKind};
pub use subst::{expand_assignments, rename_bound, substitute_fixvar, substitute_var};
pub use vars::*;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("arity mismatch for `{name}`: expected {expected}, found {found}")]
    Arity {
        name: String,
        expected: String,
        found: String,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("fixpoint variable `{var}` occurs negatively in `{formula}`")]
    Positivity { var: String, formula: String },
    #[error("not a {logic} formula: {msg}")]
    Logic { logic: Logic, msg: String },
    #[error("signature error: {0}")]
    Signature(String),
    #[error("atomic game `{0}` binds a variable twice")]
    RepeatedBound(String),
}

/// Checks that `f` belongs to `logic`: FOGL formulas have no fixpoints, FOLμ
/// formulas only use atomic games under diamonds.
pub fn check_logic(f: &Formula, logic: Logic) -> Result<(), SyntaxError> {
    let err = |msg: String| Err(SyntaxError::Logic { logic, msg });
    match f {
        Formula::True | Formula::Eq(..) | Formula::Rel(..) => Ok(()),
        Formula::FixVar(x) | Formula::Mu(x, _) if logic == Logic::Gl => {
            err(format!("fixpoint variable `{x}`"))
        }
        Formula::FixVar(_) => Ok(()),
        Formula::Not(a) | Formula::Mu(_, a) => check_logic(a, logic),
        Formula::And(a, b) => {
            check_logic(a, logic)?;
            check_logic(b, logic)
        }
        Formula::Dia(g, a) => {
            match (logic, g.as_ref()) {
                (Logic::Mu, Game::Atomic { .. }) => {}
                (Logic::Mu, other) => return err(format!("compound game `{other}`")),
                (Logic::Gl, g) => check_logic_game(g)?,
            }
            check_logic(a, logic)
        }
    }
}

fn check_logic_game(g: &Game) -> Result<(), SyntaxError> {
    match g {
        Game::Atomic { .. } => Ok(()),
        Game::Test(f) => check_logic(f, Logic::Gl),
        Game::Choice(a, b) | Game::Seq(a, b) => {
            check_logic_game(a)?;
            check_logic_game(b)
        }
        Game::Star(a) | Game::Dual(a) => check_logic_game(a),
    }
}

/// Checks that in every `μX.φ` the variable `X` occurs only under an even
/// number of negations.
pub fn check_positivity(f: &Formula) -> Result<(), SyntaxError> {
    match f {
        Formula::True | Formula::Eq(..) | Formula::Rel(..) | Formula::FixVar(_) => Ok(()),
        Formula::Not(a) => check_positivity(a),
        Formula::And(a, b) => {
            check_positivity(a)?;
            check_positivity(b)
        }
        Formula::Dia(g, a) => {
            check_positivity_game(g)?;
            check_positivity(a)
        }
        Formula::Mu(x, body) => {
            if occurs_with_polarity(body, x, false) {
                return Err(SyntaxError::Positivity {
                    var: x.clone(),
                    formula: f.to_string(),
                });
            }
            check_positivity(body)
        }
    }
}

fn check_positivity_game(g: &Game) -> Result<(), SyntaxError> {
    match g {
        Game::Atomic { .. } => Ok(()),
        Game::Test(f) => check_positivity(f),
        Game::Choice(a, b) | Game::Seq(a, b) => {
            check_positivity_game(a)?;
            check_positivity_game(b)
        }
        Game::Star(a) | Game::Dual(a) => check_positivity_game(a),
    }
}

/// Whether a free occurrence of fixpoint variable `x` appears in `f` with the
/// given polarity (`true` = under an even number of negations).
pub fn occurs_with_polarity(f: &Formula, x: &str, positive: bool) -> bool {
    match f {
        Formula::True | Formula::Eq(..) | Formula::Rel(..) => false,
        Formula::FixVar(y) => y == x && positive,
        Formula::Not(a) => occurs_with_polarity(a, x, !positive),
        Formula::And(a, b) => {
            occurs_with_polarity(a, x, positive) || occurs_with_polarity(b, x, positive)
        }
        Formula::Dia(g, a) => {
            occurs_with_polarity_game(g, x, positive) || occurs_with_polarity(a, x, positive)
        }
        Formula::Mu(y, a) => y != x && occurs_with_polarity(a, x, positive),
    }
}

fn occurs_with_polarity_game(g: &Game, x: &str, positive: bool) -> bool {
    match g {
        Game::Atomic { .. } => false,
        Game::Test(f) => occurs_with_polarity(f, x, positive),
        Game::Choice(a, b) | Game::Seq(a, b) => {
            occurs_with_polarity_game(a, x, positive) || occurs_with_polarity_game(b, x, positive)
        }
        Game::Star(a) => occurs_with_polarity_game(a, x, positive),
        // ⟨αᵈ⟩φ = ¬⟨α⟩¬φ: the game part of a dual sits under one negation.
        Game::Dual(a) => occurs_with_polarity_game(a, x, !positive),
    }
}

/// Checks arities against `sig` and that atomic games bind distinct variables.
pub fn check_signature(f: &Formula, sig: &GameSignature) -> Result<(), SyntaxError> {
    match f {
        Formula::True | Formula::FixVar(_) => Ok(()),
        Formula::Eq(a, b) => {
            check_term(a, sig)?;
            check_term(b, sig)
        }
        Formula::Rel(r, args) => {
            match sig.relations.get(r) {
                None => return Err(SyntaxError::UnknownSymbol(r.clone())),
                Some(&n) if n != args.len() => {
                    return Err(arity(r, n.to_string(), args.len().to_string()))
                }
                _ => {}
            }
            args.iter().try_for_each(|t| check_term(t, sig))
        }
        Formula::Not(a) | Formula::Mu(_, a) => check_signature(a, sig),
        Formula::And(a, b) => {
            check_signature(a, sig)?;
            check_signature(b, sig)
        }
        Formula::Dia(g, a) => {
            check_signature_game(g, sig)?;
            check_signature(a, sig)
        }
    }
}

pub fn check_signature_game(g: &Game, sig: &GameSignature) -> Result<(), SyntaxError> {
    match g {
        Game::Atomic {
            action,
            bound,
            params,
        } => {
            let distinct: VarSet = bound.iter().cloned().collect();
            if distinct.len() != bound.len() {
                return Err(SyntaxError::RepeatedBound(g.to_string()));
            }
            if action == ASSIGN {
                if bound.len() != params.len() || bound.is_empty() {
                    return Err(arity(
                        action,
                        "(k, k) with k >= 1".into(),
                        format!("({}, {})", bound.len(), params.len()),
                    ));
                }
            } else {
                match sig.action_arity(action) {
                    None => return Err(SyntaxError::UnknownSymbol(action.clone())),
                    Some((k, l)) if (k, l) != (bound.len(), params.len()) => {
                        return Err(arity(
                            action,
                            format!("({k}, {l})"),
                            format!("({}, {})", bound.len(), params.len()),
                        ))
                    }
                    _ => {}
                }
            }
            params.iter().try_for_each(|t| check_term(t, sig))
        }
        Game::Test(f) => check_signature(f, sig),
        Game::Choice(a, b) | Game::Seq(a, b) => {
            check_signature_game(a, sig)?;
            check_signature_game(b, sig)
        }
        Game::Star(a) | Game::Dual(a) => check_signature_game(a, sig),
    }
}

pub fn check_term(t: &Term, sig: &GameSignature) -> Result<(), SyntaxError> {
    match t {
        Term::Var(_) => Ok(()),
        Term::App(f, args) => {
            match sig.functions.get(f) {
                None => return Err(SyntaxError::UnknownSymbol(f.clone())),
                Some(&n) if n != args.len() => {
                    return Err(arity(f, n.to_string(), args.len().to_string()))
                }
                _ => {}
            }
            args.iter().try_for_each(|a| check_term(a, sig))
        }
    }
}

fn arity(name: &str, expected: String, found: String) -> SyntaxError {
    SyntaxError::Arity {
        name: name.to_string(),
        expected,
        found,
    }
}

/// Full well-formedness check for a formula of the given logic.
pub fn validate(f: &Formula, logic: Logic, sig: &GameSignature) -> Result<(), SyntaxError> {
    check_logic(f, logic)?;
    check_signature(f, sig)?;
    check_positivity(f)
}
