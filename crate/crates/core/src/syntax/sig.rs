use std::collections::BTreeMap;

use super::ast::{Formula, Game, Term, ASSIGN, QUANT};
use super::SyntaxError;

/// Function, relation and action symbols with their arities.
///
/// The quantifier `*` with arity (1, 0) is always present. Deterministic
/// assignment `:=` is built in for every arity (k, k) and is not listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSignature {
    pub functions: BTreeMap<String, usize>,
    pub relations: BTreeMap<String, usize>,
    pub actions: BTreeMap<String, (usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Function(usize),
    Relation(usize),
    Action(usize, usize),
}

impl Default for GameSignature {
    fn default() -> Self {
        Self::new()
    }
}

impl GameSignature {
    pub fn new() -> Self {
        let mut actions = BTreeMap::new();
        actions.insert(QUANT.to_string(), (1, 0));
        GameSignature {
            functions: BTreeMap::new(),
            relations: BTreeMap::new(),
            actions,
        }
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolKind> {
        if let Some(&n) = self.functions.get(name) {
            return Some(SymbolKind::Function(n));
        }
        if let Some(&n) = self.relations.get(name) {
            return Some(SymbolKind::Relation(n));
        }
        self.actions.get(name).map(|&(k, l)| SymbolKind::Action(k, l))
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        self.add(name, SymbolKind::Function(arity))
    }

    pub fn add_relation(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        self.add(name, SymbolKind::Relation(arity))
    }

    pub fn add_action(&mut self, name: &str, k: usize, l: usize) -> Result<(), SyntaxError> {
        self.add(name, SymbolKind::Action(k, l))
    }

    /// Adds a symbol, or checks it against an existing entry.
    pub fn add(&mut self, name: &str, kind: SymbolKind) -> Result<(), SyntaxError> {
        if name == ASSIGN {
            return Err(SyntaxError::Signature(format!("`{ASSIGN}` is reserved")));
        }
        match self.lookup(name) {
            Some(existing) if existing == kind => Ok(()),
            Some(existing) => Err(SyntaxError::Signature(format!(
                "symbol `{name}` already declared as {existing:?}, not {kind:?}"
            ))),
            None => {
                match kind {
                    SymbolKind::Function(n) => {
                        self.functions.insert(name.to_string(), n);
                    }
                    SymbolKind::Relation(n) => {
                        self.relations.insert(name.to_string(), n);
                    }
                    SymbolKind::Action(k, l) => {
                        self.actions.insert(name.to_string(), (k, l));
                    }
                }
                Ok(())
            }
        }
    }

    /// Union of two signatures; fails on conflicting declarations.
    pub fn merge(&mut self, other: &GameSignature) -> Result<(), SyntaxError> {
        for (n, &a) in &other.functions {
            self.add_function(n, a)?;
        }
        for (n, &a) in &other.relations {
            self.add_relation(n, a)?;
        }
        for (n, &(k, l)) in &other.actions {
            self.add_action(n, k, l)?;
        }
        Ok(())
    }

    pub fn action_arity(&self, name: &str) -> Option<(usize, usize)> {
        self.actions.get(name).copied()
    }

    /// The signature of exactly the symbols used in `f`.
    pub fn of_formula(f: &Formula) -> Result<GameSignature, SyntaxError> {
        let mut sig = GameSignature::new();
        sig.absorb_formula(f)?;
        Ok(sig)
    }

    pub fn absorb_formula(&mut self, f: &Formula) -> Result<(), SyntaxError> {
        match f {
            Formula::True | Formula::FixVar(_) => Ok(()),
            Formula::Eq(a, b) => {
                self.absorb_term(a)?;
                self.absorb_term(b)
            }
            Formula::Rel(r, args) => {
                self.add_relation(r, args.len())?;
                args.iter().try_for_each(|t| self.absorb_term(t))
            }
            Formula::Not(a) | Formula::Mu(_, a) => self.absorb_formula(a),
            Formula::And(a, b) => {
                self.absorb_formula(a)?;
                self.absorb_formula(b)
            }
            Formula::Dia(g, a) => {
                self.absorb_game(g)?;
                self.absorb_formula(a)
            }
        }
    }

    pub fn absorb_game(&mut self, g: &Game) -> Result<(), SyntaxError> {
        match g {
            Game::Atomic {
                action,
                bound,
                params,
            } => {
                if action != ASSIGN {
                    self.add_action(action, bound.len(), params.len())?;
                }
                params.iter().try_for_each(|t| self.absorb_term(t))
            }
            Game::Test(f) => self.absorb_formula(f),
            Game::Choice(a, b) | Game::Seq(a, b) => {
                self.absorb_game(a)?;
                self.absorb_game(b)
            }
            Game::Star(a) | Game::Dual(a) => self.absorb_game(a),
        }
    }

    pub fn absorb_term(&mut self, t: &Term) -> Result<(), SyntaxError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::App(f, args) => {
                self.add_function(f, args.len())?;
                args.iter().try_for_each(|a| self.absorb_term(a))
            }
        }
    }
}
