//! Propositional reduction: atoms and atomic games become fresh symbols.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::TranslateError;
use crate::semantics::{AtomInterp, Bits, FoInterp, SemanticsError, Space};
use crate::syntax::{Formula, Game, Term};

/// A propositional formula together with the table mapping its proposition
/// symbols `p<i>` to first-order atoms and its game symbols `A<i>` to atomic
/// games.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropReduction {
    pub formula: Formula,
    pub props: BTreeMap<String, Formula>,
    pub games: BTreeMap<String, Game>,
}

impl PropReduction {
    pub fn to_json(&self) -> Value {
        let props: BTreeMap<_, _> = self.props.iter().map(|(k, v)| (k, v.to_string())).collect();
        let games: BTreeMap<_, _> = self.games.iter().map(|(k, v)| (k, v.to_string())).collect();
        json!({"formula": self.formula.to_string(), "props": props, "games": games})
    }
}

#[derive(Default)]
struct Flattener {
    props: Vec<(Formula, String)>,
    games: Vec<(Game, String)>,
}

impl Flattener {
    fn prop(&mut self, atom: &Formula) -> Formula {
        let name = match self.props.iter().find(|(a, _)| a == atom) {
            Some((_, n)) => n.clone(),
            None => {
                let n = format!("p{}", self.props.len() + 1);
                self.props.push((atom.clone(), n.clone()));
                n
            }
        };
        Formula::Rel(name, vec![])
    }

    fn game_symbol(&mut self, g: &Game) -> Game {
        let name = match self.games.iter().find(|(a, _)| a == g) {
            Some((_, n)) => n.clone(),
            None => {
                let n = format!("A{}", self.games.len() + 1);
                self.games.push((g.clone(), n.clone()));
                n
            }
        };
        Game::Atomic {
            action: name,
            bound: vec![],
            params: vec![],
        }
    }

    fn formula(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::True | Formula::FixVar(_) => f.clone(),
            Formula::Eq(..) | Formula::Rel(..) => self.prop(f),
            Formula::Not(a) => Formula::Not(Box::new(self.formula(a))),
            Formula::And(a, b) => Formula::And(Box::new(self.formula(a)), Box::new(self.formula(b))),
            Formula::Dia(g, a) => {
                let g = self.game(g);
                Formula::Dia(Box::new(g), Box::new(self.formula(a)))
            }
            Formula::Mu(x, a) => Formula::Mu(x.clone(), Box::new(self.formula(a))),
        }
    }

    fn game(&mut self, g: &Game) -> Game {
        match g {
            Game::Atomic { .. } => self.game_symbol(g),
            Game::Test(f) => Game::Test(Box::new(self.formula(f))),
            Game::Choice(a, b) => Game::Choice(Box::new(self.game(a)), Box::new(self.game(b))),
            Game::Seq(a, b) => Game::Seq(Box::new(self.game(a)), Box::new(self.game(b))),
            Game::Star(a) => Game::Star(Box::new(self.game(a))),
            Game::Dual(a) => Game::Dual(Box::new(self.game(a))),
        }
    }
}

/// Replaces every distinct atomic formula and atomic game by its own symbol.
pub fn flatten(f: &Formula) -> PropReduction {
    let mut fl = Flattener::default();
    let formula = fl.formula(f);
    PropReduction {
        formula,
        props: fl.props.into_iter().map(|(a, n)| (n, a)).collect(),
        games: fl.games.into_iter().map(|(g, n)| (n, g)).collect(),
    }
}

/// Inverse of `flatten`.
pub fn sharpen(r: &PropReduction) -> Result<Formula, TranslateError> {
    sharpen_formula(&r.formula, r)
}

fn sharpen_formula(f: &Formula, r: &PropReduction) -> Result<Formula, TranslateError> {
    Ok(match f {
        Formula::True | Formula::FixVar(_) => f.clone(),
        Formula::Rel(p, args) if args.is_empty() => r
            .props
            .get(p)
            .cloned()
            .ok_or_else(|| TranslateError::MissingSymbol(p.clone()))?,
        Formula::Eq(..) | Formula::Rel(..) => {
            return Err(TranslateError::MissingSymbol(f.to_string()));
        }
        Formula::Not(a) => Formula::Not(Box::new(sharpen_formula(a, r)?)),
        Formula::And(a, b) => Formula::And(
            Box::new(sharpen_formula(a, r)?),
            Box::new(sharpen_formula(b, r)?),
        ),
        Formula::Dia(g, a) => Formula::Dia(Box::new(sharpen_game(g, r)?), Box::new(sharpen_formula(a, r)?)),
        Formula::Mu(x, a) => Formula::Mu(x.clone(), Box::new(sharpen_formula(a, r)?)),
    })
}

fn sharpen_game(g: &Game, r: &PropReduction) -> Result<Game, TranslateError> {
    Ok(match g {
        Game::Atomic { action, .. } => r
            .games
            .get(action)
            .cloned()
            .ok_or_else(|| TranslateError::MissingSymbol(action.clone()))?,
        Game::Test(f) => Game::Test(Box::new(sharpen_formula(f, r)?)),
        Game::Choice(a, b) => Game::Choice(Box::new(sharpen_game(a, r)?), Box::new(sharpen_game(b, r)?)),
        Game::Seq(a, b) => Game::Seq(Box::new(sharpen_game(a, r)?), Box::new(sharpen_game(b, r)?)),
        Game::Star(a) => Game::Star(Box::new(sharpen_game(a, r)?)),
        Game::Dual(a) => Game::Dual(Box::new(sharpen_game(a, r)?)),
    })
}

/// The propositional structure induced by a first-order structure: each
/// symbol denotes what its table entry denotes.
pub struct PropInterp<'a> {
    pub base: FoInterp<'a>,
    pub reduction: &'a PropReduction,
}

impl AtomInterp for PropInterp<'_> {
    fn domain(&self) -> usize {
        self.base.domain()
    }

    fn atom(&self, space: &Space, f: &Formula) -> Result<Bits, SemanticsError> {
        match f {
            Formula::True => Ok(Bits::full(space.size())),
            Formula::Rel(p, args) if args.is_empty() => {
                let atom = self
                    .reduction
                    .props
                    .get(p)
                    .ok_or_else(|| SemanticsError::Uninterpreted(p.clone()))?;
                self.base.atom(space, atom)
            }
            other => Err(SemanticsError::Uninterpreted(other.to_string())),
        }
    }

    fn game(
        &self,
        space: &Space,
        action: &str,
        _bound: &[String],
        _params: &[Term],
        goal: &Bits,
    ) -> Result<Bits, SemanticsError> {
        match self.reduction.games.get(action) {
            Some(Game::Atomic {
                action,
                bound,
                params,
            }) => self.base.game(space, action, bound, params, goal),
            _ => Err(SemanticsError::Uninterpreted(action.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula_infer, Logic};

    #[test]
    fn distinct_atoms_get_distinct_symbols() {
        let (f, _) = parse_formula_infer("R(x) & <a(x:y)> R(x)", Logic::Gl).unwrap();
        let r = flatten(&f);
        assert_eq!(r.formula.to_string(), "p1() & <A1()> p1()");
        assert_eq!(r.props["p1"].to_string(), "R(x)");
        assert_eq!(r.games["A1"].to_string(), "a(x:y)");
        assert_eq!(sharpen(&r).unwrap(), f);

        let (g, _) = parse_formula_infer("<a(x:y)> true & <a(y:x)> true", Logic::Gl).unwrap();
        assert_eq!(flatten(&g).games.len(), 2);
    }

    #[test]
    fn missing_symbol() {
        let (f, _) = parse_formula_infer("R(x)", Logic::Gl).unwrap();
        let mut r = flatten(&f);
        r.props.clear();
        assert!(matches!(sharpen(&r), Err(TranslateError::MissingSymbol(_))));
    }
}
