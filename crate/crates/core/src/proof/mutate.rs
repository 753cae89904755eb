//! Single-line proof corruptions used to test the checker.

use super::{Justification, Line, Proof};
use crate::syntax::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mutation {
    SwapPremises { line: usize },
    RenameVariable { line: usize, from: String, to: String },
    FlipConnective { line: usize },
}

fn rename_term(t: &Term, from: &str, to: &str) -> Term {
    match t {
        Term::Var(v) if v == from => Term::var(to),
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| rename_term(a, from, to)).collect()),
    }
}

/// Renames every occurrence of an individual variable, bound or free.
pub fn rename_everywhere(f: &Formula, from: &str, to: &str) -> Formula {
    match f {
        Formula::True | Formula::FixVar(_) => f.clone(),
        Formula::Eq(a, b) => Formula::Eq(rename_term(a, from, to), rename_term(b, from, to)),
        Formula::Rel(r, args) => Formula::Rel(r.clone(), args.iter().map(|t| rename_term(t, from, to)).collect()),
        Formula::Not(a) => not(rename_everywhere(a, from, to)),
        Formula::And(a, b) => and(rename_everywhere(a, from, to), rename_everywhere(b, from, to)),
        Formula::Dia(g, a) => dia(rename_game(g, from, to), rename_everywhere(a, from, to)),
        Formula::Mu(x, a) => mu(x, rename_everywhere(a, from, to)),
    }
}

fn rename_game(g: &Game, from: &str, to: &str) -> Game {
    match g {
        Game::Atomic {
            action,
            bound,
            params,
        } => Game::Atomic {
            action: action.clone(),
            bound: bound
                .iter()
                .map(|x| if x == from { to.to_string() } else { x.clone() })
                .collect(),
            params: params.iter().map(|t| rename_term(t, from, to)).collect(),
        },
        Game::Test(f) => test(rename_everywhere(f, from, to)),
        Game::Choice(a, b) => choice(rename_game(a, from, to), rename_game(b, from, to)),
        Game::Seq(a, b) => seq(rename_game(a, from, to), rename_game(b, from, to)),
        Game::Star(a) => star(rename_game(a, from, to)),
        Game::Dual(a) => dual(rename_game(a, from, to)),
    }
}

/// Replaces the first conjunction (preorder) by a disjunction.
pub fn flip_first_and(f: &Formula) -> Option<Formula> {
    match f {
        Formula::And(a, b) => Some(or((**a).clone(), (**b).clone())),
        Formula::Not(a) => flip_first_and(a).map(not),
        Formula::Mu(x, a) => flip_first_and(a).map(|a| mu(x, a)),
        Formula::Dia(g, a) => match flip_game(g) {
            Some(g) => Some(dia(g, (**a).clone())),
            None => flip_first_and(a).map(|a| dia((**g).clone(), a)),
        },
        _ => None,
    }
}

fn flip_game(g: &Game) -> Option<Game> {
    match g {
        Game::Atomic { .. } => None,
        Game::Test(f) => flip_first_and(f).map(test),
        Game::Choice(a, b) => match flip_game(a) {
            Some(a) => Some(choice(a, (**b).clone())),
            None => flip_game(b).map(|b| choice((**a).clone(), b)),
        },
        Game::Seq(a, b) => match flip_game(a) {
            Some(a) => Some(seq(a, (**b).clone())),
            None => flip_game(b).map(|b| seq((**a).clone(), b)),
        },
        Game::Star(a) => flip_game(a).map(star),
        Game::Dual(a) => flip_game(a).map(dual),
    }
}

fn with_line(p: &Proof, k: usize, line: Line) -> Proof {
    let mut q = p.clone();
    q.lines[k] = line;
    q
}

/// Every applicable single-line mutation.
pub fn mutations(p: &Proof) -> Vec<(Mutation, Proof)> {
    let mut out = Vec::new();
    for (k, l) in p.lines.iter().enumerate() {
        if let Justification::Mp(i, j) = l.just {
            if p.lines[i].formula != p.lines[j].formula {
                let line = Line {
                    formula: l.formula.clone(),
                    just: Justification::Mp(j, i),
                };
                out.push((Mutation::SwapPremises { line: k }, with_line(p, k, line)));
            }
        }
        let vars = all_vars(&l.formula);
        if let Some(from) = vars.iter().next() {
            let to = fresh_name(from, &vars);
            let line = Line {
                formula: rename_everywhere(&l.formula, from, &to),
                just: l.just.clone(),
            };
            out.push((
                Mutation::RenameVariable {
                    line: k,
                    from: from.clone(),
                    to,
                },
                with_line(p, k, line),
            ));
        }
        if let Some(formula) = flip_first_and(&l.formula) {
            let line = Line {
                formula,
                just: l.just.clone(),
            };
            out.push((Mutation::FlipConnective { line: k }, with_line(p, k, line)));
        }
    }
    out
}
