//! Free, bound and must-bound variables.

use std::collections::BTreeSet;

use super::ast::{Formula, Game, Term};

pub type VarSet = BTreeSet<String>;

pub fn term_vars(t: &Term) -> VarSet {
    let mut out = VarSet::new();
    add_term_vars(t, &mut out);
    out
}

pub fn add_term_vars(t: &Term, out: &mut VarSet) {
    match t {
        Term::Var(v) => {
            out.insert(v.clone());
        }
        Term::App(_, args) => args.iter().for_each(|a| add_term_vars(a, out)),
    }
}

pub fn terms_vars(ts: &[Term]) -> VarSet {
    let mut out = VarSet::new();
    ts.iter().for_each(|t| add_term_vars(t, &mut out));
    out
}

/// Free variables of a formula: individual variables together with free
/// fixpoint variables (the two are distinguished by `Formula::FixVar`).
pub fn free_vars(f: &Formula) -> VarSet {
    match f {
        Formula::True => VarSet::new(),
        Formula::Eq(a, b) => {
            let mut s = term_vars(a);
            add_term_vars(b, &mut s);
            s
        }
        Formula::Rel(_, args) => terms_vars(args),
        Formula::Not(a) => free_vars(a),
        Formula::And(a, b) => {
            let mut s = free_vars(a);
            s.extend(free_vars(b));
            s
        }
        Formula::Dia(g, a) => {
            let mut s = free_vars_game(g);
            let mbv = must_bound_vars(g);
            s.extend(free_vars(a).into_iter().filter(|v| !mbv.contains(v)));
            s
        }
        Formula::FixVar(x) => VarSet::from([x.clone()]),
        Formula::Mu(x, body) => {
            let mut s = free_vars(body);
            s.remove(x);
            s
        }
    }
}

pub fn free_vars_game(g: &Game) -> VarSet {
    match g {
        Game::Atomic { params, .. } => terms_vars(params),
        Game::Test(f) => free_vars(f),
        Game::Choice(a, b) => {
            let mut s = free_vars_game(a);
            s.extend(free_vars_game(b));
            s
        }
        Game::Seq(a, b) => {
            let mut s = free_vars_game(a);
            let mbv = must_bound_vars(a);
            s.extend(free_vars_game(b).into_iter().filter(|v| !mbv.contains(v)));
            s
        }
        Game::Star(a) | Game::Dual(a) => free_vars_game(a),
    }
}

/// Free individual variables only.
pub fn free_ind_vars(f: &Formula) -> VarSet {
    let fix = free_fixvars(f);
    free_vars(f).into_iter().filter(|v| !fix.contains(v)).collect()
}

pub fn free_fixvars(f: &Formula) -> VarSet {
    let mut out = VarSet::new();
    collect_free_fixvars(f, &mut Vec::new(), &mut out);
    out
}

fn collect_free_fixvars(f: &Formula, bound: &mut Vec<String>, out: &mut VarSet) {
    match f {
        Formula::True | Formula::Eq(..) | Formula::Rel(..) => {}
        Formula::Not(a) => collect_free_fixvars(a, bound, out),
        Formula::And(a, b) => {
            collect_free_fixvars(a, bound, out);
            collect_free_fixvars(b, bound, out);
        }
        Formula::Dia(g, a) => {
            collect_free_fixvars_game(g, bound, out);
            collect_free_fixvars(a, bound, out);
        }
        Formula::FixVar(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Formula::Mu(x, body) => {
            bound.push(x.clone());
            collect_free_fixvars(body, bound, out);
            bound.pop();
        }
    }
}

fn collect_free_fixvars_game(g: &Game, bound: &mut Vec<String>, out: &mut VarSet) {
    match g {
        Game::Atomic { .. } => {}
        Game::Test(f) => collect_free_fixvars(f, bound, out),
        Game::Choice(a, b) | Game::Seq(a, b) => {
            collect_free_fixvars_game(a, bound, out);
            collect_free_fixvars_game(b, bound, out);
        }
        Game::Star(a) | Game::Dual(a) => collect_free_fixvars_game(a, bound, out),
    }
}

pub fn must_bound_vars(g: &Game) -> VarSet {
    match g {
        Game::Atomic { bound, .. } => bound.iter().cloned().collect(),
        Game::Dual(a) => must_bound_vars(a),
        Game::Test(_) | Game::Star(_) => VarSet::new(),
        Game::Choice(a, b) => {
            let mb = must_bound_vars(b);
            must_bound_vars(a).into_iter().filter(|v| mb.contains(v)).collect()
        }
        Game::Seq(a, b) => {
            let mut s = must_bound_vars(a);
            s.extend(must_bound_vars(b));
            s
        }
    }
}

/// Variables a game may write on some play. Tests contribute nothing even if
/// their formula binds variables internally.
pub fn bound_vars(g: &Game) -> VarSet {
    match g {
        Game::Atomic { bound, .. } => bound.iter().cloned().collect(),
        Game::Test(_) => VarSet::new(),
        Game::Dual(a) | Game::Star(a) => bound_vars(a),
        Game::Choice(a, b) | Game::Seq(a, b) => {
            let mut s = bound_vars(a);
            s.extend(bound_vars(b));
            s
        }
    }
}

/// Bound variables of a formula: BV(⟨α⟩φ) = BV(α) ∪ BV(φ), where tests inside
/// α contribute nothing.
pub fn bound_vars_formula(f: &Formula) -> VarSet {
    match f {
        Formula::True | Formula::Eq(..) | Formula::Rel(..) | Formula::FixVar(_) => VarSet::new(),
        Formula::Not(a) | Formula::Mu(_, a) => bound_vars_formula(a),
        Formula::And(a, b) => {
            let mut s = bound_vars_formula(a);
            s.extend(bound_vars_formula(b));
            s
        }
        Formula::Dia(g, a) => {
            let mut s = bound_vars(g);
            s.extend(bound_vars_formula(a));
            s
        }
    }
}

/// Every variable written by some atomic game anywhere in `f`, tests included.
pub fn bound_vars_deep(f: &Formula) -> VarSet {
    let mut out = VarSet::new();
    collect_bound_formula(f, &mut out);
    out
}

fn collect_bound_formula(f: &Formula, out: &mut VarSet) {
    match f {
        Formula::True | Formula::Eq(..) | Formula::Rel(..) | Formula::FixVar(_) => {}
        Formula::Not(a) | Formula::Mu(_, a) => collect_bound_formula(a, out),
        Formula::And(a, b) => {
            collect_bound_formula(a, out);
            collect_bound_formula(b, out);
        }
        Formula::Dia(g, a) => {
            collect_bound_game_deep(g, out);
            collect_bound_formula(a, out);
        }
    }
}

pub fn bound_vars_game_deep(g: &Game) -> VarSet {
    let mut out = VarSet::new();
    collect_bound_game_deep(g, &mut out);
    out
}

fn collect_bound_game_deep(g: &Game, out: &mut VarSet) {
    match g {
        Game::Atomic { bound, .. } => out.extend(bound.iter().cloned()),
        Game::Test(f) => collect_bound_formula(f, out),
        Game::Choice(a, b) | Game::Seq(a, b) => {
            collect_bound_game_deep(a, out);
            collect_bound_game_deep(b, out);
        }
        Game::Dual(a) | Game::Star(a) => collect_bound_game_deep(a, out),
    }
}

/// Every individual variable occurring anywhere (free or bound).
pub fn all_vars(f: &Formula) -> VarSet {
    let mut out = VarSet::new();
    collect_all_vars(f, &mut out);
    out
}

pub fn all_vars_game(g: &Game) -> VarSet {
    let mut out = VarSet::new();
    collect_all_vars_game(g, &mut out);
    out
}

fn collect_all_vars(f: &Formula, out: &mut VarSet) {
    match f {
        Formula::True | Formula::FixVar(_) => {}
        Formula::Eq(a, b) => {
            add_term_vars(a, out);
            add_term_vars(b, out);
        }
        Formula::Rel(_, args) => args.iter().for_each(|t| add_term_vars(t, out)),
        Formula::Not(a) | Formula::Mu(_, a) => collect_all_vars(a, out),
        Formula::And(a, b) => {
            collect_all_vars(a, out);
            collect_all_vars(b, out);
        }
        Formula::Dia(g, a) => {
            collect_all_vars_game(g, out);
            collect_all_vars(a, out);
        }
    }
}

fn collect_all_vars_game(g: &Game, out: &mut VarSet) {
    match g {
        Game::Atomic { bound, params, .. } => {
            out.extend(bound.iter().cloned());
            params.iter().for_each(|t| add_term_vars(t, out));
        }
        Game::Test(f) => collect_all_vars(f, out),
        Game::Choice(a, b) | Game::Seq(a, b) => {
            collect_all_vars_game(a, out);
            collect_all_vars_game(b, out);
        }
        Game::Dual(a) | Game::Star(a) => collect_all_vars_game(a, out),
    }
}

/// Every fixpoint variable name occurring anywhere (free or bound).
pub fn all_fixvars(f: &Formula) -> VarSet {
    let mut out = VarSet::new();
    collect_all_fixvars(f, &mut out);
    out
}

fn collect_all_fixvars(f: &Formula, out: &mut VarSet) {
    match f {
        Formula::True | Formula::Eq(..) | Formula::Rel(..) => {}
        Formula::FixVar(x) => {
            out.insert(x.clone());
        }
        Formula::Mu(x, a) => {
            out.insert(x.clone());
            collect_all_fixvars(a, out);
        }
        Formula::Not(a) => collect_all_fixvars(a, out),
        Formula::And(a, b) => {
            collect_all_fixvars(a, out);
            collect_all_fixvars(b, out);
        }
        Formula::Dia(g, a) => {
            collect_all_fixvars_game(g, out);
            collect_all_fixvars(a, out);
        }
    }
}

fn collect_all_fixvars_game(g: &Game, out: &mut VarSet) {
    match g {
        Game::Atomic { .. } => {}
        Game::Test(f) => collect_all_fixvars(f, out),
        Game::Choice(a, b) | Game::Seq(a, b) => {
            collect_all_fixvars_game(a, out);
            collect_all_fixvars_game(b, out);
        }
        Game::Dual(a) | Game::Star(a) => collect_all_fixvars_game(a, out),
    }
}

/// Smallest `base<n>` (n ≥ 1, trailing digits of `base` stripped) not in `avoid`.
pub fn fresh_name(base: &str, avoid: &VarSet) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|c| !avoid.contains(c))
        .expect("unbounded suffix search")
}
