//! Substitution of individual and fixpoint variables, bound renaming, and
//! expansion of deterministic assignment into quantifiers and tests.

use super::ast::*;
use super::vars::*;
use super::SyntaxError;

pub fn substitute_term(t: &Term, x: &str, theta: &Term) -> Term {
    match t {
        Term::Var(v) if v == x => theta.clone(),
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::App(
            f.clone(),
            args.iter().map(|a| substitute_term(a, x, theta)).collect(),
        ),
    }
}

fn substitute_terms(ts: &[Term], x: &str, theta: &Term) -> Vec<Term> {
    ts.iter().map(|t| substitute_term(t, x, theta)).collect()
}

/// `φ[x↦θ]`. Never captures: where a binder would capture, an assignment
/// `x := θ` is inserted in front instead, as a sequential game in game logic
/// and as an outer modality in the μ-calculus.
pub fn substitute_var(f: &Formula, x: &str, theta: &Term, logic: Logic) -> Formula {
    if theta.as_var() == Some(x) {
        return f.clone();
    }
    subst_formula(f, x, theta, logic)
}

pub fn substitute_var_game(g: &Game, x: &str, theta: &Term) -> Game {
    if theta.as_var() == Some(x) {
        return g.clone();
    }
    subst_game(g, x, theta)
}

fn no_clash(g: &Game, x: &str, theta: &Term) -> bool {
    let bv = bound_vars(g);
    !bv.contains(x) && term_vars(theta).is_disjoint(&bv)
}

fn subst_formula(f: &Formula, x: &str, theta: &Term, logic: Logic) -> Formula {
    match f {
        Formula::True => Formula::True,
        Formula::Eq(a, b) => Formula::Eq(substitute_term(a, x, theta), substitute_term(b, x, theta)),
        Formula::Rel(r, args) => Formula::Rel(r.clone(), substitute_terms(args, x, theta)),
        Formula::Not(a) => not(subst_formula(a, x, theta, logic)),
        Formula::And(a, b) => and(
            subst_formula(a, x, theta, logic),
            subst_formula(b, x, theta, logic),
        ),
        Formula::FixVar(_) | Formula::Mu(..) => dia(assign(x, theta.clone()), f.clone()),
        Formula::Dia(g, body) => {
            if must_bound_vars(g).contains(x) {
                dia(subst_game(g, x, theta), (**body).clone())
            } else if no_clash(g, x, theta) {
                dia(subst_game(g, x, theta), subst_formula(body, x, theta, logic))
            } else if logic == Logic::Mu {
                dia(assign(x, theta.clone()), f.clone())
            } else {
                dia(seq(assign(x, theta.clone()), (**g).clone()), (**body).clone())
            }
        }
    }
}

fn subst_game(g: &Game, x: &str, theta: &Term) -> Game {
    match g {
        Game::Atomic {
            action,
            bound,
            params,
        } => Game::Atomic {
            action: action.clone(),
            bound: bound.clone(),
            params: substitute_terms(params, x, theta),
        },
        Game::Test(f) => test(subst_formula(f, x, theta, Logic::Gl)),
        Game::Choice(a, b) => choice(subst_game(a, x, theta), subst_game(b, x, theta)),
        Game::Dual(a) => dual(subst_game(a, x, theta)),
        Game::Seq(a, b) => {
            if must_bound_vars(a).contains(x) {
                seq(subst_game(a, x, theta), (**b).clone())
            } else if no_clash(a, x, theta) {
                seq(subst_game(a, x, theta), subst_game(b, x, theta))
            } else {
                seq(assign(x, theta.clone()), g.clone())
            }
        }
        Game::Star(a) => {
            if no_clash(a, x, theta) {
                star(subst_game(a, x, theta))
            } else {
                seq(assign(x, theta.clone()), g.clone())
            }
        }
    }
}

/// `φ[X↦ρ]`. A binder `μY` with `Y` free in `ρ` is renamed first so that
/// `ρ` is never captured.
pub fn substitute_fixvar(f: &Formula, x: &str, rho: &Formula) -> Formula {
    let rho_free = free_fixvars(rho);
    subst_fix(f, x, rho, &rho_free)
}

fn subst_fix(f: &Formula, x: &str, rho: &Formula, rho_free: &VarSet) -> Formula {
    match f {
        Formula::True | Formula::Eq(..) | Formula::Rel(..) => f.clone(),
        Formula::FixVar(y) if y == x => rho.clone(),
        Formula::FixVar(_) => f.clone(),
        Formula::Not(a) => not(subst_fix(a, x, rho, rho_free)),
        Formula::And(a, b) => and(subst_fix(a, x, rho, rho_free), subst_fix(b, x, rho, rho_free)),
        Formula::Dia(g, body) => dia(subst_fix_game(g, x, rho, rho_free), subst_fix(body, x, rho, rho_free)),
        Formula::Mu(y, _) if y == x => f.clone(),
        Formula::Mu(y, body) => {
            if rho_free.contains(y) && free_fixvars(body).contains(x) {
                let mut avoid = all_fixvars(body);
                avoid.extend(all_fixvars(rho));
                avoid.insert(x.to_string());
                let fresh = fresh_name(y, &avoid);
                let renamed = subst_fix(body, y, &fixvar(&fresh), &VarSet::new());
                mu(&fresh, subst_fix(&renamed, x, rho, rho_free))
            } else {
                mu(y, subst_fix(body, x, rho, rho_free))
            }
        }
    }
}

fn subst_fix_game(g: &Game, x: &str, rho: &Formula, rho_free: &VarSet) -> Game {
    match g {
        Game::Atomic { .. } => g.clone(),
        Game::Test(f) => test(subst_fix(f, x, rho, rho_free)),
        Game::Choice(a, b) => choice(subst_fix_game(a, x, rho, rho_free), subst_fix_game(b, x, rho, rho_free)),
        Game::Seq(a, b) => seq(subst_fix_game(a, x, rho, rho_free), subst_fix_game(b, x, rho, rho_free)),
        Game::Star(a) => star(subst_fix_game(a, x, rho, rho_free)),
        Game::Dual(a) => dual(subst_fix_game(a, x, rho, rho_free)),
    }
}

// Plain renaming of every occurrence (free or bound) of x to y. Only
// meaning-preserving when y is fresh and the state is adjusted accordingly.

fn raw_term(t: &Term, x: &str, y: &str) -> Term {
    substitute_term(t, x, &Term::var(y))
}

fn raw_formula(f: &Formula, x: &str, y: &str) -> Formula {
    match f {
        Formula::True | Formula::FixVar(_) => f.clone(),
        Formula::Eq(a, b) => Formula::Eq(raw_term(a, x, y), raw_term(b, x, y)),
        Formula::Rel(r, args) => Formula::Rel(r.clone(), args.iter().map(|t| raw_term(t, x, y)).collect()),
        Formula::Not(a) => not(raw_formula(a, x, y)),
        Formula::And(a, b) => and(raw_formula(a, x, y), raw_formula(b, x, y)),
        Formula::Dia(g, a) => dia(raw_game(g, x, y), raw_formula(a, x, y)),
        Formula::Mu(v, a) => mu(v, raw_formula(a, x, y)),
    }
}

fn raw_game(g: &Game, x: &str, y: &str) -> Game {
    match g {
        Game::Atomic {
            action,
            bound,
            params,
        } => Game::Atomic {
            action: action.clone(),
            bound: bound
                .iter()
                .map(|b| if b == x { y.to_string() } else { b.clone() })
                .collect(),
            params: params.iter().map(|t| raw_term(t, x, y)).collect(),
        },
        Game::Test(f) => test(raw_formula(f, x, y)),
        Game::Choice(a, b) => choice(raw_game(a, x, y), raw_game(b, x, y)),
        Game::Seq(a, b) => seq(raw_game(a, x, y), raw_game(b, x, y)),
        Game::Star(a) => star(raw_game(a, x, y)),
        Game::Dual(a) => dual(raw_game(a, x, y)),
    }
}

/// Renames the binder `x` of `g` to `y`. While `clean` holds, the value of
/// `x` still lives in `x` and reads stay untouched; after the first
/// possible binding it lives in `y`. Returns `None` if branches disagree.
fn move_binder(g: &Game, x: &str, y: &str, clean: bool) -> Option<(Game, bool)> {
    if !clean {
        return Some((raw_game(g, x, y), false));
    }
    match g {
        Game::Atomic {
            action,
            bound,
            params,
        } => {
            let binds = bound.iter().any(|b| b == x);
            let bound = bound
                .iter()
                .map(|b| if b == x { y.to_string() } else { b.clone() })
                .collect();
            let atomic = Game::Atomic {
                action: action.clone(),
                bound,
                params: params.clone(),
            };
            Some((atomic, !binds))
        }
        Game::Test(_) => Some((g.clone(), true)),
        Game::Seq(a, b) => {
            let (a2, ca) = move_binder(a, x, y, true)?;
            let (b2, cb) = move_binder(b, x, y, ca)?;
            Some((seq(a2, b2), cb))
        }
        Game::Choice(a, b) => {
            let (a2, ca) = move_binder(a, x, y, true)?;
            let (b2, cb) = move_binder(b, x, y, true)?;
            (ca == cb).then(|| (choice(a2, b2), ca))
        }
        Game::Dual(a) => move_binder(a, x, y, true).map(|(a2, c)| (dual(a2), c)),
        Game::Star(a) => {
            let (a2, ca) = move_binder(a, x, y, true)?;
            ca.then(|| (star(a2), true))
        }
    }
}

/// Alpha-variant of `f` whose bound variables (including those inside tests)
/// avoid `avoid`. Binders whose scope mentions a fixpoint variable are
/// renamed at the enclosing fixpoint, where the whole body can be renamed at
/// once. Fails only if `f` itself has free fixpoint variables that keep an
/// offending binder in scope.
pub fn rename_bound(f: &Formula, avoid: &VarSet) -> Result<Formula, SyntaxError> {
    let mut used = all_vars(f);
    used.extend(avoid.iter().cloned());
    let out = rb_formula(f, avoid, &mut used);
    let clash: Vec<_> = bound_vars_deep(&out).intersection(avoid).cloned().collect();
    if clash.is_empty() {
        Ok(out)
    } else {
        Err(SyntaxError::Signature(format!(
            "cannot rename bound {clash:?}: scope contains a free fixpoint variable"
        )))
    }
}

pub fn rename_bound_game(g: &Game, avoid: &VarSet) -> Result<Game, SyntaxError> {
    match rename_bound(&dia(g.clone(), tt()), avoid)? {
        Formula::Dia(g, _) => Ok(*g),
        other => Err(SyntaxError::Signature(format!(
            "renaming produced a non-modal formula `{other}`"
        ))),
    }
}

fn fresh_var(x: &str, used: &mut VarSet) -> String {
    let y = fresh_name(x, used);
    used.insert(y.clone());
    y
}

fn rb_formula(f: &Formula, avoid: &VarSet, used: &mut VarSet) -> Formula {
    match f {
        Formula::True | Formula::Eq(..) | Formula::Rel(..) | Formula::FixVar(_) => f.clone(),
        Formula::Not(a) => not(rb_formula(a, avoid, used)),
        Formula::And(a, b) => {
            let a = rb_formula(a, avoid, used);
            and(a, rb_formula(b, avoid, used))
        }
        Formula::Mu(x, body) => {
            let mut body = rb_formula(body, avoid, used);
            let original = mu(x, body.clone());
            let others: VarSet = free_fixvars(&original);
            if !others.is_empty() {
                return original;
            }
            let free = free_ind_vars(&original);
            let clash: Vec<String> = bound_vars_deep(&body).intersection(avoid).cloned().collect();
            let mut prefix = Vec::new();
            for v in clash {
                let y = fresh_var(&v, used);
                body = raw_formula(&body, &v, &y);
                if free.contains(&v) {
                    prefix.push((y, v));
                }
            }
            prefix
                .into_iter()
                .rev()
                .fold(mu(x, body), |acc, (y, v)| dia(assign(&y, Term::var(&v)), acc))
        }
        Formula::Dia(g, body) => {
            let g = rb_tests(g, avoid, used);
            let mut body = rb_formula(body, avoid, used);
            let mut g = g;
            let scope_fix = !free_fixvars(&body).is_empty();
            if scope_fix {
                return dia(g, body);
            }
            let clash: Vec<String> = bound_vars(&g).intersection(avoid).cloned().collect();
            for v in clash {
                let y = fresh_var(&v, used);
                match move_binder(&g, &v, &y, true) {
                    Some((g2, clean)) => {
                        g = g2;
                        if !clean {
                            body = raw_formula(&body, &v, &y);
                        }
                    }
                    None => {
                        g = seq(assign(&y, Term::var(&v)), raw_game(&g, &v, &y));
                        body = raw_formula(&body, &v, &y);
                    }
                }
            }
            dia(g, body)
        }
    }
}

fn rb_tests(g: &Game, avoid: &VarSet, used: &mut VarSet) -> Game {
    match g {
        Game::Atomic { .. } => g.clone(),
        Game::Test(f) => test(rb_formula(f, avoid, used)),
        Game::Choice(a, b) => {
            let a = rb_tests(a, avoid, used);
            choice(a, rb_tests(b, avoid, used))
        }
        Game::Seq(a, b) => {
            let a = rb_tests(a, avoid, used);
            seq(a, rb_tests(b, avoid, used))
        }
        Game::Star(a) => star(rb_tests(a, avoid, used)),
        Game::Dual(a) => dual(rb_tests(a, avoid, used)),
    }
}

/// Replaces every deterministic assignment by its encoding with `*` and
/// tests: `y:=*;?y=θ;x:=*;?x=y` in game logic, nested diamonds in the
/// μ-calculus. Vectorial assignments go through one fresh variable per
/// component.
pub fn expand_assignments(f: &Formula, logic: Logic) -> Formula {
    let mut used = all_vars(f);
    ea_formula(f, logic, &mut used)
}

fn ea_formula(f: &Formula, logic: Logic, used: &mut VarSet) -> Formula {
    match f {
        Formula::True | Formula::Eq(..) | Formula::Rel(..) | Formula::FixVar(_) => f.clone(),
        Formula::Not(a) => not(ea_formula(a, logic, used)),
        Formula::And(a, b) => {
            let a = ea_formula(a, logic, used);
            and(a, ea_formula(b, logic, used))
        }
        Formula::Mu(x, a) => mu(x, ea_formula(a, logic, used)),
        Formula::Dia(g, body) => {
            let body = ea_formula(body, logic, used);
            match (logic, g.as_ref()) {
                (Logic::Mu, Game::Atomic { action, bound, params }) if action == ASSIGN => {
                    let ys: Vec<String> = bound.iter().map(|x| fresh_var(x, used)).collect();
                    let mut out = body;
                    for (x, y) in bound.iter().zip(&ys).rev() {
                        out = exists(x, and(eq(Term::var(x), Term::var(y)), out));
                    }
                    for (y, t) in ys.iter().zip(params).rev() {
                        out = exists(y, and(eq(Term::var(y), t.clone()), out));
                    }
                    out
                }
                _ => dia(ea_game(g, logic, used), body),
            }
        }
    }
}

fn ea_game(g: &Game, logic: Logic, used: &mut VarSet) -> Game {
    match g {
        Game::Atomic { action, bound, params } if action == ASSIGN => {
            let ys: Vec<String> = bound.iter().map(|x| fresh_var(x, used)).collect();
            let mut steps = Vec::new();
            for (y, t) in ys.iter().zip(params) {
                steps.push(quant(y));
                steps.push(test(eq(Term::var(y), t.clone())));
            }
            for (x, y) in bound.iter().zip(&ys) {
                steps.push(quant(x));
                steps.push(test(eq(Term::var(x), Term::var(y))));
            }
            big_seq(steps).expect("assignment binds at least one variable")
        }
        Game::Atomic { .. } => g.clone(),
        Game::Test(f) => test(ea_formula(f, logic, used)),
        Game::Choice(a, b) => {
            let a = ea_game(a, logic, used);
            choice(a, ea_game(b, logic, used))
        }
        Game::Seq(a, b) => {
            let a = ea_game(a, logic, used);
            seq(a, ea_game(b, logic, used))
        }
        Game::Star(a) => star(ea_game(a, logic, used)),
        Game::Dual(a) => dual(ea_game(a, logic, used)),
    }
}
