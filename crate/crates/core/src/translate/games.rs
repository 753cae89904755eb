//! Translations between game formulas and fixpoint formulas.

use crate::syntax::*;

use super::TranslateError;

const FIX_NAMES: [&str; 2] = ["X", "Y"];

/// Game formulas to fixpoint formulas. Loops become least fixpoints; only the
/// names `X` and `Y` are ever bound.
pub fn parikh_f(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::Eq(..) | Formula::Rel(..) | Formula::FixVar(_) => f.clone(),
        Formula::Not(a) => not(parikh_f(a)),
        Formula::And(a, b) => and(parikh_f(a), parikh_f(b)),
        Formula::Dia(g, a) => diamond_f(g, parikh_f(a)),
        Formula::Mu(x, a) => mu(x, parikh_f(a)),
    }
}

fn diamond_f(g: &Game, post: Formula) -> Formula {
    match g {
        Game::Atomic { .. } => dia(g.clone(), post),
        Game::Test(q) => and(parikh_f(q), post),
        Game::Choice(a, b) => or(diamond_f(a, post.clone()), diamond_f(b, post)),
        Game::Seq(a, b) => {
            let inner = diamond_f(b, post);
            diamond_f(a, inner)
        }
        Game::Dual(a) => not(diamond_f(a, not(post))),
        Game::Star(a) => {
            // The postcondition mentions at most the enclosing loop variable.
            let free = free_fixvars(&post);
            let x = FIX_NAMES
                .iter()
                .find(|n| !free.contains(**n))
                .expect("postcondition has at most one free fixpoint variable");
            let body = or(post, diamond_f(a, fixvar(x)));
            Formula::Mu(x.to_string(), Box::new(body))
        }
    }
}

/// Fixpoint formulas to game formulas, sound on one-element structures.
pub fn g1(f: &Formula) -> Formula {
    match f {
        Formula::FixVar(_) => ff(),
        Formula::True | Formula::Eq(..) | Formula::Rel(..) => f.clone(),
        Formula::Not(a) => not(g1(a)),
        Formula::And(a, b) => and(g1(a), g1(b)),
        Formula::Dia(g, a) => dia(g.as_ref().clone(), g1(a)),
        Formula::Mu(_, a) => g1(a),
    }
}

/// Games modelling sabotage of one atomic game with state variables `s_a`
/// (sabotaged iff `s_a = ctop`) and `d_a` (Angel is the saboteur iff
/// `d_a = ctop`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SabotageGadget {
    pub sabotaged: String,
    pub saboteur: String,
    pub angel_sab: Game,
    pub demon_sab: Game,
    pub guarded: Game,
    pub init: Game,
}

pub fn sabotage_gadget(a: &Game, ctop: &str, cbot: &str) -> Result<SabotageGadget, TranslateError> {
    let Game::Atomic { action, .. } = a else {
        return Err(TranslateError::Precondition(format!("`{a}` is not an atomic game")));
    };
    if !action.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(TranslateError::Precondition(format!(
            "action `{action}` cannot name gadget variables"
        )));
    }
    let s = format!("s_{action}");
    let d = format!("d_{action}");
    let used = all_vars_game(a);
    for v in [&s, &d] {
        if used.contains(v) || v == ctop || v == cbot {
            return Err(TranslateError::Collision(v.clone()));
        }
    }
    for v in [ctop, cbot] {
        if used.contains(v) {
            return Err(TranslateError::Collision(v.to_string()));
        }
    }
    if ctop == cbot {
        return Err(TranslateError::Collision(ctop.to_string()));
    }
    let (top, bot) = (Term::var(ctop), Term::var(cbot));
    let is = |v: &str, t: &Term| eq(Term::var(v), t.clone());
    let sabotaged_branch = choice(
        seq(test(is(&d, &top)), dual(test(ff()))),
        seq(test(is(&d, &bot)), test(ff())),
    );
    Ok(SabotageGadget {
        angel_sab: seq(assign(&s, top.clone()), assign(&d, top.clone())),
        demon_sab: seq(assign(&s, top.clone()), assign(&d, bot.clone())),
        guarded: choice(
            seq(test(is(&s, &bot)), a.clone()),
            seq(test(is(&s, &top)), sabotaged_branch),
        ),
        init: assign(&s, bot),
        sabotaged: s,
        saboteur: d,
    })
}

/// Splits a formula into two disjuncts, reading `¬(a ∧ b)` as `¬a ∨ ¬b`.
fn split_or(f: &Formula) -> Option<(Formula, Formula)> {
    match f {
        Formula::Not(inner) => match inner.as_ref() {
            Formula::And(a, b) => Some((neg(a), neg(b))),
            _ => None,
        },
        _ => None,
    }
}

/// Recognises `d` as `⟨α⟩goal` for a game `α` whose only reference to the
/// fixpoint variable is the goal itself.
fn game_of(d: &Formula, goal: &Formula, var: &str) -> Result<Option<Game>, TranslateError> {
    if d == goal {
        return Ok(Some(test(tt())));
    }
    if !free_fixvars(d).contains(var) {
        return Ok(None);
    }
    match d {
        Formula::Dia(g, rest) if g.is_atomic() => {
            Ok(game_of(rest, goal, var)?.map(|h| then(g.as_ref().clone(), h)))
        }
        Formula::Not(inner) => {
            if let Formula::Not(dd) = inner.as_ref() {
                if let Some(h) = game_of(dd, goal, var)? {
                    return Ok(Some(h));
                }
            }
            if let Some((l, r)) = split_or(d) {
                if let (Some(a), Some(b)) = (game_of(&l, goal, var)?, game_of(&r, goal, var)?) {
                    return Ok(Some(choice(a, b)));
                }
            }
            Ok(game_of(inner, &neg(goal), var)?.map(dual))
        }
        Formula::And(q, rest) | Formula::And(rest, q) if free_fixvars(q).is_empty() => {
            match game_of(rest, goal, var)? {
                Some(h) => Ok(Some(then(test(g2(q)?), h))),
                None => Ok(None),
            }
        }
        Formula::Mu(y, body) if y != var => {
            let Some((post, step)) = loop_shape(body, y)? else {
                return Ok(None);
            };
            Ok(game_of(&post, goal, var)?.map(|h| then(star(step), h)))
        }
        _ => Ok(None),
    }
}

/// Sequential composition that drops `?true`.
fn then(a: Game, b: Game) -> Game {
    let skip = test(tt());
    if b == skip {
        a
    } else if a == skip {
        b
    } else {
        seq(a, b)
    }
}

/// Matches `μY.(post ∨ ⟨α⟩Y)` with `Y` only at the loop goal.
fn loop_shape(body: &Formula, y: &str) -> Result<Option<(Formula, Game)>, TranslateError> {
    let Some((l, r)) = split_or(body) else {
        return Ok(None);
    };
    for (post, step) in [(&l, &r), (&r, &l)] {
        if free_fixvars(post).contains(y) {
            continue;
        }
        if let Some(g) = game_of(step, &fixvar(y), y)? {
            return Ok(Some((post.clone(), g)));
        }
    }
    Ok(None)
}

/// Fixpoint formulas to game formulas on the game-shaped fragment: every
/// fixpoint must read `μX.(ψ ∨ ⟨α⟩X)` and becomes `⟨α*⟩ψ`.
pub fn g2(f: &Formula) -> Result<Formula, TranslateError> {
    Ok(match f {
        Formula::True | Formula::Eq(..) | Formula::Rel(..) => f.clone(),
        Formula::FixVar(_) => return Err(TranslateError::Unsupported(f.to_string())),
        Formula::Not(a) => not(g2(a)?),
        Formula::And(a, b) => and(g2(a)?, g2(b)?),
        Formula::Dia(g, a) => dia(g.as_ref().clone(), g2(a)?),
        Formula::Mu(x, body) => match loop_shape(body, x)? {
            Some((post, step)) => dia(star(step), g2(&post)?),
            None => return Err(TranslateError::Unsupported(f.to_string())),
        },
    })
}

/// `((∀x,y x=y) → G1 φ) ∧ ∀ctop,cbot (ctop ≠ cbot → G2 φ)` with `ctop`, `cbot`
/// reserved variable names.
pub fn g_combined(f: &Formula) -> Result<Formula, TranslateError> {
    if let Some(x) = free_fixvars(f).into_iter().next() {
        return Err(TranslateError::Precondition(format!(
            "fixpoint variable `{x}` is free"
        )));
    }
    let used = all_vars(f);
    for reserved in ["ctop", "cbot"] {
        if used.contains(reserved) {
            return Err(TranslateError::Collision(reserved.to_string()));
        }
    }
    let second = g2(f)?;
    let x = fresh_name("x", &used);
    let mut used2 = used.clone();
    used2.insert(x.clone());
    let y = fresh_name("y", &used2);
    let singleton = forall(&x, forall(&y, eq(Term::var(&x), Term::var(&y))));
    let distinct = not(eq(Term::var("ctop"), Term::var("cbot")));
    Ok(and(
        implies(singleton, g1(f)),
        forall("ctop", forall("cbot", implies(distinct, second))),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl(s: &str) -> Formula {
        parse_formula_infer(s, Logic::Gl).unwrap().0
    }

    fn muf(s: &str) -> Formula {
        parse_formula_infer(s, Logic::Mu).unwrap().0
    }

    #[test]
    fn f_clauses() {
        assert_eq!(parikh_f(&gl("<a(x:x)*> R(x)")).to_string(), "mu X . (R(x) | <a(x:x)> X)");
        assert_eq!(parikh_f(&gl("<?R(y)> R(x)")), and(gl("R(y)"), gl("R(x)")));
        assert_eq!(parikh_f(&gl("<a(x:x)^d> R(x)")), not(dia(atomic("a", &["x"], vec![Term::var("x")]), not(gl("R(x)")))));
    }

    #[test]
    fn f_reuses_two_names() {
        let out = parikh_f(&gl("<((a(x:x))* ; b(y:))*> <(c(:x)* ; a(x:x))*> R(x)"));
        let names = all_fixvars(&out);
        assert!(names.len() <= 2, "{out}");
        let nested = parikh_f(&gl("<(((a(x:x))*)*)*> R(x)"));
        assert_eq!(
            nested.to_string(),
            "mu X . (R(x) | mu Y . (X | mu X . (Y | <a(x:x)> X)))"
        );
    }

    #[test]
    fn g1_clauses() {
        assert_eq!(g1(&fixvar("X")), ff());
        assert_eq!(
            g1(&muf("mu X . (R(x) | <x := *> X)")).to_string(),
            "R(x) | <x := *> false"
        );
        assert_eq!(g1(&gl("R(x)")), gl("R(x)"));
    }

    #[test]
    fn g2_inverts_f_on_loops() {
        let f = muf("mu X . (R(x) | <a(x:x)> X)");
        assert_eq!(g2(&f).unwrap().to_string(), "<a(x:x)*> R(x)");
        let nu = muf("nu X . (R(x) & [a(x:x)] X)");
        assert!(g2(&nu).is_ok());
        let alt = muf("mu X . nu Y . ((R(x) & <a(x:x)> X) | <a(x:x)> Y)");
        assert!(matches!(g2(&alt), Err(TranslateError::Unsupported(_))));
    }

    #[test]
    fn gadget_shape() {
        let a = atomic("a", &["x"], vec![Term::var("x")]);
        let g = sabotage_gadget(&a, "ctop", "cbot").unwrap();
        assert_eq!(g.angel_sab.to_string(), "s_a := ctop ; d_a := ctop");
        assert_eq!(g.demon_sab.to_string(), "s_a := ctop ; d_a := cbot");
        assert_eq!(
            g.guarded.to_string(),
            "?s_a = cbot ; a(x:x) ++ ?s_a = ctop ; (?d_a = ctop ; ?false^d ++ ?d_a = cbot ; ?false)"
        );
        assert_eq!(g.init.to_string(), "s_a := cbot");
        let clash = atomic("a", &["s_a"], vec![Term::var("x")]);
        assert!(matches!(
            sabotage_gadget(&clash, "ctop", "cbot"),
            Err(TranslateError::Collision(_))
        ));
    }

    #[test]
    fn combined_shape() {
        let out = g_combined(&gl("R(x)")).unwrap();
        assert_eq!(
            out.to_string(),
            "(<x1 := *> ![y1 := *] x1 = y1 | R(x)) & [ctop := *] [cbot := *] (ctop = cbot | R(x))"
        );
        assert!(matches!(
            g_combined(&muf("R(ctop)")),
            Err(TranslateError::Collision(_))
        ));
    }
}
