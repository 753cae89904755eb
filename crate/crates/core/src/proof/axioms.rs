//! Axiom schemas: instance constructors and shape checkers.
//!
//! A checker extracts the schema parameters from the candidate, rebuilds the
//! instance from them and compares syntactically.

use std::collections::BTreeMap;

use super::ProofError;
use crate::syntax::*;

/// Schema names with the calculi that admit them.
pub const AXIOMS: &[(&str, &[Logic])] = &[
    ("exists", &[Logic::Gl, Logic::Mu]),
    ("C", &[Logic::Gl, Logic::Mu]),
    ("nonempty", &[Logic::Gl, Logic::Mu]),
    ("dual", &[Logic::Gl]),
    ("test", &[Logic::Gl]),
    ("composition", &[Logic::Gl]),
    ("choice", &[Logic::Gl]),
    ("loop", &[Logic::Gl]),
    ("mu", &[Logic::Mu]),
];

pub fn admits(name: &str, logic: Logic) -> Option<bool> {
    AXIOMS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, ls)| ls.contains(&logic))
}

/// `φ[x↦θ] → ∃x φ`.
pub fn ax_exists(x: &str, theta: &Term, phi: &Formula, logic: Logic) -> Formula {
    implies(substitute_var(phi, x, theta, logic), dia(quant(x), phi.clone()))
}

/// `(ψ ∧ ⟨a⟩φ) → ⟨a⟩(ψ ∧ φ)` for an atomic game `a`.
pub fn ax_c(a: &Game, psi: &Formula, phi: &Formula) -> Formula {
    implies(
        and(psi.clone(), dia(a.clone(), phi.clone())),
        dia(a.clone(), and(psi.clone(), phi.clone())),
    )
}

/// `∃x false → false`.
pub fn ax_nonempty(x: &str) -> Formula {
    implies(dia(quant(x), ff()), ff())
}

/// `⟨αᵈ⟩φ ↔ ¬⟨α⟩¬φ`.
pub fn ax_dual(a: &Game, phi: &Formula) -> Formula {
    iff(
        dia(dual(a.clone()), phi.clone()),
        not(dia(a.clone(), not(phi.clone()))),
    )
}

/// `⟨?χ⟩φ ↔ χ ∧ φ`.
pub fn ax_test(chi: &Formula, phi: &Formula) -> Formula {
    iff(dia(test(chi.clone()), phi.clone()), and(chi.clone(), phi.clone()))
}

/// `⟨α;β⟩φ ↔ ⟨α⟩⟨β⟩φ`.
pub fn ax_composition(a: &Game, b: &Game, phi: &Formula) -> Formula {
    iff(
        dia(seq(a.clone(), b.clone()), phi.clone()),
        dia(a.clone(), dia(b.clone(), phi.clone())),
    )
}

/// `⟨α∪β⟩φ ↔ ⟨α⟩φ ∨ ⟨β⟩φ`.
pub fn ax_choice(a: &Game, b: &Game, phi: &Formula) -> Formula {
    iff(
        dia(choice(a.clone(), b.clone()), phi.clone()),
        or(dia(a.clone(), phi.clone()), dia(b.clone(), phi.clone())),
    )
}

/// `φ ∨ ⟨α⟩⟨α*⟩φ → ⟨α*⟩φ`.
pub fn ax_loop(a: &Game, phi: &Formula) -> Formula {
    let s = dia(star(a.clone()), phi.clone());
    implies(or(phi.clone(), dia(a.clone(), s.clone())), s)
}

/// `φ[X↦μX.φ] → μX.φ`.
pub fn ax_mu(x: &str, phi: &Formula) -> Formula {
    let m = mu(x, phi.clone());
    implies(substitute_fixvar(phi, x, &m), m)
}

/// Whether `ψ` may move past an atomic game binding `xs`.
pub fn c_side_condition(psi: &Formula, xs: &[String]) -> Result<(), String> {
    if let Some(x) = free_fixvars(psi).into_iter().next() {
        return Err(format!("context formula has free fixpoint variable `{x}`"));
    }
    let fv = free_ind_vars(psi);
    let clash: Vec<&String> = xs.iter().filter(|x| fv.contains(*x)).collect();
    if clash.is_empty() {
        Ok(())
    } else {
        Err(format!("context formula mentions bound variable(s) {clash:?}"))
    }
}

fn subterms(t: &Term, out: &mut Vec<Term>) {
    if !out.contains(t) {
        out.push(t.clone());
    }
    if let Term::App(_, args) = t {
        args.iter().for_each(|a| subterms(a, out));
    }
}

fn formula_terms(f: &Formula, out: &mut Vec<Term>) {
    match f {
        Formula::True | Formula::FixVar(_) => {}
        Formula::Eq(a, b) => {
            subterms(a, out);
            subterms(b, out);
        }
        Formula::Rel(_, args) => args.iter().for_each(|t| subterms(t, out)),
        Formula::Not(a) | Formula::Mu(_, a) => formula_terms(a, out),
        Formula::And(a, b) => {
            formula_terms(a, out);
            formula_terms(b, out);
        }
        Formula::Dia(g, a) => {
            game_terms(g, out);
            formula_terms(a, out);
        }
    }
}

fn game_terms(g: &Game, out: &mut Vec<Term>) {
    match g {
        Game::Atomic { bound, params, .. } => {
            bound.iter().for_each(|x| subterms(&Term::var(x), out));
            params.iter().for_each(|t| subterms(t, out));
        }
        Game::Test(f) => formula_terms(f, out),
        Game::Choice(a, b) | Game::Seq(a, b) => {
            game_terms(a, out);
            game_terms(b, out);
        }
        Game::Star(a) | Game::Dual(a) => game_terms(a, out),
    }
}

fn is_quant(g: &Game) -> Option<&str> {
    match g {
        Game::Atomic {
            action,
            bound,
            params,
        } if action == QUANT && bound.len() == 1 && params.is_empty() => Some(&bound[0]),
        _ => None,
    }
}

/// Checks `f` against schema `name`. Returns the reason on mismatch.
pub fn check_axiom_with(
    name: &str,
    f: &Formula,
    bindings: &BTreeMap<String, Term>,
    logic: Logic,
) -> Result<Result<(), String>, ProofError> {
    let shape = |ok: bool| if ok { Ok(()) } else { Err(format!("not an instance of `{name}`")) };
    let verdict = match name {
        "exists" => {
            let Some((lhs, rhs)) = f.as_implies() else {
                return Ok(shape(false));
            };
            let Formula::Dia(g, phi) = rhs else {
                return Ok(shape(false));
            };
            let Some(x) = is_quant(g) else {
                return Ok(shape(false));
            };
            let mut candidates = Vec::new();
            if let Some(t) = bindings.get("theta") {
                candidates.push(t.clone());
            } else {
                candidates.push(Term::var(x));
                formula_terms(lhs, &mut candidates);
            }
            shape(candidates.iter().any(|t| ax_exists(x, t, phi, logic) == *f))
        }
        "C" => {
            let Some((lhs, _)) = f.as_implies() else {
                return Ok(shape(false));
            };
            let Formula::And(psi, d) = lhs else {
                return Ok(shape(false));
            };
            let Formula::Dia(g, phi) = d.as_ref() else {
                return Ok(shape(false));
            };
            let Game::Atomic { bound, .. } = g.as_ref() else {
                return Ok(Err("C applies to atomic games only".into()));
            };
            if ax_c(g, psi, phi) != *f {
                shape(false)
            } else {
                c_side_condition(psi, bound)
            }
        }
        "nonempty" => {
            let ok = f
                .as_implies()
                .and_then(|(lhs, _)| match lhs {
                    Formula::Dia(g, _) => is_quant(g),
                    _ => None,
                })
                .is_some_and(|x| ax_nonempty(x) == *f);
            shape(ok)
        }
        "dual" | "test" | "composition" | "choice" => {
            let Some((lhs, _)) = f.as_iff() else {
                return Ok(shape(false));
            };
            let Formula::Dia(g, phi) = lhs else {
                return Ok(shape(false));
            };
            let rebuilt = match (name, g.as_ref()) {
                ("dual", Game::Dual(a)) => Some(ax_dual(a, phi)),
                ("test", Game::Test(chi)) => Some(ax_test(chi, phi)),
                ("composition", Game::Seq(a, b)) => Some(ax_composition(a, b, phi)),
                ("choice", Game::Choice(a, b)) => Some(ax_choice(a, b, phi)),
                _ => None,
            };
            shape(rebuilt.as_ref() == Some(f))
        }
        "loop" => {
            let ok = match f.as_implies() {
                Some((_, Formula::Dia(g, phi))) => match g.as_ref() {
                    Game::Star(a) => ax_loop(a, phi) == *f,
                    _ => false,
                },
                _ => false,
            };
            shape(ok)
        }
        "mu" => {
            let ok = match f.as_implies() {
                Some((_, Formula::Mu(x, phi))) => ax_mu(x, phi) == *f,
                _ => false,
            };
            shape(ok)
        }
        other => return Err(ProofError::UnknownSchema(other.to_string())),
    };
    Ok(verdict)
}

/// Whether `f` is an instance of schema `name` (any calculus admitting it).
pub fn check_axiom_instance(name: &str, f: &Formula) -> Result<bool, ProofError> {
    let logic = match admits(name, Logic::Gl) {
        None => return Err(ProofError::UnknownSchema(name.to_string())),
        Some(true) => Logic::Gl,
        Some(false) => Logic::Mu,
    };
    // The ∃ schema depends on the calculus through substitution.
    let with = |l| check_axiom_with(name, f, &BTreeMap::new(), l).map(|r| r.is_ok());
    if name == "exists" {
        return Ok(with(Logic::Gl)? || with(Logic::Mu)?);
    }
    with(logic)
}

/// Equality axioms: reflexivity, symmetry, transitivity and congruence for
/// function and relation symbols.
pub fn check_eq_axiom(f: &Formula) -> bool {
    if let Formula::Eq(a, b) = f {
        return a == b;
    }
    let Some((lhs, rhs)) = f.as_implies() else {
        return false;
    };
    match (lhs, rhs) {
        (Formula::Eq(s, t), Formula::Eq(t2, s2)) if s == s2 && t == t2 => true,
        (Formula::And(l, r), Formula::Eq(a, c)) => {
            if let (Formula::Eq(a2, b), Formula::Eq(b2, c2)) = (l.as_ref(), r.as_ref()) {
                if a == a2 && b == b2 && c == c2 {
                    return true;
                }
            }
            match (a, c) {
                (Term::App(f1, ss), Term::App(f2, ts)) if f1 == f2 && ss.len() == ts.len() && !ss.is_empty() => {
                    *lhs == eq_conjunction(ss, ts)
                }
                _ => false,
            }
        }
        (Formula::And(eqs, r1), Formula::Rel(name, ts)) => match r1.as_ref() {
            Formula::Rel(n1, ss) if n1 == name && ss.len() == ts.len() && !ss.is_empty() => {
                **eqs == eq_conjunction(ss, ts)
            }
            _ => false,
        },
        _ => false,
    }
}

/// `s₁ = t₁ ∧ … ∧ sₙ = tₙ`, left-nested.
pub fn eq_conjunction(ss: &[Term], ts: &[Term]) -> Formula {
    big_and(ss.iter().zip(ts).map(|(s, t)| eq(s.clone(), t.clone())).collect())
}
