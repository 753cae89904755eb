//! The proof checker.

use std::collections::HashMap;

use super::axioms::{admits, check_axiom_with, check_eq_axiom};
use super::{Justification, Proof};
use crate::syntax::*;

/// Largest number of opaque atoms the tautology check will enumerate.
const MAX_ATOMS: usize = 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    /// Zero-based line index and the reason.
    Rejected { line: usize, reason: String },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

enum Prop {
    Const(bool),
    Atom(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
}

impl Prop {
    fn first_atom(&self) -> Option<usize> {
        match self {
            Prop::Const(_) => None,
            Prop::Atom(i) => Some(*i),
            Prop::Not(a) => a.first_atom(),
            Prop::And(a, b) => a.first_atom().or_else(|| b.first_atom()),
        }
    }

    /// Fixes one atom and propagates constants.
    fn assign(&self, atom: usize, value: bool) -> Prop {
        match self {
            Prop::Const(b) => Prop::Const(*b),
            Prop::Atom(i) if *i == atom => Prop::Const(value),
            Prop::Atom(i) => Prop::Atom(*i),
            Prop::Not(a) => match a.assign(atom, value) {
                Prop::Const(b) => Prop::Const(!b),
                other => Prop::Not(Box::new(other)),
            },
            Prop::And(a, b) => match a.assign(atom, value) {
                Prop::Const(false) => Prop::Const(false),
                Prop::Const(true) => b.assign(atom, value),
                l => match b.assign(atom, value) {
                    Prop::Const(false) => Prop::Const(false),
                    Prop::Const(true) => l,
                    r => Prop::And(Box::new(l), Box::new(r)),
                },
            },
        }
    }

    /// Validity by case splitting on atoms.
    fn valid(&self) -> bool {
        match self.first_atom() {
            None => matches!(self.assign(usize::MAX, false), Prop::Const(true)),
            Some(a) => self.assign(a, true).valid() && self.assign(a, false).valid(),
        }
    }
}

fn skeleton<'f>(f: &'f Formula, atoms: &mut HashMap<&'f Formula, usize>) -> Prop {
    match f {
        Formula::True => Prop::Const(true),
        Formula::Not(a) => Prop::Not(Box::new(skeleton(a, atoms))),
        Formula::And(a, b) => Prop::And(Box::new(skeleton(a, atoms)), Box::new(skeleton(b, atoms))),
        other => {
            let n = atoms.len();
            Prop::Atom(*atoms.entry(other).or_insert(n))
        }
    }
}

/// Propositional validity with every non-propositional subformula opaque.
/// `None` when there are too many atoms to enumerate.
pub fn is_tautology(f: &Formula) -> Option<bool> {
    let mut atoms = HashMap::new();
    let p = skeleton(f, &mut atoms);
    if atoms.len() > MAX_ATOMS {
        return None;
    }
    Some(p.valid())
}

fn check_line(p: &Proof, k: usize, logic: Logic) -> Result<(), String> {
    let line = &p.lines[k];
    let f = &line.formula;
    check_logic(f, logic).map_err(|e| e.to_string())?;
    check_positivity(f).map_err(|e| e.to_string())?;
    if let Some(x) = free_fixvars(f).into_iter().next() {
        return Err(format!("free fixpoint variable `{x}`"));
    }
    let premise = |i: usize| -> Result<&Formula, String> {
        if i >= k {
            Err(format!("forward reference to line {}", i.saturating_add(1)))
        } else {
            Ok(&p.lines[i].formula)
        }
    };
    match &line.just {
        Justification::Hypothesis => match &p.hypothesis {
            Some(h) if h == f => Ok(()),
            Some(_) => Err("line differs from the hypothesis".into()),
            None => Err("proof has no hypothesis".into()),
        },
        Justification::Taut => match is_tautology(f) {
            Some(true) => Ok(()),
            Some(false) => Err("not a propositional tautology".into()),
            None => Err("too many atoms for the tautology check".into()),
        },
        Justification::EqAxiom => {
            if check_eq_axiom(f) {
                Ok(())
            } else {
                Err("not an equality axiom".into())
            }
        }
        Justification::Axiom { name, bindings } => match admits(name, logic) {
            None => Err(format!("unknown axiom schema `{name}`")),
            Some(false) => Err(format!("axiom `{name}` is not part of the {logic} calculus")),
            Some(true) => check_axiom_with(name, f, bindings, logic).map_err(|e| e.to_string())?,
        },
        Justification::Mp(i, j) => {
            let a = premise(*i)?;
            let imp = premise(*j)?;
            match imp.as_implies() {
                Some((ante, cons)) if ante == a && cons == f => Ok(()),
                Some((ante, _)) if ante != a => Err(format!(
                    "line {} is not the antecedent of line {}",
                    i + 1,
                    j + 1
                )),
                Some(_) => Err(format!("conclusion does not match line {}", j + 1)),
                None => Err(format!("line {} is not an implication", j + 1)),
            }
        }
        Justification::Mon(i) => {
            let prem = premise(*i)?;
            let Some((phi, psi)) = prem.as_implies() else {
                return Err(format!("line {} is not an implication", i + 1));
            };
            let Some((Formula::Dia(g, _), Formula::Dia(_, _))) = f.as_implies() else {
                return Err("monotonicity conclusion must relate two diamonds".into());
            };
            if !g.is_atomic() {
                return Err("monotonicity applies to atomic games only".into());
            }
            if *f == implies(dia((**g).clone(), phi.clone()), dia((**g).clone(), psi.clone())) {
                Ok(())
            } else {
                Err(format!("does not follow from line {} by monotonicity", i + 1))
            }
        }
        Justification::DiaInd(i) => {
            if logic != Logic::Gl {
                return Err("diamond induction belongs to the game logic calculus".into());
            }
            let prem = premise(*i)?;
            let Some((Formula::Dia(g, phi), psi)) = f.as_implies() else {
                return Err("induction conclusion must be ⟨α*⟩φ → ψ".into());
            };
            let Game::Star(a) = g.as_ref() else {
                return Err("induction conclusion must be ⟨α*⟩φ → ψ".into());
            };
            let expected = implies(or(phi.as_ref().clone(), dia((**a).clone(), psi.clone())), psi.clone());
            if *prem == expected {
                Ok(())
            } else {
                Err(format!("line {} is not the induction premise", i + 1))
            }
        }
        Justification::MuInd(i) => {
            if logic != Logic::Mu {
                return Err("fixpoint induction belongs to the fixpoint calculus".into());
            }
            let prem = premise(*i)?;
            let Some((Formula::Mu(x, phi), psi)) = f.as_implies() else {
                return Err("induction conclusion must be μX.φ → ψ".into());
            };
            let expected = implies(substitute_fixvar(phi, x, psi), psi.clone());
            if *prem == expected {
                Ok(())
            } else {
                Err(format!("line {} is not the induction premise", i + 1))
            }
        }
    }
}

/// Checks every line in order and, when the proof names a goal, that the
/// last line is that goal.
pub fn check_proof(p: &Proof, logic: Logic) -> Verdict {
    if let Some(h) = &p.hypothesis {
        if let Err(e) = check_logic(h, logic) {
            return Verdict::Rejected {
                line: 0,
                reason: format!("hypothesis: {e}"),
            };
        }
    }
    if p.lines.is_empty() {
        return Verdict::Rejected {
            line: 0,
            reason: "empty proof".into(),
        };
    }
    for k in 0..p.lines.len() {
        if let Err(reason) = check_line(p, k, logic) {
            return Verdict::Rejected { line: k, reason };
        }
    }
    if let Some(g) = &p.goal {
        if p.conclusion() != Some(g) {
            return Verdict::Rejected {
                line: p.lines.len() - 1,
                reason: "last line is not the goal".into(),
            };
        }
    }
    Verdict::Accepted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::Line;

    fn gl(s: &str) -> Formula {
        parse_formula_infer(s, Logic::Gl).unwrap().0
    }

    #[test]
    fn tautologies() {
        assert_eq!(is_tautology(&gl("R(x) | !R(x)")), Some(true));
        assert_eq!(is_tautology(&gl("<a(x:)> R(x) -> <a(x:)> R(x)")), Some(true));
        assert_eq!(is_tautology(&gl("<a(x:)> R(x) -> R(x)")), Some(false));
        assert_eq!(is_tautology(&gl("true")), Some(true));
    }

    #[test]
    fn forward_reference_is_rejected() {
        let p = Proof {
            lines: vec![
                Line {
                    formula: gl("R(x)"),
                    just: Justification::Mp(1, 1),
                },
                Line {
                    formula: gl("R(x) -> R(x)"),
                    just: Justification::Taut,
                },
            ],
            ..Proof::default()
        };
        assert!(matches!(
            check_proof(&p, Logic::Gl),
            Verdict::Rejected { line: 0, ref reason } if reason.contains("forward")
        ));
    }

    #[test]
    fn monotonicity_is_atomic_only() {
        let mk = |g: &str| Proof {
            hypothesis: Some(gl("R(x) -> Q(x)")),
            goal: None,
            lines: vec![
                Line {
                    formula: gl("R(x) -> Q(x)"),
                    just: Justification::Hypothesis,
                },
                Line {
                    formula: gl(&format!("<{g}> R(x) -> <{g}> Q(x)")),
                    just: Justification::Mon(0),
                },
            ],
        };
        assert!(check_proof(&mk("a(x:)"), Logic::Gl).is_accepted());
        assert!(!check_proof(&mk("a(x:)*"), Logic::Gl).is_accepted());
    }

    #[test]
    fn fixpoint_induction() {
        let lm = |s: &str| parse_formula_infer(s, Logic::Mu).unwrap().0;
        let psi = lm("R(x) | !R(x)");
        let body = lm("R(x) | <x := *> X");
        let prem = implies(substitute_fixvar(&body, "X", &psi), psi.clone());
        let p = Proof {
            hypothesis: None,
            goal: None,
            lines: vec![
                Line {
                    formula: implies(lm("R(x)"), lm("<x := *> R(x)")),
                    just: Justification::axiom("exists"),
                },
                Line {
                    formula: prem.clone(),
                    just: Justification::Taut,
                },
                Line {
                    formula: implies(mu("X", body.clone()), psi.clone()),
                    just: Justification::MuInd(1),
                },
            ],
        };
        assert_eq!(check_proof(&p, Logic::Mu), Verdict::Accepted);
        assert!(!check_proof(&p, Logic::Gl).is_accepted());
    }

    #[test]
    fn json_round_trip() {
        let p = crate::proof::gexists_proof("x", &gl("R(x)"), &gl("Q(y)")).unwrap();
        let text = p.to_jsonl();
        let back = Proof::from_jsonl(&text, Logic::Gl).unwrap();
        assert_eq!(back, p);
        assert!(check_proof(&back, Logic::Gl).is_accepted());
    }
}
