//! Proof construction: derived rules, the ∃ rule and the deduction
//! transformation.

use super::axioms::*;
use super::{Justification, Line, Proof, ProofError};
use crate::syntax::*;

/// Derived schemas that `derive_schema` can expand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schema {
    /// `(ψ ∧ ⟨α⟩φ) → ⟨α⟩(ψ ∧ φ)` for `FV(ψ) ∩ BV(α) = ∅`.
    Cplus,
    /// From `ρ → (φ → ψ)` infer `ρ → (⟨α⟩φ → ⟨α⟩ψ)`.
    Mc,
    /// From `ρ → ((φ ∨ ⟨α⟩ψ) → ψ)` infer `ρ → (⟨α*⟩φ → ψ)`.
    Ic,
}

impl std::str::FromStr for Schema {
    type Err = ProofError;

    fn from_str(s: &str) -> Result<Schema, ProofError> {
        match s.to_ascii_lowercase().as_str() {
            "cplus" | "c+" => Ok(Schema::Cplus),
            "mc" => Ok(Schema::Mc),
            "ic" => Ok(Schema::Ic),
            _ => Err(ProofError::UnknownSchema(s.to_string())),
        }
    }
}

fn premise_parts(f: &Formula) -> (Formula, Formula) {
    let (a, b) = f.as_implies().expect("premise is an implication");
    (a.clone(), b.clone())
}

/// Appends lines; every helper returns the index of the line it proves.
#[derive(Default)]
pub struct Builder {
    pub lines: Vec<Line>,
}

impl Builder {
    pub fn formula(&self, i: usize) -> &Formula {
        &self.lines[i].formula
    }

    pub fn push(&mut self, formula: Formula, just: Justification) -> usize {
        self.lines.push(Line { formula, just });
        self.lines.len() - 1
    }

    pub fn axiom(&mut self, name: &str, formula: Formula) -> usize {
        self.push(formula, Justification::axiom(name))
    }

    pub fn mp(&mut self, i: usize, j: usize) -> usize {
        let (_, b) = premise_parts(self.formula(j));
        self.push(b, Justification::Mp(i, j))
    }

    /// `goal` from the premises by one tautology and a chain of modus ponens.
    pub fn prop(&mut self, premises: &[usize], goal: Formula) -> usize {
        let taut = premises
            .iter()
            .rev()
            .fold(goal, |acc, &p| implies(self.formula(p).clone(), acc));
        let mut cur = self.push(taut, Justification::Taut);
        for &p in premises {
            cur = self.mp(p, cur);
        }
        cur
    }

    /// From a line `A → B`, a proof of `⟨α⟩A → ⟨α⟩B` for any game.
    pub fn mon(&mut self, a: &Game, premise: usize) -> usize {
        let (pa, pb) = premise_parts(self.formula(premise));
        let goal = implies(dia(a.clone(), pa.clone()), dia(a.clone(), pb.clone()));
        match a {
            Game::Atomic { .. } => self.push(goal, Justification::Mon(premise)),
            Game::Test(chi) => {
                let t1 = self.axiom("test", ax_test(chi, &pa));
                let t2 = self.axiom("test", ax_test(chi, &pb));
                self.prop(&[premise, t1, t2], goal)
            }
            Game::Choice(x, y) => {
                let m1 = self.mon(x, premise);
                let m2 = self.mon(y, premise);
                let c1 = self.axiom("choice", ax_choice(x, y, &pa));
                let c2 = self.axiom("choice", ax_choice(x, y, &pb));
                self.prop(&[m1, m2, c1, c2], goal)
            }
            Game::Seq(x, y) => {
                let inner = self.mon(y, premise);
                let outer = self.mon(x, inner);
                let c1 = self.axiom("composition", ax_composition(x, y, &pa));
                let c2 = self.axiom("composition", ax_composition(x, y, &pb));
                self.prop(&[outer, c1, c2], goal)
            }
            Game::Star(x) => {
                let l = self.axiom("loop", ax_loop(x, &pb));
                let sb = dia(a.clone(), pb.clone());
                let step = self.prop(
                    &[premise, l],
                    implies(or(pa.clone(), dia((**x).clone(), sb.clone())), sb),
                );
                self.push(goal, Justification::DiaInd(step))
            }
            Game::Dual(x) => {
                let contra = self.prop(&[premise], implies(not(pb.clone()), not(pa.clone())));
                let m = self.mon(x, contra);
                let d1 = self.axiom("dual", ax_dual(x, &pa));
                let d2 = self.axiom("dual", ax_dual(x, &pb));
                self.prop(&[m, d1, d2], goal)
            }
        }
    }

    /// `(ψ ∧ ⟨α⟩φ) → ⟨α⟩(ψ ∧ φ)` by induction on `α`.
    pub fn cplus(&mut self, a: &Game, psi: &Formula, phi: &Formula) -> usize {
        let goal = implies(
            and(psi.clone(), dia(a.clone(), phi.clone())),
            dia(a.clone(), and(psi.clone(), phi.clone())),
        );
        let pf = and(psi.clone(), phi.clone());
        match a {
            Game::Atomic { .. } => self.axiom("C", ax_c(a, psi, phi)),
            Game::Test(chi) => {
                let t1 = self.axiom("test", ax_test(chi, phi));
                let t2 = self.axiom("test", ax_test(chi, &pf));
                self.prop(&[t1, t2], goal)
            }
            Game::Choice(x, y) => {
                let c1 = self.cplus(x, psi, phi);
                let c2 = self.cplus(y, psi, phi);
                let a1 = self.axiom("choice", ax_choice(x, y, phi));
                let a2 = self.axiom("choice", ax_choice(x, y, &pf));
                self.prop(&[c1, c2, a1, a2], goal)
            }
            Game::Seq(x, y) => {
                let yphi = dia((**y).clone(), phi.clone());
                let c1 = self.cplus(x, psi, &yphi);
                let c2 = self.cplus(y, psi, phi);
                let m = self.mon(x, c2);
                let a1 = self.axiom("composition", ax_composition(x, y, phi));
                let a2 = self.axiom("composition", ax_composition(x, y, &pf));
                self.prop(&[c1, m, a1, a2], goal)
            }
            Game::Star(x) => {
                let t = dia(a.clone(), pf.clone());
                let q = or(not(psi.clone()), t.clone());
                let l = self.axiom("loop", ax_loop(x, &pf));
                let c = self.cplus(x, psi, &q);
                let inner = self.prop(&[], implies(and(psi.clone(), q.clone()), t.clone()));
                let m = self.mon(x, inner);
                let step = self.prop(
                    &[l, c, m],
                    implies(or(phi.clone(), dia((**x).clone(), q.clone())), q.clone()),
                );
                let ind = self.push(implies(dia(a.clone(), phi.clone()), q), Justification::DiaInd(step));
                self.prop(&[ind], goal)
            }
            Game::Dual(x) => {
                let npf = not(pf.clone());
                let c = self.cplus(x, psi, &npf);
                let weak = self.prop(&[], implies(and(psi.clone(), npf.clone()), not(phi.clone())));
                let m = self.mon(x, weak);
                let d1 = self.axiom("dual", ax_dual(x, phi));
                let d2 = self.axiom("dual", ax_dual(x, &pf));
                self.prop(&[c, m, d1, d2], goal)
            }
        }
    }

    /// From line `ρ → (φ → ψ)`, `ρ → (⟨α⟩φ → ⟨α⟩ψ)`.
    pub fn mc(&mut self, a: &Game, rho: &Formula, premise: usize) -> usize {
        let (_, inner) = premise_parts(self.formula(premise));
        let (phi, psi) = premise_parts(&inner);
        let goal = implies(
            rho.clone(),
            implies(dia(a.clone(), phi.clone()), dia(a.clone(), psi.clone())),
        );
        let l1 = self.prop(&[premise], implies(and(rho.clone(), phi.clone()), psi.clone()));
        let l2 = self.mon(a, l1);
        let l3 = self.cplus(a, rho, &phi);
        self.prop(&[l2, l3], goal)
    }

    /// From line `ρ → ((φ ∨ ⟨α⟩ψ) → ψ)`, `ρ → (⟨α*⟩φ → ψ)`.
    pub fn ic(&mut self, a: &Game, rho: &Formula, premise: usize) -> usize {
        let (_, inner) = premise_parts(self.formula(premise));
        let (lhs, psi) = premise_parts(&inner);
        let (phi, _) = lhs.as_or().expect("induction premise is a disjunction");
        let phi = phi.clone();
        let goal = implies(rho.clone(), implies(dia(star(a.clone()), phi.clone()), psi.clone()));

        // (ρ ∧ ⟨α*⟩φ) → ⟨(?ρ;α)*⟩(ρ ∧ φ)
        let beta = seq(test(rho.clone()), a.clone());
        let rp = and(rho.clone(), phi.clone());
        let t = dia(star(beta.clone()), rp.clone());
        let q = or(not(rho.clone()), t.clone());
        let l = self.axiom("loop", ax_loop(&beta, &rp));
        let c1 = self.axiom("composition", ax_composition(&test(rho.clone()), a, &t));
        let c2 = self.axiom("test", ax_test(rho, &dia(a.clone(), t.clone())));
        let cp = self.cplus(a, rho, &q);
        let weak = self.prop(&[], implies(and(rho.clone(), q.clone()), t.clone()));
        let m = self.mon(a, weak);
        let step = self.prop(
            &[l, c1, c2, cp, m],
            implies(or(phi.clone(), dia(a.clone(), q.clone())), q.clone()),
        );
        let ind = self.push(
            implies(dia(star(a.clone()), phi.clone()), q),
            Justification::DiaInd(step),
        );
        let aux = self.prop(
            &[ind],
            implies(and(rho.clone(), dia(star(a.clone()), phi.clone())), t.clone()),
        );

        // ⟨(?ρ;α)*⟩(ρ ∧ φ) → ψ
        let d1 = self.axiom("composition", ax_composition(&test(rho.clone()), a, &psi));
        let d2 = self.axiom("test", ax_test(rho, &dia(a.clone(), psi.clone())));
        let step2 = self.prop(
            &[premise, d1, d2],
            implies(or(rp.clone(), dia(beta.clone(), psi.clone())), psi.clone()),
        );
        let ind2 = self.push(implies(t, psi.clone()), Justification::DiaInd(step2));
        self.prop(&[aux, ind2], goal)
    }

    pub fn finish(self, hypothesis: Option<Formula>) -> Proof {
        let goal = self.lines.last().map(|l| l.formula.clone());
        Proof {
            hypothesis,
            goal,
            lines: self.lines,
        }
        .prune()
    }
}

fn side_condition(what: &Formula, a: &Game, role: &str) -> Result<(), ProofError> {
    if let Some(x) = free_fixvars(what).into_iter().next() {
        return Err(ProofError::SideCondition(format!("{role} has free fixpoint variable `{x}`")));
    }
    let clash: Vec<String> = free_ind_vars(what)
        .intersection(&bound_vars(a))
        .cloned()
        .collect();
    if clash.is_empty() {
        Ok(())
    } else {
        Err(ProofError::SideCondition(format!(
            "{role} `{what}` shares {clash:?} with the variables bound by `{a}`"
        )))
    }
}

fn check_gl(fs: &[&Formula], a: &Game) -> Result<(), ProofError> {
    for f in fs {
        check_logic(f, Logic::Gl)?;
    }
    check_logic(&dia(a.clone(), tt()), Logic::Gl)?;
    Ok(())
}

/// Expands a derived schema into a proof in the game logic calculus. For
/// `Cplus`, `ρ` is unused; `Mc` and `Ic` produce proofs from their premise as
/// hypothesis.
pub fn derive_schema(
    schema: Schema,
    a: &Game,
    phi: &Formula,
    psi: &Formula,
    rho: &Formula,
) -> Result<Proof, ProofError> {
    let mut b = Builder::default();
    match schema {
        Schema::Cplus => {
            check_gl(&[phi, psi], a)?;
            side_condition(psi, a, "context formula")?;
            b.cplus(a, psi, phi);
            Ok(b.finish(None))
        }
        Schema::Mc => {
            check_gl(&[phi, psi, rho], a)?;
            side_condition(rho, a, "context formula")?;
            let h = implies(rho.clone(), implies(phi.clone(), psi.clone()));
            let p = b.push(h.clone(), Justification::Hypothesis);
            b.mc(a, rho, p);
            Ok(b.finish(Some(h)))
        }
        Schema::Ic => {
            check_gl(&[phi, psi, rho], a)?;
            side_condition(rho, a, "context formula")?;
            let h = implies(
                rho.clone(),
                implies(or(phi.clone(), dia(a.clone(), psi.clone())), psi.clone()),
            );
            let p = b.push(h.clone(), Justification::Hypothesis);
            b.ic(a, rho, p);
            Ok(b.finish(Some(h)))
        }
    }
}

/// The ∃ rule: a proof of `∃x ψ → φ` from hypothesis `ψ → φ` when `x` is not
/// free in `φ`. Uses C, M and `∃x false → false`.
pub fn gexists_proof(x: &str, psi: &Formula, phi: &Formula) -> Result<Proof, ProofError> {
    let q = quant(x);
    side_condition(phi, &q, "conclusion")?;
    let mut b = Builder::default();
    let h = implies(psi.clone(), phi.clone());
    let hyp = b.push(h.clone(), Justification::Hypothesis);
    let np = and(not(phi.clone()), psi.clone());
    let absurd = b.prop(&[hyp], implies(np.clone(), ff()));
    let m = b.mon(&q, absurd);
    let c = b.axiom("C", ax_c(&q, &not(phi.clone()), psi));
    let ne = b.axiom("nonempty", ax_nonempty(x));
    b.prop(&[c, m, ne], implies(dia(q, psi.clone()), phi.clone()));
    Ok(b.finish(Some(h)))
}

/// Turns a proof of `ψ` from hypothesis `ρ` into a hypothesis-free proof of
/// `ρ → ψ`. Requires `FV(ρ) ∩ BV(χ) = ∅` for every line `χ`.
pub fn deduction_transform(p: &Proof) -> Result<Proof, ProofError> {
    let Some(rho) = &p.hypothesis else {
        return Err(ProofError::Unsupported("proof has no hypothesis".into()));
    };
    check_logic(rho, Logic::Gl)?;
    let fv = free_vars(rho);
    for (k, l) in p.lines.iter().enumerate() {
        check_logic(&l.formula, Logic::Gl)?;
        let clash: Vec<String> = bound_vars_formula(&l.formula).intersection(&fv).cloned().collect();
        if !clash.is_empty() {
            return Err(ProofError::SideCondition(format!(
                "line {} binds {clash:?}, free in the hypothesis",
                k + 1
            )));
        }
        for q in l.just.premises() {
            if q >= k {
                return Err(ProofError::Unsupported(format!("line {} has a forward reference", k + 1)));
            }
        }
    }
    let Some(last) = p.lines.last() else {
        return Err(ProofError::Unsupported("empty proof".into()));
    };
    let mut b = Builder::default();
    // proves[k] is the line proving ρ → χₖ.
    let mut proves: Vec<usize> = Vec::with_capacity(p.lines.len());
    for l in &p.lines {
        let chi = &l.formula;
        let target = implies(rho.clone(), chi.clone());
        let out = match &l.just {
            Justification::Hypothesis => b.push(target, Justification::Taut),
            Justification::Taut | Justification::EqAxiom | Justification::Axiom { .. } => {
                let ax = b.push(chi.clone(), l.just.clone());
                b.prop(&[ax], target)
            }
            Justification::Mp(i, j) => b.prop(&[proves[*i], proves[*j]], target),
            Justification::Mon(i) => {
                let Some((Formula::Dia(g, _), _)) = chi.as_implies() else {
                    return Err(ProofError::Unsupported("malformed monotonicity line".into()));
                };
                b.mc(g, rho, proves[*i])
            }
            Justification::DiaInd(i) => {
                let Some((Formula::Dia(g, _), _)) = chi.as_implies() else {
                    return Err(ProofError::Unsupported("malformed induction line".into()));
                };
                let Game::Star(a) = g.as_ref() else {
                    return Err(ProofError::Unsupported("malformed induction line".into()));
                };
                b.ic(a, rho, proves[*i])
            }
            Justification::MuInd(_) => {
                return Err(ProofError::Unsupported(
                    "the deduction transformation covers the game logic calculus only".into(),
                ))
            }
        };
        proves.push(out);
    }
    let goal = implies(rho.clone(), last.formula.clone());
    if b.formula(*proves.last().expect("non-empty")) != &goal {
        return Err(ProofError::Unsupported("internal: conclusion mismatch".into()));
    }
    let mut out = Proof {
        hypothesis: None,
        goal: Some(goal),
        lines: b.lines,
    };
    // Ensure the conclusion is the last line before pruning.
    let last_idx = *proves.last().expect("non-empty");
    out.lines.truncate(last_idx + 1);
    Ok(out.prune())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::{check_proof, mutations, Verdict};

    fn gl(s: &str) -> Formula {
        parse_formula_infer(s, Logic::Gl).unwrap().0
    }

    fn game(s: &str) -> Game {
        match gl(&format!("<{s}> true")) {
            Formula::Dia(g, _) => *g,
            _ => unreachable!(),
        }
    }

    fn accepted(p: &Proof) {
        assert_eq!(check_proof(p, Logic::Gl), Verdict::Accepted, "{p}");
        for (m, q) in mutations(p) {
            assert!(!check_proof(&q, Logic::Gl).is_accepted(), "mutation {m:?} accepted:\n{q}");
        }
    }

    #[test]
    fn exists_rule() {
        let p = gexists_proof("x", &gl("R(x)"), &gl("Q(y)")).unwrap();
        accepted(&p);
        assert_eq!(p.conclusion().unwrap(), &gl("<x := *> R(x) -> Q(y)"));
        assert!(gexists_proof("x", &gl("R(x)"), &gl("Q(x)")).is_err());
    }

    #[test]
    fn exists_rule_with_broken_side_condition_is_rejected() {
        let mut p = gexists_proof("x", &gl("R(x)"), &gl("Q(y)")).unwrap();
        let k = p
            .lines
            .iter()
            .position(|l| matches!(&l.just, Justification::Axiom { name, .. } if name == "C"))
            .unwrap();
        p.lines[k].formula = ax_c(&quant("x"), &gl("!Q(x)"), &gl("R(x)"));
        assert!(matches!(check_proof(&p, Logic::Gl), Verdict::Rejected { line, .. } if line == k));
    }

    #[test]
    fn cplus_every_game_shape() {
        for g in [
            "a(x:y) ++ b(z:)",
            "a(x:y)*",
            "a(x:y) ; ?R(x) ; b(z:)",
            "(a(x:y) ++ b(z:)^d)*",
            "(a(x:y)*)^d",
        ] {
            let p = derive_schema(Schema::Cplus, &game(g), &gl("R(x)"), &gl("R(w)"), &tt()).unwrap();
            accepted(&p);
        }
        assert!(derive_schema(Schema::Cplus, &game("a(x:y)*"), &gl("R(x)"), &gl("R(x)"), &tt()).is_err());
    }

    #[test]
    fn mc_and_ic() {
        let g = game("a(x:y) ; b(z:)");
        let p = derive_schema(Schema::Mc, &g, &gl("R(x)"), &gl("Q(x)"), &gl("P(w)")).unwrap();
        accepted(&p);
        let p = derive_schema(Schema::Ic, &g, &gl("R(x)"), &gl("Q(x)"), &gl("P(w)")).unwrap();
        accepted(&p);
        assert!(derive_schema(Schema::Mc, &g, &gl("R(x)"), &gl("Q(x)"), &gl("P(z)")).is_err());
    }

    #[test]
    fn deduction_of_hypothesis_alone() {
        let rho = gl("R(x)");
        let p = Proof {
            hypothesis: Some(rho.clone()),
            goal: None,
            lines: vec![Line {
                formula: rho.clone(),
                just: Justification::Hypothesis,
            }],
        };
        let d = deduction_transform(&p).unwrap();
        accepted(&d);
        assert_eq!(d.conclusion().unwrap(), &implies(rho.clone(), rho));
    }

    #[test]
    fn deduction_expands_monotonicity() {
        let rho = gl("P(w)");
        let mut b = Builder::default();
        let h = b.push(rho.clone(), Justification::Hypothesis);
        let imp = b.prop(&[h], implies(gl("R(x)"), and(rho.clone(), gl("R(x)"))));
        b.push(
            implies(dia(game("a(x:y)"), gl("R(x)")), dia(game("a(x:y)"), and(rho.clone(), gl("R(x)")))),
            Justification::Mon(imp),
        );
        let p = b.finish(Some(rho.clone()));
        accepted(&p);
        let d = deduction_transform(&p).unwrap();
        accepted(&d);
        assert!(d.lines.iter().any(|l| matches!(&l.just, Justification::Axiom { name, .. } if name == "C")));

        let clash = gl("P(x)");
        let mut p2 = p.clone();
        p2.hypothesis = Some(clash.clone());
        p2.lines[0].formula = clash;
        assert!(matches!(deduction_transform(&p2), Err(ProofError::SideCondition(_))));
    }
}
