//! Seeded random formulas, games, structures, axiom instances and proofs for
//! property tests and the self test.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::proof::axioms::*;
use crate::proof::derive::Builder;
use crate::proof::{Justification, Proof};
use crate::semantics::structure::tuple_count;
use crate::semantics::{ActionTable, FunctionTable, RelationTable, Structure};
use crate::syntax::*;

pub const SEED_VAR: &str = "GAMEMU_SEED";

/// `GAMEMU_SEED` when set and numeric, else `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

/// The vocabulary random objects are drawn from.
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub vars: Vec<String>,
    pub relations: Vec<(String, usize)>,
    pub functions: Vec<(String, usize)>,
    /// `(name, k, l)`
    pub actions: Vec<(String, usize, usize)>,
    pub quantifier: bool,
    pub assignment: bool,
    /// Allow `*` and `^d` in games.
    pub star: bool,
    pub dual: bool,
}

impl Default for GenConfig {
    /// Variables `x, y`, a unary `R` and a (1,1)-ary `a`.
    fn default() -> Self {
        GenConfig {
            vars: vec!["x".into(), "y".into()],
            relations: vec![("R".into(), 1)],
            functions: vec![],
            actions: vec![("a".into(), 1, 1)],
            quantifier: true,
            assignment: true,
            star: true,
            dual: true,
        }
    }
}

impl GenConfig {
    pub fn signature(&self) -> GameSignature {
        let mut sig = GameSignature::new();
        for (r, n) in &self.relations {
            sig.add_relation(r, *n).expect("distinct relation names");
        }
        for (f, n) in &self.functions {
            sig.add_function(f, *n).expect("distinct function names");
        }
        for (a, k, l) in &self.actions {
            sig.add_action(a, *k, *l).expect("distinct action names");
        }
        sig
    }
}

pub struct Gen {
    pub rng: ChaCha8Rng,
    pub cfg: GenConfig,
}

const FIX_NAMES: [&str; 3] = ["X", "Y", "Z"];

impl Gen {
    pub fn new(seed: u64, cfg: GenConfig) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cfg,
        }
    }

    pub fn var(&mut self) -> String {
        self.cfg.vars.choose(&mut self.rng).expect("at least one variable").clone()
    }

    pub fn term(&mut self) -> Term {
        self.term_at(1)
    }

    fn term_at(&mut self, depth: usize) -> Term {
        if depth > 0 && !self.cfg.functions.is_empty() && self.rng.gen_bool(0.3) {
            let (f, n) = self.cfg.functions.choose(&mut self.rng).expect("non-empty").clone();
            let args = (0..n).map(|_| self.term_at(depth - 1)).collect();
            return Term::App(f, args);
        }
        Term::var(&self.var())
    }

    pub fn atom(&mut self) -> Formula {
        let roll = self.rng.gen_range(0..10);
        if roll == 0 {
            return if self.rng.gen() { tt() } else { ff() };
        }
        if roll < 4 || self.cfg.relations.is_empty() {
            return eq(self.term(), self.term());
        }
        let (r, n) = self.cfg.relations.choose(&mut self.rng).expect("non-empty").clone();
        let args = (0..n).map(|_| self.term()).collect();
        Formula::Rel(r, args)
    }

    /// An atomic game: a declared action, `x := *` or `x := θ`.
    pub fn atomic_game(&mut self) -> Option<Game> {
        let mut options = Vec::new();
        for (i, (_, k, _)) in self.cfg.actions.iter().enumerate() {
            if *k <= self.cfg.vars.len() {
                options.push(Some(i));
            }
        }
        if self.cfg.quantifier {
            options.push(None);
        }
        if self.cfg.assignment {
            options.push(None);
        }
        let pick = *options.choose(&mut self.rng)?;
        Some(match pick {
            Some(i) => {
                let (name, k, l) = self.cfg.actions[i].clone();
                let mut vars = self.cfg.vars.clone();
                vars.shuffle(&mut self.rng);
                vars.truncate(k);
                let params = (0..l).map(|_| self.term()).collect();
                Game::Atomic {
                    action: name,
                    bound: vars,
                    params,
                }
            }
            None => {
                let x = self.var();
                let quantify = self.cfg.quantifier && (!self.cfg.assignment || self.rng.gen());
                if quantify {
                    quant(&x)
                } else {
                    assign(&x, self.term())
                }
            }
        })
    }

    /// A game of nesting depth at most `depth`.
    pub fn game(&mut self, depth: usize) -> Game {
        if depth == 0 {
            return match self.atomic_game() {
                Some(g) => g,
                None => test(self.atom()),
            };
        }
        match self.rng.gen_range(0..8) {
            0 | 1 => self.game(0),
            2 => test(self.gl_formula(depth.min(2) - 1)),
            3 => choice(self.game(depth - 1), self.game(depth - 1)),
            4 => seq(self.game(depth - 1), self.game(depth - 1)),
            5 if self.cfg.star => star(self.game(depth - 1)),
            6 if self.cfg.dual => dual(self.game(depth - 1)),
            _ => self.game(depth - 1),
        }
    }

    /// A game logic formula whose games nest at most `depth` deep.
    pub fn gl_formula(&mut self, depth: usize) -> Formula {
        if depth == 0 {
            return self.atom();
        }
        match self.rng.gen_range(0..9) {
            0 => self.atom(),
            1 => not(self.gl_formula(depth - 1)),
            2 => and(self.gl_formula(depth - 1), self.gl_formula(depth - 1)),
            3 => or(self.gl_formula(depth - 1), self.gl_formula(depth - 1)),
            4 => boxed(self.game(depth - 1), self.gl_formula(depth - 1)),
            _ => dia(self.game(depth - 1), self.gl_formula(depth - 1)),
        }
    }

    /// A closed fixpoint formula in which every fixpoint variable occurs
    /// positively.
    pub fn mu_formula(&mut self, depth: usize) -> Formula {
        self.mu_in(depth, &mut Vec::new())
    }

    /// Like `mu_formula` but `x` may occur free (positively).
    pub fn mu_formula_open(&mut self, depth: usize, x: &str) -> Formula {
        self.mu_in(depth, &mut vec![(x.to_string(), true)])
    }

    /// `scope` holds the bound fixpoint variables with whether an even number
    /// of negations separates them from here.
    fn mu_in(&mut self, depth: usize, scope: &mut Vec<(String, bool)>) -> Formula {
        let usable: Vec<String> = scope.iter().filter(|(_, even)| *even).map(|(x, _)| x.clone()).collect();
        if depth == 0 {
            if !usable.is_empty() && self.rng.gen_bool(0.5) {
                return fixvar(usable.choose(&mut self.rng).expect("non-empty"));
            }
            return self.atom();
        }
        match self.rng.gen_range(0..9) {
            0 => self.mu_in(0, scope),
            1 => {
                flip(scope);
                let a = self.mu_in(depth - 1, scope);
                flip(scope);
                not(a)
            }
            2 => and(self.mu_in(depth - 1, scope), self.mu_in(depth - 1, scope)),
            3 => or(self.mu_in(depth - 1, scope), self.mu_in(depth - 1, scope)),
            4 | 5 => match self.atomic_game() {
                Some(g) => {
                    let a = self.mu_in(depth - 1, scope);
                    if self.rng.gen_bool(0.3) {
                        boxed(g, a)
                    } else {
                        dia(g, a)
                    }
                }
                None => self.mu_in(depth - 1, scope),
            },
            _ => {
                let Some(x) = FIX_NAMES.iter().find(|n| !scope.iter().any(|(y, _)| y == *n)) else {
                    return self.mu_in(depth - 1, scope);
                };
                scope.push((x.to_string(), true));
                let body = self.mu_in(depth - 1, scope);
                scope.pop();
                if self.rng.gen_bool(0.3) {
                    nu(x, body)
                } else {
                    mu(x, body)
                }
            }
        }
    }

    /// A formula of `logic` with nesting depth `depth`.
    pub fn formula(&mut self, logic: Logic, depth: usize) -> Formula {
        match logic {
            Logic::Gl => self.gl_formula(depth),
            Logic::Mu => self.mu_formula(depth),
        }
    }

    /// A random structure over the configured signature. Actions get up to
    /// `max_gen` generators per parameter tuple.
    pub fn structure(&mut self, domain: usize, max_gen: usize) -> Structure {
        let mut st = Structure::new(domain).expect("positive domain");
        for (r, n) in &self.cfg.relations {
            let members = (0..tuple_count(domain, *n)).map(|_| self.rng.gen()).collect();
            st.relations.insert(r.clone(), RelationTable { arity: *n, members });
        }
        for (f, n) in &self.cfg.functions {
            let values = (0..tuple_count(domain, *n)).map(|_| self.rng.gen_range(0..domain)).collect();
            st.functions.insert(f.clone(), FunctionTable { arity: *n, values });
        }
        for (a, k, l) in &self.cfg.actions {
            let tuples = tuple_count(domain, *k);
            let map = (0..tuple_count(domain, *l))
                .map(|_| {
                    let count = self.rng.gen_range(0..=max_gen);
                    let mut gens: Vec<Vec<usize>> = (0..count)
                        .map(|_| (0..tuples).filter(|_| self.rng.gen()).collect())
                        .collect();
                    gens.sort();
                    gens.dedup();
                    gens
                })
                .collect();
            st.actions.insert(a.clone(), ActionTable { k: *k, l: *l, map });
        }
        st
    }

    /// An instance of the named axiom schema in `logic`.
    pub fn axiom_instance(&mut self, name: &str, logic: Logic, depth: usize) -> Formula {
        let atomic = |g: &mut Gen| g.atomic_game().unwrap_or_else(|| quant("x"));
        match name {
            "exists" => {
                let x = self.var();
                let theta = self.term();
                let phi = self.formula(logic, depth);
                ax_exists(&x, &theta, &phi, logic)
            }
            "C" => {
                let a = atomic(self);
                let bound = match &a {
                    Game::Atomic { bound, .. } => bound.clone(),
                    _ => unreachable!(),
                };
                let psi = loop {
                    let psi = self.formula(logic, depth);
                    if c_side_condition(&psi, &bound).is_ok() {
                        break psi;
                    }
                };
                let phi = self.formula(logic, depth);
                ax_c(&a, &psi, &phi)
            }
            "nonempty" => ax_nonempty(&self.var()),
            "dual" => {
                let a = self.game(depth);
                ax_dual(&a, &self.gl_formula(depth))
            }
            "test" => {
                let chi = self.gl_formula(depth);
                ax_test(&chi, &self.gl_formula(depth))
            }
            "composition" => {
                let (a, b) = (self.game(depth), self.game(depth));
                ax_composition(&a, &b, &self.gl_formula(depth))
            }
            "choice" => {
                let (a, b) = (self.game(depth), self.game(depth));
                ax_choice(&a, &b, &self.gl_formula(depth))
            }
            "loop" => {
                let a = self.game(depth);
                ax_loop(&a, &self.gl_formula(depth))
            }
            "mu" => {
                let phi = self.mu_formula_open(depth, "X");
                ax_mu("X", &phi)
            }
            other => panic!("unknown axiom schema `{other}`"),
        }
    }

    /// A game logic proof from a hypothesis over `y` whose other lines bind
    /// only `x`, so that the deduction transformation applies. Every line is
    /// used and the last line is the goal.
    pub fn hypothesis_proof(&mut self, steps: usize) -> Proof {
        let saved = self.cfg.clone();
        self.cfg.vars = vec!["y".into()];
        self.cfg.actions.clear();
        self.cfg.quantifier = false;
        self.cfg.assignment = false;
        let rho = self.gl_formula(1);
        self.cfg = GenConfig {
            vars: vec!["x".into()],
            ..saved.clone()
        };
        let mut b = Builder::default();
        let mut pool = vec![b.push(rho.clone(), Justification::Hypothesis)];
        for _ in 0..steps {
            let pick = *pool.choose(&mut self.rng).expect("non-empty");
            let fp = b.formula(pick).clone();
            let line = match self.rng.gen_range(0..5) {
                0 => {
                    let chi = self.gl_formula(1);
                    b.push(or(chi.clone(), not(chi)), Justification::Taut)
                }
                1 => {
                    let names = ["exists", "C", "nonempty", "dual", "test", "composition", "choice", "loop"];
                    let name = *names.choose(&mut self.rng).expect("non-empty");
                    let f = self.axiom_instance(name, Logic::Gl, 1);
                    b.axiom(name, f)
                }
                2 => {
                    let other = *pool.choose(&mut self.rng).expect("non-empty");
                    let fo = b.formula(other).clone();
                    b.prop(&[pick, other], and(fp, fo))
                }
                3 => {
                    let chi = self.gl_formula(1);
                    let imp = b.prop(&[pick], implies(chi.clone(), fp.clone()));
                    let g = self.atomic_game().unwrap_or_else(|| quant("x"));
                    b.push(implies(dia(g.clone(), chi), dia(g, fp)), Justification::Mon(imp))
                }
                _ => {
                    let phi = self.gl_formula(1);
                    let a = self.game(1);
                    let prem = b.prop(&[pick], implies(or(phi.clone(), dia(a.clone(), fp.clone())), fp.clone()));
                    b.push(implies(dia(star(a), phi), fp), Justification::DiaInd(prem))
                }
            };
            pool.push(line);
        }
        // Chain everything into the last line so no line is unused.
        let mut acc = pool[0];
        for &p in &pool[1..] {
            let fp = b.formula(p).clone();
            acc = b.prop(&[acc, p], fp);
        }
        self.cfg = saved;
        b.finish(Some(rho))
    }
}

fn flip(scope: &mut [(String, bool)]) {
    for (_, even) in scope.iter_mut() {
        *even = !*even;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::{check_proof, Verdict};

    #[test]
    fn generated_objects_are_well_formed() {
        let mut g = Gen::new(7, GenConfig::default());
        let sig = g.cfg.signature();
        for _ in 0..200 {
            let f = g.gl_formula(3);
            validate(&f, Logic::Gl, &sig).unwrap();
            let m = g.mu_formula(4);
            validate(&m, Logic::Mu, &sig).unwrap();
            assert!(free_fixvars(&m).is_empty());
        }
        let st = g.structure(2, 2);
        st.check_signature(&sig).unwrap();
    }

    #[test]
    fn generated_proofs_check() {
        let mut g = Gen::new(11, GenConfig::default());
        for _ in 0..20 {
            let p = g.hypothesis_proof(4);
            assert_eq!(check_proof(&p, Logic::Gl), Verdict::Accepted, "{p}");
        }
    }

    #[test]
    fn axiom_instances_check() {
        let mut g = Gen::new(3, GenConfig::default());
        for (name, logics) in AXIOMS {
            for &logic in *logics {
                for _ in 0..10 {
                    let f = g.axiom_instance(name, logic, 2);
                    assert_eq!(check_axiom_with(name, &f, &Default::default(), logic).unwrap(), Ok(()), "{name}: {f}");
                }
            }
        }
    }
}
