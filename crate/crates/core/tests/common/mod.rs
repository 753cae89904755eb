//! Reference evaluator for tests: plain sets of assignment vectors and
//! straight Kleene iteration, sharing no code with the library evaluator.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use gamemu::semantics::{StateSet, Structure};
use gamemu::syntax::{Formula, Game, Term, ASSIGN, QUANT};

pub type State = Vec<usize>;
pub type Set = BTreeSet<State>;

pub struct Oracle<'a> {
    pub st: &'a Structure,
    pub vars: Vec<String>,
}

fn index(tuple: &[usize], n: usize) -> usize {
    let mut idx = 0;
    for &u in tuple {
        idx = idx * n + u;
    }
    idx
}

fn unindex(mut idx: usize, n: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    out
}

impl<'a> Oracle<'a> {
    pub fn new(st: &'a Structure, vars: &[String]) -> Self {
        Oracle {
            st,
            vars: vars.to_vec(),
        }
    }

    pub fn states(&self) -> Vec<State> {
        let n = self.st.domain;
        let k = self.vars.len();
        (0..n.pow(k as u32)).map(|i| unindex(i, n, k)).collect()
    }

    pub fn all(&self) -> Set {
        self.states().into_iter().collect()
    }

    fn pos(&self, v: &str) -> usize {
        self.vars
            .iter()
            .position(|w| w == v)
            .unwrap_or_else(|| panic!("variable {v} outside {:?}", self.vars))
    }

    pub fn term(&self, w: &State, t: &Term) -> usize {
        match t {
            Term::Var(v) => w[self.pos(v)],
            Term::App(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.term(w, a)).collect();
                self.st.functions[f].values[index(&vals, self.st.domain)]
            }
        }
    }

    fn set_vars(&self, w: &State, xs: &[String], vals: &[usize]) -> State {
        let mut out = w.clone();
        for (x, v) in xs.iter().zip(vals) {
            out[self.pos(x)] = *v;
        }
        out
    }

    pub fn formula(&self, f: &Formula, env: &HashMap<String, Set>) -> Set {
        match f {
            Formula::True => self.all(),
            Formula::Eq(a, b) => self
                .states()
                .into_iter()
                .filter(|w| self.term(w, a) == self.term(w, b))
                .collect(),
            Formula::Rel(r, args) => self
                .states()
                .into_iter()
                .filter(|w| {
                    let vals: Vec<usize> = args.iter().map(|a| self.term(w, a)).collect();
                    self.st.relations[r].members[index(&vals, self.st.domain)]
                })
                .collect(),
            Formula::Not(a) => {
                let inner = self.formula(a, env);
                self.all().difference(&inner).cloned().collect()
            }
            Formula::And(a, b) => {
                let l = self.formula(a, env);
                let r = self.formula(b, env);
                l.intersection(&r).cloned().collect()
            }
            Formula::Dia(g, a) => {
                let goal = self.formula(a, env);
                self.game(g, &goal, env)
            }
            Formula::FixVar(x) => env.get(x).cloned().unwrap_or_else(|| panic!("unbound {x}")),
            Formula::Mu(x, body) => {
                let mut z = Set::new();
                loop {
                    let mut env2 = env.clone();
                    env2.insert(x.clone(), z.clone());
                    let next = self.formula(body, &env2);
                    if next == z {
                        return z;
                    }
                    z = next;
                }
            }
        }
    }

    pub fn game(&self, g: &Game, goal: &Set, env: &HashMap<String, Set>) -> Set {
        let n = self.st.domain;
        match g {
            Game::Atomic { action, bound, params } if action == QUANT => self
                .states()
                .into_iter()
                .filter(|w| (0..n).any(|d| goal.contains(&self.set_vars(w, bound, &[d]))))
                .collect(),
            Game::Atomic { action, bound, params } if action == ASSIGN => self
                .states()
                .into_iter()
                .filter(|w| {
                    let vals: Vec<usize> = params.iter().map(|t| self.term(w, t)).collect();
                    goal.contains(&self.set_vars(w, bound, &vals))
                })
                .collect(),
            Game::Atomic { action, bound, params } => {
                let table = &self.st.actions[action];
                self.states()
                    .into_iter()
                    .filter(|w| {
                        let vals: Vec<usize> = params.iter().map(|t| self.term(w, t)).collect();
                        table.map[index(&vals, n)].iter().any(|gen| {
                            gen.iter().all(|&d| {
                                let tuple = unindex(d, n, bound.len());
                                goal.contains(&self.set_vars(w, bound, &tuple))
                            })
                        })
                    })
                    .collect()
            }
            Game::Test(q) => {
                let qs = self.formula(q, env);
                qs.intersection(goal).cloned().collect()
            }
            Game::Choice(a, b) => {
                let l = self.game(a, goal, env);
                let r = self.game(b, goal, env);
                l.union(&r).cloned().collect()
            }
            Game::Seq(a, b) => {
                let mid = self.game(b, goal, env);
                self.game(a, &mid, env)
            }
            Game::Star(a) => {
                let mut z = Set::new();
                loop {
                    let step = self.game(a, &z, env);
                    let next: Set = goal.union(&step).cloned().collect();
                    if next == z {
                        return z;
                    }
                    z = next;
                }
            }
            Game::Dual(a) => {
                let co: Set = self.all().difference(goal).cloned().collect();
                let inner = self.game(a, &co, env);
                self.all().difference(&inner).cloned().collect()
            }
        }
    }

    pub fn eval(&self, f: &Formula) -> Set {
        self.formula(f, &HashMap::new())
    }
}

/// A library state set as plain assignment vectors.
pub fn to_set(s: &StateSet) -> Set {
    s.assignments().into_iter().collect()
}
