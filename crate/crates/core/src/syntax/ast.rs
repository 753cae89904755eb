use std::fmt;

/// Name of the built-in quantifier action, arity (1, 0).
pub const QUANT: &str = "*";
/// Name of the built-in deterministic assignment action, arity (k, k).
pub const ASSIGN: &str = ":=";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(f.to_string(), args)
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }
}

/// Formulas of both logics. FOGL formulas never contain `FixVar`/`Mu`;
/// FOLμ formulas only put atomic games inside `Dia`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    Eq(Term, Term),
    Rel(String, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Dia(Box<Game>, Box<Formula>),
    FixVar(String),
    Mu(String, Box<Formula>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Game {
    Atomic {
        action: String,
        bound: Vec<String>,
        params: Vec<Term>,
    },
    Test(Box<Formula>),
    Choice(Box<Game>, Box<Game>),
    Seq(Box<Game>, Box<Game>),
    Star(Box<Game>),
    Dual(Box<Game>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Logic {
    Gl,
    Mu,
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Logic::Gl => write!(f, "gl"),
            Logic::Mu => write!(f, "mu"),
        }
    }
}

// Constructors. The derived connectives are the fixed encodings used by the
// parser, so anything built here prints and re-parses to the same tree.

pub fn tt() -> Formula {
    Formula::True
}

pub fn ff() -> Formula {
    not(Formula::True)
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    not(and(not(a), not(b)))
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    not(and(a, not(b)))
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    and(implies(a.clone(), b.clone()), implies(b, a))
}

pub fn eq(a: Term, b: Term) -> Formula {
    Formula::Eq(a, b)
}

pub fn rel(r: &str, args: Vec<Term>) -> Formula {
    Formula::Rel(r.to_string(), args)
}

pub fn dia(g: Game, f: Formula) -> Formula {
    Formula::Dia(Box::new(g), Box::new(f))
}

pub fn boxed(g: Game, f: Formula) -> Formula {
    not(dia(g, not(f)))
}

pub fn fixvar(x: &str) -> Formula {
    Formula::FixVar(x.to_string())
}

pub fn mu(x: &str, body: Formula) -> Formula {
    Formula::Mu(x.to_string(), Box::new(body))
}

/// νX.φ ≡ ¬μX.¬φ[X↦¬X]
pub fn nu(x: &str, body: Formula) -> Formula {
    let flipped = crate::syntax::subst::substitute_fixvar(&body, x, &not(fixvar(x)));
    not(mu(x, not(flipped)))
}

pub fn exists(x: &str, f: Formula) -> Formula {
    dia(quant(x), f)
}

pub fn forall(x: &str, f: Formula) -> Formula {
    not(exists(x, not(f)))
}

pub fn atomic(action: &str, bound: &[&str], params: Vec<Term>) -> Game {
    Game::Atomic {
        action: action.to_string(),
        bound: bound.iter().map(|s| s.to_string()).collect(),
        params,
    }
}

pub fn quant(x: &str) -> Game {
    Game::Atomic {
        action: QUANT.to_string(),
        bound: vec![x.to_string()],
        params: vec![],
    }
}

pub fn assign(x: &str, t: Term) -> Game {
    Game::Atomic {
        action: ASSIGN.to_string(),
        bound: vec![x.to_string()],
        params: vec![t],
    }
}

pub fn assign_vec(xs: Vec<String>, ts: Vec<Term>) -> Game {
    Game::Atomic {
        action: ASSIGN.to_string(),
        bound: xs,
        params: ts,
    }
}

pub fn test(f: Formula) -> Game {
    Game::Test(Box::new(f))
}

pub fn choice(a: Game, b: Game) -> Game {
    Game::Choice(Box::new(a), Box::new(b))
}

pub fn seq(a: Game, b: Game) -> Game {
    Game::Seq(Box::new(a), Box::new(b))
}

pub fn star(a: Game) -> Game {
    Game::Star(Box::new(a))
}

pub fn dual(a: Game) -> Game {
    Game::Dual(Box::new(a))
}

impl Formula {
    /// Splits `¬(a ∧ ¬b)` into `(a, b)`.
    pub fn as_implies(&self) -> Option<(&Formula, &Formula)> {
        if let Formula::Not(inner) = self {
            if let Formula::And(a, nb) = inner.as_ref() {
                if let Formula::Not(b) = nb.as_ref() {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Splits `¬(¬a ∧ ¬b)` into `(a, b)`.
    pub fn as_or(&self) -> Option<(&Formula, &Formula)> {
        if let Formula::Not(inner) = self {
            if let Formula::And(na, nb) = inner.as_ref() {
                if let (Formula::Not(a), Formula::Not(b)) = (na.as_ref(), nb.as_ref()) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Splits `(a → b) ∧ (b → a)` into `(a, b)`.
    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        if let Formula::And(l, r) = self {
            if let (Some((a, b)), Some((b2, a2))) = (l.as_implies(), r.as_implies()) {
                if a == a2 && b == b2 {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::True | Formula::Eq(..) | Formula::Rel(..))
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::Eq(..) | Formula::Rel(..) | Formula::FixVar(_) => 1,
            Formula::Not(a) | Formula::Mu(_, a) => 1 + a.size(),
            Formula::And(a, b) => 1 + a.size() + b.size(),
            Formula::Dia(g, a) => 1 + g.size() + a.size(),
        }
    }
}

impl Game {
    pub fn is_atomic(&self) -> bool {
        matches!(self, Game::Atomic { .. })
    }

    pub fn size(&self) -> usize {
        match self {
            Game::Atomic { .. } => 1,
            Game::Test(f) => 1 + f.size(),
            Game::Choice(a, b) | Game::Seq(a, b) => 1 + a.size() + b.size(),
            Game::Star(a) | Game::Dual(a) => 1 + a.size(),
        }
    }
}

/// Smart negation: strips one negation instead of stacking another.
pub fn neg(f: &Formula) -> Formula {
    match f {
        Formula::Not(inner) => (**inner).clone(),
        other => not(other.clone()),
    }
}

/// Flattens a nested disjunction `¬(a ∧ b)` into its disjuncts `neg(a), neg(b), …`.
pub fn disjuncts(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    collect_disjuncts(f, &mut out);
    out
}

fn collect_disjuncts(f: &Formula, out: &mut Vec<Formula>) {
    if let Formula::Not(inner) = f {
        if let Formula::And(a, b) = inner.as_ref() {
            collect_disjuncts(&neg(a), out);
            collect_disjuncts(&neg(b), out);
            return;
        }
    }
    out.push(f.clone());
}

/// Rebuilds a disjunction from a non-empty list, left-nested.
pub fn big_or(items: Vec<Formula>) -> Formula {
    let mut it = items.into_iter();
    let first = it.next().unwrap_or_else(ff);
    it.fold(first, or)
}

pub fn big_and(items: Vec<Formula>) -> Formula {
    let mut it = items.into_iter();
    let first = it.next().unwrap_or_else(tt);
    it.fold(first, and)
}

pub fn big_choice(items: Vec<Game>) -> Option<Game> {
    let mut it = items.into_iter();
    let first = it.next()?;
    Some(it.fold(first, choice))
}

pub fn big_seq(items: Vec<Game>) -> Option<Game> {
    let mut items = items;
    let last = items.pop()?;
    Some(items.into_iter().rev().fold(last, |acc, g| seq(g, acc)))
}
