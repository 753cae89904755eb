use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::bits::Bits;
use super::structure::{decode_tuple, encode_tuple, tuple_count, FunctionTable, Structure};
use super::SemanticsError;
use crate::syntax::{all_vars, all_vars_game, Formula, Game, Term, ASSIGN, QUANT};

type Result<T> = std::result::Result<T, SemanticsError>;

/// Largest state space the evaluator will allocate.
const MAX_STATES: usize = 1 << 24;

/// The states over a finite variable support, indexed in mixed radix with the
/// first support variable most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    pub domain: usize,
    pub vars: Vec<String>,
    strides: Vec<usize>,
    size: usize,
}

impl Space {
    pub fn new(domain: usize, vars: Vec<String>) -> Result<Space> {
        let distinct: BTreeSet<&String> = vars.iter().collect();
        if distinct.len() != vars.len() {
            return Err(SemanticsError::Structure("support lists a variable twice".into()));
        }
        let mut size: usize = 1;
        let mut strides = vec![0; vars.len()];
        for s in strides.iter_mut().rev() {
            *s = size;
            size = size
                .checked_mul(domain)
                .filter(|&z| z <= MAX_STATES)
                .ok_or_else(|| SemanticsError::Structure("state space too large".into()))?;
        }
        Ok(Space {
            domain,
            vars,
            strides,
            size,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn index_of(&self, v: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|w| w == v)
            .ok_or_else(|| SemanticsError::Support(v.to_string()))
    }

    #[inline]
    pub fn value(&self, state: usize, var: usize) -> usize {
        state / self.strides[var] % self.domain
    }

    #[inline]
    pub fn stride(&self, var: usize) -> usize {
        self.strides[var]
    }

    #[inline]
    pub fn with_value(&self, state: usize, var: usize, u: usize) -> usize {
        state - self.value(state, var) * self.strides[var] + u * self.strides[var]
    }

    pub fn encode(&self, values: &[usize]) -> usize {
        encode_tuple(values, self.domain)
    }

    pub fn decode(&self, state: usize) -> Vec<usize> {
        decode_tuple(state, self.domain, self.vars.len())
    }
}

/// A set of states over a support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSet {
    pub space: Space,
    pub bits: Bits,
}

impl StateSet {
    pub fn empty(space: Space) -> StateSet {
        let bits = Bits::empty(space.size());
        StateSet { space, bits }
    }

    pub fn full(space: Space) -> StateSet {
        let bits = Bits::full(space.size());
        StateSet { space, bits }
    }

    pub fn from_fn(space: Space, mut f: impl FnMut(&[usize]) -> bool) -> StateSet {
        let bits = Bits::from_fn(space.size(), |i| f(&space.decode(i)));
        StateSet { space, bits }
    }

    pub fn support(&self) -> &[String] {
        &self.space.vars
    }

    pub fn contains(&self, values: &[usize]) -> bool {
        self.bits.contains(self.space.encode(values))
    }

    /// Membership of a named assignment; variables outside the support are ignored.
    pub fn contains_assignment(&self, omega: &BTreeMap<String, usize>) -> Result<bool> {
        let mut idx = 0;
        for (i, v) in self.space.vars.iter().enumerate() {
            let u = *omega.get(v).ok_or_else(|| SemanticsError::Support(v.clone()))?;
            idx += u * self.space.stride(i);
        }
        Ok(self.bits.contains(idx))
    }

    pub fn is_full(&self) -> bool {
        self.bits.is_full()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    /// Member states as value vectors in support order.
    pub fn assignments(&self) -> Vec<Vec<usize>> {
        self.bits.iter().map(|i| self.space.decode(i)).collect()
    }
}

/// Assigns state sets to free fixpoint variables.
pub type FixpointInterpretation = BTreeMap<String, StateSet>;

/// Interpretation of atomic formulas and atomic games. The evaluator handles
/// every compound construct generically on top of it.
pub trait AtomInterp {
    fn domain(&self) -> usize;
    /// Denotation of `true`, an equation or a relation atom.
    fn atom(&self, space: &Space, f: &Formula) -> Result<Bits>;
    /// States from which Angel can force the atomic game into `goal`.
    fn game(
        &self,
        space: &Space,
        action: &str,
        bound: &[String],
        params: &[Term],
        goal: &Bits,
    ) -> Result<Bits>;
}

enum CTerm<'s> {
    Var(usize),
    App(&'s FunctionTable, Vec<CTerm<'s>>),
}

impl CTerm<'_> {
    fn eval(&self, space: &Space, state: usize) -> usize {
        match self {
            CTerm::Var(i) => space.value(state, *i),
            CTerm::App(table, args) => {
                let idx = args
                    .iter()
                    .fold(0, |acc, a| acc * space.domain + a.eval(space, state));
                table.values[idx]
            }
        }
    }
}

/// The standard interpretation given by a finite structure.
pub struct FoInterp<'s> {
    pub structure: &'s Structure,
}

impl<'s> FoInterp<'s> {
    pub fn new(structure: &'s Structure) -> Self {
        FoInterp { structure }
    }

    fn compile(&self, space: &Space, t: &Term) -> Result<CTerm<'s>> {
        match t {
            Term::Var(v) => Ok(CTerm::Var(space.index_of(v)?)),
            Term::App(f, args) => {
                let table = self
                    .structure
                    .functions
                    .get(f)
                    .ok_or_else(|| SemanticsError::Uninterpreted(f.clone()))?;
                if table.arity != args.len() {
                    return Err(SemanticsError::Structure(format!(
                        "`{f}` applied to {} arguments, interpreted with arity {}",
                        args.len(),
                        table.arity
                    )));
                }
                let args = args.iter().map(|a| self.compile(space, a)).collect::<Result<_>>()?;
                Ok(CTerm::App(table, args))
            }
        }
    }

    /// For every state, the index of the tuple the terms evaluate to.
    pub fn tuple_indices(&self, space: &Space, ts: &[Term]) -> Result<Vec<usize>> {
        let ts = self.compile_all(space, ts)?;
        Ok((0..space.size())
            .map(|s| ts.iter().fold(0, |acc, t| acc * space.domain + t.eval(space, s)))
            .collect())
    }

    fn compile_all(&self, space: &Space, ts: &[Term]) -> Result<Vec<CTerm<'s>>> {
        ts.iter().map(|t| self.compile(space, t)).collect()
    }
}

/// Offsets that write each k-tuple into the bound positions of a zeroed state.
fn tuple_offsets(space: &Space, xs: &[usize]) -> Vec<usize> {
    let n = space.domain;
    (0..tuple_count(n, xs.len()))
        .map(|t| {
            decode_tuple(t, n, xs.len())
                .iter()
                .zip(xs)
                .map(|(u, &x)| u * space.stride(x))
                .sum()
        })
        .collect()
}

fn zero_out(space: &Space, state: usize, xs: &[usize]) -> usize {
    xs.iter()
        .fold(state, |s, &x| s - space.value(s, x) * space.stride(x))
}

impl AtomInterp for FoInterp<'_> {
    fn domain(&self) -> usize {
        self.structure.domain
    }

    fn atom(&self, space: &Space, f: &Formula) -> Result<Bits> {
        match f {
            Formula::True => Ok(Bits::full(space.size())),
            Formula::Eq(a, b) => {
                let (a, b) = (self.compile(space, a)?, self.compile(space, b)?);
                Ok(Bits::from_fn(space.size(), |s| a.eval(space, s) == b.eval(space, s)))
            }
            Formula::Rel(r, args) => {
                let table = self
                    .structure
                    .relations
                    .get(r)
                    .ok_or_else(|| SemanticsError::Uninterpreted(r.clone()))?;
                if table.arity != args.len() {
                    return Err(SemanticsError::Structure(format!(
                        "`{r}` applied to {} arguments, interpreted with arity {}",
                        args.len(),
                        table.arity
                    )));
                }
                let args = self.compile_all(space, args)?;
                Ok(Bits::from_fn(space.size(), |s| {
                    let idx = args.iter().fold(0, |acc, a| acc * space.domain + a.eval(space, s));
                    table.members[idx]
                }))
            }
            other => Err(SemanticsError::Structure(format!("`{other}` is not atomic"))),
        }
    }

    fn game(
        &self,
        space: &Space,
        action: &str,
        bound: &[String],
        params: &[Term],
        goal: &Bits,
    ) -> Result<Bits> {
        let xs: Vec<usize> = bound.iter().map(|x| space.index_of(x)).collect::<Result<_>>()?;
        if action == ASSIGN {
            let ts = self.compile_all(space, params)?;
            return Ok(Bits::from_fn(space.size(), |s| {
                let target = xs
                    .iter()
                    .zip(&ts)
                    .fold(zero_out(space, s, &xs), |acc, (&x, t)| {
                        acc + t.eval(space, s) * space.stride(x)
                    });
                goal.contains(target)
            }));
        }
        let offsets = tuple_offsets(space, &xs);
        if action == QUANT {
            return Ok(Bits::from_fn(space.size(), |s| {
                let base = zero_out(space, s, &xs);
                offsets.iter().any(|o| goal.contains(base + o))
            }));
        }
        let table = self
            .structure
            .actions
            .get(action)
            .ok_or_else(|| SemanticsError::Uninterpreted(action.to_string()))?;
        if (table.k, table.l) != (bound.len(), params.len()) {
            return Err(SemanticsError::Structure(format!(
                "action `{action}` used with arity ({}, {}), interpreted as ({}, {})",
                bound.len(),
                params.len(),
                table.k,
                table.l
            )));
        }
        let ps = self.compile_all(space, params)?;
        Ok(Bits::from_fn(space.size(), |s| {
            let pidx = ps.iter().fold(0, |acc, p| acc * space.domain + p.eval(space, s));
            let base = zero_out(space, s, &xs);
            table.map[pidx]
                .iter()
                .any(|gen| gen.iter().all(|&t| goal.contains(base + offsets[t])))
        }))
    }
}

/// Least fixpoint of a monotone step, by iteration from the empty set.
pub fn lfp(len: usize, mut step: impl FnMut(&Bits) -> Bits) -> Bits {
    let mut z = Bits::empty(len);
    loop {
        let next = step(&z);
        if next == z {
            return z;
        }
        z = next;
    }
}

fn try_lfp(len: usize, mut step: impl FnMut(&Bits) -> Result<Bits>) -> Result<Bits> {
    let mut z = Bits::empty(len);
    // A monotone step stabilises within len + 1 rounds.
    for _ in 0..=len + 1 {
        let next = step(&z)?;
        if next == z {
            return Ok(z);
        }
        z = next;
    }
    Err(SemanticsError::Divergent)
}

/// Evaluates formulas and games over a fixed support.
pub struct Evaluator<'a, I: AtomInterp + ?Sized> {
    interp: &'a I,
    space: Space,
    // Denotations of fixpoint-free subformulas keyed by node address; cleared
    // on every public call so addresses never outlive their trees.
    cache: RefCell<HashMap<usize, Bits>>,
}

impl<'a, I: AtomInterp + ?Sized> Evaluator<'a, I> {
    pub fn new(interp: &'a I, support: Vec<String>) -> Result<Self> {
        let space = Space::new(interp.domain(), support)?;
        Ok(Evaluator {
            interp,
            space,
            cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn formula(&self, f: &Formula) -> Result<Bits> {
        self.formula_in(f, &mut Vec::new())
    }

    /// Evaluates with free fixpoint variables bound by `env`.
    pub fn formula_in(&self, f: &Formula, env: &mut Vec<(String, Bits)>) -> Result<Bits> {
        self.cache.borrow_mut().clear();
        self.eval_f(f, env)
    }

    pub fn game(&self, g: &Game, goal: &Bits) -> Result<Bits> {
        self.cache.borrow_mut().clear();
        self.eval_g(g, goal, &mut Vec::new())
    }

    fn eval_f(&self, f: &Formula, env: &mut Vec<(String, Bits)>) -> Result<Bits> {
        let len = self.space.size();
        match f {
            Formula::True | Formula::Eq(..) | Formula::Rel(..) => self.interp.atom(&self.space, f),
            Formula::Not(a) => Ok(self.eval_f(a, env)?.complement()),
            Formula::And(a, b) => Ok(self.eval_f(a, env)?.intersect(&self.eval_f(b, env)?)),
            Formula::Dia(g, a) => {
                let goal = self.eval_f(a, env)?;
                self.eval_g(g, &goal, env)
            }
            Formula::FixVar(x) => env
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, z)| z.clone())
                .ok_or_else(|| SemanticsError::UnboundFixVar(x.clone())),
            Formula::Mu(x, body) => try_lfp(len, |z| {
                env.push((x.clone(), z.clone()));
                let r = self.eval_f(body, env);
                env.pop();
                r
            }),
        }
    }

    fn eval_g(&self, g: &Game, goal: &Bits, env: &mut Vec<(String, Bits)>) -> Result<Bits> {
        match g {
            Game::Atomic {
                action,
                bound,
                params,
            } => self.interp.game(&self.space, action, bound, params, goal),
            Game::Test(phi) => {
                let key = phi.as_ref() as *const Formula as usize;
                if env.is_empty() {
                    if let Some(d) = self.cache.borrow().get(&key) {
                        return Ok(d.intersect(goal));
                    }
                }
                let d = self.eval_f(phi, env)?;
                let out = d.intersect(goal);
                if env.is_empty() {
                    self.cache.borrow_mut().insert(key, d);
                }
                Ok(out)
            }
            Game::Choice(a, b) => Ok(self.eval_g(a, goal, env)?.union(&self.eval_g(b, goal, env)?)),
            Game::Seq(a, b) => {
                let mid = self.eval_g(b, goal, env)?;
                self.eval_g(a, &mid, env)
            }
            Game::Star(a) => try_lfp(self.space.size(), |z| {
                Ok(goal.union(&self.eval_g(a, z, env)?))
            }),
            Game::Dual(a) => Ok(self.eval_g(a, &goal.complement(), env)?.complement()),
        }
    }
}

/// All variables of the given formulas in sorted order, followed by `extras`
/// not already present.
pub fn default_support(fs: &[&Formula], extras: &[String]) -> Vec<String> {
    let mut vars = BTreeSet::new();
    for f in fs {
        vars.extend(all_vars(f));
    }
    let mut out: Vec<String> = vars.into_iter().collect();
    for e in extras {
        if !out.contains(e) {
            out.push(e.clone());
        }
    }
    out
}

pub fn eval_formula(st: &Structure, f: &Formula, support: &[String]) -> Result<StateSet> {
    eval_mu(st, &FixpointInterpretation::new(), f, support)
}

pub fn eval_mu(
    st: &Structure,
    interp: &FixpointInterpretation,
    f: &Formula,
    support: &[String],
) -> Result<StateSet> {
    let fo = FoInterp::new(st);
    let ev = Evaluator::new(&fo, support.to_vec())?;
    let mut env = Vec::new();
    for (x, z) in interp {
        if z.space != ev.space {
            return Err(SemanticsError::SupportMismatch);
        }
        env.push((x.clone(), z.bits.clone()));
    }
    let bits = ev.formula_in(f, &mut env)?;
    Ok(StateSet {
        space: ev.space.clone(),
        bits,
    })
}

pub fn eval_game(st: &Structure, g: &Game, goal: &StateSet) -> Result<StateSet> {
    for v in all_vars_game(g) {
        goal.space.index_of(&v)?;
    }
    let fo = FoInterp::new(st);
    let ev = Evaluator::new(&fo, goal.space.vars.clone())?;
    if ev.space != goal.space {
        return Err(SemanticsError::SupportMismatch);
    }
    let bits = ev.game(g, &goal.bits)?;
    Ok(StateSet {
        space: goal.space.clone(),
        bits,
    })
}

pub fn eval_term(st: &Structure, omega: &BTreeMap<String, usize>, t: &Term) -> Result<usize> {
    match t {
        Term::Var(v) => omega.get(v).copied().ok_or_else(|| SemanticsError::Support(v.clone())),
        Term::App(f, args) => {
            let table = st
                .functions
                .get(f)
                .ok_or_else(|| SemanticsError::Uninterpreted(f.clone()))?;
            if table.arity != args.len() {
                return Err(SemanticsError::Structure(format!("`{f}` arity mismatch")));
            }
            let vals = args.iter().map(|a| eval_term(st, omega, a)).collect::<Result<Vec<_>>>()?;
            Ok(table.values[encode_tuple(&vals, st.domain)])
        }
    }
}

/// Whether two formulas denote the same state set. The default support is the
/// variables of both formulas.
pub fn semantically_equal(
    st: &Structure,
    a: &Formula,
    b: &Formula,
    support: Option<&[String]>,
) -> Result<bool> {
    let sup = match support {
        Some(s) => s.to_vec(),
        None => default_support(&[a, b], &[]),
    };
    let fo = FoInterp::new(st);
    let ev = Evaluator::new(&fo, sup)?;
    Ok(ev.formula(a)? == ev.formula(b)?)
}

/// Whether the formula holds in every state.
pub fn is_valid(st: &Structure, f: &Formula) -> Result<bool> {
    let fo = FoInterp::new(st);
    let ev = Evaluator::new(&fo, default_support(&[f], &[]))?;
    Ok(ev.formula(f)?.is_full())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula_infer, parse_game, Logic};

    fn two_with_r1() -> Structure {
        Structure::new(2).unwrap().with_relation("R", 1, &[&[1]])
    }

    fn succ() -> Structure {
        Structure::new(2)
            .unwrap()
            .with_relation("R", 1, &[&[1]])
            .with_function("f", 1, |a| a[0] + 1)
            .with_function("c", 0, |_| 0)
            .with_action("a", 1, 1, |p| vec![vec![vec![(p[0] + 1) % 2]]])
    }

    fn sup(vs: &[&str]) -> Vec<String> {
        vs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn terms() {
        let st = succ();
        let mut omega = BTreeMap::new();
        omega.insert("x".to_string(), 0);
        let t = Term::app("f", vec![Term::app("f", vec![Term::var("x")])]);
        assert_eq!(eval_term(&st, &omega, &t).unwrap(), 0);
        assert_eq!(eval_term(&st, &omega, &Term::app("c", vec![])).unwrap(), 0);
        assert!(eval_term(&st, &omega, &Term::var("y")).is_err());
    }

    #[test]
    fn quantifier_and_false_test() {
        let st = succ();
        let space = Space::new(2, sup(&["x"])).unwrap();
        let s = StateSet::from_fn(space, |v| v[0] == 1);
        let sig = st.signature();
        let all = eval_game(&st, &parse_game("x := *", &sig).unwrap(), &s).unwrap();
        assert!(all.is_full());
        let none = eval_game(&st, &parse_game("?false", &sig).unwrap(), &s).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn star_reaches_everything() {
        let st = succ();
        let space = Space::new(2, sup(&["x"])).unwrap();
        let s = StateSet::from_fn(space, |v| v[0] == 1);
        let g = parse_game("(a(x:x))*", &st.signature()).unwrap();
        assert!(eval_game(&st, &g, &s).unwrap().is_full());
    }

    #[test]
    fn mu_examples() {
        let st = two_with_r1();
        let (f, _) = parse_formula_infer("mu X . (R(x) | <x := *> X)", Logic::Mu).unwrap();
        assert!(eval_formula(&st, &f, &sup(&["x"])).unwrap().is_full());
        let (f, _) = parse_formula_infer("mu X . X", Logic::Mu).unwrap();
        assert!(eval_formula(&st, &f, &[]).unwrap().is_empty());
        let (f, _) = parse_formula_infer("nu X . X", Logic::Mu).unwrap();
        assert!(eval_formula(&st, &f, &[]).unwrap().is_full());
    }

    #[test]
    fn quantifier_is_not_identity() {
        let st = two_with_r1();
        let (a, _) = parse_formula_infer("<x := *> R(x)", Logic::Gl).unwrap();
        let (b, _) = parse_formula_infer("R(x)", Logic::Gl).unwrap();
        assert!(!semantically_equal(&st, &a, &b, None).unwrap());
    }

    #[test]
    fn lfp_basics() {
        let t = Bits::from_fn(5, |i| i % 2 == 0);
        assert_eq!(lfp(5, |_| t.clone()), t);
        assert_eq!(lfp(5, |z| z.clone()), Bits::empty(5));
    }

    #[test]
    fn unbound_fixvar_and_support() {
        let st = two_with_r1();
        assert_eq!(
            eval_formula(&st, &Formula::FixVar("X".into()), &[]),
            Err(SemanticsError::UnboundFixVar("X".into()))
        );
        let (f, _) = parse_formula_infer("R(y)", Logic::Gl).unwrap();
        assert!(matches!(eval_formula(&st, &f, &sup(&["x"])), Err(SemanticsError::Support(_))));
    }

    #[test]
    fn assignment_native() {
        let st = succ();
        let (f, _) = parse_formula_infer("<x := f(x)> R(x)", Logic::Gl).unwrap();
        let d = eval_formula(&st, &f, &sup(&["x"])).unwrap();
        assert_eq!(d.assignments(), vec![vec![0]]);
    }
}
