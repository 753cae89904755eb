//! Least fixpoint logic and its translations to and from the fixpoint calculus
//! over the quantifier-only signature.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Display, Formatter};

use super::TranslateError;
use crate::semantics::{lfp, AtomInterp, Bits, FoInterp, SemanticsError, Space, StateSet, Structure};
use crate::syntax::parser::{lex, Tok};
use crate::syntax::*;

/// Formulas of least fixpoint logic. `Fix` is `[lfp R, x̄ . body](args)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Lfp {
    True,
    Eq(Term, Term),
    Rel(String, Vec<Term>),
    Not(Box<Lfp>),
    And(Box<Lfp>, Box<Lfp>),
    Exists(String, Box<Lfp>),
    Fix {
        rel: String,
        vars: Vec<String>,
        body: Box<Lfp>,
        args: Vec<Term>,
    },
}

impl Lfp {
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Lfp) -> Lfp {
        Lfp::Not(Box::new(a))
    }

    pub fn and(a: Lfp, b: Lfp) -> Lfp {
        Lfp::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Lfp, b: Lfp) -> Lfp {
        Lfp::not(Lfp::and(Lfp::not(a), Lfp::not(b)))
    }

    pub fn exists(x: &str, a: Lfp) -> Lfp {
        Lfp::Exists(x.to_string(), Box::new(a))
    }

    fn as_or(&self) -> Option<(&Lfp, &Lfp)> {
        if let Lfp::Not(inner) = self {
            if let Lfp::And(a, b) = inner.as_ref() {
                if let (Lfp::Not(a), Lfp::Not(b)) = (a.as_ref(), b.as_ref()) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Free individual variables.
    pub fn free_vars(&self) -> VarSet {
        match self {
            Lfp::True => VarSet::new(),
            Lfp::Eq(a, b) => {
                let mut s = term_vars(a);
                add_term_vars(b, &mut s);
                s
            }
            Lfp::Rel(_, args) => terms_vars(args),
            Lfp::Not(a) => a.free_vars(),
            Lfp::And(a, b) => {
                let mut s = a.free_vars();
                s.extend(b.free_vars());
                s
            }
            Lfp::Exists(x, a) => {
                let mut s = a.free_vars();
                s.remove(x);
                s
            }
            Lfp::Fix { vars, body, args, .. } => {
                let mut s = body.free_vars();
                for v in vars {
                    s.remove(v);
                }
                s.extend(terms_vars(args));
                s
            }
        }
    }

    /// Every individual variable, free or bound.
    pub fn all_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut VarSet) {
        match self {
            Lfp::True => {}
            Lfp::Eq(a, b) => {
                add_term_vars(a, out);
                add_term_vars(b, out);
            }
            Lfp::Rel(_, args) => args.iter().for_each(|t| add_term_vars(t, out)),
            Lfp::Not(a) => a.collect_vars(out),
            Lfp::And(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Lfp::Exists(x, a) => {
                out.insert(x.clone());
                a.collect_vars(out);
            }
            Lfp::Fix { vars, body, args, .. } => {
                out.extend(vars.iter().cloned());
                body.collect_vars(out);
                args.iter().for_each(|t| add_term_vars(t, out));
            }
        }
    }

    /// Variables bound by `∃` or by a fixpoint binder.
    fn bound_vars(&self, out: &mut VarSet) {
        match self {
            Lfp::True | Lfp::Eq(..) | Lfp::Rel(..) => {}
            Lfp::Not(a) => a.bound_vars(out),
            Lfp::And(a, b) => {
                a.bound_vars(out);
                b.bound_vars(out);
            }
            Lfp::Exists(x, a) => {
                out.insert(x.clone());
                a.bound_vars(out);
            }
            Lfp::Fix { vars, body, .. } => {
                out.extend(vars.iter().cloned());
                body.bound_vars(out);
            }
        }
    }

    fn relations(&self, out: &mut BTreeSet<String>) {
        match self {
            Lfp::True | Lfp::Eq(..) => {}
            Lfp::Rel(r, _) => {
                out.insert(r.clone());
            }
            Lfp::Not(a) | Lfp::Exists(_, a) => a.relations(out),
            Lfp::And(a, b) => {
                a.relations(out);
                b.relations(out);
            }
            Lfp::Fix { rel, body, .. } => {
                out.insert(rel.clone());
                body.relations(out);
            }
        }
    }

    /// Whether `r` occurs free under an even (`positive`) or odd number of
    /// negations.
    fn occurs(&self, r: &str, positive: bool) -> bool {
        match self {
            Lfp::True | Lfp::Eq(..) => false,
            Lfp::Rel(s, _) => s == r && positive,
            Lfp::Not(a) => a.occurs(r, !positive),
            Lfp::And(a, b) => a.occurs(r, positive) || b.occurs(r, positive),
            Lfp::Exists(_, a) => a.occurs(r, positive),
            Lfp::Fix { rel, body, .. } => rel != r && body.occurs(r, positive),
        }
    }
}

// Printing mirrors the formula printer: `|` and `false` are recovered.

fn write_terms(f: &mut Formatter<'_>, ts: &[Term]) -> fmt::Result {
    for (i, t) in ts.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

fn lfp_level(phi: &Lfp) -> u8 {
    match phi {
        Lfp::And(..) => 3,
        Lfp::Not(_) if phi.as_or().is_some() => 2,
        _ => 4,
    }
}

fn write_lfp(f: &mut Formatter<'_>, phi: &Lfp, ctx: u8) -> fmt::Result {
    if lfp_level(phi) < ctx {
        f.write_str("(")?;
        write_lfp(f, phi, 0)?;
        return f.write_str(")");
    }
    match phi {
        Lfp::True => f.write_str("true"),
        Lfp::Eq(a, b) => write!(f, "{a} = {b}"),
        Lfp::Rel(r, args) => {
            write!(f, "{r}(")?;
            write_terms(f, args)?;
            f.write_str(")")
        }
        Lfp::And(a, b) => {
            write_lfp(f, a, 4)?;
            f.write_str(" & ")?;
            write_lfp(f, b, 3)
        }
        Lfp::Not(inner) => {
            if let Some((a, b)) = phi.as_or() {
                write_lfp(f, a, 3)?;
                f.write_str(" | ")?;
                return write_lfp(f, b, 2);
            }
            match inner.as_ref() {
                Lfp::True => f.write_str("false"),
                Lfp::Eq(a, b) => write!(f, "{a} != {b}"),
                _ => {
                    f.write_str("!")?;
                    write_lfp(f, inner, 4)
                }
            }
        }
        Lfp::Exists(x, a) => {
            write!(f, "exists {x} . ")?;
            write_lfp(f, a, 4)
        }
        Lfp::Fix {
            rel,
            vars,
            body,
            args,
        } => {
            write!(f, "[lfp {rel}, {} . ", vars.join(", "))?;
            write_lfp(f, body, 0)?;
            f.write_str("](")?;
            write_terms(f, args)?;
            f.write_str(")")
        }
    }
}

impl Display for Lfp {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_lfp(f, self, 0)
    }
}

struct LfpParser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: Option<&'a GameSignature>,
}

type PResult<T> = Result<T, SyntaxError>;

impl LfpParser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(SyntaxError::Parse {
            pos: self.toks[self.pos].1,
            msg: msg.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.fail(format!("expected {what}, found {:?}", self.peek()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !["true", "false", "exists", "forall", "lfp"].contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            other => self.fail(format!("expected identifier, found {other:?}")),
        }
    }

    fn keyword(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == k)
    }

    fn formula(&mut self) -> PResult<Lfp> {
        let lhs = self.implication()?;
        if self.eat(&Tok::DArrow) {
            let rhs = self.formula()?;
            let imp = |a: Lfp, b: Lfp| Lfp::not(Lfp::and(a, Lfp::not(b)));
            return Ok(Lfp::and(imp(lhs.clone(), rhs.clone()), imp(rhs, lhs)));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Lfp> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Lfp::not(Lfp::and(lhs, Lfp::not(rhs))));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Lfp> {
        let lhs = self.conjunction()?;
        if self.eat(&Tok::Or) {
            let rhs = self.disjunction()?;
            return Ok(Lfp::or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Lfp> {
        let lhs = self.unary()?;
        if self.eat(&Tok::And) {
            let rhs = self.conjunction()?;
            return Ok(Lfp::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn binder_vars(&mut self) -> PResult<Vec<String>> {
        let mut vs = vec![self.ident()?];
        while self.eat(&Tok::Comma) {
            vs.push(self.ident()?);
        }
        self.expect(Tok::Dot, "`.`")?;
        Ok(vs)
    }

    fn unary(&mut self) -> PResult<Lfp> {
        if self.eat(&Tok::Bang) {
            return Ok(Lfp::not(self.unary()?));
        }
        if self.keyword("exists") || self.keyword("forall") {
            let universal = self.keyword("forall");
            self.bump();
            let vs = self.binder_vars()?;
            let body = self.unary()?;
            return Ok(vs.iter().rev().fold(body, |acc, v| {
                if universal {
                    Lfp::not(Lfp::exists(v, Lfp::not(acc)))
                } else {
                    Lfp::exists(v, acc)
                }
            }));
        }
        if self.eat(&Tok::LBrack) {
            if !self.keyword("lfp") {
                return self.fail("expected `lfp`");
            }
            self.bump();
            let rel = self.ident()?;
            self.expect(Tok::Comma, "`,`")?;
            let vars = self.binder_vars()?;
            let body = self.formula()?;
            self.expect(Tok::RBrack, "`]`")?;
            self.expect(Tok::LParen, "`(`")?;
            let args = self.terms_until_rparen()?;
            return Ok(Lfp::Fix {
                rel,
                vars,
                body: Box::new(body),
                args,
            });
        }
        if self.eat(&Tok::LParen) {
            let f = self.formula()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(f);
        }
        if self.keyword("true") {
            self.bump();
            return Ok(Lfp::True);
        }
        if self.keyword("false") {
            self.bump();
            return Ok(Lfp::not(Lfp::True));
        }
        self.atom()
    }

    fn terms_until_rparen(&mut self) -> PResult<Vec<Term>> {
        let mut out = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(out);
        }
        out.push(self.term()?);
        while self.eat(&Tok::Comma) {
            out.push(self.term()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(out)
    }

    fn term(&mut self) -> PResult<Term> {
        let name = self.ident()?;
        if self.eat(&Tok::LParen) {
            return Ok(Term::App(name, self.terms_until_rparen()?));
        }
        let is_const = self.sig.is_some_and(|s| s.functions.get(&name) == Some(&0));
        Ok(if is_const { Term::App(name, vec![]) } else { Term::Var(name) })
    }

    fn atom(&mut self) -> PResult<Lfp> {
        let is_relation = match self.peek() {
            Tok::Ident(name) => {
                self.toks[self.pos + 1].0 == Tok::LParen
                    && self.sig.is_none_or(|s| !s.functions.contains_key(name))
            }
            _ => false,
        };
        if is_relation {
            let save = self.pos;
            let name = self.ident()?;
            self.bump();
            let args = self.terms_until_rparen()?;
            if !matches!(self.peek(), Tok::Eq | Tok::Neq) {
                return Ok(Lfp::Rel(name, args));
            }
            self.pos = save;
        }
        let lhs = self.term()?;
        let negated = match self.bump() {
            Tok::Eq => false,
            Tok::Neq => true,
            other => return self.fail(format!("expected `=` or `!=`, found {other:?}")),
        };
        let rhs = self.term()?;
        let e = Lfp::Eq(lhs, rhs);
        Ok(if negated { Lfp::not(e) } else { e })
    }
}

/// Parses a least fixpoint formula. Without a signature, bare identifiers in
/// term position are variables.
pub fn parse_lfp(src: &str, sig: Option<&GameSignature>) -> Result<Lfp, TranslateError> {
    let mut p = LfpParser {
        toks: lex(src)?,
        pos: 0,
        sig,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.fail::<()>("trailing input").unwrap_err().into());
    }
    check_lfp(&f)?;
    Ok(f)
}

/// Binders list distinct variables and fixpoint relations occur positively.
pub fn check_lfp(f: &Lfp) -> Result<(), TranslateError> {
    match f {
        Lfp::True | Lfp::Eq(..) | Lfp::Rel(..) => Ok(()),
        Lfp::Not(a) | Lfp::Exists(_, a) => check_lfp(a),
        Lfp::And(a, b) => {
            check_lfp(a)?;
            check_lfp(b)
        }
        Lfp::Fix {
            rel,
            vars,
            body,
            args,
        } => {
            let distinct: BTreeSet<_> = vars.iter().collect();
            if distinct.len() != vars.len() {
                return Err(TranslateError::Precondition(format!("`{rel}` binds a variable twice")));
            }
            if vars.len() != args.len() {
                return Err(TranslateError::Precondition(format!(
                    "`{rel}` binds {} variables but is applied to {} terms",
                    vars.len(),
                    args.len()
                )));
            }
            if body.occurs(rel, false) {
                return Err(TranslateError::Precondition(format!(
                    "`{rel}` occurs negatively in its fixpoint body"
                )));
            }
            check_lfp(body)
        }
    }
}

/// Fixpoint formulas over the quantifier signature to least fixpoint logic.
/// Every fixpoint becomes a relation over `vars`, which must list every
/// variable of `f`.
pub fn mu_to_lfp(f: &Formula, vars: &[String]) -> Result<Lfp, TranslateError> {
    let listed: VarSet = vars.iter().cloned().collect();
    if let Some(v) = all_vars(f).difference(&listed).next() {
        return Err(TranslateError::Precondition(format!("variable `{v}` is not listed")));
    }
    if listed.len() != vars.len() {
        return Err(TranslateError::Precondition("variable list repeats a name".into()));
    }
    let mut used = BTreeSet::new();
    relations_of(f, &mut used);
    let mut avoid_vars = listed.clone();
    to_lfp(f, vars, &mut Vec::new(), &mut used, &mut avoid_vars)
}

fn relations_of(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Rel(r, _) => {
            out.insert(r.clone());
        }
        Formula::True | Formula::Eq(..) | Formula::FixVar(_) => {}
        Formula::Not(a) | Formula::Mu(_, a) => relations_of(a, out),
        Formula::And(a, b) => {
            relations_of(a, out);
            relations_of(b, out);
        }
        Formula::Dia(_, a) => relations_of(a, out),
    }
}

fn to_lfp(
    f: &Formula,
    vars: &[String],
    scope: &mut Vec<(String, String)>,
    used: &mut BTreeSet<String>,
    avoid: &mut VarSet,
) -> Result<Lfp, TranslateError> {
    let v_terms = || vars.iter().map(|v| Term::var(v)).collect::<Vec<_>>();
    Ok(match f {
        Formula::True => Lfp::True,
        Formula::Eq(a, b) => Lfp::Eq(a.clone(), b.clone()),
        Formula::Rel(r, args) => Lfp::Rel(r.clone(), args.clone()),
        Formula::Not(a) => Lfp::not(to_lfp(a, vars, scope, used, avoid)?),
        Formula::And(a, b) => Lfp::and(
            to_lfp(a, vars, scope, used, avoid)?,
            to_lfp(b, vars, scope, used, avoid)?,
        ),
        Formula::FixVar(x) => {
            let rel = scope
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, r)| r.clone())
                .ok_or_else(|| TranslateError::Precondition(format!("fixpoint variable `{x}` is free")))?;
            Lfp::Rel(rel, v_terms())
        }
        Formula::Mu(x, body) => {
            let rel = fresh_relation(&format!("R_{x}"), used);
            scope.push((x.clone(), rel.clone()));
            let body = to_lfp(body, vars, scope, used, avoid);
            scope.pop();
            Lfp::Fix {
                rel,
                vars: vars.to_vec(),
                body: Box::new(body?),
                args: v_terms(),
            }
        }
        Formula::Dia(g, body) => {
            let Game::Atomic {
                action,
                bound,
                params,
            } = g.as_ref()
            else {
                return Err(TranslateError::Precondition(format!("`{g}` is not an atomic game")));
            };
            let inner = to_lfp(body, vars, scope, used, avoid)?;
            if action == QUANT {
                Lfp::exists(&bound[0], inner)
            } else if action == ASSIGN {
                // ∃ȳ (ȳ = θ̄ ∧ ∃x̄ (x̄ = ȳ ∧ φ)) with ȳ fresh.
                let ys: Vec<String> = bound
                    .iter()
                    .map(|x| {
                        let y = fresh_name(x, avoid);
                        avoid.insert(y.clone());
                        y
                    })
                    .collect();
                let mut out = inner;
                for (x, y) in bound.iter().zip(&ys).rev() {
                    out = Lfp::exists(x, Lfp::and(Lfp::Eq(Term::var(x), Term::var(y)), out));
                }
                for (y, t) in ys.iter().zip(params).rev() {
                    out = Lfp::exists(y, Lfp::and(Lfp::Eq(Term::var(y), t.clone()), out));
                }
                out
            } else {
                return Err(TranslateError::Precondition(format!(
                    "action `{action}` is outside the quantifier signature"
                )));
            }
        }
    })
}

fn fresh_relation(base: &str, used: &mut BTreeSet<String>) -> String {
    let name = if used.contains(base) {
        fresh_name(base, used)
    } else {
        base.to_string()
    };
    used.insert(name.clone());
    name
}

/// Least fixpoint logic to fixpoint formulas over the quantifier signature.
pub fn lfp_to_mu(f: &Lfp) -> Result<Formula, TranslateError> {
    check_lfp(f)?;
    let mut bound_rels = Vec::new();
    collect_fix_rels(f, &mut bound_rels);
    let distinct: BTreeSet<_> = bound_rels.iter().collect();
    if distinct.len() != bound_rels.len() {
        return Err(TranslateError::Precondition(
            "a fixpoint relation is bound more than once".into(),
        ));
    }
    let fixed: BTreeSet<String> = bound_rels.into_iter().collect();
    check_fix_rel_scope(f, &fixed, &mut Vec::new())?;
    let normal = normalize(f)?;
    let mut fixvars = BTreeSet::new();
    let mut rels = BTreeSet::new();
    normal.relations(&mut rels);
    from_lfp(&normal, &mut Vec::new(), &rels, &mut fixvars)
}

fn collect_fix_rels(f: &Lfp, out: &mut Vec<String>) {
    match f {
        Lfp::True | Lfp::Eq(..) | Lfp::Rel(..) => {}
        Lfp::Not(a) | Lfp::Exists(_, a) => collect_fix_rels(a, out),
        Lfp::And(a, b) => {
            collect_fix_rels(a, out);
            collect_fix_rels(b, out);
        }
        Lfp::Fix { rel, body, .. } => {
            out.push(rel.clone());
            collect_fix_rels(body, out);
        }
    }
}

fn check_fix_rel_scope(
    f: &Lfp,
    fixed: &BTreeSet<String>,
    scope: &mut Vec<String>,
) -> Result<(), TranslateError> {
    match f {
        Lfp::True | Lfp::Eq(..) => Ok(()),
        Lfp::Rel(r, _) => {
            if fixed.contains(r) && !scope.contains(r) {
                Err(TranslateError::Precondition(format!(
                    "fixpoint relation `{r}` is used outside its binder"
                )))
            } else {
                Ok(())
            }
        }
        Lfp::Not(a) | Lfp::Exists(_, a) => check_fix_rel_scope(a, fixed, scope),
        Lfp::And(a, b) => {
            check_fix_rel_scope(a, fixed, scope)?;
            check_fix_rel_scope(b, fixed, scope)
        }
        Lfp::Fix { rel, body, .. } => {
            scope.push(rel.clone());
            let r = check_fix_rel_scope(body, fixed, scope);
            scope.pop();
            r
        }
    }
}

/// Extends every fixpoint so that it binds all free variables of its body.
fn normalize(f: &Lfp) -> Result<Lfp, TranslateError> {
    Ok(match f {
        Lfp::True | Lfp::Eq(..) | Lfp::Rel(..) => f.clone(),
        Lfp::Not(a) => Lfp::not(normalize(a)?),
        Lfp::And(a, b) => Lfp::and(normalize(a)?, normalize(b)?),
        Lfp::Exists(x, a) => Lfp::exists(x, normalize(a)?),
        Lfp::Fix {
            rel,
            vars,
            body,
            args,
        } => {
            let mut params: Vec<String> = body
                .free_vars()
                .into_iter()
                .filter(|v| !vars.contains(v))
                .collect();
            params.sort();
            let (vars, body, args) = if params.is_empty() {
                (vars.clone(), body.as_ref().clone(), args.clone())
            } else {
                let mut bound = VarSet::new();
                body.bound_vars(&mut bound);
                if let Some(p) = params.iter().find(|p| bound.contains(*p)) {
                    return Err(TranslateError::Precondition(format!(
                        "parameter `{p}` of `{rel}` is rebound inside its body"
                    )));
                }
                let extra: Vec<Term> = params.iter().map(|p| Term::var(p)).collect();
                let mut vars = vars.clone();
                vars.extend(params.iter().cloned());
                let mut args = args.clone();
                args.extend(extra.iter().cloned());
                (vars, extend_rel(body, rel, &extra), args)
            };
            Lfp::Fix {
                rel: rel.clone(),
                vars,
                body: Box::new(normalize(&body)?),
                args,
            }
        }
    })
}

fn extend_rel(f: &Lfp, rel: &str, extra: &[Term]) -> Lfp {
    match f {
        Lfp::True | Lfp::Eq(..) => f.clone(),
        Lfp::Rel(r, args) if r == rel => {
            let mut args = args.clone();
            args.extend(extra.iter().cloned());
            Lfp::Rel(r.clone(), args)
        }
        Lfp::Rel(..) => f.clone(),
        Lfp::Not(a) => Lfp::not(extend_rel(a, rel, extra)),
        Lfp::And(a, b) => Lfp::and(extend_rel(a, rel, extra), extend_rel(b, rel, extra)),
        Lfp::Exists(x, a) => Lfp::exists(x, extend_rel(a, rel, extra)),
        Lfp::Fix {
            rel: r,
            vars,
            body,
            args,
        } => Lfp::Fix {
            rel: r.clone(),
            vars: vars.clone(),
            body: Box::new(extend_rel(body, rel, extra)),
            args: args.clone(),
        },
    }
}

/// `⟨x̄ := t̄⟩φ` without the components that assign a variable to itself.
fn assign_then(vars: &[String], args: &[Term], f: Formula) -> Formula {
    let (xs, ts): (Vec<String>, Vec<Term>) = vars
        .iter()
        .zip(args)
        .filter(|(x, t)| t.as_var() != Some(x.as_str()))
        .map(|(x, t)| (x.clone(), t.clone()))
        .unzip();
    if xs.is_empty() {
        f
    } else {
        dia(assign_vec(xs, ts), f)
    }
}

fn fixvar_for(rel: &str, rels: &BTreeSet<String>, taken: &mut BTreeSet<String>) -> String {
    let base = if rel.starts_with(|c: char| c.is_ascii_uppercase()) {
        rel.to_string()
    } else {
        format!("X_{rel}")
    };
    let mut avoid = taken.clone();
    avoid.extend(rels.iter().cloned());
    avoid.remove(rel);
    let name = if avoid.contains(&base) { fresh_name(&base, &avoid) } else { base };
    taken.insert(name.clone());
    name
}

fn from_lfp(
    f: &Lfp,
    scope: &mut Vec<(String, Vec<String>, String)>,
    rels: &BTreeSet<String>,
    taken: &mut BTreeSet<String>,
) -> Result<Formula, TranslateError> {
    Ok(match f {
        Lfp::True => tt(),
        Lfp::Eq(a, b) => eq(a.clone(), b.clone()),
        Lfp::Rel(r, args) => match scope.iter().rev().find(|(s, _, _)| s == r) {
            Some((_, vars, x)) => assign_then(vars, args, fixvar(x)),
            None => rel(r, args.clone()),
        },
        Lfp::Not(a) => not(from_lfp(a, scope, rels, taken)?),
        Lfp::And(a, b) => and(from_lfp(a, scope, rels, taken)?, from_lfp(b, scope, rels, taken)?),
        Lfp::Exists(x, a) => dia(quant(x), from_lfp(a, scope, rels, taken)?),
        Lfp::Fix {
            rel,
            vars,
            body,
            args,
        } => {
            let x = fixvar_for(rel, rels, taken);
            scope.push((rel.clone(), vars.clone(), x.clone()));
            let inner = from_lfp(body, scope, rels, taken);
            scope.pop();
            assign_then(vars, args, mu(&x, inner?))
        }
    })
}

/// Evaluates a least fixpoint formula over a support listing its variables.
pub fn eval_lfp(st: &Structure, f: &Lfp, support: &[String]) -> Result<StateSet, SemanticsError> {
    let fo = FoInterp::new(st);
    let space = Space::new(st.domain, support.to_vec())?;
    let ev = LfpEval { fo, space };
    let bits = ev.eval(f, &mut Vec::new())?;
    Ok(StateSet {
        space: ev.space,
        bits,
    })
}

/// Default support: every variable of the formula in sorted order.
pub fn lfp_support(f: &Lfp) -> Vec<String> {
    f.all_vars().into_iter().collect()
}

struct LfpEval<'a> {
    fo: FoInterp<'a>,
    space: Space,
}

type RelEnv = Vec<(String, Bits)>;

impl LfpEval<'_> {
    fn eval(&self, f: &Lfp, env: &mut RelEnv) -> Result<Bits, SemanticsError> {
        let sp = &self.space;
        match f {
            Lfp::True => Ok(Bits::full(sp.size())),
            Lfp::Eq(a, b) => self.fo.atom(sp, &Formula::Eq(a.clone(), b.clone())),
            Lfp::Rel(r, args) => match env.iter().rev().find(|(s, _)| s == r) {
                Some((_, set)) => {
                    let idx = self.fo.tuple_indices(sp, args)?;
                    Ok(Bits::from_fn(sp.size(), |s| set.contains(idx[s])))
                }
                None => self.fo.atom(sp, &Formula::Rel(r.clone(), args.clone())),
            },
            Lfp::Not(a) => Ok(self.eval(a, env)?.complement()),
            Lfp::And(a, b) => Ok(self.eval(a, env)?.intersect(&self.eval(b, env)?)),
            Lfp::Exists(x, a) => {
                let inner = self.eval(a, env)?;
                self.fo.game(sp, QUANT, std::slice::from_ref(x), &[], &inner)
            }
            Lfp::Fix {
                rel,
                vars,
                body,
                args,
            } => {
                let n = sp.domain;
                let k = vars.len();
                let xs: Vec<usize> = vars.iter().map(|v| sp.index_of(v)).collect::<Result<_, _>>()?;
                let params: Vec<usize> = body
                    .free_vars()
                    .iter()
                    .filter(|v| !vars.contains(v))
                    .map(|v| sp.index_of(v))
                    .collect::<Result<_, _>>()?;
                let width = n.pow(k as u32);
                let tuple_offset = |u: usize| -> usize {
                    let mut rest = u;
                    let mut off = 0;
                    for &x in xs.iter().rev() {
                        off += (rest % n) * sp.stride(x);
                        rest /= n;
                    }
                    off
                };
                let offsets: Vec<usize> = (0..width).map(tuple_offset).collect();
                // One fixpoint per valuation of the parameters.
                let mut by_params: BTreeMap<usize, Bits> = BTreeMap::new();
                let combos = n.pow(params.len() as u32);
                for c in 0..combos {
                    let mut base = 0;
                    let mut rest = c;
                    for &p in params.iter().rev() {
                        base += (rest % n) * sp.stride(p);
                        rest /= n;
                    }
                    let mut err = None;
                    let a = lfp(width, |z| {
                        env.push((rel.clone(), z.clone()));
                        let r = self.eval(body, env);
                        env.pop();
                        match r {
                            Ok(b) => Bits::from_fn(width, |u| b.contains(base + offsets[u])),
                            Err(e) => {
                                err = Some(e);
                                z.clone()
                            }
                        }
                    });
                    if let Some(e) = err {
                        return Err(e);
                    }
                    by_params.insert(base, a);
                }
                let idx = self.fo.tuple_indices(sp, args)?;
                Ok(Bits::from_fn(sp.size(), |s| {
                    let base: usize = params.iter().map(|&p| sp.value(s, p) * sp.stride(p)).sum();
                    by_params[&base].contains(idx[s])
                }))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::eval_formula;

    fn muf(s: &str) -> Formula {
        parse_formula_infer(s, Logic::Mu).unwrap().0
    }

    fn vars(vs: &[&str]) -> Vec<String> {
        vs.iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn quantifier_becomes_exists() {
        let f = muf("mu X . (R(x) | <x := *> X)");
        let l = mu_to_lfp(&f, &vars(&["x"])).unwrap();
        assert_eq!(l.to_string(), "[lfp R_X, x . R(x) | exists x . R_X(x)](x)");
        assert_eq!(parse_lfp(&l.to_string(), None).unwrap(), l);
    }

    #[test]
    fn round_trip_preserves_meaning() {
        let st = Structure::new(2).unwrap().with_relation("R", 1, &[&[1]]).with_relation("E", 2, &[&[0, 1]]);
        for src in [
            "mu X . (R(x) | <x := *> X)",
            "mu X . (R(x) | <y := *> (E(x, y) & <x := y> X))",
            "!mu X . (R(y) | <x := *> <y := x> X)",
            "<x := y> R(x)",
        ] {
            let f = muf(src);
            let v = vars(&["x", "y"]);
            let l = mu_to_lfp(&f, &v).unwrap();
            let back = lfp_to_mu(&l).unwrap();
            let mut sup: Vec<String> = l.all_vars().into_iter().collect();
            for w in all_vars(&back) {
                if !sup.contains(&w) {
                    sup.push(w);
                }
            }
            let a = eval_formula(&st, &f, &sup).unwrap();
            assert_eq!(eval_lfp(&st, &l, &sup).unwrap(), a, "{l}");
            assert_eq!(eval_formula(&st, &back, &sup).unwrap(), a, "{back}");
        }
    }

    #[test]
    fn parameters_are_normalized() {
        let st = Structure::new(2).unwrap().with_relation("E", 2, &[&[0, 1], &[1, 1]]);
        let l = parse_lfp("[lfp T, x . x = y | exists z . (E(x, z) & T(z))](w)", None).unwrap();
        let m = lfp_to_mu(&l).unwrap();
        let sup = vars(&["w", "x", "y", "z"]);
        assert_eq!(eval_lfp(&st, &l, &sup).unwrap(), eval_formula(&st, &m, &sup).unwrap(), "{m}");
    }

    #[test]
    fn fixpoint_free_formula_is_unchanged() {
        let l = parse_lfp("R(x) & exists y . x != y", None).unwrap();
        assert_eq!(lfp_to_mu(&l).unwrap().to_string(), "R(x) & <y := *> x != y");
    }

    #[test]
    fn preconditions() {
        assert!(parse_lfp("[lfp T, x . !T(x)](x)", None).is_err());
        let twice = parse_lfp("[lfp T, x . T(x)](x) & [lfp T, x . T(x)](x)", None).unwrap();
        assert!(lfp_to_mu(&twice).is_err());
        let a = muf("<a(x:x)> R(x)");
        assert!(mu_to_lfp(&a, &vars(&["x"])).is_err());
        assert!(mu_to_lfp(&muf("R(z)"), &vars(&["x"])).is_err());
    }
}
