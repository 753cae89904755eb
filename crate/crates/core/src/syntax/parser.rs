//! Recursive-descent parser for the ASCII grammar.
//!
//! Sugar (`false`, `|`, `->`, `<->`, `!=`, `[g]`, `exists`, `forall`, `nu`,
//! `x := *`, vectorial assignment) is elaborated while parsing.

use super::ast::*;
use super::sig::GameSignature;
use super::SyntaxError;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBrack,
    RBrack,
    Comma,
    Colon,
    Assign,
    Dot,
    Semi,
    Choice,
    Star,
    DualMark,
    Question,
    Bang,
    And,
    Or,
    Arrow,
    DArrow,
    Eq,
    Neq,
    Eof,
}

pub(crate) fn lex(src: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: &str| SyntaxError::Parse {
        pos,
        msg: msg.to_string(),
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = |s: &str| src[i..].starts_with(s);
        let (tok, len) = if c.is_ascii_alphabetic() || c == b'_' {
            let mut j = i;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            (Tok::Ident(src[i..j].to_string()), j - i)
        } else if two("<->") {
            (Tok::DArrow, 3)
        } else if two("->") {
            (Tok::Arrow, 2)
        } else if two(":=") {
            (Tok::Assign, 2)
        } else if two("++") {
            (Tok::Choice, 2)
        } else if two("^d") {
            (Tok::DualMark, 2)
        } else if two("!=") {
            (Tok::Neq, 2)
        } else {
            let t = match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'<' => Tok::LAngle,
                b'>' => Tok::RAngle,
                b'[' => Tok::LBrack,
                b']' => Tok::RBrack,
                b',' => Tok::Comma,
                b':' => Tok::Colon,
                b'.' => Tok::Dot,
                b';' => Tok::Semi,
                b'*' => Tok::Star,
                b'?' => Tok::Question,
                b'!' => Tok::Bang,
                b'&' => Tok::And,
                b'|' => Tok::Or,
                b'=' => Tok::Eq,
                _ => return Err(err(start, &format!("unexpected character `{}`", c as char))),
            };
            (t, 1)
        };
        out.push((tok, start));
        i += len;
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

const KEYWORDS: &[&str] = &["true", "false", "mu", "nu", "exists", "forall"];

fn is_fixvar_name(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

/// What to parse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    GlFormula,
    MuFormula,
    Game,
    Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Formula(Formula),
    Game(Game),
    Term(Term),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: Option<&'a GameSignature>,
    logic: Logic,
}

type PResult<T> = Result<T, SyntaxError>;

impl<'a> Parser<'a> {
    fn new(src: &str, sig: Option<&'a GameSignature>, logic: Logic) -> PResult<Self> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            sig,
            logic,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
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
            pos: self.offset(),
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

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            other => self.fail(format!("expected {what}, found {other:?}")),
        }
    }

    fn var(&mut self) -> PResult<String> {
        let at = self.offset();
        let v = self.ident("variable")?;
        if is_fixvar_name(&v) {
            return Err(SyntaxError::Parse {
                pos: at,
                msg: format!("individual variable `{v}` must start with a lowercase letter"),
            });
        }
        Ok(v)
    }

    fn var_list(&mut self) -> PResult<Vec<String>> {
        let mut out = vec![self.var()?];
        while self.eat(&Tok::Comma) {
            out.push(self.var()?);
        }
        Ok(out)
    }

    fn finish(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.fail(format!("unexpected trailing {:?}", self.peek()))
        }
    }

    // formulas

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.implication()?;
        if self.eat(&Tok::DArrow) {
            let rhs = self.implication()?;
            return Ok(iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let lhs = self.conjunction()?;
        if self.eat(&Tok::Or) {
            let rhs = self.disjunction()?;
            return Ok(or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let lhs = self.unary()?;
        if self.eat(&Tok::And) {
            let rhs = self.conjunction()?;
            return Ok(and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(not(self.unary()?))
            }
            Tok::LAngle => {
                self.bump();
                let g = self.game()?;
                self.expect(Tok::RAngle, "`>`")?;
                let body = self.unary()?;
                Ok(self.diamond(g, body))
            }
            Tok::LBrack => {
                self.bump();
                let g = self.game()?;
                self.expect(Tok::RBrack, "`]`")?;
                let body = self.unary()?;
                Ok(not(self.diamond(g, not(body))))
            }
            Tok::Ident(kw) if kw == "mu" || kw == "nu" => {
                self.bump();
                let at = self.offset();
                let x = self.ident("fixpoint variable")?;
                if !is_fixvar_name(&x) {
                    return Err(SyntaxError::Parse {
                        pos: at,
                        msg: format!("fixpoint variable `{x}` must start with an uppercase letter"),
                    });
                }
                self.expect(Tok::Dot, "`.`")?;
                let body = self.unary()?;
                Ok(if kw == "mu" { mu(&x, body) } else { nu(&x, body) })
            }
            Tok::Ident(kw) if kw == "exists" || kw == "forall" => {
                self.bump();
                let xs = self.var_list()?;
                self.expect(Tok::Dot, "`.`")?;
                let body = self.unary()?;
                Ok(if kw == "exists" {
                    xs.iter().rev().fold(body, |acc, x| exists(x, acc))
                } else {
                    xs.iter().rev().fold(body, |acc, x| forall(x, acc))
                })
            }
            _ => self.primary(),
        }
    }

    /// Builds ⟨g⟩body. In FOLμ sequences of atomic games become nested
    /// modalities so that vectorial quantifiers stay within the logic.
    fn diamond(&self, g: Game, body: Formula) -> Formula {
        if self.logic == Logic::Mu {
            if let Game::Seq(a, b) = g {
                let inner = self.diamond(*b, body);
                return self.diamond(*a, inner);
            }
        }
        dia(g, body)
    }

    fn primary(&mut self) -> PResult<Formula> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(kw) if kw == "true" => {
                self.bump();
                Ok(tt())
            }
            Tok::Ident(kw) if kw == "false" => {
                self.bump();
                Ok(ff())
            }
            Tok::Ident(name)
                if is_fixvar_name(&name)
                    && !matches!(self.peek_at(1), Tok::LParen | Tok::Eq | Tok::Neq)
                    && !self.is_nullary_relation(&name) =>
            {
                self.bump();
                Ok(fixvar(&name))
            }
            _ => self.atom(),
        }
    }

    fn is_nullary_relation(&self, name: &str) -> bool {
        self.sig
            .is_some_and(|s| s.relations.get(name).copied() == Some(0))
    }

    fn atom(&mut self) -> PResult<Formula> {
        let at = self.offset();
        let lhs = self.term()?;
        if self.eat(&Tok::Eq) {
            return Ok(eq(lhs, self.term()?));
        }
        if self.eat(&Tok::Neq) {
            return Ok(not(eq(lhs, self.term()?)));
        }
        match lhs {
            Term::App(r, args) => Ok(Formula::Rel(r, args)),
            Term::Var(v) if self.is_nullary_relation(&v) => Ok(Formula::Rel(v, vec![])),
            Term::Var(v) => Err(SyntaxError::Parse {
                pos: at,
                msg: format!("expected a formula, found term `{v}`"),
            }),
        }
    }

    // terms

    fn term(&mut self) -> PResult<Term> {
        let name = self.ident("term")?;
        if self.eat(&Tok::LParen) {
            let mut args = Vec::new();
            if !self.eat(&Tok::RParen) {
                args.push(self.term()?);
                while self.eat(&Tok::Comma) {
                    args.push(self.term()?);
                }
                self.expect(Tok::RParen, "`)`")?;
            }
            return Ok(Term::App(name, args));
        }
        let is_const = self
            .sig
            .is_some_and(|s| s.functions.get(&name).copied() == Some(0));
        Ok(if is_const {
            Term::App(name, vec![])
        } else {
            Term::Var(name)
        })
    }

    fn term_list(&mut self) -> PResult<Vec<Term>> {
        let mut out = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            out.push(self.term()?);
        }
        Ok(out)
    }

    // games

    fn game(&mut self) -> PResult<Game> {
        let lhs = self.sequence()?;
        if self.eat(&Tok::Choice) {
            let rhs = self.game()?;
            return Ok(choice(lhs, rhs));
        }
        Ok(lhs)
    }

    fn sequence(&mut self) -> PResult<Game> {
        let lhs = self.postfix()?;
        if self.eat(&Tok::Semi) {
            let rhs = self.sequence()?;
            return Ok(seq(lhs, rhs));
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> PResult<Game> {
        let mut g = self.game_primary()?;
        loop {
            if self.eat(&Tok::Star) {
                g = star(g);
            } else if self.eat(&Tok::DualMark) {
                g = dual(g);
            } else {
                return Ok(g);
            }
        }
    }

    fn game_primary(&mut self) -> PResult<Game> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let g = self.game()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(g)
            }
            Tok::Question => {
                self.bump();
                Ok(test(self.unary()?))
            }
            Tok::Star => {
                self.bump();
                self.atomic_args(QUANT.to_string())
            }
            Tok::Ident(_) if matches!(self.peek_at(1), Tok::Comma | Tok::Assign) => {
                self.assignment()
            }
            Tok::Ident(_) if *self.peek_at(1) == Tok::LParen => {
                let name = self.ident("action symbol")?;
                self.atomic_args(name)
            }
            other => self.fail(format!("expected a game, found {other:?}")),
        }
    }

    fn atomic_args(&mut self, action: String) -> PResult<Game> {
        self.expect(Tok::LParen, "`(`")?;
        if self.eat(&Tok::RParen) {
            return Ok(Game::Atomic {
                action,
                bound: vec![],
                params: vec![],
            });
        }
        let bound = if *self.peek() == Tok::Colon {
            vec![]
        } else {
            self.var_list()?
        };
        self.expect(Tok::Colon, "`:` separating bound variables from parameters")?;
        let params = if *self.peek() == Tok::RParen {
            vec![]
        } else {
            self.term_list()?
        };
        self.expect(Tok::RParen, "`)`")?;
        Ok(Game::Atomic {
            action,
            bound,
            params,
        })
    }

    fn assignment(&mut self) -> PResult<Game> {
        let at = self.offset();
        let xs = self.var_list()?;
        self.expect(Tok::Assign, "`:=`")?;
        if self.eat(&Tok::Star) {
            let quants = xs.iter().map(|x| quant(x)).collect();
            return Ok(big_seq(quants).expect("non-empty variable list"));
        }
        let ts = self.term_list()?;
        if ts.len() != xs.len() {
            return Err(SyntaxError::Parse {
                pos: at,
                msg: format!(
                    "assignment of {} terms to {} variables",
                    ts.len(),
                    xs.len()
                ),
            });
        }
        Ok(assign_vec(xs, ts))
    }
}

fn run<T>(
    src: &str,
    sig: Option<&GameSignature>,
    logic: Logic,
    f: impl FnOnce(&mut Parser) -> PResult<T>,
) -> PResult<T> {
    let mut p = Parser::new(src, sig, logic)?;
    let out = f(&mut p)?;
    p.finish()?;
    Ok(out)
}

/// Parses and validates a formula against a fixed signature.
pub fn parse_formula(src: &str, logic: Logic, sig: &GameSignature) -> PResult<Formula> {
    let f = run(src, Some(sig), logic, |p| p.formula())?;
    super::validate(&f, logic, sig)?;
    Ok(f)
}

/// Parses a formula, inferring its signature from symbol usage.
pub fn parse_formula_infer(src: &str, logic: Logic) -> PResult<(Formula, GameSignature)> {
    let f = run(src, None, logic, |p| p.formula())?;
    let sig = GameSignature::of_formula(&f)?;
    super::validate(&f, logic, &sig)?;
    Ok((f, sig))
}

pub fn parse_game(src: &str, sig: &GameSignature) -> PResult<Game> {
    let g = run(src, Some(sig), Logic::Gl, |p| p.game())?;
    super::check_logic(&dia(g.clone(), tt()), Logic::Gl)?;
    super::check_signature_game(&g, sig)?;
    super::check_positivity(&dia(g.clone(), tt()))?;
    Ok(g)
}

pub fn parse_term(src: &str, sig: &GameSignature) -> PResult<Term> {
    let t = run(src, Some(sig), Logic::Gl, |p| p.term())?;
    super::check_term(&t, sig)?;
    Ok(t)
}

/// Parses `src` as the given kind. With `sig = None` the signature is
/// inferred and only arity consistency is checked.
pub fn parse(src: &str, kind: Kind, sig: Option<&GameSignature>) -> PResult<Parsed> {
    match (kind, sig) {
        (Kind::GlFormula | Kind::MuFormula, _) => {
            let logic = if kind == Kind::GlFormula {
                Logic::Gl
            } else {
                Logic::Mu
            };
            match sig {
                Some(s) => parse_formula(src, logic, s).map(Parsed::Formula),
                None => parse_formula_infer(src, logic).map(|(f, _)| Parsed::Formula(f)),
            }
        }
        (Kind::Game, Some(s)) => parse_game(src, s).map(Parsed::Game),
        (Kind::Game, None) => {
            let g = run(src, None, Logic::Gl, |p| p.game())?;
            let sig = GameSignature::of_formula(&dia(g.clone(), tt()))?;
            parse_game(src, &sig).map(Parsed::Game)
        }
        (Kind::Term, Some(s)) => parse_term(src, s).map(Parsed::Term),
        (Kind::Term, None) => run(src, None, Logic::Gl, |p| p.term()).map(Parsed::Term),
    }
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
    fn quantifier_sugar() {
        assert_eq!(gl("<x := *> R(x)"), dia(quant("x"), rel("R", vec![Term::var("x")])));
        assert_eq!(gl("exists x . R(x)"), gl("<*(x:)> R(x)"));
    }

    #[test]
    fn disjunction_desugars() {
        let f = muf("mu X . (R(x) | < *(x:) > X)");
        let expected = mu(
            "X",
            not(and(
                not(rel("R", vec![Term::var("x")])),
                not(dia(quant("x"), fixvar("X"))),
            )),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn positivity_violation() {
        let err = parse_formula_infer("mu X . !X", Logic::Mu).unwrap_err();
        assert!(matches!(err, SyntaxError::Positivity { .. }), "{err:?}");
        assert!(parse_formula_infer("mu X . !!X", Logic::Mu).is_ok());
        assert!(parse_formula_infer("nu X . X", Logic::Mu).is_ok());
    }

    #[test]
    fn logic_separation() {
        assert!(parse_formula_infer("<a(x:) ; b(y:)> R(x)", Logic::Gl).is_ok());
        assert!(matches!(
            parse_formula_infer("<a(x:) ++ b(y:)> R(x)", Logic::Mu),
            Err(SyntaxError::Logic { .. })
        ));
        assert!(matches!(
            parse_formula_infer("mu X . X", Logic::Gl),
            Err(SyntaxError::Logic { .. })
        ));
        // vectorial quantifiers nest in the mu-calculus
        assert_eq!(muf("exists x, y . x = y"), muf("<x := *> <y := *> x = y"));
        assert_eq!(muf("<x, y := *> x = y"), muf("<x := *> <y := *> x = y"));
    }

    #[test]
    fn arity_and_unknown_symbols() {
        let mut sig = GameSignature::new();
        sig.add_relation("R", 1).unwrap();
        sig.add_action("a", 1, 1).unwrap();
        assert!(parse_formula("<a(x:x)> R(x)", Logic::Gl, &sig).is_ok());
        assert!(matches!(
            parse_formula("R(x, y)", Logic::Gl, &sig),
            Err(SyntaxError::Arity { .. })
        ));
        assert!(matches!(
            parse_formula("S(x)", Logic::Gl, &sig),
            Err(SyntaxError::UnknownSymbol(_))
        ));
        assert!(matches!(
            parse_formula("<a(x:)> R(x)", Logic::Gl, &sig),
            Err(SyntaxError::Arity { .. })
        ));
        assert!(matches!(
            parse_formula_infer("R(x) & R(x, y)", Logic::Gl),
            Err(SyntaxError::Signature(_))
        ));
    }

    #[test]
    fn constants_from_signature() {
        let mut sig = GameSignature::new();
        sig.add_function("c", 0).unwrap();
        sig.add_relation("R", 1).unwrap();
        let f = parse_formula("R(c) & R(c())", Logic::Gl, &sig).unwrap();
        let c = Term::app("c", vec![]);
        assert_eq!(f, and(rel("R", vec![c.clone()]), rel("R", vec![c])));
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_formula_infer("R(x) & & R(y)", Logic::Gl) {
            Err(SyntaxError::Parse { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
        assert!(parse_formula_infer("R(x) )", Logic::Gl).is_err());
        assert!(parse_formula_infer("<a(x y)> true", Logic::Gl).is_err());
    }

    #[test]
    fn game_precedence() {
        let sig = GameSignature::of_formula(&gl("<a(x:) ; b(x:) ++ c(x:)> true")).unwrap();
        let g = parse_game("a(x:) ; b(x:)* ++ c(x:)^d", &sig).unwrap();
        let a = atomic("a", &["x"], vec![]);
        let b = atomic("b", &["x"], vec![]);
        let c = atomic("c", &["x"], vec![]);
        assert_eq!(g, choice(seq(a, star(b)), dual(c)));
    }

    #[test]
    fn assignments() {
        let f = gl("<x, y := y, x> R(x)");
        assert_eq!(
            f,
            dia(
                assign_vec(vec!["x".into(), "y".into()], vec![Term::var("y"), Term::var("x")]),
                rel("R", vec![Term::var("x")])
            )
        );
        assert!(parse_formula_infer("<x, y := y> R(x)", Logic::Gl).is_err());
    }
}
