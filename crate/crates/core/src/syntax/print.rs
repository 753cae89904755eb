//! Canonical printer. Output re-parses to the identical tree.

use std::fmt::{self, Display, Formatter, Write};

use super::ast::*;

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                f.write_char(')')
            }
        }
    }
}

fn write_list<T: Display>(f: &mut Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, t) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

// Formula precedence levels: 1 implication, 2 disjunction, 3 conjunction,
// 4 prefix operators and atoms.
const F_IMP: u8 = 1;
const F_OR: u8 = 2;
const F_AND: u8 = 3;
const F_UNARY: u8 = 4;

// Game precedence levels: 0 choice, 1 sequence, 2 postfix.
const G_CHOICE: u8 = 0;
const G_SEQ: u8 = 1;
const G_POST: u8 = 2;

fn formula_level(phi: &Formula) -> u8 {
    match phi {
        Formula::And(..) => F_AND,
        Formula::Not(_) if phi.as_or().is_some() => F_OR,
        Formula::Not(_) if phi.as_implies().is_some() => F_IMP,
        _ => F_UNARY,
    }
}

fn write_formula(f: &mut Formatter<'_>, phi: &Formula, ctx: u8) -> fmt::Result {
    let level = formula_level(phi);
    if level < ctx {
        f.write_char('(')?;
        write_formula(f, phi, 0)?;
        return f.write_char(')');
    }
    match phi {
        Formula::True => f.write_str("true"),
        Formula::Eq(a, b) => write!(f, "{a} = {b}"),
        Formula::Rel(r, args) => {
            write!(f, "{r}(")?;
            write_list(f, args)?;
            f.write_char(')')
        }
        Formula::FixVar(x) => f.write_str(x),
        Formula::And(a, b) => {
            write_formula(f, a, F_UNARY)?;
            f.write_str(" & ")?;
            write_formula(f, b, F_AND)
        }
        Formula::Not(inner) => {
            if let Some((a, b)) = phi.as_or() {
                write_formula(f, a, F_AND)?;
                f.write_str(" | ")?;
                return write_formula(f, b, F_OR);
            }
            if let Some((a, b)) = phi.as_implies() {
                write_formula(f, a, F_OR)?;
                f.write_str(" -> ")?;
                return write_formula(f, b, F_IMP);
            }
            match inner.as_ref() {
                Formula::True => f.write_str("false"),
                Formula::Eq(a, b) => write!(f, "{a} != {b}"),
                Formula::Dia(g, body) => match body.as_ref() {
                    Formula::Not(b) => {
                        f.write_char('[')?;
                        write_game(f, g, G_CHOICE)?;
                        f.write_str("] ")?;
                        write_formula(f, b, F_UNARY)
                    }
                    _ => {
                        f.write_char('!')?;
                        write_formula(f, inner, F_UNARY)
                    }
                },
                _ => {
                    f.write_char('!')?;
                    write_formula(f, inner, F_UNARY)
                }
            }
        }
        Formula::Dia(g, body) => {
            f.write_char('<')?;
            write_game(f, g, G_CHOICE)?;
            f.write_str("> ")?;
            write_formula(f, body, F_UNARY)
        }
        Formula::Mu(x, body) => {
            write!(f, "mu {x} . ")?;
            write_formula(f, body, F_UNARY)
        }
    }
}

fn game_level(g: &Game) -> u8 {
    match g {
        Game::Choice(..) => G_CHOICE,
        Game::Seq(..) => G_SEQ,
        _ => G_POST,
    }
}

fn write_game(f: &mut Formatter<'_>, g: &Game, ctx: u8) -> fmt::Result {
    if game_level(g) < ctx {
        f.write_char('(')?;
        write_game(f, g, G_CHOICE)?;
        return f.write_char(')');
    }
    match g {
        Game::Atomic {
            action,
            bound,
            params,
        } => {
            if action == ASSIGN {
                write_list(f, bound)?;
                f.write_str(" := ")?;
                return write_list(f, params);
            }
            if action == QUANT && bound.len() == 1 && params.is_empty() {
                return write!(f, "{} := *", bound[0]);
            }
            write!(f, "{action}(")?;
            if !(bound.is_empty() && params.is_empty()) {
                write_list(f, bound)?;
                f.write_char(':')?;
                write_list(f, params)?;
            }
            f.write_char(')')
        }
        Game::Test(phi) => {
            f.write_char('?')?;
            write_formula(f, phi, F_UNARY)
        }
        Game::Choice(a, b) => {
            write_game(f, a, G_SEQ)?;
            f.write_str(" ++ ")?;
            write_game(f, b, G_CHOICE)
        }
        Game::Seq(a, b) => {
            write_game(f, a, G_POST)?;
            f.write_str(" ; ")?;
            write_game(f, b, G_SEQ)
        }
        Game::Star(a) => {
            write_postfix_operand(f, a)?;
            f.write_char('*')
        }
        Game::Dual(a) => {
            write_postfix_operand(f, a)?;
            f.write_str("^d")
        }
    }
}

/// Assignments print in infix form, so they are bracketed under `*` and `^d`.
fn write_postfix_operand(f: &mut Formatter<'_>, g: &Game) -> fmt::Result {
    let infix = match g {
        Game::Atomic { action, bound, params } => {
            action == ASSIGN || (action == QUANT && bound.len() == 1 && params.is_empty())
        }
        _ => false,
    };
    if infix {
        f.write_char('(')?;
        write_game(f, g, G_CHOICE)?;
        f.write_char(')')
    } else {
        write_game(f, g, G_POST)
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0)
    }
}

impl Display for Game {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_game(f, self, G_CHOICE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parser::parse_formula_infer;

    fn roundtrip(s: &str, logic: Logic) -> String {
        let (f, _) = parse_formula_infer(s, logic).unwrap();
        let printed = f.to_string();
        let (g, _) = parse_formula_infer(&printed, logic).unwrap();
        assert_eq!(f, g, "{printed}");
        printed
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(
            roundtrip("mu X . (R(x) | <a(x:x)> X)", Logic::Mu),
            "mu X . (R(x) | <a(x:x)> X)"
        );
        assert_eq!(roundtrip("[x := *] R(x)", Logic::Gl), "[x := *] R(x)");
        assert_eq!(roundtrip("(p() & q()) & r()", Logic::Gl), "(p() & q()) & r()");
        assert_eq!(roundtrip("p() -> q() -> r()", Logic::Gl), "p() -> q() -> r()");
        assert_eq!(roundtrip("(p() -> q()) -> r()", Logic::Gl), "p() & !q() | r()");
        assert_eq!(roundtrip("false | x != y", Logic::Gl), "false | x != y");
        assert_eq!(roundtrip("<(a(x:) ++ b())* ; c(: x)^d> true", Logic::Gl), "<(a(x:) ++ b())* ; c(:x)^d> true");
        assert_eq!(roundtrip("<?R(x) ; ?!x = y> true", Logic::Gl), "<?R(x) ; ?x != y> true");
        assert_eq!(roundtrip("<(a() ; b())*> true", Logic::Gl), "<(a() ; b())*> true");
        assert_eq!(roundtrip("<(x := *)* ; (y := f(x))^d> true", Logic::Gl), "<(x := *)* ; (y := f(x))^d> true");
    }

    #[test]
    fn nested_negations_roundtrip() {
        roundtrip("!(!p() & !!q())", Logic::Gl);
        roundtrip("!(p() & !(q() & !r()))", Logic::Gl);
        roundtrip("!<a(x:)> !!R(x)", Logic::Gl);
        roundtrip("!!mu X . X", Logic::Mu);
    }
}
