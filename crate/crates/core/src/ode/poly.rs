//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::OdeError;

/// A monomial as sorted `(variable, exponent)` pairs with positive exponents.
pub type Monomial = Vec<(String, u32)>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut m: BTreeMap<String, u32> = a.iter().cloned().collect();
    for (v, e) in b {
        *m.entry(v.clone()).or_insert(0) += e;
    }
    m.into_iter().collect()
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact value of a finite float.
pub fn rat_f64(x: f64) -> Result<BigRational, OdeError> {
    BigRational::from_float(x).ok_or_else(|| OdeError::Input(format!("{x} is not a finite number")))
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: BigRational) -> Poly {
        let mut p = Poly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(v: &str) -> Poly {
        let mut p = Poly::zero();
        p.add_term(vec![(v.to_string(), 1)], BigRational::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v.clone()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                p.add_term(mono_mul(m1, m2), c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::constant(BigRational::one()), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        let mut p = Poly::zero();
        for (m, k) in &self.terms {
            p.add_term(m.clone(), k * c);
        }
        p
    }

    /// Partial derivative with respect to `v`.
    pub fn derivative(&self, v: &str) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            if let Some(pos) = m.iter().position(|(w, _)| w == v) {
                let e = m[pos].1;
                let mut m2 = m.clone();
                if e == 1 {
                    m2.remove(pos);
                } else {
                    m2[pos].1 = e - 1;
                }
                p.add_term(m2, c * rat(e as i64));
            }
        }
        p
    }

    pub fn eval(&self, env: &BTreeMap<String, BigRational>) -> Result<BigRational, OdeError> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m {
                let x = env
                    .get(v)
                    .ok_or_else(|| OdeError::Input(format!("no value for `{v}`")))?;
                term *= num_traits::pow(x.clone(), *e as usize);
            }
            total += term;
        }
        Ok(total)
    }

    pub fn eval_f64(&self, env: &BTreeMap<String, f64>) -> Result<f64, OdeError> {
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut term = to_f64(c);
            for (v, e) in m {
                let x = env
                    .get(v)
                    .ok_or_else(|| OdeError::Input(format!("no value for `{v}`")))?;
                term *= x.powi(*e as i32);
            }
            total += term;
        }
        Ok(total)
    }

    /// `Σ |c|·K^deg`, an upper bound of `|p|` on the box `|u|∞ ≤ K`.
    pub fn coefficient_bound(&self, k: &BigRational) -> BigRational {
        self.terms
            .iter()
            .map(|(m, c)| {
                let deg: u32 = m.iter().map(|(_, e)| e).sum();
                c.abs() * num_traits::pow(k.clone(), deg as usize)
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Replaces variables by polynomials.
    pub fn substitute(&self, map: &BTreeMap<String, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for (v, e) in m {
                let base = map.get(v).cloned().unwrap_or_else(|| Poly::var(v));
                term = term.mul(&base.pow(*e));
            }
            out = out.add(&term);
        }
        out
    }

    pub fn parse(src: &str) -> Result<Poly, OdeError> {
        let toks = tokenize(src)?;
        let mut p = PolyParser { toks, pos: 0 };
        let e = p.sum()?;
        if p.pos != p.toks.len() {
            return Err(OdeError::Input(format!("trailing input in polynomial `{src}`")));
        }
        Ok(e)
    }
}

fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest degree first.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| std::cmp::Reverse(m.iter().map(|(_, e)| *e).sum::<u32>()));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            let factors: Vec<String> = m
                .iter()
                .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if m.is_empty() {
                f.write_str(&fmt_rat(&a))?;
            } else if a.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rat(&a), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum PTok {
    Num(BigRational),
    Ident(String),
    Op(char),
}

fn parse_decimal(s: &str) -> Result<BigRational, OdeError> {
    let bad = || OdeError::Input(format!("bad number `{s}`"));
    let (int, frac) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(n, d))
}

fn tokenize(src: &str) -> Result<Vec<PTok>, OdeError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(PTok::Num(parse_decimal(&s)?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(PTok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(PTok::Op(c));
            i += 1;
        } else {
            return Err(OdeError::Input(format!("unexpected `{c}` in polynomial `{src}`")));
        }
    }
    Ok(out)
}

struct PolyParser {
    toks: Vec<PTok>,
    pos: usize,
}

impl PolyParser {
    fn peek_op(&self, c: char) -> bool {
        self.toks.get(self.pos) == Some(&PTok::Op(c))
    }

    fn sum(&mut self) -> Result<Poly, OdeError> {
        let mut acc = self.product()?;
        loop {
            if self.peek_op('+') {
                self.pos += 1;
                acc = acc.add(&self.product()?);
            } else if self.peek_op('-') {
                self.pos += 1;
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Poly, OdeError> {
        let mut acc = self.unary()?;
        loop {
            if self.peek_op('*') {
                self.pos += 1;
                acc = acc.mul(&self.unary()?);
            } else if self.peek_op('/') {
                self.pos += 1;
                let d = self.unary()?;
                let c = match d.terms.len() {
                    1 => d.terms.get(&Vec::new()).cloned(),
                    _ => None,
                };
                match c {
                    Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                    _ => return Err(OdeError::Input("division by a non-constant or zero".into())),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, OdeError> {
        if self.peek_op('-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        if self.peek_op('+') {
            self.pos += 1;
            return self.unary();
        }
        let base = self.atom()?;
        if self.peek_op('^') {
            self.pos += 1;
            match self.toks.get(self.pos) {
                Some(PTok::Num(n)) if n.is_integer() && !n.is_negative() => {
                    let e = n.to_integer().to_u32().ok_or_else(|| OdeError::Input("exponent too large".into()))?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(OdeError::Input("exponent must be a natural number".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, OdeError> {
        match self.toks.get(self.pos).cloned() {
            Some(PTok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(n))
            }
            Some(PTok::Ident(v)) => {
                self.pos += 1;
                Ok(Poly::var(&v))
            }
            Some(PTok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.peek_op(')') {
                    return Err(OdeError::Input("expected `)`".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            other => Err(OdeError::Input(format!("unexpected {other:?} in polynomial"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let p = Poly::parse("-1*x1 + 2*x2^2 - 0.5").unwrap();
        assert_eq!(p.to_string(), "2*x2^2 - x1 - 1/2");
        assert_eq!(Poly::parse(&p.to_string()).unwrap(), p);
        assert_eq!(Poly::parse("(x + 1)^2 - x^2 - 2*x").unwrap().to_string(), "1");
        assert!(Poly::parse("x / y").is_err());
    }

    #[test]
    fn derivative_and_eval() {
        let p = Poly::parse("x^3 * y + y").unwrap();
        assert_eq!(p.derivative("x").to_string(), "3*x^2*y");
        let env = BTreeMap::from([("x".to_string(), rat(2)), ("y".to_string(), rat(3))]);
        assert_eq!(p.eval(&env).unwrap(), rat(27));
    }
}
