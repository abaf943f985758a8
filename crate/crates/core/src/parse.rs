//! Recursive-descent parser for the formula grammar.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::rational::Rational;
use crate::syntax::{Atom, DefinableSet, Formula, Rel, Term, Var};
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(BigInt),
    Slash,
    Star,
    Plus,
    Minus,
    LParen,
    RParen,
    Dot,
    Rel(Rel),
    Eof,
}

const KEYWORDS: [&str; 9] = ["exists", "forall", "not", "and", "or", "true", "false", "floor", "int"];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, Error> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Ident(text[start..i].to_string())
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Num(text[start..i].parse().expect("digits"))
        } else {
            let two = text.get(i..i + 2).unwrap_or("");
            let (t, w) = match two {
                "<=" => (Tok::Rel(Rel::Le), 2),
                ">=" => (Tok::Rel(Rel::Ge), 2),
                "!=" => (Tok::Rel(Rel::Ne), 2),
                _ => match c {
                    '<' => (Tok::Rel(Rel::Lt), 1),
                    '>' => (Tok::Rel(Rel::Gt), 1),
                    '=' => (Tok::Rel(Rel::Eq), 1),
                    '/' => (Tok::Slash, 1),
                    '*' => (Tok::Star, 1),
                    '+' => (Tok::Plus, 1),
                    '-' => (Tok::Minus, 1),
                    '(' => (Tok::LParen, 1),
                    ')' => (Tok::RParen, 1),
                    '.' => (Tok::Dot, 1),
                    _ => {
                        return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{c}`") })
                    }
                },
            };
            i += w;
            t
        };
        out.push((tok, start));
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

type PResult<T> = Result<T, Error>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(Error::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        if self.is_kw("exists") || self.is_kw("forall") {
            return self.quantified();
        }
        let mut parts = vec![self.conj()?];
        while self.is_kw("or") {
            self.bump();
            parts.push(self.conj()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn quantified(&mut self) -> PResult<Formula> {
        let exists = self.is_kw("exists");
        self.bump();
        let v = match self.bump() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => Var::new(&s),
            _ => {
                self.at -= 1;
                return self.err("expected a variable after quantifier");
            }
        };
        self.expect(Tok::Dot, "`.`")?;
        let body = self.formula()?;
        Ok(if exists { Formula::exists(v, body) } else { Formula::forall(v, body) })
    }

    fn conj(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.neg()?];
        while self.is_kw("and") {
            self.bump();
            parts.push(self.neg()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn neg(&mut self) -> PResult<Formula> {
        if self.is_kw("not") {
            self.bump();
            return Ok(Formula::not(self.neg()?));
        }
        if self.is_kw("true") {
            self.bump();
            return Ok(Formula::True);
        }
        if self.is_kw("false") {
            self.bump();
            return Ok(Formula::False);
        }
        if self.is_kw("exists") || self.is_kw("forall") {
            return self.quantified();
        }
        if *self.peek() == Tok::LParen {
            let save = self.at;
            match self.atom() {
                Ok(a) => return Ok(Formula::Atom(a)),
                Err(atom_err) => {
                    self.at = save;
                    self.bump();
                    let f = match self.formula() {
                        Ok(f) => f,
                        Err(e) => return Err(furthest(atom_err, e)),
                    };
                    if *self.peek() != Tok::RParen {
                        let e = Error::Syntax { pos: self.pos(), msg: "expected `)`".into() };
                        return Err(furthest(atom_err, e));
                    }
                    self.bump();
                    return Ok(f);
                }
            }
        }
        Ok(Formula::Atom(self.atom()?))
    }

    fn atom(&mut self) -> PResult<Atom> {
        if self.is_kw("int") {
            self.bump();
            self.expect(Tok::LParen, "`(` after int")?;
            let t = self.term()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(Atom::int(t));
        }
        let lhs = self.term()?;
        let rel = match self.peek() {
            Tok::Rel(r) => *r,
            _ => return self.err("expected a relation"),
        };
        self.bump();
        let rhs = self.term()?;
        Ok(Atom::new(lhs, rel, rhs))
    }

    fn term(&mut self) -> PResult<Term> {
        let mut acc = if *self.peek() == Tok::Minus {
            self.bump();
            Term::scale(-Rational::one(), self.prod()?)
        } else {
            self.prod()?
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = Term::sum(acc, self.prod()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = Term::sum(acc, Term::scale(-Rational::one(), self.prod()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    /// `[rational "*"] factor`, optionally followed by `"/" integer`.
    fn prod(&mut self) -> PResult<Term> {
        let t = if let Tok::Num(_) = self.peek() {
            let r = self.rational()?;
            if *self.peek() == Tok::Star {
                self.bump();
                Term::scale(r, self.factor()?)
            } else {
                return Ok(Term::Const(r));
            }
        } else {
            self.factor()?
        };
        if *self.peek() == Tok::Slash {
            self.bump();
            let den = match self.peek() {
                Tok::Num(d) if *d != BigInt::from(0) => d.clone(),
                _ => return self.err("expected a positive denominator"),
            };
            self.bump();
            return Ok(Term::scale(Rational::from_bigints(BigInt::from(1), den), t));
        }
        Ok(t)
    }

    fn rational(&mut self) -> PResult<Rational> {
        let num = match self.bump() {
            Tok::Num(n) => n,
            _ => unreachable!("caller checked"),
        };
        if *self.peek() == Tok::Slash {
            self.bump();
            let den = match self.peek() {
                Tok::Num(d) if *d != BigInt::from(0) => d.clone(),
                _ => return self.err("expected a positive denominator"),
            };
            self.bump();
            return Ok(Rational::from_bigints(num, den));
        }
        Ok(Rational::from_bigints(num, BigInt::from(1)))
    }

    fn factor(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Num(_) => Ok(Term::Const(self.rational()?)),
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::Ident(s) if s == "floor" => {
                self.bump();
                self.expect(Tok::LParen, "`(` after floor")?;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Term::floor(t))
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(Term::Var(Var::new(&s)))
            }
            _ => self.err("expected a term"),
        }
    }
}

fn furthest(a: Error, b: Error) -> Error {
    match (&a, &b) {
        (Error::Syntax { pos: pa, .. }, Error::Syntax { pos: pb, .. }) if pa > pb => a,
        _ => b,
    }
}

/// Parses a formula without checking its free names.
pub fn parse_formula(text: &str) -> Result<Formula, Error> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

/// Parses a term.
pub fn parse_term(text: &str) -> Result<Term, Error> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.err("unexpected trailing input");
    }
    Ok(t)
}

/// Parses `text` as a definable set over `vars` with parameter symbols `params`.
pub fn parse(text: &str, vars: &[&str], params: &[&str]) -> Result<DefinableSet, Error> {
    let f = parse_formula(text)?;
    DefinableSet::new(
        f,
        vars.iter().map(|v| Var::new(v)).collect(),
        params.iter().map(|v| Var::new(v)).collect::<BTreeSet<_>>(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers() {
        let s = parse("floor(x) = x", &["x"], &[]).unwrap();
        assert_eq!(s.formula.to_string(), "int(x)");
    }

    #[test]
    fn quantified_and_params() {
        let s = parse("exists y . y = x + 1/2 and y > 0", &["x"], &[]).unwrap();
        assert!(!s.formula.is_quantifier_free());
        let p = parse("x = alpha + 3/2", &["x"], &["alpha"]).unwrap();
        assert_eq!(p.params.len(), 1);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("x < ", &["x"], &[]), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse("x < y", &["x"], &[]), Err(Error::Undeclared(v)) if v == "y"));
        assert!(matches!(parse("x < 1/0", &["x"], &[]), Err(Error::Syntax { .. })));
    }

    #[test]
    fn parenthesized_terms_and_formulas() {
        let a = parse_formula("(x + 1) < 2").unwrap();
        assert!(matches!(a, Formula::Atom(_)));
        let b = parse_formula("(x < 1 or x > 2) and not (x = 3)").unwrap();
        assert!(matches!(b, Formula::And(_)));
        let c = parse_formula("-2*(x - y) + floor(1/2*x) >= -3").unwrap();
        assert!(matches!(c, Formula::Atom(_)));
    }

    #[test]
    fn binders_are_renamed_away_from_free_names() {
        let s = parse("x > 0 and exists x . x < 0", &["x"], &[]).unwrap();
        let Formula::And(v) = &s.formula else { panic!() };
        let Formula::Exists(b, _) = &v[1] else { panic!() };
        assert_ne!(b.name(), "x");
    }
}
