//! Printing in the concrete grammar accepted by [`crate::parse`].

use std::fmt::{self, Display, Formatter};

use crate::fm::Fm;
use crate::linear::Lin;
use crate::syntax::{Atom, Formula, Term};

fn is_factor(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Floor(_) => true,
        Term::Const(c) => !c.is_negative(),
        _ => false,
    }
}

fn write_factor(f: &mut Formatter<'_>, t: &Term) -> fmt::Result {
    if is_factor(t) {
        write_term(f, t)
    } else {
        f.write_str("(")?;
        write_term(f, t)?;
        f.write_str(")")
    }
}

/// Whether a summand is written with a leading minus.
fn negative_summand(t: &Term) -> bool {
    match t {
        Term::Const(c) | Term::Scale(c, _) => c.is_negative(),
        _ => false,
    }
}

fn write_abs_summand(f: &mut Formatter<'_>, t: &Term) -> fmt::Result {
    match t {
        Term::Const(c) => write!(f, "{}", c.abs()),
        Term::Scale(c, inner) => {
            let m = c.abs();
            if !m.is_one() {
                write!(f, "{m}*")?;
            }
            write_factor(f, inner)
        }
        Term::Sum(..) => {
            f.write_str("(")?;
            write_term(f, t)?;
            f.write_str(")")
        }
        _ => write_term(f, t),
    }
}

fn write_term(f: &mut Formatter<'_>, t: &Term) -> fmt::Result {
    match t {
        Term::Const(c) => write!(f, "{c}"),
        Term::Var(v) => write!(f, "{v}"),
        Term::Floor(a) => {
            f.write_str("floor(")?;
            write_term(f, a)?;
            f.write_str(")")
        }
        Term::Scale(..) => {
            if negative_summand(t) {
                f.write_str("-")?;
            }
            write_abs_summand(f, t)
        }
        Term::Sum(a, b) => {
            write_term(f, a)?;
            f.write_str(if negative_summand(b) { " - " } else { " + " })?;
            write_abs_summand(f, b)
        }
    }
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_term(f, self)
    }
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if let Term::Floor(inner) = &self.lhs {
            if **inner == self.rhs && self.rel == crate::syntax::Rel::Eq {
                return write!(f, "int({})", self.rhs);
            }
        }
        if matches!(&self.rhs, Term::Const(c) if c.is_zero()) {
            return match Fm::cmp(&Lin::from_term(&self.lhs), self.rel, &Lin::zero()) {
                Fm::Atom(c) => write!(f, "{c}"),
                Fm::True => f.write_str("true"),
                _ => f.write_str("false"),
            };
        }
        write!(f, "{} {} {}", self.lhs, self.rel.symbol(), self.rhs)
    }
}

#[derive(PartialEq, PartialOrd, Clone, Copy)]
enum Level {
    Formula,
    Disj,
    Conj,
}

fn write_formula(f: &mut Formatter<'_>, g: &Formula, level: Level) -> fmt::Result {
    let paren = |f: &mut Formatter<'_>, inner: &dyn Fn(&mut Formatter<'_>) -> fmt::Result| {
        f.write_str("(")?;
        inner(f)?;
        f.write_str(")")
    };
    match g {
        Formula::True => f.write_str("true"),
        Formula::False => f.write_str("false"),
        Formula::Atom(a) => write!(f, "{a}"),
        Formula::Not(h) => {
            f.write_str("not ")?;
            match **h {
                Formula::True | Formula::False | Formula::Not(_) | Formula::Atom(_) => {
                    write_formula(f, h, Level::Conj)
                }
                _ => paren(f, &|f| write_formula(f, h, Level::Formula)),
            }
        }
        Formula::And(v) | Formula::Or(v) if v.is_empty() => {
            f.write_str(if matches!(g, Formula::And(_)) { "true" } else { "false" })
        }
        Formula::And(v) | Formula::Or(v) if v.len() == 1 => write_formula(f, &v[0], level),
        Formula::And(v) => {
            let body = |f: &mut Formatter<'_>| {
                for (i, h) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" and ")?;
                    }
                    write_formula(f, h, Level::Conj)?;
                }
                Ok(())
            };
            if level > Level::Disj {
                paren(f, &body)
            } else {
                body(f)
            }
        }
        Formula::Or(v) => {
            let body = |f: &mut Formatter<'_>| {
                for (i, h) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" or ")?;
                    }
                    write_formula(f, h, Level::Disj)?;
                }
                Ok(())
            };
            if level > Level::Formula {
                paren(f, &body)
            } else {
                body(f)
            }
        }
        Formula::Exists(x, h) | Formula::Forall(x, h) => {
            let q = if matches!(g, Formula::Exists(..)) { "exists" } else { "forall" };
            let body = |f: &mut Formatter<'_>| {
                write!(f, "{q} {x} . ")?;
                write_formula(f, h, Level::Formula)
            };
            if level > Level::Formula {
                paren(f, &body)
            } else {
                body(f)
            }
        }
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_formula(f, self, Level::Formula)
    }
}

/// Serializes a set as the text of its formula.
pub(crate) fn set_text<S: serde::Serializer>(s: &crate::syntax::DefinableSet, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&s.formula.to_string())
}
