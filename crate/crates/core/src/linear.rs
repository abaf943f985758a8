//! Canonical linear terms over variables and floor subterms.
//!
//! A [`Lin`] is `Σ cᵢ·keyᵢ + c₀` with keys sorted, coefficients nonzero and
//! floor keys themselves canonical. Floor keys carry an argument whose
//! constant lies in `[0, 1)` and whose floor-key coefficients lie in `(0, 1)`:
//! the integer parts are always pulled out of the floor.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::rational::Rational;
use crate::syntax::{Term, Var};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Key {
    Var(Var),
    Floor(Arc<Lin>),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Lin {
    terms: Vec<(Key, Rational)>,
    constant: Rational,
}

impl Key {
    pub fn mentions(&self, v: &Var) -> bool {
        match self {
            Key::Var(w) => w == v,
            Key::Floor(arg) => arg.mentions(v),
        }
    }

    pub fn is_floor(&self) -> bool {
        matches!(self, Key::Floor(_))
    }
}

fn merge_sorted(mut items: Vec<(Key, Rational)>) -> Vec<(Key, Rational)> {
    items.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(Key, Rational)> = Vec::with_capacity(items.len());
    for (k, c) in items {
        match out.last_mut() {
            Some((lk, lc)) if *lk == k => *lc += &c,
            _ => out.push((k, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// Interval of rationals with open or closed ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Range {
    pub lo: Rational,
    pub lo_closed: bool,
    pub hi: Rational,
    pub hi_closed: bool,
}

impl Range {
    pub fn point(c: Rational) -> Range {
        Range { lo: c.clone(), lo_closed: true, hi: c, hi_closed: true }
    }

    pub fn plus(&self, o: &Range) -> Range {
        Range {
            lo: &self.lo + &o.lo,
            lo_closed: self.lo_closed && o.lo_closed,
            hi: &self.hi + &o.hi,
            hi_closed: self.hi_closed && o.hi_closed,
        }
    }

    /// Whether every element is `< 0` (`strict`) or `≤ 0`.
    pub fn below_zero(&self, strict: bool) -> bool {
        self.hi.is_negative() || (self.hi.is_zero() && (!strict || !self.hi_closed))
    }

    pub fn above_zero(&self, strict: bool) -> bool {
        self.lo.is_positive() || (self.lo.is_zero() && (!strict || !self.lo_closed))
    }
}

impl Lin {
    pub fn zero() -> Lin {
        Lin::default()
    }

    pub fn constant(c: Rational) -> Lin {
        Lin { terms: Vec::new(), constant: c }
    }

    pub fn var(v: &Var) -> Lin {
        Lin { terms: vec![(Key::Var(v.clone()), Rational::one())], constant: Rational::zero() }
    }

    pub fn key(k: Key) -> Lin {
        Lin { terms: vec![(k, Rational::one())], constant: Rational::zero() }
    }

    pub fn from_parts(items: Vec<(Key, Rational)>, constant: Rational) -> Lin {
        Lin { terms: merge_sorted(items), constant }
    }

    pub fn terms(&self) -> &[(Key, Rational)] {
        &self.terms
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    /// The same linear part with constant zero.
    pub fn linear_part(&self) -> Lin {
        Lin { terms: self.terms.clone(), constant: Rational::zero() }
    }

    pub fn with_constant(&self, c: Rational) -> Lin {
        Lin { terms: self.terms.clone(), constant: c }
    }

    pub fn add(&self, other: &Lin) -> Lin {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &Lin) -> Lin {
        self.add_scaled(other, &-Rational::one())
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &Lin, c: &Rational) -> Lin {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let (k, d) = &other.terms[j];
                    out.push((k.clone(), d * c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = &self.terms[i].1 + &(&other.terms[j].1 * c);
                    if !s.is_zero() {
                        out.push((self.terms[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Lin { terms: out, constant: &self.constant + &(&other.constant * c) }
    }

    pub fn scale(&self, c: &Rational) -> Lin {
        if c.is_zero() {
            return Lin::zero();
        }
        Lin {
            terms: self.terms.iter().map(|(k, d)| (k.clone(), d * c)).collect(),
            constant: &self.constant * c,
        }
    }

    pub fn neg(&self) -> Lin {
        self.scale(&-Rational::one())
    }

    pub fn add_const(&self, c: &Rational) -> Lin {
        Lin { terms: self.terms.clone(), constant: &self.constant + c }
    }

    pub fn coeff(&self, k: &Key) -> Rational {
        self.terms
            .binary_search_by(|(k2, _)| k2.cmp(k))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    /// Coefficient of the direct (non-floor) occurrence of `v`.
    pub fn coeff_var(&self, v: &Var) -> Rational {
        self.terms
            .iter()
            .find(|(k, _)| matches!(k, Key::Var(w) if w == v))
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    /// `self` without its direct `v` term.
    pub fn without_var(&self, v: &Var) -> Lin {
        Lin {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| !matches!(k, Key::Var(w) if w == v))
                .cloned()
                .collect(),
            constant: self.constant.clone(),
        }
    }

    pub fn mentions(&self, v: &Var) -> bool {
        self.terms.iter().any(|(k, _)| k.mentions(v))
    }

    /// Whether `v` occurs inside some floor.
    pub fn in_floor(&self, v: &Var) -> bool {
        self.terms.iter().any(|(k, _)| matches!(k, Key::Floor(a) if a.mentions(v)))
    }

    pub fn has_floor(&self) -> bool {
        self.terms.iter().any(|(k, _)| k.is_floor())
    }

    /// All keys are floors and all coefficients and the constant are integers,
    /// so the term only takes integer values.
    pub fn is_integer_valued(&self) -> bool {
        self.constant.is_integer() && self.terms.iter().all(|(k, c)| k.is_floor() && c.is_integer())
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        for (k, _) in &self.terms {
            match k {
                Key::Var(v) => {
                    out.insert(v.clone());
                }
                Key::Floor(a) => a.collect_vars(out),
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// Every floor subterm, innermost ones included.
    pub fn collect_floors(&self, out: &mut BTreeSet<Arc<Lin>>) {
        for (k, _) in &self.terms {
            if let Key::Floor(a) = k {
                if out.insert(a.clone()) {
                    a.collect_floors(out);
                }
            }
        }
    }

    fn depth(&self) -> usize {
        self.terms
            .iter()
            .map(|(k, _)| match k {
                Key::Var(_) => 0,
                Key::Floor(a) => 1 + a.depth(),
            })
            .max()
            .unwrap_or(0)
    }

    /// Range of the term when it is a constant plus a combination of
    /// fractional-part defects `floor(t) − t`, each ranging over `(−1, 0]`.
    pub fn frac_range(&self) -> Option<Range> {
        if !self.has_floor() {
            return None;
        }
        let mut r = self.clone();
        let mut range = Range::point(Rational::zero());
        loop {
            let next = r
                .terms
                .iter()
                .filter_map(|(k, c)| match k {
                    Key::Floor(a) => Some((a.clone(), c.clone())),
                    Key::Var(_) => None,
                })
                .max_by_key(|(a, _)| a.depth());
            let Some((arg, b)) = next else { break };
            r = r.sub(&Lin::key(Key::Floor(arg.clone())).scale(&b)).add_scaled(&arg, &b);
            range = range.plus(&if b.is_positive() {
                Range { lo: -&b, lo_closed: false, hi: Rational::zero(), hi_closed: true }
            } else {
                Range { lo: Rational::zero(), lo_closed: true, hi: -&b, hi_closed: false }
            });
        }
        if !r.terms.is_empty() {
            return None;
        }
        Some(range.plus(&Range::point(r.constant)))
    }

    /// Monotonicity in `v`: `Some(1)` nondecreasing, `Some(-1)`
    /// nonincreasing, `Some(0)` when `v` does not occur, `None` otherwise.
    /// A term that mentions `v` and has a direction is unbounded in it.
    pub fn direction(&self, v: &Var) -> Option<i32> {
        let mut d = 0;
        for (k, c) in &self.terms {
            let kd = match k {
                Key::Var(w) => i32::from(w == v),
                Key::Floor(a) => a.direction(v)?,
            } * c.signum();
            if kd != 0 {
                if d != 0 && d != kd {
                    return None;
                }
                d = kd;
            }
        }
        Some(d)
    }

    /// Value and ε-coefficient after substituting `w ↦ e + d·ε` for every
    /// `(e, d) = shift(w)`, with ε a positive infinitesimal. Floors are
    /// resolved exactly: `floor(t + cε)` is `floor(t)` for `c ≥ 0` and
    /// `−floor(−t) − 1` for `c < 0`.
    pub fn perturb(&self, shift: &impl Fn(&Var) -> Option<(Lin, Rational)>) -> (Lin, Rational) {
        let mut val = Lin::constant(self.constant.clone());
        let mut eps = Rational::zero();
        for (k, c) in &self.terms {
            match k {
                Key::Var(w) => match shift(w) {
                    Some((e, d)) => {
                        val = val.add_scaled(&e, c);
                        eps += &(c * &d);
                    }
                    None => val = val.add_scaled(&Lin::var(w), c),
                },
                Key::Floor(a) => {
                    let (av, ae) = a.perturb(shift);
                    let fl = if ae.is_negative() {
                        Lin::floor_of(&av.neg()).neg().add_const(&-Rational::one())
                    } else {
                        Lin::floor_of(&av)
                    };
                    val = val.add_scaled(&fl, c);
                }
            }
        }
        (val, eps)
    }

    /// Canonical `floor(t)`.
    pub fn floor_of(t: &Lin) -> Lin {
        let mut int_items = Vec::new();
        let mut rest = Vec::new();
        for (k, c) in &t.terms {
            if k.is_floor() {
                let n = c.floor();
                let f = c - &n;
                if !n.is_zero() {
                    int_items.push((k.clone(), n));
                }
                if !f.is_zero() {
                    rest.push((k.clone(), f));
                }
            } else {
                rest.push((k.clone(), c.clone()));
            }
        }
        let n0 = t.constant.floor();
        let r0 = &t.constant - &n0;
        if !rest.is_empty() {
            let arg = Lin { terms: rest, constant: r0 };
            int_items.push((Key::Floor(Arc::new(arg)), Rational::one()));
        }
        Lin::from_parts(int_items, n0)
    }

    /// Rebuilds the term bottom-up, replacing each variable through `f`.
    pub fn map_vars(&self, f: &impl Fn(&Var) -> Option<Lin>) -> Lin {
        let mut acc = Lin::constant(self.constant.clone());
        let mut plain = Vec::new();
        for (k, c) in &self.terms {
            match k {
                Key::Var(v) => match f(v) {
                    Some(l) => acc = acc.add_scaled(&l, c),
                    None => plain.push((k.clone(), c.clone())),
                },
                Key::Floor(a) => {
                    let a2 = a.map_vars(f);
                    if a2 == **a {
                        plain.push((k.clone(), c.clone()));
                    } else {
                        acc = acc.add_scaled(&Lin::floor_of(&a2), c);
                    }
                }
            }
        }
        acc.add(&Lin { terms: merge_sorted(plain), constant: Rational::zero() })
    }

    pub fn subst(&self, v: &Var, by: &Lin) -> Lin {
        if !self.mentions(v) {
            return self.clone();
        }
        self.map_vars(&|w| (w == v).then(|| by.clone()))
    }

    pub fn subst_many(&self, map: &BTreeMap<Var, Lin>) -> Lin {
        self.map_vars(&|w| map.get(w).cloned())
    }

    /// Replaces every occurrence of the floor key `floor(arg)` by `by`.
    pub fn replace_floor(&self, arg: &Lin, by: &Lin) -> Lin {
        let mut acc = Lin::constant(self.constant.clone());
        let mut plain = Vec::new();
        let mut changed = false;
        for (k, c) in &self.terms {
            match k {
                Key::Floor(a) if **a == *arg => {
                    acc = acc.add_scaled(by, c);
                    changed = true;
                }
                Key::Floor(a) => {
                    let a2 = a.replace_floor(arg, by);
                    if a2 == **a {
                        plain.push((k.clone(), c.clone()));
                    } else {
                        acc = acc.add_scaled(&Lin::floor_of(&a2), c);
                        changed = true;
                    }
                }
                Key::Var(_) => plain.push((k.clone(), c.clone())),
            }
        }
        if !changed {
            return self.clone();
        }
        acc.add(&Lin { terms: merge_sorted(plain), constant: Rational::zero() })
    }

    /// Exact value, `None` when a variable is unassigned.
    pub fn eval(&self, env: &impl Fn(&Var) -> Option<Rational>) -> Option<Rational> {
        let mut acc = self.constant.clone();
        for (k, c) in &self.terms {
            let val = match k {
                Key::Var(v) => env(v)?,
                Key::Floor(a) => a.eval(env)?.floor(),
            };
            acc += &(c * &val);
        }
        Some(acc)
    }

    /// Positive rational `g` such that `self / g` has integer coefficients and
    /// constant with gcd one; zero for the zero term.
    pub fn content(&self) -> Rational {
        let mut g = self.constant.abs();
        for (_, c) in &self.terms {
            g = g.gcd(c);
        }
        g
    }

    /// Same as [`Lin::content`] but ignoring the constant.
    pub fn linear_content(&self) -> Rational {
        let mut g = Rational::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
        }
        g
    }

    /// Number of nodes, floors counted recursively.
    pub fn size(&self) -> usize {
        1 + self
            .terms
            .iter()
            .map(|(k, _)| match k {
                Key::Var(_) => 1,
                Key::Floor(a) => 1 + a.size(),
            })
            .sum::<usize>()
    }

    pub fn to_term(&self) -> Term {
        let mut parts: Vec<Term> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let base = match k {
                    Key::Var(v) => Term::Var(v.clone()),
                    Key::Floor(a) => Term::floor(a.to_term()),
                };
                if c.is_one() {
                    base
                } else {
                    Term::scale(c.clone(), base)
                }
            })
            .collect();
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(Term::Const(self.constant.clone()));
        }
        let mut it = parts.into_iter();
        let first = it.next().expect("nonempty");
        it.fold(first, Term::sum)
    }

    pub fn from_term(t: &Term) -> Lin {
        match t {
            Term::Const(c) => Lin::constant(c.clone()),
            Term::Var(v) => Lin::var(v),
            Term::Scale(c, t) => Lin::from_term(t).scale(c),
            Term::Sum(a, b) => Lin::from_term(a).add(&Lin::from_term(b)),
            Term::Floor(t) => Lin::floor_of(&Lin::from_term(t)),
        }
    }
}

fn fmt_factor(f: &mut fmt::Formatter<'_>, k: &Key) -> fmt::Result {
    match k {
        Key::Var(v) => write!(f, "{v}"),
        Key::Floor(a) => write!(f, "floor({a})"),
    }
}

impl fmt::Display for Lin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in &self.terms {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            fmt_factor(f, k)?;
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant.is_negative() {
            write!(f, " - {}", self.constant.abs())
        } else if self.constant.is_positive() {
            write!(f, " + {}", self.constant)
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for Lin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Debug for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_factor(f, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn x() -> Var {
        Var::new("x")
    }

    #[test]
    fn floor_pulls_integer_parts() {
        // floor(x + 5/2) = 2 + floor(x + 1/2)
        let t = Lin::var(&x()).add_const(&q(5, 2));
        let f = Lin::floor_of(&t);
        assert_eq!(f.constant_part(), &q(2, 1));
        assert_eq!(f.terms().len(), 1);
        // floor(floor(x) + 1/2) = floor(x)
        let fx = Lin::floor_of(&Lin::var(&x()));
        let g = Lin::floor_of(&fx.add_const(&q(1, 2)));
        assert_eq!(g, fx);
        assert_eq!(Lin::floor_of(&Lin::constant(q(-1, 2))), Lin::constant(q(-1, 1)));
    }

    #[test]
    fn substitution_renormalizes_floors() {
        let fx = Lin::floor_of(&Lin::var(&x()));
        let y = Var::new("y");
        let s = fx.subst(&x(), &Lin::var(&y).add_const(&q(3, 1)));
        assert_eq!(s, Lin::floor_of(&Lin::var(&y)).add_const(&q(3, 1)));
    }

    #[test]
    fn eval_nested() {
        // floor(floor(x)/2) at x = 7/2 is 1
        let t = Lin::floor_of(&Lin::floor_of(&Lin::var(&x())).scale(&q(1, 2)));
        let v = t.eval(&|_| Some(q(7, 2))).unwrap();
        assert_eq!(v, q(1, 1));
    }

    #[test]
    fn display() {
        let t = Lin::var(&x()).scale(&q(-2, 1)).add(&Lin::floor_of(&Lin::var(&x()).scale(&q(1, 2)))).add_const(&q(-3, 1));
        assert_eq!(t.to_string(), "-2*x + floor(1/2*x) - 3");
    }
}
