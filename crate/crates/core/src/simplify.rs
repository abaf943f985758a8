//! Formula simplification: constant folding, flattening, interval merging of
//! atoms sharing a linear direction, and pruning of atoms decided by the
//! enclosing context.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::fm::{CRel, Constraint, Fm};
use crate::linear::{Key, Lin};
use crate::rational::Rational;

type Dir = Vec<(Key, Rational)>;

/// A condition `p ⋈ b` on the value `p` of a direction.
#[derive(Clone, Debug)]
enum Cond {
    Lt(Rational),
    Le(Rational),
    Gt(Rational),
    Ge(Rational),
    Eq(Rational),
    Ne(Rational),
}

/// Splits an atom into its primitive direction and a condition on it.
fn split(c: &Constraint) -> (Dir, Cond) {
    let g = c.lin.linear_content();
    let g = if c.lin.terms()[0].1.is_negative() { -g } else { g };
    let dir: Dir = c.lin.terms().iter().map(|(k, a)| (k.clone(), a / &g)).collect();
    let b = -(c.lin.constant_part() / &g);
    let pos = g.is_positive();
    let cond = match (c.rel, pos) {
        (CRel::Lt, true) => Cond::Lt(b),
        (CRel::Le, true) => Cond::Le(b),
        (CRel::Lt, false) => Cond::Gt(b),
        (CRel::Le, false) => Cond::Ge(b),
        (CRel::Eq, _) => Cond::Eq(b),
        (CRel::Ne, _) => Cond::Ne(b),
    };
    (dir, cond)
}

fn build(dir: &Dir, cond: &Cond) -> Fm {
    let p = Lin::from_parts(dir.clone(), Rational::zero());
    match cond {
        Cond::Lt(b) => Fm::atom(p.add_const(&-b), CRel::Lt),
        Cond::Le(b) => Fm::atom(p.add_const(&-b), CRel::Le),
        Cond::Gt(b) => Fm::atom(p.neg().add_const(b), CRel::Lt),
        Cond::Ge(b) => Fm::atom(p.neg().add_const(b), CRel::Le),
        Cond::Eq(b) => Fm::atom(p.add_const(&-b), CRel::Eq),
        Cond::Ne(b) => Fm::atom(p.add_const(&-b), CRel::Ne),
    }
}

/// The set `{p : lo ⋖ p ⋖ hi, p ∉ ne}`; the flag marks a strict bound.
#[derive(Clone, Debug, Default)]
struct Bounds {
    lo: Option<(Rational, bool)>,
    hi: Option<(Rational, bool)>,
    ne: Vec<Rational>,
}

impl Bounds {
    fn in_range(&self, v: &Rational) -> bool {
        let lo_ok = match &self.lo {
            None => true,
            Some((l, s)) => v > l || (!s && v == l),
        };
        let hi_ok = match &self.hi {
            None => true,
            Some((h, s)) => v < h || (!s && v == h),
        };
        lo_ok && hi_ok
    }

    fn point(&self) -> Option<&Rational> {
        match (&self.lo, &self.hi) {
            (Some((l, false)), Some((h, false))) if l == h => Some(l),
            _ => None,
        }
    }

    fn tighten_lo(&mut self, b: Rational, strict: bool) {
        let replace = match &self.lo {
            None => true,
            Some((l, s)) => b > *l || (b == *l && strict && !s),
        };
        if replace {
            self.lo = Some((b, strict));
        }
    }

    fn tighten_hi(&mut self, b: Rational, strict: bool) {
        let replace = match &self.hi {
            None => true,
            Some((h, s)) => b < *h || (b == *h && strict && !s),
        };
        if replace {
            self.hi = Some((b, strict));
        }
    }

    /// Adds a condition; false when the set becomes empty.
    fn add(&mut self, c: &Cond) -> bool {
        match c {
            Cond::Lt(b) => self.tighten_hi(b.clone(), true),
            Cond::Le(b) => self.tighten_hi(b.clone(), false),
            Cond::Gt(b) => self.tighten_lo(b.clone(), true),
            Cond::Ge(b) => self.tighten_lo(b.clone(), false),
            Cond::Eq(b) => {
                self.tighten_lo(b.clone(), false);
                self.tighten_hi(b.clone(), false);
            }
            Cond::Ne(b) => {
                if !self.ne.contains(b) {
                    self.ne.push(b.clone());
                }
            }
        }
        self.nonempty()
    }

    fn nonempty(&self) -> bool {
        if let (Some((l, ls)), Some((h, hs))) = (&self.lo, &self.hi) {
            match l.cmp(h) {
                Ordering::Greater => return false,
                Ordering::Equal if *ls || *hs => return false,
                Ordering::Equal if self.ne.contains(l) => return false,
                _ => {}
            }
        }
        true
    }

    fn merge(&mut self, other: &Bounds) -> bool {
        if let Some((b, s)) = &other.lo {
            self.tighten_lo(b.clone(), *s);
        }
        if let Some((b, s)) = &other.hi {
            self.tighten_hi(b.clone(), *s);
        }
        for v in &other.ne {
            if !self.ne.contains(v) {
                self.ne.push(v.clone());
            }
        }
        self.nonempty()
    }

    /// `Some(true)` if every point satisfies `c`, `Some(false)` if none does.
    fn decides(&self, c: &Cond) -> Option<bool> {
        let hi_below = |b: &Rational, strict_ok: bool| match &self.hi {
            Some((h, s)) => h < b || (h == b && (strict_ok || *s)),
            None => false,
        };
        let lo_above = |b: &Rational, strict_ok: bool| match &self.lo {
            Some((l, s)) => l > b || (l == b && (strict_ok || *s)),
            None => false,
        };
        match c {
            Cond::Lt(b) => {
                if hi_below(b, false) || self.point().is_some_and(|p| p < b) {
                    Some(true)
                } else if lo_above(b, true) {
                    Some(false)
                } else {
                    None
                }
            }
            Cond::Le(b) => {
                if hi_below(b, true) {
                    Some(true)
                } else if lo_above(b, false) {
                    Some(false)
                } else {
                    None
                }
            }
            Cond::Gt(b) => {
                if lo_above(b, false) || self.point().is_some_and(|p| p > b) {
                    Some(true)
                } else if hi_below(b, true) {
                    Some(false)
                } else {
                    None
                }
            }
            Cond::Ge(b) => {
                if lo_above(b, true) {
                    Some(true)
                } else if hi_below(b, false) {
                    Some(false)
                } else {
                    None
                }
            }
            Cond::Eq(b) => {
                if self.point() == Some(b) {
                    Some(true)
                } else if !self.in_range(b) || self.ne.contains(b) {
                    Some(false)
                } else {
                    None
                }
            }
            Cond::Ne(b) => {
                if !self.in_range(b) || self.ne.contains(b) {
                    Some(true)
                } else if self.point() == Some(b) {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }

    fn conds(&self) -> Vec<Cond> {
        if let Some(p) = self.point() {
            return vec![Cond::Eq(p.clone())];
        }
        let mut out = Vec::new();
        match &self.lo {
            Some((b, true)) => out.push(Cond::Gt(b.clone())),
            Some((b, false)) => out.push(Cond::Ge(b.clone())),
            None => {}
        }
        match &self.hi {
            Some((b, true)) => out.push(Cond::Lt(b.clone())),
            Some((b, false)) => out.push(Cond::Le(b.clone())),
            None => {}
        }
        let mut ne: Vec<_> = self.ne.iter().filter(|v| self.in_range(v)).cloned().collect();
        ne.sort();
        out.extend(ne.into_iter().map(Cond::Ne));
        out
    }
}

#[derive(Clone, Default)]
struct Ctx {
    map: BTreeMap<Dir, Bounds>,
}

impl Ctx {
    fn decides(&self, c: &Constraint) -> Option<bool> {
        if self.map.is_empty() {
            return None;
        }
        let (d, cond) = split(c);
        self.map.get(&d).and_then(|b| b.decides(&cond))
    }

    fn add(&mut self, c: &Constraint) -> bool {
        let (d, cond) = split(c);
        self.map.entry(d).or_default().add(&cond)
    }

    fn merge(&mut self, other: &Ctx) -> bool {
        for (d, b) in &other.map {
            if !self.map.entry(d.clone()).or_default().merge(b) {
                return false;
            }
        }
        true
    }

    fn atoms(&self) -> Vec<Fm> {
        let mut out = Vec::new();
        for (d, b) in &self.map {
            for c in b.conds() {
                out.push(build(d, &c));
            }
        }
        out
    }
}

/// Simplifies a formula; the result is equivalent and never larger in atoms.
pub fn simplify(f: &Fm) -> Fm {
    simp(f, &Ctx::default())
}

fn simp(f: &Fm, ctx: &Ctx) -> Fm {
    match f {
        Fm::True | Fm::False => f.clone(),
        Fm::Atom(c) => match ctx.decides(c) {
            Some(b) => Fm::from_bool(b),
            None => f.clone(),
        },
        Fm::And(v) => simp_junction(v, ctx, true),
        Fm::Or(v) => simp_junction(v, ctx, false),
        Fm::Ex(x, b) => Fm::ex(x.clone(), simp(b, &Ctx::default())),
        Fm::All(x, b) => Fm::all(x.clone(), simp(b, &Ctx::default())),
    }
}

fn push_flat(f: Fm, conj: bool, atoms: &mut Vec<Constraint>, others: &mut Vec<Fm>) {
    match f {
        Fm::Atom(c) => atoms.push(c),
        Fm::And(v) if conj => v.into_iter().for_each(|g| push_flat(g, conj, atoms, others)),
        Fm::Or(v) if !conj => v.into_iter().for_each(|g| push_flat(g, conj, atoms, others)),
        g => others.push(g),
    }
}

/// Conjunctions keep their atoms as context; disjunctions keep the negations
/// of theirs. `absorb` is the value that annihilates the junction.
fn simp_junction(items: &[Fm], ctx: &Ctx, conj: bool) -> Fm {
    let absorb = Fm::from_bool(!conj);
    let mut atoms = Vec::new();
    let mut others = Vec::new();
    for f in items {
        match f {
            Fm::True if conj => {}
            Fm::False if !conj => {}
            Fm::True | Fm::False => return absorb,
            _ => push_flat(f.clone(), conj, &mut atoms, &mut others),
        }
    }
    for _round in 0..4 {
        // `own` collects this node's atoms (negated for a disjunction)
        let mut own = Ctx::default();
        for a in &atoms {
            match ctx.decides(a) {
                Some(b) if b == conj => {}
                Some(_) => return absorb,
                None => {
                    let lit = if conj { Fm::Atom(a.clone()) } else { a.negate() };
                    match lit {
                        Fm::Atom(l) => {
                            if !own.add(&l) {
                                return absorb;
                            }
                        }
                        Fm::True => {}
                        _ => return absorb,
                    }
                }
            }
        }
        let mut local = ctx.clone();
        if !local.merge(&own) {
            return absorb;
        }
        let mut new_atoms = Vec::new();
        let mut new_others = Vec::new();
        for o in &others {
            match simp(o, &local) {
                Fm::True if conj => {}
                Fm::False if !conj => {}
                Fm::True | Fm::False => return absorb,
                g => push_flat(g, conj, &mut new_atoms, &mut new_others),
            }
        }
        let mut emitted = Vec::new();
        for lit in own.atoms() {
            let lit = if conj { lit } else { lit.neg() };
            match lit {
                Fm::Atom(c) => match ctx.decides(&c) {
                    Some(b) if b == conj => {}
                    Some(_) => return absorb,
                    None => emitted.push(c),
                },
                Fm::True if conj => {}
                Fm::False if !conj => {}
                _ => return absorb,
            }
        }
        if new_atoms.is_empty() {
            let mut all: Vec<Fm> = emitted.into_iter().map(Fm::Atom).collect();
            all.extend(new_others);
            return if conj { Fm::and(all) } else { Fm::or(all) };
        }
        emitted.extend(new_atoms);
        atoms = emitted;
        others = new_others;
    }
    let mut all: Vec<Fm> = atoms.into_iter().map(Fm::Atom).collect();
    all.extend(others);
    if conj {
        Fm::and(all)
    } else {
        Fm::or(all)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Var;

    fn x() -> Lin {
        Lin::var(&Var::new("x"))
    }

    fn lt(c: i64) -> Fm {
        Fm::atom(x().add_const(&Rational::from_int(-c)), CRel::Lt)
    }

    fn gt(c: i64) -> Fm {
        Fm::atom(x().neg().add_const(&Rational::from_int(c)), CRel::Lt)
    }

    #[test]
    fn merges_bounds() {
        assert_eq!(simplify(&Fm::and(vec![lt(3), lt(5)])), lt(3));
        assert_eq!(simplify(&Fm::or(vec![lt(3), lt(5)])), lt(5));
        assert_eq!(simplify(&Fm::and(vec![lt(3), gt(5)])), Fm::False);
        assert_eq!(simplify(&Fm::or(vec![lt(5), gt(3)])), Fm::True);
    }

    #[test]
    fn context_prunes_nested_atoms() {
        let f = Fm::and(vec![lt(3), Fm::or(vec![gt(4), Fm::int(&x())])]);
        assert_eq!(simplify(&f), Fm::and(vec![lt(3), Fm::int(&x())]));
    }

    #[test]
    fn point_from_two_bounds() {
        let le = Fm::atom(x().add_const(&Rational::from_int(-2)), CRel::Le);
        let ge = Fm::atom(x().neg().add_const(&Rational::from_int(2)), CRel::Le);
        let eq = Fm::atom(x().add_const(&Rational::from_int(-2)), CRel::Eq);
        assert_eq!(simplify(&Fm::and(vec![le, ge])), eq);
    }
}
