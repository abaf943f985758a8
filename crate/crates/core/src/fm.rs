//! Internal negation-normal-form formulas over canonical atoms `t ⋈ 0`.

use std::collections::BTreeSet;
use std::fmt;

use crate::linear::{Key, Lin};
use crate::rational::Rational;
use crate::syntax::{Atom, Formula, Rel, Term, Var};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CRel {
    Lt,
    Le,
    Eq,
    Ne,
}

impl CRel {
    pub fn holds(self, v: &Rational) -> bool {
        match self {
            CRel::Lt => v.is_negative(),
            CRel::Le => !v.is_positive(),
            CRel::Eq => v.is_zero(),
            CRel::Ne => !v.is_zero(),
        }
    }

    pub fn to_rel(self) -> Rel {
        match self {
            CRel::Lt => Rel::Lt,
            CRel::Le => Rel::Le,
            CRel::Eq => Rel::Eq,
            CRel::Ne => Rel::Ne,
        }
    }
}

/// `lin ⋈ 0`, canonical: integer coefficients with gcd one, a positive
/// leading coefficient for `=`/`≠`, and non-strict integral bounds when the
/// term is integer-valued.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub lin: Lin,
    pub rel: CRel,
}

impl Constraint {
    /// Canonical atom `lin ⋈ 0`, folded to a constant when possible.
    pub fn make(lin: Lin, rel: CRel) -> Fm {
        if lin.is_constant() {
            return Fm::from_bool(rel.holds(lin.constant_part()));
        }
        if let Some(r) = lin.frac_range() {
            let decided = match rel {
                CRel::Lt => r.below_zero(true).then_some(true).or(r.above_zero(false).then_some(false)),
                CRel::Le => r.below_zero(false).then_some(true).or(r.above_zero(true).then_some(false)),
                CRel::Eq | CRel::Ne => {
                    (r.below_zero(true) || r.above_zero(true)).then_some(rel == CRel::Ne)
                }
            };
            if let Some(b) = decided {
                return Fm::from_bool(b);
            }
        }
        let g = lin.content();
        let mut lin = lin.scale(&g.recip());
        if matches!(rel, CRel::Eq | CRel::Ne) && lin.terms()[0].1.is_negative() {
            lin = lin.neg();
        }
        if lin.terms().iter().all(|(k, _)| k.is_floor()) {
            let gt = lin.linear_content();
            let c = lin.constant_part().clone();
            let p = lin.with_constant(Rational::zero()).scale(&gt.recip());
            let bound = -(&c / &gt);
            return match rel {
                CRel::Lt => {
                    Fm::Atom(Constraint { lin: p.add_const(&-(bound.ceil() - Rational::one())), rel: CRel::Le })
                }
                CRel::Le => Fm::Atom(Constraint { lin: p.add_const(&-bound.floor()), rel: CRel::Le }),
                CRel::Eq | CRel::Ne if !bound.is_integer() => Fm::from_bool(rel == CRel::Ne),
                _ => Fm::Atom(Constraint { lin: p.add_const(&-bound), rel }),
            };
        }
        Fm::Atom(Constraint { lin, rel })
    }

    pub fn negate(&self) -> Fm {
        match self.rel {
            CRel::Lt => Constraint::make(self.lin.neg(), CRel::Le),
            CRel::Le => Constraint::make(self.lin.neg(), CRel::Lt),
            CRel::Eq => Fm::Atom(Constraint { lin: self.lin.clone(), rel: CRel::Ne }),
            CRel::Ne => Fm::Atom(Constraint { lin: self.lin.clone(), rel: CRel::Eq }),
        }
    }

    pub fn eval(&self, env: &impl Fn(&Var) -> Option<Rational>) -> Option<bool> {
        Some(self.rel.holds(&self.lin.eval(env)?))
    }

    /// Recognizes `int(t)`: `floor(t) − t = 0` up to scaling. Returns `t`.
    pub fn as_int(&self) -> Option<Lin> {
        if !matches!(self.rel, CRel::Eq | CRel::Ne) {
            return None;
        }
        for (k, c) in self.lin.terms() {
            if let Key::Floor(arg) = k {
                let cand = Lin::key(k.clone()).sub(arg).scale(c);
                if cand == self.lin {
                    return Some((**arg).clone());
                }
            }
        }
        None
    }

    pub fn to_atom(&self) -> Atom {
        Atom::new(self.lin.to_term(), self.rel.to_rel(), Term::Const(Rational::zero()))
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(t) = self.as_int() {
            return match self.rel {
                CRel::Eq => write!(f, "int({t})"),
                _ => write!(f, "not int({t})"),
            };
        }
        let lin = &self.lin;
        let flip = lin.terms().first().is_some_and(|(_, c)| c.is_negative());
        let (lhs, rhs, rel) = if flip {
            (lin.linear_part().neg(), lin.constant_part().clone(), self.rel.to_rel().flip())
        } else {
            (lin.linear_part(), -lin.constant_part(), self.rel.to_rel())
        };
        write!(f, "{lhs} {} {rhs}", rel.symbol())
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Fm {
    False,
    True,
    Atom(Constraint),
    And(Vec<Fm>),
    Or(Vec<Fm>),
    Ex(Var, Box<Fm>),
    All(Var, Box<Fm>),
}

impl Fm {
    pub fn from_bool(b: bool) -> Fm {
        if b {
            Fm::True
        } else {
            Fm::False
        }
    }

    pub fn atom(lin: Lin, rel: CRel) -> Fm {
        Constraint::make(lin, rel)
    }

    /// `a ⋈ b` for terms given as linear forms.
    pub fn cmp(a: &Lin, rel: Rel, b: &Lin) -> Fm {
        match rel {
            Rel::Lt => Fm::atom(a.sub(b), CRel::Lt),
            Rel::Le => Fm::atom(a.sub(b), CRel::Le),
            Rel::Eq => Fm::atom(a.sub(b), CRel::Eq),
            Rel::Ne => Fm::atom(a.sub(b), CRel::Ne),
            Rel::Ge => Fm::atom(b.sub(a), CRel::Le),
            Rel::Gt => Fm::atom(b.sub(a), CRel::Lt),
        }
    }

    /// `int(t)`.
    pub fn int(t: &Lin) -> Fm {
        Fm::atom(Lin::floor_of(t).sub(t), CRel::Eq)
    }

    /// Flattening conjunction with constant absorption and deduplication.
    pub fn and(items: Vec<Fm>) -> Fm {
        let mut out = Vec::with_capacity(items.len());
        for f in items {
            match f {
                Fm::True => {}
                Fm::False => return Fm::False,
                Fm::And(v) => out.extend(v),
                f => out.push(f),
            }
        }
        out.sort();
        out.dedup();
        match out.len() {
            0 => Fm::True,
            1 => out.pop().unwrap(),
            _ => Fm::And(out),
        }
    }

    pub fn or(items: Vec<Fm>) -> Fm {
        let mut out = Vec::with_capacity(items.len());
        for f in items {
            match f {
                Fm::False => {}
                Fm::True => return Fm::True,
                Fm::Or(v) => out.extend(v),
                f => out.push(f),
            }
        }
        out.sort();
        out.dedup();
        match out.len() {
            0 => Fm::False,
            1 => out.pop().unwrap(),
            _ => Fm::Or(out),
        }
    }

    pub fn and2(a: Fm, b: Fm) -> Fm {
        Fm::and(vec![a, b])
    }

    pub fn or2(a: Fm, b: Fm) -> Fm {
        Fm::or(vec![a, b])
    }

    pub fn ex(v: Var, f: Fm) -> Fm {
        match f {
            Fm::True | Fm::False => f,
            f => Fm::Ex(v, Box::new(f)),
        }
    }

    pub fn all(v: Var, f: Fm) -> Fm {
        match f {
            Fm::True | Fm::False => f,
            f => Fm::All(v, Box::new(f)),
        }
    }

    pub fn implies(a: Fm, b: Fm) -> Fm {
        Fm::or2(a.neg(), b)
    }

    pub fn iff(a: Fm, b: Fm) -> Fm {
        Fm::and2(Fm::implies(a.clone(), b.clone()), Fm::implies(b, a))
    }

    /// Negation, pushed down to the atoms.
    pub fn neg(&self) -> Fm {
        match self {
            Fm::True => Fm::False,
            Fm::False => Fm::True,
            Fm::Atom(c) => c.negate(),
            Fm::And(v) => Fm::or(v.iter().map(Fm::neg).collect()),
            Fm::Or(v) => Fm::and(v.iter().map(Fm::neg).collect()),
            Fm::Ex(x, f) => Fm::all(x.clone(), f.neg()),
            Fm::All(x, f) => Fm::ex(x.clone(), f.neg()),
        }
    }

    pub fn is_qf(&self) -> bool {
        match self {
            Fm::True | Fm::False | Fm::Atom(_) => true,
            Fm::And(v) | Fm::Or(v) => v.iter().all(Fm::is_qf),
            Fm::Ex(..) | Fm::All(..) => false,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Fm::True | Fm::False => 1,
            Fm::Atom(c) => c.lin.size(),
            Fm::And(v) | Fm::Or(v) => 1 + v.iter().map(Fm::size).sum::<usize>(),
            Fm::Ex(_, f) | Fm::All(_, f) => 1 + f.size(),
        }
    }

    pub fn mentions(&self, x: &Var) -> bool {
        match self {
            Fm::True | Fm::False => false,
            Fm::Atom(c) => c.lin.mentions(x),
            Fm::And(v) | Fm::Or(v) => v.iter().any(|f| f.mentions(x)),
            Fm::Ex(y, f) | Fm::All(y, f) => y != x && f.mentions(x),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Var>) {
        match self {
            Fm::True | Fm::False => {}
            Fm::Atom(c) => c.lin.collect_vars(out),
            Fm::And(v) | Fm::Or(v) => v.iter().for_each(|f| f.collect_free(out)),
            Fm::Ex(y, f) | Fm::All(y, f) => {
                let mut inner = BTreeSet::new();
                f.collect_free(&mut inner);
                inner.remove(y);
                out.extend(inner);
            }
        }
    }

    /// Truth just off the point: every `w` with `shift(w) = (e, d)` becomes
    /// `e + d·ε` for a positive infinitesimal ε.
    pub fn perturb(&self, shift: &impl Fn(&Var) -> Option<(Lin, Rational)>) -> Fm {
        self.map_atoms(&mut |c| {
            let (v, e) = c.lin.perturb(shift);
            let s = e.signum();
            match c.rel {
                CRel::Lt | CRel::Le => {
                    Fm::atom(v, if s > 0 || (s == 0 && c.rel == CRel::Lt) { CRel::Lt } else { CRel::Le })
                }
                CRel::Eq if s != 0 => Fm::False,
                CRel::Ne if s != 0 => Fm::True,
                rel => Fm::atom(v, rel),
            }
        })
    }

    /// Applies `g` to every atom, rebuilding with the smart constructors.
    pub fn map_atoms(&self, g: &mut impl FnMut(&Constraint) -> Fm) -> Fm {
        match self {
            Fm::True | Fm::False => self.clone(),
            Fm::Atom(c) => g(c),
            Fm::And(v) => Fm::and(v.iter().map(|f| f.map_atoms(g)).collect()),
            Fm::Or(v) => Fm::or(v.iter().map(|f| f.map_atoms(g)).collect()),
            Fm::Ex(y, f) => Fm::ex(y.clone(), f.map_atoms(g)),
            Fm::All(y, f) => Fm::all(y.clone(), f.map_atoms(g)),
        }
    }

    /// Replaces each atom's term through `g`, keeping the relation.
    pub fn map_lins(&self, g: &impl Fn(&Lin) -> Lin) -> Fm {
        self.map_atoms(&mut |c| Constraint::make(g(&c.lin), c.rel))
    }

    /// Substitution of a quantifier-free term; binders must not capture.
    pub fn subst(&self, x: &Var, by: &Lin) -> Fm {
        self.map_lins(&|l| l.subst(x, by))
    }

    pub fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Constraint>) {
        match self {
            Fm::True | Fm::False => {}
            Fm::Atom(c) => out.push(c),
            Fm::And(v) | Fm::Or(v) => v.iter().for_each(|f| f.collect_atoms(out)),
            Fm::Ex(_, f) | Fm::All(_, f) => f.collect_atoms(out),
        }
    }

    /// Truth value of a quantifier-free formula; `None` if a variable is
    /// unassigned.
    pub fn eval(&self, env: &impl Fn(&Var) -> Option<Rational>) -> Option<bool> {
        match self {
            Fm::True => Some(true),
            Fm::False => Some(false),
            Fm::Atom(c) => c.eval(env),
            Fm::And(v) => {
                for f in v {
                    if !f.eval(env)? {
                        return Some(false);
                    }
                }
                Some(true)
            }
            Fm::Or(v) => {
                for f in v {
                    if f.eval(env)? {
                        return Some(true);
                    }
                }
                Some(false)
            }
            Fm::Ex(..) | Fm::All(..) => None,
        }
    }

    pub fn from_formula(f: &Formula) -> Fm {
        Self::convert(f, false)
    }

    fn convert(f: &Formula, negate: bool) -> Fm {
        match f {
            Formula::True => Fm::from_bool(!negate),
            Formula::False => Fm::from_bool(negate),
            Formula::Atom(a) => {
                let r = Fm::cmp(&Lin::from_term(&a.lhs), a.rel, &Lin::from_term(&a.rhs));
                if negate {
                    r.neg()
                } else {
                    r
                }
            }
            Formula::Not(g) => Self::convert(g, !negate),
            Formula::And(v) if !negate => Fm::and(v.iter().map(|g| Self::convert(g, false)).collect()),
            Formula::And(v) => Fm::or(v.iter().map(|g| Self::convert(g, true)).collect()),
            Formula::Or(v) if !negate => Fm::or(v.iter().map(|g| Self::convert(g, false)).collect()),
            Formula::Or(v) => Fm::and(v.iter().map(|g| Self::convert(g, true)).collect()),
            Formula::Exists(x, g) if !negate => Fm::ex(x.clone(), Self::convert(g, false)),
            Formula::Exists(x, g) => Fm::all(x.clone(), Self::convert(g, true)),
            Formula::Forall(x, g) if !negate => Fm::all(x.clone(), Self::convert(g, false)),
            Formula::Forall(x, g) => Fm::ex(x.clone(), Self::convert(g, true)),
        }
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            Fm::True => Formula::True,
            Fm::False => Formula::False,
            Fm::Atom(c) => Formula::Atom(c.to_atom()),
            Fm::And(v) => Formula::And(v.iter().map(Fm::to_formula).collect()),
            Fm::Or(v) => Formula::Or(v.iter().map(Fm::to_formula).collect()),
            Fm::Ex(x, f) => Formula::exists(x.clone(), f.to_formula()),
            Fm::All(x, f) => Formula::forall(x.clone(), f.to_formula()),
        }
    }
}

impl fmt::Display for Fm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn x() -> Lin {
        Lin::var(&Var::new("x"))
    }

    #[test]
    fn coefficient_reduction() {
        // 2x + 2 < 0  ~>  x + 1 < 0
        let f = Fm::atom(x().scale(&q(2, 1)).add_const(&q(2, 1)), CRel::Lt);
        assert_eq!(f, Fm::atom(x().add_const(&q(1, 1)), CRel::Lt));
        assert_eq!(f.to_string(), "x < -1");
    }

    #[test]
    fn integral_tightening() {
        let fx = Lin::floor_of(&x());
        // floor(x) < 1/2  ~>  floor(x) <= 0
        let f = Fm::cmp(&fx, Rel::Lt, &Lin::constant(q(1, 2)));
        assert_eq!(f, Fm::atom(fx.clone(), CRel::Le));
        // 2 floor(x) = 1 is false
        assert_eq!(Fm::cmp(&fx.scale(&q(2, 1)), Rel::Eq, &Lin::constant(q(1, 1))), Fm::False);
    }

    #[test]
    fn negation_is_involutive_on_atoms() {
        let a = Fm::atom(x().add_const(&q(-1, 3)), CRel::Lt);
        assert_eq!(a.neg().neg(), a);
        let b = Fm::int(&x().scale(&q(1, 2)));
        assert_eq!(b.neg().neg(), b);
    }

    #[test]
    fn prints_int_atoms() {
        assert_eq!(Fm::int(&x()).to_string(), "int(x)");
        assert_eq!(Fm::int(&x().scale(&q(1, 2))).neg().to_string(), "not int(1/2*x)");
    }
}
