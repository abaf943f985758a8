//! Surface syntax: terms, atoms, formulas and definable sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use crate::rational::Rational;

/// A variable or parameter symbol.
#[derive(Clone, Eq, Hash)]
pub struct Var(Arc<str>);

static FRESH: AtomicU64 = AtomicU64::new(0);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    /// A variable that has not been handed out before, named after `base`.
    pub fn fresh(base: &str) -> Self {
        let n = FRESH.fetch_add(1, AtomicOrdering::Relaxed);
        let stem = base.split("__").next().unwrap_or(base);
        Var(Arc::from(format!("{stem}__{n}")))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return std::cmp::Ordering::Equal;
        }
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

/// Terms of the language: rational constants, variables, rational scaling,
/// binary sums and the floor function.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(Rational),
    Var(Var),
    Scale(Rational, Box<Term>),
    Sum(Box<Term>, Box<Term>),
    Floor(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn constant(c: impl Into<Rational>) -> Term {
        Term::Const(c.into())
    }

    pub fn scale(c: Rational, t: Term) -> Term {
        Term::Scale(c, Box::new(t))
    }

    pub fn sum(a: Term, b: Term) -> Term {
        Term::Sum(Box::new(a), Box::new(b))
    }

    pub fn floor(t: Term) -> Term {
        Term::Floor(Box::new(t))
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Const(_) => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Scale(_, t) | Term::Floor(t) => t.collect_vars(out),
            Term::Sum(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    fn rename(&self, from: &Var, to: &Var) -> Term {
        match self {
            Term::Var(v) if v == from => Term::Var(to.clone()),
            Term::Const(_) | Term::Var(_) => self.clone(),
            Term::Scale(c, t) => Term::Scale(c.clone(), Box::new(t.rename(from, to))),
            Term::Floor(t) => Term::Floor(Box::new(t.rename(from, to))),
            Term::Sum(a, b) => Term::Sum(Box::new(a.rename(from, to)), Box::new(b.rename(from, to))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }

    /// The relation obtained by swapping both sides.
    pub fn flip(self) -> Rel {
        match self {
            Rel::Lt => Rel::Gt,
            Rel::Le => Rel::Ge,
            Rel::Ge => Rel::Le,
            Rel::Gt => Rel::Lt,
            r => r,
        }
    }
}

/// `lhs rel rhs`. After normalization `rhs` is the constant zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub lhs: Term,
    pub rel: Rel,
    pub rhs: Term,
}

impl Atom {
    pub fn new(lhs: Term, rel: Rel, rhs: Term) -> Self {
        Atom { lhs, rel, rhs }
    }

    /// `int(t)`, i.e. `floor(t) = t`.
    pub fn int(t: Term) -> Self {
        Atom { lhs: Term::floor(t.clone()), rel: Rel::Eq, rhs: t }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    pub fn atom(lhs: Term, rel: Rel, rhs: Term) -> Formula {
        Formula::Atom(Atom::new(lhs, rel, rhs))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn exists(v: Var, f: Formula) -> Formula {
        Formula::Exists(v, Box::new(f))
    }

    pub fn forall(v: Var, f: Formula) -> Formula {
        Formula::Forall(v, Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Or(vec![Formula::not(a), b])
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::And(vec![
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        ])
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                let mut vs = BTreeSet::new();
                a.lhs.collect_vars(&mut vs);
                a.rhs.collect_vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_quantifier_free),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// Renames free occurrences of `from` to `to`.
    pub fn rename_free(&self, from: &Var, to: &Var) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => Formula::Atom(Atom {
                lhs: a.lhs.rename(from, to),
                rel: a.rel,
                rhs: a.rhs.rename(from, to),
            }),
            Formula::Not(f) => Formula::not(f.rename_free(from, to)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.rename_free(from, to)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.rename_free(from, to)).collect()),
            Formula::Exists(v, _) | Formula::Forall(v, _) if v == from => self.clone(),
            Formula::Exists(v, f) => Formula::exists(v.clone(), f.rename_free(from, to)),
            Formula::Forall(v, f) => Formula::forall(v.clone(), f.rename_free(from, to)),
        }
    }

    /// Renames every binder that clashes with `avoid` or with an enclosing
    /// binder to a fresh variable.
    pub fn alpha_rename(&self, avoid: &BTreeSet<Var>) -> Formula {
        let mut scope: Vec<Var> = Vec::new();
        self.alpha_inner(avoid, &mut scope)
    }

    fn alpha_inner(&self, avoid: &BTreeSet<Var>, scope: &mut Vec<Var>) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => self.clone(),
            Formula::Not(f) => Formula::not(f.alpha_inner(avoid, scope)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.alpha_inner(avoid, scope)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.alpha_inner(avoid, scope)).collect()),
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let (v2, body) = if avoid.contains(v) || scope.contains(v) {
                    let nv = Var::fresh(v.name());
                    (nv.clone(), f.rename_free(v, &nv))
                } else {
                    (v.clone(), (**f).clone())
                };
                scope.push(v2.clone());
                let body = body.alpha_inner(avoid, scope);
                scope.pop();
                if matches!(self, Formula::Exists(..)) {
                    Formula::exists(v2, body)
                } else {
                    Formula::forall(v2, body)
                }
            }
        }
    }
}

/// Assignment of rational values to variables and parameters.
pub type Valuation = BTreeMap<Var, Rational>;

/// A subset of `M^n` given by a formula, its ordered ambient variables and
/// the parameter symbols it may mention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinableSet {
    pub formula: Formula,
    pub vars: Vec<Var>,
    pub params: BTreeSet<Var>,
}

impl DefinableSet {
    /// Builds a set, renaming binders so they never capture ambient variables
    /// or parameters. Free names outside `vars ∪ params` are rejected.
    pub fn new(
        formula: Formula,
        vars: Vec<Var>,
        params: BTreeSet<Var>,
    ) -> Result<Self, crate::Error> {
        let mut declared: BTreeSet<Var> = vars.iter().cloned().collect();
        if declared.len() != vars.len() {
            return Err(crate::Error::Usage("duplicate ambient variable".into()));
        }
        if let Some(p) = params.iter().find(|p| declared.contains(*p)) {
            return Err(crate::Error::Usage(format!("`{p}` is both a variable and a parameter")));
        }
        declared.extend(params.iter().cloned());
        if let Some(v) = formula.free_vars().into_iter().find(|v| !declared.contains(v)) {
            return Err(crate::Error::Undeclared(v.name().to_string()));
        }
        let formula = formula.alpha_rename(&declared);
        Ok(DefinableSet { formula, vars, params })
    }

    /// A set over plain variable names and no parameters.
    pub fn with_vars(formula: Formula, vars: &[&str]) -> Result<Self, crate::Error> {
        Self::new(formula, vars.iter().map(|v| Var::new(v)).collect(), BTreeSet::new())
    }

    pub fn dim_ambient(&self) -> usize {
        self.vars.len()
    }

    /// Same ambient space and parameters, different formula.
    pub fn with_formula(&self, formula: Formula) -> DefinableSet {
        DefinableSet { formula, vars: self.vars.clone(), params: self.params.clone() }
    }
}
