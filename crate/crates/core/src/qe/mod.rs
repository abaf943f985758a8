//! Quantifier elimination, sentence decision, projection and evaluation.
//!
//! A quantified variable that occurs under a floor is split as `x = L·k + v`
//! with `k ∈ ℤ`, `v ∈ [0, L)` and `L` the lattice modulus of `x`; floors are
//! then resolved into finitely many cases, `v` is eliminated over the reals and
//! `k` over the integers. Bounds on `k` come back as floor terms, so the output
//! stays inside the surface language.

mod int;
mod onevar;
mod real;

pub use onevar::{normal_form_fm, one_var_normal_form, sample_point, simplest_between, OneVarNormalForm, Piece};

use std::cell::Cell;
use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::fm::{CRel, Constraint, Fm};
use crate::linear::{Key, Lin};
use crate::rational::Rational;
use crate::simplify::simplify;
use crate::syntax::{DefinableSet, Formula, Valuation, Var};
use crate::{Error, Result};

/// Resource limits. Failure is deterministic: it depends only on the input.
#[derive(Clone, Copy, Debug)]
pub struct QeConfig {
    /// Largest intermediate formula, in nodes.
    pub max_nodes: usize,
}

impl Default for QeConfig {
    fn default() -> Self {
        QeConfig { max_nodes: 1_000_000 }
    }
}

pub(crate) struct Budget {
    max_nodes: usize,
    work: Cell<usize>,
}

impl Budget {
    pub(crate) fn new(cfg: &QeConfig) -> Self {
        Budget { max_nodes: cfg.max_nodes, work: Cell::new(0) }
    }

    /// Accounts for `n` units of work; the total is bounded by a fixed
    /// multiple of the node budget.
    pub(crate) fn charge(&self, n: usize) -> Result<()> {
        let w = self.work.get().saturating_add(n);
        self.work.set(w);
        if w > self.max_nodes.saturating_mul(64) {
            return Err(Error::ResourceLimit(format!("work exceeded {} units", self.max_nodes * 64)));
        }
        Ok(())
    }

    pub(crate) fn check(&self, f: Fm) -> Result<Fm> {
        let s = f.size();
        if s > self.max_nodes {
            return Err(Error::ResourceLimit(format!("formula grew to {s} nodes")));
        }
        self.charge(s)?;
        Ok(f)
    }
}

/// Disjunctive normal form of a quantifier-free formula, unless it would
/// exceed `cap` disjuncts.
pub(crate) fn dnf(f: &Fm, cap: usize) -> Option<Vec<Vec<Constraint>>> {
    match f {
        Fm::True => Some(vec![vec![]]),
        Fm::False => Some(vec![]),
        Fm::Atom(c) => Some(vec![vec![c.clone()]]),
        Fm::Or(v) => {
            let mut out = Vec::new();
            for g in v {
                out.extend(dnf(g, cap)?);
                if out.len() > cap {
                    return None;
                }
            }
            Some(out)
        }
        Fm::And(v) => {
            let mut acc: Vec<Vec<Constraint>> = vec![vec![]];
            for g in v {
                let d = dnf(g, cap)?;
                if acc.len() * d.len() > cap {
                    return None;
                }
                let mut next = Vec::with_capacity(acc.len() * d.len());
                for a in &acc {
                    for b in &d {
                        let mut c = a.clone();
                        c.extend(b.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
            }
            Some(acc)
        }
        Fm::Ex(..) | Fm::All(..) => None,
    }
}

fn in_floor(f: &Fm, x: &Var) -> bool {
    let mut atoms = Vec::new();
    f.collect_atoms(&mut atoms);
    atoms.iter().any(|c| c.lin.in_floor(x))
}

fn all_floors(f: &Fm) -> BTreeSet<Arc<Lin>> {
    let mut atoms = Vec::new();
    f.collect_atoms(&mut atoms);
    let mut out = BTreeSet::new();
    for c in atoms {
        c.lin.collect_floors(&mut out);
    }
    out
}

/// Least `L ≥ 1` such that every coefficient path from a floor down to `x`
/// becomes integral after multiplication by `L`.
fn lattice_modulus(f: &Fm, x: &Var) -> BigInt {
    fn paths(arg: &Lin, m: &Rational, x: &Var, acc: &mut BigInt) {
        for (k, c) in arg.terms() {
            match k {
                Key::Var(w) if w == x => *acc = acc.lcm(&(m * c).denom()),
                Key::Var(_) => {}
                Key::Floor(inner) => paths(inner, &(m * c), x, acc),
            }
        }
    }
    let mut acc = BigInt::one();
    for arg in all_floors(f) {
        paths(&arg, &Rational::one(), x, &mut acc);
    }
    acc
}

fn mentions_any(l: &Lin, vs: &[&Var]) -> bool {
    vs.iter().any(|v| l.mentions(v))
}

/// An innermost floor argument mentioning `k` or `v`.
fn innermost_floor(f: &Fm, k: &Var, v: &Var) -> Option<Arc<Lin>> {
    all_floors(f).into_iter().find(|arg| {
        mentions_any(arg, &[k, v]) && !arg.in_floor(k) && !arg.in_floor(v)
    })
}

/// Cases `(replacement, side condition)` for `floor(arg)` where
/// `arg = cₖ·k + cᵥ·v + r`, `k ∈ ℤ`, `v ∈ [0, L)` and `cₖ ∈ ℤ`.
fn floor_cases(arg: &Lin, k: &Var, v: &Var, modulus: &Rational) -> Vec<(Lin, Fm)> {
    let ck = arg.coeff_var(k);
    let cv = arg.coeff_var(v);
    debug_assert!(ck.is_integer(), "path coefficient {ck} not integral");
    let r = arg.without_var(k).without_var(v);
    let mut int_items = Vec::new();
    let mut frac_items = Vec::new();
    for (key, c) in r.terms() {
        if key.is_floor() {
            let n = c.floor();
            if !n.is_zero() {
                int_items.push((key.clone(), n.clone()));
            }
            if c != &n {
                frac_items.push((key.clone(), c - &n));
            }
        } else {
            frac_items.push((key.clone(), c.clone()));
        }
    }
    let c0 = r.constant_part();
    let base = Lin::var(k).scale(&ck).add(&Lin::from_parts(int_items, c0.floor()));
    let frac = Lin::from_parts(frac_items, c0 - &c0.floor());
    if cv.is_zero() {
        return vec![(base.add(&Lin::floor_of(&frac)), Fm::True)];
    }
    let span = &cv * modulus;
    let (g, rest, lo, hi) = if frac.is_constant() {
        let q = frac.constant_part().clone();
        let (lo, hi) = if cv.is_positive() {
            (q.floor(), (&span + &q).ceil() - Rational::one())
        } else {
            ((&span + &q).floor(), q.floor())
        };
        (Lin::zero(), frac, lo, hi)
    } else {
        let g = Lin::floor_of(&frac);
        let rest = frac.sub(&g);
        let (lo, hi) = if cv.is_positive() { (Rational::zero(), span.ceil()) } else { (span.floor(), Rational::zero()) };
        (g, rest, lo, hi)
    };
    let value = Lin::var(v).scale(&cv).add(&rest);
    let mut out = Vec::new();
    let mut j = lo;
    while j <= hi {
        let repl = base.add(&g).add_const(&j);
        let cond = Fm::and2(
            Fm::atom(Lin::constant(j.clone()).sub(&value), CRel::Le),
            Fm::atom(value.add_const(&-(&j + &Rational::one())), CRel::Lt),
        );
        out.push((repl, cond));
        j = &j + &Rational::one();
    }
    out
}

/// Resolves every floor mentioning `k` or `v` into case splits. Cases whose
/// accumulated side conditions on `v` are infeasible are dropped early.
fn split_floors(f: Fm, range: Vec<Constraint>, k: &Var, v: &Var, modulus: &Rational, budget: &Budget) -> Result<Vec<Fm>> {
    let mut stack = vec![(f, range)];
    let mut done = Vec::new();
    while let Some((h, conds)) = stack.pop() {
        let h = simplify(&h);
        if h == Fm::False {
            continue;
        }
        match innermost_floor(&h, k, v) {
            None => done.push(Fm::and2(h, Fm::and(conds.into_iter().map(Fm::Atom).collect()))),
            Some(arg) => {
                let cases = floor_cases(&arg, k, v, modulus);
                budget.charge(cases.len() * h.size())?;
                for (repl, cond) in cases.into_iter().rev() {
                    let mut c2 = conds.clone();
                    match cond {
                        Fm::False => continue,
                        Fm::True => {}
                        other => {
                            let mut atoms = Vec::new();
                            other.collect_atoms(&mut atoms);
                            c2.extend(atoms.into_iter().cloned());
                        }
                    }
                    if simplify(&real::fm_conj(v, &c2, budget)?) == Fm::False {
                        continue;
                    }
                    let h2 = h.map_lins(&|l| l.replace_floor(&arg, &repl));
                    stack.push((h2, c2));
                }
            }
        }
    }
    Ok(done)
}

/// `∃x φ` for a quantifier-free φ and `x` ranging over `M`.
fn exists_var(x: &Var, f: &Fm, budget: &Budget) -> Result<Fm> {
    junction_exists(x, f, budget, &|x, g, b| {
        let conj = top_conjuncts(g);
        if let Some(e) = conj.iter().find_map(|c| pinning_equation(x, c)) {
            return Ok(simplify(&g.subst(x, &e)));
        }
        if !in_floor(g, x) {
            return real::exists(x, g, b);
        }
        if let Some(r) = real::monotone_exists(x, g, b) {
            return r;
        }
        if let Some((a, rest)) = conj.iter().find_map(|c| lattice_equation(x, c)) {
            // x = (m − rest)/a with m ∈ ℤ
            let m = Var::fresh("m");
            let e = Lin::var(&m).sub(&rest).scale(&a.recip());
            return exists_int_mixed(&m, &g.subst(x, &e), b);
        }
        exists_mixed(x, g, b)
    })
}

fn top_conjuncts(f: &Fm) -> Vec<&Constraint> {
    match f {
        Fm::Atom(c) => vec![c],
        Fm::And(v) => v.iter().filter_map(|g| if let Fm::Atom(c) = g { Some(c) } else { None }).collect(),
        _ => vec![],
    }
}

/// `e` with `c ⇔ x = e`, when `x` occurs in `c` only outside floors.
fn pinning_equation(x: &Var, c: &Constraint) -> Option<Lin> {
    if c.rel != CRel::Eq || c.lin.in_floor(x) {
        return None;
    }
    let a = c.lin.coeff_var(x);
    (!a.is_zero()).then(|| c.lin.without_var(x).scale(&-a.recip()))
}

/// `(a, r)` with `c ⇔ int(a·x + r)`, when `x` occurs in `c` only outside floors.
fn lattice_equation(x: &Var, c: &Constraint) -> Option<(Rational, Lin)> {
    let t = c.as_int()?;
    if c.rel != CRel::Eq || t.in_floor(x) {
        return None;
    }
    let a = t.coeff_var(x);
    (!a.is_zero()).then(|| (a, t.without_var(x)))
}

/// `∃m ∈ ℤ φ` for `m` possibly under floors: `m = L·k + i` over the residues
/// `i` modulo the lattice modulus `L`, which turns every floor mentioning
/// `m` into `k` times an integer plus a floor free of `k`.
fn exists_int_mixed(m: &Var, f: &Fm, budget: &Budget) -> Result<Fm> {
    let modulus = lattice_modulus(f, m);
    let l = Rational::from_bigints(modulus.clone(), BigInt::one());
    let k = Var::fresh("k");
    let none = Var::fresh("v");
    let mut out = Vec::new();
    let mut i = BigInt::from(0);
    while i < modulus {
        let sub = Lin::var(&k).scale(&l).add_const(&Rational::from_bigints(i.clone(), BigInt::one()));
        budget.charge(f.size())?;
        for case in split_floors(f.subst(m, &sub), Vec::new(), &k, &none, &l, budget)? {
            let r = exists_int_var(&k, &case, budget)?;
            if r == Fm::True {
                return Ok(Fm::True);
            }
            out.push(r);
        }
        i += 1;
    }
    budget.check(simplify(&Fm::or(out)))
}

/// `∃k ∈ ℤ φ` for `k` outside floors.
fn exists_int_var(k: &Var, f: &Fm, budget: &Budget) -> Result<Fm> {
    junction_exists(k, f, budget, &|k, g, b| int::exists(k, g, b))
}

type Core<'a> = dyn Fn(&Var, &Fm, &Budget) -> Result<Fm> + 'a;

/// Distributes over disjunctions and pulls out independent conjuncts before
/// handing the remaining body to `core`.
fn junction_exists(x: &Var, f: &Fm, budget: &Budget, core: &Core<'_>) -> Result<Fm> {
    let f = simplify(f);
    if !f.mentions(x) {
        return Ok(f);
    }
    let r = match &f {
        Fm::Or(v) => {
            let mut out = Vec::with_capacity(v.len());
            for g in v {
                let r = junction_exists(x, g, budget, core)?;
                if r == Fm::True {
                    return Ok(Fm::True);
                }
                out.push(r);
            }
            Fm::or(out)
        }
        Fm::And(v) => {
            let (dep, indep): (Vec<Fm>, Vec<Fm>) = v.iter().cloned().partition(|g| g.mentions(x));
            let body = Fm::and(dep);
            let r = match &body {
                Fm::Or(_) => junction_exists(x, &body, budget, core)?,
                _ => core(x, &body, budget)?,
            };
            let mut all = indep;
            all.push(r);
            Fm::and(all)
        }
        _ => core(x, &f, budget)?,
    };
    budget.check(simplify(&r))
}

fn exists_mixed(x: &Var, f: &Fm, budget: &Budget) -> Result<Fm> {
    let modulus = Rational::from_bigints(lattice_modulus(f, x), BigInt::one());
    let k = Var::fresh("k");
    let v = Var::fresh("v");
    let sub = Lin::var(&k).scale(&modulus).add(&Lin::var(&v));
    let g = f.subst(x, &sub);
    let range = vec![
        Constraint { lin: Lin::var(&v).neg(), rel: CRel::Le },
        Constraint { lin: Lin::var(&v).add_const(&-modulus.clone()), rel: CRel::Lt },
    ];
    let mut out = Vec::new();
    for case in split_floors(g, range, &k, &v, &modulus, budget)? {
        let r = exists_var(&v, &case, budget)?;
        let r = exists_int_var(&k, &r, budget)?;
        if r == Fm::True {
            return Ok(Fm::True);
        }
        out.push(r);
    }
    budget.check(simplify(&Fm::or(out)))
}

/// Eliminates a block of existential variables, cheapest first.
fn exists_block(vars: &[Var], f: Fm, budget: &Budget) -> Result<Fm> {
    let mut pending: Vec<Var> = vars.to_vec();
    let mut f = f;
    while !pending.is_empty() {
        let mut atoms = Vec::new();
        f.collect_atoms(&mut atoms);
        let score = |x: &Var| {
            let under = atoms.iter().filter(|c| c.lin.in_floor(x)).count();
            let direct = atoms.iter().filter(|c| c.lin.mentions(x)).count();
            (under, direct)
        };
        let (i, _) = pending.iter().enumerate().min_by_key(|(_, x)| score(x)).expect("nonempty");
        let x = pending.remove(i);
        f = exists_var(&x, &f, budget)?;
    }
    Ok(f)
}

fn elim(f: &Fm, budget: &Budget) -> Result<Fm> {
    Ok(match f {
        Fm::True | Fm::False | Fm::Atom(_) => f.clone(),
        Fm::And(v) => {
            let mut out = Vec::with_capacity(v.len());
            for g in v {
                out.push(elim(g, budget)?);
            }
            simplify(&Fm::and(out))
        }
        Fm::Or(v) => {
            let mut out = Vec::with_capacity(v.len());
            for g in v {
                out.push(elim(g, budget)?);
            }
            simplify(&Fm::or(out))
        }
        Fm::Ex(..) | Fm::All(..) => {
            let universal = matches!(f, Fm::All(..));
            let mut vars = Vec::new();
            let mut body = f;
            loop {
                match body {
                    Fm::Ex(x, b) if !universal => {
                        vars.push(x.clone());
                        body = b;
                    }
                    Fm::All(x, b) if universal => {
                        vars.push(x.clone());
                        body = b;
                    }
                    _ => break,
                }
            }
            let inner = elim(body, budget)?;
            if universal {
                exists_block(&vars, inner.neg(), budget)?.neg()
            } else {
                exists_block(&vars, inner, budget)?
            }
        }
    })
}

/// Quantifier-free equivalent of `f`.
pub fn eliminate_fm_with(cfg: &QeConfig, f: &Fm) -> Result<Fm> {
    let budget = Budget::new(cfg);
    let r = elim(f, &budget)?;
    Ok(simplify(&r))
}

pub fn eliminate_fm(f: &Fm) -> Result<Fm> {
    eliminate_fm_with(&QeConfig::default(), f)
}

/// `∃ vars . f`, quantifier-free.
pub fn exists_fm(vars: &[Var], f: &Fm) -> Result<Fm> {
    let budget = Budget::new(&QeConfig::default());
    let body = elim(f, &budget)?;
    exists_block(vars, body, &budget)
}

/// `∀ vars . f`, quantifier-free.
pub fn forall_fm(vars: &[Var], f: &Fm) -> Result<Fm> {
    Ok(exists_fm(vars, &f.neg())?.neg())
}

/// Truth value of a sentence.
pub fn decide_fm_with(cfg: &QeConfig, f: &Fm) -> Result<bool> {
    let free = f.free_vars();
    if !free.is_empty() {
        let names: Vec<_> = free.iter().map(|v| v.name().to_string()).collect();
        return Err(Error::FreeVariables(names.join(", ")));
    }
    match eliminate_fm_with(cfg, f)? {
        Fm::True => Ok(true),
        Fm::False => Ok(false),
        other => Err(Error::Internal(format!("closed formula did not fold: {other}"))),
    }
}

pub fn decide_fm(f: &Fm) -> Result<bool> {
    decide_fm_with(&QeConfig::default(), f)
}

/// Whether `f` holds for all values of its free variables.
pub fn valid(f: &Fm) -> Result<bool> {
    let vars: Vec<Var> = f.free_vars().into_iter().collect();
    Ok(!decide_fm(&exists_fm(&vars, &f.neg())?)?)
}

/// Whether `f` holds for some values of its free variables.
pub fn satisfiable(f: &Fm) -> Result<bool> {
    let vars: Vec<Var> = f.free_vars().into_iter().collect();
    decide_fm(&exists_fm(&vars, f)?)
}

pub fn equivalent(a: &Fm, b: &Fm) -> Result<bool> {
    valid(&Fm::iff(a.clone(), b.clone()))
}

/// `a ⊆ b` as sets over their common free variables.
pub fn implies(a: &Fm, b: &Fm) -> Result<bool> {
    valid(&Fm::implies(a.clone(), b.clone()))
}

impl DefinableSet {
    /// Internal form of the defining formula.
    pub fn fm(&self) -> Fm {
        Fm::from_formula(&self.formula)
    }

    pub fn from_fm(&self, f: &Fm) -> DefinableSet {
        self.with_formula(f.to_formula())
    }
}

pub fn eliminate_with(cfg: &QeConfig, s: &DefinableSet) -> Result<DefinableSet> {
    Ok(s.from_fm(&eliminate_fm_with(cfg, &s.fm())?))
}

/// Quantifier-free set equal to `s`.
pub fn eliminate(s: &DefinableSet) -> Result<DefinableSet> {
    eliminate_with(&QeConfig::default(), s)
}

/// Truth value of a set over `M⁰` without uninstantiated parameters.
pub fn decide(s: &DefinableSet) -> Result<bool> {
    if !s.vars.is_empty() {
        return Err(Error::FreeVariables(
            s.vars.iter().map(|v| v.name().to_string()).collect::<Vec<_>>().join(", "),
        ));
    }
    decide_fm(&s.fm())
}

/// Image of `s` under the coordinate projection onto `sig` (ambient indices).
pub fn project(s: &DefinableSet, sig: &[usize]) -> Result<DefinableSet> {
    let n = s.vars.len();
    if sig.iter().any(|&i| i >= n) || (1..sig.len()).any(|i| sig[..i].contains(&sig[i])) {
        return Err(Error::Usage(format!("bad projection signature {sig:?} for arity {n}")));
    }
    let drop: Vec<Var> = (0..n).filter(|i| !sig.contains(i)).map(|i| s.vars[i].clone()).collect();
    let f = simplify(&exists_fm(&drop, &s.fm())?);
    Ok(DefinableSet {
        formula: f.to_formula(),
        vars: sig.iter().map(|&i| s.vars[i].clone()).collect(),
        params: s.params.clone(),
    })
}

/// Substitutes rational values for some free names.
pub fn instantiate(f: &Fm, v: &Valuation) -> Fm {
    if v.is_empty() {
        return f.clone();
    }
    let map = v.iter().map(|(k, q)| (k.clone(), Lin::constant(q.clone()))).collect();
    match f {
        Fm::Ex(x, b) => Fm::ex(x.clone(), instantiate(b, &without(v, x))),
        Fm::All(x, b) => Fm::all(x.clone(), instantiate(b, &without(v, x))),
        Fm::And(items) => Fm::and(items.iter().map(|g| instantiate(g, v)).collect()),
        Fm::Or(items) => Fm::or(items.iter().map(|g| instantiate(g, v)).collect()),
        Fm::Atom(c) => Fm::atom(c.lin.subst_many(&map), c.rel),
        Fm::True | Fm::False => f.clone(),
    }
}

fn without(v: &Valuation, x: &Var) -> Valuation {
    let mut v = v.clone();
    v.remove(x);
    v
}

/// Truth of `s` at the point and parameter values given by `v`.
pub fn evaluate_at(s: &DefinableSet, v: &Valuation) -> Result<bool> {
    for name in s.vars.iter().chain(s.params.iter()) {
        if !v.contains_key(name) && s.formula.free_vars().contains(name) {
            return Err(Error::Missing(name.name().to_string()));
        }
    }
    let f = s.fm();
    if f.is_qf() {
        return f.eval(&|x| v.get(x).cloned()).ok_or_else(|| Error::Missing("variable".into()));
    }
    decide_fm(&instantiate(&f, v))
}

/// Negation normal form with canonical atoms.
pub fn normalize(f: &Formula) -> Formula {
    Fm::from_formula(f).to_formula()
}

impl DefinableSet {
    /// `s` with the given parameter values substituted.
    pub fn instantiate(&self, v: &Valuation) -> DefinableSet {
        let f = instantiate(&self.fm(), v);
        DefinableSet {
            formula: f.to_formula(),
            vars: self.vars.clone(),
            params: self.params.iter().filter(|p| !v.contains_key(*p)).cloned().collect(),
        }
    }
}

#[cfg(test)]
mod tests;
