//! Discrete closure over symbolic parameters, a computable infinitesimal
//! extension, and generic points of definable sets.
//!
//! Declared parameter symbols are taken to be linearly independent over the
//! rationals together with 1. A one-variable set definable from symbols `A`
//! that is discrete and closed lies in finitely many points and lattices
//! whose offsets are rational-affine in `A`, so the discrete closure of `A`
//! is the rational-affine span of `{1} ∪ A`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::cells::{decompose, MAX_ARITY};
use crate::dimension::{dim, DimensionValue};
use crate::fm::Fm;
use crate::linear::{Key, Lin};
use crate::parse::parse_term;
use crate::pregeometry::ClosureOracle;
use crate::qe::{eliminate, sample_point, valid};
use crate::rational::Rational;
use crate::syntax::{Atom, DefinableSet, Formula, Term, Var};
use crate::topology::classify_topology;
use crate::{Error, Result};

/// `c + Σ qᵢ·αᵢ` over parameter symbols.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SymbolicReal {
    pub constant: Rational,
    /// Nonzero coefficients only.
    pub coeffs: BTreeMap<Var, Rational>,
}

impl SymbolicReal {
    pub fn rational(c: Rational) -> Self {
        SymbolicReal { constant: c, coeffs: BTreeMap::new() }
    }

    pub fn symbol(v: &Var) -> Self {
        SymbolicReal { constant: Rational::zero(), coeffs: [(v.clone(), Rational::one())].into() }
    }

    /// Parses a floor-free term over `declared` symbols.
    pub fn parse(text: &str, declared: &BTreeSet<Var>) -> Result<Self> {
        Self::from_lin(&Lin::from_term(&parse_term(text)?), declared)
    }

    pub fn from_lin(l: &Lin, declared: &BTreeSet<Var>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (k, c) in l.terms() {
            match k {
                Key::Var(v) if declared.contains(v) => {
                    coeffs.insert(v.clone(), c.clone());
                }
                Key::Var(v) => return Err(Error::Undeclared(v.name().to_string())),
                Key::Floor(_) => return Err(Error::Unsupported("floor in a symbolic real".into())),
            }
        }
        Ok(SymbolicReal { constant: l.constant_part().clone(), coeffs })
    }

    pub fn to_lin(&self) -> Lin {
        let mut l = Lin::constant(self.constant.clone());
        for (v, c) in &self.coeffs {
            l = l.add_scaled(&Lin::var(v), c);
        }
        l
    }

    pub fn symbols(&self) -> BTreeSet<Var> {
        self.coeffs.keys().cloned().collect()
    }

    pub fn add(&self, o: &SymbolicReal) -> SymbolicReal {
        SymbolicReal::from_lin(&self.to_lin().add(&o.to_lin()), &self.symbols().union(&o.symbols()).cloned().collect())
            .expect("symbols of the operands")
    }

    pub fn scale(&self, c: &Rational) -> SymbolicReal {
        SymbolicReal::from_lin(&self.to_lin().scale(c), &self.symbols()).expect("own symbols")
    }
}

impl fmt::Display for SymbolicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_lin().to_term())
    }
}

/// Rank over the rationals of a list of rows.
pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let width = m.iter().map(Vec::len).max().unwrap_or(0);
    for r in &mut m {
        r.resize(width, Rational::zero());
    }
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = &row[col] / &pivot[col];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &(&f * y);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The discrete-closure oracle over declared symbols: `b ∈ discl(A)` iff
/// `b` is a rational-affine combination of the elements of `A`.
#[derive(Clone, Debug)]
pub struct DisclOracle {
    pub symbols: Vec<Var>,
}

impl DisclOracle {
    pub fn new(symbols: Vec<Var>) -> Self {
        DisclOracle { symbols }
    }

    fn row(&self, b: &SymbolicReal) -> Result<Vec<Rational>> {
        if let Some(v) = b.coeffs.keys().find(|v| !self.symbols.contains(v)) {
            return Err(Error::Undeclared(v.name().to_string()));
        }
        Ok(self.symbols.iter().map(|s| b.coeffs.get(s).cloned().unwrap_or_else(Rational::zero)).collect())
    }
}

impl ClosureOracle for DisclOracle {
    type Elem = SymbolicReal;

    fn member(&self, b: &SymbolicReal, a: &[SymbolicReal]) -> Result<bool> {
        let mut rows: Vec<Vec<Rational>> = a.iter().map(|x| self.row(x)).collect::<Result<_>>()?;
        let before = rational_rank(&rows);
        rows.push(self.row(b)?);
        Ok(rational_rank(&rows) == before)
    }

    fn describe(&self) -> String {
        let names: Vec<&str> = self.symbols.iter().map(Var::name).collect();
        format!("discrete closure over symbols {}", names.join(","))
    }
}

/// `b ∈ discl(over)`.
pub fn discl_member(b: &SymbolicReal, declared: &[Var], over: &[Var]) -> Result<bool> {
    if let Some(v) = over.iter().find(|v| !declared.contains(v)) {
        return Err(Error::Undeclared(v.name().to_string()));
    }
    let o = DisclOracle::new(declared.to_vec());
    let a: Vec<SymbolicReal> = over.iter().map(SymbolicReal::symbol).collect();
    o.member(b, &a)
}

/// A discrete closed set in the variable `x`, definable from `over`, that
/// contains `b`: the lattice `α + (1/q)ℤ` when `b = α + p/q` for a single
/// symbol `α`, otherwise the point itself. Certified before it is returned.
pub fn discl_witness(b: &SymbolicReal, declared: &[Var], over: &[Var]) -> Result<DefinableSet> {
    if !discl_member(b, declared, over)? {
        return Err(Error::Precondition(format!("{b} is not in the discrete closure of the given symbols")));
    }
    let x = Var::new("x");
    let unit_symbol = b.coeffs.len() == 1 && b.coeffs.values().all(Rational::is_one);
    let formula = if unit_symbol && !b.constant.is_zero() {
        let (a, _) = b.coeffs.iter().next().expect("one symbol");
        let den = Rational::from_bigints(b.constant.denom(), 1.into());
        let offset = Term::sum(Term::Var(x.clone()), Term::scale(-Rational::one(), Term::Var(a.clone())));
        Formula::Atom(Atom::int(Term::scale(den, offset)))
    } else {
        Formula::atom(Term::Var(x.clone()), crate::syntax::Rel::Eq, b.to_lin().to_term())
    };
    let w = DefinableSet::new(formula, vec![x.clone()], over.iter().cloned().collect())?;
    let flags = classify_topology(&w)?;
    if !(flags.is_discrete && flags.is_closed) {
        return Err(Error::Internal(format!("witness `{}` is not discrete and closed", w.formula)));
    }
    if !valid(&w.fm().subst(&x, &b.to_lin()))? {
        return Err(Error::Internal(format!("witness `{}` misses {b}", w.formula)));
    }
    Ok(w)
}

/// `s + q₁ε₁ + … + q_kε_k` with rational `s` and `ε₁ ≫ ε₂ ≫ … > 0`
/// infinitesimal.
#[derive(Clone, Debug)]
pub struct NonstandardNumber {
    pub standard: Rational,
    pub inf: Vec<Rational>,
}

impl NonstandardNumber {
    pub fn rational(s: Rational) -> Self {
        NonstandardNumber { standard: s, inf: vec![] }
    }

    /// `εᵢ`, counting from 1.
    pub fn eps(i: usize) -> Self {
        assert!(i >= 1, "infinitesimals are numbered from 1");
        let mut inf = vec![Rational::zero(); i];
        inf[i - 1] = Rational::one();
        NonstandardNumber { standard: Rational::zero(), inf }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.inf.len().max(o.inf.len());
        let at = |v: &[Rational], i: usize| v.get(i).cloned().unwrap_or_else(Rational::zero);
        NonstandardNumber {
            standard: &self.standard + &o.standard,
            inf: (0..n).map(|i| &at(&self.inf, i) + &at(&o.inf, i)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        NonstandardNumber { standard: &self.standard * c, inf: self.inf.iter().map(|q| q * c).collect() }
    }

    pub fn is_standard(&self) -> bool {
        self.inf.iter().all(Rational::is_zero)
    }

    /// Sign of the infinitesimal tail.
    fn tail_sign(&self) -> Ordering {
        self.inf.iter().find(|q| !q.is_zero()).map_or(Ordering::Equal, |q| q.signum().cmp(&0))
    }
}

pub fn ns_compare(a: &NonstandardNumber, b: &NonstandardNumber) -> Ordering {
    let d = a.add(&b.scale(&-Rational::one()));
    d.standard.cmp(&Rational::zero()).then(d.tail_sign())
}

impl PartialEq for NonstandardNumber {
    fn eq(&self, o: &Self) -> bool {
        ns_compare(self, o) == Ordering::Equal
    }
}

impl Eq for NonstandardNumber {}

impl PartialOrd for NonstandardNumber {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for NonstandardNumber {
    fn cmp(&self, o: &Self) -> Ordering {
        ns_compare(self, o)
    }
}

impl fmt::Display for NonstandardNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        if !self.standard.is_zero() || self.is_standard() {
            out = self.standard.to_string();
        }
        for (i, q) in self.inf.iter().enumerate().filter(|(_, q)| !q.is_zero()) {
            let mag = q.abs();
            let coef = if mag.is_one() { String::new() } else { format!("{mag}*") };
            let term = format!("{coef}eps{}", i + 1);
            out = match (out.is_empty(), q.is_negative()) {
                (true, false) => term,
                (true, true) => format!("-{term}"),
                (false, false) => format!("{out} + {term}"),
                (false, true) => format!("{out} - {term}"),
            };
        }
        f.write_str(&out)
    }
}

impl Serialize for NonstandardNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn ns_floor(x: &NonstandardNumber) -> NonstandardNumber {
    let s = &x.standard;
    let f = if s.is_integer() && x.tail_sign() == Ordering::Less { s - &Rational::one() } else { s.floor() };
    NonstandardNumber::rational(f)
}

fn ns_lin(l: &Lin, env: &BTreeMap<Var, NonstandardNumber>) -> Result<NonstandardNumber> {
    let mut acc = NonstandardNumber::rational(l.constant_part().clone());
    for (k, c) in l.terms() {
        let v = match k {
            Key::Var(v) => env.get(v).cloned().ok_or_else(|| Error::Missing(v.name().to_string()))?,
            Key::Floor(a) => ns_floor(&ns_lin(a, env)?),
        };
        acc = acc.add(&v.scale(c));
    }
    Ok(acc)
}

/// Truth of a quantifier-free formula at a point of the extension.
pub fn eval_qf_at(f: &Fm, vars: &[Var], point: &[NonstandardNumber]) -> Result<bool> {
    if vars.len() != point.len() {
        return Err(Error::Usage("point and variables differ in length".into()));
    }
    let env: BTreeMap<Var, NonstandardNumber> = vars.iter().cloned().zip(point.iter().cloned()).collect();
    eval_in(f, &env)
}

fn eval_in(f: &Fm, env: &BTreeMap<Var, NonstandardNumber>) -> Result<bool> {
    Ok(match f {
        Fm::True => true,
        Fm::False => false,
        Fm::Atom(c) => {
            let v = ns_lin(&c.lin, env)?;
            let sign = ns_compare(&v, &NonstandardNumber::rational(Rational::zero()));
            c.rel.holds(&Rational::from_int(sign as i64))
        }
        Fm::And(v) => {
            for g in v {
                if !eval_in(g, env)? {
                    return Ok(false);
                }
            }
            true
        }
        Fm::Or(v) => {
            for g in v {
                if eval_in(g, env)? {
                    return Ok(true);
                }
            }
            false
        }
        Fm::Ex(..) | Fm::All(..) => return Err(Error::Precondition("quantifier in evaluated formula".into())),
    })
}

/// Rank over the rationals of the infinitesimal parts of the coordinates.
pub fn infinitesimal_rank(point: &[NonstandardNumber]) -> usize {
    rational_rank(&point.iter().map(|p| p.inf.clone()).collect::<Vec<_>>())
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericWitness {
    pub point: Vec<NonstandardNumber>,
    /// Base coordinates of the cell the point was taken from.
    pub signature: Vec<usize>,
    /// Rational point of the cell's base the point is infinitely close to.
    #[serde(serialize_with = "strings")]
    pub base_point: Vec<Rational>,
    /// Sheet index values, by name.
    #[serde(serialize_with = "named")]
    pub indices: Vec<(Var, Rational)>,
    pub claimed_rank: usize,
}

fn strings<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

fn named<S: serde::Serializer>(v: &[(Var, Rational)], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(v.iter().map(|(k, q)| (k.to_string(), q.to_string())))
}

/// A point of `s` of rank `dim s`: a rational base point of a top cell moved
/// by fresh infinitesimals in each base coordinate, lifted along one sheet.
pub fn make_generic(s: &DefinableSet) -> Result<GenericWitness> {
    if !s.params.is_empty() {
        return Err(Error::Unsupported("generic witnesses need a set without parameters".into()));
    }
    let DimensionValue::Finite(d) = dim(s)? else {
        return Err(Error::Precondition("the empty set has no generic point".into()));
    };
    let dec = decompose(s)?;
    let cell = dec
        .cells
        .iter()
        .find(|c| c.signature.len() == d)
        .ok_or_else(|| Error::Internal("no cell of full dimension".into()))?;
    let xs = cell.base_vars();
    let mut unknowns = xs.clone();
    unknowns.extend(cell.indices.iter().cloned());
    let g = Fm::and2(cell.base.clone(), cell.index_constraints.clone());
    let vals = sample_point(&g, &unknowns)?.ok_or_else(|| Error::Internal("top cell has no rational point".into()))?;
    let mut env: BTreeMap<Var, NonstandardNumber> = BTreeMap::new();
    for (i, x) in xs.iter().enumerate() {
        env.insert(x.clone(), NonstandardNumber::rational(vals[i].clone()).add(&NonstandardNumber::eps(i + 1)));
    }
    for (k, v) in cell.indices.iter().zip(&vals[xs.len()..]) {
        env.insert(k.clone(), NonstandardNumber::rational(v.clone()));
    }
    let mut point = Vec::new();
    for v in &s.vars {
        let value = match cell.sheets.iter().find(|(y, _)| y == v) {
            Some((_, h)) => ns_lin(h, &env)?,
            None => env[v].clone(),
        };
        point.push(value);
    }
    let w = GenericWitness {
        point,
        signature: cell.signature.clone(),
        base_point: vals[..xs.len()].to_vec(),
        indices: cell.indices.iter().cloned().zip(vals[xs.len()..].iter().cloned()).collect(),
        claimed_rank: d,
    };
    if !eval_qf_at(&eliminate(s)?.fm(), &s.vars, &w.point)? {
        return Err(Error::Internal(format!("generic point {:?} is not in the set", w.point)));
    }
    if infinitesimal_rank(&w.point) != d {
        return Err(Error::Internal("generic point has the wrong rank".into()));
    }
    Ok(w)
}

/// The rank of `s` over its parameters, which equals its dimension, with a
/// generic point certifying the lower bound when one can be built.
pub fn definable_set_rank(s: &DefinableSet) -> Result<(DimensionValue, Option<GenericWitness>)> {
    let d = dim(s)?;
    if d == DimensionValue::NegInf || !s.params.is_empty() || s.vars.len() > MAX_ARITY {
        return Ok((d, None));
    }
    Ok((d, Some(make_generic(s)?)))
}

#[cfg(test)]
mod tests;
