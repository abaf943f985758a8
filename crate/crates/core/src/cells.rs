//! Decomposition of definable sets into quasi-special cells with explicit
//! sheets, and a certifying checker.
//!
//! A cell lives over an open base in the coordinates of its signature. Its
//! remaining coordinates are given by sheet terms, affine in the base
//! coordinates and in integer sheet indices, possibly with floors of base
//! coordinates that are locally constant on the base. The index constraints
//! say which indices give points of the cell over which base points.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::dimension::signatures;
use crate::fm::{CRel, Fm};
use crate::linear::{Key, Lin};
use crate::qe::{exists_fm, forall_fm, satisfiable, valid};
use crate::rational::Rational;
use crate::simplify::simplify;
use crate::syntax::{DefinableSet, Var};
use crate::topology::germ::{germ, Shift};
use crate::topology::{directions, is_open_fm, qf};
use crate::{Error, Result};

/// Largest ambient arity accepted by [`decompose`].
pub const MAX_ARITY: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    /// Ambient variables, in order.
    pub vars: Vec<Var>,
    /// Ambient indices of the base coordinates.
    pub signature: Vec<usize>,
    /// Open set over the base coordinates.
    pub base: Fm,
    /// A term for each non-base coordinate, in ambient order.
    pub sheets: Vec<(Var, Lin)>,
    /// Integer sheet indices.
    pub indices: Vec<Var>,
    /// Admissible indices over each base point; mentions the base variables
    /// and the indices.
    pub index_constraints: Fm,
    /// How to read the indices off a point of the cell, when known.
    pub recovery: Option<Recovery>,
}

/// Each index as a term in the ambient variables, plus the equations without
/// an index that a point of the cell satisfies. Together they pick out the
/// sheet through a point without quantifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recovery {
    pub index_terms: Vec<(Var, Lin)>,
    pub equations: Vec<Lin>,
}

impl Cell {
    pub fn base_vars(&self) -> Vec<Var> {
        self.signature.iter().map(|&i| self.vars[i].clone()).collect()
    }

    /// `{(x, h(x, k)) : base(x), k admissible over x}`.
    pub fn realization(&self) -> Result<Fm> {
        if let Some(r) = &self.recovery {
            let at: BTreeMap<Var, Lin> = r.index_terms.iter().cloned().collect();
            let mut parts: Vec<Fm> = r.equations.iter().map(|e| Fm::atom(e.clone(), CRel::Eq)).collect();
            parts.push(self.index_constraints.map_lins(&|l| l.subst_many(&at)));
            return Ok(simplify(&Fm::and(parts)));
        }
        let on = Fm::and(self.sheets.iter().map(|(y, h)| Fm::atom(Lin::var(y).sub(h), CRel::Eq)).collect());
        let body = Fm::and(vec![self.base.clone(), self.index_constraints.clone(), on]);
        Ok(simplify(&exists_fm(&self.indices, &body)?))
    }
}

#[derive(Serialize)]
struct CellView {
    signature: Vec<usize>,
    base: String,
    sheet_terms: Vec<String>,
    indices: Vec<String>,
    index_constraints: String,
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CellView {
            signature: self.signature.clone(),
            base: self.base.to_formula().to_string(),
            sheet_terms: self.sheets.iter().map(|(y, h)| format!("{y} = {}", h.to_term())).collect(),
            indices: self.indices.iter().map(|k| k.to_string()).collect(),
            index_constraints: self.index_constraints.to_formula().to_string(),
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CellDecomposition {
    pub cells: Vec<Cell>,
    #[serde(serialize_with = "crate::print::set_text")]
    pub source: DefinableSet,
    /// Names of the certificates that were decided true.
    pub certificates: Vec<String>,
}

/// Why a cell failed verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    BaseEmpty,
    BaseNotOpen,
    NotContained,
    FloorNotLocallyConstant,
    IndicesNotLocallyConstant,
    SheetsIntersect,
}

impl Reason {
    pub fn text(self) -> &'static str {
        match self {
            Reason::BaseEmpty => "base empty",
            Reason::BaseNotOpen => "base not open",
            Reason::NotContained => "cell not contained in the set",
            Reason::FloorNotLocallyConstant => "floor argument of a sheet not locally constant",
            Reason::IndicesNotLocallyConstant => "admissible indices not locally constant",
            Reason::SheetsIntersect => "sheets intersect",
        }
    }
}

/// Truth of `floor(u)` keeping its value near every point of `vars`, for
/// every floor `u` of `terms`.
fn floors_locally_constant(terms: &[Lin], vars: &[Var]) -> Result<Fm> {
    let mut floors = BTreeSet::new();
    for t in terms {
        for (k, _) in t.terms() {
            if let Key::Floor(a) = k {
                floors.insert(a.clone());
            }
        }
    }
    if floors.is_empty() || vars.is_empty() {
        return Ok(Fm::True);
    }
    let d = directions(vars);
    let shift: Shift = vars.iter().cloned().zip(d.iter().map(Lin::var)).collect();
    let mut parts = Vec::new();
    for a in floors {
        let v = Var::fresh("level");
        let fl = Lin::key(Key::Floor(a));
        let g = germ(&Fm::atom(Lin::var(&v).sub(&fl), CRel::Eq), &shift);
        parts.push(g.subst(&v, &fl));
    }
    Ok(simplify(&forall_fm(&d, &Fm::and(parts))?))
}

/// Checks one cell against the set it should lie in.
pub fn verify_quasi_special(c: &Cell, within: &DefinableSet) -> Result<std::result::Result<(), Reason>> {
    let xs = c.base_vars();
    if !satisfiable(&c.base)? {
        return Ok(Err(Reason::BaseEmpty));
    }
    if !is_open_fm(&c.base, &xs)? {
        return Ok(Err(Reason::BaseNotOpen));
    }
    if !valid(&Fm::implies(c.realization()?, qf(&within.fm())?))? {
        return Ok(Err(Reason::NotContained));
    }
    let terms: Vec<Lin> = c.sheets.iter().map(|(_, h)| h.clone()).collect();
    let admissible = Fm::and2(c.base.clone(), c.index_constraints.clone());
    if !valid(&Fm::implies(admissible.clone(), floors_locally_constant(&terms, &xs)?))? {
        return Ok(Err(Reason::FloorNotLocallyConstant));
    }
    if !xs.is_empty() && !c.indices.is_empty() && !is_open_fm(&admissible, &xs)? {
        return Ok(Err(Reason::IndicesNotLocallyConstant));
    }
    if !c.indices.is_empty() {
        let other: Vec<Var> = c.indices.iter().map(|k| Var::fresh(k.name())).collect();
        let rename: BTreeMap<Var, Lin> = c.indices.iter().cloned().zip(other.iter().map(Lin::var)).collect();
        let moved = |f: &Fm| f.map_lins(&|l| l.subst_many(&rename));
        let differ =
            Fm::or(c.indices.iter().zip(&other).map(|(a, b)| Fm::atom(Lin::var(a).sub(&Lin::var(b)), CRel::Ne)).collect());
        let apart = Fm::or(
            terms.iter().map(|h| Fm::atom(h.sub(&h.subst_many(&rename)), CRel::Ne)).collect(),
        );
        let hyp = Fm::and(vec![admissible.clone(), moved(&admissible), differ]);
        if !valid(&Fm::implies(hyp, apart))? {
            return Ok(Err(Reason::SheetsIntersect));
        }
    }
    Ok(Ok(()))
}

/// An equation `a·y + g·k + c = 0` in the fiber variables `y`, with `k`
/// an integer index present iff `g ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Equation {
    a: Vec<Rational>,
    g: Rational,
    c: Lin,
}

fn split_fiber(t: &Lin, fiber: &[Var], lattice: &mut Vec<Rational>) -> (Vec<Rational>, Lin) {
    let mut a = vec![Rational::zero(); fiber.len()];
    let mut c = Lin::constant(t.constant_part().clone());
    for (k, coef) in t.terms() {
        match k {
            Key::Var(v) => match fiber.iter().position(|y| y == v) {
                Some(i) => a[i] += coef,
                None => c = c.add_scaled(&Lin::var(v), coef),
            },
            Key::Floor(u) => {
                if fiber.iter().any(|y| u.mentions(y)) {
                    lattice.push(coef.clone());
                } else {
                    c = c.add_scaled(&Lin::key(k.clone()), coef);
                }
            }
        }
    }
    (a, c)
}

fn equation(t: &Lin, fiber: &[Var], extra: Option<Rational>) -> Option<Equation> {
    let mut lattice: Vec<Rational> = extra.into_iter().collect();
    let (a, c) = split_fiber(t, fiber, &mut lattice);
    let lead = a.iter().find(|x| !x.is_zero())?.clone();
    let inv = lead.recip();
    let g = lattice.iter().fold(Rational::zero(), |acc, x| acc.gcd(x));
    Some(Equation { a: a.iter().map(|x| x * &inv).collect(), g: (&g * &inv).abs(), c: c.scale(&inv) })
}

/// Every atom and every floor argument mentioning a fiber variable, read as
/// an equation for the fiber.
fn equations(f: &Fm, fiber: &[Var]) -> Vec<Equation> {
    let mut atoms = Vec::new();
    f.collect_atoms(&mut atoms);
    let mut out = BTreeSet::new();
    let mut floors = BTreeSet::new();
    for c in atoms {
        out.extend(equation(&c.lin, fiber, None));
        c.lin.collect_floors(&mut floors);
    }
    for u in floors {
        if fiber.iter().any(|y| u.mentions(y)) {
            out.extend(equation(&u, fiber, Some(-Rational::one())));
        }
    }
    out.into_iter().collect()
}

/// Solves the square system `eqs` for the fiber, introducing one index per
/// equation with a lattice part. `None` when singular.
fn solve(eqs: &[&Equation], fiber: &[Var], index: &mut dyn FnMut() -> Var) -> Option<(Vec<Lin>, Vec<Var>, Recovery)> {
    let m = fiber.len();
    let mut ks = Vec::new();
    let mut rec = Recovery { index_terms: vec![], equations: vec![] };
    for e in eqs {
        let mut l = e.c.clone();
        for (y, a) in fiber.iter().zip(&e.a) {
            l = l.add_scaled(&Lin::var(y), a);
        }
        if e.g.is_zero() {
            rec.equations.push(l);
        } else {
            rec.index_terms.push((Var::new("pending"), l.scale(&e.g.recip())));
        }
    }
    let mut rows: Vec<(Vec<Rational>, Lin)> = eqs
        .iter()
        .map(|e| {
            let mut rhs = e.c.neg();
            if !e.g.is_zero() {
                let k = index();
                rhs = rhs.add_scaled(&Lin::var(&k), &e.g);
                ks.push(k);
            }
            (e.a.clone(), rhs)
        })
        .collect();
    for col in 0..m {
        let p = (col..m).find(|&r| !rows[r].0[col].is_zero())?;
        rows.swap(col, p);
        let inv = rows[col].0[col].recip();
        let (pa, pr) = rows[col].clone();
        rows[col] = (pa.iter().map(|x| x * &inv).collect(), pr.scale(&inv));
        for r in 0..m {
            if r != col && !rows[r].0[col].is_zero() {
                let f = rows[r].0[col].clone();
                let (ca, cr) = rows[col].clone();
                let row = &mut rows[r];
                for (x, y) in row.0.iter_mut().zip(&ca) {
                    *x -= &(&f * y);
                }
                row.1 = row.1.add_scaled(&cr, &-f);
            }
        }
    }
    for ((k, _), name) in rec.index_terms.iter_mut().zip(&ks) {
        *k = name.clone();
    }
    Some((rows.into_iter().map(|(_, r)| r).collect(), ks, rec))
}

fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
    signatures(n, k)
}

/// Builds the cell of the points of `rest` on the sheet family `h` that are
/// regular: the floors of `h` are locally constant there and `level` is,
/// near the point, exactly the graph of `h`.
fn build_cell(
    level: &Fm,
    rest: &Fm,
    vars: &[Var],
    sig: &[usize],
    sheets: Vec<(Var, Lin)>,
    indices: Vec<Var>,
    recovery: Option<Recovery>,
) -> Result<Option<Cell>> {
    let xs: Vec<Var> = sig.iter().map(|&i| vars[i].clone()).collect();
    let place: BTreeMap<Var, Lin> = sheets.iter().cloned().collect();
    let on_sheet = |f: &Fm| f.map_lins(&|l| l.subst_many(&place));
    let d = directions(vars);
    let dir: BTreeMap<Var, Lin> = vars.iter().cloned().zip(d.iter().map(Lin::var)).collect();
    // the sheet's own velocity over a base direction
    let slope = |h: &Lin| {
        let mut v = Lin::zero();
        for x in &xs {
            v = v.add_scaled(&dir[x], &h.coeff_var(x));
        }
        v
    };
    let follows =
        Fm::and(sheets.iter().map(|(y, h)| Fm::atom(dir[y].sub(&slope(h)), CRel::Eq)).collect());
    let shift: Shift = dir.clone();
    let local = on_sheet(&germ(level, &shift));
    let regular = forall_fm(&d, &Fm::iff(local, follows))?;
    let terms: Vec<Lin> = sheets.iter().map(|(_, h)| h.clone()).collect();
    let steady = floors_locally_constant(&terms, &xs)?;
    let ints = Fm::and(indices.iter().map(|k| Fm::int(&Lin::var(k))).collect());
    let idx = simplify(&Fm::and(vec![ints, on_sheet(rest), steady, regular]));
    if !satisfiable(&idx)? {
        return Ok(None);
    }
    let base = simplify(&exists_fm(&indices, &idx)?);
    Ok(Some(Cell { vars: vars.to_vec(), signature: sig.to_vec(), base, sheets, indices, index_constraints: idx, recovery }))
}

/// Index names `k1, k2, …` avoiding the given names.
fn index_namer(avoid: &BTreeSet<Var>) -> impl FnMut() -> Var + '_ {
    let mut i = 0;
    move || loop {
        i += 1;
        let v = Var::new(&format!("k{i}"));
        if !avoid.contains(&v) {
            return v;
        }
    }
}

/// Splits `s` into certified quasi-special cells, largest signatures first.
pub fn decompose(s: &DefinableSet) -> Result<CellDecomposition> {
    let n = s.vars.len();
    if n > MAX_ARITY {
        return Err(Error::Unsupported(format!("decomposition supports at most {MAX_ARITY} variables, got {n}")));
    }
    let f = qf(&s.fm())?;
    let mut avoid: BTreeSet<Var> = s.vars.iter().cloned().collect();
    avoid.extend(s.params.iter().cloned());
    let mut rest = f.clone();
    let mut cells: Vec<Cell> = Vec::new();
    'outer: for d in (0..=n).rev() {
        // regularity is judged against the points left at the start of the
        // level, so that a point where two pieces meet stays for later
        let level = rest.clone();
        for sig in signatures(n, d) {
            if !satisfiable(&rest)? {
                break 'outer;
            }
            let fiber: Vec<Var> = (0..n).filter(|i| !sig.contains(i)).map(|i| s.vars[i].clone()).collect();
            // candidates come from the source formula: the remainder only gains
            // atoms that restate its boundaries
            let eqs = equations(&f, &fiber);
            let mut families: Vec<(Vec<(Var, Lin)>, Vec<Var>, Recovery)> = Vec::new();
            if fiber.is_empty() {
                families.push((vec![], vec![], Recovery { index_terms: vec![], equations: vec![] }));
            }
            if !fiber.is_empty() {
                for pick in choose(eqs.len(), fiber.len()) {
                    let chosen: Vec<&Equation> = pick.iter().map(|&i| &eqs[i]).collect();
                    let mut namer = index_namer(&avoid);
                    if let Some((h, ks, rec)) = solve(&chosen, &fiber, &mut namer) {
                        families.push((fiber.iter().cloned().zip(h).collect(), ks, rec));
                    }
                }
            }
            for (sheets, ks, rec) in families {
                if let Some(c) = build_cell(&level, &rest, &s.vars, &sig, sheets, ks, Some(rec))? {
                    rest = simplify(&Fm::and2(rest, c.realization()?.neg()));
                    cells.push(c);
                }
            }
        }
    }
    if satisfiable(&rest)? {
        return Err(Error::Internal(format!("decomposition left points uncovered: {rest}")));
    }
    cells.sort_by_cached_key(|c| (c.signature.clone(), c.base.to_string(), format!("{:?}", c.sheets)));
    let certificates = certify(&cells, s, &f)?;
    Ok(CellDecomposition { cells, source: s.clone(), certificates })
}

/// Per-cell verification plus disjointness and cover.
fn certify(cells: &[Cell], s: &DefinableSet, f: &Fm) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let reals: Vec<Fm> = cells.iter().map(Cell::realization).collect::<Result<_>>()?;
    for (i, c) in cells.iter().enumerate() {
        if let Err(r) = verify_quasi_special(c, s)? {
            return Err(Error::Internal(format!("cell {i} failed verification: {}", r.text())));
        }
        out.push(format!("cell {i} quasi-special"));
    }
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            if !valid(&Fm::and2(reals[i].clone(), reals[j].clone()).neg())? {
                return Err(Error::Internal(format!("cells {i} and {j} overlap")));
            }
        }
    }
    out.push("cells pairwise disjoint".into());
    if !valid(&Fm::iff(Fm::or(reals), f.clone()))? {
        return Err(Error::Internal("cells do not cover the set".into()));
    }
    out.push("cells cover the set".into());
    Ok(out)
}

#[cfg(test)]
mod tests;
