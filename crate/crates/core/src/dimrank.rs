//! Dimension rank via explicit descending chains.
//!
//! A chain `Y₀ ⊋ Y₁ ⊋ … ⊋ Y_k` where each link is nonempty, closed in its
//! predecessor and has empty interior there witnesses rank at least `k`.
//! Chains are synthesized from a cell decomposition: over a small closed box
//! where the set is a single graph piece, slicing by a hyperplane in a base
//! coordinate drops the dimension by one.

use serde::Serialize;

use crate::cells::{decompose, Cell};
use crate::dimension::{dim, DimensionValue};
use crate::fm::{CRel, Fm};
use crate::linear::Lin;
use crate::qe::{sample_point, satisfiable, valid};
use crate::rational::Rational;
use crate::simplify::simplify;
use crate::syntax::{DefinableSet, Var};
use crate::topology::{closure_fm, qf, relative_interior_fm};
use crate::{Error, Result};

/// Serializes as the list of its formulas.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct DimRankChain {
    #[serde(serialize_with = "texts")]
    pub sets: Vec<DefinableSet>,
}

fn texts<S: serde::Serializer>(sets: &[DefinableSet], ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(sets.iter().map(|s| s.formula.to_string()))
}

impl DimRankChain {
    /// Number of links below the first set.
    pub fn len(&self) -> usize {
        self.sets.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Why a chain failed to certify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainFault {
    NoSets,
    EmptyLink,
    NotContained,
    NotClosed,
    HasInterior,
}

/// Certifies every link of `chain`; `Ok(Err(i, fault))` names the first bad
/// link.
pub fn check_chain_detailed(chain: &DimRankChain) -> Result<std::result::Result<(), (usize, ChainFault)>> {
    let Some(first) = chain.sets.first() else { return Ok(Err((0, ChainFault::NoSets))) };
    if chain.sets.iter().any(|s| s.vars != first.vars || s.params != first.params) {
        return Err(Error::Precondition("chain sets live in different ambient spaces".into()));
    }
    let vars = &first.vars;
    let fms: Vec<Fm> = chain.sets.iter().map(|s| qf(&s.fm())).collect::<Result<_>>()?;
    if !satisfiable(&fms[0])? {
        return Ok(Err((0, ChainFault::EmptyLink)));
    }
    for i in 1..fms.len() {
        let (x, y) = (&fms[i - 1], &fms[i]);
        if !satisfiable(y)? {
            return Ok(Err((i, ChainFault::EmptyLink)));
        }
        if !valid(&Fm::implies(y.clone(), x.clone()))? {
            return Ok(Err((i, ChainFault::NotContained)));
        }
        let closed = Fm::implies(Fm::and2(x.clone(), closure_fm(y, vars)?), y.clone());
        if !valid(&closed)? {
            return Ok(Err((i, ChainFault::NotClosed)));
        }
        if satisfiable(&relative_interior_fm(y, x, vars)?)? {
            return Ok(Err((i, ChainFault::HasInterior)));
        }
    }
    Ok(Ok(()))
}

pub fn check_chain(chain: &DimRankChain) -> Result<bool> {
    Ok(check_chain_detailed(chain)?.is_ok())
}

/// `|vᵢ − cᵢ| ≤ r` for every coordinate.
fn closed_box(vars: &[Var], center: &[Rational], r: &Rational) -> Fm {
    let mut parts = Vec::new();
    for (v, c) in vars.iter().zip(center) {
        let d = Lin::var(v).add(&Lin::constant(-c.clone()));
        parts.push(Fm::atom(d.add(&Lin::constant(-r.clone())), CRel::Le));
        parts.push(Fm::atom(d.neg().add(&Lin::constant(-r.clone())), CRel::Le));
    }
    Fm::and(parts)
}

/// A rational point of `cell` away from `rest`'s closure, as ambient
/// coordinates.
fn point_off(cell: &Cell, away: &Fm) -> Result<Option<Vec<Rational>>> {
    let xs = cell.base_vars();
    let mut unknowns = xs.clone();
    unknowns.extend(cell.indices.iter().cloned());
    let place: std::collections::BTreeMap<Var, Lin> = cell.sheets.iter().cloned().collect();
    let off = away.map_lins(&|l| l.subst_many(&place)).neg();
    let g = simplify(&Fm::and(vec![cell.base.clone(), cell.index_constraints.clone(), off]));
    let Some(vals) = sample_point(&g, &unknowns)? else { return Ok(None) };
    let env = |v: &Var| unknowns.iter().position(|u| u == v).map(|i| vals[i].clone());
    let mut out = Vec::new();
    for v in &cell.vars {
        let value = match cell.sheets.iter().find(|(y, _)| y == v) {
            Some((_, h)) => h.eval(&env),
            None => env(v),
        };
        out.push(value.ok_or_else(|| Error::Internal("sheet term not evaluable at sample".into()))?);
    }
    Ok(Some(out))
}

/// One link down: a closed slice of `x` with dimension one less.
fn step(x: &DefinableSet, d: usize) -> Result<DefinableSet> {
    let f = qf(&x.fm())?;
    let dec = decompose(x)?;
    for cell in dec.cells.iter().filter(|c| c.signature.len() == d) {
        let others = simplify(&Fm::and2(f.clone(), cell.realization()?.neg()));
        let k = closure_fm(&others, &x.vars)?;
        let Some(p) = point_off(cell, &k)? else { continue };
        let j = *cell.signature.last().expect("positive dimension");
        let mut r = Rational::one();
        for _ in 0..24 {
            let b = closed_box(&x.vars, &p, &r);
            if valid(&Fm::implies(b.clone(), k.neg()))? {
                let plane = Fm::atom(Lin::var(&x.vars[j]).add(&Lin::constant(-p[j].clone())), CRel::Eq);
                let y = simplify(&Fm::and(vec![f.clone(), b, plane]));
                return Ok(x.from_fm(&y));
            }
            r = &r / &Rational::from_int(2);
        }
    }
    Err(Error::Internal("no top-dimensional cell point away from the rest of the set".into()))
}

/// A certified chain whose length is the dimension of `s`.
pub fn synthesize_chain(s: &DefinableSet) -> Result<DimRankChain> {
    if !s.params.is_empty() {
        return Err(Error::Unsupported("chain synthesis needs a set without parameters".into()));
    }
    let mut sets = vec![s.clone()];
    let DimensionValue::Finite(mut d) = dim(s)? else {
        return Err(Error::Precondition("the empty set has no chain".into()));
    };
    while d > 0 {
        let y = step(sets.last().expect("nonempty"), d)?;
        if dim(&y)? != DimensionValue::Finite(d - 1) {
            return Err(Error::Internal(format!("slice `{}` does not drop the dimension by one", y.formula)));
        }
        sets.push(y);
        d -= 1;
    }
    let chain = DimRankChain { sets };
    if let Err((i, fault)) = check_chain_detailed(&chain)? {
        return Err(Error::Internal(format!("synthesized chain fails at link {i}: {fault:?}")));
    }
    Ok(chain)
}

/// The rank, cross-checked against the projection dimension.
pub fn dimension_rank(s: &DefinableSet) -> Result<(DimensionValue, Option<DimRankChain>)> {
    let d = dim(s)?;
    if d == DimensionValue::NegInf {
        return Ok((d, None));
    }
    let chain = synthesize_chain(s)?;
    let rank = DimensionValue::Finite(chain.len());
    if rank != d {
        return Err(Error::Internal(format!("rank {rank} differs from dimension {d}")));
    }
    Ok((rank, Some(chain)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn chain(vars: &[&str], texts: &[&str]) -> DimRankChain {
        DimRankChain { sets: texts.iter().map(|t| parse(t, vars, &[]).unwrap()).collect() }
    }

    #[test]
    fn hand_written_chains() {
        assert!(check_chain(&chain(&["x"], &["true", "x = 0"])).unwrap());
        assert!(check_chain(&chain(&["x", "y"], &["true", "x = 0", "x = 0 and y = 0"])).unwrap());
        assert!(!check_chain(&chain(&["x"], &["true", "0 < x and x < 1"])).unwrap());
        let fat = chain(&["x"], &["true", "0 <= x and x <= 1"]);
        assert_eq!(check_chain_detailed(&fat).unwrap(), Err((1, ChainFault::HasInterior)));
        let half = chain(&["x"], &["x > 0", "x <= 1 and x > 0 and int(x)"]);
        assert!(check_chain(&half).unwrap());
        let not_closed = chain(&["x", "y"], &["true", "y = 0 and x > 0 and x < 1"]);
        assert_eq!(check_chain_detailed(&not_closed).unwrap(), Err((1, ChainFault::NotClosed)));
        let mismatch = DimRankChain { sets: vec![parse("true", &["x"], &[]).unwrap(), parse("true", &["y"], &[]).unwrap()] };
        assert!(check_chain(&mismatch).is_err());
    }

    #[test]
    fn line_chain_is_the_origin() {
        let c = synthesize_chain(&parse("true", &["x"], &[]).unwrap()).unwrap();
        let texts: Vec<String> = c.sets.iter().map(|s| s.formula.to_string()).collect();
        assert_eq!(texts, ["true", "x = 0"]);
    }

    #[test]
    fn ranks() {
        for (text, vars, expected) in [
            ("x < 0 and x > 0", &["x"][..], DimensionValue::NegInf),
            ("int(x)", &["x"], DimensionValue::Finite(0)),
            ("int(x)", &["x", "y"], DimensionValue::Finite(1)),
            ("true", &["x", "y"], DimensionValue::Finite(2)),
            ("0 < x and x < 1 and 0 < y and y < 1", &["x", "y"], DimensionValue::Finite(2)),
            ("x = 0 or y = 0", &["x", "y"], DimensionValue::Finite(1)),
            ("int(y - x) and 0 <= x and x < 1", &["x", "y"], DimensionValue::Finite(1)),
        ] {
            let (d, c) = dimension_rank(&parse(text, vars, &[]).unwrap()).unwrap();
            assert_eq!(d, expected, "{text}");
            assert_eq!(c.map(|c| c.len()), expected.finite(), "{text}");
        }
    }
}
