//! Topology of definable sets in the product order topology.
//!
//! Every operator works on quantifier-free formulas through their germs (see
//! [`germ`]): near a point, a definable set is a finite union of cones, so
//! a point is interior iff every direction stays inside, and lies in the
//! closure iff some direction does. The radius never has to be quantified.
//! Parameters are never moved; they behave as fixed constants.

pub mod germ;
mod functions;

use serde::Serialize;

pub use functions::{definable_section, monotone_partition, FunctionGraph, MonotonePartition};

use crate::fm::Fm;
use crate::linear::Lin;
use crate::qe::{eliminate_fm, exists_fm, forall_fm, satisfiable, valid};
use crate::rational::Rational;
use crate::simplify::simplify;
use crate::syntax::{DefinableSet, Var};
use crate::Result;

use germ::{along, germ};

/// `f` itself if quantifier-free, else its eliminated form.
pub(crate) fn qf(f: &Fm) -> Result<Fm> {
    if f.is_qf() {
        Ok(f.clone())
    } else {
        eliminate_fm(f)
    }
}

pub(crate) fn directions(vars: &[Var]) -> Vec<Var> {
    vars.iter().map(|v| Var::fresh(&format!("d{v}"))).collect()
}

/// Points of `f` with a neighbourhood inside `f`.
pub fn interior_fm(f: &Fm, vars: &[Var]) -> Result<Fm> {
    let f = qf(f)?;
    let d = directions(vars);
    Ok(simplify(&forall_fm(&d, &germ(&f, &along(vars, &d)))?))
}

/// Points every neighbourhood of which meets `f`.
pub fn closure_fm(f: &Fm, vars: &[Var]) -> Result<Fm> {
    let f = qf(f)?;
    let d = directions(vars);
    Ok(simplify(&exists_fm(&d, &germ(&f, &along(vars, &d)))?))
}

/// `closure(f) ∧ ¬f`.
pub fn frontier_fm(f: &Fm, vars: &[Var]) -> Result<Fm> {
    let f = qf(f)?;
    Ok(simplify(&Fm::and2(closure_fm(&f, vars)?, f.neg())))
}

/// Points of `f` with a neighbourhood meeting `f` only there.
pub fn isolated_fm(f: &Fm, vars: &[Var]) -> Result<Fm> {
    let f = qf(f)?;
    let d = directions(vars);
    let still = Fm::and(d.iter().map(|z| Fm::atom(Lin::var(z), crate::fm::CRel::Eq)).collect());
    let body = Fm::implies(germ(&f, &along(vars, &d)), still);
    Ok(simplify(&Fm::and2(f, forall_fm(&d, &body)?)))
}

/// Points of `y` having a neighbourhood whose trace on `x` lies in `y`:
/// the interior of `y` relative to `x`.
pub fn relative_interior_fm(y: &Fm, x: &Fm, vars: &[Var]) -> Result<Fm> {
    let (y, x) = (qf(y)?, qf(x)?);
    let d = directions(vars);
    let s = along(vars, &d);
    let body = Fm::implies(germ(&x, &s), germ(&y, &s));
    Ok(simplify(&Fm::and2(y, forall_fm(&d, &body)?)))
}

/// Truth of `f` at `x + ε₁e₁ + … + εₙeₙ` with `ε₁ ≫ … ≫ εₙ > 0`. Such a
/// point lies in an open chamber of the local cone structure, so `f` has
/// nonempty interior iff this formula is satisfiable.
pub fn generic_fm(f: &Fm, vars: &[Var]) -> Result<Fm> {
    let mut g = qf(f)?;
    for v in vars.iter().rev() {
        g = g.perturb(&|w: &Var| (w == v).then(|| (Lin::var(v), Rational::one())));
    }
    Ok(simplify(&g))
}

/// Whether the set has interior for some value of its parameters.
pub fn has_interior_fm(f: &Fm, vars: &[Var]) -> Result<bool> {
    satisfiable(&generic_fm(f, vars)?)
}

fn lift(s: &DefinableSet, op: impl Fn(&Fm, &[Var]) -> Result<Fm>) -> Result<DefinableSet> {
    Ok(s.from_fm(&op(&s.fm(), &s.vars)?))
}

pub fn interior(s: &DefinableSet) -> Result<DefinableSet> {
    lift(s, interior_fm)
}

pub fn closure_of(s: &DefinableSet) -> Result<DefinableSet> {
    lift(s, closure_fm)
}

pub fn frontier(s: &DefinableSet) -> Result<DefinableSet> {
    lift(s, frontier_fm)
}

pub fn isolated_points(s: &DefinableSet) -> Result<DefinableSet> {
    lift(s, isolated_fm)
}

pub fn has_nonempty_interior(s: &DefinableSet) -> Result<bool> {
    has_interior_fm(&s.fm(), &s.vars)
}

/// Topological flags of a set. With parameters, `is_empty` and the
/// openness, closedness and discreteness flags hold for every parameter
/// value, while `has_nonempty_interior` holds for some value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TopologyFlags {
    pub is_discrete: bool,
    pub is_closed: bool,
    pub has_nonempty_interior: bool,
    pub is_open: bool,
    pub is_empty: bool,
}

pub fn is_closed_fm(f: &Fm, vars: &[Var]) -> Result<bool> {
    let f = qf(f)?;
    valid(&Fm::implies(closure_fm(&f, vars)?, f))
}

pub fn is_open_fm(f: &Fm, vars: &[Var]) -> Result<bool> {
    let f = qf(f)?;
    valid(&Fm::implies(f.clone(), interior_fm(&f, vars)?))
}

pub fn is_discrete_fm(f: &Fm, vars: &[Var]) -> Result<bool> {
    let f = qf(f)?;
    valid(&Fm::implies(f.clone(), isolated_fm(&f, vars)?))
}

pub fn classify_fm(f: &Fm, vars: &[Var]) -> Result<TopologyFlags> {
    let f = qf(f)?;
    Ok(TopologyFlags {
        is_discrete: is_discrete_fm(&f, vars)?,
        is_closed: is_closed_fm(&f, vars)?,
        has_nonempty_interior: has_interior_fm(&f, vars)?,
        is_open: is_open_fm(&f, vars)?,
        is_empty: !satisfiable(&f)?,
    })
}

pub fn classify_topology(s: &DefinableSet) -> Result<TopologyFlags> {
    classify_fm(&s.fm(), &s.vars)
}

#[cfg(test)]
mod tests;
