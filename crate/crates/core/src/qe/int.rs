//! Elimination of an integer-ranging variable that occurs only outside floors.

use crate::fm::{CRel, Constraint, Fm};
use crate::linear::Lin;
use crate::rational::Rational;
use crate::simplify::simplify;
use crate::syntax::Var;

use super::real::{at_inf, at_point, bound_of};
use super::{dnf, Budget};

enum IBound {
    /// `k ≥ L` with `L` integer-valued
    Lower(Lin),
    /// `k ≤ U` with `U` integer-valued
    Upper(Lin),
    Eq(Lin),
    Ne(Lin),
}

fn ibound(k: &Var, c: &Constraint) -> Option<IBound> {
    let b = bound_of(k, c)?;
    let one = Rational::one();
    let fl = Lin::floor_of(&b.e);
    let neg_fl_neg = Lin::floor_of(&b.e.neg()).neg();
    Some(match (b.rel, b.a.is_positive()) {
        // k < e  ⇔  k ≤ ⌈e⌉ − 1
        (CRel::Lt, true) => IBound::Upper(neg_fl_neg.add_const(&-one)),
        (CRel::Le, true) => IBound::Upper(fl),
        // k > e  ⇔  k ≥ ⌊e⌋ + 1
        (CRel::Lt, false) => IBound::Lower(fl.add_const(&one)),
        (CRel::Le, false) => IBound::Lower(neg_fl_neg),
        (CRel::Eq, _) => IBound::Eq(b.e),
        (CRel::Ne, _) => IBound::Ne(b.e),
    })
}

fn conj_fm(k: &Var, atoms: &[Constraint], budget: &Budget) -> crate::Result<Fm> {
    let mut keep = Vec::new();
    let mut lowers = Vec::new();
    let mut uppers = Vec::new();
    let mut has_ne = false;
    let mut eq = None;
    for c in atoms {
        match ibound(k, c) {
            None => keep.push(Fm::Atom(c.clone())),
            Some(IBound::Lower(l)) => lowers.push(l),
            Some(IBound::Upper(u)) => uppers.push(u),
            Some(IBound::Eq(e)) => eq = eq.or(Some(e)),
            Some(IBound::Ne(_)) => has_ne = true,
        }
    }
    if let Some(e) = eq {
        let body = Fm::and(atoms.iter().map(|c| Fm::Atom(c.clone())).collect());
        return Ok(Fm::and2(Fm::int(&e), at_point(&body, k, &e)));
    }
    if has_ne {
        let body = Fm::and(atoms.iter().map(|c| Fm::Atom(c.clone())).collect());
        return vs(k, &body, budget);
    }
    budget.charge(lowers.len() * uppers.len())?;
    for l in &lowers {
        for u in &uppers {
            keep.push(Fm::atom(l.sub(u), CRel::Le));
        }
    }
    Ok(Fm::and(keep))
}

/// Integer virtual substitution: a least solution, if any, is one of the
/// lower bounds, an equality point, or one above an excluded point.
fn vs(k: &Var, f: &Fm, budget: &Budget) -> crate::Result<Fm> {
    let mut atoms = Vec::new();
    f.collect_atoms(&mut atoms);
    let mut low_pts: Vec<(Lin, bool)> = Vec::new();
    let mut high_pts: Vec<(Lin, bool)> = Vec::new();
    for c in atoms {
        match ibound(k, c) {
            None => {}
            Some(IBound::Lower(l)) => low_pts.push((l, false)),
            Some(IBound::Upper(u)) => high_pts.push((u, false)),
            Some(IBound::Eq(e)) => {
                low_pts.push((e.clone(), true));
                high_pts.push((e, true));
            }
            Some(IBound::Ne(e)) => {
                low_pts.push((Lin::floor_of(&e).add_const(&Rational::one()), false));
                high_pts.push((Lin::floor_of(&e.neg()).neg().add_const(&-Rational::one()), false));
            }
        }
    }
    let (mut pts, s) = if low_pts.len() <= high_pts.len() { (low_pts, 1) } else { (high_pts, -1) };
    pts.sort();
    pts.dedup();
    budget.charge(pts.len() * f.size())?;
    let mut alts = vec![simplify(&at_inf(f, k, -s))];
    for (e, needs_int) in &pts {
        let mut g = at_point(f, k, e);
        if *needs_int {
            g = Fm::and2(Fm::int(e), g);
        }
        let g = simplify(&g);
        if g == Fm::True {
            return Ok(Fm::True);
        }
        alts.push(g);
    }
    Ok(Fm::or(alts))
}

/// `∃k ∈ ℤ φ` for `k` outside all floors.
pub(super) fn exists(k: &Var, f: &Fm, budget: &Budget) -> crate::Result<Fm> {
    match dnf(f, 32) {
        Some(disjuncts) => {
            let mut out = Vec::with_capacity(disjuncts.len());
            for d in disjuncts {
                let r = simplify(&conj_fm(k, &d, budget)?);
                if r == Fm::True {
                    return Ok(Fm::True);
                }
                out.push(r);
            }
            Ok(Fm::or(out))
        }
        None => vs(k, f, budget),
    }
}
