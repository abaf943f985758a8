//! Elimination of a real variable that occurs only outside floors.

use crate::fm::{CRel, Constraint, Fm};
use crate::linear::Lin;
use crate::rational::Rational;
use crate::simplify::simplify;
use crate::syntax::Var;

use super::{dnf, Budget};

/// Direct bound on `x` read off an atom `a·x + t ⋈ 0`: `x ⋈' e` with `e = −t/a`.
pub(super) struct Bound {
    pub a: Rational,
    pub e: Lin,
    pub rel: CRel,
}

pub(super) fn bound_of(x: &Var, c: &Constraint) -> Option<Bound> {
    let a = c.lin.coeff_var(x);
    if a.is_zero() {
        return None;
    }
    let e = c.lin.without_var(x).scale(&-a.recip());
    Some(Bound { a, e, rel: c.rel })
}

/// `φ[x := e]`.
pub(super) fn at_point(f: &Fm, x: &Var, e: &Lin) -> Fm {
    f.subst(x, e)
}

/// `φ[x := e + s·ε]` for a positive infinitesimal `ε`; `s = ±1`.
pub(super) fn at_eps(f: &Fm, x: &Var, e: &Lin, s: i32) -> Fm {
    f.perturb(&|w| (w == x).then(|| (e.clone(), Rational::from_int(s as i64))))
}

/// `φ[x := s·∞]`. Every atom mentioning `x` must be monotone in it.
pub(super) fn at_inf(f: &Fm, x: &Var, s: i32) -> Fm {
    f.map_atoms(&mut |c| {
        let d = c.lin.direction(x).expect("monotone atom");
        if d == 0 {
            return Fm::Atom(c.clone());
        }
        match c.rel {
            CRel::Lt | CRel::Le => Fm::from_bool(d * s < 0),
            CRel::Eq => Fm::False,
            CRel::Ne => Fm::True,
        }
    })
}

fn strict_cmp(l: &Lin, u: &Lin, strict: bool) -> Fm {
    Fm::atom(l.sub(u), if strict { CRel::Lt } else { CRel::Le })
}

/// `∃x ⋀ atoms` by Fourier–Motzkin with equality substitution.
pub(super) fn fm_conj(x: &Var, atoms: &[Constraint], budget: &Budget) -> crate::Result<Fm> {
    let mut keep = Vec::new();
    let mut bounds = Vec::new();
    for c in atoms {
        match bound_of(x, c) {
            None => keep.push(Fm::Atom(c.clone())),
            Some(b) => bounds.push((c, b)),
        }
    }
    if let Some(i) = bounds.iter().position(|(_, b)| b.rel == CRel::Eq) {
        let e = bounds[i].1.e.clone();
        for (j, (c, _)) in bounds.iter().enumerate() {
            if j != i {
                keep.push(at_point(&Fm::Atom((*c).clone()), x, &e));
            }
        }
        return Ok(Fm::and(keep));
    }
    let mut lowers = Vec::new();
    let mut uppers = Vec::new();
    let mut nes = Vec::new();
    for (_, b) in bounds {
        let strict = b.rel == CRel::Lt;
        match b.rel {
            CRel::Ne => nes.push(b.e),
            _ if b.a.is_positive() => uppers.push((b.e, strict)),
            _ => lowers.push((b.e, strict)),
        }
    }
    budget.charge(lowers.len() * uppers.len())?;
    if nes.is_empty() {
        for (l, sl) in &lowers {
            for (u, su) in &uppers {
                keep.push(strict_cmp(l, u, *sl || *su));
            }
        }
        return Ok(Fm::and(keep));
    }
    // Either the solution interval has interior, so finitely many exclusions
    // cannot empty it, or it is a single point equal to a weak lower bound.
    let mut open = Vec::new();
    for (l, _) in &lowers {
        for (u, _) in &uppers {
            open.push(strict_cmp(l, u, true));
        }
    }
    let mut alts = vec![Fm::and(open)];
    for (i, (p, sp)) in lowers.iter().enumerate() {
        if *sp {
            continue;
        }
        let mut conj = Vec::new();
        for (j, (l, sl)) in lowers.iter().enumerate() {
            if j != i {
                conj.push(strict_cmp(l, p, *sl));
            }
        }
        for (u, su) in &uppers {
            conj.push(strict_cmp(p, u, *su));
        }
        for e in &nes {
            conj.push(Fm::atom(p.sub(e), CRel::Ne));
        }
        alts.push(Fm::and(conj));
    }
    keep.push(Fm::or(alts));
    Ok(Fm::and(keep))
}

/// `∃x φ` by virtual substitution with the smaller side of test points.
pub(super) fn vs(x: &Var, f: &Fm, budget: &Budget) -> crate::Result<Fm> {
    let (lower, upper) = test_points(x, f);
    if lower.len() <= upper.len() {
        vs_side(x, f, lower, 1, budget)
    } else {
        vs_side(x, f, upper, -1, budget)
    }
}

type Points = Vec<(Lin, bool)>;

/// Lower and upper test points `(e, strict)` from atoms with `x` outside floors.
fn test_points(x: &Var, f: &Fm) -> (Points, Points) {
    let mut atoms = Vec::new();
    f.collect_atoms(&mut atoms);
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for c in atoms {
        if c.lin.in_floor(x) {
            continue;
        }
        let Some(b) = bound_of(x, c) else { continue };
        match b.rel {
            CRel::Eq => {
                lower.push((b.e.clone(), false));
                upper.push((b.e, false));
            }
            CRel::Ne => {
                lower.push((b.e.clone(), true));
                upper.push((b.e, true));
            }
            r => {
                let strict = r == CRel::Lt;
                if b.a.is_negative() {
                    lower.push((b.e, strict));
                } else {
                    upper.push((b.e, strict));
                }
            }
        }
    }
    (lower, upper)
}

/// Test points `s·∞` and `e` or `e + s·ε` for each point `e`.
fn vs_side(x: &Var, f: &Fm, mut points: Points, s: i32, budget: &Budget) -> crate::Result<Fm> {
    points.sort();
    points.dedup();
    budget.charge(points.len() * f.size())?;
    let mut alts = vec![simplify(&at_inf(f, x, -s))];
    for (e, eps) in &points {
        let g = if *eps { at_eps(f, x, e, s) } else { at_point(f, x, e) };
        let g = simplify(&g);
        if g == Fm::True {
            return Ok(Fm::True);
        }
        alts.push(g);
    }
    Ok(Fm::or(alts))
}

/// `∃x φ` for `x` under floors when every atom with `x` under a floor is a
/// monotone `<`/`≤` condition and all of them are closed toward the same
/// side. The satisfying set's component endpoints then all come from the
/// floor-free atoms, so their test points suffice.
pub(super) fn monotone_exists(x: &Var, f: &Fm, budget: &Budget) -> Option<crate::Result<Fm>> {
    let mut atoms = Vec::new();
    f.collect_atoms(&mut atoms);
    let mut side = 0;
    for c in atoms {
        if !c.lin.in_floor(x) {
            continue;
        }
        if !matches!(c.rel, CRel::Lt | CRel::Le) {
            return None;
        }
        // `ℓ ≤ 0` with ℓ nondecreasing is closed downward: test from below
        let s = c.lin.direction(x)?;
        if side != 0 && side != s {
            return None;
        }
        side = s;
    }
    let (lower, upper) = test_points(x, f);
    Some(if side > 0 { vs_side(x, f, lower, 1, budget) } else { vs_side(x, f, upper, -1, budget) })
}

/// `∃x φ` for `x` outside all floors.
pub(super) fn exists(x: &Var, f: &Fm, budget: &Budget) -> crate::Result<Fm> {
    match dnf(f, 32) {
        Some(disjuncts) => {
            let mut out = Vec::with_capacity(disjuncts.len());
            for d in disjuncts {
                let r = simplify(&fm_conj(x, &d, budget)?);
                if r == Fm::True {
                    return Ok(Fm::True);
                }
                out.push(r);
            }
            Ok(Fm::or(out))
        }
        None => vs(x, f, budget),
    }
}
