//! Reference semantics for one quantified variable by exhaustive search.
//!
//! Every term `ℓ(y)` in one variable satisfies `ℓ(y + P) = ℓ(y) + s·P`, where
//! `s` is its slope with floors erased and `P` the lattice modulus of `y`.
//! Hence beyond a computable bound every atom is periodic in `y` with period
//! `P`, and `∃y φ` only needs `y` in a window of width `2(C + P)`. Inside the
//! window truth is constant between consecutive breakpoints, all of which are
//! enumerated exactly.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_integer::Integer;

use crate::fm::{Constraint, Fm};
use crate::linear::{Key, Lin};
use crate::rational::Rational;
use crate::syntax::Var;

/// Slope with floors erased, constant with floors erased, and the maximal
/// deviation of the term from that affine function.
fn smooth(l: &Lin, y: &Var) -> (Rational, Rational, Rational) {
    let mut s = Rational::zero();
    let mut c = l.constant_part().clone();
    let mut dev = Rational::zero();
    for (k, coeff) in l.terms() {
        match k {
            Key::Var(w) if w == y => s += coeff,
            Key::Var(w) => panic!("uninstantiated variable {w}"),
            Key::Floor(a) => {
                let (sa, ca, da) = smooth(a, y);
                s += &(coeff * &sa);
                c += &(coeff * &ca);
                dev += &(&coeff.abs() * &(&da + &Rational::one()));
            }
        }
    }
    (s, c, dev)
}

/// Lcm of the denominators of the coefficient paths from a floor argument
/// down to `y`.
fn modulus(l: &Lin, y: &Var, m: &Rational, acc: &mut num_bigint::BigInt) {
    for (k, c) in l.terms() {
        match k {
            Key::Var(w) if w == y => *acc = acc.lcm(&(m * c).denom()),
            Key::Var(_) => {}
            Key::Floor(a) => modulus(a, y, &(m * c), acc),
        }
    }
}

fn depth(l: &Lin) -> usize {
    l.terms()
        .iter()
        .map(|(k, _)| match k {
            Key::Floor(a) => 1 + depth(a),
            Key::Var(_) => 0,
        })
        .max()
        .unwrap_or(0)
}

fn eval_at(l: &Lin, y: &Var, t: &Rational) -> Rational {
    l.eval(&|w: &Var| (w == y).then(|| t.clone())).expect("only y is free")
}

/// Adds the points in `(lo, hi)` where `l` crosses an integer (`integers`)
/// or zero, on each piece of `pts` where `l`'s floors are constant.
fn crossings(l: &Lin, y: &Var, pts: &BTreeSet<Rational>, integers: bool, out: &mut BTreeSet<Rational>) {
    let slope = l.coeff_var(y);
    if slope.is_zero() {
        return;
    }
    let v: Vec<&Rational> = pts.iter().collect();
    for w in v.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = (a + b) / Rational::from_int(2);
        let at_mid = eval_at(l, y, &mid);
        let va = &at_mid + &(&slope * &(a - &mid));
        let vb = &at_mid + &(&slope * &(b - &mid));
        let (lo, hi) = if va <= vb { (va, vb) } else { (vb, va) };
        let targets: Vec<Rational> = if integers {
            let mut m = lo.ceil();
            let mut t = Vec::new();
            while m <= hi {
                t.push(m.clone());
                m = &m + &Rational::one();
            }
            t
        } else if lo <= Rational::zero() && Rational::zero() <= hi {
            vec![Rational::zero()]
        } else {
            vec![]
        };
        for m in targets {
            let p = &mid + &(&(&m - &at_mid) / &slope);
            if &p > a && &p < b {
                out.insert(p);
            }
        }
    }
}

/// Lattice period of `y` in `f` (one when no floor mentions `y`) and a
/// bound beyond which every atom with nonzero slope has constant sign.
pub(crate) fn period_and_bound(f: &Fm, y: &Var) -> (Rational, Rational) {
    let mut atoms: Vec<&Constraint> = Vec::new();
    f.collect_atoms(&mut atoms);
    let mut floors: BTreeSet<Arc<Lin>> = BTreeSet::new();
    let mut p = num_bigint::BigInt::from(1);
    let mut bound = Rational::zero();
    for c in &atoms {
        c.lin.collect_floors(&mut floors);
        let (s, k, dev) = smooth(&c.lin, y);
        if !s.is_zero() {
            let b = &(&k.abs() + &dev) / &s.abs();
            bound = bound.max(b);
        }
    }
    for a in &floors {
        modulus(a, y, &Rational::one(), &mut p);
    }
    (Rational::from_bigints(p, num_bigint::BigInt::from(1)), bound)
}

/// `ends` together with every point between its extremes where a floor
/// argument of `f` crosses an integer or an atom crosses zero. Between two
/// consecutive returned points the truth of `f` is constant.
pub(crate) fn breakpoints(f: &Fm, y: &Var, ends: BTreeSet<Rational>) -> BTreeSet<Rational> {
    let mut atoms: Vec<&Constraint> = Vec::new();
    f.collect_atoms(&mut atoms);
    let mut floors: BTreeSet<Arc<Lin>> = BTreeSet::new();
    for c in &atoms {
        c.lin.collect_floors(&mut floors);
    }
    let mut pts = ends;
    let mut floors: Vec<Arc<Lin>> = floors.into_iter().collect();
    floors.sort_by_key(|a| depth(a));
    for a in &floors {
        let mut add = BTreeSet::new();
        crossings(a, y, &pts, true, &mut add);
        pts.extend(add);
    }
    let mut add = BTreeSet::new();
    for c in &atoms {
        crossings(&c.lin, y, &pts, false, &mut add);
    }
    pts.extend(add);
    pts
}

/// Points at which to test `f`, a quantifier-free formula in `y` alone, so
/// that `∃y f` holds iff `f` holds at one of them.
pub fn test_points(f: &Fm, y: &Var) -> Vec<Rational> {
    let (period, bound) = period_and_bound(f, y);
    let edge = &(&bound + &period) + &Rational::one();
    let v: Vec<Rational> = breakpoints(f, y, [-edge.clone(), edge].into_iter().collect()).into_iter().collect();
    let mut out = v.clone();
    for w in v.windows(2) {
        out.push((&w[0] + &w[1]) / Rational::from_int(2));
    }
    out
}

/// `∃y f` for `f` quantifier-free in `y` alone.
pub fn exists_one(f: &Fm, y: &Var) -> bool {
    test_points(f, y)
        .iter()
        .any(|t| f.eval(&|w: &Var| (w == y).then(|| t.clone())).expect("only y is free"))
}

/// Truth of a closed formula with at most one quantifier on every path.
pub fn decide_shallow(f: &Fm) -> bool {
    match f {
        Fm::True => true,
        Fm::False => false,
        Fm::Atom(c) => c.eval(&|_| None).expect("closed atom"),
        Fm::And(v) => v.iter().all(decide_shallow),
        Fm::Or(v) => v.iter().any(decide_shallow),
        Fm::Ex(y, b) => {
            assert!(b.is_qf(), "nested quantifier");
            exists_one(b, y)
        }
        Fm::All(y, b) => {
            assert!(b.is_qf(), "nested quantifier");
            !exists_one(&b.neg(), y)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;

    fn closed(text: &str) -> bool {
        decide_shallow(&Fm::from_formula(&parse_formula(text).unwrap()))
    }

    #[test]
    fn small_sentences() {
        assert!(!closed("exists y . 0 < y and y < 1 and int(y)"));
        assert!(closed("exists y . 0 < y and y <= 1 and int(y)"));
        assert!(closed("exists y . floor(3*y) = 2 and floor(2*y) = 1"));
        assert!(!closed("exists y . floor(3*y) = 0 and floor(2*y) = 1"));
        assert!(closed("forall y . floor(y/2) <= y/2"));
        assert!(closed("exists y . y > 100 and int(y/7 - 1/3)"));
        assert!(!closed("exists y . y - floor(y) > 1/2 and 2*y - floor(2*y) < 0"));
    }
}
