//! Germs of quantifier-free formulas at a point.
//!
//! Moving every variable `w` to `w + ε·v(w)`, with ε a positive infinitesimal
//! and `v(w)` a velocity, changes the value of a term by `ε` times a linear
//! form in the velocities plus integer jumps of its floors. A floor jumps
//! down exactly when its argument sits on an integer and moves down. The
//! germ of a formula spells this out atom by atom; velocities never end up
//! under a floor, so quantifying over them is linear real arithmetic.

use std::collections::BTreeMap;

use crate::fm::{CRel, Constraint, Fm};
use crate::linear::{Key, Lin};
use crate::rational::Rational;
use crate::syntax::Var;

/// Velocity of each moving variable; absent variables stay put.
pub type Shift = BTreeMap<Var, Lin>;

/// One case of a moved term: under `guard` its value is `val + ε·vel`.
struct Piece {
    guard: Fm,
    val: Lin,
    vel: Lin,
}

fn is_zero(l: &Lin) -> bool {
    l.is_constant() && l.constant_part().is_zero()
}

fn expand(t: &Lin, shift: &Shift) -> Vec<Piece> {
    let mut out =
        vec![Piece { guard: Fm::True, val: Lin::constant(t.constant_part().clone()), vel: Lin::zero() }];
    for (k, c) in t.terms() {
        match k {
            Key::Var(w) => {
                for p in &mut out {
                    p.val = p.val.add_scaled(&Lin::var(w), c);
                    if let Some(s) = shift.get(w) {
                        p.vel = p.vel.add_scaled(s, c);
                    }
                }
            }
            Key::Floor(a) => {
                let mut opts: Vec<(Fm, Lin)> = Vec::new();
                for q in expand(a, shift) {
                    let fl = Lin::floor_of(&q.val);
                    if is_zero(&q.vel) {
                        opts.push((q.guard, fl));
                        continue;
                    }
                    let drop = Fm::and2(Fm::int(&q.val), Fm::atom(q.vel.clone(), CRel::Lt));
                    let stay = Fm::and2(q.guard.clone(), drop.neg());
                    let fall = Fm::and2(q.guard, drop);
                    if stay != Fm::False {
                        opts.push((stay, fl.clone()));
                    }
                    if fall != Fm::False {
                        opts.push((fall, fl.add_const(&-Rational::one())));
                    }
                }
                let mut next = Vec::with_capacity(out.len() * opts.len());
                for p in &out {
                    for (g, v) in &opts {
                        let guard = Fm::and2(p.guard.clone(), g.clone());
                        if guard != Fm::False {
                            next.push(Piece { guard, val: p.val.add_scaled(v, c), vel: p.vel.clone() });
                        }
                    }
                }
                out = next;
            }
        }
    }
    out
}

/// Truth of `val + ε·vel ⋈ 0`.
fn signed(val: Lin, vel: Lin, rel: CRel) -> Fm {
    let at = Fm::atom(val.clone(), CRel::Eq);
    match rel {
        CRel::Lt => Fm::or2(Fm::atom(val, CRel::Lt), Fm::and2(at, Fm::atom(vel, CRel::Lt))),
        CRel::Le => Fm::or2(Fm::atom(val, CRel::Lt), Fm::and2(at, Fm::atom(vel, CRel::Le))),
        CRel::Eq => Fm::and2(at, Fm::atom(vel, CRel::Eq)),
        CRel::Ne => Fm::or2(Fm::atom(val, CRel::Ne), Fm::atom(vel, CRel::Ne)),
    }
}

fn germ_atom(c: &Constraint, shift: &Shift) -> Fm {
    Fm::or(expand(&c.lin, shift).into_iter().map(|p| Fm::and2(p.guard, signed(p.val, p.vel, c.rel))).collect())
}

/// Quantifier-free formula true at `(x, v)` iff `f` holds at `x + ε·v`.
/// `f` must be quantifier-free.
pub fn germ(f: &Fm, shift: &Shift) -> Fm {
    debug_assert!(f.is_qf());
    f.map_atoms(&mut |c| germ_atom(c, shift))
}

/// `vars[i] ↦ dirs[i]`.
pub fn along(vars: &[Var], dirs: &[Var]) -> Shift {
    vars.iter().cloned().zip(dirs.iter().map(Lin::var)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;

    fn fm(s: &str) -> Fm {
        Fm::from_formula(&parse_formula(s).unwrap())
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    /// Truth at `x + t·v` for a small rational `t` against the germ.
    #[test]
    fn agrees_with_small_steps() {
        let x = Var::new("x");
        let v = Var::new("v");
        let shift = along(&[x.clone()], &[v.clone()]);
        for text in ["int(x)", "x - floor(x) < 1/2", "floor(2*x) = 2*floor(x)", "floor(floor(x)/2 - x/3) >= x - 3"] {
            let f = fm(text);
            let g = germ(&f, &shift);
            for i in -24..=24 {
                for dir in [-1i64, 0, 1] {
                    let xv = q(i, 4);
                    let at = g.eval(&|w| Some(if *w == x { xv.clone() } else { q(dir, 1) })).unwrap();
                    let t = q(dir, 1000);
                    let moved = f.eval(&|_| Some(&xv + &t)).unwrap();
                    assert_eq!(at, moved, "{text} at {xv} direction {dir}");
                }
            }
        }
    }
}
