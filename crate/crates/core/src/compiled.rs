//! Quantifier-free formulas compiled to machine-integer arithmetic, for bulk
//! evaluation at points whose coordinates share one denominator.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::fm::{CRel, Fm};
use crate::linear::{Key, Lin};
use crate::rational::Rational;
use crate::syntax::Var;

/// `(Σ aᵢ·nᵢ + Σ bⱼ·Fⱼ + c) / scale` where `nᵢ` are coordinate numerators and
/// `Fⱼ` values of earlier floor nodes.
#[derive(Debug)]
struct Node {
    scale: i128,
    vars: Vec<(usize, i128)>,
    floors: Vec<(usize, i128)>,
    constant: i128,
}

#[derive(Debug)]
enum Tree {
    Const(bool),
    Atom(Node, CRel),
    And(Vec<Tree>),
    Or(Vec<Tree>),
}

#[derive(Debug)]
pub struct Compiled {
    floors: Vec<Node>,
    tree: Tree,
}

const LIMIT: i128 = 1 << 62;

fn small(b: &BigInt) -> Option<i128> {
    let v = b.to_i128()?;
    (v.abs() < LIMIT).then_some(v)
}

struct Builder<'a> {
    vars: &'a [Var],
    den: BigInt,
    floors: Vec<Node>,
    memo: HashMap<Arc<Lin>, usize>,
}

impl Builder<'_> {
    fn node(&mut self, l: &Lin) -> Option<Node> {
        let mut scale = l.constant_part().denom();
        let mut raw_vars = Vec::new();
        let mut raw_floors = Vec::new();
        for (k, c) in l.terms() {
            match k {
                Key::Var(w) => {
                    let i = self.vars.iter().position(|v| v == w)?;
                    let per = c / &Rational::from_bigints(self.den.clone(), BigInt::one());
                    scale = scale.lcm(&per.denom());
                    raw_vars.push((i, per));
                }
                Key::Floor(a) => {
                    let j = match self.memo.get(a) {
                        Some(&j) => j,
                        None => {
                            let n = self.node(a)?;
                            self.floors.push(n);
                            let j = self.floors.len() - 1;
                            self.memo.insert(a.clone(), j);
                            j
                        }
                    };
                    scale = scale.lcm(&c.denom());
                    raw_floors.push((j, c.clone()));
                }
            }
        }
        let s = Rational::from_bigints(scale.clone(), BigInt::one());
        let int = |q: &Rational| small(&(q * &s).numer());
        Some(Node {
            scale: small(&scale)?,
            vars: raw_vars.iter().map(|(i, q)| Some((*i, int(q)?))).collect::<Option<_>>()?,
            floors: raw_floors.iter().map(|(j, q)| Some((*j, int(q)?))).collect::<Option<_>>()?,
            constant: int(l.constant_part())?,
        })
    }

    fn tree(&mut self, f: &Fm) -> Option<Tree> {
        Some(match f {
            Fm::True => Tree::Const(true),
            Fm::False => Tree::Const(false),
            Fm::Atom(c) => Tree::Atom(self.node(&c.lin)?, c.rel),
            Fm::And(v) => Tree::And(v.iter().map(|g| self.tree(g)).collect::<Option<_>>()?),
            Fm::Or(v) => Tree::Or(v.iter().map(|g| self.tree(g)).collect::<Option<_>>()?),
            Fm::Ex(..) | Fm::All(..) => return None,
        })
    }
}

impl Node {
    /// Scaled value (`value · scale`).
    fn scaled(&self, nums: &[i64], fl: &[i128]) -> Option<i128> {
        let mut acc = self.constant;
        for (i, a) in &self.vars {
            acc = acc.checked_add(a.checked_mul(nums[*i] as i128)?)?;
        }
        for (j, b) in &self.floors {
            acc = acc.checked_add(b.checked_mul(fl[*j])?)?;
        }
        Some(acc)
    }
}

impl Tree {
    fn eval(&self, nums: &[i64], fl: &[i128]) -> Option<bool> {
        Some(match self {
            Tree::Const(b) => *b,
            Tree::Atom(n, rel) => {
                let v = n.scaled(nums, fl)?;
                match rel {
                    CRel::Lt => v < 0,
                    CRel::Le => v <= 0,
                    CRel::Eq => v == 0,
                    CRel::Ne => v != 0,
                }
            }
            Tree::And(v) => {
                for t in v {
                    if !t.eval(nums, fl)? {
                        return Some(false);
                    }
                }
                true
            }
            Tree::Or(v) => {
                for t in v {
                    if t.eval(nums, fl)? {
                        return Some(true);
                    }
                }
                false
            }
        })
    }
}

impl Compiled {
    /// Compiles `f` for points `(n₁/den, …, n_k/den)` over `vars`. `None` if
    /// `f` has quantifiers, other free names, or coefficients too large.
    pub fn new(f: &Fm, vars: &[Var], den: i64) -> Option<Compiled> {
        let mut b = Builder { vars, den: BigInt::from(den), floors: Vec::new(), memo: HashMap::new() };
        let tree = b.tree(f)?;
        Some(Compiled { floors: b.floors, tree })
    }

    /// Truth at the point with numerators `nums`; `None` on overflow.
    pub fn eval(&self, nums: &[i64]) -> Option<bool> {
        let mut fl = Vec::with_capacity(self.floors.len());
        for n in &self.floors {
            let v = n.scaled(nums, &fl)?;
            fl.push(v.div_euclid(n.scale));
        }
        self.tree.eval(nums, &fl)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{var_names, Gen};

    #[test]
    fn agrees_with_exact_evaluation() {
        let vars = var_names(&["x", "y"]);
        let mut g = Gen::new(3);
        for _ in 0..200 {
            let f = Fm::from_formula(&g.qf(&vars));
            let c = Compiled::new(&f, &vars, 8).unwrap();
            for a in (-20..=20).step_by(3) {
                for b in (-20..=20).step_by(5) {
                    let env = |w: &Var| {
                        let n = if *w == vars[0] { a } else { b };
                        Some(Rational::new(n, 8))
                    };
                    assert_eq!(c.eval(&[a, b]), f.eval(&env), "{f} at {a}/8, {b}/8");
                }
            }
        }
    }
}
