//! Seeded random generators for formulas and sets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::Rational;
use crate::syntax::{Atom, Formula, Rel, Term, Var};

/// Shape limits for generated formulas.
#[derive(Clone, Debug)]
pub struct Shape {
    pub max_den: i64,
    pub max_const: i64,
    pub max_atoms: usize,
    pub max_depth: usize,
    pub floor_nesting: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_den: 4, max_const: 4, max_atoms: 3, max_depth: 3, floor_nesting: 2 }
    }
}

pub struct Gen {
    pub rng: ChaCha8Rng,
    pub shape: Shape,
}

const RELS: [Rel; 6] = [Rel::Lt, Rel::Le, Rel::Eq, Rel::Ne, Rel::Ge, Rel::Gt];

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), shape: Shape::default() }
    }

    pub fn with_shape(seed: u64, shape: Shape) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), shape }
    }

    /// Rational with denominator at most `max_den` and magnitude at most `max`.
    pub fn rational(&mut self, max: i64) -> Rational {
        let den = self.rng.gen_range(1..=self.shape.max_den);
        let num = self.rng.gen_range(-max * den..=max * den);
        Rational::new(num, den)
    }

    /// Nonzero coefficient, biased toward small integers.
    pub fn coeff(&mut self) -> Rational {
        loop {
            let c = if self.rng.gen_bool(0.6) {
                Rational::from_int(*[1, -1, 2, -2].choose(&mut self.rng).unwrap())
            } else {
                self.rational(2)
            };
            if !c.is_zero() {
                return c;
            }
        }
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        xs.choose(&mut self.rng).expect("nonempty choice")
    }

    /// `Σ cᵢ·vᵢ + c` over one or two of `vars`.
    pub fn linear(&mut self, vars: &[Var]) -> Term {
        let mut t = Term::Const(self.rational(self.shape.max_const));
        if vars.is_empty() {
            return t;
        }
        let k = if vars.len() > 1 && self.rng.gen_bool(0.4) { 2 } else { 1 };
        let mut chosen: Vec<&Var> = vars.choose_multiple(&mut self.rng, k).collect();
        chosen.sort();
        for v in chosen {
            let c = self.coeff();
            t = Term::sum(Term::scale(c, Term::Var(v.clone())), t);
        }
        t
    }

    /// A linear term possibly containing floors nested up to `depth`.
    pub fn term(&mut self, vars: &[Var], depth: usize) -> Term {
        let lin = self.linear(vars);
        if depth == 0 || self.rng.gen_bool(0.7) {
            return lin;
        }
        let v = self.pick(vars).clone();
        let inner = self.term(&[v], depth - 1);
        let c = self.coeff();
        Term::sum(lin, Term::scale(c, Term::floor(inner)))
    }

    pub fn atom(&mut self, vars: &[Var]) -> Formula {
        let nest = self.shape.floor_nesting;
        match self.rng.gen_range(0..10) {
            0..=3 => {
                let t = self.linear(vars);
                let rel = *self.pick(&RELS);
                Formula::Atom(Atom::new(t, rel, Term::Const(Rational::zero())))
            }
            4 | 5 => {
                let t = self.linear(vars);
                Formula::Atom(Atom::int(t))
            }
            6 | 7 => {
                // frac(t) ⋈ c
                let t = self.linear(vars);
                let frac = Term::sum(t.clone(), Term::scale(-Rational::one(), Term::floor(t)));
                let c = Rational::new(self.rng.gen_range(0..=self.shape.max_den), self.shape.max_den);
                let rel = *self.pick(&RELS);
                Formula::Atom(Atom::new(frac, rel, Term::Const(c)))
            }
            _ => {
                let lhs = Term::floor(self.term(vars, nest.saturating_sub(1)));
                let rhs = self.linear(vars);
                let rel = *self.pick(&RELS);
                Formula::Atom(Atom::new(lhs, rel, rhs))
            }
        }
    }

    /// Quantifier-free formula with at most `max_atoms` atoms.
    pub fn qf(&mut self, vars: &[Var]) -> Formula {
        let n = self.rng.gen_range(1..=self.shape.max_atoms);
        self.qf_sized(vars, n, self.shape.max_depth)
    }

    fn qf_sized(&mut self, vars: &[Var], atoms: usize, depth: usize) -> Formula {
        if atoms <= 1 || depth == 0 {
            let a = self.atom(vars);
            return if self.rng.gen_bool(0.15) { Formula::not(a) } else { a };
        }
        let left = self.rng.gen_range(1..atoms);
        let a = self.qf_sized(vars, left, depth - 1);
        let b = self.qf_sized(vars, atoms - left, depth - 1);
        let f = if self.rng.gen_bool(0.5) { Formula::And(vec![a, b]) } else { Formula::Or(vec![a, b]) };
        if self.rng.gen_bool(0.1) {
            Formula::not(f)
        } else {
            f
        }
    }

    /// Formula over free `vars` with up to `qdepth` nested quantifiers, each
    /// binding a fresh name from `bound`.
    pub fn quantified(&mut self, vars: &[Var], bound: &[Var], qdepth: usize) -> Formula {
        let depth = qdepth.min(bound.len());
        self.quant_rec(vars.to_vec(), bound, depth)
    }

    fn quant_rec(&mut self, scope: Vec<Var>, bound: &[Var], depth: usize) -> Formula {
        if depth == 0 {
            return self.qf(&scope);
        }
        let y = bound[0].clone();
        let mut inner_scope = scope.clone();
        inner_scope.push(y.clone());
        let body = self.quant_rec(inner_scope, &bound[1..], depth - 1);
        let q = if self.rng.gen_bool(0.5) { Formula::exists(y, body) } else { Formula::forall(y, body) };
        match self.rng.gen_range(0..3) {
            0 => q,
            1 => Formula::And(vec![self.atom(&scope), q]),
            _ => Formula::Or(vec![self.atom(&scope), q]),
        }
    }
}

pub fn var_names(prefix: &[&str]) -> Vec<Var> {
    prefix.iter().map(|s| Var::new(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let vars = var_names(&["x", "y"]);
        let a: Vec<String> = {
            let mut g = Gen::new(7);
            (0..5).map(|_| g.qf(&vars).to_string()).collect()
        };
        let b: Vec<String> = {
            let mut g = Gen::new(7);
            (0..5).map(|_| g.qf(&vars).to_string()).collect()
        };
        assert_eq!(a, b);
    }
}
