//! Closure operators given by a membership oracle: independence, bases,
//! rank, and falsifiers for the pregeometry axioms.
//!
//! The engine never enumerates a closure. It only asks whether one element
//! lies in the closure of a finite set.

use std::fmt::Debug;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::{Error, Result};

pub trait ClosureOracle {
    type Elem: Clone + PartialEq + Debug;

    /// `b ∈ cl(a)`.
    fn member(&self, b: &Self::Elem, a: &[Self::Elem]) -> Result<bool>;

    fn describe(&self) -> String;
}

/// Elements of `a` kept by the greedy pass: each is outside the closure of
/// the ones kept before it together with `b`.
pub fn basis<O: ClosureOracle>(o: &O, a: &[O::Elem], b: &[O::Elem]) -> Result<Vec<O::Elem>> {
    let mut kept: Vec<O::Elem> = Vec::new();
    for x in a {
        let mut span = kept.clone();
        span.extend(b.iter().cloned());
        if !o.member(x, &span)? {
            span.push(x.clone());
            // extensivity is what makes the kept set independent
            if !o.member(x, &span)? {
                return Err(Error::Precondition(format!("{}: {x:?} is not in its own closure", o.describe())));
            }
            kept.push(x.clone());
        }
    }
    Ok(kept)
}

pub fn rank_over<O: ClosureOracle>(o: &O, a: &[O::Elem], b: &[O::Elem]) -> Result<usize> {
    Ok(basis(o, a, b)?.len())
}

/// Whether no element of `s` lies in the closure of the others with `b`.
pub fn independent_over<O: ClosureOracle>(o: &O, s: &[O::Elem], b: &[O::Elem]) -> Result<bool> {
    for i in 0..s.len() {
        let mut rest: Vec<O::Elem> = s[..i].iter().chain(&s[i + 1..]).cloned().collect();
        rest.extend(b.iter().cloned());
        if o.member(&s[i], &rest)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest independent subset of `a` over `b`, by trying every subset.
pub fn brute_force_rank<O: ClosureOracle>(o: &O, a: &[O::Elem], b: &[O::Elem]) -> Result<usize> {
    assert!(a.len() <= 16, "exhaustive rank over at most 16 elements");
    let mut best = 0;
    for mask in 0u32..(1 << a.len()) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let s: Vec<O::Elem> = (0..a.len()).filter(|i| mask >> i & 1 == 1).map(|i| a[i].clone()).collect();
        if independent_over(o, &s, b)? {
            best = size;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ExchangeReport {
    /// Triples that met the hypothesis.
    pub tested: usize,
    pub violations: Vec<String>,
}

/// For each `(a, b, A)` with `a ∈ cl(A ∪ {b}) ∖ cl(A)`, requires
/// `b ∈ cl(A ∪ {a})`.
pub fn exchange_check<O: ClosureOracle>(o: &O, samples: &[(O::Elem, O::Elem, Vec<O::Elem>)]) -> Result<ExchangeReport> {
    let mut report = ExchangeReport::default();
    for (a, b, set) in samples {
        let with = |x: &O::Elem| {
            let mut v = set.clone();
            v.push(x.clone());
            v
        };
        if o.member(a, set)? || !o.member(a, &with(b))? {
            continue;
        }
        report.tested += 1;
        if !o.member(b, &with(a))? {
            report.violations.push(format!("{a:?} in cl({set:?} + {b:?}) but {b:?} not in cl({set:?} + {a:?})"));
        }
    }
    Ok(report)
}

/// Every element of `a` is in `cl(a)`.
pub fn check_extensive<O: ClosureOracle>(o: &O, a: &[O::Elem]) -> Result<Option<String>> {
    for x in a {
        if !o.member(x, a)? {
            return Ok(Some(format!("{x:?} not in cl({a:?})")));
        }
    }
    Ok(None)
}

/// Idempotence probed through a witness: if `c ∈ cl(a)` then anything in
/// `cl(a ∪ {c})` is already in `cl(a)`.
pub fn check_idempotent<O: ClosureOracle>(o: &O, a: &[O::Elem], c: &O::Elem, d: &O::Elem) -> Result<Option<String>> {
    if !o.member(c, a)? {
        return Ok(None);
    }
    let mut ac = a.to_vec();
    ac.push(c.clone());
    if o.member(d, &ac)? && !o.member(d, a)? {
        return Ok(Some(format!("{d:?} in cl({a:?} + {c:?}) with {c:?} in cl({a:?}), but not in cl({a:?})")));
    }
    Ok(None)
}

/// Finite character, probed on small sets: `b ∈ cl(a)` iff `b ∈ cl(a₀)` for
/// some subset `a₀`, and membership is monotone along subsets.
pub fn check_finite_character<O: ClosureOracle>(o: &O, b: &O::Elem, a: &[O::Elem]) -> Result<Option<String>> {
    assert!(a.len() <= 4, "subset probe over at most 4 elements");
    let whole = o.member(b, a)?;
    let mut some = false;
    for mask in 0u32..(1 << a.len()) {
        let sub: Vec<O::Elem> = (0..a.len()).filter(|i| mask >> i & 1 == 1).map(|i| a[i].clone()).collect();
        let inside = o.member(b, &sub)?;
        if inside && !whole {
            return Ok(Some(format!("{b:?} in cl({sub:?}) but not in cl({a:?})")));
        }
        some |= inside;
    }
    if whole && !some {
        return Ok(Some(format!("{b:?} in cl({a:?}) but in the closure of no subset")));
    }
    Ok(None)
}

/// A matroid on `{0, …, n−1}` given by vectors over the two-element field,
/// or the uniform matroid.
#[derive(Clone, Debug)]
pub enum FiniteMatroidOracle {
    /// Element `i` is the bit vector `vectors[i]`.
    Binary { vectors: Vec<u32> },
    /// Any `rank` elements are independent.
    Uniform { rank: usize, size: usize },
}

pub const MAX_GROUND: usize = 8;

impl FiniteMatroidOracle {
    pub fn binary(vectors: Vec<u32>) -> Self {
        assert!(vectors.len() <= MAX_GROUND, "ground set too large");
        FiniteMatroidOracle::Binary { vectors }
    }

    pub fn uniform(rank: usize, size: usize) -> Self {
        assert!(size <= MAX_GROUND, "ground set too large");
        FiniteMatroidOracle::Uniform { rank, size }
    }

    /// Every element independent.
    pub fn free(size: usize) -> Self {
        Self::binary((0..size).map(|i| 1 << i).collect())
    }

    /// `size` random vectors in `GF(2)^dim`.
    pub fn random(rng: &mut impl Rng, size: usize, dim: u32) -> Self {
        Self::binary((0..size).map(|_| rng.gen_range(0..1u32 << dim)).collect())
    }

    pub fn ground(&self) -> Vec<usize> {
        match self {
            FiniteMatroidOracle::Binary { vectors } => (0..vectors.len()).collect(),
            FiniteMatroidOracle::Uniform { size, .. } => (0..*size).collect(),
        }
    }
}

/// Whether `v` is a sum of some of `rows`.
fn in_span(v: u32, rows: impl IntoIterator<Item = u32>) -> bool {
    let mut pivots: Vec<u32> = Vec::new();
    for mut r in rows {
        for p in &pivots {
            r = r.min(r ^ p);
        }
        if r != 0 {
            pivots.push(r);
            pivots.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let mut v = v;
    for p in &pivots {
        v = v.min(v ^ p);
    }
    v == 0
}

impl ClosureOracle for FiniteMatroidOracle {
    type Elem = usize;

    fn member(&self, b: &usize, a: &[usize]) -> Result<bool> {
        Ok(match self {
            FiniteMatroidOracle::Binary { vectors } => in_span(vectors[*b], a.iter().map(|&i| vectors[i])),
            FiniteMatroidOracle::Uniform { rank, .. } => {
                let mut distinct = a.to_vec();
                distinct.sort_unstable();
                distinct.dedup();
                a.contains(b) || distinct.len() >= *rank
            }
        })
    }

    fn describe(&self) -> String {
        match self {
            FiniteMatroidOracle::Binary { vectors } => format!("binary matroid {vectors:?}"),
            FiniteMatroidOracle::Uniform { rank, size } => format!("uniform matroid U({rank},{size})"),
        }
    }
}

/// `cl(A) = A ∪ {e}` for nonempty `A`: extensive and idempotent, but without
/// exchange.
#[derive(Clone, Debug)]
pub struct BrokenOracle {
    pub fixed: usize,
}

impl ClosureOracle for BrokenOracle {
    type Elem = usize;

    fn member(&self, b: &usize, a: &[usize]) -> Result<bool> {
        Ok(a.contains(b) || (!a.is_empty() && *b == self.fixed))
    }

    fn describe(&self) -> String {
        format!("broken closure fixing {}", self.fixed)
    }
}

/// Random `(a, b, A)` triples over `ground`.
pub fn random_triples(rng: &mut impl Rng, ground: &[usize], count: usize) -> Vec<(usize, usize, Vec<usize>)> {
    (0..count)
        .map(|_| {
            let a = *ground.choose(rng).expect("nonempty ground");
            let b = *ground.choose(rng).expect("nonempty ground");
            let k = rng.gen_range(0..=ground.len().min(3));
            let set = ground.choose_multiple(rng, k).cloned().collect();
            (a, b, set)
        })
        .collect()
}
