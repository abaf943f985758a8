//! Projection dimension: the largest `d` such that some projection onto `d`
//! coordinates has nonempty interior.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::qe::{project, satisfiable};
use crate::syntax::DefinableSet;
use crate::topology::{has_interior_fm, qf};
use crate::Result;

/// `−∞` for the empty set, otherwise a dimension in `0..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DimensionValue {
    NegInf,
    Finite(usize),
}

impl DimensionValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            DimensionValue::NegInf => None,
            DimensionValue::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for DimensionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimensionValue::NegInf => f.write_str("-inf"),
            DimensionValue::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A number, or the string `"-inf"`.
impl Serialize for DimensionValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DimensionValue::NegInf => s.serialize_str("-inf"),
            DimensionValue::Finite(d) => s.serialize_u64(*d as u64),
        }
    }
}

/// Dimension together with a projection attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dimension {
    pub dim: DimensionValue,
    /// Ambient indices of the witnessing projection; empty for `−∞`.
    pub witness_projection: Vec<usize>,
}

/// Subsets of `0..n` of size `d` in lexicographic order.
pub fn signatures(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, d, &mut Vec::new(), &mut out);
    out
}

/// With parameters, the maximum over their values.
pub fn dim_with_witness(s: &DefinableSet) -> Result<Dimension> {
    let f = qf(&s.fm())?;
    if !satisfiable(&f)? {
        return Ok(Dimension { dim: DimensionValue::NegInf, witness_projection: vec![] });
    }
    let s = s.from_fm(&f);
    let n = s.vars.len();
    for d in (1..=n).rev() {
        for sig in signatures(n, d) {
            let p = if d == n { s.clone() } else { project(&s, &sig)? };
            if has_interior_fm(&p.fm(), &p.vars)? {
                return Ok(Dimension { dim: DimensionValue::Finite(d), witness_projection: sig });
            }
        }
    }
    Ok(Dimension { dim: DimensionValue::Finite(0), witness_projection: vec![] })
}

pub fn dim(s: &DefinableSet) -> Result<DimensionValue> {
    Ok(dim_with_witness(s)?.dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn d(text: &str, vars: &[&str]) -> DimensionValue {
        dim(&parse(text, vars, &[]).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(d("false", &["x"]), DimensionValue::NegInf);
        assert_eq!(d("int(x) and int(y)", &["x", "y"]), DimensionValue::Finite(0));
        assert_eq!(d("y = floor(x)", &["x", "y"]), DimensionValue::Finite(1));
        assert_eq!(d("0 < x and x < 1 and 0 < y and y < 1", &["x", "y"]), DimensionValue::Finite(2));
        assert_eq!(d("true", &[]), DimensionValue::Finite(0));
        assert_eq!(d("int(x) and z = x + y", &["x", "y", "z"]), DimensionValue::Finite(1));
    }

    #[test]
    fn witness_is_the_first_projection_found() {
        let s = parse("x = 0", &["x", "y"], &[]).unwrap();
        let w = dim_with_witness(&s).unwrap();
        assert_eq!(w.witness_projection, vec![1]);
    }

    #[test]
    fn serializes_minus_infinity_as_text() {
        assert_eq!(serde_json::to_string(&DimensionValue::NegInf).unwrap(), "\"-inf\"");
        assert_eq!(serde_json::to_string(&DimensionValue::Finite(2)).unwrap(), "2");
    }
}
