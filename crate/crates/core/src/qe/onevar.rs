//! Explicit description of subsets of the line: finitely many points and
//! open intervals inside a core window, and outside it a pattern repeating
//! with the lattice period.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::fm::{CRel, Fm};
use crate::linear::Lin;
use crate::oracle::{breakpoints, period_and_bound};
use crate::rational::Rational;
use crate::simplify::simplify;
use crate::syntax::{DefinableSet, Var};
use crate::{Error, Result};

/// A point or an open interval; `None` ends are infinite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Piece {
    Point { at: Rational },
    Interval { lo: Option<Rational>, hi: Option<Rational> },
}

impl Piece {
    fn holds(&self, t: &Lin) -> Fm {
        match self {
            Piece::Point { at } => Fm::atom(t.add_const(&-at), CRel::Eq),
            Piece::Interval { lo, hi } => Fm::and2(
                lo.as_ref().map_or(Fm::True, |a| Fm::atom(t.neg().add_const(a), CRel::Lt)),
                hi.as_ref().map_or(Fm::True, |b| Fm::atom(t.add_const(&-b), CRel::Lt)),
            ),
        }
    }

    /// The simplest rational in the piece.
    pub fn sample(&self) -> Rational {
        match self {
            Piece::Point { at } => at.clone(),
            Piece::Interval { lo, hi } => simplest_between(lo.as_ref(), hi.as_ref()),
        }
    }
}

/// Smallest denominator first, then smallest magnitude.
pub fn simplest_between(lo: Option<&Rational>, hi: Option<&Rational>) -> Rational {
    let zero = Rational::zero();
    let above = |q: &Rational| lo.map_or(true, |a| q > a);
    let below = |q: &Rational| hi.map_or(true, |b| q < b);
    if above(&zero) && below(&zero) {
        return zero;
    }
    let mut den = 1i64;
    loop {
        let d = Rational::from_int(den);
        let cand = match (lo, hi) {
            (Some(a), _) if !a.is_negative() => (&(a * &d).floor() + &Rational::one()) / d.clone(),
            (_, Some(b)) => (&(b * &d).ceil() - &Rational::one()) / d.clone(),
            _ => unreachable!("an interval without ends contains zero"),
        };
        if above(&cand) && below(&cand) {
            return cand;
        }
        den *= 2;
    }
}

/// `period = 0` means no floor mentions the variable: the window is the
/// whole line and both tails are empty. Otherwise the set agrees with
/// `window_cells` on `[−core_bound, core_bound]`, and beyond it with the
/// tail whose pieces describe `x mod period ∈ [0, period)`. The two tails
/// may differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OneVarNormalForm {
    pub period: Rational,
    pub core_bound: Rational,
    pub window_cells: Vec<Piece>,
    pub left_tail: Vec<Piece>,
    pub right_tail: Vec<Piece>,
}

impl OneVarNormalForm {
    /// The described set as a formula in `x`.
    pub fn realization(&self, x: &Var) -> Fm {
        let t = Lin::var(x);
        let window = Fm::or(self.window_cells.iter().map(|p| p.holds(&t)).collect());
        if self.period.is_zero() {
            return window;
        }
        let p = &self.period;
        let offset = t.sub(&Lin::floor_of(&t.scale(&p.recip())).scale(p));
        let tail = |cells: &[Piece]| Fm::or(cells.iter().map(|c| c.holds(&offset)).collect());
        let c = &self.core_bound;
        simplify(&Fm::or(vec![
            window,
            Fm::and2(Fm::atom(t.neg().add_const(c), CRel::Lt), tail(&self.right_tail)),
            Fm::and2(Fm::atom(t.add_const(c), CRel::Lt), tail(&self.left_tail)),
        ]))
    }

    /// First multiple of the period beyond the core.
    fn tail_start(&self) -> Rational {
        &(&self.core_bound / &self.period).floor() * &self.period + self.period.clone()
    }

    /// A rational element, preferring interval pieces and simple numbers.
    pub fn sample(&self) -> Option<Rational> {
        let mut found: Vec<(bool, Rational)> = self.window_cells.iter().map(|c| (is_interval(c), c.sample())).collect();
        if !self.period.is_zero() {
            let start = self.tail_start();
            let left = &(-&start) - &self.period;
            found.extend(self.right_tail.iter().map(|c| (is_interval(c), &start + &c.sample())));
            found.extend(self.left_tail.iter().map(|c| (is_interval(c), &left + &c.sample())));
        }
        // intervals first, then the value nearest zero with the least denominator
        found.into_iter().min_by_key(|(i, r)| (!*i, r.abs(), r.denom())).map(|(_, r)| r)
    }
}

fn is_interval(p: &Piece) -> bool {
    matches!(p, Piece::Interval { .. })
}

enum Item {
    Point(Rational),
    Gap(Option<Rational>, Option<Rational>),
}

fn truth(f: &Fm, x: &Var, at: &Rational) -> bool {
    f.eval(&|w: &Var| (w == x).then(|| at.clone())).expect("one free variable")
}

/// Merges the truth of `f` on the points `pts` and the gaps between them
/// into maximal open intervals and remaining points. With `unbounded`, the
/// outer gaps to `±∞` are included; otherwise only `[pts₀, pts_last)` is
/// described when `half_open`, or the closed range.
fn pieces(f: &Fm, x: &Var, pts: &[Rational], unbounded: bool, half_open: bool) -> Vec<Piece> {
    let mut items = Vec::new();
    let one = Rational::one();
    if unbounded {
        items.push((Item::Gap(None, pts.first().cloned()), truth(f, x, &(&pts[0] - &one))));
    }
    for (i, p) in pts.iter().enumerate() {
        let last = i + 1 == pts.len();
        if !(last && half_open) {
            items.push((Item::Point(p.clone()), truth(f, x, p)));
        }
        if let Some(q) = pts.get(i + 1) {
            let mid = (p + q) / Rational::from_int(2);
            items.push((Item::Gap(Some(p.clone()), Some(q.clone())), truth(f, x, &mid)));
        } else if unbounded {
            items.push((Item::Gap(Some(p.clone()), None), truth(f, x, &(p + &one))));
        }
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < items.len() {
        match &items[i] {
            (Item::Gap(lo, hi), true) => {
                let mut hi = hi.clone();
                let mut j = i + 1;
                while j + 1 < items.len() && items[j].1 && items[j + 1].1 {
                    match &items[j + 1].0 {
                        Item::Gap(_, h) => hi = h.clone(),
                        Item::Point(_) => unreachable!("points and gaps alternate"),
                    }
                    j += 2;
                }
                out.push(Piece::Interval { lo: lo.clone(), hi });
                i = j;
            }
            (Item::Point(p), true) => {
                out.push(Piece::Point { at: p.clone() });
                i += 1;
            }
            _ => i += 1,
        }
    }
    out
}

/// Normal form of a quantifier-free formula in `x` alone.
pub fn normal_form_fm(f: &Fm, x: &Var) -> Result<OneVarNormalForm> {
    if let Some(v) = f.free_vars().into_iter().find(|v| v != x) {
        return Err(Error::Unsupported(format!("symbol `{v}` has no rational value")));
    }
    let f = crate::topology::qf(f)?;
    let mut atoms = Vec::new();
    f.collect_atoms(&mut atoms);
    let periodic = atoms.iter().any(|c| c.lin.in_floor(x));
    let (period, bound) = period_and_bound(&f, x);
    let core = bound.ceil() + Rational::one();
    if !periodic {
        let pts: Vec<Rational> =
            breakpoints(&f, x, [-core.clone(), core].into_iter().collect()).into_iter().collect();
        return Ok(OneVarNormalForm {
            period: Rational::zero(),
            core_bound: Rational::zero(),
            window_cells: pieces(&f, x, &pts, true, false),
            left_tail: vec![],
            right_tail: vec![],
        });
    }
    let mut nf = OneVarNormalForm {
        period: period.clone(),
        core_bound: core.clone(),
        window_cells: vec![],
        left_tail: vec![],
        right_tail: vec![],
    };
    let start = nf.tail_start();
    let end = &start + &period;
    let ends: BTreeSet<Rational> =
        [-end.clone(), -start.clone(), -core.clone(), core.clone(), start.clone(), end.clone()].into_iter().collect();
    let all: Vec<Rational> = breakpoints(&f, x, ends).into_iter().collect();
    let slice = |lo: &Rational, hi: &Rational| -> Vec<Rational> {
        all.iter().filter(|p| *p >= lo && *p <= hi).cloned().collect()
    };
    nf.window_cells = pieces(&f, x, &slice(&-core.clone(), &core), false, false);
    let shifted = |lo: &Rational| {
        let g = f.subst(x, &Lin::var(x).add_const(lo));
        let pts: Vec<Rational> = slice(lo, &(lo + &period)).iter().map(|p| p - lo).collect();
        pieces(&g, x, &pts, false, true)
    };
    nf.right_tail = shifted(&start);
    nf.left_tail = shifted(&-end);
    Ok(nf)
}

/// Normal form of a one-variable set whose parameters, if any, have been
/// instantiated.
pub fn one_var_normal_form(s: &DefinableSet) -> Result<OneVarNormalForm> {
    if s.vars.len() != 1 {
        return Err(Error::Usage(format!("expected one variable, got {}", s.vars.len())));
    }
    normal_form_fm(&s.fm(), &s.vars[0])
}

/// A rational point of a quantifier-free `f` over `vars`, chosen one
/// coordinate at a time. Sets with interior yield a point of the interior
/// when `f` is open.
pub fn sample_point(f: &Fm, vars: &[Var]) -> Result<Option<Vec<Rational>>> {
    let mut g = crate::topology::qf(f)?;
    let mut out = Vec::new();
    for (i, x) in vars.iter().enumerate() {
        let p = simplify(&super::exists_fm(&vars[i + 1..], &g)?);
        let Some(v) = normal_form_fm(&p, x)?.sample() else { return Ok(None) };
        g = simplify(&g.subst(x, &Lin::constant(v.clone())));
        out.push(v);
    }
    Ok(Some(out))
}
