//! Laws of the projection dimension on random sets of arity at most two.

use rand::Rng;

use crate::corpus::{parse_corpus, FIBERED};
use crate::dimension::{dim, DimensionValue};
use crate::fm::Fm;
use crate::gen::{var_names, Gen};
use crate::qe::{exists_fm, project, satisfiable, valid};
use crate::rational::Rational;
use crate::syntax::{Atom, DefinableSet, Formula, Rel, Term, Var};
use crate::topology::{closure_fm, frontier_fm, interior_fm, is_closed_fm, is_discrete_fm, FunctionGraph};
use crate::Result;

use super::{Recorder, SuiteReport};

fn as_set(f: Formula, vars: &[Var]) -> DefinableSet {
    DefinableSet::new(f, vars.to_vec(), Default::default()).expect("generated names")
}

fn fm_set(f: &Fm, vars: &[Var]) -> DefinableSet {
    as_set(f.to_formula(), vars)
}

fn d(f: &Fm, vars: &[Var]) -> Result<DimensionValue> {
    dim(&fm_set(f, vars))
}

fn plus(a: DimensionValue, b: DimensionValue) -> DimensionValue {
    match (a, b) {
        (DimensionValue::Finite(x), DimensionValue::Finite(y)) => DimensionValue::Finite(x + y),
        _ => DimensionValue::NegInf,
    }
}

/// Runs every law on `cases` counted inputs, plus the curated fibered sets.
/// Inputs skipped at the resource limit are redrawn, up to `cases` extra
/// draws per law.
pub fn run(seed: u64, cases: usize) -> SuiteReport {
    let mut rec = Recorder::new("dim-laws", seed);
    let mut g = Gen::new(seed);
    let all = var_names(&["x", "y"]);
    for law in 0..6 {
        let mut counted = 0;
        let mut i = 0;
        while counted < cases && i < 2 * cases {
            let vars = &all[..1 + i % 2];
            rec.case();
            let before = rec.skipped();
            match law {
                0 => zero_dimensional(&mut rec, &mut g, vars),
                1 => union(&mut rec, &mut g, vars),
                2 => image(&mut rec, &mut g, i % 2 == 0),
                3 => frontier_and_closure(&mut rec, &mut g, vars),
                4 => fibered_random(&mut rec, &mut g),
                _ => subsets(&mut rec, &mut g, vars),
            }
            if rec.skipped() > before {
                rec.uncount();
            } else {
                counted += 1;
            }
            i += 1;
        }
    }
    for s in parse_corpus(FIBERED).expect("builtin corpus") {
        rec.case();
        fibered_curated(&mut rec, &s);
    }
    rec.finish()
}

fn zero_dimensional(rec: &mut Recorder, g: &mut Gen, vars: &[Var]) {
    let f = Fm::from_formula(&g.qf(vars));
    let inputs = || f.to_string();
    let Some(nonempty) = rec.check(&inputs, "satisfiable decides", satisfiable(&f)) else { return };
    if !nonempty {
        return;
    }
    let Some(dv) = rec.check(&inputs, "dim computes", d(&f, vars)) else { return };
    let Some(discrete) = rec.check(&inputs, "discreteness decides", is_discrete_fm(&f, vars)) else { return };
    if (dv == DimensionValue::Finite(0)) != discrete {
        rec.fail(inputs(), "dimension zero iff discrete", format!("dim {dv}, discrete {discrete}"));
    }
    if dv == DimensionValue::Finite(0) {
        let Some(closed) = rec.check(&inputs, "closedness decides", is_closed_fm(&f, vars)) else { return };
        if !closed {
            rec.fail(inputs(), "dimension zero implies closed", "not closed");
        }
    }
}

fn union(rec: &mut Recorder, g: &mut Gen, vars: &[Var]) {
    let a = Fm::from_formula(&g.qf(vars));
    let b = Fm::from_formula(&g.qf(vars));
    let inputs = || format!("{a} | {b}");
    let both = Fm::or2(a.clone(), b.clone());
    let Some(da) = rec.check(&inputs, "dim computes", d(&a, vars)) else { return };
    let Some(db) = rec.check(&inputs, "dim computes", d(&b, vars)) else { return };
    let Some(du) = rec.check(&inputs, "dim computes", d(&both, vars)) else { return };
    if du != da.max(db) {
        rec.fail(inputs(), "dim of a union is the larger dim", format!("{du} vs {da}, {db}"));
    }
}

/// `y = a·x₁ (+ b·x₂) + c·floor(p·x₁ + q) + e` over the whole domain.
fn random_function(g: &mut Gen, two: bool) -> (Formula, Vec<Var>) {
    let vars = if two { var_names(&["x", "z", "y"]) } else { var_names(&["x", "y"]) };
    let k = vars.len() - 1;
    let x = &vars[..k];
    let inner = g.linear(&x[..1]);
    let lin = g.linear(x);
    let t = Term::sum(lin, Term::scale(g.coeff(), Term::floor(inner)));
    let graph = Formula::atom(Term::Var(vars[k].clone()), Rel::Eq, t);
    (graph, vars)
}

fn image(rec: &mut Recorder, g: &mut Gen, two: bool) {
    let (graph, vars) = random_function(g, two);
    let k = vars.len() - 1;
    let dom = &vars[..k];
    let s = Fm::from_formula(&g.qf(dom));
    let inputs = || format!("graph {graph}, set {s}");
    let gs = as_set(graph.clone(), &vars);
    let domain = as_set(Formula::True, dom);
    let Some(f) = rec.check(&inputs, "random function certifies", FunctionGraph::new(gs, domain)) else { return };
    let restricted = Fm::and2(f.graph.fm(), s.clone());
    let Some(img) = rec.check(&inputs, "image projects", project(&fm_set(&restricted, &vars), &[k])) else {
        return;
    };
    let Some(ds) = rec.check(&inputs, "dim computes", d(&s, dom)) else { return };
    let Some(di) = rec.check(&inputs, "dim computes", dim(&img)) else { return };
    if di > ds {
        rec.fail(inputs(), "dim of an image is at most dim of the set", format!("{di} > {ds}"));
    }
}

fn frontier_and_closure(rec: &mut Recorder, g: &mut Gen, vars: &[Var]) {
    let f = Fm::from_formula(&g.qf(vars));
    let inputs = || f.to_string();
    let Some(ds) = rec.check(&inputs, "dim computes", d(&f, vars)) else { return };
    if ds == DimensionValue::NegInf {
        return;
    }
    let Some(fr) = rec.check(&inputs, "frontier computes", frontier_fm(&f, vars)) else { return };
    let Some(cl) = rec.check(&inputs, "closure computes", closure_fm(&f, vars)) else { return };
    let Some(dfr) = rec.check(&inputs, "dim computes", d(&fr, vars)) else { return };
    let Some(dcl) = rec.check(&inputs, "dim computes", d(&cl, vars)) else { return };
    if dfr >= ds {
        rec.fail(inputs(), "frontier has smaller dim", format!("frontier {dfr}, set {ds}"));
    }
    if dcl != ds {
        rec.fail(inputs(), "closure has the same dim", format!("closure {dcl}, set {ds}"));
    }
}

/// A set over a random base in `x` with fibers of a known dimension.
fn fibered_random(rec: &mut Recorder, g: &mut Gen) {
    let v = var_names(&["x", "y"]);
    let base = g.qf(&v[..1]);
    let lin = g.linear(&v[..1]);
    let y = Term::Var(v[1].clone());
    let off = |t: Term| Term::sum(y.clone(), Term::scale(-Rational::one(), t));
    let (fiber, fiber_dim) = match g.rng.gen_range(0..4) {
        0 => (Formula::atom(y.clone(), Rel::Eq, lin), Some(DimensionValue::Finite(0))),
        1 => (Formula::Atom(Atom::int(off(lin))), Some(DimensionValue::Finite(0))),
        2 => {
            let w = Term::constant(Rational::new(g.rng.gen_range(1..=8), 4));
            let lo = Formula::atom(lin.clone(), Rel::Lt, y.clone());
            let hi = Formula::atom(y.clone(), Rel::Lt, Term::sum(lin, w));
            (Formula::And(vec![lo, hi]), Some(DimensionValue::Finite(1)))
        }
        _ => {
            (g.qf(&v[1..]), None)
        }
    };
    let s = Formula::And(vec![base.clone(), fiber.clone()]);
    let inputs = || s.to_string();
    let Some(db) = rec.check(&inputs, "dim computes", dim(&as_set(base.clone(), &v[..1]))) else { return };
    let fd = match fiber_dim {
        Some(k) => k,
        None => {
            let Some(k) = rec.check(&inputs, "dim computes", dim(&as_set(fiber.clone(), &v[1..]))) else { return };
            k
        }
    };
    let Some(ds) = rec.check(&inputs, "dim computes", dim(&as_set(s.clone(), &v))) else { return };
    let expected = plus(db, fd);
    if ds != expected {
        rec.fail(inputs(), "dim of a fibered set is base plus fiber", format!("{ds}, expected {expected}"));
    }
}

/// Curated sets with equidimensional fibers over the first coordinate.
fn fibered_curated(rec: &mut Recorder, s: &DefinableSet) {
    let inputs = || s.formula.to_string();
    let f = s.fm();
    let (x, y) = (&s.vars[..1], &s.vars[1..]);
    let run = || -> Result<Option<(DimensionValue, DimensionValue, DimensionValue)>> {
        let base = exists_fm(y, &f)?;
        let thick = exists_fm(y, &interior_fm(&f, y)?)?;
        let fiber = if valid(&Fm::iff(thick.clone(), base.clone()))? {
            DimensionValue::Finite(1)
        } else if !satisfiable(&thick)? {
            DimensionValue::Finite(0)
        } else {
            return Ok(None);
        };
        Ok(Some((dim(s)?, d(&base, x)?, fiber)))
    };
    let Some(r) = rec.check(&inputs, "fiber dimensions compute", run()) else { return };
    let Some((ds, db, fd)) = r else {
        rec.fail(inputs(), "curated fibered set is equidimensional", "fibers of mixed dimension");
        return;
    };
    if ds != plus(db, fd) {
        rec.fail(inputs(), "dim of a fibered set is base plus fiber", format!("{ds} vs {db} + {fd}"));
    }
}

fn subsets(rec: &mut Recorder, g: &mut Gen, vars: &[Var]) {
    let a = Fm::from_formula(&g.qf(vars));
    let b = Fm::from_formula(&g.qf(vars));
    let inside = Fm::and2(a.clone(), b);
    let inputs = || format!("{inside} within {a}");
    let Some(di) = rec.check(&inputs, "dim computes", d(&inside, vars)) else { return };
    let Some(da) = rec.check(&inputs, "dim computes", d(&a, vars)) else { return };
    if di > da {
        rec.fail(inputs(), "dim is monotone under inclusion", format!("{di} > {da}"));
    }
}
