//! Monotone partitions of functions `M → M`, rechecked by QE and by
//! probing function values beside sample points of each part.

use crate::fm::Fm;
use crate::qe::{sample_point, satisfiable, valid};
use crate::rational::Rational;
use crate::syntax::{DefinableSet, Formula};
use crate::topology::{is_closed_fm, is_discrete_fm, is_open_fm, monotone_partition, FunctionGraph};
use crate::Result;

use super::{Recorder, SuiteReport};

/// Probe offset; far below the spacing of breakpoints in curated inputs.
const PROBE: i64 = 1 << 20;

pub fn run(seed: u64, corpus: &[DefinableSet]) -> SuiteReport {
    let mut rec = Recorder::new("monotone", seed);
    for s in corpus {
        rec.case();
        let before = rec.skipped();
        one(&mut rec, s);
        if rec.skipped() > before {
            rec.uncount();
        }
    }
    rec.finish()
}

fn value_at(g: &Fm, vars: &[crate::syntax::Var], a: &Rational) -> Result<Option<Rational>> {
    let at = g.subst(&vars[0], &crate::linear::Lin::constant(a.clone()));
    Ok(sample_point(&at, &vars[1..])?.map(|v| v[0].clone()))
}

fn one(rec: &mut Recorder, s: &DefinableSet) {
    let inputs = || s.formula.to_string();
    let domain = DefinableSet::new(Formula::True, s.vars[..1].to_vec(), s.params.clone()).expect("same names");
    let Some(f) = rec.check(&inputs, "graph certifies as a function", FunctionGraph::new(s.clone(), domain)) else { return };
    let Some(p) = rec.check(&inputs, "partition computes", monotone_partition(&f)) else { return };
    let xs = &s.vars[..1];
    let parts = [p.x_d.fm(), p.x_c.fm(), p.x_plus.fm(), p.x_minus.fm()];
    for i in 0..4 {
        for j in i + 1..4 {
            if rec.check(&inputs, "disjointness decides", satisfiable(&Fm::and2(parts[i].clone(), parts[j].clone()))) == Some(true) {
                rec.fail(inputs(), "parts are disjoint", format!("parts {i} and {j} meet"));
            }
        }
    }
    if rec.check(&inputs, "cover decides", valid(&Fm::or(parts.to_vec()))) == Some(false) {
        rec.fail(inputs(), "parts cover the line", "gap");
    }
    for part in &parts[1..] {
        if rec.check(&inputs, "openness decides", is_open_fm(part, xs)) == Some(false) {
            rec.fail(inputs(), "X_c, X_+, X_- are open", part.to_string());
        }
    }
    let discrete = rec.check(&inputs, "discreteness decides", is_discrete_fm(&parts[0], xs));
    let closed = rec.check(&inputs, "closedness decides", is_closed_fm(&parts[0], xs));
    if discrete == Some(false) || closed == Some(false) {
        rec.fail(inputs(), "X_d is closed and discrete", parts[0].to_string());
    }
    let g = f.graph.fm();
    let h = Rational::new(1, PROBE);
    for (k, part) in parts.iter().enumerate().skip(1) {
        let Some(Some(a)) = rec.check(&inputs, "sampling", sample_point(part, xs)) else { continue };
        let a = a[0].clone();
        let probe = || -> Result<Option<[Rational; 3]>> {
            let l = value_at(&g, &s.vars, &(&a - &h))?;
            let m = value_at(&g, &s.vars, &a)?;
            let r = value_at(&g, &s.vars, &(&a + &h))?;
            Ok(l.zip(m).zip(r).map(|((l, m), r)| [l, m, r]))
        };
        let Some(Some([l, m, r])) = rec.check(&inputs, "evaluation", probe()) else {
            rec.fail(inputs(), "function is total", format!("no value near {a}"));
            continue;
        };
        let ok = match k {
            1 => l == m && m == r,
            2 => l < m && m < r,
            _ => l > m && m > r,
        };
        if !ok {
            let name = ["X_d", "X_c", "X_+", "X_-"][k];
            rec.fail(inputs(), "sample behaves as its part says", format!("{name} at {a}: {l}, {m}, {r}"));
        }
    }
}
