//! One-variable sets: normal forms realize the set, and a set without
//! interior is closed and discrete.

use crate::fm::Fm;
use crate::gen::{var_names, Gen};
use crate::qe::{exists_fm, normal_form_fm, valid, Piece};
use crate::topology::{has_interior_fm, is_closed_fm, is_discrete_fm};

use super::{Recorder, SuiteReport};

/// Half the sets are quantifier-free in `x`; the other half are shadows
/// `∃y φ(x, y)` of two-variable sets.
pub fn run(seed: u64, cases: usize) -> SuiteReport {
    let mut rec = Recorder::new("shadow", seed);
    let mut g = Gen::new(seed);
    let v = var_names(&["x", "y"]);
    let mut i = 0;
    while rec.report.cases < cases && i < 2 * cases {
        i += 1;
        rec.case();
        let raw = Fm::from_formula(&g.qf(if i % 2 == 0 { &v[..1] } else { &v }));
        let inputs = || format!("exists y . {raw}");
        let Some(f) = rec.check(&inputs, "projection eliminates", exists_fm(&v[1..], &raw)) else {
            rec.uncount();
            continue;
        };
        let before = rec.skipped();
        one(&mut rec, &f, &inputs);
        if rec.skipped() > before {
            rec.uncount();
        }
    }
    rec.finish()
}

fn one(rec: &mut Recorder, f: &Fm, inputs: &dyn Fn() -> String) {
    let x = &var_names(&["x"])[..];
    let Some(nf) = rec.check(inputs, "normal form computes", normal_form_fm(f, &x[0])) else { return };
    let Some(same) = rec.check(inputs, "equivalence decides", valid(&Fm::iff(nf.realization(&x[0]), f.clone()))) else {
        return;
    };
    if !same {
        rec.fail(inputs(), "normal form realizes the set", format!("{nf:?}"));
    }
    let Some(interior) = rec.check(inputs, "interior decides", has_interior_fm(f, x)) else { return };
    let pieces = nf.window_cells.iter().chain(&nf.left_tail).chain(&nf.right_tail);
    let intervals = pieces.filter(|p| matches!(p, Piece::Interval { .. })).count();
    if interior != (intervals > 0) {
        rec.fail(inputs(), "interior iff an interval piece", format!("interior {interior}, {intervals} intervals"));
    }
    if !interior {
        let Some(discrete) = rec.check(inputs, "discreteness decides", is_discrete_fm(f, x)) else { return };
        let Some(closed) = rec.check(inputs, "closedness decides", is_closed_fm(f, x)) else { return };
        if !discrete || !closed {
            rec.fail(inputs(), "no interior implies closed and discrete", format!("discrete {discrete}, closed {closed}"));
        }
    }
}
