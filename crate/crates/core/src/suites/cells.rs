//! Cell decompositions: quasi-special cells that partition the set, with
//! top signature size equal to the dimension.

use crate::cells::{decompose, verify_quasi_special};
use crate::dimension::dim;
use crate::fm::Fm;
use crate::qe::{satisfiable, valid};
use crate::syntax::DefinableSet;

use super::{Recorder, SuiteReport};

pub fn run(seed: u64, corpus: &[DefinableSet]) -> SuiteReport {
    let mut rec = Recorder::new("cells", seed);
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

fn one(rec: &mut Recorder, s: &DefinableSet) {
    let inputs = || format!("{} over {:?}", s.formula, s.vars);
    let Some(dec) = rec.check(&inputs, "decomposition computes", decompose(s)) else { return };
    let Some(d) = rec.check(&inputs, "dim computes", dim(s)) else { return };
    let top = dec.cells.iter().map(|c| c.signature.len()).max();
    if top != d.finite() {
        rec.fail(inputs(), "largest signature is the dimension", format!("{top:?} vs {d}"));
    }
    let mut real = Vec::new();
    for c in &dec.cells {
        match rec.check(&inputs, "cell check decides", verify_quasi_special(c, s)) {
            Some(Err(reason)) => rec.fail(inputs(), "every cell is quasi-special", format!("{:?}: {}", c.signature, reason.text())),
            None => return,
            Some(Ok(())) => {}
        }
        let Some(r) = rec.check(&inputs, "realization computes", c.realization()) else { return };
        real.push(r);
    }
    for i in 0..real.len() {
        for j in i + 1..real.len() {
            let both = Fm::and2(real[i].clone(), real[j].clone());
            if rec.check(&inputs, "disjointness decides", satisfiable(&both)) == Some(true) {
                rec.fail(inputs(), "cells are disjoint", format!("cells {i} and {j} meet"));
            }
        }
    }
    let cover = Fm::iff(Fm::or(real), s.fm());
    if rec.check(&inputs, "cover decides", valid(&cover)) == Some(false) {
        rec.fail(inputs(), "cells cover the set", "union differs");
    }
}
