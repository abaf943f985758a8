//! Generic points: a witness of rank `dim s` lies in `s`.

use crate::dimension::dim;
use crate::discl::{definable_set_rank, eval_qf_at, infinitesimal_rank};
use crate::qe::eliminate;
use crate::syntax::DefinableSet;

use super::{Recorder, SuiteReport};

pub fn run(seed: u64, corpus: &[DefinableSet]) -> SuiteReport {
    let mut rec = Recorder::new("rank", seed);
    for s in corpus {
        rec.case();
        let inputs = || format!("{} over {:?}", s.formula, s.vars);
        let Some(d) = rec.check(&inputs, "dim computes", dim(s)) else { continue };
        let Some((rank, w)) = rec.check(&inputs, "rank computes", definable_set_rank(s)) else { continue };
        if rank != d {
            rec.fail(inputs(), "rank equals dim", format!("{rank} vs {d}"));
        }
        let Some(w) = w else {
            if d.finite().is_some() {
                rec.fail(inputs(), "nonempty sets get a generic point", "none");
            }
            continue;
        };
        let Some(q) = rec.check(&inputs, "elimination", eliminate(s)) else { continue };
        let point: Vec<String> = w.point.iter().map(|p| p.to_string()).collect();
        if rec.check(&inputs, "evaluation", eval_qf_at(&q.fm(), &s.vars, &w.point)) == Some(false) {
            rec.fail(inputs(), "generic point lies in the set", point.join(", "));
        }
        let r = infinitesimal_rank(&w.point);
        if Some(r) != d.finite() || w.claimed_rank != r {
            rec.fail(inputs(), "generic point has rank dim", format!("rank {r}, claimed {}, dim {d}", w.claimed_rank));
        }
    }
    rec.finish()
}
