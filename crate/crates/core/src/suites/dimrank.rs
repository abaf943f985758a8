//! Dimension rank: synthesized chains over a corpus, and certified random
//! links `Y ⊆ S` whose dimension must drop.

use rand::Rng;

use crate::dimension::dim;
use crate::dimrank::{check_chain_detailed, dimension_rank, DimRankChain};
use crate::fm::{CRel, Fm};
use crate::gen::{var_names, Gen};
use crate::linear::Lin;
use crate::syntax::{DefinableSet, Formula};

use super::{Recorder, SuiteReport};

pub fn run(seed: u64, corpus: &[DefinableSet], pairs: usize) -> SuiteReport {
    let mut rec = Recorder::new("dimrank", seed);
    for s in corpus {
        rec.case();
        chain_case(&mut rec, s);
    }
    let mut g = Gen::new(seed);
    let all = var_names(&["x", "y"]);
    let mut certified = 0;
    let mut i = 0;
    while certified < pairs && i < 20 * pairs.max(1) {
        i += 1;
        let vars = &all[..1 + i % 2];
        let s = g.qf(vars);
        let thin = thin_closed(&mut g, vars);
        let y = Formula::And(vec![s.clone(), thin]);
        let set = |f: &Formula| DefinableSet::new(f.clone(), vars.to_vec(), Default::default()).expect("generated names");
        let chain = DimRankChain { sets: vec![set(&s), set(&y)] };
        let inputs = || format!("{s} > {y}");
        let before = rec.skipped();
        let Some(verdict) = rec.check(&inputs, "chain check decides", check_chain_detailed(&chain)) else { continue };
        if verdict.is_err() {
            continue;
        }
        rec.case();
        let ds = rec.check(&inputs, "dim computes", dim(&chain.sets[0]));
        let dy = rec.check(&inputs, "dim computes", dim(&chain.sets[1]));
        if rec.skipped() > before {
            rec.uncount();
            continue;
        }
        certified += 1;
        if let (Some(ds), Some(dy)) = (ds, dy) {
            if dy >= ds {
                rec.fail(inputs(), "a certified link drops the dimension", format!("{dy} >= {ds}"));
            }
        }
    }
    if certified < pairs {
        rec.fail(format!("{pairs} pairs wanted"), "enough random links certify", format!("{certified} certified"));
    }
    rec.finish()
}

fn chain_case(rec: &mut Recorder, s: &DefinableSet) {
    let inputs = || format!("{} over {:?}", s.formula, s.vars);
    let Some(d) = rec.check(&inputs, "dim computes", dim(s)) else { return };
    let Some((rank, chain)) = rec.check(&inputs, "rank computes", dimension_rank(s)) else { return };
    if rank != d {
        rec.fail(inputs(), "rank equals dim", format!("{rank} vs {d}"));
    }
    let Some(chain) = chain else { return };
    if Some(chain.len()) != d.finite() {
        rec.fail(inputs(), "chain length equals dim", format!("{} vs {d}", chain.len()));
    }
    if chain.sets[0].formula != s.formula {
        rec.fail(inputs(), "chain starts at the set", chain.sets[0].formula.to_string());
    }
    if let Some(Err((i, fault))) = rec.check(&inputs, "chain check decides", check_chain_detailed(&chain)) {
        rec.fail(inputs(), "synthesized chain certifies", format!("link {i}: {fault:?}"));
    }
}

/// A closed set without interior: a hyperplane or a lattice of them.
fn thin_closed(g: &mut Gen, vars: &[crate::syntax::Var]) -> Formula {
    let lin = Lin::from_term(&g.linear(vars));
    let f = if g.rng.gen_bool(0.5) { Fm::atom(lin, CRel::Eq) } else { Fm::int(&lin) };
    f.to_formula()
}
