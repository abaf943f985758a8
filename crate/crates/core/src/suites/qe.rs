//! Soundness of quantifier elimination on random formulas.
//!
//! The eliminated form is compared with the original on the grid
//! `[−4, 4]ⁿ` with step 1/8 and at random rational points. On the grid the
//! original is evaluated slice by slice: the first coordinate is fixed, the
//! resulting instance is eliminated separately, and the two quantifier-free
//! forms are compared on the remaining coordinates. Random points go through
//! closed-instance decision.

use rand::Rng;

use crate::compiled::Compiled;
use crate::fm::Fm;
use crate::gen::{var_names, Gen};
use crate::qe::{eliminate_fm, evaluate_at, instantiate};
use crate::rational::Rational;
use crate::syntax::{DefinableSet, Valuation, Var};

use super::{Recorder, SuiteReport};

const GRID: i64 = 32;
const DEN: i64 = 8;

pub struct Options {
    pub random_points: usize,
    pub max_arity: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { random_points: 100, max_arity: 3 }
    }
}

pub fn run(seed: u64, cases: usize) -> SuiteReport {
    run_with(seed, cases, &Options::default())
}

/// Checks `cases` formulas. Formulas abandoned at the resource limit are
/// replaced by fresh draws, up to `cases` extra draws in total.
pub fn run_with(seed: u64, cases: usize, opts: &Options) -> SuiteReport {
    let mut rec = Recorder::new("qe", seed);
    let mut g = Gen::new(seed);
    let free = var_names(&["x", "y", "z"]);
    let bound = var_names(&["u", "w"]);
    let mut i = 0;
    while rec.report.cases < cases && i < 2 * cases {
        rec.case();
        let n = 1 + i % opts.max_arity.clamp(1, 3);
        let f = g.quantified(&free[..n], &bound, 2);
        let s = DefinableSet::new(f, free[..n].to_vec(), Default::default()).expect("generated names");
        let points: Vec<Valuation> = (0..opts.random_points)
            .map(|_| {
                s.vars
                    .iter()
                    .map(|x| {
                        let d = g.rng.gen_range(1..=16);
                        (x.clone(), Rational::new(g.rng.gen_range(-6 * d..=6 * d), d))
                    })
                    .collect()
            })
            .collect();
        let before = rec.skipped();
        check_formula(&mut rec, &s, &points);
        if rec.skipped() > before {
            rec.uncount();
        }
        i += 1;
    }
    rec.finish()
}

fn grid_nums(k: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-GRID..=GRID).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

fn show(s: &DefinableSet, nums: &[i64]) -> String {
    let pt: Vec<String> = nums.iter().map(|a| Rational::new(*a, DEN).to_string()).collect();
    format!("{} at ({})", s.formula, pt.join(", "))
}

fn check_formula(rec: &mut Recorder, s: &DefinableSet, points: &[Valuation]) {
    let orig = s.fm();
    let inputs = || s.formula.to_string();
    let Some(e) = rec.check(&inputs, "eliminate succeeds", eliminate_fm(&orig)) else { return };
    if !e.is_qf() {
        rec.fail(inputs(), "eliminated form is quantifier-free", e.to_string());
        return;
    }
    let Some(ce) = Compiled::new(&e, &s.vars, DEN) else {
        rec.fail(inputs(), "eliminated form compiles", e.to_string());
        return;
    };
    let rest = grid_nums(s.vars.len() - 1);
    for a in -GRID..=GRID {
        let slice: Valuation = [(s.vars[0].clone(), Rational::new(a, DEN))].into_iter().collect();
        let Some(ga) = rec.check(&inputs, "slice eliminates", eliminate_fm(&instantiate(&orig, &slice))) else {
            return;
        };
        let others: Vec<Var> = s.vars[1..].to_vec();
        let Some(cg) = Compiled::new(&ga, &others, DEN) else {
            rec.fail(inputs(), "slice compiles", ga.to_string());
            return;
        };
        for r in &rest {
            let mut full = vec![a];
            full.extend(r);
            let (want, got) = match (cg.eval(r), ce.eval(&full)) {
                (Some(w), Some(g)) => (w, g),
                _ => {
                    let v: Valuation = s.vars.iter().cloned().zip(full.iter().map(|n| Rational::new(*n, DEN))).collect();
                    let want = slow_eval(&ga, &v);
                    let got = slow_eval(&e, &v);
                    (want, got)
                }
            };
            if want != got {
                rec.fail(show(s, &full), "eliminated form agrees on the grid", format!("original {want}, eliminated {got}"));
                return;
            }
        }
    }
    for v in points {
        let Some(want) = rec.check(&inputs, "closed instance decides", evaluate_at(s, v)) else { return };
        let got = slow_eval(&e, v);
        if want != got {
            let pt: Vec<String> = s.vars.iter().map(|x| v[x].to_string()).collect();
            rec.fail(
                format!("{} at ({})", s.formula, pt.join(", ")),
                "eliminated form agrees at random points",
                format!("original {want}, eliminated {got}"),
            );
            return;
        }
    }
}

fn slow_eval(f: &Fm, v: &Valuation) -> bool {
    f.eval(&|x| v.get(x).cloned()).expect("total valuation")
}
