//! Pregeometry axioms and rank laws, for finite matroids and for the
//! discrete closure on symbolic reals.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discl::{discl_member, discl_witness, DisclOracle, SymbolicReal};
use crate::pregeometry::{
    basis, brute_force_rank, check_extensive, check_finite_character, check_idempotent, exchange_check,
    random_triples, rank_over, ClosureOracle, FiniteMatroidOracle,
};
use crate::qe::valid;
use crate::rational::Rational;
use crate::syntax::Var;
use crate::topology::{is_closed_fm, is_discrete_fm};
use crate::Error;

use super::{Recorder, SuiteReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    Matroid,
    Discl,
}

impl std::str::FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "matroid" => Ok(OracleKind::Matroid),
            "discl" => Ok(OracleKind::Discl),
            _ => Err(Error::Usage(format!("unknown oracle `{s}` (expected matroid or discl)"))),
        }
    }
}

pub fn run(seed: u64, cases: usize, oracle: OracleKind) -> SuiteReport {
    match oracle {
        OracleKind::Matroid => matroids(seed, cases),
        OracleKind::Discl => discl(seed, cases),
    }
}

fn subset<T: Clone>(rng: &mut ChaCha8Rng, ground: &[T], max: usize) -> Vec<T> {
    let k = rng.gen_range(0..=ground.len().min(max));
    ground.choose_multiple(rng, k).cloned().collect()
}

/// Rank of bit vectors by elimination, independent of the oracle.
fn gf2_rank(mut rows: Vec<u32>) -> usize {
    let mut rank = 0;
    for bit in (0..32).rev() {
        let Some(i) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else { continue };
        rows.swap(rank, i);
        for j in 0..rows.len() {
            if j != rank && rows[j] >> bit & 1 == 1 {
                rows[j] ^= rows[rank];
            }
        }
        rank += 1;
    }
    rank
}

fn matroids(seed: u64, cases: usize) -> SuiteReport {
    let mut rec = Recorder::new("pregeometry-matroid", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..cases {
        rec.case();
        let size = rng.gen_range(1..=6);
        let o = if i % 5 == 4 {
            FiniteMatroidOracle::uniform(rng.gen_range(0..=size), size)
        } else {
            let dim = rng.gen_range(1..=4);
            FiniteMatroidOracle::random(&mut rng, size, dim)
        };
        matroid_case(&mut rec, &mut rng, &o);
    }
    rec.finish()
}

fn matroid_case(rec: &mut Recorder, rng: &mut ChaCha8Rng, o: &FiniteMatroidOracle) {
    let ground = o.ground();
    let inputs = || o.describe();
    let a = subset(rng, &ground, 6);
    let b = subset(rng, &ground, 2);
    let Some(greedy) = rec.check(&inputs, "greedy rank computes", rank_over(o, &a, &b)) else { return };
    let Some(brute) = rec.check(&inputs, "exhaustive rank computes", brute_force_rank(o, &a, &b)) else { return };
    if greedy != brute {
        rec.fail(format!("{} A={a:?} B={b:?}", o.describe()), "greedy rank is the largest independent size", format!("{greedy} vs {brute}"));
    }
    if let FiniteMatroidOracle::Binary { vectors } = o {
        let row = |s: &[usize]| s.iter().map(|&i| vectors[i]).collect::<Vec<_>>();
        let ab: Vec<usize> = a.iter().chain(&b).cloned().collect();
        let expected = gf2_rank(row(&ab)) - gf2_rank(row(&b));
        if greedy != expected {
            rec.fail(format!("{} A={a:?} B={b:?}", o.describe()), "rank is the linear rank", format!("{greedy} vs {expected}"));
        }
    }
    let mut shuffled = a.clone();
    shuffled.shuffle(rng);
    let Some(again) = rec.check(&inputs, "greedy rank computes", rank_over(o, &shuffled, &b)) else { return };
    if again != greedy {
        rec.fail(format!("{} A={a:?} order {shuffled:?}", o.describe()), "rank does not depend on order", format!("{greedy} vs {again}"));
    }
    let mut bigger = a.clone();
    bigger.extend(subset(rng, &ground, 3));
    let Some(big) = rec.check(&inputs, "greedy rank computes", rank_over(o, &bigger, &b)) else { return };
    if big < greedy {
        rec.fail(format!("{} A={a:?} A'={bigger:?}", o.describe()), "rank is monotone", format!("{big} < {greedy}"));
    }
    let Some(k) = rec.check(&inputs, "basis computes", basis(o, &a, &b)) else { return };
    let mut kb = k.clone();
    kb.extend(b.iter().cloned());
    for x in &a {
        if rec.check(&inputs, "membership decides", o.member(x, &kb)) == Some(false) {
            rec.fail(format!("{} A={a:?} basis {k:?}", o.describe()), "a basis spans its set", format!("{x} outside"));
        }
    }
    for extra in [ground.clone(), a.clone()] {
        if let Some(Some(v)) = rec.check(&inputs, "extensivity probes", check_extensive(o, &extra)) {
            rec.fail(inputs(), "closure is extensive", v);
        }
    }
    let c = *ground.choose(rng).expect("nonempty ground");
    let d = *ground.choose(rng).expect("nonempty ground");
    if let Some(Some(v)) = rec.check(&inputs, "idempotence probes", check_idempotent(o, &a, &c, &d)) {
        rec.fail(inputs(), "closure is idempotent", v);
    }
    let small = subset(rng, &ground, 4);
    if let Some(Some(v)) = rec.check(&inputs, "finite character probes", check_finite_character(o, &c, &small)) {
        rec.fail(inputs(), "closure has finite character", v);
    }
    let triples = random_triples(rng, &ground, 20);
    if let Some(r) = rec.check(&inputs, "exchange probes", exchange_check(o, &triples)) {
        for v in r.violations {
            rec.fail(inputs(), "exchange", v);
        }
    }
}

fn symbolic(rng: &mut ChaCha8Rng, symbols: &[Var], over: &[Var]) -> SymbolicReal {
    let mut r = SymbolicReal::rational(Rational::new(rng.gen_range(-6..=6), rng.gen_range(1..=4)));
    for v in over.iter().filter(|v| symbols.contains(v)) {
        if rng.gen_bool(0.6) {
            let c = Rational::new(rng.gen_range(-3..=3), rng.gen_range(1..=3));
            r = r.add(&SymbolicReal::symbol(v).scale(&c));
        }
    }
    r
}

/// A rational combination of `a` plus a rational.
fn combination(rng: &mut ChaCha8Rng, a: &[SymbolicReal]) -> SymbolicReal {
    let mut r = SymbolicReal::rational(Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=3)));
    for x in a {
        r = r.add(&x.scale(&Rational::new(rng.gen_range(-2..=2), rng.gen_range(1..=2))));
    }
    r
}

fn discl(seed: u64, cases: usize) -> SuiteReport {
    let mut rec = Recorder::new("pregeometry-discl", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<Var> = (1..=4).map(|i| Var::new(&format!("a{i}"))).collect();
    for _ in 0..cases {
        rec.case();
        let n = rng.gen_range(1..=4);
        let symbols = &all[..n];
        let before = rec.skipped();
        discl_case(&mut rec, &mut rng, symbols);
        if rec.skipped() > before {
            rec.uncount();
        }
    }
    rec.finish()
}

fn show(xs: &[SymbolicReal]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn discl_case(rec: &mut Recorder, rng: &mut ChaCha8Rng, symbols: &[Var]) {
    let o = DisclOracle::new(symbols.to_vec());
    let k = rng.gen_range(0..=symbols.len().min(3));
    let a: Vec<SymbolicReal> = (0..k).map(|_| symbolic(rng, symbols, symbols)).collect();
    let b = symbolic(rng, symbols, symbols);
    let inputs = || format!("A={} b={b}", show(&a));
    if let Some(Some(v)) = rec.check(&inputs, "extensivity probes", check_extensive(&o, &a)) {
        rec.fail(inputs(), "closure is extensive", v);
    }
    if let Some(Some(v)) = rec.check(&inputs, "finite character probes", check_finite_character(&o, &b, &a)) {
        rec.fail(inputs(), "closure has finite character", v);
    }
    let c = combination(rng, &a);
    let d = {
        let mut with = a.clone();
        with.push(c.clone());
        combination(rng, &with)
    };
    if let Some(Some(v)) = rec.check(&inputs, "idempotence probes", check_idempotent(&o, &a, &c, &d)) {
        rec.fail(format!("{} c={c} d={d}", inputs()), "closure is idempotent", v);
    }
    match rec.check(&inputs, "membership decides", o.member(&d, &a)) {
        Some(true) => {}
        Some(false) => rec.fail(format!("{} d={d}", inputs()), "closure is idempotent", "combination outside"),
        None => return,
    }
    // a = q·b + (element of cl A) lies in cl(A + b) and, when b does not,
    // outside cl(A)
    let Some(b_in) = rec.check(&inputs, "membership decides", o.member(&b, &a)) else { return };
    if !b_in {
        let q = Rational::new(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=3));
        let x = b.scale(&q).add(&combination(rng, &a));
        if let Some(r) = rec.check(&inputs, "exchange probes", exchange_check(&o, &[(x.clone(), b.clone(), a.clone())])) {
            if r.tested != 1 {
                rec.fail(format!("{} a={x}", inputs()), "constructed exchange triple meets the hypothesis", "skipped");
            }
            for v in r.violations {
                rec.fail(inputs(), "exchange", v);
            }
        }
    }
    witness(rec, rng, symbols);
}

/// Members get certified witnesses; non-members are refused.
fn witness(rec: &mut Recorder, rng: &mut ChaCha8Rng, symbols: &[Var]) {
    let over = subset(rng, symbols, symbols.len());
    let b = symbolic(rng, symbols, symbols);
    let inputs = || format!("b={b} over {over:?}");
    let Some(member) = rec.check(&inputs, "membership decides", discl_member(&b, symbols, &over)) else { return };
    match discl_witness(&b, symbols, &over) {
        Err(Error::Precondition(_)) if !member => {}
        r @ Err(Error::ResourceLimit(_)) => {
            rec.check(&inputs, "witness builds", r);
        }
        Err(e) => rec.fail(inputs(), "witness matches membership", format!("member {member}, error {e}")),
        Ok(_) if !member => rec.fail(inputs(), "witness matches membership", "witness for a non-member"),
        Ok(w) => {
            let x = &w.vars[..];
            let f = w.fm();
            let Some(discrete) = rec.check(&inputs, "discreteness decides", is_discrete_fm(&f, x)) else { return };
            let Some(closed) = rec.check(&inputs, "closedness decides", is_closed_fm(&f, x)) else { return };
            let Some(holds) = rec.check(&inputs, "membership of b decides", valid(&f.subst(&x[0], &b.to_lin()))) else {
                return;
            };
            let params_ok = w.params.iter().all(|p| over.contains(p));
            if !(discrete && closed && holds && params_ok) {
                rec.fail(
                    format!("{} witness {}", inputs(), w.formula),
                    "witness is discrete, closed, over the given symbols and contains b",
                    format!("discrete {discrete}, closed {closed}, contains {holds}, params {params_ok}"),
                );
            }
        }
    }
}
