//! Worked examples for every module. Values that follow from a computation
//! are checked against an independent oracle: exact evaluation on the grid
//! `[-4, 4]^n` with step 1/8, or exhaustive search.

use lodim::cells::{decompose, verify_quasi_special, Cell, Reason};
use lodim::dimension::{dim, DimensionValue};
use lodim::dimrank::{check_chain, dimension_rank, synthesize_chain, DimRankChain};
use lodim::discl::{
    definable_set_rank, discl_member, discl_witness, eval_qf_at, make_generic, ns_compare, ns_floor,
    NonstandardNumber, SymbolicReal,
};
use lodim::fm::Fm;
use lodim::linear::Lin;
use lodim::pregeometry::{basis, brute_force_rank, exchange_check, rank_over, BrokenOracle, FiniteMatroidOracle};
use lodim::qe::{decide, eliminate, equivalent, evaluate_at, normalize, one_var_normal_form, project, Piece};
use lodim::topology::{
    classify_topology, closure_of, definable_section, frontier, interior, isolated_points, monotone_partition,
    FunctionGraph,
};
use lodim::{parse, parse_formula, DefinableSet, Rational, Var};
use std::cmp::Ordering;

fn set(text: &str, vars: &[&str]) -> DefinableSet {
    parse(text, vars, &[]).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Every point of `[-4, 4]^n` with step 1/8.
fn grid(n: usize) -> Vec<Vec<Rational>> {
    let axis: Vec<Rational> = (-32..=32).map(|i| q(i, 8)).collect();
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|p| axis.iter().map(move |a| [p.clone(), vec![a.clone()]].concat())).collect();
    }
    out
}

fn holds(s: &DefinableSet, p: &[Rational]) -> bool {
    let v = s.vars.iter().cloned().zip(p.iter().cloned()).collect();
    evaluate_at(s, &v).unwrap()
}

/// Agreement of two sets over the same variables on the whole grid.
fn agree_on_grid(a: &DefinableSet, b: &DefinableSet) {
    assert_eq!(a.vars, b.vars);
    for p in grid(a.vars.len()) {
        assert_eq!(holds(a, &p), holds(b, &p), "`{}` vs `{}` at {p:?}", a.formula, b.formula);
    }
}

fn same(a: &DefinableSet, text: &str) {
    let b = a.with_formula(parse_formula(text).unwrap());
    assert!(equivalent(&a.fm(), &b.fm()).unwrap(), "`{}` is not `{text}`", a.formula);
}

#[test]
fn parsing_and_evaluation() {
    let s = set("exists y . y = x + 1/2 and y > 0", &["x"]);
    assert!(!s.formula.is_quantifier_free());
    same(&eliminate(&s).unwrap(), "x > -1/2");
    let p = parse("x = alpha + 3/2", &["x"], &["alpha"]).unwrap();
    assert_eq!(p.params.len(), 1);
    let z = set("floor(x) = x", &["x"]);
    assert!(holds(&z, &[q(3, 1)]));
    assert!(!holds(&z, &[q(1, 2)]));
}

#[test]
fn normal_forms() {
    assert_eq!(normalize(&parse_formula("not (x < 1)").unwrap()), normalize(&parse_formula("x >= 1").unwrap()));
    let reduced = normalize(&parse_formula("2*x + 2 < 0").unwrap());
    assert_eq!(reduced, normalize(&parse_formula("x + 1 < 0").unwrap()));
    assert_eq!(reduced.to_string(), "x < -1");
}

#[test]
fn elimination() {
    same(&eliminate(&set("exists y . y = x + 1 and y > 0", &["x"])).unwrap(), "x > -1");
    let even = eliminate(&set("exists y . x = 2*y and int(y)", &["x"])).unwrap();
    agree_on_grid(&even, &set("int(x/2)", &["x"]));
    assert!(decide(&set("forall x . not int(x) or int(x + 1)", &[])).unwrap());
    assert!(!decide(&set("exists x . x < x", &[])).unwrap());
    let unbounded = set("forall x . exists y . y > x and int(y)", &[]);
    assert!(decide(&unbounded).unwrap());
    assert_eq!(eliminate(&unbounded).unwrap().formula.to_string(), "true");
}

#[test]
fn projections() {
    let g = set("y = floor(x)", &["x", "y"]);
    agree_on_grid(&project(&g, &[1]).unwrap(), &set("int(y)", &["y"]));
    same(&project(&g, &[0]).unwrap(), "true");
}

#[test]
fn one_variable_normal_forms() {
    let z = one_var_normal_form(&set("int(x)", &["x"])).unwrap();
    assert_eq!(z.period, Rational::one());
    for tail in [&z.left_tail, &z.right_tail] {
        assert_eq!(tail, &vec![Piece::Point { at: Rational::zero() }]);
    }
    assert!(z.window_cells.iter().all(|p| matches!(p, Piece::Point { .. })));
    let unit = one_var_normal_form(&set("0 < x and x < 1", &["x"])).unwrap();
    assert!(unit.period.is_zero());
    assert_eq!(unit.window_cells, vec![Piece::Interval { lo: Some(q(0, 1)), hi: Some(q(1, 1)) }]);
    let strip = set("x - floor(x) < 1/2", &["x"]);
    let nf = one_var_normal_form(&strip).unwrap();
    assert_eq!(nf.period, Rational::one());
    let expected = vec![Piece::Point { at: q(0, 1) }, Piece::Interval { lo: Some(q(0, 1)), hi: Some(q(1, 2)) }];
    assert_eq!(nf.right_tail, expected);
    assert_eq!(nf.left_tail, expected);
    let x = Var::new("x");
    let realized = strip.from_fm(&nf.realization(&x));
    for p in grid(1).into_iter().filter(|p| p[0].abs() <= q(2, 1)) {
        assert_eq!(holds(&realized, &p), holds(&strip, &p));
    }
}

#[test]
fn topology_examples() {
    same(&interior(&set("0 <= x and x <= 1", &["x"])).unwrap(), "0 < x and x < 1");
    same(&interior(&set("0 <= x and x <= 1 or x = 2", &["x"])).unwrap(), "0 < x and x < 1");
    same(&closure_of(&set("0 < x and x < 1", &["x"])).unwrap(), "0 <= x and x <= 1");
    let segment = closure_of(&set("0 < x and x < 1 and y = 0", &["x", "y"])).unwrap();
    agree_on_grid(&segment, &set("0 <= x and x <= 1 and y = 0", &["x", "y"]));
    same(&frontier(&set("0 < x and x < 1", &["x"])).unwrap(), "x = 0 or x = 1");
    same(&frontier(&set("int(x)", &["x"])).unwrap(), "false");
    let ring = frontier(&set("0 < x and x < 1 and 0 < y and y < 1", &["x", "y"])).unwrap();
    let boundary = "0 <= x and x <= 1 and 0 <= y and y <= 1 and (x = 0 or x = 1 or y = 0 or y = 1)";
    agree_on_grid(&ring, &set(boundary, &["x", "y"]));
    same(&isolated_points(&set("0 <= x and x <= 1 or x = 2", &["x"])).unwrap(), "x = 2");
    same(&isolated_points(&set("int(x)", &["x"])).unwrap(), "int(x)");
    same(&isolated_points(&set("false", &["x"])).unwrap(), "false");
}

#[test]
fn classification() {
    let z = classify_topology(&set("int(x)", &["x"])).unwrap();
    assert!(z.is_discrete && z.is_closed && !z.has_nonempty_interior);
    let unit = classify_topology(&set("0 < x and x < 1", &["x"])).unwrap();
    assert!(!unit.is_discrete && !unit.is_closed && unit.has_nonempty_interior);
    let halves = set("x - floor(x) <= 1/2 and int(2*x)", &["x"]);
    let h = classify_topology(&halves).unwrap();
    assert!(h.is_discrete && h.is_closed && !h.has_nonempty_interior);
    // the normal form has points only
    let nf = one_var_normal_form(&halves).unwrap();
    let pieces = nf.window_cells.iter().chain(&nf.left_tail).chain(&nf.right_tail);
    assert!(pieces.into_iter().all(|p| matches!(p, Piece::Point { .. })));
}

fn graph(text: &str) -> FunctionGraph {
    FunctionGraph::new(set(text, &["x", "y"]), set("true", &["x"])).unwrap()
}

#[test]
fn monotone_partitions() {
    let id = monotone_partition(&graph("y = x")).unwrap();
    same(&id.x_plus, "true");
    for p in [&id.x_c, &id.x_minus, &id.x_d] {
        same(p, "false");
    }
    // jumps exactly at the integers, found by evaluating beside each grid point
    for (text, flat) in [("y = floor(x)", true), ("y = x - floor(x)", false)] {
        let p = monotone_partition(&graph(text)).unwrap();
        // both functions are continuous exactly where floor is
        let h = q(1, 1024);
        for a in grid(1) {
            let a = &a[0];
            let jump = (a - &h).floor() != a.floor();
            assert_eq!(holds(&p.x_d, std::slice::from_ref(a)), jump, "{text} at {a}");
        }
        same(if flat { &p.x_c } else { &p.x_plus }, "not int(x)");
        same(if flat { &p.x_plus } else { &p.x_c }, "false");
        same(&p.x_minus, "false");
    }
}

#[test]
fn sections() {
    let s = set("int(y - x)", &["x", "y"]);
    let tau = definable_section(&s, &[0]).unwrap();
    same(&tau.graph, "y = x - floor(x)");
}

#[test]
fn dimensions() {
    let z2 = set("floor(x) = x and floor(y) = y", &["x", "y"]);
    assert_eq!(dim(&z2).unwrap(), DimensionValue::Finite(0));
    // oracle: no grid point of either axis projection has a grid neighbour in it
    for i in [0, 1] {
        let p = project(&z2, &[i]).unwrap();
        let members: Vec<Rational> = grid(1).into_iter().map(|v| v[0].clone()).filter(|a| holds(&p, std::slice::from_ref(a))).collect();
        assert!(members.windows(2).all(|w| &w[1] - &w[0] == Rational::one()));
    }
    let g = set("y = floor(x)", &["x", "y"]);
    assert_eq!(dim(&g).unwrap(), DimensionValue::Finite(1));
    assert_eq!(dim(&set("false", &["x"])).unwrap(), DimensionValue::NegInf);
}

fn lin(text: &str) -> Lin {
    Lin::from_term(&lodim::parse_term(text).unwrap())
}

#[test]
fn cell_examples() {
    let z = decompose(&set("int(x)", &["x"])).unwrap();
    assert_eq!(z.cells.len(), 1);
    let c = &z.cells[0];
    assert!(c.signature.is_empty());
    assert_eq!(c.sheets[0].1, lin("k1"));
    assert_eq!(c.index_constraints.to_string(), "int(k1)");
    let cross = decompose(&set("x = 0 or y = 0", &["x", "y"])).unwrap();
    let sigs: Vec<Vec<usize>> = cross.cells.iter().map(|c| c.signature.clone()).collect();
    assert_eq!(sigs, vec![vec![], vec![0], vec![1]]);
    let pieces = ["x = 0 and y = 0", "y = 0 and x != 0", "x = 0 and y != 0"];
    for (c, text) in cross.cells.iter().zip(pieces) {
        assert!(equivalent(&c.realization().unwrap(), &Fm::from_formula(&parse_formula(text).unwrap())).unwrap());
    }
    let tr = decompose(&set("int(y - x)", &["x", "y"])).unwrap();
    assert_eq!(tr.cells.len(), 1);
    assert_eq!(tr.cells[0].signature, vec![0]);
    assert_eq!(tr.cells[0].base, Fm::True);
    assert_eq!(tr.cells[0].sheets[0].1, lin("x + k1"));
}

fn cell(vars: &[&str], sig: Vec<usize>, base: &str, sheets: &[(&str, &str)], indices: &[&str], idx: &str) -> Cell {
    Cell {
        vars: vars.iter().map(|v| Var::new(v)).collect(),
        signature: sig,
        base: Fm::from_formula(&parse_formula(base).unwrap()),
        sheets: sheets.iter().map(|(y, t)| (Var::new(y), lin(t))).collect(),
        indices: indices.iter().map(|k| Var::new(k)).collect(),
        index_constraints: Fm::from_formula(&parse_formula(idx).unwrap()),
        recovery: None,
    }
}

#[test]
fn cell_checker() {
    let z = decompose(&set("int(x)", &["x"])).unwrap();
    assert_eq!(verify_quasi_special(&z.cells[0], &set("int(x)", &["x"])).unwrap(), Ok(()));
    let plane = set("true", &["x", "y"]);
    let closed = cell(&["x", "y"], vec![0], "0 <= x and x <= 1", &[("y", "k1")], &["k1"], "int(k1)");
    assert_eq!(verify_quasi_special(&closed, &plane).unwrap(), Err(Reason::BaseNotOpen));
    let apart = cell(&["x", "y"], vec![0], "true", &[("y", "k1/2")], &["k1"], "int(k1)");
    assert_eq!(verify_quasi_special(&apart, &plane).unwrap(), Ok(()));
    let meet = cell(&["x", "y"], vec![0], "true", &[("y", "k1 + k2")], &["k1", "k2"], "int(k1) and int(k2)");
    assert_eq!(verify_quasi_special(&meet, &plane).unwrap(), Err(Reason::SheetsIntersect));
}

fn chain(vars: &[&str], texts: &[&str]) -> DimRankChain {
    DimRankChain { sets: texts.iter().map(|t| set(t, vars)).collect() }
}

#[test]
fn chains() {
    assert!(check_chain(&chain(&["x"], &["true", "x = 0"])).unwrap());
    assert!(check_chain(&chain(&["x", "y"], &["true", "x = 0", "x = 0 and y = 0"])).unwrap());
    assert!(!check_chain(&chain(&["x"], &["true", "0 < x and x < 1"])).unwrap());
    let z = synthesize_chain(&set("int(x)", &["x"])).unwrap();
    assert_eq!(z.len(), 0);
    let line = synthesize_chain(&set("true", &["x"])).unwrap();
    assert_eq!(line.len(), 1);
    assert!(line.sets[1].formula.to_string().starts_with("x = "));
    let square = synthesize_chain(&set("0 < x and x < 1 and 0 < y and y < 1", &["x", "y"])).unwrap();
    assert_eq!(square.len(), 2);
    assert_eq!(dim(&square.sets[2]).unwrap(), DimensionValue::Finite(0));
    assert_eq!(eliminate(&square.sets[2]).unwrap().formula.to_string().matches('=').count(), 2);
    for (text, d) in [("int(x)", 1), ("true", 2)] {
        let (rank, c) = dimension_rank(&set(text, &["x", "y"])).unwrap();
        assert_eq!(rank, DimensionValue::Finite(d));
        assert!(check_chain(&c.unwrap()).unwrap());
    }
}

#[test]
fn matroid_examples() {
    let collinear = FiniteMatroidOracle::binary(vec![0b01, 0b10, 0b11]);
    let b = basis(&collinear, &[0, 1, 2], &[]).unwrap();
    assert_eq!(b.len(), 2);
    let line = FiniteMatroidOracle::binary(vec![0b1, 0b1, 0b1]);
    assert_eq!(basis(&line, &[0, 1, 2], &[]).unwrap().len(), 1);
    assert_eq!(brute_force_rank(&line, &[0, 1, 2], &[]).unwrap(), 1);
    assert!(basis(&line, &[1, 2], &[0]).unwrap().is_empty());
    assert_eq!(basis(&FiniteMatroidOracle::free(3), &[0, 1, 2], &[]).unwrap(), vec![0, 1, 2]);
    assert_eq!(rank_over(&line, &[], &[0]).unwrap(), 0);
    let u = FiniteMatroidOracle::uniform(2, 4);
    assert_eq!(rank_over(&u, &[0, 1, 2, 3], &[]).unwrap(), 2);
    assert_eq!(brute_force_rank(&u, &[0, 1, 2, 3], &[]).unwrap(), 2);
    // 0 ∈ cl({1, fixed=2}) but 1 ∉ cl({2, 0}) fails: exchange is violated
    let broken = BrokenOracle { fixed: 0 };
    let r = exchange_check(&broken, &[(0, 1, vec![]), (0, 2, vec![])]).unwrap();
    assert!(!r.violations.is_empty());
}

fn sym(text: &str, declared: &[Var]) -> SymbolicReal {
    SymbolicReal::parse(text, &declared.iter().cloned().collect()).unwrap()
}

#[test]
fn discrete_closure() {
    let (a, b) = (Var::new("alpha"), Var::new("beta"));
    let both = [a.clone(), b.clone()];
    assert!(!discl_member(&sym("alpha", &both), &both, &[]).unwrap());
    assert!(discl_member(&sym("1/2", &both), &both, &[]).unwrap());
    assert!(!discl_member(&sym("alpha + beta", &both), &both, &[a.clone()]).unwrap());
    assert!(discl_member(&sym("alpha + beta", &both), &both, &both).unwrap());
    assert_eq!(discl_witness(&sym("1/2", &both), &both, &[]).unwrap().formula.to_string(), "x = 1/2");
    let w = discl_witness(&sym("alpha + 3/2", &both), &both, &[a.clone()]).unwrap();
    assert!(equivalent(&w.fm(), &Fm::from_formula(&parse_formula("int(2*(x - alpha))").unwrap())).unwrap());
    let flags = classify_topology(&w).unwrap();
    assert!(flags.is_discrete && flags.is_closed);
    let p = discl_witness(&sym("2*alpha - 1/3", &both), &both, &[a]).unwrap();
    assert!(equivalent(&p.fm(), &Fm::from_formula(&parse_formula("x = 2*alpha - 1/3").unwrap())).unwrap());
}

fn ns(s: Rational, eps: &[(usize, i64)]) -> NonstandardNumber {
    eps.iter().fold(NonstandardNumber::rational(s), |acc, &(i, c)| acc.add(&NonstandardNumber::eps(i).scale(&Rational::from_int(c))))
}

#[test]
fn nonstandard_arithmetic() {
    assert_eq!(ns_floor(&ns(q(1, 2), &[(1, 1)])), NonstandardNumber::rational(q(0, 1)));
    assert_eq!(ns_floor(&ns(q(1, 1), &[(1, -1)])), NonstandardNumber::rational(q(0, 1)));
    assert_eq!(ns_floor(&ns(q(2, 1), &[(2, 1)])), NonstandardNumber::rational(q(2, 1)));
    assert_eq!(ns_compare(&ns(q(1, 2), &[(1, 1)]), &NonstandardNumber::rational(q(1, 2))), Ordering::Greater);
    assert_eq!(ns_compare(&ns(q(1, 2), &[(1, 1)]), &NonstandardNumber::rational(q(3, 5))), Ordering::Less);
    let x = [Var::new("x")];
    let xy = [Var::new("x"), Var::new("y")];
    let fm = |t: &str| Fm::from_formula(&parse_formula(t).unwrap());
    assert!(eval_qf_at(&fm("0 < x and x < 1"), &x, &[NonstandardNumber::eps(1)]).unwrap());
    assert!(!eval_qf_at(&fm("int(x)"), &x, &[NonstandardNumber::eps(1)]).unwrap());
    let p = [ns(q(1, 2), &[(1, 1)]), NonstandardNumber::rational(q(0, 1))];
    assert!(eval_qf_at(&fm("y = floor(x)"), &xy, &p).unwrap());
}

#[test]
fn generic_points() {
    let line = make_generic(&set("true", &["x"])).unwrap();
    assert_eq!(line.point, vec![NonstandardNumber::eps(1)]);
    let tr = make_generic(&set("int(y - x)", &["x", "y"])).unwrap();
    assert_eq!(tr.point, vec![NonstandardNumber::eps(1), NonstandardNumber::eps(1)]);
    assert_eq!(tr.claimed_rank, 1);
    let sq = make_generic(&set("0 < x and x < 1 and 0 < y and y < 1", &["x", "y"])).unwrap();
    assert_eq!(sq.point, vec![ns(q(1, 2), &[(1, 1)]), ns(q(1, 2), &[(2, 1)])]);
    let (d, w) = definable_set_rank(&set("int(x) and int(y)", &["x", "y"])).unwrap();
    assert_eq!(d, DimensionValue::Finite(0));
    assert!(w.unwrap().point.iter().all(|p| p.is_standard()));
    let shifted = make_generic(&set("y = x + 1/2", &["x", "y"])).unwrap();
    assert_eq!(shifted.point, vec![NonstandardNumber::eps(1), ns(q(1, 2), &[(1, 1)])]);
    let plane = make_generic(&set("true", &["x", "y"])).unwrap();
    assert_eq!(plane.point, vec![NonstandardNumber::eps(1), NonstandardNumber::eps(2)]);
}
