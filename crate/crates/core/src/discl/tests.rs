use super::*;
use crate::parse::parse;

fn declared() -> Vec<Var> {
    vec![Var::new("alpha"), Var::new("beta")]
}

fn sym(text: &str) -> SymbolicReal {
    SymbolicReal::parse(text, &declared().into_iter().collect()).unwrap()
}

fn member(text: &str, over: &[&str]) -> bool {
    let over: Vec<Var> = over.iter().map(|v| Var::new(v)).collect();
    discl_member(&sym(text), &declared(), &over).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn ns(s: Rational, inf: &[i64]) -> NonstandardNumber {
    NonstandardNumber { standard: s, inf: inf.iter().map(|&i| Rational::from_int(i)).collect() }
}

#[test]
fn membership() {
    assert!(member("1/2", &[]));
    assert!(!member("alpha", &[]));
    assert!(member("alpha + 3/2", &["alpha"]));
    assert!(!member("alpha + beta", &["alpha"]));
    assert!(member("alpha + beta", &["alpha", "beta"]));
    let undeclared = SymbolicReal::parse("gamma", &declared().into_iter().collect());
    assert!(matches!(undeclared, Err(Error::Undeclared(_))));
    assert!(matches!(discl_member(&sym("1"), &declared(), &[Var::new("gamma")]), Err(Error::Undeclared(_))));
}

#[test]
fn witnesses() {
    let w = |text: &str, over: &[&str]| {
        let over: Vec<Var> = over.iter().map(|v| Var::new(v)).collect();
        discl_witness(&sym(text), &declared(), &over).unwrap()
    };
    assert_eq!(w("1/2", &[]).formula.to_string(), "x = 1/2");
    let lattice = w("alpha + 3/2", &["alpha"]);
    let expected = parse("int(2*(x - alpha))", &["x"], &["alpha"]).unwrap();
    assert!(crate::qe::equivalent(&lattice.fm(), &expected.fm()).unwrap());
    let point = w("2*alpha - 1/3", &["alpha"]);
    let expected = parse("x = 2*alpha - 1/3", &["x"], &["alpha"]).unwrap();
    assert!(crate::qe::equivalent(&point.fm(), &expected.fm()).unwrap());
    let over: Vec<Var> = vec![Var::new("alpha")];
    assert!(matches!(discl_witness(&sym("beta"), &declared(), &over), Err(Error::Precondition(_))));
}

/// Every discrete closed set definable without parameters, among small
/// generated ones, is a finite union of rational points and rational
/// lattices: its normal form has no interval pieces and rational data only.
/// Such a set misses every symbol independent of 1.
#[test]
fn parameter_free_discrete_sets_are_rational() {
    use crate::gen::{var_names, Gen, Shape};
    let x = var_names(&["x"]);
    let shape = Shape { max_atoms: 2, max_depth: 2, ..Shape::default() };
    let mut g = Gen::with_shape(17, shape);
    let mut seen = 0;
    for _ in 0..400 {
        let s = DefinableSet::new(g.qf(&x), x.clone(), Default::default()).unwrap();
        let flags = classify_topology(&s).unwrap();
        if !(flags.is_discrete && flags.is_closed) {
            continue;
        }
        seen += 1;
        let nf = crate::qe::one_var_normal_form(&s).unwrap();
        let pieces = nf.window_cells.iter().chain(&nf.left_tail).chain(&nf.right_tail);
        for p in pieces {
            assert!(matches!(p, crate::qe::Piece::Point { .. }), "{} has an interval piece", s.formula);
        }
    }
    assert!(seen >= 50, "only {seen} discrete closed sets drawn");
}

#[test]
fn floors_and_comparisons() {
    assert_eq!(ns_floor(&ns(q(1, 2), &[1])), NonstandardNumber::rational(q(0, 1)));
    assert_eq!(ns_floor(&ns(q(1, 1), &[-1])), NonstandardNumber::rational(q(0, 1)));
    assert_eq!(ns_floor(&ns(q(2, 1), &[0, 1])), NonstandardNumber::rational(q(2, 1)));
    assert_eq!(ns_compare(&ns(q(1, 2), &[1]), &ns(q(1, 2), &[])), Ordering::Greater);
    assert_eq!(ns_compare(&ns(q(1, 2), &[0, 1]), &ns(q(1, 2), &[1])), Ordering::Less);
    assert_eq!(ns_compare(&ns(q(1, 2), &[1]), &ns(q(3, 5), &[])), Ordering::Less);
}

#[test]
fn evaluation() {
    let at = |text: &str, vars: &[&str], p: Vec<NonstandardNumber>| {
        let s = parse(text, vars, &[]).unwrap();
        eval_qf_at(&s.fm(), &s.vars, &p).unwrap()
    };
    let e1 = NonstandardNumber::eps(1);
    assert!(at("0 < x and x < 1", &["x"], vec![e1.clone()]));
    assert!(!at("int(x)", &["x"], vec![e1.clone()]));
    assert!(at("y = floor(x)", &["x", "y"], vec![ns(q(1, 2), &[1]), NonstandardNumber::rational(q(0, 1))]));
    let quantified = parse("exists y . y > x", &["x"], &[]).unwrap();
    assert!(eval_qf_at(&quantified.fm(), &quantified.vars, &[e1]).is_err());
}

#[test]
fn ranks_of_points() {
    let e = NonstandardNumber::eps;
    assert_eq!(infinitesimal_rank(&[e(1), e(2)]), 2);
    assert_eq!(infinitesimal_rank(&[e(1), e(1).scale(&q(2, 1))]), 1);
    assert_eq!(infinitesimal_rank(&[ns(q(1, 2), &[]), ns(q(1, 3), &[])]), 0);
}

#[test]
fn generic_points() {
    let g = |text: &str, vars: &[&str]| make_generic(&parse(text, vars, &[]).unwrap()).unwrap();
    let line = g("true", &["x"]);
    assert_eq!(line.point, vec![NonstandardNumber::eps(1)]);
    let translates = g("int(y - x)", &["x", "y"]);
    assert_eq!(translates.point, vec![NonstandardNumber::eps(1), NonstandardNumber::eps(1)]);
    let square = g("0 < x and x < 1 and 0 < y and y < 1", &["x", "y"]);
    assert_eq!(square.point, vec![ns(q(1, 2), &[1]), ns(q(1, 2), &[0, 1])]);
    assert_eq!(square.claimed_rank, 2);
    let shifted = g("y = x + 1/2", &["x", "y"]);
    assert_eq!(shifted.point, vec![NonstandardNumber::eps(1), ns(q(1, 2), &[1])]);
}

#[test]
fn set_ranks() {
    let r = |text: &str, vars: &[&str]| definable_set_rank(&parse(text, vars, &[]).unwrap()).unwrap();
    let (d, w) = r("int(x) and int(y)", &["x", "y"]);
    assert_eq!(d, DimensionValue::Finite(0));
    assert_eq!(w.unwrap().claimed_rank, 0);
    assert_eq!(r("true", &["x", "y"]).0, DimensionValue::Finite(2));
    let (d, w) = r("x < 0 and x > 0", &["x"]);
    assert_eq!(d, DimensionValue::NegInf);
    assert!(w.is_none());
}

/// Replacing `εᵢ` by `10^{-3i}` reproduces every atom's truth value once the
/// standard parts and coefficients are small.
#[test]
fn agrees_with_small_rationals() {
    use crate::gen::{var_names, Gen};
    use rand::Rng;
    let vars = var_names(&["x", "y"]);
    let mut g = Gen::new(23);
    for _ in 0..200 {
        let f = Fm::from_formula(&g.qf(&vars));
        let point: Vec<NonstandardNumber> = (0..2)
            .map(|_| NonstandardNumber {
                standard: Rational::new(g.rng.gen_range(-8..=8), 4),
                inf: (0..2).map(|_| Rational::from_int(g.rng.gen_range(-2..=2))).collect(),
            })
            .collect();
        let shadow: Vec<Rational> = point
            .iter()
            .map(|p| {
                let mut v = p.standard.clone();
                for (i, c) in p.inf.iter().enumerate() {
                    v += &(c * &Rational::new(1, 1000i64.pow(i as u32 + 1)));
                }
                v
            })
            .collect();
        let env = |w: &Var| vars.iter().position(|v| v == w).map(|i| shadow[i].clone());
        assert_eq!(eval_qf_at(&f, &vars, &point).unwrap(), f.eval(&env).unwrap(), "{f} at {point:?}");
    }
}
