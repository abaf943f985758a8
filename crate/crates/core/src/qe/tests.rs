use super::*;
use crate::parse::parse;

fn set(text: &str, vars: &[&str]) -> DefinableSet {
    parse(text, vars, &[]).unwrap()
}

fn sentence(text: &str) -> bool {
    decide(&set(text, &[])).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn at(s: &DefinableSet, xs: &[Rational]) -> bool {
    let v: Valuation = s.vars.iter().cloned().zip(xs.iter().cloned()).collect();
    evaluate_at(s, &v).unwrap()
}

/// Grid of `x ∈ [−4, 4]` with step 1/8.
fn grid() -> impl Iterator<Item = Rational> {
    (-32..=32).map(|i| q(i, 8))
}

#[test]
fn shift_then_positive() {
    let s = eliminate(&set("exists y . y = x + 1 and y > 0", &["x"])).unwrap();
    assert_eq!(s.formula.to_string(), "x > -1");
}

#[test]
fn even_integers() {
    let s = set("exists y . x = 2*y and int(y)", &["x"]);
    let e = eliminate(&s).unwrap();
    assert!(e.formula.is_quantifier_free());
    for x in grid() {
        let expected = (&x / &q(2, 1)).is_integer();
        assert_eq!(at(&e, &[x.clone()]), expected, "x = {x}");
    }
}

#[test]
fn no_integer_in_unit_interval() {
    assert!(!sentence("exists x . 0 < x and x < 1 and int(x)"));
    assert!(sentence("exists x . 0 < x and x <= 1 and int(x)"));
}

#[test]
fn sentences() {
    assert!(sentence("forall x . not int(x) or int(x + 1)"));
    assert!(!sentence("exists x . x < x"));
    assert!(sentence("forall x . exists y . y > x and int(y)"));
    assert!(!sentence("exists x . forall y . y < x"));
    assert!(sentence("forall x . x - floor(x) < 1 and x - floor(x) >= 0"));
    assert!(sentence("forall x . floor(x/2) <= x/2"));
    assert!(sentence("forall x . floor(floor(x)/2) = floor(x/2)"));
    assert!(!sentence("forall x . floor(2*x) = 2*floor(x)"));
    assert!(sentence("exists x . floor(3*x) = 2 and floor(2*x) = 1"));
    assert!(!sentence("exists x . floor(3*x) = 0 and floor(2*x) = 1"));
}

#[test]
fn projections() {
    let graph = set("y = floor(x)", &["x", "y"]);
    let py = project(&graph, &[1]).unwrap();
    for y in grid() {
        assert_eq!(at(&py, &[y.clone()]), y.is_integer(), "y = {y}");
    }
    let px = project(&graph, &[0]).unwrap();
    assert_eq!(px.formula, Formula::True);
    let p0 = project(&graph, &[]).unwrap();
    assert_eq!(p0.formula, Formula::True);
    let empty = set("x < 0 and x > 0", &["x", "y"]);
    assert_eq!(project(&empty, &[]).unwrap().formula, Formula::False);
}

#[test]
fn evaluation_examples() {
    let z = set("floor(x) = x", &["x"]);
    assert!(at(&z, &[q(3, 1)]));
    assert!(!at(&z, &[q(1, 2)]));
    let none = set("0 < x and x < 1 and floor(x) = x", &["x"]);
    assert!(!at(&none, &[q(1, 2)]));
    let v = Valuation::new();
    assert!(matches!(evaluate_at(&z, &v), Err(Error::Missing(_))));
}

#[test]
fn normalize_examples() {
    let f = crate::parse::parse_formula("not (x < 1)").unwrap();
    assert_eq!(normalize(&f).to_string(), "x >= 1");
    let g = crate::parse::parse_formula("2*x + 2 < 0").unwrap();
    assert_eq!(normalize(&g).to_string(), "x < -1");
}

#[test]
fn resource_limit_is_deterministic() {
    let s = set(
        "exists y . exists z . floor(3*y/4 + z/3) = x and floor(y/3 - 2*z/3) > floor(x/4) and int(z/4 + y)",
        &["x"],
    );
    let tiny = QeConfig { max_nodes: 20 };
    let a = eliminate_with(&tiny, &s);
    let b = eliminate_with(&tiny, &s);
    assert!(matches!(a, Err(Error::ResourceLimit(_))));
    assert_eq!(a, b);
}

#[test]
fn mixed_nested_floors_agree_with_direct_evaluation() {
    let s = set("exists y . floor(y/2) = x and floor(3*y) > 2*x + floor(y)", &["x"]);
    let e = eliminate(&s).unwrap();
    // witness search over y on a fine grid is exact here: the truth set in y
    // is a union of intervals with endpoints in (1/6)ℤ
    for x in grid() {
        let f = Fm::from_formula(&s.formula);
        let Fm::Ex(y, body) = f else { panic!() };
        let mut found = false;
        for i in -200..=200 {
            let yv = q(i, 12);
            let env = |w: &Var| if *w == y { Some(yv.clone()) } else { Some(x.clone()) };
            if body.eval(&env).unwrap() {
                found = true;
                break;
            }
        }
        assert_eq!(at(&e, &[x.clone()]), found, "x = {x}");
    }
}

#[test]
fn depth_one_agrees_with_exhaustive_search() {
    use crate::gen::{var_names, Gen};
    use rand::Rng;
    let free = var_names(&["x", "y"]);
    let bound = var_names(&["w"]);
    let mut g = Gen::new(11);
    for i in 0..150 {
        let n = 1 + i % 2;
        let f = g.quantified(&free[..n], &bound, 1);
        let s = DefinableSet::new(f, free[..n].to_vec(), Default::default()).unwrap();
        let e = eliminate(&s).unwrap().fm();
        let orig = s.fm();
        for _ in 0..25 {
            let v: Valuation = free[..n]
                .iter()
                .map(|x| (x.clone(), q(g.rng.gen_range(-40..=40), g.rng.gen_range(1..=8))))
                .collect();
            let expected = crate::oracle::decide_shallow(&instantiate(&orig, &v));
            let got = e.eval(&|x| v.get(x).cloned()).unwrap();
            assert_eq!(got, expected, "formula {} at {v:?}\neliminated: {e}", s.formula);
        }
    }
}
