use super::*;
use crate::parse::parse;
use crate::qe::equivalent;

fn set(text: &str, vars: &[&str]) -> DefinableSet {
    parse(text, vars, &[]).unwrap()
}

fn same(a: &DefinableSet, text: &str) {
    let b = set(text, &a.vars.iter().map(|v| v.name()).collect::<Vec<_>>());
    assert!(equivalent(&a.fm(), &b.fm()).unwrap(), "got {}, expected {text}", a.formula);
}

#[test]
fn interiors() {
    same(&interior(&set("0 <= x and x <= 1", &["x"])).unwrap(), "0 < x and x < 1");
    same(&interior(&set("int(x)", &["x"])).unwrap(), "false");
    same(&interior(&set("(0 <= x and x <= 1) or x = 2", &["x"])).unwrap(), "0 < x and x < 1");
    same(&interior(&set("x - floor(x) <= 1/2", &["x"])).unwrap(), "x - floor(x) < 1/2 and not int(x)");
}

#[test]
fn closures_and_frontiers() {
    same(&closure_of(&set("0 < x and x < 1", &["x"])).unwrap(), "0 <= x and x <= 1");
    same(&closure_of(&set("int(x)", &["x"])).unwrap(), "int(x)");
    same(&closure_of(&set("0 < x and x < 1 and y = 0", &["x", "y"])).unwrap(), "0 <= x and x <= 1 and y = 0");
    same(&frontier(&set("0 < x and x < 1", &["x"])).unwrap(), "x = 0 or x = 1");
    same(&frontier(&set("int(x)", &["x"])).unwrap(), "false");
    same(
        &frontier(&set("0 < x and x < 1 and 0 < y and y < 1", &["x", "y"])).unwrap(),
        "0 <= x and x <= 1 and 0 <= y and y <= 1 and (x = 0 or x = 1 or y = 0 or y = 1)",
    );
}

#[test]
fn isolated() {
    same(&isolated_points(&set("(0 <= x and x <= 1) or x = 2", &["x"])).unwrap(), "x = 2");
    same(&isolated_points(&set("int(x)", &["x"])).unwrap(), "int(x)");
    same(&isolated_points(&set("false", &["x"])).unwrap(), "false");
}

#[test]
fn flags() {
    let z = classify_topology(&set("int(x)", &["x"])).unwrap();
    assert!(z.is_discrete && z.is_closed && !z.has_nonempty_interior && !z.is_open && !z.is_empty);
    let i = classify_topology(&set("0 < x and x < 1", &["x"])).unwrap();
    assert!(!i.is_discrete && !i.is_closed && i.has_nonempty_interior && i.is_open);
    let h = classify_topology(&set("x - floor(x) <= 1/2 and int(2*x)", &["x"])).unwrap();
    assert!(h.is_discrete && h.is_closed && !h.has_nonempty_interior);
}

#[test]
fn nonempty_interior_in_the_plane() {
    assert!(has_nonempty_interior(&set("0 < x and x < y", &["x", "y"])).unwrap());
    assert!(!has_nonempty_interior(&set("y = floor(x)", &["x", "y"])).unwrap());
    assert!(!has_nonempty_interior(&set("int(x) or y = 2*x", &["x", "y"])).unwrap());
    assert!(has_nonempty_interior(&set("floor(x + y) = floor(x) + floor(y)", &["x", "y"])).unwrap());
}

#[test]
fn relative_interior() {
    let x = Var::new("x");
    let y = Var::new("y");
    let line = Fm::from_formula(&crate::parse_formula("y = 0").unwrap());
    let seg = Fm::from_formula(&crate::parse_formula("y = 0 and 0 <= x and x <= 1").unwrap());
    let r = relative_interior_fm(&seg, &line, &[x, y]).unwrap();
    let want = Fm::from_formula(&crate::parse_formula("y = 0 and 0 < x and x < 1").unwrap());
    assert!(equivalent(&r, &want).unwrap(), "{r}");
}

fn graph(term: &str) -> FunctionGraph {
    let g = set(&format!("y = {term}"), &["x", "y"]);
    FunctionGraph::new(g, set("true", &["x"])).unwrap()
}

#[test]
fn monotone_partitions() {
    let p = monotone_partition(&graph("x")).unwrap();
    same(&p.x_plus, "true");
    same(&p.x_d, "false");
    let p = monotone_partition(&graph("floor(x)")).unwrap();
    same(&p.x_c, "not int(x)");
    same(&p.x_d, "int(x)");
    same(&p.x_plus, "false");
    let p = monotone_partition(&graph("x - floor(x)")).unwrap();
    same(&p.x_plus, "not int(x)");
    same(&p.x_d, "int(x)");
    same(&p.x_c, "false");
    same(&p.x_minus, "false");
}

#[test]
fn graphs_must_be_functions() {
    let g = set("y = x or y = -x", &["x", "y"]);
    assert!(matches!(FunctionGraph::new(g, set("true", &["x"])), Err(crate::Error::Precondition(_))));
}

#[test]
fn sections() {
    let s = set("int(y - x)", &["x", "y"]);
    let t = definable_section(&s, &[0]).unwrap();
    same(&t.graph, "y = x - floor(x)");
    let neg = set("y = -2 or y = -1", &["x", "y"]);
    let t = definable_section(&neg, &[0]).unwrap();
    same(&t.graph, "y = -1");
    let f = set("y = 2*x + 1", &["x", "y"]);
    same(&definable_section(&f, &[0]).unwrap().graph, "y = 2*x + 1");
    assert!(definable_section(&set("0 < y", &["x", "y"]), &[0]).is_err());
}
