use super::*;
use crate::parse::parse;

fn set(text: &str, vars: &[&str]) -> DefinableSet {
    parse(text, vars, &[]).unwrap()
}

fn show(d: &CellDecomposition) -> Vec<String> {
    d.cells.iter().map(|c| serde_json::to_string(c).unwrap()).collect()
}

#[test]
fn integers() {
    let d = decompose(&set("int(x)", &["x"])).unwrap();
    assert_eq!(d.cells.len(), 1, "{:?}", show(&d));
    let c = &d.cells[0];
    assert!(c.signature.is_empty());
    assert_eq!(c.sheets[0].1, Lin::var(&Var::new("k1")));
}

#[test]
fn empty_set_has_no_cells() {
    assert!(decompose(&set("x < 0 and x > 0", &["x"])).unwrap().cells.is_empty());
}

#[test]
fn arity_cap() {
    let s = set("true", &["a", "b", "c", "d"]);
    assert!(matches!(decompose(&s), Err(Error::Unsupported(_))));
}

#[test]
fn cross() {
    let d = decompose(&set("x = 0 or y = 0", &["x", "y"])).unwrap();
    assert_eq!(d.cells.len(), 3, "{:?}", show(&d));
    let sigs: Vec<Vec<usize>> = d.cells.iter().map(|c| c.signature.clone()).collect();
    assert_eq!(sigs, vec![vec![], vec![0], vec![1]]);
}

#[test]
fn lattice_translates() {
    let d = decompose(&set("int(y - x)", &["x", "y"])).unwrap();
    assert_eq!(d.cells.len(), 1, "{:?}", show(&d));
    let c = &d.cells[0];
    assert_eq!(c.signature, vec![0]);
    assert_eq!(c.base, Fm::True);
    assert_eq!(c.sheets[0].1, Lin::var(&Var::new("x")).add(&Lin::var(&Var::new("k1"))));
}

#[test]
fn assorted_sets_decompose() {
    for (text, vars) in [
        ("true", &["x"][..]),
        ("0 <= x and x < 1", &["x"]),
        ("y = floor(x)", &["x", "y"]),
        ("0 <= x and x < 1 and 0 <= y and y < 1", &["x", "y"]),
        ("int(x) and y > x", &["x", "y"]),
        ("y - floor(y) < 1/2", &["x", "y"]),
        ("x = y and y = z", &["x", "y", "z"]),
    ] {
        let s = set(text, vars);
        let d = decompose(&s).unwrap();
        let top = d.cells.iter().map(|c| c.signature.len()).max();
        assert_eq!(top, crate::dimension::dim(&s).unwrap().finite(), "{text}");
    }
}

fn cell(sig: Vec<usize>, base: &str, sheets: &[(&str, &str)], indices: &[&str], idx: &str) -> Cell {
    let all = ["x", "y", "k1", "k2"];
    let fm = |t: &str| Fm::from_formula(&crate::parse_formula(t).unwrap());
    let _ = all;
    Cell {
        vars: vec![Var::new("x"), Var::new("y")],
        signature: sig,
        base: fm(base),
        sheets: sheets.iter().map(|(y, t)| (Var::new(y), Lin::from_term(&crate::parse_term(t).unwrap()))).collect(),
        indices: indices.iter().map(|k| Var::new(k)).collect(),
        index_constraints: fm(idx),
        recovery: None,
    }
}

#[test]
fn checker_reasons() {
    let plane = set("true", &["x", "y"]);
    let ok = cell(vec![0], "true", &[("y", "k1/2")], &["k1"], "int(k1)");
    assert_eq!(verify_quasi_special(&ok, &plane).unwrap(), Ok(()));
    let closed = cell(vec![0], "0 <= x and x <= 1", &[("y", "0")], &[], "true");
    assert_eq!(verify_quasi_special(&closed, &plane).unwrap(), Err(Reason::BaseNotOpen));
    let twice = cell(vec![0], "true", &[("y", "k1 + k2")], &["k1", "k2"], "int(k1) and int(k2)");
    assert_eq!(verify_quasi_special(&twice, &plane).unwrap(), Err(Reason::SheetsIntersect));
    let jumpy = cell(vec![0], "true", &[("y", "floor(x)")], &[], "true");
    assert_eq!(verify_quasi_special(&jumpy, &plane).unwrap(), Err(Reason::FloorNotLocallyConstant));
    let outside = cell(vec![0], "true", &[("y", "1")], &[], "true");
    assert_eq!(verify_quasi_special(&outside, &set("y = 0", &["x", "y"])).unwrap(), Err(Reason::NotContained));
}
