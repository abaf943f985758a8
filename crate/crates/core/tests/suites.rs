//! Law suites at small sizes: they pass, they are deterministic, and they
//! notice a wrong answer.

use lodim::corpus::parse_corpus;
use lodim::pregeometry::{exchange_check, random_triples, BrokenOracle};
use lodim::suites::{run_named, SUITES};
use rand::SeedableRng;

fn json(r: &lodim::suites::SuiteReport) -> String {
    serde_json::to_string(r).unwrap()
}

#[test]
fn every_suite_passes_small() {
    for name in SUITES {
        let r = run_named(name, 3, Some(12), None, None).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.failures);
        assert!(r.cases > 0, "{name} ran nothing");
    }
    let r = run_named("pregeometry", 3, Some(40), Some("discl"), None).unwrap();
    assert!(r.passed() && r.cases == 40);
}

#[test]
fn reports_are_deterministic() {
    for name in ["qe", "dim-laws", "shadow", "pregeometry"] {
        let a = run_named(name, 11, Some(10), None, None).unwrap();
        let b = run_named(name, 11, Some(10), None, None).unwrap();
        assert_eq!(json(&a), json(&b), "{name}");
    }
}

#[test]
fn corpus_override_and_usage_errors() {
    let corpus = parse_corpus("# vars: x, y\nint(x) and y > 0\n# vars: x\nx > 0\n").unwrap();
    let r = run_named("cells", 0, None, None, Some(corpus.clone())).unwrap();
    assert_eq!(r.cases, 2);
    assert!(r.passed());
    let r = run_named("dimrank", 0, Some(5), None, Some(corpus)).unwrap();
    assert!(r.passed() && r.cases >= 7);
    assert_eq!(run_named("nope", 0, None, None, None).unwrap_err().exit_code(), 1);
    assert_eq!(run_named("qe", 0, None, Some("discl"), None).unwrap_err().exit_code(), 1);
    assert_eq!(run_named("pregeometry", 0, None, Some("vector"), None).unwrap_err().exit_code(), 1);
}

#[test]
fn a_broken_closure_is_caught() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let triples = random_triples(&mut rng, &[0, 1, 2, 3], 200);
    let r = exchange_check(&BrokenOracle { fixed: 2 }, &triples).unwrap();
    assert!(r.tested > 0 && !r.violations.is_empty());
}
