//! Property tests over random formulas. Formulas come from the seeded
//! generator; proptest drives the seed.

use lodim::dimension::{dim, DimensionValue};
use lodim::fm::Fm;
use lodim::gen::{var_names, Gen};
use lodim::oracle::exists_one;
use lodim::qe::{eliminate, exists_fm, normalize, valid};
use lodim::topology::{closure_fm, interior_fm};
use lodim::{parse_formula, DefinableSet, Formula, Rational, Var};
use proptest::prelude::*;

fn random_qf(seed: u64, n: usize) -> (Formula, Vec<Var>) {
    let vars = var_names(&["x", "y", "z"])[..n].to_vec();
    (Gen::new(seed).qf(&vars), vars)
}

fn points(seed: u64, n: usize) -> Vec<Vec<Rational>> {
    let mut g = Gen::new(seed ^ 0x5eed);
    (0..40).map(|_| (0..n).map(|_| g.rational(4)).collect()).collect()
}

fn eval(f: &Fm, vars: &[Var], p: &[Rational]) -> bool {
    f.eval(&|v| vars.iter().position(|w| w == v).map(|i| p[i].clone())).expect("closed under the point")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>(), n in 1usize..=3) {
        let (f, _) = random_qf(seed, n);
        let once = normalize(&f);
        prop_assert_eq!(normalize(&once), once);
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>(), n in 1usize..=3) {
        let (f, _) = random_qf(seed, n);
        // a leading scalar sign reparses as a negation, so the text is
        // stable from the second print on
        let back = parse_formula(&f.to_string()).unwrap();
        let text = back.to_string();
        prop_assert_eq!(parse_formula(&text).unwrap().to_string(), text);
        prop_assert_eq!(normalize(&back), normalize(&f));
    }

    #[test]
    fn normalize_preserves_truth(seed in any::<u64>(), n in 1usize..=3) {
        let (f, vars) = random_qf(seed, n);
        let a = Fm::from_formula(&f);
        let b = Fm::from_formula(&normalize(&f));
        for p in points(seed, n) {
            prop_assert_eq!(eval(&a, &vars, &p), eval(&b, &vars, &p));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// `∃y φ(x, y)` at rational `x` against the one-variable search oracle.
    #[test]
    fn elimination_agrees_with_search(seed in any::<u64>()) {
        let (f, vars) = random_qf(seed, 2);
        let body = Fm::from_formula(&f);
        let Ok(q) = exists_fm(&vars[1..], &body) else { return Ok(()) };
        for p in points(seed, 1) {
            let at = body.subst(&vars[0], &lodim::linear::Lin::constant(p[0].clone()));
            prop_assert_eq!(eval(&q, &vars[..1], &p), exists_one(&at, &vars[1]), "{} at {:?}", f, p);
        }
    }

    #[test]
    fn interior_within_set_within_closure(seed in any::<u64>(), n in 1usize..=2) {
        let (f, vars) = random_qf(seed, n);
        let s = Fm::from_formula(&f);
        let (Ok(i), Ok(c)) = (interior_fm(&s, &vars), closure_fm(&s, &vars)) else { return Ok(()) };
        prop_assert!(valid(&Fm::implies(i, s.clone())).unwrap());
        prop_assert!(valid(&Fm::implies(s, c)).unwrap());
    }

    #[test]
    fn dimension_is_bounded_and_eliminable(seed in any::<u64>(), n in 1usize..=2) {
        let (f, vars) = random_qf(seed, n);
        let s = DefinableSet::new(f, vars, Default::default()).unwrap();
        let Ok(d) = dim(&s) else { return Ok(()) };
        prop_assert!(d <= DimensionValue::Finite(n));
        let q = eliminate(&s).unwrap();
        prop_assert_eq!(dim(&q).unwrap(), d);
    }
}
