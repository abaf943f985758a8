//! Definable functions: certified graphs, the monotonicity partition of a
//! one-variable function, and definable choice on discrete fibers.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::fm::{CRel, Fm};
use crate::linear::Lin;
use crate::qe::{exists_fm, project, satisfiable, valid};
use crate::simplify::simplify;
use crate::syntax::{DefinableSet, Var};
use crate::{Error, Result};

use super::germ::{germ, Shift};
use super::{directions, interior_fm, is_closed_fm, is_discrete_fm, is_open_fm, qf};

/// Graph of a function from `domain` (over the first `domain_arity`
/// variables of `graph`) to `M^codomain_arity`.
#[derive(Clone, Debug, Serialize)]
pub struct FunctionGraph {
    #[serde(serialize_with = "crate::print::set_text")]
    pub graph: DefinableSet,
    #[serde(serialize_with = "crate::print::set_text")]
    pub domain: DefinableSet,
    pub domain_arity: usize,
    pub codomain_arity: usize,
}

impl FunctionGraph {
    /// Certifies that `graph` lies over `domain` and is total and
    /// single-valued there.
    pub fn new(graph: DefinableSet, domain: DefinableSet) -> Result<FunctionGraph> {
        let k = domain.vars.len();
        if graph.vars.len() < k || graph.vars[..k] != domain.vars[..] {
            return Err(Error::Usage("graph variables must start with the domain variables".into()));
        }
        let g = qf(&graph.fm())?;
        let d = qf(&domain.fm())?;
        let ys = graph.vars[k..].to_vec();
        if !valid(&Fm::implies(g.clone(), d.clone()))? {
            return Err(Error::Precondition("graph leaves the domain".into()));
        }
        if !valid(&Fm::implies(d.clone(), exists_fm(&ys, &g)?))? {
            return Err(Error::Precondition("function is not total on its domain".into()));
        }
        let ys2: Vec<Var> = ys.iter().map(|y| Var::fresh(y.name())).collect();
        let g2 = g.map_lins(&|l| l.subst_many(&ys.iter().cloned().zip(ys2.iter().map(Lin::var)).collect()));
        let same = Fm::and(ys.iter().zip(&ys2).map(|(a, b)| Fm::atom(Lin::var(a).sub(&Lin::var(b)), CRel::Eq)).collect());
        if !valid(&Fm::implies(Fm::and2(g.clone(), g2), same))? {
            return Err(Error::Precondition("graph is not single-valued".into()));
        }
        Ok(FunctionGraph {
            graph: graph.from_fm(&g),
            domain: domain.from_fm(&d),
            domain_arity: k,
            codomain_arity: ys.len(),
        })
    }

    pub fn domain_vars(&self) -> &[Var] {
        &self.graph.vars[..self.domain_arity]
    }

    pub fn codomain_vars(&self) -> &[Var] {
        &self.graph.vars[self.domain_arity..]
    }
}

/// `I = X_d ∪ X_c ∪ X_+ ∪ X_−` for a function on `I ⊆ M`.
#[derive(Clone, Debug, Serialize)]
pub struct MonotonePartition {
    #[serde(serialize_with = "crate::print::set_text")]
    pub x_d: DefinableSet,
    #[serde(serialize_with = "crate::print::set_text")]
    pub x_c: DefinableSet,
    #[serde(serialize_with = "crate::print::set_text")]
    pub x_plus: DefinableSet,
    #[serde(serialize_with = "crate::print::set_text")]
    pub x_minus: DefinableSet,
    /// Names of the certificates that were decided true.
    pub certificates: Vec<String>,
}

/// Points where both one-sided germs of the graph are affine with a slope
/// satisfying `slope`, and continuous at the point.
fn sided(g: &Fm, x: &Var, y: &Var, slope: impl Fn(&Lin) -> Fm) -> Result<Fm> {
    let w = Var::fresh("slope");
    let mut sides = Vec::new();
    for s in [1i64, -1] {
        let sign = crate::rational::Rational::from_int(s);
        let shift: Shift =
            [(x.clone(), Lin::constant(sign.clone())), (y.clone(), Lin::var(&w).scale(&sign))].into_iter().collect();
        sides.push(exists_fm(std::slice::from_ref(&w), &Fm::and2(slope(&Lin::var(&w)), germ(g, &shift)))?);
    }
    let body = Fm::and(vec![g.clone(), sides.pop().unwrap(), sides.pop().unwrap()]);
    Ok(simplify(&exists_fm(std::slice::from_ref(y), &body)?))
}

/// The canonical partition: `X_c` locally constant points, `X_+` (`X_−`)
/// points near which `f` is continuous and strictly increasing
/// (decreasing), `X_d` the rest. All four parts are certified.
pub fn monotone_partition(f: &FunctionGraph) -> Result<MonotonePartition> {
    if f.domain_arity != 1 || f.codomain_arity != 1 {
        return Err(Error::Unsupported("monotone partition needs a function M → M".into()));
    }
    let x = f.graph.vars[0].clone();
    let y = f.graph.vars[1].clone();
    let xs = std::slice::from_ref(&x);
    let g = qf(&f.graph.fm())?;
    let dom = qf(&f.domain.fm())?;
    let open = interior_fm(&dom, xs)?;
    let part = |slope: &dyn Fn(&Lin) -> Fm| -> Result<Fm> {
        Ok(simplify(&Fm::and2(open.clone(), sided(&g, &x, &y, slope)?)))
    };
    let xc = part(&|w| Fm::atom(w.clone(), CRel::Eq))?;
    let xp = part(&|w| Fm::atom(w.neg(), CRel::Lt))?;
    let xm = part(&|w| Fm::atom(w.clone(), CRel::Lt))?;
    let xd = simplify(&Fm::and(vec![dom.clone(), xc.neg(), xp.neg(), xm.neg()]));
    let mut certificates = Vec::new();
    let mut certify = |name: &str, ok: bool| -> Result<()> {
        if ok {
            certificates.push(name.to_string());
            Ok(())
        } else {
            Err(Error::Internal(format!("monotone partition certificate failed: {name}")))
        }
    };
    let parts = [("X_d", &xd), ("X_c", &xc), ("X_+", &xp), ("X_-", &xm)];
    for i in 0..4 {
        for j in i + 1..4 {
            let ok = valid(&Fm::and2(parts[i].1.clone(), parts[j].1.clone()).neg())?;
            certify(&format!("{} and {} disjoint", parts[i].0, parts[j].0), ok)?;
        }
    }
    let union = Fm::or(parts.iter().map(|p| p.1.clone()).collect());
    certify("parts cover the domain", valid(&Fm::iff(union, dom.clone()))?)?;
    for (name, p) in &parts[1..] {
        certify(&format!("{name} open"), is_open_fm(p, xs)?)?;
    }
    certify("X_d discrete", is_discrete_fm(&xd, xs)?)?;
    certify("X_d closed", is_closed_fm(&xd, xs)?)?;
    for (name, cond) in local_laws(&g, &x, &y, &xc, &xp, &xm)? {
        certify(&name, cond)?;
    }
    let set = |h: &Fm| f.domain.from_fm(h);
    Ok(MonotonePartition { x_d: set(&xd), x_c: set(&xc), x_plus: set(&xp), x_minus: set(&xm), certificates })
}

/// The defining local conditions restated with an explicit radius:
/// constancy on `X_c`, strict monotonicity on `X_±`, and continuity on
/// `X_c ∪ X_+ ∪ X_−` in the `η`–`δ` form. Monotonicity is compared against
/// the center of each neighborhood; on an open part this is equivalent to
/// the pairwise form by definable completeness, and it quantifies over one
/// point instead of two.
fn local_laws(g: &Fm, x: &Var, y: &Var, xc: &Fm, xp: &Fm, xm: &Fm) -> Result<Vec<(String, bool)>> {
    let (x1, y1, d, e) = (Var::fresh("a"), Var::fresh("fa"), Var::fresh("delta"), Var::fresh("eta"));
    let v = |w: &Var| Lin::var(w);
    let rename = |h: &Fm, to_x: &Var, to_y: &Var| {
        let m: BTreeMap<Var, Lin> = [(x.clone(), v(to_x)), (y.clone(), v(to_y))].into_iter().collect();
        h.map_lins(&|l| l.subst_many(&m))
    };
    let near = |w: &Var| {
        Fm::and2(Fm::atom(v(w).sub(&v(x)).sub(&v(&d)), CRel::Lt), Fm::atom(v(x).sub(&v(w)).sub(&v(&d)), CRel::Lt))
    };
    let pos = |w: &Var| Fm::atom(v(w).neg(), CRel::Lt);
    // ∃δ ∀a near x: f(a) against f(x) on the left and on the right
    let fa = v(&y1);
    let below = Fm::atom(fa.sub(&v(y)), CRel::Lt);
    let above = Fm::atom(v(y).sub(&fa), CRel::Lt);
    let level = Fm::atom(fa.sub(&v(y)), CRel::Eq);
    let centered = |part: &Fm, left: &Fm, right: &Fm| -> Result<bool> {
        if !satisfiable(part)? {
            return Ok(true);
        }
        let sides = Fm::and2(
            Fm::implies(Fm::atom(v(&x1).sub(&v(x)), CRel::Lt), left.clone()),
            Fm::implies(Fm::atom(v(x).sub(&v(&x1)), CRel::Lt), right.clone()),
        );
        // f is single-valued, so δ may be chosen before f(x)
        let hyp = Fm::and(vec![g.clone(), near(&x1), rename(g, &x1, &y1)]);
        let inner = crate::qe::forall_fm(&[y.clone(), x1.clone(), y1.clone()], &Fm::implies(hyp, sides))?;
        let local = exists_fm(std::slice::from_ref(&d), &Fm::and2(pos(&d), inner))?;
        valid(&Fm::implies(part.clone(), local))
    };
    let mut out = vec![
        ("X_c locally constant".to_string(), centered(xc, &level, &level)?),
        ("X_+ locally strictly increasing".to_string(), centered(xp, &below, &above)?),
        ("X_- locally strictly decreasing".to_string(), centered(xm, &above, &below)?),
    ];
    // continuity: ∀η > 0 ∃δ > 0 ∀a near x: |f(a) − f(x)| < η
    let close = Fm::and2(
        Fm::atom(fa.sub(&v(y)).sub(&v(&e)), CRel::Lt),
        Fm::atom(v(y).sub(&fa).sub(&v(&e)), CRel::Lt),
    );
    let inner = crate::qe::forall_fm(
        &[x1.clone(), y1.clone()],
        &Fm::implies(Fm::and2(near(&x1), rename(g, &x1, &y1)), close),
    )?;
    let has_delta = exists_fm(std::slice::from_ref(&d), &Fm::and2(pos(&d), inner))?;
    let all_eta = crate::qe::forall_fm(std::slice::from_ref(&e), &Fm::implies(pos(&e), has_delta))?;
    let at = crate::qe::forall_fm(std::slice::from_ref(y), &Fm::implies(g.clone(), all_eta))?;
    let parts = Fm::or(vec![xc.clone(), xp.clone(), xm.clone()]);
    out.push(("f continuous on X_c, X_+, X_-".to_string(), valid(&Fm::implies(parts, at))?));
    Ok(out)
}

/// Definable choice: a function `τ` on `π(s)` with `τ(x) ∈ s` over `x`,
/// choosing each remaining coordinate in turn as the least nonnegative
/// element of its fiber, or the greatest negative one when there is none.
/// Fibers must be discrete. The graph is over the signature variables
/// followed by the remaining ones.
pub fn definable_section(s: &DefinableSet, sig: &[usize]) -> Result<FunctionGraph> {
    let base = project(s, sig)?;
    let xs: Vec<Var> = sig.iter().map(|&i| s.vars[i].clone()).collect();
    let ys: Vec<Var> = (0..s.vars.len()).filter(|i| !sig.contains(i)).map(|i| s.vars[i].clone()).collect();
    let f = qf(&s.fm())?;
    // fibers are discrete: every fiber point is isolated within its fiber
    let d = directions(&ys);
    let shift: Shift = ys.iter().cloned().zip(d.iter().map(Lin::var)).collect();
    let still = Fm::and(d.iter().map(|z| Fm::atom(Lin::var(z), CRel::Eq)).collect());
    let isolated = crate::qe::forall_fm(&d, &Fm::implies(germ(&f, &shift), still))?;
    if !valid(&Fm::implies(f.clone(), isolated))? {
        return Err(Error::Precondition("some fiber is not discrete".into()));
    }
    let mut t = f;
    for (j, y) in ys.iter().enumerate() {
        let p = simplify(&exists_fm(&ys[j + 1..], &t)?);
        let y2 = Var::fresh(y.name());
        let p2 = p.subst(y, &Lin::var(&y2));
        let (yv, y2v) = (Lin::var(y), Lin::var(&y2));
        let nonneg = |l: &Lin| Fm::atom(l.neg(), CRel::Le);
        let least_nonneg = Fm::and2(
            nonneg(&yv),
            crate::qe::forall_fm(
                std::slice::from_ref(&y2),
                &Fm::implies(Fm::and2(p2.clone(), nonneg(&y2v)), Fm::atom(yv.sub(&y2v), CRel::Le)),
            )?,
        );
        let greatest_neg = Fm::and(vec![
            Fm::atom(yv.clone(), CRel::Lt),
            crate::qe::forall_fm(
                std::slice::from_ref(&y2),
                &Fm::implies(p2.clone(), Fm::atom(y2v.sub(&yv), CRel::Le)),
            )?,
        ]);
        let rule = Fm::or2(least_nonneg, greatest_neg);
        t = simplify(&Fm::and2(t, Fm::and2(p, rule)));
    }
    let mut vars = xs.clone();
    vars.extend(ys.iter().cloned());
    let graph = DefinableSet { formula: t.to_formula(), vars, params: s.params.clone() };
    let fg = FunctionGraph::new(graph, base)?;
    if !valid(&Fm::implies(qf(&fg.graph.fm())?, s.fm()))? {
        return Err(Error::Internal("section leaves the set".into()));
    }
    Ok(fg)
}
