//! Model-category axiom checks by enumeration.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{coproduct_map, pullback, pushout, Carrier, ModelStructure, Square};
use crate::budget::{thin, Budget};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomOptions {
    pub lifting: bool,
    pub two_of_three: bool,
    pub retracts: bool,
    pub factorization: bool,
    pub properness: bool,
}

impl Default for AxiomOptions {
    fn default() -> Self {
        AxiomOptions { lifting: true, two_of_three: true, retracts: true, factorization: true, properness: false }
    }
}

impl AxiomOptions {
    pub fn all() -> Self {
        AxiomOptions { properness: true, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub ambient: String,
    pub structure: String,
    pub budget: Budget,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Tally {
    name: &'static str,
    cases: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, cases: 0, witness: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn finish(self) -> AxiomCheck {
        AxiomCheck { name: self.name.into(), passed: self.witness.is_none(), cases: self.cases, witness: self.witness }
    }
}

/// Morphisms between budgeted objects, thinned to a deterministic sample.
pub fn sample_morphisms<C: Carrier>(c: &C, budget: &Budget, cap: usize) -> Result<Vec<C::Mor>> {
    let objs = c.objects(budget)?;
    let mut all = Vec::new();
    for x in &objs {
        for y in &objs {
            let hs: Vec<C::Mor> = c.lifts(&c.hom_square(x, y))?.take(budget.max_homs).collect();
            all.extend(thin(&hs, cap.max(1)));
        }
    }
    Ok(thin(&all, cap))
}

pub fn verify_model_axioms<C: Carrier>(
    c: &C,
    m: &dyn ModelStructure<C>,
    budget: &Budget,
    options: AxiomOptions,
) -> Result<AxiomReport> {
    let samples = budget.samples;
    let objs = c.objects(budget)?;
    let mut mors = sample_morphisms(c, budget, samples)?;
    // Factorization outputs and generating maps are added: they exercise bigger objects.
    let mut extra = Vec::new();
    for f in thin(&mors, 16) {
        if let Ok((i, p)) = m.factor_cof_acyfib(c, &f) {
            extra.push(i);
            extra.push(p);
        }
        if let Ok((i, p)) = m.factor_acycof_fib(c, &f) {
            extra.push(i);
            extra.push(p);
        }
    }
    if let Some((i, j)) = m.generating(c, budget) {
        extra.extend(i);
        extra.extend(j);
    }
    mors.extend(extra);
    let enc = |f: &C::Mor| c.encode_mor(f).to_string();
    let mut checks = Vec::new();

    let mut ids = Tally::new("identities");
    for x in &objs {
        let id = c.identity(x);
        ids.record(m.is_cof(c, &id) && m.is_fib(c, &id) && m.is_we(c, &id), || enc(&id));
    }
    checks.push(ids.finish());

    let mut isos = Tally::new("all_three_classes_invertible");
    for f in &mors {
        if m.is_cof(c, f) && m.is_fib(c, f) && m.is_we(c, f) {
            isos.record(c.is_iso(f), || enc(f));
        }
    }
    checks.push(isos.finish());

    if options.two_of_three {
        let mut t = Tally::new("two_of_three");
        let mut by_dom: BTreeMap<String, Vec<&C::Mor>> = BTreeMap::new();
        for g in &mors {
            by_dom.entry(c.obj_key(&c.dom(g))).or_default().push(g);
        }
        let mut pairs = 0;
        'outer: for f in &mors {
            if let Some(gs) = by_dom.get(&c.obj_key(&c.cod(f))) {
                for g in gs {
                    if pairs >= samples * 8 {
                        break 'outer;
                    }
                    pairs += 1;
                    let gf = c.compose(g, f);
                    let flags = [m.is_we(c, f), m.is_we(c, g), m.is_we(c, &gf)];
                    let count = flags.iter().filter(|&&b| b).count();
                    t.record(count != 2, || format!("f={} g={}", enc(f), enc(g)));
                }
            }
        }
        checks.push(t.finish());
    }

    if options.factorization {
        let mut t = Tally::new("factorization");
        for f in &mors {
            let ok1 = match m.factor_cof_acyfib(c, f) {
                Ok((i, p)) => c.compose(&p, &i) == *f && m.is_cof(c, &i) && m.is_acyclic_fib(c, &p),
                Err(_) => false,
            };
            t.record(ok1, || format!("cof/acyclic-fib factorization of {}", enc(f)));
            let ok2 = match m.factor_acycof_fib(c, f) {
                Ok((i, p)) => c.compose(&p, &i) == *f && m.is_acyclic_cof(c, &i) && m.is_fib(c, &p),
                Err(_) => false,
            };
            t.record(ok2, || format!("acyclic-cof/fib factorization of {}", enc(f)));
        }
        checks.push(t.finish());
    }

    if options.lifting {
        let cofs: Vec<&C::Mor> = mors.iter().filter(|f| m.is_cof(c, f)).collect();
        let acofs: Vec<&C::Mor> = mors.iter().filter(|f| m.is_acyclic_cof(c, f)).collect();
        let fibs: Vec<&C::Mor> = mors.iter().filter(|f| m.is_fib(c, f)).collect();
        let afibs: Vec<&C::Mor> = mors.iter().filter(|f| m.is_acyclic_fib(c, f)).collect();
        let mut t = Tally::new("lifting");
        for (lefts, rights) in [(&cofs, &afibs), (&acofs, &fibs)] {
            let lefts = thin(lefts, 24);
            let rights = thin(rights, 24);
            for i in &lefts {
                for p in &rights {
                    for sq in squares(c, i, p, 8)? {
                        let found = c.lifts(&sq)?.next().is_some();
                        t.record(found, || format!("left={} right={}", enc(i), enc(p)));
                    }
                }
            }
        }
        checks.push(t.finish());
    }

    if options.retracts {
        let mut t = Tally::new("retracts");
        let hs = thin(&mors, 12);
        for f in thin(&mors, 24) {
            for h in &hs {
                let (g, _, _) = coproduct_map(c, &f, h)?;
                let preds: [(&str, fn(&dyn ModelStructure<C>, &C, &C::Mor) -> bool); 3] = [
                    ("cof", |m, c, f| m.is_cof(c, f)),
                    ("fib", |m, c, f| m.is_fib(c, f)),
                    ("we", |m, c, f| m.is_we(c, f)),
                ];
                for (name, pred) in preds {
                    let ok = !pred(m, c, &g) || pred(m, c, &f);
                    t.record(ok, || format!("{name}: {} is a retract of {}", enc(&f), enc(&g)));
                }
            }
        }
        checks.push(t.finish());
    }

    if options.properness {
        let wes: Vec<&C::Mor> = thin(&mors.iter().filter(|f| m.is_we(c, f)).collect::<Vec<_>>(), 32);
        let cofs: Vec<&C::Mor> = thin(&mors.iter().filter(|f| m.is_cof(c, f)).collect::<Vec<_>>(), 32);
        let fibs: Vec<&C::Mor> = thin(&mors.iter().filter(|f| m.is_fib(c, f)).collect::<Vec<_>>(), 32);
        let mut left = Tally::new("left_proper");
        let mut right = Tally::new("right_proper");
        for w in &wes {
            for i in cofs.iter().filter(|i| c.dom(i) == c.dom(w)) {
                let po = pushout(c, i, w)?;
                left.record(m.is_we(c, &po.legs[0]), || format!("we={} cof={}", enc(w), enc(i)));
            }
            for p in fibs.iter().filter(|p| c.cod(p) == c.cod(w)) {
                let pb = pullback(c, p, w)?;
                right.record(m.is_we(c, &pb.legs[0]), || format!("we={} fib={}", enc(w), enc(p)));
            }
        }
        checks.push(left.finish());
        checks.push(right.finish());
    }

    Ok(AxiomReport { ambient: c.name(), structure: m.label(), budget: *budget, checks })
}

/// Commuting squares with the given left and right maps, thinned to `cap`.
pub fn squares<C: Carrier>(c: &C, i: &C::Mor, p: &C::Mor, cap: usize) -> Result<Vec<Square<C::Mor>>> {
    let (a, b, x, y) = (c.dom(i), c.cod(i), c.dom(p), c.cod(p));
    let mut out = Vec::new();
    for u in c.lifts(&c.hom_square(&a, &x))?.take(64) {
        let pu = c.compose(p, &u);
        // v: B → Y with v ∘ i = p ∘ u.
        let ext = Square { left: i.clone(), right: c.to_terminal(&y), top: pu, bottom: c.to_terminal(&b) };
        for v in c.lifts(&ext)?.take(8) {
            out.push(Square { left: i.clone(), right: p.clone(), top: u.clone(), bottom: v });
        }
        if out.len() >= cap * 8 {
            break;
        }
    }
    Ok(thin(&out, cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{ChainCarrier, FinSet, Kind};

    struct NeverWe;

    impl ModelStructure<FinSet> for NeverWe {
        fn label(&self) -> String {
            "never-we".into()
        }
        fn is_cof(&self, c: &FinSet, f: &<FinSet as Carrier>::Mor) -> bool {
            c.native_is_cof(f)
        }
        fn is_fib(&self, c: &FinSet, f: &<FinSet as Carrier>::Mor) -> bool {
            c.native_is_fib(f)
        }
        fn is_we(&self, _c: &FinSet, _f: &<FinSet as Carrier>::Mor) -> bool {
            false
        }
        fn factor_cof_acyfib(&self, c: &FinSet, f: &<FinSet as Carrier>::Mor) -> Result<(<FinSet as Carrier>::Mor, <FinSet as Carrier>::Mor)> {
            c.native_factor_cof_acyfib(f)
        }
        fn factor_acycof_fib(&self, c: &FinSet, f: &<FinSet as Carrier>::Mor) -> Result<(<FinSet as Carrier>::Mor, <FinSet as Carrier>::Mor)> {
            c.native_factor_acycof_fib(f)
        }
        fn generating(&self, _c: &FinSet, _b: &Budget) -> Option<(Vec<<FinSet as Carrier>::Mor>, Vec<<FinSet as Carrier>::Mor>)> {
            None
        }
    }

    #[test]
    fn we_iso_finsets_pass() {
        let r = verify_model_axioms(&FinSet, &Kind::WeIso, &Budget::DEFAULT, AxiomOptions::all()).unwrap();
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn corrupted_structure_fails_with_witness() {
        let r = verify_model_axioms(&FinSet, &NeverWe, &Budget::SMALL, AxiomOptions::default()).unwrap();
        assert!(!r.passed());
        let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.iter().any(|c| c.name == "identities" || c.name == "factorization"));
        assert!(failed.iter().all(|c| c.witness.is_some()));
    }

    #[test]
    fn chain_complexes_small_pass() {
        let c = ChainCarrier::new(2).unwrap();
        let b = Budget::SMALL.with_samples(48);
        let r = verify_model_axioms(&c, &Kind::Native, &b, AxiomOptions::all()).unwrap();
        assert!(r.passed(), "{r:#?}");
    }
}
