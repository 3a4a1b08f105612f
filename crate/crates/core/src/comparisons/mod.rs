//! Comparisons between structures: identity functors between the modified structures,
//! prolongation of Quillen pairs, and the adjunctions among nerve levels.

pub mod nerve;
pub mod quillen;

use serde::Serialize;

use crate::ambient::{Carrier, ModelAssignment};
use crate::budget::Budget;
use crate::diagram::{classify, sample_maps, ClassVector, DiagramMapDoc, Structure};
use crate::error::{Error, Result};
use crate::reedy::ReedyStructure;

pub use nerve::{
    check_nerve_adjunctions, check_simplicial_identities, nerve_level, nerve_structure_map, NerveAdjunctionReport,
    NerveLevel, NerveMap, NervePair, PairCheck,
};
pub use quillen::{check_quillen_prolongation, identity_pair, suspension_pair, AdjointPair, QuillenReport};

#[derive(Clone, Debug, Serialize)]
pub struct ClauseResult {
    pub clause: String,
    pub checked: usize,
    pub passed: bool,
    pub skipped: Option<String>,
    pub witness: Option<DiagramMapDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityComparisonReport {
    pub maps_checked: usize,
    pub clauses: Vec<ClauseResult>,
    pub passed: bool,
}

fn implies(p: bool, q: bool) -> bool {
    !p || q
}

struct Clause {
    result: ClauseResult,
}

impl Clause {
    fn new(name: &str) -> Self {
        Clause { result: ClauseResult { clause: name.into(), checked: 0, passed: true, skipped: None, witness: None } }
    }

    fn skipped(name: &str, why: &str) -> Self {
        let mut c = Self::new(name);
        c.result.skipped = Some(why.into());
        c
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> DiagramMapDoc) {
        if self.result.skipped.is_some() {
            return;
        }
        self.result.checked += 1;
        if !ok && self.result.passed {
            self.result.passed = false;
            self.result.witness = Some(witness());
        }
    }
}

/// On sampled maps over `r`:
/// (a) the identity from the right to the left modified structure preserves fibrations
///     and acyclic fibrations, and both have the same weak equivalences;
/// (b) for `c1 ⊆ c0`, weak equivalences for `c0` are weak equivalences for `c1`, the
///     fibrations agree, and acyclic fibrations for `c0` are acyclic for `c1`;
/// (c) over a monotone increasing `r`, the left structure for `a.lopsided(c0)` and the
///     projective structure for `a` have the same classes.
pub fn check_identity_comparisons<C: Carrier>(
    c: &C,
    r: &ReedyStructure,
    c0: &[bool],
    c1: Option<&[bool]>,
    a: &ModelAssignment<C>,
    budget: &Budget,
    seed: u64,
) -> Result<IdentityComparisonReport> {
    if let Some(c1) = c1 {
        if c1.iter().zip(c0).any(|(&inner, &outer)| inner && !outer) {
            return Err(Error::Precondition("C1 must be contained in C0".into()));
        }
    }
    let maps = sample_maps(c, r, budget, seed)?;
    let monotone = r.is_monotone_increasing();
    let lopsided = a.lopsided(c0);
    let mut same_we = Clause::new("(a) left and right weak equivalences agree");
    let mut right_to_left = Clause::new("(a) right fibrations and acyclic fibrations are left ones");
    let mut change_sub = match c1 {
        Some(_) => Clause::new("(b) shrinking C0 keeps fibrations and weak equivalences"),
        None => Clause::skipped("(b) shrinking C0 keeps fibrations and weak equivalences", "no C1 given"),
    };
    let mut same_increase = if monotone {
        Clause::new("(c) left structure of the lopsided assignment equals the projective structure")
    } else {
        Clause::skipped(
            "(c) left structure of the lopsided assignment equals the projective structure",
            "shape is not monotone increasing",
        )
    };
    for f in &maps {
        let doc = || f.to_doc(c);
        let left = classify(c, r, c0, a, f, Structure::Left)?;
        let right = classify(c, r, c0, a, f, Structure::Right)?;
        same_we.record(left.we == right.we, doc);
        right_to_left.record(implies(right.fib, left.fib) && implies(right.acyclic_fib, left.acyclic_fib), doc);
        if let Some(c1) = c1 {
            let small: ClassVector = classify(c, r, c1, a, f, Structure::Left)?;
            change_sub.record(
                implies(left.we, small.we) && left.fib == small.fib && implies(left.acyclic_fib, small.acyclic_fib),
                doc,
            );
        }
        if monotone {
            let lop = classify(c, r, c0, &lopsided, f, Structure::Left)?;
            let proj = classify(c, r, c0, a, f, Structure::Projective)?;
            same_increase.record(lop.flags() == proj.flags(), doc);
        }
    }
    let clauses: Vec<ClauseResult> = [same_we, right_to_left, change_sub, same_increase].into_iter().map(|c| c.result).collect();
    let passed = clauses.iter().all(|c| c.passed);
    Ok(IdentityComparisonReport { maps_checked: maps.len(), clauses, passed })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ambient::{ChainCarrier, Complex, FinSet, Kind};
    use crate::diagram::{Diagram, DiagramMap};

    fn chain_budget() -> Budget {
        Budget::SMALL.with_dim(2).with_degree(1).with_samples(24)
    }

    #[test]
    fn comparisons_on_grid_and_arrow() {
        let c = Arc::new(ChainCarrier::new(2).unwrap());
        let r = ReedyStructure::grid(1, 1);
        let a = ModelAssignment::constant(c.clone(), Kind::Native, 4);
        let c0 = crate::reedy::mask(4, &crate::reedy::parse_objects(r.cat(), "00,01,10").unwrap());
        let c1 = crate::reedy::mask(4, &[0]);
        let rep = check_identity_comparisons(c.as_ref(), &r, &c0, Some(&c1), &a, &chain_budget(), 2).unwrap();
        assert!(rep.passed, "{:?}", rep.clauses);
        assert!(rep.clauses.iter().all(|cl| cl.skipped.is_none() && cl.checked == rep.maps_checked));
    }

    #[test]
    fn truncated_simplex_op_skips_projective_clause() {
        let r = ReedyStructure::simplex_op(1).unwrap();
        let a = ModelAssignment::constant(Arc::new(FinSet), Kind::WeIso, 2);
        let c0 = crate::reedy::mask(2, &crate::reedy::parse_objects(r.cat(), "0").unwrap());
        let rep = check_identity_comparisons(&FinSet, &r, &c0, None, &a, &Budget::SMALL.with_samples(24), 4).unwrap();
        assert!(rep.passed);
        assert!(rep.clauses[3].skipped.is_some());
    }

    #[test]
    fn unmodified_family_differs_from_projective() {
        // Off C0 the left structure of `a` itself accepts the acyclic cofibration 0 → D¹ as
        // a latching map; the projective structure demands an isomorphism there.
        let c = Arc::new(ChainCarrier::new(2).unwrap());
        let r = ReedyStructure::chain(1);
        let a = ModelAssignment::constant(c.clone(), Kind::Native, 2);
        let zero = Arc::new(Complex::zero());
        let disk = Arc::new(Complex::disk(1));
        let x = Arc::new(Diagram::constant(c.as_ref(), r.cat().clone(), &zero));
        let entries = vec![zero.clone(), disk.clone()];
        let edges = r.cat().morphisms().iter().map(|m| if m.src == m.dst { c.identity(&entries[m.src]) } else { c.from_initial(&disk) }).collect();
        let y = Arc::new(Diagram::new(c.as_ref(), r.cat().clone(), entries, edges).unwrap());
        let f = DiagramMap::new(c.as_ref(), x, y, vec![c.identity(&zero), c.from_initial(&disk)]).unwrap();
        let c0 = [true, false];
        let raw = classify(c.as_ref(), &r, &c0, &a, &f, Structure::Left).unwrap();
        let proj = classify(c.as_ref(), &r, &c0, &a, &f, Structure::Projective).unwrap();
        let lop = classify(c.as_ref(), &r, &c0, &a.lopsided(&c0), &f, Structure::Left).unwrap();
        assert!(raw.cof && !proj.cof);
        assert_eq!(lop.flags(), proj.flags());
    }
}
