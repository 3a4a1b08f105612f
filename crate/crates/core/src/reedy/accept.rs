//! Acceptability of a full subcategory `C0`: matching (left) or latching (right)
//! objects at objects of `C0` agree whether computed in `C0` or in `C`.

use serde::{Deserialize, Serialize};

use crate::ambient::Carrier;
use crate::budget::Budget;
use crate::diagram::{sample_diagrams, Diagram, DiagramDoc, DiagramView};
use crate::error::{Error, Result};
use crate::fincat::CatFunctor;

use super::{ReedyStructure, Slice};

/// Why a side was judged acceptable, or that it was not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "basis", content = "detail", rename_all = "snake_case")]
pub enum Basis {
    /// Structural argument; holds for every diagram.
    Proof(String),
    /// No counterexample among the enumerated diagrams.
    Enumerated,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcceptWitness {
    /// `left` (matching objects) or `right` (latching objects).
    pub side: String,
    pub object: String,
    pub diagram: DiagramDoc,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcceptabilityReport {
    pub c0: Vec<String>,
    pub left: bool,
    pub right: bool,
    pub left_basis: Basis,
    pub right_basis: Basis,
    pub witnesses: Vec<AcceptWitness>,
    pub diagrams_checked: usize,
    pub budget: Budget,
}

/// For each object of the `C0` slice at `alpha0`, its position among the objects of
/// the full slice at `alpha`.
fn embed(incl: &CatFunctor, s0: &Slice, s: &Slice) -> Vec<usize> {
    s0.legs
        .iter()
        .map(|&u0| {
            let u = incl.mor_map[u0];
            s.legs.iter().position(|&v| v == u).expect("C0 slice object lies in the full slice")
        })
        .collect()
}

fn lands_in(s: &Slice, c0: &[bool]) -> bool {
    (0..s.cat.num_objects()).all(|o| c0[s.base_object(o)])
}

fn restricted<C: Carrier>(x: &Diagram<C>, s: &Slice, incl: Option<&CatFunctor>) -> (Vec<C::Obj>, Vec<C::Mor>) {
    let ob = |o: usize| incl.map_or(o, |f| f.obj_map[o]);
    let mo = |k: usize| incl.map_or(k, |f| f.mor_map[k]);
    let entries = (0..s.cat.num_objects()).map(|o| x.entry(ob(s.base_object(o))).clone()).collect();
    let edges = (0..s.cat.num_morphisms()).map(|k| x.edge(mo(s.base_morphism(k))).clone()).collect();
    (entries, edges)
}

/// The comparison `M_α^C X → M_α^{C0} X` (left) or `L_α^{C0} X → L_α^C X` (right), and
/// whether it is invertible.
fn comparison<C: Carrier>(
    c: &C,
    r: &ReedyStructure,
    r0: &ReedyStructure,
    incl: &CatFunctor,
    x: &Diagram<C>,
    alpha0: usize,
    left: bool,
) -> Result<(bool, String)> {
    let alpha = incl.obj_map[alpha0];
    if left {
        let (s, s0) = (r.matching(alpha), r0.matching(alpha0));
        let (e, k) = restricted(x, &s, None);
        let full = c.limit(&s.cat, &e, &k)?;
        let (e0, k0) = restricted(x, &s0, Some(incl));
        let sub = c.limit(&s0.cat, &e0, &k0)?;
        let legs: Vec<C::Mor> = embed(incl, &s0, &s).into_iter().map(|p| full.legs[p].clone()).collect();
        let m = c.limit_mediate(&sub, &full.apex, &legs)?;
        Ok((c.is_iso(&m), format!("{} vs {}", c.obj_key(&full.apex), c.obj_key(&sub.apex))))
    } else {
        let (s, s0) = (r.latching(alpha), r0.latching(alpha0));
        let (e, k) = restricted(x, &s, None);
        let full = c.colimit(&s.cat, &e, &k)?;
        let (e0, k0) = restricted(x, &s0, Some(incl));
        let sub = c.colimit(&s0.cat, &e0, &k0)?;
        let legs: Vec<C::Mor> = embed(incl, &s0, &s).into_iter().map(|p| full.legs[p].clone()).collect();
        let m = c.colimit_mediate(&sub, &full.apex, &legs)?;
        Ok((c.is_iso(&m), format!("{} vs {}", c.obj_key(&sub.apex), c.obj_key(&full.apex))))
    }
}

fn fast_path(r: &ReedyStructure, c0: &[bool], objs: &[usize], left: bool) -> Option<String> {
    if left && r.is_monotone_increasing() {
        return Some("monotone increasing: every matching category is empty".into());
    }
    let all_inside = objs.iter().all(|&a| if left { lands_in(&r.matching(a), c0) } else { lands_in(&r.latching(a), c0) });
    all_inside.then(|| {
        if left {
            "every matching category of an object of C0 lies in C0".into()
        } else {
            "every latching category of an object of C0 lies in C0".into()
        }
    })
}

/// Decides left and right acceptability of `objs`, by a structural argument where one
/// applies and otherwise over a deterministic sample of diagrams.
pub fn check_acceptable<C: Carrier>(
    c: &C,
    r: &ReedyStructure,
    objs: &[usize],
    budget: &Budget,
    seed: u64,
) -> Result<AcceptabilityReport> {
    let (r0, incl) = r.restrict(objs)?;
    let cat = r.cat();
    let c0 = super::mask(cat.num_objects(), objs);
    let names = incl.obj_map.iter().map(|&o| cat.object_name(o).to_string()).collect();
    let mut report = AcceptabilityReport {
        c0: names,
        left: true,
        right: true,
        left_basis: Basis::Enumerated,
        right_basis: Basis::Enumerated,
        witnesses: Vec::new(),
        diagrams_checked: 0,
        budget: *budget,
    };
    let left_fast = fast_path(r, &c0, objs, true);
    let right_fast = fast_path(r, &c0, objs, false);
    if let Some(why) = &left_fast {
        report.left_basis = Basis::Proof(why.clone());
    }
    if let Some(why) = &right_fast {
        report.right_basis = Basis::Proof(why.clone());
    }
    if left_fast.is_some() && right_fast.is_some() {
        return Ok(report);
    }
    let diagrams = sample_diagrams(c, r, budget, seed)?;
    report.diagrams_checked = diagrams.len();
    for (left, fast) in [(true, &left_fast), (false, &right_fast)] {
        if fast.is_some() {
            continue;
        }
        'outer: for x in &diagrams {
            for alpha0 in 0..incl.obj_map.len() {
                let (ok, detail) = comparison(c, r, &r0, &incl, x, alpha0, left)?;
                if !ok {
                    report.witnesses.push(AcceptWitness {
                        side: if left { "left" } else { "right" }.into(),
                        object: cat.object_name(incl.obj_map[alpha0]).to_string(),
                        diagram: x.to_doc(c),
                        detail,
                    });
                    if left {
                        report.left = false;
                        report.left_basis = Basis::Failed;
                    } else {
                        report.right = false;
                        report.right_basis = Basis::Failed;
                    }
                    break 'outer;
                }
            }
        }
    }
    Ok(report)
}

/// Re-evaluates a failure witness; `true` when the comparison is again not invertible.
pub fn verify_acceptability_witness<C: Carrier>(
    c: &C,
    r: &ReedyStructure,
    objs: &[usize],
    w: &AcceptWitness,
) -> Result<bool> {
    let (r0, incl) = r.restrict(objs)?;
    let x = Diagram::from_doc(c, r.cat().clone(), &w.diagram)?;
    let alpha = r.cat().object_ix(&w.object)?;
    let alpha0 = incl
        .obj_map
        .iter()
        .position(|&o| o == alpha)
        .ok_or_else(|| Error::Validation(format!("{} is not in C0", w.object)))?;
    let (ok, _) = comparison(c, r, &r0, &incl, &x, alpha0, w.side == "left")?;
    Ok(!ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::FinSet;
    use crate::reedy::parse_objects;

    fn check(r: &ReedyStructure, objs: &str) -> AcceptabilityReport {
        let o = parse_objects(r.cat(), objs).unwrap();
        check_acceptable(&FinSet, r, &o, &Budget::SMALL.with_samples(24), 11).unwrap()
    }

    #[test]
    fn grid_horn_is_left_acceptable_by_proof() {
        let r = ReedyStructure::grid(1, 1);
        let rep = check(&r, "00,01,10");
        assert!(rep.left);
        assert!(matches!(rep.left_basis, Basis::Proof(_)));
    }

    #[test]
    fn every_subset_of_small_grids_is_left_acceptable() {
        for r in [ReedyStructure::grid(1, 1), ReedyStructure::grid(2, 1)] {
            let n = r.cat().num_objects();
            for bits in 0u32..(1 << n) {
                let objs: Vec<usize> = (0..n).filter(|&i| bits >> i & 1 == 1).collect();
                let rep = check_acceptable(&FinSet, &r, &objs, &Budget::SMALL.with_samples(8), 1).unwrap();
                assert!(rep.left, "{objs:?}");
            }
        }
    }

    #[test]
    fn diagonal_of_square_is_not_right_acceptable() {
        let r = ReedyStructure::grid(1, 1);
        let o = parse_objects(r.cat(), "00,11").unwrap();
        let rep = check_acceptable(&FinSet, &r, &o, &Budget::SMALL.with_samples(24), 11).unwrap();
        assert!(rep.left);
        assert!(!rep.right);
        let w = &rep.witnesses[0];
        assert_eq!(w.object, "11");
        assert!(verify_acceptability_witness(&FinSet, &r, &o, w).unwrap());
    }

    #[test]
    fn simplicial_examples() {
        let r = ReedyStructure::simplex_op(2).unwrap();
        let rep = check(&r, "0,1");
        assert!(rep.left && rep.right);
        let r1 = ReedyStructure::simplex_op(1).unwrap();
        let rep = check(&r1, "0");
        assert!(rep.left && rep.right);
        let o = parse_objects(r1.cat(), "1").unwrap();
        assert!(matches!(check_acceptable(&FinSet, &r1, &o, &Budget::SMALL, 1), Err(Error::Precondition(_))));
    }
}
