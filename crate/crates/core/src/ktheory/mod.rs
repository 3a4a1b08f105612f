//! Waldhausen subcategories of chain complexes, Thomason's `T_•` levels and the
//! bisimplicial sets built from cofibrant grid diagrams.

pub mod bisimplicial;
pub mod code;
pub mod grid;
pub mod quillen;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ambient::{pushout, Carrier, ChainCarrier, Complex, Kind, ModelAssignment};
use crate::budget::Budget;
use crate::comparisons::nerve::{chain_shape, from_chain};
use crate::diagram::{classify, latching_data, Diagram, DiagramMap, Structure};
use crate::error::{Error, Result};
use crate::reedy::ReedyStructure;

pub use bisimplicial::{build_bisimplicial, compare_bisimplicial, BisimplicialSet, Comparison, Pipeline};
pub use code::GridCode;
pub use grid::{Direction, GridOp};
pub use quillen::{check_structure_maps_on, check_structure_maps_quillen, verify_structure_witness, StructureMapReport, StructureWitness};

/// Membership predicates for `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum USelector {
    /// Complexes concentrated in degree 0.
    Deg0,
    /// Complexes concentrated in degree 0 of dimension at most `k`.
    Deg0Dim(usize),
    ZeroOnly,
}

impl USelector {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "deg0-ch" => Ok(USelector::Deg0),
            "zero-only" => Ok(USelector::ZeroOnly),
            other => other
                .strip_prefix("deg0-ch-dim<=")
                .and_then(|k| k.parse().ok())
                .map(USelector::Deg0Dim)
                .ok_or_else(|| Error::Format(format!("unknown U selector `{other}` (expected deg0-ch|deg0-ch-dim<=k|zero-only)"))),
        }
    }

    pub fn render(&self) -> String {
        match self {
            USelector::Deg0 => "deg0-ch".into(),
            USelector::Deg0Dim(k) => format!("deg0-ch-dim<={k}"),
            USelector::ZeroOnly => "zero-only".into(),
        }
    }

    pub fn contains(&self, x: &Complex) -> bool {
        match self {
            USelector::Deg0 => x.is_concentrated_in_degree_zero(),
            USelector::Deg0Dim(k) => x.is_concentrated_in_degree_zero() && x.total_dim() <= *k,
            USelector::ZeroOnly => x.is_empty(),
        }
    }
}

/// A full subcategory `U` of chain complexes over `F_p`, enumerated within a budget.
#[derive(Clone, Debug)]
pub struct WaldhausenSubcat {
    pub carrier: ChainCarrier,
    pub selector: USelector,
}

impl WaldhausenSubcat {
    pub fn new(carrier: ChainCarrier, selector: USelector) -> Self {
        WaldhausenSubcat { carrier, selector }
    }

    pub fn contains(&self, x: &Complex) -> bool {
        self.selector.contains(x)
    }

    /// Members in normal form, smallest first. An unbounded `U` is cut at `budget.max_dim`;
    /// a bound above it is a budget error rather than a silent truncation.
    pub fn members(&self, budget: &Budget) -> Result<Vec<Arc<Complex>>> {
        let dim = match self.selector {
            USelector::Deg0Dim(k) if k > budget.max_dim => return Err(Error::budget("U member dimension", budget.max_dim)),
            USelector::Deg0Dim(k) => k,
            _ => budget.max_dim,
        };
        let out: Vec<_> = self
            .carrier
            .normal_forms(dim, 0)
            .into_iter()
            .filter(|x| self.contains(x))
            .map(Arc::new)
            .collect();
        if out.len() > budget.max_objects {
            return Err(Error::budget("U enumeration", budget.max_objects));
        }
        Ok(out)
    }

    pub fn zero(&self) -> Arc<Complex> {
        self.carrier.initial()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WaldhausenViolation {
    pub check: String,
    pub witness: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct WaldhausenReport {
    pub selector: String,
    pub members: usize,
    pub spans_checked: usize,
    pub passed: bool,
    pub violations: Vec<WaldhausenViolation>,
}

/// Pointedness, cofibrancy of members, and closure under pushouts of spans with at least
/// one cofibration leg, over the enumerated members.
pub fn waldhausen_check(u: &WaldhausenSubcat, budget: &Budget) -> Result<WaldhausenReport> {
    let c = &u.carrier;
    let members = u.members(budget)?;
    let mut violations = Vec::new();
    let zero = u.zero();
    if !u.contains(&zero) || c.initial() != c.terminal() {
        violations.push(WaldhausenViolation { check: "pointed".into(), witness: c.encode_obj(&zero) });
    }
    if let Some(x) = members.iter().find(|x| !c.native_is_cof(&c.from_initial(x))) {
        violations.push(WaldhausenViolation { check: "cofibrant".into(), witness: c.encode_obj(x) });
    }
    let mut spans = 0;
    'spans: for a in &members {
        let outs: Vec<_> = members
            .iter()
            .map(|b| c.homs(a, b, budget.max_homs))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        for f in &outs {
            for g in &outs {
                if !c.native_is_cof(f) && !c.native_is_cof(g) {
                    continue;
                }
                spans += 1;
                let po = pushout(c, f, g)?;
                if !u.contains(&po.apex) {
                    violations.push(WaldhausenViolation {
                        check: "pushout closure".into(),
                        witness: json!({
                            "f": c.encode_mor(f),
                            "g": c.encode_mor(g),
                            "pushout": c.encode_obj(&po.apex),
                        }),
                    });
                    break 'spans;
                }
            }
        }
    }
    Ok(WaldhausenReport {
        selector: u.selector.render(),
        members: members.len(),
        spans_checked: spans,
        passed: violations.is_empty(),
        violations,
    })
}

/// `T_n U`: chains of `n` cofibrations between members of `U`, with Thomason's classes.
pub struct TLevel {
    pub n: usize,
    pub reedy: ReedyStructure,
    pub objects: Vec<Arc<Diagram<ChainCarrier>>>,
    assignment: ModelAssignment<ChainCarrier>,
    c0: Vec<bool>,
}

pub fn t_level(u: &WaldhausenSubcat, n: usize, budget: &Budget) -> Result<TLevel> {
    let c = &u.carrier;
    let members = u.members(budget)?;
    let mut chains: Vec<(Vec<Arc<Complex>>, Vec<_>)> = members.iter().map(|x| (vec![x.clone()], Vec::new())).collect();
    for _ in 0..n {
        let mut next = Vec::new();
        for (xs, fs) in &chains {
            let last = xs.last().expect("nonempty");
            for y in &members {
                for f in c.homs(last, y, budget.max_homs)?.into_iter().filter(|f| c.native_is_cof(f)) {
                    let (mut xs2, mut fs2) = (xs.clone(), fs.clone());
                    xs2.push(y.clone());
                    fs2.push(f);
                    next.push((xs2, fs2));
                }
            }
            if next.len() > budget.max_objects {
                return Err(Error::budget(format!("T_{n} enumeration"), budget.max_objects));
            }
        }
        chains = next;
    }
    let shape = chain_shape(n);
    let objects = chains
        .into_iter()
        .map(|(xs, fs)| from_chain(c, &shape, xs, &fs).map(Arc::new))
        .collect::<Result<_>>()?;
    let mut c0 = vec![false; n + 1];
    c0[0] = true;
    Ok(TLevel {
        n,
        reedy: ReedyStructure::chain(n),
        objects,
        assignment: ModelAssignment::constant(Arc::new(c.clone()), Kind::Native, n + 1),
        c0,
    })
}

impl TLevel {
    /// `w`: every latching map above degree 0 is a weak equivalence.
    pub fn is_w(&self, c: &ChainCarrier, f: &DiagramMap<ChainCarrier>) -> Result<bool> {
        for i in 1..=self.n {
            if !c.native_is_we(&latching_data(c, &self.reedy, f, i)?.latch) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `w̄`: the left modified cofibrations for `C0 = {0}`.
    pub fn is_wbar(&self, c: &ChainCarrier, f: &DiagramMap<ChainCarrier>) -> Result<bool> {
        Ok(classify(c, &self.reedy, &self.c0, &self.assignment, f, Structure::Left)?.cof)
    }

    /// Every `w̄` map out of `x` with target in `T_n U`, built from a cofibration in degree
    /// 0 and an isomorphism out of each relative latching object above it.
    pub fn wbar_maps_from(
        &self,
        u: &WaldhausenSubcat,
        x: &Arc<Diagram<ChainCarrier>>,
        budget: &Budget,
    ) -> Result<Vec<DiagramMap<ChainCarrier>>> {
        let c = &u.carrier;
        let members = u.members(budget)?;
        let steps = crate::comparisons::nerve::steps(x);
        let mut partial: Vec<(Vec<Arc<Complex>>, Vec<_>, Vec<_>)> = Vec::new();
        for y0 in &members {
            for f0 in c.homs(&x.entries[0], y0, budget.max_homs)? {
                if c.native_is_cof(&f0) {
                    partial.push((vec![y0.clone()], Vec::new(), vec![f0]));
                }
            }
        }
        for j in 1..=self.n {
            let mut next = Vec::new();
            for (ys, edges, comps) in &partial {
                let po = pushout(c, &comps[j - 1], &steps[j - 1])?;
                for y in &members {
                    for iso in c.homs(&po.apex, y, budget.max_homs)?.into_iter().filter(|h| c.is_iso(h)) {
                        let (mut ys2, mut e2, mut c2) = (ys.clone(), edges.clone(), comps.clone());
                        ys2.push(y.clone());
                        e2.push(c.compose(&iso, &po.legs[0]));
                        c2.push(c.compose(&iso, &po.legs[1]));
                        next.push((ys2, e2, c2));
                    }
                }
            }
            partial = next;
        }
        let shape = chain_shape(self.n);
        partial
            .into_iter()
            .map(|(ys, edges, comps)| {
                let y = Arc::new(from_chain(c, &shape, ys, &edges)?);
                DiagramMap::new(c, x.clone(), y, comps)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::all_maps;

    fn f2() -> ChainCarrier {
        ChainCarrier::new(2).unwrap()
    }

    fn dims(k: usize) -> Budget {
        Budget::SMALL.with_dim(k).with_degree(0)
    }

    #[test]
    fn selectors_round_trip() {
        for s in ["deg0-ch", "deg0-ch-dim<=2", "zero-only"] {
            assert_eq!(USelector::parse(s).unwrap().render(), s);
        }
        assert!(USelector::parse("deg1").is_err());
    }

    #[test]
    fn waldhausen_examples() {
        let rep = waldhausen_check(&WaldhausenSubcat::new(f2(), USelector::Deg0), &dims(2)).unwrap();
        assert!(rep.passed, "{:?}", rep.violations);
        let rep = waldhausen_check(&WaldhausenSubcat::new(f2(), USelector::Deg0Dim(1)), &dims(2)).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.violations[0].check, "pushout closure");
        assert_eq!(rep.violations[0].witness["pushout"], f2().encode_obj(&Arc::new(Complex::degree_zero(2))));
        let rep = waldhausen_check(&WaldhausenSubcat::new(f2(), USelector::ZeroOnly), &dims(2)).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.members, 1);
    }

    #[test]
    fn t_level_counts() {
        let u = WaldhausenSubcat::new(f2(), USelector::Deg0Dim(2));
        assert_eq!(t_level(&u, 0, &dims(2)).unwrap().objects.len(), 3);
        // Monomorphisms F2^a → F2^b, a ≤ b ≤ 2: 1 + 1 + 1 + 1 + 3 + 6.
        assert_eq!(t_level(&u, 1, &dims(2)).unwrap().objects.len(), 13);
        assert_eq!(t_level(&u, 2, &dims(2)).unwrap().objects.len(), 71);
    }

    #[test]
    fn wbar_maps_match_brute_force_and_lie_in_w() {
        let c = f2();
        let u = WaldhausenSubcat::new(c.clone(), USelector::Deg0Dim(2));
        let b = dims(2);
        let t = t_level(&u, 1, &b).unwrap();
        for x in &t.objects {
            let built: Vec<String> = t.wbar_maps_from(&u, x, &b).unwrap().iter().map(|f| f.key(&c)).collect();
            let mut brute = Vec::new();
            for y in &t.objects {
                for f in all_maps(&c, x, y, 1 << 12).unwrap() {
                    if t.is_wbar(&c, &f).unwrap() {
                        assert!(t.is_w(&c, &f).unwrap());
                        brute.push(f.key(&c));
                    }
                }
            }
            let (mut a, mut bb) = (built, brute);
            a.sort();
            bb.sort();
            assert_eq!(a, bb);
        }
    }

    #[test]
    fn w_is_closed_under_composition() {
        let c = f2();
        let u = WaldhausenSubcat::new(c.clone(), USelector::Deg0Dim(1));
        let b = dims(1);
        let t = t_level(&u, 1, &b).unwrap();
        let mut maps = Vec::new();
        for x in &t.objects {
            for y in &t.objects {
                maps.extend(all_maps(&c, x, y, 1 << 10).unwrap().into_iter().filter(|f| t.is_w(&c, f).unwrap()));
            }
        }
        for f in &maps {
            for g in maps.iter().filter(|g| g.source == f.target) {
                assert!(t.is_w(&c, &g.after(&c, f)).unwrap());
            }
        }
    }
}
