//! Finite cardinals and functions between them, with the (injection, surjection)
//! weak factorization system as native structure and every map a weak equivalence.

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;
use serde_json::{json, Value};

use super::{Carrier, Cone, LiftIter, Square};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::FinCategory;

/// Largest (co)limit apex the carrier will build.
const MAX_APEX: usize = 1 << 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FinSet;

/// A function `{0..map.len()} → {0..dst}` given by its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSetMap {
    pub dst: usize,
    pub map: Vec<usize>,
}

impl FinSetMap {
    pub fn new(dst: usize, map: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = map.iter().find(|&&v| v >= dst) {
            return Err(Error::Validation(format!("image {bad} outside target of cardinality {dst}")));
        }
        Ok(FinSetMap { dst, map })
    }

    pub fn src(&self) -> usize {
        self.map.len()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.dst];
        self.map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.dst];
        for &v in &self.map {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }
}

impl FinSet {
    /// `I = {∅ → 1, 2 → 1}`, `J = ∅` for the structure whose weak equivalences are the
    /// bijections.
    pub fn we_iso_generating(&self) -> (Vec<FinSetMap>, Vec<FinSetMap>) {
        (vec![FinSetMap { dst: 1, map: vec![] }, FinSetMap { dst: 1, map: vec![0, 0] }], vec![])
    }
}

/// Odometer over per-position candidate lists, in lexicographic order.
pub(crate) struct Odometer {
    candidates: Vec<Vec<usize>>,
    index: Option<Vec<usize>>,
}

impl Odometer {
    pub(crate) fn new(candidates: Vec<Vec<usize>>) -> Self {
        let index = if candidates.iter().any(|c| c.is_empty()) {
            None
        } else {
            Some(vec![0; candidates.len()])
        };
        Odometer { candidates, index }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.index.take()?;
        let out = cur.iter().zip(&self.candidates).map(|(&i, c)| c[i]).collect();
        let mut next = cur;
        let mut k = next.len();
        while k > 0 {
            k -= 1;
            next[k] += 1;
            if next[k] < self.candidates[k].len() {
                self.index = Some(next);
                break;
            }
            next[k] = 0;
        }
        Some(out)
    }
}

impl Carrier for FinSet {
    type Obj = usize;
    type Mor = FinSetMap;

    fn name(&self) -> String {
        "finset".into()
    }

    fn dom(&self, f: &FinSetMap) -> usize {
        f.src()
    }

    fn cod(&self, f: &FinSetMap) -> usize {
        f.dst
    }

    fn identity(&self, x: &usize) -> FinSetMap {
        FinSetMap { dst: *x, map: (0..*x).collect() }
    }

    fn compose(&self, g: &FinSetMap, f: &FinSetMap) -> FinSetMap {
        assert_eq!(f.dst, g.src(), "finset composition mismatch");
        FinSetMap { dst: g.dst, map: f.map.iter().map(|&x| g.map[x]).collect() }
    }

    fn initial(&self) -> usize {
        0
    }

    fn terminal(&self) -> usize {
        1
    }

    fn from_initial(&self, x: &usize) -> FinSetMap {
        FinSetMap { dst: *x, map: vec![] }
    }

    fn to_terminal(&self, x: &usize) -> FinSetMap {
        FinSetMap { dst: 1, map: vec![0; *x] }
    }

    fn colimit(&self, shape: &FinCategory, entries: &[usize], edges: &[FinSetMap]) -> Result<Cone<usize, FinSetMap>> {
        let mut offsets = Vec::with_capacity(entries.len());
        let mut total = 0;
        for &e in entries {
            offsets.push(total);
            total += e;
        }
        if total > MAX_APEX {
            return Err(Error::budget("finite-set colimit", MAX_APEX));
        }
        let mut uf = UnionFind::<usize>::new(total);
        for (k, md) in shape.morphisms().iter().enumerate() {
            for (x, &y) in edges[k].map.iter().enumerate() {
                uf.union(offsets[md.src] + x, offsets[md.dst] + y);
            }
        }
        // Classes numbered by their smallest element.
        let mut class_of_root: HashMap<usize, usize> = HashMap::new();
        let mut class = vec![0; total];
        for (e, slot) in class.iter_mut().enumerate() {
            let r = uf.find(e);
            let next = class_of_root.len();
            *slot = *class_of_root.entry(r).or_insert(next);
        }
        let apex = class_of_root.len();
        let legs = entries
            .iter()
            .zip(&offsets)
            .map(|(&n, &off)| FinSetMap { dst: apex, map: class[off..off + n].to_vec() })
            .collect();
        Ok(Cone { apex, legs })
    }

    fn colimit_mediate(&self, colim: &Cone<usize, FinSetMap>, target: &usize, legs: &[FinSetMap]) -> Result<FinSetMap> {
        let mut out: Vec<Option<usize>> = vec![None; colim.apex];
        for (leg_in, leg_out) in colim.legs.iter().zip(legs) {
            for (x, &c) in leg_in.map.iter().enumerate() {
                let v = leg_out.map[x];
                match out[c] {
                    Some(w) if w != v => {
                        return Err(Error::Validation("cocone legs do not agree on a colimit class".into()))
                    }
                    _ => out[c] = Some(v),
                }
            }
        }
        let map = out
            .into_iter()
            .map(|v| v.ok_or_else(|| Error::Oracle("colimit class without preimage".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(FinSetMap { dst: *target, map })
    }

    fn limit(&self, shape: &FinCategory, entries: &[usize], edges: &[FinSetMap]) -> Result<Cone<usize, FinSetMap>> {
        let n = entries.len();
        // Constraints checked as soon as both endpoints are assigned.
        let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (k, md) in shape.morphisms().iter().enumerate() {
            if !shape.is_identity(k) {
                checks[md.src.max(md.dst)].push(k);
            }
        }
        let mut tuples: Vec<Vec<usize>> = Vec::new();
        let mut cur = vec![0usize; n];
        fn rec(
            pos: usize,
            entries: &[usize],
            edges: &[FinSetMap],
            shape: &FinCategory,
            checks: &[Vec<usize>],
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) -> Result<()> {
            if pos == entries.len() {
                if out.len() >= MAX_APEX {
                    return Err(Error::budget("finite-set limit", MAX_APEX));
                }
                out.push(cur.clone());
                return Ok(());
            }
            for v in 0..entries[pos] {
                cur[pos] = v;
                let ok = checks[pos].iter().all(|&k| {
                    let md = shape.morphism(k);
                    edges[k].map[cur[md.src]] == cur[md.dst]
                });
                if ok {
                    rec(pos + 1, entries, edges, shape, checks, cur, out)?;
                }
            }
            Ok(())
        }
        rec(0, entries, edges, shape, &checks, &mut cur, &mut tuples)?;
        let apex = tuples.len();
        let legs = (0..n)
            .map(|a| FinSetMap { dst: entries[a], map: tuples.iter().map(|t| t[a]).collect() })
            .collect();
        Ok(Cone { apex, legs })
    }

    fn limit_mediate(&self, lim: &Cone<usize, FinSetMap>, source: &usize, legs: &[FinSetMap]) -> Result<FinSetMap> {
        let index: HashMap<Vec<usize>, usize> = (0..lim.apex)
            .map(|t| (lim.legs.iter().map(|l| l.map[t]).collect(), t))
            .collect();
        let map = (0..*source)
            .map(|y| {
                let tuple: Vec<usize> = legs.iter().map(|l| l.map[y]).collect();
                index
                    .get(&tuple)
                    .copied()
                    .ok_or_else(|| Error::Validation("cone legs do not land in the limit".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinSetMap { dst: lim.apex, map })
    }

    fn inverse(&self, f: &FinSetMap) -> Option<FinSetMap> {
        if f.src() != f.dst || !f.is_injective() {
            return None;
        }
        let mut inv = vec![0; f.dst];
        for (x, &y) in f.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(FinSetMap { dst: f.src(), map: inv })
    }

    fn native_is_cof(&self, f: &FinSetMap) -> bool {
        f.is_injective()
    }

    fn native_is_fib(&self, f: &FinSetMap) -> bool {
        f.is_surjective()
    }

    fn native_is_we(&self, _f: &FinSetMap) -> bool {
        true
    }

    fn native_factor_cof_acyfib(&self, f: &FinSetMap) -> Result<(FinSetMap, FinSetMap)> {
        // A ↪ A ⊔ B ↠ B.
        let a = f.src();
        let i = FinSetMap { dst: a + f.dst, map: (0..a).collect() };
        let mut pm = f.map.clone();
        pm.extend(0..f.dst);
        Ok((i, FinSetMap { dst: f.dst, map: pm }))
    }

    fn native_factor_acycof_fib(&self, f: &FinSetMap) -> Result<(FinSetMap, FinSetMap)> {
        self.native_factor_cof_acyfib(f)
    }

    fn native_generating(&self, _budget: &Budget) -> Option<(Vec<FinSetMap>, Vec<FinSetMap>)> {
        let gen = FinSetMap { dst: 1, map: vec![] };
        Some((vec![gen.clone()], vec![gen]))
    }

    fn we_iso_generating(&self) -> Option<(Vec<FinSetMap>, Vec<FinSetMap>)> {
        Some(FinSet::we_iso_generating(self))
    }

    fn objects(&self, budget: &Budget) -> Result<Vec<usize>> {
        Ok((0..=budget.max_card).collect())
    }

    fn lifts<'a>(&'a self, sq: &Square<FinSetMap>) -> Result<LiftIter<'a, FinSetMap>> {
        let b = sq.left.dst;
        let x = sq.right.src();
        let mut fixed: Vec<Option<usize>> = vec![None; b];
        for (a, &bv) in sq.left.map.iter().enumerate() {
            let want = sq.top.map[a];
            match fixed[bv] {
                Some(w) if w != want => return Ok(Box::new(std::iter::empty())),
                _ => fixed[bv] = Some(want),
            }
        }
        let candidates: Vec<Vec<usize>> = (0..b)
            .map(|e| match fixed[e] {
                Some(v) if sq.right.map[v] == sq.bottom.map[e] => vec![v],
                Some(_) => vec![],
                None => (0..x).filter(|&v| sq.right.map[v] == sq.bottom.map[e]).collect(),
            })
            .collect();
        Ok(Box::new(Odometer::new(candidates).map(move |map| FinSetMap { dst: x, map })))
    }

    fn encode_obj(&self, x: &usize) -> Value {
        json!(x)
    }

    fn encode_mor(&self, f: &FinSetMap) -> Value {
        json!({ "images": f.map, "target": f.dst })
    }

    fn decode_obj(&self, v: &Value) -> Result<usize> {
        v.as_u64()
            .map(|n| n as usize)
            .ok_or_else(|| Error::Format(format!("finite-set object must be a cardinality, got {v}")))
    }

    fn decode_mor(&self, v: &Value) -> Result<FinSetMap> {
        let bad = || Error::Format(format!("finite-set morphism must be {{images, target}}, got {v}"));
        let target = v.get("target").and_then(Value::as_u64).ok_or_else(bad)? as usize;
        let images = v
            .get("images")
            .and_then(Value::as_array)
            .ok_or_else(bad)?
            .iter()
            .map(|x| x.as_u64().map(|n| n as usize).ok_or_else(bad))
            .collect::<Result<Vec<_>>>()?;
        FinSetMap::new(target, images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{Kind, ModelStructure};
    use crate::fincat::span_category;

    fn m(dst: usize, map: &[usize]) -> FinSetMap {
        FinSetMap::new(dst, map.to_vec()).unwrap()
    }

    #[test]
    fn pushout_of_points_over_empty_is_two() {
        let c = FinSet;
        let shape = span_category();
        // Objects "0" (corner), "1", "2"; edges indexed by morphism order.
        let entries = vec![0, 1, 1];
        let edges: Vec<FinSetMap> = shape
            .morphisms()
            .iter()
            .map(|md| if md.src == md.dst { c.identity(&entries[md.src]) } else { m(1, &[]) })
            .collect();
        let cone = c.colimit(&shape, &entries, &edges).unwrap();
        assert_eq!(cone.apex, 2);
    }

    #[test]
    fn factorization_of_constant_map() {
        let c = FinSet;
        let f = m(1, &[0, 0]);
        let (i, p) = c.native_factor_cof_acyfib(&f).unwrap();
        assert_eq!(c.compose(&p, &i), f);
        assert!(i.is_injective() && p.is_surjective());
        assert_eq!(i.dst, 3);
    }

    #[test]
    fn hom_counts() {
        let c = FinSet;
        assert_eq!(c.homs(&2, &2, 100).unwrap().len(), 4);
        assert_eq!(c.homs(&3, &2, 100).unwrap().len(), 8);
        assert_eq!(c.homs(&0, &0, 100).unwrap().len(), 1);
        assert_eq!(c.homs(&1, &0, 100).unwrap().len(), 0);
        let h = c.homs(&2, &2, 100).unwrap();
        let mut sorted = h.clone();
        sorted.sort();
        assert_eq!(h, sorted);
    }

    #[test]
    fn trivial_structures_are_definitional() {
        let c = FinSet;
        let swap = m(2, &[1, 0]);
        let incl = m(2, &[0]);
        assert!(Kind::CofTrivial.is_cof(&c, &swap));
        assert!(!Kind::CofTrivial.is_cof(&c, &incl));
        assert!(!Kind::WeIso.is_we(&c, &m(1, &[0, 0])));
        let f = m(2, &[0, 0, 1]);
        let (i, p) = Kind::CofTrivial.factor_cof_acyfib(&c, &f).unwrap();
        assert_eq!(i, c.identity(&3));
        assert_eq!(p, f);
        assert!(Kind::CofTrivial.is_fib(&c, &p) && Kind::CofTrivial.is_we(&c, &p));
    }

    #[test]
    fn lift_in_arrow_square() {
        // {a} ↪ {a, b} against {x1, x2} ↠ {y}: two lifts.
        let c = FinSet;
        let sq = Square { left: m(2, &[0]), right: m(1, &[0, 0]), top: m(2, &[0]), bottom: m(1, &[0, 0]) };
        let lifts: Vec<_> = c.lifts(&sq).unwrap().collect();
        assert_eq!(lifts, vec![m(2, &[0, 0]), m(2, &[0, 1])]);
    }
}
