//! Reedy structures on finite categories: validation, the unique factorization
//! table, latching and matching categories, and restriction to full subcategories.

mod accept;
mod compat;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{
    full_subcategory, grid_category, simplex_op_theta, truncated_simplex_op, CatFunctor, CategoryDoc,
    FinCategory,
};

pub use accept::{check_acceptable, verify_acceptability_witness, AcceptWitness, AcceptabilityReport, Basis};
pub use compat::{check_compat, class_inclusion, ClassName, CompatReport, CompatViolation, Side};

/// A latching or matching category at one object, with its forgetful data.
#[derive(Clone, Debug)]
pub struct Slice {
    pub cat: Arc<FinCategory>,
    /// Forgetful functor to the base category.
    pub forget: CatFunctor,
    /// For each slice object, the base morphism it names (`β → α` or `α → γ`).
    pub legs: Vec<usize>,
}

impl Slice {
    pub fn is_empty(&self) -> bool {
        self.legs.is_empty()
    }

    /// Base object underlying slice object `o`.
    pub fn base_object(&self, o: usize) -> usize {
        self.forget.obj_map[o]
    }

    /// Base morphism underlying slice morphism `k`.
    pub fn base_morphism(&self, k: usize) -> usize {
        self.forget.mor_map[k]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: String,
    pub morphisms: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReedyReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

/// Exhaustive check of the Reedy axioms for the given degree and classes.
pub fn check_reedy(cat: &FinCategory, degree: &[usize], plus: &[bool], minus: &[bool]) -> ReedyReport {
    let mut violations = Vec::new();
    let mut push = |kind: &str, mors: Vec<usize>, detail: String| {
        violations.push(Violation {
            kind: kind.into(),
            morphisms: mors.iter().map(|&k| cat.morphism_id(k).to_string()).collect(),
            detail,
        });
    };
    let n = cat.num_objects();
    let m = cat.num_morphisms();
    if degree.len() != n || plus.len() != m || minus.len() != m {
        push("shape", vec![], "degree or class data does not match the category".into());
        return ReedyReport { passed: false, violations };
    }
    if n > 0 && !degree.contains(&0) {
        push("no_degree_zero_object", vec![], "no object has degree 0".into());
    }
    for k in 0..m {
        let (s, d) = (degree[cat.src(k)], degree[cat.dst(k)]);
        if cat.is_identity(k) {
            if !plus[k] || !minus[k] {
                push("identity_missing", vec![k], "identities belong to both classes".into());
            }
            continue;
        }
        if plus[k] && d <= s {
            push("plus_not_raising", vec![k], format!("degree {s} -> {d}"));
        }
        if minus[k] && d >= s {
            push("minus_not_lowering", vec![k], format!("degree {s} -> {d}"));
        }
    }
    for g in 0..m {
        for f in cat.homs_into(cat.src(g)) {
            let gf = cat.compose_ix(g, f);
            if plus[g] && plus[f] && !plus[gf] {
                push("plus_not_closed", vec![g, f], format!("composite {} is not plus", cat.morphism_id(gf)));
            }
            if minus[g] && minus[f] && !minus[gf] {
                push("minus_not_closed", vec![g, f], format!("composite {} is not minus", cat.morphism_id(gf)));
            }
        }
    }
    for f in 0..m {
        let found = factorizations(cat, plus, minus, f);
        if found.len() != 1 {
            let mut mors = vec![f];
            for (p, g) in &found {
                mors.push(*p);
                mors.push(*g);
            }
            push("factorization", mors, format!("{} minus-then-plus factorizations", found.len()));
        }
    }
    ReedyReport { passed: violations.is_empty(), violations }
}

fn factorizations(cat: &FinCategory, plus: &[bool], minus: &[bool], f: usize) -> Vec<(usize, usize)> {
    let (a, b) = (cat.src(f), cat.dst(f));
    let mut out = Vec::new();
    for p in cat.homs_from(a) {
        if !minus[p] {
            continue;
        }
        for &g in cat.hom(cat.dst(p), b) {
            if plus[g] && cat.compose_ix(g, p) == f {
                out.push((p, g));
            }
        }
    }
    out
}

pub struct ReedyStructure {
    cat: Arc<FinCategory>,
    degree: Vec<usize>,
    plus: Vec<bool>,
    minus: Vec<bool>,
    /// `(p, g)` with `f = g ∘ p`, `p` minus, `g` plus.
    factor: Vec<(usize, usize)>,
    latching: Vec<OnceLock<Arc<Slice>>>,
    matching: Vec<OnceLock<Arc<Slice>>>,
}

impl Clone for ReedyStructure {
    fn clone(&self) -> Self {
        // Slices are rebuilt lazily; they are cheap to recompute.
        ReedyStructure::assemble(self.cat.clone(), self.degree.clone(), self.plus.clone(), self.minus.clone(), self.factor.clone())
    }
}

impl std::fmt::Debug for ReedyStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReedyStructure").field("objects", &self.cat.objects()).field("degree", &self.degree).finish()
    }
}

impl PartialEq for ReedyStructure {
    fn eq(&self, other: &Self) -> bool {
        self.cat == other.cat && self.degree == other.degree && self.plus == other.plus && self.minus == other.minus
    }
}

impl ReedyStructure {
    pub fn new(cat: Arc<FinCategory>, degree: Vec<usize>, plus: Vec<bool>, minus: Vec<bool>) -> Result<Self> {
        let report = check_reedy(&cat, &degree, &plus, &minus);
        if !report.passed {
            let first: Vec<String> = report
                .violations
                .iter()
                .take(3)
                .map(|v| format!("{} [{}] {}", v.kind, v.morphisms.join(", "), v.detail))
                .collect();
            return Err(Error::Validation(format!("not a Reedy structure: {}", first.join("; "))));
        }
        let factor = (0..cat.num_morphisms()).map(|f| factorizations(&cat, &plus, &minus, f)[0]).collect();
        Ok(Self::assemble(cat, degree, plus, minus, factor))
    }

    fn assemble(cat: Arc<FinCategory>, degree: Vec<usize>, plus: Vec<bool>, minus: Vec<bool>, factor: Vec<(usize, usize)>) -> Self {
        let n = cat.num_objects();
        ReedyStructure {
            cat,
            degree,
            plus,
            minus,
            factor,
            latching: (0..n).map(|_| OnceLock::new()).collect(),
            matching: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    /// Every morphism raises degree: `C⁺ = C`, `C⁻` discrete.
    pub fn monotone_increasing(cat: Arc<FinCategory>, degree: Vec<usize>) -> Result<Self> {
        let m = cat.num_morphisms();
        let minus = (0..m).map(|k| cat.is_identity(k)).collect();
        Self::new(cat, degree, vec![true; m], minus)
    }

    /// `[m] × [n]` with degree the sum of the indices.
    pub fn grid(m: usize, n: usize) -> Self {
        let cat = Arc::new(grid_category(m, n));
        let degree = cat.objects().iter().map(|o| crate::fincat::grid_coords(o)).map(|(i, j)| i + j).collect();
        Self::monotone_increasing(cat, degree).expect("grids are Reedy")
    }

    /// `[n]` with degree the identity.
    pub fn chain(n: usize) -> Self {
        let cat = Arc::new(crate::fincat::chain_category(n));
        let degree = cat.objects().iter().map(|o| o.parse::<usize>().expect("numeric")).collect();
        Self::monotone_increasing(cat, degree).expect("chains are Reedy")
    }

    /// Truncated `Δ^op` with plus = degeneracies (surjective `θ`) and minus = faces
    /// (injective `θ`).
    pub fn simplex_op(truncation: usize) -> Result<Self> {
        let cat = Arc::new(truncated_simplex_op(truncation)?);
        let degree: Vec<usize> = cat.objects().iter().map(|o| o.parse::<usize>().expect("numeric")).collect();
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for md in cat.morphisms() {
            let n = degree[md.src];
            let theta = simplex_op_theta(&md.id, degree[md.dst]);
            let injective = theta.windows(2).all(|w| w[0] < w[1]);
            let surjective = (0..=n).all(|v| theta.contains(&v));
            plus.push(surjective);
            minus.push(injective);
        }
        Self::new(cat, degree, plus, minus)
    }

    pub fn cat(&self) -> &Arc<FinCategory> {
        &self.cat
    }

    pub fn degree(&self, o: usize) -> usize {
        self.degree[o]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    pub fn is_plus(&self, k: usize) -> bool {
        self.plus[k]
    }

    pub fn is_minus(&self, k: usize) -> bool {
        self.minus[k]
    }

    /// `(p, g)` with `k = g ∘ p`.
    pub fn factor(&self, k: usize) -> (usize, usize) {
        self.factor[k]
    }

    pub fn is_monotone_increasing(&self) -> bool {
        self.minus.iter().enumerate().all(|(k, &m)| !m || self.cat.is_identity(k))
    }

    /// Objects in `(degree, index)` order.
    pub fn objects_by_degree(&self) -> Vec<usize> {
        let mut objs: Vec<usize> = (0..self.cat.num_objects()).collect();
        objs.sort_by_key(|&o| (self.degree[o], o));
        objs
    }

    pub fn objects_of_degree(&self, n: usize) -> Vec<usize> {
        (0..self.cat.num_objects()).filter(|&o| self.degree[o] == n).collect()
    }

    pub fn latching(&self, alpha: usize) -> Arc<Slice> {
        self.latching[alpha].get_or_init(|| Arc::new(self.build_slice(alpha, true))).clone()
    }

    pub fn matching(&self, alpha: usize) -> Arc<Slice> {
        self.matching[alpha].get_or_init(|| Arc::new(self.build_slice(alpha, false))).clone()
    }

    /// Latching category by object name.
    pub fn latching_category(&self, alpha: &str) -> Result<Arc<Slice>> {
        Ok(self.latching(self.cat.object_ix(alpha)?))
    }

    pub fn matching_category(&self, alpha: &str) -> Result<Arc<Slice>> {
        Ok(self.matching(self.cat.object_ix(alpha)?))
    }

    fn build_slice(&self, alpha: usize, latching: bool) -> Slice {
        let c = &self.cat;
        let legs: Vec<usize> = if latching {
            c.homs_into(alpha).into_iter().filter(|&u| self.plus[u] && !c.is_identity(u)).collect()
        } else {
            c.homs_from(alpha).into_iter().filter(|&u| self.minus[u] && !c.is_identity(u)).collect()
        };
        let other = |u: usize| if latching { c.src(u) } else { c.dst(u) };
        let names: Vec<String> = legs.iter().map(|&u| c.morphism_id(u).to_string()).collect();
        let mut arrows = Vec::new();
        for &u in &legs {
            for &v in &legs {
                let (a, b) = (other(u), other(v));
                for &w in c.hom(a, b) {
                    let class = if latching { self.plus[w] } else { self.minus[w] };
                    if !class || c.is_identity(w) {
                        continue;
                    }
                    // Latching: v ∘ w = u. Matching: w ∘ u = v.
                    let ok = if latching { c.compose_ix(v, w) == u } else { c.compose_ix(w, u) == v };
                    if ok {
                        arrows.push((
                            format!("{}|{}|{}", c.morphism_id(u), c.morphism_id(w), c.morphism_id(v)),
                            c.morphism_id(u).to_string(),
                            c.morphism_id(v).to_string(),
                            w,
                        ));
                    }
                }
            }
        }
        let ix_of = |name: &str| c.morphism_ix(name).expect("slice object is a base morphism");
        let sub = FinCategory::concrete(
            names,
            arrows,
            |o| c.identity(other(ix_of(o))),
            |g, f| c.compose_ix(*g, *f),
        )
        .expect("slice categories are categories");
        let sub = Arc::new(sub);
        let legs: Vec<usize> = sub.objects().iter().map(|o| ix_of(o)).collect();
        let obj_map = legs.iter().map(|&u| other(u)).collect();
        let mor_map = sub
            .morphisms()
            .iter()
            .map(|md| {
                if sub.is_identity(sub.morphism_ix(&md.id).expect("own id")) {
                    c.identity(other(legs[md.src]))
                } else {
                    let w = md.id.split('|').nth(1).expect("slice arrow id");
                    ix_of(w)
                }
            })
            .collect();
        let forget = CatFunctor::new(sub.clone(), c.clone(), obj_map, mor_map).expect("forgetful functor");
        Slice { cat: sub, forget, legs }
    }

    /// The inherited structure on the full subcategory spanned by `objs`.
    pub fn restrict(&self, objs: &[usize]) -> Result<(ReedyStructure, CatFunctor)> {
        let names: Vec<String> = objs.iter().map(|&o| self.cat.object_name(o).to_string()).collect();
        let (sub, incl) = full_subcategory(&self.cat, &names)?;
        let degree: Vec<usize> = incl.obj_map.iter().map(|&o| self.degree[o]).collect();
        let plus: Vec<bool> = incl.mor_map.iter().map(|&k| self.plus[k]).collect();
        let minus: Vec<bool> = incl.mor_map.iter().map(|&k| self.minus[k]).collect();
        let report = check_reedy(&sub, &degree, &plus, &minus);
        // The restricted degree function need not reach 0; that alone is not a defect here.
        if let Some(v) = report.violations.iter().find(|v| v.kind != "no_degree_zero_object") {
            return Err(Error::Precondition(format!(
                "full subcategory on {{{}}} does not inherit a Reedy structure: {} [{}]",
                names.join(","),
                v.kind,
                v.morphisms.join(", ")
            )));
        }
        let factor = (0..sub.num_morphisms()).map(|f| factorizations(&sub, &plus, &minus, f)[0]).collect();
        Ok((Self::assemble(sub, degree, plus, minus, factor), incl))
    }

    /// The full subcategory `F_n C` of objects of degree at most `n`.
    pub fn skeleton(&self, n: usize) -> Result<(ReedyStructure, CatFunctor)> {
        let objs: Vec<usize> = (0..self.cat.num_objects()).filter(|&o| self.degree[o] <= n).collect();
        self.restrict(&objs)
    }

    /// The opposite Reedy structure: plus and minus exchanged.
    pub fn opposite(&self) -> ReedyStructure {
        let cat = Arc::new(crate::fincat::opposite(&self.cat));
        let factor = self.factor.iter().map(|&(p, g)| (g, p)).collect();
        Self::assemble(cat, self.degree.clone(), self.minus.clone(), self.plus.clone(), factor)
    }

    pub fn to_doc(&self) -> ReedyDoc {
        let c = &self.cat;
        let ids = |class: &[bool]| {
            (0..c.num_morphisms())
                .filter(|&k| class[k] && !c.is_identity(k))
                .map(|k| c.morphism_id(k).to_string())
                .collect()
        };
        ReedyDoc {
            category: c.to_doc(),
            degree: (0..c.num_objects()).map(|o| (c.object_name(o).to_string(), self.degree[o])).collect(),
            minus: ids(&self.minus),
            plus: ids(&self.plus),
        }
    }

    pub fn from_doc(doc: &ReedyDoc) -> Result<Self> {
        let cat = Arc::new(FinCategory::from_doc(&doc.category)?);
        let mut degree = Vec::new();
        for o in cat.objects() {
            degree.push(*doc.degree.get(o).ok_or_else(|| Error::Format(format!("no degree for object `{o}`")))?);
        }
        if let Some(extra) = doc.degree.keys().find(|k| cat.object_ix(k).is_err()) {
            return Err(Error::UnknownObject(extra.clone()));
        }
        let class = |ids: &[String]| -> Result<Vec<bool>> {
            let mut v: Vec<bool> = (0..cat.num_morphisms()).map(|k| cat.is_identity(k)).collect();
            for id in ids {
                v[cat.morphism_ix(id)?] = true;
            }
            Ok(v)
        };
        let plus = class(&doc.plus)?;
        let minus = class(&doc.minus)?;
        Self::new(cat, degree, plus, minus)
    }
}

/// Text form: a category document plus degrees and the non-identity plus/minus ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReedyDoc {
    #[serde(flatten)]
    pub category: CategoryDoc,
    pub degree: BTreeMap<String, usize>,
    #[serde(default)]
    pub minus: Vec<String>,
    #[serde(default)]
    pub plus: Vec<String>,
}

impl ReedyDoc {
    /// Report form of `check_reedy` on a document, without requiring it to pass.
    pub fn check(&self) -> Result<ReedyReport> {
        let cat = FinCategory::from_doc(&self.category)?;
        let mut degree = Vec::new();
        for o in cat.objects() {
            degree.push(*self.degree.get(o).ok_or_else(|| Error::Format(format!("no degree for object `{o}`")))?);
        }
        let mut plus: Vec<bool> = (0..cat.num_morphisms()).map(|k| cat.is_identity(k)).collect();
        let mut minus = plus.clone();
        for id in &self.plus {
            plus[cat.morphism_ix(id)?] = true;
        }
        for id in &self.minus {
            minus[cat.morphism_ix(id)?] = true;
        }
        Ok(check_reedy(&cat, &degree, &plus, &minus))
    }
}

/// Parses a comma-separated object list into sorted indices.
pub fn parse_objects(cat: &FinCategory, list: &str) -> Result<Vec<usize>> {
    let mut out = BTreeSet::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        out.insert(cat.object_ix(name)?);
    }
    Ok(out.into_iter().collect())
}

/// Membership mask for an object subset.
pub fn mask(n: usize, objs: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &o in objs {
        m[o] = true;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_passes_and_constant_degree_fails() {
        let r = ReedyStructure::grid(1, 1);
        let report = check_reedy(r.cat(), r.degrees(), &r.plus, &r.minus);
        assert!(report.passed);
        let zero = vec![0; 4];
        let report = check_reedy(r.cat(), &zero, &r.plus, &r.minus);
        assert!(!report.passed);
        assert!(report.violations.iter().any(|v| v.kind == "plus_not_raising"));
    }

    #[test]
    fn simplex_op_two_is_reedy() {
        let r = ReedyStructure::simplex_op(2).unwrap();
        assert_eq!(r.max_degree(), 2);
        assert!(!r.is_monotone_increasing());
    }

    #[test]
    fn latching_of_grid_corner() {
        let r = ReedyStructure::grid(1, 1);
        let s = r.latching_category("11").unwrap();
        assert_eq!(s.cat.num_objects(), 3);
        assert_eq!(s.cat.num_morphisms(), 5);
        assert!(r.latching_category("00").unwrap().is_empty());
        for o in 0..s.cat.num_objects() {
            assert!(r.degree(s.base_object(o)) < 2);
        }
    }

    #[test]
    fn latching_of_chain() {
        let r = ReedyStructure::chain(1);
        let s = r.latching_category("1").unwrap();
        assert_eq!((s.cat.num_objects(), s.cat.num_morphisms()), (1, 1));
    }

    #[test]
    fn matching_categories() {
        let r = ReedyStructure::grid(2, 1);
        for o in 0..r.cat().num_objects() {
            assert!(r.matching(o).is_empty());
        }
        let d = ReedyStructure::simplex_op(1).unwrap();
        assert_eq!(d.matching_category("1").unwrap().cat.num_objects(), 2);
        assert!(d.matching_category("0").unwrap().is_empty());
        assert_eq!(d.latching_category("1").unwrap().cat.num_objects(), 1);
    }

    #[test]
    fn no_degree_zero_is_flagged() {
        let cat = crate::fincat::chain_category(1);
        let plus = vec![true; 3];
        let minus: Vec<bool> = (0..3).map(|k| cat.is_identity(k)).collect();
        let report = check_reedy(&cat, &[1, 2], &plus, &minus);
        assert!(report.violations.iter().any(|v| v.kind == "no_degree_zero_object"));
    }

    #[test]
    fn restrict_checks_inheritance() {
        let r = ReedyStructure::simplex_op(1).unwrap();
        // {1} alone loses the factorization of d_i ∘ s.
        let one = vec![r.cat().object_ix("1").unwrap()];
        assert!(matches!(r.restrict(&one), Err(Error::Precondition(_))));
        let zero = vec![r.cat().object_ix("0").unwrap()];
        assert!(r.restrict(&zero).is_ok());
    }

    #[test]
    fn doc_round_trip() {
        let r = ReedyStructure::simplex_op(2).unwrap();
        let doc = r.to_doc();
        let text = serde_json::to_string(&doc).unwrap();
        let back: ReedyDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(ReedyStructure::from_doc(&back).unwrap(), r);
    }

    #[test]
    fn opposite_swaps_classes() {
        let r = ReedyStructure::simplex_op(1).unwrap();
        let op = r.opposite();
        assert_eq!(op.latching(1).cat.num_objects(), r.matching(1).cat.num_objects());
        let report = check_reedy(op.cat(), op.degrees(), &op.plus, &op.minus);
        assert!(report.passed, "{report:?}");
    }
}
