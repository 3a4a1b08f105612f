//! Free diagrams `F^α`, left Kan extension along a full inclusion, the right adjoint
//! `R₀` of evaluation at `[0]` on truncated `Δ^op`, and generating-set assembly.

use std::sync::Arc;

use serde::Serialize;

use crate::ambient::{Carrier, Cone, ModelAssignment, ModelStructure};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{discrete, simplex_op_theta, truncated_simplex_op, CatFunctor, FinCategory};
use crate::reedy::{ReedyStructure, Slice};

use super::{Diagram, DiagramMap, Structure};

fn coproduct_of<C: Carrier>(c: &C, x: &C::Obj, n: usize) -> Result<Cone<C::Obj, C::Mor>> {
    let shape = discrete((0..n).map(|i| i.to_string()).collect());
    c.colimit(&shape, &vec![x.clone(); n], &vec![c.identity(x); n])
}

fn product_of<C: Carrier>(c: &C, x: &C::Obj, n: usize) -> Result<Cone<C::Obj, C::Mor>> {
    let shape = discrete((0..n).map(|i| i.to_string()).collect());
    c.limit(&shape, &vec![x.clone(); n], &vec![c.identity(x); n])
}

fn position(hom: &[usize], u: usize) -> usize {
    hom.iter().position(|&v| v == u).expect("composite lies in the hom-set")
}

fn free_cones<C: Carrier>(c: &C, cat: &FinCategory, alpha: usize, x: &C::Obj) -> Result<Vec<Cone<C::Obj, C::Mor>>> {
    (0..cat.num_objects()).map(|b| coproduct_of(c, x, cat.hom(alpha, b).len())).collect()
}

/// `(F^αX)_β = ∐_{C(α,β)} X`; a morphism `k` sends the copy at `u` to the copy at `k ∘ u`.
pub fn free_diagram<C: Carrier>(c: &C, cat: &Arc<FinCategory>, alpha: usize, x: &C::Obj) -> Result<Diagram<C>> {
    let cones = free_cones(c, cat, alpha, x)?;
    let mut edges = Vec::with_capacity(cat.num_morphisms());
    for k in 0..cat.num_morphisms() {
        let (b, d) = (cat.src(k), cat.dst(k));
        let legs: Vec<C::Mor> =
            cat.hom(alpha, b).iter().map(|&u| cones[d].legs[position(cat.hom(alpha, d), cat.compose_ix(k, u))].clone()).collect();
        edges.push(c.colimit_mediate(&cones[b], &cones[d].apex, &legs)?);
    }
    Diagram::new(c, cat.clone(), cones.into_iter().map(|q| q.apex).collect(), edges)
}

/// `F^α f: F^αX → F^αY`, copywise `f`.
pub fn free_map<C: Carrier>(c: &C, cat: &Arc<FinCategory>, alpha: usize, f: &C::Mor) -> Result<DiagramMap<C>> {
    let (x, y) = (c.dom(f), c.cod(f));
    let (cx, cy) = (free_cones(c, cat, alpha, &x)?, free_cones(c, cat, alpha, &y)?);
    let mut comps = Vec::new();
    for b in 0..cat.num_objects() {
        let legs: Vec<C::Mor> = cy[b].legs.iter().map(|leg| c.compose(leg, f)).collect();
        comps.push(c.colimit_mediate(&cx[b], &cy[b].apex, &legs)?);
    }
    let src = Arc::new(free_diagram(c, cat, alpha, &x)?);
    let dst = Arc::new(free_diagram(c, cat, alpha, &y)?);
    DiagramMap::new(c, src, dst, comps)
}

/// The comma category `C0 ↓ β` for a full inclusion `C0 ⊆ C`; objects are the base
/// morphisms `γ → β` out of `C0`.
fn comma(cat: &Arc<FinCategory>, sub: &CatFunctor, beta: usize) -> Slice {
    let inside: Vec<usize> = sub.obj_map.clone();
    let legs: Vec<usize> = cat.homs_into(beta).into_iter().filter(|&u| inside.contains(&cat.src(u))).collect();
    let names: Vec<String> = legs.iter().map(|&u| cat.morphism_id(u).to_string()).collect();
    let mut arrows = Vec::new();
    for &u in &legs {
        for &v in &legs {
            for &w in cat.hom(cat.src(u), cat.src(v)) {
                if u == v && cat.is_identity(w) {
                    continue;
                }
                if cat.compose_ix(v, w) == u {
                    arrows.push((
                        format!("{}|{}|{}", cat.morphism_id(u), cat.morphism_id(w), cat.morphism_id(v)),
                        cat.morphism_id(u).to_string(),
                        cat.morphism_id(v).to_string(),
                        w,
                    ));
                }
            }
        }
    }
    let ix_of = |name: &str| cat.morphism_ix(name).expect("comma object is a base morphism");
    let sub_cat = FinCategory::concrete(names, arrows, |o| cat.identity(cat.src(ix_of(o))), |g, f| cat.compose_ix(*g, *f))
        .expect("comma categories are categories");
    let sub_cat = Arc::new(sub_cat);
    let legs: Vec<usize> = sub_cat.objects().iter().map(|o| ix_of(o)).collect();
    let obj_map = legs.iter().map(|&u| cat.src(u)).collect();
    let mor_map = sub_cat
        .morphisms()
        .iter()
        .enumerate()
        .map(|(k, md)| {
            if sub_cat.is_identity(k) {
                cat.identity(cat.src(legs[md.src]))
            } else {
                ix_of(md.id.split('|').nth(1).expect("comma arrow id"))
            }
        })
        .collect();
    let forget = CatFunctor::new(sub_cat.clone(), cat.clone(), obj_map, mor_map).expect("forgetful functor");
    Slice { cat: sub_cat, forget, legs }
}

pub struct KanExtension<C: Carrier> {
    /// `Lan X`, a diagram on the ambient shape.
    pub lan: Arc<Diagram<C>>,
    /// `X → (Lan X)|_{C0}`.
    pub unit: DiagramMap<C>,
    pub is_iso: bool,
}

/// Left Kan extension of `x` (a diagram on `incl.source`) along the full inclusion
/// `incl`, by pointwise colimits over comma categories, with its unit. A non-invertible
/// unit is a `CheckFailed` error.
pub fn restrict_and_unit<C: Carrier>(c: &C, incl: &CatFunctor, x: &Arc<Diagram<C>>) -> Result<KanExtension<C>> {
    if !incl.is_injective_on_objects() {
        return Err(Error::Precondition("Kan extension needs a subcategory inclusion".into()));
    }
    if *x.shape != *incl.source {
        return Err(Error::Validation("diagram is not on the subcategory".into()));
    }
    let cat = incl.target.clone();
    let sub_ix = |o: usize| incl.obj_map.iter().position(|&p| p == o).expect("object of the subcategory");
    let sub_mor = |k: usize| incl.mor_map.iter().position(|&p| p == k).expect("morphism of a full subcategory");
    let mut slices = Vec::new();
    let mut cones = Vec::new();
    for beta in 0..cat.num_objects() {
        let s = comma(&cat, incl, beta);
        let entries: Vec<C::Obj> = (0..s.cat.num_objects()).map(|o| x.entries[sub_ix(s.base_object(o))].clone()).collect();
        let edges: Vec<C::Mor> = (0..s.cat.num_morphisms()).map(|k| x.edges[sub_mor(s.base_morphism(k))].clone()).collect();
        cones.push(c.colimit(&s.cat, &entries, &edges)?);
        slices.push(s);
    }
    let mut edges = Vec::new();
    for k in 0..cat.num_morphisms() {
        let (b, d) = (cat.src(k), cat.dst(k));
        let legs: Vec<C::Mor> = slices[b]
            .legs
            .iter()
            .map(|&u| cones[d].legs[position(&slices[d].legs, cat.compose_ix(k, u))].clone())
            .collect();
        edges.push(c.colimit_mediate(&cones[b], &cones[d].apex, &legs)?);
    }
    let lan = Arc::new(Diagram::new(c, cat.clone(), cones.iter().map(|q| q.apex.clone()).collect(), edges)?);
    let restricted = Arc::new(lan.restrict(incl));
    let comps: Vec<C::Mor> = incl
        .obj_map
        .iter()
        .map(|&g| cones[g].legs[position(&slices[g].legs, cat.identity(g))].clone())
        .collect();
    let is_iso = comps.iter().all(|f| c.is_iso(f));
    let unit = DiagramMap::new(c, x.clone(), restricted, comps)?;
    if !is_iso {
        return Err(Error::CheckFailed("unit of the Kan extension along a full inclusion is not invertible".into()));
    }
    Ok(KanExtension { lan, unit, is_iso })
}

/// `(R₀X)_n = X^{n+1}` on `Δ^op` truncated at `n`; the map dual to `θ` reindexes
/// coordinates along `θ`.
pub fn r_zero<C: Carrier>(c: &C, truncation: usize, x: &C::Obj) -> Result<Diagram<C>> {
    let cat = Arc::new(truncated_simplex_op(truncation)?);
    let cones: Vec<_> = (0..=truncation).map(|n| product_of(c, x, n + 1)).collect::<Result<_>>()?;
    let mut edges = Vec::new();
    for k in 0..cat.num_morphisms() {
        let (n, m) = (cat.src(k), cat.dst(k));
        let theta = simplex_op_theta(cat.morphism_id(k), m);
        let legs: Vec<C::Mor> = theta.iter().map(|&i| cones[n].legs[i].clone()).collect();
        edges.push(c.limit_mediate(&cones[m], &cones[n].apex, &legs)?);
    }
    Diagram::new(c, cat, cones.into_iter().map(|q| q.apex).collect(), edges)
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratingSetsSummary {
    pub i_label: String,
    pub j_label: String,
    pub i: usize,
    pub j: usize,
    pub j_subset_i: bool,
}

pub struct GeneratingSets<C: Carrier> {
    pub i_label: String,
    pub j_label: String,
    pub i: Vec<DiagramMap<C>>,
    pub j: Vec<DiagramMap<C>>,
    /// Whether `J ⊆ I` in every ambient structure that was used.
    pub j_subset_i: bool,
}

impl<C: Carrier> GeneratingSets<C> {
    pub fn summary(&self) -> GeneratingSetsSummary {
        GeneratingSetsSummary {
            i_label: self.i_label.clone(),
            j_label: self.j_label.clone(),
            i: self.i.len(),
            j: self.j.len(),
            j_subset_i: self.j_subset_i,
        }
    }
}

/// `I_L = ∪_{α∈C0} F^α I ∪ ∪_{α∉C0} F^α J`, `J_L = ∪_α F^α J` for the left structure;
/// `I_{C0} = ∪_{α∈C0} F^α I`, `J_{C0} = ∪_{α∈C0} F^α J` for the projective one.
/// Both need a monotone increasing shape.
pub fn generating_sets<C: Carrier>(
    c: &C,
    r: &ReedyStructure,
    c0: &[bool],
    a: &ModelAssignment<C>,
    which: Structure,
    budget: &Budget,
) -> Result<GeneratingSets<C>> {
    if !r.is_monotone_increasing() {
        return Err(Error::Precondition("generating sets are assembled over monotone increasing shapes".into()));
    }
    let cat = r.cat();
    let mut i = Vec::new();
    let mut j = Vec::new();
    let mut j_subset_i = true;
    for alpha in 0..cat.num_objects() {
        let m = a.at(alpha);
        let (gi, gj) = m
            .generating(c, budget)
            .ok_or_else(|| Error::Precondition(format!("{} has no generating sets", m.label())))?;
        j_subset_i &= gj.iter().all(|f| gi.contains(f));
        let (from_i, from_j) = match which {
            Structure::Left => (if c0[alpha] { &gi } else { &gj }, Some(&gj)),
            Structure::Projective => {
                if !c0[alpha] {
                    continue;
                }
                (&gi, Some(&gj))
            }
            Structure::Right => return Err(Error::Precondition("generating sets are assembled for left or projective".into())),
        };
        for f in from_i {
            i.push(free_map(c, cat, alpha, f)?);
        }
        for f in from_j.into_iter().flatten() {
            j.push(free_map(c, cat, alpha, f)?);
        }
    }
    let (il, jl) = match which {
        Structure::Left => ("I_L", "J_L"),
        _ => ("I_C0", "J_C0"),
    };
    Ok(GeneratingSets { i_label: il.into(), j_label: jl.into(), i, j, j_subset_i })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{FinSet, Kind};
    use crate::diagram::all_maps;
    use crate::fincat::full_subcategory;

    #[test]
    fn free_diagram_on_grid_origin_is_singletons() {
        let r = ReedyStructure::grid(1, 1);
        let d = free_diagram(&FinSet, r.cat(), 0, &1).unwrap();
        assert_eq!(d.entries, vec![1, 1, 1, 1]);
        let top = free_diagram(&FinSet, r.cat(), 3, &1).unwrap();
        assert_eq!(top.entries, vec![0, 0, 0, 1]);
    }

    #[test]
    fn free_adjunction_counts_agree() {
        let r = ReedyStructure::chain(1);
        let y = Arc::new(Diagram::new(
            &FinSet,
            r.cat().clone(),
            vec![1, 2],
            vec![crate::ambient::FinSetMap::new(2, vec![1]).unwrap(), FinSet.identity(&1), FinSet.identity(&2)],
        ).unwrap());
        for alpha in 0..2 {
            for x in 0..=2usize {
                let f = Arc::new(free_diagram(&FinSet, r.cat(), alpha, &x).unwrap());
                let lhs = all_maps(&FinSet, &f, &y, 1000).unwrap().len();
                let rhs = FinSet.homs(&x, &y.entries[alpha], 1000).unwrap().len();
                assert_eq!(lhs, rhs, "alpha {alpha} x {x}");
            }
        }
    }

    #[test]
    fn kan_extension_along_arrow_source() {
        let r = ReedyStructure::chain(1);
        let (sub, incl) = full_subcategory(r.cat(), &["0".to_string()]).unwrap();
        let x = Arc::new(Diagram::constant(&FinSet, sub, &2));
        let k = restrict_and_unit(&FinSet, &incl, &x).unwrap();
        assert!(k.is_iso);
        assert_eq!(k.lan.entries, vec![2, 2]);
        assert!(FinSet.is_iso(&k.lan.edges[r.cat().morphism_ix("0>1").unwrap()]));
    }

    #[test]
    fn kan_extension_on_grid_horn() {
        let r = ReedyStructure::grid(1, 1);
        let names: Vec<String> = ["00", "01", "10"].iter().map(|s| s.to_string()).collect();
        let (sub, incl) = full_subcategory(r.cat(), &names).unwrap();
        let x = Arc::new(Diagram::constant(&FinSet, sub, &2));
        let k = restrict_and_unit(&FinSet, &incl, &x).unwrap();
        assert!(k.is_iso);
        // Colimit of the span 2 ← 2 → 2 along identities.
        assert_eq!(k.lan.entries[3], 2);
    }

    #[test]
    fn r_zero_entries_and_adjunction() {
        let d = r_zero(&FinSet, 1, &2).unwrap();
        assert_eq!(d.entries, vec![2, 4]);
        assert_eq!(r_zero(&FinSet, 0, &3).unwrap().entries, vec![3]);
        let r = ReedyStructure::simplex_op(1).unwrap();
        let rx = Arc::new(d);
        for y in crate::diagram::sample_diagrams(&FinSet, &r, &Budget::SMALL.with_samples(10), 5).unwrap() {
            let lhs = FinSet.homs(&y.entries[0], &2, 1000).unwrap().len();
            let rhs = all_maps(&FinSet, &y, &rx, 1000).unwrap().len();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn generating_set_counts() {
        let r = ReedyStructure::grid(1, 1);
        let a = ModelAssignment::constant(Arc::new(FinSet), Kind::WeIso, 4);
        let (gi, gj) = Kind::WeIso.generating(&FinSet, &Budget::SMALL).unwrap();
        let c0 = [true, true, true, false];
        let g = generating_sets(&FinSet, &r, &c0, &a, Structure::Left, &Budget::SMALL).unwrap();
        assert_eq!(g.i.len(), 3 * gi.len() + gj.len());
        assert_eq!(g.j.len(), 4 * gj.len());
        let all = generating_sets(&FinSet, &r, &[true; 4], &a, Structure::Left, &Budget::SMALL).unwrap();
        assert_eq!(all.i.len(), 4 * gi.len());
        let s = ReedyStructure::simplex_op(1).unwrap();
        assert!(generating_sets(&FinSet, &s, &[true, true], &a, Structure::Left, &Budget::SMALL).is_err());
    }
}
