//! Absolute and relative latching and matching objects.

use crate::ambient::{pullback, pullback_mediate, pushout, pushout_mediate, Carrier, Cone};
use crate::error::Result;
use crate::reedy::{ReedyStructure, Slice};

use super::{DiagramMap, DiagramView};

/// A (co)limit over a latching or matching category together with the absolute
/// map to or from the entry at the indexing object.
pub struct SliceCone<C: Carrier> {
    pub cone: Cone<C::Obj, C::Mor>,
    /// `L_αX → X_α` for latching, `X_α → M_αX` for matching.
    pub absolute: C::Mor,
}

impl<C: Carrier> Clone for SliceCone<C> {
    fn clone(&self) -> Self {
        SliceCone { cone: self.cone.clone(), absolute: self.absolute.clone() }
    }
}

impl<C: Carrier> SliceCone<C> {
    pub fn apex(&self) -> &C::Obj {
        &self.cone.apex
    }
}

fn restricted<C: Carrier, D: DiagramView<C> + ?Sized>(x: &D, s: &Slice) -> (Vec<C::Obj>, Vec<C::Mor>) {
    let entries = (0..s.cat.num_objects()).map(|o| x.entry(s.base_object(o)).clone()).collect();
    let edges = (0..s.cat.num_morphisms()).map(|k| x.edge(s.base_morphism(k)).clone()).collect();
    (entries, edges)
}

/// `L_αX` with its colimit cone and the absolute latching map.
pub fn latching_object<C: Carrier, D: DiagramView<C> + ?Sized>(
    c: &C,
    r: &ReedyStructure,
    x: &D,
    alpha: usize,
) -> Result<SliceCone<C>> {
    let s = r.latching(alpha);
    let (entries, edges) = restricted(x, &s);
    let cone = c.colimit(&s.cat, &entries, &edges)?;
    let legs: Vec<C::Mor> = s.legs.iter().map(|&u| x.edge(u).clone()).collect();
    let absolute = c.colimit_mediate(&cone, x.entry(alpha), &legs)?;
    Ok(SliceCone { cone, absolute })
}

/// `M_αX` with its limit cone and the absolute matching map.
pub fn matching_object<C: Carrier, D: DiagramView<C> + ?Sized>(
    c: &C,
    r: &ReedyStructure,
    x: &D,
    alpha: usize,
) -> Result<SliceCone<C>> {
    let s = r.matching(alpha);
    let (entries, edges) = restricted(x, &s);
    let cone = c.limit(&s.cat, &entries, &edges)?;
    let legs: Vec<C::Mor> = s.legs.iter().map(|&u| x.edge(u).clone()).collect();
    let absolute = c.limit_mediate(&cone, x.entry(alpha), &legs)?;
    Ok(SliceCone { cone, absolute })
}

/// `L_αX → L_αY` induced by components at lower objects.
pub fn latching_map<C: Carrier>(
    c: &C,
    s: &Slice,
    lx: &SliceCone<C>,
    ly: &SliceCone<C>,
    comp: impl Fn(usize) -> C::Mor,
) -> Result<C::Mor> {
    let legs: Vec<C::Mor> =
        (0..s.cat.num_objects()).map(|o| c.compose(&ly.cone.legs[o], &comp(s.base_object(o)))).collect();
    c.colimit_mediate(&lx.cone, ly.apex(), &legs)
}

/// `M_αX → M_αY` induced by components at lower objects.
pub fn matching_map<C: Carrier>(
    c: &C,
    s: &Slice,
    mx: &SliceCone<C>,
    my: &SliceCone<C>,
    comp: impl Fn(usize) -> C::Mor,
) -> Result<C::Mor> {
    let legs: Vec<C::Mor> =
        (0..s.cat.num_objects()).map(|o| c.compose(&comp(s.base_object(o)), &mx.cone.legs[o])).collect();
    c.limit_mediate(&my.cone, mx.apex(), &legs)
}

pub struct LatchingData<C: Carrier> {
    pub lx: SliceCone<C>,
    pub ly: SliceCone<C>,
    /// `L_αf: L_αX → L_αY`.
    pub l_f: C::Mor,
    /// `L̃_αf = X_α ⊔_{L_αX} L_αY`.
    pub relative: C::Obj,
    /// `L_αY → L̃_αf`.
    pub from_ly: C::Mor,
    /// `X_α → L̃_αf`.
    pub pre: C::Mor,
    /// The relative latching map `L̃_αf → Y_α`.
    pub latch: C::Mor,
}

pub struct MatchingData<C: Carrier> {
    pub mx: SliceCone<C>,
    pub my: SliceCone<C>,
    /// `M_αf: M_αX → M_αY`.
    pub m_f: C::Mor,
    /// `M̃_αf = Y_α ×_{M_αY} M_αX`.
    pub relative: C::Obj,
    /// `M̃_αf → M_αX`.
    pub to_mx: C::Mor,
    /// `M̃_αf → Y_α`.
    pub post: C::Mor,
    /// The relative matching map `X_α → M̃_αf`.
    pub matching: C::Mor,
}

/// Relative latching data from latching objects of source and target and a
/// component functional on lower objects.
pub fn relative_latching<C: Carrier>(
    c: &C,
    s: &Slice,
    lx: SliceCone<C>,
    ly: SliceCone<C>,
    f_alpha: &C::Mor,
    comp: impl Fn(usize) -> C::Mor,
) -> Result<LatchingData<C>> {
    let l_f = latching_map(c, s, &lx, &ly, comp)?;
    // Pushout of L_αY ← L_αX → X_α; legs are [from L_αY, from X_α].
    let po = pushout(c, &l_f, &lx.absolute)?;
    let latch = pushout_mediate(c, &l_f, &po, &c.cod(f_alpha), &ly.absolute, f_alpha)?;
    debug_assert_eq!(c.compose(&latch, &po.legs[1]), *f_alpha);
    Ok(LatchingData { l_f, relative: po.apex, from_ly: po.legs[0].clone(), pre: po.legs[1].clone(), latch, lx, ly })
}

pub fn relative_matching<C: Carrier>(
    c: &C,
    s: &Slice,
    mx: SliceCone<C>,
    my: SliceCone<C>,
    f_alpha: &C::Mor,
    comp: impl Fn(usize) -> C::Mor,
) -> Result<MatchingData<C>> {
    let m_f = matching_map(c, s, &mx, &my, comp)?;
    // Pullback of Y_α → M_αY ← M_αX; legs are [to Y_α, to M_αX].
    let pb = pullback(c, &my.absolute, &m_f)?;
    let matching = pullback_mediate(c, &my.absolute, &pb, &c.dom(f_alpha), f_alpha, &mx.absolute)?;
    Ok(MatchingData { m_f, relative: pb.apex, post: pb.legs[0].clone(), to_mx: pb.legs[1].clone(), matching, mx, my })
}

pub fn latching_data<C: Carrier>(c: &C, r: &ReedyStructure, f: &DiagramMap<C>, alpha: usize) -> Result<LatchingData<C>> {
    let lx = latching_object(c, r, f.source.as_ref(), alpha)?;
    let ly = latching_object(c, r, f.target.as_ref(), alpha)?;
    relative_latching(c, &r.latching(alpha), lx, ly, &f.comps[alpha], |o| f.comps[o].clone())
}

pub fn matching_data<C: Carrier>(c: &C, r: &ReedyStructure, f: &DiagramMap<C>, alpha: usize) -> Result<MatchingData<C>> {
    let mx = matching_object(c, r, f.source.as_ref(), alpha)?;
    let my = matching_object(c, r, f.target.as_ref(), alpha)?;
    relative_matching(c, &r.matching(alpha), mx, my, &f.comps[alpha], |o| f.comps[o].clone())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ambient::{FinSet, FinSetMap};
    use crate::diagram::Diagram;

    fn grid_x() -> (ReedyStructure, Diagram<FinSet>) {
        let r = ReedyStructure::grid(1, 1);
        let shape = r.cat().clone();
        // X_00 = ∅, X_01 = {a}, X_10 = {b}, X_11 = {c}.
        let entries = vec![0, 1, 1, 1];
        let edges = shape
            .morphisms()
            .iter()
            .map(|md| FinSetMap::new(entries[md.dst], vec![0; entries[md.src]]).unwrap())
            .collect();
        let x = Diagram::new(&FinSet, shape, entries, edges).unwrap();
        (r, x)
    }

    #[test]
    fn latching_object_of_corner_is_disjoint_union() {
        let (r, x) = grid_x();
        let l = latching_object(&FinSet, &r, &x, 3).unwrap();
        assert_eq!(*l.apex(), 2);
        let l0 = latching_object(&FinSet, &r, &x, 0).unwrap();
        assert_eq!(*l0.apex(), 0);
    }

    #[test]
    fn identity_map_latch_is_absolute_map() {
        let (r, x) = grid_x();
        let id = x.identity_map(&FinSet);
        let d = latching_data(&FinSet, &r, &id, 3).unwrap();
        // Pushout along the identity: L̃ ≅ X_11.
        assert_eq!(d.relative, 1);
        assert_eq!(FinSet.compose(&d.latch, &d.pre), FinSet.identity(&1));
    }

    #[test]
    fn matching_of_constant_simplicial_diagram_is_a_power() {
        let r = ReedyStructure::simplex_op(1).unwrap();
        let x = Diagram::constant(&FinSet, r.cat().clone(), &2);
        let m = matching_object(&FinSet, &r, &x, 1).unwrap();
        assert_eq!(*m.apex(), 4);
        let id = Arc::new(x).identity_map(&FinSet);
        let d = matching_data(&FinSet, &r, &id, 0).unwrap();
        assert_eq!(d.relative, 2);
    }
}
