//! Diagrams `C → M`, natural transformations between them, and their file format.

mod adjoint;
mod classify;
mod enumerate;
mod latching;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ambient::Carrier;
use crate::error::{Error, Result};
use crate::fincat::{CatFunctor, FinCategory};

pub use adjoint::{
    free_diagram, free_map, generating_sets, r_zero, restrict_and_unit, GeneratingSets, GeneratingSetsSummary, KanExtension,
};
pub use classify::{classify, ClassVector, Evidence, Structure};
pub use enumerate::{
    all_maps, brute_force_diagonals, first_maps, initial_diagram, random_diagram, random_map, sample_diagrams, sample_maps,
    terminal_diagram,
};
pub use crate::engine::DiagramSquare;
pub use latching::{
    latching_data, latching_map, latching_object, matching_data, matching_map, matching_object, relative_latching,
    relative_matching, LatchingData, MatchingData, SliceCone,
};

/// Read access to entries and edges; implemented by full and partially built diagrams.
pub trait DiagramView<C: Carrier> {
    fn shape(&self) -> &Arc<FinCategory>;
    fn entry(&self, o: usize) -> &C::Obj;
    fn edge(&self, k: usize) -> &C::Mor;
}

pub struct Diagram<C: Carrier> {
    pub shape: Arc<FinCategory>,
    pub entries: Vec<C::Obj>,
    /// Indexed by shape morphism.
    pub edges: Vec<C::Mor>,
}

impl<C: Carrier> Clone for Diagram<C> {
    fn clone(&self) -> Self {
        Diagram { shape: self.shape.clone(), entries: self.entries.clone(), edges: self.edges.clone() }
    }
}

impl<C: Carrier> PartialEq for Diagram<C> {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.entries == other.entries && self.edges == other.edges
    }
}

impl<C: Carrier> Eq for Diagram<C> {}

impl<C: Carrier> fmt::Debug for Diagram<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Diagram").field("entries", &self.entries).field("edges", &self.edges).finish()
    }
}

impl<C: Carrier> DiagramView<C> for Diagram<C> {
    fn shape(&self) -> &Arc<FinCategory> {
        &self.shape
    }

    fn entry(&self, o: usize) -> &C::Obj {
        &self.entries[o]
    }

    fn edge(&self, k: usize) -> &C::Mor {
        &self.edges[k]
    }
}

impl<C: Carrier> Diagram<C> {
    /// Builds and checks functoriality exhaustively.
    pub fn new(c: &C, shape: Arc<FinCategory>, entries: Vec<C::Obj>, edges: Vec<C::Mor>) -> Result<Self> {
        let d = Diagram { shape, entries, edges };
        d.validate(c)?;
        Ok(d)
    }

    pub fn validate(&self, c: &C) -> Result<()> {
        let s = &self.shape;
        if self.entries.len() != s.num_objects() || self.edges.len() != s.num_morphisms() {
            return Err(Error::Validation("diagram does not match its shape".into()));
        }
        for k in 0..s.num_morphisms() {
            let e = &self.edges[k];
            if c.dom(e) != self.entries[s.src(k)] || c.cod(e) != self.entries[s.dst(k)] {
                return Err(Error::Validation(format!("edge {} has the wrong endpoints", s.morphism_id(k))));
            }
            if s.is_identity(k) && *e != c.identity(&self.entries[s.src(k)]) {
                return Err(Error::Validation(format!("edge {} is not an identity", s.morphism_id(k))));
            }
        }
        for g in 0..s.num_morphisms() {
            for f in s.homs_into(s.src(g)) {
                if s.is_identity(f) || s.is_identity(g) {
                    continue;
                }
                let gf = s.compose_ix(g, f);
                if self.edges[gf] != c.compose(&self.edges[g], &self.edges[f]) {
                    return Err(Error::Validation(format!(
                        "not functorial at ({}, {})",
                        s.morphism_id(g),
                        s.morphism_id(f)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The diagram with every entry `x` and every edge the identity.
    pub fn constant(c: &C, shape: Arc<FinCategory>, x: &C::Obj) -> Self {
        let entries = vec![x.clone(); shape.num_objects()];
        let edges = vec![c.identity(x); shape.num_morphisms()];
        Diagram { shape, entries, edges }
    }

    /// Precomposition with a functor into this diagram's shape.
    pub fn restrict(&self, along: &CatFunctor) -> Self {
        Diagram {
            shape: along.source.clone(),
            entries: along.obj_map.iter().map(|&o| self.entries[o].clone()).collect(),
            edges: along.mor_map.iter().map(|&k| self.edges[k].clone()).collect(),
        }
    }

    pub fn identity_map(&self, c: &C) -> DiagramMap<C> {
        let me = Arc::new(self.clone());
        DiagramMap {
            source: me.clone(),
            target: me,
            comps: self.entries.iter().map(|x| c.identity(x)).collect(),
        }
    }

    pub fn to_doc(&self, c: &C) -> DiagramDoc {
        let s = &self.shape;
        DiagramDoc {
            edges: (0..s.num_morphisms())
                .filter(|&k| !s.is_identity(k))
                .map(|k| (s.morphism_id(k).to_string(), c.encode_mor(&self.edges[k])))
                .collect(),
            entries: (0..s.num_objects()).map(|o| (s.object_name(o).to_string(), c.encode_obj(&self.entries[o]))).collect(),
        }
    }

    pub fn from_doc(c: &C, shape: Arc<FinCategory>, doc: &DiagramDoc) -> Result<Self> {
        let mut entries = Vec::new();
        for o in shape.objects() {
            let v = doc.entries.get(o).ok_or_else(|| Error::Format(format!("no entry for object `{o}`")))?;
            entries.push(c.decode_obj(v)?);
        }
        let mut edges = Vec::new();
        for k in 0..shape.num_morphisms() {
            if shape.is_identity(k) {
                edges.push(c.identity(&entries[shape.src(k)]));
            } else {
                let id = shape.morphism_id(k);
                let v = doc.edges.get(id).ok_or_else(|| Error::Format(format!("no edge for morphism `{id}`")))?;
                edges.push(c.decode_mor(v)?);
            }
        }
        for key in doc.entries.keys() {
            shape.object_ix(key)?;
        }
        for key in doc.edges.keys() {
            shape.morphism_ix(key)?;
        }
        Diagram::new(c, shape, entries, edges)
    }

    /// Canonical string form: entries then edges in id order.
    pub fn key(&self, c: &C) -> String {
        serde_json::to_string(&self.to_doc(c)).expect("diagram documents serialize")
    }
}

pub struct DiagramMap<C: Carrier> {
    pub source: Arc<Diagram<C>>,
    pub target: Arc<Diagram<C>>,
    /// Indexed by shape object.
    pub comps: Vec<C::Mor>,
}

impl<C: Carrier> Clone for DiagramMap<C> {
    fn clone(&self) -> Self {
        DiagramMap { source: self.source.clone(), target: self.target.clone(), comps: self.comps.clone() }
    }
}

impl<C: Carrier> PartialEq for DiagramMap<C> {
    fn eq(&self, other: &Self) -> bool {
        self.comps == other.comps && self.source == other.source && self.target == other.target
    }
}

impl<C: Carrier> Eq for DiagramMap<C> {}

impl<C: Carrier> fmt::Debug for DiagramMap<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiagramMap").field("comps", &self.comps).finish()
    }
}

impl<C: Carrier> DiagramMap<C> {
    /// Builds and checks naturality exhaustively.
    pub fn new(c: &C, source: Arc<Diagram<C>>, target: Arc<Diagram<C>>, comps: Vec<C::Mor>) -> Result<Self> {
        let m = DiagramMap { source, target, comps };
        m.validate(c)?;
        Ok(m)
    }

    pub fn shape(&self) -> &Arc<FinCategory> {
        &self.source.shape
    }

    pub fn validate(&self, c: &C) -> Result<()> {
        let s = self.shape().clone();
        if *self.target.shape != *s || self.comps.len() != s.num_objects() {
            return Err(Error::Validation("map does not match its shape".into()));
        }
        for o in 0..s.num_objects() {
            let f = &self.comps[o];
            if c.dom(f) != self.source.entries[o] || c.cod(f) != self.target.entries[o] {
                return Err(Error::Validation(format!("component at {} has the wrong endpoints", s.object_name(o))));
            }
        }
        for k in 0..s.num_morphisms() {
            if s.is_identity(k) {
                continue;
            }
            let (a, b) = (s.src(k), s.dst(k));
            let lhs = c.compose(&self.comps[b], &self.source.edges[k]);
            let rhs = c.compose(&self.target.edges[k], &self.comps[a]);
            if lhs != rhs {
                return Err(Error::Validation(format!(
                    "naturality square for {} ({} -> {}) does not commute",
                    s.morphism_id(k),
                    s.object_name(a),
                    s.object_name(b)
                )));
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn after(&self, c: &C, first: &DiagramMap<C>) -> DiagramMap<C> {
        DiagramMap {
            source: first.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().zip(&first.comps).map(|(g, f)| c.compose(g, f)).collect(),
        }
    }

    pub fn is_identity(&self, c: &C) -> bool {
        self.source == self.target && self.comps.iter().zip(&self.source.entries).all(|(f, x)| *f == c.identity(x))
    }

    pub fn restrict(&self, along: &CatFunctor) -> Self {
        DiagramMap {
            source: Arc::new(self.source.restrict(along)),
            target: Arc::new(self.target.restrict(along)),
            comps: along.obj_map.iter().map(|&o| self.comps[o].clone()).collect(),
        }
    }

    pub fn to_doc(&self, c: &C) -> DiagramMapDoc {
        let s = self.shape();
        DiagramMapDoc {
            components: (0..s.num_objects()).map(|o| (s.object_name(o).to_string(), c.encode_mor(&self.comps[o]))).collect(),
            source: self.source.to_doc(c),
            target: self.target.to_doc(c),
        }
    }

    pub fn from_doc(c: &C, shape: Arc<FinCategory>, doc: &DiagramMapDoc) -> Result<Self> {
        let source = Arc::new(Diagram::from_doc(c, shape.clone(), &doc.source)?);
        let target = Arc::new(Diagram::from_doc(c, shape.clone(), &doc.target)?);
        let mut comps = Vec::new();
        for o in shape.objects() {
            let v = doc.components.get(o).ok_or_else(|| Error::Format(format!("no component at `{o}`")))?;
            comps.push(c.decode_mor(v)?);
        }
        DiagramMap::new(c, source, target, comps)
    }

    pub fn key(&self, c: &C) -> String {
        serde_json::to_string(&self.to_doc(c)).expect("map documents serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramDoc {
    #[serde(default)]
    pub edges: BTreeMap<String, Value>,
    pub entries: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramMapDoc {
    pub components: BTreeMap<String, Value>,
    pub source: DiagramDoc,
    pub target: DiagramDoc,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{FinSet, FinSetMap};
    use crate::fincat::arrow_category;

    #[test]
    fn functoriality_is_checked() {
        let shape = Arc::new(arrow_category());
        let f = FinSetMap::new(1, vec![0, 0]).unwrap();
        let bad_id = FinSetMap::new(2, vec![1, 0]).unwrap();
        // Morphism order: "0>1", "id_0", "id_1".
        assert_eq!(shape.morphism_id(0), "0>1");
        let ok = Diagram::new(&FinSet, shape.clone(), vec![2, 1], vec![f.clone(), FinSet.identity(&2), FinSet.identity(&1)]);
        assert!(ok.is_ok());
        let bad = Diagram::new(&FinSet, shape, vec![2, 1], vec![f, bad_id, FinSet.identity(&1)]);
        assert!(bad.is_err());
    }

    #[test]
    fn doc_round_trip() {
        let shape = Arc::new(arrow_category());
        let f = FinSetMap::new(1, vec![0, 0]).unwrap();
        let d = Diagram::new(&FinSet, shape.clone(), vec![2, 1], vec![f, FinSet.identity(&2), FinSet.identity(&1)]).unwrap();
        let doc = d.to_doc(&FinSet);
        let back = Diagram::from_doc(&FinSet, shape, &doc).unwrap();
        assert_eq!(back, d);
    }
}
