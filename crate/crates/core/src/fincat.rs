//! Finitely presented categories stored with a total composition table, functors
//! between them, and the indexing shapes used throughout the crate.
//!
//! Objects and morphisms are identified by strings. Internally both are kept in
//! byte-wise sorted order and addressed by index, so every enumeration is
//! reproducible.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest truncation accepted by [`truncated_simplex_op`].
pub const SIMPLEX_TRUNCATION_CAP: usize = 6;

const NO_COMPOSITE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismData {
    pub id: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Clone)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<MorphismData>,
    identity: Vec<usize>,
    /// `compose[g * m + f]` is `g ∘ f` when `dst(f) == src(g)`.
    compose: Vec<u32>,
    /// `homs[src * n + dst]`, ascending morphism index.
    homs: Vec<Vec<usize>>,
    obj_ix: HashMap<String, usize>,
    mor_ix: HashMap<String, usize>,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.compose == other.compose
    }
}

impl Eq for FinCategory {}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("objects", &self.objects)
            .field("morphisms", &self.morphisms.len())
            .finish()
    }
}

pub fn identity_id(object: &str) -> String {
    format!("id_{object}")
}

impl FinCategory {
    /// Builds a category from objects, non-identity morphisms `(id, src, dst)` and a
    /// composition table of `(g, f, g∘f)` triples covering every composable pair of
    /// non-identity morphisms. Identities are added as `id_<object>`.
    pub fn from_presentation(
        objects: Vec<String>,
        morphisms: Vec<(String, String, String)>,
        composition: Vec<(String, String, String)>,
    ) -> Result<Self> {
        let mut objects = objects;
        objects.sort();
        for w in objects.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Construction(format!("duplicate object `{}`", w[0])));
            }
        }
        let obj_ix: HashMap<String, usize> =
            objects.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();

        let mut all: Vec<MorphismData> = Vec::with_capacity(morphisms.len() + objects.len());
        for (i, o) in objects.iter().enumerate() {
            all.push(MorphismData { id: identity_id(o), src: i, dst: i });
        }
        for (id, s, d) in &morphisms {
            let src = *obj_ix
                .get(s)
                .ok_or_else(|| Error::Construction(format!("morphism `{id}` has dangling source `{s}`")))?;
            let dst = *obj_ix
                .get(d)
                .ok_or_else(|| Error::Construction(format!("morphism `{id}` has dangling target `{d}`")))?;
            all.push(MorphismData { id: id.clone(), src, dst });
        }
        all.sort_by(|a, b| a.id.cmp(&b.id));
        for w in all.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::Construction(format!("duplicate morphism id `{}`", w[0].id)));
            }
        }
        let mor_ix: HashMap<String, usize> =
            all.iter().enumerate().map(|(i, m)| (m.id.clone(), i)).collect();
        let identity: Vec<usize> = objects.iter().map(|o| mor_ix[&identity_id(o)]).collect();

        let m = all.len();
        let mut table = vec![NO_COMPOSITE; m * m];
        let is_identity = |k: usize| identity[all[k].src] == k;
        for g in 0..m {
            for f in 0..m {
                if all[f].dst != all[g].src {
                    continue;
                }
                if is_identity(g) {
                    table[g * m + f] = f as u32;
                } else if is_identity(f) {
                    table[g * m + f] = g as u32;
                }
            }
        }
        for (g, f, gf) in &composition {
            let lookup = |name: &String| {
                mor_ix
                    .get(name)
                    .copied()
                    .ok_or_else(|| Error::Construction(format!("composition mentions unknown morphism `{name}`")))
            };
            let (gi, fi, gfi) = (lookup(g)?, lookup(f)?, lookup(gf)?);
            if all[fi].dst != all[gi].src {
                return Err(Error::Construction(format!(
                    "composition entry ({g}, {f}) is not a composable pair"
                )));
            }
            if all[gfi].src != all[fi].src || all[gfi].dst != all[gi].dst {
                return Err(Error::Construction(format!(
                    "composite {gf} of ({g}, {f}) has the wrong source or target"
                )));
            }
            let slot = &mut table[gi * m + fi];
            if *slot != NO_COMPOSITE && *slot != gfi as u32 {
                return Err(Error::Construction(format!(
                    "conflicting composites for ({g}, {f})"
                )));
            }
            *slot = gfi as u32;
        }
        Self::finish(objects, all, identity, table, obj_ix, mor_ix)
    }

    /// Builds a category whose morphisms carry a semantic key; composition is computed
    /// on keys and resolved back to morphisms by `(src, dst, key)`.
    pub fn concrete<K, FI, FC>(
        objects: Vec<String>,
        arrows: Vec<(String, String, String, K)>,
        identity_key: FI,
        compose_keys: FC,
    ) -> Result<Self>
    where
        K: Clone + Eq + Hash,
        FI: Fn(&str) -> K,
        FC: Fn(&K, &K) -> K,
    {
        let mut keyed: Vec<(String, String, String, K)> = objects
            .iter()
            .map(|o| (identity_id(o), o.clone(), o.clone(), identity_key(o)))
            .collect();
        keyed.extend(arrows);
        let mut by_key: HashMap<(String, String, K), String> = HashMap::new();
        for (id, s, d, k) in &keyed {
            if by_key.insert((s.clone(), d.clone(), k.clone()), id.clone()).is_some() {
                return Err(Error::Construction(format!("two morphisms share the key of `{id}`")));
            }
        }
        let mut out: BTreeMap<String, usize> = BTreeMap::new();
        for (i, (id, ..)) in keyed.iter().enumerate() {
            out.insert(id.clone(), i);
        }
        let mut composition = Vec::new();
        for (gid, gs, gd, gk) in &keyed {
            for (fid, fs, fd, fk) in &keyed {
                if fd != gs || gs == gd && *gid == identity_id(gs) || fs == fd && *fid == identity_id(fs) {
                    continue;
                }
                let k = compose_keys(gk, fk);
                let target = by_key.get(&(fs.clone(), gd.clone(), k)).ok_or_else(|| {
                    Error::Construction(format!("composite of ({gid}, {fid}) is not among the arrows"))
                })?;
                composition.push((gid.clone(), fid.clone(), target.clone()));
            }
        }
        let non_identity = keyed
            .into_iter()
            .filter(|(id, s, d, _)| !(s == d && *id == identity_id(s)))
            .map(|(id, s, d, _)| (id, s, d))
            .collect();
        Self::from_presentation(objects, non_identity, composition)
    }

    fn finish(
        objects: Vec<String>,
        morphisms: Vec<MorphismData>,
        identity: Vec<usize>,
        compose: Vec<u32>,
        obj_ix: HashMap<String, usize>,
        mor_ix: HashMap<String, usize>,
    ) -> Result<Self> {
        let n = objects.len();
        let mut homs = vec![Vec::new(); n * n];
        for (k, md) in morphisms.iter().enumerate() {
            homs[md.src * n + md.dst].push(k);
        }
        let cat = FinCategory { objects, morphisms, identity, compose, homs, obj_ix, mor_ix };
        cat.validate()?;
        Ok(cat)
    }

    /// Exhaustive check of totality, units and associativity.
    fn validate(&self) -> Result<()> {
        let m = self.morphisms.len();
        for g in 0..m {
            for f in 0..m {
                let composable = self.morphisms[f].dst == self.morphisms[g].src;
                let present = self.compose[g * m + f] != NO_COMPOSITE;
                if composable && !present {
                    return Err(Error::Construction(format!(
                        "missing composite for ({}, {})",
                        self.morphisms[g].id, self.morphisms[f].id
                    )));
                }
                if !composable && present {
                    return Err(Error::Construction(format!(
                        "composite defined for non-composable ({}, {})",
                        self.morphisms[g].id, self.morphisms[f].id
                    )));
                }
            }
        }
        for (o, &i) in self.identity.iter().enumerate() {
            for &f in self.homs_from(o).iter() {
                if self.compose_ix(f, i) != f {
                    return Err(Error::Construction(format!(
                        "identity {} is not a right unit for {}",
                        self.morphisms[i].id, self.morphisms[f].id
                    )));
                }
            }
            for &f in self.homs_into(o).iter() {
                if self.compose_ix(i, f) != f {
                    return Err(Error::Construction(format!(
                        "identity {} is not a left unit for {}",
                        self.morphisms[i].id, self.morphisms[f].id
                    )));
                }
            }
        }
        let n = self.objects.len();
        for h in 0..m {
            let b = self.morphisms[h].dst;
            for c in 0..n {
                for &f in &self.homs[b * n + c] {
                    let fh = self.compose_ix(f, h);
                    for d in 0..n {
                        for &g in &self.homs[c * n + d] {
                            let lhs = self.compose_ix(g, fh);
                            let rhs = self.compose_ix(self.compose_ix(g, f), h);
                            if lhs != rhs {
                                return Err(Error::Construction(format!(
                                    "associativity fails for ({}, {}, {})",
                                    self.morphisms[g].id, self.morphisms[f].id, self.morphisms[h].id
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn morphism(&self, k: usize) -> &MorphismData {
        &self.morphisms[k]
    }

    pub fn morphisms(&self) -> &[MorphismData] {
        &self.morphisms
    }

    pub fn morphism_id(&self, k: usize) -> &str {
        &self.morphisms[k].id
    }

    pub fn src(&self, k: usize) -> usize {
        self.morphisms[k].src
    }

    pub fn dst(&self, k: usize) -> usize {
        self.morphisms[k].dst
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identity[o]
    }

    pub fn is_identity(&self, k: usize) -> bool {
        self.identity[self.morphisms[k].src] == k
    }

    pub fn object_ix(&self, name: &str) -> Result<usize> {
        self.obj_ix.get(name).copied().ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn morphism_ix(&self, name: &str) -> Result<usize> {
        self.mor_ix.get(name).copied().ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    /// `g ∘ f`, or `None` when the pair is not composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        let c = self.compose[g * self.morphisms.len() + f];
        (c != NO_COMPOSITE).then_some(c as usize)
    }

    /// `g ∘ f` for a pair already known to be composable.
    pub fn compose_ix(&self, g: usize, f: usize) -> usize {
        self.compose(g, f).expect("composable pair")
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a * self.objects.len() + b]
    }

    pub fn homs_from(&self, a: usize) -> Vec<usize> {
        (0..self.objects.len()).flat_map(|b| self.hom(a, b).iter().copied()).collect()
    }

    pub fn homs_into(&self, b: usize) -> Vec<usize> {
        (0..self.objects.len()).flat_map(|a| self.hom(a, b).iter().copied()).collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.morphisms.len() == self.objects.len()
    }

    /// Non-identity morphisms that are not a composite of two non-identity morphisms.
    pub fn indecomposables(&self) -> Vec<usize> {
        let m = self.morphisms.len();
        let mut decomposable = vec![false; m];
        for g in 0..m {
            if self.is_identity(g) {
                continue;
            }
            for &f in &self.homs_into(self.src(g)) {
                if !self.is_identity(f) {
                    decomposable[self.compose_ix(g, f)] = true;
                }
            }
        }
        (0..m).filter(|&k| !self.is_identity(k) && !decomposable[k]).collect()
    }

    pub fn to_doc(&self) -> CategoryDoc {
        let morphisms: Vec<MorphismDoc> = self
            .morphisms
            .iter()
            .enumerate()
            .filter(|(k, _)| !self.is_identity(*k))
            .map(|(_, md)| MorphismDoc {
                dst: self.objects[md.dst].clone(),
                id: md.id.clone(),
                src: self.objects[md.src].clone(),
            })
            .collect();
        let m = self.morphisms.len();
        let mut composition = Vec::new();
        for g in 0..m {
            for f in 0..m {
                if self.is_identity(g) || self.is_identity(f) {
                    continue;
                }
                if let Some(gf) = self.compose(g, f) {
                    composition.push([
                        self.morphisms[g].id.clone(),
                        self.morphisms[f].id.clone(),
                        self.morphisms[gf].id.clone(),
                    ]);
                }
            }
        }
        CategoryDoc { composition, morphisms, objects: self.objects.clone() }
    }

    pub fn from_doc(doc: &CategoryDoc) -> Result<Self> {
        Self::from_presentation(
            doc.objects.clone(),
            doc.morphisms.iter().map(|m| (m.id.clone(), m.src.clone(), m.dst.clone())).collect(),
            doc.composition.iter().map(|[g, f, gf]| (g.clone(), f.clone(), gf.clone())).collect(),
        )
    }
}

/// Text form of a category: keys sorted, lists in canonical id order, identities implicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDoc {
    #[serde(default)]
    pub composition: Vec<[String; 3]>,
    #[serde(default)]
    pub morphisms: Vec<MorphismDoc>,
    pub objects: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub dst: String,
    pub id: String,
    pub src: String,
}

/// A functor between finite categories, checked on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatFunctor {
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    pub obj_map: Vec<usize>,
    pub mor_map: Vec<usize>,
}

impl CatFunctor {
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: Vec<usize>,
        mor_map: Vec<usize>,
    ) -> Result<Self> {
        let f = CatFunctor { source, target, obj_map, mor_map };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.obj_map.len() != s.num_objects() || self.mor_map.len() != s.num_morphisms() {
            return Err(Error::Validation("functor maps have the wrong length".into()));
        }
        for k in 0..s.num_morphisms() {
            let image = self.mor_map[k];
            if t.src(image) != self.obj_map[s.src(k)] || t.dst(image) != self.obj_map[s.dst(k)] {
                return Err(Error::Validation(format!(
                    "functor does not preserve source/target of {}",
                    s.morphism_id(k)
                )));
            }
        }
        for o in 0..s.num_objects() {
            if self.mor_map[s.identity(o)] != t.identity(self.obj_map[o]) {
                return Err(Error::Validation(format!(
                    "functor does not preserve the identity of {}",
                    s.object_name(o)
                )));
            }
        }
        for g in 0..s.num_morphisms() {
            for f in s.homs_into(s.src(g)) {
                let gf = s.compose_ix(g, f);
                if self.mor_map[gf] != t.compose_ix(self.mor_map[g], self.mor_map[f]) {
                    return Err(Error::Validation(format!(
                        "functor does not preserve the composite ({}, {})",
                        s.morphism_id(g),
                        s.morphism_id(f)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_injective_on_objects(&self) -> bool {
        let mut seen = self.obj_map.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }
}

/// Category of a finite poset given by a reflexive, transitive relation.
pub fn poset(objects: Vec<String>, le: impl Fn(usize, usize) -> bool) -> Result<FinCategory> {
    let mut arrows = Vec::new();
    for (i, a) in objects.iter().enumerate() {
        for (j, b) in objects.iter().enumerate() {
            if i != j && le(i, j) {
                arrows.push((format!("{a}>{b}"), a.clone(), b.clone(), ()));
            }
        }
    }
    FinCategory::concrete(objects, arrows, |_| (), |_, _| ())
}

/// The ordinal `[n] = {0 → 1 → … → n}`.
pub fn chain_category(n: usize) -> FinCategory {
    let names = (0..=n).map(|i| i.to_string()).collect();
    poset(names, |i, j| i <= j).expect("chain poset is a category")
}

/// The arrow category `{0 → 1}`.
pub fn arrow_category() -> FinCategory {
    chain_category(1)
}

/// The functor between thin categories determined by an object map.
pub fn poset_functor(source: Arc<FinCategory>, target: Arc<FinCategory>, obj_map: Vec<usize>) -> Result<CatFunctor> {
    let mut mor_map = Vec::with_capacity(source.num_morphisms());
    for k in 0..source.num_morphisms() {
        let (a, b) = (obj_map[source.src(k)], obj_map[source.dst(k)]);
        match target.hom(a, b) {
            [one] => mor_map.push(*one),
            _ => {
                return Err(Error::Construction(format!(
                    "no unique morphism {} -> {} for {}",
                    target.object_name(a),
                    target.object_name(b),
                    source.morphism_id(k)
                )))
            }
        }
    }
    CatFunctor::new(source, target, obj_map, mor_map)
}

/// Grid object name for row `i`, column `j`.
pub fn grid_object(i: usize, j: usize) -> String {
    format!("{i}{j}")
}

/// The product poset `[m] × [n]` with objects `ij`.
pub fn grid_category(m: usize, n: usize) -> FinCategory {
    assert!(m < 10 && n < 10, "grid indices are single digits");
    let mut names = Vec::new();
    let mut coords = Vec::new();
    for i in 0..=m {
        for j in 0..=n {
            names.push(grid_object(i, j));
            coords.push((i, j));
        }
    }
    // `poset` sorts nothing itself; keep coordinates aligned with the given order.
    poset(names, |a, b| coords[a].0 <= coords[b].0 && coords[a].1 <= coords[b].1)
        .expect("grid poset is a category")
}

/// Grid coordinates of a grid object name.
pub fn grid_coords(name: &str) -> (usize, usize) {
    let b = name.as_bytes();
    ((b[0] - b'0') as usize, (b[1] - b'0') as usize)
}

/// Discrete category on the given names.
pub fn discrete(names: Vec<String>) -> FinCategory {
    FinCategory::concrete(names, Vec::<(String, String, String, ())>::new(), |_| (), |_, _| ())
        .expect("discrete category")
}

/// The shape `a ← c → b` used for pushouts; objects `0` (corner), `1`, `2`.
pub fn span_category() -> FinCategory {
    poset(vec!["0".into(), "1".into(), "2".into()], |i, j| i == j || i == 0)
        .expect("span shape")
}

/// The shape `a → c ← b` used for pullbacks; objects `0`, `1`, `2` (corner).
pub fn cospan_category() -> FinCategory {
    poset(vec!["0".into(), "1".into(), "2".into()], |i, j| i == j || j == 2)
        .expect("cospan shape")
}

/// Monotone maps `[m] → [n]` in lexicographic order of their image lists.
pub fn monotone_maps(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m + 1);
    fn rec(pos: usize, m: usize, n: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == m + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            rec(pos + 1, m, n, v, cur, out);
            cur.pop();
        }
    }
    rec(0, m, n, 0, &mut cur, &mut out);
    out
}

/// Id of the `Δ^op` morphism `[n] → [m]` dual to the monotone map `θ: [m] → [n]`.
pub fn simplex_op_morphism_id(n: usize, m: usize, theta: &[usize]) -> String {
    let images: String = theta.iter().map(|v| char::from(b'0' + *v as u8)).collect();
    format!("{n}>{m}:{images}")
}

/// The opposite of the full subcategory of `Δ` on `[0], …, [N]`.
pub fn truncated_simplex_op(truncation: usize) -> Result<FinCategory> {
    if truncation > SIMPLEX_TRUNCATION_CAP {
        return Err(Error::budget(
            format!("Δ^op truncation {truncation}"),
            SIMPLEX_TRUNCATION_CAP,
        ));
    }
    let objects: Vec<String> = (0..=truncation).map(|k| k.to_string()).collect();
    let mut arrows = Vec::new();
    for n in 0..=truncation {
        for m in 0..=truncation {
            for theta in monotone_maps(m, n) {
                let is_identity = n == m && theta.iter().enumerate().all(|(i, &v)| i == v);
                if is_identity {
                    continue;
                }
                arrows.push((
                    simplex_op_morphism_id(n, m, &theta),
                    n.to_string(),
                    m.to_string(),
                    theta,
                ));
            }
        }
    }
    let identity_key = |o: &str| {
        let k: usize = o.parse().expect("numeric object");
        (0..=k).collect::<Vec<usize>>()
    };
    // For g∘f in Δ^op the underlying monotone map is θ_f ∘ θ_g.
    let compose = |g: &Vec<usize>, f: &Vec<usize>| g.iter().map(|&x| f[x]).collect::<Vec<usize>>();
    FinCategory::concrete(objects, arrows, identity_key, compose)
}

/// Monotone map underlying a `Δ^op` morphism id.
pub fn simplex_op_theta(id: &str, target_object: usize) -> Vec<usize> {
    match id.split_once(':') {
        Some((_, images)) => images.bytes().map(|b| (b - b'0') as usize).collect(),
        None => (0..=target_object).collect(),
    }
}

/// Full subcategory on `objs` with its inclusion functor.
pub fn full_subcategory(
    c: &Arc<FinCategory>,
    objs: &[String],
) -> Result<(Arc<FinCategory>, CatFunctor)> {
    let mut keep = Vec::new();
    for o in objs {
        keep.push(c.object_ix(o)?);
    }
    keep.sort_unstable();
    keep.dedup();
    let names: Vec<String> = keep.iter().map(|&o| c.object_name(o).to_string()).collect();
    let mut arrows = Vec::new();
    for &a in &keep {
        for &b in &keep {
            for &k in c.hom(a, b) {
                if !c.is_identity(k) {
                    arrows.push((
                        c.morphism_id(k).to_string(),
                        c.object_name(a).to_string(),
                        c.object_name(b).to_string(),
                        k,
                    ));
                }
            }
        }
    }
    let sub = FinCategory::concrete(
        names,
        arrows,
        |o| c.identity(c.object_ix(o).expect("kept object")),
        |g, f| c.compose_ix(*g, *f),
    )?;
    let sub = Arc::new(sub);
    let obj_map = (0..sub.num_objects())
        .map(|o| c.object_ix(sub.object_name(o)))
        .collect::<Result<Vec<_>>>()?;
    let mor_map = (0..sub.num_morphisms())
        .map(|k| c.morphism_ix(sub.morphism_id(k)))
        .collect::<Result<Vec<_>>>()?;
    let inclusion = CatFunctor::new(sub.clone(), c.clone(), obj_map, mor_map)?;
    Ok((sub, inclusion))
}

/// Opposite category; morphism ids are kept, so indices line up with `c`.
pub fn opposite(c: &FinCategory) -> FinCategory {
    let morphisms = c
        .morphisms()
        .iter()
        .enumerate()
        .filter(|(k, _)| !c.is_identity(*k))
        .map(|(_, md)| {
            (md.id.clone(), c.object_name(md.dst).to_string(), c.object_name(md.src).to_string())
        })
        .collect();
    let mut composition = Vec::new();
    for g in 0..c.num_morphisms() {
        for f in 0..c.num_morphisms() {
            if c.is_identity(g) || c.is_identity(f) {
                continue;
            }
            // In the opposite, g ∘op f is defined when dst_op(f) = src_op(g), i.e. f ∘ g in c.
            if let Some(fg) = c.compose(f, g) {
                composition.push((
                    c.morphism_id(g).to_string(),
                    c.morphism_id(f).to_string(),
                    c.morphism_id(fg).to_string(),
                ));
            }
        }
    }
    FinCategory::from_presentation(c.objects().to_vec(), morphisms, composition)
        .expect("opposite of a valid category is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> String {
        x.to_string()
    }

    #[test]
    fn arrow_poset_has_three_morphisms() {
        let c = arrow_category();
        assert_eq!(c.num_objects(), 2);
        assert_eq!(c.num_morphisms(), 3);
    }

    #[test]
    fn non_associative_table_names_the_triple() {
        // a -f-> b -g-> c -h-> d with g∘f = u, h∘g = v, but h∘u ≠ v∘f.
        let objects = vec![s("a"), s("b"), s("c"), s("d")];
        let morphisms = vec![
            (s("f"), s("a"), s("b")),
            (s("g"), s("b"), s("c")),
            (s("h"), s("c"), s("d")),
            (s("u"), s("a"), s("c")),
            (s("v"), s("b"), s("d")),
            (s("w1"), s("a"), s("d")),
            (s("w2"), s("a"), s("d")),
        ];
        let composition = vec![
            (s("g"), s("f"), s("u")),
            (s("h"), s("g"), s("v")),
            (s("h"), s("u"), s("w1")),
            (s("v"), s("f"), s("w2")),
        ];
        let err = FinCategory::from_presentation(objects, morphisms, composition).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("associativity"), "{msg}");
        assert!(msg.contains("(h, g, f)"), "{msg}");
    }

    #[test]
    fn missing_composite_and_dangling_target_are_rejected() {
        let err = FinCategory::from_presentation(
            vec![s("a"), s("b"), s("c")],
            vec![(s("f"), s("a"), s("b")), (s("g"), s("b"), s("c"))],
            vec![],
        )
        .unwrap_err();
        assert!(err.to_string().contains("missing composite"));
        let err = FinCategory::from_presentation(vec![s("a")], vec![(s("f"), s("a"), s("z"))], vec![])
            .unwrap_err();
        assert!(err.to_string().contains("dangling target"));
    }

    #[test]
    fn commutative_square_presentation() {
        let objects = vec![s("00"), s("01"), s("10"), s("11")];
        let morphisms = vec![
            (s("h0"), s("00"), s("01")),
            (s("v0"), s("00"), s("10")),
            (s("v1"), s("01"), s("11")),
            (s("h1"), s("10"), s("11")),
            (s("diag"), s("00"), s("11")),
        ];
        let composition = vec![(s("v1"), s("h0"), s("diag")), (s("h1"), s("v0"), s("diag"))];
        let c = FinCategory::from_presentation(objects, morphisms, composition).unwrap();
        assert_eq!(c.num_objects(), 4);
        assert_eq!(c.num_morphisms(), 9);
        // Same count as the product of two arrow categories: 3 · 3.
        assert_eq!(c.num_morphisms(), grid_category(1, 1).num_morphisms());
    }

    #[test]
    fn grid_counts() {
        assert_eq!(grid_category(1, 1).num_objects(), 4);
        assert_eq!(grid_category(1, 1).num_morphisms(), 9);
        assert_eq!(grid_category(0, 0).num_objects(), 1);
        assert_eq!(grid_category(0, 0).num_morphisms(), 1);
        assert_eq!(grid_category(2, 1).num_objects(), 6);
        assert_eq!(grid_category(2, 1).num_morphisms(), 18);
    }

    #[test]
    fn grid_count_is_product_of_chain_counts() {
        for m in 0..=4 {
            for n in 0..=4 {
                let expected = chain_category(m).num_morphisms() * chain_category(n).num_morphisms();
                assert_eq!(grid_category(m, n).num_morphisms(), expected, "grid({m},{n})");
            }
        }
    }

    #[test]
    fn full_subcategories_of_the_square() {
        let c = Arc::new(grid_category(1, 1));
        let (sub, inc) = full_subcategory(&c, &[s("00"), s("01"), s("10")]).unwrap();
        assert_eq!(sub.num_objects(), 3);
        assert_eq!(sub.num_morphisms(), 5);
        assert!(inc.is_injective_on_objects());

        let (all, inc) = full_subcategory(&c, c.objects()).unwrap();
        assert_eq!(*all, *c);
        assert_eq!(inc.obj_map, (0..4).collect::<Vec<_>>());
        assert_eq!(inc.mor_map, (0..9).collect::<Vec<_>>());

        let (single, _) = full_subcategory(&c, &[s("11")]).unwrap();
        assert_eq!((single.num_objects(), single.num_morphisms()), (1, 1));

        assert!(matches!(full_subcategory(&c, &[s("22")]), Err(Error::UnknownObject(_))));
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn truncated_simplex_counts() {
        let d0 = truncated_simplex_op(0).unwrap();
        assert_eq!((d0.num_objects(), d0.num_morphisms()), (1, 1));
        let d1 = truncated_simplex_op(1).unwrap();
        assert_eq!((d1.num_objects(), d1.num_morphisms()), (2, 7));
        let d2 = truncated_simplex_op(2).unwrap();
        // hom_Δ([1],[2]) has C(2+2, 2) = 6 monotone maps; in Δ^op these go [2] → [1].
        let two = d2.object_ix("2").unwrap();
        let one = d2.object_ix("1").unwrap();
        assert_eq!(d2.hom(two, one).len(), binomial(4, 2));
        // Total morphism count: Σ_{a,b ≤ 2} C(a+b+1, a+1).
        let total: usize = (0..=2)
            .flat_map(|a| (0..=2).map(move |b| (a, b)))
            .map(|(a, b)| binomial(a + b + 1, a + 1))
            .sum();
        assert_eq!(d2.num_morphisms(), total);
        assert!(truncated_simplex_op(SIMPLEX_TRUNCATION_CAP + 1).unwrap_err().is_budget());
    }

    #[test]
    fn doc_round_trip_is_canonical() {
        let c = grid_category(2, 1);
        let doc = c.to_doc();
        let back = FinCategory::from_doc(&doc).unwrap();
        assert_eq!(back, c);
        let a = serde_json::to_string(&doc).unwrap();
        let b = serde_json::to_string(&back.to_doc()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn opposite_is_involutive() {
        let c = truncated_simplex_op(2).unwrap();
        assert_eq!(opposite(&opposite(&c)), c);
    }

    #[test]
    fn indecomposables_of_grid_are_covering_relations() {
        let c = grid_category(2, 1);
        assert_eq!(c.indecomposables().len(), 2 * 2 + 3);
    }

    #[test]
    fn truncated_simplex_has_no_indecomposables() {
        // d_i = (d_i s_j) d_j once both degrees are present.
        let c = truncated_simplex_op(2).unwrap();
        assert!(c.indecomposables().is_empty());
    }
}
