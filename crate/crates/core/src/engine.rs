//! Degree-by-degree construction of diagrams, maps, factorizations and lifts.
//!
//! Everything here works on a [`SkeletalDiagram`], a diagram defined on the objects
//! of degree at most `n`. An entry of degree `n + 1` is added by choosing an object
//! together with maps from its latching object and to its matching object whose
//! composite is the canonical map; edges through the new object are then forced by
//! the unique Reedy factorization of each morphism.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::ambient::{pullback, pullback_mediate, pushout, pushout_mediate, Carrier, Cone, LiftIter, ModelAssignment, ModelStructure, Square};
use crate::error::{Error, Result};
use crate::diagram::{
    latching_object, matching_object, relative_latching, relative_matching, Diagram, DiagramMap, DiagramView,
    SliceCone, Structure,
};
use crate::fincat::FinCategory;
use crate::reedy::{ReedyStructure, Slice};

/// A diagram defined on the objects of degree at most `level`.
pub struct SkeletalDiagram<C: Carrier> {
    pub shape: Arc<FinCategory>,
    /// `None` when nothing is defined yet.
    pub level: Option<usize>,
    pub entries: Vec<Option<C::Obj>>,
    pub edges: Vec<Option<C::Mor>>,
}

impl<C: Carrier> Clone for SkeletalDiagram<C> {
    fn clone(&self) -> Self {
        SkeletalDiagram { shape: self.shape.clone(), level: self.level, entries: self.entries.clone(), edges: self.edges.clone() }
    }
}

impl<C: Carrier> DiagramView<C> for SkeletalDiagram<C> {
    fn shape(&self) -> &Arc<FinCategory> {
        &self.shape
    }

    fn entry(&self, o: usize) -> &C::Obj {
        self.entries[o].as_ref().expect("entry below the current level")
    }

    fn edge(&self, k: usize) -> &C::Mor {
        self.edges[k].as_ref().expect("edge below the current level")
    }
}

impl<C: Carrier> SkeletalDiagram<C> {
    pub fn empty(shape: Arc<FinCategory>) -> Self {
        let (n, m) = (shape.num_objects(), shape.num_morphisms());
        SkeletalDiagram { shape, level: None, entries: vec![None; n], edges: vec![None; m] }
    }

    /// Restriction of a full diagram to degrees `≤ level` (`None`: nothing).
    pub fn truncate(r: &ReedyStructure, x: &Diagram<C>, level: Option<usize>) -> Self {
        let keep = |o: usize| level.is_some_and(|n| r.degree(o) <= n);
        let s = &x.shape;
        SkeletalDiagram {
            shape: s.clone(),
            level,
            entries: (0..s.num_objects()).map(|o| keep(o).then(|| x.entries[o].clone())).collect(),
            edges: (0..s.num_morphisms())
                .map(|k| (keep(s.src(k)) && keep(s.dst(k))).then(|| x.edges[k].clone()))
                .collect(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    pub fn into_diagram(self, c: &C) -> Result<Diagram<C>> {
        if !self.is_complete() {
            return Err(Error::Precondition("skeletal diagram is not defined everywhere".into()));
        }
        let entries = self.entries.into_iter().map(|e| e.expect("complete")).collect();
        let edges = self.edges.into_iter().map(|e| e.expect("complete")).collect();
        Diagram::new(c, self.shape, entries, edges)
    }
}

/// The data added at one object of the next degree.
pub struct ObjectChoice<C: Carrier> {
    pub entry: C::Obj,
    /// `L_αX → X_α`.
    pub latch: C::Mor,
    /// `X_α → M_αX`.
    pub matching: C::Mor,
}

impl<C: Carrier> Clone for ObjectChoice<C> {
    fn clone(&self) -> Self {
        ObjectChoice { entry: self.entry.clone(), latch: self.latch.clone(), matching: self.matching.clone() }
    }
}

/// Latching and matching cones at `alpha` of a diagram defined below `alpha`, and the
/// canonical map between their apexes.
pub struct Boundary<C: Carrier> {
    pub latching: Cone<C::Obj, C::Mor>,
    pub matching: Cone<C::Obj, C::Mor>,
    pub canonical: C::Mor,
}

fn restricted<C: Carrier, D: DiagramView<C> + ?Sized>(x: &D, s: &Slice) -> (Vec<C::Obj>, Vec<C::Mor>) {
    let entries = (0..s.cat.num_objects()).map(|o| x.entry(s.base_object(o)).clone()).collect();
    let edges = (0..s.cat.num_morphisms()).map(|k| x.edge(s.base_morphism(k)).clone()).collect();
    (entries, edges)
}

/// `L_αX`, `M_αX` and `L_αX → M_αX` from the part of `x` below `alpha`.
pub fn boundary<C: Carrier, D: DiagramView<C> + ?Sized>(c: &C, r: &ReedyStructure, x: &D, alpha: usize) -> Result<Boundary<C>> {
    let cat = r.cat();
    let (ls, ms) = (r.latching(alpha), r.matching(alpha));
    let (le, ledges) = restricted(x, &ls);
    let latching = c.colimit(&ls.cat, &le, &ledges)?;
    let (me, medges) = restricted(x, &ms);
    let matching = c.limit(&ms.cat, &me, &medges)?;
    // Component at (u: β → α, v: α → γ) is X(v ∘ u), which lives below α.
    let mut into_m = Vec::with_capacity(ls.legs.len());
    for (o, &u) in ls.legs.iter().enumerate() {
        let legs: Vec<C::Mor> = ms.legs.iter().map(|&v| x.edge(cat.compose_ix(v, u)).clone()).collect();
        into_m.push(c.limit_mediate(&matching, &le[o], &legs)?);
    }
    let canonical = c.colimit_mediate(&latching, &matching.apex, &into_m)?;
    Ok(Boundary { latching, matching, canonical })
}

fn leg_index(s: &Slice, u: usize) -> usize {
    s.legs.iter().position(|&v| v == u).expect("morphism is a slice object")
}

/// Adds every object of degree `n` (the next level) from the given choices.
pub fn extend_object<C: Carrier>(
    c: &C,
    r: &ReedyStructure,
    xhat: &SkeletalDiagram<C>,
    n: usize,
    choices: &BTreeMap<usize, ObjectChoice<C>>,
) -> Result<SkeletalDiagram<C>> {
    let expected = if n == 0 { None } else { Some(n - 1) };
    if xhat.level != expected {
        return Err(Error::Precondition(format!("extension to degree {n} needs a diagram defined below it")));
    }
    let cat = r.cat().clone();
    let new_objs = r.objects_of_degree(n);
    let mut cones = BTreeMap::new();
    for &alpha in &new_objs {
        let ch = choices
            .get(&alpha)
            .ok_or_else(|| Error::Precondition(format!("no choice at {}", cat.object_name(alpha))))?;
        let b = boundary(c, r, xhat, alpha)?;
        let name = cat.object_name(alpha);
        if c.dom(&ch.latch) != b.latching.apex || c.cod(&ch.latch) != ch.entry {
            return Err(Error::Validation(format!("latching choice at {name} has the wrong endpoints")));
        }
        if c.dom(&ch.matching) != ch.entry || c.cod(&ch.matching) != b.matching.apex {
            return Err(Error::Validation(format!("matching choice at {name} has the wrong endpoints")));
        }
        if c.compose(&ch.matching, &ch.latch) != b.canonical {
            return Err(Error::Validation(format!("choice at {name} does not factor the canonical map")));
        }
        cones.insert(alpha, b);
    }
    let out = extend_with_boundaries(c, r, xhat, n, choices, &cones);
    check_functorial(c, r, &out, n)?;
    Ok(out)
}

/// As [`extend_object`] with the boundaries at the new objects already computed and the
/// choices known to factor their canonical maps; nothing is re-checked.
pub(crate) fn extend_with_boundaries<C: Carrier>(
    c: &C,
    r: &ReedyStructure,
    xhat: &SkeletalDiagram<C>,
    n: usize,
    choices: &BTreeMap<usize, ObjectChoice<C>>,
    cones: &BTreeMap<usize, Boundary<C>>,
) -> SkeletalDiagram<C> {
    let cat = r.cat().clone();
    let mut out = xhat.clone();
    for (&alpha, ch) in choices {
        out.entries[alpha] = Some(ch.entry.clone());
    }
    out.level = Some(n);
    let is_new = |o: usize| r.degree(o) == n;
    let defined = |o: usize| r.degree(o) <= n;
    // Z on a minus map out of a new object, or a plus map into one.
    let minus_edge = |out: &SkeletalDiagram<C>, p: usize| -> C::Mor {
        let a = cat.src(p);
        if cat.is_identity(p) {
            c.identity(out.entry(a))
        } else if is_new(a) {
            let o = leg_index(&r.matching(a), p);
            c.compose(&cones[&a].matching.legs[o], &choices[&a].matching)
        } else {
            out.edge(p).clone()
        }
    };
    let plus_edge = |out: &SkeletalDiagram<C>, g: usize| -> C::Mor {
        let b = cat.dst(g);
        if cat.is_identity(g) {
            c.identity(out.entry(b))
        } else if is_new(b) {
            let o = leg_index(&r.latching(b), g);
            c.compose(&choices[&b].latch, &cones[&b].latching.legs[o])
        } else {
            out.edge(g).clone()
        }
    };
    let mut fresh = Vec::new();
    for k in 0..cat.num_morphisms() {
        let (a, b) = (cat.src(k), cat.dst(k));
        if !defined(a) || !defined(b) || !(is_new(a) || is_new(b)) {
            continue;
        }
        let (p, g) = r.factor(k);
        let e = c.compose(&plus_edge(&out, g), &minus_edge(&out, p));
        fresh.push((k, e));
    }
    for (k, e) in fresh {
        out.edges[k] = Some(e);
    }
    out
}

fn check_functorial<C: Carrier>(c: &C, r: &ReedyStructure, x: &SkeletalDiagram<C>, n: usize) -> Result<()> {
    let cat = r.cat();
    let defined = |o: usize| r.degree(o) <= n;
    for g in 0..cat.num_morphisms() {
        if !defined(cat.src(g)) || !defined(cat.dst(g)) {
            continue;
        }
        for f in cat.homs_into(cat.src(g)) {
            if !defined(cat.src(f)) {
                continue;
            }
            let gf = cat.compose_ix(g, f);
            if *x.edge(gf) != c.compose(x.edge(g), x.edge(f)) {
                return Err(Error::CheckFailed(format!(
                    "extension is not functorial at ({}, {})",
                    cat.morphism_id(g),
                    cat.morphism_id(f)
                )));
            }
        }
    }
    Ok(())
}

/// Canonical choices of a full diagram at degree `n`: its own entries with the
/// absolute latching and matching maps.
pub fn own_choices<C: Carrier>(c: &C, r: &ReedyStructure, x: &Diagram<C>, n: usize) -> Result<BTreeMap<usize, ObjectChoice<C>>> {
    let mut out = BTreeMap::new();
    for alpha in r.objects_of_degree(n) {
        let l = latching_object(c, r, x, alpha)?;
        let m = matching_object(c, r, x, alpha)?;
        out.insert(alpha, ObjectChoice { entry: x.entries[alpha].clone(), latch: l.absolute, matching: m.absolute });
    }
    Ok(out)
}

/// A map between full diagrams defined on degrees `≤ level`.
pub struct SkeletalMap<C: Carrier> {
    pub source: Arc<Diagram<C>>,
    pub target: Arc<Diagram<C>>,
    pub level: Option<usize>,
    pub comps: Vec<Option<C::Mor>>,
}

impl<C: Carrier> SkeletalMap<C> {
    pub fn empty(source: Arc<Diagram<C>>, target: Arc<Diagram<C>>) -> Self {
        let n = source.shape.num_objects();
        SkeletalMap { source, target, level: None, comps: vec![None; n] }
    }

    pub fn truncate(r: &ReedyStructure, f: &DiagramMap<C>, level: Option<usize>) -> Self {
        let comps = (0..f.comps.len())
            .map(|o| level.is_some_and(|n| r.degree(o) <= n).then(|| f.comps[o].clone()))
            .collect();
        SkeletalMap { source: f.source.clone(), target: f.target.clone(), level, comps }
    }

    fn comp(&self, o: usize) -> C::Mor {
        self.comps[o].clone().expect("component below the current level")
    }

    pub fn into_map(self, c: &C) -> Result<DiagramMap<C>> {
        if self.comps.iter().any(Option::is_none) {
            return Err(Error::Precondition("skeletal map is not defined everywhere".into()));
        }
        let comps = self.comps.into_iter().map(|f| f.expect("complete")).collect();
        DiagramMap::new(c, self.source, self.target, comps)
    }
}

/// Adds the components at degree `n`, checking the latching and matching squares.
pub fn extend_map<C: Carrier>(
    c: &C,
    r: &ReedyStructure,
    fhat: &SkeletalMap<C>,
    n: usize,
    comps: &BTreeMap<usize, C::Mor>,
) -> Result<SkeletalMap<C>> {
    let expected = if n == 0 { None } else { Some(n - 1) };
    if fhat.level != expected {
        return Err(Error::Precondition(format!("extension to degree {n} needs a map defined below it")));
    }
    let cat = r.cat();
    let (x, y) = (fhat.source.as_ref(), fhat.target.as_ref());
    let mut out = SkeletalMap { source: fhat.source.clone(), target: fhat.target.clone(), level: Some(n), comps: fhat.comps.clone() };
    for alpha in r.objects_of_degree(n) {
        let name = cat.object_name(alpha);
        let f = comps.get(&alpha).ok_or_else(|| Error::Precondition(format!("no component at {name}")))?;
        if c.dom(f) != x.entries[alpha] || c.cod(f) != y.entries[alpha] {
            return Err(Error::Validation(format!("component at {name} has the wrong endpoints")));
        }
        let (lx, ly) = (latching_object(c, r, x, alpha)?, latching_object(c, r, y, alpha)?);
        let ld = relative_latching(c, &r.latching(alpha), lx, ly, f, |o| fhat.comp(o))?;
        if c.compose(f, &ld.lx.absolute) != c.compose(&ld.ly.absolute, &ld.l_f) {
            return Err(Error::Validation(format!("latching square at {name} does not commute")));
        }
        let (mx, my) = (matching_object(c, r, x, alpha)?, matching_object(c, r, y, alpha)?);
        let md = relative_matching(c, &r.matching(alpha), mx, my, f, |o| fhat.comp(o))?;
        if c.compose(&md.my.absolute, f) != c.compose(&md.m_f, &md.mx.absolute) {
            return Err(Error::Validation(format!("matching square at {name} does not commute")));
        }
        out.comps[alpha] = Some(f.clone());
    }
    for k in 0..cat.num_morphisms() {
        let (a, b) = (cat.src(k), cat.dst(k));
        if r.degree(a) > n || r.degree(b) > n {
            continue;
        }
        if c.compose(&out.comp(b), &x.edges[k]) != c.compose(&y.edges[k], &out.comp(a)) {
            return Err(Error::CheckFailed(format!("extended map is not natural at {}", cat.morphism_id(k))));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    CofThenAcyfib,
    AcycofThenFib,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cof_then_acyfib" | "cof-then-acyfib" => Ok(Mode::CofThenAcyfib),
            "acycof_then_fib" | "acycof-then-fib" => Ok(Mode::AcycofThenFib),
            other => Err(Error::Format(format!("unknown mode `{other}`"))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Mode::CofThenAcyfib => "cof_then_acyfib",
            Mode::AcycofThenFib => "acycof_then_fib",
        }
    }
}

/// Whether the ambient factorization at an object is (cof, acyclic fib).
fn uses_cof_acyfib(structure: Structure, mode: Mode, in_c0: bool) -> Result<bool> {
    match (structure, mode) {
        (Structure::Left, Mode::CofThenAcyfib) => Ok(in_c0),
        (Structure::Left, Mode::AcycofThenFib) => Ok(false),
        (Structure::Right, Mode::CofThenAcyfib) => Ok(true),
        (Structure::Right, Mode::AcycofThenFib) => Ok(!in_c0),
        (Structure::Projective, _) => {
            Err(Error::Precondition("factorize works with the left or right modified structure".into()))
        }
    }
}

pub struct Factorization<C: Carrier> {
    pub f: DiagramMap<C>,
    pub z: Arc<Diagram<C>>,
    pub p: DiagramMap<C>,
}

/// Factors `g: X → Y` as `p ∘ f` degree by degree, factoring the canonical map
/// `X_α ⊔_{L_αX} L_αZ → Y_α ×_{M_αY} M_αZ` at each object.
pub fn factorize<C: Carrier>(
    c: &C,
    r: &ReedyStructure,
    c0: &[bool],
    a: &ModelAssignment<C>,
    g: &DiagramMap<C>,
    mode: Mode,
    structure: Structure,
) -> Result<Factorization<C>> {
    let (x, y) = (g.source.as_ref(), g.target.as_ref());
    let n_obj = r.cat().num_objects();
    let mut z = SkeletalDiagram::<C>::empty(r.cat().clone());
    let mut fc: Vec<Option<C::Mor>> = vec![None; n_obj];
    let mut pc: Vec<Option<C::Mor>> = vec![None; n_obj];
    for n in 0..=r.max_degree() {
        let mut choices = BTreeMap::new();
        let mut pending = Vec::new();
        for alpha in r.objects_of_degree(n) {
            let (ls, ms) = (r.latching(alpha), r.matching(alpha));
            let bz = boundary(c, r, &z, alpha)?;
            let lx = latching_object(c, r, x, alpha)?;
            let ly = latching_object(c, r, y, alpha)?;
            let mx = matching_object(c, r, x, alpha)?;
            let my = matching_object(c, r, y, alpha)?;
            let lz = SliceCone::<C> { cone: bz.latching.clone(), absolute: c.identity(&bz.latching.apex) };
            let mz = SliceCone::<C> { cone: bz.matching.clone(), absolute: c.identity(&bz.matching.apex) };
            let comp_f = |o: usize| fc[o].clone().expect("lower component");
            let comp_p = |o: usize| pc[o].clone().expect("lower component");
            // L̃ = X_α ⊔_{L_αX} L_αZ, legs [from L_αZ, from X_α].
            let l_f = crate::diagram::latching_map(c, &ls, &lx, &lz, comp_f)?;
            let po = pushout(c, &l_f, &lx.absolute)?;
            // M̃ = Y_α ×_{M_αY} M_αZ, legs [to Y_α, to M_αZ].
            let m_p = crate::diagram::matching_map(c, &ms, &mz, &my, comp_p)?;
            let pb = pullback(c, &my.absolute, &m_p)?;
            let l_p = crate::diagram::latching_map(c, &ls, &lz, &ly, comp_p)?;
            let m_f = crate::diagram::matching_map(c, &ms, &mx, &mz, comp_f)?;
            let from_lz = pullback_mediate(c, &my.absolute, &pb, &bz.latching.apex, &c.compose(&ly.absolute, &l_p), &bz.canonical)?;
            let g_alpha = &g.comps[alpha];
            let from_x = pullback_mediate(c, &my.absolute, &pb, &x.entries[alpha], g_alpha, &c.compose(&m_f, &mx.absolute))?;
            let canonical = pushout_mediate(c, &l_f, &po, &pb.apex, &from_lz, &from_x)?;
            let m = a.at(alpha);
            let (i, q) = if uses_cof_acyfib(structure, mode, c0[alpha])? {
                m.factor_cof_acyfib(c, &canonical)?
            } else {
                m.factor_acycof_fib(c, &canonical)?
            };
            if c.compose(&q, &i) != canonical {
                return Err(Error::Oracle(format!("factorization at {} does not compose", r.cat().object_name(alpha))));
            }
            choices.insert(
                alpha,
                ObjectChoice { entry: c.cod(&i), latch: c.compose(&i, &po.legs[0]), matching: c.compose(&pb.legs[1], &q) },
            );
            pending.push((alpha, c.compose(&i, &po.legs[1]), c.compose(&pb.legs[0], &q)));
        }
        z = extend_object(c, r, &z, n, &choices)?;
        for (alpha, f_alpha, p_alpha) in pending {
            fc[alpha] = Some(f_alpha);
            pc[alpha] = Some(p_alpha);
        }
    }
    let z = Arc::new(z.into_diagram(c)?);
    let f = DiagramMap::new(c, g.source.clone(), z.clone(), fc.into_iter().map(|m| m.expect("filled")).collect())?;
    let p = DiagramMap::new(c, z.clone(), g.target.clone(), pc.into_iter().map(|m| m.expect("filled")).collect())?;
    if p.after(c, &f).comps != g.comps {
        return Err(Error::CheckFailed("factorization does not compose to the input".into()));
    }
    Ok(Factorization { f, z, p })
}

/// A commuting square of diagram maps `top: A → X`, `left: A → B`, `right: X → Y`,
/// `bottom: B → Y`.
pub struct DiagramSquare<C: Carrier> {
    pub left: DiagramMap<C>,
    pub right: DiagramMap<C>,
    pub top: DiagramMap<C>,
    pub bottom: DiagramMap<C>,
}

impl<C: Carrier> Clone for DiagramSquare<C> {
    fn clone(&self) -> Self {
        DiagramSquare { left: self.left.clone(), right: self.right.clone(), top: self.top.clone(), bottom: self.bottom.clone() }
    }
}

impl<C: Carrier> DiagramSquare<C> {
    pub fn validate(&self, c: &C) -> Result<()> {
        let ok_ends = self.left.source == self.top.source
            && self.left.target == self.bottom.source
            && self.top.target == self.right.source
            && self.right.target == self.bottom.target;
        if !ok_ends {
            return Err(Error::Validation("square maps do not line up".into()));
        }
        if self.right.after(c, &self.top).comps != self.bottom.after(c, &self.left).comps {
            return Err(Error::Validation("square does not commute".into()));
        }
        Ok(())
    }

    /// Whether `k: B → X` is a diagonal.
    pub fn is_diagonal(&self, c: &C, k: &DiagramMap<C>) -> bool {
        k.after(c, &self.left).comps == self.top.comps && self.right.after(c, k).comps == self.bottom.comps
    }

    pub fn entry_square(&self, o: usize) -> Square<C::Mor> {
        Square {
            left: self.left.comps[o].clone(),
            right: self.right.comps[o].clone(),
            top: self.top.comps[o].clone(),
            bottom: self.bottom.comps[o].clone(),
        }
    }
}

/// Outcome counters of a lift search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct SearchStats {
    pub tries: usize,
    pub backjumps: usize,
}

enum Flow {
    Continue,
    Stop,
    /// Unwind to the given position in the object order; `None` ends the search.
    Jump(Option<usize>),
}

/// Depth-first search over per-object choices in `(degree, index)` order. Each
/// object's candidates may depend only on choices at objects of lower degree; on an
/// object with no candidates the search jumps back to the last object of lower degree.
pub(crate) struct DegreeSearch<'r, M> {
    r: &'r ReedyStructure,
    order: Vec<usize>,
    pub comps: Vec<Option<M>>,
    pub stats: SearchStats,
    max_tries: usize,
}

impl<'r, M: Clone> DegreeSearch<'r, M> {
    pub fn new(r: &'r ReedyStructure, max_tries: usize) -> Self {
        DegreeSearch { r, order: r.objects_by_degree(), comps: vec![None; r.cat().num_objects()], stats: SearchStats::default(), max_tries }
    }

    pub fn run<'a>(
        &mut self,
        candidates: &mut dyn FnMut(usize, &[Option<M>]) -> Result<LiftIter<'a, M>>,
        on_solution: &mut dyn FnMut(&[Option<M>]) -> bool,
    ) -> Result<()> {
        self.rec(0, candidates, on_solution).map(|_| ())
    }

    fn rec<'a>(
        &mut self,
        k: usize,
        candidates: &mut dyn FnMut(usize, &[Option<M>]) -> Result<LiftIter<'a, M>>,
        on_solution: &mut dyn FnMut(&[Option<M>]) -> bool,
    ) -> Result<Flow> {
        if k == self.order.len() {
            return Ok(if on_solution(&self.comps) { Flow::Continue } else { Flow::Stop });
        }
        let alpha = self.order[k];
        let mut iter = candidates(alpha, &self.comps)?.peekable();
        if iter.peek().is_none() {
            let d = self.r.degree(alpha);
            let back = (0..k).rev().find(|&j| self.r.degree(self.order[j]) < d);
            self.stats.backjumps += 1;
            return Ok(Flow::Jump(back));
        }
        for cand in iter {
            self.stats.tries += 1;
            if self.stats.tries > self.max_tries {
                return Err(Error::budget("degreewise search", self.max_tries));
            }
            self.comps[alpha] = Some(cand);
            match self.rec(k + 1, candidates, on_solution)? {
                Flow::Continue => {}
                Flow::Stop => {
                    return Ok(Flow::Stop);
                }
                Flow::Jump(Some(j)) if j == k => {}
                Flow::Jump(target) => {
                    self.comps[alpha] = None;
                    return Ok(Flow::Jump(target));
                }
            }
        }
        self.comps[alpha] = None;
        Ok(Flow::Continue)
    }
}

/// The entry square at `alpha` of a lifting problem, given a partial diagonal below it:
/// relative latching map of `left` against relative matching map of `right`.
pub fn induced_square<C: Carrier>(
    c: &C,
    r: &ReedyStructure,
    sq: &DiagramSquare<C>,
    k: &[Option<C::Mor>],
    alpha: usize,
) -> Result<Square<C::Mor>> {
    let (f, p) = (&sq.left, &sq.right);
    let (b, x) = (f.target.as_ref(), p.source.as_ref());
    let comp_k = |o: usize| k[o].clone().expect("lower diagonal component");
    let ls = r.latching(alpha);
    let lf = relative_latching(
        c,
        &ls,
        latching_object(c, r, f.source.as_ref(), alpha)?,
        latching_object(c, r, b, alpha)?,
        &f.comps[alpha],
        |o| f.comps[o].clone(),
    )?;
    let lxc = latching_object(c, r, x, alpha)?;
    let l_k = crate::diagram::latching_map(c, &ls, &lf.ly, &lxc, comp_k)?;
    let po = Cone { apex: lf.relative.clone(), legs: vec![lf.from_ly.clone(), lf.pre.clone()] };
    let top = pushout_mediate(c, &lf.l_f, &po, &x.entries[alpha], &c.compose(&lxc.absolute, &l_k), &sq.top.comps[alpha])?;
    let ms = r.matching(alpha);
    let mp = relative_matching(
        c,
        &ms,
        matching_object(c, r, x, alpha)?,
        matching_object(c, r, p.target.as_ref(), alpha)?,
        &p.comps[alpha],
        |o| p.comps[o].clone(),
    )?;
    let mbc = matching_object(c, r, b, alpha)?;
    let m_k = crate::diagram::matching_map(c, &ms, &mbc, &mp.mx, comp_k)?;
    let pb = Cone { apex: mp.relative.clone(), legs: vec![mp.post.clone(), mp.to_mx.clone()] };
    let bottom = pullback_mediate(c, &mp.my.absolute, &pb, &b.entries[alpha], &sq.bottom.comps[alpha], &c.compose(&m_k, &mbc.absolute))?;
    Ok(Square { left: lf.latch, right: mp.matching, top, bottom })
}

/// First diagonal of a commuting square of diagram maps, searched degree by degree
/// with lexicographic entry lifts. `Ok(None)` means no diagonal exists.
pub fn lift<C: Carrier>(c: &C, r: &ReedyStructure, sq: &DiagramSquare<C>, max_tries: usize) -> Result<(Option<DiagramMap<C>>, SearchStats)> {
    sq.validate(c)?;
    let mut search = DegreeSearch::new(r, max_tries);
    let mut found: Option<Vec<C::Mor>> = None;
    search.run(
        &mut |alpha, k| {
            let s = induced_square(c, r, sq, k, alpha)?;
            c.lifts(&s)
        },
        &mut |k| {
            found = Some(k.iter().map(|m| m.clone().expect("complete")).collect());
            false
        },
    )?;
    let stats = search.stats;
    let Some(comps) = found else { return Ok((None, stats)) };
    let k = DiagramMap::new(c, sq.left.target.clone(), sq.right.source.clone(), comps)?;
    if !sq.is_diagonal(c, &k) {
        return Err(Error::CheckFailed("constructed lift fails a triangle".into()));
    }
    Ok((Some(k), stats))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Replacement {
    Fibrant,
    Cofibrant,
}

/// `X → RX` (acyclic cofibration then fibration of `X → *`) or `QX → X`
/// (cofibration then acyclic fibration of `∅ → X`).
pub fn replacement<C: Carrier>(
    c: &C,
    r: &ReedyStructure,
    c0: &[bool],
    a: &ModelAssignment<C>,
    x: &Arc<Diagram<C>>,
    kind: Replacement,
    structure: Structure,
) -> Result<DiagramMap<C>> {
    match kind {
        Replacement::Fibrant => {
            let t = Arc::new(crate::diagram::terminal_diagram(c, r.cat().clone()));
            let g = DiagramMap::new(c, x.clone(), t, x.entries.iter().map(|e| c.to_terminal(e)).collect())?;
            Ok(factorize(c, r, c0, a, &g, Mode::AcycofThenFib, structure)?.f)
        }
        Replacement::Cofibrant => {
            let i = Arc::new(crate::diagram::initial_diagram(c, r.cat().clone()));
            let g = DiagramMap::new(c, i, x.clone(), x.entries.iter().map(|e| c.from_initial(e)).collect())?;
            Ok(factorize(c, r, c0, a, &g, Mode::CofThenAcyfib, structure)?.p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{FinSet, FinSetMap, Kind};
    use crate::diagram::{brute_force_diagonals, classify};

    fn fs(dst: usize, map: Vec<usize>) -> FinSetMap {
        FinSetMap::new(dst, map).unwrap()
    }

    fn arrow(a: usize, b: usize, e: Vec<usize>) -> Arc<Diagram<FinSet>> {
        let shape = Arc::new(crate::fincat::arrow_category());
        Arc::new(Diagram::new(&FinSet, shape, vec![a, b], vec![fs(b, e), FinSet.identity(&a), FinSet.identity(&b)]).unwrap())
    }

    #[test]
    fn round_trip_extension_recovers_the_diagram() {
        let r = ReedyStructure::simplex_op(1).unwrap();
        let x = Diagram::constant(&FinSet, r.cat().clone(), &2);
        let mut z = SkeletalDiagram::empty(r.cat().clone());
        for n in 0..=r.max_degree() {
            let ch = own_choices(&FinSet, &r, &x, n).unwrap();
            z = extend_object(&FinSet, &r, &z, n, &ch).unwrap();
        }
        assert_eq!(z.into_diagram(&FinSet).unwrap(), x);
    }

    #[test]
    fn bad_choice_is_rejected() {
        let r = ReedyStructure::chain(1);
        let x = arrow(1, 2, vec![0]);
        let z = SkeletalDiagram::truncate(&r, &x, Some(0));
        let mut ch = own_choices(&FinSet, &r, &x, 1).unwrap();
        ch.get_mut(&1).unwrap().latch = fs(2, vec![1]);
        // Monotone increasing: matching object is terminal, any latch factors. Corrupt the entry instead.
        ch.get_mut(&1).unwrap().entry = 3;
        assert!(extend_object(&FinSet, &r, &z, 1, &ch).is_err());
    }

    #[test]
    fn factorize_identity_and_noninjective() {
        let r = ReedyStructure::chain(1);
        let c0 = [true, false];
        let a = ModelAssignment::constant(Arc::new(FinSet), Kind::WeIso, 2);
        let x = arrow(2, 2, vec![0, 1]);
        let y = arrow(1, 1, vec![0]);
        let g = DiagramMap::new(&FinSet, x.clone(), y, vec![fs(1, vec![0, 0]), fs(1, vec![0, 0])]).unwrap();
        for mode in [Mode::CofThenAcyfib, Mode::AcycofThenFib] {
            let fz = factorize(&FinSet, &r, &c0, &a, &g, mode, Structure::Left).unwrap();
            assert_eq!(fz.p.after(&FinSet, &fz.f).comps, g.comps);
            let vf = classify(&FinSet, &r, &c0, &a, &fz.f, Structure::Left).unwrap();
            let vp = classify(&FinSet, &r, &c0, &a, &fz.p, Structure::Left).unwrap();
            match mode {
                Mode::CofThenAcyfib => assert!(vf.cof && vp.acyclic_fib),
                Mode::AcycofThenFib => assert!(vf.acyclic_cof && vp.fib),
            }
        }
        let id = x.identity_map(&FinSet);
        let fz = factorize(&FinSet, &r, &c0, &a, &id, Mode::CofThenAcyfib, Structure::Left).unwrap();
        assert!(fz.f.is_identity(&FinSet) && fz.p.is_identity(&FinSet));
    }

    #[test]
    fn arrow_lift_matches_brute_force() {
        // A = {a} ↪ B = {a, b}, X = {x1, x2} ↠ Y = {y}, as constant arrow diagrams.
        let r = ReedyStructure::chain(1);
        let a = arrow(1, 1, vec![0]);
        let b = arrow(2, 2, vec![0, 1]);
        let x = arrow(2, 2, vec![0, 1]);
        let y = arrow(1, 1, vec![0]);
        let left = DiagramMap::new(&FinSet, a.clone(), b.clone(), vec![fs(2, vec![0]), fs(2, vec![0])]).unwrap();
        let right = DiagramMap::new(&FinSet, x.clone(), y.clone(), vec![fs(1, vec![0, 0]), fs(1, vec![0, 0])]).unwrap();
        let top = DiagramMap::new(&FinSet, a, x, vec![fs(2, vec![0]), fs(2, vec![0])]).unwrap();
        let bottom = DiagramMap::new(&FinSet, b, y, vec![fs(1, vec![0, 0]), fs(1, vec![0, 0])]).unwrap();
        let sq = DiagramSquare { left, right, top, bottom };
        let (k, _) = lift(&FinSet, &r, &sq, 1 << 16).unwrap();
        let k = k.unwrap();
        assert_eq!(k.comps, vec![fs(2, vec![0, 0]), fs(2, vec![0, 0])]);
        let all = brute_force_diagonals(&FinSet, &sq, 1 << 16).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].comps, k.comps);
    }

    #[test]
    fn lift_against_identity_is_bottom() {
        let r = ReedyStructure::grid(1, 1);
        let x = Arc::new(Diagram::constant(&FinSet, r.cat().clone(), &2));
        let id = x.identity_map(&FinSet);
        let t = Arc::new(crate::diagram::terminal_diagram(&FinSet, r.cat().clone()));
        let p = DiagramMap::new(&FinSet, x.clone(), t.clone(), vec![fs(1, vec![0, 0]); 4]).unwrap();
        let sq = DiagramSquare { left: id.clone(), right: p.clone(), top: id.clone(), bottom: p };
        let (k, _) = lift(&FinSet, &r, &sq, 1 << 10).unwrap();
        assert!(k.unwrap().is_identity(&FinSet));
    }
}
