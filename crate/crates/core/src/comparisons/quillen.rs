//! Adjunctions between carriers and their entrywise prolongation to diagram categories.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::ambient::verify::sample_morphisms;
use crate::ambient::{Carrier, ChainCarrier, ChainMap, Complex, ModelAssignment};
use crate::budget::Budget;
use crate::diagram::{classify, sample_maps, Diagram, DiagramMap, Structure};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::reedy::ReedyStructure;

type ObjFn<A, B> = Arc<dyn Fn(&<A as Carrier>::Obj) -> Result<<B as Carrier>::Obj>>;
type MorFn<A, B> = Arc<dyn Fn(&<A as Carrier>::Mor) -> Result<<B as Carrier>::Mor>>;

/// `F ⊣ G` with `F: C → D`, described by its unit `η_X: X → GFX`. The hom bijection is
/// `g ↦ G(g) ∘ η_X`.
pub struct AdjointPair<C: Carrier, D: Carrier> {
    pub name: String,
    pub left_obj: ObjFn<C, D>,
    pub left_mor: MorFn<C, D>,
    pub right_obj: ObjFn<D, C>,
    pub right_mor: MorFn<D, C>,
    pub unit: Arc<dyn Fn(&C::Obj) -> Result<C::Mor>>,
}

impl<C: Carrier, D: Carrier> AdjointPair<C, D> {
    /// `F_*`: the entrywise image of a diagram.
    pub fn prolong_diagram(&self, d: &D, x: &Diagram<C>) -> Result<Diagram<D>> {
        let entries = x.entries.iter().map(|e| (self.left_obj)(e)).collect::<Result<_>>()?;
        let edges = x.edges.iter().map(|e| (self.left_mor)(e)).collect::<Result<_>>()?;
        Diagram::new(d, x.shape.clone(), entries, edges)
    }

    pub fn prolong_map(&self, d: &D, f: &DiagramMap<C>) -> Result<DiagramMap<D>> {
        let source = Arc::new(self.prolong_diagram(d, &f.source)?);
        let target = Arc::new(self.prolong_diagram(d, &f.target)?);
        let comps = f.comps.iter().map(|m| (self.left_mor)(m)).collect::<Result<_>>()?;
        DiagramMap::new(d, source, target, comps)
    }
}

pub fn identity_pair<C: Carrier + Clone + 'static>(c: &C) -> AdjointPair<C, C> {
    let c2 = c.clone();
    AdjointPair {
        name: "identity".into(),
        left_obj: Arc::new(|x| Ok(x.clone())),
        left_mor: Arc::new(|f| Ok(f.clone())),
        right_obj: Arc::new(|x| Ok(x.clone())),
        right_mor: Arc::new(|f| Ok(f.clone())),
        unit: Arc::new(move |x| Ok(c2.identity(x))),
    }
}

/// Coordinates `Y` with `k · Y = m`, column by column.
fn coords(k: &Matrix, m: &Matrix, p: u32) -> Result<Matrix> {
    let mut out = Matrix::zero(k.cols, m.cols);
    for j in 0..m.cols {
        let y = k.solve(&m.column(j), p).ok_or_else(|| Error::CheckFailed("column outside the kernel".into()))?;
        for (i, v) in y.into_iter().enumerate() {
            out.set(i, j, v);
        }
    }
    Ok(out)
}

fn suspend(c: &ChainCarrier, x: &Complex) -> Result<Complex> {
    if x.is_empty() {
        return Ok(Complex::zero());
    }
    let mut dims = vec![0];
    dims.extend_from_slice(x.dims());
    let mut diffs = vec![Matrix::zero(0, x.dim(0))];
    diffs.extend((1..x.len()).map(|k| x.d(k).neg(c.p)));
    c.complex(dims, diffs)
}

/// Cycles of degree 1, as columns.
fn cycles(c: &ChainCarrier, y: &Complex) -> Matrix {
    y.d(1).kernel(c.p)
}

fn loop_space(c: &ChainCarrier, y: &Complex) -> Result<Complex> {
    if y.len() <= 1 {
        return Ok(Complex::zero());
    }
    let k = cycles(c, y);
    let mut dims = vec![k.cols];
    dims.extend_from_slice(&y.dims()[2..]);
    let mut diffs = Vec::new();
    if y.len() > 2 {
        diffs.push(coords(&k, &y.d(2).neg(c.p), c.p)?);
        diffs.extend((3..y.len()).map(|j| y.d(j).neg(c.p)));
    }
    c.complex(dims, diffs)
}

/// Tensoring with `F_p` placed in degree 1, right adjoint to the shifted degree-1 cycles.
pub fn suspension_pair(c: &ChainCarrier) -> AdjointPair<ChainCarrier, ChainCarrier> {
    let (c1, c2, c3, c4, c5) = (c.clone(), c.clone(), c.clone(), c.clone(), c.clone());
    AdjointPair {
        name: "suspension".into(),
        left_obj: Arc::new(move |x| suspend(&c1, x).map(Arc::new)),
        left_mor: Arc::new(move |f: &ChainMap| {
            let (s, t) = (Arc::new(suspend(&c2, &f.src)?), Arc::new(suspend(&c2, &f.dst)?));
            let mut comps = vec![Matrix::zero(0, 0)];
            comps.extend(f.comps.iter().cloned());
            c2.map(s, t, comps)
        }),
        right_obj: Arc::new(move |y| loop_space(&c3, y).map(Arc::new)),
        right_mor: Arc::new(move |g: &ChainMap| {
            let (s, t) = (Arc::new(loop_space(&c4, &g.src)?), Arc::new(loop_space(&c4, &g.dst)?));
            if s.is_empty() || t.is_empty() {
                return Ok(c4.zero_map(&s, &t));
            }
            let (ks, kt) = (cycles(&c4, &g.src), cycles(&c4, &g.dst));
            let mut comps = vec![coords(&kt, &g.comp(1).mul(&ks, c4.p), c4.p)?];
            comps.extend((2..g.src.len().max(g.dst.len())).map(|k| g.comp(k)));
            c4.map(s, t, comps)
        }),
        unit: Arc::new(move |x: &Arc<Complex>| {
            let sx = suspend(&c5, x)?;
            let gfx = Arc::new(loop_space(&c5, &sx)?);
            if x.is_empty() {
                return Ok(c5.zero_map(x, &gfx));
            }
            let mut comps = vec![coords(&cycles(&c5, &sx), &Matrix::identity(x.dim(0)), c5.p)?];
            comps.extend((1..x.len()).map(|j| Matrix::identity(x.dim(j))));
            c5.map(x.clone(), gfx, comps)
        }),
    }
}

/// A deliberately wrong pair: `F` forgets differentials, `G` is the identity.
pub fn forgetful_differentials(c: &ChainCarrier) -> AdjointPair<ChainCarrier, ChainCarrier> {
    let (c1, c2, c3) = (c.clone(), c.clone(), c.clone());
    let flat = move |c: &ChainCarrier, x: &Complex| -> Result<Complex> {
        let diffs = (1..x.len()).map(|k| Matrix::zero(x.dim(k - 1), x.dim(k))).collect();
        c.complex(x.dims().to_vec(), diffs)
    };
    AdjointPair {
        name: "forget-differentials".into(),
        left_obj: Arc::new(move |x| flat(&c1, x).map(Arc::new)),
        left_mor: Arc::new(move |f: &ChainMap| {
            c2.map(Arc::new(flat(&c2, &f.src)?), Arc::new(flat(&c2, &f.dst)?), f.comps.clone())
        }),
        right_obj: Arc::new(|y| Ok(y.clone())),
        right_mor: Arc::new(|g| Ok(g.clone())),
        unit: Arc::new(move |x: &Arc<Complex>| {
            let comps = x.dims().iter().map(|&n| Matrix::identity(n)).collect();
            c3.map(x.clone(), Arc::new(flat(&c3, x)?), comps)
        }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QuillenReport {
    pub pair: String,
    pub structure: Structure,
    pub functorial: bool,
    pub hom_bijection: bool,
    pub preserves: bool,
    pub hom_pairs: usize,
    pub maps_checked: usize,
    pub passed: bool,
    pub witness: Option<String>,
}

fn check_functorial<C: Carrier, D: Carrier>(c: &C, d: &D, pair: &AdjointPair<C, D>, budget: &Budget) -> Result<Option<String>> {
    let maps = sample_morphisms(c, budget, budget.samples)?;
    for f in &maps {
        let x = c.dom(f);
        if (pair.left_mor)(&c.identity(&x))? != d.identity(&(pair.left_obj)(&x)?) {
            return Ok(Some(format!("F does not preserve the identity of {}", c.obj_key(&x))));
        }
        for g in maps.iter().filter(|g| c.dom(g) == c.cod(f)) {
            let lhs = (pair.left_mor)(&c.compose(g, f))?;
            let rhs = d.compose(&(pair.left_mor)(g)?, &(pair.left_mor)(f)?);
            if lhs != rhs {
                return Ok(Some(format!("F(g∘f) ≠ F(g)∘F(f) for f = {}", c.mor_key(f))));
            }
        }
    }
    Ok(None)
}

fn check_bijection<C: Carrier, D: Carrier>(
    c: &C,
    d: &D,
    pair: &AdjointPair<C, D>,
    budget: &Budget,
) -> Result<(usize, Option<String>)> {
    let mut count = 0;
    for x in c.objects(budget)? {
        let fx = (pair.left_obj)(&x)?;
        let eta = match (pair.unit)(&x) {
            Ok(e) => e,
            Err(e) => return Ok((count, Some(format!("unit at {} is not a morphism: {e}", c.obj_key(&x))))),
        };
        for y in d.objects(budget)? {
            count += 1;
            let gy = (pair.right_obj)(&y)?;
            let lhs = d.homs(&fx, &y, budget.max_homs)?;
            let rhs: BTreeSet<String> = c.homs(&x, &gy, budget.max_homs)?.iter().map(|h| c.mor_key(h)).collect();
            let mut image = BTreeSet::new();
            for g in &lhs {
                let h = c.compose(&(pair.right_mor)(g)?, &eta);
                let k = c.mor_key(&h);
                if !rhs.contains(&k) || !image.insert(k) {
                    return Ok((count, Some(format!("transpose is not injective at X = {}, Y = {}", c.obj_key(&x), d.obj_key(&y)))));
                }
            }
            if image.len() != rhs.len() {
                return Ok((count, Some(format!("transpose is not surjective at X = {}, Y = {}", c.obj_key(&x), d.obj_key(&y)))));
            }
        }
    }
    Ok((count, None))
}

/// Checks that `pair` is an adjunction and that its prolongation over `r` preserves
/// cofibrations and acyclic cofibrations of `structure`, on sampled diagram maps.
#[allow(clippy::too_many_arguments)]
pub fn check_quillen_prolongation<C: Carrier, D: Carrier>(
    c: &C,
    d: &D,
    pair: &AdjointPair<C, D>,
    r: &ReedyStructure,
    c0: &[bool],
    a: &ModelAssignment<C>,
    b: &ModelAssignment<D>,
    structure: Structure,
    budget: &Budget,
    seed: u64,
) -> Result<QuillenReport> {
    let mut report = QuillenReport {
        pair: pair.name.clone(),
        structure,
        functorial: true,
        hom_bijection: true,
        preserves: true,
        hom_pairs: 0,
        maps_checked: 0,
        passed: false,
        witness: None,
    };
    if let Some(w) = check_functorial(c, d, pair, budget)? {
        report.functorial = false;
        report.witness = Some(w);
        return Ok(report);
    }
    let (n, w) = check_bijection(c, d, pair, budget)?;
    report.hom_pairs = n;
    if let Some(w) = w {
        report.hom_bijection = false;
        report.witness = Some(w);
        return Ok(report);
    }
    for f in sample_maps(c, r, budget, seed)? {
        report.maps_checked += 1;
        let src = classify(c, r, c0, a, &f, structure)?;
        if !src.cof {
            continue;
        }
        let img = classify(d, r, c0, b, &pair.prolong_map(d, &f)?, structure)?;
        let bad = if !img.cof {
            Some("cofibration")
        } else if src.acyclic_cof && !img.acyclic_cof {
            Some("acyclic cofibration")
        } else {
            None
        };
        if let Some(what) = bad {
            report.preserves = false;
            report.witness = Some(format!("image of the {what} {} is not one", f.key(c)));
            return Ok(report);
        }
    }
    report.passed = true;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{FinSet, Kind};

    fn small() -> Budget {
        Budget::SMALL.with_dim(2).with_degree(1).with_samples(24)
    }

    #[test]
    fn identity_pair_passes() {
        let r = ReedyStructure::chain(1);
        let a = ModelAssignment::constant(Arc::new(FinSet), Kind::WeIso, 2);
        let b = Budget::SMALL.with_card(2).with_samples(16);
        let rep = check_quillen_prolongation(&FinSet, &FinSet, &identity_pair(&FinSet), &r, &[true, true], &a, &a, Structure::Left, &b, 1).unwrap();
        assert!(rep.passed, "{:?}", rep.witness);
    }

    #[test]
    fn suspension_is_left_quillen_over_the_arrow() {
        let c = ChainCarrier::new(2).unwrap();
        let pair = suspension_pair(&c);
        let x = Arc::new(Complex::disk(1));
        assert_eq!(*(pair.left_obj)(&x).unwrap(), Complex::disk(2));
        assert_eq!(*(pair.right_obj)(&Arc::new(Complex::disk(2))).unwrap(), Complex::disk(1));
        let r = ReedyStructure::chain(1);
        let a = ModelAssignment::constant(Arc::new(c.clone()), Kind::Native, 2);
        for s in [Structure::Left, Structure::Right, Structure::Projective] {
            let rep = check_quillen_prolongation(&c, &c, &pair, &r, &[true, false], &a, &a, s, &small(), 5).unwrap();
            assert!(rep.passed, "{s:?}: {:?}", rep.witness);
            assert!(rep.hom_pairs > 0 && rep.maps_checked > 0);
        }
    }

    #[test]
    fn forgetting_differentials_fails_with_witness() {
        let c = ChainCarrier::new(2).unwrap();
        let r = ReedyStructure::chain(1);
        let a = ModelAssignment::constant(Arc::new(c.clone()), Kind::Native, 2);
        let rep = check_quillen_prolongation(&c, &c, &forgetful_differentials(&c), &r, &[true, true], &a, &a, Structure::Left, &small(), 5).unwrap();
        assert!(!rep.passed);
        assert!(rep.witness.is_some());
    }
}
