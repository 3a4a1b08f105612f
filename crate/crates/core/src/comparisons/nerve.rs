//! Levels of the categorical nerve `N_n(M) = Fun([n], M)`, their face and degeneracy
//! functors, the extra degeneracies `s̄₋₁`, `s̄_n`, and the adjunctions between them.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ambient::Carrier;
use crate::budget::Budget;
use crate::diagram::{all_maps, Diagram, DiagramMap};
use crate::error::{Error, Result};
use crate::fincat::{chain_category, poset_functor, FinCategory};

/// The enumerated objects of `N_n(M)` with entries among the budgeted objects.
pub struct NerveLevel<C: Carrier> {
    pub n: usize,
    pub shape: Arc<FinCategory>,
    pub objects: Vec<Arc<Diagram<C>>>,
}

pub fn chain_shape(n: usize) -> Arc<FinCategory> {
    Arc::new(chain_category(n))
}

pub fn nerve_level<C: Carrier>(c: &C, n: usize, budget: &Budget) -> Result<NerveLevel<C>> {
    let pool = c.objects(budget)?;
    let shape = chain_shape(n);
    let mut chains: Vec<(Vec<C::Obj>, Vec<C::Mor>)> = pool.iter().map(|x| (vec![x.clone()], Vec::new())).collect();
    for _ in 0..n {
        let mut next = Vec::new();
        for (xs, fs) in &chains {
            let last = xs.last().expect("nonempty chain");
            for y in &pool {
                for f in c.homs(last, y, budget.max_homs)? {
                    let mut xs2 = xs.clone();
                    xs2.push(y.clone());
                    let mut fs2 = fs.clone();
                    fs2.push(f);
                    next.push((xs2, fs2));
                    if next.len() > budget.max_objects {
                        return Err(Error::budget(format!("nerve level {n} enumeration"), budget.max_objects));
                    }
                }
            }
        }
        chains = next;
    }
    let objects = chains.into_iter().map(|(xs, fs)| from_chain(c, &shape, xs, &fs).map(Arc::new)).collect::<Result<_>>()?;
    Ok(NerveLevel { n, shape, objects })
}

/// The functor `[n] → M` with consecutive maps `fs`.
pub fn from_chain<C: Carrier>(c: &C, shape: &Arc<FinCategory>, xs: Vec<C::Obj>, fs: &[C::Mor]) -> Result<Diagram<C>> {
    let edges = shape
        .morphisms()
        .iter()
        .map(|md| (md.src..md.dst).fold(c.identity(&xs[md.src]), |acc, k| c.compose(&fs[k], &acc)))
        .collect();
    Diagram::new(c, shape.clone(), xs, edges)
}

/// Consecutive maps `X_k → X_{k+1}`.
pub fn steps<C: Carrier>(x: &Diagram<C>) -> Vec<C::Mor> {
    let n = x.entries.len() - 1;
    (0..n).map(|k| x.edges[x.shape.hom(k, k + 1)[0]].clone()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NerveMap {
    Face(usize),
    Degen(usize),
    /// `s̄₋₁`: prepend the initial object.
    Prepend,
    /// `s̄_n`: append the final object.
    Append,
}

impl fmt::Display for NerveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NerveMap::Face(i) => write!(f, "d_{i}"),
            NerveMap::Degen(i) => write!(f, "s_{i}"),
            NerveMap::Prepend => write!(f, "sbar_-1"),
            NerveMap::Append => write!(f, "sbar_n"),
        }
    }
}

/// Applies a structure functor to an object of `N_n`.
pub fn nerve_structure_map<C: Carrier>(c: &C, x: &Diagram<C>, which: NerveMap) -> Result<Diagram<C>> {
    let n = x.entries.len() - 1;
    let reindex = |len: usize, f: &dyn Fn(usize) -> usize| -> Result<Diagram<C>> {
        let target = chain_shape(len);
        let obj_map = (0..=len).map(f).collect();
        Ok(x.restrict(&poset_functor(target, x.shape.clone(), obj_map)?))
    };
    match which {
        NerveMap::Face(i) if n >= 1 && i <= n => reindex(n - 1, &|k| if k < i { k } else { k + 1 }),
        NerveMap::Degen(i) if i <= n => reindex(n + 1, &|k| if k <= i { k } else { k - 1 }),
        NerveMap::Prepend => {
            let mut xs = vec![c.initial()];
            xs.extend(x.entries.iter().cloned());
            let mut fs = vec![c.from_initial(&x.entries[0])];
            fs.extend(steps(x));
            from_chain(c, &chain_shape(n + 1), xs, &fs)
        }
        NerveMap::Append => {
            let mut xs = x.entries.clone();
            xs.push(c.terminal());
            let mut fs = steps(x);
            fs.push(c.to_terminal(&x.entries[n]));
            from_chain(c, &chain_shape(n + 1), xs, &fs)
        }
        other => Err(Error::Precondition(format!("{other} is out of range on N_{n}"))),
    }
}

/// The adjoint pairs between `N_n` and `N_{n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NervePair {
    /// `d_i ⊣ s_i`, left adjoint `N_n → N_{n-1}`.
    FaceDegen(usize),
    /// `s_i ⊣ d_{i+1}`, left adjoint `N_{n-1} → N_n`.
    DegenFace(usize),
    /// `s̄₋₁ ⊣ d_0`.
    PrependFace,
    /// `d_n ⊣ s̄_n`.
    FaceAppend,
}

impl NervePair {
    pub fn all(n: usize) -> Vec<NervePair> {
        let mut out = Vec::new();
        for i in 0..n {
            out.push(NervePair::FaceDegen(i));
            out.push(NervePair::DegenFace(i));
        }
        out.push(NervePair::PrependFace);
        out.push(NervePair::FaceAppend);
        out
    }

    pub fn label(&self, n: usize) -> String {
        match self {
            NervePair::FaceDegen(i) => format!("d_{i} -| s_{i}"),
            NervePair::DegenFace(i) => format!("s_{i} -| d_{}", i + 1),
            NervePair::PrependFace => "sbar_-1 -| d_0".into(),
            NervePair::FaceAppend => format!("d_{n} -| sbar_{n}"),
        }
    }

    /// Levels of the left adjoint's domain and codomain.
    fn levels(&self, n: usize) -> (usize, usize) {
        match self {
            NervePair::FaceDegen(_) | NervePair::FaceAppend => (n, n - 1),
            NervePair::DegenFace(_) | NervePair::PrependFace => (n - 1, n),
        }
    }

    fn left(&self, n: usize) -> NerveMap {
        match *self {
            NervePair::FaceDegen(i) => NerveMap::Face(i),
            NervePair::DegenFace(i) => NerveMap::Degen(i),
            NervePair::PrependFace => NerveMap::Prepend,
            NervePair::FaceAppend => NerveMap::Face(n),
        }
    }

    fn right(&self) -> NerveMap {
        match *self {
            NervePair::FaceDegen(i) => NerveMap::Degen(i),
            NervePair::DegenFace(i) => NerveMap::Face(i + 1),
            NervePair::PrependFace => NerveMap::Face(0),
            NervePair::FaceAppend => NerveMap::Append,
        }
    }

    /// `Hom(LX, Y) → Hom(X, RY)` on components.
    fn forward<C: Carrier>(&self, c: &C, x: &Diagram<C>, g: &[C::Mor]) -> Vec<C::Mor> {
        match *self {
            NervePair::FaceDegen(i) => {
                let step = &x.edges[x.shape.hom(i, i + 1)[0]];
                let mut out = g[..i].to_vec();
                out.push(c.compose(&g[i], step));
                out.extend(g[i..].iter().cloned());
                out
            }
            NervePair::DegenFace(i) => {
                let mut out = g[..=i].to_vec();
                out.extend(g[i + 2..].iter().cloned());
                out
            }
            NervePair::PrependFace => g[1..].to_vec(),
            NervePair::FaceAppend => {
                let mut out = g.to_vec();
                out.push(c.to_terminal(x.entries.last().expect("nonempty")));
                out
            }
        }
    }

    /// `Hom(X, RY) → Hom(LX, Y)` on components.
    fn backward<C: Carrier>(&self, c: &C, y: &Diagram<C>, h: &[C::Mor]) -> Vec<C::Mor> {
        match *self {
            NervePair::FaceDegen(i) => {
                let mut out = h[..i].to_vec();
                out.extend(h[i + 1..].iter().cloned());
                out
            }
            NervePair::DegenFace(i) => {
                let step = &y.edges[y.shape.hom(i, i + 1)[0]];
                let mut out = h[..=i].to_vec();
                out.push(c.compose(step, &h[i]));
                out.extend(h[i + 1..].iter().cloned());
                out
            }
            NervePair::PrependFace => {
                let mut out = vec![c.from_initial(&y.entries[0])];
                out.extend(h.iter().cloned());
                out
            }
            NervePair::FaceAppend => h[..h.len() - 1].to_vec(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub n: usize,
    pub pair: String,
    pub object_pairs: usize,
    pub maps: usize,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NerveAdjunctionReport {
    pub ambient: String,
    pub n: usize,
    pub pairs: Vec<PairCheck>,
    pub passed: bool,
}

fn only_old_entries<C: Carrier>(c: &C, before: &Diagram<C>, after: &Diagram<C>) -> bool {
    let old: BTreeSet<String> = before.entries.iter().map(|e| c.obj_key(e)).collect();
    let extra = [c.obj_key(&c.initial()), c.obj_key(&c.terminal())];
    after.entries.iter().all(|e| {
        let k = c.obj_key(e);
        old.contains(&k) || extra.contains(&k)
    })
}

fn check_pair<C: Carrier>(
    c: &C,
    n: usize,
    pair: NervePair,
    lower: &NerveLevel<C>,
    upper: &NerveLevel<C>,
    cap: usize,
) -> Result<PairCheck> {
    let (dom, cod) = pair.levels(n);
    let level = |k: usize| if k == n { upper } else { lower };
    let (xs, ys) = (level(dom), level(cod));
    let mut check = PairCheck { n, pair: pair.label(n), object_pairs: 0, maps: 0, passed: true, witness: None };
    for x in &xs.objects {
        let lx = Arc::new(nerve_structure_map(c, x, pair.left(n))?);
        if !only_old_entries(c, x, &lx) {
            check.passed = false;
            check.witness = Some(format!("{} introduced a new entry", pair.left(n)));
            return Ok(check);
        }
        for y in &ys.objects {
            let ry = Arc::new(nerve_structure_map(c, y, pair.right())?);
            check.object_pairs += 1;
            let lhs = all_maps(c, &lx, y, cap)?;
            let rhs = all_maps(c, x, &ry, cap)?;
            let rhs_keys: BTreeSet<String> = rhs.iter().map(|h| h.key(c)).collect();
            let mut images = BTreeSet::new();
            let fail = |why: &str| Some(format!("{why}: X = {}, Y = {}", x.key(c), y.key(c)));
            for g in &lhs {
                check.maps += 1;
                let comps = pair.forward(c, x, &g.comps);
                let Ok(h) = DiagramMap::new(c, x.clone(), ry.clone(), comps) else {
                    check.witness = fail("image is not natural");
                    break;
                };
                let back = pair.backward(c, y, &h.comps);
                if back != g.comps {
                    check.witness = fail("round trip is not the identity");
                    break;
                }
                let k = h.key(c);
                if !rhs_keys.contains(&k) || !images.insert(k) {
                    check.witness = fail("map is not injective into the hom-set");
                    break;
                }
            }
            if check.witness.is_none() && images.len() != rhs_keys.len() {
                check.witness = fail("map is not surjective");
            }
            if check.witness.is_some() {
                check.passed = false;
                return Ok(check);
            }
        }
    }
    Ok(check)
}

/// Verifies every adjoint pair between `N_n` and `N_{n-1}` by an explicit bijection of
/// hom-sets, on all enumerated objects.
pub fn check_nerve_adjunctions<C: Carrier>(c: &C, n: usize, budget: &Budget) -> Result<NerveAdjunctionReport> {
    if n == 0 {
        return Err(Error::Precondition("adjunctions relate N_n and N_(n-1); need n >= 1".into()));
    }
    let lower = nerve_level(c, n - 1, budget)?;
    let upper = nerve_level(c, n, budget)?;
    let mut pairs = Vec::new();
    for pair in NervePair::all(n) {
        pairs.push(check_pair(c, n, pair, &lower, &upper, budget.max_homs)?);
    }
    let passed = pairs.iter().all(|p| p.passed);
    Ok(NerveAdjunctionReport { ambient: c.name(), n, pairs, passed })
}

/// Checks the simplicial identities among faces and degeneracies on every enumerated
/// object of `N_n`, `n ≤ max_n`. Returns the number of identities checked.
pub fn check_simplicial_identities<C: Carrier>(c: &C, max_n: usize, budget: &Budget) -> Result<usize> {
    let mut checked = 0;
    for n in 0..=max_n {
        for x in nerve_level(c, n, budget)?.objects {
            let ap = |x: &Diagram<C>, m: NerveMap| nerve_structure_map(c, x, m);
            let mut expect = |lhs: Diagram<C>, rhs: Diagram<C>, what: String| -> Result<()> {
                checked += 1;
                if lhs != rhs {
                    return Err(Error::CheckFailed(format!("{what} fails on {}", x.key(c))));
                }
                Ok(())
            };
            use NerveMap::{Degen, Face};
            for j in 0..=n {
                for i in 0..j {
                    if n >= 2 {
                        expect(ap(&ap(&x, Face(j))?, Face(i))?, ap(&ap(&x, Face(i))?, Face(j - 1))?, format!("d{i} d{j}"))?;
                    }
                }
                for i in 0..=j {
                    expect(ap(&ap(&x, Degen(j))?, Degen(i))?, ap(&ap(&x, Degen(i))?, Degen(j + 1))?, format!("s{i} s{j}"))?;
                }
                expect(ap(&ap(&x, Degen(j))?, Face(j))?, (*x).clone(), format!("d{j} s{j}"))?;
                expect(ap(&ap(&x, Degen(j))?, Face(j + 1))?, (*x).clone(), format!("d{} s{j}", j + 1))?;
                for i in 0..=n + 1 {
                    if i < j {
                        expect(ap(&ap(&x, Degen(j))?, Face(i))?, ap(&ap(&x, Face(i))?, Degen(j - 1))?, format!("d{i} s{j}"))?;
                    } else if i > j + 1 {
                        expect(ap(&ap(&x, Degen(j))?, Face(i))?, ap(&ap(&x, Face(i - 1))?, Degen(j))?, format!("d{i} s{j}"))?;
                    }
                }
            }
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{ChainCarrier, FinSet};

    fn f2() -> (ChainCarrier, Budget) {
        (ChainCarrier::new(2).unwrap(), Budget::SMALL.with_dim(1).with_degree(0))
    }

    #[test]
    fn level_counts() {
        let (c, b) = f2();
        assert_eq!(nerve_level(&c, 0, &b).unwrap().objects.len(), 2);
        assert_eq!(nerve_level(&c, 1, &b).unwrap().objects.len(), 5);
        let pointed = Budget::SMALL.with_card(1);
        // ∅ → ∅, ∅ → •, • → •; there is no map • → ∅.
        assert_eq!(nerve_level(&FinSet, 1, &pointed).unwrap().objects.len(), 3);
    }

    #[test]
    fn extra_degeneracies() {
        let x = from_chain(&FinSet, &chain_shape(1), vec![1, 2], &[crate::ambient::FinSetMap::new(2, vec![1]).unwrap()]).unwrap();
        let p = nerve_structure_map(&FinSet, &x, NerveMap::Prepend).unwrap();
        assert_eq!(p.entries, vec![0, 1, 2]);
        let a = nerve_structure_map(&FinSet, &x, NerveMap::Append).unwrap();
        assert_eq!(a.entries, vec![1, 2, 1]);
        let back = nerve_structure_map(&FinSet, &p, NerveMap::Face(0)).unwrap();
        assert_eq!(back, x);
        assert!(nerve_structure_map(&FinSet, &x, NerveMap::Face(2)).is_err());
    }

    #[test]
    fn adjunction_example_counts() {
        // Y = (F2 = F2), Z = F2: Hom(d_1 Y, Z) has two elements.
        let (c, b) = f2();
        let l1 = nerve_level(&c, 1, &b).unwrap();
        let y = l1.objects.iter().find(|y| y.entries.iter().all(|e| e.total_dim() == 1) && c.is_iso(&y.edges[1])).unwrap();
        let d1y = Arc::new(nerve_structure_map(&c, y, NerveMap::Face(1)).unwrap());
        let z = nerve_level(&c, 0, &b).unwrap().objects.into_iter().find(|z| z.entries[0].total_dim() == 1).unwrap();
        assert_eq!(all_maps(&c, &d1y, &z, 100).unwrap().len(), 2);
        let sz = Arc::new(nerve_structure_map(&c, &z, NerveMap::Append).unwrap());
        assert_eq!(all_maps(&c, y, &sz, 100).unwrap().len(), 2);
    }

    #[test]
    fn adjunctions_hold_at_low_levels() {
        let (c, b) = f2();
        for n in 1..=2 {
            let rep = check_nerve_adjunctions(&c, n, &b).unwrap();
            assert!(rep.passed, "{:?}", rep.pairs);
            assert_eq!(rep.pairs.len(), 2 * n + 2);
        }
        let rep = check_nerve_adjunctions(&FinSet, 2, &Budget::SMALL.with_card(1)).unwrap();
        assert!(rep.passed);
    }

    #[test]
    fn simplicial_identities_on_small_nerves() {
        let (c, b) = f2();
        assert!(check_simplicial_identities(&c, 3, &b).unwrap() > 0);
    }
}
