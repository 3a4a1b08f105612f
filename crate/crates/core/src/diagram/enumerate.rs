//! Sampling and exhaustive enumeration of diagrams and diagram maps.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ambient::{Carrier, Square};
use crate::budget::Budget;
use crate::engine::{boundary, extend_object, induced_square, DegreeSearch, DiagramSquare, ObjectChoice, SkeletalDiagram};
use crate::error::{Error, Result};
use crate::fincat::FinCategory;
use crate::reedy::ReedyStructure;

use super::{Diagram, DiagramMap};

const ATTEMPTS: usize = 32;

pub fn initial_diagram<C: Carrier>(c: &C, shape: Arc<FinCategory>) -> Diagram<C> {
    Diagram::constant(c, shape, &c.initial())
}

pub fn terminal_diagram<C: Carrier>(c: &C, shape: Arc<FinCategory>) -> Diagram<C> {
    Diagram::constant(c, shape, &c.terminal())
}

/// A random diagram built degree by degree: at each object a random entry `Z` and
/// random `Z → M` through which the canonical `L → M` factors. `None` when some
/// object found no such factorization within the attempt limit.
pub fn random_diagram<C: Carrier, R: Rng>(
    c: &C,
    r: &ReedyStructure,
    pool: &[C::Obj],
    rng: &mut R,
    cap: usize,
) -> Result<Option<Diagram<C>>> {
    if pool.is_empty() {
        return Err(Error::Precondition("empty object pool".into()));
    }
    let mut z = SkeletalDiagram::<C>::empty(r.cat().clone());
    for n in 0..=r.max_degree() {
        let mut choices = BTreeMap::new();
        for alpha in r.objects_of_degree(n) {
            let b = boundary(c, r, &z, alpha)?;
            let mut found = None;
            for _ in 0..ATTEMPTS {
                let entry = pool[rng.gen_range(0..pool.len())].clone();
                let Some(m) = c.sample_lift(&c.hom_square(&entry, &b.matching.apex), rng, cap)? else { continue };
                let sq = Square {
                    left: c.from_initial(&b.latching.apex),
                    right: m.clone(),
                    top: c.from_initial(&entry),
                    bottom: b.canonical.clone(),
                };
                if let Some(l) = c.sample_lift(&sq, rng, cap)? {
                    found = Some(ObjectChoice { entry, latch: l, matching: m });
                    break;
                }
            }
            match found {
                Some(ch) => {
                    choices.insert(alpha, ch);
                }
                None => return Ok(None),
            }
        }
        z = extend_object(c, r, &z, n, &choices)?;
    }
    z.into_diagram(c).map(Some)
}

/// A random map `X → Y`: degree-by-degree search with shuffled candidate lifts.
pub fn random_map<C: Carrier, R: Rng>(
    c: &C,
    r: &ReedyStructure,
    x: &Arc<Diagram<C>>,
    y: &Arc<Diagram<C>>,
    rng: &mut R,
    cap: usize,
) -> Result<Option<DiagramMap<C>>> {
    let sq = hom_problem(c, x, y)?;
    let mut search = DegreeSearch::new(r, cap);
    let mut found = None;
    let result = search.run(
        &mut |alpha, k| {
            let s = induced_square(c, r, &sq, k, alpha)?;
            let mut all: Vec<C::Mor> = c.lifts(&s)?.take(cap).collect();
            all.shuffle(rng);
            Ok(Box::new(all.into_iter()))
        },
        &mut |k| {
            found = Some(k.iter().map(|m| m.clone().expect("complete")).collect::<Vec<_>>());
            false
        },
    );
    match result {
        Err(e) if e.is_budget() => return Ok(None),
        other => other?,
    }
    found.map(|comps| DiagramMap::new(c, x.clone(), y.clone(), comps)).transpose()
}

/// The square `∅ → X`, `Y → *` whose diagonals are the maps `X → Y`.
fn hom_problem<C: Carrier>(c: &C, x: &Arc<Diagram<C>>, y: &Arc<Diagram<C>>) -> Result<DiagramSquare<C>> {
    if x.shape != y.shape {
        return Err(Error::Validation("diagrams have different shapes".into()));
    }
    let shape = x.shape.clone();
    let i = Arc::new(initial_diagram(c, shape.clone()));
    let t = Arc::new(terminal_diagram(c, shape));
    let from_i = |d: &Arc<Diagram<C>>| DiagramMap::new(c, i.clone(), d.clone(), d.entries.iter().map(|e| c.from_initial(e)).collect());
    let to_t = |d: &Arc<Diagram<C>>| DiagramMap::new(c, d.clone(), t.clone(), d.entries.iter().map(|e| c.to_terminal(e)).collect());
    Ok(DiagramSquare { left: from_i(x)?, right: to_t(y)?, top: from_i(y)?, bottom: to_t(x)? })
}

/// Every map `X → Y`, in lexicographic order of components; at most `cap`.
pub fn all_maps<C: Carrier>(c: &C, x: &Arc<Diagram<C>>, y: &Arc<Diagram<C>>, cap: usize) -> Result<Vec<DiagramMap<C>>> {
    brute_force_diagonals(c, &hom_problem(c, x, y)?, cap)
}

/// All diagonals of a square of diagram maps, found object by object in index order
/// with naturality checked against every earlier object. Independent of the Reedy
/// structure; used as an oracle for [`crate::engine::lift`].
pub fn brute_force_diagonals<C: Carrier>(c: &C, sq: &DiagramSquare<C>, cap: usize) -> Result<Vec<DiagramMap<C>>> {
    diagonals(c, sq, cap, None)
}

/// Candidate components tried by [`first_maps`] before it settles for what it has.
const FIRST_MAPS_WORK: usize = 1 << 16;

/// The first `cap` maps `X → Y` in lexicographic order, without failing on more. The
/// search gives up after a fixed amount of work, so fewer maps may come back.
pub fn first_maps<C: Carrier>(c: &C, x: &Arc<Diagram<C>>, y: &Arc<Diagram<C>>, cap: usize) -> Result<Vec<DiagramMap<C>>> {
    diagonals(c, &hom_problem(c, x, y)?, cap, Some(FIRST_MAPS_WORK))
}

/// With `work` set, stops quietly at `cap` results or after that many candidates.
fn diagonals<C: Carrier>(c: &C, sq: &DiagramSquare<C>, cap: usize, mut work: Option<usize>) -> Result<Vec<DiagramMap<C>>> {
    sq.validate(c)?;
    let (b, x) = (sq.left.target.clone(), sq.right.source.clone());
    let shape = b.shape.clone();
    let n = shape.num_objects();
    let mut comps: Vec<Option<C::Mor>> = vec![None; n];
    let mut out = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec<C: Carrier>(
        c: &C,
        sq: &DiagramSquare<C>,
        shape: &FinCategory,
        o: usize,
        comps: &mut Vec<Option<C::Mor>>,
        out: &mut Vec<Vec<C::Mor>>,
        cap: usize,
        work: &mut Option<usize>,
    ) -> Result<()> {
        let (b, x) = (sq.left.target.as_ref(), sq.right.source.as_ref());
        let truncate = work.is_some();
        if truncate && out.len() == cap {
            return Ok(());
        }
        if o == shape.num_objects() {
            if out.len() == cap {
                return Err(Error::budget("diagonal enumeration", cap));
            }
            out.push(comps.iter().map(|m| m.clone().expect("complete")).collect());
            return Ok(());
        }
        for k in c.lifts(&sq.entry_square(o))? {
            if let Some(w) = work {
                if *w == 0 {
                    break;
                }
                *w -= 1;
            }
            let natural = (0..shape.num_morphisms()).all(|e| {
                let (s, d) = (shape.src(e), shape.dst(e));
                if s.max(d) != o || s > o || d > o {
                    return true;
                }
                let ks = if s == o { &k } else { comps[s].as_ref().expect("earlier") };
                let kd = if d == o { &k } else { comps[d].as_ref().expect("earlier") };
                c.compose(kd, &b.edges[e]) == c.compose(&x.edges[e], ks)
            });
            if natural {
                comps[o] = Some(k);
                rec(c, sq, shape, o + 1, comps, out, cap, work)?;
                comps[o] = None;
                if truncate && out.len() == cap {
                    break;
                }
            }
        }
        Ok(())
    }
    let mut raw = Vec::new();
    rec(c, sq, &shape, 0, &mut comps, &mut raw, cap, &mut work)?;
    for k in raw {
        out.push(DiagramMap::new(c, b.clone(), x.clone(), k)?);
    }
    Ok(out)
}

/// A deterministic sample of diagrams: initial, terminal and constant diagrams, then
/// random ones, deduplicated, at most `budget.samples`.
pub fn sample_diagrams<C: Carrier>(c: &C, r: &ReedyStructure, budget: &Budget, seed: u64) -> Result<Vec<Arc<Diagram<C>>>> {
    let pool = c.objects(budget)?;
    let shape = r.cat().clone();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |d: Diagram<C>, out: &mut Vec<Arc<Diagram<C>>>| {
        if out.len() < budget.samples && seen.insert(d.key(c)) {
            out.push(Arc::new(d));
        }
    };
    push(initial_diagram(c, shape.clone()), &mut out);
    push(terminal_diagram(c, shape.clone()), &mut out);
    for x in &pool {
        push(Diagram::constant(c, shape.clone(), x), &mut out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tries = budget.samples * 4;
    for _ in 0..tries {
        if out.len() >= budget.samples {
            break;
        }
        if let Some(d) = random_diagram(c, r, &pool, &mut rng, budget.max_homs)? {
            push(d, &mut out);
        }
    }
    Ok(out)
}

/// A deterministic sample of maps between sampled diagrams, including identities.
pub fn sample_maps<C: Carrier>(c: &C, r: &ReedyStructure, budget: &Budget, seed: u64) -> Result<Vec<DiagramMap<C>>> {
    let diagrams = sample_diagrams(c, r, budget, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for d in diagrams.iter().take(budget.samples / 4 + 1) {
        let id = d.identity_map(c);
        if seen.insert(id.key(c)) {
            out.push(id);
        }
    }
    let tries = budget.samples * 4;
    for _ in 0..tries {
        if out.len() >= budget.samples {
            break;
        }
        let x = &diagrams[rng.gen_range(0..diagrams.len())];
        let y = &diagrams[rng.gen_range(0..diagrams.len())];
        if let Some(f) = random_map(c, r, x, y, &mut rng, budget.max_homs)? {
            if seen.insert(f.key(c)) {
                out.push(f);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::FinSet;

    #[test]
    fn random_diagrams_are_valid_and_reproducible() {
        let r = ReedyStructure::simplex_op(1).unwrap();
        let b = Budget::SMALL.with_samples(12);
        let a = sample_diagrams(&FinSet, &r, &b, 7).unwrap();
        let again = sample_diagrams(&FinSet, &r, &b, 7).unwrap();
        assert_eq!(a, again);
        assert!(a.len() > 4);
        for d in &a {
            d.validate(&FinSet).unwrap();
        }
    }

    #[test]
    fn hom_counts_of_arrow_diagrams() {
        // X = (1 → 1), Y = (2 → 2 identity): maps are pairs (f0, f1) with f1 = f0.
        let r = ReedyStructure::chain(1);
        let x = Arc::new(Diagram::constant(&FinSet, r.cat().clone(), &1));
        let y = Arc::new(Diagram::constant(&FinSet, r.cat().clone(), &2));
        assert_eq!(all_maps(&FinSet, &x, &y, 100).unwrap().len(), 2);
        assert_eq!(all_maps(&FinSet, &y, &x, 100).unwrap().len(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_map(&FinSet, &r, &x, &y, &mut rng, 100).unwrap().unwrap();
        f.validate(&FinSet).unwrap();
    }

    #[test]
    fn sampled_maps_are_natural() {
        let r = ReedyStructure::grid(1, 1);
        let b = Budget::SMALL.with_samples(16);
        let maps = sample_maps(&FinSet, &r, &b, 3).unwrap();
        assert!(maps.len() > 4);
        for f in &maps {
            f.validate(&FinSet).unwrap();
        }
    }
}
