//! Face, degeneracy and extra degeneracy functors between grid diagram categories,
//! acting on rows (vertical) or columns (horizontal).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ambient::Carrier;
use crate::comparisons::nerve::NerveMap;
use crate::diagram::{Diagram, DiagramMap};
use crate::error::{Error, Result};
use crate::fincat::{grid_category, grid_coords, grid_object, poset_functor, FinCategory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Acts on the column index `m`.
    Horizontal,
    /// Acts on the row index `n`.
    Vertical,
}

impl Direction {
    pub fn tag(&self) -> &'static str {
        match self {
            Direction::Horizontal => "h",
            Direction::Vertical => "v",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridOp {
    pub dir: Direction,
    pub op: NerveMap,
}

impl fmt::Display for GridOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.op, self.dir.tag())
    }
}

/// `(n, m)` for `grid(n, m)`.
pub fn grid_dims(shape: &FinCategory) -> (usize, usize) {
    grid_coords(shape.object_name(shape.num_objects() - 1))
}

fn ix(shape: &FinCategory, i: usize, j: usize) -> usize {
    shape.object_ix(&grid_object(i, j)).expect("grid object")
}

impl GridOp {
    pub fn new(dir: Direction, op: NerveMap) -> Self {
        GridOp { dir, op }
    }

    /// Bidegree of the image of `grid(n, m)`, if the operation applies there.
    pub fn target_dims(&self, (n, m): (usize, usize)) -> Option<(usize, usize)> {
        let k = if self.dir == Direction::Vertical { n } else { m };
        let k2 = match self.op {
            NerveMap::Face(i) if k >= 1 && i <= k => k - 1,
            NerveMap::Degen(i) if i <= k => k + 1,
            NerveMap::Prepend | NerveMap::Append => k + 1,
            _ => return None,
        };
        Some(if self.dir == Direction::Vertical { (k2, m) } else { (n, k2) })
    }

    /// For reindexing operations, where each new coordinate comes from.
    fn reindex(&self, k: usize) -> Option<usize> {
        match self.op {
            NerveMap::Face(i) => Some(if k < i { k } else { k + 1 }),
            NerveMap::Degen(i) => Some(if k <= i { k } else { k - 1 }),
            _ => None,
        }
    }

    fn split(&self, (i, j): (usize, usize)) -> (usize, usize) {
        if self.dir == Direction::Vertical {
            (i, j)
        } else {
            (j, i)
        }
    }

    pub fn apply<C: Carrier>(&self, c: &C, x: &Diagram<C>) -> Result<Diagram<C>> {
        let dims = grid_dims(&x.shape);
        let (n2, m2) = self.target_dims(dims).ok_or_else(|| Error::Precondition(format!("{self} does not apply to grid{dims:?}")))?;
        let target = Arc::new(grid_category(n2, m2));
        match self.op {
            NerveMap::Face(_) | NerveMap::Degen(_) => {
                let obj_map = target
                    .objects()
                    .iter()
                    .map(|name| {
                        let (along, across) = self.split(grid_coords(name));
                        let (i, j) = self.split((self.reindex(along).expect("reindexing"), across));
                        ix(&x.shape, i, j)
                    })
                    .collect();
                Ok(x.restrict(&poset_functor(target, x.shape.clone(), obj_map)?))
            }
            NerveMap::Prepend | NerveMap::Append => {
                let prepend = self.op == NerveMap::Prepend;
                let k = if self.dir == Direction::Vertical { dims.0 } else { dims.1 };
                // The old coordinate of a new object, or `None` for the added line.
                let old = |name: &str| {
                    let (along, across) = self.split(grid_coords(name));
                    let along = if prepend { along.checked_sub(1) } else { (along <= k).then_some(along) };
                    along.map(|a| {
                        let (i, j) = self.split((a, across));
                        ix(&x.shape, i, j)
                    })
                };
                let entries: Vec<C::Obj> = target
                    .objects()
                    .iter()
                    .map(|o| match old(o) {
                        Some(p) => x.entries[p].clone(),
                        None if prepend => c.initial(),
                        None => c.terminal(),
                    })
                    .collect();
                let edges = target
                    .morphisms()
                    .iter()
                    .map(|md| {
                        let (s, d) = (target.object_name(md.src), target.object_name(md.dst));
                        match (old(s), old(d)) {
                            (Some(a), Some(b)) => x.edges[x.shape.hom(a, b)[0]].clone(),
                            (None, _) if prepend => c.from_initial(&entries[md.dst]),
                            (_, None) => c.to_terminal(&entries[md.src]),
                            _ => unreachable!("no map from an old object into the prepended line"),
                        }
                    })
                    .collect();
                Diagram::new(c, target, entries, edges)
            }
        }
    }

    pub fn apply_map<C: Carrier>(&self, c: &C, f: &DiagramMap<C>) -> Result<DiagramMap<C>> {
        let source = Arc::new(self.apply(c, &f.source)?);
        let target = Arc::new(self.apply(c, &f.target)?);
        let comps = match self.op {
            NerveMap::Face(_) | NerveMap::Degen(_) => {
                source
                    .shape
                    .objects()
                    .iter()
                    .map(|name| {
                        let (along, across) = self.split(grid_coords(name));
                        let (i, j) = self.split((self.reindex(along).expect("reindexing"), across));
                        f.comps[ix(&f.source.shape, i, j)].clone()
                    })
                    .collect()
            }
            NerveMap::Prepend | NerveMap::Append => {
                let prepend = self.op == NerveMap::Prepend;
                let k = {
                    let d = grid_dims(&f.source.shape);
                    if self.dir == Direction::Vertical { d.0 } else { d.1 }
                };
                source
                    .shape
                    .objects()
                    .iter()
                    .enumerate()
                    .map(|(o, name)| {
                        let (along, across) = self.split(grid_coords(name));
                        let old = if prepend { along.checked_sub(1) } else { (along <= k).then_some(along) };
                        match old {
                            Some(a) => {
                                let (i, j) = self.split((a, across));
                                f.comps[ix(&f.source.shape, i, j)].clone()
                            }
                            None => c.identity(&source.entries[o]),
                        }
                    })
                    .collect()
            }
        };
        DiagramMap::new(c, source, target, comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{FinSet, FinSetMap};
    use crate::comparisons::nerve::from_chain;
    use crate::fincat::chain_category;

    /// The grid `[1] × [1]` with `00 = 0`, `01 = 1`, `10 = 1`, `11 = 2` and injective edges.
    fn square() -> Diagram<FinSet> {
        let shape = Arc::new(grid_category(1, 1));
        let entries = vec![0, 1, 1, 2];
        let edges = shape
            .morphisms()
            .iter()
            .map(|md| {
                let (s, d) = (entries[md.src], entries[md.dst]);
                let (a, b) = (grid_coords(shape.object_name(md.src)), grid_coords(shape.object_name(md.dst)));
                let map = (0..s).map(|x| if a.0 < b.0 && d == 2 { x + 1 } else { x }).collect();
                FinSetMap::new(d, map).unwrap()
            })
            .collect();
        Diagram::new(&FinSet, shape, entries, edges).unwrap()
    }

    #[test]
    fn faces_and_prepend_on_a_square() {
        let x = square();
        let d1 = GridOp::new(Direction::Vertical, NerveMap::Face(1)).apply(&FinSet, &x).unwrap();
        assert_eq!(d1.entries, vec![0, 1]);
        let d0h = GridOp::new(Direction::Horizontal, NerveMap::Face(0)).apply(&FinSet, &x).unwrap();
        assert_eq!(d0h.entries, vec![1, 2]);
        let p = GridOp::new(Direction::Vertical, NerveMap::Prepend).apply(&FinSet, &x).unwrap();
        assert_eq!(grid_dims(&p.shape), (2, 1));
        assert_eq!(p.entries, vec![0, 0, 0, 1, 1, 2]);
        let a = GridOp::new(Direction::Horizontal, NerveMap::Append).apply(&FinSet, &x).unwrap();
        assert_eq!(a.entries, vec![0, 1, 1, 1, 2, 1]);
        let back = GridOp::new(Direction::Vertical, NerveMap::Face(0)).apply(&FinSet, &p).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn a_one_row_grid_is_a_chain() {
        let shape = Arc::new(chain_category(1));
        let chain = from_chain(&FinSet, &shape, vec![1, 2], &[FinSetMap::new(2, vec![0]).unwrap()]).unwrap();
        let grid = Arc::new(grid_category(0, 1));
        let g = Diagram::new(&FinSet, grid, chain.entries.clone(), chain.edges.clone()).unwrap();
        let s = GridOp::new(Direction::Horizontal, NerveMap::Degen(0)).apply(&FinSet, &g).unwrap();
        assert_eq!(s.entries, vec![1, 1, 2]);
        let id = g.identity_map(&FinSet);
        let sid = GridOp::new(Direction::Horizontal, NerveMap::Degen(0)).apply_map(&FinSet, &id).unwrap();
        assert!(sid.is_identity(&FinSet));
    }
}
