//! Compact canonical codes for grid diagrams of degree-0 complexes.
//!
//! A functor out of `[n] × [m]` is determined by its entries and the edges between
//! adjacent objects, so a code lists entry dimensions in row-major order, then the
//! horizontal generating edges `(i,j) → (i,j+1)`, then the vertical ones
//! `(i,j) → (i+1,j)`, each in row-major order. Matrix entries are base-36 digits.
//! Example: `0.1.1.2/.01/.10` has rows `0 → F2` and `F2 → F2^2`.

use std::sync::Arc;

use crate::ambient::{Carrier, ChainCarrier, Complex};
use crate::comparisons::nerve::NerveMap;
use crate::diagram::{Diagram, DiagramView};
use crate::error::{Error, Result};
use crate::fincat::{grid_category, grid_object, FinCategory};
use crate::linalg::Matrix;

use super::grid::{grid_dims, Direction, GridOp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridCode {
    pub n: usize,
    pub m: usize,
    pub dims: Vec<usize>,
    pub h: Vec<Matrix>,
    pub v: Vec<Matrix>,
}

const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

fn edge_ix(shape: &FinCategory, a: (usize, usize), b: (usize, usize)) -> usize {
    let (s, t) = (shape.object_ix(&grid_object(a.0, a.1)), shape.object_ix(&grid_object(b.0, b.1)));
    shape.hom(s.expect("grid object"), t.expect("grid object"))[0]
}

fn degree_zero_part(c: &ChainCarrier, x: &Complex) -> Result<usize> {
    if !x.is_concentrated_in_degree_zero() {
        return Err(Error::Precondition(format!("grid codes need degree-0 entries, got {}", c.obj_key(&Arc::new(x.clone())))));
    }
    Ok(x.dim(0))
}

impl GridCode {
    fn at(&self, i: usize, j: usize) -> usize {
        self.dims[i * (self.m + 1) + j]
    }

    fn h_at(&self, i: usize, j: usize) -> &Matrix {
        &self.h[i * self.m + j]
    }

    fn v_at(&self, i: usize, j: usize) -> &Matrix {
        &self.v[i * (self.m + 1) + j]
    }

    /// Reads the generating edges of a diagram on `grid(n, m)`.
    pub fn from_view<D: DiagramView<ChainCarrier> + ?Sized>(c: &ChainCarrier, x: &D) -> Result<Self> {
        let shape = x.shape().clone();
        let (n, m) = grid_dims(&shape);
        let mut dims = Vec::with_capacity((n + 1) * (m + 1));
        for i in 0..=n {
            for j in 0..=m {
                let o = shape.object_ix(&grid_object(i, j)).expect("grid object");
                dims.push(degree_zero_part(c, x.entry(o))?);
            }
        }
        let comp = |a, b| x.edge(edge_ix(&shape, a, b)).comp(0);
        let h = (0..=n).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| comp((i, j), (i, j + 1))).collect();
        let v = (0..n).flat_map(|i| (0..=m).map(move |j| (i, j))).map(|(i, j)| comp((i, j), (i + 1, j))).collect();
        Ok(GridCode { n, m, dims, h, v })
    }

    pub fn from_diagram(c: &ChainCarrier, x: &Diagram<ChainCarrier>) -> Result<Self> {
        Self::from_view(c, x)
    }

    /// The full diagram, with each edge the composite down then across.
    pub fn to_diagram(&self, c: &ChainCarrier) -> Result<Diagram<ChainCarrier>> {
        let shape = Arc::new(grid_category(self.n, self.m));
        let mut spaces: Vec<Arc<Complex>> = Vec::new();
        let space = |d: usize, spaces: &mut Vec<Arc<Complex>>| {
            while spaces.len() <= d {
                spaces.push(Arc::new(Complex::degree_zero(spaces.len())));
            }
            spaces[d].clone()
        };
        let mut entries = Vec::with_capacity(shape.num_objects());
        for o in shape.objects() {
            let (i, j) = crate::fincat::grid_coords(o);
            entries.push(space(self.at(i, j), &mut spaces));
        }
        let mut edges = Vec::with_capacity(shape.num_morphisms());
        for md in shape.morphisms() {
            let (a, b) = (crate::fincat::grid_coords(shape.object_name(md.src)), crate::fincat::grid_coords(shape.object_name(md.dst)));
            let mut mat = Matrix::identity(self.at(a.0, a.1));
            for i in a.0..b.0 {
                mat = self.v_at(i, a.1).mul(&mat, c.p);
            }
            for j in a.1..b.1 {
                mat = self.h_at(b.0, j).mul(&mat, c.p);
            }
            edges.push(c.map(entries[md.src].clone(), entries[md.dst].clone(), vec![mat])?);
        }
        Diagram::new(c, shape, entries, edges)
    }

    pub fn encode(&self) -> String {
        let mut s = String::with_capacity(self.dims.len() * 2 + (self.h.len() + self.v.len()) * 5);
        let join = |s: &mut String, parts: &mut dyn Iterator<Item = String>| {
            for (k, p) in parts.enumerate() {
                if k > 0 {
                    s.push('.');
                }
                s.push_str(&p);
            }
        };
        join(&mut s, &mut self.dims.iter().map(|d| d.to_string()));
        for mats in [&self.h, &self.v] {
            s.push('/');
            join(&mut s, &mut mats.iter().map(|mat| mat.data.iter().map(|&x| DIGITS[x as usize] as char).collect()));
        }
        s
    }

    pub fn decode(n: usize, m: usize, s: &str, p: u32) -> Result<Self> {
        let bad = || Error::Format(format!("bad grid code `{s}` at ({n},{m})"));
        let parts: Vec<&str> = s.split('/').collect();
        let [dims, h, v] = parts[..] else { return Err(bad()) };
        let dims: Vec<usize> = dims.split('.').map(|d| d.parse().map_err(|_| bad())).collect::<Result<_>>()?;
        if dims.len() != (n + 1) * (m + 1) {
            return Err(bad());
        }
        let at = |i: usize, j: usize| dims[i * (m + 1) + j];
        let read = |text: &str, shapes: Vec<(usize, usize)>| -> Result<Vec<Matrix>> {
            let pieces: Vec<&str> = if shapes.is_empty() { vec![] } else { text.split('.').collect() };
            if pieces.len() != shapes.len() || (shapes.is_empty() && !text.is_empty()) {
                return Err(bad());
            }
            pieces
                .iter()
                .zip(shapes)
                .map(|(piece, (rows, cols))| {
                    let data: Vec<u8> = piece
                        .bytes()
                        .map(|b| DIGITS.iter().position(|&d| d == b).map(|x| x as u8).filter(|&x| (x as u32) < p).ok_or_else(bad))
                        .collect::<Result<_>>()?;
                    if data.len() != rows * cols {
                        return Err(bad());
                    }
                    Ok(Matrix::from_rows(rows, cols, data))
                })
                .collect()
        };
        let h_shapes = (0..=n).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| (at(i, j + 1), at(i, j))).collect();
        let v_shapes = (0..n).flat_map(|i| (0..=m).map(move |j| (i, j))).map(|(i, j)| (at(i + 1, j), at(i, j))).collect();
        let (h, v) = (read(h, h_shapes)?, read(v, v_shapes)?);
        let code = GridCode { n, m, dims: dims.clone(), h, v };
        for i in 0..n {
            for j in 0..m {
                let down_across = code.h_at(i + 1, j).mul(code.v_at(i, j), p);
                let across_down = code.v_at(i, j + 1).mul(code.h_at(i, j), p);
                if down_across != across_down {
                    return Err(Error::Validation(format!("grid code `{s}`: square at ({i},{j}) does not commute")));
                }
            }
        }
        Ok(code)
    }

    pub fn transpose(&self) -> Self {
        let (n, m) = (self.m, self.n);
        let dims = (0..=n).flat_map(|i| (0..=m).map(move |j| (i, j))).map(|(i, j)| self.at(j, i)).collect();
        // New horizontal (i,j)→(i,j+1) is old vertical (j,i)→(j+1,i).
        let h = (0..=n).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| self.v_at(j, i).clone()).collect();
        let v = (0..n).flat_map(|i| (0..=m).map(move |j| (i, j))).map(|(i, j)| self.h_at(j, i).clone()).collect();
        GridCode { n, m, dims, h, v }
    }

    /// Row `k` as dims and horizontal edges.
    fn row(&self, k: usize) -> (Vec<usize>, Vec<Matrix>) {
        let dims = (0..=self.m).map(|j| self.at(k, j)).collect();
        let h = (0..self.m).map(|j| self.h_at(k, j).clone()).collect();
        (dims, h)
    }

    /// Rebuilds from rows and the vertical edge rows between them.
    pub(crate) fn from_rows(m: usize, rows: Vec<(Vec<usize>, Vec<Matrix>)>, verts: Vec<Vec<Matrix>>) -> Self {
        let n = rows.len() - 1;
        let mut dims = Vec::new();
        let mut h = Vec::new();
        for (d, e) in rows {
            dims.extend(d);
            h.extend(e);
        }
        GridCode { n, m, dims, h, v: verts.into_iter().flatten().collect() }
    }

    fn vertical_row(&self, i: usize) -> Vec<Matrix> {
        (0..=self.m).map(|j| self.v_at(i, j).clone()).collect()
    }

    fn apply_vertical(&self, op: NerveMap, p: u32) -> Result<Self> {
        let n = self.n;
        let rows: Vec<_> = (0..=n).map(|k| self.row(k)).collect();
        let verts: Vec<_> = (0..n).map(|i| self.vertical_row(i)).collect();
        let line = |d: &[usize]| (vec![0; self.m + 1], (0..self.m).map(|_| Matrix::zero(0, 0)).collect::<Vec<_>>(), d.to_vec());
        Ok(match op {
            NerveMap::Face(i) if n >= 1 && i <= n => {
                let mut rows = rows;
                let mut verts = verts;
                rows.remove(i);
                if i == 0 {
                    verts.remove(0);
                } else if i == n {
                    verts.pop();
                } else {
                    let below = verts.remove(i);
                    let composite = below.iter().zip(&verts[i - 1]).map(|(b, a)| b.mul(a, p)).collect();
                    verts[i - 1] = composite;
                }
                Self::from_rows(self.m, rows, verts)
            }
            NerveMap::Degen(i) if i <= n => {
                let mut rows = rows;
                let mut verts = verts;
                rows.insert(i + 1, rows[i].clone());
                verts.insert(i, rows[i].0.iter().map(|&d| Matrix::identity(d)).collect());
                Self::from_rows(self.m, rows, verts)
            }
            NerveMap::Prepend => {
                let (zeros, hz, old) = line(&rows[0].0);
                let mut verts = verts;
                verts.insert(0, old.iter().map(|&d| Matrix::zero(d, 0)).collect());
                let mut rows = rows;
                rows.insert(0, (zeros, hz));
                Self::from_rows(self.m, rows, verts)
            }
            NerveMap::Append => {
                let (zeros, hz, old) = line(&rows[n].0);
                let mut verts = verts;
                verts.push(old.iter().map(|&d| Matrix::zero(0, d)).collect());
                let mut rows = rows;
                rows.push((zeros, hz));
                Self::from_rows(self.m, rows, verts)
            }
            other => return Err(Error::Precondition(format!("{other} does not apply at vertical level {n}"))),
        })
    }

    pub fn apply(&self, op: GridOp, p: u32) -> Result<Self> {
        match op.dir {
            Direction::Vertical => self.apply_vertical(op.op, p),
            Direction::Horizontal => Ok(self.transpose().apply_vertical(op.op, p)?.transpose()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::ktheory::bisimplicial::evcof_diagrams;
    use crate::ktheory::{USelector, WaldhausenSubcat};

    #[test]
    fn round_trip_and_example() {
        let c = ChainCarrier::new(2).unwrap();
        let code = GridCode::decode(1, 1, "0.1.1.2/.01/.10", 2).unwrap();
        let x = code.to_diagram(&c).unwrap();
        assert_eq!(GridCode::from_diagram(&c, &x).unwrap(), code);
        assert_eq!(code.encode(), "0.1.1.2/.01/.10");
        assert!(matches!(GridCode::decode(1, 1, "1.1.1.1/1.1/1.0", 2), Err(Error::Validation(_))));
        assert!(GridCode::decode(1, 1, "0.1.1.2/.01/.12", 2).is_err());
        assert!(GridCode::decode(1, 1, "0.1.1.2/.01/1.10", 2).is_err());
        assert_eq!(code.transpose().transpose(), code);
    }

    #[test]
    fn operations_agree_with_diagram_reindexing() {
        let c = ChainCarrier::new(2).unwrap();
        let u = WaldhausenSubcat::new(c.clone(), USelector::Deg0Dim(2));
        let budget = Budget::SMALL.with_dim(2).with_degree(0).with_objects(1 << 16);
        for (n, m) in [(1, 1), (2, 1), (1, 2)] {
            let xs = evcof_diagrams(&u, n, m, &budget).unwrap();
            for x in crate::budget::thin(&xs, 40) {
                let code = GridCode::from_diagram(&c, &x).unwrap();
                for dir in [Direction::Horizontal, Direction::Vertical] {
                    let k = if dir == Direction::Vertical { n } else { m };
                    let ops = (0..=k)
                        .flat_map(|i| [NerveMap::Face(i), NerveMap::Degen(i)])
                        .chain([NerveMap::Prepend, NerveMap::Append]);
                    for op in ops {
                        let op = GridOp::new(dir, op);
                        let by_code = code.apply(op, 2).unwrap();
                        let by_diagram = GridCode::from_diagram(&c, &op.apply(&c, &x).unwrap()).unwrap();
                        assert_eq!(by_code, by_diagram, "{op} on {}", code.encode());
                        assert_eq!(by_code.to_diagram(&c).unwrap(), op.apply(&c, &x).unwrap());
                    }
                }
            }
        }
    }
}
