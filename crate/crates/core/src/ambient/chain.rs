//! Non-negatively graded chain complexes of finite-dimensional F_p-vector spaces.
//!
//! Native structure: weak equivalences are quasi-isomorphisms, fibrations are
//! surjective in positive degrees, cofibrations are degreewise injective.

use std::sync::Arc;

use rand::Rng;
use serde_json::{json, Value};

use super::{Carrier, Cone, LiftIter, Square};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::FinCategory;
use crate::linalg::{echelon, is_prime, solve_affine, AffineSpace, Matrix};

/// A complex with `dims[k] = dim C_k`; `diffs[k]` is `d_{k+1}: C_{k+1} → C_k`.
/// Trailing zero dimensions are trimmed, so equal complexes have equal encodings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Complex {
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl Complex {
    pub fn new(mut dims: Vec<usize>, mut diffs: Vec<Matrix>, p: u32) -> Result<Self> {
        if diffs.len() + 1 != dims.len().max(1) && !(dims.is_empty() && diffs.is_empty()) {
            return Err(Error::Validation(format!(
                "complex with {} degrees needs {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if (d.rows, d.cols) != (dims[k], dims[k + 1]) {
                return Err(Error::Validation(format!("differential d_{} has the wrong shape", k + 1)));
            }
            if d.data.iter().any(|&x| x as u32 >= p) {
                return Err(Error::Validation(format!("differential d_{} has entries outside F_{p}", k + 1)));
            }
        }
        for k in 1..diffs.len() {
            if !diffs[k - 1].mul(&diffs[k], p).is_zero() {
                return Err(Error::Validation(format!("d_{} ∘ d_{} ≠ 0", k, k + 1)));
            }
        }
        while dims.last() == Some(&0) {
            dims.pop();
            diffs.pop();
        }
        if dims.is_empty() {
            diffs.clear();
        }
        Ok(Complex { dims, diffs })
    }

    pub fn zero() -> Self {
        Complex { dims: vec![], diffs: vec![] }
    }

    /// `F_p^n` concentrated in degree 0.
    pub fn degree_zero(n: usize) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Complex { dims: vec![n], diffs: vec![] }
        }
    }

    pub fn sphere(n: usize) -> Self {
        let mut dims = vec![0; n + 1];
        dims[n] = 1;
        let diffs = (0..n).map(|k| Matrix::zero(dims[k], dims[k + 1])).collect();
        Complex { dims, diffs }
    }

    /// `D^n`: `F_p` in degrees `n` and `n − 1` with identity differential.
    pub fn disk(n: usize) -> Self {
        assert!(n >= 1, "disks start in degree 1");
        let mut dims = vec![0; n + 1];
        dims[n] = 1;
        dims[n - 1] = 1;
        let diffs = (0..n)
            .map(|k| if k == n - 1 { Matrix::identity(1) } else { Matrix::zero(dims[k], dims[k + 1]) })
            .collect();
        Complex { dims, diffs }
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of degrees carried (one past the top non-zero degree).
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d_k: C_k → C_{k−1}` (zero matrix for `k = 0` or out of range).
    pub fn d(&self, k: usize) -> Matrix {
        if k == 0 || k > self.diffs.len() {
            return Matrix::zero(if k == 0 { 0 } else { self.dim(k - 1) }, self.dim(k));
        }
        self.diffs[k - 1].clone()
    }

    pub fn is_concentrated_in_degree_zero(&self) -> bool {
        self.dims.len() <= 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainMap {
    pub src: Arc<Complex>,
    pub dst: Arc<Complex>,
    /// `comps[k]: src_k → dst_k`, for `k < max(src.len(), dst.len())`.
    pub comps: Vec<Matrix>,
}

impl ChainMap {
    pub fn comp(&self, k: usize) -> Matrix {
        self.comps.get(k).cloned().unwrap_or_else(|| Matrix::zero(self.dst.dim(k), self.src.dim(k)))
    }
}

/// The carrier of chain complexes over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCarrier {
    pub p: u32,
    /// Safety cap on the number of degrees any constructed complex may occupy.
    pub max_support: usize,
}

impl ChainCarrier {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) || p > 251 {
            return Err(Error::Precondition(format!("{p} is not a supported prime")));
        }
        Ok(ChainCarrier { p, max_support: 12 })
    }

    fn check_support(&self, c: &Complex) -> Result<()> {
        if c.len() > self.max_support {
            return Err(Error::budget("chain-complex degree support", self.max_support));
        }
        Ok(())
    }

    pub fn complex(&self, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Complex> {
        Complex::new(dims, diffs, self.p)
    }

    /// Builds and validates a chain map.
    pub fn map(&self, src: Arc<Complex>, dst: Arc<Complex>, comps: Vec<Matrix>) -> Result<ChainMap> {
        let n = src.len().max(dst.len());
        let mut comps = comps;
        while comps.len() > n {
            if !comps.last().map(Matrix::is_zero).unwrap_or(true) {
                return Err(Error::Validation("chain map component outside the support".into()));
            }
            comps.pop();
        }
        while comps.len() < n {
            let k = comps.len();
            comps.push(Matrix::zero(dst.dim(k), src.dim(k)));
        }
        for (k, m) in comps.iter().enumerate() {
            if (m.rows, m.cols) != (dst.dim(k), src.dim(k)) {
                return Err(Error::Validation(format!("chain map component {k} has the wrong shape")));
            }
        }
        let f = ChainMap { src, dst, comps };
        for k in 1..n {
            let lhs = f.dst.d(k).mul(&f.comp(k), self.p);
            let rhs = f.comp(k - 1).mul(&f.src.d(k), self.p);
            if lhs != rhs {
                return Err(Error::Validation(format!("chain map does not commute with d_{k}")));
            }
        }
        Ok(f)
    }

    fn map_unchecked(&self, src: Arc<Complex>, dst: Arc<Complex>, mut comps: Vec<Matrix>) -> ChainMap {
        let n = src.len().max(dst.len());
        comps.truncate(n);
        while comps.len() < n {
            let k = comps.len();
            comps.push(Matrix::zero(dst.dim(k), src.dim(k)));
        }
        ChainMap { src, dst, comps }
    }

    pub fn zero_map(&self, src: &Arc<Complex>, dst: &Arc<Complex>) -> ChainMap {
        self.map_unchecked(src.clone(), dst.clone(), vec![])
    }

    /// Ranks of the mapping cone's differentials decide quasi-isomorphism.
    pub fn is_quasi_iso(&self, f: &ChainMap) -> bool {
        let p = self.p;
        let top = f.src.len().max(f.dst.len()) + 1;
        let cone_dim = |k: usize| (if k == 0 { 0 } else { f.src.dim(k - 1) }) + f.dst.dim(k);
        let cone_d = |k: usize| -> Matrix {
            // cone_k = X_{k-1} ⊕ Y_k → cone_{k-1} = X_{k-2} ⊕ Y_{k-1}
            let (xk1, yk) = (if k == 0 { 0 } else { f.src.dim(k - 1) }, f.dst.dim(k));
            let (xk2, yk1) = (if k < 2 { 0 } else { f.src.dim(k - 2) }, if k == 0 { 0 } else { f.dst.dim(k - 1) });
            if k == 0 {
                return Matrix::zero(0, yk);
            }
            let dx = if k >= 2 { f.src.d(k - 1).neg(p) } else { Matrix::zero(0, xk1) };
            let fk1 = f.comp(k - 1).neg(p);
            let dy = f.dst.d(k);
            Matrix::blocks(&[xk2, yk1], &[xk1, yk], &[vec![Some(&dx), None], vec![Some(&fk1), Some(&dy)]])
        };
        let ranks: Vec<usize> = (0..=top + 1).map(|k| cone_d(k).rank(p)).collect();
        (0..=top).all(|k| cone_dim(k) == ranks[k] + ranks[k + 1])
    }

    pub fn is_injective(&self, f: &ChainMap) -> bool {
        (0..f.src.len()).all(|k| f.comp(k).rank(self.p) == f.src.dim(k))
    }

    pub fn is_surjective_above(&self, f: &ChainMap, from: usize) -> bool {
        (from..f.dst.len()).all(|k| f.comp(k).rank(self.p) == f.dst.dim(k))
    }

    /// Homology dimensions `H_0, …` up to the support.
    pub fn homology(&self, c: &Complex) -> Vec<usize> {
        (0..c.len())
            .map(|k| c.dim(k) - c.d(k).rank(self.p) - c.d(k + 1).rank(self.p))
            .collect()
    }

    /// Normal-form complexes: sums of spheres `S^k` and disks `D^k` with every degree
    /// at most `max_degree` and every dimension at most `max_dim`. Basis order in
    /// degree `k` is spheres, then bottoms of `D^{k+1}`, then tops of `D^k`.
    pub fn normal_forms(&self, max_dim: usize, max_degree: usize) -> Vec<Complex> {
        let deg = max_degree + 1;
        let mut out = Vec::new();
        // a[k]: sphere multiplicity in degree k; b[k]: disk D^k multiplicity (k ≥ 1).
        let mut a = vec![0usize; deg];
        let mut b = vec![0usize; deg + 1];
        fn rec(
            k: usize,
            deg: usize,
            max_dim: usize,
            a: &mut Vec<usize>,
            b: &mut Vec<usize>,
            out: &mut Vec<(Vec<usize>, Vec<usize>)>,
        ) {
            if k == deg {
                out.push((a.clone(), b.clone()));
                return;
            }
            // Choose b[k+1] (disks reaching down to k) and a[k]; b[k] fixed already.
            let used = if k >= 1 { b[k] } else { 0 };
            for bk1 in 0..=max_dim.saturating_sub(used) {
                if k + 1 >= deg && bk1 > 0 {
                    break;
                }
                for ak in 0..=max_dim - used - bk1 {
                    a[k] = ak;
                    b[k + 1] = bk1;
                    rec(k + 1, deg, max_dim, a, b, out);
                }
            }
            a[k] = 0;
            b[k + 1] = 0;
        }
        let mut shapes = Vec::new();
        rec(0, deg, max_dim, &mut a, &mut b, &mut shapes);
        for (a, b) in shapes {
            let dims: Vec<usize> = (0..deg).map(|k| a[k] + b[k + 1] + if k >= 1 { b[k] } else { 0 }).collect();
            let diffs: Vec<Matrix> = (1..deg)
                .map(|k| {
                    // d_k: tops of D^k in degree k → bottoms of D^k in degree k−1.
                    let mut m = Matrix::zero(dims[k - 1], dims[k]);
                    let bottom_off = a[k - 1];
                    let top_off = a[k] + b[k + 1];
                    for t in 0..b[k] {
                        m.set(bottom_off + t, top_off + t, 1);
                    }
                    m
                })
                .collect();
            out.push(Complex::new(dims, diffs, self.p).expect("normal form is a complex"));
        }
        out.sort_by(|x, y| (x.total_dim(), x.len(), x).cmp(&(y.total_dim(), y.len(), y)));
        out.dedup();
        out
    }

    fn sum_dims(entries: &[Complex], k: usize) -> (Vec<usize>, usize) {
        let mut offs = Vec::with_capacity(entries.len());
        let mut t = 0;
        for e in entries {
            offs.push(t);
            t += e.dim(k);
        }
        (offs, t)
    }

    fn lift_space(&self, sq: &Square<ChainMap>) -> Option<(AffineSpace, Arc<Complex>, Arc<Complex>)> {
        let p = self.p;
        let b = sq.left.dst.clone();
        let x = sq.right.src.clone();
        let a = &sq.left.src;
        let y = &sq.right.dst;
        let n = b.len().max(x.len());
        let mut offsets = Vec::with_capacity(n + 1);
        let mut width = 0;
        for j in 0..n {
            offsets.push(width);
            width += x.dim(j) * b.dim(j);
        }
        let var = |j: usize, r: usize, c: usize| offsets[j] + r * b.dim(j) + c;
        let mut rows: Vec<Vec<u8>> = Vec::new();
        let mut rhs: Vec<u8> = Vec::new();
        for j in 0..n {
            let (xj, bj, aj, yj) = (x.dim(j), b.dim(j), a.dim(j), y.dim(j));
            let left = sq.left.comp(j);
            let top = sq.top.comp(j);
            for r in 0..xj {
                for c in 0..aj {
                    let mut row = vec![0u8; width];
                    for t in 0..bj {
                        row[var(j, r, t)] = left.get(t, c);
                    }
                    rows.push(row);
                    rhs.push(top.get(r, c));
                }
            }
            let right = sq.right.comp(j);
            let bottom = sq.bottom.comp(j);
            for r in 0..yj {
                for c in 0..bj {
                    let mut row = vec![0u8; width];
                    for t in 0..xj {
                        row[var(j, t, c)] = right.get(r, t);
                    }
                    rows.push(row);
                    rhs.push(bottom.get(r, c));
                }
            }
            if j >= 1 {
                let dx = x.d(j);
                let db = b.d(j);
                for r in 0..x.dim(j - 1) {
                    for c in 0..bj {
                        let mut row = vec![0u8; width];
                        for t in 0..xj {
                            let v = dx.get(r, t) as u32;
                            let idx = var(j, t, c);
                            row[idx] = ((row[idx] as u32 + v) % p) as u8;
                        }
                        for t in 0..b.dim(j - 1) {
                            let v = db.get(t, c) as u32;
                            let idx = var(j - 1, r, t);
                            row[idx] = ((row[idx] as u32 + p - v % p) % p) as u8;
                        }
                        rows.push(row);
                        rhs.push(0);
                    }
                }
            }
        }
        let space = solve_affine(&rows, &rhs, width, p)?;
        Some((space, b, x))
    }

    fn unpack(&self, v: &[u8], b: &Arc<Complex>, x: &Arc<Complex>) -> ChainMap {
        let n = b.len().max(x.len());
        let mut comps = Vec::with_capacity(n);
        let mut off = 0;
        for j in 0..n {
            let sz = x.dim(j) * b.dim(j);
            comps.push(Matrix::from_rows(x.dim(j), b.dim(j), v[off..off + sz].to_vec()));
            off += sz;
        }
        ChainMap { src: b.clone(), dst: x.clone(), comps }
    }

    pub fn encode_matrix(m: &Matrix) -> Value {
        Value::Array((0..m.rows).map(|r| json!(m.row(r))).collect())
    }

    fn decode_matrix(v: &Value, rows: usize, cols: usize, p: u32) -> Result<Matrix> {
        let bad = || Error::Format(format!("expected a {rows}x{cols} matrix, got {v}"));
        let arr = v.as_array().ok_or_else(bad)?;
        if arr.len() != rows {
            return Err(bad());
        }
        let mut data = Vec::with_capacity(rows * cols);
        for r in arr {
            let row = r.as_array().ok_or_else(bad)?;
            if row.len() != cols {
                return Err(bad());
            }
            for x in row {
                let e = x.as_u64().ok_or_else(bad)?;
                if e >= p as u64 {
                    return Err(Error::Format(format!("matrix entry {e} outside F_{p}")));
                }
                data.push(e as u8);
            }
        }
        Ok(Matrix::from_rows(rows, cols, data))
    }
}

impl Carrier for ChainCarrier {
    type Obj = Arc<Complex>;
    type Mor = ChainMap;

    fn name(&self) -> String {
        format!("ch:p={}", self.p)
    }

    fn dom(&self, f: &ChainMap) -> Arc<Complex> {
        f.src.clone()
    }

    fn cod(&self, f: &ChainMap) -> Arc<Complex> {
        f.dst.clone()
    }

    fn identity(&self, x: &Arc<Complex>) -> ChainMap {
        let comps = (0..x.len()).map(|k| Matrix::identity(x.dim(k))).collect();
        ChainMap { src: x.clone(), dst: x.clone(), comps }
    }

    fn compose(&self, g: &ChainMap, f: &ChainMap) -> ChainMap {
        assert_eq!(f.dst, g.src, "chain map composition mismatch");
        let n = f.src.len().max(g.dst.len());
        let comps = (0..n).map(|k| g.comp(k).mul(&f.comp(k), self.p)).collect();
        self.map_unchecked(f.src.clone(), g.dst.clone(), comps)
    }

    fn initial(&self) -> Arc<Complex> {
        Arc::new(Complex::zero())
    }

    fn terminal(&self) -> Arc<Complex> {
        Arc::new(Complex::zero())
    }

    fn from_initial(&self, x: &Arc<Complex>) -> ChainMap {
        self.zero_map(&self.initial(), x)
    }

    fn to_terminal(&self, x: &Arc<Complex>) -> ChainMap {
        self.zero_map(x, &self.terminal())
    }

    fn colimit(&self, shape: &FinCategory, entries: &[Arc<Complex>], edges: &[ChainMap]) -> Result<Cone<Arc<Complex>, ChainMap>> {
        let p = self.p;
        let ents: Vec<Complex> = entries.iter().map(|e| (**e).clone()).collect();
        let top = ents.iter().map(Complex::len).max().unwrap_or(0);
        let mut proj: Vec<Matrix> = Vec::with_capacity(top); // S_k → Q_k
        let mut sect: Vec<Matrix> = Vec::with_capacity(top); // Q_k → S_k
        let mut qdims = Vec::with_capacity(top);
        let mut offs_all = Vec::with_capacity(top);
        for k in 0..top {
            let (offs, total) = Self::sum_dims(&ents, k);
            let mut rels = Vec::new();
            for (u, md) in shape.morphisms().iter().enumerate() {
                if shape.is_identity(u) {
                    continue;
                }
                let fu = edges[u].comp(k);
                for x in 0..ents[md.src].dim(k) {
                    let mut v = vec![0u8; total];
                    v[offs[md.src] + x] = (p - 1) as u8;
                    for r in 0..ents[md.dst].dim(k) {
                        let idx = offs[md.dst] + r;
                        v[idx] = ((v[idx] as u32 + fu.get(r, x) as u32) % p) as u8;
                    }
                    rels.push(v);
                }
            }
            let e = echelon(rels, total, p);
            let mut is_pivot = vec![false; total];
            for &c in &e.pivots {
                is_pivot[c] = true;
            }
            let free: Vec<usize> = (0..total).filter(|&c| !is_pivot[c]).collect();
            let mut pm = Matrix::zero(free.len(), total);
            for s in 0..total {
                let mut v = vec![0u8; total];
                v[s] = 1;
                e.reduce(&mut v, p);
                for (qi, &c) in free.iter().enumerate() {
                    pm.set(qi, s, v[c]);
                }
            }
            let mut sm = Matrix::zero(total, free.len());
            for (qi, &c) in free.iter().enumerate() {
                sm.set(c, qi, 1);
            }
            qdims.push(free.len());
            proj.push(pm);
            sect.push(sm);
            offs_all.push((offs, total));
        }
        let mut diffs = Vec::new();
        for k in 1..top {
            // d^S_k block-diagonal.
            let (offs_k, tot_k) = &offs_all[k];
            let (offs_k1, tot_k1) = &offs_all[k - 1];
            let mut ds = Matrix::zero(*tot_k1, *tot_k);
            for (a, e) in ents.iter().enumerate() {
                let d = e.d(k);
                for r in 0..d.rows {
                    for c in 0..d.cols {
                        ds.set(offs_k1[a] + r, offs_k[a] + c, d.get(r, c));
                    }
                }
            }
            diffs.push(proj[k - 1].mul(&ds, p).mul(&sect[k], p));
        }
        let apex = Arc::new(Complex::new(qdims, diffs, p)?);
        self.check_support(&apex)?;
        let legs = ents
            .iter()
            .enumerate()
            .map(|(a, e)| {
                let comps = (0..top)
                    .map(|k| {
                        let (offs, _) = &offs_all[k];
                        proj[k].slice(0, proj[k].rows, offs[a], e.dim(k))
                    })
                    .collect();
                self.map_unchecked(entries[a].clone(), apex.clone(), comps)
            })
            .collect();
        Ok(Cone { apex, legs })
    }

    fn colimit_mediate(&self, colim: &Cone<Arc<Complex>, ChainMap>, target: &Arc<Complex>, legs: &[ChainMap]) -> Result<ChainMap> {
        let p = self.p;
        let q = &colim.apex;
        let n = q.len().max(target.len());
        let mut comps = Vec::with_capacity(n);
        for k in 0..n {
            // Each basis vector of Q_k is the image of some source basis vector; solve
            // via the stacked legs: m · [leg_a] = [h_a].
            let qk = q.dim(k);
            let tk = target.dim(k);
            let mut m = Matrix::zero(tk, qk);
            let mut found = vec![false; qk];
            for (leg, h) in colim.legs.iter().zip(legs) {
                let lk = leg.comp(k);
                let hk = h.comp(k);
                for s in 0..lk.cols {
                    let col = lk.column(s);
                    if col.iter().filter(|&&x| x != 0).count() == 1 {
                        let qi = col.iter().position(|&x| x != 0).expect("nonzero");
                        if !found[qi] {
                            let inv = crate::linalg::Matrix::from_rows(1, 1, vec![col[qi]]).inverse(p).expect("unit").get(0, 0);
                            for r in 0..tk {
                                m.set(r, qi, ((hk.get(r, s) as u32 * inv as u32) % p) as u8);
                            }
                            found[qi] = true;
                        }
                    }
                }
            }
            if found.iter().any(|f| !f) {
                return Err(Error::Oracle("colimit basis vector without a unit preimage".into()));
            }
            comps.push(m);
        }
        let out = self.map_unchecked(q.clone(), target.clone(), comps);
        for (leg, h) in colim.legs.iter().zip(legs) {
            if self.compose(&out, leg) != *h {
                return Err(Error::Validation("cocone legs do not factor through the colimit".into()));
            }
        }
        Ok(out)
    }

    fn limit(&self, shape: &FinCategory, entries: &[Arc<Complex>], edges: &[ChainMap]) -> Result<Cone<Arc<Complex>, ChainMap>> {
        let p = self.p;
        let ents: Vec<Complex> = entries.iter().map(|e| (**e).clone()).collect();
        let top = ents.iter().map(Complex::len).max().unwrap_or(0);
        let mut incl = Vec::with_capacity(top); // K_k → S_k
        let mut offs_all = Vec::with_capacity(top);
        for k in 0..top {
            let (offs, total) = Self::sum_dims(&ents, k);
            let mut rows = Vec::new();
            for (u, md) in shape.morphisms().iter().enumerate() {
                if shape.is_identity(u) {
                    continue;
                }
                let fu = edges[u].comp(k);
                for r in 0..ents[md.dst].dim(k) {
                    let mut v = vec![0u8; total];
                    for c in 0..ents[md.src].dim(k) {
                        v[offs[md.src] + c] = fu.get(r, c);
                    }
                    let idx = offs[md.dst] + r;
                    v[idx] = ((v[idx] as u32 + p - 1) % p) as u8;
                    rows.push(v);
                }
            }
            let c = Matrix::from_rows(rows.len(), total, rows.concat());
            incl.push(c.kernel(p));
            offs_all.push((offs, total));
        }
        let mut diffs = Vec::new();
        for k in 1..top {
            let (offs_k, tot_k) = &offs_all[k];
            let (offs_k1, tot_k1) = &offs_all[k - 1];
            let mut ds = Matrix::zero(*tot_k1, *tot_k);
            for (a, e) in ents.iter().enumerate() {
                let d = e.d(k);
                for r in 0..d.rows {
                    for c in 0..d.cols {
                        ds.set(offs_k1[a] + r, offs_k[a] + c, d.get(r, c));
                    }
                }
            }
            let image = ds.mul(&incl[k], p);
            let mut dl = Matrix::zero(incl[k - 1].cols, incl[k].cols);
            for c in 0..image.cols {
                let sol = incl[k - 1]
                    .solve(&image.column(c), p)
                    .ok_or_else(|| Error::Oracle("limit is not a subcomplex".into()))?;
                for (r, v) in sol.into_iter().enumerate() {
                    dl.set(r, c, v);
                }
            }
            diffs.push(dl);
        }
        let dims = incl.iter().map(|m| m.cols).collect();
        let apex = Arc::new(Complex::new(dims, diffs, p)?);
        self.check_support(&apex)?;
        let legs = ents
            .iter()
            .enumerate()
            .map(|(a, e)| {
                let comps = (0..top)
                    .map(|k| {
                        let (offs, _) = &offs_all[k];
                        incl[k].slice(offs[a], e.dim(k), 0, incl[k].cols)
                    })
                    .collect();
                self.map_unchecked(apex.clone(), entries[a].clone(), comps)
            })
            .collect();
        Ok(Cone { apex, legs })
    }

    fn limit_mediate(&self, lim: &Cone<Arc<Complex>, ChainMap>, source: &Arc<Complex>, legs: &[ChainMap]) -> Result<ChainMap> {
        let p = self.p;
        let l = &lim.apex;
        let n = l.len().max(source.len());
        let mut comps = Vec::with_capacity(n);
        for k in 0..n {
            // Stack legs of the limit and of the cone; solve incl · m = h column-wise.
            let lk: Vec<Matrix> = lim.legs.iter().map(|g| g.comp(k)).collect();
            let hk: Vec<Matrix> = legs.iter().map(|g| g.comp(k)).collect();
            let rows: usize = lk.iter().map(|m| m.rows).sum();
            let stack = |ms: &[Matrix], cols: usize| {
                let mut out = Matrix::zero(rows, cols);
                let mut r0 = 0;
                for m in ms {
                    for r in 0..m.rows {
                        for c in 0..cols {
                            out.set(r0 + r, c, m.get(r, c));
                        }
                    }
                    r0 += m.rows;
                }
                out
            };
            let big_l = stack(&lk, l.dim(k));
            let big_h = stack(&hk, source.dim(k));
            let mut m = Matrix::zero(l.dim(k), source.dim(k));
            for c in 0..source.dim(k) {
                let sol = big_l
                    .solve(&big_h.column(c), p)
                    .ok_or_else(|| Error::Validation("cone legs do not land in the limit".into()))?;
                for (r, v) in sol.into_iter().enumerate() {
                    m.set(r, c, v);
                }
            }
            comps.push(m);
        }
        let out = self.map_unchecked(source.clone(), l.clone(), comps);
        for (leg, h) in lim.legs.iter().zip(legs) {
            if self.compose(leg, &out) != *h {
                return Err(Error::Validation("cone legs do not factor through the limit".into()));
            }
        }
        Ok(out)
    }

    fn inverse(&self, f: &ChainMap) -> Option<ChainMap> {
        if f.src.dims() != f.dst.dims() {
            return None;
        }
        let comps = (0..f.src.len())
            .map(|k| f.comp(k).inverse(self.p))
            .collect::<Option<Vec<_>>>()?;
        Some(self.map_unchecked(f.dst.clone(), f.src.clone(), comps))
    }

    fn native_is_cof(&self, f: &ChainMap) -> bool {
        self.is_injective(f)
    }

    fn native_is_fib(&self, f: &ChainMap) -> bool {
        self.is_surjective_above(f, 1)
    }

    fn native_is_we(&self, f: &ChainMap) -> bool {
        self.is_quasi_iso(f)
    }

    fn native_factor_cof_acyfib(&self, f: &ChainMap) -> Result<(ChainMap, ChainMap)> {
        // Mapping cylinder: Cyl_k = X_k ⊕ X_{k−1} ⊕ Y_k.
        let p = self.p;
        let (x, y) = (&f.src, &f.dst);
        let top = x.len().max(y.len()) + 1;
        let xd = |k: usize| if k == usize::MAX { 0 } else { x.dim(k) };
        let prev = |k: usize| if k == 0 { usize::MAX } else { k - 1 };
        let cyl_dims = |k: usize| [xd(k), xd(prev(k)), y.dim(k)];
        let mut dims = Vec::with_capacity(top);
        let mut diffs = Vec::with_capacity(top);
        for k in 0..top {
            dims.push(cyl_dims(k).iter().sum());
            if k >= 1 {
                let rows = cyl_dims(k - 1);
                let cols = cyl_dims(k);
                let dxk = x.d(k);
                let id = Matrix::identity(xd(k - 1));
                let dxk1 = if k >= 2 { x.d(k - 1).neg(p) } else { Matrix::zero(0, xd(k - 1)) };
                let fk1 = f.comp(k - 1).neg(p);
                let dyk = y.d(k);
                diffs.push(Matrix::blocks(
                    &rows,
                    &cols,
                    &[
                        vec![Some(&dxk), Some(&id), None],
                        vec![None, Some(&dxk1), None],
                        vec![None, Some(&fk1), Some(&dyk)],
                    ],
                ));
            }
        }
        let cyl = Arc::new(Complex::new(dims, diffs, p)?);
        self.check_support(&cyl)?;
        let i_comps = (0..top)
            .map(|k| {
                let idk = Matrix::identity(xd(k));
                Matrix::blocks(&cyl_dims(k), &[xd(k)], &[vec![Some(&idk)], vec![None], vec![None]])
            })
            .collect();
        let p_comps = (0..top)
            .map(|k| {
                let fk = f.comp(k);
                let idy = Matrix::identity(y.dim(k));
                Matrix::blocks(&[y.dim(k)], &cyl_dims(k), &[vec![Some(&fk), None, Some(&idy)]])
            })
            .collect();
        Ok((
            self.map_unchecked(x.clone(), cyl.clone(), i_comps),
            self.map_unchecked(cyl, y.clone(), p_comps),
        ))
    }

    fn native_factor_acycof_fib(&self, f: &ChainMap) -> Result<(ChainMap, ChainMap)> {
        // Z = X ⊕ ⊕_{n≥1} D^n(Y_n); degree k holds X_k, tops T_k = Y_k (k ≥ 1), and
        // bottoms B_k = Y_{k+1}.
        let (x, y) = (&f.src, &f.dst);
        let top = x.len().max(y.len());
        let t = |k: usize| if k >= 1 { y.dim(k) } else { 0 };
        let zd = |k: usize| [x.dim(k), t(k), y.dim(k + 1)];
        let mut dims = Vec::with_capacity(top);
        let mut diffs = Vec::with_capacity(top);
        for k in 0..top {
            dims.push(zd(k).iter().sum());
            if k >= 1 {
                let dxk = x.d(k);
                let id = Matrix::identity(y.dim(k));
                diffs.push(Matrix::blocks(
                    &zd(k - 1),
                    &zd(k),
                    &[vec![Some(&dxk), None, None], vec![None, None, None], vec![None, Some(&id), None]],
                ));
            }
        }
        let z = Arc::new(Complex::new(dims, diffs, self.p)?);
        self.check_support(&z)?;
        let i_comps = (0..top)
            .map(|k| {
                let idk = Matrix::identity(x.dim(k));
                Matrix::blocks(&zd(k), &[x.dim(k)], &[vec![Some(&idk)], vec![None], vec![None]])
            })
            .collect();
        let p_comps = (0..top)
            .map(|k| {
                let fk = f.comp(k);
                let idt = Matrix::identity(t(k));
                let dy = y.d(k + 1);
                let tb = if k >= 1 { Some(&idt) } else { None };
                Matrix::blocks(&[y.dim(k)], &zd(k), &[vec![Some(&fk), tb, Some(&dy)]])
            })
            .collect();
        Ok((
            self.map_unchecked(x.clone(), z.clone(), i_comps),
            self.map_unchecked(z, y.clone(), p_comps),
        ))
    }

    fn native_generating(&self, budget: &Budget) -> Option<(Vec<ChainMap>, Vec<ChainMap>)> {
        let zero = self.initial();
        let mut i = vec![self.zero_map(&zero, &Arc::new(Complex::sphere(0)))];
        let mut j = Vec::new();
        for n in 1..=budget.max_degree.max(1) {
            let s = Arc::new(Complex::sphere(n - 1));
            let d = Arc::new(Complex::disk(n));
            let mut comps = vec![Matrix::zero(0, 0); n + 1];
            for (k, c) in comps.iter_mut().enumerate() {
                *c = Matrix::zero(d.dim(k), s.dim(k));
            }
            comps[n - 1] = Matrix::identity(1);
            i.push(self.map_unchecked(s, d.clone(), comps));
            j.push(self.zero_map(&zero, &d));
        }
        Some((i, j))
    }

    fn objects(&self, budget: &Budget) -> Result<Vec<Arc<Complex>>> {
        let out: Vec<Arc<Complex>> = self
            .normal_forms(budget.max_dim, budget.max_degree)
            .into_iter()
            .map(Arc::new)
            .collect();
        if out.len() > budget.max_objects {
            return Err(Error::budget("chain-complex object enumeration", budget.max_objects));
        }
        Ok(out)
    }

    fn lifts<'a>(&'a self, sq: &Square<ChainMap>) -> Result<LiftIter<'a, ChainMap>> {
        match self.lift_space(sq) {
            None => Ok(Box::new(std::iter::empty())),
            Some((space, b, x)) => {
                let pts: Box<dyn Iterator<Item = Vec<u8>>> = Box::new(OwnedAffineIter::new(space));
                Ok(Box::new(pts.map(move |v| self.unpack(&v, &b, &x))))
            }
        }
    }

    fn sample_lift(&self, sq: &Square<ChainMap>, rng: &mut dyn rand::RngCore, _cap: usize) -> Result<Option<ChainMap>> {
        Ok(self.lift_space(sq).map(|(space, b, x)| {
            let coeffs: Vec<usize> = (0..space.dim()).map(|_| rng.gen_range(0..self.p as usize)).collect();
            self.unpack(&space.point(&coeffs), &b, &x)
        }))
    }

    fn encode_obj(&self, x: &Arc<Complex>) -> Value {
        json!({
            "differentials": x.diffs.iter().map(Self::encode_matrix).collect::<Vec<_>>(),
            "dims": x.dims,
        })
    }

    fn encode_mor(&self, f: &ChainMap) -> Value {
        json!({
            "components": f.comps.iter().map(Self::encode_matrix).collect::<Vec<_>>(),
            "source": self.encode_obj(&f.src),
            "target": self.encode_obj(&f.dst),
        })
    }

    fn decode_obj(&self, v: &Value) -> Result<Arc<Complex>> {
        let bad = || Error::Format(format!("chain complex must be {{dims, differentials}}, got {v}"));
        let dims: Vec<usize> = v
            .get("dims")
            .and_then(Value::as_array)
            .ok_or_else(bad)?
            .iter()
            .map(|d| d.as_u64().map(|n| n as usize).ok_or_else(bad))
            .collect::<Result<_>>()?;
        let empty = Vec::new();
        let ds = v.get("differentials").and_then(Value::as_array).unwrap_or(&empty);
        if ds.len() != dims.len().saturating_sub(1) {
            return Err(Error::Format(format!(
                "{} degrees need {} differentials",
                dims.len(),
                dims.len().saturating_sub(1)
            )));
        }
        let diffs = ds
            .iter()
            .enumerate()
            .map(|(k, m)| Self::decode_matrix(m, dims[k], dims[k + 1], self.p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(Complex::new(dims, diffs, self.p)?))
    }

    fn decode_mor(&self, v: &Value) -> Result<ChainMap> {
        let bad = || Error::Format(format!("chain map must be {{source, target, components}}, got {v}"));
        let src = self.decode_obj(v.get("source").ok_or_else(bad)?)?;
        let dst = self.decode_obj(v.get("target").ok_or_else(bad)?)?;
        let cs = v.get("components").and_then(Value::as_array).ok_or_else(bad)?;
        let comps = cs
            .iter()
            .enumerate()
            .map(|(k, m)| Self::decode_matrix(m, dst.dim(k), src.dim(k), self.p))
            .collect::<Result<Vec<_>>>()?;
        self.map(src, dst, comps)
    }
}

/// Lexicographic iterator that owns its affine space.
struct OwnedAffineIter {
    space: AffineSpace,
    coeffs: Option<Vec<usize>>,
}

impl OwnedAffineIter {
    fn new(space: AffineSpace) -> Self {
        let k = space.dim();
        OwnedAffineIter { space, coeffs: Some(vec![0; k]) }
    }
}

impl Iterator for OwnedAffineIter {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        let cur = self.coeffs.take()?;
        let out = self.space.point(&cur);
        let p = self.space.p as usize;
        let mut next = cur;
        let mut i = next.len();
        while i > 0 {
            i -= 1;
            next[i] += 1;
            if next[i] < p {
                self.coeffs = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::span_category;

    fn ch2() -> ChainCarrier {
        ChainCarrier::new(2).unwrap()
    }

    fn arc(c: Complex) -> Arc<Complex> {
        Arc::new(c)
    }

    #[test]
    fn zero_into_disk_is_a_weak_equivalence() {
        let c = ch2();
        let f = c.from_initial(&arc(Complex::disk(1)));
        assert!(c.native_is_we(&f));
    }

    #[test]
    fn degree_zero_identity_from_disk_is_not_a_chain_map() {
        let c = ch2();
        let d = arc(Complex::disk(1));
        let s = arc(Complex::sphere(0));
        assert!(c.map(d.clone(), s.clone(), vec![Matrix::identity(1), Matrix::zero(0, 1)]).is_err());
        // The only map D^1 → S^0 is zero: a fibration (degree 0 is unconstrained), not a we.
        let z = c.zero_map(&d, &s);
        assert!(c.native_is_fib(&z));
        assert!(!c.native_is_we(&z));
        let t = c.to_terminal(&d);
        assert!(c.native_is_fib(&t) && c.native_is_we(&t));
    }

    #[test]
    fn sphere_to_zero_is_not_a_cofibration() {
        let c = ch2();
        let f = c.to_terminal(&arc(Complex::sphere(0)));
        assert!(!c.native_is_cof(&f));
    }

    #[test]
    fn factorizations_compose_and_land_in_classes() {
        let c = ch2();
        let objs = c.objects(&Budget::DEFAULT.with_dim(1).with_degree(1)).unwrap();
        for x in &objs {
            for y in &objs {
                for f in c.homs(x, y, 1000).unwrap() {
                    let (i, q) = c.native_factor_cof_acyfib(&f).unwrap();
                    assert_eq!(c.compose(&q, &i), f);
                    assert!(c.native_is_cof(&i) && c.native_is_fib(&q) && c.native_is_we(&q));
                    let (j, r) = c.native_factor_acycof_fib(&f).unwrap();
                    assert_eq!(c.compose(&r, &j), f);
                    assert!(c.native_is_cof(&j) && c.native_is_we(&j) && c.native_is_fib(&r));
                    let pad = |mut v: Vec<usize>, n: usize| {
                        v.resize(n, 0);
                        v
                    };
                    let n = 8;
                    assert_eq!(pad(c.homology(&i.dst), n), pad(c.homology(y), n));
                    assert_eq!(pad(c.homology(&j.dst), n), pad(c.homology(x), n));
                }
            }
        }
    }

    #[test]
    fn pushout_dimension_formula() {
        let c = ch2();
        let shape = span_category();
        let v0 = arc(Complex::degree_zero(1));
        let v2 = arc(Complex::degree_zero(2));
        let incl = c.map(v0.clone(), v2.clone(), vec![Matrix::from_rows(2, 1, vec![1, 0])]).unwrap();
        let entries = vec![v0.clone(), v2.clone(), v2.clone()];
        let edges: Vec<ChainMap> = shape
            .morphisms()
            .iter()
            .map(|md| if md.src == md.dst { c.identity(&entries[md.src]) } else { incl.clone() })
            .collect();
        let cone = c.colimit(&shape, &entries, &edges).unwrap();
        assert_eq!(cone.apex.dims(), &[3]);
        let mid = c.colimit_mediate(&cone, &cone.apex, &cone.legs).unwrap();
        assert_eq!(mid, c.identity(&cone.apex));
    }

    #[test]
    fn normal_forms_small() {
        let c = ch2();
        // Degree 0 only, dim ≤ 2: 0, F, F².
        assert_eq!(c.normal_forms(2, 0).len(), 3);
        // Degrees ≤ 1, dim ≤ 1: 0, S0, S1, S0+S1, D1.
        assert_eq!(c.normal_forms(1, 1).len(), 5);
    }
}
