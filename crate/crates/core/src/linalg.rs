//! Dense matrices over the prime field F_p.

use serde::{Deserialize, Serialize};

/// Row-major matrix with entries in `0..p`. The modulus is supplied per operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u8>,
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat: a^(p-2).
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Reduced row echelon form of a set of row vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<u8>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    /// Eliminates pivot coordinates of `v` in place.
    pub fn reduce(&self, v: &mut [u8], p: u32) {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let a = v[c] as u32;
            if a != 0 {
                axpy(v, row, p - a, p);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// `v += a * w` over F_p.
pub fn axpy(v: &mut [u8], w: &[u8], a: u32, p: u32) {
    if a % p == 0 {
        return;
    }
    for (x, &y) in v.iter_mut().zip(w) {
        *x = ((*x as u32 + a * y as u32) % p) as u8;
    }
}

/// Row-reduces the given vectors (all of length `width`).
pub fn echelon(mut vecs: Vec<Vec<u8>>, width: usize, p: u32) -> Echelon {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(k) = (r..vecs.len()).find(|&k| vecs[k][c] != 0) else { continue };
        vecs.swap(r, k);
        let inv = inv_mod(vecs[r][c] as u32, p);
        for x in vecs[r].iter_mut() {
            *x = ((*x as u32 * inv) % p) as u8;
        }
        let pivot_row = vecs[r].clone();
        for (k, v) in vecs.iter_mut().enumerate() {
            if k != r && v[c] != 0 {
                let a = v[c] as u32;
                axpy(v, &pivot_row, p - a, p);
            }
        }
        pivots.push(c);
        r += 1;
        if r == vecs.len() {
            break;
        }
    }
    vecs.truncate(r);
    Echelon { rows: vecs, pivots }
}

/// Affine solution set `particular + span(basis)` of a linear system, with the basis in
/// reduced echelon form and `particular` zero on every basis pivot. Under this
/// normalization, lexicographic order of solutions equals lexicographic order of the
/// coefficient tuples.
#[derive(Clone, Debug)]
pub struct AffineSpace {
    pub particular: Vec<u8>,
    pub basis: Echelon,
    pub p: u32,
}

impl AffineSpace {
    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    pub fn point(&self, coeffs: &[usize]) -> Vec<u8> {
        let mut v = self.particular.clone();
        for (row, &c) in self.basis.rows.iter().zip(coeffs) {
            axpy(&mut v, row, c as u32, self.p);
        }
        v
    }

    /// Number of points, or `None` on overflow.
    pub fn count(&self) -> Option<usize> {
        (0..self.dim()).try_fold(1usize, |acc, _| acc.checked_mul(self.p as usize))
    }

    /// Points in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        let k = self.dim();
        let p = self.p as usize;
        let mut coeffs: Option<Vec<usize>> = Some(vec![0; k]);
        std::iter::from_fn(move || {
            let cur = coeffs.take()?;
            let out = self.point(&cur);
            let mut next = cur;
            let mut i = k;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                next[i] += 1;
                if next[i] < p {
                    coeffs = Some(next);
                    break;
                }
                next[i] = 0;
            }
            Some(out)
        })
    }
}

/// Solves `A x = b` for `A` given as rows of length `width`. Returns `None` when
/// inconsistent.
pub fn solve_affine(a_rows: &[Vec<u8>], b: &[u8], width: usize, p: u32) -> Option<AffineSpace> {
    // Augmented echelon form.
    let aug: Vec<Vec<u8>> = a_rows
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut v = r.clone();
            v.push(bi);
            v
        })
        .collect();
    let e = echelon(aug, width + 1, p);
    if e.pivots.last() == Some(&width) {
        return None;
    }
    let mut particular = vec![0u8; width];
    for (row, &c) in e.rows.iter().zip(&e.pivots) {
        particular[c] = row[width];
    }
    // Kernel basis: one vector per free column.
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; width];
        for &c in &e.pivots {
            s[c] = true;
        }
        s
    };
    let mut kernel = Vec::new();
    for free in (0..width).filter(|&c| !pivot_set[c]) {
        let mut v = vec![0u8; width];
        v[free] = 1;
        for (row, &c) in e.rows.iter().zip(&e.pivots) {
            let a = row[free] as u32;
            if a != 0 {
                v[c] = ((p - a) % p) as u8;
            }
        }
        kernel.push(v);
    }
    let basis = echelon(kernel, width, p);
    basis.reduce(&mut particular, p);
    Some(AffineSpace { particular, basis, p })
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &Matrix, p: u32) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u32;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = ((out.data[idx] as u32 + a * other.get(k, j) as u32) % p) as u8;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[u8], p: u32) -> Vec<u8> {
        (0..self.rows)
            .map(|i| {
                (self.row(i).iter().zip(v).map(|(&a, &b)| a as u32 * b as u32).sum::<u32>() % p) as u8
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix, p: u32) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| ((a as u32 + b as u32) % p) as u8).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self, p: u32) -> Matrix {
        let data = self.data.iter().map(|&a| ((p - a as u32) % p) as u8).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn rows_vec(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn rank(&self, p: u32) -> usize {
        echelon(self.rows_vec(), self.cols, p).rank()
    }

    /// Basis of the null space, as columns of the returned matrix, in reduced echelon
    /// order.
    pub fn kernel(&self, p: u32) -> Matrix {
        let space = solve_affine(&self.rows_vec(), &vec![0; self.rows], self.cols, p)
            .expect("homogeneous system is consistent");
        let k = space.dim();
        let mut out = Matrix::zero(self.cols, k);
        for (j, v) in space.basis.rows.iter().enumerate() {
            for (i, &x) in v.iter().enumerate() {
                out.set(i, j, x);
            }
        }
        out
    }

    /// Some `x` with `self · x = b`.
    pub fn solve(&self, b: &[u8], p: u32) -> Option<Vec<u8>> {
        solve_affine(&self.rows_vec(), b, self.cols, p).map(|s| s.particular)
    }

    pub fn inverse(&self, p: u32) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug: Vec<Vec<u8>> = (0..n)
            .map(|i| {
                let mut v = self.row(i).to_vec();
                v.extend((0..n).map(|j| u8::from(i == j)));
                v
            })
            .collect();
        let e = echelon(aug, 2 * n, p);
        if e.rank() < n || (n > 0 && e.pivots[n - 1] >= n) {
            return None;
        }
        let mut out = Matrix::zero(n, n);
        for (i, row) in e.rows.iter().enumerate() {
            for j in 0..n {
                out.set(i, j, row[n + j]);
            }
        }
        Some(out)
    }

    /// Block matrix from a grid of blocks; `None` blocks are zero.
    pub fn blocks(row_dims: &[usize], col_dims: &[usize], blocks: &[Vec<Option<&Matrix>>]) -> Matrix {
        let rows = row_dims.iter().sum();
        let cols = col_dims.iter().sum();
        let mut out = Matrix::zero(rows, cols);
        let mut r0 = 0;
        for (bi, &rd) in row_dims.iter().enumerate() {
            let mut c0 = 0;
            for (bj, &cd) in col_dims.iter().enumerate() {
                if let Some(m) = blocks[bi][bj] {
                    assert_eq!((m.rows, m.cols), (rd, cd), "block shape");
                    for i in 0..rd {
                        for j in 0..cd {
                            out.set(r0 + i, c0 + j, m.get(i, j));
                        }
                    }
                }
                c0 += cd;
            }
            r0 += rd;
        }
        out
    }

    /// Sub-block starting at `(r0, c0)`.
    pub fn slice(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(5) && is_prime(7));
        assert!(!is_prime(1) && !is_prime(4) && !is_prime(9));
    }

    #[test]
    fn rank_and_kernel() {
        let m = Matrix::from_rows(2, 3, vec![1, 1, 0, 0, 1, 1]);
        assert_eq!(m.rank(2), 2);
        let k = m.kernel(2);
        assert_eq!((k.rows, k.cols), (3, 1));
        assert!(m.mul(&k, 2).is_zero());
        assert_eq!(k.column(0), vec![1, 1, 1]);
    }

    #[test]
    fn inverse_over_f3() {
        let m = Matrix::from_rows(2, 2, vec![1, 2, 0, 1]);
        let inv = m.inverse(3).unwrap();
        assert_eq!(m.mul(&inv, 3), Matrix::identity(2));
        assert!(Matrix::from_rows(2, 2, vec![1, 1, 1, 1]).inverse(2).is_none());
        assert_eq!(Matrix::zero(0, 0).inverse(2), Some(Matrix::zero(0, 0)));
    }

    #[test]
    fn affine_enumeration_is_lexicographic() {
        // x0 + x2 = 1 over F2 in three unknowns: four solutions.
        let space = solve_affine(&[vec![1, 0, 1]], &[1], 3, 2).unwrap();
        let pts: Vec<Vec<u8>> = space.iter().collect();
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[0], vec![0, 0, 1]);
        assert!(solve_affine(&[vec![0, 0]], &[1], 2, 2).is_none());
    }

    #[test]
    fn affine_enumeration_lex_over_f3() {
        let space = solve_affine(&[vec![1, 1, 1]], &[2], 3, 3).unwrap();
        let pts: Vec<Vec<u8>> = space.iter().collect();
        let mut brute = Vec::new();
        for a in 0..3u8 {
            for b in 0..3u8 {
                for c in 0..3u8 {
                    if (a + b + c) % 3 == 2 {
                        brute.push(vec![a, b, c]);
                    }
                }
            }
        }
        assert_eq!(pts, brute);
    }
}
