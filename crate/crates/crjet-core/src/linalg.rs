//! Dense exact linear algebra over the Gaussian rationals.
//!
//! Everything is plain Gaussian elimination with exact division; pivots
//! are always the first usable entry in row/column order, so every
//! result (rank profiles, kernel bases, chosen minors) is deterministic
//! and matches the crate-wide "lexicographically first" convention.
//!
//! Matrices at this scale are tiny (rows/cols bounded by jet-space
//! dimensions of desk examples), so no fraction-free or modular tricks
//! are needed: exact rational elimination is already exact.

use crate::gauss::{self, GaussRat};
use num_traits::Zero;
use std::ops::{Index, IndexMut};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussRat>,
}

impl Index<[usize; 2]> for Matrix {
    type Output = GaussRat;
    fn index(&self, idx: [usize; 2]) -> &GaussRat {
        debug_assert!(idx[0] < self.rows && idx[1] < self.cols);
        &self.data[idx[0] * self.cols + idx[1]]
    }
}

impl IndexMut<[usize; 2]> for Matrix {
    fn index_mut(&mut self, idx: [usize; 2]) -> &mut GaussRat {
        debug_assert!(idx[0] < self.rows && idx[1] < self.cols);
        &mut self.data[idx[0] * self.cols + idx[1]]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![gauss::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[[i, i]] = gauss::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussRat>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "from_rows: ragged rows"
        );
        Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[GaussRat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[[j, i]] = self[[i, j]].clone();
            }
        }
        t
    }

    pub fn conjugate(&self) -> Matrix {
        let mut c = self.clone();
        for v in &mut c.data {
            *v = v.conj();
        }
        c
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "mul: inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[[i, k]];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * &other[[k, j]];
                    let cur = &out[[i, j]] + &add;
                    out[[i, j]] = cur;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[GaussRat]) -> Vec<GaussRat> {
        assert_eq!(self.cols, v.len(), "mul_vec: dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = gauss::zero();
                for j in 0..self.cols {
                    acc = &acc + &(&self[[i, j]] * &v[j]);
                }
                acc
            })
            .collect()
    }

    /// Stack `self` on top of `other` (same column count).
    pub fn stack_vertical(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "stack_vertical: column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Keep only the listed rows, in the listed order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let rows: Vec<Vec<GaussRat>> = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        let m = Matrix::from_rows(rows);
        assert_eq!(m.cols, self.cols);
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                out[[i, jj]] = self[[i, j]].clone();
            }
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self[[i, j]] != self[[j, i]].conj() {
                    return false;
                }
            }
        }
        true
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // first usable pivot row
            let Some(p) = (r..m.rows).find(|&i| !m[[i, c]].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = gauss::one() / m[[r, c]].clone();
            for j in c..m.cols {
                m[[r, j]] = &m[[r, j]] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[[i, c]].is_zero() {
                    let factor = m[[i, c]].clone();
                    for j in c..m.cols {
                        let sub = &factor * &m[[r, j]];
                        m[[i, j]] = &m[[i, j]] - &sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Solve `self * x = b` demanding a unique solution (full column
    /// rank and consistent). `None` when inconsistent or underdetermined.
    pub fn solve_unique(&self, b: &[GaussRat]) -> Option<Vec<GaussRat>> {
        self.solve_with_free(b, |_| None)
    }

    /// Solve `self * x = b`; free (non-pivot) variables are taken from
    /// `free_value` (`None` demands none exist). `None` when the system
    /// is inconsistent or a free variable is demanded but refused.
    pub fn solve_with_free(
        &self,
        b: &[GaussRat],
        mut free_value: impl FnMut(usize) -> Option<GaussRat>,
    ) -> Option<Vec<GaussRat>> {
        assert_eq!(self.rows, b.len(), "solve: rhs length mismatch");
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[[i, j]] = self[[i, j]].clone();
            }
            aug[[i, self.cols]] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![gauss::zero(); self.cols];
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        for j in 0..self.cols {
            if !pivot_set[j] {
                x[j] = free_value(j)?;
            }
        }
        for (row, &p) in pivots.iter().enumerate() {
            let mut val = r[[row, self.cols]].clone();
            for j in 0..self.cols {
                if j != p && !pivot_set[j] && !r[[row, j]].is_zero() {
                    val = &val - &(&r[[row, j]] * &x[j]);
                }
            }
            x[p] = val;
        }
        Some(x)
    }

    /// Basis of the right kernel; one vector per free column, ordered by
    /// increasing free-column index, each normalized with a 1 in its
    /// free slot. Deterministic.
    pub fn kernel_basis(&self) -> Vec<Vec<GaussRat>> {
        let (r, pivots) = self.rref();
        let mut pivot_of_col = vec![None; self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            pivot_of_col[p] = Some(row);
        }
        let mut basis = Vec::new();
        for j in 0..self.cols {
            if pivot_of_col[j].is_some() {
                continue;
            }
            let mut v = vec![gauss::zero(); self.cols];
            v[j] = gauss::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[[row, j]].clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[[i, j]] = self[[i, j]].clone();
            }
            aug[[i, n + i]] = gauss::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[[i, j]] = r[[i, n + j]].clone();
            }
        }
        Some(out)
    }

    /// Lexicographically first set of `k` linearly independent columns,
    /// or `None` if the rank is below `k`. Greedy left-to-right growth
    /// yields the lex-least independent subset.
    pub fn lex_first_cols(&self, k: usize) -> Option<Vec<usize>> {
        let mut chosen: Vec<usize> = Vec::new();
        for c in 0..self.cols {
            if chosen.len() == k {
                break;
            }
            let mut trial = chosen.clone();
            trial.push(c);
            if self.select_cols(&trial).rank() == trial.len() {
                chosen = trial;
            }
        }
        (chosen.len() == k).then_some(chosen)
    }

    /// Lexicographically first set of `k` linearly independent rows.
    pub fn lex_first_rows(&self, k: usize) -> Option<Vec<usize>> {
        self.transpose().lex_first_cols(k)
    }
}

/// Do two families of vectors span the same subspace? Exact, via rank
/// comparisons of stacked matrices.
pub fn same_span(a: &[Vec<GaussRat>], b: &[Vec<GaussRat>]) -> bool {
    if a.is_empty() && b.is_empty() {
        return true;
    }
    let dim = a.first().or_else(|| b.first()).map_or(0, |v| v.len());
    if a.iter().chain(b.iter()).any(|v| v.len() != dim) {
        return false;
    }
    let ma = Matrix::from_rows(a.to_vec());
    let mb = Matrix::from_rows(b.to_vec());
    let ra = if a.is_empty() { 0 } else { ma.rank() };
    let rb = if b.is_empty() { 0 } else { mb.rank() };
    if ra != rb {
        return false;
    }
    if a.is_empty() || b.is_empty() {
        return ra == rb; // both rank 0
    }
    ma.stack_vertical(&mb).rank() == ra
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::{from_int, i_unit, ratio, ratio_c};

    fn m2(a: i64, b: i64, c: i64, d: i64) -> Matrix {
        Matrix::from_rows(vec![
            vec![from_int(a), from_int(b)],
            vec![from_int(c), from_int(d)],
        ])
    }

    #[test]
    fn rank_and_rref() {
        assert_eq!(m2(1, 2, 2, 4).rank(), 1);
        assert_eq!(m2(1, 2, 3, 4).rank(), 2);
        assert_eq!(Matrix::zeros(3, 3).rank(), 0);
        let m = Matrix::from_rows(vec![
            vec![from_int(0), from_int(1), from_int(2)],
            vec![from_int(0), from_int(2), from_int(4)],
        ]);
        let (_, pivots) = m.rref();
        assert_eq!(pivots, vec![1]);
    }

    #[test]
    fn solve_and_inverse_exact() {
        let m = m2(1, 2, 3, 4);
        let b = vec![from_int(5), from_int(11)];
        let x = m.solve_unique(&b).unwrap();
        assert_eq!(x, vec![from_int(1), from_int(2)]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv.mul(&m), Matrix::identity(2));
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        // complex entries
        let c = Matrix::from_rows(vec![
            vec![i_unit(), from_int(1)],
            vec![from_int(0), ratio(1, 2)],
        ]);
        let cinv = c.inverse().unwrap();
        assert_eq!(c.mul(&cinv), Matrix::identity(2));
    }

    #[test]
    fn singular_solve_is_refused() {
        let m = m2(1, 2, 2, 4);
        assert!(m.solve_unique(&[from_int(1), from_int(3)]).is_none()); // inconsistent
        assert!(m.solve_unique(&[from_int(1), from_int(2)]).is_none()); // underdetermined
        let x = m
            .solve_with_free(&[from_int(1), from_int(2)], |_| Some(from_int(7)))
            .unwrap();
        // x1 free = 7, x0 = 1 - 2*7 = -13
        assert_eq!(x, vec![from_int(-13), from_int(7)]);
    }

    #[test]
    fn kernel_basis_is_exact_and_deterministic() {
        let m = Matrix::from_rows(vec![vec![from_int(1), from_int(2), from_int(3)]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            let img = m.mul_vec(v);
            assert!(img.iter().all(|c| c.is_zero()));
        }
        assert_eq!(k[0][1], from_int(1));
        assert_eq!(k[1][2], from_int(1));
    }

    #[test]
    fn lex_first_selection() {
        // first column dependent set: col0 = 0, col1 and col2 independent
        let m = Matrix::from_rows(vec![
            vec![from_int(0), from_int(1), from_int(0)],
            vec![from_int(0), from_int(0), from_int(2)],
        ]);
        assert_eq!(m.lex_first_cols(2).unwrap(), vec![1, 2]);
        assert!(m.lex_first_cols(3).is_none());
        let n = Matrix::from_rows(vec![
            vec![from_int(1), from_int(1)],
            vec![from_int(2), from_int(2)],
            vec![from_int(0), from_int(1)],
        ]);
        assert_eq!(n.lex_first_rows(2).unwrap(), vec![0, 2]);
    }

    #[test]
    fn hermitian_and_span() {
        let h = Matrix::from_rows(vec![
            vec![from_int(2), ratio_c(0, 1, 1, 1)],
            vec![ratio_c(0, 1, -1, 1), from_int(3)],
        ]);
        assert!(h.is_hermitian());
        assert!(!m2(1, 2, 3, 4).is_hermitian());
        let a = vec![vec![from_int(1), from_int(0)], vec![from_int(1), from_int(1)]];
        let b = vec![vec![from_int(0), from_int(1)], vec![from_int(2), from_int(0)]];
        assert!(same_span(&a, &b));
        let c = vec![vec![from_int(1), from_int(0)]];
        assert!(!same_span(&a, &c));
    }
}
