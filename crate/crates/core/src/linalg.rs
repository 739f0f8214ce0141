//! Exact sparse rational linear algebra: reduced row echelon form, rank,
//! particular solutions, and kernel bases.
//!
//! Pivoting is strictly positional (first row with a nonzero entry in the
//! current column) so that every result is reproducible across runs and
//! across the dense/sparse code paths.

use crate::rat::Q;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Column threshold below which the dense elimination path is used.
const DENSE_COLS: usize = 1000;

/// A sparse rational matrix, stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BTreeMap<usize, Q>>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<(usize, Q)>>) -> Self {
        let mut m = Self::zero(rows.len(), cols);
        for (i, r) in rows.into_iter().enumerate() {
            for (j, v) in r {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_dense(rows: Vec<Vec<Q>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zero(rows.len(), cols);
        for (i, r) in rows.into_iter().enumerate() {
            for (j, v) in r.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.data[i].get(&j).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        if v.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn row(&self, i: usize) -> &BTreeMap<usize, Q> {
        &self.data[i]
    }

    pub fn push_row(&mut self, r: Vec<(usize, Q)>) {
        let mut row = BTreeMap::new();
        for (j, v) in r {
            if !v.is_zero() {
                row.insert(j, v);
            }
        }
        self.data.push(row);
        self.rows += 1;
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                let mut acc = Q::zero();
                for (j, v) in row {
                    if !x[*j].is_zero() {
                        acc += v.clone() * x[*j].clone();
                    }
                }
                acc
            })
            .collect()
    }
}

/// The result of a reduction: the RREF matrix, its rank, and the pivot
/// column of each of the first `rank` rows.
#[derive(Clone, Debug)]
pub struct Rref {
    pub mat: QMat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form with positional pivoting.
pub fn rref_rank(m: &QMat) -> Rref {
    if m.cols < DENSE_COLS {
        rref_dense(m)
    } else {
        rref_sparse(m)
    }
}

fn rref_dense(m: &QMat) -> Rref {
    let mut a: Vec<Vec<Q>> = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m.get(i, j)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        let Some(pr) = (r..m.rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = a[r][c].clone().recip();
        for j in c..m.cols {
            let v = a[r][j].clone() * inv.clone();
            a[r][j] = v;
        }
        for i in 0..m.rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..m.cols {
                    let v = a[i][j].clone() - f.clone() * a[r][j].clone();
                    a[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.rows {
            break;
        }
    }
    Rref { mat: QMat::from_dense(a), rank: r, pivots }
}

fn rref_sparse(m: &QMat) -> Rref {
    let mut rows: Vec<BTreeMap<usize, Q>> = m.data.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i].contains_key(&c)) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][&c].clone().recip();
        if !inv.is_one() {
            let scaled: BTreeMap<usize, Q> =
                rows[r].iter().map(|(j, v)| (*j, v.clone() * inv.clone())).collect();
            rows[r] = scaled;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let Some(f) = row.get(&c).cloned() else { continue };
            for (j, v) in &pivot_row {
                let cur = row.get(j).cloned().unwrap_or_else(Q::zero);
                let nv = cur - f.clone() * v.clone();
                if nv.is_zero() {
                    row.remove(j);
                } else {
                    row.insert(*j, nv);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let mat = QMat { rows: rows.len(), cols: m.cols, data: rows };
    Rref { mat, rank: r, pivots }
}

/// Outcome of [`solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// A particular solution with all free variables set to zero.
    One(Vec<Q>),
    Inconsistent,
}

/// Solves `M x = b` exactly.  Free variables are zeroed, so the returned
/// solution is the canonical minimal-support one under positional order.
pub fn solve(m: &QMat, b: &[Q]) -> Solution {
    assert_eq!(b.len(), m.rows);
    // reduce the augmented matrix
    let mut aug = QMat::zero(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for (j, v) in m.row(i) {
            aug.set(i, *j, v.clone());
        }
        aug.set(i, m.cols, b[i].clone());
    }
    let red = rref_rank(&aug);
    let mut x = vec![Q::zero(); m.cols];
    for (row, &pc) in red.pivots.iter().enumerate() {
        if pc == m.cols {
            return Solution::Inconsistent;
        }
        x[pc] = red.mat.get(row, m.cols);
    }
    Solution::One(x)
}

/// A basis of the null space of `M`, deterministic in the free-column order.
pub fn kernel_basis(m: &QMat) -> Vec<Vec<Q>> {
    let red = rref_rank(m);
    let pivot_set: std::collections::BTreeSet<usize> = red.pivots.iter().copied().collect();
    let free: Vec<usize> = (0..m.cols).filter(|j| !pivot_set.contains(j)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Q::zero(); m.cols];
        v[f] = Q::one();
        for (row, &pc) in red.pivots.iter().enumerate() {
            let coef = red.mat.get(row, f);
            if !coef.is_zero() {
                v[pc] = -coef;
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qi;

    #[test]
    fn identity_rank() {
        let m = QMat::identity(3);
        let r = rref_rank(&m);
        assert_eq!(r.rank, 3);
        assert!(kernel_basis(&m).is_empty());
    }

    #[test]
    fn single_relation_row() {
        // one IHX-style row over 3 columns
        let m = QMat::from_rows(3, vec![vec![(0, qi(1)), (1, qi(-1)), (2, qi(1))]]);
        let r = rref_rank(&m);
        assert_eq!(r.rank, 1);
        assert_eq!(kernel_basis(&m).len(), 2);
    }

    #[test]
    fn solve_zero_cases() {
        let m = QMat::zero(2, 3);
        assert_eq!(solve(&m, &[qi(0), qi(0)]), Solution::One(vec![qi(0); 3]));
        assert_eq!(solve(&m, &[qi(1), qi(0)]), Solution::Inconsistent);
    }

    #[test]
    fn solve_particular_and_check() {
        // x + y = 3, y + z = 5
        let m = QMat::from_rows(
            3,
            vec![vec![(0, qi(1)), (1, qi(1))], vec![(1, qi(1)), (2, qi(1))]],
        );
        let b = vec![qi(3), qi(5)];
        match solve(&m, &b) {
            Solution::One(x) => assert_eq!(m.mul_vec(&x), b),
            _ => panic!("expected solution"),
        }
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = QMat::from_rows(
            4,
            vec![
                vec![(0, qi(2)), (1, qi(4)), (3, qi(-2))],
                vec![(0, qi(1)), (1, qi(2)), (2, qi(1))],
            ],
        );
        let ker = kernel_basis(&m);
        let r = rref_rank(&m);
        assert_eq!(r.rank + ker.len(), 4);
        for v in ker {
            assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn dense_and_sparse_agree() {
        let rows = vec![
            vec![(0, qi(1)), (2, qi(3)), (4, qi(-1))],
            vec![(1, qi(2)), (2, qi(1))],
            vec![(0, qi(1)), (1, qi(2)), (2, qi(4)), (4, qi(-1))],
        ];
        let m = QMat::from_rows(5, rows);
        let d = rref_dense(&m);
        let s = rref_sparse(&m);
        assert_eq!(d.rank, s.rank);
        assert_eq!(d.pivots, s.pivots);
        assert_eq!(d.mat, s.mat);
    }
}
