//! Smith normal form over `Z` and the lattice computations built on it.

use crate::coeff::{FgAbGroup, Matrix};
use crate::scalar::Coeff;

/// `left · A · right = reduced`, with `left`, `right` unimodular and
/// `reduced` diagonal; the first `rank` diagonal entries are positive and
/// each divides the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm<C: Coeff> {
    pub diagonal: Vec<C>,
    pub rank: usize,
    pub left: Matrix<C>,
    pub right: Matrix<C>,
    pub reduced: Matrix<C>,
}

impl<C: Coeff> SmithForm<C> {
    /// `Z^rows / image`.
    pub fn cokernel(&self) -> FgAbGroup {
        let rows = self.reduced.rows();
        FgAbGroup::new(rows - self.rank, self.diagonal.iter().map(|d| d.to_big()))
    }

    /// Basis of the kernel as columns (`cols - rank` of them).
    pub fn kernel_basis(&self) -> Matrix<C> {
        self.right.column_block(self.rank..self.right.cols())
    }

    pub fn kernel_rank(&self) -> usize {
        self.reduced.cols() - self.rank
    }
}

fn min_nonzero<C: Coeff>(d: &Matrix<C>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let v = &d[(i, j)];
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smith normal form of an integer matrix (possibly `0 × n` or `m × 0`).
pub fn snf<C: Coeff>(a: &Matrix<C>) -> SmithForm<C> {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut left = Matrix::identity(m);
    let mut right = Matrix::identity(n);
    let mut t = 0;

    while t < m.min(n) {
        let Some((pi, pj)) = min_nonzero(&d, t) else { break };
        d.swap_rows(t, pi);
        left.swap_rows(t, pi);
        d.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            let pivot = d[(t, t)].clone();
            for i in t + 1..m {
                if !d[(i, t)].is_zero() {
                    let q = -(d[(i, t)].clone() / pivot.clone());
                    d.add_row_multiple(i, t, &q);
                    left.add_row_multiple(i, t, &q);
                }
            }
            for j in t + 1..n {
                if !d[(t, j)].is_zero() {
                    let q = -(d[(t, j)].clone() / pivot.clone());
                    d.add_col_multiple(j, t, &q);
                    right.add_col_multiple(j, t, &q);
                }
            }

            // A leftover in row/column t is smaller than the pivot: move it in.
            let row_left = (t + 1..n).find(|&j| !d[(t, j)].is_zero());
            let col_left = (t + 1..m).find(|&i| !d[(i, t)].is_zero());
            if let Some(i) = col_left {
                d.swap_rows(t, i);
                left.swap_rows(t, i);
                continue;
            }
            if let Some(j) = row_left {
                d.swap_cols(t, j);
                right.swap_cols(t, j);
                continue;
            }

            // Divisibility: fold an offending row into row t and redo.
            let offending = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(d[(i, j)].clone() % pivot.clone()).is_zero()));
            match offending {
                Some(i) => {
                    let one = C::one();
                    d.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }

    let diagonal = (0..t).map(|k| d[(k, k)].clone()).collect();
    SmithForm { diagonal, rank: t, left, right, reduced: d }
}

pub fn rank<C: Coeff>(a: &Matrix<C>) -> usize {
    snf(a).rank
}

/// Kernel of `a` as a matrix whose columns are a `Z`-basis.
pub fn kernel<C: Coeff>(a: &Matrix<C>) -> Matrix<C> {
    snf(a).kernel_basis()
}

/// Whether `v` lies in the `Z`-span of the columns of `basis`.
pub fn span_contains<C: Coeff>(basis: &Matrix<C>, v: &[C]) -> bool {
    assert_eq!(basis.rows(), v.len(), "vector length mismatch");
    let s = snf(basis);
    let pv = s.left.apply(v);
    pv.iter().enumerate().all(
        |(i, x)| {
            if i < s.rank {
                (x.clone() % s.diagonal[i].clone()).is_zero()
            } else {
                x.is_zero()
            }
        },
    )
}

/// Whether the column spans of `a` and `b` coincide.
pub fn same_span<C: Coeff>(a: &Matrix<C>, b: &Matrix<C>) -> bool {
    (0..a.cols()).all(|j| span_contains(b, &a.column(j))) && (0..b.cols()).all(|j| span_contains(a, &b.column(j)))
}
