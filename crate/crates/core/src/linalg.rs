//! Exact linear algebra over a [`FieldCtx`].
//!
//! Pivoting is deterministic: the pivot of each column is the first row
//! (from the top of the unreduced part) with a nonzero entry.

use crate::field::{Elem, FieldCtx};

/// Dense row-major matrix of field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: &[Vec<Elem>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Subtracts `factor * row src` from row `dst`.
    fn eliminate(&mut self, ctx: &FieldCtx, dst: usize, src: usize, factor: Elem) {
        let cols = self.cols;
        let neg = ctx.neg(factor);
        let (lo, hi) = self.data.split_at_mut(dst.max(src) * cols);
        let (d, s) = if dst < src {
            (&mut lo[dst * cols..(dst + 1) * cols], &hi[..cols])
        } else {
            (&mut hi[..cols], &lo[src * cols..(src + 1) * cols])
        };
        ctx.axpy(d, neg, s);
    }

    /// Brings the matrix to reduced row echelon form in place and returns
    /// the pivot columns. Rows below the rank are zero afterwards.
    pub fn rref(&mut self, ctx: &FieldCtx) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, piv);
            let inv = ctx.inv(self.get(r, c)).unwrap();
            ctx.scale_in_place(self.row_mut(r), inv);
            for i in 0..self.rows {
                if i != r {
                    let f = self.get(i, c);
                    if !f.is_zero() {
                        self.eliminate(ctx, i, r, f);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        self.clone().rref(ctx).len()
    }

    /// Basis of the right kernel `{v : M v = 0}`: one vector per free
    /// column, in increasing column order, with a 1 in that column.
    pub fn kernel_basis(&self, ctx: &FieldCtx) -> Vec<Vec<Elem>> {
        let mut m = self.clone();
        let pivots = m.rref(ctx);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Elem::ZERO; self.cols];
                v[free] = Elem::ONE;
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = ctx.neg(m.get(i, free));
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, ctx: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
        (0..self.rows).map(|i| ctx.dot(self.row(i), v)).collect()
    }
}

/// Reduced row echelon basis of the span of `rows`.
pub fn row_space(ctx: &FieldCtx, cols: usize, rows: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let mut m = Matrix::from_rows(cols, rows);
    let rank = m.rref(ctx).len();
    (0..rank).map(|i| m.row(i).to_vec()).collect()
}

/// A subspace of `F^n` kept in echelon form, grown one vector at a time.
#[derive(Clone, Debug)]
pub struct EchelonSpace {
    dim: usize,
    /// (pivot, row) with the pivot entry equal to 1, sorted by pivot
    rows: Vec<(usize, Vec<Elem>)>,
}

impl EchelonSpace {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn reduce(&self, ctx: &FieldCtx, v: &mut [Elem]) {
        for (p, row) in &self.rows {
            let c = v[*p];
            if !c.is_zero() {
                ctx.axpy(v, ctx.neg(c), row);
            }
        }
    }

    pub fn contains(&self, ctx: &FieldCtx, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(ctx, &mut w);
        w.iter().all(|c| c.is_zero())
    }

    /// Adds `v` to the space; returns `false` if it was already inside.
    pub fn insert(&mut self, ctx: &FieldCtx, v: &[Elem]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        self.reduce(ctx, &mut w);
        let Some(p) = w.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = ctx.inv(w[p]).unwrap();
        ctx.scale_in_place(&mut w, inv);
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, w));
        true
    }
}
