//! Dense exact linear algebra over the scalar field.
//!
//! Ranks, kernels, and solutions here are *generic*: they hold over the
//! rational function field itself. A matrix like [[s,1],[0,s]] has rank 2
//! even though the specialization s=0 drops to rank 1; anything that cares
//! about special values must substitute before calling in.

use crate::scalars::{Context, Scalar};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    ctx: Context,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>, // row-major, rows*cols entries
}

impl Matrix {
    pub fn zero(ctx: &Context, rows: usize, cols: usize) -> Matrix {
        Matrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![Scalar::zero(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: &Context, n: usize) -> Matrix {
        let mut m = Matrix::zero(ctx, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(ctx));
        }
        m
    }

    pub fn from_rows(ctx: &Context, rows: Vec<Vec<Scalar>>) -> Matrix {
        let nrows = rows.len();
        let ncols = rows.first().map(Vec::len).unwrap_or(0);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            for v in r {
                assert!(v.ctx() == ctx, "entry context mismatch");
                data.push(v);
            }
        }
        Matrix { ctx: ctx.clone(), rows: nrows, cols: ncols, data }
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(v.ctx() == &self.ctx, "entry context mismatch");
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(&self.ctx, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c).clone());
            }
        }
        t
    }

    /// Vertical concatenation; all blocks must agree on width and context.
    pub fn stack(blocks: &[&Matrix]) -> Matrix {
        assert!(!blocks.is_empty(), "nothing to stack");
        let ctx = blocks[0].ctx.clone();
        let cols = blocks[0].cols;
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert!(b.ctx == ctx && b.cols == cols, "incompatible blocks");
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Matrix { ctx, rows, cols, data }
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert!(self.ctx == rhs.ctx, "context mismatch");
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Matrix::zero(&self.ctx, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = &(a * b) + out.at(i, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero(&self.ctx);
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self.at(i, j).is_zero() {
                        acc = &acc + &(self.at(i, j) * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form with the deterministic first-nonzero pivot
    /// rule. Returns the reduced matrix and the pivot column indexes.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0; // next pivot row
        for pc in 0..m.cols {
            // first row at or below pr with a nonzero entry in column pc
            let Some(hit) = (pr..m.rows).find(|&r| !m.at(r, pc).is_zero()) else {
                continue;
            };
            if hit != pr {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, hit * m.cols + c);
                }
            }
            let inv = m.at(pr, pc).inv().unwrap();
            for c in pc..m.cols {
                let v = m.at(pr, c) * &inv;
                m.set(pr, c, v);
            }
            for r in 0..m.rows {
                if r == pr || m.at(r, pc).is_zero() {
                    continue;
                }
                let f = m.at(r, pc).clone();
                for c in pc..m.cols {
                    let v = m.at(r, c) - &(&f * m.at(pr, c));
                    m.set(r, c, v);
                }
            }
            pivots.push(pc);
            pr += 1;
            if pr == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, canonicalized: the vectors are returned as
    /// RREF rows so two equal kernels always produce identical bases.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Scalar::zero(&self.ctx); self.cols];
            v[f] = Scalar::one(&self.ctx);
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.at(row, f);
            }
            basis.push(v);
        }
        if basis.is_empty() {
            return basis;
        }
        let (canon, _) = Matrix::from_rows(&self.ctx, basis).rref();
        canon.row_vecs()
    }

    /// One solution of `self * x = b` with every free variable set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "dimension mismatch");
        let mut aug = Matrix::zero(&self.ctx, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![Scalar::zero(&self.ctx); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.at(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn invert(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "only square matrices invert");
        let n = self.rows;
        let mut aug = Matrix::zero(&self.ctx, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, n + r, Scalar::one(&self.ctx));
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Matrix::zero(&self.ctx, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.at(r, n + c).clone());
            }
        }
        Some(inv)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// A linear subspace of k^n held as a canonical RREF row basis, so equality
/// of subspaces is structural equality of the representation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ctx: Context,
    ambient: usize,
    basis: Vec<Vec<Scalar>>, // RREF rows, no zero rows
}

impl Subspace {
    pub fn zero(ctx: &Context, ambient: usize) -> Subspace {
        Subspace { ctx: ctx.clone(), ambient, basis: Vec::new() }
    }

    pub fn from_spanning(ctx: &Context, ambient: usize, vectors: &[Vec<Scalar>]) -> Subspace {
        if vectors.is_empty() {
            return Subspace::zero(ctx, ambient);
        }
        for v in vectors {
            assert_eq!(v.len(), ambient, "wrong ambient dimension");
        }
        let (r, pivots) = Matrix::from_rows(ctx, vectors.to_vec()).rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { ctx: ctx.clone(), ambient, basis }
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "wrong ambient dimension");
        let mut all = self.basis.clone();
        all.push(v.to_vec());
        Matrix::from_rows(&self.ctx, all).rank() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient);
        self.basis.iter().all(|v| other.contains(v))
    }

    /// Sum of subspaces.
    pub fn add(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::from_spanning(&self.ctx, self.ambient, &all)
    }
}
