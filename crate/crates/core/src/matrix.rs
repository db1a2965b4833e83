//! Dense matrices and subspaces over a [`Field`].

use std::fmt;

use crate::field::{Field, Q};

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Matrix unit `E_{ij}`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.set(i, j, F::one());
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<F>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned());
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<F>], height: usize) -> Self {
        let mut m = Self::zeros(height, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), height);
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn flatten(&self) -> Vec<F> {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&F::one().neg())
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: &F, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a = a.add(&s.mul(b));
            }
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// Commutator `[self, other]`.
    pub fn bracket(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> F {
        let mut acc = F::zero();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.add(self.get(i, i));
        }
        acc
    }

    /// Trace of `self * other` without forming the product.
    pub fn trace_product(&self, other: &Self) -> F {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = F::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let b = other.get(k, i);
                if !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
        }
        acc
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a.mul(b));
                        }
                    }
                }
            }
        }
        out
    }

    /// Block diagonal sum of square matrices.
    pub fn block_diag(blocks: &[Matrix<F>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    let x = b.get(i, j);
                    if !x.is_zero() {
                        out.set(r0 + i, c0 + j, x.clone());
                    }
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_strictly_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        rank_of_rows(self.rows_vec())
    }

    pub fn rows_vec(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        nullspace(self.rows_vec(), self.cols)
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug: Vec<Vec<F>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
                row
            })
            .collect();
        let pivots = rref_in_place(&mut aug, n);
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| aug[i][n + j].clone()))
    }

    /// `exp(self)` for a nilpotent matrix.
    pub fn exp_nilpotent(&self) -> Self {
        assert!(self.is_square());
        let n = self.rows;
        let mut out = Self::identity(n);
        let mut term = Self::identity(n);
        for k in 1..=n {
            term = term.mul(self).scale(&F::from_i64(k as i64).inv().unwrap());
            if term.is_zero() {
                return out;
            }
            out = out.add(&term);
        }
        assert!(term.mul(self).is_zero(), "exp_nilpotent on a non-nilpotent matrix");
        out
    }
}

impl Matrix<Q> {
    pub fn to_field<G: Field>(&self) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(G::from_q).collect(),
        }
    }

    pub fn from_i64(rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        Matrix {
            rows,
            cols,
            data: vals.iter().map(|&v| Q::from_i64(v)).collect(),
        }
    }
}

/// Reduced row echelon form in place on the first `ncols` columns used for
/// pivot search. Returns pivot columns; zero rows are removed.
pub fn rref_in_place<F: Field>(rows: &mut Vec<Vec<F>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().unwrap();
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = x.mul(&inv);
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Rank of a list of row vectors (forward elimination only).
pub fn rank_of_rows<F: Field>(mut rows: Vec<Vec<F>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().unwrap();
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let f = row[c].mul(&inv);
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(pivot_row).skip(c) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of the solutions `x` of `rows * x = 0`.
pub fn nullspace<F: Field>(mut rows: Vec<Vec<F>>, ncols: usize) -> Vec<Vec<F>> {
    let pivots = rref_in_place(&mut rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = rows[i][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// A subspace of `F^n` held as a reduced echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn span(ambient: usize, vectors: &[Vec<F>]) -> Self {
        let mut rows: Vec<Vec<F>> = vectors.to_vec();
        let pivots = rref_in_place(&mut rows, ambient);
        Subspace {
            ambient,
            basis: rows,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        let coords: Vec<F> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in rest.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = x.sub(&c.mul(y));
                }
            }
        }
        rest.iter().all(|x| x.is_zero()).then_some(coords)
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[F]) -> bool {
        if self.contains(v) {
            return false;
        }
        let mut rows = std::mem::take(&mut self.basis);
        rows.push(v.to_vec());
        self.pivots = rref_in_place(&mut rows, self.ambient);
        self.basis = rows;
        true
    }

    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        // Solve sum a_i x_i = sum b_j y_j.
        let n = self.ambient;
        let k = self.dim();
        let m = other.dim();
        let rows: Vec<Vec<F>> = (0..n)
            .map(|c| {
                let mut r: Vec<F> = self.basis.iter().map(|x| x[c].clone()).collect();
                r.extend(other.basis.iter().map(|y| y[c].neg()));
                r
            })
            .collect();
        let ker = nullspace(rows, k + m);
        let vecs: Vec<Vec<F>> = ker
            .iter()
            .map(|sol| combine(&self.basis, &sol[..k], n))
            .collect();
        Self::span(n, &vecs)
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Self::span(self.ambient, &all)
    }
}

/// `sum coeffs[i] * vectors[i]`.
pub fn combine<F: Field>(vectors: &[Vec<F>], coeffs: &[F], len: usize) -> Vec<F> {
    let mut out = vec![F::zero(); len];
    for (v, c) in vectors.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o = o.add(&c.mul(x));
            }
        }
    }
    out
}

/// Linear combination of matrices.
pub fn combine_matrices<F: Field>(mats: &[Matrix<F>], coeffs: &[F]) -> Matrix<F> {
    let first = &mats[0];
    let mut out = Matrix::zeros(first.rows(), first.cols());
    for (m, c) in mats.iter().zip(coeffs) {
        out.add_scaled(c, m);
    }
    out
}

/// Row echelon form grown one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct Echelon<F> {
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn push(&mut self, mut v: Vec<F>) -> bool {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row).skip(*p) {
                if !y.is_zero() {
                    *x = x.sub(&c.mul(y));
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero pivot");
        for x in v.iter_mut().skip(p) {
            *x = x.mul(&inv);
        }
        self.rows.push((p, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, Fp};

    fn qm(rows: usize, cols: usize, v: &[i64]) -> Matrix<Q> {
        Matrix::from_i64(rows, cols, v)
    }

    #[test]
    fn rank_and_kernel_agree() {
        let m = qm(3, 4, &[1, 2, 3, 4, 2, 4, 6, 8, 0, 1, 1, 0]);
        assert_eq!(m.rank(), 2);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inverse_and_fp_rank() {
        let m = qm(2, 2, &[2, 1, 1, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let f: Matrix<Fp> = m.to_field();
        assert_eq!(f.rank(), 2);
        assert!(qm(2, 2, &[1, 2, 2, 4]).inverse().is_none());
    }

    #[test]
    fn nilpotent_exponential() {
        let n = qm(3, 3, &[0, 1, 0, 0, 0, 1, 0, 0, 0]);
        let e = n.exp_nilpotent();
        assert_eq!(*e.get(0, 2), q(1, 2));
        let back = n.neg().exp_nilpotent();
        assert_eq!(e.mul(&back), Matrix::identity(3));
    }

    #[test]
    fn subspace_intersection() {
        let a = Subspace::span(3, &[vec![q(1, 1), q(0, 1), q(0, 1)], vec![q(0, 1), q(1, 1), q(0, 1)]]);
        let b = Subspace::span(3, &[vec![q(0, 1), q(1, 1), q(0, 1)], vec![q(0, 1), q(0, 1), q(1, 1)]]);
        let c = a.intersect(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&[q(0, 1), q(3, 1), q(0, 1)]));
        assert_eq!(a.sum(&b).dim(), 3);
    }

    #[test]
    fn echelon_rank() {
        let q = |v: &[i64]| v.iter().map(|&x| Q::from_i64(x)).collect::<Vec<Q>>();
        let mut e = Echelon::new();
        assert!(e.push(q(&[0, 1, 2])));
        assert!(e.push(q(&[1, 1, 0])));
        assert!(!e.push(q(&[2, 5, 6])));
        assert!(e.push(q(&[0, 0, 1])));
        assert_eq!(e.rank(), 3);
    }
}
