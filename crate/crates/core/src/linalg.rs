//! Dense linear algebra over GF(p).
//!
//! Everything in this crate reduces to ranks, kernels and span membership of
//! small dense matrices (a few hundred columns at most), so a plain row-major
//! layout with Gauss-Jordan elimination is all that is needed.

use crate::error::{Error, Result};
use crate::field::FieldPrime;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixGF {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
    field: FieldPrime,
}

impl MatrixGF {
    pub fn zeros(field: FieldPrime, rows: usize, cols: usize) -> Self {
        MatrixGF {
            rows,
            cols,
            data: vec![0; rows * cols],
            field,
        }
    }

    pub fn identity(field: FieldPrime, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from signed integer entries, reducing them modulo p.
    pub fn from_i64(field: FieldPrime, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(MatrixGF {
            rows,
            cols,
            data: entries.iter().map(|&e| field.reduce_i64(e)).collect(),
            field,
        })
    }

    /// Builds a matrix from already reduced rows of length `cols`.
    pub fn from_rows<R: AsRef<[u32]>>(field: FieldPrime, cols: usize, rows: &[R]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r.iter().map(|&x| x % field.p()));
        }
        MatrixGF {
            rows: rows.len(),
            cols,
            data,
            field,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn field(&self) -> FieldPrime {
        self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p();
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> MatrixGF {
        let mut t = MatrixGF::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    /// Stacks the rows of `other` below the rows of `self`.
    pub fn vstack(&self, other: &MatrixGF) -> Result<MatrixGF> {
        self.check_cols(other)?;
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(MatrixGF {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
            field: self.field,
        })
    }

    /// `v * self` for a row vector `v` of length `rows`.
    pub fn left_mul(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows);
        let f = self.field;
        let mut out = vec![0u32; self.cols];
        for (r, &coef) in v.iter().enumerate() {
            if coef != 0 {
                axpy(f, &mut out, coef, self.row(r));
            }
        }
        out
    }

    /// `self * x` for a column vector `x` of length `cols`.
    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.cols);
        let f = self.field;
        self.row_iter()
            .map(|row| {
                row.iter().zip(x).fold(0u64, |acc, (&a, &b)| {
                    (acc + a as u64 * b as u64) % f.p() as u64
                }) as u32
            })
            .collect()
    }

    /// Reduced row echelon form with zero rows removed, together with the rank.
    /// Pivots appear in increasing column order, so two matrices span the same
    /// row space iff their reduced forms are equal.
    pub fn row_reduce(&self) -> (usize, MatrixGF) {
        let (reduced, pivots) = self.rref_with_pivots();
        (pivots.len(), reduced)
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Reduced row echelon form (zero rows dropped) and its pivot columns.
    pub fn rref_with_pivots(&self) -> (MatrixGF, Vec<usize>) {
        let f = self.field;
        let cols = self.cols;
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for c in 0..cols {
            if lead == self.rows {
                break;
            }
            let Some(pr) = (lead..self.rows).find(|&r| m[r * cols + c] != 0) else {
                continue;
            };
            if pr != lead {
                for k in 0..cols {
                    m.swap(pr * cols + k, lead * cols + k);
                }
            }
            let inv = f.inv(m[lead * cols + c]);
            for k in c..cols {
                m[lead * cols + k] = f.mul(m[lead * cols + k], inv);
            }
            let (head, tail) = m.split_at_mut(lead * cols);
            let (pivot_row, rest) = tail.split_at_mut(cols);
            for r in head.chunks_mut(cols).chain(rest.chunks_mut(cols)) {
                let factor = r[c];
                if factor != 0 {
                    let neg = f.neg(factor);
                    for k in c..cols {
                        if pivot_row[k] != 0 {
                            r[k] = f.mul_add(r[k], neg, pivot_row[k]);
                        }
                    }
                }
            }
            pivots.push(c);
            lead += 1;
        }
        m.truncate(lead * cols);
        (
            MatrixGF {
                rows: lead,
                cols,
                data: m,
                field: f,
            },
            pivots,
        )
    }

    /// Rows form a basis of the right null space `{x : self * x = 0}`.
    pub fn kernel_basis(&self) -> MatrixGF {
        let f = self.field;
        let (rref, pivots) = self.rref_with_pivots();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = MatrixGF::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.data[k * self.cols + fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                out.data[k * self.cols + pc] = f.neg(rref.get(r, fc));
            }
        }
        out
    }

    /// One solution of `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let cols = self.cols + 1;
        let mut aug = MatrixGF::zeros(self.field, self.rows, cols);
        for (r, &rhs) in b.iter().enumerate() {
            aug.data[r * cols..r * cols + self.cols].copy_from_slice(self.row(r));
            aug.data[r * cols + self.cols] = rhs % self.field.p();
        }
        let (rref, pivots) = aug.rref_with_pivots();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = rref.get(r, self.cols);
        }
        Ok(Some(x))
    }

    fn check_cols(&self, other: &MatrixGF) -> Result<()> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "column counts differ: {} vs {}",
                self.cols, other.cols
            )));
        }
        if self.field != other.field {
            return Err(Error::Dimension(format!(
                "moduli differ: {} vs {}",
                self.field, other.field
            )));
        }
        Ok(())
    }
}

/// `acc += coef * row`
#[inline]
pub(crate) fn axpy(f: FieldPrime, acc: &mut [u32], coef: u32, row: &[u32]) {
    for (a, &b) in acc.iter_mut().zip(row) {
        if b != 0 {
            *a = f.mul_add(*a, coef, b);
        }
    }
}

/// Reduced basis of `row(U) ∩ row(V)`, read off the left kernel of the stacked matrix.
pub fn subspace_intersect(u: &MatrixGF, v: &MatrixGF) -> Result<MatrixGF> {
    u.check_cols(v)?;
    let stacked = u.vstack(v)?;
    let relations = stacked.transpose().kernel_basis();
    let gens: Vec<Vec<u32>> = relations
        .row_iter()
        .map(|rel| u.left_mul(&rel[..u.rows]))
        .collect();
    Ok(MatrixGF::from_rows(u.field, u.cols, &gens).row_reduce().1)
}

pub fn subspace_sum(u: &MatrixGF, v: &MatrixGF) -> Result<MatrixGF> {
    Ok(u.vstack(v)?.row_reduce().1)
}

pub fn subspace_contains(u: &MatrixGF, v: &[u32]) -> Result<bool> {
    if v.len() != u.cols {
        return Err(Error::Dimension(format!(
            "vector of length {} against {} columns",
            v.len(),
            u.cols
        )));
    }
    let single = MatrixGF::from_rows(u.field, u.cols, &[v]);
    Ok(u.vstack(&single)?.rank() == u.rank())
}

/// Incrementally maintained reduced row echelon basis of a subspace.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: FieldPrime,
    cols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(field: FieldPrime, cols: usize) -> Self {
        Echelon {
            field,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![None; cols],
        }
    }

    pub fn from_matrix(m: &MatrixGF) -> Self {
        let mut e = Echelon::new(m.field, m.cols);
        for r in m.row_iter() {
            e.insert(r.to_vec());
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Subtracts the basis from `v` in place; the remainder is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &mut [u32]) {
        let f = self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                axpy(f, v, f.neg(c), row);
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        let f = self.field;
        self.reduce(&mut v);
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(v[pc]);
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                axpy(f, row, f.neg(c), &v);
            }
        }
        self.pivot_row[pc] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }

    pub fn pivot_row_of(&self, col: usize) -> Option<&[u32]> {
        self.pivot_row[col].map(|r| self.rows[r].as_slice())
    }

    /// Canonical reduced matrix (rows sorted by pivot column).
    pub fn to_matrix(&self) -> MatrixGF {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.pivots[r]);
        let rows: Vec<&Vec<u32>> = order.iter().map(|&r| &self.rows[r]).collect();
        MatrixGF::from_rows(self.field, self.cols, &rows)
    }
}

/// Echelon basis that remembers how each stored row was built from the
/// inserted vectors, so span members can be written in the original basis.
#[derive(Debug, Clone)]
pub struct TaggedEchelon {
    field: FieldPrime,
    cols: usize,
    capacity: usize,
    inserted: usize,
    rows: Vec<(Vec<u32>, Vec<u32>)>,
    pivots: Vec<usize>,
}

impl TaggedEchelon {
    /// `capacity` bounds the number of vectors that will be inserted.
    pub fn new(field: FieldPrime, cols: usize, capacity: usize) -> Self {
        TaggedEchelon {
            field,
            cols,
            capacity,
            inserted: 0,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Number of vectors inserted so far (each gets the next tag index).
    pub fn len(&self) -> usize {
        self.inserted
    }

    pub fn is_empty(&self) -> bool {
        self.inserted == 0
    }

    /// Inserts `v`, which must be independent of the vectors already present.
    /// Returns `false` (and stores nothing) when it is dependent.
    pub fn push_independent(&mut self, v: &[u32]) -> bool {
        assert!(self.inserted < self.capacity, "tagged echelon is full");
        let f = self.field;
        let mut vec = v.to_vec();
        let mut tag = vec![0u32; self.capacity];
        for ((row, rtag), &pc) in self.rows.iter().zip(&self.pivots) {
            let c = vec[pc];
            if c != 0 {
                let neg = f.neg(c);
                axpy(f, &mut vec, neg, row);
                axpy(f, &mut tag, neg, rtag);
            }
        }
        let Some(pc) = vec.iter().position(|&x| x != 0) else {
            return false;
        };
        tag[self.inserted] = f.add(tag[self.inserted], 1);
        let inv = f.inv(vec[pc]);
        vec.iter_mut().for_each(|x| *x = f.mul(*x, inv));
        tag.iter_mut().for_each(|x| *x = f.mul(*x, inv));
        for (row, rtag) in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                let neg = f.neg(c);
                axpy(f, row, neg, &vec);
                axpy(f, rtag, neg, &tag);
            }
        }
        self.rows.push((vec, tag));
        self.pivots.push(pc);
        self.inserted += 1;
        true
    }

    /// Coefficients of `v` in terms of the inserted vectors, or `None` if `v`
    /// is outside their span.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        debug_assert_eq!(v.len(), self.cols);
        let f = self.field;
        let mut rest = v.to_vec();
        let mut coords = vec![0u32; self.capacity];
        for ((row, rtag), &pc) in self.rows.iter().zip(&self.pivots) {
            let c = rest[pc];
            if c != 0 {
                axpy(f, &mut rest, f.neg(c), row);
                axpy(f, &mut coords, c, rtag);
            }
        }
        if rest.iter().any(|&x| x != 0) {
            return None;
        }
        coords.truncate(self.inserted);
        Some(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> FieldPrime {
        FieldPrime::new(p).unwrap()
    }

    fn mat(p: u32, rows: usize, cols: usize, e: &[i64]) -> MatrixGF {
        MatrixGF::from_i64(gf(p), rows, cols, e).unwrap()
    }

    #[test]
    fn identity_is_reduced() {
        let id = MatrixGF::identity(gf(5), 2);
        let (rank, red) = id.row_reduce();
        assert_eq!(rank, 2);
        assert_eq!(red, id);
    }

    #[test]
    fn dependent_rows_mod_5() {
        let (rank, red) = mat(5, 2, 2, &[1, 2, 2, 4]).row_reduce();
        assert_eq!(rank, 1);
        assert_eq!(red.row(0), &[1, 2]);
    }

    #[test]
    fn rows_equal_mod_3() {
        assert_eq!(mat(3, 2, 2, &[1, 1, 1, 4]).rank(), 1);
    }

    #[test]
    fn kernel_of_zero_and_coordinate_rows() {
        assert_eq!(MatrixGF::zeros(gf(7), 1, 3).kernel_basis().rows(), 3);
        let k = mat(7, 1, 3, &[1, 0, 0]).kernel_basis();
        assert_eq!(k.rows(), 2);
        for r in k.row_iter() {
            assert_eq!(r[0], 0);
        }
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn kernel_of_2x3_mod_5() {
        let m = mat(5, 2, 3, &[1, 1, 1, 0, 1, 2]);
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 1);
        assert_eq!(k.row(0), &[1, 3, 1]);
        assert!(m.apply(k.row(0)).iter().all(|&x| x == 0));
    }

    #[test]
    fn intersections() {
        let u = mat(5, 2, 3, &[1, 0, 2, 0, 1, 1]);
        assert_eq!(subspace_intersect(&u, &u).unwrap().rows(), 2);
        let a = mat(5, 1, 2, &[1, 0]);
        let b = mat(5, 1, 2, &[0, 1]);
        assert_eq!(subspace_intersect(&a, &b).unwrap().rows(), 0);
        let full = MatrixGF::identity(gf(3), 2);
        let diag = mat(3, 1, 2, &[1, 1]);
        let i = subspace_intersect(&full, &diag).unwrap();
        assert_eq!(i.rows(), 1);
        assert_eq!(i.row(0), &[1, 1]);
        assert!(subspace_intersect(&a, &mat(5, 1, 3, &[1, 0, 0])).is_err());
    }

    #[test]
    fn sum_contains_solve() {
        let a = mat(5, 1, 2, &[1, 0]);
        let b = mat(5, 1, 2, &[0, 1]);
        assert_eq!(subspace_sum(&a, &b).unwrap().rows(), 2);
        assert!(subspace_contains(&mat(5, 1, 2, &[1, 2]), &[2, 4]).unwrap());
        assert!(!subspace_contains(&mat(5, 1, 2, &[1, 2]), &[2, 3]).unwrap());
        let m = mat(3, 2, 2, &[1, 1, 0, 1]);
        assert_eq!(m.solve(&[0, 1]).unwrap(), Some(vec![2, 1]));
        let sing = mat(3, 2, 2, &[1, 1, 1, 1]);
        assert_eq!(sing.solve(&[0, 1]).unwrap(), None);
        assert!(m.solve(&[1]).is_err());
    }

    #[test]
    fn zero_dimensional_matrices() {
        let empty = MatrixGF::zeros(gf(7), 0, 4);
        assert_eq!(empty.rank(), 0);
        assert_eq!(empty.kernel_basis().rows(), 4);
        let none = MatrixGF::zeros(gf(7), 3, 0);
        assert_eq!(none.kernel_basis().rows(), 0);
    }

    #[test]
    fn tagged_coordinates() {
        let f = gf(11);
        let mut t = TaggedEchelon::new(f, 3, 3);
        assert!(t.push_independent(&[1, 2, 3]));
        assert!(t.push_independent(&[0, 1, 4]));
        assert!(!t.push_independent(&[2, 5, 10]));
        // 3*(1,2,3) + 5*(0,1,4) = (3, 11, 29) = (3, 0, 7) mod 11
        assert_eq!(t.coordinates(&[3, 0, 7]), Some(vec![3, 5]));
        assert_eq!(t.coordinates(&[0, 0, 1]), None);
    }
}
