//! Dense exact linear algebra over `F_p`.
//!
//! Everything here is Gaussian elimination on row-major `u64` residues. A
//! [`Subspace`] keeps its basis in canonical form: the basis vectors are the
//! columns of a reduced column echelon matrix (pivot rows strictly
//! increasing, pivots equal to 1, every other entry of a pivot row zero).
//! Internally the vectors are stored as the rows of the transpose, which is
//! then a matrix in reduced row echelon form. Two subspaces are equal exactly
//! when their canonical bases are equal.

use crate::error::{Error, Result};
use crate::field::PrimeField;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major residues; entries must already be reduced.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows<R: AsRef<[u64]>>(cols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns<R: AsRef<[u64]>>(rows: usize, columns: &[R]) -> Result<Self> {
        Ok(Self::from_rows(rows, columns)?.transpose())
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
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u64]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(cols: usize, blocks: &[&Matrix]) -> Result<Matrix> {
        let mut data = Vec::with_capacity(blocks.iter().map(|b| b.data.len()).sum());
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(Error::DimensionMismatch(format!(
                    "cannot stack a block with {} columns onto {cols}",
                    b.cols
                )));
            }
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn mul_vec(&self, field: &PrimeField, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok(self.row_iter().map(|r| dot(field, r, v)).collect())
    }
}

/// Inner product of two residue slices.
pub fn dot(field: &PrimeField, a: &[u64], b: &[u64]) -> u64 {
    if field.is_small() {
        let acc: u128 = a.iter().zip(b).map(|(&x, &y)| (x * y) as u128).sum();
        field.reduce_wide(acc)
    } else {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| field.mul_add(acc, x, y))
    }
}

/// Classical product `A * B`.
pub fn mat_mul(field: &PrimeField, a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!("{}x{} times {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    let mut out = Matrix::zeros(a.rows, b.cols);
    let mut acc = vec![0u128; b.cols];
    for i in 0..a.rows {
        acc.iter_mut().for_each(|x| *x = 0);
        for (k, &aik) in a.row(i).iter().enumerate() {
            field.axpy_wide(&mut acc, aik, b.row(k));
        }
        for (o, &x) in out.row_mut(i).iter_mut().zip(&acc) {
            *o = field.reduce_wide(x);
        }
    }
    Ok(out)
}

/// Reduces `m` to reduced row echelon form in place and returns the pivot
/// columns. Rows past the rank end up zero.
pub fn rref_in_place(field: &PrimeField, m: &mut Matrix) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| m.data[r * cols + col] != 0) else {
            continue;
        };
        if pr != rank {
            for j in col..cols {
                m.data.swap(pr * cols + j, rank * cols + j);
            }
        }
        let inv = field.inv(m.data[rank * cols + col]).expect("pivot is nonzero");
        if inv != 1 {
            for x in &mut m.data[rank * cols + col..(rank + 1) * cols] {
                *x = field.mul(*x, inv);
            }
        }
        let (head, tail) = m.data.split_at_mut(rank * cols);
        let (pivot_row, tail) = tail.split_at_mut(cols);
        let pivot = &pivot_row[col..];
        let eliminate = |row: &mut [u64]| {
            let f = row[col];
            if f != 0 {
                let nf = field.neg(f);
                for (x, &y) in row[col..].iter_mut().zip(pivot) {
                    *x = field.mul_add(*x, nf, y);
                }
            }
        };
        head.chunks_exact_mut(cols).for_each(eliminate);
        tail.chunks_exact_mut(cols).for_each(eliminate);
        pivots.push(col);
        rank += 1;
    }
    pivots
}

pub fn rank(field: &PrimeField, a: &Matrix) -> usize {
    let mut m = a.clone();
    rref_in_place(field, &mut m).len()
}

/// Kernel vectors of a matrix already in reduced row echelon form with the
/// given pivot columns. Vector for free column `f` is `e_f - sum R[i][f] e_{pivot_i}`.
fn kernel_rows_from_rref(field: &PrimeField, r: &Matrix, pivots: &[usize]) -> Matrix {
    let n = r.cols;
    let mut is_pivot = vec![false; n];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let mut out = Matrix::zeros(free.len(), n);
    for (k, &f) in free.iter().enumerate() {
        let row = out.row_mut(k);
        row[f] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            row[pc] = field.neg(r.get(i, f));
        }
    }
    out
}

/// Canonical column span of `a`.
pub fn column_echelon(field: &PrimeField, a: &Matrix) -> Subspace {
    Subspace::span(field, a.rows, a.transpose())
}

/// Canonical basis of `{v : a v = 0}`.
pub fn kernel_basis(field: &PrimeField, a: &Matrix) -> Subspace {
    let mut m = a.clone();
    let pivots = rref_in_place(field, &mut m);
    let k = kernel_rows_from_rref(field, &m, &pivots);
    Subspace::span(field, a.cols, k)
}

/// A subspace of `F^ambient` with a canonical basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    // dim x ambient, reduced row echelon form, no zero rows.
    echelon: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, echelon: Matrix::zeros(0, ambient), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, echelon: Matrix::identity(ambient), pivots: (0..ambient).collect() }
    }

    /// Span of the rows of `generators` (a `k x ambient` matrix).
    pub fn span(field: &PrimeField, ambient: usize, mut generators: Matrix) -> Self {
        assert_eq!(generators.cols, ambient, "generator length must equal the ambient dimension");
        let pivots = rref_in_place(field, &mut generators);
        generators.rows = pivots.len();
        generators.data.truncate(pivots.len() * ambient);
        Subspace { ambient, echelon: generators, pivots }
    }

    pub fn span_of<R: AsRef<[u64]>>(field: &PrimeField, ambient: usize, vectors: &[R]) -> Result<Self> {
        Ok(Self::span(field, ambient, Matrix::from_rows(ambient, vectors)?))
    }

    /// Subspace from a basis that is already canonical; verified.
    pub fn from_canonical(field: &PrimeField, ambient: usize, rows: Matrix) -> Result<Self> {
        let s = Self::span(field, ambient, rows.clone());
        if s.echelon != rows {
            return Err(Error::MalformedFile("subspace basis is not in canonical form".into()));
        }
        Ok(s)
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.echelon.rows
    }

    #[inline]
    pub fn codim(&self) -> usize {
        self.ambient - self.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as rows (`dim x ambient`).
    pub fn rows(&self) -> &Matrix {
        &self.echelon
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn basis(&self) -> Matrix {
        self.echelon.transpose()
    }

    pub fn vector(&self, i: usize) -> &[u64] {
        self.echelon.row(i)
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[u64]> + '_ {
        self.echelon.row_iter()
    }

    /// First canonical basis vector, if any.
    pub fn first(&self) -> Option<&[u64]> {
        (self.dim() > 0).then(|| self.vector(0))
    }

    /// Linear combination `sum coeffs[i] * basis_i`.
    pub fn combine(&self, field: &PrimeField, coeffs: &[u64]) -> Vec<u64> {
        assert_eq!(coeffs.len(), self.dim());
        let mut acc = vec![0u128; self.ambient];
        for (c, row) in coeffs.iter().zip(self.vectors()) {
            field.axpy_wide(&mut acc, *c, row);
        }
        acc.into_iter().map(|x| field.reduce_wide(x)).collect()
    }

    fn check_ambient(&self, n: usize) -> Result<()> {
        if n != self.ambient {
            return Err(Error::DimensionMismatch(format!("ambient dimensions {} and {n} differ", self.ambient)));
        }
        Ok(())
    }

    /// Remainder of `v` after reduction against the canonical basis; zero iff `v` lies in the subspace.
    pub fn reduce(&self, field: &PrimeField, v: &[u64]) -> Result<Vec<u64>> {
        self.check_ambient(v.len())?;
        let mut r = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = r[pc];
            if c != 0 {
                let nc = field.neg(c);
                for (x, &b) in r.iter_mut().zip(self.echelon.row(i)) {
                    *x = field.mul_add(*x, nc, b);
                }
            }
        }
        Ok(r)
    }

    pub fn contains(&self, field: &PrimeField, v: &[u64]) -> Result<bool> {
        Ok(self.reduce(field, v)?.iter().all(|&x| x == 0))
    }

    pub fn is_subspace_of(&self, field: &PrimeField, other: &Subspace) -> Result<bool> {
        other.check_ambient(self.ambient)?;
        for v in self.vectors() {
            if !other.contains(field, v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, field: &PrimeField, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient)?;
        let stacked = Matrix::vstack(self.ambient, &[&self.echelon, &other.echelon])?;
        Ok(Subspace::span(field, self.ambient, stacked))
    }

    pub fn intersect(&self, field: &PrimeField, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient)?;
        // x = c^T B_self must satisfy K_other x = 0.
        let k = other.annihilator(field);
        let constraint = mat_mul(field, &k, &self.echelon.transpose())?;
        let coeffs = kernel_basis(field, &constraint);
        let vecs = mat_mul(field, coeffs.rows(), &self.echelon)?;
        Ok(Subspace::span(field, self.ambient, vecs))
    }

    /// An `(ambient - dim) x ambient` matrix whose kernel is this subspace.
    pub fn annihilator(&self, field: &PrimeField) -> Matrix {
        kernel_rows_from_rref(field, &self.echelon, &self.pivots)
    }

    /// Image under `m` (an `n' x ambient` matrix).
    pub fn image(&self, field: &PrimeField, m: &Matrix) -> Result<Subspace> {
        self.check_ambient(m.cols)?;
        let rows = mat_mul(field, &self.echelon, &m.transpose())?;
        Ok(Subspace::span(field, m.rows, rows))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceOp {
    Sum,
    Intersect,
    Equal,
    Contains,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubspaceOpResult {
    Space(Subspace),
    Bool(bool),
}

/// Dispatching form of the subspace operations; `Contains` asks whether `w` ⊂ `u`.
pub fn subspace_ops(field: &PrimeField, u: &Subspace, w: &Subspace, op: SubspaceOp) -> Result<SubspaceOpResult> {
    u.check_ambient(w.ambient)?;
    Ok(match op {
        SubspaceOp::Sum => SubspaceOpResult::Space(u.sum(field, w)?),
        SubspaceOp::Intersect => SubspaceOpResult::Space(u.intersect(field, w)?),
        SubspaceOp::Equal => SubspaceOpResult::Bool(u == w),
        SubspaceOp::Contains => SubspaceOpResult::Bool(w.is_subspace_of(field, u)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Sampler;

    fn random_matrix(s: &mut Sampler, rows: usize, cols: usize) -> Matrix {
        let data = (0..rows * cols).map(|_| s.uniform()).collect();
        Matrix::from_vec(rows, cols, data).unwrap()
    }

    fn random_invertible(s: &mut Sampler, n: usize) -> Matrix {
        let f = *s.field();
        loop {
            let g = random_matrix(s, n, n);
            if rank(&f, &g) == n {
                return g;
            }
        }
    }

    #[test]
    fn mat_mul_identity_zero_and_naive() {
        let f = PrimeField::new(7).unwrap();
        let mut s = Sampler::new(f, 1);
        let b = random_matrix(&mut s, 5, 5);
        assert_eq!(mat_mul(&f, &Matrix::identity(5), &b).unwrap(), b);
        assert!(mat_mul(&f, &b, &Matrix::zeros(5, 5)).unwrap().is_zero());
        let a = random_matrix(&mut s, 5, 5);
        let c = mat_mul(&f, &a, &b).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let mut acc = 0u64;
                for k in 0..5 {
                    acc = (acc + a.get(i, k) * b.get(k, j)) % 7;
                }
                assert_eq!(c.get(i, j), acc);
            }
        }
        assert!(matches!(mat_mul(&f, &a, &Matrix::zeros(4, 5)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn echelon_is_canonical() {
        let f = PrimeField::new(1009).unwrap();
        let mut s = Sampler::new(f, 2);
        let a = random_matrix(&mut s, 9, 4);
        let canon = column_echelon(&f, &a);
        assert_eq!(column_echelon(&f, &canon.basis()), canon);
        for _ in 0..100 {
            let g = random_invertible(&mut s, 4);
            assert_eq!(column_echelon(&f, &mat_mul(&f, &a, &g).unwrap()), canon);
        }
        // pivot rows increasing, pivot entries 1, pivot rows zero elsewhere
        let b = canon.basis();
        for (j, &pr) in canon.pivots().iter().enumerate() {
            assert_eq!(b.get(pr, j), 1);
            for k in 0..canon.dim() {
                if k != j {
                    assert_eq!(b.get(pr, k), 0);
                }
            }
            for r in 0..pr {
                assert_eq!(b.get(r, j), 0);
            }
        }
    }

    #[test]
    fn duplicated_column_drops_rank() {
        let f = PrimeField::new(1009).unwrap();
        let mut s = Sampler::new(f, 3);
        let a = random_matrix(&mut s, 6, 3);
        let mut cols: Vec<Vec<u64>> = (0..3).map(|j| a.column(j)).collect();
        cols.push(cols[1].clone());
        let dup = Matrix::from_columns(6, &cols).unwrap();
        assert!(column_echelon(&f, &dup).dim() < 4);
    }

    #[test]
    fn kernel_cases() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(kernel_basis(&f, &Matrix::identity(6)).dim(), 0);
        assert_eq!(kernel_basis(&f, &Matrix::zeros(3, 7)).dim(), 7);
        let mut s = Sampler::new(f, 4);
        for _ in 0..20 {
            let a = random_matrix(&mut s, 8, 12);
            let k = kernel_basis(&f, &a);
            assert_eq!(k.dim(), 12 - rank(&f, &a));
            for v in k.vectors() {
                assert!(a.mul_vec(&f, v).unwrap().iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn grassmann_identity() {
        let f = PrimeField::new(1009).unwrap();
        let mut s = Sampler::new(f, 5);
        for t in 0..200 {
            let n = 7;
            let du = (t % 5) + 1;
            let dw = (t % 4) + 2;
            // share some directions so intersections are nontrivial
            let common = random_matrix(&mut s, 1 + t % 2, n);
            let u = Subspace::span(&f, n, Matrix::vstack(n, &[&common, &random_matrix(&mut s, du, n)]).unwrap());
            let w = Subspace::span(&f, n, Matrix::vstack(n, &[&common, &random_matrix(&mut s, dw, n)]).unwrap());
            let sum = u.sum(&f, &w).unwrap();
            let int = u.intersect(&f, &w).unwrap();
            assert_eq!(sum.dim() + int.dim(), u.dim() + w.dim());
            assert!(int.is_subspace_of(&f, &u).unwrap());
            assert!(int.is_subspace_of(&f, &w).unwrap());
        }
    }

    #[test]
    fn subspace_ops_dispatch() {
        let f = PrimeField::new(1009).unwrap();
        let mut s = Sampler::new(f, 6);
        let u = Subspace::span(&f, 5, random_matrix(&mut s, 2, 5));
        assert_eq!(subspace_ops(&f, &u, &u, SubspaceOp::Sum).unwrap(), SubspaceOpResult::Space(u.clone()));
        assert_eq!(subspace_ops(&f, &u, &u, SubspaceOp::Intersect).unwrap(), SubspaceOpResult::Space(u.clone()));
        assert_eq!(subspace_ops(&f, &u, &u, SubspaceOp::Equal).unwrap(), SubspaceOpResult::Bool(true));
        let z = Subspace::zero(5);
        assert_eq!(subspace_ops(&f, &u, &z, SubspaceOp::Contains).unwrap(), SubspaceOpResult::Bool(true));
        assert!(subspace_ops(&f, &u, &Subspace::zero(4), SubspaceOp::Sum).is_err());
    }

    #[test]
    fn annihilator_kernel_is_space() {
        let f = PrimeField::new(1009).unwrap();
        let mut s = Sampler::new(f, 7);
        let u = Subspace::span(&f, 9, random_matrix(&mut s, 4, 9));
        let k = u.annihilator(&f);
        assert_eq!(k.rows(), 5);
        assert_eq!(kernel_basis(&f, &k), u);
        assert_eq!(Subspace::zero(3).annihilator(&f), Matrix::identity(3));
        assert_eq!(Subspace::full(3).annihilator(&f).rows(), 0);
    }
}
