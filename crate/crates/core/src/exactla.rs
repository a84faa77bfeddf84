//! Dense exact linear algebra over a prime field `F_p`.
//!
//! Every other module reduces to the operations here: echelon forms,
//! kernels, images, subspace sums and intersections, linear solves and
//! Kronecker products. Matrices are small (a few hundred rows at most), so
//! everything is dense and row-major.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("matrices live over different primes ({0} vs {1})")]
    PrimeMismatch(u32, u32),
    #[error("subspaces have different ambient dimensions ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// A prime field `F_p`. Construction checks primality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp(u32);

impl Fp {
    pub fn new(p: u64) -> Result<Self, LinAlgError> {
        if p < 2 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(LinAlgError::NotPrime(p));
        }
        Ok(Fp(p as u32))
    }

    pub const fn two() -> Self {
        Fp(2)
    }

    pub fn p(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.0 != 0, "inverse of zero in F_{}", self.0);
        // Fermat: a^(p-2)
        let mut base = a as u64 % self.0 as u64;
        let mut exp = self.0 as u64 - 2;
        let m = self.0 as u64;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        acc as u32
    }
}

impl Default for Fp {
    fn default() -> Self {
        Fp::two()
    }
}

fn is_prime(p: u64) -> bool {
    if p < 4 {
        return p >= 2;
    }
    if p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Dense row-major matrix over `F_p`. Zero rows or columns are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    fp: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[F_{}; {}x{}]", self.fp.p(), self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "\n  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Result of row reduction: the reduced matrix, its pivot columns and the rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl Matrix {
    pub fn zeros(fp: Fp, rows: usize, cols: usize) -> Self {
        Matrix {
            fp,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(fp: Fp, n: usize) -> Self {
        let mut m = Self::zeros(fp, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod p.
    pub fn from_rows<R: AsRef<[i64]>>(fp: Fp, rows: &[R], cols: usize) -> Result<Self, LinAlgError> {
        let mut m = Self::zeros(fp, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(LinAlgError::ShapeMismatch(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &x) in row.iter().enumerate() {
                m.data[r * cols + c] = fp.reduce(x);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from residues already in `[0, p)`.
    pub fn from_data(fp: Fp, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        debug_assert!(data.iter().all(|&x| x < fp.p()));
        Matrix { fp, rows, cols, data }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(fp: Fp, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(fp, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, &x) in col.iter().enumerate() {
                m.data[r * m.cols + c] = x;
            }
        }
        m
    }

    pub fn field(&self) -> Fp {
        self.fp
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: u32) {
        debug_assert!(x < self.fp.p());
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.fp, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    /// Matrix product `self * other`. Panics on shape or prime mismatch.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.fp, other.fp, "prime mismatch in product");
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch in product: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let p = self.fp.p() as u64;
        let mut out = Matrix::zeros(self.fp, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
            for (c, &v) in acc.iter().enumerate() {
                out.data[r * out.cols + c] = v as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        let p = self.fp.p() as u64;
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let mut s = 0u64;
                for (&a, &b) in row.iter().zip(v) {
                    s = (s + a as u64 * b as u64) % p;
                }
                s as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sum");
        let fp = self.fp;
        Matrix {
            fp,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| fp.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in difference");
        let fp = self.fp;
        Matrix {
            fp,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| fp.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: u32) -> Matrix {
        let fp = self.fp;
        Matrix {
            fp,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| fp.mul(a, s)).collect(),
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut out = Matrix::zeros(self.fp, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            out.data[r * out.cols..r * out.cols + self.cols].copy_from_slice(self.row(r));
            out.data[r * out.cols + self.cols..(r + 1) * out.cols].copy_from_slice(other.row(r));
        }
        out
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            fp: self.fp,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(r));
        }
    }

    /// Adds `block` into `self` at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        let fp = self.fp;
        for r in 0..block.rows {
            for c in 0..block.cols {
                let i = (r0 + r) * self.cols + c0 + c;
                self.data[i] = fp.add(self.data[i], block.get(r, c));
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut out = Matrix::zeros(self.fp, rows, cols);
        for r in 0..rows {
            let src = (r0 + r) * self.cols + c0;
            out.data[r * cols..(r + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    /// Block-diagonal matrix.
    pub fn block_diag(fp: Fp, blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(fp, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.put_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Unique reduced row echelon form.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Echelon { reduced: m, pivots }
    }

    /// Reduces in place, returning the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let fp = self.fp;
        let p = fp.p() as u64;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.data[r * cols + col] != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..cols {
                    self.data.swap(pr * cols + c, row * cols + c);
                }
            }
            let inv = fp.inv(self.data[row * cols + col]);
            if inv != 1 {
                for c in col..cols {
                    let i = row * cols + c;
                    self.data[i] = fp.mul(self.data[i], inv);
                }
            }
            let (before, rest) = self.data.split_at_mut(row * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            let eliminate = |target: &mut [u32]| {
                let f = target[col] as u64;
                if f == 0 {
                    return;
                }
                let nf = p - f;
                for c in col..cols {
                    target[c] = ((target[c] as u64 + nf * pivot_row[c] as u64) % p) as u32;
                }
            };
            for target in before.chunks_mut(cols) {
                eliminate(target);
            }
            for target in after.chunks_mut(cols) {
                eliminate(target);
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Eliminate along the shorter side.
        if self.rows > self.cols {
            self.transpose().rref().rank()
        } else {
            self.rref().rank()
        }
    }

    /// Null space `{v : self * v = 0}` as a canonical subspace of `F_p^cols`.
    pub fn kernel(&self) -> Subspace {
        let ech = self.rref();
        let n = self.cols;
        let free: Vec<usize> = free_columns(&ech.pivots, n);
        let mut vectors = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![0u32; n];
            v[f] = 1;
            for (r, &pc) in ech.pivots.iter().enumerate() {
                v[pc] = self.fp.neg(ech.reduced.get(r, f));
            }
            vectors.push(v);
        }
        Subspace::from_vectors(self.fp, n, &vectors)
    }

    /// Column space as a canonical subspace of `F_p^rows`.
    pub fn image(&self) -> Subspace {
        let t = self.transpose();
        Subspace::from_matrix(t)
    }

    /// Some `x` with `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let rhs = Matrix::from_columns(self.fp, self.rows, &[b.to_vec()]);
        self.solve_matrix(&rhs).map(|x| x.column(0))
    }

    /// Solves `self * X = B` for all columns of `B` at once.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(b.rows, self.rows, "right-hand side row mismatch");
        let aug = self.hstack(b);
        let ech = aug.rref();
        let n = self.cols;
        if ech.pivots.iter().any(|&c| c >= n) {
            return None;
        }
        let mut x = Matrix::zeros(self.fp, n, b.cols);
        for (r, &pc) in ech.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, ech.reduced.get(r, n + j));
            }
        }
        Some(x)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let id = Matrix::identity(self.fp, self.rows);
        if self.rank() != self.rows {
            return None;
        }
        self.solve_matrix(&id)
    }

    /// Kronecker product; row `(i_a, i_b)` sits at `i_a * rows(b) + i_b`, likewise for columns.
    pub fn kron(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        if self.fp != other.fp {
            return Err(LinAlgError::PrimeMismatch(self.fp.p(), other.fp.p()));
        }
        let fp = self.fp;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(fp, rows, cols);
        for ia in 0..self.rows {
            for ja in 0..self.cols {
                let a = self.get(ia, ja);
                if a == 0 {
                    continue;
                }
                for ib in 0..other.rows {
                    for jb in 0..other.cols {
                        let v = fp.mul(a, other.get(ib, jb));
                        out.data[(ia * other.rows + ib) * cols + ja * other.cols + jb] = v;
                    }
                }
            }
        }
        Ok(out)
    }
}

fn free_columns(pivots: &[usize], n: usize) -> Vec<usize> {
    let mut is_pivot = vec![false; n];
    for &c in pivots {
        is_pivot[c] = true;
    }
    (0..n).filter(|&c| !is_pivot[c]).collect()
}

/// A subspace of `F_p^n`, stored as the unique reduced row echelon basis.
///
/// Two subspaces are equal exactly when their basis matrices are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in F_{}^{})", self.dim(), self.basis.fp.p(), self.ambient())?;
        for r in 0..self.basis.rows {
            write!(f, "\n  {:?}", self.basis.row(r))?;
        }
        Ok(())
    }
}

impl Subspace {
    pub fn zero(fp: Fp, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(fp, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(fp: Fp, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::identity(fp, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the rows of `m`.
    pub fn from_matrix(m: Matrix) -> Self {
        let ech = m.rref();
        let rank = ech.rank();
        let basis = ech.reduced.block(0, 0, rank, m.cols);
        Subspace {
            basis,
            pivots: ech.pivots,
        }
    }

    /// Span of the given vectors.
    pub fn from_vectors(fp: Fp, ambient: usize, vectors: &[Vec<u32>]) -> Self {
        let mut m = Matrix::zeros(fp, vectors.len(), ambient);
        for (r, v) in vectors.iter().enumerate() {
            assert_eq!(v.len(), ambient, "vector length does not match ambient dimension");
            m.data[r * ambient..(r + 1) * ambient].copy_from_slice(v);
        }
        Self::from_matrix(m)
    }

    pub fn field(&self) -> Fp {
        self.basis.fp
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    /// Basis rows in reduced echelon form.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vec<u32>> {
        (0..self.dim()).map(|r| self.basis.row(r).to_vec()).collect()
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn basis_columns(&self) -> Matrix {
        self.basis.transpose()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient()
    }

    /// `v` minus its reduction against the basis: zero exactly when `v` lies in the span.
    /// The result vanishes at every pivot position.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let fp = self.field();
        let mut out = v.to_vec();
        for (r, &pc) in self.pivots.iter().enumerate() {
            let f = out[pc];
            if f == 0 {
                continue;
            }
            let nf = fp.neg(f);
            for (o, &b) in out.iter_mut().zip(self.basis.row(r)) {
                *o = fp.add(*o, fp.mul(nf, b));
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc]).collect())
    }

    /// Coordinates of each column of `m` (assumed to lie in the subspace).
    pub fn coords_matrix(&self, m: &Matrix) -> Matrix {
        assert_eq!(m.rows(), self.ambient());
        let mut out = Matrix::zeros(self.field(), self.dim(), m.cols());
        for (r, &pc) in self.pivots.iter().enumerate() {
            for c in 0..m.cols() {
                out.set(r, c, m.get(pc, c));
            }
        }
        out
    }

    /// Positions not used as pivots; the matching standard vectors span a complement.
    pub fn complement_positions(&self) -> Vec<usize> {
        free_columns(&self.pivots, self.ambient())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient() == other.ambient()
            && (0..self.dim()).all(|r| other.contains(self.basis.row(r)))
    }

    /// Sum of subspaces sharing an ambient space.
    pub fn sum(fp: Fp, ambient: usize, parts: &[Subspace]) -> Result<Subspace, LinAlgError> {
        let mut stacked = Matrix::zeros(fp, 0, ambient);
        for part in parts {
            if part.ambient() != ambient {
                return Err(LinAlgError::AmbientMismatch(ambient, part.ambient()));
            }
            stacked = stacked.vstack(&part.basis);
        }
        Ok(Subspace::from_matrix(stacked))
    }

    pub fn plus(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        Subspace::sum(self.field(), self.ambient(), &[self.clone(), other.clone()])
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        if self.ambient() != other.ambient() {
            return Err(LinAlgError::AmbientMismatch(self.ambient(), other.ambient()));
        }
        let fp = self.field();
        let n = self.ambient();
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(fp, n));
        }
        // x U = y W  <=>  (x, -y) in the left kernel of [U; W].
        let stacked = self.basis.vstack(&other.basis);
        let left_kernel = stacked.transpose().kernel();
        let du = self.dim();
        let mut vectors = Vec::with_capacity(left_kernel.dim());
        for r in 0..left_kernel.dim() {
            let coeffs = &left_kernel.basis.row(r)[..du];
            let mut v = vec![0u32; n];
            for (i, &c) in coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (o, &b) in v.iter_mut().zip(self.basis.row(i)) {
                    *o = fp.add(*o, fp.mul(c, b));
                }
            }
            vectors.push(v);
        }
        Ok(Subspace::from_vectors(fp, n, &vectors))
    }

    /// Intersection of a family; the empty family gives the full space.
    pub fn intersect_all(fp: Fp, ambient: usize, parts: &[Subspace]) -> Result<Subspace, LinAlgError> {
        let mut acc = Subspace::full(fp, ambient);
        for part in parts {
            acc = acc.intersect(part)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Fp {
        Fp::two()
    }

    fn m(fp: Fp, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(fp, rows, cols).unwrap()
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(Fp::new(4), Err(LinAlgError::NotPrime(4)));
        assert!(Fp::new(1).is_err());
        assert!(Fp::new(7).is_ok());
    }

    #[test]
    fn rref_duplicate_rows() {
        let a = m(f2(), &[&[1, 1], &[1, 1]]);
        let e = a.rref();
        assert_eq!(e.reduced, m(f2(), &[&[1, 1], &[0, 0]]));
        assert_eq!(e.rank(), 1);
        assert_eq!(e.reduced.rref(), e);
    }

    #[test]
    fn rref_identity() {
        let id = Matrix::identity(f2(), 4);
        let e = id.rref();
        assert_eq!(e.reduced, id);
        assert_eq!(e.rank(), 4);
    }

    #[test]
    fn rank_over_f3_matches_determinant() {
        // det = 1*1 - 2*2 = -3 = 0 mod 3, so the rank drops to 1.
        let f3 = Fp::new(3).unwrap();
        let a = m(f3, &[&[1, 2], &[2, 1]]);
        let det = f3.reduce(1 * 1 - 2 * 2);
        assert_eq!(det, 0);
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let z = Matrix::zeros(f2(), 2, 2);
        assert_eq!(z.kernel().dim(), 2);
        assert_eq!(Matrix::identity(f2(), 3).kernel().dim(), 0);
        let k = m(f2(), &[&[1, 1]]).kernel();
        // enumeration of F_2^2: only (0,0) and (1,1) are killed
        let killed: Vec<Vec<u32>> = (0..4u32)
            .map(|x| vec![x & 1, (x >> 1) & 1])
            .filter(|v| (v[0] + v[1]) % 2 == 0)
            .collect();
        assert_eq!(killed.len(), 2);
        assert_eq!(k, Subspace::from_vectors(f2(), 2, &killed));
        assert_eq!(k.basis_vectors(), vec![vec![1, 1]]);
    }

    #[test]
    fn image_examples() {
        assert!(Matrix::identity(f2(), 3).image().is_full());
        assert!(Matrix::zeros(f2(), 3, 2).image().is_zero());
        assert_eq!(m(f2(), &[&[1], &[1]]).image().basis_vectors(), vec![vec![1, 1]]);
    }

    #[test]
    fn subspace_sum_and_intersection() {
        let e1 = Subspace::from_vectors(f2(), 2, &[vec![1, 0]]);
        let e2 = Subspace::from_vectors(f2(), 2, &[vec![0, 1]]);
        assert!(e1.plus(&e2).unwrap().is_full());
        assert!(e1.intersect(&e2).unwrap().is_zero());
        assert_eq!(e1.plus(&e1).unwrap(), e1);
        let diag = Subspace::from_vectors(f2(), 2, &[vec![1, 1]]);
        assert_eq!(diag.intersect(&e1).unwrap().dim(), 0);
        let other = Subspace::zero(f2(), 3);
        assert_eq!(e1.intersect(&other), Err(LinAlgError::AmbientMismatch(2, 3)));
        assert!(Subspace::sum(f2(), 2, &[e1, other]).is_err());
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(f2(), 2);
        assert_eq!(id.solve(&[1, 0]), Some(vec![1, 0]));
        assert_eq!(Matrix::zeros(f2(), 2, 2).solve(&[1, 0]), None);
        let a = m(f2(), &[&[1, 1]]);
        let x = a.solve(&[1]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![1]);
    }

    #[test]
    fn kron_examples() {
        let a = m(f2(), &[&[1, 1], &[0, 1]]);
        let k = Matrix::identity(f2(), 2).kron(&a).unwrap();
        assert_eq!(k, Matrix::block_diag(f2(), &[a.clone(), a.clone()]));
        assert_eq!(a.kron(&Matrix::identity(f2(), 1)).unwrap(), a);
        let f3 = Fp::new(3).unwrap();
        assert_eq!(
            a.kron(&Matrix::identity(f3, 1)),
            Err(LinAlgError::PrimeMismatch(2, 3))
        );
    }

    #[test]
    fn inverse_round_trip() {
        let f5 = Fp::new(5).unwrap();
        let a = m(f5, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(f5, 2));
        assert!(m(f5, &[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn empty_matrices_compose() {
        let a = Matrix::zeros(f2(), 3, 0);
        let b = Matrix::zeros(f2(), 0, 4);
        let c = a.mul(&b);
        assert_eq!(c.shape(), (3, 4));
        assert!(c.is_zero());
        assert_eq!(a.kernel().dim(), 0);
        assert_eq!(b.kernel().dim(), 4);
        assert_eq!(a.rank(), 0);
    }
}
