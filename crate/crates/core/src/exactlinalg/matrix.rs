use std::fmt;

use num_rational::BigRational;

use super::field::{Field, FieldOps, PrimeOps, RationalOps, Scalar};
use super::{LinalgError, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Store {
    Prime(Vec<u64>),
    Rational(Vec<BigRational>),
}

/// Bridges a `FieldOps` implementation to the matching `Store` variant.
pub(crate) trait StoreOps: FieldOps {
    fn slice<'a>(&self, s: &'a Store) -> &'a [Self::E];
    fn slice_mut<'a>(&self, s: &'a mut Store) -> &'a mut Vec<Self::E>;
    fn wrap(&self, v: Vec<Self::E>) -> Store;
    fn scalar(&self, e: &Self::E) -> Scalar;
}

impl StoreOps for PrimeOps {
    fn slice<'a>(&self, s: &'a Store) -> &'a [u64] {
        match s {
            Store::Prime(v) => v,
            Store::Rational(_) => unreachable!("store does not match field"),
        }
    }
    fn slice_mut<'a>(&self, s: &'a mut Store) -> &'a mut Vec<u64> {
        match s {
            Store::Prime(v) => v,
            Store::Rational(_) => unreachable!("store does not match field"),
        }
    }
    fn wrap(&self, v: Vec<u64>) -> Store {
        Store::Prime(v)
    }
    fn scalar(&self, e: &u64) -> Scalar {
        Scalar::Prime { p: self.0, v: *e }
    }
}

impl StoreOps for RationalOps {
    fn slice<'a>(&self, s: &'a Store) -> &'a [BigRational] {
        match s {
            Store::Rational(v) => v,
            Store::Prime(_) => unreachable!("store does not match field"),
        }
    }
    fn slice_mut<'a>(&self, s: &'a mut Store) -> &'a mut Vec<BigRational> {
        match s {
            Store::Rational(v) => v,
            Store::Prime(_) => unreachable!("store does not match field"),
        }
    }
    fn wrap(&self, v: Vec<BigRational>) -> Store {
        Store::Rational(v)
    }
    fn scalar(&self, e: &BigRational) -> Scalar {
        Scalar::Rational(e.clone())
    }
}

/// Runs `$body` with `$ops` bound to the arithmetic of `$field`.
macro_rules! dispatch {
    ($field:expr, $ops:ident => $body:expr) => {
        match $field {
            // The body is shared with the rational arm, whose elements are not `Copy`.
            #[allow(clippy::clone_on_copy)]
            $crate::exactlinalg::Field::Prime(p) => {
                let $ops = &$crate::exactlinalg::field::PrimeOps(p);
                $body
            }
            $crate::exactlinalg::Field::Rational => {
                let $ops = &$crate::exactlinalg::field::RationalOps;
                $body
            }
        }
    };
}
pub(crate) use dispatch;

/// Dense row-major matrix over an exact field.
///
/// A matrix used as a map acts on column vectors: `rows` is the codomain
/// dimension and `cols` the domain dimension.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    pub(crate) data: Store,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}x{} over {}]", self.rows, self.cols, self.field)?;
        for r in self.display_rows() {
            write!(f, "\n  [{}]", r.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        let data = dispatch!(field, ops => ops.wrap(vec![ops.zero(); rows * cols]));
        Matrix { field, rows, cols, data }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set_i64(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row-major integer entries.
    ///
    /// Panics if `entries.len() != rows * cols`.
    pub fn from_i64(field: Field, rows: usize, cols: usize, entries: &[i64]) -> Matrix {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        let data = dispatch!(field, ops => ops.wrap(entries.iter().map(|&v| ops.from_i64(v)).collect()));
        Matrix { field, rows, cols, data }
    }

    /// Builds a matrix from tagged scalars; every entry must belong to `field`.
    pub fn from_scalars(
        field: Field,
        rows: usize,
        cols: usize,
        entries: &[Scalar],
    ) -> Result<Matrix, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|s| s.field() != field) {
            return Err(LinalgError::MixedScalars { expected: field, found: bad.field() });
        }
        let data = match field {
            Field::Prime(_) => Store::Prime(
                entries
                    .iter()
                    .map(|s| match s {
                        Scalar::Prime { v, .. } => *v,
                        Scalar::Rational(_) => unreachable!(),
                    })
                    .collect(),
            ),
            Field::Rational => Store::Rational(
                entries
                    .iter()
                    .map(|s| match s {
                        Scalar::Rational(q) => q.clone(),
                        Scalar::Prime { .. } => unreachable!(),
                    })
                    .collect(),
            ),
        };
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols);
        dispatch!(self.field, ops => ops.scalar(&ops.slice(&self.data)[i * self.cols + j]))
    }

    pub fn set_i64(&mut self, i: usize, j: usize, v: i64) {
        assert!(i < self.rows && j < self.cols);
        let cols = self.cols;
        dispatch!(self.field, ops => {
            let e = ops.from_i64(v);
            ops.slice_mut(&mut self.data)[i * cols + j] = e;
        })
    }

    pub fn is_zero(&self) -> bool {
        dispatch!(self.field, ops => ops.slice(&self.data).iter().all(|e| ops.is_zero(e)))
    }

    /// True when every entry is `-1`, `0` or `1`.
    pub fn entries_are_signed_units(&self) -> bool {
        dispatch!(self.field, ops => {
            let one = ops.one();
            let minus = ops.neg(&one);
            ops.slice(&self.data).iter().all(|e| ops.is_zero(e) || *e == one || *e == minus)
        })
    }

    /// Entries rendered as strings (residues lifted to the symmetric range).
    pub fn display_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let s = self.get(i, j);
                        match s.to_i64() {
                            Some(v) => v.to_string(),
                            None => s.to_string(),
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn check_field(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    /// `self += sign * block` with the block's top-left corner at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Matrix, sign: i64) -> Result<(), LinalgError> {
        self.check_field(block)?;
        if r0 + block.rows > self.rows || c0 + block.cols > self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} block at ({r0},{c0}) in {}x{}",
                block.rows, block.cols, self.rows, self.cols
            )));
        }
        let cols = self.cols;
        dispatch!(self.field, ops => {
            let s = ops.from_i64(sign);
            let src = ops.slice(&block.data).to_vec();
            let dst = ops.slice_mut(&mut self.data);
            for i in 0..block.rows {
                for j in 0..block.cols {
                    let e = &src[i * block.cols + j];
                    if !ops.is_zero(e) {
                        let k = (r0 + i) * cols + c0 + j;
                        dst[k] = ops.add(&dst[k], &ops.mul(&s, e));
                    }
                }
            }
        });
        Ok(())
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let data = dispatch!(self.field, ops => {
            let src = ops.slice(&self.data);
            let mut v = Vec::with_capacity(rows * cols);
            for i in 0..rows {
                v.extend_from_slice(&src[(r0 + i) * self.cols + c0..(r0 + i) * self.cols + c0 + cols]);
            }
            ops.wrap(v)
        });
        Matrix { field: self.field, rows, cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let data = dispatch!(self.field, ops => {
            let src = ops.slice(&self.data);
            let mut v = Vec::with_capacity(idx.len() * self.cols);
            for &i in idx {
                v.extend_from_slice(&src[i * self.cols..(i + 1) * self.cols]);
            }
            ops.wrap(v)
        });
        Matrix { field: self.field, rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        self.transpose().select_rows(idx).transpose()
    }

    pub fn transpose(&self) -> Matrix {
        let (r, c) = (self.rows, self.cols);
        let data = dispatch!(self.field, ops => {
            let src = ops.slice(&self.data);
            let mut v = Vec::with_capacity(r * c);
            for j in 0..c {
                for i in 0..r {
                    v.push(src[i * c + j].clone());
                }
            }
            ops.wrap(v)
        });
        Matrix { field: self.field, rows: c, cols: r, data }
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        let data = dispatch!(self.field, ops => {
            let a = ops.slice(&self.data);
            let b = ops.slice(&rhs.data);
            let mut out = vec![ops.zero(); n * m];
            for i in 0..n {
                for t in 0..k {
                    let x = &a[i * k + t];
                    if ops.is_zero(x) {
                        continue;
                    }
                    for j in 0..m {
                        let y = &b[t * m + j];
                        if !ops.is_zero(y) {
                            out[i * m + j] = ops.add(&out[i * m + j], &ops.mul(x, y));
                        }
                    }
                }
            }
            ops.wrap(out)
        });
        Ok(Matrix { field: self.field, rows: n, cols: m, data })
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(rhs)?;
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "sum of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = self.clone();
        out.add_block(0, 0, rhs, 1)?;
        Ok(out)
    }

    pub fn scale_i64(&self, s: i64) -> Matrix {
        let data = dispatch!(self.field, ops => {
            let f = ops.from_i64(s);
            ops.wrap(ops.slice(&self.data).iter().map(|e| ops.mul(&f, e)).collect())
        });
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(rhs)?;
        let (r, c) = (self.rows * rhs.rows, self.cols * rhs.cols);
        let data = dispatch!(self.field, ops => {
            let a = ops.slice(&self.data);
            let b = ops.slice(&rhs.data);
            let mut v = vec![ops.zero(); r * c];
            for i in 0..self.rows {
                for j in 0..self.cols {
                    let x = &a[i * self.cols + j];
                    if ops.is_zero(x) {
                        continue;
                    }
                    for k in 0..rhs.rows {
                        for l in 0..rhs.cols {
                            v[(i * rhs.rows + k) * c + j * rhs.cols + l] = ops.mul(x, &b[k * rhs.cols + l]);
                        }
                    }
                }
            }
            ops.wrap(v)
        });
        Ok(Matrix { field: self.field, rows: r, cols: c, data })
    }

    pub fn vstack(&self, below: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(below)?;
        if self.cols != below.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "vstack of widths {} and {}",
                self.cols, below.cols
            )));
        }
        let data = dispatch!(self.field, ops => {
            let mut v = ops.slice(&self.data).to_vec();
            v.extend_from_slice(ops.slice(&below.data));
            ops.wrap(v)
        });
        Ok(Matrix { field: self.field, rows: self.rows + below.rows, cols: self.cols, data })
    }

    pub fn hstack(&self, right: &Matrix) -> Result<Matrix, LinalgError> {
        if self.rows != right.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "hstack of heights {} and {}",
                self.rows, right.rows
            )));
        }
        Ok(self.transpose().vstack(&right.transpose())?.transpose())
    }

    /// Rank by forward elimination.
    pub fn rank(&self) -> usize {
        dispatch!(self.field, ops => {
            let mut a = ops.slice(&self.data).to_vec();
            eliminate(ops, &mut a, self.rows, self.cols, false).len()
        })
    }

    /// Reduced row echelon form and its pivot columns.
    ///
    /// Pivoting takes the leftmost nonzero column and the first nonzero row,
    /// so the result is reproducible.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let (data, piv) = dispatch!(self.field, ops => {
            let mut a = ops.slice(&self.data).to_vec();
            let piv = eliminate(ops, &mut a, self.rows, self.cols, true);
            (ops.wrap(a), piv)
        });
        (Matrix { field: self.field, rows: self.rows, cols: self.cols, data }, piv)
    }

    /// Basis of `{v : self * v = 0}`.
    pub fn kernel(&self) -> Subspace {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        let mut basis = Matrix::zeros(self.field, free.len(), self.cols);
        let cols = self.cols;
        dispatch!(self.field, ops => {
            let src = ops.slice(&r.data);
            let dst = ops.slice_mut(&mut basis.data);
            for (k, &f) in free.iter().enumerate() {
                dst[k * cols + f] = ops.one();
                for (i, &pc) in piv.iter().enumerate() {
                    dst[k * cols + pc] = ops.neg(&src[i * cols + f]);
                }
            }
        });
        Subspace::span(basis)
    }

    /// Subspace spanned by the rows.
    pub fn row_space(&self) -> Subspace {
        Subspace::span(self.clone())
    }

    /// Subspace spanned by the columns (the image of the map).
    pub fn image(&self) -> Subspace {
        Subspace::span(self.transpose())
    }

    /// Solves `self * X = rhs`, returning one solution when the system is
    /// consistent. Free variables are set to zero.
    pub fn solve(&self, rhs: &Matrix) -> Result<Option<Matrix>, LinalgError> {
        if rhs.rows != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "solve with {} equations and {} right-hand rows",
                self.rows, rhs.rows
            )));
        }
        let aug = self.hstack(rhs)?;
        let (r, piv) = aug.rref();
        if piv.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        let (n, m) = (aug.cols, rhs.cols);
        dispatch!(self.field, ops => {
            let src = ops.slice(&r.data);
            let dst = ops.slice_mut(&mut x.data);
            for (i, &pc) in piv.iter().enumerate() {
                for j in 0..m {
                    dst[pc * m + j] = src[i * n + self.cols + j].clone();
                }
            }
        });
        Ok(Some(x))
    }
}

/// Gaussian elimination in place on a row-major `rows x cols` buffer.
/// Returns the pivot columns in order. With `reduced`, the pivots are scaled
/// to one and cleared above as well as below.
pub(crate) fn eliminate<F: FieldOps>(ops: &F, a: &mut [F::E], rows: usize, cols: usize, reduced: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !ops.is_zero(&a[i * cols + c])) else {
            continue;
        };
        if pr != r {
            for j in c..cols {
                a.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = ops.inv(&a[r * cols + c]);
        if reduced {
            for j in c..cols {
                a[r * cols + j] = ops.mul(&a[r * cols + j], &inv);
            }
        }
        let pivot_row: Vec<F::E> = a[r * cols + c..(r + 1) * cols].to_vec();
        let start = if reduced { 0 } else { r + 1 };
        for i in start..rows {
            if i == r {
                continue;
            }
            let f = a[i * cols + c].clone();
            if ops.is_zero(&f) {
                continue;
            }
            let f = if reduced { f } else { ops.mul(&f, &inv) };
            for (off, pv) in pivot_row.iter().enumerate() {
                if !ops.is_zero(pv) {
                    let k = i * cols + c + off;
                    a[k] = ops.sub(&a[k], &ops.mul(&f, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}
