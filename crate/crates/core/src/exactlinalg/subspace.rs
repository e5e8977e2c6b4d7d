use super::field::FieldOps;
use super::matrix::{dispatch, StoreOps};
use super::{Field, LinalgError, Matrix};

/// A subspace of `field^ambient`, stored as the nonzero rows of a reduced
/// row echelon form. The representation is canonical: two subspaces are
/// equal iff their stored bases are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Span of the rows of `generators`.
    pub fn span(generators: Matrix) -> Subspace {
        let (r, pivots) = generators.rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        Subspace { basis: r.select_rows(&keep), pivots }
    }

    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { basis: Matrix::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace { basis: Matrix::identity(field, ambient), pivots: (0..ambient).collect() }
    }

    /// Span of the given standard basis vectors.
    pub fn coordinate(field: Field, ambient: usize, indices: &[usize]) -> Subspace {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let mut m = Matrix::zeros(field, idx.len(), ambient);
        for (r, &c) in idx.iter().enumerate() {
            m.set_i64(r, c, 1);
        }
        Subspace { basis: m, pivots: idx }
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    /// Basis vectors as the rows of a matrix.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    fn check(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.field() != other.field() {
            return Err(LinalgError::FieldMismatch(self.field(), other.field()));
        }
        if self.ambient() != other.ambient() {
            return Err(LinalgError::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient(),
                other.ambient()
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        Ok(Subspace::span(self.basis.vstack(&other.basis)?))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.field(), self.ambient()));
        }
        // (x, y) with x*A + y*B = 0 gives x*A in both spans.
        let stacked = self.basis.vstack(&other.basis)?.transpose();
        let rel = stacked.kernel();
        let xs = rel.basis.block(0, 0, rel.dim(), self.dim());
        Ok(Subspace::span(xs.mul(&self.basis)?))
    }

    /// Reduces `v` (a `1 x ambient` row) modulo this subspace.
    pub fn reduce(&self, v: &Matrix) -> Result<Matrix, LinalgError> {
        if v.cols() != self.ambient() || v.field() != self.field() {
            return Err(LinalgError::DimensionMismatch(format!(
                "reducing a {}-vector in a {}-dimensional ambient space",
                v.cols(),
                self.ambient()
            )));
        }
        let mut out = v.clone();
        let n = self.ambient();
        dispatch!(self.field(), ops => {
            let b = ops.slice(&self.basis.data).to_vec();
            let dst = ops.slice_mut(&mut out.data);
            for row in 0..dst.len() / n.max(1) {
                for (i, &pc) in self.pivots.iter().enumerate() {
                    let f = dst[row * n + pc].clone();
                    if ops.is_zero(&f) {
                        continue;
                    }
                    for j in 0..n {
                        let e = &b[i * n + j];
                        if !ops.is_zero(e) {
                            dst[row * n + j] = ops.sub(&dst[row * n + j], &ops.mul(&f, e));
                        }
                    }
                }
            }
        });
        Ok(out)
    }

    /// True when `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check(other)?;
        Ok(other.dim() == 0 || self.reduce(&other.basis)?.is_zero())
    }

    /// True when the rows of `v` lie in this subspace.
    pub fn contains_vectors(&self, v: &Matrix) -> Result<bool, LinalgError> {
        Ok(v.rows() == 0 || self.reduce(v)?.is_zero())
    }

    /// Image of this subspace under the map `f` (codomain x domain).
    pub fn image_under(&self, f: &Matrix) -> Result<Subspace, LinalgError> {
        if f.cols() != self.ambient() {
            return Err(LinalgError::DimensionMismatch(format!(
                "map with domain {} applied to a subspace of {}",
                f.cols(),
                self.ambient()
            )));
        }
        Ok(Subspace::span(self.basis.mul(&f.transpose())?))
    }

    /// Linear forms vanishing on this subspace, as the rows of a matrix.
    pub fn annihilator(&self) -> Matrix {
        let k = self.basis.kernel();
        k.basis.clone()
    }

    /// `{v : f(v) ∈ target}`.
    pub fn preimage(f: &Matrix, target: &Subspace) -> Result<Subspace, LinalgError> {
        if f.rows() != target.ambient() {
            return Err(LinalgError::DimensionMismatch(format!(
                "map with codomain {} and target subspace of {}",
                f.rows(),
                target.ambient()
            )));
        }
        let ann = target.annihilator();
        if ann.rows() == 0 {
            return Ok(Subspace::full(f.field(), f.cols()));
        }
        Ok(ann.mul(f)?.kernel())
    }

    /// Coset representatives for `self / denom`: vectors of `self` that
    /// complete a basis of `denom ∩ self` to a basis of `self`. Chosen
    /// greedily from the canonical basis, so the choice is deterministic.
    pub fn quotient(&self, denom: &Subspace) -> Result<Matrix, LinalgError> {
        self.check(denom)?;
        let n = self.ambient();
        let picked = dispatch!(self.field(), ops => {
            let mut echelon: Vec<(usize, Vec<_>)> = Vec::new();
            let d = ops.slice(&denom.basis.data);
            for (i, &pc) in denom.pivots.iter().enumerate() {
                echelon.push((pc, d[i * n..(i + 1) * n].to_vec()));
            }
            let src = ops.slice(&self.basis.data);
            let mut picked = Vec::new();
            for r in 0..self.dim() {
                let mut v = src[r * n..(r + 1) * n].to_vec();
                for (pc, row) in &echelon {
                    let f = v[*pc].clone();
                    if ops.is_zero(&f) {
                        continue;
                    }
                    for j in 0..n {
                        if !ops.is_zero(&row[j]) {
                            v[j] = ops.sub(&v[j], &ops.mul(&f, &row[j]));
                        }
                    }
                }
                if let Some(pc) = v.iter().position(|e| !ops.is_zero(e)) {
                    let inv = ops.inv(&v[pc]);
                    for e in v.iter_mut() {
                        *e = ops.mul(e, &inv);
                    }
                    echelon.push((pc, v));
                    picked.push(r);
                }
            }
            picked
        });
        Ok(self.basis.select_rows(&picked))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const F: Field = Field::Prime(101);

    #[test]
    fn sum_of_axes_is_full() {
        let a = Subspace::coordinate(F, 2, &[0]);
        let b = Subspace::coordinate(F, 2, &[1]);
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(F, 2));
    }

    #[test]
    fn intersection_with_self() {
        let a = Subspace::span(Matrix::from_i64(F, 2, 3, &[1, 2, 3, 0, 1, 1]));
        assert_eq!(a.intersection(&a).unwrap(), a);
    }

    #[test]
    fn preimage_of_zero_is_kernel() {
        let f = Matrix::from_i64(F, 2, 3, &[1, 1, 0, 0, 1, 1]);
        let pre = Subspace::preimage(&f, &Subspace::zero(F, 2)).unwrap();
        assert_eq!(pre, f.kernel());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = Subspace::full(F, 2);
        let b = Subspace::full(F, 3);
        assert!(matches!(a.sum(&b), Err(LinalgError::DimensionMismatch(_))));
    }

    #[test]
    fn quotient_representatives() {
        let a = Subspace::full(F, 3);
        let b = Subspace::span(Matrix::from_i64(F, 1, 3, &[1, 1, 1]));
        let reps = a.quotient(&b).unwrap();
        assert_eq!(reps.rows(), 2);
        let together = Subspace::span(reps.clone()).sum(&b).unwrap();
        assert_eq!(together.dim(), 3);
        assert_eq!(Subspace::span(reps).intersection(&b).unwrap().dim(), 0);
    }
}
