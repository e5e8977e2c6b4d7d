use std::ops::RangeInclusive;

use crate::exactlinalg::{Field, Matrix, Subspace};
use crate::{Error, Result};

/// A run of basis vectors in one degree of a totalization that all come
/// from the same lattice point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub point: Vec<i64>,
    pub offset: usize,
    pub dim: usize,
}

/// Basis of one degree of a complex. Labels only record provenance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Basis {
    pub labels: Vec<String>,
    pub blocks: Vec<Block>,
}

impl Basis {
    pub fn plain(labels: Vec<String>) -> Basis {
        Basis { labels, blocks: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// A bounded cochain complex of finite-dimensional spaces.
///
/// `diffs[t]` maps degree `lo + t` to degree `lo + t + 1`; the last
/// differential always has zero rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    field: Field,
    lo: i64,
    spaces: Vec<Basis>,
    diffs: Vec<Matrix>,
}

impl CochainComplex {
    /// Assembles a complex and checks shapes and `d∘d = 0`.
    pub fn new(field: Field, lo: i64, spaces: Vec<Basis>, diffs: Vec<Matrix>) -> Result<CochainComplex> {
        let c = CochainComplex::new_unchecked(field, lo, spaces, diffs)?;
        c.check_square_zero()?;
        Ok(c)
    }

    /// Like [`CochainComplex::new`] but only checks shapes.
    pub fn new_unchecked(field: Field, lo: i64, spaces: Vec<Basis>, diffs: Vec<Matrix>) -> Result<CochainComplex> {
        if spaces.len() != diffs.len() {
            return Err(Error::contract(format!(
                "{} spaces but {} differentials",
                spaces.len(),
                diffs.len()
            )));
        }
        for (t, d) in diffs.iter().enumerate() {
            let target = spaces.get(t + 1).map_or(0, Basis::dim);
            if d.cols() != spaces[t].dim() || d.rows() != target || d.field() != field {
                return Err(Error::contract(format!(
                    "differential in degree {} has shape {}x{}, expected {}x{}",
                    lo + t as i64,
                    d.rows(),
                    d.cols(),
                    target,
                    spaces[t].dim()
                )));
            }
        }
        Ok(CochainComplex { field, lo, spaces, diffs })
    }

    /// A complex given by dimensions and maps, with generated labels.
    pub fn from_maps(field: Field, lo: i64, dims: &[usize], maps: Vec<Matrix>) -> Result<CochainComplex> {
        let spaces = dims
            .iter()
            .enumerate()
            .map(|(t, &d)| Basis::plain((0..d).map(|i| format!("c{}_{i}", lo + t as i64)).collect()))
            .collect();
        let mut diffs = maps;
        if diffs.len() + 1 == dims.len() {
            diffs.push(Matrix::zeros(field, 0, *dims.last().unwrap_or(&0)));
        }
        CochainComplex::new(field, lo, spaces, diffs)
    }

    pub fn zero(field: Field) -> CochainComplex {
        CochainComplex { field, lo: 0, spaces: Vec::new(), diffs: Vec::new() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Degrees with a stored (possibly zero) space.
    pub fn degrees(&self) -> RangeInclusive<i64> {
        self.lo..=self.lo + self.spaces.len() as i64 - 1
    }

    fn slot(&self, k: i64) -> Option<usize> {
        let t = k - self.lo;
        (t >= 0 && (t as usize) < self.spaces.len()).then_some(t as usize)
    }

    pub fn dim(&self, k: i64) -> usize {
        self.slot(k).map_or(0, |t| self.spaces[t].dim())
    }

    pub fn basis(&self, k: i64) -> Option<&Basis> {
        self.slot(k).map(|t| &self.spaces[t])
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.iter().map(Basis::dim).sum()
    }

    /// The differential `C^k → C^{k+1}` (a zero map outside the range).
    pub fn diff(&self, k: i64) -> Matrix {
        match self.slot(k) {
            Some(t) => self.diffs[t].clone(),
            None => Matrix::zeros(self.field, self.dim(k + 1), self.dim(k)),
        }
    }

    pub(crate) fn diff_ref(&self, k: i64) -> Option<&Matrix> {
        self.slot(k).map(|t| &self.diffs[t])
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for t in 1..self.diffs.len() {
            let dd = self.diffs[t].mul(&self.diffs[t - 1])?;
            if !dd.is_zero() {
                return Err(Error::invariant(format!(
                    "d∘d ≠ 0 from degree {} to degree {}",
                    self.lo + t as i64 - 1,
                    self.lo + t as i64 + 1
                )));
            }
        }
        Ok(())
    }

    pub fn rank_of_diff(&self, k: i64) -> usize {
        self.diff_ref(k).map_or(0, Matrix::rank)
    }

    pub fn cohomology_dim(&self, k: i64) -> usize {
        self.dim(k) - self.rank_of_diff(k) - self.rank_of_diff(k - 1)
    }

    /// `(k, dim H^k)` for every stored degree.
    pub fn cohomology_dims(&self) -> Vec<(i64, usize)> {
        let ranks: Vec<usize> = self.diffs.iter().map(Matrix::rank).collect();
        self.degrees()
            .zip(0..)
            .map(|(k, t)| {
                let before = if t > 0 { ranks[t - 1] } else { 0 };
                (k, self.spaces[t].dim() - ranks[t] - before)
            })
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.cohomology_dims().iter().all(|&(_, d)| d == 0)
    }

    pub fn cycles(&self, k: i64) -> Subspace {
        match self.diff_ref(k) {
            Some(d) => d.kernel(),
            None => Subspace::zero(self.field, 0),
        }
    }

    pub fn boundaries(&self, k: i64) -> Subspace {
        match self.diff_ref(k - 1) {
            Some(d) => d.image(),
            None => Subspace::zero(self.field, self.dim(k)),
        }
    }

    /// Span of the basis vectors of degree `k` lying in blocks whose point
    /// satisfies `pred`.
    pub fn block_subspace(&self, k: i64, pred: impl Fn(&[i64]) -> bool) -> Subspace {
        let Some(basis) = self.basis(k) else {
            return Subspace::zero(self.field, 0);
        };
        let idx: Vec<usize> = basis
            .blocks
            .iter()
            .filter(|b| pred(&b.point))
            .flat_map(|b| b.offset..b.offset + b.dim)
            .collect();
        Subspace::coordinate(self.field, basis.dim(), &idx)
    }

    /// The same complex with degrees shifted by `by` (no sign change).
    pub fn shifted(&self, by: i64) -> CochainComplex {
        CochainComplex { lo: self.lo + by, ..self.clone() }
    }

    /// Subquotient on the basis vectors whose block point satisfies `keep`.
    /// Valid when the kept set is locally closed for the differential.
    pub fn restrict_blocks(&self, keep: impl Fn(&[i64]) -> bool) -> Result<CochainComplex> {
        let mut spaces = Vec::with_capacity(self.spaces.len());
        let mut picks = Vec::with_capacity(self.spaces.len());
        for basis in &self.spaces {
            let mut labels = Vec::new();
            let mut blocks = Vec::new();
            let mut idx = Vec::new();
            for b in basis.blocks.iter().filter(|b| keep(&b.point)) {
                blocks.push(Block { point: b.point.clone(), offset: labels.len(), dim: b.dim });
                for i in b.offset..b.offset + b.dim {
                    labels.push(basis.labels[i].clone());
                    idx.push(i);
                }
            }
            spaces.push(Basis { labels, blocks });
            picks.push(idx);
        }
        let diffs = (0..self.diffs.len())
            .map(|t| {
                let rows: &[usize] = picks.get(t + 1).map_or(&[], |v| v.as_slice());
                self.diffs[t].select_rows(rows).select_cols(&picks[t])
            })
            .collect();
        CochainComplex::new(self.field, self.lo, spaces, diffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const F: Field = Field::Prime(65537);

    #[test]
    fn identity_complex_is_exact() {
        let c = CochainComplex::from_maps(F, 0, &[1, 1], vec![Matrix::identity(F, 1)]).unwrap();
        assert!(c.is_acyclic());
        assert_eq!(c.degrees(), 0..=1);
    }

    #[test]
    fn zero_differential_cohomology_is_dimension() {
        let c = CochainComplex::from_maps(F, 2, &[2, 3], vec![Matrix::zeros(F, 3, 2)]).unwrap();
        assert_eq!(c.cohomology_dims(), vec![(2, 2), (3, 3)]);
    }

    #[test]
    fn square_zero_violation_detected() {
        let id = Matrix::identity(F, 1);
        let err = CochainComplex::from_maps(F, 0, &[1, 1, 1], vec![id.clone(), id]).unwrap_err();
        assert!(matches!(err, Error::Invariant(_)));
    }
}
