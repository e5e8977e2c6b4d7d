use serde::Serialize;

use super::{FilteredComplex, SpectralSequence};
use crate::multicomplex::{build_dq, build_hypercube_square, composite_map, Flavor, Multicomplex, RegionSpec};
use crate::{Error, Result};

/// Filtration of the totalization by the coordinate along `axis`.
/// For a double complex, `axis = 0` is the column filtration.
pub fn column_filtration(mc: &Multicomplex, axis: usize) -> Result<FilteredComplex> {
    if axis >= mc.n() {
        return Err(Error::contract(format!("axis {axis} out of range for {} directions", mc.n())));
    }
    let total = mc.totalize()?;
    FilteredComplex::from_block_levels(total, mc.lo()[axis], mc.hi()[axis], |q| q[axis])
}

fn nonzero_count(q: &[i64]) -> i64 {
    q.iter().filter(|&&v| v != 0).count() as i64
}

/// The `X_p` filtration: `F^p` collects the lattice points with at least `p`
/// nonzero coordinates, `0 ≤ p ≤ n`. With `augmented`, the multicomplex is
/// first replaced by `◻C` and the extra first axis is ignored when counting
/// (the `X'_p = ℤ × X_p` filtration).
pub fn xp_filtration(mc: &Multicomplex, augmented: bool) -> Result<FilteredComplex> {
    let n = mc.n() as i64;
    if augmented {
        let base = match mc.flavor() {
            Flavor::Commutative => mc.clone(),
            Flavor::Anticommutative => mc.sigma(),
        };
        let square = build_hypercube_square(&base)?;
        FilteredComplex::from_block_levels(square.totalize()?, 0, n, |q| nonzero_count(&q[1..]))
    } else {
        FilteredComplex::from_block_levels(mc.totalize()?, 0, n, nonzero_count)
    }
}

/// Column filtration (Koszul axis 0, `0 ≤ p ≤ n`) of the totalization of
/// `Q` from [`crate::multicomplex::build_dq`].
pub fn q_filtration(q: &Multicomplex) -> Result<FilteredComplex> {
    let n = q.n() as i64 - 1;
    FilteredComplex::from_block_levels(q.totalize()?, 0, n, |pt| pt[0])
}

/// Column filtration of the truncation `Q_-` that drops the column `p = n`,
/// leaving the columns `0 ≤ p < n`.
pub fn truncated_q_filtration(q: &Multicomplex) -> Result<FilteredComplex> {
    let n = q.n() as i64 - 1;
    if n < 1 {
        return Err(Error::contract("truncated Q needs at least one original direction"));
    }
    let truncated = q.restrict_by(|pt| pt[0] < n)?;
    FilteredComplex::from_block_levels(truncated.totalize()?, 0, n - 1, |pt| pt[0])
}

/// The surviving edge differential of the second spectral sequence of
/// `Q_-` (filtered by the `C`-degree), compared with the composite
/// `C^0 → C^{(1,…,1)}` of all `n` directions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeMapReport {
    /// `dim E_n` at the source and target cells.
    pub source_dim: usize,
    pub target_dim: usize,
    /// `dim C^0` and `dim H^n` of the interior complex.
    pub c0_dim: usize,
    pub interior_dim: usize,
    pub edge_rank: usize,
    pub composite_rank: usize,
}

impl EdgeMapReport {
    pub fn holds(&self) -> bool {
        self.source_dim == self.c0_dim && self.target_dim == self.interior_dim && self.edge_rank == self.composite_rank
    }
}

/// `d_n: E_n^{0,n-1} → E_n^{n,0}` of the `C`-degree filtration on `Q_-`.
/// The interior complex vanishes below total degree `n`, so `H^n` of it is
/// the kernel of the outgoing differential at `(1,…,1)` and the composite
/// lands there; only ranks are compared since the identifications hold up
/// to sign. Needs `n ≥ 2`: for one direction the source and target columns
/// coincide and the first page is `C` itself.
pub fn edge_map_check(mc: &Multicomplex) -> Result<EdgeMapReport> {
    let n = mc.n() as i64;
    if n < 2 {
        return Err(Error::contract("the edge map check needs at least two directions"));
    }
    let q = build_dq(mc)?.q;
    let truncated = q.restrict_by(|pt| pt[0] < n)?;
    let degree = |pt: &[i64]| pt[1..].iter().sum::<i64>();
    let lo = mc.lo().iter().sum::<i64>();
    let hi = mc.hi().iter().sum::<i64>().max(lo);
    let fc = FilteredComplex::from_block_levels(truncated.totalize()?, lo, hi, degree)?;
    let mut ss = SpectralSequence::new(&fc);
    let page = ss.page(n)?;
    let interior = mc.restrict(&RegionSpec::interior_all())?.totalize()?;
    Ok(EdgeMapReport {
        source_dim: page.dim(0, n - 1),
        target_dim: page.dim(n, 0),
        c0_dim: mc.dim_at(&vec![0; mc.n()]),
        interior_dim: interior.cohomology_dim(n),
        edge_rank: page.rank_from(0, n - 1),
        composite_rank: composite_map(mc, (1u32 << n) - 1)?.rank(),
    })
}
