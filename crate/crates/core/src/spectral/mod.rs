//! Spectral sequences of cochain complexes with a bounded descending
//! filtration, computed from the subspace formulas
//!
//! ```text
//! Z_r^p = F^p C ∩ d⁻¹(F^{p+r} C),   B_r^p = Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1},   E_r^p = Z_r^p / B_r^p
//! ```
//!
//! with `E_{r+1} = H(E_r, d_r)` recomputed as an independent check.

mod engine;
mod filtrations;
mod sequences;

pub use engine::{Abutment, Convergence, Page, PageMap, SpectralSequence, StructureReport};
pub use filtrations::{
    column_filtration, edge_map_check, q_filtration, truncated_q_filtration, xp_filtration, EdgeMapReport,
};
pub use sequences::{check_generic_sequence, GenericKind, GenericReport};

use crate::exactlinalg::Subspace;
use crate::multicomplex::CochainComplex;
use crate::{Error, Result};

/// A cochain complex with a descending filtration `F^{p_min} = C ⊇ … ⊇
/// F^{p_max} ⊇ F^{p_max+1} = 0` by subcomplexes.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    complex: CochainComplex,
    p_min: i64,
    p_max: i64,
    /// `levels[p - p_min][k - lo]` for `p_min < p ≤ p_max`.
    levels: Vec<Vec<Subspace>>,
}

impl FilteredComplex {
    /// Builds the filtration from `level(p, k)` for `p_min < p ≤ p_max` and
    /// checks that it is descending and stable under `d`.
    pub fn new(
        complex: CochainComplex,
        p_min: i64,
        p_max: i64,
        level: impl Fn(i64, i64) -> Subspace,
    ) -> Result<FilteredComplex> {
        if p_min > p_max {
            return Err(Error::contract(format!("empty filtration range {p_min}..={p_max}")));
        }
        let degrees = complex.degrees();
        let mut levels = Vec::new();
        for p in p_min + 1..=p_max {
            let mut row = Vec::new();
            for k in degrees.clone() {
                let s = level(p, k);
                if s.ambient() != complex.dim(k) {
                    return Err(Error::contract(format!(
                        "filtration level {p} in degree {k} lives in dimension {}, expected {}",
                        s.ambient(),
                        complex.dim(k)
                    )));
                }
                row.push(s);
            }
            levels.push(row);
        }
        let fc = FilteredComplex { complex, p_min, p_max, levels };
        fc.check()?;
        Ok(fc)
    }

    /// Filtration by the lattice points of the blocks of a totalization:
    /// `F^p` is spanned by the blocks whose `level` is at least `p`. Levels
    /// are clamped into `p_min..=p_max`.
    pub fn from_block_levels(
        complex: CochainComplex,
        p_min: i64,
        p_max: i64,
        level: impl Fn(&[i64]) -> i64,
    ) -> Result<FilteredComplex> {
        let c = complex.clone();
        FilteredComplex::new(complex, p_min, p_max, |p, k| {
            c.block_subspace(k, |pt| level(pt).clamp(p_min, p_max) >= p)
        })
    }

    fn check(&self) -> Result<()> {
        for p in self.p_min..=self.p_max {
            for k in self.complex.degrees() {
                let here = self.level(p, k);
                let below = self.level(p + 1, k);
                if !here.contains(&below)? {
                    return Err(Error::contract(format!(
                        "filtration is not descending at level {p} in degree {k}"
                    )));
                }
                let image = here.image_under(&self.complex.diff(k))?;
                if !self.level(p, k + 1).contains(&image)? {
                    return Err(Error::contract(format!(
                        "filtration level {p} is not stable under d in degree {k}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn p_min(&self) -> i64 {
        self.p_min
    }

    pub fn p_max(&self) -> i64 {
        self.p_max
    }

    /// Number of filtration steps; pages are constant from this index on.
    pub fn width(&self) -> i64 {
        self.p_max - self.p_min + 1
    }

    /// `F^p C^k`, with `F^p = C` below the range and `0` above it.
    pub fn level(&self, p: i64, k: i64) -> Subspace {
        let field = self.complex.field();
        let dim = self.complex.dim(k);
        if p <= self.p_min {
            return Subspace::full(field, dim);
        }
        if p > self.p_max || dim == 0 {
            return Subspace::zero(field, dim);
        }
        let t = (k - self.complex.lo()) as usize;
        self.levels[(p - self.p_min - 1) as usize][t].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::{Field, Matrix};

    const F: Field = Field::Prime(65537);

    #[test]
    fn unstable_filtration_is_rejected() {
        let c = CochainComplex::from_maps(F, 0, &[1, 1], vec![Matrix::identity(F, 1)]).unwrap();
        // F^1 = degree 0 only: d leaves it.
        let err = FilteredComplex::new(c, 0, 1, |_, k| {
            if k == 0 {
                Subspace::full(F, 1)
            } else {
                Subspace::zero(F, 1)
            }
        })
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("level 1") && msg.contains("degree 0"), "{msg}");
    }

    #[test]
    fn levels_outside_range() {
        let c = CochainComplex::from_maps(F, 0, &[2], vec![]).unwrap();
        let fc = FilteredComplex::new(c, 0, 0, |_, _| Subspace::zero(F, 2)).unwrap();
        assert_eq!(fc.level(-3, 0).dim(), 2);
        assert_eq!(fc.level(1, 0).dim(), 0);
        assert_eq!(fc.width(), 1);
    }
}
