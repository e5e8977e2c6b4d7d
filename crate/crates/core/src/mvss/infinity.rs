//! The three-step filtration of `H^k` of a product of three ideals coming
//! from the truncated `Q` sequence (columns `0, 1, 2`), assembled by hand
//! from the first-page maps `φ: E_1^{0,q} → E_1^{1,q}`,
//! `ψ: E_1^{1,q} → E_1^{2,q}` and the page-two map `d_2: E_2^{0,q} → E_2^{2,q-1}`:
//!
//! - `F²` = `coker ψ` minus the image of `d_2`,
//! - `F¹/F²` = `ker ψ / im φ`,
//! - `F⁰/F¹` = `ker φ` minus the rank of `d_2`.

use serde::Serialize;

use crate::cech::{cech_multicomplex, par_degrees, CechProblem, DegreeOracle, OracleKind};
use crate::exactlinalg::Matrix;
use crate::grading::Multidegree;
use crate::multicomplex::build_dq;
use crate::spectral::{truncated_q_filtration, Page, SpectralSequence};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfinityDegree {
    pub k: i64,
    /// `F⁰/F¹`, `F¹/F²`, `F²` from the first- and second-page maps.
    pub pieces: [usize; 3],
    /// The same pieces read from `E_∞`.
    pub infinity: [usize; 3],
    /// Graded pieces of the filtration induced on `H^k(Tot)`.
    pub abutment: [usize; 3],
    /// Oracle `dim H^{k-2}` of the product ideal.
    pub expected_total: usize,
    /// `im φ ⊆ ker ψ` and `ψ ∘ φ = 0` as subspaces.
    pub complex_at_middle: bool,
}

impl InfinityDegree {
    pub fn holds(&self) -> bool {
        self.pieces == self.infinity
            && self.pieces == self.abutment
            && self.pieces.iter().sum::<usize>() == self.expected_total
            && self.complex_at_middle
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfinityReport {
    pub degree: Multidegree,
    pub terms: Vec<InfinityDegree>,
    /// Koszul-direction maps of `Q` have entries in {−1, 0, 1}.
    pub signed_unit_maps: bool,
}

impl InfinityReport {
    pub fn holds(&self) -> bool {
        self.signed_unit_maps && self.terms.iter().all(InfinityDegree::holds)
    }
}

fn map_matrix(page: &Page, p: i64, q: i64) -> Option<&Matrix> {
    page.map_from(p, q).map(|m| &m.matrix)
}

fn kernel_dim(m: Option<&Matrix>, source: usize) -> usize {
    m.map_or(source, |m| source - m.rank())
}

/// The filtration report at one multidegree of a three-group problem.
pub fn infinity_filtration_at(problem: &CechProblem, b: &Multidegree) -> Result<InfinityReport> {
    if problem.n() != 3 {
        return Err(Error::input(format!("the infinity filtration report needs exactly 3 groups, got {}", problem.n())));
    }
    let mc = cech_multicomplex(problem, b, false)?;
    let q = build_dq(&mc)?.q;
    let signed_unit_maps = q.points().all(|pt| q.diff(&pt, 0).entries_are_signed_units());
    let fc = truncated_q_filtration(&q)?;
    let mut ss = SpectralSequence::new(&fc);
    let e1 = ss.page(1)?;
    let e2 = ss.page(2)?;
    let e_inf = ss.page(fc.width())?;
    let abut = ss.abutment()?;
    let mut oracle = DegreeOracle::new(problem, b);
    let mut terms = Vec::new();
    for k in fc.complex().degrees() {
        // F²: column 2 at q = k − 2.
        let q2 = k - 2;
        let psi2 = map_matrix(&e1, 1, q2);
        let coker = e1.dim(2, q2) - psi2.map_or(0, Matrix::rank);
        let f2 = coker - e2.rank_into(2, q2);
        // F¹/F²: column 1 at q = k − 1.
        let q1 = k - 1;
        let phi = map_matrix(&e1, 0, q1);
        let psi = map_matrix(&e1, 1, q1);
        let f1 = kernel_dim(psi, e1.dim(1, q1)) - phi.map_or(0, Matrix::rank);
        let complex_at_middle = match (phi, psi) {
            (Some(phi), Some(psi)) => psi.kernel().contains(&phi.image())? && psi.mul(phi)?.is_zero(),
            _ => true,
        };
        // F⁰/F¹: column 0 at q = k.
        let f0 = kernel_dim(map_matrix(&e1, 0, k), e1.dim(0, k)) - e2.rank_from(0, k);
        terms.push(InfinityDegree {
            k,
            pieces: [f0, f1, f2],
            infinity: [e_inf.dim(0, k), e_inf.dim(1, q1), e_inf.dim(2, q2)],
            abutment: [abut.graded(0, k), abut.graded(1, k), abut.graded(2, k)],
            expected_total: oracle.h(OracleKind::Product, 0b111, k - 2),
            complex_at_middle,
        });
    }
    Ok(InfinityReport { degree: b.clone(), terms, signed_unit_maps })
}

/// [`infinity_filtration_at`] over the window, in window order.
pub fn infinity_filtration_report(problem: &CechProblem, jobs: usize) -> Result<Vec<InfinityReport>> {
    Ok(par_degrees(problem, jobs, |b| infinity_filtration_at(problem, b))?.into_iter().map(|(_, r)| r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::Window;
    use crate::exactlinalg::Field;
    use crate::grading::{Monomial, MonomialIdeal};

    fn problem(groups: &[&[&str]], r: i64) -> CechProblem {
        let m = |t: &&str| Monomial::parse(t, 3).unwrap();
        let groups = groups.iter().map(|g| g.iter().map(m).collect()).collect();
        let w = Window::new(vec![-r; 3], vec![r; 3]).unwrap();
        CechProblem::new(Field::Prime(65537), 3, MonomialIdeal::zero(3), groups, Some(w)).unwrap()
    }

    #[test]
    fn three_coordinate_planes() {
        let p = problem(&[&["x1"], &["x2"], &["x3"]], 1);
        for r in infinity_filtration_report(&p, 1).unwrap() {
            assert!(r.holds(), "{r:?}");
        }
        let r = infinity_filtration_at(&p, &Multidegree(vec![-1, -1, -1])).unwrap();
        let live: Vec<_> = r.terms.iter().filter(|t| t.expected_total > 0).collect();
        assert_eq!(live.len(), 1);
        assert_eq!(live[0].pieces.iter().filter(|&&d| d > 0).count(), 1);
    }

    #[test]
    fn pairwise_products() {
        let p = problem(&[&["x1*x2"], &["x2*x3"], &["x1*x3"]], 1);
        let reports = infinity_filtration_report(&p, 0).unwrap();
        assert!(reports.iter().all(InfinityReport::holds));
        assert!(reports.iter().any(|r| r.terms.iter().any(|t| t.pieces[1] > 0 || t.pieces[2] > 0)));
    }
}
