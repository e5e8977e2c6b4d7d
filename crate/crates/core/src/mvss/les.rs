//! The Mayer–Vietoris long exact sequence for two groups, read off the
//! two-column truncated `Q` complex: the column `p = 1` is a subcomplex
//! `F` with quotient the column `p = 0`, so
//!
//! `… → H^k(F) → H^k(Tot) → H^k(Tot/F) → H^{k+1}(F) → …`
//!
//! which in local cohomology index `j = k − 1` reads
//! `H^j(I_1) ⊕ H^j(I_2) → H^j(I_1 I_2) → H^{j+1}(I_1 + I_2) → …`.

use serde::Serialize;

use crate::cech::{cech_multicomplex, par_degrees, CechProblem, DegreeOracle, OracleKind};
use crate::exactlinalg::Subspace;
use crate::grading::Multidegree;
use crate::multicomplex::build_dq;
use crate::spectral::{truncated_q_filtration, FilteredComplex};
use crate::{Error, Result};

/// One total degree `k` of the sequence `A^k → B^k → C^k → A^{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesDegree {
    pub k: i64,
    /// `dim H^k(F)`, `dim H^k(Tot)`, `dim H^k(Tot/F)`.
    pub dims: [usize; 3],
    /// The same three dimensions from the oracle.
    pub expected: [usize; 3],
    /// Ranks of `A^k → B^k`, `B^k → C^k`, `C^k → A^{k+1}`.
    pub ranks: [usize; 3],
    /// Exactness at `A^k`, `B^k`, `C^k`.
    pub exact: [bool; 3],
}

impl LesDegree {
    pub fn holds(&self) -> bool {
        self.dims == self.expected && self.exact.iter().all(|&e| e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesReport {
    pub degree: Multidegree,
    pub terms: Vec<LesDegree>,
}

impl LesReport {
    pub fn holds(&self) -> bool {
        self.terms.iter().all(LesDegree::holds)
    }

    /// The nonzero part as `(k, A, B, C)` rows.
    pub fn nonzero(&self) -> Vec<(i64, [usize; 3])> {
        self.terms.iter().filter(|t| t.dims.iter().any(|&d| d > 0)).map(|t| (t.k, t.dims)).collect()
    }
}

struct Pieces {
    /// `F ∩ ker d`, `d(F^{k-1})`, `ker d`, `im d`, `F`, `d^{-1}(F^{k+1})`.
    zf: Subspace,
    bf: Subspace,
    z: Subspace,
    b: Subspace,
    f: Subspace,
    zq: Subspace,
}

fn pieces(fc: &FilteredComplex, k: i64) -> Result<Pieces> {
    let c = fc.complex();
    let d = c.diff(k);
    let f = fc.level(1, k);
    let z = d.kernel();
    let zf = f.intersection(&z)?;
    let bf = fc.level(1, k - 1).image_under(&c.diff(k - 1))?;
    let b = Subspace::full(c.field(), c.dim(k - 1)).image_under(&c.diff(k - 1))?;
    let zq = Subspace::preimage(&d, &fc.level(1, k + 1))?;
    Ok(Pieces { zf, bf, z, b, f, zq })
}

/// The sequence at one multidegree of a two-group problem.
pub fn mv_les_at(problem: &CechProblem, b: &Multidegree) -> Result<LesReport> {
    if problem.n() != 2 {
        return Err(Error::input(format!("the Mayer–Vietoris sequence needs exactly 2 groups, got {}", problem.n())));
    }
    let mc = cech_multicomplex(problem, b, false)?;
    let fc = truncated_q_filtration(&build_dq(&mc)?.q)?;
    let c = fc.complex();
    let mut oracle = DegreeOracle::new(problem, b);
    let lo = *c.degrees().start() - 1;
    let hi = *c.degrees().end() + 1;
    let all: Vec<Pieces> = (lo..=hi + 1).map(|k| pieces(&fc, k)).collect::<Result<_>>()?;
    let at = |k: i64| &all[(k - lo) as usize];
    let dim_sum = |a: &Subspace, b: &Subspace| -> Result<usize> { Ok(a.sum(b)?.dim()) };
    let mut rows = Vec::new();
    for k in lo..=hi {
        let p = at(k);
        let a = p.zf.dim() - p.bf.dim();
        let bb = p.z.dim() - p.b.dim();
        let bq = p.b.sum(&p.f)?;
        let cc = p.zq.dim() - bq.dim();
        let rank_f = dim_sum(&p.zf, &p.b)? - p.b.dim();
        let rank_g = dim_sum(&p.z, &p.f)? - bq.dim();
        let delta = |k: i64| -> Result<usize> {
            let here = at(k);
            let next = at(k + 1);
            let image = here.zq.image_under(&fc.complex().diff(k))?;
            Ok(image.sum(&next.bf)?.dim() - next.bf.dim())
        };
        let rank_delta = delta(k)?;
        let rank_delta_before = if k > lo { delta(k - 1)? } else { 0 };
        let j = k - 1;
        let expected = [
            oracle.h(OracleKind::Sum, 0b01, j) + oracle.h(OracleKind::Sum, 0b10, j),
            oracle.h(OracleKind::Product, 0b11, j),
            oracle.h(OracleKind::Sum, 0b11, k),
        ];
        rows.push(LesDegree {
            k,
            dims: [a, bb, cc],
            expected,
            ranks: [rank_f, rank_g, rank_delta],
            exact: [a - rank_f == rank_delta_before, bb - rank_g == rank_f, cc - rank_delta == rank_g],
        });
    }
    Ok(LesReport { degree: b.clone(), terms: rows })
}

/// [`mv_les_at`] over the whole window, in window order.
pub fn mv_les(problem: &CechProblem, jobs: usize) -> Result<Vec<LesReport>> {
    Ok(par_degrees(problem, jobs, |b| mv_les_at(problem, b))?.into_iter().map(|(_, r)| r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::Window;
    use crate::exactlinalg::Field;
    use crate::grading::{Monomial, MonomialIdeal};

    fn problem(groups: &[&[&str]], r: i64) -> CechProblem {
        let m = |t: &&str| Monomial::parse(t, 2).unwrap();
        let groups = groups.iter().map(|g| g.iter().map(m).collect()).collect();
        let w = Window::new(vec![-r; 2], vec![r; 2]).unwrap();
        CechProblem::new(Field::Prime(65537), 2, MonomialIdeal::zero(2), groups, Some(w)).unwrap()
    }

    #[test]
    fn two_coordinate_lines_at_minus_one() {
        let p = problem(&[&["x1"], &["x2"]], 1);
        let r = mv_les_at(&p, &Multidegree(vec![-1, -1])).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.nonzero(), vec![(2, [0, 1, 1])]);
        let two = r.terms.iter().find(|t| t.k == 2).unwrap();
        assert_eq!(two.ranks[1], 1);
    }

    #[test]
    fn exact_over_windows() {
        for p in [problem(&[&["x1"], &["x2"]], 2), problem(&[&["x1", "x2^2"], &["x1*x2"]], 2)] {
            for r in mv_les(&p, 1).unwrap() {
                assert!(r.holds(), "{r:?}");
            }
        }
    }

    #[test]
    fn equal_ideals_and_torsion_quotient() {
        for r in mv_les(&problem(&[&["x1"], &["x1"]], 2), 1).unwrap() {
            assert!(r.holds(), "{r:?}");
        }
        let m = |t: &str| Monomial::parse(t, 2).unwrap();
        let j = MonomialIdeal::new(2, [m("x1"), m("x2")]).unwrap();
        let w = Window::new(vec![-2; 2], vec![2; 2]).unwrap();
        let p = CechProblem::new(Field::Prime(65537), 2, j, vec![vec![m("x1*x2")], vec![m("x2^2")]], Some(w)).unwrap();
        // R/J is torsion: only H^0 survives, at multidegree 0, as 0 → k → k² → k → 0.
        for r in mv_les(&p, 1).unwrap() {
            assert!(r.holds());
            if r.degree == Multidegree(vec![0, 0]) {
                assert_eq!(r.nonzero(), vec![(0, [0, 0, 1]), (1, [2, 1, 0])]);
            } else {
                assert!(r.nonzero().is_empty(), "{r:?}");
            }
        }
    }

    #[test]
    fn rejects_three_groups() {
        let m = |t: &str| Monomial::parse(t, 1).unwrap();
        let p = CechProblem::new(
            Field::Prime(7),
            1,
            MonomialIdeal::zero(1),
            vec![vec![m("x1")], vec![m("x1")], vec![m("x1")]],
            None,
        )
        .unwrap();
        assert!(mv_les_at(&p, &Multidegree(vec![0])).is_err());
    }
}
