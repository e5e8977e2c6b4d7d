//! Direct local cohomology: ranks of single Čech complexes, assembled here
//! from localization pieces without any multicomplex or spectral code.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use super::{cech_matrices, CechProblem, Window};
use crate::exactlinalg::Field;
use crate::grading::{Monomial, MonomialIdeal, Multidegree};
use crate::Result;

/// `dim H^t` of the Čech complex on `seq` at `b`, for `t = 0..=len`.
pub fn cech_cohomology(field: Field, seq: &[Monomial], ideal: &MonomialIdeal, b: &Multidegree, truncated: bool) -> Vec<usize> {
    let (live, mats) = cech_matrices(field, seq, ideal, b, truncated);
    let ranks: Vec<usize> = mats.iter().map(|m| m.rank()).collect();
    (0..live.len())
        .map(|t| live[t].len() - ranks[t] - if t > 0 { ranks[t - 1] } else { 0 })
        .collect()
}

/// Which ideal a group subset stands for, and whether the complex is
/// truncated. Truncated values are raw: index `t` is `H^t`, so the shifted
/// `Ȟ^i` is index `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OracleKind {
    Sum,
    Product,
    TruncatedSum,
    TruncatedProduct,
}

/// Cached oracle values at one multidegree.
pub struct DegreeOracle<'a> {
    problem: &'a CechProblem,
    b: Multidegree,
    cache: HashMap<(OracleKind, u32), Vec<usize>>,
}

impl<'a> DegreeOracle<'a> {
    pub fn new(problem: &'a CechProblem, b: &Multidegree) -> DegreeOracle<'a> {
        DegreeOracle { problem, b: b.clone(), cache: HashMap::new() }
    }

    pub fn degree(&self) -> &Multidegree {
        &self.b
    }

    /// Raw `dim H^t` for the ideal of `kind` on the groups in `set`. The
    /// empty sum is the zero ideal (`M_b` in degree 0); the empty product
    /// is the unit ideal (zero complex).
    pub fn h(&mut self, kind: OracleKind, set: u32, t: i64) -> usize {
        if t < 0 {
            return 0;
        }
        let key = (kind, set);
        if !self.cache.contains_key(&key) {
            let p = self.problem;
            let (seq, truncated) = match kind {
                OracleKind::Sum => (p.sum_sequence(set), false),
                OracleKind::TruncatedSum => (p.sum_sequence(set), true),
                OracleKind::Product | OracleKind::TruncatedProduct if set == 0 => {
                    self.cache.insert(key, Vec::new());
                    return 0;
                }
                OracleKind::Product => (p.product_sequence(set).expect("nonempty groups"), false),
                OracleKind::TruncatedProduct => (p.product_sequence(set).expect("nonempty groups"), true),
            };
            let dims = cech_cohomology(p.field, &seq, &p.ideal, &self.b, truncated);
            self.cache.insert(key, dims);
        }
        self.cache[&key].get(t as usize).copied().unwrap_or(0)
    }
}

/// Per `(i, b)` dimensions, nonzero entries only.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    pub rows: BTreeMap<(i64, Multidegree), usize>,
}

impl CohomologyTable {
    pub fn get(&self, i: i64, b: &Multidegree) -> usize {
        self.rows.get(&(i, b.clone())).copied().unwrap_or(0)
    }

    pub fn insert(&mut self, i: i64, b: &Multidegree, dim: usize) {
        if dim > 0 {
            self.rows.insert((i, b.clone()), dim);
        }
    }

    /// CSV with header `i,b1,…,bm,dim`, ordered by `i` then `b`.
    pub fn to_csv(&self, vars: usize) -> String {
        let mut out = String::from("i");
        for j in 1..=vars {
            let _ = write!(out, ",b{j}");
        }
        out.push_str(",dim\n");
        for ((i, b), d) in &self.rows {
            let _ = write!(out, "{i}");
            for v in &b.0 {
                let _ = write!(out, ",{v}");
            }
            let _ = writeln!(out, ",{d}");
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self.rows.iter().map(|((i, b), d)| json!({"i": i, "b": b.0, "dim": d})).collect();
        json!(rows)
    }
}

/// Local cohomology of the ideal generated by `seq` over the window: the
/// full Čech complex when `augmented`, otherwise `Ȟ^i = H^{i+1}` of the
/// truncated one.
pub fn local_cohomology_oracle(
    field: Field,
    seq: &[Monomial],
    ideal: &MonomialIdeal,
    window: &Window,
    augmented: bool,
) -> Result<CohomologyTable> {
    let mut table = CohomologyTable::default();
    for b in window.degrees() {
        let dims = cech_cohomology(field, seq, ideal, &b, !augmented);
        for (t, &d) in dims.iter().enumerate() {
            let i = if augmented { t as i64 } else { t as i64 - 1 };
            table.insert(i, &b, d);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    const F: Field = Field::Prime(65537);

    fn m(t: &str, v: usize) -> Monomial {
        Monomial::parse(t, v).unwrap()
    }

    #[test]
    fn maximal_ideal_in_two_variables() {
        let w = Window::new(vec![-3, -3], vec![3, 3]).unwrap();
        let t = local_cohomology_oracle(F, &[m("x1", 2), m("x2", 2)], &MonomialIdeal::zero(2), &w, true).unwrap();
        for b in w.degrees() {
            let expect = usize::from(b.0[0] <= -1 && b.0[1] <= -1);
            assert_eq!(t.get(2, &b), expect, "{b}");
            assert_eq!(t.get(0, &b) + t.get(1, &b), 0);
        }
    }

    #[test]
    fn principal_product_ideal() {
        let w = Window::new(vec![-2, -2], vec![2, 2]).unwrap();
        let t = local_cohomology_oracle(F, &[m("x1*x2", 2)], &MonomialIdeal::zero(2), &w, true).unwrap();
        for b in w.degrees() {
            let outside = b.0.iter().any(|&v| v < 0);
            assert_eq!(t.get(1, &b), usize::from(outside), "{b}");
            assert_eq!(t.get(0, &b), 0);
        }
    }

    #[test]
    fn torsion_module_lives_in_degree_zero() {
        let jx = MonomialIdeal::new(1, [m("x1", 1)]).unwrap();
        let w = Window::new(vec![-2], vec![2]).unwrap();
        let t = local_cohomology_oracle(F, &[m("x1", 1)], &jx, &w, true).unwrap();
        assert_eq!(t.get(0, &Multidegree(vec![0])), 1);
        assert_eq!(t.rows.len(), 1);
    }

    #[test]
    fn csv_layout() {
        let mut t = CohomologyTable::default();
        t.insert(2, &Multidegree(vec![-1, -1]), 1);
        t.insert(1, &Multidegree(vec![0, -1]), 1);
        t.insert(0, &Multidegree(vec![0, 0]), 0);
        assert_eq!(t.to_csv(2), "i,b1,b2,dim\n1,0,-1,1\n2,-1,-1,1\n");
    }
}
