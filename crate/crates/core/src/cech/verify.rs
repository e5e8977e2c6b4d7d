//! Degreewise comparisons between the multicomplex side (augmented interior
//! complexes of the Čech multicomplex) and the product-sequence Čech
//! complexes computed by the oracle.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{cech_multicomplex, par_degrees, CechProblem, DegreeOracle, OracleKind};
use crate::exactlinalg::Matrix;
use crate::grading::{Monomial, Multidegree};
use crate::multicomplex::{augment_interior, mask_indices, CochainComplex, RegionSpec};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub check: String,
    pub degree: Multidegree,
    pub index: i64,
    pub multicomplex_side: usize,
    pub oracle_side: usize,
}

/// Outcome of the product-versus-interior comparisons over a window.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProductReport {
    pub degrees_checked: usize,
    pub comparisons: usize,
    pub mismatches: Vec<Mismatch>,
    /// Degrees where the four-term sequence `0 → H^{n−1} → M → D → H^n → 0`
    /// failed its dimension count.
    pub exact_sequence_failures: Vec<Multidegree>,
    /// Whether every product generator localizes `M` to zero, in which case
    /// both complexes must vanish in positive degrees.
    pub torsion_case: bool,
    pub torsion_failures: Vec<Multidegree>,
}

impl ProductReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty() && self.exact_sequence_failures.is_empty() && self.torsion_failures.is_empty()
    }

    fn absorb(&mut self, other: ProductReport) {
        self.degrees_checked += other.degrees_checked;
        self.comparisons += other.comparisons;
        self.mismatches.extend(other.mismatches);
        self.exact_sequence_failures.extend(other.exact_sequence_failures);
        self.torsion_failures.extend(other.torsion_failures);
    }
}

fn cohomology_map(c: &CochainComplex) -> BTreeMap<i64, usize> {
    c.cohomology_dims().into_iter().filter(|&(_, d)| d > 0).collect()
}

/// Every product generator `g` has `M_g = 0`: some generator of `J` is
/// supported inside `supp(g)`.
fn torsion_case(problem: &CechProblem) -> Result<bool> {
    let prods = problem.product_sequence(problem.full_set())?;
    Ok(prods
        .iter()
        .all(|g| problem.ideal.generators().iter().any(|h| h.support().is_subset(&g.support()))))
}

/// All comparisons at one multidegree:
/// `H^{i+n−1}(⁺C_I) = H^i` of the product Čech complex; for every nonempty
/// group subset `S` of size `p`, `H^{i+p−1}(C_{I_S}) = H^i` of the truncated
/// product Čech complex on `S`; equal `D` dimensions; the four-term
/// sequence count; and the torsion case.
pub fn verify_products_at(problem: &CechProblem, b: &Multidegree) -> Result<ProductReport> {
    let n = problem.n();
    let all = problem.full_set();
    let mc = cech_multicomplex(problem, b, false)?;
    let mut oracle = DegreeOracle::new(problem, b);
    let mut rep = ProductReport { degrees_checked: 1, ..Default::default() };
    let compare = |rep: &mut ProductReport, check: &str, index: i64, lhs: usize, rhs: usize| {
        rep.comparisons += 1;
        if lhs != rhs {
            rep.mismatches.push(Mismatch {
                check: check.to_string(),
                degree: b.clone(),
                index,
                multicomplex_side: lhs,
                oracle_side: rhs,
            });
        }
    };

    let full: Vec<usize> = (0..n).collect();
    let aug = augment_interior(&mc, &full)?;
    let aug_h = cohomology_map(&aug);
    let prod_len = problem.product_sequence(all)?.len() as i64;
    let shift = n as i64 - 1;
    let mut indices: Vec<i64> = (0..=prod_len).collect();
    indices.extend(aug_h.keys().map(|k| k - shift));
    indices.sort_unstable();
    indices.dedup();
    for &i in &indices {
        let lhs = aug_h.get(&(i + shift)).copied().unwrap_or(0);
        let rhs = oracle.h(OracleKind::Product, all, i);
        compare(&mut rep, "augmented", i, lhs, rhs);
    }

    for set in 1..=all {
        let p = set.count_ones() as i64;
        let interior = mc.restrict(&RegionSpec::interior(&mask_indices(set)))?.totalize()?;
        let ih = cohomology_map(&interior);
        let len = problem.product_sequence(set)?.len() as i64;
        let mut idx: Vec<i64> = (1..=len).collect();
        idx.extend(ih.keys().map(|k| k - p + 1));
        idx.sort_unstable();
        idx.dedup();
        for i in idx {
            let lhs = ih.get(&(i + p - 1)).copied().unwrap_or(0);
            let rhs = oracle.h(OracleKind::TruncatedProduct, set, i);
            compare(&mut rep, &format!("truncated{:?}", mask_indices(set).iter().map(|i| i + 1).collect::<Vec<_>>()), i, lhs, rhs);
        }
        if set == all {
            let d_multi = ih.get(&(n as i64)).copied().unwrap_or(0);
            let d_prod = oracle.h(OracleKind::TruncatedProduct, all, 1);
            compare(&mut rep, "D", 0, d_multi, d_prod);
            let h_low = aug_h.get(&shift).copied().unwrap_or(0) as i64;
            let h_top = aug_h.get(&(n as i64)).copied().unwrap_or(0) as i64;
            let m_b = problem.module_piece(b) as i64;
            if h_low - m_b + d_multi as i64 - h_top != 0 {
                rep.exact_sequence_failures.push(b.clone());
            }
        }
    }

    rep.torsion_case = torsion_case(problem)?;
    if rep.torsion_case {
        let aug_positive = aug.degrees().filter(|&k| k > shift).any(|k| aug.dim(k) > 0);
        let prod_positive = (1..=prod_len).any(|t| oracle.h(OracleKind::Product, all, t) > 0);
        let slots_positive = {
            let seq = problem.product_sequence(all)?;
            let c = super::cech_complex(problem.field, &seq, &problem.ideal, b, false)?;
            (1..=prod_len).any(|t| c.dim(t) > 0)
        };
        if aug_positive || prod_positive || slots_positive {
            rep.torsion_failures.push(b.clone());
        }
    }
    Ok(rep)
}

/// [`verify_products_at`] over the whole window, in parallel.
pub fn verify_products(problem: &CechProblem, jobs: usize) -> Result<ProductReport> {
    let parts = par_degrees(problem, jobs, |b| verify_products_at(problem, b))?;
    let mut rep = ProductReport { torsion_case: torsion_case(problem)?, ..Default::default() };
    for (_, part) in parts {
        rep.absorb(part);
    }
    Ok(rep)
}

/// A cohomology class that no admissible power of a product generator was
/// seen to annihilate inside the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnresolvedClass {
    pub degree: Multidegree,
    pub index: i64,
    pub class: usize,
    pub generator: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AnnihilationReport {
    pub classes: usize,
    /// `(class, generator)` pairs shown to be annihilated.
    pub annihilated: usize,
    /// Pairs not seen to be annihilated by a power inside the window and
    /// the bound. Window-limited, so inconclusive rather than failed.
    pub inconclusive: Vec<UnresolvedClass>,
}

fn label_positions(c: &CochainComplex, k: i64) -> HashMap<String, usize> {
    c.basis(k)
        .map(|b| b.labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect())
        .unwrap_or_default()
}

/// Multiplication by a monomial between the augmented complexes at `b` and
/// `b + deg`: each basis monomial maps to the equally labelled one.
fn multiply(src: &CochainComplex, dst: &CochainComplex, k: i64, vectors: &Matrix) -> Matrix {
    let pos = label_positions(dst, k);
    let labels = src.basis(k).map(|b| b.labels.clone()).unwrap_or_default();
    let mut sel = Matrix::zeros(src.field(), dst.dim(k), src.dim(k));
    for (c, l) in labels.iter().enumerate() {
        if let Some(&r) = pos.get(l) {
            sel.set_i64(r, c, 1);
        }
    }
    vectors.mul(&sel.transpose()).expect("label map shapes agree")
}

/// Checks that every class of `H(⁺C_I)` at each window degree is killed by
/// some power `g^N`, `1 ≤ N ≤ bound`, of every product generator `g`.
pub fn verify_annihilation(problem: &CechProblem, bound: u32, jobs: usize) -> Result<AnnihilationReport> {
    if bound == 0 {
        return Err(Error::input("the exponent bound must be at least 1"));
    }
    let gens = problem.product_sequence(problem.full_set())?;
    let width: Vec<i64> = problem.window.lo.iter().zip(&problem.window.hi).map(|(l, h)| h - l).collect();
    if let Some(g) = gens.iter().find(|g| g.0.iter().zip(&width).any(|(&e, &w)| i64::from(e) > w)) {
        return Err(Error::input(format!("window is too small to multiply by {g} even once")));
    }
    let full: Vec<usize> = (0..problem.n()).collect();
    let parts = par_degrees(problem, jobs, |b| {
        let aug = augment_interior(&cech_multicomplex(problem, b, false)?, &full)?;
        let mut rep = AnnihilationReport::default();
        let mut targets: HashMap<Multidegree, CochainComplex> = HashMap::new();
        for k in aug.degrees() {
            let bnd = aug.boundaries(k);
            let reps = aug.cycles(k).quotient(&bnd)?;
            for class in 0..reps.rows() {
                rep.classes += 1;
                let v = reps.select_rows(&[class]);
                for g in &gens {
                    let verdict = kill_power(problem, &aug, k, &v, g, b, bound, &full, &mut targets)?;
                    let unresolved = || UnresolvedClass {
                        degree: b.clone(),
                        index: k,
                        class,
                        generator: g.to_string(),
                    };
                    if verdict {
                        rep.annihilated += 1;
                    } else {
                        rep.inconclusive.push(unresolved());
                    }
                }
            }
        }
        Ok(rep)
    })?;
    let mut rep = AnnihilationReport::default();
    for (_, part) in parts {
        rep.classes += part.classes;
        rep.annihilated += part.annihilated;
        rep.inconclusive.extend(part.inconclusive);
    }
    Ok(rep)
}

/// True when some power `g^N` with `N ≤ bound` inside the window kills the
/// class.
#[allow(clippy::too_many_arguments)]
fn kill_power(
    problem: &CechProblem,
    aug: &CochainComplex,
    k: i64,
    v: &Matrix,
    g: &Monomial,
    b: &Multidegree,
    bound: u32,
    full: &[usize],
    targets: &mut HashMap<Multidegree, CochainComplex>,
) -> Result<bool> {
    for power in 1..=bound {
        let t = b.shifted(g, power);
        if !problem.window.contains(&t) {
            return Ok(false);
        }
        if !targets.contains_key(&t) {
            let c = augment_interior(&cech_multicomplex(problem, &t, false)?, full)?;
            targets.insert(t.clone(), c);
        }
        let dst = &targets[&t];
        let image = multiply(aug, dst, k, v);
        if image.cols() == 0 || dst.boundaries(k).contains_vectors(&image)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::Field;
    use crate::grading::MonomialIdeal;

    const F: Field = Field::Prime(65537);

    fn m(t: &str, v: usize) -> Monomial {
        Monomial::parse(t, v).unwrap()
    }

    fn problem(vars: usize, groups: &[&[&str]], j: &[&str], window: i64) -> CechProblem {
        let groups = groups.iter().map(|g| g.iter().map(|t| m(t, vars)).collect()).collect();
        let ideal = MonomialIdeal::new(vars, j.iter().map(|t| m(t, vars))).unwrap();
        let w = super::super::Window::new(vec![-window; vars], vec![window; vars]).unwrap();
        CechProblem::new(F, vars, ideal, groups, Some(w)).unwrap()
    }

    #[test]
    fn two_lines_agree_everywhere() {
        let p = problem(2, &[&["x1"], &["x2"]], &[], 3);
        let rep = verify_products(&p, 1).unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert_eq!(rep.degrees_checked, 49);
        let at = verify_products_at(&p, &Multidegree(vec![0, -1])).unwrap();
        assert!(at.holds());
    }

    #[test]
    fn single_group_is_identity() {
        let p = problem(2, &[&["x1", "x2^2"]], &["x1*x2"], 2);
        assert!(verify_products(&p, 1).unwrap().holds());
    }

    #[test]
    fn three_pairwise_groups() {
        let p = problem(3, &[&["x1", "x2"], &["x2", "x3"], &["x1", "x3"]], &[], 2);
        let rep = verify_products(&p, 0).unwrap();
        assert!(rep.holds(), "{:?}", &rep.mismatches[..rep.mismatches.len().min(5)]);
    }

    #[test]
    fn torsion_module() {
        let p = problem(2, &[&["x1"], &["x2"]], &["x1"], 2);
        let rep = verify_products(&p, 1).unwrap();
        assert!(rep.torsion_case);
        assert!(rep.holds());
    }

    #[test]
    fn product_powers_kill_classes() {
        let p = problem(2, &[&["x1"], &["x2"]], &[], 3);
        let rep = verify_annihilation(&p, 3, 1).unwrap();
        assert!(rep.annihilated > 0);
        // Unresolved classes are those whose shifts leave the window first.
        let g = Monomial::parse("x1*x2", 2).unwrap();
        assert!(!rep.inconclusive.is_empty());
        assert!(rep.inconclusive.iter().all(|c| !p.window.contains(&c.degree.shifted(&g, 3))), "{:?}", rep.inconclusive);
        let small = problem(2, &[&["x1^3"]], &[], 1);
        assert!(verify_annihilation(&small, 2, 1).is_err());
    }
}
