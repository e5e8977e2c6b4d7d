//! The four Mayer–Vietoris spectral sequences of a Čech problem, checked
//! degreewise against the oracle: first pages against sums of local
//! cohomology of sum or product ideals, abutments against the local
//! cohomology of the product or sum ideal.
//!
//! Engine cells are indexed `(p, q)` with `p + q` the total degree of the
//! filtered complex. The local cohomology index of an `E_1^{p,q}` cell is
//! `q + index_shift`, see [`Variant::index_shift`].

mod infinity;
mod les;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use infinity::{infinity_filtration_at, infinity_filtration_report, InfinityDegree, InfinityReport};
pub use les::{mv_les, mv_les_at, LesDegree, LesReport};

use crate::cech::{cech_multicomplex, par_degrees, CechProblem, DegreeOracle, OracleKind};
use crate::grading::Multidegree;
use crate::multicomplex::{build_dq, subsets_of_size, Multicomplex, RegionSpec};
use crate::spectral::{truncated_q_filtration, q_filtration, xp_filtration, FilteredComplex, Page, SpectralSequence};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// Truncated `Q` on the Čech multicomplex: sum ideals ⇒ product ideal.
    OneA,
    /// `Q` on the punctured multicomplex: truncated sums ⇒ truncated product.
    OneB,
    /// `X'_p` on the hypercube square: product ideals ⇒ sum ideal.
    TwoA,
    /// `X_p` on the punctured multicomplex: truncated products ⇒ truncated sum.
    TwoB,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::OneA, Variant::OneB, Variant::TwoA, Variant::TwoB];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::OneA => "1a",
            Variant::OneB => "1b",
            Variant::TwoA => "2a",
            Variant::TwoB => "2b",
        }
    }

    /// Offset from the engine's `q` to the local cohomology index of the
    /// first page (`Ȟ^i` for the truncated variants).
    pub fn index_shift(self) -> i64 {
        match self {
            Variant::OneA | Variant::TwoB => 0,
            Variant::OneB => -1,
            Variant::TwoA => 1,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::input(format!("unknown spectral sequence variant '{s}'")))
    }
}

impl Serialize for Variant {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// `(p, q, expected, computed)`.
pub type CellMismatch = (i64, i64, usize, usize);

/// One variant at one multidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariantRun {
    pub variant: Variant,
    pub degree: Multidegree,
    /// Pages `E_0 … E_R` as requested.
    pub pages: Vec<Page>,
    pub e1: BTreeMap<(i64, i64), usize>,
    pub e1_mismatches: Vec<CellMismatch>,
    /// `(k, expected, computed)` on the cohomology of the total complex.
    pub abutment_mismatches: Vec<(i64, usize, usize)>,
    /// `(k, Σ E_∞ on the antidiagonal, oracle abutment)` where they differ.
    pub convergence_mismatches: Vec<(i64, usize, usize)>,
    /// `E_∞` matched the graded pieces of the induced filtration.
    pub filtration_matches: bool,
    /// `d_r ∘ d_r = 0`, `E_{r+1} = H(E_r)`, and constancy past the width.
    pub structure_holds: bool,
    pub degenerates_at: i64,
    /// Chain-level Koszul-direction maps of `Q` have entries in {−1, 0, 1}
    /// (variants 1a and 1b only).
    pub signed_unit_maps: Option<bool>,
    pub width: i64,
}

impl VariantRun {
    pub fn holds(&self) -> bool {
        self.e1_mismatches.is_empty()
            && self.abutment_mismatches.is_empty()
            && self.convergence_mismatches.is_empty()
            && self.filtration_matches
            && self.structure_holds
            && self.signed_unit_maps != Some(false)
    }

    /// First page with the local cohomology index in place of `q`.
    pub fn e1_by_cohomology_index(&self) -> BTreeMap<(i64, i64), usize> {
        self.e1.iter().map(|(&(p, q), &d)| ((p, q + self.variant.index_shift()), d)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let e1: Vec<_> = self
            .e1_by_cohomology_index()
            .iter()
            .map(|(&(p, i), &d)| serde_json::json!({"p": p, "i": i, "dim": d}))
            .collect();
        serde_json::json!({
            "variant": self.variant,
            "degree": self.degree.0,
            "pages": self.pages.iter().map(Page::to_json).collect::<Vec<_>>(),
            "e1_cohomology_index": e1,
            "e1_check": {
                "pass": self.e1_mismatches.is_empty(),
                "mismatches": self.e1_mismatches,
            },
            "abutment_check": {
                "pass": self.abutment_mismatches.is_empty() && self.convergence_mismatches.is_empty() && self.filtration_matches,
                "mismatches": self.abutment_mismatches,
                "convergence_mismatches": self.convergence_mismatches,
                "filtration_matches": self.filtration_matches,
            },
            "structure_check": self.structure_holds,
            "degenerates_at": self.degenerates_at,
        })
    }
}

type Expectations = (BTreeMap<(i64, i64), usize>, BTreeMap<i64, usize>);

/// Expected first page and abutment for a variant from the oracle.
fn expectations(problem: &CechProblem, variant: Variant, oracle: &mut DegreeOracle<'_>) -> Result<Expectations> {
    let n = problem.n();
    let all = problem.full_set();
    let max_t = problem.groups.iter().map(Vec::len).product::<usize>().max(problem.groups.iter().map(Vec::len).sum())
        as i64
        + 1;
    let mut e1: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut add = |key: (i64, i64), d: usize| {
        if d > 0 {
            *e1.entry(key).or_default() += d;
        }
    };
    let mut abut = BTreeMap::new();
    match variant {
        Variant::OneA | Variant::OneB => {
            let (kind, top) = if variant == Variant::OneA {
                (OracleKind::Sum, n - 1)
            } else {
                (OracleKind::TruncatedSum, n)
            };
            for c in 0..=top {
                for set in subsets_of_size(n, c) {
                    let comp = all & !set;
                    for t in 0..=max_t {
                        add((c as i64, t), oracle.h(kind, comp, t));
                    }
                }
            }
            let kind = if variant == Variant::OneA { OracleKind::Product } else { OracleKind::TruncatedProduct };
            for t in 0..=max_t {
                let d = oracle.h(kind, all, t);
                if d > 0 {
                    abut.insert(t + n as i64 - 1, d);
                }
            }
        }
        Variant::TwoA | Variant::TwoB => {
            let kind = if variant == Variant::TwoA { OracleKind::Product } else { OracleKind::TruncatedProduct };
            for p in 1..=n {
                for set in subsets_of_size(n, p) {
                    for t in 0..=max_t {
                        // H^k of the layer with k − p + 1 = t, so q = t − 1.
                        add((p as i64, t - 1), oracle.h(kind, set, t));
                    }
                }
            }
            let kind = if variant == Variant::TwoA { OracleKind::Sum } else { OracleKind::TruncatedSum };
            for t in 0..=max_t {
                let d = oracle.h(kind, all, t);
                if d > 0 {
                    abut.insert(t, d);
                }
            }
        }
    }
    Ok((e1, abut))
}

/// The filtered complex of a variant built from the Čech multicomplex at
/// one degree (unpunctured).
pub fn variant_filtration(mc: &Multicomplex, variant: Variant) -> Result<FilteredComplex> {
    match variant {
        Variant::OneA => truncated_q_filtration(&build_dq(mc)?.q),
        Variant::OneB => q_filtration(&build_dq(&mc.restrict(&RegionSpec::punctured_all())?)?.q),
        Variant::TwoA => xp_filtration(mc, true),
        Variant::TwoB => xp_filtration(&mc.restrict(&RegionSpec::punctured_all())?, false),
    }
}

fn diff_maps(expected: &BTreeMap<i64, usize>, got: &BTreeMap<i64, usize>) -> Vec<(i64, usize, usize)> {
    let mut keys: Vec<i64> = expected.keys().chain(got.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .filter_map(|k| {
            let (e, g) = (expected.get(&k).copied().unwrap_or(0), got.get(&k).copied().unwrap_or(0));
            (e != g).then_some((k, e, g))
        })
        .collect()
}

/// Runs one variant at `b` on a prebuilt multicomplex, sharing `oracle`.
pub fn run_with(
    problem: &CechProblem,
    mc: &Multicomplex,
    variant: Variant,
    pages: i64,
    oracle: &mut DegreeOracle<'_>,
) -> Result<VariantRun> {
    let fc = variant_filtration(mc, variant)?;
    let (expected_e1, expected_h) = expectations(problem, variant, oracle)?;
    let mut ss = SpectralSequence::new(&fc);
    let structure = ss.structure(pages.max(1))?;
    let e1 = structure.pages[1].cells.clone();
    let mut keys: Vec<(i64, i64)> = expected_e1.keys().chain(e1.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let e1_mismatches = keys
        .into_iter()
        .filter_map(|(p, q)| {
            let (e, g) = (expected_e1.get(&(p, q)).copied().unwrap_or(0), e1.get(&(p, q)).copied().unwrap_or(0));
            (e != g).then_some((p, q, e, g))
        })
        .collect();
    let conv = ss.converge()?;
    let got_h: BTreeMap<i64, usize> = conv.abutment.h.iter().filter(|(_, &d)| d > 0).map(|(&k, &d)| (k, d)).collect();
    let abutment_mismatches = diff_maps(&expected_h, &got_h);
    let infinity: BTreeMap<i64, usize> = {
        let mut m = BTreeMap::new();
        for (&(p, q), &d) in &conv.infinity.cells {
            *m.entry(p + q).or_default() += d;
        }
        m
    };
    let convergence_mismatches = diff_maps(&infinity, &expected_h);
    let signed_unit_maps = match variant {
        Variant::OneA | Variant::OneB => {
            let base = if variant == Variant::OneA { mc.clone() } else { mc.restrict(&RegionSpec::punctured_all())? };
            let q = build_dq(&base)?.q;
            let ok = q.points().all(|pt| q.diff(&pt, 0).entries_are_signed_units());
            Some(ok)
        }
        _ => None,
    };
    let shown = pages.max(1) as usize;
    Ok(VariantRun {
        variant,
        degree: oracle.degree().clone(),
        pages: structure.pages[..=shown.min(structure.pages.len() - 1)].to_vec(),
        e1,
        e1_mismatches,
        abutment_mismatches,
        convergence_mismatches,
        filtration_matches: conv.holds(),
        structure_holds: structure.holds(),
        degenerates_at: structure.degenerates_at,
        signed_unit_maps,
        width: fc.width(),
    })
}

/// All requested variants at one degree, sharing the multicomplex and the
/// oracle cache.
pub fn run_at(problem: &CechProblem, b: &Multidegree, variants: &[Variant], pages: i64) -> Result<Vec<VariantRun>> {
    let mc = cech_multicomplex(problem, b, false)?;
    let mut oracle = DegreeOracle::new(problem, b);
    variants.iter().map(|&v| run_with(problem, &mc, v, pages, &mut oracle)).collect()
}

/// [`run_at`] over the window in parallel, ordered by degree.
pub fn run(problem: &CechProblem, variants: &[Variant], pages: i64, jobs: usize) -> Result<Vec<VariantRun>> {
    let parts = par_degrees(problem, jobs, |b| run_at(problem, b, variants, pages))?;
    Ok(parts.into_iter().flat_map(|(_, runs)| runs).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::Window;
    use crate::exactlinalg::Field;
    use crate::grading::{Monomial, MonomialIdeal};

    const F: Field = Field::Prime(65537);

    fn problem(vars: usize, groups: &[&[&str]], j: &[&str], r: i64) -> CechProblem {
        let m = |t: &&str| Monomial::parse(t, vars).unwrap();
        let groups = groups.iter().map(|g| g.iter().map(m).collect()).collect();
        let ideal = MonomialIdeal::new(vars, j.iter().map(m)).unwrap();
        CechProblem::new(F, vars, ideal, groups, Some(Window::new(vec![-r; vars], vec![r; vars]).unwrap())).unwrap()
    }

    #[test]
    fn two_lines_hypercube_variant_at_minus_one() {
        let p = problem(2, &[&["x1"], &["x2"]], &[], 2);
        let runs = run_at(&p, &Multidegree(vec![-1, -1]), &[Variant::TwoA], 2).unwrap();
        let r = &runs[0];
        assert!(r.holds(), "{r:?}");
        let e1 = r.e1_by_cohomology_index();
        assert_eq!(e1.get(&(1, 1)).copied().unwrap_or(0), 0);
        assert_eq!(e1.get(&(2, 1)).copied(), Some(1));
    }

    #[test]
    fn all_variants_on_small_problems() {
        for p in [
            problem(2, &[&["x1"], &["x2"]], &[], 2),
            problem(2, &[&["x1", "x2"], &["x1^2"]], &["x1*x2^2"], 2),
            problem(1, &[&["x1"]], &[], 2),
        ] {
            for r in run(&p, &Variant::ALL, 3, 1).unwrap() {
                assert!(r.holds(), "{} at {}: {r:?}", r.variant, r.degree);
            }
        }
    }

    #[test]
    fn one_group_degenerates_at_first_page() {
        let p = problem(2, &[&["x1", "x2"]], &[], 2);
        for r in run(&p, &Variant::ALL, 2, 1).unwrap() {
            assert!(r.holds());
            assert_eq!(r.degenerates_at, 1);
            assert!(r.pages[1].cells.iter().all(|(&(p, q), &d)| r.pages[2].dim(p, q) == d));
        }
    }

    #[test]
    fn three_ideals_degenerate_by_page_three() {
        let p = problem(3, &[&["x1"], &["x2"], &["x3"]], &[], 1);
        for r in run(&p, &[Variant::OneA], 4, 0).unwrap() {
            assert!(r.holds());
            assert!(r.degenerates_at <= 3);
        }
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.as_str().parse::<Variant>().unwrap(), v);
        }
        assert!("3c".parse::<Variant>().is_err());
    }
}
