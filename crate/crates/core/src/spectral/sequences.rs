//! The four convergent spectral sequences attached to a multicomplex `C`
//! supported in `ℕⁿ`, each checked against direct computations: first page
//! against cohomology of face, interior or augmented interior complexes,
//! abutment against the cohomology of the target complex.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{q_filtration, truncated_q_filtration, xp_filtration, FilteredComplex, SpectralSequence};
use crate::multicomplex::{
    augment_interior, build_dq, mask_indices, subsets_of_size, CochainComplex, Multicomplex, RegionKind, RegionSpec,
};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GenericKind {
    /// Columns of `Q`: `E_1^{p,q} = ⊕_{|I|=p} H^q(C_{F*_I}) ⇒ H(C_I)`.
    Interior,
    /// Columns `p < n` of `Q`: same first page, abutting to `H(⁺C_I)`.
    AugmentedInterior,
    /// `X_p` on `C_P`: `E_1^{p,q} = ⊕_{|S|=p} H^{p+q}(C_{I_S}) ⇒ H(C_P)`.
    Punctured,
    /// `X'_p` on `◻C`: `E_1^{p,q} = ⊕_{|S|=p} H^{p+q}(⁺C_{I_S}) ⇒ H(C)`.
    Hypercube,
}

impl GenericKind {
    pub const ALL: [GenericKind; 4] =
        [GenericKind::Interior, GenericKind::AugmentedInterior, GenericKind::Punctured, GenericKind::Hypercube];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericReport {
    pub kind: GenericKind,
    /// `(p, q, expected, computed)` for every disagreeing first-page cell.
    pub e1_mismatches: Vec<(i64, i64, usize, usize)>,
    /// `(k, expected, computed)` for every disagreeing abutment degree.
    pub abutment_mismatches: Vec<(i64, usize, usize)>,
    pub converges: bool,
    pub structure_holds: bool,
    pub degenerates_at: i64,
}

impl GenericReport {
    pub fn holds(&self) -> bool {
        self.e1_mismatches.is_empty() && self.abutment_mismatches.is_empty() && self.converges && self.structure_holds
    }
}

fn nonzero_cohomology(c: &CochainComplex) -> BTreeMap<i64, usize> {
    c.cohomology_dims().into_iter().filter(|&(_, d)| d > 0).collect()
}

fn face_complement(mc: &Multicomplex, set: u32) -> Result<CochainComplex> {
    mc.restrict(&RegionSpec::starred(RegionKind::Face, &mask_indices(set)))?.totalize()
}

/// Filtered complex of the given kind together with the expected first
/// page (nonzero cells) and abutment (nonzero degrees).
#[allow(clippy::type_complexity)]
pub(crate) fn generic_setup(
    mc: &Multicomplex,
    kind: GenericKind,
) -> Result<(FilteredComplex, BTreeMap<(i64, i64), usize>, BTreeMap<i64, usize>)> {
    let n = mc.n();
    let mut e1: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut add = |p: i64, q: i64, d: usize| {
        if d > 0 {
            *e1.entry((p, q)).or_default() += d;
        }
    };
    let (fc, target) = match kind {
        GenericKind::Interior | GenericKind::AugmentedInterior => {
            let pair = build_dq(mc)?;
            let top = if kind == GenericKind::Interior { n } else { n - 1 };
            for p in 0..=top {
                for set in subsets_of_size(n, p) {
                    for (q, d) in face_complement(mc, set)?.cohomology_dims() {
                        add(p as i64, q, d);
                    }
                }
            }
            if kind == GenericKind::Interior {
                let target = mc.restrict(&RegionSpec::interior_all())?.totalize()?;
                (q_filtration(&pair.q)?, target)
            } else {
                let all: Vec<usize> = (0..n).collect();
                (truncated_q_filtration(&pair.q)?, augment_interior(mc, &all)?)
            }
        }
        GenericKind::Punctured => {
            let punctured = mc.restrict(&RegionSpec::punctured_all())?;
            for p in 1..=n {
                for set in subsets_of_size(n, p) {
                    let c = mc.restrict(&RegionSpec::interior(&mask_indices(set)))?.totalize()?;
                    for (k, d) in c.cohomology_dims() {
                        add(p as i64, k - p as i64, d);
                    }
                }
            }
            (xp_filtration(&punctured, false)?, punctured.totalize()?)
        }
        GenericKind::Hypercube => {
            for p in 1..=n {
                for set in subsets_of_size(n, p) {
                    let c = augment_interior(mc, &mask_indices(set))?;
                    for (k, d) in c.cohomology_dims() {
                        add(p as i64, k - p as i64, d);
                    }
                }
            }
            (xp_filtration(mc, true)?, mc.totalize()?)
        }
    };
    Ok((fc, e1, nonzero_cohomology(&target)))
}

/// Builds the spectral sequence of the given kind on `mc` and compares its
/// first page and abutment with direct computations.
pub fn check_generic_sequence(mc: &Multicomplex, kind: GenericKind) -> Result<GenericReport> {
    let (fc, expected_e1, expected_h) = generic_setup(mc, kind)?;
    let mut ss = SpectralSequence::new(&fc);
    let e1 = ss.page(1)?;
    let mut e1_mismatches = Vec::new();
    let mut keys: Vec<(i64, i64)> = expected_e1.keys().copied().collect();
    keys.extend(e1.cells.keys().copied());
    keys.sort_unstable();
    keys.dedup();
    for (p, q) in keys {
        let want = expected_e1.get(&(p, q)).copied().unwrap_or(0);
        let got = e1.dim(p, q);
        if want != got {
            e1_mismatches.push((p, q, want, got));
        }
    }
    let conv = ss.converge()?;
    let got_h: BTreeMap<i64, usize> = conv.abutment.h.iter().filter(|(_, &d)| d > 0).map(|(&k, &d)| (k, d)).collect();
    let mut abutment_mismatches = Vec::new();
    let mut degs: Vec<i64> = expected_h.keys().chain(got_h.keys()).copied().collect();
    degs.sort_unstable();
    degs.dedup();
    for k in degs {
        let want = expected_h.get(&k).copied().unwrap_or(0);
        let got = got_h.get(&k).copied().unwrap_or(0);
        if want != got {
            abutment_mismatches.push((k, want, got));
        }
    }
    let structure = ss.structure(fc.width() + 1)?;
    Ok(GenericReport {
        kind,
        e1_mismatches,
        abutment_mismatches,
        converges: conv.holds(),
        structure_holds: structure.holds(),
        degenerates_at: structure.degenerates_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::{Field, Matrix};
    use crate::multicomplex::random::random_tensor_multicomplex;
    use crate::multicomplex::tensor_product;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const F: Field = Field::Prime(65537);

    #[test]
    fn identity_square_all_kinds() {
        let l = CochainComplex::from_maps(F, 0, &[1, 1], vec![Matrix::identity(F, 1)]).unwrap();
        let mc = tensor_product(&[l.clone(), l]).unwrap();
        for kind in GenericKind::ALL {
            let rep = check_generic_sequence(&mc, kind).unwrap();
            assert!(rep.holds(), "{rep:?}");
        }
    }

    #[test]
    fn random_tensors_all_kinds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..12 {
            let n = 1 + (rand::Rng::gen_range(&mut rng, 0..3));
            let mc = random_tensor_multicomplex(&mut rng, F, n, 3).unwrap();
            for kind in GenericKind::ALL {
                let rep = check_generic_sequence(&mc, kind).unwrap();
                assert!(rep.holds(), "{kind:?} {rep:?}\n{}", mc.dump_text());
            }
        }
    }
}
