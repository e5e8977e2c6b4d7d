//! Structural checks on a single multicomplex, shared by the `props2` task
//! and the randomized self-test.

use std::fmt;

use serde::Serialize;

use super::{build_dq, koszul_complex, Multicomplex, RegionSpec};
use crate::spectral::{check_generic_sequence, edge_map_check, GenericKind};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyFailure {
    pub property: String,
    pub detail: String,
}

impl fmt::Display for PropertyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.property, self.detail)
    }
}

fn fail(property: &str, detail: String) -> PropertyFailure {
    PropertyFailure { property: property.to_string(), detail }
}

/// `K` is exact in every shape up to `n` directions and `v_dim` copies.
pub fn check_koszul_exactness(mc: &Multicomplex) -> Result<Vec<PropertyFailure>> {
    let mut out = Vec::new();
    for n in 1..=mc.n() {
        let k = koszul_complex(mc.field(), n, 2)?;
        if !k.is_acyclic() {
            out.push(fail("koszul-exact", format!("Koszul complex on {n} directions has cohomology")));
        }
    }
    Ok(out)
}

/// Along the Koszul axis, `D^{•,q}` has cohomology only in degree 1 and
/// `Q^{•,q}` only in degree 0, both of dimension `dim C^q_I`.
pub fn check_dq_collapse(mc: &Multicomplex) -> Result<Vec<PropertyFailure>> {
    let pair = build_dq(mc)?;
    let interior = mc.restrict(&RegionSpec::interior_all())?;
    let mut out = Vec::new();
    for q in mc.points() {
        let c = interior.dim_at(&q);
        let mut base = vec![0];
        base.extend_from_slice(&q);
        for (name, line, live) in [("D", pair.d.line(0, &base)?, 1), ("Q", pair.q.line(0, &base)?, 0)] {
            for (p, h) in line.cohomology_dims() {
                let want = if p == live { c } else { 0 };
                if h != want {
                    out.push(fail(
                        "dq-collapse",
                        format!("H^{p}({name}^(•,{q:?})) has dimension {h}, expected {want}"),
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// `σ` is an involution that flips the flavor, keeps the multicomplex
/// valid, and leaves total cohomology unchanged.
pub fn check_sigma(mc: &Multicomplex) -> Result<Vec<PropertyFailure>> {
    let mut out = Vec::new();
    let s = mc.sigma();
    if s.sigma() != *mc {
        out.push(fail("sigma-involution", "σ∘σ differs from the identity".to_string()));
    }
    if s.flavor() != mc.flavor().toggled() {
        out.push(fail("sigma-involution", "σ did not toggle the flavor".to_string()));
    }
    if let Err(v) = s.validate() {
        out.push(fail("sigma-valid", format!("σ(C) is not a multicomplex: {v}")));
    }
    let (a, b) = (mc.totalize()?.cohomology_dims(), s.totalize()?.cohomology_dims());
    if a != b {
        out.push(fail("sigma-cohomology", format!("total cohomology {a:?} became {b:?} under σ")));
    }
    Ok(out)
}

/// The four generic spectral sequences converge to the expected abutments.
pub fn check_sequences(mc: &Multicomplex) -> Result<Vec<PropertyFailure>> {
    let mut out = Vec::new();
    for kind in GenericKind::ALL {
        let rep = check_generic_sequence(mc, kind)?;
        if !rep.holds() {
            out.push(fail(
                "abutment-accounting",
                format!(
                    "{kind:?}: {} first-page and {} abutment mismatches, converges {}, structure {}",
                    rep.e1_mismatches.len(),
                    rep.abutment_mismatches.len(),
                    rep.converges,
                    rep.structure_holds
                ),
            ));
        }
    }
    Ok(out)
}

/// The edge differential of the truncated `Q` sequence has the rank of the
/// composite map out of `C^0`.
pub fn check_edge_map(mc: &Multicomplex) -> Result<Vec<PropertyFailure>> {
    if mc.n() < 2 {
        return Ok(Vec::new());
    }
    let rep = edge_map_check(mc)?;
    if rep.holds() {
        return Ok(Vec::new());
    }
    Ok(vec![fail("edge-map", format!("{rep:?}"))])
}

/// Every check above. The multicomplex must be valid and supported in `ℕⁿ`.
pub fn check_all(mc: &Multicomplex) -> Result<Vec<PropertyFailure>> {
    if let Err(v) = mc.validate() {
        return Ok(vec![fail("valid", v.to_string())]);
    }
    let mut out = check_koszul_exactness(mc)?;
    out.extend(check_dq_collapse(mc)?);
    out.extend(check_sigma(mc)?);
    out.extend(check_sequences(mc)?);
    out.extend(check_edge_map(mc)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::Field;
    use crate::multicomplex::random::random_tensor_multicomplex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_tensors_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=3 {
            let mc = random_tensor_multicomplex(&mut rng, Field::Prime(101), n, 3).unwrap();
            assert_eq!(check_all(&mc).unwrap(), vec![]);
        }
    }

    #[test]
    fn broken_commutation_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        loop {
            let mut mc = random_tensor_multicomplex(&mut rng, Field::Prime(101), 2, 2).unwrap();
            let Some(q) = mc.points().find(|q| {
                let mut t = q.clone();
                t[0] += 1;
                !mc.diff(&t, 1).mul(&mc.diff(q, 0)).unwrap().is_zero()
            }) else {
                continue;
            };
            let d = mc.diff(&q, 0).scale_i64(-1);
            mc.set_diff(&q, 0, d).unwrap();
            let fails = check_all(&mc).unwrap();
            assert_eq!(fails.len(), 1);
            assert_eq!(fails[0].property, "valid");
            break;
        }
    }
}
