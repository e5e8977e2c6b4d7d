use super::region::{mask_indices, subsets_of_size};
use super::{Basis, CochainComplex, Entry, Flavor, Multicomplex};
use crate::exactlinalg::{Field, Matrix};
use crate::{Error, Result};

/// `(-1)^{#{i ∈ I : i < j}}` for the wedge `e_I ∧ e_j` reordered to `e_{I∪j}`.
pub fn wedge_sign(set: u32, j: usize) -> i64 {
    if (set & ((1u32 << j) - 1)).count_ones() % 2 == 1 {
        -1
    } else {
        1
    }
}

/// The Koszul complex `K^•(1,…,1; V)` on `n` units with coefficients in a
/// space of dimension `v_dim`: degree `p` is `⊕_{|I|=p} V e_I`.
pub fn koszul_complex(field: Field, n: usize, v_dim: usize) -> Result<CochainComplex> {
    let layers: Vec<Vec<u32>> = (0..=n).map(|p| subsets_of_size(n, p)).collect();
    let spaces: Vec<Basis> = layers
        .iter()
        .map(|subs| {
            Basis::plain(
                subs.iter()
                    .flat_map(|&s| (0..v_dim).map(move |k| format!("e{:?}:v{k}", mask_indices(s))))
                    .collect(),
            )
        })
        .collect();
    let mut diffs = Vec::with_capacity(n + 1);
    for p in 0..=n {
        let rows = layers.get(p + 1).map_or(0, |l| l.len() * v_dim);
        let mut d = Matrix::zeros(field, rows, layers[p].len() * v_dim);
        if p < n {
            for (a, &s) in layers[p].iter().enumerate() {
                for j in (0..n).filter(|j| s >> j & 1 == 0) {
                    let t = s | 1 << j;
                    let b = layers[p + 1].iter().position(|&x| x == t).unwrap();
                    d.add_block(b * v_dim, a * v_dim, &Matrix::identity(field, v_dim), wedge_sign(s, j))?;
                }
            }
        }
        diffs.push(d);
    }
    CochainComplex::new(field, 0, spaces, diffs)
}

/// The Koszul scaffold `K` on a multicomplex together with its subcomplex
/// `D` and quotient `Q = K / D`. Axis 0 is the Koszul direction.
#[derive(Clone, Debug)]
pub struct KoszulPair {
    pub k: Multicomplex,
    pub d: Multicomplex,
    pub q: Multicomplex,
}

#[derive(Clone, Copy)]
enum Part {
    Whole,
    Sub,
    Quotient,
}

/// `e_I` survives at `q` in `D` when some `q_i` with `i ∈ I` is nonzero,
/// and in `Q` when all of them vanish.
fn keeps(part: Part, set: u32, q: &[i64]) -> bool {
    let touched = mask_indices(set).iter().any(|&i| q[i] != 0);
    match part {
        Part::Whole => true,
        Part::Sub => touched,
        Part::Quotient => !touched,
    }
}

/// Builds `K`, `D` and `Q` for a multicomplex supported in `ℕⁿ`. An
/// anticommutative input is first made commutative with σ.
pub fn build_dq(mc: &Multicomplex) -> Result<KoszulPair> {
    if mc.lo().iter().any(|&v| v < 0) {
        return Err(Error::contract("the Koszul construction needs a multicomplex supported in ℕⁿ"));
    }
    let base = match mc.flavor() {
        Flavor::Commutative => mc.clone(),
        Flavor::Anticommutative => mc.sigma(),
    };
    Ok(KoszulPair {
        k: scaffold(&base, Part::Whole)?,
        d: scaffold(&base, Part::Sub)?,
        q: scaffold(&base, Part::Quotient)?,
    })
}

fn scaffold(mc: &Multicomplex, part: Part) -> Result<Multicomplex> {
    let n = mc.n();
    let field = mc.field();
    let layers: Vec<Vec<u32>> = (0..=n).map(|p| subsets_of_size(n, p)).collect();
    let kept = |p: usize, q: &[i64]| -> Vec<u32> {
        layers[p].iter().copied().filter(|&s| keeps(part, s, q)).collect()
    };
    let mut lo = vec![0];
    lo.extend_from_slice(mc.lo());
    let mut hi = vec![n as i64];
    hi.extend_from_slice(mc.hi());
    let mut out = Multicomplex::with_entries(field, lo, hi, Flavor::Commutative, |pq| {
        let q = &pq[1..];
        let base = mc.entry(q).map(|e| e.labels.clone()).unwrap_or_default();
        let labels = kept(pq[0] as usize, q)
            .into_iter()
            .flat_map(|s| base.iter().map(move |l| format!("e{:?}:{l}", mask_indices(s))))
            .collect();
        Entry { labels }
    })?;
    let points: Vec<Vec<i64>> = out.points().collect();
    for pq in &points {
        let p = pq[0] as usize;
        let q = &pq[1..];
        let c = mc.dim_at(q);
        if c == 0 {
            continue;
        }
        let src = kept(p, q);
        if src.is_empty() {
            continue;
        }
        if p < n {
            let tgt = kept(p + 1, q);
            let mut m = Matrix::zeros(field, tgt.len() * c, src.len() * c);
            for (a, &s) in src.iter().enumerate() {
                for j in (0..n).filter(|j| s >> j & 1 == 0) {
                    if let Some(b) = tgt.iter().position(|&t| t == s | 1 << j) {
                        m.add_block(b * c, a * c, &Matrix::identity(field, c), wedge_sign(s, j))?;
                    }
                }
            }
            out.set_diff(pq, 0, m)?;
        }
        for i in 0..n {
            let mut qt = q.to_vec();
            qt[i] += 1;
            let ct = mc.dim_at(&qt);
            if ct == 0 {
                continue;
            }
            let tgt = kept(p, &qt);
            let dq = mc.diff(q, i);
            let mut m = Matrix::zeros(field, tgt.len() * ct, src.len() * c);
            for (a, &s) in src.iter().enumerate() {
                if let Some(b) = tgt.iter().position(|&t| t == s) {
                    m.add_block(b * ct, a * c, &dq, 1)?;
                }
            }
            out.set_diff(pq, i + 1, m)?;
        }
    }
    Ok(out)
}
