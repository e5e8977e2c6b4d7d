use super::region::mask_indices;
use super::{step, Basis, Block, CochainComplex, Entry, Flavor, Multicomplex, RegionSpec};
use crate::exactlinalg::Matrix;
use crate::{Error, Result};

/// The raw composite `C^0 → C^{e_S}` along the directions of `set` taken in
/// increasing order: `d^{e_{i_1}+…+e_{i_{p-1}}, i_p} ∘ … ∘ d^{0, i_1}`.
/// For the empty set this is the identity of `C^0`.
pub fn composite_map(mc: &Multicomplex, set: u32) -> Result<Matrix> {
    let origin = vec![0i64; mc.n()];
    let mut acc = Matrix::identity(mc.field(), mc.dim_at(&origin));
    let mut q = origin;
    for i in mask_indices(set) {
        if i >= mc.n() {
            return Err(Error::contract(format!("direction {i} out of range")));
        }
        acc = mc.diff(&q, i).mul(&acc)?;
        q = step(&q, i);
    }
    Ok(acc)
}

/// Totalization of the interior restriction to `I_S` with `C^0` adjoined in
/// total degree `p - 1` (`p = |S|`), mapped in by [`composite_map`].
pub fn augment_interior(mc: &Multicomplex, indices: &[usize]) -> Result<CochainComplex> {
    if indices.is_empty() {
        return Err(Error::input("augmented interior complex needs at least one direction"));
    }
    let spec = RegionSpec::interior(indices);
    let set = spec.resolve(mc.n())?;
    let p = set.count_ones() as i64;
    let tot = mc.restrict(&spec)?.totalize()?;
    let origin = vec![0i64; mc.n()];
    let c0 = mc.dim_at(&origin);
    let psi = composite_map(mc, set)?;
    let corner: Vec<i64> = (0..mc.n()).map(|i| i64::from(set >> i & 1 == 1)).collect();

    let aug = p - 1;
    let lo = tot.lo().min(aug);
    let hi = (*tot.degrees().end()).max(aug);
    let mut spaces = Vec::new();
    for k in lo..=hi {
        if k == aug {
            let labels = mc.entry(&origin).map(|e| e.labels.clone()).unwrap_or_default();
            spaces.push(Basis {
                labels: labels.iter().map(|l| format!("+{origin:?}:{l}")).collect(),
                blocks: vec![Block { point: origin.clone(), offset: 0, dim: c0 }],
            });
        } else {
            spaces.push(tot.basis(k).cloned().unwrap_or_default());
        }
    }
    let mut diffs = Vec::new();
    for k in lo..=hi {
        let src = spaces[(k - lo) as usize].dim();
        let tgt = spaces.get((k - lo + 1) as usize).map_or(0, Basis::dim);
        let d = if k == aug {
            let mut d = Matrix::zeros(mc.field(), tgt, src);
            let target = &spaces[(k - lo + 1) as usize];
            if let Some(b) = target.blocks.iter().find(|b| b.point == corner) {
                d.add_block(b.offset, 0, &psi, 1)?;
            }
            d
        } else if k == aug - 1 {
            Matrix::zeros(mc.field(), tgt, src)
        } else if k == hi {
            Matrix::zeros(mc.field(), 0, src)
        } else {
            tot.diff(k)
        };
        diffs.push(d);
    }
    CochainComplex::new(mc.field(), lo, spaces, diffs)
}

/// The commuting `(n+1)`-multicomplex `◻C`: layer 0 of the new first axis is
/// `C`, layer −1 is the trivial hypercube on `C^0` over `{0,1}ⁿ`, and the
/// map from `(−1, e_S)` to `(0, e_S)` is the composite for `S`.
pub fn build_hypercube_square(mc: &Multicomplex) -> Result<Multicomplex> {
    if mc.flavor() != Flavor::Commutative {
        return Err(Error::contract("the hypercube construction needs a commutative multicomplex (apply σ first)"));
    }
    let n = mc.n();
    let field = mc.field();
    let origin = vec![0i64; n];
    let c0 = mc.entry(&origin).map(|e| e.labels.clone()).unwrap_or_default();
    let in_cube = |q: &[i64]| q.iter().all(|&v| v == 0 || v == 1);

    let mut lo = vec![-1];
    lo.extend(mc.lo().iter().map(|&v| v.min(0)));
    let mut hi = vec![0];
    hi.extend(mc.hi().iter().map(|&v| v.max(1)));
    let mut out = Multicomplex::with_entries(field, lo, hi, Flavor::Commutative, |pq| {
        let q = &pq[1..];
        if pq[0] == -1 {
            if in_cube(q) {
                Entry { labels: c0.iter().map(|l| format!("h:{l}")).collect() }
            } else {
                Entry::default()
            }
        } else {
            mc.entry(q).cloned().unwrap_or_default()
        }
    })?;
    let id = Matrix::identity(field, c0.len());
    let points: Vec<Vec<i64>> = out.points().collect();
    for pq in &points {
        let q = &pq[1..];
        if pq[0] == -1 {
            if !in_cube(q) {
                continue;
            }
            let set = q.iter().enumerate().filter(|(_, &v)| v == 1).fold(0u32, |a, (i, _)| a | 1 << i);
            out.set_diff(pq, 0, composite_map(mc, set)?)?;
            for (i, _) in q.iter().enumerate().filter(|(_, &v)| v == 0) {
                out.set_diff(pq, i + 1, id.clone())?;
            }
        } else {
            for i in 0..n {
                if let Some(d) = mc.diff_ref(q, i) {
                    if out.index(&step(pq, i + 1)).is_some() {
                        out.set_diff(pq, i + 1, d.clone())?;
                    }
                }
            }
        }
    }
    Ok(out)
}
