//! ℤⁿ-indexed multicomplexes of finite-dimensional spaces, stored inside an
//! explicit bounding box.
//!
//! A multicomplex carries one differential `d^{q,i} : C^q → C^{q+e_i}` per
//! lattice point `q` and direction `i` (0-based). Directions square to zero
//! and pairwise commute (commutative flavor) or anticommute
//! (anticommutative flavor).

mod complex;
mod hypercube;
mod koszul;
pub mod props;
pub mod random;
mod region;
mod tensor;

use std::fmt;

use serde_json::json;

pub use complex::{Basis, Block, CochainComplex};
pub use hypercube::{augment_interior, build_hypercube_square, composite_map};
pub use koszul::{build_dq, koszul_complex, wedge_sign, KoszulPair};
pub use region::{mask_indices, subsets_of_size, RegionKind, RegionSpec};
pub use tensor::tensor_product;

pub(crate) use region::region_contains;

use crate::exactlinalg::{Field, Matrix};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Flavor {
    Commutative,
    Anticommutative,
}

impl Flavor {
    pub fn toggled(self) -> Flavor {
        match self {
            Flavor::Commutative => Flavor::Anticommutative,
            Flavor::Anticommutative => Flavor::Commutative,
        }
    }
}

/// One lattice entry: its dimension is the number of labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Entry {
    pub labels: Vec<String>,
}

impl Entry {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multicomplex {
    field: Field,
    lo: Vec<i64>,
    hi: Vec<i64>,
    entries: Vec<Entry>,
    /// `diffs[i][index(q)]` is `d^{q,i}`; it has zero rows when `q + e_i`
    /// leaves the box.
    diffs: Vec<Vec<Matrix>>,
    flavor: Flavor,
}

/// First failing identity found by [`Multicomplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    SquareZero { point: Vec<i64>, direction: usize },
    Commutation { point: Vec<i64>, i: usize, j: usize, flavor: Flavor },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SquareZero { point, direction } => {
                write!(f, "d∘d ≠ 0 in direction {direction} at {point:?}")
            }
            Violation::Commutation { point, i, j, flavor } => {
                write!(f, "directions {i},{j} fail the {flavor:?} law at {point:?}")
            }
        }
    }
}

impl Multicomplex {
    /// A multicomplex over the box `lo..=hi` with the given entries and all
    /// differentials zero.
    pub fn with_entries(
        field: Field,
        lo: Vec<i64>,
        hi: Vec<i64>,
        flavor: Flavor,
        mut entry: impl FnMut(&[i64]) -> Entry,
    ) -> Result<Multicomplex> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::contract("bounding box needs matching, nonempty corners"));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::contract(format!("empty bounding box {lo:?}..{hi:?}")));
        }
        let shape: Vec<usize> = lo.iter().zip(&hi).map(|(a, b)| (b - a + 1) as usize).collect();
        let count: usize = shape.iter().product();
        let mut mc = Multicomplex {
            field,
            lo,
            hi,
            entries: Vec::with_capacity(count),
            diffs: Vec::new(),
            flavor,
        };
        let points: Vec<Vec<i64>> = mc.points().collect();
        for q in &points {
            mc.entries.push(entry(q));
        }
        let n = mc.n();
        mc.diffs = (0..n)
            .map(|i| {
                points
                    .iter()
                    .map(|q| {
                        let src = mc.dim_at(q);
                        let tgt = mc.dim_at(&step(q, i));
                        Matrix::zeros(field, tgt, src)
                    })
                    .collect()
            })
            .collect();
        Ok(mc)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Number of directions.
    pub fn n(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn index(&self, q: &[i64]) -> Option<usize> {
        if q.len() != self.n() {
            return None;
        }
        let mut idx = 0usize;
        for ((&v, &a), &b) in q.iter().zip(&self.lo).zip(&self.hi) {
            if v < a || v > b {
                return None;
            }
            idx = idx * (b - a + 1) as usize + (v - a) as usize;
        }
        Some(idx)
    }

    /// Lattice points of the box in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        let total: usize = self.lo.iter().zip(&self.hi).map(|(a, b)| (b - a + 1) as usize).product();
        (0..total).map(move |mut idx| {
            let mut q = vec![0; self.n()];
            for k in (0..self.n()).rev() {
                let w = (self.hi[k] - self.lo[k] + 1) as usize;
                q[k] = self.lo[k] + (idx % w) as i64;
                idx /= w;
            }
            q
        })
    }

    pub fn entry(&self, q: &[i64]) -> Option<&Entry> {
        self.index(q).map(|i| &self.entries[i])
    }

    pub fn dim_at(&self, q: &[i64]) -> usize {
        self.index(q).map_or(0, |i| self.entries.get(i).map_or(0, Entry::dim))
    }

    pub fn total_dim(&self) -> usize {
        self.entries.iter().map(Entry::dim).sum()
    }

    /// `d^{q,i}`; a zero map when `q` is outside the box.
    pub fn diff(&self, q: &[i64], i: usize) -> Matrix {
        match self.index(q) {
            Some(idx) => self.diffs[i][idx].clone(),
            None => Matrix::zeros(self.field, self.dim_at(&step(q, i)), 0),
        }
    }

    pub(crate) fn diff_ref(&self, q: &[i64], i: usize) -> Option<&Matrix> {
        self.index(q).map(|idx| &self.diffs[i][idx])
    }

    pub fn set_diff(&mut self, q: &[i64], i: usize, m: Matrix) -> Result<()> {
        let idx = self
            .index(q)
            .ok_or_else(|| Error::contract(format!("point {q:?} outside the box")))?;
        if i >= self.n() {
            return Err(Error::contract(format!("direction {i} out of range")));
        }
        let tgt = self.dim_at(&step(q, i));
        if m.rows() != tgt || m.cols() != self.entries[idx].dim() || m.field() != self.field {
            return Err(Error::contract(format!(
                "d at {q:?} in direction {i} must be {}x{}, got {}x{}",
                tgt,
                self.entries[idx].dim(),
                m.rows(),
                m.cols()
            )));
        }
        self.diffs[i][idx] = m;
        Ok(())
    }

    /// Checks the square-zero and (anti)commutation identities on the box.
    pub fn validate(&self) -> Result<(), Violation> {
        let sign = match self.flavor {
            Flavor::Commutative => -1,
            Flavor::Anticommutative => 1,
        };
        for q in self.points() {
            if self.dim_at(&q) == 0 {
                continue;
            }
            for i in 0..self.n() {
                let qi = step(&q, i);
                let di = self.diff(&q, i);
                let dd = self.diff(&qi, i).mul(&di).expect("shapes agree");
                if !dd.is_zero() {
                    return Err(Violation::SquareZero { point: q, direction: i });
                }
                for j in i + 1..self.n() {
                    let qj = step(&q, j);
                    let a = self.diff(&qi, j).mul(&di).expect("shapes agree");
                    let b = self.diff(&qj, i).mul(&self.diff(&q, j)).expect("shapes agree");
                    if !a.add(&b.scale_i64(sign)).expect("shapes agree").is_zero() {
                        return Err(Violation::Commutation { point: q, i, j, flavor: self.flavor });
                    }
                }
            }
        }
        Ok(())
    }

    /// Rescales `d^{q,i}` by `(-1)^{q_0 + … + q_{i-1}}` and toggles the flavor.
    pub fn sigma(&self) -> Multicomplex {
        let mut out = self.clone();
        let points: Vec<Vec<i64>> = self.points().collect();
        for i in 0..self.n() {
            for (idx, q) in points.iter().enumerate() {
                if prefix_parity(q, i) {
                    out.diffs[i][idx] = self.diffs[i][idx].scale_i64(-1);
                }
            }
        }
        out.flavor = self.flavor.toggled();
        out
    }

    /// Total complex: degree `m` is the direct sum of the entries with
    /// coordinate sum `m`, in lexicographic order of points. Commutative
    /// multicomplexes contribute σ-signed maps, anticommutative ones their
    /// raw maps.
    pub fn totalize(&self) -> Result<CochainComplex> {
        let lo: i64 = self.lo.iter().sum();
        let hi: i64 = self.hi.iter().sum();
        let width = (hi - lo + 1) as usize;
        let mut spaces: Vec<Basis> = vec![Basis::default(); width];
        let mut where_is: Vec<(usize, usize)> = Vec::with_capacity(self.entries.len());
        for q in self.points() {
            let deg = (q.iter().sum::<i64>() - lo) as usize;
            let e = &self.entries[self.index(&q).unwrap()];
            let space = &mut spaces[deg];
            let offset = space.labels.len();
            where_is.push((deg, offset));
            space.blocks.push(Block { point: q.clone(), offset, dim: e.dim() });
            space.labels.extend(e.labels.iter().map(|l| format!("{q:?}:{l}")));
        }
        let mut diffs: Vec<Matrix> = (0..width)
            .map(|t| Matrix::zeros(self.field, spaces.get(t + 1).map_or(0, Basis::dim), spaces[t].dim()))
            .collect();
        for (idx, q) in self.points().enumerate() {
            let (deg, col) = where_is[idx];
            if self.entries[idx].dim() == 0 {
                continue;
            }
            for i in 0..self.n() {
                let Some(tidx) = self.index(&step(&q, i)) else {
                    continue;
                };
                let (tdeg, row) = where_is[tidx];
                debug_assert_eq!(tdeg, deg + 1);
                let sign = match self.flavor {
                    Flavor::Commutative if prefix_parity(&q, i) => -1,
                    _ => 1,
                };
                diffs[deg].add_block(row, col, &self.diffs[i][idx], sign)?;
            }
        }
        CochainComplex::new(self.field, lo, spaces, diffs).map_err(|e| match e {
            Error::Invariant(msg) => Error::invariant(format!("totalization: {msg}")),
            other => other,
        })
    }

    /// Keeps the entries inside `region` and zeroes the rest. Differentials
    /// between kept entries are unchanged, which is the induced differential
    /// for every sub- or quotient complex the regions describe.
    pub fn restrict(&self, region: &RegionSpec) -> Result<Multicomplex> {
        let s = region.resolve(self.n())?;
        self.restrict_by(|q| region_contains(region.kind, s, q))
    }

    pub(crate) fn restrict_by(&self, keep: impl Fn(&[i64]) -> bool) -> Result<Multicomplex> {
        let mut out = Multicomplex::with_entries(self.field, self.lo.clone(), self.hi.clone(), self.flavor, |q| {
            if keep(q) {
                self.entry(q).cloned().unwrap_or_default()
            } else {
                Entry::default()
            }
        })?;
        let points: Vec<Vec<i64>> = self.points().collect();
        for q in &points {
            if !keep(q) {
                continue;
            }
            for i in 0..self.n() {
                let t = step(q, i);
                if self.index(&t).is_some() && keep(&t) {
                    out.set_diff(q, i, self.diff(q, i))?;
                }
            }
        }
        Ok(out)
    }

    /// The 1-complex along `axis` through `base` (the `axis` coordinate of
    /// `base` is ignored); degrees are the `axis` coordinate.
    pub fn line(&self, axis: usize, base: &[i64]) -> Result<CochainComplex> {
        let mut spaces = Vec::new();
        let mut diffs = Vec::new();
        for v in self.lo[axis]..=self.hi[axis] {
            let mut q = base.to_vec();
            q[axis] = v;
            let e = self.entry(&q).cloned().unwrap_or_default();
            spaces.push(Basis {
                blocks: vec![Block { point: q.clone(), offset: 0, dim: e.dim() }],
                labels: e.labels,
            });
            let mut d = self.diff(&q, axis);
            if v == self.hi[axis] {
                d = Matrix::zeros(self.field, 0, d.cols());
            }
            diffs.push(d);
        }
        CochainComplex::new(self.field, self.lo[axis], spaces, diffs)
    }

    /// Plain-text dump: per lattice point its dimension and labels, then
    /// every nonzero differential.
    pub fn dump_text(&self) -> String {
        let mut out = format!(
            "multicomplex n={} box={:?}..{:?} flavor={:?} field={}\n",
            self.n(),
            self.lo,
            self.hi,
            self.flavor,
            self.field
        );
        for q in self.points() {
            let e = self.entry(&q).unwrap();
            if e.dim() > 0 {
                out.push_str(&format!("  C{q:?} dim {} [{}]\n", e.dim(), e.labels.join(", ")));
            }
        }
        for i in 0..self.n() {
            for q in self.points() {
                let d = self.diff(&q, i);
                if d.rows() > 0 && d.cols() > 0 {
                    out.push_str(&format!("  d{q:?},{i}:"));
                    for row in d.display_rows() {
                        out.push_str(&format!(" [{}]", row.join(" ")));
                    }
                    out.push('\n');
                }
            }
        }
        out
    }

    pub fn dump_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .points()
            .filter_map(|q| {
                let e = self.entry(&q)?;
                (e.dim() > 0).then(|| json!({"point": q, "dim": e.dim(), "labels": e.labels}))
            })
            .collect();
        let mut maps = Vec::new();
        for i in 0..self.n() {
            for q in self.points() {
                let d = self.diff(&q, i);
                if d.rows() > 0 && d.cols() > 0 {
                    maps.push(json!({"point": q, "direction": i, "matrix": d.display_rows()}));
                }
            }
        }
        json!({
            "n": self.n(),
            "lo": self.lo,
            "hi": self.hi,
            "flavor": format!("{:?}", self.flavor),
            "field": self.field.to_string(),
            "entries": entries,
            "maps": maps,
        })
    }
}

pub(crate) fn step(q: &[i64], i: usize) -> Vec<i64> {
    let mut t = q.to_vec();
    t[i] += 1;
    t
}

/// Parity of `q_0 + … + q_{i-1}`: true when odd.
pub(crate) fn prefix_parity(q: &[i64], i: usize) -> bool {
    q[..i].iter().sum::<i64>().rem_euclid(2) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    const F: Field = Field::Prime(65537);

    fn unit(_: &[i64]) -> Entry {
        Entry { labels: vec!["v".into()] }
    }

    fn identity_line() -> CochainComplex {
        CochainComplex::from_maps(F, 0, &[1, 1], vec![Matrix::identity(F, 1)]).unwrap()
    }

    #[test]
    fn zero_differentials_validate() {
        let mc = Multicomplex::with_entries(F, vec![0, 0], vec![1, 1], Flavor::Commutative, unit).unwrap();
        assert!(mc.validate().is_ok());
        let tot = mc.totalize().unwrap();
        assert_eq!(tot.cohomology_dims(), vec![(0, 1), (1, 2), (2, 1)]);
    }

    #[test]
    fn repeated_identity_violates_square_zero() {
        let mut mc = Multicomplex::with_entries(F, vec![0], vec![2], Flavor::Commutative, unit).unwrap();
        mc.set_diff(&[0], 0, Matrix::identity(F, 1)).unwrap();
        mc.set_diff(&[1], 0, Matrix::identity(F, 1)).unwrap();
        assert_eq!(mc.validate(), Err(Violation::SquareZero { point: vec![0], direction: 0 }));
    }

    #[test]
    fn tensor_of_lines_validates_and_is_exact() {
        let mc = tensor_product(&[identity_line(), identity_line()]).unwrap();
        assert!(mc.validate().is_ok());
        assert!(mc.totalize().unwrap().is_acyclic());
    }

    #[test]
    fn sigma_is_an_involution() {
        let mc = tensor_product(&[identity_line(), identity_line()]).unwrap();
        let s = mc.sigma();
        assert_eq!(s.flavor(), Flavor::Anticommutative);
        assert!(s.validate().is_ok());
        assert_eq!(s.sigma(), mc);
        // n = 1: no sign prefix.
        let one = tensor_product(&[identity_line()]).unwrap();
        assert_eq!(one.sigma().diff(&[0], 0), one.diff(&[0], 0));
    }

    #[test]
    fn sigma_sign_on_second_direction() {
        let mc = tensor_product(&[identity_line(), identity_line()]).unwrap();
        let s = mc.sigma();
        assert_eq!(s.diff(&[1, 0], 1), mc.diff(&[1, 0], 1).scale_i64(-1));
        assert_eq!(s.diff(&[0, 0], 1), mc.diff(&[0, 0], 1));
        assert_eq!(s.diff(&[1, 0], 0), mc.diff(&[1, 0], 0));
    }

    #[test]
    fn restrict_face_regions() {
        let mc = tensor_product(&[identity_line(), identity_line()]).unwrap();
        assert_eq!(mc.restrict(&RegionSpec::face(&[0, 1])).unwrap(), mc);
        let origin = mc.restrict(&RegionSpec::face(&[])).unwrap();
        assert_eq!(origin.total_dim(), 1);
        assert_eq!(origin.dim_at(&[0, 0]), 1);
        let int = mc.restrict(&RegionSpec::interior(&[0, 1])).unwrap();
        let live: Vec<Vec<i64>> = int.points().filter(|q| int.dim_at(q) > 0).collect();
        assert_eq!(live, vec![vec![1, 1]]);
    }

    #[test]
    fn dumps_mention_entries() {
        let mc = tensor_product(&[identity_line()]).unwrap();
        assert!(mc.dump_text().contains("C[0] dim 1"));
        assert_eq!(mc.dump_json()["entries"].as_array().unwrap().len(), 2);
    }
}
