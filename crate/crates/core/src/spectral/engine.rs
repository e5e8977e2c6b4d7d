use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde_json::json;

use super::FilteredComplex;
use crate::exactlinalg::{Matrix, Subspace};
use crate::{Error, Result};

/// One page `E_r`: nonzero cells keyed by `(p, q)` and the `d_r` maps
/// between nonzero cells, in the coordinates of the chosen representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    pub r: i64,
    pub cells: BTreeMap<(i64, i64), usize>,
    pub maps: Vec<PageMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageMap {
    pub from: (i64, i64),
    pub to: (i64, i64),
    pub matrix: Matrix,
    pub rank: usize,
}

impl Page {
    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.cells.get(&(p, q)).copied().unwrap_or(0)
    }

    /// Sum of the cells with `p + q = k`.
    pub fn antidiagonal(&self, k: i64) -> usize {
        self.cells.iter().filter(|((p, q), _)| p + q == k).map(|(_, d)| d).sum()
    }

    pub fn map_from(&self, p: i64, q: i64) -> Option<&PageMap> {
        self.maps.iter().find(|m| m.from == (p, q))
    }

    pub fn rank_from(&self, p: i64, q: i64) -> usize {
        self.map_from(p, q).map_or(0, |m| m.rank)
    }

    pub fn rank_into(&self, p: i64, q: i64) -> usize {
        self.maps.iter().find(|m| m.to == (p, q)).map_or(0, |m| m.rank)
    }

    pub fn all_maps_zero(&self) -> bool {
        self.maps.iter().all(|m| m.rank == 0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cells: Vec<_> = self.cells.iter().map(|(&(p, q), &dim)| json!({"p": p, "q": q, "dim": dim})).collect();
        let maps: Vec<_> = self
            .maps
            .iter()
            .filter(|m| m.rank > 0)
            .map(|m| json!({"from": [m.from.0, m.from.1], "rank": m.rank}))
            .collect();
        json!({"r": self.r, "cells": cells, "maps": maps})
    }

    /// Terminal grid: `q` decreasing downwards, `p` increasing rightwards.
    pub fn grid(&self) -> String {
        let mut out = format!("E_{}\n", self.r);
        if self.cells.is_empty() {
            out.push_str("  (zero page)\n");
            return out;
        }
        let ps = self.cells.keys().map(|k| k.0);
        let qs = self.cells.keys().map(|k| k.1);
        let (p0, p1) = (ps.clone().min().unwrap(), ps.max().unwrap());
        let (q0, q1) = (qs.clone().min().unwrap(), qs.max().unwrap());
        for q in (q0..=q1).rev() {
            let _ = write!(out, "{q:>4} |");
            for p in p0..=p1 {
                match self.dim(p, q) {
                    0 => out.push_str("    ."),
                    d => {
                        let _ = write!(out, "{d:>5}");
                    }
                }
            }
            out.push('\n');
        }
        out.push_str("     +");
        out.push_str(&"-----".repeat((p1 - p0 + 1) as usize));
        out.push_str("\n      ");
        for p in p0..=p1 {
            let _ = write!(out, "{p:>5}");
        }
        out.push('\n');
        out
    }
}

/// The filtration induced on cohomology: `dims[k]` lists `(p, dim F^p H^k)`
/// for `p_min ≤ p ≤ p_max + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abutment {
    pub h: BTreeMap<i64, usize>,
    pub dims: BTreeMap<i64, Vec<(i64, usize)>>,
}

impl Abutment {
    /// `dim F^p H^k / F^{p+1} H^k`.
    pub fn graded(&self, p: i64, k: i64) -> usize {
        let Some(levels) = self.dims.get(&k) else {
            return 0;
        };
        let at = |p: i64| levels.iter().find(|(l, _)| *l == p).map(|&(_, d)| d);
        let first = levels.first().map_or(0, |&(_, d)| d);
        let here = at(p).unwrap_or(if p < levels[0].0 { first } else { 0 });
        let next = at(p + 1).unwrap_or(if p + 1 < levels[0].0 { first } else { 0 });
        here - next
    }
}

/// Outcome of comparing `E_∞` with the abutment filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergence {
    pub infinity: Page,
    pub abutment: Abutment,
    /// `(p, k)` cells where `E_∞` and the graded abutment disagree.
    pub mismatches: Vec<(i64, i64)>,
}

impl Convergence {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Results of the structural checks over all pages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub pages: Vec<Page>,
    /// Every `d_r ∘ d_r` vanished.
    pub square_zero: bool,
    /// `dim E_{r+1} = dim ker d_r − rank d_r` held in every cell.
    pub homology_agrees: bool,
    /// Pages from the filtration width on were identical with zero maps.
    pub constant_beyond_width: bool,
    /// Smallest `r ≥ 1` with `d_s = 0` for every `s ≥ r`.
    pub degenerates_at: i64,
}

impl StructureReport {
    pub fn holds(&self) -> bool {
        self.square_zero && self.homology_agrees && self.constant_beyond_width
    }
}

struct Cell {
    reps: Matrix,
    b: Subspace,
}

/// Page computations over one filtered complex, caching the `Z` spaces.
pub struct SpectralSequence<'a> {
    fc: &'a FilteredComplex,
    z_cache: HashMap<(i64, i64, i64), Subspace>,
}

impl<'a> SpectralSequence<'a> {
    pub fn new(fc: &'a FilteredComplex) -> SpectralSequence<'a> {
        SpectralSequence { fc, z_cache: HashMap::new() }
    }

    pub fn filtered(&self) -> &FilteredComplex {
        self.fc
    }

    /// `Z_r^p` in total degree `k`.
    fn z(&mut self, r: i64, p: i64, k: i64) -> Result<Subspace> {
        // Only the source and target levels matter once clamped to the range.
        let src = p.max(self.fc.p_min());
        let tgt = (p + r).max(src).min(self.fc.p_max() + 1);
        if let Some(s) = self.z_cache.get(&(src, tgt, k)) {
            return Ok(s.clone());
        }
        let c = self.fc.complex();
        let fp = self.fc.level(src, k);
        let s = if fp.dim() == 0 || tgt == src {
            fp
        } else {
            let pre = Subspace::preimage(&c.diff(k), &self.fc.level(tgt, k + 1))?;
            fp.intersection(&pre)?
        };
        self.z_cache.insert((src, tgt, k), s.clone());
        Ok(s)
    }

    /// `B_r^p` in total degree `k`.
    fn b(&mut self, r: i64, p: i64, k: i64) -> Result<Subspace> {
        let upper = self.z(r - 1, p + 1, k)?;
        let lower = self.z(r - 1, p - r + 1, k - 1)?;
        let c = self.fc.complex();
        if lower.dim() == 0 {
            return Ok(upper);
        }
        Ok(upper.sum(&lower.image_under(&c.diff(k - 1))?)?)
    }

    fn cells(&mut self, r: i64) -> Result<BTreeMap<(i64, i64), Cell>> {
        let mut out = BTreeMap::new();
        for p in self.fc.p_min()..=self.fc.p_max() {
            for k in self.fc.complex().degrees() {
                if self.fc.complex().dim(k) == 0 {
                    continue;
                }
                let z = self.z(r, p, k)?;
                if z.dim() == 0 {
                    continue;
                }
                let b = self.b(r, p, k)?;
                if !z.contains(&b)? {
                    return Err(Error::invariant(format!("B not contained in Z at r={r}, p={p}, k={k}")));
                }
                if z.dim() == b.dim() {
                    continue;
                }
                out.insert((p, k - p), Cell { reps: z.quotient(&b)?, b });
            }
        }
        Ok(out)
    }

    /// Dimensions of `E_r` only.
    pub fn dims(&mut self, r: i64) -> Result<BTreeMap<(i64, i64), usize>> {
        let mut out = BTreeMap::new();
        for p in self.fc.p_min()..=self.fc.p_max() {
            for k in self.fc.complex().degrees() {
                let z = self.z(r, p, k)?;
                if z.dim() == 0 {
                    continue;
                }
                let b = self.b(r, p, k)?;
                if z.dim() > b.dim() {
                    out.insert((p, k - p), z.dim() - b.dim());
                }
            }
        }
        Ok(out)
    }

    /// `E_r` with its differential `d_r` of bidegree `(r, 1 − r)`.
    pub fn page(&mut self, r: i64) -> Result<Page> {
        if r < 0 {
            return Err(Error::contract(format!("page index {r} is negative")));
        }
        let cells = self.cells(r)?;
        let c = self.fc.complex();
        let mut maps = Vec::new();
        for (&(p, q), cell) in &cells {
            let k = p + q;
            let to = (p + r, q - r + 1);
            let dz = cell.reps.mul(&c.diff(k).transpose())?;
            let target_z = self.z(r, p + r, k + 1)?;
            if !target_z.contains_vectors(&dz)? {
                return Err(Error::invariant(format!(
                    "d_{r} from ({p},{q}) does not land in Z_{r} at ({}, {})",
                    to.0, to.1
                )));
            }
            let Some(target) = cells.get(&to) else {
                // Target cell vanishes: dz must already be a boundary.
                if !dz.is_zero() {
                    let tb = self.b(r, p + r, k + 1)?;
                    if !tb.contains_vectors(&dz)? {
                        return Err(Error::invariant(format!("d_{r} from ({p},{q}) misses a zero cell")));
                    }
                }
                continue;
            };
            let stacked = target.reps.vstack(target.b.basis())?;
            let coeffs = stacked
                .transpose()
                .solve(&dz.transpose())?
                .ok_or_else(|| Error::invariant(format!("d_{r} from ({p},{q}) is not expressible in E_{r}")))?;
            let nt = target.reps.rows();
            let idx: Vec<usize> = (0..nt).collect();
            let matrix = coeffs.select_rows(&idx);
            let rank = matrix.rank();
            maps.push(PageMap { from: (p, q), to, matrix, rank });
        }
        let cells = cells.iter().map(|(&key, cell)| (key, cell.reps.rows())).collect();
        Ok(Page { r, cells, maps })
    }

    /// Computes pages `0..=max(r_max, width + 1)` and runs the structural
    /// checks: `d_r ∘ d_r = 0`, `E_{r+1} = H(E_r, d_r)` dimensionwise, and
    /// constancy from the filtration width on.
    pub fn structure(&mut self, r_max: i64) -> Result<StructureReport> {
        let last = r_max.max(self.fc.width() + 1);
        let mut pages = Vec::new();
        for r in 0..=last {
            pages.push(self.page(r)?);
        }
        let mut square_zero = true;
        let mut homology_agrees = true;
        for (r, page) in pages.iter().enumerate() {
            for m in &page.maps {
                if let Some(next) = page.map_from(m.to.0, m.to.1) {
                    if !next.matrix.mul(&m.matrix)?.is_zero() {
                        square_zero = false;
                    }
                }
            }
            if let Some(next) = pages.get(r + 1) {
                let mut keys: Vec<(i64, i64)> = page.cells.keys().copied().collect();
                keys.extend(next.cells.keys().copied());
                keys.sort_unstable();
                keys.dedup();
                for (p, q) in keys {
                    let here = page.dim(p, q);
                    let out = page.rank_from(p, q);
                    let inc = page.rank_into(p, q);
                    let h = here as i64 - out as i64 - inc as i64;
                    if h != next.dim(p, q) as i64 {
                        homology_agrees = false;
                    }
                }
            }
        }
        let w = self.fc.width() as usize;
        let constant_beyond_width = pages[w..].iter().all(|pg| pg.all_maps_zero() && pg.cells == pages[w].cells);
        let mut degenerates_at = last;
        while degenerates_at > 1 && pages[(degenerates_at - 1) as usize].all_maps_zero() {
            degenerates_at -= 1;
        }
        Ok(StructureReport { pages, square_zero, homology_agrees, constant_beyond_width, degenerates_at })
    }

    /// The filtration induced on `H^k` of the total complex.
    pub fn abutment(&mut self) -> Result<Abutment> {
        let c = self.fc.complex();
        let mut h = BTreeMap::new();
        let mut dims = BTreeMap::new();
        for k in c.degrees() {
            let cyc = c.cycles(k);
            let bnd = c.boundaries(k);
            h.insert(k, cyc.dim() - bnd.dim());
            let mut levels = Vec::new();
            for p in self.fc.p_min()..=self.fc.p_max() + 1 {
                let fz = self.fc.level(p, k).intersection(&cyc)?;
                levels.push((p, fz.sum(&bnd)?.dim() - bnd.dim()));
            }
            dims.insert(k, levels);
        }
        Ok(Abutment { h, dims })
    }

    /// `E_∞` (the page at the filtration width) compared against the
    /// graded pieces of the abutment filtration.
    pub fn converge(&mut self) -> Result<Convergence> {
        let infinity = self.page(self.fc.width())?;
        let abutment = self.abutment()?;
        let mut mismatches = Vec::new();
        for k in self.fc.complex().degrees() {
            for p in self.fc.p_min()..=self.fc.p_max() {
                if infinity.dim(p, k - p) != abutment.graded(p, k) {
                    mismatches.push((p, k));
                }
            }
            if infinity.antidiagonal(k) != abutment.h[&k] {
                mismatches.push((self.fc.p_max() + 1, k));
            }
        }
        Ok(Convergence { infinity, abutment, mismatches })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::Field;
    use crate::multicomplex::CochainComplex;

    const F: Field = Field::Prime(65537);

    #[test]
    fn zero_differential_is_associated_graded() {
        let c = CochainComplex::from_maps(F, 0, &[2, 1], vec![Matrix::zeros(F, 1, 2)]).unwrap();
        let fc = FilteredComplex::new(c, 0, 1, |_, k| Subspace::coordinate(F, if k == 0 { 2 } else { 1 }, &[0]))
            .unwrap();
        let mut ss = SpectralSequence::new(&fc);
        let e1 = ss.page(1).unwrap();
        assert_eq!(e1.dim(0, 0), 1);
        assert_eq!(e1.dim(1, -1), 1);
        assert_eq!(e1.dim(1, 0), 1);
        assert!(e1.all_maps_zero());
        let conv = ss.converge().unwrap();
        assert!(conv.holds());
        let rep = ss.structure(3).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.degenerates_at, 1);
    }

    #[test]
    fn two_step_identity_dies_on_page_two() {
        // 0 → k → k → 0 with F^1 the target line.
        let c = CochainComplex::from_maps(F, 0, &[1, 1], vec![Matrix::identity(F, 1)]).unwrap();
        let fc = FilteredComplex::new(c, 0, 1, |_, k| {
            if k == 1 {
                Subspace::full(F, 1)
            } else {
                Subspace::zero(F, 1)
            }
        })
        .unwrap();
        let mut ss = SpectralSequence::new(&fc);
        let e1 = ss.page(1).unwrap();
        assert_eq!(e1.dim(0, 0), 1);
        assert_eq!(e1.dim(1, 0), 1);
        assert_eq!(e1.rank_from(0, 0), 1);
        assert!(ss.page(2).unwrap().cells.is_empty());
        let rep = ss.structure(4).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.degenerates_at, 2);
    }

    #[test]
    fn page_json_and_grid() {
        let c = CochainComplex::from_maps(F, 0, &[1, 1], vec![Matrix::identity(F, 1)]).unwrap();
        let fc = FilteredComplex::new(c, 0, 0, |_, _| unreachable!()).unwrap();
        let mut ss = SpectralSequence::new(&fc);
        let e0 = ss.page(0).unwrap();
        let js = e0.to_json();
        assert_eq!(js["r"], 0);
        assert_eq!(js["maps"][0]["rank"], 1);
        assert!(e0.grid().contains("E_0"));
    }
}
