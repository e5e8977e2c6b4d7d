use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Lattice regions of ℕⁿ attached to the faces of the positive cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionKind {
    /// `F_S`: coordinates outside `S` vanish.
    Face,
    /// `P_S = F_S ∖ {0}`.
    PuncturedFace,
    /// `I_S`: exactly the coordinates in `S` are nonzero.
    InteriorFace,
    /// `ℕⁿ ∖ F_S`.
    ComplementFace,
    /// `ℕⁿ ∖ {0}`.
    PuncturedAll,
    /// All coordinates positive.
    InteriorAll,
}

/// A region together with its index set. Directions are 0-based. When
/// `starred` is set, `indices` name the coordinates that vanish on the face
/// instead of the ones that span it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegionSpec {
    pub kind: RegionKind,
    pub indices: Vec<usize>,
    pub starred: bool,
}

impl RegionSpec {
    pub fn new(kind: RegionKind, indices: &[usize]) -> RegionSpec {
        RegionSpec { kind, indices: indices.to_vec(), starred: false }
    }

    pub fn starred(kind: RegionKind, indices: &[usize]) -> RegionSpec {
        RegionSpec { kind, indices: indices.to_vec(), starred: true }
    }

    pub fn face(indices: &[usize]) -> RegionSpec {
        RegionSpec::new(RegionKind::Face, indices)
    }

    pub fn interior(indices: &[usize]) -> RegionSpec {
        RegionSpec::new(RegionKind::InteriorFace, indices)
    }

    pub fn punctured_all() -> RegionSpec {
        RegionSpec::new(RegionKind::PuncturedAll, &[])
    }

    pub fn interior_all() -> RegionSpec {
        RegionSpec::new(RegionKind::InteriorAll, &[])
    }

    /// The spanning set of the face as a bitmask, after resolving stars.
    pub fn resolve(&self, n: usize) -> Result<u32> {
        if self.indices.iter().any(|&i| i >= n) {
            return Err(Error::contract(format!(
                "region index out of range for {n} directions: {:?}",
                self.indices
            )));
        }
        let mut mask = self.indices.iter().fold(0u32, |acc, &i| acc | 1 << i);
        if self.starred {
            mask = !mask & full_mask(n);
        }
        Ok(mask)
    }

    /// Membership test for a lattice point with `n = q.len()`.
    pub fn contains(&self, q: &[i64]) -> Result<bool> {
        let n = q.len();
        let s = self.resolve(n)?;
        Ok(region_contains(self.kind, s, q))
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub(crate) fn nonzero_mask(q: &[i64]) -> u32 {
    q.iter().enumerate().filter(|(_, &v)| v != 0).fold(0, |acc, (i, _)| acc | 1 << i)
}

pub(crate) fn region_contains(kind: RegionKind, s: u32, q: &[i64]) -> bool {
    if q.iter().any(|&v| v < 0) {
        return false;
    }
    let nz = nonzero_mask(q);
    let all = full_mask(q.len());
    match kind {
        RegionKind::Face => nz & !s == 0,
        RegionKind::PuncturedFace => nz & !s == 0 && nz != 0,
        RegionKind::InteriorFace => nz == s,
        RegionKind::ComplementFace => nz & !s != 0,
        RegionKind::PuncturedAll => nz != 0,
        RegionKind::InteriorAll => nz == all,
    }
}

/// Subsets of `{0..n}` of size `p` as bitmasks, in lexicographic order of
/// their sorted index tuples.
pub fn subsets_of_size(n: usize, p: usize) -> Vec<u32> {
    fn rec(start: usize, n: usize, left: usize, acc: u32, out: &mut Vec<u32>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..n {
            if n - i < left {
                break;
            }
            rec(i + 1, n, left - 1, acc | 1 << i, out);
        }
    }
    let mut out = Vec::new();
    if p <= n {
        rec(0, n, p, 0, &mut out);
    }
    out
}

pub fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets_of_size(3, 2), vec![0b011, 0b101, 0b110]);
        assert_eq!(subsets_of_size(3, 0), vec![0]);
        assert!(subsets_of_size(2, 3).is_empty());
    }

    #[test]
    fn interior_of_full_face_in_plane() {
        let r = RegionSpec::interior(&[0, 1]);
        assert!(r.contains(&[1, 1]).unwrap());
        assert!(r.contains(&[3, 2]).unwrap());
        assert!(!r.contains(&[0, 1]).unwrap());
        assert!(!r.contains(&[2, 0]).unwrap());
    }

    #[test]
    fn starred_face_uses_complement() {
        let a = RegionSpec::starred(RegionKind::Face, &[0]);
        let b = RegionSpec::face(&[1]);
        for q in [[0, 0], [0, 3], [1, 0], [2, 2]] {
            assert_eq!(a.contains(&q).unwrap(), b.contains(&q).unwrap());
        }
    }

    #[test]
    fn punctured_and_complement() {
        assert!(!RegionSpec::punctured_all().contains(&[0, 0]).unwrap());
        let p1 = RegionSpec::new(RegionKind::PuncturedFace, &[0]);
        assert!(p1.contains(&[2, 0]).unwrap());
        assert!(!p1.contains(&[0, 0]).unwrap());
        let c = RegionSpec::new(RegionKind::ComplementFace, &[0]);
        assert!(c.contains(&[0, 1]).unwrap());
        assert!(!c.contains(&[5, 0]).unwrap());
        assert!(RegionSpec::face(&[2]).contains(&[0, 0]).is_err());
    }
}
