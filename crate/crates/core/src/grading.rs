//! Multigraded monomial machinery: monomials, monomial ideals, and the graded
//! pieces of localizations `(R/J)_w` of a monomial quotient.
//!
//! For a monomial `w` the localization `(R/J)_w` only depends on the support
//! of `w`, so localizations are keyed by [`Support`] sets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest supported number of ring variables.
pub const MAX_VARS: usize = 64;

/// A ℤ^m grading degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(pub Vec<i64>);

impl Multidegree {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn shifted(&self, by: &Monomial, times: u32) -> Multidegree {
        Multidegree(
            self.0
                .iter()
                .zip(&by.0)
                .map(|(b, &e)| b + i64::from(e) * i64::from(times))
                .collect(),
        )
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Set of variable indices (0-based), as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Support(pub u64);

impl Support {
    pub fn from_indices(idx: &[usize]) -> Support {
        Support(idx.iter().fold(0, |acc, &i| acc | (1 << i)))
    }

    pub fn contains(&self, var: usize) -> bool {
        self.0 >> var & 1 == 1
    }

    pub fn is_subset(&self, other: &Support) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(&self, other: &Support) -> Support {
        Support(self.0 | other.0)
    }
}

/// A monomial `x^e`, stored by its exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(vars: usize) -> Monomial {
        Monomial(vec![0; vars])
    }

    pub fn var(vars: usize, index: usize) -> Monomial {
        let mut e = vec![0; vars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn vars(&self) -> usize {
        self.0.len()
    }

    pub fn support(&self) -> Support {
        Support(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(0, |acc, (i, _)| acc | (1 << i)),
        )
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn degree(&self) -> Multidegree {
        Multidegree(self.0.iter().map(|&e| i64::from(e)).collect())
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Parses `x1^2*x3` style text (1-based variable indices; `1` is the
    /// unit monomial).
    pub fn parse(text: &str, vars: usize) -> Result<Monomial> {
        let mut exps = vec![0u32; vars];
        let text = text.trim();
        if text == "1" {
            return Ok(Monomial(exps));
        }
        if text.is_empty() {
            return Err(Error::input("empty monomial"));
        }
        for token in text.split('*') {
            let token = token.trim();
            let (base, exp) = match token.split_once('^') {
                Some((b, e)) => {
                    let e = u32::from_str(e.trim())
                        .map_err(|_| Error::input(format!("bad exponent in monomial token '{token}'")))?;
                    (b.trim(), e)
                }
                None => (token, 1),
            };
            let idx = base
                .strip_prefix('x')
                .and_then(|s| usize::from_str(s).ok())
                .ok_or_else(|| Error::input(format!("unparsable monomial token '{token}'")))?;
            if idx == 0 || idx > vars {
                return Err(Error::input(format!(
                    "variable index in '{token}' outside 1..={vars}"
                )));
            }
            exps[idx - 1] += exp;
        }
        Ok(Monomial(exps))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A monomial ideal with a minimal generating set (no generator divides
/// another). The empty set is the zero ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialIdeal {
    vars: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(vars: usize, gens: impl IntoIterator<Item = Monomial>) -> Result<MonomialIdeal> {
        let mut all: Vec<Monomial> = gens.into_iter().collect();
        if let Some(bad) = all.iter().find(|g| g.vars() != vars) {
            return Err(Error::input(format!(
                "monomial {bad} has {} exponents, ring has {vars} variables",
                bad.vars()
            )));
        }
        all.sort();
        all.dedup();
        let minimal: Vec<Monomial> = all
            .iter()
            .filter(|g| !all.iter().any(|h| h != *g && h.divides(g)))
            .cloned()
            .collect();
        Ok(MonomialIdeal { vars, gens: minimal })
    }

    pub fn zero(vars: usize) -> MonomialIdeal {
        MonomialIdeal { vars, gens: Vec::new() }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }
}

/// All n-fold products `a_{1,i1} ⋯ a_{n,in}`, ordered lexicographically in
/// `(i1, …, in)`.
pub fn product_sequence(groups: &[Vec<Monomial>]) -> Result<Vec<Monomial>> {
    if groups.is_empty() {
        return Err(Error::input("product sequence of zero groups"));
    }
    if let Some(pos) = groups.iter().position(|g| g.is_empty()) {
        return Err(Error::input(format!("group {} is empty", pos + 1)));
    }
    let mut out: Vec<Monomial> = groups[0].clone();
    for group in &groups[1..] {
        out = out
            .iter()
            .flat_map(|prefix| group.iter().map(move |g| prefix.mul(g)))
            .collect();
    }
    Ok(out)
}

/// Dimension (0 or 1) of the degree-`b` piece of `(R/J)_w` with
/// `supp(w) = w_support`.
///
/// The piece is spanned by `x^b` when `b_j ≥ 0` off the support and no
/// generator of `J` divides `x^b` after inverting the support variables.
pub fn localized_piece_dim(w_support: Support, ideal: &MonomialIdeal, b: &Multidegree) -> u8 {
    let off = |j: usize| !w_support.contains(j);
    if b.0.iter().enumerate().any(|(j, &bj)| off(j) && bj < 0) {
        return 0;
    }
    let killed = ideal.generators().iter().any(|g| {
        g.0.iter()
            .enumerate()
            .all(|(j, &gj)| !off(j) || i64::from(gj) <= b.0[j])
    });
    u8::from(!killed)
}

/// Coefficient of the canonical map `(R/J)_{w} → (R/J)_{w'}` on degree-`b`
/// pieces, for `supp(w) ⊆ supp(w')`. It is 1 exactly when both pieces are
/// nonzero: the basis monomial `x^b` maps to itself.
pub fn multiplication_map(src: Support, dst: Support, ideal: &MonomialIdeal, b: &Multidegree) -> Result<i64> {
    if !src.is_subset(&dst) {
        return Err(Error::contract(format!(
            "localization support {:#b} is not contained in {:#b}",
            src.0, dst.0
        )));
    }
    let both = localized_piece_dim(src, ideal, b) == 1 && localized_piece_dim(dst, ideal, b) == 1;
    Ok(i64::from(both))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(text: &str, vars: usize) -> Monomial {
        Monomial::parse(text, vars).unwrap()
    }

    fn deg(v: &[i64]) -> Multidegree {
        Multidegree(v.to_vec())
    }

    #[test]
    fn product_sequence_examples() {
        let x = m("x1", 2);
        let y = m("x2", 2);
        assert_eq!(product_sequence(&[vec![x.clone()], vec![y.clone()]]).unwrap(), vec![m("x1*x2", 2)]);

        let (x, y, z) = (m("x1", 3), m("x2", 3), m("x3", 3));
        assert_eq!(
            product_sequence(&[vec![x.clone(), y.clone()], vec![z.clone()]]).unwrap(),
            vec![m("x1*x3", 3), m("x2*x3", 3)]
        );
        assert_eq!(
            product_sequence(&[vec![x.clone(), y.clone()], vec![x.clone(), z.clone()]]).unwrap(),
            vec![m("x1^2", 3), m("x1*x3", 3), m("x1*x2", 3), m("x2*x3", 3)]
        );
        assert!(product_sequence(&[vec![x], vec![]]).is_err());
    }

    #[test]
    fn localized_piece_examples() {
        let zero = MonomialIdeal::zero(2);
        let jx = MonomialIdeal::new(2, [m("x1", 2)]).unwrap();
        assert_eq!(localized_piece_dim(Support::from_indices(&[0, 1]), &zero, &deg(&[-1, -1])), 1);
        assert_eq!(localized_piece_dim(Support::from_indices(&[0]), &zero, &deg(&[-1, -1])), 0);
        assert_eq!(localized_piece_dim(Support::default(), &jx, &deg(&[1, 0])), 0);
        assert_eq!(localized_piece_dim(Support::from_indices(&[1]), &jx, &deg(&[0, -3])), 1);
    }

    #[test]
    fn multiplication_map_examples() {
        let zero = MonomialIdeal::zero(2);
        let e = Support::default();
        let sx = Support::from_indices(&[0]);
        let sxy = Support::from_indices(&[0, 1]);
        assert_eq!(multiplication_map(e, sx, &zero, &deg(&[2, 0])).unwrap(), 1);
        assert_eq!(multiplication_map(e, sx, &zero, &deg(&[-1, 0])).unwrap(), 0);
        assert_eq!(multiplication_map(sx, sxy, &zero, &deg(&[-2, 3])).unwrap(), 1);
        assert!(multiplication_map(sxy, sx, &zero, &deg(&[0, 0])).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(m("x1^2*x3", 3), Monomial(vec![2, 0, 1]));
        assert_eq!(m("x1^2*x3", 3).to_string(), "x1^2*x3");
        assert_eq!(m("1", 2).to_string(), "1");
        let err = Monomial::parse("x1*y2", 2).unwrap_err().to_string();
        assert!(err.contains("y2"), "{err}");
        assert!(Monomial::parse("x3", 2).is_err());
    }

    #[test]
    fn ideal_minimalizes() {
        let j = MonomialIdeal::new(2, [m("x1^2", 2), m("x1", 2), m("x1*x2", 2), m("x2^3", 2)]).unwrap();
        assert_eq!(j.generators(), &[m("x2^3", 2), m("x1", 2)]);
    }
}
