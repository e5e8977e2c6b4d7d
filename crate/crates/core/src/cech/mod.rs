//! Čech complexes of monomial sequences over `R/J`, one multidegree at a
//! time, and the n-fold Čech multicomplex `C^•_{a_1}(⋯(C^•_{a_n}(M)))`.

mod oracle;
pub mod random;
mod verify;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use oracle::{cech_cohomology, local_cohomology_oracle, CohomologyTable, DegreeOracle, OracleKind};
pub use verify::{
    verify_annihilation, verify_products, verify_products_at, AnnihilationReport, Mismatch, ProductReport,
    UnresolvedClass,
};

use crate::exactlinalg::{Field, Matrix};
use crate::grading::{localized_piece_dim, product_sequence, Monomial, MonomialIdeal, Multidegree, Support};
use crate::multicomplex::{Basis, CochainComplex, Entry, Flavor, Multicomplex, RegionSpec};
use crate::{Error, Result};

/// A finite box of multidegrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl Window {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Window> {
        if lo.len() != hi.len() {
            return Err(Error::input(format!(
                "window corners have lengths {} and {}",
                lo.len(),
                hi.len()
            )));
        }
        if let Some(j) = (0..lo.len()).find(|&j| lo[j] > hi[j]) {
            return Err(Error::input(format!(
                "window is empty in coordinate {}: {} > {}",
                j + 1,
                lo[j],
                hi[j]
            )));
        }
        Ok(Window { lo, hi })
    }

    /// `[−(g_j+1), g_j+1]` in each coordinate, `g_j` the largest exponent of
    /// `x_j` among the group and quotient generators.
    pub fn default_for(vars: usize, groups: &[Vec<Monomial>], ideal: &MonomialIdeal) -> Window {
        let mut g = vec![0i64; vars];
        for m in groups.iter().flatten().chain(ideal.generators()) {
            for (j, &e) in m.0.iter().enumerate() {
                g[j] = g[j].max(i64::from(e));
            }
        }
        Window { lo: g.iter().map(|v| -(v + 1)).collect(), hi: g.iter().map(|v| v + 1).collect() }
    }

    pub fn contains(&self, b: &Multidegree) -> bool {
        b.len() == self.lo.len() && b.0.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| l <= v && v <= h)
    }

    pub fn len(&self) -> usize {
        self.lo.iter().zip(&self.hi).map(|(l, h)| (h - l + 1) as usize).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All multidegrees in lexicographic order.
    pub fn degrees(&self) -> Vec<Multidegree> {
        let mut out = vec![Vec::new()];
        for (l, h) in self.lo.iter().zip(&self.hi) {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (*l..=*h).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Multidegree).collect()
    }
}

/// Field, ring size, quotient ideal `J` (so `M = R/J`), the generator
/// groups `a_1, …, a_n` and the window of multidegrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CechProblem {
    pub field: Field,
    pub vars: usize,
    pub ideal: MonomialIdeal,
    pub groups: Vec<Vec<Monomial>>,
    pub window: Window,
}

impl CechProblem {
    pub fn new(
        field: Field,
        vars: usize,
        ideal: MonomialIdeal,
        groups: Vec<Vec<Monomial>>,
        window: Option<Window>,
    ) -> Result<CechProblem> {
        if vars == 0 || vars > crate::grading::MAX_VARS {
            return Err(Error::input(format!("variable count {vars} outside 1..={}", crate::grading::MAX_VARS)));
        }
        if groups.is_empty() {
            return Err(Error::input("at least one generator group is required"));
        }
        if let Some(i) = groups.iter().position(|g| g.is_empty()) {
            return Err(Error::input(format!("group {} is empty", i + 1)));
        }
        if groups.iter().any(|g| g.len() > 16) || groups.len() > 16 {
            return Err(Error::input("at most 16 groups of at most 16 generators are supported"));
        }
        if let Some(m) = groups.iter().flatten().find(|m| m.vars() != vars) {
            return Err(Error::input(format!("monomial {m} does not have {vars} exponents")));
        }
        if ideal.vars() != vars {
            return Err(Error::input(format!("quotient ideal lives in {} variables, not {vars}", ideal.vars())));
        }
        let window = window.unwrap_or_else(|| Window::default_for(vars, &groups, &ideal));
        if window.lo.len() != vars {
            return Err(Error::input(format!(
                "window has {} coordinates but the ring has {vars} variables",
                window.lo.len()
            )));
        }
        Ok(CechProblem { field, vars, ideal, groups, window })
    }

    pub fn n(&self) -> usize {
        self.groups.len()
    }

    /// Generators of the groups in `set`, concatenated in group order: a
    /// generating sequence of `Σ_{i∈set} a_i`.
    pub fn sum_sequence(&self, set: u32) -> Vec<Monomial> {
        (0..self.n()).filter(|i| set >> i & 1 == 1).flat_map(|i| self.groups[i].iter().cloned()).collect()
    }

    /// The product sequence of the groups in `set` (nonempty).
    pub fn product_sequence(&self, set: u32) -> Result<Vec<Monomial>> {
        let chosen: Vec<Vec<Monomial>> =
            (0..self.n()).filter(|i| set >> i & 1 == 1).map(|i| self.groups[i].clone()).collect();
        product_sequence(&chosen)
    }

    pub fn full_set(&self) -> u32 {
        (1u32 << self.n()) - 1
    }

    /// `dim M_b`.
    pub fn module_piece(&self, b: &Multidegree) -> usize {
        usize::from(localized_piece_dim(Support::default(), &self.ideal, b))
    }

    fn check_degree(&self, b: &Multidegree) -> Result<()> {
        if !self.window.contains(b) {
            return Err(Error::input(format!("multidegree {b} lies outside the window")));
        }
        Ok(())
    }
}

/// Subsets of `{0..len}` of size `t` as bitmasks in lexicographic order.
pub(crate) fn index_subsets(len: usize, t: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut stack = vec![(0usize, 0u32, t)];
    while let Some((start, acc, left)) = stack.pop() {
        if left == 0 {
            out.push(acc);
            continue;
        }
        for i in (start..len).rev() {
            if len - i >= left {
                stack.push((i + 1, acc | 1 << i, left - 1));
            }
        }
    }
    out
}

pub(crate) fn support_of(seq: &[Monomial], set: u32) -> Support {
    seq.iter()
        .enumerate()
        .filter(|(i, _)| set >> i & 1 == 1)
        .fold(Support::default(), |acc, (_, m)| acc.union(&m.support()))
}

pub(crate) fn set_label(set: u32) -> String {
    let idx: Vec<String> = (0..32).filter(|i| set >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", idx.join(","))
}

/// Live subsets per Čech degree and the differentials between them.
/// Degree `t` is indexed by the `t`-subsets whose localization piece is
/// nonzero; the map `S → S ∪ {j}` carries the sign `(−1)^{#{s∈S : s<j}}`.
pub(crate) fn cech_matrices(
    field: Field,
    seq: &[Monomial],
    ideal: &MonomialIdeal,
    b: &Multidegree,
    truncated: bool,
) -> (Vec<Vec<u32>>, Vec<Matrix>) {
    let len = seq.len();
    let live: Vec<Vec<u32>> = (0..=len)
        .map(|t| {
            if truncated && t == 0 {
                return Vec::new();
            }
            index_subsets(len, t)
                .into_iter()
                .filter(|&s| localized_piece_dim(support_of(seq, s), ideal, b) == 1)
                .collect()
        })
        .collect();
    let mut mats = Vec::with_capacity(len + 1);
    for t in 0..=len {
        let rows = live.get(t + 1).map_or(0, Vec::len);
        let mut d = Matrix::zeros(field, rows, live[t].len());
        if t < len {
            let pos: HashMap<u32, usize> = live[t + 1].iter().enumerate().map(|(i, &s)| (s, i)).collect();
            for (c, &s) in live[t].iter().enumerate() {
                for j in (0..len).filter(|j| s >> j & 1 == 0) {
                    if let Some(&r) = pos.get(&(s | 1 << j)) {
                        let sign = if (s & ((1 << j) - 1)).count_ones() % 2 == 1 { -1 } else { 1 };
                        d.set_i64(r, c, sign);
                    }
                }
            }
        }
        mats.push(d);
    }
    (live, mats)
}

/// The Čech complex of `seq` on `M = R/J` at multidegree `b`, in degrees
/// `0..=len` (degree 0 is empty when `truncated`). An empty sequence gives
/// `M_b` in degree 0.
pub fn cech_complex(
    field: Field,
    seq: &[Monomial],
    ideal: &MonomialIdeal,
    b: &Multidegree,
    truncated: bool,
) -> Result<CochainComplex> {
    let (live, mats) = cech_matrices(field, seq, ideal, b, truncated);
    let spaces = live.iter().map(|subs| Basis::plain(subs.iter().map(|&s| set_label(s)).collect())).collect();
    CochainComplex::new(field, 0, spaces, mats)
}

/// The n-fold Čech multicomplex at `b`: `C^q = ⊕ M_b` localized at the
/// product of the chosen generators, over tuples `(S_1, …, S_n)` with
/// `|S_i| = q_i`. Direction `i` only involves `S_i`. With `punctured`, the
/// origin entry is removed.
pub fn cech_multicomplex(problem: &CechProblem, b: &Multidegree, punctured: bool) -> Result<Multicomplex> {
    problem.check_degree(b)?;
    let n = problem.n();
    let sizes: Vec<usize> = problem.groups.iter().map(Vec::len).collect();
    let live_tuples = |q: &[i64]| -> Vec<(Vec<u32>, String)> {
        let mut tuples: Vec<Vec<u32>> = vec![Vec::new()];
        for i in 0..n {
            let subs = index_subsets(sizes[i], q[i] as usize);
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    subs.iter().map(move |&s| {
                        let mut t = t.clone();
                        t.push(s);
                        t
                    })
                })
                .collect();
        }
        tuples
            .into_iter()
            .filter(|t| {
                let supp = t
                    .iter()
                    .zip(&problem.groups)
                    .fold(Support::default(), |acc, (&s, g)| acc.union(&support_of(g, s)));
                localized_piece_dim(supp, &problem.ideal, b) == 1
            })
            .map(|t| {
                let label = t.iter().map(|&s| set_label(s)).collect::<Vec<_>>().join("|");
                (t, label)
            })
            .collect()
    };
    let lo = vec![0i64; n];
    let hi: Vec<i64> = sizes.iter().map(|&m| m as i64).collect();
    let mut table: HashMap<Vec<i64>, Vec<(Vec<u32>, String)>> = HashMap::new();
    let mut mc = Multicomplex::with_entries(problem.field, lo, hi, Flavor::Commutative, |q| {
        let tuples = live_tuples(q);
        let labels = tuples.iter().map(|(_, l)| l.clone()).collect();
        table.insert(q.to_vec(), tuples);
        Entry { labels }
    })?;
    let points: Vec<Vec<i64>> = mc.points().collect();
    for q in &points {
        let src = &table[q];
        if src.is_empty() {
            continue;
        }
        for i in 0..n {
            let mut t = q.clone();
            t[i] += 1;
            let Some(tgt) = table.get(&t) else {
                continue;
            };
            let pos: HashMap<&Vec<u32>, usize> = tgt.iter().enumerate().map(|(r, (tu, _))| (tu, r)).collect();
            let mut d = Matrix::zeros(problem.field, tgt.len(), src.len());
            for (c, (tuple, _)) in src.iter().enumerate() {
                let s = tuple[i];
                for j in (0..sizes[i]).filter(|j| s >> j & 1 == 0) {
                    let mut image = tuple.clone();
                    image[i] = s | 1 << j;
                    if let Some(&r) = pos.get(&image) {
                        let sign = if (s & ((1 << j) - 1)).count_ones() % 2 == 1 { -1 } else { 1 };
                        d.set_i64(r, c, sign);
                    }
                }
            }
            mc.set_diff(q, i, d)?;
        }
    }
    if punctured {
        mc = mc.restrict(&RegionSpec::punctured_all())?;
    }
    Ok(mc)
}

/// Runs `job` on every multidegree of the window in parallel and returns
/// the results in window order. A `jobs` of 0 uses the global pool.
pub fn par_degrees<T, F>(problem: &CechProblem, jobs: usize, job: F) -> Result<Vec<(Multidegree, T)>>
where
    T: Send,
    F: Fn(&Multidegree) -> Result<T> + Sync,
{
    let degrees = problem.window.degrees();
    let run = || {
        degrees
            .par_iter()
            .map(|b| job(b).map(|t| (b.clone(), t)))
            .collect::<Result<Vec<_>>>()
    };
    if jobs == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::input(format!("cannot start {jobs} workers: {e}")))?
            .install(run)
    }
}
