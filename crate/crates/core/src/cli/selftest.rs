//! The `selftest` command: seeded randomized property suites on tensor
//! multicomplexes and small Čech problems.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cech::random::{random_problem, ProblemCaps};
use crate::cech::{cech_multicomplex, verify_products_at};
use crate::exactlinalg::Field;
use crate::multicomplex::props::{check_all, PropertyFailure};
use crate::multicomplex::random::random_tensor_multicomplex;
use crate::multicomplex::Multicomplex;
use crate::mvss::{run_at, Variant};
use crate::Result;

#[derive(Clone, Copy, Debug)]
pub struct SelftestOptions {
    pub seed: u64,
    pub max_vars: usize,
    pub max_groups: usize,
    pub tensors: usize,
    pub problems: usize,
    /// Negate one differential on a nonzero square of every tensor case.
    pub corrupt_signs: bool,
}

impl Default for SelftestOptions {
    fn default() -> SelftestOptions {
        SelftestOptions { seed: 0, max_vars: 3, max_groups: 3, tensors: 12, problems: 3, corrupt_signs: false }
    }
}

pub struct SelftestOutcome {
    pub passed: bool,
    pub log: String,
}

struct Counterexample {
    size: usize,
    text: String,
}

fn keep_smallest(best: &mut Option<Counterexample>, size: usize, text: String) {
    if best.as_ref().is_none_or(|b| size < b.size) {
        *best = Some(Counterexample { size, text });
    }
}

fn describe(failures: &[PropertyFailure]) -> String {
    failures.iter().map(|f| format!("  {f}\n")).collect()
}

/// Negates `d^{q,i}` at the first point where some square through it is
/// nonzero. Returns false when every square vanishes.
fn corrupt(mc: &mut Multicomplex) -> Result<bool> {
    let points: Vec<Vec<i64>> = mc.points().collect();
    for q in &points {
        for i in 0..mc.n() {
            for j in (0..mc.n()).filter(|&j| j != i) {
                let mut t = q.clone();
                t[i] += 1;
                if !mc.diff(&t, j).mul(&mc.diff(q, i))?.is_zero() {
                    let d = mc.diff(q, i).scale_i64(-1);
                    mc.set_diff(q, i, d)?;
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Where the total differential of a corrupted multicomplex fails to
/// square to zero.
fn square_zero_locus(mc: &Multicomplex) -> String {
    let mut out = String::new();
    if let Err(v) = mc.validate() {
        let _ = writeln!(out, "  multicomplex: {v}");
    }
    if let Err(e) = mc.totalize() {
        let _ = writeln!(out, "  {e}");
    }
    out
}

pub fn selftest(opts: &SelftestOptions) -> Result<SelftestOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let field = Field::Prime(65537);
    let mut log = String::new();
    let mut smallest: Option<Counterexample> = None;
    let mut failed_cases = 0;
    let max_n = opts.max_groups.clamp(1, 4);

    let mut corrupted = 0;
    for case in 0..opts.tensors {
        let n = rng.gen_range(1..=max_n);
        let mut mc = random_tensor_multicomplex(&mut rng, field, n, 3)?;
        if opts.corrupt_signs && n >= 2 && corrupt(&mut mc)? {
            corrupted += 1;
            failed_cases += 1;
            let text = format!("tensor case {case} (n = {n}), corrupted signs:\n{}", square_zero_locus(&mc));
            keep_smallest(&mut smallest, mc.total_dim(), text);
            continue;
        }
        let failures = check_all(&mc)?;
        if !failures.is_empty() {
            failed_cases += 1;
            let text = format!("tensor case {case} (n = {n}):\n{}{}", describe(&failures), mc.dump_text());
            keep_smallest(&mut smallest, mc.total_dim(), text);
        }
    }
    let _ = writeln!(log, "tensor multicomplexes: {} cases, {} failing", opts.tensors, failed_cases);
    if opts.corrupt_signs {
        let _ = writeln!(log, "sign corruption applied to {corrupted} cases");
    }

    let caps = ProblemCaps {
        max_vars: opts.max_vars.max(1),
        max_groups: opts.max_groups.max(1),
        window_radius: 1,
        ..ProblemCaps::default()
    };
    let mut failing_problems = 0;
    for case in 0..opts.problems {
        let p = random_problem(&mut rng, field, caps, None)?;
        let mut problem_failed = false;
        for b in p.window.degrees() {
            let mc = cech_multicomplex(&p, &b, false)?;
            let mut failures = check_all(&mc)?;
            if !verify_products_at(&p, &b)?.holds() {
                failures.push(PropertyFailure {
                    property: "product-comparison".to_string(),
                    detail: "interior and product-sequence cohomology differ".to_string(),
                });
            }
            for r in run_at(&p, &b, &Variant::ALL, 1)? {
                if !r.holds() {
                    failures.push(PropertyFailure {
                        property: format!("mvss:{}", r.variant),
                        detail: "first page or abutment disagrees with the oracle".to_string(),
                    });
                }
            }
            if !failures.is_empty() {
                problem_failed = true;
                let groups: Vec<Vec<String>> =
                    p.groups.iter().map(|g| g.iter().map(ToString::to_string).collect()).collect();
                let text = format!(
                    "Čech problem {case}: groups {groups:?}, quotient {:?}, degree {b}:\n{}",
                    p.ideal.generators().iter().map(ToString::to_string).collect::<Vec<_>>(),
                    describe(&failures)
                );
                keep_smallest(&mut smallest, mc.total_dim(), text);
            }
        }
        failing_problems += usize::from(problem_failed);
    }
    let _ = writeln!(log, "Čech problems: {} cases, {} failing", opts.problems, failing_problems);

    let passed = smallest.is_none();
    if let Some(c) = smallest {
        let _ = writeln!(log, "smallest counterexample:\n{}", c.text.trim_end());
    }
    let _ = writeln!(log, "selftest seed {}: {}", opts.seed, if passed { "PASS" } else { "FAIL" });
    Ok(SelftestOutcome { passed, log })
}
