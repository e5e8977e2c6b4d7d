//! Acceptance suite: every criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cechss::cech::random::{random_problem, ProblemCaps};
use cechss::cech::{cech_multicomplex, par_degrees, verify_products_at, CechProblem, DegreeOracle, OracleKind, Window};
use cechss::exactlinalg::Field;
use cechss::grading::{Monomial, MonomialIdeal, Multidegree};
use cechss::multicomplex::props::check_dq_collapse;
use cechss::multicomplex::random::random_tensor_multicomplex;
use cechss::mvss::{mv_les, mv_les_at, run_with, Variant};

const F: Field = Field::Prime(65537);
const SWEEP_PROBLEMS: usize = 50;
const SWEEP_SEED: u64 = 0x5eed;
const TIME_LIMIT: Duration = Duration::from_secs(300);

/// Tallies for one multidegree of one sweep problem.
#[derive(Default)]
struct Tally {
    degrees: usize,
    nonzero_degrees: usize,
    augmented: (usize, usize),
    truncated: (usize, usize),
    d_and_sequence: usize,
    convergence: (usize, usize),
    e1: (usize, usize),
    dq: (usize, usize),
    runs: usize,
    structure_failures: usize,
    bidegree_failures: usize,
    signed_unit_failures: usize,
    three_group_runs: usize,
    late_degeneration: usize,
}

impl Tally {
    fn add(&mut self, o: &Tally) {
        let pair = |a: &mut (usize, usize), b: (usize, usize)| {
            a.0 += b.0;
            a.1 += b.1;
        };
        self.degrees += o.degrees;
        self.nonzero_degrees += o.nonzero_degrees;
        pair(&mut self.augmented, o.augmented);
        pair(&mut self.truncated, o.truncated);
        self.d_and_sequence += o.d_and_sequence;
        pair(&mut self.convergence, o.convergence);
        pair(&mut self.e1, o.e1);
        pair(&mut self.dq, o.dq);
        self.runs += o.runs;
        self.structure_failures += o.structure_failures;
        self.bidegree_failures += o.bidegree_failures;
        self.signed_unit_failures += o.signed_unit_failures;
        self.three_group_runs += o.three_group_runs;
        self.late_degeneration += o.late_degeneration;
    }
}

fn at_degree(p: &CechProblem, b: &Multidegree) -> cechss::Result<Tally> {
    let mut t = Tally { degrees: 1, ..Tally::default() };
    let rep = verify_products_at(p, b)?;
    t.augmented.0 = rep.comparisons;
    for m in &rep.mismatches {
        match m.check.as_str() {
            "augmented" => t.augmented.1 += 1,
            c if c.starts_with("truncated") => t.truncated.1 += 1,
            _ => t.d_and_sequence += 1,
        }
    }
    t.augmented.1 += rep.torsion_failures.len();
    t.d_and_sequence += rep.exact_sequence_failures.len();
    t.truncated.0 = rep.comparisons;

    let mc = cech_multicomplex(p, b, false)?;
    t.dq = (1, usize::from(!check_dq_collapse(&mc)?.is_empty()));

    let mut oracle = DegreeOracle::new(p, b);
    let len = p.product_sequence(p.full_set())?.len() as i64;
    t.nonzero_degrees = usize::from((0..=len).any(|i| oracle.h(OracleKind::Product, p.full_set(), i) > 0));
    for v in Variant::ALL {
        let r = run_with(p, &mc, v, 1, &mut oracle)?;
        t.runs += 1;
        t.convergence.0 += 1;
        if !(r.convergence_mismatches.is_empty() && r.abutment_mismatches.is_empty() && r.filtration_matches) {
            t.convergence.1 += 1;
        }
        t.e1.0 += 1;
        if !r.e1_mismatches.is_empty() {
            t.e1.1 += 1;
        }
        if !r.structure_holds {
            t.structure_failures += 1;
        }
        let bidegree_ok = r.pages.iter().all(|pg| {
            pg.maps.iter().all(|m| m.to.0 - m.from.0 == pg.r && m.to.1 - m.from.1 == 1 - pg.r)
        });
        if !bidegree_ok {
            t.bidegree_failures += 1;
        }
        if r.signed_unit_maps == Some(false) {
            t.signed_unit_failures += 1;
        }
        if v == Variant::OneA && p.n() == 3 {
            t.three_group_runs += 1;
            if r.degenerates_at > 3 {
                t.late_degeneration += 1;
            }
        }
    }
    Ok(t)
}

struct Line {
    passed: bool,
    text: String,
}

fn line(n: usize, passed: bool, text: String) -> Line {
    Line { passed, text: format!("[{}] criterion {n}: {text}", if passed { "PASS" } else { "FAIL" }) }
}

fn sweep() -> (Tally, Duration, usize) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED);
    let mut total = Tally::default();
    let mut windows = 0;
    for _ in 0..SWEEP_PROBLEMS {
        let p = random_problem(&mut rng, F, ProblemCaps::default(), None).expect("valid random problem");
        assert_eq!(p.window, Window::new(vec![-4; p.vars], vec![4; p.vars]).unwrap());
        windows += p.window.len();
        for (_, t) in par_degrees(&p, 0, |b| at_degree(&p, b)).expect("sweep runs") {
            total.add(&t);
        }
    }
    (total, start.elapsed(), windows)
}

fn tensor_checks() -> (usize, usize, usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED + 1);
    let (mut dq_fail, mut involution_fail, mut invariance_fail, mut cases) = (0, 0, 0, 0);
    for i in 0..100 {
        let n = 1 + i % 4;
        let mc = random_tensor_multicomplex(&mut rng, F, n, 3).expect("random tensor");
        // Half of the cases are anticommutative.
        let mc = if i % 2 == 0 { mc } else { mc.sigma() };
        cases += 1;
        if !check_dq_collapse(&mc).expect("dq").is_empty() {
            dq_fail += 1;
        }
        let s = mc.sigma();
        if s.sigma() != mc || s.validate().is_err() {
            involution_fail += 1;
        }
        if s.totalize().unwrap().cohomology_dims() != mc.totalize().unwrap().cohomology_dims() {
            invariance_fail += 1;
        }
    }
    (cases, dq_fail, involution_fail, invariance_fail)
}

fn les_checks() -> (usize, usize, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED + 2);
    let (mut degrees, mut failures) = (0, 0);
    for _ in 0..20 {
        let p = random_problem(&mut rng, F, ProblemCaps::default(), Some(2)).expect("two groups");
        for r in mv_les(&p, 0).expect("les") {
            degrees += 1;
            failures += usize::from(!r.holds());
        }
    }
    let m = |t: &str| Monomial::parse(t, 2).unwrap();
    let hand = CechProblem::new(F, 2, MonomialIdeal::zero(2), vec![vec![m("x1")], vec![m("x2")]], None).unwrap();
    let r = mv_les_at(&hand, &Multidegree(vec![-1, -1])).expect("hand case");
    let hand_ok = r.holds() && r.nonzero() == vec![(2, [0, 1, 1])] && r.terms.iter().all(|t| t.k != 2 || t.ranks[1] == 1);
    (degrees, failures, hand_ok)
}

fn determinism() -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let job = dir.path().join("job.json");
    fs::write(
        &job,
        r#"{"field": {"prime": 65537}, "variables": 2, "quotient": ["x1^2*x2"],
            "groups": [["x1", "x2^2"], ["x1*x2"]], "window": [[-3, -3], [3, 3]],
            "tasks": ["cohomology", "verify34", "mvss", "les", "props2"], "pages": 3}"#,
    )
    .map_err(|e| e.to_string())?;
    let mut reports = Vec::new();
    for (i, jobs) in ["1", "3"].iter().enumerate() {
        let out = dir.path().join(format!("out{i}"));
        let o = Command::new(env!("CARGO_BIN_EXE_cechss"))
            .args(["compute", job.to_str().unwrap(), "--out", out.to_str().unwrap(), "--jobs", jobs])
            .output()
            .map_err(|e| e.to_string())?;
        if o.status.code() != Some(0) {
            return Err(format!("compute exited with {:?}", o.status.code()));
        }
        reports.push(fs::read(out.join("report.json")).map_err(|e| e.to_string())?);
    }
    if reports[0] == reports[1] {
        Ok(())
    } else {
        Err("report.json differs between runs".to_string())
    }
}

fn main() {
    let mut lines = Vec::new();
    let (t, elapsed, windows) = sweep();
    lines.push(line(
        1,
        t.augmented.1 == 0 && elapsed < TIME_LIMIT,
        format!(
            "augmented interior vs product Čech: {} problems, {} degrees ({} with nonzero cohomology), {} mismatches, {:.1}s (limit {}s)",
            SWEEP_PROBLEMS,
            windows,
            t.nonzero_degrees,
            t.augmented.1,
            elapsed.as_secs_f64(),
            TIME_LIMIT.as_secs()
        ),
    ));
    lines.push(line(
        2,
        t.truncated.1 == 0 && t.d_and_sequence == 0,
        format!(
            "interior vs truncated product Čech over all group subsets: {} mismatches, {} D / four-term failures",
            t.truncated.1, t.d_and_sequence
        ),
    ));
    lines.push(line(
        3,
        t.convergence.1 == 0,
        format!("E_∞ antidiagonals vs oracle abutments, 4 variants: {} runs, {} failing", t.convergence.0, t.convergence.1),
    ));
    lines.push(line(
        4,
        t.e1.1 == 0,
        format!("E_1 vs oracle sum/product cohomology, 4 variants: {} runs, {} failing", t.e1.0, t.e1.1),
    ));
    let (cases, dq_fail, involution_fail, invariance_fail) = tensor_checks();
    lines.push(line(
        5,
        t.dq.1 == 0 && dq_fail == 0,
        format!(
            "D/Q collapse: {} Čech multicomplexes ({} failing), {} tensor multicomplexes ({} failing)",
            t.dq.0, t.dq.1, cases, dq_fail
        ),
    ));
    let (les_degrees, les_failures, hand_ok) = les_checks();
    lines.push(line(
        6,
        les_failures == 0 && hand_ok,
        format!(
            "two-group long exact sequence: 20 problems, {les_degrees} degrees, {les_failures} failing; hand case 0 → k → k → 0 {}",
            if hand_ok { "ok" } else { "wrong" }
        ),
    ));
    lines.push(line(
        7,
        t.structure_failures == 0 && t.bidegree_failures == 0 && t.signed_unit_failures == 0 && t.late_degeneration == 0,
        format!(
            "page structure on {} runs: {} structural, {} bidegree, {} sign failures; {} three-group 1a runs, {} degenerate after page 3",
            t.runs,
            t.structure_failures,
            t.bidegree_failures,
            t.signed_unit_failures,
            t.three_group_runs,
            t.late_degeneration
        ),
    ));
    lines.push(line(
        8,
        involution_fail == 0 && invariance_fail == 0,
        format!(
            "σ on {cases} random multicomplexes: {involution_fail} involution failures, {invariance_fail} cohomology changes"
        ),
    ));
    let det = determinism();
    lines.push(line(
        9,
        det.is_ok(),
        match &det {
            Ok(()) => "repeated compute gives byte-identical report.json (1 and 3 workers)".to_string(),
            Err(e) => e.clone(),
        },
    ));

    for l in &lines {
        println!("{}", l.text);
    }
    let failed = lines.iter().filter(|l| !l.passed).count();
    println!("acceptance: {} of {} criteria pass", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
