//! The `compute` command: runs the tasks of a job over its window and writes
//! CSV tables, page dumps and a deterministic `report.json`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use super::job::{Job, Task};
use crate::cech::{cech_multicomplex, local_cohomology_oracle, par_degrees, verify_products};
use crate::multicomplex::props::{check_dq_collapse, check_sigma};
use crate::mvss::{infinity_filtration_report, mv_les, run, Variant, VariantRun};
use crate::Result;

/// What a compute run produced.
pub struct Outcome {
    pub report: Value,
    pub summary: String,
    pub passed: bool,
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Runs every task of `job`, writing output files into `out`.
pub fn compute(job: &Job, out: &Path, jobs: usize) -> Result<Outcome> {
    fs::create_dir_all(out)?;
    let p = &job.problem;
    let mut tasks = BTreeMap::new();
    let mut summary = String::new();
    let mut passed = true;
    let _ = writeln!(
        summary,
        "{} variables, {} groups, field {}, window {:?}..{:?} ({} degrees)",
        p.vars,
        p.n(),
        p.field,
        p.window.lo,
        p.window.hi,
        p.window.len()
    );

    for &task in &job.tasks {
        match task {
            Task::Cohomology => {
                let all = p.full_set();
                let sum = local_cohomology_oracle(p.field, &p.sum_sequence(all), &p.ideal, &p.window, true)?;
                let product = local_cohomology_oracle(p.field, &p.product_sequence(all)?, &p.ideal, &p.window, true)?;
                fs::write(out.join("cohomology.csv"), sum.to_csv(p.vars))?;
                fs::write(out.join("cohomology_product.csv"), product.to_csv(p.vars))?;
                let _ = writeln!(
                    summary,
                    "cohomology: {} nonzero (i, b) entries for the sum ideal, {} for the product ideal",
                    sum.rows.len(),
                    product.rows.len()
                );
                tasks.insert(task.to_string(), json!({"sum": sum.to_json(), "product": product.to_json()}));
            }
            Task::Verify34 => {
                let rep = verify_products(p, jobs)?;
                let ok = rep.holds();
                passed &= ok;
                let _ = writeln!(
                    summary,
                    "verify34: {} degrees, {} comparisons, {} mismatches, {} sequence failures  {}",
                    rep.degrees_checked,
                    rep.comparisons,
                    rep.mismatches.len(),
                    rep.exact_sequence_failures.len(),
                    verdict(ok)
                );
                let mut v = serde_json::to_value(&rep)?;
                v["pass"] = json!(ok);
                tasks.insert(task.to_string(), v);
            }
            Task::Mvss(variant) => {
                let runs = run(p, &[variant], job.pages, jobs)?;
                let (v, text, ok) = mvss_summary(variant, &runs);
                passed &= ok;
                summary.push_str(&text);
                let pages: Vec<Value> =
                    runs.iter().filter(|r| r.e1.values().any(|&d| d > 0)).map(VariantRun::to_json).collect();
                fs::write(out.join(format!("pages_{variant}.json")), serde_json::to_string_pretty(&pages)? + "\n")?;
                tasks.insert(task.to_string(), v);
                if variant == Variant::OneA && p.n() == 3 {
                    let reps = infinity_filtration_report(p, jobs)?;
                    let failures: Vec<_> = reps.iter().filter(|r| !r.holds()).map(|r| r.degree.0.clone()).collect();
                    let nonzero: Vec<Value> = reps
                        .iter()
                        .flat_map(|r| {
                            r.terms.iter().filter(|t| t.pieces.iter().any(|&d| d > 0)).map(move |t| {
                                json!({"degree": r.degree.0, "k": t.k, "pieces": t.pieces})
                            })
                        })
                        .collect();
                    let ok = failures.is_empty();
                    passed &= ok;
                    let _ = writeln!(
                        summary,
                        "infinity filtration (1a): {} degrees, {} with nonzero pieces  {}",
                        reps.len(),
                        nonzero.len(),
                        verdict(ok)
                    );
                    tasks.insert(
                        "infinity".to_string(),
                        json!({"degrees": reps.len(), "failures": failures, "nonzero": nonzero, "pass": ok}),
                    );
                }
            }
            Task::Les => {
                let reps = mv_les(p, jobs)?;
                let failures: Vec<Value> = reps
                    .iter()
                    .flat_map(|r| {
                        r.terms.iter().filter(|t| !t.holds()).map(move |t| json!({"degree": r.degree.0, "term": t}))
                    })
                    .collect();
                let nonzero: Vec<Value> = reps
                    .iter()
                    .flat_map(|r| {
                        r.terms.iter().filter(|t| t.dims.iter().any(|&d| d > 0)).map(move |t| {
                            json!({"degree": r.degree.0, "k": t.k, "dims": t.dims, "ranks": t.ranks})
                        })
                    })
                    .collect();
                let ok = failures.is_empty();
                passed &= ok;
                let _ = writeln!(
                    summary,
                    "les: {} degrees, {} nonzero rows, {} failing joints  {}",
                    reps.len(),
                    nonzero.len(),
                    failures.len(),
                    verdict(ok)
                );
                tasks.insert(task.to_string(), json!({"failures": failures, "nonzero": nonzero, "pass": ok}));
            }
            Task::Props2 => {
                let parts = par_degrees(p, jobs, |b| {
                    let mc = cech_multicomplex(p, b, false)?;
                    let mut f = check_dq_collapse(&mc)?;
                    f.extend(check_sigma(&mc)?);
                    Ok(f)
                })?;
                let failures: Vec<Value> = parts
                    .iter()
                    .flat_map(|(b, fs)| fs.iter().map(move |f| json!({"degree": b.0, "property": f.property, "detail": f.detail})))
                    .collect();
                let ok = failures.is_empty();
                passed &= ok;
                let _ = writeln!(
                    summary,
                    "props2: {} multicomplexes, {} failures  {}",
                    parts.len(),
                    failures.len(),
                    verdict(ok)
                );
                tasks.insert(task.to_string(), json!({"multicomplexes": parts.len(), "failures": failures, "pass": ok}));
            }
        }
    }

    let report = json!({"job": job.to_json(), "tasks": tasks, "pass": passed});
    fs::write(out.join("report.json"), serde_json::to_string_pretty(&report)? + "\n")?;
    let _ = writeln!(summary, "overall: {}", verdict(passed));
    Ok(Outcome { report, summary, passed })
}

const TABLE_ROWS: usize = 40;

fn mvss_summary(variant: Variant, runs: &[VariantRun]) -> (Value, String, bool) {
    let failures: Vec<Value> = runs
        .iter()
        .filter(|r| !r.holds())
        .map(|r| {
            json!({
                "degree": r.degree.0,
                "e1_mismatches": r.e1_mismatches,
                "abutment_mismatches": r.abutment_mismatches,
                "convergence_mismatches": r.convergence_mismatches,
                "filtration_matches": r.filtration_matches,
                "structure_holds": r.structure_holds,
                "signed_unit_maps": r.signed_unit_maps,
            })
        })
        .collect();
    let live: Vec<&VariantRun> = runs.iter().filter(|r| r.e1.values().any(|&d| d > 0)).collect();
    let degenerates = live.iter().map(|r| r.degenerates_at).max().unwrap_or(1);
    let ok = failures.is_empty();
    let mut text = String::new();
    let _ = writeln!(
        text,
        "mvss:{variant}: {} degrees, {} with nonzero E1, degenerates by page {degenerates}, {} failures  {}",
        runs.len(),
        live.len(),
        failures.len(),
        verdict(ok)
    );
    for r in live.iter().take(TABLE_ROWS) {
        let e1: Vec<String> =
            r.e1_by_cohomology_index().iter().map(|(&(p, i), &d)| format!("({p},{i}):{d}")).collect();
        let _ = writeln!(text, "  b={:<16} E1 {}  E_r stable at r={}", r.degree.to_string(), e1.join(" "), r.degenerates_at);
    }
    if live.len() > TABLE_ROWS {
        let _ = writeln!(text, "  … {} more degrees", live.len() - TABLE_ROWS);
    }
    let v = json!({
        "degrees": runs.len(),
        "nonzero_degrees": live.len(),
        "degenerates_by": degenerates,
        "failures": failures,
        "pass": ok,
    });
    (v, text, ok)
}
