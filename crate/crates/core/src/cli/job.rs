//! Job files: JSON descriptions of a Čech problem and the tasks to run on it.
//!
//! ```json
//! {
//!   "field": {"prime": 65537},
//!   "variables": 2,
//!   "quotient": [],
//!   "groups": [["x1"], ["x2"]],
//!   "window": [[-2, -2], [2, 2]],
//!   "tasks": ["cohomology", "verify34", "mvss:1a", "les", "props2"],
//!   "pages": 3
//! }
//! ```
//!
//! Monomials are written `x1^2*x3` or as exponent arrays `[2, 0, 1]`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;
use serde_json::Value;

use crate::cech::{CechProblem, Window};
use crate::exactlinalg::Field;
use crate::grading::{Monomial, MonomialIdeal};
use crate::mvss::Variant;
use crate::{Error, Result};

/// Pages shown when the job does not say.
pub const DEFAULT_PAGES: i64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Task {
    Cohomology,
    Verify34,
    Mvss(Variant),
    Les,
    Props2,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Task::Cohomology => f.write_str("cohomology"),
            Task::Verify34 => f.write_str("verify34"),
            Task::Mvss(v) => write!(f, "mvss:{v}"),
            Task::Les => f.write_str("les"),
            Task::Props2 => f.write_str("props2"),
        }
    }
}

/// Parses one task token; `mvss` alone stands for all four variants.
fn parse_tasks(token: &str) -> Result<Vec<Task>> {
    Ok(match token {
        "cohomology" => vec![Task::Cohomology],
        "verify34" => vec![Task::Verify34],
        "les" => vec![Task::Les],
        "props2" => vec![Task::Props2],
        "mvss" => Variant::ALL.into_iter().map(Task::Mvss).collect(),
        other => match other.strip_prefix("mvss:") {
            Some(v) => vec![Task::Mvss(Variant::from_str(v)?)],
            None => return Err(Error::input(format!("unknown task '{other}'"))),
        },
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawMonomial {
    Text(String),
    Exponents(Vec<u32>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    #[serde(default)]
    field: Option<Value>,
    variables: usize,
    #[serde(default)]
    quotient: Vec<RawMonomial>,
    groups: Vec<Vec<RawMonomial>>,
    #[serde(default)]
    window: Option<(Vec<i64>, Vec<i64>)>,
    #[serde(default)]
    tasks: Vec<String>,
    #[serde(default)]
    pages: Option<i64>,
}

/// A validated job.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Job {
    pub problem: CechProblem,
    pub tasks: BTreeSet<Task>,
    pub pages: i64,
}

fn parse_field(v: Option<&Value>) -> Result<Field> {
    let Some(v) = v else {
        return Ok(Field::DEFAULT);
    };
    let obj = v.as_object().ok_or_else(|| Error::input("field must be {\"prime\": p} or {\"rational\": true}"))?;
    match (obj.get("prime"), obj.get("rational"), obj.len()) {
        (Some(p), None, 1) => {
            let p = p.as_u64().ok_or_else(|| Error::input(format!("modulus not prime: {p}")))?;
            Ok(Field::prime(p)?)
        }
        (None, Some(Value::Bool(true)), 1) => Ok(Field::Rational),
        _ => Err(Error::input("field must be {\"prime\": p} or {\"rational\": true}")),
    }
}

fn parse_monomial(raw: &RawMonomial, vars: usize) -> Result<Monomial> {
    match raw {
        RawMonomial::Text(t) => Monomial::parse(t, vars),
        RawMonomial::Exponents(e) if e.len() == vars => Ok(Monomial(e.clone())),
        RawMonomial::Exponents(e) => {
            Err(Error::input(format!("exponent array {e:?} has {} entries, expected {vars}", e.len())))
        }
    }
}

impl Job {
    pub fn from_json(text: &str) -> Result<Job> {
        let raw: RawJob = serde_json::from_str(text).map_err(|e| Error::input(format!("job file: {e}")))?;
        let field = parse_field(raw.field.as_ref())?;
        let vars = raw.variables;
        if vars == 0 || vars > crate::grading::MAX_VARS {
            return Err(Error::input(format!("variable count {vars} outside 1..={}", crate::grading::MAX_VARS)));
        }
        let quotient = raw.quotient.iter().map(|m| parse_monomial(m, vars)).collect::<Result<Vec<_>>>()?;
        let ideal = MonomialIdeal::new(vars, quotient)?;
        let groups = raw
            .groups
            .iter()
            .map(|g| g.iter().map(|m| parse_monomial(m, vars)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if let Some(m) = groups.iter().flatten().find(|m| m.total_degree() == 0) {
            return Err(Error::input(format!("group generator {m} is a unit")));
        }
        let window = match raw.window {
            Some((lo, hi)) => {
                if lo.len() != vars || hi.len() != vars {
                    return Err(Error::input(format!(
                        "window corners have {} and {} coordinates but there are {vars} variables",
                        lo.len(),
                        hi.len()
                    )));
                }
                Some(Window::new(lo, hi)?)
            }
            None => None,
        };
        let problem = CechProblem::new(field, vars, ideal, groups, window)?;
        let mut tasks = BTreeSet::new();
        for t in &raw.tasks {
            tasks.extend(parse_tasks(t)?);
        }
        if tasks.is_empty() {
            tasks.insert(Task::Cohomology);
        }
        if tasks.contains(&Task::Les) && problem.n() != 2 {
            return Err(Error::input(format!("task 'les' needs exactly 2 groups, the job has {}", problem.n())));
        }
        let pages = raw.pages.unwrap_or(DEFAULT_PAGES);
        if !(1..=64).contains(&pages) {
            return Err(Error::input(format!("pages must lie in 1..=64, got {pages}")));
        }
        Ok(Job { problem, tasks, pages })
    }

    pub fn from_path(path: &Path) -> Result<Job> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::input(format!("cannot read job file {}: {e}", path.display())))?;
        Job::from_json(&text)
    }

    /// The job echoed back in canonical form.
    pub fn to_json(&self) -> Value {
        let p = &self.problem;
        let field = match p.field {
            Field::Prime(q) => serde_json::json!({"prime": q}),
            Field::Rational => serde_json::json!({"rational": true}),
        };
        let text = |ms: &[Monomial]| ms.iter().map(Monomial::to_string).collect::<Vec<_>>();
        serde_json::json!({
            "field": field,
            "variables": p.vars,
            "quotient": text(p.ideal.generators()),
            "groups": p.groups.iter().map(|g| text(g)).collect::<Vec<_>>(),
            "window": [p.window.lo, p.window.hi],
            "tasks": self.tasks.iter().map(Task::to_string).collect::<Vec<_>>(),
            "pages": self.pages,
        })
    }
}
