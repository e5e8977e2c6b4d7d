//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input error, 2 verification or property
//! failure.

mod compute;
mod job;
mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use compute::{compute, Outcome};
pub use job::{Job, Task, DEFAULT_PAGES};
pub use selftest::{selftest, SelftestOptions, SelftestOutcome};

use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cechss", version, about = "Local cohomology of sums and products of monomial ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the tasks of a job file over its multidegree window.
    Compute {
        job: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads; 0 uses all available cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Highest page to dump (overrides the job file).
        #[arg(long)]
        pages: Option<i64>,
    },
    /// Randomized property suites, deterministic in the seed.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_vars: usize,
        #[arg(long, default_value_t = 3)]
        max_groups: usize,
        /// Number of random tensor multicomplexes.
        #[arg(long, default_value_t = 12)]
        tensors: usize,
        /// Number of random Čech problems.
        #[arg(long, default_value_t = 3)]
        problems: usize,
        #[arg(long, hide = true)]
        corrupt_signs: bool,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => EXIT_FAILURE,
        _ => EXIT_INPUT,
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_INPUT;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match cli.command {
        Command::Compute { job, out: dir, jobs, pages } => {
            let result = Job::from_path(&job).and_then(|mut job| {
                if let Some(r) = pages {
                    if !(1..=64).contains(&r) {
                        return Err(Error::Input(format!("--pages must lie in 1..=64, got {r}")));
                    }
                    job.pages = r;
                }
                compute(&job, &dir, jobs)
            });
            match result {
                Ok(o) => {
                    let _ = write!(out, "{}", o.summary);
                    if o.passed {
                        EXIT_OK
                    } else {
                        EXIT_FAILURE
                    }
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    exit_code(&e)
                }
            }
        }
        Command::Selftest { seed, max_vars, max_groups, tensors, problems, corrupt_signs } => {
            let opts = SelftestOptions { seed, max_vars, max_groups, tensors, problems, corrupt_signs };
            match selftest(&opts) {
                Ok(o) => {
                    let _ = write!(out, "{}", o.log);
                    if o.passed {
                        EXIT_OK
                    } else {
                        EXIT_FAILURE
                    }
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    exit_code(&e)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("cechss").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(call(&["frobnicate"]).0, EXIT_INPUT);
        assert_eq!(call(&["compute"]).0, EXIT_INPUT);
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("compute"));
    }

    #[test]
    fn missing_job_file() {
        let (code, _, err) = call(&["compute", "/nonexistent/job.json"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("cannot read job file"));
    }
}
