//! Batch evaluation over ranges of cases.

use rayon::prelude::*;
use serde::Serialize;

use ksection::pairs::Family;

use crate::error::CliError;
use crate::verify::{cmd_verify, sorted_json, Certificate};

/// Upper bounds on `p` per family; 0 selects nothing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Ranges {
    pub gl_max: usize,
    pub o_max: usize,
    pub sp_max: usize,
}

impl Ranges {
    /// `1 <= q <= p <= gl_max`; orthogonal `q <= p <= o_max`, `p - q <= 1`;
    /// symplectic even `2 <= q <= p <= sp_max`.
    pub fn cases(&self) -> Vec<(Family, usize, usize)> {
        let mut out = Vec::new();
        for p in 1..=self.gl_max {
            for q in 1..=p {
                out.push((Family::Gl, p, q));
            }
        }
        for p in 1..=self.o_max {
            for q in p.saturating_sub(1).max(1)..=p {
                out.push((Family::Orth, p, q));
            }
        }
        for p in (2..=self.sp_max).step_by(2) {
            for q in (2..=p).step_by(2) {
                out.push((Family::Sp, p, q));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub trials: usize,
    pub summary: Summary,
    pub certificates: Vec<Certificate>,
}

impl Report {
    pub fn is_passing(&self) -> bool {
        self.summary.failed.is_empty()
    }

    pub fn to_json(&self) -> String {
        sorted_json(self)
    }

    /// One line per case.
    pub fn table(&self) -> String {
        let mut out = format!("{:<10} {:<6} {:>9}  failed checks\n", "case", "result", "roundtrip");
        for c in &self.certificates {
            let failed: Vec<&str> = c.checks.iter().filter(|k| !k.pass).map(|k| k.name.as_str()).collect();
            out.push_str(&format!(
                "{:<10} {:<6} {:>9}  {}\n",
                c.label(),
                if c.is_passing() { "pass" } else { "FAIL" },
                format!("{}/{}", c.roundtrip_passes, c.roundtrip_trials),
                failed.join(",")
            ));
        }
        out.push_str(&format!("{}/{} cases pass\n", self.summary.passed, self.summary.total));
        out
    }
}

/// Certificates for every case in `ranges`, at most `jobs` at a time. The
/// output does not depend on `jobs`.
pub fn cmd_report(ranges: Ranges, seed: u64, trials: usize, jobs: usize) -> Result<Report, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Failed(format!("thread pool: {e}")))?;
    let cases = ranges.cases();
    let certificates = pool.install(|| {
        cases
            .par_iter()
            .map(|&(f, p, q)| cmd_verify(f, p, q, seed, trials))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let failed: Vec<String> = certificates.iter().filter(|c| !c.is_passing()).map(Certificate::label).collect();
    Ok(Report {
        seed,
        trials,
        summary: Summary {
            total: certificates.len(),
            passed: certificates.len() - failed.len(),
            failed,
        },
        certificates,
    })
}
