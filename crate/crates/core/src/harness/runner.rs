use std::time::Instant;

use log::{debug, info};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::objectivity::{draw_samples, run_check, CheckId, SamplePoint, Verdict};

use super::report::{Report, Status, TripleResult};
use super::scenario::Scenario;

const TOOL_NAME: &str = "framekit";

/// One (frame, field, check) combination of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Triple {
    frame: usize,
    field: usize,
    check: CheckId,
}

/// Applicable triples in (frame, field, check) order.
fn triples(s: &Scenario) -> Vec<Triple> {
    let mut out = Vec::new();
    for frame in 0..s.frames.len() {
        for (field, f) in s.fields.iter().enumerate() {
            for &check in &s.checks {
                if check.applies_to(f) {
                    out.push(Triple { frame, field, check });
                }
            }
        }
    }
    out
}

fn evaluate(s: &Scenario, samples: &[SamplePoint], tr: Triple) -> TripleResult {
    let spec = &s.frames[tr.frame];
    let field = &s.fields[tr.field];
    let outcome = spec.build().and_then(|frame| {
        run_check(tr.check, &frame, field, &s.physics, samples, &s.fd, s.tolerance(tr.check))
    });
    let (status, result, error) = match outcome {
        Ok(Some(r)) => (if r.passed() { Status::Pass } else { Status::Fail }, Some(r), None),
        Ok(None) => unreachable!("triples are filtered by applicability"),
        Err(e) => (Status::Error, None, Some(e.to_string())),
    };
    debug!("{} × {} × {}: {:?}", spec.label(), field.id(), tr.check, status);
    TripleResult {
        frame_index: tr.frame,
        frame: spec.label(),
        field_index: tr.field,
        field: field.id().to_string(),
        check: tr.check,
        status,
        result,
        error,
    }
}

/// Runs every applicable triple of `s` on the current rayon pool.
///
/// Results are ordered by (frame, field, check) whatever the scheduling, and
/// every triple sees the same sample set, so the report depends only on the
/// scenario.
pub fn run_suite(s: &Scenario) -> Report {
    let start = Instant::now();
    let samples = draw_samples(&s.bbox, &s.time, s.samples, s.seed);
    let work = triples(s);
    info!("running {} triples on {} samples", work.len(), samples.len());
    let results: Vec<TripleResult> = work.par_iter().map(|&tr| evaluate(s, &samples, tr)).collect();
    let suite_verdict =
        if results.iter().all(|r| r.status == Status::Pass) { Verdict::Pass } else { Verdict::Fail };
    Report {
        tool: TOOL_NAME.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: s.clone(),
        results,
        suite_verdict,
        wall_time_s: start.elapsed().as_secs_f64(),
    }
}

/// [`run_suite`] on a dedicated pool of `threads` workers (`None` uses the
/// global pool).
pub fn run_suite_with_threads(s: &Scenario, threads: Option<usize>) -> Result<Report> {
    match threads {
        None => Ok(run_suite(s)),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(|| run_suite(s)))
        }
    }
}
