use std::path::PathBuf;

use framekit_core::harness::{run_suite_with_threads, Status};
use framekit_core::{emit_report, parse_scenario, run_suite, CheckId, ReportFormat, Scenario};

fn shipped(name: &str) -> Scenario {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_scenario(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn shipped_scenarios_parse() {
    let full = shipped("full_matrix.toml");
    assert_eq!(full.frames.len(), 6);
    assert_eq!(full.fields.len(), 7);
    assert_eq!(full.checks, CheckId::ALL.to_vec());
    assert_eq!(shipped("minimal.toml").checks, vec![CheckId::DivInvariance]);
    assert!(shipped("tight_tolerance.toml").frames[0].fd_fallback);
    assert_eq!(shipped("rotating_ns.toml").samples, 50);
}

#[test]
fn rotating_momentum_scenario_passes() {
    let r = run_suite(&shipped("rotating_ns.toml"));
    assert!(r.passed(), "{}", emit_report(&r, ReportFormat::Table));
}

#[test]
fn tight_tolerance_scenario_fails_on_acceleration() {
    let r = run_suite(&shipped("tight_tolerance.toml"));
    assert!(!r.passed());
    let accel = r.results.iter().find(|t| t.check == CheckId::AccelerationDecomposition).unwrap();
    assert_eq!(accel.status, Status::Fail);
}

#[test]
fn reports_are_reproducible_across_runs_and_pool_sizes() {
    let mut s = shipped("full_matrix.toml");
    s.samples = 10;
    let a = run_suite_with_threads(&s, Some(1)).unwrap().canonical();
    let b = run_suite_with_threads(&s, Some(3)).unwrap().canonical();
    assert_eq!(emit_report(&a, ReportFormat::Json), emit_report(&b, ReportFormat::Json));
}

#[test]
fn more_samples_never_lower_the_maximum() {
    let mut s = shipped("full_matrix.toml");
    s.frames.truncate(5);
    s.samples = 20;
    let small = run_suite(&s);
    s.samples = 40;
    let large = run_suite(&s);
    for (a, b) in small.results.iter().zip(&large.results) {
        let (ra, rb) = (a.result.as_ref().unwrap(), b.result.as_ref().unwrap());
        assert!(rb.max_abs_err >= ra.max_abs_err, "{} {} {}", a.frame, a.field, a.check);
        assert_eq!(a.status, b.status);
    }
}

#[test]
fn seed_changes_the_samples() {
    let mut s = shipped("minimal.toml");
    s.fields = vec![framekit_core::Field::default_for("shear").unwrap()];
    s.frames = vec![framekit_core::FrameSpec::default_for("wobble").unwrap()];
    let a = run_suite(&s);
    s.seed += 1;
    let b = run_suite(&s);
    assert_ne!(a.results[0].result.as_ref().unwrap().mean_abs_err, b.results[0].result.as_ref().unwrap().mean_abs_err);
}
