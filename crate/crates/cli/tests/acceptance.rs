//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion:
//!
//! ```text
//! cargo test -p framekit-cli --test acceptance -- --nocapture
//! ```

use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use framekit_core::diffops::fd_viscous_divergence;
use framekit_core::fields::{Field, FlowField, ScalarField, FIELD_IDS};
use framekit_core::frames::{FrameSpec, RigidFrameMotion, FRAME_IDS};
use framekit_core::harness::run_suite_with_threads;
use framekit_core::objectivity::{
    acceleration_terms, cauchy_traction, check_acceleration_decomposition, check_ns_rhs_equivalence,
    check_stress_tensor_transform, draw_samples, BodyForce, SamplePoint, SamplingBox, StressState, TimeWindow,
};
use framekit_core::tensor::levi_civita;
use framekit_core::{omega_from_alpha, CheckId, FdConfig, Mat3, OrthMat3, Scenario, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 42;

// Pinned tolerances.
const TOL_INVARIANT: f64 = 1e-6;
const TOL_RELATION: f64 = 1e-6;
const MIN_WITNESS: f64 = 0.19;
const MIN_ROTATION_RATE: f64 = 0.1;
const TOL_OMEGA_IDENTITY: f64 = 1e-8;
const TOL_OMEGA_FD: f64 = 1e-5;
const RICHARDSON_TARGET: f64 = 4.0;
const RICHARDSON_BAND: f64 = 0.5;
const TOL_ROTATIONAL_VELOCITY: f64 = 1e-8;
const TOL_STRESS: f64 = 1e-12;
const TOL_ACCELERATION: f64 = 1e-5;
const TOL_SPOT: f64 = 1e-10;
const TOL_NS: f64 = 1e-4;
const MAX_MATRIX_SECONDS: f64 = 10.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn frame(id: &str) -> RigidFrameMotion {
    FrameSpec::default_for(id).unwrap().build().unwrap()
}

fn fd_frame(id: &str) -> RigidFrameMotion {
    FrameSpec { fd_fallback: true, ..FrameSpec::default_for(id).unwrap() }.build().unwrap()
}

fn flow(id: &str) -> FlowField {
    *Field::default_for(id).unwrap().as_flow().unwrap()
}

fn scalar(id: &str) -> ScalarField {
    *Field::default_for(id).unwrap().as_scalar().unwrap()
}

fn flows() -> Vec<FlowField> {
    FIELD_IDS.iter().filter_map(|id| Field::default_for(id).unwrap().as_flow().copied()).collect()
}

fn seeded_times(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random::<f64>()).collect()
}

/// Five moving frames, every catalog field, 100 points.
fn matrix_scenario(checks: Vec<CheckId>) -> Scenario {
    let frames = FRAME_IDS
        .iter()
        .filter(|id| **id != "identity")
        .map(|id| FrameSpec::default_for(id).unwrap())
        .collect();
    let fields = FIELD_IDS.iter().map(|id| Field::default_for(id).unwrap()).collect();
    let mut s = Scenario::new(frames, fields, checks);
    s.samples = 100;
    s.seed = SEED;
    s
}

fn worst(report: &framekit_core::Report, check: CheckId) -> f64 {
    report
        .results
        .iter()
        .filter(|t| t.check == check)
        .map(|t| t.result.as_ref().map_or(f64::INFINITY, |r| r.max_abs_err))
        .fold(0.0, f64::max)
}

fn criterion_1() -> Outcome {
    let checks = vec![CheckId::DivInvariance, CheckId::ScalarGradInvariance, CheckId::StrainRateInvariance];
    let s = matrix_scenario(checks.clone());
    ensure(s.frames.len() >= 5 && s.fields.len() >= 5, || "matrix too small".into())?;
    let start = Instant::now();
    let report = run_suite_with_threads(&s, Some(1)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    let mut parts = Vec::new();
    for c in checks {
        let w = worst(&report, c);
        ensure(w <= TOL_INVARIANT, || format!("{c}: max residual {w:.3e} > {TOL_INVARIANT:e}"))?;
        parts.push(format!("{c} {w:.2e}"));
    }
    ensure(report.passed(), || "a triple did not pass".into())?;
    ensure(elapsed < MAX_MATRIX_SECONDS, || format!("single-threaded run took {elapsed:.2} s"))?;
    Ok(format!(
        "{}x{} matrix, {} triples, {}; {elapsed:.2} s on 1 thread",
        s.frames.len(),
        s.fields.len(),
        report.results.len(),
        parts.join(", ")
    ))
}

fn criterion_2() -> Outcome {
    let s = matrix_scenario(vec![CheckId::VelgradRelation, CheckId::VorticityRelation]);
    let report = run_suite_with_threads(&s, None).map_err(|e| e.to_string())?;
    let vg = worst(&report, CheckId::VelgradRelation);
    let vo = worst(&report, CheckId::VorticityRelation);
    ensure(vg <= TOL_RELATION && vo <= TOL_RELATION, || format!("residuals {vg:.3e}, {vo:.3e}"))?;

    let times: Vec<f64> = draw_samples(&s.bbox, &s.time, s.samples, s.seed).iter().map(|p| p.t).collect();
    let mut rotating = 0;
    let mut min_witness = f64::INFINITY;
    for (i, spec) in s.frames.iter().enumerate() {
        let fr = spec.build().map_err(|e| e.to_string())?;
        let max_rate = times
            .iter()
            .map(|&t| omega_from_alpha(&fr, t).map(|w| w.omega.norm()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?
            .into_iter()
            .fold(0.0, f64::max);
        if max_rate < MIN_ROTATION_RATE {
            continue;
        }
        rotating += 1;
        for t in report.results.iter().filter(|t| t.frame_index == i) {
            let w = t.result.as_ref().and_then(|r| r.witness).unwrap_or(0.0);
            ensure(w >= MIN_WITNESS, || format!("{} {} {}: witness {w:.3}", t.frame, t.field, t.check))?;
            min_witness = min_witness.min(w);
        }
    }
    ensure(rotating >= 3, || format!("only {rotating} rotating frames in the matrix"))?;
    Ok(format!(
        "velgrad {vg:.2e}, vorticity {vo:.2e}; {rotating} rotating frames, smallest witness {min_witness:.3}"
    ))
}

fn criterion_3() -> Outcome {
    let times = seeded_times(20, SEED);
    let mut worst_identity: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    let mut ratios = Vec::new();
    for id in ["constant_rotation", "wobble", "screw"] {
        let fr = frame(id);
        for &t in &times {
            let omega = omega_from_alpha(&fr, t).map_err(|e| e.to_string())?.omega;
            let a = *fr.alpha(t).map_err(|e| e.to_string())?.matrix();
            let adot = fr.dalpha_dt(t);
            for i in 1..=3 {
                for k in 1..=3 {
                    let lhs: f64 = (1..=3).map(|j| levi_civita(i, j, k).unwrap() * omega[j - 1]).sum();
                    let rhs: f64 = (0..3).map(|m| a[k - 1][m] * adot[i - 1][m]).sum();
                    worst_identity = worst_identity.max((lhs - rhs).abs());
                }
            }
            let fd = omega_from_alpha(&fd_frame(id), t).map_err(|e| e.to_string())?.omega;
            worst_fd = worst_fd.max((fd - omega).max_abs());
        }
        for &t in &times[..5] {
            let exact = omega_from_alpha(&fr, t).map_err(|e| e.to_string())?.omega;
            let err = |h: f64| -> Result<f64, String> {
                let w = omega_from_alpha(&fd_frame(id).with_fd_step(h), t).map_err(|e| e.to_string())?;
                Ok((w.omega - exact).norm())
            };
            ratios.push((id, t, err(1e-2)? / err(5e-3)?));
        }
    }
    ensure(worst_identity <= TOL_OMEGA_IDENTITY, || format!("identity residual {worst_identity:.3e}"))?;
    ensure(worst_fd <= TOL_OMEGA_FD, || format!("FD fallback differs by {worst_fd:.3e}"))?;
    for (id, t, r) in &ratios {
        ensure((r - RICHARDSON_TARGET).abs() <= RICHARDSON_BAND, || format!("{id} at t={t:.3}: ratio {r:.3}"))?;
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r.2), hi.max(r.2)));
    Ok(format!(
        "identity {worst_identity:.2e}, FD fallback {worst_fd:.2e}, Richardson ratios {lo:.3}..{hi:.3}"
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for id in FRAME_IDS {
        let fr = frame(id);
        for _ in 0..100 {
            let t: f64 = rng.random();
            let u: [f64; 3] = rng.random();
            let xp = Vec3::from_fn(|i| 2.0 * u[i] - 1.0);
            let omega = omega_from_alpha(&fr, t).map_err(|e| e.to_string())?.omega;
            let alpha = *fr.alpha(t).map_err(|e| e.to_string())?.matrix();
            let lhs = fr.dalpha_dt(t) * xp;
            let rhs = omega.cross(&(alpha * xp));
            worst = worst.max((lhs - rhs).max_abs());
        }
    }
    ensure(worst <= TOL_ROTATIONAL_VELOCITY, || format!("max residual {worst:.3e}"))?;
    Ok(format!("{} frames x 100 points, max residual {worst:.2e}", FRAME_IDS.len()))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let mut tau = Mat3::ZERO;
        for i in 0..3 {
            for j in i..3 {
                let v = 20.0 * rng.random::<f64>() - 10.0;
                tau[i][j] = v;
                tau[j][i] = v;
            }
        }
        let axis = loop {
            let u: [f64; 3] = rng.random();
            let a = Vec3::from_fn(|i| 2.0 * u[i] - 1.0);
            if a.norm() > 1e-3 {
                break a * (1.0 / a.norm());
            }
        };
        let angle = std::f64::consts::PI * (2.0 * rng.random::<f64>() - 1.0);
        let alpha = OrthMat3::new(Mat3::rotation_axis_angle(axis, angle)).map_err(|e| e.to_string())?;
        let stress = StressState::new(tau).map_err(|e| e.to_string())?;
        let r = check_stress_tensor_transform(&stress, &alpha, TOL_STRESS).map_err(|e| e.to_string())?;
        worst = worst.max(r.max_abs_err);
        ensure(r.passed(), || format!("residual {:.3e}", r.max_abs_err))?;
    }
    let mut tau = Mat3::ZERO;
    tau[1][0] = 5.0;
    let face = cauchy_traction(&StressState::new(tau).unwrap(), Vec3::new(1.0, 0.0, 0.0)).map_err(|e| e.to_string())?;
    ensure(face == Vec3::new(0.0, 5.0, 0.0), || format!("tau_21 example gave {face:?}"))?;
    Ok(format!("100 stresses, max residual {worst:.2e}; tau_21 face traction (0, 5, 0)"))
}

fn criterion_6() -> Outcome {
    let fd = FdConfig::default();
    let samples = draw_samples(&SamplingBox::default(), &TimeWindow::default(), 100, SEED);
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for id in FRAME_IDS {
        let fr = frame(id);
        for fl in flows() {
            let r = check_acceleration_decomposition(&fr, &fl, &samples, &fd, TOL_ACCELERATION)
                .map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("{id} {:?}: residual {:.3e}", fl.kind, r.max_abs_err))?;
            worst = worst.max(r.max_abs_err);
            pairs += 1;
        }
    }

    // Fluid co-rotating with the frame: only the centripetal term survives.
    let at = SamplePoint { x: Vec3::new(1.0, 0.0, 0.0), t: 0.0 };
    let terms = acceleration_terms(&frame("constant_rotation"), &flow("rigid_rotation"), &at, &fd)
        .map_err(|e| e.to_string())?;
    let target = Vec3::new(-4.0, 0.0, 0.0);
    for (name, v) in [("material", terms.material), ("centripetal", terms.centripetal), ("sum", terms.reassembled())] {
        ensure((v - target).max_abs() <= TOL_SPOT, || format!("centripetal case: {name} = {v:?}"))?;
    }

    // Uniform flow seen from a uniformly translating frame: nothing accelerates.
    let galilean = frame("uniform_translation");
    for s in &samples[..10] {
        let terms = acceleration_terms(&galilean, &flow("uniform"), s, &fd).map_err(|e| e.to_string())?;
        let all = [terms.material, terms.origin, terms.relative, terms.coriolis, terms.euler, terms.centripetal];
        let m = all.iter().map(Vec3::max_abs).fold(0.0, f64::max);
        ensure(m <= TOL_SPOT, || format!("Galilean case: term of size {m:.3e}"))?;
    }

    // Uniform flow in a rotating frame carries a Coriolis term.
    let terms = acceleration_terms(&frame("constant_rotation"), &flow("uniform"), &samples[0], &fd)
        .map_err(|e| e.to_string())?;
    ensure(terms.coriolis.norm() > 0.1, || "Coriolis term vanished for uniform flow in a rotating frame".into())?;

    Ok(format!("{pairs} frame x flow pairs, max residual {worst:.2e}; centripetal and Galilean spot checks exact"))
}

fn criterion_7() -> Outcome {
    let fd = FdConfig::default();
    let samples = draw_samples(&SamplingBox::default(), &TimeWindow::default(), 50, SEED);
    let tg = flow("taylor_green");
    let pressure = scalar("gaussian_T");
    let body = BodyForce::new(Vec3::new(0.0, 0.0, -9.81), 1.0).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for id in ["constant_rotation", "wobble"] {
        let r = check_ns_rhs_equivalence(&frame(id), &tg, &pressure, 1.0, &body, &samples, &fd, TOL_NS)
            .map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{id}: residual {:.3e}", r.max_abs_err))?;
        parts.push(format!("{id} {:.2e}", r.max_abs_err));
    }

    // Closed form for unit amplitude and wavenumber: divergence-free, and the
    // Laplacian of each component is −2 times the component.
    let oracle = |x: Vec3| Vec3::new(x[0].cos() * x[1].sin(), -x[0].sin() * x[1].cos(), 0.0) * -2.0;
    let mut worst: f64 = 0.0;
    for s in &samples {
        let nested = fd_viscous_divergence(&tg, s.x, s.t, &fd).map_err(|e| e.to_string())?;
        worst = worst.max((nested - oracle(s.x)).max_abs());
        worst = worst.max((tg.viscous_divergence(s.x, s.t) - oracle(s.x)).max_abs());
    }
    ensure(worst <= TOL_NS, || format!("Laplacian oracle differs by {worst:.3e}"))?;
    Ok(format!("{}; Laplacian oracle vs nested FD {worst:.2e}", parts.join(", ")))
}

fn framekit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_framekit"))
}

fn scenarios_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn exit_code(args: &[&str], threads: Option<&str>) -> Result<i32, String> {
    let mut cmd = framekit();
    cmd.args(args);
    if let Some(n) = threads {
        cmd.env("FRAMEKIT_THREADS", n);
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    out.status.code().ok_or_else(|| "terminated by signal".to_string())
}

fn report_without_wall_time(path: &Path) -> Result<String, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    Ok(text.lines().filter(|l| !l.trim_start().starts_with("\"wall_time_s\"")).collect::<Vec<_>>().join("\n"))
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let single = dir.path().join("single.toml");
    std::fs::write(&single, "frames = [\"wobble\"]\nfields = [\"taylor_green\"]\nchecks = [\"vorticity_relation\"]\nseed = 42\n")
        .map_err(|e| e.to_string())?;
    let single = single.to_str().unwrap();

    let mut reports = Vec::new();
    for (i, threads) in ["1", "1", "4"].iter().enumerate() {
        let out = dir.path().join(format!("r{i}.json"));
        let code = exit_code(&["verify", "--scenario", single, "--out", out.to_str().unwrap()], Some(threads))?;
        ensure(code == 0, || format!("verify exited with {code}"))?;
        reports.push(report_without_wall_time(&out)?);
    }
    ensure(reports[0] == reports[1], || "two runs differ".into())?;
    ensure(reports[0] == reports[2], || "thread count changed the report".into())?;

    let bad_key = dir.path().join("bad.toml");
    std::fs::write(&bad_key, "frames = [\"identity\"]\nfields = [\"uniform\"]\nchecks = \"all\"\nsampels = 3\n")
        .map_err(|e| e.to_string())?;
    let zero = dir.path().join("zero.toml");
    std::fs::write(&zero, "frames = [\"identity\"]\nfields = [\"uniform\"]\nchecks = \"all\"\nsamples = 0\n")
        .map_err(|e| e.to_string())?;
    let minimal = scenarios_dir().join("minimal.toml");
    let tight = scenarios_dir().join("tight_tolerance.toml");
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["verify", "--scenario", minimal.to_str().unwrap()], 0),
        (vec!["verify", "--scenario", tight.to_str().unwrap()], 1),
        (vec!["verify", "--scenario", bad_key.to_str().unwrap()], 2),
        (vec!["verify", "--scenario", zero.to_str().unwrap()], 2),
        (vec!["verify", "--scenario", minimal.to_str().unwrap(), "--samples", "0"], 2),
        (vec!["verify", "--scenario", "/nonexistent/scenario.toml"], 2),
        (vec!["verify"], 2),
        (vec!["frobnicate"], 2),
    ];
    for (args, want) in &cases {
        let got = exit_code(args, None)?;
        ensure(got == *want, || format!("`framekit {}` exited {got}, expected {want}", args.join(" ")))?;
    }

    let out = framekit().arg("list").output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || "list failed".into())?;
    let text = String::from_utf8_lossy(&out.stdout);
    let listed: Vec<&str> = text
        .lines()
        .skip_while(|l| l.trim() != "checks:")
        .skip(1)
        .take_while(|l| !l.trim().is_empty())
        .filter_map(|l| l.split_whitespace().next())
        .collect();
    let expected: Vec<&str> = CheckId::ALL.iter().map(|c| c.as_str()).collect();
    ensure(listed == expected, || format!("list printed {listed:?}"))?;

    Ok(format!(
        "3 runs byte-identical (1 and 4 threads); {} exit-code cases; list shows {} check ids",
        cases.len(),
        listed.len()
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("invariance identities", criterion_1),
        ("variance relations and witnesses", criterion_2),
        ("angular velocity extraction", criterion_3),
        ("rotational velocity identity", criterion_4),
        ("stress tensor transformation", criterion_5),
        ("acceleration decomposition", criterion_6),
        ("momentum right-hand side equivalence", criterion_7),
        ("determinism and tooling", criterion_8),
    ];
    let mut failed = Vec::new();
    for (n, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  criterion {} ({name}): {detail}", n + 1),
            Err(why) => {
                println!("FAIL  criterion {} ({name}): {why}", n + 1);
                failed.push(n + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
