//! Acceptance suite. Runs every experiment with its built-in configuration,
//! prints one line per criterion, then fails if any criterion failed.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};
use vanhove_harness::config::{ExperimentKind, RunConfig};
use vanhove_harness::report::{Report, ReportRow};
use vanhove_harness::run_experiment;

type Reports = BTreeMap<ExperimentKind, Report>;

/// Runs all experiments concurrently; returns the reports and the wall time.
fn run_all(cfg: &RunConfig) -> (Reports, Duration) {
    let start = Instant::now();
    let reports = std::thread::scope(|scope| {
        let handles: Vec<_> = ExperimentKind::ALL
            .iter()
            .map(|&kind| scope.spawn(move || (kind, run_experiment(kind, cfg))))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                let (kind, report) = h.join().expect("experiment thread panicked");
                (kind, report.unwrap_or_else(|e| panic!("{kind} failed to run: {e}")))
            })
            .collect()
    });
    (reports, start.elapsed())
}

struct Verdict {
    pass: bool,
    detail: String,
}

/// Rows of the suite `prefix` and its dotted sub-suites.
fn rows<'a>(report: &'a Report, prefix: &'a str) -> impl Iterator<Item = &'a ReportRow> + 'a {
    report.rows.iter().filter(move |r| {
        r.experiment_id == prefix || r.experiment_id.strip_prefix(prefix).is_some_and(|rest| rest.starts_with('.'))
    })
}

/// All rows under `prefix` pass and there are at least `min` of them.
fn suite(report: &Report, prefix: &str, min: usize) -> Verdict {
    let selected: Vec<&ReportRow> = rows(report, prefix).collect();
    let failed = selected.iter().filter(|r| !r.pass).count();
    let max = selected.iter().map(|r| r.residual).fold(0.0, f64::max);
    Verdict {
        pass: selected.len() >= min && failed == 0,
        detail: format!("{prefix}: {} rows (need {min}), {failed} failed, max residual {max:.2e}", selected.len()),
    }
}

fn all(parts: Vec<Verdict>) -> Verdict {
    Verdict {
        pass: parts.iter().all(|v| v.pass),
        detail: parts.into_iter().map(|v| v.detail).collect::<Vec<_>>().join("; "),
    }
}

fn criterion_1(reports: &Reports, cfg: &RunConfig, timing: Duration) -> Verdict {
    let r = &reports[&ExperimentKind::VerifyBounded];
    let b = &cfg.bounded;
    let observables = [
        "one-point-segal",
        "one-point-creation",
        "two-point-segal",
        "weyl",
        "weyl-two-point",
        "resolvent",
        "resolvent-two-point",
    ];
    let grid = b.mode_counts.len() * b.betas.len() * b.amplitudes.len();
    let mut parts: Vec<Verdict> =
        observables.iter().map(|o| suite(r, &format!("verify-bounded.{o}"), grid)).collect();
    let covered = [1, 2, 3].iter().all(|m| b.mode_counts.contains(m))
        && [0.5, 1.0, 2.0].iter().all(|x| b.betas.contains(x))
        && [0.0, 1.0].iter().all(|x| b.amplitudes.contains(x));
    let caps = b.n_max[1] <= 32 && b.n_max[2] <= 16;
    let fast = timing < Duration::from_secs(60);
    parts.push(Verdict {
        pass: covered && caps && fast,
        detail: format!("grid covered {covered}, nMax {:?}, runtime {:.1}s (< 60s)", b.n_max, timing.as_secs_f64()),
    });
    all(parts)
}

fn criterion_2(reports: &Reports, cfg: &RunConfig) -> Verdict {
    let r = &reports[&ExperimentKind::Relations];
    let c = &cfg.relations;
    let mut parts = vec![
        suite(r, "relations.weyl.homomorphism", 200),
        suite(r, "relations.weyl.association", 200),
        suite(r, "relations.weyl.pair", 200),
    ];
    for name in ["zero", "adjoint", "scaling", "identity_left", "identity_right", "commutator", "product", "same_direction"] {
        parts.push(suite(r, &format!("relations.resolvent.{name}"), 200));
    }
    let limits = rows(r, "relations.resolvent").all(|row| {
        let limit = if row.experiment_id.ends_with("same_direction") { 1e-10 } else { 1e-8 };
        row.tolerance <= limit
    }) && rows(r, "relations.weyl.homomorphism").all(|row| row.tolerance <= 1e-8);
    parts.push(Verdict { pass: limits && c.tolerance <= 1e-8, detail: format!("tolerances within limits: {limits}") });
    all(parts)
}

fn criterion_3(reports: &Reports) -> Verdict {
    let r = &reports[&ExperimentKind::Relations];
    let tol = rows(r, "relations.cocycle").all(|row| row.tolerance <= 1e-12);
    all(vec![suite(r, "relations.cocycle", 200), Verdict { pass: tol, detail: format!("relative tolerance <= 1e-12: {tol}") }])
}

fn criterion_4(reports: &Reports) -> Verdict {
    let r = &reports[&ExperimentKind::Kms];
    let weyl_tol = rows(r, "kms.weyl").all(|row| row.tolerance <= 1e-8);
    let res_tol = rows(r, "kms.resolvent").all(|row| row.tolerance <= 1e-6);
    all(vec![
        suite(r, "kms.weyl.lattice", 50),
        suite(r, "kms.weyl.continuum", 50),
        suite(r, "kms.resolvent.lattice", 1),
        suite(r, "kms.resolvent.continuum", 1),
        Verdict { pass: weyl_tol && res_tol, detail: format!("tolerances 1e-8/1e-6: {}", weyl_tol && res_tol) },
    ])
}

fn criterion_5(reports: &Reports, cfg: &RunConfig) -> Verdict {
    let r = &reports[&ExperimentKind::Cluster];
    let c = &cfg.cluster;
    let settings = c.exponent == 1.0 && c.condensate_density == 1.0 && c.decay_threshold <= 1e-3 && c.floor_threshold >= 1e-2;
    all(vec![
        suite(r, "cluster.decay", 1),
        suite(r, "cluster.condensate", c.points),
        Verdict { pass: settings, detail: format!("s=1, n0=1, thresholds 1e-3/1e-2: {settings}") },
    ])
}

fn criterion_6(reports: &Reports, cfg: &RunConfig) -> Verdict {
    let r = &reports[&ExperimentKind::IrTable];
    let table = 2 * cfg.ir_table.exponents.len();
    all(vec![
        suite(r, "ir-table.definition-faithful", table),
        suite(r, "ir-table.theorem-literal", table),
        suite(r, "ir-table.condensate-form", 1),
        suite(r, "ir-table.family-condensate-form", cfg.ir_table.family_draws),
        suite(r, "ir-table.containment", cfg.ir_table.family_draws),
        suite(r, "ir-table.quotient", cfg.ir_table.family_draws),
    ])
}

fn criterion_7(reports: &Reports) -> Verdict {
    let r = &reports[&ExperimentKind::Selection];
    let analytic: Vec<&ReportRow> = r.rows.iter().filter(|x| x.experiment_id.ends_with(".analytic")).collect();
    let difference: Vec<&ReportRow> = r.rows.iter().filter(|x| x.experiment_id.ends_with(".finite-difference")).collect();
    let tol = analytic.iter().all(|x| x.tolerance <= 1e-10) && difference.iter().all(|x| x.tolerance <= 1e-7);
    let pass = analytic.len() >= 50 && difference.len() >= 50 && analytic.iter().chain(&difference).all(|x| x.pass) && tol;
    Verdict {
        pass,
        detail: format!("{} analytic and {} finite-difference rows, tolerances 1e-10/1e-7: {tol}", analytic.len(), difference.len()),
    }
}

fn criterion_8(reports: &Reports) -> Verdict {
    let r = &reports[&ExperimentKind::VerifyBounded];
    let degenerate = rows(r, "verify-bounded.resolvent-closed-form").any(|row| row.input_descriptor.ends_with("q=0.000000e0"));
    let tol = rows(r, "verify-bounded.resolvent-closed-form").chain(rows(r, "verify-bounded.ground-energy")).all(|x| x.tolerance <= 1e-8);
    all(vec![
        suite(r, "verify-bounded.resolvent-closed-form", 100),
        suite(r, "verify-bounded.ground-energy", 1),
        Verdict { pass: degenerate && tol, detail: format!("q = 0 included: {degenerate}, tolerances 1e-8: {tol}") },
    ])
}

fn criterion_9(reports: &Reports) -> Verdict {
    let r = &reports[&ExperimentKind::CutoffSweep];
    let tol = rows(r, "cutoff-sweep.cauchy").chain(rows(r, "cutoff-sweep.limit")).all(|x| x.tolerance <= 1e-8);
    all(vec![
        suite(r, "cutoff-sweep.cauchy", 1),
        suite(r, "cutoff-sweep.monotone", 1),
        suite(r, "cutoff-sweep.limit", 1),
        suite(r, "cutoff-sweep.inadmissible", 1),
        Verdict { pass: tol, detail: format!("tolerances 1e-8: {tol}") },
    ])
}

fn criterion_10(first: &Reports, cfg: &RunConfig, first_time: Duration) -> Verdict {
    let (second, second_time) = run_all(cfg);
    let dir = std::env::temp_dir().join(format!("vanhove-acceptance-{}", std::process::id()));
    let mut identical = true;
    for (kind, report) in first {
        let a = report.write(&dir.join("a")).expect("write first report").0;
        let b = second[kind].write(&dir.join("b")).expect("write second report").0;
        identical &= std::fs::read(a).expect("read csv") == std::fs::read(b).expect("read csv");
    }
    let _ = std::fs::remove_dir_all(&dir);
    Verdict {
        pass: identical && first_time < Duration::from_secs(300),
        detail: format!(
            "byte-identical CSV across runs: {identical}; full suite {:.1}s (< 300s), rerun {:.1}s",
            first_time.as_secs_f64(),
            second_time.as_secs_f64()
        ),
    }
}

#[test]
fn acceptance() {
    let cfg = RunConfig::builtin();
    let (reports, elapsed) = run_all(&cfg);
    let bounded_time = {
        let start = Instant::now();
        run_experiment(ExperimentKind::VerifyBounded, &cfg).expect("verify-bounded runs");
        start.elapsed()
    };
    let verdicts = [
        criterion_1(&reports, &cfg, bounded_time),
        criterion_2(&reports, &cfg),
        criterion_3(&reports),
        criterion_4(&reports),
        criterion_5(&reports, &cfg),
        criterion_6(&reports, &cfg),
        criterion_7(&reports),
        criterion_8(&reports),
        criterion_9(&reports),
        criterion_10(&reports, &cfg, elapsed),
    ];
    for (i, v) in verdicts.iter().enumerate() {
        println!("criterion {}: {} {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    let failed: Vec<usize> = verdicts.iter().enumerate().filter(|(_, v)| !v.pass).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
