//! Removal of the source cutoffs `(κ, Λ) → (0, ∞)`.

use super::common;
use crate::config::RunConfig;
use crate::error::HarnessResult;
use crate::report::{complex, ReportRow};
use vanhove_core::space::ContinuumSpace;
use vanhove_core::thermal::{default_cutoff_schedule, CutoffSweep, ThermalModel};
use vanhove_core::{CondensateParams, Complex64, Dispersion, RadialDirection, RadialTestFunction, SourceCutoff};

const ID: &str = "cutoff-sweep";

fn sweep(cfg: &RunConfig, exponent: f64, amplitude: f64, f: &RadialDirection) -> HarnessResult<CutoffSweep> {
    let c = &cfg.cutoff_sweep;
    let source = SourceCutoff::uncut().with_amplitude(Complex64::new(amplitude, 0.0));
    let space = ContinuumSpace::new(Dispersion::power(exponent)?, CondensateParams::new(c.beta, 0.0), source)?
        .with_quadrature(common::quadrature(cfg));
    let (kappas, lambdas) = default_cutoff_schedule(c.steps);
    Ok(ThermalModel::new(space).cutoff_removal_sweep(f, &kappas, &lambdas, c.tolerance)?)
}

fn last_value(s: &CutoffSweep) -> String {
    s.steps.last().and_then(|x| x.value).map(complex).unwrap_or_else(|| "undefined".into())
}

pub fn run(cfg: &RunConfig) -> HarnessResult<Vec<ReportRow>> {
    let c = &cfg.cutoff_sweep;
    let one = Complex64::new(1.0, 0.0);
    let profiles: [(&str, RadialDirection); 3] = [
        ("gaussian", RadialTestFunction::gaussian(one, 1.0)?.into()),
        ("polynomial-gaussian", RadialTestFunction::polynomial_gaussian(one, 1.0, 1.0)?.into()),
        ("shell-bump", RadialTestFunction::shell_bump(Complex64::new(0.1, 0.0), 0.05, 5.0)?.into()),
    ];
    let mut rows = Vec::new();
    for (name, f) in &profiles {
        let s = sweep(cfg, c.exponent, 1.0, f)?;
        let desc = format!("profile={name} s={} steps={}", c.exponent, c.steps);
        let inc = s.last_increment().unwrap_or(f64::INFINITY);
        rows.push(ReportRow::new(format!("{ID}.cauchy"), desc.clone(), last_value(&s), None, inc, c.tolerance));
        rows.push(ReportRow::categorical(
            format!("{ID}.monotone"),
            desc.clone(),
            if s.monotone() { "monotone" } else { "not-monotone" },
            "monotone",
        ));
        let gap = s.limit_gap().unwrap_or(f64::INFINITY);
        let limit = s.limit.map(complex);
        rows.push(ReportRow::new(format!("{ID}.limit"), desc, last_value(&s), limit, gap, c.limit_tolerance));
    }

    // f̂(0) ≠ 0 is outside dom m for s > 2: the sweep must report the failure.
    let (_, gaussian) = &profiles[0];
    let s = sweep(cfg, 3.0, 1.0, gaussian)?;
    rows.push(ReportRow::categorical(
        format!("{ID}.inadmissible"),
        "profile=gaussian s=3",
        if s.converged { "converged" } else { "not-cauchy" },
        "not-cauchy",
    ));

    // Without source every cutoff state is the free one.
    let s = sweep(cfg, c.exponent, 0.0, gaussian)?;
    let spread = s.steps.iter().filter_map(|x| x.increment).fold(0.0, f64::max);
    rows.push(ReportRow::new(
        format!("{ID}.silent"),
        format!("profile=gaussian s={} amplitude=0", c.exponent),
        last_value(&s),
        None,
        spread,
        0.0,
    ));
    let gap = s.limit_gap().unwrap_or(f64::INFINITY);
    rows.push(ReportRow::new(
        format!("{ID}.silent.limit"),
        "profile=gaussian amplitude=0",
        last_value(&s),
        s.limit.map(complex),
        gap,
        c.limit_tolerance,
    ));
    Ok(rows)
}
