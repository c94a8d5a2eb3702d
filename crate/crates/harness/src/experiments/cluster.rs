//! Correlation defect `D(t)` with and without a condensate.

use super::common;
use crate::config::RunConfig;
use crate::error::HarnessResult;
use crate::report::{real, ReportRow};
use vanhove_core::space::ContinuumSpace;
use vanhove_core::thermal::ThermalModel;
use vanhove_core::{CondensateParams, Complex64, Dispersion, RadialDirection, RadialTestFunction, SourceCutoff};

const ID: &str = "cluster";

pub fn run(cfg: &RunConfig) -> HarnessResult<Vec<ReportRow>> {
    let c = &cfg.cluster;
    let disp = Dispersion::power(c.exponent)?;
    let f: RadialDirection = RadialTestFunction::gaussian(Complex64::new(1.0, 0.0), c.width)?.into();
    let step = c.horizon / (c.points - 1) as f64;
    let times: Vec<f64> = (0..c.points).map(|j| step * j as f64).collect();
    let model = |n0: f64| -> HarnessResult<ThermalModel<ContinuumSpace>> {
        let space = ContinuumSpace::new(disp, CondensateParams::new(c.beta, n0), SourceCutoff::uncut())?
            .with_quadrature(common::quadrature(cfg));
        space.check_direction(&f)?;
        Ok(ThermalModel::new(space))
    };
    let mut rows = Vec::new();

    let free = model(0.0)?;
    let d = free.cluster_diagnostic(&f, &f, &times)?;
    let end = *d.last().expect("at least two grid points");
    rows.push(ReportRow::new(
        format!("{ID}.decay"),
        format!("n0=0 s={} width={} T={}", c.exponent, c.width, c.horizon),
        real(end),
        None,
        end,
        c.decay_threshold,
    ));

    let n0 = c.condensate_density * c.density_unit;
    let condensed = model(n0)?;
    let d = condensed.cluster_diagnostic(&f, &f, &times)?;
    let floor = condensed.cluster_floor(&f, &f)?;
    for (t, v) in times.iter().zip(&d) {
        rows.push(ReportRow::lower_bound(
            format!("{ID}.condensate"),
            format!("n0={} unit={:.6e} s={} t={t:011.4}", c.condensate_density, c.density_unit, c.exponent),
            *v,
            Some(floor),
            c.floor_threshold,
        ));
    }
    Ok(rows)
}
