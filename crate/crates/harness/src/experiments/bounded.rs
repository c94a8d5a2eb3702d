//! Closed-form bounded-volume expectations against truncated Fock traces,
//! plus the closed-form cross-checks of the resolvent average and the
//! dressed ground energy.

use super::common::{self, geometry, Oracle};
use crate::config::RunConfig;
use crate::error::HarnessResult;
use crate::report::{complex, real, ReportRow};
use rand::Rng;
use vanhove_core::fock::{self, FockOperator, TruncationSpec};
use vanhove_core::resolvent::{laplace_closed_form, laplace_quadrature, resolvent_expectation, resolvent_two_point};
use vanhove_core::space::LatticeSpace;
use vanhove_core::thermal::ThermalModel;
use vanhove_core::{Complex64, Dispersion, LatticeFunction, SourceCutoff};

const ID: &str = "verify-bounded";

/// Oracle operators that do not depend on temperature or source.
struct Operators {
    phi: FockOperator,
    creation: FockOperator,
    phi_pair: FockOperator,
    weyl: FockOperator,
    weyl_pair: FockOperator,
    resolvent: FockOperator,
    resolvent_pair: FockOperator,
}

impl Operators {
    fn build(spec: &TruncationSpec, f: &LatticeFunction, g: &LatticeFunction, z1: Complex64, z2: Complex64) -> HarnessResult<Self> {
        let phi = fock::segal_field(f, spec)?;
        let phi_g = fock::segal_field(g, spec)?;
        let weyl = fock::weyl_operator(f, spec)?;
        let weyl_g = fock::weyl_operator(g, spec)?;
        let resolvent = fock::resolvent_in_rep(z1, f, spec)?;
        let resolvent_g = fock::resolvent_in_rep(z2, g, spec)?;
        Ok(Self {
            creation: fock::creation(f, spec)?,
            phi_pair: phi.mul(&phi_g),
            phi,
            weyl_pair: weyl.mul(&weyl_g),
            weyl,
            resolvent_pair: resolvent.mul(&resolvent_g),
            resolvent,
        })
    }
}

pub fn run(cfg: &RunConfig) -> HarnessResult<Vec<ReportRow>> {
    let b = &cfg.bounded;
    let disp = Dispersion::power(1.0)?;
    let quad = common::quadrature(cfg);
    let mut rows = Vec::new();
    for &count in &b.mode_counts {
        let geo = geometry(count);
        let mut rng = common::rng(cfg, 10 + count as u64);
        let scale = if count == 3 { 0.2 } else { 0.3 };
        let f = common::random_lattice(&mut rng, geo.box_side, &geo.modes, scale);
        let g = common::random_lattice(&mut rng, geo.box_side, &geo.modes, scale);
        let z1 = common::random_parameter(&mut rng, 0.5, 1.5);
        let z2 = common::random_parameter(&mut rng, 0.5, 1.5);
        let spec = common::truncation(cfg, geo.box_side, &geo.modes, &disp, b.n_max[count - 1])?;
        let fine = Operators::build(&spec, &f, &g, z1, z2)?;
        let coarse = Operators::build(&spec.halved(), &f, &g, z1, z2)?;
        for &beta in &b.betas {
            for &amp in &b.amplitudes {
                let source = SourceCutoff::new(geo.kappa, geo.lambda).with_amplitude(Complex64::new(amp, 0.0));
                let space = LatticeSpace::new(geo.box_side, disp, beta, source)?;
                let oracle = Oracle::new(&spec, beta, |s| Ok(fock::hamiltonians(s, &space)?.1))?;
                let model = ThermalModel::new(space);
                let desc = format!("modes={count} beta={beta} amplitude={amp}");
                let mut push = |obs: &str, analytic: Complex64, fine: &FockOperator, coarse: &FockOperator| {
                    let r = oracle.report(fine, coarse);
                    rows.push(ReportRow::new(
                        format!("{ID}.{obs}"),
                        desc.clone(),
                        complex(analytic),
                        Some(complex(r.value)),
                        (analytic - r.value).norm(),
                        r.tolerance(b.floor),
                    ));
                };
                push("one-point-segal", model.one_point_segal(&f)?, &fine.phi, &coarse.phi);
                push("one-point-creation", model.one_point_creation(&f)?, &fine.creation, &coarse.creation);
                push("two-point-segal", model.two_point_segal(&f, &g)?, &fine.phi_pair, &coarse.phi_pair);
                push("weyl", model.weyl_expectation(&f)?, &fine.weyl, &coarse.weyl);
                push("weyl-two-point", model.weyl_two_point(&f, &g)?, &fine.weyl_pair, &coarse.weyl_pair);
                let r = resolvent_expectation(&model, z1, &f, &quad)?;
                push("resolvent", r.closed_form, &fine.resolvent, &coarse.resolvent);
                let r2 = resolvent_two_point(&model, z1, &f, z2, &g, &quad)?;
                push("resolvent-two-point", r2.value, &fine.resolvent_pair, &coarse.resolvent_pair);
            }
        }
        // Dressed ground energy at μ = 0 with unit source on the shell.
        let space = LatticeSpace::new(geo.box_side, disp, 1.0, SourceCutoff::new(geo.kappa, geo.lambda))?;
        let (_, full) = fock::hamiltonians(&spec, &space)?;
        let numeric = full.ground_energy()?;
        let analytic: f64 = spec.modes().enumerate().map(|(j, _)| -0.5 / spec.omega(j).powi(2)).sum();
        rows.push(ReportRow::new(
            format!("{ID}.ground-energy"),
            format!("modes={count}"),
            real(analytic),
            Some(real(numeric)),
            (analytic - numeric).abs(),
            b.ground_tolerance,
        ));
    }
    rows.extend(closed_form_rows(cfg)?);
    Ok(rows)
}

/// Resolvent average: scaled-erfc closed form against Laplace quadrature,
/// including covariances down to zero.
fn closed_form_rows(cfg: &RunConfig) -> HarnessResult<Vec<ReportRow>> {
    let b = &cfg.bounded;
    let quad = common::quadrature(cfg);
    let mut rng = common::rng(cfg, 20);
    let mut rows = Vec::with_capacity(b.closed_form_draws);
    for i in 0..b.closed_form_draws {
        let lambda = common::random_sign(&mut rng) * rng.gen_range(0.2..3.0);
        let mean = rng.gen_range(-2.0..2.0);
        let q = match i % 5 {
            0 => 0.0,
            1 => 10f64.powf(rng.gen_range(-14.0..-4.0)),
            _ => rng.gen_range(0.0..4.0),
        };
        let z = Complex64::new(lambda, 0.0);
        let closed = laplace_closed_form(z, mean, q);
        let numeric = laplace_quadrature(z, mean, q, &quad);
        rows.push(ReportRow::new(
            format!("{ID}.resolvent-closed-form"),
            format!("draw={} lambda={lambda:.6} mean={mean:.6} q={q:.6e}", common::padded(i)),
            complex(closed),
            Some(complex(numeric.value)),
            (closed - numeric.value).norm(),
            b.closed_form_tolerance,
        ));
    }
    Ok(rows)
}
