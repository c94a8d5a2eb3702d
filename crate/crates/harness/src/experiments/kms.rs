//! Complex-time KMS condition `F(t + iβ) = G(t)` on Weyl and resolvent generators.

use super::common;
use crate::config::RunConfig;
use crate::error::HarnessResult;
use crate::report::{complex, ReportRow};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use vanhove_core::resolvent::resolvent_kms;
use vanhove_core::space::{ContinuumSpace, LatticeSpace};
use vanhove_core::thermal::ThermalModel;
use vanhove_core::{CondensateParams, Dispersion, LatticeFunction, LatticeSpec, Mode, RadialDirection, SourceCutoff};

const ID: &str = "kms";

fn lattice_pair(rng: &mut ChaCha8Rng, scale: f64) -> HarnessResult<(ThermalModel<LatticeSpace>, LatticeFunction, LatticeFunction, String)> {
    let s = [1.0, 1.5, 2.0][rng.gen_range(0..3)];
    let l = rng.gen_range(3.0..8.0);
    let a = 2.0 * PI / l;
    let mu = if rng.gen_bool(0.5) { 0.0 } else { -rng.gen_range(0.0..0.5) };
    let disp = Dispersion::new(s, mu)?;
    let beta = rng.gen_range(0.3..3.0);
    let source = SourceCutoff::new(a, 3.0 * a).with_amplitude(common::uniform_complex(rng, 1.5));
    let modes = LatticeSpec::new(l, a, 3.0 * a)?.modes()?;
    let pick = |rng: &mut ChaCha8Rng| -> Vec<Mode> { (0..rng.gen_range(1..=4)).map(|_| modes[rng.gen_range(0..modes.len())]).collect() };
    let fm = pick(rng);
    let gm = pick(rng);
    let f = common::random_lattice(rng, l, &fm, scale);
    let g = common::random_lattice(rng, l, &gm, scale);
    let desc = format!("s={s} L={l:.4} mu={mu:.4} beta={beta:.4}");
    Ok((ThermalModel::new(LatticeSpace::new(l, disp, beta, source)?), f, g, desc))
}

fn continuum_pair(
    rng: &mut ChaCha8Rng,
    cfg: &RunConfig,
) -> HarnessResult<(ThermalModel<ContinuumSpace>, RadialDirection, RadialDirection, String)> {
    let s = [1.0, 1.5, 2.0][rng.gen_range(0..3)];
    let beta = rng.gen_range(0.5..2.0);
    let n0 = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.0..1e-3) };
    let source = SourceCutoff::uncut().with_amplitude(common::uniform_complex(rng, 1.0));
    let space = ContinuumSpace::new(Dispersion::power(s)?, CondensateParams::new(beta, n0), source)?
        .with_quadrature(common::quadrature(cfg));
    // f̂(0) ≠ 0 is outside dom m from s = 2 on.
    let f = common::random_radial(rng, s < 2.0);
    let g = common::random_radial(rng, s < 2.0);
    space.check_direction(&f)?;
    space.check_direction(&g)?;
    let desc = format!("s={s} beta={beta:.4} n0={n0:.3e}");
    Ok((ThermalModel::new(space), f, g, desc))
}

pub fn run(cfg: &RunConfig) -> HarnessResult<Vec<ReportRow>> {
    let k = &cfg.kms;
    let quad = common::quadrature(cfg);
    let mut rows = Vec::new();
    let mut rng = common::rng(cfg, 40);
    for i in 0..k.lattice_draws {
        let (model, f, g, desc) = lattice_pair(&mut rng, 0.8)?;
        let t = rng.gen_range(-k.time_range..k.time_range);
        let e = model.kms(&f, &g, t)?;
        rows.push(ReportRow::new(
            format!("{ID}.weyl.lattice"),
            format!("draw={} {desc} t={t:.6}", common::padded(i)),
            complex(e.continued),
            Some(complex(e.reversed)),
            e.residual(),
            k.tolerance,
        ));
    }
    let mut rng = common::rng(cfg, 41);
    for i in 0..k.continuum_draws {
        let (model, f, g, desc) = continuum_pair(&mut rng, cfg)?;
        let t = rng.gen_range(-k.time_range..k.time_range);
        let e = model.kms(&f, &g, t)?;
        rows.push(ReportRow::new(
            format!("{ID}.weyl.continuum"),
            format!("draw={} {desc} t={t:.6}", common::padded(i)),
            complex(e.continued),
            Some(complex(e.reversed)),
            e.residual(),
            k.tolerance,
        ));
    }
    let mut rng = common::rng(cfg, 42);
    for i in 0..k.resolvent_lattice_draws {
        let (model, f, g, desc) = lattice_pair(&mut rng, 0.3)?;
        let t = rng.gen_range(-k.time_range..k.time_range);
        let z1 = common::random_parameter(&mut rng, 0.5, 2.0);
        let z2 = common::random_parameter(&mut rng, 0.5, 2.0);
        let (e, _) = resolvent_kms(&model, z1, &f, z2, &g, t, &quad)?;
        rows.push(ReportRow::new(
            format!("{ID}.resolvent.lattice"),
            format!("draw={} {desc} t={t:.6} z1={} z2={}", common::padded(i), complex(z1), complex(z2)),
            complex(e.continued),
            Some(complex(e.reversed)),
            e.residual(),
            k.resolvent_tolerance,
        ));
    }
    let mut rng = common::rng(cfg, 43);
    for i in 0..k.resolvent_continuum_draws {
        let (model, f, g, desc) = continuum_pair(&mut rng, cfg)?;
        let f = f.scale(vanhove_core::Complex64::new(0.3, 0.0));
        let g = g.scale(vanhove_core::Complex64::new(0.3, 0.0));
        let t = rng.gen_range(-k.time_range..k.time_range);
        let z1 = common::random_parameter(&mut rng, 0.5, 2.0);
        let z2 = common::random_parameter(&mut rng, 0.5, 2.0);
        let (e, _) = resolvent_kms(&model, z1, &f, z2, &g, t, &quad)?;
        rows.push(ReportRow::new(
            format!("{ID}.resolvent.continuum"),
            format!("draw={} {desc} t={t:.6} z1={} z2={}", common::padded(i), complex(z1), complex(z2)),
            complex(e.continued),
            Some(complex(e.reversed)),
            e.residual(),
            k.resolvent_tolerance,
        ));
    }
    Ok(rows)
}
