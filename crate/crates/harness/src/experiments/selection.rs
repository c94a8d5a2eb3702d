//! Shifted field `φ(f) + Re m(f)` has zero expectation.

use super::common;
use crate::config::RunConfig;
use crate::error::HarnessResult;
use crate::report::{complex, real, ReportRow};
use rand::Rng;
use std::f64::consts::PI;
use vanhove_core::forms::{ir_classify, mean_functional_lattice, mean_functional_radial, SingularityConvention};
use vanhove_core::space::{ContinuumSpace, LatticeSpace, OneParticleSpace};
use vanhove_core::thermal::ThermalModel;
use vanhove_core::{CondensateParams, Complex64, Dispersion, LatticeSpec, Mode, SourceCutoff};

const ID: &str = "selection";

/// `-i d/dt ψ(W(tf))` at zero by Richardson-extrapolated central differences.
fn field_by_difference<S: OneParticleSpace>(model: &ThermalModel<S>, f: &S::Vector) -> HarnessResult<Complex64> {
    let space = model.space();
    let weyl = |t: f64| -> HarnessResult<Complex64> {
        let tf = space.combine(Complex64::new(t, 0.0), f, Complex64::new(0.0, 0.0), f)?;
        Ok(model.weyl_expectation(&tf)?)
    };
    let central = |h: f64| -> HarnessResult<Complex64> { Ok((weyl(h)? - weyl(-h)?) / (2.0 * h)) };
    let h = 1e-4;
    let d = (4.0 * central(0.5 * h)? - central(h)?) / 3.0;
    Ok(-Complex64::i() * d)
}

fn push_rows<S: OneParticleSpace>(
    rows: &mut Vec<ReportRow>,
    cfg: &RunConfig,
    suite: &str,
    desc: String,
    model: &ThermalModel<S>,
    f: &S::Vector,
    mean: Complex64,
) -> HarnessResult<()> {
    let c = &cfg.selection;
    let field = model.one_point_segal(f)?;
    let shifted = field + mean.re;
    rows.push(ReportRow::new(
        format!("{ID}.{suite}.analytic"),
        desc.clone(),
        complex(shifted),
        Some(real(mean.re)),
        shifted.norm(),
        c.analytic_tolerance,
    ));
    let shifted = field_by_difference(model, f)? + mean.re;
    rows.push(ReportRow::new(
        format!("{ID}.{suite}.finite-difference"),
        desc,
        complex(shifted),
        Some(real(mean.re)),
        shifted.norm(),
        c.finite_difference_tolerance,
    ));
    Ok(())
}

pub fn run(cfg: &RunConfig) -> HarnessResult<Vec<ReportRow>> {
    let c = &cfg.selection;
    let quad = common::quadrature(cfg);
    let mut rows = Vec::new();

    let mut rng = common::rng(cfg, 70);
    for i in 0..c.continuum_draws {
        let s = [1.0, 1.5, 2.0, 2.5, 3.0][rng.gen_range(0..5)];
        let disp = Dispersion::power(s)?;
        let beta = rng.gen_range(0.5..2.0);
        let n0 = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.0..1.0) };
        let source = SourceCutoff::uncut().with_amplitude(common::uniform_complex(&mut rng, 1.0));
        let space = ContinuumSpace::new(disp, CondensateParams::new(beta, n0), source)?.with_quadrature(quad.clone());
        // Redraw until the origin order suits the exponent.
        let f = loop {
            let f = common::random_radial(&mut rng, s < 2.0);
            if ir_classify(&f, &disp, SingularityConvention::DefinitionFaithful).class.is_admissible() {
                break f;
            }
        };
        space.check_direction(&f)?;
        let mean = mean_functional_radial(&f, &source, &disp, &quad)?;
        let desc = format!("draw={} s={s} beta={beta:.4} n0={n0:.4}", common::padded(i));
        push_rows(&mut rows, cfg, "continuum", desc, &ThermalModel::new(space), &f, mean)?;
    }

    let mut rng = common::rng(cfg, 71);
    for i in 0..c.lattice_draws {
        let s = [1.0, 1.5, 2.0, 3.0][rng.gen_range(0..4)];
        let disp = Dispersion::power(s)?;
        let l = rng.gen_range(3.0..8.0);
        let a = 2.0 * PI / l;
        let beta = rng.gen_range(0.5..2.0);
        let source = SourceCutoff::new(a, 3.0 * a).with_amplitude(common::uniform_complex(&mut rng, 1.5));
        let modes = LatticeSpec::new(l, 0.5 * a, 4.0 * a)?.modes()?;
        let picked: Vec<Mode> = (0..rng.gen_range(1..=5)).map(|_| modes[rng.gen_range(0..modes.len())]).collect();
        let f = common::random_lattice(&mut rng, l, &picked, 1.0);
        let mean = mean_functional_lattice(&f, &source, &disp)?;
        let desc = format!("draw={} s={s} L={l:.4} beta={beta:.4}", common::padded(i));
        let model = ThermalModel::new(LatticeSpace::new(l, disp, beta, source)?);
        push_rows(&mut rows, cfg, "lattice", desc, &model, &f, mean)?;
    }
    Ok(rows)
}
