//! Weyl and resolvent relations in the Fock representation, the cocycle of
//! the dynamics and the group law of the automorphisms.

use super::common;
use crate::config::RunConfig;
use crate::error::HarnessResult;
use crate::report::{complex, real, ReportRow};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use vanhove_core::fock::{self, FockOperator};
use vanhove_core::forms::cocycle_lattice;
use vanhove_core::resolvent::{relation_residuals, RelationDraw, RelationResiduals};
use vanhove_core::space::LatticeSpace;
use vanhove_core::thermal::ThermalModel;
use vanhove_core::weyl::{self, WeylWord};
use vanhove_core::{Complex64, Dispersion, LatticeFunction, LatticeSpec, Mode, SourceCutoff};

const ID: &str = "relations";
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn run(cfg: &RunConfig) -> HarnessResult<Vec<ReportRow>> {
    let mut rows = resolvent_rows(cfg)?;
    rows.extend(weyl_rows(cfg)?);
    rows.extend(cocycle_rows(cfg)?);
    rows.extend(group_rows(cfg)?);
    Ok(rows)
}

fn resolvent_rows(cfg: &RunConfig) -> HarnessResult<Vec<ReportRow>> {
    let r = &cfg.relations;
    let disp = Dispersion::power(1.0)?;
    let l = 2.0 * PI;
    let modes = [Mode([1, 0, 0]), Mode([0, 1, 0])];
    let single = common::truncation(cfg, l, &modes[..1], &disp, r.resolvent_n_max[0])?;
    let pair = common::truncation(cfg, l, &modes, &disp, r.resolvent_n_max[1])?;
    let blocks = [single.low_block(r.n_low), pair.low_block(r.n_low)];
    let mut rng = common::rng(cfg, 30);
    let mut rows = Vec::new();
    let single_draws = r.resolvent_draws - r.resolvent_pair_draws;
    for i in 0..r.resolvent_draws {
        let two = i >= single_draws;
        let (spec, block, used, scale) =
            if two { (&pair, &blocks[1], &modes[..], 0.1) } else { (&single, &blocks[0], &modes[..1], 0.25) };
        let z = common::random_parameter(&mut rng, 0.5, 2.0);
        let mut w = common::random_parameter(&mut rng, 0.5, 2.0);
        w.re = w.re.abs() * z.re.signum();
        let draw = RelationDraw {
            z,
            w,
            nu: common::random_sign(&mut rng) * rng.gen_range(0.5..2.0),
            f: common::random_lattice(&mut rng, l, used, scale),
            g: common::random_lattice(&mut rng, l, used, scale),
        };
        let res = relation_residuals(spec, &draw, block)?;
        let desc = format!("draw={} modes={} z={} w={} nu={:.6}", common::padded(i), used.len(), complex(z), complex(w), draw.nu);
        for (name, value) in RelationResiduals::NAMES.iter().zip(res.values()) {
            let tol = if *name == "same_direction" { r.same_direction_tolerance } else { r.tolerance };
            rows.push(ReportRow::new(format!("{ID}.resolvent.{name}"), desc.clone(), real(value), None, value, tol));
        }
    }
    Ok(rows)
}

fn random_word(rng: &mut ChaCha8Rng, l: f64, modes: &[Mode]) -> Vec<WeylWord<LatticeFunction>> {
    let len = rng.gen_range(2..=6);
    (0..len).map(|_| WeylWord::generator(common::random_lattice(rng, l, modes, 0.4))).collect()
}

fn weyl_rows(cfg: &RunConfig) -> HarnessResult<Vec<ReportRow>> {
    let r = &cfg.relations;
    let disp = Dispersion::power(1.0)?;
    let l = 2.0 * PI;
    let modes = [Mode([1, 0, 0]), Mode([0, 1, 0])];
    let space = LatticeSpace::new(l, disp, 1.0, SourceCutoff::new(0.5, 1.5))?;
    let specs = [
        common::truncation(cfg, l, &modes[..1], &disp, r.weyl_n_max[0])?,
        common::truncation(cfg, l, &modes, &disp, r.weyl_n_max[1])?,
    ];
    let blocks = [specs[0].low_block(r.n_low), specs[1].low_block(r.n_low)];
    let mut rng = common::rng(cfg, 31);
    let mut rows = Vec::new();
    let single_draws = r.weyl_draws - r.weyl_pair_draws;
    for i in 0..r.weyl_draws {
        let k = usize::from(i >= single_draws);
        let (spec, block, used) = (&specs[k], &blocks[k], &modes[..k + 1]);
        let word = random_word(&mut rng, l, used);
        let desc = format!("draw={} modes={} length={}", common::padded(i), used.len(), word.len());

        // Oracle product against the reduced word.
        let reduced = weyl::reduce(&space, &word)?;
        let mut product = FockOperator::identity(spec.dimension());
        for w in &word {
            product = product.mul(&fock::weyl_operator(&w.direction, spec)?);
        }
        let target = fock::weyl_operator(&reduced.direction, spec)?.scale(reduced.phase);
        let hom = product.combine(ONE, &target, -ONE).block_max(block);
        rows.push(ReportRow::new(
            format!("{ID}.weyl.homomorphism"),
            desc.clone(),
            complex(reduced.phase),
            None,
            hom,
            r.tolerance,
        ));

        // Association independence of the reduction.
        let right = weyl::reduce_right(&space, &word)?;
        let mut choose = |n: usize| rng.gen_range(0..n.max(1));
        let bracketed = weyl::reduce_bracketed(&space, &word, &mut choose)?;
        let mut assoc = (right.phase - reduced.phase).norm().max((bracketed.phase - reduced.phase).norm());
        for other in [&right, &bracketed] {
            let d = other.direction.combine(ONE, &reduced.direction, -ONE)?;
            assoc = assoc.max(d.norm_sqr().sqrt());
        }
        rows.push(ReportRow::new(
            format!("{ID}.weyl.association"),
            desc.clone(),
            complex(reduced.phase),
            Some(complex(right.phase)),
            assoc,
            r.phase_tolerance,
        ));

        // W(f) W(g) = e^{-iσ/2} W(f + g) for the first two generators.
        let (f, g) = (&word[0].direction, &word[1].direction);
        let lhs = fock::weyl_operator(f, spec)?.mul(&fock::weyl_operator(g, spec)?);
        let sigma = f.inner(g)?.im;
        let rhs = fock::weyl_operator(&f.combine(ONE, g, ONE)?, spec)?.scale(Complex64::from_polar(1.0, -0.5 * sigma));
        let pair = lhs.combine(ONE, &rhs, -ONE).block_max(block);
        rows.push(ReportRow::new(format!("{ID}.weyl.pair"), desc, real(sigma), None, pair, r.tolerance));
    }
    Ok(rows)
}

/// Random box, dispersion, shell and a test function on a few shell modes.
fn random_lattice_system(rng: &mut ChaCha8Rng) -> HarnessResult<(Dispersion, SourceCutoff, LatticeFunction)> {
    let s = [1.0, 1.5, 2.0, 3.0][rng.gen_range(0..4)];
    let disp = Dispersion::power(s)?;
    let l = rng.gen_range(2.0..8.0);
    let a = 2.0 * PI / l;
    let lo = rng.gen_range(0.5..1.5) * a;
    let hi = lo + rng.gen_range(1.0..3.0) * a;
    let modes = LatticeSpec::new(l, 0.5 * a, hi + 2.0 * a)?.modes()?;
    let picked: Vec<Mode> = (0..rng.gen_range(1..=6)).map(|_| modes[rng.gen_range(0..modes.len())]).collect();
    let f = common::random_lattice(rng, l, &picked, 1.0);
    let source = SourceCutoff::new(lo, hi).with_amplitude(common::uniform_complex(rng, 1.5));
    Ok((disp, source, f))
}

fn cocycle_rows(cfg: &RunConfig) -> HarnessResult<Vec<ReportRow>> {
    let r = &cfg.relations;
    let mut rng = common::rng(cfg, 32);
    let mut rows = Vec::with_capacity(r.cocycle_draws);
    for i in 0..r.cocycle_draws {
        let (disp, source, f) = random_lattice_system(&mut rng)?;
        let t = rng.gen_range(-5.0..5.0);
        let u = rng.gen_range(-5.0..5.0);
        let l = f.box_side();
        let evolved = f.multiply(|m| Complex64::from_polar(1.0, t * vanhove_core::forms::mode_omega(m, l, &disp)));
        let m_tu = cocycle_lattice(t + u, &f, &source, &disp)?;
        let m_u = cocycle_lattice(u, &evolved, &source, &disp)?;
        let m_t = cocycle_lattice(t, &f, &source, &disp)?;
        let residual = (m_tu - m_u - m_t).abs() / (1.0 + m_t.abs());
        rows.push(ReportRow::new(
            format!("{ID}.cocycle"),
            format!("draw={} s={} t={t:.6} u={u:.6}", common::padded(i), disp.exponent()),
            real(m_tu),
            Some(real(m_u + m_t)),
            residual,
            r.cocycle_tolerance,
        ));
    }
    Ok(rows)
}

fn group_rows(cfg: &RunConfig) -> HarnessResult<Vec<ReportRow>> {
    let r = &cfg.relations;
    let mut rng = common::rng(cfg, 33);
    let mut rows = Vec::with_capacity(r.group_draws);
    for i in 0..r.group_draws {
        let (disp, source, f) = random_lattice_system(&mut rng)?;
        let beta = rng.gen_range(0.5..2.0);
        let model = ThermalModel::new(LatticeSpace::new(f.box_side(), disp, beta, source)?);
        let t = rng.gen_range(-5.0..5.0);
        let u = rng.gen_range(-5.0..5.0);
        let w = WeylWord::generator(f);
        let composed = model.automorphism_apply(t, &model.automorphism_apply(u, &w)?)?;
        let direct = model.automorphism_apply(t + u, &w)?;
        let d = composed.direction.combine(ONE, &direct.direction, -ONE)?;
        let residual = (composed.phase - direct.phase).norm().max(d.norm_sqr().sqrt());
        rows.push(ReportRow::new(
            format!("{ID}.group-law"),
            format!("draw={} s={} t={t:.6} u={u:.6}", common::padded(i), disp.exponent()),
            complex(composed.phase),
            Some(complex(direct.phase)),
            residual,
            r.group_tolerance,
        ));
    }
    Ok(rows)
}
