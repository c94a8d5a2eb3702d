use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use vanhove_core::fock::{self, TruncationSpec};
use vanhove_core::quadrature::Quadrature;
use vanhove_core::resolvent::*;
use vanhove_core::space::{ContinuumSpace, LatticeSpace, OneParticleSpace};
use vanhove_core::thermal::ThermalModel;
use vanhove_core::{CondensateParams, Dispersion, LatticeFunction, Mode, RadialDirection, RadialTestFunction, SourceCutoff};

const MODES: [Mode; 2] = [Mode([1, 0, 0]), Mode([1, 1, 0])];

fn two_mode_model() -> (LatticeSpace, LatticeFunction, LatticeFunction) {
    let disp = Dispersion::power(1.0).unwrap();
    let space = LatticeSpace::new(PI, disp, 1.0, SourceCutoff::new(1.0, 3.0)).unwrap();
    let f = LatticeFunction::from_pairs(PI, [(MODES[0], C::new(0.2, 0.1)), (MODES[1], C::new(-0.1, 0.15))]);
    let g = LatticeFunction::from_pairs(PI, [(MODES[0], C::new(0.05, -0.2)), (MODES[1], C::new(0.2, 0.0))]);
    (space, f, g)
}

#[test]
fn two_point_matches_the_two_mode_oracle() {
    let (space, f, g) = two_mode_model();
    let model = ThermalModel::new(space.clone());
    let (z1, z2) = (C::new(1.0, 0.3), C::new(-0.7, 0.2));
    let analytic = resolvent_two_point(&model, z1, &f, z2, &g, &Quadrature::default()).unwrap();
    let spec = TruncationSpec::new(PI, &MODES, space.dispersion(), 32).unwrap();
    let oracle = fock::gc_expectation(&spec, 1.0, |s| {
        let op = fock::resolvent_in_rep(z1, &f, s)?.mul(&fock::resolvent_in_rep(z2, &g, s)?);
        Ok((op, fock::hamiltonians(s, &space)?.1))
    })
    .unwrap();
    assert!((analytic.value - oracle.value).norm() <= oracle.tolerance(1e-6), "{analytic:?} vs {oracle:?}");
}

#[test]
fn two_point_with_zero_direction_factorizes() {
    let (space, f, _) = two_mode_model();
    let model = ThermalModel::new(space);
    let zero = LatticeFunction::zero(PI);
    let quad = Quadrature::default();
    let (z1, z2) = (C::new(0.8, -0.4), C::new(1.5, 0.0));
    let pair = resolvent_two_point(&model, z1, &f, z2, &zero, &quad).unwrap();
    let single = resolvent_expectation(&model, z1, &f, &quad).unwrap();
    assert!((pair.value - (-C::i() / z2) * single.closed_form).norm() < 1e-14);
}

#[test]
fn orthogonal_real_modes_factorize() {
    // Different modes and no source: σ = 0, m = 0 and the cross covariance vanishes.
    let disp = Dispersion::power(1.0).unwrap();
    let space = LatticeSpace::new(PI, disp, 0.8, SourceCutoff::new(1.0, 3.0).with_amplitude(C::new(0.0, 0.0))).unwrap();
    let model = ThermalModel::new(space);
    let f = LatticeFunction::single(PI, MODES[0], C::new(0.6, 0.0));
    let g = LatticeFunction::single(PI, MODES[1], C::new(-0.4, 0.0));
    let quad = Quadrature::default();
    let (z1, z2) = (C::new(0.9, 0.2), C::new(-1.2, 0.5));
    let pair = resolvent_two_point(&model, z1, &f, z2, &g, &quad).unwrap();
    let a = resolvent_expectation(&model, z1, &f, &quad).unwrap().closed_form;
    let b = resolvent_expectation(&model, z2, &g, &quad).unwrap().closed_form;
    assert!((pair.value - a * b).norm() < 1e-8, "{} vs {}", pair.value, a * b);
}

#[test]
fn laplace_of_weyl_expectations_equals_closed_form() {
    let (space, f, _) = two_mode_model();
    let driven = space.with_source(SourceCutoff::new(1.0, 3.0).with_amplitude(C::new(0.8, 0.3)));
    let model = ThermalModel::new(driven);
    let quad = Quadrature::default();
    for z in [C::new(1.0, 0.3), C::new(-0.6, -0.9), C::new(2.0, 0.0)] {
        let direct = resolvent_expectation(&model, z, &f, &quad).unwrap();
        assert!(direct.discrepancy() < 1e-10);
        let by_weyl = resolvent_expectation_by_weyl(&model, z, &f, &quad).unwrap();
        assert!((direct.closed_form - by_weyl).norm() < 1e-10, "z = {z}");
    }
}

#[test]
fn resolvent_average_is_stationary() {
    let (space, f, _) = two_mode_model();
    let model = ThermalModel::new(space.with_source(SourceCutoff::new(1.0, 3.0).with_amplitude(C::new(1.1, -0.2))));
    let quad = Quadrature::default();
    let r = ResolventGenerator::new(C::new(0.9, 0.4), f).unwrap();
    let base = resolvent_expectation(&model, r.z(), r.direction(), &quad).unwrap().closed_form;
    for t in [-1.7, 0.3, 1.3] {
        let moved = automorphism_generator(&model, t, &r).unwrap();
        let v = resolvent_expectation(&model, moved.z(), moved.direction(), &quad).unwrap().closed_form;
        assert!((v - base).norm() < 1e-10, "t = {t}");
    }
}

#[test]
fn kms_for_resolvent_generators() {
    let (space, f, g) = two_mode_model();
    let model = ThermalModel::new(space.with_source(SourceCutoff::new(1.0, 3.0).with_amplitude(C::new(0.5, 0.5))));
    let quad = Quadrature::default();
    for t in [0.0, 0.7, -1.5] {
        let (k, err) = resolvent_kms(&model, C::new(1.0, 0.3), &f, C::new(-0.7, 0.2), &g, t, &quad).unwrap();
        assert!(k.residual() <= 1e-6 && err <= 1e-6, "t = {t}: {k:?} {err}");
    }
}

#[test]
fn continuum_kms_for_resolvent_generators() {
    let disp = Dispersion::power(1.0).unwrap();
    let space = ContinuumSpace::new(disp, CondensateParams::new(1.0, 0.0), SourceCutoff::uncut()).unwrap();
    let model = ThermalModel::new(space);
    let f: RadialDirection = RadialTestFunction::gaussian(C::new(0.3, 0.1), 1.0).unwrap().into();
    let g: RadialDirection = RadialTestFunction::polynomial_gaussian(C::new(-0.2, 0.25), 2.0, 0.8).unwrap().into();
    let (k, err) = resolvent_kms(&model, C::new(0.8, 0.1), &f, C::new(1.2, -0.4), &g, 0.6, &Quadrature::default()).unwrap();
    assert!(k.residual() <= 1e-6 && err <= 1e-6, "{k:?} {err}");
}

#[test]
fn random_relation_suite_passes() {
    let disp = Dispersion::power(1.0).unwrap();
    let l = 2.0 * PI;
    let modes = [Mode([1, 0, 0])];
    let spec = TruncationSpec::new(l, &modes, &disp, 120).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut draws = Vec::new();
    for _ in 0..20 {
        let mut pick = || {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            C::new(sign * rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0))
        };
        let z = pick();
        let mut w = pick();
        w.re = w.re.abs() * z.re.signum();
        let mut vector = || LatticeFunction::single(l, modes[0], C::new(rng.gen_range(-0.25..0.25), rng.gen_range(-0.25..0.25)));
        let (f, g) = (vector(), vector());
        let nu = if rng.gen_bool(0.5) { -1.0 } else { rng.gen_range(0.5..2.0) };
        draws.push(RelationDraw { z, w, nu, f, g });
    }
    let report = relation_suite(&spec, &draws, 4, 1e-8).unwrap();
    assert!(report.pass(), "{:?}", report.max);
}

#[test]
fn spectral_norm_and_resolvent_identity() {
    let disp = Dispersion::power(1.0).unwrap();
    let l = 2.0 * PI;
    let spec = TruncationSpec::new(l, &[Mode([1, 0, 0])], &disp, 120).unwrap();
    let f = LatticeFunction::single(l, Mode([1, 0, 0]), C::new(1.0, 0.0));
    let r1 = fock::resolvent_in_rep(C::new(1.0, 0.0), &f, &spec).unwrap();
    let r2 = fock::resolvent_in_rep(C::new(2.0, 0.0), &f, &spec).unwrap();
    assert!((r1.spectral_norm().unwrap() - 1.0).abs() < 1e-6);
    // R(1) − R(2) = i(2 − 1) R(1) R(2)
    let lhs = r1.combine(C::new(1.0, 0.0), &r2, C::new(-1.0, 0.0));
    let rhs = r1.mul(&r2).scale(C::i());
    let block = spec.low_block(4);
    assert!(lhs.combine(C::new(1.0, 0.0), &rhs, C::new(-1.0, 0.0)).block_max(&block) < 1e-8);
    let zero = fock::resolvent_in_rep(C::new(2.0, 0.0), &LatticeFunction::zero(l), &spec).unwrap();
    let expected = fock::FockOperator::identity(spec.dimension()).scale(C::new(0.0, -0.5));
    assert!(zero.combine(C::new(1.0, 0.0), &expected, C::new(-1.0, 0.0)).max_abs() < 1e-14);
}

#[test]
fn ideal_classification_examples() {
    let one = C::new(1.0, 0.0);
    let origin: RadialDirection = RadialTestFunction::gaussian(one, 1.0).unwrap().into();
    let vanishing: RadialDirection = RadialTestFunction::polynomial_gaussian(one, 3.0, 1.0).unwrap().into();
    let s3 = Dispersion::power(3.0).unwrap();
    let s1 = Dispersion::power(1.0).unwrap();
    let c = classify_direction(&origin, &s3);
    assert!(c.in_x0 && !c.in_x_phys);
    assert!(condensate_excluded(c, &s3));
    // No containment at s = 1: the direction is both.
    let c = classify_direction(&origin, &s1);
    assert!(c.in_x0 && c.in_x_phys);
    for disp in [&s1, &s3] {
        assert!(!classify_direction(&vanishing, disp).in_x0);
    }
    let physical = ResolventGenerator::new(C::new(1.0, 0.0), vanishing).unwrap();
    let singular = ResolventGenerator::new(C::new(-0.5, 0.2), origin).unwrap();
    let expr = ResolventExpression::generator(physical.clone());
    assert!(quotient_project(&expr, &s3).is_physical());
    let mixed = expr.product(&ResolventExpression::generator(singular));
    assert!(!quotient_project(&mixed, &s3).is_physical());
    assert!(quotient_project(&ResolventExpression::<RadialDirection>::scalar(one), &s3).is_physical());
}
