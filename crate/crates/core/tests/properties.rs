use num_complex::Complex64 as C;
use proptest::prelude::*;
use std::f64::consts::PI;
use vanhove_core::forms::{ir_classify, SingularityConvention};
use vanhove_core::space::{LatticeSpace, OneParticleSpace};
use vanhove_core::thermal::ThermalModel;
use vanhove_core::{Dispersion, LatticeFunction, Mode, RadialDirection, RadialTestFunction, SourceCutoff};

const MODES: [Mode; 2] = [Mode([1, 0, 0]), Mode([1, 1, 0])];

fn model(beta: f64, amplitude: C) -> ThermalModel<LatticeSpace> {
    let disp = Dispersion::power(1.0).unwrap();
    ThermalModel::new(LatticeSpace::new(PI, disp, beta, SourceCutoff::new(1.0, 3.0).with_amplitude(amplitude)).unwrap())
}

fn coefficient() -> impl Strategy<Value = C> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C::new(re, im))
}

fn vector() -> impl Strategy<Value = LatticeFunction> {
    (coefficient(), coefficient()).prop_map(|(a, b)| LatticeFunction::from_pairs(PI, [(MODES[0], a), (MODES[1], b)]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cocycle_law(f in vector(), a in coefficient(), t in -3.0..3.0f64, u in -3.0..3.0f64) {
        let m = model(1.0, a);
        let lhs = m.cocycle(t + u, &f).unwrap();
        let rhs = m.cocycle(t, &m.space().evolve(u, &f)).unwrap() + m.cocycle(u, &f).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn covariance_dominates_the_norm(f in vector(), beta in 0.1..5.0f64) {
        let m = model(beta, C::new(0.0, 0.0));
        let q = m.space().covariance(&f, &f).unwrap().re;
        prop_assert!(q >= f.inner(&f).unwrap().re * (1.0 - 1e-14));
    }

    #[test]
    fn weyl_expectation_has_modulus_at_most_one(f in vector(), a in coefficient(), beta in 0.1..5.0f64) {
        prop_assert!(model(beta, a).weyl_expectation(&f).unwrap().norm() <= 1.0 + 1e-15);
    }

    #[test]
    fn exchanging_the_pair_costs_the_commutator_phase(f in vector(), g in vector(), a in coefficient()) {
        let m = model(1.0, a);
        let fg = m.weyl_two_point(&f, &g).unwrap();
        let gf = m.weyl_two_point(&g, &f).unwrap();
        let sigma = f.inner(&g).unwrap().im;
        prop_assert!((fg - C::from_polar(1.0, -sigma) * gf).norm() <= 1e-13);
    }

    #[test]
    fn evolution_is_an_isometry(f in vector(), g in vector(), t in -5.0..5.0f64) {
        let m = model(1.0, C::new(0.0, 0.0));
        let before = f.inner(&g).unwrap();
        let after = m.space().evolve(t, &f).inner(&m.space().evolve(t, &g)).unwrap();
        prop_assert!((before - after).norm() <= 1e-13);
    }

    #[test]
    fn state_is_stationary(f in vector(), a in coefficient(), t in -5.0..5.0f64) {
        let m = model(0.7, a);
        let w = vanhove_core::weyl::WeylWord::generator(f);
        let moved = m.automorphism_apply(t, &w).unwrap();
        let (x, y) = (m.word_expectation(&w).unwrap(), m.word_expectation(&moved).unwrap());
        prop_assert!((x - y).norm() <= 1e-12);
    }

    #[test]
    fn classification_ignores_scale(
        power in 0.0..4.0f64, width in 0.3..2.0f64, s in 1.0..4.0f64, scale in coefficient(),
    ) {
        prop_assume!(scale.norm() > 1e-3);
        let disp = Dispersion::power(s).unwrap();
        let base: RadialDirection = RadialTestFunction::polynomial_gaussian(C::new(1.0, 0.0), power, width).unwrap().into();
        let scaled: RadialDirection = RadialTestFunction::polynomial_gaussian(scale, power, width).unwrap().into();
        for convention in [SingularityConvention::DefinitionFaithful, SingularityConvention::TheoremLiteral] {
            prop_assert_eq!(
                ir_classify(&base, &disp, convention).class.is_admissible(),
                ir_classify(&scaled, &disp, convention).class.is_admissible()
            );
        }
    }
}
