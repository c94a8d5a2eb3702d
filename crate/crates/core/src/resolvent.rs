//! Resolvent generators `R(z, f) = (iz − φ(f))^{-1}`, their expectation
//! values in the equilibrium state, the dynamics, the infrared ideal and the
//! resolvent relations in the Fock representation.
//!
//! Expectations go through the Laplace representation
//! `R(z, f) = -i ∫_0^{sgn(Re z)∞} e^{-zt} W(-tf) dt`.

use crate::dispersion::Dispersion;
use crate::fock::{self, FockOperator, FockResult, TruncationSpec};
use crate::forms::{ir_classify, SingularityConvention};
use crate::lattice::LatticeFunction;
use crate::quadrature::{Integral, Quadrature};
use crate::radial::RadialDirection;
use crate::space::OneParticleSpace;
use crate::thermal::{KmsEvaluation, ThermalModel};
use crate::{Error, Result};
use errorfunctions::ComplexErrorFunctions;
use num_complex::Complex64;
use std::f64::consts::PI;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Exponent `-40` bounds every neglected Laplace tail.
const TAIL_EXPONENT: f64 = 40.0;

#[derive(Debug, Clone)]
pub struct ResolventGenerator<V> {
    z: Complex64,
    direction: V,
}

impl<V: Clone> ResolventGenerator<V> {
    pub fn new(z: Complex64, direction: V) -> Result<Self> {
        if !(z.re != 0.0 && z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::ResolventParameter(z));
        }
        Ok(Self { z, direction })
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn direction(&self) -> &V {
        &self.direction
    }

    /// `R(z, f) = ν R(νz, νf)`; returns `ν` and `R(νz, νf)`.
    pub fn rescaled<S: OneParticleSpace<Vector = V>>(&self, space: &S, nu: f64) -> Result<(f64, Self)> {
        if nu == 0.0 {
            return Err(Error::Unsupported("scaling factor must be nonzero".into()));
        }
        let direction = space.combine(Complex64::new(nu, 0.0), &self.direction, ZERO, &space.zero())?;
        Ok((nu, Self::new(nu * self.z, direction)?))
    }

    /// `R(z, f)* = R(-conj z, f)`.
    pub fn adjoint(&self) -> Self {
        Self { z: -self.z.conj(), direction: self.direction.clone() }
    }
}

/// Scalar times an ordered product of generators.
#[derive(Debug, Clone)]
pub struct ResolventExpression<V> {
    pub prefactor: Complex64,
    pub factors: Vec<ResolventGenerator<V>>,
}

impl<V: Clone> ResolventExpression<V> {
    pub fn scalar(c: Complex64) -> Self {
        Self { prefactor: c, factors: Vec::new() }
    }

    pub fn generator(g: ResolventGenerator<V>) -> Self {
        Self { prefactor: ONE, factors: vec![g] }
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Self { prefactor: self.prefactor * other.prefactor, factors }
    }

    /// Factor-reversed product of the adjoint generators.
    pub fn adjoint(&self) -> Self {
        Self { prefactor: self.prefactor.conj(), factors: self.factors.iter().rev().map(|g| g.adjoint()).collect() }
    }
}

/// `-i ∫_0^{sgn(Re z)∞} exp(-(z − i·mean)t − covariance·t²/4) dt`
/// through the scaled complementary error function.
pub fn laplace_closed_form(z: Complex64, mean: f64, covariance: f64) -> Complex64 {
    let sign = z.re.signum();
    let c = sign * (z - Complex64::new(0.0, mean));
    let b = 0.25 * covariance;
    let j = if b <= 0.0 {
        ONE / c
    } else {
        let root = b.sqrt();
        0.5 * PI.sqrt() / root * (c / (2.0 * root)).erfcx()
    };
    -Complex64::i() * sign * j
}

/// The same integral by composite Gauss–Legendre quadrature on a truncated half-line.
pub fn laplace_quadrature(z: Complex64, mean: f64, covariance: f64, quad: &Quadrature) -> Integral {
    let sign = z.re.signum();
    let c = sign * (z - Complex64::new(0.0, mean));
    let b = 0.25 * covariance;
    let mut end = TAIL_EXPONENT / c.re;
    let mut width = 0.25 / c.re;
    if b > 0.0 {
        end = end.min((TAIL_EXPONENT / b).sqrt());
        width = width.min(0.25 / b.sqrt());
    }
    if c.im != 0.0 {
        width = width.min(0.25 * PI / c.im.abs());
    }
    let out = quad.interval(0.0, end, width.min(end), |t| (-c * t - b * t * t).exp());
    Integral { value: -Complex64::i() * sign * out.value, error: out.error }
}

/// Both evaluations of a one-generator expectation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventValue {
    pub closed_form: Complex64,
    pub quadrature: Complex64,
    pub quadrature_error: f64,
}

impl ResolventValue {
    pub fn discrepancy(&self) -> f64 {
        (self.closed_form - self.quadrature).norm()
    }
}

/// `ψ(R(z, f))`.
pub fn resolvent_expectation<S: OneParticleSpace>(
    model: &ThermalModel<S>,
    z: Complex64,
    f: &S::Vector,
    quad: &Quadrature,
) -> Result<ResolventValue> {
    ResolventGenerator::new(z, f.clone())?;
    let (mean, covariance) = if model.space().is_zero(f) {
        (0.0, 0.0)
    } else {
        let g = model.gaussian(f)?;
        (g.mean, g.covariance)
    };
    let q = laplace_quadrature(z, mean, covariance, quad);
    Ok(ResolventValue {
        closed_form: laplace_closed_form(z, mean, covariance),
        quadrature: q.value,
        quadrature_error: q.error,
    })
}

/// `-i ∫ e^{-zt} ψ(W(-tf)) dt` with the Weyl expectation evaluated afresh at
/// every node.
pub fn resolvent_expectation_by_weyl<S: OneParticleSpace>(
    model: &ThermalModel<S>,
    z: Complex64,
    f: &S::Vector,
    quad: &Quadrature,
) -> Result<Complex64> {
    let space = model.space();
    let sign = z.re.signum();
    let scale = if space.is_zero(f) { 0.0 } else { model.gaussian(f)?.covariance };
    let mut end = TAIL_EXPONENT / z.re.abs();
    let mut width = 0.25 / z.re.abs();
    if scale > 0.0 {
        end = end.min((4.0 * TAIL_EXPONENT / scale).sqrt());
        width = width.min(0.5 / scale.sqrt());
    }
    let failure = std::cell::RefCell::new(None);
    let out = quad.interval(0.0, end, width.min(end), |u| {
        let t = sign * u;
        let dir = space.combine(Complex64::new(-t, 0.0), f, ZERO, &space.zero());
        match dir.and_then(|d| model.weyl_expectation(&d)) {
            Ok(w) => (-z * t).exp() * w,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                ZERO
            }
        }
    });
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(-Complex64::i() * sign * out.value)
}

/// Gaussian data of `(s, u) ↦ exp(i s a_f + i u a_g − s² Q_f/4 − u² Q_g/4 + s u κ)`.
#[derive(Debug, Clone, Copy)]
struct PairGaussian {
    mean_f: f64,
    mean_g: f64,
    cov_f: f64,
    cov_g: f64,
    cross: Complex64,
}

/// Value of a double Laplace integral with its error estimate and the bound
/// on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointValue {
    pub value: Complex64,
    pub error: f64,
    pub tail_bound: f64,
}

/// `-∫∫ e^{-z_1 s − z_2 u} exp(…) ds du` over the quarter plane selected by the
/// signs of `Re z_1`, `Re z_2`.
fn double_laplace(z1: Complex64, z2: Complex64, g: PairGaussian, quad: &Quadrature) -> TwoPointValue {
    let (s1, s2) = (z1.re.signum(), z2.re.signum());
    let (r1, r2) = (z1.re.abs(), z2.re.abs());
    // Real part of the exponent is -r1 x - r2 y - [x y] M [x y]^T.
    let m11 = 0.25 * g.cov_f;
    let m22 = 0.25 * g.cov_g;
    let m12 = -0.5 * s1 * s2 * g.cross.re;
    let tr = m11 + m22;
    let det = m11 * m22 - m12 * m12;
    let lambda_min = (0.5 * tr - (0.25 * tr * tr - det).max(0.0).sqrt()).max(0.0);
    let mut end1 = TAIL_EXPONENT / r1;
    let mut end2 = TAIL_EXPONENT / r2;
    if lambda_min > 1e-12 {
        let radius = (TAIL_EXPONENT / lambda_min).sqrt();
        end1 = end1.min(radius);
        end2 = end2.min(radius);
    }
    let osc1 = z1.im.abs() + g.mean_f.abs() + g.cross.im.abs() * end2;
    let osc2 = z2.im.abs() + g.mean_g.abs() + g.cross.im.abs() * end1;
    let width = |end: f64, r: f64, m: f64, osc: f64| {
        let mut w = (2.0 / r).min(end / 4.0);
        if m > 0.0 {
            w = w.min(1.0 / m.sqrt());
        }
        if osc > 0.0 {
            w = w.min(PI / osc);
        }
        w
    };
    let w1 = width(end1, r1, m11, osc1);
    let w2 = width(end2, r2, m22, osc2);
    let out = quad.rectangle(end1, w1, end2, w2, |x, y| {
        let (s, u) = (s1 * x, s2 * y);
        let exponent = -z1 * s - z2 * u
            + Complex64::new(-0.25 * (s * s * g.cov_f + u * u * g.cov_g), s * g.mean_f + u * g.mean_g)
            + s * u * g.cross;
        exponent.exp()
    });
    let tail_bound = 2.0 * (-TAIL_EXPONENT).exp() / (r1 * r2).min(1.0);
    TwoPointValue { value: -s1 * s2 * out.value, error: out.error, tail_bound }
}

fn scalar_resolvent(z: Complex64) -> Complex64 {
    -Complex64::i() / z
}

/// `ψ(R(z_1, f) R(z_2, g))` by two-dimensional quadrature.
pub fn resolvent_two_point<S: OneParticleSpace>(
    model: &ThermalModel<S>,
    z1: Complex64,
    f: &S::Vector,
    z2: Complex64,
    g: &S::Vector,
    quad: &Quadrature,
) -> Result<TwoPointValue> {
    ResolventGenerator::new(z1, f.clone())?;
    ResolventGenerator::new(z2, g.clone())?;
    let space = model.space();
    if space.is_zero(f) || space.is_zero(g) {
        let (scalar, z, h) = if space.is_zero(f) { (scalar_resolvent(z1), z2, g) } else { (scalar_resolvent(z2), z1, f) };
        let v = resolvent_expectation(model, z, h, quad)?;
        return Ok(TwoPointValue { value: scalar * v.closed_form, error: v.quadrature_error, tail_bound: 0.0 });
    }
    let gf = model.gaussian(f)?;
    let gg = model.gaussian(g)?;
    let q = space.covariance(f, g)?.re;
    let sigma = space.sigma(f, g)?;
    let data = PairGaussian {
        mean_f: gf.mean,
        mean_g: gg.mean,
        cov_f: gf.covariance,
        cov_g: gg.covariance,
        cross: Complex64::new(-0.5 * q, -0.5 * sigma),
    };
    Ok(double_laplace(z1, z2, data, quad))
}

/// `α_t(R(z, f)) = R(z + iM_t(f), e^{itε} f)`.
pub fn automorphism_generator<S: OneParticleSpace>(
    model: &ThermalModel<S>,
    t: f64,
    r: &ResolventGenerator<S::Vector>,
) -> Result<ResolventGenerator<S::Vector>> {
    let m = model.cocycle(t, &r.direction)?;
    ResolventGenerator::new(r.z + Complex64::new(0.0, m), model.space().evolve(t, &r.direction))
}

/// Complex-time KMS check for `A = R(z_1, f)`, `B = R(z_2, g)`: both sides are
/// double Laplace transforms of the Weyl-level functions `F(t + iβ)` and `G(t)`.
pub fn resolvent_kms<S: OneParticleSpace>(
    model: &ThermalModel<S>,
    z1: Complex64,
    f: &S::Vector,
    z2: Complex64,
    g: &S::Vector,
    t: f64,
    quad: &Quadrature,
) -> Result<(KmsEvaluation, f64)> {
    ResolventGenerator::new(z1, f.clone())?;
    ResolventGenerator::new(z2, g.clone())?;
    let space = model.space();
    if space.is_zero(f) || space.is_zero(g) {
        let a = resolvent_two_point(model, z1, f, z2, g, quad)?;
        return Ok((KmsEvaluation { continued: a.value, reversed: a.value }, a.error));
    }
    let gf = model.gaussian(f)?;
    let gg = model.gaussian(g)?;
    let q0 = space.condensate(f, g).re;
    let base = PairGaussian { mean_f: gf.mean, mean_g: gg.mean, cov_f: gf.covariance, cov_g: gg.covariance, cross: ZERO };
    let continued_cross = model.cross_continued(f, g, t, space.beta())? - 0.5 * q0;
    let reversed_cross = model.cross_reversed(f, g, t)? - 0.5 * q0;
    let a = double_laplace(z1, z2, PairGaussian { cross: continued_cross, ..base }, quad);
    let b = double_laplace(z1, z2, PairGaussian { cross: reversed_cross, ..base }, quad);
    Ok((KmsEvaluation { continued: a.value, reversed: b.value }, a.error + b.error))
}

/// Membership of a radial direction in the physical directions and in the
/// condensate directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectionClass {
    pub in_x_phys: bool,
    pub in_x0: bool,
}

pub fn classify_direction(f: &RadialDirection, disp: &Dispersion) -> DirectionClass {
    let r = ir_classify(f, disp, SingularityConvention::DefinitionFaithful);
    DirectionClass { in_x_phys: r.x_phys, in_x0: r.x0 }
}

/// For `s > 2` no condensate direction is physical.
pub fn condensate_excluded(class: DirectionClass, disp: &Dispersion) -> bool {
    disp.exponent() <= 2.0 || !(class.in_x0 && class.in_x_phys)
}

#[derive(Debug, Clone)]
pub enum Projection<V> {
    /// Every generator is physical; the expression survives the quotient unchanged.
    Physical(ResolventExpression<V>),
    /// The generator at `factor` lies in the infrared ideal, hence so does the product.
    Ideal { factor: usize },
}

impl<V> Projection<V> {
    pub fn is_physical(&self) -> bool {
        matches!(self, Projection::Physical(_))
    }
}

/// Image of an expression in the physical algebra, decided generator by generator.
pub fn quotient_project(
    expr: &ResolventExpression<RadialDirection>,
    disp: &Dispersion,
) -> Projection<RadialDirection> {
    for (i, g) in expr.factors.iter().enumerate() {
        if !classify_direction(g.direction(), disp).in_x_phys {
            return Projection::Ideal { factor: i };
        }
    }
    Projection::Physical(expr.clone())
}

/// Parameters of one randomized instance of the resolvent relations.
#[derive(Debug, Clone)]
pub struct RelationDraw {
    pub z: Complex64,
    pub w: Complex64,
    pub nu: f64,
    pub f: LatticeFunction,
    pub g: LatticeFunction,
}

/// Residual norms of each relation on the low-occupation block.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RelationResiduals {
    pub zero: f64,
    pub adjoint: f64,
    pub scaling: f64,
    pub identity_left: f64,
    pub identity_right: f64,
    pub commutator: f64,
    pub product: f64,
    pub same_direction: f64,
}

impl RelationResiduals {
    pub const NAMES: [&'static str; 8] = [
        "zero",
        "adjoint",
        "scaling",
        "identity_left",
        "identity_right",
        "commutator",
        "product",
        "same_direction",
    ];

    pub fn values(&self) -> [f64; 8] {
        [
            self.zero,
            self.adjoint,
            self.scaling,
            self.identity_left,
            self.identity_right,
            self.commutator,
            self.product,
            self.same_direction,
        ]
    }

    fn max_with(&mut self, other: &Self) {
        let a = self.values();
        let b = other.values();
        let m: Vec<f64> = a.iter().zip(b.iter()).map(|(x, y)| x.max(*y)).collect();
        *self = Self {
            zero: m[0],
            adjoint: m[1],
            scaling: m[2],
            identity_left: m[3],
            identity_right: m[4],
            commutator: m[5],
            product: m[6],
            same_direction: m[7],
        };
    }
}

fn diff(a: &FockOperator, b: &FockOperator, block: &[usize]) -> f64 {
    a.combine(ONE, b, -ONE).block_max(block)
}

/// Evaluates all resolvent relations for one draw. `z + w` must stay off the
/// imaginary axis.
pub fn relation_residuals(spec: &TruncationSpec, draw: &RelationDraw, block: &[usize]) -> FockResult<RelationResiduals> {
    let (z, w, nu) = (draw.z, draw.w, draw.nu);
    let zero_dir = LatticeFunction::zero(spec.box_side());
    let i = Complex64::i();
    let rz = fock::resolvent_in_rep(z, &draw.f, spec)?;
    let rw = fock::resolvent_in_rep(w, &draw.f, spec)?;
    let rwg = fock::resolvent_in_rep(w, &draw.g, spec)?;
    let dim = spec.dimension();

    let r0 = fock::resolvent_in_rep(z, &zero_dir, spec)?;
    let zero = diff(&r0, &FockOperator::identity(dim).scale(-i / z), block);

    let radj = fock::resolvent_in_rep(-z.conj(), &draw.f, spec)?;
    let adjoint = diff(&rz.adjoint(), &radj, block);

    let scaled_f = draw.f.scale(Complex64::new(nu, 0.0));
    let rs = fock::resolvent_in_rep(nu * z, &scaled_f, spec)?.scale(Complex64::new(nu, 0.0));
    let scaling = diff(&rs, &rz, block);

    let lhs = rz.combine(ONE, &rw, -ONE);
    let identity_left = diff(&lhs, &rz.mul(&rw).scale(i * (w - z)), block);
    let identity_right = diff(&lhs, &rw.mul(&rz).scale(i * (w - z)), block);

    let sigma = draw.f.inner(&draw.g).map_err(|_| fock::FockError::NoModes)?.im;
    let comm = rz.mul(&rwg).combine(ONE, &rwg.mul(&rz), -ONE);
    let rhs = rz.mul(&rwg).mul(&rwg).mul(&rz).scale(i * sigma);
    let commutator = diff(&comm, &rhs, block);

    let sum_dir = draw.f.combine(ONE, &draw.g, ONE).map_err(|_| fock::FockError::NoModes)?;
    let rsum = fock::resolvent_in_rep(z + w, &sum_dir, spec)?;
    let bracket = rz.combine(ONE, &rwg, ONE).combine(ONE, &rz.mul(&rz).mul(&rwg), i * sigma);
    let product = diff(&rz.mul(&rwg), &rsum.mul(&bracket), block);

    let same = rz.mul(&rw).combine(ONE, &rw.mul(&rz), -ONE);
    let same_direction = same.block_max(block);

    Ok(RelationResiduals { zero, adjoint, scaling, identity_left, identity_right, commutator, product, same_direction })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    pub draws: usize,
    /// Largest residual of each relation over all draws.
    pub max: RelationResiduals,
    pub tolerance: f64,
}

impl RelationReport {
    pub fn pass(&self) -> bool {
        self.max.values().iter().all(|r| *r <= self.tolerance)
    }
}

/// Runs [`relation_residuals`] over `draws` on the block of occupations `≤ n_low`.
pub fn relation_suite(
    spec: &TruncationSpec,
    draws: &[RelationDraw],
    n_low: usize,
    tolerance: f64,
) -> FockResult<RelationReport> {
    let block = spec.low_block(n_low);
    let mut max = RelationResiduals::default();
    for d in draws {
        max.max_with(&relation_residuals(spec, d, &block)?);
    }
    Ok(RelationReport { draws: draws.len(), max, tolerance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Mode;
    use crate::source::SourceCutoff;
    use crate::space::LatticeSpace;

    #[test]
    fn closed_form_examples() {
        // q = 0, f = 0: R(2, 0) = -i/2
        let v = laplace_closed_form(Complex64::new(2.0, 0.0), 0.0, 0.0);
        assert!((v - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        // q = 1, λ = 1: -i √π e erfc(1)
        let v = laplace_closed_form(Complex64::new(1.0, 0.0), 0.0, 1.0);
        assert!((v - Complex64::new(0.0, -0.7578721561413122)).norm() < 1e-13, "{v}");
        let q = laplace_quadrature(Complex64::new(1.0, 0.0), 0.0, 1.0, &Quadrature::default());
        assert!((q.value - v).norm() < 1e-12);
    }

    #[test]
    fn negative_parameter_uses_the_negative_half_line() {
        for &(z, m, q) in &[(-1.3, 0.4, 0.7), (-0.5, -1.0, 2.0), (-2.0, 0.0, 0.0)] {
            let z = Complex64::new(z, 0.3);
            let a = laplace_closed_form(z, m, q);
            let b = laplace_quadrature(z, m, q, &Quadrature::default());
            assert!((a - b.value).norm() < 1e-11, "{a} vs {:?}", b);
        }
        // R(λ, 0)* = R(-λ, 0)
        let a = laplace_closed_form(Complex64::new(1.5, 0.0), 0.0, 0.0);
        let b = laplace_closed_form(Complex64::new(-1.5, 0.0), 0.0, 0.0);
        assert!((a.conj() - b).norm() < 1e-15);
    }

    #[test]
    fn generator_validation_and_adjoint() {
        assert!(ResolventGenerator::new(Complex64::new(0.0, 1.0), ()).is_err());
        let g = ResolventGenerator::new(Complex64::new(1.0, 2.0), ()).unwrap();
        assert_eq!(g.adjoint().z(), Complex64::new(-1.0, 2.0));
        let e = ResolventExpression::generator(g.clone()).product(&ResolventExpression::generator(g.adjoint()));
        let a = e.adjoint();
        assert_eq!(a.factors[0].z(), Complex64::new(1.0, 2.0));
        assert_eq!(a.factors[1].z(), Complex64::new(-1.0, 2.0));
    }

    #[test]
    fn single_mode_oracle_agrees() {
        let l = 2.0 * PI;
        let disp = Dispersion::power(1.0).unwrap();
        let space = LatticeSpace::new(l, disp, 1.0, SourceCutoff::new(0.5, 1.5).with_amplitude(ZERO)).unwrap();
        let model = ThermalModel::new(space.clone());
        let f = LatticeFunction::single(l, Mode([1, 0, 0]), ONE);
        let analytic = resolvent_expectation(&model, ONE, &f, &Quadrature::default()).unwrap();
        assert!(analytic.discrepancy() < 1e-10);
        let spec = TruncationSpec::new(l, &[Mode([1, 0, 0])], &disp, 64).unwrap();
        let report = fock::gc_expectation(&spec, 1.0, |s| {
            let (free, _) = fock::hamiltonians(s, &space)?;
            Ok((fock::resolvent_in_rep(ONE, &f, s)?, free))
        })
        .unwrap();
        assert!((report.value - analytic.closed_form).norm() < report.tolerance(1e-6), "{report:?} {analytic:?}");
    }
}
