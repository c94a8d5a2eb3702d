//! One-particle spaces on which the quasi-free van Hove states are built.
//!
//! A space fixes the dispersion, temperature and source, and exposes the
//! handful of sesquilinear data every closed form is assembled from: the
//! inner product, spectrally weighted pairings, the displacement pairing
//! `⟨d, f⟩` and the condensate form.

use crate::dispersion::Dispersion;
use crate::forms::{self, ir_classify, IrClass, SingularityConvention};
use crate::lattice::LatticeFunction;
use crate::quadrature::Quadrature;
use crate::radial::RadialDirection;
use crate::source::{CondensateParams, SourceCutoff};
use crate::{Error, Result};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

pub trait OneParticleSpace {
    type Vector: Clone + std::fmt::Debug;

    fn beta(&self) -> f64;
    fn dispersion(&self) -> &Dispersion;
    fn zero(&self) -> Self::Vector;
    fn is_zero(&self, f: &Self::Vector) -> bool;
    /// `a·f + b·g`.
    fn combine(&self, a: Complex64, f: &Self::Vector, b: Complex64, g: &Self::Vector) -> Result<Self::Vector>;
    /// Free evolution `e^{it(ω−μ)} f`.
    fn evolve(&self, t: f64, f: &Self::Vector) -> Self::Vector;
    /// `⟨f, g⟩`, antilinear in `f`.
    fn inner(&self, f: &Self::Vector, g: &Self::Vector) -> Result<Complex64>;
    /// `⟨f, w(ω − μ) g⟩` for a spectral weight `w`; `rate` bounds the
    /// frequency of any `e^{iτ(ω−μ)}` factor inside `w`.
    fn spectral(
        &self,
        f: &Self::Vector,
        g: &Self::Vector,
        weight: &dyn Fn(f64) -> Complex64,
        rate: f64,
    ) -> Result<Complex64>;
    /// `⟨d, f⟩` where `d` is the displacement of the equilibrium state.
    fn displacement(&self, f: &Self::Vector) -> Result<Complex64>;
    /// Polarized condensate form; zero when there is no condensate.
    fn condensate(&self, f: &Self::Vector, g: &Self::Vector) -> Complex64;

    /// `σ(f, g) = Im⟨f, g⟩`.
    fn sigma(&self, f: &Self::Vector, g: &Self::Vector) -> Result<f64> {
        Ok(self.inner(f, g)?.im)
    }

    /// Polarized `⟨f, coth(β(ω−μ)/2) g⟩`.
    fn thermal(&self, f: &Self::Vector, g: &Self::Vector) -> Result<Complex64> {
        let beta = self.beta();
        self.spectral(f, g, &|e| Complex64::new(forms::coth_weight(beta, e), 0.0), 0.0)
    }

    /// Full covariance `q(f, g) = q_{≠0}(f, g) + q_0(f, g)`.
    fn covariance(&self, f: &Self::Vector, g: &Self::Vector) -> Result<Complex64> {
        Ok(self.thermal(f, g)? + self.condensate(f, g))
    }
}

/// Which displacement the lattice state uses when `μ ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DisplacementMode {
    /// `d = ρ̂ / ((ω − μ)√ω)`, from completing the square mode by mode.
    #[default]
    MuCorrected,
    /// `d = ρ̂ / ω^{3/2}` regardless of `μ`.
    Uncorrected,
}

/// Bounded system in a periodic box with a cut-off source.
#[derive(Debug, Clone)]
pub struct LatticeSpace {
    box_side: f64,
    disp: Dispersion,
    beta: f64,
    source: SourceCutoff,
    mode: DisplacementMode,
}

impl LatticeSpace {
    pub fn new(box_side: f64, disp: Dispersion, beta: f64, source: SourceCutoff) -> Result<Self> {
        if !(box_side > 0.0) {
            return Err(crate::lattice::LatticeError::BoxSide(box_side).into());
        }
        if !(beta > 0.0) {
            return Err(Error::Unsupported(format!("inverse temperature must be positive, got {beta}")));
        }
        Ok(Self { box_side, disp, beta, source, mode: DisplacementMode::default() })
    }

    pub fn with_displacement_mode(mut self, mode: DisplacementMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn box_side(&self) -> f64 {
        self.box_side
    }

    pub fn source(&self) -> &SourceCutoff {
        &self.source
    }

    pub fn with_source(&self, source: SourceCutoff) -> Self {
        Self { source, ..self.clone() }
    }

    pub fn displacement_mode(&self) -> DisplacementMode {
        self.mode
    }

    /// Coefficient `d_k` of the displacement at a mode of frequency `omega`
    /// and wave number `k`.
    pub fn displacement_coefficient(&self, omega: f64, k: f64) -> Complex64 {
        let rho = self.source.coefficient(k);
        if rho == ZERO {
            return ZERO;
        }
        match self.mode {
            DisplacementMode::Uncorrected => rho / omega.powf(1.5),
            DisplacementMode::MuCorrected => rho / (self.disp.excitation(omega) * omega.sqrt()),
        }
    }

    /// `h_k = ρ̂_k/√ω_k`, the coupling of the linear term in the Hamiltonian.
    pub fn coupling(&self, omega: f64, k: f64) -> Complex64 {
        let rho = self.source.coefficient(k);
        if rho == ZERO {
            ZERO
        } else {
            rho / omega.sqrt()
        }
    }

    fn check_box(&self, f: &LatticeFunction) -> Result<()> {
        if (f.box_side() - self.box_side).abs() > 1e-12 * self.box_side {
            return Err(crate::lattice::LatticeError::BoxMismatch(self.box_side, f.box_side()).into());
        }
        Ok(())
    }
}

impl OneParticleSpace for LatticeSpace {
    type Vector = LatticeFunction;

    fn beta(&self) -> f64 {
        self.beta
    }

    fn dispersion(&self) -> &Dispersion {
        &self.disp
    }

    fn zero(&self) -> LatticeFunction {
        LatticeFunction::zero(self.box_side)
    }

    fn is_zero(&self, f: &LatticeFunction) -> bool {
        f.is_zero()
    }

    fn combine(&self, a: Complex64, f: &LatticeFunction, b: Complex64, g: &LatticeFunction) -> Result<LatticeFunction> {
        self.check_box(f)?;
        Ok(f.combine(a, g, b)?)
    }

    fn evolve(&self, t: f64, f: &LatticeFunction) -> LatticeFunction {
        let l = self.box_side;
        f.multiply(|m| {
            let e = self.disp.excitation(forms::mode_omega(m, l, &self.disp));
            Complex64::from_polar(1.0, t * e)
        })
    }

    fn inner(&self, f: &LatticeFunction, g: &LatticeFunction) -> Result<Complex64> {
        self.check_box(f)?;
        Ok(f.inner(g)?)
    }

    fn spectral(
        &self,
        f: &LatticeFunction,
        g: &LatticeFunction,
        weight: &dyn Fn(f64) -> Complex64,
        _rate: f64,
    ) -> Result<Complex64> {
        self.check_box(f)?;
        forms::lattice_pairing(f, g, &self.disp, weight)
    }

    fn displacement(&self, f: &LatticeFunction) -> Result<Complex64> {
        self.check_box(f)?;
        if self.source.is_silent() {
            return Ok(ZERO);
        }
        let l = self.box_side;
        let mut acc = ZERO;
        for (m, c) in f.iter() {
            let k = m.wave_number(l);
            if !self.source.in_shell(k) {
                continue;
            }
            let w = forms::mode_omega(m, l, &self.disp);
            if w == 0.0 {
                return Err(Error::ZeroModeInShell);
            }
            self.disp.check_mode(w)?;
            acc += self.displacement_coefficient(w, k).conj() * c;
        }
        Ok(acc)
    }

    fn condensate(&self, _f: &LatticeFunction, _g: &LatticeFunction) -> Complex64 {
        ZERO
    }
}

/// Infinite-volume system at `μ = 0` with radial test functions, possibly
/// with a condensate.
#[derive(Debug, Clone)]
pub struct ContinuumSpace {
    disp: Dispersion,
    condensate: CondensateParams,
    source: SourceCutoff,
    quad: Quadrature,
}

impl ContinuumSpace {
    pub fn new(disp: Dispersion, condensate: CondensateParams, source: SourceCutoff) -> Result<Self> {
        if disp.chemical_potential() != 0.0 {
            return Err(Error::Unsupported(
                "the infinite-volume state is implemented at vanishing chemical potential".into(),
            ));
        }
        Ok(Self { disp, condensate, source, quad: Quadrature::default() })
    }

    pub fn with_quadrature(mut self, quad: Quadrature) -> Self {
        self.quad = quad;
        self
    }

    pub fn with_source(&self, source: SourceCutoff) -> Self {
        Self { source, ..self.clone() }
    }

    pub fn source(&self) -> &SourceCutoff {
        &self.source
    }

    pub fn condensate_params(&self) -> &CondensateParams {
        &self.condensate
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quad
    }

    /// Rejects directions outside `dom m`.
    pub fn check_direction(&self, f: &RadialDirection) -> Result<()> {
        match ir_classify(f, &self.disp, SingularityConvention::DefinitionFaithful).class {
            IrClass::Admissible => Ok(()),
            IrClass::Rejected(reason) => Err(Error::Inadmissible(reason)),
        }
    }
}

impl OneParticleSpace for ContinuumSpace {
    type Vector = RadialDirection;

    fn beta(&self) -> f64 {
        self.condensate.beta
    }

    fn dispersion(&self) -> &Dispersion {
        &self.disp
    }

    fn zero(&self) -> RadialDirection {
        RadialDirection::zero()
    }

    fn is_zero(&self, f: &RadialDirection) -> bool {
        f.is_zero()
    }

    fn combine(&self, a: Complex64, f: &RadialDirection, b: Complex64, g: &RadialDirection) -> Result<RadialDirection> {
        Ok(f.combine(a, g, b))
    }

    fn evolve(&self, t: f64, f: &RadialDirection) -> RadialDirection {
        f.evolve(t)
    }

    fn inner(&self, f: &RadialDirection, g: &RadialDirection) -> Result<Complex64> {
        forms::radial_pairing(f, g, &self.disp, &self.quad, |_| Complex64::new(1.0, 0.0), 0.0)
    }

    fn spectral(
        &self,
        f: &RadialDirection,
        g: &RadialDirection,
        weight: &dyn Fn(f64) -> Complex64,
        rate: f64,
    ) -> Result<Complex64> {
        forms::radial_pairing(f, g, &self.disp, &self.quad, weight, rate)
    }

    fn displacement(&self, f: &RadialDirection) -> Result<Complex64> {
        forms::mean_functional_radial(f, &self.source, &self.disp, &self.quad)
    }

    fn condensate(&self, f: &RadialDirection, g: &RadialDirection) -> Complex64 {
        forms::q_zero(f, g, &self.condensate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Mode;
    use crate::radial::RadialTestFunction;
    use std::f64::consts::PI;

    #[test]
    fn displacement_modes_coincide_at_zero_mu() {
        let d = Dispersion::power(1.0).unwrap();
        let f = LatticeFunction::single(PI, Mode([1, 0, 0]), Complex64::new(1.0, 0.0));
        let base = LatticeSpace::new(PI, d, 1.0, SourceCutoff::new(0.5, 3.0)).unwrap();
        let a = base.displacement(&f).unwrap();
        let b = base.clone().with_displacement_mode(DisplacementMode::Uncorrected).displacement(&f).unwrap();
        assert!((a - b).norm() < 1e-15);
        assert!((a.re - 2f64.powf(-1.5)).abs() < 1e-15);
        let shifted = LatticeSpace::new(PI, d.with_chemical_potential(-1.0), 1.0, SourceCutoff::new(0.5, 3.0)).unwrap();
        // ω = 2, ω − μ = 3
        assert!((shifted.displacement(&f).unwrap().re - 1.0 / (3.0 * 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn evolution_is_an_isometry() {
        let d = Dispersion::power(1.5).unwrap();
        let space = LatticeSpace::new(2.0, d, 0.7, SourceCutoff::new(0.1, 10.0)).unwrap();
        let f = LatticeFunction::from_pairs(
            2.0,
            [(Mode([1, 0, 0]), Complex64::new(0.3, 0.1)), (Mode([1, 1, 0]), Complex64::new(-0.2, 0.5))],
        );
        let ft = space.evolve(1.3, &f);
        assert!((space.inner(&ft, &ft).unwrap() - space.inner(&f, &f).unwrap()).norm() < 1e-14);
        assert!((space.thermal(&ft, &ft).unwrap() - space.thermal(&f, &f).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn continuum_requires_zero_mu() {
        let d = Dispersion::new(1.0, -0.1).unwrap();
        assert!(ContinuumSpace::new(d, CondensateParams::new(1.0, 0.0), SourceCutoff::uncut()).is_err());
    }

    #[test]
    fn continuum_inner_product_of_gaussian() {
        let d = Dispersion::power(1.0).unwrap();
        let space = ContinuumSpace::new(d, CondensateParams::new(1.0, 0.0), SourceCutoff::uncut()).unwrap();
        let f: RadialDirection = RadialTestFunction::gaussian(Complex64::new(1.0, 0.0), 1.0).unwrap().into();
        // 4π ∫ r² e^{-r²} dr = π^{3/2}
        assert!((space.inner(&f, &f).unwrap().re - PI.powf(1.5)).abs() < 1e-12);
    }
}
