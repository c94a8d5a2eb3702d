//! Mean and cocycle functionals, the thermal quadratic forms and the
//! infrared admissibility classifier.
//!
//! Lattice functions pair through finite sums over their supports; radial
//! directions through `4π ∫ r² (…) dr`.

use crate::dispersion::Dispersion;
use crate::lattice::{LatticeFunction, Mode};
use crate::quadrature::{Oscillation, Quadrature};
use crate::radial::RadialDirection;
use crate::source::{CondensateParams, SourceCutoff};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `ω` of a lattice mode on a box of side `box_side`.
pub fn mode_omega(mode: &Mode, box_side: f64, disp: &Dispersion) -> f64 {
    disp.omega_radial(mode.wave_number(box_side))
}

/// `Σ_k conj(f_k) g_k w(ω_k − μ)`; every mode in the common support must
/// satisfy `ω − μ > 0`.
pub fn lattice_pairing<W: Fn(f64) -> Complex64>(
    f: &LatticeFunction,
    g: &LatticeFunction,
    disp: &Dispersion,
    weight: W,
) -> Result<Complex64> {
    let l = f.box_side();
    for m in f.support() {
        if g.coefficient(m) != ZERO {
            disp.check_mode(mode_omega(m, l, disp))?;
        }
    }
    Ok(f.pairing(g, |m| weight(disp.excitation(mode_omega(m, l, disp))))?)
}

/// `4π ∫ r² conj(f̂) ĝ w(ω − μ) dr`. `rate` is the largest frequency of an
/// oscillating factor `e^{iτω}` inside `w`.
pub fn radial_pairing<W: Fn(f64) -> Complex64>(
    f: &RadialDirection,
    g: &RadialDirection,
    disp: &Dispersion,
    quad: &Quadrature,
    weight: W,
    rate: f64,
) -> Result<Complex64> {
    if f.is_zero() || g.is_zero() {
        return Ok(ZERO);
    }
    let hi = f.support_radius().min(g.support_radius());
    let osc = Oscillation { rate: rate + f.max_time() + g.max_time(), exponent: disp.exponent() };
    let out = quad.radial_checked(0.0, hi, osc, |r| {
        let e = disp.excitation(disp.omega_radial(r));
        4.0 * PI * r * r * f.eval(r, disp).conj() * g.eval(r, disp) * weight(e)
    })?;
    Ok(out.value)
}

fn check_source_modes(f: &LatticeFunction, source: &SourceCutoff, disp: &Dispersion) -> Result<()> {
    if source.is_silent() {
        return Ok(());
    }
    for m in f.support() {
        if source.in_shell(m.wave_number(f.box_side())) && mode_omega(m, f.box_side(), disp) == 0.0 {
            return Err(Error::ZeroModeInShell);
        }
    }
    Ok(())
}

/// `m_{κ,Λ}(f) = Σ_k conj(ρ̂_k) f_k ω_k^{-3/2}` over the source shell.
pub fn mean_functional_lattice(f: &LatticeFunction, source: &SourceCutoff, disp: &Dispersion) -> Result<Complex64> {
    check_source_modes(f, source, disp)?;
    let l = f.box_side();
    Ok(f
        .iter()
        .map(|(m, c)| {
            let rho = source.coefficient(m.wave_number(l));
            if rho == ZERO {
                return ZERO;
            }
            rho.conj() * c / mode_omega(m, l, disp).powf(1.5)
        })
        .sum())
}

/// `m_{κ,Λ}(f) = 4π ∫_κ^Λ r² conj(ρ̂) f̂ ω^{-3/2} dr`. Without an infrared
/// cutoff `f` must lie in `dom m`.
pub fn mean_functional_radial(
    f: &RadialDirection,
    source: &SourceCutoff,
    disp: &Dispersion,
    quad: &Quadrature,
) -> Result<Complex64> {
    if source.kappa == 0.0 {
        if let IrClass::Rejected(reason) = ir_classify(f, disp, SingularityConvention::DefinitionFaithful).class {
            return Err(Error::Inadmissible(reason));
        }
    }
    if source.is_silent() || f.is_zero() {
        return Ok(ZERO);
    }
    let hi = source.lambda.min(f.support_radius());
    if hi <= source.kappa {
        return Ok(ZERO);
    }
    let s = disp.exponent();
    let osc = Oscillation { rate: f.max_time(), exponent: s };
    let rho = source.amplitude.conj();
    let out = quad.radial_checked(source.kappa, hi, osc, |r| {
        4.0 * PI * rho * f.eval(r, disp) * r.powf(2.0 - 1.5 * s)
    })?;
    Ok(out.value)
}

/// `M_t(f) = Re m((e^{itω} − 1) f)` on the lattice.
pub fn cocycle_lattice(t: f64, f: &LatticeFunction, source: &SourceCutoff, disp: &Dispersion) -> Result<f64> {
    let l = f.box_side();
    let shifted = f.multiply(|m| Complex64::from_polar(1.0, t * mode_omega(m, l, disp)) - 1.0);
    Ok(mean_functional_lattice(&shifted, source, disp)?.re)
}

/// `M_t(f)` for a radial direction, integrating the evolved formal sum.
pub fn cocycle_radial(
    t: f64,
    f: &RadialDirection,
    source: &SourceCutoff,
    disp: &Dispersion,
    quad: &Quadrature,
) -> Result<f64> {
    let one = Complex64::new(1.0, 0.0);
    let shifted = f.evolve(t).combine(one, f, -one);
    Ok(mean_functional_radial(&shifted, source, disp, quad)?.re)
}

/// `K_{β,μ} = coth(β(ω − μ)/2)` as a function of the excitation energy.
pub fn coth_weight(beta: f64, excitation: f64) -> f64 {
    1.0 / (0.5 * beta * excitation).tanh()
}

/// Polarized form `q_{≠0,μ}(f, g) = ⟨f, K_{β,μ} g⟩` on the lattice.
pub fn q_nonzero_lattice(f: &LatticeFunction, g: &LatticeFunction, beta: f64, disp: &Dispersion) -> Result<Complex64> {
    lattice_pairing(f, g, disp, |e| Complex64::new(coth_weight(beta, e), 0.0))
}

/// Polarized form `q_{≠0,μ}(f, g)` for radial directions. Divergence of the
/// defining integral is a form-domain error.
pub fn q_nonzero_radial(
    f: &RadialDirection,
    g: &RadialDirection,
    beta: f64,
    disp: &Dispersion,
    quad: &Quadrature,
) -> Result<Complex64> {
    radial_pairing(f, g, disp, quad, |e| Complex64::new(coth_weight(beta, e), 0.0), 0.0)
}

/// Polarized condensate form `q_0(f, g) = 2(2π)³ n₀ conj(f̂(0)) ĝ(0)`.
pub fn q_zero(f: &RadialDirection, g: &RadialDirection, cond: &CondensateParams) -> Complex64 {
    if cond.n0 == 0.0 {
        return ZERO;
    }
    cond.weight() * f.value_at_zero().conj() * g.value_at_zero()
}

/// `q_BEC(f) = q_0(f) + q_{≠0}(f)`.
pub fn q_bec(f: &RadialDirection, cond: &CondensateParams, disp: &Dispersion, quad: &Quadrature) -> Result<f64> {
    Ok(q_zero(f, f, cond).re + q_nonzero_radial(f, f, cond.beta, disp, quad)?.re)
}

/// Which power of `|k|` the classifier treats as the singularity of `dom m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SingularityConvention {
    /// Integrand `|k|^{-3s/2} f̂` of the mean functional itself.
    #[default]
    DefinitionFaithful,
    /// The no-go argument's sufficient condition `f̂ = O(|k|^{s-2})`.
    TheoremLiteral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IrRejection {
    /// `r^{exponent}` is not integrable at the origin.
    Origin { exponent: f64 },
    /// `f̂` does not vanish to the `required` order at the origin.
    OriginOrder { order: f64, required: f64 },
    /// `r^{exponent}` is not integrable at infinity.
    Ultraviolet { exponent: f64 },
}

impl std::fmt::Display for IrRejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IrRejection::Origin { exponent } => write!(f, "radial integrand ~ r^{exponent} at the origin"),
            IrRejection::OriginOrder { order, required } => {
                write!(f, "f̂ vanishes to order {order} at the origin, {required} required")
            }
            IrRejection::Ultraviolet { exponent } => write!(f, "radial integrand ~ r^{exponent} at infinity"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IrClass {
    Admissible,
    Rejected(IrRejection),
}

impl IrClass {
    pub fn is_admissible(&self) -> bool {
        matches!(self, IrClass::Admissible)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrReport {
    pub class: IrClass,
    /// Membership in the physical directions `dom m`.
    pub x_phys: bool,
    /// `f̂(0) ≠ 0`.
    pub x0: bool,
}

/// Decides `f ∈ dom m` from the behaviour of `f̂` at the origin and at infinity.
pub fn ir_classify(f: &RadialDirection, disp: &Dispersion, convention: SingularityConvention) -> IrReport {
    let s = disp.exponent();
    let x0 = !f.is_zero() && !f.vanishes_at_zero();
    let order = if f.is_zero() {
        f64::INFINITY
    } else if x0 {
        0.0
    } else {
        f.origin_order(disp)
    };
    let p = 1.5 * s;
    let uv = 2.0 - p - f.decay_order();
    let class = if !f.is_zero() && !(uv < -1.0) {
        IrClass::Rejected(IrRejection::Ultraviolet { exponent: uv })
    } else {
        match convention {
            SingularityConvention::DefinitionFaithful => {
                let exponent = 2.0 - p + order;
                if exponent > -1.0 {
                    IrClass::Admissible
                } else {
                    IrClass::Rejected(IrRejection::Origin { exponent })
                }
            }
            SingularityConvention::TheoremLiteral => {
                let required = s - 2.0;
                if order >= required {
                    IrClass::Admissible
                } else {
                    IrClass::Rejected(IrRejection::OriginOrder { order, required })
                }
            }
        }
    };
    IrReport { class, x_phys: class.is_admissible(), x0 }
}
