use crate::config::RunConfig;
use crate::error::HarnessResult;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use vanhove_core::fock::{FockOperator, FockResult, LocalSum, OracleReport, ThermalDensity, TruncationSpec};
use vanhove_core::quadrature::Quadrature;
use vanhove_core::{Complex64, Dispersion, LatticeFunction, Mode, RadialDirection, RadialTestFunction};

/// Independent stream per suite so that suites do not shift each other's draws.
pub fn rng(cfg: &RunConfig, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed());
    r.set_stream(stream);
    r
}

pub fn quadrature(cfg: &RunConfig) -> Quadrature {
    Quadrature::new(cfg.quadrature.spec())
}

/// Box, modes and source shell of the 1-, 2- and 3-mode oracle systems.
/// All modes lie in the shell; frequencies grow with the mode count so the
/// thermal weights stay resolved at small occupation caps.
pub struct Geometry {
    pub box_side: f64,
    pub modes: Vec<Mode>,
    pub kappa: f64,
    pub lambda: f64,
}

pub fn geometry(mode_count: usize) -> Geometry {
    let all = [Mode([1, 0, 0]), Mode([1, 1, 0]), Mode([1, 1, 1])];
    match mode_count {
        1 => Geometry { box_side: 2.0 * PI, modes: all[..1].to_vec(), kappa: 0.5, lambda: 1.5 },
        2 => Geometry { box_side: PI, modes: all[..2].to_vec(), kappa: 1.0, lambda: 3.0 },
        _ => Geometry { box_side: PI / 3.0, modes: all.to_vec(), kappa: 5.0, lambda: 11.0 },
    }
}

pub fn truncation(
    cfg: &RunConfig,
    box_side: f64,
    modes: &[Mode],
    disp: &Dispersion,
    n_max: usize,
) -> HarnessResult<TruncationSpec> {
    let spec = TruncationSpec::new(box_side, modes, disp, n_max)?;
    Ok(match cfg.dimension_cap {
        Some(cap) => spec.with_cap(cap)?,
        None => spec,
    })
}

pub fn uniform_complex(rng: &mut ChaCha8Rng, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

pub fn random_lattice(rng: &mut ChaCha8Rng, box_side: f64, modes: &[Mode], scale: f64) -> LatticeFunction {
    LatticeFunction::from_pairs(box_side, modes.iter().map(|m| (*m, uniform_complex(rng, scale))))
}

pub fn random_sign(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

/// `z` with `|Re z| ∈ [lo, hi]` of random sign and `|Im z| ≤ 1`.
pub fn random_parameter(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    Complex64::new(random_sign(rng) * rng.gen_range(lo..hi), rng.gen_range(-1.0..1.0))
}

/// Random smooth radial direction admissible for the given exponent.
/// Profiles with `f̂(0) ≠ 0` are only drawn when `allow_origin` is set.
pub fn random_radial(rng: &mut ChaCha8Rng, allow_origin: bool) -> RadialDirection {
    let amplitude = uniform_complex(rng, 1.0);
    let pick = if allow_origin { rng.gen_range(0..3) } else { rng.gen_range(1..3) };
    let f = match pick {
        0 => RadialTestFunction::gaussian(amplitude, rng.gen_range(0.4..1.5)),
        1 => RadialTestFunction::polynomial_gaussian(amplitude, rng.gen_range(1.0..3.0), rng.gen_range(0.4..1.5)),
        _ => {
            let inner = rng.gen_range(0.1..1.0);
            RadialTestFunction::shell_bump(amplitude, inner, inner + rng.gen_range(0.5..2.0))
        }
    };
    f.expect("parameters are in range").into()
}

/// Per-truncation thermal densities sharing one Hamiltonian builder.
pub struct Oracle {
    fine: ThermalDensity,
    coarse: ThermalDensity,
}

impl Oracle {
    pub fn new(spec: &TruncationSpec, beta: f64, hamiltonian: impl Fn(&TruncationSpec) -> FockResult<LocalSum>) -> FockResult<Self> {
        let fine = ThermalDensity::checked(&hamiltonian(spec)?, beta)?;
        let coarse = ThermalDensity::new(&hamiltonian(&spec.halved())?, beta)?;
        Ok(Self { fine, coarse })
    }

    pub fn report(&self, fine: &FockOperator, coarse: &FockOperator) -> OracleReport {
        let value = self.fine.expectation(fine);
        OracleReport { value, truncation_estimate: (value - self.coarse.expectation(coarse)).norm() }
    }
}

pub fn padded(i: usize) -> String {
    format!("{i:03}")
}
