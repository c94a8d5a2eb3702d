//! Point source with infrared/ultraviolet cutoffs and condensate parameters.

use crate::dispersion::Dispersion;
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// Source whose Fourier coefficients are `amplitude` on the shell
/// `κ ≤ |k| ≤ Λ` and zero elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceCutoff {
    pub kappa: f64,
    /// `f64::INFINITY` removes the ultraviolet cutoff.
    pub lambda: f64,
    pub amplitude: Complex64,
}

impl SourceCutoff {
    pub fn new(kappa: f64, lambda: f64) -> Self {
        Self { kappa, lambda, amplitude: Complex64::new(1.0, 0.0) }
    }

    /// The uncut point source, `ρ̂ ≡ 1`.
    pub fn uncut() -> Self {
        Self::new(0.0, f64::INFINITY)
    }

    pub fn with_amplitude(mut self, amplitude: Complex64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn in_shell(&self, r: f64) -> bool {
        self.kappa <= r && r <= self.lambda
    }

    pub fn coefficient(&self, r: f64) -> Complex64 {
        if self.in_shell(r) {
            self.amplitude
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn is_silent(&self) -> bool {
        self.amplitude == Complex64::new(0.0, 0.0) || self.lambda < self.kappa
    }
}

/// Inverse temperature and condensate density of the quasi-free state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondensateParams {
    pub beta: f64,
    pub n0: f64,
}

impl CondensateParams {
    pub fn new(beta: f64, n0: f64) -> Self {
        assert!(beta > 0.0, "inverse temperature must be positive");
        assert!(n0 >= 0.0, "condensate density must be nonnegative");
        Self { beta, n0 }
    }

    /// Prefactor `2(2π)³ n₀` of the condensate form.
    pub fn weight(&self) -> f64 {
        2.0 * (2.0 * PI).powi(3) * self.n0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Infrared,
    Ultraviolet,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("shell integral of ω^-3 diverges at the {endpoint:?} endpoint ({at})")]
pub struct ShellDivergence {
    pub endpoint: Endpoint,
    pub at: f64,
}

/// `∫_{κ≤|k|≤Λ} ω(k)^{-3} d³k = 4π ∫_κ^Λ r^{2-3s} dr` in closed form.
pub fn ir_shell_integral(kappa: f64, lambda: f64, disp: &Dispersion) -> Result<f64, ShellDivergence> {
    if lambda <= kappa {
        return Ok(0.0);
    }
    let e = 3.0 - 3.0 * disp.exponent();
    if kappa == 0.0 && e <= 0.0 {
        return Err(ShellDivergence { endpoint: Endpoint::Infrared, at: kappa });
    }
    if lambda.is_infinite() && e >= 0.0 {
        return Err(ShellDivergence { endpoint: Endpoint::Ultraviolet, at: lambda });
    }
    let v = if e == 0.0 {
        (lambda / kappa).ln()
    } else {
        let upper = if lambda.is_infinite() { 0.0 } else { lambda.powf(e) };
        let lower = if kappa == 0.0 { 0.0 } else { kappa.powf(e) };
        (upper - lower) / e
    };
    Ok(4.0 * PI * v)
}
