use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DispersionError {
    #[error("dispersion exponent must be at least 1, got {0}")]
    Exponent(f64),
    #[error("mode with ω = {omega} does not exceed the chemical potential μ = {mu}")]
    NotAboveChemicalPotential { omega: f64, mu: f64 },
}

/// Power-law dispersion `ω(k) = |k|^s` with chemical potential `μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    exponent: f64,
    chemical_potential: f64,
}

impl Dispersion {
    pub fn new(exponent: f64, chemical_potential: f64) -> Result<Self, DispersionError> {
        if !(exponent >= 1.0) || !exponent.is_finite() {
            return Err(DispersionError::Exponent(exponent));
        }
        Ok(Self { exponent, chemical_potential })
    }

    /// `ω = |k|^s` at `μ = 0`.
    pub fn power(exponent: f64) -> Result<Self, DispersionError> {
        Self::new(exponent, 0.0)
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn chemical_potential(&self) -> f64 {
        self.chemical_potential
    }

    pub fn with_chemical_potential(self, mu: f64) -> Self {
        Self { chemical_potential: mu, ..self }
    }

    pub fn omega(&self, k: [f64; 3]) -> f64 {
        self.omega_radial(norm3(k))
    }

    pub fn omega_radial(&self, r: f64) -> f64 {
        if r == 0.0 {
            0.0
        } else {
            r.powf(self.exponent)
        }
    }

    /// `ω − μ`, the energy entering Boltzmann factors and the time evolution.
    pub fn excitation(&self, omega: f64) -> f64 {
        omega - self.chemical_potential
    }

    /// Checks `ω − μ > 0` for a mode that will carry thermal weight.
    pub fn check_mode(&self, omega: f64) -> Result<(), DispersionError> {
        if omega - self.chemical_potential > 0.0 {
            Ok(())
        } else {
            Err(DispersionError::NotAboveChemicalPotential { omega, mu: self.chemical_potential })
        }
    }
}

pub fn norm3(k: [f64; 3]) -> f64 {
    (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_examples() {
        let d1 = Dispersion::power(1.0).unwrap();
        assert_eq!(d1.omega([1.0, 0.0, 0.0]), 1.0);
        let d2 = Dispersion::power(2.0).unwrap();
        assert!((d2.omega([0.0, 3.0, 4.0]) - 25.0).abs() < 1e-12);
        for s in [1.0, 1.5, 3.0] {
            assert_eq!(Dispersion::power(s).unwrap().omega([0.0; 3]), 0.0);
        }
    }

    #[test]
    fn rejects_subunit_exponent() {
        assert!(Dispersion::power(0.5).is_err());
        assert!(Dispersion::power(f64::NAN).is_err());
    }

    #[test]
    fn mode_positivity() {
        let d = Dispersion::new(1.0, -0.5).unwrap();
        assert!(d.check_mode(0.0).is_ok());
        let d = Dispersion::new(1.0, 0.0).unwrap();
        assert!(d.check_mode(0.0).is_err());
    }
}
