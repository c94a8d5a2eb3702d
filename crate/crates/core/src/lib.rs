//! Thermal equilibrium of the van Hove model on Weyl and resolvent algebras.
//!
//! The crate has two independent halves. The analytic half ([`forms`],
//! [`thermal`], [`weyl`], [`resolvent`]) evaluates the closed-form
//! grand-canonical functionals, the dynamics and the infrared classifiers.
//! The oracle half ([`fock`]) builds dense matrices on a truncated bosonic
//! Fock space and computes the same numbers as brute-force traces.

pub mod dispersion;
pub mod fock;
pub mod forms;
pub mod lattice;
pub mod quadrature;
pub mod radial;
pub mod resolvent;
pub mod source;
pub mod space;
pub mod thermal;
pub mod weyl;

pub use dispersion::Dispersion;
pub use lattice::{LatticeFunction, LatticeSpec, Mode};
pub use num_complex::Complex64;
pub use radial::{RadialDirection, RadialProfile, RadialTestFunction};
pub use source::{CondensateParams, SourceCutoff};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Dispersion(#[from] dispersion::DispersionError),
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
    #[error(transparent)]
    Profile(#[from] radial::ProfileError),
    #[error(transparent)]
    Shell(#[from] source::ShellDivergence),
    #[error("test function is outside the form domain: {0}")]
    FormDomain(quadrature::QuadratureError),
    #[error("direction is infrared inadmissible: {0}")]
    Inadmissible(forms::IrRejection),
    #[error("source shell contains the zero mode, where ω = 0")]
    ZeroModeInShell,
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Fock(#[from] fock::FockError),
    #[error("resolvent parameter must have nonzero real part, got {0}")]
    ResolventParameter(Complex64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<quadrature::QuadratureError> for Error {
    fn from(e: quadrature::QuadratureError) -> Self {
        Error::FormDomain(e)
    }
}
