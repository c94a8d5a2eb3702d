use thiserror::Error;
use vanhove_core::fock::FockError;

/// Failure of a run, before any report is written.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("dimension cap: {0}")]
    DimensionCap(String),
    #[error("numerical non-convergence: {0}")]
    Numerical(String),
    #[error("output error: {0}")]
    Output(String),
}

impl HarnessError {
    /// 2 config, 3 non-convergence, 4 dimension cap. Output failures count as
    /// misconfiguration.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Output(_) => 2,
            HarnessError::Numerical(_) => 3,
            HarnessError::DimensionCap(_) => 4,
        }
    }
}

impl From<FockError> for HarnessError {
    fn from(e: FockError) -> Self {
        match e {
            FockError::DimensionCap { .. } => HarnessError::DimensionCap(e.to_string()),
            FockError::ModeMismatch(_) | FockError::NoModes | FockError::NonPositiveEnergy(_) | FockError::ZeroModeInShell => {
                HarnessError::Config(e.to_string())
            }
            _ => HarnessError::Numerical(e.to_string()),
        }
    }
}

impl From<vanhove_core::Error> for HarnessError {
    fn from(e: vanhove_core::Error) -> Self {
        use vanhove_core::Error as E;
        match e {
            E::Fock(f) => f.into(),
            E::FormDomain(_) => HarnessError::Numerical(e.to_string()),
            _ => HarnessError::Config(e.to_string()),
        }
    }
}

pub type HarnessResult<T> = Result<T, HarnessError>;

macro_rules! via_core {
    ($($t:ty),*) => {$(
        impl From<$t> for HarnessError {
            fn from(e: $t) -> Self {
                vanhove_core::Error::from(e).into()
            }
        }
    )*};
}

via_core!(
    vanhove_core::dispersion::DispersionError,
    vanhove_core::lattice::LatticeError,
    vanhove_core::radial::ProfileError,
    vanhove_core::source::ShellDivergence
);
