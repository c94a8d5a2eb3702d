//! Truncated multi-mode bosonic Fock space.
//!
//! Each mode keeps occupations `0..=n_max`; basis states are ordered with the
//! first mode most significant, so an operator acting on mode `j` alone is
//! `1 ⊗ … ⊗ T ⊗ … ⊗ 1`. Every one-particle quantity here (fields, Weyl
//! operators, the Hamiltonians) is a sum of such commuting local terms, and
//! the exponential of a sum of commuting local terms is the Kronecker product
//! of the local exponentials. That identity holds exactly in the truncated
//! space, and the unit tests check it against a full dense diagonalization.

use crate::dispersion::Dispersion;
use crate::forms::mode_omega;
use crate::lattice::{LatticeFunction, Mode};
use crate::space::LatticeSpace;
use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use num_complex::Complex64;
use std::fmt::Write as _;
use thiserror::Error;

pub const DEFAULT_DIMENSION_CAP: usize = 20_000;
/// Environment variable overriding [`DEFAULT_DIMENSION_CAP`].
pub const DIMENSION_CAP_VAR: &str = "VANHOVE_DIM_CAP";
/// Tolerance for the hermitian and unitary certificates.
pub const FLAG_TOLERANCE: f64 = 1e-10;
/// Largest admissible ratio of the smallest to the largest Boltzmann weight of a mode.
pub const BOLTZMANN_RATIO: f64 = 1e-12;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("Fock dimension {dimension} exceeds the cap {cap}")]
    DimensionCap { dimension: usize, cap: usize },
    #[error("mode {0} is not part of the truncation")]
    ModeMismatch(Mode),
    #[error("truncation needs at least one mode")]
    NoModes,
    #[error("operator is not hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("operator is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("eigendecomposition failed")]
    Eigen,
    #[error("resolvent solve is near singular: |Re z| = {0:e}")]
    NearSingular(f64),
    #[error("Boltzmann weights not resolved: smallest/largest = {0:e}")]
    Boltzmann(f64),
    #[error("truncation estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    Unconverged { estimate: f64, tolerance: f64 },
    #[error("mode with ω − μ = {0} cannot carry a thermal weight")]
    NonPositiveEnergy(f64),
    #[error("source shell contains the zero mode")]
    ZeroModeInShell,
}

pub type FockResult<T> = std::result::Result<T, FockError>;

/// Runs dense kernels on the calling thread only, so that repeated runs
/// reproduce every floating-point result bit for bit.
pub fn sequential_kernels() {
    faer::set_global_parallelism(faer::Par::Seq);
}

fn dimension_cap() -> usize {
    std::env::var(DIMENSION_CAP_VAR).ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_DIMENSION_CAP)
}

/// Ordered modes with their frequencies and the per-mode occupation cap.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationSpec {
    box_side: f64,
    modes: Vec<(Mode, f64)>,
    n_max: usize,
    cap: usize,
}

impl TruncationSpec {
    pub fn new(box_side: f64, modes: &[Mode], disp: &Dispersion, n_max: usize) -> FockResult<Self> {
        let modes: Vec<(Mode, f64)> = modes.iter().map(|m| (*m, mode_omega(m, box_side, disp))).collect();
        Self::from_parts(box_side, modes, n_max, dimension_cap())
    }

    fn from_parts(box_side: f64, modes: Vec<(Mode, f64)>, n_max: usize, cap: usize) -> FockResult<Self> {
        if modes.is_empty() {
            return Err(FockError::NoModes);
        }
        let dimension = (n_max + 1).checked_pow(modes.len() as u32).unwrap_or(usize::MAX);
        if dimension > cap {
            return Err(FockError::DimensionCap { dimension, cap });
        }
        Ok(Self { box_side, modes, n_max, cap })
    }

    pub fn with_cap(self, cap: usize) -> FockResult<Self> {
        Self::from_parts(self.box_side, self.modes, self.n_max, cap)
    }

    /// The same modes with the occupation cap halved.
    pub fn halved(&self) -> Self {
        Self { n_max: self.n_max / 2, ..self.clone() }
    }

    pub fn with_n_max(&self, n_max: usize) -> FockResult<Self> {
        Self::from_parts(self.box_side, self.modes.clone(), n_max, self.cap)
    }

    pub fn box_side(&self) -> f64 {
        self.box_side
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn local_dimension(&self) -> usize {
        self.n_max + 1
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn dimension(&self) -> usize {
        self.local_dimension().pow(self.modes.len() as u32)
    }

    pub fn modes(&self) -> impl Iterator<Item = &Mode> {
        self.modes.iter().map(|(m, _)| m)
    }

    pub fn omega(&self, j: usize) -> f64 {
        self.modes[j].1
    }

    pub fn mode_index(&self, mode: &Mode) -> Option<usize> {
        self.modes.iter().position(|(m, _)| m == mode)
    }

    fn stride(&self, j: usize) -> usize {
        self.local_dimension().pow((self.modes.len() - 1 - j) as u32)
    }

    pub fn occupations(&self, index: usize) -> Vec<usize> {
        let d = self.local_dimension();
        (0..self.modes.len()).map(|j| (index / self.stride(j)) % d).collect()
    }

    /// Basis indices whose occupations are all at most `n_low`.
    pub fn low_block(&self, n_low: usize) -> Vec<usize> {
        (0..self.dimension()).filter(|&i| self.occupations(i).iter().all(|&n| n <= n_low)).collect()
    }

    /// Coefficients of `f` per truncated mode; modes outside the truncation are an error.
    pub fn coefficients(&self, f: &LatticeFunction) -> FockResult<Vec<Complex64>> {
        let mut out = vec![ZERO; self.modes.len()];
        for (m, c) in f.iter() {
            let j = self.mode_index(m).ok_or(FockError::ModeMismatch(*m))?;
            out[j] = *c;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    General,
    Hermitian,
    Unitary,
}

/// Dense operator on the truncated space with a verified structural flag.
#[derive(Debug, Clone)]
pub struct FockOperator {
    matrix: Mat<Complex64>,
    kind: OperatorKind,
}

fn max_abs(m: &Mat<Complex64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            best = best.max(m[(i, j)].norm());
        }
    }
    best
}

impl FockOperator {
    pub fn general(matrix: Mat<Complex64>) -> Self {
        Self { matrix, kind: OperatorKind::General }
    }

    pub fn hermitian(matrix: Mat<Complex64>) -> FockResult<Self> {
        let n = matrix.nrows();
        let mut dev = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                dev = dev.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        if dev > FLAG_TOLERANCE * max_abs(&matrix).max(1.0) {
            return Err(FockError::NotHermitian(dev));
        }
        Ok(Self { matrix, kind: OperatorKind::Hermitian })
    }

    pub fn unitary(matrix: Mat<Complex64>) -> FockResult<Self> {
        let n = matrix.nrows();
        let gram = matrix.adjoint() * &matrix;
        let dev = max_abs(&(gram - Mat::<Complex64>::identity(n, n)));
        if dev > FLAG_TOLERANCE {
            return Err(FockError::NotUnitary(dev));
        }
        Ok(Self { matrix, kind: OperatorKind::Unitary })
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: Mat::identity(dim, dim), kind: OperatorKind::Unitary }
    }

    pub fn matrix(&self) -> &Mat<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Mat<Complex64> {
        self.matrix
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn is_hermitian(&self) -> bool {
        self.kind == OperatorKind::Hermitian
    }

    pub fn is_unitary(&self) -> bool {
        self.kind == OperatorKind::Unitary
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint().to_owned(), kind: self.kind }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::general(&self.matrix * &other.matrix)
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        let n = self.dimension();
        Self::general(Mat::from_fn(n, n, |i, j| a * self.matrix[(i, j)] + b * other.matrix[(i, j)]))
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let n = self.dimension();
        Self::general(Mat::from_fn(n, n, |i, j| a * self.matrix[(i, j)]))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dimension()).map(|i| self.matrix[(i, i)]).sum()
    }

    /// Largest entry modulus on the sub-block `indices × indices`.
    pub fn block_max(&self, indices: &[usize]) -> f64 {
        let mut best = 0.0f64;
        for &j in indices {
            for &i in indices {
                best = best.max(self.matrix[(i, j)].norm());
            }
        }
        best
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }

    pub fn spectral_norm(&self) -> FockResult<f64> {
        let s = self.matrix.singular_values().map_err(|_| FockError::Eigen)?;
        Ok(s.first().copied().unwrap_or(0.0))
    }

    /// Ascending eigenvalues of a hermitian operator.
    pub fn eigenvalues(&self) -> FockResult<Vec<f64>> {
        if !self.is_hermitian() {
            return Err(FockError::NotHermitian(f64::NAN));
        }
        self.matrix.self_adjoint_eigenvalues(Side::Lower).map_err(|_| FockError::Eigen)
    }

    /// `exp(c·A)` for hermitian `A` through its eigendecomposition.
    pub fn exp_hermitian(&self, c: Complex64) -> FockResult<Mat<Complex64>> {
        if !self.is_hermitian() {
            return Err(FockError::NotHermitian(f64::NAN));
        }
        exp_hermitian(&self.matrix, c)
    }

    /// Whitespace-separated `re im` pairs, one matrix row per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let n = self.dimension();
        for i in 0..n {
            for j in 0..n {
                let z = self.matrix[(i, j)];
                if j > 0 {
                    out.push_str("  ");
                }
                let _ = write!(out, "{:.17e} {:.17e}", z.re, z.im);
            }
            out.push('\n');
        }
        out
    }
}

fn exp_hermitian(matrix: &Mat<Complex64>, c: Complex64) -> FockResult<Mat<Complex64>> {
    let eig = matrix.self_adjoint_eigen(Side::Lower).map_err(|_| FockError::Eigen)?;
    let u = eig.U();
    let s = eig.S().column_vector();
    let n = matrix.nrows();
    let scaled = Mat::from_fn(n, n, |i, j| u[(i, j)] * (c * s[j].re).exp());
    Ok(&scaled * u.adjoint())
}

fn kron(a: &Mat<Complex64>, b: &Mat<Complex64>) -> Mat<Complex64> {
    let (ra, ca, rb, cb) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    Mat::from_fn(ra * rb, ca * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

/// Single-mode annihilation operator on occupations `0..=n_max`.
pub fn local_annihilation(n_max: usize) -> Mat<Complex64> {
    let d = n_max + 1;
    Mat::from_fn(d, d, |i, j| if j == i + 1 { Complex64::new((j as f64).sqrt(), 0.0) } else { ZERO })
}

/// Single-mode `(c a† + conj(c) a)/√2`.
pub fn local_field(n_max: usize, c: Complex64) -> Mat<Complex64> {
    let a = local_annihilation(n_max);
    let d = n_max + 1;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Mat::from_fn(d, d, |i, j| (c * a[(j, i)].conj() + c.conj() * a[(i, j)]) * s)
}

/// Sum `Σ_j 1 ⊗ … ⊗ T_j ⊗ … ⊗ 1` of commuting hermitian single-mode terms.
#[derive(Debug, Clone)]
pub struct LocalSum {
    spec: TruncationSpec,
    terms: Vec<Mat<Complex64>>,
}

impl LocalSum {
    pub fn new(spec: &TruncationSpec, terms: Vec<Mat<Complex64>>) -> FockResult<Self> {
        assert_eq!(terms.len(), spec.mode_count(), "one local term per mode");
        for t in &terms {
            FockOperator::hermitian(t.clone())?;
        }
        Ok(Self { spec: spec.clone(), terms })
    }

    pub fn spec(&self) -> &TruncationSpec {
        &self.spec
    }

    pub fn terms(&self) -> &[Mat<Complex64>] {
        &self.terms
    }

    /// The full matrix `Σ_j 1 ⊗ … ⊗ T_j ⊗ … ⊗ 1`.
    pub fn dense(&self) -> FockOperator {
        let n = self.spec.dimension();
        let d = self.spec.local_dimension();
        let mut out = Mat::<Complex64>::zeros(n, n);
        for (j, t) in self.terms.iter().enumerate() {
            let stride = self.spec.stride(j);
            for col in 0..n {
                let nj = (col / stride) % d;
                let base = col - nj * stride;
                for m in 0..d {
                    let v = t[(m, nj)];
                    if v != ZERO {
                        out[(base + m * stride, col)] += v;
                    }
                }
            }
        }
        FockOperator { matrix: out, kind: OperatorKind::Hermitian }
    }

    /// `exp(c·Σ_j T_j) = ⊗_j exp(c·T_j)`.
    pub fn exp(&self, c: Complex64) -> FockResult<Mat<Complex64>> {
        let mut acc: Option<Mat<Complex64>> = None;
        for t in &self.terms {
            let local = exp_hermitian(t, c)?;
            acc = Some(match acc {
                None => local,
                Some(prev) => kron(&prev, &local),
            });
        }
        acc.ok_or(FockError::NoModes)
    }

    /// Ascending spectrum of each local term.
    pub fn local_spectra(&self) -> FockResult<Vec<Vec<f64>>> {
        self.terms
            .iter()
            .map(|t| t.self_adjoint_eigenvalues(Side::Lower).map_err(|_| FockError::Eigen))
            .collect()
    }

    /// Smallest eigenvalue, as the sum of the local minima.
    pub fn ground_energy(&self) -> FockResult<f64> {
        Ok(self.local_spectra()?.iter().map(|s| s[0]).sum())
    }
}

/// Pair `(a_j, a_j†)` acting on mode `j` of the truncation.
pub fn build_ladder(spec: &TruncationSpec, mode_index: usize) -> FockResult<(FockOperator, FockOperator)> {
    if mode_index >= spec.mode_count() {
        return Err(FockError::NoModes);
    }
    let n = spec.dimension();
    let d = spec.local_dimension();
    let stride = spec.stride(mode_index);
    let mut a = Mat::<Complex64>::zeros(n, n);
    for col in 0..n {
        let nj = (col / stride) % d;
        if nj > 0 {
            a[(col - stride, col)] = Complex64::new((nj as f64).sqrt(), 0.0);
        }
    }
    let ad = a.adjoint().to_owned();
    Ok((FockOperator::general(a), FockOperator::general(ad)))
}

/// Number operator of mode `j`.
pub fn number_operator(spec: &TruncationSpec, mode_index: usize) -> FockResult<FockOperator> {
    let d = spec.local_dimension();
    let mut terms = vec![Mat::<Complex64>::zeros(d, d); spec.mode_count()];
    terms[mode_index] = Mat::from_fn(d, d, |i, j| if i == j { Complex64::new(i as f64, 0.0) } else { ZERO });
    Ok(LocalSum::new(spec, terms)?.dense())
}

/// `a†(f) = Σ f_k a†_k`.
pub fn creation(f: &LatticeFunction, spec: &TruncationSpec) -> FockResult<FockOperator> {
    let c = spec.coefficients(f)?;
    let n = spec.dimension();
    let mut out = Mat::<Complex64>::zeros(n, n);
    for (j, cj) in c.iter().enumerate() {
        if *cj == ZERO {
            continue;
        }
        let (_, ad) = build_ladder(spec, j)?;
        out += Mat::from_fn(n, n, |r, s| *cj * ad.matrix()[(r, s)]);
    }
    Ok(FockOperator::general(out))
}

/// `a(f) = Σ conj(f_k) a_k`.
pub fn annihilation(f: &LatticeFunction, spec: &TruncationSpec) -> FockResult<FockOperator> {
    Ok(creation(f, spec)?.adjoint())
}

/// `φ(f) = (a†(f) + a(f))/√2` as a sum of local terms.
pub fn segal_local(f: &LatticeFunction, spec: &TruncationSpec) -> FockResult<LocalSum> {
    let c = spec.coefficients(f)?;
    LocalSum::new(spec, c.iter().map(|cj| local_field(spec.n_max(), *cj)).collect())
}

pub fn segal_field(f: &LatticeFunction, spec: &TruncationSpec) -> FockResult<FockOperator> {
    Ok(segal_local(f, spec)?.dense())
}

/// `W(f) = e^{iφ(f)}`, assembled from the local exponentials.
pub fn weyl_operator(f: &LatticeFunction, spec: &TruncationSpec) -> FockResult<FockOperator> {
    FockOperator::unitary(segal_local(f, spec)?.exp(Complex64::i())?)
}

/// `W(f)` from a single eigendecomposition of the dense field; slower, used as a cross-check.
pub fn weyl_operator_dense(f: &LatticeFunction, spec: &TruncationSpec) -> FockResult<FockOperator> {
    FockOperator::unitary(segal_field(f, spec)?.exp_hermitian(Complex64::i())?)
}

/// `H_free(μ) = Σ (ω_k − μ) a†_k a_k` and `H_vH = H_free + φ(h)`, `h_k = ρ̂_k/√ω_k`.
pub fn hamiltonians(spec: &TruncationSpec, space: &LatticeSpace) -> FockResult<(LocalSum, LocalSum)> {
    let disp = *crate::space::OneParticleSpace::dispersion(space);
    let d = spec.local_dimension();
    let mut free = Vec::with_capacity(spec.mode_count());
    let mut full = Vec::with_capacity(spec.mode_count());
    for (j, mode) in spec.modes().enumerate() {
        let omega = spec.omega(j);
        let e = disp.excitation(omega);
        if !(e > 0.0) {
            return Err(FockError::NonPositiveEnergy(e));
        }
        let k = mode.wave_number(spec.box_side());
        let h = if space.source().in_shell(k) && !space.source().is_silent() {
            if omega == 0.0 {
                return Err(FockError::ZeroModeInShell);
            }
            space.coupling(omega, k)
        } else {
            ZERO
        };
        let number = Mat::from_fn(d, d, |r, c| if r == c { Complex64::new(e * r as f64, 0.0) } else { ZERO });
        let field = local_field(spec.n_max(), h);
        full.push(Mat::from_fn(d, d, |r, c| number[(r, c)] + field[(r, c)]));
        free.push(number);
    }
    Ok((LocalSum::new(spec, free)?, LocalSum::new(spec, full)?))
}

/// Normalized `e^{-βH}/Tr e^{-βH}` of a local-sum Hamiltonian.
#[derive(Debug, Clone)]
pub struct ThermalDensity {
    matrix: Mat<Complex64>,
    /// Largest per-mode ratio of smallest to largest Boltzmann weight.
    pub weight_ratio: f64,
    /// `ln Tr e^{-βH}`.
    pub log_partition: f64,
}

impl ThermalDensity {
    pub fn new(h: &LocalSum, beta: f64) -> FockResult<Self> {
        let spectra = h.local_spectra()?;
        let mut weight_ratio = 0.0f64;
        let mut log_partition = 0.0;
        let mut acc: Option<Mat<Complex64>> = None;
        for (t, spec) in h.terms().iter().zip(&spectra) {
            let (lo, hi) = (spec[0], spec[spec.len() - 1]);
            weight_ratio = weight_ratio.max((-beta * (hi - lo)).exp());
            let z: f64 = spec.iter().map(|e| (-beta * (e - lo)).exp()).sum();
            log_partition += z.ln() - beta * lo;
            // shifted by the ground energy so the largest weight is 1
            let local = exp_hermitian(t, Complex64::new(-beta, 0.0))?;
            let norm = Complex64::new(z * (-beta * lo).exp(), 0.0);
            let n = t.nrows();
            let local = Mat::from_fn(n, n, |i, j| local[(i, j)] / norm);
            acc = Some(match acc {
                None => local,
                Some(prev) => kron(&prev, &local),
            });
        }
        Ok(Self { matrix: acc.ok_or(FockError::NoModes)?, weight_ratio, log_partition })
    }

    /// Like [`ThermalDensity::new`] but rejects truncations whose Boltzmann
    /// weights are not resolved.
    pub fn checked(h: &LocalSum, beta: f64) -> FockResult<Self> {
        let rho = Self::new(h, beta)?;
        if rho.weight_ratio > BOLTZMANN_RATIO {
            return Err(FockError::Boltzmann(rho.weight_ratio));
        }
        Ok(rho)
    }

    pub fn matrix(&self) -> &Mat<Complex64> {
        &self.matrix
    }

    /// `Tr(ρA) = Σ_ij ρ_ij A_ji`.
    pub fn expectation(&self, a: &FockOperator) -> Complex64 {
        let n = self.matrix.nrows();
        let m = a.matrix();
        let mut acc = ZERO;
        for i in 0..n {
            for j in 0..n {
                acc += self.matrix[(i, j)] * m[(j, i)];
            }
        }
        acc
    }
}

/// Oracle value together with its truncation error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub value: Complex64,
    /// `|value(n_max) − value(n_max/2)|`
    pub truncation_estimate: f64,
}

impl OracleReport {
    /// `max(floor, 3 × truncation_estimate)`.
    pub fn tolerance(&self, floor: f64) -> f64 {
        floor.max(3.0 * self.truncation_estimate)
    }

    pub fn require(self, tolerance: f64) -> FockResult<Self> {
        if self.truncation_estimate > tolerance {
            return Err(FockError::Unconverged { estimate: self.truncation_estimate, tolerance });
        }
        Ok(self)
    }
}

/// `Tr(e^{-βH} A)/Tr(e^{-βH})` at `spec` and at half the occupation cap.
/// `build` returns the observable and the Hamiltonian for a given truncation.
pub fn gc_expectation<F>(spec: &TruncationSpec, beta: f64, build: F) -> FockResult<OracleReport>
where
    F: Fn(&TruncationSpec) -> FockResult<(FockOperator, LocalSum)>,
{
    let (a, h) = build(spec)?;
    let value = ThermalDensity::checked(&h, beta)?.expectation(&a);
    let coarse = spec.halved();
    let (a2, h2) = build(&coarse)?;
    let coarse_value = ThermalDensity::new(&h2, beta)?.expectation(&a2);
    Ok(OracleReport { value, truncation_estimate: (value - coarse_value).norm() })
}

/// `R(z, f) = (iz − φ(f))^{-1}` by an LU solve.
pub fn resolvent_in_rep(z: Complex64, f: &LatticeFunction, spec: &TruncationSpec) -> FockResult<FockOperator> {
    if z.re.abs() < 1e-8 {
        return Err(FockError::NearSingular(z.re.abs()));
    }
    let phi = segal_field(f, spec)?;
    let n = spec.dimension();
    let iz = Complex64::i() * z;
    let m = Mat::from_fn(n, n, |i, j| if i == j { iz - phi.matrix()[(i, j)] } else { -phi.matrix()[(i, j)] });
    let rhs = Mat::<Complex64>::identity(n, n);
    Ok(FockOperator::general(m.partial_piv_lu().solve(&rhs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::SourceCutoff;
    use std::f64::consts::PI;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn one_mode(n_max: usize) -> TruncationSpec {
        TruncationSpec::new(2.0 * PI, &[Mode([1, 0, 0])], &Dispersion::power(1.0).unwrap(), n_max).unwrap()
    }

    fn two_modes(n_max: usize) -> TruncationSpec {
        TruncationSpec::new(2.0 * PI, &[Mode([1, 0, 0]), Mode([1, 1, 0])], &Dispersion::power(1.0).unwrap(), n_max)
            .unwrap()
    }

    #[test]
    fn two_level_ladder() {
        let (a, ad) = build_ladder(&one_mode(1), 0).unwrap();
        assert_eq!(a.matrix()[(0, 1)], c(1.0));
        assert_eq!(a.matrix()[(1, 0)], c(0.0));
        assert_eq!(a.matrix()[(0, 0)], c(0.0));
        assert_eq!(ad.matrix()[(1, 0)], c(1.0));
    }

    #[test]
    fn commutator_on_low_block() {
        let spec = two_modes(5);
        for j in 0..2 {
            let (a, ad) = build_ladder(&spec, j).unwrap();
            let comm = a.mul(&ad).combine(c(1.0), &ad.mul(&a), c(-1.0));
            let dev = comm.combine(c(1.0), &FockOperator::identity(spec.dimension()), c(-1.0));
            assert!(dev.block_max(&spec.low_block(4)) < 1e-14);
        }
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let err = TruncationSpec::new(2.0 * PI, &[Mode([1, 0, 0]); 3], &Dispersion::power(1.0).unwrap(), 40).unwrap_err();
        assert!(matches!(err, FockError::DimensionCap { .. }));
        assert!(one_mode(10).with_cap(5).is_err());
    }

    #[test]
    fn single_mode_field_matrix() {
        let spec = one_mode(3);
        let f = LatticeFunction::single(2.0 * PI, Mode([1, 0, 0]), c(1.0));
        let phi = segal_field(&f, &spec).unwrap();
        let (a, ad) = build_ladder(&spec, 0).unwrap();
        let expect = a.combine(c(std::f64::consts::FRAC_1_SQRT_2), &ad, c(std::f64::consts::FRAC_1_SQRT_2));
        assert!(phi.combine(c(1.0), &expect, c(-1.0)).max_abs() < 1e-15);
        let zero = segal_field(&LatticeFunction::zero(2.0 * PI), &spec).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
        let foreign = LatticeFunction::single(2.0 * PI, Mode([0, 2, 0]), c(1.0));
        assert_eq!(segal_field(&foreign, &spec).unwrap_err(), FockError::ModeMismatch(Mode([0, 2, 0])));
    }

    #[test]
    fn kronecker_exponential_matches_dense_eigendecomposition() {
        let spec = two_modes(6);
        let f = LatticeFunction::from_pairs(
            2.0 * PI,
            [(Mode([1, 0, 0]), Complex64::new(0.3, -0.4)), (Mode([1, 1, 0]), Complex64::new(-0.7, 0.2))],
        );
        let w = weyl_operator(&f, &spec).unwrap();
        let wd = weyl_operator_dense(&f, &spec).unwrap();
        assert!(w.combine(c(1.0), &wd, c(-1.0)).max_abs() < 1e-12);
    }

    #[test]
    fn vacuum_weyl_overlap() {
        let spec = one_mode(40);
        let f = LatticeFunction::single(2.0 * PI, Mode([1, 0, 0]), c(1.0));
        let w = weyl_operator(&f, &spec).unwrap();
        assert!((w.matrix()[(0, 0)] - c((-0.25f64).exp())).norm() < 1e-12);
        let id = weyl_operator(&LatticeFunction::zero(2.0 * PI), &spec).unwrap();
        assert!(id.combine(c(1.0), &FockOperator::identity(41), c(-1.0)).max_abs() < 1e-14);
    }

    #[test]
    fn free_number_expectation() {
        let space = LatticeSpace::new(2.0 * PI, Dispersion::power(1.0).unwrap(), 1.0, SourceCutoff::new(0.5, 1.5)).unwrap();
        let spec = one_mode(64);
        let report = gc_expectation(&spec, 1.0, |s| {
            let (free, _) = hamiltonians(s, &space)?;
            Ok((number_operator(s, 0)?, free))
        })
        .unwrap();
        let exact = 1.0 / (std::f64::consts::E - 1.0);
        assert!((report.value.re - exact).abs() < 1e-12);
        assert!(report.truncation_estimate < 1e-10);
    }

    #[test]
    fn van_hove_ground_energy() {
        let space = LatticeSpace::new(2.0 * PI, Dispersion::power(1.0).unwrap(), 1.0, SourceCutoff::new(0.5, 1.5)).unwrap();
        let (free, full) = hamiltonians(&one_mode(60), &space).unwrap();
        assert!((full.ground_energy().unwrap() + 0.5).abs() < 1e-12);
        assert!(free.ground_energy().unwrap().abs() < 1e-15);
        let dense = full.dense().eigenvalues().unwrap();
        assert!((dense[0] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn boltzmann_check_rejects_coarse_truncations() {
        let space = LatticeSpace::new(2.0 * PI, Dispersion::power(1.0).unwrap(), 1.0, SourceCutoff::new(0.5, 1.5)).unwrap();
        let (free, _) = hamiltonians(&one_mode(8), &space).unwrap();
        assert!(matches!(ThermalDensity::checked(&free, 1.0), Err(FockError::Boltzmann(_))));
    }

    #[test]
    fn resolvent_of_zero_field() {
        let spec = one_mode(4);
        let r = resolvent_in_rep(c(2.0), &LatticeFunction::zero(2.0 * PI), &spec).unwrap();
        let expect = FockOperator::identity(5).scale(Complex64::new(0.0, -0.5));
        assert!(r.combine(c(1.0), &expect, c(-1.0)).max_abs() < 1e-15);
        assert!(matches!(
            resolvent_in_rep(Complex64::new(0.0, 1.0), &LatticeFunction::zero(2.0 * PI), &spec),
            Err(FockError::NearSingular(_))
        ));
    }
}
