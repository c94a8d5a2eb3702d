//! Periodic box `[-L/2, L/2]³` and its wave-vector lattice `(2π/L)·Z³`.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("box side must be positive, got {0}")]
    BoxSide(f64),
    #[error("shell with an infinite ultraviolet cutoff has infinitely many modes")]
    UnboundedShell,
    #[error("test functions live on boxes of different side ({0} vs {1})")]
    BoxMismatch(f64, f64),
}

/// Integer label `n ∈ Z³` of the wave vector `k = (2π/L) n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode(pub [i32; 3]);

impl Mode {
    pub const ZERO: Mode = Mode([0, 0, 0]);

    pub fn wave_vector(&self, box_side: f64) -> [f64; 3] {
        let a = 2.0 * PI / box_side;
        [a * self.0[0] as f64, a * self.0[1] as f64, a * self.0[2] as f64]
    }

    pub fn wave_number(&self, box_side: f64) -> f64 {
        let n2 = self.0.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>();
        2.0 * PI / box_side * n2.sqrt()
    }

    pub fn is_zero(&self) -> bool {
        *self == Mode::ZERO
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub box_side: f64,
    pub kappa: f64,
    /// Ultraviolet cutoff; `f64::INFINITY` means no cutoff.
    pub lambda: f64,
    pub include_zero_mode: bool,
}

impl LatticeSpec {
    pub fn new(box_side: f64, kappa: f64, lambda: f64) -> Result<Self, LatticeError> {
        if !(box_side > 0.0) || !box_side.is_finite() {
            return Err(LatticeError::BoxSide(box_side));
        }
        Ok(Self { box_side, kappa, lambda, include_zero_mode: false })
    }

    pub fn with_zero_mode(mut self, include: bool) -> Self {
        self.include_zero_mode = include;
        self
    }

    /// All lattice modes in the closed shell `κ ≤ |k| ≤ Λ`, in lexicographic order.
    pub fn modes(&self) -> Result<Vec<Mode>, LatticeError> {
        if !self.lambda.is_finite() {
            return Err(LatticeError::UnboundedShell);
        }
        if self.lambda < self.kappa {
            return Ok(Vec::new());
        }
        let a = 2.0 * PI / self.box_side;
        let nmax = (self.lambda / a).floor() as i32;
        // Small slack so that shell boundaries hit exactly are kept.
        let eps = 1e-12 * self.lambda.max(1.0);
        let mut out = Vec::new();
        for x in -nmax..=nmax {
            for y in -nmax..=nmax {
                for z in -nmax..=nmax {
                    let m = Mode([x, y, z]);
                    if m.is_zero() {
                        if self.kappa == 0.0 && self.include_zero_mode {
                            out.push(m);
                        }
                        continue;
                    }
                    let k = m.wave_number(self.box_side);
                    if k >= self.kappa - eps && k <= self.lambda + eps {
                        out.push(m);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Finitely supported test function given by its coefficients in the
/// orthonormal plane-wave basis `L^{-3/2} e^{ikx}` of the box.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeFunction {
    box_side: f64,
    coefficients: BTreeMap<Mode, Complex64>,
}

impl LatticeFunction {
    pub fn zero(box_side: f64) -> Self {
        Self { box_side, coefficients: BTreeMap::new() }
    }

    pub fn single(box_side: f64, mode: Mode, amplitude: Complex64) -> Self {
        Self::from_pairs(box_side, [(mode, amplitude)])
    }

    pub fn from_pairs<I: IntoIterator<Item = (Mode, Complex64)>>(box_side: f64, pairs: I) -> Self {
        let mut f = Self::zero(box_side);
        for (m, c) in pairs {
            *f.coefficients.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        f.prune();
        f
    }

    fn prune(&mut self) {
        self.coefficients.retain(|_, c| *c != Complex64::new(0.0, 0.0));
    }

    pub fn box_side(&self) -> f64 {
        self.box_side
    }

    pub fn coefficient(&self, mode: &Mode) -> Complex64 {
        self.coefficients.get(mode).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mode, &Complex64)> {
        self.coefficients.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Mode> {
        self.coefficients.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.values().map(|c| c.norm_sqr()).sum()
    }

    fn same_box(&self, other: &Self) -> Result<(), LatticeError> {
        if (self.box_side - other.box_side).abs() > 1e-12 * self.box_side {
            return Err(LatticeError::BoxMismatch(self.box_side, other.box_side));
        }
        Ok(())
    }

    /// Weighted pairing `Σ_k conj(f_k) g_k w(k)`.
    pub fn pairing<W: Fn(&Mode) -> Complex64>(&self, other: &Self, weight: W) -> Result<Complex64, LatticeError> {
        self.same_box(other)?;
        let (small, large, swap) = if self.coefficients.len() <= other.coefficients.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &small.coefficients {
            if let Some(d) = large.coefficients.get(m) {
                let (fk, gk) = if swap { (d, c) } else { (c, d) };
                acc += fk.conj() * gk * weight(m);
            }
        }
        Ok(acc)
    }

    /// `⟨f, g⟩`, antilinear in the first slot.
    pub fn inner(&self, other: &Self) -> Result<Complex64, LatticeError> {
        self.pairing(other, |_| Complex64::new(1.0, 0.0))
    }

    /// `a·f + b·g`.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self, LatticeError> {
        self.same_box(other)?;
        let pairs = self
            .coefficients
            .iter()
            .map(|(m, c)| (*m, a * c))
            .chain(other.coefficients.iter().map(|(m, c)| (*m, b * c)));
        Ok(Self::from_pairs(self.box_side, pairs))
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self::from_pairs(self.box_side, self.coefficients.iter().map(|(m, c)| (*m, a * c)))
    }

    /// Pointwise multiplication by a function of the mode, e.g. `e^{itω}`.
    pub fn multiply<M: Fn(&Mode) -> Complex64>(&self, factor: M) -> Self {
        Self::from_pairs(self.box_side, self.coefficients.iter().map(|(m, c)| (*m, factor(m) * c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent enumeration over a generous integer cube.
    fn brute_force(l: f64, kappa: f64, lambda: f64) -> usize {
        let a = 2.0 * PI / l;
        let mut count = 0;
        for x in -10i32..=10 {
            for y in -10i32..=10 {
                for z in -10i32..=10 {
                    if x == 0 && y == 0 && z == 0 {
                        continue;
                    }
                    let k = a * ((x * x + y * y + z * z) as f64).sqrt();
                    if kappa <= k && k <= lambda {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn shell_counts() {
        let l = 2.0 * PI;
        let s = LatticeSpec::new(l, 0.5, 1.2).unwrap();
        assert_eq!(s.modes().unwrap().len(), 6);
        assert_eq!(brute_force(l, 0.5, 1.2), 6);
        let s = LatticeSpec::new(l, 0.5, 1.5).unwrap();
        assert_eq!(s.modes().unwrap().len(), 18);
        assert_eq!(brute_force(l, 0.5, 1.5), 18);
        let s = LatticeSpec::new(l, 2.0, 1.0).unwrap();
        assert!(s.modes().unwrap().is_empty());
        let s = LatticeSpec::new(l, 0.0, 1.8).unwrap().with_zero_mode(true);
        assert_eq!(s.modes().unwrap().len(), brute_force(l, 0.0, 1.8) + 1);
    }

    #[test]
    fn unbounded_shell_is_an_error() {
        let s = LatticeSpec::new(1.0, 0.1, f64::INFINITY).unwrap();
        assert_eq!(s.modes(), Err(LatticeError::UnboundedShell));
    }

    #[test]
    fn inner_product_is_antilinear_in_first_slot() {
        let m = Mode([1, 0, 0]);
        let f = LatticeFunction::single(1.0, m, Complex64::new(0.0, 1.0));
        let g = LatticeFunction::single(1.0, m, Complex64::new(1.0, 0.0));
        assert_eq!(f.inner(&g).unwrap(), Complex64::new(0.0, -1.0));
        let h = LatticeFunction::single(2.0, m, Complex64::new(1.0, 0.0));
        assert!(f.inner(&h).is_err());
    }

    #[test]
    fn combine_cancels_to_zero() {
        let f = LatticeFunction::single(1.0, Mode([0, 1, 0]), Complex64::new(0.3, -0.2));
        let z = f.combine(Complex64::new(1.0, 0.0), &f, Complex64::new(-1.0, 0.0)).unwrap();
        assert!(z.is_zero());
    }
}
