//! Radial test functions `f̂(|k|)` for the infinite-volume system and their
//! formal linear combinations.

use crate::dispersion::Dispersion;
use num_complex::Complex64;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("origin order must be positive, got {0}")]
    OriginOrder(f64),
    #[error("decay order must exceed 3, got {0}")]
    DecayOrder(f64),
    #[error("invalid profile parameter: {0}")]
    Parameter(String),
    #[error("malformed profile table at line {line}: {reason}")]
    Table { line: usize, reason: String },
}

/// Built-in and tabulated radial shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialProfile {
    /// `A e^{-r²/(2w²)}`
    Gaussian { amplitude: Complex64, width: f64 },
    /// Smooth bump `A exp(1 - q²/(q² - x²))`-type, supported on `(inner, outer)`.
    ShellBump { amplitude: Complex64, inner: f64, outer: f64 },
    /// `A r^p e^{-r²/(2w²)}`
    PolynomialGaussian { amplitude: Complex64, power: f64, width: f64 },
    /// Linear interpolation of samples, zero beyond the last radius.
    Table { radii: Vec<f64>, values: Vec<Complex64> },
}

impl RadialProfile {
    pub fn eval(&self, r: f64) -> Complex64 {
        match self {
            RadialProfile::Gaussian { amplitude, width } => *amplitude * (-0.5 * (r / width).powi(2)).exp(),
            RadialProfile::ShellBump { amplitude, inner, outer } => {
                if r <= *inner || r >= *outer {
                    return Complex64::new(0.0, 0.0);
                }
                let mid = 0.5 * (inner + outer);
                let half = 0.5 * (outer - inner);
                let x = (r - mid) / half;
                *amplitude * (1.0 - 1.0 / (1.0 - x * x)).exp()
            }
            RadialProfile::PolynomialGaussian { amplitude, power, width } => {
                let base = if *power == 0.0 { 1.0 } else { r.powf(*power) };
                *amplitude * base * (-0.5 * (r / width).powi(2)).exp()
            }
            RadialProfile::Table { radii, values } => interpolate(radii, values, r),
        }
    }

    /// Radius beyond which the profile is negligible (below ~1e-40 relative).
    pub fn support_radius(&self) -> f64 {
        match self {
            RadialProfile::Gaussian { width, .. } => 14.0 * width,
            RadialProfile::ShellBump { outer, .. } => *outer,
            RadialProfile::PolynomialGaussian { power, width, .. } => (14.0 + 2.0 * power.sqrt()) * width + power.sqrt() * width,
            RadialProfile::Table { radii, .. } => radii.last().copied().unwrap_or(0.0),
        }
    }
}

fn interpolate(radii: &[f64], values: &[Complex64], r: f64) -> Complex64 {
    let n = radii.len();
    if n == 0 || r > radii[n - 1] {
        return Complex64::new(0.0, 0.0);
    }
    if n == 1 {
        return values[0];
    }
    let idx = match radii.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
        Ok(i) => return values[i],
        Err(i) => i,
    };
    let (i0, i1) = if idx == 0 { (0, 1) } else { (idx - 1, idx) };
    let t = (r - radii[i0]) / (radii[i1] - radii[i0]);
    values[i0] * (1.0 - t) + values[i1] * t
}

/// A radial profile together with its behavior at the origin and at infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialTestFunction {
    profile: RadialProfile,
    value_at_zero: Complex64,
    origin_order: f64,
    decay_order: f64,
}

impl RadialTestFunction {
    pub fn new(
        profile: RadialProfile,
        value_at_zero: Complex64,
        origin_order: f64,
        decay_order: f64,
    ) -> Result<Self, ProfileError> {
        if !(origin_order > 0.0) {
            return Err(ProfileError::OriginOrder(origin_order));
        }
        if !(decay_order > 3.0) {
            return Err(ProfileError::DecayOrder(decay_order));
        }
        Ok(Self { profile, value_at_zero, origin_order, decay_order })
    }

    pub fn gaussian(amplitude: Complex64, width: f64) -> Result<Self, ProfileError> {
        if !(width > 0.0) {
            return Err(ProfileError::Parameter(format!("gaussian width {width}")));
        }
        Self::new(RadialProfile::Gaussian { amplitude, width }, amplitude, 2.0, f64::INFINITY)
    }

    pub fn shell_bump(amplitude: Complex64, inner: f64, outer: f64) -> Result<Self, ProfileError> {
        if !(inner > 0.0 && outer > inner) {
            return Err(ProfileError::Parameter(format!("shell bump on ({inner}, {outer})")));
        }
        Self::new(
            RadialProfile::ShellBump { amplitude, inner, outer },
            Complex64::new(0.0, 0.0),
            f64::INFINITY,
            f64::INFINITY,
        )
    }

    /// `A r^p e^{-r²/(2w²)}`; the origin order is `p` (or 2 for `p = 0`).
    pub fn polynomial_gaussian(amplitude: Complex64, power: f64, width: f64) -> Result<Self, ProfileError> {
        if !(width > 0.0) || !(power >= 0.0) {
            return Err(ProfileError::Parameter(format!("polynomial-gaussian power {power}, width {width}")));
        }
        let (v0, order) = if power == 0.0 { (amplitude, 2.0) } else { (Complex64::new(0.0, 0.0), power) };
        Self::new(RadialProfile::PolynomialGaussian { amplitude, power, width }, v0, order, f64::INFINITY)
    }

    /// Builds a tabulated profile. The value at the origin is the table value at
    /// `r = 0` when present, else the linear extrapolation of the first two rows.
    pub fn table(
        radii: Vec<f64>,
        values: Vec<Complex64>,
        origin_order: f64,
        decay_order: f64,
    ) -> Result<Self, ProfileError> {
        if radii.is_empty() || radii.len() != values.len() {
            return Err(ProfileError::Parameter("empty or ragged table".into()));
        }
        if radii.windows(2).any(|w| !(w[1] > w[0])) || radii[0] < 0.0 {
            return Err(ProfileError::Parameter("table radii must be nonnegative and increasing".into()));
        }
        let v0 = if radii[0] == 0.0 || radii.len() == 1 {
            values[0]
        } else {
            let t = -radii[0] / (radii[1] - radii[0]);
            values[0] * (1.0 - t) + values[1] * t
        };
        Self::new(RadialProfile::Table { radii, values }, v0, origin_order, decay_order)
    }

    /// Parses two-column text `r value` (optionally a third column for the
    /// imaginary part); `#` starts a comment.
    pub fn parse_table(text: &str, origin_order: f64, decay_order: f64) -> Result<Self, ProfileError> {
        let mut radii = Vec::new();
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
            if cols.len() < 2 || cols.len() > 3 {
                return Err(ProfileError::Table { line: i + 1, reason: format!("expected 2 or 3 columns, got {}", cols.len()) });
            }
            let num = |s: &str| {
                s.parse::<f64>().map_err(|e| ProfileError::Table { line: i + 1, reason: e.to_string() })
            };
            radii.push(num(cols[0])?);
            let im = if cols.len() == 3 { num(cols[2])? } else { 0.0 };
            values.push(Complex64::new(num(cols[1])?, im));
        }
        Self::table(radii, values, origin_order, decay_order)
    }

    pub fn profile(&self) -> &RadialProfile {
        &self.profile
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        self.profile.eval(r)
    }

    pub fn value_at_zero(&self) -> Complex64 {
        self.value_at_zero
    }

    pub fn origin_order(&self) -> f64 {
        self.origin_order
    }

    pub fn decay_order(&self) -> f64 {
        self.decay_order
    }
}

#[derive(Debug, Clone)]
struct Term {
    coefficient: Complex64,
    /// Accumulated free evolution `e^{i t ω}`.
    time: f64,
    function: Arc<RadialTestFunction>,
}

/// Formal linear combination `Σ_j c_j e^{i t_j ω} f_j` of radial test functions.
///
/// Every form used by the crate is (sesqui)linear, so combinations are never
/// resampled: they are evaluated pointwise inside each integral.
#[derive(Debug, Clone, Default)]
pub struct RadialDirection {
    terms: Vec<Term>,
}

impl From<RadialTestFunction> for RadialDirection {
    fn from(f: RadialTestFunction) -> Self {
        Self::from_shared(Arc::new(f))
    }
}

impl RadialDirection {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn from_shared(f: Arc<RadialTestFunction>) -> Self {
        Self { terms: vec![Term { coefficient: Complex64::new(1.0, 0.0), time: 0.0, function: f }] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        self.combine(a, &Self::zero(), Complex64::new(0.0, 0.0))
    }

    /// `a·self + b·other`, merging terms that share a profile and time shift.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        let mut terms: Vec<Term> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let scaled = self
            .terms
            .iter()
            .map(|t| (a * t.coefficient, t))
            .chain(other.terms.iter().map(|t| (b * t.coefficient, t)));
        for (c, t) in scaled {
            if let Some(existing) = terms
                .iter_mut()
                .find(|e| e.time == t.time && Arc::ptr_eq(&e.function, &t.function))
            {
                existing.coefficient += c;
            } else {
                terms.push(Term { coefficient: c, time: t.time, function: Arc::clone(&t.function) });
            }
        }
        terms.retain(|t| t.coefficient != Complex64::new(0.0, 0.0));
        Self { terms }
    }

    /// `e^{itω} f`.
    pub fn evolve(&self, t: f64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|term| Term { time: term.time + t, ..term.clone() })
                .collect(),
        }
    }

    pub fn eval(&self, r: f64, disp: &Dispersion) -> Complex64 {
        let w = disp.omega_radial(r);
        self.terms
            .iter()
            .map(|t| {
                let phase = if t.time == 0.0 { Complex64::new(1.0, 0.0) } else { Complex64::from_polar(1.0, t.time * w) };
                t.coefficient * phase * t.function.eval(r)
            })
            .sum()
    }

    /// `f̂(0)`; free evolution leaves it unchanged because `ω(0) = 0`.
    pub fn value_at_zero(&self) -> Complex64 {
        self.terms.iter().map(|t| t.coefficient * t.function.value_at_zero()).sum()
    }

    /// Whether `f̂(0)` vanishes, up to cancellation roundoff between terms.
    pub fn vanishes_at_zero(&self) -> bool {
        let scale: f64 = self.terms.iter().map(|t| (t.coefficient * t.function.value_at_zero()).norm()).sum();
        self.value_at_zero().norm() <= 1e-14 * scale
    }

    /// Order `p` with `f̂(r) − f̂(0) = O(r^p)`; a time shift with `f̂_j(0) ≠ 0`
    /// contributes `e^{itω} − 1 = O(r^s)`.
    pub fn origin_order(&self, disp: &Dispersion) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let own = t.function.origin_order();
                if t.time != 0.0 && t.function.value_at_zero() != Complex64::new(0.0, 0.0) {
                    own.min(disp.exponent())
                } else {
                    own
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn decay_order(&self) -> f64 {
        self.terms.iter().map(|t| t.function.decay_order()).fold(f64::INFINITY, f64::min)
    }

    pub fn support_radius(&self) -> f64 {
        self.terms.iter().map(|t| t.function.profile().support_radius()).fold(0.0, f64::max)
    }

    /// Largest accumulated evolution time, which sets the oscillation rate.
    pub fn max_time(&self) -> f64 {
        self.terms.iter().map(|t| t.time.abs()).fold(0.0, f64::max)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn builtin_orders() {
        let g = RadialTestFunction::gaussian(one(), 1.0).unwrap();
        assert_eq!(g.value_at_zero(), one());
        assert_eq!(g.origin_order(), 2.0);
        let p = RadialTestFunction::polynomial_gaussian(one(), 3.0, 1.0).unwrap();
        assert_eq!(p.value_at_zero(), Complex64::new(0.0, 0.0));
        assert_eq!(p.origin_order(), 3.0);
        let b = RadialTestFunction::shell_bump(one(), 0.5, 2.0).unwrap();
        assert_eq!(b.eval(0.2), Complex64::new(0.0, 0.0));
        assert!((b.eval(1.25).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(RadialTestFunction::new(RadialProfile::Gaussian { amplitude: one(), width: 1.0 }, one(), 0.0, 5.0).is_err());
        assert!(RadialTestFunction::new(RadialProfile::Gaussian { amplitude: one(), width: 1.0 }, one(), 1.0, 3.0).is_err());
    }

    #[test]
    fn table_parsing_and_interpolation() {
        let text = "# r value\n0 1\n1 0.5\n2, 0.0\n";
        let t = RadialTestFunction::parse_table(text, 1.0, 4.0).unwrap();
        assert_eq!(t.value_at_zero(), one());
        assert!((t.eval(0.5).re - 0.75).abs() < 1e-15);
        assert_eq!(t.eval(3.0), Complex64::new(0.0, 0.0));
        assert!(RadialTestFunction::parse_table("0 1 2 3\n", 1.0, 4.0).is_err());
        assert!(RadialTestFunction::parse_table("0 x\n", 1.0, 4.0).is_err());
    }

    #[test]
    fn formal_sums_cancel_and_track_origin() {
        let d = Dispersion::power(1.0).unwrap();
        let f: RadialDirection = RadialTestFunction::gaussian(one(), 1.0).unwrap().into();
        let z = f.combine(one(), &f, -one());
        assert!(z.is_zero());
        // (e^{itω} − 1) f vanishes at the origin with order min(2, s) = 1.
        let diff = f.evolve(0.7).combine(one(), &f, -one());
        assert!(diff.vanishes_at_zero());
        assert_eq!(diff.origin_order(&d), 1.0);
        let r = 0.9;
        let expect = (Complex64::from_polar(1.0, 0.7 * r) - 1.0) * (-0.5 * r * r).exp();
        assert!((diff.eval(r, &d) - expect).norm() < 1e-15);
    }
}
