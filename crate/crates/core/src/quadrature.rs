//! Composite Gauss–Legendre quadrature on radial and half-line domains.
//!
//! Radial integrals are split into panels: dyadic panels accumulating at the
//! origin (where integrands carry a power-law factor), uniform panels further
//! out, and every panel is subdivided until the phase of an oscillating factor
//! `e^{iτ r^s}` advances by at most a quarter turn. Each panel is evaluated at
//! two orders; the difference is the node-doubling error estimate.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("integral diverges at r = 0 (dyadic panel ratio {ratio:.4})")]
    DivergentAtOrigin { ratio: f64 },
    #[error("integral not converged: value {value}, error estimate {estimate:e}")]
    NotConverged { value: Complex64, estimate: f64 },
    #[error("invalid integration domain [{lo}, {hi}]")]
    InvalidDomain { lo: f64, hi: f64 },
}

/// Tunables for every numerical integral in the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss–Legendre nodes per panel for the coarse rule; the fine rule doubles it.
    pub nodes: usize,
    /// Number of dyadic refinements toward `r = 0`.
    pub origin_levels: usize,
    /// Outer edge of the dyadic region.
    pub origin_scale: f64,
    /// Maximal width of the uniform outer panels.
    pub panel_width: f64,
    /// Radius beyond which integrands of unbounded support are dropped.
    pub truncation_radius: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes: 16,
            origin_levels: 90,
            origin_scale: 0.5,
            panel_width: 0.25,
            truncation_radius: 40.0,
            abs_tol: 1e-13,
            rel_tol: 1e-11,
        }
    }
}

/// Value together with its self-convergence estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
}

/// Phase information of an oscillating factor `e^{i rate·r^exponent}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillation {
    pub rate: f64,
    pub exponent: f64,
}

impl Oscillation {
    pub const NONE: Oscillation = Oscillation { rate: 0.0, exponent: 1.0 };

    fn phase_span(&self, a: f64, b: f64) -> f64 {
        self.rate.abs() * (b.powf(self.exponent) - a.powf(self.exponent)).abs()
    }
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        for i in 0..m {
            // Tricomi initial guess, refined by Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, a: f64, b: f64, f: &F) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * *w;
        }
        acc * half
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Quadrature engine holding the coarse and fine rules of a [`QuadratureSpec`].
#[derive(Debug, Clone)]
pub struct Quadrature {
    spec: QuadratureSpec,
    coarse: GaussLegendre,
    fine: GaussLegendre,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self::new(QuadratureSpec::default())
    }
}

impl Quadrature {
    pub fn new(spec: QuadratureSpec) -> Self {
        let coarse = GaussLegendre::new(spec.nodes);
        let fine = GaussLegendre::new(2 * spec.nodes);
        Self { spec, coarse, fine }
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    /// Same engine with the node count doubled.
    pub fn refined(&self) -> Self {
        let mut spec = self.spec.clone();
        spec.nodes *= 2;
        Self::new(spec)
    }

    fn panel<F: Fn(f64) -> Complex64>(&self, a: f64, b: f64, f: &F) -> (Complex64, f64) {
        self.bisected(a, b, f, MAX_BISECTIONS)
    }

    /// Gauss–Legendre pair on `[a, b]`, halving the panel while the two rules
    /// disagree beyond a small fraction of the tolerance (flat edges of
    /// compactly supported profiles need this).
    fn bisected<F: Fn(f64) -> Complex64>(&self, a: f64, b: f64, f: &F, depth: usize) -> (Complex64, f64) {
        let fine = self.fine.integrate(a, b, f);
        let coarse = self.coarse.integrate(a, b, f);
        let error = (fine - coarse).norm();
        let local = 1e-2 * (self.spec.abs_tol + self.spec.rel_tol * fine.norm());
        if depth == 0 || error <= local || !error.is_finite() {
            return (fine, error);
        }
        let mid = 0.5 * (a + b);
        let (vl, el) = self.bisected(a, mid, f, depth - 1);
        let (vr, er) = self.bisected(mid, b, f, depth - 1);
        (vl + vr, el + er)
    }

    /// Integrates over `[a, b]` with panels no wider than `width`, each split
    /// further to resolve `osc`.
    fn segment<F: Fn(f64) -> Complex64>(
        &self,
        a: f64,
        b: f64,
        width: f64,
        osc: Oscillation,
        f: &F,
    ) -> (Complex64, f64) {
        if b <= a {
            return (Complex64::new(0.0, 0.0), 0.0);
        }
        let by_width = ((b - a) / width).ceil().max(1.0) as usize;
        let mut value = Complex64::new(0.0, 0.0);
        let mut error = 0.0;
        for i in 0..by_width {
            let pa = a + (b - a) * i as f64 / by_width as f64;
            let pb = if i + 1 == by_width { b } else { a + (b - a) * (i + 1) as f64 / by_width as f64 };
            let (v, e) = self.oscillation_resolved(pa, pb, osc, f);
            value += v;
            error += e;
        }
        (value, error)
    }

    fn oscillation_resolved<F: Fn(f64) -> Complex64>(
        &self,
        a: f64,
        b: f64,
        osc: Oscillation,
        f: &F,
    ) -> (Complex64, f64) {
        let span = osc.phase_span(a, b);
        let pieces = (span / (0.5 * PI)).ceil().max(1.0) as usize;
        if pieces == 1 {
            return self.panel(a, b, f);
        }
        // Equal phase increments: breakpoints uniform in r^exponent.
        let e = osc.exponent;
        let (ua, ub) = (a.powf(e), b.powf(e));
        let mut value = Complex64::new(0.0, 0.0);
        let mut error = 0.0;
        let mut left = a;
        for i in 1..=pieces {
            let right = if i == pieces {
                b
            } else {
                (ua + (ub - ua) * i as f64 / pieces as f64).powf(1.0 / e)
            };
            let (v, err) = self.panel(left, right, f);
            value += v;
            error += err;
            left = right;
        }
        (value, error)
    }

    /// Integrates `f` over `[lo, hi]` with `0 ≤ lo ≤ hi ≤ ∞`.
    ///
    /// When `lo == 0` the origin is approached through dyadic panels; the
    /// part below the last level is extrapolated geometrically from the ratio
    /// of the last two panel contributions (exact for a pure power law), and a
    /// ratio close to one is reported as a divergence.
    pub fn radial<F: Fn(f64) -> Complex64>(
        &self,
        lo: f64,
        hi: f64,
        osc: Oscillation,
        f: F,
    ) -> Result<Integral, QuadratureError> {
        if !(lo >= 0.0) || hi.is_nan() || hi < lo {
            return Err(QuadratureError::InvalidDomain { lo, hi });
        }
        let hi = hi.min(self.spec.truncation_radius.max(lo));
        if hi <= lo {
            return Ok(Integral { value: Complex64::new(0.0, 0.0), error: 0.0 });
        }
        let mut value = Complex64::new(0.0, 0.0);
        let mut error = 0.0;

        let mut outer_start = lo;
        if lo == 0.0 {
            let top = self.spec.origin_scale.min(hi);
            let mut right = top;
            let mut last = Complex64::new(0.0, 0.0);
            let mut before_last = Complex64::new(0.0, 0.0);
            for _ in 0..self.spec.origin_levels {
                let left = 0.5 * right;
                let (v, e) = self.oscillation_resolved(left, right, osc, &f);
                value += v;
                error += e;
                before_last = last;
                last = v;
                right = left;
            }
            let (tail, tail_err) = origin_tail(before_last, last)?;
            value += tail;
            error += tail_err;
            outer_start = top;
        } else if lo < self.spec.origin_scale && hi > lo {
            // Geometric panels from `lo` keep power laws near a small lower limit resolved.
            let top = self.spec.origin_scale.min(hi);
            let mut right = top;
            while right > lo {
                let left = (0.5 * right).max(lo);
                let left = if left < 2.0 * lo && left > lo { lo } else { left };
                let (v, e) = self.oscillation_resolved(left, right, osc, &f);
                value += v;
                error += e;
                right = left;
            }
            outer_start = top;
        }
        let (v, e) = self.segment(outer_start, hi, self.spec.panel_width, osc, &f);
        value += v;
        error += e;
        Ok(Integral { value, error })
    }

    /// Like [`Quadrature::radial`] but rejects results whose error estimate
    /// exceeds the spec tolerances.
    pub fn radial_checked<F: Fn(f64) -> Complex64>(
        &self,
        lo: f64,
        hi: f64,
        osc: Oscillation,
        f: F,
    ) -> Result<Integral, QuadratureError> {
        let out = self.radial(lo, hi, osc, f)?;
        self.check(out)
    }

    pub fn check(&self, out: Integral) -> Result<Integral, QuadratureError> {
        let tol = self.spec.abs_tol + self.spec.rel_tol * out.value.norm();
        if out.error > tol || !out.value.re.is_finite() || !out.value.im.is_finite() {
            return Err(QuadratureError::NotConverged { value: out.value, estimate: out.error });
        }
        Ok(out)
    }

    /// Integrates a smooth function on `[0, length]` with panels of at most `width`.
    pub fn interval<F: Fn(f64) -> Complex64>(&self, a: f64, b: f64, width: f64, f: F) -> Integral {
        let (value, error) = self.segment(a, b, width, Oscillation::NONE, &f);
        Integral { value, error }
    }

    /// Tensor-product rule on `[0, sa] × [0, sb]`.
    pub fn rectangle<F: Fn(f64, f64) -> Complex64>(
        &self,
        sa: f64,
        wa: f64,
        sb: f64,
        wb: f64,
        f: F,
    ) -> Integral {
        let fine = tensor(&self.fine, sa, wa, sb, wb, &f);
        let coarse = tensor(&self.coarse, sa, wa, sb, wb, &f);
        Integral { value: fine, error: (fine - coarse).norm() }
    }
}

const MAX_BISECTIONS: usize = 4;

fn panel_points(rule: &GaussLegendre, len: f64, width: f64) -> Vec<(f64, f64)> {
    let count = (len / width).ceil().max(1.0) as usize;
    let h = len / count as f64;
    let mut out = Vec::with_capacity(count * rule.len());
    for p in 0..count {
        let mid = h * (p as f64 + 0.5);
        for (x, w) in rule.nodes().iter().zip(rule.weights()) {
            out.push((mid + 0.5 * h * x, 0.5 * h * w));
        }
    }
    out
}

fn tensor<F: Fn(f64, f64) -> Complex64>(
    rule: &GaussLegendre,
    sa: f64,
    wa: f64,
    sb: f64,
    wb: f64,
    f: &F,
) -> Complex64 {
    let xs = panel_points(rule, sa, wa);
    let ys = panel_points(rule, sb, wb);
    let mut acc = Complex64::new(0.0, 0.0);
    for &(x, wx) in &xs {
        let mut row = Complex64::new(0.0, 0.0);
        for &(y, wy) in &ys {
            row += f(x, y) * wy;
        }
        acc += row * wx;
    }
    acc
}

fn origin_tail(before_last: Complex64, last: Complex64) -> Result<(Complex64, f64), QuadratureError> {
    let (b, l) = (before_last.norm(), last.norm());
    if l == 0.0 {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    if b == 0.0 {
        // A lone nonzero contribution at the bottom level: keep it as the error.
        return Ok((Complex64::new(0.0, 0.0), l));
    }
    let ratio = l / b;
    if ratio >= 0.999 {
        return Err(QuadratureError::DivergentAtOrigin { ratio });
    }
    // Geometric continuation of the dyadic series below the last level.
    let tail = last * (ratio / (1.0 - ratio));
    Ok((tail, tail.norm() * 1e-3 + l * f64::EPSILON))
}
