//! Closed-form equilibrium functionals of the van Hove model.
//!
//! The state is quasi-free with displacement `d` and covariance `q`:
//!
//! `ψ(W(f)) = exp(-i Re⟨d, f⟩ - q(f)/4)`,
//!
//! and the dynamics acts as `α_t(W(f)) = e^{iM_t(f)} W(e^{itε} f)` with
//! `ε = ω − μ` and `M_t(f) = Re⟨d, (e^{itε} − 1) f⟩`.

use crate::forms;
use crate::radial::RadialDirection;
use crate::source::SourceCutoff;
use crate::space::{ContinuumSpace, OneParticleSpace};
use crate::weyl::{self, WeylWord};
use crate::{Error, Result};
use num_complex::Complex64;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Real data of the Gaussian `ψ(W(tf)) = exp(-i t·mean - t²·covariance/4)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian {
    /// `Re⟨d, f⟩`
    pub mean: f64,
    /// `q(f) = q_{≠0}(f) + q_0(f)`
    pub covariance: f64,
}

impl Gaussian {
    pub fn expectation(&self) -> Complex64 {
        Complex64::new(-0.25 * self.covariance, -self.mean).exp()
    }
}

/// Both sides of the complex-time KMS identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmsEvaluation {
    /// `F(t + iβ)` by continuation of `F(t) = ψ(A α_t(B))`.
    pub continued: Complex64,
    /// `G(t) = ψ(α_t(B) A)`.
    pub reversed: Complex64,
}

impl KmsEvaluation {
    pub fn residual(&self) -> f64 {
        (self.continued - self.reversed).norm()
    }
}

/// Analytic and finite-difference evaluation of `ψ(φ(f) + Re m(f))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub analytic: Complex64,
    pub finite_difference: Complex64,
    /// Difference between the step-`h` and step-`h/2` derivatives.
    pub richardson_gap: f64,
}

#[derive(Debug, Clone)]
pub struct ThermalModel<S> {
    space: S,
}

impl<S: OneParticleSpace> ThermalModel<S> {
    pub fn new(space: S) -> Self {
        Self { space }
    }

    pub fn space(&self) -> &S {
        &self.space
    }

    pub fn gaussian(&self, f: &S::Vector) -> Result<Gaussian> {
        Ok(Gaussian { mean: self.space.displacement(f)?.re, covariance: self.space.covariance(f, f)?.re })
    }

    /// `ψ(φ(f)) = -Re⟨d, f⟩`.
    pub fn one_point_segal(&self, f: &S::Vector) -> Result<Complex64> {
        Ok(Complex64::new(-self.space.displacement(f)?.re, 0.0))
    }

    /// `ψ(a†(f)) = -⟨d, f⟩/√2`.
    pub fn one_point_creation(&self, f: &S::Vector) -> Result<Complex64> {
        Ok(-self.space.displacement(f)? / std::f64::consts::SQRT_2)
    }

    /// `ψ(a(f)) = -conj⟨d, f⟩/√2`.
    pub fn one_point_annihilation(&self, f: &S::Vector) -> Result<Complex64> {
        Ok(self.one_point_creation(f)?.conj())
    }

    /// `ψ(φ(f)φ(g)) = ½(Re q(f,g) + i σ(f,g)) + Re⟨d,f⟩ Re⟨d,g⟩`.
    pub fn two_point_segal(&self, f: &S::Vector, g: &S::Vector) -> Result<Complex64> {
        let q = self.space.covariance(f, g)?.re;
        let sigma = self.space.sigma(f, g)?;
        let mf = self.space.displacement(f)?.re;
        let mg = self.space.displacement(g)?.re;
        Ok(Complex64::new(0.5 * q + mf * mg, 0.5 * sigma))
    }

    pub fn weyl_expectation(&self, f: &S::Vector) -> Result<Complex64> {
        if self.space.is_zero(f) {
            return Ok(ONE);
        }
        Ok(self.gaussian(f)?.expectation())
    }

    /// The same state without source: `exp(-q(f)/4)`.
    pub fn free_weyl_expectation(&self, f: &S::Vector) -> Result<Complex64> {
        Ok(Complex64::new((-0.25 * self.space.covariance(f, f)?.re).exp(), 0.0))
    }

    pub fn word_expectation(&self, w: &WeylWord<S::Vector>) -> Result<Complex64> {
        Ok(w.phase * self.weyl_expectation(&w.direction)?)
    }

    /// `ψ(W(f)W(g)) = e^{-(i/2)σ(f,g)} ψ(W(f+g))`.
    pub fn weyl_two_point(&self, f: &S::Vector, g: &S::Vector) -> Result<Complex64> {
        let sigma = self.space.sigma(f, g)?;
        let sum = self.space.combine(ONE, f, ONE, g)?;
        Ok(Complex64::from_polar(1.0, -0.5 * sigma) * self.weyl_expectation(&sum)?)
    }

    /// `M_t(f) = Re⟨d, e^{itε} f⟩ − Re⟨d, f⟩`.
    pub fn cocycle(&self, t: f64, f: &S::Vector) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        let diff = self.space.combine(ONE, &self.space.evolve(t, f), -ONE, f)?;
        Ok(self.space.displacement(&diff)?.re)
    }

    /// `α_t(e^{iθ} W(f)) = e^{iθ} e^{iM_t(f)} W(e^{itε} f)`.
    pub fn automorphism_apply(&self, t: f64, w: &WeylWord<S::Vector>) -> Result<WeylWord<S::Vector>> {
        if t == 0.0 {
            return Ok(w.clone());
        }
        let m = self.cocycle(t, &w.direction)?;
        Ok(WeylWord { phase: w.phase * Complex64::from_polar(1.0, m), direction: self.space.evolve(t, &w.direction) })
    }

    /// `ψ(W(f) α_t(W(g)))` through the word algebra.
    pub fn correlation(&self, f: &S::Vector, g: &S::Vector, t: f64) -> Result<Complex64> {
        let a = WeylWord::generator(f.clone());
        let b = self.automorphism_apply(t, &WeylWord::generator(g.clone()))?;
        self.word_expectation(&weyl::multiply(&self.space, &a, &b)?)
    }

    /// t-independent factor shared by `F` and `G`.
    pub fn kms_prefactor(&self, f: &S::Vector, g: &S::Vector) -> Result<Complex64> {
        let gf = self.gaussian(f)?;
        let gg = self.gaussian(g)?;
        let q0 = self.space.condensate(f, g).re;
        Ok(Complex64::new(-0.25 * (gf.covariance + gg.covariance) - 0.5 * q0, -(gf.mean + gg.mean)).exp())
    }

    /// Exponent of `F(τ) = ψ(W(f) α_τ(W(g)))` that couples `f` and `g`,
    /// at `τ = t + i·imag`. Writing `a_k = conj(f_k) g_k`, it is
    /// `Σ_k [-¼ a_k e^{iτε}(1 + K) + ¼ conj(a_k) e^{-iτε}(1 − K)]`, where
    /// `e^{-iτε}` is continued as the reciprocal of `e^{iτε}`.
    pub fn cross_continued(&self, f: &S::Vector, g: &S::Vector, t: f64, imag: f64) -> Result<Complex64> {
        let beta = self.space.beta();
        // e^{iτε}(1 + K) and e^{-iτε}(1 − K), exponents combined before exponentiating.
        let forward = move |e: f64| {
            let log_plus = std::f64::consts::LN_2 + 0.5 * beta * e - log_two_sinh(0.5 * beta * e);
            Complex64::new(log_plus - imag * e, t * e).exp()
        };
        let backward = move |e: f64| {
            let log_minus = std::f64::consts::LN_2 - 0.5 * beta * e - log_two_sinh(0.5 * beta * e);
            -Complex64::new(log_minus + imag * e, -t * e).exp()
        };
        let rate = t.abs();
        let a = self.space.spectral(f, g, &forward, rate)?;
        let b = self.space.spectral(g, f, &backward, rate)?;
        Ok(-0.25 * a + 0.25 * b)
    }

    /// Exponent of `G(t) = ψ(α_t(W(g)) W(f))` that couples `f` and `g`:
    /// `Σ_k [¼ a_k e^{itε}(1 − K) − ¼ conj(a_k) e^{-itε}(1 + K)]`.
    pub fn cross_reversed(&self, f: &S::Vector, g: &S::Vector, t: f64) -> Result<Complex64> {
        let beta = self.space.beta();
        let minus = move |e: f64| Complex64::from_polar(1.0, t * e) * (1.0 - forms::coth_weight(beta, e));
        let plus = move |e: f64| Complex64::from_polar(1.0, -t * e) * (1.0 + forms::coth_weight(beta, e));
        let rate = t.abs();
        let a = self.space.spectral(f, g, &minus, rate)?;
        let b = self.space.spectral(g, f, &plus, rate)?;
        Ok(0.25 * a - 0.25 * b)
    }

    /// `F(t + i·imag)` from the Gaussian form of `F`.
    pub fn correlation_continued(&self, f: &S::Vector, g: &S::Vector, t: f64, imag: f64) -> Result<Complex64> {
        if self.space.is_zero(f) || self.space.is_zero(g) {
            return self.correlation(f, g, t);
        }
        Ok(self.kms_prefactor(f, g)? * self.cross_continued(f, g, t, imag)?.exp())
    }

    /// `G(t) = ψ(α_t(W(g)) W(f))` from its Gaussian form.
    pub fn correlation_reversed(&self, f: &S::Vector, g: &S::Vector, t: f64) -> Result<Complex64> {
        if self.space.is_zero(f) || self.space.is_zero(g) {
            let a = self.automorphism_apply(t, &WeylWord::generator(g.clone()))?;
            let b = WeylWord::generator(f.clone());
            return self.word_expectation(&weyl::multiply(&self.space, &a, &b)?);
        }
        Ok(self.kms_prefactor(f, g)? * self.cross_reversed(f, g, t)?.exp())
    }

    pub fn kms(&self, f: &S::Vector, g: &S::Vector, t: f64) -> Result<KmsEvaluation> {
        Ok(KmsEvaluation {
            continued: self.correlation_continued(f, g, t, self.space.beta())?,
            reversed: self.correlation_reversed(f, g, t)?,
        })
    }

    /// `|F(t + iβ) − G(t)|` for `A = W(f)`, `B = W(g)`.
    pub fn kms_residual(&self, f: &S::Vector, g: &S::Vector, t: f64) -> Result<f64> {
        Ok(self.kms(f, g, t)?.residual())
    }

    /// `D(t) = |ψ(W(f) α_t(W(g))) − ψ(W(f)) ψ(W(g))|` on a time grid.
    pub fn cluster_diagnostic(&self, f: &S::Vector, g: &S::Vector, times: &[f64]) -> Result<Vec<f64>> {
        if self.space.is_zero(g) || self.space.is_zero(f) {
            return Ok(vec![0.0; times.len()]);
        }
        let product = (self.weyl_expectation(f)? * self.weyl_expectation(g)?).norm();
        let beta = self.space.beta();
        let q0 = self.space.condensate(f, g).re;
        times
            .iter()
            .map(|&t| {
                let weight = move |e: f64| Complex64::from_polar(1.0, t * e) * forms::coth_weight(beta, e);
                let cross = self.space.spectral(f, g, &weight, t.abs())?.re;
                let sigma = self.space.spectral(f, g, &move |e: f64| Complex64::from_polar(1.0, t * e), t.abs())?.im;
                let exponent = Complex64::new(-0.5 * cross - 0.5 * q0, -0.5 * sigma);
                Ok(product * (exponent.exp() - 1.0).norm())
            })
            .collect()
    }

    /// `lim D(t)` when the non-condensate cross terms have decayed:
    /// `|ψ(W f) ψ(W g)| · |e^{-Re q_0(f,g)/2} − 1|`.
    pub fn cluster_floor(&self, f: &S::Vector, g: &S::Vector) -> Result<f64> {
        let product = (self.weyl_expectation(f)? * self.weyl_expectation(g)?).norm();
        Ok(product * ((-0.5 * self.space.condensate(f, g).re).exp() - 1.0).abs())
    }

    /// `ψ(φ(f)) + Re m(f)` with `ψ(φ(f)) = -i d/dt ψ(W(tf))|_{t=0}`.
    pub fn selection_functional(&self, f: &S::Vector) -> Result<Selection> {
        let g = self.gaussian(f)?;
        // d/dt exp(-i t a - t² q/4) at 0 is -i a
        let analytic = -Complex64::i() * Complex64::new(0.0, -g.mean) + g.mean;
        let derivative = |h: f64| {
            let fwd = Gaussian { mean: h * g.mean, covariance: h * h * g.covariance }.expectation();
            let bwd = Gaussian { mean: -h * g.mean, covariance: h * h * g.covariance }.expectation();
            (fwd - bwd) / (2.0 * h)
        };
        let h = 1e-4;
        let coarse = derivative(h);
        let fine = derivative(0.5 * h);
        let extrapolated = (4.0 * fine - coarse) / 3.0;
        Ok(Selection {
            analytic,
            finite_difference: -Complex64::i() * extrapolated + g.mean,
            richardson_gap: (fine - coarse).norm(),
        })
    }
}

/// `ln(2 sinh x)` for `x > 0`, without overflow.
fn log_two_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x + (-(-2.0 * x).exp()).ln_1p()
    } else {
        (2.0 * x.sinh()).ln()
    }
}

/// One entry of a cutoff-removal sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffStep {
    pub kappa: f64,
    pub lambda: f64,
    pub mean: Complex64,
    /// `ψ_{κ,Λ}(W(f))`, absent when the covariance is infinite.
    pub value: Option<Complex64>,
    /// Distance to the previous step, in `ψ` when available, else in `m`.
    pub increment: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutoffSweep {
    pub steps: Vec<CutoffStep>,
    pub converged: bool,
    /// `ψ(W(f))` without cutoffs, when defined.
    pub limit: Option<Complex64>,
    pub failure: Option<String>,
}

impl CutoffSweep {
    pub fn last_increment(&self) -> Option<f64> {
        self.steps.last().and_then(|s| s.increment)
    }

    /// `|ψ_{κ_N,Λ_N} − ψ|` at the last step.
    pub fn limit_gap(&self) -> Option<f64> {
        Some((self.steps.last()?.value? - self.limit?).norm())
    }

    /// Whether the increments never grow along the sweep.
    pub fn monotone(&self) -> bool {
        let inc: Vec<f64> = self.steps.iter().filter_map(|s| s.increment).collect();
        inc.windows(2).all(|w| w[1] <= w[0])
    }
}

impl ThermalModel<ContinuumSpace> {
    /// Evaluates `ψ_{κ,Λ}(W(f))` along `(κ_j, Λ_j)` with the amplitude of
    /// the model's source. Converged means the increments never grow and the
    /// last one is below `tolerance`.
    pub fn cutoff_removal_sweep(
        &self,
        f: &RadialDirection,
        kappas: &[f64],
        lambdas: &[f64],
        tolerance: f64,
    ) -> Result<CutoffSweep> {
        if kappas.len() != lambdas.len() || kappas.is_empty() {
            return Err(Error::Unsupported("cutoff schedules must be nonempty and of equal length".into()));
        }
        let space = self.space();
        let amplitude = space.source().amplitude;
        let covariance = space.covariance(f, f);
        let mut failure = covariance.as_ref().err().map(|e| e.to_string());
        let mut steps: Vec<CutoffStep> = Vec::with_capacity(kappas.len());
        for (&kappa, &lambda) in kappas.iter().zip(lambdas) {
            let source = SourceCutoff::new(kappa, lambda).with_amplitude(amplitude);
            let mean = forms::mean_functional_radial(f, &source, space.dispersion(), space.quadrature())?;
            let value = covariance
                .as_ref()
                .ok()
                .map(|q| Gaussian { mean: mean.re, covariance: q.re }.expectation());
            let increment = steps.last().map(|prev| match (prev.value, value) {
                (Some(a), Some(b)) => (b - a).norm(),
                _ => (mean - prev.mean).norm(),
            });
            steps.push(CutoffStep { kappa, lambda, mean, value, increment });
        }
        let limit = match &covariance {
            Ok(_) => match self.weyl_expectation(f) {
                Ok(v) => Some(v),
                Err(e) => {
                    failure.get_or_insert(e.to_string());
                    None
                }
            },
            Err(_) => None,
        };
        let mut sweep = CutoffSweep { steps, converged: false, limit, failure };
        if sweep.failure.is_none() {
            let small = sweep.last_increment().map_or(true, |d| d <= tolerance);
            if !sweep.monotone() {
                sweep.failure = Some("increments are not monotone".into());
            } else if !small {
                sweep.failure = Some("increments did not fall below tolerance".into());
            } else {
                sweep.converged = true;
            }
        }
        Ok(sweep)
    }
}

/// Default `(κ_j, Λ_j)` schedule: `κ_j = 10^{-1-j/2}`, `Λ_j = 4 + j`.
pub fn default_cutoff_schedule(len: usize) -> (Vec<f64>, Vec<f64>) {
    let kappas = (0..len).map(|j| 10f64.powf(-1.0 - (j as f64) / 2.0)).collect();
    let lambdas = (0..len).map(|j| 4.0 + j as f64).collect();
    (kappas, lambdas)
}
