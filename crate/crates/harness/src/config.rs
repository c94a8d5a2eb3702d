//! Run configuration. One TOML document holds every experiment's section;
//! the subcommand decides which section is read.

use crate::error::{HarnessError, HarnessResult};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use vanhove_core::quadrature::QuadratureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExperimentKind {
    VerifyBounded,
    Relations,
    Kms,
    Cluster,
    IrTable,
    CutoffSweep,
    Selection,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::VerifyBounded,
        ExperimentKind::Relations,
        ExperimentKind::Kms,
        ExperimentKind::Cluster,
        ExperimentKind::IrTable,
        ExperimentKind::CutoffSweep,
        ExperimentKind::Selection,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::VerifyBounded => "verify-bounded",
            ExperimentKind::Relations => "relations",
            ExperimentKind::Kms => "kms",
            ExperimentKind::Cluster => "cluster",
            ExperimentKind::IrTable => "ir-table",
            ExperimentKind::CutoffSweep => "cutoff-sweep",
            ExperimentKind::Selection => "selection",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|k| k.name() == name)
    }

    /// The statements the experiment checks.
    pub fn claims(&self) -> &'static str {
        match self {
            ExperimentKind::VerifyBounded => {
                "Grand-canonical expectations of the bounded van Hove system in closed form (one- and two-point \
                 functions of fields and Weyl operators, resolvent averages) equal truncated Fock-space traces; \
                 erfc closed form of the resolvent average equals its Laplace quadrature; the dressed ground \
                 energy is -sum rho^2/(2 omega^2)."
            }
            ExperimentKind::Relations => {
                "Weyl relations and all resolvent relations hold for the Fock-space matrices (zero direction, \
                 adjoint, scaling, resolvent identity, commutator, product, same-direction commutation); the \
                 dynamics cocycle M_{t+u}(f) = M_u(e^{it omega} f) + M_t(f) and the group law of the automorphisms."
            }
            ExperimentKind::Kms => {
                "The limiting state is beta-KMS for the van Hove dynamics: F(t + i beta) = G(t) for Weyl \
                 generators on bounded and cutoff-free infinite systems, and for resolvent generators via Laplace \
                 transforms."
            }
            ExperimentKind::Cluster => {
                "Time cluster property versus condensation: without condensate the correlation defect decays, \
                 with a condensate and nonvanishing zero-momentum components it stays bounded away from zero."
            }
            ExperimentKind::IrTable => {
                "Dispersion no-go: for omega = |k|^s with s > 2 every physical direction has f(0) = 0, so the \
                 condensate form vanishes on physical directions and the condensate ideal lies inside the \
                 infrared ideal; no such containment for 1 <= s <= 2."
            }
            ExperimentKind::CutoffSweep => {
                "Removal of infrared and ultraviolet source cutoffs: the cutoff Weyl expectations form a Cauchy \
                 sequence converging to the infinite-volume closed form for admissible directions, and fail to \
                 for inadmissible ones."
            }
            ExperimentKind::Selection => {
                "Selection criterion for physical phonons: the shifted field phi(f) + Re m(f) has vanishing \
                 expectation in the limiting state."
            }
        }
    }

    pub fn randomized(&self) -> bool {
        !matches!(self, ExperimentKind::Cluster | ExperimentKind::CutoffSweep)
    }
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    pub nodes: usize,
    pub origin_levels: usize,
    pub origin_scale: f64,
    pub panel_width: f64,
    pub truncation_radius: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let s = QuadratureSpec::default();
        Self {
            nodes: s.nodes,
            origin_levels: s.origin_levels,
            origin_scale: s.origin_scale,
            panel_width: s.panel_width,
            truncation_radius: s.truncation_radius,
            abs_tol: s.abs_tol,
            rel_tol: s.rel_tol,
        }
    }
}

impl QuadratureConfig {
    pub fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            nodes: self.nodes,
            origin_levels: self.origin_levels,
            origin_scale: self.origin_scale,
            panel_width: self.panel_width,
            truncation_radius: self.truncation_radius,
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundedConfig {
    pub mode_counts: Vec<usize>,
    /// Occupation cap for 1, 2 and 3 modes.
    pub n_max: [usize; 3],
    pub betas: Vec<f64>,
    pub amplitudes: Vec<f64>,
    /// Absolute floor of the oracle tolerance `max(floor, 3 × estimate)`.
    pub floor: f64,
    pub closed_form_draws: usize,
    pub closed_form_tolerance: f64,
    pub ground_tolerance: f64,
}

impl Default for BoundedConfig {
    fn default() -> Self {
        Self {
            mode_counts: vec![1, 2, 3],
            n_max: [64, 32, 10],
            betas: vec![0.5, 1.0, 2.0],
            amplitudes: vec![0.0, 1.0],
            floor: 1e-6,
            closed_form_draws: 100,
            closed_form_tolerance: 1e-8,
            ground_tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RelationsConfig {
    pub resolvent_draws: usize,
    /// How many of the resolvent draws use two modes.
    pub resolvent_pair_draws: usize,
    pub resolvent_n_max: [usize; 2],
    pub weyl_draws: usize,
    pub weyl_pair_draws: usize,
    pub weyl_n_max: [usize; 2],
    pub n_low: usize,
    pub tolerance: f64,
    pub same_direction_tolerance: f64,
    pub phase_tolerance: f64,
    pub cocycle_draws: usize,
    pub cocycle_tolerance: f64,
    pub group_draws: usize,
    pub group_tolerance: f64,
}

impl Default for RelationsConfig {
    fn default() -> Self {
        Self {
            resolvent_draws: 200,
            resolvent_pair_draws: 30,
            resolvent_n_max: [120, 20],
            weyl_draws: 200,
            weyl_pair_draws: 60,
            weyl_n_max: [40, 16],
            n_low: 4,
            tolerance: 1e-8,
            same_direction_tolerance: 1e-10,
            phase_tolerance: 1e-13,
            cocycle_draws: 200,
            cocycle_tolerance: 1e-12,
            group_draws: 100,
            group_tolerance: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KmsConfig {
    pub lattice_draws: usize,
    pub continuum_draws: usize,
    pub resolvent_lattice_draws: usize,
    pub resolvent_continuum_draws: usize,
    /// Times are drawn from `[-time_range, time_range]`.
    pub time_range: f64,
    pub tolerance: f64,
    pub resolvent_tolerance: f64,
}

impl Default for KmsConfig {
    fn default() -> Self {
        Self {
            lattice_draws: 50,
            continuum_draws: 50,
            resolvent_lattice_draws: 8,
            resolvent_continuum_draws: 4,
            time_range: 2.0,
            tolerance: 1e-8,
            resolvent_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClusterConfig {
    pub beta: f64,
    pub exponent: f64,
    /// Width of the Gaussian profiles `e^{-r²/(2w²)}`, both with value 1 at the origin.
    pub width: f64,
    pub horizon: f64,
    pub points: usize,
    pub decay_threshold: f64,
    pub floor_threshold: f64,
    /// Condensate density of the condensed branch, in units of `density_unit`.
    pub condensate_density: f64,
    /// Density unit; the default makes `q_0(f) = n_0 |f̂(0)|²`.
    pub density_unit: f64,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        Self {
            beta: 1.0,
            exponent: 1.0,
            width: 0.5,
            horizon: 400.0,
            points: 41,
            decay_threshold: 1e-3,
            floor_threshold: 1e-2,
            condensate_density: 1.0,
            density_unit: 1.0 / (2.0 * (2.0 * std::f64::consts::PI).powi(3)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IrTableConfig {
    pub exponents: Vec<f64>,
    pub family_draws: usize,
    /// Exponents above 2 used for the randomized containment check.
    pub family_exponents: Vec<f64>,
    pub condensate_density: f64,
}

impl Default for IrTableConfig {
    fn default() -> Self {
        Self {
            exponents: vec![1.0, 1.5, 2.0, 2.5, 3.0],
            family_draws: 100,
            family_exponents: vec![2.25, 2.5, 3.0, 4.0],
            condensate_density: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CutoffSweepConfig {
    pub steps: usize,
    pub beta: f64,
    pub exponent: f64,
    pub tolerance: f64,
    pub limit_tolerance: f64,
}

impl Default for CutoffSweepConfig {
    fn default() -> Self {
        Self { steps: 15, beta: 1.0, exponent: 1.0, tolerance: 1e-8, limit_tolerance: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SelectionConfig {
    pub continuum_draws: usize,
    pub lattice_draws: usize,
    pub analytic_tolerance: f64,
    pub finite_difference_tolerance: f64,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        Self { continuum_draws: 35, lattice_draws: 15, analytic_tolerance: 1e-10, finite_difference_tolerance: 1e-7 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// When present it must match the subcommand.
    pub experiment: Option<String>,
    pub seed: Option<u64>,
    /// Overrides the primary tolerance of the experiment.
    pub tolerance: Option<f64>,
    pub out: Option<PathBuf>,
    /// Hard cap on the Fock dimension; falls back to the environment.
    pub dimension_cap: Option<usize>,
    pub quadrature: QuadratureConfig,
    pub bounded: BoundedConfig,
    pub relations: RelationsConfig,
    pub kms: KmsConfig,
    pub cluster: ClusterConfig,
    pub ir_table: IrTableConfig,
    pub cutoff_sweep: CutoffSweepConfig,
    pub selection: SelectionConfig,
}

pub const DEFAULT_SEED: u64 = 1;

impl RunConfig {
    /// Configuration used when no file is given.
    pub fn builtin() -> Self {
        Self { seed: Some(DEFAULT_SEED), ..Self::default() }
    }

    pub fn parse(text: &str) -> HarnessResult<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| 1 + text[..s.start.min(text.len())].matches('\n').count());
            let msg = e.message().trim().to_string();
            match line {
                Some(l) => HarnessError::Config(format!("line {l}: {msg}")),
                None => HarnessError::Config(msg),
            }
        })
    }

    pub fn load(path: &std::path::Path) -> HarnessResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Applies the experiment's primary tolerance override.
    pub fn with_tolerance(mut self, kind: ExperimentKind, tol: f64) -> Self {
        match kind {
            ExperimentKind::VerifyBounded => self.bounded.floor = tol,
            ExperimentKind::Relations => self.relations.tolerance = tol,
            ExperimentKind::Kms => self.kms.tolerance = tol,
            ExperimentKind::Cluster => self.cluster.decay_threshold = tol,
            ExperimentKind::IrTable => {}
            ExperimentKind::CutoffSweep => self.cutoff_sweep.tolerance = tol,
            ExperimentKind::Selection => self.selection.analytic_tolerance = tol,
        }
        self
    }

    /// Checks the parts of the schema that types cannot express.
    pub fn validate(&self, kind: ExperimentKind) -> HarnessResult<()> {
        if let Some(name) = &self.experiment {
            if ExperimentKind::from_name(name) != Some(kind) {
                return Err(HarnessError::Config(format!(
                    "key `experiment`: config is for `{name}` but `{kind}` was requested"
                )));
            }
        }
        if kind.randomized() && self.seed.is_none() {
            return Err(HarnessError::Config(format!("key `seed`: required for the randomized experiment `{kind}`")));
        }
        if let Some(t) = self.tolerance {
            positive("tolerance", t)?;
        }
        if self.quadrature.nodes < 2 {
            return Err(HarnessError::Config("key `quadrature.nodes`: at least 2 nodes required".into()));
        }
        match kind {
            ExperimentKind::VerifyBounded => {
                let b = &self.bounded;
                for &m in &b.mode_counts {
                    if !(1..=3).contains(&m) {
                        return Err(HarnessError::Config(format!("key `bounded.mode_counts`: {m} not in 1..=3")));
                    }
                }
                for &beta in &b.betas {
                    positive("bounded.betas", beta)?;
                }
                positive("bounded.floor", b.floor)?;
            }
            ExperimentKind::Relations => {
                let r = &self.relations;
                if r.resolvent_pair_draws > r.resolvent_draws || r.weyl_pair_draws > r.weyl_draws {
                    return Err(HarnessError::Config("key `relations`: more two-mode draws than draws".into()));
                }
                positive("relations.tolerance", r.tolerance)?;
            }
            ExperimentKind::Kms => {
                positive("kms.tolerance", self.kms.tolerance)?;
                positive("kms.time_range", self.kms.time_range)?;
            }
            ExperimentKind::Cluster => {
                let c = &self.cluster;
                positive("cluster.beta", c.beta)?;
                positive("cluster.width", c.width)?;
                positive("cluster.horizon", c.horizon)?;
                positive("cluster.density_unit", c.density_unit)?;
                if c.points < 2 {
                    return Err(HarnessError::Config("key `cluster.points`: at least 2 grid points".into()));
                }
            }
            ExperimentKind::IrTable => {
                for &s in self.ir_table.exponents.iter().chain(&self.ir_table.family_exponents) {
                    positive("ir_table.exponents", s)?;
                }
                if self.ir_table.family_exponents.iter().any(|&s| s <= 2.0) {
                    return Err(HarnessError::Config("key `ir_table.family_exponents`: exponents must exceed 2".into()));
                }
            }
            ExperimentKind::CutoffSweep => {
                positive("cutoff_sweep.beta", self.cutoff_sweep.beta)?;
                if self.cutoff_sweep.steps < 2 {
                    return Err(HarnessError::Config("key `cutoff_sweep.steps`: at least 2 steps".into()));
                }
            }
            ExperimentKind::Selection => {}
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }
}

fn positive(key: &str, v: f64) -> HarnessResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(HarnessError::Config(format!("key `{key}`: expected a positive number, got {v}")))
    }
}

/// Default configuration of one experiment as TOML, for `list`.
pub fn default_toml(kind: ExperimentKind) -> String {
    let c = RunConfig::builtin();
    let section = match kind {
        ExperimentKind::VerifyBounded => toml::Value::try_from(&c.bounded),
        ExperimentKind::Relations => toml::Value::try_from(&c.relations),
        ExperimentKind::Kms => toml::Value::try_from(&c.kms),
        ExperimentKind::Cluster => toml::Value::try_from(&c.cluster),
        ExperimentKind::IrTable => toml::Value::try_from(&c.ir_table),
        ExperimentKind::CutoffSweep => toml::Value::try_from(&c.cutoff_sweep),
        ExperimentKind::Selection => toml::Value::try_from(&c.selection),
    }
    .expect("defaults serialize");
    let key = match kind {
        ExperimentKind::VerifyBounded => "bounded",
        ExperimentKind::IrTable => "ir_table",
        ExperimentKind::CutoffSweep => "cutoff_sweep",
        other => other.name(),
    };
    let mut doc = toml::map::Map::new();
    doc.insert("experiment".into(), toml::Value::String(kind.name().into()));
    doc.insert("seed".into(), toml::Value::Integer(DEFAULT_SEED as i64));
    doc.insert(key.into(), section);
    toml::to_string(&toml::Value::Table(doc)).expect("defaults serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults_without_seed() {
        let c = RunConfig::parse("").unwrap();
        assert_eq!(c.seed, None);
        assert_eq!(c.bounded, BoundedConfig::default());
        assert!(c.validate(ExperimentKind::Relations).is_err());
        assert!(c.validate(ExperimentKind::Cluster).is_ok());
    }

    #[test]
    fn parse_error_reports_line_and_key() {
        let err = RunConfig::parse("seed = 3\n[relations]\ndraws = 5\n").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        assert!(err.contains("draws"), "{err}");
    }

    #[test]
    fn experiment_key_must_match() {
        let c = RunConfig::parse("experiment = \"kms\"\nseed = 1\n").unwrap();
        assert!(c.validate(ExperimentKind::Kms).is_ok());
        assert!(c.validate(ExperimentKind::Relations).is_err());
    }

    #[test]
    fn default_documents_round_trip() {
        for kind in ExperimentKind::ALL {
            let text = default_toml(kind);
            let c = RunConfig::parse(&text).unwrap();
            c.validate(kind).unwrap();
            assert_eq!(c.experiment.as_deref(), Some(kind.name()));
        }
    }
}
