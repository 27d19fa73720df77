use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bounds::MomentSource;
use crate::distributions::{Family, RandomSequenceSpec};
use crate::error::{Error, Result};
use crate::event::Sided;
use crate::report::digest;
use crate::shape::{ScaleFunction, ShapeFunction, WeightSequence};
use crate::simulation::{TestFamily, DEFAULT_LEVEL};

/// Bound formulas selectable from a config.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundChoice {
    Theorem1,
    /// Applied to the positive-part process u_k.
    Rao,
    HajekRenyi,
    Amini,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundSection {
    #[serde(default = "default_kinds")]
    pub kinds: Vec<BoundChoice>,
    #[serde(default)]
    pub moments: MomentSource,
    /// Budget for estimated moment profiles; defaults to `replications`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment_replications: Option<usize>,
    /// Threshold of the max-type events; defaults to χ's ε.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default = "one")]
    pub m: usize,
    #[serde(default = "abs")]
    pub sided: Sided,
}

fn default_kinds() -> Vec<BoundChoice> {
    vec![BoundChoice::Theorem1]
}

fn one() -> usize {
    1
}

fn abs() -> Sided {
    Sided::Abs
}

impl Default for BoundSection {
    fn default() -> Self {
        Self {
            kinds: default_kinds(),
            moments: MomentSource::Auto,
            moment_replications: None,
            epsilon: None,
            m: 1,
            sided: Sided::Abs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    /// Each ε replaces both χ's ε and the max-event threshold; empty means
    /// "use the config as written".
    #[serde(default)]
    pub epsilons: Vec<f64>,
    #[serde(default = "default_level")]
    pub level: f64,
    /// Run the enumeration oracle when the state space allows it.
    #[serde(default = "yes")]
    pub exact: bool,
}

fn default_level() -> f64 {
    DEFAULT_LEVEL
}

fn yes() -> bool {
    true
}

impl Default for VerifySection {
    fn default() -> Self {
        Self {
            epsilons: Vec::new(),
            level: DEFAULT_LEVEL,
            exact: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DemiProcessChoice {
    S,
    U,
    V,
    /// φ(S_k⁺) with the config's φ.
    PhiOfSPlus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemiSection {
    #[serde(default = "default_process")]
    pub process: DemiProcessChoice,
    #[serde(default)]
    pub family: TestFamily,
    #[serde(default = "default_level")]
    pub level: f64,
}

fn default_process() -> DemiProcessChoice {
    DemiProcessChoice::S
}

impl Default for DemiSection {
    fn default() -> Self {
        Self {
            process: DemiProcessChoice::S,
            family: TestFamily::default(),
            level: DEFAULT_LEVEL,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SllnSection {
    /// Defaults to `[n]`.
    #[serde(default)]
    pub checkpoints: Vec<usize>,
    /// Defaults to the last checkpoint.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series_horizon: Option<usize>,
    /// Defaults to a tenth of the horizon.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_window: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumerateEvent {
    AllWithin,
    MaxExceeds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerateSection {
    #[serde(default = "default_enumerate_event")]
    pub event: EnumerateEvent,
    /// `>=` instead of `>` for the max event.
    #[serde(default)]
    pub inclusive: bool,
}

fn default_enumerate_event() -> EnumerateEvent {
    EnumerateEvent::AllWithin
}

impl Default for EnumerateSection {
    fn default() -> Self {
        Self {
            event: EnumerateEvent::AllWithin,
            inclusive: false,
        }
    }
}

/// One declarative experiment. Unknown keys are rejected at every level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: String,
    pub sequence: RandomSequenceSpec,
    pub phi: ShapeFunction,
    pub chi: ScaleFunction,
    pub weights: WeightSequence,
    pub replications: usize,
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub bound: BoundSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub demi: DemiSection,
    #[serde(default)]
    pub slln: SllnSection,
    #[serde(default)]
    pub enumerate: EnumerateSection,
}

impl ExperimentConfig {
    /// Parses TOML, or JSON when the path ends in `.json`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let config = if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)?
        } else {
            Self::from_toml(&text)?
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.sequence.validate()?;
        self.phi.validate()?;
        self.chi.validate()?;
        self.weights.materialize(self.sequence.n)?;
        if self.replications == 0 {
            return Err(Error::domain("replications", "must be >= 1"));
        }
        if self.bound.kinds.is_empty() {
            return Err(Error::Config("bound.kinds is empty".into()));
        }
        for &eps in self.verify.epsilons.iter().chain(&self.bound.epsilon) {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::domain("epsilon", format!("need epsilon > 0, got {eps}")));
            }
        }
        for (name, level) in [("verify.level", self.verify.level), ("demi.level", self.demi.level)] {
            if !(level > 0.0 && level < 1.0) {
                return Err(Error::domain(name, format!("need 0 < level < 1, got {level}")));
            }
        }
        if self.bound.m < 1 || self.bound.m > self.sequence.n {
            return Err(Error::IndexRange {
                m: self.bound.m,
                n: self.sequence.n,
            });
        }
        Ok(())
    }

    /// Digest of everything that determines the results; the output
    /// directory is excluded.
    pub fn digest(&self) -> String {
        let mut c = self.clone();
        c.out_dir = None;
        digest(&c)
    }

    pub fn spec(&self) -> RandomSequenceSpec {
        self.sequence
    }

    pub fn family(&self) -> Family {
        self.sequence.family
    }

    pub fn n(&self) -> usize {
        self.sequence.n
    }

    pub fn threshold(&self) -> f64 {
        self.bound.epsilon.unwrap_or_else(|| self.chi.epsilon())
    }

    pub fn moment_replications(&self) -> usize {
        self.bound.moment_replications.unwrap_or(self.replications)
    }

    pub fn checkpoints(&self) -> Vec<usize> {
        if self.slln.checkpoints.is_empty() {
            vec![self.n()]
        } else {
            self.slln.checkpoints.clone()
        }
    }
}

fn base(scenario: &str, family: Family, n: usize) -> ExperimentConfig {
    ExperimentConfig {
        scenario: scenario.into(),
        sequence: RandomSequenceSpec::iid(family, n),
        phi: ShapeFunction::AbsPower { nu: 1.0 },
        chi: ScaleFunction::Linear { epsilon: 1.0 },
        weights: WeightSequence::Power { beta: 1.0 },
        replications: 10_000,
        master_seed: 1,
        out_dir: None,
        bound: BoundSection::default(),
        verify: VerifySection::default(),
        demi: DemiSection::default(),
        slln: SllnSection::default(),
        enumerate: EnumerateSection::default(),
    }
}

pub const PRESETS: [&str; 6] = [
    "rademacher-n2-eps10",
    "rademacher-oracle",
    "amini-recovery",
    "stable-first-moment",
    "martingale-demi",
    "drift-demi",
];

/// Built-in scenarios.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let config = match name {
        "rademacher-n2-eps10" => {
            let mut c = base(name, Family::Rademacher, 2);
            c.chi = ScaleFunction::Linear { epsilon: 10.0 };
            c
        }
        "rademacher-oracle" => {
            let mut c = base(name, Family::Rademacher, 12);
            c.phi = ShapeFunction::AbsPower { nu: 2.0 };
            c.chi = ScaleFunction::Linear { epsilon: 2.0 };
            c.bound.kinds = vec![BoundChoice::Theorem1, BoundChoice::Rao, BoundChoice::HajekRenyi];
            c.verify.epsilons = vec![2.0, 5.0, 10.0];
            c
        }
        "amini-recovery" => {
            let mut c = base(name, Family::Gaussian { mu: 0.0, sigma: 1.0 }, 32);
            c.phi = ShapeFunction::AbsPower { nu: 2.0 };
            c.chi = ScaleFunction::Linear { epsilon: 5.0 };
            c.weights = WeightSequence::Power { beta: 1.5 };
            c.bound.kinds = vec![BoundChoice::Theorem1, BoundChoice::Amini];
            c.verify.epsilons = vec![2.0, 5.0, 10.0];
            c
        }
        "stable-first-moment" => {
            let family = Family::AlphaStable {
                alpha: 1.5,
                beta: 0.0,
                scale: 1.0,
            };
            let mut c = base(name, family, 100_000);
            c.weights = WeightSequence::Power { beta: 1.5 };
            c.replications = 200;
            c.slln.checkpoints = vec![1_000, 10_000, 100_000];
            c
        }
        "martingale-demi" => base(name, Family::Gaussian { mu: 0.0, sigma: 1.0 }, 8),
        "drift-demi" => {
            let mut c = base(name, Family::Gaussian { mu: -0.5, sigma: 1.0 }, 4);
            c.demi.family = TestFamily::constant_only();
            c
        }
        other => {
            return Err(Error::Config(format!(
                "unknown scenario `{other}`; presets: {}",
                PRESETS.join(", ")
            )))
        }
    };
    Ok(config)
}
