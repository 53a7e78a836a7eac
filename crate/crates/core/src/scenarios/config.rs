//! Text configuration for systems and their expectations.

use serde::{Deserialize, Serialize};

use crate::attractor::AttractorKind;
use crate::dynamics::{Element, FilterSpec, SemigroupKind, WitnessSequence};
use crate::space::MetricKind;

use super::function_space::{FunctionModel, PointwiseLevel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub space: SpaceConfig,
    pub family: FamilyConfig,
    pub semigroup: SemigroupKind,
    pub action: ActionConfig,
    pub filter: FilterConfig,
    #[serde(default)]
    pub testsets: TestsetConfig,
    #[serde(default)]
    pub expectations: Expectations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceConfig {
    /// Explicit coordinates, or an evenly spaced one-dimensional grid.
    Metric {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<Vec<Vec<f64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridConfig>,
        #[serde(default = "default_metric")]
        metric: MetricKind,
    },
    FiniteTopology {
        points: Vec<String>,
        opens: Vec<Vec<String>>,
    },
    FunctionSpace {
        model: FunctionModel,
    },
}

fn default_metric() -> MetricKind {
    MetricKind::Euclidean
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyConfig {
    /// Balls of radius `eps0 4^-i`, `i = 0..=depth`.
    MetricChain {
        eps0: f64,
        depth: usize,
    },
    /// Every finite open covering of a finite topology.
    AllCoverings,
    Pointwise {
        levels: Vec<PointwiseLevel>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ActionConfig {
    /// The function model's own action.
    Model {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        snap_tolerance: Option<f64>,
    },
    Scale {
        factor: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        snap_tolerance: Option<f64>,
    },
    /// Generator maps as lists of point ids, one image per point.
    Maps { generators: Vec<Vec<String>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    pub spec: FilterSpec,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

fn default_depth() -> usize {
    12
}

fn default_budget() -> usize {
    32
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestsetConfig {
    /// Number of random bounded subsets.
    #[serde(default = "default_random")]
    pub random: usize,
    /// Largest random subset.
    #[serde(default = "default_random_size")]
    pub random_size: usize,
    /// Include the whole space when it is bounded.
    #[serde(default = "default_true")]
    pub include_space: bool,
    /// Named point sets, by point id.
    #[serde(default)]
    pub named: Vec<NamedSet>,
}

impl Default for TestsetConfig {
    fn default() -> Self {
        TestsetConfig {
            random: default_random(),
            random_size: default_random_size(),
            include_space: true,
            named: Vec::new(),
        }
    }
}

fn default_random() -> usize {
    50
}

fn default_random_size() -> usize {
    8
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedSet {
    pub name: String,
    pub points: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    /// Expected attractor, by point id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attractor: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<AttractorKind>,
    /// Element `t` with `cls(tB)` compact for bounded `B`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eventual_witness: Option<Element>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    /// Limit sets of bounded sets are invariant.
    #[serde(default)]
    pub omega_invariant: bool,
    /// Restricts the uniform checks to points whose values are at most this in absolute value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform_radius: Option<f64>,
    #[serde(default)]
    pub sequences: Vec<WitnessSequence>,
    /// Checks expected to fail, with the reason.
    #[serde(default)]
    pub expected_failures: Vec<ExpectedFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedFailure {
    pub check: String,
    pub reason: String,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }
}
