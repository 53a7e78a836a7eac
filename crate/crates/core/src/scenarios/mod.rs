//! Built-in systems and config-driven system ingestion.

mod builtin;
mod config;
mod function_space;
mod run;

use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::compactness::is_bounded;
use crate::covering::{finite_all_coverings_family, metric_chain_family, CoveringError};
use crate::dynamics::{DynamicsError, FilterBasis, PointMap, ScaleMap, System, TableMap};
use crate::pointset::PointSet;
use crate::space::{Space, SpaceError};

pub use builtin::{builtin, builtin_names};
pub use config::{
    ActionConfig, Expectations, ExpectedFailure, FamilyConfig, FilterConfig, GridConfig, NamedSet, ScenarioConfig,
    SpaceConfig, TestsetConfig,
};
pub use function_space::{
    composition_grid, pointwise_covering, pointwise_family, FunctionModel, FunctionSample, ModelMap, PointwiseLevel,
};
pub use run::{kind_name, run_scenario, RunOptions, ScenarioReport, Section, TestsetSummary};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unknown scenario {0}")]
    UnknownScenario(String),
    #[error("unknown test set {0}")]
    UnknownTestset(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Attractor(#[from] crate::attractor::AttractorError),
}

/// A built system with its test sets and declared expectations.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub system: System,
    /// Bounded test sets, in a fixed order.
    pub testsets: Vec<(String, PointSet)>,
    /// A second family of test sets drawn from an independent stream.
    pub alt_testsets: Vec<(String, PointSet)>,
    pub expected: Option<PointSet>,
    /// Points used by the uniform checks.
    pub uniform_points: PointSet,
}

/// Parses and builds a system from configuration text.
pub fn load_system(text: &str, seed: u64) -> Result<Scenario, ScenarioError> {
    let config = ScenarioConfig::from_toml(text).map_err(|e| ScenarioError::Schema(e.message().to_string()))?;
    build(config, seed)
}

/// Builds a scenario from a parsed configuration.
pub fn build(config: ScenarioConfig, seed: u64) -> Result<Scenario, ScenarioError> {
    let (space, model_map) = match &config.space {
        SpaceConfig::Metric { points, grid, metric } => {
            let space = match (points, grid) {
                (Some(p), None) => Space::metric(p.clone(), *metric)?,
                (None, Some(g)) => Space::grid_1d(g.start, g.step, g.count)?,
                _ => {
                    return Err(ScenarioError::Schema(
                        "metric space needs exactly one of points, grid".into(),
                    ))
                }
            };
            (space, None)
        }
        SpaceConfig::FiniteTopology { points, opens } => (Space::finite_topology(points.clone(), opens.clone())?, None),
        SpaceConfig::FunctionSpace { model } => {
            let (space, map) = model.build()?;
            (space, Some(map))
        }
    };
    let (family, finest_eps) = match &config.family {
        FamilyConfig::MetricChain { eps0, depth } => (
            metric_chain_family(&space, *eps0, *depth)?,
            Some(eps0 / 4f64.powi(*depth as i32)),
        ),
        FamilyConfig::AllCoverings => (finite_all_coverings_family(&space)?, None),
        FamilyConfig::Pointwise { levels } => (pointwise_family(&space, levels)?, levels.last().map(|l| l.eps)),
    };
    let filter = FilterBasis::new(
        config.filter.spec.clone(),
        config.semigroup.clone(),
        config.filter.depth,
        config.filter.budget,
    )?;
    let (map, tolerance): (Arc<dyn PointMap>, Option<f64>) = match &config.action {
        ActionConfig::Model { snap_tolerance } => {
            let m = model_map.ok_or_else(|| ScenarioError::Schema("model action needs a function space".into()))?;
            (Arc::new(m), snap_tolerance.or(finest_eps))
        }
        ActionConfig::Scale { factor, snap_tolerance } => {
            (Arc::new(ScaleMap { factor: *factor }), snap_tolerance.or(finest_eps))
        }
        ActionConfig::Maps { generators } => {
            let tables = generators
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|id| {
                            space
                                .index_of(id)
                                .ok_or_else(|| ScenarioError::Schema(format!("unknown point {id}")))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            (Arc::new(TableMap::new(tables, space.len())?), None)
        }
    };
    let system = System::new(space, family, filter, map, tolerance)?;

    let ids_to_set = |ids: &[String]| system.set_of(ids);
    let expected = config.expectations.attractor.as_deref().map(ids_to_set).transpose()?;
    let mut named = Vec::new();
    for n in &config.testsets.named {
        named.push((n.name.clone(), ids_to_set(&n.points)?));
    }
    let testsets = testsets(&system, &config.testsets, &named, seed)?;
    let alt_testsets = testsets_alt(&system, &config.testsets, &named, seed)?;
    let uniform_points = match config.expectations.uniform_radius {
        None => system.space().all(),
        Some(r) => PointSet::from_indices(
            system.len(),
            (0..system.len()).filter(|&p| system.space().coords(p).iter().all(|v| v.abs() <= r)),
        ),
    };
    Ok(Scenario {
        config,
        system,
        testsets,
        alt_testsets,
        expected,
        uniform_points,
    })
}

fn bounded(system: &System, y: &PointSet) -> bool {
    !y.is_empty() && is_bounded(y, system.family()).unwrap_or(false)
}

fn draw(
    system: &System,
    cfg: &TestsetConfig,
    named: &[(String, PointSet)],
    rng: &mut ChaCha8Rng,
    prefix: &str,
) -> Result<Vec<(String, PointSet)>, ScenarioError> {
    let n = system.len();
    let mut out = Vec::new();
    let whole = system.space().all();
    if cfg.include_space && bounded(system, &whole) {
        out.push(("X".to_string(), whole));
    }
    for (name, set) in named {
        if !bounded(system, set) {
            return Err(ScenarioError::Schema(format!("test set {name} is empty or unbounded")));
        }
        out.push((name.clone(), set.clone()));
    }
    let max = cfg.random_size.clamp(1, n);
    let mut made = 0;
    let mut tries = 0;
    while made < cfg.random && tries < cfg.random * 20 {
        tries += 1;
        let size = rng.gen_range(1..=max);
        let set = PointSet::from_indices(n, sample(rng, n, size));
        if bounded(system, &set) {
            out.push((format!("{prefix}{made}"), set));
            made += 1;
        }
    }
    Ok(out)
}

fn testsets(
    system: &System,
    cfg: &TestsetConfig,
    named: &[(String, PointSet)],
    seed: u64,
) -> Result<Vec<(String, PointSet)>, ScenarioError> {
    draw(system, cfg, named, &mut ChaCha8Rng::seed_from_u64(seed), "R")
}

fn testsets_alt(
    system: &System,
    cfg: &TestsetConfig,
    named: &[(String, PointSet)],
    seed: u64,
) -> Result<Vec<(String, PointSet)>, ScenarioError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    draw(system, cfg, named, &mut rng, "S")
}

impl Scenario {
    pub fn name(&self) -> &str {
        &self.config.name
    }

    /// Looks up a test set by name.
    pub fn testset(&self, name: &str) -> Result<&PointSet, ScenarioError> {
        self.testsets
            .iter()
            .find(|t| t.0 == name)
            .map(|t| &t.1)
            .ok_or_else(|| ScenarioError::UnknownTestset(name.to_string()))
    }
}
