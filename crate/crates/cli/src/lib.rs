//! Command-line frontend: argument model, command dispatch and report rendering.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use covdyn::attractor::AttractorKind;
use covdyn::dynamics::{omega_limit, HypothesisFailure, LimitSetReport};
use covdyn::report::{Budget, Check};
use covdyn::scenarios::{
    build, builtin, builtin_names, kind_name, load_system, run_scenario, RunOptions, Scenario, ScenarioConfig,
    ScenarioReport, Section,
};
use covdyn::suite::{
    finite_topology_inputs, grid_input, verify_axioms_on, Fault, Skipped, SpaceRun, SuiteInput, SuiteOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "covdyn",
    version,
    about = "Covering-uniformity dynamics on finite discretizations"
)]
pub struct Cli {
    /// Scenario configuration file (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Filter truncation depth.
    #[arg(long, global = true)]
    pub max_level: Option<usize>,
    /// Covering index up to which verdicts are certified.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    /// Cardinality cap of the star measure.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Sampled elements per filter level, or random subsets for the axiom suite.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Inputs {
    /// The 101-point grid with the ratio-1/4 chain.
    Grid,
    /// Every topology on at most three points.
    Topologies,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    RhoAsymmetry,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the proximity, boundedness and measure property suite.
    VerifyAxioms {
        /// Spaces to run on; ignored when --config is given.
        #[arg(long, value_enum, default_value_t = Inputs::Grid)]
        inputs: Inputs,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
    /// Limit set of a test set.
    Omega {
        #[arg(long)]
        target: String,
        /// Built-in scenario, when --config is not given.
        scenario: Option<String>,
    },
    /// Attractor construction, verification and classification.
    Attractor { scenario: Option<String> },
    /// Full report of a built-in scenario.
    Scenario { name: String },
}

/// A rendered report and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub body: String,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_USAGE,
            body: format!("error: {msg}\n"),
        }
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::VerifyAxioms { inputs, inject_fault } => verify_axioms(cli, *inputs, *inject_fault),
        Command::Omega { target, scenario } => omega(cli, target, scenario.as_deref()),
        Command::Attractor { scenario } => attractor(cli, scenario.as_deref(), false),
        Command::Scenario { name } => attractor(cli, Some(name), true),
    };
    result.unwrap_or_else(Outcome::usage)
}

fn read_config(cli: &Cli) -> Result<Option<String>, String> {
    match &cli.config {
        None => Ok(None),
        Some(p) => fs::read_to_string(p)
            .map(Some)
            .map_err(|e| format!("cannot read {}: {e}", p.display())),
    }
}

fn run_options(cli: &Cli) -> RunOptions {
    RunOptions {
        seed: cli.seed,
        max_level: cli.max_level,
        resolution: cli.resolution,
        cap: cli.cap,
        budget: cli.budget,
        ..RunOptions::default()
    }
}

fn scenario(cli: &Cli, name: Option<&str>) -> Result<Scenario, String> {
    let opts = run_options(cli);
    let mut config = match (read_config(cli)?, name) {
        (Some(text), None) => {
            let s = load_system(&text, cli.seed).map_err(|e| e.to_string())?;
            s.config
        }
        (None, Some(n)) => builtin(n).ok_or_else(|| {
            format!(
                "unknown scenario {n}; built-in scenarios: {}",
                builtin_names().join(", ")
            )
        })?,
        (Some(_), Some(_)) => return Err("give either a scenario name or --config, not both".into()),
        (None, None) => return Err("a scenario name or --config is required".into()),
    };
    opts.apply(&mut config);
    build(config, cli.seed).map_err(|e| e.to_string())
}

fn config_input(cli: &Cli, text: &str) -> Result<SuiteInput, String> {
    let mut config = ScenarioConfig::from_toml(text).map_err(|e| e.message().to_string())?;
    run_options(cli).apply(&mut config);
    let s = build(config, cli.seed).map_err(|e| e.to_string())?;
    Ok(SuiteInput {
        name: s.name().to_string(),
        space: s.system.space().clone(),
        family: s.system.family().clone(),
        subsets: s.testsets.iter().map(|t| t.1.clone()).collect(),
    })
}

#[derive(Serialize)]
struct AxiomsBody<'a> {
    command: &'static str,
    seed: u64,
    checks: &'a [Check],
    spaces: &'a [SpaceRun],
    skipped: &'a [Skipped],
}

fn verify_axioms(cli: &Cli, inputs: Inputs, fault: Option<FaultArg>) -> Result<Outcome, String> {
    let mut opts = SuiteOptions {
        seed: cli.seed,
        cap: cli.cap,
        fault: fault.map(|f| match f {
            FaultArg::RhoAsymmetry => Fault::RhoAsymmetry,
        }),
        ..SuiteOptions::default()
    };
    if let Some(b) = cli.budget {
        opts.random_subsets = b;
    }
    let (list, skipped): (Vec<SuiteInput>, Vec<Skipped>) = match read_config(cli)? {
        Some(text) => (vec![config_input(cli, &text)?], Vec::new()),
        None => match inputs {
            Inputs::Grid => (vec![grid_input(cli.seed, opts.random_subsets)], Vec::new()),
            Inputs::Topologies => finite_topology_inputs(3),
            Inputs::All => {
                let (mut l, s) = finite_topology_inputs(3);
                l.insert(0, grid_input(cli.seed, opts.random_subsets));
                (l, s)
            }
        },
    };
    let report = verify_axioms_on(&list, skipped, &opts);
    let code = if report.all_pass() { EXIT_OK } else { EXIT_VIOLATION };
    let body = match cli.format {
        Format::Json => json(&AxiomsBody {
            command: "verify-axioms",
            seed: cli.seed,
            checks: &report.summary,
            spaces: &report.spaces,
            skipped: &report.skipped,
        })?,
        Format::Csv => {
            let mut rows = Vec::new();
            for s in &report.spaces {
                rows.extend(s.checks.iter().map(|c| CheckRow::new(&s.name, c)));
            }
            csv_rows(&rows)?
        }
    };
    Ok(Outcome { code, body })
}

#[derive(Serialize)]
struct OmegaBody<'a> {
    command: &'static str,
    scenario: &'a str,
    target: &'a str,
    seed: u64,
    #[serde(flatten)]
    limit: &'a LimitSetReport,
}

fn omega(cli: &Cli, target: &str, name: Option<&str>) -> Result<Outcome, String> {
    let s = scenario(cli, name)?;
    let y = s.testset(target).map_err(|e| e.to_string())?;
    let limit = omega_limit(&s.system, y).map_err(|e| e.to_string())?;
    let body = match cli.format {
        Format::Json => json(&OmegaBody {
            command: "omega",
            scenario: s.name(),
            target,
            seed: cli.seed,
            limit: &limit,
        })?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                point: &'a str,
                element: String,
                source: &'a str,
                image: &'a str,
                resolution: usize,
                truncation: usize,
            }
            let rows: Vec<Row> = limit
                .points
                .iter()
                .map(|p| {
                    let w = limit.witnesses.iter().find(|w| &w.point == p);
                    Row {
                        point: p,
                        element: w.map(|w| w.element.to_string()).unwrap_or_default(),
                        source: w.map(|w| w.source.as_str()).unwrap_or(""),
                        image: w.map(|w| w.image.as_str()).unwrap_or(""),
                        resolution: limit.resolution,
                        truncation: limit.truncation,
                    }
                })
                .collect();
            csv_rows(&rows)?
        }
    };
    Ok(Outcome { code: EXIT_OK, body })
}

#[derive(Serialize)]
struct AttractorBody<'a> {
    command: &'static str,
    scenario: &'a str,
    seed: u64,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_kind: Option<&'static str>,
    constructed: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_attractor: Option<&'a [String]>,
    hypothesis_failures: &'a [HypothesisFailure],
    sections: Vec<&'a Section>,
    violations: &'a [String],
}

const ATTRACTOR_SECTIONS: [&str; 6] = [
    "hypotheses",
    "taxonomy",
    "global",
    "uniform",
    "constructed",
    "equivalence",
];

fn attractor(cli: &Cli, name: Option<&str>, full: bool) -> Result<Outcome, String> {
    let s = scenario(cli, name)?;
    let report = run_scenario(&s, &run_options(cli)).map_err(|e| e.to_string())?;
    let code = if report.ok() { EXIT_OK } else { EXIT_VIOLATION };
    let sections: Vec<&Section> = report
        .sections
        .iter()
        .filter(|sec| full || ATTRACTOR_SECTIONS.contains(&sec.name.as_str()))
        .collect();
    let body = match cli.format {
        Format::Json if full => json(&report)?,
        Format::Json => json(&AttractorBody {
            command: "attractor",
            scenario: &report.scenario,
            seed: report.seed,
            kind: kind_name(report.kind),
            expected_kind: report.expected_kind.map(kind_name),
            constructed: &report.constructed,
            expected_attractor: report.expected_attractor.as_deref(),
            hypothesis_failures: &report.hypothesis_failures,
            sections,
            violations: &report.violations,
        })?,
        Format::Csv => {
            let mut rows = vec![summary_row("kind", report.kind, &report)];
            for sec in sections {
                rows.extend(sec.checks.iter().map(|c| CheckRow::new(&sec.name, c)));
            }
            csv_rows(&rows)?
        }
    };
    Ok(Outcome { code, body })
}

fn summary_row(name: &str, kind: AttractorKind, report: &ScenarioReport) -> CheckRow {
    let matches = report.expected_kind.is_none_or(|k| k == kind);
    CheckRow {
        group: "summary".into(),
        name: name.into(),
        verdict: if matches { "pass" } else { "fail" }.into(),
        witness: kind_name(kind).into(),
        max_level: report.truncation,
        per_level: 0,
        resolution: report.resolution,
    }
}

#[derive(Serialize)]
struct CheckRow {
    group: String,
    name: String,
    verdict: String,
    witness: String,
    max_level: usize,
    per_level: usize,
    resolution: usize,
}

impl CheckRow {
    fn new(group: &str, c: &Check) -> Self {
        let Budget { max_level, per_level } = c.budget;
        CheckRow {
            group: group.into(),
            name: c.name.clone(),
            verdict: serde_json::to_value(c.verdict)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
            witness: c.witness.clone().unwrap_or_default(),
            max_level,
            per_level,
            resolution: c.resolution,
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| e.to_string())
}

fn csv_rows<T: Serialize>(rows: &[T]) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

/// Writes the body to `--out` or stdout and returns the exit code.
pub fn emit(cli: &Cli, outcome: &Outcome) -> i32 {
    if outcome.code == EXIT_USAGE {
        eprint!("{}", outcome.body);
        return EXIT_USAGE;
    }
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{}", outcome.body),
    }
    outcome.code
}
