//! Command-line front end: region input, the planning run and plan output.

use std::path::{Path, PathBuf};

use covplan_core::{
    regions_of, run_pipeline, CoveragePlan, FirstLineMode, PipelineError, PlannerConfig,
};
use serde_json::json;
use thiserror::Error;

pub mod input;
pub mod output;
pub mod projection;

pub use input::{parse_region, CoordMode, ParsedRegion};
pub use output::{emit_outputs, read_plan_geojson, LineKind, PlanLine};
pub use projection::LocalProjection;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("chain {chain} is not closed (ends {gap} apart)")]
    OpenChain { chain: usize, gap: f64 },
    #[error("{0}")]
    Region(String),
    #[error("{0}")]
    Config(String),
    #[error("{stage}: {message}")]
    Pipeline {
        stage: &'static str,
        geometric: bool,
        message: String,
    },
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        CliError::Pipeline {
            stage: e.stage(),
            geometric: e.is_geometric(),
            message: e.to_string(),
        }
    }
}

impl CliError {
    /// 2 for unreadable or invalid input, 3 when valid input admits no plan.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Pipeline { geometric: true, .. } => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Parse(_) => "parse",
            CliError::OpenChain { .. } => "open_chain",
            CliError::Region(_) => "region",
            CliError::Config(_) => "config",
            CliError::Pipeline { .. } => "pipeline",
        }
    }

    /// One-line machine-readable description.
    pub fn to_json(&self) -> String {
        let mut v = json!({ "error": self.kind(), "message": self.to_string() });
        if let CliError::Pipeline { stage, .. } = self {
            v["stage"] = json!(stage);
        }
        v.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub input: PathBuf,
    pub wind_deg: f64,
    pub sweep_deg: Option<f64>,
    pub safe_distance: f64,
    pub swath: f64,
    pub sidelap: f64,
    pub first_line: FirstLineMode,
    pub origin: Option<(f64, f64)>,
    pub coords: CoordMode,
    pub out: PathBuf,
    /// Also write `<out>.skeleton.json`.
    pub dump_skeleton: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub plans: Vec<CoveragePlan>,
    pub projection: Option<LocalProjection>,
    pub files: Vec<PathBuf>,
}

pub fn config_from(opts: &Options) -> Result<PlannerConfig, CliError> {
    let spacing = covplan_core::spacing_from_overlap(opts.swath, opts.sidelap)
        .map_err(|e| CliError::Config(e.to_string()))?
        .with_mode(opts.first_line);
    if !opts.safe_distance.is_finite() || opts.safe_distance < 0.0 {
        return Err(CliError::Config(format!(
            "safe distance must be finite and non-negative, got {}",
            opts.safe_distance
        )));
    }
    Ok(PlannerConfig {
        wind_direction_deg: opts.wind_deg,
        sweep_angle_override_deg: opts.sweep_deg,
        safe_distance: opts.safe_distance,
        spacing,
    })
}

/// Parses the input, plans it and writes the outputs.
pub fn run(opts: &Options) -> Result<RunOutput, CliError> {
    let config = config_from(opts)?;
    let parsed = parse_region(&opts.input, opts.coords, opts.origin)?;
    let plans = run_pipeline(&parsed.input, &config)?;
    let mut files = emit_outputs(&plans, parsed.projection.as_ref(), &opts.out)?;
    if opts.dump_skeleton {
        let rois = regions_of(&parsed.input)?;
        let path = suffixed(&opts.out, ".skeleton.json");
        let text = output::skeleton_dump(&rois, opts.safe_distance)?;
        std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        files.push(path);
    }
    Ok(RunOutput {
        plans,
        projection: parsed.projection,
        files,
    })
}

fn suffixed(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}
