use clap::{Args, Parser, Subcommand, ValueEnum};
use fpp_env::Site;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "fpp", version, about = "Seeded first-passage-percolation environments, geodesics and checks")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Simple,
    Full,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, global = true, value_enum)]
    pub model: Option<ModelArg>,
    /// Bundled parameter set (simple-A, simple-B, full-A)
    #[arg(long, global = true, conflicts_with = "params")]
    pub preset: Option<String>,
    /// Parameter file in `key = value` form
    #[arg(long, global = true)]
    pub params: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Half-width r of the window [-r, r]^2
    #[arg(long, global = true)]
    pub window: Option<i64>,
    /// Largest sampled class
    #[arg(long, global = true)]
    pub cutoff: Option<u32>,
    /// Write artifacts into this directory instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Memory budget in bytes for one window
    #[arg(long, global = true, default_value_t = fpp_events::DEFAULT_BUDGET)]
    pub budget: u64,
}

pub fn parse_site(s: &str) -> Result<Site, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected X,Y, got `{s}`"))?;
    let p = |v: &str| v.trim().parse::<i64>().map_err(|e| format!("bad coordinate `{v}`: {e}"));
    Ok(Site::new(p(x)?, p(y)?))
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a parameter file or preset against the admissibility constraints
    ValidateParams(ValidateParamsArgs),
    /// Sample and thin an environment; dump it as JSON
    SampleEnv(SampleEnvArgs),
    /// Draw the bond field
    Render(RenderArgs),
    /// Exact geodesic between two sites
    Geodesic(GeodesicArgs),
    /// Geodesic tree and distance map from a root
    Tree(TreeArgs),
    /// Directional speeds and the limit-shape overlay
    Shape(ShapeArgs),
    /// Success-event detection at one class
    Events(EventsArgs),
    /// Success-event frequencies over a seed range
    Census(CensusArgs),
    /// Closed-form against exhaustive minimization of the corridor program
    LpVerify(LpVerifyArgs),
    /// Sampler calibration against closed forms
    DensityCheck(DensityArgs),
    /// Geodesic corridor check on a detected success event
    CorridorCheck(CorridorArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ValidateParams(_) => "validate-params",
            Command::SampleEnv(_) => "sample-env",
            Command::Render(_) => "render",
            Command::Geodesic(_) => "geodesic",
            Command::Tree(_) => "tree",
            Command::Shape(_) => "shape",
            Command::Events(_) => "events",
            Command::Census(_) => "census",
            Command::LpVerify(_) => "lp-verify",
            Command::DensityCheck(_) => "density-check",
            Command::CorridorCheck(_) => "corridor-check",
        }
    }
}

#[derive(Args, Debug)]
pub struct ValidateParamsArgs {
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SampleEnvArgs {
    /// Run the environment validators; exit 3 if any fails
    #[arg(long)]
    pub validate: bool,
    /// Random paths for the path lower bound
    #[arg(long, default_value_t = fpp_validators::DEFAULT_PATHS)]
    pub paths: usize,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    /// Pixels per lattice unit
    #[arg(long, default_value_t = 6.0)]
    pub scale: f64,
}

#[derive(Args, Debug)]
pub struct GeodesicArgs {
    #[arg(long, value_parser = parse_site, default_value = "0,0")]
    pub from: Site,
    #[arg(long, value_parser = parse_site)]
    pub to: Site,
    #[arg(long, default_value_t = 6.0)]
    pub scale: f64,
}

#[derive(Args, Debug)]
pub struct TreeArgs {
    #[arg(long, value_parser = parse_site, default_value = "0,0")]
    pub root: Site,
}

#[derive(Args, Debug)]
pub struct ShapeArgs {
    /// Largest fitted radius; the window is [-(radius+2), radius+2]^2
    #[arg(long, default_value_t = 200)]
    pub radius: i64,
    /// Radii per direction
    #[arg(long, default_value_t = 20)]
    pub points: usize,
}

#[derive(Args, Debug)]
pub struct EventsArgs {
    #[arg(long, short)]
    pub k: u32,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[arg(long, short, value_delimiter = ',', required = true)]
    pub k: Vec<u32>,
    /// Number of seeds, starting at --seed
    #[arg(long, default_value_t = 100)]
    pub seeds: u64,
}

#[derive(Args, Debug)]
pub struct LpVerifyArgs {
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 12)]
    pub max_demand: i64,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    /// Number of seeds, starting at --seed
    #[arg(long, default_value_t = 4000)]
    pub seeds: u64,
    #[arg(long, short, value_delimiter = ',')]
    pub k: Vec<u32>,
}

#[derive(Args, Debug)]
pub struct CorridorArgs {
    #[arg(long, short)]
    pub k: u32,
    /// Seeds to scan from --seed until a success event is found
    #[arg(long, default_value_t = 1)]
    pub search: u64,
}
