//! Command-line flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "meshforge", version, about = "Exact string-node nets and dense meshes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a net or mesh truncation as JSON and OBJ.
    Gen(GenArgs),
    /// Regularity report for one net or mesh.
    Analyze(AnalyzeArgs),
    /// Regularity census with the expected classification.
    VerifyRegular(VerifyArgs),
    /// Extension of a net under a group of scalings.
    Extend(ExtendArgs),
    /// Laminar curl flex of the dyadic grid mesh.
    Flex(FlexArgs),
}

/// Net or mesh selection.
#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Catalog name, RCSR symbol, or `sierpinski`.
    #[arg(long, conflicts_with_all = ["net_json", "mesh", "mesh_json"])]
    pub net: Option<String>,
    /// Path to a JSON net descriptor.
    #[arg(long, value_name = "PATH")]
    pub net_json: Option<PathBuf>,
    /// `base@group` for a tensor mesh (e.g. `Z2@2^inf`) or `base/m` for a
    /// union of scalings (e.g. `kag/3`).
    #[arg(long)]
    pub mesh: Option<String>,
    /// Path to a JSON mesh spec.
    #[arg(long, value_name = "PATH")]
    pub mesh_json: Option<PathBuf>,
    /// Window radius, exact syntax such as `6`, `3/2` or `1+1/2 r3`.
    /// Defaults to twice the longest period for nets and 1 for meshes.
    #[arg(long)]
    pub radius: Option<String>,
    /// Mesh depth or Sierpinski depth.
    #[arg(long, default_value_t = 2)]
    pub depth: u32,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(flatten)]
    pub source: Source,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// File stem; defaults to a name derived from the input.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: Source,
    /// Write the report JSON here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogSet {
    #[value(name = "2d")]
    Planar,
    #[value(name = "3d")]
    Spatial,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Nets to check; overrides `--catalog`.
    #[arg(long)]
    pub net: Vec<String>,
    #[arg(long, value_enum, default_value_t = CatalogSet::All)]
    pub catalog: CatalogSet,
    #[arg(long, default_value = "8")]
    pub radius: String,
    /// Write the census JSON here.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExtendArgs {
    #[arg(long, conflicts_with = "net_json")]
    pub net: Option<String>,
    #[arg(long, value_name = "PATH")]
    pub net_json: Option<PathBuf>,
    /// Scaling generator; repeat for several.
    #[arg(long = "scale", required = true)]
    pub scales: Vec<String>,
    /// Word length of the scaling products.
    #[arg(long, default_value_t = 1)]
    pub depth: u32,
    /// Window radius; defaults to twice the longest period.
    #[arg(long)]
    pub radius: Option<String>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct FlexArgs {
    /// Largest curvature, below π/4.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_8)]
    pub kappa: f64,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    /// Depth of the dyadic grid mesh.
    #[arg(long, default_value_t = 3)]
    pub depth: u32,
    /// Seed of the collision sampler.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance on internodal length errors.
    #[arg(long, default_value_t = 1e-8)]
    pub length_tol: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Skip the per-step OBJ frames.
    #[arg(long)]
    pub no_frames: bool,
}
