use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Robin-Laplacian stability toolkit: ball spectra, explicit constants and
/// finite-element checks of the quantitative inequality on planar domains.
///
/// Settings resolve as: command-line flags, then the `--config` TOML file,
/// then built-in defaults. ROBIN_STABILITY_THREADS caps the worker count.
#[derive(Debug, Parser)]
#[command(name = "robin-stability", version, allow_negative_numbers = true)]
pub struct Cli {
    /// TOML file with default values for the flags below
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Robin eigenvalues lambda_1 and lambda_2 of a ball
    BallEig(BallArgs),
    /// eta, gamma, delta and the radial gap estimate
    Constants(ConstantsArgs),
    /// Check the stability inequality on domain files
    Verify(VerifyArgs),
    /// Deficit against eps along a family R (1 + eps psi)
    Sharpness(SharpnessArgs),
    /// Neumann inequality and the alpha -> 0 limit of gamma
    NeumannLimit(NeumannArgs),
    /// Write the mesh of a domain file
    MeshDump(MeshArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct BallArgs {
    /// Dimension
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Radius
    #[arg(long = "R", default_value_t = 1.0)]
    pub radius: f64,
    /// Robin parameter (must be <= 0)
    #[arg(long)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ConstantsArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long = "R", default_value_t = 1.0)]
    pub radius: f64,
    /// Robin parameter in (-1/R, 0)
    #[arg(long)]
    pub alpha: f64,
    /// Asymmetry budgets in [0, 2] at which to evaluate the radial gap estimate
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<f64>,
}

/// Discretisation flags shared by the FEM commands.
#[derive(Debug, Args, Clone, Default)]
pub struct FemArgs {
    /// Mesh size of the coarse mesh; the fine mesh uses h/2 [default: 0.05]
    #[arg(long)]
    pub h: Option<f64>,
    /// Element order, 1 or 2 [default: 1]
    #[arg(long)]
    pub order: Option<u8>,
    /// Eigensolver residual tolerance [default: 1e-7]
    #[arg(long)]
    pub solver_tol: Option<f64>,
    /// Accuracy of the asymmetry search [default: 1e-8]
    #[arg(long)]
    pub asymmetry_tol: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    /// Domain files (repeatable or comma separated)
    #[arg(long, value_delimiter = ',')]
    pub domain: Vec<PathBuf>,
    /// Directory whose *.txt files are added to the domains
    #[arg(long, value_name = "DIR")]
    pub corpus: Option<PathBuf>,
    /// Robin parameters [default: -0.2,-0.5,-0.8]
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Vec<f64>,
    #[command(flatten)]
    pub fem: FemArgs,
    /// CSV output path; CSV goes to stdout when omitted
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SharpnessArgs {
    /// Cosine modes as `m` or `m=c` (coefficient 1 when omitted)
    #[arg(long, value_delimiter = ',', required = true)]
    pub mode: Vec<String>,
    #[arg(long = "R")]
    pub radius: Option<f64>,
    /// Robin parameter [default: -0.5]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Perturbation sizes [default: 0.02,0.03,0.05,0.07,0.1]
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    #[command(flatten)]
    pub fem: FemArgs,
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Write a log-log SVG plot of deficit against eps
    #[arg(long, value_name = "FILE")]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct NeumannArgs {
    #[arg(long)]
    pub domain: PathBuf,
    /// Negative Robin parameters approaching 0 [default: -1e-2,-1e-3,-1e-4]
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Vec<f64>,
    #[command(flatten)]
    pub fem: FemArgs,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct MeshArgs {
    #[arg(long)]
    pub domain: PathBuf,
    #[arg(long)]
    pub h: Option<f64>,
    /// Output path; stdout when omitted
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}
