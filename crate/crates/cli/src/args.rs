use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "warpstab", version, about = "Curvature, slice stability and CMC thresholds for warped products")]
pub struct Cli {
    /// TOML run configuration; command-line flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

/// Model and run options shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// space_form, dss, rn, ellipsoid or hyperboloid.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Model-coordinate interval; `inf` and `-inf` select the cap.
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
    pub interval: Option<Vec<f64>>,
    /// Number of grid points.
    #[arg(long)]
    pub points: Option<usize>,
    /// Spherical quadrature order.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write CSV here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Also write an SVG line plot.
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    /// `r,H2_slice,H2_required,margin,stable_slice`
    Threshold,
    /// `t,h,k_tan,k_rad,scal,ric_nu_minus1,brendle_lhs,brendle_rhs`
    Curvature,
    /// `t,h,hp,hpp,residual`
    Trajectory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Curvature,
    Embedding,
    Integrals,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    I,
    Ii,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate slice thresholds, curvatures or the ODE trajectory as CSV.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "threshold")]
        table: Table,
        /// Trajectory length in arc length.
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        /// Trajectory step.
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Place an interval in the window, threshold or inapplicable regime.
    Classify {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Jacobi spectrum, thresholds and integral checks for one slice.
    Slice {
        #[command(flatten)]
        model: ModelArgs,
        /// Model coordinate of the slice.
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        /// Mean curvature to test against the slice hypothesis instead of the
        /// slice's own `h'/h`.
        #[arg(long, allow_hyphen_values = true)]
        h: Option<f64>,
        #[arg(long, default_value_t = 8)]
        l_max: usize,
    },
    /// Mean-curvature thresholds, from `(eps, a)`, `(delta, a)` or a model.
    Threshold {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        /// Mean curvature to compare with the threshold.
        #[arg(long, allow_hyphen_values = true)]
        h: Option<f64>,
        #[arg(long, value_enum)]
        case: Option<CaseArg>,
    },
    /// Check closed forms against the finite-difference oracle.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// Meridian `(t, f, h)` of the flat codimension-one embedding.
    Embed {
        #[command(flatten)]
        model: ModelArgs,
    },
}
