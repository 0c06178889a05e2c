use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphmono::exact::rational::parse_pq;
use graphmono::Rational;
use num_bigint::BigInt;

#[derive(Debug, Parser)]
#[command(name = "graphmono", version, about = "Exact constructions and certified checks for graphs of continuous functions")]
pub struct Cli {
    /// Worker threads for parallel sections (default: one per core).
    #[arg(long, global = true, env = "GRAPHMONO_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a function and write it as JSON.
    Construct(ConstructArgs),
    /// Decide the oscillation condition P_c exactly.
    CheckPc(CheckPcArgs),
    /// Search for a triple violating graph monotonicity with constant c.
    Refute(RefuteArgs),
    /// Two-sided bracket of the graph-monotonicity constant.
    Bracket(BracketArgs),
    /// Certified refutation of the pointwise monotonicity condition at y.
    Mpoint(MpointArgs),
    /// Dini quotients on dyadic scales and knot-point evidence.
    Dini(DiniArgs),
    /// Classify a point against the sloped sets of the five-point construction.
    Classify(ClassifyArgs),
    /// Find a square of each 5:3 rectangle whose interior misses the graph.
    Avoid(AvoidArgs),
    /// Strong-porosity estimate of a sampled graph.
    Porosity(PorosityArgs),
    /// Box-counting dimension estimate of a sampled graph.
    Boxdim(BoxdimArgs),
    /// Rational bounds on the length of a piecewise-linear graph.
    Length(LengthArgs),
    /// Render a graph as SVG.
    Plot(PlotArgs),
    /// Regenerate every acceptance table under a fixed seed.
    Reproduce(ReproduceArgs),
    /// Re-check a certificate using only its own contents.
    Verify(VerifyArgs),
}

/// Rational from `p/q`, an integer, or a finite decimal.
#[derive(Debug, Clone, PartialEq)]
pub struct Q(pub Rational);

impl FromStr for Q {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some((int_part, frac)) = t.split_once('.') {
            let neg = int_part.starts_with('-');
            let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(format!("cannot parse rational from {s:?}"));
            }
            let n = BigInt::from_str(&digits).map_err(|e| e.to_string())?;
            let d = BigInt::from(10u32).pow(frac.len() as u32);
            let r = Rational::new(n, d);
            return Ok(Q(if neg { -r } else { r }));
        }
        parse_pq(t).map(Q).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Five-point refinement approximant f_n.
    Mzv,
    /// Peak-sum partial sum g_N.
    Peaks,
    /// Lacunary series without M-points.
    Nomp,
    /// Takagi function.
    Takagi,
}

/// Where the function comes from: a JSON file or a built-in construction.
#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// JSON written by `construct`, or a bare {"breakpoints", "values"} object.
    #[arg(long = "in", value_name = "PATH", conflicts_with = "kind", required_unless_present = "kind")]
    pub input: Option<PathBuf>,
    /// Built-in construction.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Refinement level (mzv) or last peak index (peaks).
    #[arg(long, default_value_t = 5)]
    pub level: u32,
    /// Margin search depth for the peak model.
    #[arg(long, default_value_t = 12)]
    pub grid: u32,
    /// Series truncation K.
    #[arg(long, default_value_t = 12)]
    pub truncation: u32,
    /// Series are sampled on the dyadic grid 2^-bits when a piecewise-linear
    /// view is needed.
    #[arg(long, default_value_t = 10)]
    pub sample_bits: u32,
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// JSON output path (stdout when absent).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 5)]
    pub level: u32,
    #[arg(long, default_value_t = 12)]
    pub grid: u32,
    #[arg(long, default_value_t = 12)]
    pub truncation: u32,
    #[arg(long, default_value_t = 10)]
    pub sample_bits: u32,
    #[command(flatten)]
    pub out: OutArgs,
    /// Breakpoints as CSV (x, y as p/q).
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckPcArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value = "1")]
    pub c: Q,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct RefuteArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub c: Q,
    /// Refinement rounds after the breakpoint screen.
    #[arg(long, default_value_t = graphmono::monotonicity::DEFAULT_BUDGET)]
    pub budget: u32,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct BracketArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = graphmono::monotonicity::DEFAULT_BUDGET)]
    pub budget: u32,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct MpointArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub y: Q,
    #[arg(long, default_value = "10")]
    pub c: Q,
    #[arg(long, default_value = "1/100")]
    pub eps: Q,
    /// Dyadic levels scanned for x and z.
    #[arg(long, default_value_t = 30)]
    pub mesh: u32,
    /// Depth used when evaluating the five-point limit.
    #[arg(long, default_value_t = 12)]
    pub depth: u32,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct DiniArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub x: Q,
    /// Scales h = 2^-levels, ..., 1/2.
    #[arg(long, default_value_t = 40)]
    pub levels: u32,
    /// Knot-point evidence threshold; adds a certificate to the output.
    #[arg(long)]
    pub threshold: Option<Q>,
    #[arg(long, default_value_t = 12)]
    pub depth: u32,
    #[command(flatten)]
    pub out: OutArgs,
    /// Quotient table (side, h, value, err).
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub x: Q,
    #[arg(long, default_value_t = 8)]
    pub depth: u32,
    /// Orbit steps for the digit-set test.
    #[arg(long, default_value_t = 1000)]
    pub max_steps: u32,
    /// Also certify the quotient oscillation at points outside the sloped sets.
    #[arg(long)]
    pub oscillation: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct AvoidArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// `left,bottom,base`; repeatable.
    #[arg(long = "rect", value_name = "L,B,BASE", required = true)]
    pub rects: Vec<String>,
    #[command(flatten)]
    pub out: OutArgs,
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PorosityArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Approximate number of graph samples.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.125,0.0625,0.03125,0.015625")]
    pub radii: Vec<f64>,
    /// Every k-th sample is used as a centre.
    #[arg(long, default_value_t = 500)]
    pub center_step: usize,
    /// Also probe centres shifted by r/2 off the graph.
    #[arg(long)]
    pub perturb: bool,
    #[arg(long, default_value_t = 24)]
    pub search_grid: u32,
    #[command(flatten)]
    pub out: OutArgs,
    /// Rows (cx, cy, r, yx, yy, q).
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoxdimArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 1.0 / 16384.0)]
    pub spacing: f64,
    #[arg(long, default_value_t = 1.0 / 4096.0)]
    pub side_min: f64,
    #[arg(long, default_value_t = 0.125)]
    pub side_max: f64,
    #[command(flatten)]
    pub out: OutArgs,
    /// Per-scale counts (side, count).
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LengthArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Binary digits of the square-root brackets.
    #[arg(long, default_value_t = 32)]
    pub bits: u32,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// SVG output path.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    /// Overlay the avoided square of each `left,bottom,base` rectangle.
    #[arg(long = "rect", value_name = "L,B,BASE")]
    pub rects: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Acceptance,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, value_enum, default_value = "acceptance")]
    pub suite: Suite,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON run configuration: {"seed": u64, "criteria": [ids]}.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Exit with status 1 if any criterion fails.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Certificate written by check-pc, refute, bracket, mpoint, dini or avoid.
    #[arg(long, value_name = "PATH")]
    pub cert: PathBuf,
}

#[cfg(test)]
mod tests {
    use super::*;
    use graphmono::exact::rational::ratio;

    #[test]
    fn rational_flags() {
        assert_eq!("3/4".parse::<Q>().unwrap().0, ratio(3, 4));
        assert_eq!("0.01".parse::<Q>().unwrap().0, ratio(1, 100));
        assert_eq!("-1.5".parse::<Q>().unwrap().0, ratio(-3, 2));
        assert_eq!("7".parse::<Q>().unwrap().0, ratio(7, 1));
        assert!("1/0".parse::<Q>().is_err());
        assert!("1.x".parse::<Q>().is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
