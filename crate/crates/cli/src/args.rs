use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "helly", version, about = "Exact Helly-type checks for diameter, width and lattice predicates")]
pub struct Cli {
    /// Seed for every sampling path.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for subset enumeration.
    #[arg(long, global = true, env = "HELLY_JOBS")]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a predicate on every m-subset and on the whole family.
    Check(CheckArgs),
    /// Exact diameter of the intersection.
    Diameter(DiameterArgs),
    /// k colinear lattice points in the intersection.
    Lattice(LatticeArgs),
    /// Lift every member into a higher-dimensional family.
    Lift(LiftArgs),
    /// Emit an extremal family and its verification.
    Generate(GenerateArgs),
    /// The cap-volume constant gamma(c).
    Gamma(GammaArgs),
    /// The fractional constant beta(alpha, c, d).
    Beta(BetaArgs),
    /// Sequence of lower bounds on the diameter of the intersection.
    Certify(CertifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PredicateKind {
    Nonempty,
    Width,
    Diameter,
    Lattice,
    Colinear,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub family: Option<PathBuf>,
    #[arg(long, short = 'm')]
    pub subset_size: Option<usize>,
    #[arg(long, value_enum)]
    pub predicate: PredicateKind,
    /// Direction for `width`, comma separated.
    #[arg(long)]
    pub v: Option<String>,
    /// Threshold for `width` and `diameter`.
    #[arg(long, default_value = "1")]
    pub threshold: String,
    /// Norm for `diameter`: linf, l1, l2 or a norm file.
    #[arg(long, default_value = "linf")]
    pub norm: String,
    #[arg(long)]
    pub strict: bool,
    /// Number of colinear points for `colinear`.
    #[arg(long, short = 'k')]
    pub k: Option<usize>,
    /// Color classes for the colorful check; `--family`, if given, is the first.
    #[arg(long, num_args = 1..)]
    pub colorful: Vec<PathBuf>,
    #[arg(long, default_value_t = 2_000_000)]
    pub subset_cap: u128,
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct DiameterArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long, default_value = "linf")]
    pub norm: String,
}

#[derive(Args, Debug)]
pub struct LatticeArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long, short = 'k', default_value_t = 1)]
    pub k: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LiftKindArg {
    Width,
    Discrete,
    Boundary,
    Product,
}

#[derive(Args, Debug)]
pub struct LiftArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long, value_enum)]
    pub kind: LiftKindArg,
    /// Direction for width and discrete lifts; discrete lifts default to a
    /// direction generic on the box of radius `--radius`.
    #[arg(long)]
    pub v: Option<String>,
    #[arg(long, short = 'k', default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 64)]
    pub radius: u64,
    #[arg(long, default_value = "linf")]
    pub norm: String,
    #[arg(long, default_value_t = 0)]
    pub facet: usize,
    #[arg(long, short = 'o')]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    MinkowskiTight,
    DiscreteTight,
    NonpolytopeDemo,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub construction: Construction,
    /// `key=value` pairs, comma separated or repeated: `d`, `norm`, `n`, `m`.
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    pub params: Vec<String>,
    /// Family file to write; without it the family is printed with the verification.
    #[arg(long, short = 'o')]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GammaArgs {
    #[arg(long, num_args = 1.., required = true)]
    pub c: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    pub dmax: usize,
}

#[derive(Args, Debug)]
pub struct BetaArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, num_args = 1.., required = true)]
    pub c: Vec<f64>,
    #[arg(long, short = 'd')]
    pub d: usize,
    #[arg(long)]
    pub colorful: bool,
    #[arg(long, default_value_t = 200)]
    pub dmax: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    MinG,
    MaxG,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long, default_value = "linf")]
    pub norm: String,
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::MinG)]
    pub strategy: StrategyArg,
}
