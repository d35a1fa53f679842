use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Simulate spin-singlet correlations with quantum, local-ghost and
/// nonlocal-ghost models, and test them against the three-setting Bell bound.
///
/// Angles are in degrees. Monte Carlo results depend only on
/// (--seed, --samples, --workers).
#[derive(Debug, Parser)]
#[command(name = "ghostfield", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantum singlet correlation E = −a·b.
    Exact {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Local ghost field: closed form, sphere quadrature and signed Monte Carlo.
    Local {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value_t = LocalModel::QuasiLocal)]
        model: LocalModel,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Nonlocal ghost field: conditional matrix P(λa|λb) and sampled sequences.
    Nonlocal {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bell sum E(a,b) + E(a,c) + E(b,c) against the local bound 1 (JSON by default).
    Bell {
        #[arg(long, value_enum, default_value_t = BellModel::Quantum)]
        model: BellModel,
        /// Three directions "ax,ay,az;bx,by,bz;cx,cy,cz" (normalized);
        /// default is the trine at 0°, 120°, 240° in the x–z plane.
        #[arg(long, allow_hyphen_values = true)]
        directions: Option<String>,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate every model over an angle grid (CSV by default).
    Sweep {
        /// First angle in degrees.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        from: f64,
        /// Last angle in degrees (inclusive when on the grid).
        #[arg(long, default_value_t = 180.0, allow_hyphen_values = true)]
        to: f64,
        /// Grid step in degrees, > 0.
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        step: f64,
        /// Add signed Monte Carlo columns E_mc, mc_stderr for the quasi field.
        #[arg(long)]
        mc: bool,
        #[command(flatten)]
        mc_args: McArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Two correlated ±1 outcome sequences as CSV `trial,lambda_b,lambda_a`.
    Sequences {
        /// Analyzer angle in degrees.
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        /// Number of trials, ≥ 1.
        #[arg(long, default_value = "1000000", value_parser = parse_count)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Output file (default standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Angle between the analyzers in degrees (a = z, b in the x–z plane).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "directions")]
    pub alpha: Option<f64>,
    /// Two directions "ax,ay,az;bx,by,bz" (normalized).
    #[arg(long, allow_hyphen_values = true)]
    pub directions: Option<String>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// Monte Carlo samples, ≥ 1000 (accepts 1e6).
    #[arg(long, default_value = "1000000", value_parser = parse_count)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Parallel streams; results depend on this value.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    /// Gauss–Legendre nodes in cos θ.
    #[arg(long, default_value_t = 32)]
    pub quad_theta: usize,
    /// Uniform nodes in φ.
    #[arg(long, default_value_t = 64)]
    pub quad_phi: usize,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format; the default depends on the command.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (default standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LocalModel {
    /// δ²(n_a + n_b)/4π, correlation −a·b/3.
    NaiveLocal,
    /// 3δ²(n_a + n_b)/4π − 2/(4π)², correlation −a·b.
    QuasiLocal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BellModel {
    /// Singlet, E = −a·b.
    Quantum,
    /// Antiparallel local field, closed form.
    NaiveLocal,
    /// Antiparallel local field, signed Monte Carlo.
    NaiveLocalMc,
    /// Signed quasi-field, closed form.
    QuasiLocal,
    /// Signed quasi-field, sphere quadrature (--quad-theta × --quad-phi).
    QuasiLocalQuad,
    /// Signed quasi-field, signed Monte Carlo.
    QuasiLocalMc,
    /// Conditional matrix of the singlet.
    Nonlocal,
    /// Sampled outcome sequences from the singlet conditional matrix.
    NonlocalEmpirical,
    /// Fixed matrix [[5/12, 7/12], [7/12, 5/12]]: E = −1/6 per pair, S = −1/2.
    /// Sometimes written as −(1/3) cos 120°, which is +1/6; the sign here
    /// follows from the matrix.
    #[value(name = "counterexample-5-12")]
    Counterexample512,
}

impl BellModel {
    pub fn is_sampled(self) -> bool {
        matches!(self, Self::NaiveLocalMc | Self::QuasiLocalMc | Self::NonlocalEmpirical)
    }
}

/// Accepts a plain integer or an integral float such as `1e6`.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 => Ok(x as u64),
        _ => Err(format!("expected a non-negative integer, got '{s}'")),
    }
}
