use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "polycount",
    version,
    about = "Decompose polynomials over finite fields and count the decomposable ones"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Find the normal decompositions g ∘ h of a polynomial.
    Decompose(DecomposeArgs),
    /// Count decomposable polynomials of one degree exhaustively.
    Census(CensusArgs),
    /// Build or recover distinct-degree collisions in normal form.
    Ritt(RittArgs),
    /// Print the Dickson polynomial T_n(x, z).
    Dickson(DicksonArgs),
    /// Root statistics of t^(r+1) - u·t + u over a field.
    Bluher(BluherArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Auto,
    Tame,
    Wild,
    Brute,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    /// Field order q or p^e, optionally with a "/c0,...,1" modulus.
    #[arg(long)]
    pub field: String,
    #[arg(long)]
    pub poly: String,
    /// Degree of the left component g. All divisors are tried when absent.
    #[arg(long)]
    pub left_degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = Algorithm::Auto)]
    pub algorithm: Algorithm,
    /// Right components the exhaustive scan may try.
    #[arg(long, default_value_t = polycount::decompose::DEFAULT_BRUTE_BUDGET)]
    pub brute_budget: u64,
    #[arg(long, short)]
    pub verbose: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[arg(long)]
    pub field: String,
    /// One or more degrees, comma separated or repeated.
    #[arg(long, required = true, value_delimiter = ',', num_args = 1..)]
    pub degree: Vec<usize>,
    /// Emit q,d,count,alpha,ratio rows as CSV.
    #[arg(long, conflicts_with = "json")]
    pub table: bool,
    /// Check every applicable bound against the counts.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub json: bool,
    /// Worker threads; 0 uses every available core.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Budget "N[,B]": compositions and key bytes, each an integer or b^k.
    /// Defaults to $POLYCOUNT_BUDGET, then 2^28,2^31.
    #[arg(long)]
    pub budget: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Case {
    First,
    Second,
}

#[derive(Args, Debug)]
pub struct RittArgs {
    #[command(subcommand)]
    pub action: RittAction,
}

#[derive(Subcommand, Debug)]
pub enum RittAction {
    /// Build a collision from its parameters.
    Build(RittBuildArgs),
    /// Recover the parameters of a collision from its composite.
    Recover(RittRecoverArgs),
}

#[derive(Args, Debug)]
pub struct RittBuildArgs {
    #[arg(long, value_enum)]
    pub case: Case,
    #[arg(long)]
    pub field: String,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub m: usize,
    /// Monic witness of degree ⌊m/l⌋ (first case).
    #[arg(long, required_if_eq("case", "first"))]
    pub w: Option<String>,
    /// Nonzero Dickson parameter (second case).
    #[arg(long, required_if_eq("case", "second"))]
    pub z: Option<String>,
    #[arg(long, default_value = "0")]
    pub shift: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct RittRecoverArgs {
    #[arg(long, value_enum)]
    pub case: Case,
    #[arg(long)]
    pub field: String,
    #[arg(long)]
    pub poly: String,
    /// Degree of the right component h (first case).
    #[arg(long, required_if_eq("case", "first"))]
    pub l: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct DicksonArgs {
    #[arg(long)]
    pub field: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub z: String,
}

#[derive(Args, Debug)]
pub struct BluherArgs {
    #[arg(long)]
    pub field: String,
    /// Exponent k with r = p^k.
    #[arg(long)]
    pub dexp: u32,
    /// Also count roots for every u and compare.
    #[arg(long)]
    pub brute_check: bool,
    #[arg(long)]
    pub json: bool,
}
