use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use strength_core::exactalg::FieldTag;
use strength_core::machinery::DEFAULT_BOX;
use strength_core::multilinear::Flavor;

#[derive(Parser, Debug)]
#[command(
    name = "strength",
    version,
    about = "Exact strength certificates and the covariant membership pipeline",
    after_help = "Exit codes: 0 success, 1 verification failure, 2 parse or input error, \
                  3 unsupported characteristic, 4 budget or search box exhausted, \
                  5 Y-branch (h(q0) = 0).\nRun `strength formats` for the file formats."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// `Q` or a prime; defaults to the input document's field, else Q
    #[arg(long, global = true)]
    pub field: Option<FieldTag>,
    /// Seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of candidate tuples for brute-force search
    #[arg(long, global = true, default_value_t = 5_000_000)]
    pub budget: u128,
    /// Half-width of the integer box searched for a direction
    #[arg(long = "box", global = true, default_value_t = DEFAULT_BOX)]
    pub search_box: i64,
    /// Write the produced document (certificate, tensor, presentation) here
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of text
    #[arg(long, global = true)]
    pub json: bool,
}

/// A tensor from a JSON document or, for sym, from polynomial text.
#[derive(Args, Debug)]
pub struct TensorInput {
    /// Tensor JSON file, or `-` for stdin
    pub input: Option<String>,
    /// Symmetric tensor as polynomial text, e.g. "x1^3 + x2^3"
    #[arg(long, conflicts_with = "input", requires = "d")]
    pub poly: Option<String>,
    /// Degree of the --poly tensor
    #[arg(long)]
    pub d: Option<u32>,
    /// Ambient dimension of the --poly tensor (default: largest variable index)
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a certificate's terms sum to its target
    Verify {
        /// Certificate JSON file, or `-` for stdin
        input: Option<String>,
    },
    /// Certificate from the trivial bounds
    Trivial(TensorInput),
    /// Exact strength of a degree-2 tensor
    Quad(TensorInput),
    /// Exact strength by exhaustive search over a prime field
    Brute {
        #[command(flatten)]
        tensor: TensorInput,
        /// Largest strength to try
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        /// Search on one thread
        #[arg(long)]
        serial: bool,
    },
    /// Derivative certificates of a symmetric certificate modulo its linear factors
    Leibniz {
        /// Certificate JSON file, or `-` for stdin
        input: Option<String>,
        /// A functional on V/W as comma-separated coordinates; repeatable
        /// (default: the coordinate functionals)
        #[arg(long = "x", allow_hyphen_values = true)]
        functionals: Vec<String>,
    },
    /// Certificate for everything but the top component over U + V
    Chop {
        #[command(flatten)]
        tensor: TensorInput,
        /// Dimension of U (one per slot for ord)
        #[arg(long = "dimU", alias = "dim-u", value_delimiter = ',', required = true)]
        dim_u: Vec<usize>,
    },
    /// Size N of the certificates produced by one pipeline layer
    Bound {
        #[arg(long)]
        flavor: Flavor,
        #[arg(long)]
        d: u32,
        /// Dimension of U (one per slot for ord)
        #[arg(long = "dimU", alias = "dim-u", value_delimiter = ',', required = true)]
        dim_u: Vec<usize>,
    },
    /// Degrees of a presentation and directional derivatives of its generators
    Derive {
        /// Presentation JSON file, or `-` for stdin
        input: Option<String>,
    },
    /// The covariant Ψ of a presentation, checked against direct expansion
    Psi {
        /// Presentation JSON file, or `-` for stdin
        input: Option<String>,
        /// Dimension of V for the identity check (one per slot for ord)
        #[arg(long = "dimV", alias = "dim-v", value_delimiter = ',')]
        dim_v: Option<Vec<usize>>,
        /// Random points for the identity check
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Certify sampled points (or one given point) of a presentation
    Pipeline {
        /// Presentation JSON file, or `-` for stdin
        input: Option<String>,
        /// Dimension of V (one per slot for ord)
        #[arg(long = "dimV", alias = "dim-v", value_delimiter = ',')]
        dim_v: Option<Vec<usize>>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Certify this tensor JSON instead of sampling
        #[arg(long)]
        tensor: Option<String>,
    },
    /// Reduce an integral presentation over Q modulo a prime
    Specialize {
        /// Presentation JSON file, or `-` for stdin
        input: Option<String>,
        #[arg(long)]
        prime: u64,
    },
    /// Build an example tensor, certificate or presentation
    Generate {
        family: Family,
        #[arg(long, default_value = "sym")]
        flavor: Flavor,
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// Number of variables or terms, depending on the family
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Number of products (border_strength)
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Rank bound (rank_locus)
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// Dimensions, overriding --n (one per slot for ord)
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
    },
    /// Describe the file formats, or list base coordinates
    Formats {
        /// Print the `c_k` table for --flavor, --d and --dims
        #[arg(long)]
        coords: bool,
        #[arg(long, default_value = "sym")]
        flavor: Flavor,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, value_delimiter = ',', default_value = "3")]
        dims: Vec<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
#[value(rename_all = "snake_case")]
pub enum Family {
    /// x1^d + ... + xn^d
    PowerSum,
    /// x1 y1 z1 + ... + xn yn zn
    TripleProduct,
    /// A sum of k random products, emitted with its certificate
    BorderStrength,
    /// The presentation of degree-2 tensors of rank at most --rank
    RankLocus,
    /// A tensor with random coordinates
    RandomDense,
}
