use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twisted_h1::{Family, Isogeny, Method};

#[derive(Debug, Parser)]
#[command(
    name = "twisted-h1",
    version,
    about = "Cohomology of cyclic groups acting on simple groups by twisted diagram automorphisms"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: twisted_h1::Error| e.to_string())
}

fn parse_isogeny(s: &str) -> Result<Isogeny, String> {
    s.parse().map_err(|e: twisted_h1::Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: twisted_h1::Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct GroupArgs {
    /// Cartan type: A..G.
    #[arg(long = "type", value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub rank: usize,
    /// `sc` or `adjoint`.
    #[arg(long, value_parser = parse_isogeny, default_value = "sc")]
    pub isogeny: Isogeny,
    /// Order of the diagram automorphism: 1, 2 or 3.
    #[arg(long, default_value_t = 1)]
    pub tau_order: u32,
    /// Print the root datum as JSON instead of running the query.
    #[arg(long)]
    pub dump_datum: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OrderArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// Order of the generator of the cyclic group; a multiple of the automorphism order.
    #[arg(long)]
    pub m: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classes of H^1(Gamma, G) with representatives.
    H1 {
        #[command(flatten)]
        args: OrderArgs,
        #[arg(long, value_parser = parse_method, default_value = "auto")]
        method: Method,
        /// Cross-check against brute-force enumeration of the finite torus.
        #[arg(long)]
        verify: bool,
    },
    /// Invariant factors of H^1(Gamma, T).
    H1Torus {
        #[command(flatten)]
        args: OrderArgs,
    },
    /// Points of the fundamental alcove in (r/m) times the cocharacter lattice.
    Alcove {
        #[command(flatten)]
        args: OrderArgs,
    },
    /// Kac coordinates of level m/r.
    Kac {
        #[command(flatten)]
        args: OrderArgs,
        /// Quotient by the affine diagram symmetries (adjoint only).
        #[arg(long)]
        classes: bool,
    },
    /// Finite-order automorphisms in the outer class of tau, up to conjugacy.
    ClassifyAutos {
        #[command(flatten)]
        args: OrderArgs,
    },
    /// Moves a point into the fundamental alcove.
    Reduce {
        #[command(flatten)]
        group: GroupArgs,
        /// Comma-separated rationals in invariant coordinates, e.g. "1/2,3/4".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Automorphism attached to a rational point of the apartment.
    Parahoric {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
    },
    /// Connected components of the moduli of bundles for a ramified covering.
    Components {
        /// JSON file with `genus` and `orbits`.
        #[arg(long)]
        covering: PathBuf,
        #[arg(long, value_parser = parse_isogeny, default_value = "sc")]
        isogeny: Isogeny,
    },
    /// Whether a Galois covering with the given ramification exists.
    CoveringExists {
        #[arg(long)]
        genus: u64,
        /// Comma-separated ramification indices.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        indices: Vec<u64>,
    },
    /// Regenerates the reference tables and diffs them against expected values.
    PaperTables {
        /// Also list every passing check.
        #[arg(long)]
        verbose: bool,
    },
}
