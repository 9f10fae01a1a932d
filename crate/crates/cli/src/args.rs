use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "ramseylab", version, about = "Ramsey degrees, essential partitions and Ramsey entropies at desk scale")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Worker threads for colouring sweeps (results never depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Cap on colourings enumerated by a single sweep.
    #[arg(long = "budget-bell", global = true, default_value_t = 1_000_000)]
    pub budget_bell: u128,
    /// Cache directory; falls back to $RAMSEYLAB_CACHE. No caching when unset.
    #[arg(long = "cache-dir", global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Ignore cached reports and do not store new ones.
    #[arg(long = "no-cache", global = true)]
    pub no_cache: bool,
    /// Emit JSON (default).
    #[arg(long, global = true, conflicts_with = "tsv")]
    pub json: bool,
    /// Emit a tab-separated table (degree, entropy and structure listings).
    #[arg(long, global = true)]
    pub tsv: bool,
}

/// Where the category comes from: a JSON file or built-in name, or a
/// structure class.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct Source {
    /// Category JSON file, or a built-in name such as `E`.
    #[arg(long, conflicts_with = "class")]
    pub cat: Option<String>,
    /// Structure class: graph, poset, linord or digraph.
    #[arg(long)]
    pub class: Option<String>,
    /// Use every structure of the class with at most this many elements.
    #[arg(long = "n-max", alias = "universe")]
    pub n_max: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Structural,
    Embedding,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Entropy {
    Shannon,
    Boltzmann,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuitePart {
    All,
    Axioms,
    DegreeLaws,
    Theorems,
    Identity,
    Discrepancy,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Check a category file against the category laws.
    ValidateCat {
        file: String,
    },
    /// List the structures of a class up to a size, with automorphism counts
    /// and closed-form degrees.
    Structures {
        #[arg(long)]
        class: String,
        #[arg(long = "n-max")]
        n_max: usize,
    },
    /// List hom(A, B).
    Hom {
        #[command(flatten)]
        source: Source,
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
    },
    /// List the subobjects (B choose A) by representative.
    Subobj {
        #[command(flatten)]
        source: Source,
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
    },
    /// Decide C → (B)^A_{k,t}.
    Arrow {
        #[command(flatten)]
        source: Source,
        #[arg(long = "C")]
        c: String,
        #[arg(long = "B")]
        b: String,
        #[arg(long = "A")]
        a: String,
        #[arg(short = 'k', default_value_t = 2)]
        k: usize,
        #[arg(short = 't', default_value_t = 1)]
        t: usize,
        #[arg(long, value_enum, default_value_t = Kind::Structural)]
        kind: Kind,
    },
    /// Find the first C, in object order, with C → (B)^A_{k,t}.
    Witness {
        #[command(flatten)]
        source: Source,
        #[arg(long = "B")]
        b: String,
        #[arg(long = "A")]
        a: String,
        #[arg(short = 'k', default_value_t = 2)]
        k: usize,
        #[arg(short = 't', default_value_t = 1)]
        t: usize,
        #[arg(long, value_enum, default_value_t = Kind::Structural)]
        kind: Kind,
    },
    /// Ramsey degree of an object: exact on a finite category, bounded in a
    /// truncated universe, or closed-form from the oracle.
    Degree {
        #[command(flatten)]
        source: Source,
        /// Omit for a table of every object of a finite category.
        #[arg(long)]
        object: Option<String>,
        /// Require an exact answer (finite categories only).
        #[arg(long)]
        exact: bool,
        #[arg(long, value_enum, default_value_t = Kind::Structural)]
        kind: Kind,
        /// Colour count; defaults to the saturating value.
        #[arg(short = 'k')]
        k: Option<usize>,
        /// Largest colour count tried in a truncated universe.
        #[arg(long = "k-max", default_value_t = 2)]
        k_max: usize,
    },
    /// Decide whether a partition of (B choose A) is essential, or find the
    /// smallest essential partitions.
    Essential {
        #[command(flatten)]
        source: Source,
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        /// Candidate partition as blocks, e.g. `[[0,1],[2]]`.
        #[arg(long)]
        lambda: Option<String>,
        /// `literal`, `graded:K`, or `graded` together with `--k`.
        #[arg(long, default_value = "literal")]
        mode: String,
        #[arg(long)]
        k: Option<usize>,
        /// Extra objects C to test against (structure classes without --n-max).
        #[arg(long = "C")]
        c: Vec<String>,
        #[arg(long = "H", value_enum, default_value_t = Entropy::Boltzmann)]
        h: Entropy,
    },
    /// φ and the Ramsey entropy of an object.
    Entropy {
        #[command(flatten)]
        source: Source,
        /// Omit for a table of every object of a finite category.
        #[arg(long)]
        object: Option<String>,
        #[arg(long = "H", value_enum, default_value_t = Entropy::Boltzmann)]
        h: Entropy,
        /// `literal`, `graded:K`; the default grades each object at its
        /// saturating colour count.
        #[arg(long)]
        mode: Option<String>,
        /// Oracle route: largest structure size considered.
        #[arg(long)]
        truncation: Option<usize>,
        /// Oracle route on a product class: the second factor.
        #[arg(long)]
        product: Option<String>,
    },
    /// Run the validation suites over a corpus of categories.
    Suite {
        /// Directory of category JSON files; the built-in corpus otherwise.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Restrict the entropy-axiom check to one entropy.
        #[arg(long = "H", value_enum)]
        h: Option<Entropy>,
        #[arg(long, value_enum, default_value_t = SuitePart::All)]
        part: SuitePart,
    },
    /// Validate a functor table, decide its properties, and check that the
    /// Ramsey–Boltzmann entropy does not decrease along it.
    Functor {
        /// Functor JSON file.
        #[arg(conflicts_with = "builtin", required_unless_present = "builtin")]
        file: Option<PathBuf>,
        /// `ordered-graphs`, `collapse`, or `identity:NAME`.
        #[arg(long)]
        builtin: Option<String>,
        /// Run the entropy check even when a property fails.
        #[arg(long)]
        force: bool,
    },
    /// Inspect or maintain the report cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CacheAction {
    /// Entry count and total size.
    Stats,
    /// Drop stale-version entries, entries older than --max-age-days, then
    /// the oldest entries until the cache fits in --max-mb.
    Gc {
        #[arg(long = "max-mb")]
        max_mb: Option<u64>,
        #[arg(long = "max-age-days")]
        max_age_days: Option<u64>,
    },
    /// Recompute a sample of entries and compare them byte for byte.
    Verify {
        #[arg(long, default_value_t = 8)]
        sample: usize,
    },
    /// Remove every entry.
    Clear,
}
