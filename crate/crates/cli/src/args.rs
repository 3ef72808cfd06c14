use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "arbor", version, about = "Normal arborescences in digraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
    /// Output format; JSON unless stated otherwise.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Debug, Args)]
pub struct HostTree {
    #[arg(short = 'd', long = "digraph")]
    pub digraph: PathBuf,
    #[arg(short = 't', long = "tree")]
    pub tree: PathBuf,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// A family name, or a family spec JSON file.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Arborescence JSON to use instead of the family's own tree.
    #[arg(short = 't', long = "tree")]
    pub tree: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Build the normal assistant with witnessing paths.
    Assistant(HostTree),
    /// Decide normality; a negative verdict carries a cycle certificate.
    CheckNormal(HostTree),
    /// Build a sensitive order, or check the one given.
    Order {
        #[command(flatten)]
        io: HostTree,
        /// Order to check, smallest first.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<u32>>,
    },
    /// Depth-first search tree.
    Dfs {
        #[arg(short = 'd', long = "digraph")]
        digraph: PathBuf,
        #[arg(long, default_value_t = 0)]
        root: u32,
        /// Exploration priority, highest first.
        #[arg(long, value_delimiter = ',')]
        priority: Vec<u32>,
    },
    /// Whether the tree is a DFS tree of the digraph.
    IsDfs(HostTree),
    /// Check that the meet chain of two incomparable vertices separates them.
    Separate {
        #[command(flatten)]
        io: HostTree,
        #[arg(short = 'v', long)]
        v: u32,
        #[arg(short = 'w', long)]
        w: u32,
    },
    /// Levels of a normal tree and their acyclicity.
    Levels(HostTree),
    /// Build a normal arborescence containing the targets.
    Jung {
        #[arg(short = 'd', long = "digraph")]
        digraph: PathBuf,
        #[arg(long, default_value_t = 0)]
        root: u32,
        #[arg(long)]
        targets: PathBuf,
        /// Build in the reversed digraph (edges point to the root).
        #[arg(long)]
        reverse: bool,
    },
    /// Search for a comb with k teeth in a set, in a finite digraph or a
    /// family window.
    Comb {
        #[arg(short = 'd', long = "digraph", conflicts_with = "family")]
        digraph: Option<PathBuf>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        /// `all`, `even` or a comma-separated id list.
        #[arg(long, default_value = "all")]
        set: String,
        #[arg(short = 'k', long, default_value_t = 2)]
        k: usize,
        /// Allow a star as the answer (tree-shaped families only).
        #[arg(long, requires = "family")]
        star: bool,
    },
    /// Ends of a family approximated from its component tower.
    Ends(FamilyArgs),
    /// Whether an end lies in the closure of a set.
    Closure {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        end: usize,
        #[arg(long, default_value = "all")]
        set: String,
    },
    /// Trace one normal ray per end in the closure of a set.
    Faithful {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long, default_value = "all")]
        set: String,
    },
    /// First beads of a necklace for an end.
    Necklace {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        end: usize,
        #[arg(short = 'k', long, default_value_t = 3)]
        k: usize,
    },
    /// Solidification of a tree in a digraph, or the solidity of a family.
    Solidify {
        #[arg(short = 'd', long = "digraph", requires = "tree", conflicts_with = "family")]
        digraph: Option<PathBuf>,
        #[arg(short = 't', long = "tree")]
        tree: Option<PathBuf>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// Check that the tree reflects the horizon of a family.
    Horizon(FamilyArgs),
    /// Horizon witness for an end and a separator.
    Witness {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        end: usize,
        /// Comma-separated separator vertices.
        #[arg(long, value_delimiter = ',')]
        set: Vec<u32>,
        /// Start from a tree-side separator instead of a host-side one.
        #[arg(long)]
        backward: bool,
    },
    /// Run the acceptance matrix.
    Suite {
        #[arg(long, env = "ARBOR_SEED")]
        seed: Option<u64>,
    },
    /// Graphviz rendering of a digraph, a tree in a digraph or a family window.
    ExportDot {
        #[arg(short = 'd', long = "digraph", conflicts_with = "family")]
        digraph: Option<PathBuf>,
        #[arg(short = 't', long = "tree", requires = "digraph")]
        tree: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        separator: Vec<u32>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Cross-check the library against brute-force oracles on random instances.
    Oracle {
        #[arg(long, env = "ARBOR_SEED")]
        seed: Option<u64>,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}
