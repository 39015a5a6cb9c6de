use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "alephfree", version, about = "Delta0 absoluteness over finite set models and freeness checks for abelian groups")]
pub struct Cli {
    /// Output format for the payload on stdout.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Formulas and finite set models.
    #[command(subcommand)]
    Formula(FormulaCmd),
    /// Integer matrices and abelian groups.
    #[command(subcommand)]
    Group(GroupCmd),
}

#[derive(Debug, Args)]
pub struct FormulaArg {
    /// Formula text, e.g. "forall x in y (x = x)".
    #[arg(long)]
    pub formula: String,
}

#[derive(Debug, Subcommand)]
pub enum FormulaCmd {
    /// Parse and pretty-print a formula.
    Parse(FormulaArg),
    /// Decide whether a formula is Delta0, with a rule trace.
    Delta0(FormulaArg),
    /// Relativize a formula to a model variable.
    Relativize {
        #[command(flatten)]
        f: FormulaArg,
        #[arg(long = "model-var", default_value = "M")]
        model_var: String,
    },
    /// Evaluate a formula in a finite model.
    Eval {
        #[command(flatten)]
        f: FormulaArg,
        /// Model file or `V:k`.
        #[arg(long)]
        model: String,
        /// `var=ackermann-index`, repeatable.
        #[arg(long = "assign")]
        assign: Vec<String>,
    },
    /// Compare a formula in M and N for every assignment into M.
    Scan {
        #[command(flatten)]
        f: FormulaArg,
        #[arg(long = "M")]
        m: String,
        #[arg(long = "N")]
        n: String,
        /// Finite stand-in for the universe, recorded in the report.
        #[arg(long)]
        ambient: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct GroupArg {
    /// Group file `{ambient_dim, generators}`.
    #[arg(long)]
    pub group: PathBuf,
}

#[derive(Debug, Args)]
pub struct SubgroupArgs {
    #[command(flatten)]
    pub g: GroupArg,
    #[arg(long)]
    pub subgroup: PathBuf,
}

#[derive(Debug, Args)]
pub struct HarnessArgs {
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum GroupCmd {
    /// Smith normal form of an integer matrix.
    Snf {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Hermite normal form of an integer matrix.
    Hnf {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Pure closure of a finite set inside a group.
    PureClosure {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        set: PathBuf,
    },
    /// Purity of a subgroup, with a witness when it fails.
    Purity(SubgroupArgs),
    /// Freeness of a presented group or a lattice group.
    Freeness {
        /// Presentation file `{m, relations}` or group file.
        #[arg(long)]
        group: PathBuf,
    },
    /// Presentation of G/H.
    Quotient(SubgroupArgs),
    /// A complement K with H ⊕ K = G.
    Complement(SubgroupArgs),
    /// Depth-bounded freeness certificate for a chain of groups.
    Certify {
        /// Built-in family.
        #[arg(long, conflicts_with = "levels", required_unless_present = "levels")]
        family: Option<String>,
        /// Explicit chain file `{name, levels: [group files]}`.
        #[arg(long)]
        levels: Option<PathBuf>,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        size: usize,
        /// Consecutive proper inclusions needed for an escalation witness.
        #[arg(long, default_value_t = crate::group::DEFAULT_ESCALATION_THRESHOLD)]
        threshold: usize,
    },
    /// Random instances of: H and G/H free imply G free.
    #[command(name = "check-thm42")]
    CheckThm42(HarnessArgs),
    /// Random instances of: H pure in free G implies G/H free and H a summand.
    #[command(name = "check-thm43")]
    CheckThm43(HarnessArgs),
}
