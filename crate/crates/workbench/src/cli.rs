use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "vpcsp", version, about = "Workbench for valued promise CSPs: templates, polymorphisms, canonical LPs, reductions")]
pub struct Cli {
    #[command(flatten)]
    pub guards: Guards,
    /// Worker threads for commands that split their work.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Guards {
    #[arg(long, global = true, default_value_t = 1 << 16)]
    pub max_minion_size: u128,
    #[arg(long, global = true, default_value_t = 1 << 14)]
    pub max_mat_pairs: usize,
    #[arg(long, global = true, default_value_t = 1 << 12)]
    pub max_lp_rows: usize,
}

/// A template from the zoo or from a JSON file.
#[derive(Args, Debug, Clone, Default)]
pub struct TemplateArgs {
    /// Zoo entry, optionally with inline parameters: `3lin2`, `"label-cover d=2 e=1"`.
    #[arg(long, conflicts_with = "template")]
    pub builtin: Option<String>,
    /// Template JSON file.
    #[arg(long)]
    pub template: Option<PathBuf>,
    #[arg(long)]
    pub c: Option<String>,
    #[arg(long)]
    pub s: Option<String>,
    /// Turns the template into a constant-factor one.
    #[arg(long)]
    pub kappa: Option<String>,
    /// Further zoo parameters as `key=value`.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether yes- and no-instances are disjoint (baby canonical LP at arity 1).
    CheckTemplate(TemplateArgs),
    /// Enumerate feasibility polymorphisms of one arity.
    Pol {
        #[command(flatten)]
        t: TemplateArgs,
        #[arg(long)]
        arity: usize,
    },
    /// Test a family of weightings for a common slope.
    Pluri {
        #[command(flatten)]
        t: TemplateArgs,
        #[arg(long)]
        weightings: PathBuf,
        /// Random mixtures tried as an independent check.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Synthesize canonical payoff formulas or a dual family of weightings.
    Canonical {
        #[command(flatten)]
        t: TemplateArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Baby)]
        mode: ModeArg,
        /// Right-hand side thresholds for `--mode thresholds`.
        #[arg(long)]
        c2: Option<String>,
        #[arg(long)]
        s2: Option<String>,
        /// Family JSON: `[{"arity", "alpha": [...], "beta": {"default", "entries"}}]`.
        #[arg(long, conflicts_with_all = ["arity", "alpha", "beta"])]
        families: Option<PathBuf>,
        #[arg(long)]
        arity: Option<usize>,
        /// One value, or one per coordinate separated by commas.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Constant value of β.
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        /// Write the assembled LP and its solution as JSON.
        #[arg(long)]
        dump_lp: Option<PathBuf>,
    },
    /// Reductions between payoff formulas and (valued) minor conditions.
    Reduce {
        #[command(subcommand)]
        op: ReduceOp,
    },
    /// Verify the 3LIN2 to 4LIN2 / 5LIN2 gadget homomorphisms.
    Gadget {
        #[arg(long, value_parser = ["4lin2", "5lin2"])]
        target: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value = "3/4")]
        c: String,
        #[arg(long, default_value = "1/2")]
        s: String,
        /// Candidate map: `flip` or `identity`. Defaults to flip for 4lin2 and identity for 5lin2.
        #[arg(long, value_parser = ["flip", "identity"])]
        map: Option<String>,
    },
    /// Synthesize a pp-definition of a target symbol from a source template.
    Ppdef {
        /// Zoo spec (`"3lin2-crisp"`) or JSON file.
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        /// Target symbol name.
        #[arg(long)]
        psi: String,
        #[arg(long, value_enum, default_value_t = PpModeArg::Crisp)]
        mode: PpModeArg,
    },
    /// Boolean Fourier analysis and the long-code test checks.
    Fourier {
        #[command(subcommand)]
        op: FourierOp,
    },
    /// Exact LP feasibility with certificates.
    Lp {
        #[command(subcommand)]
        op: LpOp,
    },
}

#[derive(Subcommand, Debug)]
pub enum ReduceOp {
    PcspToMc {
        #[command(flatten)]
        t: TemplateArgs,
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        k: usize,
    },
    McToPcsp {
        #[command(flatten)]
        t: TemplateArgs,
        #[arg(long)]
        instance: PathBuf,
    },
    PcspToVmc {
        #[command(flatten)]
        t: TemplateArgs,
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        k: usize,
        /// Required for constant-factor templates.
        #[arg(long)]
        completeness: Option<String>,
    },
    VmcToPcsp {
        #[command(flatten)]
        t: TemplateArgs,
        #[arg(long)]
        instance: PathBuf,
        /// No-instance formula returned when the instance turns out not to be a yes-instance.
        #[arg(long)]
        fallback: Option<PathBuf>,
    },
    /// Brute-force yes/no status of a formula.
    Classify {
        #[command(flatten)]
        t: TemplateArgs,
        #[arg(long)]
        formula: PathBuf,
        /// Completeness for constant-factor templates.
        #[arg(long)]
        completeness: Option<String>,
    },
    /// Exhaustive yes/no status of a valued minor condition instance.
    ClassifyVmc {
        #[command(flatten)]
        t: TemplateArgs,
        #[arg(long)]
        instance: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum FourierOp {
    /// Conditions 1 and 2 for every `π: D → E`, exhaustively.
    VerifyHastad {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        e: usize,
        #[arg(long, default_value = "1/8")]
        delta: String,
    },
    /// Fourier coefficients, folding and `Λ` of one function.
    Expand {
        /// Values in `{1,-1}`, comma separated, in tuple order.
        #[arg(long, allow_hyphen_values = true)]
        table: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum LpOp {
    Solve {
        #[arg(long)]
        system: PathBuf,
    },
    /// Check a witness or certificate: a `{"system", "result"}` file or a report carrying one.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Baby,
    Thresholds,
    Improved,
    Cf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PpModeArg {
    Crisp,
    Valued,
}
