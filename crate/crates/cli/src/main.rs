mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Subtyped Lambek calculus prover and grammar engine.
#[derive(Parser, Debug, Clone)]
#[command(name = "lambek", version)]
pub struct Cli {
    /// Grammar file. Bare names are also looked up, with or without a
    /// `.grammar` extension, in the directories of LAMBEK_GRAMMAR_PATH.
    #[arg(short, long, global = true)]
    pub grammar: Option<PathBuf>,

    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Search for a proof of a sequent such as `a/b, b => a`.
    Prove {
        sequent: String,
        /// NL, L, LP or NLP; defaults to the grammar's regime, else L.
        #[arg(long)]
        regime: Option<String>,
        /// Base logic when no grammar is given.
        #[arg(long, default_value = "prop")]
        base: String,
        /// Allow cuts nested up to this depth.
        #[arg(long, value_name = "DEPTH")]
        cut: Option<usize>,
        /// Thread layer variables through the proof.
        #[arg(long)]
        layered: bool,
        #[arg(long, value_name = "K")]
        max_solutions: Option<usize>,
    },
    /// Decide whether a sentence belongs to the grammar's language.
    Member {
        #[arg(required = true, num_args = 1..)]
        sentence: Vec<String>,
        /// Use lexical feature constraints and report the environments.
        #[arg(long)]
        layered: bool,
        #[arg(long, value_name = "K")]
        max_solutions: Option<usize>,
    },
    /// Compile the grammar into pure Lambek grammars.
    CompileOut {
        /// Compare both languages on all strings up to this length.
        #[arg(long, value_name = "N")]
        check: Option<usize>,
    },
    /// Three-way feature entailment: does the first term entail the second?
    Entail { context: String, guard: String },
    /// Run one command per line of a script; prefix a line with
    /// `expect <code>` to expect an exit code other than 0.
    Batch {
        script: PathBuf,
        #[arg(long)]
        parallel: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = commands::run(&cli);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code)
}
