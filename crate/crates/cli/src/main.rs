use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod error;

#[derive(Debug, Parser)]
#[command(name = "surf", version, about = "Run reaction systems over finite universes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Set,
    Graph,
    Hypergraph,
    Poset,
    Diagram,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the lattice laws on seeded random backgrounds.
    Laws {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Registry scheme to draw diagrams from (diagram kind only).
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Run an interactive process and emit its trace.
    Run {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        process: PathBuf,
        /// Write the trace here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide k-vertex-coverability of a hypergraph with the cover system.
    Cover {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        k: usize,
        /// Run the cover processes on all cores.
        #[arg(long)]
        parallel: bool,
    },
    /// Check a background morphism between two systems.
    Morphism {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long)]
        map: PathBuf,
        /// `exhaustive` or `sample:N`.
        #[arg(long)]
        strong: Option<String>,
        /// Required with `--strong sample:N`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Materialize the transition function of a system over all its states.
    Transitions {
        #[arg(long)]
        system: PathBuf,
        /// Write the graph in DOT format here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Parse and validate documents.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Laws {
            kind,
            scheme,
            cases,
            seed,
        } => commands::laws(kind, scheme.as_deref(), cases, seed),
        Command::Run {
            system,
            process,
            out,
        } => commands::run(&system, &process, out.as_deref()),
        Command::Cover {
            instance,
            k,
            parallel,
        } => commands::cover(&instance, k, parallel),
        Command::Morphism {
            from,
            to,
            map,
            strong,
            seed,
        } => commands::morphism(&from, &to, &map, strong.as_deref(), seed),
        Command::Transitions { system, dot } => commands::transitions(&system, dot.as_deref()),
        Command::Validate { files } => commands::validate(&files),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
