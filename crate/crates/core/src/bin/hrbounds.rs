use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hrbounds::experiment::{self, BoundChoice, Command, ExperimentConfig, RunOptions, EXIT_ERROR};
use hrbounds::report::to_json_string;
use hrbounds::Result;

#[derive(Parser)]
#[command(name = "hrbounds", version, about = "Maximal-inequality bounds, verification and strong-law experiments")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the configured bounds
    Bound(Common),
    /// Compare bounds with Monte Carlo and exact probabilities
    Verify(Common),
    /// Test the demimartingale inequality on simulated paths
    CheckDemi(Common),
    /// Strong-law trajectories and the series check
    Slln(Common),
    /// Exact probability by enumerating a finite support
    Enumerate(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Theorem1,
    Rao,
    HajekRenyi,
    Amini,
}

#[derive(Args)]
struct Common {
    /// TOML or JSON experiment file
    #[arg(long, required_unless_present = "scenario", conflicts_with = "scenario")]
    config: Option<PathBuf>,
    /// Built-in preset instead of a config file
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory (overrides HRBOUNDS_OUT and the config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Bound kinds to evaluate, overriding the config
    #[arg(long, value_enum, value_delimiter = ',')]
    kind: Vec<Kind>,
    #[arg(long, hide = true)]
    corrupt_bound: bool,
}

fn execute(command: Command, args: Common) -> Result<i32> {
    let config = match (&args.config, &args.scenario) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Some(name)) => experiment::preset(name)?,
        (None, None) => unreachable!("clap requires one of --config or --scenario"),
    };
    let kinds = (!args.kind.is_empty()).then(|| {
        args.kind
            .iter()
            .map(|k| match k {
                Kind::Theorem1 => BoundChoice::Theorem1,
                Kind::Rao => BoundChoice::Rao,
                Kind::HajekRenyi => BoundChoice::HajekRenyi,
                Kind::Amini => BoundChoice::Amini,
            })
            .collect()
    });
    let opts = RunOptions {
        seed: args.seed,
        reps: args.reps,
        threads: args.threads,
        out: args.out,
        kinds,
        corrupt_bound: args.corrupt_bound,
    };
    let outcome = experiment::run(command, config, &opts)?;
    println!("{}: {}", command.name(), outcome.summary);
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Bound(a) => (Command::Bound, a),
        Cmd::Verify(a) => (Command::Verify, a),
        Cmd::CheckDemi(a) => (Command::CheckDemi, a),
        Cmd::Slln(a) => (Command::Slln, a),
        Cmd::Enumerate(a) => (Command::Enumerate, a),
    };
    let code = match execute(command, args) {
        Ok(code) => code,
        Err(e) => {
            let json = to_json_string(&e.to_report()).unwrap_or_else(|_| format!("{{\"message\":\"{e}\"}}\n"));
            print!("{json}");
            EXIT_ERROR
        }
    };
    ExitCode::from(code as u8)
}
