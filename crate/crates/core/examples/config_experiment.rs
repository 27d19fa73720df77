//! Runs a command from a TOML config the same way the binary does, writing
//! reports into a temporary directory.
//!
//! cargo run --release --example config_experiment

use hrbounds::experiment::{run, Command, ExperimentConfig, RunOptions};

const CONFIG: &str = r#"
scenario = "rademacher-walk"
replications = 20000
master_seed = 42

[sequence]
n = 10
family = { kind = "rademacher" }

[phi]
kind = "abs_power"
nu = 2.0

[chi]
kind = "linear"
epsilon = 4.0

[weights]
kind = "power"
beta = 1.0

[bound]
kinds = ["theorem1", "hajek_renyi"]

[verify]
epsilons = [2.0, 4.0]
"#;

fn main() -> hrbounds::Result<()> {
    let config = ExperimentConfig::from_toml(CONFIG)?;
    let out = std::env::temp_dir().join("hrbounds-config-example");
    let opts = RunOptions {
        out: Some(out),
        ..RunOptions::default()
    };
    for command in [Command::Bound, Command::Verify, Command::Enumerate] {
        let outcome = run(command, config.clone(), &opts)?;
        println!("{} -> exit {}: {}", command.name(), outcome.exit_code, outcome.summary);
        for f in outcome.files {
            println!("  {}", f.display());
        }
    }
    Ok(())
}
