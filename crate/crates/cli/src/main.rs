use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use q3pen::analysis::{cost_table, cost_table_csv, detection_curve, detection_curve_csv};
use q3pen::scenario_file::ScenarioFile;
use q3pen::{run_negotiation, run_with_adversary, Adversary, Behavior, Error, Role, Transcript64};

#[derive(Parser)]
#[command(name = "q3pen", version, about = "Simulate private price negotiation over quantum states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a negotiation from a JSON scenario file and print the transcript.
    Run {
        scenario: PathBuf,
        /// Master seed; overrides the file.
        #[arg(long)]
        seed: Option<u64>,
        /// Precision qubits for counting; overrides the file.
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        shots: Option<usize>,
        #[arg(long, default_value_t = q3pen::counting::DEFAULT_MAX_QUBITS)]
        max_qubits: usize,
        /// `<alice|bob>:<honest|measure|false-unveil[=VALUE]>`
        #[arg(long, value_parser = parse_adversary)]
        adversary: Option<Adversary>,
    },
    /// Communication cost table as CSV.
    Costs {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        /// Add qubit and cbit columns for the quantum protocol.
        #[arg(long)]
        split: bool,
    },
    /// Cheat detection probability curve as CSV.
    Detect {
        #[arg(long, default_value_t = 2.0)]
        c: f64,
        #[arg(long, default_value_t = 32)]
        n_max: usize,
    },
}

fn parse_adversary(text: &str) -> Result<Adversary, String> {
    let (party, behavior) = text.split_once(':').ok_or("expected <party>:<behavior>")?;
    let party = match party.to_ascii_lowercase().as_str() {
        "alice" => Role::Alice,
        "bob" => Role::Bob,
        other => return Err(format!("unknown party `{other}`")),
    };
    let behavior = match behavior.split_once('=') {
        None if behavior == "honest" => Behavior::Honest,
        None if behavior == "measure" => Behavior::MeasureAndCheat,
        None if behavior == "false-unveil" => Behavior::FalseUnveil { claimed: None },
        Some(("false-unveil", v)) => {
            let v = v.parse().map_err(|_| format!("bad unveil value `{v}`"))?;
            Behavior::FalseUnveil { claimed: Some(v) }
        }
        _ => return Err(format!("unknown behavior `{behavior}`")),
    };
    Ok(Adversary { party, behavior })
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Resource { .. } => 3,
        _ => 2,
    }
}

fn cmd_run(
    path: &PathBuf,
    seed: Option<u64>,
    t: Option<usize>,
    shots: Option<usize>,
    max_qubits: usize,
    adversary: Option<Adversary>,
) -> Result<String, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Argument(format!("{}: {e}", path.display())))?;
    let file = ScenarioFile::parse(&text)?;
    let scenario = file.scenario()?;
    let mut config = file.config(&scenario)?;
    if let Some(seed) = seed {
        config.master_seed = seed;
    }
    if let Some(t) = t {
        config.counting.precision = t;
    }
    if let Some(shots) = shots {
        config.counting.shots = shots;
    }
    config.counting.max_qubits = max_qubits;
    let transcript: Transcript64 = match adversary {
        Some(a) => run_with_adversary(&scenario, a, &config)?,
        None => run_negotiation(&scenario, &config)?,
    };
    Ok(transcript.to_json())
}

fn cmd_costs(d: usize, n_max: usize, split: bool) -> Result<String, Error> {
    if n_max < 1 {
        return Err(Error::Argument("--n-max must be at least 1".into()));
    }
    Ok(cost_table_csv(&cost_table(1..=n_max, d)?, split))
}

fn cmd_detect(c: f64, n_max: usize) -> Result<String, Error> {
    if n_max < 1 {
        return Err(Error::Argument("--n-max must be at least 1".into()));
    }
    Ok(detection_curve_csv(&detection_curve(c, 1..=n_max)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { scenario, seed, t, shots, max_qubits, adversary } => {
            cmd_run(scenario, *seed, *t, *shots, *max_qubits, *adversary).map(|json| json + "\n")
        }
        Command::Costs { d, n_max, split } => cmd_costs(*d, *n_max, *split),
        Command::Detect { c, n_max } => cmd_detect(*c, *n_max),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("q3pen: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
