//! Command-line driver: runs the toy sweep, trains observables, cross-
//! evaluates them and prints invariance / property reports.
//!
//! Exit codes: 0 on success, 1 on validation problems (unknown names,
//! missing or malformed files, bad flag values), 2 on internal computation
//! errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use qrobs_core::analysis::{
    cross_evaluate, histogram_to_csv, stddev_histogram, toy_experiment, DEFAULT_BIN_WIDTH,
};
use qrobs_core::channels::{kraus, ChannelId};
use qrobs_core::learning::{
    canonical_pairs, train, train_all, GradientMode, NoiseGrid, TrainConfig, TrainResult,
    DEFAULT_EPOCHS, DEFAULT_LEARNING_RATE, TRACELESS_INIT_SCALE,
};
use qrobs_core::observables::{build, invariance_report, properties_report, ObservableRecord};
use qrobs_core::states::{prepare, CircuitId, DEFAULT_RANDOM_CIRCUIT_SEED};
use qrobs_core::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "qrobs",
    about = "Noise-robust two-qubit observable experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep fixed observables over the depolarized Bell state (writes toy.csv).
    Toy(OutArg),
    /// Train one observable for a circuit-channel pair (writes <circuit>__<channel>.json).
    Train(TrainArgs),
    /// Train all 30 circuit-channel pairs (writes 30 JSON files plus manifest.json).
    TrainAll(TrainAllArgs),
    /// Cross-evaluate 30 trained observables (writes crosseval.csv and histogram.csv).
    CrossEval(CrossEvalArgs),
    /// Print the invariance report of a stored observable against a circuit and channel.
    Check(CheckArgs),
    /// Print the spectral and Pauli-structure report of a stored observable.
    Props(PropsArgs),
}

#[derive(Args)]
struct OutArg {
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    /// Circuit name (bell_phi_plus, bell_phi_minus, bell_psi_plus,
    /// bell_psi_minus, qft2, random_entangled).
    #[arg(long)]
    circuit: String,
    /// Channel name (depolarizing, amplitude_damping, phase_damping,
    /// phase_flip, bit_flip).
    #[arg(long)]
    channel: String,
    /// Gradient-descent steps.
    #[arg(long, default_value_t = DEFAULT_EPOCHS)]
    epochs: usize,
    /// Learning rate.
    #[arg(long, default_value_t = DEFAULT_LEARNING_RATE)]
    lr: f64,
    /// Initialization seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Gradient mode: analytic, finite_difference or shift_rule.
    #[arg(long, default_value = "analytic")]
    grad_mode: String,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args)]
struct TrainAllArgs {
    /// Master seed; per-pair seeds derive from it deterministically.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args)]
struct CrossEvalArgs {
    /// Directory holding the 30 observable JSON files from train-all.
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args)]
struct CheckArgs {
    /// Observable JSON file.
    #[arg(long)]
    observable: PathBuf,
    /// Circuit providing the state for the state-specific gap.
    #[arg(long)]
    circuit: String,
    /// Channel whose Kraus set is checked.
    #[arg(long)]
    channel: String,
}

#[derive(Args)]
struct PropsArgs {
    /// Observable JSON file.
    #[arg(long)]
    observable: PathBuf,
}

/// Failure category carrying the exit code.
enum CliError {
    Validation(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Internal(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Internal(m) => m,
        }
    }
}

/// Validation failures are the caller's inputs; everything else is ours.
fn classify(err: CoreError) -> CliError {
    match err {
        CoreError::InvalidInput(_)
        | CoreError::RateOutOfRange(_)
        | CoreError::NotNormalized(_)
        | CoreError::NonFinite
        | CoreError::Json(_) => CliError::Validation(err.to_string()),
        other => CliError::Internal(other.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successes; argument problems are
            // validation failures.
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{err}");
                    ExitCode::from(1)
                }
            };
        }
    };

    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Toy(out) => cmd_toy(&out.out),
        Command::Train(args) => cmd_train(&args),
        Command::TrainAll(args) => cmd_train_all(args.seed, &args.out.out),
        Command::CrossEval(args) => cmd_cross_eval(&args.input, &args.out.out),
        Command::Check(args) => cmd_check(&args),
        Command::Props(args) => cmd_props(&args.observable),
    }
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Validation(format!("cannot create {}: {e}", dir.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))
}

fn record_file_name(circuit: CircuitId, channel: ChannelId) -> String {
    format!("{circuit}__{channel}.json")
}

fn cmd_toy(out: &Path) -> Result<(), CliError> {
    ensure_dir(out)?;
    let table = toy_experiment();
    let path = out.join("toy.csv");
    write_file(&path, &table.to_csv())?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_train(args: &TrainArgs) -> Result<(), CliError> {
    let circuit = CircuitId::parse(&args.circuit).map_err(classify)?;
    let channel = ChannelId::parse(&args.channel).map_err(classify)?;
    let gradient_mode = GradientMode::parse(&args.grad_mode).map_err(classify)?;
    let config = TrainConfig {
        circuit,
        channel,
        epochs: args.epochs,
        learning_rate: args.lr,
        seed: args.seed,
        gradient_mode,
    };

    ensure_dir(&args.out.out)?;
    let result = train(&config).map_err(classify)?;
    let path = args.out.out.join(record_file_name(circuit, channel));
    write_file(&path, &result.to_record().to_json())?;
    println!(
        "wrote {} (final loss {:.3e})",
        path.display(),
        result.final_loss()
    );
    Ok(())
}

fn cmd_train_all(seed: u64, out: &Path) -> Result<(), CliError> {
    ensure_dir(out)?;
    let results = train_all(seed).map_err(classify)?;

    for result in &results {
        let path = out.join(record_file_name(result.config.circuit, result.config.channel));
        write_file(&path, &result.to_record().to_json())?;
    }

    let manifest_path = out.join("manifest.json");
    write_file(&manifest_path, &manifest_json(seed))?;
    println!(
        "wrote {} observable files and {}",
        results.len(),
        manifest_path.display()
    );
    Ok(())
}

/// Records every convention a reader needs to reproduce or audit the run.
fn manifest_json(seed: u64) -> String {
    let grid = NoiseGrid::standard();
    let circuits: Vec<String> = CircuitId::canonical_order()
        .iter()
        .map(|c| c.to_string())
        .collect();
    let channels: Vec<String> = ChannelId::canonical_order()
        .iter()
        .map(|c| c.to_string())
        .collect();
    let files: Vec<String> = canonical_pairs()
        .into_iter()
        .map(|(c, ch)| record_file_name(c, ch))
        .collect();

    let manifest = serde_json::json!({
        "master_seed": seed,
        "per_pair_seed_rule": "splitmix64(master_seed XOR pair_index), pair_index = circuit_index * 5 + channel_index",
        "circuit_order": circuits,
        "channel_order": channels,
        "files": files,
        "noise_grid": {
            "formula": "rates[i] = i / 25 for i in 0..25",
            "rates": grid.rates(),
        },
        "target_observable": "Z (x) Z on the noiseless circuit output",
        "channel_conventions": {
            "depolarizing": "global on the two-qubit space: (1 - p) rho + p I/4, uniform Pauli-twirl Kraus form",
            "single_qubit_channels": "applied independently to both qubits at the same rate; composite Kraus operators K_i (x) K_j",
        },
        "random_circuit_seed": DEFAULT_RANDOM_CIRCUIT_SEED,
        "training": {
            "epochs": DEFAULT_EPOCHS,
            "learning_rate": DEFAULT_LEARNING_RATE,
            "gradient_mode": "analytic",
            "initialization": format!(
                "per qubit: identity coefficient uniform on [-1, 1], traceless coefficients uniform on [-{s}, {s}]; 8 draws from splitmix64(seed), qubit 0 first, I X Y Z order",
                s = TRACELESS_INIT_SCALE
            ),
        },
        "qubit_ordering": "qubit 0 is the most significant bit of the basis index",
    });
    let mut text = serde_json::to_string_pretty(&manifest).expect("static structure");
    text.push('\n');
    text
}

fn cmd_cross_eval(input: &Path, out: &Path) -> Result<(), CliError> {
    let mut results: Vec<TrainResult> = Vec::with_capacity(30);
    for (circuit, channel) in canonical_pairs() {
        let path = input.join(record_file_name(circuit, channel));
        let text = read_file(&path)?;
        let record = ObservableRecord::from_json(&text)
            .map_err(|e| CliError::Validation(format!("malformed {}: {e}", path.display())))?;
        let result = TrainResult::from_record(&record)
            .map_err(|e| CliError::Validation(format!("invalid {}: {e}", path.display())))?;
        results.push(result);
    }

    let report = cross_evaluate(&results).map_err(classify)?;
    let histogram = stddev_histogram(&report, DEFAULT_BIN_WIDTH);

    ensure_dir(out)?;
    let cross_path = out.join("crosseval.csv");
    write_file(&cross_path, &report.to_csv())?;
    let hist_path = out.join("histogram.csv");
    write_file(&hist_path, &histogram_to_csv(&histogram))?;
    println!("wrote {} and {}", cross_path.display(), hist_path.display());
    Ok(())
}

fn cmd_check(args: &CheckArgs) -> Result<(), CliError> {
    let circuit = CircuitId::parse(&args.circuit).map_err(classify)?;
    let channel = ChannelId::parse(&args.channel).map_err(classify)?;
    let record = load_record(&args.observable)?;
    let observable = build(&record.params().map_err(classify)?);

    // Kraus residuals are evaluated at the largest grid rate (the strictest
    // single-rate check; every channel is the identity at rate 0); the
    // state gap spans the whole grid.
    let grid = NoiseGrid::standard();
    let rate = *grid.rates().last().expect("grid is non-empty");
    let kraus_set = kraus(channel, rate).map_err(classify)?;
    let rho = prepare(circuit);
    let report = invariance_report(&observable, &kraus_set, Some(&rho), Some(&grid));

    let output = serde_json::json!({
        "circuit": circuit.to_string(),
        "channel": channel.to_string(),
        "kraus_rate": rate,
        "sum_residual": report.sum_residual,
        "per_kraus_residuals": report.per_kraus_residuals,
        "state_gap": report.state_gap,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&output).expect("static structure")
    );
    Ok(())
}

fn cmd_props(observable: &Path) -> Result<(), CliError> {
    let record = load_record(observable)?;
    let report = properties_report(&build(&record.params().map_err(classify)?));
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    Ok(())
}

fn load_record(path: &Path) -> Result<ObservableRecord, CliError> {
    let text = read_file(path)?;
    ObservableRecord::from_json(&text)
        .map_err(|e| CliError::Validation(format!("malformed {}: {e}", path.display())))
}
