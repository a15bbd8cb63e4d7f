use std::fs;
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pauli_forge::bench::{self, Method, SupportDistribution};
use pauli_forge::circuit::{realize, CliffordCircuit, Metrics};
use pauli_forge::extract::{parse_circuit, resynthesize};
use pauli_forge::ordered::synth_ordered;
use pauli_forge::pauli::{read_pauli_file, PauliTable};
use pauli_forge::synth::{synthesize, Mode};
use pauli_forge::verify::{is_ordered_pauli_network, is_pauli_network};
use pauli_forge::{Error, Result};

#[derive(Parser)]
#[command(name = "pauli-forge", version, about = "Pauli-network synthesis and resynthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a network for a Pauli rotation file.
    Synth(SynthArgs),
    /// Resynthesize a Clifford+rotation circuit.
    Resynth(ResynthArgs),
    /// Check that a circuit is a (ordered) Pauli network for a Pauli file.
    Verify(VerifyArgs),
    /// Compare methods on random or file instances.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Count,
    Depth,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Count => Mode::Count,
            ModeArg::Depth => Mode::Depth,
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Keep anticommuting rotations in file order.
    #[arg(long)]
    ordered: bool,
    /// Use the angles from the input file instead of 0.
    #[arg(long)]
    angles: bool,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Write metrics JSON here.
    #[arg(long)]
    metrics: Option<PathBuf>,
}

#[derive(Args)]
struct ResynthArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Also write the before/after metrics JSON here.
    #[arg(long)]
    metrics: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    network: PathBuf,
    #[arg(long)]
    paulis: PathBuf,
    #[arg(long)]
    ordered: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Random instance as n,m,seed.
    #[arg(long, conflicts_with = "dir", required_unless_present = "dir")]
    random: Option<String>,
    /// Number of random instances, with consecutive seeds.
    #[arg(long, default_value_t = 1, requires = "random")]
    instances: u64,
    /// Fixed support size for random operators.
    #[arg(long, requires = "random")]
    support: Option<usize>,
    /// Directory of Pauli files, one instance each.
    #[arg(long)]
    dir: Option<PathBuf>,
    /// Comma-separated methods: naive, rcount, rdepth, rcount-ordered, rdepth-ordered.
    #[arg(long, default_value = "naive,rcount,rdepth")]
    methods: String,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the gain table here.
    #[arg(long)]
    gains: Option<PathBuf>,
    /// Record 0 seconds so that output is byte-reproducible.
    #[arg(long)]
    no_timing: bool,
}

fn read_paulis(path: &PathBuf) -> Result<(PauliTable, Option<Vec<f64>>)> {
    let entries = read_pauli_file(BufReader::new(fs::File::open(path)?))?;
    let (ops, angles) = bench::split_entries(entries)?;
    if ops.is_empty() {
        return Err(Error::Invalid(format!("{}: no operators", path.display())));
    }
    Ok((PauliTable::from_operators(&ops)?, angles))
}

fn metrics_json(m: &Metrics) -> serde_json::Value {
    serde_json::to_value(m).expect("metrics serialize")
}

fn synth(args: SynthArgs) -> Result<()> {
    let (table, angles) = read_paulis(&args.input)?;
    let angles = match (args.angles, angles) {
        (true, Some(a)) => a,
        (true, None) => return Err(Error::Invalid("--angles given but the input has no angles".into())),
        (false, _) => vec![0.0; table.input_len()],
    };
    let mode = args.mode.into();
    let result = if args.ordered {
        synth_ordered(&table, mode)
    } else {
        synthesize(&table, mode)
    };
    let circuit = realize(&result, &angles)?;
    fs::write(&args.output, circuit.to_text())?;
    let metrics = serde_json::to_string_pretty(&metrics_json(&circuit.metrics()))?;
    match args.metrics {
        Some(path) => fs::write(path, metrics + "\n")?,
        None => println!("{metrics}"),
    }
    Ok(())
}

fn resynth(args: ResynthArgs) -> Result<()> {
    let input = parse_circuit(&fs::read_to_string(&args.input)?)?;
    let before = input.to_circuit().metrics();
    let out = resynthesize(&input, args.mode.into())?;
    fs::write(&args.output, out.to_text())?;
    let report = serde_json::to_string_pretty(&json!({
        "before": metrics_json(&before),
        "after": metrics_json(&out.metrics()),
    }))?;
    println!("{report}");
    if let Some(path) = args.metrics {
        fs::write(path, report + "\n")?;
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<bool> {
    let network = CliffordCircuit::from_text(&fs::read_to_string(&args.network)?)?.without_rotations();
    let (table, _) = read_paulis(&args.paulis)?;
    if network.num_qubits != table.num_qubits() {
        return Err(Error::LengthMismatch {
            expected: network.num_qubits,
            found: table.num_qubits(),
        });
    }
    let (valid, witness) = if args.ordered {
        is_ordered_pauli_network(&network, &table)?
    } else {
        is_pauli_network(&network, &table)?
    };
    let witness: Option<Vec<serde_json::Value>> = witness.map(|w| {
        w.iter()
            .enumerate()
            .map(|(j, &p)| json!({"rotation": table.origin(j), "prefix": p}))
            .collect()
    });
    println!("{}", serde_json::to_string_pretty(&json!({"valid": valid, "witness": witness}))?);
    Ok(valid)
}

fn bench_cmd(args: BenchArgs) -> Result<()> {
    let methods = Method::parse_list(&args.methods)?;
    let instances = match (&args.random, &args.dir) {
        (Some(triple), _) => {
            let parts: Vec<u64> = triple
                .split(',')
                .map(|s| s.trim().parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Invalid(format!("--random expects n,m,seed (got {triple:?})")))?;
            let [n, m, seed] = parts[..] else {
                return Err(Error::Invalid(format!("--random expects n,m,seed (got {triple:?})")));
            };
            let dist = args.support.map_or(SupportDistribution::Uniform, SupportDistribution::Fixed);
            (0..args.instances)
                .map(|k| bench::random_instance(n as usize, m as usize, seed + k, dist))
                .collect::<Result<Vec<_>>>()?
        }
        (None, Some(dir)) => bench::load_dir(dir)?,
        (None, None) => unreachable!("clap requires one source"),
    };
    let report = bench::run_suite(&instances, &methods, !args.no_timing)?;
    report.write_csv(fs::File::create(&args.output)?)?;
    if let Some(path) = args.json {
        fs::write(path, report.to_json()? + "\n")?;
    }
    if let Some(path) = args.gains {
        fs::write(path, report.gains_table())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Synth(a) => synth(a).map(|_| true),
        Command::Resynth(a) => resynth(a).map(|_| true),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench_cmd(a).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::Verification(_)) => {
            eprintln!("pauli-forge: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("pauli-forge: {e}");
            ExitCode::from(2)
        }
    }
}
