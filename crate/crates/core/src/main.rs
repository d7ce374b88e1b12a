use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pid_core::alternate::{rank_check, Criterion};
use pid_core::lattice::{children, export_dot, parents, DEFAULT_MAX_N};
use pid_core::report::{atoms_csv, atoms_json, fmt_num, lattice_json, pointwise_csv};
use pid_core::{
    decompose, Antichain, DecompositionResult, JointDistribution, LabelView, Lattice, Measure,
    ParthoodDistribution, PidError, Realization,
};

const EXIT_VALIDATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "pid",
    version,
    about = "Exact partial information decomposition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum View {
    Antichain,
    Bitstring,
    Statement,
}

impl From<View> for LabelView {
    fn from(v: View) -> Self {
        match v {
            View::Antichain => LabelView::Antichain,
            View::Bitstring => LabelView::Bitstring,
            View::Statement => LabelView::Statement,
        }
    }
}

#[derive(clap::Args)]
struct InputArgs {
    /// Distribution file (CSV `s1,...,sn,t,p` or JSON)
    #[arg(long)]
    input: PathBuf,
    /// Decomposition system: sx, res, ws, ms or unq
    #[arg(long, default_value = "sx")]
    measure: String,
    /// Expected number of sources
    #[arg(long = "n")]
    n: Option<usize>,
    /// Residual tolerance for the consistency check
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a distribution into averaged (and optionally pointwise) atoms
    Decompose {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write per-realization atom tables
        #[arg(long)]
        emit_pointwise: bool,
        /// Add informative/misinformative atom columns (sx only)
        #[arg(long)]
        emit_split: bool,
    },
    /// Print the consistency residual of every collection
    Validate {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Export the lattice of atoms
    Lattice {
        #[arg(long = "n")]
        n: usize,
        #[arg(long, value_enum, default_value = "dot")]
        format: GraphFormat,
        #[arg(long, value_enum, default_value = "antichain")]
        view: View,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List the children (lower covers) of a node given as an antichain, e.g. `1;2,3`
    Children {
        #[arg(long = "n")]
        n: usize,
        antichain: String,
        /// Also list parents (upper covers)
        #[arg(long)]
        parents: bool,
    },
    /// Rank of a parthood criterion's coefficient matrix, as JSON
    Rankcheck {
        #[arg(long = "n", default_value_t = 3)]
        n: usize,
        #[arg(long, default_value = "syn")]
        criterion: String,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Validation(String),
}

impl From<PidError> for Failure {
    fn from(e: PidError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn max_n() -> usize {
    std::env::var("PID_MAX_N")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

// A reader that closes the pipe early (`pid ... | head`) is not an error.
fn stdout(text: &str) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
            Err(Failure::Usage(format!("stdout: {e}")))
        }
        _ => Ok(()),
    }
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => stdout(text),
    }
}

fn load(args: &InputArgs) -> Result<(JointDistribution, Measure), Failure> {
    if args.tolerance.is_nan() || args.tolerance <= 0.0 {
        return Err(Failure::Usage("--tolerance must be positive".into()));
    }
    let measure: Measure = args.measure.parse()?;
    let text = fs::read_to_string(&args.input)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.input.display())))?;
    let dist = JointDistribution::load(&text)?;
    if let Some(n) = args.n {
        if n != dist.n() {
            return Err(Failure::Usage(format!(
                "--n {n} but the distribution has {} sources",
                dist.n()
            )));
        }
    }
    Ok((dist, measure))
}

fn run_decomposition(
    args: &InputArgs,
) -> Result<(JointDistribution, DecompositionResult), Failure> {
    let (dist, measure) = load(args)?;
    let mut result = decompose(&dist, measure)?;
    result.diagnostics.tolerance = args.tolerance;
    Ok((dist, result))
}

fn summary(result: &DecompositionResult) -> String {
    let d = &result.diagnostics;
    let status = if d.passed() { "PASS" } else { "FAIL" };
    let worst = d.worst.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
    let mut s = format!(
        "consistency {status}: max |I(T:a) - sum of atoms| = {} at {worst} (tolerance {})",
        fmt_num(d.max_abs_residual),
        fmt_num(d.tolerance)
    );
    if let Some(err) = result.round_trip_error {
        s.push_str(&format!(
            "; {} inversion round-trip error {}",
            result.measure.name(),
            fmt_num(err)
        ));
    }
    s
}

fn verdict(result: &DecompositionResult) -> Result<(), Failure> {
    if result.diagnostics.passed() {
        Ok(())
    } else {
        Err(Failure::Validation(summary(result)))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Decompose {
            input,
            format,
            output,
            emit_pointwise,
            emit_split,
        } => {
            let (dist, mut result) = run_decomposition(&input)?;
            if emit_split && result.averaged_split.is_none() {
                return Err(Failure::Usage(
                    "--emit-split is only available for --measure sx".into(),
                ));
            }
            if !emit_split {
                result.averaged_split = None;
                result.pointwise.iter_mut().for_each(|p| p.split = None);
            }
            let labels = |r: &Realization| {
                let (s, t) = dist.labels(r);
                (s.into_iter().map(String::from).collect(), t.to_string())
            };
            let text = match format {
                TableFormat::Csv => {
                    let mut text = atoms_csv(&result);
                    if emit_pointwise {
                        text.push('\n');
                        text.push_str(&pointwise_csv(&result, &labels));
                    }
                    text
                }
                TableFormat::Json => {
                    let doc = atoms_json(&result, emit_pointwise.then_some(&labels as _));
                    format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
                }
            };
            write_out(&output, &text)?;
            eprintln!("{}", summary(&result));
            verdict(&result)
        }
        Command::Validate { input } => {
            let (_, result) = run_decomposition(&input)?;
            let mut text = String::from("collection,mutual_information,atom_sum,residual\n");
            for r in &result.diagnostics.residuals {
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    r.collection.compact(),
                    fmt_num(r.mutual_information),
                    fmt_num(r.atom_sum),
                    fmt_num(r.residual)
                ));
            }
            text.push_str(&summary(&result));
            text.push('\n');
            stdout(&text)?;
            verdict(&result)
        }
        Command::Lattice {
            n,
            format,
            view,
            output,
        } => {
            let lattice = if n <= DEFAULT_MAX_N {
                Lattice::new(n)?
            } else {
                Lattice::with_cap(n, max_n())?
            };
            let text = match format {
                GraphFormat::Dot => export_dot(&lattice, view.into()),
                GraphFormat::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&lattice_json(&lattice, view.into())).unwrap()
                ),
            };
            write_out(&output, &text)
        }
        Command::Children {
            n,
            antichain,
            parents: with_parents,
        } => {
            let alpha: Antichain = antichain.parse()?;
            let node = ParthoodDistribution::from_antichain(&alpha, n)?;
            let show = |text: &mut String, label: &str, nodes: &[ParthoodDistribution]| {
                text.push_str(&format!("{label} of {} ({} found):\n", alpha, nodes.len()));
                for c in nodes {
                    text.push_str(&format!(
                        "  {}\t{}\t{}\n",
                        c.to_antichain(),
                        c.bitstring(),
                        c.to_statement()
                    ));
                }
            };
            let mut text = String::new();
            show(&mut text, "children", &children(&node));
            if with_parents {
                show(&mut text, "parents", &parents(&node)?);
            }
            stdout(&text)
        }
        Command::Rankcheck { n, criterion } => {
            let criterion: Criterion = criterion.parse()?;
            let lattice = Lattice::new(n)?;
            let report = rank_check(criterion, &lattice);
            stdout(&format!(
                "{}\n",
                serde_json::to_string_pretty(&report).unwrap()
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
