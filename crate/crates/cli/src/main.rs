use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nested_prep::circuit::unitary_max_diff;
use nested_prep::compress::{self, BasisAngles, PruneAnalysis, SchmidtWarning};
use nested_prep::qft::{dft_matrix, qft_circuit};
use nested_prep::synth::{
    is_separable_with, synth_pyramidal_with, synth_subtree_with, PyramidalOptions, SubtreeOptions,
    EPS_ANGLE,
};
use nested_prep::{
    apply_circuit, build_tree, circuit_unitary, count_gates, export_qasm, fidelity, Circuit, Error,
    TargetState,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "nestprep",
    version,
    about = "State preparation circuits from nested-entanglement trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a preparation circuit for a statevector and verify it.
    Synth(SynthArgs),
    /// Simulate a circuit from |0…0⟩ and compare it with a statevector.
    Verify(VerifyArgs),
    /// Report whether a statevector is a product state.
    Separability(SeparabilityArgs),
    /// Emit the quantum Fourier transform circuit.
    Qft(QftArgs),
    /// Prune the right branch below a tree node.
    Prune(PruneArgs),
    /// Generalized Schmidt form of a 2 to 6 qubit statevector.
    Schmidt(SchmidtArgs),
    /// Print the ψ-tree of a statevector.
    Tree(TreeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Subtree,
    Pyramidal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Qasm,
    Json,
}

#[derive(Args)]
struct Input {
    /// Statevector file (text or JSON).
    #[arg(value_name = "INPUT", required_unless_present = "input")]
    path: Option<PathBuf>,
    #[arg(long = "input", value_name = "PATH", conflicts_with = "path")]
    input: Option<PathBuf>,
}

impl Input {
    fn path(&self) -> &Path {
        self.path
            .as_deref()
            .or(self.input.as_deref())
            .expect("clap enforces one")
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value = "pyramidal")]
    backend: Backend,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Circuit destination; defaults to the input path with a .qasm or .json extension.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, default_value = "1e-9", value_parser = positive)]
    tolerance: f64,
    /// Pyramidal only: drop exactly-zero rotations on dead branches.
    #[arg(long)]
    sparse: bool,
    /// Subtree only: render ↑-controls as X gates around ↓-controls.
    #[arg(long)]
    literal_x: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Native JSON circuit.
    #[arg(long)]
    circuit: PathBuf,
    /// Statevector the circuit should prepare.
    #[arg(long)]
    state: PathBuf,
    #[arg(long, default_value = "1e-9", value_parser = positive)]
    tolerance: f64,
}

#[derive(Args)]
struct SeparabilityArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = EPS_ANGLE, value_parser = positive)]
    eps_angle: f64,
}

#[derive(Args)]
struct QftArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "qasm")]
    format: Format,
    /// Circuit destination; printed to stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Compare the circuit unitary with the DFT matrix.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct PruneArgs {
    #[command(flatten)]
    input: Input,
    /// Node as LEVEL:POS.
    #[arg(long, value_parser = parse_node)]
    node: (usize, usize),
    /// Largest accepted 1 − |κ|.
    #[arg(long, default_value = "1e-9", value_parser = positive)]
    tolerance: f64,
    /// Pruned tree destination; defaults to the input path with a .pruned.json extension.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_node(s: &str) -> Result<(usize, usize), String> {
    let (l, p) = s.split_once(':').ok_or("expected LEVEL:POS")?;
    let level = l.trim().parse().map_err(|_| format!("bad level {l:?}"))?;
    let pos = p
        .trim()
        .parse()
        .map_err(|_| format!("bad position {p:?}"))?;
    Ok((level, pos))
}

#[derive(Args)]
struct SchmidtArgs {
    #[command(flatten)]
    input: Input,
    /// Residual norm the single-flip amplitudes must reach.
    #[arg(long, default_value = "1e-9", value_parser = positive)]
    tolerance: f64,
}

#[derive(Args)]
struct TreeArgs {
    #[command(flatten)]
    input: Input,
    /// Per-node Bloch angles as a table.
    #[arg(long)]
    dump: bool,
    /// With --dump, print JSON records instead of the table.
    #[arg(long, requires = "dump")]
    json: bool,
}

enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
    /// The report has been printed; exit 1.
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Lib(Error::ConvergenceFailure { .. }) => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Lib(e) => e.kind(),
            Failure::Io(..) => "Io",
            Failure::Usage(_) => "Usage",
            Failure::Verification(_) => "VerificationFailed",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(p, e) => format!("{}: {e}", p.display()),
            Failure::Usage(m) | Failure::Verification(m) => m.clone(),
        }
    }
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    error: String,
    kind: &'a str,
}

fn emit_error(f: &Failure) {
    let line = ErrorLine {
        error: f.message(),
        kind: f.kind(),
    };
    eprintln!(
        "{}",
        serde_json::to_string(&line).expect("error line serializes")
    );
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn read_state(path: &Path) -> Result<TargetState, Failure> {
    Ok(TargetState::parse(&read(path)?)?)
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("reports serialize")
    );
}

fn render(circuit: &Circuit, format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Qasm => export_qasm(circuit)?,
        Format::Json => circuit.to_json() + "\n",
    })
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Qasm => "qasm",
        Format::Json => "json",
    }
}

#[derive(Serialize)]
struct SynthReport {
    backend: &'static str,
    n: usize,
    fidelity: f64,
    cnot: usize,
    controlled: usize,
    gates: usize,
    output: Option<String>,
}

fn synth(a: SynthArgs) -> Outcome {
    if a.backend == Backend::Subtree && a.format == Format::Qasm {
        return Err(Failure::Usage(
            "the subtree back-end emits multi-controlled unitaries; use --format json".into(),
        ));
    }
    let path = a.input.path();
    let state = read_state(path)?;
    let tree = build_tree(&state)?;
    let circuit = match a.backend {
        Backend::Subtree => synth_subtree_with(
            &tree,
            SubtreeOptions {
                literal_x: a.literal_x,
            },
        ),
        Backend::Pyramidal => synth_pyramidal_with(&tree, PyramidalOptions { sparse: a.sparse }),
    };
    let out = apply_circuit(&circuit, &TargetState::zero(state.n())?)?;
    let f = fidelity(&out, &state)?.fidelity;
    let counts = count_gates(&circuit);
    let pass = f >= 1.0 - a.tolerance;
    let dest = a
        .output
        .clone()
        .unwrap_or_else(|| path.with_extension(extension(a.format)));
    let text = render(&circuit, a.format)?;
    if pass {
        write(&dest, &text)?;
    }
    print_json(&SynthReport {
        backend: match a.backend {
            Backend::Subtree => "subtree",
            Backend::Pyramidal => "pyramidal",
        },
        n: state.n(),
        fidelity: f,
        cnot: counts.cnot,
        controlled: counts.controlled_total,
        gates: circuit.len(),
        output: pass.then(|| dest.display().to_string()),
    });
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "fidelity {f} below 1 − {}; circuit not written",
            a.tolerance
        )))
    }
}

fn verify(a: VerifyArgs) -> Outcome {
    let text = read(&a.circuit)?;
    if !text.trim_start().starts_with('{') {
        return Err(Failure::Usage(
            "verify reads native JSON circuits only".into(),
        ));
    }
    let circuit = Circuit::from_json(&text)?;
    let state = read_state(&a.state)?;
    let out = apply_circuit(&circuit, &TargetState::zero(circuit.n())?)?;
    let report = fidelity(&out, &state)?;
    print_json(&report);
    if report.fidelity >= 1.0 - a.tolerance {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "fidelity {} below 1 − {}",
            report.fidelity, a.tolerance
        )))
    }
}

fn separability(a: SeparabilityArgs) -> Outcome {
    let tree = build_tree(&read_state(a.input.path())?)?;
    print_json(&is_separable_with(&tree, a.eps_angle)?);
    Ok(())
}

#[derive(Serialize)]
struct QftCheck {
    n: usize,
    max_deviation: f64,
}

fn qft(a: QftArgs) -> Outcome {
    let circuit = qft_circuit(a.n)?;
    let text = render(&circuit, a.format)?;
    match &a.output {
        Some(p) => write(p, &text)?,
        None => print!("{text}"),
    }
    if a.check {
        let dev = unitary_max_diff(&circuit_unitary(&circuit)?, &dft_matrix(a.n));
        print_json(&QftCheck {
            n: a.n,
            max_deviation: dev,
        });
        if dev >= 1e-10 {
            return Err(Failure::Verification(format!("DFT deviation {dev}")));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct PruneReport<'a> {
    analysis: &'a PruneAnalysis,
    /// `λ+²`
    fidelity_bound: f64,
    /// Fidelity of the restored pruned state against the input.
    fidelity: f64,
    output: String,
}

fn prune(a: PruneArgs) -> Outcome {
    let path = a.input.path();
    let state = read_state(path)?;
    let tree = build_tree(&state)?;
    let (pruned, analysis) = compress::prune(&tree, a.node, a.tolerance)?;
    let back = compress::restored_state(&pruned, &analysis)?;
    let dest = a
        .output
        .clone()
        .unwrap_or_else(|| path.with_extension("pruned.json"));
    write(&dest, &(pruned.to_json() + "\n"))?;
    print_json(&PruneReport {
        analysis: &analysis,
        fidelity_bound: analysis.lambda_plus * analysis.lambda_plus,
        fidelity: fidelity(&back, &state)?.fidelity,
        output: dest.display().to_string(),
    });
    Ok(())
}

#[derive(Serialize)]
struct TwoQubitReport {
    theta: f64,
    lambda_plus: f64,
    lambda_minus: f64,
    cnot: usize,
}

#[derive(Serialize)]
struct SchmidtReport {
    m: usize,
    angles: Vec<BasisAngles>,
    global_phase: f64,
    residual: f64,
    start: usize,
    warnings: Vec<SchmidtWarning>,
    amplitudes: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    two_qubit: Option<TwoQubitReport>,
}

fn schmidt(a: SchmidtArgs) -> Outcome {
    let state = read_state(a.input.path())?;
    let r = compress::solve_generalized_schmidt(&state, a.tolerance)?;
    let two_qubit = if state.n() == 2 {
        let s = compress::schmidt_2q(&state)?;
        Some(TwoQubitReport {
            theta: s.theta,
            lambda_plus: s.lambda_plus,
            lambda_minus: s.lambda_minus,
            cnot: count_gates(&s.circuit).cnot,
        })
    } else {
        None
    };
    print_json(&SchmidtReport {
        m: state.n(),
        angles: r.transform.angles.clone(),
        global_phase: r.global_phase,
        residual: r.residual,
        start: r.start,
        warnings: r.warnings.clone(),
        amplitudes: r.state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        two_qubit,
    });
    Ok(())
}

fn tree(a: TreeArgs) -> Outcome {
    let tree = build_tree(&read_state(a.input.path())?)?;
    if !a.dump {
        println!("{}", tree.to_json());
    } else if a.json {
        print_json(&nested_prep::dump_bloch(&tree));
    } else {
        print!("{}", tree.to_table());
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Synth(a) => synth(a),
        Command::Verify(a) => verify(a),
        Command::Separability(a) => separability(a),
        Command::Qft(a) => qft(a),
        Command::Prune(a) => prune(a),
        Command::Schmidt(a) => schmidt(a),
        Command::Tree(a) => tree(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            emit_error(&Failure::Usage(
                first.trim_start_matches("error: ").to_string(),
            ));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            emit_error(&f);
            ExitCode::from(f.code())
        }
    }
}
