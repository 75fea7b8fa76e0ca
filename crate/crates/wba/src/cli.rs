//! Command-line surface: `dims`, `verify` and `export`.
//!
//! Exit codes: `0` success, `1` verification failure (or an I/O error),
//! `2` usage error or unsupported parameters.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use wba_core::algebra22::{decompose_22, g0_unit, g1_unit, g2_unit, Sym2};
use wba_core::gram::{gram_matrix, is_invertible, GhatFamily};
use wba_core::matrixunits::UnitRegistry;
use wba_core::partitions::Partition;
use wba_core::symgroup::Orientation;
use wba_core::tensor::DenseOperator;
use wba_core::walled::{algebra_dimension, arc_operator, q_projector, ArcConfig};

use crate::format::{self, Format};
use crate::verify::{run_suite, worst_offender, Suite};

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for a failed verification or an I/O error.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for bad arguments or unsupported parameters.
pub const EXIT_USAGE: i32 = 2;

/// Partially transposed permutation operators: dimensions, verification and export.
#[derive(Debug, Parser)]
#[command(name = "wba", version, about)]
pub struct Cli {
    /// Command to run.
    #[command(subcommand)]
    pub command: Command,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the block structure and dimensions of the algebra.
    Dims {
        /// Number of slots on each side of the wall (1..=3).
        #[arg(long)]
        p: usize,
        /// Local dimension.
        #[arg(long)]
        d: usize,
    },
    /// Run a verification suite and print one JSON report per claim.
    Verify {
        /// Suite to run.
        suite: Suite,
        /// Slots per side; defaults to 2 for `a22` and 3 for `squeeze`.
        #[arg(long)]
        p: Option<usize>,
        /// Local dimension.
        #[arg(long)]
        d: usize,
        /// Absolute tolerance on the normalized deviation.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Write an operator (or the Gram matrix) to a file.
    Export(ExportArgs),
}

/// Arguments of `export`.
#[derive(Debug, clap::Args)]
pub struct ExportArgs {
    /// Object to export.
    pub object: Object,
    /// Slots per side (for `unit`: the degree of the symmetric group).
    #[arg(long)]
    pub p: Option<usize>,
    /// Local dimension.
    #[arg(long)]
    pub d: usize,
    /// Number of arcs for `arc`, index of the projector for `q`.
    #[arg(long)]
    pub k: Option<usize>,
    /// Young diagram of a `unit`, e.g. `2,1`.
    #[arg(long)]
    pub mu: Option<String>,
    /// Row index of a `unit` (1-based).
    #[arg(long, default_value_t = 1)]
    pub i: usize,
    /// Column index of a `unit` (1-based).
    #[arg(long, default_value_t = 1)]
    pub j: usize,
    /// Orientation of a `unit`.
    #[arg(long, value_enum, default_value_t = OrientArg::Lr)]
    pub orient: OrientArg,
    /// Labels of `g2`/`g0` (`SA`) or `g1` (`SA,AS`).
    #[arg(long)]
    pub label: Option<String>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file (standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Exportable objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Object {
    /// Matrix unit `E^μ_ij` on `p` slots.
    Unit,
    /// Arc operator `V^(k)`.
    Arc,
    /// Projector `Q^(k)`.
    Q,
    /// `G^(2)_kl` of `A^d_{2,2}`.
    G2,
    /// `G^(1)_[ij][kl]` of `A^d_{2,2}`.
    G1,
    /// `G^(0)_ij` of `A^d_{2,2}`.
    G0,
    /// Closed-form Gram matrix `B̂^(p−1)`.
    Gram,
}

/// Orientation flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrientArg {
    /// Left to right.
    Lr,
    /// Right to left.
    Rl,
}

impl From<OrientArg> for Orientation {
    fn from(o: OrientArg) -> Self {
        match o {
            OrientArg::Lr => Orientation::LeftToRight,
            OrientArg::Rl => Orientation::RightToLeft,
        }
    }
}

/// Failure of a command, carrying its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad or unsupported arguments.
    #[error("{0}")]
    Usage(String),
    /// Verification failed; the message names the worst offender.
    #[error("{0}")]
    Failed(String),
    /// I/O or format failure.
    #[error(transparent)]
    Io(#[from] anyhow::Error),
}

impl CliError {
    /// Process exit code.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failed(_) | CliError::Io(_) => EXIT_FAILURE,
        }
    }
}

impl From<wba_core::Error> for CliError {
    fn from(e: wba_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<format::FormatError> for CliError {
    fn from(e: format::FormatError) -> Self {
        match e {
            format::FormatError::Unsupported(m) => CliError::Usage(m),
            other => CliError::Io(other.into()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.into())
    }
}

/// Parses arguments, runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli, &mut io::stdout().lock()) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("wba: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command, writing reports and tables to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Dims { p, d } => {
            let table = dims(*p, *d)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&table).map_err(anyhow::Error::from)?)?;
            Ok(())
        }
        Command::Verify { suite, p, d, tol } => {
            let p = match (p, suite) {
                (Some(p), _) => *p,
                (None, Suite::A22) => 2,
                (None, Suite::Squeeze) => 3,
                (None, _) => return Err(CliError::Usage(format!("suite {suite:?} needs --p"))),
            };
            if tol.is_nan() || *tol < 0.0 {
                return Err(CliError::Usage(format!("tolerance must be non-negative, got {tol}")));
            }
            let reports = run_suite(*suite, p, *d, *tol)?;
            for r in &reports {
                writeln!(out, "{}", serde_json::to_string(r).map_err(anyhow::Error::from)?)?;
            }
            out.flush()?;
            match worst_offender(&reports) {
                None => Ok(()),
                Some(w) => Err(CliError::Failed(format!(
                    "{} failed: deviation {:e} > tolerance {:e} (p={}, d={}, {} cases, worst: {})",
                    w.claim_id, w.max_abs_deviation, w.tolerance, w.p, w.d, w.n_cases, w.worst_case
                ))),
            }
        }
        Command::Export(args) => export(args, out),
    }
}

/// Dimension table for `dims`.
pub fn dims(p: usize, d: usize) -> Result<serde_json::Value, CliError> {
    if d < 2 {
        return Err(CliError::Usage(format!("dims needs d ≥ 2, got {d}")));
    }
    match p {
        1 => {
            let d2 = d * d;
            Ok(json!({
                "p": 1,
                "d": d,
                "blocks": [
                    {"label": "1-P+", "kind": "scalar", "size": 1, "rank": d2 - 1},
                    {"label": "P+", "kind": "scalar", "size": 1, "rank": 1},
                ],
                "structure": "C^2",
                "dim": algebra_dimension(1, d)?,
            }))
        }
        2 => {
            let dec = decompose_22(d)?;
            let structure = dec.structure();
            let mut v = serde_json::to_value(&dec).map_err(anyhow::Error::from)?;
            v["p"] = json!(2);
            v["structure"] = json!(structure);
            Ok(v)
        }
        3 => {
            let traces: Vec<f64> = (0..=p).map(|k| q_projector(k, p, d).map(|q| q.trace().re)).collect::<Result<_, _>>()?;
            let inv = is_invertible(p, d)?;
            let fam = GhatFamily::new(p, d)?;
            let pure = fam.pure_basis(true)?;
            Ok(json!({
                "p": 3,
                "d": d,
                "dim": algebra_dimension(p, d)?,
                "q_traces": traces,
                "ideal_m2": {
                    "invertible": inv.invertible,
                    "witnesses": inv.witnesses.iter().map(Partition::parts).collect::<Vec<_>>(),
                    "labels": pure.len(),
                    "dropped": pure.dropped().len(),
                    "dim": pure.len() * pure.len(),
                },
            }))
        }
        _ => Err(CliError::Usage(format!("dims supports p ∈ {{1, 2, 3}}, got {p}"))),
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str, object: Object) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("export {object:?} needs --{flag}")))
}

fn sym(c: char) -> Result<Sym2, CliError> {
    match c {
        'S' | 's' => Ok(Sym2::S),
        'A' | 'a' => Ok(Sym2::A),
        _ => Err(CliError::Usage(format!("expected S or A, found {c:?}"))),
    }
}

fn sym_pair(s: &str) -> Result<(Sym2, Sym2), CliError> {
    let cs: Vec<char> = s.trim().chars().collect();
    match cs.as_slice() {
        [a, b] => Ok((sym(*a)?, sym(*b)?)),
        _ => Err(CliError::Usage(format!("expected two letters from {{S, A}}, found {s:?}"))),
    }
}

fn parse_partition(s: &str) -> Result<Partition, CliError> {
    let parts = s
        .split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(format!("bad diagram {s:?}: {e}")))?;
    Ok(Partition::new(parts)?)
}

/// Builds the operator named by `args` (everything except `gram`).
pub fn build_operator(args: &ExportArgs) -> Result<DenseOperator, CliError> {
    let d = args.d;
    if d < 2 {
        return Err(CliError::Usage(format!("export needs d ≥ 2, got {d}")));
    }
    let label = || args.label.as_deref().ok_or_else(|| CliError::Usage(format!("export {:?} needs --label", args.object)));
    let p_max = |p: usize| {
        if (1..=3).contains(&p) {
            Ok(p)
        } else {
            Err(CliError::Usage(format!("p must lie in 1..=3, got {p}")))
        }
    };
    match args.object {
        Object::Unit => {
            let mu = parse_partition(args.mu.as_deref().ok_or_else(|| CliError::Usage("export Unit needs --mu".into()))?)?;
            let p = p_max(mu.weight())?;
            if args.p.is_some_and(|q| q != p) {
                return Err(CliError::Usage(format!("--p {} does not match the weight of {mu}", args.p.unwrap_or(0))));
            }
            let reg = UnitRegistry::new(p, d)?;
            let m = reg.irrep_index(&mu)?;
            let dim = mu.irrep_dimension();
            if !(1..=dim).contains(&args.i) || !(1..=dim).contains(&args.j) {
                return Err(CliError::Usage(format!("indices must lie in 1..={dim} for {mu}")));
            }
            Ok(reg.unit(m, args.i - 1, args.j - 1, args.orient.into()).clone())
        }
        Object::Arc => {
            let p = p_max(need(args.p, "p", args.object)?)?;
            Ok(arc_operator(&ArcConfig::new(p, d, need(args.k, "k", args.object)?)?))
        }
        Object::Q => {
            let p = p_max(need(args.p, "p", args.object)?)?;
            Ok(q_projector(need(args.k, "k", args.object)?, p, d)?)
        }
        Object::G2 => {
            let (k, l) = sym_pair(label()?)?;
            Ok(g2_unit(k, l, d)?.op)
        }
        Object::G1 => {
            let text = label()?;
            let (a, b) = text
                .split_once(',')
                .ok_or_else(|| CliError::Usage(format!("g1 labels look like SA,AS; found {text:?}")))?;
            Ok(g1_unit(sym_pair(a)?, sym_pair(b)?, d)?.op)
        }
        Object::G0 => {
            let (i, j) = sym_pair(label()?)?;
            Ok(g0_unit(i, j, d)?.op)
        }
        Object::Gram => Err(CliError::Usage("the Gram matrix is not an operator".into())),
    }
}

fn export(args: &ExportArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut sink: Box<dyn Write + '_> = match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(&mut *stdout),
    };
    if args.object == Object::Gram {
        let p = need(args.p, "p", args.object)?;
        let m = gram_matrix(p, args.d)?.matrix();
        match args.format {
            Format::Json => writeln!(sink, "{}", format::matrix_to_json(&m))?,
            Format::Csv => format::write_matrix_csv(&m, &mut sink)?,
            Format::Binary => {
                return Err(CliError::Usage("the Gram matrix is exported as json or csv only".into()));
            }
        }
    } else {
        let op = build_operator(args)?;
        match args.format {
            Format::Json => writeln!(sink, "{}", format::operator_to_json(&op))?,
            Format::Csv => format::write_operator_csv(&op, &mut sink)?,
            Format::Binary => format::write_binary(&op, &mut sink)?,
        }
    }
    sink.flush()?;
    Ok(())
}
