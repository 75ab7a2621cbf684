//! Command-line frontend.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::dimacs::{parse_dimacs, parse_model, parse_variable_list, write_model, DimacsDocument};
use crate::lit::Var;
use crate::oracle::{solve_exhaustive, OracleVerdict, DEFAULT_VAR_LIMIT};
use crate::pipeline::{
    preprocess, preprocess_and_emit, Outcome, PipelineConfig, PipelineStats, Technique,
};
use crate::reconstruct::{check_extension, extend_model, parse_map_file};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SANITY: i32 = 3;
pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;

/// ER definitions allowed when `er` is enabled without `--er-defs`.
const ER_DEFS_WHEN_ENABLED: usize = 16;

#[derive(Debug, Parser)]
#[command(
    name = "satprep",
    version,
    about = "CNF preprocessor with model reconstruction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simplify a CNF and write the reduced formula plus a map file.
    ///
    /// Exit status 0 when done, 20 when the formula was found unsatisfiable.
    Preprocess {
        input: PathBuf,
        /// Reduced formula (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Reconstruction information for `extend`.
        #[arg(long)]
        map: Option<PathBuf>,
        #[command(flatten)]
        techniques: TechniqueArgs,
    },
    /// Turn a model of the reduced formula into a model of the original.
    ///
    /// Exit status 3 when the result fails the built-in consistency check.
    Extend {
        #[arg(long)]
        map: PathBuf,
        /// Solver output or a bare literal list.
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Preprocess without writing anything and print counters.
    Stats {
        input: PathBuf,
        #[command(flatten)]
        techniques: TechniqueArgs,
    },
    /// Exhaustive reference solver for small formulas (10 = SAT, 20 = UNSAT).
    #[command(hide = true)]
    Oracle {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VAR_LIMIT)]
        limit: usize,
    },
}

#[derive(Debug, Args)]
struct TechniqueArgs {
    /// Run exactly these techniques (ve,bce,ee,hte,probe,vivify,subsume,er).
    /// Default: everything but er.
    #[arg(long, value_delimiter = ',')]
    enable: Option<Vec<Technique>>,
    /// Remove techniques from the enabled set.
    #[arg(long, value_delimiter = ',')]
    disable: Vec<Technique>,
    /// Variables whose models must be preserved exactly.
    #[arg(long)]
    whitelist: Option<PathBuf>,
    /// Variables to eliminate regardless of formula growth.
    #[arg(long)]
    blacklist: Option<PathBuf>,
    /// Rename the remaining variables to 1..k.
    #[arg(long)]
    compress: bool,
    /// Maximum number of technique loop iterations.
    #[arg(long, default_value_t = 5)]
    loops: usize,
    /// Maximum number of ER definitions [default: 16 when er is enabled].
    #[arg(long)]
    er_defs: Option<usize>,
    /// Minimum number of occurrences of a literal pair for ER.
    #[arg(long, default_value_t = 4)]
    er_min: usize,
}

/// An error that ends the invocation with a given exit status.
struct Failure {
    status: i32,
    message: String,
}

fn fail(status: i32, message: impl Into<String>) -> Failure {
    Failure {
        status,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| fail(EXIT_FAILURE, format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| {
        fail(
            EXIT_FAILURE,
            format!("cannot write {}: {e}", path.display()),
        )
    })
}

/// Writes to stdout. A closed pipe (`satprep ... | head`) is not an error.
fn emit(bytes: &[u8]) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    match out.write_all(bytes).and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
            Err(fail(EXIT_FAILURE, format!("cannot write to stdout: {e}")))
        }
        _ => Ok(()),
    }
}

fn read_cnf(path: &Path) -> Result<DimacsDocument, Failure> {
    parse_dimacs(&read(path)?).map_err(|e| fail(EXIT_FAILURE, format!("{}: {e}", path.display())))
}

fn read_vars(path: &Path) -> Result<BTreeSet<Var>, Failure> {
    parse_variable_list(&read(path)?)
        .map_err(|e| fail(EXIT_FAILURE, format!("{}: {e}", path.display())))
}

impl TechniqueArgs {
    fn config(&self) -> Result<PipelineConfig, Failure> {
        let mut cfg = PipelineConfig::default();
        if let Some(enable) = &self.enable {
            cfg.enabled = enable.iter().copied().collect();
        }
        for t in &self.disable {
            cfg.enabled.remove(t);
        }
        cfg.er_max_definitions = match self.er_defs {
            Some(n) => n,
            None if cfg.enabled.contains(&Technique::Er) => ER_DEFS_WHEN_ENABLED,
            None => 0,
        };
        cfg.er_min_pair = self.er_min;
        cfg.loop_limit = self.loops;
        cfg.compress_output = self.compress;
        if let Some(p) = &self.whitelist {
            cfg.whitelist = read_vars(p)?;
        }
        if let Some(p) = &self.blacklist {
            cfg.blacklist = read_vars(p)?;
        }
        cfg.validate()
            .map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
        Ok(cfg)
    }
}

fn cmd_preprocess(
    input: &Path,
    out: Option<&Path>,
    map: Option<&Path>,
    techniques: &TechniqueArgs,
) -> Result<i32, Failure> {
    let cfg = techniques.config()?;
    let doc = read_cnf(input)?;
    let (mut cnf, mut map_bytes) = (Vec::new(), Vec::new());
    let outcome = preprocess_and_emit(&doc, &cfg, &mut cnf, &mut map_bytes)
        .map_err(|e| fail(EXIT_FAILURE, e.to_string()))?;
    match out {
        Some(p) => write(p, &cnf)?,
        None => emit(&cnf)?,
    }
    if let Some(p) = map {
        write(p, &map_bytes)?;
    }
    Ok(match outcome {
        Outcome::Reduced { .. } => EXIT_OK,
        Outcome::Unsatisfiable { .. } => EXIT_UNSAT,
    })
}

fn cmd_extend(map: &Path, model: &Path, out: Option<&Path>) -> Result<i32, Failure> {
    let map_file = parse_map_file(&read(map)?)
        .map_err(|e| fail(EXIT_FAILURE, format!("{}: {e}", map.display())))?;
    let reduced = parse_model(&read(model)?)
        .map_err(|e| fail(EXIT_FAILURE, format!("{}: {e}", model.display())))?;
    let extended =
        extend_model(&reduced, &map_file).map_err(|e| fail(EXIT_FAILURE, e.to_string()))?;
    if !check_extension(&extended, &map_file) {
        return Err(fail(
            EXIT_SANITY,
            "extended model violates clauses recorded in the map file",
        ));
    }
    let text = write_model(&extended);
    match out {
        Some(p) => write(p, text.as_bytes())?,
        None => emit(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

/// Line-oriented `key value` report.
pub fn format_stats(stats: &PipelineStats, unsatisfiable: bool) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "status {}\n",
        if unsatisfiable {
            "unsatisfiable"
        } else {
            "reduced"
        }
    ));
    out.push_str(&format!(
        "variables {} -> {}\n",
        stats.variables_before, stats.variables_after
    ));
    out.push_str(&format!(
        "clauses {} -> {} ({:.1}%)\n",
        stats.clauses_before,
        stats.clauses_after,
        stats.clause_reduction()
    ));
    for (name, value) in stats.counters() {
        out.push_str(&format!("{name} {value}\n"));
    }
    out
}

fn cmd_stats(input: &Path, techniques: &TechniqueArgs) -> Result<i32, Failure> {
    let cfg = techniques.config()?;
    let (f, _) = read_cnf(input)?.to_formula();
    let outcome = preprocess(f, &cfg).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let unsat = matches!(outcome, Outcome::Unsatisfiable { .. });
    emit(format_stats(outcome.stats(), unsat).as_bytes())?;
    Ok(if unsat { EXIT_UNSAT } else { EXIT_OK })
}

fn cmd_oracle(input: &Path, limit: usize) -> Result<i32, Failure> {
    let (f, _) = read_cnf(input)?.to_formula();
    match solve_exhaustive(&f, limit).map_err(|e| fail(EXIT_FAILURE, e.to_string()))? {
        OracleVerdict::Satisfiable(m) => {
            emit(format!("s SATISFIABLE\n{}", write_model(&m)).as_bytes())?;
            Ok(EXIT_SAT)
        }
        OracleVerdict::Unsatisfiable => {
            emit(b"s UNSATISFIABLE\n")?;
            Ok(EXIT_UNSAT)
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Preprocess {
            input,
            out,
            map,
            techniques,
        } => cmd_preprocess(input, out.as_deref(), map.as_deref(), techniques),
        Command::Extend { map, model, out } => cmd_extend(map, model, out.as_deref()),
        Command::Stats { input, techniques } => cmd_stats(input, techniques),
        Command::Oracle { input, limit } => cmd_oracle(input, *limit),
    };
    match result {
        Ok(status) => status,
        Err(f) => {
            eprintln!("satprep: {}", f.message);
            f.status
        }
    }
}
