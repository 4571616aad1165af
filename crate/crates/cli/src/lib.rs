//! `orlicz` command-line front end.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod commands;
pub mod defaults;
pub mod io;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {what}: {msg}")]
    Parse { what: String, msg: String },
    #[error(transparent)]
    Core(#[from] orlicz_core::Error),
}

impl CliError {
    /// 1 parse/IO, 2 precondition violation, 3 non-convergence.
    pub fn exit_code(&self) -> i32 {
        use orlicz_core::Error as E;
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => 1,
            CliError::Core(e) => match e {
                E::InvalidGrid(_) | E::GridMismatch { .. } | E::InvalidInput(_) => 1,
                E::NoProgress { .. } | E::TruncationUnreliable { .. } | E::QuadratureFailure(_) => 3,
                _ => 2,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "orlicz", version, about = "Log-concave functions under Orlicz weights")]
pub struct Cli {
    /// Output format of the report.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Directory for CSV series meant for plotting.
    #[arg(long, global = true)]
    pub plot_data: Option<PathBuf>,
    /// Print the table of numeric defaults and exit.
    #[arg(long)]
    pub show_defaults: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args)]
pub struct WeightArg {
    /// Weight, e.g. `constant`, `power:q=2`, `gaussian_density`, `stretched_exp:alpha=0.5`.
    #[arg(long, default_value = "constant")]
    pub weight: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a weight against the admissibility conditions.
    CheckWeight {
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
    /// Orlicz moment of a function.
    Moment {
        #[arg(long)]
        function: PathBuf,
        #[command(flatten)]
        weight: WeightArg,
        /// `R,m` override of the integration grid.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Legendre transform of the potential.
    Legendre {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        grid: Option<String>,
        /// `R,m` of the dual grid; chosen from the slopes when absent.
        #[arg(long)]
        dual_grid: Option<String>,
    },
    /// Asplund sum `f (+) t.g`.
    Asplund {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        other: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long)]
        grid: Option<String>,
    },
    /// Superlevel set `{f >= s}`.
    LevelSet {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        s: f64,
    },
    /// Euclidean curvature measure, the pushforward of `f omega` under the gradient.
    CurvatureEuclidean {
        #[arg(long)]
        function: PathBuf,
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long)]
        grid: Option<String>,
        /// Bin atoms on a dual grid of spacing `h`; co-located atoms are merged otherwise.
        #[arg(long)]
        bin: bool,
    },
    /// Spherical curvature measure of a function with compact support.
    CurvatureSpherical {
        #[arg(long)]
        function: PathBuf,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Curvature measure of a convex body.
    CurvatureBody {
        #[arg(long)]
        body: PathBuf,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Anisotropic weighted total variation.
    Tv {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        body: PathBuf,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Total variation against the integral of level-set perimeters.
    CoareaCheck {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        body: PathBuf,
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long, default_value_t = defaults::COAREA_LEVELS)]
        levels: usize,
    },
    /// First variation of the moment along `f (+) t.g`.
    VariationCheck {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        perturbation: PathBuf,
        #[command(flatten)]
        weight: WeightArg,
        /// Comma-separated `t` values.
        #[arg(long)]
        ladder: Option<String>,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// First variation of the dual volume along the Wulff family `[h_K + t g]`.
    GeometricVariation {
        #[arg(long)]
        body: PathBuf,
        #[command(flatten)]
        weight: WeightArg,
        /// `const:c` for `g = c`, or `support` for `g = h_K` (dilations).
        #[arg(long, default_value = "const:1")]
        g: String,
        #[arg(long)]
        ladder: Option<String>,
    },
    /// Solve the even discrete Minkowski problem.
    Solve {
        /// Measure CSV with header `mass,x1[,x2]`.
        #[arg(long)]
        measure: PathBuf,
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long, default_value_t = orlicz_core::minkowski_solver::solve::DEFAULT_KKT_TOL)]
        kkt_tol: f64,
        /// `R,m` of the dual grid.
        #[arg(long)]
        grid: Option<String>,
        /// Proceed when the solvability probe is inconclusive.
        #[arg(long)]
        force: bool,
        #[arg(long, default_value_t = orlicz_core::minkowski_solver::solve::DEFAULT_MAX_ITERATIONS)]
        max_iterations: usize,
    },
    /// Recompute the curvature measure of a solution on a finer grid and compare.
    Verify {
        /// Function spec, or a `solve` report.
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        measure: PathBuf,
        #[command(flatten)]
        weight: WeightArg,
    },
}

/// Result of one command before it is written out.
#[derive(Debug, Default)]
pub struct Report {
    pub result: Value,
    pub warnings: Vec<String>,
    /// Measure CSV for `--format csv`.
    pub measure_csv: Option<String>,
    /// `(file name, csv text)` series for `--plot-data`.
    pub plots: Vec<(String, String)>,
    /// Exit code for reports that are written but signal a violated condition.
    pub status: i32,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckWeight { .. } => "check-weight",
            Command::Moment { .. } => "moment",
            Command::Legendre { .. } => "legendre",
            Command::Asplund { .. } => "asplund",
            Command::LevelSet { .. } => "level-set",
            Command::CurvatureEuclidean { .. } => "curvature-euclidean",
            Command::CurvatureSpherical { .. } => "curvature-spherical",
            Command::CurvatureBody { .. } => "curvature-body",
            Command::Tv { .. } => "tv",
            Command::CoareaCheck { .. } => "coarea-check",
            Command::VariationCheck { .. } => "variation-check",
            Command::GeometricVariation { .. } => "geometric-variation",
            Command::Solve { .. } => "solve",
            Command::Verify { .. } => "verify",
        }
    }
}

/// `path,value` rows of every leaf of `v`.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let key = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, x)| walk(&key(k), x, out)),
            Value::Array(a) => a
                .iter()
                .enumerate()
                .for_each(|(i, x)| walk(&key(&i.to_string()), x, out)),
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

fn csv_text(rows: &[(String, String)]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"]).expect("in-memory write");
    for (k, v) in rows {
        w.write_record([k, v]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn write_file(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(cli: &Cli, name: &str, report: &Report, seconds: f64) -> Result<(), CliError> {
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(dir) = &cli.plot_data {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.clone(),
            source,
        })?;
        for (file, text) in &report.plots {
            write_file(&dir.join(file), text)?;
        }
    }
    let text = match cli.format {
        Format::Json => {
            let envelope = json!({
                "command": name,
                "result": report.result,
                "warnings": report.warnings,
                "timing": { "seconds": seconds },
            });
            let mut s = serde_json::to_string_pretty(&envelope).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => match &report.measure_csv {
            Some(m) => m.clone(),
            None => csv_text(&flatten(&report.result)),
        },
    };
    match &cli.out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if cli.show_defaults {
        println!(
            "{}",
            serde_json::to_string_pretty(&defaults::table()).expect("defaults serialize")
        );
        return 0;
    }
    let Some(command) = &cli.command else {
        eprintln!("error: a subcommand is required (see --help)");
        return 1;
    };
    let start = Instant::now();
    let outcome = commands::execute(command).and_then(|report| {
        emit(&cli, command.name(), &report, start.elapsed().as_secs_f64())?;
        Ok(report.status)
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
