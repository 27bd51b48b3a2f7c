//! The `wlab` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::local::DEFAULT_ORDER;
use crate::report::{
    classify_report, count_report, family_scan_report, flexes_report, gaps_report,
    precision_from_env, tables_report, verify_report, CurveSpec, CurveSpecFile, ReportDocument,
};
use crate::scalar::FieldDescriptor;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "wlab", version, about = "Weierstrass points of smooth plane sextics")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for batch classification (output does not depend on it).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Test hook: report a disagreement between the two weight computations.
    #[arg(long, global = true, hide = true)]
    inject_oracle_mismatch: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridField {
    Rational,
    Complex,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gap sequence at a point with the gap and Wronskian weights.
    Gaps {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        point: String,
        /// Truncation order of the local expansion.
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Classify a point or every point of a points file.
    Classify {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, required_unless_present = "points", conflicts_with = "points")]
        point: Option<String>,
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Locate and classify the flexes.
    Flexes {
        #[arg(long)]
        curve: PathBuf,
    },
    /// Flexes plus supplied points, with total-weight accounting.
    Verify {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Maximal-count tables and expected gap sequences.
    Tables,
    /// Number of q-Weierstrass points counted with weight.
    Count {
        #[arg(long)]
        genus: u64,
        #[arg(long)]
        q: u64,
    },
    /// Flex statistics over a grid of Kuribayashi sextics.
    FamilyScan {
        /// Parameter grid such as `a=0,1/2;b=-1;c=2`.
        #[arg(long)]
        grid: String,
        #[arg(long, value_enum, default_value_t = GridField::Complex)]
        field: GridField,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
}

/// Load a curve-spec file; a complex field without `precision_bits` takes
/// the environment default.
pub fn load_curve(path: &Path) -> Result<CurveSpec> {
    let text = read(path)?;
    let mut value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    if let Some(field) = value.get_mut("field").and_then(|f| f.as_object_mut()) {
        if field.get("kind").and_then(|k| k.as_str()) == Some("complex") && !field.contains_key("precision_bits") {
            field.insert("precision_bits".into(), precision_from_env()?.into());
        }
    }
    let file: CurveSpecFile =
        serde_json::from_value(value).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    file.build()
}

fn inject_mismatch(doc: &mut ReportDocument) {
    match doc.points.iter_mut().find(|p| p.wronskian_weight.is_some()) {
        Some(rec) => {
            let w = rec.wronskian_weight.expect("checked") + 1;
            rec.wronskian_weight = Some(w);
            rec.weights_agree = Some(false);
            let msg = format!(
                "gap weight {} differs from Wronskian weight {w} at ({})",
                rec.weight.unwrap_or(0),
                rec.coordinates.join(" : ")
            );
            doc.flag(msg);
        }
        None => doc.flag("injected oracle mismatch"),
    }
}

fn execute(command: &Command) -> Result<ReportDocument> {
    match command {
        Command::Gaps { curve, point, order } => {
            let spec = load_curve(curve)?;
            let p = spec.parse_point(point)?;
            gaps_report(&spec, &p, *order)
        }
        Command::Classify { curve, point, points } => {
            let spec = load_curve(curve)?;
            let pts = match (point, points) {
                (Some(p), _) => vec![spec.parse_point(p)?],
                (None, Some(file)) => spec.parse_points(&read(file)?)?,
                (None, None) => return Err(Error::Invalid("classify needs --point or --points".into())),
            };
            Ok(classify_report(&spec, &pts))
        }
        Command::Flexes { curve } => flexes_report(&load_curve(curve)?),
        Command::Verify { curve, points } => {
            let spec = load_curve(curve)?;
            let extra = match points {
                Some(file) => spec.parse_points(&read(file)?)?,
                None => Vec::new(),
            };
            verify_report(&spec, &extra)
        }
        Command::Tables => Ok(tables_report()),
        Command::Count { genus, q } => count_report(*genus, *q),
        Command::FamilyScan { grid, field } => {
            let field = match field {
                GridField::Rational => FieldDescriptor::Rational,
                GridField::Complex => FieldDescriptor::Complex {
                    precision_bits: precision_from_env()?,
                },
            };
            family_scan_report(grid, &field)
        }
    }
}

#[cfg(feature = "parallel")]
fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Invalid(format!("cannot start {n} worker threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn with_jobs<T: Send>(_jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    Ok(f())
}

/// Run the CLI on `args` (including the program name); returns the exit code.
pub fn run_cli<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    if cli.jobs == Some(0) {
        let _ = writeln!(err, "error: --jobs must be positive");
        return EXIT_INPUT;
    }
    let result = with_jobs(cli.jobs, || execute(&cli.command)).and_then(|r| r);
    let mut doc = match result {
        Ok(doc) => doc,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return if e.is_internal() { EXIT_INTERNAL } else { EXIT_INPUT };
        }
    };
    if cli.inject_oracle_mismatch {
        inject_mismatch(&mut doc);
    }
    let body = match cli.format {
        Format::Json => doc.to_json(),
        Format::Text => doc.to_text(),
    };
    if out.write_all(body.as_bytes()).is_err() {
        return EXIT_INPUT;
    }
    if doc.is_consistent() {
        EXIT_OK
    } else {
        for msg in &doc.inconsistencies {
            let _ = writeln!(err, "inconsistency: {msg}");
        }
        EXIT_INTERNAL
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_cli(std::iter::once("wlab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn count_prints_990() {
        let (code, out, _) = run(&["count", "--genus", "10", "--q", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("990"), "{out}");
    }

    #[test]
    fn unknown_flag_is_input_error() {
        let (code, _, err) = run(&["tables", "--bogus"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(!err.is_empty());
    }

    #[test]
    fn injected_mismatch_exits_2() {
        let (code, _, err) = run(&["--inject-oracle-mismatch", "tables"]);
        assert_eq!(code, EXIT_INTERNAL);
        assert!(err.contains("inconsistency"));
    }

    #[test]
    fn zero_jobs_rejected() {
        assert_eq!(run(&["--jobs", "0", "tables"]).0, EXIT_INPUT);
    }
}
