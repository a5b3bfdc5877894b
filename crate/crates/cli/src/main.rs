//! `sailkit`: conjugacy decisions, continued fractions and sails of
//! hyperbolic integer matrices, reported as JSON.

mod commands;
mod input;
mod obj;

use std::io::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sailkit_core::Error;

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "sailkit", version, about = "Conjugacy of hyperbolic toral automorphisms")]
struct Cli {
    /// Suppress the human-readable summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    /// Leave the timing block out of the report.
    #[arg(long, global = true)]
    no_timing: bool,
    /// JSON output (always on; accepted for compatibility).
    #[arg(long, global = true, hide = true)]
    json: bool,
    /// Single-line JSON instead of indented.
    #[arg(long, global = true)]
    compact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GroupArg {
    Gl,
    Sl,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DetArg {
    #[value(name = "+1")]
    Plus,
    Any,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Continued fraction of the expanding eigen-slope of a 2×2 matrix.
    Cf {
        /// Matrix: inline `[[a,b],[c,d]]`, a file path, or `-` for stdin.
        matrix: String,
    },
    /// Decide conjugacy of two matrices (2×2 or 3×3).
    Classify {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value = "gl")]
        group: GroupArg,
        /// Coefficient bound of the 3×3 witness search.
        #[arg(long)]
        search_bound: Option<u64>,
        /// Largest enumeration radius for the 3×3 invariants.
        #[arg(long)]
        radius: Option<u64>,
    },
    /// Sail of a 2×2 matrix, Klein sail or factor-sail of a 3×3 matrix.
    Sail {
        matrix: String,
        /// Number of consecutive vertices (2×2).
        #[arg(long)]
        window: Option<usize>,
        /// Enumeration radius (3×3).
        #[arg(long)]
        radius: Option<u64>,
        /// Orthant sign pattern such as `++-` (3×3, three real eigenvalues).
        #[arg(long)]
        orthant: Option<String>,
        /// Sign of the real-eigenvalue coordinate, `+` or `-` (3×3, one real
        /// eigenvalue).
        #[arg(long, allow_hyphen_values = true)]
        component: Option<String>,
        /// Write the Klein sail patch as an OBJ mesh.
        #[arg(long)]
        export_obj: Option<std::path::PathBuf>,
    },
    /// Brute-force search for a conjugator with bounded entries.
    Oracle {
        a: String,
        b: String,
        #[arg(long, default_value_t = 10)]
        bound: u64,
        #[arg(long, value_enum, default_value = "any")]
        det: DetArg,
    },
    /// Seeded property suite over every module.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

/// Result of a command: the report body, a one-paragraph summary and the
/// exit code.
pub struct Outcome {
    pub report: Value,
    pub summary: String,
    pub exit: u8,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::RegionTooSmall { .. } => "region_too_small",
        Error::BoundExhausted { .. } => "bound_exhausted",
        Error::RadiusCap { .. } => "radius_cap",
        Error::RadiusTooSmall(_) => "radius_too_small",
        Error::DimensionMismatch(_) => "dimension_mismatch",
        Error::SpectrumMismatch(_) => "spectrum_mismatch",
        Error::Internal(_) => "internal",
        _ => "domain",
    }
}

fn error_report(e: &Error) -> Value {
    let mut v = json!({ "kind": error_kind(e), "message": e.to_string() });
    match e {
        Error::RegionTooSmall { suggested_radius } => {
            v["suggested_radius"] = json!(suggested_radius);
            v["retry"] = json!(format!("--radius {suggested_radius} (and SAILKIT_MAX_RADIUS if above the cap)"));
        }
        Error::BoundExhausted { bound } => v["bound"] = json!(bound),
        _ => {}
    }
    v
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let name = match &cli.command {
        Command::Cf { .. } => "cf",
        Command::Classify { .. } => "classify",
        Command::Sail { .. } => "sail",
        Command::Oracle { .. } => "oracle",
        Command::Selftest { .. } => "selftest",
    };
    let result = match &cli.command {
        Command::Cf { matrix } => commands::cf(matrix),
        Command::Classify { a, b, group, search_bound, radius } => {
            commands::classify(a, b, *group, *search_bound, *radius)
        }
        Command::Sail { matrix, window, radius, orthant, component, export_obj } => commands::sail(
            matrix,
            commands::SailFlags {
                window: *window,
                radius: *radius,
                orthant: orthant.as_deref(),
                component: component.as_deref(),
                export_obj: export_obj.as_deref(),
            },
        ),
        Command::Oracle { a, b, bound, det } => commands::oracle(a, b, *bound, *det),
        Command::Selftest { seed, cases } => Ok(commands::selftest(*seed, *cases)),
    };
    let (mut out, summary, code) = match result {
        Ok(o) => (json!({ "schema_version": SCHEMA_VERSION, "command": name, "report": o.report }), o.summary, o.exit),
        Err(e) => (
            json!({ "schema_version": SCHEMA_VERSION, "command": name, "error": error_report(&e) }),
            format!("error: {e}"),
            2,
        ),
    };
    if !cli.no_timing {
        out["timing"] = json!({ "elapsed_ms": start.elapsed().as_secs_f64() * 1e3 });
    }
    let text = if cli.compact { serde_json::to_string(&out) } else { serde_json::to_string_pretty(&out) };
    // a closed pipe (e.g. `| head`) is not an error of the command
    let _ = writeln!(std::io::stdout(), "{}", text.expect("reports are valid JSON"));
    if !cli.quiet {
        eprintln!("{summary}");
    }
    ExitCode::from(code)
}
