//! The command-line driver. Every command prints a canonical JSON report
//! and exits 0 on PASS, 1 on FAIL and 2 on input errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::cosheaf::{check_cosheaf, cosheafify, costalk, is_smooth, Precosheaf};
use crate::error::{Error, Result};
use crate::pro::{is_rudimentary_at_depth, DEFAULT_WINDOW};
use crate::report::{CheckReport, Witness};
use crate::sheaf::{check_sheaf, sheafify, Presheaf};
use crate::site::validate_site;
use crate::topo::{demo_names, find_demo};
use crate::value::ValueCategory;

use super::{canonical_string, load, precosheaf_json, presheaf_json, report_json, Codec, Document};

pub const DEFAULT_DEPTH: usize = 6;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_CASES: usize = 100;

#[derive(Debug, Parser)]
#[command(name = "cosheaf", about = "Exact (co)sheaf checks on finite sites")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the category and coverage axioms of a site document.
    Validate { site: PathBuf },
    /// Check the cosheaf condition of a precosheaf.
    CheckCosheaf {
        precosheaf: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Check the sheaf condition of a presheaf.
    CheckSheaf { presheaf: PathBuf },
    /// Apply the plus construction twice; optionally write the result.
    Cosheafify {
        precosheaf: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the sheaf-side plus construction twice.
    Sheafify {
        presheaf: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The costalk at a declared point, with its rudimentarity verdict.
    Costalk {
        precosheaf: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Whether the cosheafification takes rudimentary values.
    Smooth {
        precosheaf: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Run a built-in demo.
    Demo {
        name: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Cross-check both colimit formulas and the plus laws on random sites.
    OracleSuite {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CASES)]
        cases: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
}

fn precosheaf_arg(path: &Path) -> Result<Document> {
    match load(path)? {
        d @ (Document::SetPrecosheaf(_) | Document::AbPrecosheaf(_)) => Ok(d),
        d => Err(Error::Document {
            pointer: "/kind".into(),
            message: format!("expected a precosheaf, found a {}", d.kind()),
        }),
    }
}

fn presheaf_arg(path: &Path) -> Result<Document> {
    match load(path)? {
        d @ (Document::SetPresheaf(_) | Document::AbPresheaf(_)) => Ok(d),
        d => Err(Error::Document {
            pointer: "/kind".into(),
            message: format!("expected a presheaf, found a {}", d.kind()),
        }),
    }
}

fn write_out(path: &Path, v: &serde_json::Value) -> Result<()> {
    std::fs::write(path, canonical_string(v))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn cosheafify_report<K: Codec>(
    a: &Arc<Precosheaf<K>>,
    depth: usize,
    out: Option<&Path>,
) -> Result<CheckReport> {
    let c = cosheafify(a, depth)?;
    if let Some(p) = out {
        write_out(p, &precosheaf_json(&c.value)?)?;
    }
    let values = json!(c.value.describe());
    let mut r = if c.result_is_cosheaf {
        CheckReport::pass("cosheafify", "COSHEAF")
    } else {
        CheckReport::fail(
            "cosheafify",
            "NOT-COSHEAF",
            Witness::new("result-not-cosheaf").detail(values.clone()),
        )
    };
    r = r
        .with_trace(format!("plus coseparated: {}", c.plus_coseparated))
        .with_trace(format!("values: {values}"));
    Ok(
        if c.value.is_rudimentary() && !a.site.coverage.chains.iter().any(Option::is_some) {
            r
        } else {
            r.at_depth(depth)
        },
    )
}

fn sheafify_report<K: Codec>(a: &Presheaf<K>, out: Option<&Path>) -> Result<CheckReport> {
    let s = sheafify(a)?;
    if let Some(p) = out {
        write_out(p, &presheaf_json(&s.value)?)?;
    }
    let values = json!(s.value.describe());
    let r = if s.result_is_sheaf {
        CheckReport::pass("sheafify", "SHEAF")
    } else {
        CheckReport::fail(
            "sheafify",
            "NOT-SHEAF",
            Witness::new("result-not-sheaf").detail(values.clone()),
        )
    };
    Ok(
        r.with_trace(format!("plus separated: {}", s.plus_separated))
            .with_trace(format!("values: {values}")),
    )
}

fn costalk_report<K: ValueCategory>(
    a: &Precosheaf<K>,
    label: &str,
    depth: usize,
) -> Result<CheckReport> {
    let p = a
        .site
        .point(label)
        .ok_or_else(|| Error::InvalidPoint(format!("site declares no point {label:?}")))?;
    let c = costalk(a, p)?;
    let v = is_rudimentary_at_depth(&c.tower, depth, DEFAULT_WINDOW);
    let r = if v.rudimentary {
        CheckReport::pass("costalk", v.label())
    } else {
        CheckReport::fail(
            "costalk",
            v.label(),
            Witness::new("growth-profile")
                .point(label)
                .level(v.failing_level.unwrap_or(0))
                .detail(v.profile_json()),
        )
    };
    let r = r.with_trace(format!("costalk: {}", c.tower.describe().join(" <- ")));
    Ok(if p.unbounded || !c.tower.is_rudimentary() {
        r.at_depth(depth)
    } else {
        r
    })
}

/// Executes a parsed command.
pub fn execute(cmd: &Command) -> Result<CheckReport> {
    match cmd {
        Command::Validate { site } => match load(site)? {
            Document::Site(s) => validate_site(&s),
            d => Err(Error::Document {
                pointer: "/kind".into(),
                message: format!("expected a site, found a {}", d.kind()),
            }),
        },
        Command::CheckCosheaf { precosheaf, depth } => match precosheaf_arg(precosheaf)? {
            Document::SetPrecosheaf(a) => check_cosheaf(&a, *depth),
            Document::AbPrecosheaf(a) => check_cosheaf(&a, *depth),
            _ => unreachable!("filtered by kind"),
        },
        Command::CheckSheaf { presheaf } => match presheaf_arg(presheaf)? {
            Document::SetPresheaf(a) => check_sheaf(&a),
            Document::AbPresheaf(a) => check_sheaf(&a),
            _ => unreachable!("filtered by kind"),
        },
        Command::Cosheafify {
            precosheaf,
            depth,
            out,
        } => match precosheaf_arg(precosheaf)? {
            Document::SetPrecosheaf(a) => cosheafify_report(&a, *depth, out.as_deref()),
            Document::AbPrecosheaf(a) => cosheafify_report(&a, *depth, out.as_deref()),
            _ => unreachable!("filtered by kind"),
        },
        Command::Sheafify { presheaf, out } => match presheaf_arg(presheaf)? {
            Document::SetPresheaf(a) => sheafify_report(&a, out.as_deref()),
            Document::AbPresheaf(a) => sheafify_report(&a, out.as_deref()),
            _ => unreachable!("filtered by kind"),
        },
        Command::Costalk {
            precosheaf,
            point,
            depth,
        } => match precosheaf_arg(precosheaf)? {
            Document::SetPrecosheaf(a) => costalk_report(&a, point, *depth),
            Document::AbPrecosheaf(a) => costalk_report(&a, point, *depth),
            _ => unreachable!("filtered by kind"),
        },
        Command::Smooth { precosheaf, depth } => match precosheaf_arg(precosheaf)? {
            Document::SetPrecosheaf(a) => is_smooth(&a, *depth),
            Document::AbPrecosheaf(a) => is_smooth(&a, *depth),
            _ => unreachable!("filtered by kind"),
        },
        Command::Demo { name, depth } => {
            let demo = find_demo(name).ok_or_else(|| {
                Error::Unsupported(format!(
                    "unknown demo {name:?}; available: {}",
                    demo_names().join(", ")
                ))
            })?;
            let r = demo.run(*depth)?;
            let matched = r.label == demo.expected;
            Ok(r.with_trace(format!(
                "demo {}: expected {}, {}",
                demo.name,
                demo.expected,
                if matched { "matched" } else { "MISMATCH" }
            )))
        }
        Command::OracleSuite { seed, cases, depth } => {
            crate::oracle::oracle_suite(*seed, *cases, *depth)
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// writes the report to `out` and diagnostics to `err`. Returns the exit
/// code.
pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            let _ = out.write_all(canonical_string(&report_json(&report)).as_bytes());
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Entry point for the binary.
pub fn run() -> i32 {
    run_with(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
