//! Command-line interface.
//!
//! Exit codes are a stable contract:
//!
//! - `0`  success (for `validate`: the document is valid)
//! - `1`  validation found error-severity findings
//! - `2`  the input failed to parse
//! - `64` usage error (bad flags, unknown mode/fixture, wrong conversion)
//! - `66` input file missing or unreadable
//! - `74` output file not writable
//!
//! `DE_PROV_COLOR` ∈ {auto, always, never} controls report coloring.

use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::environment::EncodingMode;
use crate::fixtures::{build_fixture, FixtureId};
use crate::model::{ProvDocument, QualifiedName};
use crate::notation::{export_flattened, parse_document, parse_json, serialize_json, serialize_provn, NotationError};
use crate::reasoning::{
    assess_document, assessment_to_json, backward_chain, controllers_of, controllers_to_json,
    forward_chain, SupportMatrix,
};
use crate::render::{to_dot, Direction, RenderOptions};
use crate::validation::{validate, Severity, ValidationReport};

const EXIT_OK: i32 = 0;
const EXIT_INVALID: i32 = 1;
const EXIT_PARSE: i32 = 2;
const EXIT_USAGE: i32 = 64;
const EXIT_NOINPUT: i32 = 66;
const EXIT_IOERR: i32 = 74;

#[derive(Parser)]
#[command(
    name = "de-prov",
    version,
    about = "Model, validate and query data-environment provenance documents"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Human,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConvertTarget {
    Provn,
    Json,
    Dot,
    Flat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DotDirection {
    Lr,
    Tb,
}

#[derive(Subcommand)]
enum Command {
    /// Run inference and the five constraint checks over a document
    Validate {
        /// Input file (.deprovn or .json)
        input: PathBuf,
        /// Override the document's encoding mode before validating
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, value_enum, default_value = "human")]
        format: OutputFormat,
    },
    /// Translate a document between notations
    Convert {
        input: PathBuf,
        /// Target form
        #[arg(long, value_enum)]
        to: ConvertTarget,
        /// Write here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// DOT: cluster nesting depth limit (0 = unlimited)
        #[arg(long, default_value_t = 0)]
        dot_depth: usize,
        /// DOT: graph direction
        #[arg(long, value_enum, default_value = "lr")]
        dot_direction: DotDirection,
        /// DOT: omit environment attributes from cluster labels
        #[arg(long)]
        dot_hide_attributes: bool,
    },
    /// Lineage and controller queries, as JSON
    Query {
        input: PathBuf,
        /// Downstream chain from this node id
        #[arg(long, value_name = "ID", conflicts_with_all = ["backward", "controllers"])]
        forward: Option<String>,
        /// Upstream chain from this node id
        #[arg(long, value_name = "ID", conflicts_with = "controllers")]
        backward: Option<String>,
        /// Controllers of this environment id
        #[arg(long, value_name = "ENV")]
        controllers: Option<String>,
    },
    /// Requirement assessment for a document, or the full support matrix
    Check {
        /// Input file; omit together with --matrix
        input: Option<PathBuf>,
        /// Print the 8x4 requirement-support matrix instead
        #[arg(long)]
        matrix: bool,
        #[arg(long, value_enum, default_value = "human")]
        format: OutputFormat,
    },
    /// Emit one of the shipped example documents
    Fixture {
        /// gond-nrds or clinical-trial
        id: String,
        /// Encoding mode to generate
        #[arg(long, default_value = "bundles+")]
        mode: String,
        /// Output form
        #[arg(long, value_enum, default_value = "provn")]
        to: ConvertTarget,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return code;
        }
    };
    match cli.command {
        Command::Validate { input, mode, format } => cmd_validate(&input, mode.as_deref(), format),
        Command::Convert {
            input,
            to,
            out,
            dot_depth,
            dot_direction,
            dot_hide_attributes,
        } => cmd_convert(&input, to, out.as_deref(), dot_depth, dot_direction, dot_hide_attributes),
        Command::Query {
            input,
            forward,
            backward,
            controllers,
        } => cmd_query(&input, forward, backward, controllers),
        Command::Check { input, matrix, format } => cmd_check(input.as_deref(), matrix, format),
        Command::Fixture { id, mode, to, out } => cmd_fixture(&id, &mode, to, out.as_deref()),
    }
}

fn load_document(path: &Path) -> Result<ProvDocument, i32> {
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("error: cannot read {}: {err}", path.display());
            return Err(EXIT_NOINPUT);
        }
    };
    let parsed = if text.trim_start().starts_with('{') {
        parse_json(&text).map_err(NotationError::from)
    } else {
        parse_document(&text)
    };
    parsed.map_err(|err| {
        eprintln!("error: {}: {err}", path.display());
        EXIT_PARSE
    })
}

fn parse_mode(raw: &str) -> Result<EncodingMode, i32> {
    raw.parse::<EncodingMode>().map_err(|err| {
        eprintln!("error: {err}");
        EXIT_USAGE
    })
}

fn parse_node(raw: &str) -> Result<QualifiedName, i32> {
    raw.parse::<QualifiedName>().map_err(|err| {
        eprintln!("error: {err}");
        EXIT_USAGE
    })
}

fn emit(out: Option<&Path>, content: &str) -> i32 {
    match out {
        Some(path) => match std::fs::write(path, content) {
            Ok(()) => EXIT_OK,
            Err(err) => {
                eprintln!("error: cannot write {}: {err}", path.display());
                EXIT_IOERR
            }
        },
        None => {
            print!("{content}");
            let _ = std::io::stdout().flush();
            EXIT_OK
        }
    }
}

fn use_color() -> bool {
    match std::env::var("DE_PROV_COLOR").as_deref() {
        Ok("always") => true,
        Ok("never") => false,
        _ => std::io::stdout().is_terminal(),
    }
}

fn paint(text: &str, code: &str, color: bool) -> String {
    if color {
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_owned()
    }
}

fn human_report(report: &ValidationReport) -> String {
    let color = use_color();
    let mut out = String::new();
    let verdict = if report.is_valid() {
        paint("valid", "32", color)
    } else {
        paint("invalid", "31;1", color)
    };
    out.push_str(&format!("verdict: {verdict}\n"));
    out.push_str(&format!("inferred statements: {}\n", report.inferred.len()));
    for statement in &report.inferred {
        out.push_str(&format!("  + {statement}\n"));
    }
    out.push_str(&format!("findings: {}\n", report.findings.len()));
    for finding in &report.findings {
        let severity = match finding.severity {
            Severity::Error => paint("error", "31", color),
            Severity::Warning => paint("warning", "33", color),
        };
        out.push_str(&format!(
            "  [{severity}] {}: {}\n",
            finding.category, finding.message
        ));
    }
    out
}

fn cmd_validate(input: &Path, mode: Option<&str>, format: OutputFormat) -> i32 {
    let mut doc = match load_document(input) {
        Ok(doc) => doc,
        Err(code) => return code,
    };
    if let Some(raw) = mode {
        match parse_mode(raw) {
            Ok(mode) => doc.mode = mode,
            Err(code) => return code,
        }
    }
    let report = validate(&doc);
    let rendered = match format {
        OutputFormat::Human => human_report(&report),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report.to_json()).expect("valid json");
            s.push('\n');
            s
        }
    };
    print!("{rendered}");
    if report.is_valid() {
        EXIT_OK
    } else {
        EXIT_INVALID
    }
}

fn cmd_convert(
    input: &Path,
    to: ConvertTarget,
    out: Option<&Path>,
    dot_depth: usize,
    dot_direction: DotDirection,
    dot_hide_attributes: bool,
) -> i32 {
    let doc = match load_document(input) {
        Ok(doc) => doc,
        Err(code) => return code,
    };
    let rendered = match to {
        ConvertTarget::Provn => serialize_provn(&doc),
        ConvertTarget::Json => serialize_json(&doc),
        ConvertTarget::Dot => {
            let options = RenderOptions {
                show_attributes: !dot_hide_attributes,
                depth_limit: dot_depth,
                direction: match dot_direction {
                    DotDirection::Lr => Direction::LeftRight,
                    DotDirection::Tb => Direction::TopBottom,
                },
            };
            to_dot(&doc, &options)
        }
        ConvertTarget::Flat => match export_flattened(&doc) {
            Ok(text) => text,
            Err(err) => {
                eprintln!("error: {err}");
                return EXIT_USAGE;
            }
        },
    };
    emit(out, &rendered)
}

fn cmd_query(
    input: &Path,
    forward: Option<String>,
    backward: Option<String>,
    controllers: Option<String>,
) -> i32 {
    let doc = match load_document(input) {
        Ok(doc) => doc,
        Err(code) => return code,
    };
    let given = [&forward, &backward, &controllers]
        .iter()
        .filter(|o| o.is_some())
        .count();
    if given != 1 {
        eprintln!("error: pass exactly one of --forward, --backward, --controllers");
        return EXIT_USAGE;
    }
    let value = if let Some(raw) = forward {
        let node = match parse_node(&raw) {
            Ok(node) => node,
            Err(code) => return code,
        };
        match forward_chain(&doc, &node) {
            Ok(result) => result.to_json(),
            Err(err) => {
                eprintln!("error: {err}");
                return EXIT_USAGE;
            }
        }
    } else if let Some(raw) = backward {
        let node = match parse_node(&raw) {
            Ok(node) => node,
            Err(code) => return code,
        };
        match backward_chain(&doc, &node) {
            Ok(result) => result.to_json(),
            Err(err) => {
                eprintln!("error: {err}");
                return EXIT_USAGE;
            }
        }
    } else {
        let raw = controllers.expect("one option is present");
        let env = match parse_node(&raw) {
            Ok(env) => env,
            Err(code) => return code,
        };
        match controllers_of(&doc, &env) {
            Ok(result) => controllers_to_json(&result),
            Err(err) => {
                eprintln!("error: {err}");
                return EXIT_USAGE;
            }
        }
    };
    let mut rendered = serde_json::to_string_pretty(&value).expect("valid json");
    rendered.push('\n');
    print!("{rendered}");
    EXIT_OK
}

fn human_matrix() -> String {
    let mut out = String::new();
    out.push_str(&format!("{:<76}", "Requirement"));
    for mode in SupportMatrix::MODES {
        out.push_str(&format!("{:<13}", mode.name()));
    }
    out.push('\n');
    for requirement in crate::reasoning::Requirement::ALL {
        out.push_str(&format!(
            "{:<76}",
            format!("{} {}", requirement.code(), requirement.name())
        ));
        for mode in SupportMatrix::MODES {
            let cell = if SupportMatrix::cell(requirement, mode) {
                "yes"
            } else {
                "-"
            };
            out.push_str(&format!("{cell:<13}"));
        }
        out.push('\n');
    }
    out
}

fn human_assessment(doc: &ProvDocument) -> String {
    let color = use_color();
    let mut out = String::new();
    out.push_str(&format!("mode: {}\n", doc.mode.name()));
    for assessment in assess_document(doc) {
        let status = match (assessment.exercised, assessment.supported) {
            (false, _) => "not exercised".to_owned(),
            (true, true) => paint("supported", "32", color),
            (true, false) => paint("UNSUPPORTED", "31;1", color),
        };
        out.push_str(&format!(
            "{:<4}{:<72}{status}\n",
            assessment.requirement.code(),
            assessment.requirement.name()
        ));
        if let Some(advice) = &assessment.advice {
            out.push_str(&format!("    -> {advice}\n"));
        }
    }
    out
}

fn cmd_check(input: Option<&Path>, matrix: bool, format: OutputFormat) -> i32 {
    if matrix {
        if input.is_some() {
            eprintln!("error: --matrix takes no input file");
            return EXIT_USAGE;
        }
        let rendered = match format {
            OutputFormat::Human => human_matrix(),
            OutputFormat::Json => {
                let mut s =
                    serde_json::to_string_pretty(&SupportMatrix::to_json()).expect("valid json");
                s.push('\n');
                s
            }
        };
        print!("{rendered}");
        return EXIT_OK;
    }
    let Some(input) = input else {
        eprintln!("error: pass an input file or --matrix");
        return EXIT_USAGE;
    };
    let doc = match load_document(input) {
        Ok(doc) => doc,
        Err(code) => return code,
    };
    let rendered = match format {
        OutputFormat::Human => human_assessment(&doc),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&assessment_to_json(&assess_document(&doc)))
                .expect("valid json");
            s.push('\n');
            s
        }
    };
    print!("{rendered}");
    EXIT_OK
}

fn cmd_fixture(id: &str, mode: &str, to: ConvertTarget, out: Option<&Path>) -> i32 {
    let fixture_id: FixtureId = match id.parse() {
        Ok(id) => id,
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_USAGE;
        }
    };
    let mode = match parse_mode(mode) {
        Ok(mode) => mode,
        Err(code) => return code,
    };
    let (doc, omissions) = match build_fixture(fixture_id, mode) {
        Ok(built) => built,
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_USAGE;
        }
    };
    if !omissions.omitted.is_empty() {
        eprintln!(
            "warning: mode `{}` cannot represent: {}",
            omissions.mode.name(),
            omissions.omitted.join(", ")
        );
    }
    let rendered = match to {
        ConvertTarget::Provn => serialize_provn(&doc),
        ConvertTarget::Json => serialize_json(&doc),
        ConvertTarget::Dot => to_dot(&doc, &RenderOptions::default()),
        ConvertTarget::Flat => match export_flattened(&doc) {
            Ok(text) => text,
            Err(err) => {
                eprintln!("error: {err}");
                return EXIT_USAGE;
            }
        },
    };
    emit(out, &rendered)
}
