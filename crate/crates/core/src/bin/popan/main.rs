//! `popan` command-line tool.
//!
//! Exit codes: 0 success, 1 validation failure or dependency cycle,
//! 2 unreadable or unparseable input (and usage errors).

use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use popan::native::{self, NativeError};
use popan::{aml, fixtures, planner, Mode, PlanError, PopanGraph, Severity, ValidationReport};

#[derive(Parser)]
#[command(
    name = "popan",
    version,
    about = "Validate, plan and convert PoPAN product networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model (.aml or native JSON) and print every finding
    Validate {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Compute an assembly or disassembly plan
    Plan {
        path: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = PlanFormat::Text)]
        format: PlanFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert between native JSON and AutomationML (.aml)
    Convert { input: PathBuf, output: PathBuf },
    /// Write a built-in example model (generic, ev-battery)
    Fixture {
        name: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = ModelFormat::Native)]
        format: ModelFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlanFormat {
    Text,
    Structured,
    Graphdesc,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelFormat {
    Native,
    Aml,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Assembly,
    Disassembly,
}

impl From<ModeArg> for Mode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Assembly => Mode::Assembly,
            ModeArg::Disassembly => Mode::Disassembly,
        }
    }
}

/// A failed command and the exit code it maps to.
enum Failure {
    /// Validation errors or a cycle.
    Domain(String),
    /// I/O, parse or usage problems.
    Input(String),
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { path, format } => cmd_validate(&path, format),
        Command::Plan {
            path,
            mode,
            format,
            out,
        } => cmd_plan(&path, mode.into(), format, out.as_deref()),
        Command::Convert { input, output } => cmd_convert(&input, &output),
        Command::Fixture { name, out, format } => cmd_fixture(&name, &out, format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(message)) => {
            if !message.is_empty() {
                eprintln!("{message}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn is_aml(path: &Path) -> bool {
    path.extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("aml"))
}

fn load(path: &Path) -> Result<PopanGraph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let loaded = if is_aml(path) {
        aml::graph_from_aml(&text).map_err(|e| e.to_string())
    } else {
        native::graph_from_native(&text).map_err(|e: NativeError| e.to_string())
    };
    loaded.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Input(format!("cannot write output: {e}"))),
    }
}

fn use_color() -> bool {
    std::env::var_os("POPAN_NO_COLOR").is_none() && io::stdout().is_terminal()
}

fn report_text(report: &ValidationReport, color: bool) -> String {
    let paint = |code: &str, text: &str| {
        if color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_owned()
        }
    };
    let mut out = String::new();
    for finding in &report.findings {
        let line = finding.to_string();
        out.push_str(&match finding.severity {
            Severity::Error => paint("31", &line),
            Severity::Warning => paint("33", &line),
        });
        out.push('\n');
    }
    let errors = report.errors().count();
    let warnings = report.warnings().count();
    let summary = format!("{errors} error(s), {warnings} warning(s)");
    out.push_str(&if report.ok {
        paint("32", &format!("ok: {summary}"))
    } else {
        paint("31", &format!("invalid: {summary}"))
    });
    out.push('\n');
    out
}

fn cmd_validate(path: &Path, format: ReportFormat) -> CmdResult {
    let graph = load(path)?;
    let report = popan::validate(&graph);
    let text = match format {
        ReportFormat::Text => report_text(&report, use_color()),
        ReportFormat::Structured => {
            let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
            json.push('\n');
            json
        }
    };
    emit(None, &text)?;
    if report.ok {
        Ok(())
    } else {
        Err(Failure::Domain(String::new()))
    }
}

fn cmd_plan(path: &Path, mode: Mode, format: PlanFormat, out: Option<&Path>) -> CmdResult {
    let graph = load(path)?;
    let plan = planner::plan(&graph, mode).map_err(|e| match e {
        PlanError::InvalidGraph(report) => Failure::Domain(report_text(&report, false)),
        other => Failure::Domain(other.to_string()),
    })?;
    let text = match format {
        PlanFormat::Text => native::plan_to_text(&plan),
        PlanFormat::Structured => native::plan_to_json(&plan),
        PlanFormat::Graphdesc => {
            let precedence = planner::build_precedence(&graph, mode)
                .map_err(|e| Failure::Domain(e.to_string()))?;
            native::precedence_to_dot(&precedence, Some(&plan))
        }
    };
    emit(out, &text)
}

fn cmd_convert(input: &Path, output: &Path) -> CmdResult {
    let graph = load(input)?;
    let report = popan::validate(&graph);
    if !report.ok {
        return Err(Failure::Domain(format!(
            "conversion refused:\n{}",
            report_text(&report, false)
        )));
    }
    let text = if is_aml(output) {
        aml::graph_to_aml(&graph).map_err(|e| Failure::Domain(e.to_string()))?
    } else {
        native::graph_to_native(&graph)
    };
    emit(Some(output), &text)
}

fn cmd_fixture(name: &str, out: &Path, format: ModelFormat) -> CmdResult {
    let graph = fixtures::by_name(name).ok_or_else(|| {
        Failure::Input(format!(
            "unknown fixture {name:?} (known: {})",
            fixtures::NAMES.join(", ")
        ))
    })?;
    let text = match format {
        ModelFormat::Native => native::graph_to_native(&graph),
        ModelFormat::Aml => {
            aml::graph_to_aml(&graph).map_err(|e| Failure::Domain(e.to_string()))?
        }
    };
    emit(Some(out), &text)
}
