//! The `fomforge` command line.
//!
//! Exit codes: 0 success, 1 parse or validation failure, 2 merge rejection,
//! 3 scenario assertion failure, 64 usage error.

use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::classify::{classify_module, ModuleKind};
use crate::io::{parse_module, ModuleDocument};
use crate::merge::{diff_foms, CurrentFom, MergeReport};
use crate::scenario::run_script_file;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;
pub const EXIT_ASSERTION: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable that turns off ANSI colour.
pub const NO_COLOR_ENV: &str = "FOMFORGE_NO_COLOR";

#[derive(Debug, Parser)]
#[command(name = "fomforge", version, about = "Compose and inspect modular FOMs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate module documents.
    Validate {
        /// Also report whether each module is standalone or dependent.
        #[arg(long)]
        classify: bool,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Merge modules, as one load set, into a composite FDD.
    Merge {
        /// MIM to start from instead of the built-in one.
        #[arg(long)]
        mim: Option<PathBuf>,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Show differences between two documents.
    Diff {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a scenario script.
    Simulate {
        script: PathBuf,
        /// Print the protocol event log.
        #[arg(long)]
        trace: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Lines,
}

struct Style {
    color: bool,
}

impl Style {
    fn paint(&self, code: &str, text: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_owned()
        }
    }

    fn error(&self, text: &str) -> String {
        self.paint("31", text)
    }

    fn good(&self, text: &str) -> String {
        self.paint("32", text)
    }
}

/// Colour is used only on a terminal and when [`NO_COLOR_ENV`] is unset.
pub fn color_enabled() -> bool {
    std::env::var_os(NO_COLOR_ENV).is_none() && std::io::stdout().is_terminal()
}

/// Runs the command line against the given streams and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let style = Style { color };
    let result = match cli.command {
        Command::Validate { classify, files } => cmd_validate(&files, classify, out, err, &style),
        Command::Merge { mim, files, output } => {
            cmd_merge(mim.as_deref(), &files, &output, out, err, &style)
        }
        Command::Diff { a, b, format } => cmd_diff(&a, &b, format, out, err),
        Command::Simulate { script, trace } => cmd_simulate(&script, trace, out, err, &style),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "{}", style.error(&format!("io error: {e}")));
        EXIT_PARSE
    })
}

fn read_document(
    path: &Path,
    err: &mut dyn Write,
    style: &Style,
) -> std::io::Result<Option<ModuleDocument>> {
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => {
            writeln!(
                err,
                "{}: {}",
                path.display(),
                style.error(&format!("cannot read: {e}"))
            )?;
            return Ok(None);
        }
    };
    match ModuleDocument::parse(bytes) {
        Ok(doc) => Ok(Some(doc)),
        Err(errors) => {
            for d in &errors.0 {
                writeln!(err, "{}:{}", path.display(), style.error(&d.to_string()))?;
            }
            Ok(None)
        }
    }
}

fn cmd_validate(
    files: &[PathBuf],
    classify: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
    style: &Style,
) -> std::io::Result<i32> {
    let mut code = EXIT_OK;
    for path in files {
        let bytes = match std::fs::read(path) {
            Ok(b) => b,
            Err(e) => {
                writeln!(
                    err,
                    "{}: {}",
                    path.display(),
                    style.error(&format!("cannot read: {e}"))
                )?;
                code = EXIT_PARSE;
                continue;
            }
        };
        match parse_module(&bytes) {
            Err(errors) => {
                for d in &errors.0 {
                    writeln!(err, "{}:{}", path.display(), style.error(&d.to_string()))?;
                }
                code = EXIT_PARSE;
            }
            Ok(parsed) => {
                for w in &parsed.warnings {
                    writeln!(err, "{}:{w}", path.display())?;
                }
                write!(out, "{}: {}", path.display(), style.good("ok"))?;
                if classify {
                    let c = classify_module(&parsed.module);
                    let kind = match c.kind {
                        ModuleKind::Standalone => "Standalone",
                        ModuleKind::Dependent => "Dependent",
                    };
                    write!(out, " {kind}")?;
                    for reason in &c.reasons {
                        write!(out, "\n  reason: {reason}")?;
                    }
                    for warning in &c.warnings {
                        write!(out, "\n  warning: {warning}")?;
                    }
                }
                writeln!(out)?;
            }
        }
    }
    Ok(code)
}

fn cmd_merge(
    mim: Option<&Path>,
    files: &[PathBuf],
    output: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
    style: &Style,
) -> std::io::Result<i32> {
    let mim = match mim {
        Some(path) => match read_document(path, err, style)? {
            Some(doc) => Some(doc.module),
            None => return Ok(EXIT_PARSE),
        },
        None => None,
    };
    let mut modules = Vec::new();
    for path in files {
        match read_document(path, err, style)? {
            Some(doc) => modules.push(doc.module),
            None => return Ok(EXIT_PARSE),
        }
    }
    let fom = match mim {
        Some(m) => CurrentFom::new(m),
        None => Ok(CurrentFom::with_default_mim()),
    };
    let result = fom.and_then(|mut fom| fom.load(&modules).map(|report| (fom, report)));
    match result {
        Ok((fom, report)) => {
            std::fs::write(output, fom.fdd())?;
            for line in report.to_lines() {
                writeln!(out, "{line}")?;
            }
            Ok(EXIT_OK)
        }
        Err(rejection) => {
            writeln!(err, "{}", style.error(&format!("rejected {rejection}")))?;
            for line in MergeReport::rejected(rejection).to_lines() {
                writeln!(out, "{line}")?;
            }
            Ok(EXIT_REJECTED)
        }
    }
}

fn cmd_diff(
    a: &Path,
    b: &Path,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    let style = Style { color: false };
    let (Some(a), Some(b)) = (
        read_document(a, err, &style)?,
        read_document(b, err, &style)?,
    ) else {
        return Ok(EXIT_PARSE);
    };
    let diff = diff_foms(&a.module, &b.module);
    match format {
        Format::Text => write!(out, "{}", diff.to_text())?,
        Format::Lines => {
            for line in diff.to_lines() {
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_simulate(
    script: &Path,
    trace: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
    style: &Style,
) -> std::io::Result<i32> {
    let report = match run_script_file(script) {
        Ok(r) => r,
        Err(e) => {
            writeln!(err, "{}: {}", script.display(), style.error(&e.to_string()))?;
            return Ok(EXIT_PARSE);
        }
    };
    for line in &report.output {
        writeln!(out, "{line}")?;
    }
    if trace {
        for event in &report.trace {
            writeln!(out, "trace: {event}")?;
        }
    }
    for failure in &report.failures {
        writeln!(err, "{}", style.error(&format!("FAILED {failure}")))?;
    }
    let passed = report.assertions - report.failures.len().min(report.assertions);
    writeln!(
        out,
        "{}",
        if report.passed() {
            style.good(&format!("{} assertions passed", report.assertions))
        } else {
            style.error(&format!(
                "{} failures, {passed} of {} assertions passed",
                report.failures.len(),
                report.assertions
            ))
        }
    )?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_ASSERTION
    })
}
