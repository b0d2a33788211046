//! Line-oriented scenario scripts driving an [`Rti`].
//!
//! One command per line, `#` starts a comment, tokens are separated by
//! whitespace. File arguments are relative to the script's directory.
//!
//! ```text
//! create <fed> [--mim <file>] <module-file>...
//! join <federate> <fed> [<module-file>...]
//! mom <fed>
//! reqmod <fed> federation|federate:<name> <index>
//! reqmim <fed>
//! handle <fed> <class>
//! publish|subscribe <fed> <federate> <class>
//! resign <fed> <federate>
//! destroy <fed>
//! expect ok
//! expect error [<ruleId>]
//! expect line <key>=<value>
//! expect payload <file>
//! expect unchanged
//! ```
//!
//! `expect` lines assert on the most recent command. `expect line` looks
//! for an exact line in its output, `expect payload` compares the last
//! report payload (or the FDD printed by `mom`) with a file byte for byte,
//! and `expect unchanged` compares the output with the first run of the
//! same command text. A failing command must be followed by `expect error`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::federation::{fdd_parses_back, FederationError, Rti, Scope};
use crate::io::ModuleDocument;
use crate::rule::RuleId;

/// A line the runner could not understand. Nothing after it runs.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssertionFailure {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for AssertionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScenarioReport {
    /// Command output, prefixed with the script line number.
    pub output: Vec<String>,
    /// Successful protocol events across all federations, in order.
    pub trace: Vec<String>,
    pub assertions: usize,
    pub failures: Vec<AssertionFailure>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CommandError {
    rule: RuleId,
    message: String,
}

impl From<FederationError> for CommandError {
    fn from(e: FederationError) -> Self {
        CommandError {
            rule: e.rule(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Success {
    lines: Vec<String>,
    payload: Option<Arc<[u8]>>,
}

struct Last {
    line: usize,
    text: String,
    result: Result<Success, CommandError>,
    /// Whether an `expect` already looked at a failure.
    checked: bool,
}

struct Runner {
    base: PathBuf,
    rti: Rti,
    report: ScenarioReport,
    last: Option<Last>,
    first_outputs: HashMap<String, Vec<String>>,
    seen_events: BTreeMap<String, usize>,
}

/// Runs a script held in memory, resolving files against `base`.
pub fn run_script(text: &str, base: &Path) -> Result<ScenarioReport, ScriptError> {
    let mut runner = Runner {
        base: base.to_owned(),
        rti: Rti::new(),
        report: ScenarioReport::default(),
        last: None,
        first_outputs: HashMap::new(),
        seen_events: BTreeMap::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        runner.step(i + 1, line)?;
    }
    runner.settle();
    Ok(runner.report)
}

/// Reads and runs a script file.
pub fn run_script_file(path: &Path) -> Result<ScenarioReport, ScriptError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScriptError {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    run_script(&text, path.parent().unwrap_or(Path::new(".")))
}

impl Runner {
    fn step(&mut self, line: usize, text: &str) -> Result<(), ScriptError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let syntax = |message: String| ScriptError { line, message };
        if tokens[0] == "expect" {
            return self.expect(line, &tokens[1..]).map_err(syntax);
        }
        self.settle();
        let result = self.command(&tokens).map_err(syntax)?;
        if let Ok(success) = &result {
            self.report
                .output
                .extend(success.lines.iter().map(|l| format!("{line}: {l}")));
            self.first_outputs
                .entry(text.to_owned())
                .or_insert_with(|| success.lines.clone());
        } else if let Err(e) = &result {
            self.report
                .output
                .push(format!("{line}: error {}", e.message));
        }
        let federation = if tokens[0] == "join" {
            tokens.get(2)
        } else {
            tokens.get(1)
        };
        self.collect_trace(federation.copied());
        self.last = Some(Last {
            line,
            text: text.to_owned(),
            result,
            checked: false,
        });
        Ok(())
    }

    /// Records an unexpected failure of the previous command.
    fn settle(&mut self) {
        if let Some(last) = self.last.as_mut() {
            if let (Err(e), false) = (&last.result, last.checked) {
                self.report.failures.push(AssertionFailure {
                    line: last.line,
                    message: format!("unexpected error {}", e.message),
                });
                last.checked = true;
            }
        }
    }

    fn collect_trace(&mut self, federation: Option<&str>) {
        let Some(fed) = federation else { return };
        let Ok(events) = self.rti.with(fed, |f| Ok(f.event_log().to_vec())) else {
            return;
        };
        let seen = self.seen_events.entry(fed.to_owned()).or_insert(0);
        for event in &events[*seen..] {
            self.report.trace.push(format!("{fed}: {event}"));
        }
        *seen = events.len();
    }

    fn load(&self, file: &str) -> Result<ModuleDocument, CommandError> {
        let path = self.base.join(file);
        let bytes = std::fs::read(&path).map_err(|e| CommandError {
            rule: RuleId::Malformed,
            message: format!(
                "[{}] cannot read {}: {e}",
                RuleId::Malformed,
                path.display()
            ),
        })?;
        ModuleDocument::parse(bytes).map_err(|e| CommandError {
            rule: e.rules().first().copied().unwrap_or(RuleId::Malformed),
            message: format!("{file}: {e}"),
        })
    }

    fn load_all(&self, files: &[&str]) -> Result<Vec<ModuleDocument>, CommandError> {
        files.iter().map(|f| self.load(f)).collect()
    }

    /// `Err(String)` is a script syntax error; `Ok(Err)` a command failure.
    fn command(&mut self, tokens: &[&str]) -> Result<Result<Success, CommandError>, String> {
        let arity = |min: usize, max: usize| {
            let n = tokens.len() - 1;
            if n < min || n > max {
                Err(format!(
                    "{} takes {min}..={max} arguments, got {n}",
                    tokens[0]
                ))
            } else {
                Ok(())
            }
        };
        let ok = |lines: Vec<String>| {
            Ok(Ok(Success {
                lines,
                payload: None,
            }))
        };
        match tokens[0] {
            "create" => {
                arity(1, usize::MAX)?;
                let fed = tokens[1];
                let (mim, files) = match tokens.get(2) {
                    Some(&"--mim") => {
                        let file = tokens.get(3).ok_or("--mim needs a file")?;
                        (Some(*file), &tokens[4..])
                    }
                    _ => (None, &tokens[2..]),
                };
                let result = (|| {
                    let mim = mim.map(|f| self.load(f)).transpose()?;
                    let modules = self.load_all(files)?;
                    let snap = self.rti.create_federation_execution(fed, modules, mim)?;
                    Ok(Success {
                        lines: vec![format!("created {fed} generation={}", snap.generation)],
                        payload: None,
                    })
                })();
                Ok(result)
            }
            "join" => {
                arity(2, usize::MAX)?;
                let (federate, fed) = (tokens[1], tokens[2]);
                let result = (|| {
                    let modules = self.load_all(&tokens[3..])?;
                    let (handle, report) =
                        self.rti.join_federation_execution(federate, fed, modules)?;
                    let mut lines = vec![format!("joined {federate} handle={handle}")];
                    if let Some(report) = report {
                        lines.extend(report.to_lines());
                    }
                    Ok(Success {
                        lines,
                        payload: None,
                    })
                })();
                Ok(result)
            }
            "mom" => {
                arity(1, 1)?;
                let result = self.rti.with(tokens[1], |f| {
                    let snap = f.mom_snapshot();
                    let mut lines = snap.to_lines();
                    lines.push(format!(
                        "HLAcurrentFDD.parsesBack={}",
                        fdd_parses_back(f.current_fom())
                    ));
                    Ok(Success {
                        lines,
                        payload: Some(snap.current_fdd.into_bytes().into()),
                    })
                });
                Ok(result.map_err(Into::into))
            }
            "reqmod" => {
                arity(3, 3)?;
                let scope = match tokens[2] {
                    "federation" => Scope::Federation,
                    s => match s.strip_prefix("federate:") {
                        Some(name) if !name.is_empty() => Scope::Federate(name.to_owned()),
                        _ => {
                            return Err(format!(
                                "bad scope {s}; expected federation or federate:<name>"
                            ))
                        }
                    },
                };
                let index: usize = tokens[3]
                    .parse()
                    .map_err(|_| format!("bad module index {}", tokens[3]))?;
                let result = self
                    .rti
                    .request_module_data(tokens[1], &scope, index)
                    .map(|r| Success {
                        lines: vec![format!("report {scope} {index} bytes={}", r.payload.len())],
                        payload: Some(r.payload),
                    });
                Ok(result.map_err(Into::into))
            }
            "reqmim" => {
                arity(1, 1)?;
                let result = self.rti.request_mim_data(tokens[1]).map(|r| Success {
                    lines: vec![format!("report mim bytes={}", r.payload.len())],
                    payload: Some(r.payload),
                });
                Ok(result.map_err(Into::into))
            }
            "handle" => {
                arity(2, 2)?;
                Ok(
                    match self.rti.get_object_class_handle(tokens[1], tokens[2]) {
                        Ok(h) => return ok(vec![format!("handle.{}={h}", tokens[2])]),
                        Err(e) => Err(e.into()),
                    },
                )
            }
            "publish" | "subscribe" => {
                arity(3, 3)?;
                let (fed, federate, class) = (tokens[1], tokens[2], tokens[3]);
                let result = if tokens[0] == "publish" {
                    self.rti.publish(fed, federate, class)
                } else {
                    self.rti.subscribe(fed, federate, class)
                };
                Ok(match result {
                    Ok(h) => return ok(vec![format!("{}d {federate} {class}={h}", tokens[0])]),
                    Err(e) => Err(e.into()),
                })
            }
            "resign" => {
                arity(2, 2)?;
                Ok(match self.rti.resign_federate(tokens[1], tokens[2]) {
                    Ok(()) => return ok(vec![format!("resigned {}", tokens[2])]),
                    Err(e) => Err(e.into()),
                })
            }
            "destroy" => {
                arity(1, 1)?;
                self.collect_trace(Some(tokens[1]));
                Ok(match self.rti.destroy_federation_execution(tokens[1]) {
                    Ok(()) => {
                        self.report.trace.push(format!("{}: destroyed", tokens[1]));
                        self.seen_events.remove(tokens[1]);
                        return ok(vec![format!("destroyed {}", tokens[1])]);
                    }
                    Err(e) => Err(e.into()),
                })
            }
            other => Err(format!("unknown command {other}")),
        }
    }

    fn expect(&mut self, line: usize, args: &[&str]) -> Result<(), String> {
        let last = self
            .last
            .as_mut()
            .ok_or("expect with no preceding command")?;
        last.checked = true;
        self.report.assertions += 1;
        let failure = match (args, &last.result) {
            (["ok"], Ok(_)) => None,
            (["ok"], Err(e)) => Some(format!("expected ok, got {}", e.message)),
            (["error"], Err(_)) => None,
            (["error", rule], Err(e)) => (e.rule.as_str() != *rule)
                .then(|| format!("expected error[{rule}], got error[{}]", e.rule)),
            (["error", ..], Ok(_)) => {
                Some(format!("expected error, but `{}` succeeded", last.text))
            }
            (["line", words @ ..], Ok(s)) if !words.is_empty() => {
                let wanted = words.join(" ");
                (!s.lines.contains(&wanted))
                    .then(|| format!("no output line `{wanted}` in [{}]", s.lines.join("; ")))
            }
            (["payload", file], Ok(s)) => {
                let path = self.base.join(file);
                let expected = std::fs::read(&path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                match &s.payload {
                    None => Some(format!("`{}` produced no payload", last.text)),
                    Some(p) if **p == *expected => None,
                    Some(p) => Some(format!(
                        "payload ({} bytes) differs from {file} ({} bytes)",
                        p.len(),
                        expected.len()
                    )),
                }
            }
            (["unchanged"], Ok(s)) => match self.first_outputs.get(&last.text) {
                Some(first) if *first == s.lines => None,
                Some(first) => Some(format!(
                    "output [{}] changed from [{}]",
                    s.lines.join("; "),
                    first.join("; ")
                )),
                None => unreachable!("successful commands record their first output"),
            },
            (["line" | "payload" | "unchanged", ..], Err(e)) => {
                Some(format!("command failed: {}", e.message))
            }
            _ => return Err(format!("bad expect arguments: {}", args.join(" "))),
        };
        if let Some(message) = failure {
            self.report
                .failures
                .push(AssertionFailure { line, message });
        }
        Ok(())
    }
}
