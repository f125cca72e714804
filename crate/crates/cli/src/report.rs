//! Output envelopes and the exit-code table.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

pub const FORMAT_VERSION: u32 = 1;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Config = 2,
    Io = 3,
    ThresholdFail = 4,
    KeyReuse = 5,
}

#[derive(Debug)]
pub struct Failure {
    pub code: ExitCode,
    pub error: anyhow::Error,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

impl Failure {
    pub fn config(e: impl Into<anyhow::Error>) -> Self {
        Self { code: ExitCode::Config, error: e.into() }
    }

    pub fn io(e: impl Into<anyhow::Error>) -> Self {
        Self { code: ExitCode::Io, error: e.into() }
    }
}

impl From<owsg::error::Error> for Failure {
    fn from(e: owsg::error::Error) -> Self {
        use owsg::error::Error as E;
        let code = match e {
            E::KeyReuse => ExitCode::KeyReuse,
            E::Decode(_) => ExitCode::Io,
            _ => ExitCode::Config,
        };
        Self { code, error: e.into() }
    }
}

impl From<owsg::error::DecodeError> for Failure {
    fn from(e: owsg::error::DecodeError) -> Self {
        Self::io(e)
    }
}

pub type CliResult<T = ()> = Result<T, Failure>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| Failure::io(anyhow::Error::new(e).context(format!("reading {}", path.display()))))
}

pub fn write(path: &Path, bytes: &[u8]) -> CliResult {
    fs::write(path, bytes).map_err(|e| Failure::io(anyhow::Error::new(e).context(format!("writing {}", path.display()))))
}

/// Run-dependent fields: wall clock, tool version, and anything in `extra`.
fn metadata(extra: Option<Value>) -> Value {
    let generated = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut m = json!({ "generated_unix": generated, "tool_version": env!("CARGO_PKG_VERSION") });
    if let Some(Value::Object(extra)) = extra {
        m.as_object_mut().expect("object").extend(extra);
    }
    m
}

/// Where a report goes: a file, or stdout when unset.
#[derive(Debug, Clone)]
pub struct Sink {
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl Sink {
    fn emit_text(&self, text: &str) -> CliResult {
        match &self.out {
            Some(p) => write(p, text.as_bytes()),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(Failure::io)
            }
        }
    }

    /// Everything except `metadata` is a pure function of the inputs.
    pub fn envelope(&self, command: &str, params: Value, result: Value, extra: Option<Value>) -> Value {
        json!({
            "format_version": FORMAT_VERSION,
            "command": command,
            "seed": self.seed,
            "params": params,
            "result": result,
            "metadata": metadata(extra),
        })
    }

    pub fn json(&self, command: &str, params: Value, result: Value, extra: Option<Value>) -> CliResult {
        let v = self.envelope(command, params, result, extra);
        let text = serde_json::to_string_pretty(&v).map_err(Failure::io)?;
        self.emit_text(&(text + "\n"))
    }

    /// Rows as CSV under `#` header lines, or as a JSON array under `format = json`.
    pub fn rows<S: Serialize>(&self, command: &str, params: Value, rows: &[S], extra: Option<Value>) -> CliResult {
        match self.format {
            Format::Json => self.json(command, params, serde_json::to_value(rows).map_err(Failure::io)?, extra),
            Format::Csv => {
                let body = owsg::analysis::to_csv(rows)?;
                let meta = metadata(extra);
                let text = format!(
                    "# format_version={FORMAT_VERSION}\n# command={command}\n# seed={}\n# params={params}\n# metadata={meta}\n{body}",
                    self.seed
                );
                self.emit_text(&text)
            }
        }
    }
}
