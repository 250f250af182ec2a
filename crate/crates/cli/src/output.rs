use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use mdsvar::{Error, VerifyReport};

/// Command failure, carrying the process exit code class.
#[derive(Debug)]
pub enum Failure {
    /// A check or certification failed (exit 1).
    Check(String),
    /// Arguments violate a precondition (exit 2).
    Usage(String),
    /// Reading, writing or parsing a file failed (exit 3).
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Check(m) | Failure::Usage(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Format(_) => Failure::Io(msg),
            Error::SamplingExhausted { .. } | Error::CertificationFailed { .. } | Error::MaskNotFullRank { .. } => {
                Failure::Check(msg)
            }
            _ => Failure::Usage(msg),
        }
    }
}

pub fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Write `text` to `path` atomically (temp file in the same directory, then
/// rename), or to stdout when no path is given.
pub fn emit(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(text.as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| Failure::Io(format!("stdout: {e}")));
    };
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

/// One-line summary plus every failing check, on stderr.
pub fn summarize(title: &str, report: &VerifyReport) {
    let failed = report.failures().count();
    eprintln!(
        "{title}: {} checks, {} failed -> {}",
        report.len(),
        failed,
        if report.overall { "PASS" } else { "FAIL" }
    );
    for c in report.failures() {
        eprintln!("  {c}");
    }
}

pub fn parse_levels(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Usage(format!("cannot parse levels {text:?}; use e.g. 1,2,3 or 1-3"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad())?;
                let b: usize = b.trim().parse().map_err(|_| bad())?;
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}
