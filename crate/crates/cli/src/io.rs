//! File and stream plumbing. A path of `-` means stdin or stdout.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use opsched::solvers::SolveResult;
use opsched::{Instance, Schedule};

use crate::CliError;

pub fn read_text(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

/// Writes `text` to `path`, or to `stdout` when the path is `-` or absent.
pub fn write_text(path: Option<&str>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        None | Some("-") => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
        Some(p) => {
            if let Some(dir) = Path::new(p).parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            }
            fs::write(p, text).map_err(|e| CliError::Io(format!("{p}: {e}")))
        }
    }
}

pub fn read_instance(path: &str) -> Result<Instance, CliError> {
    Instance::from_json(&read_text(path)?).map_err(|e| CliError::Format(format!("{path}: {e}")))
}

/// Accepts either a bare schedule or a solver result that carries one.
pub fn read_schedule(path: &str) -> Result<Schedule, CliError> {
    let text = read_text(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{path}: {e}")))?;
    if value.get("status").is_some() {
        let result: SolveResult =
            serde_json::from_value(value).map_err(|e| CliError::Format(format!("{path}: {e}")))?;
        return result
            .schedule
            .ok_or_else(|| CliError::Format(format!("{path}: solver result has no schedule")));
    }
    serde_json::from_value(value).map_err(|e| CliError::Format(format!("{path}: {e}")))
}
