//! Flat `key = value` scenario files.

use std::fs;
use std::path::Path;

use crate::args::Params;
use crate::error::CliError;

/// Fills every flag left unset in `params` from the file at `path`.
///
/// Blank lines and `#` comments are skipped; anything after a `#` on a value
/// line is dropped too. Unknown keys and malformed lines are rejected with
/// their line number.
pub fn load_into(params: &mut Params, path: &Path) -> Result<(), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    apply(params, &text).map_err(|msg| CliError::Usage(format!("{}: {msg}", path.display())))
}

/// Applies config text to `params` (flags already set win).
pub fn apply(params: &mut Params, text: &str) -> Result<(), String> {
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected `key = value`", i + 1));
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(format!("line {}: expected `key = value`", i + 1));
        }
        if key == "config" {
            return Err(format!("line {}: config files cannot include other config files", i + 1));
        }
        params.fill_default(key, value).map_err(|msg| format!("line {}: {msg}", i + 1))?;
    }
    Ok(())
}
