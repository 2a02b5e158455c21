//! Atomic artifact writing: content is rendered fully in memory, written to
//! a sibling temp file and renamed into place, so a crashed or failed run
//! never leaves a truncated output behind.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use rkamp_core::Result;

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut tmp_name = OsString::from(".");
    tmp_name.push(path.file_name().unwrap_or_default());
    tmp_name.push(".tmp");
    let tmp: PathBuf = path.with_file_name(tmp_name);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Deterministic joined-name fragment for multi-scheme artifacts.
pub fn join_names(names: &[String]) -> String {
    names.join("+")
}
