//! Path checks and atomic output files.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use tempfile::NamedTempFile;

pub fn check_input(path: &Path) -> Result<()> {
    if !path.is_file() {
        bail!(PathError(format!("input file '{}' does not exist", path.display())));
    }
    Ok(())
}

fn parent_of(path: &Path) -> &Path {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

pub fn check_output(path: &Path) -> Result<()> {
    let dir = parent_of(path);
    if !dir.is_dir() {
        bail!(PathError(format!("output directory '{}' does not exist", dir.display())));
    }
    if path.is_dir() {
        bail!(PathError(format!("output path '{}' is a directory", path.display())));
    }
    Ok(())
}

pub fn check_output_dir(path: &Path) -> Result<()> {
    if path.exists() && !path.is_dir() {
        bail!(PathError(format!("'{}' exists and is not a directory", path.display())));
    }
    if !parent_of(path).is_dir() {
        bail!(PathError(format!(
            "parent of output directory '{}' does not exist",
            path.display()
        )));
    }
    Ok(())
}

/// Raised for unusable paths, before any work starts.
#[derive(Debug)]
pub struct PathError(pub String);

impl std::fmt::Display for PathError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for PathError {}

/// `<path><suffix>`, e.g. `g.edges` + `.meta`.
pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Collects output files and writes them all at the end, each through a
/// temporary file in the destination directory and a rename, so a failed
/// run leaves no partial outputs behind.
#[derive(Default)]
pub struct Outputs {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Outputs {
    pub fn add(&mut self, path: impl Into<PathBuf>, contents: impl Into<Vec<u8>>) {
        self.files.push((path.into(), contents.into()));
    }

    pub fn commit(self) -> Result<()> {
        let mut staged = Vec::with_capacity(self.files.len());
        for (path, bytes) in self.files {
            let mut tmp = NamedTempFile::new_in(parent_of(&path))
                .with_context(|| format!("creating temporary file for '{}'", path.display()))?;
            tmp.write_all(&bytes)?;
            tmp.as_file().sync_all()?;
            staged.push((tmp, path));
        }
        for (tmp, path) in staged {
            tmp.persist(&path)
                .with_context(|| format!("writing '{}'", path.display()))?;
            log::info!("wrote {}", path.display());
        }
        Ok(())
    }
}
