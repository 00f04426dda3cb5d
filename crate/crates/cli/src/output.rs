use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use strategizer_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("{0} acceptance criteria failed")]
    BatteryFailed(usize),
}

impl CliError {
    /// 2 for bad input, 3 for violated preconditions, 4 for resource caps.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Precondition(_)) => 3,
            CliError::Core(Error::ResourceCap(_)) => 4,
            CliError::Core(Error::Lp(_)) | CliError::BatteryFailed(_) => 1,
            CliError::Core(_) | CliError::Io { .. } | CliError::Usage(_) => 2,
        }
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes through a temporary sibling, then renames over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    let result = fs::File::create(&tmp)
        .and_then(|mut f| f.write_all(contents.as_bytes()).and_then(|_| f.sync_all()))
        .and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io_err)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Prints `value` as JSON and optionally writes the same bytes to `out`.
pub fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let json = to_json(value);
    print!("{json}");
    match out {
        Some(p) => write_atomic(p, &json),
        None => Ok(()),
    }
}
