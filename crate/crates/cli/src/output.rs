use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use chrono::{SecondsFormat, Utc};
use serde::Serialize;
use zenoptics::io::RunManifest;

use crate::CliResult;

/// `<prefix><suffix>`, e.g. `out/run` + `_N4.csv`.
pub fn prefixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = OsString::from(prefix.as_os_str());
    s.push(suffix);
    PathBuf::from(s)
}

pub fn write_file(path: &Path, contents: &[u8]) -> CliResult {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

pub fn to_stdout(contents: &[u8]) -> CliResult {
    let mut out = std::io::stdout().lock();
    out.write_all(contents)
        .and_then(|_| out.flush())
        .context("cannot write to stdout")?;
    Ok(())
}

pub fn json_bytes<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).context("cannot serialize JSON")?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn write_manifest<C: Serialize>(
    prefix: &Path,
    command: &str,
    args: Vec<String>,
    config: &C,
    seed: Option<u64>,
) -> CliResult {
    let manifest = RunManifest {
        command: command.to_owned(),
        args,
        config: serde_json::to_value(config).context("cannot serialize configuration")?,
        tool_version: env!("CARGO_PKG_VERSION").to_owned(),
        timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
        seed,
    };
    let text = manifest.to_json()?;
    write_file(&prefixed(prefix, ".manifest.json"), text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_is_extended_not_joined() {
        assert_eq!(
            prefixed(Path::new("out/run"), "_N4.csv"),
            PathBuf::from("out/run_N4.csv")
        );
        assert_eq!(
            prefixed(Path::new("run"), ".manifest.json"),
            PathBuf::from("run.manifest.json")
        );
    }
}
