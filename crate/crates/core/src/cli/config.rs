//! `--config PATH`: a line-oriented `key=value` file whose entries become
//! flags unless the same flag is already on the command line.

use std::path::Path;

use super::CliError;

/// Flags that take no value; `key=true` turns them on.
const SWITCHES: &[&str] = &["window", "diameter"];

pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key=value", lineno + 1))
        })?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(CliError::Usage(format!(
                "config line {}: bad key {k:?}",
                lineno + 1
            )));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(argv: &[String]) -> Option<(usize, String)> {
    argv.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            argv.get(i + 1).map(|p| (i, p.clone()))
        } else {
            a.strip_prefix("--config=").map(|p| (i, p.to_string()))
        }
    })
}

fn has_flag(argv: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    argv.iter()
        .any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
}

/// Removes `--config` from `argv` and appends the file's entries that were
/// not given explicitly.
pub fn inject(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some((idx, path)) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::Io(format!("cannot read config file {path}: {e}")))?;
    let entries = parse(&text)?;
    let mut argv = argv;
    let span = if argv[idx] == "--config" { 2 } else { 1 };
    argv.drain(idx..idx + span);
    for (key, value) in entries {
        if has_flag(&argv, &key) {
            continue;
        }
        if SWITCHES.contains(&key.as_str()) {
            if matches!(value.as_str(), "true" | "1" | "yes") {
                argv.push(format!("--{key}"));
            }
        } else {
            argv.push(format!("--{key}"));
            argv.push(value);
        }
    }
    Ok(argv)
}
