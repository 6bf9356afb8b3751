//! `key=value` config files. Keys are flag names without the leading dashes;
//! anything given on the command line wins.

use std::fs;

use anyhow::{bail, Context, Result};

const FLAGS_WITH_VALUES: &[&str] = &[
    "type", "r", "k", "case", "m", "r1", "k1", "r2", "k2", "kind", "max-index", "max-aw", "format", "out", "jobs",
];

fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key=value, got `{line}`", lineno + 1);
        };
        let key = key.trim().replace('_', "-");
        if key != "all" && !FLAGS_WITH_VALUES.contains(&key.as_str()) {
            bail!("config line {}: unknown key `{key}`", lineno + 1);
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

fn given(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    args.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
}

/// Appends flags from the `--config` file that are not already present.
pub fn expand(args: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).with_context(|| format!("reading config file {path}"))?;
    let mut out = args.clone();
    for (key, value) in parse(&text)? {
        if given(&args, &key) {
            continue;
        }
        if key == "all" {
            match value.as_str() {
                "true" | "1" | "yes" => out.push("--all".into()),
                "false" | "0" | "no" => {}
                _ => bail!("config key `all` expects true or false, got `{value}`"),
            }
        } else {
            out.push(format!("--{key}={value}"));
        }
    }
    Ok(out)
}
