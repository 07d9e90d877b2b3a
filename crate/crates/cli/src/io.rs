use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spikerate::{IsiSequence, SpikeTrain};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    /// `index,isi` header selects ISI CSV, anything else is spike times.
    Auto,
    SpikeTimes,
    IsiCsv,
}

fn rejected(path: &Path, e: spikerate::Error) -> CliError {
    CliError::Input {
        path: path.to_path_buf(),
        line: None,
        message: e.to_string(),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Whitespace-separated numbers with the 1-based line each came from.
fn numbers(path: &Path, text: &str) -> Result<Vec<(usize, f64)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        for token in line.split_whitespace() {
            let v: f64 = token.parse().map_err(|_| CliError::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                token: token.to_string(),
            })?;
            out.push((i + 1, v));
        }
    }
    Ok(out)
}

/// Reads spike epochs, one per line; the horizon is the last epoch.
pub fn read_spike_times(path: &Path) -> Result<SpikeTrain, CliError> {
    parse_spike_times(path, &read_text(path)?)
}

fn parse_spike_times(path: &Path, text: &str) -> Result<SpikeTrain, CliError> {
    let values = numbers(path, text)?;
    let bad = |line, message: &str| CliError::Input {
        path: path.to_path_buf(),
        line: Some(line),
        message: message.to_string(),
    };
    let mut prev: Option<f64> = None;
    for &(line, v) in &values {
        if !v.is_finite() || v <= 0.0 {
            return Err(bad(line, "spike times must be positive and finite"));
        }
        if prev.is_some_and(|p| v <= p) {
            return Err(bad(line, "spike times must be strictly increasing"));
        }
        prev = Some(v);
    }
    if values.is_empty() {
        return Err(CliError::Input {
            path: path.to_path_buf(),
            line: None,
            message: "no spike times".into(),
        });
    }
    SpikeTrain::ending_at_last_spike(values.into_iter().map(|(_, v)| v).collect())
        .map_err(|e| rejected(path, e))
}

/// Reads the `index,isi` CSV written by `simulate`.
pub fn read_isi_csv(path: &Path) -> Result<IsiSequence, CliError> {
    parse_isi_csv(path, &read_text(path)?)
}

fn parse_isi_csv(path: &Path, text: &str) -> Result<IsiSequence, CliError> {
    let mut isis = Vec::new();
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == "index,isi" => {}
        _ => {
            return Err(CliError::Input {
                path: path.to_path_buf(),
                line: Some(1),
                message: "expected header `index,isi`".into(),
            })
        }
    }
    for (i, line) in lines {
        let field = line.split(',').nth(1).unwrap_or("").trim();
        let v: f64 = field.parse().map_err(|_| CliError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            token: field.to_string(),
        })?;
        if !(v.is_finite() && v > 0.0) {
            return Err(CliError::Input {
                path: path.to_path_buf(),
                line: Some(i + 1),
                message: "interspike intervals must be positive".into(),
            });
        }
        isis.push(v);
    }
    if isis.is_empty() {
        return Err(CliError::Input {
            path: path.to_path_buf(),
            line: None,
            message: "no intervals".into(),
        });
    }
    IsiSequence::new(isis).map_err(|e| rejected(path, e))
}

/// Loads a recording as both its spike train and its interval sequence.
pub fn read_input(path: &Path, format: InputFormat) -> Result<(SpikeTrain, IsiSequence), CliError> {
    let text = read_text(path)?;
    let is_csv = match format {
        InputFormat::IsiCsv => true,
        InputFormat::SpikeTimes => false,
        InputFormat::Auto => text
            .lines()
            .find(|l| !l.trim().is_empty())
            .is_some_and(|l| l.trim() == "index,isi"),
    };
    if is_csv {
        let isis = parse_isi_csv(path, &text)?;
        let train = isis.to_spike_train().map_err(|e| rejected(path, e))?;
        Ok((train, isis))
    } else {
        let train = parse_spike_times(path, &text)?;
        let isis = train.to_isis();
        Ok((train, isis))
    }
}

/// Writes CSV rows. Floats use Rust's shortest round-trip formatting.
pub fn write_csv<I, R>(path: &Path, header: &str, rows: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = R>,
    R: AsRef<[f64]>,
{
    let err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::create(path).map_err(err)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{header}").map_err(err)?;
    for row in rows {
        let mut first = true;
        for v in row.as_ref() {
            if !first {
                w.write_all(b",").map_err(err)?;
            }
            write!(w, "{v}").map_err(err)?;
            first = false;
        }
        w.write_all(b"\n").map_err(err)?;
    }
    w.flush().map_err(err)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(CliError::config)?;
    text.push('\n');
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// JSON to a file, or to stdout when no path is given.
pub fn emit_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    match path {
        Some(p) => write_json(p, value),
        None => {
            let text = serde_json::to_string_pretty(value).map_err(CliError::config)?;
            println!("{text}");
            Ok(())
        }
    }
}

/// Sidecar metadata path: `out.csv` → `out.csv.json`.
pub fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}
