//! CSV and JSON emission. Every file starts with a `#` header block that
//! records the subcommand and the full resolved configuration, so a run can
//! be reproduced byte for byte from the file alone.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::CliError;

pub struct CsvWriter {
    path: PathBuf,
    out: BufWriter<File>,
}

impl CsvWriter {
    /// Open `name` under the output directory and write the header block
    /// plus the column line.
    pub fn create(
        cfg: &ExperimentConfig,
        subcommand: &str,
        name: &str,
        columns: &str,
    ) -> Result<Self, CliError> {
        std::fs::create_dir_all(&cfg.output_dir)
            .map_err(|e| CliError::Io(format!("creating {}: {e}", cfg.output_dir.display())))?;
        let path = cfg.output_dir.join(name);
        let file = File::create(&path)
            .map_err(|e| CliError::Io(format!("creating {}: {e}", path.display())))?;
        let mut w = Self { path, out: BufWriter::new(file) };
        w.comment(&format!("expcli v{}", env!("CARGO_PKG_VERSION")))?;
        w.comment(&format!("cmd = {subcommand}"))?;
        for line in cfg.to_string().lines() {
            w.comment(line)?;
        }
        w.line(columns)?;
        Ok(w)
    }

    fn comment(&mut self, text: &str) -> Result<(), CliError> {
        writeln!(self.out, "# {text}").map_err(|e| self.io_err(e))
    }

    /// Write one row and flush, so interrupted sweeps keep completed rows.
    pub fn row(&mut self, line: &str) -> Result<(), CliError> {
        writeln!(self.out, "{line}").map_err(|e| self.io_err(e))?;
        self.out.flush().map_err(|e| self.io_err(e))
    }

    fn line(&mut self, line: &str) -> Result<(), CliError> {
        writeln!(self.out, "{line}").map_err(|e| self.io_err(e))
    }

    fn io_err(&self, e: std::io::Error) -> CliError {
        CliError::Io(format!("writing {}: {e}", self.path.display()))
    }
}

/// Serialize a stats struct as pretty JSON next to the CSV outputs.
pub fn write_json<T: Serialize>(
    cfg: &ExperimentConfig,
    name: &str,
    value: &T,
) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(&cfg.output_dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", cfg.output_dir.display())))?;
    let path = cfg.output_dir.join(name);
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("serializing {name}: {e}")))?;
    std::fs::write(&path, text + "\n")
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
    Ok(path)
}

/// Read an emissions CSV (`step,t,r1,r2` with `#` comments) back into the
/// two binary channels.
pub fn read_emissions_csv(path: &Path) -> Result<(Vec<u8>, Vec<u8>, f64), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    let mut dt = 0.0;
    let mut saw_header = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != "step,t,r1,r2" {
                return Err(CliError::Config(format!(
                    "{}: expected columns step,t,r1,r2, found '{line}'",
                    path.display()
                )));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(CliError::Config(format!(
                "{}:{}: expected 4 fields, found {}",
                path.display(),
                lineno + 1,
                fields.len()
            )));
        }
        let parse_bit = |s: &str| -> Result<u8, CliError> {
            match s {
                "0" => Ok(0),
                "1" => Ok(1),
                other => Err(CliError::Config(format!(
                    "{}:{}: emission '{other}' is not a bit",
                    path.display(),
                    lineno + 1
                ))),
            }
        };
        let step: usize = fields[0].parse().map_err(|_| {
            CliError::Config(format!("{}:{}: bad step '{}'", path.display(), lineno + 1, fields[0]))
        })?;
        let t: f64 = fields[1].parse().map_err(|_| {
            CliError::Config(format!("{}:{}: bad time '{}'", path.display(), lineno + 1, fields[1]))
        })?;
        if step > 0 && t > 0.0 {
            dt = t / step as f64;
        }
        r1.push(parse_bit(fields[2])?);
        r2.push(parse_bit(fields[3])?);
    }
    if r1.is_empty() {
        return Err(CliError::Config(format!("{}: no emission rows", path.display())));
    }
    Ok((r1, r2, dt))
}

/// Shortest-roundtrip float formatting shared by all CSV columns.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}
