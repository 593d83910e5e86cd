//! Deterministic file output: CSV at full round-trip precision and JSON
//! summaries. Every data file embeds the resolved run parameters; no
//! timestamps, so identical configs produce byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::CliError;

/// 17 significant decimal digits: enough to reparse any f64 exactly.
pub fn full(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct CsvWriter {
    out: BufWriter<File>,
    path: PathBuf,
}

impl CsvWriter {
    pub fn create(path: &Path, config: &RunConfig, header: &[&str]) -> Result<Self, CliError> {
        let file = File::create(path)
            .map_err(|e| CliError::Io(format!("creating {}: {e}", path.display())))?;
        let mut w = CsvWriter {
            out: BufWriter::new(file),
            path: path.to_path_buf(),
        };
        let params = serde_json::to_string(config).map_err(|e| CliError::Io(e.to_string()))?;
        w.line(&format!("# params: {params}"))?;
        w.line(&header.join(","))?;
        Ok(w)
    }

    pub fn row(&mut self, values: &[f64]) -> Result<(), CliError> {
        let line: Vec<String> = values.iter().map(|&v| full(v)).collect();
        self.line(&line.join(","))
    }

    fn line(&mut self, s: &str) -> Result<(), CliError> {
        writeln!(self.out, "{s}")
            .map_err(|e| CliError::Io(format!("writing {}: {e}", self.path.display())))
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.out
            .flush()
            .map_err(|e| CliError::Io(format!("flushing {}: {e}", self.path.display())))
    }
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

/// Dense matrix block for the Wigner outputs: header comments record the
/// grids, then one CSV row per momentum cell.
pub fn write_matrix_csv(
    path: &Path,
    config: &RunConfig,
    p: &fephi::Grid64,
    z: &fephi::Grid64,
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<(), CliError> {
    let file = File::create(path)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", path.display())))?;
    let mut out = BufWriter::new(file);
    let params = serde_json::to_string(config).map_err(|e| CliError::Io(e.to_string()))?;
    let io = |e: std::io::Error| CliError::Io(format!("writing {}: {e}", path.display()));
    writeln!(out, "# params: {params}").map_err(io)?;
    writeln!(
        out,
        "# p_start={} p_step={} p_len={} z_start={} z_step={} z_len={}",
        full(p.start()),
        full(p.step()),
        p.len(),
        full(z.start()),
        full(z.step()),
        z.len()
    )
    .map_err(io)?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| full(v)).collect();
        writeln!(out, "{}", line.join(",")).map_err(io)?;
    }
    out.flush().map_err(io)
}
