use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::ExperimentError;

/// Versions of every module, written into each output header.
pub fn module_versions() -> [&'static str; 6] {
    [
        crate::specfun::MODULE_VERSION,
        crate::geometry::MODULE_VERSION,
        crate::assembly::MODULE_VERSION,
        crate::eigensolve::MODULE_VERSION,
        crate::potential1d::MODULE_VERSION,
        crate::asymptotics::MODULE_VERSION,
    ]
}

/// SHA-256 of the compact JSON form of `config`.
pub fn config_hash<T: Serialize>(config: &T) -> Result<String, ExperimentError> {
    let text = serde_json::to_string(config).map_err(|e| ExperimentError::Config(e.to_string()))?;
    Ok(hex::encode(Sha256::digest(text.as_bytes())))
}

/// Fixed-width scientific notation with 17 significant digits, so values
/// survive a text round trip exactly.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// A CSV document with `#` header comments, built in memory and written in
/// one piece.
#[derive(Debug, Clone)]
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(experiment: &str, hash: &str, columns: &[&str]) -> Self {
        let mut text = String::new();
        let _ = writeln!(text, "# conilay {experiment}");
        let _ = writeln!(text, "# config_sha256 {hash}");
        let _ = writeln!(text, "# modules {}", module_versions().join(" "));
        let _ = writeln!(text, "{}", columns.join(","));
        Self { text, columns: columns.len() }
    }

    pub fn comment(&mut self, line: &str) {
        for l in line.lines() {
            let _ = writeln!(self.text, "# {l}");
        }
    }

    /// Appends a row of already formatted fields.
    pub fn row(&mut self, fields: &[String]) {
        debug_assert_eq!(fields.len(), self.columns);
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn write(&self, dir: &Path, name: &str) -> Result<PathBuf, ExperimentError> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(name);
        std::fs::write(&path, &self.text)?;
        Ok(path)
    }
}

/// Data rows of a CSV written by [`Csv`]: comments and the column line are
/// skipped.
pub fn read_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|f| f.trim().to_string()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = Csv::new("test", "00", &["a", "b"]);
        let x = std::f64::consts::PI / 7.0;
        c.row(&[fmt_f64(x), "3".into()]);
        c.comment("done");
        let rows = read_rows(c.as_str());
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0][0].parse::<f64>().unwrap(), x);
    }
}
