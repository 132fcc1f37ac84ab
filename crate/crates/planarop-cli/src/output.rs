//! Atomic file output: CSV with a `#` JSON header line, and pretty JSON.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

pub struct Output {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Output {
    pub fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Output { dir: dir.to_path_buf(), written: Vec::new() })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn write_atomic(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(bytes)?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(path);
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.write_atomic(name, &bytes)
    }

    /// `header` is extended with the column names and written as the first line.
    pub fn csv(&mut self, name: &str, header: &Value, columns: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let mut head = header.clone();
        if let Value::Object(map) = &mut head {
            map.insert("columns".into(), columns.into());
        }
        let mut bytes = format!("# {}\n", serde_json::to_string(&head)?).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut bytes);
            w.write_record(columns)?;
            for row in rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        self.write_atomic(name, &bytes)
    }
}

/// Shortest round-trip decimal, with an exponent for very large or small values.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        serde_json::Number::from_f64(x).map(|n| n.to_string()).unwrap_or_default()
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}
