//! Line-oriented text persistence for [`IrreducibleCache`].
//!
//! ```text
//! ffmertens-irreducibles v1
//! field 3 1 -
//! degree 2 3
//! 1 2 5
//! ```
//! A file written for another field or format version is ignored on load.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{count_irreducibles, IrreducibleCache, IrreducibleList};
use crate::error::{Error, Result};
use crate::fqfield::FieldSpec;

const HEADER: &str = "ffmertens-irreducibles v1";
const PER_LINE: usize = 16;

fn field_line(spec: &FieldSpec) -> String {
    let modulus = if spec.modulus.is_empty() {
        "-".to_string()
    } else {
        spec.modulus
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    format!("field {} {} {}", spec.p, spec.k, modulus)
}

impl IrreducibleCache {
    /// Write every cached degree for `spec`.
    pub fn save(&self, path: &Path, spec: &FieldSpec) -> Result<()> {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        out.push_str(&field_line(spec));
        out.push('\n');
        for n in self.degrees(spec) {
            let list = self.get(spec, n).expect("listed degree");
            let _ = writeln!(out, "degree {} {}", n, list.len());
            for chunk in list.indices().chunks(PER_LINE) {
                let line: Vec<String> = chunk.iter().map(|i| i.to_string()).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        }
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                fs::create_dir_all(dir).map_err(|e| Error::Cache(e.to_string()))?;
            }
        }
        fs::write(path, out).map_err(|e| Error::Cache(e.to_string()))
    }

    /// Load degrees from a cache file; returns how many were loaded. Missing
    /// files and files for another field or version load nothing.
    pub fn load(&self, path: &Path, spec: &FieldSpec) -> Result<usize> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(Error::Cache(e.to_string())),
        };
        let mut lines = text.lines();
        if lines.next() != Some(HEADER) || lines.next() != Some(field_line(spec).as_str()) {
            return Ok(0);
        }
        let bad = |why: &str| Error::Cache(format!("{}: {why}", path.display()));
        let q = spec.q() as u64;
        let mut loaded = 0;
        while let Some(line) = lines.next() {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let (n, count) = match parts.as_slice() {
                ["degree", n, c] => (
                    n.parse::<usize>().map_err(|_| bad("bad degree"))?,
                    c.parse::<usize>().map_err(|_| bad("bad count"))?,
                ),
                _ => return Err(bad("expected a degree line")),
            };
            let mut indices = Vec::with_capacity(count);
            while indices.len() < count {
                let line = lines.next().ok_or_else(|| bad("truncated list"))?;
                for tok in line.split_whitespace() {
                    indices.push(tok.parse::<u64>().map_err(|_| bad("bad index"))?);
                }
            }
            let expected = count_irreducibles(q, n as u64)?;
            let limit = (q as u128).pow(n as u32);
            if indices.len() as u128 != expected
                || indices.windows(2).any(|w| w[0] >= w[1])
                || indices.last().is_some_and(|&i| i as u128 >= limit)
            {
                return Err(bad("list is inconsistent with the field"));
            }
            self.insert(spec, IrreducibleList::new(n, indices));
            loaded += 1;
        }
        Ok(loaded)
    }
}
