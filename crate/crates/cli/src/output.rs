//! Output formatting: UTF-8 files, comma-separated CSV with a header row,
//! numeric cells at 17 significant digits.

use std::io::Write;
use std::path::Path;

use crate::Failure;

/// 17 significant digits; enough to round-trip any f64. Negative zero is
/// printed as zero.
pub fn fmt17(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

pub fn csv_line(cells: &[String]) -> String {
    cells.join(",")
}

/// Writes to the path, or to stdout when no path is given.
pub fn write_text(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| Failure::Io(format!("cannot write to stdout: {e}")))
        }
    }
}
