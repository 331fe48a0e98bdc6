use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::scenario::ScenarioError;

/// Shortest decimal representation that parses back to the same `f64`.
pub fn format_number(v: f64) -> String {
    format!("{v:?}")
}

/// In-memory CSV: one `#` comment line, a header row, then numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    comment: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(comment: impl Into<String>, header: &[&str]) -> Self {
        Self {
            comment: comment.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: &[f64]) {
        self.push_cells(row.iter().map(|&v| format_number(v)).collect());
    }

    /// Row whose first column is a label.
    pub fn push_labelled(&mut self, label: &str, row: &[f64]) {
        let mut cells = vec![label.to_string()];
        cells.extend(row.iter().map(|&v| format_number(v)));
        self.push_cells(cells);
    }

    fn push_cells(&mut self, cells: Vec<String>) {
        assert_eq!(
            cells.len(),
            self.header.len(),
            "row width must match the header"
        );
        self.rows.push(cells);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.comment.replace('\n', " "));
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Resolves `name` against an output prefix. A prefix naming an existing
/// directory or ending in a path separator is a directory; anything else is
/// prepended to the file name.
pub(crate) fn output_path(prefix: &str, name: &str) -> PathBuf {
    if prefix.is_empty() {
        return PathBuf::from(name);
    }
    if prefix.ends_with('/')
        || prefix.ends_with(std::path::MAIN_SEPARATOR)
        || Path::new(prefix).is_dir()
    {
        Path::new(prefix).join(name)
    } else {
        PathBuf::from(format!("{prefix}{name}"))
    }
}

pub(crate) fn write_table(path: &Path, table: &CsvTable) -> Result<(), ScenarioError> {
    let io = |source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io)?;
    }
    fs::write(path, table.render()).map_err(io)
}
