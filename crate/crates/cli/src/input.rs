//! Matrix files.
//!
//! Text form:
//!
//! ```text
//! # running example
//! params: p, q
//! F:
//! 4 p
//! p 4
//! G:
//! 2, 0, 0
//! 0, q + 1, 0
//! 0, 0, 8
//! ```
//!
//! A row is split on commas when it has any, otherwise on whitespace (so
//! entries with inner spaces need commas). The `params:` line is optional.
//!
//! JSON form: `{"params": ["p"], "F": [["4", "p"], ...], "G": [...]}`;
//! entries may be strings or plain numbers.

use std::path::Path;
use std::sync::Arc;

use eigconf::charpoly::SymMatrix;
use eigconf::{MultiPoly, VarTable};
use serde::Deserialize;

use crate::expr::{is_identifier, parse_expr};
use crate::CliError;

#[derive(Clone, Debug)]
pub struct MatrixFile {
    pub params: Arc<VarTable>,
    pub f: SymMatrix,
    pub g: SymMatrix,
}

impl MatrixFile {
    pub fn is_numeric(&self) -> bool {
        self.f.is_numeric() && self.g.is_numeric()
    }
}

pub fn read_matrix_file(path: &Path) -> Result<MatrixFile, CliError> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix_file(&src)
}

pub fn parse_matrix_file(src: &str) -> Result<MatrixFile, CliError> {
    if src.trim_start().starts_with('{') {
        parse_json(src)
    } else {
        parse_text(src)
    }
}

fn param_table(names: Vec<String>) -> Result<Arc<VarTable>, CliError> {
    if let Some(bad) = names.iter().find(|n| !is_identifier(n)) {
        return Err(CliError::Input(format!("invalid parameter name {bad:?}")));
    }
    Ok(VarTable::single("params", names)?)
}

fn build(
    table: &Arc<VarTable>,
    rows: &[Vec<String>],
    which: &str,
) -> Result<SymMatrix, CliError> {
    if rows.is_empty() {
        return Err(CliError::Input(format!("matrix {which} is empty")));
    }
    let entries = rows
        .iter()
        .map(|row| {
            if row.len() != rows.len() {
                return Err(CliError::Input(format!(
                    "matrix {which} is not square: {} rows but a row of {} entries",
                    rows.len(),
                    row.len()
                )));
            }
            row.iter().map(|e| parse_expr(e, table)).collect::<Result<Vec<MultiPoly>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    SymMatrix::new(table, entries).map_err(|e| CliError::Input(format!("matrix {which}: {e}")))
}

fn split_row(line: &str) -> Vec<String> {
    if line.contains(',') {
        line.split(',').map(|s| s.trim().to_string()).collect()
    } else {
        line.split_whitespace().map(str::to_string).collect()
    }
}

fn parse_text(src: &str) -> Result<MatrixFile, CliError> {
    let mut params: Option<Vec<String>> = None;
    let mut f_rows = Vec::new();
    let mut g_rows = Vec::new();
    let mut section: Option<char> = None;
    let mut seen = [false, false];
    for (lineno, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("params:") {
            if params.is_some() || section.is_some() {
                return Err(CliError::Input(format!("line {}: misplaced params line", lineno + 1)));
            }
            params = Some(
                rest.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect(),
            );
            continue;
        }
        if line == "F:" || line == "G:" {
            let (c, idx) = if line == "F:" { ('F', 0) } else { ('G', 1) };
            if seen[idx] {
                return Err(CliError::Input(format!("line {}: second {line} section", lineno + 1)));
            }
            seen[idx] = true;
            section = Some(c);
            continue;
        }
        match section {
            Some('F') => f_rows.push(split_row(line)),
            Some(_) => g_rows.push(split_row(line)),
            None => {
                return Err(CliError::Input(format!(
                    "line {}: expected 'params:', 'F:' or 'G:'",
                    lineno + 1
                )))
            }
        }
    }
    if !seen[0] || !seen[1] {
        return Err(CliError::Input("matrix file needs both an F: and a G: section".into()));
    }
    let table = param_table(params.unwrap_or_default())?;
    Ok(MatrixFile {
        f: build(&table, &f_rows, "F")?,
        g: build(&table, &g_rows, "G")?,
        params: table,
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Text(String),
    Number(serde_json::Number),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonMatrixFile {
    #[serde(default)]
    params: Vec<String>,
    #[serde(rename = "F")]
    f: Vec<Vec<Entry>>,
    #[serde(rename = "G")]
    g: Vec<Vec<Entry>>,
}

fn entries(rows: Vec<Vec<Entry>>) -> Vec<Vec<String>> {
    rows.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|e| match e {
                    Entry::Text(s) => s,
                    Entry::Number(n) => n.to_string(),
                })
                .collect()
        })
        .collect()
}

fn parse_json(src: &str) -> Result<MatrixFile, CliError> {
    let doc: JsonMatrixFile =
        serde_json::from_str(src).map_err(|e| CliError::Input(format!("bad matrix JSON: {e}")))?;
    let table = param_table(doc.params)?;
    Ok(MatrixFile {
        f: build(&table, &entries(doc.f), "F")?,
        g: build(&table, &entries(doc.g), "G")?,
        params: table,
    })
}
