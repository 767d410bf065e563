use std::path::Path;

use super::DatasetBundle;
use crate::error::{GucError, Result};
use crate::numeric::Matrix;

/// Reads comma-separated numeric rows. Lines starting with `#` and blank
/// lines are skipped. `label_column` defaults to the last column; the class
/// count is the largest label plus one.
pub fn load_csv(path: impl AsRef<Path>, label_column: Option<usize>) -> Result<DatasetBundle> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| GucError::io(path, e))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_csv(&text, label_column, name)
}

pub(crate) fn parse_csv(text: &str, label_column: Option<usize>, name: String) -> Result<DatasetBundle> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut width = None;
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| GucError::Csv {
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let line_no = record.position().map_or(0, |p| p.line() as usize);
        let w = *width.get_or_insert(record.len());
        if record.len() != w {
            return Err(GucError::Csv { line: line_no, msg: format!("{} cells, expected {w}", record.len()) });
        }
        if w < 2 {
            return Err(GucError::Csv { line: line_no, msg: "need at least one feature and a label".into() });
        }
        let label_col = label_column.unwrap_or(w - 1);
        if label_col >= w {
            return Err(GucError::Csv { line: line_no, msg: format!("label column {label_col} out of range") });
        }
        for (j, cell) in record.iter().enumerate() {
            if j == label_col {
                let label: i64 = cell
                    .parse()
                    .map_err(|_| GucError::Csv { line: line_no, msg: format!("label {cell:?} is not an integer") })?;
                if label < 0 {
                    return Err(GucError::Csv { line: line_no, msg: format!("negative label {label}") });
                }
                labels.push(label as usize);
            } else {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| GucError::Csv { line: line_no, msg: format!("non-numeric cell {cell:?}") })?;
                features.push(v);
            }
        }
    }
    let Some(w) = width else {
        return Err(GucError::EmptyDataset);
    };
    let classes = labels.iter().max().map_or(0, |m| m + 1);
    let n = labels.len();
    DatasetBundle::new(Matrix::new(n, w - 1, features)?, labels, classes, name)
}
