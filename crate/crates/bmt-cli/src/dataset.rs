//! CSV ingestion: one numeric column selected by zero-based index or by
//! header name. The header row is auto-detected; rows that do not parse are
//! rejected with their file row numbers.

use std::path::Path;

use anyhow::{bail, Context};

pub fn read_column(path: &Path, selector: &str) -> anyhow::Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let records: Vec<csv::StringRecord> = reader
        .records()
        .collect::<Result<_, _>>()
        .with_context(|| format!("malformed CSV in {}", path.display()))?;
    if records.is_empty() {
        bail!("{}: no rows", path.display());
    }

    let (index, first_data_row) = locate_column(&records[0], selector)?;

    let mut values = Vec::with_capacity(records.len());
    let mut bad_rows = Vec::new();
    for (row, record) in records.iter().enumerate().skip(first_data_row) {
        match record.get(index).map(str::trim) {
            Some(field) if !field.is_empty() => match field.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => bad_rows.push(row + 1),
            },
            _ => bad_rows.push(row + 1),
        }
    }
    if !bad_rows.is_empty() {
        let shown: Vec<String> = bad_rows.iter().take(5).map(|r| r.to_string()).collect();
        let suffix = if bad_rows.len() > 5 {
            format!(" and {} more", bad_rows.len() - 5)
        } else {
            String::new()
        };
        bail!(
            "{}: non-numeric value in column {} at row(s) {}{}",
            path.display(),
            selector,
            shown.join(", "),
            suffix
        );
    }
    if values.is_empty() {
        bail!(
            "{}: column {} has no finite values",
            path.display(),
            selector
        );
    }
    Ok(values)
}

/// Resolves the selector to a column index and decides whether the first
/// row is a header (its selected field does not parse as a number).
fn locate_column(first: &csv::StringRecord, selector: &str) -> anyhow::Result<(usize, usize)> {
    if let Ok(index) = selector.parse::<usize>() {
        let Some(field) = first.get(index) else {
            bail!(
                "column index {index} out of range (first row has {} fields)",
                first.len()
            );
        };
        let has_header = field.trim().parse::<f64>().is_err();
        return Ok((index, usize::from(has_header)));
    }
    match first.iter().position(|field| field.trim() == selector) {
        Some(index) => Ok((index, 1)),
        None => bail!("column '{selector}' not found in the header row"),
    }
}
