//! Plot-ready tables from a JSONL dataset, whitespace separated with a
//! `#` header line.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde_json::Value;

use crate::error::{HarnessError, Result};
use crate::record::ResultRecord;

pub const KINDS: [&str; 3] = ["ratio-vs-cardinality", "bound-vs-p", "winner-map"];

const BOUND_COLUMNS: [&str; 5] = ["weil", "ccp", "cp", "gcd", "trivial"];

/// Reads the records of a JSONL dataset, skipping the header line.
pub fn read_dataset(path: &Path) -> Result<Vec<ResultRecord>> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| HarnessError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let dataset_error = |message: String| HarnessError::Dataset {
            path: path.to_path_buf(),
            line: n + 1,
            message,
        };
        let value: Value = serde_json::from_str(&line).map_err(|e| dataset_error(e.to_string()))?;
        if value.get("header").is_some() {
            continue;
        }
        out.push(serde_json::from_value(value).map_err(|e| dataset_error(e.to_string()))?);
    }
    Ok(out)
}

fn number(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".to_string(), |v| format!("{v:.10e}"))
}

/// Rows of one table kind; the first row is the header.
pub fn table(records: &[ResultRecord], kind: &str) -> Result<Vec<String>> {
    let mut rows = Vec::new();
    match kind {
        "ratio-vs-cardinality" => {
            rows.push("# size p ratio regime quantity".to_string());
            for r in records {
                if let (Some(ratio), [size]) = (r.ratio, r.instance.orders.as_slice()) {
                    rows.push(format!(
                        "{size} {} {} {} {}",
                        r.instance.p,
                        number(Some(ratio)),
                        r.regime.as_deref().unwrap_or("-"),
                        r.quantity
                    ));
                }
            }
        }
        "bound-vs-p" => {
            rows.push(format!("# p klmn {} exact", BOUND_COLUMNS.join(" ")));
            for r in records.iter().filter(|r| r.quantity == "bound_catalog") {
                let bounds = &r.details["bounds"];
                let cols: Vec<String> = BOUND_COLUMNS
                    .iter()
                    .map(|b| number(bounds[*b]["value"].as_f64()))
                    .collect();
                rows.push(format!(
                    "{} {} {} {}",
                    r.instance.p,
                    klmn(r),
                    cols.join(" "),
                    number(r.value)
                ));
            }
        }
        "winner-map" => {
            rows.push("# p klmn winner".to_string());
            for r in records.iter().filter(|r| r.quantity == "bound_catalog") {
                if let Some(w) = r.details["winner"].as_str() {
                    rows.push(format!("{} {} {w}", r.instance.p, klmn(r)));
                }
            }
        }
        other => return Err(HarnessError::UnknownKind(other.to_string())),
    }
    Ok(rows)
}

/// Exponents joined by commas, one token.
fn klmn(r: &ResultRecord) -> String {
    r.instance
        .exponents
        .iter()
        .map(|k| k.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Writes the table of `kind` for `dataset` to `out` (standard output when
/// `None`); returns the number of data rows.
pub fn emit_plot_data(dataset: &Path, kind: &str, out: Option<&Path>) -> Result<usize> {
    if !KINDS.contains(&kind) {
        return Err(HarnessError::UnknownKind(kind.to_string()));
    }
    let rows = table(&read_dataset(dataset)?, kind)?;
    let text = rows.join("\n") + "\n";
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| HarnessError::io(path, e))?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| HarnessError::io(Path::new("<stdout>"), e))?,
    }
    Ok(rows.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::{Instance, Status};

    fn ratio_record(p: u64, d: u64, ratio: f64) -> ResultRecord {
        ResultRecord::new(
            "ratio",
            "dx_ratio",
            Instance {
                p,
                orders: vec![d],
                ..Instance::default()
            },
            String::new(),
        )
        .ratio(ratio)
        .regime("small")
        .status(Status::Pass)
    }

    #[test]
    fn ratio_table() {
        let rows = table(&[ratio_record(13, 4, 0.5)], "ratio-vs-cardinality").unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[1].starts_with("4 13 5.0000000000e-1 small"));
    }

    #[test]
    fn empty_dataset_gives_header_only() {
        for kind in KINDS {
            assert_eq!(table(&[], kind).unwrap().len(), 1);
        }
    }

    #[test]
    fn unknown_kind() {
        assert!(matches!(
            table(&[], "pie"),
            Err(HarnessError::UnknownKind(_))
        ));
    }
}
