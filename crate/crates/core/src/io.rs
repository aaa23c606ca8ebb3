//! Loading scalar lists and writing CSV tables.
//!
//! Lists are either a JSON array of strings/numbers (`["0", "1", "9/5"]`) or a
//! single-column CSV with an optional header line and `#` comments. CSV output starts
//! with a `#` line recording the configuration, then a header row.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Parses a JSON array or a single-column CSV into scalars.
pub fn parse_scalar_list<S: Scalar>(text: &str) -> Result<Vec<S>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        let values: Vec<serde_json::Value> = serde_json::from_str(trimmed)?;
        return values
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => S::parse(s),
                serde_json::Value::Number(n) => S::parse(&n.to_string()),
                other => Err(Error::Parse {
                    token: other.to_string(),
                    reason: "expected a fraction string or a number".into(),
                }),
            })
            .collect();
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let cell = line.split(',').next().unwrap_or("").trim();
        if cell.is_empty() || cell.starts_with('#') {
            continue;
        }
        match S::parse(cell) {
            Ok(v) => out.push(v),
            // a header row is allowed before any data
            Err(_) if out.is_empty() && i == first_content_line(text) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn first_content_line(text: &str) -> usize {
    text.lines()
        .position(|l| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .unwrap_or(0)
}

pub fn load_scalar_list<S: Scalar>(path: &Path) -> Result<Vec<S>> {
    parse_scalar_list(&std::fs::read_to_string(path)?)
}

/// JSON array of scalar strings.
pub fn scalars_to_json<S: Scalar>(values: &[S]) -> serde_json::Value {
    serde_json::Value::Array(
        values
            .iter()
            .map(|v| serde_json::Value::String(v.to_string()))
            .collect(),
    )
}

/// Writes `# config`, the header row, then the rows.
pub fn write_csv<W: Write>(
    out: &mut W,
    config: &str,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<()> {
    writeln!(out, "# {config}")?;
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    #[test]
    fn json_and_csv_lists() {
        let a: Vec<Exact> = parse_scalar_list(r#"["0", "1", "9/5", 2.5]"#).unwrap();
        assert_eq!(a[2], Exact::ratio(9, 5));
        assert_eq!(a[3], Exact::ratio(5, 2));
        let b: Vec<Exact> = parse_scalar_list("# comment\nx\n0\n1\n\n9/5\n").unwrap();
        assert_eq!(b, a[..3].to_vec());
        assert!(parse_scalar_list::<Exact>("0\n1\nbad\n").is_err());
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&mut buf, "cmd=x", &["a", "b"], &[vec!["1".into(), "2/3".into()]]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# cmd=x\na,b\n1,2/3\n");
    }
}
