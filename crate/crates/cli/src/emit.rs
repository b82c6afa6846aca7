//! Rendering of command results as JSON, CSV or an aligned text table.

use std::io::Write;

use clap::ValueEnum;
use serde_json::Value;

use spectral_stokes::json::with_precision;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Csv,
    Table,
}

/// Rows for CSV and table output.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

pub struct Emitted {
    pub json: Value,
    pub table: Option<Table>,
    /// Output used when neither the command nor the global flag picks one.
    pub default: Output,
}

impl Emitted {
    pub fn json(v: Value) -> Self {
        Emitted { json: v, table: None, default: Output::Json }
    }

    pub fn tabular(json: Value, table: Table, default: Output) -> Self {
        Emitted { json, table: Some(table), default }
    }
}

fn cell(v: &Value, precision: usize) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::Number(n) => format!("{:.*}", precision, n.as_f64().unwrap_or(f64::NAN)),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn write_csv(table: &Table, precision: usize, out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| cell(v, precision)))?;
    }
    w.flush()?;
    Ok(())
}

fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn render_table(e: &Emitted, precision: usize) -> String {
    if let Some(t) = &e.table {
        let mut rows = vec![t.header.iter().map(|h| h.to_string()).collect::<Vec<_>>()];
        rows.extend(t.rows.iter().map(|r| r.iter().map(|v| cell(v, precision)).collect()));
        return aligned(&rows);
    }
    match &with_precision(e.json.clone(), precision) {
        Value::Object(m) => {
            let rows: Vec<Vec<String>> = m
                .iter()
                .map(|(k, v)| vec![k.clone(), if let Value::String(s) = v { s.clone() } else { v.to_string() }])
                .collect();
            aligned(&rows)
        }
        other => format!("{other}\n"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn empty_table_is_header_only() {
        let t = Table { header: vec!["a1", "a2"], rows: vec![] };
        let mut buf = Vec::new();
        write_csv(&t, 3, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a1,a2\n");
    }

    #[test]
    fn cells() {
        let t = Table { header: vec!["x", "y", "z"], rows: vec![vec![json!("1/3"), json!(2), json!(0.123456)]] };
        let mut buf = Vec::new();
        write_csv(&t, 3, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,y,z\n1/3,2,0.123\n");
        let e = Emitted::json(json!({"k": 1, "name": "E"}));
        assert_eq!(render_table(&e, 3), "k     1\nname  E\n");
    }
}
