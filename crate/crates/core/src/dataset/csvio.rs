//! Shared reading and writing of the versioned CSV files.

use std::collections::BTreeMap;

use crate::{Error, Result, Scalar};

pub(crate) const MAGIC: &str = "#! modal-lca";

pub(crate) fn schema_line(kind: &str) -> String {
    format!("{MAGIC} {kind} v1")
}

/// One data row with access by column name.
pub(crate) struct Row<'a> {
    pub file: &'a str,
    pub line: u64,
    columns: &'a BTreeMap<String, usize>,
    record: csv::StringRecord,
}

impl Row<'_> {
    pub fn err(&self, message: impl Into<String>) -> Error {
        Error::parse(self.file, self.line, message)
    }

    pub fn text(&self, column: &str) -> Result<&str> {
        let idx = self
            .columns
            .get(column)
            .ok_or_else(|| self.err(format!("missing column `{column}`")))?;
        Ok(self.record.get(*idx).unwrap_or(""))
    }

    pub fn required(&self, column: &str) -> Result<&str> {
        let v = self.text(column)?;
        if v.is_empty() {
            return Err(self.err(format!("empty `{column}`")));
        }
        Ok(v)
    }

    pub fn optional(&self, column: &str) -> Result<Option<&str>> {
        let v = self.text(column)?;
        Ok((!v.is_empty()).then_some(v))
    }

    pub fn number<T: Scalar>(&self, column: &str) -> Result<T> {
        let raw = self.required(column)?;
        parse_number(raw)
            .map(T::lit)
            .ok_or_else(|| self.err(format!("`{column}`: `{raw}` is not a finite number")))
    }

    pub fn optional_number<T: Scalar>(&self, column: &str) -> Result<Option<T>> {
        match self.optional(column)? {
            None => Ok(None),
            Some(raw) => parse_number(raw)
                .map(|v| Some(T::lit(v)))
                .ok_or_else(|| self.err(format!("`{column}`: `{raw}` is not a finite number"))),
        }
    }
}

/// Accepts a decimal comma when it is the only separator ("0,385").
fn parse_number(raw: &str) -> Option<f64> {
    let t = raw.trim();
    let v = t
        .parse::<f64>()
        .ok()
        .or_else(|| (!t.contains('.') && t.matches(',').count() == 1).then(|| t.replace(',', ".").parse().ok())?)?;
    v.is_finite().then_some(v)
}

/// Parses a versioned CSV text, checking the schema line and header.
pub(crate) fn read<'a>(
    text: &str,
    file: &'a str,
    kind: &str,
    header: &[&str],
    columns: &'a mut BTreeMap<String, usize>,
) -> Result<Vec<Row<'a>>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let first = text.lines().next().unwrap_or("").trim();
    let expected = schema_line(kind);
    if first != expected {
        return Err(Error::Schema {
            file: file.to_string(),
            found: first.to_string(),
            expected,
        });
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::parse(file, 2, e.to_string()))?
        .clone();
    for col in header {
        if !headers.iter().any(|h| h == *col) {
            return Err(Error::parse(file, 2, format!("header lacks column `{col}`")));
        }
    }
    columns.clear();
    columns.extend(headers.iter().enumerate().map(|(i, h)| (h.to_string(), i)));
    let columns: &'a BTreeMap<String, usize> = columns;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(file, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        rows.push(Row {
            file,
            line,
            columns,
            record,
        });
    }
    Ok(rows)
}

/// Writes a versioned CSV text.
pub(crate) fn write(kind: &str, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(row).expect("in-memory write");
    }
    let body = String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input");
    format!("{}\n{body}", schema_line(kind))
}

pub(crate) fn num<T: Scalar>(v: T) -> String {
    format!("{:?}", v.to_f64_lossy())
}
