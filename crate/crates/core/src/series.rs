//! CSV form of trace series and other numeric tables.
//!
//! Floats are written as `{:.16e}` (17 significant digits), so equal inputs
//! always give byte-identical files and every value round-trips exactly.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::traces::{TraceMethod, TraceSeries};

pub const TRACE_HEADER: [&str; 4] = ["t", "value", "method", "tail_bound"];

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_trace_csv<W: Write>(series: &TraceSeries, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(TRACE_HEADER)?;
    let method = series.method.to_string();
    for i in 0..series.len() {
        w.write_record([
            format_float(series.t[i]),
            format_float(series.values[i]),
            method.clone(),
            format_float(series.tail_bound[i]),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the `t,value,method,tail_bound` schema. Column order is taken from the
/// header; `method` and `tail_bound` may be absent (defaults: exact, 0).
pub fn read_trace_csv<R: Read>(input: R) -> Result<TraceSeries> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = r.headers()?.clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let (Some(ti), Some(vi)) = (column("t"), column("value")) else {
        return Err(Error::Parse("trace CSV needs 't' and 'value' columns".into()));
    };
    let (mi, bi) = (column("method"), column("tail_bound"));

    let (mut t, mut values, mut bounds) = (Vec::new(), Vec::new(), Vec::new());
    let mut method: Option<TraceMethod> = None;
    for (row, record) in r.records().enumerate() {
        let record = record?;
        let field = |i: usize| -> Result<&str> {
            record.get(i).ok_or_else(|| Error::Parse(format!("row {} is short", row + 2)))
        };
        let num = |i: usize| -> Result<f64> {
            let s = field(i)?;
            s.parse().map_err(|_| Error::Parse(format!("row {}: bad number '{s}'", row + 2)))
        };
        t.push(num(ti)?);
        values.push(num(vi)?);
        bounds.push(match bi {
            Some(i) => num(i)?,
            None => 0.0,
        });
        if let (Some(i), None) = (mi, method) {
            method = Some(field(i)?.parse()?);
        }
    }
    if t.is_empty() {
        return Err(Error::Parse("trace CSV has no rows".into()));
    }
    TraceSeries::new(t, values, method.unwrap_or(TraceMethod::Exact), bounds)
        .map_err(|e| Error::Parse(e.to_string()))
}

/// Writes a numeric table with the fixed float format.
pub fn write_table<W: Write>(header: &[&str], rows: &[Vec<f64>], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|x| format_float(*x)))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let t = vec![0.25, 3.3e-4 + 0.25, 1.0];
        let values = vec![std::f64::consts::PI, 1.0 / 3.0, 5e-300];
        let s = TraceSeries::new(t, values, TraceMethod::Asymptotic(2), vec![0.0, 1e-13, 2e-15]).unwrap();
        let mut buf = Vec::new();
        write_trace_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,value,method,tail_bound\n2.5000000000000000e-1,"));
        assert!(!text.contains('\r'));
        assert_eq!(read_trace_csv(buf.as_slice()).unwrap(), s);
    }

    #[test]
    fn minimal_columns_and_errors() {
        let s = read_trace_csv("value,t\n2,1\n1,2\n".as_bytes()).unwrap();
        assert_eq!(s.t, vec![1.0, 2.0]);
        assert_eq!(s.method, TraceMethod::Exact);
        assert!(matches!(read_trace_csv("t\n1\n".as_bytes()), Err(Error::Parse(_))));
        assert!(matches!(read_trace_csv("t,value\n1,x\n".as_bytes()), Err(Error::Parse(_))));
        assert!(matches!(read_trace_csv("t,value\n2,1\n1,1\n".as_bytes()), Err(Error::Parse(_))));
        assert!(matches!(read_trace_csv("t,value\n".as_bytes()), Err(Error::Parse(_))));
    }
}
