use std::io::{Read, Write};

use csv::{ReaderBuilder, Terminator, WriterBuilder};

use super::number::{format_sig, SIGNIFICANT_DIGITS};
use crate::error::{Error, Result};
use crate::zeno::{IntensityTrace, SweepRow, ZenoSweepResult};

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(out)
}

fn num(x: f64) -> String {
    format_sig(x, SIGNIFICANT_DIGITS)
}

/// `z,intensity` with a header row.
pub fn write_trace_csv<W: Write>(trace: &IntensityTrace, out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["z", "intensity"])?;
    for &(z, i) in &trace.points {
        w.write_record([num(z), num(i)])?;
    }
    w.flush()?;
    Ok(())
}

/// Several traces in one table: `kind,N,z,intensity`.
pub fn write_traces_long_csv<W: Write>(traces: &[IntensityTrace], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["kind", "N", "z", "intensity"])?;
    for t in traces {
        let n = t.config.n.to_string();
        for &(z, i) in &t.points {
            w.write_record([t.kind.as_str(), &n, &num(z), &num(i)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `N,ratio,deficit_times_N` with a header row.
pub fn write_sweep_csv<W: Write>(sweep: &ZenoSweepResult, out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["N", "ratio", "deficit_times_N"])?;
    for row in &sweep.rows {
        w.write_record([row.n.to_string(), num(row.ratio), num(row.deficit_times_n)])?;
    }
    w.flush()?;
    Ok(())
}

fn parse_field<T: std::str::FromStr>(record: &csv::StringRecord, idx: usize, line: usize) -> Result<T> {
    let field = record.get(idx).unwrap_or_default();
    field
        .parse()
        .map_err(|_| Error::invalid("csv", format!("row {line}: cannot parse `{field}`")))
}

fn check_header(rdr: &mut csv::Reader<impl Read>, expected: &[&str]) -> Result<()> {
    let header = rdr.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::invalid(
            "csv",
            format!(
                "expected header {expected:?}, found {:?}",
                header.iter().collect::<Vec<_>>()
            ),
        ));
    }
    Ok(())
}

/// Reads a `z,intensity` file back into `(z, intensity)` pairs.
pub fn read_trace_csv<R: Read>(input: R) -> Result<Vec<(f64, f64)>> {
    let mut rdr = ReaderBuilder::new().from_reader(input);
    check_header(&mut rdr, &["z", "intensity"])?;
    rdr.records()
        .enumerate()
        .map(|(line, rec)| {
            let rec = rec?;
            Ok((parse_field(&rec, 0, line + 2)?, parse_field(&rec, 1, line + 2)?))
        })
        .collect()
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<ZenoSweepResult> {
    let mut rdr = ReaderBuilder::new().from_reader(input);
    check_header(&mut rdr, &["N", "ratio", "deficit_times_N"])?;
    let rows = rdr
        .records()
        .enumerate()
        .map(|(line, rec)| {
            let rec = rec?;
            Ok(SweepRow {
                n: parse_field(&rec, 0, line + 2)?,
                ratio: parse_field(&rec, 1, line + 2)?,
                deficit_times_n: parse_field(&rec, 2, line + 2)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ZenoSweepResult { rows })
}
