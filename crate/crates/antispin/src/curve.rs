//! CSV curves with header `information,disturbance,mode,provenance`.

use std::io::{Read, Write};

use antispin_core::{EncodingMode, Provenance, TradeoffPoint};

use crate::error::CliError;

pub const HEADER: [&str; 4] = ["information", "disturbance", "mode", "provenance"];
pub const RATIO_COLUMN: &str = "ratio";

/// Scientific notation with 16 significant digits.
pub fn format_value(x: f64) -> String {
    format!("{x:.15e}")
}

fn record(p: &TradeoffPoint) -> [String; 4] {
    [
        format_value(p.information),
        format_value(p.disturbance),
        p.mode.name().to_string(),
        p.provenance.name().to_string(),
    ]
}

fn sorted<T>(rows: &mut [(TradeoffPoint, T)]) {
    rows.sort_by(|a, b| a.0.information.total_cmp(&b.0.information));
}

pub fn write_curve<W: Write>(out: W, points: &[TradeoffPoint]) -> Result<(), CliError> {
    let mut rows: Vec<(TradeoffPoint, ())> = points.iter().map(|&p| (p, ())).collect();
    sorted(&mut rows);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for (p, ()) in &rows {
        w.write_record(record(p))?;
    }
    w.flush()?;
    Ok(())
}

/// Like [`write_curve`] with a trailing `ratio` column, left empty where
/// the ratio is undefined.
pub fn write_comparison<W: Write>(
    out: W,
    rows: &[(TradeoffPoint, Option<f64>)],
) -> Result<(), CliError> {
    let mut rows = rows.to_vec();
    sorted(&mut rows);
    let mut w = csv::Writer::from_writer(out);
    let mut header = HEADER.to_vec();
    header.push(RATIO_COLUMN);
    w.write_record(&header)?;
    for (p, ratio) in &rows {
        let mut fields = record(p).to_vec();
        fields.push(ratio.map(format_value).unwrap_or_default());
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

/// One parsed row; `ratio` is `None` for plain curves and empty cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub point: TradeoffPoint,
    pub ratio: Option<f64>,
}

fn parse_mode(s: &str) -> Result<EncodingMode, CliError> {
    EncodingMode::ALL
        .into_iter()
        .find(|m| m.name() == s)
        .ok_or_else(|| CliError::Parse(format!("unknown mode {s:?}")))
}

fn parse_provenance(s: &str) -> Result<Provenance, CliError> {
    use Provenance::*;
    [Analytic, TraceFormula, MonteCarlo, Optimizer, Bound]
        .into_iter()
        .find(|p| p.name() == s)
        .ok_or_else(|| CliError::Parse(format!("unknown provenance {s:?}")))
}

fn parse_number(s: &str) -> Result<f64, CliError> {
    s.parse()
        .map_err(|_| CliError::Parse(format!("not a number: {s:?}")))
}

pub fn read_curve<R: Read>(input: R) -> Result<Vec<CurveRow>, CliError> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    let with_ratio = header.len() == 5 && &header[4] == RATIO_COLUMN;
    if header.iter().take(4).ne(HEADER) || !(header.len() == 4 || with_ratio) {
        return Err(CliError::Parse(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let ratio = match rec.get(4) {
            Some(s) if !s.is_empty() => Some(parse_number(s)?),
            _ => None,
        };
        rows.push(CurveRow {
            point: TradeoffPoint {
                information: parse_number(&rec[0])?,
                disturbance: parse_number(&rec[1])?,
                mode: parse_mode(&rec[2])?,
                provenance: parse_provenance(&rec[3])?,
            },
            ratio,
        });
    }
    Ok(rows)
}
