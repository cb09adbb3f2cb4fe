//! CSV persistence. Floats are written with 17 significant digits so values
//! round-trip exactly.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use super::audit::AuditReport;
use super::sampling::SampleRow;
use super::scan::{CurveRow, EntropyRow};
use crate::error::Result;

pub const SAMPLES_HEADER: [&str; 12] = [
    "sample_id",
    "mode",
    "t_h",
    "t_c",
    "q_h",
    "q_c",
    "work",
    "eta",
    "power",
    "p_norm",
    "eta_norm",
    "regime_flag",
];
pub const ENTROPY_HEADER: [&str; 8] = [
    "beta",
    "omega0",
    "eps",
    "gamma",
    "t_f",
    "s_irr_numeric",
    "s_irr_high_t",
    "s_irr_low_t",
];
pub const CURVES_HEADER: [&str; 7] = [
    "eta_c",
    "zeta",
    "p_norm",
    "eta_upper",
    "eta_lower",
    "eq1_upper",
    "eq14_lower",
];
pub const AUDIT_HEADER: [&str; 3] = ["sample_id", "bound_id", "slack"];

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn sample_record(r: &SampleRow) -> Vec<String> {
    let mut rec = vec![r.sample_id.to_string(), r.mode.as_str().to_string()];
    rec.extend(
        [r.t_h, r.t_c, r.q_h, r.q_c, r.work, r.eta, r.power, r.p_norm, r.eta_norm]
            .iter()
            .map(|&v| fmt_f64(v)),
    );
    rec.push(u8::from(r.regime_flag).to_string());
    rec
}

fn write_table<W: Write, R>(out: W, header: &[&str], rows: &[R], record: impl Fn(&R) -> Vec<String>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(record(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_samples<W: Write>(out: W, rows: &[SampleRow]) -> Result<()> {
    write_table(out, &SAMPLES_HEADER, rows, sample_record)
}

/// Appends rows to a samples file, writing the header first if the file is new
/// or empty.
pub fn append_samples(path: &Path, rows: &[SampleRow]) -> Result<()> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    if fresh {
        w.write_record(SAMPLES_HEADER)?;
    }
    for r in rows {
        w.write_record(sample_record(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_entropy<W: Write>(out: W, rows: &[EntropyRow]) -> Result<()> {
    write_table(out, &ENTROPY_HEADER, rows, |r| {
        [
            r.beta,
            r.omega0,
            r.eps,
            r.gamma,
            r.t_f,
            r.s_irr_numeric,
            r.s_irr_high_t,
            r.s_irr_low_t,
        ]
        .iter()
        .map(|&v| fmt_f64(v))
        .collect()
    })
}

pub fn write_curves<W: Write>(out: W, rows: &[CurveRow]) -> Result<()> {
    write_table(out, &CURVES_HEADER, rows, |r| {
        [
            r.eta_c,
            r.zeta,
            r.p_norm,
            r.eta_upper,
            r.eta_lower,
            r.universal_upper,
            r.universal_lower,
        ]
        .iter()
        .map(|&v| fmt_f64(v))
        .collect()
    })
}

pub fn write_audit<W: Write>(out: W, report: &AuditReport) -> Result<()> {
    write_table(out, &AUDIT_HEADER, &report.records, |r| {
        vec![r.sample_id.to_string(), r.bound.as_str().to_string(), fmt_f64(r.slack)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::sampling::SampleMode;

    fn row(id: usize) -> SampleRow {
        SampleRow {
            sample_id: id,
            mode: SampleMode::Simulated,
            t_h: 0.1,
            t_c: 1.0 / 3.0,
            q_h: 1.0,
            q_c: -0.5,
            work: 0.5,
            eta: 0.5,
            power: 0.5 / (0.1 + 1.0 / 3.0),
            p_norm: 0.25,
            eta_norm: 0.75,
            regime_flag: false,
        }
    }

    #[test]
    fn floats_round_trip() {
        let mut buf = Vec::new();
        write_samples(&mut buf, &[row(0)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), SAMPLES_HEADER.join(","));
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields[1], "simulated");
        assert_eq!(fields[3].parse::<f64>().unwrap(), 1.0 / 3.0);
        assert_eq!(fields[11], "0");
    }

    #[test]
    fn append_writes_header_once() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("samples.csv");
        append_samples(&path, &[row(0)]).unwrap();
        append_samples(&path, &[row(1)]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert_eq!(text.matches("sample_id").count(), 1);
    }
}
