//! Deterministic CSV and JSON writers.

use crate::protocols::ProtocolResult;
use crate::{Error, Result};

/// Full round-trip precision (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if x == 0.0 {
        // no negative zero in output
        format!("{:.16e}", 0.0)
    } else {
        format!("{x:.16e}")
    }
}

/// In-memory CSV table with a mandatory header row and CRLF line endings.
pub struct CsvTable {
    writer: csv::Writer<Vec<u8>>,
    width: usize,
}

impl CsvTable {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Result<Self> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        writer
            .write_record(header.iter().map(|h| h.as_ref()))
            .map_err(csv_err)?;
        Ok(Self {
            writer,
            width: header.len(),
        })
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) -> Result<()> {
        if fields.len() != self.width {
            return Err(Error::Config(format!(
                "CSV row has {} fields, header has {}",
                fields.len(),
                self.width
            )));
        }
        self.writer
            .write_record(fields.iter().map(|f| f.as_ref()))
            .map_err(csv_err)
    }

    pub fn finish(self) -> Result<String> {
        let bytes = self
            .writer
            .into_inner()
            .map_err(|e| Error::Config(format!("CSV flush: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("CSV: {e}"))
}

pub const PROTOCOL_COLUMNS: [&str; 6] = [
    "omega_t",
    "re_rho_eg",
    "im_rho_eg",
    "visibility",
    "phase_unwrapped",
    "success_prob",
];

/// One row per grid point; `ρ_eg` in the clock-rotating frame.
pub fn protocol_csv(result: &ProtocolResult) -> Result<String> {
    let mut t = CsvTable::new(&PROTOCOL_COLUMNS)?;
    for p in &result.points {
        t.row(&[
            fmt_f64(p.omega_t),
            fmt_f64(p.rho_eg.re),
            fmt_f64(p.rho_eg.im),
            fmt_f64(p.visibility),
            fmt_f64(p.phase_unwrapped),
            fmt_f64(p.success_prob),
        ])?;
    }
    t.finish()
}

/// Pretty JSON of any serializable report, newline-terminated.
pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
