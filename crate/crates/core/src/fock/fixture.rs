//! Binary fixture format for operators and states.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic    4 bytes   b"PTFX"
//! hlen     u32       byte length of the JSON header
//! header   hlen      UTF-8 JSON, see `FixtureHeader`
//! payload  rows*cols*16 bytes: (re: f64 LE, im: f64 LE) pairs, column-major
//! ```
//!
//! States are stored as `dim × 1` matrices with `kind = "state"`.

use serde::{Deserialize, Serialize};

use super::{CMatrix, CVector, MotionalState, Operator, OperatorKind, HERMITIAN_TOL, UNITARY_TOL};
use crate::{Error, Result, C64};

const MAGIC: &[u8; 4] = b"PTFX";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureKind {
    Hermitian,
    Unitary,
    General,
    State,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureHeader {
    pub dim: usize,
    pub rows: usize,
    pub cols: usize,
    pub kind: FixtureKind,
    pub hermitian_tol: f64,
    pub unitary_tol: f64,
}

fn encode(header: &FixtureHeader, data: &[C64]) -> Vec<u8> {
    let json = serde_json::to_vec(header).expect("header serializes");
    let mut out = Vec::with_capacity(8 + json.len() + data.len() * 16);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(json.len() as u32).to_le_bytes());
    out.extend_from_slice(&json);
    for z in data {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

fn decode(bytes: &[u8]) -> Result<(FixtureHeader, Vec<C64>)> {
    let bad = |m: &str| Error::Config(format!("fixture: {m}"));
    if bytes.len() < 8 || &bytes[..4] != MAGIC {
        return Err(bad("missing magic"));
    }
    let hlen = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let body = bytes.get(8..8 + hlen).ok_or_else(|| bad("truncated header"))?;
    let header: FixtureHeader =
        serde_json::from_slice(body).map_err(|e| bad(&format!("header: {e}")))?;
    let payload = &bytes[8 + hlen..];
    let count = header.rows * header.cols;
    if payload.len() != count * 16 {
        return Err(bad(&format!(
            "payload has {} bytes, expected {}",
            payload.len(),
            count * 16
        )));
    }
    let data = payload
        .chunks_exact(16)
        .map(|c| {
            C64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    Ok((header, data))
}

pub fn encode_operator(op: &Operator) -> Vec<u8> {
    let n = op.dim();
    let kind = match op.kind {
        OperatorKind::Hermitian => FixtureKind::Hermitian,
        OperatorKind::Unitary => FixtureKind::Unitary,
        OperatorKind::General => FixtureKind::General,
    };
    let header = FixtureHeader {
        dim: n,
        rows: n,
        cols: n,
        kind,
        hermitian_tol: HERMITIAN_TOL,
        unitary_tol: UNITARY_TOL,
    };
    // nalgebra storage is already column-major
    encode(&header, op.matrix.as_slice())
}

pub fn decode_operator(bytes: &[u8]) -> Result<Operator> {
    let (h, data) = decode(bytes)?;
    let kind = match h.kind {
        FixtureKind::Hermitian => OperatorKind::Hermitian,
        FixtureKind::Unitary => OperatorKind::Unitary,
        FixtureKind::General => OperatorKind::General,
        FixtureKind::State => return Err(Error::Config("fixture holds a state".into())),
    };
    if h.rows != h.dim || h.cols != h.dim {
        return Err(Error::Config("operator fixture must be square".into()));
    }
    Operator::new(CMatrix::from_column_slice(h.rows, h.cols, &data), kind)
}

pub fn encode_state(psi: &MotionalState) -> Vec<u8> {
    let n = psi.amplitudes.len();
    let header = FixtureHeader {
        dim: n,
        rows: n,
        cols: 1,
        kind: FixtureKind::State,
        hermitian_tol: HERMITIAN_TOL,
        unitary_tol: UNITARY_TOL,
    };
    encode(&header, psi.amplitudes.as_slice())
}

pub fn decode_state(bytes: &[u8]) -> Result<MotionalState> {
    let (h, data) = decode(bytes)?;
    if h.kind != FixtureKind::State || h.cols != 1 || h.rows != h.dim {
        return Err(Error::Config("fixture does not hold a state".into()));
    }
    MotionalState::from_amplitudes(CVector::from_vec(data))
}
