//! On-disk formats for operators and small real matrices.
//!
//! * **binary** — the magic bytes `WBAOP1`, then `u32` arity `n` and `u32`
//!   local dimension `d` (little endian), then the `d^{2n}` entries as
//!   little-endian `f64` pairs `(re, im)` in row-major order;
//! * **json** — nested arrays of `[re, im]` pairs, one array per row;
//! * **csv** — sparse `row,col,re,im` triplets for operators (zeros omitted)
//!   and plain dense rows for real matrices.
//!
//! Floats are written in their shortest round-trip form, so every format
//! reads back bit-exactly.

use std::io::{Read, Write};

use clap::ValueEnum;
use wba_core::nalgebra::DMatrix;
use wba_core::tensor::{DenseOperator, C64};

/// Leading bytes of a binary operator file.
pub const MAGIC: &[u8; 6] = b"WBAOP1";

/// Output format selected on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Nested `[re, im]` arrays.
    Json,
    /// Sparse triplets (operators) or dense rows (real matrices).
    Csv,
    /// `WBAOP1` binary.
    Binary,
}

/// Errors while reading or writing a file.
#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// Malformed JSON.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    /// Malformed CSV.
    #[error(transparent)]
    Csv(#[from] csv::Error),
    /// The file does not start with [`MAGIC`].
    #[error("bad magic bytes {0:?}")]
    BadMagic([u8; 6]),
    /// Header and payload disagree, or the shape is not `d^n × d^n`.
    #[error("bad shape: {0}")]
    Shape(String),
    /// The requested combination of object and format does not exist.
    #[error("{0}")]
    Unsupported(String),
}

/// Result alias for this module.
pub type Result<T> = std::result::Result<T, FormatError>;

fn dim_of(d: usize, n: usize) -> Result<usize> {
    u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .ok_or_else(|| FormatError::Shape(format!("d={d}, n={n} overflows")))
}

/// Writes `op` in the binary format.
pub fn write_binary(op: &DenseOperator, mut w: impl Write) -> Result<()> {
    let n = u32::try_from(op.arity()).map_err(|_| FormatError::Shape("arity exceeds u32".into()))?;
    let d = u32::try_from(op.local_dim()).map_err(|_| FormatError::Shape("local dimension exceeds u32".into()))?;
    let dim = op.dim();
    let mut buf = Vec::with_capacity(MAGIC.len() + 8 + dim * dim * 16);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&n.to_le_bytes());
    buf.extend_from_slice(&d.to_le_bytes());
    let m = op.matrix();
    for r in 0..dim {
        for c in 0..dim {
            let z = m[(r, c)];
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

/// Reads an operator written by [`write_binary`].
pub fn read_binary(mut r: impl Read) -> Result<DenseOperator> {
    let mut magic = [0u8; 6];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(FormatError::BadMagic(magic));
    }
    let mut word = [0u8; 4];
    r.read_exact(&mut word)?;
    let n = u32::from_le_bytes(word) as usize;
    r.read_exact(&mut word)?;
    let d = u32::from_le_bytes(word) as usize;
    let dim = dim_of(d, n)?;
    let mut payload = Vec::new();
    r.read_to_end(&mut payload)?;
    if payload.len() != dim * dim * 16 {
        return Err(FormatError::Shape(format!("expected {} payload bytes, found {}", dim * dim * 16, payload.len())));
    }
    let f = |k: usize| f64::from_le_bytes(payload[8 * k..8 * k + 8].try_into().expect("8-byte chunk"));
    let mat = DMatrix::from_fn(dim, dim, |row, col| {
        let k = 2 * (row * dim + col);
        C64::new(f(k), f(k + 1))
    });
    DenseOperator::from_matrix(d, n, mat).map_err(|e| FormatError::Shape(e.to_string()))
}

/// Operator as nested `[re, im]` arrays.
pub fn operator_to_json(op: &DenseOperator) -> serde_json::Value {
    let m = op.matrix();
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect();
    serde_json::json!(rows)
}

/// Parses nested `[re, im]` arrays into an operator with local dimension `d`
/// (the arity is inferred from the size).
pub fn operator_from_json(value: &serde_json::Value, d: usize) -> Result<DenseOperator> {
    let rows: Vec<Vec<[f64; 2]>> = serde_json::from_value(value.clone())?;
    let dim = rows.len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(FormatError::Shape("rows of unequal length".into()));
    }
    let n = arity_for(dim, d)?;
    let mat = DMatrix::from_fn(dim, dim, |r, c| C64::new(rows[r][c][0], rows[r][c][1]));
    DenseOperator::from_matrix(d, n, mat).map_err(|e| FormatError::Shape(e.to_string()))
}

fn arity_for(dim: usize, d: usize) -> Result<usize> {
    if d < 2 {
        return if dim == 1 { Ok(0) } else { Err(FormatError::Shape(format!("{dim} is not a power of {d}"))) };
    }
    let mut n = 0;
    let mut x = 1;
    while x < dim {
        x *= d;
        n += 1;
    }
    if x == dim {
        Ok(n)
    } else {
        Err(FormatError::Shape(format!("{dim} is not a power of {d}")))
    }
}

/// Writes the non-zero entries of `op` as `row,col,re,im` lines.
pub fn write_operator_csv(op: &DenseOperator, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["row", "col", "re", "im"])?;
    let m = op.matrix();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            if z.re != 0.0 || z.im != 0.0 {
                out.serialize((r, c, z.re, z.im))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads triplets written by [`write_operator_csv`] into an operator of the
/// given shape.
pub fn read_operator_csv(r: impl Read, d: usize, n: usize) -> Result<DenseOperator> {
    let dim = dim_of(d, n)?;
    let mut op = DenseOperator::zeros(d, n);
    let mut rdr = csv::Reader::from_reader(r);
    for rec in rdr.deserialize() {
        let (row, col, re, im): (usize, usize, f64, f64) = rec?;
        if row >= dim || col >= dim {
            return Err(FormatError::Shape(format!("entry ({row}, {col}) outside {dim}×{dim}")));
        }
        op.matrix_mut()[(row, col)] = C64::new(re, im);
    }
    Ok(op)
}

/// Writes a real matrix as dense CSV rows (no header).
pub fn write_matrix_csv(m: &DMatrix<f64>, w: impl Write) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    for r in 0..m.nrows() {
        out.serialize(m.row(r).iter().copied().collect::<Vec<f64>>())?;
    }
    out.flush()?;
    Ok(())
}

/// Reads dense CSV rows written by [`write_matrix_csv`].
pub fn read_matrix_csv(r: impl Read) -> Result<DMatrix<f64>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(r);
    let rows: Vec<Vec<f64>> = rdr.deserialize().collect::<std::result::Result<_, _>>()?;
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(FormatError::Shape("rows of unequal length".into()));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

/// Real matrix as nested arrays.
pub fn matrix_to_json(m: &DMatrix<f64>) -> serde_json::Value {
    let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect();
    serde_json::json!(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use wba_core::tensor::max_entangled_projector;

    fn sample() -> DenseOperator {
        DenseOperator::from_fn(2, 2, |r, c| C64::new(r as f64 / 3.0 - c as f64, if r == c { 0.0 } else { 1e-300 }))
    }

    #[test]
    fn binary_layout_and_round_trip() {
        let op = sample();
        let mut bytes = Vec::new();
        write_binary(&op, &mut bytes).unwrap();
        assert_eq!(bytes.len(), 6 + 8 + 16 * 16);
        assert_eq!(&bytes[..6], MAGIC);
        assert_eq!(u32::from_le_bytes(bytes[6..10].try_into().unwrap()), 2);
        assert_eq!(u32::from_le_bytes(bytes[10..14].try_into().unwrap()), 2);
        let back = read_binary(bytes.as_slice()).unwrap();
        assert_eq!(back, op);
        bytes[0] = b'X';
        assert!(matches!(read_binary(bytes.as_slice()), Err(FormatError::BadMagic(_))));
        assert!(matches!(read_binary(&bytes[..20]), Err(FormatError::Io(_)) | Err(FormatError::BadMagic(_))));
    }

    #[test]
    fn truncated_binary_is_a_shape_error() {
        let mut bytes = Vec::new();
        write_binary(&sample(), &mut bytes).unwrap();
        bytes.pop();
        assert!(matches!(read_binary(bytes.as_slice()), Err(FormatError::Shape(_))));
    }

    #[test]
    fn json_round_trip() {
        let op = sample();
        let v = operator_to_json(&op);
        assert_eq!(v.as_array().unwrap().len(), 4);
        let text = serde_json::to_string(&v).unwrap();
        let back = operator_from_json(&serde_json::from_str(&text).unwrap(), 2).unwrap();
        assert_eq!(back, op);
        assert!(operator_from_json(&serde_json::json!([[[0.0, 0.0]], []]), 2).is_err());
    }

    #[test]
    fn csv_round_trips() {
        let op = max_entangled_projector(3);
        let mut text = Vec::new();
        write_operator_csv(&op, &mut text).unwrap();
        let s = String::from_utf8(text.clone()).unwrap();
        assert_eq!(s.lines().count(), 1 + 9);
        assert_eq!(read_operator_csv(text.as_slice(), 3, 2).unwrap(), op);
        assert!(read_operator_csv(text.as_slice(), 2, 2).is_err());

        let m = DMatrix::from_row_slice(2, 2, &[5.0 / 12.0, 0.0, 0.1, -1e-17]);
        let mut text = Vec::new();
        write_matrix_csv(&m, &mut text).unwrap();
        assert_eq!(read_matrix_csv(text.as_slice()).unwrap(), m);
    }

    #[test]
    fn arity_inference() {
        assert_eq!(arity_for(81, 3).unwrap(), 4);
        assert_eq!(arity_for(1, 3).unwrap(), 0);
        assert!(arity_for(10, 3).is_err());
    }
}
