//! Grayscale PFM: header `Pf\n<w> <h>\n-1.0\n`, then `w·h` little-endian
//! `f32` values, rows top to bottom.
//!
//! The negative scale marks little-endian data. Big-endian files (positive
//! scale) are accepted on read; rows are always taken top to bottom.

use super::{parse_header, FormatError};

pub fn encode(width: usize, height: usize, data: &[f64]) -> Vec<u8> {
    debug_assert_eq!(data.len(), width * height);
    let header = format!("Pf\n{width} {height}\n-1.0\n");
    let mut out = Vec::with_capacity(header.len() + 4 * data.len());
    out.extend_from_slice(header.as_bytes());
    for &v in data {
        out.extend_from_slice(&(v as f32).to_le_bytes());
    }
    out
}

/// Decodes a grayscale PFM into `(width, height, values)`.
pub fn decode(bytes: &[u8]) -> Result<(usize, usize, Vec<f64>), FormatError> {
    let (tokens, body) = parse_header(bytes, 4)?;
    if tokens[0].1 != "Pf" {
        let reason = if tokens[0].1 == "PF" {
            "colour PFM is not supported".to_string()
        } else {
            format!("bad magic {:?}, expected \"Pf\"", tokens[0].1)
        };
        return Err(FormatError::parse(tokens[0].0, reason));
    }
    let width = super::parse_dim(&tokens[1])?;
    let height = super::parse_dim(&tokens[2])?;
    let scale: f64 = tokens[3]
        .1
        .parse()
        .ok()
        .filter(|s: &f64| s.is_finite() && *s != 0.0)
        .ok_or_else(|| FormatError::parse(tokens[3].0, format!("bad scale {:?}", tokens[3].1)))?;
    let little = scale < 0.0;
    let n = width * height;
    let data = &bytes[body..];
    if data.len() != 4 * n {
        return Err(FormatError::parse(
            body + data.len().min(4 * n),
            format!("expected {} data bytes, found {}", 4 * n, data.len()),
        ));
    }
    let mut values = Vec::with_capacity(n);
    for (i, chunk) in data.chunks_exact(4).enumerate() {
        let raw = [chunk[0], chunk[1], chunk[2], chunk[3]];
        let v = if little { f32::from_le_bytes(raw) } else { f32::from_be_bytes(raw) };
        if !v.is_finite() {
            return Err(FormatError::parse(body + 4 * i, "non-finite sample"));
        }
        values.push(v as f64);
    }
    Ok((width, height, values))
}
