//! Binary masks as 8-bit P5 PGM: 255 marks a set pixel, 0 a clear one.
//!
//! On read any non-zero sample counts as set, and 16-bit files are rejected.

use lineshape::BinaryMask;

use super::{parse_header, FormatError};

pub fn encode(mask: &BinaryMask) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", mask.width(), mask.height());
    let mut out = Vec::with_capacity(header.len() + mask.data().len());
    out.extend_from_slice(header.as_bytes());
    out.extend(mask.data().iter().map(|&b| if b { 255u8 } else { 0 }));
    out
}

pub fn decode(bytes: &[u8]) -> Result<BinaryMask, FormatError> {
    let (tokens, body) = parse_header(bytes, 4)?;
    if tokens[0].1 != "P5" {
        return Err(FormatError::parse(
            tokens[0].0,
            format!("bad magic {:?}, expected \"P5\"", tokens[0].1),
        ));
    }
    let width = super::parse_dim(&tokens[1])?;
    let height = super::parse_dim(&tokens[2])?;
    tokens[3]
        .1
        .parse::<u32>()
        .ok()
        .filter(|m| (1..=255).contains(m))
        .ok_or_else(|| FormatError::parse(tokens[3].0, format!("unsupported maxval {:?}", tokens[3].1)))?;
    let n = width * height;
    let data = &bytes[body..];
    if data.len() != n {
        return Err(FormatError::parse(
            body + data.len().min(n),
            format!("expected {n} data bytes, found {}", data.len()),
        ));
    }
    BinaryMask::new(width, height, data.iter().map(|&v| v != 0).collect())
        .map_err(|e| FormatError::parse(0, e.to_string()))
}
