//! `WGT1` weight-field files: magic, width and height as little-endian u32,
//! then width * height little-endian f32 values, row-major.

use std::path::Path;

use crate::error::{Error, Result};
use crate::model::WeightField;

pub const WGT1_MAGIC: [u8; 4] = *b"WGT1";
const HEADER_LEN: usize = 12;

pub fn decode_weight_field(bytes: &[u8]) -> Result<WeightField> {
    if bytes.len() < 4 {
        return Err(Error::Truncated {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
    if magic != WGT1_MAGIC {
        return Err(Error::BadMagic(magic));
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::Truncated {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    let width = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    let height = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    let count = width as usize * height as usize;
    let expected = HEADER_LEN + count * 4;
    if bytes.len() < expected {
        return Err(Error::Truncated {
            expected,
            found: bytes.len(),
        });
    }
    let weights = bytes[HEADER_LEN..expected]
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes(b.try_into().unwrap()))
        .collect();
    WeightField::new(width, height, weights)
}

pub fn encode_weight_field(field: &WeightField) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + field.weights().len() * 4);
    out.extend_from_slice(&WGT1_MAGIC);
    out.extend_from_slice(&field.width().to_le_bytes());
    out.extend_from_slice(&field.height().to_le_bytes());
    for w in field.weights() {
        out.extend_from_slice(&w.to_le_bytes());
    }
    out
}

pub fn load_weight_field(path: impl AsRef<Path>) -> Result<WeightField> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_owned()),
        _ => Error::io(path, e),
    })?;
    decode_weight_field(&bytes)
}

pub fn write_weight_field(field: &WeightField, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_weight_field(field)).map_err(|e| Error::io(path, e))
}
