use std::io::Cursor;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{LabelMap, RgbImage};

struct Decoded {
    width: u32,
    height: u32,
    color: png::ColorType,
    data: Vec<u8>,
}

fn decode(bytes: Vec<u8>, path: &Path) -> Result<Decoded> {
    let err = |message: String| Error::Decode {
        path: path.to_owned(),
        message,
    };
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::IDENTITY);
    let mut reader = decoder.read_info().map_err(|e| err(e.to_string()))?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| err("image too large".into()))?;
    let mut data = vec![0; size];
    let info = reader
        .next_frame(&mut data)
        .map_err(|e| err(e.to_string()))?;
    if info.bit_depth != png::BitDepth::Eight {
        return Err(err(format!(
            "expected 8-bit samples, got {:?}",
            info.bit_depth
        )));
    }
    data.truncate(info.buffer_size());
    Ok(Decoded {
        width: info.width,
        height: info.height,
        color: info.color_type,
        data,
    })
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_owned()),
        _ => Error::io(path, e),
    })
}

/// Reads an 8-bit grayscale PNG of category ids.
pub fn load_label_map(path: impl AsRef<Path>) -> Result<LabelMap> {
    let path = path.as_ref();
    decode_label_map(read(path)?, path)
}

pub fn decode_label_map(bytes: Vec<u8>, path: &Path) -> Result<LabelMap> {
    let d = decode(bytes, path)?;
    if d.color != png::ColorType::Grayscale {
        return Err(Error::Decode {
            path: path.to_owned(),
            message: format!("label map must be single-channel, got {:?}", d.color),
        });
    }
    LabelMap::from_raw(d.width, d.height, &d.data)
}

/// Reads an 8-bit RGB (or RGBA, alpha dropped) PNG.
pub fn load_rgb(path: impl AsRef<Path>) -> Result<RgbImage> {
    let path = path.as_ref();
    decode_rgb(read(path)?, path)
}

pub fn decode_rgb(bytes: Vec<u8>, path: &Path) -> Result<RgbImage> {
    let d = decode(bytes, path)?;
    match d.color {
        png::ColorType::Rgb => RgbImage::from_raw(d.width, d.height, &d.data),
        png::ColorType::Rgba => {
            let rgb: Vec<u8> = d
                .data
                .chunks_exact(4)
                .flat_map(|p| [p[0], p[1], p[2]])
                .collect();
            RgbImage::from_raw(d.width, d.height, &rgb)
        }
        other => Err(Error::Decode {
            path: path.to_owned(),
            message: format!("expected an RGB image, got {other:?}"),
        }),
    }
}

/// Reads only the PNG header to get `(width, height)`.
pub fn png_dimensions(path: impl AsRef<Path>) -> Result<(u32, u32)> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_owned()),
        _ => Error::io(path, e),
    })?;
    let decoder = png::Decoder::new(std::io::BufReader::new(file));
    let reader = decoder.read_info().map_err(|e| Error::Decode {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    let info = reader.info();
    Ok((info.width, info.height))
}

fn encode(width: u32, height: u32, color: png::ColorType, data: &[u8]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, width, height);
        enc.set_color(color);
        enc.set_depth(png::BitDepth::Eight);
        enc.set_compression(png::Compression::Fast);
        let mut writer = enc
            .write_header()
            .map_err(|e| Error::Encode(e.to_string()))?;
        writer
            .write_image_data(data)
            .map_err(|e| Error::Encode(e.to_string()))?;
        writer.finish().map_err(|e| Error::Encode(e.to_string()))?;
    }
    Ok(out)
}

pub fn encode_label_map(m: &LabelMap) -> Result<Vec<u8>> {
    encode(
        m.width(),
        m.height(),
        png::ColorType::Grayscale,
        &m.to_raw(),
    )
}

pub fn encode_rgb(img: &RgbImage) -> Result<Vec<u8>> {
    encode(
        img.width(),
        img.height(),
        png::ColorType::Rgb,
        &img.to_raw(),
    )
}

pub fn write_label_map(m: &LabelMap, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_label_map(m)?).map_err(|e| Error::io(path, e))
}

pub fn write_rgb(img: &RgbImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_rgb(img)?).map_err(|e| Error::io(path, e))
}
