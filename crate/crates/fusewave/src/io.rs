//! Reading and writing the supported grayscale formats: PGM (binary P5 and
//! ASCII P2, maxval <= 255) and 8-bit grayscale PNG. Pixel values pass
//! through verbatim on load; saving clamps to [0, 255] and rounds half-up.

use fusewave_core::{Image, ImageError};
use std::fs;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {reason}")]
    Decode { path: String, reason: String },
    #[error("{path}: unsupported bit depth")]
    UnsupportedBitDepth { path: String },
    #[error("{path}: {source}")]
    Invalid {
        path: String,
        source: ImageError,
    },
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

/// Load an 8-bit grayscale image; format detected by content (PGM magic)
/// falling back to the PNG decoder.
pub fn load_image(path: &Path) -> Result<Image, IoError> {
    let bytes = fs::read(path).map_err(|source| IoError::Read {
        path: path_str(path),
        source,
    })?;
    if bytes.starts_with(b"P5") || bytes.starts_with(b"P2") {
        decode_pgm(&bytes, path)
    } else {
        decode_png(&bytes, path)
    }
}

/// Save as binary P5 PGM, or PNG when the extension is `.png`.
pub fn save_image(img: &Image, path: &Path) -> Result<(), IoError> {
    let eight_bit: Vec<u8> = img
        .pixels()
        .iter()
        .map(|&v| (v.clamp(0.0, 255.0) + 0.5).floor() as u8)
        .collect();
    let is_png = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("png"))
        .unwrap_or(false);
    if is_png {
        let buf = image::GrayImage::from_raw(img.width() as u32, img.height() as u32, eight_bit)
            .expect("buffer size matches dimensions");
        buf.save(path).map_err(|e| IoError::Write {
            path: path_str(path),
            source: std::io::Error::other(e),
        })
    } else {
        let mut out = Vec::with_capacity(eight_bit.len() + 32);
        write!(out, "P5\n{} {}\n255\n", img.width(), img.height()).expect("vec write");
        out.extend_from_slice(&eight_bit);
        fs::write(path, out).map_err(|source| IoError::Write {
            path: path_str(path),
            source,
        })
    }
}

// -------------------------------------------------------------------- PGM

struct PgmHeader {
    binary: bool,
    width: usize,
    height: usize,
    maxval: u32,
    data_offset: usize,
}

/// Header tokens separated by whitespace; `#` starts a comment to
/// end-of-line anywhere between tokens.
fn parse_pgm_header(bytes: &[u8]) -> Result<PgmHeader, String> {
    let binary = match &bytes[..2] {
        b"P5" => true,
        b"P2" => false,
        _ => return Err("not a PGM file".into()),
    };
    let mut pos = 2usize;
    let mut fields = [0u32; 3];
    for field in fields.iter_mut() {
        // skip whitespace and comments
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err("truncated header".into());
        }
        let text = std::str::from_utf8(&bytes[start..pos]).unwrap();
        *field = text.parse::<u32>().map_err(|_| "bad header number")?;
    }
    if binary {
        if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
            return Err("missing separator after maxval".into());
        }
        pos += 1;
    }
    Ok(PgmHeader {
        binary,
        width: fields[0] as usize,
        height: fields[1] as usize,
        maxval: fields[2],
        data_offset: pos,
    })
}

fn decode_pgm(bytes: &[u8], path: &Path) -> Result<Image, IoError> {
    let header = parse_pgm_header(bytes).map_err(|reason| IoError::Decode {
        path: path_str(path),
        reason,
    })?;
    if header.maxval > 255 {
        return Err(IoError::UnsupportedBitDepth {
            path: path_str(path),
        });
    }
    if header.maxval == 0 || header.width == 0 || header.height == 0 {
        return Err(IoError::Decode {
            path: path_str(path),
            reason: "zero dimension or maxval".into(),
        });
    }
    let count = header.width * header.height;
    let mut pixels = Vec::with_capacity(count);
    if header.binary {
        let data = &bytes[header.data_offset..];
        if data.len() < count {
            return Err(IoError::Decode {
                path: path_str(path),
                reason: format!("expected {count} samples, found {}", data.len()),
            });
        }
        pixels.extend(data[..count].iter().map(|&b| b as f64));
    } else {
        let mut pos = header.data_offset;
        while pixels.len() < count {
            while pos < bytes.len()
                && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#')
            {
                if bytes[pos] == b'#' {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                } else {
                    pos += 1;
                }
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(IoError::Decode {
                    path: path_str(path),
                    reason: format!("expected {count} samples, found {}", pixels.len()),
                });
            }
            let v: u32 = std::str::from_utf8(&bytes[start..pos])
                .unwrap()
                .parse()
                .map_err(|_| IoError::Decode {
                    path: path_str(path),
                    reason: "bad sample value".into(),
                })?;
            pixels.push(v as f64);
        }
    }
    if pixels.iter().any(|&v| v > header.maxval as f64) {
        return Err(IoError::Decode {
            path: path_str(path),
            reason: "sample exceeds declared maxval".into(),
        });
    }
    Image::new(header.width, header.height, 8, pixels).map_err(|source| IoError::Invalid {
        path: path_str(path),
        source,
    })
}

// -------------------------------------------------------------------- PNG

fn decode_png(bytes: &[u8], path: &Path) -> Result<Image, IoError> {
    use image::DynamicImage;
    let decoded = image::load_from_memory(bytes).map_err(|e| IoError::Decode {
        path: path_str(path),
        reason: e.to_string(),
    })?;
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    let pixels: Vec<f64> = match decoded {
        DynamicImage::ImageLuma8(buf) => buf.pixels().map(|p| p.0[0] as f64).collect(),
        DynamicImage::ImageLuma16(_) | DynamicImage::ImageRgb16(_)
        | DynamicImage::ImageRgba16(_) | DynamicImage::ImageLumaA16(_) => {
            return Err(IoError::UnsupportedBitDepth {
                path: path_str(path),
            });
        }
        // graymapped palettes decode as RGB; accept only true gray values
        DynamicImage::ImageRgb8(buf) => {
            let mut out = Vec::with_capacity(w * h);
            for p in buf.pixels() {
                let [r, g, b] = p.0;
                if r != g || g != b {
                    return Err(IoError::Decode {
                        path: path_str(path),
                        reason: "color images are rejected, not converted".into(),
                    });
                }
                out.push(r as f64);
            }
            out
        }
        DynamicImage::ImageRgba8(buf) => {
            let mut out = Vec::with_capacity(w * h);
            for p in buf.pixels() {
                let [r, g, b, a] = p.0;
                if r != g || g != b || a != 255 {
                    return Err(IoError::Decode {
                        path: path_str(path),
                        reason: "color or transparent images are rejected".into(),
                    });
                }
                out.push(r as f64);
            }
            out
        }
        DynamicImage::ImageLumaA8(buf) => {
            let mut out = Vec::with_capacity(w * h);
            for p in buf.pixels() {
                let [l, a] = p.0;
                if a != 255 {
                    return Err(IoError::Decode {
                        path: path_str(path),
                        reason: "transparent images are rejected".into(),
                    });
                }
                out.push(l as f64);
            }
            out
        }
        other => {
            return Err(IoError::Decode {
                path: path_str(path),
                reason: format!("unsupported PNG layout {other:?}"),
            });
        }
    };
    Image::new(w, h, 8, pixels).map_err(|source| IoError::Invalid {
        path: path_str(path),
        source,
    })
}
