//! Binary pyramid container, little-endian throughout:
//!
//! ```text
//! magic    4 bytes   "DTCW"
//! version  u16       currently 1
//! levels   u32
//! pyr_w    u32       width the transform ran at (padded)
//! pyr_h    u32
//! orig_w   u32       pre-padding extent, for cropping after inversion
//! orig_h   u32
//! depth    u8        origin image bit depth
//! planes             lowpass, then per level in orientation order the
//!                    real and imaginary planes of each subband
//! plane := rows u32, cols u32, rows*cols f64
//! ```

use fusewave_core::dtcwt::{Orientation, Pyramid, Subband};
use fusewave_core::plane::Plane;
use fusewave_core::Extent;
use std::fs;
use std::io::{Cursor, Read, Write};
use std::path::Path;
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"DTCW";
pub const VERSION: u16 = 1;

#[derive(Debug, Error)]
pub enum ContainerError {
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
    #[error("not a pyramid container (bad magic)")]
    BadMagic,
    #[error("unsupported container version {0}")]
    BadVersion(u16),
    #[error("container truncated or inconsistent: {0}")]
    Corrupt(&'static str),
}

/// Pyramid plus the original (pre-padding) extent.
pub struct StoredPyramid {
    pub pyramid: Pyramid,
    pub original: Extent,
    pub depth: u8,
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_plane(out: &mut Vec<u8>, p: &Plane) {
    put_u32(out, p.rows() as u32);
    put_u32(out, p.cols() as u32);
    for &v in p.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

pub fn write_pyramid(
    path: &Path,
    pyramid: &Pyramid,
    original: Extent,
    depth: u8,
) -> Result<(), ContainerError> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    put_u32(&mut out, pyramid.levels as u32);
    put_u32(&mut out, pyramid.source_extent.width as u32);
    put_u32(&mut out, pyramid.source_extent.height as u32);
    put_u32(&mut out, original.width as u32);
    put_u32(&mut out, original.height as u32);
    out.push(depth);
    put_plane(&mut out, &pyramid.lowpass);
    for sb in &pyramid.subbands {
        put_plane(&mut out, &sb.re);
        put_plane(&mut out, &sb.im);
    }
    fs::write(path, out).map_err(|source| ContainerError::Write {
        path: path.display().to_string(),
        source,
    })
}

struct Reader<'a>(Cursor<&'a [u8]>);

impl Reader<'_> {
    fn u16(&mut self) -> Result<u16, ContainerError> {
        let mut b = [0u8; 2];
        self.0
            .read_exact(&mut b)
            .map_err(|_| ContainerError::Corrupt("header"))?;
        Ok(u16::from_le_bytes(b))
    }

    fn u32(&mut self) -> Result<u32, ContainerError> {
        let mut b = [0u8; 4];
        self.0
            .read_exact(&mut b)
            .map_err(|_| ContainerError::Corrupt("header"))?;
        Ok(u32::from_le_bytes(b))
    }

    fn u8(&mut self) -> Result<u8, ContainerError> {
        let mut b = [0u8; 1];
        self.0
            .read_exact(&mut b)
            .map_err(|_| ContainerError::Corrupt("header"))?;
        Ok(b[0])
    }

    fn plane(&mut self) -> Result<Plane, ContainerError> {
        let rows = self.u32()? as usize;
        let cols = self.u32()? as usize;
        let count = rows
            .checked_mul(cols)
            .ok_or(ContainerError::Corrupt("plane size overflow"))?;
        if count > 1 << 28 {
            return Err(ContainerError::Corrupt("plane absurdly large"));
        }
        let mut data = vec![0f64; count];
        for v in &mut data {
            let mut b = [0u8; 8];
            self.0
                .read_exact(&mut b)
                .map_err(|_| ContainerError::Corrupt("plane data"))?;
            *v = f64::from_le_bytes(b);
        }
        Ok(Plane::from_vec(rows, cols, data))
    }
}

pub fn read_pyramid(path: &Path) -> Result<StoredPyramid, ContainerError> {
    let bytes = fs::read(path).map_err(|source| ContainerError::Read {
        path: path.display().to_string(),
        source,
    })?;
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(ContainerError::BadMagic);
    }
    let mut r = Reader(Cursor::new(&bytes[4..]));
    let version = r.u16()?;
    if version != VERSION {
        return Err(ContainerError::BadVersion(version));
    }
    let levels = r.u32()? as usize;
    if levels == 0 || levels > fusewave_core::dtcwt::MAX_LEVELS {
        return Err(ContainerError::Corrupt("levels out of range"));
    }
    let pyr_w = r.u32()? as usize;
    let pyr_h = r.u32()? as usize;
    let orig_w = r.u32()? as usize;
    let orig_h = r.u32()? as usize;
    let depth = r.u8()?;
    let lowpass = r.plane()?;
    let mut subbands = Vec::with_capacity(levels * 6);
    for level in 1..=levels {
        for orientation in Orientation::ALL {
            let re = r.plane()?;
            let im = r.plane()?;
            subbands.push(Subband {
                level,
                orientation,
                re,
                im,
            });
        }
    }
    let mut trailing = [0u8; 1];
    if r.0.read(&mut trailing).unwrap_or(0) != 0 {
        return Err(ContainerError::Corrupt("trailing bytes"));
    }
    let pyramid = Pyramid {
        levels,
        lowpass,
        subbands,
        source_extent: Extent {
            width: pyr_w,
            height: pyr_h,
        },
    };
    Ok(StoredPyramid {
        pyramid,
        original: Extent {
            width: orig_w,
            height: orig_h,
        },
        depth,
    })
}
