//! Grayscale raster type shared by every stage of the pipeline.
//!
//! Pixels are stored as `f64` regardless of origin depth; wavelet
//! coefficients and quality metrics need fractional values. `depth`
//! records the declared bit depth of the origin: 8 for integer-range
//! images (values checked to lie in `[0, 255]`), 64 for unconstrained
//! synthetic rasters.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Original width/height of an image before padding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Extent {
    pub width: usize,
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ImageError {
    /// `pixels.len() != width * height`
    LengthMismatch { expected: usize, got: usize },
    /// width or height below the 2-pixel minimum
    TooSmall { width: usize, height: usize },
    /// NaN or infinity in pixel data
    NonFinitePixel { index: usize },
    /// depth-8 image with a value outside [0, 255]
    OutOfRange { index: usize, value: f64 },
    /// depth other than 8 or 64
    UnsupportedDepth { depth: u8 },
    /// free-form I/O or decode failure reported by a frontend
    Io(String),
}

impl fmt::Display for ImageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImageError::LengthMismatch { expected, got } => {
                write!(f, "pixel buffer holds {got} values, expected {expected}")
            }
            ImageError::TooSmall { width, height } => {
                write!(f, "image {width}x{height} is below the 2x2 minimum")
            }
            ImageError::NonFinitePixel { index } => {
                write!(f, "non-finite pixel value at index {index}")
            }
            ImageError::OutOfRange { index, value } => {
                write!(f, "pixel {value} at index {index} outside [0, 255] for depth 8")
            }
            ImageError::UnsupportedDepth { depth } => {
                write!(f, "unsupported bit depth {depth}")
            }
            ImageError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for ImageError {}

#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    depth: u8,
    pixels: Vec<f64>,
}

impl Image {
    /// Validating constructor; `pixels` is row-major, `width` columns per row.
    pub fn new(width: usize, height: usize, depth: u8, pixels: Vec<f64>) -> Result<Self, ImageError> {
        if depth != 8 && depth != 64 {
            return Err(ImageError::UnsupportedDepth { depth });
        }
        if width < 2 || height < 2 {
            return Err(ImageError::TooSmall { width, height });
        }
        if pixels.len() != width * height {
            return Err(ImageError::LengthMismatch {
                expected: width * height,
                got: pixels.len(),
            });
        }
        for (i, &v) in pixels.iter().enumerate() {
            if !v.is_finite() {
                return Err(ImageError::NonFinitePixel { index: i });
            }
            if depth == 8 && !(0.0..=255.0).contains(&v) {
                return Err(ImageError::OutOfRange { index: i, value: v });
            }
        }
        Ok(Image {
            width,
            height,
            depth,
            pixels,
        })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> f64>(
        width: usize,
        height: usize,
        depth: u8,
        mut f: F,
    ) -> Result<Self, ImageError> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Image::new(width, height, depth, pixels)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn depth(&self) -> u8 {
        self.depth
    }

    #[inline]
    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    #[inline]
    pub fn extent(&self) -> Extent {
        Extent {
            width: self.width,
            height: self.height,
        }
    }

    /// Mirror-pad on the right/bottom so both dimensions divide by `factor`.
    ///
    /// New row `h + k` mirrors row `h - 1 - k` (edge row appears twice over
    /// the seam), the same reflection the transform kernels use at array
    /// boundaries. Returns the padded image and the original extent for
    /// cropping after inversion.
    pub fn pad_to_multiple(&self, factor: usize) -> (Image, Extent) {
        assert!(factor >= 1, "pad factor must be positive");
        let new_w = self.width.div_ceil(factor) * factor;
        let new_h = self.height.div_ceil(factor) * factor;
        if new_w == self.width && new_h == self.height {
            return (self.clone(), self.extent());
        }
        let mut pixels = Vec::with_capacity(new_w * new_h);
        for y in 0..new_h {
            let sy = reflect_index(y, self.height);
            for x in 0..new_w {
                let sx = reflect_index(x, self.width);
                pixels.push(self.get(sx, sy));
            }
        }
        let img = Image {
            width: new_w,
            height: new_h,
            depth: self.depth,
            pixels,
        };
        (img, self.extent())
    }

    /// Top-left crop back to `extent` (inverse of `pad_to_multiple`).
    pub fn crop(&self, extent: Extent) -> Image {
        assert!(extent.width <= self.width && extent.height <= self.height);
        let mut pixels = Vec::with_capacity(extent.width * extent.height);
        for y in 0..extent.height {
            let row = &self.pixels[y * self.width..y * self.width + extent.width];
            pixels.extend_from_slice(row);
        }
        Image {
            width: extent.width,
            height: extent.height,
            depth: self.depth,
            pixels,
        }
    }

    /// Relative L2 distance, used throughout the tests.
    pub fn rel_l2_distance(&self, other: &Image) -> f64 {
        assert_eq!(self.width, other.width);
        assert_eq!(self.height, other.height);
        let mut num = 0.0;
        let mut den = 0.0;
        for (a, b) in self.pixels.iter().zip(other.pixels.iter()) {
            num += (a - b) * (a - b);
            den += a * a;
        }
        if den == 0.0 {
            return crate::math::sqrt(num);
        }
        crate::math::sqrt(num / den)
    }
}

/// Half-sample symmetric reflection of `i` into `[0, n)`.
#[inline]
pub(crate) fn reflect_index(i: usize, n: usize) -> usize {
    reflect_index_signed(i as isize, n)
}

/// Signed variant used by the filtering kernels, valid for any reach.
#[inline]
pub(crate) fn reflect_index_signed(mut i: isize, n: usize) -> usize {
    let n = n as isize;
    loop {
        if i < 0 {
            i = -1 - i;
        } else if i >= n {
            i = 2 * n - 1 - i;
        } else {
            return i as usize;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn constructor_validates() {
        assert!(Image::new(2, 2, 8, vec![0.0, 1.0, 2.0, 3.0]).is_ok());
        assert!(matches!(
            Image::new(2, 2, 8, vec![0.0; 3]),
            Err(ImageError::LengthMismatch { .. })
        ));
        assert!(matches!(
            Image::new(1, 5, 8, vec![0.0; 5]),
            Err(ImageError::TooSmall { .. })
        ));
        assert!(matches!(
            Image::new(2, 2, 8, vec![0.0, 1.0, f64::NAN, 3.0]),
            Err(ImageError::NonFinitePixel { index: 2 })
        ));
        assert!(matches!(
            Image::new(2, 2, 8, vec![0.0, 1.0, 256.0, 3.0]),
            Err(ImageError::OutOfRange { index: 2, .. })
        ));
        // depth 64 admits signed synthetic rasters
        assert!(Image::new(2, 2, 64, vec![-2.0, 2.0, -2.0, 2.0]).is_ok());
        assert!(matches!(
            Image::new(2, 2, 16, vec![0.0; 4]),
            Err(ImageError::UnsupportedDepth { depth: 16 })
        ));
    }

    #[test]
    fn pad_mirrors_without_skipping_edge() {
        // 6x6 ramp, factor 4 -> 8x8; rows 6,7 mirror rows 5,4
        let img = Image::from_fn(6, 6, 8, |x, y| (y * 6 + x) as f64).unwrap();
        let (padded, extent) = img.pad_to_multiple(4);
        assert_eq!((padded.width(), padded.height()), (8, 8));
        assert_eq!(extent, Extent { width: 6, height: 6 });
        for x in 0..6 {
            assert_eq!(padded.get(x, 6), img.get(x, 5));
            assert_eq!(padded.get(x, 7), img.get(x, 4));
        }
        for y in 0..6 {
            assert_eq!(padded.get(6, y), img.get(5, y));
            assert_eq!(padded.get(7, y), img.get(4, y));
        }
        // corner: both axes mirrored
        assert_eq!(padded.get(7, 6), img.get(4, 5));
    }

    #[test]
    fn pad_identity_when_already_multiple() {
        let img = Image::from_fn(8, 8, 8, |x, y| (x + y) as f64).unwrap();
        let (padded, extent) = img.pad_to_multiple(8);
        assert_eq!(padded, img);
        assert_eq!(extent, Extent { width: 8, height: 8 });
    }

    #[test]
    fn pad_rectangular() {
        let img = Image::from_fn(5, 8, 8, |x, y| (x * y) as f64).unwrap();
        let (padded, _) = img.pad_to_multiple(2);
        assert_eq!((padded.width(), padded.height()), (6, 8));
        for y in 0..8 {
            assert_eq!(padded.get(5, y), img.get(4, y));
        }
    }

    #[test]
    fn pad_then_crop_is_identity() {
        let img = Image::from_fn(13, 7, 8, |x, y| ((x * 31 + y * 17) % 256) as f64).unwrap();
        let (padded, extent) = img.pad_to_multiple(8);
        assert_eq!(padded.crop(extent), img);
    }

    #[test]
    fn reflect_handles_deep_overruns() {
        // period is 2n with half-sample symmetry
        let n = 3; // pattern: 0 1 2 | 2 1 0 | 0 1 2 ...
        let expect = [0, 1, 2, 2, 1, 0, 0, 1, 2, 2, 1, 0];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(reflect_index(i, n), e, "i={i}");
            assert_eq!(reflect_index_signed(i as isize, n), e, "i={i}");
        }
        assert_eq!(reflect_index_signed(-1, n), 0);
        assert_eq!(reflect_index_signed(-3, n), 2);
        assert_eq!(reflect_index_signed(-4, n), 2);
    }
}
