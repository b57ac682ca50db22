//! Forward and inverse 2-D dual-tree complex wavelet transform.
//!
//! The first level filters both axes with the odd-length pair without
//! decimation; even/odd samples of the result are the two trees' decimated
//! outputs interleaved. Deeper levels filter the interleaved lowpass with
//! the even-length q-shift pair, decimating 2:1 per tree. Each level's
//! three real band arrays are repacked into six oriented complex subbands
//! by the 1/sqrt(2) quad sum/difference pairing; the inverse runs the exact
//! adjoint pairing and the matching synthesis filters.

mod filters;
mod kernels;

pub use filters::{Filter, FilterBank, FilterPair};

use crate::image::{Extent, Image};
use crate::plane::Plane;
use alloc::vec::Vec;
use core::fmt;

use filters::{
    qshift_highpass_a, reversed, G0O, G0O_CENTER, G1O, G1O_CENTER, H0A, H0O, H0O_CENTER, H1O,
    H1O_CENTER,
};
use kernels::{l1_conv_cols, l1_synth_cols, qshift_down_cols, qshift_up_cols};

pub const MAX_LEVELS: usize = 6;

const SQRT_HALF: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// The six subband orientations in their fixed storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    P15,
    P45,
    P75,
    N75,
    N45,
    N15,
}

impl Orientation {
    pub const ALL: [Orientation; 6] = [
        Orientation::P15,
        Orientation::P45,
        Orientation::P75,
        Orientation::N75,
        Orientation::N45,
        Orientation::N15,
    ];

    pub fn degrees(self) -> i32 {
        match self {
            Orientation::P15 => 15,
            Orientation::P45 => 45,
            Orientation::P75 => 75,
            Orientation::N75 => -75,
            Orientation::N45 => -45,
            Orientation::N15 => -15,
        }
    }

    pub fn index(self) -> usize {
        Orientation::ALL.iter().position(|o| *o == self).unwrap()
    }

    /// The opposite-sign orientation; the other half of a quad pair.
    pub fn mirrored(self) -> Orientation {
        Orientation::ALL[5 - self.index()]
    }
}

/// One oriented complex band at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct Subband {
    pub level: usize,
    pub orientation: Orientation,
    pub re: Plane,
    pub im: Plane,
}

impl Subband {
    pub fn energy(&self) -> f64 {
        self.re.energy() + self.im.energy()
    }
}

/// DTCWT coefficient set: interleaved lowpass plane plus six oriented
/// complex subbands per level, level-major in `Orientation::ALL` order.
#[derive(Debug, Clone, PartialEq)]
pub struct Pyramid {
    pub levels: usize,
    pub lowpass: Plane,
    pub subbands: Vec<Subband>,
    pub source_extent: Extent,
}

impl Pyramid {
    pub fn subband(&self, level: usize, orientation: Orientation) -> &Subband {
        &self.subbands[(level - 1) * 6 + orientation.index()]
    }

    /// Structural validity: counts, ordering, and dyadic dimensions.
    pub fn validate(&self) -> Result<(), DtcwtError> {
        if self.levels < 1 || self.levels > MAX_LEVELS {
            return Err(DtcwtError::LevelsOutOfRange { levels: self.levels });
        }
        if self.subbands.len() != 6 * self.levels {
            return Err(DtcwtError::Malformed("subband count is not 6 per level"));
        }
        let (w, h) = (self.source_extent.width, self.source_extent.height);
        if w % (1 << self.levels) != 0 || h % (1 << self.levels) != 0 {
            return Err(DtcwtError::Malformed("extent not divisible by 2^levels"));
        }
        for level in 1..=self.levels {
            for (k, want) in Orientation::ALL.iter().enumerate() {
                let sb = &self.subbands[(level - 1) * 6 + k];
                if sb.level != level || sb.orientation != *want {
                    return Err(DtcwtError::Malformed("subband ordering broken"));
                }
                let (er, ec) = (h >> level, w >> level);
                for plane in [&sb.re, &sb.im] {
                    if plane.rows() != er || plane.cols() != ec {
                        return Err(DtcwtError::Malformed("subband dimension mismatch"));
                    }
                }
            }
        }
        let shift = self.levels - 1;
        if self.lowpass.rows() != h >> shift || self.lowpass.cols() != w >> shift {
            return Err(DtcwtError::Malformed("lowpass dimension mismatch"));
        }
        Ok(())
    }

    pub fn total_energy(&self) -> f64 {
        self.lowpass.energy() + self.subbands.iter().map(Subband::energy).sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DtcwtError {
    NotDivisible {
        width: usize,
        height: usize,
        levels: usize,
    },
    LevelsOutOfRange {
        levels: usize,
    },
    Malformed(&'static str),
}

impl fmt::Display for DtcwtError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DtcwtError::NotDivisible {
                width,
                height,
                levels,
            } => write!(
                f,
                "image {width}x{height} not divisible by 2^{levels}; pad it first"
            ),
            DtcwtError::LevelsOutOfRange { levels } => {
                write!(f, "levels {levels} outside [1, {MAX_LEVELS}]")
            }
            DtcwtError::Malformed(what) => write!(f, "malformed pyramid: {what}"),
        }
    }
}

impl core::error::Error for DtcwtError {}

/// Real band triple of one level, interleaved tree layout, prior to the
/// complex repacking. Order: (highpass-horizontal, highpass-both,
/// highpass-vertical).
struct BandTriple {
    bh: Plane,
    bd: Plane,
    bv: Plane,
}

fn check_input(img: &Image, levels: usize) -> Result<(), DtcwtError> {
    if levels < 1 || levels > MAX_LEVELS {
        return Err(DtcwtError::LevelsOutOfRange { levels });
    }
    let div = 1usize << levels;
    if img.width() % div != 0 || img.height() % div != 0 {
        return Err(DtcwtError::NotDivisible {
            width: img.width(),
            height: img.height(),
            levels,
        });
    }
    Ok(())
}

/// Separable level-1 stage: filter columns then rows, undecimated.
fn level1_decompose(x: &Plane) -> (Plane, BandTriple) {
    let lo_c = l1_conv_cols(x, &H0O, H0O_CENTER);
    let hi_c = l1_conv_cols(x, &H1O, H1O_CENTER);
    let lo_ct = lo_c.transposed();
    let hi_ct = hi_c.transposed();
    let ll = l1_conv_cols(&lo_ct, &H0O, H0O_CENTER).transposed();
    let bh = l1_conv_cols(&lo_ct, &H1O, H1O_CENTER).transposed();
    let bv = l1_conv_cols(&hi_ct, &H0O, H0O_CENTER).transposed();
    let bd = l1_conv_cols(&hi_ct, &H1O, H1O_CENTER).transposed();
    (ll, BandTriple { bh, bd, bv })
}

fn qshift_decompose(x: &Plane, h0b: &[f64], h1a: &[f64], h1b: &[f64]) -> (Plane, BandTriple) {
    let lo_c = qshift_down_cols(x, &H0A, h0b);
    let hi_c = qshift_down_cols(x, h1a, h1b);
    let lo_ct = lo_c.transposed();
    let hi_ct = hi_c.transposed();
    let ll = qshift_down_cols(&lo_ct, &H0A, h0b).transposed();
    let bh = qshift_down_cols(&lo_ct, h1a, h1b).transposed();
    let bv = qshift_down_cols(&hi_ct, &H0A, h0b).transposed();
    let bd = qshift_down_cols(&hi_ct, h1a, h1b).transposed();
    (ll, BandTriple { bh, bd, bv })
}

/// Quad corners -> two complex subbands (the +theta / -theta pair).
fn quad_to_complex(y: &Plane) -> (Plane, Plane, Plane, Plane) {
    let rows = y.rows() / 2;
    let cols = y.cols() / 2;
    let mut re_p = Plane::zeros(rows, cols);
    let mut im_p = Plane::zeros(rows, cols);
    let mut re_q = Plane::zeros(rows, cols);
    let mut im_q = Plane::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            let a = y.at(2 * r, 2 * c);
            let b = y.at(2 * r, 2 * c + 1);
            let cc = y.at(2 * r + 1, 2 * c);
            let d = y.at(2 * r + 1, 2 * c + 1);
            re_p.set(r, c, (a - d) * SQRT_HALF);
            im_p.set(r, c, (b + cc) * SQRT_HALF);
            re_q.set(r, c, (a + d) * SQRT_HALF);
            im_q.set(r, c, (b - cc) * SQRT_HALF);
        }
    }
    (re_p, im_p, re_q, im_q)
}

/// Exact adjoint of `quad_to_complex`.
fn complex_to_quad(p: &Subband, q: &Subband) -> Plane {
    let rows = p.re.rows();
    let cols = p.re.cols();
    let mut y = Plane::zeros(rows * 2, cols * 2);
    for r in 0..rows {
        for c in 0..cols {
            let rp = p.re.at(r, c);
            let ip = p.im.at(r, c);
            let rq = q.re.at(r, c);
            let iq = q.im.at(r, c);
            y.set(2 * r, 2 * c, (rp + rq) * SQRT_HALF);
            y.set(2 * r + 1, 2 * c + 1, (rq - rp) * SQRT_HALF);
            y.set(2 * r, 2 * c + 1, (ip + iq) * SQRT_HALF);
            y.set(2 * r + 1, 2 * c, (ip - iq) * SQRT_HALF);
        }
    }
    y
}

fn pack_level(level: usize, bands: &BandTriple, out: &mut Vec<Subband>) {
    // horizontal band pair -> +/-15, diagonal -> +/-45, vertical -> +/-75
    let (re_p15, im_p15, re_n15, im_n15) = quad_to_complex(&bands.bh);
    let (re_p45, im_p45, re_n45, im_n45) = quad_to_complex(&bands.bd);
    let (re_p75, im_p75, re_n75, im_n75) = quad_to_complex(&bands.bv);
    let mk = |orientation, re, im| Subband {
        level,
        orientation,
        re,
        im,
    };
    out.push(mk(Orientation::P15, re_p15, im_p15));
    out.push(mk(Orientation::P45, re_p45, im_p45));
    out.push(mk(Orientation::P75, re_p75, im_p75));
    out.push(mk(Orientation::N75, re_n75, im_n75));
    out.push(mk(Orientation::N45, re_n45, im_n45));
    out.push(mk(Orientation::N15, re_n15, im_n15));
}

fn unpack_level(pyr: &Pyramid, level: usize) -> BandTriple {
    let band = |o| pyr.subband(level, o);
    BandTriple {
        bh: complex_to_quad(band(Orientation::P15), band(Orientation::N15)),
        bd: complex_to_quad(band(Orientation::P45), band(Orientation::N45)),
        bv: complex_to_quad(band(Orientation::P75), band(Orientation::N75)),
    }
}

/// Decompose `img` into `levels` dual-tree levels.
///
/// The image dimensions must divide by `2^levels`; callers pad with
/// [`Image::pad_to_multiple`] beforehand.
pub fn forward(img: &Image, levels: usize) -> Result<Pyramid, DtcwtError> {
    check_input(img, levels)?;
    let x = Plane::from_vec(img.height(), img.width(), img.pixels().to_vec());
    let (lowpass, triples) = decompose_planes(x, levels);
    let mut subbands = Vec::with_capacity(6 * levels);
    for (k, triple) in triples.iter().enumerate() {
        pack_level(k + 1, triple, &mut subbands);
    }
    Ok(Pyramid {
        levels,
        lowpass,
        subbands,
        source_extent: img.extent(),
    })
}

fn decompose_planes(x: Plane, levels: usize) -> (Plane, Vec<BandTriple>) {
    let h0b = reversed(&H0A);
    let h1a = qshift_highpass_a();
    let h1b = reversed(&h1a);
    let mut triples = Vec::with_capacity(levels);
    let (mut lolo, first) = level1_decompose(&x);
    triples.push(first);
    for _ in 1..levels {
        let (next, triple) = qshift_decompose(&lolo, &h0b, &h1a, &h1b);
        triples.push(triple);
        lolo = next;
    }
    (lolo, triples)
}

/// Reconstruct the image a pyramid was computed from.
pub fn inverse(pyr: &Pyramid) -> Result<Image, DtcwtError> {
    pyr.validate()?;
    let h0b = reversed(&H0A);
    let h1a = qshift_highpass_a();
    let h1b = reversed(&h1a);
    let mut z = pyr.lowpass.clone();
    for level in (2..=pyr.levels).rev() {
        let t = unpack_level(pyr, level);
        if t.bh.rows() != z.rows() || t.bh.cols() != z.cols() {
            return Err(DtcwtError::Malformed("level dimensions inconsistent"));
        }
        let lo_r = qshift_up_cols(&z, &t.bv, &H0A, &h0b, &h1a, &h1b);
        let hi_r = qshift_up_cols(&t.bh, &t.bd, &H0A, &h0b, &h1a, &h1b);
        z = qshift_up_cols(&lo_r.transposed(), &hi_r.transposed(), &H0A, &h0b, &h1a, &h1b)
            .transposed();
    }
    let t = unpack_level(pyr, 1);
    if t.bh.rows() != z.rows() || t.bh.cols() != z.cols() {
        return Err(DtcwtError::Malformed("level dimensions inconsistent"));
    }
    let lo_r = l1_synth_cols(&z, &t.bv, &G0O, G0O_CENTER, &G1O, G1O_CENTER);
    let hi_r = l1_synth_cols(&t.bh, &t.bd, &G0O, G0O_CENTER, &G1O, G1O_CENTER);
    let out = l1_synth_cols(
        &lo_r.transposed(),
        &hi_r.transposed(),
        &G0O,
        G0O_CENTER,
        &G1O,
        G1O_CENTER,
    )
    .transposed();
    let (h, w) = (out.rows(), out.cols());
    let data = out.as_slice().to_vec();
    Image::new(w, h, 64, data).map_err(|_| DtcwtError::Malformed("non-finite reconstruction"))
}

/// Max relative variation of per-subband energy under cyclic shifts of
/// 0..=3 pixels in each axis, one score per level. Near-shift-invariance
/// makes these scores small; a single decimated tree scores much worse
/// ([`single_tree_shift_sensitivity`]).
pub fn shift_sensitivity(img: &Image, levels: usize) -> Result<Vec<f64>, DtcwtError> {
    shift_scores(img, levels, false)
}

/// Same diagnostic computed from one tree only (quad `a` of the interleaved
/// band arrays), the classic critically-sampled wavelet baseline.
pub fn single_tree_shift_sensitivity(img: &Image, levels: usize) -> Result<Vec<f64>, DtcwtError> {
    shift_scores(img, levels, true)
}

fn shift_scores(img: &Image, levels: usize, single_tree: bool) -> Result<Vec<f64>, DtcwtError> {
    check_input(img, levels)?;
    let h = img.height();
    let w = img.width();
    let mut energies: Vec<Vec<Vec<f64>>> = Vec::new(); // [shift][level][band]
    for sy in 0..4usize {
        for sx in 0..4usize {
            let shifted = Plane::from_vec(
                h,
                w,
                (0..h * w)
                    .map(|i| {
                        let y = i / w;
                        let x = i % w;
                        img.get((x + w - sx) % w, (y + h - sy) % h)
                    })
                    .collect(),
            );
            let (_, triples) = decompose_planes(shifted, levels);
            let mut per_level = Vec::with_capacity(levels);
            for triple in &triples {
                let bands = [&triple.bh, &triple.bd, &triple.bv];
                if single_tree {
                    per_level.push(bands.iter().map(|b| quad_a_energy(b)).collect());
                } else {
                    per_level.push(
                        bands
                            .iter()
                            .flat_map(|b| {
                                let (rp, ip, rq, iq) = quad_to_complex(b);
                                [rp.energy() + ip.energy(), rq.energy() + iq.energy()]
                            })
                            .collect(),
                    );
                }
            }
            energies.push(per_level);
        }
    }
    let bands_per_level = if single_tree { 3 } else { 6 };
    let mut scores = Vec::with_capacity(levels);
    for level in 0..levels {
        let mut worst: f64 = 0.0;
        for b in 0..bands_per_level {
            let vals: Vec<f64> = energies.iter().map(|e| e[level][b]).collect();
            let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            if mean > 0.0 {
                worst = worst.max((max - min) / mean);
            }
        }
        scores.push(worst);
    }
    Ok(scores)
}

fn quad_a_energy(band: &Plane) -> f64 {
    let mut acc = 0.0;
    let mut r = 0;
    while r < band.rows() {
        let row = band.row(r);
        let mut c = 0;
        while c < row.len() {
            acc += row[c] * row[c];
            c += 2;
        }
        r += 2;
    }
    acc
}
