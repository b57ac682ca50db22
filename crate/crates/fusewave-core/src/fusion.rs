//! Coefficient-domain merging of two pyramids by per-subband convex
//! weighted averaging. One scalar weight fuses the lowpass plane, one per
//! (level, orientation) fuses each complex subband; the weight vector is
//! what the optimizer searches.

use crate::dtcwt::{Pyramid, Subband};
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum FusionError {
    /// pyramid structures differ (levels or plane dimensions)
    StructureMismatch,
    /// weight vector length != 1 + 6 * levels
    WeightLength { expected: usize, got: usize },
    /// weight outside [0, 1]
    WeightOutOfRange { index: usize, value: f64 },
}

impl fmt::Display for FusionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FusionError::StructureMismatch => write!(f, "pyramids have different structure"),
            FusionError::WeightLength { expected, got } => {
                write!(f, "weight vector has {got} entries, expected {expected}")
            }
            FusionError::WeightOutOfRange { index, value } => {
                write!(f, "weight {value} at index {index} outside [0, 1]")
            }
        }
    }
}

impl core::error::Error for FusionError {}

/// Per-subband fusion weights: index 0 drives the lowpass plane, the rest
/// follow level-major in the fixed orientation order of the transform.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionWeights {
    lowpass_weight: f64,
    highpass_weights: Vec<f64>,
}

impl FusionWeights {
    pub fn lowpass_weight(&self) -> f64 {
        self.lowpass_weight
    }

    pub fn highpass_weights(&self) -> &[f64] {
        &self.highpass_weights
    }

    pub fn levels(&self) -> usize {
        self.highpass_weights.len() / 6
    }

    /// Flat form: `[lowpass, highpass...]`, the optimizer's decision vector.
    pub fn to_vector(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(1 + self.highpass_weights.len());
        v.push(self.lowpass_weight);
        v.extend_from_slice(&self.highpass_weights);
        v
    }

    /// Component-wise `1 - w`, the weights seen from the swapped-source view.
    pub fn complement(&self) -> FusionWeights {
        FusionWeights {
            lowpass_weight: 1.0 - self.lowpass_weight,
            highpass_weights: self.highpass_weights.iter().map(|w| 1.0 - w).collect(),
        }
    }
}

/// Decision vector -> weights; requires `x.len() == 1 + 6 * levels` and all
/// entries in `[0, 1]`. Inverse of [`FusionWeights::to_vector`].
pub fn weights_from_vector(x: &[f64], levels: usize) -> Result<FusionWeights, FusionError> {
    let expected = 1 + 6 * levels;
    if x.len() != expected {
        return Err(FusionError::WeightLength {
            expected,
            got: x.len(),
        });
    }
    for (index, &value) in x.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(FusionError::WeightOutOfRange { index, value });
        }
    }
    Ok(FusionWeights {
        lowpass_weight: x[0],
        highpass_weights: x[1..].to_vec(),
    })
}

fn same_structure(p1: &Pyramid, p2: &Pyramid) -> bool {
    p1.levels == p2.levels
        && p1.source_extent == p2.source_extent
        && p1.lowpass.rows() == p2.lowpass.rows()
        && p1.lowpass.cols() == p2.lowpass.cols()
        && p1.subbands.len() == p2.subbands.len()
        && p1
            .subbands
            .iter()
            .zip(p2.subbands.iter())
            .all(|(a, b)| {
                a.level == b.level
                    && a.orientation == b.orientation
                    && a.re.rows() == b.re.rows()
                    && a.re.cols() == b.re.cols()
            })
}

/// `w*p1 + (1-w)*p2` per plane: the lowpass with the lowpass weight, each
/// subband's real and imaginary parts with that subband's weight.
pub fn fuse_pyramids(
    p1: &Pyramid,
    p2: &Pyramid,
    w: &FusionWeights,
) -> Result<Pyramid, FusionError> {
    if !same_structure(p1, p2) {
        return Err(FusionError::StructureMismatch);
    }
    if w.highpass_weights.len() != 6 * p1.levels {
        return Err(FusionError::WeightLength {
            expected: 1 + 6 * p1.levels,
            got: 1 + w.highpass_weights.len(),
        });
    }
    let lowpass = p1.lowpass.convex_combine(&p2.lowpass, w.lowpass_weight);
    let subbands = p1
        .subbands
        .iter()
        .zip(p2.subbands.iter())
        .zip(w.highpass_weights.iter())
        .map(|((a, b), &wk)| Subband {
            level: a.level,
            orientation: a.orientation,
            re: a.re.convex_combine(&b.re, wk),
            im: a.im.convex_combine(&b.im, wk),
        })
        .collect();
    Ok(Pyramid {
        levels: p1.levels,
        lowpass,
        subbands,
        source_extent: p1.source_extent,
    })
}
