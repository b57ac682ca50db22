//! Grayscale image fusion in the dual-tree complex wavelet domain.
//!
//! Two registered source images are decomposed into one lowpass plane and
//! six oriented complex subbands per level, merged by per-subband convex
//! weighted averaging, and reconstructed. The weight vector is searched by
//! an adaptive multi-objective particle swarm ([`mopso`]) against a
//! six-objective quality fitness ([`metrics`]).
//!
//! The crate is `no_std` (with `alloc`); file formats, parallel execution
//! and the command-line front end live in the companion `fusewave` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod dtcwt;
pub mod fusion;
pub mod image;
mod math;
pub mod metrics;
pub mod mopso;
pub mod pipeline;
pub mod plane;
pub mod rng;

pub use image::{Extent, Image, ImageError};
pub use pipeline::{FusionJob, FusionResult, PipelineError, Selection};
