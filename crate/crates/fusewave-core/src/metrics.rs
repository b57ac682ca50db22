//! Fused-image quality benchmarks and the six-objective fitness vector.
//!
//! Entropy, RMSE, PSNR, the global two-moment SSIM form, SD and MEAN. Note
//! two deliberate quirks kept exactly as printed in the benchmark
//! definitions this implements: MEAN takes absolute pixel values, and SSIM
//! multiplies the two standard deviations instead of using covariance (the
//! windowed covariance variant is available as [`ssim_standard`]).

use crate::image::Image;
use crate::math;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub const SSIM_C1: f64 = 6.5025; // (0.01 * 255)^2
pub const SSIM_C2: f64 = 58.5225; // (0.03 * 255)^2

/// Stand-in for an infinite PSNR inside fitness vectors, keeping dominance
/// arithmetic finite.
pub const PSNR_SENTINEL_DB: f64 = 1000.0;

pub const NUM_OBJECTIVES: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum MetricsError {
    DimensionMismatch,
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::DimensionMismatch => write!(f, "images have different dimensions"),
        }
    }
}

impl core::error::Error for MetricsError {}

/// Shannon entropy in bits of the 256-bin gray-level histogram. Pixels are
/// rounded half-up and clamped to [0, 255] before binning.
pub fn entropy(img: &Image) -> f64 {
    let mut counts = [0u64; 256];
    for &v in img.pixels() {
        let bin = math::round_half_up(v.clamp(0.0, 255.0)) as usize;
        counts[bin.min(255)] += 1;
    }
    let total = img.pixels().len() as f64;
    let mut e = 0.0;
    for &c in &counts {
        if c > 0 {
            let p = c as f64 / total;
            e -= p * math::log2(p);
        }
    }
    e
}

fn check_dims(a: &Image, b: &Image) -> Result<(), MetricsError> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(MetricsError::DimensionMismatch);
    }
    Ok(())
}

/// Root mean square error between a reference and a test image.
pub fn rmse(reference: &Image, test: &Image) -> Result<f64, MetricsError> {
    check_dims(reference, test)?;
    let mut acc = 0.0;
    for (r, f) in reference.pixels().iter().zip(test.pixels().iter()) {
        acc += (r - f) * (r - f);
    }
    Ok(math::sqrt(acc / reference.pixels().len() as f64))
}

/// `10 log10(255^2 / RMSE^2)` in dB; identical images give `+inf`.
pub fn psnr(reference: &Image, test: &Image) -> Result<f64, MetricsError> {
    let e = rmse(reference, test)?;
    if e == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * math::log10(255.0 * 255.0 / (e * e)))
}

fn mean_and_population_sd(img: &Image) -> (f64, f64) {
    let n = img.pixels().len() as f64;
    let mu = img.pixels().iter().sum::<f64>() / n;
    let var = img.pixels().iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / n;
    (mu, math::sqrt(var))
}

/// Whole-image two-moment structural similarity:
/// `(2 mu_f mu_r + C1)(2 sigma_f sigma_r + C2) /
///  ((mu_f^2 + mu_r^2 + C1)(sigma_f^2 + sigma_r^2 + C2))`.
pub fn ssim_paper(reference: &Image, test: &Image) -> Result<f64, MetricsError> {
    check_dims(reference, test)?;
    let (mu_r, sd_r) = mean_and_population_sd(reference);
    let (mu_f, sd_f) = mean_and_population_sd(test);
    let num = (2.0 * mu_f * mu_r + SSIM_C1) * (2.0 * sd_f * sd_r + SSIM_C2);
    let den = (mu_f * mu_f + mu_r * mu_r + SSIM_C1) * (sd_f * sd_f + sd_r * sd_r + SSIM_C2);
    Ok(num / den)
}

/// Covariance-form SSIM over an 8x8 sliding window, mean-pooled; for
/// comparison against the two-moment form.
pub fn ssim_standard(reference: &Image, test: &Image) -> Result<f64, MetricsError> {
    check_dims(reference, test)?;
    const WIN: usize = 8;
    let w = reference.width();
    let h = reference.height();
    if w < WIN || h < WIN {
        // degenerate: fall back to one window covering the image
        return ssim_windowed(reference, test, 0, 0, w, h).map(|v| v);
    }
    let mut acc = 0.0;
    let mut count = 0u64;
    for y in 0..=(h - WIN) {
        for x in 0..=(w - WIN) {
            acc += ssim_windowed(reference, test, x, y, WIN, WIN)?;
            count += 1;
        }
    }
    Ok(acc / count as f64)
}

fn ssim_windowed(
    reference: &Image,
    test: &Image,
    x0: usize,
    y0: usize,
    ww: usize,
    wh: usize,
) -> Result<f64, MetricsError> {
    let n = (ww * wh) as f64;
    let mut sr = 0.0;
    let mut sf = 0.0;
    for y in y0..y0 + wh {
        for x in x0..x0 + ww {
            sr += reference.get(x, y);
            sf += test.get(x, y);
        }
    }
    let mu_r = sr / n;
    let mu_f = sf / n;
    let mut var_r = 0.0;
    let mut var_f = 0.0;
    let mut cov = 0.0;
    for y in y0..y0 + wh {
        for x in x0..x0 + ww {
            let dr = reference.get(x, y) - mu_r;
            let df = test.get(x, y) - mu_f;
            var_r += dr * dr;
            var_f += df * df;
            cov += dr * df;
        }
    }
    var_r /= n;
    var_f /= n;
    cov /= n;
    let num = (2.0 * mu_f * mu_r + SSIM_C1) * (2.0 * cov + SSIM_C2);
    let den = (mu_f * mu_f + mu_r * mu_r + SSIM_C1) * (var_f + var_r + SSIM_C2);
    Ok(num / den)
}

/// Mean of absolute pixel values.
pub fn mean(img: &Image) -> f64 {
    img.pixels().iter().map(|v| math::abs(*v)).sum::<f64>() / img.pixels().len() as f64
}

/// `sqrt(mean((F - MEAN)^2))` with MEAN the absolute-value mean above.
pub fn sd(img: &Image) -> f64 {
    let m = mean(img);
    let acc = img
        .pixels()
        .iter()
        .map(|v| (v - m) * (v - m))
        .sum::<f64>();
    math::sqrt(acc / img.pixels().len() as f64)
}

fn psnr_capped(reference: &Image, test: &Image) -> Result<f64, MetricsError> {
    let p = psnr(reference, test)?;
    Ok(if p.is_finite() { p } else { PSNR_SENTINEL_DB })
}

/// Six-objective minimization vector for a fused image against its two
/// sources:
/// `[-E(F), mean rmse, -mean capped psnr, -SD(F), -ssim(A,F), -ssim(B,F)]`.
pub fn fitness_vector(fused: &Image, src_a: &Image, src_b: &Image) -> Result<Vec<f64>, MetricsError> {
    check_dims(fused, src_a)?;
    check_dims(fused, src_b)?;
    let rmse_a = rmse(src_a, fused)?;
    let rmse_b = rmse(src_b, fused)?;
    let psnr_a = psnr_capped(src_a, fused)?;
    let psnr_b = psnr_capped(src_b, fused)?;
    Ok(vec![
        -entropy(fused),
        0.5 * (rmse_a + rmse_b),
        -0.5 * (psnr_a + psnr_b),
        -sd(fused),
        -ssim_paper(src_a, fused)?,
        -ssim_paper(src_b, fused)?,
    ])
}

/// Full per-pair quality report; aggregate rmse/psnr are means over the two
/// sources with the PSNR infinity kept (it is mapped only inside fitness
/// vectors).
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub entropy: f64,
    pub psnr: f64,
    pub rmse: f64,
    pub ssim_vs_a: f64,
    pub ssim_vs_b: f64,
    pub sd: f64,
    pub mean: f64,
    pub rmse_a: f64,
    pub rmse_b: f64,
    pub psnr_a: f64,
    pub psnr_b: f64,
}

pub fn report(fused: &Image, src_a: &Image, src_b: &Image) -> Result<MetricsReport, MetricsError> {
    check_dims(fused, src_a)?;
    check_dims(fused, src_b)?;
    let rmse_a = rmse(src_a, fused)?;
    let rmse_b = rmse(src_b, fused)?;
    let psnr_a = psnr(src_a, fused)?;
    let psnr_b = psnr(src_b, fused)?;
    Ok(MetricsReport {
        entropy: entropy(fused),
        psnr: 0.5 * (psnr_a + psnr_b),
        rmse: 0.5 * (rmse_a + rmse_b),
        ssim_vs_a: ssim_paper(src_a, fused)?,
        ssim_vs_b: ssim_paper(src_b, fused)?,
        sd: sd(fused),
        mean: mean(fused),
        rmse_a,
        rmse_b,
        psnr_a,
        psnr_b,
    })
}
