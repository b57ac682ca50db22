//! Deterministic 256x256 CT/MR-style phantom pair with complementary
//! detail: the CT carries a bright bone rim and a flat, coarsely quantized
//! interior (low entropy, high contrast); the MR carries a dark rim and a
//! richly textured interior (high entropy). Both are pure functions of a
//! fixed seed, so the bundled assets are reproducible byte-for-byte.

use fusewave_core::rng::UnitRng;
use fusewave_core::Image;

pub const SIZE: usize = 256;

fn smooth_noise(seed: u64, passes: usize, radius: usize) -> Vec<f64> {
    let mut rng = UnitRng::from_seed(seed);
    let mut field: Vec<f64> = (0..SIZE * SIZE).map(|_| rng.next_unit() - 0.5).collect();
    let mut scratch = vec![0.0; SIZE * SIZE];
    for _ in 0..passes {
        // horizontal then vertical box blur, clamped edges
        for y in 0..SIZE {
            for x in 0..SIZE {
                let mut acc = 0.0;
                for dx in -(radius as isize)..=(radius as isize) {
                    let sx = (x as isize + dx).clamp(0, SIZE as isize - 1) as usize;
                    acc += field[y * SIZE + sx];
                }
                scratch[y * SIZE + x] = acc / (2 * radius + 1) as f64;
            }
        }
        for y in 0..SIZE {
            for x in 0..SIZE {
                let mut acc = 0.0;
                for dy in -(radius as isize)..=(radius as isize) {
                    let sy = (y as isize + dy).clamp(0, SIZE as isize - 1) as usize;
                    acc += scratch[sy * SIZE + x];
                }
                field[y * SIZE + x] = acc / (2 * radius + 1) as f64;
            }
        }
    }
    // normalize to [-1, 1]
    let max = field.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-12);
    field.iter_mut().for_each(|v| *v /= max);
    field
}

struct Geometry {
    /// elliptical radius of (x, y) relative to the head centre, 1.0 = rim
    r: f64,
    theta: f64,
}

fn geometry(x: usize, y: usize) -> Geometry {
    let cx = (x as f64 - 128.0) / 104.0;
    let cy = (y as f64 - 128.0) / 116.0;
    Geometry {
        r: (cx * cx + cy * cy).sqrt(),
        theta: cy.atan2(cx),
    }
}

/// CT-like phantom: bright skull annulus, coarsely quantized soft tissue,
/// dark ventricles, one bright calcification.
pub fn ct_phantom() -> Image {
    let blobs = smooth_noise(0xC7_0001, 3, 9);
    Image::from_fn(SIZE, SIZE, 8, |x, y| {
        let g = geometry(x, y);
        if g.r > 1.06 {
            return 2.0; // air
        }
        if g.r > 0.92 {
            return 236.0; // bone
        }
        // soft tissue: flat base with large smooth lobes, quantized hard
        let base = 78.0 + 26.0 * blobs[y * SIZE + x];
        let vx = (x as f64 - 112.0) / 26.0;
        let vy = (y as f64 - 120.0) / 44.0;
        let wx = (x as f64 - 150.0) / 24.0;
        let wy = (y as f64 - 120.0) / 42.0;
        let mut v = base;
        if vx * vx + vy * vy < 1.0 || wx * wx + wy * wy < 1.0 {
            v = 44.0; // ventricles
        }
        let lx = (x as f64 - 170.0) / 9.0;
        let ly = (y as f64 - 172.0) / 9.0;
        if lx * lx + ly * ly < 1.0 {
            v = 210.0; // calcification
        }
        // quantize to 12-level steps: few occupied bins, low entropy
        (v / 12.0).round() * 12.0
    })
    .expect("phantom dimensions are valid")
}

/// MR-like phantom: dark skull, textured cortex with gyral banding, bright
/// ventricles, a lesion where the CT is bland.
pub fn mr_phantom() -> Image {
    let texture = smooth_noise(0xC7_0002, 2, 3);
    let folds = smooth_noise(0xC7_0003, 3, 6);
    Image::from_fn(SIZE, SIZE, 8, |x, y| {
        let g = geometry(x, y);
        if g.r > 1.06 {
            return 1.0;
        }
        if g.r > 0.92 {
            return 14.0; // bone is dark in MR
        }
        let t = texture[y * SIZE + x];
        let f = folds[y * SIZE + x];
        // gyral bands: radial ripple bent by the fold field
        let band = ((g.r * 21.0 + 3.4 * f + 1.3 * (4.0 * g.theta).sin()).sin()).asin() / 1.5;
        let mut v = 118.0 + 58.0 * band + 34.0 * t;
        let vx = (x as f64 - 112.0) / 26.0;
        let vy = (y as f64 - 120.0) / 44.0;
        let wx = (x as f64 - 150.0) / 24.0;
        let wy = (y as f64 - 120.0) / 42.0;
        if vx * vx + vy * vy < 1.0 || wx * wx + wy * wy < 1.0 {
            v = 212.0 + 18.0 * t; // CSF bright
        }
        let lx = (x as f64 - 86.0) / 12.0;
        let ly = (y as f64 - 160.0) / 12.0;
        if lx * lx + ly * ly < 1.0 {
            v = 30.0 + 10.0 * t; // lesion invisible on CT
        }
        v.clamp(0.0, 255.0)
    })
    .expect("phantom dimensions are valid")
}

pub fn generate_pair() -> (Image, Image) {
    (ct_phantom(), mr_phantom())
}
