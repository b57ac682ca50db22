//! Filter tables for the two decomposition stages.
//!
//! Level 1 uses an odd-length linear-phase biorthogonal pair (the classic
//! 9/7 product-filter factorization, analysis side rescaled by 0.85^(1/4)
//! with the synthesis side compensated, which centres the pyramid's total
//! energy ratio near 3.5). Levels >= 2 use an even-length orthonormal
//! quarter-sample-delay (q-shift) filter designed by constrained stopband
//! minimization over the interleaved double-length parent; its CQF
//! residuals are below 1e-15. Tree b is structural: one-sample delay of
//! tree a at level 1, time reversal of tree a at q-shift levels.

use alloc::vec::Vec;

/// Level-1 analysis lowpass, 9 taps, symmetric about index 4.
pub(crate) const H0O: [f64; 9] = [
    0.03632230001877903,
    -0.022899888777142927,
    -0.1062198483345867,
    0.3623764059564039,
    0.8187481309901374,
    0.3623764059564039,
    -0.1062198483345867,
    -0.022899888777142927,
    0.03632230001877903,
];
pub(crate) const H0O_CENTER: isize = 4;

/// Level-1 analysis highpass, 7 taps, symmetric about index 3.
pub(crate) const H1O: [f64; 7] = [
    0.061969240517672323,
    -0.0390693517405294,
    -0.40144575769693336,
    0.7570917378395808,
    -0.40144575769693336,
    -0.0390693517405294,
    0.061969240517672323,
];
pub(crate) const H1O_CENTER: isize = 3;

/// Level-1 synthesis lowpass, 7 taps.
pub(crate) const G0O: [f64; 7] = [
    -0.06721507858086537,
    -0.042376661798755766,
    0.4354290600327653,
    0.8211812865013114,
    0.4354290600327653,
    -0.042376661798755766,
    -0.06721507858086537,
];
pub(crate) const G0O_CENTER: isize = 3;

/// Level-1 synthesis highpass, 9 taps.
pub(crate) const G1O: [f64; 9] = [
    0.03939706586050159,
    0.02483841678210961,
    -0.11521160164325057,
    -0.3930523982340095,
    0.8880570344692978,
    -0.3930523982340095,
    -0.11521160164325057,
    0.02483841678210961,
    0.03939706586050159,
];
pub(crate) const G1O_CENTER: isize = 4;

/// Q-shift lowpass for tree a, 14 taps, orthonormal.
pub(crate) const H0A: [f64; 14] = [
    -0.0077455854057718,
    -0.009174318641888078,
    0.02425082886717365,
    0.0369079331409938,
    -0.1324347919308304,
    0.03024099555363001,
    0.575473564205306,
    0.7298994749098879,
    0.30479300361901646,
    -0.1322517548757213,
    -0.05302535659205809,
    0.04793440333679629,
    -0.0042048815762883275,
    0.003550047762848885,
];

/// Output alignment of the q-shift kernels: output sample t is centred on
/// composite lattice position 2*(2t + QSHIFT_ALIGN). This exact value makes
/// the half-sample reflection of the interleaved subband arrays coincide
/// with the reflection of the composite signal, which is what gives perfect
/// reconstruction with symmetric extension at every level.
pub(crate) const QSHIFT_ALIGN: isize = 7;

pub(crate) fn qshift_highpass_a() -> Vec<f64> {
    // h1a[n] = (-1)^n * h0a[N-1-n]
    let n = H0A.len();
    (0..n)
        .map(|i| if i % 2 == 0 { H0A[n - 1 - i] } else { -H0A[n - 1 - i] })
        .collect()
}

pub(crate) fn reversed(taps: &[f64]) -> Vec<f64> {
    taps.iter().rev().copied().collect()
}

/// One FIR filter plus the tap index aligned with the output sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Filter {
    pub taps: Vec<f64>,
    pub center: isize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterPair {
    pub lowpass: Filter,
    pub highpass: Filter,
}

/// The full analysis/synthesis table set, tree a and tree b explicit.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    /// `[tree a, tree b]`; tree b is tree a delayed by one sample.
    pub level1_analysis: [FilterPair; 2],
    pub level1_synthesis: [FilterPair; 2],
    /// `[tree a, tree b]`; tree b is the time reverse of tree a.
    pub qshift_analysis: [FilterPair; 2],
    pub qshift_synthesis: [FilterPair; 2],
}

impl Default for FilterBank {
    fn default() -> Self {
        let f = |taps: &[f64], center: isize| Filter {
            taps: taps.to_vec(),
            center,
        };
        let h1a = qshift_highpass_a();
        let l1a = FilterPair {
            lowpass: f(&H0O, H0O_CENTER),
            highpass: f(&H1O, H1O_CENTER),
        };
        let l1a_syn = FilterPair {
            lowpass: f(&G0O, G0O_CENTER),
            highpass: f(&G1O, G1O_CENTER),
        };
        // delaying a filter by one sample shifts its centre back by one
        let delayed = |p: &FilterPair| FilterPair {
            lowpass: Filter {
                taps: p.lowpass.taps.clone(),
                center: p.lowpass.center - 1,
            },
            highpass: Filter {
                taps: p.highpass.taps.clone(),
                center: p.highpass.center - 1,
            },
        };
        let qa = FilterPair {
            lowpass: f(&H0A, QSHIFT_ALIGN),
            highpass: Filter {
                taps: h1a.clone(),
                center: QSHIFT_ALIGN,
            },
        };
        let qb = FilterPair {
            lowpass: Filter {
                taps: reversed(&H0A),
                center: QSHIFT_ALIGN,
            },
            highpass: Filter {
                taps: reversed(&h1a),
                center: QSHIFT_ALIGN,
            },
        };
        FilterBank {
            level1_analysis: [l1a.clone(), delayed(&l1a)],
            level1_synthesis: [l1a_syn.clone(), delayed(&l1a_syn)],
            qshift_analysis: [qa.clone(), qb.clone()],
            qshift_synthesis: [qa, qb],
        }
    }
}

impl FilterBank {
    /// Structural invariants: odd/even lengths, the tree-b relations, and
    /// q-shift orthonormality. Reconstruction quality is checked by the
    /// transform tests on top of this.
    pub fn validate(&self) -> Result<(), &'static str> {
        for p in &self.level1_analysis {
            if p.lowpass.taps.len() % 2 == 0 || p.highpass.taps.len() % 2 == 0 {
                return Err("level-1 filters must have odd length");
            }
        }
        for p in &self.qshift_analysis {
            if p.lowpass.taps.len() % 2 != 0 || p.highpass.taps.len() % 2 != 0 {
                return Err("q-shift filters must have even length");
            }
        }
        let [a, b] = &self.level1_analysis;
        if a.lowpass.taps != b.lowpass.taps || a.lowpass.center != b.lowpass.center + 1 {
            return Err("level-1 tree b must be tree a delayed by one sample");
        }
        let [qa, qb] = &self.qshift_analysis;
        if reversed(&qa.lowpass.taps) != qb.lowpass.taps
            || reversed(&qa.highpass.taps) != qb.highpass.taps
        {
            return Err("q-shift tree b must be the time reverse of tree a");
        }
        // CQF: even-lag autocorrelation of the q-shift lowpass is a delta
        let h = &qa.lowpass.taps;
        for lag in 0..h.len() / 2 {
            let acc: f64 = (0..h.len() - 2 * lag).map(|i| h[i] * h[i + 2 * lag]).sum();
            let target = if lag == 0 { 1.0 } else { 0.0 };
            if crate::math::abs(acc - target) > 1e-12 {
                return Err("q-shift lowpass is not orthonormal");
            }
        }
        Ok(())
    }
}
