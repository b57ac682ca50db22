//! Column-direction filtering primitives. Row-direction filtering is done
//! by transposing, filtering columns, and transposing back.
//!
//! All boundary handling is half-sample symmetric reflection (edge sample
//! repeated across the seam), applied to the composite interleaved arrays.
//! Reflection maps even lattice positions onto odd ones, so a tree-a atom
//! folds onto tree-b territory; with tree b the time reverse of tree a and
//! the `QSHIFT_ALIGN` output centring, the reflected virtual outputs of one
//! tree coincide exactly with real outputs of the other, which makes the
//! decimated stage perfectly reconstructing under symmetric extension.

use super::filters::QSHIFT_ALIGN;
use crate::image::reflect_index_signed;
use crate::plane::Plane;

/// Undecimated centre-aligned filtering along columns:
/// `out[i] = sum_k taps[k] * src[reflect(i + center - k)]`.
pub(crate) fn l1_conv_cols(src: &Plane, taps: &[f64], center: isize) -> Plane {
    let rows = src.rows();
    let cols = src.cols();
    let mut out = Plane::zeros(rows, cols);
    for i in 0..rows {
        // split borrow: accumulate into a scratch row, then store
        for (k, &t) in taps.iter().enumerate() {
            let s = reflect_index_signed(i as isize + center - k as isize, rows);
            let src_row = src.row(s);
            let dst_row = out.row_mut(i);
            for (d, &v) in dst_row.iter_mut().zip(src_row.iter()) {
                *d += t * v;
            }
        }
    }
    out
}

/// Level-1 column synthesis: `0.5 * (g0 * y0 + g1 * y1)` with the subbands
/// symmetrically extended; exact inverse of the two `l1_conv_cols` analyses.
pub(crate) fn l1_synth_cols(
    y0: &Plane,
    y1: &Plane,
    g0: &[f64],
    c_g0: isize,
    g1: &[f64],
    c_g1: isize,
) -> Plane {
    assert_eq!(y0.rows(), y1.rows());
    assert_eq!(y0.cols(), y1.cols());
    let rows = y0.rows();
    let cols = y0.cols();
    let mut out = Plane::zeros(rows, cols);
    for i in 0..rows {
        for (k, &t) in g0.iter().enumerate() {
            let s = reflect_index_signed(i as isize + c_g0 - k as isize, rows);
            let src_row = y0.row(s);
            let dst_row = out.row_mut(i);
            for (d, &v) in dst_row.iter_mut().zip(src_row.iter()) {
                *d += 0.5 * t * v;
            }
        }
        for (k, &t) in g1.iter().enumerate() {
            let s = reflect_index_signed(i as isize + c_g1 - k as isize, rows);
            let src_row = y1.row(s);
            let dst_row = out.row_mut(i);
            for (d, &v) in dst_row.iter_mut().zip(src_row.iter()) {
                *d += 0.5 * t * v;
            }
        }
    }
    out
}

/// Q-shift analysis along columns, 2:1 decimation. Tree a reads the even
/// composite rows with `ha`, tree b the odd rows with `hb = reverse(ha)`;
/// outputs interleave a/b so the next level sees the same lattice layout.
/// Input row count must be a multiple of 4.
pub(crate) fn qshift_down_cols(src: &Plane, ha: &[f64], hb: &[f64]) -> Plane {
    let rows = src.rows();
    let cols = src.cols();
    debug_assert!(rows % 4 == 0);
    debug_assert_eq!(ha.len(), hb.len());
    let mut out = Plane::zeros(rows / 2, cols);
    for t in 0..rows / 4 {
        for (j, (&ta, &tb)) in ha.iter().zip(hb.iter()).enumerate() {
            let base = 2 * (2 * t as isize + QSHIFT_ALIGN - j as isize);
            let sa = reflect_index_signed(base, rows);
            let sb = reflect_index_signed(base + 1, rows);
            {
                let src_row = src.row(sa);
                let dst_row = out.row_mut(2 * t);
                for (d, &v) in dst_row.iter_mut().zip(src_row.iter()) {
                    *d += ta * v;
                }
            }
            {
                let src_row = src.row(sb);
                let dst_row = out.row_mut(2 * t + 1);
                for (d, &v) in dst_row.iter_mut().zip(src_row.iter()) {
                    *d += tb * v;
                }
            }
        }
    }
    out
}

/// Q-shift synthesis along columns, 1:2 interpolation. Transpose pattern of
/// `qshift_down_cols` with the interleaved subbands symmetrically extended
/// (their reflection swaps trees, matching the composite extension).
pub(crate) fn qshift_up_cols(
    lo: &Plane,
    hi: &Plane,
    h0a: &[f64],
    h0b: &[f64],
    h1a: &[f64],
    h1b: &[f64],
) -> Plane {
    assert_eq!(lo.rows(), hi.rows());
    assert_eq!(lo.cols(), hi.cols());
    let half = lo.rows();
    let rows = half * 2;
    let cols = lo.cols();
    let reach = h0a.len() as isize;
    let mut out = Plane::zeros(rows, cols);
    for t in -reach..(half as isize / 2 + reach) {
        let la = reflect_index_signed(2 * t, half);
        let lb = reflect_index_signed(2 * t + 1, half);
        for j in 0..h0a.len() as isize {
            let pa = 2 * (2 * t + QSHIFT_ALIGN - j);
            if (0..rows as isize).contains(&pa) {
                let w0 = h0a[j as usize];
                let w1 = h1a[j as usize];
                let lo_row = lo.row(la);
                let hi_row = hi.row(la);
                let dst = out.row_mut(pa as usize);
                for ((d, &l), &h) in dst.iter_mut().zip(lo_row.iter()).zip(hi_row.iter()) {
                    *d += w0 * l + w1 * h;
                }
            }
            let pb = pa + 1;
            if (0..rows as isize).contains(&pb) {
                let w0 = h0b[j as usize];
                let w1 = h1b[j as usize];
                let lo_row = lo.row(lb);
                let hi_row = hi.row(lb);
                let dst = out.row_mut(pb as usize);
                for ((d, &l), &h) in dst.iter_mut().zip(lo_row.iter()).zip(hi_row.iter()) {
                    *d += w0 * l + w1 * h;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtcwt::filters::{
        qshift_highpass_a, reversed, G0O, G0O_CENTER, G1O, G1O_CENTER, H0A, H0O, H0O_CENTER, H1O,
        H1O_CENTER,
    };

    fn column(v: &[f64]) -> Plane {
        Plane::from_vec(v.len(), 1, v.to_vec())
    }

    #[test]
    fn level1_round_trip_is_exact() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 200.0 - 100.0
        };
        for n in [8usize, 12, 16, 30, 64] {
            let x: alloc::vec::Vec<f64> = (0..n).map(|_| next()).collect();
            let p = column(&x);
            let y0 = l1_conv_cols(&p, &H0O, H0O_CENTER);
            let y1 = l1_conv_cols(&p, &H1O, H1O_CENTER);
            let r = l1_synth_cols(&y0, &y1, &G0O, G0O_CENTER, &G1O, G1O_CENTER);
            for i in 0..n {
                assert!((r.at(i, 0) - x[i]).abs() < 1e-10, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn qshift_round_trip_is_exact() {
        let h1a = qshift_highpass_a();
        let h0b = reversed(&H0A);
        let h1b = reversed(&h1a);
        let mut state = 0x853c49e6748fea9bu64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for n in [16usize, 24, 32, 64] {
            let x: alloc::vec::Vec<f64> = (0..n).map(|_| next()).collect();
            let p = column(&x);
            let lo = qshift_down_cols(&p, &H0A, &h0b);
            let hi = qshift_down_cols(&p, &h1a, &h1b);
            let r = qshift_up_cols(&lo, &hi, &H0A, &h0b, &h1a, &h1b);
            for i in 0..n {
                assert!((r.at(i, 0) - x[i]).abs() < 1e-10, "n={n} i={i}");
            }
        }
    }
}
