//! Axis-wise FFTs on row-major arrays with the centered-node phase convention.
//!
//! Nodes are `x_m = −L + 2Lm/M`, so `Σ_m f_m e^{−iξ_k x_m} = (−1)^k·FFT(f)_k`.
//! Forward transforms carry no normalization; inverse transforms divide by `M`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    static CACHE: OnceLock<Mutex<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = cache.lock().expect("fft planner poisoned");
    let (planner, plans) = &mut *guard;
    plans
        .entry((n, forward))
        .or_insert_with(|| {
            if forward {
                planner.plan_fft_forward(n)
            } else {
                planner.plan_fft_inverse(n)
            }
        })
        .clone()
}

/// Transforms every line of `data` (row-major with `shape`) along `axis`.
pub fn transform_axis(data: &mut [Complex64], shape: &[usize], axis: usize, forward: bool) {
    let n = shape[axis];
    let total: usize = shape.iter().product();
    assert_eq!(data.len() % total, 0, "data length is not a multiple of the shape");
    let stride: usize = shape[axis + 1..].iter().product();
    let outer = total / (n * stride);
    let fft = plan(n, forward);
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let scale = 1.0 / n as f64;
    for block in data.chunks_mut(total) {
        for o in 0..outer {
            for s in 0..stride {
                let base = o * n * stride + s;
                for (k, v) in line.iter_mut().enumerate() {
                    *v = block[base + k * stride];
                }
                if !forward {
                    for v in line.iter_mut().skip(1).step_by(2) {
                        *v = -*v;
                    }
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                if forward {
                    for v in line.iter_mut().skip(1).step_by(2) {
                        *v = -*v;
                    }
                } else {
                    for v in line.iter_mut() {
                        *v *= scale;
                    }
                }
                for (k, v) in line.iter().enumerate() {
                    block[base + k * stride] = *v;
                }
            }
        }
    }
}

/// Signed frequency index of FFT slot `k` for a transform of length `n`.
pub fn signed_index(k: usize, n: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode_maps_to_scaled_delta() {
        let n = 16;
        let l = 3.0;
        let k0 = 5i64;
        let xi = std::f64::consts::PI / l * k0 as f64;
        let mut data: Vec<Complex64> = (0..n)
            .map(|m| {
                let x = -l + 2.0 * l * m as f64 / n as f64;
                Complex64::from_polar(1.0, xi * x)
            })
            .collect();
        transform_axis(&mut data, &[n], 0, true);
        for (k, v) in data.iter().enumerate() {
            let expect = if signed_index(k, n) == k0 { n as f64 } else { 0.0 };
            assert!((v - expect).norm() < 1e-12, "k={k} v={v}");
        }
    }

    #[test]
    fn round_trip_on_2d_array() {
        let shape = [8, 4, 6];
        let orig: Vec<Complex64> = (0..8 * 4 * 6)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut data = orig.clone();
        for ax in 0..3 {
            transform_axis(&mut data, &shape, ax, true);
        }
        for ax in 0..3 {
            transform_axis(&mut data, &shape, ax, false);
        }
        let err = data.iter().zip(&orig).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-14);
    }
}
