//! Chebyshev–Gauss–Lobatto nodes on `[0, Y]`, Clenshaw–Curtis weights,
//! spectral differentiation and barycentric interpolation.

use std::f64::consts::PI;

/// Nodes ascending from `0` to `y_max`.
pub fn nodes(n: usize, y_max: f64) -> Vec<f64> {
    let m = (n - 1) as f64;
    (0..n)
        .map(|j| {
            // y = Y(1 - cos(πj/m))/2 = Y sin²(πj/(2m))
            let s = (PI * j as f64 / (2.0 * m)).sin();
            y_max * s * s
        })
        .collect()
}

/// Clenshaw–Curtis weights matching [`nodes`].
pub fn clenshaw_curtis(n: usize, y_max: f64) -> Vec<f64> {
    let m = n - 1;
    let mf = m as f64;
    let mut w = vec![0.0; n];
    let theta: Vec<f64> = (0..n).map(|j| PI * j as f64 / mf).collect();
    if m % 2 == 0 {
        w[0] = 1.0 / (mf * mf - 1.0);
        w[m] = w[0];
        for j in 1..m {
            let mut v = 1.0;
            for k in 1..m / 2 {
                let kf = k as f64;
                v -= 2.0 * (2.0 * kf * theta[j]).cos() / (4.0 * kf * kf - 1.0);
            }
            v -= (mf * theta[j]).cos() / (mf * mf - 1.0);
            w[j] = 2.0 * v / mf;
        }
    } else {
        w[0] = 1.0 / (mf * mf);
        w[m] = w[0];
        for j in 1..m {
            let mut v = 1.0;
            for k in 1..=(m - 1) / 2 {
                let kf = k as f64;
                v -= 2.0 * (2.0 * kf * theta[j]).cos() / (4.0 * kf * kf - 1.0);
            }
            w[j] = 2.0 * v / mf;
        }
    }
    w.iter().map(|x| x * 0.5 * y_max).collect()
}

/// Row-major `n×n` first-derivative matrix for [`nodes`].
pub fn diff_matrix(n: usize, y_max: f64) -> Vec<f64> {
    let m = n - 1;
    let mf = m as f64;
    let cw = |j: usize| {
        let base = if j == 0 || j == m { 2.0 } else { 1.0 };
        if j % 2 == 0 {
            base
        } else {
            -base
        }
    };
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            if i == j {
                continue;
            }
            // x_i - x_j for x = cos(πj/m), via a product of sines
            let diff = -2.0 * (PI * (i + j) as f64 / (2.0 * mf)).sin() * (PI * (i as f64 - j as f64) / (2.0 * mf)).sin();
            let v = cw(i) / cw(j) / diff;
            d[i * n + j] = v;
            row_sum += v;
        }
        d[i * n + i] = -row_sum;
    }
    // ascending variable t = -x, then y = Y(1+t)/2
    let scale = -2.0 / y_max;
    d.iter().map(|v| v * scale).collect()
}

/// Barycentric weights for Chebyshev–Lobatto nodes.
pub fn bary_weights(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n - 1 {
                0.5 * s
            } else {
                s
            }
        })
        .collect()
}

/// Interpolation row: coefficients `c_j` with `f(y) ≈ Σ c_j f_j`.
pub fn interp_row(nodes: &[f64], weights: &[f64], y: f64) -> Vec<f64> {
    let n = nodes.len();
    let mut row = vec![0.0; n];
    if let Some(j) = nodes.iter().position(|&x| x == y) {
        row[j] = 1.0;
        return row;
    }
    let mut denom = 0.0;
    for j in 0..n {
        let t = weights[j] / (y - nodes[j]);
        row[j] = t;
        denom += t;
    }
    for v in row.iter_mut() {
        *v /= denom;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_integrate_polynomials() {
        for &n in &[9usize, 10, 33] {
            let y = 3.0;
            let x = nodes(n, y);
            let w = clenshaw_curtis(n, y);
            for p in 0..(n - 1) {
                let q: f64 = x.iter().zip(&w).map(|(a, b)| a.powi(p as i32) * b).sum();
                let exact = y.powi(p as i32 + 1) / (p as f64 + 1.0);
                assert!((q - exact).abs() < 1e-12 * exact.max(1.0), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn differentiation_is_exact_on_polynomials() {
        let n = 12;
        let y = 2.0;
        let x = nodes(n, y);
        let d = diff_matrix(n, y);
        let f: Vec<f64> = x.iter().map(|t| t.powi(5) - 2.0 * t).collect();
        for i in 0..n {
            let df: f64 = (0..n).map(|j| d[i * n + j] * f[j]).sum();
            let exact = 5.0 * x[i].powi(4) - 2.0;
            assert!((df - exact).abs() < 1e-10 * (1.0 + exact.abs()));
        }
    }

    #[test]
    fn interpolation_reproduces_smooth_functions() {
        let n = 40;
        let y = 8.0;
        let x = nodes(n, y);
        let bw = bary_weights(n);
        let f: Vec<f64> = x.iter().map(|t| (-(t - 4.0).powi(2)).exp()).collect();
        for &t in &[0.0, 0.123, 3.9, 7.77, 8.0] {
            let row = interp_row(&x, &bw, t);
            let v: f64 = row.iter().zip(&f).map(|(a, b)| a * b).sum();
            assert!((v - (-(t - 4.0f64).powi(2)).exp()).abs() < 1e-7);
        }
    }
}
