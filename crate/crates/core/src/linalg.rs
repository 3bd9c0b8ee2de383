//! Dense vector helpers on `[f64]` slices.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist_sq(a, b).sqrt()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Row-major `rows x cols` matrix times vector.
pub fn mat_vec(m: &[f64], rows: usize, cols: usize, x: &[f64]) -> Vec<f64> {
    debug_assert_eq!(m.len(), rows * cols);
    debug_assert_eq!(x.len(), cols);
    (0..rows)
        .map(|r| dot(&m[r * cols..(r + 1) * cols], x))
        .collect()
}

/// Row-major `rows x cols` matrix transposed times vector.
pub fn mat_t_vec(m: &[f64], rows: usize, cols: usize, y: &[f64]) -> Vec<f64> {
    debug_assert_eq!(y.len(), rows);
    let mut out = vec![0.0; cols];
    for r in 0..rows {
        axpy(y[r], &m[r * cols..(r + 1) * cols], &mut out);
    }
    out
}

/// Largest singular value of a row-major matrix, by power iteration on `MᵀM`.
///
/// Iterates until the relative change of the estimate drops below `tol`.
pub fn operator_norm(m: &[f64], rows: usize, cols: usize, tol: f64) -> f64 {
    if rows == 0 || cols == 0 || m.iter().all(|&v| v == 0.0) {
        return 0.0;
    }
    // Deterministic, generic start vector; all-ones can be orthogonal to the top
    // singular vector, so perturb it.
    let mut x: Vec<f64> = (0..cols)
        .map(|j| 1.0 + 0.1 * (j as f64 + 1.0).sqrt())
        .collect();
    let mut prev = 0.0;
    for _ in 0..10_000 {
        let n = norm(&x);
        x.iter_mut().for_each(|v| *v /= n);
        let y = mat_vec(m, rows, cols, &x);
        let z = mat_t_vec(m, rows, cols, &y);
        let est = norm(&y);
        if (est - prev).abs() <= tol * est.max(1e-300) {
            return est;
        }
        prev = est;
        x = z;
        if norm(&x) == 0.0 {
            return est;
        }
    }
    prev
}

/// Extreme eigenvalues `(min, max)` of a symmetric row-major `n x n` matrix.
pub fn symmetric_eig_range(m: &[f64], n: usize) -> (f64, f64) {
    let top = operator_norm(m, n, n, 1e-13);
    // Shift so the spectrum of `top*I - M` is nonnegative; its top eigenvalue gives
    // `top - min_eig`.
    let mut shifted = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            shifted[r * n + c] = if r == c { top } else { 0.0 } - m[r * n + c];
        }
    }
    let spread = operator_norm(&shifted, n, n, 1e-13);
    let min_eig = top - spread;
    // `top` is |largest| only for PSD inputs; recover the signed max the same way.
    let mut shifted_up = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            shifted_up[r * n + c] = m[r * n + c] + if r == c { top } else { 0.0 };
        }
    }
    let max_eig = operator_norm(&shifted_up, n, n, 1e-13) - top;
    (min_eig, max_eig)
}
