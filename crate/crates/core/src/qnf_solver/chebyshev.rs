//! Chebyshev-Gauss-Lobatto collocation.

use faer::Mat;

/// Nodes `cos(πj/(n−1))`, `j = 0..n`, in descending order on `[−1, 1]`.
pub fn nodes(n: usize) -> Vec<f64> {
    assert!(n >= 2, "need at least two nodes");
    let m = (n - 1) as f64;
    (0..n)
        .map(|j| {
            // sin form keeps the nodes exactly symmetric
            let x = (std::f64::consts::PI * (m - 2.0 * j as f64) / (2.0 * m)).sin();
            if x.abs() < 1e-300 { 0.0 } else { x }
        })
        .collect()
}

/// First derivative matrix on [`nodes`], with the negative-sum trick on the
/// diagonal.
pub fn diff_matrix(n: usize) -> Mat<f64> {
    let x = nodes(n);
    let m = n - 1;
    let c = |i: usize| -> f64 {
        let w = if i == 0 || i == m { 2.0 } else { 1.0 };
        if i % 2 == 0 { w } else { -w }
    };
    let mut d = Mat::<f64>::zeros(n, n);
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            if i != j {
                let v = c(i) / c(j) / (x[i] - x[j]);
                d[(i, j)] = v;
                row_sum += v;
            }
        }
        d[(i, i)] = -row_sum;
    }
    d
}

/// Barycentric interpolation of nodal values at `x`.
pub fn interpolate(values: &[f64], x: f64) -> f64 {
    let n = values.len();
    let xs = nodes(n);
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..n {
        let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == n - 1 {
            w *= 0.5;
        }
        let dx = x - xs[j];
        if dx == 0.0 {
            return values[j];
        }
        num += w * values[j] / dx;
        den += w / dx;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differentiates_polynomials_exactly() {
        let n = 9;
        let x = nodes(n);
        let d = diff_matrix(n);
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += d[(i, j)] * x[j].powi(5);
            }
            assert!((acc - 5.0 * x[i].powi(4)).abs() < 1e-12);
        }
    }

    #[test]
    fn nodes_symmetric() {
        let x = nodes(12);
        for j in 0..12 {
            assert_eq!(x[j], -x[11 - j]);
        }
    }
}
