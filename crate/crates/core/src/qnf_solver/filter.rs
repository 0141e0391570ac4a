//! Resolution-pairing filter for spurious eigenvalues.

use super::qep::QnfResult;

pub const MATCH_TOL: f64 = 1e-6;
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Greedy nearest-neighbour pairing between two resolutions of the same
/// problem. A pair survives when `|Δλ| < 1e−6(1+|λ|)` and both residuals are
/// below `1e−8`; the finer value is returned with `converged = true`. Pairs
/// are only formed within one parity sector.
pub fn convergence_filter(coarse: &[QnfResult], fine: &[QnfResult], kappa: f64, k: f64) -> Vec<QnfResult> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, a) in coarse.iter().enumerate() {
        for (j, b) in fine.iter().enumerate() {
            if a.parity == b.parity {
                pairs.push(((a.lambda - b.lambda).norm(), i, j));
            }
        }
    }
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut used_a = vec![false; coarse.len()];
    let mut used_b = vec![false; fine.len()];
    let threshold = -kappa * (0.5 + k);
    let mut out = Vec::new();
    for (d, i, j) in pairs {
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        let b = &fine[j];
        let a = &coarse[i];
        if d < MATCH_TOL * (1.0 + b.lambda.norm()) && a.residual < RESIDUAL_TOL && b.residual < RESIDUAL_TOL {
            out.push(QnfResult { converged: true, halfplane_ok: b.lambda.im > threshold, ..*b });
        }
    }
    out.sort_by(|a, b| b.lambda.im.partial_cmp(&a.lambda.im).unwrap().then(a.lambda.re.partial_cmp(&b.lambda.re).unwrap()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn r(re: f64, im: f64) -> QnfResult {
        QnfResult { lambda: Complex64::new(re, im), residual: 1e-12, converged: false, halfplane_ok: true, parity: None }
    }

    #[test]
    fn identical_lists_pass() {
        let a = vec![r(1.0, -1.0), r(2.0, -0.5)];
        assert_eq!(convergence_filter(&a, &a, 1.0, 1.0).len(), 2);
    }

    #[test]
    fn empty_second_list() {
        let a = vec![r(1.0, -1.0)];
        assert!(convergence_filter(&a, &[], 1.0, 1.0).is_empty());
    }

    #[test]
    fn shifted_outlier_rejected() {
        let a = vec![r(1.0, -1.0), r(9.0, -0.1)];
        let b = vec![r(1.0 + 1e-9, -1.0), r(9.3, -0.2)];
        let out = convergence_filter(&a, &b, 1.0, 1.0);
        assert_eq!(out.len(), 1);
        assert!((out[0].lambda.re - 1.0).abs() < 1e-8);
    }
}
