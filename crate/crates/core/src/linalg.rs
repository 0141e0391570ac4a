//! Small helpers over `faer` for complex dense matrices.

use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::Mat;
use num_complex::Complex64;

pub type CMat = Mat<Complex64>;

pub fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub fn matvec(a: &CMat, x: &[Complex64]) -> Vec<Complex64> {
    let mut y = vec![czero(); a.nrows()];
    for j in 0..a.ncols() {
        let xj = x[j];
        if xj == czero() {
            continue;
        }
        for i in 0..a.nrows() {
            y[i] += a[(i, j)] * xj;
        }
    }
    y
}

/// `x ↦ aᴴ x`.
pub fn matvec_adj(a: &CMat, x: &[Complex64]) -> Vec<Complex64> {
    let mut y = vec![czero(); a.ncols()];
    for j in 0..a.ncols() {
        let mut acc = czero();
        for i in 0..a.nrows() {
            acc += a[(i, j)].conj() * x[i];
        }
        y[j] = acc;
    }
    y
}

pub fn dotc(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_inf(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn normalize(v: &mut [Complex64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    }
}

/// LU factorization plus the diagonal growth estimate used to flag singular
/// shifts.
pub struct Lu {
    lu: PartialPivLu<Complex64>,
    pub min_pivot_ratio: f64,
}

impl Lu {
    pub fn new(a: &CMat) -> Self {
        let lu = a.partial_piv_lu();
        let u = lu.U();
        let n = u.nrows();
        let mut mx: f64 = 0.0;
        let mut mn = f64::INFINITY;
        for i in 0..n {
            let v = u[(i, i)].norm();
            mx = mx.max(v);
            mn = mn.min(v);
        }
        let ratio = if mx > 0.0 { mn / mx } else { 0.0 };
        Self { lu, min_pivot_ratio: ratio }
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let mut m = CMat::from_fn(b.len(), 1, |i, _| b[i]);
        self.lu.solve_in_place(m.as_mut());
        (0..b.len()).map(|i| m[(i, 0)]).collect()
    }

    pub fn solve_adj(&self, b: &[Complex64]) -> Vec<Complex64> {
        let mut m = CMat::from_fn(b.len(), 1, |i, _| b[i]);
        self.lu.solve_adjoint_in_place(m.as_mut());
        (0..b.len()).map(|i| m[(i, 0)]).collect()
    }

    pub fn solve_mat(&self, b: &CMat) -> CMat {
        let mut m = b.clone();
        self.lu.solve_in_place(m.as_mut());
        m
    }
}
