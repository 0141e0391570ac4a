//! Tensor Chebyshev grid in `(s, c) = (1/r, cos θ)`.

use faer::Mat;
use serde::{Deserialize, Serialize};

use super::chebyshev;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_r: usize,
    pub n_theta: usize,
}

impl GridSpec {
    pub fn new(n_r: usize, n_theta: usize) -> Self {
        Self { n_r, n_theta }
    }

    pub fn label(&self) -> String {
        format!("{}x{}", self.n_r, self.n_theta)
    }
}

/// Equatorial parity of the angular factor under `c ↦ −c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(&self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RadialGrid {
    /// Nodes in `s`, ascending from the conformal boundary `s = 0`.
    pub s: Vec<f64>,
    pub s_inner: f64,
    pub d1: Mat<f64>,
    pub d2: Mat<f64>,
}

impl RadialGrid {
    pub fn new(n: usize, s_inner: f64) -> Self {
        let x = chebyshev::nodes(n);
        let s: Vec<f64> = x.iter().map(|&xi| 0.5 * s_inner * (1.0 - xi)).collect();
        let dx = chebyshev::diff_matrix(n);
        let scale = -2.0 / s_inner;
        let d1 = Mat::from_fn(n, n, |i, j| scale * dx[(i, j)]);
        let d2 = &d1 * &d1;
        let mut s = s;
        s[0] = 0.0;
        s[n - 1] = s_inner;
        Self { s, s_inner, d1, d2 }
    }

    pub fn r_inner(&self) -> f64 {
        1.0 / self.s_inner
    }
}

/// Angular collocation, optionally restricted to one parity sector. In a
/// sector the unknowns are the values at nodes with `c ≥ 0`; mirrored
/// columns are folded in with the parity sign.
#[derive(Debug, Clone)]
pub struct AngularGrid {
    pub c: Vec<f64>,
    pub d1: Mat<f64>,
    pub d2: Mat<f64>,
    pub parity: Option<Parity>,
    pub n_full: usize,
}

impl AngularGrid {
    pub fn full(n: usize) -> Self {
        let c = chebyshev::nodes(n);
        let d1 = chebyshev::diff_matrix(n);
        let d2 = &d1 * &d1;
        Self { c, d1, d2, parity: None, n_full: n }
    }

    pub fn sector(n: usize, parity: Parity) -> Self {
        let full = Self::full(n);
        let half = match parity {
            Parity::Even => n.div_ceil(2),
            Parity::Odd => n / 2,
        };
        let sign = parity.sign();
        let fold = |m: &Mat<f64>| {
            Mat::from_fn(half, half, |i, j| {
                let mirror = n - 1 - j;
                if mirror == j {
                    m[(i, j)]
                } else {
                    m[(i, j)] + sign * m[(i, mirror)]
                }
            })
        };
        Self { c: full.c[..half].to_vec(), d1: fold(&full.d1), d2: fold(&full.d2), parity: Some(parity), n_full: n }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }
}
