//! Collocation of the stationary operator as a quadratic pencil.
//!
//! With `s = 1/r`, `c = cos θ` and `u = s^β (1−c²)^{|m|/2} v(s, c)`, the
//! operator `P(λ)` acting on `u` becomes `s^{β−1} R(λ) v`, where `R` has
//! coefficients that are polynomial or rational in `s` and smooth up to
//! `s = 0`. Rows of `R` are collocated on the tensor grid; the row at
//! `s = 0` is either the limit of `R` itself or an explicit boundary row.

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{AngularGrid, GridSpec, Parity, RadialGrid};
use super::QnfError;
use crate::bessel_bc::{boundary_rows, BoundaryClosure, BoundaryCondition};
use crate::geometry::{classify_region, find_horizons, inner_radius, BlackHoleParams, ExtensionVariant, RegionClass};
use crate::linalg::CMat;

/// Smallest grid accepted by the assembler.
pub const MIN_NODES_R: usize = 8;
pub const MIN_NODES_THETA: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    pub m: i32,
    pub bc: Option<BoundaryCondition>,
    /// Sobolev index selecting the half-plane `Im λ > −κ(1/2 + k)`.
    pub k_threshold: f64,
}

impl ModeSpec {
    pub fn new(m: i32, bc: Option<BoundaryCondition>) -> Self {
        Self { m, bc, k_threshold: 1.0 }
    }

    pub fn validate(&self, nu: f64) -> Result<(), QnfError> {
        if nu >= 1.0 && self.bc.is_some() {
            return Err(QnfError::InvalidMode(format!("ν = {nu} ≥ 1 takes no boundary condition")));
        }
        if nu < 1.0 && self.bc.is_none() {
            return Err(QnfError::InvalidMode(format!("0 < ν = {nu} < 1 requires a boundary condition")));
        }
        if !(self.k_threshold >= 0.0) {
            return Err(QnfError::InvalidMode(format!("k = {} must be ≥ 0", self.k_threshold)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PencilMeta {
    pub params: BlackHoleParams,
    pub mode: ModeSpec,
    pub grid: GridSpec,
    pub delta: f64,
    pub fplus_id: String,
    pub variant: ExtensionVariant,
    pub parity: Option<Parity>,
    pub exponent: f64,
    pub r_inner: f64,
    pub kappa: f64,
}

/// `P(λ) = A0 + λA1 + λ²A2` acting on nodal values of `v`, ordered radial
/// index major.
#[derive(Debug, Clone)]
pub struct QnfPencil {
    pub a0: CMat,
    pub a1: CMat,
    pub a2: CMat,
    pub boundary_rows: Vec<usize>,
    pub meta: PencilMeta,
    pub s_nodes: Vec<f64>,
    pub c_nodes: Vec<f64>,
}

impl QnfPencil {
    pub fn dim(&self) -> usize {
        self.a0.nrows()
    }

    pub fn eval(&self, lambda: Complex64) -> CMat {
        let l2 = lambda * lambda;
        Mat::from_fn(self.dim(), self.dim(), |i, j| self.a0[(i, j)] + lambda * self.a1[(i, j)] + l2 * self.a2[(i, j)])
    }

    /// `∂_λ P(λ) = A1 + 2λA2`.
    pub fn eval_derivative(&self, lambda: Complex64) -> CMat {
        let two_l = lambda * 2.0;
        Mat::from_fn(self.dim(), self.dim(), |i, j| self.a1[(i, j)] + two_l * self.a2[(i, j)])
    }
}

/// Coefficients of `R` at one node, indexed by the power of `λ`.
#[derive(Debug, Clone, Copy)]
struct NodeCoeffs {
    vss: Complex64,
    vs: [Complex64; 2],
    vcc: f64,
    vc: f64,
    v: [Complex64; 3],
}

struct Ctx {
    a: f64,
    mass: f64,
    nu: f64,
    alpha: f64,
    m: f64,
    k: f64,
    beta: f64,
    cf: f64,
}

impl Ctx {
    fn angular(&self, c: f64) -> (f64, f64, f64) {
        let al = self.alpha;
        let d = 1.0 - al * c * c;
        let dp = -2.0 * al * c;
        let w = 1.0 - c * c;
        let x = c * c;
        let q = al * al * x * x + (al * al - 2.0 * al) * x + (1.0 - al) * (1.0 - al);
        let ang2 = -d * w;
        let ang1 = -(dp * w - 2.0 * c * (1.0 + 2.0 * self.k) * d);
        let ang0 = 2.0 * self.k * c * dp + 2.0 * self.k * d + self.m * self.m * q / d;
        (ang2, ang1, ang0)
    }

    fn node(&self, s: f64, c: f64) -> NodeCoeffs {
        let i = Complex64::new(0.0, 1.0);
        let (a, mass, al, m, beta, cf) = (self.a, self.mass, self.alpha, self.m, self.beta, self.cf);
        let oa = 1.0 - al;
        let a2 = a * a;
        let s2 = s * s;
        let s3 = s2 * s;
        let e = 1.0 + (1.0 + a2) * s2 - 2.0 * mass * s3 + a2 * s2 * s2;
        let ep = 2.0 * (1.0 + a2) * s - 6.0 * mass * s2 + 4.0 * a2 * s3;
        let one_s2 = 1.0 + s2;
        let h = oa * ((1.0 - cf) * (1.0 + a2 * s2) + 2.0 * cf * mass * s3 / one_s2);
        let hp = oa * (2.0 * (1.0 - cf) * a2 * s + 2.0 * cf * mass * (3.0 * s2 + s2 * s2) / (one_s2 * one_s2));
        let d = 1.0 - al * c * c;
        let w = 1.0 - c * c;
        let g_tt = cf * cf * oa * oa * e / (one_s2 * one_s2) - 2.0 * cf * oa * oa * (1.0 + a2 * s2) / one_s2
            + oa * oa * a2 * w / d;
        let g_tphi = -cf * oa * oa * a * s2 / one_s2 + oa * oa * a / d;
        let mass_term = self.nu * self.nu - 2.25;
        let q0_over_s = -beta * (beta + 1.0) * ((1.0 + a2) * s - 2.0 * mass * s2 + a2 * s3)
            + beta * (2.0 * (1.0 + a2) * s - 2.0 * mass * s2)
            + a2 * c * c * s * mass_term;
        let (ang2, ang1, ang0) = self.angular(c);
        let rot = i * (2.0 * m * oa * a);
        NodeCoeffs {
            vss: Complex64::new(-e * s, 0.0),
            vs: [Complex64::new((2.0 - 2.0 * beta) * e - ep * s, 0.0) + rot * s3, -i * (2.0 * h * s)],
            vcc: s * ang2,
            vc: s * ang1,
            v: [
                Complex64::new(q0_over_s + s * ang0, 0.0) + rot * (beta * s2),
                i * ((2.0 - 2.0 * beta) * h - hp * s) - 2.0 * m * s * g_tphi,
                Complex64::new(s * g_tt, 0.0),
            ],
        }
    }
}

struct Layout {
    params: BlackHoleParams,
    mode: ModeSpec,
    grid: GridSpec,
    delta: f64,
    variant: ExtensionVariant,
    parity: Option<Parity>,
    radial: RadialGrid,
    angular: AngularGrid,
    closure: BoundaryClosure,
    kappa: f64,
    ctx: Ctx,
}

fn layout(
    params: &BlackHoleParams,
    mode: &ModeSpec,
    grid: &GridSpec,
    delta: f64,
    variant: &ExtensionVariant,
    parity: Option<Parity>,
) -> Result<Layout, QnfError> {
    params.validate()?;
    match classify_region(params)? {
        RegionClass::Admissible | RegionClass::AdmissibleHawkingReall => {}
        other => return Err(QnfError::InvalidRegion(other)),
    }
    mode.validate(params.nu)?;
    if grid.n_r < MIN_NODES_R || grid.n_theta < MIN_NODES_THETA {
        return Err(QnfError::GridTooCoarse(format!(
            "grid {} is below the minimum {}x{}",
            grid.label(),
            MIN_NODES_R,
            MIN_NODES_THETA
        )));
    }
    let h = find_horizons(params)?;
    let r_in = inner_radius(params, &h, delta)?;
    let radial = RadialGrid::new(grid.n_r, 1.0 / r_in);
    let angular = match parity {
        Some(p) => AngularGrid::sector(grid.n_theta, p),
        None => AngularGrid::full(grid.n_theta),
    };
    let d1_row0: Vec<f64> = (0..grid.n_r).map(|j| radial.d1[(0, j)]).collect();
    let closure = boundary_rows(params.nu, mode.bc.as_ref(), &d1_row0)?;
    let ctx = Ctx {
        a: params.a,
        mass: params.mass,
        nu: params.nu,
        alpha: params.alpha(),
        m: mode.m as f64,
        k: (mode.m.unsigned_abs() as f64) / 2.0,
        beta: closure.exponent(),
        cf: variant.scale,
    };
    Ok(Layout {
        params: *params,
        mode: *mode,
        grid: *grid,
        delta,
        variant: *variant,
        parity,
        radial,
        angular,
        closure,
        kappa: h.kappa,
        ctx,
    })
}

/// Visits every nonzero entry as `(row, col, [λ⁰, λ¹, λ²] coefficients)`.
fn fill<F: FnMut(usize, usize, [Complex64; 3])>(lay: &Layout, mut put: F) -> Vec<usize> {
    let nr = lay.radial.s.len();
    let nc = lay.angular.len();
    let z = Complex64::new(0.0, 0.0);
    let mut brows = Vec::new();
    for i in 0..nr {
        for j in 0..nc {
            let row = i * nc + j;
            if i == 0 {
                if let BoundaryClosure::Rows { lambda0, lambda1, .. } = &lay.closure {
                    brows.push(row);
                    for i2 in 0..nr {
                        let l1 = lambda1.as_ref().map(|v| v[i2]).unwrap_or(z);
                        if lambda0[i2] != z || l1 != z {
                            put(row, i2 * nc + j, [lambda0[i2], l1, z]);
                        }
                    }
                    continue;
                }
                brows.push(row);
            }
            let nc_ = lay.ctx.node(lay.radial.s[i], lay.angular.c[j]);
            for i2 in 0..nr {
                let d1 = lay.radial.d1[(i, i2)];
                let d2 = lay.radial.d2[(i, i2)];
                put(row, i2 * nc + j, [nc_.vs[0] * d1 + nc_.vss * d2, nc_.vs[1] * d1, z]);
            }
            for j2 in 0..nc {
                let val = nc_.vc * lay.angular.d1[(j, j2)] + nc_.vcc * lay.angular.d2[(j, j2)];
                if val != 0.0 {
                    put(row, i * nc + j2, [Complex64::new(val, 0.0), z, z]);
                }
            }
            put(row, row, nc_.v);
        }
    }
    brows
}

fn meta(lay: &Layout) -> PencilMeta {
    PencilMeta {
        params: lay.params,
        mode: lay.mode,
        grid: lay.grid,
        delta: lay.delta,
        fplus_id: lay.variant.id(),
        variant: lay.variant,
        parity: lay.parity,
        exponent: lay.closure.exponent(),
        r_inner: lay.radial.r_inner(),
        kappa: lay.kappa,
    }
}

/// Assembles the pencil, optionally restricted to one equatorial parity
/// sector (the operator commutes with `θ ↦ π − θ`).
pub fn assemble_pencil(
    params: &BlackHoleParams,
    mode: &ModeSpec,
    grid: &GridSpec,
    delta: f64,
    variant: &ExtensionVariant,
    parity: Option<Parity>,
) -> Result<QnfPencil, QnfError> {
    let lay = layout(params, mode, grid, delta, variant, parity)?;
    let n = lay.radial.s.len() * lay.angular.len();
    let mut a = [CMat::zeros(n, n), CMat::zeros(n, n), CMat::zeros(n, n)];
    let brows = fill(&lay, |r, c, v| {
        for k in 0..3 {
            a[k][(r, c)] += v[k];
        }
    });
    let [a0, a1, a2] = a;
    Ok(QnfPencil {
        a0,
        a1,
        a2,
        boundary_rows: brows,
        meta: meta(&lay),
        s_nodes: lay.radial.s.clone(),
        c_nodes: lay.angular.c.clone(),
    })
}

/// Assembles `P(λ₀)` in one pass without forming the three coefficient
/// matrices.
pub fn assemble_at(
    params: &BlackHoleParams,
    mode: &ModeSpec,
    grid: &GridSpec,
    delta: f64,
    variant: &ExtensionVariant,
    parity: Option<Parity>,
    lambda: Complex64,
) -> Result<CMat, QnfError> {
    let lay = layout(params, mode, grid, delta, variant, parity)?;
    let n = lay.radial.s.len() * lay.angular.len();
    let mut p = CMat::zeros(n, n);
    let l2 = lambda * lambda;
    fill(&lay, |r, c, v| p[(r, c)] += v[0] + lambda * v[1] + l2 * v[2]);
    Ok(p)
}
