//! Modified Bessel function `K_ν(w)` for complex `w` with `Re w > 0`.
//!
//! Small arguments use the ascending series (through `I_{±ν}` for
//! non-integer order, the logarithmic form for integer order). Larger
//! arguments use Steed's continued fraction for `K_μ`, `|μ| ≤ 1/2`, followed
//! by upward recurrence in the order.

use num_complex::Complex64;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

use super::BesselError;

/// Below this modulus the ascending series is used.
pub const SERIES_RADIUS: f64 = 2.0;
/// Largest tolerated ratio between the biggest series term and the result.
pub const MAX_CANCELLATION: f64 = 1e8;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `I_ν(w)` by its power series, together with the largest term modulus.
fn bessel_i_series(nu: f64, w: Complex64) -> (Complex64, f64) {
    let half = w * 0.5;
    let q = half * half;
    let lead = if nu == 0.0 { c(1.0) } else { half.powf(nu) };
    // 1/Γ(ν+1) with reflection for the negative orders we need
    let mut term = lead * inv_gamma(nu + 1.0);
    let mut sum = term;
    let mut biggest = term.norm();
    for k in 1..400 {
        let kf = k as f64;
        term = term * q / (kf * (kf + nu));
        sum += term;
        biggest = biggest.max(term.norm());
        if term.norm() < 1e-17 * sum.norm() && k > 2 {
            break;
        }
    }
    (sum, biggest)
}

fn inv_gamma(x: f64) -> f64 {
    if x <= 0.0 && x.fract() == 0.0 {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

fn digamma_int(n: usize) -> f64 {
    // ψ(n) for positive integer n
    -EULER_GAMMA + (1..n).map(|k| 1.0 / k as f64).sum::<f64>()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn k_integer_series(n: usize, w: Complex64) -> (Complex64, f64) {
    let half = w * 0.5;
    let q = half * half;
    let mut biggest: f64 = 0.0;
    let mut finite = c(0.0);
    if n > 0 {
        let pre = half.powi(-(n as i32)) * 0.5;
        let mut qk = c(1.0);
        for k in 0..n {
            let t = pre * qk * (factorial(n - k - 1) / factorial(k)) * if k % 2 == 0 { 1.0 } else { -1.0 };
            biggest = biggest.max(t.norm());
            finite += t;
            qk *= q;
        }
    }
    let (i_n, bi) = bessel_i_series(n as f64, w);
    let log_term = half.ln() * i_n * if n % 2 == 0 { -1.0 } else { 1.0 };
    biggest = biggest.max(bi * half.ln().norm());
    let pre = half.powi(n as i32) * 0.5 * if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut tail = c(0.0);
    let mut qk = c(1.0);
    for k in 0..400 {
        let t = pre * qk * ((digamma_int(k + 1) + digamma_int(n + k + 1)) / (factorial(k) * factorial(n + k)));
        tail += t;
        biggest = biggest.max(t.norm());
        if t.norm() < 1e-17 * tail.norm() && k > 2 {
            break;
        }
        qk *= q;
    }
    (finite + log_term + tail, biggest)
}

/// Ascending series; reports the cancellation ratio as an error when it is
/// excessive.
pub fn bessel_k_series(nu: f64, w: Complex64) -> Result<Complex64, BesselError> {
    let nu = nu.abs();
    let (val, biggest) = if (nu - nu.round()).abs() < 1e-14 {
        k_integer_series(nu.round() as usize, w)
    } else {
        let (ip, bp) = bessel_i_series(nu, w);
        let (im, bm) = bessel_i_series(-nu, w);
        let pre = PI / (2.0 * (nu * PI).sin());
        ((im - ip) * pre, pre.abs() * bp.max(bm))
    };
    let ratio = biggest / val.norm();
    if !ratio.is_finite() || ratio > MAX_CANCELLATION {
        return Err(BesselError::EvaluationLoss { cancellation: ratio });
    }
    Ok(val)
}

/// Steed's continued fraction: returns `(K_μ(w), K_{μ+1}(w))` for `|μ| ≤ 1/2`.
fn steed_cf2(mu: f64, w: Complex64) -> Result<(Complex64, Complex64), BesselError> {
    let a1 = 0.25 - mu * mu;
    let mut b = (w + 1.0) * 2.0;
    let mut d = c(1.0) / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = c(0.0);
    let mut q2 = c(1.0);
    let mut q = c(a1);
    let mut cc = c(a1);
    let mut a = -a1;
    let mut s = q * delh + 1.0;
    let mut converged = false;
    for i in 1..20_000 {
        let fi = i as f64;
        a -= 2.0 * fi;
        cc = -cc * a / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += cc * qnew;
        b += 2.0;
        d = c(1.0) / (b + d * a);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if dels.norm() < 1e-16 * s.norm() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(BesselError::EvaluationLoss { cancellation: f64::INFINITY });
    }
    h *= a1;
    let kmu = (c(PI) / (w * 2.0)).sqrt() * (-w).exp() / s;
    let k1 = kmu * (w + mu + 0.5 - h) / w;
    Ok((kmu, k1))
}

/// `K_ν(w)` for real `ν` and `Re w > 0`.
pub fn bessel_k(nu: f64, w: Complex64) -> Result<Complex64, BesselError> {
    if !(w.re > 0.0) || !w.norm().is_finite() {
        return Err(BesselError::Domain(format!("K_ν needs Re w > 0, got {w}")));
    }
    let nu = nu.abs();
    if w.norm() < SERIES_RADIUS {
        return bessel_k_series(nu, w);
    }
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (mut km, mut kp) = steed_cf2(mu, w)?;
    for k in 1..=(nl as usize) {
        let next = kp * (2.0 * (mu + k as f64) / w) + km;
        km = kp;
        kp = next;
    }
    Ok(km)
}

/// Leading coefficients of `x^{1/2} K_ν(kx) = a₋ x^{1/2−ν}(1+…) + a₊ x^{1/2+ν}(1+…)`
/// for `0 < ν < 1`.
pub fn model_coefficients(nu: f64, k: Complex64) -> (Complex64, Complex64) {
    let half = k * 0.5;
    let a_minus = half.powf(-nu) * (gamma(nu) / 2.0);
    let a_plus = half.powf(nu) * (-PI / (2.0 * (nu * PI).sin() * gamma(1.0 + nu)));
    (a_minus, a_plus)
}
