//! Adaptive Dormand-Prince integration of the rescaled Hamilton flow with
//! terminal events.

use serde::{Deserialize, Serialize};

use super::{field_state, rho1_state, PhaseError, PhasePoint};
use crate::geometry::{delta_r, BlackHoleParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Terminal {
    ConvergedToLplus,
    ConvergedToLminus,
    ExitedDeltaRegion,
    MaxTime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowOutcome {
    pub terminal: Terminal,
    pub time: f64,
    pub trajectory: Vec<PhasePoint>,
    /// Flow time of each trajectory point.
    pub times: Vec<f64>,
}

impl FlowOutcome {
    pub fn end(&self) -> &PhasePoint {
        self.trajectory.last().expect("trajectory holds at least the start point")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowOptions {
    pub t_max: f64,
    pub eps_sink: f64,
    pub delta: f64,
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
    /// Fibre coordinates beyond this size leave the projective chart.
    pub xi_max: f64,
    /// Keep every n-th accepted step in the trajectory.
    pub keep_every: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self { t_max: 1e3, eps_sink: 1e-8, delta: 0.1, rtol: 1e-10, atol: 1e-12, h_min: 1e-14, xi_max: 1e6, keep_every: 1 }
    }
}

type State = [f64; 6];

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..6 {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// One Dormand-Prince step; returns the fifth-order solution and the
/// embedded error estimate.
fn dp_step<F: Fn(&State) -> State>(f: &F, y: &State, h: f64) -> (State, State) {
    let k1 = f(y);
    let k2 = f(&axpy(y, &[(A21, &k1)], h));
    let k3 = f(&axpy(y, &[(A31, &k1), (A32, &k2)], h));
    let k4 = f(&axpy(y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
    let k5 = f(&axpy(y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h));
    let k6 = f(&axpy(y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h));
    let y5 = axpy(y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], h);
    let k7 = f(&y5);
    let mut err = [0.0; 6];
    for i in 0..6 {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    (y5, err)
}

#[derive(Clone, Copy, PartialEq)]
enum Event {
    Sink,
    Exit,
}

fn event_values(p: &BlackHoleParams, y: &State, sigma: i8, opts: &FlowOptions) -> [f64; 2] {
    [rho1_state(p, y, sigma) - opts.eps_sink, delta_r(p, y[0]) + opts.delta]
}

fn terminal_for(ev: Event, sigma: i8) -> Terminal {
    match ev {
        Event::Exit => Terminal::ExitedDeltaRegion,
        Event::Sink if sigma > 0 => Terminal::ConvergedToLplus,
        Event::Sink => Terminal::ConvergedToLminus,
    }
}

fn check_chart(y: &State, xi_max: f64, t: f64) -> Result<(), PhaseError> {
    if !y.iter().all(|v| v.is_finite()) {
        return Err(PhaseError::ChartExit { time: t, reason: "non-finite state".into() });
    }
    if y[4].abs() > xi_max || y[5].abs() > xi_max {
        return Err(PhaseError::ChartExit { time: t, reason: format!("|ξ̂| exceeded {xi_max:e}") });
    }
    if y[5] != 0.0 && y[1].sin().abs() < 1e-12 {
        return Err(PhaseError::ChartExit { time: t, reason: "reached the axis with ξ̂_φ ≠ 0".into() });
    }
    if y[0] <= 0.0 {
        return Err(PhaseError::ChartExit { time: t, reason: "r ≤ 0".into() });
    }
    Ok(())
}

/// Integrates from `start` until a terminal event or `t_max`.
pub fn integrate_flow(
    p: &BlackHoleParams,
    start: &PhasePoint,
    direction: Direction,
    opts: &FlowOptions,
) -> Result<FlowOutcome, PhaseError> {
    let sigma = start.sigma;
    let dir = direction.sign();
    let f = |y: &State| {
        let mut v = field_state(p, y, sigma);
        v.iter_mut().for_each(|x| *x *= dir);
        v
    };
    let mut y = start.to_state();
    let mut t = 0.0;
    let mut traj = vec![*start];
    let mut times = vec![0.0];
    let g0 = event_values(p, &y, sigma, opts);
    if g0[1] <= 0.0 {
        return Ok(FlowOutcome { terminal: Terminal::ExitedDeltaRegion, time: 0.0, trajectory: traj, times });
    }
    if g0[0] <= 0.0 {
        return Ok(FlowOutcome { terminal: terminal_for(Event::Sink, sigma), time: 0.0, trajectory: traj, times });
    }
    let mut h: f64 = 1e-3;
    let mut accepted = 0usize;
    while t < opts.t_max {
        h = h.min(opts.t_max - t);
        let (yn, err) = dp_step(&f, &y, h);
        let mut e: f64 = 0.0;
        for i in 0..6 {
            let sc = opts.atol + opts.rtol * y[i].abs().max(yn[i].abs());
            e = e.max((err[i] / sc).abs());
        }
        if !e.is_finite() || e > 1.0 {
            h *= if e.is_finite() { (0.9 * e.powf(-0.2)).max(0.2) } else { 0.25 };
            if h < opts.h_min {
                return Err(PhaseError::StepFailure { time: t });
            }
            continue;
        }
        let g1 = event_values(p, &yn, sigma, opts);
        let hit = if g1[1] <= 0.0 {
            Some(Event::Exit)
        } else if g1[0] <= 0.0 {
            Some(Event::Sink)
        } else {
            None
        };
        if let Some(ev) = hit {
            let idx = if ev == Event::Exit { 1 } else { 0 };
            // bisect the step length for the first crossing
            let (mut lo, mut hi) = (0.0, h);
            let mut y_hi = yn;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let (ym, _) = dp_step(&f, &y, mid);
                if event_values(p, &ym, sigma, opts)[idx] <= 0.0 {
                    hi = mid;
                    y_hi = ym;
                } else {
                    lo = mid;
                }
                if hi - lo < 1e-14 * (1.0 + t) {
                    break;
                }
            }
            // the other event may have fired earlier inside the step
            let other = 1 - idx;
            let ev = if event_values(p, &y_hi, sigma, opts)[other] <= 0.0 && other == 1 { Event::Exit } else { ev };
            t += hi;
            check_chart(&y_hi, opts.xi_max, t)?;
            traj.push(PhasePoint::from_state(&y_hi, sigma));
            times.push(t);
            return Ok(FlowOutcome { terminal: terminal_for(ev, sigma), time: t, trajectory: traj, times });
        }
        y = yn;
        t += h;
        check_chart(&y, opts.xi_max, t)?;
        accepted += 1;
        if accepted % opts.keep_every.max(1) == 0 {
            traj.push(PhasePoint::from_state(&y, sigma));
            times.push(t);
        }
        let fac = if e > 0.0 { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) } else { 5.0 };
        h *= fac;
    }
    if traj.last().map(|q| q.to_state()) != Some(y) {
        traj.push(PhasePoint::from_state(&y, sigma));
        times.push(t);
    }
    Ok(FlowOutcome { terminal: Terminal::MaxTime, time: t, trajectory: traj, times })
}
