//! Adaptive Dormand–Prince 5(4) integrator over fixed-size states.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

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
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// One Dormand–Prince step; returns the fifth-order solution and the
/// embedded error estimate.
pub fn dopri_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], h: f64) -> ([f64; N], [f64; N])
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let k1 = f(t, y);
    let k2 = f(t + C2 * h, &axpy(y, h, &[(A21, &k1)]));
    let k3 = f(t + C3 * h, &axpy(y, h, &[(A31, &k1), (A32, &k2)]));
    let k4 = f(t + C4 * h, &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
    let k5 = f(t + C5 * h, &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
    let k6 = f(t + h, &axpy(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
    let y5 = axpy(y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = f(t + h, &y5);
    let mut err = [0.0; N];
    for i in 0..N {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    (y5, err)
}

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    /// Mixed tolerance: component `i` may err by `tol·(1 + |y_i|)`.
    pub tol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl OdeOptions {
    pub fn new(tol: f64) -> Self {
        OdeOptions { tol, h_init: 1e-3, h_max: f64::INFINITY, max_steps: 10_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

fn error_norm<const N: usize>(y0: &[f64; N], y1: &[f64; N], err: &[f64; N], tol: f64) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..N {
        let sc = tol * (1.0 + y0[i].abs().max(y1[i].abs()));
        m = m.max(err[i].abs() / sc);
    }
    m
}

/// Integrates from `t0` to `t_end` (`t_end > t0`). `on_step` sees every
/// accepted step as `(t_prev, y_prev, t, y)` and may stop the run. Returns the
/// last accepted `(t, y)`.
pub fn solve<const N: usize, F, C>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &OdeOptions,
    mut on_step: C,
) -> Result<(f64, [f64; N])>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    C: FnMut(f64, &[f64; N], f64, &[f64; N]) -> Control,
{
    let mut t = t0;
    let mut y = y0;
    let mut h = opts.h_init.min(t_end - t0).min(opts.h_max);
    let h_min = 1e-14 * (t_end.abs().max(t0.abs()).max(1.0));
    let mut steps = 0usize;
    while t < t_end {
        if steps >= opts.max_steps {
            return Err(Error::StepFailure { t });
        }
        steps += 1;
        let last = t + h >= t_end;
        let hh = if last { t_end - t } else { h };
        let (yn, err) = dopri_step(&f, t, &y, hh);
        let en = error_norm(&y, &yn, &err, opts.tol);
        if en.is_finite() && en <= 1.0 {
            let tn = if last { t_end } else { t + hh };
            let ctl = on_step(t, &y, tn, &yn);
            t = tn;
            y = yn;
            if ctl == Control::Stop {
                break;
            }
            let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
            h = (hh * fac).min(opts.h_max);
        } else {
            let fac = if en.is_finite() { (0.9 * en.powf(-0.25)).clamp(0.1, 0.9) } else { 0.1 };
            h = hh * fac;
            if h < h_min {
                return Err(Error::StepFailure { t });
            }
        }
    }
    Ok((t, y))
}

/// Finds the first zero of `g` inside an accepted step `(t, y) → t + h` by
/// bisection on the size of a single step from `(t, y)`. Assumes `g` changes
/// sign over the step.
pub fn locate_event<const N: usize, F, G>(f: &F, t: f64, y: &[f64; N], h: f64, g: G) -> (f64, [f64; N])
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    G: Fn(&[f64; N]) -> f64,
{
    let g0 = g(y);
    let (mut lo, mut hi) = (0.0, h);
    let mut y_hi = dopri_step(f, t, y, h).0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let ym = dopri_step(f, t, y, mid).0;
        if (g(&ym) > 0.0) == (g0 > 0.0) && g(&ym) != 0.0 {
            lo = mid;
        } else {
            hi = mid;
            y_hi = ym;
        }
    }
    (t + hi, y_hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_period() {
        let f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let (t, y) = solve(f, 0.0, [1.0, 0.0], std::f64::consts::TAU, &OdeOptions::new(1e-12), |_, _, _, _| {
            Control::Continue
        })
        .unwrap();
        assert_eq!(t, std::f64::consts::TAU);
        assert!((y[0] - 1.0).abs() < 1e-10 && y[1].abs() < 1e-10);
    }

    #[test]
    fn fifth_order_convergence() {
        let f = |_t: f64, y: &[f64; 1]| [y[0]];
        let run = |h: f64| {
            let mut y = [1.0];
            let n = (1.0 / h).round() as usize;
            for i in 0..n {
                y = dopri_step(&f, i as f64 * h, &y, h).0;
            }
            (y[0] - 1f64.exp()).abs()
        };
        let ratio = run(0.1) / run(0.05);
        assert!(ratio > 25.0 && ratio < 40.0, "{ratio}");
    }

    #[test]
    fn event_on_sine_zero() {
        let f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let (te, _) = locate_event(&f, 3.0, &[3f64.sin(), 3f64.cos()], 0.3, |y| y[0]);
        assert!((te - std::f64::consts::PI).abs() < 1e-6);
    }
}
