//! Point spectra of the quantized Hyp0 and HypPlus Hamiltonians.
//!
//! The closed-form levels are checked against a shooting solver for the
//! radial equation in Liouville form `R'' = w(x, E) R`. Shooting follows the
//! Prüfer angle `θ` (`R = A sin θ`, `R' = A cos θ`), which counts nodes and
//! never overflows. Boundary condition at the origin: `R ~ x^{|m|+½}`, the
//! Friedrichs branch for every `m`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::models::{Family, Model};
use crate::ode::{self, Control, OdeOptions};
use crate::quad;
use crate::specfun::{jacobi, laguerre};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level {
    pub n: usize,
    pub m: i64,
    pub j_tilde: f64,
    pub e: f64,
}

fn require_quantum(model: &Model) -> Result<()> {
    if !matches!(model.family(), Family::Hyp0 | Family::HypPlus) {
        return Err(Error::Domain(format!("no quantum spectrum for {}", model.family())));
    }
    if !(model.xi() > 0.0) {
        return Err(Error::Domain(format!("spectrum needs ξ > 0, got {}", model.xi())));
    }
    Ok(())
}

/// `ξ̃ = ξ + ¼`, the shifted coupling of HypPlus.
pub fn xi_tilde(model: &Model) -> f64 {
    model.xi() + 0.25
}

/// Essential-spectrum edge `ξ̃/2ρ` of HypPlus; the Hyp0 levels accumulate at `ξ/2ρ`.
pub fn spectrum_edge(model: &Model) -> f64 {
    match model.family() {
        Family::HypPlus => xi_tilde(model) / (2.0 * model.rho()),
        _ => model.xi() / (2.0 * model.rho()),
    }
}

/// Energy of the level with `J̃ = 2n + |m| + 1`, or `None` past the HypPlus bound.
pub fn level_energy(model: &Model, j: f64) -> Option<f64> {
    let (rho, xi) = (model.rho(), model.xi());
    match model.family() {
        Family::Hyp0 => Some(j * xi / ((xi + rho * rho * j * j).sqrt() + rho * j)),
        Family::HypPlus => {
            let xt = xi + 0.25;
            if !(j < (xt / rho).sqrt()) {
                return None;
            }
            let s = (xt + rho * (rho - 1.0) * j * j).sqrt();
            let k = (rho - 0.5) * j;
            Some(if k > 0.0 { j * (xt - 0.25 * j * j) / (s + k) } else { j * (s - k) })
        }
        _ => None,
    }
}

/// All levels with `n ≤ n_max`, `|m| ≤ m_max`, sorted by energy.
pub fn spectrum(model: &Model, n_max: usize, m_max: usize) -> Result<Vec<Level>> {
    require_quantum(model)?;
    let mut out = Vec::new();
    for n in 0..=n_max {
        for m in -(m_max as i64)..=(m_max as i64) {
            let j = (2 * n) as f64 + m.unsigned_abs() as f64 + 1.0;
            if let Some(e) = level_energy(model, j) {
                out.push(Level { n, m, j_tilde: j, e });
            }
        }
    }
    out.sort_by(|a, b| a.e.total_cmp(&b.e).then(a.n.cmp(&b.n)).then(a.m.cmp(&b.m)));
    Ok(out)
}

/// Radial factor of the eigenfunction, unnormalized as printed.
pub fn radial_eigenfunction(model: &Model, level: &Level, q1: f64) -> Result<f64> {
    require_quantum(model)?;
    model.check_chart(q1)?;
    let am = level.m.unsigned_abs() as f64;
    let rho = model.rho();
    match model.family() {
        Family::Hyp0 => {
            let zeta = (model.xi() - 2.0 * rho * level.e).sqrt() * q1 * q1;
            Ok((-0.5 * zeta).exp() * zeta.powf(0.5 * am) * laguerre(level.n, am, zeta)?)
        }
        _ => {
            let delta = xi_tilde(model) - 2.0 * rho * level.e;
            let t = q1.tanh();
            // cosh^{−p} = (2/(e^χ + e^{−χ}))^p without overflow
            let p = 0.5 + delta.sqrt();
            let inv_cosh = 2.0 * (-q1).exp() / (1.0 + (-2.0 * q1).exp());
            Ok(t.powf(am) * inv_cosh.powf(p) * jacobi(level.n, am, delta.sqrt(), 1.0 - 2.0 * t * t)?)
        }
    }
}

/// `Ψ_{n,m}(q1, φ)`.
pub fn eigenfunction(model: &Model, level: &Level, q1: f64, phi: f64) -> Result<Complex64> {
    let r = radial_eigenfunction(model, level, q1)?;
    Ok(Complex64::from_polar(1.0, level.m as f64 * phi) * r)
}

/// `∫|Ψ|² dA`, finite for the bound states.
pub fn eigenfunction_norm_sq(model: &Model, level: &Level) -> Result<f64> {
    let rho = model.rho();
    let (upper, weight): (f64, Box<dyn Fn(f64) -> f64>) = match model.family() {
        Family::Hyp0 => {
            let k = (model.xi() - 2.0 * rho * level.e).sqrt();
            ((200.0 / k).sqrt(), Box::new(move |r: f64| (1.0 + rho * r * r) * r))
        }
        _ => (60.0, Box::new(move |x: f64| (1.0 + rho * x.sinh().powi(2)) * x.tanh() / x.cosh())),
    };
    let v = quad::integrate(
        |x| {
            if x <= 0.0 {
                return 0.0;
            }
            radial_eigenfunction(model, level, x).map_or(f64::NAN, |p| p * p * weight(x))
        },
        0.0,
        upper,
        1e-300,
        1e-11,
    )?;
    Ok(2.0 * PI * v)
}

/// `Q(χ) = ∫₀^χ √(1 + ρ sinh²u)/cosh u du` for any `ρ > 0`.
pub fn q_of_chi(rho: f64, chi: f64) -> Result<f64> {
    if !(rho > 0.0) || !(chi >= 0.0) {
        return Err(Error::Domain(format!("Q(χ) needs ρ > 0, χ ≥ 0, got ρ = {rho}, χ = {chi}")));
    }
    quad::integrate(|u| (1.0 + rho * u.sinh().powi(2)).sqrt() / u.cosh(), 0.0, chi, 1e-15, 1e-14)
}

pub fn q_coordinate(model: &Model, chi: f64) -> Result<f64> {
    if model.family() != Family::HypPlus {
        return Err(Error::Domain("Q(χ) belongs to HypPlus".into()));
    }
    q_of_chi(model.rho(), chi)
}

/// `U_m(χ)` as printed; the radial equation is `½(−R'' + U_m R) = E R` in `Q`.
pub fn effective_potential(model: &Model, m: i64, chi: f64) -> Result<f64> {
    if model.family() != Family::HypPlus {
        return Err(Error::Domain("U_m belongs to HypPlus".into()));
    }
    if !(chi > 0.0) {
        return Err(Error::Domain(format!("U_m needs χ > 0, got {chi}")));
    }
    Ok(u_m(model.rho(), model.xi(), m, chi))
}

fn u_m(rho: f64, xi: f64, m: i64, chi: f64) -> f64 {
    // flat to double precision beyond χ = 40; clamping keeps sinh² finite
    let chi = chi.min(40.0);
    let s2 = chi.sinh().powi(2);
    let t2 = chi.tanh().powi(2);
    let lam = 1.0 + rho * s2;
    let mf = m as f64;
    let centrifugal = (mf * mf - 0.25 + 0.25 * s2) / (t2 * lam);
    let two_v = xi * s2 / lam;
    let tail = (1.0 - rho) / 4.0 * (2.0 + (1.0 - 3.0 * rho) * s2 - 4.0 * rho * s2 * s2) / lam.powi(3);
    centrifugal + two_v - tail
}

/// One radial problem `R'' = w(x, E) R` on `x ∈ (0, x_max)`; the state also
/// carries a chart coordinate `c(x)` so `w` can be written in it.
struct Radial<'a> {
    am: f64,
    w: &'a dyn Fn(f64, f64, f64) -> f64,
    /// `dc/dx`, in terms of `c`.
    dc: &'a dyn Fn(f64) -> f64,
}

const X0: f64 = 1e-6;

impl Radial<'_> {
    /// Prüfer angle at `x_max`.
    fn theta(&self, e: f64, x_max: f64) -> Result<f64> {
        let f = |x: f64, y: &[f64; 2]| {
            let (s, c) = y[1].sin_cos();
            [(self.dc)(y[0]), c * c - (self.w)(x, y[0], e) * s * s]
        };
        let theta0 = (X0 / (self.am + 0.5)).atan();
        let mut opts = OdeOptions::new(1e-12);
        opts.h_init = 1e-8;
        let (_, y) = ode::solve(f, X0, [X0, theta0], x_max, &opts, |_, _, _, _| Control::Continue)?;
        Ok(y[1])
    }

    /// `θ(x_max)` minus its value on the decaying solution `R'/R = −κ`.
    fn mismatch(&self, e: f64, x_max: f64, k: usize) -> Result<f64> {
        let theta = self.theta(e, x_max)?;
        let kappa = self.kappa_at(e, x_max);
        Ok(theta - ((k + 1) as f64 * PI - (1.0 / kappa).atan()))
    }

    /// Local decay rate; `w` given a NaN chart coordinate returns its far-field value.
    fn kappa_at(&self, e: f64, x: f64) -> f64 {
        (self.w)(x, f64::NAN, e).max(1e-300).sqrt()
    }
}

/// `x_max(E)` so that the decaying solution has fallen by `e^{−28}`.
type Reach<'a> = &'a dyn Fn(f64) -> Result<f64>;

fn shoot(radial: &Radial, edge: f64, e_floor: f64, k: usize, reach: Reach) -> Result<f64> {
    // first pass: walk towards the edge until the angle passes the k-th level
    let mut e_hi = None;
    for j in 1..=48 {
        let e = edge - (edge - e_floor) * 0.5f64.powi(j);
        let xm = reach(e)?;
        if radial.mismatch(e, xm, k)? > 0.0 {
            e_hi = Some((e, xm));
            break;
        }
    }
    let (e_hi, x_max) = e_hi.ok_or_else(|| Error::NoBoundState(format!("fewer than {} levels below {edge}", k + 1)))?;
    // second pass: fixed x_max, where the angle is monotone in E
    let g = |e: f64| radial.mismatch(e, x_max, k).unwrap_or(f64::NAN);
    let g_lo = g(e_floor);
    let g_hi = g(e_hi);
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(Error::ConvergenceFailure(format!("no bracket for level {k}: g = {g_lo}, {g_hi}")));
    }
    quad::brent(g, e_floor, e_hi, 1e-13 * edge.max(1.0))
}

fn hyp0_w(m: i64, rho: f64, xi: f64) -> impl Fn(f64, f64, f64) -> f64 {
    let mm = (m * m) as f64;
    move |r: f64, _c: f64, e: f64| (mm - 0.25) / (r * r) - 2.0 * e + (xi - 2.0 * rho * e) * r * r
}

fn hyp0_reach(m: i64, rho: f64, xi: f64) -> impl Fn(f64) -> Result<f64> {
    let mm = (m * m) as f64;
    move |e: f64| {
        let k = xi - 2.0 * rho * e;
        let disc = (e * e - k * (mm - 0.25)).max(0.0);
        let rt2 = (e + disc.sqrt()) / k;
        Ok((rt2 + 80.0 / k.sqrt() + 1.0).sqrt())
    }
}

/// `k`-th eigenvalue (`k ≥ 0`) of the radial problem of angular number `m`,
/// by shooting.
pub fn shoot_eigenvalue(model: &Model, m: i64, k: usize) -> Result<f64> {
    require_quantum(model)?;
    let (rho, xi) = (model.rho(), model.xi());
    let am = m.unsigned_abs() as f64;
    let edge = spectrum_edge(model);
    match model.family() {
        Family::Hyp0 => {
            let w = hyp0_w(m, rho, xi);
            let one = |_: f64| 1.0;
            let radial = Radial { am, w: &w, dc: &one };
            let reach = hyp0_reach(m, rho, xi);
            shoot(&radial, edge, 0.0, k, &reach)
        }
        _ => {
            // x = Q, chart coordinate c = χ, dχ/dQ = cosh χ/√(1 + ρ sinh²χ)
            let w = move |_q: f64, chi: f64, e: f64| {
                if chi.is_nan() {
                    // far field, for the decay rate at Q_max
                    xi_far(rho, xi) - 2.0 * e
                } else {
                    u_m(rho, xi, m, chi) - 2.0 * e
                }
            };
            let dc = move |chi: f64| dchi_dq(rho, chi);
            let radial = Radial { am, w: &w, dc: &dc };
            let reach = move |e: f64| -> Result<f64> {
                let kappa = (xi_far(rho, xi) - 2.0 * e).max(1e-12).sqrt();
                let chi_t = outer_turning_chi(rho, xi, m, e);
                Ok(q_of_chi(rho, chi_t)? + 28.0 / kappa)
            };
            shoot(&radial, edge, 0.0, k, &reach)
        }
    }
}

fn dchi_dq(rho: f64, chi: f64) -> f64 {
    let chi = chi.min(40.0);
    let s = chi.sinh();
    chi.cosh() / (1.0 + rho * s * s).sqrt()
}

fn xi_far(rho: f64, xi: f64) -> f64 {
    (xi + 0.25) / rho
}

/// Largest `χ` with `U_m(χ) = 2E` (0 when the well is empty).
fn outer_turning_chi(rho: f64, xi: f64, m: i64, e: f64) -> f64 {
    let f = |c: f64| u_m(rho, xi, m, c) - 2.0 * e;
    let mut hi = 40.0;
    if f(hi) < 0.0 {
        return hi;
    }
    while hi > 1e-4 {
        let lo = 0.5 * hi;
        if f(lo) < 0.0 {
            return quad::bisect(f, lo, hi, 1e-12).unwrap_or(hi);
        }
        hi = lo;
    }
    0.0
}

/// Number of radial bound states of angular number `m`: nodes of the
/// solution at the HypPlus edge energy, out to `χ = 40`.
pub fn bound_state_count(model: &Model, m: i64) -> Result<usize> {
    if model.family() != Family::HypPlus {
        return Err(Error::Domain("bound-state counting is for HypPlus".into()));
    }
    require_quantum(model)?;
    let (rho, xi) = (model.rho(), model.xi());
    let w = move |_q: f64, chi: f64, e: f64| u_m(rho, xi, m, chi) - 2.0 * e;
    let dc = move |chi: f64| dchi_dq(rho, chi);
    let radial = Radial { am: m.unsigned_abs() as f64, w: &w, dc: &dc };
    let theta = radial.theta(spectrum_edge(model), q_of_chi(rho, 40.0)?)?;
    Ok((theta / PI).floor().max(0.0) as usize)
}

/// Consistency path for Hyp0: shoot the unit oscillator
/// `R'' = ((m²−¼)/s² + s² − 2ε)R` for `ε = E/√(ξ − 2ρE)`, then solve
/// `E² = ε²(ξ − 2ρE)`.
pub fn shoot_eigenvalue_flat(model: &Model, m: i64, k: usize) -> Result<f64> {
    if model.family() != Family::Hyp0 {
        return Err(Error::Domain("the flat oscillator path is for Hyp0".into()));
    }
    require_quantum(model)?;
    let mm = (m * m) as f64;
    let w = move |s: f64, _c: f64, eps: f64| (mm - 0.25) / (s * s) + s * s - 2.0 * eps;
    let one = |_: f64| 1.0;
    let radial = Radial { am: m.unsigned_abs() as f64, w: &w, dc: &one };
    let bound = 4.0 * (k as f64 + m.unsigned_abs() as f64 + 2.0);
    let reach = move |eps: f64| Ok((2.0 * eps + 80.0).sqrt());
    let eps = shoot(&radial, bound, 0.0, k, &reach)?;
    let (rho, xi) = (model.rho(), model.xi());
    Ok(-rho * eps * eps + (rho * rho * eps.powi(4) + eps * eps * xi).sqrt())
}

/// `‖(Ĥ − E)Ψ‖/‖Ψ‖` with second-order central differences on a radial grid
/// of spacing `grid_h`, norms weighted by the area element.
pub fn schrodinger_residual(model: &Model, level: &Level, grid_h: f64) -> Result<f64> {
    require_quantum(model)?;
    if !(grid_h > 0.0) {
        return Err(Error::Domain(format!("grid_h must be positive, got {grid_h}")));
    }
    let rho = model.rho();
    let xi = model.xi();
    let e = level.e;
    let mm = (level.m * level.m) as f64;
    let x_end = match model.family() {
        Family::Hyp0 => {
            let k = (xi - 2.0 * rho * e).sqrt();
            ((90.0 + 4.0 * level.j_tilde) / k).sqrt()
        }
        _ => 40.0,
    };
    let n = (x_end / grid_h).ceil() as usize;
    let mut psi: Vec<f64> = (0..=n + 1)
        .map(|i| if i == 0 { 0.0 } else { radial_eigenfunction(model, level, i as f64 * grid_h).unwrap_or(0.0) })
        .collect();
    if level.m == 0 {
        // even in x, so ψ(0) = (4ψ(h) − ψ(2h))/3 + O(h⁴)
        psi[0] = (4.0 * psi[1] - psi[2]) / 3.0;
    }
    let (mut num, mut den) = (0.0, 0.0);
    for i in 1..=n {
        let x = i as f64 * grid_h;
        let d2 = (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) / (grid_h * grid_h);
        let d1 = (psi[i + 1] - psi[i - 1]) / (2.0 * grid_h);
        let (hpsi, weight) = match model.family() {
            Family::Hyp0 => {
                let lam = 1.0 + rho * x * x;
                let lap = d2 + d1 / x - mm * psi[i] / (x * x);
                (-lap / (2.0 * lam) + xi * x * x / (2.0 * lam) * psi[i], lam * x)
            }
            _ => {
                let (s, c) = (x.sinh(), x.cosh());
                let lam = 1.0 + rho * s * s;
                let lap = d2 + d1 * c / s - mm * psi[i] / (s * s);
                (-c * c / (2.0 * lam) * lap + xi * s * s / (2.0 * lam) * psi[i], lam * s / (c * c))
            }
        };
        let r = hpsi - e * psi[i];
        num += r * r * weight;
        den += psi[i] * psi[i] * weight;
    }
    if !(den > 0.0) {
        return Err(Error::Domain("eigenfunction vanishes on the grid".into()));
    }
    Ok((num / den).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyp0_ground_level() {
        let m = Model::new(Family::Hyp0, 1.0, 3.0).unwrap();
        let s = spectrum(&m, 0, 0).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0].e - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hplus_single_level() {
        let m = Model::new(Family::HypPlus, 2.0, 3.75).unwrap();
        let s = spectrum(&m, 3, 3).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0].e - (6f64.sqrt() - 1.5)).abs() < 1e-14);
    }

    #[test]
    fn q_small_and_flat() {
        assert!((q_of_chi(1.0, 2.5).unwrap() - 2.5).abs() < 1e-13);
        assert!((q_of_chi(3.0, 1e-3).unwrap() - 1e-3).abs() < 1e-8);
    }

    #[test]
    fn u_m_edge_value() {
        let m = Model::new(Family::HypPlus, 2.0, 3.75).unwrap();
        assert!((effective_potential(&m, 0, 20.0).unwrap() - 2.0).abs() < 1e-6);
        let c = 1e-4;
        assert!((effective_potential(&m, 1, c).unwrap() * c * c - 0.75).abs() < 1e-6);
    }

    #[test]
    fn hyp0_shooting_ground() {
        let m = Model::new(Family::Hyp0, 1.0, 3.0).unwrap();
        let e = shoot_eigenvalue(&m, 0, 0).unwrap();
        assert!((e - 1.0).abs() < 1e-6, "{e}");
    }
}
