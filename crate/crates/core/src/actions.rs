//! Action variables of the two closed-geodesic families and the degenerate
//! Hamiltonian `H(J)`, `J = I_radial + I_angle`.
//!
//! The radial action is `(1/2π)∮ p dq`; since the angle advances by π per
//! radial libration the loop is run twice, so `I = (2/π)∫_{turn} p dq`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geodesics::{classify, radial_momentum_sq, Curve};
use crate::models::{Family, Model};
use crate::quad;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActionVars {
    pub i_angle: f64,
    pub i_radial: f64,
    pub j: f64,
}

fn require_closed(model: &Model, e: f64, l: f64) -> Result<Curve> {
    if !matches!(model.family(), Family::Hyp0 | Family::HypPlus) {
        return Err(Error::NotClosedRegime(format!("{} has no closed-orbit window", model.family())));
    }
    match classify(model, e, l) {
        Ok(r) if r.closed => Ok(r.curve),
        Ok(r) => Err(Error::NotClosedRegime(format!("E = {e}, L = {l} gives {}", r.curve.tag()))),
        Err(err) => Err(Error::NotClosedRegime(err.to_string())),
    }
}

/// `[E_lo, E_hi)` of closed orbits at fixed `L`.
pub fn closed_window(model: &Model, l: f64) -> Result<(f64, f64)> {
    let (rho, xi) = (model.rho(), model.xi());
    match model.family() {
        Family::Hyp0 if xi > 0.0 => Ok((crate::geodesics::hyp0_e_plus(model, l), xi / (2.0 * rho))),
        Family::HypPlus if xi - rho * l * l > 0.0 => {
            Ok((crate::geodesics::hplus_e_plus(model, l), xi / (2.0 * rho)))
        }
        _ => Err(Error::NotClosedRegime(format!("no closed window for {} at L = {l}", model.family()))),
    }
}

pub fn action_variables(model: &Model, e: f64, l: f64) -> Result<ActionVars> {
    require_closed(model, e, l)?;
    let (rho, xi) = (model.rho(), model.xi());
    let (j, i_radial) = match model.family() {
        Family::Hyp0 => {
            let j = e / (xi - 2.0 * rho * e).sqrt();
            (j, j - l)
        }
        _ => {
            let ir = -l + (xi - 2.0 * (rho - 1.0) * e).sqrt() - (xi - 2.0 * rho * e).sqrt();
            (ir + l, ir)
        }
    };
    Ok(ActionVars { i_angle: l, i_radial, j })
}

/// Radial action by quadrature over the turning interval, after the cosine
/// substitution that makes the integrand smooth.
pub fn action_quadrature(model: &Model, e: f64, l: f64) -> Result<f64> {
    let curve = require_closed(model, e, l)?;
    let (rho, xi) = (model.rho(), model.xi());
    let l2 = l * l;
    let tol = 1e-13;
    match (model.family(), curve) {
        (Family::Hyp0, Curve::Hyp0Closed { sqrt_delta }) => {
            // w = r²: ∫P_r dr = (√k/2)∫√((w₊−w)(w−w₋))/w dw
            let k = xi - 2.0 * rho * e;
            let (wm, wp) = ((e - sqrt_delta) / k, (e + sqrt_delta) / k);
            let (c, d) = (0.5 * (wp + wm), 0.5 * (wp - wm));
            if d == 0.0 {
                return Ok(0.0);
            }
            let v = quad::integrate(|t| d * d * t.sin().powi(2) / (c - d * t.cos()), 0.0, PI, 0.0, tol)?;
            Ok(2.0 / PI * 0.5 * k.sqrt() * v)
        }
        (Family::HypPlus, Curve::HypPlusClosed { b, sqrt_delta }) => {
            // u = tanh²χ: ∫P_χ dχ = ½∫√F(u) du/(u(1−u)), F = σu² + 2Bu − L²
            let sigma = 2.0 * (rho - 1.0) * e - xi;
            let (um, up) = (l2 / (b + sqrt_delta), l2 / (b - sqrt_delta));
            let (c, d) = (0.5 * (up + um), 0.5 * (up - um));
            if d == 0.0 {
                return Ok(0.0);
            }
            let v = quad::integrate(
                |t| {
                    let u = c - d * t.cos();
                    d * d * t.sin().powi(2) / (u * (1.0 - u))
                },
                0.0,
                PI,
                0.0,
                tol,
            )?;
            Ok((-sigma).sqrt() * v / PI)
        }
        _ => unreachable!("require_closed returned a closed curve"),
    }
}

/// Second oracle: `(2/π)∫ √(P²) dq` straight over the turning interval by
/// tanh-sinh, with the square-root endpoint singularities left in place.
pub fn action_quadrature_raw(model: &Model, e: f64, l: f64) -> Result<f64> {
    require_closed(model, e, l)?;
    let r = classify(model, e, l)?;
    let (a, b) = (r.turning_points[0], r.turning_points[1]);
    if a == b {
        return Ok(0.0);
    }
    let v = quad::tanh_sinh(
        |q| radial_momentum_sq(model, e, l, q).map_or(0.0, |p2| p2.max(0.0).sqrt()),
        a,
        b,
        1e-12,
    )?;
    Ok(2.0 / PI * v)
}

/// `H(J)` of the closed families.
pub fn energy_from_j(model: &Model, j: f64) -> Result<f64> {
    let (rho, xi) = (model.rho(), model.xi());
    if !(j >= 0.0) || !(xi > 0.0) {
        return Err(Error::Domain(format!("H(J) needs J ≥ 0 and ξ > 0, got J = {j}, ξ = {xi}")));
    }
    match model.family() {
        Family::Hyp0 => Ok(j * xi / ((xi + rho * rho * j * j).sqrt() + rho * j)),
        Family::HypPlus => {
            if !(j < (xi / rho).sqrt()) {
                return Err(Error::Domain(format!("J = {j} outside [0, √(ξ/ρ))")));
            }
            let rad = rho * (rho - 1.0) * j * j + xi;
            if rad < 0.0 {
                return Err(Error::Domain(format!("ρ(ρ−1)J² + ξ = {rad} < 0")));
            }
            let s = rad.sqrt();
            let k = (rho - 0.5) * j;
            // √R − k = (R − k²)/(√R + k), R − k² = ξ − J²/4
            Ok(if k > 0.0 { j * (xi - 0.25 * j * j) / (s + k) } else { j * (s - k) })
        }
        f => Err(Error::Domain(format!("{f} has no action-angle Hamiltonian"))),
    }
}

/// `(S₁, S₂)` on the Hyp0 torus through the perihelion `(r₋, φ = 0)`.
pub fn integral_values_on_torus(model: &Model, e: f64, l: f64) -> Result<(f64, f64)> {
    if model.family() != Family::Hyp0 {
        return Err(Error::NotClosedRegime("torus values are given for Hyp0".into()));
    }
    let a = action_variables(model, e, l)?;
    let (rho, xi) = (model.rho(), model.xi());
    let j = a.j;
    let s2 = -(j * j - l * l).max(0.0).sqrt() * ((xi + rho * rho * j * j).sqrt() - rho * j);
    Ok((0.0, s2))
}
