//! Geodesic regimes on the invariant tori `H = E`, `P_y = L` (or `P_φ = L`)
//! and their closed-form curves.
//!
//! Each regime keeps exactly the constants its curve relation needs. Curves
//! are anchored at `y = y0` (`φ = 0` for the angular families), at a turning
//! point when there is one.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::models::{Family, Model, PhasePoint};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyOptions {
    /// Relative tolerance selecting the equality sub-cases (`ξ = −L²` at
    /// zero energy, `η = e^{−θ}`, `σ = −1`, `E = E₊`, `2E = ξ`, `2ρE = L²`).
    /// Raising it forces the equality branch for nearby inputs.
    pub equality_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { equality_tol: 1e-12 }
    }
}

/// The curve relation of a regime, with the constants it uses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Curve {
    /// `E = 0`, `0 < −ξ/L² < 1`: `cosh y = |cos x| / cos x_*`.
    TrigZeroBounded { cos_xs: f64 },
    /// `E = 0`, `−ξ/L² > 1`: `ε sinh y = cos x / sinh θ`.
    TrigZeroCrossing { sinh_theta: f64 },
    /// `E = 0`, `ξ = −L²`: `e^{εy} = |cos x|`.
    TrigZeroWall,
    /// `−1 < σ < 1`: `cosh y = (η − cos x)/√(η² + 2ση + 1)`.
    TrigSingle { eta: f64, root: f64 },
    /// `σ ≤ −1`, `η < e^{−θ}`: two branches split at `x_− < x_+`.
    TrigSplit { eta: f64, root: f64 },
    /// `σ ≤ −1`, `η > e^{−θ}`: `e^{εy} = (η − cos x + W)/(η − 1 + W₀)`.
    TrigCrossing { eta: f64, abs_sigma: f64 },
    /// `σ ≤ −1`, `η = e^{−θ} = cos x_*`.
    TrigWall { cos_xs: f64 },
    /// `2ρE ≥ ξ`: `L²/r² = E + √Δ cos 2φ`, one turning point.
    Hyp0Open { sqrt_delta: f64 },
    /// `E₊ ≤ E < ξ/2ρ`: same relation, two turning points.
    Hyp0Closed { sqrt_delta: f64 },
    /// `ξ ≤ 2ρE`: `L²/tanh²χ = B + √Δ cos 2φ`, `B = E + L²/2`.
    HypPlusOpen { b: f64, sqrt_delta: f64 },
    /// `ξ > 2ρE`, `σ < −L²`, `Δ ≥ 0`.
    HypPlusClosed { b: f64, sqrt_delta: f64 },
    /// `2E < ξ`, `A = 2ρE − L² > 0`: `u² − (A/L²)(y−y0)² = u_*²`.
    AffineHyperbola { a: f64, us: f64 },
    /// `2E = ξ`, `A > 0`: `u = √(A/L²)|y − y0|`.
    AffineLines { a: f64 },
    /// `2E > ξ`, `A > 0`: `u² + u_*² = (A/L²)(y−y0)²`.
    AffineCrossing { a: f64, us: f64 },
    /// `2E > ξ`, `A = 0`: `|y − y0| = L u²/(2√(2E−ξ))`.
    AffineParabola { bq: f64 },
    /// `2E > ξ`, `A < 0`: `u² + (|A|/L²)(y−y0)² = u_*²`, `u < u_*`.
    AffineArc { a: f64, us: f64 },
}

impl Curve {
    pub fn tag(&self) -> &'static str {
        match self {
            Curve::TrigZeroBounded { .. } => "trig_zero_bounded",
            Curve::TrigZeroCrossing { .. } => "trig_zero_crossing",
            Curve::TrigZeroWall => "trig_zero_wall",
            Curve::TrigSingle { .. } => "trig_single",
            Curve::TrigSplit { .. } => "trig_split",
            Curve::TrigCrossing { .. } => "trig_crossing",
            Curve::TrigWall { .. } => "trig_wall",
            Curve::Hyp0Open { .. } => "hyp0_open",
            Curve::Hyp0Closed { .. } => "hyp0_closed",
            Curve::HypPlusOpen { .. } => "hplus_open",
            Curve::HypPlusClosed { .. } => "hplus_closed",
            Curve::AffineHyperbola { .. } => "affine_hyperbola",
            Curve::AffineLines { .. } => "affine_lines",
            Curve::AffineCrossing { .. } => "affine_crossing",
            Curve::AffineParabola { .. } => "affine_parabola",
            Curve::AffineArc { .. } => "affine_arc",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicRegime {
    pub model: Model,
    pub energy: f64,
    pub l: f64,
    pub curve: Curve,
    /// Allowed `q1` intervals in the chart coordinate.
    pub domain: Vec<(f64, f64)>,
    pub turning_points: Vec<f64>,
    pub eccentricity: Option<f64>,
    pub closed: bool,
    /// TrigI with `E < 0`, classified through `(η, σ, x) → (−η, −σ, π − x)`.
    pub mirrored: bool,
    /// Named branch parameters (σ, η, θ, x_*, x_±, u_±, r_±, ...).
    pub params: Vec<(&'static str, f64)>,
    /// Translation of the anchor in `y` (rotation in `φ`).
    pub y0: f64,
}

/// Squared radial momentum on the torus `(E, L)`; may be negative.
pub fn radial_momentum_sq(model: &Model, e: f64, l: f64, q1: f64) -> Result<f64> {
    model.check_chart(q1)?;
    let (rho, xi) = (model.rho(), model.xi());
    Ok(match model.family() {
        Family::TrigI => (2.0 * e * (1.0 - rho * q1.cos()) - xi) / q1.sin().powi(2) - l * l,
        Family::Hyp0 => 2.0 * e + (2.0 * rho * e - xi) * q1 * q1 - l * l / (q1 * q1),
        Family::HypPlus => {
            let t2 = q1.tanh().powi(2);
            let sigma = 2.0 * (rho - 1.0) * e - xi;
            2.0 * e + l * l + sigma * t2 - l * l / t2
        }
        Family::HypMinusLocal => (2.0 * e * (q1.sinh() + rho) - xi) / q1.cosh().powi(2) - l * l,
        Family::Affine => (2.0 * e - xi) / (q1 * q1) + 2.0 * rho * e - l * l,
    })
}

pub fn classify(model: &Model, e: f64, l: f64) -> Result<GeodesicRegime> {
    classify_with(model, e, l, &ClassifyOptions::default())
}

pub fn classify_with(model: &Model, e: f64, l: f64, opts: &ClassifyOptions) -> Result<GeodesicRegime> {
    if !(l > 0.0) || !e.is_finite() {
        return Err(Error::Domain(format!("classify needs L > 0 and finite E, got L = {l}, E = {e}")));
    }
    let tol = opts.equality_tol;
    match model.family() {
        Family::TrigI => classify_trig(model, e, l, tol),
        Family::Hyp0 => classify_hyp0(model, e, l, tol),
        Family::HypPlus => classify_hplus(model, e, l, tol),
        Family::Affine => classify_affine(model, e, l, tol),
        Family::HypMinusLocal => Err(Error::NoGlobalStructure),
    }
}

pub fn turning_points(model: &Model, e: f64, l: f64) -> Result<Vec<f64>> {
    Ok(classify(model, e, l)?.turning_points)
}

fn near(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn base(model: &Model, e: f64, l: f64, curve: Curve) -> GeodesicRegime {
    GeodesicRegime {
        model: *model,
        energy: e,
        l,
        curve,
        domain: Vec::new(),
        turning_points: Vec::new(),
        eccentricity: None,
        closed: false,
        mirrored: false,
        params: Vec::new(),
        y0: 0.0,
    }
}

fn classify_trig(model: &Model, e: f64, l: f64, tol: f64) -> Result<GeodesicRegime> {
    let (rho, xi) = (model.rho(), model.xi());
    let l2 = l * l;
    if e.abs() <= tol * xi.abs().max(l2).max(1.0) {
        // P_x² = L²(κ/sin²x − 1)
        let kappa = -xi / l2;
        if kappa <= 0.0 {
            return Err(Error::NoMotion(format!("TrigI E = 0 with ξ = {xi} ≥ 0")));
        }
        let mut r;
        if near(kappa, 1.0, tol) {
            r = base(model, e, l, Curve::TrigZeroWall);
            r.domain = vec![(0.0, FRAC_PI_2), (FRAC_PI_2, PI)];
        } else if kappa < 1.0 {
            let c = (1.0 - kappa).sqrt();
            let xs = c.acos();
            r = base(model, e, l, Curve::TrigZeroBounded { cos_xs: c });
            r.domain = vec![(0.0, xs), (PI - xs, PI)];
            r.turning_points = vec![xs, PI - xs];
            r.params.push(("x_star", xs));
        } else {
            let sh = (kappa - 1.0).sqrt();
            r = base(model, e, l, Curve::TrigZeroCrossing { sinh_theta: sh });
            r.domain = vec![(0.0, PI)];
            r.params.push(("theta", sh.asinh()));
        }
        r.params.push(("kappa", kappa));
        return Ok(r);
    }

    let eta0 = rho * e / l2;
    let sigma0 = (xi / (2.0 * e) - 1.0) / rho;
    let mirrored = eta0 < 0.0;
    let (eta, sigma) = if mirrored { (-eta0, -sigma0) } else { (eta0, sigma0) };
    if sigma >= 1.0 {
        return Err(Error::NoMotion(format!("TrigI σ = {sigma} ≥ 1 (η > 0 frame)")));
    }
    let root = |eta: f64| (eta * eta + 2.0 * sigma * eta + 1.0).max(0.0).sqrt();
    let mut r;
    let mut xs: Vec<(&'static str, f64)> = Vec::new();
    if sigma > -1.0 && !near(sigma, -1.0, tol) {
        let rt = root(eta);
        let x_star = (eta - rt).clamp(-1.0, 1.0).acos();
        r = base(model, e, l, Curve::TrigSingle { eta, root: rt });
        r.domain = vec![(x_star, PI)];
        r.turning_points = vec![x_star];
        xs.push(("x_star", x_star));
    } else {
        let theta = (-sigma).max(1.0).acosh();
        let et = (-theta).exp();
        r = base(model, e, l, Curve::TrigCrossing { eta, abs_sigma: -sigma });
        r.params.push(("theta", theta));
        if near(eta, et, tol) {
            let x_star = eta.clamp(-1.0, 1.0).acos();
            r.curve = Curve::TrigWall { cos_xs: eta };
            r.domain = vec![(0.0, x_star), (x_star, PI)];
            xs.push(("x_star", x_star));
        } else if eta < et {
            let rt = root(eta);
            let xm = (eta + rt).clamp(-1.0, 1.0).acos();
            let xp = (eta - rt).clamp(-1.0, 1.0).acos();
            r.curve = Curve::TrigSplit { eta, root: rt };
            r.domain = vec![(0.0, xm), (xp, PI)];
            r.turning_points = vec![xm, xp];
            xs.push(("x_minus", xm));
            xs.push(("x_plus", xp));
        } else {
            r.domain = vec![(0.0, PI)];
        }
    }
    r.mirrored = mirrored;
    if mirrored {
        r.domain = r.domain.iter().rev().map(|&(a, b)| (PI - b, PI - a)).collect();
        r.turning_points = r.turning_points.iter().rev().map(|x| PI - x).collect();
    }
    r.params.push(("sigma", sigma0));
    r.params.push(("eta", eta0));
    for (k, v) in xs {
        r.params.push((k, if mirrored { PI - v } else { v }));
    }
    Ok(r)
}

/// `E₊` of Hyp0: lower edge of the closed window.
pub fn hyp0_e_plus(model: &Model, l: f64) -> f64 {
    let (rho, xi) = (model.rho(), model.xi());
    let l2 = l * l;
    // L²(−ρ + √(ρ² + ξ/L²)) = ξ / (ρ + √(ρ² + ξ/L²))
    if xi > 0.0 {
        xi / (rho + (rho * rho + xi / l2).sqrt())
    } else {
        l2 * (-rho + (rho * rho + xi / l2).sqrt())
    }
}

fn classify_hyp0(model: &Model, e: f64, l: f64, tol: f64) -> Result<GeodesicRegime> {
    let (rho, xi) = (model.rho(), model.xi());
    let l2 = l * l;
    let k = xi - 2.0 * rho * e;
    let delta = e * e - l2 * k;
    if k <= tol * xi.abs().max(1.0) {
        let sd = delta.max(0.0).sqrt();
        if e + sd <= 0.0 {
            return Err(Error::NoMotion(format!("Hyp0: P_r² < 0 everywhere at E = {e}")));
        }
        let rs = (l2 / (e + sd)).sqrt();
        let mut r = base(model, e, l, Curve::Hyp0Open { sqrt_delta: sd });
        r.domain = vec![(rs, f64::INFINITY)];
        r.turning_points = vec![rs];
        r.eccentricity = (e != 0.0).then(|| sd / e.abs());
        r.params.push(("r_star", rs));
        return Ok(r);
    }
    let ep = hyp0_e_plus(model, l);
    if e <= 0.0 || (e < ep && !near(e, ep, tol)) {
        return Err(Error::NoMotion(format!("Hyp0: E = {e} below E₊ = {ep}")));
    }
    let sd = delta.max(0.0).sqrt();
    let rm = ((e - sd) / k).sqrt();
    let rp = ((e + sd) / k).sqrt();
    let mut r = base(model, e, l, Curve::Hyp0Closed { sqrt_delta: sd });
    r.domain = vec![(rm, rp)];
    r.turning_points = vec![rm, rp];
    r.eccentricity = Some(sd / e);
    r.closed = true;
    r.params.extend([("r_minus", rm), ("r_plus", rp), ("e_plus", ep)]);
    Ok(r)
}

/// `E₊ = L[√(ξ + ρ(ρ−1)L²) − (ρ − ½)L]` of HypPlus.
pub fn hplus_e_plus(model: &Model, l: f64) -> f64 {
    let (rho, xi) = (model.rho(), model.xi());
    l * ((xi + rho * (rho - 1.0) * l * l).sqrt() - (rho - 0.5) * l)
}

fn classify_hplus(model: &Model, e: f64, l: f64, tol: f64) -> Result<GeodesicRegime> {
    let (rho, xi) = (model.rho(), model.xi());
    let l2 = l * l;
    let sigma = 2.0 * (rho - 1.0) * e - xi;
    let b = e + 0.5 * l2;
    let delta = b * b + l2 * sigma;
    let d = xi - 2.0 * rho * e;
    let scale = xi.abs().max(e.abs()).max(l2).max(1.0);
    let ecc = |sd: f64| (b != 0.0).then(|| sd / b.abs());
    let chi = |u: f64| u.sqrt().atanh();
    if d <= tol * scale {
        let sd = delta.max(0.0).sqrt();
        if b + sd <= 0.0 || delta < -tol * scale * scale {
            return Err(Error::NoMotion(format!("HypPlus: F(u) < 0 on (0,1) at E = {e}")));
        }
        let um = l2 / (b + sd);
        if !(um < 1.0) {
            return Err(Error::NoMotion(format!("HypPlus: u₋ = {um} ≥ 1")));
        }
        let cm = chi(um);
        let mut r = base(model, e, l, Curve::HypPlusOpen { b, sqrt_delta: sd });
        r.domain = vec![(cm, f64::INFINITY)];
        r.turning_points = vec![cm];
        r.eccentricity = ecc(sd);
        r.params.extend([("sigma", sigma), ("u_minus", um)]);
        return Ok(r);
    }
    if sigma >= -l2 {
        return Err(Error::NoMotion(format!("HypPlus: ξ − 2ρE > 0 with σ = {sigma} ≥ −L²")));
    }
    if delta < -tol * scale * scale {
        return Err(Error::NoMotion(format!("HypPlus: Δ = {delta} < 0")));
    }
    let sd = delta.max(0.0).sqrt();
    let um = l2 / (b + sd);
    let up = l2 / (b - sd);
    if !(b - sd > 0.0) || !(up < 1.0) {
        return Err(Error::NoMotion(format!("HypPlus: no bounded interval at E = {e}")));
    }
    let mut r = base(model, e, l, Curve::HypPlusClosed { b, sqrt_delta: sd });
    r.domain = vec![(chi(um), chi(up))];
    r.turning_points = vec![chi(um), chi(up)];
    r.eccentricity = ecc(sd);
    r.closed = true;
    r.params.extend([("sigma", sigma), ("u_minus", um), ("u_plus", up), ("e_plus", hplus_e_plus(model, l))]);
    Ok(r)
}

fn classify_affine(model: &Model, e: f64, l: f64, tol: f64) -> Result<GeodesicRegime> {
    let (rho, xi) = (model.rho(), model.xi());
    let l2 = l * l;
    let bq = 2.0 * e - xi;
    let a = 2.0 * rho * e - l2;
    let bq_zero = near(2.0 * e, xi, tol);
    let a_zero = near(2.0 * rho * e, l2, tol);
    let mut r;
    if bq_zero {
        if a_zero {
            return Err(Error::DegenerateRegime("affine 2E = ξ and 2ρE = L²: every line u = const is a geodesic".into()));
        }
        if a < 0.0 {
            return Err(Error::NoMotion("affine 2E = ξ with 2ρE < L²".into()));
        }
        r = base(model, e, l, Curve::AffineLines { a });
        r.domain = vec![(0.0, f64::INFINITY)];
        r.params.push(("slope", a.sqrt() / l));
    } else if bq < 0.0 {
        if a <= 0.0 || a_zero {
            return Err(Error::NoMotion("affine 2E < ξ with 2ρE ≤ L²".into()));
        }
        let us = (-bq / a).sqrt();
        r = base(model, e, l, Curve::AffineHyperbola { a, us });
        r.domain = vec![(us, f64::INFINITY)];
        r.turning_points = vec![us];
        r.params.push(("u_star", us));
    } else if a_zero {
        r = base(model, e, l, Curve::AffineParabola { bq });
        r.domain = vec![(0.0, f64::INFINITY)];
    } else if a > 0.0 {
        let us = (bq / a).sqrt();
        r = base(model, e, l, Curve::AffineCrossing { a, us });
        r.domain = vec![(0.0, f64::INFINITY)];
        r.params.push(("u_star", us));
    } else {
        let us = (bq / -a).sqrt();
        r = base(model, e, l, Curve::AffineArc { a, us });
        r.domain = vec![(0.0, us)];
        r.turning_points = vec![us];
        r.params.push(("u_star", us));
    }
    r.params.push(("y0", 0.0));
    Ok(r)
}

impl GeodesicRegime {
    /// Same regime translated to anchor `y0` (rotated by `y0` for the angular
    /// families).
    pub fn with_y0(mut self, y0: f64) -> Self {
        self.y0 = y0;
        for p in self.params.iter_mut() {
            if p.0 == "y0" {
                p.1 = y0;
            }
        }
        self
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|p| p.0 == name).map(|p| p.1)
    }

    /// True when the q1-range is bounded away from the chart's infinite end.
    pub fn bounded(&self) -> bool {
        self.closed
    }

    fn in_domain(&self, q1: f64) -> bool {
        let slack = 1e-7 * q1.abs().max(1.0);
        self.domain.iter().any(|&(a, b)| q1 > a - slack && q1 < b + slack)
    }

    /// Chart-frame coordinate used by the TrigI curve formulas.
    fn trig_x(&self, x: f64) -> f64 {
        if self.mirrored {
            PI - x
        } else {
            x
        }
    }

    /// `|LHS − RHS|` of the regime's curve relation, scaled by the size of the
    /// terms; the `e^{εy}` forms take the smaller of the two branches `ε = ±1`.
    pub fn curve_residual(&self, p: &PhasePoint) -> Result<f64> {
        curve_residual(self, p)
    }

    /// Initial conditions on the curve (one per branch), each with `H = E`
    /// and linear integral `L`.
    pub fn seeds(&self) -> Vec<PhasePoint> {
        let l = self.l;
        let y0 = self.y0;
        let mut out = Vec::new();
        let trig = |x: f64, y: f64, px: f64| {
            if self.mirrored {
                PhasePoint::new(PI - x, y, -px, l)
            } else {
                PhasePoint::new(x, y, px, l)
            }
        };
        match self.curve {
            Curve::TrigZeroBounded { cos_xs } => {
                let xs = cos_xs.acos();
                out.push(trig(xs, y0, 0.0));
                out.push(trig(PI - xs, y0, 0.0));
            }
            Curve::TrigZeroCrossing { sinh_theta } => {
                out.push(trig(FRAC_PI_2, y0, l * sinh_theta));
                out.push(trig(FRAC_PI_2, y0, -l * sinh_theta));
            }
            Curve::TrigZeroWall => {
                for x in [0.25 * PI, 0.75 * PI] {
                    for eps in [1.0, -1.0] {
                        let (y, px) = trig_log_point(self.curve, x, eps, l).unwrap();
                        out.push(trig(x, y0 + y, px));
                    }
                }
            }
            Curve::TrigSingle { eta, root } => out.push(trig((eta - root).clamp(-1.0, 1.0).acos(), y0, 0.0)),
            Curve::TrigSplit { eta, root } => {
                out.push(trig((eta + root).clamp(-1.0, 1.0).acos(), y0, 0.0));
                out.push(trig((eta - root).clamp(-1.0, 1.0).acos(), y0, 0.0));
            }
            Curve::TrigCrossing { .. } => {
                for eps in [1.0, -1.0] {
                    let (y, px) = trig_log_point(self.curve, FRAC_PI_2, eps, l).unwrap();
                    out.push(trig(FRAC_PI_2, y0 + y, px));
                }
            }
            Curve::TrigWall { cos_xs } => {
                let xs = cos_xs.acos();
                for x in [0.5 * xs, 0.5 * (xs + PI)] {
                    for eps in [1.0, -1.0] {
                        let (y, px) = trig_log_point(self.curve, x, eps, l).unwrap();
                        out.push(trig(x, y0 + y, px));
                    }
                }
            }
            Curve::Hyp0Open { .. } | Curve::Hyp0Closed { .. } | Curve::HypPlusOpen { .. } | Curve::HypPlusClosed { .. } => {
                out.push(PhasePoint::new(self.turning_points[0], y0, 0.0, l));
            }
            Curve::AffineHyperbola { us, .. } | Curve::AffineArc { us, .. } => {
                out.push(PhasePoint::new(us, y0, 0.0, l));
            }
            Curve::AffineLines { a } => {
                let k = a.sqrt() / l;
                for s in [1.0, -1.0] {
                    out.push(PhasePoint::new(1.0, y0 + s / k, s * a.sqrt(), l));
                }
            }
            Curve::AffineCrossing { a, us } => {
                for s in [1.0, -1.0] {
                    let dy = s * l * (2.0f64).sqrt() * us / a.sqrt();
                    out.push(PhasePoint::new(us, y0 + dy, a * dy / (l * us), l));
                }
            }
            Curve::AffineParabola { bq } => {
                for s in [1.0, -1.0] {
                    out.push(PhasePoint::new(1.0, y0 + s * l / (2.0 * bq.sqrt()), s * bq.sqrt(), l));
                }
            }
        }
        out
    }

    /// The point of branch `branch` (`±1`) of the curve above `q1`, with the
    /// radial momentum whose sign follows the motion along that branch.
    pub fn point_on_curve(&self, q1: f64, branch: f64) -> Result<PhasePoint> {
        if !self.in_domain(q1) {
            return Err(Error::OutOfDomain(format!("q1 = {q1} not in {:?}", self.domain)));
        }
        let l = self.l;
        let e = self.energy;
        let s = if branch < 0.0 { -1.0 } else { 1.0 };
        let pr = radial_momentum_sq(&self.model, e, l, q1)?.max(0.0).sqrt();
        let trig_point = |y: f64, dydx_sign: f64| {
            // dy/dx = L/P_x in the frame of the formulas; mirror flips P_x
            let px = dydx_sign * pr;
            if self.mirrored {
                PhasePoint::new(q1, self.y0 + y, -px, l)
            } else {
                PhasePoint::new(q1, self.y0 + y, px, l)
            }
        };
        let x = self.trig_x(q1);
        let p = match self.curve {
            Curve::TrigZeroBounded { .. } | Curve::TrigSingle { .. } | Curve::TrigSplit { .. } => {
                let f = |x: f64| trig_cosh_rhs(self.curve, x);
                let y = s * f(x).max(1.0).acosh();
                let slope = f(x + 1e-7) - f(x - 1e-7);
                trig_point(y, s * slope.signum())
            }
            Curve::TrigZeroCrossing { sinh_theta } => {
                let y = (x.cos() / (s * sinh_theta)).asinh();
                trig_point(y, -s)
            }
            Curve::TrigZeroWall | Curve::TrigCrossing { .. } | Curve::TrigWall { .. } => {
                let (y, px) = trig_log_point(self.curve, x, s, l)
                    .ok_or_else(|| Error::OutOfDomain(format!("x = {q1} on a wall")))?;
                if self.mirrored {
                    PhasePoint::new(q1, self.y0 + y, -px, l)
                } else {
                    PhasePoint::new(q1, self.y0 + y, px, l)
                }
            }
            Curve::Hyp0Open { sqrt_delta } | Curve::Hyp0Closed { sqrt_delta } => {
                let c = if sqrt_delta > 0.0 { (l * l / (q1 * q1) - e) / sqrt_delta } else { 1.0 };
                PhasePoint::new(q1, self.y0 + s * 0.5 * c.clamp(-1.0, 1.0).acos(), s * pr, l)
            }
            Curve::HypPlusOpen { b, sqrt_delta } | Curve::HypPlusClosed { b, sqrt_delta } => {
                let c = if sqrt_delta > 0.0 { (l * l / q1.tanh().powi(2) - b) / sqrt_delta } else { 1.0 };
                PhasePoint::new(q1, self.y0 + s * 0.5 * c.clamp(-1.0, 1.0).acos(), s * pr, l)
            }
            Curve::AffineHyperbola { a, us } => {
                let dy = s * ((q1 * q1 - us * us).max(0.0) * l * l / a).sqrt();
                PhasePoint::new(q1, self.y0 + dy, a * dy / (l * q1), l)
            }
            Curve::AffineCrossing { a, us } => {
                let dy = s * ((q1 * q1 + us * us) * l * l / a).sqrt();
                PhasePoint::new(q1, self.y0 + dy, a * dy / (l * q1), l)
            }
            Curve::AffineArc { a, us } => {
                let dy = s * ((us * us - q1 * q1).max(0.0) * l * l / -a).sqrt();
                PhasePoint::new(q1, self.y0 + dy, a * dy / (l * q1), l)
            }
            Curve::AffineLines { a } => {
                let dy = s * q1 * l / a.sqrt();
                PhasePoint::new(q1, self.y0 + dy, s * a.sqrt(), l)
            }
            Curve::AffineParabola { bq } => {
                let dy = s * l * q1 * q1 / (2.0 * bq.sqrt());
                PhasePoint::new(q1, self.y0 + dy, s * bq.sqrt() / q1, l)
            }
        };
        Ok(p)
    }

    /// Polylines `(q1, q2)` sampling every branch of the curve; infinite
    /// domain ends are cut at a few times the finite scale.
    pub fn sample_curve(&self, n: usize) -> Vec<Vec<(f64, f64)>> {
        let mut lines = Vec::new();
        for &(a, b) in &self.domain {
            let hi = if b.is_finite() { b } else { 4.0 * a.max(0.5) + 2.0 };
            let (lo, hi) = (a + 1e-6 * (hi - a), hi - 1e-6 * (hi - a));
            for branch in [1.0, -1.0] {
                let line: Vec<(f64, f64)> = (0..n)
                    .filter_map(|i| {
                        let q1 = lo + (hi - lo) * i as f64 / (n.max(2) - 1) as f64;
                        self.point_on_curve(q1, branch).ok().map(|p| (p.q1, p.q2))
                    })
                    .filter(|p| p.1.is_finite())
                    .collect();
                if !line.is_empty() {
                    lines.push(line);
                }
            }
        }
        lines
    }
}

/// Right-hand side of the `cosh y = f(x)` TrigI curves (formula frame).
fn trig_cosh_rhs(curve: Curve, x: f64) -> f64 {
    let c = x.cos();
    match curve {
        Curve::TrigZeroBounded { cos_xs } => c.abs() / cos_xs,
        Curve::TrigSingle { eta, root } => (eta - c) / root,
        Curve::TrigSplit { eta, root } => (c - eta).abs() / root,
        _ => f64::NAN,
    }
}

/// `f(x)` of the `e^{εy} = f(x)` TrigI curves (formula frame).
fn trig_log_rhs(curve: Curve, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    match curve {
        Curve::TrigZeroWall => c.abs(),
        Curve::TrigCrossing { eta, abs_sigma } => {
            let w = (2.0 * eta * (abs_sigma - c) - s * s).max(0.0).sqrt();
            let w0 = (2.0 * eta * (abs_sigma - 1.0)).max(0.0).sqrt();
            (eta - c + w) / (eta - 1.0 + w0)
        }
        Curve::TrigWall { cos_xs } => {
            if c > cos_xs {
                (c - cos_xs) / (1.0 - cos_xs)
            } else {
                (cos_xs - c) / (cos_xs + 1.0)
            }
        }
        _ => f64::NAN,
    }
}

/// `(y, P_x)` on the `ε` branch of a logarithmic TrigI curve, with `y` anchored
/// at the chart edge as in the closed forms and `P_x = L/y'`.
fn trig_log_point(curve: Curve, x: f64, eps: f64, l: f64) -> Option<(f64, f64)> {
    let (s, c) = x.sin_cos();
    let f = trig_log_rhs(curve, x);
    if !(f > 0.0) {
        return None;
    }
    let y = eps * f.ln();
    let px = match curve {
        Curve::TrigZeroWall => -eps * l * c / s,
        Curve::TrigCrossing { eta, abs_sigma } => {
            let w = (2.0 * eta * (abs_sigma - c) - s * s).max(0.0).sqrt();
            eps * l * w / s
        }
        Curve::TrigWall { cos_xs } => {
            if c > cos_xs {
                -eps * l * (c - cos_xs) / s
            } else {
                eps * l * (cos_xs - c) / s
            }
        }
        _ => return None,
    };
    Some((y, px))
}

/// `|LHS − RHS|` of the regime's curve relation at the position of `p`.
pub fn curve_residual(regime: &GeodesicRegime, p: &PhasePoint) -> Result<f64> {
    if !regime.in_domain(p.q1) {
        return Err(Error::OutOfDomain(format!("q1 = {} not in {:?}", p.q1, regime.domain)));
    }
    let l2 = regime.l * regime.l;
    let e = regime.energy;
    let y = p.q2 - regime.y0;
    let x = regime.trig_x(p.q1);
    let scaled = |lhs: f64, rhs: f64| (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0);
    // e^{εy} = f on either branch
    let exp_gap = |f: f64| scaled(y.exp(), f).min(scaled((-y).exp(), f));
    Ok(match regime.curve {
        Curve::TrigZeroBounded { .. } | Curve::TrigSingle { .. } | Curve::TrigSplit { .. } => {
            scaled(y.cosh(), trig_cosh_rhs(regime.curve, x))
        }
        Curve::TrigZeroCrossing { sinh_theta } => {
            let rhs = x.cos() / sinh_theta;
            scaled(y.sinh(), rhs).min(scaled(-y.sinh(), rhs))
        }
        Curve::TrigZeroWall | Curve::TrigCrossing { .. } | Curve::TrigWall { .. } => {
            exp_gap(trig_log_rhs(regime.curve, x))
        }
        Curve::Hyp0Open { sqrt_delta } | Curve::Hyp0Closed { sqrt_delta } => {
            let lhs = l2 / (p.q1 * p.q1);
            (lhs - e - sqrt_delta * (2.0 * y).cos()).abs() / (e.abs() + sqrt_delta).max(1.0)
        }
        Curve::HypPlusOpen { b, sqrt_delta } | Curve::HypPlusClosed { b, sqrt_delta } => {
            let lhs = l2 / p.q1.tanh().powi(2);
            (lhs - b - sqrt_delta * (2.0 * y).cos()).abs() / (b.abs() + sqrt_delta).max(1.0)
        }
        Curve::AffineHyperbola { a, us } => {
            let u2 = p.q1 * p.q1;
            scaled(u2 - a / l2 * y * y, us * us)
        }
        Curve::AffineLines { a } => scaled(p.q1, (a / l2).sqrt() * y.abs()),
        Curve::AffineCrossing { a, us } => scaled(p.q1 * p.q1 + us * us, a / l2 * y * y),
        Curve::AffineParabola { bq } => scaled(y.abs(), regime.l * p.q1 * p.q1 / (2.0 * bq.sqrt())),
        Curve::AffineArc { a, us } => scaled(p.q1 * p.q1 - a / l2 * y * y, us * us),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trig(rho: f64, xi: f64) -> Model {
        Model::new(Family::TrigI, rho, xi).unwrap()
    }

    /// `(E, L)` realising given `(η, σ)` for TrigI with ρ = 0.5, L = 1.
    fn trig_torus(eta: f64, sigma: f64) -> (Model, f64, f64) {
        let rho = 0.5;
        let e = eta / rho;
        let xi = 2.0 * e * (1.0 + rho * sigma);
        (trig(rho, xi), e, 1.0)
    }

    #[test]
    fn radial_examples() {
        let v = radial_momentum_sq(&trig(0.5, -1.0), 0.0, 1.0, FRAC_PI_2).unwrap();
        assert!(v.abs() < 1e-15);
        let h0 = Model::new(Family::Hyp0, 1.0, 2.0).unwrap();
        assert!((radial_momentum_sq(&h0, 1.0, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let af = Model::new(Family::Affine, 2.0, 3.0).unwrap();
        for u in [0.3, 1.0, 7.0] {
            assert!((radial_momentum_sq(&af, 1.5, 1.0, u).unwrap() - (6.0 - 1.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn trig_single_eta_one() {
        let (m, e, l) = trig_torus(1.0, 0.0);
        let r = classify(&m, e, l).unwrap();
        assert_eq!(r.curve.tag(), "trig_single");
        let xs = r.turning_points[0];
        assert!((xs.cos() - (1.0 - 2f64.sqrt())).abs() < 1e-12);
        assert!((xs - 2.0).abs() < 0.01);
    }

    #[test]
    fn fig1_values_to_one_decimal() {
        for (eta, want) in [(0.1, 2.7), (1.0, 2.0), (10.0, 1.6)] {
            let (m, e, l) = trig_torus(eta, 0.0);
            let xs = turning_points(&m, e, l).unwrap()[0];
            assert!((xs - want).abs() < 0.05, "η = {eta}: {xs}");
        }
    }

    #[test]
    fn trig_no_motion_sigma_ge_one() {
        let (m, e, l) = trig_torus(0.7, 1.5);
        assert!(matches!(classify(&m, e, l), Err(Error::NoMotion(_))));
    }

    #[test]
    fn trig_zero_energy_cases() {
        let r = classify(&trig(0.5, -0.5), 0.0, 1.0).unwrap();
        assert_eq!(r.curve.tag(), "trig_zero_bounded");
        let xs = r.turning_points[0];
        assert!(curve_residual(&r, &PhasePoint::new(xs, 0.0, 0.0, 1.0)).unwrap() < 1e-15);
        let r = classify(&trig(0.5, -2.0), 0.0, 1.0).unwrap();
        assert!((r.param("theta").unwrap().sinh() - 1.0).abs() < 1e-15);
        assert_eq!(classify(&trig(0.5, -1.0), 0.0, 1.0).unwrap().curve.tag(), "trig_zero_wall");
        assert!(matches!(classify(&trig(0.5, 0.5), 0.0, 1.0), Err(Error::NoMotion(_))));
    }

    #[test]
    fn trig_sigma_below_minus_one_subcases() {
        // σ = −cosh θ with θ = 1: e^{−θ} ≈ 0.3679
        let sigma = -1f64.cosh();
        let tags: Vec<_> = [0.2, (-1f64).exp(), 0.9]
            .iter()
            .map(|&eta| {
                let (m, e, l) = trig_torus(eta, sigma);
                classify_with(&m, e, l, &ClassifyOptions { equality_tol: 1e-9 }).unwrap().curve.tag()
            })
            .collect();
        assert_eq!(tags, ["trig_split", "trig_wall", "trig_crossing"]);
    }

    #[test]
    fn hyp0_circular_orbit() {
        let m = Model::new(Family::Hyp0, 1.0, 2.0).unwrap();
        let ep = hyp0_e_plus(&m, 1.0);
        assert!((ep - (3f64.sqrt() - 1.0)).abs() < 1e-15);
        let r = classify(&m, ep, 1.0).unwrap();
        assert!(r.closed);
        assert!(r.eccentricity.unwrap() < 1e-7);
        let (a, b) = (r.turning_points[0], r.turning_points[1]);
        assert!((a - b).abs() < 1e-7);
        assert!(matches!(classify(&m, 0.5, 1.0), Err(Error::NoMotion(_))));
    }

    #[test]
    fn affine_lines_regime() {
        let m = Model::new(Family::Affine, 2.0, 3.0).unwrap();
        let r = classify(&m, 1.5, 1.0).unwrap();
        assert_eq!(r.curve.tag(), "affine_lines");
        let k = r.param("slope").unwrap();
        assert!((k - 5f64.sqrt()).abs() < 1e-15);
        let m = Model::new(Family::Affine, 1.0, 3.0).unwrap();
        assert!(matches!(classify(&m, 1.5, 3f64.sqrt()), Err(Error::DegenerateRegime(_))));
    }

    #[test]
    fn seeds_lie_on_their_torus() {
        let cases: Vec<(Model, f64, f64)> = vec![
            (trig(0.5, -0.5), 0.0, 1.0),
            (trig(0.5, -2.0), 0.0, 1.0),
            (trig(0.5, -1.0), 0.0, 1.0),
            trig_torus(1.0, 0.0),
            trig_torus(0.2, -1f64.cosh()),
            trig_torus(0.9, -1f64.cosh()),
            trig_torus(-0.4, 0.3),
            (Model::new(Family::Hyp0, 1.0, 2.0).unwrap(), 0.9, 1.0),
            (Model::new(Family::Hyp0, 1.0, 2.0).unwrap(), 1.5, 1.0),
            (Model::new(Family::HypPlus, 2.0, 8.0).unwrap(), 1.8, 1.0),
            (Model::new(Family::HypPlus, 2.0, 1.0).unwrap(), 1.0, 1.0),
            (Model::new(Family::Affine, 2.0, 3.0).unwrap(), 1.0, 1.0),
            (Model::new(Family::Affine, 2.0, 1.0).unwrap(), 1.0, 1.0),
            (Model::new(Family::Affine, 0.25, 1.0).unwrap(), 1.0, 1.0),
            (Model::new(Family::Affine, 0.5, 1.0).unwrap(), 1.0, 1.0),
        ];
        for (m, e, l) in cases {
            let r = classify(&m, e, l).unwrap();
            for s in r.seeds() {
                let h = m.hamiltonian(&s).unwrap();
                assert!((h - e).abs() < 1e-12 * e.abs().max(1.0), "{}: H = {h}, E = {e}", r.curve.tag());
                assert!(curve_residual(&r, &s).unwrap() < 1e-12, "{}", r.curve.tag());
            }
        }
    }
}
