//! The five Koenigs charts: parameter validation, Hamiltonian, metric,
//! curvature, embedding and symmetry generators.
//!
//! Every Hamiltonian has the separable shape
//!
//! ```text
//! H = (α(q1) p1² + β(q1) p2² + γ(q1)) / 2
//! ```
//!
//! so the metric is diagonal with `g11 = 1/α`, `g22 = 1/β` and the potential
//! is `V = γ/2`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::dual::{Dual, Scalar};
use crate::error::{domain, Error, Result};

/// Positions closer than this to a chart edge are rejected.
pub const CHART_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `(x, y) ∈ (0, π) × ℝ`
    TrigI,
    /// `(r, φ) ∈ (0, ∞) × S¹`
    Hyp0,
    /// `(χ, φ) ∈ (0, ∞) × S¹`
    HypPlus,
    /// `(x, y)` with `sinh x + ρ > 0`; local only
    HypMinusLocal,
    /// `(u, y) ∈ (0, ∞) × ℝ`
    Affine,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::TrigI,
        Family::Hyp0,
        Family::HypPlus,
        Family::HypMinusLocal,
        Family::Affine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::TrigI => "trig",
            Family::Hyp0 => "h0",
            Family::HypPlus => "hplus",
            Family::HypMinusLocal => "hminus",
            Family::Affine => "affine",
        }
    }

    /// True when the second coordinate is an angle.
    pub fn angular(self) -> bool {
        matches!(self, Family::Hyp0 | Family::HypPlus)
    }

    pub fn is_global(self) -> bool {
        self != Family::HypMinusLocal
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "trig" | "trigi" => Ok(Family::TrigI),
            "h0" | "hyp0" => Ok(Family::Hyp0),
            "hplus" | "hypplus" => Ok(Family::HypPlus),
            "hminus" | "hypminus" | "hypminuslocal" => Ok(Family::HypMinusLocal),
            "affine" => Ok(Family::Affine),
            other => domain(format!("unknown family `{other}`")),
        }
    }
}

/// A phase-space point in the family chart.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct PhasePoint {
    pub q1: f64,
    pub q2: f64,
    pub p1: f64,
    pub p2: f64,
}

impl PhasePoint {
    pub fn new(q1: f64, q2: f64, p1: f64, p2: f64) -> Self {
        PhasePoint { q1, q2, p1, p2 }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.q1, self.q2, self.p1, self.p2]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        PhasePoint::new(a[0], a[1], a[2], a[3])
    }
}

/// A validated `(family, ρ, ξ)` triple.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Model {
    family: Family,
    rho: f64,
    xi: f64,
}

pub fn validate_model(family: Family, rho: f64, xi: f64) -> Result<Model> {
    Model::new(family, rho, xi)
}

impl Model {
    pub fn new(family: Family, rho: f64, xi: f64) -> Result<Model> {
        if !rho.is_finite() || !xi.is_finite() {
            return domain("ρ and ξ must be finite");
        }
        match family {
            Family::TrigI => {
                if rho == 0.0 || rho.abs() == 1.0 {
                    return Err(Error::ConstantCurvature(format!("TrigI with ρ = {rho}")));
                }
                if !(0.0 < rho && rho < 1.0) {
                    return domain(format!("TrigI requires ρ ∈ (0, 1), got {rho}"));
                }
            }
            Family::Hyp0 | Family::Affine => {
                if rho <= 0.0 {
                    return domain(format!("{family} requires ρ > 0, got {rho}"));
                }
            }
            Family::HypPlus => {
                if rho == 1.0 {
                    return Err(Error::ConstantCurvature("HypPlus with ρ = 1".into()));
                }
                if rho <= 0.0 {
                    return domain(format!("HypPlus requires ρ ∈ (0,1) ∪ (1,∞), got {rho}"));
                }
            }
            Family::HypMinusLocal => {}
        }
        Ok(Model { family, rho, xi })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Same family and ρ with a different ξ.
    pub fn with_xi(&self, xi: f64) -> Model {
        Model { xi, ..*self }
    }

    /// Distance of `q1` to the nearest chart edge (positive inside).
    pub fn edge_distance(&self, q1: f64) -> f64 {
        match self.family {
            Family::TrigI => q1.min(PI - q1),
            Family::Hyp0 | Family::HypPlus | Family::Affine => q1,
            Family::HypMinusLocal => q1.sinh() + self.rho,
        }
    }

    pub fn check_chart(&self, q1: f64) -> Result<()> {
        let d = self.edge_distance(q1);
        if !q1.is_finite() || !(d > CHART_EPS) {
            return Err(Error::Chart(format!(
                "q1 = {q1} is outside the open {} chart",
                self.family
            )));
        }
        Ok(())
    }

    /// Reduces the angle of the angular families to `[0, 2π)`.
    pub fn normalize(&self, p: PhasePoint) -> PhasePoint {
        if self.family.angular() {
            PhasePoint { q2: p.q2.rem_euclid(TAU), ..p }
        } else {
            p
        }
    }

    /// `(α, β, γ)` at `q1`, generic so the flow can differentiate them.
    pub(crate) fn coeffs<T: Scalar>(&self, q1: T) -> (T, T, T) {
        let (rho, xi) = (self.rho, self.xi);
        let one = T::cst(1.0);
        match self.family {
            Family::TrigI => {
                let s = q1.sin();
                let lam = one - q1.cos() * rho;
                let a = s * s / lam;
                (a, a, one * xi / lam)
            }
            Family::Hyp0 => {
                let r2 = q1 * q1;
                let lam = one + r2 * rho;
                (one / lam, one / (r2 * lam), r2 * xi / lam)
            }
            Family::HypPlus => {
                let s = q1.sinh();
                let c = q1.cosh();
                let t = q1.tanh();
                let lam = one + s * s * rho;
                (c * c / lam, one / (t * t * lam), s * s * xi / lam)
            }
            Family::HypMinusLocal => {
                let c = q1.cosh();
                let w = q1.sinh() + rho;
                (c * c / w, c * c / w, one * xi / w)
            }
            Family::Affine => {
                let u2 = q1 * q1;
                let lam = one + u2 * rho;
                (u2 / lam, u2 / lam, one * xi / lam)
            }
        }
    }

    /// `(α, β, γ)` and their q1-derivatives.
    pub(crate) fn coeffs_with_derivative(&self, q1: f64) -> ([f64; 3], [f64; 3]) {
        let (a, b, c) = self.coeffs(Dual::var(q1));
        ([a.v, b.v, c.v], [a.d, b.d, c.d])
    }

    /// Hamiltonian written out per family, independently of [`Model::coeffs`].
    pub fn hamiltonian(&self, p: &PhasePoint) -> Result<f64> {
        self.check_chart(p.q1)?;
        let (rho, xi) = (self.rho, self.xi);
        let PhasePoint { q1, p1, p2, .. } = *p;
        let h = match self.family {
            Family::TrigI => {
                let s = q1.sin();
                (s * s * (p1 * p1 + p2 * p2) + xi) / (2.0 * (1.0 - rho * q1.cos()))
            }
            Family::Hyp0 => {
                let r2 = q1 * q1;
                (p1 * p1 + p2 * p2 / r2 + xi * r2) / (2.0 * (1.0 + rho * r2))
            }
            Family::HypPlus => {
                let (s, c, t) = (q1.sinh(), q1.cosh(), q1.tanh());
                (c * c * p1 * p1 + p2 * p2 / (t * t) + xi * s * s) / (2.0 * (1.0 + rho * s * s))
            }
            Family::HypMinusLocal => {
                let c = q1.cosh();
                (c * c * (p1 * p1 + p2 * p2) + xi) / (2.0 * (q1.sinh() + rho))
            }
            Family::Affine => {
                let u2 = q1 * q1;
                (u2 * (p1 * p1 + p2 * p2) + xi) / (2.0 * (1.0 + rho * u2))
            }
        };
        Ok(h)
    }

    /// Diagonal metric components `(g11, g22)`.
    pub fn metric_components(&self, q1: f64) -> Result<(f64, f64)> {
        self.check_chart(q1)?;
        let rho = self.rho;
        Ok(match self.family {
            Family::TrigI => {
                let g = (1.0 - rho * q1.cos()) / q1.sin().powi(2);
                (g, g)
            }
            Family::Hyp0 => {
                let lam = 1.0 + rho * q1 * q1;
                (lam, lam * q1 * q1)
            }
            Family::HypPlus => {
                let lam = 1.0 + rho * q1.sinh().powi(2);
                (lam / q1.cosh().powi(2), lam * q1.tanh().powi(2))
            }
            Family::HypMinusLocal => {
                let g = (q1.sinh() + rho) / q1.cosh().powi(2);
                (g, g)
            }
            Family::Affine => {
                let g = (1.0 + rho * q1 * q1) / (q1 * q1);
                (g, g)
            }
        })
    }

    /// The potential `V(q1)` added to the geodesic Hamiltonian.
    pub fn potential(&self, q1: f64) -> Result<f64> {
        self.check_chart(q1)?;
        Ok(0.5 * self.coeffs(q1).2)
    }

    /// Scalar curvature `R = 2K` from closed forms.
    pub fn scalar_curvature(&self, q1: f64) -> Result<f64> {
        self.check_chart(q1)?;
        let rho = self.rho;
        Ok(match self.family {
            Family::TrigI => {
                // R = -(ln λ)''/λ for the conformal factor λ = (1 - ρ cos x)/sin²x
                let (s, c) = q1.sin_cos();
                let w = 1.0 - rho * c;
                let ddlog = rho * c / w - (rho * s / w).powi(2) + 2.0 / (s * s);
                -ddlog * s * s / w
            }
            Family::Hyp0 => -4.0 * rho / (1.0 + rho * q1 * q1).powi(3),
            Family::HypPlus => {
                // same surface as the (x, ρ̃) form with cosh x = (cosh²χ + 1)/sinh²χ,
                // ρ̃ = 2ρ - 1, up to the factor 2 from the rescaling
                let rt = 2.0 * rho - 1.0;
                let s2 = q1.sinh().powi(2);
                let cx = (s2 + 2.0) / s2;
                let w = cx + rt;
                let r = -rt - (1.0 - rt * rt) * (3.0 * cx * cx + 3.0 * rt * cx + rt * rt - 1.0) / w.powi(3);
                2.0 * r
            }
            Family::HypMinusLocal => {
                let s = q1.sinh();
                let w = s + rho;
                -rho + (1.0 + rho * rho) * (3.0 * s * s + 3.0 * rho * s + rho * rho + 1.0) / w.powi(3)
            }
            Family::Affine => {
                let u2 = q1 * q1;
                -2.0 * (3.0 * rho * u2 + 1.0) / (1.0 + rho * u2).powi(3)
            }
        })
    }

    /// Brioschi formula for a diagonal metric depending on `q1` only, with
    /// nested central differences of step `1e-4·max(1, |q1|)`.
    pub fn brioschi_curvature(&self, q1: f64) -> Result<f64> {
        self.brioschi_curvature_with_step(q1, 1e-4 * q1.abs().max(1.0))
    }

    /// Brioschi estimate with an explicit difference step `h`.
    pub fn brioschi_curvature_with_step(&self, q1: f64, h: f64) -> Result<f64> {
        self.check_chart(q1 - 2.0 * h)?;
        self.check_chart(q1 + 2.0 * h)?;
        let flux = |u: f64| -> Result<f64> {
            let (e, g) = self.metric_components(u)?;
            let gp = (self.metric_components(u + h)?.1 - self.metric_components(u - h)?.1) / (2.0 * h);
            Ok(gp / (e * g).sqrt())
        };
        let (e, g) = self.metric_components(q1)?;
        let k = -(flux(q1 + h)? - flux(q1 - h)?) / (2.0 * h) / (2.0 * (e * g).sqrt());
        Ok(2.0 * k)
    }

    /// Canonical embedding: the hyperboloid `x1² + x2² - x3² = -1` for the
    /// H² families, `(x1, x2, 0)` in the plane for Hyp0.
    pub fn embed(&self, q1: f64, q2: f64) -> Result<[f64; 3]> {
        if !self.family.is_global() {
            return Err(Error::NoGlobalStructure);
        }
        self.check_chart(q1)?;
        Ok(match self.family {
            Family::TrigI => {
                let (ch, sh) = trig_chi(q1);
                [ch * q2.sinh(), sh, ch * q2.cosh()]
            }
            Family::Hyp0 => [q1 * q2.cos(), q1 * q2.sin(), 0.0],
            Family::HypPlus => {
                let s = q1.sinh();
                [s * q2.cos(), s * q2.sin(), q1.cosh()]
            }
            Family::Affine => {
                let (u, y) = (q1, q2);
                [y / u, (u * u + y * y - 1.0) / (2.0 * u), (u * u + y * y + 1.0) / (2.0 * u)]
            }
            Family::HypMinusLocal => unreachable!(),
        })
    }

    /// Values of the three symmetry generators: `(M1, M2, M3)` for the
    /// sl(2,ℝ) families, `(P1, P2, L3)` for Hyp0.
    pub fn generators(&self, p: &PhasePoint) -> Result<[f64; 3]> {
        if !self.family.is_global() {
            return Err(Error::NoGlobalStructure);
        }
        self.check_chart(p.q1)?;
        let PhasePoint { q1, q2, p1, p2 } = *p;
        Ok(match self.family {
            Family::TrigI => {
                let pchi = q1.sin() * p1;
                let th = -q1.cos();
                let (sy, cy) = (q2.sinh(), q2.cosh());
                [cy * pchi - th * sy * p2, p2, -sy * pchi + th * cy * p2]
            }
            Family::Hyp0 => {
                let (s, c) = q2.sin_cos();
                let pa = c * p1 - s / q1 * p2;
                let pb = s * p1 + c / q1 * p2;
                let (x1, x2) = (q1 * c, q1 * s);
                [pa, pb, x1 * pb - x2 * pa]
            }
            Family::HypPlus => {
                let (s, c) = q2.sin_cos();
                let t = q1.tanh();
                [s * p1 + c / t * p2, -c * p1 + s / t * p2, p2]
            }
            Family::Affine => {
                let (u, y) = (q1, q2);
                [
                    u * p1 + y * p2,
                    u * y * p1 + 0.5 * (y * y - u * u - 1.0) * p2,
                    u * y * p1 + 0.5 * (y * y - u * u + 1.0) * p2,
                ]
            }
            Family::HypMinusLocal => unreachable!(),
        })
    }
}

/// `(cosh χ, sinh χ)` for the TrigI coordinate `χ = ln tan(x/2)`.
pub(crate) fn trig_chi(x: f64) -> (f64, f64) {
    let s = x.sin();
    (1.0 / s, -x.cos() / s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(f: Family, rho: f64, xi: f64) -> Model {
        Model::new(f, rho, xi).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(Model::new(Family::TrigI, 0.5, -1.0).is_ok());
        assert!(matches!(
            Model::new(Family::HypPlus, 1.0, 2.0),
            Err(Error::ConstantCurvature(_))
        ));
        assert!(matches!(Model::new(Family::TrigI, 1.5, 0.0), Err(Error::Domain(_))));
        assert!(matches!(
            Model::new(Family::TrigI, 0.0, 0.0),
            Err(Error::ConstantCurvature(_))
        ));
        assert!(Model::new(Family::HypMinusLocal, -3.0, 1.0).is_ok());
    }

    #[test]
    fn hamiltonian_examples() {
        let p = PhasePoint::new(PI / 2.0, 0.0, 1.0, 1.0);
        assert!((m(Family::TrigI, 0.5, 0.0).hamiltonian(&p).unwrap() - 1.0).abs() < 1e-15);
        let p = PhasePoint::new(1.0, 0.0, 0.0, 0.0);
        assert!((m(Family::Hyp0, 1.0, 2.0).hamiltonian(&p).unwrap() - 0.5).abs() < 1e-15);
        assert!((m(Family::Affine, 2.0, 4.0).hamiltonian(&p).unwrap() - 4.0 / 6.0).abs() < 1e-15);
        let edge = PhasePoint::new(0.0, 0.0, 1.0, 1.0);
        assert!(matches!(
            m(Family::TrigI, 0.5, 0.0).hamiltonian(&edge),
            Err(Error::Chart(_))
        ));
    }

    #[test]
    fn metric_examples() {
        let (a, b) = m(Family::TrigI, 0.5, 0.0).metric_components(PI / 2.0).unwrap();
        assert!((a - 1.0).abs() < 1e-15 && (b - 1.0).abs() < 1e-15);
        assert_eq!(m(Family::Hyp0, 1.0, 0.0).metric_components(2.0).unwrap(), (5.0, 20.0));
        let x = 1f64.asinh();
        let (g, _) = m(Family::HypMinusLocal, 0.0, 0.0).metric_components(x).unwrap();
        assert!((g - 0.5).abs() < 1e-15);
    }

    #[test]
    fn curvature_examples() {
        let r = m(Family::Hyp0, 2.0, 0.0).scalar_curvature(1e-9).unwrap();
        assert!((r + 8.0).abs() < 1e-12);
        assert!(m(Family::Hyp0, 1.0, 0.0).scalar_curvature(1e4).unwrap().abs() < 1e-20);
        let t = m(Family::TrigI, 0.5, 0.0);
        assert!((t.scalar_curvature(PI / 2.0).unwrap() + 1.75).abs() < 1e-14);
        let b = t.brioschi_curvature(PI / 2.0).unwrap();
        assert!((b + 1.75).abs() < 1e-6);
    }

    #[test]
    fn embed_examples() {
        let e = m(Family::TrigI, 0.5, 0.0).embed(PI / 2.0, 0.0).unwrap();
        assert!(e[0].abs() < 1e-15 && e[1].abs() < 1e-15 && (e[2] - 1.0).abs() < 1e-15);
        let e = m(Family::HypPlus, 2.0, 0.0).embed(1e-11, 1.3).unwrap();
        assert!((e[2] - 1.0).abs() < 1e-15);
        assert_eq!(m(Family::Affine, 2.0, 0.0).embed(1.0, 0.0).unwrap(), [0.0, 0.0, 1.0]);
        assert!(matches!(
            m(Family::HypMinusLocal, 0.0, 0.0).embed(1.0, 0.0),
            Err(Error::NoGlobalStructure)
        ));
    }

    #[test]
    fn generator_examples() {
        let g = m(Family::Hyp0, 1.0, 0.0).generators(&PhasePoint::new(1.0, 0.0, 1.0, 0.0)).unwrap();
        assert_eq!(g, [1.0, 0.0, 0.0]);
        let g = m(Family::Affine, 1.0, 0.0).generators(&PhasePoint::new(1.0, 0.0, 1.0, 0.0)).unwrap();
        assert_eq!(g[0], 1.0);
        // χ = 0 is x = π/2 and P_χ = sin x · P_x
        let g = m(Family::TrigI, 0.5, 0.0).generators(&PhasePoint::new(PI / 2.0, 0.0, 2.0, 3.0)).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-15 && g[1] == 3.0 && g[2].abs() < 1e-15);
    }

    #[test]
    fn family_names_roundtrip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
    }
}
