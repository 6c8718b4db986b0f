//! Quadratic integrals of each family and numerical checks of the Poisson
//! algebra they close.
//!
//! [`poisson_bracket`] is canonical, `{q, p} = 1`. The relations printed for
//! these systems use the opposite sign convention, so they are checked through
//! [`reversed_bracket`], `{A, B}_rev = {B, A}`.

use crate::error::Result;
use crate::models::{trig_chi, Family, Model, PhasePoint};

/// Default finite-difference step for brackets.
pub const BRACKET_STEP: f64 = 1e-5;

/// `E`, the linear integral `L` (`P_y` or `P_φ`) and the two quadratic
/// integrals (`S₊, S₋` for TrigI).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConservedSet {
    pub e: f64,
    pub l: f64,
    pub s1: f64,
    pub s2: f64,
}

impl ConservedSet {
    pub fn to_array(self) -> [f64; 4] {
        [self.e, self.l, self.s1, self.s2]
    }
}

pub fn conserved_set(model: &Model, p: &PhasePoint) -> Result<ConservedSet> {
    let h = model.hamiltonian(p)?;
    let rho = model.rho();
    let PhasePoint { q1, q2, p1, p2 } = *p;
    let (s1, s2) = match model.family() {
        Family::TrigI => {
            let (s, c) = q1.sin_cos();
            let a = s * p1 * p2;
            let b = c * p2 * p2 - rho * h;
            (q2.exp() * (a + b), (-q2).exp() * (-a + b))
        }
        Family::Hyp0 => {
            let (sn, cs) = (2.0 * q2).sin_cos();
            let a = p1 * p2 / q1;
            let b = h - p2 * p2 / (q1 * q1);
            (cs * a + sn * b, -sn * a + cs * b)
        }
        Family::HypPlus => {
            let (sn, cs) = (2.0 * q2).sin_cos();
            let t2 = q1.tanh().powi(2);
            let a = p1 * p2 / q1.tanh();
            let b = h - (2.0 - t2) / (2.0 * t2) * p2 * p2;
            (cs * a + sn * b, -sn * a + cs * b)
        }
        Family::HypMinusLocal => {
            let (sn, cs) = q2.sin_cos();
            let a = q1.cosh() * p1 * p2;
            let b = q1.sinh() * p2 * p2 - h;
            (cs * a + sn * b, -sn * a + cs * b)
        }
        Family::Affine => {
            let (u, y) = (q1, q2);
            let k = 2.0 * rho * h - p2 * p2;
            let s1 = u * p1 * p2 - y * k;
            let s2 = 0.5 * (-u * u * p2 * p2 + 2.0 * y * u * p1 * p2 - y * y * k);
            (s1, s2)
        }
    };
    Ok(ConservedSet { e: h, l: p2, s1, s2 })
}

/// Canonical bracket `Σ ∂f/∂q·∂g/∂p − ∂f/∂p·∂g/∂q` by central differences;
/// the step in each coordinate is `h·max(1, |coordinate|)`.
pub fn poisson_bracket<F, G>(f: F, g: G, p: &PhasePoint, h: f64) -> Result<f64>
where
    F: Fn(&PhasePoint) -> Result<f64>,
    G: Fn(&PhasePoint) -> Result<f64>,
{
    let base = p.to_array();
    let grad = |fun: &dyn Fn(&PhasePoint) -> Result<f64>| -> Result<[f64; 4]> {
        let mut out = [0.0; 4];
        for i in 0..4 {
            let step = h * base[i].abs().max(1.0);
            let mut a = base;
            let mut b = base;
            a[i] += step;
            b[i] -= step;
            out[i] = (fun(&PhasePoint::from_array(a))? - fun(&PhasePoint::from_array(b))?) / (2.0 * step);
        }
        Ok(out)
    };
    let df = grad(&f)?;
    let dg = grad(&g)?;
    Ok(df[0] * dg[2] - df[2] * dg[0] + df[1] * dg[3] - df[3] * dg[1])
}

/// Bracket in the sign convention of the printed relations.
pub fn reversed_bracket<F, G>(f: F, g: G, p: &PhasePoint, h: f64) -> Result<f64>
where
    F: Fn(&PhasePoint) -> Result<f64>,
    G: Fn(&PhasePoint) -> Result<f64>,
{
    poisson_bracket(g, f, p, h)
}

/// `|{H, L}|, |{H, S1}|, |{H, S2}|`.
pub fn integral_brackets(model: &Model, p: &PhasePoint, h: f64) -> Result<[f64; 3]> {
    let hf = |q: &PhasePoint| model.hamiltonian(q);
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let g = move |q: &PhasePoint| -> Result<f64> {
            let c = conserved_set(model, q)?;
            Ok([c.l, c.s1, c.s2][k])
        };
        *slot = poisson_bracket(hf, g, p, h)?.abs();
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub name: &'static str,
    pub value: f64,
}

fn rel(name: &'static str, lhs: f64, rhs: f64) -> Residual {
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    Residual { name, value: (lhs - rhs).abs() / scale }
}

/// `|LHS − RHS| / max(1, |LHS|, |RHS|)` for every algebraic and bracket
/// relation stated for the family.
pub fn algebra_residuals(model: &Model, p: &PhasePoint) -> Result<Vec<Residual>> {
    algebra_residuals_with_step(model, p, BRACKET_STEP)
}

pub fn algebra_residuals_with_step(model: &Model, p: &PhasePoint, step: f64) -> Result<Vec<Residual>> {
    let cs = conserved_set(model, p)?;
    let (rho, xi) = (model.rho(), model.xi());
    let PhasePoint { q1, q2, p2, .. } = *p;
    let h = cs.e;
    let s1f = |q: &PhasePoint| conserved_set(model, q).map(|c| c.s1);
    let s2f = |q: &PhasePoint| conserved_set(model, q).map(|c| c.s2);
    let lf = |q: &PhasePoint| Ok(q.p2);
    let gen = |i: usize| move |q: &PhasePoint| model.generators(q).map(|g| g[i]);
    let pb = |f: &dyn Fn(&PhasePoint) -> Result<f64>, g: &dyn Fn(&PhasePoint) -> Result<f64>| {
        reversed_bracket(f, g, p, step)
    };

    let mut out = Vec::new();
    let sl2 = |out: &mut Vec<Residual>| -> Result<()> {
        let m = model.generators(p)?;
        out.push(rel("{M1,M2}=M3", pb(&gen(0), &gen(1))?, m[2]));
        out.push(rel("{M2,M3}=-M1", pb(&gen(1), &gen(2))?, -m[0]));
        out.push(rel("{M3,M1}=-M2", pb(&gen(2), &gen(0))?, -m[1]));
        Ok(())
    };

    match model.family() {
        Family::TrigI => {
            let (sp, sm) = (cs.s1, cs.s2);
            let alpha = 0.5 * (sp + sm) * q2.cosh() - 0.5 * (sp - sm) * q2.sinh();
            out.push(rel("alpha relation", alpha, p2 * p2 * q1.cos() - rho * h));
            let m = model.generators(p)?;
            let (_, x2) = trig_chi(q1);
            let x = model.embed(q1, q2)?;
            let w = (1.0 + x2 * x2).sqrt();
            let hg = w / (2.0 * (w + rho * x2)) * (m[0] * m[0] + m[1] * m[1] - m[2] * m[2] + xi);
            out.push(rel("H global form", h, hg));
            out.push(rel("(S+ + S-)/2 global form", 0.5 * (sp + sm), -m[1] * m[2] - rho * x[2] / w * h));
            out.push(rel("(S+ - S-)/2 global form", 0.5 * (sp - sm), m[0] * m[1] - rho * x[0] / w * h));
            sl2(&mut out)?;
            out.push(rel("{P_y,S+}=S+", pb(&lf, &s1f)?, sp));
            out.push(rel("{P_y,S-}=-S-", pb(&lf, &s2f)?, -sm));
        }
        Family::Hyp0 => {
            let g = model.generators(p)?;
            out.push(rel("{P1,P2}=0", pb(&gen(0), &gen(1))?, 0.0));
            out.push(rel("{L3,P1}=-P2", pb(&gen(2), &gen(0))?, -g[1]));
            out.push(rel("{L3,P2}=P1", pb(&gen(2), &gen(1))?, g[0]));
            let (x1, x2) = (q1 * q2.cos(), q1 * q2.sin());
            let r2 = x1 * x1 + x2 * x2;
            let lam = 1.0 + rho * r2;
            out.push(rel("H cartesian form", h, (g[0] * g[0] + g[1] * g[1] + xi * r2) / (2.0 * lam)));
            let fac = (-rho * (g[0] * g[0] + g[1] * g[1]) + xi) / lam;
            out.push(rel("S1 cartesian form", cs.s1, g[0] * g[1] + fac * x1 * x2));
            out.push(rel("2S2 cartesian form", 2.0 * cs.s2, g[0] * g[0] - g[1] * g[1] + fac * (x1 * x1 - x2 * x2)));
            out.push(rel("{P_phi,S1}=2S2", pb(&lf, &s1f)?, 2.0 * cs.s2));
            out.push(rel("{P_phi,S2}=-2S1", pb(&lf, &s2f)?, -2.0 * cs.s1));
        }
        Family::HypPlus => {
            sl2(&mut out)?;
            let m = model.generators(p)?;
            let x = model.embed(q1, q2)?;
            let rr = x[0] * x[0] + x[1] * x[1];
            let lam = 1.0 + rho * rr;
            let x3s = x[2] * x[2];
            let hg = (x3s * (m[0] * m[0] + m[1] * m[1] - m[2] * m[2]) + xi * rr) / (2.0 * lam);
            out.push(rel("H global form", h, hg));
            let w = x[1] * m[0] - x[0] * m[1];
            let fac = ((1.0 - rho) * (m[0] * m[0] + m[1] * m[1] + w * w) + xi * x3s) / (x3s * lam);
            out.push(rel("S1 global form", cs.s1, -m[0] * m[1] + fac * x[0] * x[1]));
            out.push(rel(
                "2S2 global form",
                2.0 * cs.s2,
                -m[0] * m[0] + m[1] * m[1] + fac * (x[0] * x[0] - x[1] * x[1]),
            ));
            let (sn, c2) = (2.0 * q2).sin_cos();
            let sh2 = q1.sinh().powi(2);
            out.push(rel(
                "alpha relation",
                cs.s1 * sn + cs.s2 * c2,
                h - (1.0 + q1.cosh().powi(2)) / (2.0 * sh2) * p2 * p2,
            ));
        }
        Family::HypMinusLocal => {
            out.push(rel("{P_y,S1}=S2", pb(&lf, &s1f)?, cs.s2));
            out.push(rel("{P_y,S2}=-S1", pb(&lf, &s2f)?, -cs.s1));
            out.push(rel("{S1,S2}", pb(&s1f, &s2f)?, p2 * (2.0 * p2 * p2 - 2.0 * rho * h + xi)));
            let p2s = p2 * p2;
            out.push(rel(
                "quartic Casimir",
                cs.s1 * cs.s1 + cs.s2 * cs.s2,
                h * h - p2s * p2s + p2s * (2.0 * rho * h - xi),
            ));
        }
        Family::Affine => {
            let p2s = p2 * p2;
            out.push(rel("{P_y,S2}=S1", pb(&lf, &s2f)?, cs.s1));
            out.push(rel("{P_y,S1}", pb(&lf, &s1f)?, p2s - 2.0 * rho * h));
            out.push(rel("{S1,S2}", pb(&s1f, &s2f)?, (2.0 * cs.s2 + 2.0 * h - xi) * p2));
            out.push(rel(
                "quadratic Casimir",
                cs.s1 * cs.s1 + 2.0 * (2.0 * rho * h - p2s) * cs.s2,
                (2.0 * h - xi) * p2s,
            ));
            let m = model.generators(p)?;
            let (u, y) = (q1, q2);
            let hg = (m[0] * m[0] + m[1] * m[1] - m[2] * m[2] + xi) / (2.0 * (1.0 + rho * u * u));
            out.push(rel("H global form", h, hg));
            out.push(rel("S1 global form", cs.s1, -m[0] * (m[1] - m[2]) - 2.0 * rho * y * h));
            out.push(rel("2S2 global form", 2.0 * cs.s2, m[2] * m[2] - m[1] * m[1] - 2.0 * rho * y * y * h));
            sl2(&mut out)?;
            let x = model.embed(u, y)?;
            let d = 1.0 + x[0] * x[0];
            out.push(rel("u from embedding", u, (x[1] + x[2]) / d));
            out.push(rel("y from embedding", y, x[0] * (x[1] + x[2]) / d));
        }
    }
    Ok(out)
}
