//! Orthogonal polynomials, terminating Gauss series, and the change of basis
//! between the Laguerre (polar) and Hermite (Cartesian) oscillator states.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

pub fn laguerre(n: usize, alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return domain(format!("Laguerre needs α > −1, got {alpha}"));
    }
    let (mut p0, mut p1) = (1.0, 1.0 + alpha - x);
    if n == 0 {
        return Ok(p0);
    }
    for k in 1..n {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0 + alpha - x) * p1 - (k + alpha) * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    Ok(p1)
}

pub fn jacobi(n: usize, a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > -1.0 && b > -1.0) {
        return domain(format!("Jacobi needs a, b > −1, got ({a}, {b})"));
    }
    let (mut p0, mut p1) = (1.0, (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0));
    if n == 0 {
        return Ok(p0);
    }
    for k in 1..n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let c0 = 2.0 * (k + 1.0) * (k + a + b + 1.0) * s;
        let c1 = (s + 1.0) * ((s + 2.0) * s * x + a * a - b * b);
        let c2 = 2.0 * (k + a) * (k + b) * (s + 2.0);
        let p2 = (c1 * p1 - c2 * p0) / c0;
        p0 = p1;
        p1 = p2;
    }
    Ok(p1)
}

/// Physicists' Hermite polynomial.
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, 2.0 * x);
    if n == 0 {
        return p0;
    }
    for k in 1..n {
        let p2 = 2.0 * x * p1 - 2.0 * k as f64 * p0;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `₂F₁(−k, b; c; z)` for integer `k ≥ 0`, as the finite Pochhammer sum.
pub fn hyp2f1_terminating(neg_k: i64, b: f64, c: f64, z: f64) -> Result<f64> {
    if neg_k > 0 {
        return domain(format!("first parameter {neg_k} does not terminate the series"));
    }
    let k = (-neg_k) as usize;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..k {
        let jf = j as f64;
        let den = c + jf;
        if den == 0.0 {
            return domain(format!("c = {c} hits a nonpositive integer before the series ends"));
        }
        term *= (neg_k as f64 + jf) * (b + jf) / (den * (jf + 1.0)) * z;
        sum += term;
    }
    Ok(sum)
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Nodes and weights of the `n`-point Gauss–Laguerre rule for `∫₀^∞ e^{−x} f`.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let mut z: f64 = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - x[i - 2])
            }
        };
        let (mut pp, mut p2) = (0.0, 0.0);
        for _ in 0..100 {
            let (mut p1, mut q) = (1.0, 0.0);
            for j in 0..n {
                let p3 = q;
                q = p1;
                p1 = ((2.0 * j as f64 + 1.0 - z) * q - j as f64 * p3) / (j as f64 + 1.0);
            }
            p2 = q;
            pp = (nf * p1 - nf * p2) / z;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs() {
                break;
            }
        }
        x[i] = z;
        w[i] = -1.0 / (pp * nf * p2);
    }
    (x, w)
}

/// `ℋ_{n₁,n₂}(ζ, φ) = e^{−ζ/2} H_{n₁}(√ζ cos φ) H_{n₂}(√ζ sin φ)`.
pub fn hermite_state(n1: usize, n2: usize, zeta: f64, phi: f64) -> f64 {
    let s = zeta.sqrt();
    (-0.5 * zeta).exp() * hermite(n1, s * phi.cos()) * hermite(n2, s * phi.sin())
}

/// `Ψ_{n,m}(ζ, φ) = e^{−ζ/2} ζ^{|m|/2} L_n^{|m|}(ζ) e^{imφ}`.
pub fn laguerre_state(n: usize, m: i64, zeta: f64, phi: f64) -> Complex64 {
    let am = m.unsigned_abs() as usize;
    let radial = (-0.5 * zeta).exp() * zeta.powf(0.5 * am as f64) * laguerre(n, am as f64, zeta).unwrap();
    Complex64::from_polar(radial, m as f64 * phi)
}

/// Coefficients `c^{n₁,n₂}_{n,m}` of `Ψ_{n,m} = Σ c ℋ_{n₁,n₂}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffTable {
    pub n: usize,
    pub m: i64,
    pub entries: BTreeMap<(usize, usize), Complex64>,
}

impl CoeffTable {
    /// Zero off the diagonal `n₁ + n₂ = 2n + |m|`.
    pub fn get(&self, n1: usize, n2: usize) -> Complex64 {
        self.entries.get(&(n1, n2)).copied().unwrap_or_default()
    }

    pub fn resum(&self, zeta: f64, phi: f64) -> Complex64 {
        self.entries.iter().map(|(&(a, b), c)| c * hermite_state(a, b, zeta, phi)).sum()
    }
}

fn i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Closed-form table from the two Gauss sums over `ν ≤ n` and `ν > n`.
pub fn basis_coefficients(n: usize, m: i64) -> CoeffTable {
    let am = m.unsigned_abs() as usize;
    let big = 2 * n + am;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let scale = sign / (2f64.powi(big as i32) * factorial(n));
    let mut entries = BTreeMap::new();
    for nu in 0..=big {
        let c = if nu <= n {
            let f = hyp2f1_terminating(-(nu as i64), -((am + n) as f64), (n - nu + 1) as f64, -1.0).unwrap();
            i_pow(nu + am) * binomial(n, nu) * f
        } else {
            let f = hyp2f1_terminating(nu as i64 - big as i64, -(n as f64), (nu - n + 1) as f64, -1.0).unwrap();
            i_pow(3 * nu + 2 * n + am) * binomial(am + n, nu - n) * f
        };
        let c = c * scale;
        entries.insert((nu, big - nu), if m < 0 { c.conj() } else { c });
    }
    CoeffTable { n, m, entries }
}

/// `c^{n₁,n₂}_{n,m}` by projecting `Ψ_{n,m}` on `ℋ_{n₁,n₂}`:
/// `(1/(2π 2^{n₁+n₂} n₁! n₂!)) ∫∫ ℋ Ψ dζ dφ`, Gauss–Laguerre in `ζ` and the
/// trapezoid rule in `φ` (exact for the trigonometric degrees involved).
pub fn coefficient_oracle(n: usize, m: i64, n1: usize, n2: usize) -> Result<Complex64> {
    let am = m.unsigned_abs() as usize;
    let deg = n1 + n2 + 2 * n + am;
    let n_phi = (8 * (2 * n + am + 1)).max(2 * deg + 4);
    let (zs, ws) = gauss_laguerre(40.max(deg / 2 + 2));
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n_phi {
        let phi = 2.0 * PI * k as f64 / n_phi as f64;
        let (c, s) = (phi.cos(), phi.sin());
        let rot = Complex64::from_polar(1.0, m as f64 * phi);
        for (&z, &w) in zs.iter().zip(&ws) {
            // both states carry e^{−ζ/2}; the product's e^{−ζ} is the rule's weight
            let sz = z.sqrt();
            let h = hermite(n1, sz * c) * hermite(n2, sz * s);
            let radial = z.powf(0.5 * am as f64) * laguerre(n, am as f64, z)?;
            acc += rot * (w * h * radial);
        }
    }
    let v = acc * (2.0 * PI / n_phi as f64);
    let norm = 2.0 * PI * 2f64.powi((n1 + n2) as i32) * factorial(n1) * factorial(n2);
    let out = v / norm;
    if !(out.re.is_finite() && out.im.is_finite()) {
        return Err(Error::QuadratureFailure("non-finite projection".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_polynomial_examples() {
        assert_eq!(laguerre(0, 0.7, 3.0).unwrap(), 1.0);
        assert_eq!(hermite(2, 0.0), -2.0);
        assert!((jacobi(1, 0.3, 1.7, 1.0).unwrap() - 1.3).abs() < 1e-15);
        assert!(laguerre(2, -1.0, 1.0).is_err());
    }

    #[test]
    fn hyp2f1_small_cases() {
        assert_eq!(hyp2f1_terminating(0, 2.0, 3.0, 0.5).unwrap(), 1.0);
        assert!((hyp2f1_terminating(-1, 2.0, 3.0, 0.5).unwrap() - (1.0 - 2.0 * 0.5 / 3.0)).abs() < 1e-15);
        // (−2)_j(−2)_j/((1)_j j!)(−1)^j: 1 − 4 + 1
        assert!((hyp2f1_terminating(-2, -2.0, 1.0, -1.0).unwrap() - (1.0 - 4.0 + 1.0)).abs() < 1e-15);
        assert!(hyp2f1_terminating(1, 1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn gauss_laguerre_moments() {
        let (x, w) = gauss_laguerre(40);
        for k in 0..20 {
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            assert!((s / factorial(k as usize) - 1.0).abs() < 1e-11, "k = {k}: {s}");
        }
    }

    #[test]
    fn first_tables() {
        let t = basis_coefficients(0, 0);
        assert_eq!(t.get(0, 0), Complex64::new(1.0, 0.0));
        let t = basis_coefficients(0, 1);
        assert!((t.get(1, 0) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((t.get(0, 1) - Complex64::new(0.0, 0.5)).norm() < 1e-15);
    }
}
