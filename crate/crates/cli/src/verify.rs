//! The invariant suite behind `koenigs verify`: one check per stated
//! invariant of each module, each at its pinned tolerance.

use std::f64::consts::PI;

use koenigs::actions::{action_quadrature, action_variables, closed_window, energy_from_j};
use koenigs::flow::{drift_report, integrate, integrate_with, time_reversed, FlowOptions, Trajectory};
use koenigs::geodesics::{classify, classify_with, curve_residual, radial_momentum_sq, ClassifyOptions, Curve};
use koenigs::invariants::{algebra_residuals, conserved_set, integral_brackets, BRACKET_STEP};
use koenigs::quad::bisect;
use koenigs::quantum::{
    bound_state_count, eigenfunction_norm_sq, level_energy, shoot_eigenvalue, spectrum, xi_tilde,
};
use koenigs::specfun::{basis_coefficients, coefficient_oracle, laguerre_state};
use koenigs::{Error, Family, Model, PhasePoint};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Command, Format, RunConfig, Suite};

pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(module: &'static str, name: &'static str, pass: bool, detail: String) -> Self {
        Check { module, name, pass, detail }
    }

    fn failed(module: &'static str, name: &'static str, e: Error) -> Self {
        Check::new(module, name, false, format!("error: {e}"))
    }
}

/// Runs the checks of `suite`; `tol` is the integrator tolerance of the flow
/// checks, `seed` drives every random draw.
pub fn run_suite(suite: Suite, tol: f64, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let want = |s: Suite| suite == Suite::All || suite == s;
    if want(Suite::Models) {
        out.extend(models(&mut rng));
    }
    if want(Suite::Invariants) {
        out.extend(invariants(&mut rng));
    }
    if want(Suite::Geodesics) {
        out.extend(geodesics(tol));
    }
    if want(Suite::Flow) {
        out.extend(flow(&mut rng, tol));
    }
    if want(Suite::Actions) {
        out.extend(actions());
    }
    if want(Suite::Quantum) {
        out.extend(quantum(&mut rng));
    }
    if want(Suite::Specfun) {
        out.extend(specfun(&mut rng));
    }
    if want(Suite::Cli) {
        out.extend(cli(seed));
    }
    out
}

/// Unit-scale random phase point: polar families keep clear of `r = 0`,
/// momenta carry kinetic energy in `[0, 2]`.
fn random_point(rng: &mut ChaCha8Rng, fam: Family) -> (Model, PhasePoint) {
    loop {
        let rho = match fam {
            Family::TrigI => rng.gen_range(0.05..0.95),
            Family::HypMinusLocal => rng.gen_range(-2.0..2.0),
            _ => rng.gen_range(0.1..3.0),
        };
        let xi = rng.gen_range(-3.0..3.0);
        let Ok(m) = Model::new(fam, rho, xi) else { continue };
        let q1 = match fam {
            Family::TrigI => rng.gen_range(0.2..PI - 0.2),
            Family::HypMinusLocal => (-rho as f64).asinh() + rng.gen_range(0.3..3.0),
            Family::Hyp0 | Family::HypPlus => rng.gen_range(0.5..3.0),
            Family::Affine => rng.gen_range(0.2..3.0),
        };
        let q2 = if fam.angular() { rng.gen_range(-PI..PI) } else { rng.gen_range(-1.0..1.0) };
        let dir: f64 = rng.gen_range(0.0..2.0 * PI);
        let kinetic = rng.gen_range(0.0..2.0);
        let unit = PhasePoint::new(q1, q2, dir.cos(), dir.sin());
        let (Ok(h1), Ok(v)) = (m.hamiltonian(&unit), m.potential(q1)) else { continue };
        let k = (kinetic / (h1 - v)).sqrt();
        return (m, PhasePoint::new(q1, q2, k * dir.cos(), k * dir.sin()));
    }
}

/// Worst value of `f` over `n` random points of every family.
fn worst_over_points(
    rng: &mut ChaCha8Rng,
    n: usize,
    families: &[Family],
    f: impl Fn(&Model, &PhasePoint) -> koenigs::Result<f64>,
) -> koenigs::Result<f64> {
    let mut worst: f64 = 0.0;
    for &fam in families {
        for _ in 0..n {
            let (m, p) = random_point(rng, fam);
            worst = worst.max(f(&m, &p)?);
        }
    }
    Ok(worst)
}

fn bound_check(module: &'static str, name: &'static str, v: koenigs::Result<f64>, bound: f64) -> Check {
    match v {
        Ok(v) => Check::new(module, name, v < bound, format!("worst {v:.2e} (bound {bound:.0e})")),
        Err(e) => Check::failed(module, name, e),
    }
}

fn models(rng: &mut ChaCha8Rng) -> Vec<Check> {
    const M: &str = "models";
    let mut out = Vec::new();
    let v = worst_over_points(rng, 1000, &Family::ALL, |m, p| {
        let (g11, g22) = m.metric_components(p.q1)?;
        let h = 0.5 * (p.p1 * p.p1 / g11 + p.p2 * p.p2 / g22) + m.potential(p.q1)?;
        let d = m.hamiltonian(p)?;
        Ok((h - d).abs() / d.abs().max(1.0))
    });
    out.push(bound_check(M, "H from metric and potential", v, 1e-12));

    let mut worst: f64 = 0.0;
    let probes = [
        (Family::TrigI, 0.5, vec![0.6, 1.0, PI / 2.0, 2.3]),
        (Family::TrigI, 0.9, vec![0.6, 1.3, 2.3]),
        (Family::Hyp0, 1.5, vec![0.1, 0.7, 2.0, 5.0]),
        (Family::HypPlus, 2.0, vec![0.2, 1.0, 3.0]),
        (Family::HypPlus, 0.4, vec![0.3, 1.5, 4.0]),
        (Family::HypMinusLocal, 0.5, vec![0.0, 1.0, 2.5]),
        (Family::Affine, 2.0, vec![0.3, 1.0, 4.0]),
    ];
    for (fam, rho, pts) in probes {
        let m = Model::new(fam, rho, 1.0).expect("valid probe model");
        for q in pts {
            if let (Ok(a), Ok(b)) = (m.scalar_curvature(q), m.brioschi_curvature(q)) {
                worst = worst.max((a - b).abs() / a.abs().max(1.0));
            }
        }
    }
    out.push(Check::new(M, "curvature vs Brioschi", worst < 1e-6, format!("worst {worst:.2e} (bound 1e-6)")));

    let v = worst_over_points(rng, 1000, &[Family::TrigI, Family::HypPlus, Family::Affine], |m, p| {
        let x = m.embed(p.q1, p.q2)?;
        Ok((x[0] * x[0] + x[1] * x[1] - x[2] * x[2] + 1.0).abs() / (x[2] * x[2]).max(1.0))
    });
    out.push(bound_check(M, "embedding on the hyperboloid", v, 1e-12));

    let v = worst_over_points(rng, 200, &[Family::TrigI, Family::Hyp0, Family::HypPlus, Family::Affine], |m, p| {
        Ok(algebra_residuals(m, p)?
            .iter()
            .filter(|r| ["{M", "{P1", "{L3"].iter().any(|s| r.name.starts_with(s)))
            .map(|r| r.value)
            .fold(0.0, f64::max))
    });
    out.push(bound_check(M, "generator algebra", v, 1e-8));

    let rho = 0.5;
    let hm = Model::new(Family::HypMinusLocal, rho, 1.0).expect("valid");
    let xs = (-rho as f64).asinh();
    let ratio = match (hm.scalar_curvature(xs + 1e-3), hm.scalar_curvature(xs + 1.0)) {
        (Ok(a), Ok(b)) => a.abs() / b.abs(),
        _ => f64::NAN,
    };
    out.push(Check::new(M, "HypMinusLocal curvature blow-up", ratio > 1e6, format!("ratio {ratio:.2e}")));
    out
}

fn invariants(rng: &mut ChaCha8Rng) -> Vec<Check> {
    const M: &str = "invariants";
    let v = worst_over_points(rng, 1000, &Family::ALL, |m, p| {
        Ok(integral_brackets(m, p, BRACKET_STEP)?.iter().fold(0.0, |a: f64, b| a.max(*b)))
    });
    let mut out = vec![bound_check(M, "{H,L}, {H,S1}, {H,S2} vanish", v, 1e-7)];
    let v = worst_over_points(rng, 1000, &Family::ALL, |m, p| {
        Ok(algebra_residuals(m, p)?.iter().filter(|r| !r.name.starts_with('{')).map(|r| r.value).fold(0.0, f64::max))
    });
    out.push(bound_check(M, "printed algebraic identities", v, 1e-11));
    let v = worst_over_points(rng, 1000, &[Family::TrigI], |m, p| {
        Ok(algebra_residuals(m, p)?.iter().filter(|r| r.name.starts_with("{P_y")).map(|r| r.value).fold(0.0, f64::max))
    });
    out.push(bound_check(M, "TrigI {P_y,S±} = ±S±", v, 1e-7));
    out
}

/// One `(E, L)` per regime of every global family.
pub fn regime_cases() -> Vec<(&'static str, Model, f64, f64)> {
    let trig = |rho: f64, xi: f64| Model::new(Family::TrigI, rho, xi).expect("valid");
    let torus = |eta: f64, sigma: f64| {
        let rho = 0.5;
        let e = eta / rho;
        (trig(rho, 2.0 * e * (1.0 + rho * sigma)), e, 1.0)
    };
    let ch1 = 1f64.cosh();
    let mut v = vec![
        ("trig zero bounded", trig(0.5, -0.5), 0.0, 1.0),
        ("trig zero crossing", trig(0.5, -2.0), 0.0, 1.0),
        ("trig zero wall", trig(0.5, -1.0), 0.0, 1.0),
    ];
    for (label, eta, sigma) in [
        ("trig σ=0", 1.0, 0.0),
        ("trig |σ|<1", 0.5, 0.6),
        ("trig split", 0.2, -ch1),
        ("trig crossing", 0.9, -ch1),
        ("trig wall", (-1f64).exp(), -ch1),
        ("trig mirrored", -0.4, 0.3),
    ] {
        let (m, e, l) = torus(eta, sigma);
        v.push((label, m, e, l));
    }
    let h0 = Model::new(Family::Hyp0, 1.0, 2.0).expect("valid");
    let hp = Model::new(Family::HypPlus, 2.0, 8.0).expect("valid");
    let hpo = Model::new(Family::HypPlus, 2.0, 1.0).expect("valid");
    let af = |rho: f64, xi: f64| Model::new(Family::Affine, rho, xi).expect("valid");
    v.extend([
        ("hyp0 closed", h0, 0.9, 1.0),
        ("hyp0 open", h0, 1.5, 1.0),
        ("hplus closed", hp, 1.8, 1.0),
        ("hplus open", hpo, 1.0, 1.0),
        ("affine hyperbola", af(2.0, 3.0), 1.0, 1.0),
        ("affine lines", af(2.0, 3.0), 1.5, 1.0),
        ("affine crossing", af(0.5, 1.0), 2.0, 1.0),
        ("affine parabola", af(0.25, 1.0), 2.0, 1.0),
        ("affine arc", af(2.0, 1.0), 2.0, 2.0),
    ]);
    v
}

const EQ: ClassifyOptions = ClassifyOptions { equality_tol: 1e-9 };

fn flow_from(m: &Model, seed: &PhasePoint, t_end: f64, tol: f64) -> koenigs::Result<Trajectory> {
    let mut opts = FlowOptions::new(tol);
    opts.edge_margin = 1e-3;
    match integrate_with(m, seed, t_end, &opts) {
        Ok(tr) => Ok(tr),
        Err(Error::BoundaryReached { partial, .. }) => Ok(*partial),
        Err(e) => Err(e),
    }
}

fn is_wall(c: &Curve) -> bool {
    matches!(c, Curve::TrigZeroWall | Curve::TrigWall { .. })
}

fn geodesics(tol: f64) -> Vec<Check> {
    const M: &str = "geodesics";
    let mut out = Vec::new();

    let turning = || -> koenigs::Result<f64> {
        let mut worst: f64 = 0.0;
        for (_, m, e, l) in regime_cases() {
            for t in classify_with(&m, e, l, &EQ)?.turning_points {
                let f = |q: f64| radial_momentum_sq(&m, e, l, q).unwrap_or(f64::NAN);
                let d = 1e-4 * t.abs().max(1.0);
                if f(t - d) * f(t + d) < 0.0 {
                    let root = bisect(f, t - d, t + d, 1e-15)?;
                    worst = worst.max((root - t).abs() / t.abs().max(1.0));
                }
            }
        }
        Ok(worst)
    };
    out.push(bound_check(M, "turning points vs bisection", turning(), 1e-10));

    let along = || -> koenigs::Result<f64> {
        let mut worst: f64 = 0.0;
        for (_, m, e, l) in regime_cases() {
            let r = classify_with(&m, e, l, &EQ)?;
            for seed in r.seeds() {
                for s in &flow_from(&m, &seed, 8.0, tol)?.samples {
                    worst = worst.max(curve_residual(&r, &s.point)?);
                }
            }
        }
        Ok(worst)
    };
    // the bound holds at the default tolerance; a looser one moves the flow off proportionally
    let bound = 1e-6 * (tol / crate::config::DEFAULT_TOL).max(1.0);
    out.push(bound_check(M, "flow stays on the closed-form curve", along(), bound));

    let ecc = || -> koenigs::Result<String> {
        let mut bad = Vec::new();
        let h0 = Model::new(Family::Hyp0, 1.0, 2.0)?;
        let (lo, hi) = (koenigs::geodesics::hyp0_e_plus(&h0, 1.0), 1.0);
        for k in 0..40 {
            let e = 0.3 + 1.5 * k as f64 / 39.0;
            if let Ok(r) = classify(&h0, e, 1.0) {
                let inside = e > lo * (1.0 + 1e-9) && e < hi;
                if inside != r.eccentricity.is_some_and(|x| x < 1.0) {
                    bad.push(format!("hyp0 E={e:.3}"));
                }
            }
        }
        let hp = Model::new(Family::HypPlus, 2.0, 8.0)?;
        for k in 0..40 {
            let e = 0.5 + 1.49 * k as f64 / 39.0;
            if let Ok(r) = classify(&hp, e, 1.0) {
                if r.closed != r.eccentricity.is_some_and(|x| x < 1.0) {
                    bad.push(format!("hplus E={e:.3}"));
                }
            }
        }
        if bad.is_empty() { Ok("40 + 40 energies".into()) } else { Err(Error::Domain(bad.join(", "))) }
    };
    out.push(match ecc() {
        Ok(d) => Check::new(M, "e < 1 exactly on the closed windows", true, d),
        Err(e) => Check::failed(M, "e < 1 exactly on the closed windows", e),
    });

    let reflect = || -> koenigs::Result<f64> {
        let mut worst: f64 = 0.0;
        for (_, m, e, l) in regime_cases().into_iter().filter(|c| c.1.family() == Family::TrigI) {
            let r = classify_with(&m, e, l, &EQ)?;
            for &(a, b) in &r.domain {
                for k in 1..20 {
                    let q1 = a + (b - a) * k as f64 / 20.0;
                    for branch in [1.0, -1.0] {
                        let Ok(p) = r.point_on_curve(q1, branch) else { continue };
                        if !(p.q2 - r.y0).is_finite() || (p.q2 - r.y0).abs() > 20.0 {
                            continue;
                        }
                        let mirrored = PhasePoint::new(p.q1, 2.0 * r.y0 - p.q2, p.p1, p.p2);
                        worst = worst.max(curve_residual(&r, &mirrored)?);
                    }
                }
            }
        }
        Ok(worst)
    };
    out.push(bound_check(M, "TrigI curves symmetric under y → −y", reflect(), 1e-9));

    let affine_s2 = || -> koenigs::Result<f64> {
        let mut worst: f64 = 0.0;
        for (_, m, e, l) in regime_cases().into_iter().filter(|c| c.1.family() == Family::Affine) {
            let r = classify_with(&m, e, l, &EQ)?;
            let (a, b) = r.domain[0];
            let hi = if b.is_finite() { b } else { 4.0 * a.max(0.5) + 2.0 };
            let s: Vec<f64> = (1..20)
                .filter_map(|k| r.point_on_curve(a + (hi - a) * k as f64 / 20.0, 1.0).ok())
                .filter_map(|p| conserved_set(&m, &p).ok().map(|c| c.s2))
                .collect();
            for v in &s {
                worst = worst.max((v - s[0]).abs() / s[0].abs().max(1.0));
            }
        }
        Ok(worst)
    };
    out.push(bound_check(M, "affine S2 constant along the curves", affine_s2(), 1e-10));
    out
}

fn flow(rng: &mut ChaCha8Rng, tol: f64) -> Vec<Check> {
    const M: &str = "flow";
    let mut out = Vec::new();

    let scaling = || -> koenigs::Result<(bool, String)> {
        let m = Model::new(Family::Hyp0, 1.0, 2.0)?;
        let seed = classify(&m, 0.85, 1.0)?.seeds()[0];
        let tols = [1e-6, 1e-8, 1e-10];
        let mut d = Vec::new();
        for t in tols {
            d.push(drift_report(&integrate(&m, &seed, 20.0, t)?)?.max());
        }
        let ok = d.windows(2).all(|w| w[1] < w[0]) && d.iter().zip(tols).all(|(d, t)| *d < 100.0 * t && *d > t / 1e4);
        Ok((ok, format!("drifts {:.1e}, {:.1e}, {:.1e}", d[0], d[1], d[2])))
    };
    out.push(match scaling() {
        Ok((ok, d)) => Check::new(M, "drift is O(tol)", ok, d),
        Err(e) => Check::failed(M, "drift is O(tol)", e),
    });

    let reversal = |rng: &mut ChaCha8Rng| -> koenigs::Result<(f64, usize)> {
        let (mut worst, mut skipped): (f64, usize) = (0.0, 0);
        for fam in Family::ALL {
            for _ in 0..20 {
                let (m, p) = random_point(rng, fam);
                let mut opts = FlowOptions::new(tol);
                opts.edge_margin = 1e-2;
                let Ok(fwd) = integrate_with(&m, &p, 1.0, &opts) else { continue };
                // strong curvature separates nearby geodesics like e^{√|R| t}
                let curv = fwd.samples.iter().map(|s| m.scalar_curvature(s.point.q1).map_or(f64::INFINITY, f64::abs)).fold(0.0, f64::max);
                if curv >= 100.0 {
                    skipped += 1;
                    continue;
                }
                let back = integrate(&m, &time_reversed(&fwd.last().point), 1.0, tol)?;
                let z = back.last().point;
                let mut dq2 = z.q2 - p.q2;
                if fam.angular() {
                    dq2 = (dq2 + PI).rem_euclid(2.0 * PI) - PI;
                }
                let scale = p.to_array().iter().fold(1.0f64, |s, v| s.max(v.abs()));
                let err = (z.q1 - p.q1).abs().max(dq2.abs()).max((z.p1 + p.p1).abs()).max((z.p2 + p.p2).abs());
                worst = worst.max(err / (scale * tol));
            }
        }
        Ok((worst, skipped))
    };
    out.push(match reversal(rng) {
        Ok((w, k)) => Check::new(
            M,
            "time reversal returns to the start",
            w < 10.0,
            format!("worst {w:.2} tol ({k} paths with |R| ≥ 100 skipped)"),
        ),
        Err(e) => Check::failed(M, "time reversal returns to the start", e),
    });

    let drift = || -> koenigs::Result<(bool, String)> {
        let (mut plain, mut wall): (f64, f64) = (0.0, 0.0);
        let mut ok = true;
        for (_, m, e, l) in regime_cases() {
            let r = classify_with(&m, e, l, &EQ)?;
            for seed in r.seeds() {
                let tr = flow_from(&m, &seed, 8.0, tol)?;
                let d = drift_report(&tr)?.max();
                if is_wall(&r.curve) {
                    // S± carry e^{±y} and y is unbounded on the walls
                    let span = tr.samples.iter().map(|s| (s.point.q2 - seed.q2).abs()).fold(0.0, f64::max);
                    wall = wall.max(d);
                    ok &= d < 100.0 * tol * span.exp();
                } else {
                    plain = plain.max(d);
                    ok &= d < 100.0 * tol;
                }
            }
        }
        Ok((ok, format!("worst {plain:.2e}; walls {wall:.2e}, bounded by 100·tol·e^|Δy|")))
    };
    out.push(match drift() {
        Ok((ok, d)) => Check::new(M, "conserved drift < 100·tol", ok, d),
        Err(e) => Check::failed(M, "conserved drift < 100·tol", e),
    });

    let turning = || -> koenigs::Result<(bool, String)> {
        let m = Model::new(Family::HypPlus, 2.0, 8.0)?;
        let tr = integrate(&m, &classify(&m, 1.85, 1.0)?.seeds()[0], 10.0, tol)?;
        let (mut flips, mut jump): (usize, f64) = (0, 0.0);
        for w in tr.samples.windows(2) {
            if (w[0].point.p1 > 0.0) != (w[1].point.p1 > 0.0) {
                flips += 1;
                let (a, b) = (w[0].conserved.to_array(), w[1].conserved.to_array());
                jump = (0..4).fold(jump, |j, k| j.max((a[k] - b[k]).abs()));
            }
        }
        Ok((flips >= 2 && jump < 100.0 * tol, format!("{flips} turnings, largest jump {jump:.1e}")))
    };
    out.push(match turning() {
        Ok((ok, d)) => Check::new(M, "radial momentum flips at turning points", ok, d),
        Err(e) => Check::failed(M, "radial momentum flips at turning points", e),
    });
    out
}

fn actions() -> Vec<Check> {
    const M: &str = "actions";
    let cases = [(Family::Hyp0, 1.0, 2.0, 1.0), (Family::Hyp0, 0.5, 3.0, 0.7), (Family::HypPlus, 2.0, 8.0, 1.0), (Family::HypPlus, 0.5, 2.0, 1.0)];
    let mut out = Vec::new();

    let sweep = || -> koenigs::Result<(f64, f64, bool)> {
        let (mut q, mut split, mut mono) = (0.0f64, 0.0f64, true);
        for (fam, rho, xi, l) in cases {
            let m = Model::new(fam, rho, xi)?;
            let (lo, hi) = closed_window(&m, l)?;
            let mut last = f64::NEG_INFINITY;
            for k in 0..20 {
                let e = lo + (hi - lo) * (k as f64 + 0.5) / 20.0;
                let a = action_variables(&m, e, l)?;
                q = q.max((action_quadrature(&m, e, l)? - a.i_radial).abs() / a.i_radial.abs());
                split = split.max((energy_from_j(&m, a.j)? - e).abs() / e.abs().max(1.0));
                // same E with half the angular action
                if let Ok(b) = action_variables(&m, e, 0.5 * l) {
                    split = split.max((b.j - a.j).abs() / a.j.max(1.0));
                }
                mono &= a.j > last;
                last = a.j;
            }
        }
        Ok((q, split, mono))
    };
    match sweep() {
        Ok((q, split, mono)) => {
            out.push(Check::new(M, "quadrature vs closed form", q < 1e-8, format!("worst {q:.2e} (bound 1e-8)")));
            out.push(Check::new(M, "E depends on J only", split < 1e-10, format!("worst {split:.2e} (bound 1e-10)")));
            out.push(Check::new(M, "dE/dJ > 0", mono, "J increasing along every sweep".into()));
        }
        Err(e) => out.push(Check::failed(M, "action sweeps", e)),
    }

    let floor = || -> koenigs::Result<f64> {
        let mut worst: f64 = 0.0;
        for (rho, xi, l) in [(2.0, 8.0, 1.0), (0.5, 2.0, 1.0), (3.0, 20.0, 0.5)] {
            let m = Model::new(Family::HypPlus, rho, xi)?;
            let (lo, _) = closed_window(&m, l)?;
            worst = worst.max(action_quadrature(&m, lo, l)?.abs());
        }
        Ok(worst)
    };
    out.push(bound_check(M, "HypPlus radial action vanishes at E₊", floor(), 1e-7));
    out
}

fn quantum(rng: &mut ChaCha8Rng) -> Vec<Check> {
    const M: &str = "quantum";
    let mut out = Vec::new();
    let mut models = Vec::new();
    for rho in [0.5, 1.0, 2.0] {
        for xi in [1.0, 3.0] {
            models.push(Model::new(Family::Hyp0, rho, xi).expect("valid"));
        }
    }
    for (rho, xi) in [(0.5, 6.0), (2.0, 20.0), (3.0, 40.0)] {
        models.push(Model::new(Family::HypPlus, rho, xi).expect("valid"));
    }

    let shooting = || -> koenigs::Result<f64> {
        let mut worst: f64 = 0.0;
        for m in &models {
            for lv in spectrum(m, 3, 3)?.iter().filter(|lv| lv.m >= 0) {
                worst = worst.max((shoot_eigenvalue(m, lv.m, lv.n)? - lv.e).abs());
            }
        }
        Ok(worst)
    };
    out.push(bound_check(M, "level formula vs shooting", shooting(), 1e-6));

    let degeneracy = || -> koenigs::Result<bool> {
        let mut ok = true;
        for m in &models {
            for lv in spectrum(m, 4, 4)? {
                ok &= lv.j_tilde == (2 * lv.n) as f64 + lv.m.unsigned_abs() as f64 + 1.0;
                ok &= Some(lv.e) == level_energy(m, lv.j_tilde);
            }
        }
        Ok(ok)
    };
    out.push(match degeneracy() {
        Ok(ok) => Check::new(M, "E depends on (n, m) through J̃ only", ok, "all enumerated levels".into()),
        Err(e) => Check::failed(M, "E depends on (n, m) through J̃ only", e),
    });

    let count = |rng: &mut ChaCha8Rng| -> koenigs::Result<(bool, String)> {
        let mut ok = true;
        let mut draws = Vec::new();
        while draws.len() < 5 {
            let rho: f64 = rng.gen_range(0.3..3.0);
            let xi: f64 = rng.gen_range(0.5..30.0);
            let bound = ((xi + 0.25) / rho).sqrt();
            // a level within 2% of the edge is not resolved by the shooting reach
            if (bound - bound.round()).abs() < 0.02 * bound || (rho - 1.0).abs() < 0.05 {
                continue;
            }
            let m = Model::new(Family::HypPlus, rho, xi)?;
            let mm = bound.ceil() as usize + 1;
            let law = (0..=mm)
                .flat_map(|n| (-(mm as i64)..=mm as i64).map(move |k| (n, k)))
                .filter(|&(n, k)| ((2 * n) as f64 + k.unsigned_abs() as f64 + 1.0) < bound)
                .count();
            let formula = spectrum(&m, mm, mm)?.len();
            let mut shot = 0;
            for k in -(mm as i64)..=mm as i64 {
                shot += bound_state_count(&m, k)?;
            }
            ok &= formula == law && shot == law;
            draws.push(format!("{formula}/{law}/{shot}"));
        }
        Ok((ok, format!("formula/law/shooting {}", draws.join(" "))))
    };
    out.push(match count(rng) {
        Ok((ok, d)) => Check::new(M, "HypPlus level count", ok, d),
        Err(e) => Check::failed(M, "HypPlus level count", e),
    });

    let classical = || -> koenigs::Result<f64> {
        let mut worst: f64 = 0.0;
        for m in &models {
            let c = if m.family() == Family::HypPlus { m.with_xi(xi_tilde(m)) } else { *m };
            for lv in spectrum(m, 3, 3)? {
                worst = worst.max((energy_from_j(&c, lv.j_tilde)? - lv.e).abs() / lv.e.max(1.0));
            }
        }
        Ok(worst)
    };
    out.push(bound_check(M, "quantum E(J̃) is the classical H(J)", classical(), 1e-12));

    let norms = || -> koenigs::Result<(bool, String)> {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for m in &models {
            for lv in spectrum(m, 2, 2)? {
                let n = eigenfunction_norm_sq(m, &lv)?;
                lo = lo.min(n);
                hi = hi.max(n);
            }
        }
        Ok((lo > 0.0 && hi.is_finite(), format!("norms in [{lo:.2e}, {hi:.2e}]")))
    };
    out.push(match norms() {
        Ok((ok, d)) => Check::new(M, "eigenfunctions square-integrable", ok, d),
        Err(e) => Check::failed(M, "eigenfunctions square-integrable", e),
    });
    out
}

fn specfun(rng: &mut ChaCha8Rng) -> Vec<Check> {
    const M: &str = "specfun";
    let mut out = Vec::new();
    let (mut off, mut conj, mut gen, mut resum) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut failure = None;
    for n in 0..=3usize {
        for m in 0..=3i64 {
            let big = 2 * n + m as usize;
            let t = basis_coefficients(n, m);
            let tm = basis_coefficients(n, -m);
            for (k, c) in &t.entries {
                conj = conj.max((tm.get(k.0, k.1) - c.conj()).norm());
            }
            for n1 in 0..=big + 1 {
                for n2 in 0..=big + 1 {
                    if n1 + n2 != big {
                        match coefficient_oracle(n, m, n1, n2) {
                            Ok(c) => off = off.max(c.norm()),
                            Err(e) => failure = Some(e),
                        }
                    }
                }
            }
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            for _ in 0..20 {
                let (la, mu): (f64, f64) = (rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
                let lhs: Complex64 = t
                    .entries
                    .iter()
                    .map(|(&(a, b), c)| c * la.powi(a as i32) * mu.powi(b as i32) * 2f64.powi((a + b) as i32))
                    .sum();
                let rhs = Complex64::new(la, -mu).powu(n as u32) * Complex64::new(la, mu).powu((n as i64 + m) as u32)
                    * (sign / fact);
                gen = gen.max((lhs - rhs).norm());
            }
            for i in 0..20 {
                for j in 0..20 {
                    let zeta = 0.05 + 6.0 * i as f64 / 19.0;
                    let phi = 2.0 * PI * j as f64 / 20.0;
                    let want = laguerre_state(n, m, zeta, phi);
                    resum = resum.max((t.resum(zeta, phi) - want).norm() / want.norm().max(1.0));
                }
            }
        }
    }
    if let Some(e) = failure {
        out.push(Check::failed(M, "off-diagonal projections vanish", e));
    } else {
        out.push(Check::new(M, "off-diagonal projections vanish", off < 1e-9, format!("worst {off:.2e} (bound 1e-9)")));
    }
    out.push(Check::new(M, "coefficients of −m are conjugates", conj == 0.0, format!("worst {conj:.2e}")));
    out.push(Check::new(M, "generating function (with (−1)^n)", gen < 1e-10, format!("worst {gen:.2e} (bound 1e-10)")));
    out.push(Check::new(M, "pointwise resummation", resum < 1e-9, format!("worst {resum:.2e} (bound 1e-9)")));
    out
}

fn cli(seed: u64) -> Vec<Check> {
    const M: &str = "cli";
    let h0 = Model::new(Family::Hyp0, 1.0, 2.0).expect("valid");
    let hp = Model::new(Family::HypPlus, 2.0, 3.75).expect("valid");
    let base = RunConfig {
        command: Command::Classify,
        model: Some(h0),
        e: Some(0.9),
        l: Some(1.0),
        n_max: 3,
        m_max: 3,
        tol: 1e-10,
        seed,
        format: Format::Json,
        out: None,
        points: 50,
        t_end: 2.0,
        suite: Suite::All,
    };
    let runs = [
        RunConfig { ..base.clone() },
        RunConfig { command: Command::Geodesic, format: Format::Csv, ..base.clone() },
        RunConfig { command: Command::Flow, format: Format::Json, ..base.clone() },
        RunConfig { command: Command::Actions, format: Format::Csv, points: 5, ..base.clone() },
        RunConfig { command: Command::Spectrum, model: Some(hp), format: Format::Json, ..base.clone() },
    ];
    let mut same = true;
    for cfg in &runs {
        let a = crate::render(cfg);
        let b = crate::render(cfg);
        same &= matches!((&a, &b), (Ok(x), Ok(y)) if x == y);
    }
    vec![Check::new(M, "identical config gives identical output", same, format!("{} commands rendered twice", runs.len()))]
}
