//! The table, curve and figure subcommands.

use koenigs::actions::{action_quadrature, action_variables, closed_window, energy_from_j};
use koenigs::flow::{drift_report, integrate_with, FlowOptions};
use koenigs::geodesics::{classify, classify_with, ClassifyOptions, GeodesicRegime};
use koenigs::quantum::spectrum;
use koenigs::{Error, Family, Model};
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};
use crate::output::{number, pretty, svg, Table};

pub type Outcome = Result<String, Error>;

pub fn regime_json(r: &GeodesicRegime) -> Value {
    let m = &r.model;
    let params: Map<String, Value> = r.params.iter().map(|(k, v)| (k.to_string(), number(*v))).collect();
    json!({
        "family": m.family().name(),
        "rho": m.rho(),
        "xi": m.xi(),
        "energy": r.energy,
        "l": r.l,
        "tag": r.curve.tag(),
        "closed": r.closed,
        "mirrored": r.mirrored,
        "eccentricity": r.eccentricity.map_or(Value::Null, number),
        "turning_points": r.turning_points.iter().map(|v| number(*v)).collect::<Vec<_>>(),
        "domain": r.domain.iter().map(|(a, b)| vec![number(*a), number(*b)]).collect::<Vec<_>>(),
        "params": params,
    })
}

pub fn classify_cmd(cfg: &RunConfig) -> Outcome {
    let r = classify(cfg.model(), cfg.energy(), cfg.ang())?;
    Ok(pretty(&regime_json(&r)))
}

/// Chart coordinates mapped to a flat picture: polar families in the plane
/// (HypPlus on the Poincaré disk), the others as drawn in the chart.
fn picture(family: Family, q1: f64, q2: f64) -> (f64, f64) {
    match family {
        Family::Hyp0 => (q1 * q2.cos(), q1 * q2.sin()),
        Family::HypPlus => {
            let r = (0.5 * q1).tanh();
            (r * q2.cos(), r * q2.sin())
        }
        _ => (q1, q2),
    }
}

pub fn geodesic_cmd(cfg: &RunConfig) -> Outcome {
    let r = classify(cfg.model(), cfg.energy(), cfg.ang())?;
    let lines = r.sample_curve(cfg.points);
    Ok(match cfg.format {
        Format::Svg => {
            let fam = r.model.family();
            let pic: Vec<Vec<(f64, f64)>> =
                lines.iter().map(|l| l.iter().map(|&(a, b)| picture(fam, a, b)).collect()).collect();
            svg(&format!("{} geodesic {}", fam, r.curve.tag()), &pic)
        }
        f => {
            let mut t = Table::new(&["branch", "q1", "q2"]);
            for (k, line) in lines.iter().enumerate() {
                for &(a, b) in line {
                    t.push(vec![k as f64, a, b]);
                }
            }
            if f == Format::Json {
                pretty(&json!({ "regime": regime_json(&r), "samples": t.to_json_value() }))
            } else {
                t.to_csv()
            }
        }
    })
}

/// Integrates from the first seed of the classified regime. The drift report
/// goes into the JSON object, or as a trailing line to stderr for CSV.
pub fn flow_cmd(cfg: &RunConfig) -> Outcome {
    let m = cfg.model();
    let r = classify(m, cfg.energy(), cfg.ang())?;
    let seed = r.seeds()[0];
    let mut opts = FlowOptions::new(cfg.tol);
    opts.edge_margin = 1e-6;
    let (tr, stopped) = match integrate_with(m, &seed, cfg.t_end, &opts) {
        Ok(tr) => (tr, None),
        Err(Error::BoundaryReached { t, partial, .. }) => (*partial, Some(t)),
        Err(e) => return Err(e),
    };
    let d = drift_report(&tr)?;
    let mut t = Table::new(&["t", "q1", "q2", "p1", "p2", "e", "l", "s1", "s2"]);
    for s in &tr.samples {
        let c = s.conserved;
        let p = s.point;
        t.push(vec![s.t, p.q1, p.q2, p.p1, p.p2, c.e, c.l, c.s1, c.s2]);
    }
    let drift = json!({ "max_de": d.e, "max_dl": d.l, "max_ds1": d.s1, "max_ds2": d.s2 });
    Ok(match cfg.format {
        Format::Json => pretty(&json!({
            "regime": regime_json(&r),
            "drift": drift,
            "boundary_reached_at": stopped.map_or(Value::Null, number),
            "samples": t.to_json_value(),
        })),
        _ => {
            eprintln!("drift: dE {:.3e} dL {:.3e} dS1 {:.3e} dS2 {:.3e}", d.e, d.l, d.s1, d.s2);
            if let Some(ts) = stopped {
                eprintln!("chart edge reached at t = {ts}");
            }
            t.to_csv()
        }
    })
}

/// Sweep over the interior of the closed window at fixed `L`.
pub fn actions_cmd(cfg: &RunConfig) -> Outcome {
    let m = cfg.model();
    let l = cfg.ang();
    let (lo, hi) = closed_window(m, l)?;
    let mut t = Table::new(&["e", "i_angle", "i_radial", "j", "i_radial_quadrature", "h_of_j"]);
    let n = cfg.points;
    for k in 0..n {
        let e = lo + (hi - lo) * (k as f64 + 0.5) / n as f64;
        let a = action_variables(m, e, l)?;
        let q = action_quadrature(m, e, l)?;
        t.push(vec![e, a.i_angle, a.i_radial, a.j, q, energy_from_j(m, a.j)?]);
    }
    Ok(render_table(&t, cfg.format))
}

pub fn spectrum_cmd(cfg: &RunConfig) -> Outcome {
    let levels = spectrum(cfg.model(), cfg.n_max, cfg.m_max)?;
    let mut t = Table::new(&["n", "m", "j_tilde", "e"]);
    for lv in levels {
        t.push(vec![lv.n as f64, lv.m as f64, lv.j_tilde, lv.e]);
    }
    Ok(render_table(&t, cfg.format))
}

fn render_table(t: &Table, f: Format) -> String {
    if f == Format::Json {
        pretty(&t.to_json_value())
    } else {
        t.to_csv()
    }
}

/// TrigI model and `(E, L = 1)` for given `(η, σ)` at `ρ = 1/2`.
fn trig_torus(eta: f64, sigma: f64) -> Result<(Model, f64), Error> {
    let rho = 0.5;
    let e = eta / rho;
    Ok((Model::new(Family::TrigI, rho, 2.0 * e * (1.0 + rho * sigma))?, e))
}

fn trig_curves(cases: &[(f64, f64)], shifts: &[f64], n: usize) -> Result<Vec<Vec<(f64, f64)>>, Error> {
    let mut lines = Vec::new();
    for &(eta, sigma) in cases {
        let (m, e) = trig_torus(eta, sigma)?;
        // η = e^{−θ} is an equality between rounded numbers
        let r = classify_with(&m, e, 1.0, &ClassifyOptions { equality_tol: 1e-9 })?;
        for &y0 in shifts {
            let shifted = r.clone().with_y0(y0);
            // the wall curves run off to |y| → ∞; keep the picture finite
            for line in shifted.sample_curve(n) {
                lines.push(line.into_iter().filter(|p| (p.1 - y0).abs() < 6.0).collect());
            }
        }
    }
    Ok(lines)
}

/// The four TrigI pictures: `σ = 0`, then `σ = −cosh θ` (θ = 1) below, above
/// and at `η = e^{−θ}`.
pub fn figure_set(n: usize) -> Result<Vec<(&'static str, String)>, Error> {
    let ch = 1f64.cosh();
    let wall = (-1f64).exp();
    let fig1 = trig_curves(&[(0.1, 0.0), (1.0, 0.0), (10.0, 0.0)], &[0.0], n)?;
    let fig2 = trig_curves(&[(0.1, -ch), (0.2, -ch), (0.3, -ch)], &[0.0], n)?;
    let fig3 = trig_curves(&[(0.5, -ch), (1.0, -ch), (2.0, -ch)], &[-1.0, 0.0, 1.0], n)?;
    let fig4 = trig_curves(&[(wall, -ch)], &[-1.0, 0.0, 1.0], n)?;
    Ok(vec![
        ("fig1.svg", svg("TrigI, sigma = 0, eta = 0.1, 1, 10", &fig1)),
        ("fig2.svg", svg("TrigI, 0 < eta < exp(-theta)", &fig2)),
        ("fig3.svg", svg("TrigI, eta > exp(-theta)", &fig3)),
        ("fig4.svg", svg("TrigI, eta = exp(-theta)", &fig4)),
    ])
}
