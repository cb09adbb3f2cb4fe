//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every exported function returns flat `f64` arrays (`Float64Array` on the
//! JavaScript side) laid out row by row.

use lowdiss::bounds::oracle::PowerLevelCurve;
use lowdiss::bounds::{eta_lower_detailed, eta_upper, universal_lower, universal_upper, EngineSpec};
use lowdiss::harness::{log_grid, stroke_entropy, tangency_probe, StrokeTemplate};
use lowdiss::tla::{effective_rate, si_high_t, StepControl};
use wasm_bindgen::prelude::*;

type Res<T> = Result<T, String>;

fn js<T>(r: Res<T>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e))
}

fn err(e: lowdiss::Error) -> String {
    e.to_string()
}

pub fn bound_rows(eta_c: f64, zeta: f64, points: usize) -> Res<Vec<f64>> {
    if points < 2 {
        return Err("need at least 2 points".into());
    }
    let mut out = Vec::with_capacity(5 * points);
    for i in 0..points {
        let p = i as f64 / (points - 1) as f64;
        out.extend([
            p,
            eta_upper(p, zeta, eta_c).map_err(err)?,
            eta_lower_detailed(p, zeta, eta_c).map_err(err)?,
            universal_upper(p, eta_c).map_err(err)?,
            universal_lower(p).map_err(err)?,
        ]);
    }
    Ok(out)
}

/// Rows `[p_norm, eta_upper, eta_lower, eq1_upper, eq14_lower]` on an even
/// grid of normalized power.
#[wasm_bindgen]
pub fn bound_curves(eta_c: f64, zeta: f64, points: usize) -> Result<Vec<f64>, JsError> {
    js(bound_rows(eta_c, zeta, points))
}

pub fn entropy_rows(
    beta: f64,
    omega0: f64,
    eps: f64,
    gamma: f64,
    x_min: f64,
    x_max: f64,
    points: usize,
) -> Res<Vec<f64>> {
    let template = StrokeTemplate {
        beta,
        omega0,
        eps,
        gamma,
    };
    template.stroke(1.0).map_err(err)?;
    let rate = effective_rate(beta, omega0, gamma);
    let control = StepControl::default();
    let mut out = Vec::with_capacity(3 * points);
    for x in log_grid(x_min, x_max, points).map_err(err)? {
        let t_f = x / rate;
        out.extend([
            x,
            stroke_entropy(&template, t_f, &control).map_err(err)?,
            si_high_t(beta, omega0, eps, gamma, t_f),
        ]);
    }
    Ok(out)
}

/// Rows `[gamma~ t_f, numeric s_irr, high-temperature closed form]` on a
/// logarithmic grid of `gamma~ t_f`.
#[wasm_bindgen]
pub fn entropy_curve(
    beta: f64,
    omega0: f64,
    eps: f64,
    gamma: f64,
    x_min: f64,
    x_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    js(entropy_rows(beta, omega0, eps, gamma, x_min, x_max, points))
}

/// Power and efficiency level curves in the `(t_h, t_c)` plane and their
/// intersections.
#[wasm_bindgen]
pub struct Tangency {
    power_curve: Vec<f64>,
    eta_curve: Vec<f64>,
    intersections: Vec<f64>,
    tau_minus: f64,
    tau_plus: f64,
    eta_upper: f64,
}

#[wasm_bindgen]
impl Tangency {
    /// `[t_h, t_c]` pairs along the closed power level curve.
    #[wasm_bindgen(getter)]
    pub fn power_curve(&self) -> Vec<f64> {
        self.power_curve.clone()
    }

    /// `[t_h, t_c]` pairs along the efficiency level curve, clipped to the plot box.
    #[wasm_bindgen(getter)]
    pub fn eta_curve(&self) -> Vec<f64> {
        self.eta_curve.clone()
    }

    /// `[t_h, t_c, tangential]` triples, `tangential` being 0 or 1.
    #[wasm_bindgen(getter)]
    pub fn intersections(&self) -> Vec<f64> {
        self.intersections.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn tau_minus(&self) -> f64 {
        self.tau_minus
    }

    #[wasm_bindgen(getter)]
    pub fn tau_plus(&self) -> f64 {
        self.tau_plus
    }

    /// Normalized upper bound at this power, for reference.
    #[wasm_bindgen(getter)]
    pub fn eta_upper(&self) -> f64 {
        self.eta_upper
    }
}

pub fn tangency_view(
    m_h: f64,
    m_c: f64,
    eta_c: f64,
    q_rev: f64,
    p_norm: f64,
    eta_norm: f64,
    points: usize,
) -> Res<Tangency> {
    if !(p_norm > 0.0 && p_norm < 1.0) {
        return Err("normalized power must lie strictly between 0 and 1".into());
    }
    let spec = EngineSpec::with_carnot(m_h, m_c, eta_c, q_rev).map_err(err)?;
    let p = p_norm * spec.p_max();
    let eta = eta_norm * eta_c;
    let report = tangency_probe(&spec, p, eta).map_err(err)?;
    let level = PowerLevelCurve::new(&spec, p).map_err(err)?;
    let n = points.max(8);

    let mut power_curve = Vec::with_capacity(2 * (n + 1));
    for i in 0..=n {
        let t = level.point(2.0 * i as f64 / n as f64);
        power_curve.extend([t.t_h, t.t_c]);
    }

    // On the efficiency level set t_c = M_c / (a - b / t_h).
    let limit = 1.05 * report.window.tau_plus;
    let a = spec.reversible_work() - eta * q_rev;
    let b = (1.0 - eta) * m_h;
    let mut eta_curve = Vec::new();
    if a > 0.0 {
        let t_lo = (b / a).max(limit * 1e-4);
        for t_h in log_grid(t_lo * (1.0 + 1e-9), limit, n).map_err(err)? {
            let den = a - b / t_h;
            if den > 0.0 {
                let t_c = m_c / den;
                if t_c <= limit {
                    eta_curve.extend([t_h, t_c]);
                }
            }
        }
    }

    let intersections = report
        .intersections
        .iter()
        .flat_map(|x| [x.times.t_h, x.times.t_c, f64::from(u8::from(x.tangential))])
        .collect();
    Ok(Tangency {
        power_curve,
        eta_curve,
        intersections,
        tau_minus: report.window.tau_minus,
        tau_plus: report.window.tau_plus,
        eta_upper: eta_upper(p_norm, spec.zeta(), eta_c).map_err(err)?,
    })
}

/// Level-set geometry for an engine with dissipation coefficients `m_h`,
/// `m_c`, Carnot efficiency `eta_c` and reversible heat `q_rev`, at normalized
/// power `p_norm` and normalized efficiency `eta_norm`.
#[wasm_bindgen]
pub fn tangency(
    m_h: f64,
    m_c: f64,
    eta_c: f64,
    q_rev: f64,
    p_norm: f64,
    eta_norm: f64,
    points: usize,
) -> Result<Tangency, JsError> {
    js(tangency_view(m_h, m_c, eta_c, q_rev, p_norm, eta_norm, points))
}
