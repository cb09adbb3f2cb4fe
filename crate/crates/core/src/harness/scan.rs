use crate::bounds::{eta_lower_detailed, eta_upper, universal_lower, universal_upper};
use crate::error::{invalid, Result};
use crate::tla::{evolve_isothermal, si_high_t, si_low_t, stroke_ledger_for, AtomState, IsothermalStroke, StepControl};

/// Parameters of a single isothermal stroke whose duration is scanned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrokeTemplate {
    pub beta: f64,
    pub omega0: f64,
    pub eps: f64,
    pub gamma: f64,
}

impl StrokeTemplate {
    /// `omega0 = 1`, `eps = 0.1`, `gamma = 1` at the given temperature.
    pub fn default_at(beta: f64) -> Self {
        Self {
            beta,
            omega0: 1.0,
            eps: 0.1,
            gamma: 1.0,
        }
    }

    pub fn stroke(&self, t_f: f64) -> Result<IsothermalStroke> {
        IsothermalStroke::new(self.beta, self.gamma, self.omega0, self.eps, t_f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyRow {
    pub beta: f64,
    pub omega0: f64,
    pub eps: f64,
    pub gamma: f64,
    pub t_f: f64,
    pub s_irr_numeric: f64,
    pub s_irr_high_t: f64,
    /// NaN where the low-temperature expression is singular.
    pub s_irr_low_t: f64,
}

/// Irreversible entropy of one stroke started in equilibrium.
pub fn stroke_entropy(template: &StrokeTemplate, t_f: f64, control: &StepControl) -> Result<f64> {
    let stroke = template.stroke(t_f)?;
    let start = AtomState::thermal(template.beta, template.omega0);
    let (_, traj) = evolve_isothermal(start, &stroke, control)?;
    Ok(stroke_ledger_for(&traj, template.beta)?.s_irr)
}

/// Numerical and analytic irreversible entropy over a grid of stroke durations.
pub fn entropy_scan(template: &StrokeTemplate, t_grid: &[f64], control: &StepControl) -> Result<Vec<EntropyRow>> {
    if t_grid.is_empty() {
        return Err(invalid("t_grid", "must not be empty"));
    }
    let row = |&t_f: &f64| -> Result<EntropyRow> {
        let StrokeTemplate {
            beta,
            omega0,
            eps,
            gamma,
        } = *template;
        Ok(EntropyRow {
            beta,
            omega0,
            eps,
            gamma,
            t_f,
            s_irr_numeric: stroke_entropy(template, t_f, control)?,
            s_irr_high_t: si_high_t(beta, omega0, eps, gamma, t_f),
            s_irr_low_t: si_low_t(beta, omega0, eps, gamma, t_f).unwrap_or(f64::NAN),
        })
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        t_grid.par_iter().map(row).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        t_grid.iter().map(row).collect()
    }
}

/// `n` points spaced evenly in `ln t` over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && n >= 1) {
        return Err(invalid(
            "t_grid",
            format!("need 0 < lo <= hi and n >= 1, got ({lo}, {hi}, {n})"),
        ));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect())
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(invalid("x", "need at least two paired points"));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub eta_c: f64,
    pub zeta: f64,
    pub p_norm: f64,
    pub eta_upper: f64,
    pub eta_lower: f64,
    pub universal_upper: f64,
    pub universal_lower: f64,
}

/// Tabulates the bound curves for every `zeta` over the `p_norm` grid.
pub fn bound_curves(eta_c: f64, zetas: &[f64], p_grid: &[f64]) -> Result<Vec<CurveRow>> {
    if zetas.is_empty() || p_grid.is_empty() {
        return Err(invalid("zetas", "grids must not be empty"));
    }
    let mut rows = Vec::with_capacity(zetas.len() * p_grid.len());
    for &zeta in zetas {
        for &p in p_grid {
            rows.push(CurveRow {
                eta_c,
                zeta,
                p_norm: p,
                eta_upper: eta_upper(p, zeta, eta_c)?,
                eta_lower: eta_lower_detailed(p, zeta, eta_c)?,
                universal_upper: universal_upper(p, eta_c)?,
                universal_lower: universal_lower(p)?,
            });
        }
    }
    Ok(rows)
}

/// `n + 1` evenly spaced points on `[0, 1]`.
pub fn unit_grid(n: usize) -> Vec<f64> {
    (0..=n).map(|i| i as f64 / n.max(1) as f64).collect()
}
