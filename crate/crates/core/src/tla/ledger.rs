use super::{equilibrium_population, BathCoupling, Stroke, Trajectory};
use crate::error::{invalid, Result};

/// Thermodynamic bookkeeping of one isothermal stroke (`k_B = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrokeLedger {
    /// Heat absorbed from the bath.
    pub heat: f64,
    /// Work done on the atom.
    pub work_on: f64,
    /// Change of the von Neumann entropy of the atom.
    pub d_entropy: f64,
    /// Entropy produced while the stroke runs, `d_entropy - beta heat`.
    pub s_stroke: f64,
    /// Entropy produced when the final state then relaxes at fixed frequency,
    /// the relative entropy to the thermal state at the final frequency.
    pub s_relax: f64,
    /// Total irreversible entropy, `s_stroke + s_relax`.
    pub s_irr: f64,
}

pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// `D(p || q)` between two-level populations.
pub fn relative_entropy(p: f64, q: f64) -> f64 {
    let term = |a: f64, b: f64| if a > 0.0 { a * (a / b).ln() } else { 0.0 };
    (term(p, q) + term(1.0 - p, 1.0 - q)).max(0.0)
}

/// Ledger of an isothermal stroke from its trajectory.
///
/// The stroke-local production is the integrated entropy production rate,
/// which equals `Delta S - beta Q` but avoids the cancellation between two
/// nearly equal terms on slow strokes.
pub fn stroke_ledger(trajectory: &Trajectory, coupling: &BathCoupling, stroke: Stroke) -> Result<StrokeLedger> {
    let (beta, _) = coupling
        .bath(stroke)
        .ok_or_else(|| invalid("stroke", "ledger needs an isothermal stroke"))?;
    stroke_ledger_for(trajectory, beta)
}

/// Ledger of a single-bath stroke at inverse temperature `beta`.
pub fn stroke_ledger_for(trajectory: &Trajectory, beta: f64) -> Result<StrokeLedger> {
    if let Some(b) = trajectory.beta {
        if (b - beta).abs() > 1e-12 * beta {
            return Err(invalid("beta", "trajectory was integrated against a different bath"));
        }
    }
    let s_stroke = trajectory.entropy_production;
    let p_eq = equilibrium_population(beta, trajectory.omega_end);
    let s_relax = relative_entropy(trajectory.p_end, p_eq);
    Ok(StrokeLedger {
        heat: trajectory.heat(),
        work_on: trajectory.work_on,
        d_entropy: binary_entropy(trajectory.p_end) - binary_entropy(trajectory.p_start),
        s_stroke,
        s_relax,
        s_irr: s_stroke + s_relax,
    })
}
