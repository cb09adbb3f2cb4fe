use super::integrate::{converged_steps, rk4_run, StepControl, Trajectory};
use super::ledger::{stroke_ledger_for, StrokeLedger};
use super::{AtomState, BathCoupling, CycleProtocol, IsothermalStroke, Stroke};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyCycleOptions {
    /// Convergence threshold on `|p_e(start) - p_e(end)|`.
    pub tol: f64,
    pub max_cycles: usize,
    pub step: StepControl,
}

impl Default for SteadyCycleOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_cycles: 100_000,
            step: StepControl::default(),
        }
    }
}

/// One converged cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleResult {
    pub q_h: f64,
    pub q_c: f64,
    pub work_out: f64,
    /// `work_out / q_h`, absent when the atom takes no heat from the hot bath.
    pub eta: Option<f64>,
    pub power: f64,
    pub hot_ledger: StrokeLedger,
    pub cold_ledger: StrokeLedger,
    /// Work done by the atom during the two adiabats.
    pub adiabat_work: f64,
    pub cycles_to_converge: usize,
    /// Population at the start of the hot stroke on the limit cycle.
    pub p_start: f64,
    /// `work_out - (q_h + q_c)`.
    pub first_law_residual: f64,
}

struct CycleRunner {
    protocol: CycleProtocol,
    hot: IsothermalStroke,
    cold: IsothermalStroke,
    n_hot: usize,
    n_cold: usize,
}

impl CycleRunner {
    fn new(protocol: &CycleProtocol, coupling: &BathCoupling, step: &StepControl) -> Result<Self> {
        protocol.validate()?;
        let hot = protocol.isothermal(Stroke::Hot, coupling)?;
        let cold = protocol.isothermal(Stroke::Cold, coupling)?;
        let p_hot = AtomState::thermal(coupling.beta_h, hot.omega0).p_e;
        let p_cold = AtomState::thermal(coupling.beta_c, cold.omega0).p_e;
        Ok(Self {
            protocol: *protocol,
            n_hot: converged_steps(&hot, p_hot, step)?,
            n_cold: converged_steps(&cold, p_cold, step)?,
            hot,
            cold,
        })
    }

    fn map(&self, p: f64) -> Result<f64> {
        let (y, _) = rk4_run(&self.hot, p, self.n_hot, None)?;
        let (y, _) = rk4_run(&self.cold, y[0], self.n_cold, None)?;
        Ok(y[0])
    }

    fn trajectory(&self, st: &IsothermalStroke, n: usize, p: f64, stroke: Stroke) -> Result<Trajectory> {
        let (y, _) = rk4_run(st, p, n, None)?;
        Ok(Trajectory {
            stroke: Some(stroke),
            samples: Vec::new(),
            p_start: p,
            p_end: y[0],
            omega_start: st.omega0,
            omega_end: st.omega_end(),
            work_on: y[1],
            entropy_production: y[2],
            beta: Some(st.beta),
            steps: n,
        })
    }

    fn result(&self, p: f64, cycles: usize) -> Result<CycleResult> {
        let hot = self.trajectory(&self.hot, self.n_hot, p, Stroke::Hot)?;
        let cold = self.trajectory(&self.cold, self.n_cold, hot.p_end, Stroke::Cold)?;
        let hot_ledger = stroke_ledger_for(&hot, self.hot.beta)?;
        let cold_ledger = stroke_ledger_for(&cold, self.cold.beta)?;
        let pr = &self.protocol;
        let adiabat_on = (pr.omega_c_start - pr.omega_h_end()) * (hot.p_end - 0.5)
            + (pr.omega_h_start - pr.omega_c_end()) * (cold.p_end - 0.5);
        let work_out = -(hot.work_on + cold.work_on + adiabat_on);
        let (q_h, q_c) = (hot_ledger.heat, cold_ledger.heat);
        Ok(CycleResult {
            q_h,
            q_c,
            work_out,
            eta: (q_h > 0.0).then(|| work_out / q_h),
            power: work_out / pr.period(),
            hot_ledger,
            cold_ledger,
            adiabat_work: -adiabat_on,
            cycles_to_converge: cycles,
            p_start: p,
            first_law_residual: work_out - (q_h + q_c),
        })
    }
}

/// Iterates whole cycles from `initial` until the population repeats.
///
/// With fixed step counts the one-cycle map is affine in `p_e`, so after every
/// two fresh cycles the iteration jumps to the fixed point of the secant
/// through the last three iterates.
pub fn find_steady_cycle(
    protocol: &CycleProtocol,
    coupling: &BathCoupling,
    initial: AtomState,
    options: &SteadyCycleOptions,
) -> Result<CycleResult> {
    if !(options.tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    let initial = AtomState::new(initial.p_e)?;
    let runner = CycleRunner::new(protocol, coupling, &options.step)?;
    let mut p = initial.p_e;
    let mut history: Vec<f64> = vec![p];
    let mut residual = f64::INFINITY;
    for cycle in 1..=options.max_cycles {
        let next = runner.map(p)?;
        residual = (next - p).abs();
        if residual < options.tol {
            return runner.result(p, cycle);
        }
        history.push(next);
        p = next;
        if history.len() >= 3 {
            let n = history.len();
            let (p0, p1, p2) = (history[n - 3], history[n - 2], history[n - 1]);
            let slope = (p2 - p1) / (p1 - p0);
            if slope.is_finite() && (0.0..1.0).contains(&slope.abs()) {
                let jump = (p2 - slope * p1) / (1.0 - slope);
                if jump > 0.0 && jump < 1.0 {
                    p = jump;
                }
            }
            history.clear();
            history.push(p);
        }
    }
    Err(Error::NoConvergence {
        cycles: options.max_cycles,
        residual,
    })
}
