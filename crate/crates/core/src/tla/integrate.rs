use super::{equilibrium_population, AtomState, BathCoupling, CycleProtocol, IsothermalStroke, Stroke};
use crate::error::{invalid, Error, Result};

/// Fixed-step RK4 settings.
///
/// The step count of a stroke starts at `max(min_steps, 2 kappa_max t)` and is
/// doubled until the end population moves by less than `tol` and the
/// accumulated entropy production by less than `1e-7` relative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub tol: f64,
    pub min_steps: usize,
    pub max_steps: usize,
    /// Approximate number of trajectory samples to keep per stroke.
    pub samples: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            min_steps: 16,
            max_steps: 1 << 24,
            samples: 256,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub omega: f64,
    pub p_e: f64,
}

/// Result of integrating one stroke.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub stroke: Option<Stroke>,
    pub samples: Vec<TrajectorySample>,
    pub p_start: f64,
    pub p_end: f64,
    pub omega_start: f64,
    pub omega_end: f64,
    /// `int (d omega/dt)(p_e - 1/2) dt`
    pub work_on: f64,
    /// `int sigma dt` with the entropy production rate of the master equation.
    pub entropy_production: f64,
    /// Inverse temperature of the bath, `None` on an adiabat.
    pub beta: Option<f64>,
    pub steps: usize,
}

impl Trajectory {
    pub fn energy_change(&self) -> f64 {
        self.omega_end * (self.p_end - 0.5) - self.omega_start * (self.p_start - 0.5)
    }

    /// Heat absorbed from the bath, `Delta U - work_on`.
    pub fn heat(&self) -> f64 {
        if self.beta.is_none() {
            return 0.0;
        }
        self.energy_change() - self.work_on
    }
}

// Augmented state: population, work done on the atom, integrated entropy production.
type Y = [f64; 3];

fn derivative(st: &IsothermalStroke, s: f64, y: &Y) -> Y {
    let omega = st.omega(s);
    let (kappa, c) = st.rates_at(s);
    let p = y[0];
    let dp = -kappa * p + c;
    let p0 = equilibrium_population(st.beta, omega);
    let d = p - p0;
    // sigma = J ln(k_up (1-p) / (k_down p)) with J = -kappa (p - p0)
    let log_ratio = (-d / (1.0 - p0)).ln_1p() - (d / p0).ln_1p();
    let sigma = -kappa * d * log_ratio;
    [dp, st.eps / st.duration * (p - 0.5), sigma]
}

fn add(y: &Y, k: &Y, h: f64) -> Y {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]]
}

pub(crate) fn rk4_run(
    st: &IsothermalStroke,
    p0: f64,
    n: usize,
    stride: Option<usize>,
) -> Result<(Y, Vec<TrajectorySample>)> {
    let h = st.duration / n as f64;
    let mut y: Y = [p0, 0.0, 0.0];
    // compensated summation keeps round-off from growing with the step count
    let mut carry: Y = [0.0; 3];
    let mut samples = Vec::new();
    if stride.is_some() {
        samples.push(TrajectorySample {
            t: 0.0,
            omega: st.omega0,
            p_e: p0,
        });
    }
    for i in 0..n {
        let s = i as f64 * h;
        let k1 = derivative(st, s, &y);
        let k2 = derivative(st, s + 0.5 * h, &add(&y, &k1, 0.5 * h));
        let k3 = derivative(st, s + 0.5 * h, &add(&y, &k2, 0.5 * h));
        let k4 = derivative(st, s + h, &add(&y, &k3, h));
        for j in 0..3 {
            let inc = h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) - carry[j];
            let next = y[j] + inc;
            carry[j] = (next - y[j]) - inc;
            y[j] = next;
        }
        if !(y[0].is_finite() && y[1].is_finite() && y[2].is_finite()) {
            return Err(Error::Integration(format!("non-finite state after step {}", i + 1)));
        }
        if let Some(k) = stride {
            if (i + 1) % k == 0 || i + 1 == n {
                let t = if i + 1 == n { st.duration } else { (i + 1) as f64 * h };
                samples.push(TrajectorySample {
                    t,
                    omega: st.omega(t),
                    p_e: y[0],
                });
            }
        }
    }
    Ok((y, samples))
}

/// Smallest step count meeting the halving criterion.
///
/// Very long strokes can hit the round-off floor before `tol`; a difference
/// below `1e-10` that no longer shrinks on halving is then accepted.
pub(crate) fn converged_steps(st: &IsothermalStroke, p0: f64, control: &StepControl) -> Result<usize> {
    let guess = (2.0 * st.max_rate() * st.duration).ceil();
    let mut n = if guess.is_finite() {
        (guess as usize).max(control.min_steps).max(1)
    } else {
        return Err(Error::Integration("relaxation rate is not finite".into()));
    };
    let (mut coarse, _) = rk4_run(st, p0, n, None)?;
    let mut last_dp = f64::INFINITY;
    loop {
        if 2 * n > control.max_steps {
            return Err(Error::Integration(format!(
                "step halving did not converge within {} steps",
                control.max_steps
            )));
        }
        let (fine, _) = rk4_run(st, p0, 2 * n, None)?;
        let dp = (fine[0] - coarse[0]).abs();
        let ds = (fine[2] - coarse[2]).abs();
        let s_ok = ds <= 1e-7 * fine[2].abs() + 1e-18;
        if s_ok && (dp < control.tol || (dp < 1e-10 && dp > 0.25 * last_dp)) {
            return Ok(2 * n);
        }
        last_dp = dp;
        n *= 2;
        coarse = fine;
    }
}

/// Integrates the master equation across a single bath-contact stroke.
pub fn evolve_isothermal(
    state: AtomState,
    stroke: &IsothermalStroke,
    control: &StepControl,
) -> Result<(AtomState, Trajectory)> {
    let n = converged_steps(stroke, state.p_e, control)?;
    let stride = (n / control.samples.max(1)).max(1);
    let (y, samples) = rk4_run(stroke, state.p_e, n, Some(stride))?;
    let end = AtomState::new(y[0]).map_err(|_| Error::Integration(format!("population left (0, 1): {}", y[0])))?;
    Ok((
        end,
        Trajectory {
            stroke: None,
            samples,
            p_start: state.p_e,
            p_end: y[0],
            omega_start: stroke.omega0,
            omega_end: stroke.omega_end(),
            work_on: y[1],
            entropy_production: y[2],
            beta: Some(stroke.beta),
            steps: n,
        },
    ))
}

fn adiabat(state: AtomState, protocol: &CycleProtocol, stroke: Stroke) -> Trajectory {
    let (w0, w1) = protocol.stroke_endpoints(stroke);
    let t0 = protocol.stroke_start(stroke);
    let d = protocol.stroke_duration(stroke);
    let p = state.p_e;
    Trajectory {
        stroke: Some(stroke),
        samples: vec![
            TrajectorySample {
                t: t0,
                omega: w0,
                p_e: p,
            },
            TrajectorySample {
                t: t0 + d,
                omega: w1,
                p_e: p,
            },
        ],
        p_start: p,
        p_end: p,
        omega_start: w0,
        omega_end: w1,
        work_on: (w1 - w0) * (p - 0.5),
        entropy_production: 0.0,
        beta: None,
        steps: 0,
    }
}

/// Evolves `state` across one stroke of the cycle. Sample times are cycle times.
pub fn evolve_stroke(
    state: AtomState,
    protocol: &CycleProtocol,
    coupling: &BathCoupling,
    stroke: Stroke,
    control: &StepControl,
) -> Result<(AtomState, Trajectory)> {
    protocol.validate()?;
    if !(state.p_e > 0.0 && state.p_e < 1.0) {
        return Err(invalid("p_e", "population must lie in (0, 1)"));
    }
    if stroke.is_adiabatic() {
        return Ok((state, adiabat(state, protocol, stroke)));
    }
    let iso = protocol.isothermal(stroke, coupling)?;
    let (end, mut traj) = evolve_isothermal(state, &iso, control)?;
    let t0 = protocol.stroke_start(stroke);
    for s in &mut traj.samples {
        s.t += t0;
    }
    traj.stroke = Some(stroke);
    Ok((end, traj))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relaxes_to_equilibrium_at_fixed_frequency() {
        let st = IsothermalStroke::new(0.5, 1.0, 1.3, 0.0, 60.0).unwrap();
        let (end, traj) = evolve_isothermal(AtomState::new(0.9).unwrap(), &st, &StepControl::default()).unwrap();
        assert!((end.p_e - equilibrium_population(0.5, 1.3)).abs() < 1e-12);
        assert_eq!(traj.work_on, 0.0);
        assert!(traj.entropy_production > 0.0);
    }

    #[test]
    fn constant_coefficients_match_exponential() {
        let st = IsothermalStroke::new(0.7, 0.3, 2.0, 0.0, 5.0).unwrap();
        let (k, c) = st.rates_at(0.0);
        let p0 = 0.05;
        let (end, _) = evolve_isothermal(AtomState::new(p0).unwrap(), &st, &StepControl::default()).unwrap();
        let exact = c / k + (p0 - c / k) * (-k * 5.0).exp();
        assert!((end.p_e - exact).abs() < 1e-12);
    }

    #[test]
    fn adiabat_keeps_population() {
        let proto = CycleProtocol::new(1.0, -0.2, 0.72, 0.18, 2.0, 3.0, 0.5).unwrap();
        let c = BathCoupling::new(0.1, 1.0 / 9.0, 1.0, 1.0).unwrap();
        let s = AtomState::new(0.37).unwrap();
        for stroke in [Stroke::HotToCold, Stroke::ColdToHot] {
            let (e, t) = evolve_stroke(s, &proto, &c, stroke, &StepControl::default()).unwrap();
            assert_eq!(e.p_e, 0.37);
            assert_eq!(t.heat(), 0.0);
        }
    }

    #[test]
    fn trajectory_is_time_ordered_and_offset() {
        let proto = CycleProtocol::new(1.0, -0.2, 0.72, 0.18, 2.0, 3.0, 0.5).unwrap();
        let c = BathCoupling::new(0.1, 1.0 / 9.0, 1.0, 1.0).unwrap();
        let s = AtomState::thermal(1.0 / 9.0, 0.72);
        let (_, t) = evolve_stroke(s, &proto, &c, Stroke::Cold, &StepControl::default()).unwrap();
        assert_eq!(t.samples.first().unwrap().t, 2.5);
        assert!((t.samples.last().unwrap().t - 5.5).abs() < 1e-12);
        assert!(t.samples.windows(2).all(|w| w[1].t > w[0].t));
    }

    #[test]
    fn entropy_production_equals_entropy_balance() {
        let st = IsothermalStroke::new(0.1, 1.0, 1.0, 0.1, 3.0).unwrap();
        let s0 = AtomState::thermal(0.1, 1.0);
        let (end, traj) = evolve_isothermal(s0, &st, &StepControl::default()).unwrap();
        let ds = super::super::binary_entropy(end.p_e) - super::super::binary_entropy(s0.p_e);
        let balance = ds - 0.1 * traj.heat();
        assert!(
            ((balance - traj.entropy_production) / balance).abs() < 1e-6,
            "{balance} {}",
            traj.entropy_production
        );
    }
}
