//! Two-level atom driven through a four-stroke Carnot-like cycle.
//!
//! The atom's density matrix stays diagonal, so the state is the excited
//! population `p_e`, which obeys `dp/dt = -kappa(t) p + C(t)`.

mod analytic;
mod cycle;
mod integrate;
mod ledger;

pub use analytic::{
    couplings_for_zeta, dissipation_coefficient, effective_rate, formal_solution, m_coefficient, si_high_t,
    si_high_t_leading, si_high_t_plateau, si_low_t, si_low_t_long, si_low_t_short,
};
pub use cycle::{find_steady_cycle, CycleResult, SteadyCycleOptions};
pub use integrate::{evolve_isothermal, evolve_stroke, StepControl, Trajectory, TrajectorySample};
pub use ledger::{binary_entropy, relative_entropy, stroke_ledger, stroke_ledger_for, StrokeLedger};

use crate::bounds::EngineSpec;
use crate::error::{invalid, Error, Result};

/// Piecewise-linear frequency schedule of one cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleProtocol {
    pub omega_h_start: f64,
    pub eps_h: f64,
    pub omega_c_start: f64,
    pub eps_c: f64,
    pub t_h: f64,
    pub t_c: f64,
    pub delta: f64,
}

impl CycleProtocol {
    pub fn new(
        omega_h_start: f64,
        eps_h: f64,
        omega_c_start: f64,
        eps_c: f64,
        t_h: f64,
        t_c: f64,
        delta: f64,
    ) -> Result<Self> {
        let p = Self {
            omega_h_start,
            eps_h,
            omega_c_start,
            eps_c,
            t_h,
            t_c,
            delta,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds a protocol from the four endpoint frequencies.
    pub fn from_endpoints(omega_h: (f64, f64), omega_c: (f64, f64), t_h: f64, t_c: f64, delta: f64) -> Result<Self> {
        Self::new(
            omega_h.0,
            omega_h.1 - omega_h.0,
            omega_c.0,
            omega_c.1 - omega_c.0,
            t_h,
            t_c,
            delta,
        )
    }

    /// Endpoints used when nothing else is configured: `omega_h` from 1 to 0.6,
    /// `omega_c` from 0.54 to 0.9, unit stroke times and instantaneous adiabats.
    /// With `beta_h = 1/10`, `beta_c = 1/9` both adiabats connect thermal states.
    pub fn default_cycle() -> Self {
        Self {
            omega_h_start: 1.0,
            eps_h: -0.4,
            omega_c_start: 0.54,
            eps_c: 0.36,
            t_h: 1.0,
            t_c: 1.0,
            delta: 0.0,
        }
    }

    pub fn with_times(mut self, t_h: f64, t_c: f64) -> Result<Self> {
        self.t_h = t_h;
        self.t_c = t_c;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let freqs = [
            ("omega_h_start", self.omega_h_start),
            ("omega_h_end", self.omega_h_end()),
            ("omega_c_start", self.omega_c_start),
            ("omega_c_end", self.omega_c_end()),
        ];
        for (name, w) in freqs {
            if !(w.is_finite() && w > 0.0) {
                return Err(invalid(name, "frequencies must stay positive (no level crossing)"));
            }
        }
        if !(self.t_h.is_finite() && self.t_h > 0.0) {
            return Err(invalid("t_h", "must be positive"));
        }
        if !(self.t_c.is_finite() && self.t_c > 0.0) {
            return Err(invalid("t_c", "must be positive"));
        }
        if !(self.delta.is_finite() && self.delta >= 0.0) {
            return Err(invalid("delta", "must be non-negative"));
        }
        Ok(())
    }

    pub fn omega_h_end(&self) -> f64 {
        self.omega_h_start + self.eps_h
    }

    pub fn omega_c_end(&self) -> f64 {
        self.omega_c_start + self.eps_c
    }

    pub fn period(&self) -> f64 {
        self.t_h + self.t_c + 2.0 * self.delta
    }

    /// Start time of a stroke within the cycle.
    pub fn stroke_start(&self, stroke: Stroke) -> f64 {
        match stroke {
            Stroke::Hot => 0.0,
            Stroke::HotToCold => self.t_h,
            Stroke::Cold => self.t_h + self.delta,
            Stroke::ColdToHot => self.t_h + self.delta + self.t_c,
        }
    }

    pub fn stroke_duration(&self, stroke: Stroke) -> f64 {
        match stroke {
            Stroke::Hot => self.t_h,
            Stroke::Cold => self.t_c,
            Stroke::HotToCold | Stroke::ColdToHot => self.delta,
        }
    }

    /// Frequencies at the beginning and end of a stroke.
    pub fn stroke_endpoints(&self, stroke: Stroke) -> (f64, f64) {
        match stroke {
            Stroke::Hot => (self.omega_h_start, self.omega_h_end()),
            Stroke::HotToCold => (self.omega_h_end(), self.omega_c_start),
            Stroke::Cold => (self.omega_c_start, self.omega_c_end()),
            Stroke::ColdToHot => (self.omega_c_end(), self.omega_h_start),
        }
    }

    /// The stroke active at cycle time `t`. Boundaries belong to the earlier
    /// stroke, except `t = 0`.
    pub fn stroke_at(&self, t: f64) -> Result<Stroke> {
        let period = self.period();
        let slack = 1e-12 * period;
        if !(t >= -slack && t <= period + slack) {
            return Err(Error::TimeOutOfRange { t, period });
        }
        let order = [Stroke::Hot, Stroke::HotToCold, Stroke::Cold, Stroke::ColdToHot];
        for s in order {
            if t <= self.stroke_start(s) + self.stroke_duration(s) && self.stroke_duration(s) > 0.0 {
                return Ok(s);
            }
        }
        Ok(Stroke::Cold)
    }

    /// Isothermal description of the hot or cold stroke.
    pub fn isothermal(&self, stroke: Stroke, coupling: &BathCoupling) -> Result<IsothermalStroke> {
        let (beta, gamma) = coupling
            .bath(stroke)
            .ok_or_else(|| invalid("stroke", "adiabatic strokes have no bath"))?;
        let (w0, _) = self.stroke_endpoints(stroke);
        let eps = match stroke {
            Stroke::Hot => self.eps_h,
            _ => self.eps_c,
        };
        IsothermalStroke::new(beta, gamma, w0, eps, self.stroke_duration(stroke))
    }

    /// Low-dissipation parameters of this protocol.
    ///
    /// `M_x` are the exact long-time dissipation coefficients of each stroke,
    /// and the reversible heat comes from the equilibrium entropies at the
    /// hot-stroke endpoints.
    pub fn engine_spec(&self, coupling: &BathCoupling) -> Result<EngineSpec> {
        let q_rev = reversible_heat(self, coupling);
        if !(q_rev > 0.0) {
            return Err(invalid(
                "eps_h",
                "the hot stroke must lower omega so the atom absorbs heat reversibly",
            ));
        }
        let m_h = dissipation_coefficient(coupling.beta_h, self.omega_h_start, self.eps_h, coupling.gamma_h);
        let m_c = dissipation_coefficient(coupling.beta_c, self.omega_c_start, self.eps_c, coupling.gamma_c);
        EngineSpec::new(m_h, m_c, 1.0 / coupling.beta_h, 1.0 / coupling.beta_c, q_rev)
    }
}

/// Reversible heat taken from the hot bath, `T_h` times the change of the
/// equilibrium entropy across the hot stroke.
pub fn reversible_heat(protocol: &CycleProtocol, coupling: &BathCoupling) -> f64 {
    let b = coupling.beta_h;
    let s_i = binary_entropy(equilibrium_population(b, protocol.omega_h_start));
    let s_f = binary_entropy(equilibrium_population(b, protocol.omega_h_end()));
    (s_f - s_i) / b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stroke {
    Hot,
    HotToCold,
    Cold,
    ColdToHot,
}

impl Stroke {
    pub fn is_adiabatic(self) -> bool {
        matches!(self, Stroke::HotToCold | Stroke::ColdToHot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathCoupling {
    pub beta_h: f64,
    pub beta_c: f64,
    pub gamma_h: f64,
    pub gamma_c: f64,
}

impl BathCoupling {
    pub fn new(beta_h: f64, beta_c: f64, gamma_h: f64, gamma_c: f64) -> Result<Self> {
        for (name, v) in [
            ("beta_h", beta_h),
            ("beta_c", beta_c),
            ("gamma_h", gamma_h),
            ("gamma_c", gamma_c),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, "must be positive"));
            }
        }
        if beta_h >= beta_c {
            return Err(invalid("beta_h", "hot bath must be hotter (beta_h < beta_c)"));
        }
        Ok(Self {
            beta_h,
            beta_c,
            gamma_h,
            gamma_c,
        })
    }

    /// `(beta, gamma)` of the bath in contact during `stroke`.
    pub fn bath(&self, stroke: Stroke) -> Option<(f64, f64)> {
        match stroke {
            Stroke::Hot => Some((self.beta_h, self.gamma_h)),
            Stroke::Cold => Some((self.beta_c, self.gamma_c)),
            _ => None,
        }
    }

    pub fn carnot_efficiency(&self) -> f64 {
        1.0 - self.beta_h / self.beta_c
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomState {
    pub p_e: f64,
}

impl AtomState {
    pub fn new(p_e: f64) -> Result<Self> {
        if !(p_e > 0.0 && p_e < 1.0) {
            return Err(invalid("p_e", "population must lie in (0, 1)"));
        }
        Ok(Self { p_e })
    }

    pub fn thermal(beta: f64, omega: f64) -> Self {
        Self {
            p_e: equilibrium_population(beta, omega),
        }
    }
}

/// A single bath-contact stroke with `omega(s) = omega0 + eps s / duration`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsothermalStroke {
    pub beta: f64,
    pub gamma: f64,
    pub omega0: f64,
    pub eps: f64,
    pub duration: f64,
}

impl IsothermalStroke {
    pub fn new(beta: f64, gamma: f64, omega0: f64, eps: f64, duration: f64) -> Result<Self> {
        for (name, v) in [
            ("beta", beta),
            ("gamma", gamma),
            ("omega0", omega0),
            ("duration", duration),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, "must be positive"));
            }
        }
        if !eps.is_finite() || omega0 + eps <= 0.0 {
            return Err(invalid("eps", "final frequency must stay positive"));
        }
        Ok(Self {
            beta,
            gamma,
            omega0,
            eps,
            duration,
        })
    }

    pub fn omega(&self, s: f64) -> f64 {
        self.omega0 + self.eps * s / self.duration
    }

    pub fn omega_end(&self) -> f64 {
        self.omega0 + self.eps
    }

    /// Relaxation rate `kappa = gamma coth(beta omega / 2)` and pump `C = gamma n`.
    pub fn rates_at(&self, s: f64) -> (f64, f64) {
        bath_rates(self.beta, self.gamma, self.omega(s))
    }

    /// Largest relaxation rate along the stroke; `coth` decreases in `omega`.
    pub fn max_rate(&self) -> f64 {
        let w = self.omega0.min(self.omega_end());
        bath_rates(self.beta, self.gamma, w).0
    }
}

/// Bose occupation `1/(e^{beta omega} - 1)`.
pub fn occupation(beta: f64, omega: f64) -> f64 {
    1.0 / (beta * omega).exp_m1()
}

/// Thermal excited population `1/(e^{beta omega} + 1)`.
pub fn equilibrium_population(beta: f64, omega: f64) -> f64 {
    let x = beta * omega;
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

fn bath_rates(beta: f64, gamma: f64, omega: f64) -> (f64, f64) {
    let n = occupation(beta, omega);
    (gamma * (2.0 * n + 1.0), gamma * n)
}

/// Frequency at cycle time `t`.
pub fn omega_at(protocol: &CycleProtocol, t: f64) -> Result<f64> {
    let stroke = protocol.stroke_at(t)?;
    let (w0, w1) = protocol.stroke_endpoints(stroke);
    let d = protocol.stroke_duration(stroke);
    let s = (t - protocol.stroke_start(stroke)).clamp(0.0, d);
    Ok(if d > 0.0 { w0 + (w1 - w0) * s / d } else { w1 })
}

/// `(kappa, C)` at cycle time `t`; both vanish on the adiabats.
pub fn rates(protocol: &CycleProtocol, coupling: &BathCoupling, t: f64) -> Result<(f64, f64)> {
    let stroke = protocol.stroke_at(t)?;
    match coupling.bath(stroke) {
        Some((beta, gamma)) => Ok(bath_rates(beta, gamma, omega_at(protocol, t)?)),
        None => Ok((0.0, 0.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn proto(delta: f64) -> CycleProtocol {
        CycleProtocol::new(1.0, -0.2, 0.72, 0.18, 2.0, 3.0, delta).unwrap()
    }

    #[test]
    fn schedule_endpoints() {
        let p = proto(0.5);
        assert_eq!(omega_at(&p, 0.0).unwrap(), 1.0);
        assert!((omega_at(&p, 2.0).unwrap() - 0.8).abs() < 1e-15);
        assert!((omega_at(&p, 2.25).unwrap() - 0.76).abs() < 1e-15);
        assert!((omega_at(&p, 2.5).unwrap() - 0.72).abs() < 1e-15);
        assert!((omega_at(&p, 5.5).unwrap() - 0.9).abs() < 1e-15);
        assert!((omega_at(&p, 6.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(omega_at(&p, 6.1).is_err());
        assert!(omega_at(&p, -0.1).is_err());
    }

    #[test]
    fn zero_delta_schedule() {
        let p = proto(0.0);
        assert!((omega_at(&p, 2.0).unwrap() - 0.8).abs() < 1e-15);
        assert!((omega_at(&p, 2.0 + 1e-9).unwrap() - 0.72).abs() < 1e-9);
        assert!((omega_at(&p, 5.0).unwrap() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn rate_limits() {
        let c = BathCoupling::new(0.1, 1.0 / 9.0, 2.0, 3.0).unwrap();
        let p = proto(0.5);
        assert_eq!(rates(&p, &c, 2.2).unwrap(), (0.0, 0.0));
        let (k, cp) = bath_rates(1e3, 2.0, 1.0);
        assert!((k - 2.0).abs() < 1e-300 && cp < 1e-300);
        let (k, _) = bath_rates(1e-3, 2.0, 1.0);
        assert!(((k - 2.0 * 2.0 / 1e-3) / k).abs() < 1e-6);
        let (k, cp) = rates(&p, &c, 0.0).unwrap();
        assert!((k - 2.0 / (0.05f64).tanh()).abs() < 1e-10 && cp > 0.0);
    }

    #[test]
    fn equilibrium_limits() {
        assert!((equilibrium_population(1e-12, 1.0) - 0.5).abs() < 1e-12);
        assert!(equilibrium_population(800.0, 1.0) < 1e-300);
        let (k, c) = bath_rates(0.3, 1.7, 1.2);
        assert!((c / k - equilibrium_population(0.3, 1.2)).abs() < 1e-15);
    }

    #[test]
    fn invalid_inputs() {
        assert!(CycleProtocol::new(1.0, -1.0, 0.5, 0.1, 1.0, 1.0, 0.0).is_err());
        assert!(CycleProtocol::new(1.0, -0.1, 0.5, 0.1, 0.0, 1.0, 0.0).is_err());
        assert!(CycleProtocol::new(1.0, -0.1, 0.5, 0.1, 1.0, 1.0, -1.0).is_err());
        assert!(BathCoupling::new(0.2, 0.1, 1.0, 1.0).is_err());
        assert!(AtomState::new(1.0).is_err());
    }
}
