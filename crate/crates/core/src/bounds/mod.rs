//! Phenomenological low-dissipation engine and its efficiency-power bounds.
//!
//! The engine exchanges heat `Q_x = Q_x^(r) - M_x / t_x` with each bath, where
//! `M_x` is the dissipation coefficient of the isothermal stroke of duration
//! `t_x`. Everything here is a closed form; numerical cross-checks live in
//! [`oracle`].

pub mod oracle;

use crate::error::{invalid, Error, Result};

/// Phenomenological low-dissipation engine (k_B = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineSpec {
    pub m_hot: f64,
    pub m_cold: f64,
    pub t_hot_bath: f64,
    pub t_cold_bath: f64,
    /// Reversible heat taken from the hot bath, `Q_h^(r)`.
    pub q_rev: f64,
}

impl EngineSpec {
    pub fn new(m_hot: f64, m_cold: f64, t_hot_bath: f64, t_cold_bath: f64, q_rev: f64) -> Result<Self> {
        if !(m_hot >= 0.0 && m_hot.is_finite()) {
            return Err(invalid("m_hot", format!("must be finite and >= 0, got {m_hot}")));
        }
        if !(m_cold >= 0.0 && m_cold.is_finite()) {
            return Err(invalid("m_cold", format!("must be finite and >= 0, got {m_cold}")));
        }
        if m_hot == 0.0 && m_cold == 0.0 {
            return Err(invalid(
                "m_hot",
                "m_hot and m_cold cannot both be zero (P_max would be infinite)",
            ));
        }
        if !(t_cold_bath > 0.0 && t_cold_bath < t_hot_bath && t_hot_bath.is_finite()) {
            return Err(invalid(
                "t_cold_bath",
                format!("need 0 < T_c < T_h, got T_c={t_cold_bath}, T_h={t_hot_bath}"),
            ));
        }
        if !(q_rev > 0.0 && q_rev.is_finite()) {
            return Err(invalid("q_rev", format!("must be > 0, got {q_rev}")));
        }
        Ok(Self {
            m_hot,
            m_cold,
            t_hot_bath,
            t_cold_bath,
            q_rev,
        })
    }

    /// Builds a spec from a target Carnot efficiency, using `T_h = 1`.
    pub fn with_carnot(m_hot: f64, m_cold: f64, eta_c: f64, q_rev: f64) -> Result<Self> {
        check_eta_c(eta_c)?;
        Self::new(m_hot, m_cold, 1.0, 1.0 - eta_c, q_rev)
    }

    pub fn carnot_efficiency(&self) -> f64 {
        1.0 - self.t_cold_bath / self.t_hot_bath
    }

    /// `M = (sqrt(M_h) + sqrt(M_c))^2`.
    pub fn total_dissipation(&self) -> f64 {
        let s = self.m_hot.sqrt() + self.m_cold.sqrt();
        s * s
    }

    /// Dissipation asymmetry in `[-1, 1]`.
    pub fn zeta(&self) -> f64 {
        let (a, b) = (self.m_hot.sqrt(), self.m_cold.sqrt());
        (a - b) / (a + b)
    }

    /// `eta_C * Q_h^(r)`, the reversible work per cycle.
    pub fn reversible_work(&self) -> f64 {
        self.carnot_efficiency() * self.q_rev
    }

    /// Cycle power; negative when dissipation exceeds the reversible work.
    pub fn power(&self, times: StrokeTimes) -> f64 {
        self.net_work(times) / times.total()
    }

    fn net_work(&self, times: StrokeTimes) -> f64 {
        self.reversible_work() - self.m_hot / times.t_h - self.m_cold / times.t_c
    }

    pub fn efficiency(&self, times: StrokeTimes) -> Result<f64> {
        let intake = self.q_rev - self.m_hot / times.t_h;
        if !(intake > 0.0) {
            return Err(Error::InvalidRegime(intake));
        }
        Ok(self.net_work(times) / intake)
    }

    /// Heats `(Q_h, Q_c)` exchanged per cycle; `Q_c` is negative for an engine.
    pub fn heats(&self, times: StrokeTimes) -> (f64, f64) {
        let q_h = self.q_rev - self.m_hot / times.t_h;
        let q_c = -(1.0 - self.carnot_efficiency()) * self.q_rev - self.m_cold / times.t_c;
        (q_h, q_c)
    }

    /// `(eta_C Q_h^(r))^2 / (4 M)`.
    pub fn p_max(&self) -> f64 {
        let w = self.reversible_work();
        w * w / (4.0 * self.total_dissipation())
    }

    /// Stroke times at maximum power, `t_x = sqrt(M_x / P_max)`.
    pub fn emp_times(&self) -> Result<StrokeTimes> {
        if self.m_hot <= 0.0 || self.m_cold <= 0.0 {
            return Err(invalid("m_hot", "emp_times needs M_h > 0 and M_c > 0"));
        }
        let p_max = self.p_max();
        StrokeTimes::new((self.m_hot / p_max).sqrt(), (self.m_cold / p_max).sqrt())
    }

    pub fn normalized_power(&self, p: f64) -> f64 {
        p / self.p_max()
    }

    /// Maps stroke times to the normalized `(P/P_max, eta/eta_C)` plane.
    pub fn normalize(&self, times: StrokeTimes) -> Result<NormalizedPoint> {
        let eta = self.efficiency(times)?;
        Ok(NormalizedPoint {
            p_norm: self.normalized_power(self.power(times)),
            eta_norm: eta / self.carnot_efficiency(),
        })
    }

    fn check_power(&self, p: f64) -> Result<f64> {
        let p_max = self.p_max();
        if !(p > 0.0 && p <= p_max) {
            return Err(Error::PowerOutOfRange { power: p, p_max });
        }
        Ok(p / p_max)
    }

    /// Admissible total time `tau_- <= t_h + t_c <= tau_+` at power `p`.
    pub fn tau_window(&self, p: f64) -> Result<BoundWindow> {
        let p_norm = self.check_power(p)?;
        let s = (1.0 - p_norm).max(0.0).sqrt();
        let scale = self.reversible_work() / (2.0 * p);
        Ok(BoundWindow {
            tau_minus: scale * (1.0 - s),
            tau_plus: scale * (1.0 + s),
        })
    }

    /// Point on `t_h + t_c = tau_+` where the efficiency level curve is tangent.
    ///
    /// The efficiency there equals [`eta_upper`]. The point generally lies off
    /// the power level set (its power is below `p`), since the closed-form bound
    /// maximizes over the whole admissible window.
    pub fn times_at_upper_bound(&self, p: f64) -> Result<StrokeTimes> {
        let p_norm = self.check_power(p)?;
        let eta_c = self.carnot_efficiency();
        let eta_norm = eta_upper(p_norm, self.zeta(), eta_c)?;
        let tau = self.tau_window(p)?.tau_plus;
        let denom = (1.0 - eta_norm) * self.reversible_work();
        if !(denom > 0.0) {
            return Err(Error::Degenerate(format!(
                "upper bound reaches Carnot at P~={p_norm}; tangency escapes to infinity"
            )));
        }
        let b = ((1.0 - eta_norm * eta_c) * self.m_hot - self.m_cold) / denom - tau;
        let t_c = -0.5 * b;
        let t_h = tau - t_c;
        if t_c < 0.0 || t_h < 0.0 {
            return Err(Error::Degenerate(format!("tangency times ({t_h}, {t_c}) negative")));
        }
        StrokeTimes::limit(t_h, t_c.max(0.0))
    }

    /// Tangency of the power level curve with `t_h + t_c = tau_-`.
    ///
    /// This is the double root of the quadratic in `t_h` obtained by putting
    /// `t_c = tau_- - t_h` into the power, `t_h = tau_- (1 + zeta) / 2`.
    pub fn th_at_lower_bound(&self, p: f64) -> Result<StrokeTimes> {
        self.check_power(p)?;
        let tau = self.tau_window(p)?.tau_minus;
        let zeta = self.zeta();
        let t_h = 0.5 * tau * (1.0 + zeta);
        let t_c = tau - t_h;
        if t_c < -1e-12 * tau {
            return Err(Error::Degenerate(format!("t_c = {t_c} <= 0")));
        }
        StrokeTimes::limit(t_h, t_c.max(0.0))
    }

    /// Maximum power of the tight-coupling minimally nonlinear model expressed
    /// with low-dissipation parameters. Depends on the stroke times and equals
    /// [`EngineSpec::p_max`] only at [`EngineSpec::emp_times`].
    pub fn mni_pmax(&self, times: StrokeTimes) -> f64 {
        let w = self.reversible_work();
        let rate = self.m_hot / times.t_h + self.m_cold / times.t_c;
        w * w / (4.0 * rate * times.total())
    }
}

/// Durations of the hot and cold isothermal strokes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrokeTimes {
    pub t_h: f64,
    pub t_c: f64,
}

impl StrokeTimes {
    pub fn new(t_h: f64, t_c: f64) -> Result<Self> {
        if !(t_h > 0.0 && t_h.is_finite()) {
            return Err(invalid("t_h", format!("must be > 0, got {t_h}")));
        }
        if !(t_c > 0.0 && t_c.is_finite()) {
            return Err(invalid("t_c", format!("must be > 0, got {t_c}")));
        }
        Ok(Self { t_h, t_c })
    }

    /// Like [`StrokeTimes::new`] but admits a zero stroke, the limit reached by
    /// the bound solvers when one dissipation coefficient vanishes.
    pub fn limit(t_h: f64, t_c: f64) -> Result<Self> {
        if !(t_h >= 0.0 && t_c >= 0.0 && t_h + t_c > 0.0 && (t_h + t_c).is_finite()) {
            return Err(invalid(
                "t_h",
                format!("need t_h, t_c >= 0 with positive sum, got ({t_h}, {t_c})"),
            ));
        }
        Ok(Self { t_h, t_c })
    }

    pub fn total(&self) -> f64 {
        self.t_h + self.t_c
    }
}

/// Power and efficiency normalized by `P_max` and `eta_C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedPoint {
    pub p_norm: f64,
    pub eta_norm: f64,
}

impl NormalizedPoint {
    pub fn new(p_norm: f64, eta_norm: f64) -> Result<Self> {
        check_p_norm(p_norm)?;
        if !eta_norm.is_finite() {
            return Err(invalid("eta_norm", "must be finite"));
        }
        Ok(Self { p_norm, eta_norm })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundWindow {
    pub tau_minus: f64,
    pub tau_plus: f64,
}

fn check_p_norm(p_norm: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p_norm) {
        return Err(invalid("p_norm", format!("must lie in [0, 1], got {p_norm}")));
    }
    Ok(())
}

fn check_zeta(zeta: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&zeta) {
        return Err(invalid("zeta", format!("must lie in [-1, 1], got {zeta}")));
    }
    Ok(())
}

fn check_eta_c(eta_c: f64) -> Result<()> {
    if !(eta_c > 0.0 && eta_c < 1.0) {
        return Err(invalid("eta_c", format!("must lie in (0, 1), got {eta_c}")));
    }
    Ok(())
}

/// Upper bound on `eta/eta_C` at normalized power `p_norm` for an engine with
/// dissipation asymmetry `zeta`.
pub fn eta_upper(p_norm: f64, zeta: f64, eta_c: f64) -> Result<f64> {
    check_p_norm(p_norm)?;
    check_zeta(zeta)?;
    check_eta_c(eta_c)?;
    let s = (1.0 - p_norm).sqrt();
    let a = (1.0 + s) * (1.0 + s);
    let k = 0.25 * (1.0 + zeta) * (1.0 + zeta) * eta_c;
    let den = a + (1.0 - k) * p_norm;
    let root = (0.5 * eta_c * (k - zeta) * (1.0 - s) + 1.0 - eta_c).max(0.0).sqrt();
    let bracket = 1.0 - root - 0.25 * (1.0 + zeta) * eta_c * (1.0 - s);
    Ok(a / den + (1.0 - zeta * zeta) * p_norm * (1.0 + s) / (den * den) * bracket)
}

/// Detailed lower bound on `eta/eta_C` at normalized power `p_norm`.
pub fn eta_lower_detailed(p_norm: f64, zeta: f64, eta_c: f64) -> Result<f64> {
    check_p_norm(p_norm)?;
    check_zeta(zeta)?;
    check_eta_c(eta_c)?;
    let s = (1.0 - p_norm).sqrt();
    Ok(0.5 * (1.0 - s) / (1.0 - 0.125 * eta_c * (1.0 + zeta) * (1.0 + s)))
}

/// Normalized efficiency at the tangency of the power level curve with
/// `t_h + t_c = tau_-` (see [`EngineSpec::th_at_lower_bound`]).
///
/// Not a lower bound in general: points on the level set can fall below it.
pub fn eta_lower_tangent(p_norm: f64, zeta: f64, eta_c: f64) -> Result<f64> {
    check_p_norm(p_norm)?;
    check_zeta(zeta)?;
    check_eta_c(eta_c)?;
    let s = (1.0 - p_norm).sqrt();
    Ok(0.5 * (1.0 - s) / (1.0 - 0.25 * eta_c * (1.0 + zeta) * (1.0 + s)))
}

/// Universal upper curve: `1 - (1-eta_C) P~ / (2(1+sqrt(1-P~)) - eta_C P~)`.
pub fn universal_upper(p_norm: f64, eta_c: f64) -> Result<f64> {
    check_p_norm(p_norm)?;
    check_eta_c(eta_c)?;
    let s = (1.0 - p_norm).sqrt();
    Ok(1.0 - (1.0 - eta_c) * p_norm / (2.0 * (1.0 + s) - eta_c * p_norm))
}

/// Universal lower curve: `(1 - sqrt(1-P~)) / 2`.
pub fn universal_lower(p_norm: f64) -> Result<f64> {
    check_p_norm(p_norm)?;
    Ok(0.5 * (1.0 - (1.0 - p_norm).sqrt()))
}

/// Slack of the universal efficiency-power constraint; nonnegative for every
/// realizable low-dissipation engine.
pub fn universal_constraint_slack(point: NormalizedPoint, eta_c: f64) -> Result<f64> {
    Ok(universal_upper(point.p_norm, eta_c)? - point.eta_norm)
}

/// Slack of `2 eta~ + sqrt(1 - P~) >= 1`.
pub fn universal_lower_slack(point: NormalizedPoint) -> Result<f64> {
    check_p_norm(point.p_norm)?;
    Ok(2.0 * point.eta_norm + (1.0 - point.p_norm).sqrt() - 1.0)
}

/// Result of a finite-difference scan of `d eta_upper / d zeta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityScan {
    pub min_derivative: f64,
    pub at_p_norm: f64,
    pub at_zeta: f64,
}

/// Minimum of the finite-difference derivative `d eta_upper / d zeta` over a
/// uniform `(P~, zeta)` grid on `[0,1] x [-1,1]`. Central differences in the
/// interior, one-sided at `zeta = +-1`.
pub fn monotonicity_scan(eta_c: f64, grid_p: usize, grid_zeta: usize, h: f64) -> Result<MonotonicityScan> {
    check_eta_c(eta_c)?;
    if grid_p < 2 || grid_zeta < 2 {
        return Err(invalid("grid_p", "grid sizes must be >= 2"));
    }
    if !(h > 0.0 && h <= 1e-3) {
        return Err(invalid("h", format!("step must lie in (0, 1e-3], got {h}")));
    }
    let mut best = MonotonicityScan {
        min_derivative: f64::INFINITY,
        at_p_norm: f64::NAN,
        at_zeta: f64::NAN,
    };
    for i in 0..grid_p {
        let p = i as f64 / (grid_p - 1) as f64;
        for j in 0..grid_zeta {
            let z = -1.0 + 2.0 * j as f64 / (grid_zeta - 1) as f64;
            let hi = (z + h).min(1.0);
            let lo = (z - h).max(-1.0);
            let d = (eta_upper(p, hi, eta_c)? - eta_upper(p, lo, eta_c)?) / (hi - lo);
            if d < best.min_derivative {
                best = MonotonicityScan {
                    min_derivative: d,
                    at_p_norm: p,
                    at_zeta: z,
                };
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_engine() -> EngineSpec {
        EngineSpec::new(9.0, 1.0, 10.0, 4.0, 10.0).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn carnot_values() {
        let s = EngineSpec::new(1.0, 1.0, 10.0, 9.0, 1.0).unwrap();
        assert!((s.carnot_efficiency() - 0.1).abs() < 1e-15);
        assert!((reference_engine().carnot_efficiency() - 0.6).abs() < 1e-15);
        let cold = EngineSpec::new(1.0, 1.0, 10.0, 1e-12, 1.0).unwrap();
        assert!((cold.carnot_efficiency() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spec_validation() {
        assert!(EngineSpec::new(0.0, 0.0, 10.0, 4.0, 1.0).is_err());
        assert!(EngineSpec::new(-1.0, 1.0, 10.0, 4.0, 1.0).is_err());
        assert!(EngineSpec::new(1.0, 1.0, 4.0, 10.0, 1.0).is_err());
        assert!(EngineSpec::new(1.0, 1.0, 10.0, 4.0, 0.0).is_err());
        assert!(EngineSpec::new(0.0, 1.0, 10.0, 4.0, 1.0).is_ok());
        assert!(StrokeTimes::new(0.0, 1.0).is_err());
        assert!(StrokeTimes::limit(0.0, 1.0).is_ok());
    }

    #[test]
    fn reference_power_efficiency_and_emp() {
        let s = reference_engine();
        assert!((s.p_max() - 0.5625).abs() < 1e-15);
        let t = s.emp_times().unwrap();
        assert!((t.t_h - 4.0).abs() < 1e-14 && (t.t_c - 4.0 / 3.0).abs() < 1e-14);
        assert!(rel(s.power(t), 0.5625) < 1e-14);
        let eta = s.efficiency(t).unwrap();
        assert!(rel(eta, 3.0 / 7.75) < 1e-14);
        assert!(rel(eta / 0.6, 0.645161290322580) < 1e-12);
    }

    #[test]
    fn power_limits_and_sign() {
        let s = reference_engine();
        let far = StrokeTimes::new(1e9, 1e9).unwrap();
        assert!(s.power(far).abs() < 1e-8);
        assert!((s.efficiency(far).unwrap() - 0.6).abs() < 1e-8);
        let short = StrokeTimes::new(1.0, 0.1).unwrap();
        assert!(s.power(short) < 0.0);
        // zero-work cycle: M_h/t_h = eta_C Q - M_c/t_c
        let t_c = 1.0;
        let t_h = 9.0 / (6.0 - 1.0);
        let z = StrokeTimes::new(t_h, t_c).unwrap();
        assert!(s.efficiency(z).unwrap().abs() < 1e-14);
    }

    #[test]
    fn efficiency_rejects_negative_intake() {
        let s = reference_engine();
        let t = StrokeTimes::new(0.5, 1.0).unwrap();
        assert!(matches!(s.efficiency(t), Err(Error::InvalidRegime(_))));
    }

    #[test]
    fn p_max_single_bath_and_symmetry() {
        let s = EngineSpec::new(4.0, 0.0, 10.0, 4.0, 10.0).unwrap();
        assert!(rel(s.p_max(), 36.0 / 16.0) < 1e-15);
        let sym = EngineSpec::new(2.0, 2.0, 10.0, 4.0, 10.0).unwrap();
        let t = sym.emp_times().unwrap();
        assert_eq!(t.t_h, t.t_c);
        assert_eq!(sym.zeta(), 0.0);
    }

    #[test]
    fn tau_window_values() {
        let s = reference_engine();
        let w = s.tau_window(0.3375).unwrap();
        assert!((w.tau_minus - 3.2670).abs() < 1e-3, "{w:?}");
        assert!((w.tau_plus - 14.5107).abs() < 1e-3, "{w:?}");
        let at_max = s.tau_window(s.p_max()).unwrap();
        assert_eq!(at_max.tau_minus, at_max.tau_plus);
        assert!(rel(at_max.tau_plus, 6.0 / (2.0 * 0.5625)) < 1e-15);
        assert!(matches!(s.tau_window(0.0), Err(Error::PowerOutOfRange { .. })));
        assert!(s.tau_window(0.5626).is_err());
        assert!(s.tau_window(-1.0).is_err());
    }

    #[test]
    fn eta_upper_endpoints() {
        for k in 1..10 {
            let ec = k as f64 / 10.0;
            assert!((eta_upper(1.0, 1.0, ec).unwrap() - 1.0 / (2.0 - ec)).abs() < 1e-14);
            for z in [-1.0, -0.3, 0.0, 0.5, 1.0] {
                assert_eq!(eta_upper(0.0, z, ec).unwrap(), 1.0);
            }
        }
        assert!((eta_upper(1.0, 0.5, 0.6).unwrap() - 0.650_981_700_386).abs() < 1e-11);
    }

    #[test]
    fn eta_upper_domain_errors() {
        assert!(eta_upper(1.5, 0.0, 0.5).is_err());
        assert!(eta_upper(-0.1, 0.0, 0.5).is_err());
        assert!(eta_upper(0.5, 1.1, 0.5).is_err());
        assert!(eta_upper(0.5, 0.0, 1.0).is_err());
        assert!(eta_upper(0.5, 0.0, 0.0).is_err());
        assert!(eta_upper(f64::NAN, 0.0, 0.5).is_err());
    }

    #[test]
    fn lower_bound_values() {
        assert!((eta_lower_detailed(1.0, 0.5, 0.6).unwrap() - 0.5 / 0.8875).abs() < 1e-15);
        assert_eq!(eta_lower_detailed(0.0, 0.3, 0.6).unwrap(), 0.0);
        for p in [0.1, 0.5, 0.9] {
            let a4 = 0.5 * (1.0 - (1.0f64 - p).sqrt());
            assert!((eta_lower_detailed(p, -1.0, 0.7).unwrap() - a4).abs() < 1e-15);
            assert!((universal_lower(p).unwrap() - a4).abs() < 1e-15);
        }
    }

    #[test]
    fn zeta_one_upper_equals_universal_curve() {
        for ec in [0.1, 0.5, 0.9] {
            for i in 0..=20 {
                let p = i as f64 / 20.0;
                let a = eta_upper(p, 1.0, ec).unwrap();
                let b = universal_upper(p, ec).unwrap();
                assert!((a - b).abs() < 1e-14, "p={p} ec={ec} {a} {b}");
            }
        }
    }

    #[test]
    fn slacks_at_boundary_points() {
        let ec = 0.3;
        let emp = NormalizedPoint::new(1.0, 1.0 / (2.0 - ec)).unwrap();
        assert!(universal_constraint_slack(emp, ec).unwrap().abs() < 1e-15);
        let carnot = NormalizedPoint::new(0.0, 1.0).unwrap();
        assert_eq!(universal_constraint_slack(carnot, ec).unwrap(), 0.0);
        assert_eq!(
            universal_lower_slack(NormalizedPoint::new(1.0, 0.5).unwrap()).unwrap(),
            0.0
        );
        assert_eq!(
            universal_lower_slack(NormalizedPoint::new(0.0, 0.0).unwrap()).unwrap(),
            0.0
        );
        assert!(NormalizedPoint::new(1.2, 0.5).is_err());
    }

    #[test]
    fn upper_bound_tangency_times() {
        let s = reference_engine();
        let p = 0.6 * s.p_max();
        let t = s.times_at_upper_bound(p).unwrap();
        let w = s.tau_window(p).unwrap();
        assert!(rel(t.total(), w.tau_plus) < 1e-12);
        assert!((w.tau_plus - 14.5107).abs() < 1e-3);
        let eta = s.efficiency(t).unwrap() / 0.6;
        assert!(rel(eta, eta_upper(0.6, 0.5, 0.6).unwrap()) < 1e-9);
        assert!(s.power(t) <= p * (1.0 + 1e-12));
    }

    #[test]
    fn upper_tangency_discriminant_vanishes_symmetric() {
        let s = EngineSpec::new(2.0, 2.0, 10.0, 5.0, 8.0).unwrap();
        let p = 0.4 * s.p_max();
        let eta_n = eta_upper(0.4, 0.0, 0.5).unwrap();
        let tau = s.tau_window(p).unwrap().tau_plus;
        let d = (1.0 - eta_n) * s.reversible_work();
        let b = ((1.0 - eta_n * 0.5) * 2.0 - 2.0) / d - tau;
        let c = 2.0 * tau / d;
        let disc = b * b - 4.0 * c;
        assert!(disc.abs() < 1e-9 * b * b, "disc={disc}");
        let t = s.times_at_upper_bound(p).unwrap();
        assert!(rel(t.t_c, -0.5 * b) < 1e-12);
    }

    #[test]
    fn lower_bound_tangency_times() {
        let s = reference_engine();
        let p = 0.6 * s.p_max();
        let t = s.th_at_lower_bound(p).unwrap();
        let w = s.tau_window(p).unwrap();
        assert!(rel(t.total(), w.tau_minus) < 1e-12);
        assert!((w.tau_minus - 3.2671).abs() < 1e-3);
        // zero discriminant of t_h^2 - (tau + (Mh-Mc)/(u - p tau)) t_h + Mh tau/(u - p tau)
        let u = s.reversible_work();
        let tau = w.tau_minus;
        let b = tau + 8.0 / (u - p * tau);
        let c = 9.0 * tau / (u - p * tau);
        assert!((b * b - 4.0 * c).abs() < 1e-10 * b * b);
        assert!(rel(t.t_h, 0.5 * b) < 1e-12);
        // the tangency lies on the power level set
        assert!(rel(s.power(t), p) < 1e-12);
        let eta = s.efficiency(t).unwrap() / 0.6;
        assert!(rel(eta, eta_lower_tangent(0.6, 0.5, 0.6).unwrap()) < 1e-12);
        assert!(eta >= eta_lower_detailed(0.6, 0.5, 0.6).unwrap());
    }

    #[test]
    fn lower_tangency_limits() {
        let s = EngineSpec::new(0.0, 1.0, 10.0, 4.0, 10.0).unwrap();
        assert_eq!(s.zeta(), -1.0);
        let t = s.th_at_lower_bound(0.5 * s.p_max()).unwrap();
        assert_eq!(t.t_h, 0.0);
        assert!(t.t_c > 0.0);
    }

    #[test]
    fn mni_pmax_matches_at_emp() {
        let s = reference_engine();
        let t = s.emp_times().unwrap();
        assert!(rel(s.mni_pmax(t), s.p_max()) < 1e-14);
        let other = StrokeTimes::new(3.0, 2.0).unwrap();
        assert!(s.mni_pmax(other) < s.p_max());
        let sym = EngineSpec::new(3.0, 3.0, 10.0, 4.0, 10.0).unwrap();
        let eq = StrokeTimes::new(2.5, 2.5).unwrap();
        assert!(rel(sym.mni_pmax(eq), sym.p_max()) < 1e-14);
    }

    #[test]
    fn monotonicity_scan_behaviour() {
        let scan = monotonicity_scan(0.8, 50, 50, 1e-5).unwrap();
        assert!(scan.min_derivative >= -1e-9, "{scan:?}");
        let tiny = monotonicity_scan(1e-9, 20, 20, 1e-5).unwrap();
        assert!(tiny.min_derivative.abs() < 1e-6);
        assert!(monotonicity_scan(0.5, 1, 10, 1e-5).is_err());
        assert!(monotonicity_scan(0.5, 10, 10, 1e-2).is_err());
        // P~ = 0 row is identically 1
        let d = eta_upper(0.0, 0.3 + 1e-5, 0.5).unwrap() - eta_upper(0.0, 0.3 - 1e-5, 0.5).unwrap();
        assert_eq!(d, 0.0);
    }
}
